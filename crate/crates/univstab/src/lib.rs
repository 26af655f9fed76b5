//! Universal stability spaces for compactified Jacobians over the moduli
//! space of stable pointed curves, done combinatorially and exactly.
//!
//! * [`graphs`]: stable marked graphs, isomorphism, enumeration.
//! * [`picard`]: relative Picard generators and their multidegrees.
//! * [`local_stability`]: stability of sheaves on one nodal curve.
//! * [`universal_stability`]: the stability space, its walls, chambers and
//!   the extended Picard action.
//! * [`abel_jacobi`]: extension of Abel-Jacobi sections.
//!
//! ```
//! use univstab::graphs::{enumerate_stable_graphs, Bounds};
//! let graphs = enumerate_stable_graphs(2, 0, &Bounds::default()).unwrap();
//! assert_eq!(graphs.len(), 7);
//! ```

pub mod abel_jacobi;
pub mod cli;
pub mod error;
pub mod graphs;
pub mod linalg;
pub mod local_stability;
pub mod picard;
pub mod rational;
pub mod universal_stability;

pub use error::{Error, Result};
pub use rational::Q;

/// The book chapters, compiled so their snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/picard.md")]
    mod picard {}
    #[doc = include_str!("../../../book/src/local-stability.md")]
    mod local_stability {}
    #[doc = include_str!("../../../book/src/universal-space.md")]
    mod universal_space {}
    #[doc = include_str!("../../../book/src/chambers.md")]
    mod chambers {}
    #[doc = include_str!("../../../book/src/abel-jacobi.md")]
    mod abel_jacobi {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

//! Stable marked graphs: validation, contraction, isomorphism, enumeration,
//! and the special two-vertex graphs that carry the coordinates.

mod canon;
mod enumerate;
mod graph;
mod labels;
mod special;

pub use canon::{
    automorphism_group_order, automorphisms, canonical_form, canonical_labeling, is_isomorphic,
    isomorphism, vertex_automorphisms, Automorphism, CanonicalForm,
};
pub use enumerate::{canonical_representative, enumerate_stable_graphs, Bounds};
pub use graph::{MarkedGraph, VertexSet};
pub use labels::{boundary_labels, vine_labels, BoundaryLabel, MarkSet, VineLabel};
pub use special::{
    collapse_to_vine, collapse_to_vine_oriented, first_section_index, make_gamma_is,
    make_gamma_j, make_vine, spanning_tree_count,
};

use super::space::{d_indices, period, Space, UniversalPhi};
use crate::error::{Error, Result};
use crate::graphs::{boundary_labels, vine_labels, BoundaryLabel, MarkSet};
use crate::rational::{floor_i, is_integer, q, Q};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeSet;

/// Affine functional `coeffs . (alpha, x) + constant` on one degree slice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub coeffs: Vec<Q>,
    pub constant: Q,
}

impl Affine {
    pub fn at(&self, coords: &[Q]) -> Q {
        self.coeffs
            .iter()
            .zip(coords)
            .fold(self.constant, |a, (c, x)| a + *c * *x)
    }

    /// Scaled so the first nonzero coefficient is 1. Constant functionals
    /// are scaled to 0 or 1.
    pub fn normalized(&self) -> Affine {
        let lead = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .copied()
            .or_else(|| (!self.constant.is_zero()).then_some(self.constant))
            .unwrap_or(Q::one());
        Affine {
            coeffs: self.coeffs.iter().map(|c| c / lead).collect(),
            constant: self.constant / lead,
        }
    }

    fn range_over(&self, lo: &[Q], hi: &[Q]) -> (Q, Q) {
        let mut a = self.constant;
        let mut b = self.constant;
        for ((c, l), h) in self.coeffs.iter().zip(lo).zip(hi) {
            let (x, y) = (*c * *l, *c * *h);
            a += x.min(y);
            b += x.max(y);
        }
        (a, b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "type")]
pub enum WallFamily {
    /// Walls `alpha_{i,S} = k - c(i)`.
    C { label: BoundaryLabel },
    /// Walls `x_S + ell (d + 1 - g - x_all) / E = k`.
    D { ell: u32, s: MarkSet },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wall {
    pub family: WallFamily,
    pub k: i64,
    /// The wall is the zero set of this functional.
    pub functional: Affine,
}

/// Offset with `alpha_{i,S} = k - c` on the walls through the `(i,S)` axis.
pub fn c_offset(g: u32, d: Q, l: BoundaryLabel) -> Q {
    if g >= 2 {
        q(2 * l.i as i64 - 1) * (d + 1 - g as i64) / (2 * g as i64 - 2)
    } else {
        d - Q::new(1, 2)
    }
}

/// The `(ell, S)` indexing the families of D-walls: `0 <= ell < E`,
/// `S` inside the sections carrying coordinates, `(ell, S) != (0, {})`.
pub fn d_families(g: u32, n: usize) -> Vec<(u32, MarkSet)> {
    if g == 0 {
        return vec![];
    }
    let idx = MarkSet::from_marks(d_indices(g, n));
    let mut out = Vec::new();
    for ell in 0..period(g) as u32 {
        for s in idx.subsets() {
            if ell > 0 || !s.is_empty() {
                out.push((ell, s));
            }
        }
    }
    out
}

/// Functional whose integer level sets are the family's walls, over all
/// coordinates `(alpha, x)`.
pub fn family_functional(g: u32, n: usize, d: Q, fam: WallFamily) -> Affine {
    let labels = boundary_labels(g, n);
    let didx = d_indices(g, n);
    let mut coeffs = vec![Q::zero(); labels.len() + didx.len()];
    match fam {
        WallFamily::C { label } => {
            let i = labels.binary_search(&label).expect("valid label");
            coeffs[i] = Q::one();
            Affine {
                coeffs,
                constant: c_offset(g, d, label),
            }
        }
        WallFamily::D { ell, s } => {
            let e = period(g);
            let slope = Q::new(ell as i64, e);
            for (k, &j) in didx.iter().enumerate() {
                let c = if s.contains(j) { Q::one() } else { Q::zero() };
                coeffs[labels.len() + k] = c - slope;
            }
            Affine {
                coeffs,
                constant: slope * (d + 1 - g as i64),
            }
        }
    }
}

pub fn all_families(g: u32, n: usize) -> Vec<WallFamily> {
    boundary_labels(g, n)
        .into_iter()
        .map(|label| WallFamily::C { label })
        .chain(d_families(g, n).into_iter().map(|(ell, s)| WallFamily::D { ell, s }))
        .collect()
}

/// Axis-aligned region in `(alpha, x)`; `None` marks an infinite side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxRegion {
    pub lo: Vec<Option<Q>>,
    pub hi: Vec<Option<Q>>,
}

impl BoxRegion {
    pub fn cube(dim: usize, lo: Q, hi: Q) -> Self {
        BoxRegion {
            lo: vec![Some(lo); dim],
            hi: vec![Some(hi); dim],
        }
    }

    fn bounds(&self, dim: usize) -> Result<(Vec<Q>, Vec<Q>)> {
        if self.lo.len() != dim || self.hi.len() != dim {
            return Err(Error::InvalidInput(format!("box must have dimension {dim}")));
        }
        let lo: Option<Vec<Q>> = self.lo.iter().copied().collect();
        let hi: Option<Vec<Q>> = self.hi.iter().copied().collect();
        match (lo, hi) {
            (Some(lo), Some(hi)) if lo.iter().zip(&hi).all(|(a, b)| a <= b) => Ok((lo, hi)),
            _ => Err(Error::UnboundedBox),
        }
    }
}

/// Every wall in degree `d` whose functional vanishes somewhere in the box.
pub fn walls_meeting_box(g: u32, n: usize, d: Q, region: &BoxRegion) -> Result<Vec<Wall>> {
    let space = Space::get(g, n)?;
    let (lo, hi) = region.bounds(space.dim_c() + space.dim_d())?;
    let mut out = Vec::new();
    for fam in all_families(g, n) {
        let f = family_functional(g, n, d, fam);
        let (a, b) = f.range_over(&lo, &hi);
        for k in a.ceil().to_integer()..=floor_i(&b) {
            out.push(Wall {
                family: fam,
                k,
                functional: Affine {
                    coeffs: f.coeffs.clone(),
                    constant: f.constant - k,
                },
            });
        }
    }
    Ok(out)
}

/// Walls obtained from first principles: on every two-vertex loopless graph,
/// the locus where the first-vertex value minus half the edge count is an
/// integer. Computed from `eval_vine` as an affine map of the coordinates.
pub fn vine_walls_meeting_box(g: u32, n: usize, d: Q, region: &BoxRegion) -> Result<Vec<Affine>> {
    let space = Space::get(g, n)?;
    let dim = space.dim_c() + space.dim_d();
    let (lo, hi) = region.bounds(dim)?;
    let origin = UniversalPhi::zero(g, n, d)?;
    let mut out = BTreeSet::new();
    for label in vine_labels(g, n) {
        let base = space.eval_vine(&origin, label)?.0;
        let coeffs: Vec<Q> = (0..dim)
            .map(|k| {
                let mut c = vec![Q::zero(); dim];
                c[k] = Q::one();
                space
                    .eval_vine(&origin.with_coords(d, &c), label)
                    .map(|v| v.0 - base)
            })
            .collect::<Result<_>>()?;
        let f = Affine {
            coeffs,
            constant: base - Q::new(label.alpha as i64, 2),
        };
        let (a, b) = f.range_over(&lo, &hi);
        for k in a.ceil().to_integer()..=floor_i(&b) {
            out.insert(
                Affine {
                    coeffs: f.coeffs.clone(),
                    constant: f.constant - k,
                }
                .normalized(),
            );
        }
    }
    Ok(out.into_iter().collect())
}

/// Off every wall.
pub fn is_nondegenerate(phi: &UniversalPhi) -> Result<bool> {
    Space::get(phi.g, phi.n)?;
    let coords = phi.coords();
    Ok(all_families(phi.g, phi.n)
        .into_iter()
        .all(|fam| !is_integer(&family_functional(phi.g, phi.n, phi.d, fam).at(&coords))))
}

/// Whether degree `d` has any nondegenerate point. Only `n = 0` can fail:
/// there the D-walls are constant and cover everything when they hit.
pub fn exists_nondegenerate(g: u32, n: usize, d: Q) -> Result<bool> {
    Space::get(g, n)?;
    if n > 0 || g < 2 {
        return Ok(true);
    }
    Ok(d_families(g, n).into_iter().all(|(ell, s)| {
        let f = family_functional(g, n, d, WallFamily::D { ell, s });
        !is_integer(&f.constant)
    }))
}

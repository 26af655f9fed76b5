//! Stability of rank-1 torsion-free sheaves on a single nodal curve, seen
//! through its dual graph.
//!
//! A sheaf class is a multidegree `m` together with the set `N` of nodes
//! where the sheaf fails to be locally free. The total degree is
//! `sum(m) - |N|`. On a subcurve `Y` the degree is
//! `sum_Y(m) - |N inside Y| - |N on the boundary of Y|`, which makes the
//! degrees of `Y` and its complement add up to `d - delta_Y`.

use crate::error::{Error, Result};
use crate::graphs::{MarkedGraph, VertexSet};
use crate::picard::omega_multidegree;
use crate::rational::{self, floor_i, is_integer, q, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// A stability parameter on one graph: one rational per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalPhi {
    #[serde(with = "rational::vec_as_string")]
    pub values: Vec<Q>,
}

impl LocalPhi {
    pub fn new(values: Vec<Q>) -> Self {
        LocalPhi { values }
    }

    pub fn degree(&self) -> Q {
        self.values.iter().fold(Q::zero(), |a, b| a + b)
    }

    pub fn sum_over(&self, set: VertexSet) -> Q {
        self.values
            .iter()
            .enumerate()
            .filter(|&(v, _)| set >> v & 1 == 1)
            .fold(Q::zero(), |a, (_, b)| a + b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SheafClass {
    pub m: Vec<i64>,
    #[serde(rename = "nonfree_edges", default)]
    pub nonfree: BTreeSet<usize>,
}

impl SheafClass {
    pub fn line_bundle(m: Vec<i64>) -> Self {
        SheafClass {
            m,
            nonfree: BTreeSet::new(),
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.m.iter().sum::<i64>() - self.nonfree.len() as i64
    }

    /// Degree of the restriction to the subcurve spanned by `set`.
    pub fn subgraph_degree(&self, graph: &MarkedGraph, set: VertexSet) -> i64 {
        let inside: i64 = (0..self.m.len())
            .filter(|&v| set >> v & 1 == 1)
            .map(|v| self.m[v])
            .sum();
        let touched = self
            .nonfree
            .iter()
            .filter(|&&e| {
                let (a, b) = graph.edges()[e];
                set >> a & 1 == 1 || set >> b & 1 == 1
            })
            .count() as i64;
        inside - touched
    }

    /// Number of nonfree nodes on the boundary of `set`.
    pub fn delta(&self, graph: &MarkedGraph, set: VertexSet) -> usize {
        self.nonfree
            .iter()
            .filter(|&&e| {
                let (a, b) = graph.edges()[e];
                (set >> a & 1) != (set >> b & 1)
            })
            .count()
    }

    /// Count of nonfree branches at each vertex (a loop counts twice).
    pub fn branch_counts(&self, graph: &MarkedGraph) -> Vec<i64> {
        let mut b = vec![0; graph.num_vertices()];
        for &e in &self.nonfree {
            let (u, v) = graph.edges()[e];
            b[u] += 1;
            b[v] += 1;
        }
        b
    }

    /// Image under tensoring with a line bundle of multidegree `shift`,
    /// preceded by dualizing when `invert` is set.
    pub fn transform(&self, graph: &MarkedGraph, shift: &[i64], invert: bool) -> SheafClass {
        let b = self.branch_counts(graph);
        let m = self
            .m
            .iter()
            .zip(shift)
            .zip(b)
            .map(|((&m, &s), b)| if invert { -m + b + s } else { m + s })
            .collect();
        SheafClass {
            m,
            nonfree: self.nonfree.clone(),
        }
    }
}

fn check_shapes(phi: &LocalPhi, graph: &MarkedGraph, f: &SheafClass) -> Result<()> {
    let nv = graph.num_vertices();
    if phi.values.len() != nv || f.m.len() != nv {
        return Err(Error::InvalidInput("length does not match vertex count".into()));
    }
    if let Some(&e) = f.nonfree.iter().find(|&&e| e >= graph.num_edges()) {
        return Err(Error::InvalidInput(format!("edge {e} out of range")));
    }
    if q(f.total_degree()) != phi.degree() {
        return Err(Error::DegreeMismatch(format!(
            "sheaf has degree {}, parameter has degree {}",
            f.total_degree(),
            rational::fmt_q(&phi.degree())
        )));
    }
    Ok(())
}

/// `(deg_Y F - sum_Y phi + delta/2, (cut - delta)/2)` for the subcurve `Y`.
fn excess(phi: &LocalPhi, graph: &MarkedGraph, f: &SheafClass, set: VertexSet) -> (Q, Q) {
    let delta = f.delta(graph, set) as i64;
    let cut = graph.cut_size(set) as i64;
    let value = q(f.subgraph_degree(graph, set)) - phi.sum_over(set) + Q::new(delta, 2);
    (value, Q::new(cut - delta, 2))
}

fn check_all(phi: &LocalPhi, graph: &MarkedGraph, f: &SheafClass, strict: bool) -> bool {
    (1..graph.all_vertices()).all(|set| {
        let (v, bound) = excess(phi, graph, f, set);
        if strict {
            v.abs() < bound
        } else {
            v.abs() <= bound
        }
    })
}

pub fn is_stable(phi: &LocalPhi, graph: &MarkedGraph, f: &SheafClass) -> Result<bool> {
    check_shapes(phi, graph, f)?;
    Ok(check_all(phi, graph, f, true))
}

pub fn is_semistable(phi: &LocalPhi, graph: &MarkedGraph, f: &SheafClass) -> Result<bool> {
    check_shapes(phi, graph, f)?;
    Ok(check_all(phi, graph, f, false))
}

/// A subcurve on which the strict inequality fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub subgraph: Vec<usize>,
    #[serde(with = "rational::as_string")]
    pub excess: Q,
    #[serde(with = "rational::as_string")]
    pub bound: Q,
}

/// Every vertex subset where `f` fails to be strictly stable, with
/// `|excess| >= bound`.
pub fn violations(phi: &LocalPhi, graph: &MarkedGraph, f: &SheafClass) -> Result<Vec<Violation>> {
    check_shapes(phi, graph, f)?;
    Ok((1..graph.all_vertices())
        .filter_map(|set| {
            let (excess, bound) = excess(phi, graph, f, set);
            (excess.abs() >= bound).then(|| Violation {
                subgraph: (0..graph.num_vertices()).filter(|v| set >> v & 1 == 1).collect(),
                excess,
                bound,
            })
        })
        .collect())
}

/// `ell(Y, k)(phi) = k - sum_Y phi + cut(Y)/2`.
pub fn ell(graph: &MarkedGraph, set: VertexSet, k: i64, phi: &LocalPhi) -> Q {
    q(k) - phi.sum_over(set) + Q::new(graph.cut_size(set) as i64, 2)
}

/// True iff no `ell(Y, k)` vanishes at `phi` for an elementary `Y`.
pub fn is_nondegenerate_local(phi: &LocalPhi, graph: &MarkedGraph) -> bool {
    graph
        .elementary_subgraphs()
        .into_iter()
        .all(|set| !is_integer(&ell(graph, set, 0, phi)))
}

fn integer_degree(phi: &LocalPhi) -> Result<i64> {
    let d = phi.degree();
    if !is_integer(&d) {
        return Err(Error::NonIntegerDegree(rational::fmt_q(&d)));
    }
    Ok(d.to_integer())
}

fn scan(
    phi: &LocalPhi,
    graph: &MarkedGraph,
    include_nonfree: bool,
    strict: bool,
) -> Result<Vec<SheafClass>> {
    let nv = graph.num_vertices();
    if phi.values.len() != nv {
        return Err(Error::InvalidInput("length does not match vertex count".into()));
    }
    let d = integer_degree(phi)?;
    let ne = graph.num_edges();
    let subsets: Vec<u32> = if include_nonfree {
        if ne > 20 {
            return Err(Error::BoundsExceeded(format!("{ne} edges")));
        }
        (0..1u32 << ne).collect()
    } else {
        vec![0]
    };
    let mut out = Vec::new();
    for nmask in subsets {
        let nonfree: BTreeSet<usize> = (0..ne).filter(|&e| nmask >> e & 1 == 1).collect();
        let probe = SheafClass {
            m: vec![0; nv],
            nonfree: nonfree.clone(),
        };
        // Each vertex alone already bounds its own degree.
        let ranges: Vec<(i64, i64)> = (0..nv)
            .map(|v| {
                let set = 1u64 << v;
                let delta = probe.delta(graph, set) as i64;
                let cut = graph.cut_size(set) as i64;
                let touched = -probe.subgraph_degree(graph, set);
                let center = phi.values[v] + q(touched) - Q::new(delta, 2);
                let half = Q::new(cut - delta, 2);
                ((center - half).ceil().to_integer(), floor_i(&(center + half)))
            })
            .collect();
        if ranges.iter().any(|&(a, b)| a > b) {
            continue;
        }
        let target = d + nonfree.len() as i64;
        let mut m = vec![0i64; nv];
        let mut idx: Vec<i64> = ranges[..nv - 1].iter().map(|r| r.0).collect();
        'outer: loop {
            let partial: i64 = idx.iter().sum();
            let last = target - partial;
            if ranges[nv - 1].0 <= last && last <= ranges[nv - 1].1 {
                m[..nv - 1].copy_from_slice(&idx);
                m[nv - 1] = last;
                let f = SheafClass {
                    m: m.clone(),
                    nonfree: nonfree.clone(),
                };
                if check_all(phi, graph, &f, strict) {
                    out.push(f);
                }
            }
            for k in 0..nv - 1 {
                if idx[k] < ranges[k].1 {
                    idx[k] += 1;
                    continue 'outer;
                }
                idx[k] = ranges[k].0;
            }
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// Every `phi`-stable class of total degree `sum(phi)`; only line bundles
/// unless `include_nonfree`.
pub fn stable_sheaf_classes(
    phi: &LocalPhi,
    graph: &MarkedGraph,
    include_nonfree: bool,
) -> Result<Vec<SheafClass>> {
    scan(phi, graph, include_nonfree, true)
}

pub fn semistable_sheaf_classes(
    phi: &LocalPhi,
    graph: &MarkedGraph,
    include_nonfree: bool,
) -> Result<Vec<SheafClass>> {
    scan(phi, graph, include_nonfree, false)
}

/// Bounds `lower < sum_Y phi - cut(Y)/2 < lower + 1` for one elementary `Y`,
/// i.e. `ell(Y, lower) < 0 < ell(Y, lower + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberBound {
    pub subgraph: VertexSet,
    pub lower: i64,
}

/// The open chamber of the local arrangement containing `phi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalChamber {
    #[serde(with = "rational::as_string")]
    pub degree: Q,
    pub bounds: Vec<ChamberBound>,
}

impl LocalChamber {
    pub fn contains(&self, graph: &MarkedGraph, phi: &LocalPhi) -> bool {
        phi.degree() == self.degree
            && self.bounds.iter().all(|b| {
                ell(graph, b.subgraph, b.lower, phi) < Q::zero()
                    && ell(graph, b.subgraph, b.lower + 1, phi) > Q::zero()
            })
    }

    /// For a two-vertex graph: the first-vertex interval of the chamber.
    pub fn first_vertex_interval(&self, graph: &MarkedGraph) -> Option<(Q, Q)> {
        if graph.num_vertices() != 2 {
            return None;
        }
        let b = self.bounds.iter().find(|b| b.subgraph == 1)?;
        let half = Q::new(graph.cut_size(1) as i64, 2);
        Some((q(b.lower) + half, q(b.lower + 1) + half))
    }
}

pub fn local_chamber(phi: &LocalPhi, graph: &MarkedGraph) -> Result<LocalChamber> {
    if phi.values.len() != graph.num_vertices() {
        return Err(Error::InvalidInput("length does not match vertex count".into()));
    }
    let mut bounds = Vec::new();
    for set in graph.elementary_subgraphs() {
        let s = -ell(graph, set, 0, phi);
        if is_integer(&s) {
            return Err(Error::Degenerate(format!("wall through subgraph {set:#b}")));
        }
        bounds.push(ChamberBound {
            subgraph: set,
            lower: floor_i(&s),
        });
    }
    Ok(LocalChamber {
        degree: phi.degree(),
        bounds,
    })
}

/// Parameter of the slope stability attached to an ample class `A` and a
/// twisting class `M`: `(d+1-g+m)/a * A + omega/2 - M`.
pub fn phi_from_polarization(
    deg_a: &[i64],
    deg_m: &[i64],
    d: i64,
    graph: &MarkedGraph,
) -> Result<LocalPhi> {
    let nv = graph.num_vertices();
    if deg_a.len() != nv || deg_m.len() != nv {
        return Err(Error::InvalidInput("length does not match vertex count".into()));
    }
    let a: i64 = deg_a.iter().sum();
    if a <= 0 || deg_a.iter().any(|&x| x <= 0) {
        return Err(Error::InvalidInput("polarization must be positive on every vertex".into()));
    }
    let m: i64 = deg_m.iter().sum();
    let factor = Q::new(d + 1 - graph.genus() + m, a);
    let w = omega_multidegree(graph);
    Ok(LocalPhi::new(
        (0..nv)
            .map(|v| factor * deg_a[v] + Q::new(w[v], 2) - deg_m[v])
            .collect(),
    ))
}

/// Parameter attached to a vector bundle of rank `r`: `E/r + omega/2`.
pub fn phi_from_vector_bundle(deg_e: &[i64], r: i64, graph: &MarkedGraph) -> Result<LocalPhi> {
    if deg_e.len() != graph.num_vertices() || r <= 0 {
        return Err(Error::InvalidInput("bad vector bundle data".into()));
    }
    let w = omega_multidegree(graph);
    Ok(LocalPhi::new(
        deg_e
            .iter()
            .zip(w)
            .map(|(&e, w)| Q::new(e, r) + Q::new(w, 2))
            .collect(),
    ))
}

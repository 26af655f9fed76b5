//! Combinatorics of the Abel-Jacobi sections `omega^{-k}(sum d_j p_j)`:
//! their stability parameter, the polytope where they stay stable on every
//! vine, extension and indeterminacy, and the twist that repairs them over
//! the separating boundary.

use crate::error::{Error, Result};
use crate::graphs::{boundary_labels, make_vine, vine_labels, BoundaryLabel, MarkedGraph, VineLabel};
use crate::picard::{coordinate_graph, omega_multidegree};
use crate::rational::{floor_i, q, Q};
use crate::universal_stability::{is_nondegenerate, period, Space, UniversalPhi};
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AJData {
    pub k: i64,
    pub d: Vec<i64>,
}

impl AJData {
    /// `k (2 - 2g) + sum d_j`.
    pub fn degree(&self, g: u32) -> i64 {
        self.k * (2 - 2 * g as i64) + self.d.iter().sum::<i64>()
    }
}

/// Multidegree of `omega^{-k}(sum d_j p_j)` on a graph.
pub fn od_multidegree(aj: &AJData, graph: &MarkedGraph) -> Result<Vec<i64>> {
    if aj.d.len() != graph.num_markings() {
        return Err(Error::InvalidInput("d-vector length must equal n".into()));
    }
    let mut out: Vec<i64> = omega_multidegree(graph).into_iter().map(|w| -aj.k * w).collect();
    for (j, &dj) in aj.d.iter().enumerate() {
        out[graph.markings()[j]] += dj;
    }
    Ok(out)
}

/// The parameter whose value on every graph is the multidegree of the
/// section's line bundle.
pub fn phi_kd(g: u32, n: usize, aj: &AJData) -> Result<UniversalPhi> {
    if aj.d.len() != n {
        return Err(Error::InvalidInput("d-vector length must equal n".into()));
    }
    let space = Space::get(g, n)?;
    let d = q(aj.degree(g));
    let coords: Vec<Q> = space
        .basis
        .coordinates
        .iter()
        .map(|&c| {
            let graph = coordinate_graph(g, n, c);
            let m = od_multidegree(aj, &graph).expect("length checked");
            q(m[0]) - space.canonical_multidegree(d, &graph)[0]
        })
        .collect();
    Ok(UniversalPhi::zero(g, n, d)?.with_coords(d, &coords))
}

fn check(phi: &UniversalPhi, aj: &AJData) -> Result<()> {
    if aj.d.len() != phi.n {
        return Err(Error::InvalidInput("d-vector length must equal n".into()));
    }
    if phi.d != q(aj.degree(phi.g)) {
        return Err(Error::DegreeMismatch(format!(
            "parameter degree {} but section degree {}",
            crate::rational::fmt_q(&phi.d),
            aj.degree(phi.g)
        )));
    }
    Ok(())
}

/// Whether the section's multidegree is `phi`-stable on the vine `label`.
fn stable_on(phi: &UniversalPhi, aj: &AJData, label: VineLabel) -> Result<bool> {
    let space = Space::get(phi.g, phi.n)?;
    let (first, _) = space.eval_vine(phi, label)?;
    let graph = make_vine(phi.g, phi.n, label)?;
    let m = od_multidegree(aj, &graph)?;
    Ok((first - m[0]).abs() < Q::new(label.alpha as i64, 2))
}

/// `phi` lies in the polytope cut out by stability of the section on every
/// loopless two-vertex graph.
pub fn q_contains(phi: &UniversalPhi, aj: &AJData) -> Result<bool> {
    check(phi, aj)?;
    for label in vine_labels(phi.g, phi.n) {
        if !stable_on(phi, aj, label)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Vines with at least two edges on which the section is not `phi`-stable.
pub fn indeterminacy_strata(phi: &UniversalPhi, aj: &AJData) -> Result<Vec<VineLabel>> {
    check(phi, aj)?;
    if !is_nondegenerate(phi)? {
        return Err(Error::Degenerate("parameter lies on a wall".into()));
    }
    let mut out = Vec::new();
    for label in vine_labels(phi.g, phi.n).into_iter().filter(|l| l.alpha >= 2) {
        if !stable_on(phi, aj, label)? {
            out.push(label);
        }
    }
    Ok(out)
}

/// The section extends over the whole boundary once twisted along the
/// separating divisors.
pub fn extends(phi: &UniversalPhi, aj: &AJData) -> Result<bool> {
    Ok(indeterminacy_strata(phi, aj)?.is_empty())
}

/// Coefficients `a_{i,S}` of the twist by `C^-_{i,S}` that makes the
/// section stable on every one-edge vine.
pub fn od_phi_coefficients(phi: &UniversalPhi, aj: &AJData) -> Result<BTreeMap<BoundaryLabel, i64>> {
    check(phi, aj)?;
    let space = Space::get(phi.g, phi.n)?;
    let mut out = BTreeMap::new();
    for l in boundary_labels(phi.g, phi.n) {
        let label = VineLabel {
            alpha: 1,
            i: l.i,
            s: l.s,
        };
        let (first, _) = space.eval_vine(phi, label)?;
        let m = od_multidegree(aj, &make_vine(phi.g, phi.n, label)?)?;
        let rounded = floor_i(&(first + Q::new(1, 2)));
        out.insert(l, rounded - m[0]);
    }
    Ok(out)
}

/// Multidegree of the twisted section on a vine.
pub fn od_phi_multidegree(phi: &UniversalPhi, aj: &AJData, label: VineLabel) -> Result<Vec<i64>> {
    let coeffs = od_phi_coefficients(phi, aj)?;
    let graph = make_vine(phi.g, phi.n, label)?;
    let mut m = od_multidegree(aj, &graph)?;
    if label.alpha == 1 {
        let canon = label.canonical(phi.g, phi.n);
        if let Some(&a) = canon.boundary().and_then(|b| coeffs.get(&b)) {
            let sign = if canon == label { 1 } else { -1 };
            m[0] += sign * a;
            m[1] -= sign * a;
        }
    }
    Ok(m)
}

/// `phi_kd` moved off the walls by a small deterministic offset: `eps` on
/// every alpha, and on `x` first uniformly, then with geometric weights if
/// the uniform choice stays on a wall.
pub fn perturbed_phi_kd(g: u32, n: usize, aj: &AJData) -> Result<UniversalPhi> {
    let base = phi_kd(g, n, aj)?;
    let mut l = 2 * period(g);
    if g >= 2 {
        l = l.lcm(&(2 * g as i64 - 2));
    }
    let eps = Q::new(1, 4 * l);
    let m = base.x.len() as i64;
    let ratio = Q::new(1, 2 * period(g) * m.max(1) + 1);
    let uniform: Vec<Q> = vec![Q::from_integer(1); base.x.len()];
    let geometric: Vec<Q> = (0..base.x.len())
        .scan(Q::from_integer(1), |w, _| {
            let cur = *w;
            *w *= ratio;
            Some(cur)
        })
        .collect();
    for weights in [uniform, geometric] {
        let mut phi = base.clone();
        phi.alpha.iter_mut().for_each(|a| *a += eps);
        for (x, w) in phi.x.iter_mut().zip(&weights) {
            *x += eps * w;
        }
        if is_nondegenerate(&phi)? {
            return Ok(phi);
        }
    }
    Err(Error::Degenerate(format!(
        "no nondegenerate parameter near the section in degree {}",
        aj.degree(g)
    )))
}

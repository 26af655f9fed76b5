use super::action::{
    degree_preserving_inversion, lambda_action, normalize, normalize_fixed_degree, GroupElement,
};
use super::arrangement::chambers_in_box;
use super::space::{cell_widths, Space, UniversalPhi};
use super::walls::{
    all_families, c_offset, d_families, exists_nondegenerate, family_functional, is_nondegenerate,
    Affine, WallFamily,
};
use crate::error::{Error, Result};
use crate::rational::{self, floor_i, q, Q};
use serde::Serialize;
use std::collections::BTreeMap;

/// Identifies a chamber: the degree and, for every wall family, which pair
/// of consecutive walls the chamber lies between.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ChamberKey {
    pub g: u32,
    pub n: usize,
    #[serde(with = "rational::as_string")]
    pub d: Q,
    /// `floor(alpha + c)` per boundary label.
    pub alpha_cells: Vec<i64>,
    /// Floor of each D-family functional.
    pub d_cells: Vec<i64>,
}

/// A chamber, its image in the fundamental domain, and the element moving
/// it there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chamber {
    pub key: ChamberKey,
    pub normal_key: ChamberKey,
    pub witness: GroupElement,
}

fn require_nondegenerate(phi: &UniversalPhi) -> Result<()> {
    if !is_nondegenerate(phi)? {
        return Err(Error::Degenerate("parameter lies on a wall".into()));
    }
    Ok(())
}

pub fn chamber_key(phi: &UniversalPhi) -> Result<ChamberKey> {
    require_nondegenerate(phi)?;
    let coords = phi.coords();
    let space = Space::get(phi.g, phi.n)?;
    let alpha_cells = space
        .labels
        .iter()
        .zip(&phi.alpha)
        .map(|(&l, a)| floor_i(&(*a + c_offset(phi.g, phi.d, l))))
        .collect();
    let d_cells = d_families(phi.g, phi.n)
        .into_iter()
        .map(|(ell, s)| floor_i(&family_functional(phi.g, phi.n, phi.d, WallFamily::D { ell, s }).at(&coords)))
        .collect();
    Ok(ChamberKey {
        g: phi.g,
        n: phi.n,
        d: phi.d,
        alpha_cells,
        d_cells,
    })
}

pub fn chamber_of(phi: &UniversalPhi) -> Result<Chamber> {
    let key = chamber_key(phi)?;
    let (normal, witness) = normalize(phi)?;
    Ok(Chamber {
        key,
        normal_key: chamber_key(&normal)?,
        witness,
    })
}

pub fn same_chamber(a: &UniversalPhi, b: &UniversalPhi) -> Result<bool> {
    Ok(chamber_key(a)? == chamber_key(b)?)
}

/// A chamber of the fundamental cell in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberRep {
    pub key: ChamberKey,
    /// Interior point: vertex average in `x`, cell centre in `alpha`.
    pub phi: UniversalPhi,
    /// Vertices of the `x`-projection.
    #[serde(serialize_with = "ser_points")]
    pub vertices: Vec<Vec<Q>>,
}

fn ser_points<S: serde::Serializer>(pts: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize;
    pts.iter()
        .map(|p| p.iter().map(rational::fmt_q).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .serialize(s)
}

/// The D-walls crossing the open fundamental cell in degree `d`,
/// as functionals of `x` alone.
pub fn d_walls_in_cell(g: u32, n: usize, d: Q) -> Result<Vec<(WallFamily, i64, Affine)>> {
    walls_in_cell(g, n, d, false)
}

/// Like [`d_walls_in_cell`] but for the closed cell, so walls along the
/// boundary and through corners are included too.
pub fn d_walls_meeting_cell(g: u32, n: usize, d: Q) -> Result<Vec<(WallFamily, i64, Affine)>> {
    walls_in_cell(g, n, d, true)
}

fn walls_in_cell(g: u32, n: usize, d: Q, closed: bool) -> Result<Vec<(WallFamily, i64, Affine)>> {
    let space = Space::get(g, n)?;
    let nc = space.dim_c();
    let m = space.dim_d();
    let widths = cell_widths(g, n);
    let mut out = Vec::new();
    for (ell, s) in d_families(g, n) {
        let fam = WallFamily::D { ell, s };
        let f = family_functional(g, n, d, fam);
        let fx = Affine {
            coeffs: f.coeffs[nc..].to_vec(),
            constant: f.constant,
        };
        let mut lo = fx.constant;
        let mut hi = fx.constant;
        for (c, &w) in fx.coeffs.iter().zip(&widths) {
            if *c > q(0) {
                hi += *c * w;
            } else {
                lo += *c * w;
            }
        }
        if m == 0 {
            continue;
        }
        let (first, last) = if closed {
            (lo.ceil().to_integer(), floor_i(&hi))
        } else {
            (floor_i(&lo) + 1, hi.ceil().to_integer() - 1)
        };
        for k in first..=last {
            out.push((
                fam,
                k,
                Affine {
                    coeffs: fx.coeffs.clone(),
                    constant: fx.constant - k,
                },
            ));
        }
    }
    Ok(out)
}

/// Every chamber of the fundamental cell of degree `d`, sorted by key.
/// `max_dim` bounds the number of `x` coordinates.
pub fn enumerate_chambers(g: u32, n: usize, d: Q, max_dim: usize) -> Result<Vec<ChamberRep>> {
    let space = Space::get(g, n)?;
    let m = space.dim_d();
    if m > max_dim {
        return Err(Error::DimensionTooLarge(m));
    }
    if !exists_nondegenerate(g, n, d)? {
        return Ok(vec![]);
    }
    let alpha: Vec<Q> = space
        .labels
        .iter()
        .map(|&l| Q::new(1, 2) - c_offset(g, d, l))
        .collect();
    let cells = if m == 0 {
        vec![(vec![], vec![])]
    } else {
        let planes: Vec<Affine> = d_walls_in_cell(g, n, d)?.into_iter().map(|w| w.2).collect();
        let hi: Vec<Q> = cell_widths(g, n).into_iter().map(q).collect();
        chambers_in_box(&vec![q(0); m], &hi, &planes)
            .into_iter()
            .map(|c| (c.interior, c.vertices))
            .collect()
    };
    let mut out = Vec::new();
    for (x, vertices) in cells {
        let phi = UniversalPhi {
            g,
            n,
            d,
            alpha: alpha.clone(),
            x,
        };
        let key = chamber_key(&phi)?;
        let mut vertices = vertices;
        vertices.sort();
        out.push(ChamberRep { key, phi, vertices });
    }
    out.sort_by(|a, b| a.key.cmp(&b.key));
    out.dedup_by(|a, b| a.key == b.key);
    Ok(out)
}

/// How the inversion permutes the chambers of a fundamental domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSummary {
    pub chambers: usize,
    pub orbits: usize,
    pub fixed: usize,
    pub transitive: bool,
    pub free: bool,
    /// Orbit id of each chamber, in chamber order.
    pub orbit_of: Vec<usize>,
}

fn summarize(reps: &[ChamberRep], image: impl Fn(&UniversalPhi) -> Result<ChamberKey>) -> Result<OrbitSummary> {
    let index: BTreeMap<&ChamberKey, usize> = reps.iter().enumerate().map(|(i, r)| (&r.key, i)).collect();
    let mut perm = Vec::with_capacity(reps.len());
    for r in reps {
        let k = image(&r.phi)?;
        let j = *index
            .get(&k)
            .ok_or_else(|| Error::InvalidInput("image chamber missing from fundamental domain".into()))?;
        perm.push(j);
    }
    if (0..perm.len()).any(|i| perm[perm[i]] != i) {
        return Err(Error::InvalidInput("inversion does not act as an involution".into()));
    }
    let mut orbit_of = vec![usize::MAX; perm.len()];
    let mut orbits = 0;
    for i in 0..perm.len() {
        if orbit_of[i] == usize::MAX {
            orbit_of[i] = orbits;
            orbit_of[perm[i]] = orbits;
            orbits += 1;
        }
    }
    let fixed = (0..perm.len()).filter(|&i| perm[i] == i).count();
    Ok(OrbitSummary {
        chambers: perm.len(),
        orbits,
        fixed,
        transitive: orbits == 1,
        free: fixed == 0,
        orbit_of,
    })
}

/// Degrees representing every degree class up to translation.
pub fn base_degrees(g: u32, n: usize) -> Result<Vec<i64>> {
    Space::get(g, n)?;
    if n >= 1 {
        return Ok(vec![0]);
    }
    let step = 2 * g as i64 - 2;
    let mut out = Vec::new();
    for d in 0..step {
        if exists_nondegenerate(g, n, q(d))? {
            out.push(d);
        }
    }
    Ok(out)
}

/// Chambers of the fundamental domain over all degrees.
pub fn fundamental_chambers(g: u32, n: usize, max_dim: usize) -> Result<Vec<ChamberRep>> {
    let mut reps = Vec::new();
    for d in base_degrees(g, n)? {
        reps.extend(enumerate_chambers(g, n, q(d), max_dim)?);
    }
    reps.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(reps)
}

/// Orbits of the full group on chambers of all degrees.
pub fn orbit_summary(g: u32, n: usize, max_dim: usize) -> Result<OrbitSummary> {
    let reps = fundamental_chambers(g, n, max_dim)?;
    let inv = GroupElement::inversion(g, n);
    summarize(&reps, |phi| chamber_key(&normalize(&lambda_action(&inv, phi)?)?.0))
}

/// Orbits of the stabilizer of degree `d` on the chambers of degree `d`.
pub fn orbit_summary_fixed_degree(g: u32, n: usize, d: i64, max_dim: usize) -> Result<OrbitSummary> {
    let reps = enumerate_chambers(g, n, q(d), max_dim)?;
    match degree_preserving_inversion(g, n, d) {
        Some(inv) => summarize(&reps, |phi| {
            chamber_key(&normalize_fixed_degree(&lambda_action(&inv, phi)?)?.0)
        }),
        None => Ok(OrbitSummary {
            chambers: reps.len(),
            orbits: reps.len(),
            fixed: 0,
            transitive: reps.len() == 1,
            free: true,
            orbit_of: (0..reps.len()).collect(),
        }),
    }
}

pub fn orbit_count(g: u32, n: usize) -> Result<usize> {
    Ok(orbit_summary(g, n, 3)?.orbits)
}

pub fn orbit_count_fixed_degree(g: u32, n: usize, d: i64) -> Result<usize> {
    Ok(orbit_summary_fixed_degree(g, n, d, 3)?.orbits)
}

pub fn is_transitive(g: u32, n: usize) -> Result<bool> {
    Ok(orbit_summary(g, n, 3)?.transitive)
}

/// No chamber is fixed by a nontrivial element.
pub fn is_free(g: u32, n: usize) -> Result<bool> {
    Ok(orbit_summary(g, n, 3)?.free)
}

/// A group element carrying the chamber of `a` onto the chamber of `b`.
pub fn is_isomorphic_over_mbar(a: &UniversalPhi, b: &UniversalPhi) -> Result<Option<GroupElement>> {
    if a.g != b.g || a.n != b.n {
        return Err(Error::InvalidInput("parameters of different types".into()));
    }
    require_nondegenerate(a)?;
    require_nondegenerate(b)?;
    let (nb, wb) = normalize(b)?;
    let kb = chamber_key(&nb)?;
    let back = wb.inverse();
    let (na, wa) = normalize(a)?;
    if chamber_key(&na)? == kb {
        return Ok(Some(back.compose(&wa)));
    }
    let inv = GroupElement::inversion(a.g, a.n);
    let (nf, wf) = normalize(&lambda_action(&inv, a)?)?;
    if chamber_key(&nf)? == kb {
        return Ok(Some(back.compose(&wf).compose(&inv)));
    }
    Ok(None)
}

/// Number of wall families, for reporting.
pub fn family_count(g: u32, n: usize) -> usize {
    all_families(g, n).len()
}

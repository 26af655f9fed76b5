use super::space::{cell_widths, Space, UniversalPhi};
use super::walls::c_offset;
use crate::error::{Error, Result};
use crate::graphs::MarkedGraph;
use crate::local_stability::SheafClass;
use crate::picard::{multidegree, twisted_section, Generator, PicardElement};
use crate::rational::{floor_i, q, Q};
use serde::{Deserialize, Serialize};

/// Element `(L, t)` of the Picard lattice extended by inversion. Acts by
/// `phi -> (-1)^t phi + deg L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElement {
    pub l: PicardElement,
    pub t: bool,
}

impl GroupElement {
    pub fn identity(g: u32, n: usize) -> Self {
        GroupElement {
            l: PicardElement::zero(g, n),
            t: false,
        }
    }

    pub fn translation(l: PicardElement) -> Self {
        GroupElement { l, t: false }
    }

    pub fn inversion(g: u32, n: usize) -> Self {
        GroupElement {
            l: PicardElement::zero(g, n),
            t: true,
        }
    }

    /// `self * other`: first `other`, then `self`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let moved = if self.t { other.l.neg() } else { other.l.clone() };
        GroupElement {
            l: self.l.add(&moved),
            t: self.t ^ other.t,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            l: if self.t { self.l.clone() } else { self.l.neg() },
            t: self.t,
        }
    }
}

pub fn lambda_action(el: &GroupElement, phi: &UniversalPhi) -> Result<UniversalPhi> {
    let space = Space::get(phi.g, phi.n)?;
    let shift = space.point_of(&el.l)?;
    let sign = if el.t { q(-1) } else { q(1) };
    let coords: Vec<Q> = phi
        .coords()
        .iter()
        .zip(shift.coords())
        .map(|(a, b)| sign * *a + b)
        .collect();
    Ok(phi.with_coords(sign * phi.d + shift.d, &coords))
}

/// Image of a sheaf class under `(L, t)`: dualize when `t`, then twist.
pub fn act_on_sheaf(el: &GroupElement, graph: &MarkedGraph, f: &SheafClass) -> Result<SheafClass> {
    let shift = multidegree(&el.l, graph)?;
    Ok(f.transform(graph, &shift, el.t))
}

/// Generator that moves the degree, and by how much.
fn degree_step(g: u32, n: usize) -> (PicardElement, i64) {
    if n >= 1 {
        (PicardElement::generator(g, n, Generator::Section(1)).unwrap(), 1)
    } else {
        (PicardElement::generator(g, n, Generator::Omega).unwrap(), 2 * g as i64 - 2)
    }
}

fn translate(phi: &UniversalPhi, l: &PicardElement, acc: &mut PicardElement) -> Result<UniversalPhi> {
    *acc = acc.add(l);
    lambda_action(&GroupElement::translation(l.clone()), phi)
}

/// Brings `phi` into the fundamental cell by translations that keep the
/// degree: `0 <= x < cell_widths` and `0 <= alpha + c < 1`.
pub fn normalize_fixed_degree(phi: &UniversalPhi) -> Result<(UniversalPhi, GroupElement)> {
    let space = Space::get(phi.g, phi.n)?;
    let mut acc = PicardElement::zero(phi.g, phi.n);
    let mut cur = phi.clone();
    let widths = cell_widths(phi.g, phi.n);
    // Coordinates past the first move by Sigma_j - Sigma_1, which pushes the
    // surplus onto x_1, so they go first.
    for k in (0..widths.len()).rev() {
        let steps = floor_i(&(cur.x[k] / widths[k]));
        if steps == 0 {
            continue;
        }
        let j = space.d_indices[k];
        let l = if k > 0 && phi.g >= 2 {
            let sec = |i| PicardElement::generator(phi.g, phi.n, Generator::Section(i));
            sec(j)?.add(&sec(space.d_indices[0])?.neg())
        } else {
            twisted_section(phi.g, phi.n, j)?
        };
        cur = translate(&cur, &l.scale(-steps), &mut acc)?;
    }
    for (k, &label) in space.labels.iter().enumerate() {
        let steps = floor_i(&(cur.alpha[k] + c_offset(phi.g, cur.d, label)));
        if steps != 0 {
            let c = PicardElement::generator(phi.g, phi.n, Generator::CPlus(label))?.scale(steps);
            cur = translate(&cur, &c, &mut acc)?;
        }
    }
    Ok((cur, GroupElement::translation(acc)))
}

/// Brings `phi` into the fundamental domain: degree in `[0, step)` where the
/// step is 1 (a section exists) or `2g - 2`, then the fundamental cell.
pub fn normalize(phi: &UniversalPhi) -> Result<(UniversalPhi, GroupElement)> {
    let (gen, step) = degree_step(phi.g, phi.n);
    let shift = floor_i(&(phi.d / step));
    let mut acc = PicardElement::zero(phi.g, phi.n);
    let cur = if shift != 0 {
        translate(phi, &gen.scale(-shift), &mut acc)?
    } else {
        phi.clone()
    };
    let (out, w) = normalize_fixed_degree(&cur)?;
    Ok((out, w.compose(&GroupElement::translation(acc))))
}

/// An inversion `(L, 1)` preserving degree `d`, if one exists.
pub fn degree_preserving_inversion(g: u32, n: usize, d: i64) -> Option<GroupElement> {
    let (gen, step) = degree_step(g, n);
    let twice = 2 * d;
    (twice % step == 0).then(|| GroupElement {
        l: gen.scale(twice / step),
        t: true,
    })
}

pub fn check_integer_degree(d: &Q) -> Result<i64> {
    if !d.is_integer() {
        return Err(Error::NonIntegerDegree(crate::rational::fmt_q(d)));
    }
    Ok(d.to_integer())
}

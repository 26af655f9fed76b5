//! The relative Picard group of the universal curve: generators, their
//! multidegrees on arbitrary stable graphs, and the basis change between
//! degree-0 generators and the stability coordinates.
//!
//! Basis used here. For `g >= 2`: the `C^+_{i,S}`, `omega` and all sections
//! `Sigma_1..Sigma_n`. For `g = 1`: the `C^+_{i,S}` and all sections. For
//! `g = 0`: the `C^+_{i,S}` and `Sigma_1`.

use crate::error::{Error, Result};
use crate::graphs::{
    boundary_labels, first_section_index, make_gamma_is, make_gamma_j, BoundaryLabel,
    MarkedGraph,
};
use crate::linalg::{self, Matrix};
use crate::rational::{q, Q};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Boundary component containing marking 1 (or of lower genus if `n = 0`).
    CPlus(BoundaryLabel),
    Omega,
    Section(usize),
    /// Degree-0 twisted section `T_j`.
    Twisted(usize),
}

/// Integer combination of basis generators, with fiber degree
/// `(2g - 2) * omega + sum(sections)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPicard", into = "RawPicard")]
pub struct PicardElement {
    pub g: u32,
    pub n: usize,
    pub omega: i64,
    pub sections: Vec<i64>,
    pub boundary: BTreeMap<BoundaryLabel, i64>,
}

#[derive(Serialize, Deserialize)]
struct RawPicard {
    g: u32,
    n: usize,
    omega: i64,
    sections: Vec<i64>,
    boundary: BTreeMap<String, i64>,
}

impl TryFrom<RawPicard> for PicardElement {
    type Error = Error;
    fn try_from(r: RawPicard) -> Result<Self> {
        let mut boundary = BTreeMap::new();
        for (k, v) in r.boundary {
            boundary.insert(BoundaryLabel::parse(&k)?, v);
        }
        let el = PicardElement {
            g: r.g,
            n: r.n,
            omega: r.omega,
            sections: r.sections,
            boundary,
        };
        el.check()?;
        Ok(el)
    }
}

impl From<PicardElement> for RawPicard {
    fn from(p: PicardElement) -> Self {
        RawPicard {
            g: p.g,
            n: p.n,
            omega: p.omega,
            sections: p.sections,
            boundary: p
                .boundary
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }
}

impl PicardElement {
    pub fn zero(g: u32, n: usize) -> Self {
        PicardElement {
            g,
            n,
            omega: 0,
            sections: vec![0; n],
            boundary: BTreeMap::new(),
        }
    }

    /// Rejects coefficients on generators outside the basis for `(g, n)`.
    pub fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(format!("Picard element: {m}")));
        if self.sections.len() != self.n {
            return bad("sections must have length n");
        }
        if self.g < 2 && self.omega != 0 {
            return bad("omega is not a basis element for g <= 1");
        }
        if self.g == 0 && self.sections.iter().skip(1).any(|&c| c != 0) {
            return bad("only Sigma_1 is a basis element for g = 0");
        }
        if let Some(l) = self.boundary.keys().find(|l| !l.is_valid(self.g, self.n)) {
            return bad(&format!("invalid boundary label {l}"));
        }
        Ok(())
    }

    pub fn generator(g: u32, n: usize, gen: Generator) -> Result<Self> {
        let mut p = PicardElement::zero(g, n);
        match gen {
            Generator::CPlus(l) => {
                p.boundary.insert(l, 1);
            }
            Generator::Omega => p.omega = 1,
            Generator::Section(j) if (1..=n).contains(&j) => p.sections[j - 1] = 1,
            Generator::Twisted(j) => return twisted_section(g, n, j),
            Generator::Section(j) => {
                return Err(Error::InvalidInput(format!("no section {j}")));
            }
        }
        p.check()?;
        Ok(p)
    }

    pub fn fiber_degree(&self) -> i64 {
        (2 * self.g as i64 - 2) * self.omega + self.sections.iter().sum::<i64>()
    }

    fn same_type(&self, o: &Self) {
        assert!(self.g == o.g && self.n == o.n, "mixed (g,n)");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_type(o);
        let mut r = self.clone();
        r.omega += o.omega;
        for (a, b) in r.sections.iter_mut().zip(&o.sections) {
            *a += b;
        }
        for (l, c) in &o.boundary {
            *r.boundary.entry(*l).or_insert(0) += c;
        }
        r.boundary.retain(|_, c| *c != 0);
        r
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut r = self.clone();
        r.omega *= k;
        r.sections.iter_mut().for_each(|c| *c *= k);
        r.boundary.values_mut().for_each(|c| *c *= k);
        r.boundary.retain(|_, c| *c != 0);
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.omega == 0 && self.sections.iter().all(|&c| c == 0) && self.boundary.is_empty()
    }
}

/// `T_j = (2g - 2) Sigma_j - omega` for `g >= 2`, `Sigma_j - Sigma_1` for `g = 1`.
pub fn twisted_section(g: u32, n: usize, j: usize) -> Result<PicardElement> {
    if g == 0 || j < first_section_index(g) || j > n {
        return Err(Error::InvalidInput(format!("T_{j} undefined for (g,n)=({g},{n})")));
    }
    let mut p = PicardElement::zero(g, n);
    if g >= 2 {
        p.sections[j - 1] = 2 * g as i64 - 2;
        p.omega = -1;
    } else {
        p.sections[j - 1] = 1;
        p.sections[0] = -1;
    }
    Ok(p)
}

/// Multidegree of the relative dualizing sheaf: `2 g(v) - 2 + val(v)`.
pub fn omega_multidegree(graph: &MarkedGraph) -> Vec<i64> {
    (0..graph.num_vertices())
        .map(|v| 2 * graph.genera()[v] as i64 - 2 + graph.valence(v) as i64)
        .collect()
}

pub fn section_multidegree(graph: &MarkedGraph, j: usize) -> Vec<i64> {
    let mut d = vec![0; graph.num_vertices()];
    d[graph.markings()[j - 1]] = 1;
    d
}

/// `C^+_{i,S}` restricted to a graph: each separating edge labelled `(i,S)`
/// contributes -1 at its `S`-side endpoint and +1 at the other one.
pub fn boundary_multidegree(graph: &MarkedGraph, label: BoundaryLabel) -> Vec<i64> {
    let mut d = vec![0; graph.num_vertices()];
    for e in 0..graph.num_edges() {
        if let Some((l, s_side)) = graph.separating_edge_label(e) {
            if l == label {
                let (a, b) = graph.edges()[e];
                let other = if a == s_side { b } else { a };
                d[s_side] -= 1;
                d[other] += 1;
            }
        }
    }
    d
}

fn check_type(graph: &MarkedGraph, g: u32, n: usize) -> Result<()> {
    if graph.genus() != g as i64 || graph.num_markings() != n {
        return Err(Error::InvalidInput(format!(
            "graph has type ({},{}), expected ({g},{n})",
            graph.genus(),
            graph.num_markings()
        )));
    }
    Ok(())
}

pub fn generator_multidegree(gen: Generator, graph: &MarkedGraph) -> Result<Vec<i64>> {
    let g = graph.genus() as u32;
    let n = graph.num_markings();
    match gen {
        Generator::CPlus(l) => {
            if !l.is_valid(g, n) {
                return Err(Error::InvalidLabel(l.to_string()));
            }
            Ok(boundary_multidegree(graph, l))
        }
        Generator::Omega => Ok(omega_multidegree(graph)),
        Generator::Section(j) => {
            if !(1..=n).contains(&j) {
                return Err(Error::InvalidInput(format!("no marking {j}")));
            }
            Ok(section_multidegree(graph, j))
        }
        Generator::Twisted(j) => multidegree(&twisted_section(g, n, j)?, graph),
    }
}

/// Multidegree of a Picard element on a graph of the same type.
pub fn multidegree(l: &PicardElement, graph: &MarkedGraph) -> Result<Vec<i64>> {
    check_type(graph, l.g, l.n)?;
    let nv = graph.num_vertices();
    let mut d = vec![0i64; nv];
    if l.omega != 0 {
        for (x, w) in d.iter_mut().zip(omega_multidegree(graph)) {
            *x += l.omega * w;
        }
    }
    for (j, &c) in l.sections.iter().enumerate() {
        if c != 0 {
            d[graph.markings()[j]] += c;
        }
    }
    if !l.boundary.is_empty() {
        for e in 0..graph.num_edges() {
            if let Some((lab, s_side)) = graph.separating_edge_label(e) {
                if let Some(&c) = l.boundary.get(&lab) {
                    let (a, b) = graph.edges()[e];
                    let other = if a == s_side { b } else { a };
                    d[s_side] -= c;
                    d[other] += c;
                }
            }
        }
    }
    Ok(d)
}

/// Which coordinate a column of the basis-change matrix measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coordinate {
    /// First-vertex value on `Gamma(i,S)`.
    Alpha(BoundaryLabel),
    /// First-vertex value on `Gamma_j`.
    X(usize),
}

/// Coordinates of the stability space for `(g, n)`, in storage order.
pub fn coordinates(g: u32, n: usize) -> Vec<Coordinate> {
    let mut out: Vec<Coordinate> = boundary_labels(g, n)
        .into_iter()
        .map(Coordinate::Alpha)
        .collect();
    if g >= 1 {
        out.extend((first_section_index(g)..=n).map(Coordinate::X));
    }
    out
}

/// The rows `{C^-_{i,S}, T_j}` with `C^- = -C^+`. A basis of the degree-0
/// part over `Q` only: for `g >= 2, n >= 2` they span a sublattice of index
/// `(2g-2)^(n-1)`, since `Sigma_j - Sigma_1` is not an integer combination.
pub fn degree_zero_basis(g: u32, n: usize) -> Vec<PicardElement> {
    coordinates(g, n)
        .into_iter()
        .map(|c| match c {
            Coordinate::Alpha(l) => PicardElement::generator(g, n, Generator::CPlus(l))
                .expect("valid label")
                .neg(),
            Coordinate::X(j) => twisted_section(g, n, j).expect("valid index"),
        })
        .collect()
}

pub fn coordinate_graph(g: u32, n: usize, c: Coordinate) -> MarkedGraph {
    match c {
        Coordinate::Alpha(l) => make_gamma_is(g, n, l).expect("valid label"),
        Coordinate::X(j) => make_gamma_j(g, n, j).expect("valid index"),
    }
}

/// Matrix whose row `r` lists the first-vertex degrees of the `r`-th
/// degree-0 basis element on each coordinate graph, with its exact inverse.
#[derive(Clone, Debug)]
pub struct BasisChange {
    pub coordinates: Vec<Coordinate>,
    pub basis: Vec<PicardElement>,
    pub matrix: Matrix,
    pub inverse: Matrix,
}

pub fn solve_basis_change(g: u32, n: usize) -> Result<BasisChange> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::InvalidInput(format!("(g,n)=({g},{n}) is not stable")));
    }
    let coords = coordinates(g, n);
    let basis = degree_zero_basis(g, n);
    let graphs: Vec<MarkedGraph> = coords.iter().map(|&c| coordinate_graph(g, n, c)).collect();
    let matrix: Matrix = basis
        .iter()
        .map(|b| {
            graphs
                .iter()
                .map(|gr| q(multidegree(b, gr).expect("same type")[0]))
                .collect()
        })
        .collect();
    let inverse = if matrix.is_empty() {
        vec![]
    } else {
        linalg::inverse(&matrix)
            .ok_or_else(|| Error::InvalidInput("basis change is singular".into()))?
    };
    Ok(BasisChange {
        coordinates: coords,
        basis,
        matrix,
        inverse,
    })
}

impl BasisChange {
    /// Coefficients on the degree-0 basis of the point with coordinates `v`.
    pub fn coefficients(&self, v: &[Q]) -> Vec<Q> {
        linalg::vec_mul(v, &self.inverse)
    }
}

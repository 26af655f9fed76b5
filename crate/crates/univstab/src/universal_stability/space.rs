use crate::error::{Error, Result};
use crate::graphs::{boundary_labels, first_section_index, BoundaryLabel, MarkSet, MarkedGraph, VineLabel};
use crate::local_stability::LocalPhi;
use crate::picard::{multidegree, omega_multidegree, solve_basis_change, BasisChange, PicardElement};
use crate::rational::{self, parse_q, q, Q};
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// A point of the stability space of degree `d`, written as its offset from
/// the canonical parameter. `alpha` is indexed like `boundary_labels(g, n)`
/// and `x` like `d_indices(g, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPhi", into = "RawPhi")]
pub struct UniversalPhi {
    pub g: u32,
    pub n: usize,
    pub d: Q,
    pub alpha: Vec<Q>,
    pub x: Vec<Q>,
}

#[derive(Serialize, Deserialize)]
struct RawPhi {
    g: u32,
    n: usize,
    d: String,
    #[serde(default)]
    alpha: BTreeMap<String, String>,
    #[serde(default)]
    x: BTreeMap<String, String>,
}

impl TryFrom<RawPhi> for UniversalPhi {
    type Error = Error;
    fn try_from(r: RawPhi) -> Result<Self> {
        let mut phi = UniversalPhi::zero(r.g, r.n, parse_q(&r.d)?)?;
        let labels = boundary_labels(r.g, r.n);
        for (k, v) in &r.alpha {
            let l = BoundaryLabel::parse(k)?;
            let idx = labels
                .iter()
                .position(|x| *x == l)
                .ok_or_else(|| Error::InvalidLabel(k.clone()))?;
            phi.alpha[idx] = parse_q(v)?;
        }
        let dix = d_indices(r.g, r.n);
        for (k, v) in &r.x {
            let j: usize = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad section index {k:?}")))?;
            let idx = dix
                .iter()
                .position(|&x| x == j)
                .ok_or_else(|| Error::InvalidLabel(format!("x_{j}")))?;
            phi.x[idx] = parse_q(v)?;
        }
        Ok(phi)
    }
}

impl From<UniversalPhi> for RawPhi {
    fn from(p: UniversalPhi) -> Self {
        RawPhi {
            g: p.g,
            n: p.n,
            d: rational::fmt_q(&p.d),
            alpha: boundary_labels(p.g, p.n)
                .into_iter()
                .zip(&p.alpha)
                .map(|(l, v)| (l.to_string(), rational::fmt_q(v)))
                .collect(),
            x: d_indices(p.g, p.n)
                .into_iter()
                .zip(&p.x)
                .map(|(j, v)| (j.to_string(), rational::fmt_q(v)))
                .collect(),
        }
    }
}

/// Sections that carry an `x` coordinate: none for `g = 0`, `2..n` for
/// `g = 1`, `1..n` otherwise.
pub fn d_indices(g: u32, n: usize) -> Vec<usize> {
    if g == 0 {
        vec![]
    } else {
        (first_section_index(g)..=n).collect()
    }
}

/// Period of the `x` coordinates: `2g - 2`, or 1 when `g = 1`.
pub fn period(g: u32) -> i64 {
    if g >= 2 {
        2 * g as i64 - 2
    } else {
        1
    }
}

/// Side lengths of the fundamental cell in the `x` coordinates. For
/// `g >= 2` the degree zero elements `Sigma_j - Sigma_1` shift `x` by
/// `e_j - e_1`, so only the first coordinate keeps the full period.
pub fn cell_widths(g: u32, n: usize) -> Vec<i64> {
    d_indices(g, n)
        .iter()
        .enumerate()
        .map(|(k, _)| if k == 0 { period(g) } else { 1 })
        .collect()
}

fn check_type(g: u32, n: usize) -> Result<()> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::InvalidInput(format!("(g,n)=({g},{n}) is not stable")));
    }
    if n > MarkSet::MAX_MARKS {
        return Err(Error::BoundsExceeded(format!("n = {n}")));
    }
    Ok(())
}

impl UniversalPhi {
    /// The canonical parameter of degree `d`.
    pub fn zero(g: u32, n: usize, d: Q) -> Result<Self> {
        check_type(g, n)?;
        Ok(UniversalPhi {
            g,
            n,
            d,
            alpha: vec![Q::zero(); boundary_labels(g, n).len()],
            x: vec![Q::zero(); d_indices(g, n).len()],
        })
    }

    pub fn coords(&self) -> Vec<Q> {
        self.alpha.iter().chain(&self.x).copied().collect()
    }

    pub fn with_coords(&self, d: Q, coords: &[Q]) -> Self {
        let na = self.alpha.len();
        UniversalPhi {
            g: self.g,
            n: self.n,
            d,
            alpha: coords[..na].to_vec(),
            x: coords[na..].to_vec(),
        }
    }

    pub fn alpha_of(&self, l: BoundaryLabel) -> Option<Q> {
        boundary_labels(self.g, self.n)
            .iter()
            .position(|x| *x == l)
            .map(|i| self.alpha[i])
    }

    pub fn x_of(&self, j: usize) -> Option<Q> {
        d_indices(self.g, self.n)
            .iter()
            .position(|&x| x == j)
            .map(|i| self.x[i])
    }

    /// Sum of `x_j` over the sections in `s` that carry a coordinate.
    pub fn x_sum(&self, s: MarkSet) -> Q {
        d_indices(self.g, self.n)
            .iter()
            .zip(&self.x)
            .filter(|(j, _)| s.contains(**j))
            .fold(Q::zero(), |a, (_, v)| a + v)
    }
}

/// Cached per-type data: coordinate labels and the inverse basis change.
#[derive(Debug)]
pub struct Space {
    pub g: u32,
    pub n: usize,
    pub labels: Vec<BoundaryLabel>,
    pub d_indices: Vec<usize>,
    pub basis: BasisChange,
}

fn cache() -> &'static Mutex<HashMap<(u32, usize), Arc<Space>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<Space>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl Space {
    pub fn get(g: u32, n: usize) -> Result<Arc<Space>> {
        check_type(g, n)?;
        if let Some(s) = cache().lock().unwrap().get(&(g, n)) {
            return Ok(s.clone());
        }
        let s = Arc::new(Space {
            g,
            n,
            labels: boundary_labels(g, n),
            d_indices: d_indices(g, n),
            basis: solve_basis_change(g, n)?,
        });
        cache().lock().unwrap().insert((g, n), s.clone());
        Ok(s)
    }

    pub fn dim_c(&self) -> usize {
        self.labels.len()
    }

    pub fn dim_d(&self) -> usize {
        self.d_indices.len()
    }

    fn check_phi(&self, phi: &UniversalPhi) -> Result<()> {
        if phi.g != self.g
            || phi.n != self.n
            || phi.alpha.len() != self.dim_c()
            || phi.x.len() != self.dim_d()
        {
            return Err(Error::InvalidInput("parameter has the wrong type".into()));
        }
        Ok(())
    }

    fn check_graph(&self, graph: &MarkedGraph) -> Result<()> {
        if graph.genus() != self.g as i64 || graph.num_markings() != self.n {
            return Err(Error::InvalidInput(format!(
                "graph has type ({},{}), expected ({},{})",
                graph.genus(),
                graph.num_markings(),
                self.g,
                self.n
            )));
        }
        graph.validate()
    }

    /// Multidegree of the canonical parameter of degree `d`.
    pub fn canonical_multidegree(&self, d: Q, graph: &MarkedGraph) -> Vec<Q> {
        if self.g >= 2 {
            let e = 2 * self.g as i64 - 2;
            omega_multidegree(graph)
                .into_iter()
                .map(|w| d * w / e)
                .collect()
        } else {
            let mut out = vec![Q::zero(); graph.num_vertices()];
            out[graph.markings()[0]] = d;
            out
        }
    }

    /// Value of `phi` on every vertex of `graph`.
    pub fn evaluate(&self, phi: &UniversalPhi, graph: &MarkedGraph) -> Result<LocalPhi> {
        self.evaluator(phi)?.at(graph)
    }

    /// Solves for the generator coefficients of `phi` once, for evaluating
    /// on many graphs.
    pub fn evaluator<'a>(&'a self, phi: &UniversalPhi) -> Result<Evaluator<'a>> {
        self.check_phi(phi)?;
        Ok(Evaluator {
            space: self,
            d: phi.d,
            coefs: self.basis.coefficients(&phi.coords()),
        })
    }

    /// Closed-form value on a two-vertex loopless graph.
    pub fn eval_vine(&self, phi: &UniversalPhi, label: VineLabel) -> Result<(Q, Q)> {
        self.check_phi(phi)?;
        let (g, n) = (self.g, self.n);
        if !label.is_valid(g, n) {
            return Err(Error::InvalidLabel(label.to_string()));
        }
        let canon = label.canonical(g, n);
        let d = phi.d;
        let first = if canon.alpha == 1 {
            let a = canon.boundary().and_then(|b| phi.alpha_of(b)).unwrap_or(Q::zero());
            if g >= 2 {
                a + d * (2 * canon.i as i64 - 1) / (2 * g as i64 - 2)
            } else {
                a + d
            }
        } else if g >= 2 {
            let slope = q(2 * canon.i as i64 - 2 + canon.alpha as i64);
            phi.x_sum(canon.s) + slope * (d - phi.x_sum(MarkSet::full(n))) / (2 * g as i64 - 2)
        } else {
            // g = 1: the first vertex carries marking 1.
            d + phi.x_sum(canon.s) - phi.x_sum(MarkSet::full(n))
        };
        Ok(if canon == label {
            (first, d - first)
        } else {
            (d - first, first)
        })
    }

    /// Coordinates and degree of `deg(L)`: the point `deg L - phi_can`.
    pub fn point_of(&self, l: &PicardElement) -> Result<UniversalPhi> {
        if l.g != self.g || l.n != self.n {
            return Err(Error::InvalidInput("Picard element has the wrong type".into()));
        }
        let e = q(l.fiber_degree());
        let coords: Vec<Q> = self
            .basis
            .coordinates
            .iter()
            .map(|&c| {
                let graph = crate::picard::coordinate_graph(self.g, self.n, c);
                let deg = multidegree(l, &graph).expect("same type");
                q(deg[0]) - self.canonical_multidegree(e, &graph)[0]
            })
            .collect();
        Ok(UniversalPhi::zero(self.g, self.n, e)?.with_coords(e, &coords))
    }
}

/// A parameter with its generator coefficients already solved.
pub struct Evaluator<'a> {
    space: &'a Space,
    d: Q,
    coefs: Vec<Q>,
}

impl Evaluator<'_> {
    pub fn at(&self, graph: &MarkedGraph) -> Result<LocalPhi> {
        let space = self.space;
        space.check_graph(graph)?;
        let (c_minus, t) = self.coefs.split_at(space.dim_c());
        let mut vals = space.canonical_multidegree(self.d, graph);
        if !t.is_empty() {
            let w = omega_multidegree(graph);
            let e = period(space.g);
            for (&j, &tj) in space.d_indices.iter().zip(t) {
                let at = graph.markings()[j - 1];
                if space.g >= 2 {
                    for (v, val) in vals.iter_mut().enumerate() {
                        *val -= tj * w[v];
                    }
                    vals[at] += tj * e;
                } else {
                    vals[at] += tj;
                    vals[graph.markings()[0]] -= tj;
                }
            }
        }
        for e in 0..graph.num_edges() {
            if let Some((lab, s_side)) = graph.separating_edge_label(e) {
                let idx = space.labels.binary_search(&lab).expect("label is valid");
                let c = c_minus[idx];
                let (a, b) = graph.edges()[e];
                let other = if a == s_side { b } else { a };
                vals[s_side] += c;
                vals[other] -= c;
            }
        }
        Ok(LocalPhi::new(vals))
    }
}

pub fn evaluate(phi: &UniversalPhi, graph: &MarkedGraph) -> Result<LocalPhi> {
    Space::get(phi.g, phi.n)?.evaluate(phi, graph)
}

pub fn eval_vine(phi: &UniversalPhi, label: VineLabel) -> Result<(Q, Q)> {
    Space::get(phi.g, phi.n)?.eval_vine(phi, label)
}

/// A parameter with random coordinates `p/den`, `|p| <= spread * den`.
pub fn random_phi<R: Rng>(g: u32, n: usize, d: Q, den: i64, spread: i64, rng: &mut R) -> Result<UniversalPhi> {
    let mut phi = UniversalPhi::zero(g, n, d)?;
    for v in phi.alpha.iter_mut().chain(phi.x.iter_mut()) {
        *v = Q::new(rng.gen_range(-spread * den..=spread * den), den);
    }
    Ok(phi)
}

//! Canonical labeling by colour refinement plus individualization.
//!
//! Vertex colours start from (genus, markings, loops, valence) and are refined
//! by the multiset of (neighbour colour, edge multiplicity) until stable.
//! Remaining ties are broken by individualizing each vertex of the first
//! non-singleton cell in turn; the lexicographically least encoding over all
//! leaves is the canonical form.

use super::graph::MarkedGraph;
use crate::error::{Error, Result};
use itertools::Itertools;
use std::fmt;

/// Isomorphism invariant encoding of a graph; displayed as lowercase hex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u16>);

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.0 {
            write!(f, "{w:04x}")?;
        }
        Ok(())
    }
}

fn initial_colors(g: &MarkedGraph) -> Vec<u32> {
    let keys: Vec<_> = (0..g.num_vertices())
        .map(|v| (g.genera()[v], g.marks_at(v).bits(), g.loops_at(v), g.valence(v)))
        .collect();
    rank(&keys)
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let sorted: Vec<K> = keys.iter().cloned().sorted().dedup().collect();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect()
}

fn refine(adj: &[Vec<usize>], colors: &mut Vec<u32>) {
    let n = colors.len();
    loop {
        let before = colors.iter().copied().sorted().dedup().count();
        let keys: Vec<(u32, Vec<(u32, usize)>)> = (0..n)
            .map(|v| {
                let nb = (0..n)
                    .filter(|&w| w != v && adj[v][w] > 0)
                    .map(|w| (colors[w], adj[v][w]))
                    .sorted()
                    .collect();
                (colors[v], nb)
            })
            .collect();
        *colors = rank(&keys);
        if colors.iter().copied().sorted().dedup().count() == before {
            return;
        }
    }
}

fn encode(g: &MarkedGraph, adj: &[Vec<usize>], order: &[usize]) -> Vec<u16> {
    let n = order.len();
    let mut out = Vec::with_capacity(3 + 4 * n + n * n / 2);
    out.push(n as u16);
    out.push(g.num_edges() as u16);
    out.push(g.num_markings() as u16);
    for &v in order {
        let bits = g.marks_at(v).bits();
        out.extend([
            g.genera()[v] as u16,
            (bits >> 16) as u16,
            bits as u16,
            adj[v][v] as u16,
        ]);
    }
    for p in 0..n {
        for q in p + 1..n {
            out.push(adj[order[p]][order[q]] as u16);
        }
    }
    out
}

struct Search<'a> {
    g: &'a MarkedGraph,
    adj: Vec<Vec<usize>>,
    best: Option<(Vec<u16>, Vec<usize>)>,
}

impl Search<'_> {
    fn run(&mut self, colors: Vec<u32>) {
        let n = colors.len();
        let cell_color = (0..n as u32).find(|c| colors.iter().filter(|&&x| x == *c).count() > 1);
        let Some(c) = cell_color else {
            let order: Vec<usize> = (0..n).sorted_by_key(|&v| colors[v]).collect();
            let enc = encode(self.g, &self.adj, &order);
            if self.best.as_ref().is_none_or(|(b, _)| enc < *b) {
                self.best = Some((enc, order));
            }
            return;
        };
        for v in (0..n).filter(|&v| colors[v] == c) {
            let mut next: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(w, &x)| 2 * x + (x == c && w != v) as u32)
                .collect();
            refine(&self.adj, &mut next);
            self.run(next);
        }
    }
}

/// Canonical form together with the canonical order: `order[k]` is the
/// original vertex placed at position `k`.
pub fn canonical_labeling(g: &MarkedGraph) -> (CanonicalForm, Vec<usize>) {
    let adj = g.adjacency();
    let mut colors = initial_colors(g);
    refine(&adj, &mut colors);
    let mut s = Search {
        g,
        adj,
        best: None,
    };
    s.run(colors);
    let (enc, order) = s.best.expect("at least one leaf");
    (CanonicalForm(enc), order)
}

pub fn canonical_form(g: &MarkedGraph) -> CanonicalForm {
    canonical_labeling(g).0
}

pub fn is_isomorphic(a: &MarkedGraph, b: &MarkedGraph) -> bool {
    canonical_form(a) == canonical_form(b)
}

/// A vertex map `a -> b` realizing an isomorphism, if one exists.
pub fn isomorphism(a: &MarkedGraph, b: &MarkedGraph) -> Option<Vec<usize>> {
    let (ca, oa) = canonical_labeling(a);
    let (cb, ob) = canonical_labeling(b);
    if ca != cb {
        return None;
    }
    let mut map = vec![0; oa.len()];
    for (k, &v) in oa.iter().enumerate() {
        map[v] = ob[k];
    }
    Some(map)
}

/// Every vertex permutation preserving genera, markings and multiplicities;
/// `perm[v]` is the image of `v`.
pub fn vertex_automorphisms(g: &MarkedGraph) -> Vec<Vec<usize>> {
    let adj = g.adjacency();
    let mut colors = initial_colors(g);
    refine(&adj, &mut colors);
    let n = g.num_vertices();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        v: usize,
        adj: &[Vec<usize>],
        colors: &[u32],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = colors.len();
        if v == n {
            out.push(perm.clone());
            return;
        }
        for w in 0..n {
            if used[w] || colors[w] != colors[v] || adj[v][v] != adj[w][w] {
                continue;
            }
            if (0..v).any(|u| adj[u][v] != adj[perm[u]][w]) {
                continue;
            }
            perm[v] = w;
            used[w] = true;
            go(v + 1, adj, colors, perm, used, out);
            used[w] = false;
        }
        perm[v] = usize::MAX;
    }
    go(0, &adj, &colors, &mut perm, &mut used, &mut out);
    out
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Order of the automorphism group acting on vertices and edges. Half-edge
/// flips of loops are not counted.
pub fn automorphism_group_order(g: &MarkedGraph) -> u128 {
    let adj = g.adjacency();
    let n = g.num_vertices();
    let edge_part: u128 = (0..n)
        .flat_map(|u| (u..n).map(move |v| (u, v)))
        .map(|(u, v)| factorial(adj[u][v]))
        .product();
    vertex_automorphisms(g).len() as u128 * edge_part
}

/// An automorphism as a vertex permutation and an edge permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// All automorphisms, expanded over permutations of parallel edges. Fails
/// with `BoundsExceeded` above `limit` elements.
pub fn automorphisms(g: &MarkedGraph, limit: usize) -> Result<Vec<Automorphism>> {
    let order = automorphism_group_order(g);
    if order > limit as u128 {
        return Err(Error::BoundsExceeded(format!(
            "automorphism group has {order} elements"
        )));
    }
    let mut out = Vec::new();
    for vp in vertex_automorphisms(g) {
        // Group edge indices by their endpoint pair.
        let classes: Vec<(Vec<usize>, Vec<usize>)> = g
            .edges()
            .iter()
            .enumerate()
            .into_group_map_by(|&(_, &(a, b))| (a, b))
            .into_iter()
            .sorted()
            .map(|((a, b), src)| {
                let (x, y) = (vp[a].min(vp[b]), vp[a].max(vp[b]));
                let src: Vec<usize> = src.into_iter().map(|(e, _)| e).collect();
                let dst: Vec<usize> = (0..g.num_edges())
                    .filter(|&f| g.edges()[f] == (x, y))
                    .collect();
                (src, dst)
            })
            .collect();
        if classes.is_empty() {
            out.push(Automorphism {
                vertices: vp.clone(),
                edges: vec![],
            });
            continue;
        }
        let choices: Vec<Vec<Vec<usize>>> = classes
            .iter()
            .map(|(_, dst)| dst.iter().copied().permutations(dst.len()).collect())
            .collect();
        for pick in choices.iter().multi_cartesian_product() {
            let mut ep = vec![0; g.num_edges()];
            for ((src, _), dsts) in classes.iter().zip(pick) {
                for (&s, &d) in src.iter().zip(dsts.iter()) {
                    ep[s] = d;
                }
            }
            out.push(Automorphism {
                vertices: vp.clone(),
                edges: ep,
            });
        }
    }
    Ok(out)
}

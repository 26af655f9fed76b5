use super::canon::{canonical_labeling, CanonicalForm};
use super::graph::MarkedGraph;
use crate::error::{Error, Result};
use std::collections::HashSet;

/// Limits guarding exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_genus: u32,
    pub max_markings: usize,
    pub max_vertices: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_genus: 5,
            max_markings: 6,
            max_vertices: 12,
        }
    }
}

impl Bounds {
    pub fn check(&self, g: u32, n: usize) -> Result<()> {
        let top = 2 * g as i64 - 2 + n as i64;
        if top <= 0 {
            return Err(Error::InvalidInput(format!(
                "(g,n)=({g},{n}) has no stable curves"
            )));
        }
        if g > self.max_genus || n > self.max_markings || top as usize > self.max_vertices {
            return Err(Error::BoundsExceeded(format!(
                "(g,n)=({g},{n}) exceeds g<={}, n<={}, vertices<={}",
                self.max_genus, self.max_markings, self.max_vertices
            )));
        }
        Ok(())
    }
}

/// Relabels vertices into canonical order and sorts the edge list.
pub fn canonical_representative(g: &MarkedGraph) -> (CanonicalForm, MarkedGraph) {
    let (cf, order) = canonical_labeling(g);
    let mut perm = vec![0; order.len()];
    for (k, &v) in order.iter().enumerate() {
        perm[v] = k;
    }
    let r = g.relabel(&perm);
    let mut edges = r.edges().to_vec();
    edges.sort();
    let rep = MarkedGraph::new(r.genera().to_vec(), edges, r.markings().to_vec())
        .expect("relabelling preserves validity");
    (cf, rep)
}

/// Graphs obtained by un-contracting one edge at some vertex.
fn uncontractions(g: &MarkedGraph) -> Vec<MarkedGraph> {
    let mut out = Vec::new();
    for v in 0..g.num_vertices() {
        let gv = g.genera()[v];
        if gv >= 1 {
            let mut genera = g.genera().to_vec();
            genera[v] -= 1;
            let mut edges = g.edges().to_vec();
            edges.push((v, v));
            let h = MarkedGraph::new(genera, edges, g.markings().to_vec()).expect("in range");
            if h.vertex_is_stable(v) {
                out.push(h);
            }
        }
        split_vertex(g, v, &mut out);
    }
    out
}

fn split_vertex(g: &MarkedGraph, v: usize, out: &mut Vec<MarkedGraph>) {
    let nv = g.num_vertices();
    let w = nv;
    let ordinary: Vec<usize> = (0..g.num_edges())
        .filter(|&e| {
            let (a, b) = g.edges()[e];
            (a == v) != (b == v)
        })
        .collect();
    let loops: Vec<usize> = (0..g.num_edges()).filter(|&e| g.edges()[e] == (v, v)).collect();
    let marks: Vec<usize> = (0..g.num_markings())
        .filter(|&j| g.markings()[j] == v)
        .collect();
    let gv = g.genera()[v];
    let loop_choices = 3usize.pow(loops.len() as u32);
    for g1 in 0..=gv {
        for mmask in 0..1u32 << marks.len() {
            for emask in 0..1u32 << ordinary.len() {
                for mut lcode in 0..loop_choices {
                    let mut genera = g.genera().to_vec();
                    genera[v] = g1;
                    genera.push(gv - g1);
                    let mut edges = g.edges().to_vec();
                    for (k, &e) in ordinary.iter().enumerate() {
                        if emask >> k & 1 == 1 {
                            let (a, b) = edges[e];
                            edges[e] = if a == v { (b, w) } else { (a, w) };
                        }
                    }
                    for &e in &loops {
                        edges[e] = match lcode % 3 {
                            0 => (v, v),
                            1 => (w, w),
                            _ => (v, w),
                        };
                        lcode /= 3;
                    }
                    edges.push((v, w));
                    let mut markings = g.markings().to_vec();
                    for (k, &j) in marks.iter().enumerate() {
                        if mmask >> k & 1 == 1 {
                            markings[j] = w;
                        }
                    }
                    let h = MarkedGraph::new(genera, edges, markings).expect("in range");
                    if h.vertex_is_stable(v) && h.vertex_is_stable(w) {
                        out.push(h);
                    }
                }
            }
        }
    }
}

/// Every stable graph of type `(g, n)` up to isomorphism, as canonical
/// representatives sorted by edge count and canonical form.
pub fn enumerate_stable_graphs(g: u32, n: usize, bounds: &Bounds) -> Result<Vec<MarkedGraph>> {
    bounds.check(g, n)?;
    let root = MarkedGraph::new(vec![g], vec![], vec![0; n])?;
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    let mut all: Vec<(usize, CanonicalForm, MarkedGraph)> = Vec::new();
    let (cf, rep) = canonical_representative(&root);
    seen.insert(cf.clone());
    all.push((0, cf, rep.clone()));
    let mut level = vec![rep];
    while !level.is_empty() {
        let mut next = Vec::new();
        for h in &level {
            for k in uncontractions(h) {
                let (cf, rep) = canonical_representative(&k);
                if seen.insert(cf.clone()) {
                    all.push((rep.num_edges(), cf, rep.clone()));
                    next.push(rep);
                }
            }
        }
        level = next;
    }
    all.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(all.into_iter().map(|(_, _, r)| r).collect())
}

use super::labels::{BoundaryLabel, MarkSet};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Subsets of vertices are bitmasks; graphs never exceed 64 vertices.
pub type VertexSet = u64;

/// A connected dual graph: vertex genera, an edge list (loops allowed) and
/// the vertex carrying each marking. Markings are numbered from 1 in labels
/// and stored 0-based in `markings`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct MarkedGraph {
    genera: Vec<u32>,
    edges: Vec<(usize, usize)>,
    markings: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    genera: Vec<u32>,
    edges: Vec<[usize; 2]>,
    markings: Vec<usize>,
}

impl TryFrom<RawGraph> for MarkedGraph {
    type Error = Error;
    fn try_from(r: RawGraph) -> Result<Self> {
        MarkedGraph::new(
            r.genera,
            r.edges.into_iter().map(|[u, v]| (u, v)).collect(),
            r.markings,
        )
    }
}

impl From<MarkedGraph> for RawGraph {
    fn from(g: MarkedGraph) -> Self {
        RawGraph {
            genera: g.genera,
            edges: g.edges.into_iter().map(|(u, v)| [u, v]).collect(),
            markings: g.markings,
        }
    }
}

impl MarkedGraph {
    /// Checks index ranges only; see [`MarkedGraph::validate`] for stability.
    pub fn new(genera: Vec<u32>, edges: Vec<(usize, usize)>, markings: Vec<usize>) -> Result<Self> {
        let nv = genera.len();
        if nv == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if nv > 64 {
            return Err(Error::InvalidGraph("more than 64 vertices".into()));
        }
        if markings.len() > MarkSet::MAX_MARKS {
            return Err(Error::InvalidGraph("too many markings".into()));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= nv || v >= nv) {
            return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range")));
        }
        if let Some(&m) = markings.iter().find(|&&m| m >= nv) {
            return Err(Error::InvalidGraph(format!("marking on missing vertex {m}")));
        }
        let edges = edges
            .into_iter()
            .map(|(u, v)| if u <= v { (u, v) } else { (v, u) })
            .collect();
        Ok(MarkedGraph {
            genera,
            edges,
            markings,
        })
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn markings(&self) -> &[usize] {
        &self.markings
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_markings(&self) -> usize {
        self.markings.len()
    }

    pub fn all_vertices(&self) -> VertexSet {
        if self.num_vertices() == 64 {
            u64::MAX
        } else {
            (1u64 << self.num_vertices()) - 1
        }
    }

    /// Arithmetic genus: total vertex genus plus first Betti number.
    pub fn genus(&self) -> i64 {
        let sum: i64 = self.genera.iter().map(|&g| g as i64).sum();
        sum - self.num_vertices() as i64 + self.num_edges() as i64 + 1
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.edges[e];
        u == v
    }

    /// Number of half-edges at `v`; a loop counts twice.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v && b == v).count()
    }

    pub fn marks_at(&self, v: usize) -> MarkSet {
        MarkSet::from_marks(
            self.markings
                .iter()
                .enumerate()
                .filter(|&(_, &w)| w == v)
                .map(|(j, _)| j + 1),
        )
    }

    pub fn marks_on(&self, set: VertexSet) -> MarkSet {
        MarkSet::from_marks(
            self.markings
                .iter()
                .enumerate()
                .filter(|&(_, &w)| set >> w & 1 == 1)
                .map(|(j, _)| j + 1),
        )
    }

    /// Number of edges between `u` and `v` (loops when `u == v`).
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let key = if u <= v { (u, v) } else { (v, u) };
        self.edges.iter().filter(|&&e| e == key).count()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut m = vec![vec![0usize; n]; n];
        for &(u, v) in &self.edges {
            m[u][v] += 1;
            if u != v {
                m[v][u] += 1;
            }
        }
        m
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(0, self.all_vertices(), None) == self.all_vertices()
    }

    /// Vertices reachable from `start` inside `within`, optionally ignoring
    /// one edge.
    pub fn component_of(&self, start: usize, within: VertexSet, skip: Option<usize>) -> VertexSet {
        let mut seen: VertexSet = 1 << start;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for (e, &(a, b)) in self.edges.iter().enumerate() {
                if Some(e) == skip {
                    continue;
                }
                let y = if a == x {
                    b
                } else if b == x {
                    a
                } else {
                    continue;
                };
                if within >> y & 1 == 1 && seen >> y & 1 == 0 {
                    seen |= 1 << y;
                    stack.push(y);
                }
            }
        }
        seen
    }

    pub fn is_set_connected(&self, set: VertexSet) -> bool {
        if set == 0 {
            return false;
        }
        let start = set.trailing_zeros() as usize;
        self.component_of(start, set, None) == set
    }

    pub fn vertex_is_stable(&self, v: usize) -> bool {
        self.genera[v] > 0 || self.valence(v) + self.marks_at(v).len() >= 3
    }

    pub fn is_stable(&self) -> bool {
        self.is_connected() && (0..self.num_vertices()).all(|v| self.vertex_is_stable(v))
    }

    pub fn validate(&self) -> Result<()> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if let Some(v) = (0..self.num_vertices()).find(|&v| !self.vertex_is_stable(v)) {
            return Err(Error::Unstable(format!("vertex {v}")));
        }
        Ok(())
    }

    /// Edges with both ends in `set`, loops included.
    pub fn internal_edges(&self, set: VertexSet) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |&(_, &(a, b))| set >> a & 1 == 1 && set >> b & 1 == 1)
            .map(|(e, _)| e)
    }

    /// Edges with exactly one end in `set`.
    pub fn cut_edges(&self, set: VertexSet) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |&(_, &(a, b))| (set >> a & 1) != (set >> b & 1))
            .map(|(e, _)| e)
    }

    pub fn cut_size(&self, set: VertexSet) -> usize {
        self.cut_edges(set).count()
    }

    /// Arithmetic genus of the subcurve spanned by a connected `set`.
    pub fn subgraph_genus(&self, set: VertexSet) -> i64 {
        let g: i64 = (0..self.num_vertices())
            .filter(|&v| set >> v & 1 == 1)
            .map(|v| self.genera[v] as i64)
            .sum();
        g + self.internal_edges(set).count() as i64 - set.count_ones() as i64 + 1
    }

    /// Nonempty proper subset, connected, with connected complement.
    pub fn is_elementary(&self, set: VertexSet) -> bool {
        let all = self.all_vertices();
        set != 0
            && set & !all == 0
            && set != all
            && self.is_set_connected(set)
            && self.is_set_connected(all & !set)
    }

    /// Elementary subgraphs as vertex sets, in increasing bitmask order.
    pub fn elementary_subgraphs(&self) -> Vec<VertexSet> {
        (1..self.all_vertices())
            .filter(|&s| self.is_elementary(s))
            .collect()
    }

    /// Contracts edge `e`. Returns the new graph and the map sending each old
    /// vertex to its image.
    pub fn contract(&self, e: usize) -> Result<(MarkedGraph, Vec<usize>)> {
        if e >= self.num_edges() {
            return Err(Error::InvalidInput(format!("edge {e} out of range")));
        }
        let (u, v) = self.edges[e];
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(f, _)| f != e)
            .map(|(_, &x)| x)
            .collect();
        if u == v {
            let mut genera = self.genera.clone();
            genera[u] += 1;
            let map = (0..self.num_vertices()).collect();
            let g = MarkedGraph::new(genera, edges, self.markings.clone())?;
            return Ok((g, map));
        }
        // Merge v into u (u < v) and shift later vertices down.
        let map: Vec<usize> = (0..self.num_vertices())
            .map(|w| match w {
                w if w == v => u,
                w if w > v => w - 1,
                w => w,
            })
            .collect();
        let mut genera: Vec<u32> = Vec::with_capacity(self.num_vertices() - 1);
        for (w, &gw) in self.genera.iter().enumerate() {
            if w != v {
                genera.push(gw);
            }
        }
        genera[u] += self.genera[v];
        for x in edges.iter_mut() {
            *x = (map[x.0], map[x.1]);
        }
        let markings = self.markings.iter().map(|&w| map[w]).collect();
        Ok((MarkedGraph::new(genera, edges, markings)?, map))
    }

    /// Label of a separating edge and the endpoint on the `C^+` side. `None`
    /// when the edge is not separating, or when `n = 0` and both sides have
    /// equal genus (no label exists then).
    pub fn separating_edge_label(&self, e: usize) -> Option<(BoundaryLabel, usize)> {
        let (u, v) = self.edges[e];
        if u == v {
            return None;
        }
        let side_u = self.component_of(u, self.all_vertices(), Some(e));
        if side_u >> v & 1 == 1 {
            return None;
        }
        let side_v = self.all_vertices() & !side_u;
        let g = self.genus();
        let gu = self.subgraph_genus(side_u);
        let n = self.num_markings();
        let su = self.marks_on(side_u);
        let first_is_u = if n >= 1 {
            su.contains(1)
        } else if 2 * gu == g {
            return None;
        } else {
            2 * gu < g
        };
        let (set, endpoint) = if first_is_u { (side_u, u) } else { (side_v, v) };
        Some((
            BoundaryLabel {
                i: self.subgraph_genus(set) as u32,
                s: self.marks_on(set),
            },
            endpoint,
        ))
    }

    /// Applies a vertex permutation `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> MarkedGraph {
        let mut genera = vec![0; self.num_vertices()];
        for (v, &p) in perm.iter().enumerate() {
            genera[p] = self.genera[v];
        }
        let edges = self.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        let markings = self.markings.iter().map(|&w| perm[w]).collect();
        MarkedGraph::new(genera, edges, markings).expect("permutation preserves ranges")
    }
}

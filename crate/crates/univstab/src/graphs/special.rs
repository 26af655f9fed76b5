use super::graph::{MarkedGraph, VertexSet};
use super::labels::{BoundaryLabel, MarkSet, VineLabel};
use crate::error::{Error, Result};
use crate::linalg::det_i128;

fn two_vertex(g: u32, n: usize, label: VineLabel) -> Result<MarkedGraph> {
    if !label.is_valid(g, n) {
        return Err(Error::InvalidLabel(format!("{label} for (g,n)=({g},{n})")));
    }
    let second = label.second_genus(g).expect("checked");
    let markings = (1..=n)
        .map(|j| if label.s.contains(j) { 0 } else { 1 })
        .collect();
    MarkedGraph::new(
        vec![label.i, second],
        vec![(0, 1); label.alpha as usize],
        markings,
    )
}

/// The vine with one separating node: genus `i` and markings `S` on vertex 0.
pub fn make_gamma_is(g: u32, n: usize, label: BoundaryLabel) -> Result<MarkedGraph> {
    if !label.is_valid(g, n) {
        return Err(Error::InvalidLabel(format!("{label} for (g,n)=({g},{n})")));
    }
    two_vertex(
        g,
        n,
        VineLabel {
            alpha: 1,
            i: label.i,
            s: label.s,
        },
    )
}

/// Smallest `j` for which `make_gamma_j` is defined.
pub fn first_section_index(g: u32) -> usize {
    if g == 1 {
        2
    } else {
        1
    }
}

/// Genus-0 vertex 0 carrying only marking `j`, joined by two edges to a
/// vertex of genus `g - 1` carrying the rest.
pub fn make_gamma_j(g: u32, n: usize, j: usize) -> Result<MarkedGraph> {
    if g == 0 || j < first_section_index(g) || j > n {
        return Err(Error::InvalidLabel(format!(
            "Gamma_{j} for (g,n)=({g},{n})"
        )));
    }
    two_vertex(
        g,
        n,
        VineLabel {
            alpha: 2,
            i: 0,
            s: MarkSet::EMPTY.with(j),
        },
    )
}

pub fn make_vine(g: u32, n: usize, label: VineLabel) -> Result<MarkedGraph> {
    two_vertex(g, n, label)
}

/// Vine label of the contraction keeping `set` and its complement, with
/// `set` as the first vertex.
pub fn collapse_to_vine_oriented(graph: &MarkedGraph, set: VertexSet) -> Result<VineLabel> {
    if !graph.is_elementary(set) {
        return Err(Error::NonElementary);
    }
    Ok(VineLabel {
        alpha: graph.cut_size(set) as u32,
        i: graph.subgraph_genus(set) as u32,
        s: graph.marks_on(set),
    })
}

/// As [`collapse_to_vine_oriented`], then put in canonical orientation.
pub fn collapse_to_vine(graph: &MarkedGraph, set: VertexSet) -> Result<VineLabel> {
    let l = collapse_to_vine_oriented(graph, set)?;
    Ok(l.canonical(graph.genus() as u32, graph.num_markings()))
}

/// Number of spanning trees (Kirchhoff), loops ignored.
pub fn spanning_tree_count(graph: &MarkedGraph) -> u128 {
    let n = graph.num_vertices();
    if n == 1 {
        return 1;
    }
    let adj = graph.adjacency();
    let lap: Vec<Vec<i128>> = (1..n)
        .map(|i| {
            (1..n)
                .map(|j| {
                    if i == j {
                        (0..n).filter(|&k| k != i).map(|k| adj[i][k] as i128).sum()
                    } else {
                        -(adj[i][j] as i128)
                    }
                })
                .collect()
        })
        .collect();
    det_i128(&lap).max(0) as u128
}

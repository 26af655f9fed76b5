//! Chambers of an affine hyperplane arrangement inside an open box.
//!
//! Cells are kept as vertex lists, each vertex tagged with the constraints
//! tight at it. Cutting a cell by a hyperplane keeps the vertices on each
//! side and adds the crossing points of the cell's edges. Two vertices span
//! an edge exactly when their common tight constraints have rank `dim - 1`.

use super::walls::Affine;
use crate::linalg::rank;
use crate::rational::Q;
use num_traits::Zero;
use std::cmp::Ordering;

#[derive(Clone, Debug)]
struct Vertex {
    point: Vec<Q>,
    tight: Vec<usize>,
}

/// One chamber: its vertices and an interior point (the vertex average).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub vertices: Vec<Vec<Q>>,
    pub interior: Vec<Q>,
}

struct Arrangement {
    dim: usize,
    normals: Vec<Vec<Q>>,
}

impl Arrangement {
    fn adjacent(&self, a: &Vertex, b: &Vertex) -> bool {
        let common: Vec<Vec<Q>> = a
            .tight
            .iter()
            .filter(|t| b.tight.contains(t))
            .map(|&t| self.normals[t].clone())
            .collect();
        if self.dim == 1 {
            return common.is_empty() || rank(&common) == 0;
        }
        !common.is_empty() && rank(&common) == self.dim - 1
    }

    fn cut(&self, cell: &[Vertex], h: &Affine, id: usize) -> Option<(Vec<Vertex>, Vec<Vertex>)> {
        let s: Vec<Q> = cell.iter().map(|v| h.at(&v.point)).collect();
        let pos = s.iter().any(|x| *x > Q::zero());
        let neg = s.iter().any(|x| *x < Q::zero());
        if !(pos && neg) {
            return None;
        }
        let mut on: Vec<Vertex> = Vec::new();
        let push_on = |v: Vertex, on: &mut Vec<Vertex>| {
            if let Some(w) = on.iter_mut().find(|w| w.point == v.point) {
                for t in v.tight {
                    if !w.tight.contains(&t) {
                        w.tight.push(t);
                    }
                }
            } else {
                on.push(v);
            }
        };
        for (v, sv) in cell.iter().zip(&s) {
            if sv.is_zero() {
                let mut v = v.clone();
                v.tight.push(id);
                push_on(v, &mut on);
            }
        }
        for i in 0..cell.len() {
            for j in 0..cell.len() {
                if s[i] < Q::zero() && s[j] > Q::zero() && self.adjacent(&cell[i], &cell[j]) {
                    let t = s[i] / (s[i] - s[j]);
                    let point = cell[i]
                        .point
                        .iter()
                        .zip(&cell[j].point)
                        .map(|(a, b)| *a + t * (*b - *a))
                        .collect();
                    let mut tight: Vec<usize> = cell[i]
                        .tight
                        .iter()
                        .filter(|x| cell[j].tight.contains(x))
                        .copied()
                        .collect();
                    tight.push(id);
                    push_on(Vertex { point, tight }, &mut on);
                }
            }
        }
        let side = |keep: Ordering| -> Vec<Vertex> {
            cell.iter()
                .zip(&s)
                .filter(|(_, x)| x.cmp(&&Q::zero()) == keep)
                .map(|(v, _)| v.clone())
                .chain(on.iter().cloned())
                .collect()
        };
        Some((side(Ordering::Less), side(Ordering::Greater)))
    }
}

/// Chambers of `planes` (zero sets of the functionals) inside the open box
/// `lo < x < hi`. Planes not crossing the box are ignored.
pub fn chambers_in_box(lo: &[Q], hi: &[Q], planes: &[Affine]) -> Vec<Cell> {
    let dim = lo.len();
    let mut normals: Vec<Vec<Q>> = Vec::new();
    for k in 0..dim {
        let mut e = vec![Q::zero(); dim];
        e[k] = Q::from_integer(1);
        normals.push(e.clone());
        normals.push(e);
    }
    normals.extend(planes.iter().map(|p| p.coeffs.clone()));
    let arr = Arrangement { dim, normals };
    let corners: Vec<Vertex> = (0..1usize << dim)
        .map(|mask| Vertex {
            point: (0..dim)
                .map(|k| if mask >> k & 1 == 1 { hi[k] } else { lo[k] })
                .collect(),
            tight: (0..dim).map(|k| 2 * k + (mask >> k & 1)).collect(),
        })
        .collect();
    let mut cells = vec![corners];
    if dim > 0 {
        for (p, h) in planes.iter().enumerate() {
            let mut next = Vec::with_capacity(cells.len());
            for c in cells {
                match arr.cut(&c, h, 2 * dim + p) {
                    Some((a, b)) => {
                        next.push(a);
                        next.push(b);
                    }
                    None => next.push(c),
                }
            }
            cells = next;
        }
    }
    cells
        .into_iter()
        .map(|c| {
            let k = c.len() as i64;
            let interior = (0..dim)
                .map(|i| c.iter().fold(Q::zero(), |a, v| a + v.point[i]) / k)
                .collect();
            Cell {
                vertices: c.into_iter().map(|v| v.point).collect(),
                interior,
            }
        })
        .collect()
}

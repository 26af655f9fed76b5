//! Independent oracles shared by the integration tests. Nothing here calls
//! the routine it is used to check.
#![allow(dead_code)]

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::Rng;
use std::collections::BTreeSet;
use univstab::graphs::{automorphisms, make_vine, vine_labels, MarkedGraph};
use univstab::local_stability::{is_nondegenerate_local, LocalPhi, SheafClass};
use univstab::picard::{Generator, PicardElement};
use univstab::rational::{q, Q};
use univstab::universal_stability::{evaluate, Evaluator, Space, UniversalPhi};

/// Vertex genera, owner of each marking, symmetric multiplicity matrix
/// (loops on the diagonal).
pub type NaiveKey = (Vec<u32>, Vec<usize>, Vec<Vec<usize>>);

fn permuted(genera: &[u32], marks: &[usize], mult: &[Vec<usize>], perm: &[usize]) -> NaiveKey {
    let nv = genera.len();
    let mut g2 = vec![0; nv];
    let mut m2 = vec![vec![0; nv]; nv];
    for u in 0..nv {
        g2[perm[u]] = genera[u];
        for v in 0..nv {
            m2[perm[u]][perm[v]] = mult[u][v];
        }
    }
    (g2, marks.iter().map(|&v| perm[v]).collect(), m2)
}

/// Minimum encoding over all vertex orderings.
pub fn naive_key(genera: &[u32], marks: &[usize], mult: &[Vec<usize>]) -> NaiveKey {
    (0..genera.len())
        .permutations(genera.len())
        .map(|p| permuted(genera, marks, mult, &p))
        .min()
        .unwrap()
}

pub fn naive_key_of(g: &MarkedGraph) -> NaiveKey {
    let nv = g.num_vertices();
    let mut mult = vec![vec![0; nv]; nv];
    for &(u, v) in g.edges() {
        mult[u][v] += 1;
        if u != v {
            mult[v][u] += 1;
        }
    }
    naive_key(g.genera(), g.markings(), &mult)
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn connected(mult: &[Vec<usize>]) -> bool {
    let nv = mult.len();
    let mut seen = vec![false; nv];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for v in 0..nv {
            if mult[u][v] > 0 && !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Isomorphism classes of stable graphs of type `(g, n)` by exhaustive
/// generation of multiplicity matrices, genera and marking owners.
pub fn brute_stable_graphs(g: u32, n: usize) -> BTreeSet<NaiveKey> {
    let mut out = BTreeSet::new();
    let max_v = (2 * g as usize + n).saturating_sub(2);
    for nv in 1..=max_v {
        let slots: Vec<(usize, usize)> = (0..nv).flat_map(|u| (u..nv).map(move |v| (u, v))).collect();
        for ne in nv - 1..=g as usize + nv - 1 {
            let rest = g as usize + nv - 1 - ne;
            for dist in compositions(ne, slots.len()) {
                let mut mult = vec![vec![0; nv]; nv];
                for (&(u, v), &c) in slots.iter().zip(&dist) {
                    mult[u][v] += c;
                    if u != v {
                        mult[v][u] += c;
                    }
                }
                if !connected(&mult) {
                    continue;
                }
                for genera in compositions(rest, nv) {
                    let genera: Vec<u32> = genera.into_iter().map(|x| x as u32).collect();
                    for marks in (0..n).map(|_| 0..nv).multi_cartesian_product() {
                        let marks = if n == 0 { vec![] } else { marks };
                        let stable = (0..nv).all(|v| {
                            let val: usize = (0..nv).map(|w| mult[v][w]).sum::<usize>() + mult[v][v];
                            let k = marks.iter().filter(|&&m| m == v).count();
                            2 * genera[v] as usize + val + k > 2
                        });
                        if stable {
                            out.insert(naive_key(&genera, &marks, &mult));
                        }
                        if n == 0 {
                            break;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Direct reading of the stability inequality: for every proper nonempty
/// vertex set `Y`, `|deg_Y F - phi(Y) + delta_Y / 2| < (cut_Y - delta_Y) / 2`,
/// where `deg_Y` drops by one per non-free node touching `Y`.
pub fn brute_is_stable(phi: &[Q], graph: &MarkedGraph, m: &[i64], nonfree: &BTreeSet<usize>, strict: bool) -> bool {
    let nv = graph.num_vertices();
    for mask in 1u64..(1 << nv) - 1 {
        let inside = |v: usize| mask >> v & 1 == 1;
        let mut deg: i64 = (0..nv).filter(|&v| inside(v)).map(|v| m[v]).sum();
        let mut phi_y = Q::zero();
        for v in (0..nv).filter(|&v| inside(v)) {
            phi_y += phi[v];
        }
        let (mut cut, mut delta) = (0i64, 0i64);
        for (e, &(u, v)) in graph.edges().iter().enumerate() {
            let touches = inside(u) || inside(v);
            if touches && nonfree.contains(&e) {
                deg -= 1;
            }
            if inside(u) != inside(v) {
                cut += 1;
                if nonfree.contains(&e) {
                    delta += 1;
                }
            }
        }
        let lhs = (q(deg) - phi_y + Q::new(delta, 2)).abs();
        let rhs = Q::new(cut - delta, 2);
        if (strict && lhs >= rhs) || (!strict && lhs > rhs) {
            return false;
        }
    }
    true
}

/// Every class of total degree `sum(phi)` in a box around `phi`, tested with
/// [`brute_is_stable`]. The box comes from the inequality for `Y = {v}`
/// alone: `m_v` lies within `cut(v)/2` of `phi_v` plus the non-free nodes at
/// `v`. One unit of slack is added on each side.
pub fn brute_classes(phi: &[Q], graph: &MarkedGraph, with_nonfree: bool, strict: bool) -> Vec<SheafClass> {
    let nv = graph.num_vertices();
    let ne = graph.num_edges();
    let total: Q = phi.iter().copied().sum();
    assert!(total.is_integer());
    let d = total.to_integer();
    let cut = |v: usize| graph.edges().iter().filter(|&&(a, b)| (a == v) != (b == v)).count() as i64;
    let nonfree_sets: Vec<BTreeSet<usize>> = if with_nonfree {
        (0..ne).powerset().map(|s| s.into_iter().collect()).collect()
    } else {
        vec![BTreeSet::new()]
    };
    let mut out = Vec::new();
    for nonfree in nonfree_sets {
        let target = d + nonfree.len() as i64;
        let ranges: Vec<_> = (0..nv - 1)
            .map(|v| {
                let p = phi[v];
                let extra = nonfree.len() as i64;
                p.floor().to_integer() - cut(v) - 1..=p.ceil().to_integer() + cut(v) + extra + 1
            })
            .collect();
        for head in ranges.into_iter().multi_cartesian_product() {
            let mut m = head;
            m.push(target - m.iter().sum::<i64>());
            if brute_is_stable(phi, graph, &m, &nonfree, strict) {
                out.push(SheafClass { m, nonfree: nonfree.clone() });
            }
        }
        // An empty product may or may not yield once; dedup covers both.
        if nv == 1 && brute_is_stable(phi, graph, &[target], &nonfree, strict) {
            out.push(SheafClass { m: vec![target], nonfree: nonfree.clone() });
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Random vertex values with denominator `den` summing to `d`.
pub fn random_local_phi<R: Rng>(nv: usize, d: i64, den: i64, rng: &mut R) -> Vec<Q> {
    let mut v: Vec<Q> = (0..nv - 1).map(|_| Q::new(rng.gen_range(-3 * den..=3 * den), den)).collect();
    let s: Q = v.iter().copied().sum();
    v.push(q(d) - s);
    v
}

/// A random locally nondegenerate parameter.
pub fn random_nondegenerate_local<R: Rng>(graph: &MarkedGraph, rng: &mut R) -> LocalPhi {
    loop {
        let d = rng.gen_range(-3..=3);
        let phi = LocalPhi::new(random_local_phi(graph.num_vertices(), d, 7, rng));
        if is_nondegenerate_local(&phi, graph) {
            return phi;
        }
    }
}

/// Nondegeneracy tested on the definition: no vine graph of the type has a
/// local wall through the evaluated parameter.
pub fn nondegenerate_on_vines(phi: &UniversalPhi) -> bool {
    vine_labels(phi.g, phi.n).into_iter().all(|l| {
        let graph = make_vine(phi.g, phi.n, l).unwrap();
        is_nondegenerate_local(&evaluate(phi, &graph).unwrap(), &graph)
    })
}

/// Basis generators of the relative Picard group.
pub fn picard_basis(g: u32, n: usize) -> Vec<PicardElement> {
    let mut gens: Vec<Generator> = univstab::graphs::boundary_labels(g, n)
        .into_iter()
        .map(Generator::CPlus)
        .collect();
    if g >= 2 {
        gens.push(Generator::Omega);
    }
    let sections = if g == 0 { n.min(1) } else { n };
    gens.extend((1..=sections).map(Generator::Section));
    gens.into_iter().map(|x| PicardElement::generator(g, n, x).unwrap()).collect()
}

/// The inversion part of a stabilizer fixes a bounded chamber, hence its
/// centre `deg(L) / 2`. So the action is free iff no such point is
/// nondegenerate; `L` only matters modulo `2 Pic`.
pub fn brute_has_fixed_chamber(g: u32, n: usize) -> bool {
    let basis = picard_basis(g, n);
    let space = Space::get(g, n).unwrap();
    for choice in (0..basis.len()).powerset() {
        let mut l = PicardElement::zero(g, n);
        for i in choice {
            l = l.add(&basis[i]);
        }
        if l.fiber_degree() % 2 != 0 {
            continue;
        }
        let p = space.point_of(&l).unwrap();
        let half: Vec<Q> = p.coords().iter().map(|c| *c / 2).collect();
        let d = q(l.fiber_degree() / 2);
        let centre = p.with_coords(d, &half);
        if nondegenerate_on_vines(&centre) {
            return true;
        }
    }
    false
}

/// Automorphism invariance and contraction compatibility at one graph.
pub fn coherent(phi: &UniversalPhi, gr: &MarkedGraph) -> bool {
    let space = Space::get(phi.g, phi.n).unwrap();
    coherent_with(&space.evaluator(phi).unwrap(), phi.d, gr)
}

/// [`coherent`] for a parameter of degree `d` prepared once.
pub fn coherent_with(ev: &Evaluator, d: Q, gr: &MarkedGraph) -> bool {
    let v = ev.at(gr).unwrap().values;
    if v.iter().copied().sum::<Q>() != d {
        return false;
    }
    for aut in automorphisms(gr, 1_000_000).unwrap() {
        if aut.vertices.iter().enumerate().any(|(a, &b)| v[a] != v[b]) {
            return false;
        }
    }
    (0..gr.num_edges()).all(|e| {
        let (small, map) = gr.contract(e).unwrap();
        let w = ev.at(&small).unwrap().values;
        let mut pushed = vec![q(0); w.len()];
        for (a, &b) in map.iter().enumerate() {
            pushed[b] += v[a];
        }
        pushed == w
    })
}

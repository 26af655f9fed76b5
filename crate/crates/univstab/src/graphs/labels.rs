use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A subset of the markings `{1..n}` stored as a bitmask (bit `j-1` for `j`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct MarkSet(u32);

impl MarkSet {
    pub const EMPTY: MarkSet = MarkSet(0);
    pub const MAX_MARKS: usize = 31;

    pub fn from_bits(bits: u32) -> Self {
        MarkSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        MarkSet(if n == 0 { 0 } else { u32::MAX >> (32 - n) })
    }

    pub fn from_marks<I: IntoIterator<Item = usize>>(marks: I) -> Self {
        let mut s = MarkSet::EMPTY;
        for j in marks {
            s = s.with(j);
        }
        s
    }

    pub fn contains(self, j: usize) -> bool {
        (1..=32).contains(&j) && self.0 & (1 << (j - 1)) != 0
    }

    pub fn with(self, j: usize) -> Self {
        debug_assert!((1..=32).contains(&j));
        MarkSet(self.0 | (1 << (j - 1)))
    }

    pub fn without(self, j: usize) -> Self {
        MarkSet(self.0 & !(1 << (j - 1)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: MarkSet) -> Self {
        MarkSet(self.0 | o.0)
    }

    pub fn intersect(self, o: MarkSet) -> Self {
        MarkSet(self.0 & o.0)
    }

    pub fn complement(self, n: usize) -> Self {
        MarkSet(!self.0 & MarkSet::full(n).0)
    }

    pub fn is_subset(self, o: MarkSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (1..=32).filter(move |&j| self.contains(j))
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> Vec<MarkSet> {
        let mut out = Vec::with_capacity(1 << self.len());
        let mut sub = 0u32;
        loop {
            out.push(MarkSet(sub));
            if sub == self.0 {
                break;
            }
            sub = (sub.wrapping_sub(self.0)) & self.0;
        }
        out.sort();
        out
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Display for MarkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|j| j.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for MarkSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MarkSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.iter().any(|&j| j == 0 || j > MarkSet::MAX_MARKS) {
            return Err(serde::de::Error::custom("marking out of range"));
        }
        Ok(MarkSet::from_marks(v))
    }
}

fn parse_markset(s: &str) -> Result<MarkSet> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .or_else(|| s.strip_prefix('{'))
        .and_then(|t| t.strip_suffix(']').or_else(|| t.strip_suffix('}')))
        .ok_or_else(|| Error::Parse(format!("bad marking set {s:?}")))?;
    let mut set = MarkSet::EMPTY;
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let j: usize = part
            .parse()
            .map_err(|_| Error::Parse(format!("bad marking {part:?}")))?;
        if j == 0 || j > MarkSet::MAX_MARKS {
            return Err(Error::Parse(format!("marking {j} out of range")));
        }
        set = set.with(j);
    }
    Ok(set)
}

/// Index `(i, S)` of a boundary divisor whose preimage in the universal
/// curve splits into two components; `C^+` is the side of genus `i` with
/// markings `S`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BoundaryLabel {
    pub i: u32,
    pub s: MarkSet,
}

impl BoundaryLabel {
    /// Checks the normalization conventions for `(g, n)`.
    pub fn is_valid(&self, g: u32, n: usize) -> bool {
        let i = self.i;
        if i > g || !self.s.is_subset(MarkSet::full(n)) {
            return false;
        }
        if i == 0 && self.s.len() < 2 {
            return false;
        }
        if i == g && self.s.len() + 2 > n {
            return false;
        }
        if n >= 1 {
            self.s.contains(1)
        } else {
            2 * i < g
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad label {s:?}")))?;
        let (i, rest) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad label {s:?}")))?;
        let i: u32 = i
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad genus in {s:?}")))?;
        Ok(BoundaryLabel {
            i,
            s: parse_markset(rest)?,
        })
    }
}

impl fmt::Display for BoundaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.s)
    }
}

impl Serialize for BoundaryLabel {
    fn serialize<Z: serde::Serializer>(&self, ser: Z) -> std::result::Result<Z::Ok, Z::Error> {
        ser.serialize_str(&self.to_string())
    }
}

/// All valid boundary labels for `(g, n)`, sorted.
pub fn boundary_labels(g: u32, n: usize) -> Vec<BoundaryLabel> {
    let mut out = Vec::new();
    for i in 0..=g {
        for s in MarkSet::full(n).subsets() {
            let l = BoundaryLabel { i, s };
            if l.is_valid(g, n) {
                out.push(l);
            }
        }
    }
    out.sort();
    out
}

/// A loopless graph with two vertices: the first has genus `i` and markings
/// `S`, the second has genus `g - i - alpha + 1` and the remaining markings,
/// joined by `alpha` edges.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct VineLabel {
    pub alpha: u32,
    pub i: u32,
    pub s: MarkSet,
}

impl VineLabel {
    pub fn second_genus(&self, g: u32) -> Option<u32> {
        (g + 1).checked_sub(self.i + self.alpha)
    }

    /// Both vertices exist and are stable.
    pub fn is_valid(&self, g: u32, n: usize) -> bool {
        if self.alpha == 0 || !self.s.is_subset(MarkSet::full(n)) {
            return false;
        }
        let Some(j) = self.second_genus(g) else {
            return false;
        };
        let a = self.alpha as usize;
        let ok = |genus: u32, marks: usize| genus > 0 || a + marks >= 3;
        ok(self.i, self.s.len()) && ok(j, n - self.s.len())
    }

    /// The same graph with its two vertices swapped.
    pub fn flipped(&self, g: u32, n: usize) -> VineLabel {
        VineLabel {
            alpha: self.alpha,
            i: self.second_genus(g).expect("valid label"),
            s: self.s.complement(n),
        }
    }

    /// Orientation convention: marking 1 on the first vertex when `n >= 1`,
    /// otherwise the first vertex has the smaller genus.
    pub fn is_canonical(&self, g: u32, n: usize) -> bool {
        if n >= 1 {
            self.s.contains(1)
        } else {
            self.i <= self.second_genus(g).unwrap_or(0)
        }
    }

    pub fn canonical(&self, g: u32, n: usize) -> VineLabel {
        if self.is_canonical(g, n) {
            *self
        } else {
            self.flipped(g, n)
        }
    }

    pub fn boundary(&self) -> Option<BoundaryLabel> {
        (self.alpha == 1).then_some(BoundaryLabel {
            i: self.i,
            s: self.s,
        })
    }
}

impl fmt::Display for VineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.alpha, self.i, self.s)
    }
}

/// Every loopless two-vertex stable graph of type `(g, n)`, canonically
/// oriented and sorted.
pub fn vine_labels(g: u32, n: usize) -> Vec<VineLabel> {
    let mut out = Vec::new();
    for alpha in 1..=g + 1 {
        for i in 0..=g {
            for s in MarkSet::full(n).subsets() {
                let l = VineLabel { alpha, i, s };
                if l.is_valid(g, n) && l.is_canonical(g, n) {
                    out.push(l);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

//! Partially directed k-graphs.
//!
//! Edge slots are the k-subsets of `{0, .., n-1}` in colex order. A PDG
//! stores one [`EdgeState`] per slot, so at most one edge uses a vertex set.

mod search;

pub use search::{extremal_search, ExtremalReport, SearchBudget, SearchMode};

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::combin::{binomial, colex_rank, elements, low_mask, Subsets};
use crate::formula::syntax::support_groups;
use crate::formula::Formula;
use crate::{QSqrt2, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeState {
    Absent,
    Undirected,
    DirectedAt(u8),
}

impl EdgeState {
    pub fn is_present(self) -> bool {
        self != EdgeState::Absent
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PdgError {
    #[error("uniformity {k} with {n} vertices is not supported")]
    BadShape { n: usize, k: usize },
    #[error("vertex set {mask:#x} is not a {k}-subset of the vertices")]
    BadEdge { mask: u64, k: usize },
    #[error("head {head} is not a vertex of edge {mask:#x}")]
    BadHead { mask: u64, head: u8 },
    #[error("formula is not semisimple")]
    NotSemisimple,
    #[error("links need uniformity at least 3")]
    LinkUniformity,
}

/// Exact edge densities `e_u / C(n,k)` and `e_d / C(n,k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityPair {
    pub alpha: Rational,
    pub beta: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pdg {
    n: usize,
    k: usize,
    states: Vec<EdgeState>,
}

impl Pdg {
    pub fn empty(n: usize, k: usize) -> Result<Self, PdgError> {
        if k < 1 || k > n || n > 63 {
            return Err(PdgError::BadShape { n, k });
        }
        Ok(Pdg {
            n,
            k,
            states: vec![EdgeState::Absent; binomial(n, k) as usize],
        })
    }

    pub fn complete_undirected(n: usize, k: usize) -> Result<Self, PdgError> {
        let mut h = Pdg::empty(n, k)?;
        h.states.fill(EdgeState::Undirected);
        Ok(h)
    }

    pub(crate) fn from_states(n: usize, k: usize, states: Vec<EdgeState>) -> Self {
        debug_assert_eq!(states.len() as u64, binomial(n, k));
        Pdg { n, k, states }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// States in slot (colex) order.
    pub fn states(&self) -> &[EdgeState] {
        &self.states
    }

    fn check_edge(&self, mask: u64) -> Result<(), PdgError> {
        if mask.count_ones() as usize != self.k || mask & !low_mask(self.n) != 0 {
            return Err(PdgError::BadEdge { mask, k: self.k });
        }
        Ok(())
    }

    /// State of the edge slot `mask`. Panics if `mask` is not a k-subset.
    pub fn get(&self, mask: u64) -> EdgeState {
        self.check_edge(mask).expect("invalid edge");
        self.states[colex_rank(mask)]
    }

    pub fn set(&mut self, mask: u64, state: EdgeState) -> Result<(), PdgError> {
        self.check_edge(mask)?;
        if let EdgeState::DirectedAt(h) = state {
            if h >= 64 || mask >> h & 1 == 0 {
                return Err(PdgError::BadHead { mask, head: h });
            }
        }
        self.states[colex_rank(mask)] = state;
        Ok(())
    }

    /// Present edges as `(vertex mask, state)` in slot order.
    pub fn edges(&self) -> impl Iterator<Item = (u64, EdgeState)> + '_ {
        Subsets::new(self.n, self.k)
            .zip(self.states.iter().copied())
            .filter(|(_, s)| s.is_present())
    }

    pub fn undirected_count(&self) -> u64 {
        self.states
            .iter()
            .filter(|s| **s == EdgeState::Undirected)
            .count() as u64
    }

    pub fn directed_count(&self) -> u64 {
        self.states
            .iter()
            .filter(|s| matches!(s, EdgeState::DirectedAt(_)))
            .count() as u64
    }

    pub fn density(&self) -> DensityPair {
        let total = binomial(self.n, self.k) as i64;
        DensityPair {
            alpha: Rational::new(self.undirected_count() as i64, total),
            beta: Rational::new(self.directed_count() as i64, total),
        }
    }

    /// `α + θβ`, exactly.
    pub fn value(&self, theta: &QSqrt2) -> QSqrt2 {
        let numer = QSqrt2::from_int(self.undirected_count() as i64)
            + theta.mul_int(self.directed_count() as i64);
        numer.div_int(binomial(self.n, self.k) as i64)
    }

    /// Apply a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Pdg {
        assert_eq!(perm.len(), self.n);
        let mut out = Pdg::empty(self.n, self.k).expect("same shape");
        for (mask, state) in self.edges() {
            let image = elements(mask).fold(0u64, |m, v| m | 1 << perm[v]);
            let state = match state {
                EdgeState::DirectedAt(h) => EdgeState::DirectedAt(perm[h as usize] as u8),
                s => s,
            };
            out.states[colex_rank(image)] = state;
        }
        out
    }
}

/// Edges written as `123`, `12^4` style lists with 1-based vertices, the head
/// of a directed edge marked by a `^` prefix.
impl fmt::Display for Pdg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (mask, state)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            for v in elements(mask) {
                if state == EdgeState::DirectedAt(v as u8) {
                    write!(f, "^")?;
                }
                write!(f, "{}", v + 1)?;
                if self.n > 9 && v != 63 - mask.leading_zeros() as usize {
                    write!(f, ".")?;
                }
            }
        }
        write!(f, "}}")
    }
}

/// The type of a semisimple formula: singleton supports become undirected
/// edges, pairs become edges directed at the variable where the pair differs.
pub fn type_map(f: &Formula) -> Result<Pdg, PdgError> {
    let mut h = Pdg::empty(f.n(), f.k())?;
    for group in support_groups(f) {
        let state = match group {
            [_] => EdgeState::Undirected,
            [a, b] => {
                let diff = a.negs() ^ b.negs();
                if diff.count_ones() != 1 {
                    return Err(PdgError::NotSemisimple);
                }
                EdgeState::DirectedAt(diff.trailing_zeros() as u8)
            }
            _ => return Err(PdgError::NotSemisimple),
        };
        h.states[colex_rank(group[0].vars())] = state;
    }
    Ok(h)
}

/// `T_k` on `k+1` vertices: core `0..k-2`, then `x = k-2`, `y = k-1`,
/// `z = k`, with edges `K+xy`, `K+yz` and `K+xz` directed at `z`.
pub fn make_tk(k: usize) -> Pdg {
    assert!(k >= 2);
    let core = low_mask(k - 2);
    let (x, y, z) = (1u64 << (k - 2), 1u64 << (k - 1), 1u64 << k);
    let mut h = Pdg::empty(k + 1, k).expect("valid shape");
    h.set(core | x | y, EdgeState::Undirected).expect("edge");
    h.set(core | y | z, EdgeState::Undirected).expect("edge");
    h.set(core | x | z, EdgeState::DirectedAt(k as u8))
        .expect("edge");
    h
}

/// One occurrence of `T_k`: the directed edge, its head, and the two other
/// edges, as vertex masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TkInstance {
    pub directed: u64,
    pub head: usize,
    pub others: [u64; 2],
}

/// Every `(S, z, x, y)` occurrence: `S` directed at `z`, `x ∈ S∖{z}`,
/// `y ∉ S`, with edges on `S - x + y` and `S - z + y`.
fn for_each_tk(h: &Pdg, mut visit: impl FnMut(TkInstance) -> bool) {
    let all = low_mask(h.n);
    for (s, state) in h.edges() {
        let EdgeState::DirectedAt(z) = state else {
            continue;
        };
        let zb = 1u64 << z;
        for x in elements(s & !zb) {
            let xb = 1u64 << x;
            for y in elements(all & !s) {
                let yb = 1u64 << y;
                let e1 = (s & !xb) | yb;
                let e2 = (s & !zb) | yb;
                if h.states[colex_rank(e1)].is_present() && h.states[colex_rank(e2)].is_present() {
                    let others = if e1 < e2 { [e1, e2] } else { [e2, e1] };
                    if !visit(TkInstance {
                        directed: s,
                        head: z as usize,
                        others,
                    }) {
                        return;
                    }
                }
            }
        }
    }
}

pub fn contains_tk(h: &Pdg) -> bool {
    let mut found = false;
    for_each_tk(h, |_| {
        found = true;
        false
    });
    found
}

/// Number of distinct edge triples forming a copy of `T_k`.
pub fn count_tk(h: &Pdg) -> u64 {
    let mut triples = BTreeSet::new();
    for_each_tk(h, |t| {
        let mut e = [t.directed, t.others[0], t.others[1]];
        e.sort_unstable();
        triples.insert(e);
        true
    });
    triples.len() as u64
}

/// All occurrences, for reporting.
pub fn tk_instances(h: &Pdg) -> Vec<TkInstance> {
    let mut out = Vec::new();
    for_each_tk(h, |t| {
        out.push(t);
        true
    });
    out
}

/// The link of `v`: edges through `v` with `v` deleted, vertices above `v`
/// shifted down by one. Edges directed at `v` become undirected.
pub fn link(h: &Pdg, v: usize) -> Result<Pdg, PdgError> {
    if h.k < 3 {
        return Err(PdgError::LinkUniformity);
    }
    assert!(v < h.n, "vertex out of range");
    let squeeze = |m: u64| (m & low_mask(v)) | ((m >> (v + 1)) << v);
    let mut out = Pdg::empty(h.n - 1, h.k - 1)?;
    for (mask, state) in h.edges() {
        if mask >> v & 1 == 0 {
            continue;
        }
        let m = squeeze(mask & !(1 << v));
        let state = match state {
            EdgeState::DirectedAt(t) if t as usize == v => EdgeState::Undirected,
            EdgeState::DirectedAt(t) if (t as usize) > v => EdgeState::DirectedAt(t - 1),
            s => s,
        };
        out.states[colex_rank(m)] = state;
    }
    Ok(out)
}

/// Directed edges with `k-1` vertices in `B` pointed at a vertex of `A`,
/// where `A` is the first `⌊n/k⌋` vertices.
pub fn conjectured_construction(n: usize, k: usize) -> Result<Pdg, PdgError> {
    if n < k + 1 {
        return Err(PdgError::BadShape { n, k });
    }
    let a = n / k;
    let mut h = Pdg::empty(n, k)?;
    for head in 0..a {
        for rest in Subsets::new(n - a, k - 1) {
            let mask = (rest << a) | 1 << head;
            h.states[colex_rank(mask)] = EdgeState::DirectedAt(head as u8);
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_of(h: &Pdg) -> alloc::string::String {
        alloc::format!("{h}")
    }

    #[test]
    fn tk_shapes() {
        assert_eq!(set_of(&make_tk(3)), "{123, 12^4, 134}");
        assert_eq!(set_of(&make_tk(4)), "{1234, 123^5, 1245}");
        assert_eq!(set_of(&make_tk(2)), "{12, 1^3, 23}");
        for k in 2..=6 {
            let t = make_tk(k);
            assert!(contains_tk(&t));
            assert_eq!(count_tk(&t), 1);
        }
    }

    #[test]
    fn complete_undirected_is_free() {
        for (n, k) in [(5, 2), (6, 3), (6, 4)] {
            assert!(!contains_tk(&Pdg::complete_undirected(n, k).unwrap()));
        }
    }

    #[test]
    fn two_directed_edges_on_triangle() {
        let mut h = Pdg::empty(3, 2).unwrap();
        h.set(0b011, EdgeState::DirectedAt(1)).unwrap();
        h.set(0b101, EdgeState::DirectedAt(2)).unwrap();
        h.set(0b110, EdgeState::Undirected).unwrap();
        assert!(contains_tk(&h));
    }

    #[test]
    fn type_map_examples() {
        // a..e = 1..5: {abc, abc̄, ābd̄, bdē, b̄dē}
        let f = Formula::from_dimacs(
            5,
            3,
            &[
                &[1, 2, 3],
                &[1, 2, -3],
                &[-1, 2, -4],
                &[2, 4, -5],
                &[-2, 4, -5],
            ],
        )
        .unwrap();
        let h = type_map(&f).unwrap();
        assert_eq!(set_of(&h), "{12^3, 124, ^245}");
        let single = Formula::from_dimacs(3, 3, &[&[1, 2, 3], &[1, 2, -3]]).unwrap();
        assert_eq!(
            type_map(&single).unwrap().get(0b111),
            EdgeState::DirectedAt(2)
        );
        let bad = Formula::from_dimacs(3, 3, &[&[1, 2, 3], &[-1, 2, -3]]).unwrap();
        assert_eq!(type_map(&bad), Err(PdgError::NotSemisimple));
    }

    #[test]
    fn link_rules() {
        let t3 = make_tk(3);
        let l = link(&t3, 0).unwrap();
        assert_eq!(l, make_tk(2));
        let l4 = link(&t3, 3).unwrap();
        assert_eq!(l4.get(0b011), EdgeState::Undirected);
        assert!(link(&make_tk(2), 0).is_err());
    }

    #[test]
    fn construction() {
        let h = conjectured_construction(4, 2).unwrap();
        assert_eq!(h.directed_count(), 4);
        assert_eq!(h.density().beta, Rational::new(2, 3));
        for (n, k) in [(5, 2), (7, 3), (9, 4), (8, 2)] {
            assert!(!contains_tk(&conjectured_construction(n, k).unwrap()));
        }
    }
}

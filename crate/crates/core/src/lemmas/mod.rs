//! Finite checks of the classical tools: squared graphs, simplex counts,
//! bounded-codegree orientations and the binary entropy bound.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use crate::combin::{binomial_big, elements, factorial_big, low_mask, Subsets};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LemmaError {
    #[error("uniformity {ell} must be in 1..={n} for n = {n}")]
    BadUniformity { n: usize, ell: usize },
    #[error("edge {mask:#x} does not have {ell} vertices in 0..{n}")]
    BadEdge { mask: u64, n: usize, ell: usize },
    #[error("expected a graph (uniformity 2), got uniformity {0}")]
    NotAGraph(usize),
    #[error("p = {0} must satisfy 0 < p <= 1/2")]
    EntropyRange(Rational),
    #[error("n = {n} must be a multiple of the denominator {den}")]
    EntropyDenominator { n: u64, den: u64 },
    #[error("no edge-saturating matching exists with capacity {capacity}")]
    MatchingFailed { capacity: u64 },
}

/// Uniform hypergraph on `n <= 64` vertices; edges are sorted bit sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    ell: usize,
    edges: Vec<u64>,
}

impl Hypergraph {
    /// Duplicates are merged.
    pub fn new(
        n: usize,
        ell: usize,
        edges: impl IntoIterator<Item = u64>,
    ) -> Result<Self, LemmaError> {
        if ell == 0 || ell > n || n > 64 {
            return Err(LemmaError::BadUniformity { n, ell });
        }
        let mut edges: Vec<u64> = edges.into_iter().collect();
        for &mask in &edges {
            if mask.count_ones() as usize != ell || mask & !low_mask(n) != 0 {
                return Err(LemmaError::BadEdge { mask, n, ell });
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Hypergraph { n, ell, edges })
    }

    pub fn complete(n: usize, ell: usize) -> Result<Self, LemmaError> {
        if ell == 0 || ell > n || n > 64 {
            return Err(LemmaError::BadUniformity { n, ell });
        }
        Self::new(n, ell, Subsets::new(n, ell))
    }

    /// Each `ell`-set kept independently with probability `num/den`.
    pub fn random<R: Rng + ?Sized>(
        n: usize,
        ell: usize,
        num: u32,
        den: u32,
        rng: &mut R,
    ) -> Result<Self, LemmaError> {
        if ell == 0 || ell > n || n > 64 {
            return Err(LemmaError::BadUniformity { n, ell });
        }
        let edges: Vec<u64> = Subsets::new(n, ell)
            .filter(|_| rng.gen_ratio(num, den))
            .collect();
        Self::new(n, ell, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn edges(&self) -> &[u64] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.edges.binary_search(&mask).is_ok()
    }

    pub fn with_edge(&self, mask: u64) -> Result<Self, LemmaError> {
        Self::new(self.n, self.ell, self.edges.iter().copied().chain([mask]))
    }
}

fn neighbourhoods(g: &Hypergraph) -> Vec<u64> {
    let mut adj = vec![0u64; g.n];
    for &e in &g.edges {
        let (x, y) = (e.trailing_zeros() as usize, 63 - e.leading_zeros() as usize);
        adj[x] |= 1 << y;
        adj[y] |= 1 << x;
    }
    adj
}

/// `xy` is an edge iff some `z` is adjacent to both.
pub fn square_graph(g: &Hypergraph) -> Result<Hypergraph, LemmaError> {
    if g.ell != 2 {
        return Err(LemmaError::NotAGraph(g.ell));
    }
    let adj = neighbourhoods(g);
    let edges = Subsets::new(g.n, 2).filter(|&e| {
        let (x, y) = (e.trailing_zeros() as usize, 63 - e.leading_zeros() as usize);
        adj[x] & adj[y] != 0
    });
    Hypergraph::new(g.n, 2, edges)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FurediReport {
    pub e: u64,
    pub e2: u64,
    /// `e(G) - ⌊n/2⌋`.
    pub bound: i64,
    pub pass: bool,
    /// Every edge lying in a triangle is an edge of `G²`.
    pub triangular_edges_in_square: bool,
}

pub fn furedi_check(g: &Hypergraph) -> Result<FurediReport, LemmaError> {
    let sq = square_graph(g)?;
    let adj = neighbourhoods(g);
    let triangular_edges_in_square = g.edges.iter().all(|&e| {
        let (x, y) = (e.trailing_zeros() as usize, 63 - e.leading_zeros() as usize);
        adj[x] & adj[y] == 0 || sq.contains(e)
    });
    let e = g.edge_count() as u64;
    let e2 = sq.edge_count() as u64;
    let bound = e as i64 - (g.n / 2) as i64;
    Ok(FurediReport {
        e,
        e2,
        bound,
        pass: e2 as i64 >= bound,
        triangular_edges_in_square,
    })
}

/// `(k+1)`-sets all of whose `k`-subsets are edges.
pub fn count_simplices(h: &Hypergraph) -> u64 {
    let mut count = 0;
    // each simplex is found once, from the edge missing its top vertex
    for &e in &h.edges {
        let top = 63 - e.leading_zeros() as usize;
        for v in top + 1..h.n {
            let s = e | 1 << v;
            if elements(e).all(|x| h.contains(s & !(1 << x))) {
                count += 1;
            }
        }
    }
    count
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KkReport {
    pub edges: u64,
    pub simplices: u64,
    /// `((k+1)!·simplices)^k`
    pub lhs: BigUint,
    /// `(k!·edges)^(k+1)`
    pub rhs: BigUint,
    pub pass: bool,
}

/// The simplex bound `(k+1)!·#simplices <= (k!·e)^((k+1)/k)`, raised to
/// the `k`-th power so both sides are integers.
pub fn kk_check(h: &Hypergraph) -> KkReport {
    let k = h.ell as u64;
    let simplices = count_simplices(h);
    let edges = h.edge_count() as u64;
    let lhs = num_traits::pow(factorial_big(k + 1) * simplices, k as usize);
    let rhs = num_traits::pow(factorial_big(k) * edges, k as usize + 1);
    KkReport {
        edges,
        simplices,
        pass: lhs <= rhs,
        lhs,
        rhs,
    }
}

/// Smallest integer `L` with `L^ℓ (ℓ!)^(ℓ-1) >= ((ℓ-1)!)^ℓ e`, i.e.
/// `⌈(ℓ-1)!/(ℓ!)^((ℓ-1)/ℓ) · e^(1/ℓ)⌉`.
pub fn orientation_bound(ell: usize, edges: u64) -> u64 {
    let l = ell as u64;
    let lhs_factor = num_traits::pow(factorial_big(l), ell - 1);
    let target = num_traits::pow(factorial_big(l - 1), ell) * edges;
    let ok = |c: u64| num_traits::pow(BigUint::from(c), ell) * &lhs_factor >= target;
    // ok(edges) always holds since (ℓ!)^(ℓ-1) >= ((ℓ-1)!)^ℓ
    let (mut lo, mut hi) = (0u64, edges.max(1));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    /// `heads[i]` is the vertex edge `i` is directed at.
    pub heads: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationReport {
    pub orientation: Orientation,
    pub bound: u64,
    /// Largest number of edges containing an `(ℓ-1)`-set and directed outside it.
    pub max_load: u64,
    pub matching_size: u64,
    pub pass: bool,
}

struct Matcher<'a> {
    /// Candidate `(ℓ-1)`-set indices per edge.
    options: &'a [Vec<usize>],
    capacity: u64,
    assigned: Vec<Vec<usize>>,
    choice: Vec<usize>,
    seen: Vec<bool>,
}

impl Matcher<'_> {
    fn augment(&mut self, e: usize) -> bool {
        for &s in &self.options[e] {
            if self.seen[s] {
                continue;
            }
            self.seen[s] = true;
            if (self.assigned[s].len() as u64) < self.capacity {
                self.assigned[s].push(e);
                self.choice[e] = s;
                return true;
            }
            for slot in 0..self.assigned[s].len() {
                let other = self.assigned[s][slot];
                if self.augment(other) {
                    self.assigned[s][slot] = e;
                    self.choice[e] = s;
                    return true;
                }
            }
        }
        false
    }
}

/// Load of every `(ℓ-1)`-set under the orientation, computed from scratch.
pub fn orientation_loads(h: &Hypergraph, o: &Orientation) -> u64 {
    let mut tails: Vec<u64> = h
        .edges
        .iter()
        .zip(&o.heads)
        .map(|(&e, &w)| e & !(1 << w))
        .collect();
    tails.sort_unstable();
    let mut best = 0;
    let mut i = 0;
    while i < tails.len() {
        let j = tails[i..].iter().take_while(|&&t| t == tails[i]).count();
        best = best.max(j as u64);
        i += j;
    }
    best
}

/// Orient every edge so that each `(ℓ-1)`-set heads at most `L` edges
/// directed elsewhere, via a capacitated edge-saturating matching.
pub fn orient(h: &Hypergraph) -> Result<OrientationReport, LemmaError> {
    let bound = orientation_bound(h.ell, h.edge_count() as u64);
    let mut sets: Vec<u64> = h
        .edges
        .iter()
        .flat_map(|&e| elements(e).map(move |v| e & !(1 << v)))
        .collect();
    sets.sort_unstable();
    sets.dedup();
    let options: Vec<Vec<usize>> = h
        .edges
        .iter()
        .map(|&e| {
            elements(e)
                .map(|v| sets.binary_search(&(e & !(1 << v))).unwrap())
                .collect()
        })
        .collect();
    let mut m = Matcher {
        options: &options,
        capacity: bound,
        assigned: vec![Vec::new(); sets.len()],
        choice: vec![usize::MAX; h.edges.len()],
        seen: vec![false; sets.len()],
    };
    let mut matched = 0u64;
    for e in 0..h.edges.len() {
        m.seen.iter_mut().for_each(|s| *s = false);
        if m.augment(e) {
            matched += 1;
        }
    }
    if matched != h.edges.len() as u64 {
        return Err(LemmaError::MatchingFailed { capacity: bound });
    }
    let heads = h
        .edges
        .iter()
        .zip(&m.choice)
        .map(|(&e, &s)| (e & !sets[s]).trailing_zeros() as usize)
        .collect();
    let orientation = Orientation { heads };
    let max_load = orientation_loads(h, &orientation);
    Ok(OrientationReport {
        orientation,
        bound,
        max_load,
        matching_size: matched,
        pass: max_load <= bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyReport {
    /// `Σ_{i <= pn} C(n, i)`.
    pub partial_sum: BigUint,
    /// `2^{H(p)n} = t^n / (s^{pn} (t-s)^{(1-p)n})` for `p = s/t`.
    pub bound: (BigUint, BigUint),
    pub holds: bool,
}

/// `C(n, <= ⌊pn⌋) <= 2^{H(p) n}` by integer cross-multiplication.
pub fn binary_entropy_bound(p: Rational, n: u64) -> Result<EntropyReport, LemmaError> {
    if p <= Rational::zero() || p > Rational::new(1, 2) {
        return Err(LemmaError::EntropyRange(p));
    }
    let (s, t) = (*p.numer() as u64, *p.denom() as u64);
    if !n.is_multiple_of(t) {
        return Err(LemmaError::EntropyDenominator { n, den: t });
    }
    let a = s * n / t;
    let b = n - a;
    let mut partial_sum = BigUint::zero();
    for i in 0..=a {
        partial_sum += binomial_big(n, i);
    }
    let num = num_traits::pow(BigUint::from(t), n as usize);
    let den = num_traits::pow(BigUint::from(s), a as usize)
        * num_traits::pow(BigUint::from(t - s), b as usize);
    let holds = &partial_sum * &den <= num;
    Ok(EntropyReport {
        partial_sum,
        bound: (num, den),
        holds,
    })
}

pub fn is_total(h: &Hypergraph, o: &Orientation) -> bool {
    o.heads.len() == h.edges.len()
        && h.edges
            .iter()
            .zip(&o.heads)
            .all(|(&e, &w)| w < 64 && e >> w & 1 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(n: usize, pairs: &[(usize, usize)]) -> Hypergraph {
        Hypergraph::new(n, 2, pairs.iter().map(|&(a, b)| (1u64 << a) | (1u64 << b))).unwrap()
    }

    #[test]
    fn path_square() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let sq = square_graph(&g).unwrap();
        assert_eq!(sq.edges(), &[0b101]);
        let r = furedi_check(&g).unwrap();
        assert_eq!((r.e2, r.bound, r.pass), (1, 1, true));
        let empty = furedi_check(&graph(5, &[])).unwrap();
        assert_eq!((empty.e2, empty.bound, empty.pass), (0, -2, true));
    }

    #[test]
    fn furedi_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let n = rng.gen_range(2..=12);
            let g = Hypergraph::random(n, 2, rng.gen_range(1..=9), 10, &mut rng).unwrap();
            let r = furedi_check(&g).unwrap();
            assert!(r.pass && r.triangular_edges_in_square);
        }
    }

    #[test]
    fn simplex_counts() {
        assert_eq!(count_simplices(&Hypergraph::complete(4, 3).unwrap()), 1);
        assert_eq!(count_simplices(&Hypergraph::complete(6, 3).unwrap()), 15);
        assert_eq!(count_simplices(&Hypergraph::new(5, 3, []).unwrap()), 0);
        // K_4 minus an edge has two triangles
        let g = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(count_simplices(&g), 2);
    }

    #[test]
    fn kk_exhaustive_n5() {
        let triples: Vec<u64> = Subsets::new(5, 3).collect();
        for bits in 0u32..1 << triples.len() {
            let h = Hypergraph::new(
                5,
                3,
                triples
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits >> i & 1 == 1)
                    .map(|(_, &e)| e),
            )
            .unwrap();
            assert!(kk_check(&h).pass, "{h:?}");
        }
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation_bound(2, 3), 2);
        assert_eq!(orientation_bound(2, 1), 1);
        assert_eq!(orientation_bound(3, 1), 1);
        let tri = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let r = orient(&tri).unwrap();
        assert!(r.pass && is_total(&tri, &r.orientation));
        assert!(r.max_load <= 2);
        let single = Hypergraph::new(4, 3, [0b0111]).unwrap();
        assert_eq!(orient(&single).unwrap().max_load, 1);
    }

    #[test]
    fn orientation_bound_is_least() {
        for ell in 2..=4usize {
            for e in 1..200u64 {
                let l = orientation_bound(ell, e);
                let f = |c: u64| {
                    num_traits::pow(BigUint::from(c), ell)
                        * num_traits::pow(factorial_big(ell as u64), ell - 1)
                        >= num_traits::pow(factorial_big(ell as u64 - 1), ell) * e
                };
                assert!(f(l) && (l == 0 || !f(l - 1)));
            }
        }
    }

    #[test]
    fn entropy_examples() {
        let r = binary_entropy_bound(Rational::new(1, 2), 10).unwrap();
        assert_eq!(r.partial_sum, BigUint::from(638u32));
        assert_eq!(r.bound, (BigUint::from(1024u32), BigUint::one()));
        assert!(r.holds);
        let q = binary_entropy_bound(Rational::new(1, 4), 8).unwrap();
        assert_eq!(q.partial_sum, BigUint::from(37u32));
        assert!(q.holds);
        assert!(binary_entropy_bound(Rational::new(1, 3), 9).unwrap().holds);
        assert!(binary_entropy_bound(Rational::new(2, 3), 9).is_err());
        assert!(binary_entropy_bound(Rational::new(1, 3), 10).is_err());
    }
}

//! Maximising `α + θβ` over `T_k`-free PDGs.
//!
//! Slots are filled in colex order. A slot's code is 0 (absent), 1
//! (undirected) or `2 + j` (directed at the j-th smallest vertex of the
//! slot). Unfilled slots hold 0, so a `T_k` check on the newest slot sees
//! exactly the copies whose three edges are all decided.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{conjectured_construction, contains_tk, EdgeState, Pdg, PdgError};
use crate::combin::{binomial, elements_vec, low_mask, RankTable, Subsets};
use crate::QSqrt2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Every `T_k`-free PDG is visited.
    Exhaustive,
    /// Bound pruning plus lex-leader symmetry breaking on vertex prefixes.
    BranchAndBound,
    /// Random restarts and single-slot hill climbing; a lower bound only.
    Heuristic { restarts: u32, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 2_000_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalReport {
    pub n: usize,
    pub k: usize,
    pub theta: QSqrt2,
    pub mode: SearchMode,
    pub best_value: QSqrt2,
    pub witness: Pdg,
    pub nodes_explored: u64,
    /// `T_k`-free PDGs visited (exhaustive mode only).
    pub free_count: Option<u64>,
    /// True when `best_value` is the proven maximum.
    pub certified: bool,
    pub budget_exhausted: bool,
}

/// Largest vertex count accepted by the search.
const MAX_SEARCH_N: usize = 24;
/// Lex-leader checks enumerate `Sym(m)` and stop at this prefix size.
const MAX_SYMMETRY_PREFIX: usize = 7;

pub fn extremal_search(
    n: usize,
    k: usize,
    theta: &QSqrt2,
    mode: SearchMode,
    budget: SearchBudget,
) -> Result<ExtremalReport, PdgError> {
    if k < 2 || n < k || n > MAX_SEARCH_N {
        return Err(PdgError::BadShape { n, k });
    }
    assert!(*theta > QSqrt2::zero(), "theta must be positive");
    let space = Space::new(n, k);
    let mut ctx = Ctx::new(&space, theta, budget);
    // Seed with the complete undirected PDG (value 1) and the construction.
    ctx.offer(&vec![1u8; space.m]);
    if n > k {
        let c = conjectured_construction(n, k)?;
        ctx.offer(&space.encode(&c));
    }
    let mut free_count = None;
    let complete = match mode {
        SearchMode::Exhaustive | SearchMode::BranchAndBound => {
            let bnb = mode == SearchMode::BranchAndBound;
            let sym = if bnb {
                Symmetry::new(&space)
            } else {
                Symmetry::default()
            };
            let mut cur = vec![0u8; space.m];
            let mut dfs = Dfs {
                ctx: &mut ctx,
                sym: &sym,
                bnb,
                cur: &mut cur,
                free: 0,
            };
            let done = dfs.run(0, 0, 0);
            if !bnb && done {
                free_count = Some(dfs.free);
            }
            done
        }
        SearchMode::Heuristic { restarts, seed } => {
            heuristic(&mut ctx, restarts, seed);
            false
        }
    };
    let witness = space.decode(&ctx.best_codes);
    let best_value = witness.value(theta);
    debug_assert!(!contains_tk(&witness));
    assert!(
        !contains_tk(&witness),
        "search produced a witness containing T_k"
    );
    Ok(ExtremalReport {
        n,
        k,
        theta: theta.clone(),
        mode,
        best_value,
        witness,
        nodes_explored: ctx.nodes,
        free_count,
        certified: complete && !matches!(mode, SearchMode::Heuristic { .. }),
        budget_exhausted: ctx.nodes > ctx.budget.max_nodes,
    })
}

struct Space {
    n: usize,
    k: usize,
    m: usize,
    slots: Vec<u64>,
    members: Vec<Vec<u8>>,
    rank: RankTable,
}

impl Space {
    fn new(n: usize, k: usize) -> Self {
        let slots: Vec<u64> = Subsets::new(n, k).collect();
        let members = slots
            .iter()
            .map(|&s| elements_vec(s).into_iter().map(|v| v as u8).collect())
            .collect();
        Space {
            n,
            k,
            m: slots.len(),
            slots,
            members,
            rank: RankTable::new(n, k),
        }
    }

    #[inline]
    fn head(&self, slot: usize, code: u8) -> usize {
        self.members[slot][code as usize - 2] as usize
    }

    #[inline]
    fn present(&self, cur: &[u8], mask: u64) -> bool {
        cur[self.rank.rank(mask) as usize] != 0
    }

    /// Whether slot `t` takes part in a `T_k` copy under `cur`.
    fn creates_tk(&self, cur: &[u8], t: usize) -> bool {
        let code = cur[t];
        if code == 0 {
            return false;
        }
        let m = self.slots[t];
        let outside = low_mask(self.n) & !m;
        if code >= 2 {
            let zb = 1u64 << self.head(t, code);
            for &x in &self.members[t] {
                let xb = 1u64 << x;
                if xb == zb {
                    continue;
                }
                let mut ys = outside;
                while ys != 0 {
                    let yb = ys & ys.wrapping_neg();
                    ys &= ys - 1;
                    if self.present(cur, (m & !xb) | yb) && self.present(cur, (m & !zb) | yb) {
                        return true;
                    }
                }
            }
        }
        // t as one of the two edges next to a directed edge s = t - y + w
        for &y in &self.members[t] {
            let yb = 1u64 << y;
            let mut ws = outside;
            while ws != 0 {
                let wb = ws & ws.wrapping_neg();
                ws &= ws - 1;
                let s = (m & !yb) | wb;
                let sr = self.rank.rank(s) as usize;
                let sc = cur[sr];
                if sc < 2 {
                    continue;
                }
                let zb = 1u64 << self.head(sr, sc);
                if zb == wb {
                    for &x in &self.members[t] {
                        if x != y && self.present(cur, (m & !(1u64 << x)) | wb) {
                            return true;
                        }
                    }
                } else if self.present(cur, (m & !zb) | wb) {
                    return true;
                }
            }
        }
        false
    }

    fn encode(&self, h: &Pdg) -> Vec<u8> {
        h.states()
            .iter()
            .enumerate()
            .map(|(t, s)| match s {
                EdgeState::Absent => 0,
                EdgeState::Undirected => 1,
                EdgeState::DirectedAt(v) => {
                    2 + self.members[t].iter().position(|u| u == v).expect("head") as u8
                }
            })
            .collect()
    }

    fn decode(&self, codes: &[u8]) -> Pdg {
        let states = codes
            .iter()
            .enumerate()
            .map(|(t, &c)| match c {
                0 => EdgeState::Absent,
                1 => EdgeState::Undirected,
                _ => EdgeState::DirectedAt(self.head(t, c) as u8),
            })
            .collect();
        Pdg::from_states(self.n, self.k, states)
    }
}

/// Best value so far with exact integer thresholds: a state with `X`
/// undirected and `Y` directed edges beats the best iff `X > thr[Y]`,
/// where `thr[Y] = ⌊B - θY⌋` and `B` is the best `e_u + θ e_d`.
struct Ctx<'a> {
    space: &'a Space,
    theta: &'a QSqrt2,
    theta_ge_one: bool,
    best_codes: Vec<u8>,
    thr: Vec<i64>,
    nodes: u64,
    budget: SearchBudget,
}

impl<'a> Ctx<'a> {
    fn new(space: &'a Space, theta: &'a QSqrt2, budget: SearchBudget) -> Self {
        Ctx {
            space,
            theta,
            theta_ge_one: *theta >= QSqrt2::one(),
            best_codes: vec![0; space.m],
            thr: vec![i64::MIN; space.m + 1],
            nodes: 0,
            budget,
        }
    }

    #[inline]
    fn beats(&self, x: usize, y: usize) -> bool {
        x as i64 > self.thr[y]
    }

    fn set_best(&mut self, codes: &[u8], x: usize, y: usize) {
        self.best_codes.copy_from_slice(codes);
        let b = QSqrt2::from_int(x as i64) + self.theta.mul_int(y as i64);
        for (yy, slot) in self.thr.iter_mut().enumerate() {
            let v = (&b - &self.theta.mul_int(yy as i64)).floor();
            *slot = v.to_i64().expect("threshold fits in i64");
        }
    }

    fn counts(codes: &[u8]) -> (usize, usize) {
        codes.iter().fold((0, 0), |(u, d), &c| match c {
            0 => (u, d),
            1 => (u + 1, d),
            _ => (u, d + 1),
        })
    }

    /// Offer a complete, `T_k`-free candidate.
    fn offer(&mut self, codes: &[u8]) {
        let (x, y) = Self::counts(codes);
        if self.beats(x, y) {
            debug_assert!((0..codes.len()).all(|t| !self.space.creates_tk(codes, t)));
            self.set_best(codes, x, y);
        }
    }
}

struct Dfs<'c, 'a> {
    ctx: &'c mut Ctx<'a>,
    sym: &'c Symmetry,
    bnb: bool,
    cur: &'c mut Vec<u8>,
    free: u64,
}

impl Dfs<'_, '_> {
    /// Returns false when the node budget ran out.
    fn run(&mut self, t: usize, undirected: usize, directed: usize) -> bool {
        self.ctx.nodes += 1;
        if self.ctx.nodes > self.ctx.budget.max_nodes {
            return false;
        }
        let m = self.ctx.space.m;
        if self.bnb && !self.sym.is_leader(self.cur, t) {
            return true;
        }
        if t == m {
            self.free += 1;
            if self.ctx.beats(undirected, directed) {
                let codes = self.cur.clone();
                self.ctx.set_best(&codes, undirected, directed);
            }
            return true;
        }
        if self.bnb {
            let rem = m - t;
            let (x, y) = if self.ctx.theta_ge_one {
                (undirected + rem, directed + rem)
            } else {
                (undirected + rem, directed)
            };
            if !self.ctx.beats(x, y) {
                return true;
            }
        }
        let k = self.ctx.space.k as u8;
        // directed codes first, heads from the largest vertex down
        for code in (0..k + 2).rev() {
            self.cur[t] = code;
            if code == 0 || !self.ctx.space.creates_tk(self.cur, t) {
                let (u, d) = match code {
                    0 => (undirected, directed),
                    1 => (undirected + 1, directed),
                    _ => (undirected, directed + 1),
                };
                if !self.run(t + 1, u, d) {
                    self.cur[t] = 0;
                    return false;
                }
            }
        }
        self.cur[t] = 0;
        true
    }
}

/// For each prefix size `m`, the action of `Sym(m)` on the first `C(m,k)`
/// slots: slot images and code images.
/// Slot image and, per code, its image under one permutation.
type PermImage = (Vec<u32>, Vec<Vec<u8>>);

#[derive(Default)]
struct Symmetry {
    /// (block length, images of every permutation)
    blocks: Vec<(usize, Vec<PermImage>)>,
}

impl Symmetry {
    fn new(space: &Space) -> Self {
        let mut blocks = Vec::new();
        let k = space.k;
        for m in k + 1..=space.n.min(MAX_SYMMETRY_PREFIX) {
            let len = binomial(m, k) as usize;
            let mut perms = Vec::new();
            let mut p: Vec<usize> = (0..m).collect();
            loop {
                if p.iter().enumerate().any(|(i, &v)| i != v) {
                    let mut slot_img = Vec::with_capacity(len);
                    let mut code_img = Vec::with_capacity(len);
                    for t in 0..len {
                        let image = space.members[t]
                            .iter()
                            .fold(0u64, |acc, &v| acc | 1 << p[v as usize]);
                        slot_img.push(space.rank.rank(image));
                        let img_members = crate::combin::elements_vec(image);
                        let mut codes = vec![0u8, 1];
                        for &v in &space.members[t] {
                            let pos = img_members
                                .iter()
                                .position(|&u| u == p[v as usize])
                                .expect("member");
                            codes.push(2 + pos as u8);
                        }
                        code_img.push(codes);
                    }
                    perms.push((slot_img, code_img));
                }
                if !next_permutation(&mut p) {
                    break;
                }
            }
            blocks.push((len, perms));
        }
        Symmetry { blocks }
    }

    /// At a block boundary, reject the prefix if some permutation maps it to
    /// a lexicographically larger code sequence.
    fn is_leader(&self, cur: &[u8], t: usize) -> bool {
        let Some((len, perms)) = self.blocks.iter().find(|(len, _)| *len == t) else {
            return true;
        };
        let mut image = vec![0u8; *len];
        for (slot_img, code_img) in perms {
            for s in 0..*len {
                image[slot_img[s] as usize] = code_img[s][cur[s] as usize];
            }
            if image[..] > cur[..*len] {
                return false;
            }
        }
        true
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn heuristic(ctx: &mut Ctx<'_>, restarts: u32, seed: u64) {
    let space = ctx.space;
    let k = space.k as u8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..space.m).collect();
    let mut starts: Vec<Vec<u8>> = vec![vec![1u8; space.m]];
    if space.n > space.k {
        starts.push(ctx.best_codes.clone());
    }
    for r in 0..restarts.max(1) as usize {
        let mut cur = if r < starts.len() {
            starts[r].clone()
        } else {
            // random greedy fill
            let mut cur = vec![0u8; space.m];
            order.shuffle(&mut rng);
            for &t in &order {
                let mut codes: Vec<u8> = (1..k + 2).collect();
                codes.shuffle(&mut rng);
                for c in codes {
                    cur[t] = c;
                    if !space.creates_tk(&cur, t) {
                        break;
                    }
                    cur[t] = 0;
                }
            }
            cur
        };
        let (mut x, mut y) = Ctx::counts(&cur);
        loop {
            let mut improved = false;
            order.shuffle(&mut rng);
            for &t in &order {
                let old = cur[t];
                let start = rng.gen_range(0..k + 2);
                for i in 0..k + 2 {
                    let c = (start + i) % (k + 2);
                    ctx.nodes += 1;
                    if c == old {
                        continue;
                    }
                    let (nx, ny) = shift(x, y, old, c);
                    if !gain_positive(ctx, x, y, nx, ny) {
                        continue;
                    }
                    cur[t] = c;
                    if space.creates_tk(&cur, t) {
                        cur[t] = old;
                        continue;
                    }
                    x = nx;
                    y = ny;
                    improved = true;
                    break;
                }
                if ctx.nodes > ctx.budget.max_nodes {
                    break;
                }
            }
            if !improved || ctx.nodes > ctx.budget.max_nodes {
                break;
            }
        }
        ctx.offer(&cur);
        if ctx.nodes > ctx.budget.max_nodes {
            return;
        }
    }
}

fn shift(x: usize, y: usize, old: u8, new: u8) -> (usize, usize) {
    let (mut x, mut y) = (x, y);
    match old {
        0 => {}
        1 => x -= 1,
        _ => y -= 1,
    }
    match new {
        0 => {}
        1 => x += 1,
        _ => y += 1,
    }
    (x, y)
}

/// Whether `(nx, ny)` is strictly better than `(x, y)`.
fn gain_positive(ctx: &Ctx<'_>, x: usize, y: usize, nx: usize, ny: usize) -> bool {
    let dx = nx as i64 - x as i64;
    let dy = ny as i64 - y as i64;
    let gain = QSqrt2::from_int(dx) + ctx.theta.mul_int(dy);
    gain > QSqrt2::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdg::make_tk;

    fn theta(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    #[test]
    fn incremental_check_matches_full_scan() {
        let space = Space::new(4, 2);
        let mut count = 0;
        // all 4^6 PDGs on 4 vertices
        for idx in 0..4u32.pow(6) {
            let codes: Vec<u8> = (0..6).map(|t| (idx / 4u32.pow(t) % 4) as u8).collect();
            let h = space.decode(&codes);
            let any = (0..6).any(|t| space.creates_tk(&codes, t));
            assert_eq!(any, contains_tk(&h));
            count += u32::from(!any);
        }
        assert!(count > 0);
        let t3 = make_tk(3);
        let s3 = Space::new(4, 3);
        let c = s3.encode(&t3);
        assert!((0..4).any(|t| s3.creates_tk(&c, t)));
    }

    #[test]
    fn small_extremal_values() {
        let two = theta("2");
        let r =
            extremal_search(3, 2, &two, SearchMode::Exhaustive, SearchBudget::default()).unwrap();
        assert_eq!(r.best_value, theta("4/3"));
        assert!(r.certified);
        let r = extremal_search(
            5,
            2,
            &two,
            SearchMode::BranchAndBound,
            SearchBudget::default(),
        )
        .unwrap();
        assert_eq!(r.best_value, theta("6/5"));
    }

    #[test]
    fn modes_agree() {
        for (n, k, t) in [
            (4, 2, "2"),
            (4, 3, "5/3"),
            (5, 3, "1 + 1/2*sqrt2"),
            (4, 2, "1/2"),
        ] {
            let th = theta(t);
            let e = extremal_search(n, k, &th, SearchMode::Exhaustive, SearchBudget::default())
                .unwrap();
            let b = extremal_search(
                n,
                k,
                &th,
                SearchMode::BranchAndBound,
                SearchBudget::default(),
            )
            .unwrap();
            assert_eq!(e.best_value, b.best_value, "n={n} k={k} theta={t}");
            let h = extremal_search(
                n,
                k,
                &th,
                SearchMode::Heuristic {
                    restarts: 8,
                    seed: 1,
                },
                SearchBudget::default(),
            )
            .unwrap();
            assert!(h.best_value <= e.best_value);
            assert!(!h.certified);
        }
    }

    #[test]
    fn budget_is_reported() {
        let r = extremal_search(
            5,
            2,
            &theta("2"),
            SearchMode::Exhaustive,
            SearchBudget { max_nodes: 100 },
        )
        .unwrap();
        assert!(!r.certified && r.budget_exhausted);
        assert!(r.best_value >= QSqrt2::one());
    }
}

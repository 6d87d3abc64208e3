//! The finite kernel of the `T_k` Turán bound for `k >= 4`.
//!
//! A `k`-PDG on `k+1` vertices is the same thing as a digraph with out-degree
//! at most one: the edge missing vertex `i` becomes `i → j` when directed at
//! `j`, a loop at `i` when undirected, and nothing when absent. The bound
//! reduces to an inequality over the pattern-free such digraphs, checked
//! here exactly in `Q(√2)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::combin::low_mask;
use crate::pdg::{EdgeState, Pdg};
use crate::{QSqrt2, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertError {
    #[error("expected a PDG on k+1 vertices, got n = {n}, k = {k}")]
    WrongVertexCount { n: usize, k: usize },
    #[error("digraph contains the forbidden pattern")]
    PatternPresent,
    #[error("the default parameters need k >= 4 (got {k})")]
    ParamsNeedKAtLeast4 { k: usize },
    #[error("k = {k} outside the supported range {min}..={max}")]
    KOutOfRange { k: usize, min: usize, max: usize },
    #[error("enumeration of {count} digraphs exceeds the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u64 },
}

/// Out-degree at most one digraph on `k+1` vertices; loops allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digraph {
    out: Vec<Option<u8>>,
}

impl Digraph {
    pub fn new(out: Vec<Option<u8>>) -> Self {
        let n = out.len();
        assert!(
            out.iter().flatten().all(|&t| (t as usize) < n),
            "target out of range"
        );
        Digraph { out }
    }

    pub fn vertices(&self) -> usize {
        self.out.len()
    }

    pub fn out(&self, v: usize) -> Option<usize> {
        self.out[v].map(usize::from)
    }

    pub fn loops(&self) -> usize {
        self.out
            .iter()
            .enumerate()
            .filter(|(i, t)| **t == Some(*i as u8))
            .count()
    }

    /// Number of non-loop edges.
    pub fn arcs(&self) -> usize {
        self.out
            .iter()
            .enumerate()
            .filter(|(i, t)| matches!(t, Some(j) if *j as usize != *i))
            .count()
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, t) in self.out.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match t {
                Some(j) => write!(f, "{}>{}", i + 1, j + 1)?,
                None => write!(f, "{}>-", i + 1)?,
            }
        }
        write!(f, "]")
    }
}

pub fn to_digraph(h: &Pdg) -> Result<Digraph, CertError> {
    let k = h.k();
    if h.n() != k + 1 {
        return Err(CertError::WrongVertexCount { n: h.n(), k });
    }
    let full = low_mask(k + 1);
    let out = (0..=k)
        .map(|i| match h.get(full & !(1 << i)) {
            EdgeState::Absent => None,
            EdgeState::Undirected => Some(i as u8),
            EdgeState::DirectedAt(j) => Some(j),
        })
        .collect();
    Ok(Digraph { out })
}

/// Inverse of [`to_digraph`]. An arc `i → i` is a loop; an arc `i → j`
/// needs `j ≠ i`, which always holds for the edge missing `i`.
pub fn from_digraph(d: &Digraph) -> Pdg {
    let n = d.vertices();
    let mut h = Pdg::empty(n, n - 1).expect("valid shape");
    let full = low_mask(n);
    for (i, t) in d.out.iter().enumerate() {
        let state = match t {
            None => EdgeState::Absent,
            Some(j) if *j as usize == i => EdgeState::Undirected,
            Some(j) => EdgeState::DirectedAt(*j),
        };
        h.set(full & !(1 << i), state).expect("edge");
    }
    h
}

/// `i1 → i2 → *` and `i3 → *` for distinct `i1, i2, i3`.
pub fn has_forbidden_pattern(d: &Digraph) -> bool {
    pattern_in(&d.out)
}

fn pattern_in(out: &[Option<u8>]) -> bool {
    let active = out.iter().filter(|t| t.is_some()).count();
    active >= 3
        && out
            .iter()
            .enumerate()
            .any(|(i, t)| matches!(t, Some(j) if *j as usize != i && out[*j as usize].is_some()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseKind {
    A,
    B,
    C,
    D,
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseKind::A => "A",
            CaseKind::B => "B",
            CaseKind::C => "C",
            CaseKind::D => "D",
        };
        f.write_str(s)
    }
}

/// Case of a pattern-free digraph. Vertices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseLabel {
    /// `i → j → i`, nothing else.
    A { i: usize, j: usize },
    /// `i → j → j`, nothing else.
    B { i: usize, j: usize },
    /// `i1 → i2 → i3`, nothing else.
    C { i1: usize, i2: usize, i3: usize },
    /// Loops plus in-stars: every arc ends at a vertex of out-degree 0.
    D { loops: usize, arcs: usize },
}

impl CaseLabel {
    pub fn kind(&self) -> CaseKind {
        match self {
            CaseLabel::A { .. } => CaseKind::A,
            CaseLabel::B { .. } => CaseKind::B,
            CaseLabel::C { .. } => CaseKind::C,
            CaseLabel::D { .. } => CaseKind::D,
        }
    }
}

/// Case membership tests, written independently of [`classify_case`] so the
/// partition property can be checked.
pub fn case_predicates(d: &Digraph) -> [bool; 4] {
    let n = d.vertices();
    let out = |v: usize| d.out(v);
    let active: Vec<usize> = (0..n).filter(|&v| out(v).is_some()).collect();
    let two = active.len() == 2;
    let a = two && {
        let (i, j) = (active[0], active[1]);
        out(i) == Some(j) && out(j) == Some(i)
    };
    let b = two
        && active
            .iter()
            .any(|&i| matches!(out(i), Some(j) if j != i && out(j) == Some(j)));
    let c = two && active.iter().any(
        |&i| matches!(out(i), Some(j) if j != i && matches!(out(j), Some(t) if t != i && t != j)),
    );
    let dd = (0..n).all(|i| match out(i) {
        Some(j) if j != i => out(j).is_none(),
        _ => true,
    });
    [a, b, c, dd]
}

pub fn classify_case(d: &Digraph) -> Result<CaseLabel, CertError> {
    if has_forbidden_pattern(d) {
        return Err(CertError::PatternPresent);
    }
    // an arc whose target still has an out-edge forces cases A-C
    for i in 0..d.vertices() {
        let Some(j) = d.out(i) else { continue };
        if j == i {
            continue;
        }
        if let Some(t) = d.out(j) {
            return Ok(if t == i {
                CaseLabel::A {
                    i: i.min(j),
                    j: i.max(j),
                }
            } else if t == j {
                CaseLabel::B { i, j }
            } else {
                CaseLabel::C {
                    i1: i,
                    i2: j,
                    i3: t,
                }
            });
        }
    }
    Ok(CaseLabel::D {
        loops: d.loops(),
        arcs: d.arcs(),
    })
}

/// The coefficients `θ`, `a`, `b` of the inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    pub theta: QSqrt2,
    pub a: QSqrt2,
    pub b: QSqrt2,
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theta = {}, a = {}, b = {}", self.theta, self.a, self.b)
    }
}

/// `θ = 1 + √2/2`, `a = √2/2`, `b = k/2 - √2/2`.
pub fn default_params(k: usize) -> Result<Params, CertError> {
    if k < 4 {
        return Err(CertError::ParamsNeedKAtLeast4 { k });
    }
    let half_root = QSqrt2::sqrt2().div_int(2);
    Ok(Params {
        theta: QSqrt2::one() + &half_root,
        a: half_root.clone(),
        b: QSqrt2::from_ratio(k as i64, 2) - half_root,
    })
}

/// Ordered-pair counts over distinct `(y, z)`; the probabilities of the
/// inequality are these divided by `(k+1)k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PairCounts {
    /// `z → z`
    pub loop_z: u64,
    /// `z → y`
    pub arc_zy: u64,
    /// `y → ∅` and `z → ∅`
    pub both_empty: u64,
    /// `y → z` and `z → ∅`
    pub arc_into_sink: u64,
    /// `y → z` and `z → y`
    pub two_cycle: u64,
}

pub fn pair_counts(d: &Digraph) -> PairCounts {
    let n = d.vertices();
    let mut c = PairCounts::default();
    for y in 0..n {
        for z in 0..n {
            if y == z {
                continue;
            }
            let (oy, oz) = (d.out(y), d.out(z));
            c.loop_z += u64::from(oz == Some(z));
            c.arc_zy += u64::from(oz == Some(y));
            c.both_empty += u64::from(oy.is_none() && oz.is_none());
            c.arc_into_sink += u64::from(oy == Some(z) && oz.is_none());
            c.two_cycle += u64::from(oy == Some(z) && oz == Some(y));
        }
    }
    c
}

/// The left side from pair counts.
pub fn lhs_from_counts(k: usize, c: &PairCounts, p: &Params) -> QSqrt2 {
    let ab2 = (&p.a * &p.b).mul_int(2);
    let total = QSqrt2::from_int(c.loop_z as i64)
        + p.theta.mul_int((k as u64 * c.arc_zy) as i64)
        + (&p.a * &p.a).mul_int(c.both_empty as i64)
        - ab2.mul_int(c.arc_into_sink as i64)
        + (&p.b * &p.b).mul_int(c.two_cycle as i64);
    total.div_int(((k + 1) * k) as i64)
}

/// `P(z→z) + kθ P(z→y) + a² P(y→∅ ∧ z→∅) − 2ab P(y→z ∧ z→∅) + b² P(y→z ∧ z→y)`
/// over a uniformly random ordered pair of distinct vertices.
pub fn lhs_d_ineq(d: &Digraph, p: &Params) -> Result<QSqrt2, CertError> {
    if has_forbidden_pattern(d) {
        return Err(CertError::PatternPresent);
    }
    let k = d.vertices() - 1;
    Ok(lhs_from_counts(k, &pair_counts(d), p))
}

/// Pair counts predicted by the case table for a digraph with `u` loops
/// and `d` arcs.
pub fn closed_form_counts(k: usize, kind: CaseKind, u: usize, d: usize) -> PairCounts {
    let k = k as u64;
    let (u, d) = (u as u64, d as u64);
    let e0 = k + 1 - u - d;
    PairCounts {
        loop_z: u * k,
        arc_zy: d,
        both_empty: e0 * e0.saturating_sub(1),
        arc_into_sink: match kind {
            CaseKind::A | CaseKind::B => 0,
            CaseKind::C => 1,
            CaseKind::D => d,
        },
        two_cycle: if kind == CaseKind::A { 2 } else { 0 },
    }
}

/// `(u, d)` for the shape of each case.
pub fn case_loops_arcs(label: &CaseLabel) -> (usize, usize) {
    match *label {
        CaseLabel::A { .. } => (0, 2),
        CaseLabel::B { .. } => (1, 1),
        CaseLabel::C { .. } => (0, 2),
        CaseLabel::D { loops, arcs } => (loops, arcs),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertMode {
    Enumeration,
    ClosedForm,
}

/// A digraph (or case shape) whose left side exceeds 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    pub kind: CaseKind,
    pub loops: usize,
    pub arcs: usize,
    /// A representative digraph (enumeration mode only).
    pub example: Option<Digraph>,
    pub lhs: QSqrt2,
}

/// Shapes attaining the left side exactly 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TightCase {
    pub kind: CaseKind,
    pub loops: usize,
    pub arcs: usize,
    /// Digraphs of this shape (enumeration mode only).
    pub count: Option<u64>,
    /// The all-loops digraph reaches 1 through `P(z→z) = 1` alone.
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertReport {
    pub k: usize,
    pub params: Params,
    pub mode: CertMode,
    pub digraphs_checked: u64,
    pub pattern_free: u64,
    /// Pattern-free digraphs per case A, B, C, D.
    pub case_counts: [u64; 4],
    /// Digraphs matching zero or several case predicates.
    pub classification_errors: u64,
    /// Digraphs whose pair counts differ from the case table.
    pub closed_form_mismatches: u64,
    pub failures: Vec<Failure>,
    pub tight_cases: Vec<TightCase>,
    /// `2θ² − 4θ + 1 = 0`.
    pub theta_quadratic_zero: bool,
    /// A rational `r <= θ` with `2^r > 3`, if `⌊1000θ⌋/1000` works.
    pub theta_lower_bound: Option<Rational>,
    pub passed: bool,
}

/// Budget for enumeration mode, in digraphs.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 50_000_000;
pub const MAX_CLOSED_FORM_K: usize = 100;

fn is_trivial(kind: CaseKind, loops: usize, arcs: usize, k: usize) -> bool {
    kind == CaseKind::D && arcs == 0 && loops == k + 1
}

/// Checks `2^(⌊1000θ⌋/1000) > 3`, i.e. `2^⌊1000θ⌋ > 3^1000`.
pub fn theta_exceeds_log2_3(theta: &QSqrt2) -> Option<Rational> {
    let scaled = theta.mul_int(1000).floor().to_i64()?;
    if scaled <= 0 {
        return None;
    }
    let two = BigUint::from(2u8).pow(scaled as u32);
    let three = BigUint::from(3u8).pow(1000);
    (two > three).then(|| Rational::new(scaled, 1000))
}

fn theta_quadratic_zero(theta: &QSqrt2) -> bool {
    ((theta * theta).mul_int(2) - theta.mul_int(4) + QSqrt2::one()).is_zero()
}

/// Partial enumeration result for the digraphs whose vertex 0 has the given
/// out-choice (`None` = no out-edge). Slices can be merged in any order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnumerationSlice {
    pub digraphs_checked: u64,
    pub pattern_free: u64,
    pub case_counts: [u64; 4],
    pub classification_errors: u64,
    pub closed_form_mismatches: u64,
    /// Keyed by (case, loops, arcs).
    pub failures: BTreeMap<(CaseKind, usize, usize), (Digraph, QSqrt2)>,
    pub tight: BTreeMap<(CaseKind, usize, usize), u64>,
}

impl EnumerationSlice {
    pub fn merge(&mut self, other: EnumerationSlice) {
        self.digraphs_checked += other.digraphs_checked;
        self.pattern_free += other.pattern_free;
        for i in 0..4 {
            self.case_counts[i] += other.case_counts[i];
        }
        self.classification_errors += other.classification_errors;
        self.closed_form_mismatches += other.closed_form_mismatches;
        for (key, v) in other.failures {
            // keep the smallest representative for determinism
            match self.failures.get(&key) {
                Some((d, _)) if *d <= v.0 => {}
                _ => {
                    self.failures.insert(key, v);
                }
            }
        }
        for (key, c) in other.tight {
            *self.tight.entry(key).or_insert(0) += c;
        }
    }
}

/// All `(k+2)^k` digraphs with a fixed out-choice at vertex 0.
pub fn enumerate_slice(k: usize, p: &Params, lead: Option<u8>) -> EnumerationSlice {
    let n = k + 1;
    let mut slice = EnumerationSlice::default();
    let mut memo: BTreeMap<PairCounts, QSqrt2> = BTreeMap::new();
    let one = QSqrt2::one();
    let mut out: Vec<Option<u8>> = vec![None; n];
    out[0] = lead;
    loop {
        slice.digraphs_checked += 1;
        if !pattern_in(&out) {
            slice.pattern_free += 1;
            let d = Digraph { out: out.clone() };
            let label = classify_case(&d).expect("pattern-free");
            let kind = label.kind();
            slice.case_counts[kind as usize] += 1;
            let preds = case_predicates(&d);
            if preds.iter().filter(|&&b| b).count() != 1 || !preds[kind as usize] {
                slice.classification_errors += 1;
            }
            let counts = pair_counts(&d);
            let (u, a) = case_loops_arcs(&label);
            if counts != closed_form_counts(k, kind, u, a) {
                slice.closed_form_mismatches += 1;
            }
            let lhs = memo
                .entry(counts)
                .or_insert_with(|| lhs_from_counts(k, &counts, p));
            match (*lhs).cmp(&one) {
                core::cmp::Ordering::Greater => {
                    let key = (kind, u, a);
                    match slice.failures.get(&key) {
                        Some((prev, _)) if *prev <= d => {}
                        _ => {
                            let v = lhs.clone();
                            slice.failures.insert(key, (d, v));
                        }
                    }
                }
                core::cmp::Ordering::Equal => *slice.tight.entry((kind, u, a)).or_insert(0) += 1,
                core::cmp::Ordering::Less => {}
            }
        }
        // odometer over vertices 1..n, each in {None, 0..n}
        let mut i = 1;
        loop {
            if i == n {
                return slice;
            }
            out[i] = match out[i] {
                None => Some(0),
                Some(t) if (t as usize) + 1 < n => Some(t + 1),
                Some(_) => None,
            };
            if out[i].is_some() {
                break;
            }
            i += 1;
        }
    }
}

/// Number of digraphs enumeration mode visits: `(k+2)^(k+1)`.
pub fn enumeration_size(k: usize) -> u128 {
    (k as u128 + 2).pow(k as u32 + 1)
}

pub fn lead_choices(k: usize) -> impl Iterator<Item = Option<u8>> {
    core::iter::once(None).chain((0..=k as u8).map(Some))
}

/// Assemble a report from merged enumeration results.
pub fn report_from_slice(k: usize, p: &Params, s: EnumerationSlice) -> CertReport {
    let failures: Vec<Failure> = s
        .failures
        .into_iter()
        .map(|((kind, loops, arcs), (d, lhs))| Failure {
            kind,
            loops,
            arcs,
            example: Some(d),
            lhs,
        })
        .collect();
    let tight_cases = s
        .tight
        .into_iter()
        .map(|((kind, loops, arcs), c)| TightCase {
            kind,
            loops,
            arcs,
            count: Some(c),
            trivial: is_trivial(kind, loops, arcs, k),
        })
        .collect();
    let passed =
        failures.is_empty() && s.classification_errors == 0 && s.closed_form_mismatches == 0;
    CertReport {
        k,
        params: p.clone(),
        mode: CertMode::Enumeration,
        digraphs_checked: s.digraphs_checked,
        pattern_free: s.pattern_free,
        case_counts: s.case_counts,
        classification_errors: s.classification_errors,
        closed_form_mismatches: s.closed_form_mismatches,
        failures,
        tight_cases,
        theta_quadratic_zero: theta_quadratic_zero(&p.theta),
        theta_lower_bound: theta_exceeds_log2_3(&p.theta),
        passed,
    }
}

/// Feasible `(case, u, d)` shapes: A, B, C with their fixed shapes, and D
/// with `u <= k+1` when `d = 0`, `u + d <= k` when `d >= 1`.
pub fn feasible_shapes(k: usize) -> Vec<(CaseKind, usize, usize)> {
    let mut v = vec![
        (CaseKind::A, 0, 2),
        (CaseKind::B, 1, 1),
        (CaseKind::C, 0, 2),
    ];
    for u in 0..=k + 1 {
        v.push((CaseKind::D, u, 0));
    }
    for d in 1..=k {
        for u in 0..=k - d {
            v.push((CaseKind::D, u, d));
        }
    }
    v
}

pub fn verify_certificate(
    k: usize,
    params: Option<Params>,
    mode: CertMode,
    budget: u64,
) -> Result<CertReport, CertError> {
    if k < 2 {
        return Err(CertError::KOutOfRange {
            k,
            min: 2,
            max: MAX_CLOSED_FORM_K,
        });
    }
    let p = match params {
        Some(p) => p,
        None => default_params(k)?,
    };
    match mode {
        CertMode::Enumeration => {
            let size = enumeration_size(k);
            if size > u128::from(budget) {
                return Err(CertError::BudgetExceeded {
                    count: size,
                    budget,
                });
            }
            let mut all = EnumerationSlice::default();
            for lead in lead_choices(k) {
                all.merge(enumerate_slice(k, &p, lead));
            }
            Ok(report_from_slice(k, &p, all))
        }
        CertMode::ClosedForm => {
            if k > MAX_CLOSED_FORM_K {
                return Err(CertError::KOutOfRange {
                    k,
                    min: 2,
                    max: MAX_CLOSED_FORM_K,
                });
            }
            let one = QSqrt2::one();
            let fast = ScaledLhs::new(k, &p);
            let mut failures = Vec::new();
            let mut tight_cases = Vec::new();
            let shapes = feasible_shapes(k);
            for &(kind, u, d) in &shapes {
                let counts = closed_form_counts(k, kind, u, d);
                let order = match fast.as_ref().and_then(|f| f.cmp_one(&counts)) {
                    Some(o) => o,
                    None => lhs_from_counts(k, &counts, &p).cmp(&one),
                };
                match order {
                    core::cmp::Ordering::Greater => {
                        let lhs = lhs_from_counts(k, &counts, &p);
                        failures.push(Failure {
                            kind,
                            loops: u,
                            arcs: d,
                            example: None,
                            lhs,
                        })
                    }
                    core::cmp::Ordering::Equal => tight_cases.push(TightCase {
                        kind,
                        loops: u,
                        arcs: d,
                        count: None,
                        trivial: is_trivial(kind, u, d, k),
                    }),
                    core::cmp::Ordering::Less => {}
                }
            }
            Ok(CertReport {
                k,
                params: p.clone(),
                mode,
                digraphs_checked: shapes.len() as u64,
                pattern_free: shapes.len() as u64,
                case_counts: [0; 4],
                classification_errors: 0,
                closed_form_mismatches: 0,
                passed: failures.is_empty(),
                failures,
                tight_cases,
                theta_quadratic_zero: theta_quadratic_zero(&p.theta),
                theta_lower_bound: theta_exceeds_log2_3(&p.theta),
            })
        }
    }
}

/// The left side times `(k+1)k·D` as `P + Q√2` with integer coefficients
/// per pair count, `D` a common denominator of the parameters.
struct ScaledLhs {
    p: [i128; 5],
    q: [i128; 5],
    rhs: i128,
}

impl ScaledLhs {
    fn new(k: usize, params: &Params) -> Option<Self> {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::One;
        let ka = QSqrt2::from_int(k as i64);
        let consts = [
            QSqrt2::one(),
            &params.theta * &ka,
            &params.a * &params.a,
            -(&params.a * &params.b).mul_int(2),
            &params.b * &params.b,
        ];
        let mut den = BigInt::one();
        for c in &consts {
            den = den
                .lcm(c.rational_part().denom())
                .lcm(c.sqrt2_part().denom());
        }
        let scale = |r: &num_rational::BigRational| (r.numer() * (&den / r.denom())).to_i128();
        let mut p = [0i128; 5];
        let mut q = [0i128; 5];
        for (i, c) in consts.iter().enumerate() {
            p[i] = scale(c.rational_part())?;
            q[i] = scale(c.sqrt2_part())?;
        }
        let rhs = (den * BigInt::from((k + 1) * k)).to_i128()?;
        Some(ScaledLhs { p, q, rhs })
    }

    /// `None` on overflow.
    fn cmp_one(&self, c: &PairCounts) -> Option<core::cmp::Ordering> {
        let xs = [
            c.loop_z,
            c.arc_zy,
            c.both_empty,
            c.arc_into_sink,
            c.two_cycle,
        ];
        let (mut a, mut b) = (-self.rhs, 0i128);
        for ((x, p), q) in xs.into_iter().zip(self.p).zip(self.q) {
            let x = i128::from(x);
            a = a.checked_add(p.checked_mul(x)?)?;
            b = b.checked_add(q.checked_mul(x)?)?;
        }
        sign_a_plus_b_sqrt2(a, b)
    }
}

/// Sign of `a + b√2`, or `None` on overflow.
fn sign_a_plus_b_sqrt2(a: i128, b: i128) -> Option<core::cmp::Ordering> {
    use core::cmp::Ordering::*;
    let (sa, sb) = (a.cmp(&0), b.cmp(&0));
    Some(match (sa, sb) {
        (Equal, _) => sb,
        (_, Equal) => sa,
        _ if sa == sb => sa,
        _ => {
            // opposite signs: compare a² with 2b²
            let a2 = a.checked_mul(a)?;
            let b2 = b.checked_mul(b)?.checked_mul(2)?;
            match a2.cmp(&b2) {
                Greater => sa,
                Less => sb,
                Equal => Equal,
            }
        }
    })
}

/// Parameters `a = 1/√2`, `b = (k(θ−1)−1)/√2` for a rational `θ`.
pub fn family_params(k: usize, theta: Rational) -> Params {
    let t = QSqrt2::from_rational(&theta);
    let a = QSqrt2::sqrt2().div_int(2);
    let b = (t.mul_int(k as i64) - QSqrt2::from_int(k as i64 + 1)) * &a;
    Params { theta: t, a, b }
}

/// Bisection over rational `θ ∈ [1, 2]` for the largest value passing the
/// closed-form check within the family of [`family_params`]. Returns the
/// last passing and first failing endpoints. This bounds what the finite
/// certificate can show; it says nothing about the true threshold.
pub fn theta_sweep(k: usize, steps: u32) -> (Rational, Rational) {
    let passes = |t: Rational| {
        verify_certificate(k, Some(family_params(k, t)), CertMode::ClosedForm, 0)
            .map(|r| r.passed)
            .unwrap_or(false)
    };
    let (mut lo, mut hi) = (Rational::from_integer(1), Rational::from_integer(2));
    for _ in 0..steps {
        let mid = (lo + hi) / 2;
        if passes(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdg::{contains_tk, make_tk};

    fn dg(out: &[Option<u8>]) -> Digraph {
        Digraph::new(out.to_vec())
    }

    #[test]
    fn digraph_of_tk() {
        // T_3 = {123, 12^4, 134} on 0-based vertices {012, 01^3, 023}
        let d = to_digraph(&make_tk(3)).unwrap();
        assert_eq!(d.out(3), Some(3)); // 012 misses 3, undirected
        assert_eq!(d.out(2), Some(3)); // 013 misses 2, directed at 3
        assert_eq!(d.out(1), Some(1)); // 023 misses 1, undirected
        assert_eq!(d.out(0), None);
        assert!(has_forbidden_pattern(&d));
        assert_eq!(from_digraph(&d), make_tk(3));
    }

    #[test]
    fn pattern_examples() {
        assert!(has_forbidden_pattern(&dg(&[Some(1), Some(1), Some(2)])));
        assert!(!has_forbidden_pattern(&dg(&[Some(1), Some(0), None])));
        let all_loops = dg(&[Some(0), Some(1), Some(2), Some(3), Some(4)]);
        assert_eq!(
            classify_case(&all_loops).unwrap(),
            CaseLabel::D { loops: 5, arcs: 0 }
        );
        assert_eq!(
            classify_case(&dg(&[Some(1), Some(0), None, None])).unwrap(),
            CaseLabel::A { i: 0, j: 1 }
        );
        assert_eq!(
            classify_case(&dg(&[Some(1), Some(2), None, None])).unwrap(),
            CaseLabel::C {
                i1: 0,
                i2: 1,
                i3: 2
            }
        );
    }

    #[test]
    fn default_parameter_identities() {
        let p = default_params(4).unwrap();
        assert_eq!(p.b, "2 - 1/2*sqrt2".parse().unwrap());
        assert!(theta_quadratic_zero(&p.theta));
        for k in 4..12 {
            let p = default_params(k).unwrap();
            let lhs = (&p.a * &p.b).mul_int(2);
            let rhs = p.theta.mul_int(k as i64) - QSqrt2::from_int(k as i64 + 1);
            assert_eq!(lhs, rhs);
        }
        assert_eq!(&p.theta * &p.theta, "3/2 + sqrt2".parse().unwrap());
        assert!(default_params(3).is_err());
        assert_eq!(
            theta_exceeds_log2_3(&p.theta),
            Some(Rational::new(1707, 1000))
        );
        assert_eq!(theta_exceeds_log2_3(&QSqrt2::from_ratio(3, 2)), None);
    }

    #[test]
    fn key_lhs_values() {
        let k = 4;
        let p = default_params(k).unwrap();
        // D with (u, d) = (0, k): a star into one vertex
        let star = dg(&[None, Some(0), Some(0), Some(0), Some(0)]);
        assert_eq!(lhs_d_ineq(&star, &p).unwrap(), QSqrt2::one());
        let a = dg(&[Some(1), Some(0), None, None, None]);
        assert_eq!(lhs_d_ineq(&a, &p).unwrap(), QSqrt2::one());
        let empty = dg(&[None; 5]);
        assert_eq!(lhs_d_ineq(&empty, &p).unwrap(), QSqrt2::from_ratio(1, 2));
        assert!(lhs_d_ineq(&dg(&[Some(1), Some(1), Some(2), None, None]), &p).is_err());
    }

    #[test]
    fn bijection_and_equivalence_small_k() {
        for k in 2..=3 {
            let n = k + 1;
            let total = (k + 2usize).pow(n as u32);
            for idx in 0..total {
                let out: Vec<Option<u8>> = (0..n)
                    .map(|i| match idx / (k + 2usize).pow(i as u32) % (k + 2) {
                        0 => None,
                        t => Some((t - 1) as u8),
                    })
                    .collect();
                let d = Digraph::new(out);
                let h = from_digraph(&d);
                assert_eq!(to_digraph(&h).unwrap(), d);
                assert_eq!(contains_tk(&h), has_forbidden_pattern(&d));
            }
        }
    }

    #[test]
    fn k4_enumeration() {
        let r =
            verify_certificate(4, None, CertMode::Enumeration, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(r.passed);
        assert_eq!(r.digraphs_checked, 7776);
        let nontrivial: Vec<_> = r
            .tight_cases
            .iter()
            .filter(|t| !t.trivial)
            .map(|t| (t.kind, t.loops, t.arcs))
            .collect();
        assert_eq!(nontrivial, [(CaseKind::A, 0, 2), (CaseKind::D, 0, 4)]);
    }

    #[test]
    fn zero_ab_fails_at_star() {
        let p = Params {
            theta: QSqrt2::from_int(2),
            a: QSqrt2::zero(),
            b: QSqrt2::zero(),
        };
        let r = verify_certificate(4, Some(p), CertMode::ClosedForm, 0).unwrap();
        assert!(!r.passed);
        let star = r
            .failures
            .iter()
            .find(|f| f.kind == CaseKind::D && f.loops == 0 && f.arcs == 4)
            .unwrap();
        assert_eq!(star.lhs, QSqrt2::from_ratio(8, 5));
    }

    #[test]
    fn scaled_comparison_matches_exact() {
        let one = QSqrt2::one();
        for k in 2..=24 {
            let mut sets = vec![
                family_params(k, Rational::new(17, 10)),
                Params {
                    theta: QSqrt2::from_int(2),
                    a: QSqrt2::zero(),
                    b: QSqrt2::zero(),
                },
            ];
            if k >= 4 {
                sets.push(default_params(k).unwrap());
            }
            for p in &sets {
                let fast = ScaledLhs::new(k, p).unwrap();
                for (kind, u, d) in feasible_shapes(k) {
                    let c = closed_form_counts(k, kind, u, d);
                    assert_eq!(fast.cmp_one(&c), Some(lhs_from_counts(k, &c, p).cmp(&one)));
                }
            }
        }
        assert_eq!(
            sign_a_plus_b_sqrt2(3, -2),
            Some(core::cmp::Ordering::Greater)
        );
        assert_eq!(sign_a_plus_b_sqrt2(-3, 2), Some(core::cmp::Ordering::Less));
        assert_eq!(sign_a_plus_b_sqrt2(0, 0), Some(core::cmp::Ordering::Equal));
    }

    #[test]
    fn sweep_brackets_default_theta_at_k4() {
        let (lo, hi) = theta_sweep(4, 20);
        let theta = default_params(4).unwrap().theta;
        assert!(QSqrt2::from_rational(&lo) <= theta && theta < QSqrt2::from_rational(&hi));
    }
}

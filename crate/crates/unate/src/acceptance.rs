//! The acceptance suite run by `unate selftest` and by the `acceptance`
//! integration test. Each criterion returns one pass/fail line. Time limits
//! are pinned below; all pass/fail decisions are exact.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unate_core::certificate::{
    classify_case, default_params, family_params, from_digraph, has_forbidden_pattern, lhs_d_ineq,
    to_digraph, verify_certificate, CaseKind, CertMode, CertReport, Digraph,
    DEFAULT_ENUMERATION_BUDGET, MAX_CLOSED_FORM_K,
};
use unate_core::combin::{binomial, Subsets};
use unate_core::formula::{blowup, classify_syntactic, Clause, Formula};
use unate_core::lemmas::{furedi_check, is_total, kk_check, orient, orientation_loads, Hypergraph};
use unate_core::pdg::{
    conjectured_construction, contains_tk, extremal_search, make_tk, type_map, EdgeState, Pdg,
    SearchBudget, SearchMode,
};
use unate_core::semantics::{
    dedupe_formula_tables, enumerate_functions, is_minimal, CENSUS_STATE_BUDGET, DEFAULT_TABLE_CAP,
};
use unate_core::{QSqrt2, Rational};

use crate::parallel::{certify_enumeration, seeded_sweep};
use crate::report::{k2_upper_bound, CriterionJson, SelftestJson};

/// Single-threaded enumeration at `k = 7`.
pub const CERT_K7_LIMIT_MS: u64 = 300_000;
/// Closed-form check over `k = 4..=100`.
pub const CLOSED_FORM_LIMIT_MS: u64 = 1_000;
pub const REDUCTION_LIMIT_MS: u64 = 60_000;
pub const TURAN_LIMIT_MS: u64 = 120_000;
pub const CENSUS_LIMIT_MS: u64 = 600_000;
/// Trials per randomized lemma sweep.
pub const SWEEP_TRIALS: u64 = 1000;
pub const SHADOW_SAMPLES: u64 = 100_000;
/// Fractional bits of the `√2` enclosure used by the interval shadow.
pub const SHADOW_BITS: u32 = 40;
pub const DEFAULT_SEED: u64 = 0x5EED_2024;

#[derive(Debug, Clone)]
pub struct Ctx {
    pub workers: usize,
    pub seed: u64,
    /// Source roots scanned for float tokens.
    pub source_roots: Vec<PathBuf>,
}

impl Default for Ctx {
    fn default() -> Self {
        let here = Path::new(env!("CARGO_MANIFEST_DIR"));
        Ctx {
            workers: crate::parallel::default_workers(),
            seed: DEFAULT_SEED,
            source_roots: vec![here.join("src"), here.join("../core/src")],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {}. {} ({} ms): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.detail
        )
    }
}

type Check = fn(&Ctx) -> (bool, String);

pub const CRITERIA: &[(u32, &str, Check)] = &[
    (1, "certificate kernel", certificate_kernel),
    (
        2,
        "classification completeness",
        classification_completeness,
    ),
    (3, "reduction equivalence", reduction_equivalence),
    (4, "finite extremal values", turan_maxima),
    (5, "function census", census),
    (6, "non-minimality oracles", non_minimality),
    (7, "lemma sweeps", lemma_sweeps),
    (8, "exactness hygiene", exactness_hygiene),
];

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

pub fn run_one(ctx: &Ctx, id: u32) -> Option<CriterionResult> {
    let &(id, name, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let t = Instant::now();
    let (passed, detail) = check(ctx);
    Some(CriterionResult {
        id,
        name,
        passed,
        detail,
        elapsed_ms: ms(t),
    })
}

/// Runs the selected criteria (all when `only` is empty), calling `each`
/// after every criterion.
pub fn run(ctx: &Ctx, only: &[u32], mut each: impl FnMut(&CriterionResult)) -> SelftestJson {
    let t = Instant::now();
    let mut criteria = Vec::new();
    for &(id, _, _) in CRITERIA {
        if only.is_empty() || only.contains(&id) {
            let r = run_one(ctx, id).expect("listed criterion");
            each(&r);
            criteria.push(CriterionJson {
                id: r.id,
                name: r.name.to_string(),
                passed: r.passed,
                detail: r.detail,
                runtime_ms: r.elapsed_ms,
            });
        }
    }
    SelftestJson {
        passed: criteria.iter().all(|c| c.passed),
        criteria,
        runtime_ms: ms(t),
    }
}

/// Nontrivial tight shapes expected from the default parameters.
/// (case, arcs, loops) of a tight configuration.
pub type TightKey = (CaseKind, usize, usize);

pub fn expected_tight(k: usize) -> BTreeSet<TightKey> {
    let mut s = BTreeSet::from([(CaseKind::D, 0, k)]);
    if k == 4 {
        s.insert((CaseKind::A, 0, 2));
    }
    s
}

fn tight_set(r: &CertReport) -> (BTreeSet<TightKey>, Vec<TightKey>) {
    let mut nontrivial = BTreeSet::new();
    let mut trivial = Vec::new();
    for t in &r.tight_cases {
        if t.trivial {
            trivial.push((t.kind, t.loops, t.arcs));
        } else {
            nontrivial.insert((t.kind, t.loops, t.arcs));
        }
    }
    (nontrivial, trivial)
}

fn certificate_kernel(_: &Ctx) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for k in 4..=7usize {
        let t = Instant::now();
        let r = match verify_certificate(k, None, CertMode::Enumeration, DEFAULT_ENUMERATION_BUDGET)
        {
            Ok(r) => r,
            Err(e) => return (false, format!("k={k}: {e}")),
        };
        let elapsed = ms(t);
        let (nontrivial, trivial) = tight_set(&r);
        let good = r.passed
            && r.digraphs_checked as u128 == (k as u128 + 2).pow(k as u32 + 1)
            && nontrivial == expected_tight(k)
            && trivial == [(CaseKind::D, k + 1, 0)]
            && (k != 7 || elapsed < CERT_K7_LIMIT_MS);
        ok &= good;
        notes.push(format!(
            "k={k} {} digraphs {elapsed} ms{}",
            r.digraphs_checked,
            if good { "" } else { " BAD" }
        ));
    }
    // both anchor values of the inequality
    for k in 4..=8usize {
        let p = default_params(k).expect("k >= 4");
        let mut star = vec![Some(0u8); k + 1];
        star[0] = None;
        let mut two = vec![None; k + 1];
        two[0] = Some(1);
        two[1] = Some(0);
        let lhs_star = lhs_d_ineq(&Digraph::new(star), &p);
        let lhs_two = lhs_d_ineq(&Digraph::new(two), &p);
        let want_two =
            QSqrt2::one() + QSqrt2::from_ratio(4 - k as i64, 2 * (k as i64 + 1) * k as i64);
        if lhs_star != Ok(QSqrt2::one()) || lhs_two != Ok(want_two) {
            ok = false;
            notes.push(format!("anchor mismatch at k={k}"));
        }
    }
    let t = Instant::now();
    let mut closed_ok = true;
    for k in 4..=MAX_CLOSED_FORM_K {
        match verify_certificate(k, None, CertMode::ClosedForm, 0) {
            Ok(r) => {
                let (nontrivial, trivial) = tight_set(&r);
                closed_ok &= r.passed
                    && nontrivial == expected_tight(k)
                    && trivial == [(CaseKind::D, k + 1, 0)];
            }
            Err(_) => closed_ok = false,
        }
    }
    let closed_ms = ms(t);
    closed_ok &= closed_ms < CLOSED_FORM_LIMIT_MS;
    ok &= closed_ok;
    notes.push(format!(
        "closed form k=4..{MAX_CLOSED_FORM_K} {closed_ms} ms{}",
        if closed_ok { "" } else { " BAD" }
    ));
    (ok, notes.join("; "))
}

fn classification_completeness(ctx: &Ctx) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for k in 2..=6usize {
        // parameters do not affect classification; k < 4 has no defaults
        let p = default_params(k).unwrap_or_else(|_| family_params(k, Rational::new(3, 2)));
        let r = match certify_enumeration(k, &p, u64::MAX, ctx.workers) {
            Ok(r) => r,
            Err(e) => return (false, format!("k={k}: {e}")),
        };
        let labelled: u64 = r.case_counts.iter().sum();
        let good = r.classification_errors == 0
            && r.closed_form_mismatches == 0
            && labelled == r.pattern_free
            && r.digraphs_checked as u128 == (k as u128 + 2).pow(k as u32 + 1);
        ok &= good;
        notes.push(format!(
            "k={k} {} pattern-free, {} exceptions",
            r.pattern_free, r.classification_errors
        ));
    }
    (ok, notes.join("; "))
}

/// Every PDG on `k+1` vertices: one state per `k`-subset, out of
/// absent, undirected or directed at one of its `k` vertices.
fn for_each_pdg(k: usize, mut f: impl FnMut(&Pdg)) -> u64 {
    let slots: Vec<u64> = Subsets::new(k + 1, k).collect();
    let base = k + 2;
    let mut digits = vec![0usize; slots.len()];
    let mut count = 0;
    loop {
        let mut h = Pdg::empty(k + 1, k).expect("valid shape");
        for (&mask, &d) in slots.iter().zip(&digits) {
            let state = match d {
                0 => EdgeState::Absent,
                1 => EdgeState::Undirected,
                _ => {
                    let v = unate_core::combin::elements(mask)
                        .nth(d - 2)
                        .expect("vertex of the edge");
                    EdgeState::DirectedAt(v as u8)
                }
            };
            h.set(mask, state).expect("slot of the right size");
        }
        f(&h);
        count += 1;
        let mut i = 0;
        loop {
            if i == digits.len() {
                return count;
            }
            digits[i] += 1;
            if digits[i] < base {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn reduction_equivalence(_: &Ctx) -> (bool, String) {
    let t = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for k in 2..=4usize {
        let mut exceptions = 0u64;
        let mut with_tk = 0u64;
        let total = for_each_pdg(k, |h| {
            let d = match to_digraph(h) {
                Ok(d) => d,
                Err(_) => {
                    exceptions += 1;
                    return;
                }
            };
            let tk = contains_tk(h);
            with_tk += u64::from(tk);
            if tk != has_forbidden_pattern(&d) || from_digraph(&d) != *h {
                exceptions += 1;
            }
            if !tk && classify_case(&d).is_err() {
                exceptions += 1;
            }
        });
        ok &= exceptions == 0 && total as u128 == (k as u128 + 2).pow(k as u32 + 1);
        notes.push(format!(
            "k={k} {total} PDGs, {with_tk} contain T_k, {exceptions} exceptions"
        ));
    }
    let elapsed = ms(t);
    ok &= elapsed < REDUCTION_LIMIT_MS;
    (ok, notes.join("; "))
}

fn turan_maxima(_: &Ctx) -> (bool, String) {
    let t = Instant::now();
    let theta = QSqrt2::from_int(2);
    let mut ok = true;
    let mut notes = Vec::new();
    for (n, want) in [
        (3usize, QSqrt2::from_ratio(4, 3)),
        (4, QSqrt2::from_ratio(4, 3)),
        (5, QSqrt2::from_ratio(6, 5)),
    ] {
        let r = match extremal_search(
            n,
            2,
            &theta,
            SearchMode::Exhaustive,
            SearchBudget::default(),
        ) {
            Ok(r) => r,
            Err(e) => return (false, format!("n={n}: {e}")),
        };
        let mut good = r.certified
            && r.best_value == want
            && !contains_tk(&r.witness)
            && r.witness.value(&theta) == r.best_value
            && r.best_value <= k2_upper_bound(n);
        if n == 4 {
            let c = conjectured_construction(4, 2).expect("valid shape");
            good &= c.value(&theta) == r.best_value && !contains_tk(&c);
        }
        ok &= good;
        notes.push(format!(
            "({n},2,2) = {} witness {}",
            r.best_value, r.witness
        ));
    }
    let elapsed = ms(t);
    ok &= elapsed < TURAN_LIMIT_MS;
    (ok, notes.join("; "))
}

fn census(_: &Ctx) -> (bool, String) {
    let t = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [3usize, 4] {
        let r = match enumerate_functions(n, 2, CENSUS_STATE_BUDGET) {
            Ok(r) => r,
            Err(e) => return (false, format!("n={n}: {e}")),
        };
        let oracle = dedupe_formula_tables(n, 2).len() as u64;
        let monotone_want = 1u64 << binomial(n, 2);
        let mut good = r.monotone == monotone_want && r.total == oracle;
        good &= num_bigint::BigInt::from(r.unate) >= r.unate_lower_bound();
        if n == 4 {
            good &= r.unate >= 512;
        }
        ok &= good;
        notes.push(format!(
            "n={n} total {} (oracle {oracle}) monotone {} unate {} (bound {})",
            r.total,
            r.monotone,
            r.unate,
            r.unate_lower_bound()
        ));
    }
    ok &= ms(t) < CENSUS_LIMIT_MS;
    (ok, notes.join("; "))
}

fn non_minimal_blowup(f: &Formula) -> bool {
    let g = blowup(f, 2).expect("blowup fits");
    !is_minimal(&g, DEFAULT_TABLE_CAP)
        .expect("within table cap")
        .minimal
}

fn non_minimality(_: &Ctx) -> (bool, String) {
    let mut notes = Vec::new();
    // w, x, y, z = 1, 2, 3, 4
    let example =
        Formula::from_dimacs(4, 2, &[&[1, 2], &[1, 3], &[2, -4], &[-3, 4]]).expect("valid");
    let mut ok = !is_minimal(&example, DEFAULT_TABLE_CAP)
        .expect("small")
        .minimal;
    notes.push(format!(
        "example {}",
        if ok { "non-minimal" } else { "MINIMAL" }
    ));

    for k in 2..=3usize {
        let full = (1u64 << k) - 1;
        let (mut pairs, mut exceptions) = (0, 0);
        for a in 0..=full {
            for b in a + 1..=full {
                let f = Formula::new(
                    k,
                    k,
                    [Clause::from_masks(full, a), Clause::from_masks(full, b)],
                )
                .expect("valid");
                pairs += 1;
                // distinct clauses on one support are disjoint, so f itself is minimal
                let base_minimal = is_minimal(&f, DEFAULT_TABLE_CAP).expect("small").minimal;
                if !base_minimal || !non_minimal_blowup(&f) {
                    exceptions += 1;
                }
            }
        }
        ok &= exceptions == 0 && pairs == (1 << k) * ((1 << k) - 1) / 2;
        notes.push(format!("k={k} {pairs} pairs, {exceptions} exceptions"));
    }

    // semisimple G on 4 variables with type T_3, found by filtering all
    // one- and two-clause sign sets on the three supports of T_3
    let tk = make_tk(3);
    let supports: Vec<u64> = tk
        .edges()
        .filter(|(_, s)| s.is_present())
        .map(|(m, _)| m)
        .collect();
    let options = |s: u64| -> Vec<Vec<Clause>> {
        let signs: Vec<u64> = (0..8u64)
            .map(|x| unate_core::combin::deposit(x, s))
            .collect();
        let mut v: Vec<Vec<Clause>> = signs
            .iter()
            .map(|&a| vec![Clause::from_masks(s, a)])
            .collect();
        for i in 0..8 {
            for j in i + 1..8 {
                v.push(vec![
                    Clause::from_masks(s, signs[i]),
                    Clause::from_masks(s, signs[j]),
                ]);
            }
        }
        v
    };
    let per: Vec<Vec<Vec<Clause>>> = supports.iter().map(|&s| options(s)).collect();
    let (mut instances, mut exceptions) = (0u64, 0u64);
    for a in &per[0] {
        for b in &per[1] {
            for c in &per[2] {
                let f = Formula::new(4, 3, a.iter().chain(b).chain(c).copied()).expect("valid");
                if !classify_syntactic(&f).semisimple || type_map(&f).ok().as_ref() != Some(&tk) {
                    continue;
                }
                instances += 1;
                if !non_minimal_blowup(&f) {
                    exceptions += 1;
                }
            }
        }
    }
    // two undirected supports with 8 sign patterns each, and 4 sign
    // patterns off the head on the directed one
    ok &= supports.len() == 3 && instances == 256 && exceptions == 0;
    notes.push(format!(
        "type T_3: {instances} instances, {exceptions} exceptions"
    ));
    (ok, notes.join("; "))
}

fn lemma_sweeps(ctx: &Ctx) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();

    let furedi = seeded_sweep(ctx.seed, SWEEP_TRIALS, ctx.workers, |_, rng| {
        let n = rng.gen_range(3..=12);
        let num = rng.gen_range(1..=9);
        let g = Hypergraph::random(n, 2, num, 10, rng).expect("valid shape");
        matches!(furedi_check(&g), Ok(r) if r.pass && r.triangular_edges_in_square)
    });
    ok &= furedi.is_empty();
    notes.push(format!("squared-graph bound {} failures", furedi.len()));

    let all_triples: Vec<u64> = Subsets::new(5, 3).collect();
    let mut kk_exhaustive_fail = 0u64;
    for subset in 0u64..1 << all_triples.len() {
        let edges = unate_core::combin::elements(subset).map(|i| all_triples[i]);
        let h = Hypergraph::new(5, 3, edges).expect("valid");
        kk_exhaustive_fail += u64::from(!kk_check(&h).pass);
    }
    let kk_random = seeded_sweep(ctx.seed ^ 1, SWEEP_TRIALS, ctx.workers, |_, rng| {
        let n = rng.gen_range(4..=9);
        let num = rng.gen_range(1..=9);
        let h = Hypergraph::random(n, 3, num, 10, rng).expect("valid shape");
        kk_check(&h).pass
    });
    ok &= kk_exhaustive_fail == 0 && kk_random.is_empty();
    notes.push(format!(
        "simplex bound {kk_exhaustive_fail}/1024 exhaustive and {} random failures",
        kk_random.len()
    ));

    let orientation = seeded_sweep(ctx.seed ^ 2, SWEEP_TRIALS, ctx.workers, |_, rng| {
        let ell = rng.gen_range(2..=3);
        let n = rng.gen_range(ell + 1..=10);
        let num = rng.gen_range(1..=10);
        let h = Hypergraph::random(n, ell, num, 10, rng).expect("valid shape");
        match orient(&h) {
            Ok(r) => {
                r.pass
                    && r.matching_size as usize == h.edge_count()
                    && is_total(&h, &r.orientation)
                    && orientation_loads(&h, &r.orientation) == r.max_load
                    && r.max_load <= r.bound
            }
            Err(_) => false,
        }
    });
    ok &= orientation.is_empty();
    notes.push(format!("orientation {} failures", orientation.len()));
    (ok, notes.join("; "))
}

/// Float tokens found in Rust sources: float type names (also as literal
/// suffixes or identifier suffixes) and float literals. Comments, strings
/// and char literals are skipped.
pub fn float_tokens(src: &str) -> Vec<(usize, String)> {
    let names = [format!("f{}", 32), format!("f{}", 64)];
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut line = 1;
    let mut i = 0;
    let is_ident = |c: u8| c.is_ascii_alphanumeric() || c == b'_';
    while i < b.len() {
        let c = b[i];
        match c {
            b'\n' => {
                line += 1;
                i += 1;
            }
            b'/' if b.get(i + 1) == Some(&b'/') => {
                while i < b.len() && b[i] != b'\n' {
                    i += 1;
                }
            }
            b'/' if b.get(i + 1) == Some(&b'*') => {
                let mut depth = 0;
                while i < b.len() {
                    if b[i..].starts_with(b"/*") {
                        depth += 1;
                        i += 2;
                    } else if b[i..].starts_with(b"*/") {
                        depth -= 1;
                        i += 2;
                        if depth == 0 {
                            break;
                        }
                    } else {
                        line += usize::from(b[i] == b'\n');
                        i += 1;
                    }
                }
            }
            b'r' if matches!(b.get(i + 1), Some(b'#') | Some(b'"'))
                && (i == 0 || !is_ident(b[i - 1])) =>
            {
                // raw string r#"..."#
                let mut j = i + 1;
                let mut hashes = 0;
                while b.get(j) == Some(&b'#') {
                    hashes += 1;
                    j += 1;
                }
                if b.get(j) != Some(&b'"') {
                    i += 1;
                    continue;
                }
                j += 1;
                let close: Vec<u8> = std::iter::once(b'"')
                    .chain(std::iter::repeat_n(b'#', hashes))
                    .collect();
                while j < b.len() && !b[j..].starts_with(&close) {
                    line += usize::from(b[j] == b'\n');
                    j += 1;
                }
                i = j + close.len();
            }
            b'"' => {
                i += 1;
                while i < b.len() && b[i] != b'"' {
                    if b[i] == b'\\' {
                        i += 1;
                    }
                    line += usize::from(b.get(i) == Some(&b'\n'));
                    i += 1;
                }
                i += 1;
            }
            b'\'' => {
                // char literal or lifetime
                if b.get(i + 2) == Some(&b'\'') {
                    i += 3;
                } else if b.get(i + 1) == Some(&b'\\') {
                    i += 2;
                    while i < b.len() && b[i] != b'\'' {
                        i += 1;
                    }
                    i += 1;
                } else {
                    i += 1;
                }
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < b.len() && is_ident(b[i]) {
                    i += 1;
                }
                let tok = &src[start..i];
                let radix = tok.starts_with("0x") || tok.starts_with("0b") || tok.starts_with("0o");
                // an exponent directly follows the digit run, as in `1e3` or `2E-4`
                let digits = tok
                    .bytes()
                    .take_while(|c| c.is_ascii_digit() || *c == b'_')
                    .count();
                let exponent = !radix
                    && matches!(b.get(start + digits), Some(b'e') | Some(b'E'))
                    && matches!(b.get(start + digits + 1), Some(c) if c.is_ascii_digit() || *c == b'+' || *c == b'-');
                // `t.0.1` is tuple indexing, not a literal
                let after_dot = start > 0 && b[start - 1] == b'.';
                let fraction = !after_dot
                    && b.get(i) == Some(&b'.')
                    && b.get(i + 1).is_some_and(u8::is_ascii_digit);
                let suffixed = names.iter().any(|n| tok.ends_with(n.as_str()));
                if exponent || fraction || suffixed {
                    out.push((line, tok.to_string()));
                }
                if fraction {
                    i += 1;
                    while i < b.len() && is_ident(b[i]) {
                        i += 1;
                    }
                }
            }
            c if is_ident(c) => {
                let start = i;
                while i < b.len() && is_ident(b[i]) {
                    i += 1;
                }
                let tok = &src[start..i];
                if names
                    .iter()
                    .any(|n| tok == n || tok.ends_with(&format!("_{n}")))
                {
                    out.push((line, tok.to_string()));
                }
            }
            _ => i += 1,
        }
    }
    out
}

fn rust_files(root: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    for entry in std::fs::read_dir(root)? {
        let p = entry?.path();
        if p.is_dir() {
            rust_files(&p, out)?;
        } else if p.extension().is_some_and(|e| e == "rs") {
            out.push(p);
        }
    }
    Ok(())
}

fn isqrt_u128(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut r = 1u128 << (128 - x.leading_zeros()).div_ceil(2);
    loop {
        let next = (r + x / r) / 2;
        if next >= r {
            return r;
        }
        r = next;
    }
}

/// Sign of `r + s√2` from the enclosure `lo/2^B < √2 < (lo+1)/2^B`, or
/// `None` when the enclosure straddles zero.
fn shadow_sign(r: i128, s: i128, lo: i128) -> Option<std::cmp::Ordering> {
    let base = r << SHADOW_BITS;
    let (a, b) = (base + s * lo, base + s * (lo + 1));
    let (min, max) = (a.min(b), a.max(b));
    if min > 0 {
        Some(std::cmp::Ordering::Greater)
    } else if max < 0 {
        Some(std::cmp::Ordering::Less)
    } else {
        None
    }
}

fn interval_shadow(seed: u64) -> (u64, u64, u64) {
    let lo = isqrt_u128(2u128 << (2 * SHADOW_BITS)) as i128;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut decided, mut undecided, mut disagreements) = (0, 0, 0);
    let draw = |rng: &mut ChaCha8Rng| (rng.gen_range(-1000i64..=1000), rng.gen_range(1i64..=1000));
    for i in 0..SHADOW_SAMPLES {
        let (p1, q1) = draw(&mut rng);
        let (p2, q2) = draw(&mut rng);
        let (p3, q3, p4, q4) = if i % 16 == 0 {
            // equal values written differently
            (p1 * 3, q1 * 3, p2 * 7, q2 * 7)
        } else {
            let (a, b) = draw(&mut rng);
            let (c, d) = draw(&mut rng);
            (a, b, c, d)
        };
        let x = QSqrt2::from_ratio(p1, q1) + QSqrt2::from_ratio(p2, q2) * QSqrt2::sqrt2();
        let y = QSqrt2::from_ratio(p3, q3) + QSqrt2::from_ratio(p4, q4) * QSqrt2::sqrt2();
        let exact = x.cmp(&y);
        // x - y scaled by q1 q2 q3 q4
        let (q1, q2, q3, q4) = (q1 as i128, q2 as i128, q3 as i128, q4 as i128);
        let r = (p1 as i128 * q3 - p3 as i128 * q1) * q2 * q4;
        let s = (p2 as i128 * q4 - p4 as i128 * q2) * q1 * q3;
        match shadow_sign(r, s, lo) {
            Some(o) => {
                decided += 1;
                disagreements += u64::from(o != exact);
            }
            None => undecided += 1,
        }
    }
    (decided, undecided, disagreements)
}

fn exactness_hygiene(ctx: &Ctx) -> (bool, String) {
    let mut files = Vec::new();
    for root in &ctx.source_roots {
        if let Err(e) = rust_files(root, &mut files) {
            return (false, format!("cannot scan {}: {e}", root.display()));
        }
    }
    let mut hits = Vec::new();
    for f in &files {
        let text = match std::fs::read_to_string(f) {
            Ok(t) => t,
            Err(e) => return (false, format!("cannot read {}: {e}", f.display())),
        };
        for (line, tok) in float_tokens(&text) {
            hits.push(format!("{}:{line} `{tok}`", f.display()));
        }
    }
    let (decided, undecided, disagreements) = interval_shadow(ctx.seed);
    let ok = !files.is_empty()
        && hits.is_empty()
        && disagreements == 0
        && decided + undecided == SHADOW_SAMPLES;
    let mut detail = format!(
        "{} source files, {} float tokens; shadow {decided} decided, {undecided} undecided, {disagreements} disagreements",
        files.len(),
        hits.len()
    );
    if !hits.is_empty() {
        detail.push_str(&format!(" [{}]", hits.join(", ")));
    }
    (ok, detail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scanner_finds_float_tokens_outside_comments_and_strings() {
        let t = ["f", "64"].concat();
        let src = format!(
            "let a = 1.5;\nlet b: {t} = 2;\n// 3.0 {t}\nlet s = \"{t} 4.0\";\nlet c = 1e3;\nlet d = 0xe5 + 7usize + 2E-4;\nlet e = 7{t};\nlet r = 1..2; x.0.1; as_secs_{t}();\nlet z = r\"{t}\";\n"
        );
        let toks: Vec<usize> = float_tokens(&src).into_iter().map(|(l, _)| l).collect();
        assert_eq!(toks, vec![1, 2, 5, 6, 7, 8]);
    }

    #[test]
    fn shadow_matches_known_signs() {
        let lo = isqrt_u128(2u128 << (2 * SHADOW_BITS)) as i128;
        assert!(
            lo * lo < 2i128 << (2 * SHADOW_BITS)
                && (lo + 1) * (lo + 1) > 2i128 << (2 * SHADOW_BITS)
        );
        use std::cmp::Ordering::*;
        assert_eq!(shadow_sign(-1, 1, lo), Some(Greater));
        assert_eq!(shadow_sign(3, -2, lo), Some(Greater));
        assert_eq!(shadow_sign(-3, 2, lo), Some(Less));
        assert_eq!(shadow_sign(0, 0, lo), None);
    }

    #[test]
    fn pdg_enumeration_sizes() {
        for k in 2..=3 {
            assert_eq!(
                for_each_pdg(k, |_| {}) as u128,
                (k as u128 + 2).pow(k as u32 + 1)
            );
        }
    }
}

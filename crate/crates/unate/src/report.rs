//! JSON shapes of command results. Exact values (rationals, elements of
//! `Q(√2)`, big integers) are serialized as strings; decimals are for reading
//! only and are computed by exact long division.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use unate_core::certificate::{CertMode, CertReport, Params};
use unate_core::exact::decimal_string;
use unate_core::formula::{AlphaProfile, SyntacticFlags};
use unate_core::lemmas::{Hypergraph, OrientationReport};
use unate_core::pdg::{contains_tk, ExtremalReport, SearchMode};
use unate_core::semantics::{
    Assignment, CensusReport, FunctionFlags, MinimalFormulaStats, MinimalityReport,
};
use unate_core::stability::{
    ClassifierParams, ClassifierVerdict, I3Failure, SparseMinimalityReport,
};
use unate_core::{QSqrt2, Rational, SignVector};

/// Digits after the point in decimal renderings.
pub const DECIMAL_DIGITS: usize = 12;

pub fn qsqrt2_decimal(x: &QSqrt2) -> String {
    x.to_decimal(DECIMAL_DIGITS as u32)
}

/// `+`/`-` per variable, `x1` first.
pub fn signs_string(s: &SignVector) -> String {
    (0..s.n())
        .map(|v| if s.is_positive(v) { '+' } else { '-' })
        .collect()
}

/// Bits `x1..xn` left to right.
pub fn assignment_string(a: &Assignment) -> String {
    (0..a.n)
        .map(|v| if a.value(v) { '1' } else { '0' })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub theta: String,
    pub a: String,
    pub b: String,
}

impl From<&Params> for ParamsJson {
    fn from(p: &Params) -> Self {
        ParamsJson {
            theta: p.theta.to_string(),
            a: p.a.to_string(),
            b: p.b.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureJson {
    pub case: String,
    pub loops: usize,
    pub arcs: usize,
    pub example: Option<String>,
    pub lhs: String,
    pub lhs_decimal: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightJson {
    pub case: String,
    pub loops: usize,
    pub arcs: usize,
    pub count: Option<u64>,
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepJson {
    pub last_pass: String,
    pub first_fail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertJson {
    pub k: usize,
    pub params: ParamsJson,
    pub mode: String,
    pub digraphs_checked: u64,
    pub pattern_free: u64,
    pub case_counts: [u64; 4],
    pub classification_errors: u64,
    pub closed_form_mismatches: u64,
    pub failures: Vec<FailureJson>,
    pub tight_cases: Vec<TightJson>,
    pub theta_quadratic_zero: bool,
    pub theta_lower_bound: Option<String>,
    pub sweep: Option<SweepJson>,
    pub passed: bool,
    pub runtime_ms: u64,
}

impl CertJson {
    pub fn new(r: &CertReport, sweep: Option<(Rational, Rational)>, runtime_ms: u64) -> Self {
        CertJson {
            k: r.k,
            params: (&r.params).into(),
            mode: match r.mode {
                CertMode::Enumeration => "enumeration",
                CertMode::ClosedForm => "closed_form",
            }
            .into(),
            digraphs_checked: r.digraphs_checked,
            pattern_free: r.pattern_free,
            case_counts: r.case_counts,
            classification_errors: r.classification_errors,
            closed_form_mismatches: r.closed_form_mismatches,
            failures: r
                .failures
                .iter()
                .map(|f| FailureJson {
                    case: f.kind.to_string(),
                    loops: f.loops,
                    arcs: f.arcs,
                    example: f.example.as_ref().map(|d| d.to_string()),
                    lhs: f.lhs.to_string(),
                    lhs_decimal: qsqrt2_decimal(&f.lhs),
                })
                .collect(),
            tight_cases: r
                .tight_cases
                .iter()
                .map(|t| TightJson {
                    case: t.kind.to_string(),
                    loops: t.loops,
                    arcs: t.arcs,
                    count: t.count,
                    trivial: t.trivial,
                })
                .collect(),
            theta_quadratic_zero: r.theta_quadratic_zero,
            theta_lower_bound: r.theta_lower_bound.map(|t| t.to_string()),
            sweep: sweep.map(|(a, b)| SweepJson {
                last_pass: a.to_string(),
                first_fail: b.to_string(),
            }),
            passed: r.passed,
            runtime_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalStatsJson {
    pub formulas: u64,
    pub unate_formulas: u64,
    pub functions: u64,
    pub functions_with_unique_minimal_formula: u64,
    pub max_formulas_per_function: u64,
}

impl From<&MinimalFormulaStats> for MinimalStatsJson {
    fn from(m: &MinimalFormulaStats) -> Self {
        MinimalStatsJson {
            formulas: m.formulas,
            unate_formulas: m.unate_formulas,
            functions: m.functions,
            functions_with_unique_minimal_formula: m.functions_with_unique_minimal_formula,
            max_formulas_per_function: m.max_formulas_per_function,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusJson {
    pub n: usize,
    pub k: usize,
    pub total: u64,
    pub monotone: u64,
    pub unate: u64,
    pub monotone_expected: String,
    pub unate_lower_bound: String,
    /// `total / 2^(n + C(n,k))` in lowest terms.
    pub ratio: String,
    pub ratio_decimal: String,
    pub minimal_formulas: Option<MinimalStatsJson>,
    pub runtime_ms: u64,
}

impl CensusJson {
    pub fn new(r: &CensusReport, minimal: Option<&MinimalFormulaStats>, runtime_ms: u64) -> Self {
        let c = unate_core::combin::binomial(r.n, r.k) as usize;
        let den = BigInt::from(1u8) << (r.n + c);
        let num = BigInt::from(r.total);
        let g = num.gcd(&den);
        let (num, den) = (&num / &g, &den / &g);
        CensusJson {
            n: r.n,
            k: r.k,
            total: r.total,
            monotone: r.monotone,
            unate: r.unate,
            monotone_expected: r.monotone_expected().to_string(),
            unate_lower_bound: r.unate_lower_bound().to_string(),
            ratio: format!("{num}/{den}"),
            ratio_decimal: decimal_string(&num, &den, DECIMAL_DIGITS),
            minimal_formulas: minimal.map(Into::into),
            runtime_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuranJson {
    pub n: usize,
    pub k: usize,
    pub theta: String,
    pub mode: String,
    pub seed: Option<u64>,
    pub best_value: String,
    pub best_value_decimal: String,
    /// `1 + ⌊n/2⌋/C(n,2)`, the finite upper bound for `k = 2`.
    pub upper_bound: Option<String>,
    pub witness: String,
    pub witness_tk_free: bool,
    pub witness_value_matches: bool,
    pub nodes_explored: u64,
    pub free_count: Option<u64>,
    pub certified: bool,
    pub budget_exhausted: bool,
    pub runtime_ms: u64,
}

/// `1 + ⌊n/2⌋/C(n,2)`.
pub fn k2_upper_bound(n: usize) -> QSqrt2 {
    let c = (n * (n - 1) / 2) as i64;
    QSqrt2::one() + QSqrt2::from_ratio((n / 2) as i64, c)
}

impl TuranJson {
    pub fn new(r: &ExtremalReport, runtime_ms: u64) -> Self {
        let (mode, seed) = match r.mode {
            SearchMode::Exhaustive => ("exhaustive", None),
            SearchMode::BranchAndBound => ("branch_and_bound", None),
            SearchMode::Heuristic { seed, .. } => ("heuristic", Some(seed)),
        };
        TuranJson {
            n: r.n,
            k: r.k,
            theta: r.theta.to_string(),
            mode: mode.into(),
            seed,
            best_value: r.best_value.to_string(),
            best_value_decimal: qsqrt2_decimal(&r.best_value),
            upper_bound: (r.k == 2 && r.n >= 2).then(|| k2_upper_bound(r.n).to_string()),
            witness: r.witness.to_string(),
            witness_tk_free: !contains_tk(&r.witness),
            witness_value_matches: r.witness.value(&r.theta) == r.best_value,
            nodes_explored: r.nodes_explored,
            free_count: r.free_count,
            certified: r.certified,
            budget_exhausted: r.budget_exhausted,
            runtime_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagsJson {
    pub simple: bool,
    pub semisimple: bool,
    pub monotone: bool,
    pub unate: bool,
    pub unate_signs: Option<String>,
    pub positive_dominant: bool,
}

impl From<&SyntacticFlags> for FlagsJson {
    fn from(s: &SyntacticFlags) -> Self {
        FlagsJson {
            simple: s.simple,
            semisimple: s.semisimple,
            monotone: s.monotone,
            unate: s.unate.is_some(),
            unate_signs: s.unate.as_ref().map(signs_string),
            positive_dominant: s.positive_dominant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub monotone_formula: bool,
    pub unate_formula: bool,
    pub monotone_pointwise: bool,
    pub unate_pointwise: bool,
    pub k_expressible: bool,
    pub max_prime_implicant_width: Option<usize>,
}

impl From<&FunctionFlags> for FunctionJson {
    fn from(f: &FunctionFlags) -> Self {
        FunctionJson {
            monotone_formula: f.monotone_formula,
            unate_formula: f.unate_formula.is_some(),
            monotone_pointwise: f.monotone_fn,
            unate_pointwise: f.unate_fn.is_some(),
            k_expressible: f.k_expressible,
            max_prime_implicant_width: f.max_prime_implicant_width,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileJson {
    pub counts: Vec<u64>,
    pub a2_prime: u64,
    pub a2_doubleprime: u64,
    /// `C(n,k)`.
    pub k_sets: String,
    /// `Π (i+1)^counts[i]`; the weight is its log₂ over `C(n,k)`.
    pub simple_subformulae: String,
    /// Densities `α_i = counts[i] / C(n,k)`.
    pub alpha: Vec<String>,
    /// The weight as an exact rational when the product is a power of two,
    /// as for simple formulae where it equals `α_1`.
    pub weight: Option<String>,
    /// `⌊1000 · weight⌋`.
    pub weight_milli_floor: u64,
}

impl From<&AlphaProfile> for ProfileJson {
    fn from(p: &AlphaProfile) -> Self {
        let total = BigInt::from(p.total.clone());
        let ratio = |num: BigInt| {
            if total == BigInt::from(0u8) {
                return "0".to_string();
            }
            let g = num.gcd(&total);
            let (a, b) = (&num / &g, &total / &g);
            if b == BigInt::from(1u8) {
                a.to_string()
            } else {
                format!("{a}/{b}")
            }
        };
        let product = p.simple_subformula_count();
        let log2 = product.bits().saturating_sub(1);
        let weight = (product.count_ones() == 1).then(|| ratio(BigInt::from(log2)));
        ProfileJson {
            alpha: p.counts.iter().map(|&c| ratio(BigInt::from(c))).collect(),
            weight,
            counts: p.counts.clone(),
            a2_prime: p.a2_prime,
            a2_doubleprime: p.a2_doubleprime,
            k_sets: p.total.to_string(),
            simple_subformulae: p.simple_subformula_count().to_string(),
            weight_milli_floor: p.weight_floor_scaled(1000),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalityJson {
    pub minimal: bool,
    /// One entry per clause in canonical order; `null` when no witness exists.
    pub witnesses: Vec<Option<String>>,
}

impl From<&MinimalityReport> for MinimalityJson {
    fn from(m: &MinimalityReport) -> Self {
        MinimalityJson {
            minimal: m.minimal,
            witnesses: m
                .witnesses
                .iter()
                .map(|w| w.as_ref().map(assignment_string))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierParamsJson {
    pub zeta: String,
    pub zeta_prime: String,
    pub rho: String,
    pub beta: Vec<String>,
}

impl From<&ClassifierParams> for ClassifierParamsJson {
    fn from(p: &ClassifierParams) -> Self {
        ClassifierParamsJson {
            zeta: p.zeta.to_string(),
            zeta_prime: p.zeta_prime.to_string(),
            rho: p.rho.to_string(),
            beta: p.beta.iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct I2LevelJson {
    pub i: usize,
    pub passed: bool,
    pub max_count: u64,
    /// 1-based variables of the worst set.
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct I3FailureJson {
    pub vars: Vec<usize>,
    pub complemented: Vec<usize>,
    pub size: u64,
}

impl From<&I3Failure> for I3FailureJson {
    fn from(f: &I3Failure) -> Self {
        I3FailureJson {
            vars: f.vars.iter().map(|v| v + 1).collect(),
            complemented: unate_core::combin::elements(f.complemented)
                .map(|v| v + 1)
                .collect(),
            size: f.size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierJson {
    pub params: ClassifierParamsJson,
    pub minimal: bool,
    pub nearly_monotone: bool,
    pub non_monotone_clauses: u64,
    pub sparsely_minimal: bool,
    pub positive_dominant: bool,
    pub dense: bool,
    pub sparse_variable: Option<usize>,
    pub in_i1star: bool,
    pub i2: Vec<I2LevelJson>,
    pub in_i2star: bool,
    pub i3_universe: u64,
    pub i3_failures: u64,
    pub i3_first_failure: Option<I3FailureJson>,
    pub in_i3star: bool,
}

impl ClassifierJson {
    pub fn new(p: &ClassifierParams, v: &ClassifierVerdict) -> Self {
        ClassifierJson {
            params: p.into(),
            minimal: v.minimal,
            nearly_monotone: v.nearly_monotone,
            non_monotone_clauses: v.non_monotone_clauses,
            sparsely_minimal: v.sparsely_minimal,
            positive_dominant: v.positive_dominant,
            dense: v.dense,
            sparse_variable: v.sparse_variable.map(|x| x + 1),
            in_i1star: v.in_i1star,
            i2: v
                .i2
                .iter()
                .map(|l| I2LevelJson {
                    i: l.i,
                    passed: l.passed,
                    max_count: l.max_count,
                    witness: l
                        .witness
                        .as_ref()
                        .map(|w| w.iter().map(|x| x + 1).collect()),
                })
                .collect(),
            in_i2star: v.in_i2star,
            i3_universe: v.i3.universe,
            i3_failures: v.i3.failures,
            i3_first_failure: v.i3.first_failure.as_ref().map(Into::into),
            in_i3star: v.in_i3star,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyJson {
    pub n: usize,
    pub k: usize,
    pub clauses: usize,
    pub formula: String,
    pub flags: FlagsJson,
    pub function: Option<FunctionJson>,
    pub truth_table: Option<String>,
    pub profile: ProfileJson,
    pub minimality: Option<MinimalityJson>,
    pub classifier: Option<ClassifierJson>,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaJson {
    pub precondition: bool,
    pub a_max: u64,
    pub a_holds: bool,
    pub a_proof_bound_holds: bool,
    pub b_max: u64,
    pub b_holds: bool,
    pub c_max: u64,
    pub c_holds: bool,
    pub consistency_violation: bool,
}

impl From<&SparseMinimalityReport> for LemmaJson {
    fn from(r: &SparseMinimalityReport) -> Self {
        LemmaJson {
            precondition: r.precondition,
            a_max: r.a_max,
            a_holds: r.a_holds,
            a_proof_bound_holds: r.a_proof_bound_holds,
            b_max: r.b_max,
            b_holds: r.b_holds,
            c_max: r.c_max,
            c_holds: r.c_holds,
            consistency_violation: r.consistency_violation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityJson {
    pub n: usize,
    pub k: usize,
    pub classifier: ClassifierJson,
    pub lemma: LemmaJson,
    pub unate_distance: u64,
    pub unate_distance_exact: bool,
    /// Distance to unate below `ρ·|F|`.
    pub nearly_unate: bool,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientJson {
    pub n: usize,
    pub ell: usize,
    pub edges: usize,
    pub bound: u64,
    pub max_load: u64,
    pub matching_size: u64,
    pub total: bool,
    pub pass: bool,
    /// 1-based head per edge, in file order after canonical sorting.
    pub heads: Vec<usize>,
    pub runtime_ms: u64,
}

impl OrientJson {
    pub fn new(h: &Hypergraph, r: &OrientationReport, runtime_ms: u64) -> Self {
        OrientJson {
            n: h.n(),
            ell: h.ell(),
            edges: h.edge_count(),
            bound: r.bound,
            max_load: r.max_load,
            matching_size: r.matching_size,
            total: unate_core::lemmas::is_total(h, &r.orientation),
            pass: r.pass,
            heads: r.orientation.heads.iter().map(|v| v + 1).collect(),
            runtime_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionJson {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestJson {
    pub criteria: Vec<CriterionJson>,
    pub passed: bool,
    pub runtime_ms: u64,
}

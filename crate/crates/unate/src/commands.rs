//! Command implementations behind the `unate` binary. Each returns the JSON
//! result, a status and any witness files; persistence happens in `main`.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde_json::Value;

use unate_core::certificate::{
    default_params, enumeration_size, theta_sweep, verify_certificate, CertError, CertMode, Params,
};
use unate_core::exact::{count_le, pow_big};
use unate_core::formula::{
    alpha_profile, classify_syntactic, unate_distance, DistanceMode, Formula,
};
use unate_core::lemmas::orient;
use unate_core::pdg::{extremal_search, PdgError, SearchBudget, SearchMode};
use unate_core::semantics::{
    classify_function, enumerate_functions, is_minimal, minimal_formula_census, truth_table,
    CensusError,
};
use unate_core::stability::{check_sparse_minimality, classify_i1star, ClassifierParams};
use unate_core::{QSqrt2, Rational};

use crate::acceptance;
use crate::formats::{parse_hgr, parse_kdnf, write_pdg};
use crate::manifest::sha256_hex;
use crate::parallel::certify_enumeration;
use crate::report::*;
use crate::{input_err, CliError, Status};

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub result: Value,
    pub witnesses: Vec<(String, String)>,
    pub seeds: Vec<u64>,
    pub input_digests: BTreeMap<String, String>,
}

impl Outcome {
    fn new(status: Status, result: impl serde::Serialize) -> Self {
        Outcome {
            status,
            result: serde_json::to_value(result).expect("report serializes"),
            witnesses: Vec::new(),
            seeds: Vec::new(),
            input_digests: BTreeMap::new(),
        }
    }
}

fn elapsed(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// File contents and their digest; unreadable files are input errors.
fn read_input(path: &Path) -> Result<(String, String), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let digest = sha256_hex(text.as_bytes());
    Ok((text, digest))
}

fn read_formula(path: &Path) -> Result<(Formula, String), CliError> {
    let (text, digest) = read_input(path)?;
    let f = parse_kdnf(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok((f, digest))
}

#[derive(Debug, Clone)]
pub struct ClassifierOpts {
    pub zeta: Rational,
    pub zeta_prime: Option<Rational>,
    pub rho: Option<Rational>,
    pub beta: Option<Vec<Rational>>,
    pub cap: usize,
}

impl ClassifierOpts {
    pub fn params(&self, k: usize) -> Result<ClassifierParams, CliError> {
        let d = ClassifierParams::with_zeta(k, self.zeta).map_err(input_err)?;
        ClassifierParams::new(
            k,
            self.zeta,
            self.zeta_prime.unwrap_or(d.zeta_prime),
            self.rho.unwrap_or(d.rho),
            self.beta.clone().unwrap_or(d.beta),
        )
        .map_err(input_err)
    }
}

pub fn classify(path: &Path, opts: &ClassifierOpts) -> Result<Outcome, CliError> {
    let t = Instant::now();
    let (f, digest) = read_formula(path)?;
    let flags = classify_syntactic(&f);
    let profile = alpha_profile(&f);
    // semantic parts need a truth table and are skipped above the cap
    let table = truth_table(&f, opts.cap).ok();
    let function = match &table {
        Some(tt) => Some(classify_function(tt, f.k()).map_err(input_err)?),
        None => None,
    };
    let minimality = match table {
        Some(_) => Some(is_minimal(&f, opts.cap).map_err(input_err)?),
        None => None,
    };
    let classifier = match table {
        Some(_) => {
            let p = opts.params(f.k())?;
            let v = classify_i1star(&f, &p, opts.cap).map_err(input_err)?;
            Some(ClassifierJson::new(&p, &v))
        }
        None => None,
    };
    let result = ClassifyJson {
        n: f.n(),
        k: f.k(),
        clauses: f.len(),
        formula: f.to_string(),
        flags: (&flags).into(),
        function: function.as_ref().map(Into::into),
        truth_table: table.as_ref().map(|tt| tt.to_hex()),
        profile: (&profile).into(),
        minimality: minimality.as_ref().map(Into::into),
        classifier,
        runtime_ms: elapsed(t),
    };
    let mut out = Outcome::new(Status::Pass, result);
    out.input_digests.insert(path.display().to_string(), digest);
    Ok(out)
}

pub fn census(
    n: usize,
    k: usize,
    state_budget: usize,
    minimal_nodes: Option<u64>,
) -> Result<Outcome, CliError> {
    let t = Instant::now();
    let map = |e: CensusError| match e {
        CensusError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
        CensusError::Infeasible { .. } => CliError::Input(e.to_string()),
    };
    let r = enumerate_functions(n, k, state_budget).map_err(map)?;
    let minimal = match minimal_nodes {
        Some(budget) => match minimal_formula_census(n, k, budget).map_err(map)? {
            Some(m) => Some(m),
            None => {
                return Err(CliError::Budget(format!(
                    "minimal-formula search over {budget} nodes"
                )))
            }
        },
        None => None,
    };
    let json = CensusJson::new(&r, minimal.as_ref(), elapsed(t));
    let consistent = r.monotone_expected() == num_bigint::BigInt::from(r.monotone)
        && num_bigint::BigInt::from(r.unate) >= r.unate_lower_bound();
    Ok(Outcome::new(
        if consistent {
            Status::Pass
        } else {
            Status::Fail
        },
        json,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TuranMode {
    Exhaustive,
    BranchAndBound,
    Heuristic,
}

impl std::str::FromStr for TuranMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exhaustive" => Ok(TuranMode::Exhaustive),
            "bnb" | "branch-and-bound" => Ok(TuranMode::BranchAndBound),
            "heuristic" => Ok(TuranMode::Heuristic),
            _ => Err(format!("unknown mode `{s}` (exhaustive, bnb, heuristic)")),
        }
    }
}

impl std::fmt::Display for TuranMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TuranMode::Exhaustive => "exhaustive",
            TuranMode::BranchAndBound => "bnb",
            TuranMode::Heuristic => "heuristic",
        })
    }
}

#[derive(Debug, Clone)]
pub struct TuranOpts {
    pub n: usize,
    pub k: usize,
    pub theta: QSqrt2,
    pub mode: TuranMode,
    pub seed: u64,
    pub restarts: u32,
    pub max_nodes: u64,
}

pub fn turan(o: &TuranOpts) -> Result<Outcome, CliError> {
    let t = Instant::now();
    if o.theta <= QSqrt2::zero() {
        return Err(CliError::Input("theta must be positive".into()));
    }
    let mode = match o.mode {
        TuranMode::Exhaustive => SearchMode::Exhaustive,
        TuranMode::BranchAndBound => SearchMode::BranchAndBound,
        TuranMode::Heuristic => SearchMode::Heuristic {
            restarts: o.restarts,
            seed: o.seed,
        },
    };
    let r = extremal_search(
        o.n,
        o.k,
        &o.theta,
        mode,
        SearchBudget {
            max_nodes: o.max_nodes,
        },
    )
    .map_err(|e: PdgError| CliError::Input(e.to_string()))?;
    let json = TuranJson::new(&r, elapsed(t));
    let status = if !json.witness_tk_free || !json.witness_value_matches {
        Status::Fail
    } else if r.budget_exhausted && o.mode != TuranMode::Heuristic {
        Status::Budget
    } else {
        Status::Pass
    };
    let mut out = Outcome::new(status, json);
    out.witnesses
        .push(("witness.pdg".into(), write_pdg(&r.witness)));
    if o.mode == TuranMode::Heuristic {
        out.seeds.push(o.seed);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifyMode {
    /// Enumeration when within budget, closed form otherwise.
    Auto,
    Enumeration,
    ClosedForm,
}

impl std::str::FromStr for CertifyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(CertifyMode::Auto),
            "enumeration" => Ok(CertifyMode::Enumeration),
            "closed-form" | "closed_form" => Ok(CertifyMode::ClosedForm),
            _ => Err(format!(
                "unknown mode `{s}` (auto, enumeration, closed-form)"
            )),
        }
    }
}

impl std::fmt::Display for CertifyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CertifyMode::Auto => "auto",
            CertifyMode::Enumeration => "enumeration",
            CertifyMode::ClosedForm => "closed-form",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CertifyOpts {
    pub k: usize,
    pub theta: Option<QSqrt2>,
    pub a: Option<QSqrt2>,
    pub b: Option<QSqrt2>,
    pub mode: CertifyMode,
    pub budget: u64,
    pub sweep_steps: Option<u32>,
    pub workers: usize,
}

/// Missing parameters fall back to the defaults for `k`, which exist for
/// `k >= 4` only.
pub fn certify_params(o: &CertifyOpts) -> Result<Params, CliError> {
    if let (Some(theta), Some(a), Some(b)) = (&o.theta, &o.a, &o.b) {
        return Ok(Params {
            theta: theta.clone(),
            a: a.clone(),
            b: b.clone(),
        });
    }
    let d = default_params(o.k)
        .map_err(|e| CliError::Input(format!("{e}; pass --theta, --a and --b")))?;
    Ok(Params {
        theta: o.theta.clone().unwrap_or(d.theta),
        a: o.a.clone().unwrap_or(d.a),
        b: o.b.clone().unwrap_or(d.b),
    })
}

pub fn certify(o: &CertifyOpts) -> Result<Outcome, CliError> {
    let t = Instant::now();
    let p = certify_params(o)?;
    let mode = match o.mode {
        CertifyMode::Enumeration => CertMode::Enumeration,
        CertifyMode::ClosedForm => CertMode::ClosedForm,
        CertifyMode::Auto if enumeration_size(o.k) <= u128::from(o.budget) => CertMode::Enumeration,
        CertifyMode::Auto => CertMode::ClosedForm,
    };
    let map = |e: CertError| match e {
        CertError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
        _ => CliError::Input(e.to_string()),
    };
    let r = match mode {
        CertMode::Enumeration if o.k >= 2 => {
            certify_enumeration(o.k, &p, o.budget, o.workers).map_err(map)?
        }
        _ => verify_certificate(o.k, Some(p), mode, o.budget).map_err(map)?,
    };
    let sweep = match o.sweep_steps {
        Some(steps) if o.k >= 4 => Some(theta_sweep(o.k, steps)),
        Some(_) => return Err(CliError::Input("the theta sweep needs k >= 4".into())),
        None => None,
    };
    let json = CertJson::new(&r, sweep, elapsed(t));
    let mut out = Outcome::new(if r.passed { Status::Pass } else { Status::Fail }, json);
    if !r.failures.is_empty() {
        let mut s = String::new();
        for f in &r.failures {
            let example = f
                .example
                .as_ref()
                .map(|d| d.to_string())
                .unwrap_or_else(|| "-".into());
            s.push_str(&format!(
                "{} u={} d={} lhs={} example={}\n",
                f.kind, f.loops, f.arcs, f.lhs, example
            ));
        }
        out.witnesses.push(("failures.txt".into(), s));
    }
    Ok(out)
}

pub fn orient_file(path: &Path) -> Result<Outcome, CliError> {
    let t = Instant::now();
    let (text, digest) = read_input(path)?;
    let h = parse_hgr(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let r = orient(&h).map_err(input_err)?;
    let json = OrientJson::new(&h, &r, elapsed(t));
    let status = if json.pass && json.total {
        Status::Pass
    } else {
        Status::Fail
    };
    let mut s = String::new();
    for (e, head) in h.edges().iter().zip(&r.orientation.heads) {
        let verts: Vec<String> = unate_core::combin::elements(*e)
            .map(|v| (v + 1).to_string())
            .collect();
        s.push_str(&format!("{} -> {}\n", verts.join(" "), head + 1));
    }
    let mut out = Outcome::new(status, json);
    out.witnesses.push(("orientation.txt".into(), s));
    out.input_digests.insert(path.display().to_string(), digest);
    Ok(out)
}

pub fn stability(path: &Path, opts: &ClassifierOpts) -> Result<Outcome, CliError> {
    let t = Instant::now();
    let (f, digest) = read_formula(path)?;
    let p = opts.params(f.k())?;
    let v = classify_i1star(&f, &p, opts.cap).map_err(input_err)?;
    let lemma = check_sparse_minimality(&f, &p.zeta, opts.cap).map_err(input_err)?;
    let d = match unate_distance(&f, DistanceMode::default()) {
        Ok(d) => d,
        Err(_) => unate_distance(&f, DistanceMode::Heuristic).map_err(input_err)?,
    };
    // a heuristic distance is an upper bound, so only a pass is conclusive
    let nearly_unate = count_le(d.distance, &p.rho, &pow_big(f.n() as u64, f.k() as u64));
    let json = StabilityJson {
        n: f.n(),
        k: f.k(),
        classifier: ClassifierJson::new(&p, &v),
        lemma: (&lemma).into(),
        unate_distance: d.distance,
        unate_distance_exact: d.exact,
        nearly_unate,
        runtime_ms: elapsed(t),
    };
    let status = if lemma.consistency_violation {
        Status::Fail
    } else {
        Status::Pass
    };
    let mut out = Outcome::new(status, json);
    out.input_digests.insert(path.display().to_string(), digest);
    Ok(out)
}

pub fn selftest(ctx: &acceptance::Ctx, only: &[u32], mut each: impl FnMut(&str)) -> Outcome {
    let r = acceptance::run(ctx, only, |c| each(&c.line()));
    let status = if r.passed { Status::Pass } else { Status::Fail };
    let mut out = Outcome::new(status, r);
    out.seeds.push(ctx.seed);
    out
}

//! Worked examples with known answers, checked end to end through the public API.

use num_rational::BigRational;
use num_traits::Signed;

use unate_core::certificate::{
    classify_case, default_params, lhs_d_ineq, verify_certificate, CaseKind, CaseLabel, CertMode,
    Digraph, DEFAULT_ENUMERATION_BUDGET,
};
use unate_core::combin::binomial_big;
use unate_core::formula::{blowup, classify_syntactic, Clause, Formula, SignVector};
use unate_core::pdg::{
    conjectured_construction, contains_tk, extremal_search, link, make_tk, type_map, EdgeState,
    SearchBudget, SearchMode,
};
use unate_core::semantics::{
    enumerate_functions, is_minimal, witness, CENSUS_STATE_BUDGET, DEFAULT_TABLE_CAP,
};
use unate_core::stability::{check_i2, ClassifierParams};
use unate_core::{QSqrt2, Rational};

fn f(n: usize, k: usize, cl: &[&[i64]]) -> Formula {
    Formula::from_dimacs(n, k, cl).unwrap()
}

#[test]
fn unate_and_semisimple_examples() {
    let s = classify_syntactic(&f(3, 2, &[&[-1, 2], &[2, 3]]));
    assert_eq!(s.unate, Some(SignVector::new(3, 0b110)));
    assert!(classify_syntactic(&f(3, 2, &[&[-1, 2], &[1, 2], &[2, 3]]))
        .unate
        .is_none());
    assert!(classify_syntactic(&f(4, 3, &[&[1, -2, 3], &[1, -2, -3], &[1, 2, -4]])).semisimple);
    assert!(!classify_syntactic(&f(4, 3, &[&[1, -2, 3], &[1, 2, -3]])).semisimple);
}

#[test]
fn blowup_display() {
    // x_i' is variable i + 4
    let g = blowup(&f(4, 3, &[&[1, 2, 3], &[1, -3, 4]]), 2).unwrap();
    let expected = f(
        8,
        3,
        &[
            &[1, 2, 3],
            &[1, 2, 7],
            &[1, 6, 3],
            &[1, 6, 7],
            &[5, 2, 3],
            &[5, 2, 7],
            &[5, 6, 3],
            &[5, 6, 7],
            &[1, -3, 4],
            &[1, -3, 8],
            &[1, -7, 4],
            &[1, -7, 8],
            &[5, -3, 4],
            &[5, -3, 8],
            &[5, -7, 4],
            &[5, -7, 8],
        ],
    );
    assert_eq!(g, expected);
}

#[test]
fn non_minimal_example() {
    // w, x, y, z = 1, 2, 3, 4
    let g = f(4, 2, &[&[1, 2], &[1, 3], &[2, -4], &[-3, 4]]);
    assert!(!is_minimal(&g, DEFAULT_TABLE_CAP).unwrap().minimal);
    let wx = g
        .clauses()
        .iter()
        .position(|c| *c == Clause::monotone(0b0011))
        .unwrap();
    assert_eq!(witness(&g, wx, DEFAULT_TABLE_CAP).unwrap(), None);
    assert!(
        !is_minimal(
            &blowup(&f(3, 3, &[&[1, 2, 3], &[1, 2, -3]]), 2).unwrap(),
            DEFAULT_TABLE_CAP
        )
        .unwrap()
        .minimal
    );
}

#[test]
fn census_counts() {
    let r3 = enumerate_functions(3, 2, CENSUS_STATE_BUDGET).unwrap();
    assert_eq!(r3.monotone, 8u32.into());
    let r4 = enumerate_functions(4, 2, CENSUS_STATE_BUDGET).unwrap();
    assert_eq!(r4.monotone, 64u32.into());
    assert_eq!(r4.unate_lower_bound(), 512.into());
    assert!(r4.unate >= 512u32.into());
}

#[test]
fn type_and_tk_displays() {
    // a..e = 1..5
    let g = f(
        5,
        3,
        &[
            &[1, 2, 3],
            &[1, 2, -3],
            &[-1, 2, -4],
            &[2, 4, -5],
            &[-2, 4, -5],
        ],
    );
    assert_eq!(type_map(&g).unwrap().to_string(), "{12^3, 124, ^245}");
    assert_eq!(make_tk(2).to_string(), "{12, 1^3, 23}");
    assert_eq!(make_tk(3).to_string(), "{123, 12^4, 134}");
    assert_eq!(make_tk(4).to_string(), "{1234, 123^5, 1245}");
    let l = link(&make_tk(3), 3).unwrap();
    assert_eq!(l.get(0b011), EdgeState::Undirected);
}

#[test]
fn construction_density_tends_to_limit() {
    // directed density m·C(n-m, k-1)/C(n, k) at n = km approaches (1 - 1/k)^{k-1}
    let k = 3usize;
    let limit = BigRational::new(4.into(), 9.into());
    let mut last = None;
    for m in [2usize, 4, 8, 16] {
        let n = k * m;
        let h = conjectured_construction(n, k).unwrap();
        if m <= 4 {
            assert!(!contains_tk(&h));
        }
        let density = BigRational::new(
            h.directed_count().into(),
            binomial_big(n as u64, k as u64).into(),
        );
        let gap = (density - &limit).abs();
        if let Some(prev) = last {
            assert!(gap < prev);
        }
        last = Some(gap);
    }
}

#[test]
fn certificate_anchor_values() {
    for k in 4..=8usize {
        let p = default_params(k).unwrap();
        let mut star = vec![Some(0u8); k + 1];
        star[0] = None;
        let d = Digraph::new(star);
        assert_eq!(
            classify_case(&d).unwrap(),
            CaseLabel::D { loops: 0, arcs: k }
        );
        assert_eq!(lhs_d_ineq(&d, &p).unwrap(), QSqrt2::one());
        let mut two = vec![None; k + 1];
        two[0] = Some(1);
        two[1] = Some(0);
        let lhs = lhs_d_ineq(&Digraph::new(two), &p).unwrap();
        // 1 + (4 - k)/(2(k+1)k)
        assert_eq!(
            lhs,
            QSqrt2::one() + QSqrt2::from_ratio(4 - k as i64, 2 * (k as i64 + 1) * k as i64)
        );
    }
    assert_eq!(
        default_params(4).unwrap().b,
        "2 - 1/2*sqrt2".parse().unwrap()
    );
    let r = verify_certificate(5, None, CertMode::Enumeration, DEFAULT_ENUMERATION_BUDGET).unwrap();
    assert!(r.passed);
    let nontrivial: Vec<_> = r
        .tight_cases
        .iter()
        .filter(|t| !t.trivial)
        .map(|t| (t.kind, t.loops, t.arcs))
        .collect();
    assert_eq!(nontrivial, [(CaseKind::D, 0, 5)]);
}

#[test]
fn turan_small_maxima() {
    let two = QSqrt2::from_int(2);
    let r = extremal_search(3, 2, &two, SearchMode::Exhaustive, SearchBudget::default()).unwrap();
    assert_eq!(r.best_value, QSqrt2::from_ratio(4, 3));
    let r = extremal_search(5, 2, &two, SearchMode::Exhaustive, SearchBudget::default()).unwrap();
    assert_eq!(r.best_value, QSqrt2::from_ratio(6, 5));
    assert!(!contains_tk(&r.witness));
}

#[test]
fn i2_for_k2_checks_one_level() {
    let p = ClassifierParams::with_zeta(2, Rational::new(1, 4)).unwrap();
    let levels = check_i2(&f(4, 2, &[&[-1, 2], &[-1, 3], &[2, 3]]), &p).unwrap();
    assert_eq!(levels.len(), 1);
    // x̄1x2 and x̄1x3 exceed β_1·n = 1
    assert_eq!(levels[0].max_count, 2);
    assert_eq!(levels[0].witness, Some(vec![0]));
}

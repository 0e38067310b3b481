use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::sample::subsequence;

use satdesign::linalg::{rank, within_hadamard_bound};
use satdesign::partition::contrast_holds;
use satdesign::search::ReportMethod;
use satdesign::*;

/// Laplace expansion along the first row; independent of elimination.
fn cofactor_det(a: &[i64], n: usize) -> i128 {
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return i128::from(a[0]);
    }
    let mut total = 0i128;
    for col in 0..n {
        let minor: Vec<i64> = (1..n)
            .flat_map(|i| (0..n).filter(move |&j| j != col).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j])
            .collect();
        let sign = if col % 2 == 0 { 1 } else { -1 };
        total += sign * i128::from(a[col]) * cofactor_det(&minor, n - 1);
    }
    total
}

fn int_matrix(n: usize, a: &[i64]) -> IntMatrix {
    IntMatrix::from_fn(n, n, |i, j| a[i * n + j])
}

fn square(max_order: usize, lo: i64, hi: i64) -> impl Strategy<Value = (usize, Vec<i64>)> {
    (0..=max_order).prop_flat_map(move |n| (Just(n), prop::collection::vec(lo..=hi, n * n)))
}

fn sign_square(min_order: usize, max_order: usize) -> impl Strategy<Value = (usize, Vec<i64>)> {
    (min_order..=max_order).prop_flat_map(|n| {
        (Just(n), prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { 1 } else { -1 }), n * n))
    })
}

/// A random (negligible set, deletion set) pair for a 2^k model.
fn model_partition(k_lo: u32, k_hi: u32) -> impl Strategy<Value = Partition> {
    (k_lo..=k_hi)
        .prop_flat_map(|k| {
            let size = 1usize << k;
            (Just(k), 0..size)
        })
        .prop_flat_map(|(k, d)| {
            let size = 1usize << k;
            let effects: Vec<u16> = (1..size as u16).collect();
            let runs: Vec<u16> = (0..size as u16).collect();
            (Just(k), subsequence(effects, d), subsequence(runs, d))
        })
        .prop_map(|(k, neg, del)| {
            let spec =
                ModelSpec::new(k, neg.into_iter().map(|m| Effect::new(k, m).unwrap())).unwrap();
            let deleted: Vec<Run> = del.into_iter().map(|m| Run::new(k, m).unwrap()).collect();
            make_partition(&spec, &deleted).unwrap()
        })
}

fn rationals(len: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-50i64..=50, 1i64..=9), len)
        .prop_map(|v| v.into_iter().map(|(p, q)| BigRational::new(p.into(), q.into())).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1500))]

    #[test]
    fn det_agrees_with_cofactor_expansion((n, a) in square(4, -9, 9)) {
        let d = det_exact(&int_matrix(n, &a)).unwrap();
        prop_assert_eq!(d, BigInt::from(cofactor_det(&a, n)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn det_invariant_under_transpose((n, a) in sign_square(1, 8)) {
        let m = int_matrix(n, &a);
        let d = det_exact(&m).unwrap();
        prop_assert_eq!(&d, &det_exact(&m.transpose()).unwrap());
        prop_assert!(within_hadamard_bound(n, &d));
    }

    #[test]
    fn inverse_multiplies_to_identity((n, a) in square(6, -5, 5)) {
        let m = int_matrix(n, &a);
        match inverse_exact(&m) {
            Ok(inv) => {
                prop_assert!(matmul(&inv, &m).unwrap().is_identity());
                prop_assert!(matmul(&m, &inv).unwrap().is_identity());
            }
            Err(Error::Singular { det }) => {
                prop_assert!(det.is_zero());
                prop_assert!(det_exact(&m).unwrap().is_zero());
                prop_assert!(rank(&m) < n);
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn partition_duality_and_identity(p in model_partition(1, 4)) {
        let check = verify_theorem1(&p);
        prop_assert!(check.holds, "{check:?}");
        prop_assert_eq!(check.abs_det_c.is_zero(), check.abs_det_d.is_zero());
        prop_assert!(within_hadamard_bound(p.c().rows(), &check.abs_det_c));
        prop_assert!(within_hadamard_bound(p.d().rows(), &check.abs_det_d));
        if !check.abs_det_c.is_zero() {
            let inv = inverse_via_complement(&p).unwrap();
            prop_assert_eq!(&inv.matrix, &inverse_exact(p.d()).unwrap());
            prop_assert!(contrast_holds(&inv.matrix));
            // denominators of D^{-1} divide N * |det C|
            let bound = BigInt::from(p.runs()) * &check.abs_det_c;
            prop_assert!(inv.matrix.entries().iter().all(|x| (&bound % x.denom()).is_zero()));
        } else {
            prop_assert_eq!(inverse_via_complement(&p), Err(Error::Inadmissible));
        }
    }

    #[test]
    fn noiseless_estimation_is_exact(
        (p, theta) in model_partition(1, 4).prop_flat_map(|p| {
            let n = p.kept().len();
            (Just(p), rationals(n))
        })
    ) {
        prop_assume!(!verify_theorem1(&p).abs_det_c.is_zero());
        let y = ObservationVector::new(p.d().to_rational().apply(&theta).unwrap());
        let est = blue(&p, &y).unwrap();
        let got: Vec<BigRational> = est.theta1_hat.iter().map(|(_, v)| v.clone()).collect();
        prop_assert_eq!(&got, &theta);
        let blup: Vec<BigRational> = blup_unobserved(&p, &y).unwrap().into_iter().map(|(_, v)| v).collect();
        prop_assert_eq!(blup, p.v().to_rational().apply(&theta).unwrap());

        let inv = inverse_exact(p.d()).unwrap();
        prop_assert_eq!(&est.dispersion, &inv.matmul(&inv.transpose()).unwrap());
        prop_assert!(est.dispersion.is_symmetric());
        // Each non-mean estimate is a contrast of the observed runs.
        let coef = satdesign::estimation::blue_coefficients(&p).unwrap();
        for (i, s) in coef.row_sums().iter().enumerate() {
            if i == 0 { prop_assert!(s.is_one()) } else { prop_assert!(s.is_zero()) }
        }
    }

    #[test]
    fn admissibility_matches_design_invertibility(p in model_partition(1, 4)) {
        let report = is_admissible(p.spec(), p.deleted()).unwrap();
        let det_d = det_exact(p.d()).unwrap();
        prop_assert_eq!(report.admissible, !det_d.is_zero());
        prop_assert_eq!(&report.abs_det_d, &det_d.abs());
        prop_assert_eq!(&report.abs_det_c, &det_exact(p.c()).unwrap().abs());
        prop_assert_eq!(report.method, ReportMethod::Check);
    }
}

#[test]
fn model_matrix_determinant_meets_hadamard_bound() {
    for k in 1..=4u32 {
        let h = build_model_matrix(k).unwrap();
        let n = 1usize << k;
        let expected = num_traits::pow(BigInt::from(n), n / 2);
        assert_eq!(det_exact(&h).unwrap().abs(), expected, "k = {k}");
    }
}

#[test]
fn every_partition_of_h8_satisfies_the_identity() {
    let all_eff: Vec<Effect> = all_effects(3).unwrap().into_iter().skip(1).collect();
    let runs = all_runs(3).unwrap();
    let mut checked = 0;
    for d in 0..=4usize {
        for neg in combinations(&all_eff, d) {
            let spec = ModelSpec::new(3, neg).unwrap();
            for deleted in combinations(&runs, d) {
                let p = make_partition(&spec, &deleted).unwrap();
                let check = verify_theorem1(&p);
                assert!(check.holds);
                assert_eq!(check.abs_det_c.is_zero(), check.abs_det_d.is_zero());
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 1 + 7 * 8 + 21 * 28 + 35 * 56 + 35 * 70);
}

fn combinations<T: Copy>(items: &[T], r: usize) -> Vec<Vec<T>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], r - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn search_specs() -> Vec<ModelSpec> {
    vec![
        ModelSpec::from_labels(3, &["F123"]).unwrap(),
        ModelSpec::from_labels(3, &["F23", "F123"]).unwrap(),
        ModelSpec::from_labels(3, &["F12", "F13", "F23", "F123"]).unwrap(),
        ModelSpec::from_labels(4, &["F123", "F124", "F134", "F234", "F1234"]).unwrap(),
        ModelSpec::from_labels(4, &["F34", "F123", "F124", "F134", "F234", "F1234"]).unwrap(),
        ModelSpec::from_labels(4, &["F12", "F13", "F14", "F1234"]).unwrap(),
    ]
}

#[test]
fn enumerated_determinants_lie_in_the_spectrum() {
    for spec in search_specs() {
        let spectrum = spectrum(spec.d()).unwrap();
        let e = enumerate_admissible(&spec, &SearchConfig::default()).unwrap();
        for r in &e.designs {
            assert!(spectrum.raw.contains(&r.abs_det_c), "{} not in S_{}", r.abs_det_c, spec.d());
            let factor = num_traits::pow(BigInt::from(spec.runs()), spec.n() - spec.runs() / 2);
            assert_eq!(r.abs_det_d, &r.abs_det_c * factor);
        }
        let total: u128 = e.classes.iter().map(|c| c.count).sum::<u128>() + e.inadmissible;
        assert_eq!(total, e.total);
    }
}

#[test]
fn exhaustive_optimum_matches_enumeration_and_bounds_exchange() {
    for spec in search_specs() {
        let e = enumerate_admissible(&spec, &SearchConfig::default()).unwrap();
        let opt = d_optimal(&spec, &SearchConfig::default()).unwrap();
        assert!(opt.certified);
        assert_eq!(opt.best.abs_det_c, e.max_abs_det_c());
        let expected: Vec<_> = e.designs.iter().filter(|r| r.optimal).map(|r| r.deleted.clone()).collect();
        let got: Vec<_> = opt.optima.iter().map(|r| r.deleted.clone()).collect();
        assert_eq!(got, expected);
        for seed in 0..4 {
            let ex = d_optimal(&spec, &SearchConfig::exchange(seed)).unwrap();
            assert!(ex.best.abs_det_c <= opt.best.abs_det_c);
            assert!(!ex.certified);
        }
    }
}

#[test]
fn efficiency_ratio_reflects_class() {
    let spec = ModelSpec::from_labels(4, &["F123", "F124", "F134", "F234", "F1234"]).unwrap();
    let e = enumerate_admissible(&spec, &SearchConfig::default()).unwrap();
    for r in &e.designs {
        let ratio = r.efficiency_ratio.clone().unwrap();
        assert_eq!(ratio, BigRational::new(r.abs_det_c.clone(), 48.into()));
        assert_eq!(ratio.is_one(), r.optimal);
    }
}

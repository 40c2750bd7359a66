use landscape_core::audit::{audit_descent, audit_levels};
use landscape_core::descent::{blind_steps, lbd_steps, savings_scan, DescentSpec, ImpForm};
use landscape_core::io::{distribution_table, kernel_table, read_distribution, read_kernel};
use landscape_core::models::{lipschitz_space, LipschitzSpaceSpec, Window};
use landscape_core::rate::{blind_improvement, expected_improvement_to_target};
use landscape_core::simulate::{simulate_lbd, SimConfig};
use landscape_core::{
    analyse, check_unbiased, compute_nweights, CostDistribution, CostRange, Distribution, Kernel, NeighbourKernel,
    NeighbourhoodSize,
};
use num_rational::BigRational;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

/// Positive weights over `0..len`.
fn weights(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..1000, len)
}

fn dist_from(w: &[u32]) -> Distribution {
    let counts: Vec<u64> = w.iter().map(|&x| u64::from(x)).collect();
    CostDistribution::from_counts(CostRange::new(0, w.len() as i64 - 1).unwrap(), &counts).unwrap()
}

/// A distribution together with an arbitrary count kernel on the same range.
fn arbitrary_landscape() -> impl Strategy<Value = (Distribution, Kernel)> {
    (3usize..16).prop_flat_map(|n| {
        (weights(n..n + 1), prop::collection::vec(0u64..50, n * n)).prop_map(move |(w, mut c)| {
            for i in 0..n {
                c[i * n + i] += 1;
            }
            let d = dist_from(&w);
            let k = NeighbourKernel::from_counts(d.range(), NeighbourhoodSize::Finite(8), &c).unwrap();
            (d, k)
        })
    })
}

/// Lipschitz space over a random base.
fn lipschitz_landscape() -> impl Strategy<Value = (Distribution, Kernel)> {
    (weights(5..60), 1u64..12, any::<bool>()).prop_map(|(w, b, padded)| {
        let spec = LipschitzSpaceSpec {
            base: dist_from(&w),
            bound: b,
            window: if padded { Window::Padded } else { Window::ZeroExtended },
            size: NeighbourhoodSize::Finite(20),
        };
        lipschitz_space(&spec).unwrap()
    })
}

/// Unimodal base: increasing towards a mode, then anything.
fn unimodal_landscape() -> impl Strategy<Value = (Distribution, Kernel)> {
    (prop::collection::vec(1u32..40, 8..50), 1u64..8).prop_map(|(steps, b)| {
        let mut w = Vec::with_capacity(steps.len());
        let mut acc = 0u32;
        for s in steps {
            acc += s;
            w.push(acc);
        }
        let base = dist_from(&w);
        lipschitz_space(&LipschitzSpaceSpec {
            base,
            bound: b,
            window: Window::ZeroExtended,
            size: NeighbourhoodSize::Finite(30),
        })
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rows_and_distribution_sum_to_one((d, k) in prop_oneof![arbitrary_landscape(), lipschitz_landscape()]) {
        let total: f64 = d.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for k1 in k.present_rows() {
            let s: f64 = k.row(k1).unwrap().iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn nweights_reproduce_symmetric_mass((d, k) in arbitrary_landscape()) {
        let w = compute_nweights(&d, &k).unwrap();
        for k1 in k.present_rows() {
            for (delta, r) in w.defined(k1) {
                let lhs = k.pn(k1, k1 + delta) + k.pn(k1, k1 - delta);
                let rhs = (d.p(k1 + delta) + d.p(k1 - delta)) * r;
                prop_assert!((lhs - rhs).abs() < 1e-12, "k={k1} δ={delta}");
            }
        }
    }

    #[test]
    fn lipschitz_kernels_are_unbiased((d, k) in lipschitz_landscape()) {
        let w = compute_nweights(&d, &k).unwrap();
        for k1 in k.present_rows() {
            // padded windows add the spill mass to pn(k,k) only, never below
            prop_assert!(check_unbiased(&d, &k, &w, k1).unbiased, "k={k1}");
        }
    }

    #[test]
    fn level_inequalities_hold_under_hypotheses((d, k) in prop_oneof![arbitrary_landscape(), lipschitz_landscape(), unimodal_landscape()]) {
        let (w, report) = analyse(&d, &k).unwrap();
        let a = audit_levels(&w, &report, TOL);
        prop_assert!(a.violations.is_empty(), "{:?}", a.violations);
    }

    #[test]
    fn descent_inequalities_hold_under_full_nsc((d, k) in prop_oneof![lipschitz_landscape(), unimodal_landscape()]) {
        let w = compute_nweights(&d, &k).unwrap();
        let a = audit_descent(&d, &k, &w, d.range().costs(), TOL).unwrap();
        prop_assert!(a.violations.is_empty(), "{:?}", a.violations);
    }

    #[test]
    fn descent_from_target_is_blind((d, k) in unimodal_landscape(), t in 0i64..8) {
        let spec = DescentSpec { start: t, target: t, size: k.size() };
        let r = lbd_steps(&d, &k, spec, ImpForm::Normalized).unwrap();
        let blind = blind_steps(&d, t).unwrap();
        prop_assert!((r.lbd_steps - blind).abs() <= 1e-12 * blind);
        prop_assert!(r.savings.abs() <= 1e-12);
    }

    #[test]
    fn savings_never_exceed_one((d, k) in unimodal_landscape(), t in 0i64..5) {
        let scan = savings_scan(&d, &k, t, k.size(), ImpForm::Normalized).unwrap();
        for (_, s) in scan.curve.iter() {
            if let Some(s) = s {
                prop_assert!(*s <= 1.0);
            }
        }
    }

    #[test]
    fn blind_rate_grows_with_cost(w in weights(3..80)) {
        let d = dist_from(&w);
        let e: Vec<f64> = d.range().costs().map(|k| blind_improvement(&d, k)).collect();
        prop_assert!(e.windows(2).all(|p| p[1] >= p[0]));
    }

    #[test]
    fn rate_to_target_is_bounded_by_rate_at_target((d, k) in lipschitz_landscape(), a in 0i64..60, b in 0i64..60) {
        let (t, k1) = (a.min(b).min(d.k_max()), a.max(b).min(d.k_max()));
        let to_target = expected_improvement_to_target(&d, &k, k1, t).unwrap();
        let own = expected_improvement_to_target(&d, &k, k1, k1).unwrap();
        prop_assert!(to_target.en_imp <= own.en_imp + 1e-12);
        prop_assert!(to_target.e_imp <= own.e_imp + 1e-12);
    }

    #[test]
    fn csv_round_trip((d, k) in arbitrary_landscape()) {
        let mut buf = Vec::new();
        kernel_table(&k).write_csv(&mut buf).unwrap();
        prop_assert_eq!(read_kernel(&buf[..], k.range(), k.size()).unwrap(), k);
        buf.clear();
        distribution_table(&d).write_csv(&mut buf).unwrap();
        prop_assert_eq!(read_distribution(&buf[..]).unwrap(), d);
    }

    #[test]
    fn float_tracks_exact(w in weights(4..20), b in 1u64..5) {
        let counts: Vec<u64> = w.iter().map(|&x| u64::from(x)).collect();
        let range = CostRange::new(0, w.len() as i64 - 1).unwrap();
        let exact = CostDistribution::<BigRational>::from_counts(range, &counts).unwrap();
        let size = NeighbourhoodSize::Finite(6);
        let (de, ke) = lipschitz_space(&LipschitzSpaceSpec { base: exact, bound: b, window: Window::ZeroExtended, size }).unwrap();
        let (df, kf) = lipschitz_space(&LipschitzSpaceSpec { base: dist_from(&w), bound: b, window: Window::ZeroExtended, size }).unwrap();
        for start in 1..range.k_max() {
            let spec = DescentSpec { start, target: 0, size };
            let x = lbd_steps(&de, &ke, spec, ImpForm::Normalized).map(|r| r.lbd_steps);
            let f = lbd_steps(&df, &kf, spec, ImpForm::Normalized).map(|r| r.lbd_steps);
            match (x, f) {
                (Ok(x), Ok(f)) => {
                    let x = landscape_core::Scalar::as_f64(&x);
                    prop_assert!((x - f).abs() <= 1e-9 * x.abs().max(1.0), "start {start}: {x} vs {f}");
                }
                (Err(_), Err(_)) => {}
                (x, f) => prop_assert!(false, "start {start}: {x:?} vs {f:?}"),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn simulation_ignores_thread_count((d, k) in unimodal_landscape(), seed in any::<u64>()) {
        let start = d.k_mod().min(6);
        let cfg = SimConfig::new(300, seed, DescentSpec { start, target: 0, size: k.size() });
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| simulate_lbd(&d, &k, &cfg)).unwrap();
        let b = many.install(|| simulate_lbd(&d, &k, &cfg)).unwrap();
        prop_assert_eq!(a, b);
    }
}

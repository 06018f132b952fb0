use proptest::prelude::*;
use std::sync::OnceLock;

use prehom::config::parse_kv;
use prehom::heatflow::{kernel_xy, langlands_kernel, log_gauss_flow, NormalizationVariant};
use prehom::params::{fmt_real, parse_real};
use prehom::phspace::PVSpace;
use prehom::report::CheckReport;
use prehom::symbolkern::{GroupFunction, SymbolEvaluator};
use prehom::special::{gamma, gamma_real};
use prehom::C64;

fn line_ev() -> &'static SymbolEvaluator {
    static EV: OnceLock<SymbolEvaluator> = OnceLock::new();
    EV.get_or_init(|| {
        let f = GroupFunction::log_gauss(1.0, 0.2).unwrap();
        SymbolEvaluator::new(&f, &PVSpace::scalar1d()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn real_format_round_trips(x in -1e6f64..1e6) {
        prop_assert_eq!(parse_real(&fmt_real(x)).unwrap(), x);
    }

    #[test]
    fn residual_is_symmetric_and_scale_free(a in -10.0f64..10.0, b in -10.0f64..10.0, k in 0.1f64..100.0) {
        let r1 = CheckReport::scalar("x", "a", C64::new(a, 0.0), C64::new(b, 1.0), 1.0);
        let r2 = CheckReport::scalar("x", "a", C64::new(b, 1.0), C64::new(a, 0.0), 1.0);
        prop_assert_eq!(r1.rel_residual, r2.rel_residual);
        let r3 = CheckReport::scalar("x", "a", C64::new(a * k, 0.0), C64::new(b * k, k), 1.0);
        prop_assert!((r3.rel_residual - r1.rel_residual).abs() < 1e-12);
    }

    #[test]
    fn tightening_never_turns_a_fail_into_a_pass(m in -5.0f64..5.0, t1 in 0.01f64..3.0, t2 in 0.01f64..3.0) {
        let r = CheckReport::measure("x", "a", m, None, Some(t1.max(t2)));
        let tight = r.clone().with_tolerance(t1.min(t2));
        prop_assert!(!tight.passed || r.passed);
    }

    #[test]
    fn gamma_recurrence(re in 0.1f64..5.0, im in -3.0f64..3.0) {
        let s = C64::new(re, im);
        let lhs = gamma(s + 1.0).unwrap();
        let rhs = s * gamma(s).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn gamma_reflection(x in 0.05f64..0.95) {
        let v = gamma_real(x) * gamma_real(1.0 - x) * (std::f64::consts::PI * x).sin();
        prop_assert!((v - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn heat_kernel_is_inversion_symmetric(t in 0.05f64..3.0, x in 0.01f64..100.0) {
        for v in [NormalizationVariant::Corrected, NormalizationVariant::Printed] {
            let a = langlands_kernel(t, x, v);
            let b = langlands_kernel(t, 1.0 / x, v);
            prop_assert!((a - b).abs() <= 1e-13 * a.max(1e-300));
        }
    }

    #[test]
    fn kernel_is_homogeneous(t in 0.1f64..2.0, x in 0.1f64..5.0, y in 0.1f64..5.0, l in 0.1f64..10.0) {
        let v = NormalizationVariant::Corrected;
        let a = kernel_xy(t, l * x, l * y, v) * l;
        let b = kernel_xy(t, x, y, v);
        prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300));
        prop_assert_eq!(kernel_xy(t, x, -y, v), 0.0);
    }

    #[test]
    fn log_gauss_flow_composes(t in 0.05f64..1.0, s in 0.05f64..1.0, x in 0.2f64..5.0) {
        // Gaussian widths add: (1 + 4a t)(1 + 4a' s) with a' = a/(1+4at)
        let a = 0.7;
        let v = NormalizationVariant::Corrected;
        let direct = log_gauss_flow(t + s, a, 0.0, x, v);
        let a1 = a / (1.0 + 4.0 * a * t);
        let c1 = (1.0 + 4.0 * a * t).powf(-0.5);
        let composed = c1 * log_gauss_flow(s, a1, 0.0, x, v);
        prop_assert!((direct - composed).abs() <= 1e-13 * direct.max(1e-300));
    }

    #[test]
    fn invariance_holds_for_any_seed(seed in any::<u64>()) {
        for spec in ["scalar1d", "definite:B=diag(1,2,3),n=3", "indefinite:q=2,n=3"] {
            let sp = PVSpace::parse(spec).unwrap();
            let g = sp.sample_group(3, seed).unwrap();
            let m = sp.sample_points(3, seed);
            for (gi, mi) in g.iter().zip(&m) {
                prop_assert!(sp.check_relative_invariance(gi, mi).passed);
                prop_assert!(sp.check_determinant(gi).passed);
            }
        }
    }

    #[test]
    fn config_lines_round_trip(key in "[a-z_]{1,12}", val in "[a-z0-9.]{1,12}") {
        let parsed = parse_kv(&format!("  {key} = {val}  \n")).unwrap();
        prop_assert_eq!(parsed, vec![(key, val)]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symbol_scaling_identity(m in -3.0f64..3.0, xi in -6.0f64..6.0, la in -2.5f64..2.5) {
        let ev = line_ev();
        let alpha = la.exp();
        let a = ev.symbol(&[alpha * m], &[xi]).unwrap();
        let b = ev.symbol(&[m], &[alpha * xi]).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1e-3));
        prop_assert!(a.norm() <= ev.f.l1_norm() * (1.0 + 1e-10));
    }
}

use num_rational::BigRational;
use num_traits::Pow;
use proptest::prelude::*;

use taylor_l2::extended::{narrow, Wide};
use taylor_l2::l2::{
    assemble_w, error_bound_with_m, l2_error, objective_identity, perturbation_check, solve, Method,
};
use taylor_l2::lab::{duel, fit_slopes, registry_lookup, sweep, Norm};
use taylor_l2::moment::{
    alpha_table, block_decompose, build_moment, cauchy_det_closed_form, cauchy_det_elimination,
    det_via_factorization, CauchySpec,
};
use taylor_l2::poly::{taylor_truncation, FunctionSpec, Polynomial};
use taylor_l2::remez::{linf_error, solve_remez};
use taylor_l2::scalar::Scalar;

const SMOOTH: &[&str] = &["exp", "sin", "cos", "atan", "runge"];

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 24,
        ..ProptestConfig::default()
    }
}

fn log_eps() -> impl Strategy<Value = f64> {
    (-3.0f64..0.0).prop_map(|e| 10f64.powf(e))
}

fn float(x: f64) -> Scalar {
    Scalar::Float(x)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn odd_coefficients_vanish_for_even_functions(name in prop::sample::select(vec!["cos", "runge"]),
                                                   eps in log_eps(), k in 0usize..=6) {
        let f = registry_lookup(name).unwrap();
        let r = solve(&f, &float(0.0), &float(eps), k, Method::NormalEquations).unwrap();
        let c = r.poly.coeffs_f64();
        let scale = c.iter().enumerate().map(|(i, a)| (a * eps.powi(i as i32)).abs()).fold(1.0, f64::max);
        for i in (1..=k).step_by(2) {
            prop_assert!((c[i] * eps.powi(i as i32)).abs() <= 1e-12 * scale, "a_{} = {}", i, c[i]);
        }
    }

    #[test]
    fn determinant_routes_agree(k in 0usize..=6, p in 1i64..=7, q in 1i64..=7) {
        let eps = BigRational::new(p.into(), q.into());
        let e = Scalar::Exact(eps.clone());
        let direct = build_moment(k, &e).unwrap().det_direct();
        let fact = det_via_factorization(k, &e).unwrap();
        let split = block_decompose(k);
        let n = k as i32 + 1;
        let scale = BigRational::from_integer(2.into()).pow(n) * Pow::pow(&eps, n * n);
        prop_assert_eq!(&direct, &fact);
        prop_assert_eq!(fact, Scalar::Exact(scale * split.b.det() * split.c.det()));
        prop_assert!(direct.is_positive());
    }

    #[test]
    fn cauchy_routes_agree(i in 1u32..=15, t in 0u32..=7) {
        let spec = CauchySpec::new(i, t).unwrap();
        let closed = cauchy_det_closed_form(spec);
        prop_assert_eq!(&closed, &cauchy_det_elimination(spec));
        prop_assert_eq!(closed, spec.matrix().det());
    }

    #[test]
    fn methods_agree(name in prop::sample::select(SMOOTH.to_vec()), eps in log_eps(), k in 0usize..=6) {
        let f = registry_lookup(name).unwrap();
        let n = solve(&f, &float(0.0), &float(eps), k, Method::NormalEquations).unwrap();
        let l = solve(&f, &float(0.0), &float(eps), k, Method::LegendreProjection).unwrap();
        for (a, b) in n.poly.coeffs_f64().iter().zip(l.poly.coeffs_f64()) {
            prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "{} vs {}", a, b);
        }
    }

    #[test]
    fn residual_is_orthogonal_to_the_basis(name in prop::sample::select(SMOOTH.to_vec()),
                                            eps in log_eps(), k in 0usize..=5) {
        let f = registry_lookup(name).unwrap();
        let r = solve(&f, &float(0.0), &float(eps), k, Method::NormalEquations).unwrap();
        let (fw, pw) = (f.clone(), r.poly.clone());
        let (fe, pe) = (f.clone(), r.poly.clone());
        let residual = FunctionSpec::new("residual", move |x| fe.eval(x) - pe.eval(x), usize::MAX / 2, f.domain())
            .unwrap()
            .with_wide(move |x: Wide| fw.eval_wide(x) - pw.eval_wide(x));
        let w = assemble_w(&residual, 0.0, eps, k).unwrap();
        let fmax = (-10..=10).map(|j| f.eval(eps * j as f64 / 10.0).abs()).fold(0.0, f64::max);
        for (j, wj) in w.iter().enumerate() {
            let scale = 2.0 * fmax * eps.powi(j as i32 + 1) / (j + 1) as f64;
            prop_assert!(wj.abs() <= 1e-10 * scale, "j = {}: {:e} vs scale {:e}", j, wj, scale);
        }
    }

    #[test]
    fn solution_beats_taylor_and_perturbations(name in prop::sample::select(SMOOTH.to_vec()),
                                               eps in log_eps(), k in 0usize..=4, seed in 0u64..1000) {
        let f = registry_lookup(name).unwrap();
        let r = solve(&f, &float(0.0), &float(eps), k, Method::NormalEquations).unwrap();
        let taylor = taylor_truncation(&f, &float(0.0), k).unwrap();
        prop_assert!(r.residual_l2 <= l2_error(&f, &taylor, 0.0, eps).unwrap());
        prop_assert!(perturbation_check(&f, &r, 20, 1e-3, seed).unwrap());
    }

    #[test]
    fn objective_identity_matches_quadrature(name in prop::sample::select(SMOOTH.to_vec()),
                                             eps in 0.5f64..1.0, k in 0usize..=2) {
        let f = registry_lookup(name).unwrap();
        let r = solve(&f, &float(0.0), &float(eps), k, Method::NormalEquations).unwrap();
        let j = objective_identity(&f, 0.0, eps, &r).unwrap();
        prop_assert!((j - r.residual_l2).abs() <= 1e-10 * r.residual_l2, "{} vs {}", j, r.residual_l2);
    }

    #[test]
    fn bound_scales_with_eps_power(k in 0usize..=6, m in 0.01f64..100.0, eps in 1e-3f64..1.0) {
        let alpha = alpha_table(k).unwrap();
        for i in 0..=k {
            let ratio = error_bound_with_m(&alpha, k, i, eps / 2.0, m) / error_bound_with_m(&alpha, k, i, eps, m);
            let expected = 0.5f64.powi((k + 1 - i) as i32);
            prop_assert!((ratio - expected).abs() <= 1e-12 * expected);
        }
    }

    #[test]
    fn polynomial_taylor_never_loses(c in prop::collection::vec(-5.0f64..5.0, 2..=4), shift in 0.01f64..1.0,
                                     norm in prop::sample::select(vec![Norm::L2, Norm::Linf])) {
        let coeffs: Vec<String> = c.iter().map(|v| format!("{v}")).collect();
        let f = registry_lookup(&format!("poly:{}", coeffs.join(","))).unwrap();
        let k = c.len() - 1;
        let mut other = c.clone();
        other[0] += shift;
        let p = Polynomial::from_f64(0.0, &other).unwrap();
        let report = duel(&f, 0.0, k, &p, &[1.0, 0.3, 0.1, 0.01], norm).unwrap();
        prop_assert!(report.grid.iter().all(|row| row.taylor_wins()));
        prop_assert_eq!(report.threshold, Some(1.0));
    }

    #[test]
    fn minimax_error_is_bracketed(name in prop::sample::select(SMOOTH.to_vec()), eps in 0.05f64..1.0, k in 0usize..=3) {
        let f = registry_lookup(name).unwrap();
        let r = solve_remez(&f, 0.0, eps, k).unwrap();
        prop_assert!(r.equioscillates(&f));
        // de la Vallée Poussin: no degree-k polynomial beats the smallest
        // alternating residual, and the Remez answer is within tolerance of
        // the largest.
        let low = r.alternation_points.iter().map(|&x| r.residual(&f, x).abs()).fold(f64::INFINITY, f64::min);
        let l2 = solve(&f, &float(0.0), &float(eps), k, Method::NormalEquations).unwrap();
        let taylor = taylor_truncation(&f, &float(0.0), k).unwrap();
        for q in [&l2.poly, &taylor] {
            prop_assert!(linf_error(&f, q, 0.0, eps).unwrap() >= low * (1.0 - 1e-12));
        }
        let check = linf_error(&f, &r.poly, 0.0, eps).unwrap();
        prop_assert!((check - r.max_error).abs() <= 1e-8 * r.max_error + 1e-300);
        prop_assert!(low <= r.max_error);
    }
}

#[test]
fn sweeps_are_deterministic() {
    let f = registry_lookup("runge").unwrap();
    let a = sweep(&f, &float(0.0), 3, 0.1, 1e-3, 12, Method::NormalEquations).unwrap();
    let b = sweep(&f, &float(0.0), 3, 0.1, 1e-3, 12, Method::NormalEquations).unwrap();
    assert_eq!(a, b);
    let fa: Vec<_> = fit_slopes(&a).into_iter().map(|r| r.ok()).collect();
    let fb: Vec<_> = fit_slopes(&b).into_iter().map(|r| r.ok()).collect();
    assert_eq!(fa, fb);
}

#[test]
fn wide_coefficients_round_to_the_reported_ones() {
    let f = registry_lookup("atan").unwrap();
    let r = solve(&f, &float(0.2), &float(0.05), 4, Method::LegendreProjection).unwrap();
    let rounded: Vec<f64> = r.coeffs_wide().iter().map(|&w| narrow(w)).collect();
    assert_eq!(rounded, r.poly.coeffs_f64());
}

use std::f64::consts::PI;

use fluidstar_core::catalog;
use fluidstar_core::conformal::{basic_invariant_eval, build_model, solve_lapse, BuildSpec, PhiProfile};
use fluidstar_core::energy::{conditions, scan};
use fluidstar_core::geometry::{tolman_residuals, BasicInvariant, Interval};
use fluidstar_core::numerics::grid;
use fluidstar_core::quasilocal::level_set_data;
use fluidstar_core::tov::{solve_star, EquationOfState, SolverOptions};
use proptest::prelude::*;

fn small_cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

proptest! {
    #[test]
    fn energy_conditions_chain(mu in -1.0f64..1.0, rho in -1.0f64..1.0) {
        let (w, n, d) = conditions(mu, rho);
        prop_assert!(!d || w);
        prop_assert!(!w || n);
    }

    #[test]
    fn scans_preserve_the_chain(a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0) {
        let g = grid::linspace(0.1, 5.0, 64);
        let s = scan(&|r| Ok(a + b * r.sin()), &|r| Ok(c * r.cos() - b), &g).unwrap();
        prop_assert!(s.chain_holds());
        let first = s.first_violation.as_ref().map(|v| v.r);
        let any_fail = s.nec.iter().zip(&s.wec).zip(&s.dec).any(|((n, w), d)| !(*n && *w && *d));
        prop_assert_eq!(first.is_some(), any_fail);
    }

    #[test]
    fn invariant_identities(
        tau in -2.0f64..2.0,
        coeffs in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0, -4.0f64..4.0), 2..6),
    ) {
        let alpha: Vec<f64> = coeffs.iter().map(|c| c.0).collect();
        let beta: Vec<f64> = coeffs.iter().map(|c| c.1).collect();
        let x: Vec<f64> = coeffs.iter().map(|c| c.2).collect();
        let inv = BasicInvariant::new(tau, alpha.clone(), beta.clone()).unwrap();
        let c: f64 = alpha.iter().zip(&beta).map(|(a, b)| a * a - 4.0 * tau * b).sum();
        prop_assert!((inv.recomputed_c() - c).abs() <= 1e-12 * (1.0 + c.abs()));
        let e = basic_invariant_eval(&x, &inv).unwrap();
        let ident = 4.0 * tau * e.value + inv.c;
        prop_assert!((e.grad_sq - ident).abs() <= 1e-10 * (1.0 + ident.abs()));
        prop_assert!((e.laplacian - 2.0 * coeffs.len() as f64 * tau).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(small_cases(24))]

    #[test]
    fn schwarzschild_level_sets(mass in 0.1f64..5.0, c in 0.05f64..0.95) {
        let m = catalog::get_with("schwarzschild_exterior", &[("M", mass)]).unwrap();
        let rep = level_set_data(&m, c).unwrap();
        prop_assert!((rep.r - 2.0 * mass / (1.0 - c * c)).abs() < 1e-9 * rep.r);
        // Hawking mass is the same on every level set
        prop_assert!((rep.m_hawking - mass).abs() < 1e-9 * mass, "{} vs {}", rep.m_hawking, mass);
        prop_assert!((rep.m_brown_york - 2.0 * mass / (1.0 + c)).abs() < 1e-9 * mass);
        prop_assert!(rep.chi_identity_residual.abs() < 1e-9);
    }

    #[test]
    fn lapse_equation_is_linear(
        f1 in 0.5f64..2.0, d1 in 0.0f64..1.0,
        f2 in 0.5f64..2.0, d2 in 0.0f64..1.0,
        a in 0.1f64..3.0, b in 0.1f64..3.0,
        n in 3usize..6,
    ) {
        let phi = PhiProfile::Sqrt1p.function();
        let span = Interval::new(0.0, 2.0);
        let s1 = solve_lapse(&phi, n, span, (f1, d1)).unwrap();
        let s2 = solve_lapse(&phi, n, span, (f2, d2)).unwrap();
        let s = solve_lapse(&phi, n, span, (a * f1 + b * f2, a * d1 + b * d2)).unwrap();
        let hi = s.domain.hi.min(s1.domain.hi).min(s2.domain.hi);
        for x in grid::linspace(0.0, hi, 21) {
            let want = a * s1.f.value(x).unwrap() + b * s2.f.value(x).unwrap();
            let got = s.f.value(x).unwrap();
            prop_assert!((got - want).abs() < 1e-10 * (1.0 + want.abs()), "x={}: {} vs {}", x, got, want);
        }
    }

    #[test]
    fn built_models_satisfy_hessian_equations(
        profile in prop_oneof![Just("sqrt1p"), Just("sphere"), Just("hyperbolic")],
        n in 3usize..7,
        f0 in 0.5f64..2.0,
        d0 in -0.2f64..0.5,
    ) {
        let mut spec = BuildSpec::new(PhiProfile::parse(profile).unwrap(), n);
        spec.ic = Some((f0, d0));
        spec.fast_path = false;
        if profile == "hyperbolic" {
            spec.span = Some(Interval::new(0.0, 0.9));
        }
        let model = build_model(&spec).unwrap();
        prop_assert!(model.checks.pass, "{:?}", model.checks);
        prop_assert!(model.checks.hessian_offdiag_residual < 1e-7);
        prop_assert!(model.checks.hessian_trace_residual < 1e-7);
    }

    #[test]
    fn tov_conserves_along_the_star(c in 1e-4f64..1e-2, frac in 0.01f64..0.5) {
        let rc = frac * c;
        let star = solve_star(&EquationOfState::ConstantDensity { c }, rc, &SolverOptions::default()).unwrap();
        let rb = star.r_b;
        prop_assert!((star.total_mass - 4.0 * PI * c * rb.powi(3) / 3.0).abs() < 1e-8 * (1.0 + star.total_mass));
        let [gamma, v, mu, rho] = star.radial_functions();
        let g = grid::chebyshev(0.05 * rb, 0.95 * rb, 24);
        let rep = tolman_residuals(&gamma, &v, &mu, &rho, &g, 1e-6).unwrap();
        prop_assert!(rep.pass, "{}", rep.to_json());
    }
}

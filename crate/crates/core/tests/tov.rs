use std::f64::consts::PI;

use fluidstar_core::geometry::{tolman_residuals, RadialFunction};
use fluidstar_core::numerics::grid;
use fluidstar_core::tov::*;
use fluidstar_core::Error;

fn constant(c: f64) -> EquationOfState {
    EquationOfState::ConstantDensity { c }
}

#[test]
fn volkoff_examples() {
    assert_eq!(volkoff_gamma(0.0, 0.0, 3.0).unwrap(), 1.0);
    assert!((volkoff_gamma(0.001, 0.0, 1.0).unwrap() - (1.0 - 8.0 * PI * 0.001 / 3.0)).abs() < 1e-16);
    assert!((volkoff_gamma(0.0, -2.0, 5.0).unwrap() - (1.0 - 2.0 / 5.0)).abs() < 1e-16);
    assert!(volkoff_gamma(0.0, 0.0, 0.0).is_err());
}

#[test]
fn vacuum_run_is_flat_and_has_no_surface() {
    let p = integrate_tov(&EquationOfState::vacuum(), 0.0, &SolverOptions { r_max: 50.0, ..Default::default() }).unwrap();
    assert!(p.m.iter().all(|m| *m == 0.0));
    assert!(p.rho.iter().all(|r| *r == 0.0));
    assert!(p.exp_neg_gamma.iter().all(|a| *a == 1.0));
    assert!(matches!(detect_surface(&p), Err(Error::NoSurface { .. })));
}

#[test]
fn surface_is_bracketed() {
    let p = integrate_tov(&constant(0.001), 0.0005, &SolverOptions::default()).unwrap();
    let rb = detect_surface(&p).unwrap();
    assert_eq!(rb, p.r_end());
    assert!(p.rho.last().unwrap().abs() < 1e-12);
    let n = p.len();
    assert!(p.rho[n - 2] > 0.0 && p.r[n - 2] < rb);
}

#[test]
fn chaplygin_constant_branch() {
    // ρ = c, μ = −c: the pressure never changes and μ + ρ vanishes
    let c = 0.001;
    let eos = EquationOfState::custom("chaplygin-branch", move |_| -c);
    let p = integrate_tov(&eos, c, &SolverOptions { r_max: 20.0, ..Default::default() }).unwrap();
    assert!(matches!(detect_surface(&p), Err(Error::NoSurface { .. })));
    assert!(matches!(
        integrate_lapse(&p, &eos, LapseNormalization::Reference(1.0)),
        Err(Error::DegenerateFluid { .. })
    ));
}

#[test]
fn constant_density_star() {
    let c = 0.001;
    let star = solve_star(&constant(c), 0.0005, &SolverOptions::default()).unwrap();
    let rb = star.r_b;
    assert!((star.total_mass - 4.0 * PI * c * rb.powi(3) / 3.0).abs() < 1e-8);
    let f_rb = star.lapse(rb).unwrap();
    assert!((f_rb - (1.0 - 2.0 * star.total_mass / rb).sqrt()).abs() < 1e-14);
    // exterior is Schwarzschild
    let r = 3.0 * rb;
    assert!((star.lapse(r).unwrap() - (1.0 - 2.0 * star.total_mass / r).sqrt()).abs() < 1e-15);
}

#[test]
fn constant_density_lapse_closed_form() {
    // Schwarzschild interior: e^{v/2} = (3/2)√(1−2M/r_b) − (1/2)√(1−2Mr²/r_b³)
    let star = solve_star(&constant(0.001), 0.0005, &SolverOptions::default()).unwrap();
    let (m, rb) = (star.total_mass, star.r_b);
    for &r in star.interior.r.iter().step_by(5) {
        let want = 1.5 * (1.0 - 2.0 * m / rb).sqrt() - 0.5 * (1.0 - 2.0 * m * r * r / rb.powi(3)).sqrt();
        assert!((star.lapse(r).unwrap() - want).abs() < 1e-7, "r={r}");
    }
}

#[test]
fn horizon_is_rejected() {
    // μ = c, ρ = −c is de Sitter: r − 2m vanishes at r = √(3/(8πc))
    let c = 0.01;
    let eos = EquationOfState::custom("de-sitter", |rho| -rho);
    let r = integrate_tov(&eos, -c, &SolverOptions { r_max: 10.0, ..Default::default() });
    match r {
        Err(Error::HorizonHit { r, .. }) => assert!((r - (3.0 / (8.0 * PI * c)).sqrt()).abs() < 1e-3),
        other => panic!("{other:?}"),
    }
}

fn assert_lapses_agree(p: &RadialProfile, atol: f64) {
    let shift = p.exp_v[0].ln() - p.v_direct[0];
    for k in 0..p.len() {
        // the recorded ρ carries absolute error ~atol; for a polytrope the
        // quadrature amplifies that to √ρ near the surface
        if p.rho[k] < 1e3 * atol {
            continue;
        }
        let d = p.exp_v[k].ln() - p.v_direct[k] - shift;
        assert!(d.abs() < 1e-7, "k={k} r={} diff={d:e}", p.r[k]);
    }
}

#[test]
fn lapse_constructions_agree() {
    let opts = SolverOptions::default();
    let star = solve_star(&constant(0.001), 0.0005, &opts).unwrap();
    let p = &star.interior;
    let shift = p.exp_v[0].ln() - p.v_direct[0];
    for k in 0..p.len() {
        assert!((p.exp_v[k].ln() - p.v_direct[k] - shift).abs() < 1e-7, "k={k}");
    }
    let eos = EquationOfState::parse("polytrope:K=100,gamma=2").unwrap();
    assert_lapses_agree(&solve_star(&eos, 1.6e-4, &opts).unwrap().interior, opts.atol);
}

#[test]
fn monotone_mass_and_pressure() {
    for (eos, rc) in [(constant(0.002), 0.001), (EquationOfState::parse("polytrope:K=100,gamma=2").unwrap(), 1e-4)] {
        let p = integrate_tov(&eos, rc, &SolverOptions::default()).unwrap();
        assert!(p.m.windows(2).all(|w| w[1] >= w[0]));
        assert!(p.rho.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn step_size_convergence() {
    let base = SolverOptions::default();
    let fine = SolverOptions { atol: base.atol / 2.0, rtol: base.rtol / 2.0, ..base };
    // pressure linear at the surface: r_b is fixed to the relative tolerance
    for (c, rc) in [(0.001, 0.0005), (0.002, 0.01), (0.0005, 1e-5)] {
        let a = solve_star(&constant(c), rc, &base).unwrap();
        let b = solve_star(&constant(c), rc, &fine).unwrap();
        assert!((a.r_b - b.r_b).abs() < 10.0 * base.rtol * a.r_b, "{} vs {}", a.r_b, b.r_b);
    }
    // polytrope: ρ ∝ (r_b − r)² at the surface, so r_b moves like √(atol/ρ_c)
    let eos = EquationOfState::parse("polytrope:K=100,gamma=2").unwrap();
    let a = solve_star(&eos, 1.6e-4, &base).unwrap();
    let b = solve_star(&eos, 1.6e-4, &fine).unwrap();
    assert!((a.r_b - b.r_b).abs() < (base.atol / 1.6e-4).sqrt() * a.r_b);
    assert!((a.total_mass - b.total_mass).abs() < 10.0 * base.rtol * a.total_mass);
}

#[test]
fn stellar_model_round_trip_through_tolman() {
    let star = solve_star(&constant(0.001), 0.0005, &SolverOptions::default()).unwrap();
    let [gamma, v, mu, rho] = star.radial_functions();
    let rb = star.r_b;
    let inner = grid::chebyshev(0.05 * rb, 0.98 * rb, 64);
    let rep = tolman_residuals(&gamma, &v, &mu, &rho, &inner, 1e-6).unwrap();
    assert!(rep.pass, "{}", rep.to_json());
    let outer = grid::chebyshev(1.05 * rb, 10.0 * rb, 64);
    let rep = tolman_residuals(&gamma, &v, &mu, &rho, &outer, 1e-10).unwrap();
    assert!(rep.pass, "{}", rep.to_json());
}

#[test]
fn csv_round_trip() {
    let star = solve_star(&constant(0.001), 0.0005, &SolverOptions::default()).unwrap();
    let text = star.interior.to_csv_string();
    assert!(text.starts_with("r,m,mu,rho,exp_neg_gamma,exp_v,f\n"));
    let back = RadialProfile::read_csv(text.as_bytes()).unwrap();
    assert_eq!(back.r, star.interior.r);
    assert_eq!(back.f, star.interior.f);
    assert_eq!(back.to_csv_string(), text);
    assert_eq!(back.surface, Some(star.r_b));
    // slopes recovered from the stored columns are the solver's own
    for (a, b) in back.drho.iter().zip(&star.interior.drho) {
        assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-12), "{a} vs {b}");
    }
}

#[test]
fn polytrope_sweep_all_matched() {
    // runs whose last sample lands exactly on ρ = 0 included
    let eos = EquationOfState::parse("polytrope:K=100,gamma=2").unwrap();
    for k in 1..=16 {
        let rho_c = 5e-5 * k as f64;
        let star = solve_star(&eos, rho_c, &SolverOptions::default()).unwrap_or_else(|e| panic!("rho_c={rho_c}: {e}"));
        assert!(star.interior.exp_v.iter().all(|v| v.is_finite() && *v > 0.0));
        let f_b = star.lapse(star.r_b).unwrap();
        // matching is at ρ = 0; the residual pressure left at the last node
        // shifts v by the singular tail 2∫_0^ρ dρ/(μ+ρ) ≈ 4√(Kρ)
        let rho_last = *star.interior.rho.last().unwrap();
        let gap = (f_b * f_b - (1.0 - 2.0 * star.total_mass / star.r_b)).abs();
        assert!(gap <= 1e-13 + 5.0 * (100.0 * rho_last).sqrt(), "rho_c={rho_c}: {gap:e}");
    }
}

#[test]
fn tabulated_polytrope_tracks_analytic() {
    let eos = EquationOfState::parse("polytrope:K=100,gamma=2").unwrap();
    let table = eos.tabulate(0.0, 2e-4, 2001).unwrap();
    let a = solve_star(&eos, 1.6e-4, &SolverOptions::default()).unwrap();
    let b = solve_star(&table, 1.6e-4, &SolverOptions::default()).unwrap();
    assert!((a.total_mass - b.total_mass).abs() < 1e-4 * a.total_mass);
    // linear interpolation near ρ = 0 gives a thin low-density atmosphere
    assert!(b.r_b >= a.r_b);
}

#[test]
fn runs_are_deterministic() {
    let a = solve_star(&constant(0.001), 0.0005, &SolverOptions::default()).unwrap();
    let b = solve_star(&constant(0.001), 0.0005, &SolverOptions::default()).unwrap();
    assert_eq!(a.interior.to_csv_string(), b.interior.to_csv_string());
}

#[test]
fn sampled_functions_flag_their_provenance() {
    let f = RadialFunction::sampled(fluidstar_core::geometry::Interval::new(0.0, 1.0), |r| r * r);
    assert_eq!(f.provenance(), fluidstar_core::geometry::Provenance::FiniteDifference);
}

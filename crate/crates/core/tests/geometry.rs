use std::f64::consts::PI;

use fluidstar_core::catalog;
use fluidstar_core::geometry::field::traceless;
use fluidstar_core::geometry::*;
use nalgebra::{DMatrix, DVector};

fn sech2(r: f64) -> f64 {
    1.0 / r.cosh().powi(2)
}

/// Jet of `g(|x|²)` from `(g, g', g'')` at `ϱ = |x|²`.
fn radial_jet(x: &[f64], g: (f64, f64, f64)) -> FieldJet {
    let n = x.len();
    FieldJet {
        value: g.0,
        grad: DVector::from_fn(n, |i, _| 2.0 * g.1 * x[i]),
        hess: DMatrix::from_fn(n, n, |i, j| 4.0 * g.2 * x[i] * x[j] + if i == j { 2.0 * g.1 } else { 0.0 }),
    }
}

fn witten_phi(x: &[f64]) -> FieldJet {
    let s: f64 = x.iter().map(|v| v * v).sum();
    let p = (1.0 + s).sqrt();
    radial_jet(x, (p, 0.5 / p, -0.25 / (p * p * p)))
}

fn flat(x: &[f64]) -> FieldJet {
    radial_jet(x, (1.0, 0.0, 0.0))
}

#[test]
fn warped_ricci_examples() {
    assert_eq!(ricci_warped(&RadialFunction::identity(), 1.0).unwrap(), (0.0, 0.0, 0.0));

    let sin = RadialFunction::analytic(Interval::new(0.0, PI), f64::sin, f64::cos, |r| -r.sin());
    let (_, _, r) = ricci_warped(&sin, PI / 4.0).unwrap();
    assert!((r - 6.0).abs() < 1e-12);

    let tanh = RadialFunction::analytic(
        Interval::new(0.0, 50.0),
        f64::tanh,
        sech2,
        |r| -2.0 * sech2(r) * r.tanh(),
    );
    let (r11, _, _) = ricci_warped(&tanh, 1.0).unwrap();
    assert!((r11 - 4.0 * sech2(1.0)).abs() < 1e-14);
}

#[test]
fn warped_ricci_rejects_degenerate_fiber() {
    let zero = RadialFunction::analytic(Interval::new(-1.0, 1.0), |r| r, |_| 1.0, |_| 0.0);
    assert!(ricci_warped(&zero, 0.0).is_err());
}

#[test]
fn conformal_curvature_examples() {
    let (ric, r) = conformal_curvature(&flat(&[0.3, -0.2, 1.0])).unwrap();
    assert_eq!(r, 0.0);
    assert_eq!(ric.amax(), 0.0);

    let (_, r0) = conformal_curvature(&witten_phi(&[0.0, 0.0, 0.0])).unwrap();
    assert!((r0 - 12.0).abs() < 1e-12);
    let x = [0.6, 0.0, 0.8];
    let (ric, r1) = conformal_curvature(&witten_phi(&x)).unwrap();
    assert!((r1 - 7.0).abs() < 1e-12);
    // orthonormal frame: the ḡ-trace is the plain trace
    assert!((ric.trace() - r1).abs() < 1e-12 * r1);
}

#[test]
fn conformal_hessian_examples() {
    let x = [0.4, -1.3, 0.7];
    let linear = FieldJet { value: x[0], grad: DVector::from_vec(vec![1.0, 0.0, 0.0]), hess: DMatrix::zeros(3, 3) };
    assert_eq!(conformal_hessian(&flat(&x), &linear).unwrap().amax(), 0.0);
    let quad = radial_jet(&x, (0.0, 0.5, 0.0));
    let h = conformal_hessian(&flat(&x), &quad).unwrap();
    assert!((h - DMatrix::identity(3, 3)).amax() < 1e-15);
}

#[test]
fn witten_lapse_satisfies_traceless_equation() {
    // f = sin(½ ln(1+ϱ)), n = 3
    for x in [[0.0, 0.0, 0.0], [0.3, 0.2, -0.5], [1.0, 0.0, 0.0], [-2.0, 1.5, 0.5]] {
        let s: f64 = x.iter().map(|v| v * v).sum();
        let u = 0.5 * (1.0 + s).ln();
        let g = (u.sin(), 0.5 * u.cos() / (1.0 + s), -0.5 * (0.5 * u.sin() + u.cos()) / (1.0 + s).powi(2));
        let f = radial_jet(&x, g);
        let phi = witten_phi(&x);
        let (ric, _) = conformal_curvature(&phi).unwrap();
        let hess = conformal_hessian(&phi, &f).unwrap();
        let gap = traceless(&hess) - traceless(&ric) * f.value;
        assert!(gap.amax() < 1e-7, "x={x:?}: {}", gap.amax());
    }
}

#[test]
fn sectional_examples() {
    let x = [0.3, 0.1, 0.2];
    assert_eq!(sectional_conformal(&flat(&x), 0, 1).unwrap(), 0.0);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        assert!((sectional_conformal(&witten_phi(&[0.0; 3]), i, j).unwrap() - 2.0).abs() < 1e-14);
    }
    assert!((sectional_conformal(&witten_phi(&[1.0, 0.0, 0.0]), 1, 2).unwrap() - 1.5).abs() < 1e-14);
    assert!(sectional_conformal(&flat(&x), 1, 1).is_err());
    assert!(sectional_conformal(&flat(&x), 0, 3).is_err());
}

#[test]
fn mean_curvature_examples() {
    let flat = MetricAnsatz::Warped { phi: RadialFunction::identity(), n: 3 };
    assert!((mean_curvature_sphere(&flat, 2.0).unwrap() - 1.0).abs() < 1e-15);

    let ext = catalog::get_with("schwarzschild_exterior", &[("M", 1.0)]).unwrap();
    let h = mean_curvature_sphere(&ext.ansatz_at(4.0).unwrap(), 4.0).unwrap();
    assert!((h - 0.5 * 0.5f64.sqrt()).abs() < 1e-15);

    let w = catalog::get_with("witten_stellar", &[]).unwrap();
    let h = mean_curvature_sphere(&w.ansatz_at(1.0).unwrap(), 1.0).unwrap();
    assert!((h - 2.0 * sech2(1.0) / 1.0f64.tanh()).abs() < 1e-14);
}

#[test]
fn flat_vacuum_residuals_vanish() {
    let ansatz = MetricAnsatz::Warped { phi: RadialFunction::identity(), n: 3 };
    let fluid = FluidData::vacuum(RadialFunction::constant(1.0));
    let rep = spf_residuals(&ansatz, &fluid, &[0.5, 1.0, 2.0, 7.0], 0.0).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.max_residual(), 0.0);
}

#[test]
fn catalog_spf_residuals() {
    for (id, tol) in [("schwarzschild_exterior", 1e-8), ("witten_stellar", 1e-7)] {
        let m = catalog::get_with(id, &[]).unwrap();
        let grid = m.default_grid();
        let r0 = grid[grid.len() / 2];
        let p = m.piece_at(r0).unwrap();
        let rep = spf_residuals(&p.ansatz(m.native, m.dim), &p.fluid(m.lambda), &grid, tol).unwrap();
        assert!(rep.pass, "{id}: {}", rep.to_json());
        // ρ' is a finite difference; keep clear of the pressure poles at the lapse zeros
        let (lo, hi) = (m.verify_interval.lo, m.verify_interval.hi);
        let inner: Vec<f64> = grid.iter().copied().filter(|r| *r > lo + 0.1 * (hi - lo) && *r < 0.9 * hi).collect();
        let c = conservation_residuals(&p.fluid(m.lambda), &inner, 1e-6).unwrap();
        assert!(c.pass, "{id}: {}", c.to_json());
    }
}

#[test]
fn schwarzschild_exterior_grid_starts_past_horizon() {
    let m = catalog::get_with("schwarzschild_exterior", &[("M", 1.0)]).unwrap();
    let grid = m.default_grid();
    assert!(grid[0] > 2.0 && *grid.last().unwrap() <= 10.0);
}

#[test]
fn tolman_examples() {
    let dom = Interval::new(1e-3, 100.0);
    let zero = RadialFunction::constant(0.0);

    // γ ≡ 0, μ ≡ 0, ρ = 1/(2πr² + 1), e^v = ρ⁻²
    let rho = RadialFunction::analytic(
        dom,
        |r| 1.0 / (2.0 * PI * r * r + 1.0),
        |r| -4.0 * PI * r / (2.0 * PI * r * r + 1.0).powi(2),
        |r| {
            let d = 2.0 * PI * r * r + 1.0;
            -4.0 * PI / (d * d) + 32.0 * PI * PI * r * r / (d * d * d)
        },
    );
    let v = RadialFunction::analytic(
        dom,
        |r| 2.0 * (2.0 * PI * r * r + 1.0).ln(),
        |r| 8.0 * PI * r / (2.0 * PI * r * r + 1.0),
        |r| {
            let d = 2.0 * PI * r * r + 1.0;
            8.0 * PI / d - 32.0 * PI * PI * r * r / (d * d)
        },
    );
    let grid: Vec<f64> = (1..=40).map(|k| 0.25 * k as f64).collect();
    let rep = tolman_residuals(&zero, &v, &zero, &rho, &grid, 1e-9).unwrap();
    assert!(rep.pass, "{}", rep.to_json());

    // exterior: e^v = e^{−γ} = 1 − 2/r
    let ext = Interval::new(2.0, 100.0);
    let v = RadialFunction::analytic(
        ext,
        |r| (1.0 - 2.0 / r).ln(),
        |r| 2.0 / (r * (r - 2.0)),
        |r| -2.0 * (2.0 * r - 2.0) / (r * (r - 2.0)).powi(2),
    );
    let gamma = RadialFunction::analytic(
        ext,
        |r| -(1.0 - 2.0 / r).ln(),
        |r| -2.0 / (r * (r - 2.0)),
        |r| 2.0 * (2.0 * r - 2.0) / (r * (r - 2.0)).powi(2),
    );
    let grid: Vec<f64> = (0..=30).map(|k| 2.5 + 0.25 * k as f64).collect();
    let rep = tolman_residuals(&gamma, &v, &zero, &zero, &grid, 1e-10).unwrap();
    assert!(rep.pass, "{}", rep.to_json());

    // Chaplygin constant branch: μ = c, ρ = −c, e^v = e^{−γ} = 1 − 8πcr²/3
    let c = 0.01;
    let k = 8.0 * PI * c / 3.0;
    let dom = Interval::new(0.0, 0.99 / k.sqrt());
    let v = RadialFunction::analytic(
        dom,
        move |r| (1.0 - k * r * r).ln(),
        move |r| -2.0 * k * r / (1.0 - k * r * r),
        move |r| {
            let d = 1.0 - k * r * r;
            -2.0 * k / d - 4.0 * k * k * r * r / (d * d)
        },
    );
    let gamma = RadialFunction::analytic(
        dom,
        move |r| -(1.0 - k * r * r).ln(),
        move |r| 2.0 * k * r / (1.0 - k * r * r),
        move |r| {
            let d = 1.0 - k * r * r;
            2.0 * k / d + 4.0 * k * k * r * r / (d * d)
        },
    );
    let grid: Vec<f64> = (1..=30).map(|j| 0.1 * j as f64).collect();
    let rep = tolman_residuals(
        &gamma,
        &v,
        &RadialFunction::constant(c),
        &RadialFunction::constant(-c),
        &grid,
        1e-10,
    )
    .unwrap();
    assert!(rep.pass, "{}", rep.to_json());

    assert!(tolman_residuals(&zero, &zero, &zero, &zero, &[0.0], 1.0).is_err());
}

#[test]
fn finite_differences_track_analytic_derivatives() {
    for id in ["schwarzschild_exterior", "schwarzschild_interior", "wyman", "witten_stellar"] {
        let m = catalog::get_with(id, &[]).unwrap();
        let f = m.lapse_function();
        let (lo, hi) = (m.verify_interval.lo, m.verify_interval.hi);
        let inner = fluidstar_core::numerics::grid::chebyshev(lo + 0.02 * (hi - lo), hi - 0.02 * (hi - lo), 40);
        let d = f.fd_discrepancy(&inner).unwrap();
        assert!(d < 1e-6, "{id}: {d:e}");
    }
}

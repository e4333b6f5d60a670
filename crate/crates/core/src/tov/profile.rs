//! Sampled radial profiles and their CSV form.

use std::io::{BufRead, Write};

use crate::geometry::{Interval, RadialFunction};
use crate::numerics::interp::{pchip_slopes, Hermite};
use crate::tov::SolverOptions;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "r,m,mu,rho,exp_neg_gamma,exp_v,f";

/// Samples `(r, m, μ, ρ, e^{−γ}, e^{v}, f)` on an increasing radial grid.
///
/// Runs produced by the integrator also carry the exact slopes `m'`, `ρ'`,
/// `v'` at every node, which makes the interpolants Hermite cubics. Profiles
/// read from CSV recover the same slopes from the stored `(r, m, μ, ρ)`
/// columns, falling back to monotone (PCHIP) slopes when that fails.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub r: Vec<f64>,
    pub m: Vec<f64>,
    pub mu: Vec<f64>,
    pub rho: Vec<f64>,
    pub exp_neg_gamma: Vec<f64>,
    pub exp_v: Vec<f64>,
    pub f: Vec<f64>,
    pub dm: Vec<f64>,
    pub drho: Vec<f64>,
    pub dv: Vec<f64>,
    /// `v` integrated directly as an ODE alongside `(m, ρ)`, up to a constant.
    pub v_direct: Vec<f64>,
    /// Radius where the pressure reached zero, when it did.
    pub surface: Option<f64>,
}

impl RadialProfile {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn r_start(&self) -> f64 {
        self.r[0]
    }

    pub fn r_end(&self) -> f64 {
        *self.r.last().unwrap()
    }

    pub fn domain(&self) -> Interval {
        Interval::new(self.r_start(), self.r_end())
    }

    pub fn has_lapse(&self) -> bool {
        self.exp_v.iter().all(|v| v.is_finite())
    }

    fn hermite(&self, y: &[f64], dy: &[f64]) -> Result<Hermite> {
        Hermite::new(self.r.clone(), y.to_vec(), dy.to_vec())
    }

    pub fn m_interp(&self) -> Result<Hermite> {
        self.hermite(&self.m, &self.dm)
    }

    pub fn rho_interp(&self) -> Result<Hermite> {
        self.hermite(&self.rho, &self.drho)
    }

    /// `v = ln e^{v}` interpolated with its slope.
    pub fn v_interp(&self) -> Result<Hermite> {
        let v: Vec<f64> = self.exp_v.iter().map(|e| e.ln()).collect();
        self.hermite(&v, &self.dv)
    }

    pub fn mu_interp(&self) -> Result<Hermite> {
        Hermite::pchip(self.r.clone(), self.mu.clone())
    }

    /// Profiles of `γ`, `v`, `μ`, `ρ` as radial functions on the sampled
    /// range, derivatives by finite differences of the interpolants.
    pub fn radial_functions(&self) -> Result<[RadialFunction; 4]> {
        let dom = self.domain();
        let m = self.m_interp()?;
        let gamma = RadialFunction::sampled(dom, move |r| {
            -(1.0 - 2.0 * m.eval(r).unwrap_or(f64::NAN) / r).ln()
        });
        let v = self.v_interp()?;
        let vf = RadialFunction::sampled(dom, move |r| v.eval(r).unwrap_or(f64::NAN));
        let mu = self.mu_interp()?;
        let muf = RadialFunction::sampled(dom, move |r| mu.eval(r).unwrap_or(f64::NAN));
        let rho = self.rho_interp()?;
        let rhof = RadialFunction::sampled(dom, move |r| rho.eval(r).unwrap_or(f64::NAN));
        Ok([gamma, vf, muf, rhof])
    }

    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for k in 0..self.len() {
            writeln!(
                w,
                "{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
                self.r[k],
                self.m[k],
                self.mu[k],
                self.rho[k],
                self.exp_neg_gamma[k],
                self.exp_v[k],
                self.f[k]
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Reads the seven-column CSV; slopes become PCHIP estimates and `v'`
    /// is taken from the sampled `e^{v}`.
    pub fn read_csv(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))??;
        if header.trim() != CSV_HEADER {
            return Err(Error::Parse(format!("unexpected header '{}'", header.trim())));
        }
        let mut cols: [Vec<f64>; 7] = Default::default();
        for (ln, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let vals: Vec<&str> = line.split(',').collect();
            if vals.len() != 7 {
                return Err(Error::Parse(format!("line {}: expected 7 columns", ln + 2)));
            }
            for (c, v) in cols.iter_mut().zip(vals) {
                c.push(v.trim().parse().map_err(|_| Error::Parse(format!("line {}: bad number '{v}'", ln + 2)))?);
            }
        }
        let [r, m, mu, rho, eg, ev, f] = cols;
        if r.len() < 2 {
            return Err(Error::Parse("profile needs at least two rows".into()));
        }
        let v: Vec<f64> = ev.iter().map(|e| e.ln()).collect();
        let (dm, drho, dv) = match structure_slopes(&r, &m, &mu, &rho) {
            Some(s) => s,
            None => {
                let dv = if v.iter().all(|x| x.is_finite()) { pchip_slopes(&r, &v)? } else { vec![f64::NAN; r.len()] };
                (pchip_slopes(&r, &m)?, pchip_slopes(&r, &rho)?, dv)
            }
        };
        // the solver stops at ρ = 0 or at the default relative threshold
        let last = *rho.last().unwrap();
        let surface = (rho[0] != 0.0 && last.abs() <= SolverOptions::default().surface_rel * rho[0].abs()).then(|| *r.last().unwrap());
        Ok(Self {
            v_direct: v,
            r,
            m,
            mu,
            rho,
            exp_neg_gamma: eg,
            exp_v: ev,
            f,
            dm,
            drho,
            dv,
            surface,
        })
    }
}

/// `m'`, `ρ'`, `v'` from the structure equations at every node, or `None` if
/// any node is at or inside `r = 2m` or produces a non-finite slope.
fn structure_slopes(r: &[f64], m: &[f64], mu: &[f64], rho: &[f64]) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    use std::f64::consts::PI;
    let n = r.len();
    let (mut dm, mut drho, mut dv) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for i in 0..n {
        let (r, m, mu, rho) = (r[i], m[i], mu[i], rho[i]);
        if r <= 2.0 * m {
            return None;
        }
        let q = (m + 4.0 * PI * r * r * r * rho) / (r * (r - 2.0 * m));
        let s = [4.0 * PI * r * r * mu, -q * (mu + rho), 2.0 * q];
        if !s.iter().all(|x| x.is_finite()) {
            return None;
        }
        dm.push(s[0]);
        drho.push(s[1]);
        dv.push(s[2]);
    }
    Some((dm, drho, dv))
}

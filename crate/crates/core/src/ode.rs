//! Dormand–Prince 5(4) with FSAL, PI-free step control and the standard
//! fourth-order continuous extension.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub atol: f64,
    pub rtol: f64,
    pub h_init: Option<f64>,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            atol: 1e-10,
            rtol: 1e-8,
            h_init: None,
            h_min: 1e-14,
            h_max: f64::INFINITY,
            max_steps: 200_000,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step together with its continuous extension.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    pub dy0: [f64; N],
    pub dy1: [f64; N],
    rc: [[f64; N]; 5],
    // length of the step the interpolant was built for; `t1` may be pulled
    // back when an observer stops inside the step
    h: f64,
}

impl<const N: usize> DenseStep<N> {
    pub fn eval(&self, t: f64) -> [f64; N] {
        let h = self.h;
        let th = (t - self.t0) / h;
        let th1 = 1.0 - th;
        std::array::from_fn(|i| {
            let r = &self.rc;
            r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])))
        })
    }

    pub fn eval_deriv(&self, t: f64) -> [f64; N] {
        let h = self.h;
        let th = (t - self.t0) / h;
        std::array::from_fn(|i| {
            let r = &self.rc;
            // d/dθ of θ(b + (1-θ)(c + θ(d + (1-θ)e)))
            let (b, c, d, e) = (r[1][i], r[2][i], r[3][i], r[4][i]);
            let th1 = 1.0 - th;
            let inner = c + th * (d + th1 * e);
            let dinner = d + th1 * e + th * (-e);
            let outer = b + th1 * inner;
            let douter = -inner + th1 * dinner;
            (outer + th * douter) / h
        })
    }
}

pub enum Control {
    Continue,
    /// Stop at the given time inside the step just taken.
    StopAt(f64),
}

#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub dy: Vec<[f64; N]>,
    pub steps: Vec<DenseStep<N>>,
    /// Set when the step observer requested termination.
    pub stopped: bool,
    pub rejected: usize,
}

impl<const N: usize> Solution<N> {
    /// Dense evaluation anywhere in the integrated range.
    pub fn eval(&self, t: f64) -> Option<[f64; N]> {
        let k = self.steps.partition_point(|s| s.t1 < t);
        let s = self.steps.get(k)?;
        (t >= s.t0.min(s.t1) - 1e-15 * t.abs()).then(|| s.eval(t))
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

/// Integrates `y' = rhs(t, y)` from `t0` toward `t_end` (`t_end > t0`).
///
/// The observer sees each accepted step and may stop the run inside it. A
/// right-hand-side error during a trial stage shrinks the step; only when the
/// step underflows `h_min` is the error returned.
pub fn integrate<const N: usize, F, C>(
    mut rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
    mut observer: C,
) -> Result<Solution<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    C: FnMut(&DenseStep<N>) -> Control,
{
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y)?;
    let mut sol = Solution {
        t: vec![t],
        y: vec![y],
        dy: vec![k1],
        steps: Vec::new(),
        stopped: false,
        rejected: 0,
    };
    let sc = |a: &[f64; N], b: &[f64; N], i: usize| opts.atol + opts.rtol * a[i].abs().max(b[i].abs());
    let mut h = match opts.h_init {
        Some(h) => h,
        None => {
            let d0 = (0..N).map(|i| (y[i] / sc(&y, &y, i)).powi(2)).sum::<f64>().sqrt();
            let d1 = (0..N).map(|i| (k1[i] / sc(&y, &y, i)).powi(2)).sum::<f64>().sqrt();
            if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 }
        }
    }
    .min(opts.h_max)
    .min(t_end - t0);
    let mut last_rejected = false;

    for _ in 0..opts.max_steps {
        if t >= t_end {
            return Ok(sol);
        }
        // absorb slivers so that the last step lands exactly on t_end
        let last = t + h * (1.0 + 1e-8) >= t_end;
        if last {
            h = t_end - t;
        }
        if h < opts.h_min {
            return Err(Error::StepFailure { r: t, h });
        }
        let stages = (|| -> Result<_> {
            let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]))?;
            let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
            let k5 = rhs(
                t + C5 * h,
                &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = rhs(
                t + h,
                &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            )?;
            let y1 = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = rhs(t + h, &y1)?;
            Ok((k2, k3, k4, k5, k6, k7, y1))
        })();
        let (_k2, k3, k4, k5, k6, k7, y1) = match stages {
            Ok(s) => s,
            Err(e) => {
                if 0.25 * h < opts.h_min {
                    return Err(e);
                }
                h *= 0.25;
                sol.rejected += 1;
                last_rejected = true;
                continue;
            }
        };
        let err = ((0..N)
            .map(|i| {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                (e / sc(&y, &y1, i)).powi(2)
            })
            .sum::<f64>()
            / N as f64)
            .sqrt();
        if !err.is_finite() {
            h *= 0.25;
            sol.rejected += 1;
            last_rejected = true;
            continue;
        }
        let mut fac = if err == 0.0 { 10.0 } else { 0.9 * err.powf(-0.2) };
        fac = fac.clamp(0.2, 10.0);
        if err > 1.0 {
            h *= fac.min(1.0);
            sol.rejected += 1;
            last_rejected = true;
            continue;
        }
        if last_rejected {
            fac = fac.min(1.0);
        }
        last_rejected = false;

        let rc: [[f64; N]; 5] = {
            let rc2: [f64; N] = std::array::from_fn(|i| y1[i] - y[i]);
            let rc3: [f64; N] = std::array::from_fn(|i| h * k1[i] - rc2[i]);
            let rc4: [f64; N] = std::array::from_fn(|i| rc2[i] - h * k7[i] - rc3[i]);
            let rc5: [f64; N] = std::array::from_fn(|i| {
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
            });
            [y, rc2, rc3, rc4, rc5]
        };
        let t1 = if last { t_end } else { t + h };
        let step = DenseStep { t0: t, t1, y0: y, y1, dy0: k1, dy1: k7, rc, h };
        let ctl = observer(&step);
        sol.steps.push(step);
        t = t1;
        y = y1;
        k1 = k7;
        match ctl {
            Control::Continue => {
                sol.t.push(t);
                sol.y.push(y);
                sol.dy.push(k1);
            }
            Control::StopAt(ts) => {
                let s = sol.steps.last_mut().unwrap();
                let ys = s.eval(ts);
                let dys = rhs(ts, &ys).unwrap_or_else(|_| s.eval_deriv(ts));
                s.t1 = ts;
                s.y1 = ys;
                s.dy1 = dys;
                sol.t.push(ts);
                sol.y.push(ys);
                sol.dy.push(dys);
                sol.stopped = true;
                return Ok(sol);
            }
        }
        h = (h * fac).min(opts.h_max);
    }
    Err(Error::NoConvergence(format!("ode: more than {} steps", opts.max_steps)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_is_accurate() {
        let sol = integrate(
            |_, y: &[f64; 2]| Ok([y[1], -y[0]]),
            0.0,
            [0.0, 1.0],
            10.0,
            &OdeOptions { atol: 1e-12, rtol: 1e-12, ..Default::default() },
            |_| Control::Continue,
        )
        .unwrap();
        let (t, y) = (*sol.t.last().unwrap(), sol.y.last().unwrap());
        assert_eq!(t, 10.0);
        assert!((y[0] - 10f64.sin()).abs() < 1e-10);
        for k in 0..200 {
            let tt = 10.0 * k as f64 / 199.0;
            let yy = sol.eval(tt).unwrap();
            assert!((yy[0] - tt.sin()).abs() < 1e-9, "dense at {tt}");
        }
    }

    #[test]
    fn dense_derivative_matches_rhs() {
        let sol = integrate(
            |t, y: &[f64; 1]| Ok([t.cos() * y[0]]),
            0.0,
            [1.0],
            3.0,
            &OdeOptions::default(),
            |_| Control::Continue,
        )
        .unwrap();
        for s in &sol.steps {
            // exact at the nodes, O(h^4) in between
            assert!((s.eval_deriv(s.t0)[0] - s.dy0[0]).abs() < 1e-13);
            assert!((s.eval_deriv(s.t1)[0] - s.dy1[0]).abs() < 1e-13);
            let tm = 0.5 * (s.t0 + s.t1);
            let y = s.eval(tm)[0];
            let d = s.eval_deriv(tm)[0];
            assert!((d - tm.cos() * y).abs() < 1e-5, "{} {}", d, tm.cos() * y);
        }
    }

    #[test]
    fn observer_stops_at_event() {
        // y = 1 - t, stop where y crosses zero
        let sol = integrate(
            |_, _: &[f64; 1]| Ok([-1.0]),
            0.0,
            [1.0],
            5.0,
            &OdeOptions { h_max: 0.3, ..Default::default() },
            |s| {
                if s.y1[0] < 0.0 {
                    Control::StopAt(s.t0 + s.y0[0])
                } else {
                    Control::Continue
                }
            },
        )
        .unwrap();
        assert!(sol.stopped);
        assert!((sol.t.last().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rhs_failure_surfaces_after_underflow() {
        let r = integrate(
            |t, y: &[f64; 1]| {
                if t > 1.0 {
                    Err(Error::HorizonHit { r: t, m: 0.0 })
                } else {
                    Ok([y[0]])
                }
            },
            0.0,
            [1.0],
            2.0,
            &OdeOptions::default(),
            |_| Control::Continue,
        );
        assert!(matches!(r, Err(Error::HorizonHit { .. })));
    }
}

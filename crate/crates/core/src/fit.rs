// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Nonlinear least squares: exponential relaxation and damped Rabi flops.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct LmOutcome {
    pub params: Vec<f64>,
    pub residual_rms: f64,
    pub iterations: usize,
}

/// Levenberg–Marquardt with Marquardt's diagonal scaling. `eval` returns the
/// residual vector and its Jacobian at a parameter point.
pub fn levenberg_marquardt<F>(p0: &[f64], max_iter: usize, mut eval: F) -> Result<LmOutcome>
where
    F: FnMut(&[f64]) -> (DVector<f64>, DMatrix<f64>),
{
    let mut p = DVector::from_column_slice(p0);
    let (mut r, mut j) = eval(p.as_slice());
    let mut cost = r.norm_squared();
    if !cost.is_finite() {
        return Err(Error::Fit("non-finite residual at the starting point".into()));
    }
    let mut lambda = 1e-3;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let jtj = j.transpose() * &j;
        let g = j.transpose() * &r;
        if g.amax() <= 1e-300 {
            break;
        }
        let mut improved = false;
        for _ in 0..40 {
            let mut a = jtj.clone();
            for k in 0..a.nrows() {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-300);
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&(-&g))) else {
                lambda *= 10.0;
                continue;
            };
            let trial = &p + &step;
            let (rt, jt) = eval(trial.as_slice());
            let ct = rt.norm_squared();
            if ct.is_finite() && ct <= cost {
                let small = step
                    .iter()
                    .zip(p.iter())
                    .all(|(s, x)| s.abs() <= 1e-15 * x.abs().max(1e-300));
                let stalled = cost - ct <= 1e-30 * cost.max(1e-300);
                p = trial;
                r = rt;
                j = jt;
                cost = ct;
                lambda = (lambda / 10.0).max(1e-15);
                improved = !(small || stalled);
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Ok(LmOutcome {
        params: p.as_slice().to_vec(),
        residual_rms: (cost / r.len().max(1) as f64).sqrt(),
        iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpFit {
    pub n_ss: f64,
    pub n0: f64,
    pub w: f64,
    pub residual_rms: f64,
}

impl ExpFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.n_ss + (self.n0 - self.n_ss) * (-self.w * t).exp()
    }
}

/// Fit y(t) = n_ss + (n0 − n_ss)e^{−Wt}, seeded with `w_seed`.
pub fn fit_exponential_approach(times: &[f64], values: &[f64], w_seed: f64) -> Result<ExpFit> {
    if times.len() != values.len() || times.len() < 3 {
        return Err(Error::Fit("need at least three samples".into()));
    }
    let linear = |w: f64| -> (f64, f64) {
        // Least squares for (n_ss, n0) with W fixed.
        let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&t, &y) in times.iter().zip(values) {
            let e = (-w * t).exp();
            let u = 1.0 - e;
            a11 += u * u;
            a12 += u * e;
            a22 += e * e;
            b1 += u * y;
            b2 += e * y;
        }
        let det = a11 * a22 - a12 * a12;
        if det.abs() < 1e-300 {
            return (values[values.len() - 1], values[0]);
        }
        ((a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det)
    };
    let (nss0, n00) = linear(w_seed);
    let out = levenberg_marquardt(&[nss0, n00, w_seed], 500, |p| {
        let (nss, n0, w) = (p[0], p[1], p[2]);
        let m = times.len();
        let mut r = DVector::zeros(m);
        let mut j = DMatrix::zeros(m, 3);
        for (i, (&t, &y)) in times.iter().zip(values).enumerate() {
            let e = (-w * t).exp();
            r[i] = nss + (n0 - nss) * e - y;
            j[(i, 0)] = 1.0 - e;
            j[(i, 1)] = e;
            j[(i, 2)] = -t * (n0 - nss) * e;
        }
        (r, j)
    })?;
    Ok(ExpFit {
        n_ss: out.params[0],
        n0: out.params[1],
        w: out.params[2],
        residual_rms: out.residual_rms,
    })
}

/// The same model with n_ss held at zero: the constrained optimum when the
/// free fit of a cooling trace lands below the physical floor.
pub fn fit_exponential_to_zero(times: &[f64], values: &[f64], w_seed: f64) -> Result<ExpFit> {
    if times.len() != values.len() || times.len() < 2 {
        return Err(Error::Fit("need at least two samples".into()));
    }
    let n0 = values[0] * (w_seed * times[0]).exp();
    let out = levenberg_marquardt(&[n0, w_seed], 500, |p| {
        let (n0, w) = (p[0], p[1]);
        let m = times.len();
        let mut r = DVector::zeros(m);
        let mut j = DMatrix::zeros(m, 2);
        for (i, (&t, &y)) in times.iter().zip(values).enumerate() {
            let e = (-w * t).exp();
            r[i] = n0 * e - y;
            j[(i, 0)] = e;
            j[(i, 1)] = -t * n0 * e;
        }
        (r, j)
    })?;
    Ok(ExpFit {
        n_ss: 0.0,
        n0: out.params[0],
        w: out.params[1],
        residual_rms: out.residual_rms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationFit {
    /// Full oscillation amplitude A: the signal swings between 0 and A.
    pub amplitude: f64,
    pub frequency: f64,
    pub decay: f64,
    pub residual_rms: f64,
}

/// Fit y(t) = (A/2)(1 − e^{−κt} cos Ωt) to a sideband flop trace.
pub fn fit_damped_oscillation(times: &[f64], values: &[f64]) -> Result<OscillationFit> {
    let n = times.len();
    if n != values.len() || n < 4 {
        return Err(Error::Fit("need at least four samples".into()));
    }
    let span = times[n - 1] - times[0];
    if !(span > 0.0) {
        return Err(Error::Fit("trace has zero duration".into()));
    }
    let min_dt = times
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
        .max(span / 1e6);
    // Coarse scan of Ω with A from linear least squares and κ = 0.
    let scan = |omega: f64| -> (f64, f64) {
        let (mut num, mut den) = (0.0, 0.0);
        for (&t, &y) in times.iter().zip(values) {
            let b = 0.5 * (1.0 - (omega * t).cos());
            num += b * y;
            den += b * b;
        }
        let a = if den > 0.0 { num / den } else { 0.0 };
        let cost: f64 = times
            .iter()
            .zip(values)
            .map(|(&t, &y)| (a * 0.5 * (1.0 - (omega * t).cos()) - y).powi(2))
            .sum();
        (a, cost)
    };
    let lo = std::f64::consts::PI / span;
    let hi = std::f64::consts::PI / min_dt;
    let count = 2000;
    let mut best = (lo, f64::INFINITY, 0.0);
    for k in 0..count {
        let omega = lo * (hi / lo).powf(k as f64 / (count - 1) as f64);
        let (a, c) = scan(omega);
        if c < best.1 {
            best = (omega, c, a);
        }
    }
    let out = levenberg_marquardt(&[best.2, best.0, 0.1 / span], 500, |p| {
        let (a, w, k) = (p[0], p[1], p[2]);
        let mut r = DVector::zeros(n);
        let mut j = DMatrix::zeros(n, 3);
        for (i, (&t, &y)) in times.iter().zip(values).enumerate() {
            let e = (-k * t).exp();
            let (s, c) = (w * t).sin_cos();
            r[i] = 0.5 * a * (1.0 - e * c) - y;
            j[(i, 0)] = 0.5 * (1.0 - e * c);
            j[(i, 1)] = 0.5 * a * e * t * s;
            j[(i, 2)] = 0.5 * a * t * e * c;
        }
        (r, j)
    })?;
    Ok(OscillationFit {
        amplitude: out.params[0],
        frequency: out.params[1].abs(),
        decay: out.params[2],
        residual_rms: out.residual_rms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillation_recovered() {
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.5).collect();
        let values: Vec<f64> = times
            .iter()
            .map(|&t| 0.5 * 129.0 * (1.0 - (-0.01 * t).exp() * (0.21 * t).cos()))
            .collect();
        let f = fit_damped_oscillation(&times, &values).unwrap();
        assert!((f.amplitude - 129.0).abs() < 1e-6, "{f:?}");
        assert!((f.frequency - 0.21).abs() < 1e-9);
        assert!((f.decay - 0.01).abs() < 1e-9);
    }
}

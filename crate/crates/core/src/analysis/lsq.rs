//! Damped Gauss–Newton with forward-difference Jacobians.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy)]
pub struct LsqOptions {
    pub max_iter: usize,
    /// Converged when every relative parameter change is below this.
    pub rel_tol: f64,
    pub jac_step: f64,
}

impl Default for LsqOptions {
    fn default() -> Self {
        LsqOptions {
            max_iter: 200,
            rel_tol: 1e-8,
            jac_step: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LsqResult {
    pub params: Vec<f64>,
    pub residuals: Vec<f64>,
    pub jacobian: DMatrix<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl LsqResult {
    pub fn cost(&self) -> f64 {
        self.residuals.iter().map(|r| r * r).sum()
    }

    /// sqrt(diag(s² (JᵀJ)⁺)) with s² = cost/(m − p); NaN when m ≤ p.
    pub fn stderr(&self) -> Vec<f64> {
        let (m, p) = self.jacobian.shape();
        if m <= p {
            return vec![f64::NAN; p];
        }
        let s2 = self.cost() / (m - p) as f64;
        let jtj = self.jacobian.transpose() * &self.jacobian;
        let eps = 1e-14 * jtj.amax().max(f64::MIN_POSITIVE);
        match jtj.pseudo_inverse(eps) {
            Ok(inv) => (0..p).map(|k| (s2 * inv[(k, k)]).abs().sqrt()).collect(),
            Err(_) => vec![f64::NAN; p],
        }
    }
}

fn jacobian<F: Fn(&[f64]) -> Vec<f64>>(f: &F, p: &[f64], r: &[f64], step: f64) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(r.len(), p.len());
    let mut q = p.to_vec();
    for k in 0..p.len() {
        let h = step * p[k].abs().max(1e-3);
        q[k] = p[k] + h;
        let rq = f(&q);
        for (i, (a, b)) in rq.iter().zip(r).enumerate() {
            j[(i, k)] = (a - b) / h;
        }
        q[k] = p[k];
    }
    j
}

fn sumsq(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Minimizes Σ f(p)² starting from `p0`. Damping grows ×10 on a rejected step.
pub fn gauss_newton<F: Fn(&[f64]) -> Vec<f64>>(f: F, p0: &[f64], opts: &LsqOptions) -> LsqResult {
    let mut p = p0.to_vec();
    let mut r = f(&p);
    let mut cost = sumsq(&r);
    let mut lambda = 1e-3;
    let mut jac = jacobian(&f, &p, &r, opts.jac_step);
    // No descent left after a tiny accepted step means we sit at the minimum.
    let mut last_rel = f64::INFINITY;
    for it in 0..opts.max_iter {
        let jt = jac.transpose();
        let a = &jt * &jac;
        let g = &jt * DVector::from_column_slice(&r);
        let step = loop {
            let mut damped = a.clone();
            for k in 0..p.len() {
                damped[(k, k)] += lambda * a[(k, k)].max(1e-12);
            }
            let trial = damped.lu().solve(&(-&g)).map(|dp| {
                let q: Vec<f64> = p.iter().zip(dp.iter()).map(|(x, d)| x + d).collect();
                let rq = f(&q);
                (dp, q, rq)
            });
            if let Some((dp, q, rq)) = trial {
                let c = sumsq(&rq);
                if c.is_finite() && c <= cost {
                    lambda = (lambda / 10.0).max(1e-12);
                    break Some((dp, q, rq, c));
                }
            }
            lambda *= 10.0;
            if lambda > 1e12 {
                break None;
            }
        };
        let Some((dp, q, rq, c)) = step else {
            return LsqResult {
                params: p,
                residuals: r,
                jacobian: jac,
                converged: last_rel < 1e-6,
                iterations: it,
            };
        };
        last_rel = dp
            .iter()
            .zip(&p)
            .map(|(d, x)| d.abs() / (x.abs() + 1e-12))
            .fold(0.0, f64::max);
        let done = last_rel <= opts.rel_tol;
        p = q;
        r = rq;
        cost = c;
        jac = jacobian(&f, &p, &r, opts.jac_step);
        if done || cost == 0.0 {
            return LsqResult {
                params: p,
                residuals: r,
                jacobian: jac,
                converged: true,
                iterations: it + 1,
            };
        }
    }
    LsqResult {
        params: p,
        residuals: r,
        jacobian: jac,
        converged: false,
        iterations: opts.max_iter,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_fit() {
        let xs: Vec<f64> = (0..40).map(|k| 0.1 * k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * (-1.3 * x).exp() + 0.2).collect();
        let res = gauss_newton(
            |p: &[f64]| {
                xs.iter()
                    .zip(&ys)
                    .map(|(x, y)| p[0] * (-p[1] * x).exp() + p[2] - y)
                    .collect()
            },
            &[1.0, 0.5, 0.0],
            &LsqOptions::default(),
        );
        assert!(res.converged);
        for (a, b) in res.params.iter().zip([2.5, 1.3, 0.2]) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn stderr_of_a_mean() {
        let ys = [1.0, 2.0, 4.0, 5.0];
        let res = gauss_newton(
            |p: &[f64]| ys.iter().map(|y| p[0] - y).collect(),
            &[0.0],
            &LsqOptions::default(),
        );
        assert!((res.params[0] - 3.0).abs() < 1e-9);
        let sd = (10.0f64 / 3.0).sqrt();
        assert!((res.stderr()[0] - sd / 2.0).abs() < 1e-6);
    }
}

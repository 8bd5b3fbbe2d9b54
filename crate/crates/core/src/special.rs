//! Bessel function J₁ and the NFS kernel √(b/t)·J₁(2√(bt)).

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 12.0;

/// J₁(x) for real x.
pub fn bessel_j1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_j1(-x);
    }
    if x < SERIES_LIMIT {
        let q = 0.25 * x * x;
        0.5 * x * kernel_series(q)
    } else {
        j1_asymptotic(x)
    }
}

/// √(b/t)·J₁(2√(bt)) for b, t ≥ 0, with the t → 0 limit b.
pub fn j1_ratio(b: f64, t: f64) -> f64 {
    if b == 0.0 {
        return 0.0;
    }
    let bt = b * t;
    let x = 2.0 * bt.sqrt();
    if x < SERIES_LIMIT {
        b * kernel_series(bt)
    } else {
        (b / t).sqrt() * j1_asymptotic(x)
    }
}

// Σ (−q)^k / (k!(k+1)!), i.e. J₁(2√q)/√q.
fn kernel_series(q: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -q / (k * (k + 1.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) || k > 200.0 {
            return sum;
        }
    }
}

// Hankel expansion, truncated at the smallest term.
fn j1_asymptotic(x: f64) -> f64 {
    let mu = 4.0;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * x);
        if a.abs() >= last {
            break;
        }
        last = a.abs();
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - 0.75 * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

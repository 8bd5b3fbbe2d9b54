//! Fast paths against the slow reference implementations in `oracle`.

use nrs_core::oracle::{
    bessel_series_j1ratio, direct_convolution, direct_ffc, direct_fourier, two_pole_convolution, Quadrature,
};
use nrs_core::special::j1_ratio;
use nrs_core::two_stage::Inverter;
use nrs_core::*;

fn max_rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

#[test]
fn bessel_series_matches_fast_path_on_log_grid() {
    for k in 0..=60 {
        let q = (1e-4 * 10f64.powf(k as f64 * (50f64 / 1e-4).log10() / 60.0)).min(49.99);
        for b in [0.3, 2.34, 8.0] {
            let t = q / b;
            let (series, bound) = bessel_series_j1ratio(b, t, 80).unwrap();
            let fast = j1_ratio(b, t);
            assert!((series - fast).abs() <= 1e-9 * b + bound, "b={b} t={t}: {series} vs {fast}");
        }
    }
}

#[test]
fn bessel_series_limits() {
    assert_eq!(bessel_series_j1ratio(1.7, 0.0, 30).unwrap().0, 1.7);
    let a = bessel_series_j1ratio(1.0, 1.0, 20).unwrap().0;
    let b = bessel_series_j1ratio(1.0, 1.0, 30).unwrap().0;
    assert!((a - b).abs() < 1e-15);
    assert!(matches!(bessel_series_j1ratio(10.0, 5.1, 30), Err(NrsError::Regime(_))));
}

#[test]
fn direct_ffc_matches_fast_transform() {
    let grid = TimeGrid::new(0.0, 0.01, 1500).unwrap();
    let target = scenarios::single_line(2.0);
    let an = scenarios::stainless_analyzer().with_delta(40.0);
    let field = two_stage_field(&target, &an, Ordering::AnalyzerFirst, &grid).unwrap();
    let nus = uniform_grid(0.0, 80.0, 0.5);
    let gate = Gate::new(0.13, 12.0).unwrap();
    let fast = ffc_trace(&intensity(&field), &grid, &nus, &gate).unwrap();
    let slow: Vec<Complex64> = nus.iter().map(|&nu| direct_ffc(&field, nu, &gate)).collect();
    assert!(max_rel(&fast, &slow) < 1e-10);

    // ν = 0 is the plain trapezoid integral over the gate
    let i = intensity(&field);
    let w = gate.weights(&grid).unwrap();
    let integral: f64 = w.iter().map(|&(k, wt)| wt * i[k]).sum();
    assert!((direct_ffc(&field, 0.0, &gate).re - integral).abs() < 1e-12 * integral);
}

#[test]
fn convolution_of_two_exponentials() {
    let dt = 2.5e-4;
    let (z1, z2) = (Complex64::new(0.5, 3.0), Complex64::new(1.7, -2.0));
    let f: Vec<Complex64> = (0..4000).map(|k| (-z1 * (k as f64 * dt)).exp()).collect();
    let g: Vec<Complex64> = (0..4000).map(|k| (-z2 * (k as f64 * dt)).exp()).collect();
    let conv = direct_convolution(&f, &g, dt, Quadrature::Trapezoid);
    let exact: Vec<Complex64> = (0..4000).map(|k| two_pole_convolution(z1, z2, k as f64 * dt)).collect();
    assert!(max_rel(&conv, &exact) < 1e-6);
    let swapped = direct_convolution(&g, &f, dt, Quadrature::Trapezoid);
    assert!(max_rel(&conv, &swapped) < 1e-12);
}

#[test]
fn radiative_coupling_matches_closed_form_and_quadrature() {
    // thin analyzer and thin target: both responses are single exponentials
    let grid = TimeGrid::new(0.0, 0.0025, 2000).unwrap();
    let (b_a, b_t) = (0.02, 0.03);
    let (w_a, w_t) = (3.0, -2.0);
    let an = AnalyzerSpec::new(b_a, AnalyzerMode::EarlyTime).with_delta(w_a);
    let target = TargetModel::SingleLineThick {
        line: ResonanceLine::new(w_t, b_t, 1.0, 0),
    };
    let inv = Inverter::new(&grid);
    let s_a: Vec<Complex64> = inv.omegas().iter().map(|&w| an.frequency_response(w)).collect();
    let s_t: Vec<Complex64> = inv.omegas().iter().map(|&w| target.resonant_frequency(0, w)).collect();
    let tail = TailHint {
        c0: Complex64::new(b_a * b_t, 0.0),
        p_a: Complex64::new(w_a, -an.effective_width()),
        p_t: Complex64::new(w_t, -0.5),
    };
    let fast = radiative_coupling(&s_a, &s_t, &grid, Some(tail)).unwrap();

    let a_time: Vec<Complex64> = grid.times().map(|t| analyzer_time_response(&an, t)).collect();
    let t_time = target.resonant_time(0, &grid).unwrap();
    let fine = direct_convolution(&a_time, &t_time, grid.dt, Quadrature::Trapezoid);
    let even = |v: &[Complex64]| v.iter().step_by(2).copied().collect::<Vec<_>>();
    let coarse = direct_convolution(&even(&a_time), &even(&t_time), 2.0 * grid.dt, Quadrature::Trapezoid);
    // Richardson step removes the O(dt²) trapezoid error
    let quad: Vec<Complex64> = even(&fine).iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect();
    let err = max_rel(&even(&fast), &quad);
    assert!(err < 1e-5, "quadrature {err}");

    // early-time analyzer ∗ thin Lorentzian line, both exactly exponential
    let z_a = Complex64::new(an.effective_width(), w_a);
    let bt = nfs_time_response(&ResonanceLine::new(w_t, b_t, 1.0, 0), 0.0);
    let exact: Vec<Complex64> = grid
        .times()
        .map(|t| -b_a * bt * two_pole_convolution(z_a, Complex64::new(0.5, w_t), t))
        .collect();
    // the target is only approximately exponential at b_t = 0.03
    assert!(max_rel(&fast, &exact) < 2e-2);

    let zero = vec![Complex64::new(0.0, 0.0); s_a.len()];
    assert!(radiative_coupling(&zero, &s_t, &grid, None).unwrap().iter().all(|v| v.norm() == 0.0));
    assert!(radiative_coupling(&s_a[1..], &s_t, &grid, None).is_err());
}

#[test]
fn time_response_is_the_inverse_of_the_frequency_response() {
    let dt = 0.005;
    let grid = TimeGrid::new(0.0, dt, 8000).unwrap();
    let line = ResonanceLine::new(4.0, 3.0, 1.0, 0);
    let s: Vec<Complex64> = grid.times().map(|t| nfs_time_response(&line, t)).collect();
    for w in [-12.0, -1.0, 0.0, 4.0, 9.5, 30.0] {
        let exact = nfs_frequency_response(&[line], w);
        let num = direct_fourier(&s, grid.t0, dt, w);
        assert!((num - exact).norm() < 1e-6 * exact.norm().max(1e-3), "ω={w}");
    }
}

#[test]
fn multiline_samples_invert_their_spectrum() {
    let grid = TimeGrid::new(0.0, 0.005, 8000).unwrap();
    let lines = [
        ResonanceLine::new(-6.0, 1.2, 1.0, 0),
        ResonanceLine::new(2.0, 0.7, 1.0, 0),
        ResonanceLine::new(9.0, 2.0, 1.0, 0),
    ];
    let s = multiline_time_response(&lines, 0, &grid).unwrap();
    for w in [-15.0, -6.0, 0.0, 2.0, 5.5, 9.0, 25.0] {
        let exact = nfs_frequency_response(&lines, w);
        let num = direct_fourier(&s, grid.t0, grid.dt, w);
        assert!((num - exact).norm() < 1e-5 * exact.norm().max(1e-2), "ω={w}: {num} vs {exact}");
    }
}

#[test]
fn cavity_time_and_frequency_forms_agree() {
    let grid = TimeGrid::new(0.0, 0.002, 10000).unwrap();
    let cav = scenarios::cavity_at(-2.0, 10.0);
    let r: Vec<Complex64> = grid.times().map(|t| cavity_time_response(&cav, t).1).collect();
    for w in [-30.0, -4.0, 0.0, 3.0, 20.0] {
        let exact = cavity_frequency_response(&cav, w) - cav.alpha_t();
        let num = direct_fourier(&r, grid.t0, grid.dt, w);
        assert!((num - exact).norm() < 1e-6 * exact.norm(), "ω={w}");
    }
}

#[test]
fn closed_form_ffc_at_line_centre() {
    let (b_t, b_a, g_a) = (1.3, 2.34, 1.0);
    let s = 0.5 * (1.0 + g_a + b_a);
    // 1 − exp(−i b/(iS)) = 1 − exp(−b/S), purely real
    let v = oracle::analytic_single_line_ffc(b_t, 1.0, b_a, g_a, 50.0, 50.0);
    assert!((v - Complex64::new(b_a * (1.0 - (-b_t / s).exp()), 0.0)).norm() < 1e-14);
}

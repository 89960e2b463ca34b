use tunnelkit::saddle::solve_saddle;
use tunnelkit::spectral::{fit_log_slope, persistence_quadrature};

fn window_slope(d: f64, a: f64, b: f64, step: f64) -> f64 {
    let ts: Vec<f64> = (0..=10).map(|i| a + (b - a) * i as f64 / 10.0).collect();
    let rho: Vec<f64> = ts.iter().map(|&t| persistence_quadrature(d, t, 100.0, step).unwrap()).collect();
    fit_log_slope(&ts, &rho).unwrap()
}

#[test]
fn slope_approaches_saddle_rate_at_late_times() {
    let want = 2.0 * solve_saddle(1.0).unwrap().r;
    // the phase step T·h must stay well below one radian
    let windows = [(2.0, 6.0, 0.1), (6.0, 12.0, 0.05), (10.0, 20.0, 0.03), (20.0, 30.0, 0.02)];
    let dev: Vec<f64> = windows.iter().map(|&(a, b, h)| (window_slope(1.0, a, b, h) / want - 1.0).abs()).collect();
    assert!(dev.windows(2).all(|w| w[1] < w[0]), "{dev:?}");
    assert!(dev[3] < 0.2, "{dev:?}");
}

#[test]
fn weak_decoherence_slope_before_truncation_floor() {
    let want = 2.0 * solve_saddle(0.1).unwrap().r;
    let slope = window_slope(0.1, 10.0, 20.0, 0.03);
    assert!((slope / want - 1.0).abs() < 0.1, "{slope} vs {want}");
}

#[test]
fn decoherence_slows_the_decay() {
    let closed = persistence_quadrature(0.0, 4.0, 100.0, 0.1).unwrap();
    let weak = persistence_quadrature(0.1, 4.0, 100.0, 0.1).unwrap();
    let strong = persistence_quadrature(1.0, 4.0, 100.0, 0.1).unwrap();
    assert!(closed < weak && weak < strong);
}

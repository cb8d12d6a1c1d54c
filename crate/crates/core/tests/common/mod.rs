//! Shared numerical oracles for the integration tests: Gauss-Legendre
//! quadrature of the raw overlap integrals, independent of the closed forms
//! under test.

#![allow(dead_code)]

use num_complex::Complex64;
use nphoton::TemporalMode;

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Evaluate P_n and P_n' by the recurrence.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Nodes and weights mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (nodes, weights) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        nodes.iter().map(|&x| mid + half * x).collect(),
        weights.iter().map(|&w| half * w).collect(),
    )
}

/// Spectral amplitude of a mode: real Gaussian centered on the carrier
/// offset.
pub fn spectral(mode: &TemporalMode, omega: f64) -> f64 {
    let s2 = mode.sigma() * mode.sigma();
    let d = omega - mode.carrier_offset();
    (2.0 * std::f64::consts::PI * s2).powf(-0.25) * (-d * d / (4.0 * s2)).exp()
}

/// Temporal packet `g(t)` of a mode, the Fourier transform of its spectral
/// amplitude shifted to the mode delay.
pub fn packet(mode: &TemporalMode, t: f64) -> Complex64 {
    let s2 = mode.sigma() * mode.sigma();
    let d = t - mode.delay();
    let norm = (2.0 * s2 / std::f64::consts::PI).powf(0.25);
    let phase = Complex64::new(-s2 * d * d, -mode.carrier_offset() * d);
    norm * phase.exp()
}

/// Quadrature of the overlap `\int phi_a(w) phi_b(w) e^{i w (T_b - T_a)} dw`
/// in the spectral domain.
pub fn overlap_quadrature(a: &TemporalMode, b: &TemporalMode, n: usize) -> Complex64 {
    let reach = 9.0 * a.sigma().max(b.sigma());
    let lo = a.carrier_offset().min(b.carrier_offset()) - reach;
    let hi = a.carrier_offset().max(b.carrier_offset()) + reach;
    let (nodes, weights) = gauss_legendre_on(n, lo, hi);
    let dt = b.delay() - a.delay();
    nodes
        .iter()
        .zip(&weights)
        .map(|(&w, &wt)| {
            wt * spectral(a, w) * spectral(b, w) * Complex64::new(0.0, w * dt).exp()
        })
        .sum()
}

fn time_window(modes: &[&TemporalMode]) -> (f64, f64) {
    let lo = modes
        .iter()
        .map(|m| m.delay() - 7.0 / m.sigma())
        .fold(f64::INFINITY, f64::min);
    let hi = modes
        .iter()
        .map(|m| m.delay() + 7.0 / m.sigma())
        .fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// 2-D time-domain quadrature of the HOM visibility
/// `\int dt1 dt2 g_s(t1) g_i(t2) g_s^*(t2) g_i^*(t1)` with the idler delayed.
pub fn hom_quadrature(signal: &TemporalMode, idler: &TemporalMode, delay: f64, n: usize) -> f64 {
    let idler = idler.delayed(delay);
    let (lo, hi) = time_window(&[signal, &idler]);
    let (nodes, weights) = gauss_legendre_on(n, lo, hi);
    let gs: Vec<Complex64> = nodes.iter().map(|&t| packet(signal, t)).collect();
    let gi: Vec<Complex64> = nodes.iter().map(|&t| packet(&idler, t)).collect();
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            sum += weights[i] * weights[j] * gs[i] * gi[j] * (gs[j] * gi[i]).conj();
        }
    }
    sum.re
}

/// 4-D time-domain quadrature of the exchanged-pair overlap E for two
/// factorized pairs, the second displaced by `separation`; the aligned term A
/// is normalized to 1.
pub fn pair_ratio_quadrature(
    signal: &TemporalMode,
    idler: &TemporalMode,
    separation: f64,
    n: usize,
) -> f64 {
    let s2 = signal.delayed(separation);
    let i2 = idler.delayed(separation);
    let (lo, hi) = time_window(&[signal, idler, &s2, &i2]);
    let (nodes, weights) = gauss_legendre_on(n, lo, hi);
    let gs1: Vec<Complex64> = nodes.iter().map(|&t| packet(signal, t)).collect();
    let gi1: Vec<Complex64> = nodes.iter().map(|&t| packet(idler, t)).collect();
    let gs2: Vec<Complex64> = nodes.iter().map(|&t| packet(&s2, t)).collect();
    let gi2: Vec<Complex64> = nodes.iter().map(|&t| packet(&i2, t)).collect();
    // E = int Psi1(t1,t2) Psi2(t3,t4) [Psi1(t3,t2) Psi2(t1,t4)]^* over t1..t4
    // with Psi_q(ts,ti) = s_q(ts) i_q(ti): the signals of the two pairs are
    // exchanged between the direct and conjugated amplitudes.
    let mut sum = Complex64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            let w_ab = weights[a] * weights[b];
            let f_ab = gs1[a] * gi1[b] * gi1[b].conj();
            for c in 0..n {
                let w_abc = w_ab * weights[c];
                let f_abc = f_ab * gs2[c] * (gs1[c] * gs2[a]).conj();
                for d in 0..n {
                    sum += w_abc * weights[d] * f_abc * gi2[d] * gi2[d].conj();
                }
            }
        }
    }
    sum.re
}

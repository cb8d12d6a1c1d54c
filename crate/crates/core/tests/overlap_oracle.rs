//! Closed-form overlap quantities against independent quadrature oracles.

mod common;

use nphoton::metrics::{hom_visibility, pair_ratio_ea, TwoPhotonAmplitude};
use nphoton::modes::overlap;
use nphoton::TemporalMode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn overlap_matches_spectral_quadrature_randomized() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..50 {
        let a = TemporalMode::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.5..1.5))
            .unwrap()
            .with_carrier_offset(rng.gen_range(-1.5..1.5))
            .unwrap();
        let b = TemporalMode::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.5..1.5))
            .unwrap()
            .with_carrier_offset(rng.gen_range(-1.5..1.5))
            .unwrap();
        let closed = overlap(&a, &b);
        let quad = common::overlap_quadrature(&a, &b, 160);
        let scale = quad.norm().max(1e-3);
        assert!(
            (closed - quad).norm() / scale <= 1e-10,
            "a={a:?} b={b:?}: closed={closed} quad={quad}"
        );
    }
}

#[test]
fn overlap_time_domain_packet_agrees() {
    // The packet used by the 2-D/4-D oracles reproduces the same overlap.
    let a = TemporalMode::new(0.3, 0.8).unwrap().with_carrier_offset(0.9).unwrap();
    let b = TemporalMode::new(-0.4, 1.3).unwrap().with_carrier_offset(-0.2).unwrap();
    let (nodes, weights) = common::gauss_legendre_on(200, -9.0, 9.0);
    let quad: num_complex::Complex64 = nodes
        .iter()
        .zip(&weights)
        .map(|(&t, &w)| w * common::packet(&a, t).conj() * common::packet(&b, t))
        .sum();
    assert!((quad - overlap(&a, &b)).norm() < 1e-11, "{quad} vs {}", overlap(&a, &b));
}

#[test]
fn hom_matches_2d_quadrature_at_10_delays() {
    let mode = TemporalMode::new(0.0, 1.0).unwrap();
    for i in 0..10 {
        let delay = -2.25 + 0.5 * i as f64;
        let amp = TwoPhotonAmplitude::symmetric(mode, delay);
        let closed = hom_visibility(&amp);
        let quad = common::hom_quadrature(&mode, &mode, delay, 140);
        assert!(
            (closed - quad).abs() / quad.abs().max(1e-6) <= 1e-9,
            "delay={delay}: closed={closed} quad={quad}"
        );
    }
}

#[test]
fn hom_matches_2d_quadrature_asymmetric_widths() {
    let signal = TemporalMode::new(0.0, 0.8).unwrap();
    let idler = TemporalMode::new(0.2, 1.4).unwrap();
    for delay in [-1.0, 0.0, 0.6, 1.7] {
        let amp = TwoPhotonAmplitude::new(signal, idler, delay);
        let closed = hom_visibility(&amp);
        let quad = common::hom_quadrature(&signal, &idler, delay, 140);
        assert!(
            (closed - quad).abs() / quad.abs().max(1e-6) <= 1e-9,
            "delay={delay}: closed={closed} quad={quad}"
        );
    }
}

#[test]
fn pair_ratio_matches_4d_quadrature() {
    let mode = TemporalMode::new(0.0, 1.0).unwrap();
    let amp = TwoPhotonAmplitude::symmetric(mode, 0.0);
    for separation in [0.0, 0.4, 1.1, 2.0] {
        let closed = pair_ratio_ea(&amp, separation).unwrap();
        let quad = common::pair_ratio_quadrature(&mode, &mode, separation, 72);
        assert!(
            (closed - quad).abs() / quad.abs().max(1e-6) <= 1e-8,
            "sep={separation}: closed={closed} quad={quad}"
        );
    }
}

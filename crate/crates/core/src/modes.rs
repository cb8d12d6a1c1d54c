//! Single-photon temporal wave packets and their pairwise overlap integrals.
//!
//! Every photon is a normalized Gaussian wave packet `g(t)` with spectral
//! amplitude `phi(omega)` of bandwidth `sigma`, centered at `carrier_offset`
//! and delayed by `delay`. Modes carrying distinct `family` labels are exactly
//! orthogonal regardless of their delays; this realizes "well separated in
//! time" without any finite-gap approximation. All downstream time integrals
//! reduce to the Gram matrix of these overlaps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModeError {
    #[error("sigma must be positive and finite, got {0}")]
    InvalidSigma(f64),
    #[error("delay/carrier must be finite")]
    NonFiniteParameter,
    #[error("mode list is empty")]
    EmptyModeList,
    #[error("group sizes must be >= 1")]
    EmptyGroup,
    #[error("gap must be positive, got {0}")]
    InvalidGap(f64),
}

/// Polarization label used by the grouped metrics and the NOON projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

/// One photon's temporal wave packet.
///
/// `sigma` is the standard deviation of `|phi(omega)|^2` (the bandwidth), so
/// the packet's intensity envelope has temporal width `1/sigma`. Self-overlap
/// is exactly 1 by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalMode {
    delay: f64,
    sigma: f64,
    family: u32,
    carrier_offset: f64,
}

impl TemporalMode {
    pub fn new(delay: f64, sigma: f64) -> Result<Self, ModeError> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(ModeError::InvalidSigma(sigma));
        }
        if !delay.is_finite() {
            return Err(ModeError::NonFiniteParameter);
        }
        Ok(Self { delay, sigma, family: 0, carrier_offset: 0.0 })
    }

    pub fn with_family(mut self, family: u32) -> Self {
        self.family = family;
        self
    }

    pub fn with_carrier_offset(mut self, carrier_offset: f64) -> Result<Self, ModeError> {
        if !carrier_offset.is_finite() {
            return Err(ModeError::NonFiniteParameter);
        }
        self.carrier_offset = carrier_offset;
        Ok(self)
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn family(&self) -> u32 {
        self.family
    }

    pub fn carrier_offset(&self) -> f64 {
        self.carrier_offset
    }

    /// Same packet shifted later in time by `dt`.
    pub fn delayed(&self, dt: f64) -> Self {
        Self { delay: self.delay + dt, ..*self }
    }

    /// Same packet moved to a different orthogonality family.
    pub fn in_family(&self, family: u32) -> Self {
        Self { family, ..*self }
    }
}

/// Closed-form overlap `\int dt g_a^*(t) g_b(t)` of two Gaussian packets.
///
/// Modes in distinct families are exactly orthogonal (returns 0). The residual
/// carrier phase `exp(i mu dT)` is retained, so the result is complex in
/// general; its magnitude is always <= 1 and equals 1 for identical modes.
pub fn overlap(a: &TemporalMode, b: &TemporalMode) -> Complex64 {
    if a.family != b.family {
        return Complex64::new(0.0, 0.0);
    }
    // Product of two Gaussian spectral amplitudes integrates to
    // pre * sqrt(pi/A) * exp(B^2/(4A) + C) with a complex linear coefficient B
    // carrying the relative delay.
    let (sa2, sb2) = (a.sigma * a.sigma, b.sigma * b.sigma);
    let (mu_a, mu_b) = (a.carrier_offset, b.carrier_offset);
    let dt = b.delay - a.delay;
    let pre = (2.0 * PI * sa2).powf(-0.25) * (2.0 * PI * sb2).powf(-0.25);
    let quad = 1.0 / (4.0 * sa2) + 1.0 / (4.0 * sb2);
    let lin = Complex64::new(mu_a / (2.0 * sa2) + mu_b / (2.0 * sb2), dt);
    let cst = -mu_a * mu_a / (4.0 * sa2) - mu_b * mu_b / (4.0 * sb2);
    let exponent = lin * lin / (4.0 * quad) + cst;
    pre * (PI / quad).sqrt() * exponent.exp()
}

/// Gram matrix of pairwise mode overlaps.
///
/// Hermitian with unit diagonal and positive semidefinite: it is the Gram
/// matrix of unit vectors. Its permanent is the state normalization factor.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl OverlapMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Overlap of mode `j`'s packet against mode `i`'s conjugate packet.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

/// Assembles the Gram matrix for a list of modes.
pub fn gram(modes: &[TemporalMode]) -> Result<OverlapMatrix, ModeError> {
    if modes.is_empty() {
        return Err(ModeError::EmptyModeList);
    }
    let dim = modes.len();
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        entries[i * dim + i] = Complex64::new(1.0, 0.0);
        for j in (i + 1)..dim {
            let o = overlap(&modes[i], &modes[j]);
            entries[i * dim + j] = o;
            entries[j * dim + i] = o.conj();
        }
    }
    Ok(OverlapMatrix { dim, entries })
}

/// Builds a delay configuration of well separated groups: members of each
/// group share one delay and consecutive groups are `gap` apart. With
/// `gap >= 15/sigma` every cross-group overlap is below 1e-40.
pub fn well_separated_config(
    groups: &[usize],
    gap: f64,
    sigma: f64,
) -> Result<Vec<TemporalMode>, ModeError> {
    if !(gap > 0.0) {
        return Err(ModeError::InvalidGap(gap));
    }
    let mut modes = Vec::new();
    for (g, &size) in groups.iter().enumerate() {
        if size == 0 {
            return Err(ModeError::EmptyGroup);
        }
        let delay = g as f64 * gap;
        for _ in 0..size {
            modes.push(TemporalMode::new(delay, sigma)?);
        }
    }
    if modes.is_empty() {
        return Err(ModeError::EmptyModeList);
    }
    Ok(modes)
}

/// JSON descriptor for a list of photons sharing one bandwidth.
///
/// The `polarization` field is optional; it is required by the NOON projection
/// simulator and ignored by the single-polarization metrics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeListSpec {
    pub sigma: f64,
    pub photons: Vec<PhotonSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhotonSpec {
    pub delay: f64,
    #[serde(default)]
    pub family: u32,
    #[serde(default)]
    pub carrier_offset: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<Polarization>,
}

impl ModeListSpec {
    pub fn modes(&self) -> Result<Vec<TemporalMode>, ModeError> {
        self.photons
            .iter()
            .map(|p| {
                Ok(TemporalMode::new(p.delay, self.sigma)?
                    .with_family(p.family)
                    .with_carrier_offset(p.carrier_offset)?)
            })
            .collect()
    }
}

//! Non-projective measures of temporal distinguishability: two-photon HOM
//! visibility, the four-photon pair ratio E/A, state normalization, direct
//! N-photon coincidence (generalized bunching), and the parametric
//! down-conversion worked examples.
//!
//! All probabilities are reported un-normalized in natural units; only ratios
//! and visibilities are certified, so the global prefactor convention is fixed
//! by the identities tested alongside each operation.

use thiserror::Error;

use crate::combinatorics::{permanent_ryser, CombinatoricsError, SquareComplexMatrix};
use crate::modes::{gram, overlap, ModeError, Polarization, TemporalMode};

/// At most this many photons per polarization group.
pub const MAX_PHOTONS_PER_GROUP: usize = 10;

/// Perturbative-regime bound on the down-conversion gain.
pub const MAX_ETA: f64 = 0.3;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("too many photons: {count} in one polarization group (limit {MAX_PHOTONS_PER_GROUP})")]
    SizeGuard { count: usize },
    #[error("state must contain at least one photon")]
    EmptyState,
    #[error("pair separation must be >= 0 and finite")]
    InvalidSeparation,
    #[error("|eta| = {0} outside perturbative regime (|eta| < {MAX_ETA})")]
    EtaOutOfRange(f64),
    #[error("state has {actual} photons, expected {expected}")]
    PhotonCountMismatch { expected: usize, actual: usize },
    #[error(transparent)]
    Mode(#[from] ModeError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
}

/// Factorized two-photon amplitude: a signal packet, an idler packet, and a
/// relative delay applied to the idler before the measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonAmplitude {
    pub signal: TemporalMode,
    pub idler: TemporalMode,
    pub relative_delay: f64,
}

impl TwoPhotonAmplitude {
    pub fn new(signal: TemporalMode, idler: TemporalMode, relative_delay: f64) -> Self {
        Self { signal, idler, relative_delay }
    }

    /// Identical signal and idler packets with a relative delay: the standard
    /// HOM configuration.
    pub fn symmetric(mode: TemporalMode, relative_delay: f64) -> Self {
        Self { signal: mode, idler: mode, relative_delay }
    }

    fn delayed_idler(&self) -> TemporalMode {
        self.idler.delayed(self.relative_delay)
    }
}

/// Product of single-photon wave packets with polarization labels.
///
/// The labels are ignored by the single-mode normalization and only group the
/// photons for the multi-mode variants.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    photons: Vec<(Polarization, TemporalMode)>,
}

impl ProductState {
    pub fn new(photons: Vec<(Polarization, TemporalMode)>) -> Result<Self, MetricsError> {
        if photons.is_empty() {
            return Err(MetricsError::EmptyState);
        }
        let state = Self { photons };
        for (_, group) in state.groups() {
            if group.len() > MAX_PHOTONS_PER_GROUP {
                return Err(MetricsError::SizeGuard { count: group.len() });
            }
        }
        Ok(state)
    }

    /// All photons in one polarization.
    pub fn single_polarization(modes: Vec<TemporalMode>) -> Result<Self, MetricsError> {
        Self::new(modes.into_iter().map(|m| (Polarization::H, m)).collect())
    }

    pub fn len(&self) -> usize {
        self.photons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.photons.is_empty()
    }

    pub fn modes(&self) -> Vec<TemporalMode> {
        self.photons.iter().map(|(_, m)| *m).collect()
    }

    fn groups(&self) -> Vec<(Polarization, Vec<TemporalMode>)> {
        let mut out: Vec<(Polarization, Vec<TemporalMode>)> = Vec::new();
        for &(p, m) in &self.photons {
            match out.iter_mut().find(|(q, _)| *q == p) {
                Some((_, v)) => v.push(m),
                None => out.push((p, vec![m])),
            }
        }
        out
    }

    fn group_sizes(&self) -> Vec<usize> {
        self.groups().into_iter().map(|(_, v)| v.len()).collect()
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn real_permanent_of_gram(modes: &[TemporalMode]) -> Result<f64, MetricsError> {
    let g = gram(modes)?;
    let p = permanent_ryser(&SquareComplexMatrix::from(&g))?;
    Ok(p.re)
}

/// Two-photon HOM visibility `|V_2(T)|` of a factorized amplitude with the
/// idler delayed by `relative_delay`.
///
/// Equals 1 iff the delayed two-photon function is exchange symmetric, and
/// decays to 0 as the delay grows and the packets stop overlapping. For the
/// factorized amplitude the numerator of the permutation-symmetry ratio
/// collapses to the squared magnitude of a single packet overlap.
pub fn hom_visibility(amp: &TwoPhotonAmplitude) -> f64 {
    let c = overlap(&amp.signal, &amp.delayed_idler());
    c.norm_sqr()
}

/// Pair ratio E/A for two copies of `amp` separated in time by
/// `pair_separation`: the normalized four-photon overlap under exchange of the
/// two signal photons between the pairs.
///
/// 1 at zero separation (indistinguishable pairs, the 4x1 case), 0 at large
/// separation (the 2x2 case).
pub fn pair_ratio_ea(amp: &TwoPhotonAmplitude, pair_separation: f64) -> Result<f64, MetricsError> {
    if !(pair_separation >= 0.0) || !pair_separation.is_finite() {
        return Err(MetricsError::InvalidSeparation);
    }
    // Exchanging the signal photons leaves all idler integrals at unity; the
    // ratio reduces to |\int |phi_s|^2 e^{i omega D} d omega|^2.
    let s = overlap(&amp.signal, &amp.signal.delayed(pair_separation));
    Ok(s.norm_sqr())
}

/// State normalization factor: the permanent of the Gram matrix of all the
/// state's modes, polarization labels ignored. Ranges from 1 (all photons well
/// separated) to N! (all photons in one temporal mode).
pub fn normalization(state: &ProductState) -> Result<f64, MetricsError> {
    let modes = state.modes();
    if modes.len() > MAX_PHOTONS_PER_GROUP {
        return Err(MetricsError::SizeGuard { count: modes.len() });
    }
    real_permanent_of_gram(&modes)
}

/// Multi-mode normalization: the product of per-polarization Gram permanents.
pub fn normalization_grouped(state: &ProductState) -> Result<f64, MetricsError> {
    let mut product = 1.0;
    for (_, modes) in state.groups() {
        product *= real_permanent_of_gram(&modes)?;
    }
    Ok(product)
}

/// Un-normalized N-photon coincidence: `n_1! ... n_k! * N_k` over the
/// polarization groups (which reduces to `N! * N` for a single polarization).
/// Dividing by the normalization always yields `n_1! ... n_k!`, independent of
/// the delay configuration.
pub fn coincidence_total(state: &ProductState) -> Result<f64, MetricsError> {
    let prefactor: f64 = state.group_sizes().into_iter().map(factorial).product();
    Ok(prefactor * normalization_grouped(state)?)
}

/// Un-normalized single-photon detection rate `N * N` for an N-photon state.
pub fn single_rate(state: &ProductState) -> Result<f64, MetricsError> {
    Ok(state.len() as f64 * normalization(state)?)
}

/// Probability that all `n` photons of the state exit one port of the
/// generation beam-splitter array: `N / n^n`.
pub fn projection_probability(n: usize, state: &ProductState) -> Result<f64, MetricsError> {
    if state.len() != n {
        return Err(MetricsError::PhotonCountMismatch { expected: n, actual: state.len() });
    }
    Ok(normalization(state)? / (n as f64).powi(n as i32))
}

/// Two- and four-photon rates from parametric down-conversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdcRates {
    pub p2: f64,
    pub p4: f64,
    /// P4 / P2^2, the pair bunching factor.
    pub bunching_factor: f64,
}

/// Rates for the degenerate (single polarization) or non-degenerate (H/V)
/// down-conversion examples, for two pairs separated by `pair_separation`.
///
/// Degenerate: `P2 = 2|eta|^2 (1 + M2)` and `P4 = 48|eta|^4 (A + 2E)`;
/// non-degenerate: `P2 = |eta|^2` and `P4 = 2|eta|^4 (A + E)`, with A
/// normalized to 1. The eta power in P4 is fixed to `|eta|^4` so that the
/// `P4 = 3 P2^2 (1 + 2 E/A)` and `P4 = 2 P2^2 (1 + E/A)` identities hold.
pub fn pdc_rates(
    amp: &TwoPhotonAmplitude,
    eta: f64,
    degenerate: bool,
    pair_separation: f64,
) -> Result<PdcRates, MetricsError> {
    if !(eta.abs() < MAX_ETA) {
        return Err(MetricsError::EtaOutOfRange(eta.abs()));
    }
    let eta2 = eta * eta;
    let ea = pair_ratio_ea(amp, pair_separation)?;
    let (p2, p4) = if degenerate {
        let m2 = hom_visibility(amp);
        (2.0 * eta2 * (1.0 + m2), 48.0 * eta2 * eta2 * (1.0 + 2.0 * ea))
    } else {
        (eta2, 2.0 * eta2 * eta2 * (1.0 + ea))
    };
    Ok(PdcRates { p2, p4, bunching_factor: p4 / (p2 * p2) })
}

//! Exact brute-force simulator of the NOON-state projection measurement.
//!
//! The input is a `|k_H, N_V>` temporal configuration. The measurement puts
//! one detector behind each of `M = k + N` output ports with detector phases
//! `delta_j = 2 pi j / M` between the H and V components; the M-fold
//! coincidence projects onto the NOON state. The coincidence probability is
//! evaluated exactly: an outer sum over pairs of detector subsets receiving
//! the H photons and an inner sum over pairs of constrained photon-to-detector
//! bijections, every term a product of packet overlaps read off the Gram
//! matrix. Only ratios of these values are meaningful; the overall detector
//! splitting constant is dropped.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;
use thiserror::Error;

use crate::combinatorics::{constrained_bijections, CombinatoricsError};
use crate::modes::{gram, ModeError, ModeListSpec, Polarization, TemporalMode};

/// Brute-force guard on the total photon number.
pub const MAX_TOTAL_PHOTONS: usize = 8;
/// Guard for the independent slow path.
pub const ORACLE_MAX_PHOTONS: usize = 6;

/// Relative drop below baseline required to report a dip.
const DIP_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum NoonError {
    #[error("total photon number {m} exceeds brute-force limit {limit}")]
    SizeGuard { m: usize, limit: usize },
    #[error("need at least two photons for a detector bank")]
    TooFewPhotons,
    #[error("configuration must contain at least one V photon")]
    NoVPhotons,
    #[error("baseline coincidence is zero: degenerate detector bank")]
    ZeroBaseline,
    #[error("scan grid is empty")]
    EmptyGrid,
    #[error("no H group with index {0}")]
    BadScanTarget(usize),
    #[error("configs differ in more than the H displacements")]
    ConfigMismatch,
    #[error("photon {0} carries no polarization label")]
    MissingPolarization(usize),
    #[error(transparent)]
    Mode(#[from] ModeError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
}

/// The full `(k H-photon, N V-photon)` temporal arrangement fed to the
/// simulator.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonConfig {
    h_modes: Vec<TemporalMode>,
    v_modes: Vec<TemporalMode>,
}

impl PhotonConfig {
    pub fn new(
        h_modes: Vec<TemporalMode>,
        v_modes: Vec<TemporalMode>,
    ) -> Result<Self, NoonError> {
        if v_modes.is_empty() {
            return Err(NoonError::NoVPhotons);
        }
        let m = h_modes.len() + v_modes.len();
        if m > MAX_TOTAL_PHOTONS {
            return Err(NoonError::SizeGuard { m, limit: MAX_TOTAL_PHOTONS });
        }
        if m < 2 {
            return Err(NoonError::TooFewPhotons);
        }
        Ok(Self { h_modes, v_modes })
    }

    pub fn from_spec(spec: &ModeListSpec) -> Result<Self, NoonError> {
        let modes = spec.modes()?;
        let mut h = Vec::new();
        let mut v = Vec::new();
        for (i, (photon, mode)) in spec.photons.iter().zip(modes).enumerate() {
            match photon.polarization {
                Some(Polarization::H) => h.push(mode),
                Some(Polarization::V) => v.push(mode),
                None => return Err(NoonError::MissingPolarization(i)),
            }
        }
        Self::new(h, v)
    }

    pub fn h_modes(&self) -> &[TemporalMode] {
        &self.h_modes
    }

    pub fn v_modes(&self) -> &[TemporalMode] {
        &self.v_modes
    }

    pub fn k(&self) -> usize {
        self.h_modes.len()
    }

    pub fn n(&self) -> usize {
        self.v_modes.len()
    }

    pub fn total(&self) -> usize {
        self.k() + self.n()
    }

    /// Indices of the H photons grouped by identical `(family, delay)`:
    /// photons in one group are temporally indistinguishable.
    pub fn h_groups(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<(u32, f64, Vec<usize>)> = Vec::new();
        for (i, m) in self.h_modes.iter().enumerate() {
            match groups
                .iter_mut()
                .find(|(f, d, _)| *f == m.family() && *d == m.delay())
            {
                Some((_, _, v)) => v.push(i),
                None => groups.push((m.family(), m.delay(), vec![i])),
            }
        }
        groups.into_iter().map(|(_, _, v)| v).collect()
    }

    /// Smallest bandwidth among all photons; sets the time scale `1/sigma`.
    pub fn min_sigma(&self) -> f64 {
        self.h_modes
            .iter()
            .chain(&self.v_modes)
            .map(|m| m.sigma())
            .fold(f64::INFINITY, f64::min)
    }

    fn first_free_family(&self) -> u32 {
        self.h_modes
            .iter()
            .chain(&self.v_modes)
            .map(|m| m.family())
            .max()
            .map_or(0, |f| f + 1)
    }

    /// Copy with the selected H photons displaced by `offset`.
    pub fn displaced(&self, target: ScanTarget, offset: f64) -> Result<Self, NoonError> {
        let indices = self.target_indices(target)?;
        let mut h = self.h_modes.clone();
        for i in indices {
            h[i] = h[i].delayed(offset);
        }
        Ok(Self { h_modes: h, v_modes: self.v_modes.clone() })
    }

    /// Baseline configuration with every H group moved to a fresh
    /// orthogonality family: exactly equivalent to displacing the H photons
    /// infinitely far from all V photons while keeping each group intact.
    pub fn baseline_family_exact(&self) -> Self {
        let base = self.first_free_family();
        let mut h = self.h_modes.clone();
        for (g, group) in self.h_groups().iter().enumerate() {
            for &i in group {
                h[i] = h[i].in_family(base + g as u32);
            }
        }
        Self { h_modes: h, v_modes: self.v_modes.clone() }
    }

    /// Baseline configuration with all H photons displaced past every other
    /// photon by at least `gap`.
    pub fn baseline_displaced(&self, gap: f64) -> Self {
        let max_delay = self
            .h_modes
            .iter()
            .chain(&self.v_modes)
            .map(|m| m.delay())
            .fold(f64::NEG_INFINITY, f64::max);
        let min_h = self.h_modes.iter().map(|m| m.delay()).fold(f64::INFINITY, f64::min);
        let offset = max_delay - min_h + gap;
        let h = self.h_modes.iter().map(|m| m.delayed(offset)).collect();
        Self { h_modes: h, v_modes: self.v_modes.clone() }
    }

    fn target_indices(&self, target: ScanTarget) -> Result<Vec<usize>, NoonError> {
        match target {
            ScanTarget::AllH => Ok((0..self.h_modes.len()).collect()),
            ScanTarget::HGroup(g) => {
                let groups = self.h_groups();
                groups.get(g).cloned().ok_or(NoonError::BadScanTarget(g))
            }
        }
    }
}

/// Which H photons a delay scan moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanTarget {
    AllH,
    HGroup(usize),
}

/// Detector bank of the projection measurement: `m` detectors with phases
/// `delta_j = 2 pi j / m`, which sum to zero on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorBank {
    phases: Vec<f64>,
}

impl DetectorBank {
    pub fn new(m: usize) -> Result<Self, NoonError> {
        if m < 2 {
            return Err(NoonError::TooFewPhotons);
        }
        let phases = (0..m).map(|j| TAU * j as f64 / m as f64).collect();
        Ok(Self { phases })
    }

    pub fn m(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    fn phase_factors(&self) -> Vec<Complex64> {
        self.phases.iter().map(|&d| Complex64::new(0.0, d).exp()).collect()
    }
}

/// One amplitude branch: the detector subset that received the H photons and
/// the photon sitting at each detector.
struct Branch {
    phase: Complex64,
    /// `photon_at[j]` = global photon index detected at detector `j`.
    photon_at: Vec<usize>,
}

/// Expands every way of routing the photons to the detectors: for each
/// k-subset `S` of detectors taking the H photons, every pair of constrained
/// bijections H -> S and V -> complement(S).
fn branches(config: &PhotonConfig, bank: &DetectorBank) -> Result<Vec<Branch>, NoonError> {
    let m = config.total();
    let k = config.k();
    let factors = bank.phase_factors();
    let h_ids: Vec<usize> = (0..k).collect();
    let v_ids: Vec<usize> = (k..m).collect();
    let mut out = Vec::new();
    for subset in subsets(m, k) {
        let mut in_subset = vec![false; m];
        for &j in &subset {
            in_subset[j] = true;
        }
        let complement: Vec<usize> = (0..m).filter(|&j| !in_subset[j]).collect();
        let phase = subset.iter().map(|&j| factors[j]).product::<Complex64>();
        let assignments =
            constrained_bijections(&[subset.clone(), complement], &[h_ids.clone(), v_ids.clone()])?;
        for assignment in assignments {
            let mut photon_at = vec![0usize; m];
            for (det, photon) in assignment {
                photon_at[det] = photon;
            }
            out.push(Branch { phase, photon_at });
        }
    }
    Ok(out)
}

/// All k-subsets of `0..m` in lexicographic order.
fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn recurse(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..m {
            cur.push(j);
            recurse(j + 1, m, k, cur, out);
            cur.pop();
        }
    }
    recurse(0, m, k, &mut cur, &mut out);
    out
}

/// M-fold coincidence probability of the projection measurement, up to the
/// constant detector splitting factor.
pub fn coincidence(config: &PhotonConfig) -> Result<f64, NoonError> {
    let m = config.total();
    let bank = DetectorBank::new(m)?;
    let mut photons = config.h_modes.to_vec();
    photons.extend_from_slice(&config.v_modes);
    let g = gram(&photons)?;
    let branch_list = branches(config, &bank)?;

    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for unprimed in &branch_list {
        for primed in &branch_list {
            let mut prod = unprimed.phase * primed.phase.conj();
            for j in 0..m {
                prod *= g.get(primed.photon_at[j], unprimed.photon_at[j]);
                if prod == Complex64::new(0.0, 0.0) {
                    break;
                }
            }
            // Kahan step.
            let y = prod - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    let scale = sum.re.abs().max(1.0);
    assert!(
        sum.im.abs() <= 1e-10 * scale,
        "coincidence sum has non-negligible imaginary part: {sum}"
    );
    Ok(sum.re.max(0.0))
}

/// Independent slow path: expands the amplitude over every photon-to-detector
/// ordering without the subset/bijection bookkeeping of `coincidence`, and
/// integrates term by term through the Gram entries.
pub fn coincidence_oracle(config: &PhotonConfig) -> Result<f64, NoonError> {
    use itertools::Itertools;
    let m = config.total();
    if m > ORACLE_MAX_PHOTONS {
        return Err(NoonError::SizeGuard { m, limit: ORACLE_MAX_PHOTONS });
    }
    let k = config.k();
    let bank = DetectorBank::new(m)?;
    let factors = bank.phase_factors();
    let mut photons = config.h_modes.to_vec();
    photons.extend_from_slice(&config.v_modes);
    let g = gram(&photons)?;

    // photon_at[j] over all m! orderings; H photons (index < k) pick up the
    // detector phase where they land.
    let orderings: Vec<Vec<usize>> = (0..m).permutations(m).collect();
    let phases: Vec<Complex64> = orderings
        .iter()
        .map(|ord| {
            ord.iter()
                .enumerate()
                .filter(|(_, &p)| p < k)
                .map(|(j, _)| factors[j])
                .product()
        })
        .collect();

    let mut sum = Complex64::new(0.0, 0.0);
    for (ord, phase) in orderings.iter().zip(&phases) {
        for (ord_p, phase_p) in orderings.iter().zip(&phases) {
            let mut prod = phase * phase_p.conj();
            for j in 0..m {
                prod *= g.get(ord_p[j], ord[j]);
            }
            sum += prod;
        }
    }
    Ok(sum.re.max(0.0))
}

/// One extracted interference dip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dip {
    pub dip_location: f64,
    pub visibility: f64,
}

/// Sampled coincidence-vs-delay curve with extracted dip visibilities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub delays: Vec<f64>,
    pub raw: Vec<f64>,
    pub baseline: f64,
    pub visibilities: Vec<Dip>,
}

/// Scans the target H photons across the delay grid.
///
/// The reported curve is sampled on the grid; the dip visibilities are
/// evaluated at the exact alignment offsets where a scanned H photon
/// coincides with a V photon of the same family, not at grid minima.
pub fn scan(
    config: &PhotonConfig,
    target: ScanTarget,
    grid: &[f64],
) -> Result<ScanResult, NoonError> {
    use rayon::prelude::*;
    if grid.is_empty() {
        return Err(NoonError::EmptyGrid);
    }
    let raw = grid
        .par_iter()
        .map(|&offset| coincidence(&config.displaced(target, offset)?))
        .collect::<Result<Vec<_>, _>>()?;

    let far = far_offset(config, grid);
    let baseline = coincidence(&config.displaced(target, far)?)?;
    if baseline <= 0.0 {
        return Err(NoonError::ZeroBaseline);
    }

    // Alignment offsets: scanned H photon meets a V photon of its family.
    let targets = config.target_indices(target)?;
    let (lo, hi) = grid.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    let mut offsets: Vec<f64> = Vec::new();
    for &i in &targets {
        let h = &config.h_modes[i];
        for v in &config.v_modes {
            if v.family() != h.family() {
                continue;
            }
            let offset = v.delay() - h.delay();
            if offset < lo - 1e-9 || offset > hi + 1e-9 {
                continue;
            }
            if !offsets.iter().any(|&o| (o - offset).abs() < 1e-9) {
                offsets.push(offset);
            }
        }
    }
    offsets.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut visibilities = Vec::new();
    for offset in offsets {
        let p = coincidence(&config.displaced(target, offset)?)?;
        if p < baseline * (1.0 - DIP_THRESHOLD) {
            visibilities.push(Dip {
                dip_location: offset,
                visibility: (baseline - p) / baseline,
            });
        }
    }

    Ok(ScanResult { delays: grid.to_vec(), raw, baseline, visibilities })
}

fn far_offset(config: &PhotonConfig, grid: &[f64]) -> f64 {
    let delays = config
        .h_modes
        .iter()
        .chain(&config.v_modes)
        .map(|m| m.delay());
    let (lo, hi) = delays.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
        (lo.min(d), hi.max(d))
    });
    let grid_hi = grid.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    (hi - lo) + grid_hi + 20.0 / config.min_sigma()
}

/// Dip visibility of an aligned configuration against its no-interference
/// baseline: `(P_base - P_aligned) / P_base`.
pub fn visibility(
    config_aligned: &PhotonConfig,
    config_baseline: &PhotonConfig,
) -> Result<f64, NoonError> {
    if config_aligned.k() != config_baseline.k()
        || config_aligned.v_modes != config_baseline.v_modes
    {
        return Err(NoonError::ConfigMismatch);
    }
    let p_base = coincidence(config_baseline)?;
    if p_base <= 0.0 {
        return Err(NoonError::ZeroBaseline);
    }
    let p_aligned = coincidence(config_aligned)?;
    Ok((p_base - p_aligned) / p_base)
}

//! Simulation and analysis of the temporal distinguishability of multi-photon
//! states.
//!
//! The library models photons as Gaussian temporal wave packets and reduces
//! every interference quantity to pairwise packet overlaps (a Gram matrix).
//! On top of that kernel it provides:
//!
//! - [`modes`]: single-photon temporal modes and closed-form overlap integrals;
//! - [`combinatorics`]: permanents, constrained bijection enumeration, and
//!   integer compositions;
//! - [`metrics`]: two-photon HOM visibility, the pair ratio E/A, N-photon
//!   state normalization and bunching rates, and PDC worked examples;
//! - [`noon`]: an exact brute-force simulator of the NOON-state projection
//!   measurement, with delay scans and dip visibility extraction;
//! - [`closedform`]: symbolic grouping scenarios and exact-rational evaluation
//!   of the closed-form visibility law, cross-checked against the simulator;
//! - [`cli`]: the command-line front end (CSV/JSON artifacts).

pub mod cli;
pub mod closedform;
pub mod combinatorics;
pub mod metrics;
pub mod modes;
pub mod noon;

pub use closedform::{enumerate_scenarios, make_table, visibility_formula, Scenario};
pub use combinatorics::{permanent_naive, permanent_ryser, SquareComplexMatrix};
pub use metrics::{hom_visibility, normalization, TwoPhotonAmplitude};
pub use modes::{gram, overlap, OverlapMatrix, Polarization, TemporalMode};
pub use noon::{coincidence, visibility, PhotonConfig, ScanResult};

//! Symbolic grouping scenarios and the exact-rational closed-form visibility
//! law for the `(N+k)`-photon projection measurement.
//!
//! A scenario describes how `k` H photons split into well-separated subgroups
//! of sizes `k_j`, each overlapped in time by `m_j` V photons, with the
//! remaining V photons well away from everything. The closed-form law
//!
//! ```text
//! V = sum_{l=1}^{k} (-1)^{l-1} sum_{i_1+...+i_r = l}
//!       (l! / (i_1!...i_r!)) *
//!       prod_j C(k_j, i_j) m_j^(i_j) / [(N+k-1)...(N+k-l)]
//! ```
//!
//! is evaluated over rationals, with `m^(i)` the falling factorial. The law
//! is sometimes quoted with the side conventions `m^(0) = 0 = m^(m)` and
//! `C_N^M = (N+M)!/N!M!`, which contradict the tabulated values and the
//! `k = 1` special case; the standard conventions (`m^(0) = 1`, ordinary
//! binomial) reproduce every tabulated value exactly and agree with the
//! brute-force simulator, so they are the default. The alternate reading
//! stays available as a diagnostic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::modes::TemporalMode;
use crate::noon::{self, NoonError, PhotonConfig};

pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("scenario needs at least one group")]
    NoGroups,
    #[error("group has zero H photons")]
    EmptyGroup,
    #[error("scenario needs at least one V photon")]
    NoVPhotons,
    #[error("cannot parse scenario string {0:?}")]
    Parse(String),
    #[error(transparent)]
    Noon(#[from] NoonError),
    #[error(transparent)]
    Mode(#[from] crate::modes::ModeError),
}

/// One well-separated subgroup: `k` coincident H photons overlapped by `m`
/// V photons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Group {
    pub k: u32,
    pub m: u32,
}

/// A full temporal-distribution scenario of the `|k_H, N_V>` state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scenario {
    groups: Vec<Group>,
    stray_v: u32,
}

impl Scenario {
    /// Builds a scenario, sorting the groups into canonical (descending)
    /// order.
    pub fn new(groups: Vec<Group>, stray_v: u32) -> Result<Self, ScenarioError> {
        if groups.is_empty() {
            return Err(ScenarioError::NoGroups);
        }
        if groups.iter().any(|g| g.k == 0) {
            return Err(ScenarioError::EmptyGroup);
        }
        if groups.iter().all(|g| g.m == 0) && stray_v == 0 {
            return Err(ScenarioError::NoVPhotons);
        }
        let mut groups = groups;
        groups.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { groups, stray_v })
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn stray_v(&self) -> u32 {
        self.stray_v
    }

    /// Total H photons.
    pub fn k(&self) -> u32 {
        self.groups.iter().map(|g| g.k).sum()
    }

    /// Total V photons.
    pub fn n(&self) -> u32 {
        self.groups.iter().map(|g| g.m).sum::<u32>() + self.stray_v
    }

    pub fn total(&self) -> u32 {
        self.k() + self.n()
    }

    /// Concrete temporal arrangement realizing this scenario with the
    /// family-exact idealization: one orthogonality family per group, fresh
    /// families for the stray V photons, all delays zero.
    pub fn to_config(&self, sigma: f64) -> Result<PhotonConfig, ScenarioError> {
        let mut h = Vec::new();
        let mut v = Vec::new();
        let mut family = 0u32;
        for g in &self.groups {
            let mode = TemporalMode::new(0.0, sigma)?.with_family(family);
            h.extend(std::iter::repeat(mode).take(g.k as usize));
            v.extend(std::iter::repeat(mode).take(g.m as usize));
            family += 1;
        }
        for _ in 0..self.stray_v {
            v.push(TemporalMode::new(0.0, sigma)?.with_family(family));
            family += 1;
        }
        Ok(PhotonConfig::new(h, v)?)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{}H", g.k)?;
            if g.m > 0 {
                write!(f, "{}V", g.m)?;
            }
        }
        if self.stray_v > 0 {
            write!(f, "+{}V", self.stray_v)?;
        }
        Ok(())
    }
}

impl FromStr for Scenario {
    type Err = ScenarioError;

    /// Parses the compact notation: `+`-separated terms, each `[k]H[m]V`,
    /// `[k]H`, or `[m]V`, where an omitted count means 1. Pure-V terms pool
    /// into the stray-V count.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScenarioError::Parse(s.to_string());
        let mut groups = Vec::new();
        let mut stray_v = 0u32;
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(err());
            }
            let mut rest = term;
            let mut h = None;
            let mut v = None;
            for letter in ['H', 'V'] {
                let count = match rest.find(letter) {
                    Some(0) => 1,
                    Some(pos) => rest[..pos].parse::<u32>().map_err(|_| err())?,
                    None => continue,
                };
                rest = &rest[rest.find(letter).unwrap() + 1..];
                match letter {
                    'H' => h = Some(count),
                    _ => v = Some(count),
                }
            }
            if !rest.is_empty() {
                return Err(err());
            }
            match (h, v) {
                (Some(k), m) => groups.push(Group { k, m: m.unwrap_or(0) }),
                (None, Some(m)) => stray_v += m,
                (None, None) => return Err(err()),
            }
        }
        Scenario::new(groups, stray_v).map_err(|_| err())
    }
}

/// Which side conventions to use when reading the visibility law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `m^(0) = 1`, falling factorial vanishing only for `i > m`, ordinary
    /// binomial coefficient. Reproduces the tabulated values and the
    /// simulator; the default everywhere.
    Standard,
    /// The alternate side conventions, kept for diagnosis:
    /// `m^(0) = 0 = m^(m)` and `C_N^M = (N+M)!/N!M!`.
    Literal,
}

fn big(x: u32) -> BigInt {
    BigInt::from(x)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).fold(BigInt::one(), |a, b| a * b)
}

fn binomial(k: u32, i: u32) -> BigInt {
    if i > k {
        return BigInt::zero();
    }
    factorial(k) / (factorial(i) * factorial(k - i))
}

fn falling(m: u32, i: u32) -> BigInt {
    if i > m {
        return BigInt::zero();
    }
    (0..i).map(|j| big(m - j)).fold(BigInt::one(), |a, b| a * b)
}

/// Closed-form visibility of a scenario under the standard conventions.
pub fn visibility_formula(s: &Scenario) -> Rational {
    visibility_formula_with(s, Convention::Standard)
}

/// Closed-form visibility with an explicit convention choice.
pub fn visibility_formula_with(s: &Scenario, convention: Convention) -> Rational {
    let k = s.k();
    let n = s.n();
    let caps: Vec<u32> = s.groups.iter().map(|g| g.k).collect();
    let r = caps.len();

    let weight = |group: &Group, i: u32| -> BigInt {
        match convention {
            Convention::Standard => binomial(group.k, i) * falling(group.m, i),
            Convention::Literal => {
                // C_N^M = (N+M)!/N!M! and m^(0) = 0 = m^(m).
                let c = factorial(group.k + i) / (factorial(group.k) * factorial(i));
                let f = if i == 0 || (group.m > 0 && i == group.m) {
                    BigInt::zero()
                } else {
                    falling(group.m, i)
                };
                c * f
            }
        }
    };

    let mut total = Rational::zero();
    let mut denom = BigInt::one();
    for l in 1..=k {
        denom *= big(n + k - l);
        let mut numer = BigInt::zero();
        for comp in crate::combinatorics::compositions(l, r, &caps) {
            let mut term = factorial(l);
            for (j, &i) in comp.parts.iter().enumerate() {
                term /= factorial(i);
                term *= weight(&s.groups[j], i);
            }
            numer += term;
        }
        let signed = if l % 2 == 1 { numer } else { -numer };
        total += Rational::new(signed, denom.clone());
    }
    total
}

/// All canonical scenarios of the `|k_H, n_V>` state, in the conventional
/// presentation order (groups descending lexicographically).
///
/// Canonical means: no group of two or more H photons sits away from every V
/// photon (such a group is indistinguishable from separated singles as far as
/// the projection measurement goes, so the singles form is used); at least
/// one group overlaps a V photon; and lone H photons appear only when
/// matched by stray V photons, except for the single distinguished family
/// `1H nV + 1H` with `k < n`. Distinct-looking arrangements that this rule
/// folds together have identical visibility.
pub fn enumerate_scenarios(k: u32, n: u32) -> Vec<Scenario> {
    assert!(k >= 1 && n >= 1, "need at least one photon of each polarization");
    let mut out = Vec::new();
    let mut groups: Vec<Group> = Vec::new();
    recurse(k, n, None, &mut groups, &mut out);
    out
}

fn recurse(
    k_left: u32,
    m_left: u32,
    max: Option<Group>,
    groups: &mut Vec<Group>,
    out: &mut Vec<Scenario>,
) {
    if k_left == 0 {
        if let Some(s) = finish(groups, m_left) {
            out.push(s);
        }
        return;
    }
    for k in (1..=k_left).rev() {
        for m in (0..=m_left).rev() {
            let g = Group { k, m };
            if let Some(prev) = max {
                if g > prev {
                    continue;
                }
            }
            if m == 0 && k > 1 {
                continue; // separated multi-H group: folded into singles
            }
            groups.push(g);
            recurse(k_left - k, m_left - m, Some(g), groups, out);
            groups.pop();
        }
    }
}

fn finish(groups: &[Group], stray_v: u32) -> Option<Scenario> {
    if groups.iter().all(|g| g.m == 0) {
        return None;
    }
    let lone_h = groups.iter().filter(|g| g.k == 1 && g.m == 0).count() as u32;
    let k: u32 = groups.iter().map(|g| g.k).sum();
    let n: u32 = groups.iter().map(|g| g.m).sum::<u32>() + stray_v;
    let exceptional = lone_h == 1
        && stray_v == 0
        && groups.len() == 2
        && groups[0].k == 1
        && groups[0].m == n
        && k < n;
    if lone_h > stray_v && !exceptional {
        return None;
    }
    Some(Scenario { groups: groups.to_vec(), stray_v })
}

/// One row of a visibility table.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub scenario: Scenario,
    pub formula: Rational,
    pub formula_value: f64,
    pub bruteforce_value: f64,
    pub abs_diff: f64,
}

/// Closed-form vs brute-force visibility for every canonical scenario of
/// `|k_H, n_V>`.
pub fn make_table(k: u32, n: u32) -> Result<Vec<TableRow>, ScenarioError> {
    use rayon::prelude::*;
    let scenarios = enumerate_scenarios(k, n);
    scenarios
        .into_par_iter()
        .map(|scenario| {
            let formula = visibility_formula(&scenario);
            let formula_value = formula.to_f64().expect("rational fits in f64");
            let config = scenario.to_config(1.0)?;
            let bruteforce_value =
                noon::visibility(&config, &config.baseline_family_exact())?;
            Ok(TableRow {
                abs_diff: (formula_value - bruteforce_value).abs(),
                scenario,
                formula,
                formula_value,
                bruteforce_value,
            })
        })
        .collect()
}

/// Published golden visibilities, as `(scenario, numerator, denominator)`.
/// `golden_rows(k, n)` is `Some` for the four tabulated states; scenarios
/// absent from a table share the value of a listed one and are not repeated
/// here.
pub fn golden_rows(k: u32, n: u32) -> Option<&'static [(&'static str, i64, i64)]> {
    const T22: &[(&str, i64, i64)] = &[
        ("2H2V", 1, 1),
        ("2H1V+1V", 2, 3),
        ("1H1V+1H1V", 1, 3),
        ("1H1V+1H+1V", 1, 3),
    ];
    const T23: &[(&str, i64, i64)] = &[
        ("2H3V", 1, 1),
        ("2H2V+1V", 5, 6),
        ("2H1V+2V", 1, 2),
        ("1H3V+1H", 3, 4),
        ("1H2V+1H1V", 5, 12),
        ("1H2V+1H+1V", 1, 2),
        ("1H1V+1H1V+1V", 1, 3),
        ("1H1V+1H+2V", 1, 4),
    ];
    const T24: &[(&str, i64, i64)] = &[
        ("2H4V", 1, 1),
        ("2H3V+1V", 9, 10),
        ("2H2V+2V", 7, 10),
        ("2H1V+3V", 2, 5),
        ("1H4V+1H", 4, 5),
        ("1H3V+1H1V", 1, 2),
        ("1H3V+1H+1V", 3, 5),
        ("1H2V+1H2V", 2, 5),
        ("1H1V+1H1V+2V", 3, 10),
        ("1H1V+1H+3V", 1, 5),
    ];
    const T33: &[(&str, i64, i64)] = &[
        ("3H3V", 1, 1),
        ("3H2V+1V", 9, 10),
        ("3H1V+2V", 3, 5),
        ("2H2V+1H1V", 3, 5),
        ("2H2V+1H+1V", 7, 10),
        ("2H1V+1H2V", 2, 5),
        ("1H1V+1H1V+1H1V", 2, 5),
        ("1H1V+1H1V+1H+1V", 3, 10),
        ("1H1V+1H+1V+1H+1V", 1, 5),
    ];
    match (k, n) {
        (2, 2) => Some(T22),
        (2, 3) => Some(T23),
        (2, 4) => Some(T24),
        (3, 3) => Some(T33),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(s: &str) -> Scenario {
        s.parse().unwrap()
    }

    fn rational(num: i64, den: i64) -> Rational {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["2H1V+1V", "1H1V+1H+2V", "3H3V", "1H2V+1H1V"] {
            let parsed = scenario(s);
            assert_eq!(parsed.to_string(), s);
            assert_eq!(parsed.to_string().parse::<Scenario>().unwrap(), parsed);
        }
    }

    #[test]
    fn parse_implicit_counts() {
        assert_eq!(scenario("HV+V+H+V"), scenario("1H1V+1H+2V"));
        assert_eq!(scenario("2HV"), scenario("2H1V"));
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "2", "HX", "1H1V+", "VH", "H+H"] {
            assert!(s.parse::<Scenario>().is_err(), "{s:?} parsed");
        }
    }

    #[test]
    fn canonical_group_order() {
        let a = Scenario::new(
            vec![Group { k: 1, m: 1 }, Group { k: 2, m: 1 }],
            0,
        )
        .unwrap();
        assert_eq!(a, scenario("2H1V+1H1V"));
    }

    #[test]
    fn counts_match_published_lists() {
        assert_eq!(enumerate_scenarios(2, 2).len(), 4);
        assert_eq!(enumerate_scenarios(2, 3).len(), 8);
        assert_eq!(enumerate_scenarios(2, 4).len(), 12);
        assert_eq!(enumerate_scenarios(3, 3).len(), 11);
    }

    #[test]
    fn k1_law() {
        // Single H photon over m coincident V photons: V = m/N.
        for n in 1..=6u32 {
            for m in 0..=n {
                let s = Scenario::new(vec![Group { k: 1, m }], n - m);
                let Ok(s) = s else { continue };
                assert_eq!(visibility_formula(&s), rational(m as i64, n as i64));
            }
        }
    }

    #[test]
    fn golden_rationals() {
        for (k, n) in [(2, 2), (2, 3), (2, 4), (3, 3)] {
            for &(name, num, den) in golden_rows(k, n).unwrap() {
                let v = visibility_formula(&scenario(name));
                assert_eq!(v, rational(num, den), "{name}");
            }
        }
    }

    #[test]
    fn golden_scenarios_are_enumerated() {
        for (k, n) in [(2, 2), (2, 3), (2, 4), (3, 3)] {
            let all = enumerate_scenarios(k, n);
            for &(name, _, _) in golden_rows(k, n).unwrap() {
                assert!(all.contains(&scenario(name)), "{name} missing from ({k},{n})");
            }
        }
    }

    #[test]
    fn folded_scenarios_share_visibility() {
        // Arrangements removed by canonicalization duplicate a listed value.
        let pairs = [
            ("2H3V+1H", "3H2V+1V"),          // both 9/10 at (3,3)
            ("1H2V+1H1V+1H", "1H1V+1H1V+1H1V"), // both 2/5 at (3,3)
        ];
        for (folded, kept) in pairs {
            assert_eq!(
                visibility_formula(&scenario(folded)),
                visibility_formula(&scenario(kept)),
                "{folded} vs {kept}"
            );
        }
    }

    #[test]
    fn formula_in_unit_interval() {
        for k in 1..=3u32 {
            for n in k..=(7 - k) {
                for s in enumerate_scenarios(k, n) {
                    let v = visibility_formula(&s);
                    assert!(
                        v >= Rational::zero() && v <= Rational::one(),
                        "{s}: {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn literal_convention_breaks_known_values() {
        // Diagnostic mode: the stated side conventions contradict the tables.
        let v = visibility_formula_with(&scenario("2H2V"), Convention::Literal);
        assert_ne!(v, Rational::one());
    }

    #[test]
    fn formula_matches_bruteforce_small() {
        for row in make_table(2, 2).unwrap() {
            assert!(
                row.abs_diff <= 1e-9,
                "{}: formula {} vs brute {}",
                row.scenario,
                row.formula_value,
                row.bruteforce_value
            );
        }
    }

    #[test]
    fn to_config_shape() {
        let config = scenario("2H1V+1V").to_config(1.0).unwrap();
        assert_eq!(config.k(), 2);
        assert_eq!(config.n(), 2);
        // group family shared by its H and V photons; stray V separate
        assert_eq!(config.h_modes()[0].family(), config.v_modes()[0].family());
        assert_ne!(config.v_modes()[1].family(), config.v_modes()[0].family());
    }
}

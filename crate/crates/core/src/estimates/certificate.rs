//! Exact exponent bookkeeping for the α and β estimates.
//!
//! On a piece where the annulus volume grows like R^d and p is the inner
//! exponent, Hölder's inequality bounds the α term by R^{−2 + d(p−2)/p} and the
//! β term by R^{−1 + d(p−3)/p}; p = +∞ gives conjugate 1, i.e. R^{−k + d}.

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::exponents::{Preset, PresetKind};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Alpha,
    Beta,
}

impl Term {
    /// (power of R from the cutoff derivative, numerator of the conjugate).
    fn orders(self) -> (i64, i64) {
        match self {
            Term::Alpha => (2, 2),
            Term::Beta => (1, 3),
        }
    }
}

fn ser_ratio<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_ratio<S: Serializer>(r: &Option<Rational64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_str("inf"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateEntry {
    pub term: Term,
    pub piece: String,
    #[serde(serialize_with = "ser_ratio")]
    pub volume_growth: Rational64,
    /// Reciprocal-worst conjugate bound on the piece (q for α, r for β).
    #[serde(serialize_with = "ser_ratio")]
    pub conjugate_bound: Rational64,
    #[serde(serialize_with = "ser_ratio")]
    pub exponent: Rational64,
    pub negative: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentCertificate {
    pub preset: String,
    pub entries: Vec<CertificateEntry>,
    pub overall: bool,
    /// Supremum of admissible inner exponents; None means +∞.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub inner_upper_bound: Option<Rational64>,
}

impl ExponentCertificate {
    /// Largest (worst) exponent over the entries.
    pub fn worst_exponent(&self) -> Rational64 {
        self.entries.iter().map(|e| e.exponent).max().unwrap_or_else(Rational64::zero)
    }
}

/// k-conjugate p/(p−k); None (p = +∞) maps to 1.
fn conjugate(p: Option<Rational64>, k: i64) -> Rational64 {
    match p {
        Some(p) => p / (p - k),
        None => Rational64::one(),
    }
}

fn entry(term: Term, piece: String, d: Rational64, p: Option<Rational64>) -> CertificateEntry {
    let (kt, kc) = term.orders();
    let q = conjugate(p, kc);
    let exponent = -Rational64::from_integer(kt) + d / q;
    CertificateEntry { term, piece, volume_growth: d, conjugate_bound: q, exponent, negative: exponent.is_negative() }
}

/// Exponents of R bounding the chosen term, piece by piece. Works on presets
/// built without validation, which is how failing certificates are exhibited.
pub fn predicted_exponent(preset: &Preset, term: Term) -> ExponentCertificate {
    let inner_name = match preset.kind() {
        PresetKind::Cylinder => "cylinder",
        PresetKind::PowerCusp => "power_cusp",
        PresetKind::ShrinkCusp => "shrink_cusp",
    };
    let entries = vec![
        entry(term, inner_name.to_string(), preset.inner_growth(), preset.inner_exponent()),
        entry(term, "outside".to_string(), Rational64::from_integer(3), Some(preset.outer_exponent())),
    ];
    let overall = entries.iter().all(|e| e.negative);
    ExponentCertificate {
        preset: describe(preset),
        entries,
        overall,
        inner_upper_bound: upper_bound_for_growth(preset.inner_growth()),
    }
}

pub fn describe(p: &Preset) -> String {
    match p {
        Preset::T1 { p_in, p_out } => format!("T1(p_in={p_in}, p_out={p_out})"),
        Preset::T2 { gamma, p_in, p_out } => format!("T2(gamma={gamma}, p_in={p_in}, p_out={p_out})"),
        Preset::T3 { sigma, p_out } => format!("T3(sigma={sigma}, p_out={p_out})"),
    }
}

/// Inner region family for `admissible_upper_bound`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InnerKind {
    Cylinder,
    Cusp { gamma: Rational64 },
}

/// sup of inner p with every α and β power negative, for a piece of growth d:
/// (d − k)p < d·k_c gives p < d·k_c/(d − k) when d > k, no limit otherwise.
fn upper_bound_for_growth(d: Rational64) -> Option<Rational64> {
    [Term::Alpha, Term::Beta]
        .into_iter()
        .filter_map(|t| {
            let (kt, kc) = t.orders();
            let excess = d - kt;
            excess.is_positive().then(|| d * kc / excess)
        })
        .min()
}

/// Supremum of admissible inner exponents: +∞ (None) on the cylinder,
/// (6γ+3)/(2γ) on the power cusp.
pub fn admissible_upper_bound(kind: InnerKind, p_out: Rational64) -> Result<Option<Rational64>> {
    if !(p_out > Rational64::from_integer(3) && p_out < Rational64::new(9, 2)) {
        return Err(Error::PresetConstraintViolated(format!("3 < p_out < 9/2 fails for p_out = {p_out}")));
    }
    Ok(match kind {
        InnerKind::Cylinder => upper_bound_for_growth(Rational64::one()),
        InnerKind::Cusp { gamma } => {
            if !gamma.is_positive() {
                return Err(Error::InvalidArgument(format!("γ = {gamma} must be positive")));
            }
            upper_bound_for_growth(Rational64::from_integer(2) * gamma + 1)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn hand_derived_exponents() {
        let t1 = Preset::t1(r(5, 1), r(4, 1)).unwrap();
        let a = predicted_exponent(&t1, Term::Alpha);
        let ex: Vec<_> = a.entries.iter().map(|e| e.exponent).collect();
        assert_eq!(ex, vec![r(-7, 5), r(-1, 2)]);
        assert!(a.overall && a.inner_upper_bound.is_none());
        let b = predicted_exponent(&t1, Term::Beta);
        assert_eq!(b.entries.iter().map(|e| e.exponent).collect::<Vec<_>>(), vec![r(-3, 5), r(-1, 4)]);
        assert_eq!(b.worst_exponent(), r(-1, 4));

        let bad = Preset::T2 { gamma: r(1, 2), p_in: r(7, 1), p_out: r(4, 1) };
        let c = predicted_exponent(&bad, Term::Beta);
        assert!(!c.overall);
        assert_eq!(c.entries[0].exponent, r(1, 7));

        let t3 = Preset::t3(r(1, 2), r(4, 1)).unwrap();
        assert_eq!(predicted_exponent(&t3, Term::Alpha).entries[0].exponent, r(-3, 2));
    }

    #[test]
    fn thresholds() {
        let p_out = r(4, 1);
        for (g, want) in [(r(1, 4), r(9, 1)), (r(1, 2), r(6, 1)), (r(3, 4), r(5, 1)), (r(1, 1), r(9, 2))] {
            assert_eq!(admissible_upper_bound(InnerKind::Cusp { gamma: g }, p_out).unwrap(), Some(want));
            assert_eq!(Preset::cusp_band_top(g), want);
        }
        assert_eq!(admissible_upper_bound(InnerKind::Cylinder, p_out).unwrap(), None);
        assert!(admissible_upper_bound(InnerKind::Cylinder, r(5, 1)).is_err());
    }

    #[test]
    fn every_valid_preset_certifies() {
        for g in [r(1, 4), r(1, 2), r(3, 4)] {
            let top = Preset::cusp_band_top(g);
            let p_in = (r(9, 2) + top) / 2;
            let pr = Preset::t2(g, p_in, r(4, 1)).unwrap();
            assert!(predicted_exponent(&pr, Term::Alpha).overall && predicted_exponent(&pr, Term::Beta).overall);
            let over = Preset::T2 { gamma: g, p_in: top + r(1, 10), p_out: r(4, 1) };
            assert!(!predicted_exponent(&over, Term::Beta).overall);
        }
    }
}

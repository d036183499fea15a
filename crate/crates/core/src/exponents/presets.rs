use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use super::{ExponentField, ExponentPiece};
use crate::regions::Region;
use crate::{Error, Result};

/// Closest fraction to `x` with denominator at most `max_den`
/// (continued fractions with semiconvergents).
pub fn best_rational(x: f64, max_den: i64) -> Rational64 {
    assert!(x.is_finite() && max_den >= 1);
    let sign = if x < 0.0 { -1 } else { 1 };
    let target = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = target;
    for _ in 0..64 {
        let a = r.floor();
        if a > (i64::MAX / 4) as f64 {
            break;
        }
        let a = a as i64;
        let q2 = q0 + a * q1;
        if q2 > max_den {
            let k = (max_den - q0) / q1;
            let (ps, qs) = (p0 + k * p1, q0 + k * q1);
            let semi = ps as f64 / qs as f64;
            let conv = p1 as f64 / q1 as f64;
            if (semi - target).abs() < (conv - target).abs() {
                return Rational64::new(sign * ps, qs);
            }
            break;
        }
        let p2 = p0 + a * p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if frac <= f64::EPSILON * r.max(1.0) || (p1 as f64 / q1 as f64 - target).abs() == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    Rational64::new(sign * p1, q1)
}

/// Recovers the fraction a decimal input stands for (5/3 from 1.6666…),
/// rejecting values that are not close to a fraction with denominator ≤ 10⁶.
pub fn ratio_from_f64(x: f64) -> Result<Rational64> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("{x} has no rational value")));
    }
    let r = best_rational(x, 1_000_000);
    let back = r.to_f64().unwrap_or(f64::NAN);
    if (back - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
        Ok(r)
    } else {
        Err(Error::InvalidArgument(format!("{x} is not a fraction with denominator ≤ 10⁶")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresetKind {
    Cylinder,
    PowerCusp,
    ShrinkCusp,
}

/// The three two-piece exponents of the Liouville theorems, with exact
/// rational parameters.
///
/// * `T1`: p = p_in on the cylinder, p_out outside; 3 < p_out < 9/2 < p_in.
/// * `T2`: p = p_in on the power cusp, p_out outside;
///   9/2 < p_in < (6γ+3)/(2γ).
/// * `T3`: p = +∞ on the shrinking cusp, p_out outside.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Preset {
    T1 { p_in: Rational64, p_out: Rational64 },
    T2 { gamma: Rational64, p_in: Rational64, p_out: Rational64 },
    T3 { sigma: Rational64, p_out: Rational64 },
}

fn f(x: Rational64) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl Preset {
    pub fn t1(p_in: Rational64, p_out: Rational64) -> Result<Preset> {
        let p = Preset::T1 { p_in, p_out };
        p.validate()?;
        Ok(p)
    }

    pub fn t2(gamma: Rational64, p_in: Rational64, p_out: Rational64) -> Result<Preset> {
        let p = Preset::T2 { gamma, p_in, p_out };
        p.validate()?;
        Ok(p)
    }

    pub fn t3(sigma: Rational64, p_out: Rational64) -> Result<Preset> {
        let p = Preset::T3 { sigma, p_out };
        p.validate()?;
        Ok(p)
    }

    /// Upper end (6γ+3)/(2γ) of the admissible inner band on the power cusp.
    pub fn cusp_band_top(gamma: Rational64) -> Rational64 {
        (Rational64::from_integer(6) * gamma + 3) / (Rational64::from_integer(2) * gamma)
    }

    /// Checks the displayed inequality chain of the preset.
    pub fn validate(&self) -> Result<()> {
        let nine_halves = Rational64::new(9, 2);
        let three = Rational64::from_integer(3);
        let violated = |s: String| Err(Error::PresetConstraintViolated(s));
        let p_out = self.outer_exponent();
        if !(three < p_out && p_out < nine_halves) {
            return violated(format!("3 < p_out < 9/2 fails for p_out = {p_out}"));
        }
        match *self {
            Preset::T1 { p_in, .. } => {
                if p_in <= nine_halves {
                    return violated(format!("9/2 < p_in fails for p_in = {p_in}"));
                }
            }
            Preset::T2 { gamma, p_in, .. } => {
                if !(gamma > Rational64::zero() && gamma < Rational64::from_integer(1)) {
                    return violated(format!("0 < γ < 1 fails for γ = {gamma}"));
                }
                if p_in <= nine_halves {
                    return violated(format!("9/2 < p_in fails for p_in = {p_in}"));
                }
                let top = Self::cusp_band_top(gamma);
                if p_in >= top {
                    return violated(format!(
                        "p_in < (6γ+3)/(2γ) = {top} fails for p_in = {p_in} (γ = {gamma})"
                    ));
                }
            }
            Preset::T3 { sigma, .. } => {
                if !(sigma > Rational64::zero() && sigma < Rational64::from_integer(1)) {
                    return violated(format!("0 < σ < 1 fails for σ = {sigma}"));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> PresetKind {
        match self {
            Preset::T1 { .. } => PresetKind::Cylinder,
            Preset::T2 { .. } => PresetKind::PowerCusp,
            Preset::T3 { .. } => PresetKind::ShrinkCusp,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::T1 { .. } => "T1",
            Preset::T2 { .. } => "T2",
            Preset::T3 { .. } => "T3",
        }
    }

    pub fn inner_region(&self) -> Region {
        match *self {
            Preset::T1 { .. } => Region::Cylinder,
            Preset::T2 { gamma, .. } => Region::PowerCusp { gamma: f(gamma) },
            Preset::T3 { sigma, .. } => Region::ShrinkCusp { sigma: f(sigma) },
        }
    }

    /// Inner exponent; `None` stands for +∞.
    pub fn inner_exponent(&self) -> Option<Rational64> {
        match *self {
            Preset::T1 { p_in, .. } | Preset::T2 { p_in, .. } => Some(p_in),
            Preset::T3 { .. } => None,
        }
    }

    pub fn outer_exponent(&self) -> Rational64 {
        match *self {
            Preset::T1 { p_out, .. } | Preset::T2 { p_out, .. } | Preset::T3 { p_out, .. } => p_out,
        }
    }

    /// Exact growth exponent d of |C(R/2, R) ∩ inner region| ≍ R^d.
    pub fn inner_growth(&self) -> Rational64 {
        match *self {
            Preset::T1 { .. } => Rational64::from_integer(1),
            Preset::T2 { gamma, .. } => Rational64::from_integer(2) * gamma + 1,
            Preset::T3 { sigma, .. } => Rational64::from_integer(1) - sigma,
        }
    }

    /// The two-piece exponent field.
    pub fn field(&self) -> Result<ExponentField> {
        let inner = match self.inner_exponent() {
            Some(p) => ExponentPiece::constant(f(p))?,
            None => ExponentPiece::Constant(f64::INFINITY),
        };
        let region = self.inner_region();
        region.validate()?;
        ExponentField::new(vec![(region, inner)], ExponentPiece::constant(f(self.outer_exponent()))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn best_rational_recovers_fractions() {
        assert_eq!(best_rational(5.0 / 3.0, 1000), r(5, 3));
        assert_eq!(best_rational(0.25, 8), r(1, 4));
        assert_eq!(best_rational(1.49, 8), r(3, 2));
        assert_eq!(best_rational(-2.5, 8), r(-5, 2));
        assert_eq!(best_rational(std::f64::consts::PI, 100), r(311, 99));
        assert_eq!(best_rational(3.0, 8), r(3, 1));
        assert!(ratio_from_f64(std::f64::consts::E).is_err());
        assert_eq!(ratio_from_f64(4.5).unwrap(), r(9, 2));
    }

    #[test]
    fn constraint_violations_name_the_inequality() {
        let e = Preset::t2(r(1, 2), r(7, 1), r(4, 1)).unwrap_err();
        match e {
            Error::PresetConstraintViolated(msg) => assert!(msg.contains("(6γ+3)/(2γ) = 6"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Preset::t1(r(4, 1), r(4, 1)).is_err());
        assert!(Preset::t1(r(5, 1), r(5, 1)).is_err());
        assert!(Preset::t3(r(1, 1), r(4, 1)).is_err());
        assert!(Preset::t3(r(1, 2), r(3, 1)).is_err());
    }

    #[test]
    fn fields_match_displays() {
        let t3 = Preset::t3(r(1, 2), r(4, 1)).unwrap().field().unwrap();
        assert_eq!(t3.evaluate(&pt(1.0, 0.1, 0.0)), f64::INFINITY);
        assert_eq!(t3.evaluate(&pt(-1.0, 0.1, 0.0)), 4.0);
        let t2 = Preset::t2(r(1, 2), r(5, 1), r(4, 1)).unwrap();
        assert_eq!(t2.field().unwrap().evaluate(&pt(4.0, 1.0, 1.0)), 5.0);
        assert_eq!(t2.inner_growth(), r(2, 1));
        // validation-off construction still builds a field
        let off = Preset::T2 { gamma: r(1, 2), p_in: r(7, 1), p_out: r(4, 1) };
        assert!(off.validate().is_err());
        assert_eq!(off.field().unwrap().evaluate(&pt(4.0, 0.0, 0.0)), 7.0);
    }
}

//! Executable forms of the norm identities and inequalities the estimates rely on.

use serde::Serialize;

use super::{ess_sup, luxemburg_norm, NormResult, NormStatus};
use crate::exponents::ExponentField;
use crate::fields::ScalarField3;
use crate::quadrature::Quadrature;
use crate::regions::{Region, VolumeMethod};
use crate::{Error, Point, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestrictionCheck {
    pub lhs: NormResult,
    pub rhs: NormResult,
    pub deviation: f64,
    /// Sum of both reported absolute errors.
    pub combined_tolerance: f64,
}

impl RestrictionCheck {
    pub fn within(&self, factor: f64) -> bool {
        self.deviation <= factor * self.combined_tolerance + 1e-12 * self.lhs.value.abs()
    }
}

/// ‖f‖ over Ω with p restricted to Ω against ‖f·1_Ω‖ over a ball 1.25 times
/// larger, computed on an independent random stream.
pub fn restriction_identity_check(f: &ScalarField3, p: &ExponentField, omega: &Region, quad: &Quadrature) -> Result<RestrictionCheck> {
    let (_, outer) = omega
        .bounding_shell()
        .ok_or_else(|| Error::InvalidArgument(format!("{omega} has no bounding ball")))?;
    let big = Region::ball(Point::zeros(), 1.25 * outer)?;
    let lhs = luxemburg_norm(f, p, omega, quad)?;
    let rhs = luxemburg_norm(&f.restricted_to(omega), p, &big, &quad.with_seed_offset(1))?;
    let deviation = if lhs.value == rhs.value { 0.0 } else { (lhs.value - rhs.value).abs() };
    Ok(RestrictionCheck { lhs, rhs, deviation, combined_tolerance: lhs.abs_error + rhs.abs_error })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub volume: Option<f64>,
    pub p_minus: Option<f64>,
    pub p_plus: Option<f64>,
    pub sup: Option<f64>,
}

fn region_volume(omega: &Region, quad: &Quadrature) -> Result<(f64, f64)> {
    match omega.volume(VolumeMethod::Analytic) {
        Ok(v) => Ok((v.value, 0.0)),
        Err(Error::AnalyticUnavailable(_)) => {
            let e = quad.integrate(omega, 0x7001, |_| 1.0)?;
            Ok((e.value, e.error))
        }
        Err(e) => Err(e),
    }
}

/// ‖1‖_{L^{p(·)}(Ω)} ≤ 2·max{|Ω|^{1/p⁻}, |Ω|^{1/p⁺}}.
pub fn lemma1_check(p: &ExponentField, omega: &Region, quad: &Quadrature) -> Result<LemmaCheck> {
    let lhs = luxemburg_norm(&ScalarField3::constant(1.0), p, omega, quad)?;
    let (vol, _) = region_volume(omega, quad)?;
    let b = p.essential_bounds(omega, 0x1E)?;
    let rhs = 2.0 * vol.powf(1.0 / b.inf).max(vol.powf(1.0 / b.sup));
    let tolerance = lhs.abs_error;
    Ok(LemmaCheck {
        lhs: lhs.value,
        rhs,
        tolerance,
        pass: lhs.value <= rhs + tolerance,
        volume: Some(vol),
        p_minus: Some(b.inf),
        p_plus: Some(b.sup),
        sup: None,
    })
}

/// ‖f‖_{L^{p(·)}(Ω)} ≤ ‖f‖_{L^∞(Ω)}·‖1‖_{L^{p(·)}(Ω)}.
pub fn lemma2_check(f: &ScalarField3, p: &ExponentField, omega: &Region, quad: &Quadrature) -> Result<LemmaCheck> {
    let lhs = luxemburg_norm(f, p, omega, quad)?;
    let one = luxemburg_norm(&ScalarField3::constant(1.0), p, omega, quad)?;
    let sup = ess_sup(f, omega, quad)?;
    let rhs = sup * one.value;
    let tolerance = lhs.abs_error + sup * one.abs_error;
    Ok(LemmaCheck {
        lhs: lhs.value,
        rhs,
        tolerance,
        pass: lhs.value <= rhs + tolerance + 1e-12 * rhs,
        volume: None,
        p_minus: None,
        p_plus: None,
        sup: Some(sup),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerIdentityCheck {
    /// ‖|f|^s‖ in L^{p(·)/s}.
    pub lhs: f64,
    /// ‖f‖^s in L^{p(·)}.
    pub rhs: f64,
    pub relative_deviation: f64,
    pub relative_tolerance: f64,
}

/// ‖|f|^s‖_{L^{p(·)/s}} against ‖f‖^s_{L^{p(·)}}.
pub fn power_identity_check(f: &ScalarField3, p: &ExponentField, s: f64, domain: &Region, quad: &Quadrature) -> Result<PowerIdentityCheck> {
    for id in p.piece_ids() {
        let pc = p.piece(id);
        if !pc.is_infinite() && pc.inf() <= s {
            return Err(Error::ExponentOutOfRange(format!("power identity with s = {s} needs p⁻ > {s}, a piece has {}", pc.inf())));
        }
    }
    let lhs = luxemburg_norm(&f.abs_pow(s), &p.scaled(1.0 / s)?, domain, quad)?;
    let base = luxemburg_norm(f, p, domain, quad)?;
    let rhs = base.value.powf(s);
    if lhs.status == NormStatus::Zero && base.status == NormStatus::Zero {
        return Ok(PowerIdentityCheck { lhs: 0.0, rhs: 0.0, relative_deviation: 0.0, relative_tolerance: 0.0 });
    }
    let relative_deviation = (lhs.value - rhs).abs() / rhs;
    let relative_tolerance = lhs.abs_error / lhs.value + s * base.abs_error / base.value;
    Ok(PowerIdentityCheck { lhs: lhs.value, rhs, relative_deviation, relative_tolerance })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolderCheck {
    pub ratio: f64,
    pub numerator: f64,
    pub denominator: f64,
    /// 2 for two factors, 4 for three.
    pub threshold: f64,
    pub flagged: bool,
    /// Set when the denominator vanishes; the ratio is then reported as 0.
    pub zero: bool,
}

/// ‖Π fᵢ‖_{L^{p(·)}} / Π ‖fᵢ‖_{L^{qᵢ(·)}} under 1/p = Σ 1/qᵢ, with 2 or 3 factors.
pub fn holder_check(factors: &[(&ScalarField3, &ExponentField)], p: &ExponentField, domain: &Region, quad: &Quadrature) -> Result<HolderCheck> {
    let threshold = match factors.len() {
        2 => 2.0,
        3 => 4.0,
        n => return Err(Error::InvalidArgument(format!("Hölder check takes 2 or 3 factors, got {n}"))),
    };
    let probe = match (domain.envelope(), quad.truncation) {
        (Some(_), _) => domain.clone(),
        (None, Some(t)) => domain.clone().intersect(Region::ball(Point::zeros(), t)?),
        (None, None) => return Err(Error::UnboundedRegion(domain.to_string())),
    };
    let inv = |v: f64| if v.is_infinite() { 0.0 } else { 1.0 / v };
    for x in Quadrature::monte_carlo(4000, 0x401D).nodes(&probe, 0)?.points {
        let lhs = inv(p.evaluate(&x));
        let rhs: f64 = factors.iter().map(|(_, q)| inv(q.evaluate(&x))).sum();
        if (lhs - rhs).abs() > 1e-12 {
            return Err(Error::ExponentRelationViolated(format!(
                "1/p = {lhs} but Σ 1/qᵢ = {rhs} at ({}, {}, {})",
                x.x, x.y, x.z
            )));
        }
    }
    let product = factors[1..].iter().fold(factors[0].0.clone(), |acc, (f, _)| acc.mul(f));
    let numerator = luxemburg_norm(&product, p, domain, quad)?.value;
    let mut denominator = 1.0;
    for (k, (f, q)) in factors.iter().enumerate() {
        denominator *= luxemburg_norm(f, q, domain, &quad.with_seed_offset(k as u64 + 1))?.value;
    }
    if denominator == 0.0 {
        return Ok(HolderCheck { ratio: 0.0, numerator, denominator, threshold, flagged: false, zero: true });
    }
    let ratio = numerator / denominator;
    Ok(HolderCheck { ratio, numerator, denominator, threshold, flagged: ratio > threshold, zero: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Preset;
    use approx::assert_relative_eq;
    use num_rational::Rational64;

    fn ball(r: f64) -> Region {
        Region::ball(Point::zeros(), r).unwrap()
    }

    fn c(v: f64) -> ExponentField {
        ExponentField::constant(v).unwrap()
    }

    #[test]
    fn restriction_of_unit_function() {
        let q = Quadrature::stratified(100_000, 5, 32);
        let r = restriction_identity_check(&ScalarField3::constant(1.0), &c(3.0), &ball(1.0), &q).unwrap();
        assert!(r.within(2.0), "{r:?}");
        let z = restriction_identity_check(&ScalarField3::zero(), &c(3.0), &ball(1.0), &q).unwrap();
        assert_eq!(z.deviation, 0.0);
    }

    #[test]
    fn lemmas_on_simple_cases() {
        let q = Quadrature::radial(12, 12, 12);
        let l1 = lemma1_check(&c(3.0), &ball(1.0), &q).unwrap();
        assert!(l1.pass);
        assert_relative_eq!(l1.lhs, (4.0 * std::f64::consts::PI / 3.0).powf(1.0 / 3.0), max_relative = 1e-4);
        let f = ScalarField3::new("|x|", |x| x.norm());
        assert!(lemma2_check(&f, &c(3.0), &ball(1.0), &q).unwrap().pass);
        let k = lemma2_check(&ScalarField3::constant(2.5), &c(3.0), &ball(1.0), &q).unwrap();
        assert_relative_eq!(k.lhs, k.rhs, max_relative = 2e-4);
        let z = lemma2_check(&ScalarField3::zero(), &c(3.0), &ball(1.0), &q).unwrap();
        assert_eq!((z.lhs, z.rhs), (0.0, 0.0));
        let t1 = Preset::t1(Rational64::from_integer(5), Rational64::from_integer(4)).unwrap().field().unwrap();
        let sq = Quadrature::stratified(100_000, 1, 32);
        assert!(lemma1_check(&t1, &Region::annulus(2.0, 4.0).unwrap(), &sq).unwrap().pass);
    }

    #[test]
    fn power_identity() {
        let q = Quadrature::radial(64, 16, 16).with_truncation(8.0);
        let g = power_identity_check(&ScalarField3::gaussian(), &c(4.0), 2.0, &Region::Whole, &q).unwrap();
        assert!(g.relative_deviation <= 1e-3, "{g:?}");
        let one = power_identity_check(&ScalarField3::constant(1.0), &c(6.0), 3.0, &ball(1.0), &Quadrature::radial(8, 8, 8)).unwrap();
        assert!(one.relative_deviation <= 1e-3);
        assert!(matches!(
            power_identity_check(&ScalarField3::constant(1.0), &c(3.0), 3.0, &ball(1.0), &q),
            Err(Error::ExponentOutOfRange(_))
        ));
    }

    #[test]
    fn holder_ratios() {
        let q = Quadrature::radial(16, 16, 16);
        let one = ScalarField3::constant(1.0);
        let h = holder_check(&[(&one, &c(4.0)), (&one, &c(4.0))], &c(2.0), &ball(1.0), &q).unwrap();
        assert_relative_eq!(h.ratio, 1.0, max_relative = 1e-3);
        let bump = ScalarField3::new("bump", |x| (1.0 - x.norm_squared()).max(0.0).powi(3));
        let h = holder_check(&[(&bump, &c(4.0)), (&bump, &c(4.0))], &c(2.0), &ball(1.0), &q).unwrap();
        assert!(h.ratio <= 1.0 + 1e-3 && !h.flagged);
        let z = holder_check(&[(&one, &c(4.0)), (&ScalarField3::zero(), &c(4.0))], &c(2.0), &ball(1.0), &q).unwrap();
        assert!(z.zero && z.ratio == 0.0);
        assert!(matches!(
            holder_check(&[(&one, &c(4.0)), (&one, &c(3.0))], &c(2.0), &ball(1.0), &q),
            Err(Error::ExponentRelationViolated(_))
        ));
    }
}

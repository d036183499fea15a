//! End-to-end run: hypotheses, energy terms on a grid, slopes against certificates.

use num_traits::ToPrimitive;
use serde::Serialize;

use super::{alpha, beta, cutoff_norm_decay, predicted_exponent, CutoffKind, DecayFit, ExponentCertificate, Term};
use crate::cutoff::RadialCutoff;
use crate::exponents::Preset;
use crate::fields::{membership_scan, MembershipScan, ScalarField3, VectorField3, Verdict};
use crate::quadrature::Quadrature;
use crate::{Error, Result};

/// Fitted slopes may exceed the certified exponent by this much.
pub const SLOPE_SLACK: f64 = 0.15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    HypothesesViolated,
    DecayConfirmed,
    Inconclusive,
}

impl std::fmt::Display for Tier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tier::HypothesesViolated => "hypotheses-violated",
            Tier::DecayConfirmed => "decay-confirmed",
            Tier::Inconclusive => "inconclusive",
        })
    }
}

/// One row of the per-R table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridRow {
    pub radius: f64,
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta: f64,
    pub lap_norm: f64,
    pub grad_norm: f64,
    /// Largest reported absolute error among the row's quantities.
    pub errors: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub preset: String,
    pub velocity: String,
    pub pressure: String,
    pub velocity_scan: MembershipScan,
    pub pressure_scan: MembershipScan,
    pub rows: Vec<GridRow>,
    pub alpha_fit: Option<DecayFit>,
    /// Fit of β₁/2 + β₂, the majorant of |β|.
    pub beta_fit: Option<DecayFit>,
    pub lap_fit: DecayFit,
    pub grad_fit: DecayFit,
    pub alpha_certificate: ExponentCertificate,
    pub beta_certificate: ExponentCertificate,
    pub tier: Tier,
    pub conclusion: String,
}

/// Fit, or None when every value is below the fit floor (identically zero terms).
fn fit_or_zero(points: &[(f64, f64)]) -> Result<Option<DecayFit>> {
    match DecayFit::fit(points) {
        Ok(f) => Ok(Some(f)),
        Err(Error::InsufficientPoints { got: 0, .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn liouville_pipeline(
    preset: &Preset,
    u: &VectorField3,
    p: &ScalarField3,
    radii: &[f64],
    quad: &Quadrature,
    slack: f64,
) -> Result<PipelineReport> {
    preset.validate()?;
    let field = preset.field()?;
    let velocity_scan = membership_scan(&u.magnitude(), &field, radii, quad)?;
    let pressure_scan = membership_scan(&p.map(format!("|{}|", p.name()), f64::abs), &field.scaled(0.5)?, radii, &quad.with_seed_offset(7))?;

    let lap = cutoff_norm_decay(CutoffKind::Laplacian, &field.holder_conjugate(2)?, radii, quad)?;
    let grad = cutoff_norm_decay(CutoffKind::Gradient, &field.holder_conjugate(3)?, radii, quad)?;

    let mut rows = Vec::with_capacity(radii.len());
    for (k, &r) in radii.iter().enumerate() {
        let c = RadialCutoff::new(r)?;
        let q = quad.with_seed_offset(100 + k as u64);
        let a = alpha(u, &c, &q)?;
        let b = beta(u, p, &c, &q)?;
        let (ln, gn) = (lap.norms[k].1, grad.norms[k].1);
        let errors = [a.error, b.beta1.error, b.beta2.error, b.beta.error, ln.abs_error, gn.abs_error]
            .into_iter()
            .fold(0.0, f64::max);
        rows.push(GridRow {
            radius: r,
            alpha: a.value,
            beta1: b.beta1.value,
            beta2: b.beta2.value,
            beta: b.beta.value,
            lap_norm: ln.value,
            grad_norm: gn.value,
            errors,
        });
    }
    let alpha_fit = fit_or_zero(&rows.iter().map(|r| (r.radius, r.alpha.abs())).collect::<Vec<_>>())?;
    let beta_fit = fit_or_zero(&rows.iter().map(|r| (r.radius, r.beta1 / 2.0 + r.beta2)).collect::<Vec<_>>())?;

    let alpha_certificate = predicted_exponent(preset, Term::Alpha);
    let beta_certificate = predicted_exponent(preset, Term::Beta);
    let bound = |c: &ExponentCertificate| c.worst_exponent().to_f64().unwrap_or(f64::NAN) + slack;
    let slope_ok = |f: &Option<DecayFit>, c: &ExponentCertificate| f.as_ref().is_none_or(|f| f.slope <= bound(c));

    let violated = velocity_scan.verdict == Verdict::Diverging || pressure_scan.verdict == Verdict::Diverging;
    let tier = if violated {
        Tier::HypothesesViolated
    } else if alpha_certificate.overall
        && beta_certificate.overall
        && slope_ok(&alpha_fit, &alpha_certificate)
        && slope_ok(&beta_fit, &beta_certificate)
    {
        Tier::DecayConfirmed
    } else {
        Tier::Inconclusive
    };
    let conclusion = match tier {
        Tier::HypothesesViolated => format!(
            "membership scan diverges (velocity {}, pressure {}); the theorem does not apply",
            velocity_scan.verdict, pressure_scan.verdict
        ),
        Tier::DecayConfirmed => "α(R), β(R) → 0, so ∫|∇⊗u|² = 0 and u is constant; Sobolev embedding with u in L^{p(·)} gives u ≡ 0".to_string(),
        Tier::Inconclusive => "hypotheses hold on the scan but the fitted decay does not match the certificate".to_string(),
    };
    Ok(PipelineReport {
        preset: super::describe(preset),
        velocity: u.name().to_string(),
        pressure: p.name().to_string(),
        velocity_scan,
        pressure_scan,
        rows,
        alpha_fit,
        beta_fit,
        lap_fit: lap.fit,
        grad_fit: grad.fit,
        alpha_certificate,
        beta_certificate,
        tier,
        conclusion,
    })
}

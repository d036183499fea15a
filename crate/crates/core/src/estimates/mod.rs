//! Localized energy terms α(R), β(R), cutoff-norm decay fits and the exact
//! exponent certificates they are compared against.
//!
//! With θ_R the cutoff, a smooth divergence-free solution satisfies
//! ∫θ_R|∇⊗u|² = α(R) + β(R), where α = ∫Δθ_R|u|²/2 and
//! β = ∫∇θ_R·((|u|²/2 + P)u). Both integrands live on C(R/2, R).

mod certificate;
mod pipeline;

use rayon::prelude::*;
use serde::Serialize;

pub use certificate::{
    admissible_upper_bound, describe, predicted_exponent, CertificateEntry, ExponentCertificate, InnerKind, Term,
};
pub use pipeline::{liouville_pipeline, GridRow, PipelineReport, Tier, SLOPE_SLACK};

use crate::cutoff::RadialCutoff;
use crate::exponents::{best_rational, ExponentField};
use crate::fields::{ns_residual, ScalarField3, VectorField3};
use crate::norms::{luxemburg_norm, NormResult};
use crate::quadrature::{Estimate, Quadrature};
use crate::regions::Region;
use crate::{Error, Point, Result};

/// Values below this are treated as exact zeros by the slope fit.
pub const FIT_FLOOR: f64 = 1e-12;

/// Least-squares line through (log R, log value).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

impl DecayFit {
    pub fn fit(points: &[(f64, f64)]) -> Result<DecayFit> {
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidArgument("decay fit needs strictly increasing radii".into()));
        }
        let kept: Vec<(f64, f64)> = points.iter().copied().filter(|(_, v)| *v >= FIT_FLOOR && v.is_finite()).collect();
        if kept.len() < 3 {
            return Err(Error::InsufficientPoints { needed: 3, got: kept.len() });
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = kept.iter().map(|(r, v)| (r.ln(), v.ln())).unzip();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let max_residual = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - intercept - slope * x).abs())
            .fold(0.0, f64::max);
        Ok(DecayFit { points: kept, slope, intercept, max_residual })
    }
}

/// start, start·factor, …, `count` radii.
pub fn geometric_grid(start: f64, factor: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start * factor.powi(k as i32)).collect()
}

fn support(cutoff: &RadialCutoff) -> Result<Region> {
    Region::annulus(cutoff.radius() / 2.0, cutoff.radius())
}

/// α(R) = ∫ Δθ_R |u|²/2.
pub fn alpha(u: &VectorField3, cutoff: &RadialCutoff, quad: &Quadrature) -> Result<Estimate> {
    quad.integrate(&support(cutoff)?, 0xA1, |x| cutoff.laplacian(x) * u.value(x).norm_squared() / 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaTerms {
    /// ∫|∇θ_R||u|³.
    pub beta1: Estimate,
    /// ∫|∇θ_R||P||u|.
    pub beta2: Estimate,
    /// ∫∇θ_R·((|u|²/2 + P)u).
    pub beta: Estimate,
}

impl BetaTerms {
    /// β₁/2 + β₂, the majorant of |β|.
    pub fn majorant(&self) -> f64 {
        self.beta1.value / 2.0 + self.beta2.value
    }
}

pub fn beta(u: &VectorField3, p: &ScalarField3, cutoff: &RadialCutoff, quad: &Quadrature) -> Result<BetaTerms> {
    let nodes = quad.nodes(&support(cutoff)?, 0xB1)?;
    let eval = |pts: &[Point]| -> Vec<[f64; 3]> {
        pts.par_iter()
            .map(|x| {
                let g = cutoff.grad(x);
                let v = u.value(x);
                let pr = p.value(x);
                let n = v.norm();
                [g.norm() * n * n * n, g.norm() * pr.abs() * n, g.dot(&(v * (n * n / 2.0 + pr)))]
            })
            .collect()
    };
    let fine = eval(&nodes.points);
    let coarse = nodes.coarse.as_ref().map(|c| eval(&c.points));
    let one = |k: usize| {
        let vals: Vec<f64> = fine.iter().map(|t| t[k]).collect();
        nodes.estimate(&vals, |i| coarse.as_ref().map(|c| c[i][k]))
    };
    Ok(BetaTerms { beta1: one(0), beta2: one(1), beta: one(2) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyCheck {
    pub radius: f64,
    /// ∫θ_R|∇⊗u|².
    pub lhs: Estimate,
    pub alpha: Estimate,
    pub beta: Estimate,
    pub rhs: f64,
    pub relative_gap: f64,
    /// Largest |Δu − (u·∇)u − ∇P| over the probe points.
    pub max_residual: f64,
    /// Verdict, withheld (None) when (u, P) is not a solution.
    pub pass: Option<bool>,
}

pub const ENERGY_GAP_TOL: f64 = 1e-2;
pub const RESIDUAL_TOL: f64 = 1e-8;

pub fn energy_identity_check(u: &VectorField3, p: &ScalarField3, cutoff: &RadialCutoff, quad: &Quadrature) -> Result<EnergyCheck> {
    let r = cutoff.radius();
    let ball = Region::ball(Point::zeros(), r)?;
    let lhs = quad.integrate(&ball, 0xE1, |x| cutoff.value(x) * u.grad_norm_sq(x))?;
    let a = alpha(u, cutoff, quad)?;
    let b = beta(u, p, cutoff, quad)?.beta;
    let rhs = a.value + b.value;
    let relative_gap = if lhs.value == 0.0 && rhs == 0.0 { 0.0 } else { (lhs.value - rhs).abs() / lhs.value.abs().max(rhs.abs()) };
    let probes = ball.sample(256, 0xE2)?;
    let max_residual = probes.iter().map(|x| ns_residual(u, p, x).norm()).fold(0.0, f64::max);
    let pass = (max_residual <= RESIDUAL_TOL).then_some(relative_gap <= ENERGY_GAP_TOL);
    Ok(EnergyCheck { radius: r, lhs, alpha: a, beta: b, rhs, relative_gap, max_residual, pass })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffKind {
    Laplacian,
    Gradient,
}

impl CutoffKind {
    /// Conjugate numerator paired with the kind: 2 for Δθ (α), 3 for ∇θ (β).
    pub fn conjugate_numerator(self) -> u32 {
        match self {
            CutoffKind::Laplacian => 2,
            CutoffKind::Gradient => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutoffDecay {
    pub kind: CutoffKind,
    pub norms: Vec<(f64, NormResult)>,
    pub fit: DecayFit,
    /// Norms over the part of C(R/2, R) where each piece of `conj` is in force.
    /// None when the piece never meets the annuli or has too few nonzero norms.
    pub piece_fits: Vec<(String, Option<DecayFit>)>,
}

fn cutoff_magnitude(kind: CutoffKind, c: RadialCutoff) -> ScalarField3 {
    match kind {
        CutoffKind::Laplacian => ScalarField3::new("|Δθ_R|", move |x| c.laplacian(x).abs()),
        CutoffKind::Gradient => ScalarField3::new("|∇θ_R|", move |x| c.grad(x).norm()),
    }
}

/// ‖Δθ_R‖ or ‖∇θ_R‖ in L^{conj(·)}(C(R/2, R)) for each R and their log-log slope.
pub fn cutoff_norm_decay(kind: CutoffKind, conj: &ExponentField, radii: &[f64], quad: &Quadrature) -> Result<CutoffDecay> {
    if radii.len() < 4 {
        return Err(Error::InvalidArgument(format!("decay grid needs ≥ 4 radii, got {}", radii.len())));
    }
    let mut norms = Vec::with_capacity(radii.len());
    let mut per_piece: Vec<(String, Vec<(f64, f64)>)> =
        conj.piece_ids().map(|id| (piece_label(conj, id), Vec::new())).collect();
    for (k, &r) in radii.iter().enumerate() {
        let c = RadialCutoff::new(r)?;
        let f = cutoff_magnitude(kind, c);
        let dom = support(&c)?;
        let q = quad.with_seed_offset(k as u64);
        norms.push((r, luxemburg_norm(&f, conj, &dom, &q)?));
        let candidates = conj.candidate_pieces(&dom);
        for (slot, id) in conj.piece_ids().enumerate() {
            let v = if candidates.contains(&id) {
                luxemburg_norm(&f, conj, &conj.piece_domain(id, &dom), &q)?.value
            } else {
                0.0
            };
            per_piece[slot].1.push((r, v));
        }
    }
    let fit = DecayFit::fit(&norms.iter().map(|(r, n)| (*r, n.value)).collect::<Vec<_>>())?;
    let piece_fits = per_piece.into_iter().map(|(name, pts)| (name, DecayFit::fit(&pts).ok())).collect();
    Ok(CutoffDecay { kind, norms, fit, piece_fits })
}

fn piece_label(p: &ExponentField, id: crate::exponents::PieceId) -> String {
    match id {
        crate::exponents::PieceId::Listed(i) => p.pieces()[i].0.to_string(),
        crate::exponents::PieceId::Default => "outside".to_string(),
    }
}

/// Volumes of C(R/2, R) ∩ region over the radii (value, error) and their log-log fit.
pub fn volume_growth(region: &Region, radii: &[f64], quad: &Quadrature) -> Result<(Vec<(f64, Estimate)>, DecayFit)> {
    let mut rows = Vec::with_capacity(radii.len());
    for (k, &r) in radii.iter().enumerate() {
        let part = Region::annulus(r / 2.0, r)?.intersect(region.clone());
        rows.push((r, quad.with_seed_offset(k as u64).integrate(&part, 0x70, |_| 1.0)?));
    }
    let fit = DecayFit::fit(&rows.iter().map(|(r, v)| (*r, v.value)).collect::<Vec<_>>())?;
    Ok((rows, fit))
}

/// Measured growth exponent rounded to the nearest fraction with denominator ≤ 8.
pub fn rounded_growth(fit: &DecayFit) -> num_rational::Rational64 {
    best_rational(fit.slope, 8)
}

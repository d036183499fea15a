//! Subsets of ℝ³ used by the localized energy estimates: balls, the annulus
//! C(R/2, R), the cylinder about the x₁-axis, the two cusp families and their
//! truncations, plus boolean combinations.
//!
//! Cusp profiles are radii: the power cusp is `√(x₂²+x₃²) ≤ x₁^γ` and the
//! shrinking cusp is `√(x₂²+x₃²) ≤ x₁^(−σ/2)`, both for `x₁ > 0`. With these
//! profiles the truncated solids have volumes `π R^(2γ+1)/(2γ+1)` and
//! `π R^(1−σ)/(1−σ)`, which are the growth rates the decay estimates consume.
//!
//! All sets are closed: boundary points are members.

mod envelope;
pub mod sampling;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use envelope::{AxialProfile, Envelope};

use crate::{Error, Point, Result};

/// Default Monte Carlo sample count for volumes.
pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;
/// Default number of x₁-strata for stratified estimates.
pub const DEFAULT_STRATA: usize = 64;

/// Profile of a cusp about the positive x₁-axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CuspProfile {
    /// Radius x₁^γ, γ ∈ (0, 1).
    Power { gamma: f64 },
    /// Radius x₁^(−σ/2), σ ∈ (0, 1).
    Shrink { sigma: f64 },
}

impl CuspProfile {
    /// Exponent e in radius = x₁^e.
    pub fn radius_exponent(&self) -> f64 {
        match *self {
            CuspProfile::Power { gamma } => gamma,
            CuspProfile::Shrink { sigma } => -0.5 * sigma,
        }
    }

    /// Growth exponent d of the truncated solid: |cusp ∩ {x₁ < R}| = C R^d.
    pub fn growth_exponent(&self) -> f64 {
        2.0 * self.radius_exponent() + 1.0
    }

    fn contains(&self, x: &Point) -> bool {
        x.x > 0.0 && x.y * x.y + x.z * x.z <= x.x.powf(2.0 * self.radius_exponent())
    }

    fn validate(&self) -> Result<()> {
        let (name, v) = match *self {
            CuspProfile::Power { gamma } => ("gamma", gamma),
            CuspProfile::Shrink { sigma } => ("sigma", sigma),
        };
        if v > 0.0 && v < 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidRegion(format!("cusp {name} = {v} must lie in (0, 1)")))
        }
    }
}

/// Descriptor of a subset of ℝ³.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// All of ℝ³.
    Whole,
    Ball { center: [f64; 3], radius: f64 },
    /// Origin-centred closed shell `inner ≤ |x| ≤ outer`.
    Annulus { inner: f64, outer: f64 },
    /// Radius-1 cylinder about the x₁-axis.
    Cylinder,
    PowerCusp { gamma: f64 },
    ShrinkCusp { sigma: f64 },
    /// Cylinder piece `|x₁| ≤ length`.
    HalfCylinderLength { length: f64 },
    /// Cusp piece `0 < x₁ ≤ length`.
    CuspTrunc { cusp: CuspProfile, length: f64 },
    Complement(Box<Region>),
    Intersect(Box<Region>, Box<Region>),
    Diff(Box<Region>, Box<Region>),
}

/// How to compute a volume.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VolumeMethod {
    Analytic,
    MonteCarlo { samples: usize, seed: u64 },
    /// Monte Carlo with the envelope's first coordinate (x₁ for axial
    /// envelopes) split into equal strata.
    Stratified { samples: usize, seed: u64, strata: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_error: f64,
}

impl Region {
    pub fn ball(center: Point, radius: f64) -> Result<Region> {
        let r = Region::Ball { center: [center.x, center.y, center.z], radius };
        r.validate()?;
        Ok(r)
    }

    pub fn annulus(inner: f64, outer: f64) -> Result<Region> {
        let r = Region::Annulus { inner, outer };
        r.validate()?;
        Ok(r)
    }

    pub fn power_cusp(gamma: f64) -> Result<Region> {
        let r = Region::PowerCusp { gamma };
        r.validate()?;
        Ok(r)
    }

    pub fn shrink_cusp(sigma: f64) -> Result<Region> {
        let r = Region::ShrinkCusp { sigma };
        r.validate()?;
        Ok(r)
    }

    /// The set 𝒜 = {x₂²+x₃² ≤ 1, |x₁| ≤ length}.
    pub fn half_cylinder(length: f64) -> Result<Region> {
        let r = Region::HalfCylinderLength { length };
        r.validate()?;
        Ok(r)
    }

    /// The sets ℬ (power profile) and 𝒟 (shrinking profile).
    pub fn cusp_trunc(cusp: CuspProfile, length: f64) -> Result<Region> {
        let r = Region::CuspTrunc { cusp, length };
        r.validate()?;
        Ok(r)
    }

    pub fn complement(self) -> Region {
        Region::Complement(Box::new(self))
    }

    pub fn intersect(self, other: Region) -> Region {
        Region::Intersect(Box::new(self), Box::new(other))
    }

    pub fn minus(self, other: Region) -> Region {
        Region::Diff(Box::new(self), Box::new(other))
    }

    /// Checks the parameter invariants of every node of the descriptor.
    pub fn validate(&self) -> Result<()> {
        let finite_pos = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidRegion(format!("{name} = {v} must be finite and positive")))
            }
        };
        match self {
            Region::Whole | Region::Cylinder => Ok(()),
            Region::Ball { center, radius } => {
                if center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidRegion("ball center must be finite".into()));
                }
                finite_pos("ball radius", *radius)
            }
            Region::Annulus { inner, outer } => {
                if *inner >= 0.0 && inner < outer && outer.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidRegion(format!(
                        "annulus needs 0 ≤ inner < outer, got inner = {inner}, outer = {outer}"
                    )))
                }
            }
            Region::PowerCusp { gamma } => CuspProfile::Power { gamma: *gamma }.validate(),
            Region::ShrinkCusp { sigma } => CuspProfile::Shrink { sigma: *sigma }.validate(),
            Region::HalfCylinderLength { length } => finite_pos("cylinder length", *length),
            Region::CuspTrunc { cusp, length } => {
                cusp.validate()?;
                finite_pos("cusp length", *length)
            }
            Region::Complement(a) => a.validate(),
            Region::Intersect(a, b) | Region::Diff(a, b) => {
                a.validate()?;
                b.validate()
            }
        }
    }

    /// Closed-set membership.
    pub fn contains(&self, x: &Point) -> bool {
        match self {
            Region::Whole => true,
            Region::Ball { center, radius } => {
                (x - Point::new(center[0], center[1], center[2])).norm() <= *radius
            }
            Region::Annulus { inner, outer } => {
                let r = x.norm();
                *inner <= r && r <= *outer
            }
            Region::Cylinder => x.y * x.y + x.z * x.z <= 1.0,
            Region::PowerCusp { gamma } => CuspProfile::Power { gamma: *gamma }.contains(x),
            Region::ShrinkCusp { sigma } => CuspProfile::Shrink { sigma: *sigma }.contains(x),
            Region::HalfCylinderLength { length } => {
                x.y * x.y + x.z * x.z <= 1.0 && x.x.abs() <= *length
            }
            Region::CuspTrunc { cusp, length } => cusp.contains(x) && x.x <= *length,
            Region::Complement(a) => !a.contains(x),
            Region::Intersect(a, b) => a.contains(x) && b.contains(x),
            Region::Diff(a, b) => a.contains(x) && !b.contains(x),
        }
    }

    /// Axial superset `{x₁ ∈ [lo, hi], ρ ≤ profile(x₁)}`, possibly of infinite length.
    fn axial_hull(&self) -> Option<(f64, f64, AxialProfile)> {
        match self {
            Region::Cylinder => Some((f64::NEG_INFINITY, f64::INFINITY, AxialProfile::Constant(1.0))),
            Region::PowerCusp { gamma } => Some((0.0, f64::INFINITY, AxialProfile::Power(*gamma))),
            Region::ShrinkCusp { sigma } => {
                Some((0.0, f64::INFINITY, AxialProfile::Power(-0.5 * sigma)))
            }
            Region::HalfCylinderLength { length } => {
                Some((-length, *length, AxialProfile::Constant(1.0)))
            }
            Region::CuspTrunc { cusp, length } => {
                Some((0.0, *length, AxialProfile::Power(cusp.radius_exponent())))
            }
            Region::Intersect(a, b) => {
                let clip = |h: (f64, f64, AxialProfile), other: &Region| {
                    let (lo, hi) = other.x1_range();
                    (h.0.max(lo), h.1.min(hi), h.2)
                };
                match (a.axial_hull(), b.axial_hull()) {
                    (Some(h), _) => Some(clip(h, b)),
                    (None, Some(h)) => Some(clip(h, a)),
                    _ => None,
                }
            }
            Region::Diff(a, _) => a.axial_hull(),
            _ => None,
        }
    }

    /// Interval of x₁ the region can occupy (infinite if unknown).
    fn x1_range(&self) -> (f64, f64) {
        if let Some(env) = self.envelope() {
            return env.x1_range();
        }
        if let Some((lo, hi, _)) = self.axial_hull() {
            return (lo, hi);
        }
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    /// Smallest closed-form superset that can be sampled uniformly, if any.
    pub fn envelope(&self) -> Option<Envelope> {
        match self {
            Region::Ball { center, radius } => Some(Envelope::Shell {
                center: Point::new(center[0], center[1], center[2]),
                inner: 0.0,
                outer: *radius,
            }),
            Region::Annulus { inner, outer } => {
                Some(Envelope::Shell { center: Point::zeros(), inner: *inner, outer: *outer })
            }
            Region::HalfCylinderLength { .. } | Region::CuspTrunc { .. } => {
                let (lo, hi, profile) = self.axial_hull()?;
                Some(Envelope::Axial { x1_lo: lo, x1_hi: hi, profile })
            }
            Region::Intersect(a, b) => {
                let mut candidates: Vec<Envelope> = Vec::new();
                candidates.extend(a.envelope());
                candidates.extend(b.envelope());
                if let (
                    Some(Envelope::Shell { center: c1, inner: i1, outer: o1 }),
                    Some(Envelope::Shell { center: c2, inner: i2, outer: o2 }),
                ) = (a.envelope(), b.envelope())
                {
                    if c1 == c2 {
                        let inner = i1.max(i2);
                        candidates.push(Envelope::Shell { center: c1, inner, outer: o1.min(o2).max(inner) });
                    }
                }
                if let Some((lo, hi, profile)) = self.axial_hull() {
                    if lo.is_finite() && hi.is_finite() {
                        candidates.push(Envelope::Axial { x1_lo: lo, x1_hi: hi.max(lo), profile });
                    }
                }
                candidates
                    .into_iter()
                    .min_by(|x, y| x.volume().total_cmp(&y.volume()))
            }
            Region::Diff(a, b) => match (a.envelope(), b.as_ref()) {
                // a shell minus a concentric ball is a thicker-cored shell
                (Some(Envelope::Shell { center, inner, outer }), Region::Ball { center: bc, radius })
                    if center == Point::new(bc[0], bc[1], bc[2]) =>
                {
                    let inner = inner.max(*radius).min(outer);
                    Some(Envelope::Shell { center, inner, outer })
                }
                (env, _) => env,
            },
            _ => None,
        }
    }

    /// Origin-centred shell containing the region, for radial product rules.
    pub fn bounding_shell(&self) -> Option<(f64, f64)> {
        match self {
            Region::Ball { center, radius } => {
                let c = Point::new(center[0], center[1], center[2]).norm();
                Some(((c - radius).max(0.0), c + radius))
            }
            Region::Annulus { inner, outer } => Some((*inner, *outer)),
            Region::HalfCylinderLength { length } => Some((0.0, (length * length + 1.0).sqrt())),
            Region::Intersect(a, b) => match (a.bounding_shell(), b.bounding_shell()) {
                (Some(x), Some(y)) => Some((x.0.max(y.0), x.1.min(y.1).max(x.0.max(y.0)))),
                (Some(x), None) | (None, Some(x)) => Some(x),
                (None, None) => None,
            },
            Region::Diff(a, _) => a.bounding_shell(),
            _ => None,
        }
    }

    /// Whether the region is known, from its structure alone, to lie inside `other`.
    pub fn is_structural_subset_of(&self, other: &Region) -> bool {
        if self == other || matches!(other, Region::Whole) {
            return true;
        }
        match self {
            Region::Intersect(a, b) => {
                a.is_structural_subset_of(other) || b.is_structural_subset_of(other)
            }
            Region::Diff(a, _) => a.is_structural_subset_of(other),
            Region::HalfCylinderLength { .. } => matches!(other, Region::Cylinder),
            Region::CuspTrunc { cusp, .. } => match (cusp, other) {
                (CuspProfile::Power { gamma }, Region::PowerCusp { gamma: g }) => gamma == g,
                (CuspProfile::Shrink { sigma }, Region::ShrinkCusp { sigma: s }) => sigma == s,
                _ => false,
            },
            _ => false,
        }
    }

    /// Whether the region is known, from its structure alone, to miss `other`.
    pub fn is_structurally_disjoint_from(&self, other: &Region) -> bool {
        match self {
            Region::Complement(a) => other.is_structural_subset_of(a),
            Region::Diff(a, b) => {
                other.is_structural_subset_of(b) || a.is_structurally_disjoint_from(other)
            }
            Region::Intersect(a, b) => {
                a.is_structurally_disjoint_from(other) || b.is_structurally_disjoint_from(other)
            }
            _ => match other {
                Region::Complement(b) => self.is_structural_subset_of(b),
                Region::Diff(_, b) => self.is_structural_subset_of(b),
                _ => false,
            },
        }
    }

    /// Volume of the region.
    pub fn volume(&self, method: VolumeMethod) -> Result<VolumeEstimate> {
        match method {
            VolumeMethod::Analytic => self.analytic_volume().map(|v| VolumeEstimate { value: v, std_error: 0.0 }),
            VolumeMethod::MonteCarlo { samples, seed } => self.mc_volume(samples, seed, 1),
            VolumeMethod::Stratified { samples, seed, strata } => self.mc_volume(samples, seed, strata),
        }
    }

    fn analytic_volume(&self) -> Result<f64> {
        match self {
            Region::Ball { radius, .. } => Ok(4.0 / 3.0 * PI * radius.powi(3)),
            Region::Annulus { inner, outer } => Ok(4.0 / 3.0 * PI * (outer.powi(3) - inner.powi(3))),
            Region::HalfCylinderLength { length } => Ok(2.0 * PI * length),
            Region::CuspTrunc { cusp, length } => {
                let d = cusp.growth_exponent();
                Ok(PI * length.powf(d) / d)
            }
            Region::Whole
            | Region::Cylinder
            | Region::PowerCusp { .. }
            | Region::ShrinkCusp { .. }
            | Region::Complement(_) => Err(Error::UnboundedRegion(self.to_string())),
            Region::Intersect(..) | Region::Diff(..) => Err(Error::AnalyticUnavailable(self.to_string())),
        }
    }

    fn mc_volume(&self, samples: usize, seed: u64, strata: usize) -> Result<VolumeEstimate> {
        let env = self.envelope().ok_or_else(|| Error::UnboundedRegion(self.to_string()))?;
        if samples == 0 {
            return Err(Error::InvalidArgument("Monte Carlo volume needs samples > 0".into()));
        }
        let v_env = env.volume();
        let m = strata.clamp(1, samples);
        let u = sampling::uniform_triples(samples, seed, 0, Some(m));
        let mut hits = vec![0usize; m];
        let mut counts = vec![0usize; m];
        for (i, t) in u.iter().enumerate() {
            let s = sampling::stratum_of(i, samples, m);
            counts[s] += 1;
            if self.contains(&env.map_uniforms(*t)) {
                hits[s] += 1;
            }
        }
        // Each stratum carries weight 1/m of the envelope.
        let mut value = 0.0;
        let mut var = 0.0;
        for s in 0..m {
            let n = counts[s] as f64;
            let p = hits[s] as f64 / n;
            value += v_env * p / m as f64;
            var += (v_env / m as f64).powi(2) * p * (1.0 - p) / n;
        }
        Ok(VolumeEstimate { value, std_error: var.sqrt() })
    }

    /// `n` points uniformly distributed in the region, deterministic for a seed.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<Point>> {
        let env = self.envelope().ok_or_else(|| Error::UnboundedRegion(self.to_string()))?;
        let mut out = Vec::with_capacity(n);
        let mut proposed = 0usize;
        let mut wave: u32 = 0;
        let cap = 1_000 * n.max(1) + 10_000_000;
        while out.len() < n {
            if proposed > cap {
                return Err(Error::InvalidRegion(format!(
                    "rejection sampling of {self} accepted {} of {proposed} proposals",
                    out.len()
                )));
            }
            let rate = if proposed == 0 { 1.0 } else { (out.len() as f64 / proposed as f64).max(1e-4) };
            let batch = (((n - out.len()) as f64 / rate * 1.2) as usize).clamp(4096, 4_000_000);
            let u = sampling::uniform_triples(batch, seed, wave, None);
            proposed += batch;
            wave += 1;
            for t in u {
                let x = env.map_uniforms(t);
                if self.contains(&x) {
                    out.push(x);
                    if out.len() == n {
                        break;
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Whole => write!(f, "R3"),
            Region::Ball { center, radius } => {
                write!(f, "Ball(({}, {}, {}), {radius})", center[0], center[1], center[2])
            }
            Region::Annulus { inner, outer } => write!(f, "Annulus({inner}, {outer})"),
            Region::Cylinder => write!(f, "Cylinder"),
            Region::PowerCusp { gamma } => write!(f, "PowerCusp({gamma})"),
            Region::ShrinkCusp { sigma } => write!(f, "ShrinkCusp({sigma})"),
            Region::HalfCylinderLength { length } => write!(f, "HalfCylinderLength({length})"),
            Region::CuspTrunc { cusp: CuspProfile::Power { gamma }, length } => {
                write!(f, "CuspTruncPower({gamma}, {length})")
            }
            Region::CuspTrunc { cusp: CuspProfile::Shrink { sigma }, length } => {
                write!(f, "CuspTruncShrink({sigma}, {length})")
            }
            Region::Complement(a) => write!(f, "¬({a})"),
            Region::Intersect(a, b) => write!(f, "({a} ∩ {b})"),
            Region::Diff(a, b) => write!(f, "({a} ∖ {b})"),
        }
    }
}

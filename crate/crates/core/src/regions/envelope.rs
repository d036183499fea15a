use std::f64::consts::PI;

use crate::Point;

/// Radius of an axial envelope as a function of x₁.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AxialProfile {
    /// Constant radius about the x₁-axis.
    Constant(f64),
    /// Radius x₁^exponent for x₁ > 0. The exponent may be negative but must
    /// exceed −1/2 so that the cross-section area is integrable at 0.
    Power(f64),
}

impl AxialProfile {
    pub fn radius(&self, x1: f64) -> f64 {
        match *self {
            AxialProfile::Constant(r) => r,
            AxialProfile::Power(e) => x1.powf(e),
        }
    }
}

/// A set that contains a region and can be sampled uniformly in closed form.
///
/// Every finite-volume region is sampled by rejection from one of these.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Envelope {
    Shell { center: Point, inner: f64, outer: f64 },
    Box { lo: Point, hi: Point },
    Axial { x1_lo: f64, x1_hi: f64, profile: AxialProfile },
}

impl Envelope {
    pub fn volume(&self) -> f64 {
        match *self {
            Envelope::Shell { inner, outer, .. } => 4.0 / 3.0 * PI * (outer.powi(3) - inner.powi(3)),
            Envelope::Box { lo, hi } => {
                let d = hi - lo;
                d.x.max(0.0) * d.y.max(0.0) * d.z.max(0.0)
            }
            Envelope::Axial { x1_lo, x1_hi, profile } => {
                if x1_hi <= x1_lo {
                    return 0.0;
                }
                match profile {
                    AxialProfile::Constant(r) => PI * r * r * (x1_hi - x1_lo),
                    AxialProfile::Power(e) => {
                        let k = 2.0 * e + 1.0;
                        PI * (x1_hi.powf(k) - x1_lo.max(0.0).powf(k)) / k
                    }
                }
            }
        }
    }

    /// Closed x₁-interval covered by the envelope.
    pub fn x1_range(&self) -> (f64, f64) {
        match *self {
            Envelope::Shell { center, outer, .. } => (center.x - outer, center.x + outer),
            Envelope::Box { lo, hi } => (lo.x, hi.x),
            Envelope::Axial { x1_lo, x1_hi, .. } => (x1_lo, x1_hi),
        }
    }

    /// Maps three uniforms in (0, 1] to a point distributed uniformly in
    /// the envelope. The first coordinate drives x₁ (axial), the radius
    /// (shell) or the x-coordinate (box), which is what stratification acts on.
    pub fn map_uniforms(&self, u: [f64; 3]) -> Point {
        match *self {
            Envelope::Shell { center, inner, outer } => {
                let a3 = inner.powi(3);
                let r = (a3 + u[0] * (outer.powi(3) - a3)).cbrt();
                let cos_t = 2.0 * u[1] - 1.0;
                let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
                let phi = 2.0 * PI * u[2];
                center + Point::new(r * sin_t * phi.cos(), r * sin_t * phi.sin(), r * cos_t)
            }
            Envelope::Box { lo, hi } => {
                let d = hi - lo;
                Point::new(lo.x + u[0] * d.x, lo.y + u[1] * d.y, lo.z + u[2] * d.z)
            }
            Envelope::Axial { x1_lo, x1_hi, profile } => {
                let x1 = match profile {
                    AxialProfile::Constant(_) => x1_lo + u[0] * (x1_hi - x1_lo),
                    AxialProfile::Power(e) => {
                        let k = 2.0 * e + 1.0;
                        let lo_k = x1_lo.max(0.0).powf(k);
                        (lo_k + u[0] * (x1_hi.powf(k) - lo_k)).powf(1.0 / k)
                    }
                };
                let rho = profile.radius(x1) * u[1].sqrt();
                let phi = 2.0 * PI * u[2];
                Point::new(x1, rho * phi.cos(), rho * phi.sin())
            }
        }
    }

    /// Restricts an axial envelope to x₁ ∈ [lo, hi]; other kinds are returned as is.
    pub fn clip_x1(&self, lo: f64, hi: f64) -> Envelope {
        match *self {
            Envelope::Axial { x1_lo, x1_hi, profile } => {
                let mut a = x1_lo.max(lo);
                if let AxialProfile::Power(_) = profile {
                    a = a.max(0.0);
                }
                let b = x1_hi.min(hi).max(a);
                Envelope::Axial { x1_lo: a, x1_hi: b, profile }
            }
            other => other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn axial_power_volume_matches_integral() {
        // π ∫₀⁴ x dx = 8π
        let env = Envelope::Axial { x1_lo: 0.0, x1_hi: 4.0, profile: AxialProfile::Power(0.5) };
        assert_relative_eq!(env.volume(), 8.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn mapped_points_stay_inside() {
        let env = Envelope::Shell { center: Point::zeros(), inner: 1.0, outer: 2.0 };
        for &u in &[[1e-12, 0.3, 0.9], [1.0, 1.0, 1.0], [0.5, 1e-9, 0.2]] {
            let n = env.map_uniforms(u).norm();
            assert!((1.0 - 1e-12..=2.0 + 1e-12).contains(&n));
        }
        let ax = Envelope::Axial { x1_lo: 0.0, x1_hi: 16.0, profile: AxialProfile::Power(-0.25) };
        let p = ax.map_uniforms([1e-6, 1.0, 0.0]);
        assert!(p.x > 0.0 && (p.y * p.y + p.z * p.z).sqrt() <= p.x.powf(-0.25) * (1.0 + 1e-12));
    }

    #[test]
    fn clipping_empty_range_has_zero_volume() {
        let env = Envelope::Axial { x1_lo: 0.0, x1_hi: 4.0, profile: AxialProfile::Constant(1.0) };
        assert_eq!(env.clip_x1(5.0, 6.0).volume(), 0.0);
        assert_relative_eq!(env.clip_x1(-1.0, 2.0).volume(), 2.0 * PI);
    }
}

//! Radial cutoff θ_R: 1 on |x| < R/2, 0 on |x| ≥ R, quintic C² transition
//! in between.

use serde::Serialize;

use crate::{Error, Point, Result};

/// S(t) = 6t⁵ − 15t⁴ + 10t³.
#[inline]
pub fn smoothstep(t: f64) -> f64 {
    t * t * t * (t * (6.0 * t - 15.0) + 10.0)
}

#[inline]
pub fn smoothstep_d1(t: f64) -> f64 {
    30.0 * t * t * (t - 1.0) * (t - 1.0)
}

#[inline]
pub fn smoothstep_d2(t: f64) -> f64 {
    60.0 * t * (2.0 * t - 1.0) * (t - 1.0)
}

/// sup |S′| = S′(1/2).
pub const SMOOTHSTEP_D1_MAX: f64 = 15.0 / 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialCutoff {
    radius: f64,
}

pub fn make_cutoff(radius: f64) -> Result<RadialCutoff> {
    RadialCutoff::new(radius)
}

impl RadialCutoff {
    pub fn new(radius: f64) -> Result<Self> {
        if radius > 1.0 && radius.is_finite() {
            Ok(RadialCutoff { radius })
        } else {
            Err(Error::InvalidRadius(radius))
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Transition variable t = (2ρ − R)/R, or None off the open annulus.
    #[inline]
    fn transition(&self, rho: f64) -> Option<f64> {
        let t = (2.0 * rho - self.radius) / self.radius;
        (t > 0.0 && t < 1.0).then_some(t)
    }

    /// θ as a function of ρ = |x|.
    pub fn profile(&self, rho: f64) -> f64 {
        let t = ((2.0 * rho - self.radius) / self.radius).clamp(0.0, 1.0);
        1.0 - smoothstep(t)
    }

    /// θ′(ρ) = −(2/R)S′(t).
    pub fn profile_d1(&self, rho: f64) -> f64 {
        self.transition(rho).map_or(0.0, |t| -2.0 / self.radius * smoothstep_d1(t))
    }

    /// θ″(ρ) = −(4/R²)S″(t).
    pub fn profile_d2(&self, rho: f64) -> f64 {
        self.transition(rho).map_or(0.0, |t| -4.0 / (self.radius * self.radius) * smoothstep_d2(t))
    }

    #[inline]
    pub fn value(&self, x: &Point) -> f64 {
        self.profile(x.norm())
    }

    pub fn grad(&self, x: &Point) -> Point {
        let rho = x.norm();
        match self.transition(rho) {
            Some(_) => x * (self.profile_d1(rho) / rho),
            None => Point::zeros(),
        }
    }

    /// Δθ = θ″ + (2/ρ)θ′.
    pub fn laplacian(&self, x: &Point) -> f64 {
        let rho = x.norm();
        match self.transition(rho) {
            Some(_) => self.profile_d2(rho) + 2.0 / rho * self.profile_d1(rho),
            None => 0.0,
        }
    }

    /// sup |∇θ_R| = (2/R)·15/8.
    pub fn grad_sup(&self) -> f64 {
        2.0 / self.radius * SMOOTHSTEP_D1_MAX
    }

    /// ∫ θ_R dx in closed form: (4π/3)(R/2)³ + 4π∫ (1 − S(t)) ρ² dρ over the transition.
    pub fn integral(&self) -> f64 {
        // ρ = R(1+t)/2, dρ = R/2 dt; ∫₀¹ (1−S(t))(1+t)² dt = 71/84
        let r = self.radius;
        let plateau = 4.0 / 3.0 * std::f64::consts::PI * (r / 2.0).powi(3);
        plateau + 4.0 * std::f64::consts::PI * (r / 2.0).powi(3) * TRANSITION_MOMENT
    }
}

/// ∫₀¹ (1 − S(t))(1 + t)² dt.
pub const TRANSITION_MOMENT: f64 = 71.0 / 84.0;

/// R²Δθ_R at transition variable t; independent of R.
pub fn scaled_laplacian(t: f64) -> f64 {
    -4.0 * smoothstep_d2(t) - 8.0 * smoothstep_d1(t) / (1.0 + t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;
    use approx::assert_relative_eq;

    #[test]
    fn values() {
        let c = make_cutoff(4.0).unwrap();
        assert_eq!(c.value(&pt(1.0, 0.0, 0.0)), 1.0);
        assert_eq!(c.value(&pt(5.0, 0.0, 0.0)), 0.0);
        assert_eq!(c.value(&pt(3.0, 0.0, 0.0)), 0.5);
        assert_relative_eq!(c.grad(&pt(3.0, 0.0, 0.0)).norm(), 15.0 / 16.0, epsilon = 1e-15);
        assert_eq!(c.grad(&pt(0.5, 0.5, 0.0)), Point::zeros());
        assert_eq!(c.laplacian(&pt(0.5, 0.5, 0.0)), 0.0);
        assert!(matches!(make_cutoff(1.0), Err(Error::InvalidRadius(_))));
    }

    #[test]
    fn derivatives_match_differences() {
        let c = make_cutoff(8.0).unwrap();
        let h = 1e-4;
        for k in 1..40 {
            let rho = 4.0 + 4.0 * k as f64 / 40.0;
            let x = pt(rho * 0.6, rho * 0.8, 0.0);
            let g = c.grad(&x);
            let mut fd = Point::zeros();
            let mut lap = 0.0;
            for j in 0..3 {
                let mut e = Point::zeros();
                e[j] = h;
                fd[j] = (c.value(&(x + e)) - c.value(&(x - e))) / (2.0 * h);
                let e2 = e * 10.0;
                lap += (c.value(&(x + e2)) + c.value(&(x - e2)) - 2.0 * c.value(&x)) / (100.0 * h * h);
            }
            assert!((g - fd).norm() <= 1e-5 * g.norm().max(1e-3), "{g} {fd}");
            assert!((c.laplacian(&x) - lap).abs() <= 1e-5 * c.laplacian(&x).abs().max(1e-2));
        }
    }

    #[test]
    fn transition_moment_oracle() {
        // Simpson on the degree-7 polynomial is exact up to rounding with enough panels
        let n = 2000;
        let f = |t: f64| (1.0 - smoothstep(t)) * (1.0 + t) * (1.0 + t);
        let h = 1.0 / n as f64;
        let s: f64 = (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                w * f(i as f64 * h)
            })
            .sum::<f64>()
            * h
            / 3.0;
        assert_relative_eq!(s, TRANSITION_MOMENT, epsilon = 1e-12);
    }

    #[test]
    fn scaling_laws() {
        for r in [2.0, 8.0, 32.0, 256.0] {
            let c = make_cutoff(r).unwrap();
            assert_relative_eq!(r * c.grad_sup(), 3.75, epsilon = 1e-12);
            let t = 0.3;
            let rho = r * (1.0 + t) / 2.0;
            assert_relative_eq!(r * r * c.laplacian(&pt(rho, 0.0, 0.0)), scaled_laplacian(t), epsilon = 1e-10);
        }
    }
}

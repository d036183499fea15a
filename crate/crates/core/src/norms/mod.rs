//! Modular ϱ_{p(·)}(f) = ∫|f|^{p(x)} dx and the Luxemburg norm
//! ‖f‖ = inf{λ > 0 : ϱ(f/λ) ≤ 1}.
//!
//! The domain is split into the parts where each exponent piece is in force
//! and each part gets its own node set, so thin pieces (a cylinder inside a
//! large annulus) are sampled from their own envelope. Node values |f| and
//! p are cached once; the bisection over λ only re-weights them.
//!
//! On a piece with p = +∞ the modular is 0 when ess-sup |f/λ| ≤ 1 and +∞
//! otherwise, so that piece contributes its ess-sup to the norm.

mod checks;

use rayon::prelude::*;
use serde::Serialize;

pub use checks::{
    holder_check, lemma1_check, lemma2_check, power_identity_check, restriction_identity_check, HolderCheck,
    LemmaCheck, PowerIdentityCheck, RestrictionCheck,
};

use crate::exponents::{ExponentField, ExponentPiece};
use crate::fields::ScalarField3;
use crate::quadrature::{chunked_dot, NodeSet, Quadrature};
use crate::regions::{sampling, Region};
use crate::{Error, Point, Result};

/// Bisection gives up above this λ and reports an infinite norm.
pub const LAMBDA_CAP: f64 = 1e30;
/// Extra uniform samples used for the ess-sup on p = +∞ pieces.
pub const ESS_SUP_EXTRA: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormStatus {
    Finite,
    Infinite,
    Zero,
}

impl std::fmt::Display for NormStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NormStatus::Finite => "finite",
            NormStatus::Infinite => "infinite",
            NormStatus::Zero => "zero",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormResult {
    pub value: f64,
    pub abs_error: f64,
    pub status: NormStatus,
    /// Number of modular evaluations spent by the bisection.
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModularResult {
    pub value: f64,
    pub std_error: f64,
    /// Bound on the part of the integral cut off by truncation (0 if none).
    pub tail_bound: f64,
}

struct FiniteGroup {
    nodes: NodeSet,
    abs: Vec<f64>,
    exps: Vec<f64>,
    coarse: Option<(Vec<f64>, Vec<f64>)>,
}

/// Cached node data for one (f, p, domain, quadrature).
pub struct ModularPlan {
    finite: Vec<FiniteGroup>,
    /// Largest sampled |f| over the p = +∞ part (0 if there is none).
    ess_sup_inf_part: f64,
    has_infinite_part: bool,
    tail: Option<Tail>,
    non_finite: bool,
}

#[derive(Clone, Copy)]
struct Tail {
    radius: f64,
    rate: f64,
    constant: f64,
    p_lo: f64,
    p_hi: f64,
}

impl Tail {
    /// Bound on ∫_{|x|>T} |f/λ|^{p(x)} using |f| ≤ C|x|^{−a}.
    fn bound(&self, lambda: f64) -> f64 {
        if self.constant == 0.0 {
            return 0.0;
        }
        let c = self.constant / lambda;
        let one = |p: f64| {
            let e = self.rate * p - 3.0;
            if e <= 0.0 {
                f64::INFINITY
            } else {
                4.0 * std::f64::consts::PI * c.powf(p) * self.radius.powf(-e) / e
            }
        };
        one(self.p_lo) + one(self.p_hi)
    }
}

fn scheme_seed(quad: &Quadrature) -> u64 {
    match quad.scheme {
        crate::quadrature::Scheme::MonteCarlo { seed, .. } | crate::quadrature::Scheme::Stratified { seed, .. } => seed,
        crate::quadrature::Scheme::Radial { .. } => 0,
    }
}

/// Largest |f| over the nodes plus `ESS_SUP_EXTRA` uniform proposals in the region.
fn sampled_sup(f: &ScalarField3, region: &Region, nodes: &NodeSet, seed: u64, tag: u32) -> Result<f64> {
    let env = region.envelope().ok_or_else(|| Error::UnboundedRegion(region.to_string()))?;
    let extra: Vec<Point> = sampling::uniform_triples(ESS_SUP_EXTRA, seed, tag, None)
        .into_iter()
        .map(|u| env.map_uniforms(u))
        .filter(|x| region.contains(x))
        .collect();
    Ok(nodes
        .points
        .par_iter()
        .chain(extra.par_iter())
        .map(|x| f.value(x).abs())
        .reduce(|| 0.0, f64::max))
}

/// Sampled ess-sup of |f| over a bounded region.
pub fn ess_sup(f: &ScalarField3, region: &Region, quad: &Quadrature) -> Result<f64> {
    let nodes = quad.nodes(region, 0x0E55)?;
    sampled_sup(f, region, &nodes, scheme_seed(quad), 0x0E56)
}

/// Bounded part of the domain, and the truncation data when it had to be cut.
fn effective_domain(f: &ScalarField3, p: &ExponentField, domain: &Region, quad: &Quadrature) -> Result<(Region, Option<Tail>)> {
    if domain.envelope().is_some() {
        return Ok((domain.clone(), None));
    }
    let (Some(radius), Some(decay)) = (quad.truncation, f.decay()) else {
        return Err(Error::UnboundedRegion(format!(
            "{domain} needs a truncation radius and a declared decay rate of {}",
            f.name()
        )));
    };
    if radius < decay.from_radius {
        return Err(Error::InvalidArgument(format!(
            "truncation radius {radius} is inside the decay radius {}",
            decay.from_radius
        )));
    }
    let finite: Vec<&ExponentPiece> = p.piece_ids().map(|id| p.piece(id)).filter(|pc| !pc.is_infinite()).collect();
    let p_lo = finite.iter().map(|pc| pc.inf()).fold(f64::INFINITY, f64::min);
    let p_hi = finite.iter().map(|pc| pc.sup()).fold(f64::NEG_INFINITY, f64::max);
    let tail = (!finite.is_empty()).then_some(Tail { radius, rate: decay.rate, constant: decay.constant, p_lo, p_hi });
    let cut = domain.clone().intersect(Region::ball(Point::zeros(), radius)?);
    Ok((cut, tail))
}

impl ModularPlan {
    pub fn new(f: &ScalarField3, p: &ExponentField, domain: &Region, quad: &Quadrature) -> Result<Self> {
        quad.validate()?;
        let (dom, tail) = effective_domain(f, p, domain, quad)?;
        let seed = scheme_seed(quad);
        let mut finite = Vec::new();
        let mut sup_inf: f64 = 0.0;
        let mut has_inf = false;
        for (k, id) in p.candidate_pieces(&dom).into_iter().enumerate() {
            let piece = p.piece(id);
            let sub = p.piece_domain(id, &dom);
            let tag = 0x100 + k as u32;
            let nodes = quad.nodes(&sub, tag)?;
            if piece.is_infinite() {
                has_inf = true;
                sup_inf = sup_inf.max(sampled_sup(f, &sub, &nodes, seed, 0x200 + k as u32)?);
                continue;
            }
            let eval = |pts: &[Point]| -> (Vec<f64>, Vec<f64>) {
                pts.par_iter().map(|x| (f.value(x).abs(), piece.value_at(x))).unzip()
            };
            let (abs, exps) = eval(&nodes.points);
            let coarse = nodes.coarse.as_ref().map(|c| eval(&c.points));
            finite.push(FiniteGroup { nodes, abs, exps, coarse });
        }
        let non_finite = finite.iter().any(|g| g.abs.iter().any(|a| !a.is_finite())) || !sup_inf.is_finite();
        Ok(ModularPlan { finite, ess_sup_inf_part: sup_inf, has_infinite_part: has_inf, tail, non_finite })
    }

    fn terms(abs: &[f64], exps: &[f64], lambda: f64) -> Vec<f64> {
        abs.par_iter()
            .zip(exps.par_iter())
            .map(|(a, p)| if *a == 0.0 { 0.0 } else { (a / lambda).powf(*p) })
            .collect()
    }

    /// ϱ over the finite-exponent part, with its error, at scale λ.
    fn finite_part(&self, lambda: f64) -> (f64, f64) {
        let mut value = 0.0;
        let mut var = 0.0;
        for g in &self.finite {
            let t = Self::terms(&g.abs, &g.exps, lambda);
            let v = chunked_dot(&g.nodes.weights, &t);
            let e = match (&g.coarse, &g.nodes.coarse) {
                (Some((ca, ce)), Some(cn)) => (chunked_dot(&cn.weights, &Self::terms(ca, ce, lambda)) - v).abs(),
                _ => g.nodes.std_error(&t),
            };
            value += v;
            var += e * e;
        }
        (value, var.sqrt())
    }

    /// −dϱ/dλ over the finite part.
    fn slope(&self, lambda: f64) -> f64 {
        self.finite
            .iter()
            .map(|g| {
                let t: Vec<f64> = g
                    .abs
                    .par_iter()
                    .zip(g.exps.par_iter())
                    .map(|(a, p)| if *a == 0.0 { 0.0 } else { p * (a / lambda).powf(*p) / lambda })
                    .collect();
                chunked_dot(&g.nodes.weights, &t)
            })
            .sum()
    }

    /// ϱ(f/λ) including the p = +∞ convention.
    pub fn modular_at(&self, lambda: f64) -> ModularResult {
        let tail_bound = self.tail.map_or(0.0, |t| t.bound(lambda));
        if self.non_finite || (self.has_infinite_part && self.ess_sup_inf_part / lambda > 1.0) {
            return ModularResult { value: f64::INFINITY, std_error: 0.0, tail_bound };
        }
        let (value, std_error) = self.finite_part(lambda);
        ModularResult { value, std_error, tail_bound }
    }

    pub fn norm(&self, rel_tol: f64) -> NormResult {
        let m = self.ess_sup_inf_part;
        if self.non_finite {
            return NormResult { value: f64::INFINITY, abs_error: 0.0, status: NormStatus::Infinite, evaluations: 0 };
        }
        let all_zero = self.finite.iter().all(|g| g.abs.iter().all(|a| *a == 0.0));
        if all_zero {
            let status = if m == 0.0 { NormStatus::Zero } else { NormStatus::Finite };
            return NormResult { value: m, abs_error: 0.0, status, evaluations: 0 };
        }
        let mut evals = 0usize;
        let mut g = |l: f64| {
            evals += 1;
            self.finite_part(l).0
        };
        let l0 = g(1.0).max(1.0);
        let (mut lo, mut hi);
        if !l0.is_finite() {
            return NormResult { value: f64::INFINITY, abs_error: 0.0, status: NormStatus::Infinite, evaluations: evals };
        }
        if g(l0) > 1.0 {
            hi = l0;
            loop {
                lo = hi;
                hi *= 2.0;
                if hi > LAMBDA_CAP {
                    return NormResult { value: f64::INFINITY, abs_error: 0.0, status: NormStatus::Infinite, evaluations: evals };
                }
                if g(hi) <= 1.0 {
                    break;
                }
            }
        } else {
            lo = l0;
            loop {
                hi = lo;
                lo /= 2.0;
                if lo < 1e-300 {
                    return NormResult { value: m, abs_error: 0.0, status: NormStatus::Zero, evaluations: evals };
                }
                if g(lo) > 1.0 {
                    break;
                }
            }
        }
        while (hi - lo) > rel_tol * hi {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        if m >= lambda {
            return NormResult { value: m, abs_error: 0.0, status: NormStatus::Finite, evaluations: evals };
        }
        let (_, sigma) = self.finite_part(lambda);
        let tail = self.tail.map_or(0.0, |t| t.bound(lambda));
        let slope = self.slope(lambda).max(f64::MIN_POSITIVE);
        NormResult {
            value: lambda,
            abs_error: 0.5 * (hi - lo) + (sigma + tail) / slope,
            status: NormStatus::Finite,
            evaluations: evals + 1,
        }
    }
}

/// ϱ_{p(·)}(f) over `domain`.
pub fn modular(f: &ScalarField3, p: &ExponentField, domain: &Region, quad: &Quadrature) -> Result<ModularResult> {
    Ok(ModularPlan::new(f, p, domain, quad)?.modular_at(1.0))
}

/// Luxemburg norm of f over `domain` by bisection on λ ↦ ϱ(f/λ).
pub fn luxemburg_norm(f: &ScalarField3, p: &ExponentField, domain: &Region, quad: &Quadrature) -> Result<NormResult> {
    Ok(ModularPlan::new(f, p, domain, quad)?.norm(quad.rel_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Preset;
    use approx::assert_relative_eq;
    use num_rational::Rational64;
    use std::f64::consts::PI;

    fn ball(r: f64) -> Region {
        Region::ball(Point::zeros(), r).unwrap()
    }

    #[test]
    fn constant_integrand_modular() {
        let q = Quadrature::radial(8, 8, 8);
        let m = modular(&ScalarField3::constant(2.0), &ExponentField::constant(3.0).unwrap(), &ball(1.0), &q).unwrap();
        assert_relative_eq!(m.value, 8.0 * 4.0 * PI / 3.0, max_relative = 1e-12);
        let z = modular(&ScalarField3::zero(), &ExponentField::constant(3.0).unwrap(), &ball(1.0), &q).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn infinite_piece_convention() {
        let t3 = Preset::t3(Rational64::new(1, 2), Rational64::from_integer(4)).unwrap();
        let p = t3.field().unwrap();
        let cusp = t3.inner_region();
        let c = cusp.clone();
        let f = ScalarField3::new("2·1_N", move |x| if c.contains(x) { 2.0 } else { 0.0 });
        let dom = Region::annulus(1.0, 2.0).unwrap();
        let m = modular(&f, &p, &dom, &Quadrature::stratified(20_000, 1, 8)).unwrap();
        assert_eq!(m.value, f64::INFINITY);
        // the norm is the sup on the cusp part
        let n = luxemburg_norm(&f, &p, &dom, &Quadrature::stratified(20_000, 1, 8)).unwrap();
        assert_eq!((n.value, n.status), (2.0, NormStatus::Finite));
    }

    #[test]
    fn unit_function_norm_is_volume_power() {
        let q = Quadrature::radial(8, 8, 8);
        for p0 in [1.0, 2.0, 3.5, 6.0] {
            let n = luxemburg_norm(&ScalarField3::constant(1.0), &ExponentField::constant(p0).unwrap(), &ball(2.0), &q)
                .unwrap();
            let vol: f64 = 32.0 * PI / 3.0;
            assert_relative_eq!(n.value, vol.powf(1.0 / p0), max_relative = 1e-4);
            assert!(n.abs_error <= 1e-4 * n.value);
        }
    }

    #[test]
    fn zero_and_unbounded() {
        let q = Quadrature::radial(8, 8, 8);
        let n = luxemburg_norm(&ScalarField3::zero(), &ExponentField::constant(2.0).unwrap(), &ball(1.0), &q).unwrap();
        assert_eq!((n.value, n.status), (0.0, NormStatus::Zero));
        let e = luxemburg_norm(&ScalarField3::constant(1.0), &ExponentField::constant(2.0).unwrap(), &Region::Whole, &q);
        assert!(matches!(e, Err(Error::UnboundedRegion(_))));
    }

    #[test]
    fn gaussian_closed_form() {
        let q = Quadrature::radial(64, 16, 16).with_truncation(8.0);
        for p0 in [2.0, 3.0, 4.0, 6.0] {
            let n = luxemburg_norm(&ScalarField3::gaussian(), &ExponentField::constant(p0).unwrap(), &Region::Whole, &q)
                .unwrap();
            let exact = (PI / p0).powf(1.5 / p0);
            assert_relative_eq!(n.value, exact, max_relative = 1e-4);
        }
    }

    #[test]
    fn two_piece_root() {
        // Ω₁ = B(0, r₁) with |Ω₁| = 1 and p = 2; Ω₂ the shell up to |Ω| = 3 with p = 4
        let r1 = (3.0 / (4.0 * PI)).cbrt();
        let r2 = (9.0 / (4.0 * PI)).cbrt();
        let p = ExponentField::new(
            vec![(ball(r1), ExponentPiece::constant(2.0).unwrap())],
            ExponentPiece::constant(4.0).unwrap(),
        )
        .unwrap();
        let n = luxemburg_norm(&ScalarField3::constant(1.0), &p, &ball(r2), &Quadrature::radial(8, 8, 8).with_tol(1e-10))
            .unwrap();
        // λ⁻² + 2λ⁻⁴ = 1 ⇔ λ² = 2 (the positive root of μ² − μ − 2 with μ = λ²)
        assert_relative_eq!(n.value, 2f64.sqrt(), max_relative = 1e-9);
    }
}

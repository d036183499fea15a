//! Node sets for integrals over regions.
//!
//! Every scheme produces nodes in a region's sampling envelope and drops the
//! ones outside the region. Radial product rules use Gauss-Legendre in r and
//! cos θ with a uniform φ grid on shell envelopes, and a tensor Gauss-Legendre
//! rule in the envelope's uniform coordinates otherwise; their error estimate
//! is the gap to the rule with every node count halved. Monte Carlo schemes
//! report a (per-stratum) standard error.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::regions::{sampling, Envelope, Region};
use crate::{Error, Point, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum Scheme {
    Radial { n_r: usize, n_theta: usize, n_phi: usize },
    MonteCarlo { samples: usize, seed: u64 },
    /// Monte Carlo stratified along the envelope's first coordinate.
    Stratified { samples: usize, seed: u64, strata: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    #[serde(flatten)]
    pub scheme: Scheme,
    /// Relative tolerance of the Luxemburg bisection.
    pub rel_tol: f64,
    /// Radius at which unbounded domains are cut off.
    #[serde(default)]
    pub truncation: Option<f64>,
}

pub const DEFAULT_REL_TOL: f64 = 1e-4;

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::stratified(200_000, 0, 64)
    }
}

impl Quadrature {
    pub fn radial(n_r: usize, n_theta: usize, n_phi: usize) -> Self {
        Quadrature { scheme: Scheme::Radial { n_r, n_theta, n_phi }, rel_tol: DEFAULT_REL_TOL, truncation: None }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Quadrature { scheme: Scheme::MonteCarlo { samples, seed }, rel_tol: DEFAULT_REL_TOL, truncation: None }
    }

    pub fn stratified(samples: usize, seed: u64, strata: usize) -> Self {
        Quadrature { scheme: Scheme::Stratified { samples, seed, strata }, rel_tol: DEFAULT_REL_TOL, truncation: None }
    }

    pub fn with_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_truncation(mut self, radius: f64) -> Self {
        self.truncation = Some(radius);
        self
    }

    /// Same scheme on an independent random stream (no-op for product rules).
    pub fn with_seed_offset(&self, k: u64) -> Self {
        let mut q = *self;
        match &mut q.scheme {
            Scheme::MonteCarlo { seed, .. } | Scheme::Stratified { seed, .. } => {
                *seed = seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
            }
            Scheme::Radial { .. } => {}
        }
        q
    }

    pub fn is_random(&self) -> bool {
        !matches!(self.scheme, Scheme::Radial { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.scheme {
            Scheme::Radial { n_r, n_theta, n_phi } => n_r >= 2 && n_theta >= 2 && n_phi >= 2,
            Scheme::MonteCarlo { samples, .. } => samples >= 2,
            Scheme::Stratified { samples, strata, .. } => strata >= 1 && samples >= 2 * strata,
        };
        if !ok {
            return Err(Error::InvalidArgument(format!("degenerate quadrature {:?}", self.scheme)));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidArgument(format!("rel_tol = {} must lie in (0, 1)", self.rel_tol)));
        }
        Ok(())
    }

    fn coarse(&self) -> Option<Quadrature> {
        match self.scheme {
            Scheme::Radial { n_r, n_theta, n_phi } => {
                Some(Quadrature::radial((n_r / 2).max(1), (n_theta / 2).max(1), (n_phi / 2).max(1)))
            }
            _ => None,
        }
    }

    /// Nodes of `region` for this scheme; `tag` separates random streams.
    pub fn nodes(&self, region: &Region, tag: u32) -> Result<NodeSet> {
        let env = region.envelope().ok_or_else(|| Error::UnboundedRegion(region.to_string()))?;
        let fine = raw_nodes(&self.scheme, &env, tag).filtered(region);
        let coarse = self.coarse().map(|q| raw_nodes(&q.scheme, &env, tag).filtered(region));
        Ok(NodeSet { coarse: coarse.map(Box::new), ..fine })
    }

    /// ∫_region f with an error estimate.
    pub fn integrate(&self, region: &Region, tag: u32, f: impl Fn(&Point) -> f64 + Sync) -> Result<Estimate> {
        let nodes = self.nodes(region, tag)?;
        let vals: Vec<f64> = nodes.points.par_iter().map(&f).collect();
        Ok(nodes.estimate(&vals, |i| nodes.coarse.as_ref().map(|c| f(&c.points[i]))))
    }
}

/// Integral estimate with a one-sigma (Monte Carlo) or rule-gap (product) error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate { value: 0.0, error: 0.0 };
}

/// Independent errors add in quadrature.
impl std::ops::Add for Estimate {
    type Output = Estimate;

    fn add(self, o: Estimate) -> Estimate {
        Estimate { value: self.value + o.value, error: (self.error * self.error + o.error * o.error).sqrt() }
    }
}

/// Accepted nodes with weights; Monte Carlo sets also keep per-stratum
/// proposal counts so rejected proposals count as zeros in the variance.
#[derive(Clone, Debug)]
pub struct NodeSet {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    stratum: Vec<u32>,
    /// Proposals per stratum and the volume each stratum stands for (Monte Carlo only).
    strata: Option<(Vec<usize>, f64)>,
    pub coarse: Option<Box<NodeSet>>,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn filtered(self, region: &Region) -> NodeSet {
        let keep: Vec<bool> = self.points.par_iter().map(|x| region.contains(x)).collect();
        NodeSet {
            points: pick(self.points, &keep),
            weights: pick(self.weights, &keep),
            stratum: pick(self.stratum, &keep),
            strata: self.strata,
            coarse: None,
        }
    }

    /// Σ wᵢ vᵢ, summed in fixed chunks so the result does not depend on thread count.
    pub fn weighted_sum(&self, vals: &[f64]) -> f64 {
        chunked_dot(&self.weights, vals)
    }

    /// One-sigma standard error of `weighted_sum(vals)`; 0 for product rules.
    pub fn std_error(&self, vals: &[f64]) -> f64 {
        let Some((counts, vol)) = &self.strata else { return 0.0 };
        let m = counts.len();
        let mut s1 = vec![0.0; m];
        let mut s2 = vec![0.0; m];
        for (v, s) in vals.iter().zip(&self.stratum) {
            s1[*s as usize] += v;
            s2[*s as usize] += v * v;
        }
        let mut var = 0.0;
        for s in 0..m {
            let n = counts[s] as f64;
            if n < 2.0 {
                continue;
            }
            let mean = s1[s] / n;
            let v = ((s2[s] / n - mean * mean) * n / (n - 1.0)).max(0.0);
            var += vol * vol * v / n;
        }
        var.sqrt()
    }

    /// Value and error: Monte Carlo standard error, or the gap to the coarse rule
    /// whose integrand values `coarse_val(i)` supplies.
    pub fn estimate(&self, vals: &[f64], coarse_val: impl Fn(usize) -> Option<f64> + Sync) -> Estimate {
        let value = self.weighted_sum(vals);
        let error = match &self.coarse {
            Some(c) => {
                let cv: Vec<f64> = (0..c.len()).into_par_iter().map(|i| coarse_val(i).unwrap_or(0.0)).collect();
                (c.weighted_sum(&cv) - value).abs()
            }
            None => self.std_error(vals),
        };
        Estimate { value, error }
    }
}

fn pick<T>(v: Vec<T>, keep: &[bool]) -> Vec<T> {
    v.into_iter().zip(keep).filter(|(_, k)| **k).map(|(x, _)| x).collect()
}

pub(crate) fn chunked_dot(w: &[f64], v: &[f64]) -> f64 {
    w.par_chunks(sampling::CHUNK)
        .zip(v.par_chunks(sampling::CHUNK))
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
        .collect::<Vec<f64>>()
        .into_iter()
        .sum()
}

fn gl01(n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).unwrap());
    rule.as_node_weight_pairs().iter().map(|&(x, w)| ((x + 1.0) / 2.0, w / 2.0)).collect()
}

fn raw_nodes(scheme: &Scheme, env: &Envelope, tag: u32) -> NodeSet {
    match *scheme {
        Scheme::Radial { n_r, n_theta, n_phi } => {
            let a = gl01(n_r);
            let b = gl01(n_theta);
            let phis: Vec<f64> = (0..n_phi).map(|k| 2.0 * PI * (k as f64 + 0.5) / n_phi as f64).collect();
            let w_phi = 2.0 * PI / n_phi as f64;
            let mut points = Vec::with_capacity(a.len() * b.len() * n_phi);
            let mut weights = Vec::with_capacity(points.capacity());
            match *env {
                Envelope::Shell { center, inner, outer } => {
                    let len = outer - inner;
                    for &(ur, wr) in &a {
                        let r = inner + len * ur;
                        for &(uc, wc) in &b {
                            let c = 2.0 * uc - 1.0;
                            let s = (1.0 - c * c).max(0.0).sqrt();
                            for &phi in &phis {
                                points.push(center + Point::new(r * s * phi.cos(), r * s * phi.sin(), r * c));
                                weights.push(len * wr * r * r * 2.0 * wc * w_phi);
                            }
                        }
                    }
                }
                _ => {
                    let vol = env.volume();
                    for &(u0, w0) in &a {
                        for &(u1, w1) in &b {
                            for (k, _) in phis.iter().enumerate() {
                                let u2 = (k as f64 + 0.5) / n_phi as f64;
                                points.push(env.map_uniforms([u0, u1, u2]));
                                weights.push(vol * w0 * w1 / n_phi as f64);
                            }
                        }
                    }
                }
            }
            let n = points.len();
            NodeSet { points, weights, stratum: vec![0; n], strata: None, coarse: None }
        }
        Scheme::MonteCarlo { samples, seed } => mc_nodes(env, samples, seed, 1, tag),
        Scheme::Stratified { samples, seed, strata } => mc_nodes(env, samples, seed, strata, tag),
    }
}

fn mc_nodes(env: &Envelope, n: usize, seed: u64, strata: usize, tag: u32) -> NodeSet {
    let m = strata.clamp(1, n.max(1));
    let u = sampling::uniform_triples(n, seed, tag, Some(m));
    let mut counts = vec![0usize; m];
    let stratum: Vec<u32> = (0..n)
        .map(|i| {
            let s = sampling::stratum_of(i, n, m);
            counts[s] += 1;
            s as u32
        })
        .collect();
    let vol = env.volume() / m as f64;
    let weights = stratum.iter().map(|s| vol / counts[*s as usize] as f64).collect();
    let points = u.into_par_iter().map(|t| env.map_uniforms(t)).collect();
    NodeSet { points, weights, stratum, strata: Some((counts, vol)), coarse: None }
}

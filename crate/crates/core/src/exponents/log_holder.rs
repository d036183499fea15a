//! Sampled log-Hölder heuristic for 1/p(·).
//!
//! Local part: pairs in B(0, 8) at log-uniform separations in [1e-3, 1]; each
//! pair is also refined by bisection along its segment (keeping the half with
//! the larger jump of 1/p) down to 1e-9. A continuous exponent gives a fine
//! supremum that collapses, a jump gives one that keeps growing like log(1/δ).
//! Decay part: 1/p along 64 random rays plus the 6 axis rays at radii
//! 10, 10², …, 10⁸.

use std::f64::consts::{E, PI};

use serde::Serialize;

use super::ExponentField;
use crate::regions::sampling;
use crate::Point;

const BALL_RADIUS: f64 = 8.0;
const FINE_SEPARATION: f64 = 1e-9;
const RANDOM_RAYS: usize = 64;
const LIMIT_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogHolderReport {
    /// sup |1/p(x) − 1/p(y)|·log(e + 1/|x−y|) over all sampled and refined pairs.
    pub local_constant: f64,
    /// sup |1/p(x) − 1/p_∞|·log(e + |x|) along the rays; +∞ without a radial limit.
    pub decay_constant: f64,
    pub p_infinity: Option<f64>,
    pub satisfied: bool,
    pub reason: Option<String>,
}

fn unit(u1: f64, u2: f64) -> Point {
    let z = 2.0 * u1 - 1.0;
    let s = (1.0 - z * z).max(0.0).sqrt();
    let phi = 2.0 * PI * u2;
    Point::new(s * phi.cos(), s * phi.sin(), z)
}

fn modulus(a: f64, b: f64, dist: f64) -> f64 {
    (a - b).abs() * (E + 1.0 / dist).ln()
}

pub fn log_holder_diagnostic(p: &ExponentField, n_pairs: usize, seed: u64) -> LogHolderReport {
    let inv = |x: &Point| 1.0 / p.evaluate(x);

    let mut coarse = 0.0f64;
    let mut fine = 0.0f64;
    let u = sampling::uniform_triples(2 * n_pairs, seed, 0x4C48, None);
    for pair in u.chunks_exact(2) {
        let [a, b, c] = pair[0];
        let [d, e, g] = pair[1];
        let x = unit(b, c) * (BALL_RADIUS * a.cbrt());
        let delta = 10f64.powf(-3.0 * d);
        let mut y = x + unit(e, g) * delta;
        let (px, py) = (inv(&x), inv(&y));
        coarse = coarse.max(modulus(px, py, delta));

        let (mut lo, mut plo, mut phi) = (x, px, py);
        let mut len = delta;
        if plo != phi {
            while len > FINE_SEPARATION {
                let mid = (lo + y) * 0.5;
                let pm = inv(&mid);
                if (pm - plo).abs() >= (phi - pm).abs() {
                    y = mid;
                    phi = pm;
                } else {
                    lo = mid;
                    plo = pm;
                }
                len *= 0.5;
            }
            fine = fine.max(modulus(plo, phi, len));
        }
    }
    let local_ok = fine <= 1.5 * coarse + 1e-12;

    let radii: Vec<f64> = (1..=8).map(|k| 10f64.powi(k)).collect();
    let mut rays: Vec<Point> = vec![
        Point::x(),
        -Point::x(),
        Point::y(),
        -Point::y(),
        Point::z(),
        -Point::z(),
    ];
    rays.extend(
        sampling::uniform_triples(RANDOM_RAYS, seed, 0x4C49, None)
            .into_iter()
            .map(|t| unit(t[0], t[1])),
    );
    let profile: Vec<Vec<f64>> = rays
        .iter()
        .map(|dir| radii.iter().map(|r| inv(&(dir * *r))).collect())
        .collect();
    let last: Vec<f64> = profile.iter().map(|v| v[v.len() - 1]).collect();
    let (mn, mx) = last.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let limit = (mx - mn <= LIMIT_TOL * mx.abs().max(1e-12)).then_some(0.5 * (mn + mx));

    let (decay_constant, decay_ok) = match limit {
        None => (f64::INFINITY, false),
        Some(l) => {
            let half = radii.len() / 2;
            let mut early = 0.0f64;
            let mut late = 0.0f64;
            for v in &profile {
                for (k, (val, r)) in v.iter().zip(&radii).enumerate() {
                    let c = (val - l).abs() * (E + r).ln();
                    if k < half {
                        early = early.max(c);
                    } else {
                        late = late.max(c);
                    }
                }
            }
            (early.max(late), late <= early + 1e-12)
        }
    };

    let reason = if limit.is_none() {
        Some("no radial limit".to_string())
    } else if !local_ok {
        Some("local modulus grows under refinement".to_string())
    } else if !decay_ok {
        Some("decay modulus grows along rays".to_string())
    } else {
        None
    };
    LogHolderReport {
        local_constant: coarse.max(fine),
        decay_constant,
        p_infinity: limit.map(|l| if l == 0.0 { f64::INFINITY } else { 1.0 / l }),
        satisfied: reason.is_none(),
        reason,
    }
}

//! One function per subcommand; each returns its CSV table, JSON report and verdict.

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{usage, Command, ExponentSpec, RunConfig};
use crate::cutoff::RadialCutoff;
use crate::estimates::{
    admissible_upper_bound, alpha, beta, cutoff_norm_decay, describe, energy_identity_check, liouville_pipeline,
    predicted_exponent, rounded_growth, volume_growth, CutoffKind, InnerKind, Term, Tier,
};
use crate::exponents::Preset;
use crate::norms::{
    holder_check, lemma1_check, lemma2_check, luxemburg_norm, power_identity_check, restriction_identity_check,
};
use crate::regions::VolumeMethod;
use crate::{Error, Result};

/// CSV columns of each subcommand, also printed by `--help`.
pub const COLUMNS: [(Command, &str); 8] = [
    (Command::Norm, "value,abs_error,status,evaluations"),
    (Command::Volume, "R,volume,error   (with r_grid; otherwise method,volume,error)"),
    (Command::Decay, "R,lap_norm,lap_error,grad_norm,grad_error"),
    (Command::Energy, "R,lhs,alpha,beta,rhs,relative_gap,max_residual"),
    (Command::AlphaBeta, "R,alpha,alpha_error,beta1,beta1_error,beta2,beta2_error,beta,beta_error"),
    (Command::Certify, "term,piece,volume_growth,conjugate_bound,exponent,negative"),
    (Command::Lemmas, "check,lhs,rhs,tolerance,pass"),
    (Command::Liouville, "R,alpha,beta1,beta2,beta,lap_norm,grad_norm,errors"),
];

/// Everything a run produces.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub command: Command,
    pub csv: String,
    pub json: String,
    pub verdict: String,
    /// False on a failed check (exit status 2).
    pub pass: bool,
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

struct Table(String);

impl Table {
    fn new(command: Command) -> Self {
        let header = COLUMNS.iter().find(|(c, _)| *c == command).map(|(_, h)| *h).unwrap_or_default();
        Table(format!("{}\n", header.split_whitespace().next().unwrap_or_default()))
    }

    fn with_header(header: &str) -> Self {
        Table(format!("{header}\n"))
    }

    fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.0, "{}", cells.join(","));
    }
}

fn report(config: &RunConfig, body: impl Serialize) -> String {
    let mut v = json!({ "config": config });
    if let (Value::Object(m), Ok(Value::Object(b))) = (&mut v, serde_json::to_value(body)) {
        m.extend(b);
    }
    serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    match config.command {
        Command::Norm => norm(config),
        Command::Volume => volume(config),
        Command::Decay => decay(config),
        Command::Energy => energy(config),
        Command::AlphaBeta => alpha_beta(config),
        Command::Certify => certify(config),
        Command::Lemmas => lemmas(config),
        Command::Liouville => liouville(config),
    }
}

fn outcome(config: &RunConfig, csv: Table, json: String, verdict: String, pass: bool) -> Outcome {
    Outcome { command: config.command, csv: csv.0, json, verdict, pass }
}

fn norm(c: &RunConfig) -> Result<Outcome> {
    let f = c.field()?.scalar()?;
    let p = c.exponent()?.field()?;
    let region = c.region()?;
    let n = luxemburg_norm(&f, &p, region, &c.quadrature)?;
    let mut t = Table::new(Command::Norm);
    t.row(&[num(n.value), num(n.abs_error), n.status.to_string(), n.evaluations.to_string()]);
    let verdict = format!("norm: ‖{}‖ over {region} = {:.6e} ± {:.1e} ({})", f.name(), n.value, n.abs_error, n.status);
    Ok(outcome(c, t, report(c, json!({ "norm": n })), verdict, true))
}

fn volume(c: &RunConfig) -> Result<Outcome> {
    let region = c.region()?;
    if let Some(g) = c.r_grid {
        let (rows, fit) = volume_growth(region, &g.radii(), &c.quadrature)?;
        let mut t = Table::new(Command::Volume);
        for (r, v) in &rows {
            t.row(&[num(*r), num(v.value), num(v.error)]);
        }
        let d = rounded_growth(&fit);
        let verdict = format!("volume: |C(R/2,R) ∩ {region}| grows like R^{:.4} (≈ R^{d})", fit.slope);
        let body = json!({ "rows": rows, "fit": fit, "rounded_growth": d.to_string() });
        return Ok(outcome(c, t, report(c, body), verdict, true));
    }
    let numeric = c.quadrature.integrate(region, 0x70, |_| 1.0)?;
    let analytic = match region.volume(VolumeMethod::Analytic) {
        Ok(v) => Some(v.value),
        Err(Error::AnalyticUnavailable(_)) => None,
        Err(e) => return Err(e),
    };
    let mut t = Table::with_header("method,volume,error");
    t.row(&["quadrature".into(), num(numeric.value), num(numeric.error)]);
    let (pass, verdict) = match analytic {
        Some(a) => {
            t.row(&["analytic".into(), num(a), num(0.0)]);
            let allowed = c.tolerances.volume_sigmas * numeric.error + c.quadrature.rel_tol * a;
            let ok = (numeric.value - a).abs() <= allowed;
            let word = if ok { "agrees" } else { "DISAGREES" };
            (ok, format!("volume: {region}: quadrature {:.6e} {word} with closed form {a:.6e}", numeric.value))
        }
        None => (true, format!("volume: {region}: {:.6e} ± {:.1e}", numeric.value, numeric.error)),
    };
    let body = json!({ "quadrature": numeric, "analytic": analytic, "pass": pass });
    Ok(outcome(c, t, report(c, body), verdict, pass))
}

fn slope_bound(preset: &Option<Preset>, term: Term, slack: f64) -> Option<f64> {
    preset.as_ref().map(|p| predicted_exponent(p, term).worst_exponent().to_f64().unwrap_or(f64::NAN) + slack)
}

fn decay(c: &RunConfig) -> Result<Outcome> {
    let spec = c.exponent()?;
    let preset = spec.preset()?;
    let p = spec.field()?;
    let radii = c.radii()?;
    let conj = |k| p.holder_conjugate(k).map_err(|e| usage("exponent", e));
    let lap = cutoff_norm_decay(CutoffKind::Laplacian, &conj(2)?, &radii, &c.quadrature)?;
    let grad = cutoff_norm_decay(CutoffKind::Gradient, &conj(3)?, &radii, &c.quadrature)?;
    let mut t = Table::new(Command::Decay);
    for (l, g) in lap.norms.iter().zip(&grad.norms) {
        t.row(&[num(l.0), num(l.1.value), num(l.1.abs_error), num(g.1.value), num(g.1.abs_error)]);
    }
    let slack = c.tolerances.slope_slack;
    let (lb, gb) = (slope_bound(&preset, Term::Alpha, slack), slope_bound(&preset, Term::Beta, slack));
    let pass = lb.is_none_or(|b| lap.fit.slope <= b) && gb.is_none_or(|b| grad.fit.slope <= b);
    let verdict = match (lb, gb) {
        (Some(lb), Some(gb)) => format!(
            "decay: slopes Δθ {:.4} (≤ {lb:.4}), ∇θ {:.4} (≤ {gb:.4}): {}",
            lap.fit.slope,
            grad.fit.slope,
            if pass { "certified" } else { "FAILED" }
        ),
        _ => format!("decay: slopes Δθ {:.4}, ∇θ {:.4}", lap.fit.slope, grad.fit.slope),
    };
    let body = json!({ "laplacian": lap, "gradient": grad, "laplacian_bound": lb, "gradient_bound": gb, "pass": pass });
    Ok(outcome(c, t, report(c, body), verdict, pass))
}

fn energy(c: &RunConfig) -> Result<Outcome> {
    let (u, p) = c.field()?.flow()?;
    let radii = match c.radius {
        Some(r) => vec![r],
        None => c.radii()?,
    };
    let mut t = Table::new(Command::Energy);
    let mut checks = Vec::with_capacity(radii.len());
    for (k, &r) in radii.iter().enumerate() {
        let cut = RadialCutoff::new(r).map_err(|e| usage("radius", e))?;
        let e = energy_identity_check(&u, &p, &cut, &c.quadrature.with_seed_offset(k as u64))?;
        t.row(&[num(r), num(e.lhs.value), num(e.alpha.value), num(e.beta.value), num(e.rhs), num(e.relative_gap), num(e.max_residual)]);
        checks.push(e);
    }
    let gap = checks.iter().map(|e| e.relative_gap).fold(0.0, f64::max);
    let residual = checks.iter().map(|e| e.max_residual).fold(0.0, f64::max);
    let solution = checks.iter().all(|e| e.pass.is_some());
    let pass = !solution || gap <= c.tolerances.energy_gap;
    let verdict = if !solution {
        format!("energy: withheld, (u, P) is not a solution (residual {residual:.2e}); max gap {gap:.2e}")
    } else if pass {
        format!("energy: identity holds at {} radii, max relative gap {gap:.2e}", checks.len())
    } else {
        format!("energy: FAILED, max relative gap {gap:.2e} > {:.2e}", c.tolerances.energy_gap)
    };
    let body = json!({ "checks": checks, "max_relative_gap": gap, "pass": solution.then_some(pass) });
    Ok(outcome(c, t, report(c, body), verdict, pass))
}

fn alpha_beta(c: &RunConfig) -> Result<Outcome> {
    let (u, p) = c.field()?.flow()?;
    let mut t = Table::new(Command::AlphaBeta);
    let mut rows = Vec::new();
    for (k, r) in c.radii()?.into_iter().enumerate() {
        let cut = RadialCutoff::new(r).map_err(|e| usage("r_grid.start", e))?;
        let q = c.quadrature.with_seed_offset(k as u64);
        let a = alpha(&u, &cut, &q)?;
        let b = beta(&u, &p, &cut, &q)?;
        t.row(&[
            num(r),
            num(a.value),
            num(a.error),
            num(b.beta1.value),
            num(b.beta1.error),
            num(b.beta2.value),
            num(b.beta2.error),
            num(b.beta.value),
            num(b.beta.error),
        ]);
        rows.push(json!({ "R": r, "alpha": a, "beta": b }));
    }
    let verdict = format!("alpha-beta: {} radii tabulated for {}", rows.len(), u.name());
    Ok(outcome(c, t, report(c, json!({ "rows": rows })), verdict, true))
}

fn certify(c: &RunConfig) -> Result<Outcome> {
    let spec = c.exponent()?;
    let preset = spec.preset_unchecked().ok_or_else(|| Error::Config {
        field: "exponent.kind".into(),
        reason: "`certify` needs a preset (t1, t2 or t3)".into(),
    })?;
    let bound = match (spec, preset) {
        (ExponentSpec::T1 { p_out, .. }, _) => admissible_upper_bound(InnerKind::Cylinder, *p_out),
        (ExponentSpec::T2 { gamma, p_out, .. }, _) => admissible_upper_bound(InnerKind::Cusp { gamma: *gamma }, *p_out),
        (_, p @ Preset::T3 { .. }) => p.validate().map(|_| None),
        _ => unreachable!("preset variants"),
    }
    .map_err(|e| usage("exponent", e))?;
    let band = preset.validate().err().map(|e| e.to_string());
    let a = predicted_exponent(&preset, Term::Alpha);
    let b = predicted_exponent(&preset, Term::Beta);
    let mut t = Table::new(Command::Certify);
    for e in a.entries.iter().chain(&b.entries) {
        let term = match e.term {
            Term::Alpha => "alpha",
            Term::Beta => "beta",
        };
        t.row(&[
            term.into(),
            e.piece.clone(),
            e.volume_growth.to_string(),
            e.conjugate_bound.to_string(),
            e.exponent.to_string(),
            e.negative.to_string(),
        ]);
    }
    let pass = a.overall && b.overall;
    let bound_text = match bound {
        Some(r) if r.is_integer() => format!("p_in < {r}"),
        Some(r) => format!("p_in < {r} = {}", r.to_f64().unwrap_or(f64::NAN)),
        None => "any p_in (upper bound +inf)".into(),
    };
    let verdict = format!(
        "certify: {}: admissible inner exponents {bound_text}; α exponent {}, β exponent {}: {}",
        describe(&preset),
        a.worst_exponent(),
        b.worst_exponent(),
        if pass { "certified" } else { "FAILED" }
    );
    let body = json!({
        "alpha": a,
        "beta": b,
        "upper_bound": bound.map_or("inf".to_string(), |r| r.to_string()),
        "upper_bound_value": bound.and_then(|r| r.to_f64()),
        "band_violation": band,
        "pass": pass,
    });
    Ok(outcome(c, t, report(c, body), verdict, pass))
}

fn lemmas(c: &RunConfig) -> Result<Outcome> {
    let f = c.field()?.scalar()?;
    let p = c.exponent()?.field()?;
    let region = c.region()?;
    let q = &c.quadrature;
    let s = c.power.unwrap_or(2.0);
    let l1 = lemma1_check(&p, region, q)?;
    let l2 = lemma2_check(&f, &p, region, q)?;
    let rs = restriction_identity_check(&f, &p, region, q)?;
    let pw = power_identity_check(&f, &p, s, region, q).map_err(|e| usage("power", e))?;
    let half = p.scaled(2.0)?;
    let h = holder_check(&[(&f, &half), (&f, &half)], &p, region, q)?;

    let rs_pass = rs.within(c.tolerances.restriction_factor);
    let pw_pass = pw.relative_deviation <= 3.0 * pw.relative_tolerance + 1e-9;
    let mut t = Table::new(Command::Lemmas);
    let mut add = |name: &str, lhs: f64, rhs: f64, tol: f64, pass: bool| {
        t.row(&[name.into(), num(lhs), num(rhs), num(tol), pass.to_string()]);
    };
    add("lemma1", l1.lhs, l1.rhs, l1.tolerance, l1.pass);
    add("lemma2", l2.lhs, l2.rhs, l2.tolerance, l2.pass);
    add("restriction", rs.lhs.value, rs.rhs.value, c.tolerances.restriction_factor * rs.combined_tolerance, rs_pass);
    add("power", pw.lhs, pw.rhs, 3.0 * pw.relative_tolerance * pw.rhs, pw_pass);
    add("holder", h.numerator, h.threshold * h.denominator, 0.0, !h.flagged);
    let results = [("lemma1", l1.pass), ("lemma2", l2.pass), ("restriction", rs_pass), ("power", pw_pass), ("holder", !h.flagged)];
    let failed: Vec<&str> = results.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    let pass = failed.is_empty();
    let verdict = if pass {
        format!("lemmas: all 5 checks pass on {region}")
    } else {
        format!("lemmas: FAILED {} on {region}", failed.join(", "))
    };
    let body = json!({
        "lemma1": l1, "lemma2": l2, "restriction": rs, "power": pw, "power_s": s, "holder": h, "pass": pass,
    });
    Ok(outcome(c, t, report(c, body), verdict, pass))
}

fn liouville(c: &RunConfig) -> Result<Outcome> {
    let preset = c.exponent()?.preset()?.ok_or_else(|| Error::Config {
        field: "exponent.kind".into(),
        reason: "`liouville` needs a preset (t1, t2 or t3)".into(),
    })?;
    let (u, p) = c.field()?.flow()?;
    let rep = liouville_pipeline(&preset, &u, &p, &c.radii()?, &c.quadrature, c.tolerances.slope_slack)?;
    let mut t = Table::new(Command::Liouville);
    for r in &rep.rows {
        t.row(&[num(r.radius), num(r.alpha), num(r.beta1), num(r.beta2), num(r.beta), num(r.lap_norm), num(r.grad_norm), num(r.errors)]);
    }
    let sobolev = "Sobolev step: u ∈ L^{p(·)} and ∇u = 0 force u ≡ 0 (a nonzero constant is not in L^{p(·)}(ℝ³))";
    let verdict = format!("liouville: {}: {}", rep.tier, rep.conclusion);
    let pass = rep.tier != Tier::Inconclusive;
    let body = json!({ "report": rep, "sobolev_step": sobolev });
    Ok(outcome(c, t, report(c, body), verdict, pass))
}

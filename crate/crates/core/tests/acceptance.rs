//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::time::Instant;

use num_rational::Rational64;
use proptest::test_runner::{Config, TestRunner};
use varexp::cutoff::make_cutoff;
use varexp::estimates::{
    admissible_upper_bound, cutoff_norm_decay, energy_identity_check, geometric_grid, predicted_exponent, volume_growth,
    CutoffKind, InnerKind, Term,
};
use varexp::exponents::{ExponentField, Preset};
use varexp::fields::{decaying_solenoidal, gradient_counterexample, membership_scan, ScalarField3, Verdict};
use varexp::norms::{lemma1_check, lemma2_check, luxemburg_norm};
use varexp::quadrature::Quadrature;
use varexp::regions::Region;
use varexp::{pt, Point};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// T1(5, 4), T2(γ) at the middle of its band, T3(σ), all with p_out = 4.
fn preset_matrix() -> Vec<Preset> {
    let mut v = vec![Preset::t1(r(5, 1), r(4, 1)).unwrap()];
    for g in [r(1, 4), r(1, 2), r(3, 4)] {
        let p_in = (r(9, 2) + Preset::cusp_band_top(g)) / 2;
        v.push(Preset::t2(g, p_in, r(4, 1)).unwrap());
    }
    for s in [r(1, 4), r(1, 2), r(3, 4)] {
        v.push(Preset::t3(s, r(4, 1)).unwrap());
    }
    v
}

fn c1_constant_exponent() -> Outcome {
    let start = Instant::now();
    let q = Quadrature::radial(64, 16, 16).with_tol(1e-7).with_truncation(8.0);
    let mut worst: f64 = 0.0;
    for p in [2.0, 3.0, 4.0, 6.0] {
        let n = luxemburg_norm(&ScalarField3::gaussian(), &ExponentField::constant(p).unwrap(), &Region::Whole, &q).unwrap();
        let exact = (std::f64::consts::PI / p).powf(1.5 / p);
        worst = worst.max((n.value / exact - 1.0).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst <= 1e-3 && secs < 10.0, format!("max relative error {worst:.2e} (≤ 1e-3), {secs:.2} s (< 10 s)"))
}

fn c2_property_suites() -> Outcome {
    let runner = || TestRunner::new(Config { cases: 200, failure_persistence: None, ..Config::default() });
    let results = [
        ("unit-ball", runner().run(&common::case(), common::unit_ball).err().map(|e| e.to_string())),
        ("homogeneity", runner().run(&(common::case(), common::scalar()), common::homogeneity).err().map(|e| e.to_string())),
        ("monotonicity", runner().run(&(common::case(), common::bump()), common::monotonicity).err().map(|e| e.to_string())),
    ];
    let failed: Vec<String> = results.iter().filter_map(|(n, e)| e.as_ref().map(|e| format!("{n}: {e}"))).collect();
    if failed.is_empty() {
        outcome(true, "unit-ball (5·tol), homogeneity (2·tol), monotonicity (+tol): 200 cases each")
    } else {
        outcome(false, failed.join("; "))
    }
}

fn c3_embedding_matrix() -> Outcome {
    let f = ScalarField3::new("1/(1+|x|)", |x: &Point| 1.0 / (1.0 + x.norm()));
    let regions = [
        Region::ball(Point::zeros(), 2.0).unwrap(),
        Region::annulus(2.0, 4.0).unwrap(),
        Region::annulus(8.0, 16.0).unwrap(),
    ];
    let mut failures = Vec::new();
    let mut count = 0;
    for (i, preset) in preset_matrix().iter().enumerate() {
        let p = preset.field().unwrap();
        for (j, omega) in regions.iter().enumerate() {
            let q = Quadrature::stratified(100_000, (10 * i + j) as u64, 32);
            let l1 = lemma1_check(&p, omega, &q).unwrap();
            let l2 = lemma2_check(&f, &p, omega, &q).unwrap();
            count += 2;
            if !l1.pass {
                failures.push(format!("‖1‖ bound {} on {omega}", preset.name()));
            }
            if !l2.pass {
                failures.push(format!("‖f‖ bound {} on {omega}", preset.name()));
            }
        }
    }
    outcome(failures.is_empty(), format!("{}/{count} checks pass {}", count - failures.len(), failures.join(", ")))
}

/// |C(R/2, R) ∩ {x₁ > 0, x₂² + x₃² ≤ ρ(x₁)²}| by composite Simpson in u = ln x₁,
/// which resolves the thin layer near x₁ = 0 where a horn is wider than the shell.
fn axial_oracle(radius: f64, rho2: impl Fn(f64) -> f64) -> f64 {
    let area = |x: f64| {
        let outer = rho2(x).min(radius * radius - x * x);
        let inner = (radius * radius / 4.0 - x * x).max(0.0);
        std::f64::consts::PI * (outer - inner).max(0.0) * x
    };
    let simpson = |a: f64, b: f64, n: usize| {
        let h = (b - a) / n as f64;
        let mut s = area(a.exp()) + area(b.exp());
        for k in 1..n {
            s += area((a + k as f64 * h).exp()) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    };
    let (lo, mid, hi) = ((1e-40f64).ln(), (radius / 2.0).ln(), radius.ln());
    simpson(lo, mid, 400_000) + simpson(mid, hi, 100_000)
}

fn ls_slope(radii: &[f64], values: &[f64]) -> f64 {
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn c4_volume_growth() -> Outcome {
    let radii = geometric_grid(2.0, 2.0, 8);
    let shell = |r: f64| 4.0 * std::f64::consts::PI / 3.0 * (r.powi(3) - r.powi(3) / 8.0);
    let cyl = |r: f64| 2.0 * axial_oracle(r, |_| 1.0);
    let mut cases: Vec<(String, Region, f64, Box<dyn Fn(f64) -> f64>)> = vec![
        ("C".into(), Region::Cylinder, 1.0, Box::new(cyl)),
        ("complement of C".into(), Region::Cylinder.complement(), 3.0, Box::new(move |r| shell(r) - cyl(r))),
    ];
    for g in [0.25, 0.5, 0.75] {
        cases.push((format!("S(γ={g})"), Region::power_cusp(g).unwrap(), 2.0 * g + 1.0, Box::new(move |r| axial_oracle(r, |x| x.powf(2.0 * g)))));
    }
    for s in [0.25, 0.5, 0.75] {
        cases.push((format!("N(σ={s})"), Region::shrink_cusp(s).unwrap(), 1.0 - s, Box::new(move |r| axial_oracle(r, |x| x.powf(-s)))));
    }
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, (name, region, want, exact)) in cases.iter().enumerate() {
        let q = Quadrature::stratified(400_000, 40 + k as u64, 64);
        let (_, fit) = volume_growth(region, &radii, &q).unwrap();
        let oracle = ls_slope(&radii, &radii.iter().map(|r| exact(*r)).collect::<Vec<_>>());
        let ok = (fit.slope - want).abs() <= 0.1;
        pass &= ok;
        parts.push(format!(
            "{name}: {:.3} vs {want:.2}{} (exact geometry {oracle:.3})",
            fit.slope,
            if ok { "" } else { " OUT OF ±0.1" }
        ));
    }
    outcome(pass, parts.join("; "))
}

/// S′(t) = 30t²(1−t)², S″(t) = 60t(1−t)(1−2t) for the quintic transition.
fn c5_cutoff_scaling() -> Outcome {
    let radii = geometric_grid(2.0, 2.0, 8);
    let mut grad = Vec::new();
    let mut lap = Vec::new();
    for &rr in &radii {
        let c = make_cutoff(rr).unwrap();
        let (mut g, mut l): (f64, f64) = (0.0, 0.0);
        for k in 0..=20_000 {
            let rho = rr / 2.0 + rr / 2.0 * k as f64 / 20_000.0;
            let x = pt(rho, 0.0, 0.0);
            g = g.max(c.grad(&x).norm());
            l = l.max(c.laplacian(&x).abs());
        }
        grad.push(rr * g);
        lap.push(rr * rr * l);
    }
    let want = 2.0 * 30.0 / 16.0;
    let spread = grad.iter().map(|v| (v - want).abs()).fold(0.0, f64::max);
    let lap_max = lap.iter().cloned().fold(0.0, f64::max);
    let lap_min = lap.iter().cloned().fold(f64::INFINITY, f64::min);
    outcome(
        spread <= 1e-6 && lap_max / lap_min <= 1.0 + 1e-6,
        format!("R·sup|∇θ_R| = {want} ± {spread:.1e}; R²·sup|Δθ_R| ∈ [{lap_min:.6}, {lap_max:.6}]"),
    )
}

fn c6_decay_certification() -> Outcome {
    let start = Instant::now();
    let p = Preset::t1(r(5, 1), r(4, 1)).unwrap().field().unwrap();
    let radii = geometric_grid(8.0, 2.0, 6);
    let q = Quadrature::stratified(1_000_000, 6, 64);
    let lap = cutoff_norm_decay(CutoffKind::Laplacian, &p.holder_conjugate(2).unwrap(), &radii, &q).unwrap();
    let grad = cutoff_norm_decay(CutoffKind::Gradient, &p.holder_conjugate(3).unwrap(), &radii, &q).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok = lap.fit.slope <= -0.5 + 0.15 && grad.fit.slope <= -0.25 + 0.15 && secs < 300.0;
    outcome(
        ok,
        format!(
            "slopes Δθ {:.4} (≤ -0.35), ∇θ {:.4} (≤ -0.10), {secs:.1} s at 10⁶ samples per R (< 300 s)",
            lap.fit.slope, grad.fit.slope
        ),
    )
}

fn c7_thresholds() -> Outcome {
    let p_out = r(4, 1);
    let mut ok = true;
    for g in [r(1, 4), r(1, 2), r(3, 4), r(1, 1)] {
        let want = (r(6, 1) * g + 3) / (r(2, 1) * g);
        ok &= admissible_upper_bound(InnerKind::Cusp { gamma: g }, p_out).unwrap() == Some(want);
    }
    let at_one = admissible_upper_bound(InnerKind::Cusp { gamma: r(1, 1) }, p_out).unwrap();
    ok &= at_one == Some(r(9, 2));
    let mut last = r(0, 1);
    for k in 1..=6 {
        let b = admissible_upper_bound(InnerKind::Cusp { gamma: r(1, 10i64.pow(k)) }, p_out).unwrap().unwrap();
        ok &= b > last && b > r(10i64.pow(k), 1);
        last = b;
    }
    ok &= admissible_upper_bound(InnerKind::Cylinder, p_out).unwrap().is_none();
    outcome(ok, format!("(6γ+3)/(2γ) exact for γ ∈ {{1/4, 1/2, 3/4, 1}}, 9/2 at γ = 1, unbounded as γ → 0⁺ (γ = 10⁻⁶ gives {last})"))
}

fn c8_energy_identity() -> Outcome {
    let (u, p) = gradient_counterexample();
    let q = Quadrature::radial(48, 16, 16);
    let mut ok = true;
    let mut parts = Vec::new();
    for rr in [4.0, 8.0, 16.0] {
        let e = energy_identity_check(&u, &p, &make_cutoff(rr).unwrap(), &q).unwrap();
        let beta_zero = e.beta.value.abs() <= e.beta.error + 1e-10 * e.alpha.value.abs();
        ok &= e.relative_gap <= 1e-2 && beta_zero;
        parts.push(format!("R={rr}: gap {:.1e}, β {:.1e}", e.relative_gap, e.beta.value));
    }
    outcome(ok, parts.join("; "))
}

fn c9_negative_certificate() -> Outcome {
    let bad = Preset::T2 { gamma: r(1, 2), p_in: r(7, 1), p_out: r(4, 1) };
    let c = predicted_exponent(&bad, Term::Beta);
    let has = c.entries.iter().any(|e| e.exponent == r(1, 7) && !e.negative);
    outcome(!c.overall && has && bad.validate().is_err(), format!("certificate overall = {}, contains +1/7: {has}", c.overall))
}

fn c10_membership() -> Outcome {
    let radii = geometric_grid(4.0, 2.0, 6);
    let q = Quadrature::stratified(100_000, 10, 32);
    let (u, _) = gradient_counterexample();
    let mag = u.magnitude();
    let mut ok = true;
    let mut diverging = 0;
    let presets = preset_matrix();
    for preset in &presets {
        let v = membership_scan(&mag, &preset.field().unwrap(), &radii, &q).unwrap().verdict;
        ok &= v == Verdict::Diverging;
        diverging += usize::from(v == Verdict::Diverging);
    }
    let w = decaying_solenoidal(2.0).unwrap().magnitude();
    let v = membership_scan(&w, &Preset::t1(r(5, 1), r(4, 1)).unwrap().field().unwrap(), &radii, &q).unwrap().verdict;
    ok &= v == Verdict::Convergent;
    outcome(ok, format!("counterexample diverging for {diverging}/{} presets; decaying_solenoidal(2) with T1(5,4): {v}", presets.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("constant-exponent reduction", c1_constant_exponent),
        ("norm property suites", c2_property_suites),
        ("embedding-bound matrix", c3_embedding_matrix),
        ("volume-growth slopes", c4_volume_growth),
        ("cutoff scaling", c5_cutoff_scaling),
        ("decay certification T1(5,4)", c6_decay_certification),
        ("threshold reproduction", c7_thresholds),
        ("energy identity", c8_energy_identity),
        ("negative certificate", c9_negative_certificate),
        ("membership discrimination", c10_membership),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.pass);
        println!("criterion {:>2} {} {name}: {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Strategies and property bodies shared by the property suite and the acceptance run.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use varexp::exponents::{ExponentField, ExponentPiece};
use varexp::fields::ScalarField3;
use varexp::norms::{luxemburg_norm, modular, NormStatus};
use varexp::quadrature::Quadrature;
use varexp::regions::Region;
use varexp::{pt, Point};

/// a·exp(−b|x − c|²) + d with a random centre.
#[derive(Clone, Debug)]
pub struct Bump {
    pub a: f64,
    pub b: f64,
    pub c: [f64; 3],
    pub d: f64,
}

impl Bump {
    pub fn field(&self) -> ScalarField3 {
        let Bump { a, b, c, d } = self.clone();
        ScalarField3::new("bump", move |x: &Point| a * (-b * (x - pt(c[0], c[1], c[2])).norm_squared()).exp() + d)
    }
}

pub fn bump() -> impl Strategy<Value = Bump> {
    (-5.0..5.0f64, 0.05..3.0f64, prop::array::uniform3(-1.5..1.5f64), 0.0..2.0f64)
        .prop_map(|(a, b, c, d)| Bump { a, b, c, d })
        .prop_filter("not identically zero", |f| f.a.abs() > 1e-3 || f.d > 1e-3)
}

pub fn region() -> impl Strategy<Value = Region> {
    prop_oneof![
        (prop::array::uniform3(-1.0..1.0f64), 0.3..3.0f64).prop_map(|(c, r)| Region::ball(pt(c[0], c[1], c[2]), r).unwrap()),
        (0.1..2.0f64, 0.2..2.0f64).prop_map(|(i, w)| Region::annulus(i, i + w).unwrap()),
    ]
}

/// Constant, or a ball piece over a default, with finite values in [1, 8].
pub fn exponent() -> impl Strategy<Value = ExponentField> {
    prop_oneof![
        (1.0..8.0f64).prop_map(|p| ExponentField::constant(p).unwrap()),
        (1.0..8.0f64, 1.0..8.0f64, 0.2..2.0f64).prop_map(|(pi, po, r)| {
            ExponentField::new(
                vec![(Region::ball(Point::zeros(), r).unwrap(), ExponentPiece::constant(pi).unwrap())],
                ExponentPiece::constant(po).unwrap(),
            )
            .unwrap()
        }),
    ]
}

pub fn quad() -> impl Strategy<Value = Quadrature> {
    prop_oneof![
        (0u64..1000).prop_map(|s| Quadrature::monte_carlo(3000, s)),
        (0u64..1000).prop_map(|s| Quadrature::stratified(3000, s, 8)),
        Just(Quadrature::radial(12, 6, 8)),
    ]
}

pub fn scalar() -> impl Strategy<Value = f64> {
    prop_oneof![-50.0..-0.02f64, 0.02..50.0f64]
}

pub type Case = (Bump, ExponentField, Region, Quadrature);

pub fn case() -> impl Strategy<Value = Case> {
    (bump(), exponent(), region(), quad())
}

/// ϱ(f/‖f‖) = 1 within 5·tol.
pub fn unit_ball((f, p, omega, q): Case) -> Result<(), TestCaseError> {
    let f = f.field();
    let n = luxemburg_norm(&f, &p, &omega, &q).unwrap();
    prop_assume!(n.status == NormStatus::Finite);
    let rho = modular(&f.scaled(1.0 / n.value), &p, &omega, &q).unwrap().value;
    prop_assert!((rho - 1.0).abs() <= 5.0 * q.rel_tol, "ϱ(f/‖f‖) = {}", rho);
    Ok(())
}

/// ‖c·f‖ = |c|·‖f‖ within 2·tol.
pub fn homogeneity(((f, p, omega, q), c): (Case, f64)) -> Result<(), TestCaseError> {
    let f = f.field();
    let n = luxemburg_norm(&f, &p, &omega, &q).unwrap();
    prop_assume!(n.status == NormStatus::Finite);
    let m = luxemburg_norm(&f.scaled(c), &p, &omega, &q).unwrap();
    let want = c.abs() * n.value;
    prop_assert!((m.value - want).abs() <= 2.0 * q.rel_tol * want, "{} vs {}", m.value, want);
    Ok(())
}

/// |f| ≤ |f| + |h| pointwise, so ‖f‖ ≤ ‖|f| + |h|‖ + tol.
pub fn monotonicity(((f, p, omega, q), h): (Case, Bump)) -> Result<(), TestCaseError> {
    let f = f.field();
    let h = h.field();
    let g = f.map("|f|", f64::abs);
    let g = ScalarField3::new("|f| + |h|", move |x: &Point| g.value(x) + h.value(x).abs());
    let nf = luxemburg_norm(&f, &p, &omega, &q).unwrap();
    let ng = luxemburg_norm(&g, &p, &omega, &q).unwrap();
    prop_assert!(nf.value <= ng.value * (1.0 + q.rel_tol), "{} > {}", nf.value, ng.value);
    Ok(())
}

/// Constant p₀ gives (∫|f|^{p₀})^{1/p₀} within 2·tol.
pub fn constant_reduction((f, p0, omega, q): (Bump, f64, Region, Quadrature)) -> Result<(), TestCaseError> {
    let f = f.field();
    let n = luxemburg_norm(&f, &ExponentField::constant(p0).unwrap(), &omega, &q).unwrap();
    // same node set as the norm's single piece
    let classical = q.integrate(&omega, 0x100, |x| f.value(x).abs().powf(p0)).unwrap().value.powf(1.0 / p0);
    prop_assert!((n.value - classical).abs() <= 2.0 * q.rel_tol * classical, "{} vs {}", n.value, classical);
    Ok(())
}

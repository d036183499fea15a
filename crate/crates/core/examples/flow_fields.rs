//! Manufactured velocity fields, residuals and membership scans.
use num_rational::Rational64;
use varexp::estimates::geometric_grid;
use varexp::exponents::{ExponentField, Preset};
use varexp::fields::{decaying_solenoidal, derivative_consistency, gradient_counterexample, membership_scan, ns_residual, smoke_grid};
use varexp::quadrature::Quadrature;
use varexp::pt;

pub fn main() {
    let (u, p) = gradient_counterexample();
    let x = pt(1.0, -2.0, 0.5);
    println!("counterexample: u = {:?}, P = {}, |residual| = {:e}", u.value(&x).as_slice(), p.value(&x), ns_residual(&u, &p, &x).norm());

    let w = decaying_solenoidal(2.0).unwrap();
    let grid = smoke_grid(5, 2.0);
    println!("{}: div = {:.1e}, jacobian vs differences {:.1e}", w.name(), w.divergence(&x), derivative_consistency(&w, &grid));

    let radii = geometric_grid(4.0, 2.0, 6);
    let q = Quadrature::stratified(50_000, 2, 32);
    let t1 = Preset::t1(Rational64::from_integer(5), Rational64::from_integer(4)).unwrap().field().unwrap();
    println!("|u| in L^p(·), T1(5,4): {}", membership_scan(&u.magnitude(), &t1, &radii, &q).unwrap().verdict);
    println!("|w| in L^p(·), T1(5,4): {}", membership_scan(&w.magnitude(), &t1, &radii, &q).unwrap().verdict);
    let w15 = decaying_solenoidal(1.5).unwrap();
    let four = ExponentField::constant(4.0).unwrap();
    println!("|w_1.5| in L^4: {}", membership_scan(&w15.magnitude(), &four, &radii, &q).unwrap().verdict);
}

//! Luxemburg norms: constant-exponent reduction, truncation tails and p = ∞ pieces.
use num_rational::Rational64;
use varexp::exponents::{ExponentField, Preset};
use varexp::fields::ScalarField3;
use varexp::norms::{luxemburg_norm, modular};
use varexp::quadrature::Quadrature;
use varexp::regions::Region;
use varexp::Point;

pub fn main() {
    // the Gaussian needs a truncation radius; its declared decay bounds the tail
    let q = Quadrature::radial(64, 16, 16).with_tol(1e-8).with_truncation(8.0);
    for p in [2.0, 3.0, 4.0, 6.0] {
        let n = luxemburg_norm(&ScalarField3::gaussian(), &ExponentField::constant(p).unwrap(), &Region::Whole, &q).unwrap();
        let exact = (std::f64::consts::PI / p).powf(1.5 / p);
        println!("p = {p}: ‖e^(-|x|²)‖ = {:.10} (exact {exact:.10}, {} bisection steps)", n.value, n.evaluations);
    }

    let ball = Region::ball(Point::zeros(), 1.0).unwrap();
    let rho = modular(&ScalarField3::constant(2.0), &ExponentField::constant(3.0).unwrap(), &ball, &q).unwrap();
    println!("ϱ(2) over B(0,1) with p = 3: {:.6} (8|B| = {:.6})", rho.value, 8.0 * 4.0 * std::f64::consts::PI / 3.0);

    // on a p = ∞ piece the norm is the essential supremum
    let t3 = Preset::t3(Rational64::new(1, 2), Rational64::from_integer(4)).unwrap().field().unwrap();
    let horn = Region::shrink_cusp(0.5).unwrap().intersect(Region::annulus(1.0, 3.0).unwrap());
    let n = luxemburg_norm(&ScalarField3::constant(2.0), &t3, &horn, &Quadrature::stratified(100_000, 1, 32)).unwrap();
    println!("‖2‖ on the horn with p = ∞: {} ({})", n.value, n.status);
}

//! Embedding bounds for ‖1‖ and ‖f‖, the restriction identity, the power identity and Hölder's inequality.
use num_rational::Rational64;
use varexp::exponents::Preset;
use varexp::fields::ScalarField3;
use varexp::norms::{holder_check, lemma1_check, lemma2_check, power_identity_check, restriction_identity_check};
use varexp::quadrature::Quadrature;
use varexp::regions::Region;
use varexp::Point;

pub fn main() {
    let p = Preset::t1(Rational64::from_integer(5), Rational64::from_integer(4)).unwrap().field().unwrap();
    let f = ScalarField3::new("1/(1+|x|)", |x: &Point| 1.0 / (1.0 + x.norm()));
    let q = Quadrature::stratified(100_000, 4, 32);
    for omega in [Region::ball(Point::zeros(), 2.0).unwrap(), Region::annulus(2.0, 4.0).unwrap()] {
        let l1 = lemma1_check(&p, &omega, &q).unwrap();
        let l2 = lemma2_check(&f, &p, &omega, &q).unwrap();
        println!("{omega}: ‖1‖ = {:.5} ≤ {:.5}; ‖f‖ = {:.5} ≤ {:.5}", l1.lhs, l1.rhs, l2.lhs, l2.rhs);
        let rs = restriction_identity_check(&f, &p, &omega, &q).unwrap();
        println!("  restriction: {:.6} vs {:.6} (within 3σ: {})", rs.lhs.value, rs.rhs.value, rs.within(3.0));
        let pw = power_identity_check(&f, &p, 2.0, &omega, &q).unwrap();
        println!("  ‖f²‖_(p/2) = {:.6}, ‖f‖²_p = {:.6}", pw.lhs, pw.rhs);
    }
    let omega = Region::annulus(2.0, 4.0).unwrap();
    let half = p.scaled(2.0).unwrap();
    let h = holder_check(&[(&f, &half), (&f, &half)], &p, &omega, &q).unwrap();
    println!("Hölder ratio ‖f·f‖/(‖f‖‖f‖) = {:.4} (flag above {})", h.ratio, h.threshold);
}

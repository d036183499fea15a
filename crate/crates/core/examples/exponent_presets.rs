//! The three preset exponent fields, their bounds, conjugates and log-Hölder diagnostic.
use num_rational::Rational64;
use varexp::exponents::{log_holder_diagnostic, ExponentField, Preset};
use varexp::regions::Region;
use varexp::pt;

pub fn main() {
    let t1 = Preset::t1(Rational64::from_integer(5), Rational64::from_integer(4)).unwrap();
    let p = t1.field().unwrap();
    println!("{}: p(0, 0.1, 0.1) = {}, p(0, 3, 0) = {}", t1.name(), p.evaluate(&pt(0.0, 0.1, 0.1)), p.evaluate(&pt(0.0, 3.0, 0.0)));
    let b = p.essential_bounds(&Region::annulus(4.0, 8.0).unwrap(), 0).unwrap();
    println!("bounds over Annulus(4, 8): [{}, {}]", b.inf, b.sup);

    // q = p/(p−2) and r = p/(p−3) drive the α and β estimates
    let q = p.holder_conjugate(2).unwrap();
    let r = p.holder_conjugate(3).unwrap();
    println!("q inside/outside: {} / {}", q.evaluate(&pt(0.0, 0.1, 0.1)), q.evaluate(&pt(0.0, 3.0, 0.0)));
    println!("r inside/outside: {} / {}", r.evaluate(&pt(0.0, 0.1, 0.1)), r.evaluate(&pt(0.0, 3.0, 0.0)));

    let half = Rational64::new(1, 2);
    println!("cusp band for γ = 1/2: (9/2, {})", Preset::cusp_band_top(half));
    match Preset::t2(half, Rational64::from_integer(7), Rational64::from_integer(4)) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
    let t3 = Preset::t3(half, Rational64::from_integer(4)).unwrap().field().unwrap();
    println!("T3 on the horn: p(1, 0.1, 0) = {}", t3.evaluate(&pt(1.0, 0.1, 0.0)));

    for (name, field) in [("constant 3", ExponentField::constant(3.0).unwrap()), ("T1(5,4)", p)] {
        let d = log_holder_diagnostic(&field, 400, 1);
        match d.reason {
            Some(why) => println!("log-Hölder {name}: fails, {why}"),
            None => println!("log-Hölder {name}: holds"),
        }
    }
}

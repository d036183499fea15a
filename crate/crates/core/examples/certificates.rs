//! Exact exponent certificates and the admissible inner-exponent threshold.
use num_rational::Rational64;
use varexp::estimates::{admissible_upper_bound, predicted_exponent, InnerKind, Term};
use varexp::exponents::Preset;

pub fn main() {
    let r = Rational64::new;
    let t1 = Preset::t1(r(5, 1), r(4, 1)).unwrap();
    for term in [Term::Alpha, Term::Beta] {
        let c = predicted_exponent(&t1, term);
        for e in &c.entries {
            println!("{term:?} on {}: R^({}) with d = {}", e.piece, e.exponent, e.volume_growth);
        }
    }
    for g in [r(1, 4), r(1, 2), r(3, 4), r(1, 1)] {
        let b = admissible_upper_bound(InnerKind::Cusp { gamma: g }, r(4, 1)).unwrap().unwrap();
        println!("cusp γ = {g}: p_in < {b}");
    }
    // out-of-band presets can still be built unchecked to see what fails
    let bad = Preset::T2 { gamma: r(1, 2), p_in: r(7, 1), p_out: r(4, 1) };
    let c = predicted_exponent(&bad, Term::Beta);
    println!("{}: certified = {}, worst exponent {}", c.preset, c.overall, c.worst_exponent());
}

//! The full pipeline on the counterexample, a decaying field and u ≡ 0.
use num_rational::Rational64;
use varexp::estimates::{geometric_grid, liouville_pipeline, SLOPE_SLACK};
use varexp::exponents::Preset;
use varexp::fields::{decaying_solenoidal, gradient_counterexample, ScalarField3, VectorField3};
use varexp::quadrature::Quadrature;

pub fn main() {
    let preset = Preset::t1(Rational64::from_integer(5), Rational64::from_integer(4)).unwrap();
    let radii = geometric_grid(8.0, 2.0, 5);
    let q = Quadrature::stratified(40_000, 5, 16);
    let (u, p) = gradient_counterexample();
    let flows = [
        (u, p),
        (decaying_solenoidal(2.0).unwrap(), ScalarField3::zero()),
        (VectorField3::zero(), ScalarField3::zero()),
    ];
    for (u, p) in &flows {
        let rep = liouville_pipeline(&preset, u, p, &radii, &q, SLOPE_SLACK).unwrap();
        println!("{}: {}", rep.velocity, rep.tier);
        if let Some(f) = &rep.beta_fit {
            println!("  β majorant slope {:.3}", f.slope);
        }
    }
}

//! ∫θ_R|∇u|² = α(R) + β(R) for the counterexample, and the α/β terms of a decaying field.
use varexp::cutoff::make_cutoff;
use varexp::estimates::{alpha, beta, energy_identity_check};
use varexp::fields::{decaying_solenoidal, gradient_counterexample, ScalarField3};
use varexp::quadrature::Quadrature;

pub fn main() {
    let (u, p) = gradient_counterexample();
    let q = Quadrature::radial(48, 16, 16);
    for r in [4.0, 8.0, 16.0] {
        let e = energy_identity_check(&u, &p, &make_cutoff(r).unwrap(), &q).unwrap();
        println!("R = {r:>4}: lhs {:.6e}, α {:.6e}, β {:+.1e}, gap {:.1e}, pass {:?}", e.lhs.value, e.alpha.value, e.beta.value, e.relative_gap, e.pass);
    }

    let w = decaying_solenoidal(2.0).unwrap();
    for r in [8.0, 32.0, 128.0] {
        let c = make_cutoff(r).unwrap();
        let a = alpha(&w, &c, &q).unwrap();
        let b = beta(&w, &ScalarField3::zero(), &c, &q).unwrap();
        println!("R = {r:>4}: α {:+.3e}, β₁ {:.3e}, β {:+.1e}", a.value, b.beta1.value, b.beta.value);
    }
}

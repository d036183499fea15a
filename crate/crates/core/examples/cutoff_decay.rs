//! Decay of ‖Δθ_R‖ and ‖∇θ_R‖ in the conjugate exponents of T1(5,4).
use num_rational::Rational64;
use varexp::estimates::{cutoff_norm_decay, geometric_grid, predicted_exponent, CutoffKind, Term};
use varexp::exponents::Preset;
use varexp::quadrature::Quadrature;

pub fn main() {
    let preset = Preset::t1(Rational64::from_integer(5), Rational64::from_integer(4)).unwrap();
    let p = preset.field().unwrap();
    let radii = geometric_grid(8.0, 2.0, 5);
    let q = Quadrature::stratified(100_000, 8, 32);
    for (kind, k, term) in [(CutoffKind::Laplacian, 2, Term::Alpha), (CutoffKind::Gradient, 3, Term::Beta)] {
        let d = cutoff_norm_decay(kind, &p.holder_conjugate(k).unwrap(), &radii, &q).unwrap();
        let bound = predicted_exponent(&preset, term).worst_exponent();
        println!("{kind:?}: slope {:.4}, certified {bound}", d.fit.slope);
        for (piece, fit) in &d.piece_fits {
            if let Some(f) = fit {
                println!("  {piece}: slope {:.4}", f.slope);
            }
        }
    }
}

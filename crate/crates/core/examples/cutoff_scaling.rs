//! The radial cutoff θ_R and its R-scaling.
use varexp::cutoff::make_cutoff;
use varexp::pt;

pub fn main() {
    for r in [2.0, 8.0, 32.0, 128.0] {
        let c = make_cutoff(r).unwrap();
        let x = pt(0.75 * r, 0.0, 0.0);
        println!(
            "R = {r:>5}: θ(3R/4) = {:.3}, R·sup|∇θ| = {}, R²·Δθ(3R/4) = {:.6}, ∫θ = {:.4e}",
            c.value(&x),
            r * c.grad_sup(),
            r * r * c.laplacian(&x),
            c.integral()
        );
    }
    assert!(make_cutoff(1.0).is_err());
}

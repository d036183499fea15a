//! Membership, sampling and volumes of the cylinder and cusp sets.
use varexp::estimates::{rounded_growth, volume_growth, geometric_grid};
use varexp::quadrature::Quadrature;
use varexp::regions::{Region, VolumeMethod};
use varexp::{pt, Point};

pub fn main() {
    let cusp = Region::power_cusp(0.5).unwrap();
    println!("(4, 1, 0) in {cusp}: {}", cusp.contains(&pt(4.0, 1.0, 0.0)));
    println!("(4, 3, 0) in {cusp}: {}", cusp.contains(&pt(4.0, 3.0, 0.0)));

    // boolean combinations keep exact sampling envelopes
    let shell_cyl = Region::annulus(1.0, 2.0).unwrap().intersect(Region::Cylinder);
    let pts = shell_cyl.sample(1000, 7).unwrap();
    assert!(pts.iter().all(|x| shell_cyl.contains(x)));
    println!("{} samples in {shell_cyl}", pts.len());

    let ball = Region::ball(Point::zeros(), 1.0).unwrap();
    let exact = ball.volume(VolumeMethod::Analytic).unwrap();
    println!("|B(0,1)| = {:.6}", exact.value);
    let mc = shell_cyl.volume(VolumeMethod::MonteCarlo { samples: 200_000, seed: 1 }).unwrap();
    println!("|{shell_cyl}| = {:.5} ± {:.1e}", mc.value, mc.std_error);

    let radii = geometric_grid(2.0, 2.0, 8);
    let q = Quadrature::stratified(200_000, 3, 64);
    for region in [Region::Cylinder, cusp, Region::Cylinder.complement()] {
        let (_, fit) = volume_growth(&region, &radii, &q).unwrap();
        println!("|C(R/2,R) ∩ {region}| ~ R^{:.3}  (≈ R^{})", fit.slope, rounded_growth(&fit));
    }
}

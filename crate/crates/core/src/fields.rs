//! Smooth scalar and vector fields on ℝ³ with optional analytic derivatives.
//!
//! Jacobians use the convention `J[(i, j)] = ∂uᵢ/∂xⱼ`, so `(u·∇)u = J u`.

use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix3;
use serde::Serialize;

use crate::exponents::ExponentField;
use crate::norms;
use crate::quadrature::Quadrature;
use crate::regions::Region;
use crate::{Error, Point, Result};

pub type ScalarFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&Point) -> Point + Send + Sync>;
pub type MatrixFn = Arc<dyn Fn(&Point) -> Matrix3<f64> + Send + Sync>;

/// Step of the central differences used when no analytic derivative is given.
pub const FD_STEP: f64 = 1e-4;
const FD_STEP_2: f64 = 1e-3;

/// Declared pointwise decay `|f(x)| ≤ constant·|x|^(−rate)` for `|x| ≥ from_radius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Decay {
    pub rate: f64,
    pub constant: f64,
    pub from_radius: f64,
}

#[derive(Clone)]
pub struct ScalarField3 {
    name: String,
    eval: ScalarFn,
    gradient: Option<VectorFn>,
    decay: Option<Decay>,
}

impl fmt::Debug for ScalarField3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarField3({})", self.name)
    }
}

impl ScalarField3 {
    pub fn new(name: impl Into<String>, eval: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> Self {
        ScalarField3 { name: name.into(), eval: Arc::new(eval), gradient: None, decay: None }
    }

    pub fn with_gradient(mut self, grad: impl Fn(&Point) -> Point + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(grad));
        self
    }

    pub fn with_decay(mut self, decay: Decay) -> Self {
        self.decay = Some(decay);
        self
    }

    pub fn zero() -> Self {
        ScalarField3::new("zero", |_| 0.0).with_gradient(|_| Point::zeros()).with_decay(Decay {
            rate: 100.0,
            constant: 0.0,
            from_radius: 0.0,
        })
    }

    pub fn constant(c: f64) -> Self {
        ScalarField3::new(format!("const({c})"), move |_| c).with_gradient(|_| Point::zeros())
    }

    /// e^{−|x|²}.
    pub fn gaussian() -> Self {
        ScalarField3::new("gaussian", |x| (-x.norm_squared()).exp())
            .with_gradient(|x| x * (-2.0 * (-x.norm_squared()).exp()))
            // max of r⁸e^{−r²} is (4/e)⁴
            .with_decay(Decay { rate: 8.0, constant: (4.0 / std::f64::consts::E).powi(4), from_radius: 0.0 })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn decay(&self) -> Option<Decay> {
        self.decay
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    #[inline]
    pub fn value(&self, x: &Point) -> f64 {
        (self.eval)(x)
    }

    pub fn gradient(&self, x: &Point) -> Point {
        match &self.gradient {
            Some(g) => g(x),
            None => self.fd_gradient(x),
        }
    }

    pub fn fd_gradient(&self, x: &Point) -> Point {
        let mut g = Point::zeros();
        for j in 0..3 {
            let mut e = Point::zeros();
            e[j] = FD_STEP;
            g[j] = (self.value(&(x + e)) - self.value(&(x - e))) / (2.0 * FD_STEP);
        }
        g
    }

    /// Pointwise `h(f(x))`; derivatives and decay are dropped.
    pub fn map(&self, name: impl Into<String>, h: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        let e = self.eval.clone();
        ScalarField3::new(name, move |x| h(e(x)))
    }

    /// `c·f`, keeping derivatives and decay.
    pub fn scaled(&self, c: f64) -> Self {
        let e = self.eval.clone();
        let mut out = ScalarField3::new(format!("{c}*{}", self.name), move |x| c * e(x));
        if let Some(g) = self.gradient.clone() {
            out.gradient = Some(Arc::new(move |x| g(x) * c));
        }
        out.decay = self.decay.map(|d| Decay { constant: d.constant * c.abs(), ..d });
        out
    }

    /// `|f|^s`; a decay rate a becomes s·a.
    pub fn abs_pow(&self, s: f64) -> Self {
        let e = self.eval.clone();
        let mut out = ScalarField3::new(format!("|{}|^{s}", self.name), move |x| e(x).abs().powf(s));
        out.decay = self.decay.map(|d| Decay { rate: d.rate * s, constant: d.constant.powf(s), from_radius: d.from_radius });
        out
    }

    /// Pointwise product; decay rates add when both are declared.
    pub fn mul(&self, other: &ScalarField3) -> Self {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        let mut out = ScalarField3::new(format!("{}*{}", self.name, other.name), move |x| a(x) * b(x));
        if let (Some(d1), Some(d2)) = (self.decay, other.decay) {
            out.decay = Some(Decay {
                rate: d1.rate + d2.rate,
                constant: d1.constant * d2.constant,
                from_radius: d1.from_radius.max(d2.from_radius),
            });
        }
        out
    }

    /// `f·1_Ω`. Vanishes outside a bounded Ω, which is declared as fast decay.
    pub fn restricted_to(&self, region: &Region) -> Self {
        let e = self.eval.clone();
        let r = region.clone();
        let mut out = ScalarField3::new(format!("{}*1[{region}]", self.name), move |x| if r.contains(x) { e(x) } else { 0.0 });
        if let Some((_, outer)) = region.bounding_shell() {
            out.decay = Some(Decay { rate: 100.0, constant: 0.0, from_radius: outer });
        }
        out
    }
}

#[derive(Clone)]
pub struct VectorField3 {
    name: String,
    eval: VectorFn,
    jacobian: Option<MatrixFn>,
    laplacian: Option<VectorFn>,
    divergence_free: bool,
    decay: Option<Decay>,
}

impl fmt::Debug for VectorField3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField3({})", self.name)
    }
}

impl VectorField3 {
    pub fn new(name: impl Into<String>, eval: impl Fn(&Point) -> Point + Send + Sync + 'static) -> Self {
        VectorField3 {
            name: name.into(),
            eval: Arc::new(eval),
            jacobian: None,
            laplacian: None,
            divergence_free: false,
            decay: None,
        }
    }

    pub fn with_jacobian(mut self, j: impl Fn(&Point) -> Matrix3<f64> + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(j));
        self
    }

    pub fn with_laplacian(mut self, l: impl Fn(&Point) -> Point + Send + Sync + 'static) -> Self {
        self.laplacian = Some(Arc::new(l));
        self
    }

    pub fn declared_divergence_free(mut self) -> Self {
        self.divergence_free = true;
        self
    }

    pub fn with_decay(mut self, decay: Decay) -> Self {
        self.decay = Some(decay);
        self
    }

    pub fn zero() -> Self {
        VectorField3::new("zero", |_| Point::zeros())
            .with_jacobian(|_| Matrix3::zeros())
            .with_laplacian(|_| Point::zeros())
            .declared_divergence_free()
            .with_decay(Decay { rate: 100.0, constant: 0.0, from_radius: 0.0 })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn decay(&self) -> Option<Decay> {
        self.decay
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_free
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    pub fn has_analytic_laplacian(&self) -> bool {
        self.laplacian.is_some()
    }

    #[inline]
    pub fn value(&self, x: &Point) -> Point {
        (self.eval)(x)
    }

    pub fn jacobian(&self, x: &Point) -> Matrix3<f64> {
        match &self.jacobian {
            Some(j) => j(x),
            None => self.fd_jacobian(x),
        }
    }

    pub fn fd_jacobian(&self, x: &Point) -> Matrix3<f64> {
        let mut m = Matrix3::zeros();
        for j in 0..3 {
            let mut e = Point::zeros();
            e[j] = FD_STEP;
            let col = (self.value(&(x + e)) - self.value(&(x - e))) / (2.0 * FD_STEP);
            m.set_column(j, &col);
        }
        m
    }

    pub fn laplacian(&self, x: &Point) -> Point {
        match &self.laplacian {
            Some(l) => l(x),
            None => self.fd_laplacian(x),
        }
    }

    pub fn fd_laplacian(&self, x: &Point) -> Point {
        let c = self.value(x);
        let mut out = Point::zeros();
        for j in 0..3 {
            let mut e = Point::zeros();
            e[j] = FD_STEP_2;
            out += (self.value(&(x + e)) + self.value(&(x - e)) - c * 2.0) / (FD_STEP_2 * FD_STEP_2);
        }
        out
    }

    pub fn divergence(&self, x: &Point) -> f64 {
        self.jacobian(x).trace()
    }

    /// |∇⊗u|² = Σᵢⱼ (∂ⱼuᵢ)².
    pub fn grad_norm_sq(&self, x: &Point) -> f64 {
        self.jacobian(x).norm_squared()
    }

    /// |u| as a scalar field, carrying the declared decay.
    pub fn magnitude(&self) -> ScalarField3 {
        let e = self.eval.clone();
        let mut s = ScalarField3::new(format!("|{}|", self.name), move |x| e(x).norm());
        s.decay = self.decay;
        s
    }
}

/// u = ∇ψ for ψ = x₁²/2 + x₂²/2 − x₃², with P = −|u|²/2. A smooth,
/// non-trivial, non-decaying stationary solution.
pub fn gradient_counterexample() -> (VectorField3, ScalarField3) {
    let u = VectorField3::new("gradient_counterexample", |x| Point::new(x.x, x.y, -2.0 * x.z))
        .with_jacobian(|_| Matrix3::from_diagonal(&Point::new(1.0, 1.0, -2.0)))
        .with_laplacian(|_| Point::zeros())
        .declared_divergence_free();
    let p = ScalarField3::new("counterexample_pressure", |x| -(x.x * x.x + x.y * x.y + 4.0 * x.z * x.z) / 2.0)
        .with_gradient(|x| Point::new(-x.x, -x.y, -4.0 * x.z));
    (u, p)
}

/// curl(φ(r)·(−x₂, x₁, 0)) written through g = φ′/r.
fn swirl(x: &Point, phi: f64, g: f64) -> Point {
    let rho2 = x.x * x.x + x.y * x.y;
    Point::new(-x.x * x.z * g, -x.y * x.z * g, 2.0 * phi + rho2 * g)
}

/// Jacobian of `swirl` given g = φ′/r and h = g′/r.
fn swirl_jacobian(x: &Point, g: f64, h: f64) -> Matrix3<f64> {
    let (a, b, c) = (x.x, x.y, x.z);
    let rho2 = a * a + b * b;
    Matrix3::new(
        -c * g - a * a * c * h, -a * b * c * h, -a * g - a * c * c * h,
        -a * b * c * h, -c * g - b * b * c * h, -b * g - b * c * c * h,
        4.0 * a * g + rho2 * h * a, 4.0 * b * g + rho2 * h * b, 2.0 * g * c + rho2 * h * c,
    )
}

/// Divergence-free field u = curl((1+|x|²)^{−a/2}·(−x₂, x₁, 0)) with
/// |u(x)| ≍ |x|^{−a} at infinity. Not a Navier-Stokes solution.
pub fn decaying_solenoidal(a: f64) -> Result<VectorField3> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!("decay rate a = {a} must be positive")));
    }
    let m = a / 2.0;
    // φ = s^{−m}, s = 1+r²; g = φ′/r, h = g′/r, k = h′/r
    let phi = move |s: f64| s.powf(-m);
    let g = move |s: f64| -2.0 * m * s.powf(-m - 1.0);
    let h = move |s: f64| 4.0 * m * (m + 1.0) * s.powf(-m - 2.0);
    let k = move |s: f64| -8.0 * m * (m + 1.0) * (m + 2.0) * s.powf(-m - 3.0);
    let u = VectorField3::new(format!("decaying_solenoidal({a})"), move |x| {
        let s = 1.0 + x.norm_squared();
        swirl(x, phi(s), g(s))
    })
    .with_jacobian(move |x| {
        let s = 1.0 + x.norm_squared();
        swirl_jacobian(x, g(s), h(s))
    })
    // Δu = curl(ψ·(−x₂, x₁, 0)) with ψ = 5g + r²h, ψ′/r = 7h + r²k
    .with_laplacian(move |x| {
        let r2 = x.norm_squared();
        let s = 1.0 + r2;
        swirl(x, 5.0 * g(s) + r2 * h(s), 7.0 * h(s) + r2 * k(s))
    })
    .declared_divergence_free()
    .with_decay(Decay { rate: a, constant: 2.0 + 6.0 * m, from_radius: 0.0 });
    Ok(u)
}

/// Δu − (u·∇)u − ∇P at x.
pub fn ns_residual(u: &VectorField3, p: &ScalarField3, x: &Point) -> Point {
    u.laplacian(x) - u.jacobian(x) * u.value(x) - p.gradient(x)
}

/// Largest normwise relative gap between analytic and central-difference
/// derivatives over `points`: `‖D_analytic − D_fd‖ / max(‖D_analytic‖, 1)`.
pub fn derivative_consistency(u: &VectorField3, points: &[Point]) -> f64 {
    points
        .iter()
        .map(|x| {
            let ja = u.jacobian(x);
            (ja - u.fd_jacobian(x)).norm() / ja.norm().max(1.0)
        })
        .fold(0.0, f64::max)
}

pub fn gradient_consistency(f: &ScalarField3, points: &[Point]) -> f64 {
    points
        .iter()
        .map(|x| {
            let ga = f.gradient(x);
            (ga - f.fd_gradient(x)).norm() / ga.norm().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// Points of the n×n×n grid spanning [−h, h]³.
pub fn smoke_grid(n: usize, h: f64) -> Vec<Point> {
    let c = |i: usize| if n == 1 { 0.0 } else { -h + 2.0 * h * i as f64 / (n - 1) as f64 };
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out.push(Point::new(c(i), c(j), c(k)));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Convergent,
    Diverging,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Convergent => "convergent",
            Verdict::Diverging => "diverging",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipScan {
    /// (R, ϱ over B_R).
    pub rows: Vec<(f64, f64)>,
    /// ϱ over the shells between successive radii (the first is the ball).
    pub increments: Vec<f64>,
    pub verdict: Verdict,
}

/// Successive shell increments must shrink at least this fast to count as convergent.
pub const ENVELOPE_RATIO: f64 = 0.75;

/// Truncated modulars of |f| over growing balls and a trend verdict.
///
/// Convergent when each of the last three increments is at most
/// `ENVELOPE_RATIO` times its predecessor (or negligible against the running
/// total); diverging otherwise, in particular when any increment is infinite
/// or increments stop decreasing.
pub fn membership_scan(f: &ScalarField3, p: &ExponentField, radii: &[f64], quad: &Quadrature) -> Result<MembershipScan> {
    if radii.len() < 4 || radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] <= 0.0 {
        return Err(Error::InvalidArgument("membership scan needs ≥ 4 increasing positive radii".into()));
    }
    let mut increments = Vec::with_capacity(radii.len());
    let mut rows = Vec::with_capacity(radii.len());
    let mut total = 0.0;
    for (i, &r) in radii.iter().enumerate() {
        let shell = if i == 0 { Region::ball(Point::zeros(), r)? } else { Region::annulus(radii[i - 1], r)? };
        let m = norms::modular(f, p, &shell, &quad.with_seed_offset(i as u64))?;
        increments.push(m.value);
        total += m.value;
        rows.push((r, total));
    }
    let negligible = |d: f64| d <= 1e-12 * total || d == 0.0;
    let n = increments.len();
    let tail = &increments[n - 4..];
    let convergent = tail.iter().all(|d| d.is_finite())
        && tail.windows(2).all(|w| negligible(w[1]) || w[1] <= ENVELOPE_RATIO * w[0]);
    Ok(MembershipScan {
        rows,
        increments,
        verdict: if convergent { Verdict::Convergent } else { Verdict::Diverging },
    })
}

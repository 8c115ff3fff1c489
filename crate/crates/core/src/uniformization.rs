//! Periods of the kernel curve, the elliptic parametrisation `ω ↦ (x(ω), y(ω))`
//! and the algebraic quantities `R`, `g2^{1,3}`, `g3^{1,3}`, `T_ℓ = ℘_{1,3}(ℓω₂/4)`.
//!
//! `℘` without subscript is the Weierstrass function of the lattice
//! `ω₁Z + ω₂Z`; `℘_{1,3}` is the one of `ω₁Z + 3ω₂Z`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::kernel_curve::{
    branch_points, check_z, discriminant_x_d1, discriminant_x_d2, kernel_dx, kernel_dy, kernel_eval, BranchPoints,
};
use crate::quad;
use crate::report::VerificationReport;
use crate::sampling::SampleRng;
use crate::weierstrass::{fit_slope, rel, sample_regular, Lattice, POLE};
use crate::{Error, Result};

const QUAD_TOL: f64 = 1e-13;

/// `ω₁ ∈ iR₊`, `ω₂, ω₃ ∈ R₊`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelPeriods {
    pub omega1: Complex64,
    pub omega2: f64,
    pub omega3: f64,
    /// Sum of the quadrature error estimates behind `omega3` and the
    /// quadrature cross-check of `omega1`, `omega2`.
    pub error: f64,
    pub evaluations: u32,
}

impl ModelPeriods {
    pub fn ratio(&self) -> f64 {
        self.omega3 / self.omega2
    }
}

/// `ω₁ = i∫_{x1}^{x2} dx/√(−d)`, `ω₂ = ∫_{x2}^{x3} dx/√d`,
/// `ω₃ = ∫_{−∞}^{x1} dx/√d`.
///
/// `ω₁`, `ω₂` are complete integrals and come from the AGM, which keeps them
/// at a few ulps; the quadrature values drift to ~1e-13 near `z = 0`, and in
/// the flat region of `℘` that drift is amplified past 1e-8 in `K(x, y)`.
/// `ω₃` is incomplete and stays with quadrature.
pub fn compute_periods(z: f64) -> Result<ModelPeriods> {
    let quad = quadrature_periods(z)?;
    let [x1, x2, x3, x4] = branch_points(z)?.x;
    let s = ((x3 - x1) * (x4 - x2)).sqrt();
    // both moduli as cross-ratios, so neither is formed as 1 − m
    let m = (x3 - x2) * (x4 - x1) / ((x3 - x1) * (x4 - x2));
    let mc = (x2 - x1) * (x4 - x3) / ((x3 - x1) * (x4 - x2));
    // K as a function of the complementary parameter
    let ellk = |mc: f64| PI / (2.0 * agm(1.0, mc.sqrt()));
    Ok(ModelPeriods {
        omega1: Complex64::new(0.0, 2.0 * ellk(m) / (z * s)),
        omega2: 2.0 * ellk(mc) / (z * s),
        ..quad
    })
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        (a, b) = ((a + b) / 2.0, (a * b).sqrt());
    }
    (a + b) / 2.0
}

/// All three periods by double-exponential quadrature.
pub fn quadrature_periods(z: f64) -> Result<ModelPeriods> {
    let bp = branch_points(z)?;
    let [x1, x2, x3, x4] = bp.x;
    // x = xa + (xb − xa) sin²θ absorbs both endpoint square roots
    let sub = |xa: f64, xb: f64, th: f64| xa + (xb - xa) * th.sin().powi(2);
    let w1 = quad::integrate(
        |th| {
            let x = sub(x1, x2, th);
            2.0 / (z * ((x3 - x) * (x4 - x)).sqrt())
        },
        0.0,
        FRAC_PI_2,
        QUAD_TOL,
    )?;
    let w2 = quad::integrate(
        |th| {
            let x = sub(x2, x3, th);
            2.0 / (z * ((x - x1) * (x4 - x)).sqrt())
        },
        0.0,
        FRAC_PI_2,
        QUAD_TOL,
    )?;
    // ω₃: x = x1 − t² on [x1 − 1, x1], then x = c − (1−t)/t on (−∞, c]
    let c = x1 - 1.0;
    let near = quad::integrate(
        |t| {
            let x = x1 - t * t;
            2.0 / (z * ((x2 - x) * (x3 - x) * (x4 - x)).sqrt())
        },
        0.0,
        1.0,
        QUAD_TOL,
    )?;
    let far = quad::integrate(
        |t| {
            // t(xi − x) = 1 − t + (xi − c)t, so the t⁻² from dx cancels
            let p: f64 = bp.x.iter().map(|&xi| 1.0 - t + (xi - c) * t).product();
            1.0 / (z * p.sqrt())
        },
        0.0,
        1.0,
        QUAD_TOL,
    )?;
    Ok(ModelPeriods {
        omega1: Complex64::new(0.0, w1.value),
        omega2: w2.value,
        omega3: near.value + far.value,
        error: w1.error + w2.error + near.error + far.error,
        evaluations: w1.evaluations + w2.evaluations + near.evaluations + far.evaluations,
    })
}

/// Everything needed to evaluate `x(ω)`, `y(ω)` at a fixed `z`.
#[derive(Debug, Clone)]
pub struct UniformizationContext {
    pub z: f64,
    pub periods: ModelPeriods,
    pub branch: BranchPoints,
    /// `ω₁Z + ω₂Z`.
    pub lattice: Lattice,
    /// `ω₁Z + 3ω₂Z`.
    pub lattice13: Lattice,
    pub x4: f64,
    /// `d′(x4)`.
    pub d1: f64,
    /// `d″(x4)`.
    pub d2: f64,
}

impl UniformizationContext {
    pub fn new(z: f64) -> Result<Self> {
        check_z(z)?;
        let periods = compute_periods(z)?;
        let branch = branch_points(z)?;
        let w2 = Complex64::new(periods.omega2, 0.0);
        let lattice = Lattice::new(periods.omega1, w2)?;
        let lattice13 = Lattice::new(periods.omega1, 3.0 * w2)?;
        let x4 = branch.x[3];
        Ok(UniformizationContext {
            z,
            periods,
            branch,
            lattice,
            lattice13,
            x4,
            d1: discriminant_x_d1(x4, z),
            d2: discriminant_x_d2(x4, z),
        })
    }

    pub fn omega1(&self) -> Complex64 {
        self.periods.omega1
    }

    pub fn omega2(&self) -> Complex64 {
        Complex64::new(self.periods.omega2, 0.0)
    }

    pub fn omega3(&self) -> Complex64 {
        Complex64::new(self.periods.omega3, 0.0)
    }

    /// `kω₂/8`.
    pub fn eighth(&self, k: f64) -> Complex64 {
        self.omega2() * (k / 8.0)
    }

    fn e(&self) -> f64 {
        self.d2 / 6.0
    }

    /// `x(ω) = x4 + d′(x4)/(℘(ω) − d″(x4)/6)`.
    pub fn x(&self, omega: Complex64) -> Complex64 {
        self.x_from_wp(self.lattice.wp(omega))
    }

    fn x_from_wp(&self, p: Complex64) -> Complex64 {
        if !p.is_finite() {
            return Complex64::new(self.x4, 0.0);
        }
        let den = p - self.e();
        if den.norm() == 0.0 {
            return POLE;
        }
        self.x4 + self.d1 / den
    }

    /// `(x(ω), y(ω))` from a single `℘`, `℘′` evaluation.
    ///
    /// `y` is the root `(−b + s)/(2a)` of `a y² + b y + c` with
    /// `s = d′(x4)℘′/(2(℘ − d″(x4)/6)²)`; when `−b + s` suffers cancellation,
    /// or `a = 0` at `x(ω) = 0`, the same root is taken as `2c/(−b − s)`.
    pub fn xy(&self, omega: Complex64) -> (Complex64, Complex64) {
        let (p, dp) = self.lattice.wp_pair(omega);
        let x = self.x_from_wp(p);
        let z = self.z;
        let b = z * x * x - x + z;
        if !p.is_finite() {
            // ω on the lattice: x = x4 is a branch point, double root −b/(2a)
            return (x, -b / (2.0 * z * x * x));
        }
        if !x.is_finite() {
            return (x, self.y_at_x_pole(omega));
        }
        let den = p - self.e();
        let s = self.d1 * dp / (2.0 * den * den);
        let plus = -b + s;
        let minus = -b - s;
        let y = if minus.norm() >= plus.norm() {
            2.0 * z / minus
        } else {
            plus / (2.0 * z * x * x)
        };
        (x, y)
    }

    // y is regular where x has its poles; average two nearby points
    fn y_at_x_pole(&self, omega: Complex64) -> Complex64 {
        let h = 1e-6 * self.periods.omega2;
        (self.xy(omega + h).1 + self.xy(omega - h).1) / 2.0
    }

    pub fn y(&self, omega: Complex64) -> Complex64 {
        self.xy(omega).1
    }

    /// `x′(ω) = −d′(x4)℘′(ω)/(℘(ω) − d″(x4)/6)²`.
    pub fn dx(&self, omega: Complex64) -> Complex64 {
        let (p, dp) = self.lattice.wp_pair(omega);
        let den = p - self.e();
        -self.d1 * dp / (den * den)
    }

    /// `y′ = −K_x x′/K_y` along the curve `K(x, y) = 0`.
    pub fn dy(&self, omega: Complex64) -> Complex64 {
        let (x, y) = self.xy(omega);
        let z = Complex64::new(self.z, 0.0);
        -kernel_dx(x, y, z) * self.dx(omega) / kernel_dy(x, y, z)
    }

    /// Points of the fundamental parallelogram of `(ω₁, ω₂)` where `x` or `y`
    /// has a pole: `ω₂/8`, `3ω₂/8`, `7ω₂/8`.
    pub fn pole_points(&self) -> [Complex64; 3] {
        [self.eighth(1.0), self.eighth(3.0), self.eighth(7.0)]
    }

    /// `ω ↦ −ω + ω₁ + ω₂`, fixing `x`.
    pub fn xi_lift(&self, omega: Complex64) -> Complex64 {
        -omega + self.omega1() + self.omega2()
    }

    /// `ω ↦ −ω + ω₁ + ω₂ + ω₃`, fixing `y`.
    pub fn eta_lift(&self, omega: Complex64) -> Complex64 {
        -omega + self.omega1() + self.omega2() + self.omega3()
    }

    fn sample(&self, rng: &mut SampleRng) -> Complex64 {
        sample_regular(
            rng,
            &self.lattice,
            &self.pole_points(),
            0.05 * self.lattice.min_period(),
        )
    }
}

/// `ω₃/ω₂ = 3/4`.
pub fn check_period_ratio(periods: &ModelPeriods, z: f64, tol: f64) -> VerificationReport {
    VerificationReport::numeric("period ratio w3/w2 = 3/4", (periods.ratio() - 0.75).abs(), tol)
        .param("z", z)
        .param("ratio", format!("{:.15}", periods.ratio()))
}

/// `max |K(x(ω), y(ω); z)|` over random `ω` away from the poles.
pub fn check_kernel_vanishes(
    ctx: &UniformizationContext,
    rng: &mut SampleRng,
    samples: usize,
    tol: f64,
) -> VerificationReport {
    let mut rep = VerificationReport::numeric("K(x(w), y(w)) = 0", 0.0, tol)
        .param("z", ctx.z)
        .param("samples", samples);
    let z = Complex64::new(ctx.z, 0.0);
    for _ in 0..samples {
        let w = ctx.sample(rng);
        let (x, y) = ctx.xy(w);
        rep.absorb(kernel_eval(x, y, z).norm());
    }
    rep
}

/// `x(ω₂/2) = x1`, `x((ω₁+ω₂)/2) = x2`, `x(ω₁/2) = x3`.
pub fn check_branch_images(ctx: &UniformizationContext, tol: f64) -> VerificationReport {
    let [x1, x2, x3, _] = ctx.branch.x;
    let (w1, w2) = (ctx.omega1(), ctx.omega2());
    let mut rep = VerificationReport::numeric("x at half periods = branch points", 0.0, tol).param("z", ctx.z);
    rep.absorb((ctx.x(w2 / 2.0) - x1).norm());
    rep.absorb((ctx.x((w1 + w2) / 2.0) - x2).norm());
    rep.absorb((ctx.x(w1 / 2.0) - x3).norm());
    rep
}

/// `x` and `y` are elliptic with periods `ω₁`, `ω₂`.
pub fn check_ellipticity(
    ctx: &UniformizationContext,
    rng: &mut SampleRng,
    samples: usize,
    tol: f64,
) -> VerificationReport {
    let mut rep = VerificationReport::numeric("x, y periodic in w1, w2", 0.0, tol)
        .param("z", ctx.z)
        .param("samples", samples);
    for _ in 0..samples {
        let w = ctx.sample(rng);
        let (x, y) = ctx.xy(w);
        for shift in [ctx.omega1(), ctx.omega2()] {
            let (xs, ys) = ctx.xy(w + shift);
            rep.absorb(rel(x, xs));
            rep.absorb(rel(y, ys));
        }
    }
    rep
}

/// Log-log slope of `|f(p + ε)|` as `ε → 0`, i.e. the order of the zero
/// (positive) or pole (negative) at `p`.
pub fn local_order(f: impl Fn(Complex64) -> Complex64, p: Complex64, scale: f64) -> f64 {
    let dir = Complex64::from_polar(1.0, 0.3);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 0..6 {
        let e = scale * 1e-3 * 0.5f64.powi(k);
        xs.push(e.ln());
        ys.push(f(p + dir * e).norm().ln());
    }
    fit_slope(&xs, &ys)
}

/// Orders of the poles and zeros of `x` and `y` in the fundamental domain,
/// and `℘(ω₂/8) = d″(x4)/6`.
pub fn check_poles_zeros(ctx: &UniformizationContext) -> Vec<VerificationReport> {
    let s = ctx.periods.omega2;
    let expected = [
        ("x", 1.0, -1.0),
        ("x", 7.0, -1.0),
        ("x", 3.0, 1.0),
        ("x", 5.0, 1.0),
        ("y", 3.0, -2.0),
        ("y", 7.0, 2.0),
    ];
    let mut rep = VerificationReport::numeric("pole/zero orders of x, y", 0.0, 0.01).param("z", ctx.z);
    for (name, k, order) in expected {
        let p = ctx.eighth(k);
        let got = if name == "x" {
            local_order(|w| ctx.x(w), p, s)
        } else {
            local_order(|w| ctx.y(w), p, s)
        };
        rep.absorb((got - order).abs());
        rep = rep.param(&format!("{name}@{k}w2/8"), format!("{got:.4}"));
    }
    let wp = ctx.lattice.wp(ctx.eighth(1.0));
    let special = VerificationReport::numeric("wp(w2/8) = d''(x4)/6", rel(wp, Complex64::new(ctx.d2 / 6.0, 0.0)), 1e-8)
        .param("z", ctx.z);
    vec![rep, special]
}

/// `x(ξω) = x(ω)`, `y(ηω) = y(ω)`, and `(x, y)(ω + ω₃) = (xy, 1/(x²y))(ω)`,
/// the image under `ξ` followed by `η`.
pub fn check_group_lift(
    ctx: &UniformizationContext,
    rng: &mut SampleRng,
    samples: usize,
    tol: f64,
) -> VerificationReport {
    let mut rep = VerificationReport::numeric("group lift to the w-plane", 0.0, tol)
        .param("z", ctx.z)
        .param("samples", samples);
    let w3 = ctx.omega3();
    for _ in 0..samples {
        let w = ctx.sample(rng);
        let (x, y) = ctx.xy(w);
        rep.absorb(rel(ctx.x(ctx.xi_lift(w)), x));
        rep.absorb(rel(ctx.y(ctx.eta_lift(w)), y));
        let (xs, ys) = ctx.xy(w + w3);
        rep.absorb(rel(xs, x * y));
        rep.absorb(rel(ys, 1.0 / (x * x * y)));
    }
    rep
}

/// `℘(ω₂/4) = ℘(3ω₂/4) = (1+4z²)/3` and `℘(ω₂/2) = (1−8z²)/3`.
pub fn wp_special_values(ctx: &UniformizationContext, tol: f64) -> VerificationReport {
    let z2 = ctx.z * ctx.z;
    let q = Complex64::new((1.0 + 4.0 * z2) / 3.0, 0.0);
    let h = Complex64::new((1.0 - 8.0 * z2) / 3.0, 0.0);
    let mut rep = VerificationReport::numeric("wp at w2/4, w2/2, 3w2/4", 0.0, tol).param("z", ctx.z);
    rep.absorb(rel(ctx.lattice.wp(ctx.eighth(2.0)), q));
    rep.absorb(rel(ctx.lattice.wp(ctx.eighth(6.0)), q));
    rep.absorb(rel(ctx.lattice.wp(ctx.eighth(4.0)), h));
    rep
}

/// Closed forms `g2 = (4/3)(1−16z²+16z⁴)`, `g3 = −(8/27)(1−8z²)(1−16z²−8z⁴)`.
pub fn closed_form_invariants(z: f64) -> (f64, f64) {
    let z2 = z * z;
    let g2 = 4.0 / 3.0 * (1.0 - 16.0 * z2 + 16.0 * z2 * z2);
    let g3 = -8.0 / 27.0 * (1.0 - 8.0 * z2) * (1.0 - 16.0 * z2 - 8.0 * z2 * z2);
    (g2, g3)
}

/// Lattice invariants of `(ω₁, ω₂)` against the closed forms (relative).
pub fn check_invariants(ctx: &UniformizationContext, tol: f64) -> VerificationReport {
    let (g2, g3) = closed_form_invariants(ctx.z);
    let inv = ctx.lattice.invariants();
    let mut rep = VerificationReport::numeric("g2, g3 lattice vs closed form", 0.0, tol).param("z", ctx.z);
    rep.absorb((inv.g2 - g2).norm() / g2.abs());
    rep.absorb((inv.g3 - g3).norm() / g3.abs());
    rep
}

fn r_quartic(x: f64, g2: f64, g3: f64) -> f64 {
    ((x * x - 2.0 * g2) * x + 8.0 * g3) * x - g2 * g2 / 3.0
}

/// The unique positive root of `X⁴ − 2g2X² + 8g3X − g2²/3`.
pub fn compute_r(z: f64) -> Result<f64> {
    check_z(z)?;
    let (g2, g3) = closed_form_invariants(z);
    let coeffs = [1.0, 0.0, -2.0 * g2, 8.0 * g3, -g2 * g2 / 3.0];
    let mut lo = 0.0;
    let mut hi = 1.0 + coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
    if r_quartic(lo, g2, g3) >= 0.0 || r_quartic(hi, g2, g3) <= 0.0 {
        return Err(Error::Bracketing("R"));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if r_quartic(mid, g2, g3) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    // P = (X − R)Q with Q(0) = g2²/(3R) > 0; R is the only positive root iff
    // Q stays positive at its positive critical point, if any.
    let q = |x: f64| ((x + r) * x + r * r - 2.0 * g2) * x + r.powi(3) - 2.0 * g2 * r + 8.0 * g3;
    let disc = 6.0 * g2 - 2.0 * r * r;
    if disc > 0.0 {
        let xc = (-r + disc.sqrt()) / 3.0;
        if xc > 0.0 && q(xc) <= 0.0 {
            return Err(Error::Degenerate("quartic for R has several positive roots".into()));
        }
    }
    Ok(r)
}

/// `R`, `g2^{1,3}`, `g3^{1,3}` and `T4 = R/6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SublatticeData {
    pub r: f64,
    pub g2_13: f64,
    pub g3_13: f64,
    pub t4: f64,
}

pub fn sublattice_invariants(z: f64) -> Result<SublatticeData> {
    let r = compute_r(z)?;
    let (g2, g3) = closed_form_invariants(z);
    Ok(SublatticeData {
        r,
        g2_13: -g2 / 9.0 + 10.0 * r * r / 27.0,
        g3_13: -35.0 * r.powi(3) / 729.0 + 7.0 * g2 * r / 243.0 - g3 / 27.0,
        t4: r / 6.0,
    })
}

/// Closed-form `g2^{1,3}`, `g3^{1,3}`, `T4` against the lattice `(ω₁, 3ω₂)`.
pub fn check_sublattice_invariants(ctx: &UniformizationContext, tol: f64) -> Result<VerificationReport> {
    let data = sublattice_invariants(ctx.z)?;
    let inv = ctx.lattice13.invariants();
    let mut rep = VerificationReport::numeric("sublattice invariants and T4", 0.0, tol)
        .param("z", ctx.z)
        .param("R", data.r);
    rep.absorb(rel(inv.g2, Complex64::new(data.g2_13, 0.0)));
    rep.absorb(rel(inv.g3, Complex64::new(data.g3_13, 0.0)));
    rep.absorb(rel(ctx.lattice13.wp(ctx.omega2()), Complex64::new(data.t4, 0.0)));
    Ok(rep)
}

/// Real roots of the monic cubic `X³ + aX² + bX + c`, descending.
pub(crate) fn cubic_real_roots(a: f64, b: f64, c: f64) -> Result<[f64; 3]> {
    // depressed cubic t³ + pt + q with X = t − a/3
    let p = b - a * a / 3.0;
    let q = 2.0 * a.powi(3) / 27.0 - a * b / 3.0 + c;
    if p >= 0.0 {
        return Err(Error::Degenerate("cubic does not have three real roots".into()));
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let theta = arg.acos() / 3.0;
    let mut roots = [0.0; 3];
    for (k, r) in roots.iter_mut().enumerate() {
        let t = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
        let mut x = t - a / 3.0;
        // Newton polish
        for _ in 0..3 {
            let f = ((x + a) * x + b) * x + c;
            let df = (3.0 * x + 2.0 * a) * x + b;
            if df == 0.0 {
                break;
            }
            let nx = x - f / df;
            if !nx.is_finite() {
                break;
            }
            x = nx;
        }
        *r = x;
    }
    roots.sort_by(|u, v| v.partial_cmp(u).unwrap());
    Ok(roots)
}

/// Minimum separation of the roots of the `T1, T3, T5` cubic below which
/// the ordering is considered numerically ambiguous.
pub const ROOT_GAP: f64 = 1e-6;

/// `T1..T6` from `R`, `g2`, `g3`: `T1 > T3 > T5` are the roots of the cubic,
/// `T4 = R/6`, `T6` in closed form and `T2` by Vieta.
pub fn compute_t(z: f64) -> Result<[f64; 6]> {
    let data = sublattice_invariants(z)?;
    let r = data.r;
    let (g2, g3) = closed_form_invariants(z);
    let z2 = z * z;
    let p = 1.0 + 4.0 * z2;
    let a = -(r / 3.0 + p / 3.0);
    let b = r * p / 9.0 + r * r / 108.0 + g2 / 18.0;
    let c = 23.0 * r.powi(3) / 2916.0 - r * r * p / 108.0 + g3 / 27.0 - 19.0 * r * g2 / 972.0;
    let roots = cubic_real_roots(a, b, c)?;
    let gap = (roots[0] - roots[1]).min(roots[1] - roots[2]);
    if gap < ROOT_GAP {
        return Err(Error::RootAmbiguity(gap));
    }
    let t6 = (r + 1.0 - 8.0 * z2 - t6_discriminant(z, r, g2).sqrt()) / 9.0;
    let t2 = (r + 1.0 - 8.0 * z2) / 6.0 - t6 / 2.0;
    Ok([roots[0], t2, roots[1], data.t4, roots[2], t6])
}

fn t6_discriminant(z: f64, r: f64, g2: f64) -> f64 {
    let h = 1.0 - 8.0 * z * z;
    3.0 * r * r - 4.0 * r * h + 4.0 * h * h - 6.0 * g2
}

/// `T_ℓ = ℘_{1,3}(ℓω₂/4)` evaluated directly on the lattice.
pub fn t_direct(ctx: &UniformizationContext) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (l, t) in out.iter_mut().enumerate() {
        *t = ctx.lattice13.wp(ctx.eighth(2.0 * (l + 1) as f64)).re;
    }
    out
}

/// `compute_t` against direct evaluation (relative).
pub fn check_t_values(ctx: &UniformizationContext, tol: f64) -> Result<VerificationReport> {
    let t = compute_t(ctx.z)?;
    let d = t_direct(ctx);
    let mut rep = VerificationReport::numeric("T1..T6 algebraic vs direct", 0.0, tol).param("z", ctx.z);
    for l in 0..6 {
        rep.absorb((t[l] - d[l]).abs() / d[l].abs().max(1.0));
    }
    Ok(rep)
}

/// The two printed low-order expansions of `T1`, `1/3 + 4z²/3 − 4z^a − 56z^b`.
pub fn t1_expansion(z: f64, a: i32, b: i32) -> f64 {
    1.0 / 3.0 + 4.0 * z * z / 3.0 - 4.0 * z.powi(a) - 56.0 * z.powi(b)
}

/// Closed forms of `T_ℓ(φ(x))`, `0 < x < 1/2`.
pub fn t_at_phi(x: f64) -> Result<[f64; 6]> {
    if !(x > 0.0 && x < 0.5) {
        return Err(Error::domain("x", x, "(0, 1/2)"));
    }
    let u = 4.0 * x + 1.0;
    let m = (4.0 * x.powi(4) + 28.0 * x.powi(3) + 30.0 * x * x + 10.0 * x + 1.0) / (3.0 * u.powi(3));
    let n = 2.0 * x * (x + 1.0) * (2.0 * x + 1.0) / u.powf(2.5);
    Ok([
        m + n,
        m - 2.0 * x * (x + 1.0) * (2.0 * x + 1.0) / u.powi(3),
        m - 2.0 * x * (x + 1.0) / (u * u),
        m - 2.0 * x * (2.0 * x + 1.0) * (3.0 * x + 1.0) / u.powi(3),
        m - n,
        ((2.0 * x + 1.0) / u).powi(2) - 2.0 * m,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    #[test]
    fn agm_periods_match_quadrature() {
        for z in [0.02, 0.1, 0.24] {
            let p = compute_periods(z).unwrap();
            let q = quadrature_periods(z).unwrap();
            assert!(
                (p.omega2 - q.omega2).abs() < 1e-11 * p.omega2,
                "z={z}: {} vs {}",
                p.omega2,
                q.omega2
            );
            assert!((p.omega1 - q.omega1).norm() < 1e-11 * p.omega1.norm(), "z={z}");
            assert_eq!(p.omega3, q.omega3);
            assert_eq!(p.omega1.re, 0.0);
        }
    }

    #[test]
    fn agm_limits() {
        // K(0) = π/2, and the lemniscatic case K(1/2) = Γ(1/4)²/(4√π)
        assert!((agm(1.0, 1.0) - 1.0).abs() < 1e-16);
        let k = PI / (2.0 * agm(1.0, 0.5f64.sqrt()));
        assert!((k - 1.854_074_677_301_372).abs() < 1e-14);
    }

    #[test]
    fn ratio_three_quarters() {
        for z in [0.011, 0.05, 0.1, 0.2, 0.24, 0.2499] {
            let p = compute_periods(z).unwrap();
            assert!((p.ratio() - 0.75).abs() < 1e-9, "z={z} ratio={}", p.ratio());
        }
        assert!(compute_periods(0.3).is_err());
    }

    #[test]
    fn kernel_vanishes_along_parametrisation() {
        let ctx = UniformizationContext::new(0.1).unwrap();
        let mut rng = sampling::rng(1);
        let rep = check_kernel_vanishes(&ctx, &mut rng, 100, 1e-8);
        assert!(rep.pass, "{rep}");
        assert!(check_branch_images(&ctx, 1e-9).pass);
        assert!(check_ellipticity(&ctx, &mut rng, 50, 1e-9).pass);
    }

    #[test]
    fn derivatives() {
        let ctx = UniformizationContext::new(0.15).unwrap();
        let mut rng = sampling::rng(2);
        let h = 1e-6;
        for _ in 0..20 {
            let w = ctx.sample(&mut rng);
            let fx = (ctx.x(w + h) - ctx.x(w - h)) / (2.0 * h);
            let fy = (ctx.y(w + h) - ctx.y(w - h)) / (2.0 * h);
            assert!(rel(ctx.dx(w), fx) < 1e-5);
            assert!(rel(ctx.dy(w), fy) < 1e-5);
        }
    }

    #[test]
    fn poles_zeros_and_group() {
        let ctx = UniformizationContext::new(0.1).unwrap();
        for rep in check_poles_zeros(&ctx) {
            assert!(rep.pass, "{rep}");
        }
        let mut rng = sampling::rng(3);
        let rep = check_group_lift(&ctx, &mut rng, 50, 1e-8);
        assert!(rep.pass, "{rep}");
        assert!(wp_special_values(&ctx, 1e-9).pass);
        assert!(check_invariants(&ctx, 1e-8).pass);
    }

    #[test]
    fn r_values() {
        for z in [0.005, 0.01, 0.02] {
            let r = compute_r(z).unwrap();
            let e = 2.0 - 16.0 * z * z - 48.0 * z.powi(4);
            assert!((r - e).abs() < 500.0 * z.powi(6));
        }
        let (g2, g3) = closed_form_invariants(0.1);
        assert!(r_quartic(compute_r(0.1).unwrap(), g2, g3).abs() < 1e-12);
        let x: f64 = 0.3;
        let z = (x * (x + 1.0).powi(3) / (4.0 * x + 1.0).powi(3)).sqrt();
        let closed = 2.0 * (2.0 * x * x - 2.0 * x - 1.0).powi(2) / (4.0 * x + 1.0).powi(3);
        assert!((compute_r(z).unwrap() - closed).abs() < 1e-9);
    }

    #[test]
    fn cubic_roots() {
        let r = cubic_real_roots(-6.0, 11.0, -6.0).unwrap();
        for (a, b) in r.iter().zip([3.0, 2.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(cubic_real_roots(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn t_values_match_direct_evaluation() {
        for z in [0.1, 0.15, 0.2, 0.24] {
            let ctx = UniformizationContext::new(z).unwrap();
            let rep = check_t_values(&ctx, 1e-8).unwrap();
            assert!(rep.pass, "{rep}");
            assert!(check_sublattice_invariants(&ctx, 1e-8).unwrap().pass);
        }
    }

    #[test]
    fn t_ordering_and_ambiguity() {
        for z in [0.1, 0.15, 0.2, 0.24] {
            let t = compute_t(z).unwrap();
            assert!(t[0] > t[2] && t[2] > t[4]);
        }
        assert!(matches!(compute_t(0.02), Err(Error::RootAmbiguity(_))));
    }

    #[test]
    fn t1_expansion_exponents() {
        // 1/3 + 4z²/3 − 4z⁶ − 56z⁸ fits; the variant with z⁴, z⁶ is off by ~4z⁴
        for z in [0.03, 0.05] {
            let ctx = UniformizationContext::new(z).unwrap();
            let t1 = t_direct(&ctx)[0];
            assert!((t1 - t1_expansion(z, 6, 8)).abs() < 1e4 * z.powi(10));
            assert!((t1 - t1_expansion(z, 4, 6)).abs() > 3.0 * z.powi(4));
        }
    }

    #[test]
    fn t_at_phi_matches() {
        for x in [0.2, 0.3, 0.45] {
            let z = (x * (x + 1.0f64).powi(3) / (4.0 * x + 1.0f64).powi(3)).sqrt();
            let ctx = UniformizationContext::new(z).unwrap();
            let d = t_direct(&ctx);
            let c = t_at_phi(x).unwrap();
            for l in 0..6 {
                assert!((c[l] - d[l]).abs() < 1e-8, "x={x} l={l}: {} vs {}", c[l], d[l]);
            }
        }
        let small = t_at_phi(1e-6).unwrap();
        assert!((small[3] - 1.0 / 3.0).abs() < 1e-5);
        assert!(t_at_phi(0.5).is_err());
    }
}

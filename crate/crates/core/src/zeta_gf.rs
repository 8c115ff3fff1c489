//! `ζ`-function representations of the boundary generating functions.
//!
//! `r_y(ω) = z(y(ω)+1)Q(0, y(ω))` continues to an elliptic function with
//! periods `ω₁, 3ω₂`; it is evaluated here as a constant plus eight
//! `ζ₁,₃`-terms. `Q(0,0)` follows from six `ζ₁,₃` values at `kω₂/4`.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;

use crate::report::VerificationReport;
use crate::sampling::SampleRng;
use crate::uniformization::UniformizationContext;
use crate::walk_counting::{big_to_f64, gessel_tail_bound, CountTable};
use crate::weierstrass::{rel, Lattice, ZetaCombination};
use crate::{Error, Result};

/// Shifts of the eight `ζ₁,₃` terms, in units of `ω₂/8`, with their
/// residues in units of `1/(2z)`.
pub const RY_POLES: [(u32, f64); 8] = [
    (1, 1.0),
    (3, -1.0),
    (11, 1.0),
    (13, -1.0),
    (15, -1.0),
    (17, 2.0),
    (21, -2.0),
    (23, 1.0),
];

/// Points (units of `ω₂/8`) where the continuation argument produces a
/// removable singularity.
pub const RY_REMOVABLE: [u32; 2] = [9, 19];

/// Weights of `ζ₁,₃(kω₂/4)`, `k = 1..6`, in `2z²Q(0,0)`.
pub const Q00_WEIGHTS: [f64; 6] = [1.0, -3.0, 2.0, 3.0, -5.0, 2.0];

/// `L_k = ζ₁,₃(kω₂/4)` for `k = 1..6`.
pub fn l_values(ctx: &UniformizationContext) -> [f64; 6] {
    std::array::from_fn(|i| ctx.lattice13.zeta(ctx.eighth(2.0 * (i + 1) as f64)).re)
}

/// `Q(0,0; z)` from six `ζ₁,₃` values.
pub fn q00_zeta(ctx: &UniformizationContext) -> f64 {
    let l = l_values(ctx);
    let s: f64 = Q00_WEIGHTS.iter().zip(l).map(|(w, v)| w * v).sum();
    s / (2.0 * ctx.z * ctx.z)
}

/// `r_y` together with the context it lives on.
#[derive(Debug, Clone)]
pub struct RYContext {
    pub ctx: UniformizationContext,
    /// `c + Σ r_ℓ ζ₁,₃(ω − s_ℓ)` with `c` fixed by `r_y(7ω₂/8) = zQ(0,0)`.
    pub combo: ZetaCombination,
    pub q00: f64,
}

impl RYContext {
    pub fn new(ctx: UniformizationContext) -> Self {
        let z = ctx.z;
        let terms = RY_POLES
            .iter()
            .map(|&(k, r)| (Complex64::new(r / (2.0 * z), 0.0), ctx.eighth(k as f64)))
            .collect();
        let mut combo = ZetaCombination::new(ctx.lattice13.clone(), Complex64::zero(), terms);
        let q00 = q00_zeta(&ctx);
        let hat = combo.eval(ctx.eighth(7.0));
        combo.constant = z * q00 - hat;
        RYContext { ctx, combo, q00 }
    }

    pub fn from_z(z: f64) -> Result<Self> {
        Ok(Self::new(UniformizationContext::new(z)?))
    }

    pub fn z(&self) -> f64 {
        self.ctx.z
    }

    pub fn lattice(&self) -> &Lattice {
        &self.combo.lattice
    }

    pub fn ry(&self, omega: Complex64) -> Complex64 {
        self.combo.eval(omega)
    }

    /// `r_x = xy − r_y + zQ(0,0)`.
    pub fn rx(&self, omega: Complex64) -> Complex64 {
        let (x, y) = self.ctx.xy(omega);
        x * y - self.ry(omega) + self.z() * self.q00
    }

    /// `x(ω)[y(ξω) − y(ω)]`, with `ξω = −ω + ω₁ + ω₂`.
    pub fn f_y(&self, omega: Complex64) -> Complex64 {
        let (x, y) = self.ctx.xy(omega);
        x * (self.ctx.y(self.ctx.xi_lift(omega)) - y)
    }

    /// `x′(ω)/(2z x(ω))`.
    pub fn f_y_log(&self, omega: Complex64) -> Complex64 {
        self.ctx.dx(omega) / (2.0 * self.z() * self.ctx.x(omega))
    }

    /// `y(ω)[x(ηω) − x(ω)]`, with `ηω = −ω + ω₁ + ω₂ + ω₃`.
    pub fn f_x(&self, omega: Complex64) -> Complex64 {
        let (x, y) = self.ctx.xy(omega);
        y * (self.ctx.x(self.ctx.eta_lift(omega)) - x)
    }

    /// Poles of `r_y` in `ω₂[1/8, 25/8)`.
    pub fn pole_points(&self) -> Vec<Complex64> {
        self.combo.shifts()
    }

    /// Everything that may be singular for `x`, `y`, `f_y` or `r_y`: all odd
    /// multiples of `ω₂/8`.
    fn singular_points(&self) -> Vec<Complex64> {
        (0..12).map(|k| self.ctx.eighth((2 * k + 1) as f64)).collect()
    }

    fn sample(&self, rng: &mut SampleRng) -> Complex64 {
        let lat = self.lattice();
        let avoid = self.singular_points();
        let margin = 0.03 * self.ctx.periods.omega2;
        loop {
            let s: f64 = rng.gen();
            let t: f64 = rng.gen::<f64>() - 0.5;
            let u = lat.omega_hat() * s + lat.omega_bar() * t;
            if avoid.iter().all(|&p| lat.dist_to_lattice(u - p) > margin) {
                return u;
            }
        }
    }
}

/// `q00_from_ry`: `(r_y(7ω₂/8) − r_y(5ω₂/8))/z`; the constant cancels.
pub fn q00_from_ry(rctx: &RYContext) -> f64 {
    let c = &rctx.ctx;
    ((rctx.ry(c.eighth(7.0)) - rctx.ry(c.eighth(5.0))) / rctx.z()).re
}

/// Defining and logarithmic-derivative forms of `f_y` agree; `f_y` is
/// `ω₂`-periodic.
pub fn check_f_y_forms(rctx: &RYContext, rng: &mut SampleRng, samples: usize) -> VerificationReport {
    let t = Instant::now();
    let mut rep = VerificationReport::numeric("f_y defining vs logarithmic form", 0.0, 1e-8)
        .param("z", rctx.z())
        .param("samples", samples);
    let w2 = rctx.ctx.omega2();
    for _ in 0..samples {
        let u = rctx.sample(rng);
        let f = rctx.f_y(u);
        rep.absorb(rel(f, rctx.f_y_log(u)));
        rep.absorb(rel(f, rctx.f_y(u + w2)));
    }
    rep.timed(t)
}

/// `Σ_{k=0}^{3} f_y(ω + kω₃) = 0`.
pub fn check_orbit_sum_vanishes(rctx: &RYContext, rng: &mut SampleRng, samples: usize) -> VerificationReport {
    let t = Instant::now();
    let mut rep = VerificationReport::numeric("f_y orbit sum vanishes", 0.0, 1e-8)
        .param("z", rctx.z())
        .param("samples", samples);
    let w3 = rctx.ctx.omega3();
    for _ in 0..samples {
        let u = rctx.sample(rng);
        let terms: Vec<Complex64> = (0..4).map(|k| rctx.f_y(u + w3 * k as f64)).collect();
        let scale = terms.iter().map(|v| v.norm()).fold(1.0, f64::max);
        rep.absorb(terms.iter().sum::<Complex64>().norm() / scale);
    }
    rep.timed(t)
}

/// The four continuation identities for `r_x`, `r_y`.
pub fn check_continuation_identities(rctx: &RYContext, rng: &mut SampleRng, samples: usize) -> Vec<VerificationReport> {
    type Residual = fn(&RYContext, Complex64) -> f64;
    let named: [(&str, Residual); 4] = [
        ("r_y(ω+ω₃) = r_y(ω) + f_y(ω)", |r, u| {
            rel(r.ry(u + r.ctx.omega3()), r.ry(u) + r.f_y(u))
        }),
        ("r_y(ηω) = r_y(ω)", |r, u| rel(r.ry(r.ctx.eta_lift(u)), r.ry(u))),
        ("r_y(ω+ω₁) = r_y(ω)", |r, u| rel(r.ry(u + r.ctx.omega1()), r.ry(u))),
        ("r_x(ω−ω₃) = r_x(ω) + f_x(ω)", |r, u| {
            rel(r.rx(u - r.ctx.omega3()), r.rx(u) + r.f_x(u))
        }),
    ];
    let points: Vec<Complex64> = (0..samples).map(|_| rctx.sample(rng)).collect();
    named
        .iter()
        .map(|(name, f)| {
            let t = Instant::now();
            let mut rep = VerificationReport::numeric(*name, 0.0, 1e-7)
                .param("z", rctx.z())
                .param("samples", samples);
            for &u in &points {
                rep.absorb(f(rctx, u));
            }
            rep.timed(t)
        })
        .collect()
}

/// `r_y(ω + 3ω₂) = r_y(ω)` and `r_y(ω + ω₁) = r_y(ω)`; the residues sum to 0.
pub fn check_ry_periods(rctx: &RYContext, rng: &mut SampleRng, samples: usize) -> VerificationReport {
    let t = Instant::now();
    let lat = rctx.lattice();
    let mut rep = VerificationReport::numeric("r_y elliptic with periods ω₁, 3ω₂", 0.0, 1e-8)
        .param("z", rctx.z())
        .param("samples", samples)
        .param("residue_sum", rctx.combo.residue_sum().norm());
    for _ in 0..samples {
        let u = rctx.sample(rng);
        let f = rctx.ry(u);
        rep.absorb(rel(rctx.ry(u + lat.omega_hat()), f));
        rep.absorb(rel(rctx.ry(u + lat.omega_bar()), f));
    }
    rep.absorb(rctx.combo.residue_sum().norm());
    rep.timed(t)
}

/// Uniform sample of `Δ_y = ω₁[−1/2, 1/2) + ω₂[5/8, 9/8)`, kept only where
/// `|y(ω)| < y_max` so that the boundary series converges fast.
pub fn sample_delta_y(ctx: &UniformizationContext, rng: &mut SampleRng, y_max: f64) -> Complex64 {
    let w2 = ctx.periods.omega2;
    let w1 = ctx.periods.omega1.im;
    loop {
        let re = w2 * (0.64 + 0.47 * rng.gen::<f64>());
        let im = w1 * (rng.gen::<f64>() - 0.5);
        let u = Complex64::new(re, im);
        if ctx.y(u).norm() < y_max {
            return u;
        }
    }
}

/// `Q(0, y; z)` from the count table, with the crude tail bound.
pub fn q0y_series(table: &CountTable, y: Complex64, z: f64) -> (Complex64, f64) {
    let zc = Complex64::new(z, 0.0);
    let value = table.eval_truncated(Complex64::zero(), y, zc);
    (value, gessel_tail_bound(Complex64::zero(), y, zc, table.n_max()))
}

/// `r_y(ω) = z(y(ω)+1)Q(0, y(ω))` on `Δ_y` against the truncated series.
pub fn check_ry_vs_series(
    rctx: &RYContext,
    table: &CountTable,
    rng: &mut SampleRng,
    samples: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let t = Instant::now();
    let z = rctx.z();
    let mut rep = VerificationReport::numeric("r_y vs z(y+1)Q(0,y) series on Δ_y", 0.0, tol)
        .param("z", z)
        .param("samples", samples)
        .param("n_max", table.n_max());
    let mut worst_tail: f64 = 0.0;
    for _ in 0..samples {
        let u = sample_delta_y(&rctx.ctx, rng, 0.8);
        let y = rctx.ctx.y(u);
        let (q, tail) = q0y_series(table, y, z);
        worst_tail = worst_tail.max(tail);
        rep.absorb((rctx.ry(u) - z * (y + 1.0) * q).norm());
    }
    if worst_tail > 0.01 * tol {
        return Err(Error::TableTooShort {
            have: table.n_max(),
            need: table.n_max() + 1,
        });
    }
    Ok(rep.param("tail_bound", format!("{worst_tail:.1e}")).timed(t))
}

/// Residue estimate at a simple pole: Richardson-extrapolated limits of
/// `h·f(p + h)` along four directions. Returns the mean and the largest
/// deviation of a single direction from it.
pub fn residue(f: impl Fn(Complex64) -> Complex64, p: Complex64, h: f64) -> (Complex64, f64) {
    let mut estimates = [Complex64::zero(); 4];
    for (k, est) in estimates.iter_mut().enumerate() {
        let d = Complex64::from_polar(1.0, PI / 4.0 + k as f64 * PI / 2.0);
        let g = |s: f64| {
            let off = d * (h * s);
            off * f(p + off)
        };
        let (g0, g1, g2) = (g(1.0), g(0.5), g(0.25));
        let (r0, r1) = (2.0 * g1 - g0, 2.0 * g2 - g1);
        *est = (4.0 * r1 - r0) / 3.0;
    }
    let mean = estimates.iter().sum::<Complex64>() / 4.0;
    let spread = estimates.iter().map(|e| (e - mean).norm()).fold(0.0, f64::max);
    (mean, spread)
}

fn table_residue(k: u32, z: f64) -> f64 {
    RY_POLES.iter().find(|p| p.0 == k).map_or(0.0, |p| p.1 / (2.0 * z))
}

/// Residues of `r_y` against the residue table, twice: read off the `ζ` form, and
/// rebuilt from numeric residues of `f_y` and `xy` through
/// `Res_{p+ω₃} r_y = Res_p r_y + Res_p f_y`. The removable points and a mesh
/// scan of the period parallelogram are checked as well.
pub fn verify_table1(rctx: &RYContext) -> Vec<VerificationReport> {
    let z = rctx.z();
    let c = &rctx.ctx;
    let h = 1e-4 * c.periods.omega2;
    let unit = 1.0 / (2.0 * z);
    let mut out = Vec::new();

    let t = Instant::now();
    let mut zeta_form = VerificationReport::numeric("residue table from the ζ form", 0.0, 1e-6).param("z", z);
    for &(k, _) in &RY_POLES {
        let (r, spread) = residue(|u| rctx.ry(u), c.eighth(k as f64), h);
        let want = table_residue(k, z);
        zeta_form.absorb((r.re - want).abs().max(r.im.abs()) / want.abs());
        zeta_form.absorb(spread / want.abs());
    }
    for k in RY_REMOVABLE {
        let (r, _) = residue(|u| rctx.ry(u), c.eighth(k as f64), h);
        zeta_form.absorb(r.norm() / unit);
    }
    out.push(zeta_form.timed(t));

    // continuation: base residues on ω₂[1/8, 9/8), then shift by ω₃ = 6ω₂/8
    let t = Instant::now();
    let mut fy = [Complex64::zero(); 8];
    let mut spread_max: f64 = 0.0;
    for k in (1..8).step_by(2) {
        let (r, s) = residue(|u| rctx.f_y(u), c.eighth(k as f64), h);
        fy[k] = r;
        spread_max = spread_max.max(s / unit);
    }
    let (xy3, s) = residue(
        |u| {
            let (x, y) = c.xy(u);
            x * y
        },
        c.eighth(3.0),
        h,
    );
    spread_max = spread_max.max(s / unit);
    let mut ry = [Complex64::zero(); 24];
    ry[1] = -fy[1];
    ry[3] = xy3;
    for k in (9..24).step_by(2) {
        ry[k] = ry[k - 6] + fy[(k - 6) % 8];
    }
    let mut cont = VerificationReport::numeric("residue table by continuation", spread_max, 1e-6).param("z", z);
    let f_y_res = [(1, -1.0), (3, 1.0), (5, 1.0), (7, -1.0)];
    for (k, sgn) in f_y_res {
        cont.absorb((fy[k] - sgn * unit).norm() / unit);
    }
    for &(k, _) in &RY_POLES {
        cont.absorb((ry[k as usize] - table_residue(k, z)).norm() / unit);
    }
    for k in RY_REMOVABLE {
        cont.absorb(ry[k as usize].norm() / unit);
    }
    out.push(cont.timed(t));

    // mesh scan of ω₁[−1/2,1/2) + 3ω₂[0,1), away from the listed poles
    let t = Instant::now();
    let lat = rctx.lattice();
    let poles = rctx.pole_points();
    let margin = 0.02 * c.periods.omega2;
    let (mut bad, mut worst, mut scanned) = (0usize, 0.0f64, 0usize);
    for i in 0..96 {
        for j in 0..16 {
            let u = lat.omega_hat() * ((i as f64 + 0.5) / 96.0) + lat.omega_bar() * ((j as f64 + 0.5) / 16.0 - 0.5);
            if poles.iter().any(|&p| lat.dist_to_lattice(u - p) < margin) {
                continue;
            }
            scanned += 1;
            let v = rctx.ry(u).norm();
            if !v.is_finite() {
                bad += 1;
            }
            worst = worst.max(v);
        }
    }
    // a pole missing from the list would show up as a value far above the
    // bound set by the listed residues at distance `margin`
    let bound = 16.0 * unit / margin + rctx.combo.constant.norm() + 1.0;
    out.push(
        VerificationReport::numeric(
            "r_y has no poles off the residue table",
            bad as f64 + (worst - bound).max(0.0),
            0.0,
        )
        .param("z", z)
        .param("mesh_points", scanned)
        .param("max_abs", format!("{worst:.3e}"))
        .param("bound", format!("{bound:.3e}"))
        .timed(t),
    );
    out
}

/// `y″(7ω₂/8) = −2(℘′(7ω₂/8)/d′(x4))²` at the double zero of `y`.
pub fn y_second_at_zero(ctx: &UniformizationContext) -> Complex64 {
    let dp = ctx.lattice.wp_prime(ctx.eighth(7.0));
    let q = dp / ctx.d1;
    -2.0 * q * q
}

/// `g_j(z) = Σ_n q(0,j;n) zⁿ` for `j ∈ {0, 1}`.
///
/// `y` has a double zero at `ω₀ = 7ω₂/8`, so `r_y′(ω₀) = y′(ω₀) = 0`; `g₁` is
/// taken from the second derivatives: `g₁ = r_y″(ω₀)/(z y″(ω₀)) − Q(0,0)`.
pub fn extract_gj(rctx: &RYContext, j: u32) -> Result<f64> {
    match j {
        0 => Ok(rctx.q00),
        1 => {
            let c = &rctx.ctx;
            let ypp = y_second_at_zero(c);
            if ypp.norm() < 1e-14 {
                return Err(Error::Degenerate("y″ vanishes at 7ω₂/8".into()));
            }
            let rpp = rctx.combo.second_derivative(c.eighth(7.0));
            Ok((rpp / (rctx.z() * ypp)).re - rctx.q00)
        }
        _ => Err(Error::domain("j", j, "{0, 1}")),
    }
}

/// `Σ_n q(0,j;n) zⁿ` from the count table.
pub fn gj_series(table: &CountTable, j: usize, z: f64) -> f64 {
    table
        .axis_counts(j)
        .iter()
        .enumerate()
        .rev()
        .fold(0.0, |acc, (_, c)| acc * z + big_to_f64(c))
}

/// All `ω` in `ω₁[−1/2,1/2) + 3ω₂[0,1)` with `y(ω) = target`, by Newton
/// iteration from a grid of starting points.
pub fn y_preimages(rctx: &RYContext, target: Complex64) -> Vec<Complex64> {
    let c = &rctx.ctx;
    let lat = rctx.lattice();
    let (nre, nim) = (48, 8);
    let mut found: Vec<Complex64> = Vec::new();
    for i in 0..nre {
        for j in 0..nim {
            let mut u = lat.omega_hat() * ((i as f64 + 0.5) / nre as f64)
                + lat.omega_bar() * ((j as f64 + 0.5) / nim as f64 - 0.5);
            let mut ok = false;
            for _ in 0..60 {
                let r = c.y(u) - target;
                if !r.is_finite() {
                    break;
                }
                if r.norm() < 1e-13 * target.norm().max(1.0) {
                    ok = true;
                    break;
                }
                let step = r / c.dy(u);
                if !step.is_finite() {
                    break;
                }
                u -= step;
            }
            if !ok {
                continue;
            }
            let u = reduce(lat, u);
            if found
                .iter()
                .all(|&v| lat.dist_to_lattice(u - v) > 1e-7 * c.periods.omega2)
            {
                found.push(u);
            }
        }
    }
    found
}

fn reduce(lat: &Lattice, u: Complex64) -> Complex64 {
    let a = lat.omega_hat().re;
    let b = lat.omega_bar().im;
    Complex64::new(u.re.rem_euclid(a), (u.im + b / 2.0).rem_euclid(b) - b / 2.0)
}

/// Groups values that agree within `tol` (relative).
pub fn cluster(values: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut reps: Vec<Complex64> = Vec::new();
    for &v in values {
        if reps.iter().all(|&r| rel(r, v) > tol) {
            reps.push(v);
        }
    }
    reps
}

/// `Q(0, y)` takes at most six values over the preimages of `y` in a period
/// parallelogram of `r_y`.
pub fn check_six_branches(rctx: &RYContext, target: Complex64) -> VerificationReport {
    let t = Instant::now();
    let z = rctx.z();
    let pre = y_preimages(rctx, target);
    let values: Vec<Complex64> = pre.iter().map(|&u| rctx.ry(u) / (z * (target + 1.0))).collect();
    let branches = cluster(&values, 1e-6);
    let excess = branches.len().saturating_sub(6) as f64;
    // y has degree 2 on the (ω₁, ω₂) torus, so six preimages are expected
    let missing = (6usize.abs_diff(pre.len())) as f64;
    VerificationReport::numeric("Q(0,y) has at most six branches", excess + missing, 0.0)
        .param("z", z)
        .param("y", target)
        .param("preimages", pre.len())
        .param("branches", branches.len())
        .timed(t)
}

//! Weierstrass `℘`, `℘′` and `ζ` for an arbitrary lattice of FULL periods
//! `ω̄ Z + ω̂ Z`, together with numerical checks of the classical identities
//! (Laurent expansion, addition theorems, quasi-periodicity, ...).
//!
//! Evaluation goes through a reduced basis: the lattice is Lagrange-Gauss
//! reduced to half-periods `w1`, `w3` with `τ = w3/w1` in the fundamental
//! domain, so the nome satisfies `|q| ≤ e^{−π√3/2} ≈ 0.066` and the
//! trigonometric `q`-series converge geometrically. Arguments are shifted into
//! the cell around the origin first; `℘` is periodic and `ζ` picks up the
//! quasi-periods.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::report::VerificationReport;
use crate::sampling::SampleRng;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const MAX_TERMS: usize = 400;

/// Value returned at a lattice point.
pub const POLE: Complex64 = Complex64::new(f64::INFINITY, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Invariants {
    pub g2: Complex64,
    pub g3: Complex64,
}

/// The lattice `ω̄ Z + ω̂ Z`. Both arguments are full periods.
#[derive(Debug, Clone)]
pub struct Lattice {
    omega_bar: Complex64,
    omega_hat: Complex64,
    w1: Complex64,
    w3: Complex64,
    eta1: Complex64,
    eta3: Complex64,
    q2: Complex64,
    // q^{2n}/(1 − q^{2n}) and q^{2n}, n = 1..
    a: Vec<Complex64>,
    q2n: Vec<Complex64>,
    eta_bar: Complex64,
    eta_hat: Complex64,
    inv: Invariants,
}

impl Lattice {
    pub fn new(omega_bar: Complex64, omega_hat: Complex64) -> Result<Self> {
        let ratio = omega_hat / omega_bar;
        let ok = omega_bar.is_finite()
            && omega_hat.is_finite()
            && omega_bar.norm() > 0.0
            && omega_hat.norm() > 0.0
            && ratio.im.abs() > 1e-12 * ratio.norm();
        if !ok {
            return Err(Error::DegenerateLattice(omega_bar.to_string(), omega_hat.to_string()));
        }
        let (p1, p2) = reduce(omega_bar, omega_hat);
        let (w1, w3) = (p1 / 2.0, p2 / 2.0);
        let tau = w3 / w1;
        let q2 = (2.0 * PI * I * tau).exp();
        let mut a = Vec::new();
        let mut q2n = Vec::new();
        let mut p = q2;
        while a.len() < MAX_TERMS {
            a.push(p / (1.0 - p));
            q2n.push(p);
            // the ν-series decays like |q|^n at the edge of the cell
            if p.norm() < 1e-40 {
                break;
            }
            p *= q2;
        }
        let mut lat = Lattice {
            omega_bar,
            omega_hat,
            w1,
            w3,
            eta1: Complex64::new(0.0, 0.0),
            eta3: Complex64::new(0.0, 0.0),
            q2,
            a,
            q2n,
            eta_bar: Complex64::new(0.0, 0.0),
            eta_hat: Complex64::new(0.0, 0.0),
            inv: Invariants {
                g2: Complex64::new(0.0, 0.0),
                g3: Complex64::new(0.0, 0.0),
            },
        };
        let s1: Complex64 = lat.sum(|n, a| n * a);
        lat.eta1 = PI * PI / (12.0 * w1) * (1.0 - 24.0 * s1);
        // Legendre: η1 w3 − η3 w1 = iπ/2
        lat.eta3 = (lat.eta1 * w3 - I * PI / 2.0) / w1;
        let c = PI / (2.0 * w1);
        let e4 = 1.0 + 240.0 * lat.sum(|n, a| n.powi(3) * a);
        let e6 = 1.0 - 504.0 * lat.sum(|n, a| n.powi(5) * a);
        lat.inv = Invariants {
            g2: 4.0 / 3.0 * c.powi(4) * e4,
            g3: 8.0 / 27.0 * c.powi(6) * e6,
        };
        lat.eta_bar = lat.quasi_period(omega_bar);
        lat.eta_hat = lat.quasi_period(omega_hat);
        Ok(lat)
    }

    fn sum(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Complex64 {
        self.a.iter().enumerate().map(|(k, &a)| f((k + 1) as f64, a)).sum()
    }

    pub fn omega_bar(&self) -> Complex64 {
        self.omega_bar
    }

    pub fn omega_hat(&self) -> Complex64 {
        self.omega_hat
    }

    /// Reduced half-periods `(w1, w3)` with `Im(w3/w1) > 0`.
    pub fn reduced_half_periods(&self) -> (Complex64, Complex64) {
        (self.w1, self.w3)
    }

    pub fn invariants(&self) -> Invariants {
        self.inv
    }

    /// `2ζ(ω̄/2)`, the jump of `ζ` along `ω̄`.
    pub fn eta_bar(&self) -> Complex64 {
        self.eta_bar
    }

    /// `2ζ(ω̂/2)`, the jump of `ζ` along `ω̂`.
    pub fn eta_hat(&self) -> Complex64 {
        self.eta_hat
    }

    pub fn min_period(&self) -> f64 {
        (2.0 * self.w1).norm().min((2.0 * self.w3).norm())
    }

    pub fn scaled(&self, t: Complex64) -> Result<Lattice> {
        Lattice::new(t * self.omega_bar, t * self.omega_hat)
    }

    /// Real coordinates of `u` in the reduced basis `(2w1, 2w3)`.
    fn coords(&self, u: Complex64) -> (f64, f64) {
        let (a, b) = (2.0 * self.w1, 2.0 * self.w3);
        let t = (u * a.conj()).im / (b * a.conj()).im;
        let s = (u * b.conj()).im / (a * b.conj()).im;
        (s, t)
    }

    /// Nearest lattice point, as `(m, n, u − m·2w1 − n·2w3)`.
    fn split(&self, u: Complex64) -> (f64, f64, Complex64) {
        let (s, t) = self.coords(u);
        let (m, n) = (s.round(), t.round());
        (m, n, u - 2.0 * m * self.w1 - 2.0 * n * self.w3)
    }

    fn quasi_period(&self, period: Complex64) -> Complex64 {
        let (m, n, _) = self.split(period);
        2.0 * m * self.eta1 + 2.0 * n * self.eta3
    }

    /// Distance from `u` to the nearest lattice point.
    pub fn dist_to_lattice(&self, u: Complex64) -> f64 {
        let (s, t) = self.coords(u);
        let mut best = f64::INFINITY;
        for m in [s.floor(), s.ceil()] {
            for n in [t.floor(), t.ceil()] {
                let d = (u - 2.0 * m * self.w1 - 2.0 * n * self.w3).norm();
                best = best.min(d);
            }
        }
        best
    }

    fn is_pole(&self, u0: Complex64) -> bool {
        u0.norm() <= 1e-14 * self.w1.norm()
    }

    /// `(℘, ℘′, ζ − η1 u0/w1)` at a reduced argument.
    fn series(&self, u0: Complex64) -> (Complex64, Complex64, Complex64) {
        let c = PI / (2.0 * self.w1);
        let nu = c * u0;
        // cot ν and csc²ν through the smaller of e^{±2iν}
        let (cot, csc2) = if nu.im >= 0.0 {
            let w = (2.0 * I * nu).exp();
            (I * (w + 1.0) / (w - 1.0), -4.0 * w / ((w - 1.0) * (w - 1.0)))
        } else {
            let w = (-2.0 * I * nu).exp();
            (I * (1.0 + w) / (1.0 - w), -4.0 * w / ((1.0 - w) * (1.0 - w)))
        };
        // q^{2n} e^{±2inν}; both factors have modulus < 1 in the reduced cell
        let log_q2 = 2.0 * PI * I * (self.w3 / self.w1);
        let step_p = (log_q2 + 2.0 * I * nu).exp();
        let step_m = (log_q2 - 2.0 * I * nu).exp();
        let (mut ep, mut em) = (step_p, step_m);
        let mut s_sin = Complex64::new(0.0, 0.0);
        let mut s_ncos = Complex64::new(0.0, 0.0);
        let mut s_n2sin = Complex64::new(0.0, 0.0);
        for (k, q2n) in self.q2n.iter().enumerate() {
            let n = (k + 1) as f64;
            let den = 1.0 - q2n;
            let sin = (ep - em) / (2.0 * I * den);
            let cos = (ep + em) / (2.0 * den);
            s_sin += sin;
            s_ncos += n * cos;
            s_n2sin += n * n * sin;
            if ep.norm() + em.norm() < 1e-20 {
                break;
            }
            ep *= step_p;
            em *= step_m;
        }
        let wp = -self.eta1 / self.w1 + c * c * (csc2 - 8.0 * s_ncos);
        let wpp = c * c * c * (-2.0 * cot * csc2 + 16.0 * s_n2sin);
        let zeta = c * (cot + 4.0 * s_sin);
        (wp, wpp, zeta)
    }

    /// `℘(u)`.
    pub fn wp(&self, u: Complex64) -> Complex64 {
        let (_, _, u0) = self.split(u);
        if self.is_pole(u0) {
            return POLE;
        }
        self.series(u0).0
    }

    /// `℘′(u)`.
    pub fn wp_prime(&self, u: Complex64) -> Complex64 {
        let (_, _, u0) = self.split(u);
        if self.is_pole(u0) {
            return POLE;
        }
        self.series(u0).1
    }

    /// `℘″(u) = 6℘² − g2/2`.
    pub fn wp_second(&self, u: Complex64) -> Complex64 {
        let p = self.wp(u);
        if !p.is_finite() {
            return POLE;
        }
        6.0 * p * p - self.inv.g2 / 2.0
    }

    /// `ζ(u)`.
    pub fn zeta(&self, u: Complex64) -> Complex64 {
        let (m, n, u0) = self.split(u);
        if self.is_pole(u0) {
            return POLE;
        }
        let z0 = self.eta1 * u0 / self.w1 + self.series(u0).2;
        z0 + 2.0 * m * self.eta1 + 2.0 * n * self.eta3
    }

    /// `(℘, ℘′)` with a single series evaluation.
    pub fn wp_pair(&self, u: Complex64) -> (Complex64, Complex64) {
        let (_, _, u0) = self.split(u);
        if self.is_pole(u0) {
            return (POLE, POLE);
        }
        let (p, dp, _) = self.series(u0);
        (p, dp)
    }

    /// Nome squared `q² = e^{2πiτ}` of the reduced basis.
    pub fn nome_squared(&self) -> Complex64 {
        self.q2
    }
}

/// Lagrange-Gauss reduction of a basis of the lattice, oriented so that
/// `Im(p2/p1) > 0`.
fn reduce(mut p1: Complex64, mut p2: Complex64) -> (Complex64, Complex64) {
    for _ in 0..200 {
        if p2.norm() < p1.norm() {
            std::mem::swap(&mut p1, &mut p2);
        }
        let m = (p2 / p1).re.round();
        if m == 0.0 {
            break;
        }
        p2 -= m * p1;
    }
    if (p2 / p1).im < 0.0 {
        p2 = -p2;
    }
    (p1, p2)
}

pub fn wp(omega: Complex64, lat: &Lattice) -> Complex64 {
    lat.wp(omega)
}

pub fn wp_prime(omega: Complex64, lat: &Lattice) -> Complex64 {
    lat.wp_prime(omega)
}

pub fn zeta_fn(omega: Complex64, lat: &Lattice) -> Complex64 {
    lat.zeta(omega)
}

pub fn invariants_from_lattice(lat: &Lattice) -> Invariants {
    lat.invariants()
}

/// `|lhs − rhs| / max(1, |lhs|)`.
pub fn rel(lhs: Complex64, rhs: Complex64) -> f64 {
    let d = (lhs - rhs).norm();
    if d.is_nan() {
        return f64::INFINITY;
    }
    d / lhs.norm().max(1.0)
}

/// Weierstrass function of the lattice with periods `(ω̄, ω̂/p)`, written
/// through `℘` of `lat`: `℘(ω) + Σ_{ℓ=1}^{p−1} [℘(ω + ℓω̂/p) − ℘(ℓω̂/p)]`.
pub fn sublattice_wp(omega: Complex64, lat: &Lattice, p: usize) -> Result<Complex64> {
    if p == 0 {
        return Err(Error::domain("p", p, "p >= 1"));
    }
    let mut acc = lat.wp(omega);
    for l in 1..p {
        let s = lat.omega_hat() * (l as f64 / p as f64);
        acc += lat.wp(omega + s) - lat.wp(s);
    }
    Ok(acc)
}

/// A uniformly random point of the fundamental parallelogram at distance at
/// least `margin` from every point of `avoid + Λ`.
pub fn sample_regular(rng: &mut SampleRng, lat: &Lattice, avoid: &[Complex64], margin: f64) -> Complex64 {
    loop {
        let s: f64 = rng.gen();
        let t: f64 = rng.gen();
        let u = s * lat.omega_bar() + t * lat.omega_hat();
        let near = lat.dist_to_lattice(u) < margin || avoid.iter().any(|&p| lat.dist_to_lattice(u - p) < margin);
        if !near {
            return u;
        }
    }
}

fn margin(lat: &Lattice) -> f64 {
    0.05 * lat.min_period()
}

/// Differential equation `℘′² = 4℘³ − g2℘ − g3` at random points, relative
/// to `max(1, |℘′²|)`.
pub fn check_differential_equation(lat: &Lattice, rng: &mut SampleRng, samples: usize) -> VerificationReport {
    let inv = lat.invariants();
    let mut rep = VerificationReport::numeric("wp differential equation", 0.0, 1e-9).param("samples", samples);
    for _ in 0..samples {
        let u = sample_regular(rng, lat, &[], margin(lat));
        let (p, dp) = lat.wp_pair(u);
        rep.absorb(rel(dp * dp, 4.0 * p * p * p - inv.g2 * p - inv.g3));
    }
    rep
}

/// Laurent expansion at the origin: the residual
/// `℘(h) − 1/h² − g2h²/20 − g3h⁴/28` must decay like `h⁶`. The residual of the
/// report is `max(0, 6 − fitted slope)`.
pub fn check_p3_expansion(lat: &Lattice, radius: f64) -> VerificationReport {
    let inv = lat.invariants();
    let dir = Complex64::from_polar(1.0, PI / 7.0);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 0..5 {
        let h = radius * 0.5f64.powi(k);
        let w = dir * h;
        let r = lat.wp(w) - 1.0 / (w * w) - inv.g2 * w * w / 20.0 - inv.g3 * w.powi(4) / 28.0;
        xs.push(h.ln());
        ys.push(r.norm().ln());
    }
    let slope = fit_slope(&xs, &ys);
    VerificationReport::numeric("Laurent expansion at 0", (6.0 - slope).max(0.0), 0.25)
        .param("slope", format!("{slope:.4}"))
        .param("radius", radius)
}

pub(crate) fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Addition theorems for `ζ` and `℘` on random non-degenerate pairs.
pub fn check_addition_theorems(lat: &Lattice, rng: &mut SampleRng, samples: usize) -> VerificationReport {
    let mut rep = VerificationReport::numeric("addition theorems", 0.0, 1e-9).param("samples", samples);
    let m = margin(lat);
    let mut done = 0;
    while done < samples {
        let u = sample_regular(rng, lat, &[], m);
        let v = sample_regular(rng, lat, &[], m);
        if lat.dist_to_lattice(u + v) < m || lat.dist_to_lattice(u - v) < m {
            continue;
        }
        let (pu, dpu) = lat.wp_pair(u);
        let (pv, dpv) = lat.wp_pair(v);
        // On elongated lattices ℘ is exponentially flat away from the short
        // period, and the chord slope amplifies rounding by 1/|℘(u) − ℘(v)|².
        if (pu - pv).norm() < 1e-3 * pu.norm().max(1.0) {
            continue;
        }
        let ratio = (dpu - dpv) / (pu - pv);
        let zeta_rhs = lat.zeta(u) + lat.zeta(v) + 0.5 * ratio;
        let wp_rhs = -pu - pv + 0.25 * ratio * ratio;
        rep.absorb(rel(lat.zeta(u + v), zeta_rhs));
        rep.absorb(rel(lat.wp(u + v), wp_rhs));
        done += 1;
    }
    rep
}

/// `ζ(ω + ω̄) = ζ(ω) + 2ζ(ω̄/2)` and the `ω̂` analogue; the half-period values
/// are evaluated directly, not taken from the cached constants.
pub fn check_quasi_periodicity(lat: &Lattice, rng: &mut SampleRng, samples: usize) -> VerificationReport {
    let mut rep = VerificationReport::numeric("quasi-periodicity", 0.0, 1e-9).param("samples", samples);
    let jb = 2.0 * lat.zeta(lat.omega_bar() / 2.0);
    let jh = 2.0 * lat.zeta(lat.omega_hat() / 2.0);
    rep.absorb(rel(jb, lat.eta_bar()));
    rep.absorb(rel(jh, lat.eta_hat()));
    for _ in 0..samples {
        let u = sample_regular(rng, lat, &[], margin(lat));
        let z = lat.zeta(u);
        rep.absorb(rel(lat.zeta(u + lat.omega_bar()), z + jb));
        rep.absorb(rel(lat.zeta(u + lat.omega_hat()), z + jh));
    }
    rep
}

/// `(ζ(α)+ζ(β)+ζ(γ))² = ℘(α)+℘(β)+℘(γ)` whenever `α+β+γ = 0`.
pub fn check_frobenius_stickelberger(lat: &Lattice, rng: &mut SampleRng, samples: usize) -> VerificationReport {
    let mut rep = VerificationReport::numeric("Frobenius-Stickelberger", 0.0, 1e-8).param("samples", samples);
    let m = margin(lat);
    let mut done = 0;
    while done < samples {
        let a = sample_regular(rng, lat, &[], m);
        let b = sample_regular(rng, lat, &[], m);
        let c = -a - b;
        if lat.dist_to_lattice(c) < m {
            continue;
        }
        let s = lat.zeta(a) + lat.zeta(b) + lat.zeta(c);
        rep.absorb(rel(lat.wp(a) + lat.wp(b) + lat.wp(c), s * s));
        done += 1;
    }
    rep
}

/// Bisection formula on the real segment `(0, ω̂/2]` of a rectangular
/// lattice (`ω̄ ∈ iR`, `ω̂ ∈ R`). There every radicand is nonnegative and the
/// nonnegative square roots are the right branch.
pub fn check_bisection(lat: &Lattice, rng: &mut SampleRng, samples: usize) -> Result<VerificationReport> {
    let (ob, oh) = (lat.omega_bar(), lat.omega_hat());
    if ob.re.abs() > 1e-12 * ob.norm() || oh.im.abs() > 1e-12 * oh.norm() {
        return Err(Error::Degenerate(
            "bisection check needs a rectangular lattice with imaginary ω̄ and real ω̂".into(),
        ));
    }
    let e_bar = lat.wp(ob / 2.0).re;
    let e_hat = lat.wp(oh / 2.0).re;
    let e_mid = lat.wp((ob + oh) / 2.0).re;
    let mut rep = VerificationReport::numeric("bisection formula", 0.0, 1e-8).param("samples", samples);
    for _ in 0..samples {
        let t: f64 = rng.gen_range(0.05..=0.5);
        let u = Complex64::new(t * oh.re, 0.0);
        let p = lat.wp(u).re;
        let root = |a: f64, b: f64| ((p - a) * (p - b)).max(0.0).sqrt();
        let rhs = p + root(e_bar, e_hat) + root(e_bar, e_mid) + root(e_hat, e_mid);
        rep.absorb(rel(lat.wp(u / 2.0), Complex64::new(rhs, 0.0)));
    }
    Ok(rep)
}

/// `sublattice_wp` against a direct evaluation on the finer lattice.
pub fn check_sublattice(lat: &Lattice, p: usize, rng: &mut SampleRng, samples: usize) -> Result<VerificationReport> {
    let fine = Lattice::new(lat.omega_bar(), lat.omega_hat() / p as f64)?;
    let mut rep = VerificationReport::numeric("sublattice transformation", 0.0, 1e-9)
        .param("p", p)
        .param("samples", samples);
    for _ in 0..samples {
        let u = sample_regular(rng, &fine, &[], margin(&fine));
        rep.absorb(rel(fine.wp(u), sublattice_wp(u, lat, p)?));
    }
    Ok(rep)
}

/// `c + Σ r_ℓ ζ(ω − s_ℓ)` on a fixed lattice.
#[derive(Debug, Clone)]
pub struct ZetaCombination {
    pub lattice: Lattice,
    pub constant: Complex64,
    pub terms: Vec<(Complex64, Complex64)>,
}

impl ZetaCombination {
    pub fn new(lattice: Lattice, constant: Complex64, terms: Vec<(Complex64, Complex64)>) -> Self {
        ZetaCombination {
            lattice,
            constant,
            terms,
        }
    }

    pub fn residue_sum(&self) -> Complex64 {
        self.terms.iter().map(|t| t.0).sum()
    }

    pub fn shifts(&self) -> Vec<Complex64> {
        self.terms.iter().map(|t| t.1).collect()
    }

    pub fn eval(&self, omega: Complex64) -> Complex64 {
        self.constant
            + self
                .terms
                .iter()
                .map(|&(r, s)| r * self.lattice.zeta(omega - s))
                .sum::<Complex64>()
    }

    /// `−Σ r ℘(ω − s)`.
    pub fn derivative(&self, omega: Complex64) -> Complex64 {
        -self
            .terms
            .iter()
            .map(|&(r, s)| r * self.lattice.wp(omega - s))
            .sum::<Complex64>()
    }

    /// `−Σ r ℘′(ω − s)`.
    pub fn second_derivative(&self, omega: Complex64) -> Complex64 {
        -self
            .terms
            .iter()
            .map(|&(r, s)| r * self.lattice.wp_prime(omega - s))
            .sum::<Complex64>()
    }
}

/// Ellipticity dichotomy for a `ζ` combination: with vanishing residue sum
/// the combination is periodic in both periods within `1e-8`; otherwise the
/// jump along `ω̄` is at least `|Σ r|·|2ζ(ω̄/2)| − 1e-8`.
pub fn check_p5_p6_zeta_combination(
    combo: &ZetaCombination,
    rng: &mut SampleRng,
    samples: usize,
) -> VerificationReport {
    let lat = &combo.lattice;
    let m = margin(lat);
    let shifts = combo.shifts();
    let sum = combo.residue_sum();
    let elliptic = sum.norm() < 1e-12;
    let mut worst_periodic: f64 = 0.0;
    let mut min_jump = f64::INFINITY;
    for _ in 0..samples {
        let u = sample_regular(rng, lat, &shifts, m);
        let f = combo.eval(u);
        let jb = combo.eval(u + lat.omega_bar()) - f;
        let jh = combo.eval(u + lat.omega_hat()) - f;
        worst_periodic = worst_periodic.max(jb.norm().max(jh.norm()) / f.norm().max(1.0));
        min_jump = min_jump.min(jb.norm());
    }
    if elliptic {
        VerificationReport::numeric("elliptic zeta combination", worst_periodic, 1e-8).param("residue_sum", sum)
    } else {
        let bound = sum.norm() * lat.eta_bar().norm() - 1e-8;
        VerificationReport::numeric("non-elliptic zeta combination", (bound - min_jump).max(0.0), 1e-8)
            .param("residue_sum", sum)
            .param("min_jump", min_jump)
    }
}

/// All lattice identity checks in one batch.
pub fn property_suite(lat: &Lattice, rng: &mut SampleRng, samples: usize) -> Result<Vec<VerificationReport>> {
    let mut out = vec![
        check_differential_equation(lat, rng, samples),
        check_p3_expansion(lat, 0.25 * lat.min_period()),
        check_addition_theorems(lat, rng, samples),
    ];
    let sh = [0.3 * lat.omega_hat() + 0.2 * lat.omega_bar(), 0.7 * lat.omega_hat()];
    let elliptic = ZetaCombination::new(
        lat.clone(),
        Complex64::new(0.5, 0.0),
        vec![(Complex64::new(1.5, 0.0), sh[0]), (Complex64::new(-1.5, 0.0), sh[1])],
    );
    out.push(check_p5_p6_zeta_combination(&elliptic, rng, samples));
    let skew = ZetaCombination::new(
        lat.clone(),
        Complex64::new(0.0, 0.0),
        vec![(Complex64::new(1.0, 0.0), sh[0]), (Complex64::new(-0.5, 0.0), sh[1])],
    );
    out.push(check_p5_p6_zeta_combination(&skew, rng, samples));
    for p in [2, 3] {
        out.push(check_sublattice(lat, p, rng, samples)?);
    }
    out.push(check_quasi_periodicity(lat, rng, samples));
    out.push(check_frobenius_stickelberger(lat, rng, samples));
    if lat.omega_bar().re.abs() <= 1e-12 * lat.omega_bar().norm()
        && lat.omega_hat().im.abs() <= 1e-12 * lat.omega_hat().norm()
    {
        out.push(check_bisection(lat, rng, samples)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square() -> Lattice {
        Lattice::new(c(0.0, 1.0), c(1.0, 0.0)).unwrap()
    }

    // Direct symmetric lattice sums; slow and only accurate to ~1e-5.
    fn brute_wp(u: Complex64, ob: Complex64, oh: Complex64, n: i32) -> Complex64 {
        let mut s = 1.0 / (u * u);
        for a in -n..=n {
            for b in -n..=n {
                if a == 0 && b == 0 {
                    continue;
                }
                let w = a as f64 * ob + b as f64 * oh;
                s += 1.0 / ((u - w) * (u - w)) - 1.0 / (w * w);
            }
        }
        s
    }

    fn brute_zeta(u: Complex64, ob: Complex64, oh: Complex64, n: i32) -> Complex64 {
        let mut s = 1.0 / u;
        for a in -n..=n {
            for b in -n..=n {
                if a == 0 && b == 0 {
                    continue;
                }
                let w = a as f64 * ob + b as f64 * oh;
                s += 1.0 / (u - w) + 1.0 / w + u / (w * w);
            }
        }
        s
    }

    #[test]
    fn agrees_with_lattice_sums() {
        for (ob, oh) in [
            (c(0.0, 1.0), c(1.0, 0.0)),
            (c(0.3, 1.7), c(1.1, -0.2)),
            (c(0.0, 2.5), c(0.8, 0.0)),
        ] {
            let lat = Lattice::new(ob, oh).unwrap();
            for u in [c(0.31, 0.17), c(-0.2, 0.4), c(0.05, -0.33)] {
                let b = brute_wp(u, ob, oh, 300);
                assert!(rel(lat.wp(u), b) < 1e-4, "{} vs {}", lat.wp(u), b);
                let bz = brute_zeta(u, ob, oh, 300);
                assert!(rel(lat.zeta(u), bz) < 1e-4, "{} vs {}", lat.zeta(u), bz);
            }
        }
    }

    #[test]
    fn square_lattice_is_lemniscatic() {
        let lat = square();
        let inv = lat.invariants();
        assert!(inv.g3.norm() < 1e-10);
        // g2 = Γ(1/4)^8/(16π²) for periods 1, i
        let g = 3.625_609_908_221_908_f64;
        let expect = g.powi(8) / (16.0 * PI * PI);
        assert!((inv.g2.re - expect).abs() < 1e-8 * expect, "{}", inv.g2);
    }

    #[test]
    fn rectangular_half_period_value_is_real() {
        let lat = Lattice::new(c(0.0, 1.3), c(2.1, 0.0)).unwrap();
        let p = lat.wp((lat.omega_bar() + lat.omega_hat()) / 2.0);
        assert!(p.im.abs() < 1e-10);
    }

    #[test]
    fn parity_periodicity_homogeneity() {
        let lat = Lattice::new(c(0.2, 1.4), c(1.0, 0.1)).unwrap();
        let mut rng = sampling::rng(3);
        let t = c(0.7, -0.4);
        let scaled = lat.scaled(t).unwrap();
        for _ in 0..100 {
            let u = sample_regular(&mut rng, &lat, &[], 0.05);
            assert!(rel(lat.wp(-u), lat.wp(u)) < 1e-10);
            assert!(rel(lat.zeta(-u), -lat.zeta(u)) < 1e-10);
            assert!(rel(lat.wp_prime(-u), -lat.wp_prime(u)) < 1e-10);
            assert!(rel(lat.wp(u + lat.omega_bar()), lat.wp(u)) < 1e-10);
            assert!(rel(lat.wp(u + 3.0 * lat.omega_hat()), lat.wp(u)) < 1e-10);
            assert!(rel(scaled.wp(t * u), lat.wp(u) / (t * t)) < 1e-9);
        }
        let g2 = scaled.invariants().g2;
        assert!(rel(g2, lat.invariants().g2 / t.powi(4)) < 1e-10);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let lat = Lattice::new(c(0.0, 1.2), c(0.9, 0.0)).unwrap();
        let mut rng = sampling::rng(4);
        let h = 1e-5;
        for _ in 0..30 {
            let u = sample_regular(&mut rng, &lat, &[], 0.1);
            let dz = (lat.zeta(u + h) - lat.zeta(u - h)) / (2.0 * h);
            assert!(rel(-lat.wp(u), dz) < 1e-6);
            let dp = (lat.wp(u + h) - lat.wp(u - h)) / (2.0 * h);
            assert!(rel(lat.wp_prime(u), dp) < 1e-6);
            let ddp = (lat.wp_prime(u + h) - lat.wp_prime(u - h)) / (2.0 * h);
            assert!(rel(lat.wp_second(u), ddp) < 1e-6);
        }
    }

    #[test]
    fn poles_are_infinite() {
        let lat = square();
        assert!(lat.wp(c(0.0, 0.0)).re.is_infinite());
        assert!(lat.zeta(c(1.0, 1.0)).re.is_infinite());
    }

    #[test]
    fn degenerate_lattices_rejected() {
        assert!(Lattice::new(c(1.0, 0.0), c(2.0, 0.0)).is_err());
        assert!(Lattice::new(c(0.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn elongated_lattice() {
        // very small nome after reduction
        let lat = Lattice::new(c(0.0, 40.0), c(1.0, 0.0)).unwrap();
        let u = c(0.3, 17.0);
        let mut rng = sampling::rng(5);
        let rep = check_differential_equation(&lat, &mut rng, 50);
        assert!(rep.pass, "{rep}");
        assert!(lat.wp(u).is_finite() && lat.zeta(u).is_finite());
    }

    #[test]
    fn property_suite_square_and_skew() {
        for lat in [square(), Lattice::new(c(0.25, 1.1), c(1.3, -0.1)).unwrap()] {
            let mut rng = sampling::rng(6);
            for rep in property_suite(&lat, &mut rng, 40).unwrap() {
                assert!(rep.pass, "{rep}");
            }
        }
    }

    #[test]
    fn sublattice_trivial_and_square() {
        let lat = square();
        let u = c(0.21, 0.37);
        assert_eq!(sublattice_wp(u, &lat, 1).unwrap(), lat.wp(u));
        let fine = Lattice::new(c(0.0, 1.0), c(0.5, 0.0)).unwrap();
        assert!(rel(sublattice_wp(u, &lat, 2).unwrap(), fine.wp(u)) < 1e-9);
        assert!(sublattice_wp(u, &lat, 0).is_err());
    }

    #[test]
    fn non_elliptic_combination_detected() {
        let lat = square();
        let combo = ZetaCombination::new(lat, c(0.0, 0.0), vec![(c(1.0, 0.0), c(0.3, 0.3))]);
        let mut rng = sampling::rng(8);
        let rep = check_p5_p6_zeta_combination(&combo, &mut rng, 10);
        assert!(rep.pass, "{rep}");
        assert!(rep.check.contains("non-elliptic"));
    }
}

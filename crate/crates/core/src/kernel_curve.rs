//! The kernel `K(x,y;z) = z x²y² + z x²y + z y + z − x y`, its
//! discriminants and branch points, and the group generated by the two
//! birational involutions `ξ`, `η` that fix the step polynomial.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Num, Zero};
use serde::Serialize;

use crate::{Error, Result};

fn c<T: Num>(k: u8) -> T {
    let mut acc = T::zero();
    for _ in 0..k {
        acc = acc + T::one();
    }
    acc
}

/// `K(x,y;z)` in expanded form, regular at `x = 0` and `y = 0`.
pub fn kernel_eval<T: Num + Clone>(x: T, y: T, z: T) -> T {
    let xx = x.clone() * x.clone();
    let yy = y.clone() * y.clone();
    z.clone() * xx.clone() * yy + z.clone() * xx * y.clone() + z.clone() * y.clone() + z - x * y
}

/// `∂K/∂x = 2z x y² + 2z x y − y`.
pub fn kernel_dx<T: Num + Clone>(x: T, y: T, z: T) -> T {
    let two: T = c(2);
    two.clone() * z.clone() * x.clone() * y.clone() * y.clone() + two * z * x * y.clone() - y
}

/// `∂K/∂y = 2z x² y + z x² + z − x`.
pub fn kernel_dy<T: Num + Clone>(x: T, y: T, z: T) -> T {
    let two: T = c(2);
    let xx = x.clone() * x.clone();
    two * z.clone() * xx.clone() * y + z.clone() * xx + z - x
}

/// Coefficients of `K` as a quadratic in `y`: `K = a y² + b y + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCoefficients<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Num + Clone> KernelCoefficients<T> {
    pub fn at(x: T, z: T) -> Self {
        let xx = x.clone() * x.clone();
        KernelCoefficients {
            a: z.clone() * xx.clone(),
            b: z.clone() * xx - x + z.clone(),
            c: z,
        }
    }

    pub fn eval(&self, y: T) -> T {
        (self.a.clone() * y.clone() + self.b.clone()) * y + self.c.clone()
    }

    pub fn discriminant(&self) -> T {
        let four: T = c(4);
        self.b.clone() * self.b.clone() - four * self.a.clone() * self.c.clone()
    }
}

/// `d(x) = (z x² − x + z)² − 4z² x²`.
pub fn discriminant_x<T: Num + Clone>(x: T, z: T) -> T {
    KernelCoefficients::at(x, z).discriminant()
}

/// `d̃(y) = y² − 4z²(y² + y)(y + 1)`.
pub fn discriminant_y<T: Num + Clone>(y: T, z: T) -> T {
    let four: T = c(4);
    y.clone() * y.clone() - four * z.clone() * z * (y.clone() * y.clone() + y.clone()) * (y + T::one())
}

/// `d′(x) = 4z²x³ − 6z x² + 2(1 − 2z²)x − 2z`.
pub fn discriminant_x_d1(x: f64, z: f64) -> f64 {
    ((4.0 * z * z * x - 6.0 * z) * x + 2.0 * (1.0 - 2.0 * z * z)) * x - 2.0 * z
}

/// `d″(x) = 12z²x² − 12z x + 2(1 − 2z²)`.
pub fn discriminant_x_d2(x: f64, z: f64) -> f64 {
    (12.0 * z * z * x - 12.0 * z) * x + 2.0 * (1.0 - 2.0 * z * z)
}

pub(crate) fn check_z(z: f64) -> Result<()> {
    if z > 0.0 && z < 0.25 {
        Ok(())
    } else {
        Err(Error::domain("z", z, "(0, 1/4)"))
    }
}

/// Roots of the two discriminants; `y4` is the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchPoints {
    pub x: [f64; 4],
    pub y: [f64; 4],
}

/// Branch points in closed form, `0 < z < 1/4`.
pub fn branch_points(z: f64) -> Result<BranchPoints> {
    check_z(z)?;
    let s1 = (1.0 + 4.0 * z).sqrt();
    let s2 = (1.0 - 4.0 * z).sqrt();
    let t = (1.0 - 16.0 * z * z).sqrt();
    // numerators rationalised to avoid cancellation at small z
    let x1 = 2.0 * z / (1.0 + 2.0 * z + s1);
    let x2 = 2.0 * z / (1.0 - 2.0 * z + s2);
    let y2 = 8.0 * z * z / (1.0 - 8.0 * z * z + t);
    Ok(BranchPoints {
        x: [x1, x2, 1.0 / x2, 1.0 / x1],
        y: [0.0, y2, 1.0 / y2, f64::INFINITY],
    })
}

/// `ξ(x, y) = (x, 1/(x² y))`.
pub fn xi<T: Num + Clone>(x: T, y: T) -> Result<(T, T)> {
    let den = x.clone() * x.clone() * y;
    if den.is_zero() {
        return Err(Error::DivisionByZero("xi"));
    }
    Ok((x, T::one() / den))
}

/// `η(x, y) = (1/(x y), y)`.
pub fn eta<T: Num + Clone>(x: T, y: T) -> Result<(T, T)> {
    let den = x * y.clone();
    if den.is_zero() {
        return Err(Error::DivisionByZero("eta"));
    }
    Ok((T::one() / den, y))
}

/// Step polynomial `xy + x + 1/x + 1/(xy)`, invariant under `ξ` and `η`.
pub fn step_polynomial<T: Num + Clone>(x: T, y: T) -> Result<T> {
    let xy = x.clone() * y;
    if xy.is_zero() {
        return Err(Error::DivisionByZero("step polynomial"));
    }
    Ok(xy.clone() + x.clone() + T::one() / x + T::one() / xy)
}

/// Which walk model the involutions belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// `ξ(x,y) = (x, 1/(x²y))`, `η(x,y) = (1/(xy), y)`; group of order 8.
    Gessel,
    /// `ξ(x,y) = (x, 1/y)`, `η(x,y) = (1/x, y)`; group of order 4.
    Simple,
}

impl Model {
    pub fn order(self) -> usize {
        match self {
            Model::Gessel => 8,
            Model::Simple => 4,
        }
    }

    fn apply<T: Num + Clone>(self, g: Generator, x: T, y: T) -> Result<(T, T)> {
        match (self, g) {
            (Model::Gessel, Generator::Xi) => xi(x, y),
            (Model::Gessel, Generator::Eta) => eta(x, y),
            (Model::Simple, Generator::Xi) => {
                if y.is_zero() {
                    return Err(Error::DivisionByZero("xi"));
                }
                Ok((x, T::one() / y))
            }
            (Model::Simple, Generator::Eta) => {
                if x.is_zero() {
                    return Err(Error::DivisionByZero("eta"));
                }
                Ok((T::one() / x, y))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    Xi,
    Eta,
}

impl Generator {
    fn other(self) -> Self {
        match self {
            Generator::Xi => Generator::Eta,
            Generator::Eta => Generator::Xi,
        }
    }
}

/// A reduced word in `ξ`, `η`.
///
/// Words act left to right: `ξη` applies `ξ` first, then `η`. The element of
/// length `n/2` in a dihedral group of order `n` has two spellings; the one
/// starting with `ξ` is used.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    word: Vec<Generator>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { word: Vec::new() }
    }

    pub fn new(word: Vec<Generator>) -> Self {
        let mut out: Vec<Generator> = Vec::new();
        for g in word {
            if out.last() == Some(&g) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        GroupElement { word: out }
    }

    /// The reduced words of `model`'s group, identity first.
    pub fn elements(model: Model) -> Vec<GroupElement> {
        let half = model.order() / 2;
        let mut out = vec![GroupElement::identity()];
        for len in 1..=half {
            for first in [Generator::Xi, Generator::Eta] {
                if len == half && first == Generator::Eta {
                    continue;
                }
                let mut w = Vec::with_capacity(len);
                let mut g = first;
                for _ in 0..len {
                    w.push(g);
                    g = g.other();
                }
                out.push(GroupElement { word: w });
            }
        }
        out
    }

    pub fn word(&self) -> &[Generator] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// `(−1)^length`.
    pub fn sign(&self) -> i8 {
        if self.word.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn apply<T: Num + Clone>(&self, model: Model, x: T, y: T) -> Result<(T, T)> {
        let mut p = (x, y);
        for &g in &self.word {
            p = model.apply(g, p.0, p.1)?;
        }
        Ok(p)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("id");
        }
        for g in &self.word {
            f.write_str(match g {
                Generator::Xi => "ξ",
                Generator::Eta => "η",
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SignedPoint {
    pub element: GroupElement,
    pub sign: i8,
    pub x: BigRational,
    pub y: BigRational,
}

#[derive(Debug, Clone)]
pub struct Orbit {
    pub model: Model,
    pub points: Vec<SignedPoint>,
    /// `(ηξ)^{order/2}` returns to the starting point.
    pub closure: bool,
    /// Fewer distinct points than the group order (a warning, not an error).
    pub degenerate: bool,
}

impl Orbit {
    /// `Σ (−1)^θ x_θ y_θ`.
    pub fn signed_sum(&self) -> BigRational {
        self.points.iter().fold(BigRational::zero(), |acc, p| {
            let t = &p.x * &p.y;
            if p.sign > 0 {
                acc + t
            } else {
                acc - t
            }
        })
    }

    pub fn distinct(&self) -> usize {
        let mut seen: Vec<(&BigRational, &BigRational)> = Vec::new();
        for p in &self.points {
            if !seen.contains(&(&p.x, &p.y)) {
                seen.push((&p.x, &p.y));
            }
        }
        seen.len()
    }
}

/// The signed orbit of `(x, y)` in exact arithmetic.
pub fn orbit(model: Model, x: &BigRational, y: &BigRational) -> Result<Orbit> {
    let mut points = Vec::with_capacity(model.order());
    for element in GroupElement::elements(model) {
        let (px, py) = element.apply(model, x.clone(), y.clone())?;
        points.push(SignedPoint {
            sign: element.sign(),
            element,
            x: px,
            y: py,
        });
    }
    let rotation = GroupElement::new(vec![Generator::Eta, Generator::Xi]);
    let mut p = (x.clone(), y.clone());
    for _ in 0..model.order() / 2 {
        p = rotation.apply(model, p.0, p.1)?;
    }
    let closure = &p.0 == x && &p.1 == y;
    let mut orbit = Orbit {
        model,
        points,
        closure,
        degenerate: false,
    };
    orbit.degenerate = orbit.distinct() < model.order();
    Ok(orbit)
}

/// Signed orbit sum of `xy`; identically zero for the Gessel model.
pub fn orbit_sum(model: Model, x: &BigRational, y: &BigRational) -> Result<BigRational> {
    Ok(orbit(model, x, y)?.signed_sum())
}

/// Convenience constructor for small rationals.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use num_complex::Complex64;

    #[test]
    fn kernel_special_values() {
        let z: f64 = 0.13;
        assert_eq!(kernel_eval(0.0, 0.0, z), z);
        assert!((kernel_eval(0.0, 2.5, z) - z * 3.5).abs() < 1e-15);
        assert_eq!(kernel_eval(1.7, 0.0, z), z);
    }

    #[test]
    fn coefficients_expand_to_kernel() {
        let mut rng = sampling::rng(1);
        for _ in 0..50 {
            let x = sampling::nonzero_rational(&mut rng, 30);
            let y = sampling::nonzero_rational(&mut rng, 30);
            let z = sampling::nonzero_rational(&mut rng, 30);
            let k = KernelCoefficients::at(x.clone(), z.clone());
            assert_eq!(k.eval(y.clone()), kernel_eval(x, y, z));
        }
    }

    #[test]
    fn partial_derivatives() {
        let (x, y, z) = (
            Complex64::new(0.3, 0.2),
            Complex64::new(-0.7, 0.1),
            Complex64::new(0.1, 0.0),
        );
        let h = 1e-6;
        let fx = (kernel_eval(x + h, y, z) - kernel_eval(x - h, y, z)) / (2.0 * h);
        let fy = (kernel_eval(x, y + h, z) - kernel_eval(x, y - h, z)) / (2.0 * h);
        assert!((fx - kernel_dx(x, y, z)).norm() < 1e-9);
        assert!((fy - kernel_dy(x, y, z)).norm() < 1e-9);
    }

    #[test]
    fn discriminant_derivatives() {
        let z = 0.17;
        for &x in &[-2.0, 0.1, 0.5, 3.0] {
            let h = 1e-5;
            let d1 = (discriminant_x(x + h, z) - discriminant_x(x - h, z)) / (2.0 * h);
            let d2 = (discriminant_x_d1(x + h, z) - discriminant_x_d1(x - h, z)) / (2.0 * h);
            assert!((d1 - discriminant_x_d1(x, z)).abs() < 1e-8);
            assert!((d2 - discriminant_x_d2(x, z)).abs() < 1e-8);
        }
        assert_eq!(discriminant_x(0.0, z), z * z);
        assert_eq!(discriminant_y(0.0, z), 0.0);
    }

    #[test]
    fn branch_points_are_roots() {
        for &z in &crate::DEFAULT_Z_GRID {
            let bp = branch_points(z).unwrap();
            for x in bp.x {
                assert!(
                    discriminant_x(x, z).abs() < 1e-10 * x.abs().max(1.0).powi(4),
                    "z={z} x={x}"
                );
            }
            for y in &bp.y[..3] {
                assert!(discriminant_y(*y, z).abs() < 1e-10 * y.abs().max(1.0).powi(3));
            }
            assert!(bp.x[0] < bp.x[1] && bp.x[1] < bp.x[2] && bp.x[2] < bp.x[3]);
            assert!((bp.x[0] * bp.x[3] - 1.0).abs() < 1e-12);
            assert!((bp.x[1] * bp.x[2] - 1.0).abs() < 1e-12);
            assert!((bp.y[1] * bp.y[2] - 1.0).abs() < 1e-12);
        }
        let bp = branch_points(0.01).unwrap();
        assert!((bp.x[1] - 0.0102).abs() < 1e-4);
        assert!(branch_points(0.0).is_err());
        assert!(branch_points(0.25).is_err());
    }

    #[test]
    fn branch_points_match_printed_forms() {
        let z: f64 = 0.1;
        let bp = branch_points(z).unwrap();
        let x1 = (1.0 + 2.0 * z - (1.0 + 4.0 * z).sqrt()) / (2.0 * z);
        let x2 = (1.0 - 2.0 * z - (1.0 - 4.0 * z).sqrt()) / (2.0 * z);
        let y2 = (1.0 - 8.0 * z * z - (1.0 - 16.0 * z * z).sqrt()) / (8.0 * z * z);
        assert!((bp.x[0] - x1).abs() < 1e-13);
        assert!((bp.x[1] - x2).abs() < 1e-13);
        assert!((bp.y[1] - y2).abs() < 1e-12);
    }

    #[test]
    fn involutions() {
        let (x, y) = (rational(2, 1), rational(3, 1));
        let p = xi(x.clone(), y.clone()).unwrap();
        assert_eq!(p, (rational(2, 1), rational(1, 12)));
        assert_eq!(xi(p.0, p.1).unwrap(), (x.clone(), y.clone()));
        assert_eq!(eta(x.clone(), y.clone()).unwrap(), (rational(1, 6), rational(3, 1)));
        assert!(xi(rational(0, 1), y.clone()).is_err());
        assert!(eta(x, rational(0, 1)).is_err());
    }

    #[test]
    fn random_points_involutive_and_invariant() {
        let mut rng = sampling::rng(sampling::DEFAULT_SEED);
        for _ in 0..1000 {
            let x = sampling::nonzero_rational(&mut rng, 50);
            let y = sampling::nonzero_rational(&mut rng, 50);
            let s = step_polynomial(x.clone(), y.clone()).unwrap();
            let p = xi(x.clone(), y.clone()).unwrap();
            assert_eq!(step_polynomial(p.0.clone(), p.1.clone()).unwrap(), s);
            assert_eq!(xi(p.0, p.1).unwrap(), (x.clone(), y.clone()));
            let q = eta(x.clone(), y.clone()).unwrap();
            assert_eq!(step_polynomial(q.0.clone(), q.1.clone()).unwrap(), s);
            assert_eq!(eta(q.0, q.1).unwrap(), (x, y));
        }
    }

    #[test]
    fn group_words() {
        let g = GroupElement::elements(Model::Gessel);
        assert_eq!(g.len(), 8);
        assert_eq!(g.iter().filter(|e| e.sign() < 0).count(), 4);
        assert_eq!(g[7].to_string(), "ξηξη");
        assert_eq!(GroupElement::elements(Model::Simple).len(), 4);
        let w = GroupElement::new(vec![Generator::Xi, Generator::Eta, Generator::Eta]);
        assert_eq!(w.to_string(), "ξ");
    }

    #[test]
    fn longest_word_spellings_agree() {
        let a = GroupElement::new(vec![Generator::Xi, Generator::Eta, Generator::Xi, Generator::Eta]);
        let b = GroupElement::new(vec![Generator::Eta, Generator::Xi, Generator::Eta, Generator::Xi]);
        let (x, y) = (rational(5, 7), rational(-3, 4));
        assert_eq!(
            a.apply(Model::Gessel, x.clone(), y.clone()).unwrap(),
            b.apply(Model::Gessel, x, y).unwrap()
        );
    }

    #[test]
    fn gessel_orbits() {
        for (x, y) in [(rational(2, 1), rational(3, 1)), (rational(1, 2), rational(5, 1))] {
            let o = orbit(Model::Gessel, &x, &y).unwrap();
            assert_eq!(o.distinct(), 8);
            assert!(o.closure && !o.degenerate);
            assert!(o.signed_sum().is_zero());
        }
        assert!(orbit_sum(Model::Gessel, &rational(1, 3), &rational(7, 1))
            .unwrap()
            .is_zero());
        let o = orbit(Model::Gessel, &rational(1, 1), &rational(1, 1)).unwrap();
        assert!(o.degenerate && o.closure);
    }

    #[test]
    fn simple_walk_orbit_sum_is_not_zero() {
        // Σ = (x − 1/x)(y − 1/y); at (2, 3) this is (3/2)(8/3) = 4.
        let o = orbit(Model::Simple, &rational(2, 1), &rational(3, 1)).unwrap();
        assert!(o.closure);
        assert_eq!(o.distinct(), 4);
        assert_eq!(o.signed_sum(), rational(4, 1));
        let mut rng = sampling::rng(9);
        for _ in 0..100 {
            let x = sampling::nonzero_rational(&mut rng, 40);
            let y = sampling::nonzero_rational(&mut rng, 40);
            let expect = (&x - x.recip()) * (&y - y.recip());
            assert_eq!(orbit_sum(Model::Simple, &x, &y).unwrap(), expect);
        }
    }
}

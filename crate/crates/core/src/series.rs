//! Truncated power series with exact rational coefficients.
//!
//! A [`RationalSeries`] of order `N` stores `c₀..c_N`; every operation is
//! exact through the smaller of the operand orders.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<BigRational>,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RationalSeries {
    /// Series from its coefficients; the order is `coeffs.len() − 1`.
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Series("a series needs at least one coefficient".into()));
        }
        Ok(RationalSeries { coeffs })
    }

    pub fn from_integers(coeffs: &[i64], order: usize) -> Self {
        let mut c: Vec<BigRational> = coeffs.iter().map(|&v| int(v)).collect();
        c.resize(order + 1, BigRational::zero());
        c.truncate(order + 1);
        RationalSeries { coeffs: c }
    }

    pub fn zero(order: usize) -> Self {
        RationalSeries {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(BigRational::one(), 0, order)
    }

    /// `c·z^k` truncated at `order`.
    pub fn monomial(c: BigRational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; zero beyond the stored order.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, BigRational::zero());
        c.truncate(order + 1);
        RationalSeries { coeffs: c }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        RationalSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `z^k · self`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut c = vec![BigRational::zero(); n + 1];
        for i in 0..=n.saturating_sub(k) {
            if i + k <= n {
                c[i + k] = self.coeffs[i].clone();
            }
        }
        RationalSeries { coeffs: c }
    }

    /// `self / z^k`; the order drops by `k`. Fails unless the first `k`
    /// coefficients vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(Error::Series(format!(
                "cannot divide order {} series by z^{k}",
                self.order()
            )));
        }
        if let Some(i) = self.coeffs[..k].iter().position(|c| !c.is_zero()) {
            return Err(Error::Series(format!(
                "coefficient of z^{i} is nonzero, cannot divide by z^{k}"
            )));
        }
        Ok(RationalSeries {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Reciprocal; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::Series("reciprocal of a series without constant term".into()));
        }
        let n = self.order();
        let inv0 = a0.recip();
        let mut b = vec![BigRational::zero(); n + 1];
        b[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &b[k - i];
            }
            b[k] = -acc * &inv0;
        }
        Ok(RationalSeries { coeffs: b })
    }

    /// `self^α` for a series with constant term 1, by the Miller recurrence
    /// `p_n = (1/n) Σ_{k=1}^{n} ((α+1)k − n) a_k p_{n−k}`.
    pub fn pow(&self, alpha: &BigRational) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Series(format!(
                "rational power needs constant term 1, got {}",
                self.coeffs[0]
            )));
        }
        let n = self.order();
        let a1 = alpha + BigRational::one();
        let mut p = vec![BigRational::zero(); n + 1];
        p[0] = BigRational::one();
        for m in 1..=n {
            let mut acc = BigRational::zero();
            for k in 1..=m {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                let w = &a1 * int(k as i64) - int(m as i64);
                acc += w * &self.coeffs[k] * &p[m - k];
            }
            p[m] = acc / int(m as i64);
        }
        Ok(RationalSeries { coeffs: p })
    }

    /// `self(inner)`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &RationalSeries) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Series("inner series must have zero constant term".into()));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        // Horner: c_N, then acc·inner + c_k
        let mut acc = RationalSeries::monomial(self.coeff(n), 0, n);
        for k in (0..n).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Index of the first coefficient that differs, if any, through the
    /// common order.
    pub fn first_difference(&self, other: &RationalSeries) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    pub fn is_positive(&self, upto: usize) -> bool {
        self.coeffs.iter().take(upto + 1).all(|c| c.is_positive())
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

impl Add for &RationalSeries {
    type Output = RationalSeries;
    fn add(self, rhs: Self) -> RationalSeries {
        let n = self.order().min(rhs.order());
        RationalSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for &RationalSeries {
    type Output = RationalSeries;
    fn sub(self, rhs: Self) -> RationalSeries {
        let n = self.order().min(rhs.order());
        RationalSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl Neg for &RationalSeries {
    type Output = RationalSeries;
    fn neg(self) -> RationalSeries {
        RationalSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &RationalSeries {
    type Output = RationalSeries;
    fn mul(self, rhs: Self) -> RationalSeries {
        let n = self.order().min(rhs.order());
        let mut c = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        RationalSeries { coeffs: c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn geometric_inverse() {
        let s = RationalSeries::from_integers(&[1, -1], 8);
        let inv = s.inverse().unwrap();
        assert_eq!(inv, RationalSeries::from_integers(&[1; 9], 8));
    }

    #[test]
    fn binomial_half_power() {
        // (1+4z)^{1/2} = 1 + 2z − 2z² + 4z³ − 10z⁴ + …
        let s = RationalSeries::from_integers(&[1, 4], 4);
        let p = s.pow(&r(1, 2)).unwrap();
        assert_eq!(p, RationalSeries::from_integers(&[1, 2, -2, 4, -10], 4));
        // (1−4z)^{−1/2} has central binomial coefficients
        let c = RationalSeries::from_integers(&[1, -4], 6).pow(&r(-1, 2)).unwrap();
        assert_eq!(c, RationalSeries::from_integers(&[1, 2, 6, 20, 70, 252, 924], 6));
    }

    #[test]
    fn integer_power_matches_product() {
        let s = RationalSeries::from_integers(&[1, 3, -2, 5], 10);
        let cube = &(&s * &s) * &s;
        assert_eq!(s.pow(&r(3, 1)).unwrap(), cube);
    }

    #[test]
    fn compose_geometric() {
        // 1/(1−u) at u = z/(1+z) is 1 + z
        let geo = RationalSeries::from_integers(&[1; 12], 11);
        let u = &RationalSeries::from_integers(&[0, 1], 11)
            * &RationalSeries::from_integers(&[1, 1], 11).inverse().unwrap();
        assert_eq!(geo.compose(&u).unwrap(), RationalSeries::from_integers(&[1, 1], 11));
    }

    #[test]
    fn shifts() {
        let s = RationalSeries::from_integers(&[0, 0, 3, 4], 5);
        assert_eq!(s.shift_down(2).unwrap(), RationalSeries::from_integers(&[3, 4], 3));
        assert!(s.shift_down(3).is_err());
        assert_eq!(s.shift_down(2).unwrap().shift_up(2).truncate(3), s.truncate(3));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(RationalSeries::from_integers(&[2, 1], 3).pow(&r(1, 2)).is_err());
        assert!(RationalSeries::from_integers(&[0, 1], 3).inverse().is_err());
        let s = RationalSeries::from_integers(&[1, 1], 3);
        assert!(s.compose(&s).is_err());
        assert!(RationalSeries::new(vec![]).is_err());
    }

    fn series(order: usize) -> impl Strategy<Value = RationalSeries> {
        prop::collection::vec(-5i64..=5, order).prop_map(move |v| {
            let mut c = vec![0];
            c.extend(v);
            RationalSeries::from_integers(&c, order)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn composition_is_associative(a in series(7), b in series(7), c in series(7)) {
            let one = RationalSeries::one(7);
            let f = &one + &a; // constant term 1 for the outer series
            let lhs = f.compose(&b.compose(&c).unwrap()).unwrap();
            let rhs = f.compose(&b).unwrap().compose(&c).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rational_power_round_trip(u in series(9), p in 1i64..4, q in 2i64..5) {
            let s = &RationalSeries::one(9) + &u;
            let root = s.pow(&r(p, q)).unwrap();
            let back = root.pow(&r(q, p)).unwrap();
            prop_assert_eq!(&back, &s);
            // q-th power of the 1/q root by repeated products
            let qth = s.pow(&r(1, q)).unwrap();
            let mut acc = RationalSeries::one(9);
            for _ in 0..q {
                acc = &acc * &qth;
            }
            prop_assert_eq!(acc, s);
        }
    }
}

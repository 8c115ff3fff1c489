//! Exact enumeration of small-step walks by dynamic programming.
//!
//! Counts are arbitrary precision integers; nothing in this module touches
//! floating point except [`CountTable::eval_truncated`], which sums the exact
//! table numerically.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// A set of small steps `(dx, dy)` with `|dx|, |dy| <= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepSet {
    steps: Vec<(i8, i8)>,
}

impl StepSet {
    pub fn new(steps: impl IntoIterator<Item = (i8, i8)>) -> Result<Self> {
        let mut out: Vec<(i8, i8)> = Vec::new();
        for (dx, dy) in steps {
            if dx.abs() > 1 || dy.abs() > 1 {
                return Err(Error::InvalidSteps(format!("({dx},{dy}) is not a small step")));
            }
            if dx == 0 && dy == 0 {
                return Err(Error::InvalidSteps("zero step".into()));
            }
            if out.contains(&(dx, dy)) {
                return Err(Error::InvalidSteps(format!("duplicate step ({dx},{dy})")));
            }
            out.push((dx, dy));
        }
        if out.is_empty() {
            return Err(Error::InvalidSteps("empty step set".into()));
        }
        Ok(StepSet { steps: out })
    }

    /// East, West, North-East, South-West.
    pub fn gessel() -> Self {
        StepSet {
            steps: vec![(1, 0), (-1, 0), (1, 1), (-1, -1)],
        }
    }

    /// East, West, North, South.
    pub fn simple() -> Self {
        StepSet {
            steps: vec![(1, 0), (-1, 0), (0, 1), (0, -1)],
        }
    }

    pub fn steps(&self) -> &[(i8, i8)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Exact counts `q(i, j; n)` of quarter-plane walks from the origin.
///
/// Layer `n` is stored densely as an `(n+1) x (n+1)` block indexed by
/// `(i, j)`; small steps cannot leave that block in `n` moves. For the
/// Gessel steps `i + j` can reach `2n` (a run of North-East steps), so the
/// layer is square rather than triangular.
#[derive(Debug, Clone)]
pub struct CountTable {
    steps: StepSet,
    layers: Vec<Vec<BigUint>>,
}

/// Builds the quarter-plane count table for `steps` up to length `n_max`.
pub fn count_table(steps: &StepSet, n_max: usize) -> CountTable {
    let mut layers: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
    layers.push(vec![BigUint::one()]);
    for n in 1..=n_max {
        let prev = &layers[n - 1];
        let prev_side = n;
        let side = n + 1;
        let mut next = vec![BigUint::zero(); side * side];
        for i in 0..prev_side {
            for j in 0..prev_side {
                let c = &prev[i * prev_side + j];
                if c.is_zero() {
                    continue;
                }
                for &(dx, dy) in steps.steps() {
                    let ti = i as i64 + dx as i64;
                    let tj = j as i64 + dy as i64;
                    if ti < 0 || tj < 0 {
                        continue;
                    }
                    next[ti as usize * side + tj as usize] += c;
                }
            }
        }
        layers.push(next);
    }
    CountTable {
        steps: steps.clone(),
        layers,
    }
}

impl CountTable {
    pub fn n_max(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn steps(&self) -> &StepSet {
        &self.steps
    }

    /// `q(i, j; n)`, zero outside the stored range.
    pub fn get(&self, i: usize, j: usize, n: usize) -> &BigUint {
        if n > self.n_max() || i > n || j > n {
            return &BigUint::ZERO;
        }
        &self.layers[n][i * (n + 1) + j]
    }

    /// Number of walks of length `n` regardless of end point.
    pub fn total(&self, n: usize) -> BigUint {
        self.layers[n].iter().sum()
    }

    /// `q(0, j; n)` for `n = 0..=n_max`.
    pub fn axis_counts(&self, j: usize) -> Vec<&BigUint> {
        (0..=self.n_max()).map(|n| self.get(0, j, n)).collect()
    }

    /// All nonzero entries ordered by `(n, i, j)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, &BigUint)> + '_ {
        self.layers.iter().enumerate().flat_map(|(n, layer)| {
            layer
                .iter()
                .enumerate()
                .filter_map(move |(k, c)| (!c.is_zero()).then_some((k / (n + 1), k % (n + 1), n, c)))
        })
    }

    /// CSV dump with header `i,j,n,count`, one row per nonzero entry.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "n", "count"])?;
        for (i, j, n, c) in self.nonzero() {
            w.write_record([i.to_string(), j.to_string(), n.to_string(), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Numeric value of the truncated series `Σ q(i,j;n) x^i y^j z^n`.
    ///
    /// The caller is responsible for choosing `z` small enough; see
    /// [`gessel_tail_bound`].
    pub fn eval_truncated(&self, x: Complex64, y: Complex64, z: Complex64) -> Complex64 {
        let mut total = Complex64::zero();
        let mut zn = Complex64::one();
        for (n, layer) in self.layers.iter().enumerate() {
            let side = n + 1;
            // Horner in y for each i, then in x.
            let mut acc_x = Complex64::zero();
            for i in (0..side).rev() {
                let mut acc_y = Complex64::zero();
                for j in (0..side).rev() {
                    acc_y = acc_y * y + big_to_f64(&layer[i * side + j]);
                }
                acc_x = acc_x * x + acc_y;
            }
            total += acc_x * zn;
            zn *= z;
        }
        total
    }
}

pub(crate) fn big_to_f64(c: &BigUint) -> f64 {
    c.to_f64().unwrap_or(f64::INFINITY)
}

/// Bound on the tail `Σ_{n > n_max}` of the Gessel series at `(x, y, z)`.
pub fn gessel_tail_bound(x: Complex64, y: Complex64, z: Complex64, n_max: usize) -> f64 {
    let r = 4.0 * z.norm() * x.norm().max(1.0) * y.norm().max(1.0);
    if r >= 1.0 {
        return f64::INFINITY;
    }
    r.powi(n_max as i32 + 1) / (1.0 - r)
}

/// Rising factorial `(a)_n = a (a+1) ⋯ (a+n-1)`.
pub fn pochhammer(a: &BigRational, n: usize) -> BigRational {
    let mut acc = BigRational::one();
    let mut f = a.clone();
    for _ in 0..n {
        acc *= &f;
        f += BigRational::one();
    }
    acc
}

/// `q(0,0;2n) = 16^n (5/6)_n (1/2)_n / ((2)_n (5/3)_n)`, in exact arithmetic.
pub fn gessel_excursions_closed_form(n: usize) -> Result<BigUint> {
    let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
    let value = BigRational::from_integer(BigInt::from(16u32).pow(n as u32))
        * pochhammer(&r(5, 6), n)
        * pochhammer(&r(1, 2), n)
        / (pochhammer(&r(2, 1), n) * pochhammer(&r(5, 3), n));
    if !value.is_integer() {
        return Err(Error::NonIntegral(value.to_string()));
    }
    value
        .to_integer()
        .to_biguint()
        .ok_or_else(|| Error::NonIntegral(value.to_string()))
}

/// Regions used by the classical cross-checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    /// All of `Z²`.
    Plane,
    /// `Z × N`.
    HalfPlane,
    /// `N²`.
    QuarterPlane,
    /// The 45° cone `0 <= j <= i`.
    Octant,
}

impl Region {
    pub const ALL: [Region; 4] = [Region::Plane, Region::HalfPlane, Region::QuarterPlane, Region::Octant];

    pub fn contains(self, i: i64, j: i64) -> bool {
        match self {
            Region::Plane => true,
            Region::HalfPlane => j >= 0,
            Region::QuarterPlane => i >= 0 && j >= 0,
            Region::Octant => 0 <= j && j <= i,
        }
    }

    /// Known number of simple excursions of length `2n` in this region.
    pub fn simple_excursions(self, n: usize) -> BigUint {
        let n = n as u64;
        let b = |a: u64, k: u64| binomial(BigUint::from(a), BigUint::from(k));
        let cat = |k: u64| b(2 * k, k) / BigUint::from(k + 1);
        match self {
            Region::Plane => {
                let c = b(2 * n, n);
                &c * &c
            }
            Region::HalfPlane => b(2 * n + 1, n) * cat(n),
            Region::QuarterPlane => cat(n) * cat(n + 1),
            Region::Octant => cat(n) * cat(n + 2) - cat(n + 1) * cat(n + 1),
        }
    }
}

/// Number of excursions of every length `0..=max_len` confined to `region`.
pub fn excursion_counts(steps: &StepSet, region: Region, max_len: usize) -> Vec<BigUint> {
    let off = max_len as i64;
    let side = 2 * max_len + 1;
    let idx = |i: i64, j: i64| ((i + off) as usize) * side + (j + off) as usize;
    let mut cur = vec![BigUint::zero(); side * side];
    cur[idx(0, 0)] = BigUint::one();
    let mut out = vec![BigUint::one()];
    for n in 1..=max_len {
        let mut next = vec![BigUint::zero(); side * side];
        let reach = (n - 1) as i64;
        for i in -reach..=reach {
            for j in -reach..=reach {
                let c = &cur[idx(i, j)];
                if c.is_zero() {
                    continue;
                }
                for &(dx, dy) in steps.steps() {
                    let (ti, tj) = (i + dx as i64, j + dy as i64);
                    if region.contains(ti, tj) {
                        next[idx(ti, tj)] += c;
                    }
                }
            }
        }
        out.push(next[idx(0, 0)].clone());
        cur = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CrossCheckRow {
    pub region: Region,
    pub n: usize,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CrossCheckReport {
    pub n_max: usize,
    pub rows: Vec<CrossCheckRow>,
    pub first_mismatch: Option<CrossCheckRow>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Simple-walk excursions of length `2n`, `n <= n_max`, in the plane, half
/// plane, quarter plane and octant against their closed forms.
pub fn classical_cross_checks(n_max: usize) -> Result<CrossCheckReport> {
    if n_max < 1 {
        return Err(Error::domain("n_max", n_max, "n_max >= 1"));
    }
    let steps = StepSet::simple();
    let mut rows = Vec::new();
    let mut first_mismatch = None;
    for region in Region::ALL {
        let counts = excursion_counts(&steps, region, 2 * n_max);
        for n in 0..=n_max {
            let expected = region.simple_excursions(n);
            let got = &counts[2 * n];
            let row = CrossCheckRow {
                region,
                n,
                expected: expected.to_string(),
                got: got.to_string(),
            };
            if &expected != got && first_mismatch.is_none() {
                first_mismatch = Some(row.clone());
            }
            rows.push(row);
        }
    }
    Ok(CrossCheckReport {
        n_max,
        rows,
        first_mismatch,
    })
}

/// Nonzero coefficients of
/// `K Q − K(x,0) Q(x,0) − K(0,y) Q(0,y) + K(0,0) Q(0,0) + xy`
/// through `z`-order `n_max`, keyed by `(i, j, n)`.
#[derive(Debug, Clone, Default)]
pub struct FunctionalResidual {
    pub n_max: usize,
    pub terms: BTreeMap<(usize, usize, usize), BigInt>,
}

impl FunctionalResidual {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Kernel monomials `(i, j, n, coefficient)` of
/// `K(x,y;z) = z x²y² + z x²y + z y + z − x y`.
const KERNEL_MONOMIALS: [(usize, usize, usize, i64); 5] =
    [(2, 2, 1, 1), (2, 1, 1, 1), (0, 1, 1, 1), (0, 0, 1, 1), (1, 1, 0, -1)];

/// Functional equation residual for the Gessel table of order `n_max`.
pub fn functional_equation_residual(n_max: usize) -> Result<FunctionalResidual> {
    if n_max < 1 {
        return Err(Error::domain("n_max", n_max, "n_max >= 1"));
    }
    Ok(residual_from_table(&count_table(&StepSet::gessel(), n_max)))
}

/// Same as [`functional_equation_residual`] on an existing Gessel table.
pub fn residual_from_table(table: &CountTable) -> FunctionalResidual {
    let n_max = table.n_max();
    let mut terms: BTreeMap<(usize, usize, usize), BigInt> = BTreeMap::new();
    let mut add = |key: (usize, usize, usize), v: BigInt| {
        if key.2 > n_max {
            return;
        }
        let e = terms.entry(key).or_insert_with(BigInt::zero);
        *e += v;
    };
    for (i, j, n, c) in table.nonzero() {
        let c = BigInt::from(c.clone());
        for &(di, dj, dn, k) in &KERNEL_MONOMIALS {
            add((i + di, j + dj, n + dn), &c * k);
        }
        // K(x,0) = z, K(0,y) = z(y+1), K(0,0) = z
        if j == 0 {
            add((i, 0, n + 1), -c.clone());
        }
        if i == 0 {
            add((0, j, n + 1), -c.clone());
            add((0, j + 1, n + 1), -c.clone());
        }
        if i == 0 && j == 0 {
            add((0, 0, n + 1), c.clone());
        }
    }
    add((1, 1, 0), BigInt::one());
    terms.retain(|_, v| !v.is_zero());
    FunctionalResidual { n_max, terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(t: &CountTable, i: usize, j: usize, n: usize) -> u64 {
        t.get(i, j, n).to_u64().unwrap()
    }

    #[test]
    fn empty_walk_only_at_length_zero() {
        let t = count_table(&StepSet::gessel(), 0);
        assert_eq!(q(&t, 0, 0, 0), 1);
        assert_eq!(t.nonzero().count(), 1);
    }

    #[test]
    fn small_gessel_counts() {
        let t = count_table(&StepSet::gessel(), 6);
        assert_eq!(q(&t, 0, 0, 1), 0);
        // {E,W} and {NE,SW}
        assert_eq!(q(&t, 0, 0, 2), 2);
        assert_eq!(q(&t, 0, 0, 4), 11);
        assert_eq!(q(&t, 0, 0, 6), 85);
        // one NE step already has i + j = 2 > n
        assert_eq!(q(&t, 1, 1, 1), 1);
    }

    #[test]
    fn odd_excursions_vanish() {
        let t = count_table(&StepSet::gessel(), 31);
        for n in (1..=31).step_by(2) {
            assert!(t.get(0, 0, n).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn closed_form_small_values() {
        let v: Vec<u64> = (0..4)
            .map(|n| gessel_excursions_closed_form(n).unwrap().to_u64().unwrap())
            .collect();
        assert_eq!(v, vec![1, 2, 11, 85]);
    }

    #[test]
    fn closed_form_matches_table() {
        let t = count_table(&StepSet::gessel(), 40);
        for n in 0..=20 {
            assert_eq!(t.get(0, 0, 2 * n), &gessel_excursions_closed_form(n).unwrap());
        }
    }

    #[test]
    fn pochhammer_values() {
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        assert_eq!(pochhammer(&r(1, 2), 0), r(1, 1));
        assert_eq!(pochhammer(&r(1, 2), 2), r(3, 4));
        assert_eq!(pochhammer(&r(5, 6), 1), r(5, 6));
    }

    #[test]
    fn rejects_bad_step_sets() {
        assert!(StepSet::new([]).is_err());
        assert!(StepSet::new([(0, 0)]).is_err());
        assert!(StepSet::new([(2, 0)]).is_err());
        assert!(StepSet::new([(1, 0), (1, 0)]).is_err());
        assert!(StepSet::new([(1, 0), (-1, 1)]).is_ok());
    }

    #[test]
    fn classical_small_cases() {
        let steps = StepSet::simple();
        assert_eq!(excursion_counts(&steps, Region::QuarterPlane, 2)[2], 2u32.into());
        assert_eq!(excursion_counts(&steps, Region::Plane, 2)[2], 4u32.into());
        assert_eq!(excursion_counts(&steps, Region::Octant, 2)[2], 1u32.into());
        assert_eq!(Region::Octant.simple_excursions(1), 1u32.into());
        assert_eq!(Region::QuarterPlane.simple_excursions(1), 2u32.into());
    }

    #[test]
    fn classical_cross_checks_pass() {
        let report = classical_cross_checks(8).unwrap();
        assert!(report.passed(), "{:?}", report.first_mismatch);
        assert!(classical_cross_checks(0).is_err());
    }

    #[test]
    fn functional_equation_vanishes() {
        for n in [1, 5, 12] {
            let r = functional_equation_residual(n).unwrap();
            assert!(r.is_zero(), "n_max = {n}: {:?}", r.terms.iter().next());
        }
    }

    #[test]
    fn functional_equation_detects_corruption() {
        let mut t = count_table(&StepSet::gessel(), 6);
        t.layers[4][0] += 1u32;
        assert!(!residual_from_table(&t).is_zero());
    }

    #[test]
    fn truncated_series_values() {
        let t = count_table(&StepSet::gessel(), 40);
        let c = |v: f64| Complex64::new(v, 0.0);
        assert_eq!(t.eval_truncated(c(0.0), c(0.0), c(0.0)), c(1.0));
        // independent re-summation of the excursion column
        let direct: f64 = (0..=20)
            .map(|n| big_to_f64(t.get(0, 0, 2 * n)) * 0.1f64.powi(2 * n as i32))
            .sum();
        let v = t.eval_truncated(c(0.0), c(0.0), c(0.1));
        assert!((v.re - direct).abs() < 1e-15);
        assert!((v.re - 1.0211).abs() < 1e-4);
        assert!(gessel_tail_bound(c(0.0), c(0.0), c(0.1), 40) < 1e-15);

        let mut direct = 0.0;
        for (i, j, n, cnt) in t.nonzero() {
            direct += big_to_f64(cnt) * 0.05f64.powi(n as i32);
            let _ = (i, j);
        }
        let v = t.eval_truncated(c(1.0), c(1.0), c(0.05));
        assert!((v.re - direct).abs() < 1e-13 * direct);
    }

    #[test]
    fn csv_dump_format() {
        let t = count_table(&StepSet::gessel(), 2);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("i,j,n,count"));
        assert_eq!(lines.next(), Some("0,0,0,1"));
        assert!(text.contains("0,0,2,2"));
        assert_eq!(text.lines().count(), 1 + t.nonzero().count());
    }

    proptest! {
        #[test]
        fn totals_bounded_by_free_walks(n in 1usize..14) {
            let t = count_table(&StepSet::gessel(), n);
            let free = BigUint::from(4u32).pow(n as u32);
            prop_assert!(t.total(n) < free);
        }

        #[test]
        fn recurrence_holds_entrywise(n in 1usize..12, i in 0usize..12, j in 0usize..12) {
            let t = count_table(&StepSet::gessel(), n);
            let mut expect = BigUint::zero();
            for &(dx, dy) in StepSet::gessel().steps() {
                let (si, sj) = (i as i64 - dx as i64, j as i64 - dy as i64);
                if si >= 0 && sj >= 0 {
                    expect += t.get(si as usize, sj as usize, n - 1);
                }
            }
            prop_assert_eq!(t.get(i, j, n), &expect);
        }
    }
}

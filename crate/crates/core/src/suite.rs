//! The thirteen acceptance criteria as one runnable suite.
//!
//! Full sizes are what the acceptance test target runs; `quick` trims grids
//! and sample counts so the command line `report-all --quick` stays well
//! under a minute. Tolerances are the same in both modes.

use std::time::Instant;

use num_traits::Zero;
use serde::Serialize;

use crate::hypergeometric::{
    check_f0_identity, check_gessel_equivalence, check_hypergeometric_relations, check_key_identities,
    check_new_conjectures, x_grid,
};
use crate::kernel_curve::{orbit, Model};
use crate::report::VerificationReport;
use crate::sampling::{nonzero_rational, rng};
use crate::uniformization::{
    check_branch_images, check_invariants, check_kernel_vanishes, check_period_ratio, compute_periods,
    wp_special_values, UniformizationContext,
};
use crate::walk_counting::{
    classical_cross_checks, count_table, functional_equation_residual, gessel_excursions_closed_form,
    gessel_tail_bound, CountTable, StepSet,
};
use crate::weierstrass::{property_suite, Lattice};
use crate::zeta_gf::{check_ry_periods, check_ry_vs_series, gj_series, q00_zeta, verify_table1, RYContext};
use crate::{Complex64, Result, DEFAULT_Z_GRID};

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub quick: bool,
    pub seed: u64,
    /// Replaces every numeric tolerance except runtime budgets.
    pub tol: Option<f64>,
}

impl SuiteConfig {
    pub fn full(seed: u64) -> Self {
        SuiteConfig {
            quick: false,
            seed,
            tol: None,
        }
    }

    pub fn quick(seed: u64) -> Self {
        SuiteConfig {
            quick: true,
            seed,
            tol: None,
        }
    }

    fn grid(&self) -> Vec<f64> {
        if self.quick {
            vec![0.05, 0.15, 0.24]
        } else {
            DEFAULT_Z_GRID.to_vec()
        }
    }

    fn samples(&self, full: usize) -> usize {
        if self.quick {
            (full / 5).max(5)
        } else {
            full
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    /// A failing informational criterion is a finding, not a defect.
    pub informational: bool,
    pub reports: Vec<VerificationReport>,
    pub error: Option<String>,
    pub runtime_ms: u64,
}

impl CriterionResult {
    pub fn pass(&self) -> bool {
        self.error.is_none() && !self.reports.is_empty() && self.reports.iter().all(|r| r.pass)
    }

    /// `PASS`/`FAIL` line with the worst numeric residual.
    pub fn summary(&self) -> String {
        let status = if self.pass() { "PASS" } else { "FAIL" };
        let failed: Vec<&str> = self
            .reports
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.check.as_str())
            .collect();
        let mut line = format!(
            "{status} criterion {:>2}: {} ({} checks, {} ms)",
            self.id,
            self.title,
            self.reports.len(),
            self.runtime_ms
        );
        if let Some(e) = &self.error {
            line.push_str(&format!(" error: {e}"));
        }
        if !failed.is_empty() {
            line.push_str(&format!(" failing: {}", failed.join("; ")));
        }
        if self.informational && !self.pass() {
            line.push_str(" [finding]");
        }
        line
    }
}

pub const TITLES: [&str; 13] = [
    "excursion counts equal the closed form for n <= 25",
    "classical cross-checks for n <= 12",
    "functional equation residual vanishes through order 20",
    "w3/w2 = 3/4 on the z-grid",
    "uniformization: kernel vanishes, branch points at half periods",
    "invariants and special values of wp",
    "Q(0,0) from zeta vs series and vs 2F1",
    "r_y vs boundary series, residue table, 3w2-periodicity",
    "key identities and closed forms on an x-grid",
    "lattice property suite on both lattices and the square lattice",
    "(eta xi)^4 = id and orbit sum 0 on random rationals",
    "exact f0 covering identity through order 25 (15 when quick)",
    "new conjectures j = 1, 2, 3 (reported)",
];

/// Walks of length up to 50 cover every criterion that needs counts.
pub const TABLE_ORDER: usize = 50;

pub struct Suite {
    cfg: SuiteConfig,
    table: Option<(CountTable, u64)>,
}

impl Suite {
    pub fn new(cfg: SuiteConfig) -> Self {
        Suite { cfg, table: None }
    }

    fn table(&mut self) -> &CountTable {
        if self.table.is_none() {
            let t = Instant::now();
            let table = count_table(&StepSet::gessel(), TABLE_ORDER);
            self.table = Some((table, t.elapsed().as_millis() as u64));
        }
        &self.table.as_ref().expect("just built").0
    }

    fn table_ms(&self) -> u64 {
        self.table.as_ref().map_or(0, |t| t.1)
    }

    pub fn run(&mut self, id: u8) -> CriterionResult {
        let t = Instant::now();
        let tol = self.cfg.tol;
        let (reports, error) = match self.dispatch(id) {
            Ok(r) => match tol {
                Some(tol) => (r.into_iter().map(|r| r.with_tolerance(tol)).collect(), None),
                None => (r, None),
            },
            Err(e) => (Vec::new(), Some(e.to_string())),
        };
        CriterionResult {
            id,
            title: TITLES[(id - 1) as usize],
            informational: id == 13,
            reports,
            error,
            runtime_ms: t.elapsed().as_millis() as u64,
        }
    }

    pub fn run_all(&mut self) -> Vec<CriterionResult> {
        (1..=13).map(|id| self.run(id)).collect()
    }

    fn dispatch(&mut self, id: u8) -> Result<Vec<VerificationReport>> {
        match id {
            1 => self.c1(),
            2 => self.c2(),
            3 => self.c3(),
            4 => self.c4(),
            5 => self.c5(),
            6 => self.c6(),
            7 => self.c7(),
            8 => self.c8(),
            9 => self.c9(),
            10 => self.c10(),
            11 => self.c11(),
            12 => self.c12(),
            13 => self.c13(),
            _ => Err(crate::Error::domain("criterion", id, "1..=13")),
        }
    }

    fn c1(&mut self) -> Result<Vec<VerificationReport>> {
        let table = self.table();
        let mut first_bad = None;
        for n in 0..=25 {
            if *table.get(0, 0, 2 * n) != gessel_excursions_closed_form(n)? {
                first_bad.get_or_insert(n);
            }
        }
        let odd_zero = (0..TABLE_ORDER / 2).all(|n| table.get(0, 0, 2 * n + 1).is_zero());
        let mut exact = VerificationReport::exact("q(0,0;2n) = closed form, n = 0..25", first_bad.is_none());
        if let Some(n) = first_bad {
            exact = exact.param("first_mismatch", n);
        }
        let secs = self.table_ms() as f64 / 1000.0;
        Ok(vec![
            exact,
            VerificationReport::exact("odd-length excursions vanish", odd_zero),
            VerificationReport::budget("count table to length 50 runtime", secs, 30.0),
        ])
    }

    fn c2(&mut self) -> Result<Vec<VerificationReport>> {
        let rep = classical_cross_checks(12)?;
        let mut out = VerificationReport::exact("plane, half-plane, quarter-plane, octant counts", rep.passed())
            .param("rows", rep.rows.len());
        if let Some(row) = &rep.first_mismatch {
            out = out.note(format!(
                "{:?} n={}: expected {} got {}",
                row.region, row.n, row.expected, row.got
            ));
        }
        Ok(vec![out])
    }

    fn c3(&mut self) -> Result<Vec<VerificationReport>> {
        let res = functional_equation_residual(20)?;
        Ok(vec![VerificationReport::exact(
            "functional equation residual through z^20",
            res.is_zero(),
        )
        .param("nonzero_terms", res.terms.len())])
    }

    fn c4(&mut self) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for z in self.cfg.grid() {
            let t = Instant::now();
            let p = compute_periods(z)?;
            let secs = t.elapsed().as_secs_f64();
            out.push(check_period_ratio(&p, z, 1e-9));
            out.push(VerificationReport::budget("period computation runtime", secs, 1.0).param("z", z));
        }
        Ok(out)
    }

    fn c5(&mut self) -> Result<Vec<VerificationReport>> {
        let mut g = rng(self.cfg.seed);
        let mut out = Vec::new();
        for z in self.cfg.grid() {
            let ctx = UniformizationContext::new(z)?;
            out.push(check_kernel_vanishes(&ctx, &mut g, 100, 1e-8));
            out.push(check_branch_images(&ctx, 1e-9));
        }
        Ok(out)
    }

    fn c6(&mut self) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for z in self.cfg.grid() {
            let ctx = UniformizationContext::new(z)?;
            out.push(check_invariants(&ctx, 1e-8));
            out.push(wp_special_values(&ctx, 1e-9));
        }
        Ok(out)
    }

    fn c7(&mut self) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        let zs = [0.05, 0.1, 0.15];
        let table = self.table();
        for z in zs {
            let zc = Complex64::new(z, 0.0);
            let zero = Complex64::zero();
            let need = (1..)
                .find(|&n| gessel_tail_bound(zero, zero, zc, n) < 1e-10)
                .expect("r < 1");
            if need > table.n_max() {
                return Err(crate::Error::TableTooShort {
                    have: table.n_max(),
                    need,
                });
            }
            let ctx = UniformizationContext::new(z)?;
            let series = gj_series(table, 0, z);
            out.push(
                VerificationReport::numeric(
                    "Q(0,0) zeta form vs truncated series",
                    (q00_zeta(&ctx) - series).abs(),
                    1e-6,
                )
                .param("z", z)
                .param("n_max", table.n_max())
                .param(
                    "tail_bound",
                    format!("{:.1e}", gessel_tail_bound(zero, zero, zc, table.n_max())),
                ),
            );
        }
        out.push(check_gessel_equivalence(&self.cfg.grid())?);
        Ok(out)
    }

    fn c8(&mut self) -> Result<Vec<VerificationReport>> {
        let seed = self.cfg.seed;
        let samples = self.cfg.samples(20);
        let table = self.table();
        let rctx = RYContext::from_z(0.1)?;
        let mut g = rng(seed);
        let mut out = vec![check_ry_vs_series(&rctx, table, &mut g, samples, 1e-6)?];
        out.extend(verify_table1(&rctx));
        out.push(check_ry_periods(&rctx, &mut g, samples));
        Ok(out)
    }

    fn c9(&mut self) -> Result<Vec<VerificationReport>> {
        let k = if self.cfg.quick { 6 } else { 20 };
        let mut out = check_key_identities(&x_grid(k))?;
        let us: Vec<f64> = (1..=9).map(|i| 0.1 * i as f64 - 0.05).collect();
        out.extend(check_hypergeometric_relations(&us, &x_grid(k))?);
        Ok(out)
    }

    fn c10(&mut self) -> Result<Vec<VerificationReport>> {
        let mut g = rng(self.cfg.seed);
        let samples = self.cfg.samples(20);
        let mut out = Vec::new();
        let mut lattices = vec![(
            "square".to_string(),
            Lattice::new(Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0))?,
        )];
        for z in self.cfg.grid() {
            let ctx = UniformizationContext::new(z)?;
            lattices.push((format!("(w1,w2) z={z}"), ctx.lattice.clone()));
            lattices.push((format!("(w1,3w2) z={z}"), ctx.lattice13.clone()));
        }
        for (name, lat) in lattices {
            for rep in property_suite(&lat, &mut g, samples)? {
                out.push(rep.param("lattice", &name));
            }
        }
        Ok(out)
    }

    fn c11(&mut self) -> Result<Vec<VerificationReport>> {
        let mut g = rng(self.cfg.seed);
        let n = if self.cfg.quick { 200 } else { 1000 };
        let (mut closure, mut sum_zero) = (true, true);
        for _ in 0..n {
            let x = nonzero_rational(&mut g, 50);
            let y = nonzero_rational(&mut g, 50);
            let o = orbit(Model::Gessel, &x, &y)?;
            closure &= o.closure;
            sum_zero &= o.signed_sum().is_zero();
        }
        Ok(vec![
            VerificationReport::exact("(eta xi)^4 = id", closure).param("points", n),
            VerificationReport::exact("Gessel orbit sum = 0", sum_zero).param("points", n),
        ])
    }

    fn c12(&mut self) -> Result<Vec<VerificationReport>> {
        let order = if self.cfg.quick { 15 } else { 25 };
        Ok(vec![check_f0_identity(self.table(), order)?])
    }

    fn c13(&mut self) -> Result<Vec<VerificationReport>> {
        let table = self.table();
        let mut out = Vec::new();
        for j in 1..=3 {
            out.push(check_new_conjectures(table, j, 3 * j + 12)?.to_report());
        }
        Ok(out)
    }
}

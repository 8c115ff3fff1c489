use std::fmt;
use std::fs::File;
use std::io::{self, Write};

use gessel_core::hypergeometric::{
    check_f0_identity, check_gessel_equivalence, check_hypergeometric_relations, check_key_identities,
    check_new_conjectures, x_grid,
};
use gessel_core::kernel_curve::{orbit, Model};
use gessel_core::report::VerificationReport;
use gessel_core::sampling::rng;
use gessel_core::suite::{Suite, SuiteConfig};
use gessel_core::uniformization::{compute_r, compute_t, t_direct, UniformizationContext};
use gessel_core::walk_counting::{count_table, gessel_excursions_closed_form, gessel_tail_bound, StepSet};
use gessel_core::zeta_gf::{
    check_continuation_identities, check_f_y_forms, check_orbit_sum_vanishes, check_ry_periods, check_ry_vs_series,
    check_six_branches, gj_series, q00_from_ry, q00_zeta, verify_table1, RYContext,
};
use gessel_core::{Complex64, Error};
use num_rational::BigRational;
use serde::Serialize;

use crate::output::{print_json, print_reports, ReportJson};
use crate::{Cli, Command, ConjectureCommand, Global, Steps, VerifyCommand};

/// Longest count table a single `verify` call will build on its own.
const MAX_AUTO_ORDER: usize = 160;

#[derive(Debug)]
pub enum CliError {
    /// Bad input that passed the argument parser: exit 2.
    Usage(String),
    /// A computation that could not be carried out: exit 1.
    Failed(String),
    /// stdout closed early, e.g. piped into `head`.
    Pipe,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
            CliError::Pipe => 0,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
            CliError::Pipe => f.write_str("broken pipe"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::InvalidSteps(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return CliError::Pipe;
        }
        CliError::Failed(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// `Ok(true)` iff every requested check passed.
pub fn run(cli: &Cli) -> CliResult<bool> {
    let g = &cli.global;
    match &cli.command {
        Command::Count { n_max, steps, output } => {
            let table = count_table(&step_set(*steps), *n_max);
            let res = match output {
                Some(path) => table.write_csv(File::create(path)?),
                None => table.write_csv(io::stdout().lock()),
            };
            res.map_err(|e| match e.into_kind() {
                csv::ErrorKind::Io(e) => CliError::from(e),
                k => CliError::Failed(format!("{k:?}")),
            })?;
            Ok(true)
        }
        Command::Periods { z } => periods(g, *z),
        Command::Orbit { x, y, model } => orbit_cmd(x, y, *model),
        Command::Verify { check } => {
            let reports = verify(g, check)?;
            let reports: Vec<VerificationReport> = match g.tol {
                Some(t) => reports.into_iter().map(|r| r.with_tolerance(t)).collect(),
                None => reports,
            };
            print_reports(&reports, g.json)?;
            Ok(reports.iter().all(|r| r.pass))
        }
        Command::Conjectures {
            command: ConjectureCommand::New { j, order },
        } => conjecture_new(g, *j as usize, *order),
        Command::ReportAll { quick } => report_all(g, *quick),
    }
}

fn step_set(steps: Steps) -> StepSet {
    match steps {
        Steps::Gessel => StepSet::gessel(),
        Steps::Simple => StepSet::simple(),
    }
}

#[derive(Serialize)]
struct PeriodsJson {
    z: f64,
    omega1_over_i: f64,
    omega2: f64,
    omega3: f64,
    ratio: f64,
    g2: f64,
    g3: f64,
    #[serde(rename = "R")]
    r: f64,
    #[serde(rename = "T")]
    t: [f64; 6],
    /// `closed-form` (cubic roots) or `direct` (sublattice evaluation, used
    /// when the cubic's roots are too close to tell apart).
    t_source: &'static str,
}

fn periods(g: &Global, z: f64) -> CliResult<bool> {
    let ctx = UniformizationContext::new(z)?;
    let inv = ctx.lattice.invariants();
    let (t, t_source) = match compute_t(z) {
        Ok(t) => (t, "closed-form"),
        Err(Error::RootAmbiguity(_)) => (t_direct(&ctx), "direct"),
        Err(e) => return Err(e.into()),
    };
    let p = &ctx.periods;
    let out = PeriodsJson {
        z,
        omega1_over_i: p.omega1.im,
        omega2: p.omega2,
        omega3: p.omega3,
        ratio: p.ratio(),
        g2: inv.g2.re,
        g3: inv.g3.re,
        r: compute_r(z)?,
        t,
        t_source,
    };
    if g.json {
        print_json(&out)?;
    } else {
        let mut w = io::stdout().lock();
        writeln!(w, "z        {}", out.z)?;
        writeln!(w, "w1/i     {:.15}", out.omega1_over_i)?;
        writeln!(w, "w2       {:.15}", out.omega2)?;
        writeln!(w, "w3       {:.15}", out.omega3)?;
        writeln!(w, "w3/w2    {:.15}", out.ratio)?;
        writeln!(w, "g2       {:.15}", out.g2)?;
        writeln!(w, "g3       {:.15}", out.g3)?;
        writeln!(w, "R        {:.15}", out.r)?;
        for (k, v) in out.t.iter().enumerate() {
            writeln!(w, "T{}       {:.15}", k + 1, v)?;
        }
        writeln!(w, "T source {}", out.t_source)?;
    }
    Ok(true)
}

#[derive(Serialize)]
struct OrbitPointJson {
    element: String,
    sign: i8,
    x: String,
    y: String,
}

#[derive(Serialize)]
struct OrbitJson {
    model: &'static str,
    x: String,
    y: String,
    points: Vec<OrbitPointJson>,
    closure: bool,
    degenerate: bool,
    distinct: usize,
    signed_sum: String,
}

fn parse_rational(name: &str, s: &str) -> CliResult<BigRational> {
    let r: BigRational = s
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{name}: expected a rational such as 3/7, got {s:?}")))?;
    Ok(r)
}

fn orbit_cmd(x: &str, y: &str, model: Steps) -> CliResult<bool> {
    let (xr, yr) = (parse_rational("x", x)?, parse_rational("y", y)?);
    let (m, name) = match model {
        Steps::Gessel => (Model::Gessel, "gessel"),
        Steps::Simple => (Model::Simple, "simple"),
    };
    let o = orbit(m, &xr, &yr).map_err(|e| match e {
        Error::DivisionByZero(_) => CliError::Usage(format!("orbit of ({xr}, {yr}) leaves the torus: {e}")),
        e => e.into(),
    })?;
    let out = OrbitJson {
        model: name,
        x: xr.to_string(),
        y: yr.to_string(),
        points: o
            .points
            .iter()
            .map(|p| OrbitPointJson {
                element: p.element.to_string(),
                sign: p.sign,
                x: p.x.to_string(),
                y: p.y.to_string(),
            })
            .collect(),
        closure: o.closure,
        degenerate: o.degenerate,
        distinct: o.distinct(),
        signed_sum: o.signed_sum().to_string(),
    };
    print_json(&out)?;
    Ok(out.closure)
}

fn verify(g: &Global, check: &VerifyCommand) -> CliResult<Vec<VerificationReport>> {
    match *check {
        VerifyCommand::Theorem31 { z } => theorem31(z),
        VerifyCommand::Theorem32 { z, samples } => theorem32(g.seed, z, samples),
        VerifyCommand::Table1 { z } => Ok(verify_table1(&RYContext::from_z(z)?)),
        VerifyCommand::Conjecture { n_max } => conjecture(n_max),
        VerifyCommand::KeyIdentities { grid } => {
            let xs = x_grid(grid as usize);
            let mut out = check_key_identities(&xs)?;
            let us: Vec<f64> = (1..=9).map(|i| 0.1 * i as f64 - 0.05).collect();
            out.extend(check_hypergeometric_relations(&us, &xs)?);
            Ok(out)
        }
    }
}

fn theorem31(z: f64) -> CliResult<Vec<VerificationReport>> {
    let rctx = RYContext::from_z(z)?;
    let q = q00_zeta(&rctx.ctx);
    let mut out = Vec::new();
    let zero = Complex64::new(0.0, 0.0);
    let zc = Complex64::new(z, 0.0);
    let need = (1..=MAX_AUTO_ORDER).find(|&n| gessel_tail_bound(zero, zero, zc, n) < 1e-10);
    if let Some(n) = need {
        let table = count_table(&StepSet::gessel(), n);
        out.push(
            VerificationReport::numeric(
                "Q(0,0) zeta form vs truncated series",
                (q - gj_series(&table, 0, z)).abs(),
                1e-6,
            )
            .param("z", z)
            .param("n_max", n),
        );
    }
    let mut equiv = check_gessel_equivalence(&[z])?.param("z", z);
    if need.is_none() {
        equiv = equiv.note(format!(
            "no comparison with the count series: a tail below 1e-10 needs walks longer than {MAX_AUTO_ORDER}"
        ));
    }
    out.push(equiv);
    out.push(
        VerificationReport::numeric(
            "Q(0,0) from r_y at 7w2/8 vs zeta form",
            (q00_from_ry(&rctx) - q).abs(),
            1e-8,
        )
        .param("z", z),
    );
    Ok(out)
}

fn theorem32(seed: u64, z: f64, samples: usize) -> CliResult<Vec<VerificationReport>> {
    let rctx = RYContext::from_z(z)?;
    let mut g = rng(seed);
    let mut order = 60;
    let series = loop {
        let table = count_table(&StepSet::gessel(), order);
        match check_ry_vs_series(&rctx, &table, &mut rng(seed), samples, 1e-6) {
            Err(Error::TableTooShort { .. }) if order < MAX_AUTO_ORDER => order = (2 * order).min(MAX_AUTO_ORDER),
            r => break r?,
        }
    };
    let mut out = vec![series.param("z", z)];
    out.push(check_ry_periods(&rctx, &mut g, samples).param("z", z));
    out.extend(
        check_continuation_identities(&rctx, &mut g, samples)
            .into_iter()
            .map(|r| r.param("z", z)),
    );
    out.push(check_f_y_forms(&rctx, &mut g, samples).param("z", z));
    out.push(check_orbit_sum_vanishes(&rctx, &mut g, samples).param("z", z));
    out.push(check_six_branches(&rctx, Complex64::new(0.37, 0.0)).param("z", z));
    Ok(out)
}

fn conjecture(n_max: usize) -> CliResult<Vec<VerificationReport>> {
    let table = count_table(&StepSet::gessel(), 2 * n_max);
    let mut out = Vec::with_capacity(n_max + 2);
    for n in 0..=n_max {
        let got = table.get(0, 0, 2 * n);
        let expected = gessel_excursions_closed_form(n)?;
        out.push(
            VerificationReport::exact("q(0,0;2n) = closed form", *got == expected)
                .param("n", n)
                .param("count", got)
                .param("closed_form", expected),
        );
    }
    out.push(check_f0_identity(&table, n_max)?);
    Ok(out)
}

fn conjecture_new(g: &Global, j: usize, order: usize) -> CliResult<bool> {
    let table = count_table(&StepSet::gessel(), 2 * order);
    let rep = check_new_conjectures(&table, j, order)?;
    if g.json {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            report: &'a gessel_core::hypergeometric::ConjectureReport,
            consistent: bool,
        }
        print_json(&Out {
            report: &rep,
            consistent: rep.consistent(),
        })?;
    } else {
        let mut w = io::stdout().lock();
        let shown = &rep.coefficients[..=rep.degree_bound.min(rep.order)];
        writeln!(w, "p_{}(z) through z^{}:", rep.j, rep.order)?;
        writeln!(w, "  coefficients 0..{}: {}", rep.degree_bound, shown.join(", "))?;
        match rep.first_nonzero_tail {
            None => writeln!(w, "  coefficients {}..{} vanish", rep.degree_bound + 1, rep.order)?,
            Some(k) => writeln!(w, "  coefficient {k} = {} is nonzero", rep.coefficients[k])?,
        }
        writeln!(w, "  positive: {}", rep.positive)?;
        let status = if rep.consistent() {
            "conjecture-consistent"
        } else {
            "finding: conjectured shape not observed"
        };
        writeln!(w, "  {status}")?;
    }
    Ok(rep.consistent())
}

fn report_all(g: &Global, quick: bool) -> CliResult<bool> {
    let mut cfg = if quick {
        SuiteConfig::quick(g.seed)
    } else {
        SuiteConfig::full(g.seed)
    };
    cfg.tol = g.tol;
    let mut suite = Suite::new(cfg);
    let mut results = Vec::new();
    let mut ok = true;
    for id in 1..=13 {
        let res = suite.run(id);
        if !g.json {
            println!("{}", res.summary());
        }
        ok &= res.pass() || res.informational;
        results.push(res);
    }
    if g.json {
        #[derive(Serialize)]
        struct Criterion<'a> {
            id: u8,
            title: &'a str,
            pass: bool,
            informational: bool,
            error: &'a Option<String>,
            runtime_ms: u64,
            reports: Vec<ReportJson<'a>>,
        }
        let out: Vec<Criterion> = results
            .iter()
            .map(|r| Criterion {
                id: r.id,
                title: r.title,
                pass: r.pass(),
                informational: r.informational,
                error: &r.error,
                runtime_ms: r.runtime_ms,
                reports: r.reports.iter().map(ReportJson::from).collect(),
            })
            .collect();
        print_json(&out)?;
    }
    Ok(ok)
}

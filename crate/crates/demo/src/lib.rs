//! Browser demo: three operations exported through wasm-bindgen, each
//! returning a JSON string. The `*_json` functions hold the logic and are
//! plain Rust so they can be tested natively.

use gessel_core::hypergeometric::g_series;
use gessel_core::kernel_curve::{orbit, Model};
use gessel_core::uniformization::UniformizationContext;
use gessel_core::walk_counting::{count_table, gessel_tail_bound, StepSet};
use gessel_core::zeta_gf::{gj_series, q00_zeta};
use gessel_core::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Series comparisons stop here; the DP cost grows like n³.
const MAX_SERIES_ORDER: usize = 120;

#[derive(Serialize)]
struct Periods {
    z: f64,
    omega1_over_i: f64,
    omega2: f64,
    omega3: f64,
    ratio: f64,
    g2: f64,
    g3: f64,
}

pub fn periods_json(z: f64) -> Result<String, String> {
    let ctx = UniformizationContext::new(z).map_err(|e| e.to_string())?;
    let inv = ctx.lattice.invariants();
    let p = &ctx.periods;
    to_json(&Periods {
        z,
        omega1_over_i: p.omega1.im,
        omega2: p.omega2,
        omega3: p.omega3,
        ratio: p.ratio(),
        g2: inv.g2.re,
        g3: inv.g3.re,
    })
}

#[derive(Serialize)]
struct Q00 {
    z: f64,
    zeta: f64,
    /// `None` when `16z²` is outside the summation range of ₂F₁.
    hypergeometric: Option<f64>,
    /// `None` when the tail bound would need walks longer than the cap.
    series: Option<f64>,
    series_n_max: Option<usize>,
}

/// `Q(0,0;z)` from the ζ form, the ₂F₁ form and the truncated count series.
pub fn q00_json(z: f64) -> Result<String, String> {
    let ctx = UniformizationContext::new(z).map_err(|e| e.to_string())?;
    let hg = g_series(z).ok().map(|g| (g - 1.0) / (2.0 * z * z));
    let zero = Complex64::new(0.0, 0.0);
    let n = (1..=MAX_SERIES_ORDER).find(|&n| gessel_tail_bound(zero, zero, Complex64::new(z, 0.0), n) < 1e-10);
    let series = n.map(|n| gj_series(&count_table(&StepSet::gessel(), n), 0, z));
    to_json(&Q00 {
        z,
        zeta: q00_zeta(&ctx),
        hypergeometric: hg,
        series,
        series_n_max: n,
    })
}

#[derive(Serialize)]
struct OrbitPoint {
    element: String,
    sign: i8,
    x: String,
    y: String,
}

#[derive(Serialize)]
struct OrbitOut {
    points: Vec<OrbitPoint>,
    closure: bool,
    signed_sum: String,
}

pub fn orbit_json(x: &str, y: &str) -> Result<String, String> {
    let parse = |s: &str| {
        s.trim()
            .parse::<BigRational>()
            .map_err(|_| format!("not a rational: {s:?}"))
    };
    let o = orbit(Model::Gessel, &parse(x)?, &parse(y)?).map_err(|e| e.to_string())?;
    to_json(&OrbitOut {
        points: o
            .points
            .iter()
            .map(|p| OrbitPoint {
                element: p.element.to_string(),
                sign: p.sign,
                x: p.x.to_string(),
                y: p.y.to_string(),
            })
            .collect(),
        closure: o.closure,
        signed_sum: o.signed_sum().to_string(),
    })
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn periods(z: f64) -> Result<String, JsError> {
    periods_json(z).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn q00(z: f64) -> Result<String, JsError> {
    q00_json(z).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = orbit)]
pub fn orbit_js(x: &str, y: &str) -> Result<String, JsError> {
    orbit_json(x, y).map_err(|e| JsError::new(&e))
}

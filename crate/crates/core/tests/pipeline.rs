use gessel_core::hypergeometric::{check_f0_identity, check_new_conjectures, g_series};
use gessel_core::kernel_curve::{kernel_eval, orbit_sum, rational, Model};
use gessel_core::sampling::{nonzero_rational, rng};
use gessel_core::uniformization::{compute_periods, UniformizationContext};
use gessel_core::walk_counting::{count_table, gessel_excursions_closed_form, StepSet};
use gessel_core::zeta_gf::{extract_gj, gj_series, q00_zeta, RYContext};
use gessel_core::Complex64;
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn csv_dump_round_trips_excursions() {
    let table = count_table(&StepSet::gessel(), 12);
    let mut buf = Vec::new();
    table.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("i,j,n,count"));
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        let (i, j, n): (usize, usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap());
        assert_eq!(table.get(i, j, n).to_string(), f[3]);
        assert_ne!(f[3], "0");
        if (i, j) == (0, 0) {
            assert_eq!(n % 2, 0);
            assert_eq!(table.get(0, 0, n), &gessel_excursions_closed_form(n / 2).unwrap());
        }
    }
}

#[test]
fn q00_zeta_series_and_hypergeometric() {
    let table = count_table(&StepSet::gessel(), 60);
    for z in [0.03, 0.08, 0.12] {
        let ctx = UniformizationContext::new(z).unwrap();
        let q = q00_zeta(&ctx);
        assert!((q - gj_series(&table, 0, z)).abs() < 1e-9, "z={z}");
        assert!((q - (g_series(z).unwrap() - 1.0) / (2.0 * z * z)).abs() < 1e-9, "z={z}");
    }
}

#[test]
fn g1_from_zeta_form_matches_series() {
    let table = count_table(&StepSet::gessel(), 60);
    let r = RYContext::from_z(0.1).unwrap();
    let g1 = extract_gj(&r, 1).unwrap();
    assert!((g1 - gj_series(&table, 1, 0.1)).abs() < 1e-7);
}

#[test]
fn conjecture_j0_is_f0_identity() {
    let table = count_table(&StepSet::gessel(), 40);
    assert!(check_f0_identity(&table, 18).unwrap().pass);
    let rep = check_new_conjectures(&table, 0, 18).unwrap();
    assert!(rep.consistent());
    assert_eq!(&rep.coefficients[..3], ["1", "8", "4"]);
}

#[test]
fn orbit_sums_on_seeded_points() {
    let mut g = rng(3);
    for _ in 0..100 {
        let (x, y) = (nonzero_rational(&mut g, 30), nonzero_rational(&mut g, 30));
        assert!(orbit_sum(Model::Gessel, &x, &y).unwrap().is_zero());
    }
    assert!(!orbit_sum(Model::Simple, &rational(2, 1), &rational(3, 1))
        .unwrap()
        .is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn period_ratio_is_three_quarters(z in 0.01f64..0.249) {
        let p = compute_periods(z).unwrap();
        prop_assert!((p.ratio() - 0.75).abs() < 1e-9);
    }

    #[test]
    fn parametrisation_on_kernel(z in 0.05f64..0.24, s in 0.05f64..0.95, t in 0.05f64..0.95) {
        let ctx = UniformizationContext::new(z).unwrap();
        let w = ctx.omega1() * t + ctx.omega2() * s;
        let near_pole = ctx.pole_points().iter().any(|&p| ctx.lattice.dist_to_lattice(w - p) < 0.1 * ctx.lattice.min_period());
        prop_assume!(!near_pole);
        let (x, y) = ctx.xy(w);
        prop_assert!(kernel_eval(x, y, Complex64::new(z, 0.0)).norm() < 1e-8);
    }
}

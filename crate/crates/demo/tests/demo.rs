use gessel_demo::{orbit_json, periods_json, q00_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn periods_ratio() {
    let v = parse(periods_json(0.15).unwrap());
    assert!((v["ratio"].as_f64().unwrap() - 0.75).abs() < 1e-9);
    assert!(periods_json(0.26).is_err());
}

#[test]
fn q00_three_ways_agree() {
    let v = parse(q00_json(0.1).unwrap());
    let zeta = v["zeta"].as_f64().unwrap();
    assert!((zeta - v["hypergeometric"].as_f64().unwrap()).abs() < 1e-7);
    assert!((zeta - v["series"].as_f64().unwrap()).abs() < 1e-6);
    let near = parse(q00_json(0.235).unwrap());
    assert!(near["series"].is_null());
    assert!((near["zeta"].as_f64().unwrap() - near["hypergeometric"].as_f64().unwrap()).abs() < 1e-7);
    let edge = parse(q00_json(0.245).unwrap());
    assert!(edge["hypergeometric"].is_null() && edge["zeta"].is_number());
}

#[test]
fn orbit_sum_zero() {
    let v = parse(orbit_json("3/4", "-2/5").unwrap());
    assert_eq!(v["points"].as_array().unwrap().len(), 8);
    assert_eq!(v["signed_sum"], "0");
    assert!(orbit_json("x", "1").is_err());
}

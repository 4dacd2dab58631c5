use serde_json::Value;
use superq_web::{brackets_json, brauer_json, series_json};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn d4_series() {
    let v = parse(series_json("d4-n11", 3).unwrap());
    assert_eq!(v["hilbert"], serde_json::json!([1, 4, 6, 8]));
    assert_eq!(v["complete_intersection"], false);
}

#[test]
fn d2_brackets() {
    let v = parse(brackets_json("d2-n11").unwrap());
    assert_eq!(v["rows"][0], serde_json::json!(["Q+", "Q+", "1·H + 1·P"]));
}

#[test]
fn small_brauer_sweep() {
    let v = parse(brauer_json(1, 1, 1).unwrap());
    assert_eq!(v["all_ok"], true);
}

#[test]
fn errors_are_strings() {
    assert!(series_json("cliff-2", 3).is_err());
    assert!(series_json("d10-n10", 6).unwrap_err().contains("limit"));
}

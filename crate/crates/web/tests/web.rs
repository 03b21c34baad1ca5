use lojbound_web::{bracket_report, check_report, diagram_report};
use serde_json::Value;

fn json(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn bracket_for_brieskorn() {
    let v = json(bracket_report("z1^3+z2^7", 1).unwrap());
    assert_eq!(v["report"]["upper"], "6");
    assert_eq!(v["report"]["lower"], "6");
    assert!(v["text"].as_str().unwrap().starts_with("upper=6 exact"));
}

#[test]
fn degenerate_bracket_reports_witness() {
    let v = json(bracket_report("(z1+z2)^2", 1).unwrap());
    assert_eq!(v["verdict"]["status"], "degenerate-witness");
}

#[test]
fn diagram_edges_for_two_variables() {
    let v = json(diagram_report("z1^3 + z1*z2 + z2^4").unwrap());
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 2);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
    assert!(v["fan"]["vertices"].is_array());
}

#[test]
fn check_and_parse_errors() {
    let v = json(check_report("z1^2+z2^2", 3).unwrap());
    assert!(v["text"].as_str().unwrap().contains("presumed-ok"));
    assert!(diagram_report("z1 +").is_err());
}

use std::process::{Command, Output};

fn lojbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lojbound")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bound_prints_summary() {
    let o = lojbound(&["bound", "z1^3+z2^7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("upper=6 exact path=convenient-B-minus-1"));
}

#[test]
fn fan_lists_example_vertices() {
    let o = lojbound(&["fan", "(z1^9+z2^3+z3^6)*z2+z3^7+z4^7"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("(7,21,12,12) strictly-positive"), "{out}");
    assert!(out.contains("(0,7,1,1) vanishing I={1}"), "{out}");
}

#[test]
fn jacobian_fan_shows_refined_vertex() {
    let o = lojbound(&["fan", "--jacobian", "(z1^9+z2^3+z3^6)*z2+z3^7+z4^7"]);
    let out = stdout(&o);
    assert!(out.contains("(2,6,3,3) strictly-positive d=21 face: z4^7 + z3^7 region=vanishing-boundary via (0,7,1,1)"), "{out}");
}

#[test]
fn syntax_error_exits_3() {
    let o = lojbound(&["bound", "z1 + "]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("position 5"), "{err}");
}

#[test]
fn degenerate_exits_2_unless_assumed() {
    let o = lojbound(&["bound", "(z1+z2)^2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lojbound(&["bound", "--assume-nondegenerate", "(z1+z2)^2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = lojbound(&["check", "--seed", "1", "z1*~z1+z2*~z2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_and_check_need_a_seed() {
    assert_eq!(lojbound(&["verify", "z1^2+z2^2"]).status.code(), Some(3));
    assert_eq!(lojbound(&["check", "z1^2+z2^2"]).status.code(), Some(3));
    assert_eq!(lojbound(&["check", "--seed", "4", "z1^2+z2^2"]).status.code(), Some(0));
}

#[test]
fn verify_json_is_deterministic() {
    let args = ["verify", "--json", "--seed", "9", "--budget", "300", "z1^2*z2 + z2^3*z3 + z3^4*z1 + z4^2"];
    let a = lojbound(&args);
    let b = lojbound(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["upper"], "21/4");
    assert_eq!(v["lower"], "21/4");
    assert_eq!(v["witness"]["ord_grad"], 21);
}

#[test]
fn analyze_json_contains_human_values() {
    let f = "(z1^9+z2^3+z3^6)*z2+z3^7+z4^7";
    let text = stdout(&lojbound(&["analyze", f]));
    let json = stdout(&lojbound(&["analyze", "--json", f]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(text.contains("upper=11"));
    assert_eq!(v["bound"]["upper"], "11");
    assert_eq!(v["sheet"]["eta_dprime"], "11");
    assert!(text.contains("vanishing subspaces: {1}"));
    assert_eq!(v["vanishing_subspaces"][0], "{1}");
}

#[test]
fn file_input_with_comments() {
    let path = std::env::temp_dir().join(format!("lojbound-cli-{}.txt", std::process::id()));
    std::fs::write(&path, "# brieskorn\nz1^3 +\n  z2^7  # tail\n").unwrap();
    let o = lojbound(&["bound", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(stdout(&o).lines().next(), Some("upper=6 exact path=convenient-B-minus-1"));
}

#[test]
fn bad_flag_exits_3() {
    assert_eq!(lojbound(&["bound", "--bogus", "z1^2"]).status.code(), Some(3));
}

use std::process::{Command, Output};

fn tmcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn eval_renders_text() {
    let o = tmcalc(&["eval", "m=1; db(v1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "dx1");
    let o = tmcalc(&["eval", "m=1; d(d(f))"]);
    assert_eq!(stdout(&o), "0");
}

#[test]
fn dimension_flag_applies_to_bare_documents() {
    let o = tmcalc(&["d", "--m", "2", "x1*v2"]);
    assert_eq!(stdout(&o), "v2*dx1 + x1*dv2");
}

#[test]
fn lift_verbs() {
    assert_eq!(
        stdout(&tmcalc(&["lift", "complete", "m=1; x1^2*dx1"])),
        "2*x1*v1*dx1 + x1^2*dv1"
    );
    assert_eq!(stdout(&tmcalc(&["lift", "vertical", "m=2; @x2"])), "@v2");
    assert_eq!(
        stdout(&tmcalc(&["lift", "pullback", "m=1; x1*dx1"])),
        "x1*dx1"
    );
}

#[test]
fn lie_along_field() {
    let o = tmcalc(&["lie", "xi", "m=2; clift(x1*dx2)"]);
    assert_eq!(stdout(&o), "v1*dx2 + x1*dv2");
    let o = tmcalc(&["lie", "B", "m=1; v1^2"]);
    assert_eq!(stdout(&o), "2*v1*dx1");
}

#[test]
fn latex_and_json_formats() {
    let o = tmcalc(&["eval", "--format", "latex", "m=1; -x1*dx1^dv1"]);
    assert_eq!(stdout(&o), "-x^{1}\\mathrm{d}x^{1}\\wedge \\mathrm{d}v^{1}");
    let o = tmcalc(&["eval", "--format", "json", "m=1; x1/2*dv1"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        j["terms"][0]["coeff"],
        serde_json::json!({"num": "x1", "den": "2"})
    );
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(tmcalc(&["eval", "m=2; dx3"]).status.code(), Some(2));
    assert_eq!(tmcalc(&["eval", "m=1; (x1"]).status.code(), Some(2));
    assert_eq!(tmcalc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        tmcalc(&["verify", "--filter", "no-such-identity"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        tmcalc(&["lift", "complete", "m=1; v1*dx1"]).status.code(),
        Some(2)
    );
    let o = tmcalc(&["eval", "m=1; 1 +"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:"));
}

#[test]
fn verify_reports_json() {
    let o = tmcalc(&[
        "verify",
        "--filter",
        "D-squared",
        "--cases",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<&str> = j["suite"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["D-squared", "D-squared-nonconstant"]);
    assert_eq!(j["summary"]["failed"], 0);
    assert!(j["suite"][0]["anchor"].is_string());
}

#[test]
fn verify_numeric_mode() {
    let o = tmcalc(&["verify", "--filter", "lift", "--cases", "3", "--numeric"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn transition_check_passes() {
    let o = tmcalc(&["transition-check", "--m", "2", "--cases", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(),
        3
    );
}

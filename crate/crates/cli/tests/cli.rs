use std::fs;
use std::path::PathBuf;

use assert_cmd::Command;
use tempfile::TempDir;

const FOUR_NODES: &str = "\
# two greens, two blues
n_green = 2
n_blue = 2
green = 0.5 0 0.5
blue = 0.9 0 0.1
gamma = 0.1
k = 0
";

fn netform() -> Command {
    Command::cargo_bin("netform").unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn json(out: &[u8]) -> serde_json::Value {
    serde_json::from_slice(out).unwrap()
}

#[test]
fn check_accepts_green_pair() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "a.inst", &format!("{FOUR_NODES}\n[E]\n0 1\n"));
    let out = netform().args(["eq", "check"]).arg(&file).assert().code(0).get_output().stdout.clone();
    assert_eq!(json(&out)["equilibrium"], true);
}

#[test]
fn check_rejects_empty_network_with_witness() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "a.inst", &format!("{FOUR_NODES}\n[E]\n"));
    let out = netform().args(["eq", "check"]).arg(&file).assert().code(1).get_output().stdout.clone();
    let v = json(&out);
    assert_eq!(v["equilibrium"], false);
    assert_eq!(v["witness"]["pair"], serde_json::json!([0, 1]));
}

#[test]
fn missing_or_malformed_input_exits_2() {
    netform().args(["eq", "check", "/definitely/not/here.inst"]).assert().code(2);
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.inst", "n_green = two\n");
    netform().args(["bounds", "ur"]).arg(&bad).assert().code(2);
    netform().args(["verify", "no-such-suite"]).assert().code(2);
}

#[test]
fn enumerate_lists_the_single_equilibrium() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "a.inst", FOUR_NODES);
    let out = netform().args(["eq", "enumerate", "--max-n", "4"]).arg(&file).assert().code(0).get_output().stdout.clone();
    let v = json(&out);
    assert_eq!(v["count"], 1);
    assert_eq!(v["equilibria"][0], serde_json::json!([[0, 1]]));
}

#[test]
fn construct_writes_a_checkable_instance() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "a.inst", FOUR_NODES);
    let built = dir.path().join("built.inst");
    netform().args(["eq", "construct"]).arg(&file).arg("--out").arg(&built).assert().code(0);
    netform().args(["eq", "check"]).arg(&built).assert().code(0);
}

#[test]
fn construct_is_inapplicable_when_blues_want_links() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "a.inst", &FOUR_NODES.replace("gamma = 0.1", "gamma = 0.04"));
    netform().args(["eq", "construct"]).arg(&file).assert().code(3);
}

#[test]
fn bounds_report_exact_values() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "a.inst", FOUR_NODES);
    let out = netform().args(["bounds", "ur"]).arg(&file).assert().code(0).get_output().stdout.clone();
    let v = json(&out);
    assert_eq!(v["ur_exogenous_exact"], "5");
    assert_eq!(v["ur"]["lower_exact"], "6.5");
    assert_eq!(v["ur"]["upper"], 6.5);
    for kind in ["degrees", "utility", "welfare"] {
        netform().args(["bounds", kind]).arg(&file).assert().code(0);
    }
}

#[test]
fn sweep_writes_csv_and_plot() {
    let dir = TempDir::new().unwrap();
    let config = write(&dir, "fig1.toml", "g0 = [0.5]\n[ur_exo]\nstart = 2\nstop = 3\nstep = 0.5\n");
    let csv = dir.path().join("fig1.csv");
    netform()
        .args(["sweep", "fig1", "--plot", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&csv)
        .assert()
        .code(0);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("figure,g0,b0,gamma,k,rho,ur_exo,metric_lower,metric_upper,status"));
    assert_eq!(lines.count(), 3);
    let svg = fs::read_to_string(csv.with_extension("svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn sweep_rejects_unknown_config_keys() {
    let dir = TempDir::new().unwrap();
    let config = write(&dir, "bad.toml", "colour = 3\n");
    netform().args(["sweep", "fig2", "--config"]).arg(&config).assert().code(2);
}

#[test]
fn verify_exit_codes_follow_verdicts() {
    netform().args(["verify", "lemma1", "--budget", "quick"]).assert().code(0);
    let out = netform()
        .args(["verify", "notes-examples", "--budget", "quick"])
        .assert()
        .code(1)
        .get_output()
        .stdout
        .clone();
    assert_eq!(json(&out)["verdict"], "fail");
}

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_hybrid-gkp");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn circuit_example() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/circuits/hybrid_qubit.toml").display().to_string()
}

#[test]
fn sweep_fidelity_peaks_near_optimum() {
    let (header, rows) = csv_rows(&stdout(&["sweep-fidelity", "--alpha-min", "0.05", "--alpha-max", "1.5", "--step", "0.005"]));
    assert_eq!(header, ["alpha", "fidelity"]);
    assert_eq!(rows.len(), 291);
    let best = rows.iter().max_by(|a, b| a[1].total_cmp(&b[1])).unwrap();
    assert!((best[0] - 0.455).abs() < 0.01 && (best[1] - 0.964).abs() < 0.002);
}

#[test]
fn tradeoff_contains_operating_point() {
    let (header, rows) = csv_rows(&stdout(&["tradeoff", "--alpha", "auto", "--vup-max", "3", "--points", "100"]));
    assert_eq!(header, ["v_up", "avg_fidelity", "success_prob"]);
    assert_eq!(rows.len(), 100);
    let pair = rows.windows(2).find(|w| w[0][1] >= 0.99 && w[1][1] < 0.99).expect("F = 0.99 is crossed");
    for r in pair {
        assert!((r[2] - 0.126).abs() < 0.03, "{r:?}");
    }
}

#[test]
fn bred_branch_wigner_is_negative() {
    let (header, rows) = csv_rows(&stdout(&["wigner", "--protocol", "breed", "--j", "2", "--alpha", "0.6", "--branch", "0"]));
    assert_eq!(header, ["x", "p", "W"]);
    assert_eq!(rows.len(), 81 * 81);
    assert!(rows.iter().map(|r| r[2]).fold(f64::INFINITY, f64::min) < -0.01);
}

#[test]
fn row_counts_follow_requested_points() {
    let sweep = |cmd: &str| csv_rows(&stdout(&[cmd, "--alpha-min", "0.1", "--alpha-max", "0.2", "--step", "0.01"])).1.len();
    assert_eq!(sweep("sweep-fidelity"), 11);
    assert_eq!(sweep("validate-approx"), 11);
    assert_eq!(csv_rows(&stdout(&["tradeoff", "--points", "7"])).1.len(), 7);
    assert_eq!(csv_rows(&stdout(&["wigner", "--protocol", "odd-cat", "--points", "5"])).1.len(), 25);
}

#[test]
fn output_is_byte_identical() {
    for args in [
        &["sweep-fidelity", "--step", "0.01"][..],
        &["tradeoff", "--points", "20"],
        &["breed", "--engine", "both"],
        &["qutrit"],
        &["simulate", "--circuit", &circuit_example()],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn every_subcommand_runs_on_every_engine() {
    let circuit = circuit_example();
    let commands: [&[&str]; 8] = [
        &["simulate", "--circuit", &circuit],
        &["breed"],
        &["qutrit"],
        &["equal-amp"],
        &["parity", "--state", "logical-one", "--amplitude", "0.4"],
        &["wigner", "--protocol", "hybrid", "--points", "9"],
        &["validate-approx", "--step", "0.1"],
        &["sweep-fidelity", "--step", "0.1"],
    ];
    for engine in ["coherent", "fock", "both"] {
        for c in commands {
            let mut args = c.to_vec();
            args.extend(["--engine", engine]);
            let out = run(&args);
            assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        }
    }
}

#[test]
fn parity_of_logical_one_is_odd() {
    let text = stdout(&["parity", "--state", "logical-one", "--amplitude", "0.35"]);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(r.headers().unwrap(), vec!["n", "weight", "parity"]);
    let mut even = 0.0;
    for rec in r.records() {
        let rec = rec.unwrap();
        let n: usize = rec[0].parse().unwrap();
        assert_eq!(&rec[2], if n % 2 == 0 { "even" } else { "odd" });
        if n % 2 == 0 {
            even += rec[1].parse::<f64>().unwrap();
        }
    }
    assert!(even < 1e-10);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["tradeoff", "--points", "0"]).status.code(), Some(1));
    assert_eq!(run(&["tradeoff", "--engine", "fock"]).status.code(), Some(1));
    assert_eq!(run(&["simulate", "--circuit", "/nonexistent.toml"]).status.code(), Some(1));
    assert_eq!(run(&["breed", "--engine", "both", "--cutoff", "4"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let forbidden = dir.path().join("odd.toml");
    std::fs::write(
        &forbidden,
        "modes = \"1\"\n[[inputs]]\nmode = \"0\"\nkind = \"cat\"\nparams = { alpha = \"0.5\", parity = \"odd\" }\n\
         [[measurements]]\nop = \"homodyne\"\nmodes = [\"0\"]\nparams = { p = \"0\" }\n",
    )
    .unwrap();
    assert_eq!(run(&["simulate", "--circuit", forbidden.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn file_output_gets_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = out.to_str().unwrap();
    assert!(run(&["sweep-fidelity", "--step", "0.05", "--out", o]).status.success());
    let (_, rows) = csv_rows(&std::fs::read_to_string(&out).unwrap());
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep.csv.json")).unwrap()).unwrap();
    assert_eq!(sidecar["command"], "sweep-fidelity");
    assert_eq!(sidecar["rows"], rows.len());
    let args = &sidecar["config"]["command"]["sweep-fidelity"];
    assert_eq!(args["step"], 0.05);
    assert_eq!(args["alpha_min"], 0.05);
    assert_eq!(sidecar["config"]["engine"], "coherent");
    assert!(sidecar["diagnostics"]["alpha_star"].as_f64().is_some());
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(&config, "command = \"sweep-fidelity\"\nalpha_min = 0.2\nalpha_max = 0.3\nstep = 0.05\n").unwrap();
    let c = config.to_str().unwrap();
    let (_, rows) = csv_rows(&stdout(&["--config", c]));
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][0], 0.2);
    let (_, rows) = csv_rows(&stdout(&["--config", c, "sweep-fidelity", "--step", "0.1"]));
    assert_eq!(rows.len(), 2);
}

#[test]
fn floats_carry_seventeen_digits() {
    let text = stdout(&["sweep-fidelity", "--alpha-min", "0.3", "--alpha-max", "0.3", "--step", "0.1"]);
    let cell = text.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    let mantissa = cell.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17);
}

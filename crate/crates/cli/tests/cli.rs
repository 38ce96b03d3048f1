use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tonks_core::observables::DensityMatrixGrid;

fn tonks(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tonks"))
        .current_dir(dir)
        .env_remove("TG_SEED")
        .args(args)
        .output()
        .expect("run tonks")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn bands_from_config() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("cfg.json"),
        r#"{"M": 9, "B_T": 1e-8, "omega_per_m": 1e6}"#,
    )
    .unwrap();
    let out = tonks(
        dir.path(),
        &[
            "bands",
            "--config",
            "cfg.json",
            "--n-bands",
            "2",
            "--out",
            "bands.csv",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "bands.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("band,l,nu,lambda,E_J"));
    assert_eq!(lines.count(), 18);
    assert!(dir.path().join("bands.csv.manifest.json").exists());
}

#[test]
fn even_particle_number_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = tonks(
        dir.path(),
        &[
            "density", "--M", "7", "--q", "1", "--N", "4", "--out", "d.csv",
        ],
    );
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("odd"), "{err}");
    assert!(!dir.path().join("d.csv").exists());

    let out = tonks(
        dir.path(),
        &[
            "density",
            "--M",
            "7",
            "--q",
            "1",
            "--N",
            "4",
            "--allow-even-n",
            "--out",
            "d.csv",
        ],
    );
    assert_eq!(code(&out), 0);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&tonks(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&tonks(dir.path(), &["bands", "--M", "7"])), 2);
    assert_eq!(
        code(&tonks(
            dir.path(),
            &["bands", "--M", "8", "--q", "1", "--out", "b.csv"]
        )),
        2
    );
    fs::write(
        dir.path().join("bad.json"),
        r#"{"M": 7, "q": 1, "colour": "red"}"#,
    )
    .unwrap();
    assert_eq!(
        code(&tonks(
            dir.path(),
            &["bands", "--config", "bad.json", "--out", "b.csv"]
        )),
        2
    );
    assert_eq!(
        code(&tonks(
            dir.path(),
            &["bands", "--config", "missing.json", "--out", "b.csv"]
        )),
        2
    );
    let out = tonks(
        dir.path(),
        &[
            "rspdm",
            "--M",
            "7",
            "--q",
            "1",
            "--N",
            "3",
            "--statistics",
            "bose",
            "--method",
            "closed",
            "--out",
            "r.csv",
        ],
    );
    assert_eq!(code(&out), 2);
}

#[test]
fn unwritable_output_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("blocker"), "").unwrap();
    let out = tonks(
        dir.path(),
        &["bands", "--M", "7", "--q", "1", "--out", "blocker/b.csv"],
    );
    assert_eq!(code(&out), 1);
}

#[test]
fn field_scan_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let out = tonks(
        dir.path(),
        &[
            "gap-scan", "--M", "9", "--param", "B", "--from", "0", "--to", "2e-8", "--points",
            "50", "--out", "gap.csv",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "gap.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("parameter,value,delta_lambda,delta_E_J"));
    let gaps: Vec<f64> = lines
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(gaps.len(), 50);
    assert!(gaps[0] > 0.0);
    assert!(gaps.windows(2).all(|w| w[1] >= w[0]));
}

const MC_ARGS: &[&str] = &[
    "rspdm",
    "--M",
    "7",
    "--q",
    "1",
    "--N",
    "3",
    "--grid",
    "24",
    "--samples",
    "4000",
];

fn mc_run(dir: &Path, extra: &[&str]) -> Output {
    let mut args = MC_ARGS.to_vec();
    args.extend_from_slice(extra);
    tonks(dir, &args)
}

#[test]
fn monte_carlo_is_reproducible_and_replayable() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(
        code(&mc_run(
            p,
            &["--seed", "7", "--workers", "1", "--out", "a/rho.csv"]
        )),
        0
    );
    assert_eq!(
        code(&mc_run(
            p,
            &["--seed", "7", "--workers", "1", "--out", "b/rho.csv"]
        )),
        0
    );
    assert_eq!(
        code(&mc_run(
            p,
            &["--seed", "7", "--workers", "3", "--out", "c/rho.csv"]
        )),
        0
    );
    assert_eq!(
        code(&mc_run(
            p,
            &["--seed", "8", "--workers", "1", "--out", "d/rho.csv"]
        )),
        0
    );
    let a = read(p, "a/rho.csv");
    assert_eq!(a, read(p, "b/rho.csv"));
    assert_eq!(a, read(p, "c/rho.csv"));
    assert_ne!(a, read(p, "d/rho.csv"));
    assert_eq!(read(p, "a/rho.stderr.csv"), read(p, "c/rho.stderr.csv"));

    let out = tonks(
        p,
        &["replay", "a/rho.csv.manifest.json", "--out", "e/rho.csv"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(a, read(p, "e/rho.csv"));
    assert_eq!(read(p, "a/rho.stderr.csv"), read(p, "e/rho.stderr.csv"));
}

#[test]
fn seed_environment_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(
        p.join("cfg.json"),
        r#"{"M": 7, "N": 3, "q": 1, "seed": 1, "samples": 4000}"#,
    )
    .unwrap();
    let run = |env: Option<&str>, out: &str| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_tonks"));
        cmd.current_dir(p).env_remove("TG_SEED");
        if let Some(seed) = env {
            cmd.env("TG_SEED", seed);
        }
        let o = cmd
            .args([
                "rspdm", "--config", "cfg.json", "--grid", "16", "--out", out,
            ])
            .output()
            .unwrap();
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    };
    run(None, "one.csv");
    run(Some("1"), "env1.csv");
    run(Some("2"), "env2.csv");
    assert_eq!(read(p, "one.csv"), read(p, "env1.csv"));
    assert_ne!(read(p, "one.csv"), read(p, "env2.csv"));
    let manifest: serde_json::Value =
        serde_json::from_str(&read(p, "env2.csv.manifest.json")).unwrap();
    assert_eq!(manifest["seed"], 2);
    assert_eq!(manifest["config"]["seed"], 2);
}

#[test]
fn json_matrix_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = mc_run(
        dir.path(),
        &["--seed", "3", "--format", "json", "--out", "rho.json"],
    );
    assert_eq!(code(&out), 0);
    let dm: DensityMatrixGrid = serde_json::from_str(&read(dir.path(), "rho.json")).unwrap();
    assert_eq!(dm.len(), 24);
    assert_eq!(dm.seed, Some(3));
    assert_eq!(dm.samples, Some(4000));
    assert!(dm.stderr.is_some());
    assert!(dm.is_symmetric());
}

#[test]
fn fermi_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let base = ["--M", "7", "--q", "1", "--N", "5"];
    for (cmd, out, header) in [
        ("density", "rho.csv", "z,rho"),
        ("momentum", "n.csv", "j,kappa,n,stderr"),
        ("antidiag", "cut.csv", "z,rho,stderr"),
    ] {
        let mut args = vec![cmd];
        args.extend_from_slice(&base);
        if cmd != "density" {
            args.extend_from_slice(&["--statistics", "fermi"]);
        }
        args.extend_from_slice(&["--out", out]);
        let o = tonks(p, &args);
        assert_eq!(code(&o), 0, "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(read(p, out).lines().next(), Some(header));
    }
    let total: f64 = read(p, "n.csv")
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 5.0).abs() < 1e-10);

    let o = tonks(
        p,
        &[
            "pair-dist",
            "--M",
            "7",
            "--q",
            "1",
            "--N",
            "5",
            "--grid",
            "16",
            "--out",
            "d.csv",
        ],
    );
    assert_eq!(code(&o), 0);
    let d = read(p, "d.csv");
    assert_eq!(d.lines().count(), 17);
    assert!(d
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("0.0000000000000000e0,0.0000000000000000e0,"));
}

#[test]
fn compare_with_quadrature_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let o = tonks(
        p,
        &[
            "compare", "--M", "3", "--q", "1", "--N", "3", "--grid", "9", "--method", "oracle",
            "--panels", "64", "--out", "cmp.csv",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = read(p, "cmp.csv");
    assert!(report.starts_with("quantity,fermi,bose,bose_stderr,difference,z_score\n"));
    let row = |name: &str| -> Vec<String> {
        report
            .lines()
            .find(|l| l.starts_with(&format!("{name},")))
            .unwrap_or_else(|| panic!("missing {name}"))
            .split(',')
            .map(str::to_string)
            .collect()
    };
    // the oracle diagonal equals the Fermi density
    let trace = row("density_trace");
    let (f, b): (f64, f64) = (trace[1].parse().unwrap(), trace[2].parse().unwrap());
    assert!((f - b).abs() < 1e-6);
    let energy = row("total_energy_lambda");
    assert_eq!(energy[1], energy[2]);
}

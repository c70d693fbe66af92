use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_fracgreen");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_in(dir: &Path, args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(BIN).args(args).current_dir(dir).output().unwrap();
    Run {
        code: status.code().unwrap(),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// Runs `cmd` on a config given inline.
fn run(cmd: &str, config: &str, extra: &[&str]) -> Run {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "scenario.toml", config);
    let mut args = vec![cmd, "--config", cfg.to_str().unwrap()];
    args.extend_from_slice(extra);
    run_in(dir.path(), &args)
}

fn ok(cmd: &str, config: &str) -> String {
    let r = run(cmd, config, &[]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    r.stdout
}

fn data_lines(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

/// Last column of the first row whose leading columns equal `key`.
fn lookup(csv: &str, key: &[&str]) -> String {
    data_lines(csv)
        .into_iter()
        .find(|r| r.iter().zip(key).all(|(a, b)| a == b))
        .unwrap_or_else(|| panic!("no row {key:?}"))
        .last()
        .unwrap()
        .clone()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

const HENON: &str = "schema_version = 1\n[model]\nn = 3\nalpha = 0.5\ngamma = 0.0\n";

#[test]
fn henon_verdicts_on_both_sides_of_threshold() {
    let above = ok("criteria", &format!("{HENON}q = 2.0\n"));
    assert_eq!(lookup(&above, &["existence_verdict"]), "exists");
    assert_eq!(num(&lookup(&above, &["henon_threshold"])), 1.5);
    let below = ok("criteria", &format!("{HENON}q = 1.4\n"));
    assert_eq!(lookup(&below, &["existence_verdict"]), "not-exists");
}

#[test]
fn dirac_measure_is_unbounded() {
    let out = ok(
        "criteria",
        "schema_version = 1\n[model]\nn = 3\nalpha = 0.5\nq = 2.0\n[measure]\nkind = \"dirac\"\n",
    );
    assert_eq!(lookup(&out, &["cond_int1.status"]), "finite");
    assert_eq!(lookup(&out, &["cond_int2.verdict"]), "unbounded-trend");
}

#[test]
fn green_table_columns_and_values() {
    let out = ok(
        "green",
        "schema_version = 1\n[model]\nn = 3\nalpha = 0.5\n[grids.d]\nmin = 0.1\nmax = 10.0\npoints = 9\n",
    );
    let header = out.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "d,g_riesz,g_subord,g_volest,ratio_lo,ratio_hi");
    let rows = data_lines(&out);
    assert_eq!(rows.len(), 9);
    let unit = rows.iter().find(|r| num(&r[0]) == 1.0).unwrap();
    assert!((num(&unit[1]) - 0.05066059182116889).abs() < 1e-12);
    // Exact power profile: ratios independent of d.
    let lo: Vec<f64> = rows.iter().map(|r| num(&r[4])).collect();
    let hi: Vec<f64> = rows.iter().map(|r| num(&r[5])).collect();
    for v in lo.iter().chain(&hi) {
        assert!((v / lo[0] - 1.0).abs() < 1e-9, "{v} vs {}", lo[0]);
    }
}

#[test]
fn recurrent_parameters_exit_3() {
    let r = run("green", "schema_version = 1\n[model]\nn = 1\nalpha = 0.75\n", &[]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("not transient"), "{}", r.stderr);
}

#[test]
fn config_errors_exit_2() {
    let unknown = run("green", "schema_version = 1\n[model]\nn = 3\nalphaa = 0.5\n", &[]);
    assert_eq!(unknown.code, 2);
    assert!(unknown.stderr.contains("line 4") && unknown.stderr.contains("alphaa"), "{}", unknown.stderr);
    let nested = run(
        "criteria",
        "schema_version = 1\n[model]\nn = 3\nalpha = 0.5\nq = 2.0\n[measure]\nkind = \"dirac\"\nfoo = 1\n",
        &[],
    );
    assert_eq!(nested.code, 2);
    assert_eq!(run("green", "schema_version = 2\n", &[]).code, 2);
    assert_eq!(run("green", "schema_version = 1\n[model]\nn = 3\nalpha = 1.5\n", &[]).code, 2);
    assert_eq!(run("criteria", &format!("{HENON}q = 0.5\n"), &[]).code, 2);
    assert_eq!(
        run("criteria", "schema_version = 1\n[model]\nn = 3\nalpha = 0.5\ngamma = -1.5\nq = 2.0\n", &[]).code,
        2
    );
    let dir = TempDir::new().unwrap();
    assert_eq!(run_in(dir.path(), &["green"]).code, 2);
    assert_eq!(run_in(dir.path(), &["frobnicate"]).code, 2);
}

#[test]
fn kernel_check_on_riesz_points() {
    let out = ok(
        "kernel-check",
        "schema_version = 1\n[model]\nalpha = 0.5\n[discrete]\nkernel = \"riesz\"\npoints = 8\nseed = 42\n",
    );
    assert_eq!(lookup(&out, &["b_le_kappa"]), "true");
    assert_eq!(lookup(&out, &["ptolemy_holds"]), "true");
    assert_eq!(lookup(&out, &["points"]), "8");
}

#[test]
fn kernel_check_three_point_file() {
    let dir = TempDir::new().unwrap();
    write(&dir, "k.txt", "points 3\nkernel\ninf 1 0.5\n1 inf 1\n0.5 1 inf\nweights\n1 1 1\n");
    let cfg = write(&dir, "c.toml", "schema_version = 1\n[discrete]\nkernel = \"file\"\npath = \"k.txt\"\n");
    let r = run_in(dir.path(), &["kernel-check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(num(&lookup(&r.stdout, &["kappa"])), 2.0);
    assert_eq!(lookup(&r.stdout, &["kappa_witness"]), "(0 1 2)");
}

#[test]
fn inflated_pair_is_flagged() {
    let out = ok("kernel-check", "schema_version = 1\n[discrete]\nkernel = \"perturbed\"\npoints = 6\n");
    assert!(num(&lookup(&out, &["kappa"])) > 64.0);
    assert_eq!(lookup(&out, &["kappa_flagged"]), "true");
    let clean = ok("kernel-check", "schema_version = 1\n[discrete]\npoints = 6\n");
    assert_eq!(lookup(&clean, &["kappa_flagged"]), "false");
    assert_eq!(lookup(&clean, &["b_le_kappa"]), "true");
    assert_eq!(lookup(&clean, &["wmp_exact"]), "true");
}

#[test]
fn iterate_trace() {
    let out = ok("iterate", "schema_version = 1\n[model]\nq = 2.0\n[discrete]\npoints = 5\ndepth = 2\n");
    let rows = data_lines(&out);
    assert_eq!(rows.len(), 15);
    let k2: Vec<_> = rows.iter().filter(|r| r[0] == "2").collect();
    assert!(k2.iter().all(|r| num(&r[4]) == 63.0));
    assert!(rows.iter().all(|r| r[5] == "true" && r[6] == "true"));
}

#[test]
fn iterate_depth_guard_exit_4() {
    let r = run("iterate", "schema_version = 1\n[model]\nq = 2.0\n[discrete]\ndepth = 9\n", &[]);
    assert_eq!(r.code, 4, "{}", r.stderr);
}

const SOLVE: &str = "schema_version = 1\n[model]\nn = 3\nalpha = 0.5\n";

#[test]
fn solve_supercritical_converges() {
    let out = ok("solve", &format!("{SOLVE}q = 2.0\n[picard]\nr_max = [1.0]\nh = 0.125\n"));
    assert_eq!(lookup(&out, &["converged", "1.0000000000000000e0"]), "true");
    assert!(num(&lookup(&out, &["residual", "1.0000000000000000e0"])) < 1e-8);
    assert!(num(&lookup(&out, &["domination_c", "1.0000000000000000e0"])).is_finite());
}

#[test]
fn solve_zero_forcing_gives_zero() {
    let out = ok("solve", &format!("{SOLVE}q = 2.0\n[picard]\nr_max = [1.0]\nh = 0.25\neta_amplitude = 0.0\n"));
    assert_eq!(num(&lookup(&out, &["max_v", "1.0000000000000000e0"])), 0.0);
}

#[test]
fn solve_subcritical_constants_grow() {
    let out = ok("solve", &format!("{SOLVE}q = 1.2\n[picard]\nr_max = [0.5, 1.0, 2.0]\nh = 0.25\n"));
    let c: Vec<f64> = data_lines(&out)
        .iter()
        .filter(|r| r[0] == "domination_c")
        .map(|r| num(&r[2]))
        .collect();
    assert_eq!(c.len(), 3);
    assert!(c[0] < c[1] && c[1] < c[2], "{c:?}");
}

#[test]
fn solve_memory_guard_exit_4() {
    let r = run("solve", &format!("{SOLVE}q = 2.0\n[picard]\nr_max = [8.0]\nh = 0.01\n"), &[]);
    assert_eq!(r.code, 4, "{}", r.stderr);
}

#[test]
fn kernel_cache_roundtrip() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.toml",
        &format!("{SOLVE}q = 2.0\n[picard]\nr_max = [1.0]\nh = 0.25\nkernel_cache = \"cache\"\n"),
    );
    let args = ["solve", "--config", cfg.to_str().unwrap()];
    let first = run_in(dir.path(), &args);
    assert_eq!(first.code, 0, "{}", first.stderr);
    let files: Vec<_> = std::fs::read_dir(dir.path().join("cache")).unwrap().collect();
    assert_eq!(files.len(), 1);
    let second = run_in(dir.path(), &args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn outputs_embed_version_and_config() {
    let out = ok("green", "schema_version = 1\n[model]\nn = 3\nalpha = 0.5\n");
    assert!(out.starts_with("# schema_version=1\n# tool=fracgreen "));
    assert!(out.contains("# config={"));
    let r = run("kernel-check", "schema_version = 1\n[discrete]\npoints = 4\n", &["--format", "json"]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["discrete"]["points"], 4);
    assert_eq!(v["columns"][0], "quantity");
    // Missing witnesses become null and infinities strings.
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r.as_array().unwrap().len() == 2));
}

#[test]
fn seed_flag_overrides_config() {
    let cfg = "schema_version = 1\n[discrete]\npoints = 5\nseed = 1\n";
    let a = run("kernel-check", cfg, &["--seed", "7"]);
    let b = run("kernel-check", &cfg.replace("seed = 1", "seed = 7"), &[]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, run("kernel-check", cfg, &[]).stdout);
}

#[test]
fn byte_identical_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("solve", format!("{SOLVE}q = 1.2\n[picard]\nr_max = [0.5, 1.0]\nh = 0.125\n")),
        ("kernel-check", "schema_version = 1\n[discrete]\npoints = 6\n".to_string()),
        ("criteria", format!("{HENON}q = 2.0\n")),
    ];
    for (cmd, text) in cases {
        let cfg = write(&dir, &format!("{cmd}.toml"), &text);
        let mut outs = Vec::new();
        for threads in ["1", "8", "8"] {
            let out = dir.path().join(format!("{cmd}-{threads}-{}.csv", outs.len()));
            let r = run_in(
                dir.path(),
                &["--threads", threads, cmd, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()],
            );
            assert_eq!(r.code, 0, "{}", r.stderr);
            assert!(r.stdout.is_empty());
            outs.push(std::fs::read(out).unwrap());
        }
        assert!(outs.windows(2).all(|w| w[0] == w[1]), "{cmd} output depends on threads");
    }
}

use std::io::Write;
use std::process::{Command, Stdio};

fn run(args: &[&str], stdin: &str) -> (i32, String) {
    let mut argv = vec!["dilution"];
    argv.extend_from_slice(args);
    let mut out = Vec::new();
    let code = dilution_cli::run(argv, &mut stdin.as_bytes(), &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn sweep_writes_the_fixed_header_and_one_row_per_point() {
    let (code, out) = run(
        &[
            "sweep",
            "--d",
            "3,5",
            "--p",
            "0.02:0.06:0.02",
            "--trials",
            "50",
            "--seed",
            "9",
        ],
        "",
    );
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "d,p,noise,pattern,eps,trials,nonconv,logical_fail,total_error_rate,mean_iters,median_iters,max_iters,seed");
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("3,0.02,depolarizing,dv,0.15,50,"));
    assert!(lines[6].starts_with("5,0.06,"));
    let (_, again) = run(
        &[
            "sweep",
            "--d",
            "3,5",
            "--p",
            "0.02:0.06:0.02",
            "--trials",
            "50",
            "--seed",
            "9",
        ],
        "",
    );
    assert_eq!(out, again);
}

#[test]
fn sweep_flags_reach_the_rows() {
    let (code, out) = run(
        &[
            "sweep",
            "--d",
            "5",
            "--p",
            "0.05",
            "--noise",
            "x",
            "--pattern",
            "auto",
            "--eps",
            "5=0.3",
            "--trials",
            "20",
            "--mode",
            "sumproduct",
            "--phi",
            "sum",
            "--budget",
            "10",
        ],
        "",
    );
    assert_eq!(code, 0);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..6], &["5", "0.05", "single-x", "ch", "0.3", "20"]);
    assert!(row[11].parse::<usize>().unwrap() <= 10);
    let (_, out) = run(
        &[
            "sweep",
            "--d",
            "5",
            "--p",
            "0.05",
            "--trials",
            "20",
            "--no-dilution",
            "--eps",
            "0",
        ],
        "",
    );
    assert!(out
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("5,0.05,depolarizing,none,0,"));
}

#[test]
fn nonconvergence_variants_and_histogram() {
    let (code, out) = run(
        &[
            "sweep",
            "--d",
            "5",
            "--p",
            "0.03",
            "--noise",
            "x",
            "--trials",
            "30",
            "--nonconv",
        ],
        "",
    );
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);
    let (code, out) = run(
        &[
            "sweep",
            "--d",
            "9",
            "--p",
            "0.08",
            "--trials",
            "200",
            "--histogram",
        ],
        "",
    );
    assert_eq!(code, 0);
    assert!(out.starts_with("# d 9 p 0.08"));
    assert!(out.contains("stage_starts 20,60,120"));
    let total: usize = out
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap())
        .sum();
    let nonconv: usize = out
        .lines()
        .next()
        .unwrap()
        .split_whitespace()
        .nth(6)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(total + nonconv, 200);
    let (code, _) = run(&["sweep", "--d", "3,5", "--p", "0.05", "--histogram"], "");
    assert_eq!(code, 2);
}

#[test]
fn decode_reads_bits_and_reports_json() {
    // X on qubit 0 of d=3 lights Z-check 0 only
    let bits = "1 0 0 0 0 0\n0 0 0 0 0 0\n";
    let (code, out) = run(&["decode", "--d", "3", "--p", "0.05", "--noise", "x"], bits);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["converged"], true);
    assert_eq!(v["estimate"], "XIIIIIIIIIIII");
    let (code, _) = run(&["decode", "--d", "3", "--p", "0.05"], "1 0 1");
    assert_eq!(code, 2);
    let (code, _) = run(
        &["decode", "--d", "3", "--p", "0.05"],
        "1 0 2 0 0 0 0 0 0 0 0 0",
    );
    assert_eq!(code, 2);
}

#[test]
fn decode_reads_a_file() {
    let dir = std::env::temp_dir().join(format!("dilution-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("syn.txt");
    std::fs::write(&input, "0 0 0 0 0 0 0 0 0 0 0 0").unwrap();
    let out = dir.join("out.json");
    let (code, stdout) = run(
        &[
            "decode",
            "--d",
            "3",
            "--p",
            "0.1",
            "--input",
            input.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!((code, stdout.as_str()), (0, ""));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["weight"], 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn radius_cavity_strip_graph() {
    let (code, out) = run(
        &[
            "radius",
            "--d",
            "5",
            "--pattern",
            "ch",
            "--s",
            "2",
            "--ties",
            "favorable",
        ],
        "",
    );
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["computed_radius"], 2);

    let (code, out) = run(&["cavity", "--prior", "0.25,0.25,0.25,0.25"], "");
    assert_eq!(code, 0);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[5].parse::<f64>().unwrap(), 0.0);
    let (_, out) = run(&["cavity", "--p", "0.1"], "");
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert!((row[5].parse::<f64>().unwrap() - 0.0288888888889).abs() < 1e-12);
    assert_eq!(row[6], row[8]);

    let (code, out) = run(
        &["strip", "--k", "1", "--nb", "2,3", "--samples", "200"],
        "",
    );
    assert_eq!(code, 0);
    assert_eq!(
        out.lines().next().unwrap(),
        "k,n_B,nbar_C,n_samples,w_corr,w_wrong"
    );
    assert_eq!(out.lines().count(), 3);

    let (code, out) = run(
        &[
            "graph",
            "--d",
            "3",
            "--pattern",
            "dh",
            "--s",
            "1",
            "--format",
            "dot",
        ],
        "",
    );
    assert_eq!(code, 0);
    assert!(out.contains("graph"));
    let (code, _) = run(&["graph", "--d", "3", "--format", "png"], "");
    assert_eq!(code, 2);
    let (code, _) = run(&["graph", "--d", "3", "--s", "3"], "");
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["frobnicate"],
        vec!["sweep", "--p", "0.1"],
        vec!["sweep", "--d", "3", "--p", "0.1", "--noise", "biased"],
        vec!["sweep", "--d", "3", "--p", "0.1", "--pattern", "zz"],
        vec!["sweep", "--d", "3", "--p", "0.1", "--mode", "fast"],
        vec!["sweep", "--d", "3", "--p", "0.1", "--trials", "0"],
        vec!["sweep", "--d", "3", "--p", "0.1", "--bogus"],
        vec![
            "radius",
            "--d",
            "5",
            "--pattern",
            "ch",
            "--s",
            "1",
            "--ties",
            "maybe",
        ],
        vec!["cavity"],
    ] {
        assert_eq!(run(&args, "").0, 2, "{args:?}");
    }
    assert_eq!(run(&["--help"], "").0, 0);
    assert!(run(&["sweep", "--help"], "").1.contains("--budget"));
}

#[test]
fn binary_uses_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_dilution");
    let status = Command::new(exe)
        .arg("nope")
        .stderr(Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    let mut child = Command::new(exe)
        .args(["decode", "--d", "3", "--p", "0.05", "--noise", "x"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"0 0 0 0 0 0 0 0 0 0 0 0")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("\"converged\": true"));
}

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn loosetri(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loosetri"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn complete_file(dir: &TempDir, n: u32) -> String {
    let p = path(dir, &format!("k{n}.txt"));
    let out = loosetri(&[
        "gen",
        "--family",
        "complete",
        "--n",
        &n.to_string(),
        "--out",
        &p,
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    p
}

/// Value column of a single-row extract/exact CSV.
fn value_of(csv: &str) -> u64 {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|&h| h == "value").unwrap();
    row[i].parse().unwrap()
}

#[test]
fn star_on_k6() {
    let dir = TempDir::new().unwrap();
    let k6 = complete_file(&dir, 6);
    let out = loosetri(&["extract", "--host", &k6, "--algo", "star"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(value_of(&stdout(&out)), 10);
}

#[test]
fn census_rows() {
    let out = loosetri(&["census", "--n", "6", "--mmax", "3", "--no-timestamp"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let counts: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(counts, ["1", "20", "190", "1020"]);
}

#[test]
fn exact_on_k5() {
    let dir = TempDir::new().unwrap();
    let k5 = complete_file(&dir, 5);
    let out = loosetri(&["exact", "--host", &k5]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(value_of(&stdout(&out)), 10);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let k7 = complete_file(&dir, 7);
    // budget exhaustion
    let out = loosetri(&["exact", "--host", &k7, "--budget", "5"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    // triangle cap
    let out = loosetri(&[
        "extract",
        "--host",
        &k7,
        "--algo",
        "pure_deletion",
        "--triangle-cap",
        "3",
    ]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    // census work limit
    let out = loosetri(&["census", "--n", "7", "--mmax", "4", "--work-limit", "10"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));

    for bad in [
        vec![
            "extract",
            "--host",
            "/nonexistent/host.txt",
            "--algo",
            "star",
        ],
        vec!["frobnicate"],
        vec!["census", "--n", "6", "--bogus-flag"],
        vec!["experiment", "--kind", "gnp_sweep", "--n", "10"],
        vec![
            "experiment",
            "--kind",
            "gnp_sweep",
            "--n",
            "10",
            "--p",
            "0.1",
            "--x",
            "2",
        ],
        vec![
            "experiment",
            "--kind",
            "nonsense",
            "--n",
            "10",
            "--p",
            "0.1",
        ],
        vec!["template", "--t", "5", "--a", "1,2,3"],
        vec!["census", "--n", "12", "--mmax", "3"],
    ] {
        let out = loosetri(&bad);
        assert_eq!(code(&out), 1, "{bad:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty(), "{bad:?}: no message");
    }

    let malformed = path(&dir, "bad.txt");
    std::fs::write(&malformed, "5 3 2\n0 1 2\n0 1\n").unwrap();
    let out = loosetri(&["exact", "--host", &malformed]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));

    assert_eq!(code(&loosetri(&["--help"])), 0);
}

#[test]
fn actionable_grid_message() {
    let out = loosetri(&["experiment", "--kind", "lower_scaling", "--copies", "3"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("t = 5,7,9"), "{}", stderr(&out));
}

fn sweep_args<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![
        "experiment",
        "--kind",
        "gnp_sweep",
        "--n",
        "16,20",
        "--p",
        "0.05,0.2",
        "--seeds",
        "0..3",
        "--trials",
        "6",
        "--no-timestamp",
    ];
    v.extend_from_slice(extra);
    v
}

#[test]
fn thread_count_does_not_change_output() {
    let one = loosetri(&sweep_args(&["--threads", "1"]));
    let four = loosetri(&sweep_args(&["--threads", "4"]));
    assert_eq!(code(&one), 0, "{}", stderr(&one));
    assert_eq!(code(&four), 0);
    assert_eq!(one.stdout, four.stdout);
    let again = loosetri(&sweep_args(&["--threads", "4"]));
    assert_eq!(four.stdout, again.stdout);
}

#[test]
fn timestamp_header_is_the_only_difference() {
    let plain = stdout(&loosetri(&sweep_args(&[])));
    let mut args = sweep_args(&[]);
    args.retain(|a| *a != "--no-timestamp");
    let stamped = stdout(&loosetri(&args));
    let first = stamped.lines().next().unwrap();
    assert!(first.starts_with("# generated"), "{first}");
    let body: Vec<&str> = stamped.lines().skip(1).collect();
    let plain: Vec<&str> = plain.lines().collect();
    assert_eq!(body.len(), plain.len());
    // everything except runtime_ms agrees
    let runtime = plain[0].split(',').position(|c| c == "runtime_ms").unwrap();
    for (a, b) in body.iter().zip(&plain) {
        let strip = |l: &str| {
            let mut f: Vec<String> = l.split(',').map(str::to_string).collect();
            f.remove(runtime);
            f
        };
        assert_eq!(strip(a), strip(b));
    }
}

#[test]
fn csv_header_and_json_mirror() {
    let csv = stdout(&loosetri(&sweep_args(&[])));
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with(
        "kind,r,n,p,x,t_template,copies,seed,algo,edges_host,triangles_host,value,\
         certified,trials,trial_mean,trial_sd,runtime_ms"
    ));
    let out = loosetri(&sweep_args(&["--format", "json"]));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), csv.lines().count() - 1);
    let first_csv: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let cols: Vec<&str> = header.split(',').collect();
    let first = rows[0].as_object().unwrap();
    assert_eq!(first.len(), cols.len());
    // keys appear in csv column order in the raw text
    let raw = stdout(&out);
    let line = raw.lines().nth(1).unwrap();
    let at: Vec<usize> = cols
        .iter()
        .map(|c| line.find(&format!("\"{c}\":")).unwrap())
        .collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{line}");
    assert_eq!(first["value"].to_string(), first_csv[11]);
    assert_eq!(first["algo"], first_csv[8]);
    assert!(rows.iter().all(|r| r["certified"] == true));
}

#[test]
fn config_file_mirrors_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = path(&dir, "sweep.conf");
    std::fs::write(
        &cfg,
        "# small sweep\nkind = gnp_sweep\nn = 16,20\np = 0.05,0.2\nseeds = 0..3\n\
         trials = 6   # per extraction\nno-timestamp = true\nthreads = 2\n",
    )
    .unwrap();
    let from_file = loosetri(&["experiment", "--config", &cfg]);
    assert_eq!(code(&from_file), 0, "{}", stderr(&from_file));
    assert_eq!(from_file.stdout, loosetri(&sweep_args(&[])).stdout);

    // flags win over the file
    let overridden = loosetri(&["experiment", "--config", &cfg, "--trials", "2"]);
    let mut direct = sweep_args(&[]);
    let i = direct.iter().position(|a| *a == "6").unwrap();
    direct[i] = "2";
    assert_eq!(overridden.stdout, loosetri(&direct).stdout);
    assert_ne!(overridden.stdout, from_file.stdout);

    // out and format through the file
    let out_path = path(&dir, "sweep.json");
    let cfg2 = path(&dir, "json.conf");
    std::fs::write(
        &cfg2,
        format!(
            "kind = gnp_sweep\nn = 16\np = 0.1\nseeds = 0\ntrials = 2\nformat = json\nout = {out_path}\n"
        ),
    )
    .unwrap();
    let out = loosetri(&["experiment", "--config", &cfg2]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(serde_json::from_str::<serde_json::Value>(&text).is_ok());

    let bad = path(&dir, "bad.conf");
    std::fs::write(&bad, "kind = gnp_sweep\nsedes = 1\n").unwrap();
    let out = loosetri(&["experiment", "--config", &bad]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn gen_template_extract_pipeline() {
    let dir = TempDir::new().unwrap();
    let host = path(&dir, "host.txt");
    let tpl = path(&dir, "tpl.txt");
    let out = loosetri(&[
        "gen", "--family", "gnp", "--n", "14", "--p", "0.2", "--seed", "3", "--out", &host,
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = loosetri(&["template", "--t", "11", "--out", &tpl]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for algo in ["random_hom", "deletion"] {
        let args = [
            "extract",
            "--host",
            &host,
            "--algo",
            algo,
            "--template",
            &tpl,
            "--seed",
            "1",
        ];
        let a = loosetri(&args);
        assert_eq!(code(&a), 0, "{algo}: {}", stderr(&a));
        assert_eq!(a.stdout, loosetri(&args).stdout, "{algo} is seeded");
    }
    // same generator seed, same file
    let host2 = path(&dir, "host2.txt");
    loosetri(&[
        "gen", "--family", "gnp", "--n", "14", "--p", "0.2", "--seed", "3", "--out", &host2,
    ]);
    assert_eq!(
        std::fs::read(&host).unwrap(),
        std::fs::read(&host2).unwrap()
    );
}

#[test]
fn fit_subcommand_reads_experiment_csv() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "fit.csv");
    let fits = path(&dir, "slopes.csv");
    let out = loosetri(&[
        "experiment",
        "--kind",
        "exponent_fit",
        "--n",
        "12,16,24",
        "--x",
        "2",
        "--seeds",
        "0..3",
        "--trials",
        "4",
        "--out",
        &csv,
        "--fit-out",
        &fits,
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = loosetri(&["fit", "--input", &csv]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let table = stdout(&out);
    assert!(table.lines().any(|l| l.contains("best")), "{table}");
    assert_eq!(table, std::fs::read_to_string(Path::new(&fits)).unwrap());
}

#[test]
fn gnuplot_script_is_written() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "sweep.csv");
    let gp = path(&dir, "sweep.gp");
    let mut args = sweep_args(&["--out", &csv, "--gnuplot", &gp]);
    args.retain(|a| *a != "--no-timestamp");
    let out = loosetri(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let script = std::fs::read_to_string(&gp).unwrap();
    assert!(script.contains("sweep.csv"), "{script}");
}

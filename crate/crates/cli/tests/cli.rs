use std::process::{Command, Output};

fn dirtycast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirtycast"))
        .args(args)
        .env_remove("DIRTYCAST_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value(report: &str, key: &str) -> f64 {
    report
        .lines()
        .find_map(|l| {
            let mut parts = l.split_whitespace();
            (parts.next() == Some(key)).then(|| parts.next().unwrap().parse().unwrap())
        })
        .unwrap_or_else(|| panic!("no {key} in\n{report}"))
}

#[test]
fn verify_succeeds() {
    let out = dirtycast(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains(" 0 failed"));
}

#[test]
fn clean_channel_never_errs() {
    let out = dirtycast(&["simulate", "--q", "0", "--n", "24", "--rate", "0.25", "--trials", "100", "--seed", "7"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert_eq!(value(&s, "fer_any"), 0.0);
    assert_eq!(value(&s, "codewords"), 64.0);
}

#[test]
fn crossover_within_three_sigma() {
    let out = dirtycast(&["simulate", "--q", "0.25", "--n", "100000", "--mi-only", "--seed", "3"]);
    let s = stdout(&out);
    assert!(value(&s, "crossover_z").abs() <= 3.0, "{s}");
    assert!(value(&s, "mi_relative_error") <= 0.01, "{s}");
}

#[test]
fn thread_count_does_not_change_output() {
    let sim = ["simulate", "--q", "0.3", "--n", "18", "--trials", "500", "--seed", "9"];
    let one = dirtycast(&[&["--threads", "1"], &sim[..]].concat());
    let four = dirtycast(&[&["--threads", "4"], &sim[..]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);

    let one = dirtycast(&["--threads", "1", "figure", "fig5"]);
    let four = dirtycast(&["--threads", "4", "figure", "fig5"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn figure_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig2.csv");
    let svg = dir.path().join("fig2.svg");
    let out = dirtycast(&[
        "figure",
        "fig2",
        "--out",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,capacity,timeshare,ignore_si"));
    assert_eq!(lines.next(), Some("0,1,0.5,1"));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 101);
    assert_eq!(*rows.last().unwrap(), "0.5,0.5,0.5,0");
    // q = 0.11: capacity 1 - H(0.1958)/2 printed with nine significant digits.
    assert!(rows[22].starts_with("0.11,0.643"), "{}", rows[22]);
    assert_eq!(rows[22].split(',').nth(1).unwrap().trim_start_matches("0.").len(), 9);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let fig4 = stdout(&dirtycast(&["figure", "fig4"]));
    assert!(fig4.starts_with("q,upper_k3,lower_k3,timeshare,ignore_si\n"));
    let last = fig4.lines().last().unwrap();
    assert_eq!(last, "0.5,0.333333333,0.333333333,0.333333333,0");
}

#[test]
fn bad_usage_exits_2() {
    let out = dirtycast(&["bounds", "--gaussian", "--snr", "1", "--snr-db", "0", "--inr", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dirtycast(&["bounds", "--binary", "--q", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dirtycast(&["simulate", "--q", "0.1", "--n", "22", "--rate", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dirtycast(&["figure", "fig9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("fig.csv");
    let out = dirtycast(&["figure", "fig2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bounds_table() {
    let out = stdout(&dirtycast(&["bounds", "--gaussian", "--snr-db", "33", "--inr-db", "15"]));
    assert!(out.lines().nth(1).unwrap().starts_with("bound"));
    for name in ["upper_i", "upper_ii", "lower", "timeshare", "interference_as_noise", "gap"] {
        assert!(out.lines().any(|l| l.starts_with(name)), "{name} missing:\n{out}");
    }
    let out = stdout(&dirtycast(&["bounds", "--correlated", "--snr", "10", "--q1", "4", "--q2", "9", "--qd", "1"]));
    assert!(out.contains("upper"));
}

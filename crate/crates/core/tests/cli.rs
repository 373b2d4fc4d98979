use std::process::Command;

fn mzv(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mzv")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn eval_prints_exact_then_float() {
    let (code, out, _) = mzv(&["eval", "zeta-star", "--index", "2,1", "--m", "2"]);
    assert_eq!(code, 0);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines, ["11/8", "1.375"]);
}

#[test]
fn malformed_index_is_usage_error() {
    let (code, _, err) = mzv(&["eval", "zeta", "--index", "0,1", "--m", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("at least 1"));
    let (code, _, _) = mzv(&["eval", "zeta", "--index", "a,b", "--m", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn unknown_subcommand_and_help() {
    assert_eq!(mzv(&["frobnicate"]).0, 2);
    assert_eq!(mzv(&["--help"]).0, 0);
}

#[test]
fn cache_round_trip_gives_same_value() {
    let dir = std::env::temp_dir().join(format!("mzv-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("store.bin");
    let path = path.to_str().unwrap();
    let args = ["eval", "zeta", "--index", "3,1", "--m", "40", "--cache", path];
    let first = mzv(&args);
    assert_eq!(first.0, 0);
    assert!(std::fs::metadata(path).unwrap().len() > 0);
    let second = mzv(&args);
    assert_eq!(first.1, second.1);
    let plain = mzv(&args[..6]);
    assert_eq!(first.1, plain.1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn converge_writes_csv() {
    let (code, out, _) = mzv(&["converge", "--p", "0", "--q", "1", "--m", "10,20,40"]);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["m", "truncated_over_pi_power", "closed_form", "abs_error"]
    );
    let errors: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap()[3].parse().unwrap())
        .collect();
    assert_eq!(errors.len(), 3);
    assert!(errors.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn converge_rejects_decreasing_schedule() {
    assert_eq!(mzv(&["converge", "--p", "0", "--q", "1", "--m", "20,10"]).0, 2);
}

#[test]
fn verify_csv_format() {
    let (code, out, _) = mzv(&["verify", "t-identity", "--p", "0..1", "--q", "0..1", "--m", "0..3", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("p,q,m"));
    assert_eq!(lines.count(), 16);
}

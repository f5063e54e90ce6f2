//! End-to-end CLI tests: file round trips, exit codes, determinism, and the
//! hash cache.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn setcode(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setcode"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_bullet_params(dir: &Path) -> String {
    let path = dir.join("bullet.json");
    fs::write(
        &path,
        r#"{"family":"bullet","params":{"m":4,"l":8,"l1":3,"l2":1,"mu":3,"delta":1,"s":0,"t":1,"kind":"Deletion"}}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn encode_decode_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let params = write_bullet_params(dir.path());
    let msg = dir.path().join("msg.txt");
    fs::write(&msg, "rank 42\nbits \nbits \nbits \n").unwrap();
    let set = dir.path().join("set.txt");

    let out = setcode(
        &["encode", "--params", &params, "--message", msg.to_str().unwrap(), "--out", set.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("redundancy_bits"));
    let first = fs::read(&set).unwrap();

    // re-running is byte-identical
    let out2 = setcode(
        &["encode", "--params", &params, "--message", msg.to_str().unwrap(), "--out", set.to_str().unwrap()],
        dir.path(),
    );
    assert!(out2.status.success());
    assert_eq!(fs::read(&set).unwrap(), first);
    assert_eq!(out.stdout, out2.stdout);

    let back = dir.path().join("back.txt");
    let out3 = setcode(
        &["decode", "--params", &params, "--set", set.to_str().unwrap(), "--out", back.to_str().unwrap()],
        dir.path(),
    );
    assert!(out3.status.success());
    assert_eq!(fs::read_to_string(&back).unwrap(), fs::read_to_string(&msg).unwrap());
}

#[test]
fn out_of_range_message_exits_2_with_range() {
    let dir = tempfile::tempdir().unwrap();
    let params = write_bullet_params(dir.path());
    let msg = dir.path().join("msg.txt");
    fs::write(&msg, "rank 70\nbits \nbits \nbits \n").unwrap(); // C(8,4) = 70 => max rank 69
    let out = setcode(
        &["encode", "--params", &params, "--message", msg.to_str().unwrap(), "--out", "x.txt"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("below 70"));
}

#[test]
fn simulate_within_capability_is_perfect_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let params = write_bullet_params(dir.path());
    let args = [
        "simulate", "--params", &params, "--spec", "0:1:*:D", "--seed", "5", "--trials", "300",
    ];
    let a = setcode(&args, dir.path());
    let b = setcode(&args, dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "fixed seed must give identical report bytes");
    let text = String::from_utf8_lossy(&a.stdout).to_string();
    assert!(text.contains("successes=300"), "{text}");
    assert!(text.contains("rate=100.00%"));
}

#[test]
fn simulate_beyond_capability_needs_stress() {
    let dir = tempfile::tempdir().unwrap();
    let params = write_bullet_params(dir.path());
    let refused = setcode(
        &["simulate", "--params", &params, "--spec", "1:1:*:D", "--trials", "50"],
        dir.path(),
    );
    assert_eq!(refused.status.code(), Some(2));
    let stressed = setcode(
        &["simulate", "--params", &params, "--spec", "1:1:*:D", "--trials", "50", "--stress"],
        dir.path(),
    );
    assert!(stressed.status.success());
    // beyond-capability failures are data, not errors
    assert!(String::from_utf8_lossy(&stressed.stdout).contains("trials=50"));
}

#[test]
fn verify_pass_fail_and_inconclusive_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let params = write_bullet_params(dir.path());
    let pass = setcode(
        &["verify", "--params", &params, "--codewords", "6"],
        dir.path(),
    );
    assert_eq!(pass.status.code(), Some(0), "{}", String::from_utf8_lossy(&pass.stderr));
    assert!(String::from_utf8_lossy(&pass.stdout).starts_with("PASS"));

    // a channel beyond the design radius must produce a witness; losing all
    // M sequences puts the empty set in every ball
    let fail = setcode(
        &["verify", "--params", &params, "--spec", "4:0:0:S", "--codewords", "6"],
        dir.path(),
    );
    assert_eq!(fail.status.code(), Some(1));
    let text = String::from_utf8_lossy(&fail.stdout).to_string();
    assert!(text.starts_with("FAIL"));
    assert!(text.contains("\n2 0 0"), "witness set file expected, got {text}");

    // an oversized request is inconclusive, never a fake PASS
    let inconclusive = setcode(
        &["verify", "--params", &params, "--codewords", "6", "--budget", "10"],
        dir.path(),
    );
    assert_eq!(inconclusive.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&inconclusive.stdout).contains("inconclusive"));
}

#[test]
fn budget_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let params = write_bullet_params(dir.path());
    let out = Command::new(env!("CARGO_BIN_EXE_setcode"))
        .args(["verify", "--params", &params, "--codewords", "4"])
        .env("SETCODE_BUDGET", "10")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "env budget must apply");
}

#[test]
fn bounds_and_census_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let bounds = setcode(&["bounds", "--m", "8", "--l", "16", "--s", "1", "--t", "1", "--eps", "1"], dir.path());
    assert!(bounds.status.success());
    let text = String::from_utf8_lossy(&bounds.stdout).to_string();
    assert!(text.contains("set-packing bound"));
    assert!(text.contains('-'), "empty cells print a dash");
    let csv = setcode(
        &["bounds", "--m", "8", "--l", "16", "--s", "1", "--t", "1", "--eps", "1", "--csv"],
        dir.path(),
    );
    assert!(String::from_utf8_lossy(&csv.stdout).starts_with("table,channel"));

    let census = setcode(&["census", "--m", "2", "--l", "5", "--eps", "1"], dir.path());
    assert!(census.status.success());
    assert!(String::from_utf8_lossy(&census.stdout).contains("pigeonhole_bound=31"));
}

#[test]
fn hash_cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let census = setcode(
        &["census", "--m", "2", "--l", "8", "--eps", "2", "--hash-cache", cache.to_str().unwrap()],
        dir.path(),
    );
    assert!(census.status.success(), "{}", String::from_utf8_lossy(&census.stderr));
    let file = cache.join("hash_eps2_n8.bin");
    assert!(file.exists());
    let len = fs::metadata(&file).unwrap().len();
    assert_eq!(len, 12 + 256 * 4); // header + 2^n values
    // second run loads the cache and agrees byte for byte
    let again = setcode(
        &["census", "--m", "2", "--l", "8", "--eps", "2", "--hash-cache", cache.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(census.stdout, again.stdout);
}

#[test]
fn concat_and_lm_families_work_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("concat.json");
    fs::write(
        &params,
        r#"{"family":"concat","outer":{"s":1,"m":16,"l_prime":8,"l_o":13},"eps":1,"inner":"substitution"}"#,
    )
    .unwrap();
    let out = setcode(
        &[
            "simulate", "--params", params.to_str().unwrap(), "--spec", "1:15:1:S", "--trials", "40",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("rate=100.00%"));

    let lm = dir.path().join("lm.json");
    fs::write(
        &lm,
        r#"{"family":"lm","params":{"q":8,"k_plus":1,"k_minus":0,"s":1,"t":1,"m":5,"l":16,"l1":2}}"#,
    )
    .unwrap();
    let out = setcode(
        &["simulate", "--params", lm.to_str().unwrap(), "--spec", "1:1:*:LM:1:0", "--trials", "40"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("rate=100.00%"));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use purb::padme::{self, PadSpec};

fn purb(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_purb"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn purb")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn keygen(dir: &Path, suite: &str, prefix: &str) -> String {
    let o = purb(
        dir,
        &["keygen", "--suite", suite, "--out", prefix, "--seed", "01"],
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), suite);
    fs::read_to_string(dir.join(format!("{prefix}.pk")))
        .unwrap()
        .trim()
        .to_string()
}

fn write_recipients(dir: &Path, entries: &[(&str, &str, &str)]) {
    let list: Vec<_> = entries
        .iter()
        .map(|(suite, field, value)| format!("{{\"suite\":\"{suite}\",\"{field}\":\"{value}\"}}"))
        .collect();
    fs::write(dir.join("to.json"), format!("[{}]", list.join(","))).unwrap();
}

fn encoded_len(o: &Output) -> (usize, usize) {
    let s = stdout(o);
    let nums: Vec<usize> = s
        .split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().unwrap())
        .collect();
    (nums[0], nums[1])
}

#[test]
fn keygen_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let pk_b = keygen(dir.path(), "B", "b");
    let pk_a = keygen(dir.path(), "A", "a");
    assert_eq!(fs::read(dir.path().join("b.sk")).unwrap().len(), 32);
    assert_eq!(hex::decode(pk_b).unwrap().len(), 32);
    assert_eq!(hex::decode(pk_a).unwrap().len(), 64);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(purb(dir.path(), &["keygen"]).status.code(), Some(2));
    assert_eq!(
        purb(dir.path(), &["keygen", "--suite", "Q"]).status.code(),
        Some(2)
    );
    assert_eq!(
        purb(dir.path(), &["keygen", "--suite", "pw"]).status.code(),
        Some(2)
    );
    assert_eq!(
        purb(
            dir.path(),
            &["keygen", "--suite", "B", "--out", "missing/dir/k"]
        )
        .status
        .code(),
        Some(2)
    );
    fs::write(dir.path().join("to.json"), "[]").unwrap();
    fs::write(dir.path().join("msg"), "x").unwrap();
    let o = purb(
        dir.path(),
        &[
            "encode", "--to", "to.json", "--in", "msg", "--out", "m.purb",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    let o = purb(dir.path(), &["pad", "--len", "9", "--spec", "block:0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn round_trip_with_dummies() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let pk = keygen(d, "B", "alice");
    write_recipients(d, &[("B", "pubkey", &pk)]);
    let payload: Vec<u8> = (0..1024u32).map(|i| (i * 7) as u8).collect();
    fs::write(d.join("msg"), &payload).unwrap();

    let o = purb(
        d,
        &[
            "encode", "--to", "to.json", "--in", "msg", "--out", "m.purb", "--dummy", "3",
            "--seed", "aa",
        ],
    );
    assert!(o.status.success());
    let (total, header) = encoded_len(&o);
    let blob = fs::read(d.join("m.purb")).unwrap();
    assert_eq!(blob.len(), total);
    assert!(padme::is_fixed_point(PadSpec::Padme, total as u64));
    // one key plus four entry points of 64 bytes
    assert!(header >= 32 + 4 * 64);

    let o = purb(
        d,
        &[
            "decode", "--key", "alice.sk", "--suite", "B", "--in", "m.purb", "--out", "out",
            "--stats",
        ],
    );
    assert!(o.status.success());
    assert_eq!(fs::read(d.join("out")).unwrap(), payload);
    assert!(stdout(&o).contains("exp_count=1"));
}

#[test]
fn seeded_encoding_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let pk = keygen(d, "D", "k");
    write_recipients(d, &[("D", "pubkey", &pk), ("pw", "passphrase", "s3cret")]);
    fs::write(d.join("msg"), b"hello").unwrap();
    for out in ["one", "two"] {
        let o = purb(
            d,
            &[
                "encode", "--to", "to.json", "--in", "msg", "--out", out, "--seed", "0102",
            ],
        );
        assert!(o.status.success());
    }
    assert_eq!(
        fs::read(d.join("one")).unwrap(),
        fs::read(d.join("two")).unwrap()
    );
    let o = purb(
        d,
        &["encode", "--to", "to.json", "--in", "msg", "--out", "three"],
    );
    assert!(o.status.success());
    assert_ne!(
        fs::read(d.join("one")).unwrap(),
        fs::read(d.join("three")).unwrap()
    );

    let o = purb(d, &["decode", "--passphrase", "s3cret", "--in", "one"]);
    assert!(o.status.success());
    assert_eq!(o.stdout, b"hello");
}

#[test]
fn pad_none_is_unpadded() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let pk = keygen(d, "B", "k");
    write_recipients(d, &[("B", "pubkey", &pk)]);
    fs::write(d.join("msg"), vec![1u8; 5000]).unwrap();
    let o = purb(
        d,
        &[
            "encode", "--to", "to.json", "--in", "msg", "--out", "m", "--pad", "none",
        ],
    );
    assert!(o.status.success());
    let (total, header) = encoded_len(&o);
    assert_eq!(total, header + 5000 + 32);
}

#[test]
fn failures_are_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let pk = keygen(d, "B", "alice");
    let o = purb(d, &["keygen", "--suite", "B", "--out", "mallory"]);
    assert!(o.status.success());
    write_recipients(d, &[("B", "pubkey", &pk)]);
    fs::write(d.join("msg"), b"payload").unwrap();
    assert!(purb(
        d,
        &["encode", "--to", "to.json", "--in", "msg", "--out", "m"]
    )
    .status
    .success());
    let mut flipped = fs::read(d.join("m")).unwrap();
    flipped[40] ^= 0x10;
    fs::write(d.join("flipped"), flipped).unwrap();
    fs::write(d.join("garbage.sk"), b"not a key").unwrap();

    let cases: &[&[&str]] = &[
        &["decode", "--key", "mallory.sk", "--suite", "B", "--in", "m"],
        &["decode", "--key", "alice.sk", "--suite", "D", "--in", "m"],
        &[
            "decode", "--key", "alice.sk", "--suite", "B", "--in", "flipped",
        ],
        &[
            "decode",
            "--key",
            "alice.sk",
            "--suite",
            "B",
            "--in",
            "nonexistent",
        ],
        &["decode", "--key", "garbage.sk", "--suite", "B", "--in", "m"],
        &["decode", "--passphrase", "guess", "--in", "m"],
    ];
    for args in cases {
        let o = purb(d, args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty());
        assert_eq!(String::from_utf8_lossy(&o.stderr), "decode failed\n");
    }
    let o = purb(
        d,
        &[
            "decode",
            "--key",
            "alice.sk",
            "--try-all",
            "--hardened",
            "--in",
            "m",
        ],
    );
    assert!(o.status.success());
    assert_eq!(o.stdout, b"payload");
}

#[test]
fn pad_table_values() {
    let dir = tempfile::tempdir().unwrap();
    for (len, want) in [
        ("9", "10 +1 +11.11%"),
        ("8", "8 +0 +0.00%"),
        ("1", "1 +0 +0.00%"),
    ] {
        let o = purb(dir.path(), &["pad", "--len", len]);
        assert_eq!(stdout(&o).trim(), want);
    }
    let o = purb(dir.path(), &["pad", "--len", "9", "--spec", "next2"]);
    assert_eq!(stdout(&o).trim(), "16 +7 +77.78%");
}

#[test]
fn analyze_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("sizes.csv"), "name,bytes\na,9\nb,10\nc,100\n").unwrap();
    let o = purb(
        d,
        &[
            "analyze",
            "--sizes",
            "sizes.csv",
            "--column",
            "bytes",
            "--specs",
            "none,padme",
            "--csv",
            "r.csv",
        ],
    );
    assert!(o.status.success());
    let csv = fs::read_to_string(d.join("r.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("pad,unique_pct,mean_overhead_pct,median_set,max_set")
    );
    assert!(lines.next().unwrap().starts_with("none,100"));
    // 9 and 10 both pad to 10
    assert!(lines.next().unwrap().starts_with("padme,33.3"));
    let o = purb(d, &["analyze", "--sizes", "sizes.csv", "--column", "size"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_contrasts_layouts() {
    let dir = tempfile::tempdir().unwrap();
    let o = purb(
        dir.path(),
        &[
            "bench",
            "--recipients",
            "1,200",
            "--decode-sample",
            "10",
            "--seed",
            "07",
        ],
    );
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][5], "100.0%");
    let flat = &rows[2];
    let hash = &rows[3];
    assert_eq!((flat[0], flat[1], flat[8]), ("flat", "200", "200"));
    let max_hash: u64 = hash[8].parse().unwrap();
    assert!(max_hash <= 8 + 4, "{out}");
}

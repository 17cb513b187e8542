use std::fs;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mesocipher"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn keystream_prints_reference_symbols() {
    let o = cli(&[
        "keystream",
        "--k",
        "8",
        "--seed-hex",
        "a5",
        "--M",
        "16",
        "--n",
        "16",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "56854fce5354a6cc");
    let bits = cli(&[
        "keystream",
        "--seed-bits",
        "10100101",
        "--M",
        "16",
        "--n",
        "16",
    ]);
    assert_eq!(stdout(&bits), stdout(&o));
}

#[test]
fn encode_then_decode_recovers_the_message() {
    let dir = tempfile::tempdir().unwrap();
    let signal = dir.path().join("signal.csv");
    let signal = signal.to_str().unwrap();
    let args = [
        "--k",
        "12",
        "--seed-hex",
        "abc",
        "--M",
        "64",
        "--alpha0",
        "9",
    ];
    let enc = cli(&[
        &["encode"][..],
        &args,
        &["--input-hex", "cafe00ff", "--output", signal],
    ]
    .concat());
    assert!(enc.status.success());
    let text = fs::read_to_string(signal).unwrap();
    assert!(text.starts_with("index,phase_index,amplitude\n"));
    assert_eq!(text.lines().count(), 33);
    let dec = cli(&[&["decode"][..], &args, &["--input", signal]].concat());
    assert_eq!(stdout(&dec).trim(), "cafe00ff");
}

#[test]
fn otp_wrap_prints_consistent_pad() {
    let o = cli(&[
        "otp-wrap",
        "--k",
        "8",
        "--seed-hex",
        "1f",
        "--input-hex",
        "00ff",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let field = |name: &str| {
        let line = out.lines().find(|l| l.starts_with(name)).unwrap();
        u16::from_str_radix(line.split_whitespace().nth(1).unwrap(), 16).unwrap()
    };
    assert_eq!(field("pad") ^ field("ciphertext"), 0x00ff);
}

#[test]
fn attack_writes_csv_reproducibly() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let cfg = dir.path().join("exp.conf");
    fs::write(
        &cfg,
        "# small run\nk = 6\nt = 64\nalpha0 = 24.2\nn = 256\nruns = 5\n",
    )
    .unwrap();
    for path in [&a, &b] {
        let o = cli(&[
            "attack",
            "exhaustive",
            "--config",
            cfg.to_str().unwrap(),
            "--master_seed",
            "9",
            "--output_path",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("success 5/5"));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text
        .lines()
        .last()
        .unwrap()
        .starts_with("aggregate,6,32,24.2,"));

    let appended = cli(&[
        "attack",
        "exhaustive",
        "--config",
        cfg.to_str().unwrap(),
        "--output_path",
        a.to_str().unwrap(),
        "--append",
    ]);
    assert!(appended.status.success());
    assert_eq!(fs::read_to_string(&a).unwrap().lines().count(), 13);
}

#[test]
fn sweep_with_no_values_prints_header() {
    let o = cli(&["sweep", "--axis", "t"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(stdout(&o).starts_with("run_id,k,M,alpha0,eta,t,r,v,tau,b,scorer,success,"));
}

#[test]
fn grover_and_tables() {
    let o = cli(&["attack", "grover", "--k", "4", "--eta", "0.5"]);
    assert!(stdout(&o).contains("4,0.5,16,3,0.9613189697265625,true"));
    let flip = cli(&["table", "flip", "--M", "4", "--amplitude", "2"]);
    assert_eq!(stdout(&flip).lines().count(), 5);
    let overlap = cli(&["table", "overlap", "--alpha0", "1", "--M", "4"]);
    assert!(stdout(&overlap).contains("1,2,3.141592653589793,-2,"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        cli(&["attack", "exhaustive", "--runs", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        cli(&["sweep", "--axis", "colour", "--values", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        cli(&["attack", "prune", "--eta", "0.9"]).status.code(),
        Some(1)
    );
    assert_eq!(cli(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        cli(&[
            "decode",
            "--seed-hex",
            "1",
            "--input",
            "/nonexistent/signal.csv"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
}

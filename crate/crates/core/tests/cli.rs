use std::process::{Command, Output};

fn qfi(args: &[&str], env_eps: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qfi"));
    cmd.args(args).env_remove("QFI_EPSILON");
    if let Some(e) = env_eps {
        cmd.env("QFI_EPSILON", e);
    }
    cmd.output().expect("failed to launch qfi")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn help_and_success_exit_zero() {
    assert_eq!(qfi(&["--help"], None).status.code(), Some(0));
    let o = qfi(&["qfi", "--state", "w", "--n", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mean_f       2.333333333333"));
}

#[test]
fn invalid_arguments_exit_one() {
    for args in [
        &["sweep", "--channel", "bogus"][..],
        &["sweep", "--steps", "1"],
        &["sweep", "--p-start", "0.8", "--p-end", "0.2"],
        &["qfi", "--state", "dicke:x"],
        &["no-such-command"],
    ] {
        assert_eq!(qfi(args, None).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(
        qfi(&["sweep", "--steps", "3"], Some("nope")).status.code(),
        Some(1)
    );
}

#[test]
fn io_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.cfg");
    let o = qfi(&["sweep", "--config", missing.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    let unwritable = dir.path().join("no/such/dir/out.csv");
    let o = qfi(
        &[
            "sweep",
            "--steps",
            "3",
            "--csv",
            unwritable.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn channel_violation_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("leaky.txt");
    std::fs::write(&path, "1,0 0,0\n0,0 0.5,0\n").unwrap();
    let spec = format!("custom:{}", path.display());
    assert_eq!(
        qfi(&["validate-channel", "--channel", &spec], None)
            .status
            .code(),
        Some(4)
    );
    let o = qfi(&["sweep", "--channel", &spec, "--steps", "3"], None);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(
        qfi(
            &["validate-channel", "--channel", "adc", "--p", "0.3"],
            None
        )
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn epsilon_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(&cfg, "epsilon = 0.6\n").unwrap();
    let base = [
        "sweep",
        "--mode",
        "full",
        "--steps",
        "3",
        "--p-start",
        "0.3",
        "--p-end",
        "0.4",
    ];
    let run = |extra: &[&str], env: Option<&str>| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        let o = qfi(&args, env);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };
    let default = run(&[], None);
    let from_env = run(&[], Some("0.6"));
    let cfg_arg = ["--config", cfg.to_str().unwrap()];
    let from_file = run(&cfg_arg, Some("1e-10"));
    let flag_wins = run(
        &[&cfg_arg[..], &["--epsilon", "1e-10"]].concat(),
        Some("0.6"),
    );
    assert_ne!(default, from_env);
    assert_eq!(from_env, from_file);
    assert_eq!(flag_wins, default);
}

#[test]
fn multi_channel_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let o = qfi(
        &[
            "sweep",
            "--channel",
            "all",
            "--steps",
            "5",
            "--csv",
            csv.to_str().unwrap(),
        ],
        None,
    );
    assert!(o.status.success());
    for ch in ["dpc", "adc", "pdc"] {
        let text = std::fs::read_to_string(dir.path().join(format!("out_{ch}.csv"))).unwrap();
        assert_eq!(text.lines().count(), 6, "{ch}");
    }
}

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use semihier_cli::{commands, from_machine, to_machine, Settings, SystemSpec};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn system(name: &str) -> PathBuf {
    root().join("systems").join(name)
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_semihier"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args, None);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn machine_output_matches_golden_files() {
    let cases = [
        ("hierarchy", "single_function.toml", "hierarchy_single_function.json"),
        ("kernel", "six_point.toml", "kernel_six_point.json"),
        ("limits", "six_point.toml", "limits_six_point.json"),
        ("fields", "six_point.toml", "fields_six_point.json"),
        ("rightgroup", "right_group.toml", "rightgroup_right_group.json"),
        ("construct", "precursor_loop.toml", "construct_precursor_loop.json"),
    ];
    for (cmd, input, golden) in cases {
        let path = system(input);
        let got = stdout_of(&[cmd, path.to_str().unwrap(), "--machine"]);
        let want =
            std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(golden)).unwrap();
        assert_eq!(got, want, "{cmd} on {input}");
    }
}

#[test]
fn output_is_byte_deterministic() {
    let path = system("six_point.toml");
    for cmd in ["kernel", "limits", "fields", "rank"] {
        for machine in [true, false] {
            let mut args = vec![cmd, path.to_str().unwrap()];
            if machine {
                args.push("--machine");
            }
            assert_eq!(stdout_of(&args), stdout_of(&args), "{cmd}");
        }
    }
}

#[test]
fn standard_input_and_file_agree() {
    let path = system("right_group.toml");
    let text = std::fs::read_to_string(&path).unwrap();
    let from_stdin = run(&["rank", "--machine"], Some(&text));
    assert!(from_stdin.status.success());
    assert_eq!(
        String::from_utf8(from_stdin.stdout).unwrap(),
        stdout_of(&["rank", path.to_str().unwrap(), "--machine"])
    );
}

#[test]
fn human_reports_show_key_results() {
    let kernel = stdout_of(&["kernel", system("six_point.toml").to_str().unwrap()]);
    assert!(kernel.contains("{1,2} {3,5} {4,6} [113434] [115454] [223636] [225656]"));
    let limits = stdout_of(&["limits", system("six_point.toml").to_str().unwrap()]);
    assert!(limits.contains("beta (ranges): 4/9 2/9 1/9 2/9"));
    let rg = stdout_of(&["rightgroup", system("right_group.toml").to_str().unwrap()]);
    assert!(rg.contains("right group: true"));
    assert!(rg.contains("partition: {1} {2,3} {4} {5,6}"));
    let built = stdout_of(&["construct", "--case", "a", system("precursor_loop.toml").to_str().unwrap()]);
    assert!(built.contains("case a construction: [2173456] [4456723]"));
    let plain = stdout_of(&["hierarchy", "--level", "1", system("single_function.toml").to_str().unwrap()]);
    assert!(plain.contains("1 0 1 0 0\n"));
}

#[test]
fn oracle_flag_reports_agreement() {
    let out = stdout_of(&["hierarchy", "--oracle", "--level", "3", system("six_point.toml").to_str().unwrap()]);
    assert!(out.contains("permanent oracle agrees: true"));
}

#[test]
fn exit_codes_distinguish_input_and_domain_errors() {
    let bad_toml = run(&["kernel"], Some("n = \n"));
    assert_eq!(bad_toml.status.code(), Some(2));
    let bad_function = run(&["kernel"], Some("n = 3\ncolors = [[1, 2, 5]]\n"));
    assert_eq!(bad_function.status.code(), Some(2));
    let missing = run(&["kernel", "/nonexistent/system.toml"], None);
    assert_eq!(missing.status.code(), Some(2));
    let bad_flag = run(&["kernel", "--bogus"], Some(""));
    assert_eq!(bad_flag.status.code(), Some(2));

    let capped = run(&["kernel", "--cap", "5"], Some("n = 4\ncolors = [[2,3,4,1],[2,1,3,4]]\n"));
    assert_eq!(capped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("cap of 5"));
    let not_split = run(&["construct", "--case", "b", system("precursor_loop.toml").to_str().unwrap()], None);
    assert_eq!(not_split.status.code(), Some(3));
    let too_high = run(&["fields", "--level", "5", system("six_point.toml").to_str().unwrap()], None);
    assert_eq!(too_high.status.code(), Some(3));
}

#[test]
fn reports_round_trip_through_machine_form() {
    let six = SystemSpec::parse(&std::fs::read_to_string(system("six_point.toml")).unwrap()).unwrap();
    let rg = SystemSpec::parse(&std::fs::read_to_string(system("right_group.toml")).unwrap()).unwrap();
    let single = SystemSpec::parse(&std::fs::read_to_string(system("single_function.toml")).unwrap()).unwrap();
    let precursor = SystemSpec::parse(&std::fs::read_to_string(system("precursor_no_loop.toml")).unwrap()).unwrap();
    let augmented = Settings { augmented: true, inclusion: true, oracle: true, ..Settings::default() };
    let reports = vec![
        commands::hierarchy(&single, &augmented).unwrap(),
        commands::kernel(&six, &Settings::default()).unwrap(),
        commands::limits(&six, &Settings::default()).unwrap(),
        commands::fields(&six, &Settings::default()).unwrap(),
        commands::rank(&rg, &Settings::default()).unwrap(),
        commands::right_group(&rg, &Settings::default()).unwrap(),
        commands::construct(&precursor, None).unwrap(),
    ];
    for r in reports {
        let text = to_machine(&r);
        assert_eq!(from_machine(&text).unwrap(), r);
        assert!(!text.contains('.'), "no floating point in machine output");
    }
}

#[test]
fn augmented_matrix_has_collapsed_label() {
    let single = SystemSpec::parse(&std::fs::read_to_string(system("single_function.toml")).unwrap()).unwrap();
    let report = commands::hierarchy(&single, &Settings { augmented: true, ..Settings::default() }).unwrap();
    let text = to_machine(&report);
    assert!(text.contains("\"X\""));
    let semihier_cli::report::Payload::Hierarchy(h) = report.payload else { panic!("wrong payload") };
    assert_eq!(h.labels.len(), 7);
    assert_eq!(h.matrices[0].rows[5][6].0, semihier::rational::one());
}

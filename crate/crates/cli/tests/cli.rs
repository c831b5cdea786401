use std::io::Write;
use std::process::{Command, Output, Stdio};

fn pcsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcsp")).args(args).output().unwrap()
}

fn pcsp_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pcsp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["template", "classify", "D1plus"], 0),
        (&["template", "classify", "LO_3"], 0),
        (&["template", "show", "NOSUCH"], 2),
        (&["hom", "compare", "1in3", "NAE"], 0),
        (&["poly", "search-sym", "1in3", "T2", "7"], 0),
        (&["poly", "search-sym", "1in3", "T2", "6"], 1),
        (&["poly", "search-block", "1in3", "NAE", "4", "3"], 0),
        (&["poly", "enumerate", "1in3", "NAE", "2", "--count"], 0),
        (&["poly", "enumerate", "1in3", "NAE", "9"], 2),
        (&["verify", "lemmas", "T1", "--max-arity", "3"], 0),
        (&["verify", "lemmas", "T1", "--max-arity", "99"], 2),
        (&["verify", "selector", "SEL_D1", "--max-arity", "2"], 0),
        (&["verify", "selector", "T2", "--selector", "SEL_D1", "--max-arity", "2"], 1),
        (&["gen", "2", "1", "0"], 2),
    ];
    for (args, expected) in cases {
        let o = pcsp(args);
        assert_eq!(code(&o), *expected, "pcsp {}: {}", args.join(" "), String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn text_outputs() {
    assert_eq!(stdout(&pcsp(&["template", "classify", "D1plus"])).trim(), "NP-hard");
    assert_eq!(stdout(&pcsp(&["template", "classify", "LO_3"])).trim(), "open");
    assert_eq!(stdout(&pcsp(&["template", "classify", "NAE_3"])).trim(), "P");
    assert_eq!(stdout(&pcsp(&["hom", "compare", "1in3", "NAE"])).trim(), "strictly_below");
    let count = stdout(&pcsp(&["poly", "enumerate", "1in3", "NAE", "2", "--count"]));
    assert_eq!(count.trim(), "count: 6");
}

#[test]
fn json_is_well_formed() {
    let o = pcsp(&["--json", "verify", "lemmas", "D2plus", "--max-arity", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_array() || v.is_object());
}

#[test]
fn gen_pipes_into_solve() {
    let instance = stdout(&pcsp(&["gen", "30", "60", "7"]));
    assert!(instance.starts_with("p hyp3 30 60"));
    for target in ["T2", "NAE"] {
        let o = pcsp_stdin(&["solve", target], &instance);
        assert_eq!(code(&o), 0, "{target}");
        let text = stdout(&o);
        assert!(text.lines().next().unwrap().starts_with("c route"));
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 30);
    }
    let o = pcsp_stdin(&["solve", "T2"], "p hyp3 3 1\ne 1 1 1\n");
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (1, "none found".to_string()));
    assert_eq!(code(&pcsp_stdin(&["solve", "LO_3"], &instance)), 2);
    assert_eq!(code(&pcsp_stdin(&["solve", "T2"], "p hyp3 3 2\ne 1 2 3\n")), 2);
}

#[test]
fn table_files_verify() {
    let dir = tempfile::tempdir().unwrap();
    let table = stdout(&pcsp(&["poly", "search-sym", "1in3", "T2", "4"]));
    let path = dir.path().join("t2.sym");
    std::fs::write(&path, &table).unwrap();
    let ok = pcsp(&["poly", "verify", "--table", path.to_str().unwrap(), "--target", "T2"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    let bad = pcsp(&["poly", "verify", "--table", path.to_str().unwrap(), "--target", "T1"]);
    assert_eq!(code(&bad), 1);

    let tpl = dir.path().join("b.txt");
    std::fs::write(&tpl, "domain 3\nrel 3\nt 2 2 2\n").unwrap();
    assert_eq!(stdout(&pcsp(&["template", "classify", tpl.to_str().unwrap()])).trim(), "P");
    let dot = dir.path().join("l.dot");
    let o = pcsp(&["hom", "lattice", "--named3", "--out", dot.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
}

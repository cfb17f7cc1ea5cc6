use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use simpcube::corpus::{simp_object, SIMP_OBJECTS};
use simpcube::order::FinPoset;
use simpcube::presheaf::{simp_representable, simplex_site};
use simpcube::subobject::subobject_enumerate;
use simpcube::Error;
use simpcube_cli::text::{parse_poset, parse_presheaf, serialize_poset, serialize_presheaf};

fn simpcube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simpcube")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    assert_eq!(simpcube(&["check", "adjunction"]).status.code(), Some(0));
    assert_eq!(simpcube(&["check", "covering", "--lattice", "I2", "--sieve", "empty"]).status.code(), Some(1));
    assert_eq!(simpcube(&["--budget", "5", "experiment", "eps-we", "--object", "y[1]"]).status.code(), Some(2));
    let bad_dim = simpcube(&["--dim", "2", "functor", "i_*", "--object", "delta1"]);
    assert_eq!(bad_dim.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad_dim.stderr).contains("insufficient"));
}

#[test]
fn reports_are_byte_stable() {
    for args in [&["check", "sheaf"][..], &["hoeq"], &["check", "fibration", "--generators", "boxes"]] {
        let a = simpcube(args);
        let b = simpcube(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(stdout(&a).ends_with('\n'));
    }
}

#[test]
fn out_flag_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let to_file = simpcube(&["--out", path.to_str().unwrap(), "check", "adjunction"]);
    assert!(to_file.stdout.is_empty());
    let direct = simpcube(&["check", "adjunction"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn validate_reports_missing_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let vee = write(dir.path(), "vee.poset", "poset 3\nle 0 1\nle 0 2\n");
    let out = simpcube(&["validate", "--input", &vee]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("check lattice"));
    assert!(stdout(&out).contains("no_join"));
    let square = write(dir.path(), "sq.poset", "poset 4\nle 0 1\nle 0 2\nle 1 3\nle 2 3\n");
    assert_eq!(simpcube(&["validate", "--input", &square]).status.code(), Some(0));
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.poset", "poset 3\nle 0 1\nle 0 x\n");
    let out = simpcube(&["validate", "--input", &bad]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3, column 6"));

    match parse_presheaf("simp 1\n\nlvl 0 2\nlvl 1 three\n") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (4, 7)),
        other => panic!("unexpected {other:?}"),
    }
    match parse_poset("# comment\nposet 2\nle 0 5\n") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 6)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn functor_output_parses_back() {
    let out = simpcube(&["functor", "nerve", "--lattice", "I2", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let x = parse_presheaf(&text).unwrap();
    assert_eq!(serialize_presheaf(&x), text);
}

#[test]
fn corpus_round_trips() {
    for d in 1..=3 {
        let s = simplex_site(d).unwrap();
        for name in SIMP_OBJECTS {
            let Ok(x) = simp_object(&s, name) else { continue };
            let back = parse_presheaf(&serialize_presheaf(&x)).unwrap();
            assert_eq!(back.sizes(), x.sizes(), "{name} at {d}");
            for f in 0..s.num_maps() {
                assert_eq!(back.action_table(f), x.action_table(f), "{name} at {d}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn poset_round_trip(n in 1usize..8, pairs in prop::collection::vec((0usize..8, 0usize..8), 0..16)) {
        let pairs: Vec<_> = pairs.into_iter().filter(|&(a, b)| a < b && b < n).collect();
        let p = FinPoset::from_generators(n, &pairs).unwrap();
        let q = parse_poset(&serialize_poset(&p)).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn subobject_round_trip(d in 1usize..=2, n in 0usize..=2, pick in any::<prop::sample::Index>()) {
        prop_assume!(n <= d);
        let s = simplex_site(d).unwrap();
        let rep = simp_representable(&s, n).unwrap();
        let subs = subobject_enumerate(&rep, 4096).unwrap();
        let (x, _) = subs[pick.index(subs.len())].to_presheaf();
        let text = serialize_presheaf(&x);
        let back = parse_presheaf(&text).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(serialize_presheaf(&back), text);
    }
}

use std::fs;
use std::path::PathBuf;

use wildiag::dsl::{parse_formal, parse_modified, print_formal};
use wildiag::json::{export_json, parse_json};
use wildiag_core::{full_diagram, MarkingStrategy};

fn corpus_files() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut v: Vec<PathBuf> = fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "wd"))
        .collect();
    v.sort();
    v
}

#[test]
fn corpus_matches_goldens() {
    let files = corpus_files();
    assert!(files.len() >= 23);
    for f in files {
        let src = fs::read_to_string(&f).unwrap();
        let m = parse_modified(&src).unwrap_or_else(|d| panic!("{}: {:?}", f.display(), d));
        let d = full_diagram(&m, &MarkingStrategy::Default).unwrap();
        let golden = fs::read_to_string(f.with_extension("json")).unwrap();
        assert_eq!(export_json(&d), golden, "{}", f.display());
        assert_eq!(parse_json(&golden).unwrap(), d, "{}", f.display());
    }
}

#[test]
fn corpus_print_round_trip() {
    for f in corpus_files() {
        let fd = parse_formal(&fs::read_to_string(&f).unwrap()).unwrap();
        let printed = print_formal(&fd);
        let again = parse_formal(&printed).unwrap();
        assert_eq!(again, fd, "{}", f.display());
        assert_eq!(print_formal(&again), printed);
    }
}

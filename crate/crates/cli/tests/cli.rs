use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn rectmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rectmod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn example(dir: &TempDir, name: &str) -> PathBuf {
    let path = dir.path().join(format!("{name}.gmod"));
    let out = rectmod(&["examples", name, "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{out:?}");
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const MERGE: &str = "bifiltration\nfield 2\n# two vertices joined at the top corner\n1 2 ; 0\n2 1 ; 1\n2 2 ; 0 1\n";

const CIRCLE: &str = "bifiltration\nfield 3\n1 1 ; 0\n1 1 ; 1\n2 1 ; 2\n1 2 ; 0 1\n2 2 ; 0 2\n3 2 ; 1 2\n3 3 ; 0 1 2\n";

#[test]
fn example_1_ranks() {
    let dir = TempDir::new().unwrap();
    let ex1 = example(&dir, "ex1");
    let out = rectmod(&["rank", s(&ex1), "--method", "naive"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "1 1 1 1 2\n1 1 2 1 2\n1 1 3 1 1\n2 1 2 1 2\n2 1 3 1 1\n3 1 3 1 1\n"
    );
}

#[test]
fn example_3_right_is_not_decomposable() {
    let dir = TempDir::new().unwrap();
    let ex3 = example(&dir, "ex3-right");
    for method in ["zigzag", "algebraic", "geometric"] {
        let out = rectmod(&["check-rectangle", s(&ex3), "--method", method]);
        assert_eq!(code(&out), 2, "{method}");
        assert_eq!(stdout(&out), "not-decomposable 1 1 3 2\n", "{method}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn rectangle_sums_pass_the_check() {
    let dir = TempDir::new().unwrap();
    let gmod = dir.path().join("r.gmod");
    assert_eq!(
        code(&rectmod(&["random-rect", "4", "3", "5", "--seed", "9", "-o", s(&gmod)])),
        0
    );
    let out = rectmod(&["check-rectangle", s(&gmod)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "decomposable\n");
    let recovered = rectmod(&["decompose-rectangles", s(&gmod), "--strict"]);
    assert_eq!(code(&recovered), 0);
    assert_eq!(stdout(&recovered), fs::read_to_string(dir.path().join("r.barcode")).unwrap());
}

#[test]
fn zero_rank_table_gives_an_empty_barcode() {
    let dir = TempDir::new().unwrap();
    let zero = example(&dir, "zero");
    let rank = dir.path().join("zero.rank");
    assert_eq!(code(&rectmod(&["rank", s(&zero), "-o", s(&rank)])), 0);
    let out = rectmod(&["decompose-rectangles", s(&rank)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "");
}

#[test]
fn strict_flags_negative_multiplicities() {
    let dir = TempDir::new().unwrap();
    let ex3 = example(&dir, "ex3-right");
    let lenient = rectmod(&["decompose-rectangles", s(&ex3)]);
    let strict = rectmod(&["decompose-rectangles", s(&ex3), "--strict"]);
    assert_eq!(code(&lenient), 0);
    assert_eq!(code(&strict), 2);
    assert!(String::from_utf8_lossy(&strict.stderr).contains("-1 at (2,2)..(3,2)"));
}

#[test]
fn dp_and_naive_ranks_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    for (name, text, degrees) in [("merge.bif", MERGE, vec!["0"]), ("circle.bif", CIRCLE, vec!["0", "1"])] {
        let bif = write(&dir, name, text);
        for d in degrees {
            let dp = rectmod(&["rank", s(&bif), "--degree", d, "--method", "dp"]);
            let naive = rectmod(&["rank", s(&bif), "--degree", d, "--method", "naive"]);
            assert_eq!(code(&dp), 0);
            assert_eq!(dp.stdout, naive.stdout, "{name} degree {d}");
        }
    }
}

#[test]
fn validate_dispatches_on_extension() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&rectmod(&["validate", s(&write(&dir, "a.bif", MERGE))])), 0);
    let early = write(&dir, "b.bif", "bifiltration\nfield 2\n2 2 ; 0\n2 2 ; 1\n1 1 ; 0 1\n");
    let out = rectmod(&["validate", s(&early)]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).starts_with("invalid"));
    assert_eq!(code(&rectmod(&["validate", s(&example(&dir, "ex2"))])), 0);
    let twisted = write(
        &dir,
        "t.gmod",
        "gridmodule\nfield 2\ngrid 2 2\ndim 1 1 1\ndim 2 1 1\ndim 1 2 1\ndim 2 2 1\nhmap 1 1\n1\nvmap 1 1\n1\nhmap 1 2\n1\nvmap 2 1\n0\n",
    );
    assert_eq!(code(&rectmod(&["validate", s(&twisted)])), 2);
    let garbage = write(&dir, "g.gmod", "gridmodule\nfield two\n");
    assert_eq!(code(&rectmod(&["validate", s(&garbage)])), 1);
    assert_eq!(code(&rectmod(&["validate", s(&write(&dir, "x.txt", ""))])), 1);
}

#[test]
fn resolutions_round_trip_through_the_cli() {
    let dir = TempDir::new().unwrap();
    let fres = write(
        &dir,
        "m.fres",
        "resolution\nfield 2\ngrid 2 2\ngens\n1 2\n2 1\nrels\n2 2\nrelrels\nphi\n1 1 1\n2 1 1\npsi\n",
    );
    assert_eq!(code(&rectmod(&["validate", s(&fres)])), 0);
    let dp = rectmod(&["rank", s(&fres)]);
    let naive = rectmod(&["rank", s(&fres), "--method", "naive"]);
    assert_eq!(code(&dp), 0);
    assert_eq!(dp.stdout, naive.stdout);
    let bif = write(&dir, "m.bif", MERGE);
    assert_eq!(dp.stdout, rectmod(&["rank", s(&bif)]).stdout);
    let broken = write(
        &dir,
        "b.fres",
        "resolution\nfield 2\ngrid 2 2\ngens\n2 2\nrels\n1 1\nrelrels\nphi\n1 1 1\npsi\n",
    );
    assert_eq!(code(&rectmod(&["validate", s(&broken)])), 2);
    assert_eq!(code(&rectmod(&["rank", s(&broken)])), 1);
}

#[test]
fn field_mismatch_is_refused() {
    let dir = TempDir::new().unwrap();
    let bif = write(&dir, "a.bif", MERGE);
    let out = rectmod(&["rank", s(&bif), "--field", "3"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("re-reduce"));
    assert_eq!(code(&rectmod(&["rank", s(&bif), "--field", "2"])), 0);
    assert_eq!(code(&rectmod(&["examples", "ex1", "--field", "4"])), 1);
}

#[test]
fn zigzag_barcodes() {
    let dir = TempDir::new().unwrap();
    let bif = write(&dir, "c.bif", CIRCLE);
    // stations (1,2) (2,2) (3,2) (3,1): the loop exists only at (3,2)
    let out = rectmod(&["zigzag-barcode", s(&bif), "--row", "3,2", "--degree", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 3 3\n");
    // stations (1,3) (2,3) (3,3) (3,2) (3,1): filled at (3,3)
    let out = rectmod(&["zigzag-barcode", s(&bif), "--row", "3,3", "--degree", "1"]);
    assert_eq!(stdout(&out), "1 4 4\n");
    assert_eq!(code(&rectmod(&["zigzag-barcode", s(&bif), "--col", "9,9"])), 1);
    assert_eq!(code(&rectmod(&["zigzag-barcode", s(&bif)])), 1);
    let zbar = dir.path().join("c.zbar");
    assert_eq!(
        code(&rectmod(&["zigzag-barcode", s(&bif), "--col", "1,1", "-o", s(&zbar)])),
        0
    );
    assert!(zbar.exists());
}

#[test]
fn results_do_not_depend_on_jobs() {
    let dir = TempDir::new().unwrap();
    let bif = write(&dir, "c.bif", CIRCLE);
    let one = rectmod(&["--jobs", "1", "rank", s(&bif), "--degree", "1"]);
    let four = rectmod(&["--jobs", "4", "rank", s(&bif), "--degree", "1"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(code(&rectmod(&["--jobs", "0", "rank", s(&bif)])), 1);
}

#[test]
fn unknown_examples_and_usage_errors() {
    assert_eq!(code(&rectmod(&["examples", "nope"])), 1);
    assert_eq!(code(&rectmod(&["frobnicate"])), 1);
    assert_eq!(code(&rectmod(&["--help"])), 0);
}

#[test]
fn dp_refuses_large_grids() {
    let dir = TempDir::new().unwrap();
    let bif = write(&dir, "big.bif", "bifiltration\nfield 2\n1 1 ; 0\n61 1 ; 1\n");
    let out = rectmod(&["rank", s(&bif)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit"));
}

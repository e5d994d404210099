use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(rel)
}

fn bcod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcod")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    bcod(args).status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&["verify", "--bcod", p(&data("fixtures/bcod_8x6.cod"))]), 0);
    assert_eq!(code(&["verify", "--bcod", p(&data("fixtures/cod_8x5_g1.cod"))]), 1);
    assert_eq!(code(&["verify", "--cod", p(&data("fixtures/cod_8x5_g1.cod"))]), 0);
    let dir = TempDir::new().unwrap();
    let garbage = dir.path().join("garbage.cod");
    fs::write(&garbage, "this is not a matrix\n").unwrap();
    assert_eq!(code(&["verify", p(&garbage)]), 3);
    assert_eq!(code(&["verify", p(&dir.path().join("missing.cod"))]), 2);
    assert_eq!(code(&["verify", "--cod", "--bcod", p(&data("fixtures/bcod_8x6.cod"))]), 2);
}

#[test]
fn verify_json() {
    let out = bcod(&["verify", "--json", p(&data("fixtures/cod_8x5_g1.cod"))]);
    assert_eq!(out.status.code(), Some(1));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["verdict"], "fail");
    assert_eq!(value["violations"][0]["axiom"], "even-columns");
}

#[test]
fn generate_matches_golden() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("m1.cod");
    assert_eq!(code(&["generate", "-m", "1", "-o", p(&out)]), 0);
    assert_eq!(fs::read_to_string(&out).unwrap(), fs::read_to_string(data("golden/m1.cod")).unwrap());
    let printed = bcod(&["generate", "-m", "4"]);
    assert_eq!(stdout(&printed), fs::read_to_string(data("golden/m4.cod")).unwrap());
    let file = dir.path().join("m4.cod");
    fs::write(&file, stdout(&printed)).unwrap();
    assert_eq!(code(&["verify", p(&file)]), 0);
    assert_eq!(code(&["generate", "-m", "0"]), 2);
}

#[test]
fn equiv_writes_replayable_script() {
    let dir = TempDir::new().unwrap();
    let script = dir.path().join("s.ops");
    let (a, b) = (data("fixtures/bcod_8x6.cod"), data("golden/m3.cod"));
    assert_eq!(code(&["equiv", p(&a), p(&b), "--script-out", p(&script)]), 0);
    let replay = bcod(&["apply", p(&a), "--script", p(&script)]);
    assert_eq!(stdout(&replay), fs::read_to_string(&b).unwrap());

    let (a, b) = (data("fixtures/bcod_16x8.cod"), data("golden/m4.cod"));
    assert_eq!(code(&["equiv", p(&a), p(&b), "--script-out", p(&script)]), 0);
    let replay = bcod(&["apply", p(&a), "--script", p(&script)]);
    assert_eq!(stdout(&replay), fs::read_to_string(&b).unwrap());
}

#[test]
fn equiv_failures() {
    assert_eq!(code(&["equiv", p(&data("golden/m2.cod")), p(&data("golden/m3.cod"))]), 2);
    let g1 = data("fixtures/cod_8x5_g1.cod");
    let out = bcod(&["equiv", p(&g1), p(&data("fixtures/cod_8x5_g2.cod"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a BCOD"));
}

#[test]
fn canonicalize_emits_ops() {
    let dir = TempDir::new().unwrap();
    let ops = dir.path().join("c.ops");
    let matrix = dir.path().join("c.cod");
    let input = data("fixtures/bcod_16x8.cod");
    assert_eq!(code(&["canonicalize", p(&input), "-o", p(&ops), "--matrix-out", p(&matrix)]), 0);
    let text = fs::read_to_string(&ops).unwrap();
    assert!(!text.contains("colneg"));
    assert_eq!(fs::read_to_string(&matrix).unwrap(), fs::read_to_string(data("golden/m4.cod")).unwrap());
    let replay = bcod(&["apply", p(&input), "--script", p(&ops)]);
    assert_eq!(stdout(&replay), fs::read_to_string(&matrix).unwrap());
    let json = bcod(&["canonicalize", "--json", p(&input)]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(value["m"], 4);
    assert_eq!(code(&["canonicalize", p(&data("fixtures/cod_8x5_g1.cod"))]), 1);
}

#[test]
fn decompose_stacked_designs() {
    let dir = TempDir::new().unwrap();
    let stacked = dir.path().join("stacked.cod");
    fs::write(&stacked, "4 2 2\nz1 0\n0 z1*\nz2 0\n0 z2*\n").unwrap();
    let out = bcod(&["decompose", p(&stacked), "--out-dir", p(&dir.path().join("parts"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2 component(s)\ncomponent 1: rows 1 2 vars z1\ncomponent 2: rows 3 4 vars z2\n");
    let part = fs::read_to_string(dir.path().join("parts/component_2.cod")).unwrap();
    assert_eq!(part, "2 2 1\nz1 0\n0 z1*\n");
}

#[test]
fn biform_outputs() {
    let dir = TempDir::new().unwrap();
    let (out, script) = (dir.path().join("b.cod"), dir.path().join("b.ops"));
    let g1 = data("fixtures/cod_8x5_g1.cod");
    assert_eq!(code(&["biform", p(&g1), "-i", "2", "-o", p(&out), "--script-out", p(&script)]), 0);
    let replay = bcod(&["apply", p(&g1), "--script", p(&script)]);
    assert_eq!(stdout(&replay), fs::read_to_string(&out).unwrap());
    assert_eq!(code(&["biform", p(&g1), "-i", "2", "--restricted"]), 1);
    assert_eq!(code(&["biform", p(&g1), "-i", "9"]), 2);
    let eight = data("fixtures/bcod_8x6.cod");
    assert_eq!(code(&["biform", p(&eight), "-i", "4", "--restricted", "-o", p(&out)]), 0);
    assert_eq!(code(&["verify", p(&out)]), 0);
}

#[test]
fn complete_partial_file() {
    let dir = TempDir::new().unwrap();
    let partial = dir.path().join("partial.cod");
    let full = fs::read_to_string(data("fixtures/bcod_8x6.cod")).unwrap();
    let blanked: String = full
        .lines()
        .enumerate()
        .map(|(i, line)| {
            if i < 7 {
                return format!("{line}\n");
            }
            let mut toks: Vec<&str> = line.split(' ').collect();
            toks[2] = "?";
            toks[5] = "?";
            format!("{}\n", toks.join(" "))
        })
        .collect();
    fs::write(&partial, &blanked).unwrap();
    let out = bcod(&["complete", p(&partial)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), full);
    fs::write(&partial, blanked.replacen("z1 0 0 0 z2 z3", "z1 0 ? 0 z2 z3", 1)).unwrap();
    assert_eq!(code(&["complete", p(&partial)]), 3);
}

#[test]
fn enumerate_summaries() {
    let out = bcod(&["enumerate", "-m", "2", "--classes"]);
    assert_eq!(stdout(&out), "m=2 matrices=1 classes=1\n");
    let dir = TempDir::new().unwrap();
    let results = dir.path().join("results");
    let out = bcod(&["enumerate", "-m", "1", "--out-dir", p(&results)]);
    assert_eq!(stdout(&out), "m=1 matrices=16\n");
    assert!(results.join("bcod_00016.cod").exists());
    assert_eq!(code(&["enumerate", "-m", "4"]), 2);
    assert_eq!(code(&["enumerate", "-m", "3", "--symmetry", "none"]), 2);
}

#[test]
fn apply_and_renumber() {
    let dir = TempDir::new().unwrap();
    let script = dir.path().join("s.ops");
    fs::write(&script, "colperm 5 4 3 2 1\nrowperm 1 2 7 4 5 8 3 6\nrowneg 2\nrowneg 5\n").unwrap();
    let out = bcod(&["apply", p(&data("fixtures/cod_8x5_g1.cod")), "--script", p(&script)]);
    assert_eq!(stdout(&out), fs::read_to_string(data("fixtures/cod_8x5_g2.cod")).unwrap());
    fs::write(&script, "rowneg 40\n").unwrap();
    assert_eq!(code(&["apply", p(&data("fixtures/cod_8x5_g1.cod")), "--script", p(&script)]), 3);

    let gappy = dir.path().join("gappy.cod");
    fs::write(&gappy, "2 2 7\nz3 0\n0 z3*\n").unwrap();
    assert_eq!(code(&["verify", p(&gappy)]), 3);
    let out = bcod(&["renumber", p(&gappy)]);
    assert_eq!(stdout(&out), "2 2 1\nz1 0\n0 z1*\n");
}

#[test]
fn deterministic_output() {
    let a = bcod(&["canonicalize", p(&data("fixtures/bcod_16x8.cod"))]);
    let b = bcod(&["canonicalize", p(&data("fixtures/bcod_16x8.cod"))]);
    assert_eq!(a.stdout, b.stdout);
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const HARMONIC: &str = "\
[system]
n = 3
d = 3

[kinetic]
type = nonrelativistic
mass = 1

[twobody]
type = powerlaw
amplitude = 0.5
exponent = 2

[state]
tower = boson-gs
";

const YUKAWA: &str = "\
[system]
n = 2
d = 3
[kinetic]
type = nonrelativistic
mass = 1
[twobody]
type = yukawa
coupling = 1
range = 1
[state]
tower = boson-gs
";

fn envelope(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("run.cfg");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_envelope"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .output()
        .unwrap()
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn solve_emits_one_exact_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = envelope(dir.path(), HARMONIC, &["solve"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("N,D,Q,E,r0,p0,bound,n_roots\n"));
    let r = &rows(&out)[0];
    assert_eq!(&r[..3], ["3", "3", "3.00000000000000e0"]);
    assert!((num(&r[3]) - 3.0 * 3f64.sqrt()).abs() < 1e-13);
    assert_eq!(r[6], "exact");
    assert_eq!(r[7], "1");
}

#[test]
fn sweep_over_particle_number() {
    let dir = tempfile::tempdir().unwrap();
    let out = envelope(dir.path(), HARMONIC, &["sweep", "--param", "N", "--from", "2", "--to", "6"]);
    assert!(out.status.success());
    let rows = rows(&out);
    assert_eq!(rows.len(), 5);
    for (i, r) in rows.iter().enumerate() {
        let n = (i + 2) as f64;
        assert_eq!(r[0], format!("{}", i + 2));
        let q = (n - 1.0) * 1.5;
        assert!((num(&r[4]) - n.sqrt() * q).abs() < 1e-12 * n.sqrt() * q);
    }
}

#[test]
fn critical_twobody_yukawa() {
    let dir = tempfile::tempdir().unwrap();
    let out = envelope(dir.path(), YUKAWA, &["critical", "--mode", "twobody"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &rows(&out)[0];
    assert_eq!(r[0], "twobody");
    assert!((num(&r[3]) - 1.0).abs() < 1e-12);
    assert!((num(&r[4]) - 2.25 * std::f64::consts::E).abs() < 1e-12);
    let out = envelope(dir.path(), YUKAWA, &["critical"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn parse_errors_exit_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = envelope(dir.path(), &HARMONIC.replace("d = 3", "D = 1"), &["solve"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3") && err.contains("`D`") && err.contains("D >= 2"), "{err}");
    assert_eq!(err.lines().count(), 1);
    assert!(out.stdout.is_empty());

    let out = envelope(dir.path(), &format!("{HARMONIC}[kinetic]\ntype = ultrarelativistic\n"), &["solve"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("duplicate section kinetic"));

    let out = envelope(dir.path(), HARMONIC, &["explode"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn collapse_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let repulsive = HARMONIC.replace("amplitude = 0.5", "amplitude = -0.5");
    let out = envelope(dir.path(), &repulsive, &["solve"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    let star = "[system]\nn = 3\nd = 3\n[kinetic]\ntype = semirelativistic\nmass = 1\n\
                [twobody]\ntype = coulomb\nstrength = 10\n[state]\ntower = boson-gs\n[bosonstar]\nalpha = 10\n";
    let out = envelope(dir.path(), star, &["bosonstar"]);
    assert_eq!(out.status.code(), Some(2));
    let out = envelope(dir.path(), &star.replace("alpha = 10", "alpha = 0.1"), &["bosonstar"]);
    assert!(out.status.success());
    assert!((num(&rows(&out)[0][5]) - 2.994_995_826_374_387).abs() < 1e-12);
}

#[test]
fn oracle_reports_radial_reference() {
    let dir = tempfile::tempdir().unwrap();
    let coulomb = YUKAWA.replace("type = yukawa\ncoupling = 1\nrange = 1", "type = coulomb\nstrength = 1");
    let out = envelope(dir.path(), &coulomb, &["oracle"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &rows(&out)[0];
    // m = 1 pair: reduced mass 1/2, ground state -1/4
    assert!((num(&r[6]) + 0.25).abs() < 1e-6);
    assert_eq!(r[5], "upper");
    assert!(num(&r[4]) >= num(&r[6]));

    let tiny = format!("{coulomb}[oracle]\nr_max = 0.001\npoints = 200\n");
    let out = envelope(dir.path(), &tiny, &["oracle"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn application_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let baryon = "[system]\nn = 3\nd = 3\n[kinetic]\ntype = ultrarelativistic\n\
                  [twobody]\ntype = powerlaw\namplitude = 0.2\nexponent = 1\n[state]\ntower = boson-gs\n\
                  [baryon]\na2 = 0.2\nb = 0.4\n";
    let out = envelope(dir.path(), baryon, &["baryon"]);
    assert!(out.status.success());
    let r = &rows(&out)[0];
    assert!((num(&r[5]) - 3.096_896_158_171_261).abs() < 1e-12);
    assert!((num(&r[6]) - 2.078_460_969_082_653).abs() < 1e-12);

    let minlen = "[system]\nn = 2\nd = 3\n[kinetic]\ntype = nonrelativistic\nmass = 1\n\
                  [twobody]\ntype = powerlaw\namplitude = 0.7\nexponent = 2\n[state]\nquanta = 1:1\n\
                  [minlength]\nk = 0.7\nbeta = 0.01\n";
    let out = envelope(dir.path(), minlen, &["minlength"]);
    assert!(out.status.success());
    let r = &rows(&out)[0];
    assert!((num(&r[7]) - 2.0 * 0.7 * 0.01 * 20.25).abs() < 1e-14);

    let pert = format!(
        "{}[perturbation.kinetic]\ncoefficient = 0.01\ntype = powerlaw\namplitude = 1\nexponent = 4\n",
        minlen.split("[minlength]").next().unwrap()
    );
    let out = envelope(dir.path(), &pert, &["perturb"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &rows(&out)[0];
    assert!((num(&r[4]) - 2.0 * 0.7 * 0.01 * 20.25).abs() < 1e-12);

    let out = envelope(dir.path(), HARMONIC, &["bounds"]);
    assert!(out.status.success());
    assert_eq!(&rows(&out)[0][4..], ["exact", "linear", "-", "linear"]);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("result.csv");
    let out = envelope(dir.path(), HARMONIC, &["solve", "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(fs::read_to_string(target).unwrap().starts_with("N,D,Q,E"));
}

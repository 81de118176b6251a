use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use crtkit_cli::format::write_algebra;
use crtkit_core::fixtures;
use tempfile::TempDir;

fn crtkit(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_crtkit"));
    cmd.args(args).env_remove("CRTKIT_BUDGET");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn put(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Chain {
    _dir: TempDir,
    alg: String,
    congs: String,
    path: PathBuf,
}

fn chain_files() -> Chain {
    let dir = TempDir::new().unwrap();
    let alg = put(dir.path(), "chain.alg", &write_algebra(&fixtures::chain_lattice(3)));
    let congs = put(dir.path(), "chain.cong", "cong a 0 1 1\ncong b 0 0 1\n");
    let path = dir.path().to_path_buf();
    Chain {
        _dir: dir,
        alg,
        congs,
        path,
    }
}

#[test]
fn three_chain_brute_force() {
    let c = chain_files();
    let o = crtkit(&["check", "--algebra", &c.alg, "--congs", &c.congs, "--method", "brute"], &[]);
    assert_eq!(o.status.code(), Some(10));
    assert_eq!(stdout(&o), "RESULT: NOT-CR\nWITNESS: 0 2\n");
}

#[test]
fn structural_methods_give_reasons() {
    let c = chain_files();
    for m in ["nearlattice", "distlat", "dualdisc"] {
        let o = crtkit(&["check", "--algebra", &c.alg, "--congs", &c.congs, "--method", m], &[]);
        assert_eq!(o.status.code(), Some(10), "{m}");
        let out = stdout(&o);
        assert!(out.starts_with("RESULT: NOT-CR\nREASON: "), "{m}: {out}");
    }
}

#[test]
fn single_congruence_is_cr() {
    let c = chain_files();
    let one = put(&c.path, "one.cong", "cong a 0 1 1\n");
    let o = crtkit(&["check", "--algebra", &c.alg, "--congs", &one], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "RESULT: CR\nROUTE: brute\n");
}

#[test]
fn auto_route_is_printed() {
    let c = chain_files();
    let gen = put(&c.path, "gen.alg", &write_algebra(&fixtures::chain_lattice(2)));
    let o = crtkit(
        &["check", "--algebra", &c.alg, "--congs", &c.congs, "--generator", &gen],
        &[],
    );
    assert_eq!(o.status.code(), Some(10));
    assert!(stdout(&o).ends_with("ROUTE: nearlattice\n"));

    let semi = put(&c.path, "semi.alg", &write_algebra(&fixtures::two_join_semilattice()));
    let join_only = fixtures::chain_lattice(3);
    let join_alg = crtkit_core::reduct(
        &join_only,
        &[crtkit_core::Interpretation::new(
            "join",
            2,
            crtkit_core::Term::op("join", vec![crtkit_core::Term::var(0), crtkit_core::Term::var(1)]),
        )],
    )
    .unwrap();
    let j = put(&c.path, "join.alg", &write_algebra(&join_alg));
    let o = crtkit(&["check", "--algebra", &j, "--congs", &c.congs, "--generator", &semi], &[]);
    assert_eq!(o.status.code(), Some(10));
    assert!(stdout(&o).contains("WITNESS: 0 2\nROUTE: brute\n"));
    assert!(stderr(&o).contains("open problem"));
}

#[test]
fn errors_exit_with_two() {
    let c = chain_files();
    let bad = put(&c.path, "bad.alg", "algebra a\nsize 2\nop f 2\n0 1 1\n");
    let o = crtkit(&["check", "--algebra", &bad, "--congs", &c.congs], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("needs 4 entries"));
    assert!(stdout(&o).is_empty());

    let notcong = put(&c.path, "x.cong", "cong x 0 1 0\n");
    let o = crtkit(&["check", "--algebra", &c.alg, "--congs", &notcong], &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("`x` is not a congruence") && (err.contains("meet") || err.contains("join")), "{err}");

    let o = crtkit(&["check", "--algebra", &c.alg, "--congs", &c.congs, "--method", "vs"], &[]);
    assert_eq!(o.status.code(), Some(2));

    let o = crtkit(&["check", "--algebra", "/nonexistent.alg", "--congs", &c.congs], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_from_environment() {
    let c = chain_files();
    let args = ["check", "--algebra", &c.alg, "--congs", &c.congs, "--method", "brute"];
    let o = crtkit(&args, &[("CRTKIT_BUDGET", "1")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("budget"));
    let o = crtkit(&args, &[("CRTKIT_BUDGET", "lots")]);
    assert_eq!(o.status.code(), Some(2));
    let o = crtkit(&args, &[("CRTKIT_BUDGET", "100")]);
    assert_eq!(o.status.code(), Some(10));
}

#[test]
fn gen_hard_round_trip() {
    let dir = TempDir::new().unwrap();
    let cnf = put(dir.path(), "pentagon.cnf", &crtkit_core::pentagon().to_dimacs());
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    for out in [&out1, &out2] {
        let o = crtkit(
            &["gen-hard", "--cnf", &cnf, "--out", out.to_str().unwrap(), "--semigroup"],
            &[],
        );
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for f in ["instance.alg", "instance.cong", "provenance.txt"] {
        assert_eq!(
            std::fs::read(out1.join(f)).unwrap(),
            std::fs::read(out2.join(f)).unwrap(),
            "{f} differs between runs"
        );
    }
    let congs = std::fs::read_to_string(out1.join("instance.cong")).unwrap();
    assert_eq!(congs.lines().count(), 5);
    let alg_text = std::fs::read_to_string(out1.join("instance.alg")).unwrap();
    assert!(alg_text.contains("op mul 2"));

    // The pentagon formula is satisfiable, so the instance is not CR.
    let o = crtkit(
        &[
            "check",
            "--algebra",
            out1.join("instance.alg").to_str().unwrap(),
            "--congs",
            out1.join("instance.cong").to_str().unwrap(),
            "--method",
            "brute",
        ],
        &[],
    );
    assert_eq!(o.status.code(), Some(10));

    let out3 = dir.path().join("c");
    let o = crtkit(&["gen-hard", "--cnf", &cnf, "--out", out3.to_str().unwrap(), "--u-embed"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let size = |p: &Path| -> usize {
        std::fs::read_to_string(p.join("instance.alg")).unwrap().lines().nth(1).unwrap()[5..]
            .parse()
            .unwrap()
    };
    assert_eq!(size(&out3), 2 * size(&out1));
}

#[test]
fn gen_hard_rejects_non_3sat_prime() {
    let dir = TempDir::new().unwrap();
    let cnf = put(dir.path(), "bad.cnf", "p cnf 4 2\n1 2 3 0\n1 2 4 0\n");
    let o = crtkit(&["gen-hard", "--cnf", &cnf, "--out", dir.path().join("o").to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("C2") && err.contains("C3"), "{err}");
}

#[test]
fn classify2_reports() {
    let dir = TempDir::new().unwrap();
    let lat = put(dir.path(), "lat.alg", &write_algebra(&fixtures::chain_lattice(2)));
    let o = crtkit(&["classify2", "--algebra", &lat], &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("CLASS: HasN  COMPLEXITY: P\nWITNESS: "), "{out}");
    assert!(out.contains("ALSO: HasM"));

    let neg = put(
        dir.path(),
        "neg.alg",
        "algebra neg\nsize 2\nop neg 1\n1 0\nop 0 0\n0\nop 1 0\n1\n",
    );
    let o = crtkit(&["classify2", "--algebra", &neg], &[]);
    assert_eq!(stdout(&o), "CLASS: EssentiallyUnary  COMPLEXITY: coNP-complete\n");

    let join = put(dir.path(), "join.alg", &write_algebra(&fixtures::two_join_semilattice()));
    let o = crtkit(&["classify2", "--algebra", &join], &[]);
    assert_eq!(stdout(&o), "CLASS: SemilatticeFamily  COMPLEXITY: open\n");

    let three = put(dir.path(), "three.alg", &write_algebra(&fixtures::chain_lattice(3)));
    assert_eq!(crtkit(&["classify2", "--algebra", &three], &[]).status.code(), Some(2));
}

#[test]
fn conlat_reports() {
    let dir = TempDir::new().unwrap();
    let chain = put(dir.path(), "c.alg", &write_algebra(&fixtures::chain_lattice(3)));
    let o = crtkit(&["conlat", "--algebra", &chain], &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("CONGRUENCES: 4\n") && out.contains("MEET-IRREDUCIBLE: 2\n"));
    assert!(out.contains("ARITHMETIC: no\n"));

    let ring = put(dir.path(), "z12.alg", &write_algebra(&fixtures::ring_zn(12)));
    let out = stdout(&crtkit(&["conlat", "--algebra", &ring], &[]));
    assert!(out.contains("CONGRUENCES: 6\n") && out.contains("ARITHMETIC: yes\n"));

    let one = put(dir.path(), "one.alg", "algebra one\nsize 1\n");
    assert!(stdout(&crtkit(&["conlat", "--algebra", &one], &[])).contains("CONGRUENCES: 1\n"));

    let set = put(dir.path(), "set.alg", "algebra set\nsize 6\n");
    let o = crtkit(&["conlat", "--algebra", &set], &[("CRTKIT_BUDGET", "20")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let c = chain_files();
    let run = || stdout(&crtkit(&["conlat", "--algebra", &c.alg], &[]));
    assert_eq!(run(), run());
}

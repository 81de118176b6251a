use std::fmt::Write as _;
use std::path::Path;

use crtkit_core::algebra::DEFAULT_CONGRUENCE_BUDGET;
use crtkit_core::vectorspace::{dim_s, dim_t};
use crtkit_core::{
    brute_force_is_cr_tuple_with_budget, classify, congruence_to_subspace, coordinatize,
    is_cr_tuple_distlattice, is_cr_tuple_dualdisc, is_cr_tuple_nearlattice, is_distributive,
    left_zero_semigroup, naive_meet_irreducibles, reduce, reduct, route_decide, u_embed,
    validate_3sat_prime, CnfFormula, FiniteAlgebra, Interpretation, Operation, Partition, Term,
    VSInstance,
};

use crate::format::{write_algebra, write_congruences};
use crate::{CliError, Report, EXIT_CR, EXIT_NOT_CR};

/// Congruence lattices larger than this skip the cubic distributivity and
/// quadratic permutability checks in `conlat`.
pub const LATTICE_CHECK_LIMIT: usize = 150;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Auto,
    Brute,
    Vs,
    Nearlattice,
    Distlat,
    Dualdisc,
}

struct Verdict {
    is_cr: bool,
    witness: Option<Vec<usize>>,
    reason: Option<String>,
}

/// `alg` itself if it has a ternary `n`, else the reduct by
/// `n(x,y,z) = join(meet(x,y),z)` when `meet` and `join` exist.
fn with_n(alg: &FiniteAlgebra) -> Result<FiniteAlgebra, CliError> {
    if alg.op("n").is_some_and(|o| o.arity == 3) {
        return Ok(alg.clone());
    }
    let binary = |name| alg.op(name).is_some_and(|o: &Operation| o.arity == 2);
    if binary("meet") && binary("join") {
        let n = Term::op(
            "join",
            vec![Term::op("meet", vec![Term::var(0), Term::var(1)]), Term::var(2)],
        );
        return Ok(reduct(alg, &[Interpretation::new("n", 3, n)])?);
    }
    Err(CliError::Usage(
        "this method needs a ternary operation `n`, or binary `meet` and `join`".into(),
    ))
}

fn vs_verdict(alg: &FiniteAlgebra, thetas: &[Partition]) -> Result<Verdict, CliError> {
    let chart = coordinatize(alg)?;
    let bases = thetas
        .iter()
        .map(|t| congruence_to_subspace(&chart, t))
        .collect::<Result<Vec<_>, _>>()?;
    let inst = VSInstance::new(chart.p(), chart.n(), bases)?;
    let (s, t) = (dim_s(&inst), dim_t(&inst));
    Ok(Verdict {
        is_cr: s == t,
        witness: None,
        reason: (s != t).then(|| format!("dim S = {s} but dim T = {t}")),
    })
}

/// Decides whether `congs` is a CR tuple of `alg`.
pub fn check(
    alg: &FiniteAlgebra,
    congs: &[(String, Partition)],
    method: Method,
    generator: Option<&FiniteAlgebra>,
    budget: u64,
) -> Result<Report, CliError> {
    for (name, p) in congs {
        alg.check_congruence(p).map_err(|e| {
            CliError::Usage(format!("`{name}` is not a congruence of `{}`: {e}", alg.name()))
        })?;
    }
    let thetas: Vec<Partition> = congs.iter().map(|(_, p)| p.clone()).collect();
    let mut report = Report::default();
    let mut route = None;
    let verdict = match method {
        Method::Brute => {
            let v = brute_force_is_cr_tuple_with_budget(&thetas, budget)?;
            Verdict {
                is_cr: v.is_cr,
                witness: v.witness,
                reason: None,
            }
        }
        Method::Vs => vs_verdict(alg, &thetas)?,
        Method::Nearlattice | Method::Distlat => {
            let reduced = with_n(alg)?;
            let v = if method == Method::Nearlattice {
                is_cr_tuple_nearlattice(&reduced, "n", &thetas)?
            } else {
                is_cr_tuple_distlattice(&reduced, "n", &thetas)?
            };
            Verdict {
                is_cr: v.is_cr,
                witness: None,
                reason: v.reason.map(|r| r.to_string()),
            }
        }
        Method::Dualdisc => {
            let v = is_cr_tuple_dualdisc(alg, &thetas)?;
            Verdict {
                is_cr: v.is_cr,
                witness: None,
                reason: v.reason.map(|r| r.to_string()),
            }
        }
        Method::Auto => match generator {
            Some(g) => {
                if g.size() != 2 {
                    return Err(CliError::Usage(format!(
                        "generator must have 2 elements, `{}` has {}",
                        g.name(),
                        g.size()
                    )));
                }
                let class = classify(g)?;
                let v = route_decide(alg, &thetas, &class, budget)?;
                route = Some(v.route.to_string());
                if let Some(w) = v.warning {
                    report.stderr.push_str(&format!("warning: {w}\n"));
                }
                Verdict {
                    is_cr: v.is_cr,
                    witness: v.witness,
                    reason: v.reason,
                }
            }
            None => {
                route = Some("brute".to_string());
                let v = brute_force_is_cr_tuple_with_budget(&thetas, budget)?;
                Verdict {
                    is_cr: v.is_cr,
                    witness: v.witness,
                    reason: None,
                }
            }
        },
    };
    if verdict.is_cr {
        report.line("RESULT: CR");
        report.code = EXIT_CR;
    } else {
        report.line("RESULT: NOT-CR");
        report.code = EXIT_NOT_CR;
        if let Some(w) = &verdict.witness {
            let items: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            report.line(format!("WITNESS: {}", items.join(" ")));
        } else if let Some(r) = &verdict.reason {
            report.line(format!("REASON: {r}"));
        }
    }
    if let Some(r) = route {
        report.line(format!("ROUTE: {r}"));
    }
    Ok(report)
}

/// Contents of the three files written by `gen-hard`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardInstance {
    pub algebra: String,
    pub congruences: String,
    pub provenance: String,
}

pub fn hard_instance(cnf: &str, semigroup: bool, embed: bool) -> Result<HardInstance, CliError> {
    let phi = CnfFormula::parse_dimacs(cnf)?;
    let report = validate_3sat_prime(&phi);
    if !report.is_valid() {
        return Err(CliError::Invalid(
            report.violations.iter().map(|v| v.to_string()).collect(),
        ));
    }
    let inst = reduce(&phi)?;
    let n = inst.size();
    let (mut alg, thetas) = if embed {
        u_embed(n, &inst.thetas)?
    } else if semigroup {
        left_zero_semigroup(n, &inst.thetas)?
    } else {
        (FiniteAlgebra::with_name("S", n, Vec::new())?, inst.thetas.clone())
    };
    if embed && semigroup {
        let mut ops = alg.ops().to_vec();
        ops.push(Operation::from_fn("mul", 2, alg.size(), |a| a[0]));
        alg = FiniteAlgebra::with_name("U", alg.size(), ops)?;
        for t in &thetas {
            alg.check_congruence(t)?;
        }
    }
    let named: Vec<(String, Partition)> = thetas
        .into_iter()
        .enumerate()
        .map(|(i, t)| (format!("theta{i}"), t))
        .collect();

    let mut prov = String::new();
    let _ = writeln!(
        prov,
        "# formula: {} variables, {} clauses, {} variable sets",
        phi.num_vars(),
        phi.clauses().len(),
        inst.k()
    );
    for (i, vs) in inst.varsets.iter().enumerate() {
        let vars: Vec<String> = vs.iter().map(|v| format!("x{v}")).collect();
        let _ = writeln!(prov, "# V{i} = {{{}}}; theta{i} groups elements by their member of A{i}", vars.join(","));
    }
    if embed {
        let _ = writeln!(prov, "# element i + {n} is the primed copy of element i; 0 = 0, 1 = {n}");
    }
    let _ = writeln!(prov, "# element: partial assignments it contains");
    for s in 0..n {
        let _ = writeln!(prov, "{s} {}", inst.describe_element(s));
    }
    Ok(HardInstance {
        algebra: write_algebra(&alg),
        congruences: write_congruences(&named),
        provenance: prov,
    })
}

/// Writes `instance.alg`, `instance.cong` and `provenance.txt` into `out`.
pub fn gen_hard(cnf: &str, out: &Path, semigroup: bool, embed: bool) -> Result<Report, CliError> {
    let hard = hard_instance(cnf, semigroup, embed)?;
    std::fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.display().to_string(),
        source,
    })?;
    let mut report = Report::default();
    for (file, body) in [
        ("instance.alg", &hard.algebra),
        ("instance.cong", &hard.congruences),
        ("provenance.txt", &hard.provenance),
    ] {
        let path = out.join(file);
        std::fs::write(&path, body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        report.line(format!("WROTE: {}", path.display()));
    }
    Ok(report)
}

/// Classifies a two-element algebra.
pub fn classify2(alg: &FiniteAlgebra) -> Result<Report, CliError> {
    if alg.size() != 2 {
        return Err(CliError::Usage(format!(
            "classify2 needs a 2-element algebra, `{}` has {} elements",
            alg.name(),
            alg.size()
        )));
    }
    let class = classify(alg)?;
    let mut report = Report::default();
    report.line(format!("CLASS: {}  COMPLEXITY: {}", class.tag, class.tag.complexity()));
    if let Some(w) = &class.witness {
        report.line(format!("WITNESS: {w}"));
    }
    if !class.also.is_empty() {
        let also: Vec<String> = class.also.iter().map(|t| t.to_string()).collect();
        report.line(format!("ALSO: {}", also.join(" ")));
    }
    Ok(report)
}

/// Lists Con A with its meet-irreducibles and lattice properties.
pub fn conlat(alg: &FiniteAlgebra, budget: Option<u64>) -> Result<Report, CliError> {
    let limit = budget.map_or(DEFAULT_CONGRUENCE_BUDGET, |b| b.min(usize::MAX as u64) as usize);
    let all: Vec<Partition> = alg
        .all_congruences_with_budget(limit)?
        .into_iter()
        .map(|c| c.into_partition())
        .collect();
    let mi = naive_meet_irreducibles(&all)?;
    let mut report = Report::default();
    report.line(format!("SIZE: {}", alg.size()));
    report.line(format!("CONGRUENCES: {}", all.len()));
    for (i, p) in all.iter().enumerate() {
        let mark = if mi.binary_search(p).is_ok() { " meet-irreducible" } else { "" };
        report.line(format!("c{i} {p}{mark}"));
    }
    report.line(format!("MEET-IRREDUCIBLE: {}", mi.len()));
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    if all.len() > LATTICE_CHECK_LIMIT {
        report.line(format!("DISTRIBUTIVE: unknown (more than {LATTICE_CHECK_LIMIT} congruences)"));
        report.line("PERMUTABLE: unknown");
        report.line("ARITHMETIC: unknown");
        return Ok(report);
    }
    let distributive = is_distributive(&all)?;
    let mut permutable = true;
    'outer: for (i, x) in all.iter().enumerate() {
        for y in &all[i + 1..] {
            if !x.permutes_with(y)? {
                permutable = false;
                break 'outer;
            }
        }
    }
    report.line(format!("DISTRIBUTIVE: {}", yes_no(distributive)));
    report.line(format!("PERMUTABLE: {}", yes_no(permutable)));
    report.line(format!("ARITHMETIC: {}", yes_no(distributive && permutable)));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crtkit_core::fixtures;

    fn named(ps: &[&[usize]]) -> Vec<(String, Partition)> {
        ps.iter()
            .enumerate()
            .map(|(i, l)| (format!("t{i}"), Partition::from_labels(l)))
            .collect()
    }

    #[test]
    fn three_chain_every_method() {
        let alg = fixtures::chain_lattice(3);
        let congs = named(&[&[0, 1, 1], &[0, 0, 1]]);
        let brute = check(&alg, &congs, Method::Brute, None, 1000).unwrap();
        assert_eq!(brute.stdout, "RESULT: NOT-CR\nWITNESS: 0 2\n");
        assert_eq!(brute.code, EXIT_NOT_CR);
        for m in [Method::Nearlattice, Method::Distlat, Method::Dualdisc] {
            let r = check(&alg, &congs, m, None, 1000).unwrap();
            assert!(r.stdout.starts_with("RESULT: NOT-CR\nREASON: "), "{m:?}: {}", r.stdout);
        }
        let auto = check(&alg, &congs, Method::Auto, None, 1000).unwrap();
        assert_eq!(auto.stdout, "RESULT: NOT-CR\nWITNESS: 0 2\nROUTE: brute\n");
    }

    #[test]
    fn routed_through_generator() {
        let alg = fixtures::chain_lattice(3);
        let congs = named(&[&[0, 1, 1], &[0, 0, 1]]);
        let gen = fixtures::chain_lattice(2);
        let r = check(&alg, &congs, Method::Auto, Some(&gen), 1000).unwrap();
        assert!(r.stdout.ends_with("ROUTE: nearlattice\n"), "{}", r.stdout);
        assert_eq!(r.code, EXIT_NOT_CR);
        assert!(check(&alg, &congs, Method::Auto, Some(&alg), 1000).is_err());
    }

    #[test]
    fn vector_space_method() {
        let space = fixtures::gf_space(2, 2);
        // The three lines through the origin of GF(2)^2.
        let congs = named(&[&[0, 0, 1, 1], &[0, 1, 0, 1], &[0, 1, 1, 0]]);
        let r = check(&space, &congs, Method::Vs, None, 1000).unwrap();
        let b = check(&space, &congs, Method::Brute, None, 1000).unwrap();
        assert_eq!(r.code, b.code);
        assert_eq!(r.code, EXIT_NOT_CR);
        assert!(r.stdout.contains("REASON: dim S"));
        assert!(check(&fixtures::chain_lattice(3), &named(&[&[0, 0, 0]]), Method::Vs, None, 10).is_err());
    }

    #[test]
    fn non_congruence_names_operation_and_pair() {
        let alg = fixtures::chain_lattice(3);
        let err = check(&alg, &named(&[&[0, 1, 0]]), Method::Brute, None, 10).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("`t0`") && (msg.contains("meet") || msg.contains("join")), "{msg}");
    }

    #[test]
    fn classify_examples() {
        let lat = classify2(&fixtures::chain_lattice(2)).unwrap();
        assert!(lat.stdout.starts_with("CLASS: HasN  COMPLEXITY: P\nWITNESS: "));
        assert!(lat.stdout.contains("ALSO: HasM"));
        let neg = FiniteAlgebra::new(
            2,
            vec![
                Operation::new("neg", 1, vec![1, 0]),
                Operation::constant("0", 0),
                Operation::constant("1", 1),
            ],
        )
        .unwrap();
        assert_eq!(
            classify2(&neg).unwrap().stdout,
            "CLASS: EssentiallyUnary  COMPLEXITY: coNP-complete\n"
        );
        assert_eq!(
            classify2(&fixtures::two_join_semilattice()).unwrap().stdout,
            "CLASS: SemilatticeFamily  COMPLEXITY: open\n"
        );
        assert!(classify2(&fixtures::chain_lattice(3)).is_err());
    }

    #[test]
    fn conlat_examples() {
        let chain = conlat(&fixtures::chain_lattice(3), None).unwrap().stdout;
        assert!(chain.contains("CONGRUENCES: 4\n"));
        assert!(chain.contains("MEET-IRREDUCIBLE: 2\n"));
        assert!(chain.contains("ARITHMETIC: no\n"));
        let ring = conlat(&fixtures::ring_zn(12), None).unwrap().stdout;
        assert!(ring.contains("CONGRUENCES: 6\n"));
        assert!(ring.contains("ARITHMETIC: yes\n"));
        let one = conlat(&FiniteAlgebra::new(1, vec![]).unwrap(), None).unwrap().stdout;
        assert!(one.contains("CONGRUENCES: 1\n"));
        assert!(conlat(&FiniteAlgebra::new(6, vec![]).unwrap(), Some(10)).is_err());
    }

    #[test]
    fn hard_instance_shapes() {
        let cnf = crtkit_core::pentagon().to_dimacs();
        let plain = hard_instance(&cnf, false, false).unwrap();
        let semi = hard_instance(&cnf, true, false).unwrap();
        let both = hard_instance(&cnf, true, true).unwrap();
        assert_eq!(plain.congruences.lines().count(), 5);
        assert!(semi.algebra.contains("op mul 2\n"));
        let size = |a: &str| a.lines().nth(1).unwrap().to_string();
        let n: usize = size(&semi.algebra)[5..].parse().unwrap();
        assert_eq!(size(&both.algebra), format!("size {}", 2 * n));
        assert!(both.algebra.contains("op neg 1\n") && both.algebra.contains("op mul 2\n"));
        assert_eq!(hard_instance(&cnf, true, false).unwrap(), semi);
        let bad = "p cnf 3 1\n1 2 3 0\n";
        match hard_instance(bad, false, false) {
            Err(CliError::Invalid(v)) => assert!(v.iter().any(|m| m.starts_with("C2"))),
            other => panic!("{other:?}"),
        }
    }
}

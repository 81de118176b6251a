//! Two-element algebras: the ternary part of the clone with witness terms,
//! the case split on `s`, `n`, `m`, and routing of CR questions to the
//! matching decider.

use std::fmt;

use crate::algebra::{FiniteAlgebra, Operation};
use crate::dualdisc::is_cr_tuple_dualdisc;
use crate::error::{Error, Result};
use crate::generic::brute_force_is_cr_tuple_with_budget;
use crate::nearlattice::is_cr_tuple_nearlattice;
use crate::partition::Partition;
use crate::term::{eval_term, reduct, term_operation, Interpretation, Term};
use crate::vectorspace::{coordinatize, congruence_to_subspace, is_cr_tuple_vs, VSInstance};

/// Truth table of a ternary function on `{0,1}`: bit `4x + 2y + z` holds `f(x,y,z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernaryFunctionTable(pub u8);

impl TernaryFunctionTable {
    pub const X: Self = Self(0xF0);
    pub const Y: Self = Self(0xCC);
    pub const Z: Self = Self(0xAA);
    /// `x + y + z`.
    pub const S: Self = Self(0x96);
    /// `(x ∧ y) ∨ z`.
    pub const N: Self = Self(0xEA);
    /// `(x ∨ y) ∧ z`, the image of `n` under swapping 0 and 1.
    pub const N_DUAL: Self = Self(0xA8);
    /// Majority.
    pub const M: Self = Self(0xE8);

    pub fn eval(self, x: usize, y: usize, z: usize) -> usize {
        usize::from((self.0 >> (x * 4 + y * 2 + z)) & 1)
    }
}

impl fmt::Display for TernaryFunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08b}", self.0)
    }
}

/// Reached ternary term operations, each with a witness term of least depth.
#[derive(Debug, Clone)]
pub struct CloneWitness {
    witnesses: Vec<Option<Term>>,
}

impl CloneWitness {
    pub fn len(&self) -> usize {
        self.witnesses.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, t: TernaryFunctionTable) -> bool {
        self.witnesses[t.0 as usize].is_some()
    }

    pub fn witness(&self, t: TernaryFunctionTable) -> Option<&Term> {
        self.witnesses[t.0 as usize].as_ref()
    }

    pub fn tables(&self) -> impl Iterator<Item = (TernaryFunctionTable, &Term)> {
        self.witnesses
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.as_ref().map(|t| (TernaryFunctionTable(i as u8), t)))
    }
}

fn require_two(alg: &FiniteAlgebra) -> Result<()> {
    if alg.size() != 2 {
        return Err(Error::Precondition(format!(
            "expected a two-element algebra, got size {}",
            alg.size()
        )));
    }
    Ok(())
}

/// Table of `op(t_1, …, t_r)` from the argument tables.
fn compose(op: &Operation, args: &[u8]) -> u8 {
    let r = op.arity;
    let mut out = 0u8;
    for (p, &v) in op.table.iter().enumerate() {
        if v == 1 {
            let mut mask = 0xFFu8;
            for (k, &t) in args.iter().enumerate() {
                mask &= if (p >> (r - 1 - k)) & 1 == 1 { t } else { !t };
            }
            out |= mask;
        }
    }
    out
}

/// Closure of the projections (and constants) under the basic operations,
/// computed level by level so each witness has least depth.
pub fn ternary_clone(alg: &FiniteAlgebra) -> Result<CloneWitness> {
    require_two(alg)?;
    let mut witnesses: Vec<Option<Term>> = vec![None; 256];
    let mut reached: Vec<u8> = Vec::new();
    for (i, t) in [TernaryFunctionTable::X, TernaryFunctionTable::Y, TernaryFunctionTable::Z]
        .into_iter()
        .enumerate()
    {
        witnesses[t.0 as usize] = Some(Term::var(i));
        reached.push(t.0);
    }
    for op in alg.ops().iter().filter(|o| o.arity == 0) {
        let t = if op.table[0] == 1 { 0xFF } else { 0x00 };
        if witnesses[t].is_none() {
            witnesses[t] = Some(Term::constant(op.name.clone()));
            reached.push(t as u8);
        }
    }
    let ops: Vec<&Operation> = alg.ops().iter().filter(|o| o.arity > 0).collect();

    let mut start = 0;
    while start < reached.len() && reached.len() < 256 {
        let end = reached.len();
        let mut fresh: Vec<(u8, &Operation, Vec<usize>)> = Vec::new();
        let mut seen = [false; 256];
        for &t in &reached {
            seen[t as usize] = true;
        }
        let count = std::cell::Cell::new(end);
        for op in &ops {
            let r = op.arity;
            let mut record = |t: u8, idx: &[usize]| {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    count.set(count.get() + 1);
                    fresh.push((t, op, idx.to_vec()));
                }
            };
            match r {
                1 => {
                    for (i, &f) in reached.iter().enumerate().take(end).skip(start) {
                        record(compose(op, &[f]), &[i]);
                    }
                }
                2 => {
                    for i in 0..end {
                        let lo = if i < start { start } else { 0 };
                        for j in lo..end {
                            record(compose(op, &[reached[i], reached[j]]), &[i, j]);
                        }
                    }
                }
                3 => {
                    // f(a, b, c) = (f(a, b, 0) ∧ ¬c) ∨ (f(a, b, 1) ∧ c) pointwise.
                    'outer: for i in 0..end {
                        for j in 0..end {
                            let lo = if i < start && j < start { start } else { 0 };
                            let a0 = compose(op, &[reached[i], reached[j], 0x00]);
                            let a1 = compose(op, &[reached[i], reached[j], 0xFF]);
                            for (l, &c) in reached.iter().enumerate().take(end).skip(lo) {
                                record((a0 & !c) | (a1 & c), &[i, j, l]);
                            }
                            if count.get() == 256 {
                                break 'outer;
                            }
                        }
                    }
                }
                _ => {
                    let mut idx = vec![0usize; r];
                    let mut args = vec![0u8; r];
                    'tuples: loop {
                        if idx.iter().any(|&i| i >= start) {
                            for (a, &i) in args.iter_mut().zip(&idx) {
                                *a = reached[i];
                            }
                            record(compose(op, &args), &idx);
                        }
                        for slot in (0..r).rev() {
                            idx[slot] += 1;
                            if idx[slot] < end {
                                continue 'tuples;
                            }
                            idx[slot] = 0;
                        }
                        break;
                    }
                }
            }
            if count.get() == 256 {
                break;
            }
        }
        for (t, op, idx) in fresh {
            let children = idx
                .iter()
                .map(|&i| witnesses[reached[i] as usize].clone().expect("reached"))
                .collect();
            witnesses[t as usize] = Some(Term::op(op.name.clone(), children));
            reached.push(t);
        }
        start = end;
    }
    Ok(CloneWitness { witnesses })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClassTag {
    HasS,
    HasN,
    HasM,
    EssentiallyUnary,
    SemilatticeFamily,
}

impl ClassTag {
    pub fn complexity(self) -> &'static str {
        match self {
            ClassTag::HasS | ClassTag::HasN | ClassTag::HasM => "P",
            ClassTag::EssentiallyUnary => "coNP-complete",
            ClassTag::SemilatticeFamily => "open",
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassTag::HasS => "HasS",
            ClassTag::HasN => "HasN",
            ClassTag::HasM => "HasM",
            ClassTag::EssentiallyUnary => "EssentiallyUnary",
            ClassTag::SemilatticeFamily => "SemilatticeFamily",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub tag: ClassTag,
    /// Term for `s`, `n` (possibly its dual form) or `m`, per the tag.
    pub witness: Option<Term>,
    /// Further tags among `HasS`, `HasN`, `HasM` that also apply.
    pub also: Vec<ClassTag>,
}

fn depends_on(op: &Operation, k: usize) -> bool {
    let r = op.arity;
    let bit = 1 << (r - 1 - k);
    (0..op.table.len()).any(|p| p & bit == 0 && op.table[p] != op.table[p | bit])
}

fn essentially_unary(op: &Operation) -> bool {
    (0..op.arity).filter(|&k| depends_on(op, k)).count() <= 1
}

/// `c ∨ ⋁_{i∈S} x_i` (or `c ∧ ⋀_{i∈S} x_i` when `meet`).
fn semilattice_form(op: &Operation, meet: bool) -> bool {
    let r = op.arity;
    let c = op.table[if meet { op.table.len() - 1 } else { 0 }];
    let support: Vec<usize> = (0..r).filter(|&k| depends_on(op, k)).collect();
    (0..op.table.len()).all(|p| {
        let args: Vec<usize> = (0..r).map(|k| (p >> (r - 1 - k)) & 1).collect();
        let v = if meet {
            support.iter().fold(c, |acc, &k| acc & args[k])
        } else {
            support.iter().fold(c, |acc, &k| acc | args[k])
        };
        op.table[p] == v
    })
}

/// Case analysis in the order `s`, `n`, `m`, essentially unary, semilattice.
pub fn classify(alg: &FiniteAlgebra) -> Result<Classification> {
    let clone = ternary_clone(alg)?;
    classify_with_clone(alg, &clone)
}

pub fn classify_with_clone(alg: &FiniteAlgebra, clone: &CloneWitness) -> Result<Classification> {
    use TernaryFunctionTable as T;
    let n_table = if clone.contains(T::N) {
        Some(T::N)
    } else if clone.contains(T::N_DUAL) {
        Some(T::N_DUAL)
    } else {
        None
    };
    let mut found: Vec<(ClassTag, Term)> = Vec::new();
    if let Some(w) = clone.witness(T::S) {
        found.push((ClassTag::HasS, w.clone()));
    }
    if let Some(t) = n_table {
        found.push((ClassTag::HasN, clone.witness(t).expect("present").clone()));
    }
    if let Some(w) = clone.witness(T::M) {
        found.push((ClassTag::HasM, w.clone()));
    }
    if let Some((tag, witness)) = found.first().cloned() {
        return Ok(Classification {
            tag,
            witness: Some(witness),
            also: found[1..].iter().map(|(t, _)| *t).collect(),
        });
    }
    let plain = |tag| Classification {
        tag,
        witness: None,
        also: Vec::new(),
    };
    if alg.ops().iter().all(essentially_unary) {
        return Ok(plain(ClassTag::EssentiallyUnary));
    }
    if alg.ops().iter().all(|o| semilattice_form(o, false))
        || alg.ops().iter().all(|o| semilattice_form(o, true))
    {
        return Ok(plain(ClassTag::SemilatticeFamily));
    }
    Err(Error::ClassificationFailure(format!(
        "no case applies to `{}` ({} ternary term operations)",
        alg.name(),
        clone.len()
    )))
}

/// The Z_2-vector space `⟨A, +_e, -, e, *0, *1⟩` with `x +_e y := s(x, y, e)`,
/// and each `θ_i` as the subspace `γ(e/θ_i)`.
pub fn affine_gf2_instance(
    alg: &FiniteAlgebra,
    s_term: &Term,
    thetas: &[Partition],
    e: usize,
) -> Result<VSInstance> {
    alg.check_element(e)?;
    let n = alg.size();
    let s = term_operation(alg, s_term, "s", 3)?;
    let f = |x: usize, y: usize| s.table[(x * n + y) * n + e];
    let fail = |what: &str| Error::Routing(format!("`{s_term}` does not satisfy {what} at e = {e}"));
    for x in 0..n {
        if f(x, e) != x {
            return Err(fail("x + e = x"));
        }
        if f(x, x) != e {
            return Err(fail("x + x = e"));
        }
        for y in 0..n {
            if f(x, y) != f(y, x) {
                return Err(fail("commutativity"));
            }
            for z in 0..n {
                if f(f(x, y), z) != f(x, f(y, z)) {
                    return Err(fail("associativity"));
                }
            }
        }
    }
    let space = FiniteAlgebra::with_name(
        "Z2-space",
        n,
        vec![
            Operation::from_fn("+", 2, n, |a| f(a[0], a[1])),
            Operation::from_fn("-", 1, n, |a| a[0]),
            Operation::constant("0", e),
            Operation::from_fn("*0", 1, n, |_| e),
            Operation::from_fn("*1", 1, n, |a| a[0]),
        ],
    )?;
    let chart = coordinatize(&space).map_err(|err| Error::Routing(err.to_string()))?;
    let bases = thetas
        .iter()
        .map(|t| {
            space.check_congruence(t)?;
            congruence_to_subspace(&chart, t)
        })
        .collect::<Result<Vec<_>>>()?;
    VSInstance::new(2, chart.n(), bases)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    VectorSpace,
    Nearlattice,
    DualDiscriminator,
    BruteForce,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Route::VectorSpace => "vs",
            Route::Nearlattice => "nearlattice",
            Route::DualDiscriminator => "dualdisc",
            Route::BruteForce => "brute",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutedVerdict {
    pub route: Route,
    pub is_cr: bool,
    /// Least unsolvable targets, brute-force route only.
    pub witness: Option<Vec<usize>>,
    /// Structural reason from a specialized decider.
    pub reason: Option<String>,
    pub warning: Option<String>,
}

/// Decides the tuple through the decider matching `class`, which must come
/// from the two-element generator of a variety containing `alg`.
pub fn route_decide(
    alg: &FiniteAlgebra,
    thetas: &[Partition],
    class: &Classification,
    budget: u64,
) -> Result<RoutedVerdict> {
    for t in thetas {
        alg.check_congruence(t)?;
    }
    let witness_term = || {
        class
            .witness
            .as_ref()
            .ok_or_else(|| Error::Routing(format!("{} classification carries no witness", class.tag)))
    };
    let structural = |route, is_cr, reason: Option<String>| RoutedVerdict {
        route,
        is_cr,
        witness: None,
        reason,
        warning: None,
    };
    match class.tag {
        ClassTag::HasS => {
            let term = witness_term()?;
            if alg.size() == 0 {
                return Err(Error::Routing("empty universe".into()));
            }
            let inst = affine_gf2_instance(alg, term, thetas, 0)?;
            Ok(structural(Route::VectorSpace, is_cr_tuple_vs(&inst), None))
        }
        ClassTag::HasN => {
            let term = witness_term()?;
            let red = reduct(alg, &[Interpretation::new("n", 3, term.clone())])?;
            for t in thetas {
                red.check_congruence(t).map_err(|e| Error::Routing(format!("reduct: {e}")))?;
            }
            let v = is_cr_tuple_nearlattice(&red, "n", thetas)?;
            Ok(structural(
                Route::Nearlattice,
                v.is_cr,
                v.reason.map(|r| r.to_string()),
            ))
        }
        ClassTag::HasM => {
            let v = is_cr_tuple_dualdisc(alg, thetas)?;
            Ok(structural(
                Route::DualDiscriminator,
                v.is_cr,
                v.reason.map(|r| r.to_string()),
            ))
        }
        ClassTag::EssentiallyUnary | ClassTag::SemilatticeFamily => {
            let v = brute_force_is_cr_tuple_with_budget(thetas, budget)?;
            let warning = if class.tag == ClassTag::EssentiallyUnary {
                "the problem is coNP-complete for this variety; using exhaustive search"
            } else {
                "the complexity for semilattices is an open problem; using exhaustive search"
            };
            Ok(RoutedVerdict {
                route: Route::BruteForce,
                is_cr: v.is_cr,
                witness: v.witness,
                reason: None,
                warning: Some(warning.into()),
            })
        }
    }
}

/// Checks every witness against its table.
pub fn verify_clone(alg: &FiniteAlgebra, clone: &CloneWitness) -> Result<()> {
    for (t, term) in clone.tables() {
        for idx in 0..8 {
            let args = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
            if eval_term(alg, term, &args)? != t.eval(args[0], args[1], args[2]) {
                return Err(Error::Internal(format!("witness `{term}` does not compute {t}")));
            }
        }
    }
    Ok(())
}

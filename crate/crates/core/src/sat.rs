//! The hardness gadget: 3SAT′ formulas become tuples of equivalence
//! relations whose unsolvable systems are exactly the satisfying assignments.
//!
//! Variables are 1-based as in DIMACS. Varsets are sorted variable lists,
//! ordered lexicographically; `V_i` below is the `i`-th of them (0-based).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FiniteAlgebra, Operation};
use crate::error::{Error, Result};
use crate::generic::{check_same_universe, make_system, solve_system, CongruenceSystem};
use crate::partition::Partition;

/// Exhaustive satisfiability search refuses formulas with more variables.
pub const MAX_EXHAUSTIVE_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for c in &clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(Error::Parameters(format!(
                        "literal {l} out of range for {num_vars} variables"
                    )));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// DIMACS: optional `c` comment lines, a `p cnf <vars> <clauses>` header,
    /// then zero-terminated clauses.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            let err = |msg: String| Error::Parse { line: ln + 1, msg };
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('%') {
                break;
            }
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" || header.is_some() {
                    return Err(err("bad or repeated header".into()));
                }
                let v = parts[2].parse().map_err(|_| err("bad variable count".into()))?;
                let c = parts[3].parse().map_err(|_| err("bad clause count".into()))?;
                header = Some((v, c));
                continue;
            }
            let (nv, _) = header.ok_or_else(|| err("clause before header".into()))?;
            for tok in line.split_whitespace() {
                let l: i32 = tok.parse().map_err(|_| err(format!("bad literal `{tok}`")))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else if l.unsigned_abs() as usize > nv {
                    return Err(err(format!("literal {l} exceeds {nv} variables")));
                } else {
                    current.push(l);
                }
            }
        }
        let (nv, nc) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing `p cnf` header".into(),
        })?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != nc {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header announces {nc} clauses, found {}", clauses.len()),
            });
        }
        CnfFormula::new(nv, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    fn clause_vars(clause: &[i32]) -> Vec<usize> {
        let set: BTreeSet<usize> = clause.iter().map(|l| l.unsigned_abs() as usize).collect();
        set.into_iter().collect()
    }

    /// Distinct clause variable sets, sorted.
    pub fn varsets(&self) -> Vec<Vec<usize>> {
        let set: BTreeSet<Vec<usize>> = self.clauses.iter().map(|c| Self::clause_vars(c)).collect();
        set.into_iter().collect()
    }

    /// Variables occurring in some clause.
    pub fn occurring_vars(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .clauses
            .iter()
            .flatten()
            .map(|l| l.unsigned_abs() as usize)
            .collect();
        set.into_iter().collect()
    }

    /// `assignment[v - 1]` is the value of variable `v`.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| clause_true(c, |v| assignment[v - 1]))
    }
}

fn clause_true(clause: &[i32], value: impl Fn(usize) -> bool) -> bool {
    clause
        .iter()
        .any(|&l| value(l.unsigned_abs() as usize) == (l > 0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Clause without three pairwise different variables.
    C1 { clause: usize },
    /// Fewer than five varsets.
    C2 { varsets: usize },
    /// Variable lying in fewer than three varsets.
    C3 { var: usize, varsets: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::C1 { clause } => {
                write!(f, "C1: clause {clause} does not have three different variables")
            }
            Violation::C2 { varsets } => write!(f, "C2: only {varsets} distinct varsets (need 5)"),
            Violation::C3 { var, varsets } => {
                write!(f, "C3: variable {var} occurs in {varsets} varsets (need 3)")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_3sat_prime(phi: &CnfFormula) -> ValidationReport {
    let mut violations = Vec::new();
    for (idx, c) in phi.clauses.iter().enumerate() {
        if c.len() != 3 || CnfFormula::clause_vars(c).len() != 3 {
            violations.push(Violation::C1 { clause: idx });
        }
    }
    let vs = phi.varsets();
    if vs.len() < 5 {
        violations.push(Violation::C2 { varsets: vs.len() });
    }
    for v in phi.occurring_vars() {
        let count = vs.iter().filter(|s| s.contains(&v)).count();
        if count < 3 {
            violations.push(Violation::C3 { var: v, varsets: count });
        }
    }
    ValidationReport { violations }
}

/// Exhaustive search for a model, least in the order where variable 1 is
/// the most significant bit.
pub fn find_model(phi: &CnfFormula) -> Result<Option<Vec<bool>>> {
    let n = phi.num_vars;
    if n > MAX_EXHAUSTIVE_VARS {
        return Err(Error::Parameters(format!(
            "{n} variables exceed the exhaustive search limit of {MAX_EXHAUSTIVE_VARS}"
        )));
    }
    let mut a = vec![false; n];
    for code in 0u64..1 << n {
        for (v, slot) in a.iter_mut().enumerate() {
            *slot = (code >> (n - 1 - v)) & 1 == 1;
        }
        if phi.evaluate(&a) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Assignment to the variables of one varset; variable `V[t]` takes bit `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialAssignment {
    pub domain: usize,
    pub bits: u32,
}

impl PartialAssignment {
    pub fn value(&self, t: usize) -> bool {
        (self.bits >> t) & 1 == 1
    }
}

/// Assignments to `vars` satisfying every clause whose variable set is `vars`.
pub fn local_models(phi: &CnfFormula, vars: &[usize]) -> Result<Vec<PartialAssignment>> {
    let vs = phi.varsets();
    let domain = vs
        .iter()
        .position(|v| v.as_slice() == vars)
        .ok_or_else(|| Error::Parameters(format!("{vars:?} is not a varset of the formula")))?;
    let local: Vec<&Vec<i32>> = phi
        .clauses
        .iter()
        .filter(|c| CnfFormula::clause_vars(c) == vars)
        .collect();
    Ok((0..1u32 << vars.len())
        .map(|bits| PartialAssignment { domain, bits })
        .filter(|a| {
            local.iter().all(|c| {
                clause_true(c, |v| a.value(vars.iter().position(|&w| w == v).expect("local")))
            })
        })
        .collect())
}

/// S with the `k` equivalence relations, plus what each element stands for.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub formula: CnfFormula,
    pub varsets: Vec<Vec<usize>>,
    /// `A`, sorted by `(domain, bits)`.
    pub assignments: Vec<PartialAssignment>,
    /// Elements of S as pairs of indices into `assignments`, `x ≤ y`;
    /// singletons have `x = y`.
    pub elements: Vec<(usize, usize)>,
    pub thetas: Vec<Partition>,
}

impl ReductionInstance {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn k(&self) -> usize {
        self.varsets.len()
    }

    fn members(&self, s: usize) -> Vec<usize> {
        let (x, y) = self.elements[s];
        if x == y {
            vec![x]
        } else {
            vec![x, y]
        }
    }

    /// Index of the singleton `{a}` for `a ∈ A`.
    pub fn singleton(&self, a: usize) -> usize {
        self.elements
            .binary_search(&(a, a))
            .expect("every assignment has a singleton")
    }

    pub fn describe_assignment(&self, a: &PartialAssignment) -> String {
        let vars = &self.varsets[a.domain];
        let body: Vec<String> = vars
            .iter()
            .enumerate()
            .map(|(t, v)| format!("x{v}={}", u8::from(a.value(t))))
            .collect();
        format!("V{}{{{}}}", a.domain, body.join(","))
    }

    /// Human-readable content of an element of S.
    pub fn describe_element(&self, s: usize) -> String {
        self.members(s)
            .into_iter()
            .map(|a| self.describe_assignment(&self.assignments[a]))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn compatible(&self, a: &PartialAssignment, b: &PartialAssignment) -> bool {
        let (va, vb) = (&self.varsets[a.domain], &self.varsets[b.domain]);
        va.iter().enumerate().all(|(t, v)| match vb.iter().position(|w| w == v) {
            Some(u) => a.value(t) == b.value(u),
            None => true,
        })
    }
}

/// Builds S and `θ_1, …, θ_k` from a 3SAT′ formula.
pub fn reduce(phi: &CnfFormula) -> Result<ReductionInstance> {
    let report = validate_3sat_prime(phi);
    if !report.is_valid() {
        let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::NotThreeSatPrime(msgs.join("; ")));
    }
    let varsets = phi.varsets();
    let mut assignments = Vec::new();
    for (i, v) in varsets.iter().enumerate() {
        let models = local_models(phi, v)?;
        if models.is_empty() {
            return Err(Error::DegenerateFormula(format!(
                "clauses over varset V{i} {v:?} are unsatisfiable"
            )));
        }
        assignments.extend(models);
    }
    let mut inst = ReductionInstance {
        formula: phi.clone(),
        varsets,
        assignments,
        elements: Vec::new(),
        thetas: Vec::new(),
    };
    let m = inst.assignments.len();
    for x in 0..m {
        for y in x..m {
            if x == y || inst.compatible(&inst.assignments[x], &inst.assignments[y]) {
                inst.elements.push((x, y));
            }
        }
    }

    // An element of S holds at most one assignment per domain, so θ_i groups
    // the elements containing a fixed a ∈ A_i and leaves the rest alone.
    let n = inst.size();
    for i in 0..inst.k() {
        let labels: Vec<(bool, usize)> = (0..n)
            .map(|s| {
                match inst.members(s).into_iter().find(|&a| inst.assignments[a].domain == i) {
                    Some(a) => (true, a),
                    None => (false, s),
                }
            })
            .collect();
        let theta = Partition::from_labels(&labels);
        for s in 0..n {
            let ms = inst.members(s);
            for t in 0..n {
                let shared: Vec<usize> = inst.members(t).into_iter().filter(|a| ms.contains(a)).collect();
                let by_def = s == t
                    || (shared.len() == 1 && inst.assignments[shared[0]].domain == i);
                if by_def != theta.related(s, t) {
                    return Err(Error::Internal(format!(
                        "relation {i} is not an equivalence at elements {s}, {t}"
                    )));
                }
            }
        }
        inst.thetas.push(theta);
    }
    Ok(inst)
}

/// The system `⟨θ_1, …, θ_k, {a|V_1}, …, {a|V_k}⟩`.
pub fn assignment_to_system(inst: &ReductionInstance, a: &[bool]) -> Result<CongruenceSystem> {
    if a.len() != inst.formula.num_vars {
        return Err(Error::SizeMismatch {
            expected: inst.formula.num_vars,
            found: a.len(),
        });
    }
    let mut targets = Vec::with_capacity(inst.k());
    for (i, vars) in inst.varsets.iter().enumerate() {
        let bits = vars
            .iter()
            .enumerate()
            .fold(0u32, |acc, (t, &v)| acc | (u32::from(a[v - 1]) << t));
        let pa = PartialAssignment { domain: i, bits };
        let idx = inst.assignments.binary_search(&pa).map_err(|_| {
            Error::NotAModel(format!("restriction to V{i} {vars:?} violates a clause"))
        })?;
        targets.push(inst.singleton(idx));
    }
    make_system(inst.thetas.clone(), targets)
}

/// Reads a satisfying assignment off an unsolvable system.
///
/// Failures here are reported as internal errors: they would contradict the
/// correctness of the construction.
pub fn system_to_assignment(inst: &ReductionInstance, sys: &CongruenceSystem) -> Result<Vec<bool>> {
    if sys.thetas() != inst.thetas.as_slice() {
        return Err(Error::Precondition("system is not over this instance".into()));
    }
    if solve_system(sys).is_some() {
        return Err(Error::Precondition("system is solvable".into()));
    }
    let mut values: BTreeMap<usize, bool> = BTreeMap::new();
    for (l, &s) in sys.targets().iter().enumerate() {
        let picked: Vec<usize> = inst
            .members(s)
            .into_iter()
            .filter(|&a| inst.assignments[a].domain == l)
            .collect();
        let [a] = picked[..] else {
            return Err(Error::Internal(format!(
                "target {l} of an unsolvable system meets A_{l} in {} elements",
                picked.len()
            )));
        };
        let pa = inst.assignments[a];
        for (t, &v) in inst.varsets[l].iter().enumerate() {
            if let Some(old) = values.insert(v, pa.value(t)) {
                if old != pa.value(t) {
                    return Err(Error::Internal(format!("conflicting values for variable {v}")));
                }
            }
        }
    }
    let mut a = vec![false; inst.formula.num_vars];
    for (v, b) in values {
        a[v - 1] = b;
    }
    if !inst.formula.evaluate(&a) {
        return Err(Error::Internal("extracted assignment falsifies the formula".into()));
    }
    Ok(a)
}

/// Whether `s_i ∩ A_i ≠ ∅` for every `i`.
pub fn is_coherent(inst: &ReductionInstance, targets: &[usize]) -> bool {
    targets.iter().enumerate().all(|(i, &s)| {
        inst.members(s)
            .into_iter()
            .any(|a| inst.assignments[a].domain == i)
    })
}

/// S with the product `x · y = x` (`mul`), under which every equivalence is a congruence.
pub fn as_left_zero_semigroup(inst: &ReductionInstance) -> Result<(FiniteAlgebra, Vec<Partition>)> {
    left_zero_semigroup(inst.size(), &inst.thetas)
}

pub fn left_zero_semigroup(size: usize, thetas: &[Partition]) -> Result<(FiniteAlgebra, Vec<Partition>)> {
    let alg = FiniteAlgebra::with_name(
        "S",
        size,
        vec![Operation::from_fn("mul", 2, size, |a| a[0])],
    )?;
    for t in thetas {
        alg.check_congruence(t)?;
    }
    Ok((alg, thetas.to_vec()))
}

/// `⟨A ∪ A′, neg, 0, 1⟩` with `0 = c` and `1 = c′`; element `a′` is `a + n`.
pub fn u_embed_at(size: usize, thetas: &[Partition], c: usize) -> Result<(FiniteAlgebra, Vec<Partition>)> {
    if !thetas.is_empty() && check_same_universe(thetas)? != size {
        return Err(Error::SizeMismatch {
            expected: size,
            found: thetas[0].size(),
        });
    }
    if c >= size {
        return Err(Error::ElementOutOfRange { element: c, size });
    }
    let n2 = 2 * size;
    let alg = FiniteAlgebra::with_name(
        "U",
        n2,
        vec![
            Operation::from_fn("neg", 1, n2, |a| (a[0] + size) % n2),
            Operation::constant("0", c),
            Operation::constant("1", c + size),
        ],
    )?;
    let lifted = thetas
        .iter()
        .map(|t| {
            let nb = t.num_blocks();
            let labels: Vec<usize> = (0..n2)
                .map(|x| if x < size { t.label(x) } else { nb + t.label(x - size) })
                .collect();
            let p = Partition::from_labels(&labels);
            alg.check_congruence(&p).map(|_| p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((alg, lifted))
}

/// [`u_embed_at`] with `c = 0`.
pub fn u_embed(size: usize, thetas: &[Partition]) -> Result<(FiniteAlgebra, Vec<Partition>)> {
    u_embed_at(size, thetas, 0)
}

/// Adjoins a new bottom (element `n`) to a join-semilattice and names it `0`;
/// `1` is the old top.
pub fn semilattice_bounded_lift(
    alg: &FiniteAlgebra,
    thetas: &[Partition],
) -> Result<(FiniteAlgebra, Vec<Partition>)> {
    let [op] = alg.ops() else {
        return Err(Error::Precondition("expected a single binary operation".into()));
    };
    if op.arity != 2 {
        return Err(Error::Precondition("expected a single binary operation".into()));
    }
    let n = alg.size();
    let f = |x: usize, y: usize| op.table[x * n + y];
    for x in 0..n {
        if f(x, x) != x {
            return Err(Error::Precondition(format!("{} is not idempotent", op.name)));
        }
        for y in 0..n {
            if f(x, y) != f(y, x) {
                return Err(Error::Precondition(format!("{} is not commutative", op.name)));
            }
            for z in 0..n {
                if f(f(x, y), z) != f(x, f(y, z)) {
                    return Err(Error::Precondition(format!("{} is not associative", op.name)));
                }
            }
        }
    }
    let top = (0..n)
        .find(|&t| (0..n).all(|x| f(t, x) == t))
        .ok_or_else(|| Error::Precondition("semilattice has no top element".into()))?;
    for t in thetas {
        alg.check_congruence(t)?;
    }
    let m = n + 1;
    let lifted_alg = FiniteAlgebra::with_name(
        format!("{}^0", alg.name()),
        m,
        vec![
            Operation::from_fn(op.name.clone(), 2, m, |a| match (a[0] == n, a[1] == n) {
                (true, _) => a[1],
                (_, true) => a[0],
                _ => f(a[0], a[1]),
            }),
            Operation::constant("0", n),
            Operation::constant("1", top),
        ],
    )?;
    let lifted = thetas
        .iter()
        .map(|t| {
            let mut labels = t.labels().to_vec();
            labels.push(t.num_blocks());
            let p = Partition::from_labels(&labels);
            lifted_alg.check_congruence(&p).map(|_| p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((lifted_alg, lifted))
}

/// Seeded 3SAT′ generator on `k_sets` variables and `k_sets` circulant
/// varsets `{i, i+d1, i+d2}`, so every variable lies in exactly three.
///
/// With probability `sat_bias` a hidden assignment is planted and each
/// varset gets 1 to 4 clauses it satisfies; otherwise each varset gets 3
/// to 7 random clauses, which makes unsatisfiable formulas common.
pub fn random_3sat_prime(seed: u64, k_sets: usize, sat_bias: f64) -> Result<CnfFormula> {
    if k_sets < 5 {
        return Err(Error::Parameters(format!("need at least 5 varsets, got {k_sets}")));
    }
    if !(0.0..=1.0).contains(&sat_bias) {
        return Err(Error::Parameters(format!("sat_bias {sat_bias} outside [0, 1]")));
    }
    let k = k_sets;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<[usize; 3]> = loop {
        let d1 = rng.gen_range(1..k - 1);
        let d2 = rng.gen_range(d1 + 1..k);
        let sets: Vec<[usize; 3]> = (0..k).map(|i| [i, (i + d1) % k, (i + d2) % k]).collect();
        let distinct: BTreeSet<Vec<usize>> = sets
            .iter()
            .map(|s| {
                let mut v = s.to_vec();
                v.sort_unstable();
                v
            })
            .collect();
        if distinct.len() == k {
            break sets;
        }
    };
    let mut names: Vec<i32> = (1..=k as i32).collect();
    names.shuffle(&mut rng);

    let planted: Option<Vec<bool>> = rng
        .gen_bool(sat_bias)
        .then(|| (0..k).map(|_| rng.gen_bool(0.5)).collect());
    let mut clauses = Vec::new();
    for set in &sets {
        // A clause over a varset is determined by the one pattern it forbids.
        let mut forbidden: Vec<u32> = (0..8).collect();
        if let Some(p) = &planted {
            let own = set
                .iter()
                .enumerate()
                .fold(0u32, |acc, (t, &v)| acc | (u32::from(p[v]) << t));
            forbidden.retain(|&f| f != own);
        }
        forbidden.shuffle(&mut rng);
        let count = if planted.is_some() {
            rng.gen_range(1..=4)
        } else {
            rng.gen_range(3..=7)
        };
        forbidden.truncate(count);
        forbidden.sort_unstable();
        for f in forbidden {
            clauses.push(
                set.iter()
                    .enumerate()
                    .map(|(t, &v)| if (f >> t) & 1 == 1 { -names[v] } else { names[v] })
                    .collect(),
            );
        }
    }
    CnfFormula::new(k, clauses)
}

/// `(p∨q∨r), (q∨r∨s), (r∨s∨t), (s∨t∨p), (t∨p∨q)` on variables 1..5.
pub fn pentagon() -> CnfFormula {
    let clauses = (0..5)
        .map(|i| (0..3).map(|d| (i + d) % 5 + 1).collect())
        .collect();
    CnfFormula::new(5, clauses).expect("literals in range")
}

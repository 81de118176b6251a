//! CR tuples of distributive nearlattices.
//!
//! Everything is phrased through the meet-irreducible elements `P`: each
//! element `a` is represented by the down-set `σ(a) = {p ∈ P : p ≱ a}`, each
//! congruence `θ` by `F_θ = {p ∈ P : θ ⊆ θ_p}`. Subsets of `P` are bitsets
//! over the index of `p` in [`IrreduciblePoset::members`].

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::generic::{check_same_universe, CongruenceSystem};
use crate::partition::Partition;

/// Default bound on down-sets enumerated by the Tarski corollary.
pub const DEFAULT_TARSKI_BUDGET: u64 = 1 << 16;

/// Order, join and partial meet derived from `x ∨ y := n(x, x, y)`.
#[derive(Debug, Clone)]
pub struct NearlatticeView {
    size: usize,
    join: Vec<usize>,
    meet: Vec<Option<usize>>,
    leq: FixedBitSet,
    top: usize,
}

impl NearlatticeView {
    pub fn new(alg: &FiniteAlgebra, n_op: &str) -> Result<Self> {
        let bad = |m: String| Error::NotANearlattice(m);
        let op = alg.op(n_op).ok_or_else(|| Error::UnknownSymbol(n_op.to_string()))?;
        if op.arity != 3 {
            return Err(Error::ArityMismatch {
                symbol: n_op.to_string(),
                expected: 3,
                found: op.arity,
            });
        }
        let s = alg.size();
        let join: Vec<usize> = (0..s * s)
            .map(|i| {
                let (x, y) = (i / s, i % s);
                op.table[(x * s + x) * s + y]
            })
            .collect();
        let j = |x: usize, y: usize| join[x * s + y];
        for x in 0..s {
            if j(x, x) != x {
                return Err(bad(format!("join is not idempotent at {x}")));
            }
            for y in 0..s {
                if j(x, y) != j(y, x) {
                    return Err(bad(format!("join is not commutative at ({x},{y})")));
                }
                for z in 0..s {
                    if j(j(x, y), z) != j(x, j(y, z)) {
                        return Err(bad(format!("join is not associative at ({x},{y},{z})")));
                    }
                }
            }
        }
        let mut leq = FixedBitSet::with_capacity(s * s);
        for x in 0..s {
            for y in 0..s {
                if j(x, y) == y {
                    leq.insert(x * s + y);
                }
            }
        }
        let top = (0..s)
            .find(|&t| (0..s).all(|x| j(x, t) == t))
            .ok_or_else(|| bad("no top element".into()))?;
        let le = |x: usize, y: usize| leq.contains(x * s + y);
        let mut meet = vec![None; s * s];
        for a in 0..s {
            for b in a..s {
                let lower: Vec<usize> = (0..s).filter(|&c| le(c, a) && le(c, b)).collect();
                if lower.is_empty() {
                    continue;
                }
                let greatest = lower
                    .iter()
                    .copied()
                    .find(|&g| lower.iter().all(|&c| le(c, g)))
                    .ok_or_else(|| bad(format!("{a} and {b} have lower bounds but no meet")))?;
                meet[a * s + b] = Some(greatest);
                meet[b * s + a] = Some(greatest);
            }
        }
        Ok(NearlatticeView {
            size: s,
            join,
            meet,
            leq,
            top,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq.contains(a * self.size + b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        self.meet[a * self.size + b]
    }

    pub fn is_lattice(&self) -> bool {
        self.meet.iter().all(Option::is_some)
    }
}

/// Checks the algebra is subdirectly built from 2_N: every meet-irreducible
/// congruence has a two-element quotient isomorphic to 2_N.
pub fn verify_membership(alg: &FiniteAlgebra, n_op: &str) -> Result<()> {
    let two_n = [0, 1, 0, 1, 0, 1, 1, 1];
    let swapped: Vec<usize> = (0..8)
        .map(|i| {
            let args = [(i >> 2) & 1, (i >> 1) & 1, i & 1];
            1 - two_n[((1 - args[0]) << 2) | ((1 - args[1]) << 1) | (1 - args[2])]
        })
        .collect();
    let mis = alg
        .meet_irreducible_congruences(true)
        .map_err(|e| Error::NotANearlattice(e.to_string()))?;
    for theta in mis {
        let q = alg.quotient(&theta)?.algebra;
        let table = &q.op(n_op).ok_or_else(|| Error::UnknownSymbol(n_op.to_string()))?.table;
        if q.size() != 2 || (table.as_slice() != two_n && *table != swapped) {
            return Err(Error::NotANearlattice(format!(
                "quotient by {theta} is not isomorphic to 2_N"
            )));
        }
    }
    Ok(())
}

/// Meet-irreducible elements with the induced order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreduciblePoset {
    /// Elements of the algebra, ascending.
    pub members: Vec<usize>,
    /// `leq[i][j]` iff `members[i] ≤ members[j]`.
    pub leq: Vec<Vec<bool>>,
    /// `(upper, lower)` index pairs with `upper` covering `lower`.
    pub covers: Vec<(usize, usize)>,
}

impl IrreduciblePoset {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, element: usize) -> Option<usize> {
        self.members.iter().position(|&m| m == element)
    }

    /// Down-closure check for a subset given as a bitset over indices.
    pub fn is_down_set(&self, set: &FixedBitSet) -> bool {
        set.ones()
            .all(|i| (0..self.len()).all(|j| !self.leq[j][i] || set.contains(j)))
    }

    /// Elements of the algebra named by a subset of indices.
    pub fn elements(&self, set: &FixedBitSet) -> Vec<usize> {
        set.ones().map(|i| self.members[i]).collect()
    }

    pub fn subset(&self, elements: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        for &e in elements {
            if let Some(i) = self.index_of(e) {
                s.insert(i);
            }
        }
        s
    }

    /// Covers of the subposet induced on `q`.
    pub fn covers_within(&self, q: &FixedBitSet) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in q.ones() {
            for l in q.ones() {
                if u != l
                    && self.leq[l][u]
                    && !q.ones().any(|m| m != u && m != l && self.leq[l][m] && self.leq[m][u])
                {
                    out.push((u, l));
                }
            }
        }
        out
    }
}

pub fn meet_irreducible_elements(view: &NearlatticeView) -> IrreduciblePoset {
    let s = view.size;
    let mut reducible = vec![false; s];
    reducible[view.top] = true;
    for a in 0..s {
        for b in 0..s {
            if let Some(m) = view.meet(a, b) {
                if m != a && m != b {
                    reducible[m] = true;
                }
            }
        }
    }
    let members: Vec<usize> = (0..s).filter(|&x| !reducible[x]).collect();
    let leq: Vec<Vec<bool>> = members
        .iter()
        .map(|&x| members.iter().map(|&y| view.leq(x, y)).collect())
        .collect();
    let mut poset = IrreduciblePoset {
        members,
        leq,
        covers: Vec::new(),
    };
    let mut all = FixedBitSet::with_capacity(poset.len());
    all.insert_range(..);
    poset.covers = poset.covers_within(&all);
    poset
}

/// A view together with its irreducible poset and the σ embedding.
#[derive(Debug, Clone)]
pub struct Nearlattice {
    view: NearlatticeView,
    poset: IrreduciblePoset,
    sigmas: Vec<FixedBitSet>,
    sigma_index: HashMap<FixedBitSet, usize>,
}

impl Nearlattice {
    pub fn new(alg: &FiniteAlgebra, n_op: &str) -> Result<Self> {
        let view = NearlatticeView::new(alg, n_op)?;
        let poset = meet_irreducible_elements(&view);
        let sigmas: Vec<FixedBitSet> = (0..view.size)
            .map(|a| {
                let mut s = FixedBitSet::with_capacity(poset.len());
                for (i, &p) in poset.members.iter().enumerate() {
                    if !view.leq(a, p) {
                        s.insert(i);
                    }
                }
                s
            })
            .collect();
        let mut sigma_index = HashMap::with_capacity(sigmas.len());
        for (a, s) in sigmas.iter().enumerate() {
            if sigma_index.insert(s.clone(), a).is_some() {
                return Err(Error::NotANearlattice(format!(
                    "σ is not injective (element {a})"
                )));
            }
        }
        Ok(Nearlattice {
            view,
            poset,
            sigmas,
            sigma_index,
        })
    }

    pub fn view(&self) -> &NearlatticeView {
        &self.view
    }

    pub fn poset(&self) -> &IrreduciblePoset {
        &self.poset
    }

    pub fn sigma(&self, a: usize) -> &FixedBitSet {
        &self.sigmas[a]
    }

    /// The element `a` with `σ(a) = set`, if `set ∈ A^σ`.
    pub fn sigma_inverse(&self, set: &FixedBitSet) -> Option<usize> {
        self.sigma_index.get(set).copied()
    }

    fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.poset.len())
    }

    fn full_set(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// `F_θ = {p : θ ⊆ θ_p}` with `a θ_p b ⟺ (a ≤ p ⟺ b ≤ p)`.
    pub fn f_of_theta(&self, theta: &Partition) -> Result<FixedBitSet> {
        if theta.size() != self.view.size {
            return Err(Error::SizeMismatch {
                expected: self.view.size,
                found: theta.size(),
            });
        }
        let reps = theta.representatives();
        let mut f = self.empty_set();
        for (i, &p) in self.poset.members.iter().enumerate() {
            let compatible = (0..self.view.size).all(|a| {
                let r = reps[theta.label(a)];
                self.view.leq(a, p) == self.view.leq(r, p)
            });
            if compatible {
                f.insert(i);
            }
        }
        Ok(f)
    }

    /// `θ_F`: `a ~ b ⟺ σ(a) ∩ F = σ(b) ∩ F`.
    pub fn theta_of_f(&self, f: &FixedBitSet) -> Partition {
        let keys: Vec<FixedBitSet> = self
            .sigmas
            .iter()
            .map(|s| {
                let mut k = s.clone();
                k.intersect_with(f);
                k
            })
            .collect();
        Partition::from_labels(&keys.iter().collect::<Vec<_>>())
    }

    /// `s = ⋃ σ(a_i) ∩ F_{θ_i}`; requires `⋂θ_i = Δ`.
    pub fn canonical_s(&self, sys: &CongruenceSystem) -> Result<FixedBitSet> {
        let mut meet = Partition::total(self.view.size);
        for t in sys.thetas() {
            meet = meet.meet(t)?;
        }
        if !meet.is_identity() {
            return Err(Error::Precondition(
                "the congruences must intersect to the identity".into(),
            ));
        }
        let mut s = self.empty_set();
        for (t, &a) in sys.thetas().iter().zip(sys.targets()) {
            let mut part = self.sigmas[a].clone();
            part.intersect_with(&self.f_of_theta(t)?);
            s.union_with(&part);
        }
        Ok(s)
    }

    /// The solution `σ⁻¹(s)`, when `s ∈ A^σ`.
    pub fn solve_via_s(&self, sys: &CongruenceSystem) -> Result<Option<usize>> {
        Ok(self.sigma_inverse(&self.canonical_s(sys)?))
    }

    /// Down-sets maximal outside `A^σ`, sorted.
    pub fn fringe_elements(&self) -> Vec<FixedBitSet> {
        let mut found = BTreeSet::new();
        for sig in &self.sigmas {
            for p in sig.ones() {
                let mut b = sig.clone();
                b.set(p, false);
                if self.is_fringe(&b) {
                    found.insert(b.ones().collect::<Vec<_>>());
                }
            }
        }
        found.into_iter().map(|v| self.set_of(&v)).collect()
    }

    fn set_of(&self, idx: &[usize]) -> FixedBitSet {
        let mut s = self.empty_set();
        for &i in idx {
            s.insert(i);
        }
        s
    }

    /// A down-set outside `A^σ` all of whose one-step extensions lie in `A^σ`.
    pub fn is_fringe(&self, b: &FixedBitSet) -> bool {
        if !self.poset.is_down_set(b) || self.sigma_inverse(b).is_some() {
            return false;
        }
        let n = self.poset.len();
        (0..n)
            .filter(|&p| !b.contains(p))
            .filter(|&p| (0..n).all(|q| q == p || !self.poset.leq[q][p] || b.contains(q)))
            .all(|p| {
                let mut ext = b.clone();
                ext.insert(p);
                self.sigma_inverse(&ext).is_some()
            })
    }

    /// Some `a` with `b ∩ F = σ(a) ∩ F`.
    pub fn interpolant(&self, b: &FixedBitSet, f: &FixedBitSet) -> Option<usize> {
        let mut target = b.clone();
        target.intersect_with(f);
        self.sigmas.iter().position(|s| {
            let mut k = s.clone();
            k.intersect_with(f);
            k == target
        })
    }

    pub fn is_interpolable(&self, b: &FixedBitSet, f: &FixedBitSet) -> bool {
        self.interpolant(b, f).is_some()
    }

    /// Every down-set of the irreducible poset. Exponential; for tests and
    /// small posets only.
    pub fn all_down_sets(&self) -> Vec<FixedBitSet> {
        let n = self.poset.len();
        assert!(n <= 20, "down-set enumeration is exponential");
        (0..1u32 << n)
            .map(|mask| self.set_of(&(0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>()))
            .filter(|s| self.poset.is_down_set(s))
            .collect()
    }
}

/// Why a tuple failed the nearlattice criterion, in elements of the
/// quotient by `⋂θ_i` (classes named by their least member).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NearlatticeReason {
    /// `upper` covers `lower` in `P` but no `F_ℓ` contains both.
    Cover { upper: usize, lower: usize },
    /// A fringe element interpolable by every `F_ℓ`.
    Fringe { down_set: Vec<usize> },
}

impl std::fmt::Display for NearlatticeReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NearlatticeReason::Cover { upper, lower } => write!(
                f,
                "cover condition fails: {upper} covers {lower} and no F-set contains both"
            ),
            NearlatticeReason::Fringe { down_set } => {
                let body: Vec<String> = down_set.iter().map(|x| x.to_string()).collect();
                write!(
                    f,
                    "fringe condition fails: {{{}}} is interpolable by every F-set",
                    body.join(" ")
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearlatticeVerdict {
    pub is_cr: bool,
    pub reason: Option<NearlatticeReason>,
}

fn check_congruences(alg: &FiniteAlgebra, thetas: &[Partition]) -> Result<()> {
    check_same_universe(thetas)?;
    thetas.iter().try_for_each(|t| alg.check_congruence(t))
}

fn elements_of_classes(classes: &Partition, quotient_elems: &[usize]) -> Vec<usize> {
    let reps = classes.representatives();
    quotient_elems.iter().map(|&c| reps[c]).collect()
}

/// Reduces by `⋂θ_i`, then checks the cover and fringe conditions.
pub fn is_cr_tuple_nearlattice(
    alg: &FiniteAlgebra,
    n_op: &str,
    thetas: &[Partition],
) -> Result<NearlatticeVerdict> {
    check_congruences(alg, thetas)?;
    Nearlattice::new(alg, n_op)?;
    let mut delta = Partition::total(alg.size());
    for t in thetas {
        delta = delta.meet(t)?;
    }
    let q = alg.quotient(&alg.congruence(delta)?)?;
    let nl = Nearlattice::new(&q.algebra, n_op)
        .map_err(|e| Error::Internal(format!("quotient is not a nearlattice: {e}")))?;
    let fs = thetas
        .iter()
        .map(|t| nl.f_of_theta(&t.push_down(&q.classes)?))
        .collect::<Result<Vec<_>>>()?;
    let poset = nl.poset();
    let name = |i: usize| elements_of_classes(&q.classes, &[poset.members[i]])[0];

    for &(u, l) in &poset.covers {
        if !fs.iter().any(|f| f.contains(u) && f.contains(l)) {
            return Ok(NearlatticeVerdict {
                is_cr: false,
                reason: Some(NearlatticeReason::Cover {
                    upper: name(u),
                    lower: name(l),
                }),
            });
        }
    }
    for b in nl.fringe_elements() {
        if fs.iter().all(|f| nl.is_interpolable(&b, f)) {
            return Ok(NearlatticeVerdict {
                is_cr: false,
                reason: Some(NearlatticeReason::Fringe {
                    down_set: b.ones().map(name).collect(),
                }),
            });
        }
    }
    Ok(NearlatticeVerdict {
        is_cr: true,
        reason: None,
    })
}

/// Lattice case: with `Q = ⋃F_i`, covers inside `⟨Q, ≤⟩` must share an `F_ℓ`.
pub fn is_cr_tuple_distlattice(
    alg: &FiniteAlgebra,
    n_op: &str,
    thetas: &[Partition],
) -> Result<NearlatticeVerdict> {
    check_congruences(alg, thetas)?;
    let nl = Nearlattice::new(alg, n_op)?;
    if !nl.view().is_lattice() {
        return Err(Error::Precondition("meet is not total: not a lattice".into()));
    }
    let fs = thetas
        .iter()
        .map(|t| nl.f_of_theta(t))
        .collect::<Result<Vec<_>>>()?;
    let mut q = nl.empty_set();
    for f in &fs {
        q.union_with(f);
    }
    for (u, l) in nl.poset().covers_within(&q) {
        if !fs.iter().any(|f| f.contains(u) && f.contains(l)) {
            return Ok(NearlatticeVerdict {
                is_cr: false,
                reason: Some(NearlatticeReason::Cover {
                    upper: nl.poset().members[u],
                    lower: nl.poset().members[l],
                }),
            });
        }
    }
    Ok(NearlatticeVerdict {
        is_cr: true,
        reason: None,
    })
}

/// Tarski case: every `Q`-fringe element must fail to be `F_ℓ`-interpolable
/// for some `ℓ`. The caller certifies that `alg` is a Tarski algebra.
pub fn is_cr_tuple_tarski(
    alg: &FiniteAlgebra,
    n_op: &str,
    thetas: &[Partition],
    enum_budget: u64,
) -> Result<NearlatticeVerdict> {
    check_congruences(alg, thetas)?;
    let nl = Nearlattice::new(alg, n_op)?;
    let fs = thetas
        .iter()
        .map(|t| nl.f_of_theta(t))
        .collect::<Result<Vec<_>>>()?;
    let mut q = nl.empty_set();
    for f in &fs {
        q.union_with(f);
    }
    let free: Vec<usize> = q.ones().collect();
    let total = 1u64.checked_shl(free.len() as u32).unwrap_or(u64::MAX);
    if free.len() >= 64 || total > enum_budget {
        return Err(Error::BudgetExceeded {
            what: "down-set",
            limit: enum_budget,
            explored: 0,
        });
    }
    let mut forced = nl.full_set();
    forced.difference_with(&q);
    let outside: Vec<FixedBitSet> = (0..total)
        .map(|mask| {
            let mut d = forced.clone();
            for (bit, &i) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    d.insert(i);
                }
            }
            d
        })
        .filter(|d| nl.poset().is_down_set(d) && nl.sigma_inverse(d).is_none())
        .collect();
    for b in &outside {
        let maximal = !outside.iter().any(|c| c != b && b.is_subset(c));
        if maximal && fs.iter().all(|f| nl.is_interpolable(b, f)) {
            return Ok(NearlatticeVerdict {
                is_cr: false,
                reason: Some(NearlatticeReason::Fringe {
                    down_set: nl.poset().elements(b),
                }),
            });
        }
    }
    Ok(NearlatticeVerdict {
        is_cr: true,
        reason: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::generic::{brute_force_is_cr_tuple, make_system, solve_system};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn chain3() -> FiniteAlgebra {
        fixtures::lattice_with_n(&fixtures::chain_lattice(3))
    }

    fn p(labels: &[usize]) -> Partition {
        Partition::from_labels(labels)
    }

    fn cons(alg: &FiniteAlgebra) -> Vec<Partition> {
        alg.all_congruences()
            .unwrap()
            .into_iter()
            .map(|c| c.into_partition())
            .collect()
    }

    #[test]
    fn view_examples() {
        let v = NearlatticeView::new(&chain3(), "n").unwrap();
        assert_eq!(v.top(), 2);
        assert!(v.is_lattice());

        let f = fixtures::fork();
        let v = NearlatticeView::new(&f, "n").unwrap();
        assert!(!v.leq(0, 1) && !v.leq(1, 0));
        assert_eq!(v.meet(0, 1), None);
        assert_eq!(v.top(), 2);

        let proj = fixtures::two_element("n", 3, |a| a[0]);
        assert!(matches!(NearlatticeView::new(&proj, "n"), Err(Error::NotANearlattice(_))));
    }

    #[test]
    fn membership_check() {
        verify_membership(&chain3(), "n").unwrap();
        verify_membership(&fixtures::fork(), "n").unwrap();
        let three = fixtures::lattice_with_n(&fixtures::boolean_lattice(2));
        verify_membership(&three, "n").unwrap();
    }

    #[test]
    fn irreducible_examples() {
        let nl = Nearlattice::new(&chain3(), "n").unwrap();
        assert_eq!(nl.poset().members, vec![0, 1]);
        assert_eq!(nl.poset().covers, vec![(1, 0)]);

        let b2 = Nearlattice::new(&fixtures::lattice_with_n(&fixtures::boolean_lattice(2)), "n").unwrap();
        assert_eq!(b2.poset().members, vec![1, 2]);
        assert!(b2.poset().covers.is_empty());

        let fork = Nearlattice::new(&fixtures::fork(), "n").unwrap();
        assert_eq!(fork.poset().members, vec![0, 1]);
        assert!(fork.poset().covers.is_empty());
    }

    #[test]
    fn sigma_examples() {
        let nl = Nearlattice::new(&chain3(), "n").unwrap();
        let e = |a| nl.poset().elements(nl.sigma(a));
        assert_eq!(e(0), Vec::<usize>::new());
        assert_eq!(e(1), vec![0]);
        assert_eq!(e(2), vec![0, 1]);

        let fork = Nearlattice::new(&fixtures::fork(), "n").unwrap();
        let e = |a| fork.poset().elements(fork.sigma(a));
        assert_eq!(e(0), vec![1]);
        assert_eq!(e(1), vec![0]);
        assert_eq!(e(2), vec![0, 1]);
    }

    #[test]
    fn f_of_theta_examples() {
        let nl = Nearlattice::new(&chain3(), "n").unwrap();
        let f = nl.f_of_theta(&p(&[0, 1, 1])).unwrap();
        assert_eq!(nl.poset().elements(&f), vec![0]);
        assert_eq!(nl.f_of_theta(&Partition::identity(3)).unwrap().count_ones(..), 2);
        assert_eq!(nl.f_of_theta(&Partition::total(3)).unwrap().count_ones(..), 0);
        assert_eq!(nl.theta_of_f(&f), p(&[0, 1, 1]));
    }

    #[test]
    fn canonical_s_examples() {
        let nl = Nearlattice::new(&chain3(), "n").unwrap();
        let th = vec![p(&[0, 1, 1]), p(&[0, 0, 1])];
        let sys = make_system(th.clone(), vec![0, 2]).unwrap();
        let s = nl.canonical_s(&sys).unwrap();
        assert_eq!(nl.poset().elements(&s), vec![1]);
        assert_eq!(nl.solve_via_s(&sys).unwrap(), None);

        let sys = make_system(th.clone(), vec![1, 0]).unwrap();
        assert_eq!(nl.solve_via_s(&sys).unwrap(), Some(1));

        let sys = make_system(th, vec![2, 2]).unwrap();
        assert_eq!(nl.solve_via_s(&sys).unwrap(), Some(2));

        let sys = make_system(vec![p(&[0, 1, 1])], vec![0]).unwrap();
        assert!(matches!(nl.canonical_s(&sys), Err(Error::Precondition(_))));
    }

    #[test]
    fn fringe_examples() {
        let nl = Nearlattice::new(&chain3(), "n").unwrap();
        assert!(nl.fringe_elements().is_empty());
        let fork = Nearlattice::new(&fixtures::fork(), "n").unwrap();
        let fr = fork.fringe_elements();
        assert_eq!(fr.len(), 1);
        assert_eq!(fr[0].count_ones(..), 0);
        let one = FiniteAlgebra::new(1, vec![crate::Operation::new("n", 3, vec![0])]).unwrap();
        assert!(Nearlattice::new(&one, "n").unwrap().fringe_elements().is_empty());
    }

    #[test]
    fn interpolable_examples() {
        let fork = Nearlattice::new(&fixtures::fork(), "n").unwrap();
        let empty = fork.poset().subset(&[]);
        let fa = fork.poset().subset(&[0]);
        assert_eq!(fork.interpolant(&empty, &fa), Some(0));
        assert!(fork.is_interpolable(&fork.poset().subset(&[0, 1]), &empty));
        for a in 0..3 {
            let all = fork.poset().subset(&[0, 1]);
            assert!(fork.is_interpolable(fork.sigma(a), &all));
        }
    }

    #[test]
    fn decider_examples() {
        let c3 = chain3();
        let v = is_cr_tuple_nearlattice(&c3, "n", &[p(&[0, 1, 1]), p(&[0, 0, 1])]).unwrap();
        assert!(!v.is_cr);
        assert_eq!(v.reason, Some(NearlatticeReason::Cover { upper: 1, lower: 0 }));

        let fork = fixtures::fork();
        // θ_a: {a} | {b, top}; θ_b: {b} | {a, top}.
        let ta = p(&[0, 1, 1]);
        let tb = p(&[0, 1, 0]);
        let v = is_cr_tuple_nearlattice(&fork, "n", &[ta.clone(), tb.clone()]).unwrap();
        assert!(!v.is_cr);
        assert_eq!(v.reason, Some(NearlatticeReason::Fringe { down_set: vec![] }));
        assert!(!brute_force_is_cr_tuple(&[ta.clone(), tb.clone()]).unwrap().is_cr);

        for alg in [c3.clone(), fork.clone()] {
            for t in cons(&alg) {
                let th = vec![t, Partition::identity(alg.size())];
                assert!(is_cr_tuple_nearlattice(&alg, "n", &th).unwrap().is_cr);
            }
        }
        assert!(is_cr_tuple_tarski(&fork, "n", &[ta, tb], DEFAULT_TARSKI_BUDGET).map(|v| !v.is_cr).unwrap());
    }

    #[test]
    fn distlattice_examples() {
        let c3 = chain3();
        assert!(!is_cr_tuple_distlattice(&c3, "n", &[p(&[0, 1, 1]), p(&[0, 0, 1])]).unwrap().is_cr);
        let b2 = fixtures::lattice_with_n(&fixtures::boolean_lattice(2));
        let kernels = [p(&[0, 0, 1, 1]), p(&[0, 1, 0, 1])];
        assert!(is_cr_tuple_distlattice(&b2, "n", &kernels).unwrap().is_cr);
        for t in cons(&c3) {
            assert!(is_cr_tuple_distlattice(&c3, "n", &[t]).unwrap().is_cr);
        }
        assert!(matches!(
            is_cr_tuple_distlattice(&fixtures::fork(), "n", &[p(&[0, 1, 1])]),
            Err(Error::Precondition(_))
        ));
    }

    /// Structural facts about σ, A^σ and F, checked on every fixture.
    fn structural_checks(alg: &FiniteAlgebra) {
        let nl = Nearlattice::new(alg, "n").unwrap();
        let n = nl.poset().len();
        let downs = nl.all_down_sets();
        // A^σ is an up-set of the down-set lattice, with empty intersection.
        for d in &downs {
            if nl.sigma_inverse(d).is_some() {
                for e in &downs {
                    if d.is_subset(e) {
                        assert!(nl.sigma_inverse(e).is_some());
                    }
                }
            }
        }
        let mut inter = nl.full_set();
        for a in 0..alg.size() {
            inter.intersect_with(nl.sigma(a));
            assert!(nl.poset().is_down_set(nl.sigma(a)));
            for b in 0..alg.size() {
                assert_eq!(nl.view().leq(a, b), nl.sigma(a).is_subset(nl.sigma(b)));
            }
        }
        assert_eq!(inter.count_ones(..), 0);

        // Fringe elements against the definition.
        let outside: Vec<&FixedBitSet> = downs.iter().filter(|d| nl.sigma_inverse(d).is_none()).collect();
        let mut naive: Vec<Vec<usize>> = outside
            .iter()
            .filter(|b| !outside.iter().any(|c| c != *b && b.is_subset(c)))
            .map(|b| b.ones().collect())
            .collect();
        naive.sort();
        let fast: Vec<Vec<usize>> = nl.fringe_elements().iter().map(|b| b.ones().collect()).collect();
        assert_eq!(fast, naive);

        // θ ↦ F_θ is an order-reversing bijection onto subsets of P.
        if n <= 4 {
            let cs = cons(alg);
            assert_eq!(cs.len(), 1 << n);
            let fs: Vec<FixedBitSet> = cs.iter().map(|t| nl.f_of_theta(t).unwrap()).collect();
            for (t, f) in cs.iter().zip(&fs) {
                assert_eq!(&nl.theta_of_f(f), t);
            }
            for (i, x) in cs.iter().enumerate() {
                for (j, y) in cs.iter().enumerate() {
                    assert_eq!(x.is_finer_than(y), fs[j].is_subset(&fs[i]));
                    let mut both = fs[i].clone();
                    both.intersect_with(&fs[j]);
                    assert_eq!(nl.theta_of_f(&both), x.join(y).unwrap());
                }
            }
        }
    }

    #[test]
    fn structure_on_fixtures() {
        structural_checks(&chain3());
        structural_checks(&fixtures::fork());
        structural_checks(&fixtures::lattice_with_n(&fixtures::boolean_lattice(2)));
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..25 {
            structural_checks(&fixtures::random_two_n_subalgebra(&mut rng, 3));
            structural_checks(&fixtures::random_distributive_lattice(&mut rng, 10));
        }
    }

    #[test]
    fn canonical_s_is_unique_solution_of_the_f_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let alg = fixtures::random_two_n_subalgebra(&mut rng, 3);
            let nl = Nearlattice::new(&alg, "n").unwrap();
            let n = nl.poset().len();
            if n > 4 {
                continue;
            }
            let cs = cons(&alg);
            let k = rng.gen_range(1..=3);
            let mut th: Vec<Partition> = (0..k).map(|_| fixtures::pick(&mut rng, &cs).clone()).collect();
            th.push(Partition::identity(alg.size()));
            let fs: Vec<FixedBitSet> = th.iter().map(|t| nl.f_of_theta(t).unwrap()).collect();
            for _ in 0..10 {
                let targets: Vec<usize> = th.iter().map(|_| rng.gen_range(0..alg.size())).collect();
                let Ok(sys) = make_system(th.clone(), targets.clone()) else { continue };
                let s = nl.canonical_s(&sys).unwrap();
                let matching: Vec<u32> = (0..1u32 << n)
                    .filter(|mask| {
                        let x = nl.set_of(&(0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
                        fs.iter().zip(&targets).all(|(f, &a)| {
                            let mut l = x.clone();
                            l.intersect_with(f);
                            let mut r = nl.sigma(a).clone();
                            r.intersect_with(f);
                            l == r
                        })
                    })
                    .collect();
                assert_eq!(matching.len(), 1);
                let unique: Vec<usize> = (0..n).filter(|i| matching[0] >> i & 1 == 1).collect();
                assert_eq!(s, nl.set_of(&unique));
                assert_eq!(nl.solve_via_s(&sys).unwrap().is_some(), solve_system(&sys).is_some());
            }
        }
    }

    #[test]
    fn oracle_agreement_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for round in 0..80 {
            let alg = if round % 2 == 0 {
                fixtures::random_two_n_subalgebra(&mut rng, 3)
            } else {
                fixtures::random_distributive_lattice(&mut rng, 10)
            };
            let cs = cons(&alg);
            let k = rng.gen_range(1..=4);
            let th: Vec<Partition> = (0..k).map(|_| fixtures::pick(&mut rng, &cs).clone()).collect();
            let bf = brute_force_is_cr_tuple(&th).unwrap().is_cr;
            assert_eq!(is_cr_tuple_nearlattice(&alg, "n", &th).unwrap().is_cr, bf);
            if NearlatticeView::new(&alg, "n").unwrap().is_lattice() {
                assert_eq!(is_cr_tuple_distlattice(&alg, "n", &th).unwrap().is_cr, bf);
            }
        }
    }

    #[test]
    fn tarski_corollary_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..40 {
            let alg = fixtures::random_upset_tarski(&mut rng, 3);
            let cs = cons(&alg);
            let k = rng.gen_range(1..=3);
            let th: Vec<Partition> = (0..k).map(|_| fixtures::pick(&mut rng, &cs).clone()).collect();
            let thm = is_cr_tuple_nearlattice(&alg, "n", &th).unwrap().is_cr;
            assert_eq!(is_cr_tuple_tarski(&alg, "n", &th, DEFAULT_TARSKI_BUDGET).unwrap().is_cr, thm);
            assert_eq!(brute_force_is_cr_tuple(&th).unwrap().is_cr, thm);
        }
    }
}

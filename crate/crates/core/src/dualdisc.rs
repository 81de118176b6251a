//! Crosses of finite products and the CR test for members of dual
//! discriminator varieties.
//!
//! A cross `⟨i a | j b⟩` of `A_0 × … × A_{n-1}` is the set of tuples with
//! `x_i = a` or `x_j = b`. Indices are 0-based and stored with `i < j`.
//! The cross layer is exact combinatorics and doubles as an oracle for the
//! decider.

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::{FiniteAlgebra, SubdirectRep};
use crate::error::{Error, Result};
use crate::generic::check_same_universe;
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cross {
    pub i: usize,
    pub a: usize,
    pub j: usize,
    pub b: usize,
}

impl Cross {
    /// Normalizes so that `i < j`; fails on equal indices or out-of-range
    /// components for the given shape.
    pub fn new(shape: &[usize], i: usize, a: usize, j: usize, b: usize) -> Result<Cross> {
        if i == j {
            return Err(Error::Parameters(format!("cross indices coincide ({i})")));
        }
        for (idx, e) in [(i, a), (j, b)] {
            let size = *shape.get(idx).ok_or(Error::ElementOutOfRange {
                element: idx,
                size: shape.len(),
            })?;
            if e >= size {
                return Err(Error::ElementOutOfRange { element: e, size });
            }
        }
        Ok(if i < j {
            Cross { i, a, j, b }
        } else {
            Cross { i: j, a: b, j: i, b: a }
        })
    }

    /// Membership; `point` must have more than `j` coordinates.
    pub fn contains(&self, point: &[usize]) -> bool {
        point[self.i] == self.a || point[self.j] == self.b
    }

    /// The element this cross pins at index `k`, if `k` is one of its indices.
    pub fn at(&self, k: usize) -> Option<usize> {
        if k == self.i {
            Some(self.a)
        } else if k == self.j {
            Some(self.b)
        } else {
            None
        }
    }
}

impl fmt::Display for Cross {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}:{}|{}:{}>", self.i, self.a, self.j, self.b)
    }
}

/// Crosses over one product shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossSet {
    pub shape: Vec<usize>,
    pub crosses: BTreeSet<Cross>,
}

impl CrossSet {
    pub fn new(shape: Vec<usize>) -> Self {
        CrossSet {
            shape,
            crosses: BTreeSet::new(),
        }
    }

    pub fn from_crosses(shape: Vec<usize>, crosses: impl IntoIterator<Item = Cross>) -> Result<Self> {
        let mut set = CrossSet::new(shape);
        for c in crosses {
            let c = Cross::new(&set.shape, c.i, c.a, c.j, c.b)?;
            set.crosses.insert(c);
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.crosses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crosses.is_empty()
    }

    pub fn contains(&self, c: &Cross) -> bool {
        self.crosses.contains(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cross> {
        self.crosses.iter()
    }

    /// Every cross of the shape.
    pub fn all(shape: &[usize]) -> CrossSet {
        let mut set = CrossSet::new(shape.to_vec());
        for i in 0..shape.len() {
            for j in i + 1..shape.len() {
                for a in 0..shape[i] {
                    for b in 0..shape[j] {
                        set.crosses.insert(Cross { i, a, j, b });
                    }
                }
            }
        }
        set
    }

    /// Points of the product lying in every member (the whole product when empty).
    pub fn intersection(&self) -> BTreeSet<Vec<usize>> {
        product_points(&self.shape)
            .into_iter()
            .filter(|p| self.crosses.iter().all(|c| c.contains(p)))
            .collect()
    }
}

/// All tuples of a product shape in lexicographic order.
pub fn product_points(shape: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in shape {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..s).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn cross_contains(shape: &[usize], c: &Cross, point: &[usize]) -> Result<bool> {
    if point.len() != shape.len() {
        return Err(Error::SizeMismatch {
            expected: shape.len(),
            found: point.len(),
        });
    }
    if c.j >= shape.len() {
        return Err(Error::ElementOutOfRange {
            element: c.j,
            size: shape.len(),
        });
    }
    for (&x, &s) in point.iter().zip(shape) {
        if x >= s {
            return Err(Error::ElementOutOfRange { element: x, size: s });
        }
    }
    Ok(c.contains(point))
}

/// `c ∘ d` when they share exactly one index with different elements there.
pub fn compose_crosses(c: &Cross, d: &Cross) -> Option<Cross> {
    let shared: Vec<usize> = [c.i, c.j]
        .into_iter()
        .filter(|&k| k == d.i || k == d.j)
        .collect();
    let [k] = shared[..] else {
        return None;
    };
    if c.at(k) == d.at(k) {
        return None;
    }
    let (ci, ca) = if c.i == k { (c.j, c.b) } else { (c.i, c.a) };
    let (dj, db) = if d.i == k { (d.j, d.b) } else { (d.i, d.a) };
    Some(if ci < dj {
        Cross { i: ci, a: ca, j: dj, b: db }
    } else {
        Cross { i: dj, a: db, j: ci, b: ca }
    })
}

/// Smallest superset closed under composition of compatible members.
pub fn closure(cs: &CrossSet) -> CrossSet {
    let mut all: BTreeSet<Cross> = cs.crosses.clone();
    let mut frontier: Vec<Cross> = all.iter().copied().collect();
    while let Some(c) = frontier.pop() {
        let current: Vec<Cross> = all.iter().copied().collect();
        for d in current {
            if let Some(e) = compose_crosses(&c, &d) {
                if all.insert(e) {
                    frontier.push(e);
                }
            }
        }
    }
    CrossSet {
        shape: cs.shape.clone(),
        crosses: all,
    }
}

/// Members of `cs` that are not a composite of two compatible members of its closure.
pub fn irreducible_crosses(cs: &CrossSet) -> CrossSet {
    let closed: Vec<Cross> = closure(cs).crosses.into_iter().collect();
    let mut reducible = BTreeSet::new();
    for (x, c) in closed.iter().enumerate() {
        for d in &closed[x + 1..] {
            if let Some(e) = compose_crosses(c, d) {
                reducible.insert(e);
            }
        }
    }
    CrossSet {
        shape: cs.shape.clone(),
        crosses: cs.crosses.difference(&reducible).copied().collect(),
    }
}

/// The crosses containing the image of `rep`, read off its pairwise projections.
///
/// A projection that is neither the full product nor a cross cannot come
/// from an irredundant subdirect product with a common dual discriminator
/// term; it is reported as [`Error::NotDualDiscriminator`].
pub fn crosses_containing(rep: &SubdirectRep) -> Result<CrossSet> {
    let shape = rep.factor_sizes.clone();
    let m = shape.len();
    let mut set = CrossSet::new(shape.clone());
    for i in 0..m {
        for j in i + 1..m {
            let mut seen = vec![false; shape[i] * shape[j]];
            for t in &rep.elements {
                seen[t[i] * shape[j] + t[j]] = true;
            }
            let count = seen.iter().filter(|&&s| s).count();
            if count == seen.len() {
                continue;
            }
            let mut found = None;
            'search: for a in 0..shape[i] {
                for b in 0..shape[j] {
                    let is_cross = (0..shape[i]).all(|x| {
                        (0..shape[j]).all(|y| seen[x * shape[j] + y] == (x == a || y == b))
                    });
                    if is_cross {
                        found = Some(Cross { i, a, j, b });
                        break 'search;
                    }
                }
            }
            match found {
                Some(c) => {
                    set.crosses.insert(c);
                }
                None => return Err(Error::NotDualDiscriminator { i, j }),
            }
        }
    }
    Ok(set)
}

/// Meet-irreducible congruences above `⋂θ_i`, in canonical partition order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaSet {
    pub members: Vec<Partition>,
}

impl SigmaSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn meet_all(n: usize, thetas: &[Partition]) -> Result<Partition> {
    let mut delta = Partition::total(n);
    for t in thetas {
        delta = delta.meet(t)?;
    }
    Ok(delta)
}

pub fn sigma_above(alg: &FiniteAlgebra, thetas: &[Partition]) -> Result<SigmaSet> {
    check_same_universe(thetas)?;
    for t in thetas {
        alg.check_congruence(t)?;
    }
    let delta = meet_all(alg.size(), thetas)?;
    let members = alg
        .meet_irreducible_congruences(true)?
        .into_iter()
        .map(|c| c.into_partition())
        .filter(|p| delta.is_finer_than(p))
        .collect();
    Ok(SigmaSet { members })
}

/// The first pair of `Σ` failing all three conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualDiscReason {
    pub lambda: Partition,
    pub mu: Partition,
}

impl fmt::Display for DualDiscReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "meet-irreducible congruences {} and {} do not permute, no third member of Sigma lies in their product, and no theta lies below their meet",
            self.lambda, self.mu
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualDiscVerdict {
    pub is_cr: bool,
    pub reason: Option<DualDiscReason>,
}

/// CR test for an algebra in a dual discriminator variety.
///
/// Membership in such a variety is the caller's responsibility; a
/// non-distributive congruence lattice is caught when it is small enough to
/// enumerate and reported as a precondition error.
pub fn is_cr_tuple_dualdisc(alg: &FiniteAlgebra, thetas: &[Partition]) -> Result<DualDiscVerdict> {
    let sigma = sigma_above(alg, thetas)?.members;
    for (x, lambda) in sigma.iter().enumerate() {
        for mu in &sigma[x + 1..] {
            let comp = lambda.compose(mu)?;
            if comp.is_symmetric() {
                continue;
            }
            let third = sigma
                .iter()
                .any(|s| s != lambda && s != mu && s.to_relation().is_subset(&comp));
            if third {
                continue;
            }
            let both = lambda.meet(mu)?;
            if thetas.iter().any(|t| t.is_finer_than(&both)) {
                continue;
            }
            return Ok(DualDiscVerdict {
                is_cr: false,
                reason: Some(DualDiscReason {
                    lambda: lambda.clone(),
                    mu: mu.clone(),
                }),
            });
        }
    }
    Ok(DualDiscVerdict {
        is_cr: true,
        reason: None,
    })
}

//! Finite algebras given by operation tables, and the congruence machinery
//! built on them: compatibility checks, principal congruences, the full
//! congruence lattice, meet-irreducible congruences, quotients and subdirect
//! embeddings.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use crate::error::{CongruenceViolation, Error, Result};
use crate::partition::{Partition, UnionFind};

/// Upper bound on the number of congruences `all_congruences` will build.
pub const DEFAULT_CONGRUENCE_BUDGET: usize = 100_000;

/// `meet_irreducible_congruences(verify = true)` only cross-checks lattices up to this size.
pub const NAIVE_CROSS_CHECK_LIMIT: usize = 2_000;

/// Cap on tabulated translation entries used to speed up principal congruences.
pub const TRANSLATION_TABLE_LIMIT: usize = 1 << 22;

/// A named finitary operation. The table is indexed by argument tuples in
/// lexicographic order, first argument most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

impl Operation {
    pub fn new(name: impl Into<String>, arity: usize, table: Vec<usize>) -> Self {
        Operation {
            name: name.into(),
            arity,
            table,
        }
    }

    /// Tabulates `f` over all argument tuples of `0..n`.
    pub fn from_fn(
        name: impl Into<String>,
        arity: usize,
        n: usize,
        f: impl Fn(&[usize]) -> usize,
    ) -> Self {
        let mut table = Vec::with_capacity(n.pow(arity as u32));
        let mut args = vec![0usize; arity];
        for idx in 0..n.pow(arity as u32) {
            decode_index(idx, n, &mut args);
            table.push(f(&args));
        }
        Operation::new(name, arity, table)
    }

    pub fn constant(name: impl Into<String>, value: usize) -> Self {
        Operation::new(name, 0, vec![value])
    }
}

/// Writes the argument tuple of table position `idx` into `args`.
pub(crate) fn decode_index(mut idx: usize, n: usize, args: &mut [usize]) {
    for slot in args.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
}

pub(crate) fn encode_index(args: &[usize], n: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

/// Universe `0..size` with an ordered list of operations.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    ops: Vec<Operation>,
    fingerprint: u64,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.ops == other.ops
    }
}

impl Eq for FiniteAlgebra {}

impl FiniteAlgebra {
    pub fn new(size: usize, ops: Vec<Operation>) -> Result<Self> {
        Self::with_name("A", size, ops)
    }

    pub fn with_name(name: impl Into<String>, size: usize, ops: Vec<Operation>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidAlgebra("empty universe".into()));
        }
        let mut names = HashSet::new();
        for op in &ops {
            if !names.insert(op.name.as_str()) {
                return Err(Error::InvalidAlgebra(format!("duplicate operation `{}`", op.name)));
            }
            let expected = size
                .checked_pow(op.arity as u32)
                .ok_or_else(|| Error::InvalidAlgebra(format!("table of `{}` too large", op.name)))?;
            if op.table.len() != expected {
                return Err(Error::InvalidAlgebra(format!(
                    "operation `{}` of arity {} needs {} entries, found {}",
                    op.name,
                    op.arity,
                    expected,
                    op.table.len()
                )));
            }
            if let Some(&bad) = op.table.iter().find(|&&v| v >= size) {
                return Err(Error::InvalidAlgebra(format!(
                    "operation `{}` has value {bad} outside 0..{size}",
                    op.name
                )));
            }
        }
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        size.hash(&mut hasher);
        ops.hash(&mut hasher);
        Ok(FiniteAlgebra {
            name: name.into(),
            size,
            ops,
            fingerprint: hasher.finish(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn op(&self, name: &str) -> Option<&Operation> {
        self.ops.iter().find(|o| o.name == name)
    }

    /// Identity token used to tie congruences to the algebra that certified them.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn apply(&self, name: &str, args: &[usize]) -> Result<usize> {
        let op = self
            .op(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        if op.arity != args.len() {
            return Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected: op.arity,
                found: args.len(),
            });
        }
        for &a in args {
            self.check_element(a)?;
        }
        Ok(op.table[encode_index(args, self.size)])
    }

    pub fn check_element(&self, a: usize) -> Result<()> {
        if a >= self.size {
            return Err(Error::ElementOutOfRange {
                element: a,
                size: self.size,
            });
        }
        Ok(())
    }

    /// Same universe and operations plus a new nullary operation.
    pub fn with_constant(&self, name: &str, value: usize) -> Result<FiniteAlgebra> {
        self.check_element(value)?;
        let mut ops = self.ops.clone();
        ops.push(Operation::constant(name, value));
        FiniteAlgebra::with_name(self.name.clone(), self.size, ops)
    }

    /// Direct product; both factors must have the same signature. Element
    /// `(a, b)` is numbered `a * other.size + b`.
    pub fn product(&self, other: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        if self.ops.len() != other.ops.len()
            || self
                .ops
                .iter()
                .zip(&other.ops)
                .any(|(f, g)| f.name != g.name || f.arity != g.arity)
        {
            return Err(Error::InvalidAlgebra("product of different signatures".into()));
        }
        let m = other.size;
        let n = self.size * m;
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(f, g)| {
                Operation::from_fn(f.name.clone(), f.arity, n, |args| {
                    let left: Vec<usize> = args.iter().map(|&x| x / m).collect();
                    let right: Vec<usize> = args.iter().map(|&x| x % m).collect();
                    f.table[encode_index(&left, self.size)] * m
                        + g.table[encode_index(&right, m)]
                })
            })
            .collect();
        FiniteAlgebra::with_name(format!("{}x{}", self.name, other.name), n, ops)
    }

    /// Least subuniverse containing `generators` (and all constants), ascending.
    pub fn subuniverse(&self, generators: &[usize]) -> Result<Vec<usize>> {
        let mut inside = vec![false; self.size];
        let mut members = Vec::new();
        for &g in generators {
            self.check_element(g)?;
            if !inside[g] {
                inside[g] = true;
                members.push(g);
            }
        }
        for op in self.ops.iter().filter(|o| o.arity == 0) {
            if !inside[op.table[0]] {
                inside[op.table[0]] = true;
                members.push(op.table[0]);
            }
        }
        loop {
            let before = members.len();
            for op in self.ops.iter().filter(|o| o.arity > 0) {
                let current = members.clone();
                let total = current.len().pow(op.arity as u32);
                let mut pick = vec![0; op.arity];
                let mut args = vec![0; op.arity];
                for idx in 0..total {
                    decode_index(idx, current.len(), &mut pick);
                    for (a, &p) in args.iter_mut().zip(&pick) {
                        *a = current[p];
                    }
                    let v = op.table[encode_index(&args, self.size)];
                    if !inside[v] {
                        inside[v] = true;
                        members.push(v);
                    }
                }
            }
            if members.len() == before {
                break;
            }
        }
        members.sort_unstable();
        Ok(members)
    }

    /// Subalgebra on a closed subset, renumbered in ascending order.
    pub fn induced_subalgebra(&self, elements: &[usize]) -> Result<FiniteAlgebra> {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let index: HashMap<usize, usize> = sorted.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let m = sorted.len();
        let mut ops = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let mut orig = vec![0; op.arity];
            let mut table = Vec::with_capacity(m.pow(op.arity as u32));
            let mut args = vec![0; op.arity];
            for idx in 0..m.pow(op.arity as u32) {
                decode_index(idx, m, &mut args);
                for (o, &a) in orig.iter_mut().zip(&args) {
                    *o = sorted[a];
                }
                let v = op.table[encode_index(&orig, self.size)];
                let Some(&j) = index.get(&v) else {
                    return Err(Error::Precondition(format!(
                        "subset not closed under `{}`",
                        op.name
                    )));
                };
                table.push(j);
            }
            ops.push(Operation::new(op.name.clone(), op.arity, table));
        }
        FiniteAlgebra::with_name(format!("sub({})", self.name), m, ops)
    }

    fn check_partition_size(&self, part: &Partition) -> Result<()> {
        if part.size() != self.size {
            return Err(Error::SizeMismatch {
                expected: self.size,
                found: part.size(),
            });
        }
        Ok(())
    }

    /// Checks compatibility and reports the first violation found.
    ///
    /// Changing one argument at a time from a block representative to another
    /// member of the block is enough: transitivity covers the rest.
    pub fn check_congruence(&self, part: &Partition) -> Result<()> {
        self.check_partition_size(part)?;
        let n = self.size;
        let reps = part.representatives();
        for op in self.ops.iter().filter(|o| o.arity > 0) {
            let r = op.arity;
            for pos in 0..r {
                let stride = n.pow((r - 1 - pos) as u32);
                for high in 0..n.pow(pos as u32) {
                    for low in 0..stride {
                        let base = high * stride * n + low;
                        for x in 0..n {
                            let rep = reps[part.label(x)];
                            if rep == x {
                                continue;
                            }
                            let u = op.table[base + rep * stride];
                            let v = op.table[base + x * stride];
                            if !part.related(u, v) {
                                let mut left = vec![0; r];
                                decode_index(base + rep * stride, n, &mut left);
                                let mut right = left.clone();
                                right[pos] = x;
                                return Err(Error::NotACongruence(CongruenceViolation {
                                    op: op.name.clone(),
                                    left,
                                    right,
                                    images: (u, v),
                                }));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_congruence(&self, part: &Partition) -> Result<bool> {
        match self.check_congruence(part) {
            Ok(()) => Ok(true),
            Err(Error::NotACongruence(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Certifies `part` as a congruence of this algebra.
    pub fn congruence(&self, part: Partition) -> Result<Congruence> {
        self.check_congruence(&part)?;
        Ok(Congruence {
            partition: part,
            algebra: self.fingerprint,
        })
    }

    pub fn identity_congruence(&self) -> Congruence {
        Congruence {
            partition: Partition::identity(self.size),
            algebra: self.fingerprint,
        }
    }

    pub fn total_congruence(&self) -> Congruence {
        Congruence {
            partition: Partition::total(self.size),
            algebra: self.fingerprint,
        }
    }

    /// Least congruence containing every pair in `pairs`, by union-find
    /// closure under basic translations.
    pub fn generated_congruence(&self, pairs: &[(usize, usize)]) -> Result<Congruence> {
        for &(a, b) in pairs {
            self.check_element(a)?;
            self.check_element(b)?;
        }
        let n = self.size;
        let mut uf = UnionFind::new(n);
        let mut work: Vec<(usize, usize)> = pairs.to_vec();
        while let Some((x, y)) = work.pop() {
            if !uf.union(x, y) {
                continue;
            }
            for op in self.ops.iter().filter(|o| o.arity > 0) {
                let r = op.arity;
                for pos in 0..r {
                    let stride = n.pow((r - 1 - pos) as u32);
                    for high in 0..n.pow(pos as u32) {
                        for low in 0..stride {
                            let base = high * stride * n + low;
                            let u = op.table[base + x * stride];
                            let v = op.table[base + y * stride];
                            if u != v && uf.find(u) != uf.find(v) {
                                work.push((u, v));
                            }
                        }
                    }
                }
            }
        }
        Ok(Congruence {
            partition: uf.into_partition(),
            algebra: self.fingerprint,
        })
    }

    pub fn principal_congruence(&self, a: usize, b: usize) -> Result<Congruence> {
        self.generated_congruence(&[(a, b)])
    }

    /// Distinct principal congruences other than Δ, sorted.
    pub fn principal_congruences(&self) -> Result<Vec<Partition>> {
        let n = self.size;
        let mut seen = BTreeSet::new();
        match self.unary_translations() {
            Some(maps) => {
                let mut memo: Vec<Option<u32>> = vec![None; n * n];
                let mut found: Vec<Partition> = Vec::new();
                let mut index: HashMap<Partition, u32> = HashMap::new();
                for a in (0..n).rev() {
                    for b in a + 1..n {
                        let p = close_under(n, &maps, a, b, &memo, &found);
                        let id = *index.entry(p.clone()).or_insert_with(|| {
                            found.push(p);
                            (found.len() - 1) as u32
                        });
                        memo[a * n + b] = Some(id);
                        memo[b * n + a] = Some(id);
                    }
                }
                seen.extend(found);
            }
            None => {
                for a in 0..n {
                    for b in a + 1..n {
                        seen.insert(self.principal_congruence(a, b)?.partition);
                    }
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Distinct non-constant, non-identity basic translations, or `None`
    /// when tabulating them would take more than [`TRANSLATION_TABLE_LIMIT`] entries.
    fn unary_translations(&self) -> Option<Vec<Vec<u32>>> {
        let n = self.size;
        let mut total = 0usize;
        for op in self.ops.iter().filter(|o| o.arity > 0) {
            total = total.checked_add(op.arity.checked_mul(op.table.len())?)?;
        }
        if total > TRANSLATION_TABLE_LIMIT {
            return None;
        }
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        for op in self.ops.iter().filter(|o| o.arity > 0) {
            let r = op.arity;
            for pos in 0..r {
                let stride = n.pow((r - 1 - pos) as u32);
                for high in 0..n.pow(pos as u32) {
                    for low in 0..stride {
                        let base = high * stride * n + low;
                        let map: Vec<u32> = (0..n).map(|x| op.table[base + x * stride] as u32).collect();
                        let constant = map.iter().all(|&v| v == map[0]);
                        let identity = map.iter().enumerate().all(|(x, &v)| v as usize == x);
                        if !constant && !identity {
                            seen.insert(map);
                        }
                    }
                }
            }
        }
        let mut maps: Vec<Vec<u32>> = seen.into_iter().collect();
        maps.sort();
        Some(maps)
    }

    pub fn all_congruences(&self) -> Result<Vec<Congruence>> {
        self.all_congruences_with_budget(DEFAULT_CONGRUENCE_BUDGET)
    }

    /// Con A as the join-closure of the principal congruences plus Δ, sorted
    /// by canonical labels.
    pub fn all_congruences_with_budget(&self, budget: usize) -> Result<Vec<Congruence>> {
        self.join_closure(&self.principal_congruences()?, budget)
    }

    fn join_closure(&self, principals: &[Partition], budget: usize) -> Result<Vec<Congruence>> {
        let mut found: HashSet<Partition> = HashSet::new();
        let mut queue: Vec<Partition> = Vec::new();
        for p in std::iter::once(Partition::identity(self.size)).chain(principals.iter().cloned()) {
            if found.insert(p.clone()) {
                queue.push(p);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            if found.len() > budget {
                return Err(Error::BudgetExceeded {
                    what: "congruence",
                    limit: budget as u64,
                    explored: found.len() as u64,
                });
            }
            let current = queue[head].clone();
            head += 1;
            for p in principals {
                if p.is_finer_than(&current) {
                    continue;
                }
                let j = current.join(p)?;
                if found.insert(j.clone()) {
                    queue.push(j);
                }
            }
        }
        if found.len() > budget {
            return Err(Error::BudgetExceeded {
                what: "congruence",
                limit: budget as u64,
                explored: found.len() as u64,
            });
        }
        let mut all: Vec<Partition> = found.into_iter().collect();
        all.sort();
        Ok(all
            .into_iter()
            .map(|partition| Congruence {
                partition,
                algebra: self.fingerprint,
            })
            .collect())
    }

    /// Meet-irreducible congruences of a congruence-distributive algebra.
    ///
    /// Join-irreducibles are the principal congruences strictly above the
    /// join of the principal congruences below them; each join-irreducible
    /// `θ` yields the meet-irreducible `⋁{δ ∈ J : θ ≰ δ}`. With `verify`,
    /// the answer is compared against the naive filter over Con A when
    /// |Con A| ≤ [`NAIVE_CROSS_CHECK_LIMIT`].
    pub fn meet_irreducible_congruences(&self, verify: bool) -> Result<Vec<Congruence>> {
        let n = self.size;
        let principals = self.principal_congruences()?;
        let mut join_irreducible = Vec::new();
        for theta in &principals {
            let mut below = Partition::identity(n);
            for delta in &principals {
                if delta != theta && delta.is_finer_than(theta) {
                    below = below.join(delta)?;
                }
            }
            if &below != theta {
                join_irreducible.push(theta.clone());
            }
        }
        let mut result = BTreeSet::new();
        for theta in &join_irreducible {
            let mut prime = Partition::identity(n);
            for delta in &join_irreducible {
                if !theta.is_finer_than(delta) {
                    prime = prime.join(delta)?;
                }
            }
            result.insert(prime);
        }
        let result: Vec<Partition> = result.into_iter().collect();

        if verify {
            match self.join_closure(&principals, NAIVE_CROSS_CHECK_LIMIT) {
                Ok(all) => {
                    let parts: Vec<Partition> = all.into_iter().map(|c| c.partition).collect();
                    let naive = naive_meet_irreducibles(&parts)?;
                    if naive != result {
                        return Err(Error::Precondition(
                            "congruence lattice is not distributive: meet-irreducible \
                             computation disagrees with the naive filter"
                                .into(),
                        ));
                    }
                }
                Err(Error::BudgetExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }

        Ok(result
            .into_iter()
            .map(|partition| Congruence {
                partition,
                algebra: self.fingerprint,
            })
            .collect())
    }

    pub fn quotient(&self, delta: &Congruence) -> Result<Quotient> {
        self.check_same(delta)?;
        let classes = delta.partition.clone();
        let reps = classes.representatives();
        let m = reps.len();
        let mut ops = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let mut orig = vec![0; op.arity];
            let mut args = vec![0; op.arity];
            let mut table = Vec::with_capacity(m.pow(op.arity as u32));
            for idx in 0..m.pow(op.arity as u32) {
                decode_index(idx, m, &mut args);
                for (o, &a) in orig.iter_mut().zip(&args) {
                    *o = reps[a];
                }
                table.push(classes.label(op.table[encode_index(&orig, self.size)]));
            }
            ops.push(Operation::new(op.name.clone(), op.arity, table));
        }
        let algebra = FiniteAlgebra::with_name(format!("{}/~", self.name), m, ops)?;
        Ok(Quotient { algebra, classes })
    }

    pub fn subdirect_embedding(&self, kernels: &[Congruence]) -> Result<SubdirectRep> {
        if kernels.is_empty() {
            return Err(Error::Precondition("no kernels given".into()));
        }
        let mut meet = Partition::total(self.size);
        for k in kernels {
            self.check_same(k)?;
            meet = meet.meet(&k.partition)?;
        }
        if !meet.is_identity() {
            return Err(Error::Precondition(
                "kernels do not intersect to the identity".into(),
            ));
        }
        let factors = kernels
            .iter()
            .map(|k| self.quotient(k).map(|q| q.algebra))
            .collect::<Result<Vec<_>>>()?;
        let elements = (0..self.size)
            .map(|e| kernels.iter().map(|k| k.partition.label(e)).collect())
            .collect();
        Ok(SubdirectRep {
            factor_sizes: factors.iter().map(FiniteAlgebra::size).collect(),
            elements,
            kernels: kernels.iter().map(|k| k.partition.clone()).collect(),
            factors,
        })
    }

    pub fn is_arithmetic(&self) -> Result<bool> {
        self.is_arithmetic_with_budget(DEFAULT_CONGRUENCE_BUDGET)
    }

    /// Con A distributive and all pairs of congruences permute.
    pub fn is_arithmetic_with_budget(&self, budget: usize) -> Result<bool> {
        let all: Vec<Partition> = self
            .all_congruences_with_budget(budget)?
            .into_iter()
            .map(|c| c.partition)
            .collect();
        if !is_distributive(&all)? {
            return Ok(false);
        }
        for (i, x) in all.iter().enumerate() {
            for y in &all[i + 1..] {
                if !x.permutes_with(y)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn check_same(&self, c: &Congruence) -> Result<()> {
        if c.algebra != self.fingerprint {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }
}

/// Union-find closure of `{(a, b)}` under the unary maps `maps`. A pair
/// whose principal congruence is already in `memo` contributes that whole
/// congruence, which is closed under the maps already.
fn close_under(
    n: usize,
    maps: &[Vec<u32>],
    a: usize,
    b: usize,
    memo: &[Option<u32>],
    found: &[Partition],
) -> Partition {
    let mut uf = UnionFind::new(n);
    let mut work = vec![(a, b)];
    while let Some((x, y)) = work.pop() {
        if uf.find(x) == uf.find(y) {
            continue;
        }
        if let Some(id) = memo[x * n + y] {
            let known = &found[id as usize];
            let mut first = vec![usize::MAX; known.num_blocks()];
            for z in 0..n {
                let l = known.label(z);
                if first[l] == usize::MAX {
                    first[l] = z;
                } else {
                    uf.union(first[l], z);
                }
            }
            continue;
        }
        uf.union(x, y);
        for m in maps {
            let (u, v) = (m[x] as usize, m[y] as usize);
            if u != v && uf.find(u) != uf.find(v) {
                work.push((u, v));
            }
        }
    }
    uf.into_partition()
}

/// Naive meet-irreducibles of a finite lattice of partitions closed under
/// meet: `θ ≠ ∇` whose strict upper bounds do not meet back down to `θ`.
pub fn naive_meet_irreducibles(lattice: &[Partition]) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for theta in lattice {
        if theta.is_total() {
            continue;
        }
        let mut upper_meet: Option<Partition> = None;
        for delta in lattice {
            if delta != theta && theta.is_finer_than(delta) {
                upper_meet = Some(match upper_meet {
                    None => delta.clone(),
                    Some(m) => m.meet(delta)?,
                });
            }
        }
        if upper_meet.as_ref() != Some(theta) {
            out.push(theta.clone());
        }
    }
    out.sort();
    Ok(out)
}

/// Checks `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)` over all triples.
pub fn is_distributive(lattice: &[Partition]) -> Result<bool> {
    for x in lattice {
        for y in lattice {
            for z in lattice {
                let lhs = x.meet(&y.join(z)?)?;
                let rhs = x.meet(y)?.join(&x.meet(z)?)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A partition certified compatible with a particular algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    partition: Partition,
    algebra: u64,
}

impl Congruence {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn into_partition(self) -> Partition {
        self.partition
    }

    pub fn algebra_fingerprint(&self) -> u64 {
        self.algebra
    }

    fn same_algebra(&self, other: &Congruence) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    /// Joins of congruences are again congruences.
    pub fn join(&self, other: &Congruence) -> Result<Congruence> {
        self.same_algebra(other)?;
        Ok(Congruence {
            partition: self.partition.join(&other.partition)?,
            algebra: self.algebra,
        })
    }

    pub fn meet(&self, other: &Congruence) -> Result<Congruence> {
        self.same_algebra(other)?;
        Ok(Congruence {
            partition: self.partition.meet(&other.partition)?,
            algebra: self.algebra,
        })
    }

    pub fn is_finer_than(&self, other: &Congruence) -> bool {
        self.partition.is_finer_than(&other.partition)
    }
}

impl std::fmt::Display for Congruence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.partition.fmt(f)
    }
}

/// `A/δ` with classes numbered by least member.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: FiniteAlgebra,
    pub classes: Partition,
}

impl Quotient {
    pub fn class_of(&self, e: usize) -> usize {
        self.classes.label(e)
    }

    /// `θ ↦ θ/δ` for `θ ⊇ δ`.
    pub fn push_down(&self, theta: &Partition) -> Result<Congruence> {
        let down = theta.push_down(&self.classes)?;
        self.algebra.congruence(down)
    }

    pub fn pull_back(&self, theta: &Partition) -> Result<Partition> {
        theta.pull_back(&self.classes)
    }
}

/// An embedding of an algebra into a product of factors, one coordinate per kernel.
#[derive(Debug, Clone)]
pub struct SubdirectRep {
    pub factor_sizes: Vec<usize>,
    /// Coordinate tuple of every source element.
    pub elements: Vec<Vec<usize>>,
    /// `ρ_i`: pairs of elements agreeing in coordinate `i`.
    pub kernels: Vec<Partition>,
    pub factors: Vec<FiniteAlgebra>,
}

impl SubdirectRep {
    /// Representation of a subset of `A_1 × … × A_m` given by its tuples.
    /// Factors are left abstract (no operations); every projection must be onto.
    pub fn from_tuples(factor_sizes: Vec<usize>, tuples: Vec<Vec<usize>>) -> Result<Self> {
        let m = factor_sizes.len();
        let mut hit: Vec<Vec<bool>> = factor_sizes.iter().map(|&s| vec![false; s]).collect();
        for t in &tuples {
            if t.len() != m {
                return Err(Error::SizeMismatch {
                    expected: m,
                    found: t.len(),
                });
            }
            for (i, &x) in t.iter().enumerate() {
                if x >= factor_sizes[i] {
                    return Err(Error::ElementOutOfRange {
                        element: x,
                        size: factor_sizes[i],
                    });
                }
                hit[i][x] = true;
            }
        }
        if let Some(i) = hit.iter().position(|h| h.iter().any(|&b| !b)) {
            return Err(Error::Precondition(format!(
                "projection onto factor {i} is not onto"
            )));
        }
        let kernels = (0..m)
            .map(|i| {
                let raw: Vec<usize> = tuples.iter().map(|t| t[i]).collect();
                Partition::from_labels(&raw)
            })
            .collect();
        let factors = factor_sizes
            .iter()
            .map(|&s| FiniteAlgebra::new(s, Vec::new()))
            .collect::<Result<Vec<_>>>()?;
        Ok(SubdirectRep {
            factor_sizes,
            elements: tuples,
            kernels,
            factors,
        })
    }

    pub fn num_factors(&self) -> usize {
        self.factor_sizes.len()
    }

    /// Every projection hits its whole factor.
    pub fn is_subdirect(&self) -> bool {
        (0..self.num_factors()).all(|i| {
            let mut hit = vec![false; self.factor_sizes[i]];
            for t in &self.elements {
                hit[t[i]] = true;
            }
            hit.into_iter().all(|b| b)
        })
    }

    /// `ρ_i ⊆ ρ_j` only when `i = j`.
    pub fn is_irredundant(&self) -> bool {
        let m = self.num_factors();
        (0..m).all(|i| (0..m).all(|j| i == j || !self.kernels[i].is_finer_than(&self.kernels[j])))
    }

    pub fn image(&self) -> BTreeSet<Vec<usize>> {
        self.elements.iter().cloned().collect()
    }
}

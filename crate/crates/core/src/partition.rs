//! Partitions of `0..n` in canonical first-occurrence labeling, plus the
//! relational operations (join, meet, composition) used throughout the crate.
//!
//! Two partitions are equal exactly when their label sequences are equal, so
//! `Partition` derives `Eq`, `Ord` and `Hash` from the labels.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns false if they were already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|x| self.find(x)).collect();
        Partition::from_labels(&roots)
    }
}

/// An equivalence relation on `0..n`, stored as canonical block labels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    blocks: usize,
}

impl Partition {
    /// Canonicalizes arbitrary labels: the first element gets 0 and each new
    /// label takes the next unused identifier.
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(raw: &[T]) -> Self {
        let mut seen = std::collections::HashMap::with_capacity(raw.len());
        let labels = raw
            .iter()
            .map(|x| {
                let next = seen.len();
                *seen.entry(*x).or_insert(next)
            })
            .collect();
        Partition {
            labels,
            blocks: seen.len(),
        }
    }

    /// Builds a partition from explicit blocks; every element must occur exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= n {
                    return Err(Error::ElementOutOfRange { element: x, size: n });
                }
                if raw[x] != usize::MAX {
                    return Err(Error::Precondition(format!("element {x} in two blocks")));
                }
                raw[x] = b;
            }
        }
        if let Some(x) = raw.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Precondition(format!("element {x} in no block")));
        }
        Ok(Partition::from_labels(&raw))
    }

    /// The equality relation Δ.
    pub fn identity(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
            blocks: n,
        }
    }

    /// The total relation ∇.
    pub fn total(n: usize) -> Self {
        Partition {
            labels: vec![0; n],
            blocks: usize::from(n > 0),
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> usize {
        self.labels[x]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    pub fn is_identity(&self) -> bool {
        self.blocks == self.labels.len()
    }

    pub fn is_total(&self) -> bool {
        self.blocks <= 1
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    /// Blocks in label order; each block is sorted, so `blocks()[i][0]` is
    /// the least member of block `i`.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l].push(x);
        }
        out
    }

    /// Least member of every block, ascending.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = Vec::with_capacity(self.blocks);
        for (x, &l) in self.labels.iter().enumerate() {
            if l == reps.len() {
                reps.push(x);
            }
        }
        reps
    }

    pub fn block_sets(&self) -> Vec<FixedBitSet> {
        let mut out = vec![FixedBitSet::with_capacity(self.size()); self.blocks];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l].insert(x);
        }
        out
    }

    fn check_size(&self, other: &Partition) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch {
                expected: self.size(),
                found: other.size(),
            });
        }
        Ok(())
    }

    /// Inclusion as relations: every block of `self` lies inside a block of `other`.
    pub fn is_finer_than(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let mut image = vec![usize::MAX; self.blocks];
        self.labels.iter().zip(&other.labels).all(|(&a, &b)| {
            if image[a] == usize::MAX {
                image[a] = b;
                true
            } else {
                image[a] == b
            }
        })
    }

    /// Transitive closure of the union.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.check_size(other)?;
        let n = self.size();
        let mut uf = UnionFind::new(n);
        let mut first_a = vec![usize::MAX; self.blocks];
        let mut first_b = vec![usize::MAX; other.blocks];
        for x in 0..n {
            for (first, l) in [
                (&mut first_a, self.labels[x]),
                (&mut first_b, other.labels[x]),
            ] {
                if first[l] == usize::MAX {
                    first[l] = x;
                } else {
                    uf.union(first[l], x);
                }
            }
        }
        Ok(uf.into_partition())
    }

    /// Intersection (common refinement).
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.check_size(other)?;
        let pairs: Vec<(usize, usize)> = self
            .labels
            .iter()
            .copied()
            .zip(other.labels.iter().copied())
            .collect();
        Ok(Partition::from_labels(&pairs))
    }

    /// Relational product `self ∘ other = {(u,w) : ∃v. u self v, v other w}`.
    pub fn compose(&self, other: &Partition) -> Result<BinaryRelation> {
        self.check_size(other)?;
        let n = self.size();
        // meets[a][b]: block a of self intersects block b of other
        let mut meets = vec![FixedBitSet::with_capacity(other.blocks); self.blocks];
        for x in 0..n {
            meets[self.labels[x]].insert(other.labels[x]);
        }
        let mut rel = BinaryRelation::empty(n);
        for u in 0..n {
            let row = &meets[self.labels[u]];
            for w in 0..n {
                if row.contains(other.labels[w]) {
                    rel.insert(u, w);
                }
            }
        }
        Ok(rel)
    }

    /// Whether `self ∘ other = other ∘ self`.
    pub fn permutes_with(&self, other: &Partition) -> Result<bool> {
        Ok(self.compose(other)? == other.compose(self)?)
    }

    pub fn to_relation(&self) -> BinaryRelation {
        let n = self.size();
        let mut rel = BinaryRelation::empty(n);
        for u in 0..n {
            for w in 0..n {
                if self.labels[u] == self.labels[w] {
                    rel.insert(u, w);
                }
            }
        }
        rel
    }

    /// Labels on the classes of `delta` (numbered by least member), assuming
    /// `delta ⊆ self`.
    pub fn push_down(&self, delta: &Partition) -> Result<Partition> {
        self.check_size(delta)?;
        if !delta.is_finer_than(self) {
            return Err(Error::Precondition(
                "push-down requires the quotient congruence to be contained in the partition".into(),
            ));
        }
        let raw: Vec<usize> = delta
            .representatives()
            .into_iter()
            .map(|r| self.labels[r])
            .collect();
        Ok(Partition::from_labels(&raw))
    }

    /// Inverse of [`Partition::push_down`]: pulls a partition of the classes
    /// of `delta` back to the underlying set.
    pub fn pull_back(&self, delta: &Partition) -> Result<Partition> {
        if self.size() != delta.num_blocks() {
            return Err(Error::SizeMismatch {
                expected: delta.num_blocks(),
                found: self.size(),
            });
        }
        let raw: Vec<usize> = delta.labels.iter().map(|&c| self.labels[c]).collect();
        Ok(Partition::from_labels(&raw))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Block notation, e.g. `[0|1 2]`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = self.blocks();
        write!(f, "[")?;
        for (i, b) in blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            let items: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", items.join(" "))?;
        }
        write!(f, "]")
    }
}

/// A binary relation on `0..n` with bit-matrix storage.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryRelation {
    n: usize,
    bits: FixedBitSet,
}

impl BinaryRelation {
    pub fn empty(n: usize) -> Self {
        BinaryRelation {
            n,
            bits: FixedBitSet::with_capacity(n * n),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, u: usize, w: usize) {
        self.bits.insert(u * self.n + w);
    }

    pub fn contains(&self, u: usize, w: usize) -> bool {
        self.bits.contains(u * self.n + w)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &BinaryRelation) -> bool {
        self.n == other.n && self.bits.is_subset(&other.bits)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| (u + 1..self.n).all(|w| self.contains(u, w) == self.contains(w, u)))
    }

    pub fn converse(&self) -> BinaryRelation {
        let mut out = BinaryRelation::empty(self.n);
        for (u, w) in self.pairs() {
            out.insert(w, u);
        }
        out
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits.ones().map(move |i| (i / self.n, i % self.n))
    }
}

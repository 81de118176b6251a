//! Congruence systems and the exhaustive CR-tuple check.
//!
//! Whether a tuple is CR depends only on the partitions, so nothing here
//! needs the algebra's operations.

use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Default bound on candidate target tuples examined by the brute-force search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Congruences with targets satisfying `⟨a_i, a_j⟩ ∈ θ_i ∨ θ_j` for all `i, j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSystem {
    thetas: Vec<Partition>,
    targets: Vec<usize>,
}

impl CongruenceSystem {
    pub fn thetas(&self) -> &[Partition] {
        &self.thetas
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Universe size shared by every partition.
    pub fn size(&self) -> usize {
        self.thetas[0].size()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrVerdict {
    pub is_cr: bool,
    /// Lexicographically least targets of an unsolvable system, when one exists.
    pub witness: Option<Vec<usize>>,
}

impl CrVerdict {
    pub fn cr() -> Self {
        CrVerdict {
            is_cr: true,
            witness: None,
        }
    }

    pub fn not_cr(witness: Vec<usize>) -> Self {
        CrVerdict {
            is_cr: false,
            witness: Some(witness),
        }
    }
}

pub(crate) fn check_same_universe(thetas: &[Partition]) -> Result<usize> {
    let first = thetas
        .first()
        .ok_or_else(|| Error::Precondition("empty congruence tuple".into()))?;
    let n = first.size();
    for t in thetas {
        if t.size() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: t.size(),
            });
        }
    }
    Ok(n)
}

pub fn make_system(thetas: Vec<Partition>, targets: Vec<usize>) -> Result<CongruenceSystem> {
    let n = check_same_universe(&thetas)?;
    if targets.len() != thetas.len() {
        return Err(Error::SizeMismatch {
            expected: thetas.len(),
            found: targets.len(),
        });
    }
    for &a in &targets {
        if a >= n {
            return Err(Error::ElementOutOfRange { element: a, size: n });
        }
    }
    for i in 0..thetas.len() {
        for j in i + 1..thetas.len() {
            if !thetas[i].related(targets[i], targets[j])
                && !thetas[i].join(&thetas[j])?.related(targets[i], targets[j])
            {
                return Err(Error::SystemCondition { i, j });
            }
        }
    }
    Ok(CongruenceSystem { thetas, targets })
}

/// Least element of `a_1/θ_1 ∩ … ∩ a_k/θ_k`.
pub fn solve_system(sys: &CongruenceSystem) -> Option<usize> {
    (0..sys.size()).find(|&x| {
        sys.thetas
            .iter()
            .zip(&sys.targets)
            .all(|(t, &a)| t.related(x, a))
    })
}

pub fn brute_force_is_cr_tuple(thetas: &[Partition]) -> Result<CrVerdict> {
    brute_force_is_cr_tuple_with_budget(thetas, DEFAULT_SEARCH_BUDGET)
}

/// Searches block representatives in lexicographic order and returns the
/// first system whose solution set is empty.
pub fn brute_force_is_cr_tuple_with_budget(thetas: &[Partition], budget: u64) -> Result<CrVerdict> {
    let mut witness = None;
    for_each_system(thetas, budget, |targets, solutions| {
        if solutions.is_clear() {
            witness = Some(targets.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(match witness {
        Some(w) => CrVerdict::not_cr(w),
        None => CrVerdict::cr(),
    })
}

/// Visits every system whose targets are block representatives, in
/// lexicographic order, together with its solution set. Returns the number
/// of systems visited.
pub fn for_each_system<F>(thetas: &[Partition], budget: u64, mut visit: F) -> Result<u64>
where
    F: FnMut(&[usize], &FixedBitSet) -> ControlFlow<()>,
{
    let n = check_same_universe(thetas)?;
    let k = thetas.len();
    let reps: Vec<Vec<usize>> = thetas.iter().map(Partition::representatives).collect();
    let blocks: Vec<Vec<FixedBitSet>> = thetas.iter().map(Partition::block_sets).collect();
    // joins[i][j] for j < i.
    let mut joins: Vec<Vec<Partition>> = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = Vec::with_capacity(i);
        for j in 0..i {
            row.push(thetas[i].join(&thetas[j])?);
        }
        joins.push(row);
    }

    let mut full = FixedBitSet::with_capacity(n);
    full.insert_range(..);
    let mut inter = vec![full; k + 1];
    let mut targets = vec![0usize; k];
    let mut choice = vec![0usize; k];
    let mut visited = 0u64;
    let mut depth = 0usize;

    // Iterative DFS: choice[d] is the next representative index to try at depth d.
    loop {
        if choice[depth] == reps[depth].len() {
            if depth == 0 {
                return Ok(visited);
            }
            choice[depth] = 0;
            depth -= 1;
            continue;
        }
        let r = reps[depth][choice[depth]];
        choice[depth] += 1;
        if !(0..depth).all(|j| joins[depth][j].related(r, targets[j])) {
            continue;
        }
        targets[depth] = r;
        let (before, after) = inter.split_at_mut(depth + 1);
        after[0].clone_from(&before[depth]);
        after[0].intersect_with(&blocks[depth][thetas[depth].label(r)]);
        if depth + 1 < k {
            depth += 1;
            continue;
        }
        visited += 1;
        if visited > budget {
            return Err(Error::BudgetExceeded {
                what: "candidate tuple",
                limit: budget,
                explored: visited - 1,
            });
        }
        if visit(&targets, &inter[k]).is_break() {
            return Ok(visited);
        }
    }
}

/// `δ = ⋂θ_i` and every `θ_i/δ` on the δ-classes.
pub fn quotient_reduce(thetas: &[Partition]) -> Result<(Partition, Vec<Partition>)> {
    let n = check_same_universe(thetas)?;
    let mut delta = Partition::total(n);
    for t in thetas {
        delta = delta.meet(t)?;
    }
    let reduced = thetas
        .iter()
        .map(|t| t.push_down(&delta))
        .collect::<Result<Vec<_>>>()?;
    Ok((delta, reduced))
}

/// For pairs, CR is equivalent to the composition being symmetric.
pub fn is_cr_pair_fast(x: &Partition, y: &Partition) -> Result<bool> {
    Ok(x.compose(y)?.is_symmetric())
}

//! CR tuples of vector spaces over prime fields.
//!
//! A tuple of subspaces `W_1..W_k` of `F^n` is CR iff the space `S` of
//! solvable target tuples equals the space `T` of all valid target tuples.
//! `S ⊆ T` always, so comparing dimensions suffices.

use std::collections::HashMap;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::partition::Partition;

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn inverse_mod(a: usize, p: usize) -> usize {
    // Fermat; p is prime.
    let mut result = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Dense matrix over GF(p), row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixGFp {
    p: usize,
    rows: usize,
    cols: usize,
    data: Vec<usize>,
}

impl MatrixGFp {
    pub fn zeros(p: usize, rows: usize, cols: usize) -> Self {
        MatrixGFp {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: usize, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Entries are reduced mod p.
    pub fn from_rows(p: usize, cols: usize, rows: &[Vec<usize>]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::UnsupportedField(p));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::SizeMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| x % p));
        }
        Ok(MatrixGFp {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> usize {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: usize) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<usize>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &MatrixGFp) -> MatrixGFp {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        MatrixGFp {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul_vec(&self, v: &[usize]) -> Vec<usize> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (a, b)| (acc + a * b) % self.p)
            })
            .collect()
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref_with_pivots(&self) -> (MatrixGFp, Vec<usize>) {
        let mut m = self.clone();
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = inverse_mod(m.get(row, col), p);
            for c in col..m.cols {
                let v = m.get(row, c) * inv % p;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                let f = m.get(r, col);
                if r != row && f != 0 {
                    for c in col..m.cols {
                        let v = (m.get(r, c) + (p - f) * m.get(row, c)) % p;
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> MatrixGFp {
        self.rref_with_pivots().0
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Nonzero rows of the rref: the canonical basis of the row space.
    pub fn row_space(&self) -> MatrixGFp {
        let (m, pivots) = self.rref_with_pivots();
        MatrixGFp {
            p: m.p,
            rows: pivots.len(),
            cols: m.cols,
            data: m.data[..pivots.len() * m.cols].to_vec(),
        }
    }

    /// Basis of `{x : self · x = 0}`, one vector per row, in rref.
    pub fn kernel_basis(&self) -> MatrixGFp {
        let p = self.p;
        let (m, pivots) = self.rref_with_pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = MatrixGFp::zeros(p, free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            basis.set(k, f, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                let v = (p - m.get(r, f)) % p;
                basis.set(k, pc, v);
            }
        }
        basis.row_space()
    }
}

/// A matrix whose kernel is exactly the row space of `w`.
pub fn annihilator_matrix(w: &MatrixGFp) -> MatrixGFp {
    w.kernel_basis()
}

/// `⟨F^n, W_1, …, W_k⟩` with each `W_i` given by its canonical row basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VSInstance {
    p: usize,
    n: usize,
    subspaces: Vec<MatrixGFp>,
}

impl VSInstance {
    /// Bases are brought to canonical form; dependent rows are dropped.
    pub fn new(p: usize, n: usize, bases: Vec<MatrixGFp>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::UnsupportedField(p));
        }
        if bases.is_empty() {
            return Err(Error::Precondition("at least one subspace is required".into()));
        }
        let mut subspaces = Vec::with_capacity(bases.len());
        for b in bases {
            if b.p != p {
                return Err(Error::UnsupportedField(b.p));
            }
            if b.cols != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: b.cols,
                });
            }
            subspaces.push(b.row_space());
        }
        Ok(VSInstance { p, n, subspaces })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn subspaces(&self) -> &[MatrixGFp] {
        &self.subspaces
    }

    pub fn k(&self) -> usize {
        self.subspaces.len()
    }

    /// The partitions `u ~ v ⟺ u − v ∈ W_i` of `F^n`, with vectors coded as
    /// base-p numerals, coordinate 0 most significant.
    pub fn induced_partitions(&self) -> Vec<Partition> {
        let size = self.p.pow(self.n as u32);
        self.subspaces
            .iter()
            .map(|w| {
                let (_, pivots) = w.rref_with_pivots();
                let labels: Vec<usize> = (0..size)
                    .map(|code| {
                        let mut v = decode_vector(code, self.p, self.n);
                        reduce_mod_subspace(&mut v, w, &pivots);
                        encode_vector(&v, self.p)
                    })
                    .collect();
                Partition::from_labels(&labels)
            })
            .collect()
    }
}

/// Clears the pivot coordinates of `v` using the rref basis `w`; the result
/// is a canonical coset representative.
fn reduce_mod_subspace(v: &mut [usize], w: &MatrixGFp, pivots: &[usize]) {
    let p = w.p;
    for (r, &pc) in pivots.iter().enumerate() {
        let f = v[pc];
        if f != 0 {
            for (c, x) in v.iter_mut().enumerate() {
                *x = (*x + (p - f) * w.get(r, c)) % p;
            }
        }
    }
}

pub fn decode_vector(mut code: usize, p: usize, n: usize) -> Vec<usize> {
    let mut v = vec![0; n];
    for slot in v.iter_mut().rev() {
        *slot = code % p;
        code /= p;
    }
    v
}

pub fn encode_vector(v: &[usize], p: usize) -> usize {
    v.iter().fold(0, |acc, &d| acc * p + d)
}

/// `n + Σ dim W_i − dim ⋂W_i`.
pub fn dim_s(inst: &VSInstance) -> usize {
    let n = inst.n;
    let mut stacked = MatrixGFp::zeros(inst.p, 0, n);
    for w in &inst.subspaces {
        stacked = stacked.stack(&annihilator_matrix(w));
    }
    let dim_meet = n - stacked.rank();
    n + inst.subspaces.iter().map(MatrixGFp::rows).sum::<usize>() - dim_meet
}

/// `kn − rank A`, where the rows of `A` apply `A_ij` (annihilator of
/// `W_i + W_j`) to `v_i − v_j`.
pub fn dim_t(inst: &VSInstance) -> usize {
    let (p, n, k) = (inst.p, inst.n, inst.k());
    if k == 1 {
        return n;
    }
    let mut blocks = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let sum = inst.subspaces[i].stack(&inst.subspaces[j]);
            let a = annihilator_matrix(&sum);
            for r in 0..a.rows {
                let mut row = vec![0; k * n];
                for c in 0..n {
                    row[i * n + c] = a.get(r, c);
                    row[j * n + c] = (p - a.get(r, c)) % p;
                }
                blocks.push(row);
            }
        }
    }
    let big = MatrixGFp::from_rows(p, k * n, &blocks).expect("p already validated");
    k * n - big.rank()
}

pub fn is_cr_tuple_vs(inst: &VSInstance) -> bool {
    dim_s(inst) == dim_t(inst)
}

/// An isomorphism between an abstract vector space and `GF(p)^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateChart {
    p: usize,
    n: usize,
    zero: usize,
    forward: Vec<Vec<usize>>,
    inverse: HashMap<Vec<usize>, usize>,
}

impl CoordinateChart {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    /// `γ(e)`.
    pub fn coords(&self, e: usize) -> &[usize] {
        &self.forward[e]
    }

    /// `γ⁻¹(v)`.
    pub fn element(&self, v: &[usize]) -> Option<usize> {
        self.inverse.get(v).copied()
    }
}

/// Scalar operations must be named `*0` .. `*{p-1}`, alongside `+`, `-`, `0`.
pub fn coordinatize(alg: &FiniteAlgebra) -> Result<CoordinateChart> {
    let nva = |m: &str| Error::NotAVectorSpace(m.to_string());
    let size = alg.size();
    let plus = alg.op("+").filter(|o| o.arity == 2).ok_or_else(|| nva("missing binary `+`"))?;
    let neg = alg.op("-").filter(|o| o.arity == 1).ok_or_else(|| nva("missing unary `-`"))?;
    let zero = alg.op("0").filter(|o| o.arity == 0).ok_or_else(|| nva("missing constant `0`"))?.table[0];
    let scalar_ops: Vec<_> = alg
        .ops()
        .iter()
        .filter(|o| o.name.starts_with('*') && o.name[1..].parse::<usize>().is_ok())
        .collect();
    let p = scalar_ops.len();
    if alg.ops().len() != 3 + p {
        return Err(nva("unexpected operation symbols"));
    }
    if p == 0 {
        return Err(nva("no scalar operations"));
    }
    if !is_prime(p) {
        return Err(Error::UnsupportedField(p));
    }
    let mut scal = Vec::with_capacity(p);
    for r in 0..p {
        let op = alg
            .op(&format!("*{r}"))
            .filter(|o| o.arity == 1)
            .ok_or_else(|| Error::NotAVectorSpace(format!("missing unary `*{r}`")))?;
        scal.push(&op.table);
    }
    let add = |a: usize, b: usize| plus.table[a * size + b];

    for a in 0..size {
        if add(a, zero) != a || add(zero, a) != a {
            return Err(nva("`0` is not neutral"));
        }
        if add(a, neg.table[a]) != zero {
            return Err(nva("`-` is not the additive inverse"));
        }
        if scal[0][a] != zero || scal[1][a] != a {
            return Err(nva("scalars 0 and 1 act incorrectly"));
        }
        for b in 0..size {
            if add(a, b) != add(b, a) {
                return Err(nva("`+` is not commutative"));
            }
            for c in 0..size {
                if add(add(a, b), c) != add(a, add(b, c)) {
                    return Err(nva("`+` is not associative"));
                }
            }
            for row in &scal {
                if row[add(a, b)] != add(row[a], row[b]) {
                    return Err(nva("scalar multiplication does not distribute over `+`"));
                }
            }
        }
        for r in 0..p {
            for s in 0..p {
                if scal[(r + s) % p][a] != add(scal[r][a], scal[s][a]) {
                    return Err(nva("scalar addition is not respected"));
                }
                if scal[(r * s) % p][a] != scal[r][scal[s][a]] {
                    return Err(nva("scalar multiplication is not associative"));
                }
            }
        }
    }

    // Greedy basis: extend the span by the least element outside it.
    let mut coords: Vec<Option<Vec<usize>>> = vec![None; size];
    coords[zero] = Some(Vec::new());
    let mut span = vec![zero];
    let mut n = 0;
    while let Some(b) = (0..size).find(|&e| coords[e].is_none()) {
        let mut next = Vec::with_capacity(span.len() * p);
        let mut fresh: Vec<(usize, Vec<usize>)> = Vec::new();
        for &s in &span {
            let base = coords[s].clone().expect("span element has coordinates");
            for (r, table) in scal.iter().enumerate() {
                let e = add(s, table[b]);
                let mut c = base.clone();
                c.push(r);
                fresh.push((e, c));
            }
        }
        for c in coords.iter_mut().flatten() {
            c.push(0);
        }
        for (e, c) in fresh {
            match &coords[e] {
                Some(old) if old != &c => return Err(nva("span computation is inconsistent")),
                Some(_) => {}
                None => {
                    coords[e] = Some(c);
                    next.push(e);
                }
            }
        }
        span.extend(next);
        n += 1;
    }
    if span.len() != size {
        return Err(nva("universe is not spanned"));
    }
    let forward: Vec<Vec<usize>> = coords.into_iter().map(|c| c.expect("every element reached")).collect();
    let inverse = forward.iter().enumerate().map(|(e, c)| (c.clone(), e)).collect();
    Ok(CoordinateChart {
        p,
        n,
        zero,
        forward,
        inverse,
    })
}

/// `W = γ(0/θ)`, checked against `u θ v ⟺ γ(u) − γ(v) ∈ W`.
pub fn congruence_to_subspace(chart: &CoordinateChart, theta: &Partition) -> Result<MatrixGFp> {
    let size = chart.forward.len();
    if theta.size() != size {
        return Err(Error::SizeMismatch {
            expected: size,
            found: theta.size(),
        });
    }
    let (p, n) = (chart.p, chart.n);
    let class: Vec<Vec<usize>> = (0..size)
        .filter(|&u| theta.related(u, chart.zero))
        .map(|u| chart.forward[u].clone())
        .collect();
    let w = MatrixGFp::from_rows(p, n, &class)?.row_space();
    let (_, pivots) = w.rref_with_pivots();
    let reps: Vec<Vec<usize>> = chart
        .forward
        .iter()
        .map(|c| {
            let mut v = c.clone();
            reduce_mod_subspace(&mut v, &w, &pivots);
            v
        })
        .collect();
    for u in 0..size {
        for v in u + 1..size {
            if theta.related(u, v) != (reps[u] == reps[v]) {
                return Err(Error::Internal(format!(
                    "partition is not the coset partition of a subspace at ({u},{v})"
                )));
            }
        }
    }
    Ok(w)
}

/// Coordinatizes `alg` and decides the tuple.
pub fn is_cr_tuple_vs_algebra(alg: &FiniteAlgebra, thetas: &[Partition]) -> Result<bool> {
    let chart = coordinatize(alg)?;
    let bases = thetas
        .iter()
        .map(|t| congruence_to_subspace(&chart, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(is_cr_tuple_vs(&VSInstance::new(chart.p, chart.n, bases)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::generic::brute_force_is_cr_tuple;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(p: usize, cols: usize, rows: &[&[usize]]) -> MatrixGFp {
        let rows: Vec<Vec<usize>> = rows.iter().map(|r| r.to_vec()).collect();
        MatrixGFp::from_rows(p, cols, &rows).unwrap()
    }

    fn random_subspace<R: Rng>(rng: &mut R, p: usize, n: usize) -> MatrixGFp {
        let rows: Vec<Vec<usize>> = (0..rng.gen_range(0..=n))
            .map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        MatrixGFp::from_rows(p, n, &rows).unwrap().row_space()
    }

    /// Oracle: span enumerated by brute force, as a sorted list of codes.
    fn span_codes(w: &MatrixGFp) -> Vec<usize> {
        let (p, n) = (w.p(), w.cols());
        let mut out: Vec<usize> = (0..p.pow(w.rows() as u32))
            .map(|c| {
                let coeffs = decode_vector(c, p, w.rows());
                let mut v = vec![0; n];
                for (r, &a) in coeffs.iter().enumerate() {
                    for (x, &y) in v.iter_mut().zip(w.row(r)) {
                        *x = (*x + a * y) % p;
                    }
                }
                encode_vector(&v, p)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn elimination_examples() {
        assert_eq!(MatrixGFp::identity(2, 2).rank(), 2);
        assert_eq!(m(2, 2, &[&[1, 1]]).kernel_basis(), m(2, 2, &[&[1, 1]]));
        assert_eq!(MatrixGFp::zeros(3, 2, 3).rank(), 0);
        assert_eq!(m(3, 2, &[&[2, 1], &[1, 2]]).rank(), 1);
        assert!(MatrixGFp::from_rows(4, 1, &[vec![1]]).is_err());
    }

    #[test]
    fn annihilator_examples() {
        assert_eq!(annihilator_matrix(&m(2, 2, &[&[1, 0]])), m(2, 2, &[&[0, 1]]));
        let full = annihilator_matrix(&MatrixGFp::identity(3, 2));
        assert_eq!((full.rows(), full.cols()), (0, 2));
        assert_eq!(annihilator_matrix(&MatrixGFp::zeros(2, 0, 3)), MatrixGFp::identity(2, 3));
    }

    #[test]
    fn dimension_examples() {
        let tri = VSInstance::new(
            2,
            2,
            vec![m(2, 2, &[&[1, 0]]), m(2, 2, &[&[0, 1]]), m(2, 2, &[&[1, 1]])],
        )
        .unwrap();
        assert_eq!(dim_s(&tri), 5);
        assert_eq!(dim_t(&tri), 6);
        assert!(!is_cr_tuple_vs(&tri));
        let verdict = brute_force_is_cr_tuple(&tri.induced_partitions()).unwrap();
        assert!(!verdict.is_cr);

        let one = VSInstance::new(3, 2, vec![MatrixGFp::zeros(3, 0, 2)]).unwrap();
        assert_eq!(dim_s(&one), 2);
        assert_eq!(dim_t(&one), 2);

        let full = VSInstance::new(2, 2, vec![MatrixGFp::identity(2, 2); 3]).unwrap();
        assert_eq!(dim_s(&full), 6);
        assert!(is_cr_tuple_vs(&full));

        let diag = VSInstance::new(2, 1, vec![MatrixGFp::zeros(2, 0, 1); 2]).unwrap();
        assert_eq!(dim_t(&diag), 1);
    }

    #[test]
    fn pairs_are_always_cr() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = random_subspace(&mut rng, 2, 2);
            let b = random_subspace(&mut rng, 2, 2);
            assert!(is_cr_tuple_vs(&VSInstance::new(2, 2, vec![a, b]).unwrap()));
        }
    }

    #[test]
    fn coordinatize_examples() {
        let c = coordinatize(&fixtures::gf_space(2, 2)).unwrap();
        assert_eq!((c.p(), c.n()), (2, 2));
        let c = coordinatize(&fixtures::gf_space(3, 1)).unwrap();
        assert_eq!((c.p(), c.n()), (3, 1));
        let c = coordinatize(&fixtures::gf_space(5, 0)).unwrap();
        assert_eq!(c.n(), 0);
        assert!(matches!(
            coordinatize(&fixtures::ring_zn(4)),
            Err(Error::NotAVectorSpace(_))
        ));
    }

    #[test]
    fn non_prime_scalar_count_is_rejected() {
        let z4 = fixtures::ring_zn(4);
        let mut ops: Vec<_> = z4.ops().iter().filter(|o| o.name != "*").cloned().collect();
        for r in 0..4 {
            ops.push(crate::Operation::from_fn(format!("*{r}"), 1, 4, |a| a[0] * r % 4));
        }
        let alg = FiniteAlgebra::new(4, ops).unwrap();
        assert_eq!(coordinatize(&alg), Err(Error::UnsupportedField(4)));
    }

    #[test]
    fn chart_round_trip_and_linearity() {
        for (p, n) in [(2, 3), (3, 2), (5, 1)] {
            let alg = fixtures::gf_space(p, n);
            let c = coordinatize(&alg).unwrap();
            for u in 0..alg.size() {
                assert_eq!(c.element(c.coords(u)), Some(u));
                for v in 0..alg.size() {
                    let sum = alg.apply("+", &[u, v]).unwrap();
                    let expect: Vec<usize> = c
                        .coords(u)
                        .iter()
                        .zip(c.coords(v))
                        .map(|(a, b)| (a + b) % p)
                        .collect();
                    assert_eq!(c.coords(sum), expect.as_slice());
                }
            }
        }
    }

    #[test]
    fn subspace_from_congruence() {
        let alg = fixtures::gf_space(2, 2);
        let c = coordinatize(&alg).unwrap();
        assert_eq!(congruence_to_subspace(&c, &Partition::identity(4)).unwrap().rows(), 0);
        assert_eq!(congruence_to_subspace(&c, &Partition::total(4)).unwrap().rows(), 2);
        // codes: 0=00, 1=01, 2=10, 3=11; blocks {00,10 | 01,11}.
        let theta = Partition::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let w = congruence_to_subspace(&c, &theta).unwrap();
        let expect: Vec<usize> = c.coords(2).to_vec();
        assert_eq!(w.row_vecs(), vec![expect]);
        let bad = Partition::from_blocks(4, &[vec![0, 1, 2], vec![3]]).unwrap();
        assert!(matches!(congruence_to_subspace(&c, &bad), Err(Error::Internal(_))));
    }

    #[test]
    fn oracle_agreement_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..120 {
            let p = [2, 3][rng.gen_range(0..2)];
            let n = rng.gen_range(1..=if p == 2 { 3 } else { 2 });
            let k = rng.gen_range(1..=3);
            let ws = (0..k).map(|_| random_subspace(&mut rng, p, n)).collect();
            let inst = VSInstance::new(p, n, ws).unwrap();
            assert!(dim_s(&inst) >= n);
            assert!(dim_t(&inst) >= dim_s(&inst));
            let bf = brute_force_is_cr_tuple(&inst.induced_partitions()).unwrap();
            assert_eq!(is_cr_tuple_vs(&inst), bf.is_cr);
        }
    }

    #[test]
    fn algebra_entry_point_matches_instance() {
        let alg = fixtures::gf_space(2, 3);
        let cons: Vec<Partition> = alg
            .all_congruences()
            .unwrap()
            .into_iter()
            .map(|c| c.into_partition())
            .collect();
        assert_eq!(cons.len(), 16);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let thetas: Vec<Partition> = (0..3).map(|_| fixtures::pick(&mut rng, &cons).clone()).collect();
            assert_eq!(
                is_cr_tuple_vs_algebra(&alg, &thetas).unwrap(),
                brute_force_is_cr_tuple(&thetas).unwrap().is_cr
            );
        }
    }

    proptest::proptest! {
        #[test]
        fn annihilator_involution(seed in proptest::prelude::any::<u64>(), p_idx in 0usize..3, n in 0usize..5) {
            let p = [2, 3, 5][p_idx];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = random_subspace(&mut rng, p, n);
            let back = annihilator_matrix(&annihilator_matrix(&w));
            proptest::prop_assert_eq!(back.row_space(), w.row_space());
            proptest::prop_assert_eq!(span_codes(&back), span_codes(&w));
            for r in 0..w.rows() {
                proptest::prop_assert!(annihilator_matrix(&w).mul_vec(w.row(r)).iter().all(|&x| x == 0));
            }
        }
    }
}

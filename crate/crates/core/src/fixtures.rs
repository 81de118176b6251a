//! Small algebras used by tests, benches and the acceptance suite.
//!
//! Operation names used throughout: lattices carry `meet` and `join`,
//! nearlattices `n`, rings `+`, `*`, `-`, `0`, vector spaces over GF(p)
//! `+`, `-`, `0` and scalar multiplications `*0` .. `*{p-1}`.

use rand::Rng;

use crate::algebra::{FiniteAlgebra, Operation};
use crate::partition::Partition;

fn build(name: &str, size: usize, ops: Vec<Operation>) -> FiniteAlgebra {
    FiniteAlgebra::with_name(name, size, ops).expect("fixture tables are well formed")
}

/// Two-element algebra with a single operation given by `f`.
pub fn two_element(name: &str, arity: usize, f: impl Fn(&[usize]) -> usize) -> FiniteAlgebra {
    build("2", 2, vec![Operation::from_fn(name, arity, 2, f)])
}

/// `0 < 1 < … < n-1` with `meet` and `join`.
pub fn chain_lattice(n: usize) -> FiniteAlgebra {
    build(
        &format!("chain{n}"),
        n,
        vec![
            Operation::from_fn("meet", 2, n, |a| a[0].min(a[1])),
            Operation::from_fn("join", 2, n, |a| a[0].max(a[1])),
        ],
    )
}

/// Subsets of an `m`-set as bitmasks with `meet` and `join`.
pub fn boolean_lattice(m: usize) -> FiniteAlgebra {
    let n = 1 << m;
    build(
        &format!("2^{m}"),
        n,
        vec![
            Operation::from_fn("meet", 2, n, |a| a[0] & a[1]),
            Operation::from_fn("join", 2, n, |a| a[0] | a[1]),
        ],
    )
}

/// Adds `n(x,y,z) = (x ∧ y) ∨ z` to an algebra carrying `meet` and `join`.
pub fn lattice_with_n(lat: &FiniteAlgebra) -> FiniteAlgebra {
    let meet = lat.op("meet").expect("lattice has meet");
    let join = lat.op("join").expect("lattice has join");
    let s = lat.size();
    let mut ops = lat.ops().to_vec();
    ops.push(Operation::from_fn("n", 3, s, |a| {
        join.table[meet.table[a[0] * s + a[1]] * s + a[2]]
    }));
    build(lat.name(), s, ops)
}

pub fn two_join_semilattice() -> FiniteAlgebra {
    two_element("join", 2, |a| a[0] | a[1])
}

/// 2_N: `{0,1}` with `n(x,y,z) = (x ∧ y) ∨ z`.
pub fn two_n() -> FiniteAlgebra {
    two_element("n", 3, |a| (a[0] & a[1]) | a[2])
}

/// The two-element majority algebra.
pub fn two_majority() -> FiniteAlgebra {
    two_element("m", 3, |a| (a[0] & a[1]) | (a[0] & a[2]) | (a[1] & a[2]))
}

/// `{0,1}` with `s(x,y,z) = x + y + z` mod 2.
pub fn two_s() -> FiniteAlgebra {
    two_element("s", 3, |a| a[0] ^ a[1] ^ a[2])
}

/// The `m`-th power of a two-element algebra, elements as bitmasks with
/// coordinate 0 in the most significant bit.
pub fn power_of_two_element(base: &FiniteAlgebra, m: usize) -> FiniteAlgebra {
    assert_eq!(base.size(), 2);
    let n = 1usize << m;
    let ops = base
        .ops()
        .iter()
        .map(|op| {
            Operation::from_fn(op.name.clone(), op.arity, n, |args| {
                let mut out = 0;
                for bit in 0..m {
                    let idx = args
                        .iter()
                        .fold(0, |acc, &x| acc * 2 + ((x >> bit) & 1));
                    out |= op.table[idx] << bit;
                }
                out
            })
        })
        .collect();
    build(&format!("{}^{m}", base.name()), n, ops)
}

/// The "fork" `{(0,1), (1,0), (1,1)}` inside 2_N²: elements a = 0, b = 1, top = 2.
pub fn fork() -> FiniteAlgebra {
    let sq = power_of_two_element(&two_n(), 2);
    sq.induced_subalgebra(&[1, 2, 3]).expect("fork is closed")
}

/// ℤ_n as a ring with `+`, `*`, unary `-` and `0`.
pub fn ring_zn(n: usize) -> FiniteAlgebra {
    build(
        &format!("Z{n}"),
        n,
        vec![
            Operation::from_fn("+", 2, n, |a| (a[0] + a[1]) % n),
            Operation::from_fn("*", 2, n, |a| (a[0] * a[1]) % n),
            Operation::from_fn("-", 1, n, |a| (n - a[0]) % n),
            Operation::constant("0", 0),
        ],
    )
}

/// GF(p)^dim as a vector space; element codes are base-p numerals with
/// coordinate 0 most significant.
pub fn gf_space(p: usize, dim: usize) -> FiniteAlgebra {
    let n = p.pow(dim as u32);
    let digits = |mut x: usize| {
        let mut v = vec![0; dim];
        for slot in v.iter_mut().rev() {
            *slot = x % p;
            x /= p;
        }
        v
    };
    let code = |v: &[usize]| v.iter().fold(0, |acc, &d| acc * p + d);
    let mut ops = vec![
        Operation::from_fn("+", 2, n, |a| {
            let (u, w) = (digits(a[0]), digits(a[1]));
            code(&u.iter().zip(&w).map(|(x, y)| (x + y) % p).collect::<Vec<_>>())
        }),
        Operation::from_fn("-", 1, n, |a| {
            code(&digits(a[0]).iter().map(|x| (p - x) % p).collect::<Vec<_>>())
        }),
        Operation::constant("0", 0),
    ];
    for r in 0..p {
        ops.push(Operation::from_fn(format!("*{r}"), 1, n, |a| {
            code(&digits(a[0]).iter().map(|x| (x * r) % p).collect::<Vec<_>>())
        }));
    }
    build(&format!("GF({p})^{dim}"), n, ops)
}

/// Subalgebra of `base^m` generated by a few random elements.
fn random_subpower<R: Rng>(rng: &mut R, base: &FiniteAlgebra, m: usize) -> FiniteAlgebra {
    let pow = power_of_two_element(base, m);
    let gens: Vec<usize> = (0..rng.gen_range(1..=m + 1))
        .map(|_| rng.gen_range(0..pow.size()))
        .collect();
    let sub = pow.subuniverse(&gens).expect("generators in range");
    pow.induced_subalgebra(&sub).expect("subuniverse is closed")
}

/// Random subalgebra of 2_N^m.
pub fn random_two_n_subalgebra<R: Rng>(rng: &mut R, m: usize) -> FiniteAlgebra {
    random_subpower(rng, &two_n(), m)
}

/// Random subalgebra of the `m`-th power of the two-element majority algebra.
pub fn random_majority_subalgebra<R: Rng>(rng: &mut R, m: usize) -> FiniteAlgebra {
    random_subpower(rng, &two_majority(), m)
}

/// Random sublattice of 2^4 with at most `max_size` elements, carrying
/// `meet`, `join` and `n`.
pub fn random_distributive_lattice<R: Rng>(rng: &mut R, max_size: usize) -> FiniteAlgebra {
    let cube = boolean_lattice(4);
    loop {
        let gens: Vec<usize> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..16)).collect();
        let sub = cube.subuniverse(&gens).expect("generators in range");
        if sub.len() <= max_size {
            return lattice_with_n(&cube.induced_subalgebra(&sub).expect("closed"));
        }
    }
}

/// A nonempty up-set of 2^m carrying implication `imp` and `n`; such
/// algebras are Tarski algebras and subalgebras of 2_N^m.
pub fn upset_tarski(m: usize, generators: &[usize]) -> FiniteAlgebra {
    let n = 1usize << m;
    let full = n - 1;
    let members: Vec<usize> = (0..n)
        .filter(|&x| x == full || generators.iter().any(|&g| g & !x == 0))
        .collect();
    let cube = build(
        "2^m",
        n,
        vec![
            Operation::from_fn("imp", 2, n, |a| (!a[0] & full) | a[1]),
            Operation::from_fn("n", 3, n, |a| (a[0] & a[1]) | a[2]),
        ],
    );
    cube.induced_subalgebra(&members).expect("up-sets are closed")
}

pub fn random_upset_tarski<R: Rng>(rng: &mut R, m: usize) -> FiniteAlgebra {
    let gens: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..1 << m)).collect();
    upset_tarski(m, &gens)
}

/// Every partition of `0..n` (restricted growth strings), in canonical order.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn rec(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Partition>) {
        if prefix.len() == n {
            out.push(Partition::from_labels(prefix));
            return;
        }
        for l in 0..=max + 1 {
            prefix.push(l);
            rec(prefix, max.max(l), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(&mut vec![0], 0, n, &mut out);
    }
    out.sort();
    out
}

/// Random element of the congruence lattice list.
pub fn pick<'a, T, R: Rng>(rng: &mut R, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn partition_counts_are_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (n, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(all_partitions(n).len(), b);
        }
    }

    #[test]
    fn fork_shape() {
        let f = fork();
        assert_eq!(f.size(), 3);
        // join of a and b is the top.
        assert_eq!(f.apply("n", &[0, 0, 1]).unwrap(), 2);
        assert_eq!(f.apply("n", &[0, 1, 1]).unwrap(), 1);
    }

    #[test]
    fn random_fixtures_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_two_n_subalgebra(&mut rng, 3);
            assert!(a.size() <= 8);
            let l = random_distributive_lattice(&mut rng, 10);
            assert!(l.size() <= 10);
            let t = random_upset_tarski(&mut rng, 3);
            assert!(t.size() >= 1);
        }
    }

    #[test]
    fn gf_space_tables() {
        let v = gf_space(3, 2);
        assert_eq!(v.size(), 9);
        // (1,2) + (2,2) = (0,1)
        assert_eq!(v.apply("+", &[5, 8]).unwrap(), 1);
        assert_eq!(v.apply("*2", &[5]).unwrap(), 2 * 3 + 1);
    }
}

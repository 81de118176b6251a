//! Terms over an operation language, their evaluation, and reducts along an
//! interpretation of symbols by terms.

use std::fmt;

use crate::algebra::{encode_index, FiniteAlgebra, Operation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// Variable `x_{i+1}`.
    Var(usize),
    /// Operation symbol applied to children; constants have no children.
    Op(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn op(name: impl Into<String>, children: Vec<Term>) -> Term {
        Term::Op(name.into(), children)
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Op(name.into(), Vec::new())
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Op(_, ch) => 1 + ch.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Op(_, ch) => 1 + ch.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// One more than the largest variable index, 0 for ground terms.
    pub fn num_vars(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::Op(_, ch) => ch.iter().map(Term::num_vars).max().unwrap_or(0),
        }
    }

    /// Replaces `x_i` by `subst[i]`.
    pub fn substitute(&self, subst: &[Term]) -> Term {
        match self {
            Term::Var(i) => subst.get(*i).cloned().unwrap_or(Term::Var(*i)),
            Term::Op(f, ch) => Term::Op(f.clone(), ch.iter().map(|c| c.substitute(subst)).collect()),
        }
    }

    /// Checks symbols and arities against `alg`, and variables against `arity`.
    pub fn check(&self, alg: &FiniteAlgebra, arity: usize) -> Result<()> {
        match self {
            Term::Var(i) if *i < arity => Ok(()),
            Term::Var(i) => Err(Error::ArityMismatch {
                symbol: format!("x{}", i + 1),
                expected: arity,
                found: i + 1,
            }),
            Term::Op(f, ch) => {
                let op = alg.op(f).ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
                if op.arity != ch.len() {
                    return Err(Error::ArityMismatch {
                        symbol: f.clone(),
                        expected: op.arity,
                        found: ch.len(),
                    });
                }
                ch.iter().try_for_each(|c| c.check(alg, arity))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{}", i + 1),
            Term::Op(name, ch) if ch.is_empty() => write!(f, "{name}"),
            Term::Op(name, ch) => {
                write!(f, "{name}(")?;
                for (k, c) in ch.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

pub fn eval_term(alg: &FiniteAlgebra, t: &Term, args: &[usize]) -> Result<usize> {
    t.check(alg, args.len())?;
    for &a in args {
        alg.check_element(a)?;
    }
    Ok(eval_unchecked(alg, t, args))
}

fn eval_unchecked(alg: &FiniteAlgebra, t: &Term, args: &[usize]) -> usize {
    match t {
        Term::Var(i) => args[*i],
        Term::Op(f, ch) => {
            let op = alg.op(f).expect("checked");
            let vals: Vec<usize> = ch.iter().map(|c| eval_unchecked(alg, c, args)).collect();
            op.table[encode_index(&vals, alg.size())]
        }
    }
}

/// Tabulates `t` as an operation of the given arity on `alg`.
pub fn term_operation(alg: &FiniteAlgebra, t: &Term, name: &str, arity: usize) -> Result<Operation> {
    t.check(alg, arity)?;
    Ok(Operation::from_fn(name, arity, alg.size(), |args| {
        eval_unchecked(alg, t, args)
    }))
}

/// One symbol of the target language and the term interpreting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub symbol: String,
    pub arity: usize,
    pub term: Term,
}

impl Interpretation {
    pub fn new(symbol: impl Into<String>, arity: usize, term: Term) -> Self {
        Interpretation {
            symbol: symbol.into(),
            arity,
            term,
        }
    }
}

/// The algebra on the same universe whose operations are the evaluated terms.
///
/// A constant symbol may be interpreted by a term in one variable, provided
/// that term is constant on `alg`.
pub fn reduct(alg: &FiniteAlgebra, interp: &[Interpretation]) -> Result<FiniteAlgebra> {
    let mut ops = Vec::with_capacity(interp.len());
    for it in interp {
        if it.arity == 0 {
            it.term.check(alg, 1)?;
            let values: Vec<usize> = (0..alg.size())
                .map(|a| eval_unchecked(alg, &it.term, &[a]))
                .collect();
            if values.iter().any(|&v| v != values[0]) {
                return Err(Error::Interpretation(format!(
                    "image `{}` of constant `{}` is not constant",
                    it.term, it.symbol
                )));
            }
            ops.push(Operation::constant(it.symbol.clone(), values[0]));
        } else {
            ops.push(term_operation(alg, &it.term, &it.symbol, it.arity)?);
        }
    }
    FiniteAlgebra::with_name(format!("{}^T", alg.name()), alg.size(), ops)
        .map_err(|e| Error::Interpretation(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn x(i: usize) -> Term {
        Term::var(i)
    }

    #[test]
    fn eval_examples() {
        let semi = fixtures::two_join_semilattice();
        assert_eq!(eval_term(&semi, &x(0), &[1, 0]).unwrap(), 1);
        let t = Term::op("join", vec![x(0), Term::op("join", vec![x(1), x(2)])]);
        assert_eq!(eval_term(&semi, &t, &[0, 1, 0]).unwrap(), 1);

        let two_n = fixtures::two_n();
        let join = Term::op("n", vec![x(0), x(0), x(1)]);
        assert_eq!(eval_term(&two_n, &join, &[1, 0]).unwrap(), 1);
        assert_eq!(eval_term(&two_n, &join, &[0, 0]).unwrap(), 0);
    }

    #[test]
    fn eval_errors() {
        let semi = fixtures::two_join_semilattice();
        assert!(matches!(
            eval_term(&semi, &Term::op("meet", vec![x(0), x(1)]), &[0, 1]),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(
            eval_term(&semi, &Term::op("join", vec![x(0)]), &[0]),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(eval_term(&semi, &x(2), &[0, 1]).is_err());
    }

    #[test]
    fn majority_reduct_is_dual_discriminator_on_two() {
        let lat = fixtures::chain_lattice(2);
        let m = Term::op(
            "join",
            vec![
                Term::op(
                    "join",
                    vec![Term::op("meet", vec![x(0), x(1)]), Term::op("meet", vec![x(0), x(2)])],
                ),
                Term::op("meet", vec![x(1), x(2)]),
            ],
        );
        let r = reduct(&lat, &[Interpretation::new("m", 3, m)]).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let dd = if a == b { a } else { c };
                    assert_eq!(r.apply("m", &[a, b, c]).unwrap(), dd);
                }
            }
        }
    }

    #[test]
    fn projection_reduct_and_xor() {
        let lat = fixtures::chain_lattice(3);
        let r = reduct(
            &lat,
            &[Interpretation::new("meet", 2, x(0)), Interpretation::new("join", 2, x(1))],
        )
        .unwrap();
        assert_eq!(r.apply("meet", &[2, 1]).unwrap(), 2);
        assert_eq!(r.apply("join", &[2, 1]).unwrap(), 1);

        let s = fixtures::two_element("s", 3, |a| a[0] ^ a[1] ^ a[2]);
        let plus = Term::op("s", vec![x(0), x(1), Term::var(2)]);
        // x + y := s(x, y, e) with e = 0, written with e as a constant-free term.
        let zero_plus = reduct(
            &s.with_constant("e", 0).unwrap(),
            &[Interpretation::new("+", 2, plus.substitute(&[x(0), x(1), Term::constant("e")]))],
        )
        .unwrap();
        assert_eq!(zero_plus.op("+").unwrap().table, vec![0, 1, 1, 0]);
    }

    #[test]
    fn constant_images_must_be_constant() {
        let lat = fixtures::chain_lattice(3);
        let bad = reduct(&lat, &[Interpretation::new("c", 0, x(0))]);
        assert!(matches!(bad, Err(Error::Interpretation(_))));
        let good = reduct(
            &lat,
            &[Interpretation::new("c", 0, Term::op("meet", vec![x(0), Term::op("meet", vec![x(0), x(0)])]))],
        );
        assert!(good.is_err());
        let z = fixtures::ring_zn(4);
        let zero = reduct(&z, &[Interpretation::new("0", 0, Term::op("-", vec![x(0), x(0)]))]);
        // Z_n carries a unary minus, so x - x is not expressible; use x + (-x).
        assert!(zero.is_err());
        let zero = reduct(
            &z,
            &[Interpretation::new(
                "o",
                0,
                Term::op("+", vec![x(0), Term::op("-", vec![x(0)])]),
            )],
        )
        .unwrap();
        assert_eq!(zero.op("o").unwrap().table, vec![0]);
    }

    #[test]
    fn reducts_preserve_congruences() {
        let lat = fixtures::boolean_lattice(2);
        let m = Term::op(
            "join",
            vec![Term::op("meet", vec![x(0), x(1)]), Term::op("meet", vec![x(1), x(2)])],
        );
        let r = reduct(&lat, &[Interpretation::new("f", 3, m)]).unwrap();
        for c in lat.all_congruences().unwrap() {
            assert!(r.is_congruence(c.partition()).unwrap());
        }
    }

    #[test]
    fn display_is_prefix() {
        let t = Term::op("f", vec![x(0), Term::op("g", vec![x(2)]), Term::constant("c")]);
        assert_eq!(t.to_string(), "f(x1,g(x3),c)");
        assert_eq!(t.size(), 5);
        assert_eq!(t.depth(), 2);
        assert_eq!(t.num_vars(), 3);
    }
}

//! Deciding Chinese Remainder tuples of congruences of finite algebras.
//!
//! The generic check is exhaustive; specialized polynomial deciders cover
//! vector spaces over prime fields, distributive nearlattices and members of
//! dual discriminator varieties. A hardness gadget built from 3SAT-style
//! formulas and a router for varieties generated by two-element algebras
//! complete the toolkit.

pub mod algebra;
pub mod dualdisc;
pub mod error;
pub mod fixtures;
pub mod generic;
pub mod nearlattice;
pub mod partition;
pub mod post;
pub mod sat;
pub mod term;
pub mod vectorspace;

pub use algebra::{
    is_distributive, naive_meet_irreducibles, Congruence, FiniteAlgebra, Operation, Quotient,
    SubdirectRep,
};
pub use dualdisc::{
    closure, compose_crosses, cross_contains, crosses_containing, irreducible_crosses,
    is_cr_tuple_dualdisc, product_points, sigma_above, Cross, CrossSet, DualDiscReason,
    DualDiscVerdict, SigmaSet,
};
pub use error::{CongruenceViolation, Error, Result};
pub use generic::{
    brute_force_is_cr_tuple, brute_force_is_cr_tuple_with_budget, for_each_system, is_cr_pair_fast,
    make_system, quotient_reduce, solve_system, CongruenceSystem, CrVerdict, DEFAULT_SEARCH_BUDGET,
};
pub use nearlattice::{
    is_cr_tuple_distlattice, is_cr_tuple_nearlattice, is_cr_tuple_tarski, Nearlattice,
    NearlatticeReason, NearlatticeVerdict, NearlatticeView,
};
pub use partition::{BinaryRelation, Partition, UnionFind};
pub use post::{
    affine_gf2_instance, classify, route_decide, ternary_clone, ClassTag, Classification,
    CloneWitness, Route, RoutedVerdict, TernaryFunctionTable,
};
pub use sat::{
    as_left_zero_semigroup, assignment_to_system, find_model, is_coherent, left_zero_semigroup,
    local_models, pentagon, random_3sat_prime, reduce, semilattice_bounded_lift,
    system_to_assignment, u_embed, u_embed_at, validate_3sat_prime, CnfFormula, PartialAssignment,
    ReductionInstance, ValidationReport, Violation,
};
pub use term::{eval_term, reduct, Interpretation, Term};
pub use vectorspace::{
    congruence_to_subspace, coordinatize, is_cr_tuple_vs, is_cr_tuple_vs_algebra, CoordinateChart,
    MatrixGFp, VSInstance,
};

//! Deterministic workloads shared by the criterion benches.

use crtkit_core::fixtures::{boolean_lattice, gf_space, lattice_with_n};
use crtkit_core::{random_3sat_prime, reduce, FiniteAlgebra, MatrixGFp, Partition, ReductionInstance, VSInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// GF(2)^dim with `k` random subspaces, as an instance and as partitions.
pub fn vs_workload(dim: usize, k: usize, seed: u64) -> (FiniteAlgebra, VSInstance, Vec<Partition>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<MatrixGFp> = (0..k)
        .map(|_| {
            let rows = rng.gen_range(1..dim.max(2));
            let vecs: Vec<Vec<usize>> = (0..rows)
                .map(|_| (0..dim).map(|_| rng.gen_range(0..2)).collect())
                .collect();
            MatrixGFp::from_rows(2, dim, &vecs).expect("consistent shape")
        })
        .collect();
    let inst = VSInstance::new(2, dim, bases).expect("prime field");
    let parts = inst.induced_partitions();
    (gf_space(2, dim), inst, parts)
}

/// The Boolean lattice 2^m (with `n`) and `k` kernels of coordinate projections.
pub fn lattice_workload(m: usize, k: usize, seed: u64) -> (FiniteAlgebra, Vec<Partition>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 1usize << m;
    let kernels = (0..k)
        .map(|_| {
            let keep = rng.gen_range(1..n - 1);
            let labels: Vec<usize> = (0..n).map(|x| x & keep).collect();
            Partition::from_labels(&labels)
        })
        .collect();
    (lattice_with_n(&boolean_lattice(m)), kernels)
}

/// Reduction instance for a generated formula with `k_sets` variable sets.
pub fn hard_workload(seed: u64, k_sets: usize) -> ReductionInstance {
    let phi = random_3sat_prime(seed, k_sets, 0.5).expect("valid parameters");
    reduce(&phi).expect("generator output reduces")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_are_well_formed() {
        let (space, inst, parts) = vs_workload(4, 3, 1);
        assert_eq!(space.size(), 16);
        assert_eq!(inst.k(), 3);
        assert!(parts.iter().all(|p| space.is_congruence(p).unwrap()));
        let (lat, kernels) = lattice_workload(4, 5, 2);
        assert!(kernels.iter().all(|p| lat.is_congruence(p).unwrap()));
        assert_eq!(hard_workload(0, 5).k(), 5);
    }

    #[test]
    fn workloads_are_deterministic() {
        assert_eq!(lattice_workload(5, 4, 9).1, lattice_workload(5, 4, 9).1);
        assert_eq!(hard_workload(4, 6).thetas, hard_workload(4, 6).thetas);
    }
}

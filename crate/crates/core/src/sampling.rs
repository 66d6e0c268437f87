//! Random gates, phase sets and states for tests, benchmarks and self-checks.

use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::canonical::{build_ud, InteractionVector, PhaseSet};
use crate::numerics::{kron, Mat2, Mat4, Vec4, C64};

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random element of SU(2).
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let a = gaussian_c64(rng);
    let b = gaussian_c64(rng);
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / n, b / n);
    Mat2([[a, -b.conj()], [b, a.conj()]])
}

/// `A ⊗ B` with independent Haar-random `A, B ∈ SU(2)`.
pub fn random_local<R: Rng + ?Sized>(rng: &mut R) -> Mat4 {
    let a = random_su2(rng);
    let b = random_su2(rng);
    kron(&a, &b)
}

/// Uniform point of the chamber `π/4 ≥ α_x ≥ α_y ≥ α_z ≥ 0`.
pub fn random_interaction_vector<R: Rng + ?Sized>(rng: &mut R) -> InteractionVector {
    let mut v: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..=FRAC_PI_4));
    v.sort_by(|a, b| b.total_cmp(a));
    InteractionVector::new(v[0], v[1], v[2]).expect("sorted draw lies in the chamber")
}

pub fn random_ud<R: Rng + ?Sized>(rng: &mut R) -> (InteractionVector, Mat4) {
    let d = random_interaction_vector(rng);
    (d, build_ud(&d))
}

/// Four independent uniform phases in `(-π, π]`.
pub fn random_phase_set<R: Rng + ?Sized>(rng: &mut R) -> PhaseSet {
    PhaseSet::new(std::array::from_fn(|_| rng.random_range(-PI..PI))).expect("finite phases")
}

/// A random operator diagonal in the magic basis, not necessarily an `U_d`.
pub fn random_magic_diagonal<R: Rng + ?Sized>(rng: &mut R) -> Mat4 {
    random_phase_set(rng).magic_diagonal_operator()
}

/// Haar-random normalized two-qubit state.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> Vec4 {
    Vec4(std::array::from_fn(|_| gaussian_c64(rng))).normalized()
}

//! Seeded random states for property tests and diagnostics.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`: a 64-bit seeded
//! counter-mode generator with independent streams, so every output is a pure
//! function of its seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{c64, CMatrix, CVector, DensityOperator, LinearOperator, QuditRegister, StateVector};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone)]
pub enum RandomState {
    Pure(StateVector),
    Mixed(DensityOperator),
}

fn gaussian(rng: &mut ChaCha8Rng) -> c64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c64::new(re, im)
}

/// Haar-random pure state (normalized complex Gaussian amplitudes).
pub fn random_pure(register: &QuditRegister, seed: u64) -> Result<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = CVector::from_fn(register.total_dim(), |_, _| gaussian(&mut rng));
    StateVector::from_vector(register.clone(), amps)
}

/// Random mixed state: reduction of a random pure state on the doubled register.
pub fn random_mixed(register: &QuditRegister, seed: u64) -> Result<DensityOperator> {
    let doubled = register.concat(register)?;
    let psi = random_pure(&doubled, seed)?;
    let n = register.total_dim();
    // Tr_2 |psi><psi| = A A^dagger with A the n x n reshaping of psi.
    let a = CMatrix::from_fn(n, n, |i, j| psi.amplitude(i * n + j));
    DensityOperator::from_pure_reduction(register.clone(), &a)
}

pub fn random_state(register: &QuditRegister, seed: u64, kind: RandomKind) -> Result<RandomState> {
    Ok(match kind {
        RandomKind::Pure => RandomState::Pure(random_pure(register, seed)?),
        RandomKind::Mixed => RandomState::Mixed(random_mixed(register, seed)?),
    })
}

/// Haar-random unitary on one party of dimension `d` (QR of a Ginibre matrix).
pub fn random_unitary(d: usize, seed: u64) -> Result<LinearOperator> {
    let reg = QuditRegister::new(vec![d])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(d, d, |_, _| gaussian(&mut rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let rj = r[(j, j)];
        let ph = if rj.norm() > 0.0 { rj / rj.norm() } else { c64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= ph;
        }
    }
    LinearOperator::new(reg, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_given_seed() {
        let r = QuditRegister::new(vec![2, 3]).unwrap();
        assert_eq!(random_pure(&r, 7).unwrap(), random_pure(&r, 7).unwrap());
        assert_eq!(random_mixed(&r, 7).unwrap(), random_mixed(&r, 7).unwrap());
        let f = random_pure(&r, 7).unwrap().fidelity(&random_pure(&r, 8).unwrap()).unwrap();
        assert!(f < 1.0 - 1e-6);
    }

    #[test]
    fn mixed_output_is_a_valid_density() {
        let r = QuditRegister::uniform(3, 2).unwrap();
        let rho = random_mixed(&r, 42).unwrap();
        let checked = DensityOperator::new(r, rho.matrix().clone()).unwrap();
        assert!((checked.trace() - 1.0).abs() < 1e-12);
        let ev = checked.eigenvalues().unwrap();
        assert!(ev[0] > -1e-12);
    }

    #[test]
    fn random_unitaries_are_unitary() {
        for d in 2..6 {
            assert!(random_unitary(d, d as u64).unwrap().unitarity_deviation() < 1e-12);
        }
    }

    #[test]
    fn state_kinds() {
        let r = QuditRegister::new(vec![2]).unwrap();
        assert!(matches!(random_state(&r, 1, RandomKind::Pure).unwrap(), RandomState::Pure(_)));
        assert!(matches!(random_state(&r, 1, RandomKind::Mixed).unwrap(), RandomState::Mixed(_)));
    }
}

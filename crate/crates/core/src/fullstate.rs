//! Witnesses built from full knowledge of a pure qubit target state.
//!
//! `|psi><psi|` is expanded over Pauli strings, and each single-qubit factor
//! is written in terms of the projectors of its eigenbasis:
//! `X = P_0^X - P_1^X` (likewise `Y`, `Z`) and `I = P_0^Z + P_1^Z`. The kernel
//! `sum c * P(outcomes)` then equals `<psi|rho|psi>` for every `rho`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::Serialize;

use crate::bound::{BruteForce, BruteForceLimits, BruteForceResult, DeclarationScope, WeightedTerm, WeightedWitness};
use crate::error::{Error, Result};
use crate::tensor::{c64, pauli_x, pauli_y, pauli_z, CMatrix, DensityOperator, LinearOperator, QuditRegister, StateVector};

/// `(1 + sqrt(2)) / 3`.
pub const W_STATE_THRESHOLD: f64 = (1.0 + std::f64::consts::SQRT_2) / 3.0;

/// Single-qubit observable of a Pauli string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Basis actually measured: identity factors use the computational basis.
    pub fn basis(self) -> Pauli {
        if self == Pauli::I {
            Pauli::Z
        } else {
            self
        }
    }

    /// Eigenbasis as columns; column 0 is the `+1` eigenvector.
    pub fn basis_matrix(self) -> CMatrix {
        let h = FRAC_1_SQRT_2;
        let (o, r, i) = (c64::new(0.0, 0.0), c64::new(h, 0.0), c64::new(0.0, h));
        match self.basis() {
            Pauli::X => CMatrix::from_row_slice(2, 2, &[r, r, r, -r]),
            Pauli::Y => CMatrix::from_row_slice(2, 2, &[r, r, i, -i]),
            _ => CMatrix::from_row_slice(2, 2, &[c64::new(1.0, 0.0), o, o, c64::new(1.0, 0.0)]),
        }
    }

    fn operator(self) -> LinearOperator {
        match self {
            Pauli::I => LinearOperator::identity(QuditRegister::new(vec![2]).expect("qubit")),
            Pauli::X => pauli_x(),
            Pauli::Y => pauli_y(),
            Pauli::Z => pauli_z(),
        }
    }

    /// Weight of outcome `v` when this factor is written with projectors.
    fn sign(self, v: u8) -> f64 {
        if self == Pauli::I || v == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// `c * prod_k P^{basis(m_k)}_{v_k}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TomographicTerm {
    pub observables: Vec<Pauli>,
    pub outcomes: Vec<u8>,
    pub coefficient: f64,
}

impl fmt::Display for TomographicTerm {
    /// `XZI 010 0.25`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let obs: String = self.observables.iter().map(|p| p.symbol()).collect();
        let out: String = self.outcomes.iter().map(|v| char::from(b'0' + v)).collect();
        write!(f, "{obs} {out} {}", crate::numfmt::sig(self.coefficient))
    }
}

fn check_qubits(reg: &QuditRegister) -> Result<()> {
    if let Some(&d) = reg.dims().iter().find(|&&d| d != 2) {
        return Err(Error::DimensionMismatch(format!("full-state witnesses need qubits, got local dimension {d}")));
    }
    Ok(())
}

/// Pauli-string expansion of `|psi><psi|` rewritten with basis projectors.
/// Strings with a vanishing expectation value are dropped.
pub fn decompose(psi: &StateVector) -> Result<Vec<TomographicTerm>> {
    let reg = psi.register();
    check_qubits(reg)?;
    let n = reg.parties();
    let norm = 1.0 / (1u64 << n) as f64;
    let mut terms = Vec::new();
    for string in 0..4usize.pow(n as u32) {
        let obs: Vec<Pauli> = (0..n).map(|k| Pauli::ALL[(string / 4usize.pow((n - 1 - k) as u32)) % 4]).collect();
        let mut phi = psi.clone();
        for (k, p) in obs.iter().enumerate() {
            if *p != Pauli::I {
                phi = phi.apply_local(&p.operator(), &[k])?;
            }
        }
        let expect = psi.inner(&phi)?.re;
        if expect.abs() < 1e-14 {
            continue;
        }
        for outcome in 0..(1usize << n) {
            let outcomes: Vec<u8> = (0..n).map(|k| ((outcome >> (n - 1 - k)) & 1) as u8).collect();
            let sign: f64 = obs.iter().zip(&outcomes).map(|(p, &v)| p.sign(v)).product();
            terms.push(TomographicTerm { observables: obs.clone(), outcomes, coefficient: expect * norm * sign });
        }
    }
    Ok(terms)
}

/// `sum_t c_t P_t`, with one measurement per distinct basis tuple.
pub fn reconstruct(terms: &[TomographicTerm], n: usize) -> Result<LinearOperator> {
    let reg = QuditRegister::uniform(n, 2)?;
    let dim = reg.total_dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for t in terms {
        let mut v = CMatrix::from_element(1, 1, c64::new(1.0, 0.0));
        for (p, &o) in t.observables.iter().zip(&t.outcomes) {
            v = v.kronecker(&p.basis_matrix().column(o as usize).into_owned());
        }
        acc += (&v * v.adjoint()) * c64::new(t.coefficient, 0.0);
    }
    LinearOperator::new(reg, acc)
}

fn grouped(terms: &[TomographicTerm]) -> BTreeMap<Vec<Pauli>, Vec<(usize, f64)>> {
    let mut groups: BTreeMap<Vec<Pauli>, Vec<(usize, f64)>> = BTreeMap::new();
    for t in terms {
        let bases: Vec<Pauli> = t.observables.iter().map(|p| p.basis()).collect();
        let idx = t.outcomes.iter().fold(0usize, |acc, &v| 2 * acc + v as usize);
        groups.entry(bases).or_default().push((idx, t.coefficient));
    }
    groups
}

/// `sum_t c_t Prob(outcomes_t | bases_t, rho)`.
pub fn evaluate_fullstate_kernel(terms: &[TomographicTerm], rho: &DensityOperator) -> Result<f64> {
    check_qubits(rho.register())?;
    let n = rho.register().parties();
    if terms.iter().any(|t| t.observables.len() != n || t.outcomes.len() != n) {
        return Err(Error::DimensionMismatch("terms and state have different party counts".into()));
    }
    let mut total = 0.0;
    for (bases, entries) in grouped(terms) {
        let mut r = rho.clone();
        for (k, b) in bases.iter().enumerate() {
            if *b != Pauli::Z {
                r = r.apply_local(&LinearOperator::local(b.basis_matrix().adjoint())?, &[k])?;
            }
        }
        let pops = r.populations();
        total += entries.iter().map(|(i, c)| c * pops[*i]).sum::<f64>();
    }
    Ok(total)
}

/// `kernel > (1 + sqrt(2)) / 3`.
pub fn wstate_verdict(kernel_value: f64) -> bool {
    kernel_value > W_STATE_THRESHOLD
}

/// `(|0..01> + |0..10> + ... + |10..0>) / sqrt(n)`.
pub fn w_state(n: usize) -> Result<StateVector> {
    let reg = QuditRegister::uniform(n, 2)?;
    let mut amps = vec![c64::new(0.0, 0.0); reg.total_dim()];
    for k in 0..n {
        amps[1 << k] = c64::new(1.0, 0.0);
    }
    StateVector::new(reg, amps)
}

/// `(|0..0> + |1..1>) / sqrt(2)`.
pub fn ghz_state(n: usize) -> Result<StateVector> {
    let reg = QuditRegister::uniform(n, 2)?;
    let mut amps = vec![c64::new(0.0, 0.0); reg.total_dim()];
    amps[0] = c64::new(1.0, 0.0);
    amps[reg.total_dim() - 1] = c64::new(1.0, 0.0);
    StateVector::new(reg, amps)
}

/// The terms as a weighted witness, one term per basis tuple.
pub fn to_weighted(terms: &[TomographicTerm], n: usize) -> Result<WeightedWitness> {
    let reg = QuditRegister::uniform(n, 2)?;
    let wterms = grouped(terms)
        .into_iter()
        .map(|(bases, entries)| {
            let mut weights = vec![0.0; reg.total_dim()];
            for (i, c) in entries {
                weights[i] += c;
            }
            WeightedTerm { bases: bases.iter().map(|b| b.basis_matrix()).collect(), weights }
        })
        .collect();
    WeightedWitness::new(reg, wterms)
}

/// Exhaustive cheating bound of the decomposed witness, announcements per
/// local setting. Diagnostic: the value depends on the decomposition.
pub fn brute_force_diagnostic(terms: &[TomographicTerm], n: usize) -> Result<BruteForceResult> {
    let limits = BruteForceLimits { max_settings: 3, ..Default::default() };
    BruteForce::new().limits(limits).scope(DeclarationScope::PerSetting).run(&to_weighted(terms, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{affine_threshold, werner_mix};
    use crate::tensor::{random_mixed, random_pure};

    fn recon_error(psi: &StateVector) -> f64 {
        let terms = decompose(psi).unwrap();
        let r = reconstruct(&terms, psi.register().parties()).unwrap();
        let a = psi.amplitudes();
        (r.matrix() - a * a.adjoint()).camax()
    }

    #[test]
    fn reconstruction_is_exact() {
        let zero = StateVector::basis(QuditRegister::new(vec![2]).unwrap(), 0).unwrap();
        assert!(recon_error(&zero) < 1e-12);
        assert!(recon_error(&w_state(3).unwrap()) < 1e-10);
        assert!(recon_error(&ghz_state(3).unwrap()) < 1e-10);
        assert!(recon_error(&random_pure(&QuditRegister::uniform(2, 2).unwrap(), 3).unwrap()) < 1e-10);
    }

    #[test]
    fn term_count_bound() {
        let w = w_state(3).unwrap();
        assert!(decompose(&w).unwrap().len() <= 64 * 8);
    }

    #[test]
    fn kernel_is_the_fidelity() {
        let w = w_state(3).unwrap();
        let terms = decompose(&w).unwrap();
        let pure = DensityOperator::from_pure(&w).unwrap();
        assert!((evaluate_fullstate_kernel(&terms, &pure).unwrap() - 1.0).abs() < 1e-10);
        let mm = DensityOperator::maximally_mixed(w.register().clone()).unwrap();
        assert!((evaluate_fullstate_kernel(&terms, &mm).unwrap() - 0.125).abs() < 1e-12);
        for n in [2, 3] {
            let reg = QuditRegister::uniform(n, 2).unwrap();
            for seed in 0..5 {
                let psi = random_pure(&reg, seed).unwrap();
                let rho = random_mixed(&reg, 1000 + seed).unwrap();
                let t = decompose(&psi).unwrap();
                let f = rho.fidelity_with_pure(&psi).unwrap();
                assert!((evaluate_fullstate_kernel(&t, &rho).unwrap() - f).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn qudits_rejected() {
        let s = random_pure(&QuditRegister::uniform(2, 3).unwrap(), 1).unwrap();
        assert!(decompose(&s).is_err());
    }

    #[test]
    fn w_state_verdicts() {
        assert!((W_STATE_THRESHOLD - 0.804_737_9).abs() < 1e-7);
        assert!(wstate_verdict(1.0));
        assert!(!wstate_verdict(W_STATE_THRESHOLD));
        let w = w_state(3).unwrap();
        let terms = decompose(&w).unwrap();
        let p_star = affine_threshold(1.0, 0.125, W_STATE_THRESHOLD).unwrap();
        assert!((p_star - (1.0 - W_STATE_THRESHOLD) * 8.0 / 7.0).abs() < 1e-15);
        assert!((p_star - 0.223_156_6).abs() < 2e-7);
        let below = evaluate_fullstate_kernel(&terms, &werner_mix(&w, p_star - 1e-6).unwrap()).unwrap();
        let above = evaluate_fullstate_kernel(&terms, &werner_mix(&w, p_star + 1e-6).unwrap()).unwrap();
        assert!(wstate_verdict(below) && !wstate_verdict(above));
    }

    #[test]
    fn weighted_form_and_diagnostic() {
        let w = w_state(3).unwrap();
        let terms = decompose(&w).unwrap();
        let ww = to_weighted(&terms, 3).unwrap();
        assert!(ww.terms().len() <= 27);
        let r = brute_force_diagnostic(&terms, 3).unwrap();
        assert!(r.value.is_finite());
        assert!(r.value <= 1.0 + 1e-9);
    }

    #[test]
    fn term_display() {
        let t = TomographicTerm { observables: vec![Pauli::X, Pauli::Z, Pauli::I], outcomes: vec![0, 1, 0], coefficient: 0.25 };
        assert_eq!(t.to_string(), "XZI 010 0.25");
    }
}

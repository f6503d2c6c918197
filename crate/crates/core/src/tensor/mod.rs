//! Dense complex linear algebra over composite qudit Hilbert spaces.
//!
//! Basis indices are big-endian in the party order: party 0 is the most
//! significant digit, so `|v_0 v_1 ... v_{N-1}>` sits at
//! `sum_k v_k * prod_{l>k} d_l`.

mod density;
mod eigen;
mod gates;
mod operator;
mod random;
mod register;
mod state;

use std::sync::OnceLock;

pub use density::DensityOperator;
pub use eigen::{hermitian_eigenvalues, hermitian_max_eigenvalue, jacobi_eigenvalues, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL};
pub use gates::{
    basis_matrix, hadamard, measurement_basis, pauli_x, pauli_y, pauli_z, qft_matrix, z_generalized,
};
pub use operator::LinearOperator;
pub use random::{random_mixed, random_pure, random_state, random_unitary, RandomKind, RandomState};
pub use register::QuditRegister;
pub use state::StateVector;

/// Double-precision complex scalar.
#[allow(non_camel_case_types)]
pub type c64 = num_complex::Complex64;

pub type CMatrix = nalgebra::DMatrix<c64>;
pub type CVector = nalgebra::DVector<c64>;

/// Default cap on state-vector length.
pub const DEFAULT_STATE_CAP: usize = 1 << 22;
/// Default cap on the side length of explicit density matrices.
pub const DEFAULT_DENSITY_CAP: usize = 1 << 12;
/// Environment variable overriding the density-matrix cap.
pub const CAP_ENV: &str = "STEERLAB_CAP";

fn cap_override() -> Option<usize> {
    static CAP: OnceLock<Option<usize>> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
    })
}

/// Maximum state-vector length; raised (never lowered) by `STEERLAB_CAP`.
pub fn state_cap() -> usize {
    cap_override().map_or(DEFAULT_STATE_CAP, |c| c.max(DEFAULT_STATE_CAP))
}

/// Maximum density-matrix side length; `STEERLAB_CAP` replaces it.
pub fn density_cap() -> usize {
    cap_override().unwrap_or(DEFAULT_DENSITY_CAP)
}

/// Offsets splitting a register into a target group and the rest.
///
/// Every basis index is `outer[o] + inner[t]` for exactly one pair, where `t`
/// enumerates the target digits big-endian in the order given.
pub(crate) struct Split {
    pub inner: Vec<usize>,
    pub outer: Vec<usize>,
}

impl Split {
    pub fn new(reg: &QuditRegister, targets: &[usize]) -> Split {
        let strides = reg.strides();
        let rest: Vec<usize> = (0..reg.parties()).filter(|k| !targets.contains(k)).collect();
        Split {
            inner: offsets(reg.dims(), &strides, targets),
            outer: offsets(reg.dims(), &strides, &rest),
        }
    }
}

fn offsets(dims: &[usize], strides: &[usize], parties: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &p in parties {
        let mut next = Vec::with_capacity(out.len() * dims[p]);
        for &base in &out {
            for v in 0..dims[p] {
                next.push(base + v * strides[p]);
            }
        }
        out = next;
    }
    out
}

pub(crate) fn check_targets(reg: &QuditRegister, targets: &[usize]) -> crate::Result<usize> {
    let mut seen = vec![false; reg.parties()];
    let mut dim = 1usize;
    for &t in targets {
        if t >= reg.parties() {
            return Err(crate::Error::InvalidParty { index: t, parties: reg.parties() });
        }
        if seen[t] {
            return Err(crate::Error::DuplicateParty(t));
        }
        seen[t] = true;
        dim *= reg.dim(t);
    }
    Ok(dim)
}

/// Largest elementwise deviation `|A_ij - conj(A_ji)|`.
pub(crate) fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// `B diag(w) B^dagger` for a unitary `B`; skips zero weights.
pub(crate) fn weighted_projector_sum(basis: &CMatrix, weights: &[f64]) -> CMatrix {
    let n = basis.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (col, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let v = basis.column(col);
        for j in 0..n {
            let cj = v[j].conj() * w;
            if cj == c64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..n {
                out[(i, j)] += v[i] * cj;
            }
        }
    }
    out
}

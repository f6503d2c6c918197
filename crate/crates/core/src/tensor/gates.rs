use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::{c64, CMatrix, LinearOperator, QuditRegister, StateVector};
use crate::error::{Error, Result};

fn omega_pow(d: usize, k: usize) -> c64 {
    c64::from_polar(1.0, 2.0 * PI * ((k % d) as f64) / d as f64)
}

/// Quantum Fourier transform, `F[v][w] = omega^{vw} / sqrt(d)`.
pub fn qft_matrix(d: usize) -> Result<LinearOperator> {
    let reg = QuditRegister::new(vec![d])?;
    let s = 1.0 / (d as f64).sqrt();
    let m = CMatrix::from_fn(d, d, |v, w| omega_pow(d, v * w) * s);
    Ok(LinearOperator::from_parts_unchecked(reg, m))
}

/// Generalized Pauli `Z = diag(1, omega, ..., omega^{d-1})`.
pub fn z_generalized(d: usize) -> Result<LinearOperator> {
    let reg = QuditRegister::new(vec![d])?;
    let diag: Vec<c64> = (0..d).map(|k| omega_pow(d, k)).collect();
    LinearOperator::diagonal(reg, &diag)
}

/// Basis vectors of measurement setting 1 (computational) or 2 (`F^dagger |v>`)
/// as the columns of a unitary.
pub fn basis_matrix(d: usize, setting: usize) -> Result<CMatrix> {
    match setting {
        1 => {
            QuditRegister::new(vec![d])?;
            Ok(CMatrix::identity(d, d))
        }
        2 => Ok(qft_matrix(d)?.adjoint().into_matrix()),
        s => Err(Error::InvalidSetting(s)),
    }
}

/// The basis `{|v>}` (setting 1) or `{F^dagger |v>}` (setting 2).
pub fn measurement_basis(d: usize, setting: usize) -> Result<Vec<StateVector>> {
    let m = basis_matrix(d, setting)?;
    let reg = QuditRegister::new(vec![d])?;
    Ok((0..d)
        .map(|v| StateVector::from_parts_unchecked(reg.clone(), m.column(v).into_owned()))
        .collect())
}

fn qubit(entries: [c64; 4]) -> LinearOperator {
    let reg = QuditRegister::new(vec![2]).expect("qubit register");
    LinearOperator::from_parts_unchecked(reg, CMatrix::from_row_slice(2, 2, &entries))
}

/// `H |0> = |+>`, `H |1> = |->`.
pub fn hadamard() -> LinearOperator {
    let h = c64::new(FRAC_1_SQRT_2, 0.0);
    qubit([h, h, h, -h])
}

pub fn pauli_x() -> LinearOperator {
    let (o, l) = (c64::new(0.0, 0.0), c64::new(1.0, 0.0));
    qubit([o, l, l, o])
}

pub fn pauli_y() -> LinearOperator {
    let o = c64::new(0.0, 0.0);
    qubit([o, c64::new(0.0, -1.0), c64::new(0.0, 1.0), o])
}

pub fn pauli_z() -> LinearOperator {
    let (o, l) = (c64::new(0.0, 0.0), c64::new(1.0, 0.0));
    qubit([l, o, o, -l])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qft_is_unitary_for_small_d() {
        for d in 2..=12 {
            let f = qft_matrix(d).unwrap();
            assert!(f.unitarity_deviation() < 1e-12, "d = {d}");
        }
        assert!(matches!(qft_matrix(1), Err(Error::InvalidDimension(1))));
    }

    #[test]
    fn qft_d2_is_hadamard() {
        let f = qft_matrix(2).unwrap();
        assert!(f.max_abs_diff(&hadamard()) < 1e-15);
        for z in f.matrix().iter() {
            assert!((z.norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn qft_d3_entry() {
        let f = qft_matrix(3).unwrap();
        let expected = c64::from_polar(1.0, 4.0 * PI / 3.0) / 3f64.sqrt();
        assert!((f.entry(1, 2) - expected).norm() < 1e-15);
    }

    #[test]
    fn z_generalized_values() {
        let z2 = z_generalized(2).unwrap();
        assert!(z2.max_abs_diff(&pauli_z()) < 1e-15);
        let z3 = z_generalized(3).unwrap();
        let w = c64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((z3.entry(1, 1) - w).norm() < 1e-15);
        assert!((z3.entry(2, 2) - w * w).norm() < 1e-15);
        for d in 2..=9 {
            let z = z_generalized(d).unwrap();
            let id = LinearOperator::identity(QuditRegister::new(vec![d]).unwrap());
            assert!(z.pow(d as u32).max_abs_diff(&id) < 1e-12);
        }
        assert!(z_generalized(0).is_err());
    }

    #[test]
    fn bases_are_complementary() {
        for d in [2, 3, 5, 7] {
            let b1 = measurement_basis(d, 1).unwrap();
            let b2 = measurement_basis(d, 2).unwrap();
            for (v, e) in b1.iter().enumerate() {
                assert_eq!(e.amplitude(v), c64::new(1.0, 0.0));
            }
            for x in &b1 {
                for y in &b2 {
                    let o = x.inner(y).unwrap().norm();
                    assert!((o - 1.0 / (d as f64).sqrt()).abs() < 1e-12);
                }
            }
        }
        let pm = measurement_basis(2, 2).unwrap();
        assert!((pm[0].amplitude(1).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((pm[1].amplitude(1).re + FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(matches!(measurement_basis(3, 3), Err(Error::InvalidSetting(3))));
    }
}

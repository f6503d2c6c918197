use super::{c64, check_targets, CVector, LinearOperator, QuditRegister, Split};
use crate::error::{Error, Result};

/// Pure state of a composite register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    register: QuditRegister,
    amps: CVector,
}

impl StateVector {
    /// Wraps raw amplitudes and normalizes them.
    pub fn new(register: QuditRegister, amps: Vec<c64>) -> Result<Self> {
        Self::from_vector(register, CVector::from_vec(amps))
    }

    pub fn from_vector(register: QuditRegister, amps: CVector) -> Result<Self> {
        if amps.len() != register.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a register of dimension {}",
                amps.len(),
                register.total_dim()
            )));
        }
        let norm = amps.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::DimensionMismatch("state vector has zero or non-finite norm".into()));
        }
        Ok(Self { register, amps: amps / c64::new(norm, 0.0) })
    }

    /// Computational basis state `|index>`.
    pub fn basis(register: QuditRegister, index: usize) -> Result<Self> {
        if index >= register.total_dim() {
            return Err(Error::OutOfRange { what: "basis index", value: index as f64 });
        }
        let mut amps = CVector::zeros(register.total_dim());
        amps[index] = c64::new(1.0, 0.0);
        Ok(Self { register, amps })
    }

    /// Product state of single-party states, party 0 first.
    pub fn product(factors: &[StateVector]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::DimensionMismatch("empty product".into()))?;
        rest.iter().try_fold(first.clone(), |acc, f| acc.kron(f))
    }

    pub(crate) fn from_parts_unchecked(register: QuditRegister, amps: CVector) -> Self {
        Self { register, amps }
    }

    pub fn register(&self) -> &QuditRegister {
        &self.register
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> c64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<c64> {
        self.same_register(other)?;
        Ok(self.amps.dotc(&other.amps))
    }

    /// `|<self|other>|^2`; the phase-insensitive equality measure.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Tensor product, registers concatenated.
    pub fn kron(&self, other: &StateVector) -> Result<StateVector> {
        let register = self.register.concat(&other.register)?;
        Ok(Self { register, amps: self.amps.kronecker(&other.amps) })
    }

    /// Applies `op` to the listed parties (in that order), identity elsewhere.
    pub fn apply_local(&self, op: &LinearOperator, targets: &[usize]) -> Result<StateVector> {
        let amps = apply_local_vec(&self.register, &self.amps, op, targets)?;
        Ok(Self { register: self.register.clone(), amps })
    }

    /// Applies a full-register operator.
    pub fn apply(&self, op: &LinearOperator) -> Result<StateVector> {
        if op.register() != &self.register {
            return Err(Error::DimensionMismatch("operator and state registers differ".into()));
        }
        Ok(Self { register: self.register.clone(), amps: op.matrix() * &self.amps })
    }

    /// Re-orders parties: party `k` of the result is party `order[k]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<StateVector> {
        if order.len() != self.register.parties() {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        check_targets(&self.register, order)?;
        let register = self.register.subregister(order)?;
        let mut amps = CVector::zeros(self.amps.len());
        for (i, a) in self.amps.iter().enumerate() {
            let d = self.register.digits(i);
            let nd: Vec<usize> = order.iter().map(|&p| d[p]).collect();
            amps[register.index_of(&nd)] = *a;
        }
        Ok(Self { register, amps })
    }

    /// Born probabilities in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn same_register(&self, other: &StateVector) -> Result<()> {
        if self.register != other.register {
            return Err(Error::DimensionMismatch(format!(
                "registers {:?} and {:?}",
                self.register.dims(),
                other.register.dims()
            )));
        }
        Ok(())
    }
}

pub(crate) fn apply_local_vec(
    reg: &QuditRegister,
    amps: &CVector,
    op: &LinearOperator,
    targets: &[usize],
) -> Result<CVector> {
    let dim = check_targets(reg, targets)?;
    if op.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "operator of dimension {} on targets of total dimension {}",
            op.dim(),
            dim
        )));
    }
    let split = Split::new(reg, targets);
    let m = op.matrix();
    let mut out = CVector::zeros(amps.len());
    let mut buf = vec![c64::new(0.0, 0.0); dim];
    for &o in &split.outer {
        for (t, b) in buf.iter_mut().enumerate() {
            *b = amps[o + split.inner[t]];
        }
        for r in 0..dim {
            let mut acc = c64::new(0.0, 0.0);
            for (c, b) in buf.iter().enumerate() {
                acc += m[(r, c)] * b;
            }
            out[o + split.inner[r]] = acc;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{qft_matrix, z_generalized};

    fn reg(d: &[usize]) -> QuditRegister {
        QuditRegister::new(d.to_vec()).unwrap()
    }

    #[test]
    fn kron_of_basis_states() {
        let zero = StateVector::basis(reg(&[2]), 0).unwrap();
        let one = StateVector::basis(reg(&[2]), 1).unwrap();
        let k = zero.kron(&one).unwrap();
        assert_eq!(k.register().dims(), &[2, 2]);
        assert_eq!(k.amplitude(1), c64::new(1.0, 0.0));
        let big = StateVector::basis(reg(&[2, 3]), 0)
            .unwrap()
            .kron(&StateVector::basis(reg(&[2]), 0).unwrap())
            .unwrap();
        assert_eq!(big.register().total_dim(), 12);
    }

    #[test]
    fn apply_local_roundtrip_and_errors() {
        let r = reg(&[3, 2, 3]);
        let amps: Vec<c64> = (0..18).map(|i| c64::new(i as f64, (i * i) as f64 * 0.1)).collect();
        let psi = StateVector::new(r, amps).unwrap();
        let f = qft_matrix(3).unwrap();
        let back = psi.apply_local(&f, &[2]).unwrap().apply_local(&f.adjoint(), &[2]).unwrap();
        assert!((psi.fidelity(&back).unwrap() - 1.0).abs() < 1e-12);
        for (a, b) in psi.amplitudes().iter().zip(back.amplitudes().iter()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!((psi.apply_local(&f, &[0]).unwrap().norm() - 1.0).abs() < 1e-12);
        assert!(matches!(psi.apply_local(&f, &[1]), Err(Error::DimensionMismatch(_))));
        let ff = f.kron(&f).unwrap();
        assert!(matches!(psi.apply_local(&ff, &[0, 0]), Err(Error::DuplicateParty(0))));
        // non-adjacent two-party target matches the kron embedding
        let z = z_generalized(3).unwrap();
        let zf = z.kron(&f).unwrap();
        let a = psi.apply_local(&zf, &[0, 2]).unwrap();
        let b = psi.apply_local(&z, &[0]).unwrap().apply_local(&f, &[2]).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes().iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn permutation_moves_digits() {
        let r = reg(&[2, 3]);
        let psi = StateVector::basis(r, 5).unwrap(); // digits (1, 2)
        let p = psi.permute(&[1, 0]).unwrap();
        assert_eq!(p.register().dims(), &[3, 2]);
        assert_eq!(p.amplitude(2 * 2 + 1), c64::new(1.0, 0.0));
    }
}

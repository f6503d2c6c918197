use super::state::apply_local_vec;
use super::{
    c64, check_targets, density_cap, hermitian_deviation, jacobi_eigenvalues, CMatrix, CVector,
    LinearOperator, QuditRegister, Split, StateVector,
};
use crate::error::{CapKind, Error, Result};

/// Hermiticity tolerance, elementwise.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Trace tolerance.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue still accepted.
pub const PSD_TOL: f64 = 1e-9;

/// Mixed state of a composite register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    register: QuditRegister,
    matrix: CMatrix,
}

fn check_cap(register: &QuditRegister) -> Result<()> {
    let n = register.total_dim();
    if n > density_cap() {
        return Err(Error::CapExceeded { kind: CapKind::DensityMatrix, requested: n, cap: density_cap() });
    }
    Ok(())
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(register: QuditRegister, matrix: CMatrix) -> Result<Self> {
        check_cap(&register)?;
        let n = register.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a register of dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                n
            )));
        }
        let dev = hermitian_deviation(&matrix);
        if dev > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {dev:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min = jacobi_eigenvalues(&matrix)?.first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { register, matrix })
    }

    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        check_cap(psi.register())?;
        let a = psi.amplitudes();
        Ok(Self { register: psi.register().clone(), matrix: a * a.adjoint() })
    }

    /// `A A^dagger` for the `n x m` reshaping `A` of a bipartite pure state,
    /// i.e. the partial trace over its second factor.
    pub(crate) fn from_pure_reduction(register: QuditRegister, a: &CMatrix) -> Result<Self> {
        check_cap(&register)?;
        Ok(Self { register, matrix: a * a.adjoint() })
    }

    pub fn maximally_mixed(register: QuditRegister) -> Result<Self> {
        check_cap(&register)?;
        let n = register.total_dim();
        let matrix = CMatrix::identity(n, n) * c64::new(1.0 / n as f64, 0.0);
        Ok(Self { register, matrix })
    }

    /// `weight * self + (1 - weight) * other`.
    pub fn mix(&self, other: &DensityOperator, weight: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::OutOfRange { what: "mixing weight", value: weight });
        }
        self.same_register(other)?;
        let matrix = &self.matrix * c64::new(weight, 0.0) + &other.matrix * c64::new(1.0 - weight, 0.0);
        Ok(Self { register: self.register.clone(), matrix })
    }

    pub fn register(&self) -> &QuditRegister {
        &self.register
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        jacobi_eigenvalues(&self.matrix)
    }

    /// `<psi|rho|psi>`.
    pub fn fidelity_with_pure(&self, psi: &StateVector) -> Result<f64> {
        if psi.register() != &self.register {
            return Err(Error::DimensionMismatch("state and density registers differ".into()));
        }
        let a = psi.amplitudes();
        let v = &self.matrix * a;
        Ok(a.dotc(&v).re)
    }

    /// `Re Tr[op rho]`.
    pub fn expectation(&self, op: &LinearOperator) -> Result<f64> {
        if op.register() != &self.register {
            return Err(Error::DimensionMismatch("operator and density registers differ".into()));
        }
        let m = op.matrix();
        let n = self.dim();
        let mut acc = c64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += m[(i, k)] * self.matrix[(k, i)];
            }
        }
        Ok(acc.re)
    }

    /// Diagonal entries (computational-basis populations).
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    /// Reduced state on `keep`; kept parties stay in register order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        check_targets(&self.register, keep)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        let register = self.register.subregister(&keep)?;
        let split = Split::new(&self.register, &keep);
        let n = split.inner.len();
        let mut out = CMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                let mut acc = c64::new(0.0, 0.0);
                for &o in &split.outer {
                    acc += self.matrix[(o + split.inner[i], o + split.inner[j])];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(Self { register, matrix: out })
    }

    /// `op rho op^dagger` with `op` on `targets`.
    pub fn apply_local(&self, op: &LinearOperator, targets: &[usize]) -> Result<DensityOperator> {
        let left = apply_left(&self.register, &self.matrix, op, targets)?;
        let right = apply_left(&self.register, &left.adjoint(), op, targets)?;
        Ok(Self { register: self.register.clone(), matrix: right.adjoint() })
    }

    /// `op rho op^dagger` with a full-register operator.
    pub fn conjugate(&self, op: &LinearOperator) -> Result<DensityOperator> {
        if op.register() != &self.register {
            return Err(Error::DimensionMismatch("operator and density registers differ".into()));
        }
        let m = op.matrix();
        Ok(Self { register: self.register.clone(), matrix: m * &self.matrix * m.adjoint() })
    }

    pub fn kron(&self, other: &DensityOperator) -> Result<DensityOperator> {
        let register = self.register.concat(&other.register)?;
        check_cap(&register)?;
        Ok(Self { register, matrix: self.matrix.kronecker(&other.matrix) })
    }

    /// Re-orders parties: party `k` of the result is party `order[k]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<DensityOperator> {
        if order.len() != self.register.parties() {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        let register = self.register.subregister(order)?;
        let n = self.dim();
        let map: Vec<usize> = (0..n)
            .map(|i| {
                let d = self.register.digits(i);
                let nd: Vec<usize> = order.iter().map(|&p| d[p]).collect();
                register.index_of(&nd)
            })
            .collect();
        let mut out = CMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                out[(map[i], map[j])] = self.matrix[(i, j)];
            }
        }
        Ok(Self { register, matrix: out })
    }

    fn same_register(&self, other: &DensityOperator) -> Result<()> {
        if self.register != other.register {
            return Err(Error::DimensionMismatch("density registers differ".into()));
        }
        Ok(())
    }
}

/// `op` applied on the left of every column of `m`.
pub(crate) fn apply_left(
    reg: &QuditRegister,
    m: &CMatrix,
    op: &LinearOperator,
    targets: &[usize],
) -> Result<CMatrix> {
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for j in 0..n {
        let col: CVector = m.column(j).into_owned();
        let new = apply_local_vec(reg, &col, op, targets)?;
        out.set_column(j, &new);
    }
    Ok(out)
}

use super::{c64, hermitian_deviation, CMatrix, QuditRegister};
use crate::error::{Error, Result};

/// Square operator acting on a register.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    register: QuditRegister,
    matrix: CMatrix,
}

impl LinearOperator {
    pub fn new(register: QuditRegister, matrix: CMatrix) -> Result<Self> {
        let n = register.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a register of dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                n
            )));
        }
        Ok(Self { register, matrix })
    }

    /// Single-party operator from a square matrix.
    pub fn local(matrix: CMatrix) -> Result<Self> {
        let reg = QuditRegister::new(vec![matrix.nrows()])?;
        Self::new(reg, matrix)
    }

    pub fn identity(register: QuditRegister) -> Self {
        let n = register.total_dim();
        Self { register, matrix: CMatrix::identity(n, n) }
    }

    pub fn diagonal(register: QuditRegister, diag: &[c64]) -> Result<Self> {
        if diag.len() != register.total_dim() {
            return Err(Error::DimensionMismatch("diagonal length".into()));
        }
        let n = diag.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        Ok(Self { register, matrix: m })
    }

    pub(crate) fn from_parts_unchecked(register: QuditRegister, matrix: CMatrix) -> Self {
        Self { register, matrix }
    }

    pub fn register(&self) -> &QuditRegister {
        &self.register
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> c64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self { register: self.register.clone(), matrix: self.matrix.adjoint() }
    }

    /// Matrix product `self * rhs`.
    pub fn compose(&self, rhs: &LinearOperator) -> Result<Self> {
        if self.register != rhs.register {
            return Err(Error::DimensionMismatch("composing operators on different registers".into()));
        }
        Ok(Self { register: self.register.clone(), matrix: &self.matrix * &rhs.matrix })
    }

    pub fn add(&self, rhs: &LinearOperator) -> Result<Self> {
        if self.register != rhs.register {
            return Err(Error::DimensionMismatch("adding operators on different registers".into()));
        }
        Ok(Self { register: self.register.clone(), matrix: &self.matrix + &rhs.matrix })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { register: self.register.clone(), matrix: &self.matrix * c64::new(s, 0.0) }
    }

    /// `k`-th matrix power.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = CMatrix::identity(self.dim(), self.dim());
        for _ in 0..k {
            acc = &acc * &self.matrix;
        }
        Self { register: self.register.clone(), matrix: acc }
    }

    pub fn kron(&self, rhs: &LinearOperator) -> Result<Self> {
        let register = self.register.concat(&rhs.register)?;
        Ok(Self { register, matrix: self.matrix.kronecker(&rhs.matrix) })
    }

    pub fn trace(&self) -> c64 {
        self.matrix.trace()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        hermitian_deviation(&self.matrix)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Largest entry of `|U^dagger U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.matrix.adjoint() * &self.matrix;
        let n = self.dim();
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((p[(i, j)] - c64::new(target, 0.0)).norm());
            }
        }
        dev
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &LinearOperator) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest eigenvalue of a Hermitian operator (cyclic Jacobi).
    pub fn max_eigenvalue(&self) -> Result<f64> {
        super::hermitian_max_eigenvalue(self)
    }
}

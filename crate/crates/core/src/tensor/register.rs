use serde::{Deserialize, Serialize};

use super::state_cap;
use crate::error::{CapKind, Error, Result};

/// Ordered local dimensions of a composite qudit system.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct QuditRegister {
    dims: Vec<usize>,
    total: usize,
}

impl QuditRegister {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::DimensionMismatch("register needs at least one party".into()));
        }
        let mut total = 1usize;
        for &d in &dims {
            if d < 2 {
                return Err(Error::InvalidDimension(d));
            }
            total = total.checked_mul(d).ok_or(Error::CapExceeded {
                kind: CapKind::StateVector,
                requested: usize::MAX,
                cap: state_cap(),
            })?;
        }
        if total > state_cap() {
            return Err(Error::CapExceeded {
                kind: CapKind::StateVector,
                requested: total,
                cap: state_cap(),
            });
        }
        Ok(Self { dims, total })
    }

    /// `n` parties of dimension `d`.
    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, party: usize) -> usize {
        self.dims[party]
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    /// Common local dimension, if every party has the same one.
    pub fn uniform_dim(&self) -> Option<usize> {
        let d = self.dims[0];
        self.dims.iter().all(|&x| x == d).then_some(d)
    }

    /// Big-endian strides: `strides[k] = prod_{l>k} d_l`.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    /// Per-party digits of a basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = index % self.dims[k];
            index /= self.dims[k];
        }
        out
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&v, &d)| acc * d + v)
    }

    /// Register of the given parties, in the order given.
    pub fn subregister(&self, parties: &[usize]) -> Result<Self> {
        super::check_targets(self, parties)?;
        Self::new(parties.iter().map(|&p| self.dims[p]).collect())
    }

    /// Dimensions of `self` followed by those of `other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new(dims)
    }
}

impl TryFrom<Vec<usize>> for QuditRegister {
    type Error = Error;
    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<QuditRegister> for Vec<usize> {
    fn from(r: QuditRegister) -> Self {
        r.dims
    }
}

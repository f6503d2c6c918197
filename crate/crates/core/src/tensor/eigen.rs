//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use super::{c64, hermitian_deviation, CMatrix, LinearOperator};
use crate::error::{Error, Result};

/// Convergence threshold on the off-diagonal Frobenius norm, relative to
/// `max(1, ||A||_F)`.
pub const JACOBI_OFF_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

const HERMITIAN_INPUT_TOL: f64 = 1e-10;

fn off_norm(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Only the lower/upper consistency of the input is assumed, not checked;
/// use [`hermitian_eigenvalues`] for validated input.
pub fn jacobi_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch("eigenvalues of a non-square matrix".into()));
    }
    let mut a = m.clone();
    let scale = a.norm().max(1.0);
    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= JACOBI_OFF_TOL * scale {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Annihilates `a[p][q]` with a complex Givens rotation `A <- V^dagger A V`.
fn rotate(a: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // V = diag(1, conj(phase)) on (p, q) times the real rotation [[c, s], [-s, c]]
    let vpp = c64::new(c, 0.0);
    let vpq = c64::new(s, 0.0);
    let vqp = -phase.conj() * s;
    let vqq = phase.conj() * c;
    let n = a.nrows();
    for k in 0..n {
        let x = a[(k, p)];
        let y = a[(k, q)];
        a[(k, p)] = x * vpp + y * vqp;
        a[(k, q)] = x * vpq + y * vqq;
    }
    for k in 0..n {
        let x = a[(p, k)];
        let y = a[(q, k)];
        a[(p, k)] = vpp.conj() * x + vqp.conj() * y;
        a[(q, k)] = vpq.conj() * x + vqq.conj() * y;
    }
    a[(p, q)] = c64::new(0.0, 0.0);
    a[(q, p)] = c64::new(0.0, 0.0);
    a[(p, p)] = c64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = c64::new(a[(q, q)].re, 0.0);
}

/// Eigenvalues of a Hermitian operator, ascending.
pub fn hermitian_eigenvalues(op: &LinearOperator) -> Result<Vec<f64>> {
    let dev = hermitian_deviation(op.matrix());
    if dev > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian(dev));
    }
    jacobi_eigenvalues(op.matrix())
}

/// Largest eigenvalue of a Hermitian operator.
pub fn hermitian_max_eigenvalue(op: &LinearOperator) -> Result<f64> {
    Ok(*hermitian_eigenvalues(op)?.last().expect("non-empty register"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{random_pure, QuditRegister, StateVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c64::new(rng.random_range(-1.0..1.0), 0.0);
            for j in i + 1..n {
                let z = c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    /// Number of eigenvalues below `x`, from the inertia of `A - xI`
    /// (Gaussian elimination without pivoting, Sylvester's law).
    fn count_below(a: &CMatrix, x: f64) -> usize {
        let n = a.nrows();
        let mut m = a.clone();
        for i in 0..n {
            m[(i, i)] -= c64::new(x, 0.0);
        }
        let mut neg = 0;
        for k in 0..n {
            let mut piv = m[(k, k)].re;
            if piv == 0.0 {
                piv = -1e-300;
            }
            if piv < 0.0 {
                neg += 1;
            }
            for i in k + 1..n {
                let f = m[(i, k)] / piv;
                for j in k + 1..n {
                    let mkj = m[(k, j)];
                    m[(i, j)] -= f * mkj;
                }
            }
        }
        neg
    }

    fn bisection_max(a: &CMatrix) -> f64 {
        let n = a.nrows();
        let r: f64 = (0..n)
            .map(|i| (0..n).map(|j| a[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let (mut lo, mut hi) = (-r - 1.0, r + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if count_below(a, mid) == n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn identity_and_projectors() {
        let id = LinearOperator::identity(QuditRegister::new(vec![4]).unwrap());
        assert!((hermitian_max_eigenvalue(&id).unwrap() - 1.0).abs() < 1e-14);
        // |+><+| + |0><0|
        let reg = QuditRegister::new(vec![2]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c64::new(1.5, 0.0), c64::new(0.5, 0.0), c64::new(0.5, 0.0), c64::new(0.5, 0.0)],
        );
        let op = LinearOperator::new(reg, m).unwrap();
        assert!((hermitian_max_eigenvalue(&op).unwrap() - (1.0 + h)).abs() < 1e-12);
    }

    #[test]
    fn matches_inertia_bisection_oracle() {
        for seed in 0..20 {
            let m = random_hermitian(6, seed);
            let op = LinearOperator::new(QuditRegister::new(vec![6]).unwrap(), m.clone()).unwrap();
            let ours = hermitian_max_eigenvalue(&op).unwrap();
            let oracle = bisection_max(&m);
            assert!((ours - oracle).abs() < 1e-8, "seed {seed}: {ours} vs {oracle}");
        }
    }

    #[test]
    fn spectrum_sums_to_trace() {
        let m = random_hermitian(9, 99);
        let ev = jacobi_eigenvalues(&m).unwrap();
        let tr: f64 = (0..9).map(|i| m[(i, i)].re).sum();
        assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-10);
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn two_projector_overlap_closed_form() {
        let reg = QuditRegister::new(vec![2, 2]).unwrap();
        for seed in 0..10 {
            let a = random_pure(&reg, 2 * seed).unwrap();
            let b = random_pure(&reg, 2 * seed + 1).unwrap();
            let pa = outer(&a);
            let pb = outer(&b);
            let c = a.inner(&b).unwrap().norm();
            let op = LinearOperator::new(reg.clone(), pa + pb).unwrap();
            assert!((hermitian_max_eigenvalue(&op).unwrap() - (1.0 + c)).abs() < 1e-10);
            let single = LinearOperator::new(reg.clone(), outer(&a)).unwrap();
            assert!((hermitian_max_eigenvalue(&single).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c64::new(1.0, 0.0), c64::new(1.0, 0.0), c64::new(0.0, 0.0), c64::new(1.0, 0.0)]);
        let op = LinearOperator::new(QuditRegister::new(vec![2]).unwrap(), m).unwrap();
        assert!(matches!(hermitian_max_eigenvalue(&op), Err(Error::NotHermitian(_))));
    }

    fn outer(s: &StateVector) -> CMatrix {
        s.amplitudes() * s.amplitudes().adjoint()
    }
}

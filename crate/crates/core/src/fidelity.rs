//! Fidelity criteria: the fidelity threshold, the window that a kernel value
//! places on the state fidelity, and witnesses for hyperentangled states
//! across several degrees of freedom (DOFs).

use serde::Serialize;

use crate::bound::closed_form_bound;
use crate::error::{Error, Result};
use crate::graph::{build_graph_state, Preset};
use crate::tensor::{DensityOperator, QuditRegister, StateVector};
use crate::witness::{spec_from_graph, WitnessSpec};

/// A fidelity interval, clamped to `[0, 1]`, with the unclamped ends kept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityWindow {
    pub lower: f64,
    pub upper: f64,
    pub raw_lower: f64,
    pub raw_upper: f64,
}

impl FidelityWindow {
    /// Clamps both ends; if the raw ends cross, the clamped lower end is
    /// pulled down to the clamped upper end.
    pub fn new(raw_lower: f64, raw_upper: f64) -> Self {
        let upper = raw_upper.clamp(0.0, 1.0);
        let lower = raw_lower.clamp(0.0, 1.0).min(upper);
        Self { lower, upper, raw_lower, raw_upper }
    }

    pub fn contains(&self, f: f64, tol: f64) -> bool {
        f >= self.raw_lower - tol && f <= self.raw_upper + tol
    }
}

/// Closed-form bound over two; for `q = 2` this is `(1 + 1/sqrt(d)) / 2`.
pub fn fidelity_threshold(q: usize, d: usize) -> Result<f64> {
    Ok(closed_form_bound(q, d)? / 2.0)
}

/// `W - 1 <= F <= W / 2` for a kernel value `W` in `[0, q]`.
pub fn sandwich(kernel_value: f64, q: usize) -> Result<FidelityWindow> {
    if !(0.0..=q as f64).contains(&kernel_value) {
        return Err(Error::OutOfRange { what: "kernel value", value: kernel_value });
    }
    Ok(FidelityWindow::new(kernel_value - 1.0, kernel_value / 2.0))
}

/// Local dimensions of the DOFs of a two-party hyperentangled state.
///
/// The register is DOF-pair-major: `[A_1, B_1, A_2, B_2, ...]`, where `A_k`
/// and `B_k` are the two parties' qudits in DOF `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DofSystem {
    dims: Vec<usize>,
}

impl DofSystem {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSpec("at least one DOF is needed".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn d_min(&self) -> usize {
        *self.dims.iter().min().expect("nonempty")
    }

    pub fn register(&self) -> Result<QuditRegister> {
        QuditRegister::new(self.dims.iter().flat_map(|&d| [d, d]).collect())
    }

    /// Register positions of DOF `k`.
    pub fn parties_of(&self, k: usize) -> [usize; 2] {
        [2 * k, 2 * k + 1]
    }

    /// The two-vertex witness for DOF `k`.
    pub fn dof_spec(&self, k: usize) -> Result<WitnessSpec> {
        spec_from_graph(&Preset::TwoVertex { d: self.dims[k] }.graph()?)
    }

    /// `(1 + 1/sqrt(d_min)) / 2`.
    pub fn threshold(&self) -> f64 {
        0.5 * (1.0 + 1.0 / (self.d_min() as f64).sqrt())
    }
}

/// `(x)_k (1/d_k) sum_{v,v'} omega^{v v'} |v>|v'>`.
pub fn build_hyper_state(dofs: &DofSystem) -> Result<StateVector> {
    dofs.register()?;
    let factors = dofs
        .dims
        .iter()
        .map(|&d| build_graph_state(&Preset::TwoVertex { d }.graph()?))
        .collect::<Result<Vec<_>>>()?;
    StateVector::product(&factors)
}

/// Per-DOF halves of the two-vertex kernels, their product and the verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiDofReport {
    pub factors: Vec<f64>,
    pub product: f64,
    pub threshold: f64,
    pub steerable: bool,
}

/// `prod_k W_2(rho_k) / 2` over the reduced DOF states `rho_k`.
pub fn multidof_kernel(rho: &DensityOperator, dofs: &DofSystem) -> Result<MultiDofReport> {
    if rho.register() != &dofs.register()? {
        return Err(Error::DimensionMismatch(format!(
            "state register {:?} is not the DOF register of {:?}",
            rho.register().dims(),
            dofs.dims
        )));
    }
    let factors = (0..dofs.dims.len())
        .map(|k| {
            let reduced = rho.partial_trace(&dofs.parties_of(k))?;
            Ok(0.5 * dofs.dof_spec(k)?.evaluate(&reduced)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let product = factors.iter().product();
    let threshold = dofs.threshold();
    Ok(MultiDofReport { factors, product, threshold, steerable: product > threshold })
}

/// `F > 1/sqrt(d_min)`, strict.
pub fn multidof_fidelity_verdict(fidelity: f64, d_min: usize) -> bool {
    fidelity > 1.0 / (d_min as f64).sqrt()
}

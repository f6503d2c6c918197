//! One-way (measurement-based) realization of two-qubit gates on 4-qubit
//! clusters.
//!
//! Parties 2 and 3 (0-based 1 and 2) are measured in the bases
//! `{|alpha_+>, |alpha_->}` and `{|beta_+>, |beta_->}` with
//! `|a_{+/-}> = (|0> +/- e^{ia}|1>)/sqrt(2)`; outcome `s = 0` is `|a_+>`.
//! Parties 1 and 4 carry the output, party 1 paired with `alpha`.
//!
//! * Horseshoe (the 4-chain): output `(X^{s2} (x) X^{s3}) (H (x) H) CZ |In>`.
//! * Box (the 4-cycle): output `(Z (x) X)^{s3} (X (x) Z)^{s2} CZ (H (x) H) CZ |In>`.
//!
//! with `|In> = |(-alpha)_+>|(-beta)_+>`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fidelity::FidelityWindow;
use crate::graph::{build_graph_state, Preset};
use crate::tensor::{
    c64, hadamard, pauli_x, pauli_z, CMatrix, CVector, DensityOperator, LinearOperator, QuditRegister, StateVector,
};
use crate::witness::{apply_local_conjugation, spec_from_graph, WitnessSpec};

const ZERO_BRANCH_TOL: f64 = 1e-12;

/// Which 4-qubit cluster mediates the gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cluster {
    Horseshoe,
    Box,
}

impl std::str::FromStr for Cluster {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "horseshoe" | "horseshoe4" | "chain4" => Ok(Cluster::Horseshoe),
            "box" | "box4" => Ok(Cluster::Box),
            _ => Err(Error::Parse(format!("unknown cluster `{s}` (expected horseshoe or box)"))),
        }
    }
}

impl Cluster {
    /// The ideal cluster state.
    pub fn state(self) -> Result<StateVector> {
        build_graph_state(&self.preset().graph()?)
    }

    pub fn preset(self) -> Preset {
        match self {
            Cluster::Horseshoe => Preset::Horseshoe4 { d: 2 },
            Cluster::Box => Preset::Box4 { d: 2 },
        }
    }

    /// The graph witness of this cluster (chain or box).
    pub fn witness(self) -> Result<WitnessSpec> {
        spec_from_graph(&self.preset().graph()?)
    }

    pub fn target(self) -> GateTarget {
        GateTarget::new(self)
    }

    /// Operator undoing the byproduct of branch `(s2, s3)`, on parties (1, 4).
    pub fn correction(self, s2: u8, s3: u8) -> LinearOperator {
        let x = pauli_x();
        let z = pauli_z();
        let id = LinearOperator::identity(QuditRegister::new(vec![2]).expect("qubit"));
        let pow = |op: LinearOperator, s: u8| if s == 1 { op } else { LinearOperator::identity(op.register().clone()) };
        match self {
            Cluster::Horseshoe => pow(x.kron(&id).unwrap(), s2).compose(&pow(id.kron(&x).unwrap(), s3)).unwrap(),
            Cluster::Box => {
                let xz = x.kron(&z).unwrap();
                let zx = z.kron(&x).unwrap();
                pow(xz, s2).compose(&pow(zx, s3)).unwrap()
            }
        }
    }
}

/// Two-qubit target gate of a cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct GateTarget {
    pub cluster: Cluster,
    pub unitary: LinearOperator,
}

impl GateTarget {
    /// `(H (x) H) CZ` for the horseshoe, `CZ (H (x) H) CZ` for the box.
    pub fn new(cluster: Cluster) -> Self {
        let hh = hadamard().kron(&hadamard()).unwrap();
        let cz = cz();
        let unitary = match cluster {
            Cluster::Horseshoe => hh.compose(&cz).unwrap(),
            Cluster::Box => cz.compose(&hh).unwrap().compose(&cz).unwrap(),
        };
        Self { cluster, unitary }
    }

    /// Ideal output for the input prepared by `setting`.
    pub fn output(&self, setting: AngleSetting) -> StateVector {
        input_state(setting.alpha, setting.beta).apply(&self.unitary).expect("2-qubit gate")
    }
}

fn cz() -> LinearOperator {
    let reg = QuditRegister::uniform(2, 2).expect("2 qubits");
    let one = c64::new(1.0, 0.0);
    LinearOperator::diagonal(reg, &[one, one, one, -one]).expect("diagonal")
}

/// Measurement angles of parties 2 and 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleSetting {
    pub alpha: f64,
    pub beta: f64,
}

impl AngleSetting {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    /// `(0,0), (0,pi), (pi,0), (pi,pi)` followed by the four `(+/-pi/2, +/-pi/2)`.
    pub fn standard() -> Vec<AngleSetting> {
        let h = FRAC_PI_2;
        [(0.0, 0.0), (0.0, PI), (PI, 0.0), (PI, PI), (-h, -h), (-h, h), (h, -h), (h, h)]
            .into_iter()
            .map(|(a, b)| AngleSetting::new(a, b))
            .collect()
    }
}

/// `(|0> + sign e^{i angle} |1>) / sqrt(2)` as a vector.
fn equator(angle: f64, sign: f64) -> CVector {
    let s = FRAC_1_SQRT_2;
    CVector::from_vec(vec![c64::new(s, 0.0), c64::from_polar(sign * s, angle)])
}

fn qubit_state(v: CVector) -> StateVector {
    StateVector::from_vector(QuditRegister::new(vec![2]).expect("qubit"), v).expect("normalized")
}

/// `|(-alpha)_+> (x) |(-beta)_+>`.
pub fn input_state(alpha: f64, beta: f64) -> StateVector {
    qubit_state(equator(-alpha, 1.0)).kron(&qubit_state(equator(-beta, 1.0))).expect("2 qubits")
}

/// Measurement vector of outcome `s` at angle `a`.
fn outcome_vector(angle: f64, s: u8) -> CVector {
    equator(angle, if s == 0 { 1.0 } else { -1.0 })
}

/// One measurement branch.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchOutcome {
    pub s2: u8,
    pub s3: u8,
    pub probability: f64,
    /// Normalized state of parties (1, 4); `None` for a zero-probability branch.
    pub post_state: Option<DensityOperator>,
    pub corrected_state: Option<DensityOperator>,
    /// Fidelity of `corrected_state` with the target output.
    pub corrected_fidelity: Option<f64>,
}

fn check_source(source: &DensityOperator) -> Result<()> {
    if source.register().dims() != [2, 2, 2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "one-way source must be 4 qubits, got {:?}",
            source.register().dims()
        )));
    }
    Ok(())
}

/// `<a|_2 <b|_3 rho |a>_2 |b>_3` as an unnormalized operator on (1, 4).
fn project_middle(source: &DensityOperator, a: &CVector, b: &CVector) -> CMatrix {
    let rho = source.matrix();
    let idx = |x1: usize, u2: usize, u3: usize, x4: usize| 8 * x1 + 4 * u2 + 2 * u3 + x4;
    CMatrix::from_fn(4, 4, |r, c| {
        let (x1, x4) = (r / 2, r % 2);
        let (y1, y4) = (c / 2, c % 2);
        let mut acc = c64::new(0.0, 0.0);
        for u2 in 0..2 {
            for u3 in 0..2 {
                let bra = (a[u2] * b[u3]).conj();
                for w2 in 0..2 {
                    for w3 in 0..2 {
                        acc += bra * rho[(idx(x1, u2, u3, x4), idx(y1, w2, w3, y4))] * a[w2] * b[w3];
                    }
                }
            }
        }
        acc
    })
}

/// All four branches of `setting` on `source`, corrected for byproducts.
pub fn run_branching(source: &DensityOperator, cluster: Cluster, setting: AngleSetting) -> Result<Vec<BranchOutcome>> {
    check_source(source)?;
    let target = cluster.target().output(setting);
    let out_reg = QuditRegister::uniform(2, 2)?;
    let mut out = Vec::with_capacity(4);
    for s2 in 0..2u8 {
        for s3 in 0..2u8 {
            let sigma = project_middle(source, &outcome_vector(setting.alpha, s2), &outcome_vector(setting.beta, s3));
            let probability = sigma.trace().re;
            if probability <= ZERO_BRANCH_TOL {
                out.push(BranchOutcome { s2, s3, probability, post_state: None, corrected_state: None, corrected_fidelity: None });
                continue;
            }
            let post = DensityOperator::new(out_reg.clone(), sigma.unscale(probability))?;
            let corrected = post.conjugate(&cluster.correction(s2, s3))?;
            let fid = corrected.fidelity_with_pure(&target)?;
            out.push(BranchOutcome {
                s2,
                s3,
                probability,
                post_state: Some(post),
                corrected_state: Some(corrected),
                corrected_fidelity: Some(fid),
            });
        }
    }
    Ok(out)
}

/// `4 <Out| Tr_23[(|alpha_+><alpha_+| (x) |beta_+><beta_+|) rho] |Out>`.
///
/// The postselected branch is normalized by its ideal probability 1/4, so the
/// average over settings equals half the gate witness kernel.
fn postselected_fidelity(source: &DensityOperator, cluster: Cluster, setting: AngleSetting) -> Result<f64> {
    let sigma = project_middle(source, &outcome_vector(setting.alpha, 0), &outcome_vector(setting.beta, 0));
    if sigma.trace().re <= ZERO_BRANCH_TOL {
        return Err(Error::ZeroProbabilityBranch { s2: 0, s3: 0 });
    }
    let out = cluster.target().output(setting);
    let v = out.amplitudes();
    Ok(4.0 * v.dotc(&(&sigma * v)).re)
}

/// Average computation fidelity over `settings` from the `s2 = s3 = 0` branch.
pub fn computation_fidelity_with(source: &DensityOperator, cluster: Cluster, settings: &[AngleSetting]) -> Result<f64> {
    check_source(source)?;
    if settings.is_empty() {
        return Err(Error::InvalidSpec("no angle settings".into()));
    }
    let vals = Execution::default().map(settings, |s| postselected_fidelity(source, cluster, *s));
    Ok(vals.into_iter().sum::<Result<f64>>()? / settings.len() as f64)
}

/// [`computation_fidelity_with`] over the eight standard settings.
pub fn computation_fidelity(source: &DensityOperator, cluster: Cluster) -> Result<f64> {
    computation_fidelity_with(source, cluster, &AngleSetting::standard())
}

/// Feed-forward variant: every branch corrected and weighted by its
/// probability, averaged over `settings`. Not the quantity the gate witness
/// bounds.
pub fn feed_forward_fidelity(source: &DensityOperator, cluster: Cluster, settings: &[AngleSetting]) -> Result<f64> {
    check_source(source)?;
    if settings.is_empty() {
        return Err(Error::InvalidSpec("no angle settings".into()));
    }
    let mut total = 0.0;
    for s in settings {
        for b in run_branching(source, cluster, *s)? {
            total += b.probability * b.corrected_fidelity.unwrap_or(0.0);
        }
    }
    Ok(total / settings.len() as f64)
}

/// `|Out> (x) |alpha_+> (x) |beta_+>` placed on parties (1, 4, 2, 3).
fn witness_vector(cluster: Cluster, setting: AngleSetting) -> StateVector {
    let out = cluster.target().output(setting);
    let a = outcome_vector(setting.alpha, 0);
    let b = outcome_vector(setting.beta, 0);
    let v = CVector::from_fn(16, |i, _| {
        let (x1, x2, x3, x4) = (i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1);
        out.amplitude(2 * x1 + x4) * a[x2] * b[x3]
    });
    StateVector::from_vector(QuditRegister::uniform(4, 2).expect("4 qubits"), v).expect("normalized")
}

/// Gate witness kernel over `settings`.
pub fn wcz_kernel_with(rho: &DensityOperator, cluster: Cluster, settings: &[AngleSetting]) -> Result<f64> {
    check_source(rho)?;
    settings.iter().map(|s| rho.fidelity_with_pure(&witness_vector(cluster, *s))).sum()
}

/// Gate witness kernel over the eight standard settings.
pub fn wcz_kernel(rho: &DensityOperator, cluster: Cluster) -> Result<f64> {
    wcz_kernel_with(rho, cluster, &AngleSetting::standard())
}

/// The gate witness kernel as an operator.
pub fn wcz_operator(cluster: Cluster) -> LinearOperator {
    let reg = QuditRegister::uniform(4, 2).expect("4 qubits");
    let mut m = CMatrix::zeros(16, 16);
    for s in AngleSetting::standard() {
        let v = witness_vector(cluster, s);
        let a = v.amplitudes();
        m += a * a.adjoint();
    }
    LinearOperator::new(reg, m).expect("16x16")
}

fn check_w4(w: f64) -> Result<()> {
    if !(0.0..=2.0).contains(&w) {
        return Err(Error::OutOfRange { what: "kernel value", value: w });
    }
    Ok(())
}

/// `W - 1 <= F_comp <= W/4 + 1/2`.
pub fn fcomp_window(kernel_w4: f64) -> Result<FidelityWindow> {
    check_w4(kernel_w4)?;
    Ok(FidelityWindow::new(kernel_w4 - 1.0, kernel_w4 / 4.0 + 0.5))
}

/// Lower bounds `(F_process, F_av) >= (W/2, (2W + 1)/5)`.
pub fn process_and_average_bounds(kernel_w4: f64) -> Result<(f64, f64)> {
    check_w4(kernel_w4)?;
    Ok((kernel_w4 / 2.0, (2.0 * kernel_w4 + 1.0) / 5.0))
}

/// The two-term witness of the box cluster.
pub fn w4box_spec() -> Result<WitnessSpec> {
    Cluster::Box.witness()
}

/// Box witness conjugated by Hadamards on all parties, with parties 2 and 3
/// swapped.
pub fn w4box_primed_spec() -> Result<WitnessSpec> {
    let h: Vec<(usize, LinearOperator)> = (0..4).map(|k| (k, hadamard())).collect();
    apply_local_conjugation(&w4box_spec()?, &h)?.permute_parties(&[0, 2, 1, 3])
}

/// Chain witness conjugated by Hadamards on parties 1 and 4.
pub fn w4_primed_spec() -> Result<WitnessSpec> {
    apply_local_conjugation(&Cluster::Horseshoe.witness()?, &crate::graph::g4_prime_local_unitaries())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::closed_form_bound;
    use crate::noise::werner_mix;
    use crate::tensor::random_mixed;

    fn ideal(cluster: Cluster) -> DensityOperator {
        DensityOperator::from_pure(&cluster.state().unwrap()).unwrap()
    }

    #[test]
    fn input_states() {
        let h = FRAC_1_SQRT_2;
        let q = QuditRegister::new(vec![2]).unwrap();
        let plus = StateVector::new(q.clone(), vec![c64::new(h, 0.0), c64::new(h, 0.0)]).unwrap();
        let minus = StateVector::new(q.clone(), vec![c64::new(h, 0.0), c64::new(-h, 0.0)]).unwrap();
        let plus_i = StateVector::new(q, vec![c64::new(h, 0.0), c64::new(0.0, h)]).unwrap();
        let f = |a: f64, b: f64, s: &StateVector| input_state(a, b).fidelity(&s.kron(s).unwrap()).unwrap();
        assert!((f(0.0, 0.0, &plus) - 1.0).abs() < 1e-12);
        assert!((f(PI, PI, &minus) - 1.0).abs() < 1e-12);
        assert!((f(-FRAC_PI_2, -FRAC_PI_2, &plus_i) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn targets_are_unitary() {
        for c in [Cluster::Horseshoe, Cluster::Box] {
            assert!(c.target().unitary.is_unitary(1e-10));
        }
    }

    #[test]
    fn ideal_clusters_realize_their_gates() {
        for c in [Cluster::Horseshoe, Cluster::Box] {
            let rho = ideal(c);
            for s in AngleSetting::standard().into_iter().chain([AngleSetting::new(0.3, -1.1)]) {
                let branches = run_branching(&rho, c, s).unwrap();
                assert_eq!(branches.len(), 4);
                let total: f64 = branches.iter().map(|b| b.probability).sum();
                assert!((total - 1.0).abs() < 1e-10);
                for b in branches {
                    assert!((b.probability - 0.25).abs() < 1e-10);
                    let fid = b.corrected_fidelity.unwrap();
                    assert!((fid - 1.0).abs() < 1e-9, "{c:?} {s:?} s2={} s3={}: {fid}", b.s2, b.s3);
                }
            }
        }
    }

    #[test]
    fn ideal_fidelities_and_kernels() {
        for c in [Cluster::Horseshoe, Cluster::Box] {
            let rho = ideal(c);
            assert!((computation_fidelity(&rho, c).unwrap() - 1.0).abs() < 1e-10);
            assert!((feed_forward_fidelity(&rho, c, &AngleSetting::standard()).unwrap() - 1.0).abs() < 1e-10);
            assert!((wcz_kernel(&rho, c).unwrap() - 2.0).abs() < 1e-10);
            let mm = DensityOperator::maximally_mixed(QuditRegister::uniform(4, 2).unwrap()).unwrap();
            assert!((wcz_kernel(&mm, c).unwrap() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn werner_noise_lowers_fcomp() {
        let psi = Cluster::Horseshoe.state().unwrap();
        let mut last = 1.0 + 1e-12;
        for p in [0.0, 0.1, 0.3, 0.6] {
            let f = computation_fidelity(&werner_mix(&psi, p).unwrap(), Cluster::Horseshoe).unwrap();
            assert!(f < last);
            last = f;
        }
    }

    #[test]
    fn fcomp_is_half_the_kernel() {
        let reg = QuditRegister::uniform(4, 2).unwrap();
        for seed in 0..10 {
            let rho = random_mixed(&reg, seed).unwrap();
            for c in [Cluster::Horseshoe, Cluster::Box] {
                let f = computation_fidelity(&rho, c).unwrap();
                assert!((f - wcz_kernel(&rho, c).unwrap() / 2.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn operator_form_agrees() {
        let rho = random_mixed(&QuditRegister::uniform(4, 2).unwrap(), 3).unwrap();
        for c in [Cluster::Horseshoe, Cluster::Box] {
            let op = wcz_operator(c);
            assert!((rho.expectation(&op).unwrap() - wcz_kernel(&rho, c).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_probability_branch() {
        // |1> on party 2 and |+> elsewhere: the alpha=0 measurement never fails,
        // so build a source where party 2 is orthogonal to |0_+> = |+>.
        let reg = QuditRegister::uniform(4, 2).unwrap();
        let h = FRAC_1_SQRT_2;
        let q = QuditRegister::new(vec![2]).unwrap();
        let minus = StateVector::new(q.clone(), vec![c64::new(h, 0.0), c64::new(-h, 0.0)]).unwrap();
        let zero = StateVector::basis(q, 0).unwrap();
        let psi = StateVector::product(&[zero.clone(), minus, zero.clone(), zero]).unwrap();
        assert_eq!(psi.register(), &reg);
        let rho = DensityOperator::from_pure(&psi).unwrap();
        let r = computation_fidelity_with(&rho, Cluster::Horseshoe, &[AngleSetting::new(0.0, 0.0)]);
        assert!(matches!(r, Err(Error::ZeroProbabilityBranch { s2: 0, s3: 0 })));
        let b = run_branching(&rho, Cluster::Horseshoe, AngleSetting::new(0.0, 0.0)).unwrap();
        assert!(b[0].post_state.is_none() && b[0].corrected_fidelity.is_none());
        assert!((b[2].probability - 0.5).abs() < 1e-12);
    }

    #[test]
    fn windows() {
        let w = fcomp_window(1.8829).unwrap();
        assert!((w.lower - 0.8829).abs() < 1e-12 && (w.upper - 0.970725).abs() < 1e-12);
        let w = fcomp_window(2.0).unwrap();
        assert_eq!((w.lower, w.upper), (1.0, 1.0));
        let bound = closed_form_bound(2, 2).unwrap();
        assert!((fcomp_window(bound).unwrap().lower - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-7);
        let (fp, fav) = process_and_average_bounds(1.8829).unwrap();
        assert!((fp - 0.94145).abs() < 1e-12 && (fav - 0.95316).abs() < 1e-12);
        assert_eq!(process_and_average_bounds(2.0).unwrap(), (1.0, 1.0));
        assert!(fcomp_window(2.1).is_err());
        assert!(process_and_average_bounds(-0.5).is_err());
    }

    #[test]
    fn box_witness() {
        let spec = w4box_spec().unwrap();
        let psi = Cluster::Box.state().unwrap();
        assert!((spec.evaluate_pure(&psi).unwrap() - 2.0).abs() < 1e-10);
        let primed = w4box_primed_spec().unwrap();
        let w4p = w4_primed_spec().unwrap();
        assert!(primed.equivalent(&w4p, 1e-10).unwrap());
        let (_, gp) = Preset::G4Prime.build().unwrap();
        let a = primed.evaluate_pure(&gp).unwrap();
        assert!((a - w4p.evaluate_pure(&gp).unwrap()).abs() < 1e-10);
        let rho = random_mixed(&QuditRegister::uniform(4, 2).unwrap(), 21).unwrap();
        assert!((primed.evaluate(&rho).unwrap() - w4p.evaluate(&rho).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn complementary_inputs_are_unbiased() {
        let s = AngleSetting::standard();
        for a in &s[..4] {
            for b in &s[4..] {
                let o = input_state(a.alpha, a.beta).fidelity(&input_state(b.alpha, b.beta)).unwrap();
                assert!((o - 0.25).abs() < 1e-12);
            }
        }
    }
}

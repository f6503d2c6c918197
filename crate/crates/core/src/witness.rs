//! Steering-witness specifications and kernel evaluation.
//!
//! A [`WitnessSpec`] is a list of terms. Each term fixes one local measurement
//! basis per party and a set of modular constraints on the outcomes; its value
//! on a state is the probability that all constraints hold. The kernel is the
//! sum of the term values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fidelity::{sandwich, FidelityWindow};
use crate::graph::ColoredGraph;
use crate::tensor::{
    basis_matrix, c64, density_cap, weighted_projector_sum, CMatrix, DensityOperator, LinearOperator,
    QuditRegister, StateVector,
};
use crate::error::CapKind;

const CANONICAL_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;

/// Measurement basis of one party, given as the columns of a unitary.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalBasis {
    /// Setting 1: `{|v>}`.
    Computational,
    /// Setting 2: `{F^dagger |v>}`.
    Fourier,
    /// Any other orthonormal basis; column `v` is the vector for outcome `v`.
    Custom(CMatrix),
}

impl LocalBasis {
    pub fn from_setting(setting: usize) -> Result<Self> {
        match setting {
            1 => Ok(LocalBasis::Computational),
            2 => Ok(LocalBasis::Fourier),
            s => Err(Error::InvalidSetting(s)),
        }
    }

    /// 1, 2, or 0 for a custom basis.
    pub fn setting_id(&self) -> usize {
        match self {
            LocalBasis::Computational => 1,
            LocalBasis::Fourier => 2,
            LocalBasis::Custom(_) => 0,
        }
    }

    pub fn matrix(&self, d: usize) -> Result<CMatrix> {
        match self {
            LocalBasis::Computational => basis_matrix(d, 1),
            LocalBasis::Fourier => basis_matrix(d, 2),
            LocalBasis::Custom(m) => {
                if m.nrows() != d || m.ncols() != d {
                    return Err(Error::DimensionMismatch(format!(
                        "custom basis is {}x{}, party dimension {d}",
                        m.nrows(),
                        m.ncols()
                    )));
                }
                Ok(m.clone())
            }
        }
    }

    /// Named basis whose columns match `m` column by column up to phases.
    fn canonicalize(m: CMatrix) -> Self {
        let d = m.nrows();
        for cand in [LocalBasis::Computational, LocalBasis::Fourier] {
            let b = cand.matrix(d).expect("d >= 2");
            let same = (0..d).all(|v| (b.column(v).dotc(&m.column(v)).norm() - 1.0).abs() < CANONICAL_TOL);
            if same {
                return cand;
            }
        }
        LocalBasis::Custom(m)
    }
}

/// `sum_{(p, s) in participants} v_p^(s) = 0 (mod modulus)`.
///
/// The setting id of each participant mirrors the basis its term assigns to
/// that party (0 for a custom basis).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    participants: Vec<(usize, usize)>,
    modulus: usize,
}

impl Constraint {
    pub fn new(participants: Vec<(usize, usize)>, modulus: usize) -> Result<Self> {
        if participants.is_empty() {
            return Err(Error::InvalidSpec("constraint without participants".into()));
        }
        if modulus < 2 {
            return Err(Error::InvalidDimension(modulus));
        }
        let mut seen: Vec<usize> = participants.iter().map(|p| p.0).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSpec("party listed twice in one constraint".into()));
        }
        Ok(Self { participants, modulus })
    }

    pub fn participants(&self) -> &[(usize, usize)] {
        &self.participants
    }

    pub fn parties(&self) -> impl Iterator<Item = usize> + '_ {
        self.participants.iter().map(|p| p.0)
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn holds(&self, digits: &[usize]) -> bool {
        self.parties().map(|p| digits[p]).sum::<usize>() % self.modulus == 0
    }
}

/// One summand of the kernel: a global measurement and its success event.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessTerm {
    settings: Vec<LocalBasis>,
    constraints: Vec<Constraint>,
}

impl WitnessTerm {
    /// Fails if a constraint's setting ids disagree with `settings`.
    pub fn new(settings: Vec<LocalBasis>, constraints: Vec<Constraint>) -> Result<Self> {
        for c in &constraints {
            for &(p, s) in c.participants() {
                let basis = settings.get(p).ok_or(Error::InvalidParty { index: p, parties: settings.len() })?;
                if basis.setting_id() != s {
                    return Err(Error::InvalidSpec(format!(
                        "party {} carries setting {} in its term but {s} in a constraint",
                        p + 1,
                        basis.setting_id()
                    )));
                }
            }
        }
        Ok(Self { settings, constraints })
    }

    pub fn settings(&self) -> &[LocalBasis] {
        &self.settings
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn satisfied(&self, digits: &[usize]) -> bool {
        self.constraints.iter().all(|c| c.holds(digits))
    }

    /// Success indicator over all outcome tuples (register index order).
    pub fn indicator(&self, register: &QuditRegister) -> Vec<f64> {
        (0..register.total_dim())
            .map(|i| if self.satisfied(&register.digits(i)) { 1.0 } else { 0.0 })
            .collect()
    }

    /// Local basis matrices, one per party.
    pub fn basis_matrices(&self, register: &QuditRegister) -> Result<Vec<CMatrix>> {
        self.settings.iter().enumerate().map(|(k, b)| b.matrix(register.dim(k))).collect()
    }

    /// Outcome distribution of this term's measurement on `rho`.
    pub fn outcome_probabilities(&self, register: &QuditRegister, rho: &DensityOperator) -> Result<Vec<f64>> {
        let mut r = rho.clone();
        for (k, b) in self.settings.iter().enumerate() {
            if *b == LocalBasis::Computational {
                continue;
            }
            let m = b.matrix(register.dim(k))?;
            r = r.apply_local(&LinearOperator::local(m.adjoint())?, &[k])?;
        }
        Ok(r.populations())
    }

    fn outcome_probabilities_pure(&self, register: &QuditRegister, psi: &StateVector) -> Result<Vec<f64>> {
        let mut s = psi.clone();
        for (k, b) in self.settings.iter().enumerate() {
            if *b == LocalBasis::Computational {
                continue;
            }
            let m = b.matrix(register.dim(k))?;
            s = s.apply_local(&LinearOperator::local(m.adjoint())?, &[k])?;
        }
        Ok(s.probabilities())
    }
}

/// A witness: a register and its terms.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSpec {
    register: QuditRegister,
    terms: Vec<WitnessTerm>,
}

impl WitnessSpec {
    pub fn new(register: QuditRegister, terms: Vec<WitnessTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidSpec("a witness needs at least one term".into()));
        }
        for t in &terms {
            if t.settings.len() != register.parties() {
                return Err(Error::InvalidSpec(format!(
                    "term assigns {} settings on a {}-party register",
                    t.settings.len(),
                    register.parties()
                )));
            }
            for (k, b) in t.settings.iter().enumerate() {
                let m = b.matrix(register.dim(k))?;
                if let LocalBasis::Custom(_) = b {
                    let dev = (m.adjoint() * &m - CMatrix::identity(m.nrows(), m.nrows())).camax();
                    if dev > UNITARY_TOL {
                        return Err(Error::InvalidSpec(format!("custom basis of party {} is not unitary", k + 1)));
                    }
                }
            }
        }
        Ok(Self { register, terms })
    }

    pub fn register(&self) -> &QuditRegister {
        &self.register
    }

    pub fn terms(&self) -> &[WitnessTerm] {
        &self.terms
    }

    /// Number of terms.
    pub fn q(&self) -> usize {
        self.terms.len()
    }

    /// Sum of the term values on `rho`.
    pub fn evaluate(&self, rho: &DensityOperator) -> Result<f64> {
        Ok(self.term_values(rho, Execution::default())?.iter().sum())
    }

    /// Per-term success probabilities on `rho`.
    pub fn term_values(&self, rho: &DensityOperator, exec: Execution) -> Result<Vec<f64>> {
        self.check_register(rho.register())?;
        exec.map(&self.terms, |t| {
            let p = t.outcome_probabilities(&self.register, rho)?;
            Ok(sum_where(&p, &t.indicator(&self.register)))
        })
        .into_iter()
        .collect()
    }

    /// Kernel on a pure state without forming `|psi><psi|`.
    pub fn evaluate_pure(&self, psi: &StateVector) -> Result<f64> {
        self.check_register(psi.register())?;
        let vals = Execution::default().map(&self.terms, |t| {
            let p = t.outcome_probabilities_pure(&self.register, psi)?;
            Ok(sum_where(&p, &t.indicator(&self.register)))
        });
        vals.into_iter().sum()
    }

    /// Kernel on the maximally mixed state: satisfying tuples over total dimension.
    pub fn evaluate_maximally_mixed(&self) -> f64 {
        let total = self.register.total_dim() as f64;
        self.terms
            .iter()
            .map(|t| t.indicator(&self.register).iter().sum::<f64>() / total)
            .sum()
    }

    /// Kernel operator `sum_m P_m`.
    pub fn kernel_operator(&self) -> Result<LinearOperator> {
        let mut acc: Option<LinearOperator> = None;
        for t in &self.terms {
            let p = term_projector(t, &self.register)?;
            acc = Some(match acc {
                None => p,
                Some(a) => a.add(&p)?,
            });
        }
        Ok(acc.expect("nonempty"))
    }

    /// Party `k` of `self` becomes party `map[k]`.
    pub fn permute_parties(&self, map: &[usize]) -> Result<Self> {
        let n = self.register.parties();
        let mut check = map.to_vec();
        check.sort_unstable();
        if check != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidSpec("not a permutation of the parties".into()));
        }
        let mut order = vec![0; n];
        for (k, &m) in map.iter().enumerate() {
            order[m] = k;
        }
        let register = self.register.subregister(&order)?;
        let terms = self
            .terms
            .iter()
            .map(|t| WitnessTerm {
                settings: order.iter().map(|&k| t.settings[k].clone()).collect(),
                constraints: t
                    .constraints
                    .iter()
                    .map(|c| Constraint {
                        participants: c.participants.iter().map(|&(p, s)| (map[p], s)).collect(),
                        modulus: c.modulus,
                    })
                    .collect(),
            })
            .collect();
        Self::new(register, terms)
    }

    /// Places the spec on a larger register: party `k` goes to `placement[k]`;
    /// the remaining parties are measured in the computational basis and
    /// unconstrained. The embedded kernel equals the original kernel on the
    /// reduced state.
    pub fn embed(&self, register: QuditRegister, placement: &[usize]) -> Result<Self> {
        if placement.len() != self.register.parties() {
            return Err(Error::InvalidSpec("placement length".into()));
        }
        crate::tensor::check_targets(&register, placement)?;
        for (k, &p) in placement.iter().enumerate() {
            if register.dim(p) != self.register.dim(k) {
                return Err(Error::DimensionMismatch(format!("party {} placed on a party of another dimension", k + 1)));
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut settings = vec![LocalBasis::Computational; register.parties()];
                for (k, &p) in placement.iter().enumerate() {
                    settings[p] = t.settings[k].clone();
                }
                WitnessTerm {
                    settings,
                    constraints: t
                        .constraints
                        .iter()
                        .map(|c| Constraint {
                            participants: c.participants.iter().map(|&(p, s)| (placement[p], s)).collect(),
                            modulus: c.modulus,
                        })
                        .collect(),
                }
            })
            .collect();
        Self::new(register, terms)
    }

    /// Same kernel operator term by term, in any term order.
    pub fn equivalent(&self, other: &WitnessSpec, tol: f64) -> Result<bool> {
        if self.register != other.register || self.q() != other.q() {
            return Ok(false);
        }
        let a = self.terms.iter().map(|t| term_projector(t, &self.register)).collect::<Result<Vec<_>>>()?;
        let b = other.terms.iter().map(|t| term_projector(t, &other.register)).collect::<Result<Vec<_>>>()?;
        let mut used = vec![false; b.len()];
        for pa in &a {
            match (0..b.len()).find(|&j| !used[j] && pa.max_abs_diff(&b[j]) < tol) {
                Some(j) => used[j] = true,
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    fn check_register(&self, reg: &QuditRegister) -> Result<()> {
        if reg != &self.register {
            return Err(Error::DimensionMismatch(format!(
                "witness register {:?}, state register {:?}",
                self.register.dims(),
                reg.dims()
            )));
        }
        Ok(())
    }

    pub fn to_document(&self) -> SpecDocument {
        SpecDocument {
            register: self.register.dims().to_vec(),
            terms: self
                .terms
                .iter()
                .map(|t| TermDocument {
                    settings: t
                        .settings
                        .iter()
                        .map(|b| match b {
                            LocalBasis::Custom(m) => SettingDocument::Custom { custom: MatrixDocument::from(m) },
                            named => SettingDocument::Named(named.setting_id()),
                        })
                        .collect(),
                    constraints: t
                        .constraints
                        .iter()
                        .map(|c| ConstraintDocument {
                            participants: c.participants.iter().map(|&(p, s)| [p + 1, s]).collect(),
                            modulus: c.modulus,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SpecDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.into_spec()
    }
}

fn sum_where(p: &[f64], w: &[f64]) -> f64 {
    p.iter().zip(w).map(|(p, w)| p * w).sum()
}

/// The witness of a properly colored graph: one term per color class.
///
/// In the term of class `Y`, parties in `Y` measure setting 2 and all others
/// setting 1; for each `j` in `Y` the outcomes satisfy
/// `v_j^(2) + sum_{i ~ j} v_i^(1) = 0 (mod d)`, with `i ~ j` the graph
/// neighbors of `j`.
pub fn spec_from_graph(graph: &ColoredGraph) -> Result<WitnessSpec> {
    graph.ensure_proper()?;
    let d = graph.d();
    let register = graph.register()?;
    let terms = graph
        .colors()
        .iter()
        .map(|class| {
            let settings = (0..graph.n_vertices())
                .map(|v| if class.contains(&v) { LocalBasis::Fourier } else { LocalBasis::Computational })
                .collect();
            let constraints = class
                .iter()
                .map(|&j| {
                    let mut parts = vec![(j, 2)];
                    parts.extend(graph.neighbors(j).into_iter().map(|i| (i, 1)));
                    Constraint::new(parts, d)
                })
                .collect::<Result<Vec<_>>>()?;
            WitnessTerm::new(settings, constraints)
        })
        .collect::<Result<Vec<_>>>()?;
    WitnessSpec::new(register, terms)
}

/// Conjugates each listed party's bases by its unitary: basis `B` becomes `U B`.
///
/// Evaluating the result on `U rho U^dagger` gives the original value on
/// `rho`. Bases that land on setting 1 or 2 (column by column, up to phases)
/// are stored by name.
pub fn apply_local_conjugation(spec: &WitnessSpec, party_unitaries: &[(usize, LinearOperator)]) -> Result<WitnessSpec> {
    let reg = spec.register();
    let mut seen = vec![false; reg.parties()];
    for (p, u) in party_unitaries {
        if *p >= reg.parties() {
            return Err(Error::InvalidParty { index: *p, parties: reg.parties() });
        }
        if seen[*p] {
            return Err(Error::DuplicateParty(*p));
        }
        seen[*p] = true;
        if u.dim() != reg.dim(*p) {
            return Err(Error::DimensionMismatch(format!(
                "unitary of dimension {} on party {} of dimension {}",
                u.dim(),
                p + 1,
                reg.dim(*p)
            )));
        }
        if !u.is_unitary(UNITARY_TOL) {
            return Err(Error::InvalidSpec(format!("operator on party {} is not unitary", p + 1)));
        }
    }
    let terms = spec
        .terms()
        .iter()
        .map(|t| {
            let mut settings = t.settings.clone();
            for (p, u) in party_unitaries {
                let m = u.matrix() * t.settings[*p].matrix(reg.dim(*p))?;
                settings[*p] = LocalBasis::canonicalize(m);
            }
            let constraints = t
                .constraints
                .iter()
                .map(|c| Constraint {
                    participants: c.participants.iter().map(|&(p, _)| (p, settings[p].setting_id())).collect(),
                    modulus: c.modulus,
                })
                .collect();
            Ok(WitnessTerm { settings, constraints })
        })
        .collect::<Result<Vec<_>>>()?;
    WitnessSpec::new(reg.clone(), terms)
}

/// `sum_{v satisfying} |b_v><b_v|`, an orthogonal projector.
pub fn term_projector(term: &WitnessTerm, register: &QuditRegister) -> Result<LinearOperator> {
    let total = register.total_dim();
    if total > density_cap() {
        return Err(Error::CapExceeded { kind: CapKind::DensityMatrix, requested: total, cap: density_cap() });
    }
    let mut b = CMatrix::from_element(1, 1, c64::new(1.0, 0.0));
    for m in term.basis_matrices(register)? {
        b = b.kronecker(&m);
    }
    let p = weighted_projector_sum(&b, &term.indicator(register));
    LinearOperator::new(register.clone(), p)
}

/// `sum_m Tr[P_m rho]`.
pub fn evaluate_kernel(spec: &WitnessSpec, rho: &DensityOperator) -> Result<f64> {
    spec.evaluate(rho)
}

/// Verdict of a kernel value against a classical bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteeringReport {
    pub kernel_value: f64,
    pub classical_bound: f64,
    pub steerable: bool,
    pub margin: f64,
    pub fidelity_window: FidelityWindow,
}

impl SteeringReport {
    /// Report for an externally supplied kernel value of a `q`-term witness.
    pub fn from_value(kernel_value: f64, classical_bound: f64, q: usize) -> Result<Self> {
        Ok(Self {
            kernel_value,
            classical_bound,
            steerable: kernel_value > classical_bound,
            margin: kernel_value - classical_bound,
            fidelity_window: sandwich(kernel_value, q)?,
        })
    }
}

/// Evaluates `spec` on `rho` and compares against `bound`.
pub fn report(spec: &WitnessSpec, rho: &DensityOperator, bound: f64) -> Result<SteeringReport> {
    let w = spec.evaluate(rho)?;
    SteeringReport::from_value(w.clamp(0.0, spec.q() as f64), bound, spec.q())
}

/// Row-major real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&CMatrix> for MatrixDocument {
    fn from(m: &CMatrix) -> Self {
        let rows = |f: fn(&c64) -> f64| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect();
        Self { re: rows(|z| z.re), im: rows(|z| z.im) }
    }
}

impl MatrixDocument {
    fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.re.len();
        if self.im.len() != n || self.re.iter().chain(&self.im).any(|r| r.len() != n) {
            return Err(Error::Parse("custom basis must be square with matching re/im parts".into()));
        }
        Ok(CMatrix::from_fn(n, n, |i, j| c64::new(self.re[i][j], self.im[i][j])))
    }
}

/// A party's setting: `1`, `2`, or `{"custom": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SettingDocument {
    Named(usize),
    Custom { custom: MatrixDocument },
}

/// `participants` are `[party, setting]` pairs with 1-based parties; custom
/// bases carry setting 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDocument {
    pub participants: Vec<[usize; 2]>,
    pub modulus: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    pub settings: Vec<SettingDocument>,
    pub constraints: Vec<ConstraintDocument>,
}

/// Serialized form of a [`WitnessSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub register: Vec<usize>,
    pub terms: Vec<TermDocument>,
}

impl SpecDocument {
    pub fn into_spec(self) -> Result<WitnessSpec> {
        let register = QuditRegister::new(self.register)?;
        let terms = self
            .terms
            .into_iter()
            .map(|t| {
                let settings = t
                    .settings
                    .into_iter()
                    .map(|s| match s {
                        SettingDocument::Named(n) => LocalBasis::from_setting(n),
                        SettingDocument::Custom { custom } => Ok(LocalBasis::Custom(custom.to_matrix()?)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let constraints = t
                    .constraints
                    .into_iter()
                    .map(|c| {
                        let parts = c
                            .participants
                            .iter()
                            .map(|&[p, s]| {
                                p.checked_sub(1)
                                    .map(|p| (p, s))
                                    .ok_or_else(|| Error::Parse("parties are 1-based".into()))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Constraint::new(parts, c.modulus)
                    })
                    .collect::<Result<Vec<_>>>()?;
                WitnessTerm::new(settings, constraints)
            })
            .collect::<Result<Vec<_>>>()?;
        WitnessSpec::new(register, terms)
    }
}

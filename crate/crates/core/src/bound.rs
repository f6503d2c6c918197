//! Classical (preexisting-state) bounds on the witness kernel.
//!
//! Three independent routes: the closed form in `q` and `d`, the largest
//! eigenvalue of a two-projector operator, and an exhaustive search over
//! cheating strategies for a concrete witness.
//!
//! A cheating strategy splits the parties into an untrusted set `A` (nonempty,
//! proper) and a trusted rest `B`. Parties in `A` announce outcomes fixed in
//! advance; `B` holds a quantum state. Mixed announcements are convex
//! combinations of deterministic ones, and the kernel is linear in them, so
//! deterministic announcements suffice. For fixed announcements each term
//! reduces to an operator on `B`, and the best value `B` can reach is the
//! largest eigenvalue of their sum.

use std::fmt;

use serde::Serialize;

use crate::error::{CapKind, Error, Result};
use crate::exec::Execution;
use crate::tensor::{basis_matrix, c64, jacobi_eigenvalues, weighted_projector_sum, CMatrix, QuditRegister};
use crate::witness::WitnessSpec;

/// `gamma_2 = 0`, `gamma_q = 2(q - 3) + 1 + gamma_{q-1}`.
pub fn gamma(q: usize) -> Result<i64> {
    if q < 2 {
        return Err(Error::OutOfRange { what: "color count q", value: q as f64 });
    }
    let mut g = 0i64;
    for k in 3..=q as i64 {
        g += 2 * (k - 3) + 1;
    }
    Ok(g)
}

/// `(q + sqrt((2(q^2 - 2q + 2) + gamma_q) / d)) / 2`.
pub fn closed_form_bound(q: usize, d: usize) -> Result<f64> {
    let g = gamma(q)? as f64;
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let qf = q as f64;
    Ok(0.5 * (qf + ((2.0 * (qf * qf - 2.0 * qf + 2.0) + g) / d as f64).sqrt()))
}

/// Largest eigenvalue of `F^dagger|0><0|F + (q-1)|0><0|` on one qudit.
///
/// Agrees with [`closed_form_bound`] for `q = 2` only; for larger `q` it is
/// reported next to the closed form as a diagnostic.
pub fn eigenvalue_bound(q: usize, d: usize) -> Result<f64> {
    if q < 2 {
        return Err(Error::OutOfRange { what: "color count q", value: q as f64 });
    }
    let f_dag = basis_matrix(d, 2)?;
    let mut w0 = vec![0.0; d];
    w0[0] = 1.0;
    let a = weighted_projector_sum(&f_dag, &w0);
    let mut m = a;
    m[(0, 0)] += c64::new((q - 1) as f64, 0.0);
    Ok(*jacobi_eigenvalues(&m)?.last().expect("d >= 2"))
}

/// [`eigenvalue_bound`] at `q = 2`, equal to `1 + 1/sqrt(d)`.
pub fn eigenvalue_bound_q2(d: usize) -> Result<f64> {
    eigenvalue_bound(2, d)
}

/// One term with arbitrary outcome weights: `sum_v w(v) |b_v><b_v|`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTerm {
    /// Local basis per party, outcome `v` in column `v`.
    pub bases: Vec<CMatrix>,
    /// Weight per joint outcome, in register index order.
    pub weights: Vec<f64>,
}

/// A kernel given as weighted terms on a register.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedWitness {
    register: QuditRegister,
    terms: Vec<WeightedTerm>,
}

impl WeightedWitness {
    pub fn new(register: QuditRegister, terms: Vec<WeightedTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidSpec("a witness needs at least one term".into()));
        }
        for t in &terms {
            if t.bases.len() != register.parties() || t.weights.len() != register.total_dim() {
                return Err(Error::InvalidSpec("weighted term does not match the register".into()));
            }
            for (k, b) in t.bases.iter().enumerate() {
                if b.nrows() != register.dim(k) || b.ncols() != register.dim(k) {
                    return Err(Error::DimensionMismatch(format!("basis of party {}", k + 1)));
                }
            }
        }
        Ok(Self { register, terms })
    }

    pub fn from_spec(spec: &WitnessSpec) -> Result<Self> {
        let reg = spec.register().clone();
        let terms = spec
            .terms()
            .iter()
            .map(|t| Ok(WeightedTerm { bases: t.basis_matrices(&reg)?, weights: t.indicator(&reg) }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(reg, terms)
    }

    pub fn register(&self) -> &QuditRegister {
        &self.register
    }

    pub fn terms(&self) -> &[WeightedTerm] {
        &self.terms
    }

    /// For each party, the index of each term's basis among that party's
    /// distinct bases, and the number of distinct bases.
    fn setting_keys(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let n = self.register.parties();
        let mut keys = vec![vec![0; self.terms.len()]; n];
        let mut counts = vec![0; n];
        for (p, key) in keys.iter_mut().enumerate() {
            let mut distinct: Vec<&CMatrix> = Vec::new();
            for (m, t) in self.terms.iter().enumerate() {
                let b = &t.bases[p];
                key[m] = match distinct.iter().position(|x| (*x - b).camax() < 1e-12) {
                    Some(i) => i,
                    None => {
                        distinct.push(b);
                        distinct.len() - 1
                    }
                };
            }
            counts[p] = distinct.len();
        }
        (keys, counts)
    }
}

/// What an untrusted party's announcement may depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeclarationScope {
    /// A separate outcome for every term.
    #[default]
    PerTerm,
    /// One outcome per local setting; terms sharing a party's basis share
    /// that party's announcement.
    PerSetting,
}

/// Size limits for the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceLimits {
    pub max_parties: usize,
    pub max_dim: usize,
    pub max_settings: usize,
    pub max_strategies: u64,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        Self { max_parties: 4, max_dim: 3, max_settings: 2, max_strategies: 1 << 24 }
    }
}

/// One announced outcome of an untrusted party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Declaration {
    pub party: usize,
    /// Term index ([`DeclarationScope::PerTerm`]) or setting index
    /// ([`DeclarationScope::PerSetting`]).
    pub class: usize,
    pub value: usize,
}

/// A deterministic cheating strategy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheatingStrategy {
    pub untrusted: Vec<usize>,
    pub scope: DeclarationScope,
    pub declared: Vec<Declaration>,
}

impl fmt::Display for CheatingStrategy {
    /// 1-based, e.g. `A = {1}; v1[t1] = 0, v1[t2] = 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.untrusted.iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "A = {{{}}};", a.join(","))
        ?;
        let tag = match self.scope {
            DeclarationScope::PerTerm => 't',
            DeclarationScope::PerSetting => 's',
        };
        let parts: Vec<String> = self
            .declared
            .iter()
            .map(|d| format!("v{}[{tag}{}] = {}", d.party + 1, d.class + 1, d.value))
            .collect();
        write!(f, " {}", parts.join(", "))
    }
}

/// Best strategy found and its value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceResult {
    pub value: f64,
    pub strategy: CheatingStrategy,
    /// Number of strategies evaluated.
    pub strategies: u64,
}

/// Exhaustive search configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct BruteForce {
    pub limits: BruteForceLimits,
    pub scope: DeclarationScope,
    pub exec: Execution,
}

impl BruteForce {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn limits(mut self, limits: BruteForceLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn scope(mut self, scope: DeclarationScope) -> Self {
        self.scope = scope;
        self
    }

    pub fn exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    /// Runs the search on a graph-type spec.
    pub fn run_spec(&self, spec: &WitnessSpec) -> Result<BruteForceResult> {
        self.run(&WeightedWitness::from_spec(spec)?)
    }

    /// Maximizes over untrusted sets by ascending bitmask and, within a set,
    /// over announcements in lexicographic order; the first maximum wins.
    pub fn run(&self, witness: &WeightedWitness) -> Result<BruteForceResult> {
        let reg = witness.register();
        let n = reg.parties();
        if n < 2 {
            return Err(Error::InvalidSpec("a steering scenario needs at least two parties".into()));
        }
        let (keys, counts) = witness.setting_keys();
        let defaults = BruteForceLimits::default();
        let lim = self.limits;
        if lim.max_parties > defaults.max_parties || lim.max_dim > defaults.max_dim || lim.max_settings > defaults.max_settings {
            log::warn!(
                "brute-force limits raised to {} parties, d <= {}, {} settings; run time grows doubly exponentially",
                lim.max_parties,
                lim.max_dim,
                lim.max_settings
            );
        }
        let over = |requested: usize, cap: usize| {
            (requested > cap).then_some(Error::CapExceeded { kind: CapKind::BruteForce, requested, cap })
        };
        let max_d = *reg.dims().iter().max().expect("nonempty");
        let max_s = *counts.iter().max().expect("nonempty");
        if let Some(e) = over(n, lim.max_parties).or(over(max_d, lim.max_dim)).or(over(max_s, lim.max_settings)) {
            return Err(e);
        }
        let masks: Vec<u32> = (1..(1u32 << n) - 1).collect();
        let mut total = 0u64;
        for &mask in &masks {
            let slots = self.slots(mask, n, witness.terms.len(), &counts);
            let count = slots.iter().try_fold(1u64, |acc, &(p, _)| acc.checked_mul(reg.dim(p) as u64));
            total = count.and_then(|c| total.checked_add(c)).unwrap_or(u64::MAX);
        }
        if total > lim.max_strategies {
            return Err(Error::CapExceeded {
                kind: CapKind::BruteForce,
                requested: usize::try_from(total).unwrap_or(usize::MAX),
                cap: usize::try_from(lim.max_strategies).unwrap_or(usize::MAX),
            });
        }
        let per_mask = self.exec.map(&masks, |&mask| self.best_for_mask(witness, mask, &keys, &counts));
        let mut best: Option<(f64, CheatingStrategy)> = None;
        for r in per_mask {
            let (v, s) = r?;
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, s));
            }
        }
        let (value, strategy) = best.expect("at least one bipartition");
        Ok(BruteForceResult { value, strategy, strategies: total })
    }

    /// Announcement slots `(party, class)` of an untrusted set, in enumeration order.
    fn slots(&self, mask: u32, n: usize, q: usize, counts: &[usize]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in (0..n).filter(|p| mask >> p & 1 == 1) {
            let classes = match self.scope {
                DeclarationScope::PerTerm => q,
                DeclarationScope::PerSetting => counts[p],
            };
            out.extend((0..classes).map(|c| (p, c)));
        }
        out
    }

    fn best_for_mask(
        &self,
        witness: &WeightedWitness,
        mask: u32,
        keys: &[Vec<usize>],
        counts: &[usize],
    ) -> Result<(f64, CheatingStrategy)> {
        let reg = witness.register();
        let n = reg.parties();
        let q = witness.terms.len();
        let untrusted: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 1).collect();
        let split = Bipartition::new(reg, &untrusted)?;
        // operators[m][a] for term m and untrusted outcome tuple a
        let operators: Vec<Vec<CMatrix>> = witness
            .terms
            .iter()
            .map(|t| (0..split.a_count).map(|a| split.trusted_operator(t, a)).collect())
            .collect();
        let slots = self.slots(mask, n, q, counts);
        let radix: Vec<usize> = slots.iter().map(|&(p, _)| reg.dim(p)).collect();
        let mut digits = vec![0usize; slots.len()];
        let mut best_val = f64::NEG_INFINITY;
        let mut best_digits = digits.clone();
        loop {
            let mut sum = CMatrix::zeros(split.b_dim, split.b_dim);
            for (m, ops) in operators.iter().enumerate() {
                let a = split.a_index(&untrusted, |k, p| {
                    let class = match self.scope {
                        DeclarationScope::PerTerm => m,
                        DeclarationScope::PerSetting => keys[p][m],
                    };
                    digits[slot_position(&slots, k, class, self.scope, q, &untrusted, counts)]
                });
                sum += &ops[a];
            }
            let v = *jacobi_eigenvalues(&sum)?.last().expect("nonempty");
            if v > best_val {
                best_val = v;
                best_digits.clone_from(&digits);
            }
            if !increment(&mut digits, &radix) {
                break;
            }
        }
        let declared = slots
            .iter()
            .zip(&best_digits)
            .map(|(&(party, class), &value)| Declaration { party, class, value })
            .collect();
        Ok((best_val, CheatingStrategy { untrusted, scope: self.scope, declared }))
    }
}

/// Position of slot `(untrusted[k], class)` in the slot list.
fn slot_position(
    slots: &[(usize, usize)],
    k: usize,
    class: usize,
    scope: DeclarationScope,
    q: usize,
    untrusted: &[usize],
    counts: &[usize],
) -> usize {
    let offset: usize = untrusted[..k]
        .iter()
        .map(|&p| match scope {
            DeclarationScope::PerTerm => q,
            DeclarationScope::PerSetting => counts[p],
        })
        .sum();
    debug_assert_eq!(slots[offset + class].0, untrusted[k]);
    offset + class
}

/// Lexicographic successor, last digit fastest; false after the last tuple.
fn increment(digits: &mut [usize], radix: &[usize]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Index bookkeeping for an untrusted/trusted split of a register.
struct Bipartition {
    a_dims: Vec<usize>,
    a_count: usize,
    trusted: Vec<usize>,
    b_dims: Vec<usize>,
    b_dim: usize,
    strides: Vec<usize>,
}

impl Bipartition {
    fn new(reg: &QuditRegister, untrusted: &[usize]) -> Result<Self> {
        let trusted: Vec<usize> = (0..reg.parties()).filter(|p| !untrusted.contains(p)).collect();
        let a_dims: Vec<usize> = untrusted.iter().map(|&p| reg.dim(p)).collect();
        let b_dims: Vec<usize> = trusted.iter().map(|&p| reg.dim(p)).collect();
        Ok(Self {
            a_count: a_dims.iter().product(),
            b_dim: b_dims.iter().product(),
            a_dims,
            trusted,
            b_dims,
            strides: reg.strides(),
        })
    }

    /// Mixed-radix index of the untrusted outcome tuple given by `value(k, party)`.
    fn a_index(&self, untrusted: &[usize], mut value: impl FnMut(usize, usize) -> usize) -> usize {
        let mut idx = 0;
        for (k, &p) in untrusted.iter().enumerate() {
            idx = idx * self.a_dims[k] + value(k, p);
        }
        idx
    }

    /// `B_B diag(w(a, .)) B_B^dagger` on the trusted parties.
    fn trusted_operator(&self, term: &WeightedTerm, a: usize) -> CMatrix {
        let untrusted: Vec<usize> = (0..self.strides.len()).filter(|p| !self.trusted.contains(p)).collect();
        let mut base = 0;
        let mut rem = a;
        for k in (0..untrusted.len()).rev() {
            base += (rem % self.a_dims[k]) * self.strides[untrusted[k]];
            rem /= self.a_dims[k];
        }
        let mut w = vec![0.0; self.b_dim];
        for (b, wb) in w.iter_mut().enumerate() {
            let mut idx = base;
            let mut rem = b;
            for k in (0..self.trusted.len()).rev() {
                idx += (rem % self.b_dims[k]) * self.strides[self.trusted[k]];
                rem /= self.b_dims[k];
            }
            *wb = term.weights[idx];
        }
        let mut basis = CMatrix::from_element(1, 1, c64::new(1.0, 0.0));
        for &p in &self.trusted {
            basis = basis.kronecker(&term.bases[p]);
        }
        weighted_projector_sum(&basis, &w)
    }
}

/// Value of a given strategy: the trusted side's best response.
pub fn evaluate_strategy(witness: &WeightedWitness, strategy: &CheatingStrategy) -> Result<f64> {
    let reg = witness.register();
    let n = reg.parties();
    let untrusted = &strategy.untrusted;
    if untrusted.is_empty() || untrusted.len() >= n || untrusted.iter().any(|&p| p >= n) {
        return Err(Error::InvalidSpec("untrusted set must be a nonempty proper subset".into()));
    }
    let (keys, _) = witness.setting_keys();
    let split = Bipartition::new(reg, untrusted)?;
    let mut sum = CMatrix::zeros(split.b_dim, split.b_dim);
    for (m, t) in witness.terms.iter().enumerate() {
        let mut err = None;
        let a = split.a_index(untrusted, |_, p| {
            let class = match strategy.scope {
                DeclarationScope::PerTerm => m,
                DeclarationScope::PerSetting => keys[p][m],
            };
            match strategy.declared.iter().find(|d| d.party == p && d.class == class) {
                Some(d) if d.value < reg.dim(p) => d.value,
                _ => {
                    err = Some(Error::InvalidSpec(format!("no valid announcement for party {} class {}", p + 1, class + 1)));
                    0
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        sum += split.trusted_operator(t, a);
    }
    Ok(*jacobi_eigenvalues(&sum)?.last().expect("nonempty"))
}

/// Exhaustive bound with default limits and per-term announcements.
pub fn brute_force_bound(spec: &WitnessSpec) -> Result<(f64, CheatingStrategy)> {
    let r = BruteForce::new().run_spec(spec)?;
    Ok((r.value, r.strategy))
}

/// How a bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    ClosedForm,
    Eigenvalue,
    BruteForce,
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMethod::ClosedForm => "closed-form",
            BoundMethod::Eigenvalue => "eigenvalue",
            BoundMethod::BruteForce => "brute-force",
        })
    }
}

impl std::str::FromStr for BoundMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" | "closed_form" | "closed" => Ok(BoundMethod::ClosedForm),
            "eigenvalue" | "eigen" => Ok(BoundMethod::Eigenvalue),
            "brute-force" | "brute_force" | "brute" => Ok(BoundMethod::BruteForce),
            _ => Err(Error::Parse(format!("unknown bound method `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ColoredGraph, Preset};
    use crate::witness::spec_from_graph;

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(2).unwrap(), 0);
        assert_eq!(gamma(3).unwrap(), 1);
        assert_eq!(gamma(4).unwrap(), 4);
        assert_eq!(gamma(5).unwrap(), 9);
        assert!(gamma(1).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert!((closed_form_bound(2, 2).unwrap() - (1.0 + 0.5f64.sqrt())).abs() < 1e-15);
        assert!((closed_form_bound(2, 4).unwrap() - 1.5).abs() < 1e-15);
        assert!((closed_form_bound(3, 2).unwrap() - 0.5 * (3.0 + 5.5f64.sqrt())).abs() < 1e-15);
        assert!((closed_form_bound(2, 1_000_000).unwrap() - 1.001).abs() < 1e-12);
        assert!(closed_form_bound(2, 1).is_err());
        assert!(closed_form_bound(1, 2).is_err());
    }

    #[test]
    fn closed_form_monotone() {
        for q in 2..=6 {
            for d in 2..64 {
                let a = closed_form_bound(q, d).unwrap();
                assert!(closed_form_bound(q, d + 1).unwrap() < a);
                assert!(closed_form_bound(q + 1, d).unwrap() > a);
            }
        }
    }

    #[test]
    fn eigenvalue_route() {
        for d in 2..=12 {
            let e = eigenvalue_bound_q2(d).unwrap();
            assert!((e - closed_form_bound(2, d).unwrap()).abs() < 1e-9);
            assert!((e - (1.0 + 1.0 / (d as f64).sqrt())).abs() < 1e-9);
        }
        assert!((eigenvalue_bound_q2(9).unwrap() - 4.0 / 3.0).abs() < 1e-9);
        // two weighted projectors with overlap 1/d
        let (a, b, d) = (1.0f64, 2.0, 2.0);
        let lam = ((a + b) + ((a - b) * (a - b) + 4.0 * a * b / d).sqrt()) / 2.0;
        assert!((eigenvalue_bound(3, 2).unwrap() - lam).abs() < 1e-9);
        assert!((eigenvalue_bound(3, 2).unwrap() - closed_form_bound(3, 2).unwrap()).abs() > 0.05);
    }

    fn bf(p: Preset) -> BruteForceResult {
        let g = p.graph().unwrap();
        BruteForce::new().run_spec(&spec_from_graph(&g).unwrap()).unwrap()
    }

    #[test]
    fn brute_force_matches_closed_form_on_presets() {
        for d in 2..=3 {
            let expected = closed_form_bound(2, d).unwrap();
            for p in [
                Preset::Chain { n: 3, d },
                Preset::Chain { n: 4, d },
                Preset::Star { n: 3, d },
                Preset::Star { n: 4, d },
                Preset::Box4 { d },
                Preset::TwoVertex { d },
            ] {
                let r = bf(p);
                assert!((r.value - expected).abs() < 1e-9, "{p}: {}", r.value);
            }
        }
    }

    #[test]
    fn reported_strategy_replays() {
        let g = Preset::Chain { n: 4, d: 2 }.graph().unwrap();
        let w = WeightedWitness::from_spec(&spec_from_graph(&g).unwrap()).unwrap();
        let r = BruteForce::new().run(&w).unwrap();
        assert_eq!(r.strategy.untrusted, vec![0]);
        assert!((evaluate_strategy(&w, &r.strategy).unwrap() - r.value).abs() < 1e-10);
        assert_eq!(r.strategies, 4 * 4 + 6 * 16 + 4 * 64);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let g = Preset::Box4 { d: 3 }.graph().unwrap();
        let spec = spec_from_graph(&g).unwrap();
        let a = BruteForce::new().exec(Execution::Sequential).run_spec(&spec).unwrap();
        let b = BruteForce::new().exec(Execution::Parallel).run_spec(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn three_colors_bounded_by_q() {
        let g = ColoredGraph::with_greedy_coloring(3, 2, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = BruteForce::new().run_spec(&spec_from_graph(&g).unwrap()).unwrap();
        assert!(r.value >= 1.0 && r.value <= 3.0);
    }

    #[test]
    fn per_setting_never_exceeds_per_term() {
        let g = Preset::Chain { n: 3, d: 2 }.graph().unwrap();
        let spec = spec_from_graph(&g).unwrap();
        let a = BruteForce::new().run_spec(&spec).unwrap().value;
        let b = BruteForce::new().scope(DeclarationScope::PerSetting).run_spec(&spec).unwrap().value;
        assert!(b <= a + 1e-12);
    }

    #[test]
    fn limits_are_enforced() {
        let g = Preset::Chain { n: 5, d: 2 }.graph().unwrap();
        let spec = spec_from_graph(&g).unwrap();
        assert!(matches!(BruteForce::new().run_spec(&spec), Err(e) if e.is_cap()));
        let g = Preset::TwoVertex { d: 4 }.graph().unwrap();
        let spec = spec_from_graph(&g).unwrap();
        assert!(BruteForce::new().run_spec(&spec).is_err());
        let raised = BruteForceLimits { max_dim: 4, ..Default::default() };
        let r = BruteForce::new().limits(raised).run_spec(&spec).unwrap();
        assert!((r.value - 1.5).abs() < 1e-9);
        let tiny = BruteForceLimits { max_strategies: 3, ..Default::default() };
        assert!(BruteForce::new().limits(tiny).run_spec(&spec_from_graph(&Preset::TwoVertex { d: 2 }.graph().unwrap()).unwrap()).is_err());
    }

    #[test]
    fn strategy_display() {
        let s = CheatingStrategy {
            untrusted: vec![0],
            scope: DeclarationScope::PerTerm,
            declared: vec![Declaration { party: 0, class: 0, value: 0 }, Declaration { party: 0, class: 1, value: 1 }],
        };
        assert_eq!(s.to_string(), "A = {1}; v1[t1] = 0, v1[t2] = 1");
    }
}

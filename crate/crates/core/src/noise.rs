//! White-noise robustness: mixtures with the maximally mixed state, the noise
//! level at which the kernel meets the classical bound, and sweeps of that
//! threshold over `d` and `N`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bound::closed_form_bound;
use crate::error::{CapKind, Error, Result};
use crate::exec::Execution;
use crate::graph::{build_graph_state, Preset};
use crate::numfmt::sig;
use crate::tensor::{state_cap, DensityOperator, StateVector};
use crate::witness::{spec_from_graph, WitnessSpec};

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_TOL: f64 = 1e-10;

/// `(p / D) I + (1 - p) |psi><psi|`.
pub fn werner_mix(psi: &StateVector, p: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange { what: "noise level p", value: p });
    }
    let pure = DensityOperator::from_pure(psi)?;
    let mixed = DensityOperator::maximally_mixed(psi.register().clone())?;
    mixed.mix(&pure, p)
}

/// How the crossing point is located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMethod {
    /// Exact solve from the kernel at `p = 0` and `p = 1`.
    #[default]
    Affine,
    /// Bisection on full density-matrix evaluations.
    Bisection,
}

impl std::str::FromStr for ThresholdMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "affine" => Ok(ThresholdMethod::Affine),
            "bisection" | "bisect" => Ok(ThresholdMethod::Bisection),
            _ => Err(Error::Parse(format!("unknown threshold method `{s}`"))),
        }
    }
}

/// Noise level `p*` with `W(werner_mix(psi, p*)) = bound`.
pub fn threshold(spec: &WitnessSpec, psi: &StateVector, bound: f64, method: ThresholdMethod) -> Result<f64> {
    let pure = spec.evaluate_pure(psi)?;
    let mixed = spec.evaluate_maximally_mixed();
    match method {
        ThresholdMethod::Affine => affine_threshold(pure, mixed, bound),
        ThresholdMethod::Bisection => {
            let w0 = spec.evaluate(&werner_mix(psi, 0.0)?)?;
            let w1 = spec.evaluate(&werner_mix(psi, 1.0)?)?;
            if !(w0 > bound && w1 < bound) {
                return Err(Error::NoCrossing { pure: w0, mixed: w1, bound });
            }
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            while hi - lo > BISECTION_TOL {
                let mid = 0.5 * (lo + hi);
                if spec.evaluate(&werner_mix(psi, mid)?)? > bound {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(0.5 * (lo + hi))
        }
    }
}

/// `(W0 - bound) / (W0 - W1)`.
pub fn affine_threshold(pure: f64, mixed: f64, bound: f64) -> Result<f64> {
    if !(pure > bound && mixed < bound) {
        return Err(Error::NoCrossing { pure, mixed, bound });
    }
    Ok((pure - bound) / (pure - mixed))
}

/// One sweep point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessPoint {
    pub graph_kind: String,
    pub n: usize,
    pub d: usize,
    pub q: usize,
    pub bound: f64,
    pub kernel_pure: f64,
    pub kernel_mixed: f64,
    pub p_threshold: f64,
}

/// Graph family and grid of a sweep. Points run over `n_values` (outer) and
/// `d_values` (inner) in the given order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub kind: String,
    pub n_values: Vec<usize>,
    pub d_values: Vec<usize>,
}

impl SweepConfig {
    fn preset(&self, n: usize, d: usize) -> Result<Preset> {
        Preset::from_name(&self.kind, Some(n), Some(d))
    }
}

/// Points up to the first one that does not fit, and why the rest were dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub points: Vec<RobustnessPoint>,
    pub truncated: Option<String>,
}

impl Sweep {
    pub const CSV_HEADER: &'static str = "graph_kind,n,d,q,bound,kernel_pure,kernel_mixed,p_threshold";

    /// CSV with a header; a truncation becomes a final `#` comment line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                p.graph_kind,
                p.n,
                p.d,
                p.q,
                sig(p.bound),
                sig(p.kernel_pure),
                sig(p.kernel_mixed),
                sig(p.p_threshold)
            );
        }
        if let Some(t) = &self.truncated {
            let _ = writeln!(out, "# truncated: {t}");
        }
        out
    }
}

/// Threshold of one preset against the closed-form bound.
pub fn robustness_point(preset: Preset) -> Result<RobustnessPoint> {
    let graph = preset.graph()?;
    let total = (graph.d() as u128).checked_pow(graph.n_vertices() as u32).unwrap_or(u128::MAX);
    if total > state_cap() as u128 {
        return Err(Error::CapExceeded {
            kind: CapKind::StateVector,
            requested: usize::try_from(total).unwrap_or(usize::MAX),
            cap: state_cap(),
        });
    }
    let spec = spec_from_graph(&graph)?;
    let psi = build_graph_state(&graph)?;
    let bound = closed_form_bound(spec.q(), graph.d())?;
    let kernel_pure = spec.evaluate_pure(&psi)?;
    let kernel_mixed = spec.evaluate_maximally_mixed();
    Ok(RobustnessPoint {
        graph_kind: preset.kind().to_string(),
        n: graph.n_vertices(),
        d: graph.d(),
        q: spec.q(),
        bound,
        kernel_pure,
        kernel_mixed,
        p_threshold: affine_threshold(kernel_pure, kernel_mixed, bound)?,
    })
}

/// Evaluates every grid point; stops at the first point over a size cap.
pub fn sweep(config: &SweepConfig, exec: Execution) -> Result<Sweep> {
    let grid: Vec<(usize, usize)> = config
        .n_values
        .iter()
        .flat_map(|&n| config.d_values.iter().map(move |&d| (n, d)))
        .collect();
    let presets = grid.iter().map(|&(n, d)| config.preset(n, d)).collect::<Result<Vec<_>>>()?;
    let results = exec.map(&presets, |p| robustness_point(*p));
    let mut points = Vec::with_capacity(results.len());
    for ((n, d), r) in grid.into_iter().zip(results) {
        match r {
            Ok(p) => points.push(p),
            Err(e) if e.is_cap() => {
                return Ok(Sweep { points, truncated: Some(format!("{} n={n} d={d}: {e}", config.kind)) });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Sweep { points, truncated: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{random_pure, QuditRegister};

    fn chain4(d: usize) -> (WitnessSpec, StateVector) {
        let (g, s) = Preset::Chain { n: 4, d }.build().unwrap();
        (spec_from_graph(&g).unwrap(), s)
    }

    #[test]
    fn mix_endpoints() {
        let (spec, g4) = chain4(2);
        let r0 = werner_mix(&g4, 0.0).unwrap();
        assert!((r0.fidelity_with_pure(&g4).unwrap() - 1.0).abs() < 1e-12);
        let r1 = werner_mix(&g4, 1.0).unwrap();
        let mm = DensityOperator::maximally_mixed(g4.register().clone()).unwrap();
        assert!((r1.matrix() - mm.matrix()).camax() < 1e-15);
        let half = werner_mix(&g4, 0.5).unwrap();
        assert!((spec.evaluate(&half).unwrap() - 1.25).abs() < 1e-10);
        assert!(werner_mix(&g4, 1.5).is_err());
        assert!(werner_mix(&g4, -0.01).is_err());
    }

    #[test]
    fn kernel_is_affine_in_p() {
        let g = Preset::Star { n: 3, d: 3 }.graph().unwrap();
        let spec = spec_from_graph(&g).unwrap();
        let psi = random_pure(spec.register(), 4).unwrap();
        let w0 = spec.evaluate_pure(&psi).unwrap();
        let w1 = spec.evaluate_maximally_mixed();
        for p in [0.1, 0.37, 0.8] {
            let w = spec.evaluate(&werner_mix(&psi, p).unwrap()).unwrap();
            assert!((w - ((1.0 - p) * w0 + p * w1)).abs() < 1e-10);
        }
    }

    #[test]
    fn mixed_kernel_counts_color_classes() {
        for (p, d) in [(Preset::Chain { n: 5, d: 2 }, 2), (Preset::Star { n: 4, d: 3 }, 3), (Preset::Box4 { d: 3 }, 3)] {
            let g = p.graph().unwrap();
            let spec = spec_from_graph(&g).unwrap();
            let expect: f64 = g.colors().iter().map(|c| (d as f64).powi(-(c.len() as i32))).sum();
            assert!((spec.evaluate_maximally_mixed() - expect).abs() < 1e-14);
            let traces: f64 = spec
                .terms()
                .iter()
                .map(|t| crate::witness::term_projector(t, spec.register()).unwrap().trace().re)
                .sum::<f64>()
                / spec.register().total_dim() as f64;
            assert!((traces - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn chain4_threshold_both_ways() {
        let (spec, g4) = chain4(2);
        let bound = closed_form_bound(2, 2).unwrap();
        let a = threshold(&spec, &g4, bound, ThresholdMethod::Affine).unwrap();
        let b = threshold(&spec, &g4, bound, ThresholdMethod::Bisection).unwrap();
        assert!((a - (2.0 - bound) / 1.5).abs() < 1e-12);
        assert!((a - 0.195_262_1).abs() < 1e-7);
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn two_vertex_threshold() {
        for d in 2..=9 {
            let p = robustness_point(Preset::TwoVertex { d }).unwrap();
            let s = (d as f64).sqrt();
            assert!((p.p_threshold - s / (2.0 * (s + 1.0))).abs() < 1e-12);
        }
        let p = robustness_point(Preset::TwoVertex { d: 2 }).unwrap();
        assert!((p.p_threshold - 0.292_893_2).abs() < 1e-7);
    }

    #[test]
    fn no_crossing() {
        let (spec, _) = chain4(2);
        let psi = StateVector::basis(QuditRegister::uniform(4, 2).unwrap(), 0).unwrap();
        let r = threshold(&spec, &psi, closed_form_bound(2, 2).unwrap(), ThresholdMethod::Affine);
        assert!(matches!(r, Err(Error::NoCrossing { .. })));
    }

    #[test]
    fn star_pair_sweep_increases_toward_half() {
        let cfg = SweepConfig { kind: "star".into(), n_values: vec![2], d_values: (2..=9).collect() };
        let s = sweep(&cfg, Execution::default()).unwrap();
        assert_eq!(s.points.len(), 8);
        for w in s.points.windows(2) {
            assert!(w[1].p_threshold > w[0].p_threshold);
        }
        assert!(s.points.iter().all(|p| p.p_threshold > 0.0 && p.p_threshold < 0.5));
    }

    #[test]
    fn sweep_truncates_at_cap_and_is_deterministic() {
        let cfg = SweepConfig { kind: "chain".into(), n_values: vec![4, 30], d_values: vec![2, 3] };
        let a = sweep(&cfg, Execution::Parallel).unwrap();
        let b = sweep(&cfg, Execution::Sequential).unwrap();
        assert_eq!(a.points.len(), 2);
        assert!(a.points[1].p_threshold > a.points[0].p_threshold);
        assert!(a.truncated.as_deref().unwrap().contains("n=30"));
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.to_csv().starts_with(Sweep::CSV_HEADER));
        assert!(a.to_csv().lines().last().unwrap().starts_with("# truncated"));
    }
}

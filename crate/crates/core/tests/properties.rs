use proptest::prelude::*;

use steerlab::bound::{closed_form_bound, eigenvalue_bound_q2};
use steerlab::fidelity::sandwich;
use steerlab::graph::{build_graph_state, ColoredGraph, Preset};
use steerlab::noise::{threshold, werner_mix, ThresholdMethod};
use steerlab::tensor::{random_mixed, random_pure};
use steerlab::witness::{spec_from_graph, WitnessSpec};
use steerlab::{DensityOperator, Execution, QuditRegister};

fn chain_spec(n: usize, d: usize) -> WitnessSpec {
    spec_from_graph(&Preset::Chain { n, d }.graph().unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn kernel_is_affine_in_the_state(seed in 0u64..10_000, t in 0.0f64..1.0) {
        let spec = chain_spec(3, 2);
        let reg = spec.register().clone();
        let a = random_mixed(&reg, seed).unwrap();
        let b = random_mixed(&reg, seed + 1).unwrap();
        let mixed = a.mix(&b, t).unwrap();
        let lhs = spec.evaluate(&mixed).unwrap();
        let rhs = t * spec.evaluate(&a).unwrap() + (1.0 - t) * spec.evaluate(&b).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn kernel_lies_in_zero_to_q(seed in 0u64..10_000, d in 2usize..4) {
        let spec = chain_spec(3, d);
        let rho = random_mixed(spec.register(), seed).unwrap();
        let w = spec.evaluate(&rho).unwrap();
        prop_assert!(w >= -1e-12 && w <= spec.q() as f64 + 1e-12);
    }

    #[test]
    fn pure_and_density_paths_agree(seed in 0u64..10_000) {
        let spec = chain_spec(4, 2);
        let psi = random_pure(spec.register(), seed).unwrap();
        let rho = DensityOperator::from_pure(&psi).unwrap();
        prop_assert!((spec.evaluate_pure(&psi).unwrap() - spec.evaluate(&rho).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn term_values_do_not_depend_on_execution(seed in 0u64..10_000) {
        let spec = chain_spec(4, 2);
        let rho = random_mixed(spec.register(), seed).unwrap();
        let s = spec.term_values(&rho, Execution::Sequential).unwrap();
        let p = spec.term_values(&rho, Execution::Parallel).unwrap();
        prop_assert_eq!(s, p);
    }

    #[test]
    fn fidelity_sits_inside_the_sandwich(seed in 0u64..10_000, p in 0.0f64..1.0) {
        let (graph, psi) = Preset::Chain { n: 4, d: 2 }.build().unwrap();
        let spec = spec_from_graph(&graph).unwrap();
        let noisy = werner_mix(&psi, p).unwrap();
        let other = random_mixed(spec.register(), seed).unwrap();
        let rho = noisy.mix(&other, 0.5).unwrap();
        let w = spec.evaluate(&rho).unwrap();
        let win = sandwich(w, spec.q()).unwrap();
        prop_assert!(win.contains(rho.fidelity_with_pure(&psi).unwrap(), 1e-9));
    }

    #[test]
    fn random_states_are_valid(seed in 0u64..10_000, n in 1usize..4, d in 2usize..4) {
        let reg = QuditRegister::uniform(n, d).unwrap();
        let psi = random_pure(&reg, seed).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
        let rho = random_mixed(&reg, seed).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
        prop_assert!(rho.eigenvalues().unwrap().iter().all(|&l| l > -1e-10));
    }

    #[test]
    fn graph_state_ignores_edge_order(mut edges in proptest::sample::subsequence(
        vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 1..6), d in 2usize..4) {
        let a = build_graph_state(&ColoredGraph::with_greedy_coloring(4, d, edges.clone()).unwrap()).unwrap();
        edges.reverse();
        let flipped: Vec<_> = edges.iter().map(|&(u, v)| (v, u)).collect();
        let b = build_graph_state(&ColoredGraph::with_greedy_coloring(4, d, flipped).unwrap()).unwrap();
        prop_assert_eq!(a.amplitudes(), b.amplitudes());
    }
}

#[test]
fn closed_form_decreases_in_d_and_increases_in_q() {
    for q in 2..6 {
        let mut prev = f64::INFINITY;
        for d in 2..12 {
            let b = closed_form_bound(q, d).unwrap();
            assert!(b < prev && b > q as f64 / 2.0 && b < q as f64);
            prev = b;
        }
    }
    for d in 2..8 {
        assert!(closed_form_bound(3, d).unwrap() > closed_form_bound(2, d).unwrap());
        assert!((closed_form_bound(2, d).unwrap() - eigenvalue_bound_q2(d).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn affine_and_bisection_thresholds_agree() {
    for preset in [Preset::Chain { n: 3, d: 3 }, Preset::Star { n: 4, d: 2 }, Preset::TwoVertex { d: 4 }] {
        let (graph, psi) = preset.build().unwrap();
        let spec = spec_from_graph(&graph).unwrap();
        let bound = closed_form_bound(spec.q(), graph.d()).unwrap();
        let a = threshold(&spec, &psi, bound, ThresholdMethod::Affine).unwrap();
        let b = threshold(&spec, &psi, bound, ThresholdMethod::Bisection).unwrap();
        assert!((a - b).abs() < 1e-8, "{preset}: {a} vs {b}");
    }
}

mod common;

use std::f64::consts::PI;

use qubit_landscape::dynamics::{canonical_frame, ControlGrid, HamiltonianPair};
use qubit_landscape::landscape::exceptional::{f0_second_order_report, F0Verdict};
use qubit_landscape::landscape::variation::{i_functional, ExceptionalVariation};
use qubit_landscape::landscape::{
    ascend, classify, derive_seed, random_pair, sweep, Direction, OptimizerConfig, PointKind,
    RunStatus, SweepConfig, SweepObjective, Tolerances,
};
use qubit_landscape::objectives::gates;
use qubit_landscape::{Objective, QuantumState};

#[test]
fn single_segment_rabi_ascent_finds_scan_maximum() {
    let pair = HamiltonianPair::from_pauli([0., 0., 0., 1.], [0., 1., 0., 0.]).unwrap();
    let obj = Objective::transition(QuantumState::zero(), QuantumState::one());
    let t = PI / 2.0;
    let p = |f: f64| {
        let w = (1.0 + f * f).sqrt();
        f * f * (w * t).sin().powi(2) / (w * w)
    };
    // dense scan over the basin around the start
    let (mut best_f, mut best_p) = (0.0, 0.0);
    for k in 0..=200_000 {
        let f = k as f64 * 1e-5;
        if p(f) > best_p {
            (best_f, best_p) = (f, p(f));
        }
    }
    let run = ascend(
        &obj,
        &pair,
        &ControlGrid::new(t, vec![0.8]).unwrap(),
        &OptimizerConfig::default(),
    )
    .unwrap();
    assert_eq!(run.status, RunStatus::Converged);
    assert!((run.final_control.values()[0] - best_f).abs() < 2e-5);
    assert!((run.final_value() - best_p).abs() < 1e-9);
    assert!(run.trace.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn piecewise_constant_rule_converges_at_second_order() {
    for var in ExceptionalVariation::BOTH {
        let err = |n: usize| {
            let h = PI / n as f64;
            let d: Vec<f64> = (0..n).map(|k| var.eval(h * (k as f64 + 0.5))).collect();
            (i_functional(&d, PI, 1.0) - var.exact_i_over_v2()).abs()
        };
        if var == ExceptionalVariation::Window {
            assert!(err(64) < 1e-13);
            continue;
        }
        let ratio = err(256) / err(512);
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    }
}

#[test]
fn saddle_splits_on_random_pairs() {
    for i in 0..10u64 {
        let pair = random_pair(derive_seed(61, 0, i), true, 0.3).unwrap();
        let frame = canonical_frame(&pair).unwrap();
        let q = frame.basis_change;
        let obj = Objective::gate(
            q * gates::phase(common::uniform(&mut common::rng(i), 0.3, 2.8)) * q.dagger(),
        )
        .unwrap();
        let r = f0_second_order_report(&pair, &obj, frame.min_time(), 256, &[1e-2, 1e-3, 1e-4])
            .unwrap();
        assert_eq!(r.verdict, F0Verdict::SaddleConfirmed, "pair {i}");
        for p in &r.probes {
            assert!(p.delta[0].signum() == -p.delta[1].signum());
        }
    }
}

#[test]
fn observable_maximum_is_recognised() {
    // ρ0 = diag(0.7, 0.3), O = |0⟩⟨0| at the identity: F = ω1
    let pair = HamiltonianPair::from_pauli([0., 0., 0., 1.], [0., 1., 0., 0.]).unwrap();
    let rho = qubit_landscape::DensityMatrix::from_bloch([0., 0., 0.4]).unwrap();
    let obj = Objective::observable(rho, QuantumState::zero().projector()).unwrap();
    let control = ControlGrid::constant(PI, 8, 0.0).unwrap();
    let p = classify(
        &obj,
        &pair,
        &control,
        &Tolerances::default(),
        Direction::Ascend,
    )
    .unwrap();
    assert_eq!(p.kind, PointKind::GlobalMax);
    assert!((p.value - 0.7).abs() < 1e-12);
}

#[test]
fn gate_sweep_has_only_global_critical_values() {
    let cfg = SweepConfig::new(
        12,
        3,
        32,
        SweepObjective::Gate {
            target: gates::hadamard(),
        },
        71,
    );
    let report = sweep(&cfg).unwrap();
    assert_eq!(report.counts.traps(), 0);
    for r in &report.runs {
        if r.point.grad_norm < 1e-8 {
            let f = r.point.value;
            assert!(f.min((f - 1.0).abs()) < 1e-4, "{f}");
        }
    }
}

#[test]
fn sweep_is_reproducible() {
    let cfg = SweepConfig::new(
        4,
        2,
        16,
        SweepObjective::RandomObservable {
            eigenvalues: [0.2, 0.8],
        },
        72,
    );
    assert_eq!(sweep(&cfg).unwrap(), sweep(&cfg).unwrap());
}

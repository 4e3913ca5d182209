mod common;

use num_complex::Complex64 as C64;
use qubit_landscape::dynamics::final_unitary;
use qubit_landscape::mat2::{expm_unitary, CMat2};
use qubit_landscape::objectives::{
    evaluate, l_functional, reduce_observable, DensityMatrix, ObservableReduction,
};
use qubit_landscape::Objective;

#[test]
fn values_ignore_global_phase() {
    let mut rng = common::rng(41);
    for i in 0..300 {
        let obj = common::objective(&mut rng, i % 3);
        let u = common::unitary(&mut rng);
        let phase = C64::from_polar(1.0, common::uniform(&mut rng, -3.2, 3.2));
        assert!((obj.value(&u) - obj.value(&u.scale(phase))).abs() < 1e-12);
    }
}

#[test]
fn transition_is_a_pure_state_observable() {
    let mut rng = common::rng(42);
    for _ in 0..300 {
        let (i, f) = (common::state(&mut rng), common::state(&mut rng));
        let t = Objective::transition(i, f);
        let o = Objective::observable(DensityMatrix::pure(&i), f.projector()).unwrap();
        let u = common::unitary(&mut rng);
        assert!((t.value(&u) - o.value(&u)).abs() < 1e-12);
    }
}

#[test]
fn reduction_scales_the_gradient() {
    let mut rng = common::rng(43);
    for _ in 0..50 {
        let pair = common::pair(&mut rng);
        let control = common::control(&mut rng, 16);
        let rho = common::density(&mut rng);
        let o = common::hermitian(&mut rng);
        let ObservableReduction::Projector {
            projector, scale, ..
        } = reduce_observable(&o).unwrap()
        else {
            continue;
        };
        let raw = evaluate(&Objective::observable(rho, o).unwrap(), &pair, &control).gradient;
        let reduced = evaluate(
            &Objective::observable(rho, projector).unwrap(),
            &pair,
            &control,
        )
        .gradient;
        for (a, b) in raw.iter().zip(&reduced) {
            assert!((a - scale * b).abs() < 1e-10);
        }
    }
}

#[test]
fn first_variation_matches_finite_differences() {
    let h = 1e-6;
    for family in 0..3 {
        let mut rng = common::rng(44 + family as u64);
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let obj = common::objective(&mut rng, family);
            let u = common::unitary(&mut rng);
            let a = common::hermitian(&mut rng);
            let l = l_functional(&obj, &u, &a);
            let plus = obj.value(&(u * expm_unitary(&a, h).unwrap()));
            let minus = obj.value(&(u * expm_unitary(&a, -h).unwrap()));
            let fd = (plus - minus) / (2.0 * h);
            worst = worst.max((l - fd).abs() / l.abs().max(1e-3));
        }
        assert!(worst < 1e-6, "{}: {worst}", common::FAMILIES[family]);
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let h = 1e-6;
    for family in 0..3 {
        let mut rng = common::rng(47 + family as u64);
        for _ in 0..50 {
            let pair = common::pair(&mut rng);
            let control = common::control(&mut rng, 8);
            let obj = common::objective(&mut rng, family);
            let g = evaluate(&obj, &pair, &control).gradient;
            let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-3);
            let mut x = control.values().to_vec();
            for k in 0..x.len() {
                let base = x[k];
                x[k] = base + h;
                let plus = obj.value(&final_unitary(
                    &pair,
                    &control.with_values(x.clone()).unwrap(),
                ));
                x[k] = base - h;
                let minus = obj.value(&final_unitary(
                    &pair,
                    &control.with_values(x.clone()).unwrap(),
                ));
                x[k] = base;
                let fd = (plus - minus) / (2.0 * h);
                assert!(
                    (g[k] - fd).abs() / scale < 1e-6,
                    "{} segment {k}",
                    common::FAMILIES[family]
                );
            }
        }
    }
}

#[test]
fn kinematic_range_brackets_values() {
    let mut rng = common::rng(50);
    for family in 0..3 {
        let obj = common::objective(&mut rng, family);
        let range = obj.kinematic_range();
        for _ in 0..1000 {
            let v = obj.value(&common::unitary(&mut rng));
            assert!(
                range.contains(v, 1e-12),
                "{v} outside [{}, {}]",
                range.min,
                range.max
            );
        }
    }
}

#[test]
fn first_variation_vanishes_on_identity() {
    let mut rng = common::rng(51);
    for i in 0..1000 {
        let obj = common::objective(&mut rng, i % 3);
        let u = common::unitary(&mut rng);
        assert!(l_functional(&obj, &u, &CMat2::identity()).abs() < 1e-12);
    }
}

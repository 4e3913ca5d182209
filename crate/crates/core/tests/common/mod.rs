#![allow(dead_code)]

use num_complex::Complex64 as C64;
use qubit_landscape::dynamics::{ControlGrid, HamiltonianPair};
use qubit_landscape::mat2::{expm_unitary, CMat2};
use qubit_landscape::{DensityMatrix, Objective, QuantumState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..=hi)
}

pub fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let z = uniform(rng, -1.0, 1.0);
    let phi = uniform(rng, 0.0, std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

pub fn hermitian(rng: &mut ChaCha8Rng) -> CMat2 {
    CMat2::from_real_pauli(
        uniform(rng, -1.0, 1.0),
        uniform(rng, -1.0, 1.0),
        uniform(rng, -1.0, 1.0),
        uniform(rng, -1.0, 1.0),
    )
}

pub fn unitary(rng: &mut ChaCha8Rng) -> CMat2 {
    let h = hermitian(rng);
    expm_unitary(&h, uniform(rng, 0.0, 4.0)).unwrap()
}

pub fn state(rng: &mut ChaCha8Rng) -> QuantumState {
    let a = C64::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    let b = C64::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    QuantumState::normalized(a, b).unwrap()
}

pub fn density(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let r = unit_vector(rng);
    let len = uniform(rng, 0.05, 0.95);
    DensityMatrix::from_bloch([r[0] * len, r[1] * len, r[2] * len]).unwrap()
}

pub fn pair(rng: &mut ChaCha8Rng) -> HamiltonianPair {
    loop {
        let h0 = std::array::from_fn(|_| uniform(rng, -1.0, 1.0));
        let v = std::array::from_fn(|_| uniform(rng, -1.0, 1.0));
        if let Ok(p) = HamiltonianPair::from_pauli(h0, v) {
            return p;
        }
    }
}

pub fn control(rng: &mut ChaCha8Rng, segments: usize) -> ControlGrid {
    let horizon = uniform(rng, 0.5, 4.0);
    let values = (0..segments).map(|_| uniform(rng, -1.5, 1.5)).collect();
    ControlGrid::new(horizon, values).unwrap()
}

/// 0: transition, 1: observable with a random non-degenerate `O`, 2: gate.
pub fn objective(rng: &mut ChaCha8Rng, family: usize) -> Objective {
    match family {
        0 => Objective::transition(state(rng), state(rng)),
        1 => loop {
            let o = hermitian(rng);
            if let Ok(obj) = Objective::observable(density(rng), o) {
                if !obj.kinematic_range().degenerate {
                    return obj;
                }
            }
        },
        _ => Objective::gate(unitary(rng)).unwrap(),
    }
}

pub const FAMILIES: [&str; 3] = ["transition", "observable", "gate"];

//! WebAssembly bindings for the single-page demo in `www/`.
//!
//! Pairs are passed as Pauli coefficients `[c_I, c_x, c_y, c_z]`. The gate
//! is named: `"hadamard"`, `"not"`, or `"canonical_phase"`, the latter being
//! `Q·diag(1, e^{iφ})·Q†` in the eigenbasis `Q` of `H0 + f0·V`, which makes
//! `f ≡ f0` a critical point at `T_min`.

use qubit_landscape::dynamics::{
    canonical_frame, exceptional_control, ControlGrid, HamiltonianPair,
};
use qubit_landscape::landscape::exceptional::{exceptional_variations, f0_second_order_report};
use qubit_landscape::landscape::{ascend, LandscapeSlice, OptimizerConfig};
use qubit_landscape::objectives::gates;
use qubit_landscape::Objective;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

fn pauli(c: &[f64]) -> Result<[f64; 4], String> {
    c.try_into()
        .map_err(|_| format!("expected 4 Pauli coefficients, got {}", c.len()))
}

fn pair(h0: &[f64], v: &[f64]) -> Result<HamiltonianPair, String> {
    HamiltonianPair::from_pauli(pauli(h0)?, pauli(v)?).map_err(|e| e.to_string())
}

fn gate(pair: &HamiltonianPair, name: &str, phase: f64) -> Result<Objective, String> {
    let w = match name {
        "hadamard" => gates::hadamard(),
        "not" => gates::not(),
        "canonical_phase" => {
            let q = canonical_frame(pair)
                .map_err(|e| e.to_string())?
                .basis_change;
            q * gates::phase(phase) * q.dagger()
        }
        other => return Err(format!("unknown gate {other}")),
    };
    Objective::gate(w).map_err(|e| e.to_string())
}

/// Row-major `resolution²` values on the plane through `f ≡ f0` at `T_min`
/// spanned by the two canonical variations.
pub fn f0_slice(
    h0: &[f64],
    v: &[f64],
    gate_name: &str,
    phase: f64,
    segments: usize,
    extent: f64,
    resolution: usize,
) -> Result<Vec<f64>, String> {
    let p = pair(h0, v)?;
    let obj = gate(&p, gate_name, phase)?;
    let frame = canonical_frame(&p).map_err(|e| e.to_string())?;
    let f0 = exceptional_control(&p).map_err(|e| e.to_string())?;
    let horizon = frame.min_time();
    let base = ControlGrid::constant(horizon, segments, f0).map_err(|e| e.to_string())?;
    let [a, b] = exceptional_variations(frame.time_scale, horizon, segments);
    let s = LandscapeSlice::compute(&obj, &p, &base, &a, &b, [extent; 2], resolution)
        .map_err(|e| e.to_string())?;
    Ok(s.values.concat())
}

/// Objective value after each accepted ascent step from a seeded random start.
pub fn ascent_trace(
    h0: &[f64],
    v: &[f64],
    gate_name: &str,
    phase: f64,
    t_multiplier: f64,
    segments: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let p = pair(h0, v)?;
    let obj = gate(&p, gate_name, phase)?;
    let horizon = t_multiplier * canonical_frame(&p).map_err(|e| e.to_string())?.min_time();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..segments).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let init = ControlGrid::new(horizon, values).map_err(|e| e.to_string())?;
    let run = ascend(&obj, &p, &init, &OptimizerConfig::default()).map_err(|e| e.to_string())?;
    Ok(run.trace)
}

/// The second-order report at `f0` and `T_min`, as JSON.
pub fn f0_report_json(
    h0: &[f64],
    v: &[f64],
    gate_name: &str,
    phase: f64,
    segments: usize,
) -> Result<String, String> {
    let p = pair(h0, v)?;
    let obj = gate(&p, gate_name, phase)?;
    let t_min = canonical_frame(&p).map_err(|e| e.to_string())?.min_time();
    let r = f0_second_order_report(&p, &obj, t_min, segments, &[1e-2, 1e-3])
        .map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = f0Slice)]
pub fn f0_slice_js(
    h0: &[f64],
    v: &[f64],
    gate_name: &str,
    phase: f64,
    segments: usize,
    extent: f64,
    resolution: usize,
) -> Result<Vec<f64>, JsError> {
    f0_slice(h0, v, gate_name, phase, segments, extent, resolution).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = ascentTrace)]
pub fn ascent_trace_js(
    h0: &[f64],
    v: &[f64],
    gate_name: &str,
    phase: f64,
    t_multiplier: f64,
    segments: usize,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    ascent_trace(h0, v, gate_name, phase, t_multiplier, segments, seed as u64)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = f0Report)]
pub fn f0_report_js(
    h0: &[f64],
    v: &[f64],
    gate_name: &str,
    phase: f64,
    segments: usize,
) -> Result<String, JsError> {
    f0_report_json(h0, v, gate_name, phase, segments).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const H0: [f64; 4] = [0., 0., 0., 1.];
    const V: [f64; 4] = [0., 1., 0., 0.];

    #[test]
    fn slice_centre_is_the_f0_value() {
        let s = f0_slice(&H0, &V, "canonical_phase", 1.0, 32, 0.05, 5).unwrap();
        assert_eq!(s.len(), 25);
        let centre = s[12];
        // rows follow the first variation, columns the second
        let da = [s[2] - centre, s[22] - centre];
        let db = [s[10] - centre, s[14] - centre];
        assert!(da[0] * db[0] < 0.0 && da[1] * db[1] < 0.0);
    }

    #[test]
    fn trace_is_monotone_and_reaches_the_gate() {
        let t = ascent_trace(&H0, &V, "hadamard", 0.0, 2.0, 16, 3).unwrap();
        assert!(t.windows(2).all(|w| w[1] >= w[0]));
        assert!((t.last().unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn report_parses_and_rejects_bad_input() {
        let r: serde_json::Value =
            serde_json::from_str(&f0_report_json(&H0, &V, "canonical_phase", 1.0, 64).unwrap())
                .unwrap();
        assert_eq!(r["verdict"], "saddle_confirmed");
        assert!(f0_report_json(&H0, &[0.5, 1., 0., 0.], "not", 0.0, 64).is_err());
        assert!(f0_report_json(&H0, &V, "toffoli", 0.0, 64).is_err());
        assert!(f0_slice(&H0[..3], &V, "not", 0.0, 8, 0.1, 3).is_err());
    }
}

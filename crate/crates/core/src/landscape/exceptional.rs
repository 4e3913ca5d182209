//! Second-order analysis at the exceptional control `f ≡ f0`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{canonical_frame, ControlGrid, HamiltonianPair};
use crate::error::{Hypothesis, Result};
use crate::landscape::variation::{
    i_functional_smooth, variation_admissible, ExceptionalVariation,
};
use crate::mat2::PREDICATE_TOL;
use crate::objectives::{evaluate, l_functional, Objective};

/// Gradient ∞-norm below which `f0` counts as critical.
pub const F0_CRITICAL_TOL: f64 = 1e-8;
/// `|L(σz)|` at or below this counts as zero.
pub const F0_LZ_ZERO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum F0Verdict {
    SaddleConfirmed,
    CriticalWithZeroLz,
    NotCritical,
    /// Critical with `L(σz) ≠ 0`, but the measured differences did not split
    /// in sign for every `ε`.
    Inconclusive,
}

impl F0Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            F0Verdict::SaddleConfirmed => "saddle_confirmed",
            F0Verdict::CriticalWithZeroLz => "critical_with_zero_lz",
            F0Verdict::NotCritical => "not_critical",
            F0Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonProbe {
    pub epsilon: f64,
    /// `F(f0 + ε·δf_k) − F(f0)`.
    pub delta: [f64; 2],
    /// `ε²·I_k·L(σz)`.
    pub predicted: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F0Report {
    pub f0: f64,
    pub t_min: f64,
    pub horizon: f64,
    pub segments: usize,
    pub time_scale: f64,
    /// Transverse coupling in canonical time.
    pub v: f64,
    pub phi: f64,
    pub v_z: f64,
    pub value_at_f0: f64,
    pub grad_norm: f64,
    pub l_sigma_z: f64,
    pub admissible: [bool; 2],
    pub i_values: [f64; 2],
    pub probes: Vec<EpsilonProbe>,
    pub verdict: F0Verdict,
}

/// The two variations `δf₁ = χ[0,π]`, `δf₂ = cos4τ·χ[0,π]` of canonical time
/// `τ = s·t`, averaged over the cells of a `segments`-grid on `[0, horizon]`.
pub fn exceptional_variations(time_scale: f64, horizon: f64, segments: usize) -> [Vec<f64>; 2] {
    ExceptionalVariation::BOTH.map(|var| var.cell_averages(time_scale * horizon, segments))
}

/// Probe the landscape around `f ≡ f0` along the two canonical variations.
///
/// Requires a traceless `V` and `horizon ≥ T_min`.
pub fn f0_second_order_report(
    pair: &HamiltonianPair,
    obj: &Objective,
    horizon: f64,
    segments: usize,
    epsilons: &[f64],
) -> Result<F0Report> {
    let tr_v = pair.v().trace().re;
    if tr_v.abs() > PREDICATE_TOL {
        return Err(Hypothesis::TracelessInteraction(tr_v).into());
    }
    let frame = canonical_frame(pair)?;
    let t_min = frame.min_time();
    if !(horizon >= t_min * (1.0 - 1e-12)) {
        return Err(Hypothesis::MinimalTime { horizon, t_min }.into());
    }

    let base = ControlGrid::constant(horizon, segments, frame.f0)?;
    let ev = evaluate(obj, pair, &base);
    let grad_norm = ev.gradient.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let l_sigma_z = l_functional(obj, &ev.unitary, &frame.sigma_z());

    let s = frame.time_scale;
    let deltas = exceptional_variations(s, horizon, segments);
    let admissible = [
        variation_admissible(&deltas[0], s * horizon)?,
        variation_admissible(&deltas[1], s * horizon)?,
    ];
    let coupling = frame.rescaled_coupling();
    let i_values = ExceptionalVariation::BOTH
        .map(|var| i_functional_smooth(|t| var.eval(t), s * horizon, segments, coupling));

    let mut probes = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let mut delta = [0.0; 2];
        for (k, d) in deltas.iter().enumerate() {
            let values = base
                .values()
                .iter()
                .zip(d)
                .map(|(f, dk)| f + eps * dk)
                .collect();
            let u = crate::dynamics::final_unitary(pair, &base.with_values(values)?);
            delta[k] = obj.value(&u) - ev.value;
        }
        let predicted = i_values.map(|i| eps * eps * i * l_sigma_z);
        probes.push(EpsilonProbe {
            epsilon: eps,
            delta,
            predicted,
        });
    }

    let verdict = if grad_norm > F0_CRITICAL_TOL {
        F0Verdict::NotCritical
    } else if frame.v_z.abs() > PREDICATE_TOL || l_sigma_z.abs() <= F0_LZ_ZERO_TOL {
        F0Verdict::CriticalWithZeroLz
    } else {
        let nonzero: Vec<_> = probes.iter().filter(|p| p.epsilon != 0.0).collect();
        let split = !nonzero.is_empty() && nonzero.iter().all(|p| p.delta[0] * p.delta[1] < 0.0);
        if split {
            F0Verdict::SaddleConfirmed
        } else {
            F0Verdict::Inconclusive
        }
    };

    Ok(F0Report {
        f0: frame.f0,
        t_min,
        horizon,
        segments,
        time_scale: s,
        v: coupling,
        phi: frame.phi,
        v_z: frame.v_z,
        value_at_f0: ev.value,
        grad_norm,
        l_sigma_z,
        admissible,
        i_values,
        probes,
        verdict,
    })
}

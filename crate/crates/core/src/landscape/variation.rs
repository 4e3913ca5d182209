//! Control variations around the exceptional control, in canonical time
//! (generator `σz`, transverse coupling `v`).
//!
//! A variation `δf` is admissible when `∫δf·cos2t = ∫δf·sin2t = 0`; for such
//! variations the final propagator changes at second order only, by
//! `−i·I(δf)·σz` with
//! `I(δf) = v² ∫₀ᵀ dt₁ ∫₀^{t₁} dt₂ δf(t₁) δf(t₂) sin 2(t₁ − t₂)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 5-point Gauss–Legendre rule on `[-1, 1]`.
const GAUSS_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GAUSS_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// `∫_a^b g(t) dt` by 5-point Gauss–Legendre.
pub(crate) fn gauss<F: Fn(f64) -> f64>(a: f64, b: f64, g: F) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    GAUSS_NODES
        .iter()
        .zip(GAUSS_WEIGHTS)
        .map(|(x, w)| w * g(mid + half * x))
        .sum::<f64>()
        * half
}

/// The two opposite-curvature variations supported on `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalVariation {
    /// `χ_[0,π](t)`.
    Window,
    /// `cos(4t)·χ_[0,π](t)`.
    CosineWindow,
}

impl ExceptionalVariation {
    pub const BOTH: [ExceptionalVariation; 2] = [
        ExceptionalVariation::Window,
        ExceptionalVariation::CosineWindow,
    ];

    pub fn eval(&self, t: f64) -> f64 {
        if !(0.0..=PI).contains(&t) {
            return 0.0;
        }
        match self {
            ExceptionalVariation::Window => 1.0,
            ExceptionalVariation::CosineWindow => (4.0 * t).cos(),
        }
    }

    /// Closed-form `I(δf)/v²`: `π/2` and `−π/12`.
    pub fn exact_i_over_v2(&self) -> f64 {
        match self {
            ExceptionalVariation::Window => PI / 2.0,
            ExceptionalVariation::CosineWindow => -PI / 12.0,
        }
    }

    /// Segment averages on a uniform `segments`-grid over `[0, horizon]`.
    pub fn cell_averages(&self, horizon: f64, segments: usize) -> Vec<f64> {
        let h = horizon / segments as f64;
        (0..segments)
            .map(|k| {
                let a = h * k as f64;
                let b = (h * (k + 1) as f64).min(PI);
                if b <= a {
                    0.0
                } else {
                    gauss(a, b, |t| self.eval(t)) / h
                }
            })
            .collect()
    }
}

/// `(∫δf·cos2t, ∫δf·sin2t)` for a piecewise-constant `δf` on `[0, horizon]`.
pub fn first_order_moments(delta: &[f64], horizon: f64) -> (f64, f64) {
    let h = horizon / delta.len() as f64;
    let sh = h.sin();
    delta
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(c, s), (k, &d)| {
            let sum = h * (2 * k + 1) as f64; // a + b
            (c + d * sum.cos() * sh, s + d * sum.sin() * sh)
        })
}

/// Whether a piecewise-constant variation leaves the propagator unchanged at
/// first order: both moments vanish to `1e-9·‖δf‖₁`.
pub fn variation_admissible(delta: &[f64], horizon: f64) -> Result<bool> {
    if delta.is_empty() {
        return Err(Error::InvalidArgument("empty variation".into()));
    }
    if !(horizon >= PI * (1.0 - 1e-12)) {
        return Err(Error::InvalidArgument(format!(
            "canonical horizon {horizon} is shorter than π"
        )));
    }
    let h = horizon / delta.len() as f64;
    let l1: f64 = delta.iter().map(|d| d.abs() * h).sum();
    let (c, s) = first_order_moments(delta, horizon);
    let tol = 1e-9 * l1;
    Ok(c.abs() <= tol && s.abs() <= tol)
}

/// `I(δf)` for a piecewise-constant `δf`, exact per segment.
///
/// With `C(t) = ∫₀ᵗ δf cos2s ds` and `S(t) = ∫₀ᵗ δf sin2s ds` the double
/// integral is `∫ δf(t)[sin2t·C(t) − cos2t·S(t)] dt`. Inside one segment of
/// value `d` the self term integrates to `d²/2·(h − sin(2h)/2)`.
pub fn i_functional(delta: &[f64], horizon: f64, v: f64) -> f64 {
    let h = horizon / delta.len() as f64;
    let sh = h.sin();
    let self_term = 0.5 * (h - 0.5 * (2.0 * h).sin());
    let (mut c, mut s, mut total) = (0.0, 0.0, 0.0);
    for (k, &d) in delta.iter().enumerate() {
        let sum = h * (2 * k + 1) as f64;
        let int_cos = sum.cos() * sh;
        let int_sin = sum.sin() * sh;
        total += d * (c * int_sin - s * int_cos) + d * d * self_term;
        c += d * int_cos;
        s += d * int_sin;
    }
    v * v * total
}

/// `I(δf)` for a smooth-on-segment profile, by composite Gauss–Legendre on a
/// uniform `segments`-grid (nested rule on each diagonal triangle).
pub fn i_functional_smooth<F: Fn(f64) -> f64>(
    profile: F,
    horizon: f64,
    segments: usize,
    v: f64,
) -> f64 {
    let h = horizon / segments as f64;
    let (mut c, mut s, mut total) = (0.0, 0.0, 0.0);
    for k in 0..segments {
        let a = h * k as f64;
        let b = a + h;
        let cross = gauss(a, b, |t| {
            profile(t) * ((2.0 * t).sin() * c - (2.0 * t).cos() * s)
        });
        let diagonal = gauss(a, b, |t1| {
            let inner = gauss(a, t1, |t2| profile(t2) * (2.0 * (t1 - t2)).sin());
            profile(t1) * inner
        });
        total += cross + diagonal;
        c += gauss(a, b, |t| profile(t) * (2.0 * t).cos());
        s += gauss(a, b, |t| profile(t) * (2.0 * t).sin());
    }
    v * v * total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn midpoint_samples(var: ExceptionalVariation, horizon: f64, n: usize) -> Vec<f64> {
        let h = horizon / n as f64;
        (0..n).map(|k| var.eval(h * (k as f64 + 0.5))).collect()
    }

    #[test]
    fn paper_variations_are_admissible() {
        for n in [64, 256, 999] {
            for var in ExceptionalVariation::BOTH {
                let d = midpoint_samples(var, PI, n);
                assert!(variation_admissible(&d, PI).unwrap(), "{var:?} n={n}");
            }
        }
    }

    #[test]
    fn short_window_is_not_admissible() {
        let n = 300;
        let d: Vec<f64> = (0..n).map(|k| if k < n / 3 { 1.0 } else { 0.0 }).collect();
        let (c, _) = first_order_moments(&d, PI);
        assert!((c - 3f64.sqrt() / 4.0).abs() < 1e-14);
        assert!(!variation_admissible(&d, PI).unwrap());
    }

    #[test]
    fn admissibility_requires_long_horizon() {
        assert!(variation_admissible(&[1.0; 8], 3.0).is_err());
        assert!(variation_admissible(&[], PI).is_err());
        // zero variation is trivially admissible
        assert!(variation_admissible(&[0.0; 8], PI).unwrap());
    }

    #[test]
    fn window_is_exact_for_piecewise_constant() {
        for n in [1, 7, 128] {
            let i = i_functional(&vec![1.0; n], PI, 1.0);
            assert!((i - PI / 2.0).abs() < 1e-13, "n={n}: {i}");
        }
    }

    #[test]
    fn zero_variation_gives_zero() {
        assert_eq!(i_functional(&[0.0; 16], PI, 2.0), 0.0);
        assert_eq!(i_functional_smooth(|_| 0.0, PI, 16, 2.0), 0.0);
    }

    #[test]
    fn smooth_rule_hits_both_constants() {
        let v = 0.7;
        for var in ExceptionalVariation::BOTH {
            let i = i_functional_smooth(|t| var.eval(t), PI, 64, v);
            assert!((i - var.exact_i_over_v2() * v * v).abs() < 1e-12);
        }
    }

    #[test]
    fn variation_outside_window_does_not_contribute() {
        // on a horizon of 2π the variation vanishes past π
        let i = i_functional_smooth(
            |t| ExceptionalVariation::CosineWindow.eval(t),
            2.0 * PI,
            128,
            1.0,
        );
        assert!((i + PI / 12.0).abs() < 1e-12);
    }
}

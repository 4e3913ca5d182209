use serde::{Deserialize, Serialize};

use crate::dynamics::{final_unitary, ControlGrid, HamiltonianPair};
use crate::error::{Error, Result};
use crate::mat2::CMat2;
use crate::objectives::{evaluate, Objective};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    #[default]
    Ascend,
    Descend,
}

impl Direction {
    /// Distance from `u` to the extreme this direction is heading for.
    pub fn gap(&self, obj: &Objective, u: &CMat2) -> f64 {
        match self {
            Direction::Ascend => obj.gap_to_max(u),
            Direction::Descend => obj.gap_to_min(u),
        }
    }

    fn sign(&self) -> f64 {
        match self {
            Direction::Ascend => -1.0,
            Direction::Descend => 1.0,
        }
    }
}

/// Steepest ascent (or descent) with Armijo backtracking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub max_iters: usize,
    /// Stop once the gradient ∞-norm is at or below this.
    pub grad_tol: f64,
    pub armijo_c: f64,
    pub backtrack_factor: f64,
    pub initial_step: f64,
    pub direction: Direction,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_iters: 5000,
            grad_tol: 1e-8,
            armijo_c: 1e-4,
            backtrack_factor: 0.5,
            initial_step: 1.0,
            direction: Direction::Ascend,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(format!("optimizer: {what}")));
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return bad("armijo_c must lie in (0, 1)");
        }
        if !(self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0) {
            return bad("backtrack_factor must lie in (0, 1)");
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return bad("initial_step must be positive");
        }
        if !(self.grad_tol > 0.0) {
            return bad("grad_tol must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Converged,
    IterLimit,
    StepUnderflow,
}

impl RunStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunStatus::Converged => "converged",
            RunStatus::IterLimit => "iter_limit",
            RunStatus::StepUnderflow => "step_underflow",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub initial: ControlGrid,
    pub final_control: ControlGrid,
    /// Objective value after each accepted step, starting with the initial one.
    pub trace: Vec<f64>,
    pub grad_norm: f64,
    pub status: RunStatus,
    pub iterations: usize,
}

impl RunRecord {
    pub fn final_value(&self) -> f64 {
        *self.trace.last().expect("trace holds the initial value")
    }
}

fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Gradient flow on the dynamic landscape.
///
/// The line search works on the distance to the targeted kinematic extreme,
/// which is evaluated from small overlaps and stays resolvable down to
/// gradients far below `1e-8`; the reported trace is `F_max − gap` (or
/// `F_min + gap`), hence exactly monotone.
pub fn ascend(
    obj: &Objective,
    pair: &HamiltonianPair,
    init: &ControlGrid,
    config: &OptimizerConfig,
) -> Result<RunRecord> {
    config.validate()?;
    let dir = config.direction;
    let range = obj.kinematic_range();
    let report = |gap: f64| match dir {
        Direction::Ascend => range.max - gap,
        Direction::Descend => range.min + gap,
    };
    let min_step = config.initial_step * 1e-16;
    let max_step = config.initial_step * 1e3;

    let mut x = init.values().to_vec();
    let ev = evaluate(obj, pair, init);
    let mut gap = dir.gap(obj, &ev.unitary);
    // gradient of the gap
    let mut g: Vec<f64> = ev.gradient.iter().map(|v| dir.sign() * v).collect();
    let mut trace = vec![report(gap)];
    let mut step = config.initial_step;
    let mut iterations = 0;

    let status = loop {
        if inf_norm(&g) <= config.grad_tol {
            break RunStatus::Converged;
        }
        if iterations >= config.max_iters {
            break RunStatus::IterLimit;
        }
        let g2: f64 = g.iter().map(|v| v * v).sum();
        let mut alpha = step;
        let accepted = loop {
            if alpha < min_step {
                break None;
            }
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - alpha * gi).collect();
            let grid = init.with_values(trial)?;
            let trial_gap = dir.gap(obj, &final_unitary(pair, &grid));
            if trial_gap <= gap - config.armijo_c * alpha * g2 {
                break Some((grid, trial_gap));
            }
            alpha *= config.backtrack_factor;
        };
        let Some((grid, _)) = accepted else {
            break RunStatus::StepUnderflow;
        };
        let ev = evaluate(obj, pair, &grid);
        gap = dir.gap(obj, &ev.unitary);
        g = ev.gradient.iter().map(|v| dir.sign() * v).collect();
        x = grid.values().to_vec();
        trace.push(report(gap));
        iterations += 1;
        step = (alpha / config.backtrack_factor).min(max_step);
    };

    Ok(RunRecord {
        initial: init.clone(),
        final_control: init.with_values(x)?,
        trace,
        grad_norm: inf_norm(&g),
        status,
        iterations,
    })
}

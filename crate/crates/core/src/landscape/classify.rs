use serde::{Deserialize, Serialize};

use crate::dynamics::{e_matrix, propagate, ControlGrid, HamiltonianPair};
use crate::error::Result;
use crate::landscape::optimize::Direction;
use crate::mat2::{complex_rank, CMat2, RANK_TOL};
use crate::objectives::{evaluate, hessian, Hessian, Objective, HESSIAN_MAX_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Gradient ∞-norm below which a control counts as critical.
    pub grad_tol: f64,
    /// Distance to a kinematic extreme that still counts as reaching it.
    pub value_tol: f64,
    /// Hessian eigenvalues within `±spec_tol` are indeterminate.
    pub spec_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            grad_tol: 1e-8,
            value_tol: 1e-4,
            spec_tol: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    GlobalMax,
    GlobalMin,
    Saddle,
    TrapCandidate,
    SecondOrderTrapCandidate,
    NonCritical,
}

impl PointKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointKind::GlobalMax => "global_max",
            PointKind::GlobalMin => "global_min",
            PointKind::Saddle => "saddle",
            PointKind::TrapCandidate => "trap_candidate",
            PointKind::SecondOrderTrapCandidate => "second_order_trap_candidate",
            PointKind::NonCritical => "non_critical",
        }
    }

    pub fn is_trap_candidate(&self) -> bool {
        matches!(
            self,
            PointKind::TrapCandidate | PointKind::SecondOrderTrapCandidate
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedPoint {
    pub kind: PointKind,
    pub value: f64,
    pub grad_norm: f64,
    pub hess_min: Option<f64>,
    pub hess_max: Option<f64>,
    pub gap_to_max: f64,
    pub gap_to_min: f64,
}

/// Classify a control against the kinematic extremes of `obj`.
///
/// `sense` fixes what a trap is: a non-global local maximum when ascending,
/// a non-global local minimum when descending.
pub fn classify(
    obj: &Objective,
    pair: &HamiltonianPair,
    control: &ControlGrid,
    tol: &Tolerances,
    sense: Direction,
) -> Result<ClassifiedPoint> {
    classify_with_hessian(obj, pair, control, tol, sense).map(|(p, _)| p)
}

/// [`classify`], also handing back the Hessian when one was computed.
pub fn classify_with_hessian(
    obj: &Objective,
    pair: &HamiltonianPair,
    control: &ControlGrid,
    tol: &Tolerances,
    sense: Direction,
) -> Result<(ClassifiedPoint, Option<Hessian>)> {
    let ev = evaluate(obj, pair, control);
    let grad_norm = ev.gradient.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let gap_to_max = obj.gap_to_max(&ev.unitary);
    let gap_to_min = obj.gap_to_min(&ev.unitary);
    let hess = if control.segments() <= HESSIAN_MAX_DIM {
        Some(hessian(obj, pair, control)?)
    } else {
        None
    };
    let (hess_min, hess_max) = match &hess {
        Some(h) => (Some(h.min_eigenvalue()), Some(h.max_eigenvalue())),
        None => (None, None),
    };

    let kind = if grad_norm > tol.grad_tol {
        PointKind::NonCritical
    } else if gap_to_max <= tol.value_tol {
        PointKind::GlobalMax
    } else if gap_to_min <= tol.value_tol {
        PointKind::GlobalMin
    } else {
        // mirror the spectrum when descending so that "up" means "improving"
        let (improving, worsening) = match sense {
            Direction::Ascend => (hess_max, hess_min.map(|m| -m)),
            Direction::Descend => (hess_min.map(|m| -m), hess_max),
        };
        match (improving, worsening) {
            (Some(up), _) if up > tol.spec_tol => PointKind::Saddle,
            (Some(up), _) if up < -tol.spec_tol => PointKind::TrapCandidate,
            (Some(_), _) => PointKind::SecondOrderTrapCandidate,
            // no curvature information: cannot rule a trap out
            (None, _) => PointKind::SecondOrderTrapCandidate,
        }
    };

    Ok((
        ClassifiedPoint {
            kind,
            value: ev.value,
            grad_norm,
            hess_min,
            hess_max,
            gap_to_max,
            gap_to_min,
        },
        hess,
    ))
}

/// Rank over ℂ of `{I, V_t, U_t†[H0,V]U_t, U_t†E(f)U_t}` at every node
/// `t_k`, where `f` is the amplitude of the segment starting at `t_k` (the
/// last segment for the final node).
pub fn lemma1_rank_profile(pair: &HamiltonianPair, control: &ControlGrid) -> Vec<usize> {
    let traj = propagate(pair, control);
    let comm = pair.commutator();
    let n = control.segments();
    traj.nodes
        .iter()
        .enumerate()
        .map(|(k, u)| {
            let f = control.values()[k.min(n - 1)];
            let conj = |a: &CMat2| u.dagger() * *a * *u;
            let family = [
                CMat2::identity(),
                conj(pair.v()),
                conj(&comm),
                conj(&e_matrix(pair, f)),
            ];
            complex_rank(&family, RANK_TOL).expect("family of four")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{exceptional_control, family_rank, final_unitary};
    use crate::objectives::{gates, DensityMatrix, QuantumState};
    use std::f64::consts::PI;

    fn sz_sx() -> HamiltonianPair {
        HamiltonianPair::from_pauli([0., 0., 0., 1.], [0., 1., 0., 0.]).unwrap()
    }

    #[test]
    fn constructed_maximum_is_global_max() {
        let pair = sz_sx();
        let control = ControlGrid::new(2.0, vec![0.3, 0.9, -0.4, 0.1]).unwrap();
        let obj = Objective::gate(final_unitary(&pair, &control)).unwrap();
        let p = classify(
            &obj,
            &pair,
            &control,
            &Tolerances::default(),
            Direction::Ascend,
        )
        .unwrap();
        assert_eq!(p.kind, PointKind::GlobalMax);
    }

    #[test]
    fn exceptional_control_is_a_saddle_for_phase_gate() {
        let pair = sz_sx();
        let control = ControlGrid::constant(PI, 32, 0.0).unwrap();
        let obj = Objective::gate(gates::phase(PI / 2.0)).unwrap();
        let p = classify(
            &obj,
            &pair,
            &control,
            &Tolerances::default(),
            Direction::Ascend,
        )
        .unwrap();
        assert!(p.grad_norm < 1e-12);
        assert!((p.value - 0.5).abs() < 1e-12);
        assert_eq!(p.kind, PointKind::Saddle);
        assert!(p.hess_min.unwrap() < -1e-3 && p.hess_max.unwrap() > 1e-3);
    }

    #[test]
    fn large_gradient_is_non_critical() {
        let pair = sz_sx();
        let control = ControlGrid::constant(PI / 2.0, 4, 0.3).unwrap();
        let obj = Objective::transition(QuantumState::zero(), QuantumState::one());
        let p = classify(
            &obj,
            &pair,
            &control,
            &Tolerances::default(),
            Direction::Ascend,
        )
        .unwrap();
        assert!(p.grad_norm > 1e-2);
        assert_eq!(p.kind, PointKind::NonCritical);
    }

    #[test]
    fn observable_minimum_when_descending() {
        // ρ0 = diag(0.7, 0.3), O = |1⟩⟨1|: the identity propagator already
        // sits at the minimum ω0 = 0.3.
        let pair = sz_sx();
        let rho = DensityMatrix::from_bloch([0.0, 0.0, 0.4]).unwrap();
        let obj = Objective::observable(rho, QuantumState::one().projector()).unwrap();
        let control = ControlGrid::constant(PI, 8, 0.0).unwrap();
        let p = classify(
            &obj,
            &pair,
            &control,
            &Tolerances::default(),
            Direction::Descend,
        )
        .unwrap();
        assert_eq!(p.kind, PointKind::GlobalMin);
        assert!((p.value - 0.3).abs() < 1e-12);
    }

    #[test]
    fn rank_profile_at_and_off_f0() {
        let pair = HamiltonianPair::from_pauli([0., 1., 0., 1.], [0., 1., 0., 0.]).unwrap();
        let f0 = exceptional_control(&pair).unwrap();
        let at = ControlGrid::constant(2.0, 16, f0).unwrap();
        assert!(lemma1_rank_profile(&pair, &at).iter().all(|&r| r == 3));
        let mut values = vec![f0; 16];
        values[5] = f0 + 0.5;
        let off = ControlGrid::new(2.0, values).unwrap();
        let ranks = lemma1_rank_profile(&pair, &off);
        assert_eq!(ranks.len(), 17);
        for (k, r) in ranks.iter().enumerate() {
            assert_eq!(*r, if k == 5 { 4 } else { 3 }, "node {k}");
        }
        // conjugation does not change the rank
        assert_eq!(family_rank(&pair, f0 + 0.5), 4);
    }
}

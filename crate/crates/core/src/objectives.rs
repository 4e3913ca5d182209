//! Terminal-time objectives, their first variations and Hessians.
//!
//! Three families are supported: state transfer `|⟨f|U_T|i⟩|²`, observable
//! expectation `Tr[U_T ρ0 U_T† O]` and gate fidelity `¼|Tr(W†U_T)|²`. All are
//! invariant under a global phase of `U_T`.
//!
//! First variations are expressed through an L-functional: the real-linear
//! map `A ↦ d/dε F(U_T·e^{−iεA})|₀`, which is always of the form
//! `Re Tr(X·A)` for an objective-dependent kernel `X`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{propagate, ControlGrid, HamiltonianPair};
use crate::error::{Error, Result};
use crate::mat2::{commutator, dexp_hermitian, CMat2, HermitianEigen, PREDICATE_TOL};

/// Largest control dimension for which [`hessian`] will run.
pub const HESSIAN_MAX_DIM: usize = 512;

/// Hessian eigenvalues closer to zero than this are "indeterminate".
pub const DEFAULT_SPEC_TOL: f64 = 1e-5;

/// A normalized qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[C64; 2]", into = "[C64; 2]")]
pub struct QuantumState([C64; 2]);

impl QuantumState {
    pub fn new(a: C64, b: C64) -> Result<Self> {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if (n - 1.0).abs() > PREDICATE_TOL {
            return Err(Error::InvalidState(format!("norm {n} is not 1")));
        }
        Ok(QuantumState([a, b]))
    }

    /// Rescale a nonzero vector to unit norm.
    pub fn normalized(a: C64, b: C64) -> Result<Self> {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(QuantumState([a / n, b / n]))
    }

    pub fn zero() -> Self {
        QuantumState([C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
    }

    pub fn one() -> Self {
        QuantumState([C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        self.0
    }

    /// A unit vector orthogonal to this one.
    pub fn orthogonal(&self) -> Self {
        QuantumState([-self.0[1].conj(), self.0[0].conj()])
    }

    pub fn projector(&self) -> CMat2 {
        CMat2::outer(self.0, self.0)
    }
}

impl TryFrom<[C64; 2]> for QuantumState {
    type Error = Error;
    fn try_from(a: [C64; 2]) -> Result<Self> {
        QuantumState::new(a[0], a[1])
    }
}

impl From<QuantumState> for [C64; 2] {
    fn from(s: QuantumState) -> Self {
        s.0
    }
}

/// A qubit density matrix with eigenvalues `ω0 ≤ ω1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    rho: CMat2,
    eigen: HermitianEigen,
}

impl DensityMatrix {
    pub fn new(rho: CMat2) -> Result<Self> {
        if !rho.is_hermitian(PREDICATE_TOL) {
            return Err(Error::NotHermitian(format!("density matrix {rho:?}")));
        }
        let tr = rho.trace().re;
        if (tr - 1.0).abs() > PREDICATE_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix has trace {tr}"
            )));
        }
        let rho = rho.hermitian_part();
        let eigen = HermitianEigen::new(&rho);
        if eigen.values[0] < -PREDICATE_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix has negative eigenvalue {}",
                eigen.values[0]
            )));
        }
        Ok(DensityMatrix { rho, eigen })
    }

    /// `I/2 + r·σ/2` from a Bloch vector.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        Self::new(CMat2::from_real_pauli(
            0.5,
            0.5 * r[0],
            0.5 * r[1],
            0.5 * r[2],
        ))
    }

    pub fn pure(state: &QuantumState) -> Self {
        Self::new(state.projector()).expect("pure states are valid densities")
    }

    /// `ω0|b0⟩⟨b0| + ω1|b1⟩⟨b1|` where `b0, b1` are the columns of `basis`.
    pub fn with_spectrum(omega: [f64; 2], basis: &CMat2) -> Result<Self> {
        if !basis.is_unitary(1e-10) {
            return Err(Error::NotUnitary(format!("{basis:?}")));
        }
        let b0 = [basis.0[0][0], basis.0[1][0]];
        let b1 = [basis.0[0][1], basis.0[1][1]];
        Self::new(
            CMat2::outer(b0, b0).scale_real(omega[0]) + CMat2::outer(b1, b1).scale_real(omega[1]),
        )
    }

    pub fn matrix(&self) -> &CMat2 {
        &self.rho
    }

    /// `(ω0, ω1)`, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        self.eigen.values
    }
}

/// Either `Tr[ρO] = offset + scale·Tr[ρP]` for a rank-1 projector `P` and
/// `scale > 0`, or `O = constant·I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObservableReduction {
    Projector {
        projector: CMat2,
        state: QuantumState,
        offset: f64,
        scale: f64,
    },
    Degenerate {
        constant: f64,
    },
}

/// Split a Hermitian observable into `λ1·I + (λ2 − λ1)·P2`, with `P2` the
/// projector onto the top eigenvector.
pub fn reduce_observable(o: &CMat2) -> Result<ObservableReduction> {
    if !o.is_hermitian(PREDICATE_TOL * o.max_abs().max(1.0)) {
        return Err(Error::NotHermitian(format!("observable {o:?}")));
    }
    let eig = HermitianEigen::new(o);
    let [low, high] = eig.values;
    if eig.gap() <= PREDICATE_TOL * low.abs().max(high.abs()).max(1.0) {
        return Ok(ObservableReduction::Degenerate {
            constant: 0.5 * (low + high),
        });
    }
    let state = QuantumState(eig.vectors[1]);
    Ok(ObservableReduction::Projector {
        projector: state.projector(),
        state,
        offset: low,
        scale: high - low,
    })
}

/// Attainable objective range over all unitaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicRange {
    pub min: f64,
    pub max: f64,
    pub degenerate: bool,
}

impl KinematicRange {
    fn new(min: f64, max: f64) -> Self {
        KinematicRange {
            min,
            max,
            degenerate: min == max,
        }
    }

    pub fn contains(&self, value: f64, tol: f64) -> bool {
        value >= self.min - tol && value <= self.max + tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable {
    rho0: DensityMatrix,
    observable: CMat2,
    reduction: ObservableReduction,
}

impl Observable {
    pub fn rho0(&self) -> &DensityMatrix {
        &self.rho0
    }

    pub fn observable(&self) -> &CMat2 {
        &self.observable
    }

    pub fn reduction(&self) -> &ObservableReduction {
        &self.reduction
    }

    /// `(1 − F/F_max)`-type gaps computed from small overlaps, so they keep
    /// full relative precision near the extremes.
    fn gaps(&self, u: &CMat2) -> (f64, f64) {
        match self.reduction {
            ObservableReduction::Degenerate { .. } => (0.0, 0.0),
            ObservableReduction::Projector { state, scale, .. } => {
                let [w0, w1] = self.rho0.eigen.values;
                let [e0, e1] = self.rho0.eigen.vectors;
                let p = state.amplitudes();
                let weight = scale * (w1 - w0);
                let to_max = u.sandwich(p, e0).norm_sqr() * weight;
                let to_min = u.sandwich(p, e1).norm_sqr() * weight;
                (to_max, to_min)
            }
        }
    }
}

/// A terminal-time, phase-invariant objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    Transition {
        initial: QuantumState,
        target: QuantumState,
    },
    Observable(Observable),
    Gate {
        target: CMat2,
    },
}

pub mod gates {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    pub fn hadamard() -> CMat2 {
        (CMat2::pauli_x() + CMat2::pauli_z()).scale_real(FRAC_1_SQRT_2)
    }

    pub fn not() -> CMat2 {
        CMat2::pauli_x()
    }

    /// `diag(1, e^{iφ})`.
    pub fn phase(phi: f64) -> CMat2 {
        CMat2::diag(C64::new(1.0, 0.0), C64::from_polar(1.0, phi))
    }
}

impl Objective {
    pub fn transition(initial: QuantumState, target: QuantumState) -> Self {
        Objective::Transition { initial, target }
    }

    pub fn observable(rho0: DensityMatrix, observable: CMat2) -> Result<Self> {
        let reduction = reduce_observable(&observable)?;
        Ok(Objective::Observable(Observable {
            rho0,
            observable: observable.hermitian_part(),
            reduction,
        }))
    }

    pub fn gate(target: CMat2) -> Result<Self> {
        if !target.is_unitary(PREDICATE_TOL) {
            return Err(Error::NotUnitary(format!("gate {target:?}")));
        }
        Ok(Objective::Gate { target })
    }

    pub fn family(&self) -> &'static str {
        match self {
            Objective::Transition { .. } => "transition",
            Objective::Observable(_) => "observable",
            Objective::Gate { .. } => "gate",
        }
    }

    /// Objective value at the final propagator.
    pub fn value(&self, u: &CMat2) -> f64 {
        match self {
            Objective::Transition { initial, target } => u
                .sandwich(target.amplitudes(), initial.amplitudes())
                .norm_sqr(),
            Objective::Observable(obs) => {
                (*u * *obs.rho0.matrix() * u.dagger() * obs.observable)
                    .trace()
                    .re
            }
            Objective::Gate { target } => 0.25 * (target.dagger() * *u).trace().norm_sqr(),
        }
    }

    /// `F_max − F(U)`, accurate near the maximum.
    pub fn gap_to_max(&self, u: &CMat2) -> f64 {
        match self {
            Objective::Transition { initial, target } => u
                .sandwich(target.orthogonal().amplitudes(), initial.amplitudes())
                .norm_sqr(),
            Objective::Observable(obs) => obs.gaps(u).0,
            Objective::Gate { target } => {
                // for unitary Y: 1 − ¼|Tr Y|² = ¼ Σ_k |Tr(σ_k Y)|²
                let [_, x, y, z] = (target.dagger() * *u).pauli().as_array();
                x.norm_sqr() + y.norm_sqr() + z.norm_sqr()
            }
        }
    }

    /// `F(U) − F_min`, accurate near the minimum.
    pub fn gap_to_min(&self, u: &CMat2) -> f64 {
        match self {
            Objective::Transition { .. } | Objective::Gate { .. } => self.value(u),
            Objective::Observable(obs) => obs.gaps(u).1,
        }
    }

    pub fn kinematic_range(&self) -> KinematicRange {
        match self {
            Objective::Transition { .. } | Objective::Gate { .. } => KinematicRange::new(0.0, 1.0),
            Objective::Observable(obs) => match obs.reduction {
                ObservableReduction::Degenerate { constant } => {
                    KinematicRange::new(constant, constant)
                }
                ObservableReduction::Projector { offset, scale, .. } => {
                    let [w0, w1] = obs.rho0.eigenvalues();
                    if w0 == w1 {
                        KinematicRange::new(offset + scale * w0, offset + scale * w0)
                    } else {
                        KinematicRange::new(offset + scale * w0, offset + scale * w1)
                    }
                }
            },
        }
    }

    /// Kernel `X` with `L(A) = Re Tr(X·A)` at the final propagator `u`.
    pub fn gradient_kernel(&self, u: &CMat2) -> CMat2 {
        let neg_i = C64::new(0.0, -1.0);
        match self {
            Objective::Transition { initial, target } => {
                let o_t = u.dagger() * target.projector() * *u;
                commutator(&initial.projector(), &o_t).scale(neg_i)
            }
            Objective::Observable(obs) => {
                let o_t = u.dagger() * obs.observable * *u;
                commutator(obs.rho0.matrix(), &o_t).scale(neg_i)
            }
            Objective::Gate { target } => {
                let y = target.dagger() * *u;
                y.scale(C64::new(0.0, -0.5) * y.trace().conj())
            }
        }
    }
}

/// `L(A) = d/dε F(U·e^{−iεA})|₀`, extended real-linearly to all of `M₂`.
pub fn l_functional(obj: &Objective, u: &CMat2, a: &CMat2) -> f64 {
    let x = obj.gradient_kernel(u);
    (x * *a).trace().re
}

/// Objective value, final unitary and exact gradient of the discretized
/// objective with respect to the segment amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub unitary: CMat2,
    pub value: f64,
    pub gradient: Vec<f64>,
}

/// Per-segment generators `A_k` with `∂U_T/∂f_k = U_T·(−i A_k)`.
///
/// Uses the exact derivative of each segment exponential, so the result is
/// the gradient of the discretized objective rather than a midpoint sample
/// of the continuous kernel `L(V_t)`.
pub fn segment_generators(pair: &HamiltonianPair, control: &ControlGrid) -> (CMat2, Vec<CMat2>) {
    let traj = propagate(pair, control);
    let dt = control.step();
    let i = C64::new(0.0, 1.0);
    let gens = control
        .values()
        .iter()
        .enumerate()
        .map(|(k, &f)| {
            let d = dexp_hermitian(pair.hamiltonian_pauli(f), pair.v(), dt);
            let m = traj.nodes[k + 1].dagger() * d * traj.nodes[k];
            m.scale(i).hermitian_part()
        })
        .collect();
    (*traj.final_unitary(), gens)
}

pub fn evaluate(obj: &Objective, pair: &HamiltonianPair, control: &ControlGrid) -> Evaluation {
    let (u, gens) = segment_generators(pair, control);
    let x = obj.gradient_kernel(&u);
    let gradient = gens.iter().map(|a| (x * *a).trace().re).collect();
    Evaluation {
        unitary: u,
        value: obj.value(&u),
        gradient,
    }
}

pub fn gradient(obj: &Objective, pair: &HamiltonianPair, control: &ControlGrid) -> Vec<f64> {
    evaluate(obj, pair, control).gradient
}

/// Symmetrized finite-difference Hessian with its spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Hessian {
    pub dim: usize,
    /// Row-major, symmetrized.
    pub matrix: Vec<f64>,
    /// `max |H − Hᵀ|` before symmetrization.
    pub asymmetry: f64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` (unit norm) belongs to `eigenvalues[j]`, stored row-major.
    eigenvectors: Vec<f64>,
}

impl Hessian {
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.matrix[r * self.dim + c]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty Hessian")
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|r| self.eigenvectors[r * self.dim + j])
            .collect()
    }

    /// `dᵀ H d`.
    pub fn quadratic_form(&self, d: &[f64]) -> f64 {
        (0..self.dim)
            .map(|r| d[r] * (0..self.dim).map(|c| self.get(r, c) * d[c]).sum::<f64>())
            .sum()
    }
}

/// Central differences of the analytic gradient with step
/// `1e-5·max(1, ‖f‖∞)`, then symmetrized.
pub fn hessian(obj: &Objective, pair: &HamiltonianPair, control: &ControlGrid) -> Result<Hessian> {
    let n = control.segments();
    if n > HESSIAN_MAX_DIM {
        return Err(Error::HessianTooLarge(n));
    }
    let h = 1e-5 * control.max_abs().max(1.0);
    let mut raw = vec![0.0; n * n];
    let mut shifted = control.values().to_vec();
    for j in 0..n {
        let base = shifted[j];
        shifted[j] = base + h;
        let plus = gradient(obj, pair, &control.with_values(shifted.clone())?);
        shifted[j] = base - h;
        let minus = gradient(obj, pair, &control.with_values(shifted.clone())?);
        shifted[j] = base;
        for r in 0..n {
            raw[r * n + j] = (plus[r] - minus[r]) / (2.0 * h);
        }
    }
    let mut asymmetry = 0.0f64;
    let mut sym = DMatrix::<f64>::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            asymmetry = asymmetry.max((raw[r * n + c] - raw[c * n + r]).abs());
            sym[(r, c)] = 0.5 * (raw[r * n + c] + raw[c * n + r]);
        }
    }
    let eig = SymmetricEigen::new(sym.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let mut eigenvectors = vec![0.0; n * n];
    for (jj, &j) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[r * n + jj] = eig.eigenvectors[(r, j)];
        }
    }
    let matrix = (0..n * n).map(|k| sym[(k / n, k % n)]).collect();
    Ok(Hessian {
        dim: n,
        matrix,
        asymmetry,
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::final_unitary;
    use crate::mat2::expm_unitary;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn value_examples() {
        let w = gates::hadamard();
        let gate = Objective::gate(w).unwrap();
        for phi in [0.0, 0.4, -2.0, PI] {
            let u = w.scale(C64::from_polar(1.0, phi));
            assert!((gate.value(&u) - 1.0).abs() < 1e-15);
            assert!(gate.gap_to_max(&u) < 1e-30);
        }
        let ground = DensityMatrix::pure(&QuantumState::zero());
        let obs = Objective::observable(ground, QuantumState::zero().projector()).unwrap();
        assert_eq!(obs.value(&CMat2::identity()), 1.0);
        let tr = Objective::transition(QuantumState::zero(), QuantumState::one());
        assert_eq!(tr.value(&CMat2::identity()), 0.0);
    }

    #[test]
    fn state_validation() {
        assert!(QuantumState::new(c(1., 0.), c(1., 0.)).is_err());
        assert!(QuantumState::normalized(c(0., 0.), c(0., 0.)).is_err());
        let s = QuantumState::normalized(c(1., 0.), c(0., 1.)).unwrap();
        assert!(s.amplitudes()[0].re - 0.5f64.sqrt() < 1e-16);
        assert!(DensityMatrix::new(CMat2::identity()).is_err());
        assert!(DensityMatrix::from_bloch([0.0, 0.0, 1.5]).is_err());
        assert!(Objective::gate(CMat2::identity().scale_real(2.0)).is_err());
    }

    #[test]
    fn reduce_observable_examples() {
        match reduce_observable(&CMat2::pauli_z()).unwrap() {
            ObservableReduction::Projector {
                projector,
                offset,
                scale,
                ..
            } => {
                assert!(projector.max_abs_diff(&QuantumState::zero().projector()) < 1e-15);
                assert_eq!((offset, scale), (-1.0, 2.0));
            }
            other => panic!("unexpected {other:?}"),
        }
        let p1 = QuantumState::one().projector();
        match reduce_observable(&p1).unwrap() {
            ObservableReduction::Projector {
                projector,
                offset,
                scale,
                ..
            } => {
                assert!(projector.max_abs_diff(&p1) < 1e-15);
                assert_eq!((offset, scale), (0.0, 1.0));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            reduce_observable(&CMat2::identity().scale_real(3.0)).unwrap(),
            ObservableReduction::Degenerate { constant: 3.0 }
        );
    }

    #[test]
    fn kinematic_range_examples() {
        let rho = DensityMatrix::new(CMat2::diag(c(0.3, 0.), c(0.7, 0.))).unwrap();
        let obj = Objective::observable(rho, QuantumState::zero().projector()).unwrap();
        let r = obj.kinematic_range();
        assert!((r.min - 0.3).abs() < 1e-15 && (r.max - 0.7).abs() < 1e-15);
        assert!(!r.degenerate);
        let mixed = DensityMatrix::new(CMat2::identity().scale_real(0.5)).unwrap();
        let r = Objective::observable(mixed, QuantumState::zero().projector())
            .unwrap()
            .kinematic_range();
        assert!(r.degenerate && r.min == 0.5 && r.max == 0.5);
        let r = Objective::gate(gates::phase(0.3))
            .unwrap()
            .kinematic_range();
        assert_eq!((r.min, r.max, r.degenerate), (0.0, 1.0, false));
    }

    #[test]
    fn l_functional_vanishes_on_identity_and_commuting_case() {
        let ground = QuantumState::zero();
        let obj = Objective::observable(DensityMatrix::pure(&ground), ground.projector()).unwrap();
        let u = CMat2::diag(C64::from_polar(1.0, 0.3), C64::from_polar(1.0, -1.1));
        for a in [
            CMat2::pauli_x(),
            CMat2::pauli_y(),
            CMat2::pauli_z(),
            CMat2::identity(),
        ] {
            assert_eq!(l_functional(&obj, &u, &a), 0.0);
        }
        let gate = Objective::gate(gates::hadamard()).unwrap();
        let u = expm_unitary(&CMat2::from_real_pauli(0.0, 0.3, 0.2, -0.9), 1.3).unwrap();
        assert!(l_functional(&gate, &u, &CMat2::identity()).abs() < 1e-16);
    }

    #[test]
    fn gate_l_functional_matches_directional_derivative() {
        let gate = Objective::gate(gates::hadamard()).unwrap();
        let u = expm_unitary(&CMat2::from_real_pauli(0.1, 0.3, 0.2, -0.9), 1.3).unwrap();
        let a = CMat2::from_real_pauli(0.0, 0.4, -0.7, 0.2);
        let eps = 1e-6;
        let fd = (gate.value(&(u * expm_unitary(&a, eps).unwrap()))
            - gate.value(&(u * expm_unitary(&a, -eps).unwrap())))
            / (2.0 * eps);
        let l = l_functional(&gate, &u, &a);
        assert!((fd - l).abs() < 1e-9, "fd {fd} vs L {l}");
    }

    #[test]
    fn gradient_vanishes_at_constructed_maximum() {
        let pair = HamiltonianPair::from_pauli([0.0, 0.0, 0.0, 1.0], [0.0, 1.0, 0.0, 0.0]).unwrap();
        let control = ControlGrid::new(1.7, vec![0.3, -0.8, 1.2, 0.1, 0.5]).unwrap();
        let w = final_unitary(&pair, &control);
        let obj = Objective::gate(w).unwrap();
        let g = gradient(&obj, &pair, &control);
        assert!(g.iter().all(|x| x.abs() < 1e-10));
        let h = hessian(&obj, &pair, &control).unwrap();
        assert!(h.max_eigenvalue() <= 1e-6);
        assert!(h.asymmetry < 1e-8);
    }

    #[test]
    fn gaps_agree_with_values() {
        let u = expm_unitary(&CMat2::from_real_pauli(0.2, 0.5, -0.4, 0.9), 0.77).unwrap();
        let rho = DensityMatrix::from_bloch([0.1, -0.3, 0.2]).unwrap();
        let objs = [
            Objective::gate(gates::hadamard()).unwrap(),
            Objective::transition(QuantumState::zero(), QuantumState::one()),
            Objective::observable(rho, CMat2::from_real_pauli(0.4, 1.0, 0.2, -0.5)).unwrap(),
        ];
        for obj in objs {
            let r = obj.kinematic_range();
            let f = obj.value(&u);
            assert!(
                (r.max - f - obj.gap_to_max(&u)).abs() < 1e-14,
                "{}",
                obj.family()
            );
            assert!(
                (f - r.min - obj.gap_to_min(&u)).abs() < 1e-14,
                "{}",
                obj.family()
            );
        }
    }

    #[test]
    fn hessian_cost_guard() {
        let pair = HamiltonianPair::from_pauli([0.0, 0.0, 0.0, 1.0], [0.0, 1.0, 0.0, 0.0]).unwrap();
        let control = ControlGrid::constant(1.0, HESSIAN_MAX_DIM + 1, 0.0).unwrap();
        let obj = Objective::gate(gates::not()).unwrap();
        assert_eq!(
            hessian(&obj, &pair, &control).unwrap_err(),
            Error::HessianTooLarge(HESSIAN_MAX_DIM + 1)
        );
    }
}

//! Piecewise-constant Schrödinger dynamics `i dU/dt = (H0 + f(t)V) U`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::{
    commutator, complex_rank, direction_eigenbasis, exp_hermitian, spectral_norm, CMat2,
    PREDICATE_TOL, RANK_TOL,
};

/// Pairs with a smaller commutator spectral norm are treated as commuting.
pub const COMMUTATOR_FLOOR: f64 = 1e-9;

/// Free Hamiltonian `H0` and control coupling `V` (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianPair {
    h0: CMat2,
    v: CMat2,
}

impl HamiltonianPair {
    pub fn new(h0: CMat2, v: CMat2) -> Result<Self> {
        for (name, m) in [("H0", &h0), ("V", &v)] {
            if !m.is_hermitian(PREDICATE_TOL * m.max_abs().max(1.0)) {
                return Err(Error::NotHermitian(format!("{name} = {m:?}")));
            }
        }
        let pair = HamiltonianPair {
            h0: h0.hermitian_part(),
            v: v.hermitian_part(),
        };
        let c = spectral_norm(&pair.commutator());
        if c <= COMMUTATOR_FLOOR {
            return Err(Error::CommutingPair(c));
        }
        Ok(pair)
    }

    /// Like [`HamiltonianPair::new`], additionally requiring `Tr V = 0`.
    pub fn new_traceless(h0: CMat2, v: CMat2) -> Result<Self> {
        let tr = v.trace().norm();
        if tr >= PREDICATE_TOL {
            return Err(Error::InvalidArgument(format!(
                "traceless interaction requested but |Tr V| = {tr:e}"
            )));
        }
        Self::new(h0, v)
    }

    /// Build from real Pauli coefficients `[c_i, c_x, c_y, c_z]`.
    pub fn from_pauli(h0: [f64; 4], v: [f64; 4]) -> Result<Self> {
        Self::new(
            CMat2::from_real_pauli(h0[0], h0[1], h0[2], h0[3]),
            CMat2::from_real_pauli(v[0], v[1], v[2], v[3]),
        )
    }

    pub fn h0(&self) -> &CMat2 {
        &self.h0
    }

    pub fn v(&self) -> &CMat2 {
        &self.v
    }

    pub fn commutator(&self) -> CMat2 {
        commutator(&self.h0, &self.v)
    }

    /// `H0 + f·V`.
    pub fn hamiltonian(&self, f: f64) -> CMat2 {
        self.h0 + self.v.scale_real(f)
    }

    pub(crate) fn hamiltonian_pauli(&self, f: f64) -> [f64; 4] {
        let h = self.h0.real_pauli();
        let v = self.v.real_pauli();
        [
            h[0] + f * v[0],
            h[1] + f * v[1],
            h[2] + f * v[2],
            h[3] + f * v[3],
        ]
    }

    pub fn is_traceless(&self) -> bool {
        self.v.is_traceless(PREDICATE_TOL)
    }
}

/// A control that is constant on each of `N` equal segments of `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlGrid {
    horizon: f64,
    values: Vec<f64>,
}

impl ControlGrid {
    pub fn new(horizon: f64, values: Vec<f64>) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "final time must be positive, got {horizon}"
            )));
        }
        if values.is_empty() {
            return Err(Error::InvalidGrid(
                "at least one segment is required".into(),
            ));
        }
        if let Some(k) = values.iter().position(|f| !f.is_finite()) {
            return Err(Error::InvalidGrid(format!("segment {k} is not finite")));
        }
        Ok(ControlGrid { horizon, values })
    }

    pub fn constant(horizon: f64, segments: usize, value: f64) -> Result<Self> {
        Self::new(horizon, vec![value; segments])
    }

    /// Same shape, new amplitudes.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                self.values.len(),
                values.len()
            )));
        }
        Self::new(self.horizon, values)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn segments(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        self.horizon / self.values.len() as f64
    }

    pub fn node_time(&self, k: usize) -> f64 {
        self.horizon * k as f64 / self.values.len() as f64
    }

    /// Split every segment into `factor` equal pieces; the control as a
    /// function of time is unchanged.
    pub fn refine(&self, factor: usize) -> Self {
        let factor = factor.max(1);
        let values = self
            .values
            .iter()
            .flat_map(|&f| std::iter::repeat_n(f, factor))
            .collect();
        ControlGrid {
            horizon: self.horizon,
            values,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, f| m.max(f.abs()))
    }
}

/// Propagators `U_{t_0} = I, …, U_{t_N} = U_T` at the grid nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub step: f64,
    pub nodes: Vec<CMat2>,
}

impl Trajectory {
    pub fn final_unitary(&self) -> &CMat2 {
        self.nodes.last().expect("trajectory has at least one node")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_time(&self, k: usize) -> f64 {
        self.step * k as f64
    }
}

/// Exact propagation: each segment contributes `exp(−i(H0 + f_k V)·T/N)`.
pub fn propagate(pair: &HamiltonianPair, control: &ControlGrid) -> Trajectory {
    let dt = control.step();
    let mut nodes = Vec::with_capacity(control.segments() + 1);
    let mut u = CMat2::identity();
    nodes.push(u);
    for &f in control.values() {
        u = exp_hermitian(pair.hamiltonian_pauli(f), dt) * u;
        nodes.push(u);
    }
    Trajectory { step: dt, nodes }
}

/// `U_T` only, without storing the intermediate nodes.
pub fn final_unitary(pair: &HamiltonianPair, control: &ControlGrid) -> CMat2 {
    let dt = control.step();
    control.values().iter().fold(CMat2::identity(), |u, &f| {
        exp_hermitian(pair.hamiltonian_pauli(f), dt) * u
    })
}

/// `V_{t_k} = U_{t_k}† V U_{t_k}`.
pub fn heisenberg_interaction(
    traj: &Trajectory,
    pair: &HamiltonianPair,
    k: usize,
) -> Result<CMat2> {
    let u = traj.nodes.get(k).ok_or(Error::IndexOutOfRange {
        index: k,
        max: traj.nodes.len().saturating_sub(1),
    })?;
    Ok(u.dagger() * *pair.v() * *u)
}

/// The constant control at which `{I, V, [H0,V], E(f)}` loses rank:
/// `f0 = (Tr V·Tr H0 − 2 Tr(H0 V)) / (2 Tr(V²) − (Tr V)²)`.
pub fn exceptional_control(pair: &HamiltonianPair) -> Result<f64> {
    let c = spectral_norm(&pair.commutator());
    if c <= COMMUTATOR_FLOOR {
        return Err(Error::CommutingPair(c));
    }
    let (h0, v) = (pair.h0(), pair.v());
    let tr_v = v.trace().re;
    let tr_h0 = h0.trace().re;
    let tr_h0v = (*h0 * *v).trace().re;
    let tr_vv = (*v * *v).trace().re;
    // denominator = 4|traceless part of V|², positive for a non-commuting pair
    Ok((tr_v * tr_h0 - 2.0 * tr_h0v) / (2.0 * tr_vv - tr_v * tr_v))
}

/// `E(f) = [H0,[H0,V]] + f·[V,[H0,V]]`.
pub fn e_matrix(pair: &HamiltonianPair, f: f64) -> CMat2 {
    let c = pair.commutator();
    commutator(pair.h0(), &c) + commutator(pair.v(), &c).scale_real(f)
}

/// The family `{I, V, [H0,V], E(f)}`.
pub fn lemma_family(pair: &HamiltonianPair, f: f64) -> [CMat2; 4] {
    [
        CMat2::identity(),
        *pair.v(),
        pair.commutator(),
        e_matrix(pair, f),
    ]
}

/// Rank over ℂ of `{I, V, [H0,V], E(f)}` at the default tolerance.
pub fn family_rank(pair: &HamiltonianPair, f: f64) -> usize {
    complex_rank(&lemma_family(pair, f), RANK_TOL).expect("family of four")
}

/// `T_min = π / ‖H0 − ½Tr(H0)·I + f0·V‖`.
pub fn min_time(pair: &HamiltonianPair) -> Result<f64> {
    let f0 = exceptional_control(pair)?;
    let shifted =
        *pair.h0() - CMat2::identity().scale(pair.h0().trace() * 0.5) + pair.v().scale_real(f0);
    Ok(std::f64::consts::PI / spectral_norm(&shifted))
}

/// The frame in which `H0 + f0·V`, minus its trace part, is `s·σz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalFrame {
    /// Columns are the `+1` and `−1` eigenvectors of the generator direction.
    pub basis_change: CMat2,
    pub time_scale: f64,
    pub v: f64,
    pub phi: f64,
    pub v_z: f64,
    pub v_0: f64,
    pub f0: f64,
}

impl CanonicalFrame {
    /// Transverse coupling once time is rescaled so that the generator is `σz`.
    pub fn rescaled_coupling(&self) -> f64 {
        self.v / self.time_scale
    }

    /// `σz` of the canonical frame expressed in the original basis.
    pub fn sigma_z(&self) -> CMat2 {
        self.basis_change * CMat2::pauli_z() * self.basis_change.dagger()
    }

    /// Maps a matrix from the original basis into the canonical one.
    pub fn to_canonical(&self, a: &CMat2) -> CMat2 {
        self.basis_change.dagger() * *a * self.basis_change
    }

    /// `T_min` of the pair this frame was built from.
    pub fn min_time(&self) -> f64 {
        std::f64::consts::PI / self.time_scale
    }
}

pub fn canonical_frame(pair: &HamiltonianPair) -> Result<CanonicalFrame> {
    let f0 = exceptional_control(pair)?;
    let [_, hx, hy, hz] = pair.hamiltonian(f0).real_pauli();
    let s = (hx * hx + hy * hy + hz * hz).sqrt();
    // s = 0 would make [H0, V] = [H0 + f0 V, V] vanish
    debug_assert!(s > 0.0);
    let q = direction_eigenbasis([hx / s, hy / s, hz / s]);
    let [v_0, vx, vy, v_z] = (q.dagger() * *pair.v() * q).real_pauli();
    let v = vx.hypot(vy);
    debug_assert!(
        v > 0.0,
        "transverse coupling vanished for a non-commuting pair"
    );
    Ok(CanonicalFrame {
        basis_change: q,
        time_scale: s,
        v,
        phi: vy.atan2(vx),
        v_z,
        v_0,
        f0,
    })
}

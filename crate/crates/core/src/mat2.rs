//! Closed-form arithmetic on 2×2 complex matrices.
//!
//! Everything a qubit needs lives here: the Pauli basis, exact unitary
//! exponentials of Hermitian generators, the exact directional derivative of
//! that exponential, spectral norms and numerical rank of small matrix
//! families. No series expansions or general-purpose decompositions are used
//! on the hot paths.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entrywise tolerance for the `is_*` predicates.
pub const PREDICATE_TOL: f64 = 1e-12;

/// Default relative threshold for [`complex_rank`].
pub const RANK_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// A 2×2 complex matrix, stored row-major.
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CMat2(pub [[C64; 2]; 2]);

impl fmt::Debug for CMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

impl CMat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        CMat2([[a, b], [c, d]])
    }

    pub const fn zero() -> Self {
        CMat2([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        CMat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn pauli_x() -> Self {
        CMat2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub const fn pauli_y() -> Self {
        CMat2([[ZERO, C64::new(0.0, -1.0)], [I, ZERO]])
    }

    pub const fn pauli_z() -> Self {
        CMat2([[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]])
    }

    pub fn diag(a: C64, d: C64) -> Self {
        CMat2([[a, ZERO], [ZERO, d]])
    }

    /// `c_i·I + c_x·σx + c_y·σy + c_z·σz` with real coefficients.
    pub fn from_real_pauli(c_i: f64, c_x: f64, c_y: f64, c_z: f64) -> Self {
        PauliCoeffs::real(c_i, c_x, c_y, c_z).compose()
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: [C64; 2], b: [C64; 2]) -> Self {
        CMat2([
            [a[0] * b[0].conj(), a[0] * b[1].conj()],
            [a[1] * b[0].conj(), a[1] * b[1].conj()],
        ])
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.0[r][c]
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        CMat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        CMat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    #[inline]
    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        CMat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn scale_real(&self, s: f64) -> Self {
        let m = &self.0;
        CMat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// `⟨a|M|b⟩`.
    pub fn sandwich(&self, a: [C64; 2], b: [C64; 2]) -> C64 {
        let mb = self.apply(b);
        a[0].conj() * mb[0] + a[1].conj() * mb[1]
    }

    pub fn entries(&self) -> [C64; 4] {
        let m = &self.0;
        [m[0][0], m[0][1], m[1][0], m[1][1]]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &CMat2) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.dagger()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.dagger() * *self).max_abs_diff(&CMat2::identity()) <= tol
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.trace().norm() <= tol
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.dagger()).scale_real(0.5)
    }

    pub fn pauli(&self) -> PauliCoeffs {
        pauli_decompose(self)
    }

    /// Real Pauli coefficients `(c_i, c_x, c_y, c_z)`; imaginary parts are dropped.
    pub fn real_pauli(&self) -> [f64; 4] {
        let m = &self.0;
        [
            0.5 * (m[0][0].re + m[1][1].re),
            0.5 * (m[0][1].re + m[1][0].re),
            0.5 * (m[1][0].im - m[0][1].im),
            0.5 * (m[0][0].re - m[1][1].re),
        ]
    }
}

impl Add for CMat2 {
    type Output = CMat2;
    fn add(self, o: CMat2) -> CMat2 {
        let (a, b) = (&self.0, &o.0);
        CMat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl AddAssign for CMat2 {
    fn add_assign(&mut self, o: CMat2) {
        *self = *self + o;
    }
}

impl Sub for CMat2 {
    type Output = CMat2;
    fn sub(self, o: CMat2) -> CMat2 {
        let (a, b) = (&self.0, &o.0);
        CMat2([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

impl Neg for CMat2 {
    type Output = CMat2;
    fn neg(self) -> CMat2 {
        self.scale_real(-1.0)
    }
}

impl Mul for CMat2 {
    type Output = CMat2;
    #[inline]
    fn mul(self, o: CMat2) -> CMat2 {
        let (a, b) = (&self.0, &o.0);
        CMat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Mul<C64> for CMat2 {
    type Output = CMat2;
    fn mul(self, s: C64) -> CMat2 {
        self.scale(s)
    }
}

impl Mul<f64> for CMat2 {
    type Output = CMat2;
    fn mul(self, s: f64) -> CMat2 {
        self.scale_real(s)
    }
}

/// Coefficients in the basis `{I, σx, σy, σz}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliCoeffs {
    pub c_i: C64,
    pub c_x: C64,
    pub c_y: C64,
    pub c_z: C64,
}

impl PauliCoeffs {
    pub fn real(c_i: f64, c_x: f64, c_y: f64, c_z: f64) -> Self {
        PauliCoeffs {
            c_i: c_i.into(),
            c_x: c_x.into(),
            c_y: c_y.into(),
            c_z: c_z.into(),
        }
    }

    pub fn compose(&self) -> CMat2 {
        let (ci, cx, cy, cz) = (self.c_i, self.c_x, self.c_y, self.c_z);
        CMat2([[ci + cz, cx - I * cy], [cx + I * cy, ci - cz]])
    }

    pub fn is_real(&self, tol: f64) -> bool {
        [self.c_i, self.c_x, self.c_y, self.c_z]
            .iter()
            .all(|c| c.im.abs() <= tol)
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.c_i, self.c_x, self.c_y, self.c_z]
    }
}

/// `c_I = Tr(A)/2`, `c_k = Tr(σ_k A)/2`.
pub fn pauli_decompose(a: &CMat2) -> PauliCoeffs {
    let m = &a.0;
    PauliCoeffs {
        c_i: (m[0][0] + m[1][1]) * 0.5,
        c_x: (m[0][1] + m[1][0]) * 0.5,
        c_y: (m[0][1] - m[1][0]) * (I * 0.5),
        c_z: (m[0][0] - m[1][1]) * 0.5,
    }
}

pub fn commutator(a: &CMat2, b: &CMat2) -> CMat2 {
    *a * *b - *b * *a
}

fn hermitian_tol(h: &CMat2) -> f64 {
    PREDICATE_TOL * h.max_abs().max(1.0)
}

fn check_hermitian(h: &CMat2) -> Result<()> {
    if h.is_hermitian(hermitian_tol(h)) {
        Ok(())
    } else {
        Err(Error::NotHermitian(format!("{h:?}")))
    }
}

/// `sin(r·dt)/r`, continuous at `r = 0`.
#[inline]
fn sin_over(r: f64, dt: f64) -> f64 {
    if r == 0.0 {
        dt
    } else {
        (r * dt).sin() / r
    }
}

/// `exp(−i·H·dt)` for Hermitian `H = a·I + b·σ`:
/// `e^{−ia·dt}(cos(|b|dt)·I − i·sin(|b|dt)·b̂·σ)`.
pub fn expm_unitary(h: &CMat2, dt: f64) -> Result<CMat2> {
    check_hermitian(h)?;
    if !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite time step {dt}")));
    }
    Ok(exp_hermitian(h.real_pauli(), dt))
}

/// Unchecked exponential from real Pauli coefficients `[a, bx, by, bz]`.
#[inline]
pub(crate) fn exp_hermitian(p: [f64; 4], dt: f64) -> CMat2 {
    let [a, bx, by, bz] = p;
    let r = (bx * bx + by * by + bz * bz).sqrt();
    let c = (r * dt).cos();
    let s = sin_over(r, dt);
    let phase = C64::from_polar(1.0, -a * dt);
    // c·I − i·s·(bx σx + by σy + bz σz)
    let m = CMat2([
        [C64::new(c, -s * bz), C64::new(-s * by, -s * bx)],
        [C64::new(s * by, -s * bx), C64::new(c, s * bz)],
    ]);
    m.scale(phase)
}

/// Exact derivative `∂/∂ε exp(−i(H + εV)dt)` at `ε = 0`.
///
/// Daleckii–Krein form on the spectral projectors `P± = (I ± b̂·σ)/2` of `H`:
/// `D = Σ_ij g(λ_i, λ_j) P_i V P_j` with `g` the divided difference of
/// `x ↦ e^{−ix·dt}`. The off-diagonal divided difference is evaluated as
/// `−i e^{−ia·dt} sin(r·dt)/r`, which has no cancellation for close eigenvalues.
pub fn dexp_direction(h: &CMat2, v: &CMat2, dt: f64) -> Result<CMat2> {
    check_hermitian(h)?;
    check_hermitian(v)?;
    Ok(dexp_hermitian(h.real_pauli(), v, dt))
}

pub(crate) fn dexp_hermitian(p: [f64; 4], v: &CMat2, dt: f64) -> CMat2 {
    let [a, bx, by, bz] = p;
    let r = (bx * bx + by * by + bz * bz).sqrt();
    let (l_plus, l_minus) = (a + r, a - r);
    let scale = 1.0f64.max(l_plus.abs()).max(l_minus.abs());
    if 2.0 * r < 1e-12 * scale {
        // H ∝ I: the exponential commutes with everything.
        return v.scale(C64::new(0.0, -dt) * C64::from_polar(1.0, -a * dt));
    }
    let n = CMat2::from_real_pauli(0.0, bx / r, by / r, bz / r);
    let p_plus = (CMat2::identity() + n).scale_real(0.5);
    let p_minus = (CMat2::identity() - n).scale_real(0.5);

    let g_pp = C64::new(0.0, -dt) * C64::from_polar(1.0, -l_plus * dt);
    let g_mm = C64::new(0.0, -dt) * C64::from_polar(1.0, -l_minus * dt);
    let g_pm = C64::new(0.0, -sin_over(r, dt)) * C64::from_polar(1.0, -a * dt);

    let vp = *v * p_plus;
    let vm = *v * p_minus;
    (p_plus * vp).scale(g_pp)
        + (p_minus * vm).scale(g_mm)
        + (p_plus * vm + p_minus * vp).scale(g_pm)
}

/// SU(2) matrix whose columns are the `+1` and `−1` eigenvectors of `n·σ`
/// for a unit vector `n`.
pub fn direction_eigenbasis(n: [f64; 3]) -> CMat2 {
    let [nx, ny, nz] = n;
    let u = if nz >= 0.0 {
        let s = (2.0 * (1.0 + nz)).sqrt();
        [C64::new((1.0 + nz) / s, 0.0), C64::new(nx / s, ny / s)]
    } else {
        let s = (2.0 * (1.0 - nz)).sqrt();
        [C64::new(nx / s, -ny / s), C64::new((1.0 - nz) / s, 0.0)]
    };
    CMat2([[u[0], -u[1].conj()], [u[1], u[0].conj()]])
}

/// Eigen-decomposition of a Hermitian 2×2 matrix, eigenvalues ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianEigen {
    pub values: [f64; 2],
    pub vectors: [[C64; 2]; 2],
}

impl HermitianEigen {
    pub fn new(h: &CMat2) -> Self {
        let [c0, cx, cy, cz] = h.real_pauli();
        let r = (cx * cx + cy * cy + cz * cz).sqrt();
        let q = if r == 0.0 {
            CMat2::identity()
        } else {
            direction_eigenbasis([cx / r, cy / r, cz / r])
        };
        let high = [q.0[0][0], q.0[1][0]];
        let low = [q.0[0][1], q.0[1][1]];
        HermitianEigen {
            values: [c0 - r, c0 + r],
            vectors: [low, high],
        }
    }

    pub fn gap(&self) -> f64 {
        self.values[1] - self.values[0]
    }
}

/// Largest singular value, from the closed-form top eigenvalue of `A†A`.
pub fn spectral_norm(a: &CMat2) -> f64 {
    let [m0, mx, my, mz] = (a.dagger() * *a).real_pauli();
    let top = m0 + (mx * mx + my * my + mz * mz).sqrt();
    top.max(0.0).sqrt()
}

/// Singular values of the `4 × n` matrix whose columns are the vectorized
/// members of `family`, sorted descending.
///
/// One-sided (Hestenes) Jacobi: small singular values come out with high
/// relative accuracy, which a Gram-matrix eigen solve would lose.
pub fn family_singular_values(family: &[CMat2]) -> Vec<f64> {
    let mut cols: Vec<[C64; 4]> = family.iter().map(CMat2::entries).collect();
    let n = cols.len();
    let dot =
        |a: &[C64; 4], b: &[C64; 4]| -> C64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    let nsq = |a: &[C64; 4]| -> f64 { a.iter().map(|x| x.norm_sqr()).sum() };

    for _sweep in 0..64 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = nsq(&cols[p]);
                let beta = nsq(&cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (cp, cq) = (cols[p], cols[q]);
                for i in 0..4 {
                    let qt = cq[i] * phase.conj();
                    cols[p][i] = cp[i] * c - qt * s;
                    cols[q][i] = cp[i] * s + qt * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| nsq(c).sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Numerical rank over ℂ of a family of 1–8 matrices: singular values above
/// `tol·σ_max` count.
pub fn complex_rank(family: &[CMat2], tol: f64) -> Result<usize> {
    if family.is_empty() {
        return Err(Error::InvalidArgument("empty matrix family".into()));
    }
    if family.len() > 8 {
        return Err(Error::InvalidArgument(format!(
            "matrix family of size {} exceeds 8",
            family.len()
        )));
    }
    let sv = family_singular_values(family);
    let top = sv[0];
    if top == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * top).count())
}

//! Seeded Monte-Carlo sweeps: random pairs, random starts, gradient flow,
//! classification of every endpoint.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{min_time, ControlGrid, HamiltonianPair};
use crate::error::{Error, Result};
use crate::landscape::classify::{classify_with_hessian, ClassifiedPoint, PointKind, Tolerances};
use crate::landscape::optimize::{ascend, Direction, OptimizerConfig, RunRecord, RunStatus};
use crate::mat2::{direction_eigenbasis, spectral_norm, CMat2};
use crate::objectives::{DensityMatrix, Objective, QuantumState};

/// Draws allowed before [`random_pair`] gives up.
pub const REJECTION_CAP: usize = 10_000;

pub const CSV_HEADER: &str =
    "pair_seed,start_seed,status,final_F,gap,grad_norm,hess_min,hess_max,kind";

/// Counter-based seed: the same `(master, stream, index)` always yields the
/// same value, independent of evaluation order.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(mix(mix(master) ^ stream) ^ index)
}

/// Pauli coefficients uniform in `[-1, 1]`, redrawn until
/// `‖[H0, V]‖ ≥ comm_floor`.
pub fn random_pair(seed: u64, traceless: bool, comm_floor: f64) -> Result<HamiltonianPair> {
    if !(comm_floor > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "comm_floor must be positive, got {comm_floor}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..REJECTION_CAP {
        let mut draw = || -> [f64; 4] { std::array::from_fn(|_| rng.gen_range(-1.0..=1.0)) };
        let h0 = draw();
        let mut v = draw();
        if traceless {
            v[0] = 0.0;
        }
        let Ok(pair) = HamiltonianPair::from_pauli(h0, v) else {
            continue;
        };
        if spectral_norm(&pair.commutator()) >= comm_floor {
            return Ok(pair);
        }
    }
    Err(Error::RejectionCapExceeded {
        comm_floor,
        draws: REJECTION_CAP,
    })
}

fn random_unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepObjective {
    Gate {
        target: CMat2,
    },
    Transition {
        initial: QuantumState,
        target: QuantumState,
    },
    /// `ρ0` with the given spectrum in a random basis, measured against a
    /// random rank-one projector; one draw per pair.
    RandomObservable {
        eigenvalues: [f64; 2],
    },
}

impl SweepObjective {
    pub fn instantiate(&self, seed: u64) -> Result<Objective> {
        match self {
            SweepObjective::Gate { target } => Objective::gate(*target),
            SweepObjective::Transition { initial, target } => {
                Ok(Objective::transition(*initial, *target))
            }
            SweepObjective::RandomObservable { eigenvalues } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let basis = direction_eigenbasis(random_unit_vector(&mut rng));
                let rho = DensityMatrix::with_spectrum(*eigenvalues, &basis)?;
                let probe = DensityMatrix::from_bloch(random_unit_vector(&mut rng))?;
                Objective::observable(rho, *probe.matrix())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub pairs: usize,
    pub starts: usize,
    pub segments: usize,
    /// Horizon in units of the pair's `T_min`.
    #[serde(default = "default_t_multiplier")]
    pub t_multiplier: f64,
    pub objective: SweepObjective,
    pub seed: u64,
    #[serde(default = "default_true")]
    pub traceless: bool,
    #[serde(default = "default_comm_floor")]
    pub comm_floor: f64,
    /// Initial controls are uniform in `[-start_amplitude, start_amplitude]`.
    #[serde(default = "default_one")]
    pub start_amplitude: f64,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_max_escapes")]
    pub max_escapes: usize,
    #[serde(default = "default_escape_step")]
    pub escape_step: f64,
    /// Worker threads; `None` uses the global pool.
    #[serde(default)]
    pub workers: Option<usize>,
}

fn default_t_multiplier() -> f64 {
    2.0
}
fn default_true() -> bool {
    true
}
fn default_comm_floor() -> f64 {
    0.1
}
fn default_one() -> f64 {
    1.0
}
fn default_max_escapes() -> usize {
    5
}
fn default_escape_step() -> f64 {
    1e-2
}

impl SweepConfig {
    pub fn new(
        pairs: usize,
        starts: usize,
        segments: usize,
        objective: SweepObjective,
        seed: u64,
    ) -> Self {
        SweepConfig {
            pairs,
            starts,
            segments,
            t_multiplier: default_t_multiplier(),
            objective,
            seed,
            traceless: true,
            comm_floor: default_comm_floor(),
            start_amplitude: 1.0,
            optimizer: OptimizerConfig::default(),
            tolerances: Tolerances::default(),
            max_escapes: default_max_escapes(),
            escape_step: default_escape_step(),
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidArgument(format!("sweep: {what}")));
        if self.segments == 0 {
            return bad("segments must be positive".into());
        }
        if !(self.t_multiplier >= 1.0 && self.t_multiplier.is_finite()) {
            return bad(format!("t_multiplier {} is below 1", self.t_multiplier));
        }
        if !(self.start_amplitude >= 0.0 && self.start_amplitude.is_finite()) {
            return bad("start_amplitude must be non-negative".into());
        }
        if !(self.escape_step > 0.0) {
            return bad("escape_step must be positive".into());
        }
        if self.workers == Some(0) {
            return bad("workers must be positive".into());
        }
        self.optimizer.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRun {
    pub pair_index: usize,
    pub start_index: usize,
    pub pair_seed: u64,
    pub start_seed: u64,
    pub horizon: f64,
    pub status: RunStatus,
    pub iterations: usize,
    pub escapes: usize,
    /// The endpoint was a trap candidate and was re-examined on a finer grid.
    pub reverified: bool,
    pub point: ClassifiedPoint,
    pub control: ControlGrid,
}

impl SweepRun {
    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(|| "NaN".to_string(), |v| format!("{v:?}"));
        format!(
            "{},{},{},{:?},{:?},{:?},{},{},{}",
            self.pair_seed,
            self.start_seed,
            self.status.as_str(),
            self.point.value,
            self.point.gap_to_max,
            self.point.grad_norm,
            opt(self.point.hess_min),
            opt(self.point.hess_max),
            self.point.kind.as_str()
        )
    }
}

/// A trap candidate that survived re-verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Falsification {
    pub pair_index: usize,
    pub start_index: usize,
    pub pair: [[f64; 4]; 2],
    pub control: ControlGrid,
    pub hessian_spectrum: Vec<f64>,
    pub point: ClassifiedPoint,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCounts {
    pub global_max: usize,
    pub global_min: usize,
    pub saddle: usize,
    pub trap_candidate: usize,
    pub second_order_trap_candidate: usize,
    pub non_critical: usize,
    pub converged: usize,
    pub iter_limit: usize,
    pub step_underflow: usize,
    /// Runs that needed at least one saddle escape.
    pub saddle_escaped: usize,
}

impl SweepCounts {
    fn add(&mut self, run: &SweepRun) {
        match run.point.kind {
            PointKind::GlobalMax => self.global_max += 1,
            PointKind::GlobalMin => self.global_min += 1,
            PointKind::Saddle => self.saddle += 1,
            PointKind::TrapCandidate => self.trap_candidate += 1,
            PointKind::SecondOrderTrapCandidate => self.second_order_trap_candidate += 1,
            PointKind::NonCritical => self.non_critical += 1,
        }
        match run.status {
            RunStatus::Converged => self.converged += 1,
            RunStatus::IterLimit => self.iter_limit += 1,
            RunStatus::StepUnderflow => self.step_underflow += 1,
        }
        if run.escapes > 0 {
            self.saddle_escaped += 1;
        }
    }

    pub fn kind_total(&self) -> usize {
        self.global_max
            + self.global_min
            + self.saddle
            + self.trap_candidate
            + self.second_order_trap_candidate
            + self.non_critical
    }

    pub fn traps(&self) -> usize {
        self.trap_candidate + self.second_order_trap_candidate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub runs: Vec<SweepRun>,
    pub counts: SweepCounts,
    pub falsifications: Vec<Falsification>,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(96 * (self.runs.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for run in &self.runs {
            out.push_str(&run.csv_row());
            out.push('\n');
        }
        out
    }
}

struct PairCase {
    seed: u64,
    pair: HamiltonianPair,
    objective: Objective,
    horizon: f64,
}

struct RunOutcome {
    run: SweepRun,
    falsification: Option<Falsification>,
}

/// Ascend, escaping saddles along the Hessian eigenvector of steepest
/// improvement, until the endpoint is not a saddle or the escape budget runs
/// out.
fn settle(
    obj: &Objective,
    pair: &HamiltonianPair,
    init: &ControlGrid,
    optimizer: &OptimizerConfig,
    tol: &Tolerances,
    max_escapes: usize,
    escape_step: f64,
) -> Result<(RunRecord, usize, ClassifiedPoint, Option<Vec<f64>>)> {
    let dir = optimizer.direction;
    let mut record = ascend(obj, pair, init, optimizer)?;
    let mut iterations = record.iterations;
    let mut escapes = 0;
    loop {
        let (point, hess) = classify_with_hessian(obj, pair, &record.final_control, tol, dir)?;
        let spectrum = hess.as_ref().map(|h| h.eigenvalues.clone());
        let stalled_at_saddle = point.kind == PointKind::Saddle
            || (point.kind == PointKind::NonCritical && record.status == RunStatus::StepUnderflow);
        let Some(h) = hess.filter(|_| stalled_at_saddle && escapes < max_escapes) else {
            record.iterations = iterations;
            return Ok((record, escapes, point, spectrum));
        };
        let j = match dir {
            Direction::Ascend => h.dim - 1,
            Direction::Descend => 0,
        };
        let e = h.eigenvector(j);
        let base = record.final_control.values();
        let mut best: Option<(f64, ControlGrid)> = None;
        for sign in [1.0, -1.0] {
            let values = base
                .iter()
                .zip(&e)
                .map(|(f, ej)| f + sign * escape_step * ej)
                .collect();
            let grid = record.final_control.with_values(values)?;
            let gap = dir.gap(obj, &crate::dynamics::final_unitary(pair, &grid));
            if best.as_ref().is_none_or(|(g, _)| gap < *g) {
                best = Some((gap, grid));
            }
        }
        let (_, kicked) = best.expect("two trial kicks");
        let next = ascend(obj, pair, &kicked, optimizer)?;
        iterations += next.iterations;
        let mut trace = std::mem::take(&mut record.trace);
        trace.extend_from_slice(&next.trace);
        record = RunRecord {
            initial: record.initial,
            trace,
            ..next
        };
        escapes += 1;
    }
}

fn run_one(
    case: &PairCase,
    pair_index: usize,
    start_index: usize,
    config: &SweepConfig,
) -> Result<RunOutcome> {
    let start_seed = derive_seed(case.seed, 1, start_index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(start_seed);
    let a = config.start_amplitude;
    let values = (0..config.segments)
        .map(|_| if a > 0.0 { rng.gen_range(-a..=a) } else { 0.0 })
        .collect();
    let init = ControlGrid::new(case.horizon, values)?;
    let (record, escapes, mut point, mut spectrum) = settle(
        &case.objective,
        &case.pair,
        &init,
        &config.optimizer,
        &config.tolerances,
        config.max_escapes,
        config.escape_step,
    )?;
    let mut status = record.status;
    let mut iterations = record.iterations;
    let mut final_control = record.final_control;
    let mut reverified = false;

    if point.kind.is_trap_candidate() {
        // a plateau on the coarse grid must survive refinement to count
        reverified = true;
        let tight = Tolerances {
            grad_tol: config.tolerances.grad_tol / 10.0,
            ..config.tolerances
        };
        let optimizer = OptimizerConfig {
            grad_tol: tight.grad_tol,
            ..config.optimizer
        };
        let (rec, _, p, s) = settle(
            &case.objective,
            &case.pair,
            &final_control.refine(2),
            &optimizer,
            &tight,
            config.max_escapes,
            config.escape_step,
        )?;
        status = rec.status;
        iterations += rec.iterations;
        final_control = rec.final_control;
        point = p;
        spectrum = s;
    }

    let falsification = point.kind.is_trap_candidate().then(|| Falsification {
        pair_index,
        start_index,
        pair: [case.pair.h0().real_pauli(), case.pair.v().real_pauli()],
        control: final_control.clone(),
        hessian_spectrum: spectrum.unwrap_or_default(),
        point,
    });
    Ok(RunOutcome {
        run: SweepRun {
            pair_index,
            start_index,
            pair_seed: case.seed,
            start_seed,
            horizon: case.horizon,
            status,
            iterations,
            escapes,
            reverified,
            point,
            control: final_control,
        },
        falsification,
    })
}

#[cfg(feature = "parallel")]
fn map_tasks<F>(tasks: &[(usize, usize)], workers: Option<usize>, f: F) -> Result<Vec<RunOutcome>>
where
    F: Fn(usize, usize) -> Result<RunOutcome> + Sync,
{
    use rayon::prelude::*;
    let go = || {
        tasks
            .par_iter()
            .map(|&(p, s)| f(p, s))
            .collect::<Result<Vec<_>>>()
    };
    match workers {
        None => go(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(go),
    }
}

#[cfg(not(feature = "parallel"))]
fn map_tasks<F>(tasks: &[(usize, usize)], _workers: Option<usize>, f: F) -> Result<Vec<RunOutcome>>
where
    F: Fn(usize, usize) -> Result<RunOutcome>,
{
    tasks.iter().map(|&(p, s)| f(p, s)).collect()
}

/// Run every `(pair, start)` combination; the report is ordered by pair
/// index, then start index, whatever the worker count.
pub fn sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let cases = (0..config.pairs)
        .map(|p| {
            let seed = derive_seed(config.seed, 0, p as u64);
            let pair = random_pair(seed, config.traceless, config.comm_floor)?;
            let objective = config.objective.instantiate(derive_seed(seed, 2, 0))?;
            let horizon = config.t_multiplier * min_time(&pair)?;
            Ok(PairCase {
                seed,
                pair,
                objective,
                horizon,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tasks: Vec<(usize, usize)> = (0..config.pairs)
        .flat_map(|p| (0..config.starts).map(move |s| (p, s)))
        .collect();
    let outcomes = map_tasks(&tasks, config.workers, |p, s| {
        run_one(&cases[p], p, s, config)
    })?;

    let mut counts = SweepCounts::default();
    let mut runs = Vec::with_capacity(outcomes.len());
    let mut falsifications = Vec::new();
    for o in outcomes {
        counts.add(&o.run);
        runs.push(o.run);
        falsifications.extend(o.falsification);
    }
    Ok(SweepReport {
        config: config.clone(),
        runs,
        counts,
        falsifications,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::gates;

    #[test]
    fn seeds_are_deterministic_and_spread() {
        assert_eq!(derive_seed(7, 0, 3), derive_seed(7, 0, 3));
        assert_ne!(derive_seed(7, 0, 3), derive_seed(7, 1, 3));
        assert_ne!(derive_seed(7, 0, 3), derive_seed(7, 0, 4));
        assert_ne!(derive_seed(7, 0, 3), derive_seed(8, 0, 3));
    }

    #[test]
    fn random_pair_is_reproducible() {
        let a = random_pair(11, true, 0.1).unwrap();
        let b = random_pair(11, true, 0.1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.v().trace().re, 0.0);
        assert!(random_pair(11, true, 0.0).is_err());
    }

    #[test]
    fn impossible_floor_hits_the_cap() {
        // ‖[H0, V]‖ ≤ 2·|h|·|v| ≤ 2·3 = 6 for coefficients in [-1, 1]
        assert!(matches!(
            random_pair(1, false, 100.0),
            Err(Error::RejectionCapExceeded { .. })
        ));
    }

    #[test]
    fn smoke_sweep_bookkeeping() {
        let cfg = SweepConfig::new(
            5,
            2,
            16,
            SweepObjective::Gate {
                target: gates::hadamard(),
            },
            3,
        );
        let report = sweep(&cfg).unwrap();
        assert_eq!(report.runs.len(), 10);
        assert_eq!(report.counts.kind_total(), 10);
        assert_eq!(
            report.counts.converged + report.counts.iter_limit + report.counts.step_underflow,
            10
        );
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), 11);
        assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
    }

    #[test]
    fn truncated_runs_are_never_traps() {
        let mut cfg = SweepConfig::new(
            3,
            2,
            16,
            SweepObjective::Gate {
                target: gates::hadamard(),
            },
            5,
        );
        cfg.optimizer.max_iters = 3;
        let report = sweep(&cfg).unwrap();
        assert!(report.counts.iter_limit > 0);
        for run in &report.runs {
            if run.status == RunStatus::IterLimit {
                assert_eq!(run.point.kind, PointKind::NonCritical);
            }
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn worker_count_does_not_change_the_report() {
        let mut cfg = SweepConfig::new(
            3,
            2,
            8,
            SweepObjective::RandomObservable {
                eigenvalues: [0.3, 0.7],
            },
            9,
        );
        cfg.workers = Some(1);
        let serial = sweep(&cfg).unwrap().to_csv();
        cfg.workers = Some(4);
        assert_eq!(serial, sweep(&cfg).unwrap().to_csv());
    }
}

use std::io::Write;
use std::path::Path;

use num_complex::Complex64 as C64;
use qubit_landscape::dynamics::{
    exceptional_control, family_rank, final_unitary, lemma_family, propagate as propagate_control,
    ControlGrid, HamiltonianPair,
};
use qubit_landscape::landscape::exceptional::{f0_second_order_report, F0Report, F0Verdict};
use qubit_landscape::landscape::{
    ascend, classify, lemma1_rank_profile, sweep as run_sweep, ClassifiedPoint, LandscapeSlice,
    RunRecord, SweepConfig,
};
use qubit_landscape::mat2::{expm_unitary, family_singular_values, CMat2};
use qubit_landscape::objectives::evaluate;
use qubit_landscape::{DensityMatrix, Objective, QuantumState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{
    load, resolve_time, F0Config, GradcheckConfig, OptimizeConfig, PropagateConfig, RankConfig,
    SliceConfig,
};
use crate::{Common, Failure};

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Config(format!("cannot write to stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TrajectoryDump {
    pub horizon: f64,
    pub step: f64,
    pub node_times: Vec<f64>,
    pub unitaries: Vec<CMat2>,
    pub final_unitary: CMat2,
    pub value: Option<f64>,
}

pub fn propagate(c: &Common) -> Result<(), Failure> {
    let cfg: PropagateConfig = load(&c.config)?;
    let pair = cfg.pair.build()?;
    let horizon = resolve_time(cfg.horizon, cfg.t_multiplier, &pair)?;
    let control = cfg.control.build(&pair, horizon)?;
    let traj = propagate_control(&pair, &control);
    let value = match &cfg.objective {
        Some(o) => Some(o.build()?.value(traj.final_unitary())),
        None => None,
    };
    let dump = TrajectoryDump {
        horizon,
        step: traj.step,
        node_times: (0..traj.len()).map(|k| traj.node_time(k)).collect(),
        unitaries: traj.nodes.clone(),
        final_unitary: *traj.final_unitary(),
        value,
    };
    emit(c.out.as_deref(), &to_json(&dump))
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..=hi)
}

fn random_hermitian(rng: &mut ChaCha8Rng) -> CMat2 {
    let c: [f64; 4] = std::array::from_fn(|_| uniform(rng, -1.0, 1.0));
    CMat2::from_real_pauli(c[0], c[1], c[2], c[3])
}

fn random_state(rng: &mut ChaCha8Rng) -> Result<QuantumState, Failure> {
    let z: [f64; 4] = std::array::from_fn(|_| uniform(rng, -1.0, 1.0));
    Ok(QuantumState::normalized(
        C64::new(z[0], z[1]),
        C64::new(z[2], z[3]),
    )?)
}

fn random_objective(rng: &mut ChaCha8Rng, family: usize) -> Result<Objective, Failure> {
    Ok(match family {
        0 => Objective::transition(random_state(rng)?, random_state(rng)?),
        1 => {
            let r: [f64; 3] = std::array::from_fn(|_| uniform(rng, -0.55, 0.55));
            Objective::observable(DensityMatrix::from_bloch(r)?, random_hermitian(rng))?
        }
        _ => {
            let h = random_hermitian(rng);
            Objective::gate(expm_unitary(&h, uniform(rng, 0.0, 4.0))?)?
        }
    })
}

#[derive(Serialize)]
struct FamilyCheck {
    family: &'static str,
    max_rel_err: f64,
    rel_errs: Vec<f64>,
}

#[derive(Serialize)]
struct GradcheckReport {
    seed: u64,
    instances: usize,
    segments: usize,
    step: f64,
    threshold: f64,
    families: Vec<FamilyCheck>,
    passed: bool,
}

/// `‖g − g_fd‖∞ / ‖g‖∞` for one random instance.
fn gradcheck_instance(
    obj: &Objective,
    pair: &HamiltonianPair,
    control: &ControlGrid,
    h: f64,
) -> Result<f64, Failure> {
    let g = evaluate(obj, pair, control).gradient;
    let mut x = control.values().to_vec();
    let mut err = 0.0f64;
    for k in 0..x.len() {
        let base = x[k];
        x[k] = base + h;
        let plus = obj.value(&final_unitary(pair, &control.with_values(x.clone())?));
        x[k] = base - h;
        let minus = obj.value(&final_unitary(pair, &control.with_values(x.clone())?));
        x[k] = base;
        err = err.max((g[k] - (plus - minus) / (2.0 * h)).abs());
    }
    let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(if scale > 0.0 { err / scale } else { err })
}

pub fn gradcheck(c: &Common) -> Result<(), Failure> {
    let cfg: GradcheckConfig = load(&c.config)?;
    if cfg.segments == 0 || !(cfg.step > 0.0) || !(cfg.threshold > 0.0) {
        return Err(Failure::Config(
            "segments, step and threshold must be positive".into(),
        ));
    }
    let seed = c.seed.unwrap_or(cfg.seed);
    let mut families = Vec::new();
    for (f, name) in ["transition", "observable", "gate"].into_iter().enumerate() {
        let mut rel_errs = Vec::with_capacity(cfg.instances);
        for i in 0..cfg.instances {
            let mut rng = ChaCha8Rng::seed_from_u64(qubit_landscape::landscape::derive_seed(
                seed, f as u64, i as u64,
            ));
            let pair = loop {
                let h0 = std::array::from_fn(|_| uniform(&mut rng, -1.0, 1.0));
                let v = std::array::from_fn(|_| uniform(&mut rng, -1.0, 1.0));
                if let Ok(p) = HamiltonianPair::from_pauli(h0, v) {
                    break p;
                }
            };
            let horizon = uniform(&mut rng, 0.5, 4.0);
            let values = (0..cfg.segments)
                .map(|_| uniform(&mut rng, -1.5, 1.5))
                .collect();
            let control = ControlGrid::new(horizon, values)?;
            let obj = random_objective(&mut rng, f)?;
            rel_errs.push(gradcheck_instance(&obj, &pair, &control, cfg.step)?);
        }
        let max_rel_err = rel_errs.iter().fold(0.0f64, |m, v| m.max(*v));
        families.push(FamilyCheck {
            family: name,
            max_rel_err,
            rel_errs,
        });
    }
    let passed = families.iter().all(|f| f.max_rel_err <= cfg.threshold);
    let report = GradcheckReport {
        seed,
        instances: cfg.instances,
        segments: cfg.segments,
        step: cfg.step,
        threshold: cfg.threshold,
        families,
        passed,
    };
    emit(c.out.as_deref(), &to_json(&report))?;
    if passed {
        Ok(())
    } else {
        let worst = report
            .families
            .iter()
            .fold(0.0f64, |m, f| m.max(f.max_rel_err));
        Err(Failure::Verification(format!(
            "relative error {worst:e} exceeds {:e}",
            cfg.threshold
        )))
    }
}

#[derive(Serialize)]
struct OptimizeReport {
    run: RunRecord,
    classification: ClassifiedPoint,
}

pub fn optimize(c: &Common) -> Result<(), Failure> {
    let cfg: OptimizeConfig = load(&c.config)?;
    let pair = cfg.pair.build()?;
    let obj = cfg.objective.build()?;
    let horizon = resolve_time(cfg.horizon, cfg.t_multiplier, &pair)?;
    let init = cfg.init.build(&pair, horizon)?;
    let run = ascend(&obj, &pair, &init, &cfg.optimizer)?;
    let classification = classify(
        &obj,
        &pair,
        &run.final_control,
        &cfg.tolerances,
        cfg.optimizer.direction,
    )?;
    emit(
        c.out.as_deref(),
        &to_json(&OptimizeReport {
            run,
            classification,
        }),
    )
}

pub fn sweep(c: &Common, summary: Option<&Path>) -> Result<(), Failure> {
    let mut cfg: SweepConfig = load(&c.config)?;
    if let Some(seed) = c.seed {
        cfg.seed = seed;
    }
    let report = run_sweep(&cfg)?;
    emit(c.out.as_deref(), &report.to_csv())?;
    #[derive(Serialize)]
    struct Summary<'a> {
        config: &'a SweepConfig,
        runs: usize,
        counts: &'a qubit_landscape::landscape::SweepCounts,
        falsifications: &'a [qubit_landscape::landscape::sweep::Falsification],
    }
    let text = to_json(&Summary {
        config: &report.config,
        runs: report.runs.len(),
        counts: &report.counts,
        falsifications: &report.falsifications,
    });
    match summary {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?,
        None => eprint!("{text}"),
    }
    if report.counts.traps() == 0 {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} trap candidate(s) survived re-verification",
            report.counts.traps()
        )))
    }
}

pub fn f0(c: &Common) -> Result<(), Failure> {
    let cfg: F0Config = load(&c.config)?;
    let pair = cfg.pair.build()?;
    let obj = cfg.objective.build()?;
    let horizon = match (cfg.horizon, cfg.t_multiplier) {
        (None, None) => resolve_time(None, Some(1.0), &pair),
        (h, m) => resolve_time(h, m, &pair),
    }?;
    let report: F0Report =
        f0_second_order_report(&pair, &obj, horizon, cfg.segments, &cfg.epsilons)?;
    emit(c.out.as_deref(), &to_json(&report))?;
    if report.verdict == F0Verdict::Inconclusive {
        Err(Failure::Verification(
            "second differences did not split in sign for every ε".into(),
        ))
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct RankProbe {
    f: f64,
    rank: usize,
    singular_values: Vec<f64>,
}

#[derive(Serialize)]
struct RankReport {
    f0: f64,
    at_f0: RankProbe,
    probes: Vec<RankProbe>,
    profile: Option<Vec<usize>>,
}

pub fn rank(c: &Common) -> Result<(), Failure> {
    let cfg: RankConfig = load(&c.config)?;
    let pair = cfg.pair.build()?;
    let f0 = exceptional_control(&pair)?;
    let probe = |f: f64| RankProbe {
        f,
        rank: family_rank(&pair, f),
        singular_values: family_singular_values(&lemma_family(&pair, f)),
    };
    let profile = match &cfg.control {
        Some(spec) => {
            let horizon = resolve_time(cfg.horizon, cfg.t_multiplier, &pair)?;
            Some(lemma1_rank_profile(&pair, &spec.build(&pair, horizon)?))
        }
        None => None,
    };
    let report = RankReport {
        f0,
        at_f0: probe(f0),
        probes: cfg.probes.iter().map(|&f| probe(f)).collect(),
        profile,
    };
    emit(c.out.as_deref(), &to_json(&report))
}

pub fn slice(c: &Common) -> Result<(), Failure> {
    let cfg: SliceConfig = load(&c.config)?;
    let pair = cfg.pair.build()?;
    let obj = cfg.objective.build()?;
    let horizon = resolve_time(cfg.horizon, cfg.t_multiplier, &pair)?;
    let base = cfg.base.build(&pair, horizon)?;
    let (a, b) = cfg.directions.build(&pair, &base)?;
    let s = LandscapeSlice::compute(&obj, &pair, &base, &a, &b, cfg.extent, cfg.resolution)?;
    emit(c.out.as_deref(), &s.to_text())
}

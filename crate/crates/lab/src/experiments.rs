//! Verification sweeps behind each command.
//!
//! A sweep draws its cases from its own seed stream,
//! `derive_seed(derive_seed(seed, stream), case)`, so a command run on its own
//! and the same sweep inside `full-suite` produce the same rows. Cases run on
//! the rayon pool and are collected in case order.

use std::{
    path::{Path, PathBuf},
    time::Instant,
};

use mixedq_core::{
    dqc1k::{dqc1k_input, dqc1k_spectrum_check, parallel_failure_bound, run_dqc1k, Dqc1kCircuit, ParallelDqc1kSpec},
    entropy::{min_entropy, von_neumann_entropy, EntropyReport},
    infotheory::{bipartite_output_state, mutual_information, BipartiteModel},
    mbqc::{mbqc_success_probability, solution_count_lower_bound, success_upper_bound, Povm, ResourcePartition},
    random::{
        random_density, random_distribution, random_gates, random_hamiltonian, random_output_region, random_povm,
        random_solution_family, random_subset, random_unitary,
    },
    search::{
        derive_seed, dqc1k_failure_bound, failure_probability_bounds, random_search, repetitions_for_failure,
        seeded_rng, VerifierOracle, RNG_ALGORITHM,
    },
    state::{partial_trace, spectral_decompose},
    thermal::{
        cluster_hamiltonian, connected_graphs, gibbs_state, thermal_cluster_min_entropy_closed_form,
        thermal_min_entropy, ClusterGraph, HamiltonianSpec,
    },
    Config, DensityOperator, UnitaryOperator,
};
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::{
    formats::{
        distribution_json, invalid, read_json, CircuitJson, GraphJson, HamiltonianJson, MatrixJson, MbqcInstanceJson,
        ModelJson, PlantedProblemJson,
    },
    report::{ConfigEcho, Format, Relation, Row, RunReport, SearchRecord},
    LabError, Result,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Entropy,
    Thermal,
    ClusterScan,
    MbqcVerify,
    Dqc1kRun,
    Dqc1kVerify,
    ClassicalSolve,
    MutualInfo,
    FullSuite,
}

impl Command {
    pub fn name(self) -> String {
        clap::ValueEnum::to_possible_value(&self).expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub seed: u64,
    pub trials: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub qubit_cap: usize,
    /// Replaces the default slack of every check.
    pub tolerance: Option<f64>,
    /// Inverse temperatures for `thermal` and `cluster-scan`.
    pub betas: Option<Vec<f64>>,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            seed: 0,
            trials: 300,
            output: None,
            format: Format::Json,
            qubit_cap: mixedq_core::DEFAULT_QUBIT_CAP,
            tolerance: None,
            betas: None,
        }
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            command: self.command.name(),
            input: self.input.as_ref().map(|p| p.display().to_string()),
            seed: self.seed,
            trials: self.trials,
            qubit_cap: self.qubit_cap,
            tolerance: self.tolerance,
            betas: self.betas.clone(),
            rng: RNG_ALGORITHM.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

const THERMAL_BETAS: [f64; 3] = [0.1, 1.0, 5.0];
const CLUSTER_BETAS: [f64; 5] = [0.0, 0.25, 0.5, 1.0, 2.0];
const SEARCH_TARGET: f64 = 0.05;
const SEARCH_RUNS: usize = 400;
const APPENDIX_TUPLES: usize = 1000;
const DQC1_MODELS: usize = 50;

// Seed streams, one per sweep.
const ENTROPY: u64 = 1;
const THERMAL: u64 = 2;
const CLUSTER: u64 = 3;
const MBQC: u64 = 4;
const DQC1K_RUN: u64 = 5;
const DQC1K_VERIFY: u64 = 6;
const APPENDIX: u64 = 7;
const CLASSICAL: u64 = 8;
const CLASSICAL_DQC1K: u64 = 9;
const MUTUAL: u64 = 10;
const MUTUAL_DQC1: u64 = 11;

struct Ctx {
    seed: u64,
    trials: usize,
    cfg: Config,
    tolerance: Option<f64>,
    betas: Option<Vec<f64>>,
}

impl Ctx {
    fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }

    fn betas(&self, default: &[f64]) -> Vec<f64> {
        self.betas.clone().unwrap_or_else(|| default.to_vec())
    }

    /// Runs `cases` independent cases on the pool, each with its own seed.
    fn sweep<F>(&self, stream: u64, cases: usize, f: F) -> Result<Vec<Row>>
    where
        F: Fn(usize, u64, &mut ChaCha20Rng) -> Result<Vec<Row>> + Sync,
    {
        let base = derive_seed(self.seed, stream);
        let chunks = (0..cases)
            .into_par_iter()
            .map(|i| {
                let seed = derive_seed(base, i as u64);
                f(i, seed, &mut seeded_rng(seed))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(chunks.into_iter().flatten().collect())
    }
}

/// Dispatches to the sweep or file check named by `config.command`.
pub fn run(config: &ExperimentConfig) -> Result<RunReport> {
    let start = Instant::now();
    if config.trials == 0 {
        return Err(LabError::Usage("trials must be at least 1".into()));
    }
    if let Some(betas) = &config.betas {
        if betas.is_empty() || betas.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(LabError::Usage(format!(
                "betas must be a non-empty list of finite non-negative numbers, got {betas:?}"
            )));
        }
    }
    if let Some(t) = config.tolerance {
        if !t.is_finite() {
            return Err(LabError::Usage(format!("tolerance must be finite, got {t}")));
        }
    }
    let ctx = Ctx {
        seed: config.seed,
        trials: usize::try_from(config.trials).map_err(|_| LabError::Usage("trials too large".into()))?,
        cfg: Config::default().with_qubit_cap(config.qubit_cap),
        tolerance: config.tolerance,
        betas: config.betas.clone(),
    };
    let input = config.input.as_deref();
    let rows = match (config.command, input) {
        (Command::Entropy, None) => entropy_sweep(&ctx)?,
        (Command::Entropy, Some(p)) => entropy_file(&ctx, p)?,
        (Command::Thermal, None) => thermal_sweep(&ctx)?,
        (Command::Thermal, Some(p)) => thermal_file(&ctx, p)?,
        (Command::ClusterScan, None) => cluster_sweep(&ctx)?,
        (Command::ClusterScan, Some(p)) => cluster_file(&ctx, p)?,
        (Command::MbqcVerify, None) => mbqc_sweep(&ctx)?,
        (Command::MbqcVerify, Some(p)) => mbqc_file(&ctx, p)?,
        (Command::Dqc1kRun, None) => dqc1k_run_sweep(&ctx)?,
        (Command::Dqc1kRun, Some(p)) => dqc1k_run_file(&ctx, p)?,
        (Command::Dqc1kVerify, None) => dqc1k_verify_sweep(&ctx)?,
        (Command::Dqc1kVerify, Some(p)) => dqc1k_verify_file(&ctx, p)?,
        (Command::ClassicalSolve, None) => classical_sweep(&ctx)?,
        (Command::ClassicalSolve, Some(p)) => classical_file(&ctx, p)?,
        (Command::MutualInfo, None) => mutual_sweep(&ctx)?,
        (Command::MutualInfo, Some(p)) => mutual_file(&ctx, p)?,
        (Command::FullSuite, None) => full_suite(&ctx)?,
        (Command::FullSuite, Some(_)) => {
            return Err(LabError::Usage("full-suite takes no input file".into()));
        }
    };
    Ok(RunReport::new(config.echo(), rows, start.elapsed()))
}

fn full_suite(ctx: &Ctx) -> Result<Vec<Row>> {
    let sweeps: [fn(&Ctx) -> Result<Vec<Row>>; 9] = [
        entropy_sweep,
        thermal_sweep,
        cluster_sweep,
        mbqc_sweep,
        dqc1k_run_sweep,
        dqc1k_verify_sweep,
        appendix_sweep,
        classical_sweep,
        mutual_sweep,
    ];
    let mut rows = Vec::new();
    for sweep in sweeps {
        let offset = rows.last().map_or(0, |r: &Row| r.case + 1);
        rows.extend(sweep(ctx)?.into_iter().map(|mut r| {
            r.case += offset;
            r
        }));
    }
    Ok(rows)
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    read_json(path)
}

fn origin(path: &Path) -> String {
    path.display().to_string()
}

// Entropy.

fn entropy_rows(ctx: &Ctx, case: usize, seed: u64, rho: &DensityOperator, inputs: String) -> Result<Vec<Row>> {
    let r = EntropyReport::of(rho, &ctx.cfg)?;
    let tol = ctx.tol(1e-9);
    Ok(vec![
        Row::new(
            case,
            seed,
            "min_entropy_le_von_neumann",
            inputs.clone(),
            r.min_entropy_bits,
            r.von_neumann_bits,
            Relation::Le,
            tol,
        )
        .with_detail(r),
        Row::new(case, seed, "von_neumann_le_qubits", inputs, r.von_neumann_bits, r.qubits as f64, Relation::Le, tol),
    ])
}

fn entropy_sweep(ctx: &Ctx) -> Result<Vec<Row>> {
    ctx.sweep(ENTROPY, ctx.trials, |i, seed, rng| {
        let q = 1 + i % 4;
        let rho = random_density(q, rng, &ctx.cfg)?;
        entropy_rows(ctx, i, seed, &rho, format!("qubits={q}"))
    })
}

fn entropy_file(ctx: &Ctx, path: &Path) -> Result<Vec<Row>> {
    let m: MatrixJson = load(path)?;
    let o = origin(path);
    let rho = m.to_density(&ctx.cfg).map_err(invalid(&o))?;
    entropy_rows(ctx, 0, ctx.seed, &rho, format!("file={o}"))
}

// Thermal states.

fn thermal_rows(ctx: &Ctx, case: usize, seed: u64, h: &HamiltonianSpec, label: &str) -> Result<Vec<Row>> {
    ctx.betas(&THERMAL_BETAS)
        .into_iter()
        .map(|beta| {
            let report = thermal_min_entropy(h, beta, &ctx.cfg)?;
            let direct = min_entropy(&gibbs_state(h, beta, &ctx.cfg)?, &ctx.cfg)?;
            Ok(Row::new(
                case,
                seed,
                "min_entropy_eq_log2_partition",
                format!("{label} beta={beta}"),
                direct,
                report.log2_partition_function,
                Relation::Eq,
                ctx.tol(1e-9),
            )
            .with_detail(report))
        })
        .collect()
}

fn thermal_sweep(ctx: &Ctx) -> Result<Vec<Row>> {
    ctx.sweep(THERMAL, ctx.trials, |i, seed, rng| {
        let q = 1 + i % 4;
        let h = random_hamiltonian(q, rng)?;
        thermal_rows(ctx, i, seed, &h, &format!("qubits={q} terms={}", h.terms().len()))
    })
}

fn thermal_file(ctx: &Ctx, path: &Path) -> Result<Vec<Row>> {
    let h: HamiltonianJson = load(path)?;
    let o = origin(path);
    let h = h.to_spec(&ctx.cfg).map_err(invalid(&o))?;
    thermal_rows(ctx, 0, ctx.seed, &h, &format!("file={o}"))
}

// Cluster-state Gibbs states.

fn cluster_rows(ctx: &Ctx, case: usize, seed: u64, g: &ClusterGraph) -> Result<Vec<Row>> {
    let h = cluster_hamiltonian(g);
    ctx.betas(&CLUSTER_BETAS)
        .into_iter()
        .map(|beta| {
            let brute = min_entropy(&gibbs_state(&h, beta, &ctx.cfg)?, &ctx.cfg)?;
            let closed = thermal_cluster_min_entropy_closed_form(g.vertices(), beta)?;
            let tol = ctx.tol(if beta == 0.0 { 1e-10 } else { 1e-8 });
            Ok(Row::new(
                case,
                seed,
                "min_entropy_eq_closed_form",
                format!("graph={} beta={beta}", g.label()),
                brute,
                closed,
                Relation::Eq,
                tol,
            ))
        })
        .collect()
}

fn cluster_sweep(ctx: &Ctx) -> Result<Vec<Row>> {
    let graphs = (1..=5).map(connected_graphs).collect::<mixedq_core::Result<Vec<_>>>()?.concat();
    ctx.sweep(CLUSTER, graphs.len(), |i, seed, _| cluster_rows(ctx, i, seed, &graphs[i]))
}

fn cluster_file(ctx: &Ctx, path: &Path) -> Result<Vec<Row>> {
    let g: GraphJson = load(path)?;
    let g = g.to_graph(&ctx.cfg).map_err(invalid(&origin(path)))?;
    cluster_rows(ctx, 0, ctx.seed, &g)
}

// MBQC.

fn mbqc_row(
    ctx: &Ctx,
    case: usize,
    seed: u64,
    sigma: &DensityOperator,
    part: &ResourcePartition,
    povm: &Povm,
    sols: &mixedq_core::mbqc::SolutionFamily,
    inputs: String,
) -> Result<Row> {
    let p = mbqc_success_probability(sigma, part, povm, sols)?;
    let size = sols.solution_size() as u64;
    let bound = success_upper_bound(sigma, part, size, &ctx.cfg)?;
    // Pure states can come back a rounding error above 1.
    let lambda1 = spectral_decompose(sigma, &ctx.cfg)?.largest().min(1.0);
    let min_size = solution_count_lower_bound(lambda1, part.total_qubits(), part.output_len())?;
    Ok(Row::new(case, seed, "success_le_eigenvalue_bound", inputs, p, bound, Relation::Le, ctx.tol(1e-9)).with_detail(
        json!({
            "lambda1": lambda1,
            "solution_size": size,
            "solution_count_lower_bound": min_size,
        }),
    ))
}

fn mbqc_sweep(ctx: &Ctx) -> Result<Vec<Row>> {
    ctx.sweep(MBQC, ctx.trials, |i, seed, rng| {
        let total = 2 + i % 4;
        let n = rng.random_range(1..=total);
        let sigma = random_density(total, rng, &ctx.cfg)?;
        let part = ResourcePartition::new(total, random_output_region(total, n, rng))?;
        let povm = random_povm(total - n, rng.random_range(2..=4), rng, &ctx.cfg)?;
        let size = rng.random_range(1..=1usize << n);
        let sols = random_solution_family(n, povm.len(), size, rng)?;
        let inputs = format!("N={total} O={:?} outcomes={} |S|={size}", part.output_qubits(), povm.len());
        Ok(vec![mbqc_row(ctx, i, seed, &sigma, &part, &povm, &sols, inputs)?])
    })
}

fn mbqc_file(ctx: &Ctx, path: &Path) -> Result<Vec<Row>> {
    let inst: MbqcInstanceJson = load(path)?;
    let o = origin(path);
    let inst = inst.to_instance(&ctx.cfg).map_err(invalid(&o))?;
    let row =
        mbqc_row(ctx, 0, ctx.seed, &inst.state, &inst.partition, &inst.povm, &inst.solutions, format!("file={o}"))?;
    Ok(vec![row])
}

// One clean qubit with k readout qubits.

fn random_circuit(ctx: &Ctx, rng: &mut ChaCha20Rng, n: usize, k: usize) -> Result<(Dqc1kCircuit, String)> {
    if rng.random_bool(0.5) {
        let u = random_unitary(n + 1, rng, &ctx.cfg)?;
        Ok((Dqc1kCircuit::from_unitary(n, k, u)?, format!("n={n} k={k} haar")))
    } else {
        let len = rng.random_range(1..=16);
        let gates = random_gates(n + 1, len, rng);
        Ok((Dqc1kCircuit::from_gates(n, k, &gates, &ctx.cfg)?, format!("n={n} k={k} gates={len}")))
    }
}

fn dqc1k_rows(
    ctx: &Ctx,
    case: usize,
    seed: u64,
    c: &Dqc1kCircuit,
    inputs: &str,
    random_set: Option<&mut ChaCha20Rng>,
) -> Result<Vec<Row>> {
    let d = run_dqc1k(c, &ctx.cfg)?;
    let k = c.k();
    let cap = 2f64.powi(1 - k as i32);
    let total: f64 = d.probabilities().iter().sum();
    let max = d.probabilities().iter().copied().fold(0.0, f64::max);
    let mut rows = vec![
        Row::new(case, seed, "probabilities_sum_to_one", inputs.into(), total, 1.0, Relation::Eq, ctx.tol(1e-9)),
        Row::new(case, seed, "max_outcome_le_cap", inputs.into(), max, cap, Relation::Le, ctx.tol(1e-9)),
    ];
    match random_set {
        Some(rng) => {
            let size = rng.random_range(1..=1usize << k);
            let set = random_subset(1 << k, size, rng);
            rows.push(Row::new(
                case,
                seed,
                "solution_mass_le_bound",
                format!("{inputs} |S|={size}"),
                d.mass(&set),
                size as f64 * cap,
                Relation::Le,
                ctx.tol(1e-9),
            ));
        }
        None => rows[0] = rows[0].clone().with_detail(distribution_json(&d)),
    }
    Ok(rows)
}

fn dqc1k_run_sweep(ctx: &Ctx) -> Result<Vec<Row>> {
    ctx.sweep(DQC1K_RUN, ctx.trials, |i, seed, rng| {
        let n = 1 + i % 4;
        let k = rng.random_range(1..=n + 1);
        let (c, inputs) = random_circuit(ctx, rng, n, k)?;
        dqc1k_rows(ctx, i, seed, &c, &inputs, Some(rng))
    })
}

fn load_circuit(ctx: &Ctx, path: &Path) -> Result<Dqc1kCircuit> {
    let c: CircuitJson = load(path)?;
    c.to_circuit(&ctx.cfg).map_err(invalid(&origin(path)))
}

fn dqc1k_run_file(ctx: &Ctx, path: &Path) -> Result<Vec<Row>> {
    let c = load_circuit(ctx, path)?;
    dqc1k_rows(ctx, 0, ctx.seed, &c, &format!("file={}", origin(path)), None)
}

fn spectrum_row(ctx: &Ctx, case: usize, seed: u64, c: &Dqc1kCircuit, inputs: String) -> Result<Row> {
    let v = dqc1k_spectrum_check(c, &ctx.cfg)?;
    Ok(Row::new(case, seed, "spectrum_flat", inputs, v.max_deviation, 0.0, Relation::Eq, ctx.tol(1e-9)))
}

fn dqc1k_verify_sweep(ctx: &Ctx) -> Result<Vec<Row>> {
    ctx.sweep(DQC1K_VERIFY, ctx.trials, |i, seed, rng| {
        let n = 1 + i % 4;
        let k = rng.random_range(1..=n + 1);
        let (c, inputs) = random_circuit(ctx, rng, n, k)?;
        Ok(vec![spectrum_row(ctx, i, seed, &c, inputs)?])
    })
}

fn dqc1k_verify_file(ctx: &Ctx, path: &Path) -> Result<Vec<Row>> {
    let c = load_circuit(ctx, path)?;
    Ok(vec![spectrum_row(ctx, 0, ctx.seed, &c, format!("file={}", origin(path)))?])
}

/// Per-circuit failure bounds of parallel runs, at random parameters with
/// `p_i <= 2 |S_i| / 2^k`.
fn appendix_sweep(ctx: &Ctx) -> Result<Vec<Row>> {
    ctx.sweep(APPENDIX, ctx.trials.max(APPENDIX_TUPLES), |i, seed, rng| {
        let n = rng.random_range(1..=6usize);
        let k = rng.random_range(1..=n + 1);
        let size = rng.random_range(1..=1u64 << k);
        let lambda1 = (-(n as f64 + 1.0) * rng.random::<f64>()).exp2();
        let v = rng.random_range(1..=64u64);
        let cap = (2.0 * size as f64 / (1u64 << k) as f64).min(1.0);
        let p = cap * rng.random::<f64>();
        let spec = ParallelDqc1kSpec::new(v, vec![p], vec![size])?;
        let b = parallel_failure_bound(&spec, 0, lambda1, n, k)?;
        Ok(vec![Row::new(
            i,
            seed,
            "parallel_exact_failure_le_exp_bound",
            format!("n={n} k={k} |S|={size} lambda1={lambda1} v={v} p={p}"),
            b.exact_failure,
            b.exp_failure,
            Relation::Le,
            ctx.tol(1e-12),
        )
        .with_detail(b)])
    })
}

// Classical random search.

fn three_sigma(p: f64, runs: usize) -> f64 {
    3.0 * (p * (1.0 - p) / runs as f64).sqrt()
}

fn planted_oracle(bits: u32, set: &[u64]) -> Result<VerifierOracle<impl Fn(u64) -> bool + Sync + '_>> {
    Ok(VerifierOracle::new(bits, move |s| set.binary_search(&s).is_ok())?)
}

/// Counts misses of `runs` searches seeded from `seed`.
fn count_failures(bits: u32, set: &[u64], t: u64, seed: u64, runs: usize) -> Result<usize> {
    let oracle = planted_oracle(bits, set)?;
    let mut failures = 0;
    for j in 0..runs {
        if random_search(&oracle, t, derive_seed(seed, j as u64))?.found.is_none() {
            failures += 1;
        }
    }
    Ok(failures)
}

fn classical_sweep(ctx: &Ctx) -> Result<Vec<Row>> {
    let runs = ctx.trials.max(SEARCH_RUNS);
    let problems: Vec<(u32, u32)> = (8..=12).flat_map(|n| (0..=3).map(move |d| (n, d))).collect();
    let mut rows = ctx.sweep(CLASSICAL, problems.len(), |i, seed, rng| {
        let (n, delta) = problems[i];
        let size = 1u64 << (n - delta - 1);
        let set = random_subset(1 << n, size as usize, rng);
        let t = repetitions_for_failure(delta as f64, SEARCH_TARGET)?;
        let b = failure_probability_bounds(size, n, t, delta as f64)?;
        let failures = count_failures(n, &set, t, seed, runs)?;
        let inputs = format!("n={n} delta={delta} |S|={size} t={t} runs={runs}");
        let detail = json!({ "failures": failures, "runs": runs, "t": t, "exact": b.exact, "exp_bound": b.exp_bound });
        Ok(vec![
            Row::new(
                i,
                seed,
                "exact_miss_le_exp_bound",
                inputs.clone(),
                b.exact,
                b.exp_bound,
                Relation::Le,
                ctx.tol(0.0),
            ),
            Row::new(
                i,
                seed,
                "failure_rate_le_target",
                inputs,
                failures as f64 / runs as f64,
                SEARCH_TARGET + three_sigma(SEARCH_TARGET, runs),
                Relation::Le,
                ctx.tol(0.0),
            )
            .with_detail(detail),
        ])
    })?;
    // |S| = 2^{k-2}: the smallest set compatible with a k-qubit readout.
    let cases: Vec<(u32, u64)> = (3..=7).flat_map(|k| [2u64, 5, 10].map(move |t| (k, t))).collect();
    let offset = rows.last().map_or(0, |r| r.case + 1);
    rows.extend(ctx.sweep(CLASSICAL_DQC1K, cases.len(), |i, seed, rng| {
        let (k, t) = cases[i];
        let size = 1u64 << (k - 2);
        let set = random_subset(1 << k, size as usize, rng);
        let failures = count_failures(k, &set, t, seed, runs)?;
        let bound = dqc1k_failure_bound(t);
        Ok(vec![Row::new(
            offset + i,
            seed,
            "dqc1k_failure_rate_le_three_quarters_pow_t",
            format!("k={k} |S|={size} t={t} runs={runs}"),
            failures as f64 / runs as f64,
            bound + three_sigma(bound, runs),
            Relation::Le,
            ctx.tol(0.0),
        )
        .with_detail(json!({ "failures": failures, "runs": runs, "t": t }))])
    })?);
    Ok(rows)
}

/// Searches a planted problem once per trial. `delta` is chosen so that
/// `2^{-delta-1}` equals the solution density, and `t` targets a 5% miss rate.
fn classical_file(ctx: &Ctx, path: &Path) -> Result<Vec<Row>> {
    let p: PlantedProblemJson = load(path)?;
    let o = origin(path);
    let set = p.solution_set().map_err(invalid(&o))?;
    let n = p.n;
    let size = set.len() as u64;
    let delta = if size == 0 { (n - 1) as f64 } else { (n as f64 - (size as f64).log2() - 1.0).max(0.0) };
    let t = repetitions_for_failure(delta, SEARCH_TARGET)?;
    let oracle = planted_oracle(n, &set)?;
    let mut rows = Vec::with_capacity(ctx.trials + 1);
    let mut failures = 0;
    for j in 0..ctx.trials {
        let seed = derive_seed(ctx.seed, j as u64);
        let out = random_search(&oracle, t, seed)?;
        if out.found.is_none() {
            failures += 1;
        }
        rows.push(
            Row::new(
                j,
                seed,
                "attempts_le_t",
                format!("file={o} n={n} |S|={size}"),
                out.attempts_used as f64,
                t as f64,
                Relation::Le,
                ctx.tol(0.0),
            )
            .with_search(SearchRecord { t, found: out.found, attempts_used: out.attempts_used }),
        );
    }
    // An empty set can never be found; that is a certain miss, not a violation.
    let reference = if size == 0 { 1.0 } else { SEARCH_TARGET };
    rows.push(Row::new(
        ctx.trials,
        ctx.seed,
        "failure_rate_le_target",
        format!("file={o} n={n} |S|={size} delta={delta} t={t} runs={}", ctx.trials),
        failures as f64 / ctx.trials as f64,
        reference + three_sigma(reference, ctx.trials),
        Relation::Le,
        ctx.tol(0.0),
    ));
    Ok(rows)
}

// Mutual information.

fn mutual_rows(ctx: &Ctx, case: usize, seed: u64, m: &BipartiteModel, inputs: String, dqc1: bool) -> Result<Vec<Row>> {
    let r = mutual_information(m, &ctx.cfg)?;
    let joint = bipartite_output_state(m, &ctx.cfg)?;
    let na = m.alice_qubits();
    let alice: Vec<usize> = (0..na).collect();
    let bob: Vec<usize> = (na..na + m.bob_qubits()).collect();
    let s = |rho: &DensityOperator| von_neumann_entropy(rho, &ctx.cfg);
    let chain = s(&partial_trace(&joint, &alice)?)? + s(&partial_trace(&joint, &bob)?)? - s(&joint)?;
    let tol = ctx.tol(1e-8);
    let mut rows = vec![
        Row::new(
            case,
            seed,
            "mutual_info_le_bound",
            inputs.clone(),
            r.mutual_information_bits,
            r.bound_bits,
            Relation::Le,
            tol,
        ),
        Row::new(
            case,
            seed,
            "mutual_info_eq_entropy_chain",
            inputs.clone(),
            r.mutual_information_bits,
            chain,
            Relation::Eq,
            tol,
        ),
    ];
    if dqc1 {
        rows.push(Row::new(
            case,
            seed,
            "mutual_info_le_one",
            inputs,
            r.mutual_information_bits,
            1.0,
            Relation::Le,
            tol,
        ));
    }
    rows[0] = rows[0].clone().with_detail(r);
    Ok(rows)
}

fn random_unitaries(ctx: &Ctx, rng: &mut ChaCha20Rng, count: usize, qubits: usize) -> Result<Vec<UnitaryOperator>> {
    Ok((0..count).map(|_| random_unitary(qubits, rng, &ctx.cfg)).collect::<mixedq_core::Result<Vec<_>>>()?)
}

fn mutual_sweep(ctx: &Ctx) -> Result<Vec<Row>> {
    let mut rows = ctx.sweep(MUTUAL, ctx.trials, |i, seed, rng| {
        let inputs = 1 + i % 4;
        let bob = 1 + (i / 4) % 3;
        let sigma = random_density(bob, rng, &ctx.cfg)?;
        let us = random_unitaries(ctx, rng, inputs, bob)?;
        let m = BipartiteModel::new(random_distribution(inputs, rng), us, sigma, &ctx.cfg)?;
        mutual_rows(ctx, i, seed, &m, format!("inputs={inputs} bob_qubits={bob}"), false)
    })?;
    let offset = rows.last().map_or(0, |r| r.case + 1);
    rows.extend(ctx.sweep(MUTUAL_DQC1, DQC1_MODELS, |i, seed, rng| {
        let n = 1 + i % 3;
        let inputs = 2 + i % 3;
        let us = random_unitaries(ctx, rng, inputs, n + 1)?;
        let m = BipartiteModel::new(random_distribution(inputs, rng), us, dqc1k_input(n, &ctx.cfg)?, &ctx.cfg)?;
        mutual_rows(ctx, offset + i, seed, &m, format!("inputs={inputs} clean_qubit_n={n}"), true)
    })?);
    Ok(rows)
}

fn mutual_file(ctx: &Ctx, path: &Path) -> Result<Vec<Row>> {
    let m: ModelJson = load(path)?;
    let o = origin(path);
    let m = m.to_model(&ctx.cfg).map_err(invalid(&o))?;
    mutual_rows(ctx, 0, ctx.seed, &m, format!("file={o}"), false)
}

//! Command-line front end. Every subcommand reads/writes the JSON schemas
//! of the library types, emits its report to stdout (or `--out`), and is
//! deterministic given its flags: randomness enters only through explicit
//! `--seed` values (default 0).
//!
//! Exit codes: 0 = success/pass; 1 = a computation that completed but
//! reported failure (verification fails, a `--check-trace` or `--expect`
//! mismatch, a search that exhausted its restarts); 2 = usage or input
//! errors, with a one-line diagnostic on stderr.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::definetti::{posterior_concentration, Prior, TomographyTrace};
use crate::ks::{
    cega_parity_check, ks_colorable_with_budget, orthogonality_graph, peres_rays, CEGATable,
    ColoringResult, ParityRecord, Ray, RaySet, DEFAULT_NODE_BUDGET,
};
use crate::linalg::ComplexMatrix;
use crate::prob::{
    born_urgleichung, conditional_matrix, probs_to_state, state_to_probs, ProbVector,
    UrgleichungResult,
};
use crate::protocols::{coin_teleport, parse_rational, CoinProtocolResult};
use crate::search::{search_fiducial, SearchConfig, SearchResult};
use crate::sic::{
    builtin_fiducial, dimension_tower_class, orbit, verify_sic, Fiducial, VerificationReport,
};
use crate::{Error, Result};

/// Tolerance used by `born --check-trace`.
pub const TRACE_CHECK_TOL: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(
    name = "sicprob",
    version,
    about = "SIC reference measurements, the Born rule as probability arithmetic, \
             exact noncolorability proofs, and Bayesian tomography simulations"
)]
pub struct Cli {
    /// Pretty-print the JSON payload.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Write the JSON payload to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Build the group orbit of a fiducial and verify the SIC conditions.
    Verify {
        /// Use the built-in fiducial for this dimension (2, 3, or 8).
        #[arg(long)]
        builtin: Option<usize>,
        /// Read a fiducial record (or a catalog array of records) from a file.
        #[arg(long)]
        fiducial: Option<PathBuf>,
        /// Select one record from a catalog file by label.
        #[arg(long)]
        label: Option<String>,
        /// Verification tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Random-restart frame-potential minimization for a new fiducial.
    Search {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        /// Accept a restart once its frame-potential residual is below this.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Worker threads for parallel restarts (default: rayon's choice).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Convert a density matrix to reference probabilities or back.
    Convert {
        /// State file (ComplexMatrix JSON) to turn into probabilities.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Probability file (ProbVector JSON) to turn into a state.
        #[arg(long)]
        probs: Option<PathBuf>,
        /// Fiducial record (or catalog) defining the reference measurement.
        #[arg(long)]
        sic: PathBuf,
        #[arg(long)]
        label: Option<String>,
    },
    /// Evaluate the probability-form Born rule for a ground measurement.
    Born {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        sic: PathBuf,
        #[arg(long)]
        label: Option<String>,
        /// Ground POVM file: JSON array of ComplexMatrix records.
        #[arg(long)]
        ground: PathBuf,
        /// Also evaluate tr(ρDⱼ) directly and fail (exit 1) on mismatch.
        #[arg(long)]
        check_trace: bool,
    },
    /// Exact Kochen–Specker verdicts.
    Ks {
        /// Built-in construction: "peres" or "cega".
        #[arg(long)]
        set: Option<BuiltinKs>,
        /// Custom ray set: JSON list of [[a,b],[a,b],[a,b]] triples.
        #[arg(long)]
        rays: Option<PathBuf>,
        /// Node cap for the coloring search.
        #[arg(long)]
        budget: Option<u64>,
        /// Fail (exit 1) unless the verdict matches.
        #[arg(long)]
        expect: Option<Expectation>,
    },
    /// Simulate reference-measurement tomography with Bayesian updating.
    Tomo {
        /// True state file (ComplexMatrix JSON) generating the data.
        #[arg(long = "true")]
        true_state: PathBuf,
        /// Prior file: {"candidates": [...], "weights": [...]}.
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep only every k-th entry of the posterior history.
        #[arg(long)]
        thin: Option<usize>,
    },
    /// Narrative demonstrations.
    Demo {
        #[command(subcommand)]
        which: DemoCmd,
    },
    /// Squarefree dimension-tower classes.
    Tower {
        /// Comma-separated dimensions, e.g. 4,8,19,48.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum DemoCmd {
    /// The classical coin-box teleportation protocol.
    Teleport {
        /// Heads probability as an exact rational, e.g. 3/10.
        #[arg(long)]
        p: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuiltinKs {
    Peres,
    Cega,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expectation {
    Colorable,
    Noncolorable,
    Contradiction,
    Consistent,
}

/// A labeled verification entry, used when verifying a whole catalog file.
#[derive(Serialize)]
struct LabeledReport {
    label: String,
    report: VerificationReport,
}

/// Sidecar emitted next to `search --out` fiducials.
#[derive(Serialize)]
struct SearchSidecar {
    residual: f64,
    iterations: usize,
    potential: f64,
}

#[derive(Serialize)]
struct TraceCheck {
    max_deviation: f64,
    pass: bool,
    tolerance: f64,
}

#[derive(Serialize)]
struct BornReport {
    sky_probs: ProbVector,
    conditional: crate::prob::ConditionalMatrix,
    born: UrgleichungResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace_check: Option<TraceCheck>,
}

#[derive(Serialize)]
struct KsReport {
    construction: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    colorable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes_explored: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    assignment: Option<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rays: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bases: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    contradiction: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    parity: Option<ParityRecord>,
}

#[derive(Serialize)]
struct TowerEntry {
    dim: u64,
    class: u64,
}

/// Thinned tomography history: `steps[i]` is the original step index of
/// `posterior_history[i]`.
#[derive(Serialize)]
struct ThinnedTrace {
    outcomes: Vec<usize>,
    seed: u64,
    thin: usize,
    steps: Vec<usize>,
    posterior_history: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct TeleportReport {
    #[serde(flatten)]
    result: CoinProtocolResult,
    bob_matches_input: bool,
}

/// Entry point used by the binary: parses std::env::args (clap itself exits
/// with code 2 on usage errors) and maps library errors to exit 2 with a
/// one-line stderr diagnostic.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

struct Emitter {
    pretty: bool,
    out: Option<PathBuf>,
}

impl Emitter {
    fn emit<T: Serialize>(&self, value: &T) -> Result<()> {
        let text = self.render(value)?;
        match &self.out {
            Some(path) => fs::write(path, text + "\n")?,
            None => println!("{text}"),
        }
        Ok(())
    }

    fn render<T: Serialize>(&self, value: &T) -> Result<String> {
        Ok(if self.pretty {
            serde_json::to_string_pretty(value)?
        } else {
            serde_json::to_string(value)?
        })
    }
}

/// Runs one parsed command, returning the process exit code.
pub fn execute(cli: Cli) -> Result<i32> {
    let emitter = Emitter { pretty: cli.pretty, out: cli.out.clone() };
    match cli.cmd {
        Cmd::Verify { builtin, fiducial, label, tol } => {
            run_verify(&emitter, builtin, fiducial.as_deref(), label.as_deref(), tol)
        }
        Cmd::Search { dim, seed, restarts, tol, jobs } => {
            run_search(&emitter, dim, seed, restarts, tol, jobs)
        }
        Cmd::Convert { state, probs, sic, label } => {
            run_convert(&emitter, state.as_deref(), probs.as_deref(), &sic, label.as_deref())
        }
        Cmd::Born { state, sic, label, ground, check_trace } => {
            run_born(&emitter, &state, &sic, label.as_deref(), &ground, check_trace)
        }
        Cmd::Ks { set, rays, budget, expect } => run_ks(&emitter, set, rays.as_deref(), budget, expect),
        Cmd::Tomo { true_state, candidates, n, seed, thin } => {
            run_tomo(&emitter, &true_state, &candidates, n, seed, thin)
        }
        Cmd::Demo { which } => match which {
            DemoCmd::Teleport { p } => run_teleport(&emitter, &p),
        },
        Cmd::Tower { dims } => run_tower(&emitter, &dims),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Loads one or many fiducials: the file may hold a single record or a
/// catalog array; `label` selects from a catalog.
fn load_fiducials(path: &Path, label: Option<&str>) -> Result<Vec<Fiducial>> {
    let text = fs::read_to_string(path)?;
    let all: Vec<Fiducial> = match serde_json::from_str::<Fiducial>(&text) {
        Ok(single) => vec![single],
        Err(_) => serde_json::from_str(&text)?,
    };
    let selected: Vec<Fiducial> = match label {
        Some(l) => all.into_iter().filter(|f| f.label() == l).collect(),
        None => all,
    };
    if selected.is_empty() {
        return Err(Error::OutOfRange {
            reason: match label {
                Some(l) => format!("no fiducial labeled {l:?} in {}", path.display()),
                None => format!("no fiducial records in {}", path.display()),
            },
        });
    }
    Ok(selected)
}

/// Loads exactly one fiducial and builds its orbit.
fn load_sic(path: &Path, label: Option<&str>) -> Result<crate::sic::Sic> {
    let fids = load_fiducials(path, label)?;
    if fids.len() != 1 {
        return Err(Error::OutOfRange {
            reason: format!(
                "{} holds {} fiducial records; select one with --label",
                path.display(),
                fids.len()
            ),
        });
    }
    orbit(&fids[0])
}

fn run_verify(
    emitter: &Emitter,
    builtin: Option<usize>,
    fiducial: Option<&Path>,
    label: Option<&str>,
    tol: f64,
) -> Result<i32> {
    let fids = match (builtin, fiducial) {
        (Some(d), None) => {
            if label.is_some() {
                return Err(Error::OutOfRange {
                    reason: "--label only applies to --fiducial files".into(),
                });
            }
            vec![builtin_fiducial(d)?]
        }
        (None, Some(path)) => load_fiducials(path, label)?,
        _ => {
            return Err(Error::OutOfRange {
                reason: "give exactly one of --builtin or --fiducial".into(),
            })
        }
    };
    let reports: Vec<LabeledReport> = fids
        .iter()
        .map(|f| {
            Ok(LabeledReport {
                label: f.label().to_string(),
                report: verify_sic(&orbit(f)?, tol),
            })
        })
        .collect::<Result<_>>()?;
    let all_pass = reports.iter().all(|r| r.report.pass);
    if reports.len() == 1 {
        emitter.emit(&reports[0].report)?;
    } else {
        emitter.emit(&reports)?;
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn run_search(
    emitter: &Emitter,
    dim: usize,
    seed: u64,
    restarts: usize,
    tol: f64,
    jobs: Option<usize>,
) -> Result<i32> {
    let config = SearchConfig { tolerance: tol, seed, restarts, ..SearchConfig::new(dim) };
    let run = || search_fiducial(&config);
    let outcome = match jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::OutOfRange { reason: format!("cannot build thread pool: {e}") })?;
            pool.install(run)
        }
        None => run(),
    };
    match outcome {
        Ok(result) => {
            emit_search(emitter, &result)?;
            Ok(0)
        }
        Err(Error::Exhausted { restarts, residual, best }) => {
            eprintln!(
                "search exhausted {restarts} restarts; best residual {residual:.3e} \
                 above tolerance {tol:.3e}"
            );
            emit_search(emitter, &best)?;
            Ok(1)
        }
        Err(e) => Err(e),
    }
}

/// With `--out`, writes the fiducial record to the given path and a
/// {residual, iterations, potential} sidecar next to it; otherwise prints
/// the full search result.
fn emit_search(emitter: &Emitter, result: &SearchResult) -> Result<()> {
    match &emitter.out {
        Some(path) => {
            let fid_emitter = Emitter { pretty: emitter.pretty, out: Some(path.clone()) };
            fid_emitter.emit(&result.fiducial)?;
            let sidecar = SearchSidecar {
                residual: result.residual,
                iterations: result.iterations_used,
                potential: result.potential_value,
            };
            let sidecar_path = path.with_extension("report.json");
            let side_emitter = Emitter { pretty: emitter.pretty, out: Some(sidecar_path) };
            side_emitter.emit(&sidecar)
        }
        None => emitter.emit(result),
    }
}

fn run_convert(
    emitter: &Emitter,
    state: Option<&Path>,
    probs: Option<&Path>,
    sic_path: &Path,
    label: Option<&str>,
) -> Result<i32> {
    let sic = load_sic(sic_path, label)?;
    match (state, probs) {
        (Some(state_path), None) => {
            let rho: ComplexMatrix = read_json(state_path)?;
            emitter.emit(&state_to_probs(&rho, &sic)?)?;
        }
        (None, Some(probs_path)) => {
            let p: ProbVector = read_json(probs_path)?;
            emitter.emit(&probs_to_state(&p, &sic)?)?;
        }
        _ => {
            return Err(Error::OutOfRange {
                reason: "give exactly one of --state or --probs".into(),
            })
        }
    }
    Ok(0)
}

fn run_born(
    emitter: &Emitter,
    state_path: &Path,
    sic_path: &Path,
    label: Option<&str>,
    ground_path: &Path,
    check_trace: bool,
) -> Result<i32> {
    let sic = load_sic(sic_path, label)?;
    let rho: ComplexMatrix = read_json(state_path)?;
    let ground: Vec<ComplexMatrix> = read_json(ground_path)?;
    let sky_probs = state_to_probs(&rho, &sic)?;
    let conditional = conditional_matrix(&ground, &sic)?;
    let born = born_urgleichung(&sky_probs, &conditional, sic.dim())?;
    let trace_check = if check_trace {
        let mut max_deviation: f64 = 0.0;
        for (j, dj) in ground.iter().enumerate() {
            let direct = rho.mul(dj)?.trace().re;
            max_deviation = max_deviation.max((born.probs.get(j) - direct).abs());
        }
        Some(TraceCheck {
            max_deviation,
            pass: max_deviation <= TRACE_CHECK_TOL,
            tolerance: TRACE_CHECK_TOL,
        })
    } else {
        None
    };
    let failed = trace_check.as_ref().is_some_and(|c| !c.pass);
    emitter.emit(&BornReport { sky_probs, conditional, born, trace_check })?;
    Ok(if failed { 1 } else { 0 })
}

fn run_ks(
    emitter: &Emitter,
    set: Option<BuiltinKs>,
    rays_path: Option<&Path>,
    budget: Option<u64>,
    expect: Option<Expectation>,
) -> Result<i32> {
    let budget = budget.unwrap_or(DEFAULT_NODE_BUDGET);
    let (report, ok) = match (set, rays_path) {
        (Some(BuiltinKs::Cega), None) => {
            let parity = cega_parity_check(&CEGATable::standard());
            let contradiction = parity.contradiction;
            let report = KsReport {
                construction: "cega".into(),
                colorable: None,
                nodes_explored: None,
                assignment: None,
                rays: None,
                edges: None,
                bases: None,
                contradiction: Some(contradiction),
                parity: Some(parity),
            };
            let ok = match expect {
                None => true,
                Some(Expectation::Contradiction) => contradiction,
                Some(Expectation::Consistent) => !contradiction,
                Some(_) => {
                    return Err(Error::OutOfRange {
                        reason: "--expect for cega must be contradiction or consistent".into(),
                    })
                }
            };
            (report, ok)
        }
        (set, rays_path) => {
            let (name, ray_set) = match (set, rays_path) {
                (Some(BuiltinKs::Peres), None) => ("peres".to_string(), peres_rays()),
                (None, Some(path)) => {
                    let rays: Vec<Ray> = read_json(path)?;
                    ("custom".to_string(), RaySet::from_rays(rays)?)
                }
                _ => {
                    return Err(Error::OutOfRange {
                        reason: "give exactly one of --set or --rays".into(),
                    })
                }
            };
            let graph = orthogonality_graph(&ray_set);
            let ColoringResult { colorable, assignment, nodes_explored } =
                ks_colorable_with_budget(&ray_set, budget)?;
            let report = KsReport {
                construction: name,
                colorable: Some(colorable),
                nodes_explored: Some(nodes_explored),
                assignment,
                rays: Some(ray_set.len()),
                edges: Some(graph.edges.len()),
                bases: Some(graph.bases.len()),
                contradiction: None,
                parity: None,
            };
            let ok = match expect {
                None => true,
                Some(Expectation::Colorable) => colorable,
                Some(Expectation::Noncolorable) => !colorable,
                Some(_) => {
                    return Err(Error::OutOfRange {
                        reason: "--expect for a ray set must be colorable or noncolorable".into(),
                    })
                }
            };
            (report, ok)
        }
    };
    emitter.emit(&report)?;
    Ok(if ok { 0 } else { 1 })
}

fn run_tomo(
    emitter: &Emitter,
    true_path: &Path,
    prior_path: &Path,
    n: usize,
    seed: u64,
    thin: Option<usize>,
) -> Result<i32> {
    let true_state: ComplexMatrix = read_json(true_path)?;
    let prior: Prior = read_json(prior_path)?;
    let sic = orbit(&builtin_fiducial(prior.dim())?)?;
    let trace = posterior_concentration(&prior, &true_state, &sic, n, seed)?;
    match thin {
        None => emitter.emit(&trace)?,
        Some(0) => {
            return Err(Error::OutOfRange { reason: "--thin must be at least 1".into() })
        }
        Some(k) => emitter.emit(&thin_trace(trace, k))?,
    }
    Ok(0)
}

fn thin_trace(trace: TomographyTrace, k: usize) -> ThinnedTrace {
    let last = trace.posterior_history.len() - 1;
    let mut steps = Vec::new();
    let mut posterior_history = Vec::new();
    for (i, weights) in trace.posterior_history.into_iter().enumerate() {
        if i % k == 0 || i == last {
            steps.push(i);
            posterior_history.push(weights);
        }
    }
    ThinnedTrace { outcomes: trace.outcomes, seed: trace.seed, thin: k, steps, posterior_history }
}

fn run_teleport(emitter: &Emitter, p: &str) -> Result<i32> {
    let p = parse_rational(p)?;
    let result = coin_teleport(p)?;
    let bob_matches_input = result.bob_heads_prob == result.input_p;
    emitter.emit(&TeleportReport { result, bob_matches_input })?;
    Ok(if bob_matches_input { 0 } else { 1 })
}

fn run_tower(emitter: &Emitter, dims: &[u64]) -> Result<i32> {
    let entries = dims
        .iter()
        .map(|&dim| Ok(TowerEntry { dim, class: dimension_tower_class(dim)? }))
        .collect::<Result<Vec<_>>>()?;
    emitter.emit(&entries)?;
    Ok(0)
}

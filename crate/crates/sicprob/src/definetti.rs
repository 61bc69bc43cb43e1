//! Finite-mixture exchangeable states, simulated reference-measurement
//! tomography, and Bayesian updating: a desk-scale model of how an agent
//! with a finite candidate set for "the unknown state" sharpens her prior
//! by measuring one system after another.
//!
//! The continuous mixing measure of the exchangeability representation is
//! modeled as a finite candidate set ρ_k with weights w_k; likelihoods
//! multiply across i.i.d. sky outcomes, and the update is carried out in
//! log space so 10⁴-step products cannot underflow.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian_eigenvalues, tensor, ComplexMatrix, DIM_CAP};
use crate::prob::{check_density, state_to_probs, ProbVector};
use crate::sic::Sic;
use crate::{Error, Result};

/// Weight-vector slack (nonnegative, sum within 1e−12 of 1).
pub const WEIGHT_TOL: f64 = 1e-12;
/// Probabilities below this floor are treated as exactly zero when used as
/// likelihoods: an outcome this unlikely under a candidate marks the
/// candidate impossible, and if that happens to every candidate at once the
/// update reports [`Error::ZeroEvidence`].
pub const ZERO_LIKELIHOOD_FLOOR: f64 = 1e-12;

/// A finite prior over candidate density matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawPrior", into = "RawPrior")]
pub struct Prior {
    candidates: Vec<ComplexMatrix>,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawPrior {
    candidates: Vec<ComplexMatrix>,
    weights: Vec<f64>,
}

impl TryFrom<RawPrior> for Prior {
    type Error = Error;
    fn try_from(raw: RawPrior) -> Result<Self> {
        Prior::new(raw.candidates, raw.weights)
    }
}

impl From<Prior> for RawPrior {
    fn from(p: Prior) -> Self {
        RawPrior { candidates: p.candidates, weights: p.weights }
    }
}

impl Prior {
    /// Validates: at least one candidate, matching counts, common dimension,
    /// every candidate a density matrix, weights nonnegative and summing to
    /// 1 within 1e−12.
    pub fn new(candidates: Vec<ComplexMatrix>, weights: Vec<f64>) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::ShapeMismatch { reason: "prior needs at least one candidate".into() });
        }
        if candidates.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: candidates.len(),
                got: weights.len(),
            });
        }
        let dim = candidates[0].dim();
        for (k, c) in candidates.iter().enumerate() {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: c.dim() });
            }
            check_density(c).map_err(|e| Error::NotAState {
                reason: format!("candidate {k}: {e}"),
            })?;
        }
        for (k, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::OutOfRange {
                    reason: format!("weight {w} at candidate {k} is negative"),
                });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::OutOfRange {
                reason: format!("weights sum to {sum}, not 1 within 1e-12"),
            });
        }
        Ok(Prior { candidates, weights })
    }

    pub fn candidates(&self) -> &[ComplexMatrix] {
        &self.candidates
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.candidates[0].dim()
    }
}

/// One tomography run: the simulated sky outcomes, the weight vector after
/// every step (the prior itself included, so the history has n+1 entries),
/// and the seed that generated the data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TomographyTrace {
    pub outcomes: Vec<usize>,
    pub posterior_history: Vec<Vec<f64>>,
    pub seed: u64,
}

/// The n-system exchangeable state Σ_k w_k ρ_k^⊗n.
pub fn mixture_state(prior: &Prior, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::OutOfRange { reason: "mixture_state needs n >= 1".into() });
    }
    let d = prior.dim();
    let total = d
        .checked_pow(n as u32)
        .filter(|&t| t <= DIM_CAP)
        .ok_or(Error::SizeOverflow { dim: d.saturating_pow(n as u32), cap: DIM_CAP })?;
    let mut out = ComplexMatrix::zeros(total);
    for (rho, &w) in prior.candidates().iter().zip(prior.weights()) {
        let mut power = rho.clone();
        for _ in 1..n {
            power = tensor(&power, rho)?;
        }
        out = out.add(&power.scaled(Complex64::new(w, 0.0)))?;
    }
    Ok(out)
}

/// n i.i.d. draws from the sky distribution of `true_state`, by inverse-CDF
/// sampling from a ChaCha stream seeded with `seed`. Deterministic per seed.
pub fn simulate_outcomes(
    true_state: &ComplexMatrix,
    sic: &Sic,
    n: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    let probs = state_to_probs(true_state, sic)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = Vec::with_capacity(n);
    for _ in 0..n {
        outcomes.push(draw(&probs, &mut rng));
    }
    Ok(outcomes)
}

fn draw(probs: &ProbVector, rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.values().iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.outcomes() - 1
}

/// Per-candidate sky distributions, shared by the update paths.
fn likelihood_tables(prior: &Prior, sic: &Sic) -> Result<Vec<ProbVector>> {
    prior.candidates().iter().map(|c| state_to_probs(c, sic)).collect()
}

/// Log-likelihood of one outcome under one candidate; probabilities at or
/// below the floor count as impossible (−∞).
fn log_likelihood(table: &ProbVector, outcome: usize) -> f64 {
    let p = table.get(outcome);
    if p < ZERO_LIKELIHOOD_FLOOR {
        f64::NEG_INFINITY
    } else {
        p.ln()
    }
}

fn normalize_log_weights(log_weights: &[f64]) -> Result<Vec<f64>> {
    let max = log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::ZeroEvidence);
    }
    let unnorm: Vec<f64> = log_weights.iter().map(|&lw| (lw - max).exp()).collect();
    let total: f64 = unnorm.iter().sum();
    Ok(unnorm.into_iter().map(|w| w / total).collect())
}

/// Bayes' rule over the candidate set: w_k′ ∝ w_k · Π p_k(outcome). The
/// candidates are unchanged; only the weights move. Accumulation happens in
/// log space, so long outcome lists cannot underflow unless every candidate
/// assigns an exact zero to some observed outcome — that is
/// [`Error::ZeroEvidence`].
pub fn bayes_update(prior: &Prior, sic: &Sic, outcomes: &[usize]) -> Result<Prior> {
    let tables = likelihood_tables(prior, sic)?;
    let n_out = sic.outcomes();
    for &o in outcomes {
        if o >= n_out {
            return Err(Error::OutOfRange {
                reason: format!("outcome index {o} out of range for {n_out} sky outcomes"),
            });
        }
    }
    let log_weights: Vec<f64> = prior
        .weights()
        .iter()
        .zip(&tables)
        .map(|(&w, table)| {
            let lw = if w > 0.0 { w.ln() } else { f64::NEG_INFINITY };
            outcomes.iter().fold(lw, |acc, &o| acc + log_likelihood(table, o))
        })
        .collect();
    let weights = normalize_log_weights(&log_weights)?;
    Prior::new(prior.candidates().to_vec(), weights)
}

/// Trace distance ½‖a − b‖₁ between density matrices.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let diff = a.sub(b)?;
    let sym = diff.add(&diff.adjoint())?.scaled(Complex64::new(0.5, 0.0));
    let evs = hermitian_eigenvalues(&sym)?;
    Ok(0.5 * evs.iter().map(|e| e.abs()).sum::<f64>())
}

/// Index of the candidate closest to `state` in trace distance; errors if
/// the closest candidate is not unique (ties within 1e−12).
pub fn closest_candidate(prior: &Prior, state: &ComplexMatrix) -> Result<usize> {
    let dists = prior
        .candidates()
        .iter()
        .map(|c| trace_distance(c, state))
        .collect::<Result<Vec<f64>>>()?;
    let (best, &best_d) = dists
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.total_cmp(b))
        .expect("prior is nonempty");
    let ties = dists.iter().filter(|&&d| (d - best_d).abs() <= 1e-12).count();
    if ties > 1 {
        return Err(Error::OutOfRange {
            reason: format!("closest candidate is ambiguous: {ties} candidates at distance {best_d}")
        });
    }
    Ok(best)
}

/// Simulates n sky outcomes from `true_state`, updates the weights one
/// outcome at a time, and records the weight vector after every step. The
/// returned history has n+1 entries, starting with the prior.
pub fn posterior_concentration(
    prior: &Prior,
    true_state: &ComplexMatrix,
    sic: &Sic,
    n: usize,
    seed: u64,
) -> Result<TomographyTrace> {
    let outcomes = simulate_outcomes(true_state, sic, n, seed)?;
    let tables = likelihood_tables(prior, sic)?;
    let mut log_weights: Vec<f64> = prior
        .weights()
        .iter()
        .map(|&w| if w > 0.0 { w.ln() } else { f64::NEG_INFINITY })
        .collect();
    let mut history = Vec::with_capacity(n + 1);
    history.push(prior.weights().to_vec());
    for &o in &outcomes {
        for (lw, table) in log_weights.iter_mut().zip(&tables) {
            *lw += log_likelihood(table, o);
        }
        history.push(normalize_log_weights(&log_weights)?);
    }
    Ok(TomographyTrace { outcomes, posterior_history: history, seed })
}

//! The probability representation of quantum mechanics over a SIC reference
//! measurement: state ↔ probability conversion, the Born rule written as an
//! affine correction to the Law of Total Probability (the "urgleichung"),
//! unitary evolution in probability language, the (q, d) generalized family,
//! qplex membership, and Dutch-book coherence checking.
//!
//! Throughout, the "sky" is a fixed SIC measurement with d² outcomes Hᵢ and
//! the "ground" is an arbitrary POVM {Dⱼ}. P(Dⱼ|Hᵢ) always refers to the
//! cascaded experiment in which the sky is actually performed first and the
//! post-measurement state after outcome i is the rank-1 update Πᵢ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::sic::Sic;
use crate::{Error, Result};

/// Entrywise slack allowed on probabilities at validation time.
pub const PROB_ENTRY_TOL: f64 = 1e-12;
/// Slack allowed on probability sums at validation time.
pub const PROB_SUM_TOL: f64 = 1e-10;
/// Threshold beyond which an urgleichung output is flagged out of range.
pub const RANGE_FLAG_TOL: f64 = 1e-10;
/// Tolerance for the state preconditions (Hermitian, unit trace, PSD).
pub const STATE_TOL: f64 = 1e-10;

/// A probability distribution over a finite outcome set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProbVector", into = "RawProbVector")]
pub struct ProbVector {
    outcomes: usize,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawProbVector {
    outcomes: usize,
    values: Vec<f64>,
}

impl TryFrom<RawProbVector> for ProbVector {
    type Error = Error;
    fn try_from(raw: RawProbVector) -> Result<Self> {
        if raw.values.len() != raw.outcomes {
            return Err(Error::DimensionMismatch { expected: raw.outcomes, got: raw.values.len() });
        }
        ProbVector::new(raw.values)
    }
}

impl From<ProbVector> for RawProbVector {
    fn from(p: ProbVector) -> Self {
        RawProbVector { outcomes: p.outcomes, values: p.values }
    }
}

impl ProbVector {
    /// Validates entries in [−1e−12, 1 + 1e−12] and sum within 1e−10 of 1.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::OutOfRange { reason: "probability vector needs at least one outcome".into() });
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || !(-PROB_ENTRY_TOL..=1.0 + PROB_ENTRY_TOL).contains(&v) {
                return Err(Error::OutOfRange {
                    reason: format!("probability {v} at outcome {i} lies outside [0, 1]"),
                });
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::OutOfRange {
                reason: format!("probabilities sum to {sum}, not 1 within 1e-10"),
            });
        }
        Ok(ProbVector { outcomes: values.len(), values })
    }

    /// Skips the entrywise range check (the sum is still required to be 1):
    /// used for urgleichung outputs, which may legitimately leave [0, 1] and
    /// carry an explicit out-of-range flag instead of being clamped.
    pub fn new_unnormalized_range(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::OutOfRange { reason: "probability vector needs at least one outcome".into() });
        }
        let sum: f64 = values.iter().sum();
        if !sum.is_finite() || (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::OutOfRange {
                reason: format!("quasi-probabilities sum to {sum}, not 1 within 1e-10"),
            });
        }
        Ok(ProbVector { outcomes: values.len(), values })
    }

    /// The uniform distribution over n outcomes.
    pub fn uniform(n: usize) -> Self {
        ProbVector { outcomes: n, values: vec![1.0 / n as f64; n] }
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// True iff every entry lies in [−tol, 1 + tol].
    pub fn in_range(&self, tol: f64) -> bool {
        self.values.iter().all(|&v| v >= -tol && v <= 1.0 + tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold((self.outcomes != other.outcomes) as u8 as f64 * f64::INFINITY, f64::max)
    }
}

/// Conditional table P(Dⱼ | Hᵢ) for a ground measurement cascaded behind the
/// sky SIC; `values[j][i]`, columns (fixed i) sum to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConditional", into = "RawConditional")]
pub struct ConditionalMatrix {
    ground_outcomes: usize,
    sky_outcomes: usize,
    values: Vec<Vec<f64>>,
}

/// JSON shape: {"ground": n_D, "sky": d², "rows": [[...], ...]}.
#[derive(Serialize, Deserialize)]
struct RawConditional {
    ground: usize,
    sky: usize,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<RawConditional> for ConditionalMatrix {
    type Error = Error;
    fn try_from(raw: RawConditional) -> Result<Self> {
        if raw.rows.len() != raw.ground {
            return Err(Error::ShapeMismatch {
                reason: format!("{} rows but ground count {}", raw.rows.len(), raw.ground),
            });
        }
        if raw.rows.iter().any(|r| r.len() != raw.sky) {
            return Err(Error::ShapeMismatch {
                reason: format!("every row must have sky count {} entries", raw.sky),
            });
        }
        ConditionalMatrix::new(raw.rows)
    }
}

impl From<ConditionalMatrix> for RawConditional {
    fn from(c: ConditionalMatrix) -> Self {
        RawConditional { ground: c.ground_outcomes, sky: c.sky_outcomes, rows: c.values }
    }
}

impl ConditionalMatrix {
    /// Validates entries in [−1e−12, 1 + 1e−12] and unit column sums.
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        if values.is_empty() || values[0].is_empty() {
            return Err(Error::ShapeMismatch { reason: "conditional table cannot be empty".into() });
        }
        let sky = values[0].len();
        if values.iter().any(|r| r.len() != sky) {
            return Err(Error::ShapeMismatch { reason: "ragged conditional table".into() });
        }
        for row in &values {
            for &v in row {
                if !v.is_finite() || !(-PROB_ENTRY_TOL..=1.0 + PROB_ENTRY_TOL).contains(&v) {
                    return Err(Error::OutOfRange {
                        reason: format!("conditional probability {v} lies outside [0, 1]"),
                    });
                }
            }
        }
        for i in 0..sky {
            let col: f64 = values.iter().map(|r| r[i]).sum();
            if (col - 1.0).abs() > PROB_SUM_TOL {
                return Err(Error::OutOfRange {
                    reason: format!("column {i} sums to {col}, not 1 within 1e-10"),
                });
            }
        }
        Ok(ConditionalMatrix { ground_outcomes: values.len(), sky_outcomes: sky, values })
    }

    pub fn ground_outcomes(&self) -> usize {
        self.ground_outcomes
    }

    pub fn sky_outcomes(&self) -> usize {
        self.sky_outcomes
    }

    /// P(Dⱼ | Hᵢ).
    pub fn get(&self, j: usize, i: usize) -> f64 {
        self.values[j][i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }
}

/// Output of an urgleichung-family evaluation: the computed Q(Dⱼ) plus a
/// flag marking whether any entry left [0, 1] (by more than 1e−10). Values
/// are never clamped — going out of range is exactly the behavior that
/// motivates restricting P to the qplex, so it stays visible.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UrgleichungResult {
    pub probs: ProbVector,
    pub out_of_range: bool,
}

/// Result of reconstructing a probability vector into an operator and
/// checking positivity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QPlexReport {
    pub member: bool,
    pub min_eigenvalue: f64,
    pub reconstructed_trace: f64,
    pub tolerance: f64,
}

/// Checks the density-matrix preconditions: Hermitian, unit trace, PSD, all
/// within 1e−10.
pub fn check_density(rho: &ComplexMatrix) -> Result<()> {
    let herm = rho.hermiticity_deviation();
    if herm > STATE_TOL {
        return Err(Error::NotAState {
            reason: format!("hermiticity deviation {herm:.3e} exceeds 1e-10"),
        });
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(Error::NotAState { reason: format!("trace {tr} is not 1 within 1e-10") });
    }
    let min = min_eigenvalue_symmetrized(rho)?;
    if min < -STATE_TOL {
        return Err(Error::NotAState {
            reason: format!("negative eigenvalue {min:.3e} below -1e-10"),
        });
    }
    Ok(())
}

/// Minimum eigenvalue of (M + M†)/2 — tolerant of 1e−10-level hermiticity
/// slack that the strict eigensolver precondition would reject.
fn min_eigenvalue_symmetrized(m: &ComplexMatrix) -> Result<f64> {
    let sym = m.add(&m.adjoint())?.scaled(Complex64::new(0.5, 0.0));
    let evs = hermitian_eigenvalues(&sym)?;
    Ok(evs[0])
}

/// Born-rule probabilities of the SIC outcomes: P(Hᵢ) = tr(ρ Πᵢ)/d. Every
/// entry is at most 1/d (rank-1 element bound).
pub fn state_to_probs(rho: &ComplexMatrix, sic: &Sic) -> Result<ProbVector> {
    if rho.dim() != sic.dim() {
        return Err(Error::DimensionMismatch { expected: sic.dim(), got: rho.dim() });
    }
    check_density(rho)?;
    let d = sic.dim() as f64;
    let values = sic
        .projectors()
        .iter()
        .map(|pi| rho.mul(pi).map(|m| m.trace().re / d))
        .collect::<Result<Vec<f64>>>()?;
    ProbVector::new(values)
}

/// Inverse of [`state_to_probs`]: ρ = Σᵢ ((d+1)·P(Hᵢ) − 1/d)·Πᵢ. Always
/// Hermitian with unit trace; positivity holds iff P is a qplex member.
pub fn probs_to_state(p: &ProbVector, sic: &Sic) -> Result<ComplexMatrix> {
    let d = sic.dim();
    if p.outcomes() != d * d {
        return Err(Error::ShapeMismatch {
            reason: format!("{} outcomes but the SIC has {}", p.outcomes(), d * d),
        });
    }
    let dd = d as f64;
    let mut rho = ComplexMatrix::zeros(d);
    for (i, pi) in sic.projectors().iter().enumerate() {
        let w = (dd + 1.0) * p.get(i) - 1.0 / dd;
        rho = rho.add(&pi.scaled(Complex64::new(w, 0.0)))?;
    }
    Ok(rho)
}

/// Validates a POVM: every element PSD (within 1e−10) and the sum equal to
/// the identity (within 1e−10).
pub fn check_povm(ground: &[ComplexMatrix]) -> Result<()> {
    if ground.is_empty() {
        return Err(Error::NotAPovm { reason: "a POVM needs at least one element".into() });
    }
    let dim = ground[0].dim();
    let mut sum = ComplexMatrix::zeros(dim);
    for (j, e) in ground.iter().enumerate() {
        if e.dim() != dim {
            return Err(Error::NotAPovm { reason: format!("element {j} has mismatched dimension") });
        }
        let herm = e.hermiticity_deviation();
        if herm > STATE_TOL {
            return Err(Error::NotAPovm {
                reason: format!("element {j} hermiticity deviation {herm:.3e}"),
            });
        }
        let min = min_eigenvalue_symmetrized(e)?;
        if min < -STATE_TOL {
            return Err(Error::NotAPovm {
                reason: format!("element {j} has negative eigenvalue {min:.3e}"),
            });
        }
        sum = sum.add(e)?;
    }
    let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim));
    if dev > STATE_TOL {
        return Err(Error::NotAPovm {
            reason: format!("elements sum to identity only within {dev:.3e}"),
        });
    }
    Ok(())
}

/// Conditional table for the cascaded experiment: the sky SIC fires first,
/// outcome i collapses the state to Πᵢ (rank-1 Lüders update), then the
/// ground POVM {Dⱼ} fires: P(Dⱼ|Hᵢ) = tr(Πᵢ Dⱼ).
pub fn conditional_matrix(ground: &[ComplexMatrix], sic: &Sic) -> Result<ConditionalMatrix> {
    check_povm(ground)?;
    if ground[0].dim() != sic.dim() {
        return Err(Error::DimensionMismatch { expected: sic.dim(), got: ground[0].dim() });
    }
    let values = ground
        .iter()
        .map(|dj| {
            sic.projectors()
                .iter()
                .map(|pi| pi.mul(dj).map(|m| m.trace().re))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    ConditionalMatrix::new(values)
}

/// Law of Total Probability: P(Dⱼ) = Σᵢ P(Hᵢ)·P(Dⱼ|Hᵢ) — the answer a
/// classically-minded agent would give for the ground experiment, treating
/// the sky outcome as an unknown but real intermediate condition.
pub fn ltp(p: &ProbVector, c: &ConditionalMatrix) -> Result<ProbVector> {
    if p.outcomes() != c.sky_outcomes() {
        return Err(Error::ShapeMismatch {
            reason: format!(
                "{} sky probabilities but the table conditions on {}",
                p.outcomes(),
                c.sky_outcomes()
            ),
        });
    }
    ProbVector::new((0..c.ground_outcomes()).map(|j| dot_row(p, c, j)).collect())
}

/// Σᵢ P(Hᵢ)·C[j][i], fixed ascending-i order (shared by ltp and the family
/// evaluations so that q = 0 reproduces ltp bit-for-bit).
fn dot_row(p: &ProbVector, c: &ConditionalMatrix, j: usize) -> f64 {
    (0..p.outcomes()).map(|i| p.get(i) * c.get(j, i)).sum()
}

/// The urgleichung: Q(Dⱼ) = Σᵢ [(d+1)·P(Hᵢ) − 1/d]·P(Dⱼ|Hᵢ), the Born rule
/// for the ground experiment when the sky is *not* performed, written purely
/// in probabilities. Agrees with the trace rule tr(ρDⱼ) whenever P encodes a
/// quantum state and C a genuine cascade.
pub fn born_urgleichung(p: &ProbVector, c: &ConditionalMatrix, d: usize) -> Result<UrgleichungResult> {
    if p.outcomes() != d * d {
        return Err(Error::ShapeMismatch {
            reason: format!("{} sky probabilities but d² = {}", p.outcomes(), d * d),
        });
    }
    if c.sky_outcomes() != d * d {
        return Err(Error::ShapeMismatch {
            reason: format!("table conditions on {} outcomes but d² = {}", c.sky_outcomes(), d * d),
        });
    }
    let dd = d as f64;
    let values: Vec<f64> = (0..c.ground_outcomes())
        .map(|j| (dd + 1.0) * dot_row(p, c, j) - row_sum(c, j) / dd)
        .collect();
    finish_family(values)
}

/// Σᵢ C[j][i]; divided by d it is the affine offset Σᵢ (1/d)·C[j][i] of the
/// urgleichung.
fn row_sum(c: &ConditionalMatrix, j: usize) -> f64 {
    (0..c.sky_outcomes()).map(|i| c.get(j, i)).sum()
}

fn finish_family(values: Vec<f64>) -> Result<UrgleichungResult> {
    let out_of_range =
        values.iter().any(|&v| !(-RANGE_FLAG_TOL..=1.0 + RANGE_FLAG_TOL).contains(&v));
    Ok(UrgleichungResult { probs: ProbVector::new_unnormalized_range(values)?, out_of_range })
}

/// Number of sky outcomes in the (q, d) family: n = q·d·(d−1)/2 + d.
/// q = 2 gives d² (complex quantum theory), q = 1 gives the real-Hilbert
/// count, q = 0 the classical simplex of d outcomes.
pub fn family_outcomes(q: usize, d: usize) -> usize {
    q * d * (d - 1) / 2 + d
}

/// The q-parametrized generalization of the urgleichung:
/// Q(Dⱼ) = (qd/2 + 1)·Σᵢ P(Hᵢ)·P(Dⱼ|Hᵢ) − q/2. q = 2 is quantum theory;
/// q = 0 collapses to the Law of Total Probability exactly.
///
/// The affine offset q/2 presumes the ground measurement is a von Neumann
/// test (d rank-1 projectors of unit trace); at q = 2 the formula then
/// agrees with [`born_urgleichung`], whose offset adapts to arbitrary
/// ground POVMs.
pub fn general_family(
    p: &ProbVector,
    c: &ConditionalMatrix,
    q: usize,
    d: usize,
) -> Result<UrgleichungResult> {
    let n = family_outcomes(q, d);
    if p.outcomes() != n {
        return Err(Error::BadOutcomeCount { expected: n, got: p.outcomes() });
    }
    if c.sky_outcomes() != n {
        return Err(Error::BadOutcomeCount { expected: n, got: c.sky_outcomes() });
    }
    let alpha = (q * d) as f64 / 2.0 + 1.0;
    let beta = q as f64 / 2.0;
    let values: Vec<f64> = (0..c.ground_outcomes())
        .map(|j| {
            let s = dot_row(p, c, j);
            if q == 0 {
                s // bit-identical to ltp
            } else {
                alpha * s - beta
            }
        })
        .collect();
    finish_family(values)
}

/// Probability-language unitary evolution: the ground measurement is the
/// rotated SIC Dⱼ = (1/d)·U Πⱼ U†, and the output equals the SIC
/// probabilities of the state evolved by U† (initial and final states are
/// related by evolution under U†).
pub fn unitary_evolution_probs(
    p: &ProbVector,
    u: &ComplexMatrix,
    sic: &Sic,
) -> Result<UrgleichungResult> {
    u.require_unitary()?;
    if u.dim() != sic.dim() {
        return Err(Error::DimensionMismatch { expected: sic.dim(), got: u.dim() });
    }
    let d = sic.dim();
    let dd = d as f64;
    let uadj = u.adjoint();
    let ground = sic
        .projectors()
        .iter()
        .map(|pi| {
            u.mul(pi)?
                .mul(&uadj)
                .map(|m| m.scaled(Complex64::new(1.0 / dd, 0.0)))
        })
        .collect::<Result<Vec<ComplexMatrix>>>()?;
    let c = conditional_matrix(&ground, sic)?;
    let values: Vec<f64> = (0..c.ground_outcomes())
        .map(|j| (dd + 1.0) * dot_row(p, &c, j) - 1.0 / dd)
        .collect();
    finish_family(values)
}

/// Reconstructs P into an operator and reports whether it is a valid state:
/// membership in the qplex at tolerance `tol` on the minimum eigenvalue.
pub fn qplex_membership(p: &ProbVector, sic: &Sic, tol: f64) -> Result<QPlexReport> {
    let rho = probs_to_state(p, sic)?;
    let min_eigenvalue = min_eigenvalue_symmetrized(&rho)?;
    Ok(QPlexReport {
        member: min_eigenvalue >= -tol,
        min_eigenvalue,
        reconstructed_trace: rho.trace().re,
        tolerance: tol,
    })
}

/// Lottery-ticket prices for two mutually exclusive events E and F and their
/// disjunction. "Worth $1 if the event occurs."
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TicketPrices {
    pub p_e: f64,
    pub p_f: f64,
    pub p_e_or_f: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ticket {
    E,
    F,
    EOrF,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BookieAction {
    /// The bookie buys the ticket from Alice at her price.
    Buy,
    /// The bookie sells Alice the ticket at her price.
    Sell,
}

/// One transaction at Alice's announced price.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Transaction {
    pub action: BookieAction,
    pub ticket: Ticket,
    pub price: f64,
}

/// The bookie's guaranteed profit (== Alice's guaranteed loss) in each of
/// the three possible worlds.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct OutcomeProfits {
    pub e: f64,
    pub f: f64,
    pub neither: f64,
}

/// Coherence verdict for a set of ticket prices; incoherent prices come with
/// an explicit sure-loss book.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DutchBookVerdict {
    pub coherent: bool,
    pub transactions: Option<Vec<Transaction>>,
    pub bookie_profit: Option<OutcomeProfits>,
}

fn ticket_payoff(ticket: Ticket, world: usize) -> f64 {
    // worlds: 0 = E occurs, 1 = F occurs, 2 = neither.
    match (ticket, world) {
        (Ticket::E, 0) | (Ticket::F, 1) | (Ticket::EOrF, 0) | (Ticket::EOrF, 1) => 1.0,
        _ => 0.0,
    }
}

/// Bookie profit of a transaction list in each world.
pub fn evaluate_book(transactions: &[Transaction]) -> OutcomeProfits {
    let mut profit = [0.0f64; 3];
    for t in transactions {
        for (world, p) in profit.iter_mut().enumerate() {
            let payoff = ticket_payoff(t.ticket, world);
            *p += match t.action {
                BookieAction::Sell => t.price - payoff,
                BookieAction::Buy => payoff - t.price,
            };
        }
    }
    OutcomeProfits { e: profit[0], f: profit[1], neither: profit[2] }
}

/// Checks the prices for Dutch-book coherence. For mutually exclusive E and
/// F, coherence requires every price in [0, 1] and p(E∨F) = p(E) + p(F)
/// (within 1e−12). Otherwise a sure-loss book is constructed: out-of-range
/// prices are exploited with single-ticket trades (buy below 0, sell above
/// 1); an additivity gap s = p(E∨F) − p(E) − p(F) is exploited by selling
/// the overpriced side of the three-ticket book and buying the other.
pub fn dutch_book_check(t: &TicketPrices) -> DutchBookVerdict {
    let prices = [
        (Ticket::E, t.p_e),
        (Ticket::F, t.p_f),
        (Ticket::EOrF, t.p_e_or_f),
    ];
    let mut transactions: Vec<Transaction> = Vec::new();
    for (ticket, price) in prices {
        if price < 0.0 {
            transactions.push(Transaction { action: BookieAction::Buy, ticket, price });
        } else if price > 1.0 {
            transactions.push(Transaction { action: BookieAction::Sell, ticket, price });
        }
    }
    if transactions.is_empty() {
        let gap = t.p_e_or_f - t.p_e - t.p_f;
        if gap.abs() <= 1e-12 {
            return DutchBookVerdict { coherent: true, transactions: None, bookie_profit: None };
        }
        let (union_side, part_side) = if gap > 0.0 {
            (BookieAction::Sell, BookieAction::Buy)
        } else {
            (BookieAction::Buy, BookieAction::Sell)
        };
        transactions.push(Transaction { action: union_side, ticket: Ticket::EOrF, price: t.p_e_or_f });
        transactions.push(Transaction { action: part_side, ticket: Ticket::E, price: t.p_e });
        transactions.push(Transaction { action: part_side, ticket: Ticket::F, price: t.p_f });
    }
    let profit = evaluate_book(&transactions);
    DutchBookVerdict {
        coherent: false,
        transactions: Some(transactions),
        bookie_profit: Some(profit),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexVector;
    use crate::sample::{random_density_matrix, random_povm, random_pure_state, random_unitary, random_von_neumann};
    use crate::sic::{bloch_state, builtin_fiducial, orbit, qubit_sic_probs, qubit_tetrahedron};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hesse_sic() -> Sic {
        orbit(&builtin_fiducial(3).unwrap()).unwrap()
    }

    fn qubit_sic() -> Sic {
        orbit(&builtin_fiducial(2).unwrap()).unwrap()
    }

    fn maximally_mixed(d: usize) -> ComplexMatrix {
        ComplexMatrix::identity(d).scaled(Complex64::new(1.0 / d as f64, 0.0))
    }

    #[test]
    fn uniform_state_gives_uniform_probs() {
        let sic = hesse_sic();
        let p = state_to_probs(&maximally_mixed(3), &sic).unwrap();
        for i in 0..9 {
            assert!((p.get(i) - 1.0 / 9.0).abs() < 1e-14);
        }
    }

    #[test]
    fn projector_state_gives_basis_distribution() {
        let sic = hesse_sic();
        let k = 4;
        let p = state_to_probs(&sic.projectors()[k], &sic).unwrap();
        for i in 0..9 {
            let expect = if i == k { 1.0 / 3.0 } else { 1.0 / 12.0 };
            assert!((p.get(i) - expect).abs() < 1e-12, "outcome {i}");
        }
    }

    #[test]
    fn qubit_probs_agree_with_bloch_formula() {
        let sic = qubit_sic();
        let pis = qubit_tetrahedron();
        let (x, y, z) = (0.31, -0.44, 0.52);
        let rho = bloch_state(x, y, z).unwrap();
        let p = state_to_probs(&rho, &sic).unwrap();
        let formula = qubit_sic_probs(x, y, z).unwrap();
        // The orbit reproduces the tetrahedron as a set; match projectors,
        // then compare the probability attached to each.
        for (t, pi) in pis.iter().enumerate() {
            let i = sic
                .projectors()
                .iter()
                .position(|q| q.max_abs_diff(pi) < 1e-10)
                .expect("tetrahedron vertex present in orbit");
            assert!((p.get(i) - formula[t]).abs() < 1e-12);
        }
    }

    #[test]
    fn sic_probabilities_capped_at_one_over_d() {
        let sic = hesse_sic();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let rho = random_density_matrix(3, 2, &mut rng).unwrap();
            let p = state_to_probs(&rho, &sic).unwrap();
            for i in 0..9 {
                assert!(p.get(i) <= 1.0 / 3.0 + 1e-12);
            }
        }
    }

    #[test]
    fn non_states_rejected() {
        let sic = qubit_sic();
        // Trace 2.
        let double = ComplexMatrix::identity(2);
        assert!(matches!(state_to_probs(&double, &sic), Err(Error::NotAState { .. })));
        // Negative eigenvalue, unit trace.
        let neg = ComplexMatrix::new(
            2,
            vec![
                Complex64::new(1.5, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-0.5, 0.0),
            ],
        )
        .unwrap();
        assert!(matches!(state_to_probs(&neg, &sic), Err(Error::NotAState { .. })));
    }

    #[test]
    fn uniform_probs_reconstruct_identity() {
        let sic = hesse_sic();
        let rho = probs_to_state(&ProbVector::uniform(9), &sic).unwrap();
        assert!(rho.max_abs_diff(&maximally_mixed(3)) < 1e-12);
    }

    #[test]
    fn basis_distribution_reconstructs_projector() {
        let sic = hesse_sic();
        let k = 7;
        let mut values = vec![1.0 / 12.0; 9];
        values[k] = 1.0 / 3.0;
        let rho = probs_to_state(&ProbVector::new(values).unwrap(), &sic).unwrap();
        assert!(rho.max_abs_diff(&sic.projectors()[k]) < 1e-10);
    }

    #[test]
    fn round_trip_states() {
        for d in [2usize, 3] {
            let sic = orbit(&builtin_fiducial(d).unwrap()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(d as u64);
            for _ in 0..50 {
                let rho = random_density_matrix(d, d, &mut rng).unwrap();
                let back = probs_to_state(&state_to_probs(&rho, &sic).unwrap(), &sic).unwrap();
                assert!(back.max_abs_diff(&rho) < 1e-12);
            }
        }
    }

    #[test]
    fn conditional_of_identity_povm_is_all_ones() {
        let sic = hesse_sic();
        let c = conditional_matrix(&[ComplexMatrix::identity(3)], &sic).unwrap();
        assert_eq!(c.ground_outcomes(), 1);
        for i in 0..9 {
            assert!((c.get(0, i) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn conditional_of_rescaled_sic_is_gram() {
        let sic = hesse_sic();
        let ground: Vec<ComplexMatrix> = sic
            .projectors()
            .iter()
            .map(|p| p.scaled(Complex64::new(1.0 / 3.0, 0.0)))
            .collect();
        let c = conditional_matrix(&ground, &sic).unwrap();
        for j in 0..9 {
            for i in 0..9 {
                let expect = if i == j { 1.0 / 3.0 } else { 1.0 / 12.0 };
                assert!((c.get(j, i) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn conditional_columns_sum_to_one() {
        let sic = hesse_sic();
        let ground = random_von_neumann(3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let c = conditional_matrix(&ground, &sic).unwrap();
        for i in 0..9 {
            let col: f64 = (0..3).map(|j| c.get(j, i)).sum();
            assert!((col - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_povms_rejected() {
        let sic = qubit_sic();
        let half = maximally_mixed(2);
        assert!(matches!(
            conditional_matrix(&[half], &sic),
            Err(Error::NotAPovm { .. })
        ));
        let neg = ComplexMatrix::new(
            2,
            vec![
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
            ],
        )
        .unwrap();
        let fixup = ComplexMatrix::identity(2).sub(&neg).unwrap();
        assert!(matches!(
            conditional_matrix(&[neg, fixup], &sic),
            Err(Error::NotAPovm { .. })
        ));
    }

    #[test]
    fn ltp_identical_columns_and_uniform() {
        // Two ground outcomes, all sky columns identical: output is that column.
        let c = ConditionalMatrix::new(vec![vec![0.3; 4], vec![0.7; 4]]).unwrap();
        let p = ProbVector::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let out = ltp(&p, &c).unwrap();
        assert!((out.get(0) - 0.3).abs() < 1e-15);
        assert!((out.get(1) - 0.7).abs() < 1e-15);

        // Uniform P: row averages.
        let c2 = ConditionalMatrix::new(vec![vec![0.2, 0.4, 0.6, 0.8], vec![0.8, 0.6, 0.4, 0.2]])
            .unwrap();
        let out2 = ltp(&ProbVector::uniform(4), &c2).unwrap();
        assert!((out2.get(0) - 0.5).abs() < 1e-15);
        let total: f64 = out2.values().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn affine_weights_sum_to_one() {
        let sic = hesse_sic();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let rho = random_density_matrix(3, 3, &mut rng).unwrap();
            let p = state_to_probs(&rho, &sic).unwrap();
            let s: f64 = p.values().iter().map(|&v| 4.0 * v - 1.0 / 3.0).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn urgleichung_equals_trace_rule() {
        for d in [2usize, 3] {
            let sic = orbit(&builtin_fiducial(d).unwrap()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(d as u64 + 40);
            for trial in 0..50 {
                let rho = if trial % 2 == 0 {
                    random_density_matrix(d, d, &mut rng).unwrap()
                } else {
                    random_pure_state(d, &mut rng).unwrap()
                };
                let ground = random_povm(d, 2 * d, &mut rng).unwrap();
                let p = state_to_probs(&rho, &sic).unwrap();
                let c = conditional_matrix(&ground, &sic).unwrap();
                let q = born_urgleichung(&p, &c, d).unwrap();
                for (j, dj) in ground.iter().enumerate() {
                    let born = rho.mul(dj).unwrap().trace().re;
                    assert!(
                        (q.probs.get(j) - born).abs() < 1e-10,
                        "d={d} trial={trial} outcome={j}"
                    );
                }
                assert!(!q.out_of_range);
            }
        }
    }

    #[test]
    fn urgleichung_uniform_state_von_neumann() {
        let sic = qubit_sic();
        let ground = vec![
            crate::linalg::outer(&ComplexVector::basis(2, 0), &ComplexVector::basis(2, 0)).unwrap(),
            crate::linalg::outer(&ComplexVector::basis(2, 1), &ComplexVector::basis(2, 1)).unwrap(),
        ];
        let p = state_to_probs(&maximally_mixed(2), &sic).unwrap();
        let c = conditional_matrix(&ground, &sic).unwrap();
        let q = born_urgleichung(&p, &c, 2).unwrap();
        assert!((q.probs.get(0) - 0.5).abs() < 1e-12);
        assert!((q.probs.get(1) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn flat_classical_table_passes_through() {
        // All columns equal: the affine weights sum to 1, so Q == the column.
        let sic = hesse_sic();
        let rho = random_density_matrix(3, 1, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let p = state_to_probs(&rho, &sic).unwrap();
        let c = ConditionalMatrix::new(vec![vec![0.25; 9], vec![0.75; 9]]).unwrap();
        let q = born_urgleichung(&p, &c, 3).unwrap();
        assert!((q.probs.get(0) - 0.25).abs() < 1e-13);
        assert!((q.probs.get(1) - 0.75).abs() < 1e-13);
    }

    #[test]
    fn out_of_range_is_flagged_not_clamped() {
        // A sub-qplex P (delta on sky outcome 0) reconstructs to the
        // indefinite operator 3Π₀ − I with eigenvalues {2, −1}; measuring in
        // the eigenbasis of Π₀ exposes the negativity.
        let sic = qubit_sic();
        let mut values = vec![0.0; 4];
        values[0] = 1.0;
        let p = ProbVector::new(values).unwrap();
        let pi0 = sic.projectors()[0].clone();
        let ground = vec![pi0.clone(), ComplexMatrix::identity(2).sub(&pi0).unwrap()];
        let c = conditional_matrix(&ground, &sic).unwrap();
        let q = born_urgleichung(&p, &c, 2).unwrap();
        assert!(q.out_of_range);
        assert!((q.probs.get(0) - 2.0).abs() < 1e-10);
        assert!((q.probs.get(1) + 1.0).abs() < 1e-10);
    }

    #[test]
    fn family_outcome_counts() {
        for d in 2..=10usize {
            assert_eq!(family_outcomes(2, d), d * d);
        }
        assert_eq!(family_outcomes(1, 3), 6);
        assert_eq!(family_outcomes(0, 5), 5);
    }

    #[test]
    fn family_q2_matches_urgleichung() {
        // The q = 2 member reproduces the urgleichung when the ground
        // measurement is a von Neumann test (unit-trace elements).
        let sic = hesse_sic();
        let rho = random_density_matrix(3, 2, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        let ground = random_von_neumann(3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let p = state_to_probs(&rho, &sic).unwrap();
        let c = conditional_matrix(&ground, &sic).unwrap();
        let via_family = general_family(&p, &c, 2, 3).unwrap();
        let direct = born_urgleichung(&p, &c, 3).unwrap();
        for j in 0..3 {
            assert!((via_family.probs.get(j) - direct.probs.get(j)).abs() < 1e-14);
        }
    }

    #[test]
    fn family_q0_is_exactly_ltp() {
        // q = 0 forces n = d; use a hand-built table over d = 4 outcomes.
        let c = ConditionalMatrix::new(vec![
            vec![0.1, 0.3, 0.5, 0.7],
            vec![0.9, 0.7, 0.5, 0.3],
        ])
        .unwrap();
        let p = ProbVector::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let family = general_family(&p, &c, 0, 4).unwrap();
        let classical = ltp(&p, &c).unwrap();
        for j in 0..2 {
            assert_eq!(family.probs.get(j).to_bits(), classical.get(j).to_bits());
        }
    }

    #[test]
    fn family_wrong_outcome_count_rejected() {
        let c = ConditionalMatrix::new(vec![vec![1.0; 9]]).unwrap();
        let p = ProbVector::uniform(9);
        assert!(matches!(
            general_family(&p, &c, 1, 3), // expects n = 6
            Err(Error::BadOutcomeCount { expected: 6, .. })
        ));
    }

    #[test]
    fn unitary_identity_fixes_probs() {
        let sic = hesse_sic();
        let rho = random_density_matrix(3, 3, &mut ChaCha8Rng::seed_from_u64(12)).unwrap();
        let p = state_to_probs(&rho, &sic).unwrap();
        let q = unitary_evolution_probs(&p, &ComplexMatrix::identity(3), &sic).unwrap();
        assert!(q.probs.max_abs_diff(&p) < 1e-12);
    }

    #[test]
    fn unitary_evolution_matches_trace_path() {
        let sic = hesse_sic();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let u = random_unitary(3, &mut rng).unwrap();
        let rho = random_density_matrix(3, 2, &mut rng).unwrap();
        let p = state_to_probs(&rho, &sic).unwrap();
        let q = unitary_evolution_probs(&p, &u, &sic).unwrap();
        // Independent path: evolve by U† and read off SIC probabilities.
        let evolved = u.adjoint().mul(&rho).unwrap().mul(&u).unwrap();
        let direct = state_to_probs(&evolved, &sic).unwrap();
        assert!(q.probs.max_abs_diff(&direct) < 1e-10);

        // Uniform stays uniform under any U.
        let flat = unitary_evolution_probs(&ProbVector::uniform(9), &u, &sic).unwrap();
        assert!(flat.probs.max_abs_diff(&ProbVector::uniform(9)) < 1e-12);
    }

    #[test]
    fn non_unitary_rejected() {
        let sic = qubit_sic();
        let m = ComplexMatrix::new(
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        )
        .unwrap();
        assert!(matches!(
            unitary_evolution_probs(&ProbVector::uniform(4), &m, &sic),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn qplex_membership_cases() {
        let sic = hesse_sic();
        let report = qplex_membership(&ProbVector::uniform(9), &sic, 1e-10).unwrap();
        assert!(report.member);
        assert!((report.reconstructed_trace - 1.0).abs() < 1e-12);

        let mut delta = vec![0.0; 9];
        delta[0] = 1.0;
        let report = qplex_membership(&ProbVector::new(delta).unwrap(), &sic, 1e-10).unwrap();
        assert!(!report.member);
        assert!(report.min_eigenvalue < -0.1);

        let mut basis = vec![1.0 / 12.0; 9];
        basis[2] = 1.0 / 3.0;
        let report = qplex_membership(&ProbVector::new(basis).unwrap(), &sic, 1e-10).unwrap();
        assert!(report.member);
        assert!(report.min_eigenvalue.abs() < 1e-9);
    }

    #[test]
    fn coherent_prices_pass() {
        let verdict = dutch_book_check(&TicketPrices { p_e: 0.3, p_f: 0.4, p_e_or_f: 0.7 });
        assert!(verdict.coherent);
        assert!(verdict.transactions.is_none());
    }

    #[test]
    fn additivity_violation_builds_sure_loss_book() {
        let verdict = dutch_book_check(&TicketPrices { p_e: 0.3, p_f: 0.4, p_e_or_f: 0.8 });
        assert!(!verdict.coherent);
        let txs = verdict.transactions.unwrap();
        assert_eq!(txs.len(), 3);
        let profit = verdict.bookie_profit.unwrap();
        for p in [profit.e, profit.f, profit.neither] {
            assert!((p - 0.1).abs() < 1e-12, "profit {p}");
        }

        // Underpriced union: the reversed book.
        let verdict = dutch_book_check(&TicketPrices { p_e: 0.3, p_f: 0.4, p_e_or_f: 0.5 });
        assert!(!verdict.coherent);
        let profit = verdict.bookie_profit.unwrap();
        for p in [profit.e, profit.f, profit.neither] {
            assert!(p > 0.0, "profit {p}");
        }
    }

    #[test]
    fn out_of_range_price_exploited_directly() {
        let verdict = dutch_book_check(&TicketPrices { p_e: -0.1, p_f: 0.4, p_e_or_f: 0.3 });
        assert!(!verdict.coherent);
        let txs = verdict.transactions.unwrap();
        assert_eq!(txs.len(), 1);
        assert_eq!(txs[0].action, BookieAction::Buy);
        let profit = verdict.bookie_profit.unwrap();
        assert!(profit.e > 0.0 && profit.f > 0.0 && profit.neither > 0.0);

        let verdict = dutch_book_check(&TicketPrices { p_e: 0.3, p_f: 0.4, p_e_or_f: 1.2 });
        let txs = verdict.transactions.unwrap();
        assert_eq!(txs[0].action, BookieAction::Sell);
        let profit = verdict.bookie_profit.unwrap();
        assert!(profit.e > 0.0 && profit.f > 0.0 && profit.neither > 0.0);
    }

    #[test]
    fn prob_vector_validation_and_serde() {
        assert!(ProbVector::new(vec![0.5, 0.6]).is_err()); // sum > 1
        assert!(ProbVector::new(vec![-0.2, 1.2]).is_err()); // out of range
        assert!(ProbVector::new(vec![]).is_err());

        let p = ProbVector::new(vec![0.25, 0.75]).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"outcomes":2,"values":[0.25,0.75]}"#);
        let back: ProbVector = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<ProbVector>(r#"{"outcomes":2,"values":[0.9,0.9]}"#).is_err());
    }

    #[test]
    fn conditional_matrix_validation_and_serde() {
        assert!(ConditionalMatrix::new(vec![vec![0.5, 0.5], vec![0.6, 0.5]]).is_err());
        let c = ConditionalMatrix::new(vec![vec![0.5, 0.25], vec![0.5, 0.75]]).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"ground":2,"sky":2,"rows":[[0.5,0.25],[0.5,0.75]]}"#);
        let back: ConditionalMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        // Broken column sums are rejected on the way in.
        assert!(serde_json::from_str::<ConditionalMatrix>(
            r#"{"ground":2,"sky":2,"rows":[[0.5,0.25],[0.4,0.75]]}"#
        )
        .is_err());
    }
}

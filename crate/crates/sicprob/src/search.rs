//! Numerical search for SIC fiducials: seeded random-restart projected
//! gradient descent on the unit sphere minimizing the Weyl–Heisenberg frame
//! potential, followed by a truncated-Newton polish stage.
//!
//! The frame potential F(ψ) = Σ_{p≠0} |⟨ψ|D_p ψ⟩|⁴ over the d² − 1
//! non-identity displacements satisfies F ≥ (d−1)/(d+1) for every unit ψ
//! (the Welch bound for the orbit), with equality exactly at SIC fiducials.
//! The residual F − (d−1)/(d+1) equals Σ_p (|⟨ψ|D_pψ⟩|² − 1/(d+1))², so a
//! residual of ε bounds every overlap's deviation from 1/(d+1) by √ε — a
//! residual of 1e−14 certifies the SIC condition at 1e−7.
//!
//! Determinism: restart r draws its start vector from an RNG stream seeded
//! with `splitmix64(seed ⊕ r)`; restarts are embarrassingly parallel and the
//! winner is the lexicographic minimum of (residual, restart index), so the
//! result is bit-identical regardless of thread count.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian_eigensystem, ComplexMatrix, ComplexVector, DIM_CAP};
use crate::sample::random_unit_vector;
use crate::sic::Fiducial;
use crate::wh::{all_displacements, GroupSpec};
use crate::{Error, Result};

pub const DEFAULT_RESTARTS: usize = 64;
pub const DEFAULT_MAX_ITERATIONS: usize = 20_000;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// The residual bounds every squared-overlap deviation by its square root,
/// so a 1e−15 polish target certifies overlaps to ~3e−8. Polish stops
/// gracefully at the double-precision floor if the target is unreachable.
pub const DEFAULT_POLISH_TOLERANCE: f64 = 1e-15;
/// Polish refuses to start from residuals above this (it is a local method).
pub const POLISH_ENTRY_RESIDUAL: f64 = 1e-6;

/// Armijo sufficient-decrease constant for all line searches.
const ARMIJO_C1: f64 = 1e-4;
/// Gradient descent hands off to polish at this residual; pushing the
/// first-order method further is slow exactly where Newton is fast.
const GD_HANDOFF_RESIDUAL: f64 = 1e-7;
const POLISH_MAX_ITERATIONS: usize = 200;
/// Spectral truncation keeps the solved Newton system's condition number
/// at or below this cap.
const HESSIAN_CONDITION_CAP: f64 = 1e12;
/// Extra Newton steps taken after the objective-descent loop stalls,
/// accepted only while the tangent gradient norm strictly decreases.
const POLISH_ENDGAME_STEPS: usize = 6;
/// Objective wiggle tolerated during endgame steps. A genuine increase along
/// an accepted step is bounded by pg_norm²/λ ≲ 1e−18 in this regime, so
/// anything at this scale is summation noise, not a real ascent.
const ENDGAME_VALUE_SLACK: f64 = 4e-15;
/// Restart ranking quantizes the residual to this size before comparing, so
/// sub-noise differences in the objective (summation artifacts near the
/// float floor) never outrank the tangent-gradient norm, which remains
/// informative several orders of magnitude below the objective's resolution.
const RESIDUAL_BUCKET: f64 = 1e-12;

/// Parameters of one search run. `tolerance` is the acceptable residual for
/// the run as a whole; `polish_tolerance` is the (stricter) target the
/// polish stage aims for on each promising restart.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SearchConfig {
    pub dim: usize,
    pub seed: u64,
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub polish_tolerance: f64,
}

impl SearchConfig {
    /// Defaults: seed 0, 64 restarts, 20 000 iterations, residual target
    /// 1e−9, polish target 1e−15.
    pub fn new(dim: usize) -> Self {
        SearchConfig {
            dim,
            seed: 0,
            restarts: DEFAULT_RESTARTS,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            tolerance: DEFAULT_TOLERANCE,
            polish_tolerance: DEFAULT_POLISH_TOLERANCE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::BadDimension { d: self.dim, reason: "search needs dimension at least 2" });
        }
        if self.dim * self.dim > DIM_CAP {
            return Err(Error::SizeOverflow { dim: self.dim * self.dim, cap: DIM_CAP });
        }
        if self.restarts < 1 {
            return Err(Error::OutOfRange { reason: "restarts must be at least 1".into() });
        }
        if self.max_iterations < 1 {
            return Err(Error::OutOfRange { reason: "max_iterations must be at least 1".into() });
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(Error::OutOfRange { reason: "tolerance must be positive".into() });
        }
        if !self.polish_tolerance.is_finite()
            || self.polish_tolerance <= 0.0
            || self.polish_tolerance > self.tolerance
        {
            return Err(Error::OutOfRange {
                reason: "polish_tolerance must be positive and at most tolerance".into(),
            });
        }
        Ok(())
    }
}

/// Outcome of a search: the best restart by (residual, restart_index).
/// `iterations_used` counts the winning restart's descent plus polish steps.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchResult {
    pub fiducial: Fiducial,
    pub residual: f64,
    pub restart_index: usize,
    pub iterations_used: usize,
    pub potential_value: f64,
}

/// SplitMix64 finalizer; decorrelates `seed ⊕ restart_index` into
/// independent stream seeds.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A displacement stored as a generalized permutation: column c carries its
/// single unit-modulus entry `phase[c]` to row `perm[c]`. Lets every
/// overlap, product, and gradient term run in O(d) instead of O(d²).
struct DisplacementAction {
    perm: Vec<usize>,
    phase: Vec<Complex64>,
}

impl DisplacementAction {
    fn from_matrix(m: &ComplexMatrix) -> Self {
        let d = m.dim();
        let mut perm = vec![0usize; d];
        let mut phase = vec![Complex64::new(0.0, 0.0); d];
        for c in 0..d {
            let r = (0..d)
                .find(|&r| m.get(r, c).norm() > 0.5)
                .expect("displacement columns have exactly one unit entry");
            perm[c] = r;
            phase[c] = m.get(r, c);
        }
        DisplacementAction { perm, phase }
    }

    /// ⟨ψ|Dψ⟩.
    fn overlap(&self, psi: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 0..psi.len() {
            acc += psi[self.perm[c]].conj() * self.phase[c] * psi[c];
        }
        acc
    }

    /// out ← Dψ.
    fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        for c in 0..psi.len() {
            out[self.perm[c]] = self.phase[c] * psi[c];
        }
    }

    /// out ← D†ψ.
    fn apply_adjoint(&self, psi: &[Complex64], out: &mut [Complex64]) {
        for c in 0..psi.len() {
            out[c] = self.phase[c].conj() * psi[self.perm[c]];
        }
    }
}

/// Cached evaluation context for the frame potential of one group.
pub struct FramePotential {
    dim: usize,
    actions: Vec<DisplacementAction>,
}

impl FramePotential {
    pub fn new(spec: &GroupSpec) -> Result<Self> {
        let d = spec.dim();
        if d * d > DIM_CAP {
            return Err(Error::SizeOverflow { dim: d * d, cap: DIM_CAP });
        }
        let all = all_displacements(spec)?;
        // The identity contributes the constant |⟨ψ|ψ⟩|⁴ and is excluded.
        let actions = all.iter().skip(1).map(DisplacementAction::from_matrix).collect();
        Ok(FramePotential { dim: d, actions })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Global minimum (d−1)/(d+1), attained exactly at SIC fiducials.
    pub fn minimum(&self) -> f64 {
        (self.dim as f64 - 1.0) / (self.dim as f64 + 1.0)
    }

    /// Σ_{p≠0} |⟨ψ|D_p ψ⟩|⁴ (intended for unit vectors).
    pub fn value(&self, psi: &ComplexVector) -> Result<f64> {
        if psi.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: psi.dim() });
        }
        Ok(self.value_slice(psi.entries()))
    }

    /// F(ψ) − (d−1)/(d+1); ε here bounds every overlap deviation by √ε.
    pub fn residual(&self, psi: &ComplexVector) -> Result<f64> {
        Ok(self.value(psi)? - self.minimum())
    }

    /// The d² − 1 non-identity overlaps ⟨ψ|D_pψ⟩ in enumeration order.
    pub fn overlaps(&self, psi: &ComplexVector) -> Result<Vec<Complex64>> {
        if psi.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: psi.dim() });
        }
        Ok(self.actions.iter().map(|a| a.overlap(psi.entries())).collect())
    }

    fn value_slice(&self, psi: &[Complex64]) -> f64 {
        self.actions
            .iter()
            .map(|a| {
                let m = a.overlap(psi).norm_sqr();
                m * m
            })
            .sum()
    }

    /// Real gradient of F embedded as a complex vector (∂F/∂x_k + i ∂F/∂y_k):
    /// Σ_p 4|c_p|² (c̄_p·D_pψ + c_p·D_p†ψ). `w`/`wd` are d-sized scratch.
    fn gradient_slice(
        &self,
        psi: &[Complex64],
        grad: &mut [Complex64],
        w: &mut [Complex64],
        wd: &mut [Complex64],
    ) {
        grad.fill(Complex64::new(0.0, 0.0));
        for a in &self.actions {
            a.apply(psi, w);
            a.apply_adjoint(psi, wd);
            let mut c = Complex64::new(0.0, 0.0);
            for (p, ww) in psi.iter().zip(w.iter()) {
                c += p.conj() * ww;
            }
            let coeff = 4.0 * c.norm_sqr();
            let cbar = c.conj();
            for k in 0..psi.len() {
                grad[k] += coeff * (cbar * w[k] + c * wd[k]);
            }
        }
    }

    /// F, real gradient, and real Hessian of F on ℝ^{2d} at u = (x; y),
    /// ψ = x + iy. Per displacement, with a = Re⟨ψ|Dψ⟩ and b = −Im⟨ψ|Dψ⟩
    /// realized as quadratic forms a = uᵀPu, b = uᵀQu:
    ///   ∇F  = Σ 8m·v,                                  v = a·Pu + b·Qu,
    ///   ∇²F = Σ 32·vvᵀ + 8m(2·Pu Puᵀ + 2·Qu Quᵀ + aP + bQ),  m = a² + b².
    fn real_gradient_hessian(&self, u: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
        let d = self.dim;
        let n = 2 * d;
        debug_assert_eq!(u.len(), n);
        let psi = unembed(u);
        let mut w = vec![Complex64::new(0.0, 0.0); d];
        let mut wd = vec![Complex64::new(0.0, 0.0); d];
        let mut pu = vec![0.0; n];
        let mut qu = vec![0.0; n];
        let mut v = vec![0.0; n];
        let mut f = 0.0;
        let mut grad = vec![0.0; n];
        let mut hess = vec![0.0; n * n];
        for action in &self.actions {
            action.apply(&psi, &mut w);
            action.apply_adjoint(&psi, &mut wd);
            // Pu = ½·embed(Dψ + D†ψ), Qu = ½·embed(i(Dψ − D†ψ)).
            for k in 0..d {
                pu[k] = 0.5 * (w[k].re + wd[k].re);
                pu[k + d] = 0.5 * (w[k].im + wd[k].im);
                qu[k] = -0.5 * (w[k].im - wd[k].im);
                qu[k + d] = 0.5 * (w[k].re - wd[k].re);
            }
            let a = rdot(u, &pu);
            let b = rdot(u, &qu);
            let m = a * a + b * b;
            f += m * m;
            for k in 0..n {
                v[k] = a * pu[k] + b * qu[k];
                grad[k] += 8.0 * m * v[k];
            }
            rank_one(&mut hess, 32.0, &v);
            rank_one(&mut hess, 16.0 * m, &pu);
            rank_one(&mut hess, 16.0 * m, &qu);
            // aP + bQ term, walking the 4d nonzeros of the real embedding M
            // of D: P gets (M + Mᵀ)/2. b = −Im⟨ψ|Dψ⟩ so its form is
            // −(JM + (JM)ᵀ)/2, where (JM) row i' = M row i'+d for i' < d and
            // −(M row i'−d) otherwise.
            let ca = 8.0 * m * a * 0.5;
            let cb = 8.0 * m * b * 0.5;
            for c in 0..d {
                let r = action.perm[c];
                let z = action.phase[c];
                for (i, j, val) in [
                    (r, c, z.re),
                    (r, c + d, -z.im),
                    (r + d, c, z.im),
                    (r + d, c + d, z.re),
                ] {
                    hess[i * n + j] += ca * val;
                    hess[j * n + i] += ca * val;
                    let (ip, q_val) = if i >= d { (i - d, -val) } else { (i + d, val) };
                    hess[ip * n + j] += cb * q_val;
                    hess[j * n + ip] += cb * q_val;
                }
            }
        }
        (f, grad, hess)
    }
}

/// Σ_{p≠0} |⟨ψ|D_p ψ⟩|⁴ for a one-off evaluation; build a [`FramePotential`]
/// to amortize the group setup over many calls.
pub fn frame_potential(psi: &ComplexVector, spec: &GroupSpec) -> Result<f64> {
    FramePotential::new(spec)?.value(psi)
}

/// Frame-potential residual F(ψ) − (d−1)/(d+1).
pub fn frame_potential_residual(psi: &ComplexVector, spec: &GroupSpec) -> Result<f64> {
    FramePotential::new(spec)?.residual(psi)
}

fn rdot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// hess += alpha · x xᵀ.
fn rank_one(hess: &mut [f64], alpha: f64, x: &[f64]) {
    let n = x.len();
    for i in 0..n {
        let ai = alpha * x[i];
        for j in 0..n {
            hess[i * n + j] += ai * x[j];
        }
    }
}

/// (x; y) ← x + iy.
fn embed(psi: &[Complex64]) -> Vec<f64> {
    let d = psi.len();
    let mut u = vec![0.0; 2 * d];
    for k in 0..d {
        u[k] = psi[k].re;
        u[k + d] = psi[k].im;
    }
    u
}

fn unembed(u: &[f64]) -> Vec<Complex64> {
    let d = u.len() / 2;
    (0..d).map(|k| Complex64::new(u[k], u[k + d])).collect()
}

fn cnormalize(psi: &mut [Complex64]) {
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in psi.iter_mut() {
        *z /= norm;
    }
}

fn rnormalize(u: &mut [f64]) {
    let norm = rdot(u, u).sqrt();
    for x in u.iter_mut() {
        *x /= norm;
    }
}

/// Result of one restart's descent (before result selection).
struct RestartOutcome {
    psi: Vec<Complex64>,
    value: f64,
    residual: f64,
    /// Tangent-gradient norm at `psi`; infinite when polish never ran, so
    /// unpolished restarts always rank behind polished ones at equal
    /// residual bucket.
    pg_norm: f64,
    restart_index: usize,
    iterations: usize,
}

impl RestartOutcome {
    /// Ranking key: residual quantized to [`RESIDUAL_BUCKET`], then the
    /// tangent-gradient norm, then the restart index. The bucketing keeps
    /// the comparison transitive while letting the gradient norm decide
    /// between restarts whose residuals differ only by summation noise.
    fn rank(&self) -> (i64, f64, usize) {
        ((self.residual / RESIDUAL_BUCKET).round() as i64, self.pg_norm, self.restart_index)
    }
}

struct GdOutcome {
    psi: Vec<Complex64>,
    value: f64,
    iterations: usize,
}

/// Projected gradient descent on the unit sphere with backtracking Armijo
/// line search; the step size doubles after each success, capped at 1.
fn gradient_descent(
    ctx: &FramePotential,
    mut psi: Vec<Complex64>,
    target_residual: f64,
    max_iterations: usize,
) -> GdOutcome {
    let d = ctx.dim;
    let fmin = ctx.minimum();
    let mut w = vec![Complex64::new(0.0, 0.0); d];
    let mut wd = vec![Complex64::new(0.0, 0.0); d];
    let mut grad = vec![Complex64::new(0.0, 0.0); d];
    let mut cand = vec![Complex64::new(0.0, 0.0); d];
    let mut f_cur = ctx.value_slice(&psi);
    let mut t = 1.0f64;
    let mut iterations = 0;
    for _ in 0..max_iterations {
        if f_cur - fmin <= target_residual {
            break;
        }
        ctx.gradient_slice(&psi, &mut grad, &mut w, &mut wd);
        // Tangent projection: remove the radial component (the phase
        // direction iψ is untouched because F is phase invariant).
        let radial: f64 = psi.iter().zip(grad.iter()).map(|(p, g)| (p.conj() * g).re).sum();
        let mut gn2 = 0.0;
        for k in 0..d {
            grad[k] -= radial * psi[k];
            gn2 += grad[k].norm_sqr();
        }
        if gn2.sqrt() <= 1e-12 * f_cur.max(1.0) {
            break; // critical point (solution or local minimum)
        }
        t = (2.0 * t).min(1.0);
        let mut accepted = false;
        while t >= 1e-18 {
            for k in 0..d {
                cand[k] = psi[k] - t * grad[k];
            }
            cnormalize(&mut cand);
            let f_cand = ctx.value_slice(&cand);
            if f_cand <= f_cur - ARMIJO_C1 * t * gn2 {
                psi.copy_from_slice(&cand);
                f_cur = f_cand;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        iterations += 1;
        if !accepted {
            break; // line search collapsed; no further progress possible
        }
    }
    GdOutcome { psi, value: f_cur, iterations }
}

/// Orthonormal basis of the tangent space at u with the phase direction
/// removed: 2d − 2 columns spanning {u, iψ}⊥, built by Gram–Schmidt over
/// the standard basis.
fn tangent_basis(u: &[f64]) -> Vec<Vec<f64>> {
    let n = u.len();
    let d = n / 2;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    basis.push(u.to_vec());
    let mut ju = vec![0.0; n];
    for k in 0..d {
        ju[k] = -u[k + d];
        ju[k + d] = u[k];
    }
    rnormalize(&mut ju);
    basis.push(ju);
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let proj = rdot(&e, b);
                for i in 0..n {
                    e[i] -= proj * b[i];
                }
            }
        }
        let norm = rdot(&e, &e).sqrt();
        if norm > 1e-8 {
            for x in e.iter_mut() {
                *x /= norm;
            }
            basis.push(e);
        }
    }
    assert_eq!(basis.len(), n, "tangent basis completion failed");
    basis.split_off(2)
}

/// Newton-type refinement on the sphere. Each iteration solves the reduced
/// Riemannian Newton system Tᵀ(∇²F − (uᵀ∇F)I)T s = −Tᵀ∇F through a
/// truncated eigendecomposition: only eigenvalues above λ_max / 1e12 are
/// inverted, keeping the solved system's condition number at most 1e12.
/// (Dimensions with a continuum of SIC fiducials, such as d = 3, make the
/// reduced Hessian exactly singular at the solution; truncation is what
/// lets Newton converge there.) Negative eigenvalues are never inverted —
/// the step uses the positive part of the spectrum only, as in modified
/// Newton — and the candidate is accepted only if it decreases F. Falls
/// back to a gradient line-search step when no eigenvalue survives
/// truncation or the Newton candidate fails to decrease F.
/// Everything one polish iteration needs at a point: the objective, the
/// full-space gradient and its radial multiplier, the tangent-projected
/// gradient norm, and the spectrally-truncated Newton candidate (already
/// renormalized; `None` when no positive eigenvalue survives truncation).
struct NewtonProbe {
    f: f64,
    grad: Vec<f64>,
    lambda: f64,
    pg_norm: f64,
    newton: Option<Vec<f64>>,
}

fn newton_probe(ctx: &FramePotential, u: &[f64]) -> NewtonProbe {
    let n = u.len();
    let (f, grad, hess) = ctx.real_gradient_hessian(u);
    let lambda = rdot(u, &grad);
    let t_basis = tangent_basis(u);
    let m = t_basis.len(); // 2d − 2
    let pg: Vec<f64> = t_basis.iter().map(|col| rdot(col, &grad)).collect();
    let pg_norm = rdot(&pg, &pg).sqrt();
    // Reduced Hessian TᵀHT − λI, symmetrized exactly.
    let mut hr = vec![0.0; m * m];
    let mut ht = vec![0.0; n]; // H · t_s scratch
    for (s, ts) in t_basis.iter().enumerate() {
        for i in 0..n {
            ht[i] = rdot(&hess[i * n..(i + 1) * n], ts);
        }
        for (r, tr) in t_basis.iter().enumerate() {
            hr[r * m + s] = rdot(tr, &ht) - if r == s { lambda } else { 0.0 };
        }
    }
    for r in 0..m {
        for s in (r + 1)..m {
            let avg = 0.5 * (hr[r * m + s] + hr[s * m + r]);
            hr[r * m + s] = avg;
            hr[s * m + r] = avg;
        }
    }
    let mut newton: Option<Vec<f64>> = None;
    let embedded = ComplexMatrix::from_fn(m, |r, s| Complex64::new(hr[r * m + s], 0.0));
    if let Ok((evs, vecs)) = hermitian_eigensystem(&embedded) {
        let lmax = evs[m - 1];
        if lmax > 0.0 {
            let cutoff = lmax / HESSIAN_CONDITION_CAP;
            let mut step_r = vec![0.0; m];
            let mut kept = 0;
            for (k, &ev) in evs.iter().enumerate() {
                if ev > cutoff {
                    kept += 1;
                    let vk: Vec<f64> = (0..m).map(|i| vecs.get(i, k).re).collect();
                    let coef = -rdot(&vk, &pg) / ev;
                    for i in 0..m {
                        step_r[i] += coef * vk[i];
                    }
                }
            }
            if kept > 0 {
                let mut cand = u.to_vec();
                for (s, col) in t_basis.iter().enumerate() {
                    for i in 0..n {
                        cand[i] += step_r[s] * col[i];
                    }
                }
                rnormalize(&mut cand);
                newton = Some(cand);
            }
        }
    }
    NewtonProbe { f, grad, lambda, pg_norm, newton }
}

fn polish_steps(
    ctx: &FramePotential,
    psi0: &[Complex64],
    target_residual: f64,
    max_iterations: usize,
) -> (Vec<Complex64>, usize, f64) {
    let n = 2 * ctx.dim;
    let fmin = ctx.minimum();
    let mut u = embed(psi0);
    rnormalize(&mut u);
    let mut iterations = 0;
    let mut last_probe = None;
    for _ in 0..max_iterations {
        let probe = newton_probe(ctx, &u);
        if probe.f - fmin <= target_residual {
            last_probe = Some(probe);
            break;
        }
        let accepted_newton = match &probe.newton {
            Some(cand) => {
                let f_cand = ctx.value_slice(&unembed(cand));
                if f_cand < probe.f {
                    u = cand.clone();
                    true
                } else {
                    false
                }
            }
            None => false,
        };
        let advanced = accepted_newton || {
            // Gradient fallback with Armijo backtracking.
            let mut dir = probe.grad.clone();
            for i in 0..n {
                dir[i] = -(dir[i] - probe.lambda * u[i]);
            }
            let gn2 = rdot(&dir, &dir);
            let mut t = 1.0;
            let mut moved = false;
            if gn2.sqrt() > 1e-16 * probe.f.max(1.0) {
                while t >= 1e-18 {
                    let mut cand = u.clone();
                    for i in 0..n {
                        cand[i] += t * dir[i];
                    }
                    rnormalize(&mut cand);
                    let f_cand = ctx.value_slice(&unembed(&cand));
                    if f_cand <= probe.f - ARMIJO_C1 * t * gn2 {
                        u = cand;
                        moved = true;
                        break;
                    }
                    t *= 0.5;
                }
            }
            moved
        };
        iterations += 1;
        if !advanced {
            last_probe = Some(probe);
            break; // neither Newton nor gradient can improve: at fp limit
        }
    }
    // Endgame: the objective saturates its float resolution (~1 ULP of
    // F ≈ ½) while the tangent gradient is still measurable orders of
    // magnitude below it, so a few more Newton steps accepted on strict
    // gradient-norm descent sharpen the vector itself well past what any
    // F comparison can certify. The slack tolerates ULP-level wiggle in F.
    let mut best = last_probe.unwrap_or_else(|| newton_probe(ctx, &u));
    for _ in 0..POLISH_ENDGAME_STEPS {
        let Some(cand) = best.newton.clone() else { break };
        let probe = newton_probe(ctx, &cand);
        iterations += 1;
        if probe.pg_norm < best.pg_norm && probe.f <= best.f + ENDGAME_VALUE_SLACK {
            u = cand;
            best = probe;
        } else {
            break;
        }
    }
    (unembed(&u), iterations, best.pg_norm)
}

/// High-precision refinement of a near-solution. Requires the input's
/// residual to be at most 1e−6; returns a fiducial with residual at most
/// `target` or the best double precision affords, with unit norm and phase
/// canonicalization preserved. An input already at `target` is returned
/// unchanged.
pub fn polish(f: &Fiducial, target: f64) -> Result<Fiducial> {
    let ctx = FramePotential::new(f.group())?;
    let start = ctx.residual(f.vector())?;
    if start > POLISH_ENTRY_RESIDUAL {
        return Err(Error::NotNearSolution { residual: start });
    }
    if start <= target {
        return Ok(f.clone());
    }
    let (psi, _, _) = polish_steps(&ctx, f.vector().entries(), target, POLISH_MAX_ITERATIONS);
    let vector = ComplexVector::new(ctx.dim(), psi)?;
    Fiducial::new(f.label().to_string(), *f.group(), vector)
}

/// Runs `config.restarts` independent seeded descents (in parallel when a
/// rayon pool is available) and returns the best by (residual,
/// restart_index). If no restart reaches `config.tolerance` the best result
/// is still returned, inside [`Error::Exhausted`].
pub fn search_fiducial(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let spec = GroupSpec::single(config.dim)?;
    let ctx = FramePotential::new(&spec)?;
    let gd_target = config.tolerance.min(GD_HANDOFF_RESIDUAL);
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(config.seed ^ (r as u64)));
            let start = random_unit_vector(config.dim, &mut rng);
            let gd = gradient_descent(&ctx, start.entries().to_vec(), gd_target, config.max_iterations);
            let mut psi = gd.psi;
            let mut value = gd.value;
            let mut iterations = gd.iterations;
            let mut pg_norm = f64::INFINITY;
            if value - ctx.minimum() <= POLISH_ENTRY_RESIDUAL {
                let (polished, extra, pg) =
                    polish_steps(&ctx, &psi, config.polish_tolerance, POLISH_MAX_ITERATIONS);
                value = ctx.value_slice(&polished);
                psi = polished;
                iterations += extra;
                pg_norm = pg;
            }
            RestartOutcome {
                residual: value - ctx.minimum(),
                value,
                pg_norm,
                restart_index: r,
                iterations,
                psi,
            }
        })
        .collect();
    let best = outcomes
        .into_iter()
        .min_by(|a, b| {
            let (ab, ap, ai) = a.rank();
            let (bb, bp, bi) = b.rank();
            ab.cmp(&bb).then(ap.total_cmp(&bp)).then(ai.cmp(&bi))
        })
        .expect("at least one restart");
    let vector = ComplexVector::new(config.dim, best.psi)?;
    let fiducial = Fiducial::new(
        format!("search-d{}-seed{}", config.dim, config.seed),
        spec,
        vector,
    )?;
    let result = SearchResult {
        fiducial,
        residual: best.residual,
        restart_index: best.restart_index,
        iterations_used: best.iterations,
        potential_value: best.value,
    };
    if result.residual <= config.tolerance {
        Ok(result)
    } else {
        Err(Error::Exhausted {
            restarts: config.restarts,
            residual: result.residual,
            best: Box::new(result),
        })
    }
}

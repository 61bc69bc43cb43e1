//! Weyl–Heisenberg groups: the shift and phase operators X and Z with
//! ZX = ωXZ, displacement operators X^m Z^n, and the three-qubit
//! tensor-product group that generates the d = 8 Hoggar SIC.
//!
//! Displacements are defined as D = X^m Z^n with no extra phase factor: SIC
//! membership depends only on the projectors |⟨ψ|Dψ⟩|², which are
//! phase-insensitive, so the conventional dimension-dependent phase is
//! omitted throughout.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{tensor, ComplexMatrix};
use crate::{Error, Result};

/// Which Weyl–Heisenberg group: a single dimension-d copy, or the k-fold
/// tensor power of the base_d-dimensional group (order base_d^(2k)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(try_from = "RawGroupSpec")]
pub enum GroupSpec {
    Single { d: usize },
    TensorPower { base_d: usize, k: usize },
}

/// Unvalidated mirror of [`GroupSpec`] for deserialization.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawGroupSpec {
    Single { d: usize },
    TensorPower { base_d: usize, k: usize },
}

impl TryFrom<RawGroupSpec> for GroupSpec {
    type Error = Error;
    fn try_from(raw: RawGroupSpec) -> Result<Self> {
        match raw {
            RawGroupSpec::Single { d } => GroupSpec::single(d),
            RawGroupSpec::TensorPower { base_d, k } => GroupSpec::tensor_power(base_d, k),
        }
    }
}

impl GroupSpec {
    /// Single-copy group in dimension d ≥ 2.
    pub fn single(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::BadDimension { d, reason: "groups need dimension at least 2" });
        }
        Ok(GroupSpec::Single { d })
    }

    /// k-fold tensor power of the base_d-dimensional group (base_d ≥ 2, k ≥ 1).
    pub fn tensor_power(base_d: usize, k: usize) -> Result<Self> {
        if base_d < 2 {
            return Err(Error::BadDimension { d: base_d, reason: "groups need base dimension at least 2" });
        }
        if k < 1 {
            return Err(Error::BadDimension { d: k, reason: "tensor power needs at least one factor" });
        }
        Ok(GroupSpec::TensorPower { base_d, k })
    }

    /// Hilbert-space dimension the group acts on.
    pub fn dim(&self) -> usize {
        match *self {
            GroupSpec::Single { d } => d,
            GroupSpec::TensorPower { base_d, k } => base_d.pow(k as u32),
        }
    }

    /// Number of displacement operators: d² for single(d), base_d^(2k) for
    /// the tensor power.
    pub fn order(&self) -> usize {
        let d = self.dim();
        d * d
    }

    /// Number of tensor factors (1 for single).
    pub fn factors(&self) -> usize {
        match *self {
            GroupSpec::Single { .. } => 1,
            GroupSpec::TensorPower { k, .. } => k,
        }
    }

    /// Per-factor dimension.
    pub fn factor_dim(&self) -> usize {
        match *self {
            GroupSpec::Single { d } => d,
            GroupSpec::TensorPower { base_d, .. } => base_d,
        }
    }
}

/// Phase-space index of a displacement: one (m, n) pair per tensor factor,
/// each reduced into [0, d). (m, n) addresses X^m Z^n on that factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplacementIndex {
    components: Vec<(usize, usize)>,
}

impl DisplacementIndex {
    /// Builds an index for `spec`, reducing each pair mod the factor dimension.
    pub fn new(spec: &GroupSpec, pairs: &[(usize, usize)]) -> Result<Self> {
        if pairs.len() != spec.factors() {
            return Err(Error::ShapeMismatch {
                reason: format!(
                    "displacement index has {} pairs but the group has {} factors",
                    pairs.len(),
                    spec.factors()
                ),
            });
        }
        let d = spec.factor_dim();
        Ok(DisplacementIndex {
            components: pairs.iter().map(|&(m, n)| (m % d, n % d)).collect(),
        })
    }

    /// The `ordinal`-th index in lexicographic order (leftmost pair slowest;
    /// within a pair, m before n). Ordinal 0 is the identity.
    pub fn from_ordinal(spec: &GroupSpec, ordinal: usize) -> Result<Self> {
        if ordinal >= spec.order() {
            return Err(Error::ShapeMismatch {
                reason: format!("ordinal {} out of range for group order {}", ordinal, spec.order()),
            });
        }
        let d = spec.factor_dim();
        let k = spec.factors();
        let mut digits = vec![0usize; 2 * k];
        let mut rest = ordinal;
        for slot in (0..2 * k).rev() {
            digits[slot] = rest % d;
            rest /= d;
        }
        let components = (0..k).map(|f| (digits[2 * f], digits[2 * f + 1])).collect();
        Ok(DisplacementIndex { components })
    }

    pub fn components(&self) -> &[(usize, usize)] {
        &self.components
    }

    /// True iff every (m, n) is (0, 0).
    pub fn is_identity(&self) -> bool {
        self.components.iter().all(|&(m, n)| m == 0 && n == 0)
    }
}

/// Shift operator X with X|j⟩ = |j+1 mod d⟩; a permutation matrix, X^d = I
/// exactly.
pub fn shift_op(d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::BadDimension { d, reason: "shift operator needs dimension at least 2" });
    }
    Ok(ComplexMatrix::from_fn(d, |r, c| {
        if r == (c + 1) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Phase operator Z = diag(ω^j) with ω = exp(2πi/d); Z^d = I within 1e−12.
pub fn phase_op(d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::BadDimension { d, reason: "phase operator needs dimension at least 2" });
    }
    Ok(ComplexMatrix::from_fn(d, |r, c| {
        if r == c {
            root_of_unity(d, r)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// ω_d^power, computed from the angle to keep |ω^k| == 1 exactly.
pub fn root_of_unity(d: usize, power: usize) -> Complex64 {
    let angle = 2.0 * std::f64::consts::PI * (power % d) as f64 / d as f64;
    Complex64::new(angle.cos(), angle.sin())
}

/// Displacement operator for one factor: X^m Z^n, with the single nonzero
/// entry per column written directly ((X^m Z^n)|c⟩ = ω^{nc} |c+m⟩).
fn single_displacement(d: usize, m: usize, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |r, c| {
        if r == (c + m) % d {
            root_of_unity(d, (n * c) % d)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Displacement operator for `idx`: X^m Z^n per factor, Kronecker-multiplied
/// in factor order (leftmost index pair acts on the leftmost factor).
pub fn displacement(spec: &GroupSpec, idx: &DisplacementIndex) -> Result<ComplexMatrix> {
    if idx.components.len() != spec.factors() {
        return Err(Error::ShapeMismatch {
            reason: format!(
                "displacement index has {} pairs but the group has {} factors",
                idx.components.len(),
                spec.factors()
            ),
        });
    }
    let d = spec.factor_dim();
    let mut out: Option<ComplexMatrix> = None;
    for &(m, n) in &idx.components {
        let factor = single_displacement(d, m % d, n % d);
        out = Some(match out {
            None => factor,
            Some(acc) => tensor(&acc, &factor)?,
        });
    }
    Ok(out.expect("at least one factor"))
}

/// All `spec.order()` displacements in lexicographic index order; the first
/// element is the identity.
pub fn all_displacements(spec: &GroupSpec) -> Result<Vec<ComplexMatrix>> {
    (0..spec.order())
        .map(|t| displacement(spec, &DisplacementIndex::from_ordinal(spec, t)?))
        .collect()
}

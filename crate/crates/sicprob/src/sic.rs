//! SIC construction and verification: group orbits of fiducial vectors, the
//! equiangularity / resolution-of-identity checks, the built-in catalog
//! (qubit tetrahedron, the d = 3 Hesse fiducial, the d = 8 Hoggar fiducial),
//! Bloch-sphere qubit formulas, and the dimension-tower classifier.
//!
//! A SIC in dimension d is a set of d² unit vectors whose pairwise squared
//! overlaps all equal 1/(d+1); the matching rank-1 projectors, rescaled by
//! 1/d, form an informationally complete measurement.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian_eigensystem, hermitian_eigenvalues, outer, ComplexMatrix, ComplexVector};
use crate::wh::{all_displacements, GroupSpec};
use crate::{Error, Result};

/// How far a stored fiducial may drift from unit norm before rejection.
pub const FIDUCIAL_UNIT_TOL: f64 = 1e-12;

/// A labelled candidate fiducial vector together with the group whose orbit
/// is meant to form a SIC. Stored unit-normalized with the global phase
/// fixed so the first nonzero component is real positive.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawFiducial", into = "RawFiducial")]
pub struct Fiducial {
    label: String,
    group: GroupSpec,
    vector: ComplexVector,
}

/// Unvalidated mirror of [`Fiducial`] for (de)serialization; `dim` is stored
/// redundantly in the file format and cross-checked on the way in.
#[derive(Serialize, Deserialize)]
struct RawFiducial {
    label: String,
    dim: usize,
    group: GroupSpec,
    vector: ComplexVector,
}

impl TryFrom<RawFiducial> for Fiducial {
    type Error = Error;
    fn try_from(raw: RawFiducial) -> Result<Self> {
        if raw.dim != raw.group.dim() {
            return Err(Error::DimensionMismatch { expected: raw.group.dim(), got: raw.dim });
        }
        Fiducial::new(raw.label, raw.group, raw.vector)
    }
}

impl From<Fiducial> for RawFiducial {
    fn from(f: Fiducial) -> Self {
        RawFiducial { label: f.label, dim: f.group.dim(), group: f.group, vector: f.vector }
    }
}

impl Fiducial {
    /// Validates dimensions and unit norm, then stores the vector in
    /// canonical form (renormalized, first nonzero component real positive).
    pub fn new(label: impl Into<String>, group: GroupSpec, vector: ComplexVector) -> Result<Self> {
        if vector.dim() != group.dim() {
            return Err(Error::DimensionMismatch { expected: group.dim(), got: vector.dim() });
        }
        let norm = vector.norm();
        if (norm - 1.0).abs() > FIDUCIAL_UNIT_TOL {
            return Err(Error::NotAState {
                reason: format!("fiducial vector norm {norm} is not 1 within 1e-12"),
            });
        }
        Ok(Fiducial {
            label: label.into(),
            group,
            vector: vector.normalized().phase_canonicalized(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn vector(&self) -> &ComplexVector {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }
}

/// A full candidate SIC: the d² orbit vectors and their rank-1 projectors.
/// Construction does not check the SIC condition; see [`verify_sic`].
#[derive(Clone, Debug)]
pub struct Sic {
    dim: usize,
    vectors: Vec<ComplexVector>,
    projectors: Vec<ComplexMatrix>,
}

impl Sic {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The d² orbit vectors, in displacement enumeration order.
    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    /// The d² rank-1 projectors |ψᵢ⟩⟨ψᵢ|, aligned with [`Self::vectors`].
    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn outcomes(&self) -> usize {
        self.vectors.len()
    }
}

/// Result of checking a candidate SIC against the defining conditions at a
/// given tolerance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub dim: usize,
    /// max over i≠j of | |⟨ψᵢ|ψⱼ⟩|² − 1/(d+1) |.
    pub max_overlap_deviation: f64,
    /// entrywise max of |Σᵢ Πᵢ/d − I|.
    pub max_resolution_deviation: f64,
    pub pass: bool,
    pub tolerance: f64,
}

/// Applies every displacement of the fiducial's group to its vector. The
/// result has d² entries; entry 0 is the fiducial itself (identity
/// displacement).
pub fn orbit(f: &Fiducial) -> Result<Sic> {
    let displacements = all_displacements(f.group())?;
    let mut vectors = Vec::with_capacity(displacements.len());
    let mut projectors = Vec::with_capacity(displacements.len());
    for d in &displacements {
        let v = d.apply(f.vector())?;
        projectors.push(outer(&v, &v)?);
        vectors.push(v);
    }
    Ok(Sic { dim: f.dim(), vectors, projectors })
}

/// Checks the two SIC conditions — equiangular overlaps 1/(d+1) and
/// resolution of the identity Σ Πᵢ/d = I — and reports the worst deviations.
pub fn verify_sic(s: &Sic, tol: f64) -> VerificationReport {
    let d = s.dim;
    let target = 1.0 / (d as f64 + 1.0);
    let mut max_overlap_deviation: f64 = 0.0;
    for i in 0..s.vectors.len() {
        for j in (i + 1)..s.vectors.len() {
            let ov = crate::linalg::inner(&s.vectors[i], &s.vectors[j])
                .expect("orbit vectors share a dimension")
                .norm_sqr();
            max_overlap_deviation = max_overlap_deviation.max((ov - target).abs());
        }
    }
    let mut sum = ComplexMatrix::zeros(d);
    for p in &s.projectors {
        sum = sum.add(p).expect("projectors share a dimension");
    }
    let resolution = sum.scaled(Complex64::new(1.0 / d as f64, 0.0));
    let max_resolution_deviation = resolution.max_abs_diff(&ComplexMatrix::identity(d));
    VerificationReport {
        dim: d,
        max_overlap_deviation,
        max_resolution_deviation,
        pass: max_overlap_deviation <= tol && max_resolution_deviation <= tol,
        tolerance: tol,
    }
}

/// The four qubit SIC projectors Π(s,r) = ½(I + (s·σx + r·σy + s·r·σz)/√3)
/// in the fixed order (+,+), (+,−), (−,+), (−,−). Their Bloch vectors form
/// a regular tetrahedron.
pub fn qubit_tetrahedron() -> [ComplexMatrix; 4] {
    let mut out: Vec<ComplexMatrix> = Vec::with_capacity(4);
    let inv_sqrt3 = 1.0 / 3.0f64.sqrt();
    for (s, r) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let (x, y, z) = (s * inv_sqrt3, r * inv_sqrt3, s * r * inv_sqrt3);
        // ½(I + xσx + yσy + zσz), written out entrywise.
        let m = ComplexMatrix::new(
            2,
            vec![
                Complex64::new(0.5 * (1.0 + z), 0.0),
                Complex64::new(0.5 * x, -0.5 * y),
                Complex64::new(0.5 * x, 0.5 * y),
                Complex64::new(0.5 * (1.0 - z), 0.0),
            ],
        )
        .expect("2x2 literal");
        out.push(m);
    }
    out.try_into().expect("exactly four")
}

/// SIC outcome probabilities for the qubit state with Bloch coordinates
/// (x, y, z): p(s,r) = 1/4 + (√3/12)(s·x + r·y + s·r·z), in tetrahedron
/// order. Valid Bloch points (|r| ≤ 1) always give probabilities in [0, 1/2]
/// summing to 1.
pub fn qubit_sic_probs(x: f64, y: f64, z: f64) -> Result<[f64; 4]> {
    let norm_sq = x * x + y * y + z * z;
    if norm_sq > 1.0 + 1e-9 {
        return Err(Error::OffBlochSphere { norm_sq });
    }
    let c = 3.0f64.sqrt() / 12.0;
    Ok([
        0.25 + c * (x + y + z),
        0.25 + c * (x - y - z),
        0.25 + c * (-x + y - z),
        0.25 + c * (-x - y + z),
    ])
}

/// Density matrix ½(I + xσx + yσy + zσz) for a Bloch vector inside the unit
/// ball.
pub fn bloch_state(x: f64, y: f64, z: f64) -> Result<ComplexMatrix> {
    let norm_sq = x * x + y * y + z * z;
    if norm_sq > 1.0 + 1e-9 {
        return Err(Error::OffBlochSphere { norm_sq });
    }
    ComplexMatrix::new(
        2,
        vec![
            Complex64::new(0.5 * (1.0 + z), 0.0),
            Complex64::new(0.5 * x, -0.5 * y),
            Complex64::new(0.5 * x, 0.5 * y),
            Complex64::new(0.5 * (1.0 - z), 0.0),
        ],
    )
}

/// Built-in fiducials: d = 2 (extracted from the tetrahedron), d = 3
/// ((0, 1, −1)/√2), and d = 8 ((−1+2i, 1, 1, 1, 1, 1, 1, 1)/√12 under the
/// three-qubit tensor-power group).
pub fn builtin_fiducial(d: usize) -> Result<Fiducial> {
    match d {
        2 => {
            // Top eigenvector (eigenvalue 1) of the first tetrahedron
            // projector; the orbit regenerates all four.
            let pi = &qubit_tetrahedron()[0];
            let (_, vecs) = hermitian_eigensystem(pi)?;
            let top = vecs.column(1);
            Fiducial::new("qubit-tetrahedron", GroupSpec::single(2)?, top)
        }
        3 => {
            let s = 1.0 / 2.0f64.sqrt();
            let v = ComplexVector::new(
                3,
                vec![
                    Complex64::new(0.0, 0.0),
                    Complex64::new(s, 0.0),
                    Complex64::new(-s, 0.0),
                ],
            )?;
            Fiducial::new("hesse", GroupSpec::single(3)?, v)
        }
        8 => {
            let mut entries = vec![Complex64::new(-1.0, 2.0)];
            entries.extend(std::iter::repeat_n(Complex64::new(1.0, 0.0), 7));
            // |−1+2i|² + 7·1² = 12.
            let v = ComplexVector::new(8, entries)?.normalized();
            Fiducial::new("hoggar", GroupSpec::tensor_power(2, 3)?, v)
        }
        _ => Err(Error::NoBuiltin { d }),
    }
}

/// All built-in fiducials, catalog order.
pub fn builtin_catalog() -> Vec<Fiducial> {
    [2, 3, 8]
        .into_iter()
        .map(|d| builtin_fiducial(d).expect("built-in dimensions"))
        .collect()
}

/// Squarefree part of (d−3)(d+1) for d ≥ 4. Dimensions with equal output
/// have SIC fiducials living over the same real quadratic field; the first
/// such tower is {4, 8, 19, 48, …} over class 5.
pub fn dimension_tower_class(d: u64) -> Result<u64> {
    if d < 4 {
        return Err(Error::BadDimension {
            d: d as usize,
            reason: "the tower radicand (d-3)(d+1) needs d at least 4",
        });
    }
    Ok(squarefree_part((d - 3) * (d + 1)))
}

/// Largest squarefree divisor n/k² via trial division (inputs here are tiny).
fn squarefree_part(mut n: u64) -> u64 {
    let mut out = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0u32;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e % 2 == 1 {
                out *= p;
            }
        }
        p += 1;
    }
    out * n
}

/// Gram matrix of the projectors under the trace inner product,
/// Gᵢⱼ = tr(ΠᵢΠⱼ). For a true SIC this is δᵢⱼ + (1−δᵢⱼ)/(d+1), whose
/// minimum eigenvalue d/(d+1) certifies linear independence.
pub fn projector_gram(s: &Sic) -> ComplexMatrix {
    let n = s.projectors.len();
    ComplexMatrix::from_fn(n, |i, j| {
        s.projectors[i]
            .mul(&s.projectors[j])
            .expect("shared dimension")
            .trace()
    })
}

/// Minimum eigenvalue of the projector Gram matrix.
pub fn gram_min_eigenvalue(s: &Sic) -> Result<f64> {
    let evs = hermitian_eigenvalues(&projector_gram(s))?;
    Ok(evs[0])
}

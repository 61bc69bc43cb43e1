//! Minimal dense complex linear algebra for Hilbert dimensions up to a few
//! hundred: products, tensor products, Hermitian eigendecomposition, partial
//! trace, and positivity tests.
//!
//! All values are immutable after construction and safe to share across
//! threads. The eigensolver is a cyclic Jacobi iteration for Hermitian
//! matrices — dependency-free and accurate at these sizes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Hard cap on dense dimensions (tensor products refuse to exceed this).
pub const DIM_CAP: usize = 4096;
/// Tolerance used when validating hermiticity.
pub const HERM_TOL: f64 = 1e-12;
/// Tolerance used when validating unitarity.
pub const UNITARY_TOL: f64 = 1e-10;
/// Jacobi sweep budget.
const JACOBI_MAX_SWEEPS: usize = 100;
/// Jacobi off-diagonal convergence threshold (scaled by the input norm).
const JACOBI_OFF_TOL: f64 = 1e-13;

/// Dense complex column vector of unit-less amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEntries", into = "RawEntries")]
pub struct ComplexVector {
    dim: usize,
    entries: Vec<Complex64>,
}

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEntries", into = "RawEntries")]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

/// JSON shape shared by vectors and matrices: `{"dim": n, "entries": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct RawEntries {
    dim: usize,
    entries: Vec<(f64, f64)>,
}

impl From<ComplexVector> for RawEntries {
    fn from(v: ComplexVector) -> Self {
        RawEntries {
            dim: v.dim,
            entries: v.entries.iter().map(|z| (z.re, z.im)).collect(),
        }
    }
}

impl TryFrom<RawEntries> for ComplexVector {
    type Error = Error;
    fn try_from(raw: RawEntries) -> Result<Self> {
        ComplexVector::new(
            raw.dim,
            raw.entries.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
        )
    }
}

impl From<ComplexMatrix> for RawEntries {
    fn from(m: ComplexMatrix) -> Self {
        RawEntries {
            dim: m.dim,
            entries: m.entries.iter().map(|z| (z.re, z.im)).collect(),
        }
    }
}

impl TryFrom<RawEntries> for ComplexMatrix {
    type Error = Error;
    fn try_from(raw: RawEntries) -> Result<Self> {
        ComplexMatrix::new(
            raw.dim,
            raw.entries.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
        )
    }
}

impl ComplexVector {
    /// Builds a vector after checking the entry count matches `dim`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim.max(1), got: entries.len() });
        }
        Ok(ComplexVector { dim, entries })
    }

    /// The all-zero vector.
    pub fn zeros(dim: usize) -> Self {
        ComplexVector { dim, entries: vec![Complex64::new(0.0, 0.0); dim] }
    }

    /// Standard basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[k] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.entries[i]
    }

    /// Squared Euclidean norm ⟨v|v⟩.
    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Whether |⟨v|v⟩ − 1| ≤ 1e−12.
    pub fn is_unit(&self) -> bool {
        (self.norm_sq() - 1.0).abs() <= HERM_TOL
    }

    /// Returns the vector scaled to unit norm.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        self.scaled(Complex64::new(1.0 / n, 0.0))
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        ComplexVector {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        Ok(ComplexVector {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Rotates the global phase so the first entry with modulus > 1e−12 is
    /// real and positive. Stable canonical form for file output and tests.
    pub fn phase_canonicalized(&self) -> Self {
        for z in &self.entries {
            if z.norm() > 1e-12 {
                let phase = z / z.norm();
                return self.scaled(phase.conj());
            }
        }
        self.clone()
    }

    /// Kronecker product of two vectors.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let dim = check_cap(self.dim * other.dim)?;
        let mut entries = Vec::with_capacity(dim);
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a * b);
            }
        }
        Ok(ComplexVector { dim, entries })
    }
}

/// ⟨u|v⟩ with conjugation on the first argument.
pub fn inner(u: &ComplexVector, v: &ComplexVector) -> Result<Complex64> {
    check_dims(u.dim, v.dim)?;
    Ok(u.entries
        .iter()
        .zip(&v.entries)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

impl ComplexMatrix {
    /// Builds a matrix after checking the entry count is `dim²`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim.max(1) * dim.max(1), got: entries.len() });
        }
        Ok(ComplexMatrix { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds from a function of (row, col).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        ComplexMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, z: Complex64) {
        self.entries[r * self.dim + c] = z;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        Ok(ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..d {
                    out.entries[r * d + c] += a * other.get(k, c);
                }
            }
        }
        Ok(out)
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        check_dims(self.dim, v.dim)?;
        let d = self.dim;
        let mut out = ComplexVector::zeros(d);
        for r in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..d {
                acc += self.get(r, c) * v.entries[c];
            }
            out.entries[r] = acc;
        }
        Ok(out)
    }

    /// Column `c` as a vector (e.g. an eigenvector from
    /// [`hermitian_eigensystem`]).
    pub fn column(&self, c: usize) -> ComplexVector {
        ComplexVector::new(self.dim, (0..self.dim).map(|r| self.get(r, c)).collect())
            .expect("square matrix columns are well-formed")
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |M − M†| over entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                dev = dev.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        dev
    }

    /// max |M†M − I| over entries.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.adjoint().mul(self).expect("same dim");
        prod.max_abs_diff(&Self::identity(self.dim))
    }

    /// Errors with [`Error::NotHermitian`] unless max |M − M†| ≤ 1e−12.
    pub fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation > HERM_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    /// Errors with [`Error::NotUnitary`] unless max |U†U − I| ≤ 1e−10.
    pub fn require_unitary(&self) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(())
    }
}

/// Rank-1 operator |u⟩⟨v|.
pub fn outer(u: &ComplexVector, v: &ComplexVector) -> Result<ComplexMatrix> {
    check_dims(u.dim, v.dim)?;
    Ok(ComplexMatrix::from_fn(u.dim, |r, c| {
        u.entries[r] * v.entries[c].conj()
    }))
}

/// Kronecker product; result dimension is the product of the operand dimensions.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = check_cap(a.dim * b.dim)?;
    let db = b.dim;
    Ok(ComplexMatrix::from_fn(dim, |r, c| {
        a.get(r / db, c / db) * b.get(r % db, c % db)
    }))
}

/// Traces out factor `traced_index` of a matrix on a tensor-product space
/// with the given factor dimensions. Preserves the trace and hermiticity.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: &[usize],
    traced_index: usize,
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if total != m.dim || dims.is_empty() {
        return Err(Error::DimensionMismatch { expected: m.dim, got: total });
    }
    if traced_index >= dims.len() {
        return Err(Error::ShapeMismatch {
            reason: format!("traced_index {} out of range for {} factors", traced_index, dims.len()),
        });
    }
    let dk = dims[traced_index];
    // Stride of the traced factor and of the kept part split around it.
    let right: usize = dims[traced_index + 1..].iter().product();
    let left: usize = dims[..traced_index].iter().product();
    let out_dim = left * right;
    let mut out = ComplexMatrix::zeros(out_dim);
    for lr in 0..left {
        for rr in 0..right {
            for lc in 0..left {
                for rc in 0..right {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for t in 0..dk {
                        let row = (lr * dk + t) * right + rr;
                        let col = (lc * dk + t) * right + rc;
                        acc += m.get(row, col);
                    }
                    out.set(lr * right + rr, lc * right + rc, acc);
                }
            }
        }
    }
    Ok(out)
}

/// Ascending eigenvalues of a Hermitian matrix (cyclic Jacobi).
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigensystem(m).map(|(vals, _)| vals)
}

/// Ascending eigenvalues and matching eigenvector columns of a Hermitian
/// matrix, via cyclic Jacobi rotations (sweep budget 100, off-diagonal
/// threshold 1e−13 relative to the input norm).
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    m.require_hermitian()?;
    let n = m.dim;
    let mut a = m.clone();
    // Symmetrize exactly so rounding in the input cannot bias the iteration.
    for r in 0..n {
        for c in 0..n {
            if r == c {
                let z = a.get(r, r);
                a.set(r, r, Complex64::new(z.re, 0.0));
            } else if r < c {
                let z = (a.get(r, c) + a.get(c, r).conj()) * Complex64::new(0.5, 0.0);
                a.set(r, c, z);
                a.set(c, r, z.conj());
            }
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let thresh = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);
    let mut off = off_diagonal_max(&a);
    let mut sweeps = 0;
    while off > thresh {
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a.get(p, q);
                let gn = g.norm();
                if gn <= thresh * 1e-3 {
                    continue;
                }
                // Factor out the phase so the 2×2 block is real symmetric,
                // then apply the classical Jacobi rotation.
                let phase = g / gn; // e^{iφ}
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * gn);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J is identity except rows/cols p,q:
                //   J[p][p] = c        J[p][q] = s
                //   J[q][p] = −s e^{−iφ}   J[q][q] = c e^{−iφ}
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -Complex64::new(s, 0.0) * phase.conj();
                let jqq = Complex64::new(c, 0.0) * phase.conj();
                // A ← J† A J ; update columns then rows.
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * jpp + akq * jqp);
                    a.set(k, q, akp * jpq + akq * jqq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, jpp.conj() * apk + jqp.conj() * aqk);
                    a.set(q, k, jpq.conj() * apk + jqq.conj() * aqk);
                }
                // Clean the eliminated pair and enforce real diagonal.
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
                let dpp = a.get(p, p);
                let dqq = a.get(q, q);
                a.set(p, p, Complex64::new(dpp.re, 0.0));
                a.set(q, q, Complex64::new(dqq.re, 0.0));
                // V ← V J accumulates eigenvectors.
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * jpp + vkq * jqp);
                    v.set(k, q, vkp * jpq + vkq * jqq);
                }
            }
        }
        sweeps += 1;
        off = off_diagonal_max(&a);
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v.get(r, order[c]));
    Ok((values, vectors))
}

fn off_diagonal_max(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in (r + 1)..n {
            worst = worst.max(a.get(r, c).norm());
        }
    }
    worst
}

/// True iff the minimum eigenvalue of Hermitian `m` is ≥ −tol.
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    let vals = hermitian_eigenvalues(m)?;
    Ok(vals.first().map(|&v| v >= -tol).unwrap_or(true))
}

/// Applies a real function to the spectrum of a Hermitian matrix:
/// f(M) = V f(Λ) V†. Used for PSD square roots and inverses.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (vals, vecs) = hermitian_eigensystem(m)?;
    let n = m.dim;
    let mut out = ComplexMatrix::zeros(n);
    for (k, &lambda) in vals.iter().enumerate() {
        let flambda = f(lambda);
        if flambda == 0.0 {
            continue;
        }
        for r in 0..n {
            for c in 0..n {
                let contrib = vecs.get(r, k) * vecs.get(c, k).conj() * flambda;
                let cur = out.get(r, c);
                out.set(r, c, cur + contrib);
            }
        }
    }
    Ok(out)
}

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

fn check_cap(dim: usize) -> Result<usize> {
    if dim > DIM_CAP {
        return Err(Error::SizeOverflow { dim, cap: DIM_CAP });
    }
    Ok(dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
    }

    fn random_hermitian(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let m = random_matrix(dim, rng);
        m.add(&m.adjoint()).unwrap().scaled(c(0.5, 0.0))
    }

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn inner_orthonormal_basis() {
        let e1 = ComplexVector::basis(2, 0);
        let e2 = ComplexVector::basis(2, 1);
        assert_eq!(inner(&e1, &e1).unwrap(), c(1.0, 0.0));
        assert_eq!(inner(&e1, &e2).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn inner_conjugates_first_argument() {
        let s = 1.0 / 2f64.sqrt();
        let u = ComplexVector::new(2, vec![c(s, 0.0), c(0.0, s)]).unwrap();
        let v = ComplexVector::new(2, vec![c(s, 0.0), c(0.0, -s)]).unwrap();
        // ⟨u|v⟩ = (1·1 + (−i)(−i))/2 = 0
        assert!(inner(&u, &v).unwrap().norm() < 1e-15);
        // and ⟨u|u⟩ = 1 despite the complex entry
        assert!((inner(&u, &u).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn inner_dimension_mismatch() {
        let u = ComplexVector::basis(2, 0);
        let v = ComplexVector::basis(3, 0);
        assert!(matches!(inner(&u, &v), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn tensor_identities() {
        let i2 = ComplexMatrix::identity(2);
        let i4 = ComplexMatrix::identity(4);
        assert_eq!(tensor(&i2, &i2).unwrap(), i4);

        let sx = sigma_x();
        let t = tensor(&sx, &i2).unwrap();
        // σx ⊗ I₂ swaps the two 2-dim blocks.
        assert_eq!(t.get(0, 2), c(1.0, 0.0));
        assert_eq!(t.get(1, 3), c(1.0, 0.0));
        assert_eq!(t.get(2, 0), c(1.0, 0.0));
        assert_eq!(t.get(3, 1), c(1.0, 0.0));
        assert_eq!(t.get(0, 0), c(0.0, 0.0));
        assert_eq!(t.dim(), 4);
    }

    #[test]
    fn tensor_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(2, &mut rng);
        let b = random_matrix(2, &mut rng);
        let cm = random_matrix(2, &mut rng);
        let left = tensor(&tensor(&a, &b).unwrap(), &cm).unwrap();
        let right = tensor(&a, &tensor(&b, &cm).unwrap()).unwrap();
        // Entries are triple products grouped differently, so equality only
        // holds to rounding.
        assert!(left.max_abs_diff(&right) < 1e-15);
    }

    #[test]
    fn tensor_respects_cap() {
        let big = ComplexMatrix::identity(100);
        assert!(matches!(tensor(&big, &big), Err(Error::SizeOverflow { .. })));
    }

    #[test]
    fn eigenvalues_trivial_cases() {
        let vals = hermitian_eigenvalues(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(vals, vec![1.0, 1.0, 1.0]);

        let vals = hermitian_eigenvalues(&sigma_x()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);

        let d = ComplexMatrix::from_fn(3, |r, c_| {
            if r == c_ {
                c([3.0, 1.0, 2.0][r], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let vals = hermitian_eigenvalues(&d).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    // Reference values are recorded at full double precision on purpose.
    #[allow(clippy::excessive_precision)]
    fn eigenvalues_match_frozen_oracle() {
        // 5×5 Hermitian matrix with independently computed spectrum.
        #[rustfmt::skip]
        let rows: [[(f64, f64); 5]; 5] = [
            [(0.30471707975443135, 0.0), (-1.1710818065514068, -0.80466920765855621), (0.81492458533464296, -0.38176411417840661), (0.040636126753987811, -0.16526077980372694), (-1.0679487760995485, 0.10606620313943489)],
            [(-1.1710818065514068, 0.80466920765855621), (0.12784040316728537, 0.0), (0.23077467154268305, -0.19914763570833113), (0.17597481328910503, -0.67846349827653629), (-0.76698673598876077, -0.1277246776863471)],
            [(0.81492458533464296, 0.38176411417840661), (0.23077467154268305, 0.19914763570833113), (0.066030697561216045, 0.0), (0.084179303069516986, -0.079485754201272629), (0.8450253404630379, 0.21349861952500943)],
            [(0.040636126753987811, 0.16526077980372694), (0.17597481328910503, 0.67846349827653629), (0.084179303069516986, 0.079485754201272629), (0.87845030130727253, 0.0), (-0.10222769652752753, -0.28111387696558332)],
            [(-1.0679487760995485, -0.10606620313943489), (-0.76698673598876077, 0.1277246776863471), (0.8450253404630379, -0.21349861952500943), (-0.10222769652752753, 0.28111387696558332), (-0.42832782216310722, 0.0)],
        ];
        let m = ComplexMatrix::from_fn(5, |r, col| c(rows[r][col].0, rows[r][col].1));
        let expected = [
            -2.6504867569245998,
            -0.32714095847020286,
            0.68602346436498962,
            1.2092087341681057,
            2.0311061764888065,
        ];
        let vals = hermitian_eigenvalues(&m).unwrap();
        for (got, want) in vals.iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [2, 3, 5, 8, 16] {
            let m = random_hermitian(dim, &mut rng);
            let vals = hermitian_eigenvalues(&m).unwrap();
            let sum: f64 = vals.iter().sum();
            assert!((sum - m.trace().re).abs() <= 1e-10 * dim as f64);
        }
    }

    #[test]
    fn eigensystem_reconstructs_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let m = random_hermitian(6, &mut rng);
        let (vals, vecs) = hermitian_eigensystem(&m).unwrap();
        // V Λ V† == M
        let mut recon = ComplexMatrix::zeros(6);
        for (k, &lambda) in vals.iter().enumerate() {
            for r in 0..6 {
                for col in 0..6 {
                    let cur = recon.get(r, col);
                    recon.set(r, col, cur + vecs.get(r, k) * vecs.get(col, k).conj() * c(lambda, 0.0));
                }
            }
        }
        assert!(recon.max_abs_diff(&m) < 1e-11);
        // Columns orthonormal.
        assert!(vecs.unitarity_deviation() < 1e-11);
    }

    #[test]
    fn spectrum_invariant_under_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let m = random_hermitian(5, &mut rng);
        let u = crate::sample::random_unitary(5, &mut rng).unwrap();
        let conj = u.mul(&m).unwrap().mul(&u.adjoint()).unwrap();
        let a = hermitian_eigenvalues(&m).unwrap();
        let b = hermitian_eigenvalues(&conj).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn eigenvalues_reject_non_hermitian() {
        let m = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn psd_tests() {
        assert!(is_psd(&ComplexMatrix::identity(2), 1e-10).unwrap());
        let indef = ComplexMatrix::from_fn(2, |r, c_| {
            if r == c_ {
                c(if r == 0 { 1.0 } else { -1.0 }, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        assert!(!is_psd(&indef, 1e-10).unwrap());
        // Rank-1 projector of any unit vector is PSD.
        let v = ComplexVector::new(2, vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let p = outer(&v, &v).unwrap();
        assert!(is_psd(&p, 1e-10).unwrap());
    }

    #[test]
    fn partial_trace_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let rho_a = crate::sample::random_density_matrix(3, 3, &mut rng).unwrap();
        let rho_b = crate::sample::random_density_matrix(2, 2, &mut rng).unwrap();
        let joint = tensor(&rho_a, &rho_b).unwrap();
        let traced = partial_trace(&joint, &[3, 2], 1).unwrap();
        assert!(traced.max_abs_diff(&rho_a) < 1e-12);
        let traced0 = partial_trace(&joint, &[3, 2], 0).unwrap();
        assert!(traced0.max_abs_diff(&rho_b) < 1e-12);
    }

    #[test]
    fn partial_trace_maximally_entangled_qutrits() {
        // |Φ⟩ = Σᵢ |i⟩|i⟩ / √3 traces to I/3 on either side.
        let mut v = ComplexVector::zeros(9);
        for i in 0..3 {
            v.entries[i * 3 + i] = c(1.0 / 3f64.sqrt(), 0.0);
        }
        let rho = outer(&v, &v).unwrap();
        for side in [0, 1] {
            let red = partial_trace(&rho, &[3, 3], side).unwrap();
            let third = ComplexMatrix::identity(3).scaled(c(1.0 / 3.0, 0.0));
            assert!(red.max_abs_diff(&third) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_preserves_trace_and_hermiticity() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let m = random_hermitian(12, &mut rng);
        let red = partial_trace(&m, &[2, 3, 2], 1).unwrap();
        assert!((red.trace() - m.trace()).norm() < 1e-12);
        assert!(red.hermiticity_deviation() < 1e-12);
        assert_eq!(red.dim(), 4);
    }

    #[test]
    fn json_round_trip() {
        let m = ComplexMatrix::new(2, vec![c(1.0, 2.0), c(0.0, -1.0), c(0.5, 0.0), c(0.0, 0.0)]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"dim\":2"));
        assert!(s.contains("[1.0,2.0]"));
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);

        let v = ComplexVector::new(2, vec![c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        let back: ComplexVector = serde_json::from_str(&s).unwrap();
        assert_eq!(v, back);

        // Wrong entry count must fail validation on the way in.
        let bad = r#"{"dim":3,"entries":[[1.0,0.0]]}"#;
        assert!(serde_json::from_str::<ComplexVector>(bad).is_err());
    }

    #[test]
    fn phase_canonicalization() {
        let v = ComplexVector::new(2, vec![c(0.0, 0.6), c(0.8, 0.0)]).unwrap();
        let canon = v.phase_canonicalized();
        assert!((canon.get(0) - c(0.6, 0.0)).norm() < 1e-15);
        assert!((canon.get(1) - c(0.0, -0.8)).norm() < 1e-15);
        // Idempotent and norm-preserving.
        assert!(canon.phase_canonicalized().max_abs_diff(&canon) < 1e-15);
        assert!((canon.norm() - v.norm()).abs() < 1e-15);
    }

    #[test]
    fn hermitian_function_square_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let rho = crate::sample::random_density_matrix(4, 4, &mut rng).unwrap();
        let root = hermitian_function(&rho, f64::sqrt).unwrap();
        let squared = root.mul(&root).unwrap();
        assert!(squared.max_abs_diff(&rho) < 1e-10);
    }
}

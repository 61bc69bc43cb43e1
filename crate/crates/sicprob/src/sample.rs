//! Seeded random test objects: unit vectors, density matrices, unitaries,
//! and POVMs. Every function is deterministic given the caller's RNG state;
//! all randomness in this crate flows through explicit seeds.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{hermitian_function, outer, ComplexMatrix, ComplexVector};
use crate::Result;

/// One standard complex Gaussian sample (independent N(0,1) real and
/// imaginary parts).
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Vector of i.i.d. standard complex Gaussians (not normalized).
pub fn gaussian_vector(dim: usize, rng: &mut impl Rng) -> ComplexVector {
    let entries = (0..dim).map(|_| complex_gaussian(rng)).collect();
    ComplexVector::new(dim, entries).expect("entry count matches dim")
}

/// Haar-like random unit vector: normalized complex Gaussian.
pub fn random_unit_vector(dim: usize, rng: &mut impl Rng) -> ComplexVector {
    gaussian_vector(dim, rng).normalized()
}

/// Random density matrix of the given rank: ρ = GG†/tr(GG†) with G a
/// dim×rank complex Gaussian matrix. `rank == 1` gives a pure state.
pub fn random_density_matrix(dim: usize, rank: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    let rank = rank.clamp(1, dim);
    let mut rho = ComplexMatrix::zeros(dim);
    for _ in 0..rank {
        let g = gaussian_vector(dim, rng);
        rho = rho.add(&outer(&g, &g)?)?;
    }
    let tr = rho.trace().re;
    Ok(rho.scaled(Complex64::new(1.0 / tr, 0.0)))
}

/// Random pure state projector |ψ⟩⟨ψ|.
pub fn random_pure_state(dim: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    let psi = random_unit_vector(dim, rng);
    outer(&psi, &psi)
}

/// Random unitary: complex Gaussian matrix orthonormalized by two passes of
/// modified Gram–Schmidt (the second pass cleans up rounding).
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    let mut cols: Vec<ComplexVector> = (0..dim).map(|_| gaussian_vector(dim, rng)).collect();
    for _pass in 0..2 {
        for i in 0..dim {
            for j in 0..i {
                let proj = crate::linalg::inner(&cols[j], &cols[i])?;
                cols[i] = cols[i].sub(&cols[j].scaled(proj))?;
            }
            cols[i] = cols[i].normalized();
        }
    }
    Ok(ComplexMatrix::from_fn(dim, |r, c| cols[c].get(r)))
}

/// Random POVM with `elements` effects: Gaussian Wisharts A_i, normalized by
/// the inverse square root of their sum so the effects add to the identity.
pub fn random_povm(dim: usize, elements: usize, rng: &mut impl Rng) -> Result<Vec<ComplexMatrix>> {
    let elements = elements.max(1);
    let mut raw = Vec::with_capacity(elements);
    let mut total = ComplexMatrix::zeros(dim);
    for _ in 0..elements {
        let mut a = ComplexMatrix::zeros(dim);
        for _ in 0..dim {
            let g = gaussian_vector(dim, rng);
            a = a.add(&outer(&g, &g)?)?;
        }
        total = total.add(&a)?;
        raw.push(a);
    }
    let inv_root = hermitian_function(&total, |x| 1.0 / x.sqrt())?;
    raw.iter()
        .map(|a| inv_root.mul(a)?.mul(&inv_root))
        .collect()
}

/// Random von Neumann measurement: the rank-1 eigenprojectors of a random
/// Hermitian matrix (a basis measurement).
pub fn random_von_neumann(dim: usize, rng: &mut impl Rng) -> Result<Vec<ComplexMatrix>> {
    let u = random_unitary(dim, rng)?;
    (0..dim)
        .map(|k| {
            let col = ComplexVector::new(dim, (0..dim).map(|r| u.get(r, k)).collect())?;
            outer(&col, &col)
        })
        .collect()
}

//! Unitary evolution seen two ways. In Hilbert space, a unitary preserves
//! every pairwise overlap |⟨ψ|φ⟩|. In the probability representation the
//! same evolution is just the urgleichung applied with a rotated reference
//! measurement: evolving the state by U and measuring the original SIC
//! gives the same numbers as keeping the state and measuring the
//! U-conjugated SIC.
//!
//! Run with: `cargo run --example unitary_overlaps`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sicprob::prob::{state_to_probs, unitary_evolution_probs};
use sicprob::protocols::overlap_preservation_check;
use sicprob::sample::{random_density_matrix, random_unit_vector, random_unitary};
use sicprob::sic::{builtin_fiducial, orbit};

fn main() -> sicprob::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(21);

    // Overlap preservation, checked over all pairs from a batch of random
    // pure states.
    let d = 3;
    let u = random_unitary(d, &mut rng)?;
    let states: Vec<_> = (0..6).map(|_| random_unit_vector(d, &mut rng)).collect();
    let mut pairs = Vec::new();
    for i in 0..states.len() {
        for j in (i + 1)..states.len() {
            pairs.push((states[i].clone(), states[j].clone()));
        }
    }
    let report = overlap_preservation_check(&u, &pairs)?;
    println!(
        "random unitary on {} pure-state pairs: max overlap deviation {:.3e}, pass: {}",
        pairs.len(),
        report.max_deviation,
        report.pass,
    );
    assert!(report.pass);

    // The same unitary in probability language.
    let sic = orbit(&builtin_fiducial(d)?)?;
    let rho = random_density_matrix(d, 2, &mut rng)?;
    let p = state_to_probs(&rho, &sic)?;
    let evolved = unitary_evolution_probs(&p, &u, &sic)?;
    let direct = state_to_probs(&u.adjoint().mul(&rho)?.mul(&u)?, &sic)?;
    let max_diff = (0..sic.outcomes())
        .map(|j| (evolved.probs.get(j) - direct.get(j)).abs())
        .fold(0.0f64, f64::max);
    println!("probability-language evolution matches the conjugated state: {max_diff:.3e}");
    assert!(max_diff < 1e-12);
    println!("\nEvolution never leaves the probability simplex: out_of_range = {}", evolved.out_of_range);
    Ok(())
}

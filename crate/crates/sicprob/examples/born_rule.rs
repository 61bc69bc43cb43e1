//! The Born rule written purely in probabilities. A SIC reference
//! measurement turns a quantum state ρ into an ordinary probability vector
//! P(Hᵢ) = tr(ρΠᵢ)/d, and the probability of any other measurement outcome
//! follows from the urgleichung
//!
//!   Q(Dⱼ) = (d+1)·Σᵢ P(Hᵢ)P(Dⱼ|Hᵢ) − (1/d)·Σᵢ P(Dⱼ|Hᵢ),
//!
//! an affine correction to the classical Law of Total Probability. This
//! example checks the identity against the trace rule, contrasts it with
//! the classical formula, and shows the q-parametrized family that
//! interpolates between them.
//!
//! Run with: `cargo run --example born_rule`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sicprob::prob::{
    born_urgleichung, conditional_matrix, family_outcomes, general_family, ltp, state_to_probs,
};
use sicprob::sample::{random_density_matrix, random_von_neumann};
use sicprob::sic::{builtin_fiducial, orbit};

fn main() -> sicprob::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = 3;
    let sic = orbit(&builtin_fiducial(d)?)?;
    let rho = random_density_matrix(d, d, &mut rng)?;
    let ground = random_von_neumann(d, &mut rng)?;

    let p = state_to_probs(&rho, &sic)?;
    let c = conditional_matrix(&ground, &sic)?;
    let born = born_urgleichung(&p, &c, d)?;
    let classical = ltp(&p, &c)?;

    println!("{:<10} {:>14} {:>14} {:>14}", "outcome", "urgleichung", "trace rule", "classical LTP");
    for (j, dj) in ground.iter().enumerate() {
        let direct = rho.mul(dj)?.trace().re;
        println!(
            "D_{j:<8} {:>14.10} {:>14.10} {:>14.10}",
            born.probs.get(j),
            direct,
            classical.get(j),
        );
        assert!((born.probs.get(j) - direct).abs() < 1e-12);
    }
    println!("\nThe urgleichung matches the trace rule; the uncorrected classical");
    println!("formula does not, because a quantum measurement is not a two-stage");
    println!("classical cascade through the reference measurement.");

    println!("\nThe q-family outcome counts n = q·d(d−1)/2 + d:");
    for q in 0..=2 {
        let label = match q {
            0 => "classical",
            1 => "real Hilbert space",
            _ => "quantum (SIC count d²)",
        };
        println!("  q={q}: n(d=3) = {:>2}   {label}", family_outcomes(q, 3));
    }

    // The q = 0 member has n = d outcomes and reproduces the Law of Total
    // Probability bit for bit.
    let p0 = sicprob::prob::ProbVector::new(vec![0.5, 0.3, 0.2])?;
    let c0 = sicprob::prob::ConditionalMatrix::new(vec![
        vec![0.6, 0.1, 0.3],
        vec![0.4, 0.9, 0.7],
    ])?;
    let family = general_family(&p0, &c0, 0, 3)?;
    let classical0 = ltp(&p0, &c0)?;
    for j in 0..2 {
        assert_eq!(family.probs.get(j).to_bits(), classical0.get(j).to_bits());
    }
    println!("\nq = 0 check: general_family agrees with the classical LTP bit for bit.");
    Ok(())
}

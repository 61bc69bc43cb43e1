//! Bayesian tomography with a SIC reference measurement. An agent whose
//! prior is exchangeable — a mixture of i.i.d. candidate states — updates
//! candidate weights from simulated SIC outcomes. When the data really
//! comes from one of the candidates, the posterior concentrates on it.
//!
//! Run with: `cargo run --example tomography`

use sicprob::definetti::{closest_candidate, posterior_concentration, Prior};
use sicprob::linalg::ComplexMatrix;
use sicprob::sic::{builtin_fiducial, orbit};

fn main() -> sicprob::Result<()> {
    let sic = orbit(&builtin_fiducial(2)?)?;
    // Candidate 1: the projector onto the first tetrahedron direction;
    // candidate 2: the maximally mixed state.
    let projector = sic.projectors()[0].clone();
    let mixed = ComplexMatrix::identity(2).scaled(0.5.into());
    let prior = Prior::new(vec![projector.clone(), mixed], vec![0.5, 0.5])?;

    let n = 2000;
    let trace = posterior_concentration(&prior, &projector, &sic, n, 7)?;
    println!("true state = candidate 0; {n} simulated outcomes, seed 7\n");
    println!("{:>6} {:>12} {:>12}", "step", "w(cand 0)", "w(cand 1)");
    for step in (0..=n).step_by(250) {
        let w = &trace.posterior_history[step];
        println!("{step:>6} {:>12.6} {:>12.6}", w[0], w[1]);
    }
    let final_w = trace.posterior_history.last().unwrap();
    assert!(final_w[0] > 0.99, "posterior failed to concentrate: {final_w:?}");

    // Reading the answer off the posterior: the posterior-mean state
    // Σₖ wₖ ρₖ is closest (in trace distance) to the true candidate.
    let mut mean = ComplexMatrix::zeros(2);
    for (w, candidate) in final_w.iter().zip(prior.candidates()) {
        mean = mean.add(&candidate.scaled((*w).into()))?;
    }
    let recovered = closest_candidate(&prior, &mean)?;
    println!("\nposterior concentrated on candidate {recovered} with weight {:.6}", final_w[0]);
    assert_eq!(recovered, 0);
    Ok(())
}

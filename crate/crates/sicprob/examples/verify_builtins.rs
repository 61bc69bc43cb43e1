//! Verify the built-in SIC fiducials (qubit tetrahedron, Hesse qutrit,
//! Hoggar d = 8) and inspect the defining constants: every pair of distinct
//! orbit states has squared overlap exactly 1/(d+1), and the projectors
//! resolve the identity.
//!
//! Run with: `cargo run --example verify_builtins`

use sicprob::sic::{builtin_catalog, orbit, verify_sic};

fn main() -> sicprob::Result<()> {
    println!("{:<20} {:>4} {:>12} {:>14} {:>14}", "label", "dim", "projectors", "overlap dev", "resolution dev");
    for fiducial in builtin_catalog() {
        let sic = orbit(&fiducial)?;
        let report = verify_sic(&sic, 1e-12);
        assert!(report.pass, "builtin {} failed verification", fiducial.label());
        println!(
            "{:<20} {:>4} {:>12} {:>14.3e} {:>14.3e}",
            fiducial.label(),
            report.dim,
            sic.outcomes(),
            report.max_overlap_deviation,
            report.max_resolution_deviation,
        );
    }

    // The qubit tetrahedron pairwise overlaps are exactly 1/(d+1) = 1/3.
    let tetra = orbit(&builtin_catalog().remove(0))?;
    let projectors = tetra.projectors();
    println!("\nqubit tetrahedron tr(ΠᵢΠⱼ), expecting 1/3 off the diagonal:");
    for i in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|j| {
                let t = projectors[i].mul(&projectors[j]).unwrap().trace().re;
                format!("{t:.12}")
            })
            .collect();
        println!("  {}", row.join("  "));
    }
    Ok(())
}

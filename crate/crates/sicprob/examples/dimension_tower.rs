//! The dimension-tower classifier: the squarefree part of (d−3)(d+1),
//! defined for d ≥ 4. Dimensions with the same class have SIC fiducials
//! living over the same real quadratic field ℚ(√class), and the map is far
//! from injective — 4, 8, 19, and 48 all collapse to class 5, the first
//! rungs of the ℚ(√5) tower.
//!
//! Run with: `cargo run --example dimension_tower`

use sicprob::sic::dimension_tower_class;

fn main() -> sicprob::Result<()> {
    println!("{:>5}  {:>5}", "dim", "class");
    for d in [4u64, 8, 19, 48, 5, 6, 7, 12, 23] {
        println!("{d:>5}  {:>5}", dimension_tower_class(d)?);
    }

    // Classes can be fed back in as dimensions: 5 ↦ 3.
    println!("\niterating the classifier: 5 ↦ {}", dimension_tower_class(5)?);
    assert_eq!(dimension_tower_class(5)?, 3);
    for &d in &[4u64, 8, 19, 48] {
        assert_eq!(dimension_tower_class(d)?, 5);
    }
    Ok(())
}

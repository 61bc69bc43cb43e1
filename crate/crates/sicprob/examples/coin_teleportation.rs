//! A classical "teleportation" protocol with coins, worked out exactly in
//! rational arithmetic. Alice holds two boxes whose coins she has secretly
//! randomized to agree (HH or TT, 50/50). Charlie mails her a coin that is
//! heads with probability p. Alice compares Charlie's coin with box A: a
//! green light means they agree, red means they differ, and she announces
//! the color. Bob then flips box B's coin exactly when the light was red —
//! after which box B is heads with probability p, the statistics of
//! Charlie's coin having been "teleported" across the announcement.
//!
//! The exact enumeration shows why no information about Charlie's coin
//! leaks: each glow color is equally likely regardless of p, and Alice's
//! announced color says nothing about the original coin, which her own
//! randomization had already reduced to a 50–50 description.
//!
//! Run with: `cargo run --example coin_teleportation`

use num_rational::Rational64;
use sicprob::protocols::coin_teleport;

fn main() -> sicprob::Result<()> {
    for (num, den) in [(3, 10), (1, 2), (0, 1), (1, 1)] {
        let p = Rational64::new(num, den);
        let result = coin_teleport(p)?;
        println!("p = {p}");
        println!("  {:<8} {:<8} {:<12} {:<6} {:<9}", "boxes", "charlie", "probability", "glow", "bob ends");
        for row in &result.enumeration {
            println!(
                "  {:<8} {:<8} {:<12} {:<6} {:<9}",
                format!("{:?}", row.ab).to_lowercase(),
                format!("{:?}", row.charlie).to_lowercase(),
                row.probability.to_string(),
                format!("{:?}", row.glow).to_lowercase(),
                format!("{:?}", row.bob_final).to_lowercase(),
            );
        }
        println!(
            "  => P(bob heads) = {} (exactly p), Charlie's-coin posterior stays {}\n",
            result.bob_heads_prob, result.charlie_original_posterior,
        );
        assert_eq!(result.bob_heads_prob, p);
        assert_eq!(result.charlie_original_posterior, Rational64::new(1, 2));
    }
    Ok(())
}

//! Dutch-book coherence for a pair of exclusive events. An agent posts
//! prices for three lottery tickets — "E occurs", "F occurs", and "E or F
//! occurs" (each paying 1 if the event happens) — and must buy or sell any
//! number at those prices. If the prices violate additivity, a bookie can
//! assemble a book of transactions whose net profit is positive no matter
//! which of the three worlds (E, F, neither) obtains. Probability theory's
//! sum rule is exactly the condition that no such book exists.
//!
//! Run with: `cargo run --example dutch_book`

use sicprob::prob::{dutch_book_check, TicketPrices};

fn show(prices: TicketPrices) -> sicprob::Result<()> {
    let verdict = dutch_book_check(&prices);
    println!(
        "prices: P(E)={:.2}  P(F)={:.2}  P(E∨F)={:.2}   coherent: {}",
        prices.p_e, prices.p_f, prices.p_e_or_f, verdict.coherent,
    );
    if let (Some(transactions), Some(profit)) = (&verdict.transactions, &verdict.bookie_profit) {
        for t in transactions {
            println!("  bookie {:?}s one {:?} ticket at {:.2}", t.action, t.ticket, t.price);
        }
        println!(
            "  guaranteed bookie profit: E: {:+.2}   F: {:+.2}   neither: {:+.2}",
            profit.e, profit.f, profit.neither,
        );
        assert!(profit.e > 0.0 && profit.f > 0.0 && profit.neither > 0.0);
    }
    println!();
    Ok(())
}

fn main() -> sicprob::Result<()> {
    // Subadditive prices: the union ticket is overpriced by 0.10.
    show(TicketPrices { p_e: 0.3, p_f: 0.4, p_e_or_f: 0.8 })?;
    // Additive prices admit no book.
    show(TicketPrices { p_e: 0.3, p_f: 0.4, p_e_or_f: 0.7 })?;
    // Superadditive prices flip the book's direction.
    show(TicketPrices { p_e: 0.3, p_f: 0.4, p_e_or_f: 0.55 })?;
    Ok(())
}

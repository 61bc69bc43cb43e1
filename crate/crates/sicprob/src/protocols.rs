//! Two small exact demonstrations: the classical coin-box "teleportation"
//! protocol (reference transfer by one bit of relational information plus
//! conditionalization) and the overlap-preservation property of unitary
//! maps (the root of no-cloning).
//!
//! The coin protocol is pure rational arithmetic end to end: the headline
//! equality — Bob's coin is heads with exactly the probability Charlie
//! originally assigned his own — holds by value equality, not tolerance.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::linalg::{inner, ComplexMatrix, ComplexVector};
use crate::{Error, Result};

/// Deviation allowed in [`overlap_preservation_check`].
pub const OVERLAP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoinFace {
    Heads,
    Tails,
}

impl CoinFace {
    pub fn flipped(self) -> Self {
        match self {
            CoinFace::Heads => CoinFace::Tails,
            CoinFace::Tails => CoinFace::Heads,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlowColor {
    /// The touched boxes hold identically oriented coins.
    Green,
    /// The touched boxes hold oppositely oriented coins.
    Red,
}

/// One configuration of the exhaustive enumeration: the shared orientation
/// of Alice's and Bob's coins, Charlie's coin, the probability of the
/// configuration, the glow Alice observes, and Bob's coin after he follows
/// the protocol (flip exactly when the glow was red).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EnumerationRow {
    pub ab: CoinFace,
    pub charlie: CoinFace,
    #[serde(with = "rational_string")]
    pub probability: Rational64,
    pub glow: GlowColor,
    pub bob_final: CoinFace,
}

/// Full output of [`coin_teleport`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoinProtocolResult {
    #[serde(with = "rational_string")]
    pub input_p: Rational64,
    #[serde(with = "rational_string")]
    pub bob_heads_prob: Rational64,
    #[serde(with = "rational_string")]
    pub charlie_original_posterior: Rational64,
    pub enumeration: Vec<EnumerationRow>,
}

/// Serializes a rational as the string "numer/denom".
pub mod rational_string {
    use super::*;
    use serde::de::Error as DeError;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Parses "a/b" or a bare integer "a" into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::OutOfRange { reason: format!("cannot parse integer {t:?}") })
    };
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (parse_int(n)?, parse_int(d)?),
        None => (parse_int(s)?, 1),
    };
    if denom == 0 {
        return Err(Error::OutOfRange { reason: "denominator is zero".into() });
    }
    Ok(Rational64::new(numer, denom))
}

/// The classical teleportation protocol. Alice and Bob hold identically
/// oriented coins in opaque boxes (HH or TT, probability ½ each). Charlie
/// assigns heads probability `p` to his own boxed coin, hands it to Alice;
/// she touches the boxes (green = same, red = opposite), sends Bob the one
/// bit, and Bob flips exactly on red. The exhaustive enumeration over
/// {HH, TT} × {H, T} shows Bob's final coin is heads with probability
/// exactly `p` — reference has been transferred by a single relational bit.
///
/// Meanwhile Alice randomizes the pair of coins left in her hands, so
/// Charlie's credence about the coin in the box he handed over collapses to
/// the uniform ½, whatever `p` was: his original state is "destroyed".
pub fn coin_teleport(p: Rational64) -> Result<CoinProtocolResult> {
    let zero = Rational64::new(0, 1);
    let one = Rational64::new(1, 1);
    let half = Rational64::new(1, 2);
    if p < zero || p > one {
        return Err(Error::OutOfRange { reason: format!("p = {p} is not in [0, 1]") });
    }
    let mut enumeration = Vec::with_capacity(4);
    for ab in [CoinFace::Heads, CoinFace::Tails] {
        for charlie in [CoinFace::Heads, CoinFace::Tails] {
            let coin_prob = if charlie == CoinFace::Heads { p } else { one - p };
            let glow = if ab == charlie { GlowColor::Green } else { GlowColor::Red };
            let bob_final = match glow {
                GlowColor::Green => ab,
                GlowColor::Red => ab.flipped(),
            };
            enumeration.push(EnumerationRow {
                ab,
                charlie,
                probability: half * coin_prob,
                glow,
                bob_final,
            });
        }
    }
    let bob_heads_prob = enumeration
        .iter()
        .filter(|row| row.bob_final == CoinFace::Heads)
        .map(|row| row.probability)
        .fold(zero, |acc, q| acc + q);
    Ok(CoinProtocolResult {
        input_p: p,
        bob_heads_prob,
        charlie_original_posterior: half,
        enumeration,
    })
}

/// Report of [`overlap_preservation_check`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct OverlapReport {
    pub max_deviation: f64,
    pub pass: bool,
}

/// Checks that a unitary preserves every listed pair's overlap magnitude:
/// max over pairs of ||⟨Uψ|Uφ⟩| − |⟨ψ|φ⟩||, passing at 1e−12. Two
/// nonorthogonal states can never be simultaneously cloned precisely
/// because this quantity cannot move.
pub fn overlap_preservation_check(
    u: &ComplexMatrix,
    pairs: &[(ComplexVector, ComplexVector)],
) -> Result<OverlapReport> {
    u.require_unitary()?;
    let mut max_deviation: f64 = 0.0;
    for (psi, phi) in pairs {
        let before = inner(psi, phi)?.norm();
        let after = inner(&u.apply(psi)?, &u.apply(phi)?)?.norm();
        max_deviation = max_deviation.max((after - before).abs());
    }
    Ok(OverlapReport { max_deviation, pass: max_deviation <= OVERLAP_TOL })
}

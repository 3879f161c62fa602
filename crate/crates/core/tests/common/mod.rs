//! Shared helpers and independent oracles for the integration tests.
//!
//! The classical walk oracle below is deliberately kept apart from the
//! tree recursion in the library: it implements the textbook chain
//! descent directly on club queries, so it can certify the
//! one-dimensional behaviour of the tree walk.

#![allow(dead_code)] // shared across several test binaries

use hwalks::cseq::CSequence;
use hwalks::ordinal::Ordinal;

pub fn ord(s: &str) -> Ordinal {
    s.parse().unwrap()
}

/// Classical number-of-steps: descend from `gamma` to `beta` by repeatedly
/// stepping to the least club element at or above `beta`, and count the
/// steps taken.
pub fn classical_steps(seq: &CSequence, beta: &Ordinal, gamma: &Ordinal) -> u64 {
    assert!(beta <= gamma);
    let mut current = gamma.clone();
    let mut steps = 0u64;
    while current != *beta {
        let club = seq
            .club_of(std::slice::from_ref(&current))
            .expect("walk chain stays inside the domain");
        current = club
            .min_above(beta)
            .expect("clubs are cofinal under their index");
        steps += 1;
    }
    steps
}

/// A deterministic landmark list below `w^3`: `count` ordinals of the form
/// `w^2*a + w*b + c`.
pub fn cube_landmarks(a_max: u64, b_max: u64, c_max: u64) -> Vec<Ordinal> {
    let mut out = Vec::new();
    for a in 0..a_max {
        for b in 0..b_max {
            for c in 0..c_max {
                out.push(
                    Ordinal::term(2, a)
                        .add(&Ordinal::term(1, b))
                        .add(&Ordinal::nat(c)),
                );
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

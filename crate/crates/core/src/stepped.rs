//! Stepping a sequence up one dimension along a coherent one-dimensional
//! scaffold.
//!
//! Given a coherent 1-sequence `D` on `lambda`, an m-sequence `E` on a limit
//! `kappa`, and the set `S` of ordinals whose `D`-club has order type
//! exactly `kappa`, this produces an `(m+1)`-sequence on `lambda`. Ordinals
//! split into two camps by the order type of their `D`-club:
//!
//! * above `kappa` ("long side"): the club keeps only the elements of the
//!   `D`-club from position `kappa` on, and every tuple from this side
//!   reuses the first coordinate's trimmed club;
//! * at most `kappa` ("copy side"): tuples are assigned order-isomorphic
//!   copies of `E`-clubs, indexed through the order types of the members'
//!   `D`-clubs; full-length tuples whose last entry falls short of `S` take
//!   the maximal club inside the parent.
//!
//! Non-accumulation indices follow the minimal rule as everywhere else.

use std::collections::BTreeSet;

use crate::club::Club;
use crate::cseq::{fmt_index, minimal_club, CSequence};
use crate::error::SeqError;
use crate::ordinal::Ordinal;

pub struct SteppedUp {
    d_seq: CSequence,
    e_seq: CSequence,
    s_set: BTreeSet<Ordinal>,
    kappa: Ordinal,
    lambda: Ordinal,
    n: usize,
}

enum Side {
    /// Order type of the `D`-club exceeds `kappa`; carries the trimmed club.
    Long(Club),
    /// Order type is at most `kappa`; carries the club and its order type.
    Copy(Club, Ordinal),
}

impl SteppedUp {
    pub fn new(
        d_seq: CSequence,
        e_seq: CSequence,
        s_set: Vec<Ordinal>,
        kappa: Ordinal,
    ) -> Result<Self, SeqError> {
        if d_seq.n() != 1 {
            return Err(SeqError::BadConstruction(
                "the scaffold must be a 1-dimensional sequence".into(),
            ));
        }
        if !kappa.is_limit() {
            return Err(SeqError::BadConstruction(format!(
                "kappa must be a limit ordinal, got {kappa}"
            )));
        }
        if e_seq.domain() != Club::interval(kappa.clone()) {
            return Err(SeqError::BadConstruction(format!(
                "the copied sequence must live on the full interval below {kappa}"
            )));
        }
        if e_seq.bound() != kappa {
            return Err(SeqError::BadConstruction(
                "the copied sequence's bound must equal kappa".into(),
            ));
        }
        if s_set.is_empty() {
            return Err(SeqError::BadConstruction(format!(
                "kappa = {kappa} is not realized: no scaffold club of that order type given"
            )));
        }
        let lambda = d_seq.bound();
        for gamma in &s_set {
            let club = d_seq.club_of(std::slice::from_ref(gamma))?;
            let otp = club.otp();
            if otp != kappa {
                return Err(SeqError::BadConstruction(format!(
                    "order type mismatch at {gamma}: expected {kappa}, found {otp}"
                )));
            }
        }
        Ok(SteppedUp {
            n: e_seq.n() + 1,
            d_seq,
            e_seq,
            s_set: s_set.into_iter().collect(),
            kappa,
            lambda,
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &Ordinal {
        &self.lambda
    }

    pub fn kappa(&self) -> &Ordinal {
        &self.kappa
    }

    pub fn scaffold(&self) -> &CSequence {
        &self.d_seq
    }

    pub fn copied(&self) -> &CSequence {
        &self.e_seq
    }

    pub fn s_points(&self) -> impl Iterator<Item = &Ordinal> {
        self.s_set.iter()
    }

    fn side(&self, gamma: &Ordinal) -> Result<Side, SeqError> {
        let club = self.d_seq.club_of(std::slice::from_ref(gamma))?;
        let otp = club.otp();
        if otp > self.kappa {
            // Keep the elements from position kappa on.
            let pivot = club.element_at(&self.kappa).ok_or_else(|| {
                SeqError::BadConstruction(format!(
                    "no element at position {} in the scaffold club of {gamma}",
                    self.kappa
                ))
            })?;
            Ok(Side::Long(club.clip_from(&pivot)))
        } else {
            if otp == self.kappa && !self.s_set.contains(gamma) {
                return Err(SeqError::BadConstruction(format!(
                    "{gamma} has a scaffold club of order type {otp} but is missing \
                     from the realization set"
                )));
            }
            Ok(Side::Copy(club, otp))
        }
    }

    /// Assignment rule for an accumulation-point index; falls back to the
    /// minimal rule otherwise. Invoked by the sequence recursion with the
    /// parent club already computed.
    pub fn assign(&self, idx: &[Ordinal], beta: &Ordinal, parent: &Club) -> Result<Club, SeqError> {
        if !parent.is_acc_point(beta) {
            return Ok(minimal_club(parent, beta));
        }
        let sides = idx
            .iter()
            .map(|g| self.side(g))
            .collect::<Result<Vec<_>, _>>()?;
        let all_long = sides.iter().all(|s| matches!(s, Side::Long(_)));
        let all_copy = sides.iter().all(|s| matches!(s, Side::Copy(..)));
        if all_long {
            let Side::Long(trimmed) = &sides[0] else {
                unreachable!()
            };
            return Ok(trimmed.clone());
        }
        if !all_copy {
            return Err(SeqError::BadConstruction(format!(
                "index {} mixes the two sides at an accumulation point",
                fmt_index(idx)
            )));
        }
        let last = idx.last().expect("nonempty index");
        let last_in_s = self.s_set.contains(last);
        // Order types of the entries' scaffold clubs, the isomorphism keys.
        let etas: Vec<Ordinal> = sides
            .iter()
            .map(|s| match s {
                Side::Copy(_, otp) => otp.clone(),
                Side::Long(_) => unreachable!(),
            })
            .collect();
        let e_index: &[Ordinal] = if last_in_s {
            &etas[..etas.len() - 1]
        } else if idx.len() < self.n {
            &etas
        } else {
            // Full length with the last entry short of the realization set:
            // the maximal club inside the parent.
            return Ok(parent.clip_below(beta));
        };
        if e_index.is_empty() {
            // A single entry realizing kappa keeps its scaffold club.
            let Side::Copy(club, _) = &sides[0] else {
                unreachable!()
            };
            return Ok(club.clone());
        }
        let e_club = self.e_seq.club_of(e_index).map_err(|e| {
            SeqError::BadConstruction(format!(
                "no copied club for {} (keys {}): {e}",
                fmt_index(idx),
                fmt_index(e_index)
            ))
        })?;
        let Side::Copy(base, _) = &sides[0] else {
            unreachable!()
        };
        Club::copy(beta.clone(), e_club, base.clone())
            .map_err(|e| SeqError::BadConstruction(e.to_string()))
    }
}

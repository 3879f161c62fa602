//! Ordinals below `w^w` in Cantor normal form, together with the tuple
//! algebra used by walks and sequences.
//!
//! An ordinal is stored as its CNF term list `w^e0*c0 + w^e1*c1 + ...` with
//! strictly decreasing exponents and positive coefficients. The universe is
//! capped at `w^w`, so exponents are plain naturals and every operation here
//! is total and exact.
//!
//! The textual syntax used in files, CLI arguments and JSON is
//! `w^2*3+w+4`, with `w` standing for the first infinite ordinal. The parser
//! also accepts redundant `^1` and `*1` factors; the printer always emits the
//! canonical spelling, so `parse . print` is the identity on canonical forms.
//!
//! Fundamental sequences follow one canonical rule. Writing a limit ordinal
//! as `a = p + w^e` (the last CNF term with its coefficient decremented by
//! one, `e >= 1`), the sequence is
//!
//! | `a`             | `fs(a)(k)`      |
//! |-----------------|-----------------|
//! | `p + w`         | `p + k`         |
//! | `p + w^(e+1)`   | `p + w^e * k`   |
//!
//! indexed by `k >= 0`, so `fs(a)(0) = p`. The sequence is strictly
//! increasing with supremum `a`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// An ordinal below `w^w` in Cantor normal form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    /// CNF terms `(exponent, coefficient)`, exponents strictly decreasing,
    /// coefficients >= 1. Empty list denotes zero.
    terms: Vec<(u32, u64)>,
}

/// Zero, successor or limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrdinalClass {
    Zero,
    Successor,
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![(0, n)],
            }
        }
    }

    pub fn omega() -> Self {
        Self::term(1, 1)
    }

    /// The single-term ordinal `w^exp * coeff`; zero when `coeff == 0`.
    pub fn term(exp: u32, coeff: u64) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![(exp, coeff)],
            }
        }
    }

    /// `w^exp`.
    pub fn w_pow(exp: u32) -> Self {
        Self::term(exp, 1)
    }

    /// Builds an ordinal from raw CNF terms, validating the invariants.
    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self, ParseError> {
        for i in 0..terms.len() {
            if terms[i].1 == 0 {
                return Err(ParseError::new("zero coefficient in CNF term"));
            }
            if i + 1 < terms.len() && terms[i].0 <= terms[i + 1].0 {
                return Err(ParseError::new("CNF exponents must strictly decrease"));
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn classify(&self) -> OrdinalClass {
        match self.terms.last() {
            None => OrdinalClass::Zero,
            Some(&(0, _)) => OrdinalClass::Successor,
            Some(_) => OrdinalClass::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.classify() == OrdinalClass::Limit
    }

    pub fn is_successor(&self) -> bool {
        self.classify() == OrdinalClass::Successor
    }

    /// Exponent of the leading term; zero ordinal has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.first().map_or(0, |t| t.0)
    }

    /// Coefficient of `w^exp` in the CNF.
    pub fn coeff_of(&self, exp: u32) -> u64 {
        self.terms.iter().find(|t| t.0 == exp).map_or(0, |t| t.1)
    }

    /// Finite value, if this ordinal is below `w`.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::nat(1))
    }

    /// Predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Ordinal> {
        match self.terms.last() {
            Some(&(0, c)) => {
                let mut terms = self.terms.clone();
                if c == 1 {
                    terms.pop();
                } else {
                    terms.last_mut().unwrap().1 = c - 1;
                }
                Some(Ordinal { terms })
            }
            _ => None,
        }
    }

    /// Ordinal addition `self + rhs` (absorbs the low terms of `self`).
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(&(lead, lead_c)) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(u32, u64)> = self
            .terms
            .iter()
            .copied()
            .take_while(|&(e, _)| e > lead)
            .collect();
        let carried = self.coeff_of(lead);
        terms.push((lead, carried + lead_c));
        terms.extend_from_slice(&rhs.terms[1..]);
        Ordinal { terms }
    }

    /// Left subtraction: the unique `r` with `self + r = rhs`, defined when
    /// `self <= rhs`.
    pub fn left_sub(&self, rhs: &Ordinal) -> Option<Ordinal> {
        if self > rhs {
            return None;
        }
        // Find the first position where the term lists diverge.
        let mut i = 0;
        while i < self.terms.len() && i < rhs.terms.len() && self.terms[i] == rhs.terms[i] {
            i += 1;
        }
        if i == self.terms.len() {
            // rhs extends self; the remainder is rhs's tail.
            return Some(Ordinal {
                terms: rhs.terms[i..].to_vec(),
            });
        }
        let (ea, ca) = self.terms[i];
        let (eb, cb) = rhs.terms[i];
        if ea == eb {
            debug_assert!(cb > ca);
            let mut terms = vec![(eb, cb - ca)];
            terms.extend_from_slice(&rhs.terms[i + 1..]);
            Some(Ordinal { terms })
        } else {
            debug_assert!(eb > ea);
            Some(Ordinal {
                terms: rhs.terms[i..].to_vec(),
            })
        }
    }

    /// `k`-th member of the canonical fundamental sequence of a limit
    /// ordinal (see the module table). `None` for zero and successors.
    pub fn fundamental_sequence(&self, k: u64) -> Option<Ordinal> {
        let &(e, _) = self.terms.last()?;
        if e == 0 {
            return None;
        }
        let prefix = self.decrement_last_term();
        Some(prefix.add(&Ordinal::term(e - 1, k)))
    }

    /// The ordinal with the last CNF term's coefficient decremented.
    fn decrement_last_term(&self) -> Ordinal {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            None => {}
            Some(t) if t.1 == 1 => {
                terms.pop();
            }
            Some(t) => t.1 -= 1,
        }
        Ordinal { terms }
    }

    /// Splits a limit `a` into `(p, e)` with `a = p + w^(e+1)` per the
    /// fundamental sequence table, so that `fs(a)(k) = p + w^e * k`.
    pub fn fs_shape(&self) -> Option<(Ordinal, u32)> {
        let &(e, _) = self.terms.last()?;
        if e == 0 {
            return None;
        }
        Some((self.decrement_last_term(), e - 1))
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Ordinal {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseError::new("empty ordinal"));
        }
        if s == "0" {
            return Ok(Ordinal::zero());
        }
        let mut terms = Vec::new();
        for piece in s.split('+') {
            let piece = piece.trim();
            if piece.is_empty() {
                return Err(ParseError::new("empty term in ordinal"));
            }
            terms.push(parse_term(piece)?);
        }
        Ordinal::from_terms(terms)
    }
}

fn parse_term(piece: &str) -> Result<(u32, u64), ParseError> {
    if let Some(rest) = piece.strip_prefix('w') {
        let rest = rest.trim();
        let (exp_str, coeff_str) = match rest.split_once('*') {
            Some((e, c)) => (e.trim(), Some(c.trim())),
            None => (rest, None),
        };
        let exp: u32 = if exp_str.is_empty() {
            1
        } else if let Some(e) = exp_str.strip_prefix('^') {
            e.trim()
                .parse()
                .map_err(|_| ParseError::new(format!("bad exponent in `{piece}`")))?
        } else {
            return Err(ParseError::new(format!("bad ordinal term `{piece}`")));
        };
        if exp == 0 {
            return Err(ParseError::new(format!(
                "`w^0` is not allowed; write the natural number directly in `{piece}`"
            )));
        }
        let coeff: u64 = match coeff_str {
            None => 1,
            Some(c) => c
                .parse()
                .map_err(|_| ParseError::new(format!("bad coefficient in `{piece}`")))?,
        };
        if coeff == 0 {
            return Err(ParseError::new(format!("zero coefficient in `{piece}`")));
        }
        Ok((exp, coeff))
    } else {
        let n: u64 = piece
            .parse()
            .map_err(|_| ParseError::new(format!("bad ordinal term `{piece}`")))?;
        if n == 0 {
            return Err(ParseError::new("`0` cannot appear as a summand"));
        }
        Ok((0, n))
    }
}

/// Parses a comma-separated tuple of ordinals, e.g. `w+3,w*2`.
pub fn parse_ordinal_list(s: &str) -> Result<Vec<Ordinal>, ParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|p| p.trim().parse()).collect()
}

pub fn format_ordinal_list(entries: &[Ordinal]) -> String {
    entries
        .iter()
        .map(|o| o.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Monotonicity regimes for ordinal tuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleKind {
    /// `entries[m] <= entries[m+1]` everywhere.
    WeaklyIncreasing,
    /// Strict at every position.
    StrictlyIncreasing,
    /// First step weak, all later steps strict: the `(alpha, gamma-vec)`
    /// tuples with `alpha <= gamma_0`.
    AlphaTensor,
}

/// A finite tuple of ordinals with a checked monotonicity kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdTuple {
    entries: Vec<Ordinal>,
    kind: TupleKind,
}

impl OrdTuple {
    pub fn new(entries: Vec<Ordinal>, kind: TupleKind) -> Result<Self, ParseError> {
        if !tuple_matches(&entries, kind) {
            return Err(ParseError::new(format!(
                "tuple {} violates the {:?} ordering",
                format_ordinal_list(&entries),
                kind
            )));
        }
        Ok(OrdTuple { entries, kind })
    }

    pub fn entries(&self) -> &[Ordinal] {
        &self.entries
    }

    pub fn kind(&self) -> TupleKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Removes the entry at `at`, preserving relative order.
    pub fn remove_index(&self, at: usize) -> Result<OrdTuple, ParseError> {
        if at >= self.entries.len() {
            return Err(ParseError::new(format!(
                "index {at} out of range for tuple of length {}",
                self.entries.len()
            )));
        }
        let mut entries = self.entries.clone();
        entries.remove(at);
        OrdTuple::new(entries, self.kind)
    }

    /// Replaces entries pointwise per `assignments`; other entries are kept.
    pub fn substitute(&self, assignments: &[(usize, Ordinal)]) -> Result<OrdTuple, ParseError> {
        let mut entries = self.entries.clone();
        for (at, value) in assignments {
            if *at >= entries.len() {
                return Err(ParseError::new(format!(
                    "index {at} out of range for tuple of length {}",
                    entries.len()
                )));
            }
            entries[*at] = value.clone();
        }
        OrdTuple::new(entries, self.kind)
    }
}

pub fn tuple_matches(entries: &[Ordinal], kind: TupleKind) -> bool {
    for (m, window) in entries.windows(2).enumerate() {
        let strict = match kind {
            TupleKind::WeaklyIncreasing => false,
            TupleKind::StrictlyIncreasing => true,
            TupleKind::AlphaTensor => m > 0,
        };
        if strict && window[0] >= window[1] {
            return false;
        }
        if !strict && window[0] > window[1] {
            return false;
        }
    }
    true
}

/// Removes index `m` from a raw slice, the `gamma-vec^m` operation.
pub fn remove_at(entries: &[Ordinal], m: usize) -> Vec<Ordinal> {
    let mut out = entries.to_vec();
    out.remove(m);
    out
}

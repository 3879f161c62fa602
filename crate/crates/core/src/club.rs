//! Queryable clubs: closed cofinal-or-bounded sets of ordinals with exact
//! point queries.
//!
//! A club is stored as one of five closed forms together with its canonical
//! set semantics. Exactness of `equal_below` is the load-bearing property:
//! the coherence condition on sequences is an equality of sets, so it cannot
//! be sampled.
//!
//! Literal syntax used in sequence files and on the CLI:
//!
//! * `finite[2,5,9]` - an explicit finite set;
//! * `fs(w*2)` - the range of the canonical fundamental sequence;
//! * `interval(w^2)` - every ordinal below the bound;
//! * `tailed[a,b; c]` - the finite head `{a,b}` plus the tail `{c+k : k<w}`;
//! * `copy(<index>, of=<base>)` - the order-isomorphic image of the index
//!   club through the increasing enumeration of the base club.

use std::fmt;
use std::str::FromStr;

use crate::canon::{BelowOutcome, CanonSet, Part};
use crate::error::{ClubError, ParseError};
use crate::ordinal::{format_ordinal_list, parse_ordinal_list, Ordinal};

/// The closed forms a club can take.
#[derive(Clone, Debug, PartialEq)]
pub enum ClubForm {
    /// Sorted finite list.
    Finite(Vec<Ordinal>),
    /// Every ordinal below the bound.
    Interval(Ordinal),
    /// Range of the canonical fundamental sequence of a limit ordinal.
    Fs(Ordinal),
    /// The canonical parts spelled out directly: points, segments and
    /// streams. Computed clubs (game histories, clips) print this way.
    Pieces,
    /// `{ base(xi) : xi in index }` through the increasing enumeration of
    /// `base`.
    Copy { index: Box<Club>, base: Box<Club> },
}

/// A club subset of `[0, bound)`, closed below its strict supremum, with
/// exact membership, neighbour, accumulation-point and equality queries.
#[derive(Clone)]
pub struct Club {
    bound: Ordinal,
    form: ClubForm,
    canon: CanonSet,
}

impl PartialEq for Club {
    fn eq(&self, other: &Self) -> bool {
        self.canon == other.canon
    }
}

impl Eq for Club {}

impl Club {
    pub fn new(bound: Ordinal, form: ClubForm) -> Result<Self, ClubError> {
        if matches!(form, ClubForm::Pieces) {
            return Err(ClubError::BadForm(
                "piece lists are built from canonical sets directly".into(),
            ));
        }
        let canon = canon_of(&form);
        if let Some(missing) = canon.closure_defect() {
            return Err(ClubError::NotClosed(
                format!("{form:?}"),
                missing.to_string(),
            ));
        }
        if canon.ssup() > bound {
            return Err(ClubError::OutOfBound(
                canon.sup().to_string(),
                bound.to_string(),
            ));
        }
        Ok(Club { bound, form, canon })
    }

    /// A club directly from a canonical set; a printable form is
    /// synthesized.
    pub fn from_canon(bound: Ordinal, canon: CanonSet) -> Result<Self, ClubError> {
        if let Some(missing) = canon.closure_defect() {
            return Err(ClubError::NotClosed(
                format!("{canon:?}"),
                missing.to_string(),
            ));
        }
        if canon.ssup() > bound {
            return Err(ClubError::OutOfBound(
                canon.sup().to_string(),
                bound.to_string(),
            ));
        }
        let form = synthesize_form(&canon);
        Ok(Club { bound, form, canon })
    }

    pub fn empty(bound: Ordinal) -> Self {
        Club {
            bound,
            form: ClubForm::Finite(Vec::new()),
            canon: CanonSet::empty(),
        }
    }

    pub fn singleton(bound: Ordinal, x: Ordinal) -> Self {
        Club {
            bound,
            form: ClubForm::Finite(vec![x.clone()]),
            canon: CanonSet::singleton(x),
        }
    }

    /// The full interval `[0, bound)`.
    pub fn interval(bound: Ordinal) -> Self {
        Club {
            canon: CanonSet::interval(bound.clone()),
            form: ClubForm::Interval(bound.clone()),
            bound,
        }
    }

    /// The canonical fundamental-sequence club of a limit ordinal.
    pub fn fs(limit: Ordinal) -> Result<Self, ClubError> {
        let canon = CanonSet::fs_range(&limit)
            .ok_or_else(|| ClubError::BadForm(format!("fs({limit}): not a limit ordinal")))?;
        Ok(Club {
            canon,
            form: ClubForm::Fs(limit.clone()),
            bound: limit,
        })
    }

    pub fn finite(bound: Ordinal, mut elements: Vec<Ordinal>) -> Result<Self, ClubError> {
        elements.sort();
        elements.dedup();
        let canon = CanonSet::from_sorted(elements.clone());
        if canon.ssup() > bound {
            return Err(ClubError::OutOfBound(
                canon.sup().to_string(),
                bound.to_string(),
            ));
        }
        Ok(Club {
            bound,
            form: ClubForm::Finite(elements),
            canon,
        })
    }

    /// Finite head plus the omega-tail of consecutive ordinals from
    /// `tail_start`.
    pub fn tailed(
        bound: Ordinal,
        head: Vec<Ordinal>,
        tail_start: Ordinal,
    ) -> Result<Self, ClubError> {
        if head.iter().any(|h| *h >= tail_start) {
            return Err(ClubError::BadForm(
                "tailed head must lie strictly below the tail start".into(),
            ));
        }
        Self::from_canon(bound, CanonSet::tailed(head, tail_start))
    }

    /// Order-isomorphic copy of `index` through the enumeration of `base`.
    pub fn copy(bound: Ordinal, index: Club, base: Club) -> Result<Self, ClubError> {
        let canon = index.canon.copy_through(&base.canon);
        if let Some(missing) = canon.closure_defect() {
            return Err(ClubError::NotClosed(
                format!("copy({index}, of={base})"),
                missing.to_string(),
            ));
        }
        if canon.ssup() > bound {
            return Err(ClubError::OutOfBound(
                canon.sup().to_string(),
                bound.to_string(),
            ));
        }
        Ok(Club {
            bound,
            form: ClubForm::Copy {
                index: Box::new(index),
                base: Box::new(base),
            },
            canon,
        })
    }

    pub fn bound(&self) -> &Ordinal {
        &self.bound
    }

    pub fn form(&self) -> &ClubForm {
        &self.form
    }

    pub fn canon(&self) -> &CanonSet {
        &self.canon
    }

    pub fn is_empty(&self) -> bool {
        self.canon.is_empty()
    }

    pub fn member(&self, x: &Ordinal) -> bool {
        self.canon.member(x)
    }

    /// Least element `>= x`, or `None` when no element of the club lies at
    /// or above `x`.
    pub fn min_above(&self, x: &Ordinal) -> Option<Ordinal> {
        self.canon.min_above(x)
    }

    /// Largest element strictly below `x` (absent when there is none or the
    /// club is cofinal in `x`).
    pub fn max_below(&self, x: &Ordinal) -> Option<Ordinal> {
        match self.canon.max_below(x) {
            BelowOutcome::Max(m) => Some(m),
            _ => None,
        }
    }

    /// `sup(C /\ x)`, 0 for an empty intersection.
    pub fn sup_below(&self, x: &Ordinal) -> Ordinal {
        self.canon.sup_below(x)
    }

    /// Accumulation point: `x` is a member and a limit of smaller members.
    pub fn is_acc_point(&self, x: &Ordinal) -> bool {
        self.canon.is_acc_point(x)
    }

    /// Exact decision of `self /\ bound == other /\ bound`.
    pub fn equal_below(&self, other: &Club, bound: &Ordinal) -> bool {
        self.canon.equal_below(&other.canon, bound)
    }

    /// Least ordinal below `bound` in exactly one of the two clubs.
    pub fn difference_witness(&self, other: &Club, bound: &Ordinal) -> Option<Ordinal> {
        self.canon.difference_witness(&other.canon, bound)
    }

    pub fn ssup(&self) -> Ordinal {
        self.canon.ssup()
    }

    pub fn otp(&self) -> Ordinal {
        self.canon.otp()
    }

    pub fn element_at(&self, pos: &Ordinal) -> Option<Ordinal> {
        self.canon.element_at(pos)
    }

    /// The restriction `C /\ beta` as a club in `beta`.
    pub fn clip_below(&self, beta: &Ordinal) -> Club {
        let canon = self.canon.clip_below(beta);
        Club {
            bound: beta.clone(),
            form: synthesize_form(&canon),
            canon,
        }
    }

    /// Elements at or above `from`, keeping the bound.
    pub fn clip_from(&self, from: &Ordinal) -> Club {
        let canon = self.canon.clip_from(from);
        Club {
            bound: self.bound.clone(),
            form: synthesize_form(&canon),
            canon,
        }
    }

    /// All elements when the club is finite.
    pub fn enumerate(&self) -> Option<Vec<Ordinal>> {
        self.canon.enumerate()
    }

    /// Is the set cofinal in `x` (so `sup(C /\ x) = x` with `x > 0`)?
    pub fn is_limit_of(&self, x: &Ordinal) -> bool {
        self.canon.is_limit_of(x)
    }
}

fn canon_of(form: &ClubForm) -> CanonSet {
    match form {
        ClubForm::Finite(v) => CanonSet::from_sorted(v.clone()),
        ClubForm::Interval(b) => CanonSet::interval(b.clone()),
        ClubForm::Fs(l) => CanonSet::fs_range(l).unwrap_or_else(CanonSet::empty),
        ClubForm::Pieces => CanonSet::empty(),
        ClubForm::Copy { index, base } => index.canon.copy_through(&base.canon),
    }
}

/// Picks a printable closed form for a computed canonical set. Every form
/// reparses to the same set.
fn synthesize_form(canon: &CanonSet) -> ClubForm {
    if let Some(elements) = canon.enumerate() {
        return ClubForm::Finite(elements);
    }
    if *canon == CanonSet::interval(canon.ssup()) {
        return ClubForm::Interval(canon.ssup());
    }
    ClubForm::Pieces
}

impl fmt::Display for Club {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            ClubForm::Finite(v) => write!(f, "finite[{}]", format_ordinal_list(v)),
            ClubForm::Interval(b) => write!(f, "interval({b})"),
            ClubForm::Fs(l) => write!(f, "fs({l})"),
            ClubForm::Pieces => {
                write!(f, "pieces[")?;
                for (i, p) in self.canon.parts().iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    match p {
                        Part::Pt(o) => write!(f, "{o}")?,
                        Part::Seg { lo, hi } => write!(f, "{lo}..{hi}")?,
                        Part::Str { start, exp } => write!(f, "stream({start}, {exp})")?,
                    }
                }
                write!(f, "]")
            }
            ClubForm::Copy { index, base } => write!(f, "copy({index}, of={base})"),
        }
    }
}

impl fmt::Debug for Club {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {:?} (in {})", self, self.canon, self.bound)
    }
}

impl FromStr for Club {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_club(s.trim())
    }
}

fn parse_club(s: &str) -> Result<Club, ParseError> {
    if let Some(rest) = s.strip_prefix("finite[") {
        let inner = rest
            .strip_suffix(']')
            .ok_or_else(|| ParseError::new("missing `]` in finite[...]"))?;
        let elements = parse_ordinal_list(inner)?;
        let bound = elements
            .iter()
            .max()
            .map_or_else(Ordinal::zero, |m| m.succ());
        Club::finite(bound, elements).map_err(|e| ParseError::new(e.to_string()))
    } else if let Some(rest) = s.strip_prefix("fs(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| ParseError::new("missing `)` in fs(...)"))?;
        let limit: Ordinal = inner.parse()?;
        Club::fs(limit).map_err(|e| ParseError::new(e.to_string()))
    } else if let Some(rest) = s.strip_prefix("interval(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| ParseError::new("missing `)` in interval(...)"))?;
        Ok(Club::interval(inner.parse()?))
    } else if let Some(rest) = s.strip_prefix("pieces[") {
        let inner = rest
            .strip_suffix(']')
            .ok_or_else(|| ParseError::new("missing `]` in pieces[...]"))?;
        let mut parts = Vec::new();
        for item in split_top_level(inner, ',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            if let Some(stream) = item.strip_prefix("stream(") {
                let stream = stream
                    .strip_suffix(')')
                    .ok_or_else(|| ParseError::new("missing `)` in stream(...)"))?;
                let (start, exp) = stream
                    .split_once(',')
                    .ok_or_else(|| ParseError::new("stream(...) needs `start, exponent`"))?;
                let start: Ordinal = start.trim().parse()?;
                let exp: u32 = exp
                    .trim()
                    .parse()
                    .map_err(|_| ParseError::new("bad stream exponent"))?;
                parts.push(Part::Str { start, exp });
            } else if let Some((lo, hi)) = item.split_once("..") {
                parts.push(Part::Seg {
                    lo: lo.trim().parse()?,
                    hi: hi.trim().parse()?,
                });
            } else {
                parts.push(Part::Pt(item.parse()?));
            }
        }
        let canon = CanonSet::from_parts(parts);
        let bound = canon.ssup();
        Club::from_canon(bound, canon).map_err(|e| ParseError::new(e.to_string()))
    } else if let Some(rest) = s.strip_prefix("copy(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| ParseError::new("missing `)` in copy(...)"))?;
        let (index_str, base_str) = split_copy_args(inner)?;
        let index: Club = index_str.parse()?;
        let base: Club = base_str.parse()?;
        let bound = base.ssup();
        Club::copy(bound, index, base).map_err(|e| ParseError::new(e.to_string()))
    } else {
        Err(ParseError::new(format!("unrecognized club literal `{s}`")))
    }
}

/// Splits at top-level occurrences of `sep`, ignoring bracketed nesting.
fn split_top_level(inner: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => {
                out.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&inner[start..]);
    out
}

/// Splits `"<index>, of=<base>"` at the top-level comma.
fn split_copy_args(inner: &str) -> Result<(&str, &str), ParseError> {
    let fields = split_top_level(inner, ',');
    if fields.len() != 2 {
        return Err(ParseError::new("copy(...) needs two arguments"));
    }
    let base = fields[1]
        .trim()
        .strip_prefix("of=")
        .ok_or_else(|| ParseError::new("copy(...) needs `of=<club>`"))?;
    Ok((fields[0].trim(), base.trim()))
}

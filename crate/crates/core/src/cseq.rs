//! n-dimensional C-sequences: rules assigning clubs to valid index tuples,
//! their coherence checker, restriction, truncation and the basic builders.
//!
//! A sequence of dimension `n` over a domain club `D` assigns to the empty
//! index the club `D` itself, and admits `<beta> ++ rest` exactly when
//! `rest` is admitted and `beta` is a member of the club at `rest`; the club
//! at `<beta> ++ rest` then lives inside `beta /\ C_rest`. All sequences
//! here are minimal at successors: when `beta` is a non-accumulation point
//! of the parent club, the assigned club is the singleton holding the
//! largest parent element below `beta` (or empty). Only accumulation-point
//! indices carry interesting clubs, so builders specify those and the
//! minimal rule fills in the rest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::club::Club;
use crate::error::SeqError;
use crate::ordinal::Ordinal;
use crate::stepped::SteppedUp;

/// A game transcript entry, kept by the game builder for reproducibility.
#[derive(Clone, Debug)]
pub struct GameTurn {
    pub turn: Ordinal,
    pub player: char,
    pub top: Ordinal,
    pub note: String,
}

/// An explicitly tabulated sequence: the clubs of every index whose club
/// has more than one element, everything else by the minimal rule.
#[derive(Clone)]
pub struct ExplicitSeq {
    pub domain: Club,
    pub table: BTreeMap<Vec<Ordinal>, Club>,
    pub transcript: Vec<GameTurn>,
}

#[derive(Clone)]
enum SeqKind {
    OrderMinimal {
        lambda: Ordinal,
    },
    Maximal {
        lambda: Ordinal,
    },
    SteppedUp(Arc<SteppedUp>),
    Explicit(Arc<ExplicitSeq>),
    Restricted {
        base: Arc<CSequence>,
        suffix: Vec<Ordinal>,
        domain: Club,
    },
    Truncated {
        base: Arc<CSequence>,
    },
    Mutated {
        base: Arc<CSequence>,
        target: Vec<Ordinal>,
        club: Club,
    },
}

/// An n-dimensional C-sequence.
#[derive(Clone)]
pub struct CSequence {
    n: usize,
    kind: SeqKind,
}

impl std::fmt::Debug for CSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}-sequence ({}) on {}",
            self.n,
            self.kind_name(),
            self.bound()
        )
    }
}

pub fn fmt_index(idx: &[Ordinal]) -> String {
    let mut s = String::from("<");
    for (i, o) in idx.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{o}");
    }
    s.push('>');
    s
}

impl CSequence {
    /// Order-type-minimal sequence on the full interval below `lambda`:
    /// fundamental-sequence clubs at limits, singletons elsewhere. Every
    /// deeper level degenerates to singletons because the top clubs have no
    /// accumulation points.
    pub fn order_minimal(n: usize, lambda: Ordinal) -> Result<Self, SeqError> {
        if n == 0 {
            return Err(SeqError::BadConstruction(
                "dimension must be positive".into(),
            ));
        }
        if !lambda.is_limit() {
            return Err(SeqError::BadConstruction(format!(
                "order-minimal universe needs a limit ordinal, got {lambda}"
            )));
        }
        Ok(CSequence {
            n,
            kind: SeqKind::OrderMinimal { lambda },
        })
    }

    /// Maximal-interval sequence on the full interval below `lambda`: at
    /// accumulation points the club is as large as possible, namely
    /// `beta /\ C_rest`; elsewhere the minimal rule applies.
    pub fn maximal(n: usize, lambda: Ordinal) -> Result<Self, SeqError> {
        if n == 0 {
            return Err(SeqError::BadConstruction(
                "dimension must be positive".into(),
            ));
        }
        if !lambda.is_limit() {
            return Err(SeqError::BadConstruction(format!(
                "maximal universe needs a limit ordinal, got {lambda}"
            )));
        }
        Ok(CSequence {
            n,
            kind: SeqKind::Maximal { lambda },
        })
    }

    pub fn from_stepped(s: SteppedUp) -> Self {
        CSequence {
            n: s.dimension(),
            kind: SeqKind::SteppedUp(Arc::new(s)),
        }
    }

    pub fn explicit(n: usize, seq: ExplicitSeq) -> Self {
        CSequence {
            n,
            kind: SeqKind::Explicit(Arc::new(seq)),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            SeqKind::OrderMinimal { .. } => "order-minimal",
            SeqKind::Maximal { .. } => "maximal-interval",
            SeqKind::SteppedUp(_) => "stepped-up",
            SeqKind::Explicit(e) if !e.transcript.is_empty() => "game-built",
            SeqKind::Explicit(_) => "explicit",
            SeqKind::Restricted { .. } => "restricted",
            SeqKind::Truncated { base } => base.kind_name(),
            SeqKind::Mutated { .. } => "mutated",
        }
    }

    /// The domain club, i.e. the club at the empty index.
    pub fn domain(&self) -> Club {
        match &self.kind {
            SeqKind::OrderMinimal { lambda } | SeqKind::Maximal { lambda } => {
                Club::interval(lambda.clone())
            }
            SeqKind::SteppedUp(s) => Club::interval(s.lambda().clone()),
            SeqKind::Explicit(e) => e.domain.clone(),
            SeqKind::Restricted { domain, .. } => domain.clone(),
            SeqKind::Truncated { base } => base.domain(),
            SeqKind::Mutated { base, .. } => base.domain(),
        }
    }

    /// Bound of the universe the sequence lives in.
    pub fn bound(&self) -> Ordinal {
        self.domain().bound().clone()
    }

    pub fn transcript(&self) -> &[GameTurn] {
        match &self.kind {
            SeqKind::Explicit(e) => &e.transcript,
            _ => &[],
        }
    }

    /// The stored club table of an explicitly tabulated sequence; empty for
    /// rule-based kinds.
    pub fn explicit_table(&self) -> Vec<(Vec<Ordinal>, Club)> {
        match &self.kind {
            SeqKind::Explicit(e) => e
                .table
                .iter()
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Parameters of a stepped-up sequence, when it is one.
    pub fn stepped_params(&self) -> Option<&SteppedUp> {
        match &self.kind {
            SeqKind::SteppedUp(s) => Some(s),
            _ => None,
        }
    }

    /// The club assigned to a valid index tuple; the empty tuple yields the
    /// domain club.
    pub fn club_of(&self, idx: &[Ordinal]) -> Result<Club, SeqError> {
        if idx.len() > self.n {
            return Err(SeqError::IndexTooLong(fmt_index(idx), idx.len(), self.n));
        }
        self.club_of_unchecked(idx)
    }

    fn club_of_unchecked(&self, idx: &[Ordinal]) -> Result<Club, SeqError> {
        let Some((beta, rest)) = idx.split_first() else {
            return Ok(self.domain());
        };
        if let Some(next) = rest.first() {
            if beta >= next {
                return Err(SeqError::InvalidIndex(fmt_index(idx)));
            }
        }
        let parent = self.club_of_unchecked(rest)?;
        if !parent.member(beta) {
            return Err(SeqError::InvalidIndex(fmt_index(idx)));
        }
        self.assign(idx, beta, rest, &parent)
    }

    /// The club for `idx = <beta> ++ rest`, given the parent club at `rest`
    /// with `beta` a member of it.
    fn assign(
        &self,
        idx: &[Ordinal],
        beta: &Ordinal,
        rest: &[Ordinal],
        parent: &Club,
    ) -> Result<Club, SeqError> {
        match &self.kind {
            SeqKind::OrderMinimal { .. } => {
                if parent.is_acc_point(beta) {
                    if rest.is_empty() {
                        Club::fs(beta.clone()).map_err(|e| SeqError::BadConstruction(e.to_string()))
                    } else {
                        Err(SeqError::BadConstruction(format!(
                            "order-minimal clubs have no accumulation points, \
                             yet {} reached one",
                            fmt_index(idx)
                        )))
                    }
                } else {
                    Ok(minimal_club(parent, beta))
                }
            }
            SeqKind::Maximal { .. } => {
                if parent.is_acc_point(beta) {
                    Ok(parent.clip_below(beta))
                } else {
                    Ok(minimal_club(parent, beta))
                }
            }
            SeqKind::SteppedUp(s) => s.assign(idx, beta, parent),
            SeqKind::Explicit(e) => {
                if let Some(club) = e.table.get(idx) {
                    Ok(club.clone())
                } else if parent.is_acc_point(beta) {
                    Err(SeqError::MissingClub(fmt_index(idx)))
                } else {
                    Ok(minimal_club(parent, beta))
                }
            }
            SeqKind::Restricted { base, suffix, .. } => {
                let mut full = idx.to_vec();
                full.extend_from_slice(suffix);
                base.club_of(&full)
            }
            SeqKind::Truncated { base } => base.club_of(idx),
            SeqKind::Mutated { base, target, club } => {
                if idx == target.as_slice() {
                    Ok(club.clone())
                } else {
                    // Delegate the assignment rule but keep the recursion in
                    // self, so a mutated parent influences deeper levels.
                    base.assign(idx, beta, rest, parent)
                }
            }
        }
    }

    /// Recursive index validity: suffix validity plus membership at each
    /// extension step.
    pub fn index_valid(&self, idx: &[Ordinal]) -> bool {
        idx.len() <= self.n && self.club_of_unchecked(idx).is_ok()
    }

    /// The `(n-1)`-dimensional restriction along `delta`: indices that stay
    /// valid after appending `delta`, with their clubs unchanged.
    pub fn restrict(&self, delta: &Ordinal) -> Result<CSequence, SeqError> {
        if self.n < 2 {
            return Err(SeqError::BadConstruction(
                "restriction needs dimension at least 2".into(),
            ));
        }
        if !self.domain().member(delta) {
            return Err(SeqError::NotInDomain(delta.to_string()));
        }
        let domain = self.club_of(std::slice::from_ref(delta))?;
        let (base, mut suffix) = match &self.kind {
            SeqKind::Restricted { base, suffix, .. } => (base.clone(), suffix.clone()),
            _ => (Arc::new(self.clone()), Vec::new()),
        };
        suffix.insert(0, delta.clone());
        Ok(CSequence {
            n: self.n - 1,
            kind: SeqKind::Restricted {
                base,
                suffix,
                domain,
            },
        })
    }

    /// The induced lower-dimensional sequence: same clubs, indices capped at
    /// length `m`.
    pub fn truncate(&self, m: usize) -> Result<CSequence, SeqError> {
        if m == 0 || m > self.n {
            return Err(SeqError::BadConstruction(format!(
                "cannot truncate a {}-sequence to dimension {m}",
                self.n
            )));
        }
        if m == self.n {
            return Ok(self.clone());
        }
        Ok(CSequence {
            n: m,
            kind: SeqKind::Truncated {
                base: Arc::new(self.clone()),
            },
        })
    }

    /// Replaces the club at one index, leaving the rule otherwise intact.
    /// Used by the mutation-sensitivity harness.
    pub fn mutate(&self, target: Vec<Ordinal>, club: Club) -> Result<CSequence, SeqError> {
        if target.is_empty() {
            return Err(SeqError::BadConstruction(
                "cannot mutate the domain club".into(),
            ));
        }
        if !self.index_valid(&target) {
            return Err(SeqError::InvalidIndex(fmt_index(&target)));
        }
        Ok(CSequence {
            n: self.n,
            kind: SeqKind::Mutated {
                base: Arc::new(self.clone()),
                target,
                club,
            },
        })
    }

    /// All valid indices with entries drawn from `grid`, up to `max_len`,
    /// grouped by length.
    pub fn valid_indices(&self, grid: &[Ordinal], max_len: usize) -> Vec<Vec<Vec<Ordinal>>> {
        let mut sorted = grid.to_vec();
        sorted.sort();
        sorted.dedup();
        let mut by_len: Vec<Vec<Vec<Ordinal>>> = vec![vec![Vec::new()]];
        for len in 1..=max_len.min(self.n) {
            let mut next = Vec::new();
            for suffix in &by_len[len - 1] {
                let Ok(club) = self.club_of(suffix) else {
                    continue;
                };
                let cap = suffix.first();
                for beta in &sorted {
                    if let Some(cap) = cap {
                        if beta >= cap {
                            break;
                        }
                    }
                    if club.member(beta) {
                        let mut idx = Vec::with_capacity(len);
                        idx.push(beta.clone());
                        idx.extend_from_slice(suffix);
                        next.push(idx);
                    }
                }
            }
            by_len.push(next);
        }
        by_len
    }
}

/// The minimal-at-successors club: the largest parent element strictly
/// below `beta`, or the empty club.
pub fn minimal_club(parent: &Club, beta: &Ordinal) -> Club {
    match parent.max_below(beta) {
        Some(m) => Club::singleton(beta.clone(), m),
        None => Club::empty(beta.clone()),
    }
}

/// One detected defect of a sequence against its structural contract or the
/// coherence condition.
#[derive(Clone, Debug)]
pub enum Violation {
    /// A full-length club accumulating at `alpha` disagrees with the club
    /// at `alpha` below `alpha`.
    FullLengthMismatch {
        alpha: Ordinal,
        index: Vec<Ordinal>,
        witness: Ordinal,
    },
    /// A club cofinal in its own first index `alpha` (with `alpha` an
    /// accumulation point of the system) differs from the club at `alpha`.
    CofinalMismatch {
        alpha: Ordinal,
        index: Vec<Ordinal>,
        witness: Ordinal,
    },
    /// The club at the index is not club in `beta /\ parent`.
    NotClubInParent { index: Vec<Ordinal>, reason: String },
    /// A non-accumulation index whose club is not the minimal singleton.
    NotMinimalAtSuccessor { index: Vec<Ordinal>, reason: String },
    /// The rule failed to produce a club at a valid index.
    RuleFailure { index: Vec<Ordinal>, reason: String },
}

impl Violation {
    pub fn describe(&self) -> String {
        match self {
            Violation::FullLengthMismatch {
                alpha,
                index,
                witness,
            } => format!(
                "club at {} accumulates at {alpha} but disagrees with the club at {alpha} \
                 (first difference {witness})",
                fmt_index(index)
            ),
            Violation::CofinalMismatch {
                alpha,
                index,
                witness,
            } => format!(
                "club at {} is cofinal in {alpha} but differs from the club at {alpha} \
                 (first difference {witness})",
                fmt_index(index)
            ),
            Violation::NotClubInParent { index, reason } => {
                format!(
                    "club at {} is not club in its parent: {reason}",
                    fmt_index(index)
                )
            }
            Violation::NotMinimalAtSuccessor { index, reason } => {
                format!(
                    "club at {} breaks the minimal rule: {reason}",
                    fmt_index(index)
                )
            }
            Violation::RuleFailure { index, reason } => {
                format!("no club at valid index {}: {reason}", fmt_index(index))
            }
        }
    }
}

/// Result of scanning a sequence below a window.
#[derive(Clone, Debug)]
pub struct CoherenceReport {
    pub window: Ordinal,
    pub grid: Vec<Ordinal>,
    /// Grid ordinals that are accumulation points of some full-length club.
    pub x_set: Vec<Ordinal>,
    pub violations: Vec<Violation>,
}

impl CoherenceReport {
    pub fn is_coherent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The default scanning grid below `window`: all CNF ordinals with
/// exponents up to 3 and coefficients up to `density`.
pub fn landmark_grid(window: &Ordinal, density: u64) -> Vec<Ordinal> {
    let mut grid = Vec::new();
    let dmax = window.degree().min(3);
    let mut stack = vec![(Ordinal::zero(), dmax as i64)];
    while let Some((prefix, e)) = stack.pop() {
        if e < 0 {
            if prefix < *window {
                grid.push(prefix);
            }
            continue;
        }
        for c in 0..=density {
            stack.push((prefix.add(&Ordinal::term(e as u32, c)), e - 1));
        }
    }
    grid.sort();
    grid.dedup();
    grid
}

/// Scans the sequence over a grid below `window`: the structural contract
/// at every valid grid index, and the two coherence clauses at every grid
/// ordinal that accumulates a full-length club.
pub fn check_coherence(seq: &CSequence, window: &Ordinal, grid: &[Ordinal]) -> CoherenceReport {
    let mut violations = Vec::new();
    let by_len = seq.valid_indices(grid, seq.n());

    // Structural pass: club-in-parent and the minimal rule.
    for level in by_len.iter().skip(1) {
        for idx in level {
            let beta = &idx[0];
            let rest = &idx[1..];
            let parent = match seq.club_of(rest) {
                Ok(c) => c,
                Err(e) => {
                    violations.push(Violation::RuleFailure {
                        index: rest.to_vec(),
                        reason: e.to_string(),
                    });
                    continue;
                }
            };
            let club = match seq.club_of(idx) {
                Ok(c) => c,
                Err(e) => {
                    violations.push(Violation::RuleFailure {
                        index: idx.clone(),
                        reason: e.to_string(),
                    });
                    continue;
                }
            };
            let target = parent.clip_below(beta);
            if let Some(w) = club.canon().least_missing(target.canon(), beta) {
                violations.push(Violation::NotClubInParent {
                    index: idx.clone(),
                    reason: format!("{w} lies outside beta /\\ parent"),
                });
                continue;
            }
            if !target.is_empty() && club.ssup() != target.ssup() {
                violations.push(Violation::NotClubInParent {
                    index: idx.clone(),
                    reason: format!(
                        "strict sup {} differs from parent window sup {}",
                        club.ssup(),
                        target.ssup()
                    ),
                });
                continue;
            }
            if !parent.is_acc_point(beta) {
                let expected = minimal_club(&parent, beta);
                if club != expected {
                    violations.push(Violation::NotMinimalAtSuccessor {
                        index: idx.clone(),
                        reason: format!("expected {expected}, found {club}"),
                    });
                }
            }
        }
    }

    // Full-length clubs and the set of their accumulation points.
    let full = by_len.get(seq.n()).cloned().unwrap_or_default();
    let mut x_set: Vec<Ordinal> = Vec::new();
    let domain = seq.domain();
    for alpha in grid {
        if alpha >= window || !domain.member(alpha) {
            continue;
        }
        let mut witnessed = false;
        for idx in &full {
            let Ok(club) = seq.club_of(idx) else { continue };
            if club.is_acc_point(alpha) {
                witnessed = true;
                let Ok(alpha_club) = seq.club_of(std::slice::from_ref(alpha)) else {
                    violations.push(Violation::RuleFailure {
                        index: vec![alpha.clone()],
                        reason: "no club at an accumulation ordinal".into(),
                    });
                    continue;
                };
                if let Some(w) = club.difference_witness(&alpha_club, alpha) {
                    violations.push(Violation::FullLengthMismatch {
                        alpha: alpha.clone(),
                        index: idx.clone(),
                        witness: w,
                    });
                }
            }
        }
        if witnessed {
            x_set.push(alpha.clone());
        }
    }

    // Clubs cofinal in their own first coordinate.
    for level in by_len.iter().skip(1) {
        for idx in level {
            let alpha = &idx[0];
            if !x_set.contains(alpha) {
                continue;
            }
            let Ok(club) = seq.club_of(idx) else { continue };
            if club.is_limit_of(alpha) {
                let Ok(alpha_club) = seq.club_of(std::slice::from_ref(alpha)) else {
                    continue;
                };
                if let Some(w) = club.difference_witness(&alpha_club, alpha) {
                    violations.push(Violation::CofinalMismatch {
                        alpha: alpha.clone(),
                        index: idx.clone(),
                        witness: w,
                    });
                }
            }
        }
    }

    CoherenceReport {
        window: window.clone(),
        grid: grid.to_vec(),
        x_set,
        violations,
    }
}

/// Outcome of probing a club against the sequence's weak-nontriviality
/// condition below a window.
///
/// Of the three nontriviality notions on coherent sequences - weak
/// (no single club agrees with the level-one clubs at all of its
/// accumulation points), plain (no coherent extension one step past the
/// universe), and strong (hereditarily plain, with a regular uncountable
/// order type) - only the weak notion admits a finite witness check, and
/// only refutation of a given candidate at that. The two stronger notions
/// quantify over all extensions or demand uncountable order types, so this
/// crate records them here without deciding them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeakNontrivialityOutcome {
    /// `candidate /\ alpha` differs from the club at `alpha`: the candidate
    /// does not trivialize the sequence at this accumulation point.
    RefutedAt(Ordinal),
    /// Every scanned accumulation point of the candidate below the window
    /// agrees; the candidate trivializes the sequence this far.
    ConsistentBelowWindow,
}

/// Scans accumulation points of `candidate` (restricted to `grid`) below
/// `window`, looking for a disagreement with the level-one clubs.
pub fn check_weak_nontriviality_witness(
    seq: &CSequence,
    candidate: &Club,
    window: &Ordinal,
    grid: &[Ordinal],
) -> Result<WeakNontrivialityOutcome, SeqError> {
    let domain = seq.domain();
    if let Some(w) = candidate.canon().least_missing(domain.canon(), window) {
        return Err(SeqError::BadConstruction(format!(
            "candidate club is not a subset of the domain ({w} escapes)"
        )));
    }
    let mut sorted = grid.to_vec();
    sorted.sort();
    for alpha in &sorted {
        if alpha >= window || !candidate.is_acc_point(alpha) {
            continue;
        }
        let alpha_club = seq.club_of(std::slice::from_ref(alpha))?;
        if !candidate.equal_below(&alpha_club, alpha) {
            return Ok(WeakNontrivialityOutcome::RefutedAt(alpha.clone()));
        }
    }
    Ok(WeakNontrivialityOutcome::ConsistentBelowWindow)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn idx(parts: &[&str]) -> Vec<Ordinal> {
        parts.iter().map(|s| ord(s)).collect()
    }

    #[test]
    fn sequences_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<CSequence>();
        assert_send_sync::<Club>();
        assert_send_sync::<crate::group::GroupElement>();
        assert_send_sync::<crate::walk::WalkTree>();
    }

    #[test]
    fn index_validity_examples() {
        let maximal = CSequence::maximal(2, ord("w^2")).unwrap();
        assert!(maximal.index_valid(&[]));
        assert!(maximal.index_valid(&idx(&["w", "w*2"])));
        let minimal = CSequence::order_minimal(2, ord("w^2")).unwrap();
        assert!(!minimal.index_valid(&idx(&["3", "w*2"])));
        assert!(minimal.index_valid(&idx(&["w+3", "w*2"])));
        assert!(!minimal.index_valid(&idx(&["w*2", "w"])));
    }

    #[test]
    fn club_assignments() {
        let maximal = CSequence::maximal(2, ord("w^2")).unwrap();
        let c = maximal.club_of(&idx(&["w", "w*2"])).unwrap();
        assert_eq!(c, Club::interval(ord("w")));
        // successor points take the minimal singleton
        let c = maximal.club_of(&idx(&["w+1", "w*2"])).unwrap();
        assert_eq!(c.enumerate().unwrap(), vec![ord("w")]);
        let minimal = CSequence::order_minimal(2, ord("w^2")).unwrap();
        let c = minimal.club_of(&idx(&["w*2"])).unwrap();
        assert_eq!(c, Club::fs(ord("w*2")).unwrap());
        // every second-level club of the order-minimal universe is small
        let c = minimal.club_of(&idx(&["w+3", "w*2"])).unwrap();
        assert_eq!(c.enumerate().unwrap(), vec![ord("w+2")]);
        assert!(minimal.club_of(&idx(&["w", "w*2"])).unwrap().is_empty());
    }

    #[test]
    fn coherence_of_builders() {
        let window = ord("w^2");
        let grid = landmark_grid(&window, 4);
        let minimal = CSequence::order_minimal(2, window.clone()).unwrap();
        let report = check_coherence(&minimal, &window, &grid);
        assert!(report.is_coherent(), "{:?}", report.violations);
        assert!(report.x_set.is_empty());

        let maximal = CSequence::maximal(2, window.clone()).unwrap();
        let report = check_coherence(&maximal, &window, &grid);
        assert!(report.is_coherent(), "{:?}", report.violations);
        // in the maximal universe, a grid ordinal accumulates a full-length
        // club exactly when it is a limit with two grid limits above it
        let limits: Vec<&Ordinal> = grid.iter().filter(|o| o.is_limit()).collect();
        let expected: Vec<Ordinal> = limits
            .iter()
            .filter(|a| limits.iter().filter(|g| g > a).count() >= 2)
            .map(|a| (*a).clone())
            .collect();
        assert_eq!(report.x_set, expected);
        assert!(report.x_set.contains(&ord("w")));
    }

    #[test]
    fn mutation_is_caught() {
        let window = ord("w^2");
        let grid = landmark_grid(&window, 4);
        let maximal = CSequence::maximal(2, window.clone()).unwrap();
        let mutated = maximal
            .mutate(
                vec![ord("w")],
                Club::fs(ord("w")).unwrap().clip_from(&ord("1")),
            )
            .unwrap();
        let report = check_coherence(&mutated, &window, &grid);
        assert!(!report.is_coherent());
        assert!(report.violations.iter().any(
            |v| matches!(v, Violation::FullLengthMismatch { alpha, .. } if *alpha == ord("w"))
        ));
    }

    #[test]
    fn restriction_unfolds() {
        let maximal = CSequence::maximal(2, ord("w^2")).unwrap();
        let restricted = maximal.restrict(&ord("w*2")).unwrap();
        assert_eq!(restricted.n(), 1);
        assert_eq!(restricted.domain(), Club::interval(ord("w*2")));
        let c = restricted.club_of(&idx(&["w"])).unwrap();
        assert_eq!(c, Club::interval(ord("w")));
        // restricting twice agrees with the two-step suffix
        let deep = CSequence::maximal(3, ord("w^2")).unwrap();
        let r1 = deep.restrict(&ord("w*3")).unwrap();
        let r2 = r1.restrict(&ord("w*2")).unwrap();
        let direct = deep.club_of(&idx(&["w", "w*2", "w*3"])).unwrap();
        assert_eq!(r2.club_of(&idx(&["w"])).unwrap(), direct);
        // coherence survives restriction
        let window = ord("w*2");
        let grid = landmark_grid(&window, 4);
        let report = check_coherence(&restricted, &window, &grid);
        assert!(report.is_coherent(), "{:?}", report.violations);
    }

    #[test]
    fn weak_nontriviality_witnesses() {
        let window = ord("w^2");
        let grid = landmark_grid(&window, 4);
        let maximal = CSequence::maximal(2, window.clone()).unwrap();
        let full = Club::interval(window.clone());
        assert_eq!(
            check_weak_nontriviality_witness(&maximal, &full, &window, &grid).unwrap(),
            WeakNontrivialityOutcome::ConsistentBelowWindow
        );
        let minimal = CSequence::order_minimal(2, window.clone()).unwrap();
        assert_eq!(
            check_weak_nontriviality_witness(&minimal, &full, &window, &grid).unwrap(),
            WeakNontrivialityOutcome::RefutedAt(ord("w*2"))
        );
        let sparse = Club::fs(window.clone()).unwrap();
        assert_eq!(
            check_weak_nontriviality_witness(&minimal, &sparse, &window, &grid).unwrap(),
            WeakNontrivialityOutcome::ConsistentBelowWindow,
            "no grid accumulation point of the sparse club lies below the window"
        );
    }

    #[test]
    fn parent_containment_property() {
        // club at <beta> ++ rest is always inside beta /\ club at rest
        for seq in [
            CSequence::order_minimal(2, ord("w^2")).unwrap(),
            CSequence::maximal(2, ord("w^2")).unwrap(),
        ] {
            let grid = landmark_grid(&ord("w^2"), 3);
            let by_len = seq.valid_indices(&grid, 2);
            for level in by_len.iter().skip(1) {
                for idx in level {
                    let club = seq.club_of(idx).unwrap();
                    let parent = seq.club_of(&idx[1..]).unwrap();
                    let target = parent.clip_below(&idx[0]);
                    assert!(
                        club.canon()
                            .least_missing(target.canon(), &idx[0])
                            .is_none(),
                        "containment at {}",
                        fmt_index(idx)
                    );
                }
            }
        }
    }
}

//! Exact symbolic sets of ordinals below `w^w`.
//!
//! Every club in this crate normalizes to a [`CanonSet`]: a finite, ordered,
//! range-disjoint list of parts, each of which is a single ordinal, a full
//! interval `[lo, hi)`, or an omega-stream `{ start + w^exp * k : k < w }`.
//! All point queries (membership, min-above, max-below, accumulation
//! points), the order-type arithmetic behind order-isomorphic copies, and
//! set equality below a bound are decided exactly on this normal form.

use std::fmt;

use crate::ordinal::Ordinal;

/// One component of a canonical set.
#[derive(Clone, PartialEq, Eq)]
pub enum Part {
    /// A single ordinal.
    Pt(Ordinal),
    /// Every ordinal in `[lo, hi)`; canonical parts have at least two
    /// elements (singletons collapse to `Pt`).
    Seg { lo: Ordinal, hi: Ordinal },
    /// `{ start + w^exp * k : k < w }` with `exp >= 1`; order type `w`.
    Str { start: Ordinal, exp: u32 },
}

impl Part {
    fn min(&self) -> Ordinal {
        match self {
            Part::Pt(p) => p.clone(),
            Part::Seg { lo, .. } => lo.clone(),
            Part::Str { start, .. } => start.clone(),
        }
    }

    /// Strict supremum of the part.
    fn ssup(&self) -> Ordinal {
        match self {
            Part::Pt(p) => p.succ(),
            Part::Seg { hi, .. } => hi.clone(),
            Part::Str { start, exp } => start.add(&Ordinal::w_pow(exp + 1)),
        }
    }

    /// Supremum of the part (equals `ssup` for parts without a maximum).
    fn sup(&self) -> Ordinal {
        match self {
            Part::Pt(p) => p.clone(),
            Part::Seg { hi, .. } => hi.pred().unwrap_or_else(|| hi.clone()),
            Part::Str { start, exp } => start.add(&Ordinal::w_pow(exp + 1)),
        }
    }

    fn otp(&self) -> Ordinal {
        match self {
            Part::Pt(_) => Ordinal::nat(1),
            Part::Seg { lo, hi } => lo.left_sub(hi).expect("segment bounds ordered"),
            Part::Str { .. } => Ordinal::omega(),
        }
    }

    fn contains(&self, x: &Ordinal) -> bool {
        match self {
            Part::Pt(p) => p == x,
            Part::Seg { lo, hi } => lo <= x && x < hi,
            Part::Str { start, exp } => match start.left_sub(x) {
                None => false,
                Some(d) => d.is_zero() || matches!(d.terms(), [(e, _)] if e == exp),
            },
        }
    }

    /// Least element `>= x` within this part.
    fn min_above(&self, x: &Ordinal) -> Option<Ordinal> {
        match self {
            Part::Pt(p) => (p >= x).then(|| p.clone()),
            Part::Seg { lo, hi } => {
                let cand = lo.max(x).clone();
                (cand < *hi).then_some(cand)
            }
            Part::Str { start, exp } => {
                let Some(d) = start.left_sub(x) else {
                    return Some(start.clone());
                };
                if d.is_zero() {
                    return Some(start.clone());
                }
                if d.degree() > *exp {
                    return None;
                }
                let k = if d.degree() < *exp {
                    1
                } else {
                    let c = d.coeff_of(*exp);
                    let exact = d.terms().len() == 1;
                    if exact {
                        c
                    } else {
                        c + 1
                    }
                };
                Some(start.add(&Ordinal::term(*exp, k)))
            }
        }
    }

    /// Largest element strictly below `x`, if this part has one there.
    /// `Unbounded` means the part has elements below `x` but no largest.
    fn max_below(&self, x: &Ordinal) -> BelowOutcome {
        match self {
            Part::Pt(p) => {
                if p < x {
                    BelowOutcome::Max(p.clone())
                } else {
                    BelowOutcome::Empty
                }
            }
            Part::Seg { lo, hi } => {
                let cap = hi.min(x);
                if cap <= lo {
                    return BelowOutcome::Empty;
                }
                match cap.pred() {
                    Some(p) => BelowOutcome::Max(p),
                    // cap is a limit: the segment is cofinal in it.
                    None => BelowOutcome::Unbounded(cap.clone()),
                }
            }
            Part::Str { start, exp } => {
                if x <= start {
                    return BelowOutcome::Empty;
                }
                let d = start.left_sub(x).expect("x > start");
                if d.degree() > *exp {
                    return BelowOutcome::Unbounded(self.sup());
                }
                if d.degree() < *exp {
                    return BelowOutcome::Max(start.clone());
                }
                let c = d.coeff_of(*exp);
                let k = if d.terms().len() == 1 { c - 1 } else { c };
                BelowOutcome::Max(start.add(&Ordinal::term(*exp, k)))
            }
        }
    }

    /// Is `x` a limit of elements of this part, i.e. `sup(part /\ x) = x > 0`?
    fn is_limit_point(&self, x: &Ordinal) -> bool {
        match self {
            Part::Pt(_) => false,
            Part::Seg { lo, hi } => lo < x && x <= hi && x.is_limit(),
            Part::Str { .. } => *x == self.sup(),
        }
    }

    /// The one accumulation point this part forces into any closed superset,
    /// when that point lies strictly above the part.
    fn closure_point(&self) -> Option<Ordinal> {
        match self {
            Part::Pt(_) => None,
            Part::Seg { hi, .. } => hi.is_limit().then(|| hi.clone()),
            Part::Str { .. } => Some(self.sup()),
        }
    }

    /// Element at local position `pos` (must be below the part's order type).
    fn element_at(&self, pos: &Ordinal) -> Ordinal {
        match self {
            Part::Pt(p) => {
                debug_assert!(pos.is_zero());
                p.clone()
            }
            Part::Seg { lo, .. } => lo.add(pos),
            Part::Str { start, exp } => {
                let k = pos.as_nat().expect("stream positions are finite");
                start.add(&Ordinal::term(*exp, k))
            }
        }
    }
}

/// Result of a strictly-below query on a part or set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BelowOutcome {
    /// No element strictly below.
    Empty,
    /// The largest element strictly below.
    Max(Ordinal),
    /// Elements approach the given supremum without a maximum.
    Unbounded(Ordinal),
}

impl fmt::Debug for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Part::Pt(p) => write!(f, "{{{p}}}"),
            Part::Seg { lo, hi } => write!(f, "[{lo},{hi})"),
            Part::Str { start, exp } => write!(f, "{{{start}+w^{exp}*k}}"),
        }
    }
}

/// A canonical finite union of parts, ordered and range-disjoint.
#[derive(Clone, PartialEq, Eq)]
pub struct CanonSet {
    parts: Vec<Part>,
}

impl fmt::Debug for CanonSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.parts).finish()
    }
}

impl CanonSet {
    pub fn empty() -> Self {
        CanonSet { parts: Vec::new() }
    }

    /// Normalizes raw parts into canonical form. Parts must be pairwise
    /// disjoint as sets; ranges are sorted and merged here.
    pub fn from_parts(parts: Vec<Part>) -> Self {
        let mut parts: Vec<Part> = parts
            .into_iter()
            .filter_map(|p| match p {
                Part::Seg { lo, hi } if hi <= lo => None,
                Part::Seg { lo, hi } if hi == lo.succ() => Some(Part::Pt(lo)),
                Part::Str { start, exp: 0 } => {
                    let hi = start.add(&Ordinal::omega());
                    Some(Part::Seg { lo: start, hi })
                }
                p => Some(p),
            })
            .collect();
        parts.sort_by_key(|p| p.min());
        parts.dedup();
        // a point already covered by a neighbouring part is redundant
        let covered: Vec<bool> = parts
            .iter()
            .enumerate()
            .map(|(i, p)| match p {
                Part::Pt(q) => parts
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != i && other.contains(q)),
                _ => false,
            })
            .collect();
        let mut keep = covered.iter();
        parts.retain(|_| !*keep.next().unwrap());
        loop {
            let (next, changed) = merge_pass(parts);
            parts = next;
            if !changed {
                break;
            }
        }
        for w in parts.windows(2) {
            debug_assert!(
                w[0].ssup() <= w[1].min(),
                "canonical parts must have disjoint ordered ranges: {w:?}"
            );
        }
        CanonSet { parts }
    }

    pub fn singleton(x: Ordinal) -> Self {
        CanonSet {
            parts: vec![Part::Pt(x)],
        }
    }

    pub fn from_sorted(points: Vec<Ordinal>) -> Self {
        Self::from_parts(points.into_iter().map(Part::Pt).collect())
    }

    /// `[0, bound)`.
    pub fn interval(bound: Ordinal) -> Self {
        Self::from_parts(vec![Part::Seg {
            lo: Ordinal::zero(),
            hi: bound,
        }])
    }

    /// The range of the canonical fundamental sequence of a limit ordinal.
    pub fn fs_range(limit: &Ordinal) -> Option<Self> {
        let (prefix, exp) = limit.fs_shape()?;
        Some(Self::from_parts(vec![Part::Str { start: prefix, exp }]))
    }

    /// Finite head together with the tail `{ tail_start + k : k < w }`.
    pub fn tailed(head: Vec<Ordinal>, tail_start: Ordinal) -> Self {
        let mut parts: Vec<Part> = head.into_iter().map(Part::Pt).collect();
        let hi = tail_start.add(&Ordinal::omega());
        parts.push(Part::Seg { lo: tail_start, hi });
        Self::from_parts(parts)
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn member(&self, x: &Ordinal) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    /// Least element `>= x`.
    pub fn min_above(&self, x: &Ordinal) -> Option<Ordinal> {
        self.parts.iter().filter_map(|p| p.min_above(x)).min()
    }

    pub fn min(&self) -> Option<Ordinal> {
        self.parts.first().map(|p| p.min())
    }

    /// Largest element strictly below `x`; ranges are ordered, so only the
    /// rightmost part reaching below `x` matters.
    pub fn max_below(&self, x: &Ordinal) -> BelowOutcome {
        for p in self.parts.iter().rev() {
            if p.min() < *x {
                return p.max_below(x);
            }
        }
        BelowOutcome::Empty
    }

    /// `sup(S /\ x)`, with 0 for the empty intersection.
    pub fn sup_below(&self, x: &Ordinal) -> Ordinal {
        match self.max_below(x) {
            BelowOutcome::Empty => Ordinal::zero(),
            BelowOutcome::Max(m) => m,
            BelowOutcome::Unbounded(s) => s,
        }
    }

    /// Is `x` a limit of elements of the set?
    pub fn is_limit_of(&self, x: &Ordinal) -> bool {
        self.parts.iter().any(|p| p.is_limit_point(x))
    }

    /// Accumulation point: member and limit of smaller members.
    pub fn is_acc_point(&self, x: &Ordinal) -> bool {
        self.member(x) && self.is_limit_of(x)
    }

    /// Strict supremum of the whole set (0 when empty).
    pub fn ssup(&self) -> Ordinal {
        self.parts.last().map_or_else(Ordinal::zero, |p| p.ssup())
    }

    pub fn sup(&self) -> Ordinal {
        self.parts.last().map_or_else(Ordinal::zero, |p| p.sup())
    }

    /// Closed below the strict supremum: every accumulation point that lies
    /// strictly below `ssup` is a member. Returns the first missing point.
    pub fn closure_defect(&self) -> Option<Ordinal> {
        for (i, p) in self.parts.iter().enumerate() {
            if i + 1 == self.parts.len() {
                break;
            }
            if let Some(cp) = p.closure_point() {
                if !self.member(&cp) {
                    return Some(cp);
                }
            }
        }
        None
    }

    /// Order type of the set.
    pub fn otp(&self) -> Ordinal {
        let mut acc = Ordinal::zero();
        for p in &self.parts {
            acc = acc.add(&p.otp());
        }
        acc
    }

    /// Element at position `pos` in the increasing enumeration.
    pub fn element_at(&self, pos: &Ordinal) -> Option<Ordinal> {
        let mut rest = pos.clone();
        for p in &self.parts {
            let o = p.otp();
            if rest < o {
                return Some(p.element_at(&rest));
            }
            rest = o.left_sub(&rest).expect("rest >= o");
        }
        None
    }

    /// Restriction to `[0, bound)`.
    pub fn clip_below(&self, bound: &Ordinal) -> CanonSet {
        let mut out = Vec::new();
        for p in &self.parts {
            match p {
                Part::Pt(q) => {
                    if q < bound {
                        out.push(Part::Pt(q.clone()));
                    }
                }
                Part::Seg { lo, hi } => out.push(Part::Seg {
                    lo: lo.clone(),
                    hi: hi.min(bound).clone(),
                }),
                Part::Str { start, exp } => {
                    if *bound >= p.ssup() {
                        out.push(p.clone());
                    } else if bound > start {
                        let d = start.left_sub(bound).expect("bound > start");
                        let count = if d.degree() < *exp {
                            1
                        } else {
                            let c = d.coeff_of(*exp);
                            if d.terms().len() == 1 {
                                c
                            } else {
                                c + 1
                            }
                        };
                        for k in 0..count {
                            out.push(Part::Pt(start.add(&Ordinal::term(*exp, k))));
                        }
                    }
                }
            }
        }
        CanonSet::from_parts(out)
    }

    /// Restriction to `[from, ...)`.
    pub fn clip_from(&self, from: &Ordinal) -> CanonSet {
        let mut out = Vec::new();
        for p in &self.parts {
            match p {
                Part::Pt(q) => {
                    if q >= from {
                        out.push(Part::Pt(q.clone()));
                    }
                }
                Part::Seg { lo, hi } => out.push(Part::Seg {
                    lo: lo.max(from).clone(),
                    hi: hi.clone(),
                }),
                Part::Str { start, exp } => {
                    if from <= start {
                        out.push(p.clone());
                    } else if *from < p.ssup() {
                        let first = p.min_above(from).expect("from below ssup");
                        out.push(Part::Str {
                            start: first,
                            exp: *exp,
                        });
                    }
                }
            }
        }
        CanonSet::from_parts(out)
    }

    /// The elements whose positions lie in `[lo, hi)`.
    pub fn slice_positions(&self, lo: &Ordinal, hi: &Ordinal) -> CanonSet {
        let mut out = Vec::new();
        let mut offset = Ordinal::zero();
        for p in &self.parts {
            let o = p.otp();
            let end = offset.add(&o);
            // local window [a, b) within this part
            let a = if *lo > offset {
                offset.left_sub(lo).expect("lo >= offset")
            } else {
                Ordinal::zero()
            };
            let b = if *hi < end {
                if *hi > offset {
                    offset.left_sub(hi).expect("hi > offset")
                } else {
                    Ordinal::zero()
                }
            } else {
                o.clone()
            };
            if a < b {
                match p {
                    Part::Pt(q) => out.push(Part::Pt(q.clone())),
                    Part::Seg { lo: s, .. } => out.push(Part::Seg {
                        lo: s.add(&a),
                        hi: s.add(&b),
                    }),
                    Part::Str { start, exp } => {
                        if b.as_nat().is_some() {
                            let ka = a.as_nat().unwrap();
                            let kb = b.as_nat().unwrap();
                            for k in ka..kb {
                                out.push(Part::Pt(start.add(&Ordinal::term(*exp, k))));
                            }
                        } else {
                            let ka = a.as_nat().expect("stream positions are finite");
                            out.push(Part::Str {
                                start: start.add(&Ordinal::term(*exp, ka)),
                                exp: *exp,
                            });
                        }
                    }
                }
            }
            offset = end;
        }
        CanonSet::from_parts(out)
    }

    /// Order-isomorphic copy: `{ base(xi) : xi in self, xi < otp(base) }`.
    pub fn copy_through(&self, base: &CanonSet) -> CanonSet {
        let cap = base.otp();
        let mut out: Vec<Part> = Vec::new();
        for part in self.clip_below(&cap).parts {
            match &part {
                Part::Pt(pos) => {
                    out.push(Part::Pt(base.element_at(pos).expect("position below otp")));
                }
                Part::Seg { lo, hi } => {
                    out.extend(base.slice_positions(lo, hi).parts);
                }
                Part::Str { start, exp } => {
                    // The positions start + w^exp * k approach a limit; all
                    // but finitely many land in a single segment of `base`.
                    let psup = part.ssup();
                    let mut offset = Ordinal::zero();
                    let mut tail_done = false;
                    for bp in &base.parts {
                        let o = bp.otp();
                        let end = offset.add(&o);
                        if end >= psup && offset < psup {
                            // positions >= offset map into bp
                            let k0 = first_index_at_or_above(start, *exp, &offset);
                            for k in 0..k0 {
                                let pos = start.add(&Ordinal::term(*exp, k));
                                out.push(Part::Pt(
                                    base.element_at(&pos).expect("position below otp"),
                                ));
                            }
                            match bp {
                                Part::Seg { lo, .. } => {
                                    let pos0 = start.add(&Ordinal::term(*exp, k0));
                                    let local = offset.left_sub(&pos0).expect("pos0 >= offset");
                                    out.push(Part::Str {
                                        start: lo.add(&local),
                                        exp: *exp,
                                    });
                                }
                                _ => unreachable!(
                                    "an omega-stream of positions can only end inside a segment"
                                ),
                            }
                            tail_done = true;
                            break;
                        }
                        offset = end;
                    }
                    assert!(tail_done, "stream positions clipped below otp(base)");
                }
            }
        }
        CanonSet::from_parts(out)
    }

    /// Least element of `self \ other` below `bound`, or `None` if
    /// `self /\ bound` is a subset of `other`.
    pub fn least_missing(&self, other: &CanonSet, bound: &Ordinal) -> Option<Ordinal> {
        self.clip_below(bound)
            .parts
            .iter()
            .filter_map(|p| least_missing_in_part(p, other))
            .min()
    }

    /// Exact decision of `self /\ bound == other /\ bound`, with the least
    /// differing ordinal as witness.
    pub fn difference_witness(&self, other: &CanonSet, bound: &Ordinal) -> Option<Ordinal> {
        let a = self.least_missing(other, bound);
        let b = other.least_missing(self, bound);
        match (a, b) {
            (None, None) => None,
            (Some(x), None) => Some(x),
            (None, Some(y)) => Some(y),
            (Some(x), Some(y)) => Some(x.min(y)),
        }
    }

    pub fn equal_below(&self, other: &CanonSet, bound: &Ordinal) -> bool {
        self.difference_witness(other, bound).is_none()
    }

    /// All elements, provided the set is finite.
    pub fn enumerate(&self) -> Option<Vec<Ordinal>> {
        let mut out = Vec::new();
        for p in &self.parts {
            match p {
                Part::Pt(q) => out.push(q.clone()),
                Part::Seg { lo, hi } => {
                    lo.left_sub(hi)?.as_nat()?;
                    let mut cur = lo.clone();
                    while cur < *hi {
                        out.push(cur.clone());
                        cur = cur.succ();
                    }
                }
                Part::Str { .. } => return None,
            }
        }
        Some(out)
    }
}

/// Least stream index `k` with `start + w^exp * k >= target`.
fn first_index_at_or_above(start: &Ordinal, exp: u32, target: &Ordinal) -> u64 {
    match start.left_sub(target) {
        None => 0,
        Some(d) if d.is_zero() => 0,
        Some(d) => {
            if d.degree() < exp {
                1
            } else {
                assert!(d.degree() == exp, "target beyond the stream's supremum");
                let c = d.coeff_of(exp);
                if d.terms().len() == 1 {
                    c
                } else {
                    c + 1
                }
            }
        }
    }
}

fn least_missing_in_part(part: &Part, other: &CanonSet) -> Option<Ordinal> {
    match part {
        Part::Pt(p) => (!other.member(p)).then(|| p.clone()),
        Part::Seg { lo, hi } => {
            // Sweep the covering parts of `other` across [lo, hi).
            let mut cursor = lo.clone();
            while cursor < *hi {
                match covering_part(other, &cursor) {
                    None => return Some(cursor),
                    Some(Part::Pt(_)) => cursor = cursor.succ(),
                    Some(Part::Seg { hi: b, .. }) => cursor = b.clone(),
                    Some(p @ Part::Str { .. }) => {
                        // A stream covers isolated points only; its
                        // elements are at least w apart, so the successor of
                        // a covered point is uncovered everywhere.
                        if !p.contains(&cursor) {
                            return Some(cursor);
                        }
                        cursor = cursor.succ();
                        if cursor < *hi {
                            debug_assert!(!other.member(&cursor));
                            return Some(cursor);
                        }
                    }
                }
            }
            None
        }
        Part::Str { start, exp } => {
            let psup = part.ssup();
            // The part of `other` whose range straddles the stream's limit.
            let host = other
                .parts
                .iter()
                .find(|bp| bp.min() < psup && bp.ssup() >= psup);
            let element = |k: u64| start.add(&Ordinal::term(*exp, k));
            match host {
                Some(Part::Seg { lo, .. }) => {
                    let k0 = first_index_at_or_above(start, *exp, lo);
                    // Tail is fully covered; check the finite prefix.
                    (0..k0).map(element).find(|e| !other.member(e))
                }
                Some(Part::Str { start: s2, exp: e2 }) => {
                    let k0 = first_index_at_or_above(start, *exp, s2);
                    let aligned = *e2 == *exp
                        && s2
                            .left_sub(&element(k0))
                            .map(|d| d.degree() <= *exp)
                            .unwrap_or(false);
                    if aligned {
                        (0..=k0).map(element).find(|e| !other.member(e))
                    } else {
                        // Misaligned: some element within the first few
                        // strides past k0 escapes the host stream.
                        (0..=k0 + 1).map(element).find(|e| !other.member(e))
                    }
                }
                Some(Part::Pt(_)) => unreachable!("a point cannot straddle a limit"),
                None => {
                    // No part straddles the stream's limit, so every part
                    // overlapping the stream ends strictly below it and only
                    // finitely many elements can be covered.
                    let horizon = other
                        .parts
                        .iter()
                        .filter(|bp| bp.min() < psup)
                        .map(|bp| bp.ssup())
                        .max();
                    let k_end = match horizon {
                        Some(h) if h > *start => first_index_at_or_above(start, *exp, &h),
                        _ => 0,
                    };
                    (0..=k_end).map(element).find(|e| !other.member(e))
                }
            }
        }
    }
}

/// The unique part of `s` whose range contains `x`, if any. Ranges are
/// pairwise disjoint, so at most one part qualifies.
fn covering_part<'a>(s: &'a CanonSet, x: &Ordinal) -> Option<&'a Part> {
    s.parts.iter().find(|p| p.min() <= *x && *x < p.ssup())
}

/// One normalization pass; reports whether anything changed.
fn merge_pass(parts: Vec<Part>) -> (Vec<Part>, bool) {
    let mut out: Vec<Part> = Vec::new();
    let mut changed = false;
    for p in parts {
        let Some(last) = out.last().cloned() else {
            out.push(p);
            continue;
        };
        match (&last, &p) {
            (Part::Pt(a), Part::Pt(b)) if b == &a.succ() => {
                out.pop();
                out.push(Part::Seg {
                    lo: a.clone(),
                    hi: b.succ(),
                });
                changed = true;
            }
            (Part::Pt(a), Part::Seg { lo, hi }) if lo == &a.succ() => {
                out.pop();
                out.push(Part::Seg {
                    lo: a.clone(),
                    hi: hi.clone(),
                });
                changed = true;
            }
            (Part::Seg { lo, hi }, Part::Pt(b)) if b == hi => {
                out.pop();
                out.push(Part::Seg {
                    lo: lo.clone(),
                    hi: b.succ(),
                });
                changed = true;
            }
            (Part::Seg { lo, hi }, Part::Seg { lo: lo2, hi: hi2 }) if lo2 == hi => {
                out.pop();
                out.push(Part::Seg {
                    lo: lo.clone(),
                    hi: hi2.clone(),
                });
                changed = true;
            }
            // A point one stride below a stream joins the stream.
            (Part::Pt(a), Part::Str { start, exp }) if *start == a.add(&Ordinal::w_pow(*exp)) => {
                out.pop();
                out.push(Part::Str {
                    start: a.clone(),
                    exp: *exp,
                });
                changed = true;
            }
            // A run ending exactly at the stream start peels the first
            // stream element into the run.
            (Part::Pt(a), Part::Str { start, exp }) if *start == a.succ() => {
                out.pop();
                out.push(Part::Seg {
                    lo: a.clone(),
                    hi: start.succ(),
                });
                out.push(Part::Str {
                    start: start.add(&Ordinal::w_pow(*exp)),
                    exp: *exp,
                });
                changed = true;
            }
            (Part::Seg { lo, hi }, Part::Str { start, exp }) if start == hi => {
                out.pop();
                out.push(Part::Seg {
                    lo: lo.clone(),
                    hi: start.succ(),
                });
                out.push(Part::Str {
                    start: start.add(&Ordinal::w_pow(*exp)),
                    exp: *exp,
                });
                changed = true;
            }
            _ => out.push(p),
        }
    }
    (out, changed)
}

//! Property tests for the ordinal arithmetic and the exact set engine.

use proptest::prelude::*;

use hwalks::canon::CanonSet;
use hwalks::club::Club;
use hwalks::group::GroupElement;
use hwalks::ordinal::{remove_at, Ordinal};

/// Ordinals below `w^4` with small coefficients.
fn arb_ordinal() -> impl Strategy<Value = Ordinal> {
    (0u64..4, 0u64..4, 0u64..4, 0u64..6).prop_map(|(a3, a2, a1, a0)| {
        Ordinal::term(3, a3)
            .add(&Ordinal::term(2, a2))
            .add(&Ordinal::term(1, a1))
            .add(&Ordinal::nat(a0))
    })
}

fn arb_club() -> impl Strategy<Value = Club> {
    prop_oneof![
        arb_ordinal().prop_map(|o| Club::interval(o.succ())),
        arb_ordinal().prop_map(|o| {
            let limit = o.add(&Ordinal::omega());
            Club::fs(limit).unwrap()
        }),
        proptest::collection::vec(arb_ordinal(), 0..6).prop_map(|v| {
            let bound = v.iter().max().map_or_else(Ordinal::omega, |m| m.succ());
            Club::finite(bound, v).unwrap()
        }),
        (
            proptest::collection::vec(arb_ordinal(), 0..4),
            arb_ordinal()
        )
            .prop_map(|(head, start)| {
                let tail_start = head
                    .iter()
                    .max()
                    .map_or_else(|| start.clone(), |m| m.succ().max(start.clone()).clone())
                    .succ();
                let bound = tail_start.add(&Ordinal::omega());
                Club::tailed(bound, head, tail_start).unwrap()
            }),
    ]
}

proptest! {
    /// Ordering is total and consistent with addition.
    #[test]
    fn ordinal_order_and_addition(a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()) {
        // totality and antisymmetry
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        // associativity of addition
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        // addition is monotone on the right
        if b < c {
            prop_assert!(a.add(&b) < a.add(&c));
        }
        // left subtraction inverts addition
        let r = a.left_sub(&a.add(&b)).unwrap();
        prop_assert_eq!(a.add(&r), a.add(&b));
    }

    /// Printing and parsing are mutually inverse on canonical forms.
    #[test]
    fn ordinal_print_parse_roundtrip(a in arb_ordinal()) {
        let printed = a.to_string();
        let reparsed: Ordinal = printed.parse().unwrap();
        prop_assert_eq!(a, reparsed);
    }

    /// Removing an inserted entry restores the tuple.
    #[test]
    fn remove_insert_identity(mut entries in proptest::collection::vec(arb_ordinal(), 1..5), x in arb_ordinal(), at in 0usize..5) {
        entries.sort();
        let at = at.min(entries.len());
        let mut inserted = entries.clone();
        inserted.insert(at, x);
        prop_assert_eq!(remove_at(&inserted, at), entries);
    }

    /// The least club element at or above a point is a member with nothing
    /// of the club in between.
    #[test]
    fn min_above_is_least(c in arb_club(), x in arb_ordinal()) {
        if let Some(m) = c.min_above(&x) {
            prop_assert!(c.member(&m));
            prop_assert!(m >= x);
            // nothing in [x, m): anything of the club at or above x is >= m
            if m > x {
                prop_assert_eq!(c.clip_below(&m).min_above(&x), None);
            }
        } else {
            prop_assert!(c.clip_from(&x).is_empty());
        }
    }

    /// Exact set equality below a bound agrees with pointwise membership
    /// at every probe ordinal below that bound.
    #[test]
    fn equal_below_matches_membership(a in arb_club(), b in arb_club(), bound in arb_ordinal(), probe in proptest::collection::vec(arb_ordinal(), 8)) {
        let equal = a.equal_below(&b, &bound);
        if equal {
            for x in &probe {
                if x < &bound {
                    prop_assert_eq!(a.member(x), b.member(x), "difference at {} below {}", x, bound);
                }
            }
        } else {
            let w = a.difference_witness(&b, &bound).unwrap();
            prop_assert!(w < bound);
            prop_assert_ne!(a.member(&w), b.member(&w));
        }
    }

    /// Clipping below a bound never keeps anything at or above it, and
    /// membership below the bound is unchanged.
    #[test]
    fn clipping(c in arb_club(), bound in arb_ordinal(), probe in proptest::collection::vec(arb_ordinal(), 8)) {
        let clipped = c.clip_below(&bound);
        prop_assert!(clipped.ssup() <= bound);
        for x in &probe {
            if x < &bound {
                prop_assert_eq!(clipped.member(x), c.member(x));
            } else {
                prop_assert!(!clipped.member(x));
            }
        }
    }

    /// The order isomorphism behind copies: element_at is strictly
    /// increasing and enumerates exactly the members.
    #[test]
    fn enumeration_is_an_order_isomorphism(c in arb_club(), i in 0u64..12, j in 0u64..12) {
        let (i, j) = (i.min(j), i.max(j));
        let at = |k: u64| c.element_at(&Ordinal::nat(k));
        if let (Some(x), Some(y)) = (at(i), at(j)) {
            prop_assert!(c.member(&x));
            if i < j {
                prop_assert!(x < y);
            }
        }
        // positions beyond the order type are absent
        prop_assert!(c.element_at(&c.otp()).is_none());
    }
}

fn arb_group_element() -> impl Strategy<Value = GroupElement> {
    proptest::collection::vec(
        (proptest::collection::vec(arb_ordinal(), 0..3), -4i64..=4),
        0..5,
    )
    .prop_map(|terms| {
        let mut g = GroupElement::zero();
        for (mut tuple, coeff) in terms {
            tuple.sort();
            g.add_term(tuple, coeff.into());
        }
        g
    })
}

proptest! {
    /// The free abelian group laws.
    #[test]
    fn group_laws(a in arb_group_element(), b in arb_group_element(), c in arb_group_element()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.add(&GroupElement::zero()), a.clone());
        prop_assert!(a.add(&a.negate()).is_zero());
        // the coefficient sum is a homomorphism
        prop_assert_eq!(a.add(&b).coeff_sum(), a.coeff_sum() + b.coeff_sum());
    }
}

/// Canonical sets built two ways compare equal exactly when their members
/// agree on a saturating probe set.
#[test]
fn canonical_equality_cross_check() {
    let sets: Vec<CanonSet> = vec![
        CanonSet::interval("w*2".parse().unwrap()),
        CanonSet::fs_range(&"w*2".parse().unwrap()).unwrap(),
        CanonSet::fs_range(&"w^2".parse().unwrap()).unwrap(),
        CanonSet::tailed(vec!["3".parse().unwrap()], "w".parse().unwrap()),
        CanonSet::from_sorted(vec!["0".parse().unwrap(), "1".parse().unwrap()]),
    ];
    // probe every CNF ordinal with coefficients below 4
    let mut probes: Vec<Ordinal> = Vec::new();
    for a in 0..4u64 {
        for b in 0..4u64 {
            for c in 0..4u64 {
                probes.push(
                    Ordinal::term(2, a)
                        .add(&Ordinal::term(1, b))
                        .add(&Ordinal::nat(c)),
                );
            }
        }
    }
    let bound: Ordinal = "w^3".parse().unwrap();
    for x in &sets {
        for y in &sets {
            let structural = x.equal_below(y, &bound);
            let pointwise = probes
                .iter()
                .filter(|p| **p < bound)
                .all(|p| x.member(p) == y.member(p));
            assert_eq!(structural, pointwise, "{x:?} vs {y:?}");
        }
    }
}

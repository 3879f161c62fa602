//! Walk characteristics: the signed node count, its free-abelian
//! enrichment, the coefficient-sum projection and the last-coordinate
//! projection, plus the alternating sums over subtuple families.

use num_bigint::BigInt;

use crate::club::Club;
use crate::cseq::CSequence;
use crate::error::WalkError;
use crate::group::GroupElement;
use crate::ordinal::Ordinal;
use crate::walk::{walk, Sign, WalkTree};

/// Signed node count of the walk from `(sign, alpha, gamma)`.
pub fn rho2_n(
    seq: &CSequence,
    sign: Sign,
    alpha: &Ordinal,
    gamma: &[Ordinal],
    cap: usize,
) -> Result<i64, WalkError> {
    let tree = walk(seq, sign, alpha, gamma, cap)?;
    Ok(rho2_of_tree(&tree))
}

pub fn rho2_of_tree(tree: &WalkTree) -> i64 {
    tree.nodes().iter().map(|nd| nd.sign.as_int() as i64).sum()
}

/// The free-abelian sum over the tree of signed basis elements of each
/// label with its first two ordinal coordinates deleted.
pub fn resh_n(
    seq: &CSequence,
    alpha: &Ordinal,
    gamma: &[Ordinal],
    cap: usize,
) -> Result<GroupElement, WalkError> {
    let tree = walk(seq, Sign::Plus, alpha, gamma, cap)?;
    Ok(resh_of_tree(&tree))
}

pub fn resh_of_tree(tree: &WalkTree) -> GroupElement {
    let mut out = GroupElement::zero();
    for nd in tree.nodes() {
        out.add_term(nd.label[2..].to_vec(), BigInt::from(nd.sign.as_int()));
    }
    out
}

/// Coefficient-sum homomorphism: every basis element maps to 1.
pub fn varpi(g: &GroupElement) -> BigInt {
    g.coeff_sum()
}

/// Last-coordinate projection: a basis tuple ending in `delta` with all
/// earlier entries inside `inner` maps to the tuple without `delta`; every
/// other basis tuple maps to zero.
pub fn project_pi(g: &GroupElement, delta: &Ordinal, inner: &Club) -> GroupElement {
    let mut out = GroupElement::zero();
    for (tuple, coeff) in g.support() {
        let Some((last, front)) = tuple.split_last() else {
            continue;
        };
        if last != delta || !front.iter().all(|o| inner.member(o)) {
            continue;
        }
        out.add_term(front.to_vec(), coeff.clone());
    }
    out
}

/// The alternating sum over the length-`n` subtuples of `family` (an
/// `(n+1)`-tuple), each walked from `xi`.
pub fn family_alternating_sum(
    seq: &CSequence,
    family: &[Ordinal],
    xi: &Ordinal,
    cap: usize,
) -> Result<GroupElement, WalkError> {
    let mut total = GroupElement::zero();
    for i in 0..family.len() {
        let mut sub = family.to_vec();
        sub.remove(i);
        let r = resh_n(seq, xi, &sub, cap)?;
        total = total.add(&if i % 2 == 0 { r } else { r.negate() });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::DEFAULT_NODE_CAP;

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn ords(parts: &[&str]) -> Vec<Ordinal> {
        parts.iter().map(|s| ord(s)).collect()
    }

    #[test]
    fn degenerate_count_is_one() {
        let seq = CSequence::order_minimal(1, ord("w^2")).unwrap();
        assert_eq!(
            rho2_n(&seq, Sign::Plus, &ord("w"), &ords(&["w"]), 1000).unwrap(),
            1
        );
    }

    #[test]
    fn chain_count_matches_classical_plus_one() {
        let seq = CSequence::order_minimal(1, ord("w^2")).unwrap();
        // the classical walk w*2 -> w+3 takes one step, so the count is 2
        assert_eq!(
            rho2_n(&seq, Sign::Plus, &ord("w+3"), &ords(&["w*2"]), 1000).unwrap(),
            2
        );
    }

    #[test]
    fn signed_count_on_the_three_node_tree() {
        let seq = CSequence::maximal(2, ord("w^2")).unwrap();
        assert_eq!(
            rho2_n(&seq, Sign::Plus, &ord("w"), &ords(&["w*2", "w*3"]), 1000).unwrap(),
            1
        );
    }

    #[test]
    fn enrichment_on_the_three_node_tree() {
        let seq = CSequence::maximal(2, ord("w^2")).unwrap();
        let r = resh_n(&seq, &ord("w"), &ords(&["w*2", "w*3"]), 1000).unwrap();
        assert_eq!(r.coeff(&[ord("w*3")]), BigInt::from(2));
        assert_eq!(r.coeff(&[ord("w*2")]), BigInt::from(-1));
        assert_eq!(r.support_len(), 2);
        assert_eq!(r.to_string(), "-1[w*2] +2[w*3]");
    }

    #[test]
    fn one_dimensional_enrichment_is_the_count_on_the_empty_tuple() {
        let seq = CSequence::order_minimal(1, ord("w^2")).unwrap();
        for (a, g) in [("w+3", "w*2"), ("3", "w"), ("5", "w*3+1")] {
            let r = resh_n(&seq, &ord(a), &ords(&[g]), DEFAULT_NODE_CAP).unwrap();
            let count = rho2_n(&seq, Sign::Plus, &ord(a), &ords(&[g]), DEFAULT_NODE_CAP).unwrap();
            assert_eq!(r.coeff(&[]), BigInt::from(count));
            assert!(r.support_len() <= 1);
        }
    }

    #[test]
    fn coefficient_sum_projects_to_the_count() {
        let seq = CSequence::maximal(2, ord("w^2")).unwrap();
        for (a, g) in [
            ("w", ["w*2", "w*3"]),
            ("5", ["w", "w*4"]),
            ("w+1", ["w*2", "w*2+5"]),
        ] {
            let gamma = ords(&g);
            let r = resh_n(&seq, &ord(a), &gamma, DEFAULT_NODE_CAP).unwrap();
            let count = rho2_n(&seq, Sign::Plus, &ord(a), &gamma, DEFAULT_NODE_CAP).unwrap();
            assert_eq!(varpi(&r), BigInt::from(count));
        }
        assert_eq!(varpi(&GroupElement::zero()), BigInt::from(0));
        let mixed = GroupElement::basis(vec![ord("3")])
            .scale(2)
            .add(&GroupElement::basis(vec![ord("w")]).negate());
        assert_eq!(varpi(&mixed), BigInt::from(1));
    }

    #[test]
    fn last_coordinate_projection() {
        let delta = ord("w*4");
        let inner = Club::fs(ord("w*4")).unwrap(); // [w*3, w*4)
        let keep = GroupElement::basis(vec![ord("w*3+1"), delta.clone()]);
        assert_eq!(
            project_pi(&keep, &delta, &inner),
            GroupElement::basis(vec![ord("w*3+1")])
        );
        let wrong_last = GroupElement::basis(vec![ord("w*3+1"), ord("w*3+2")]);
        assert!(project_pi(&wrong_last, &delta, &inner).is_zero());
        let outside = GroupElement::basis(vec![ord("5"), delta.clone()]);
        assert!(project_pi(&outside, &delta, &inner).is_zero());
    }

    #[test]
    fn alternating_sum_unfolds_and_negates() {
        let seq = CSequence::order_minimal(1, ord("w^2")).unwrap();
        let family = ords(&["w*2", "w*3"]);
        let xi = ord("3");
        let direct = family_alternating_sum(&seq, &family, &xi, DEFAULT_NODE_CAP).unwrap();
        let a = resh_n(&seq, &xi, &ords(&["w*3"]), DEFAULT_NODE_CAP).unwrap();
        let b = resh_n(&seq, &xi, &ords(&["w*2"]), DEFAULT_NODE_CAP).unwrap();
        assert_eq!(direct, a.add(&b.negate()));
        assert!(direct.add(&direct.negate()).is_zero());
    }
}

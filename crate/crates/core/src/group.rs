//! Free abelian group on ordinal tuples: finitely supported integer
//! combinations of basis tuples, with exact cancellation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::ordinal::{format_ordinal_list, Ordinal};

/// A finitely supported map from ordinal tuples to nonzero integers.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GroupElement {
    support: BTreeMap<Vec<Ordinal>, BigInt>,
}

impl GroupElement {
    pub fn zero() -> Self {
        GroupElement::default()
    }

    /// The basis element of one tuple, coefficient 1.
    pub fn basis(tuple: Vec<Ordinal>) -> Self {
        let mut support = BTreeMap::new();
        support.insert(tuple, BigInt::from(1));
        GroupElement { support }
    }

    /// A signed basis element.
    pub fn signed_basis(sign: i32, tuple: Vec<Ordinal>) -> Self {
        let mut out = GroupElement::zero();
        out.add_term(tuple, BigInt::from(sign));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (&[Ordinal], &BigInt)> {
        self.support.iter().map(|(t, c)| (t.as_slice(), c))
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    pub fn coeff(&self, tuple: &[Ordinal]) -> BigInt {
        self.support.get(tuple).cloned().unwrap_or_default()
    }

    /// Adds `coeff * tuple`, pruning zeros.
    pub fn add_term(&mut self, tuple: Vec<Ordinal>, coeff: BigInt) {
        if coeff == BigInt::from(0) {
            return;
        }
        let entry = self.support.entry(tuple);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == BigInt::from(0) {
                    o.remove();
                }
            }
        }
    }

    /// Pointwise sum with exact cancellation.
    pub fn add(&self, other: &GroupElement) -> GroupElement {
        let mut out = self.clone();
        for (t, c) in &other.support {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn negate(&self) -> GroupElement {
        GroupElement {
            support: self.support.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> GroupElement {
        if k == 0 {
            return GroupElement::zero();
        }
        GroupElement {
            support: self
                .support
                .iter()
                .map(|(t, c)| (t.clone(), c * BigInt::from(k)))
                .collect(),
        }
    }

    /// Sum of all coefficients.
    pub fn coeff_sum(&self) -> BigInt {
        self.support.values().sum()
    }

    /// JSON rendering: `[{"tuple": ["w*3"], "coeff": "2"}, ...]` in
    /// canonical tuple order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.support
                .iter()
                .map(|(t, c)| {
                    serde_json::json!({
                        "tuple": t.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
                        "coeff": c.to_string(),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for GroupElement {
    /// Prints as `+2[w*3] -1[w*2]`, tuples in canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let sign = if *c >= BigInt::from(0) { "+" } else { "" };
            write!(f, "{sign}{c}[{}]", format_ordinal_list(t))?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn inverses_cancel() {
        let t = GroupElement::basis(vec![ord("w")]);
        assert!(t.add(&t.negate()).is_zero());
    }

    #[test]
    fn mixed_support() {
        let s = GroupElement::basis(vec![ord("3")]).scale(2);
        let t = GroupElement::basis(vec![ord("w")]);
        let sum = s.add(&t);
        assert_eq!(sum.support_len(), 2);
        assert_eq!(sum.coeff(&[ord("3")]), BigInt::from(2));
        assert_eq!(sum.add(&GroupElement::zero()), sum);
        assert_eq!(sum.coeff_sum(), BigInt::from(3));
        assert_eq!(sum.to_string(), "+2[3] +1[w]");
    }

    #[test]
    fn algebraic_laws() {
        let a = GroupElement::signed_basis(1, vec![ord("w"), ord("w*2")]);
        let b = GroupElement::signed_basis(-1, vec![ord("w")]);
        let c = GroupElement::basis(vec![]).scale(3);
        // associative, commutative
        assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        assert_eq!(a.add(&b), b.add(&a));
        // inverse round trip
        assert_eq!(a.add(&b).add(&b.negate()), a);
    }
}

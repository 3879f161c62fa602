//! The signed higher-walk recursion and the tree-level machinery built on
//! it: extreme nodes, lower traces, truncated walks, tree stretching,
//! boundaries, node classification, and the JSON/DOT exports.
//!
//! A walk of dimension `n` starts from a signed weakly increasing
//! `(n+1)`-tuple. Each label splits as `iota ++ tau`, where `tau` is the
//! longest final segment that is a valid sequence index; with `j` the last
//! position of `iota`, the step looks up the club at `tau` and the least
//! club element at or above the pivot entry `label[j]`. If there is none
//! the node is terminal; otherwise the found ordinal is inserted after the
//! pivot and each of the `n` children drops one of the positions
//! `1..=n+1` other than `j+1`, with the sign twisted by the parity of
//! `j` plus the dropped position.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::club::Club;
use crate::cseq::CSequence;
use crate::error::WalkError;
use crate::ordinal::{format_ordinal_list, Ordinal};

/// Hard guard on tree size; exceeding it is an error, never truncation.
pub const DEFAULT_NODE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(k: usize) -> Sign {
        if k.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip_by(self, parity: usize) -> Sign {
        if parity.is_multiple_of(2) {
            self
        } else {
            self.negate()
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_int(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == Sign::Plus { "+" } else { "-" })
    }
}

impl fmt::Debug for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One node of a walk tree.
#[derive(Clone, Debug)]
pub struct Node {
    pub addr: Vec<u8>,
    pub sign: Sign,
    /// The `(n+1)`-tuple of ordinals; entry 0 is the walk's first
    /// coordinate throughout the tree.
    pub label: Vec<Ordinal>,
    pub terminal: bool,
    /// Length of the valid final segment of the label.
    pub tau_len: usize,
    /// Position of the pivot entry (`j`), the last entry outside `tau`.
    pub pivot: usize,
    /// Indices of the `n` children, empty at terminal nodes.
    pub children: Vec<usize>,
    /// True when the truncated stopping rule (full-length `tau` whose club
    /// contains the first coordinate) ended the node.
    pub truncation_stop: bool,
}

/// A finite full n-tree of signed labels produced by the walk recursion.
#[derive(Clone)]
pub struct WalkTree {
    arity: usize,
    nodes: Vec<Node>,
    by_addr: BTreeMap<Vec<u8>, usize>,
}

/// Per-node classification flags.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NodeFlags {
    pub terminal: bool,
    pub splitting: bool,
    pub spectacled: bool,
    pub bad: bool,
    pub extreme: bool,
}

/// Shared walk machinery with memoized club lookups.
struct WalkContext<'a> {
    seq: &'a CSequence,
    clubs: HashMap<Vec<Ordinal>, Option<Club>>,
}

impl<'a> WalkContext<'a> {
    fn new(seq: &'a CSequence) -> Self {
        WalkContext {
            seq,
            clubs: HashMap::new(),
        }
    }

    /// The club at a tuple, or `None` when the tuple is not a valid index.
    fn club(&mut self, idx: &[Ordinal]) -> Option<Club> {
        if let Some(cached) = self.clubs.get(idx) {
            return cached.clone();
        }
        let computed = self.seq.club_of(idx).ok();
        self.clubs.insert(idx.to_vec(), computed.clone());
        computed
    }

    /// Splits a label into `iota ++ tau` with `tau` the longest valid final
    /// segment; returns the start position of `tau` and its club.
    fn tau_split(&mut self, label: &[Ordinal]) -> (usize, Club) {
        let len = label.len();
        let mut split = len; // empty tau
        while split > 1 {
            let cand = split - 1;
            if len - cand > self.seq.n() {
                break;
            }
            if cand + 1 < len && label[cand] >= label[cand + 1] {
                break;
            }
            if self.club(&label[cand..]).is_none() {
                break;
            }
            split = cand;
        }
        let club = self
            .club(&label[split..])
            .expect("validity established during the scan");
        (split, club)
    }
}

/// Decomposition of a tuple into its longest valid final segment and the
/// remainder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauIota {
    pub iota: Vec<Ordinal>,
    pub tau: Vec<Ordinal>,
    /// Last position of `iota`.
    pub j: usize,
}

/// Splits `tuple` into the remainder and the longest valid-index final
/// segment. The tuple must be longer than the sequence dimension, so the
/// remainder is never empty.
pub fn tau_iota(seq: &CSequence, tuple: &[Ordinal]) -> TauIota {
    let mut ctx = WalkContext::new(seq);
    let (split, _) = ctx.tau_split(tuple);
    TauIota {
        iota: tuple[..split].to_vec(),
        tau: tuple[split..].to_vec(),
        j: split - 1,
    }
}

fn validate_input(seq: &CSequence, alpha: &Ordinal, gamma: &[Ordinal]) -> Result<(), WalkError> {
    let shown = || format!("({alpha},{})", format_ordinal_list(gamma));
    if gamma.len() != seq.n() {
        return Err(WalkError::MalformedInput(
            shown(),
            format!("expected {} trailing entries, got {}", seq.n(), gamma.len()),
        ));
    }
    let bound = seq.bound();
    let mut prev = alpha;
    for g in gamma {
        if prev > g {
            return Err(WalkError::MalformedInput(
                shown(),
                "entries must be weakly increasing".into(),
            ));
        }
        prev = g;
    }
    if let Some(last) = gamma.last().or(Some(alpha)) {
        if *last >= bound {
            return Err(WalkError::MalformedInput(
                shown(),
                format!("entries must lie below the universe bound {bound}"),
            ));
        }
    }
    Ok(())
}

/// The full walk from a signed tuple.
pub fn walk(
    seq: &CSequence,
    sign: Sign,
    alpha: &Ordinal,
    gamma: &[Ordinal],
    cap: usize,
) -> Result<WalkTree, WalkError> {
    validate_input(seq, alpha, gamma)?;
    let mut label = Vec::with_capacity(gamma.len() + 1);
    label.push(alpha.clone());
    label.extend_from_slice(gamma);
    build_tree(seq, sign, label, cap, false)
}

/// The truncated walk: identical recursion, additionally terminal at any
/// node whose valid final segment covers all but the first coordinate with
/// that coordinate a member of the segment's club.
pub fn truncated_walk(
    seq: &CSequence,
    alpha: &Ordinal,
    gamma: &[Ordinal],
    cap: usize,
) -> Result<WalkTree, WalkError> {
    let m = gamma.len();
    let seq_m = seq.truncate(m)?;
    validate_input(&seq_m, alpha, gamma)?;
    let mut label = Vec::with_capacity(m + 1);
    label.push(alpha.clone());
    label.extend_from_slice(gamma);
    build_tree(&seq_m, Sign::Plus, label, cap, true)
}

fn build_tree(
    seq: &CSequence,
    sign: Sign,
    root_label: Vec<Ordinal>,
    cap: usize,
    truncated: bool,
) -> Result<WalkTree, WalkError> {
    let n = seq.n();
    let mut ctx = WalkContext::new(seq);
    let mut nodes: Vec<Node> = Vec::new();
    nodes.push(Node {
        addr: Vec::new(),
        sign,
        label: root_label,
        terminal: false,
        tau_len: 0,
        pivot: 0,
        children: Vec::new(),
        truncation_stop: false,
    });
    let mut queue = 0usize;
    while queue < nodes.len() {
        let (split, club) = ctx.tau_split(&nodes[queue].label);
        let label_len = nodes[queue].label.len();
        nodes[queue].tau_len = label_len - split;
        let j = split - 1;
        nodes[queue].pivot = j;
        if truncated && nodes[queue].tau_len == label_len - 1 {
            let alpha = &nodes[queue].label[0];
            if club.member(alpha) {
                nodes[queue].terminal = true;
                nodes[queue].truncation_stop = true;
                queue += 1;
                continue;
            }
        }
        let pivot_entry = nodes[queue].label[j].clone();
        match club.min_above(&pivot_entry) {
            None => {
                nodes[queue].terminal = true;
            }
            Some(found) => {
                // label with the found ordinal inserted after the pivot
                let mut widened = Vec::with_capacity(label_len + 1);
                widened.extend_from_slice(&nodes[queue].label[..=j]);
                widened.push(found);
                widened.extend_from_slice(&nodes[queue].label[j + 1..]);
                let parent_sign = nodes[queue].sign;
                let parent_addr = nodes[queue].addr.clone();
                let mut children = Vec::with_capacity(n);
                for (i, drop_pos) in (1..=n + 1).filter(|&p| p != j + 1).enumerate() {
                    let mut child_label = widened.clone();
                    child_label.remove(drop_pos);
                    let mut child_addr = parent_addr.clone();
                    child_addr.push(i as u8);
                    children.push(nodes.len());
                    nodes.push(Node {
                        addr: child_addr,
                        sign: parent_sign.flip_by(j + drop_pos),
                        label: child_label,
                        terminal: false,
                        tau_len: 0,
                        pivot: 0,
                        children: Vec::new(),
                        truncation_stop: false,
                    });
                    if nodes.len() > cap {
                        return Err(WalkError::CapExceeded(cap));
                    }
                }
                nodes[queue].children = children;
            }
        }
        queue += 1;
    }
    let by_addr = nodes
        .iter()
        .enumerate()
        .map(|(i, nd)| (nd.addr.clone(), i))
        .collect();
    Ok(WalkTree {
        arity: n,
        nodes,
        by_addr,
    })
}

impl WalkTree {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    pub fn node_at(&self, addr: &[u8]) -> Option<&Node> {
        self.by_addr.get(addr).map(|&i| &self.nodes[i])
    }

    pub fn contains(&self, addr: &[u8]) -> bool {
        self.by_addr.contains_key(addr)
    }

    /// Indices of the ancestors of a node, root first, the node last.
    pub fn chain_to(&self, idx: usize) -> Vec<usize> {
        let addr = &self.nodes[idx].addr;
        (0..=addr.len()).map(|k| self.by_addr[&addr[..k]]).collect()
    }

    /// Node indices of the subtree rooted at `idx`, preorder.
    pub fn subtree(&self, idx: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![idx];
        while let Some(i) = stack.pop() {
            out.push(i);
            stack.extend(self.nodes[i].children.iter().rev());
        }
        out
    }

    /// Addresses of extreme nodes: those whose valid final segment has the
    /// maximal length.
    pub fn extreme_set(&self) -> Vec<Vec<u8>> {
        self.nodes
            .iter()
            .filter(|nd| nd.tau_len == self.arity)
            .map(|nd| nd.addr.clone())
            .collect()
    }

    /// Lower traces for every node: the maximum over ancestors-or-self
    /// that are extreme of `sup(alpha /\ club at the label's tail)`, with 0
    /// for the empty maximum. Indexed like `nodes`.
    pub fn lower_traces(&self, seq: &CSequence) -> Vec<Ordinal> {
        let alpha = &self.nodes[0].label[0];
        let mut out = vec![Ordinal::zero(); self.nodes.len()];
        let mut ctx = WalkContext::new(seq);
        for i in 0..self.nodes.len() {
            let parent_val = if self.nodes[i].addr.is_empty() {
                Ordinal::zero()
            } else {
                let mut parent_addr = self.nodes[i].addr.clone();
                parent_addr.pop();
                out[self.by_addr[&parent_addr]].clone()
            };
            let own = if self.nodes[i].tau_len == self.arity {
                let tail = &self.nodes[i].label[1..];
                match ctx.club(tail) {
                    Some(club) => club.sup_below(alpha),
                    None => Ordinal::zero(),
                }
            } else {
                Ordinal::zero()
            };
            out[i] = parent_val.max(own);
        }
        out
    }

    /// Lower trace of one node.
    pub fn lower_trace_at(&self, seq: &CSequence, addr: &[u8]) -> Option<Ordinal> {
        let idx = *self.by_addr.get(addr)?;
        Some(self.lower_traces(seq).swap_remove(idx))
    }

    /// `max { trace(x) : trace(x) < alpha }` over the whole tree, 0 when
    /// empty; the threshold controlling where walks can be restarted lower.
    pub fn lower_trace_bound(&self, seq: &CSequence) -> Ordinal {
        let alpha = &self.nodes[0].label[0];
        self.lower_traces(seq)
            .into_iter()
            .filter(|t| t < alpha)
            .max()
            .unwrap_or_else(Ordinal::zero)
    }

    /// Terminal addresses with their signs.
    pub fn boundary(&self) -> Vec<(Vec<u8>, Sign)> {
        self.nodes
            .iter()
            .filter(|nd| nd.terminal)
            .map(|nd| (nd.addr.clone(), nd.sign))
            .collect()
    }

    /// Classification flags per node, indexed like `nodes`.
    pub fn classify(&self, seq: &CSequence) -> Vec<NodeFlags> {
        let mut ctx = WalkContext::new(seq);
        self.nodes
            .iter()
            .map(|nd| {
                let spectacled = nd.label.len() >= 2 && nd.label[0] == nd.label[1];
                let tail = &nd.label[1..];
                let bad = match ctx.club(tail) {
                    Some(club) => club.is_acc_point(&nd.label[0]),
                    None => false,
                };
                NodeFlags {
                    terminal: nd.terminal,
                    splitting: !nd.terminal,
                    spectacled,
                    bad,
                    extreme: nd.tau_len == self.arity,
                }
            })
            .collect()
    }

    /// Structural equality with label and sign agreement.
    pub fn same_as(&self, other: &WalkTree) -> bool {
        self.arity == other.arity
            && self.nodes.len() == other.nodes.len()
            && self.nodes.iter().all(|nd| {
                other.node_at(&nd.addr).is_some_and(|o| {
                    o.sign == nd.sign && o.label == nd.label && o.terminal == nd.terminal
                })
            })
    }

    /// JSON export of the whole tree.
    pub fn to_json(&self, seq: &CSequence) -> serde_json::Value {
        let flags = self.classify(seq);
        serde_json::json!({
            "arity": self.arity,
            "root_sign": self.nodes[0].sign.to_string(),
            "root": self.nodes[0].label.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
            "node_count": self.nodes.len(),
            "nodes": self.nodes.iter().zip(flags.iter()).map(|(nd, fl)| {
                serde_json::json!({
                    "address": nd.addr,
                    "sign": nd.sign.to_string(),
                    "label": nd.label.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
                    "terminal": nd.terminal,
                    "flags": fl,
                })
            }).collect::<Vec<_>>(),
        })
    }

    /// DOT export with sign-colored nodes; terminal nodes are boxes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph walk {\n  node [fontname=\"monospace\"];\n");
        for (i, nd) in self.nodes.iter().enumerate() {
            let color = if nd.sign == Sign::Plus {
                "lightblue"
            } else {
                "lightsalmon"
            };
            let shape = if nd.terminal { "box" } else { "ellipse" };
            out.push_str(&format!(
                "  n{i} [label=\"({},{})\", shape={shape}, style=filled, fillcolor={color}];\n",
                nd.sign,
                format_ordinal_list(&nd.label),
            ));
        }
        for (i, nd) in self.nodes.iter().enumerate() {
            for &c in &nd.children {
                out.push_str(&format!("  n{i} -> n{c};\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Debug for WalkTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "walk tree, arity {}, {} nodes",
            self.arity,
            self.nodes.len()
        )?;
        for nd in &self.nodes {
            writeln!(
                f,
                "{:indent$}{:?} ({},{}){}",
                "",
                nd.addr,
                nd.sign,
                format_ordinal_list(&nd.label),
                if nd.terminal { " x" } else { "" },
                indent = nd.addr.len() * 2
            )?;
        }
        Ok(())
    }
}

/// Indented plain-text rendering of the signed labels.
pub fn render_text(tree: &WalkTree) -> String {
    let mut out = String::new();
    for nd in tree.nodes() {
        out.push_str(&format!(
            "{:indent$}({},{}){}\n",
            "",
            nd.sign,
            format_ordinal_list(&nd.label),
            if nd.terminal { "  [terminal]" } else { "" },
            indent = nd.addr.len() * 2
        ));
    }
    out
}

/// A stretched tree: the image of a lower-dimensional full tree inside a
/// higher arity, with fresh terminal children padding each splitting node.
#[derive(Clone, Debug)]
pub struct StretchedTree {
    pub arity: usize,
    /// address -> (terminal, source node index when the address is the
    /// image of a source node)
    pub nodes: BTreeMap<Vec<u8>, (bool, Option<usize>)>,
}

/// Shifts an address from arity `m` into arity `n` by adding `n - m` to
/// every digit.
pub fn stretch_addr(addr: &[u8], m: usize, n: usize) -> Vec<u8> {
    addr.iter().map(|&d| d + (n - m) as u8).collect()
}

/// Stretches a full `m`-tree into a full `n`-tree: images keep their
/// terminal status, and below each splitting image the children with
/// digits below `n - m` are fresh terminal nodes.
pub fn stretch_tree(tree: &WalkTree, n: usize) -> StretchedTree {
    let m = tree.arity();
    assert!(n > m, "stretching requires a strictly higher arity");
    let mut nodes = BTreeMap::new();
    for (i, nd) in tree.nodes().iter().enumerate() {
        let image = stretch_addr(&nd.addr, m, n);
        if !nd.terminal {
            for fresh in 0..(n - m) as u8 {
                let mut pad = image.clone();
                pad.push(fresh);
                nodes.insert(pad, (true, None));
            }
        }
        nodes.insert(image, (nd.terminal, Some(i)));
    }
    StretchedTree { arity: n, nodes }
}

/// Result of searching an opposite-sign pairing on the combined boundary
/// of the `n+1` sign-alternating walks from the subtuples of a common
/// input.
/// A terminal node named by the walk it came from and its address there.
pub type BoundarySlot = (usize, Vec<u8>);

#[derive(Clone, Debug)]
pub enum PairingOutcome {
    /// A perfect matching: pairs of (walk index, address) entries whose
    /// signed labels are exact opposites.
    Matched(Vec<(BoundarySlot, BoundarySlot)>),
    /// Certified failure: the label whose positive and negative boundary
    /// multiplicities disagree.
    Failure {
        label: Vec<Ordinal>,
        plus: usize,
        minus: usize,
    },
}

/// Walks from every length-`n` subtuple of `gamma` (an `(n+1)`-tuple) with
/// alternating root signs and searches the combined boundary for a perfect
/// opposite-sign matching. Boundary labels pair exactly when their ordinal
/// entries agree and their signs differ, so within each label class a
/// matching exists precisely when the signed counts balance; the search
/// certifies either outcome.
pub fn pair_boundaries(
    seq: &CSequence,
    alpha: &Ordinal,
    gamma: &[Ordinal],
    cap: usize,
) -> Result<PairingOutcome, WalkError> {
    if gamma.len() != seq.n() + 1 {
        return Err(WalkError::MalformedInput(
            format!("({alpha},{})", format_ordinal_list(gamma)),
            format!("expected {} trailing entries", seq.n() + 1),
        ));
    }
    let mut buckets: BTreeMap<Vec<Ordinal>, (Vec<BoundarySlot>, Vec<BoundarySlot>)> =
        BTreeMap::new();
    for i in 0..gamma.len() {
        let mut sub = gamma.to_vec();
        sub.remove(i);
        let tree = walk(seq, Sign::from_parity(i), alpha, &sub, cap)?;
        for nd in tree.nodes() {
            if !nd.terminal {
                continue;
            }
            let slot = buckets.entry(nd.label.clone()).or_default();
            match nd.sign {
                Sign::Plus => slot.0.push((i, nd.addr.clone())),
                Sign::Minus => slot.1.push((i, nd.addr.clone())),
            }
        }
    }
    let mut pairs = Vec::new();
    for (label, (plus, minus)) in buckets {
        if plus.len() != minus.len() {
            return Ok(PairingOutcome::Failure {
                label,
                plus: plus.len(),
                minus: minus.len(),
            });
        }
        pairs.extend(plus.into_iter().zip(minus));
    }
    Ok(PairingOutcome::Matched(pairs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn ords(parts: &[&str]) -> Vec<Ordinal> {
        parts.iter().map(|s| ord(s)).collect()
    }

    fn maximal2() -> CSequence {
        CSequence::maximal(2, ord("w^2")).unwrap()
    }

    fn minimal_fs() -> CSequence {
        CSequence::order_minimal(1, ord("w^2")).unwrap()
    }

    #[test]
    fn tau_iota_examples() {
        let t = tau_iota(&maximal2(), &ords(&["w", "w*2", "w*3"]));
        assert_eq!(t.iota, ords(&["w"]));
        assert_eq!(t.tau, ords(&["w*2", "w*3"]));
        assert_eq!(t.j, 0);

        let minimal2 = CSequence::order_minimal(2, ord("w^2")).unwrap();
        let t = tau_iota(&minimal2, &ords(&["3", "7", "w*2"]));
        assert_eq!(t.iota, ords(&["3", "7"]));
        assert_eq!(t.tau, ords(&["w*2"]));
        assert_eq!(t.j, 1);

        let t = tau_iota(&minimal_fs(), &ords(&["w", "w"]));
        assert_eq!(t.iota, ords(&["w"]));
        assert_eq!(t.tau, ords(&["w"]));
        assert_eq!(t.j, 0);
    }

    #[test]
    fn degenerate_walk_is_a_single_node() {
        let seq = minimal_fs();
        let tree = walk(&seq, Sign::Plus, &ord("w"), &ords(&["w"]), 1000).unwrap();
        assert_eq!(tree.len(), 1);
        assert!(tree.root().terminal);
        assert_eq!(tree.root().label, ords(&["w", "w"]));
    }

    #[test]
    fn chain_walk_matches_hand_unfolding() {
        // one-dimensional walk to w+3 through fs(w*2): two nodes
        let seq = minimal_fs();
        let tree = walk(&seq, Sign::Plus, &ord("w+3"), &ords(&["w*2"]), 1000).unwrap();
        assert_eq!(tree.len(), 2);
        let leaf = tree.node_at(&[0]).unwrap();
        assert_eq!(leaf.label, ords(&["w+3", "w+3"]));
        assert_eq!(leaf.sign, Sign::Plus);
        assert!(leaf.terminal);
    }

    #[test]
    fn two_dimensional_walk_matches_hand_unfolding() {
        let seq = maximal2();
        let tree = walk(&seq, Sign::Plus, &ord("w"), &ords(&["w*2", "w*3"]), 1000).unwrap();
        assert_eq!(tree.len(), 3);
        assert_eq!(tree.root().label, ords(&["w", "w*2", "w*3"]));
        assert!(!tree.root().terminal);
        let c0 = tree.node_at(&[0]).unwrap();
        assert_eq!(c0.label, ords(&["w", "w", "w*3"]));
        assert_eq!(c0.sign, Sign::Plus);
        assert!(c0.terminal);
        let c1 = tree.node_at(&[1]).unwrap();
        assert_eq!(c1.label, ords(&["w", "w", "w*2"]));
        assert_eq!(c1.sign, Sign::Minus);
        assert!(c1.terminal);
    }

    #[test]
    fn extreme_sets() {
        let seq = maximal2();
        let tree = walk(&seq, Sign::Plus, &ord("w"), &ords(&["w*2", "w*3"]), 1000).unwrap();
        assert_eq!(tree.extreme_set().len(), 3); // every label has full tau

        let seq1 = minimal_fs();
        let tree = walk(&seq1, Sign::Plus, &ord("w"), &ords(&["w"]), 1000).unwrap();
        assert_eq!(tree.extreme_set(), vec![Vec::<u8>::new()]);

        let minimal2 = CSequence::order_minimal(2, ord("w^2")).unwrap();
        let tree = walk(&minimal2, Sign::Plus, &ord("3"), &ords(&["7", "w*2"]), 1000).unwrap();
        // the root's tau is short; everything else is extreme
        let extreme = tree.extreme_set();
        assert!(!extreme.contains(&Vec::new()));
        assert_eq!(extreme.len(), tree.len() - 1);
        for nd in tree.nodes() {
            let ti = tau_iota(&minimal2, &nd.label);
            assert_eq!(nd.tau_len == 2, ti.tau.len() == 2);
        }
    }

    #[test]
    fn lower_traces_examples() {
        // leaf of the chain walk: sup((w+3) /\ fs(w*2)) = w+2
        let seq = minimal_fs();
        let tree = walk(&seq, Sign::Plus, &ord("w+3"), &ords(&["w*2"]), 1000).unwrap();
        let traces = tree.lower_traces(&seq);
        assert_eq!(traces[1], ord("w+2"));

        // root of the maximal two-dimensional example: sup(w /\ interval) = w
        let seq = maximal2();
        let tree = walk(&seq, Sign::Plus, &ord("w"), &ords(&["w*2", "w*3"]), 1000).unwrap();
        let traces = tree.lower_traces(&seq);
        assert_eq!(traces[0], ord("w"));

        // a tree with no extreme ancestors has trace 0 at the root
        let minimal2 = CSequence::order_minimal(2, ord("w^2")).unwrap();
        let tree = walk(&minimal2, Sign::Plus, &ord("3"), &ords(&["7", "w*2"]), 1000).unwrap();
        let traces = tree.lower_traces(&minimal2);
        assert_eq!(traces[0], ord("0"));
    }

    #[test]
    fn truncated_walk_stops_early() {
        let seq = CSequence::maximal(3, ord("w^2")).unwrap();
        let t = truncated_walk(&seq, &ord("w"), &ords(&["w*2"]), 1000).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.root().truncation_stop);
        // the truncated tree is a prefix of the full walk over the induced
        // one-dimensional sequence
        let seq1 = seq.truncate(1).unwrap();
        let full = walk(&seq1, Sign::Plus, &ord("w"), &ords(&["w*2"]), 1000).unwrap();
        assert!(full.len() > t.len());
        for nd in t.nodes() {
            let f = full.node_at(&nd.addr).unwrap();
            assert_eq!(f.label, nd.label);
        }
        // all lower traces zero gives bound zero
        let minimal2 = CSequence::order_minimal(2, ord("w^2")).unwrap();
        let t2 = truncated_walk(&minimal2, &ord("3"), &ords(&["7"]), 1000).unwrap();
        assert_eq!(
            t2.lower_trace_bound(&minimal2.truncate(1).unwrap()),
            ord("0")
        );
    }

    #[test]
    fn stretch_addresses_and_padding() {
        assert_eq!(stretch_addr(&[1, 0], 2, 4), vec![3, 2]);
        let seq = minimal_fs();
        // single node stretches to a single node
        let tree = walk(&seq, Sign::Plus, &ord("w"), &ords(&["w"]), 1000).unwrap();
        let s = stretch_tree(&tree, 3);
        assert_eq!(s.nodes.len(), 1);
        // one split with 1 child (m = 1) stretched to n = 3: root image,
        // two fresh terminals, one child image
        let tree = walk(&seq, Sign::Plus, &ord("w+3"), &ords(&["w*2"]), 1000).unwrap();
        let s = stretch_tree(&tree, 3);
        assert_eq!(s.nodes.len(), 4);
        assert_eq!(s.nodes[&vec![0u8]], (true, None));
        assert_eq!(s.nodes[&vec![1u8]], (true, None));
        assert!(s.nodes[&vec![2u8]].0);
        assert_eq!(s.nodes[&vec![2u8]].1, Some(1));
    }

    #[test]
    fn boundary_and_pairing() {
        let seq = maximal2();
        let tree = walk(&seq, Sign::Plus, &ord("w"), &ords(&["w*2", "w*3"]), 1000).unwrap();
        let b = tree.boundary();
        assert_eq!(b.len(), 2);
        assert!(b.contains(&(vec![0], Sign::Plus)));
        assert!(b.contains(&(vec![1], Sign::Minus)));

        // single terminal node has boundary {(root, +)}
        let seq1 = minimal_fs();
        let t = walk(&seq1, Sign::Plus, &ord("w"), &ords(&["w"]), 1000).unwrap();
        assert_eq!(t.boundary(), vec![(vec![], Sign::Plus)]);

        // one-dimensional pairing always succeeds
        let out = pair_boundaries(&seq1, &ord("5"), &ords(&["w", "w*2"]), 10_000).unwrap();
        match out {
            PairingOutcome::Matched(pairs) => assert!(!pairs.is_empty()),
            PairingOutcome::Failure { .. } => panic!("expected a matching"),
        }
    }

    #[test]
    fn classification() {
        let seq = maximal2();
        let tree = walk(&seq, Sign::Plus, &ord("w"), &ords(&["w*2", "w*3"]), 1000).unwrap();
        let flags = tree.classify(&seq);
        // root: bad (w accumulates in the club at <w*2,w*3>), not spectacled
        assert!(flags[0].bad);
        assert!(!flags[0].spectacled);
        // children are spectacled, not bad
        assert!(flags[1].spectacled && !flags[1].bad);
        assert!(flags[2].spectacled && !flags[2].bad);

        // order-minimal walks never meet a bad node
        let minimal2 = CSequence::order_minimal(2, ord("w^2")).unwrap();
        let tree = walk(&minimal2, Sign::Plus, &ord("3"), &ords(&["7", "w*2"]), 1000).unwrap();
        assert!(tree.classify(&minimal2).iter().all(|f| !f.bad));
    }

    #[test]
    fn entries_outside_the_domain_walk_up_through_the_domain_club() {
        // restricting a game sequence leaves a domain club with holes; an
        // input entry in a hole has no valid final segment at all, so the
        // first step inserts the least domain element above it
        let mut adversary = crate::game::SeededAdversary::new(2);
        let seq = crate::game::build_by_game(2, 40, &mut adversary, 2).unwrap();
        let domain = seq.domain();
        let limit = seq
            .transcript()
            .iter()
            .rev()
            .find(|t| t.turn.is_limit())
            .unwrap()
            .top
            .clone();
        let restricted = seq.restrict(&limit).unwrap();
        let inner = restricted.domain();
        // find a hole below the restricted bound
        let mut hole = None;
        let mut probe = inner.canon().min().unwrap();
        while probe < limit {
            if !inner.member(&probe) {
                hole = Some(probe.clone());
                break;
            }
            probe = probe.succ();
        }
        let hole = hole.expect("game histories skip adversary strides");
        assert!(domain.member(&hole));
        let tree = walk(&restricted, Sign::Plus, &hole, &[hole.clone()], 10_000).unwrap();
        assert!(tree.len() >= 2, "the walk must climb into the domain club");
        for nd in tree.nodes() {
            assert!(nd.label[0] <= nd.label[1]);
        }
    }

    #[test]
    fn walk_input_validation() {
        let seq = maximal2();
        assert!(walk(&seq, Sign::Plus, &ord("5"), &ords(&["w"]), 1000).is_err());
        assert!(walk(&seq, Sign::Plus, &ord("w"), &ords(&["w*3", "w*2"]), 1000).is_err());
        assert!(walk(&seq, Sign::Plus, &ord("w"), &ords(&["w*2", "w^2"]), 1000).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let seq = maximal2();
        let err = walk(&seq, Sign::Plus, &ord("3"), &ords(&["w*2", "w*3"]), 2);
        assert!(matches!(err, Err(WalkError::CapExceeded(2))));
    }
}

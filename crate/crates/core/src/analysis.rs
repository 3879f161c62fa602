//! The verification layer: threshold computation for end-extensions,
//! stabilization probes for the alternating-sum families, the batch
//! property suite over sampled walks, mutation generation, and the
//! unboundedness probe.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::club::Club;
use crate::cseq::{check_coherence, fmt_index, landmark_grid, CSequence};
use crate::error::{SeqError, WalkError};
use crate::group::GroupElement;
use crate::ordinal::{format_ordinal_list, Ordinal};
use crate::rng::Rng;
use crate::walk::{
    pair_boundaries, stretch_tree, truncated_walk, walk, PairingOutcome, Sign, WalkTree,
    DEFAULT_NODE_CAP,
};

/// Shared sampling configuration.
#[derive(Clone, Debug)]
pub struct SamplingPlan {
    /// Ordinals from which instances draw their entries.
    pub grid: Vec<Ordinal>,
    /// Cap on instances per property.
    pub per_lemma: usize,
    pub seed: u64,
    /// Walk node cap.
    pub cap: usize,
    /// Consecutive equal samples demanded by the stabilization verdict.
    pub min_confirm: usize,
    /// How many fundamental-sequence samples a threshold search may probe.
    pub search_budget: u64,
    /// Run the coherence precheck inside the family verifier.
    pub precheck_coherence: bool,
}

impl SamplingPlan {
    /// Entries below `w*6` (coefficients up to 5) plus the square
    /// landmarks, clipped to the sequence's universe.
    pub fn default_for(seq: &CSequence) -> SamplingPlan {
        let bound = seq.bound();
        let domain = seq.domain();
        let mut grid: Vec<Ordinal> = Vec::new();
        for b in 0..6u64 {
            for c in 0..6u64 {
                grid.push(Ordinal::term(1, b).add(&Ordinal::nat(c)));
            }
        }
        for a in 1..=3u64 {
            grid.push(Ordinal::term(2, a));
        }
        grid.retain(|o| *o < bound && domain.member(o));
        grid.sort();
        grid.dedup();
        SamplingPlan {
            grid,
            per_lemma: 300,
            seed: 0,
            cap: DEFAULT_NODE_CAP,
            min_confirm: 8,
            search_budget: 64,
            precheck_coherence: true,
        }
    }

    pub fn with_grid(mut self, grid: Vec<Ordinal>) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_per_lemma(mut self, per_lemma: usize) -> Self {
        self.per_lemma = per_lemma;
        self
    }
}

/// Walk inputs `(alpha, gamma)` with `alpha <= gamma_0` and `gamma`
/// strictly increasing, entries from the grid; a deterministic subsample
/// of the exhaustive list when it exceeds the cap.
pub fn sample_walk_inputs(
    plan: &SamplingPlan,
    len: usize,
    cap: usize,
) -> Vec<(Ordinal, Vec<Ordinal>)> {
    let grid = &plan.grid;
    let mut all = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..grid.len()).map(|i| vec![i]).collect();
    while let Some(combo) = stack.pop() {
        if combo.len() == len {
            for a in grid.iter().take(combo[0] + 1) {
                all.push((a.clone(), combo.iter().map(|&i| grid[i].clone()).collect()));
            }
            continue;
        }
        for j in combo.last().unwrap() + 1..grid.len() {
            let mut c = combo.clone();
            c.push(j);
            stack.push(c);
        }
    }
    all.sort();
    if all.len() <= cap {
        return all;
    }
    let mut rng = Rng::new(plan.seed);
    rng.distinct_sorted(all.len(), cap)
        .into_iter()
        .map(|i| all[i].clone())
        .collect()
}

/// Grid ordinals that are accumulation points of some full-length club.
pub fn x_set_on_grid(seq: &CSequence, grid: &[Ordinal]) -> Vec<Ordinal> {
    let full = seq
        .valid_indices(grid, seq.n())
        .get(seq.n())
        .cloned()
        .unwrap_or_default();
    let mut out = Vec::new();
    for alpha in grid {
        if full.iter().any(|idx| {
            seq.club_of(idx)
                .map(|c| c.is_acc_point(alpha))
                .unwrap_or(false)
        }) {
            out.push(alpha.clone());
        }
    }
    out
}

/// Least fundamental-sequence index of `alpha` whose value exceeds
/// `target` (which must lie below `alpha`).
pub fn fs_index_above(alpha: &Ordinal, target: &Ordinal) -> u64 {
    let (prefix, exp) = alpha.fs_shape().expect("limit ordinal");
    if *target < prefix {
        return 0;
    }
    let d = prefix.left_sub(target).expect("target >= prefix");
    // want prefix + w^exp * k > target, i.e. w^exp * k > d
    debug_assert!(d.degree() <= exp, "target below alpha");
    if d.degree() < exp {
        1
    } else {
        d.coeff_of(exp) + 1
    }
}

/// Threshold testimony for one walk input: above the returned ordinal the
/// walk end-extends, with per-bad-node search results recorded.
#[derive(Clone, Debug)]
pub struct Threshold {
    pub value: Ordinal,
    /// No bad nodes were present, so the value came from lower traces
    /// alone.
    pub analytic: bool,
    /// Bad-node addresses and their found thresholds.
    pub per_bad: Vec<(Vec<u8>, Ordinal)>,
}

/// Computes the end-extension threshold for the walk from `(alpha, gamma)`:
/// the maximum of every lower trace below `alpha` and, per bad node, the
/// first fundamental-sequence sample from which the substitution clauses
/// verify.
pub fn xi_star(
    seq: &CSequence,
    alpha: &Ordinal,
    gamma: &[Ordinal],
    plan: &SamplingPlan,
) -> Result<Threshold, WalkError> {
    if !alpha.is_limit() {
        return Err(WalkError::MalformedInput(
            alpha.to_string(),
            "threshold computation needs a limit first coordinate".into(),
        ));
    }
    let tree = walk(seq, Sign::Plus, alpha, gamma, plan.cap)?;
    let trace_bound = tree.lower_trace_bound(seq);
    let flags = tree.classify(seq);
    let mut per_bad = Vec::new();
    let mut value = trace_bound;
    for (i, fl) in flags.iter().enumerate() {
        if !fl.bad {
            continue;
        }
        let addr = tree.nodes()[i].addr.clone();
        let mut found = None;
        for k in 0..plan.search_budget {
            let xi = alpha.fundamental_sequence(k).expect("limit");
            if check_bad_node_clauses(seq, &tree, i, &xi, plan.cap).is_ok() {
                found = Some(xi);
                break;
            }
        }
        let Some(threshold) = found else {
            return Err(WalkError::MalformedInput(
                fmt_index(&tree.nodes()[i].label),
                format!(
                    "no substitution threshold found below {alpha} within {} samples",
                    plan.search_budget
                ),
            ));
        };
        value = value.max(threshold.clone());
        per_bad.push((addr, threshold));
    }
    Ok(Threshold {
        value,
        analytic: per_bad.is_empty(),
        per_bad,
    })
}

/// Exact check of the substitution clauses for a bad node at one `xi`:
/// ancestors keep their labels with the first coordinate dropped to `xi`,
/// spectacled strict descendants additionally move their second coordinate
/// to the club-of-`alpha` neighbour of `xi`, and non-spectacled strict
/// descendants again only move the first coordinate.
pub fn check_bad_node_clauses(
    seq: &CSequence,
    tree: &WalkTree,
    bad_idx: usize,
    xi: &Ordinal,
    cap: usize,
) -> Result<(), String> {
    let alpha = &tree.root().label[0];
    if xi >= alpha {
        return Err(format!("sample {xi} is not below {alpha}"));
    }
    let alpha_club = seq
        .club_of(std::slice::from_ref(alpha))
        .map_err(|e| e.to_string())?;
    let eta = alpha_club
        .min_above(xi)
        .ok_or_else(|| format!("the club at {alpha} has nothing at or above {xi}"))?;
    let gamma = &tree.root().label[1..];
    let xi_tree = walk(seq, tree.root().sign, xi, gamma, cap).map_err(|e| e.to_string())?;

    let chain = tree.chain_to(bad_idx);
    let below = tree.subtree(bad_idx);
    for (scope, idx) in chain
        .iter()
        .map(|&i| ("ancestor", i))
        .chain(below.iter().skip(1).map(|&i| ("descendant", i)))
    {
        let nd = &tree.nodes()[idx];
        let Some(image) = xi_tree.node_at(&nd.addr) else {
            return Err(format!(
                "{scope} {:?} missing from the walk at {xi}",
                nd.addr
            ));
        };
        let spectacled = nd.label[0] == nd.label[1];
        let mut expected = nd.label.clone();
        expected[0] = xi.clone();
        if scope == "descendant" && spectacled {
            expected[1] = eta.clone();
        }
        if image.label != expected || image.sign != nd.sign {
            return Err(format!(
                "{scope} {:?}: expected ({},{}), found ({},{})",
                nd.addr,
                nd.sign,
                format_ordinal_list(&expected),
                image.sign,
                format_ordinal_list(&image.label),
            ));
        }
    }
    Ok(())
}

/// Verdict of a stabilization probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilizationVerdict {
    StabilizedWithWitness,
    NotStabilizedWithinBudget,
}

/// Samples of a group-valued function along the fundamental sequence of a
/// limit, with the stabilization verdict.
#[derive(Clone, Debug)]
pub struct StabilizationReport {
    pub alpha: Ordinal,
    /// Analytic threshold, when one was computed rather than searched.
    pub xi_star: Option<Ordinal>,
    pub samples: Vec<(Ordinal, GroupElement)>,
    pub verdict: StabilizationVerdict,
}

impl StabilizationReport {
    pub fn stabilized(&self) -> bool {
        self.verdict == StabilizationVerdict::StabilizedWithWitness
    }

    /// The common tail value, when stabilized.
    pub fn witness(&self) -> Option<&GroupElement> {
        self.stabilized().then(|| &self.samples.last().unwrap().1)
    }
}

/// Samples `f` along the fundamental sequence of `alpha`. With a known
/// threshold, sampling starts just above it and every sample must agree;
/// without one, the samples must end in a constant run of length at least
/// `min_confirm`.
pub fn check_semi_constant<F>(
    mut f: F,
    alpha: &Ordinal,
    threshold: Option<Ordinal>,
    samples: usize,
    min_confirm: usize,
) -> Result<StabilizationReport, WalkError>
where
    F: FnMut(&Ordinal) -> Result<GroupElement, WalkError>,
{
    if !alpha.is_limit() {
        return Err(WalkError::MalformedInput(
            alpha.to_string(),
            "stabilization probes need a limit ordinal".into(),
        ));
    }
    let start = match &threshold {
        Some(t) => fs_index_above(alpha, t),
        None => 0,
    };
    let count = samples.max(min_confirm);
    let mut taken = Vec::with_capacity(count);
    for k in 0..count as u64 {
        let xi = alpha.fundamental_sequence(start + k).expect("limit");
        if xi >= *alpha {
            break;
        }
        let value = f(&xi)?;
        taken.push((xi, value));
    }
    let verdict = stabilization_verdict(&taken, threshold.is_some(), min_confirm);
    Ok(StabilizationReport {
        alpha: alpha.clone(),
        xi_star: threshold,
        samples: taken,
        verdict,
    })
}

fn stabilization_verdict(
    samples: &[(Ordinal, GroupElement)],
    analytic: bool,
    min_confirm: usize,
) -> StabilizationVerdict {
    if samples.len() < min_confirm {
        return StabilizationVerdict::NotStabilizedWithinBudget;
    }
    if analytic {
        // Every sample sits above the threshold and must agree.
        let first = &samples[0].1;
        if samples.iter().all(|(_, v)| v == first) {
            StabilizationVerdict::StabilizedWithWitness
        } else {
            StabilizationVerdict::NotStabilizedWithinBudget
        }
    } else {
        let last = &samples.last().unwrap().1;
        let tail = samples.iter().rev().take_while(|(_, v)| v == last).count();
        if tail >= min_confirm {
            StabilizationVerdict::StabilizedWithWitness
        } else {
            StabilizationVerdict::NotStabilizedWithinBudget
        }
    }
}

/// Runs the stabilization probe on the alternating sum of the subtuple
/// walks of `family` at the limit `alpha`, with the threshold taken as the
/// maximum over the member walks. An incoherent sequence is rejected up
/// front when the plan requests the precheck.
pub fn verify_family_coherence(
    seq: &CSequence,
    family: &[Ordinal],
    alpha: &Ordinal,
    plan: &SamplingPlan,
) -> Result<StabilizationReport, WalkError> {
    if family.len() != seq.n() + 1 {
        return Err(WalkError::MalformedInput(
            fmt_index(family),
            format!("expected {} entries", seq.n() + 1),
        ));
    }
    if !alpha.is_limit() || alpha > &family[0] {
        return Err(WalkError::MalformedInput(
            alpha.to_string(),
            "the probed ordinal must be a limit at most the first entry".into(),
        ));
    }
    if plan.precheck_coherence {
        let window = family.last().unwrap().succ().min(seq.bound());
        let grid = landmark_grid(&window, 3);
        let report = check_coherence(seq, &window, &grid);
        if !report.is_coherent() {
            return Err(WalkError::Seq(SeqError::BadConstruction(format!(
                "incoherent sequence rejected: {}",
                report.violations[0].describe()
            ))));
        }
    }
    let mut threshold = Ordinal::zero();
    for i in 0..family.len() {
        let mut sub = family.to_vec();
        sub.remove(i);
        let t = xi_star(seq, alpha, &sub, plan)?;
        threshold = threshold.max(t.value);
    }
    check_semi_constant(
        |xi| crate::chars::family_alternating_sum(seq, family, xi, plan.cap),
        alpha,
        Some(threshold),
        plan.min_confirm,
        plan.min_confirm,
    )
}

/// The checkable tree properties batched by the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LemmaId {
    /// A walk can be restarted at any node without changing the subtree.
    Restart,
    /// Labels of walks from the tensor domain stay in the tensor domain.
    MonotoneDomain,
    /// Above the lower traces, smaller first coordinates keep the node with
    /// the first coordinate substituted.
    LowerTraceBound,
    /// The combined boundary of the subtuple walks pairs off with opposite
    /// signs.
    BoundaryPairing,
    /// No strict descendant of a bad node is bad.
    BadImmediate,
    /// Below a spectacled node, any node with a larger second coordinate is
    /// terminal, stably so for a tail of substituted first coordinates.
    SpectacledTerminal,
    /// Bad nodes admit substitution thresholds verified clause by clause.
    BadThreshold,
    /// The whole signed tree persists above the computed threshold.
    EndExtension,
    /// Terminal non-spectacled labels survive first-coordinate substitution
    /// for a tail of samples.
    EasyNodes,
    /// Truncated low-dimensional walks stretch to the walk two dimensions
    /// up.
    Simulation,
    /// The maximal label entry equals the last input entry exactly off the
    /// final-child addresses.
    MaxEntryDichotomy,
    /// Restriction along a final coordinate slices the one-higher walk.
    DimensionReduction,
    /// Alternating subtuple sums stabilize below sampled limits.
    FamilyCoherence,
}

impl LemmaId {
    pub const ALL: [LemmaId; 13] = [
        LemmaId::Restart,
        LemmaId::MonotoneDomain,
        LemmaId::LowerTraceBound,
        LemmaId::BoundaryPairing,
        LemmaId::BadImmediate,
        LemmaId::SpectacledTerminal,
        LemmaId::BadThreshold,
        LemmaId::EndExtension,
        LemmaId::EasyNodes,
        LemmaId::Simulation,
        LemmaId::MaxEntryDichotomy,
        LemmaId::DimensionReduction,
        LemmaId::FamilyCoherence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LemmaId::Restart => "restart",
            LemmaId::MonotoneDomain => "monotone_domain",
            LemmaId::LowerTraceBound => "lower_trace_bound",
            LemmaId::BoundaryPairing => "boundary_pairing",
            LemmaId::BadImmediate => "bad_immediate",
            LemmaId::SpectacledTerminal => "spectacled_terminal",
            LemmaId::BadThreshold => "bad_threshold",
            LemmaId::EndExtension => "end_extension",
            LemmaId::EasyNodes => "easy_nodes",
            LemmaId::Simulation => "simulation",
            LemmaId::MaxEntryDichotomy => "max_entry_dichotomy",
            LemmaId::DimensionReduction => "dimension_reduction",
            LemmaId::FamilyCoherence => "family_coherence",
        }
    }

    pub fn from_name(name: &str) -> Option<LemmaId> {
        LemmaId::ALL.iter().copied().find(|l| l.name() == name)
    }
}

/// One verified instance in a suite run.
#[derive(Clone, Debug)]
pub struct LemmaInstance {
    pub lemma: LemmaId,
    pub instance: String,
    pub pass: bool,
    pub detail: Option<String>,
}

/// Aggregated suite result.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub instances: Vec<LemmaInstance>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &LemmaInstance> {
        self.instances.iter().filter(|i| !i.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.instances.iter().all(|i| i.pass)
    }

    pub fn count_for(&self, lemma: LemmaId) -> usize {
        self.instances.iter().filter(|i| i.lemma == lemma).count()
    }

    /// The line-oriented report format.
    pub fn render_lines(&self) -> String {
        let mut out = String::new();
        for i in &self.instances {
            let _ = writeln!(
                out,
                "LEMMA {} instance={} verdict={}",
                i.lemma.name(),
                i.instance,
                if i.pass { "pass" } else { "fail" }
            );
            if !i.pass {
                if let Some(d) = &i.detail {
                    for line in d.lines() {
                        let _ = writeln!(out, "  {line}");
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "total": self.instances.len(),
            "failures": self.failures().count(),
            "instances": self.instances.iter().map(|i| serde_json::json!({
                "lemma": i.lemma.name(),
                "instance": i.instance,
                "verdict": if i.pass { "pass" } else { "fail" },
                "detail": i.detail,
            })).collect::<Vec<_>>(),
        })
    }

    fn push(&mut self, lemma: LemmaId, instance: String, result: Result<(), String>) {
        self.instances.push(LemmaInstance {
            lemma,
            instance,
            pass: result.is_ok(),
            detail: result.err(),
        });
    }
}

fn fmt_input(alpha: &Ordinal, gamma: &[Ordinal]) -> String {
    let mut v = vec![alpha.clone()];
    v.extend_from_slice(gamma);
    fmt_index(&v)
}

/// Runs the selected properties over sampled instances.
pub fn run_lemma_suite(
    seq: &CSequence,
    plan: &SamplingPlan,
    lemmas: &[LemmaId],
) -> Result<SuiteReport, WalkError> {
    let mut report = SuiteReport::default();
    let inputs = sample_walk_inputs(plan, seq.n(), plan.per_lemma);
    let want = |l: LemmaId| lemmas.contains(&l);

    if want(LemmaId::Restart) {
        for (alpha, gamma) in &inputs {
            let tree = walk(seq, Sign::Plus, alpha, gamma, plan.cap)?;
            report.push(
                LemmaId::Restart,
                fmt_input(alpha, gamma),
                check_restart(seq, &tree, plan.cap),
            );
        }
    }
    if want(LemmaId::MonotoneDomain) {
        for (alpha, gamma) in &inputs {
            let tree = walk(seq, Sign::Plus, alpha, gamma, plan.cap)?;
            report.push(
                LemmaId::MonotoneDomain,
                fmt_input(alpha, gamma),
                check_monotone_domain(&tree),
            );
        }
    }
    if want(LemmaId::LowerTraceBound) {
        for (alpha, gamma) in &inputs {
            report.push(
                LemmaId::LowerTraceBound,
                fmt_input(alpha, gamma),
                check_lower_trace_bound(seq, alpha, gamma, plan),
            );
        }
    }
    if want(LemmaId::BoundaryPairing) {
        let wide = sample_walk_inputs(plan, seq.n() + 1, plan.per_lemma);
        for (alpha, gamma) in &wide {
            report.push(
                LemmaId::BoundaryPairing,
                fmt_input(alpha, gamma),
                check_pairing(seq, alpha, gamma, plan.cap),
            );
        }
    }
    if want(LemmaId::BadImmediate) {
        for (alpha, gamma) in &inputs {
            let tree = walk(seq, Sign::Plus, alpha, gamma, plan.cap)?;
            report.push(
                LemmaId::BadImmediate,
                fmt_input(alpha, gamma),
                check_bad_immediate(seq, &tree),
            );
        }
    }
    if want(LemmaId::SpectacledTerminal) {
        for (alpha, gamma) in &inputs {
            let tree = walk(seq, Sign::Plus, alpha, gamma, plan.cap)?;
            report.push(
                LemmaId::SpectacledTerminal,
                fmt_input(alpha, gamma),
                check_spectacled_terminal(seq, &tree, plan),
            );
        }
    }
    if want(LemmaId::BadThreshold) {
        for (alpha, gamma) in &inputs {
            if !alpha.is_limit() {
                continue;
            }
            report.push(
                LemmaId::BadThreshold,
                fmt_input(alpha, gamma),
                check_bad_threshold(seq, alpha, gamma, plan),
            );
        }
    }
    if want(LemmaId::EndExtension) {
        for (alpha, gamma) in &inputs {
            if !alpha.is_limit() {
                continue;
            }
            report.push(
                LemmaId::EndExtension,
                fmt_input(alpha, gamma),
                check_end_extension(seq, alpha, gamma, plan),
            );
        }
    }
    if want(LemmaId::EasyNodes) {
        for (alpha, gamma) in &inputs {
            if !alpha.is_limit() {
                continue;
            }
            let tree = walk(seq, Sign::Plus, alpha, gamma, plan.cap)?;
            report.push(
                LemmaId::EasyNodes,
                fmt_input(alpha, gamma),
                check_easy_nodes(seq, &tree, plan),
            );
        }
    }
    if want(LemmaId::Simulation) && seq.n() >= 3 {
        let m = seq.n() - 2;
        let x_set = x_set_on_grid(seq, &plan.grid);
        let low_inputs = sample_walk_inputs(plan, m, plan.per_lemma);
        for (alpha, gamma) in &low_inputs {
            if !x_set.contains(alpha) || alpha == &gamma[0] {
                continue;
            }
            report.push(
                LemmaId::Simulation,
                fmt_input(alpha, gamma),
                check_simulation(seq, alpha, gamma, plan),
            );
        }
    }
    if want(LemmaId::MaxEntryDichotomy) {
        for (alpha, gamma) in &inputs {
            // strictly increasing inputs only
            if gamma.first().is_some_and(|g| g == alpha) {
                continue;
            }
            let mut full = vec![alpha.clone()];
            full.extend_from_slice(gamma);
            report.push(
                LemmaId::MaxEntryDichotomy,
                fmt_index(&full),
                check_max_entry_dichotomy(seq, &full, plan.cap),
            );
        }
    }
    if want(LemmaId::DimensionReduction) && seq.n() >= 2 {
        for (instance, outcome) in dimension_reduction_instances(seq, plan)? {
            report.push(LemmaId::DimensionReduction, instance, outcome);
        }
    }
    if want(LemmaId::FamilyCoherence) {
        let mut relaxed = plan.clone();
        relaxed.precheck_coherence = false;
        let wide = sample_walk_inputs(plan, seq.n() + 1, plan.per_lemma);
        for (alpha, family) in &wide {
            if !alpha.is_limit() {
                continue;
            }
            let mut instance = vec![alpha.clone()];
            instance.extend_from_slice(family);
            let outcome = match verify_family_coherence(seq, family, alpha, &relaxed) {
                Err(e) => Err(e.to_string()),
                Ok(r) if r.stabilized() => Ok(()),
                Ok(r) => Err(format!(
                    "no stabilization within {} samples above {:?}: {:?}",
                    r.samples.len(),
                    r.xi_star,
                    r.samples
                        .iter()
                        .map(|(xi, v)| format!("({xi}) {v}"))
                        .collect::<Vec<_>>()
                )),
            };
            report.push(LemmaId::FamilyCoherence, fmt_index(&instance), outcome);
        }
    }
    Ok(report)
}

/// Both sides of a failed tree equality, as JSON, for the counterexample
/// dump.
fn dump_trees(seq: &CSequence, left: (&str, &WalkTree), right: (&str, &WalkTree)) -> String {
    format!(
        "{}: {}\n{}: {}",
        left.0,
        left.1.to_json(seq),
        right.0,
        right.1.to_json(seq)
    )
}

/// Every subtree must equal the fresh walk from its label.
pub fn check_restart(seq: &CSequence, tree: &WalkTree, cap: usize) -> Result<(), String> {
    for (i, nd) in tree.nodes().iter().enumerate() {
        let fresh =
            walk(seq, nd.sign, &nd.label[0], &nd.label[1..], cap).map_err(|e| e.to_string())?;
        let fail = |msg: String| {
            Err(format!(
                "{msg}\n{}",
                dump_trees(seq, ("whole tree", tree), ("fresh walk", &fresh))
            ))
        };
        let sub = tree.subtree(i);
        if sub.len() != fresh.len() {
            return fail(format!(
                "subtree at {:?} has {} nodes, fresh walk has {}",
                nd.addr,
                sub.len(),
                fresh.len()
            ));
        }
        for fnode in fresh.nodes() {
            let mut addr = nd.addr.clone();
            addr.extend_from_slice(&fnode.addr);
            let Some(here) = tree.node_at(&addr) else {
                return fail(format!("missing address {addr:?} under {:?}", nd.addr));
            };
            if here.label != fnode.label
                || here.sign != fnode.sign
                || here.terminal != fnode.terminal
            {
                return fail(format!(
                    "mismatch at {addr:?}: tree ({},{}) vs fresh ({},{})",
                    here.sign,
                    format_ordinal_list(&here.label),
                    fnode.sign,
                    format_ordinal_list(&fnode.label),
                ));
            }
        }
    }
    Ok(())
}

/// Labels stay in the tensor domain: first step weak, all later strict.
pub fn check_monotone_domain(tree: &WalkTree) -> Result<(), String> {
    for nd in tree.nodes() {
        let l = &nd.label;
        if l[0] > l[1] {
            return Err(format!(
                "label at {:?} dips below the first coordinate",
                nd.addr
            ));
        }
        for w in l[1..].windows(2) {
            if w[0] >= w[1] {
                return Err(format!(
                    "label at {:?} is not strictly increasing past the first entry",
                    nd.addr
                ));
            }
        }
    }
    Ok(())
}

/// For every universe ordinal strictly between a node's parent trace and
/// the first coordinate, the node persists with its first coordinate
/// substituted.
pub fn check_lower_trace_bound(
    seq: &CSequence,
    alpha: &Ordinal,
    gamma: &[Ordinal],
    plan: &SamplingPlan,
) -> Result<(), String> {
    let tree = walk(seq, Sign::Plus, alpha, gamma, plan.cap).map_err(|e| e.to_string())?;
    let traces = tree.lower_traces(seq);
    let mut samples: Vec<Ordinal> = plan.grid.iter().filter(|x| *x <= alpha).cloned().collect();
    samples.push(alpha.clone());
    samples.sort();
    samples.dedup();
    for xi in &samples {
        let xi_tree = walk(seq, Sign::Plus, xi, gamma, plan.cap).map_err(|e| e.to_string())?;
        for nd in tree.nodes() {
            if nd.addr.is_empty() {
                continue;
            }
            let mut parent = nd.addr.clone();
            parent.pop();
            let pidx = tree
                .nodes()
                .iter()
                .position(|p| p.addr == parent)
                .expect("parent present");
            if &traces[pidx] >= xi {
                continue;
            }
            let Some(image) = xi_tree.node_at(&nd.addr) else {
                return Err(format!(
                    "node {:?} lost at {xi} despite parent trace {}",
                    nd.addr, traces[pidx]
                ));
            };
            let mut expected = nd.label.clone();
            expected[0] = xi.clone();
            if image.label != expected || image.sign != nd.sign {
                return Err(format!(
                    "label at {:?} under {xi}: expected ({},{}), found ({},{})",
                    nd.addr,
                    nd.sign,
                    format_ordinal_list(&expected),
                    image.sign,
                    format_ordinal_list(&image.label),
                ));
            }
        }
    }
    Ok(())
}

fn check_pairing(
    seq: &CSequence,
    alpha: &Ordinal,
    gamma: &[Ordinal],
    cap: usize,
) -> Result<(), String> {
    match pair_boundaries(seq, alpha, gamma, cap).map_err(|e| e.to_string())? {
        PairingOutcome::Matched(_) => Ok(()),
        PairingOutcome::Failure { label, plus, minus } => Err(format!(
            "unbalanced boundary at label {}: {plus} positive vs {minus} negative",
            fmt_index(&label)
        )),
    }
}

fn check_bad_immediate(seq: &CSequence, tree: &WalkTree) -> Result<(), String> {
    let flags = tree.classify(seq);
    for (i, fl) in flags.iter().enumerate() {
        if !fl.bad {
            continue;
        }
        for j in tree.subtree(i).into_iter().skip(1) {
            if flags[j].bad {
                return Err(format!(
                    "bad node at {:?} has a bad descendant at {:?}",
                    tree.nodes()[i].addr,
                    tree.nodes()[j].addr
                ));
            }
        }
    }
    Ok(())
}

/// Terminality of a label, decided from the label alone.
fn label_is_terminal(seq: &CSequence, label: &[Ordinal]) -> bool {
    let ti = crate::walk::tau_iota(seq, label);
    match seq.club_of(&ti.tau) {
        Ok(club) => club.min_above(&label[ti.j]).is_none(),
        Err(_) => true,
    }
}

fn check_spectacled_terminal(
    seq: &CSequence,
    tree: &WalkTree,
    plan: &SamplingPlan,
) -> Result<(), String> {
    let flags = tree.classify(seq);
    let alpha = &tree.root().label[0];
    for (i, fl) in flags.iter().enumerate() {
        if !fl.spectacled {
            continue;
        }
        for j in tree.subtree(i).into_iter().skip(1) {
            let nd = &tree.nodes()[j];
            if nd.label[1] <= nd.label[0] {
                continue;
            }
            if !nd.terminal {
                return Err(format!(
                    "non-spectacled node {:?} below the spectacled {:?} is not terminal",
                    nd.addr,
                    tree.nodes()[i].addr
                ));
            }
            // A tail of substituted first coordinates stays terminal. Only
            // limits leave room for a tail: at a successor the club below
            // may reach right up to the predecessor.
            if !alpha.is_limit() {
                continue;
            }
            let candidates = threshold_candidates(alpha, plan);
            let mut found = None;
            for (c, cand) in candidates.iter().enumerate() {
                let mut sub = nd.label.clone();
                sub[0] = cand.clone();
                if label_is_terminal(seq, &sub) {
                    found = Some(c);
                    break;
                }
            }
            let Some(at) = found else {
                return Err(format!(
                    "no stable-terminal threshold for {:?} below {alpha}",
                    nd.addr
                ));
            };
            for cand in &candidates[at..] {
                let mut sub = nd.label.clone();
                sub[0] = cand.clone();
                if !label_is_terminal(seq, &sub) {
                    return Err(format!(
                        "label at {:?} flips back to splitting at {cand}",
                        nd.addr
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Ascending probe points below a first coordinate: its fundamental
/// sequence for limits, the predecessor for successors.
fn threshold_candidates(alpha: &Ordinal, plan: &SamplingPlan) -> Vec<Ordinal> {
    if alpha.is_limit() {
        (0..plan.search_budget)
            .map(|k| alpha.fundamental_sequence(k).expect("limit"))
            .collect()
    } else {
        alpha.pred().into_iter().collect()
    }
}

fn check_bad_threshold(
    seq: &CSequence,
    alpha: &Ordinal,
    gamma: &[Ordinal],
    plan: &SamplingPlan,
) -> Result<(), String> {
    let tree = walk(seq, Sign::Plus, alpha, gamma, plan.cap).map_err(|e| e.to_string())?;
    let flags = tree.classify(seq);
    for (i, fl) in flags.iter().enumerate() {
        if !fl.bad {
            continue;
        }
        let mut found = None;
        for k in 0..plan.search_budget {
            let xi = alpha.fundamental_sequence(k).expect("limit");
            if check_bad_node_clauses(seq, &tree, i, &xi, plan.cap).is_ok() {
                found = Some((k, xi));
                break;
            }
        }
        let Some((k, threshold)) = found else {
            return Err(format!(
                "no substitution threshold for the bad node at {:?}",
                tree.nodes()[i].addr
            ));
        };
        // certify at the threshold and the confirming samples above it
        for extra in 0..=plan.min_confirm as u64 {
            let xi = alpha.fundamental_sequence(k + extra).expect("limit");
            if xi >= *alpha {
                break;
            }
            check_bad_node_clauses(seq, &tree, i, &xi, plan.cap).map_err(|e| {
                format!("clause re-check failed above the threshold {threshold} at {xi}: {e}")
            })?;
        }
    }
    Ok(())
}

fn check_end_extension(
    seq: &CSequence,
    alpha: &Ordinal,
    gamma: &[Ordinal],
    plan: &SamplingPlan,
) -> Result<(), String> {
    let threshold = xi_star(seq, alpha, gamma, plan).map_err(|e| e.to_string())?;
    let tree = walk(seq, Sign::Plus, alpha, gamma, plan.cap).map_err(|e| e.to_string())?;
    let start = fs_index_above(alpha, &threshold.value);
    for extra in 0..plan.min_confirm as u64 {
        let xi = alpha.fundamental_sequence(start + extra).expect("limit");
        if xi >= *alpha {
            break;
        }
        let xi_tree = walk(seq, Sign::Plus, &xi, gamma, plan.cap).map_err(|e| e.to_string())?;
        for nd in tree.nodes() {
            let Some(image) = xi_tree.node_at(&nd.addr) else {
                return Err(format!(
                    "address {:?} missing at {xi} above the threshold {}",
                    nd.addr, threshold.value
                ));
            };
            if image.sign != nd.sign || image.label[2..] != nd.label[2..] {
                return Err(format!(
                    "signed basis changed at {:?} under {xi}: ({},{}) vs ({},{})",
                    nd.addr,
                    nd.sign,
                    format_ordinal_list(&nd.label[2..]),
                    image.sign,
                    format_ordinal_list(&image.label[2..]),
                ));
            }
        }
    }
    Ok(())
}

fn check_easy_nodes(seq: &CSequence, tree: &WalkTree, plan: &SamplingPlan) -> Result<(), String> {
    let alpha = &tree.root().label[0];
    let gamma = &tree.root().label[1..];
    let candidates = threshold_candidates(alpha, plan);
    for nd in tree.nodes() {
        if !nd.terminal || nd.label[0] == nd.label[1] {
            continue;
        }
        let image_ok = |cand: &Ordinal| -> Result<bool, String> {
            let xi_tree =
                walk(seq, Sign::Plus, cand, gamma, plan.cap).map_err(|e| e.to_string())?;
            Ok(xi_tree.node_at(&nd.addr).is_some_and(|img| {
                let mut expected = nd.label.clone();
                expected[0] = cand.clone();
                img.label == expected && img.sign == nd.sign
            }))
        };
        let mut found = None;
        for (c, cand) in candidates.iter().enumerate() {
            if image_ok(cand)? {
                found = Some(c);
                break;
            }
        }
        let Some(at) = found else {
            return Err(format!(
                "no substitution threshold for the terminal node at {:?}",
                nd.addr
            ));
        };
        for cand in candidates[at..].iter().take(plan.min_confirm) {
            if !image_ok(cand)? {
                return Err(format!(
                    "substituted label at {:?} does not persist at {cand}",
                    nd.addr
                ));
            }
        }
    }
    Ok(())
}

pub fn check_simulation(
    seq: &CSequence,
    alpha: &Ordinal,
    gamma: &[Ordinal],
    plan: &SamplingPlan,
) -> Result<(), String> {
    let m = gamma.len();
    if seq.n() != m + 2 {
        return Err(format!(
            "simulation compares an {m}-walk against dimension {}",
            seq.n()
        ));
    }
    let low = truncated_walk(seq, alpha, gamma, plan.cap).map_err(|e| e.to_string())?;
    let seq_m = seq.truncate(m).map_err(|e| e.to_string())?;
    let bound = {
        let traces = low.lower_traces(&seq_m);
        traces
            .into_iter()
            .filter(|t| t < alpha)
            .max()
            .unwrap_or_else(Ordinal::zero)
    };
    let alpha_club = seq
        .club_of(std::slice::from_ref(alpha))
        .map_err(|e| e.to_string())?;
    let start = fs_index_above(alpha, &bound);
    for extra in 0..plan.min_confirm as u64 {
        let xi = alpha.fundamental_sequence(start + extra).expect("limit");
        if xi >= *alpha {
            break;
        }
        let eta = alpha_club
            .min_above(&xi)
            .ok_or_else(|| format!("the club at {alpha} has nothing at or above {xi}"))?;
        let mut input = vec![eta.clone(), alpha.clone()];
        input.extend_from_slice(gamma);
        let full = walk(seq, Sign::Plus, &xi, &input, plan.cap).map_err(|e| e.to_string())?;
        let fail = |msg: String| {
            Err(format!(
                "{msg}\n{}",
                dump_trees(seq, ("full walk", &full), ("truncated low walk", &low))
            ))
        };
        let stretched = stretch_tree(&low, m + 2);
        if full.len() != stretched.nodes.len() {
            return fail(format!(
                "at {xi}: stretched tree has {} nodes, the full walk {}",
                stretched.nodes.len(),
                full.len()
            ));
        }
        for (addr, (terminal, source)) in &stretched.nodes {
            let Some(node) = full.node_at(addr) else {
                return fail(format!(
                    "address {addr:?} missing from the full walk at {xi}"
                ));
            };
            if node.terminal != *terminal {
                return fail(format!(
                    "terminality at {addr:?} differs at {xi}: stretched {terminal}, walk {}",
                    node.terminal
                ));
            }
            if let Some(si) = source {
                let lownd = &low.nodes()[*si];
                let mut expected = vec![xi.clone(), eta.clone()];
                expected.extend_from_slice(&lownd.label);
                if node.label != expected || node.sign != lownd.sign {
                    return fail(format!(
                        "label at {addr:?} under {xi}: expected ({},{}), found ({},{})",
                        lownd.sign,
                        format_ordinal_list(&expected),
                        node.sign,
                        format_ordinal_list(&node.label),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn check_max_entry_dichotomy(seq: &CSequence, full: &[Ordinal], cap: usize) -> Result<(), String> {
    let top = full.last().unwrap();
    let tree = walk(seq, Sign::Plus, &full[0], &full[1..], cap).map_err(|e| e.to_string())?;
    let last_digit = (seq.n() - 1) as u8;
    for nd in tree.nodes() {
        let max_entry = nd.label.iter().max().unwrap();
        let avoids_last = nd.addr.iter().all(|&d| d < last_digit);
        if (max_entry == top) != avoids_last {
            return Err(format!(
                "node {:?} has max entry {max_entry}, expected the dichotomy at {top}",
                nd.addr
            ));
        }
    }
    Ok(())
}

/// Instance label paired with its check outcome.
type CheckedInstance = (String, Result<(), String>);

fn dimension_reduction_instances(
    seq: &CSequence,
    plan: &SamplingPlan,
) -> Result<Vec<CheckedInstance>, WalkError> {
    let mut out = Vec::new();
    let domain = seq.domain();
    let mut rng = Rng::new(plan.seed);
    let deltas: Vec<Ordinal> = plan
        .grid
        .iter()
        .filter(|d| domain.is_acc_point(d))
        .cloned()
        .collect();
    if deltas.is_empty() {
        return Ok(out);
    }
    let per_delta = plan.per_lemma / deltas.len() + 1;
    for delta in &deltas {
        let inner = seq
            .club_of(std::slice::from_ref(delta))
            .map_err(WalkError::Seq)?;
        let members: Vec<Ordinal> = plan
            .grid
            .iter()
            .filter(|o| inner.member(o))
            .cloned()
            .collect();
        if members.len() < seq.n() {
            continue;
        }
        for _ in 0..per_delta {
            let picks = rng.distinct_sorted(members.len(), seq.n());
            let tuple: Vec<Ordinal> = picks.iter().map(|&i| members[i].clone()).collect();
            let alpha = tuple[0].clone();
            let gamma = tuple[1..].to_vec();
            let mut instance = vec![alpha.clone()];
            instance.extend_from_slice(&gamma);
            instance.push(delta.clone());
            out.push((
                fmt_index(&instance),
                check_dimension_reduction(seq, &alpha, &gamma, delta, plan),
            ));
        }
    }
    Ok(out)
}

pub fn check_dimension_reduction(
    seq: &CSequence,
    alpha: &Ordinal,
    gamma: &[Ordinal],
    delta: &Ordinal,
    plan: &SamplingPlan,
) -> Result<(), String> {
    let restricted = seq.restrict(delta).map_err(|e| e.to_string())?;
    let low = walk(&restricted, Sign::Plus, alpha, gamma, plan.cap).map_err(|e| e.to_string())?;
    let mut wide_gamma = gamma.to_vec();
    wide_gamma.push(delta.clone());
    let full = walk(seq, Sign::Plus, alpha, &wide_gamma, plan.cap).map_err(|e| e.to_string())?;
    let inner_digit = (seq.n() - 1) as u8;
    let fail = |msg: String| {
        Err(format!(
            "{msg}\n{}",
            dump_trees(seq, ("full walk", &full), ("restricted walk", &low))
        ))
    };

    // tree identity: the restricted walk is the sub-arity slice
    for nd in full.nodes() {
        let inside = nd.addr.iter().all(|&d| d < inner_digit);
        match (inside, low.node_at(&nd.addr)) {
            (true, None) => {
                return fail(format!(
                    "address {:?} of the full walk missing from the restricted walk",
                    nd.addr
                ))
            }
            (false, Some(_)) => {
                return fail(format!(
                    "address {:?} uses the final digit yet appears in the restricted walk",
                    nd.addr
                ))
            }
            (true, Some(lnd)) => {
                let mut expected = lnd.label.clone();
                expected.push(delta.clone());
                if nd.label != expected || nd.sign != lnd.sign {
                    return fail(format!(
                        "label at {:?}: restricted ({},{}) vs full ({},{})",
                        nd.addr,
                        lnd.sign,
                        format_ordinal_list(&lnd.label),
                        nd.sign,
                        format_ordinal_list(&nd.label),
                    ));
                }
            }
            (false, None) => {}
        }
    }
    for lnd in low.nodes() {
        if !full.contains(&lnd.addr) {
            return fail(format!(
                "address {:?} of the restricted walk missing from the full walk",
                lnd.addr
            ));
        }
    }
    // lower traces agree on the shared addresses
    let low_traces = low.lower_traces(&restricted);
    let full_traces = full.lower_traces(seq);
    for (i, lnd) in low.nodes().iter().enumerate() {
        let j = full
            .nodes()
            .iter()
            .position(|nd| nd.addr == lnd.addr)
            .expect("present");
        if low_traces[i] != full_traces[j] {
            return fail(format!(
                "lower trace at {:?}: restricted {} vs full {}",
                lnd.addr, low_traces[i], full_traces[j]
            ));
        }
    }
    // the enrichment projects along the final coordinate
    let inner = seq
        .club_of(std::slice::from_ref(delta))
        .map_err(|e| e.to_string())?;
    let low_resh = crate::chars::resh_of_tree(&low);
    let full_resh = crate::chars::resh_of_tree(&full);
    let projected = crate::chars::project_pi(&full_resh, delta, &inner);
    if low_resh != projected {
        return fail(format!(
            "projection mismatch: restricted {} vs projected {} (as JSON: {} vs {})",
            low_resh,
            projected,
            low_resh.to_json(),
            projected.to_json()
        ));
    }
    Ok(())
}

/// Scans pairs from `points` for a one-dimensional signed count exceeding
/// `k`; a probe, not a decision procedure.
pub fn unboundedness_probe(
    seq: &CSequence,
    points: &[Ordinal],
    k: i64,
    cap: usize,
) -> Result<Option<(Ordinal, Ordinal)>, WalkError> {
    let line = seq.truncate(1)?;
    let mut sorted = points.to_vec();
    sorted.sort();
    sorted.dedup();
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            let count = crate::chars::rho2_n(&line, Sign::Plus, a, std::slice::from_ref(b), cap)?;
            if count > k {
                return Ok(Some((a.clone(), b.clone())));
            }
        }
    }
    Ok(None)
}

/// A seeded single-club mutation of a sequence, for sensitivity testing.
/// Targets stay low enough in the grid that full-length witnesses above
/// them fit inside the scanning window.
pub fn seeded_mutation(
    seq: &CSequence,
    plan: &SamplingPlan,
    seed: u64,
) -> Result<(String, CSequence), SeqError> {
    let mut rng = Rng::new(seed);
    let by_len = seq.valid_indices(&plan.grid, seq.n());
    let limits: Vec<&Ordinal> = plan.grid.iter().filter(|o| o.is_limit()).collect();
    let headroom = limits
        .len()
        .checked_sub(seq.n() + 1)
        .map(|i| limits[i].clone());
    // prefer indices whose club is infinite; fall back to any nonempty
    let mut rich = Vec::new();
    let mut nonempty = Vec::new();
    for level in by_len.iter().skip(1) {
        for idx in level {
            if let Some(cap) = &headroom {
                if idx.iter().any(|o| o > cap) {
                    continue;
                }
            }
            let Ok(club) = seq.club_of(idx) else { continue };
            if club.is_empty() {
                continue;
            }
            if club.enumerate().is_none() {
                rich.push(idx.clone());
            } else {
                nonempty.push(idx.clone());
            }
        }
    }
    let pool = if rich.is_empty() { &nonempty } else { &rich };
    if pool.is_empty() {
        return Err(SeqError::BadConstruction(
            "no mutable index found on the grid".into(),
        ));
    }
    let target = rng.pick(pool).clone();
    let club = seq.club_of(&target)?;
    let bound = club.bound().clone();
    let ssup = club.ssup();
    let replacement = match rng.below(3) {
        // sparsify: replace by a strictly thinner cofinal club
        0 if ssup.is_limit() => {
            let fs =
                Club::fs(ssup.clone()).map_err(|e| SeqError::BadConstruction(e.to_string()))?;
            if fs == club {
                fs.clip_from(&fs.element_at(&Ordinal::nat(1)).unwrap())
            } else {
                fs
            }
        }
        // drop an initial segment
        1 if club.otp() > Ordinal::nat(1) => {
            let min = club.min_above(&Ordinal::zero()).unwrap();
            club.clip_from(&min.succ())
        }
        // collapse to a wrong singleton
        _ => {
            let min = club
                .min_above(&Ordinal::zero())
                .ok_or_else(|| SeqError::BadConstruction("empty club".into()))?;
            Club::singleton(bound.clone(), min)
        }
    };
    if replacement == club {
        return Err(SeqError::BadConstruction(
            "mutation degenerated to the original club".into(),
        ));
    }
    let description = format!(
        "mutated club at {} from {club} to {replacement}",
        fmt_index(&target)
    );
    let mutated = seq.mutate(target, replacement)?;
    Ok((description, mutated))
}

/// Whether a mutant is detected by any of the three detectors: the
/// coherence scan, the property suite on its sensitive subset, or the
/// family stabilization verifier probed around the grid's limit points.
pub fn mutant_is_caught(mutated: &CSequence, plan: &SamplingPlan) -> Result<bool, WalkError> {
    let bound = mutated.bound();
    let grid = landmark_grid(&bound, 5);
    if !check_coherence(mutated, &bound, &grid).is_coherent() {
        return Ok(true);
    }
    let small = plan.clone().with_per_lemma(60);
    let suite = run_lemma_suite(
        mutated,
        &small,
        &[
            LemmaId::BadThreshold,
            LemmaId::EndExtension,
            LemmaId::EasyNodes,
            LemmaId::SpectacledTerminal,
            LemmaId::LowerTraceBound,
        ],
    );
    match suite {
        Err(_) => return Ok(true),
        Ok(r) if !r.all_pass() => return Ok(true),
        Ok(_) => {}
    }
    // probe families around the grid's limit points
    let mut relaxed = plan.clone();
    relaxed.precheck_coherence = false;
    let limits: Vec<Ordinal> = plan.grid.iter().filter(|o| o.is_limit()).cloned().collect();
    for alpha in &limits {
        for fam_start in &limits {
            if fam_start < alpha {
                continue;
            }
            let mut family = vec![fam_start.clone()];
            for next in &limits {
                if next > family.last().unwrap() {
                    family.push(next.clone());
                }
                if family.len() == mutated.n() + 1 {
                    break;
                }
            }
            if family.len() != mutated.n() + 1 {
                continue;
            }
            match verify_family_coherence(mutated, &family, alpha, &relaxed) {
                Err(_) => return Ok(true),
                Ok(r) if !r.stabilized() => return Ok(true),
                Ok(_) => {}
            }
        }
    }
    Ok(false)
}

/// The projection invariant between the enrichment and the signed count,
/// over the plan's sampled inputs; returns the number of inputs checked.
pub fn verify_projection_identity(
    seq: &CSequence,
    plan: &SamplingPlan,
    count: usize,
) -> Result<usize, WalkError> {
    let inputs = sample_walk_inputs(plan, seq.n(), count);
    let mut checked = 0;
    for (alpha, gamma) in &inputs {
        let r = crate::chars::resh_n(seq, alpha, gamma, plan.cap)?;
        let c = crate::chars::rho2_n(seq, Sign::Plus, alpha, gamma, plan.cap)?;
        if crate::chars::varpi(&r) != BigInt::from(c) {
            return Err(WalkError::MalformedInput(
                fmt_input(alpha, gamma),
                format!(
                    "projection identity fails: {} vs {c}",
                    crate::chars::varpi(&r)
                ),
            ));
        }
        checked += 1;
    }
    Ok(checked)
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

    #[test]
    fn fs_index_above_is_tight() {
        let a = ord("w^2");
        for t in ["0", "3", "w", "w*4+9"] {
            let t = ord(t);
            let k = fs_index_above(&a, &t);
            assert!(a.fundamental_sequence(k).unwrap() > t);
            if k > 0 {
                assert!(a.fundamental_sequence(k - 1).unwrap() <= t);
            }
        }
    }

    #[test]
    fn threshold_is_analytic_without_bad_nodes() {
        let seq = CSequence::order_minimal(2, ord("w^2")).unwrap();
        let plan = SamplingPlan::default_for(&seq);
        let t = xi_star(&seq, &ord("w"), &ords(&["w*2", "w*3"]), &plan).unwrap();
        assert!(t.analytic);
    }

    #[test]
    fn threshold_with_bad_nodes_is_certified() {
        let seq = CSequence::maximal(2, ord("w^2")).unwrap();
        let plan = SamplingPlan::default_for(&seq);
        let t = xi_star(&seq, &ord("w*2"), &ords(&["w*3", "w*4"]), &plan).unwrap();
        assert!(!t.analytic);
        assert!(t.value < ord("w*2"));
        // clauses verify at the threshold and above
        let tree = walk(
            &seq,
            Sign::Plus,
            &ord("w*2"),
            &ords(&["w*3", "w*4"]),
            10_000,
        )
        .unwrap();
        let flags = tree.classify(&seq);
        let bad = flags.iter().position(|f| f.bad).unwrap();
        let k = fs_index_above(&ord("w*2"), &t.value);
        for extra in 0..4 {
            let xi = ord("w*2").fundamental_sequence(k + extra).unwrap();
            check_bad_node_clauses(&seq, &tree, bad, &xi, 10_000).unwrap();
        }
    }

    #[test]
    fn semi_constant_probe() {
        // constant function stabilizes trivially
        let r = check_semi_constant(
            |_| Ok(GroupElement::basis(vec![])),
            &ord("w*2"),
            None,
            10,
            4,
        )
        .unwrap();
        assert!(r.stabilized());
        // an injective function never stabilizes
        let r = check_semi_constant(
            |xi| Ok(GroupElement::basis(vec![xi.clone()])),
            &ord("w*2"),
            None,
            10,
            4,
        )
        .unwrap();
        assert!(!r.stabilized());
    }

    #[test]
    fn family_verifier_on_small_instances() {
        let seq = CSequence::maximal(2, ord("w^2")).unwrap();
        let mut plan = SamplingPlan::default_for(&seq);
        plan.min_confirm = 6;
        let report =
            verify_family_coherence(&seq, &ords(&["w", "w*2", "w*3"]), &ord("w"), &plan).unwrap();
        assert!(report.stabilized(), "{report:?}");

        let seq1 = CSequence::order_minimal(1, ord("w^2")).unwrap();
        let report =
            verify_family_coherence(&seq1, &ords(&["w*2", "w*3"]), &ord("w*2"), &plan).unwrap();
        assert!(report.stabilized(), "{report:?}");
    }

    #[test]
    fn family_verifier_rejects_incoherent_input() {
        let seq = CSequence::maximal(2, ord("w^2")).unwrap();
        let plan = SamplingPlan::default_for(&seq);
        // a sparsified club at a low limit is visible to the precheck
        let mutated = seq
            .mutate(
                vec![ord("w")],
                Club::fs(ord("w")).unwrap().clip_from(&ord("1")),
            )
            .unwrap();
        let out = verify_family_coherence(&mutated, &ords(&["w", "w*2", "w*3"]), &ord("w"), &plan);
        assert!(out.is_err());
        assert!(out.unwrap_err().to_string().contains("incoherent"));
    }

    #[test]
    fn suite_passes_on_the_minimal_universe() {
        let seq = CSequence::order_minimal(2, ord("w^2")).unwrap();
        let plan = SamplingPlan::default_for(&seq).with_per_lemma(24);
        let report = run_lemma_suite(
            &seq,
            &plan,
            &[
                LemmaId::Restart,
                LemmaId::MonotoneDomain,
                LemmaId::BadImmediate,
                LemmaId::BoundaryPairing,
                LemmaId::MaxEntryDichotomy,
            ],
        )
        .unwrap();
        assert!(report.all_pass(), "{}", report.render_lines());
        assert!(report.count_for(LemmaId::Restart) > 0);
    }

    #[test]
    fn suite_catches_mutations() {
        let seq = CSequence::maximal(2, ord("w^2")).unwrap();
        let plan = SamplingPlan::default_for(&seq);
        for seed in 0..5 {
            let (what, mutated) = seeded_mutation(&seq, &plan, seed).unwrap();
            assert!(
                mutant_is_caught(&mutated, &plan).unwrap(),
                "undetected mutation (seed {seed}): {what}"
            );
        }
    }

    #[test]
    fn probe_finds_long_walks() {
        let seq = CSequence::order_minimal(1, ord("w^3")).unwrap();
        let points: Vec<Ordinal> = (1..=9).map(|a| Ordinal::term(2, a)).collect();
        let hit = unboundedness_probe(&seq, &points, 0, DEFAULT_NODE_CAP).unwrap();
        assert!(hit.is_some());
        assert!(
            unboundedness_probe(&seq, &points[..1], 10, DEFAULT_NODE_CAP)
                .unwrap()
                .is_none()
        );
        // negative bound always hits with at least two points
        assert!(
            unboundedness_probe(&seq, &points[..2], -1, DEFAULT_NODE_CAP)
                .unwrap()
                .is_some()
        );
    }
}

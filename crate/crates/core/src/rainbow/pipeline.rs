//! The directed-path stages on a structured subgraph and the top-level
//! extractor.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Stage};
use crate::coloring::{Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::median_order::{compute_median_order, tournament_hamiltonian_path, EdgeStatus, PartialOrientation};
use crate::mono_embed::mono_from_dense_color_class;
use crate::proper::mono_from_constrained_set;
use crate::tree::TreeSpec;

use super::constants::{ceil_div, default_max_retries, Constants};
use super::assembly::{build_structured_subgraph, grow_anchored_rainbow_path, robust_vertices, AssemblyOutcome, PathGrowth};
use super::linking::link_fragments;
use super::structured::StructuredSubgraph;

#[derive(Clone, Debug)]
pub enum Pruned {
    Structured(StructuredSubgraph),
    Mono(Certificate),
}

/// Rogue degree of every member: cross-part edges inside `U` in rogue colors.
pub fn rogue_degrees(coloring: &EdgeColoring, ss: &StructuredSubgraph) -> Vec<usize> {
    let members = ss.members();
    let mut degree = vec![0; members.len()];
    for a in 0..members.len() {
        for b in (a + 1)..members.len() {
            if ss.is_rogue_edge(coloring, members[a], members[b]) {
                degree[a] += 1;
                degree[b] += 1;
            }
        }
    }
    degree
}

/// Removes every member whose rogue degree is at least `cap`. When more than
/// half of `U` would go, a rogue class is dense enough to host the tree.
pub fn prune_rogue_degrees(coloring: &EdgeColoring, ss: &StructuredSubgraph, tree: &TreeSpec, cap: usize) -> Pruned {
    let degree = rogue_degrees(coloring, ss);
    let removed = degree.iter().filter(|&&d| d >= cap).count();
    if 2 * removed > ss.len() {
        if let Some(cert) = mono_from_dense_color_class(coloring, tree, &ss.rogue_colors, ss.members()) {
            return Pruned::Mono(cert);
        }
    }
    if removed == 0 {
        return Pruned::Structured(ss.clone());
    }
    let mut drop = vec![false; coloring.n()];
    for (a, &v) in ss.members().iter().enumerate() {
        drop[v] = degree[a] >= cap;
    }
    Pruned::Structured(ss.restrict(|v| !drop[v]))
}

/// Result of the greedy rogue matching along the median order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingState {
    /// The order, as global vertex ids.
    pub order: Vec<usize>,
    /// `v_1..v_f`.
    pub anchors: Vec<usize>,
    /// `edges[k] = (v_{k+2}, other endpoint)`, one per anchor after the first.
    pub edges: Vec<(usize, usize)>,
    pub colors: Vec<Color>,
    /// Parts already touched.
    pub bad_parts: Vec<bool>,
    /// Number of vertices in the touched parts.
    pub bad_size: usize,
}

impl MatchingState {
    pub fn f(&self) -> usize {
        self.anchors.len()
    }

    /// Position of every member in the order (by global id; `usize::MAX`
    /// elsewhere).
    pub fn positions(&self, n: usize) -> Vec<usize> {
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    fn touch(&mut self, ss: &StructuredSubgraph, v: usize) {
        let p = ss.part_index(v).expect("member");
        if !self.bad_parts[p] {
            self.bad_parts[p] = true;
            self.bad_size += ss.parts[p].vertices.len();
        }
    }

    /// The matching in linking form: `(other endpoint, anchor)` pairs.
    pub fn link_edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(v, u)| (u, v)).collect()
    }
}

#[derive(Clone, Debug)]
pub enum MatchingOutcome {
    State(MatchingState),
    /// The anchors and matching edges alone already link to `t` edges.
    Early(Certificate),
}

/// Scans `order` (global ids of all members) and picks, at each vertex
/// outside the touched parts, a rogue edge of a new color to a vertex also
/// outside them, earliest other endpoint first.
pub fn greedy_rogue_matching(
    coloring: &EdgeColoring,
    ss: &StructuredSubgraph,
    order: &[usize],
    s: usize,
    t: usize,
    constants: &Constants,
) -> Result<MatchingOutcome> {
    if order.is_empty() {
        return Err(Error::Precondition("cannot match on an empty order".into()));
    }
    let mut ms = MatchingState {
        order: order.to_vec(),
        anchors: vec![order[0]],
        edges: Vec::new(),
        colors: Vec::new(),
        bad_parts: vec![false; ss.parts.len()],
        bad_size: 0,
    };
    ms.touch(ss, order[0]);
    let overflow = constants.overflow_factor * s * t;
    for (i, &x) in order.iter().enumerate().skip(1) {
        if ms.bad_parts[ss.part_index(x).expect("member")] {
            continue;
        }
        let partner = order.iter().enumerate().find_map(|(j, &y)| {
            if j == i || ms.bad_parts[ss.part_index(y).expect("member")] {
                return None;
            }
            let c = coloring.color(x, y);
            (ss.is_rogue_edge(coloring, x, y) && !ms.colors.contains(&c)).then_some((y, c))
        });
        let Some((y, c)) = partner else { continue };
        ms.anchors.push(x);
        ms.edges.push((x, y));
        ms.colors.push(c);
        ms.touch(ss, x);
        ms.touch(ss, y);
        if ms.bad_size >= overflow || 3 * ms.edges.len() >= t {
            let singletons: Vec<Vec<usize>> = ms.anchors.iter().map(|&v| vec![v]).collect();
            if let Ok(cert) = link_fragments(coloring, ss, t, &ms.link_edges(), &singletons) {
                if path_edges(&cert) >= t {
                    return Ok(MatchingOutcome::Early(cert));
                }
            }
        }
    }
    Ok(MatchingOutcome::State(ms))
}

fn path_edges(cert: &Certificate) -> usize {
    match cert {
        Certificate::RainbowPath { path } => path.len().saturating_sub(1),
        _ => 0,
    }
}

/// First `ℓ = 2^j ≤ f` whose anchors `v_ℓ` and `v_{2ℓ}` are separated by at
/// least `min_gap` vertices. `anchor_positions[i]` is the position of
/// `v_{i+1}`; anchors past `f` stand for the last position `order_len − 1`.
pub fn dyadic_gap_select(anchor_positions: &[usize], order_len: usize, min_gap: usize) -> Option<usize> {
    let f = anchor_positions.len();
    let pos = |i: usize| if i <= f { anchor_positions[i - 1] } else { order_len - 1 };
    let mut ell = 1;
    while ell <= f {
        let (a, b) = (pos(ell), pos(2 * ell));
        if b > a && b - a > min_gap {
            return Some(ell);
        }
        ell *= 2;
    }
    None
}

/// Paths `P_1..P_ℓ` pushed forward into the window after `v_ℓ`, plus the
/// blocks the randomized step samples from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionState {
    pub ell: usize,
    /// The window right after `v_ℓ`.
    pub s1: Vec<usize>,
    /// The block after the window.
    pub s2: Vec<usize>,
    /// Disjoint unions of whole part slices of `s2`, each of size in `[2s, 4s)`.
    pub bins: Vec<Vec<usize>>,
    pub paths: Vec<Vec<usize>>,
    pub bad_parts: Vec<bool>,
    pub bad_size: usize,
}

impl ExtensionState {
    /// The current path ends `w_1..w_ℓ`.
    pub fn ends(&self) -> Vec<usize> {
        self.paths.iter().map(|p| *p.last().expect("nonempty")).collect()
    }
}

#[derive(Clone, Debug)]
pub enum ExtendOutcome {
    Extended(ExtensionState),
    Early(Certificate),
    Failure(Certificate),
}

/// Walks each `P_i` (`i ≤ ℓ`) forward, one directed edge at a time into
/// the next `window` positions and onto untouched parts, until it ends
/// inside the window after `v_ℓ`.
pub fn extend_paths_to_window(
    coloring: &EdgeColoring,
    ss: &StructuredSubgraph,
    ms: &MatchingState,
    ell: usize,
    s: usize,
    t: usize,
    constants: &Constants,
) -> ExtendOutcome {
    let window = constants.window_factor * s * t;
    let overflow = constants.overflow_factor * s * t;
    let pos = ms.positions(coloring.n());
    let order = &ms.order;
    let start = pos[ms.anchors[ell - 1]];
    let s1_end = (start + window).min(order.len() - 1);
    let s2_end = (s1_end + constants.tail_factor * s * t).min(order.len() - 1);
    let mut bad_parts = ms.bad_parts.clone();
    let mut bad_size = ms.bad_size;
    let mut paths: Vec<Vec<usize>> = ms.anchors.iter().map(|&v| vec![v]).collect();
    for i in 0..ell {
        loop {
            let end = *paths[i].last().expect("nonempty");
            let p = pos[end];
            if p > start {
                break;
            }
            let reach = (p + window).min(order.len() - 1);
            // farthest candidate first: fewer steps, fewer parts used
            let next = (p + 1..=reach).rev().map(|q| order[q]).find(|&w| {
                !bad_parts[ss.part_index(w).expect("member")] && ss.points(end, w)
            });
            let Some(w) = next else {
                return ExtendOutcome::Failure(Certificate::failure(
                    Stage::Extend,
                    format!("no forward edge from {end} to an untouched part within {window} positions"),
                ));
            };
            paths[i].push(w);
            let part = ss.part_index(w).expect("member");
            bad_parts[part] = true;
            bad_size += ss.parts[part].vertices.len();
            if bad_size >= overflow {
                if let Ok(cert) = link_fragments(coloring, ss, t, &ms.link_edges(), &paths) {
                    if path_edges(&cert) >= t {
                        return ExtendOutcome::Early(cert);
                    }
                }
            }
        }
    }
    let s1: Vec<usize> = order[start + 1..=s1_end].to_vec();
    let s2: Vec<usize> = if s2_end > s1_end { order[s1_end + 1..=s2_end].to_vec() } else { Vec::new() };
    let bins = pack_bins(ss, &s2, constants.part_factor * s);
    ExtendOutcome::Extended(ExtensionState {
        ell,
        s1,
        s2,
        bins,
        paths: paths.into_iter().take(ell).collect(),
        bad_parts,
        bad_size,
    })
}

/// Groups `block` into part slices (in order of first appearance) and packs
/// whole slices greedily, closing a bin once it holds `min_size` vertices.
/// A final underfull bin is discarded.
pub fn pack_bins(ss: &StructuredSubgraph, block: &[usize], min_size: usize) -> Vec<Vec<usize>> {
    let mut slot = std::collections::HashMap::new();
    let mut slices: Vec<Vec<usize>> = Vec::new();
    for &v in block {
        let p = ss.part_index(v).expect("member");
        let i = *slot.entry(p).or_insert_with(|| {
            slices.push(Vec::new());
            slices.len() - 1
        });
        slices[i].push(v);
    }
    let mut bins = Vec::new();
    let mut current = Vec::new();
    for slice in slices {
        current.extend(slice);
        if current.len() >= min_size {
            bins.push(std::mem::take(&mut current));
        }
    }
    bins
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailExtension {
    /// `P_1..P_ℓ`, each extended by a directed path through its sample.
    pub paths: Vec<Vec<usize>>,
    pub added: usize,
    /// Number of attempts made, including the accepted one.
    pub attempts: usize,
}

/// Samples one vertex from each activated bin, spreads them over the paths,
/// keeps those each path end points to, breaks rogue pairs, and appends a
/// Hamiltonian path of what is left. Accepts once at least `t` vertices are
/// added in total.
#[allow(clippy::too_many_arguments)]
pub fn randomized_tail_extension(
    coloring: &EdgeColoring,
    ss: &StructuredSubgraph,
    es: &ExtensionState,
    t: usize,
    activation_denominator: usize,
    seed: u64,
    max_retries: usize,
) -> Option<TailExtension> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ends = es.ends();
    let ell = es.ell;
    for attempt in 1..=max_retries {
        let mut samples: Vec<Vec<usize>> = vec![Vec::new(); ell];
        for bin in &es.bins {
            if rng.gen_range(0..activation_denominator) != 0 {
                continue;
            }
            let x = bin[rng.gen_range(0..bin.len())];
            samples[rng.gen_range(0..ell)].push(x);
        }
        let cores: Vec<Vec<usize>> = samples
            .iter()
            .zip(&ends)
            .map(|(sample, &w)| {
                let filtered: Vec<usize> = sample
                    .iter()
                    .copied()
                    .filter(|&x| !es.bad_parts[ss.part_index(x).expect("member")] && ss.points(w, x))
                    .collect();
                break_rogue_pairs(coloring, ss, &filtered)
            })
            .collect();
        let added: usize = cores.iter().map(Vec::len).sum();
        if added < t {
            continue;
        }
        let mut paths = es.paths.clone();
        for (i, core) in cores.iter().enumerate() {
            let tournament = PartialOrientation::tournament_from_fn(core.len(), |a, b| ss.points(core[a], core[b]));
            let order = tournament_hamiltonian_path(&tournament, seed ^ attempt as u64)
                .expect("rogue pairs were broken, so the core is a tournament");
            paths[i].extend(order.into_iter().map(|k| core[k]));
        }
        return Some(TailExtension { paths, added, attempts: attempt });
    }
    None
}

/// Keeps vertices in order, dropping any vertex joined by a rogue edge to
/// one already kept.
pub fn break_rogue_pairs(coloring: &EdgeColoring, ss: &StructuredSubgraph, vertices: &[usize]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::with_capacity(vertices.len());
    for &x in vertices {
        if kept.iter().all(|&y| !matches!(ss.status(x, y), EdgeStatus::Undirected) && !ss.is_rogue_edge(coloring, x, y)) {
            kept.push(x);
        }
    }
    kept
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Opportunistic,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Strict => "strict",
            Mode::Opportunistic => "opportunistic",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtractOptions {
    pub mode: Mode,
    pub seed: u64,
    pub constants: Constants,
    /// Defaults to `64·⌈log₂(t+1)⌉`.
    pub max_retries: Option<usize>,
}

impl ExtractOptions {
    pub fn new(mode: Mode, seed: u64) -> Self {
        ExtractOptions { mode, seed, constants: Constants::default(), max_retries: None }
    }
}

/// Per-stage sizes of one extraction run. Fields are serialized in
/// declaration order; stages that did not run stay `null`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub seed: u64,
    pub mode: String,
    pub constants_hash: String,
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub robust: Option<usize>,
    pub path_edges: Option<usize>,
    pub rogue_colors: Option<usize>,
    pub structured_size: Option<usize>,
    pub parts: Option<usize>,
    pub pruned_size: Option<usize>,
    pub f: Option<usize>,
    pub ell: Option<usize>,
    pub retries: Option<usize>,
    pub outcome: String,
    pub stage: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ExtractReport {
    pub certificate: Certificate,
    pub trace: Trace,
    /// The structured subgraph, when the run got that far.
    pub structured: Option<StructuredSubgraph>,
    /// Wall time of each stage that ran, in order.
    pub timings: Vec<(&'static str, Duration)>,
}

/// A monochromatic copy of `tree` or a rainbow path with `t` edges.
pub fn extract(coloring: &EdgeColoring, tree: &TreeSpec, t: usize, options: &ExtractOptions) -> Result<Certificate> {
    extract_with_report(coloring, tree, t, options).map(|r| r.certificate)
}

struct Run<'a> {
    coloring: &'a EdgeColoring,
    tree: &'a TreeSpec,
    t: usize,
    options: &'a ExtractOptions,
    trace: Trace,
    structured: Option<StructuredSubgraph>,
    timings: Vec<(&'static str, Duration)>,
    clock: Instant,
}

impl Run<'_> {
    fn lap(&mut self, stage: &'static str) {
        let now = Instant::now();
        self.timings.push((stage, now - self.clock));
        self.clock = now;
    }

    fn finish(mut self, certificate: Certificate) -> ExtractReport {
        self.trace.outcome = certificate.variant_name().to_string();
        if let Certificate::Failure { stage, .. } = &certificate {
            self.trace.stage = Some(stage.as_str().to_string());
        }
        ExtractReport { certificate, trace: self.trace, structured: self.structured, timings: self.timings }
    }
}

/// [`extract`] together with its trace and intermediate structure.
pub fn extract_with_report(
    coloring: &EdgeColoring,
    tree: &TreeSpec,
    t: usize,
    options: &ExtractOptions,
) -> Result<ExtractReport> {
    let n = coloring.n();
    let s = tree.edge_count();
    let constants = &options.constants;
    if options.mode == Mode::Strict {
        if !constants.is_default() {
            return Err(Error::InvalidParameter("strict mode uses the default constants".into()));
        }
        let need = constants.strict_min_n(s, t);
        if n < need {
            return Err(Error::Precondition(format!("strict mode needs n >= {need}, got {n}")));
        }
    }
    let mut run = Run {
        coloring,
        tree,
        t,
        options,
        trace: Trace {
            seed: options.seed,
            mode: options.mode.as_str().to_string(),
            constants_hash: constants.hash(),
            n,
            s,
            t,
            ..Trace::default()
        },
        structured: None,
        timings: Vec::new(),
        clock: Instant::now(),
    };
    let certificate = pipeline(&mut run);
    Ok(run.finish(certificate))
}

fn pipeline(run: &mut Run) -> Certificate {
    let (coloring, tree, t) = (run.coloring, run.tree, run.t);
    let constants = run.options.constants;
    let n = coloring.n();
    let s = tree.edge_count();
    if s == 0 {
        return Certificate::MonoEmbedding { color: Color(0), map: vec![0] };
    }
    if t <= 1 {
        let path = if t == 0 { vec![0] } else { vec![0, 1] };
        return Certificate::RainbowPath { path };
    }

    let threshold = ceil_div(n, constants.robust_divisor);
    let robust = robust_vertices(coloring, t, threshold);
    run.trace.robust = Some(robust.len());
    let deletions_allowed = threshold - 1;
    if n - robust.len() > 2 * (t * s + deletions_allowed) || robust.is_empty() {
        let mut in_robust = vec![false; n];
        for &v in &robust {
            in_robust[v] = true;
        }
        let fragile: Vec<usize> = (0..n).filter(|&v| !in_robust[v]).collect();
        if let Some(cert) = mono_from_constrained_set(coloring, &fragile, tree, deletions_allowed, t) {
            run.lap("robust");
            return cert;
        }
    }
    run.lap("robust");
    if robust.is_empty() {
        return Certificate::failure(Stage::Robust, "no robust vertex");
    }

    let growth = grow_anchored_rainbow_path(coloring, &robust, t).expect("robust set is nonempty");
    run.lap("path");
    let (path, rogue) = match growth {
        PathGrowth::Rainbow(path) => {
            run.trace.path_edges = Some(path.len() - 1);
            return Certificate::RainbowPath { path };
        }
        PathGrowth::Stable { path, rogue } => (path, rogue),
    };
    run.trace.path_edges = Some(path.len() - 1);
    run.trace.rogue_colors = Some(rogue.len());

    let ss = match build_structured_subgraph(coloring, tree, t, &robust, &path, &rogue, &constants) {
        AssemblyOutcome::Structured(ss) => ss,
        AssemblyOutcome::Done(cert) => {
            run.lap("structure");
            return cert;
        }
    };
    run.lap("structure");
    run.trace.structured_size = Some(ss.len());
    run.trace.parts = Some(ss.parts.len());
    run.structured = Some(ss.clone());

    let cap = constants.rogue_degree_factor * s * t;
    let pruned = match prune_rogue_degrees(coloring, &ss, tree, cap) {
        Pruned::Structured(p) => p,
        Pruned::Mono(cert) => {
            run.lap("prune");
            return cert;
        }
    };
    run.lap("prune");
    run.trace.pruned_size = Some(pruned.len());
    if pruned.is_empty() {
        return Certificate::failure(Stage::Prune, "every member had high rogue degree");
    }

    let sigma = compute_median_order(pruned.orientation(), run.options.seed);
    let order: Vec<usize> = sigma.order.iter().map(|&i| pruned.members()[i]).collect();
    run.lap("median-order");
    let ms = match greedy_rogue_matching(coloring, &pruned, &order, s, t, &constants) {
        Ok(MatchingOutcome::State(ms)) => ms,
        Ok(MatchingOutcome::Early(cert)) => {
            run.lap("matching");
            return cert;
        }
        Err(e) => return Certificate::failure(Stage::Matching, e.to_string()),
    };
    run.lap("matching");
    run.trace.f = Some(ms.f());

    let pos = ms.positions(n);
    let anchor_positions: Vec<usize> = ms.anchors.iter().map(|&v| pos[v]).collect();
    let min_gap = constants.gap_factor * s * t;
    let Some(ell) = dyadic_gap_select(&anchor_positions, order.len(), min_gap) else {
        return Certificate::failure(
            Stage::Dyadic,
            format!("no dyadic anchor pair is {min_gap} positions apart in an order of {}", order.len()),
        );
    };
    run.trace.ell = Some(ell);

    let es = match extend_paths_to_window(coloring, &pruned, &ms, ell, s, t, &constants) {
        ExtendOutcome::Extended(es) => es,
        ExtendOutcome::Early(cert) | ExtendOutcome::Failure(cert) => {
            run.lap("extend");
            return cert;
        }
    };
    run.lap("extend");

    let retries = run.options.max_retries.unwrap_or_else(|| default_max_retries(t));
    let tail = randomized_tail_extension(
        coloring,
        &pruned,
        &es,
        t,
        constants.activation_denominator,
        run.options.seed,
        retries,
    );
    run.lap("randomized");
    let Some(tail) = tail else {
        run.trace.retries = Some(retries);
        return Certificate::failure(Stage::Randomized, format!("no sample reached {t} vertices in {retries} attempts"));
    };
    run.trace.retries = Some(tail.attempts);

    let mut paths = tail.paths;
    paths.extend(ms.anchors[ell..].iter().map(|&v| vec![v]));
    let linked = link_fragments(coloring, &pruned, t, &ms.link_edges(), &paths);
    run.lap("link");
    match linked {
        Ok(cert) if path_edges(&cert) >= t => cert,
        Ok(cert) => Certificate::failure(Stage::Link, format!("linked path has only {} edges", path_edges(&cert))),
        Err(e) => Certificate::failure(Stage::Link, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_certificate;
    use crate::constructions::{affine_plane_coloring, grid_construction, lexical_coloring, GridConstructionSpec};

    fn opportunistic(seed: u64) -> ExtractOptions {
        ExtractOptions::new(Mode::Opportunistic, seed)
    }

    #[test]
    fn dyadic_examples() {
        assert_eq!(dyadic_gap_select(&[0], 5000, 176), Some(1));
        assert_eq!(dyadic_gap_select(&[0, 10, 20, 1500], 1601, 1408), Some(2));
        assert_eq!(dyadic_gap_select(&[0, 10, 20], 40, 100), None);
    }

    #[test]
    fn monochromatic_gives_mono() {
        let c = EdgeColoring::from_fn(12, |_, _| 3).unwrap();
        let tree = TreeSpec::spider(&[2, 1]);
        let cert = extract(&c, &tree, 4, &opportunistic(0)).unwrap();
        assert!(matches!(cert, Certificate::MonoEmbedding { .. }));
        assert!(verify_certificate(&c, Some(&tree), None, &cert).is_valid());
    }

    #[test]
    fn lexical_gives_rainbow() {
        let c = lexical_coloring(30).unwrap();
        let cert = extract(&c, &TreeSpec::path(3), 6, &opportunistic(0)).unwrap();
        assert!(verify_certificate(&c, None, Some(6), &cert).is_valid());
    }

    #[test]
    fn affine_five_gives_line_tree() {
        let c = affine_plane_coloring(5).unwrap();
        let tree = TreeSpec::path(3);
        let cert = extract(&c, &tree, 7, &opportunistic(1)).unwrap();
        assert!(matches!(cert, Certificate::MonoEmbedding { .. }), "{cert:?}");
        assert!(verify_certificate(&c, Some(&tree), None, &cert).is_valid());
    }

    #[test]
    fn strict_gate() {
        let c = lexical_coloring(50).unwrap();
        let err = extract(&c, &TreeSpec::path(2), 2, &ExtractOptions::new(Mode::Strict, 0)).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let mut opts = ExtractOptions::new(Mode::Strict, 0);
        opts.constants.gap_factor = 1;
        assert!(matches!(extract(&c, &TreeSpec::path(2), 2, &opts), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn bins_are_whole_slices_in_range() {
        let spec = GridConstructionSpec::new(6, 4, 9);
        let (_, ss) = grid_construction(spec).unwrap();
        let block: Vec<usize> = (0..ss.len()).collect();
        let bins = pack_bins(&ss, &block, 6);
        for bin in &bins {
            assert!((6..12).contains(&bin.len()));
        }
        assert_eq!(bins.iter().map(Vec::len).sum::<usize>(), 54);
    }

    #[test]
    fn rogue_pair_breaking_drops_one() {
        let spec = GridConstructionSpec::new(2, 4, 3);
        let (c, ss) = grid_construction(spec).unwrap();
        let (a, b, d) = (spec.vertex(0, 0, 0), spec.vertex(0, 1, 0), spec.vertex(1, 2, 0));
        assert_eq!(break_rogue_pairs(&c, &ss, &[a, b, d]), vec![a, d]);
    }

    #[test]
    fn traces_are_reproducible() {
        let c = crate::constructions::random_coloring(60, 4, 9).unwrap();
        let tree = TreeSpec::path(2);
        let a = extract_with_report(&c, &tree, 3, &opportunistic(5)).unwrap();
        let b = extract_with_report(&c, &tree, 3, &opportunistic(5)).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.certificate, b.certificate);
    }
}

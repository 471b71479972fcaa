//! The partitioned, partially oriented vertex set in which directed paths
//! through distinct parts are automatically rainbow.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coloring::{Color, EdgeColoring};
use crate::median_order::{EdgeStatus, PartialOrientation};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub color: Color,
    pub vertices: Vec<usize>,
}

/// Parts `U_1..U_r` with distinct non-rogue colors, rogue colors `R`, and the
/// orientation on `U` (indexed by position in [`StructuredSubgraph::members`]).
///
/// Required properties:
/// - (ii) a cross-part edge `x → y` has `x`'s part color; an undirected
///   cross-part edge has a rogue color.
/// - (iii) any `x ∈ U_i`, `y ∈ U_j` have at least `t` common vertices
///   `z ∉ U` with `color(xz) = c_i` and `color(yz) = c_j`.
#[derive(Clone, Debug)]
pub struct StructuredSubgraph {
    pub anchor: Option<usize>,
    pub path: Vec<usize>,
    pub rogue_colors: Vec<Color>,
    pub parts: Vec<Part>,
    /// Where connector vertices for (iii) are looked for.
    pub connector_scope: Vec<usize>,
    /// Vertices excluded for heavy rogue incidence while building `U`.
    pub heavy_rogue_set: Vec<usize>,
    members: Vec<usize>,
    part_of: Vec<u32>,
    local_of: Vec<u32>,
    orientation: PartialOrientation,
}

impl StructuredSubgraph {
    /// Metadata with an explicit orientation over the sorted members.
    #[allow(clippy::too_many_arguments)]
    pub fn with_orientation(
        n: usize,
        _palette_size: usize,
        anchor: Option<usize>,
        path: Vec<usize>,
        mut rogue_colors: Vec<Color>,
        parts: Vec<Part>,
        connector_scope: Vec<usize>,
        orientation: PartialOrientation,
    ) -> Self {
        rogue_colors.sort_unstable();
        rogue_colors.dedup();
        let mut part_of = vec![NONE; n];
        let mut members = Vec::new();
        for (i, part) in parts.iter().enumerate() {
            for &v in &part.vertices {
                part_of[v] = i as u32;
                members.push(v);
            }
        }
        members.sort_unstable();
        let mut local_of = vec![NONE; n];
        for (i, &v) in members.iter().enumerate() {
            local_of[v] = i as u32;
        }
        assert_eq!(orientation.n(), members.len(), "orientation must cover exactly the members");
        StructuredSubgraph {
            anchor,
            path,
            rogue_colors,
            parts,
            connector_scope,
            heavy_rogue_set: Vec::new(),
            members,
            part_of,
            local_of,
            orientation,
        }
    }

    /// Metadata whose orientation is read off the colors: a cross-part edge
    /// in `x`'s part color points away from `x`, a rogue one is undirected,
    /// anything else (including intra-part pairs) is absent.
    pub fn derived(
        coloring: &EdgeColoring,
        anchor: Option<usize>,
        path: Vec<usize>,
        rogue_colors: Vec<Color>,
        parts: Vec<Part>,
        connector_scope: Vec<usize>,
    ) -> Self {
        let member_count = parts.iter().map(|p| p.vertices.len()).sum();
        let mut ss = StructuredSubgraph::with_orientation(
            coloring.n(),
            coloring.palette_size(),
            anchor,
            path,
            rogue_colors,
            parts,
            connector_scope,
            PartialOrientation::new(member_count),
        );
        let m = ss.members.len();
        for a in 0..m {
            let x = ss.members[a];
            let px = ss.part_of[x];
            for b in (a + 1)..m {
                let y = ss.members[b];
                let py = ss.part_of[y];
                if px == py {
                    continue;
                }
                let c = coloring.color(x, y);
                if c == ss.parts[px as usize].color {
                    ss.orientation.set_directed(a, b);
                } else if c == ss.parts[py as usize].color {
                    ss.orientation.set_directed(b, a);
                } else if ss.is_rogue(c) {
                    ss.orientation.set_undirected(a, b);
                }
            }
        }
        ss
    }

    /// Sorted union of all parts.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn orientation(&self) -> &PartialOrientation {
        &self.orientation
    }

    #[inline]
    pub fn part_index(&self, v: usize) -> Option<usize> {
        match self.part_of.get(v) {
            Some(&p) if p != NONE => Some(p as usize),
            _ => None,
        }
    }

    #[inline]
    pub fn part_color_of(&self, v: usize) -> Option<Color> {
        self.part_index(v).map(|p| self.parts[p].color)
    }

    #[inline]
    pub fn local(&self, v: usize) -> Option<usize> {
        match self.local_of.get(v) {
            Some(&l) if l != NONE => Some(l as usize),
            _ => None,
        }
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.local(v).is_some()
    }

    #[inline]
    pub fn is_rogue(&self, c: Color) -> bool {
        self.rogue_colors.binary_search(&c).is_ok()
    }

    /// True iff `from → to` in the orientation (both must be members).
    #[inline]
    pub fn points(&self, from: usize, to: usize) -> bool {
        match (self.local(from), self.local(to)) {
            (Some(a), Some(b)) if a != b => self.orientation.points(a, b),
            _ => false,
        }
    }

    pub fn status(&self, x: usize, y: usize) -> EdgeStatus {
        match (self.local(x), self.local(y)) {
            (Some(a), Some(b)) if a != b => match self.orientation.status(a, b) {
                EdgeStatus::Directed { from, .. } if from == a => EdgeStatus::Directed { from: x, to: y },
                EdgeStatus::Directed { .. } => EdgeStatus::Directed { from: y, to: x },
                other => other,
            },
            _ => EdgeStatus::Absent,
        }
    }

    /// Cross-part edge with a rogue color.
    #[inline]
    pub fn is_rogue_edge(&self, coloring: &EdgeColoring, x: usize, y: usize) -> bool {
        match (self.part_index(x), self.part_index(y)) {
            (Some(a), Some(b)) if a != b => self.is_rogue(coloring.color(x, y)),
            _ => false,
        }
    }

    /// Keeps only members with `keep(v)`; emptied parts are dropped and the
    /// orientation is restricted accordingly.
    pub fn restrict<F: Fn(usize) -> bool>(&self, keep: F) -> StructuredSubgraph {
        let parts: Vec<Part> = self
            .parts
            .iter()
            .map(|p| Part { color: p.color, vertices: p.vertices.iter().copied().filter(|&v| keep(v)).collect() })
            .filter(|p| !p.vertices.is_empty())
            .collect();
        let kept: Vec<usize> = self.members.iter().copied().filter(|&v| keep(v)).collect();
        let mut orientation = PartialOrientation::new(kept.len());
        for a in 0..kept.len() {
            let la = self.local_of[kept[a]] as usize;
            for b in (a + 1)..kept.len() {
                let lb = self.local_of[kept[b]] as usize;
                match self.orientation.status(la, lb) {
                    EdgeStatus::Directed { from, .. } if from == la => orientation.set_directed(a, b),
                    EdgeStatus::Directed { .. } => orientation.set_directed(b, a),
                    EdgeStatus::Undirected => orientation.set_undirected(a, b),
                    EdgeStatus::Absent => {}
                }
            }
        }
        let mut out = StructuredSubgraph::with_orientation(
            self.part_of.len(),
            0,
            self.anchor,
            self.path.clone(),
            self.rogue_colors.clone(),
            parts,
            self.connector_scope.clone(),
            orientation,
        );
        out.heavy_rogue_set = self.heavy_rogue_set.clone();
        out
    }
}

/// Cross-part pairs violating property (ii) against the stored orientation.
pub fn check_property_ii(coloring: &EdgeColoring, ss: &StructuredSubgraph) -> Vec<(usize, usize)> {
    let m = ss.members.len();
    let mut bad = Vec::new();
    for a in 0..m {
        let x = ss.members[a];
        for b in (a + 1)..m {
            let y = ss.members[b];
            let (px, py) = (ss.part_of[x], ss.part_of[y]);
            if px == py {
                continue;
            }
            let c = coloring.color(x, y);
            let ok = match ss.orientation.status(a, b) {
                EdgeStatus::Directed { from, .. } => {
                    let src = if from == a { px } else { py };
                    c == ss.parts[src as usize].color
                }
                EdgeStatus::Undirected => ss.is_rogue(c),
                EdgeStatus::Absent => false,
            };
            if !ok {
                bad.push((x, y));
            }
        }
    }
    bad
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairCheck {
    Exhaustive,
    Sampled { pairs: usize, seed: u64 },
}

impl PairCheck {
    /// Exhaustive up to `limit` members, otherwise `pairs` random pairs.
    pub fn auto(members: usize, limit: usize, pairs: usize, seed: u64) -> Self {
        if members <= limit {
            PairCheck::Exhaustive
        } else {
            PairCheck::Sampled { pairs, seed }
        }
    }
}

/// Per-member bitsets over a fixed outside scope: bit `z` of member `x` is
/// set iff `color(x, scope[z])` is `x`'s part color.
pub(crate) struct ConnectorIndex {
    words: usize,
    bits: Vec<u64>,
}

impl ConnectorIndex {
    pub(crate) fn new(coloring: &EdgeColoring, ss: &StructuredSubgraph, scope: &[usize]) -> Self {
        let words = scope.len().div_ceil(64);
        let mut bits = vec![0u64; words * ss.members.len()];
        for (a, &x) in ss.members.iter().enumerate() {
            let cx = ss.parts[ss.part_of[x] as usize].color;
            let row = &mut bits[a * words..(a + 1) * words];
            for (z, &w) in scope.iter().enumerate() {
                if w != x && coloring.color(x, w) == cx {
                    row[z / 64] |= 1 << (z % 64);
                }
            }
        }
        ConnectorIndex { words, bits }
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.words..(a + 1) * self.words]
    }

    pub(crate) fn single(&self, a: usize) -> usize {
        self.row(a).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn common(&self, a: usize, b: usize) -> usize {
        self.row(a).iter().zip(self.row(b)).map(|(x, y)| (x & y).count_ones() as usize).sum()
    }
}

/// Pairs (by global id, `x ≤ y`) violating property (iii) with connectors
/// drawn from outside `U`.
pub fn check_property_iii(
    coloring: &EdgeColoring,
    ss: &StructuredSubgraph,
    t: usize,
    mode: PairCheck,
) -> Vec<(usize, usize)> {
    let outside: Vec<usize> = (0..coloring.n()).filter(|&v| !ss.contains(v)).collect();
    let index = ConnectorIndex::new(coloring, ss, &outside);
    let m = ss.members.len();
    let mut bad = Vec::new();
    match mode {
        PairCheck::Exhaustive => {
            for a in 0..m {
                for b in a..m {
                    if index.common(a, b) < t {
                        bad.push((ss.members[a], ss.members[b]));
                    }
                }
            }
        }
        PairCheck::Sampled { pairs, seed } => {
            if m == 0 {
                return bad;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..pairs {
                let (a, b) = (rng.gen_range(0..m), rng.gen_range(0..m));
                let (a, b) = (a.min(b), a.max(b));
                if index.common(a, b) < t {
                    bad.push((ss.members[a], ss.members[b]));
                }
            }
        }
    }
    bad
}

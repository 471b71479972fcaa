//! Robust vertices, the anchored rainbow path, and the structured subgraph
//! built around the path's anchor.

use std::collections::BTreeMap;

use crate::certificate::{Certificate, Stage};
use crate::coloring::{Color, EdgeColoring, MultiplicityScratch};
use crate::error::{Error, Result};
use crate::median_order::PartialOrientation;
use crate::mono_embed::mono_from_dense_color_class;
use crate::tree::TreeSpec;

use super::constants::{ceil_div, Constants};
use super::structured::{check_property_ii, ConnectorIndex, Part, StructuredSubgraph};

/// Vertices that keep at least `threshold` edges after deleting their `t`
/// largest color classes (the worst choice of `t` colors to delete).
pub fn robust_vertices(coloring: &EdgeColoring, t: usize, threshold: usize) -> Vec<usize> {
    let n = coloring.n();
    let mut scratch = MultiplicityScratch::new(coloring.palette_size());
    (0..n)
        .filter(|&v| {
            let top: usize = scratch.sorted_at(coloring, v).iter().take(t).map(|&(_, k)| k as usize).sum();
            (n - 1) - top >= threshold
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathGrowth {
    /// The path reached `t` edges.
    Rainbow(Vec<usize>),
    /// No 1-, 2- or 3-edge extension exists at the anchor. The anchor is the
    /// last vertex; `rogue` holds the path's colors, sorted.
    Stable { path: Vec<usize>, rogue: Vec<Color> },
}

/// Up to four distinct colors from a vertex into the target set, with up to
/// two witnesses each.
#[derive(Clone, Default)]
struct ColorSummary {
    entries: Vec<(Color, [usize; 2], u8)>,
}

impl ColorSummary {
    const COLORS: usize = 4;

    fn full(&self) -> bool {
        self.entries.len() == Self::COLORS && self.entries.iter().all(|e| e.2 == 2)
    }

    fn add(&mut self, c: Color, z: usize) {
        if let Some(e) = self.entries.iter_mut().find(|e| e.0 == c) {
            if e.2 < 2 {
                e.1[e.2 as usize] = z;
                e.2 += 1;
            }
        } else if self.entries.len() < Self::COLORS {
            self.entries.push((c, [z, usize::MAX], 1));
        }
    }

    /// A target `z ≠ avoid` reached in a color outside `banned`.
    fn pick(&self, banned: &[Color], avoid: usize) -> Option<usize> {
        self.entries
            .iter()
            .filter(|e| !banned.contains(&e.0))
            .find_map(|e| e.1[..e.2 as usize].iter().copied().find(|&z| z != avoid))
    }
}

struct PathState<'a> {
    coloring: &'a EdgeColoring,
    in_robust: Vec<bool>,
    on_path: Vec<bool>,
    rogue: Vec<bool>,
    path: Vec<usize>,
}

impl PathState<'_> {
    #[inline]
    fn free_color(&self, c: Color) -> bool {
        !self.rogue[c.index()]
    }

    #[inline]
    fn is_target(&self, z: usize) -> bool {
        self.in_robust[z] && !self.on_path[z]
    }

    /// New vertices of the shortest extension at the anchor, if any.
    fn find_extension(&self) -> Option<Vec<usize>> {
        let c = self.coloring;
        let n = c.n();
        let v = *self.path.last().expect("path starts with one vertex");
        if let Some(z) = (0..n).find(|&z| self.is_target(z) && self.free_color(c.color(v, z))) {
            return Some(vec![z]);
        }
        let targets: Vec<usize> = (0..n).filter(|&z| self.is_target(z)).collect();
        let summaries: Vec<ColorSummary> = (0..n)
            .map(|y| {
                let mut sum = ColorSummary::default();
                if self.on_path[y] {
                    return sum;
                }
                for &z in &targets {
                    if z != y {
                        let col = c.color(y, z);
                        if self.free_color(col) {
                            sum.add(col, z);
                            if sum.full() {
                                break;
                            }
                        }
                    }
                }
                sum
            })
            .collect();
        let firsts: Vec<(usize, Color)> = (0..n)
            .filter(|&x| !self.on_path[x])
            .map(|x| (x, c.color(v, x)))
            .filter(|&(_, c1)| self.free_color(c1))
            .collect();
        for &(x, c1) in &firsts {
            if let Some(z) = summaries[x].pick(&[c1], x) {
                return Some(vec![x, z]);
            }
        }
        for &(x, c1) in &firsts {
            for y in 0..n {
                if y == x || self.on_path[y] {
                    continue;
                }
                let c2 = c.color(x, y);
                if c2 == c1 || !self.free_color(c2) {
                    continue;
                }
                if let Some(z) = summaries[y].pick(&[c1, c2], x) {
                    return Some(vec![x, y, z]);
                }
            }
        }
        None
    }
}

/// Grows a rainbow path from the first robust vertex by extensions of one,
/// two or three fresh-colored edges ending at an unused robust vertex, until
/// none exists or the path has `t` edges.
pub fn grow_anchored_rainbow_path(coloring: &EdgeColoring, robust: &[usize], t: usize) -> Result<PathGrowth> {
    let &start = robust.first().ok_or_else(|| Error::Precondition("no robust vertex to anchor the path".into()))?;
    let n = coloring.n();
    let mut st = PathState {
        coloring,
        in_robust: vec![false; n],
        on_path: vec![false; n],
        rogue: vec![false; coloring.palette_size()],
        path: vec![start],
    };
    for &v in robust {
        st.in_robust[v] = true;
    }
    st.on_path[start] = true;
    while st.path.len() <= t {
        let Some(extension) = st.find_extension() else { break };
        for w in extension {
            let last = *st.path.last().expect("nonempty");
            st.rogue[coloring.color(last, w).index()] = true;
            st.on_path[w] = true;
            st.path.push(w);
        }
    }
    if st.path.len() > t {
        st.path.truncate(t + 1);
        return Ok(PathGrowth::Rainbow(st.path));
    }
    let mut rogue: Vec<Color> = st.path.windows(2).map(|w| coloring.color(w[0], w[1])).collect();
    rogue.sort_unstable();
    Ok(PathGrowth::Stable { path: st.path, rogue })
}

#[derive(Clone, Debug)]
pub enum AssemblyOutcome {
    Structured(StructuredSubgraph),
    /// A monochromatic embedding from a dense-class branch, or a failure.
    Done(Certificate),
}

/// How the property-(iii) repair scans pairs.
const EXHAUSTIVE_REPAIR_LIMIT: usize = 4000;
const SAMPLED_REPAIR_PAIRS: usize = 20_000;

/// Builds the parts around the anchor of a stable path. `robust` must be the
/// robust set the path was grown against.
pub fn build_structured_subgraph(
    coloring: &EdgeColoring,
    tree: &TreeSpec,
    t: usize,
    robust: &[usize],
    path: &[usize],
    rogue: &[Color],
    constants: &Constants,
) -> AssemblyOutcome {
    let n = coloring.n();
    let s = tree.edge_count();
    let mut is_rogue = vec![false; coloring.palette_size()];
    for c in rogue {
        is_rogue[c.index()] = true;
    }

    let heavy_threshold = ceil_div(n, constants.heavy_rogue_divisor);
    let mut heavy = vec![false; n];
    let mut heavy_list = Vec::new();
    for (v, flag) in heavy.iter_mut().enumerate() {
        let mut count = 0;
        coloring.for_each_edge_at(v, |_, c| count += is_rogue[c.index()] as usize);
        if count >= heavy_threshold {
            *flag = true;
            heavy_list.push(v);
        }
    }
    if heavy_list.len() >= constants.heavy_set_factor * s * t {
        let all: Vec<usize> = (0..n).collect();
        if let Some(cert) = mono_from_dense_color_class(coloring, tree, rogue, &all) {
            return AssemblyOutcome::Done(cert);
        }
    }

    let anchor = *path.last().expect("path is nonempty");
    let mut on_path = vec![false; n];
    for &p in path {
        on_path[p] = true;
    }
    let mut by_color: BTreeMap<Color, Vec<usize>> = BTreeMap::new();
    coloring.for_each_edge_at(anchor, |w, c| {
        if !is_rogue[c.index()] && !heavy[w] && !on_path[w] {
            by_color.entry(c).or_default().push(w);
        }
    });
    if by_color.is_empty() {
        return AssemblyOutcome::Done(Certificate::failure(
            Stage::Structure,
            "anchor has no non-rogue neighbors outside the heavy set and the path",
        ));
    }

    let cap = constants.part_factor * s;
    let mut parts = Vec::with_capacity(by_color.len());
    for (color, mut vertices) in by_color {
        if vertices.len() >= cap {
            let mut scope: Vec<usize> = vertices[..cap].to_vec();
            scope.extend_from_slice(robust);
            scope.sort_unstable();
            scope.dedup();
            if let Some(cert) = mono_from_dense_color_class(coloring, tree, &[color], &scope) {
                return AssemblyOutcome::Done(cert);
            }
            vertices.truncate(cap.saturating_sub(1));
        }
        if !vertices.is_empty() {
            parts.push(Part { color, vertices });
        }
    }

    let scope: Vec<usize> = robust.iter().copied().filter(|&z| !on_path[z]).collect();
    let parts = repair_connectors(coloring, parts, &scope, t);
    let mut ss = StructuredSubgraph::derived(coloring, Some(anchor), path.to_vec(), rogue.to_vec(), parts, scope);
    ss.heavy_rogue_set = heavy_list;
    let violations = check_property_ii(coloring, &ss);
    if !violations.is_empty() {
        let mut drop = vec![false; n];
        for (_, y) in violations {
            drop[y] = true;
        }
        ss = ss.restrict(|v| !drop[v]);
    }
    if ss.is_empty() {
        return AssemblyOutcome::Done(Certificate::failure(Stage::Structure, "no part survived the connector check"));
    }
    AssemblyOutcome::Structured(ss)
}

/// Drops members until every pair has at least `t` common connectors in
/// `scope` (in the respective part colors).
fn repair_connectors(coloring: &EdgeColoring, parts: Vec<Part>, scope: &[usize], t: usize) -> Vec<Part> {
    let m: usize = parts.iter().map(|p| p.vertices.len()).sum();
    let probe = StructuredSubgraph::with_orientation(
        coloring.n(),
        coloring.palette_size(),
        None,
        Vec::new(),
        Vec::new(),
        parts.clone(),
        scope.to_vec(),
        PartialOrientation::new(m),
    );
    let index = ConnectorIndex::new(coloring, &probe, scope);
    let mut alive: Vec<bool> = (0..m).map(|a| index.single(a) >= t).collect();
    let settle = |a: usize, b: usize, alive: &mut Vec<bool>| {
        if alive[a] && alive[b] && index.common(a, b) < t {
            let victim = if index.single(a) < index.single(b) { a } else { b };
            alive[victim] = false;
        }
    };
    if m <= EXHAUSTIVE_REPAIR_LIMIT {
        for a in 0..m {
            for b in (a + 1)..m {
                settle(a, b, &mut alive);
            }
        }
    } else {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(m as u64);
        for _ in 0..SAMPLED_REPAIR_PAIRS {
            let (a, b) = (rng.gen_range(0..m), rng.gen_range(0..m));
            if a != b {
                settle(a, b, &mut alive);
            }
        }
    }
    let members = probe.members();
    parts
        .into_iter()
        .map(|p| Part {
            color: p.color,
            vertices: p
                .vertices
                .into_iter()
                .filter(|v| alive[members.binary_search(v).expect("member")])
                .collect(),
        })
        .filter(|p| !p.vertices.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{affine_plane_coloring, lexical_coloring, random_coloring};

    #[test]
    fn robust_extremes() {
        let mono = EdgeColoring::from_fn(20, |_, _| 0).unwrap();
        assert!(robust_vertices(&mono, 1, 4).is_empty());
        let rainbow = EdgeColoring::from_fn(100, |u, v| (u * 100 + v) as u32).unwrap();
        assert_eq!(robust_vertices(&rainbow, 10, 20).len(), 100);
        let affine = affine_plane_coloring(5).unwrap();
        assert!(robust_vertices(&affine, 6, 5).is_empty());
    }

    #[test]
    fn lexical_short_circuits() {
        let c = lexical_coloring(40).unwrap();
        let robust = robust_vertices(&c, 5, 8);
        match grow_anchored_rainbow_path(&c, &robust, 5).unwrap() {
            PathGrowth::Rainbow(p) => assert_eq!(p.len(), 6),
            other => panic!("expected a rainbow path, got {other:?}"),
        }
    }

    #[test]
    fn empty_robust_set_is_rejected() {
        let c = lexical_coloring(5).unwrap();
        assert!(matches!(grow_anchored_rainbow_path(&c, &[], 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn stable_path_has_no_single_edge_extension() {
        for seed in 0..5 {
            let c = random_coloring(30, 3, seed).unwrap();
            let robust: Vec<usize> = (0..30).collect();
            if let PathGrowth::Stable { path, rogue } = grow_anchored_rainbow_path(&c, &robust, 8).unwrap() {
                let v = *path.last().unwrap();
                assert!((0..30).all(|z| path.contains(&z) || rogue.contains(&c.color(v, z))));
            }
        }
    }

    #[test]
    fn summary_picks_fresh_color() {
        let mut s = ColorSummary::default();
        s.add(Color(1), 5);
        s.add(Color(2), 7);
        s.add(Color(2), 8);
        assert_eq!(s.pick(&[Color(1)], 7), Some(8));
        assert_eq!(s.pick(&[Color(2)], 5), None);
    }
}

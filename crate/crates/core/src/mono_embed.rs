//! Monochromatic tree embedding through minimum-degree peeling.
//!
//! A graph with `e ≥ s·v` has a nonempty induced subgraph of minimum degree
//! at least `s`, and any tree with `s` edges embeds greedily into such a
//! subgraph.

use std::collections::{BTreeMap, VecDeque};

use crate::certificate::Certificate;
use crate::coloring::{Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::tree::TreeSpec;

/// A graph on a subset of the coloring's vertices. Vertices are kept sorted;
/// adjacency lists use local indices and are sorted too.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgraphView {
    vertices: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl SubgraphView {
    /// Graph on `vertices` with the given edges (global ids). Edges touching
    /// vertices outside the set are dropped.
    pub fn from_edges(mut vertices: Vec<usize>, edges: &[(usize, usize)]) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        let local: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); vertices.len()];
        for &(u, v) in edges {
            if let (Some(&a), Some(&b)) = (local.get(&u), local.get(&v)) {
                if a != b {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        SubgraphView { vertices, adj }
    }

    /// The class of `color` restricted to `scope`.
    pub fn color_class(coloring: &EdgeColoring, color: Color, scope: &[usize]) -> Self {
        let mut vertices = scope.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let mut adj = vec![Vec::new(); vertices.len()];
        for a in 0..vertices.len() {
            for b in (a + 1)..vertices.len() {
                if coloring.color(vertices[a], vertices[b]) == color {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        SubgraphView { vertices, adj }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    #[inline]
    pub fn global(&self, local: usize) -> usize {
        self.vertices[local]
    }

    pub fn neighbors(&self, local: usize) -> &[usize] {
        &self.adj[local]
    }

    pub fn degree(&self, local: usize) -> usize {
        self.adj[local].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Vertices with at least one edge.
    pub fn non_isolated_count(&self) -> usize {
        self.adj.iter().filter(|l| !l.is_empty()).count()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).min()
    }

    pub fn has_edge_global(&self, u: usize, v: usize) -> bool {
        match (self.vertices.binary_search(&u), self.vertices.binary_search(&v)) {
            (Ok(a), Ok(b)) => self.adj[a].binary_search(&b).is_ok(),
            _ => false,
        }
    }

    /// Induced subgraph on the local vertices with `keep[i] == true`.
    pub fn induced(&self, keep: &[bool]) -> Self {
        let mut remap = vec![usize::MAX; self.len()];
        let mut vertices = Vec::new();
        for (i, &k) in keep.iter().enumerate() {
            if k {
                remap[i] = vertices.len();
                vertices.push(self.vertices[i]);
            }
        }
        let adj = (0..self.len())
            .filter(|&i| keep[i])
            .map(|i| self.adj[i].iter().filter(|&&j| keep[j]).map(|&j| remap[j]).collect())
            .collect();
        SubgraphView { vertices, adj }
    }

    /// Connected components as local index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// The maximal induced subgraph with minimum degree at least `s`, found by
/// repeatedly deleting vertices of degree below `s`. Possibly empty.
pub fn peel_to_min_degree(g: &SubgraphView, s: usize) -> SubgraphView {
    let mut degree: Vec<usize> = (0..g.len()).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; g.len()];
    let mut queue: Vec<usize> = (0..g.len()).filter(|&v| degree[v] < s).collect();
    for &v in &queue {
        alive[v] = false;
    }
    while let Some(v) = queue.pop() {
        for &w in g.neighbors(v) {
            if alive[w] {
                degree[w] -= 1;
                if degree[w] < s {
                    alive[w] = false;
                    queue.push(w);
                }
            }
        }
    }
    g.induced(&alive)
}

/// Embeds `tree` into a host of minimum degree at least `tree.edge_count()`:
/// the root goes to the lowest vertex, then each child in breadth-first order
/// to the lowest unused neighbor of its parent's image. Returns the map from
/// tree vertices to global vertices.
pub fn greedy_tree_embed(g: &SubgraphView, tree: &TreeSpec) -> Result<Vec<usize>> {
    let s = tree.edge_count();
    if g.is_empty() {
        return Err(Error::Precondition("host graph is empty".into()));
    }
    let min_deg = g.min_degree().unwrap_or(0);
    if min_deg < s {
        return Err(Error::Precondition(format!("host minimum degree {min_deg} is below tree size {s}")));
    }
    let mut image = vec![usize::MAX; tree.vertex_count()];
    let mut used = vec![false; g.len()];
    for (v, parent) in tree.bfs_order() {
        let slot = match parent {
            None => 0,
            Some(p) => *g
                .neighbors(image[p])
                .iter()
                .find(|&&w| !used[w])
                .ok_or_else(|| Error::Precondition("greedy embedding ran out of neighbors".into()))?,
        };
        used[slot] = true;
        image[v] = slot;
    }
    Ok(image.into_iter().map(|l| g.global(l)).collect())
}

/// Peels `g` to minimum degree `s` and embeds the tree if anything survives.
pub fn embed_in_core(g: &SubgraphView, tree: &TreeSpec) -> Option<Vec<usize>> {
    let core = peel_to_min_degree(g, tree.edge_count().max(1));
    if core.is_empty() {
        return None;
    }
    greedy_tree_embed(&core, tree).ok()
}

/// Scans `candidate_colors` in order, restricted to `scope`, and returns a
/// monochromatic embedding of `tree` from the first class whose peeled core is
/// nonempty.
///
/// The core test subsumes both the global density test `e ≥ s·v` and the
/// per-component minimum-degree test: a nonempty min-degree-`s` subgraph is
/// exactly what the greedy embedding needs.
pub fn mono_from_dense_color_class(
    coloring: &EdgeColoring,
    tree: &TreeSpec,
    candidate_colors: &[Color],
    scope: &[usize],
) -> Option<Certificate> {
    let s = tree.edge_count();
    if s == 0 {
        return scope.first().map(|&v| Certificate::MonoEmbedding { color: Color(0), map: vec![v] });
    }
    // A min-degree-s subgraph has at least s+1 vertices and s(s+1)/2 edges.
    let min_edges = s * (s + 1) / 2;
    if scope.len() < s + 1 {
        return None;
    }
    let try_class = |color: Color, view: SubgraphView| -> Option<Certificate> {
        if view.edge_count() < min_edges {
            return None;
        }
        embed_in_core(&view, tree).map(|map| Certificate::MonoEmbedding { color, map })
    };
    if candidate_colors.len() <= 16 {
        candidate_colors
            .iter()
            .find_map(|&c| try_class(c, SubgraphView::color_class(coloring, c, scope)))
    } else {
        let mut slot = vec![usize::MAX; coloring.palette_size()];
        for (i, c) in candidate_colors.iter().enumerate() {
            if slot[c.index()] == usize::MAX {
                slot[c.index()] = i;
            }
        }
        let mut buckets: Vec<Vec<(usize, usize)>> = vec![Vec::new(); candidate_colors.len()];
        for (a, &u) in scope.iter().enumerate() {
            for &v in &scope[a + 1..] {
                let i = slot[coloring.color(u, v).index()];
                if i != usize::MAX {
                    buckets[i].push((u, v));
                }
            }
        }
        candidate_colors
            .iter()
            .zip(buckets)
            .find_map(|(&c, edges)| {
                if edges.len() < min_edges {
                    return None;
                }
                try_class(c, SubgraphView::from_edges(scope.to_vec(), &edges))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_certificate;

    fn complete(n: usize) -> SubgraphView {
        let edges: Vec<_> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        SubgraphView::from_edges((0..n).collect(), &edges)
    }

    #[test]
    fn peel_complete_graph_keeps_everything() {
        let k5 = complete(5);
        assert_eq!(peel_to_min_degree(&k5, 2), k5);
    }

    #[test]
    fn peel_star_is_empty() {
        let star = SubgraphView::from_edges((0..6).collect(), &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        assert!(peel_to_min_degree(&star, 2).is_empty());
    }

    #[test]
    fn peel_triangle_with_tail() {
        let g = SubgraphView::from_edges((0..6).collect(), &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5)]);
        assert_eq!(peel_to_min_degree(&g, 2).vertices(), &[0, 1, 2]);
    }

    #[test]
    fn embed_into_complete_and_cycle() {
        let k = complete(5);
        for tree in TreeSpec::all_nonisomorphic(4) {
            let map = greedy_tree_embed(&k, &tree).unwrap();
            for &(a, b) in tree.edges() {
                assert!(k.has_edge_global(map[a], map[b]));
            }
        }
        let c6 = SubgraphView::from_edges((0..6).collect(), &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        assert!(greedy_tree_embed(&c6, &TreeSpec::path(2)).is_ok());
        assert!(greedy_tree_embed(&c6, &TreeSpec::path(3)).is_err());
    }

    #[test]
    fn mono_from_monochromatic_clique() {
        let s = 3;
        let c = EdgeColoring::from_fn(2 * s + 1, |_, _| 4).unwrap();
        let scope: Vec<usize> = (0..c.n()).collect();
        let tree = TreeSpec::spider(&[1, 2]);
        let cert = mono_from_dense_color_class(&c, &tree, &[Color(0)], &scope).unwrap();
        assert!(verify_certificate(&c, Some(&tree), None, &cert).is_valid());
    }

    #[test]
    fn rainbow_has_no_dense_class() {
        let c = EdgeColoring::from_fn(8, |u, v| (u * 8 + v) as u32).unwrap();
        let scope: Vec<usize> = (0..8).collect();
        let colors: Vec<Color> = c.palette().collect();
        for s in 2..5 {
            assert!(mono_from_dense_color_class(&c, &TreeSpec::path(s), &colors, &scope).is_none());
        }
        // a single edge is a monochromatic 1-edge tree in any coloring
        assert!(mono_from_dense_color_class(&c, &TreeSpec::path(1), &colors, &scope).is_some());
    }
}

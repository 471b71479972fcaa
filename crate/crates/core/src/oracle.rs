//! Exhaustive reference searches. Each one is exact or says it ran out of
//! budget; none of them guesses.

use serde::Serialize;

use crate::coloring::{Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::median_order::{MedianOrdering, PartialOrientation};
use crate::mono_embed::SubgraphView;
use crate::tree::TreeSpec;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    NotFound,
    /// The node budget ran out before the search could decide.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RainbowSearch {
    /// Longest rainbow path (capped at the requested bound, if any).
    Exact { length: usize, path: Vec<usize> },
    /// Budget exhausted; `best` is the longest path seen, a lower bound only.
    Unknown { best: Vec<usize> },
}

struct RainbowDfs<'a> {
    coloring: &'a EdgeColoring,
    cap: usize,
    budget: u64,
    nodes: u64,
    used_color: Vec<bool>,
    on_path: Vec<bool>,
    path: Vec<usize>,
    best: Vec<usize>,
    /// Candidate successors of each vertex, rarest color class first.
    successors: Vec<Vec<usize>>,
}

impl RainbowDfs<'_> {
    fn best_len(&self) -> usize {
        self.best.len().saturating_sub(1)
    }

    /// Returns false once the budget is gone.
    fn grow(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let len = self.path.len() - 1;
        if len > self.best_len() {
            self.best = self.path.clone();
        }
        if self.best_len() >= self.cap {
            return true;
        }
        let last = *self.path.last().expect("path is never empty");
        for idx in 0..self.successors[last].len() {
            let w = self.successors[last][idx];
            if self.on_path[w] {
                continue;
            }
            let c = self.coloring.color(last, w).index();
            if self.used_color[c] {
                continue;
            }
            self.used_color[c] = true;
            self.on_path[w] = true;
            self.path.push(w);
            let alive = self.grow();
            self.path.pop();
            self.on_path[w] = false;
            self.used_color[c] = false;
            if !alive {
                return false;
            }
            if self.best_len() >= self.cap {
                return true;
            }
        }
        true
    }
}

/// Longest rainbow path by depth-first search. The search stops early once a
/// path of `cap` edges is found (the palette size and `n − 1` always cap it).
pub fn longest_rainbow_path_exact(coloring: &EdgeColoring, cap: Option<usize>, budget: u64) -> RainbowSearch {
    let n = coloring.n();
    let bound = coloring.palette_size().min(n - 1);
    let cap = cap.map_or(bound, |c| c.min(bound));
    let mut class_size = vec![0usize; coloring.palette_size()];
    for &c in &coloring_colors(coloring) {
        class_size[c.index()] += 1;
    }
    let successors = (0..n)
        .map(|v| {
            let mut ws: Vec<usize> = (0..n).filter(|&w| w != v).collect();
            ws.sort_by_key(|&w| (class_size[coloring.color(v, w).index()], w));
            ws
        })
        .collect();
    let mut dfs = RainbowDfs {
        coloring,
        cap,
        budget,
        nodes: 0,
        used_color: vec![false; coloring.palette_size()],
        on_path: vec![false; n],
        path: Vec::new(),
        best: vec![0],
        successors,
    };
    for start in 0..n {
        dfs.on_path[start] = true;
        dfs.path.push(start);
        let alive = dfs.grow();
        dfs.path.pop();
        dfs.on_path[start] = false;
        if !alive {
            return RainbowSearch::Unknown { best: dfs.best };
        }
        if dfs.best_len() >= cap {
            break;
        }
    }
    RainbowSearch::Exact { length: dfs.best_len(), path: dfs.best }
}

fn coloring_colors(coloring: &EdgeColoring) -> Vec<Color> {
    let n = coloring.n();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            out.push(coloring.color(u, v));
        }
    }
    out
}

/// Whether `tree` is a subgraph of `g`, by backtracking over images in the
/// tree's breadth-first order. The witness maps tree vertices to global ids.
pub fn tree_containment_exact(g: &SubgraphView, tree: &TreeSpec, budget: u64) -> SearchOutcome<Vec<usize>> {
    let order = tree.bfs_order();
    let tree_degree: Vec<usize> = tree.adjacency().iter().map(Vec::len).collect();
    if g.len() < tree.vertex_count() {
        return SearchOutcome::NotFound;
    }
    struct State<'a> {
        g: &'a SubgraphView,
        order: &'a [(usize, Option<usize>)],
        tree_degree: &'a [usize],
        image: Vec<usize>,
        used: Vec<bool>,
        nodes: u64,
        budget: u64,
    }
    // Some(true) found, Some(false) exhausted, None out of budget
    fn place(st: &mut State, depth: usize) -> Option<bool> {
        if depth == st.order.len() {
            return Some(true);
        }
        st.nodes += 1;
        if st.nodes > st.budget {
            return None;
        }
        let (x, parent) = st.order[depth];
        let candidates: Vec<usize> = match parent {
            None => (0..st.g.len()).collect(),
            Some(p) => st.g.neighbors(st.image[p]).to_vec(),
        };
        for y in candidates {
            if st.used[y] || st.g.degree(y) < st.tree_degree[x] {
                continue;
            }
            st.used[y] = true;
            st.image[x] = y;
            match place(st, depth + 1) {
                Some(false) => {}
                other => return other,
            }
            st.used[y] = false;
        }
        Some(false)
    }
    let mut st = State {
        g,
        order: &order,
        tree_degree: &tree_degree,
        image: vec![usize::MAX; tree.vertex_count()],
        used: vec![false; g.len()],
        nodes: 0,
        budget,
    };
    match place(&mut st, 0) {
        Some(true) => SearchOutcome::Found(st.image.iter().map(|&l| g.global(l)).collect()),
        Some(false) => SearchOutcome::NotFound,
        None => SearchOutcome::Unknown,
    }
}

pub const MEDIAN_EXACT_LIMIT: usize = 9;

/// An ordering with the maximum number of forward edges, by dynamic
/// programming over prefix sets.
pub fn median_order_exact(g: &PartialOrientation) -> Result<MedianOrdering> {
    let n = g.n();
    if n > MEDIAN_EXACT_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "exact median order is limited to {MEDIAN_EXACT_LIMIT} vertices, got {n}"
        )));
    }
    let full = 1usize << n;
    // placing v right after the prefix `mask` wins the edges from `mask` into v
    let mut best = vec![i64::MIN; full];
    let mut choice = vec![usize::MAX; full];
    best[0] = 0;
    for mask in 0..full {
        if best[mask] == i64::MIN {
            continue;
        }
        for v in 0..n {
            if mask & (1 << v) != 0 {
                continue;
            }
            let gain = (0..n).filter(|&x| mask & (1 << x) != 0 && g.points(x, v)).count() as i64;
            let next = mask | (1 << v);
            if best[mask] + gain > best[next] {
                best[next] = best[mask] + gain;
                choice[next] = v;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = full - 1;
    while mask != 0 {
        let v = choice[mask];
        order.push(v);
        mask &= !(1 << v);
    }
    order.reverse();
    Ok(MedianOrdering { order, forward_count: best[full - 1] as usize })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorProfile {
    /// Original label of the color.
    pub label: u32,
    pub edges: usize,
    pub components: usize,
    pub max_component_order: usize,
    /// Every component of the class is a complete graph.
    pub all_cliques: bool,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Component structure of every color class (isolated vertices of a class
/// are not counted as components), in color id order.
pub fn mono_component_profile(coloring: &EdgeColoring) -> Vec<ColorProfile> {
    let n = coloring.n();
    let k = coloring.palette_size();
    let mut by_color: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    for u in 0..n {
        for v in (u + 1)..n {
            by_color[coloring.color(u, v).index()].push((u, v));
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    by_color
        .iter()
        .enumerate()
        .map(|(c, edges)| {
            let mut touched: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
            touched.sort_unstable();
            touched.dedup();
            for &v in &touched {
                parent[v] = v;
            }
            for &(u, v) in edges {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a != b {
                    parent[a] = b;
                }
            }
            let mut order = std::collections::HashMap::<usize, (usize, usize)>::new();
            for &v in &touched {
                let r = find(&mut parent, v);
                order.entry(r).or_default().0 += 1;
            }
            for &(u, _) in edges {
                let r = find(&mut parent, u);
                order.get_mut(&r).expect("edge endpoint has a root").1 += 1;
            }
            ColorProfile {
                label: coloring.label_of(Color(c as u32)),
                edges: edges.len(),
                components: order.len(),
                max_component_order: order.values().map(|&(v, _)| v).max().unwrap_or(0),
                all_cliques: order.values().all(|&(v, e)| e == v * (v - 1) / 2),
            }
        })
        .collect()
}

/// The largest number of distinct colors at a single vertex.
pub fn max_distinct_colors_at_vertex(coloring: &EdgeColoring) -> usize {
    let mut seen = vec![usize::MAX; coloring.palette_size()];
    (0..coloring.n())
        .map(|v| {
            let mut count = 0;
            coloring.for_each_edge_at(v, |_, c| {
                if seen[c.index()] != v {
                    seen[c.index()] = v;
                    count += 1;
                }
            });
            count
        })
        .max()
        .unwrap_or(0)
}

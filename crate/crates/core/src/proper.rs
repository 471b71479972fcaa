//! Properly colored trees: local-constraint sets and the recursive
//! embedding with a monochromatic fallback.

use std::collections::HashMap;

use crate::certificate::{Certificate, Stage};
use crate::coloring::{Color, EdgeColoring, MultiplicityScratch};
use crate::error::Result;
use crate::mono_embed::{embed_in_core, SubgraphView};
use crate::tree::TreeSpec;

/// The colors a vertex keeps (its `b` largest classes, ties by color id)
/// and how many edges must go to reach that.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionProfile {
    pub kept: Vec<Color>,
    pub deletions: usize,
}

fn profile_from_sorted(sorted: &[(Color, u32)], b: usize) -> DeletionProfile {
    let kept: Vec<Color> = sorted.iter().take(b).map(|&(c, _)| c).collect();
    let deletions = sorted.iter().skip(b).map(|&(_, k)| k as usize).sum();
    DeletionProfile { kept, deletions }
}

/// Profiles of `vertices`, counting only edges inside `vertices`.
pub fn deletion_profiles_within(coloring: &EdgeColoring, vertices: &[usize], b: usize) -> Vec<DeletionProfile> {
    let mut mask = vec![false; coloring.n()];
    for &v in vertices {
        mask[v] = true;
    }
    let mut scratch = MultiplicityScratch::new(coloring.palette_size());
    vertices
        .iter()
        .map(|&v| profile_from_sorted(&scratch.sorted_within(coloring, v, &mask), b))
        .collect()
}

/// `deg(v)` minus the `b` largest color multiplicities at `v`.
pub fn min_deletions_to_b_colors(coloring: &EdgeColoring, v: usize, b: usize) -> Result<usize> {
    coloring.check_vertex(v)?;
    let mut scratch = MultiplicityScratch::new(coloring.palette_size());
    Ok(profile_from_sorted(&scratch.sorted_at(coloring, v), b).deletions)
}

/// Vertices that reach at most `b` colors by deleting at most `a` edges.
pub fn local_constraints_set(coloring: &EdgeColoring, a: usize, b: usize) -> Vec<usize> {
    let all: Vec<usize> = (0..coloring.n()).collect();
    local_constraints_set_within(coloring, &all, a, b)
}

/// [`local_constraints_set`] for the complete graph on `vertices`.
pub fn local_constraints_set_within(coloring: &EdgeColoring, vertices: &[usize], a: usize, b: usize) -> Vec<usize> {
    deletion_profiles_within(coloring, vertices, b)
        .iter()
        .zip(vertices)
        .filter(|(p, _)| p.deletions <= a)
        .map(|(_, &v)| v)
        .collect()
}

/// Looks for a monochromatic `tree` among the edges of `G[u]` kept by both
/// endpoints' deletion profiles. Succeeds whenever `|u| > 2(bs + a)` and
/// every vertex of `u` needs at most `a` deletions.
pub fn mono_from_constrained_set(
    coloring: &EdgeColoring,
    u: &[usize],
    tree: &TreeSpec,
    a: usize,
    b: usize,
) -> Option<Certificate> {
    let all: Vec<usize> = (0..coloring.n()).collect();
    mono_from_constrained_set_within(coloring, &all, u, tree, a, b)
}

/// [`mono_from_constrained_set`] with profiles taken in the complete graph
/// on `ambient`.
pub fn mono_from_constrained_set_within(
    coloring: &EdgeColoring,
    ambient: &[usize],
    u: &[usize],
    tree: &TreeSpec,
    _a: usize,
    b: usize,
) -> Option<Certificate> {
    let s = tree.edge_count();
    if s == 0 {
        return u.first().map(|&v| Certificate::MonoEmbedding { color: Color(0), map: vec![v] });
    }
    let profiles = deletion_profiles_within(coloring, ambient, b);
    let slot: HashMap<usize, usize> = ambient.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let kept = |v: usize, c: Color| slot.get(&v).is_some_and(|&i| profiles[i].kept.contains(&c));
    let mut classes: HashMap<Color, Vec<(usize, usize)>> = HashMap::new();
    for (i, &x) in u.iter().enumerate() {
        for &y in &u[i + 1..] {
            let c = coloring.color(x, y);
            if kept(x, c) && kept(y, c) {
                classes.entry(c).or_default().push((x, y));
            }
        }
    }
    let mut colors: Vec<Color> = classes.keys().copied().collect();
    colors.sort_unstable();
    colors.into_iter().find_map(|c| {
        let edges = &classes[&c];
        if edges.len() < s * (s + 1) / 2 {
            return None;
        }
        embed_in_core(&SubgraphView::from_edges(u.to_vec(), edges), tree)
            .map(|map| Certificate::MonoEmbedding { color: c, map })
    })
}

/// A properly colored copy of `t_tree` or a monochromatic copy of `s_tree`.
/// Guaranteed to succeed on `n ≥ 2st + t²` vertices.
pub fn embed_proper_or_mono(coloring: &EdgeColoring, s_tree: &TreeSpec, t_tree: &TreeSpec) -> Certificate {
    let vertices: Vec<usize> = (0..coloring.n()).collect();
    let alive = vec![true; t_tree.vertex_count()];
    match proper_recursive(coloring, s_tree, t_tree, &alive, &vertices) {
        Ok(image) => Certificate::ProperEmbedding { map: image },
        Err(cert) => cert,
    }
}

/// The leaf-bundle removed in one recursion step: internal vertex `v`, its
/// kept neighbor `u`, and the leaves hanging off `v`.
#[derive(Debug, PartialEq, Eq)]
struct LeafBundle {
    v: usize,
    u: usize,
    leaves: Vec<usize>,
}

fn choose_bundle(tree: &TreeSpec, alive: &[bool]) -> LeafBundle {
    let adj: Vec<Vec<usize>> = tree
        .adjacency()
        .into_iter()
        .map(|l| l.into_iter().filter(|&w| alive[w]).collect())
        .collect();
    let root = tree.root();
    let mut depth = vec![usize::MAX; alive.len()];
    let mut parent = vec![usize::MAX; alive.len()];
    depth[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    let v = (0..alive.len())
        .filter(|&x| alive[x] && adj[x].len() >= 2)
        .max_by(|&a, &b| depth[a].cmp(&depth[b]).then(b.cmp(&a)))
        .expect("a tree with at least two edges has an internal vertex");
    if v == root {
        // every internal vertex is the root: the live tree is a star
        let u = adj[v][0];
        return LeafBundle { v, u, leaves: adj[v][1..].to_vec() };
    }
    let u = parent[v];
    LeafBundle { v, u, leaves: adj[v].iter().copied().filter(|&w| w != u).collect() }
}

fn proper_recursive(
    coloring: &EdgeColoring,
    s_tree: &TreeSpec,
    t_tree: &TreeSpec,
    alive: &[bool],
    vertices: &[usize],
) -> std::result::Result<Vec<usize>, Certificate> {
    let live_vertices: Vec<usize> = (0..alive.len()).filter(|&x| alive[x]).collect();
    let t = live_vertices.len() - 1;
    let too_small = || {
        Certificate::failure(
            Stage::ProperRecursion,
            format!("{} vertices cannot host a {t}-edge tree", vertices.len()),
        )
    };
    let mut image = vec![usize::MAX; alive.len()];
    if t <= 1 {
        if vertices.len() < t + 1 {
            return Err(too_small());
        }
        for (i, &x) in live_vertices.iter().enumerate() {
            image[x] = vertices[i];
        }
        return Ok(image);
    }
    let LeafBundle { v, u, leaves } = choose_bundle(t_tree, alive);
    let k = leaves.len();
    let t1 = t - k;
    let s = s_tree.edge_count();
    let constrained = local_constraints_set_within(coloring, vertices, t1, k);
    if constrained.len() > 2 * (k * s + t1) {
        if let Some(cert) = mono_from_constrained_set_within(coloring, vertices, &constrained, s_tree, t1, k) {
            return Err(cert);
        }
    }
    let mut in_constrained = vec![false; coloring.n()];
    for &x in &constrained {
        in_constrained[x] = true;
    }
    let rest: Vec<usize> = vertices.iter().copied().filter(|&x| !in_constrained[x]).collect();
    let mut smaller = alive.to_vec();
    for &leaf in &leaves {
        smaller[leaf] = false;
    }
    let mut image = proper_recursive(coloring, s_tree, t_tree, &smaller, &rest)?;

    let (vi, ui) = (image[v], image[u]);
    let stem = coloring.color(ui, vi);
    let mut occupied = vec![false; coloring.n()];
    for &x in &live_vertices {
        if smaller[x] {
            occupied[image[x]] = true;
        }
    }
    let mut used_colors = vec![stem];
    let mut picked = Vec::with_capacity(k);
    for &w in vertices {
        if picked.len() == k {
            break;
        }
        if occupied[w] {
            continue;
        }
        let c = coloring.color(vi, w);
        if !used_colors.contains(&c) {
            used_colors.push(c);
            picked.push(w);
        }
    }
    if picked.len() < k {
        return Err(Certificate::failure(
            Stage::ProperRecursion,
            format!("vertex {vi} sees only {} fresh colors outside the partial copy, needs {k}", picked.len()),
        ));
    }
    for (&leaf, &w) in leaves.iter().zip(&picked) {
        image[leaf] = w;
    }
    Ok(image)
}

//! Generators for the extremal colorings, plus random and lexical baselines.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coloring::{Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::median_order::PartialOrientation;
use crate::rainbow::structured::{Part, StructuredSubgraph};

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Complete graph on the affine plane `(Z/q)²`, each edge colored by the
/// slope of its line. Vertical lines get the label `q`, slope `m` gets `m`.
pub fn affine_plane_coloring(q: u64) -> Result<EdgeColoring> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("field order {q} must be at least 2")));
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let q = q as usize;
    let inverse: Vec<usize> = (0..q)
        .map(|a| if a == 0 { 0 } else { (1..q).find(|b| a * b % q == 1).expect("field inverse") })
        .collect();
    EdgeColoring::from_fn(q * q, |u, v| {
        let (x1, y1) = (u / q, u % q);
        let (x2, y2) = (v / q, v % q);
        if x1 == x2 {
            q as u32
        } else {
            let dx = (x2 + q - x1) % q;
            let dy = (y2 + q - y1) % q;
            (dy * inverse[dx] % q) as u32
        }
    })
}

/// Induced coloring on a random vertex subset, each vertex kept
/// independently with probability `p`. Vertices keep their relative order.
pub fn subsample(coloring: &EdgeColoring, p: f64, seed: u64) -> Result<EdgeColoring> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kept: Vec<usize> = (0..coloring.n()).filter(|_| rng.gen_bool(p)).collect();
    if kept.len() < 2 {
        return Err(Error::TooFewVertices);
    }
    coloring.induced(&kept)
}

/// Every edge colored independently and uniformly from `k` colors.
pub fn random_coloring(n: usize, k: u32, seed: u64) -> Result<EdgeColoring> {
    if n < 2 {
        return Err(Error::TooFewVertices);
    }
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one color".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    EdgeColoring::from_fn(n, |_, _| rng.gen_range(0..k))
}

/// Edge `{u, v}` gets the color `max(u, v)`, so every color class is a star.
pub fn lexical_coloring(n: usize) -> Result<EdgeColoring> {
    if n < 2 {
        return Err(Error::TooFewVertices);
    }
    EdgeColoring::from_fn(n, |u, v| u.max(v) as u32)
}

/// `t` layers of `⌊s/2⌋` vertices; edges inside layer `i` and from layer `i`
/// to any later layer get color `i` (1-based).
pub fn layered_coloring(s: usize, t: usize) -> Result<EdgeColoring> {
    if s < 2 || t < 1 {
        return Err(Error::InvalidParameter(format!("layered coloring needs s >= 2 and t >= 1, got s={s}, t={t}")));
    }
    let block = s / 2;
    let n = t * block;
    if n < 2 {
        return Err(Error::TooFewVertices);
    }
    EdgeColoring::from_fn(n, |u, v| (u.min(v) / block + 1) as u32)
}

/// Layer (1-based) of a vertex of [`layered_coloring`].
pub fn layer_of(s: usize, v: usize) -> usize {
    v / (s / 2) + 1
}

/// Parameters of the row/column grid whose directed paths are short but
/// which still hides long rainbow paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridConstructionSpec {
    /// Number of row-blocks.
    pub h: usize,
    /// One more than the number of rogue colors (and columns).
    pub t: usize,
    pub s: usize,
    /// Extra vertices outside the grid, each joined to every grid vertex in
    /// that vertex's part color. Zero gives the bare grid.
    pub connectors: usize,
}

impl GridConstructionSpec {
    pub fn new(h: usize, t: usize, s: usize) -> Self {
        GridConstructionSpec { h, t, s, connectors: 0 }
    }

    pub fn with_connectors(mut self, connectors: usize) -> Self {
        self.connectors = connectors;
        self
    }

    pub fn block_size(&self) -> usize {
        (self.s / 3).max(1)
    }

    pub fn columns(&self) -> usize {
        self.t - 1
    }

    pub fn grid_vertex_count(&self) -> usize {
        self.h * self.columns() * self.block_size()
    }

    /// Vertex id of the `j`-th member of block `(row, column)` (0-based).
    pub fn vertex(&self, row: usize, column: usize, j: usize) -> usize {
        (row * self.columns() + column) * self.block_size() + j
    }

    pub fn row_of(&self, v: usize) -> usize {
        v / (self.block_size() * self.columns())
    }

    pub fn column_of(&self, v: usize) -> usize {
        (v / self.block_size()) % self.columns()
    }
}

/// Builds the grid coloring and its structured-subgraph metadata.
///
/// Parts are the blocks `U_{k,i}`. Edges from row `k` to a later row `l`
/// carry the source part's color and are directed downward; edges inside a
/// row between columns `i ≤ j` carry rogue color `r_i`, which also colors the
/// pairs inside block `U_{k,i}`. Connector vertices (if any) follow the grid.
///
/// Labels: part `(k, i)` is `k·(t−1)+i`, rogue `r_i` is `h·(t−1)+i`, and the
/// connector-to-connector color is `h·(t−1)+(t−1)`.
pub fn grid_construction(spec: GridConstructionSpec) -> Result<(EdgeColoring, StructuredSubgraph)> {
    let GridConstructionSpec { h, t, s, connectors } = spec;
    if h < 1 || t < 2 || s < 3 {
        return Err(Error::InvalidParameter(format!(
            "grid construction needs h >= 1, t >= 2, s >= 3, got h={h}, t={t}, s={s}"
        )));
    }
    let cols = spec.columns();
    let grid = spec.grid_vertex_count();
    let n = grid + connectors;
    let rogue_base = (h * cols) as u32;
    let connector_label = rogue_base + cols as u32;
    let part_label = |v: usize| (spec.row_of(v) * cols + spec.column_of(v)) as u32;

    let coloring = EdgeColoring::from_fn(n, |u, v| {
        match (u < grid, v < grid) {
            (true, true) => {
                let (ru, rv) = (spec.row_of(u), spec.row_of(v));
                if ru == rv {
                    rogue_base + spec.column_of(u).min(spec.column_of(v)) as u32
                } else if ru < rv {
                    part_label(u)
                } else {
                    part_label(v)
                }
            }
            (true, false) => part_label(u),
            (false, true) => part_label(v),
            (false, false) => connector_label,
        }
    })?;

    let color_of_label = |label: u32| coloring.color_of_label(label);
    let mut parts = Vec::with_capacity(h * cols);
    for row in 0..h {
        for col in 0..cols {
            let vertices: Vec<usize> = (0..spec.block_size()).map(|j| spec.vertex(row, col, j)).collect();
            // A lone block with no edges never has its label interned.
            let color = color_of_label((row * cols + col) as u32).unwrap_or(Color(u32::MAX - (row * cols + col) as u32));
            parts.push(Part { color, vertices });
        }
    }
    let rogue: Vec<Color> = (0..cols).filter_map(|i| color_of_label(rogue_base + i as u32)).collect();

    let mut orientation = PartialOrientation::new(grid);
    for x in 0..grid {
        for y in (x + 1)..grid {
            let (rx, ry) = (spec.row_of(x), spec.row_of(y));
            if rx < ry {
                orientation.set_directed(x, y);
            } else if spec.column_of(x) != spec.column_of(y) {
                orientation.set_undirected(x, y);
            }
        }
    }
    let ss = StructuredSubgraph::with_orientation(
        n,
        coloring.palette_size(),
        None,
        Vec::new(),
        rogue,
        parts,
        (grid..n).collect(),
        orientation,
    );
    Ok((coloring, ss))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&q| is_prime(q)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn affine_two_is_three_matchings() {
        let c = affine_plane_coloring(2).unwrap();
        assert_eq!((c.n(), c.palette_size()), (4, 3));
        for color in c.palette() {
            let mut deg = [0; 4];
            for u in 0..4 {
                for v in (u + 1)..4 {
                    if c.color(u, v) == color {
                        deg[u] += 1;
                        deg[v] += 1;
                    }
                }
            }
            assert_eq!(deg, [1; 4]);
        }
    }

    #[test]
    fn affine_rejects_bad_orders() {
        assert!(matches!(affine_plane_coloring(4), Err(Error::NotPrime(4))));
        assert!(matches!(affine_plane_coloring(1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn affine_three_local_structure() {
        // 4 lines through each point of AG(2,3), 2 further points on each
        let c = affine_plane_coloring(3).unwrap();
        assert_eq!(c.palette_size(), 4);
        for v in 0..9 {
            let m = c.color_multiplicities_at(v).unwrap();
            assert_eq!(m.len(), 4);
            assert!(m.values().all(|&k| k == 2));
        }
    }

    #[test]
    fn subsample_edges() {
        let c = random_coloring(10, 3, 1).unwrap();
        assert_eq!(subsample(&c, 1.0, 5).unwrap(), c);
        assert!(matches!(subsample(&c, 0.0, 5), Err(Error::TooFewVertices)));
        assert!(subsample(&c, 1.5, 5).is_err());
    }

    #[test]
    fn lexical_small() {
        let c = lexical_coloring(3).unwrap();
        assert_eq!(c.label(0, 1), 1);
        assert_eq!(c.label(0, 2), 2);
        assert_eq!(c.label(1, 2), 2);
        assert_eq!(lexical_coloring(10).unwrap().palette_size(), 9);
    }

    #[test]
    fn layered_singleton_parts() {
        let c = layered_coloring(2, 3).unwrap();
        assert_eq!(c.n(), 3);
        assert_eq!((c.label(0, 1), c.label(0, 2), c.label(1, 2)), (1, 1, 2));
        assert!(layered_coloring(1, 3).is_err());
        assert!(layered_coloring(2, 0).is_err());
    }

    #[test]
    fn layered_colors_at_vertex_are_prefix() {
        let (s, t) = (6, 4);
        let c = layered_coloring(s, t).unwrap();
        for v in 0..c.n() {
            let labels: Vec<u32> = c.color_multiplicities_at(v).unwrap().keys().map(|&k| c.label_of(k)).collect();
            let mut labels = labels;
            labels.sort_unstable();
            let i = layer_of(s, v) as u32;
            assert_eq!(labels, (1..=i).collect::<Vec<_>>());
        }
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(random_coloring(6, 3, 7).unwrap(), random_coloring(6, 3, 7).unwrap());
        assert_eq!(random_coloring(6, 1, 7).unwrap().palette_size(), 1);
    }

    #[test]
    fn grid_trivial_instance() {
        let (c, ss) = grid_construction(GridConstructionSpec::new(1, 2, 3)).unwrap();
        assert_eq!(c.n(), 1);
        assert_eq!(ss.parts.len(), 1);
        assert!(grid_construction(GridConstructionSpec::new(1, 1, 3)).is_err());
    }
}

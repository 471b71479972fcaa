//! Dense edge colorings of complete graphs.
//!
//! Colors are stored as dense ids `0..k` in an upper-triangular array indexed
//! by pair rank. The labels the coloring was built from (or loaded with) are
//! kept in a side table so that saving reproduces the input exactly.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An opaque color id. Only equality is meaningful; the derived ordering is
/// there for deterministic iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Color(pub u32);

impl Color {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Largest vertex count the 32-bit pair indexing is sized for.
pub const MAX_VERTICES: usize = 1 << 16;

const DENSE_LABEL_LIMIT: u32 = 1 << 22;

#[derive(Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    n: usize,
    colors: Vec<u32>,
    labels: Vec<u32>,
}

impl std::fmt::Debug for EdgeColoring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EdgeColoring")
            .field("n", &self.n)
            .field("palette", &self.labels.len())
            .finish()
    }
}

/// Number of unordered pairs of an `n`-set.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Assigns dense ids to labels in order of first appearance.
struct LabelInterner {
    small: Vec<u32>,
    large: HashMap<u32, u32>,
    labels: Vec<u32>,
}

impl LabelInterner {
    fn new() -> Self {
        LabelInterner { small: Vec::new(), large: HashMap::new(), labels: Vec::new() }
    }

    #[inline]
    fn intern(&mut self, label: u32) -> u32 {
        if label < DENSE_LABEL_LIMIT {
            let slot = label as usize;
            if slot >= self.small.len() {
                self.small.resize(slot + 1, u32::MAX);
            }
            if self.small[slot] == u32::MAX {
                self.small[slot] = self.labels.len() as u32;
                self.labels.push(label);
            }
            self.small[slot]
        } else {
            let next = self.labels.len() as u32;
            let id = *self.large.entry(label).or_insert(next);
            if id == next {
                self.labels.push(label);
            }
            id
        }
    }
}

impl EdgeColoring {
    /// Builds a coloring from a labeling function evaluated on every pair
    /// `u < v` in rank order.
    pub fn from_fn<F>(n: usize, mut label_of: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> u32,
    {
        Self::check_order(n)?;
        let mut interner = LabelInterner::new();
        let mut colors = Vec::with_capacity(pair_count(n));
        for u in 0..n {
            for v in (u + 1)..n {
                colors.push(interner.intern(label_of(u, v)));
            }
        }
        Ok(EdgeColoring { n, colors, labels: interner.labels })
    }

    /// Builds a coloring from labels listed in pair rank order.
    pub fn from_labels(n: usize, labels: &[u32]) -> Result<Self> {
        Self::check_order(n)?;
        if labels.len() != pair_count(n) {
            return Err(Error::TriangleLengthMismatch { expected: pair_count(n), found: labels.len() });
        }
        let mut interner = LabelInterner::new();
        let colors = labels.iter().map(|&l| interner.intern(l)).collect();
        Ok(EdgeColoring { n, colors, labels: interner.labels })
    }

    fn check_order(n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidParameter("a coloring needs at least one vertex".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::InvalidParameter(format!("{n} vertices exceeds the supported {MAX_VERTICES}")));
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct colors.
    #[inline]
    pub fn palette_size(&self) -> usize {
        self.labels.len()
    }

    pub fn palette(&self) -> impl Iterator<Item = Color> {
        (0..self.labels.len() as u32).map(Color)
    }

    #[inline]
    pub fn contains_vertex(&self, v: usize) -> bool {
        v < self.n
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Rank of the pair `{u, v}` in the order (0,1),(0,2),…,(n−2,n−1).
    #[inline]
    pub fn pair_index(&self, u: usize, v: usize) -> usize {
        debug_assert!(u != v && u < self.n && v < self.n);
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    #[inline]
    pub fn color(&self, u: usize, v: usize) -> Color {
        Color(self.colors[self.pair_index(u, v)])
    }

    /// Original label of the pair's color.
    #[inline]
    pub fn label(&self, u: usize, v: usize) -> u32 {
        self.labels[self.colors[self.pair_index(u, v)] as usize]
    }

    #[inline]
    pub fn label_of(&self, c: Color) -> u32 {
        self.labels[c.index()]
    }

    pub fn color_of_label(&self, label: u32) -> Option<Color> {
        self.labels.iter().position(|&l| l == label).map(|i| Color(i as u32))
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Calls `f(w, color(v, w))` for every `w ≠ v` in increasing order of `w`.
    #[inline]
    pub fn for_each_edge_at<F: FnMut(usize, Color)>(&self, v: usize, mut f: F) {
        let n = self.n;
        for w in 0..v {
            let idx = w * (2 * n - w - 1) / 2 + (v - w - 1);
            f(w, Color(self.colors[idx]));
        }
        if v + 1 < n {
            let start = v * (2 * n - v - 1) / 2;
            for (off, &c) in self.colors[start..start + (n - v - 1)].iter().enumerate() {
                f(v + 1 + off, Color(c));
            }
        }
    }

    /// Number of edges of each color at `v`.
    pub fn color_multiplicities_at(&self, v: usize) -> Result<BTreeMap<Color, usize>> {
        self.check_vertex(v)?;
        let mut out = BTreeMap::new();
        self.for_each_edge_at(v, |_, c| *out.entry(c).or_insert(0) += 1);
        Ok(out)
    }

    /// Induced coloring on `vertices` (renumbered in the given order).
    /// Labels carry over unchanged.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        EdgeColoring::from_fn(vertices.len(), |a, b| self.label(vertices[a], vertices[b]))
    }

    /// Label sequence in pair rank order, as written to disk.
    pub fn label_triangle(&self) -> impl Iterator<Item = u32> + '_ {
        self.colors.iter().map(move |&c| self.labels[c as usize])
    }

    /// Writes the `KCOLOR 1 <n>` text format.
    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "KCOLOR 1 {}", self.n)?;
        let mut first = true;
        for label in self.label_triangle() {
            if first {
                write!(sink, "{label}")?;
                first = false;
            } else {
                write!(sink, " {label}")?;
            }
        }
        writeln!(sink)?;
        sink.flush()?;
        Ok(())
    }

    /// Reads the `KCOLOR 1 <n>` text format.
    pub fn load<R: BufRead>(mut source: R) -> Result<Self> {
        let mut header = String::new();
        source.read_line(&mut header)?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let n = match fields.as_slice() {
            ["KCOLOR", "1", n] => n
                .parse::<usize>()
                .map_err(|_| Error::MalformedHeader(header.trim().to_string()))?,
            _ => return Err(Error::MalformedHeader(header.trim().to_string())),
        };
        if n < 2 {
            return Err(Error::TooFewVertices);
        }
        Self::check_order(n)?;
        let mut body = String::new();
        source.read_to_string(&mut body)?;
        let expected = pair_count(n);
        let mut labels = Vec::with_capacity(expected);
        for tok in body.split_ascii_whitespace() {
            let label: u32 = tok.parse().map_err(|_| Error::InvalidColor(tok.to_string()))?;
            labels.push(label);
        }
        if labels.len() != expected {
            return Err(Error::TriangleLengthMismatch { expected, found: labels.len() });
        }
        EdgeColoring::from_labels(n, &labels)
    }
}

/// Reusable per-vertex color counting over a dense palette.
pub struct MultiplicityScratch {
    counts: Vec<u32>,
    touched: Vec<u32>,
}

impl MultiplicityScratch {
    pub fn new(palette_size: usize) -> Self {
        MultiplicityScratch { counts: vec![0; palette_size], touched: Vec::new() }
    }

    fn reset(&mut self) {
        for &c in &self.touched {
            self.counts[c as usize] = 0;
        }
        self.touched.clear();
    }

    #[inline]
    fn bump(&mut self, c: Color) {
        let slot = &mut self.counts[c.index()];
        if *slot == 0 {
            self.touched.push(c.0);
        }
        *slot += 1;
    }

    /// Multiplicities at `v` over all other vertices, largest first
    /// (ties by color id).
    pub fn sorted_at(&mut self, coloring: &EdgeColoring, v: usize) -> Vec<(Color, u32)> {
        self.reset();
        coloring.for_each_edge_at(v, |_, c| self.bump(c));
        self.drain_sorted()
    }

    /// Multiplicities at `v` counting only edges into `members` (a
    /// membership mask over all vertices).
    pub fn sorted_within(&mut self, coloring: &EdgeColoring, v: usize, members: &[bool]) -> Vec<(Color, u32)> {
        self.reset();
        coloring.for_each_edge_at(v, |w, c| {
            if members[w] {
                self.bump(c)
            }
        });
        self.drain_sorted()
    }

    fn drain_sorted(&mut self) -> Vec<(Color, u32)> {
        let mut out: Vec<(Color, u32)> =
            self.touched.iter().map(|&c| (Color(c), self.counts[c as usize])).collect();
        out.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        out
    }
}

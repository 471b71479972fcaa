//! Relocation-stable vertex orderings of partially directed graphs.
//!
//! A true median order maximizes the number of forward edges, which is
//! NP-hard to find. Everything downstream only needs the feedback property,
//! and that already holds for any ordering where no single vertex can be
//! moved to a better position, so this module computes such local optima.

use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeStatus {
    Absent,
    Undirected,
    Directed { from: usize, to: usize },
}

const ABSENT: u8 = 0;
const UNDIRECTED: u8 = 1;
const LOW_TO_HIGH: u8 = 2;
const HIGH_TO_LOW: u8 = 3;

/// A graph on `0..n` where each pair is absent, undirected, or directed one
/// way.
#[derive(Clone, PartialEq, Eq)]
pub struct PartialOrientation {
    n: usize,
    cells: Vec<u8>,
}

impl std::fmt::Debug for PartialOrientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PartialOrientation(n={})", self.n)
    }
}

impl PartialOrientation {
    pub fn new(n: usize) -> Self {
        PartialOrientation { n, cells: vec![ABSENT; n * n.saturating_sub(1) / 2] }
    }

    /// Tournament where `u → v` iff `points(u, v)` for `u < v`, else `v → u`.
    pub fn tournament_from_fn<F: FnMut(usize, usize) -> bool>(n: usize, mut points: F) -> Self {
        let mut g = PartialOrientation::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if points(u, v) {
                    g.set_directed(u, v);
                } else {
                    g.set_directed(v, u);
                }
            }
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, u: usize, v: usize) -> usize {
        debug_assert!(u != v && u < self.n && v < self.n);
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    pub fn set_directed(&mut self, from: usize, to: usize) {
        let i = self.index(from, to);
        self.cells[i] = if from < to { LOW_TO_HIGH } else { HIGH_TO_LOW };
    }

    pub fn set_undirected(&mut self, u: usize, v: usize) {
        let i = self.index(u, v);
        self.cells[i] = UNDIRECTED;
    }

    pub fn set_absent(&mut self, u: usize, v: usize) {
        let i = self.index(u, v);
        self.cells[i] = ABSENT;
    }

    pub fn status(&self, u: usize, v: usize) -> EdgeStatus {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        match self.cells[self.index(u, v)] {
            UNDIRECTED => EdgeStatus::Undirected,
            LOW_TO_HIGH => EdgeStatus::Directed { from: a, to: b },
            HIGH_TO_LOW => EdgeStatus::Directed { from: b, to: a },
            _ => EdgeStatus::Absent,
        }
    }

    /// True iff the pair is directed `from → to`.
    #[inline]
    pub fn points(&self, from: usize, to: usize) -> bool {
        let cell = self.cells[self.index(from, to)];
        (from < to && cell == LOW_TO_HIGH) || (from > to && cell == HIGH_TO_LOW)
    }

    /// +1 if `x → y`, −1 if `y → x`, 0 otherwise.
    #[inline]
    fn sign(&self, x: usize, y: usize) -> i64 {
        let cell = self.cells[self.index(x, y)];
        match (cell, x < y) {
            (LOW_TO_HIGH, true) | (HIGH_TO_LOW, false) => 1,
            (LOW_TO_HIGH, false) | (HIGH_TO_LOW, true) => -1,
            _ => 0,
        }
    }

    pub fn is_tournament(&self) -> Result<()> {
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !matches!(self.status(u, v), EdgeStatus::Directed { .. }) {
                    return Err(Error::NotATournament(u, v));
                }
            }
        }
        Ok(())
    }

    /// Writes `KORIENT 1 <n>` followed by one code per pair in rank order:
    /// 0 absent, 1 undirected, 2 low → high, 3 high → low.
    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "KORIENT 1 {}", self.n)?;
        let codes: Vec<String> = self.cells.iter().map(|c| c.to_string()).collect();
        writeln!(sink, "{}", codes.join(" "))?;
        sink.flush()?;
        Ok(())
    }

    pub fn load<R: BufRead>(mut source: R) -> Result<Self> {
        let mut header = String::new();
        source.read_line(&mut header)?;
        let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["KORIENT", "1", n] => n.parse::<usize>().map_err(|_| Error::MalformedHeader(header.trim().to_string()))?,
            _ => return Err(Error::MalformedHeader(header.trim().to_string())),
        };
        let mut body = String::new();
        source.read_to_string(&mut body)?;
        let cells = body
            .split_ascii_whitespace()
            .map(|tok| match tok {
                "0" => Ok(ABSENT),
                "1" => Ok(UNDIRECTED),
                "2" => Ok(LOW_TO_HIGH),
                "3" => Ok(HIGH_TO_LOW),
                other => Err(Error::InvalidParameter(format!("orientation code `{other}`"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        let expected = n * n.saturating_sub(1) / 2;
        if cells.len() != expected {
            return Err(Error::TriangleLengthMismatch { expected, found: cells.len() });
        }
        Ok(PartialOrientation { n, cells })
    }

    /// Number of directed edges pointing forward in `order`.
    pub fn forward_count(&self, order: &[usize]) -> usize {
        let mut count = 0;
        for (i, &x) in order.iter().enumerate() {
            for &y in &order[i + 1..] {
                if self.points(x, y) {
                    count += 1;
                }
            }
        }
        count
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MedianOrdering {
    pub order: Vec<usize>,
    pub forward_count: usize,
}

impl MedianOrdering {
    /// `positions[v]` is the index of `v` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

/// Local search from a seeded shuffle of the identity, one restart.
pub fn compute_median_order(g: &PartialOrientation, seed: u64) -> MedianOrdering {
    compute_median_order_with_restarts(g, seed, 1)
}

/// Best of `restarts` independent local searches (at least one).
pub fn compute_median_order_with_restarts(g: &PartialOrientation, seed: u64, restarts: usize) -> MedianOrdering {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<MedianOrdering> = None;
    for _ in 0..restarts.max(1) {
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.shuffle(&mut rng);
        let candidate = relocation_search(g, order);
        if best.as_ref().is_none_or(|b| candidate.forward_count > b.forward_count) {
            best = Some(candidate);
        }
    }
    best.expect("at least one restart")
}

/// First-improvement relocation search from `order`: each vertex in turn is
/// moved to its best position whenever that strictly gains forward edges,
/// until a full pass makes no move.
pub fn relocation_search(g: &PartialOrientation, mut order: Vec<usize>) -> MedianOrdering {
    let n = order.len();
    let mut improved = true;
    while improved {
        improved = false;
        let mut i = 0;
        while i < n {
            let x = order[i];
            let (mut best_gain, mut best_pos) = (0i64, i);
            let mut gain = 0i64;
            for (j, &y) in order.iter().enumerate().skip(i + 1) {
                // x jumps over y: x→y turns backward, y→x turns forward
                gain -= g.sign(x, y);
                if gain > best_gain {
                    best_gain = gain;
                    best_pos = j;
                }
            }
            gain = 0;
            for j in (0..i).rev() {
                gain += g.sign(x, order[j]);
                if gain > best_gain {
                    best_gain = gain;
                    best_pos = j;
                }
            }
            if best_gain > 0 {
                order.remove(i);
                order.insert(best_pos, x);
                improved = true;
            }
            i += 1;
        }
    }
    let forward_count = g.forward_count(&order);
    MedianOrdering { order, forward_count }
}

/// For every `i < k`: forward edges `v_i → v_j` with `i < j ≤ k` are at least
/// as many as backward edges `v_j → v_i`.
pub fn check_feedback_property(g: &PartialOrientation, ord: &MedianOrdering) -> bool {
    let order = &ord.order;
    for (i, &x) in order.iter().enumerate() {
        let mut balance = 0i64;
        for &y in &order[i + 1..] {
            balance += g.sign(x, y);
            if balance < 0 {
                return false;
            }
        }
    }
    true
}

/// Directed Hamiltonian path of a tournament, read off a relocation-stable
/// ordering.
pub fn tournament_hamiltonian_path(g: &PartialOrientation, seed: u64) -> Result<Vec<usize>> {
    g.is_tournament()?;
    let ord = compute_median_order(g, seed);
    debug_assert!(ord.order.windows(2).all(|w| g.points(w[0], w[1])));
    Ok(ord.order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_cycle() -> PartialOrientation {
        let mut g = PartialOrientation::new(3);
        g.set_directed(0, 1);
        g.set_directed(1, 2);
        g.set_directed(2, 0);
        g
    }

    #[test]
    fn transitive_tournament_is_sorted() {
        let g = PartialOrientation::tournament_from_fn(8, |_, _| true);
        for seed in 0..5 {
            let ord = compute_median_order(&g, seed);
            assert_eq!(ord.order, (0..8).collect::<Vec<_>>());
            assert_eq!(ord.forward_count, 28);
        }
        assert_eq!(relocation_search(&g, (0..8).collect()).order, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn three_cycle_has_one_backward_edge() {
        let g = three_cycle();
        for seed in 0..10 {
            let ord = compute_median_order(&g, seed);
            assert_eq!(ord.forward_count, 2);
            assert!(check_feedback_property(&g, &ord));
            let path = tournament_hamiltonian_path(&g, seed).unwrap();
            assert!([[0, 1, 2], [1, 2, 0], [2, 0, 1]].iter().any(|p| p.as_slice() == path));
        }
    }

    #[test]
    fn feedback_fails_on_reversed_edge() {
        let mut g = PartialOrientation::new(2);
        g.set_directed(0, 1);
        let ord = MedianOrdering { order: vec![1, 0], forward_count: 0 };
        assert!(!check_feedback_property(&g, &ord));
    }

    #[test]
    fn undirected_pairs_are_neutral() {
        let mut g = PartialOrientation::new(2);
        g.set_undirected(0, 1);
        for order in [vec![0, 1], vec![1, 0]] {
            assert!(check_feedback_property(&g, &MedianOrdering { order, forward_count: 0 }));
        }
        assert_eq!(compute_median_order(&g, 3).forward_count, 0);
    }

    #[test]
    fn file_round_trip() {
        let mut g = three_cycle();
        g.set_undirected(0, 2);
        let mut buf = Vec::new();
        g.save(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "KORIENT 1 3\n2 1 2\n");
        assert_eq!(PartialOrientation::load(buf.as_slice()).unwrap(), g);
        assert!(PartialOrientation::load("KORIENT 1 3\n2 1\n".as_bytes()).is_err());
        assert!(PartialOrientation::load("KORIENT 1 2\n7\n".as_bytes()).is_err());
    }

    #[test]
    fn status_round_trip() {
        let mut g = PartialOrientation::new(4);
        g.set_directed(3, 1);
        assert_eq!(g.status(1, 3), EdgeStatus::Directed { from: 3, to: 1 });
        assert!(g.points(3, 1) && !g.points(1, 3));
        g.set_undirected(0, 2);
        assert_eq!(g.status(2, 0), EdgeStatus::Undirected);
        assert_eq!(g.status(0, 1), EdgeStatus::Absent);
        assert!(matches!(g.is_tournament(), Err(Error::NotATournament(_, _))));
        assert!(tournament_hamiltonian_path(&g, 0).is_err());
    }
}

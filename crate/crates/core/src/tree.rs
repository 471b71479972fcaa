use std::collections::{BTreeSet, VecDeque};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A tree given by its edge list, with a designated root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSpec {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    root: usize,
}

impl TreeSpec {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>, root: usize) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidTree("a tree needs at least one vertex".into()));
        }
        if root >= vertex_count {
            return Err(Error::InvalidTree(format!("root {root} out of range")));
        }
        if edges.len() + 1 != vertex_count {
            return Err(Error::InvalidTree(format!(
                "{} edges on {} vertices",
                edges.len(),
                vertex_count
            )));
        }
        let mut parent: Vec<usize> = (0..vertex_count).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in &edges {
            if u >= vertex_count || v >= vertex_count || u == v {
                return Err(Error::InvalidTree(format!("bad edge ({u}, {v})")));
            }
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return Err(Error::InvalidTree("edge list contains a cycle".into()));
            }
            parent[a] = b;
        }
        Ok(TreeSpec { vertex_count, edges, root })
    }

    /// Path with `s` edges, rooted at an endpoint.
    pub fn path(s: usize) -> Self {
        let edges = (0..s).map(|i| (i, i + 1)).collect();
        TreeSpec { vertex_count: s + 1, edges, root: 0 }
    }

    /// Star with `s` edges, rooted at the center.
    pub fn star(s: usize) -> Self {
        let edges = (1..=s).map(|i| (0, i)).collect();
        TreeSpec { vertex_count: s + 1, edges, root: 0 }
    }

    /// Spider with the given leg lengths, rooted at the body.
    pub fn spider(legs: &[usize]) -> Self {
        let mut edges = Vec::new();
        let mut next = 1;
        for &len in legs {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        TreeSpec { vertex_count: next, edges, root: 0 }
    }

    /// Parses `path:s`, `star:s` or `spider:a,b,c`.
    pub fn parse_preset(spec: &str) -> Result<Self> {
        let (kind, arg) = spec
            .split_once(':')
            .ok_or_else(|| Error::InvalidTree(format!("unknown tree preset {spec:?}")))?;
        let num = |s: &str| -> Result<usize> {
            s.trim().parse().map_err(|_| Error::InvalidTree(format!("bad number {s:?} in {spec:?}")))
        };
        match kind {
            "path" => Ok(TreeSpec::path(num(arg)?)),
            "star" => Ok(TreeSpec::star(num(arg)?)),
            "spider" => {
                let legs = arg.split(',').map(num).collect::<Result<Vec<_>>>()?;
                Ok(TreeSpec::spider(&legs))
            }
            _ => Err(Error::InvalidTree(format!("unknown tree preset {spec:?}"))),
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn with_root(&self, root: usize) -> Result<Self> {
        TreeSpec::new(self.vertex_count, self.edges.clone(), root)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Breadth-first order from the root as `(vertex, parent)` pairs.
    pub fn bfs_order(&self) -> Vec<(usize, Option<usize>)> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::with_capacity(self.vertex_count);
        let mut queue = VecDeque::from([(self.root, None)]);
        seen[self.root] = true;
        while let Some((v, p)) = queue.pop_front() {
            out.push((v, p));
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back((w, Some(v)));
                }
            }
        }
        out
    }

    /// Parent of every vertex and its depth from the root.
    pub fn parents_and_depths(&self) -> (Vec<Option<usize>>, Vec<usize>) {
        let mut parent = vec![None; self.vertex_count];
        let mut depth = vec![0; self.vertex_count];
        for (v, p) in self.bfs_order() {
            parent[v] = p;
            if let Some(p) = p {
                depth[v] = depth[p] + 1;
            }
        }
        (parent, depth)
    }

    /// Canonical string of the unrooted tree (AHU encoding rooted at the
    /// center, minimized over bicentral choices).
    pub fn canonical_form(&self) -> String {
        let adj = self.adjacency();
        centers(&adj)
            .into_iter()
            .map(|c| ahu(&adj, c, usize::MAX))
            .min()
            .unwrap_or_default()
    }

    /// One representative of every isomorphism class of trees with `edges`
    /// edges, each rooted at vertex 0.
    pub fn all_nonisomorphic(edges: usize) -> Vec<TreeSpec> {
        let m = edges + 1;
        if m <= 2 {
            return vec![TreeSpec::path(edges)];
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut seq = vec![0usize; m - 2];
        loop {
            let tree = from_prufer(&seq, m);
            if seen.insert(tree.canonical_form()) {
                out.push(tree);
            }
            // odometer increment
            let mut i = 0;
            while i < seq.len() {
                seq[i] += 1;
                if seq[i] < m {
                    break;
                }
                seq[i] = 0;
                i += 1;
            }
            if i == seq.len() {
                break;
            }
        }
        out
    }

    /// Text format: `TREE <vertex_count> <root>` followed by one `u v` edge
    /// per line.
    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "TREE {} {}", self.vertex_count, self.root)?;
        for &(u, v) in &self.edges {
            writeln!(sink, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn load<R: BufRead>(source: R) -> Result<Self> {
        let mut lines = source.lines();
        let header = lines.next().transpose()?.unwrap_or_default();
        let fields: Vec<&str> = header.split_whitespace().collect();
        let bad_header = || Error::MalformedHeader(header.trim().to_string());
        let (count, root) = match fields.as_slice() {
            ["TREE", c, r] => (c.parse().map_err(|_| bad_header())?, r.parse().map_err(|_| bad_header())?),
            _ => return Err(bad_header()),
        };
        let mut edges = Vec::new();
        for line in lines {
            let line = line?;
            let nums: Vec<&str> = line.split_whitespace().collect();
            match nums.as_slice() {
                [] => continue,
                [u, v] => {
                    let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::InvalidTree(format!("bad edge line {line:?}")));
                    edges.push((parse(u)?, parse(v)?));
                }
                _ => return Err(Error::InvalidTree(format!("bad edge line {line:?}"))),
            }
        }
        TreeSpec::new(count, edges, root)
    }
}

fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

fn ahu(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v].iter().filter(|&&w| w != parent).map(|&w| ahu(adj, w, v)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn from_prufer(seq: &[usize], m: usize) -> TreeSpec {
    let mut degree = vec![1usize; m];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(m - 1);
    for &x in seq {
        let leaf = (0..m).find(|&v| degree[v] == 1).expect("prufer leaf");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..m).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    TreeSpec { vertex_count: m, edges, root: 0 }
}

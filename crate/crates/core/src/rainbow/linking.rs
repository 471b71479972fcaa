//! Joining directed fragments and rogue matching edges into one rainbow path
//! through connector vertices outside the parts.

use crate::certificate::{verify_certificate, Certificate};
use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};

use super::structured::StructuredSubgraph;

/// Links `paths[0]`, then for each `i ≥ 1` a connector, the matching edge
/// `matching[i-1] = (u_i, v_i)` and `paths[i]` (which must start at `v_i`).
/// Connectors come from `ss.connector_scope`, lowest id first.
pub fn link_fragments(
    coloring: &EdgeColoring,
    ss: &StructuredSubgraph,
    t: usize,
    matching: &[(usize, usize)],
    paths: &[Vec<usize>],
) -> Result<Certificate> {
    let r = matching.len();
    let bad = |msg: String| Err(Error::Precondition(msg));
    if r >= t {
        return bad(format!("{r} matching edges, need fewer than t = {t}"));
    }
    if paths.len() != r + 1 {
        return bad(format!("{} paths for {r} matching edges", paths.len()));
    }
    if paths.iter().any(Vec::is_empty) {
        return bad("empty fragment".into());
    }
    let mut part_used = vec![false; ss.parts.len()];
    let mut claim = |v: usize| -> Result<()> {
        let p = ss.part_index(v).ok_or_else(|| Error::Precondition(format!("vertex {v} is outside the parts")))?;
        if std::mem::replace(&mut part_used[p], true) {
            return Err(Error::Precondition(format!("two fragment vertices share the part of {v}")));
        }
        Ok(())
    };
    for (i, &(u, v)) in matching.iter().enumerate() {
        if paths[i + 1][0] != v {
            return bad(format!("fragment {} does not start at matching vertex {v}", i + 1));
        }
        claim(u)?;
    }
    for path in paths {
        for &v in path {
            claim(v)?;
        }
        if let Some(w) = path.windows(2).find(|w| !ss.points(w[0], w[1])) {
            return bad(format!("fragment edge {}-{} is not directed forward", w[0], w[1]));
        }
    }
    let mut rogue_seen = Vec::with_capacity(r);
    for &(u, v) in matching {
        let c = coloring.color(u, v);
        if !ss.is_rogue(c) || rogue_seen.contains(&c) {
            return bad(format!("matching edge {u}-{v} is not a fresh rogue edge"));
        }
        rogue_seen.push(c);
    }

    let mut used_connector = vec![false; coloring.n()];
    let mut out = paths[0].clone();
    for (i, &(u, _)) in matching.iter().enumerate() {
        let w = *out.last().expect("nonempty");
        let (cw, cu) = (ss.part_color_of(w).expect("member"), ss.part_color_of(u).expect("member"));
        let x = ss
            .connector_scope
            .iter()
            .copied()
            .find(|&x| {
                !used_connector[x] && !ss.contains(x) && coloring.color(w, x) == cw && coloring.color(x, u) == cu
            })
            .ok_or_else(|| Error::Precondition(format!("no connector between {w} and {u}")))?;
        used_connector[x] = true;
        out.push(x);
        out.push(u);
        out.extend_from_slice(&paths[i + 1]);
    }
    let cert = Certificate::RainbowPath { path: out };
    if !verify_certificate(coloring, None, None, &cert).is_valid() {
        return Err(Error::Precondition("linked path is not rainbow".into()));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{grid_construction, GridConstructionSpec};

    #[test]
    fn single_fragment_is_returned_unchanged() {
        let spec = GridConstructionSpec::new(4, 5, 6).with_connectors(5);
        let (c, ss) = grid_construction(spec).unwrap();
        let p = vec![spec.vertex(0, 0, 0), spec.vertex(1, 2, 1), spec.vertex(3, 1, 0)];
        assert_eq!(link_fragments(&c, &ss, 5, &[], &[p.clone()]).unwrap(), Certificate::RainbowPath { path: p });
    }

    #[test]
    fn two_rogue_edges_three_paths() {
        let spec = GridConstructionSpec::new(4, 5, 6).with_connectors(5);
        let (c, ss) = grid_construction(spec).unwrap();
        let g = |r, col| spec.vertex(r, col, 0);
        let matching = vec![(g(1, 0), g(1, 1)), (g(2, 2), g(2, 3))];
        let paths = vec![vec![g(0, 0), g(3, 0)], vec![g(1, 1), g(2, 1)], vec![g(2, 3), g(3, 3)]];
        let cert = link_fragments(&c, &ss, 5, &matching, &paths).unwrap();
        let Certificate::RainbowPath { path } = &cert else { panic!() };
        assert_eq!(path.len() - 1, 2 + 3 + 4);
        assert!(verify_certificate(&c, None, Some(9), &cert).is_valid());
    }

    #[test]
    fn preconditions() {
        let spec = GridConstructionSpec::new(3, 3, 3).with_connectors(3);
        let (c, ss) = grid_construction(spec).unwrap();
        let g = |r, col| spec.vertex(r, col, 0);
        let m = vec![(g(0, 0), g(0, 1)); 3];
        assert!(link_fragments(&c, &ss, 3, &m, &[vec![g(1, 0)], vec![g(0, 1)], vec![g(0, 1)], vec![g(0, 1)]]).is_err());
        // backward edge
        assert!(link_fragments(&c, &ss, 3, &[], &[vec![g(1, 0), g(0, 1)]]).is_err());
        // shared part
        assert!(link_fragments(&c, &ss, 3, &[(g(0, 0), g(0, 1))], &[vec![g(0, 0)], vec![g(0, 1)]]).is_err());
    }
}

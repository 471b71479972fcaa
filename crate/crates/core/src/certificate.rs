//! Certificates and their verification.
//!
//! Certificates carry explicit vertex maps, so checking one never depends on
//! how it was produced.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::tree::TreeSpec;

/// Pipeline stage that produced a `Failure`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Robust,
    Structure,
    Prune,
    Matching,
    Dyadic,
    Extend,
    Randomized,
    Link,
    ProperRecursion,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Robust => "robust",
            Stage::Structure => "structure",
            Stage::Prune => "prune",
            Stage::Matching => "matching",
            Stage::Dyadic => "dyadic",
            Stage::Extend => "extend",
            Stage::Randomized => "randomized",
            Stage::Link => "link",
            Stage::ProperRecursion => "proper-recursion",
        }
    }

    pub fn parse(s: &str) -> Option<Stage> {
        [
            Stage::Robust,
            Stage::Structure,
            Stage::Prune,
            Stage::Matching,
            Stage::Dyadic,
            Stage::Extend,
            Stage::Randomized,
            Stage::Link,
            Stage::ProperRecursion,
        ]
        .into_iter()
        .find(|st| st.as_str() == s)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `map[i]` is the image of tree vertex `i`; every tree edge has `color`.
    MonoEmbedding { color: Color, map: Vec<usize> },
    RainbowPath { path: Vec<usize> },
    /// `map[i]` is the image of tree vertex `i`.
    ProperEmbedding { map: Vec<usize> },
    Failure { stage: Stage, reason: String },
}

impl Certificate {
    pub fn failure(stage: Stage, reason: impl Into<String>) -> Self {
        Certificate::Failure { stage, reason: reason.into() }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Certificate::Failure { .. })
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Certificate::MonoEmbedding { .. } => "MonoEmbedding",
            Certificate::RainbowPath { .. } => "RainbowPath",
            Certificate::ProperEmbedding { .. } => "ProperEmbedding",
            Certificate::Failure { .. } => "Failure",
        }
    }

    /// Serializable form, with the color written as its original label.
    pub fn to_document(&self, coloring: &EdgeColoring) -> CertificateDocument {
        let mut doc = CertificateDocument { variant: self.variant_name().to_string(), ..Default::default() };
        match self {
            Certificate::MonoEmbedding { color, map } => {
                doc.color = Some(coloring.label_of(*color));
                doc.map = Some(map.clone());
            }
            Certificate::RainbowPath { path } => doc.path = Some(path.clone()),
            Certificate::ProperEmbedding { map } => doc.map = Some(map.clone()),
            Certificate::Failure { stage, reason } => {
                doc.stage = Some(stage.as_str().to_string());
                doc.reason = Some(reason.clone());
            }
        }
        doc
    }

    /// Inverse of [`Certificate::to_document`]. A color label absent from the
    /// coloring maps to an id that no edge carries, so verification rejects it.
    pub fn from_document(doc: &CertificateDocument, coloring: &EdgeColoring) -> Result<Self> {
        let missing = |field: &str| Error::InvalidParameter(format!("{} certificate lacks `{field}`", doc.variant));
        Ok(match doc.variant.as_str() {
            "MonoEmbedding" => {
                let label = doc.color.ok_or_else(|| missing("color"))?;
                let color = coloring.color_of_label(label).unwrap_or(Color(u32::MAX));
                Certificate::MonoEmbedding { color, map: doc.map.clone().ok_or_else(|| missing("map"))? }
            }
            "RainbowPath" => Certificate::RainbowPath { path: doc.path.clone().ok_or_else(|| missing("path"))? },
            "ProperEmbedding" => Certificate::ProperEmbedding { map: doc.map.clone().ok_or_else(|| missing("map"))? },
            "Failure" => {
                let stage = doc.stage.as_deref().ok_or_else(|| missing("stage"))?;
                Certificate::Failure {
                    stage: Stage::parse(stage)
                        .ok_or_else(|| Error::InvalidParameter(format!("unknown stage {stage:?}")))?,
                    reason: doc.reason.clone().unwrap_or_default(),
                }
            }
            other => return Err(Error::InvalidParameter(format!("unknown certificate variant {other:?}"))),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub variant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    MissingTarget,
    FailureCertificate,
    MapLength { expected: usize, found: usize },
    VertexOutOfRange(usize),
    NotInjective(usize),
    WrongColor { edge: (usize, usize) },
    RepeatedColor { edge: (usize, usize) },
    AdjacentSameColor { at: usize },
    TooShort { edges: usize, required: usize },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::MissingTarget => write!(f, "missing-target"),
            Rejection::FailureCertificate => write!(f, "failure-certificate"),
            Rejection::MapLength { expected, found } => write!(f, "map-length: expected {expected}, found {found}"),
            Rejection::VertexOutOfRange(v) => write!(f, "vertex-out-of-range: {v}"),
            Rejection::NotInjective(v) => write!(f, "not-injective: vertex {v} used twice"),
            Rejection::WrongColor { edge } => write!(f, "wrong-color: edge {edge:?}"),
            Rejection::RepeatedColor { edge } => write!(f, "repeated-color: edge {edge:?}"),
            Rejection::AdjacentSameColor { at } => write!(f, "adjacent-same-color: at tree vertex {at}"),
            Rejection::TooShort { edges, required } => write!(f, "too-short: {edges} edges, need {required}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Rejection),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

fn check_map(coloring: &EdgeColoring, tree: &TreeSpec, map: &[usize]) -> Option<Rejection> {
    if map.len() != tree.vertex_count() {
        return Some(Rejection::MapLength { expected: tree.vertex_count(), found: map.len() });
    }
    let mut used = HashSet::with_capacity(map.len());
    for &v in map {
        if v >= coloring.n() {
            return Some(Rejection::VertexOutOfRange(v));
        }
        if !used.insert(v) {
            return Some(Rejection::NotInjective(v));
        }
    }
    None
}

/// Checks `cert` against the coloring and the supplied targets: the tree for
/// embeddings and, optionally, the required number of path edges.
pub fn verify_certificate(
    coloring: &EdgeColoring,
    tree: Option<&TreeSpec>,
    t: Option<usize>,
    cert: &Certificate,
) -> Verdict {
    let reject = Verdict::Invalid;
    match cert {
        Certificate::Failure { .. } => reject(Rejection::FailureCertificate),
        Certificate::MonoEmbedding { color, map } => {
            let Some(tree) = tree else { return reject(Rejection::MissingTarget) };
            if let Some(r) = check_map(coloring, tree, map) {
                return reject(r);
            }
            for &(a, b) in tree.edges() {
                if coloring.color(map[a], map[b]) != *color {
                    return reject(Rejection::WrongColor { edge: (a, b) });
                }
            }
            Verdict::Valid
        }
        Certificate::ProperEmbedding { map } => {
            let Some(tree) = tree else { return reject(Rejection::MissingTarget) };
            if let Some(r) = check_map(coloring, tree, map) {
                return reject(r);
            }
            let adj = tree.adjacency();
            for (x, nbrs) in adj.iter().enumerate() {
                let mut seen = HashSet::with_capacity(nbrs.len());
                for &y in nbrs {
                    if !seen.insert(coloring.color(map[x], map[y])) {
                        return reject(Rejection::AdjacentSameColor { at: x });
                    }
                }
            }
            Verdict::Valid
        }
        Certificate::RainbowPath { path } => {
            let mut used = HashSet::with_capacity(path.len());
            for &v in path {
                if v >= coloring.n() {
                    return reject(Rejection::VertexOutOfRange(v));
                }
                if !used.insert(v) {
                    return reject(Rejection::NotInjective(v));
                }
            }
            let mut colors = HashSet::with_capacity(path.len());
            for w in path.windows(2) {
                if !colors.insert(coloring.color(w[0], w[1])) {
                    return reject(Rejection::RepeatedColor { edge: (w[0], w[1]) });
                }
            }
            let edges = path.len().saturating_sub(1);
            match t {
                Some(required) if edges < required => reject(Rejection::TooShort { edges, required }),
                _ => Verdict::Valid,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(n: usize) -> EdgeColoring {
        EdgeColoring::from_fn(n, |_, _| 0).unwrap()
    }

    fn rainbow(n: usize) -> EdgeColoring {
        EdgeColoring::from_fn(n, |u, v| (u * 100 + v) as u32).unwrap()
    }

    #[test]
    fn mono_path_on_k3() {
        let c = mono(3);
        let cert = Certificate::MonoEmbedding { color: Color(0), map: vec![2, 0, 1] };
        assert!(verify_certificate(&c, Some(&TreeSpec::path(2)), None, &cert).is_valid());
        assert_eq!(
            verify_certificate(&c, None, None, &cert),
            Verdict::Invalid(Rejection::MissingTarget)
        );
        let dup = Certificate::MonoEmbedding { color: Color(0), map: vec![2, 0, 2] };
        assert_eq!(
            verify_certificate(&c, Some(&TreeSpec::path(2)), None, &dup),
            Verdict::Invalid(Rejection::NotInjective(2))
        );
    }

    #[test]
    fn rainbow_hamiltonian_k4() {
        let c = rainbow(4);
        let cert = Certificate::RainbowPath { path: vec![3, 1, 0, 2] };
        assert!(verify_certificate(&c, None, Some(3), &cert).is_valid());
        assert_eq!(
            verify_certificate(&c, None, Some(4), &cert),
            Verdict::Invalid(Rejection::TooShort { edges: 3, required: 4 })
        );
    }

    #[test]
    fn repeated_color_rejected() {
        let c = mono(4);
        let cert = Certificate::RainbowPath { path: vec![0, 1, 2] };
        assert!(matches!(verify_certificate(&c, None, None, &cert), Verdict::Invalid(Rejection::RepeatedColor { .. })));
    }

    #[test]
    fn proper_star() {
        let c = rainbow(5);
        let cert = Certificate::ProperEmbedding { map: vec![0, 1, 2, 3] };
        assert!(verify_certificate(&c, Some(&TreeSpec::star(3)), None, &cert).is_valid());
        let m = mono(5);
        assert!(!verify_certificate(&m, Some(&TreeSpec::star(3)), None, &cert).is_valid());
        // a 2-edge path in a monochromatic graph is not proper either
        let p = Certificate::ProperEmbedding { map: vec![0, 1, 2] };
        assert!(!verify_certificate(&m, Some(&TreeSpec::path(2)), None, &p).is_valid());
        // but a single edge always is
        let e = Certificate::ProperEmbedding { map: vec![3, 1] };
        assert!(verify_certificate(&m, Some(&TreeSpec::path(1)), None, &e).is_valid());
    }

    #[test]
    fn failure_never_verifies() {
        let c = mono(3);
        let cert = Certificate::failure(Stage::Dyadic, "no gap");
        assert_eq!(verify_certificate(&c, None, None, &cert), Verdict::Invalid(Rejection::FailureCertificate));
    }

    #[test]
    fn document_round_trip_uses_labels() {
        let c = EdgeColoring::from_labels(3, &[17, 17, 17]).unwrap();
        let cert = Certificate::MonoEmbedding { color: Color(0), map: vec![0, 1, 2] };
        let doc = cert.to_document(&c);
        assert_eq!(doc.color, Some(17));
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(json, r#"{"variant":"MonoEmbedding","color":17,"map":[0,1,2]}"#);
        let back: CertificateDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(Certificate::from_document(&back, &c).unwrap(), cert);

        let f = Certificate::failure(Stage::ProperRecursion, "too small");
        assert_eq!(Certificate::from_document(&f.to_document(&c), &c).unwrap(), f);
    }
}

//! Every numeric threshold of the extraction pipeline in one table.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Multipliers and divisors of the pipeline. Quantities written `k·st` are
/// `k * s * t`; `n/d` thresholds are rounded up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constants {
    /// Minimum `n / st` for the structured-subgraph step.
    pub structured_min_factor: usize,
    /// Robust vertices keep `⌈n / robust_divisor⌉` edges after removing any `t` colors.
    pub robust_divisor: usize,
    /// Heavy rogue incidence means at least `⌈n / heavy_rogue_divisor⌉` rogue edges.
    pub heavy_rogue_divisor: usize,
    /// More than `heavy_set_factor·st` heavy vertices forces a dense rogue class.
    pub heavy_set_factor: usize,
    /// Parts stay below `part_factor·s` vertices.
    pub part_factor: usize,
    /// Vertices with rogue degree at least `rogue_degree_factor·st` are pruned.
    pub rogue_degree_factor: usize,
    /// Forward-edge window after a path end, `window_factor·st` positions.
    pub window_factor: usize,
    /// Length of the tail block sampled by the randomized extension.
    pub tail_factor: usize,
    /// Minimal gap between consecutive dyadic anchors.
    pub gap_factor: usize,
    /// Pruned size below which no dyadic gap is guaranteed, times `log₂ t`.
    pub reduced_size_factor: usize,
    /// Each bin is activated with probability `1 / activation_denominator`.
    pub activation_denominator: usize,
    /// The bad set overflows at `overflow_factor·st` vertices.
    pub overflow_factor: usize,
    /// Strict mode needs `n ≥ strict_size_factor·st·⌈log₂ max(t, 2)⌉`.
    pub strict_size_factor: usize,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            structured_min_factor: 310,
            robust_divisor: 5,
            heavy_rogue_divisor: 15,
            heavy_set_factor: 30,
            part_factor: 2,
            rogue_degree_factor: 4,
            window_factor: 8,
            tail_factor: 168,
            gap_factor: 176,
            reduced_size_factor: 180,
            activation_denominator: 8,
            overflow_factor: 2,
            strict_size_factor: 3600,
        }
    }
}

impl Constants {
    pub fn is_default(&self) -> bool {
        *self == Constants::default()
    }

    /// Hex SHA-256 of the table's canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("constants serialize");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Smallest `n` accepted in strict mode.
    pub fn strict_min_n(&self, s: usize, t: usize) -> usize {
        self.strict_size_factor * s * t * ceil_log2(t.max(2))
    }
}

/// `⌈log₂ x⌉` for `x ≥ 1`.
pub fn ceil_log2(x: usize) -> usize {
    assert!(x >= 1);
    (usize::BITS - (x - 1).leading_zeros()) as usize
}

/// `⌈a / b⌉`.
pub fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Default retry budget of the randomized extension, `64·⌈log₂(t+1)⌉`.
pub fn default_max_retries(t: usize) -> usize {
    64 * ceil_log2(t + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logs() {
        assert_eq!((1..=9).map(ceil_log2).collect::<Vec<_>>(), vec![0, 1, 2, 2, 3, 3, 3, 3, 4]);
        assert_eq!(default_max_retries(2), 128);
        assert_eq!(default_max_retries(7), 192);
    }

    #[test]
    fn strict_gate_values() {
        let c = Constants::default();
        assert_eq!(c.strict_min_n(2, 2), 14400);
        assert_eq!(c.strict_min_n(1, 1), 3600);
        assert_eq!(c.strict_min_n(1, 5), 3600 * 5 * 3);
    }

    #[test]
    fn hash_tracks_changes() {
        let a = Constants::default();
        let mut b = a;
        b.gap_factor = 10;
        assert_eq!(a.hash(), Constants::default().hash());
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}

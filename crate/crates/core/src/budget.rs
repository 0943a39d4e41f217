//! Enumeration budgets. Every exhaustive search checks its size against one of
//! these before starting, so oversized requests fail fast instead of hanging.

/// Environment variable holding a multiplier applied to every default budget.
pub const BUDGET_ENV: &str = "RINGCOVER_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest ring order accepted by the generic subring/ideal/isomorphism code.
    pub ring_order: usize,
    /// Largest matrix-ring size q^(n^2) scanned element by element.
    pub matrix_elements: u64,
    /// Largest number of candidate subrings handed to the exact cover solver.
    pub cover_candidates: usize,
    /// Largest |GL(n,q)| iterated over explicitly.
    pub group_elements: u64,
    /// Largest number of vectors q^n (or field elements) enumerated.
    pub vectors: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            ring_order: 256,
            matrix_elements: 1_000_000,
            cover_candidates: 64,
            group_elements: 100_000,
            vectors: 1_000_000,
        }
    }
}

impl Budget {
    pub fn scaled(factor: u64) -> Self {
        let d = Budget::default();
        let f = factor.max(1);
        Budget {
            ring_order: d.ring_order.saturating_mul(f as usize),
            matrix_elements: d.matrix_elements.saturating_mul(f),
            cover_candidates: d.cover_candidates.saturating_mul(f as usize),
            group_elements: d.group_elements.saturating_mul(f),
            vectors: d.vectors.saturating_mul(f),
        }
    }

    /// Default budget, scaled by `RINGCOVER_BUDGET` when it parses as a positive integer.
    pub fn from_env() -> Self {
        match std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
        {
            Some(f) if f > 1 => Budget::scaled(f),
            _ => Budget::default(),
        }
    }
}

//! Work limits for the exhaustive routines.

/// Budgets checked before any exponential enumeration starts. Exceeding one
/// yields [`Error::CapExceeded`](crate::Error::CapExceeded).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Members or subsets visited while computing minimal supports.
    pub enumeration: u64,
    /// Largest ground set for the matroid certificate check.
    pub matroid_ground: usize,
    /// Partitions visited by the O2 sweep (`|E| * 2^(|E|-1)`).
    pub o2_sweep: u64,
    /// Subset scans in the O3 / IM checks.
    pub axiom_scan: u64,
    /// Positions of a generated game.
    pub game_positions: u64,
    /// Plays materialised in a strategy.
    pub strategy_plays: u64,
    /// Local combinations tried while enumerating pre-vectors.
    pub prevector_work: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 1 << 20,
            matroid_ground: 12,
            o2_sweep: 59_049,
            axiom_scan: 1 << 22,
            game_positions: 200_000,
            strategy_plays: 1 << 20,
            prevector_work: 1 << 24,
        }
    }
}

impl Caps {
    /// No limits at all.
    pub fn unlimited() -> Self {
        Caps {
            enumeration: u64::MAX,
            matroid_ground: 64,
            o2_sweep: u64::MAX,
            axiom_scan: u64::MAX,
            game_positions: u64::MAX,
            strategy_plays: u64::MAX,
            prevector_work: u64::MAX,
        }
    }
}

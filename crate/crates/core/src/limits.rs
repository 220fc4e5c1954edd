/// Caps and budgets shared by the search procedures.
///
/// Every exhaustive step in the crate is bounded by one of these numbers; when
/// a bound is hit the step reports a budget or too-large error instead of
/// returning a possibly wrong answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order enumerated element by element.
    pub enumeration_cap: u64,
    /// Random samples used when a group is too large to enumerate.
    pub sample_count: usize,
    /// Largest degree for which the n x n pair-colour table is built.
    pub pair_table_cap: usize,
    /// Largest degree handed to the automorphism search.
    pub oracle_cap: usize,
    /// Largest matrix span scanned for units.
    pub unit_scan_cap: u64,
    /// Largest affine semilinear group enumerated by the small-groups branch.
    pub agl_cap: u64,
    /// Seed of the deterministic random source.
    pub seed: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration_cap: 200_000,
            sample_count: 512,
            pair_table_cap: 20_000,
            oracle_cap: 256,
            unit_scan_cap: 1 << 16,
            agl_cap: 1 << 22,
            seed: 0x5eed_2c10,
        }
    }
}

impl Limits {
    pub fn rng(&self) -> rand_chacha::ChaCha8Rng {
        use rand::SeedableRng;
        rand_chacha::ChaCha8Rng::seed_from_u64(self.seed)
    }
}

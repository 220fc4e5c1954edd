//! Permutations, stabilizer chains and the standard permutation-group toolkit.

mod blocks;
mod chain;
mod group;
mod normal;
mod orbital;
mod permutation;

pub use blocks::{finest_blocks_joining, is_primitive, minimal_blocks, BlockResult, BlockSystem};
pub use group::{Enumeration, PermutationGroup};
pub use normal::{
    centralizer_in_symmetric, intersect_small, is_simple_nonabelian, minimal_normal_subgroup, minimize_normal,
    prime_order_powers, socle_primitive, NORMAL_SCAN_CAP,
};
pub use orbital::{two_orbits, OrbitalStructure};
pub use permutation::Permutation;

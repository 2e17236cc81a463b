//! Seeded benchmark workloads.

use fabc_core::harness::{generate, Family, GenConfig};
use fabc_core::Nbw;

/// `count` automata with exactly `n` states, seeds `seed..seed + count`.
pub fn instances(family: Family, n: usize, count: u64, seed: u64) -> Vec<Nbw> {
    (seed..seed + count).map(|s| generate(&GenConfig::new(n, family, s)).expect("default configs generate")).collect()
}

pub fn fanbw(n: usize, count: u64) -> Vec<Nbw> {
    instances(Family::FanbwFiltered, n, count, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_are_reproducible() {
        let a = fanbw(4, 3);
        assert_eq!(a.len(), 3);
        assert!(a.iter().all(|x| x.state_count() == 4));
        assert_eq!(a, fanbw(4, 3));
    }
}

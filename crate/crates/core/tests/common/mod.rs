#![allow(dead_code)]

use proptest::prelude::*;
use queens_core::{unattacked, PartialConfig};

/// Places queens greedily, the `i`-th on `free[picks[i] % free.len()]`, until
/// the picks or the free squares run out.
pub fn config_from_picks(n: usize, picks: &[u32]) -> PartialConfig {
    let mut cfg = PartialConfig::empty(n).unwrap();
    for &p in picks {
        let free = unattacked(&cfg);
        if free.is_empty() {
            break;
        }
        cfg = cfg.with_queen(free[p as usize % free.len()]).unwrap();
    }
    cfg
}

pub fn arb_config(sizes: std::ops::RangeInclusive<usize>, max_queens: usize) -> impl Strategy<Value = PartialConfig> {
    (sizes, prop::collection::vec(any::<u32>(), 0..=max_queens))
        .prop_map(|(n, picks)| config_from_picks(n, &picks))
}

//! Rank loads and the balance efficiency metric.

use crate::{Error, Result};

/// Per-rank load totals for one distribution map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadProfile {
    pub loads: Vec<u64>,
    pub max_load: u64,
    pub total_weight: u64,
}

/// One algorithm's result on one instance: efficiency, loads, and the wall
/// time of the partitioner call alone.
#[derive(Debug, Clone)]
pub struct EfficiencyReport {
    pub efficiency: f64,
    pub load_profile: LoadProfile,
    pub algorithm: String,
    pub wall_time: f64,
}

/// Sums assigned box weights per rank.
pub fn compute_loads(map: &[u32], weights: &[u64], rank_count: usize) -> Result<LoadProfile> {
    if map.len() != weights.len() {
        return Err(Error::MapLengthMismatch {
            map_len: map.len(),
            weights_len: weights.len(),
        });
    }
    let mut loads = vec![0u64; rank_count];
    for (&r, &w) in map.iter().zip(weights) {
        let slot = loads
            .get_mut(r as usize)
            .ok_or(Error::RankOutOfRange { rank: r, rank_count })?;
        *slot += w;
    }
    let max_load = loads.iter().copied().max().unwrap_or(0);
    let total_weight = loads.iter().sum();
    Ok(LoadProfile {
        loads,
        max_load,
        total_weight,
    })
}

/// Balance efficiency: average load per rank over the maximum load.
/// 1.0 is a perfect balance; always <= 1.
pub fn efficiency(profile: &LoadProfile, rank_count: usize) -> Result<f64> {
    if profile.max_load == 0 {
        return Err(Error::ZeroMaxLoad);
    }
    Ok(profile.total_weight as f64 / rank_count as f64 / profile.max_load as f64)
}

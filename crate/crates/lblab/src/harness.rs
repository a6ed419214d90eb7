//! Statistical study driver: sweeps topologies, weight distributions, and
//! algorithms; collects per-trial efficiency and timing records; writes
//! trials.csv, summary.csv and config.json.

use crate::balancers::{
    combined_partition, knapsack_partition, painters_partition, sfc_percentage_partition,
    PartitionProblem, SfcVariant, Topology,
};
use crate::geometry::{make_box_array, sfc_order};
use crate::metrics::{compute_loads, efficiency};
use crate::weights::{generate_weights, WeightDistribution, GENERATOR_ID};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Knapsack,
    Sfc,
    Painters,
    CombinedSfc,
    CombinedPainters,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Knapsack,
        Algorithm::Sfc,
        Algorithm::Painters,
        Algorithm::CombinedSfc,
        Algorithm::CombinedPainters,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Knapsack => "knapsack",
            Algorithm::Sfc => "sfc",
            Algorithm::Painters => "painters",
            Algorithm::CombinedSfc => "combined-sfc",
            Algorithm::CombinedPainters => "combined-painters",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "knapsack" => Ok(Algorithm::Knapsack),
            "sfc" => Ok(Algorithm::Sfc),
            "painters" => Ok(Algorithm::Painters),
            "combined-sfc" => Ok(Algorithm::CombinedSfc),
            "combined-painters" => Ok(Algorithm::CombinedPainters),
            other => Err(format!(
                "unknown algorithm '{other}' (expected knapsack|sfc|painters|combined-sfc|combined-painters)"
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub node_counts: Vec<usize>,
    pub ranks_per_node: usize,
    pub boxes_per_rank: Vec<usize>,
    pub std_devs: Vec<f64>,
    pub mean: f64,
    pub trials: usize,
    pub base_seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub domain_extent: [u32; 3],
    pub serial: bool,
}

impl ExperimentConfig {
    /// The full study configuration: nodes 1..512 by factors of 2, 4 ranks
    /// per node, 4/8/16 boxes per rank, the three std-dev presets, 250
    /// trials, all five approximation algorithms on a 256^3 domain.
    pub fn paper_preset(base_seed: u64) -> Self {
        Self {
            node_counts: (0..=9).map(|i| 1usize << i).collect(),
            ranks_per_node: 4,
            boxes_per_rank: vec![4, 8, 16],
            std_devs: vec![
                crate::weights::SMALL_STD_DEV,
                crate::weights::MEDIUM_STD_DEV,
                crate::weights::LARGE_STD_DEV,
            ],
            mean: crate::weights::STUDY_MEAN,
            trials: 250,
            base_seed,
            algorithms: Algorithm::ALL.to_vec(),
            domain_extent: [256, 256, 256],
            serial: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub algorithm: Algorithm,
    pub node_count: usize,
    pub ranks_per_node: usize,
    pub boxes_per_rank: usize,
    pub std_dev: f64,
    pub trial: usize,
    pub seed: u64,
    pub total_weight: u64,
    pub max_load: u64,
    pub efficiency: f64,
    pub partition_time_s: f64,
    pub ordering_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub algorithm: Algorithm,
    pub node_count: usize,
    pub ranks_per_node: usize,
    pub boxes_per_rank: usize,
    pub std_dev: f64,
    pub trials: usize,
    pub mean_efficiency: f64,
    pub std_efficiency: f64,
    pub mean_partition_time_s: f64,
    pub std_partition_time_s: f64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Per-trial seed: the base seed folded with the topology point, the
/// distribution, and the trial index through splitmix64, so trials can run
/// in any order and still see identical weight vectors.
pub fn mix_seed(
    base_seed: u64,
    node_count: u64,
    boxes_per_rank: u64,
    std_dev: f64,
    trial: u64,
) -> u64 {
    let mut h = base_seed;
    for v in [node_count, boxes_per_rank, std_dev.to_bits(), trial] {
        h = splitmix64(h ^ v);
    }
    h
}

fn run_algorithm(
    algorithm: Algorithm,
    problem: &PartitionProblem,
    topology: Topology,
) -> Result<Vec<u32>> {
    match algorithm {
        Algorithm::Knapsack => knapsack_partition(problem),
        Algorithm::Sfc => sfc_percentage_partition(problem),
        Algorithm::Painters => painters_partition(problem),
        Algorithm::CombinedSfc => combined_partition(problem, topology, SfcVariant::Percentage),
        Algorithm::CombinedPainters => combined_partition(problem, topology, SfcVariant::Painters),
    }
}

/// Runs the full sweep. Every algorithm within a trial consumes the
/// identical weight vector; output is deterministic for a fixed config
/// apart from the timing columns. Infeasible topology points are skipped
/// with a warning on stderr.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    let mut records: Vec<TrialRecord> = Vec::new();
    for &node_count in &config.node_counts {
        let ranks = node_count * config.ranks_per_node;
        let topology = Topology {
            node_count,
            ranks_per_node: config.ranks_per_node,
        };
        for &boxes_per_rank in &config.boxes_per_rank {
            let boxes = ranks * boxes_per_rank;
            let box_array = match make_box_array(config.domain_extent, boxes as u64) {
                Ok(ba) => ba,
                Err(e) => {
                    eprintln!(
                        "warning: skipping {node_count} nodes x {boxes_per_rank} boxes/rank: {e}"
                    );
                    continue;
                }
            };
            let t0 = Instant::now();
            let order = sfc_order(&box_array)?;
            let ordering_time_s = t0.elapsed().as_secs_f64();

            for &std_dev in &config.std_devs {
                let run_trial = |trial: usize| -> Result<Vec<TrialRecord>> {
                    let seed = mix_seed(
                        config.base_seed,
                        node_count as u64,
                        boxes_per_rank as u64,
                        std_dev,
                        trial as u64,
                    );
                    let dist = WeightDistribution {
                        mean: config.mean,
                        std_dev,
                        seed,
                    };
                    let weights = generate_weights(&dist, boxes);
                    let problem = PartitionProblem::with_order(&weights, ranks, &order);
                    let mut out = Vec::with_capacity(config.algorithms.len());
                    for &algorithm in &config.algorithms {
                        let t = Instant::now();
                        let map = run_algorithm(algorithm, &problem, topology)?;
                        let partition_time_s = t.elapsed().as_secs_f64();
                        let profile = compute_loads(&map, &weights, ranks)?;
                        let eff = efficiency(&profile, ranks)?;
                        out.push(TrialRecord {
                            algorithm,
                            node_count,
                            ranks_per_node: config.ranks_per_node,
                            boxes_per_rank,
                            std_dev,
                            trial,
                            seed,
                            total_weight: profile.total_weight,
                            max_load: profile.max_load,
                            efficiency: eff,
                            partition_time_s,
                            ordering_time_s,
                        });
                    }
                    Ok(out)
                };

                let trial_records: Vec<Vec<TrialRecord>> = if config.serial {
                    (0..config.trials)
                        .map(run_trial)
                        .collect::<Result<Vec<_>>>()?
                } else {
                    (0..config.trials)
                        .into_par_iter()
                        .map(run_trial)
                        .collect::<Result<Vec<_>>>()?
                };
                records.extend(trial_records.into_iter().flatten());
            }
        }
    }
    records.sort_by(|a, b| {
        (
            a.algorithm,
            a.node_count,
            a.boxes_per_rank,
            a.std_dev.to_bits(),
            a.trial,
        )
            .cmp(&(
                b.algorithm,
                b.node_count,
                b.boxes_per_rank,
                b.std_dev.to_bits(),
                b.trial,
            ))
    });
    Ok(records)
}

/// Groups trial records by (algorithm, node_count, boxes_per_rank, std_dev)
/// and computes mean and sample standard deviation of efficiency and time.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRecord> {
    use std::collections::BTreeMap;
    type Key = (Algorithm, usize, usize, usize, u64);
    let mut groups: BTreeMap<Key, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((
                r.algorithm,
                r.node_count,
                r.ranks_per_node,
                r.boxes_per_rank,
                r.std_dev.to_bits(),
            ))
            .or_default()
            .push(r);
    }
    groups
        .into_values()
        .map(|rs| {
            let n = rs.len();
            let (mean_eff, std_eff) = mean_std(rs.iter().map(|r| r.efficiency));
            let (mean_t, std_t) = mean_std(rs.iter().map(|r| r.partition_time_s));
            let first = rs[0];
            SummaryRecord {
                algorithm: first.algorithm,
                node_count: first.node_count,
                ranks_per_node: first.ranks_per_node,
                boxes_per_rank: first.boxes_per_rank,
                std_dev: first.std_dev,
                trials: n,
                mean_efficiency: mean_eff,
                std_efficiency: std_eff,
                mean_partition_time_s: mean_t,
                std_partition_time_s: std_t,
            }
        })
        .collect()
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Writes trials.csv, summary.csv and config.json under `out_dir`.
pub fn write_results(
    records: &[TrialRecord],
    summaries: &[SummaryRecord],
    config: &ExperimentConfig,
    out_dir: &Path,
) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::Io {
        path: out_dir.to_path_buf(),
        source: e,
    })?;

    let trials_path = out_dir.join("trials.csv");
    let mut w = csv::Writer::from_path(&trials_path).map_err(|e| Error::Csv {
        path: trials_path.clone(),
        source: e,
    })?;
    w.write_record([
        "algorithm",
        "node_count",
        "ranks_per_node",
        "boxes_per_rank",
        "std_dev",
        "trial",
        "seed",
        "total_weight",
        "max_load",
        "efficiency",
        "partition_time_s",
        "ordering_time_s",
    ])
    .and_then(|_| {
        records.iter().try_for_each(|r| {
            w.write_record([
                r.algorithm.as_str(),
                &r.node_count.to_string(),
                &r.ranks_per_node.to_string(),
                &r.boxes_per_rank.to_string(),
                &r.std_dev.to_string(),
                &r.trial.to_string(),
                &r.seed.to_string(),
                &r.total_weight.to_string(),
                &r.max_load.to_string(),
                &r.efficiency.to_string(),
                &r.partition_time_s.to_string(),
                &r.ordering_time_s.to_string(),
            ])
        })
    })
    .and_then(|_| w.flush().map_err(csv::Error::from))
    .map_err(|e| Error::Csv {
        path: trials_path.clone(),
        source: e,
    })?;

    let summary_path = out_dir.join("summary.csv");
    let mut w = csv::Writer::from_path(&summary_path).map_err(|e| Error::Csv {
        path: summary_path.clone(),
        source: e,
    })?;
    w.write_record([
        "algorithm",
        "node_count",
        "ranks_per_node",
        "boxes_per_rank",
        "std_dev",
        "trials",
        "mean_efficiency",
        "std_efficiency",
        "mean_partition_time_s",
        "std_partition_time_s",
    ])
    .and_then(|_| {
        summaries.iter().try_for_each(|s| {
            w.write_record([
                s.algorithm.as_str(),
                &s.node_count.to_string(),
                &s.ranks_per_node.to_string(),
                &s.boxes_per_rank.to_string(),
                &s.std_dev.to_string(),
                &s.trials.to_string(),
                &s.mean_efficiency.to_string(),
                &s.std_efficiency.to_string(),
                &s.mean_partition_time_s.to_string(),
                &s.std_partition_time_s.to_string(),
            ])
        })
    })
    .and_then(|_| w.flush().map_err(csv::Error::from))
    .map_err(|e| Error::Csv {
        path: summary_path.clone(),
        source: e,
    })?;

    let config_path = out_dir.join("config.json");
    let doc = serde_json::json!({
        "config": config,
        "artifact_version": env!("CARGO_PKG_VERSION"),
        "generator": GENERATOR_ID,
    });
    std::fs::write(&config_path, serde_json::to_string_pretty(&doc).unwrap()).map_err(|e| {
        Error::Io {
            path: config_path,
            source: e,
        }
    })?;
    Ok(())
}

/// Parses a trials.csv written by [`write_results`] back into records.
pub fn read_trials(path: &Path) -> Result<Vec<TrialRecord>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Csv {
        path: path.to_path_buf(),
        source: e,
    })?;
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<TrialRecord>, _>>()
        .map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })
}

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("coordinate {0} exceeds the 21-bit Morton range (max {max})", max = (1u32 << 21) - 1)]
    MortonOverflow(u32),

    #[error("target box count {target} exceeds the domain cell count {cells}")]
    BoxCountTooLarge { target: u64, cells: u64 },

    #[error("no factorization of {target} boxes fits domain extent {extent:?}")]
    NoFeasibleFactorization { target: u64, extent: [u32; 3] },

    #[error("invalid box: lo {lo:?} exceeds hi {hi:?}")]
    InvalidBox { lo: [u32; 3], hi: [u32; 3] },

    #[error("{boxes} boxes cannot populate {ranks} ranks (need at least one box per rank)")]
    NotEnoughBoxes { boxes: usize, ranks: usize },

    #[error("SFC order required but not provided")]
    MissingSfcOrder,

    #[error("SFC order must be a permutation of 0..{n}")]
    InvalidSfcOrder { n: usize },

    #[error("node {node} received {boxes} boxes, fewer than {ranks_per_node} ranks per node")]
    NodeGroupTooSmall {
        node: usize,
        boxes: usize,
        ranks_per_node: usize,
    },

    #[error("{ranks}^{boxes} combinations overflow the 2^62 counter budget; shrink the instance")]
    CombinationOverflow { ranks: usize, boxes: usize },

    #[error("rank index {rank} out of range for {rank_count} ranks")]
    RankOutOfRange { rank: u32, rank_count: usize },

    #[error("distribution map length {map_len} does not match weight count {weights_len}")]
    MapLengthMismatch { map_len: usize, weights_len: usize },

    #[error("cannot compute efficiency of an empty problem (max load is zero)")]
    ZeroMaxLoad,

    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error for {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

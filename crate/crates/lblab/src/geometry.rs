//! Synthetic box decompositions of a 3D index domain and Morton (Z-order)
//! curve ordering of the resulting boxes.

use crate::{Error, Result};

pub const MORTON_BITS: u32 = 21;
pub const MORTON_COORD_MAX: u32 = (1 << MORTON_BITS) - 1;

/// A rectilinear box of cells in 3D integer index space, inclusive on both
/// ends. The indivisible unit of work assigned to a rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexBox {
    pub lo: [u32; 3],
    pub hi: [u32; 3],
}

impl IndexBox {
    pub fn new(lo: [u32; 3], hi: [u32; 3]) -> Result<Self> {
        if (0..3).any(|d| lo[d] > hi[d]) {
            return Err(Error::InvalidBox { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn cell_count(&self) -> u64 {
        (0..3)
            .map(|d| (self.hi[d] - self.lo[d]) as u64 + 1)
            .product()
    }

    pub fn intersects(&self, other: &IndexBox) -> bool {
        (0..3).all(|d| self.lo[d] <= other.hi[d] && other.lo[d] <= self.hi[d])
    }
}

/// An ordered list of boxes tiling a domain. Box identity is its index in
/// creation order.
#[derive(Debug, Clone)]
pub struct BoxArray {
    pub domain: IndexBox,
    pub boxes: Vec<IndexBox>,
}

impl BoxArray {
    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }
}

/// Bit-interleaved Z-order key of a box anchor, paired with the box's
/// original index so sorting keys also sorts boxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct MortonKey {
    pub key: u64,
    pub box_index: usize,
}

/// Splits `len` cells into `parts` contiguous intervals, longer intervals
/// first, returning interval lengths.
fn split_axis(len: u32, parts: u32) -> Vec<u32> {
    let base = len / parts;
    let rem = len % parts;
    (0..parts)
        .map(|i| if i < rem { base + 1 } else { base })
        .collect()
}

/// Picks the per-axis box counts (bx, by, bz) with product `target`: each
/// factor must not exceed its axis length, the ratio max/min over the triple
/// is minimized, and ties go to the lexicographically greatest triple (which
/// yields the lexicographically smallest box shape on cubic domains).
fn choose_factors(extent: [u32; 3], target: u64) -> Result<[u32; 3]> {
    let mut best: Option<[u64; 3]> = None;
    let mut best_ratio = (u64::MAX, 1u64); // ratio as a fraction (num, den)
    for bx in 1..=target {
        if !target.is_multiple_of(bx) || bx > extent[0] as u64 {
            continue;
        }
        let rest = target / bx;
        for by in 1..=rest {
            if !rest.is_multiple_of(by) || by > extent[1] as u64 {
                continue;
            }
            let bz = rest / by;
            if bz > extent[2] as u64 {
                continue;
            }
            let t = [bx, by, bz];
            let mx = *t.iter().max().unwrap();
            let mn = *t.iter().min().unwrap();
            // compare mx/mn against best_ratio by cross multiplication
            let better = mx * best_ratio.1 < best_ratio.0 * mn;
            let tie = mx * best_ratio.1 == best_ratio.0 * mn;
            if better || (tie && best.is_none_or(|b| t > b)) {
                best_ratio = (mx, mn);
                best = Some(t);
            }
        }
    }
    best.map(|t| [t[0] as u32, t[1] as u32, t[2] as u32])
        .ok_or(Error::NoFeasibleFactorization { target, extent })
}

/// Tiles the domain `[0, extent)` with exactly `target_box_count` boxes by
/// splitting each axis into near-even contiguous intervals. Deterministic
/// for fixed inputs; boxes are created x-fastest, then y, then z.
pub fn make_box_array(extent: [u32; 3], target_box_count: u64) -> Result<BoxArray> {
    let domain = IndexBox::new([0, 0, 0], [extent[0] - 1, extent[1] - 1, extent[2] - 1])?;
    let cells = domain.cell_count();
    if target_box_count == 0 || target_box_count > cells {
        return Err(Error::BoxCountTooLarge {
            target: target_box_count,
            cells,
        });
    }
    let factors = choose_factors(extent, target_box_count)?;
    let lens: [Vec<u32>; 3] = [
        split_axis(extent[0], factors[0]),
        split_axis(extent[1], factors[1]),
        split_axis(extent[2], factors[2]),
    ];
    // prefix offsets per axis
    let offsets: Vec<Vec<u32>> = lens
        .iter()
        .map(|l| {
            let mut off = Vec::with_capacity(l.len() + 1);
            let mut acc = 0;
            off.push(0);
            for &x in l {
                acc += x;
                off.push(acc);
            }
            off
        })
        .collect();

    let mut boxes = Vec::with_capacity(target_box_count as usize);
    for iz in 0..factors[2] as usize {
        for iy in 0..factors[1] as usize {
            for ix in 0..factors[0] as usize {
                let lo = [offsets[0][ix], offsets[1][iy], offsets[2][iz]];
                let hi = [
                    offsets[0][ix + 1] - 1,
                    offsets[1][iy + 1] - 1,
                    offsets[2][iz + 1] - 1,
                ];
                boxes.push(IndexBox::new(lo, hi)?);
            }
        }
    }
    Ok(BoxArray { domain, boxes })
}

/// Spreads the low 21 bits of `x` so consecutive bits land three apart.
fn spread_bits(x: u32) -> u64 {
    let mut x = x as u64 & 0x1f_ffff;
    x = (x | (x << 32)) & 0x1f00000000ffff;
    x = (x | (x << 16)) & 0x1f0000ff0000ff;
    x = (x | (x << 8)) & 0x100f00f00f00f00f;
    x = (x | (x << 4)) & 0x10c30c30c30c30c3;
    x = (x | (x << 2)) & 0x1249249249249249;
    x
}

/// Morton key of a box: the bit-interleave of its lo-corner coordinates.
/// x occupies the least-significant bit of each 3-bit group, then y, then z.
pub fn morton_key(b: &IndexBox, box_index: usize) -> Result<MortonKey> {
    for d in 0..3 {
        if b.lo[d] > MORTON_COORD_MAX {
            return Err(Error::MortonOverflow(b.lo[d]));
        }
    }
    let key = spread_bits(b.lo[0]) | (spread_bits(b.lo[1]) << 1) | (spread_bits(b.lo[2]) << 2);
    Ok(MortonKey { key, box_index })
}

/// Returns box indices sorted ascending by Morton key, ties broken by
/// ascending original index.
pub fn sfc_order(box_array: &BoxArray) -> Result<Vec<usize>> {
    let mut keys = Vec::with_capacity(box_array.len());
    for (i, b) in box_array.boxes.iter().enumerate() {
        keys.push(morton_key(b, i)?);
    }
    keys.sort();
    Ok(keys.into_iter().map(|k| k.box_index).collect())
}

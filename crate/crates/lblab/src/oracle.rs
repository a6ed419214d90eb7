//! Exhaustive brute-force partitioning: ground truth for small instances.
//!
//! Assignments are enumerated by counting in base P. Digit j of the counter
//! (least significant digit = box 0) is box j's rank. With symmetry halving
//! only the first floor(P^N/2)+1 counters are checked; the complement
//! d -> P-1-d of any assignment permutes rank labels and leaves the load
//! multiset unchanged, so the second half adds nothing.

use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub best_map: Vec<u32>,
    pub best_max_load: u64,
    pub combinations_checked: u64,
}

/// Decodes counter `k` into base-`p` digits and the per-rank loads they
/// induce.
fn decode(k: u64, p: u64, weights: &[u64], digits: &mut [u32], loads: &mut [u64]) {
    loads.iter_mut().for_each(|l| *l = 0);
    let mut x = k;
    for (j, d) in digits.iter_mut().enumerate() {
        *d = (x % p) as u32;
        loads[*d as usize] += weights[j];
        x /= p;
    }
}

/// Scans counters in `[start, end)`, returning the smallest
/// (max_load, counter) pair. Loads are updated incrementally: a base-p
/// increment only touches the boxes whose digits changed.
fn scan_range(weights: &[u64], p: u64, start: u64, end: u64) -> (u64, u64) {
    let n = weights.len();
    let mut digits = vec![0u32; n];
    let mut loads = vec![0u64; p as usize];
    decode(start, p, weights, &mut digits, &mut loads);

    let mut best_load = u64::MAX;
    let mut best_k = start;
    let mut k = start;
    loop {
        let max = *loads.iter().max().unwrap();
        if max < best_load {
            best_load = max;
            best_k = k;
        }
        k += 1;
        if k >= end {
            break;
        }
        // base-p increment with carry
        let mut j = 0;
        while digits[j] as u64 == p - 1 {
            loads[digits[j] as usize] -= weights[j];
            digits[j] = 0;
            loads[0] += weights[j];
            j += 1;
        }
        loads[digits[j] as usize] -= weights[j];
        digits[j] += 1;
        loads[digits[j] as usize] += weights[j];
    }
    (best_load, best_k)
}

/// Finds the assignment minimizing the maximum rank load by exhaustive
/// enumeration, ties broken by smallest counter value. Empty ranks are
/// permitted: the oracle searches the full assignment space so it lower
/// bounds every algorithm. Result is independent of `threads`.
pub fn brute_force_solve(
    weights: &[u64],
    rank_count: usize,
    threads: usize,
    use_symmetry: bool,
) -> Result<BruteForceResult> {
    let n = weights.len();
    let p = rank_count as u64;
    assert!(n >= 1 && rank_count >= 1 && threads >= 1);
    let total = p
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 62)
        .ok_or(Error::CombinationOverflow {
            ranks: rank_count,
            boxes: n,
        })?;
    let limit = if use_symmetry { total / 2 + 1 } else { total };

    let workers = threads.min(limit as usize).max(1) as u64;
    let chunk = limit / workers;
    let rem = limit % workers;
    let mut bounds = Vec::with_capacity(workers as usize + 1);
    let mut acc = 0;
    bounds.push(0);
    for i in 0..workers {
        acc += chunk + if i < rem { 1 } else { 0 };
        bounds.push(acc);
    }

    let (best_load, best_k) = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as usize)
            .map(|i| {
                let (start, end) = (bounds[i], bounds[i + 1]);
                scope.spawn(move || scan_range(weights, p, start, end))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("oracle worker panicked"))
            .min()
            .expect("at least one worker")
    });

    let mut digits = vec![0u32; n];
    let mut loads = vec![0u64; rank_count];
    decode(best_k, p, weights, &mut digits, &mut loads);
    Ok(BruteForceResult {
        best_map: digits,
        best_max_load: best_load,
        combinations_checked: limit,
    })
}

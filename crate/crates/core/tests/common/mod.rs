//! Brute-force payoff oracles shared by the test targets.

#![allow(dead_code)]

use riskdyn::payoff::utility;
use riskdyn::ModelParams;

pub fn u(x: f64, g: f64) -> f64 {
    utility(x, g).unwrap()
}

/// Average per-member utility over every disaster pattern of a k-member pool.
pub fn brute_pool(k: usize, p: &ModelParams) -> f64 {
    let mut total = 0.0;
    for mask in 0u32..(1 << k) {
        let hit: Vec<bool> = (0..k).map(|b| mask >> b & 1 == 1).collect();
        let h = hit.iter().filter(|&&x| x).count();
        let prob: f64 = hit
            .iter()
            .map(|&x| if x { p.p } else { 1.0 - p.p })
            .product();
        let fund = k as f64 * p.delta1 * p.w;
        let utils: f64 = hit
            .iter()
            .map(|&x| {
                let wealth = if h == 0 {
                    p.w
                } else if x {
                    p.w * (1.0 - p.alpha) - p.delta1 * p.w + fund / h as f64
                } else {
                    p.w - p.delta1 * p.w
                };
                u(wealth, p.gamma)
            })
            .sum();
        total += prob * utils / k as f64;
    }
    total
}

/// Average per-member utility over all 4^l individual outcome assignments.
pub fn brute_index(l: usize, p: &ModelParams) -> f64 {
    // 0: hit & paid, 1: spared & unpaid, 2: spared & paid, 3: hit & unpaid
    let probs = [p.p - p.r, 1.0 - p.q - p.r, p.q + p.r - p.p, p.r];
    let mut total = 0.0;
    for code in 0..4usize.pow(l as u32) {
        let outcome: Vec<usize> = (0..l).map(|j| code / 4usize.pow(j as u32) % 4).collect();
        let prob: f64 = outcome.iter().map(|&o| probs[o]).product();
        if prob == 0.0 {
            continue;
        }
        let unpaid = outcome.iter().filter(|&&o| o == 3).count();
        let fund = l as f64 * p.delta2 * p.w;
        // without unpaid victims the pool is refunded in full
        let kept = if unpaid == 0 { 0.0 } else { p.delta2 * p.w };
        let utils: f64 = outcome
            .iter()
            .map(|&o| {
                let wealth = match o {
                    0 | 1 => p.w - p.c - kept,
                    2 => p.w - p.c + p.alpha * p.w - kept,
                    _ => p.w - p.alpha * p.w - p.c - kept + fund / unpaid as f64,
                };
                u(wealth, p.gamma)
            })
            .sum();
        total += prob * utils / l as f64;
    }
    total
}

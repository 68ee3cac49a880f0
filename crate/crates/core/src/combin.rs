//! Log-space combinatorics shared by the payoff and fitness code.

use statrs::function::factorial::{ln_binomial, ln_factorial};

/// `ln C(n, k)`, or `-inf` when `k > n`.
pub fn ln_choose(n: usize, k: usize) -> f64 {
    if k > n {
        f64::NEG_INFINITY
    } else {
        ln_binomial(n as u64, k as u64)
    }
}

pub fn ln_fact(n: usize) -> f64 {
    ln_factorial(n as u64)
}

/// `count * ln(prob)` with the convention `0^0 = 1`.
pub fn ln_pow(prob: f64, count: usize) -> f64 {
    if count == 0 {
        0.0
    } else {
        count as f64 * prob.ln()
    }
}

/// Binomial mass `C(k, h) p^h (1-p)^(k-h)`.
pub fn binomial_pmf(k: usize, h: usize, p: f64) -> f64 {
    if h > k {
        return 0.0;
    }
    (ln_choose(k, h) + ln_pow(p, h) + ln_pow(1.0 - p, k - h)).exp()
}

/// Hypergeometric mass of `k` successes when drawing `draws` items without
/// replacement from `pop` items of which `succ` are successes.
pub fn hypergeometric_pmf(pop: usize, succ: usize, draws: usize, k: usize) -> f64 {
    if succ > pop || draws > pop || k > succ || k > draws || draws - k > pop - succ {
        return 0.0;
    }
    (ln_choose(succ, k) + ln_choose(pop - succ, draws - k) - ln_choose(pop, draws)).exp()
}

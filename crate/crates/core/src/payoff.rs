//! Single-group expected-utility payoffs of the three strategies.
//!
//! A pool member contributes `delta1 * w`; the fund is split evenly among the
//! members hit by a disaster, or refunded when nobody is hit. An insured
//! individual pays `c`, is fully compensated when the index triggers, and also
//! contributes `delta2 * w` to a second pool that only covers insured victims
//! left without a payout. Outcomes are drawn independently per individual.

use crate::combin::{binomial_pmf, ln_fact, ln_pow};
use crate::error::{Error, Result};
use crate::params::{ModelParams, Strategy};

/// CRRA utility `x^(1-gamma) / (1-gamma)`, with `ln x` at `gamma = 1`.
pub fn utility(x: f64, gamma: f64) -> Result<f64> {
    checked_utility(x, gamma, "wealth")
}

fn checked_utility(x: f64, gamma: f64, what: &'static str) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain { what, value: x });
    }
    if gamma == 1.0 {
        Ok(x.ln())
    } else {
        Ok(x.powf(1.0 - gamma) / (1.0 - gamma))
    }
}

/// Total utility of a pool of `k` members when `h` of them suffer a disaster.
pub fn pool_group_utility(h: usize, k: usize, params: &ModelParams) -> Result<f64> {
    assert!(
        k >= 1 && h <= k,
        "pool_group_utility: need 0 <= h <= k, k >= 1"
    );
    let ModelParams {
        w,
        alpha,
        delta1,
        gamma,
        ..
    } = *params;
    if h == 0 {
        return Ok(k as f64 * checked_utility(w, gamma, "w")?);
    }
    let victim = (1.0 - alpha) * w - delta1 * w + k as f64 * delta1 * w / h as f64;
    let spared = w - delta1 * w;
    let mut total = h as f64 * checked_utility(victim, gamma, "pool victim wealth")?;
    if h < k {
        total +=
            (k - h) as f64 * checked_utility(spared, gamma, "pool member wealth w - delta1*w")?;
    }
    Ok(total)
}

/// Expected per-member payoff `pi_S(k)` of a pool of size `k`.
pub fn pool_payoff(k: usize, params: &ModelParams) -> Result<f64> {
    assert!(k >= 1, "pool_payoff: k must be at least 1");
    let mut acc = 0.0;
    for h in 0..=k {
        let weight = binomial_pmf(k, h, params.p);
        if weight == 0.0 {
            continue;
        }
        acc += weight * pool_group_utility(h, k, params)?;
    }
    Ok(acc / k as f64)
}

/// Per-individual outcome counts among `l` insured group members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutcomePartition {
    /// Hit by a disaster and compensated.
    pub u: usize,
    /// Spared, no payout.
    pub v: usize,
    /// Spared but paid out.
    pub m: usize,
    /// Hit by a disaster without a payout.
    pub n: usize,
}

impl OutcomePartition {
    pub fn total(&self) -> usize {
        self.u + self.v + self.m + self.n
    }

    /// Every partition of `l` in (u, v, m, n) order.
    pub fn all(l: usize) -> impl Iterator<Item = OutcomePartition> {
        (0..=l).flat_map(move |u| {
            (0..=l - u).flat_map(move |v| {
                (0..=l - u - v).map(move |m| OutcomePartition {
                    u,
                    v,
                    m,
                    n: l - u - v - m,
                })
            })
        })
    }
}

/// Probabilities of the four index-insurance outcomes for one individual.
#[derive(Debug, Clone, Copy)]
pub struct OutcomeProbs {
    pub compensated: f64,
    pub spared: f64,
    pub false_payout: f64,
    pub uncompensated: f64,
}

impl OutcomeProbs {
    pub fn new(params: &ModelParams) -> Self {
        let ModelParams { p, q, r, .. } = *params;
        OutcomeProbs {
            compensated: (p - r).max(0.0),
            spared: (1.0 - q - r).max(0.0),
            false_payout: (q + r - p).max(0.0),
            uncompensated: r.max(0.0),
        }
    }
}

/// Multinomial mass of an outcome partition of `l` insured individuals.
pub fn outcome_probability(part: OutcomePartition, l: usize, params: &ModelParams) -> f64 {
    debug_assert_eq!(part.total(), l);
    let pr = OutcomeProbs::new(params);
    let ln = ln_fact(l) - ln_fact(part.u) - ln_fact(part.v) - ln_fact(part.m) - ln_fact(part.n)
        + ln_pow(pr.compensated, part.u)
        + ln_pow(pr.spared, part.v)
        + ln_pow(pr.false_payout, part.m)
        + ln_pow(pr.uncompensated, part.n);
    ln.exp()
}

/// Total utility of `l` insured individuals under a given outcome partition.
pub fn index_group_utility(part: OutcomePartition, l: usize, params: &ModelParams) -> Result<f64> {
    debug_assert_eq!(part.total(), l);
    index_group_utility_merged(part.u + part.v, part.m, part.n, l, params)
}

/// Same as [`index_group_utility`] with the first two outcomes merged,
/// since the utility depends on them only through `u + v`.
fn index_group_utility_merged(
    settled: usize,
    m: usize,
    n: usize,
    l: usize,
    params: &ModelParams,
) -> Result<f64> {
    let ModelParams {
        w,
        c,
        alpha,
        delta2,
        gamma,
        ..
    } = *params;
    let mut total = 0.0;
    if n == 0 {
        if settled > 0 {
            total += settled as f64 * checked_utility(w - c, gamma, "insured wealth w - c")?;
        }
        if m > 0 {
            total += m as f64 * checked_utility(w - c + alpha * w, gamma, "false-payout wealth")?;
        }
    } else {
        let contribution = delta2 * w;
        if settled > 0 {
            total += settled as f64
                * checked_utility(
                    w - c - contribution,
                    gamma,
                    "insured wealth w - c - delta2*w",
                )?;
        }
        if m > 0 {
            total += m as f64
                * checked_utility(
                    w - c + alpha * w - contribution,
                    gamma,
                    "false-payout wealth",
                )?;
        }
        let uncovered = (1.0 - alpha) * w - c - contribution + l as f64 * contribution / n as f64;
        total += n as f64 * checked_utility(uncovered, gamma, "uncompensated insured wealth")?;
    }
    Ok(total)
}

/// Expected per-member payoff `pi_I(l)` for `l` insured group members.
///
/// Sums over (u+v, m, n) with the merged category probability
/// `(p - r) + (1 - q - r)`, O(l^2) terms.
pub fn index_payoff(l: usize, params: &ModelParams) -> Result<f64> {
    assert!(l >= 1, "index_payoff: l must be at least 1");
    let pr = OutcomeProbs::new(params);
    let settled_prob = pr.compensated + pr.spared;
    let ln_l = ln_fact(l);
    let mut acc = 0.0;
    for n in 0..=l {
        for m in 0..=l - n {
            let s = l - n - m;
            let ln_w = ln_l - ln_fact(s) - ln_fact(m) - ln_fact(n)
                + ln_pow(settled_prob, s)
                + ln_pow(pr.false_payout, m)
                + ln_pow(pr.uncompensated, n);
            let weight = ln_w.exp();
            if weight == 0.0 {
                continue;
            }
            acc += weight * index_group_utility_merged(s, m, n, l, params)?;
        }
    }
    Ok(acc / l as f64)
}

/// `pi_I(l)` by the full four-index sum over all outcome partitions.
/// Slower than [`index_payoff`]; kept as an independent reference route.
pub fn index_payoff_quadrinomial(l: usize, params: &ModelParams) -> Result<f64> {
    assert!(l >= 1, "index_payoff_quadrinomial: l must be at least 1");
    let mut acc = 0.0;
    for part in OutcomePartition::all(l) {
        let weight = outcome_probability(part, l, params);
        if weight == 0.0 {
            continue;
        }
        acc += weight * index_group_utility(part, l, params)?;
    }
    Ok(acc / l as f64)
}

/// Expected payoff `pi_A` of an uninsured individual.
pub fn loner_payoff(params: &ModelParams) -> Result<f64> {
    let ModelParams {
        w, p, alpha, gamma, ..
    } = *params;
    let hit = checked_utility((1.0 - alpha) * w, gamma, "post-disaster wealth (1-alpha)*w")?;
    let spared = checked_utility(w, gamma, "w")?;
    Ok(p * hit + (1.0 - p) * spared)
}

/// `pi_S(k)` and `pi_I(l)` for every group composition, plus `pi_A`.
///
/// Tables for inactive strategies are left empty.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffTables {
    pool: Vec<f64>,
    index: Vec<f64>,
    loner: f64,
}

impl PayoffTables {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let n = params.n;
        let pool = if params.strategies.contains(Strategy::S) {
            (1..=n)
                .map(|k| pool_payoff(k, params))
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        let index = if params.strategies.contains(Strategy::I) {
            (1..=n)
                .map(|l| index_payoff(l, params))
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        Ok(PayoffTables {
            pool,
            index,
            loner: loner_payoff(params)?,
        })
    }

    /// `pi_S(k)` for `1 <= k <= N`.
    pub fn pool(&self, k: usize) -> f64 {
        self.pool[k - 1]
    }

    /// `pi_I(l)` for `1 <= l <= N`.
    pub fn index(&self, l: usize) -> f64 {
        self.index[l - 1]
    }

    pub fn loner(&self) -> f64 {
        self.loner
    }

    pub fn group_size(&self) -> usize {
        self.pool.len().max(self.index.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::StrategySet;

    fn base() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn utility_values() {
        assert!((utility(1.0, 0.8).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(utility(3.7, 0.0).unwrap(), 3.7);
        // 5 * 0.2^0.2 evaluated at 40 digits
        assert!((utility(0.2, 0.8).unwrap() - 3.623_898_318_388_478).abs() < 1e-12);
        assert_eq!(utility(2.0, 1.0).unwrap(), 2f64.ln());
    }

    #[test]
    fn utility_domain_error_names_expression() {
        let err = utility(0.0, 0.8).unwrap_err();
        assert!(matches!(err, Error::Domain { what: "wealth", .. }));
        assert!(utility(-1.0, 0.5).is_err());
    }

    #[test]
    fn pool_group_utility_branches() {
        let p = base();
        assert!((pool_group_utility(0, 3, &p).unwrap() - 15.0).abs() < 1e-12);
        let own = utility((1.0 - p.alpha) * p.w, p.gamma).unwrap();
        assert!((pool_group_utility(1, 1, &p).unwrap() - own).abs() < 1e-12);
        // U(0.3) + U(0.9)
        assert!((pool_group_utility(1, 2, &p).unwrap() - 8.825_757_239_787_998).abs() < 1e-12);
    }

    #[test]
    fn pool_payoff_reference_values() {
        let p = base();
        assert!((pool_payoff(2, &p).unwrap() - 4.757_077_091_101_619).abs() < 1e-12);
        assert!((pool_payoff(1, &p).unwrap() - loner_payoff(&p).unwrap()).abs() < 1e-12);
        let mut p0 = base();
        p0.delta1 = 0.0;
        let a = loner_payoff(&p0).unwrap();
        for k in 1..=p0.n {
            assert!((pool_payoff(k, &p0).unwrap() - a).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn outcome_probability_values() {
        let p = base();
        let single = OutcomePartition {
            u: 1,
            v: 0,
            m: 0,
            n: 0,
        };
        assert!((outcome_probability(single, 1, &p) - (p.p - p.r)).abs() < 1e-15);
        let two = OutcomePartition {
            u: 1,
            v: 1,
            m: 0,
            n: 0,
        };
        assert!((outcome_probability(two, 2, &p) - 0.2618).abs() < 1e-14);
        for l in 1..=20 {
            let s: f64 = OutcomePartition::all(l)
                .map(|pt| outcome_probability(pt, l, &p))
                .sum();
            assert!((s - 1.0).abs() < 1e-12, "l={l} sum={s}");
        }
    }

    #[test]
    fn zero_probability_categories_allowed() {
        let mut p = base();
        p.r = 0.0;
        let s: f64 = OutcomePartition::all(5)
            .map(|pt| outcome_probability(pt, 5, &p))
            .sum();
        assert!((s - 1.0).abs() < 1e-12);
        let miss = OutcomePartition {
            u: 0,
            v: 0,
            m: 0,
            n: 1,
        };
        assert_eq!(outcome_probability(miss, 1, &p), 0.0);
    }

    #[test]
    fn index_group_utility_values() {
        let p = base();
        let both = OutcomePartition {
            u: 2,
            v: 0,
            m: 0,
            n: 0,
        };
        // 2 * 5 * 0.83^0.2
        assert!((index_group_utility(both, 2, &p).unwrap() - 9.634_199_128_627_017).abs() < 1e-12);
        let alone = OutcomePartition {
            u: 0,
            v: 0,
            m: 0,
            n: 1,
        };
        let expect = utility((1.0 - p.alpha) * p.w - p.c, p.gamma).unwrap();
        assert!((index_group_utility(alone, 1, &p).unwrap() - expect).abs() < 1e-12);

        let mut other = base();
        other.delta2 = 0.3;
        for part in OutcomePartition::all(4).filter(|pt| pt.n == 0) {
            let a = index_group_utility(part, 4, &p).unwrap();
            let b = index_group_utility(part, 4, &other).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn index_payoff_single_member() {
        let p = base();
        // 0.94 U(0.83) + 0.03 U(1.63) + 0.03 U(0.03)
        assert!((index_payoff(1, &p).unwrap() - 4.767_861_192_114_126).abs() < 1e-12);
        let mut perfect = base();
        perfect.r = 0.0;
        let expect = utility(perfect.w - perfect.c, perfect.gamma).unwrap();
        assert!((index_payoff(1, &perfect).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn index_payoff_routes_agree() {
        let p = base();
        for l in 1..=20 {
            let a = index_payoff(l, &p).unwrap();
            let b = index_payoff_quadrinomial(l, &p).unwrap();
            assert!((a - b).abs() < 1e-10, "l={l}: {a} vs {b}");
        }
    }

    #[test]
    fn loner_payoff_values() {
        let mut p = base();
        assert!((loner_payoff(&p).unwrap() - 4.724_779_663_677_696).abs() < 1e-12);
        p.p = 0.0;
        assert_eq!(loner_payoff(&p).unwrap(), utility(p.w, p.gamma).unwrap());
        p.p = 1.0;
        p.r = 0.2;
        assert_eq!(
            loner_payoff(&p).unwrap(),
            utility((1.0 - p.alpha) * p.w, p.gamma).unwrap()
        );
    }

    #[test]
    fn loner_payoff_decreasing_in_alpha() {
        let mut p = base();
        let mut prev = f64::INFINITY;
        for i in 1..20 {
            p.alpha = i as f64 * 0.05;
            let v = loner_payoff(&p).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn tables_skip_inactive_strategies() {
        let mut p = base();
        p.strategies = StrategySet::new(&[Strategy::S, Strategy::A]).unwrap();
        p.c = 0.5;
        let t = PayoffTables::new(&p).unwrap();
        assert_eq!(t.group_size(), p.n);
        assert_eq!(t.pool(1), t.loner());
    }
}

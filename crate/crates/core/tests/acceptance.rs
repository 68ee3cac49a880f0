//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line.
//!
//! Run with `cargo test -p riskdyn --test acceptance -- --nocapture`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use riskdyn::config::central_state;
use riskdyn::markov::{
    residual, solve, stationary, Regime, StateSpace, StationaryOptions, TransitionModel,
};
use riskdyn::montecarlo::{simulate, total_variation, SimConfig};
use riskdyn::payoff::{
    index_payoff, index_payoff_quadrinomial, loner_payoff, pool_payoff, utility,
};
use riskdyn::sweeps::{linear_grid, optimal_premium, restrict_strategies};
use riskdyn::{ModelParams, Strategy, StrategySet};

mod common;

use common::{brute_index, brute_pool};

const SLACK: f64 = 0.01;

fn report(n: u32, ok: bool, detail: &str) {
    println!(
        "criterion {n}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} failed: {detail}");
}

fn grid_params(alpha: f64, r: f64) -> ModelParams {
    ModelParams {
        alpha,
        r,
        c: 0.17,
        ..ModelParams::default()
    }
}

/// States whose probability is at least that of every one-step neighbour.
fn local_maxima(space: &StateSpace, probs: &[f64]) -> Vec<(usize, usize, f64)> {
    let z = space.z();
    let mut out = Vec::new();
    for (k, st) in space.states().iter().enumerate() {
        let mut peak = true;
        for from in Strategy::ALL {
            for to in Strategy::ALL {
                if from == to || st.count(from, z) == 0 {
                    continue;
                }
                let nb = st.moved(from, to);
                if let Ok(j) = space.index_of(nb) {
                    if probs[j] > probs[k] {
                        peak = false;
                    }
                }
            }
        }
        if peak {
            out.push((st.s, st.i, probs[k]));
        }
    }
    out
}

#[test]
fn criterion_1_regime_map() {
    let start = Instant::now();
    let expected = [
        (0.2, [Some(Regime::A), Some(Regime::A), Some(Regime::A)]),
        (0.5, [Some(Regime::S), Some(Regime::S), Some(Regime::S)]),
        (0.8, [Some(Regime::I), None, Some(Regime::S)]),
    ];
    let rs = [0.001, 0.03, 0.1];
    let mut ok = true;
    let mut cells = Vec::new();
    let mut bistable = String::new();
    for (alpha, want) in expected {
        for (r, w) in rs.iter().zip(want) {
            let (model, res) =
                solve(&grid_params(alpha, *r), StationaryOptions::default()).unwrap();
            let got = res.adoption.argmax();
            cells.push(format!("a={alpha},r={r}:{got}"));
            if let Some(w) = w {
                ok &= got == w;
            } else {
                let z = model.space().z();
                let peaks = local_maxima(model.space(), &res.probs);
                let near_s = peaks.iter().any(|&(s, _, _)| s * 5 >= 4 * z);
                let near_i = peaks.iter().any(|&(_, i, _)| i * 5 >= 4 * z);
                ok &= peaks.len() == 2 && near_s && near_i;
                bistable = format!("peaks at (0.8, 0.03): {peaks:?}");
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 120.0;
    report(
        1,
        ok,
        &format!("{}; {bistable}; {secs:.1}s", cells.join(" ")),
    );
}

#[test]
fn criterion_2_neutral_symmetry() {
    let p = ModelParams {
        beta: 0.0,
        ..ModelParams::default()
    };
    let (_, res) = solve(&p, StationaryOptions::default()).unwrap();
    let a = res.adoption;
    let err = [a.s, a.i, a.a]
        .iter()
        .map(|x| (x - 1.0 / 3.0).abs())
        .fold(0.0, f64::max);
    report(2, err < 1e-9, &format!("max |p - 1/3| = {err:.3e}"));
}

#[test]
fn criterion_3_monte_carlo_matches_exact() {
    let p = ModelParams {
        z: 20,
        n: 10,
        ..ModelParams::default()
    };
    let cfg = SimConfig {
        steps: 20_100_000,
        burnin: 100_000,
        thinning: 1,
        seed: 1,
        initial: central_state(&p),
    };
    let sim = simulate(&p, &cfg).unwrap();
    let model = TransitionModel::build(&p).unwrap();
    let exact = stationary(&model, StationaryOptions::default()).unwrap();
    let tv = total_variation(&sim.freqs, &exact.probs);
    report(
        3,
        tv < 0.02,
        &format!("TV = {tv:.4}, seed 1, {} samples", sim.samples),
    );
}

#[test]
fn criterion_4_payoff_identities() {
    let d = ModelParams::default();
    let mut worst: f64 = 0.0;
    let mut quad: f64 = 0.0;
    let sets = [
        d.clone(),
        ModelParams {
            r: 0.001,
            gamma: 0.5,
            ..d.clone()
        },
        ModelParams {
            p: 0.35,
            q: 0.25,
            r: 0.2,
            alpha: 0.5,
            c: 0.1,
            delta1: 0.3,
            ..d.clone()
        },
        ModelParams {
            r: 0.0,
            gamma: 1.0,
            delta2: 0.2,
            ..d.clone()
        },
    ];
    for p in &sets {
        let pa = loner_payoff(p).unwrap();
        worst = worst.max((pool_payoff(1, p).unwrap() - pa).abs());
        let flat = ModelParams {
            delta1: 0.0,
            ..p.clone()
        };
        for k in 1..=p.n {
            worst = worst.max((pool_payoff(k, &flat).unwrap() - pa).abs());
        }
        let exact = ModelParams {
            q: p.p,
            r: 0.0,
            ..p.clone()
        };
        let target = utility(exact.w - exact.c, exact.gamma).unwrap();
        worst = worst.max((index_payoff(1, &exact).unwrap() - target).abs());
        for k in 1..=4 {
            worst = worst.max((pool_payoff(k, p).unwrap() - brute_pool(k, p)).abs());
            worst = worst.max((index_payoff(k, p).unwrap() - brute_index(k, p)).abs());
        }
        for l in 1..=20 {
            let gap = index_payoff(l, p).unwrap() - index_payoff_quadrinomial(l, p).unwrap();
            quad = quad.max(gap.abs());
        }
    }
    report(
        4,
        worst < 1e-12 && quad < 1e-10,
        &format!("identities {worst:.2e}, quadrinomial vs trinomial {quad:.2e}"),
    );
}

fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
    loop {
        let p: f64 = rng.random_range(0.05..0.5);
        let q: f64 = rng.random_range(0.05..0.5);
        let r = rng.random_range(0.0..p.min(1.0 - q));
        let alpha = rng.random_range(0.1..0.95);
        let cand = ModelParams {
            p,
            q,
            r,
            alpha,
            gamma: rng.random_range(0.2..3.0),
            delta1: rng.random_range(0.0..0.3),
            delta2: rng.random_range(0.0..0.3),
            c: rng.random_range(0.0..(1.0 - alpha)),
            beta: rng.random_range(0.0..20.0),
            mu: rng.random_range(0.001..0.2),
            ..ModelParams::default()
        };
        if cand.violations().is_empty() {
            return cand;
        }
    }
}

#[test]
fn criterion_5_kernel_integrity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut row_err: f64 = 0.0;
    let mut res_max: f64 = 0.0;
    let mut states = 0;
    for _ in 0..20 {
        let p = random_params(&mut rng);
        let model = TransitionModel::build(&p).unwrap();
        states = model.len();
        for k in 0..model.len() {
            let (_, vals) = model.row(k);
            row_err = row_err.max((vals.iter().sum::<f64>() - 1.0).abs());
        }
        let res = stationary(&model, StationaryOptions::default()).unwrap();
        res_max = res_max.max(residual(&model, &res.probs));
    }
    report(
        5,
        states == 1326 && row_err <= 1e-12 && res_max < 1e-10,
        &format!("{states} states, max row error {row_err:.2e}, max residual {res_max:.2e}"),
    );
}

#[test]
fn criterion_6_premium_optimization() {
    let grid = linear_grid(0.16, 0.198, 0.002);
    let mut ok = true;
    let mut last = f64::INFINITY;
    let mut notes = Vec::new();
    for r in [0.001, 0.03, 0.1] {
        let p = ModelParams {
            alpha: 0.8,
            r,
            ..ModelParams::default()
        };
        let curve = optimal_premium(&p, &grid, StationaryOptions::default()).unwrap();
        let best = curve.max_profit();
        ok &= curve.is_interior() && best < last;
        last = best;
        notes.push(format!(
            "r={r}: c*={:.3} profit={best:.4} interior={}",
            curve.c_star(),
            curve.is_interior()
        ));
    }
    report(6, ok, &notes.join("; "));
}

#[test]
fn criterion_7_monotone_trends() {
    let opts = StationaryOptions::default();
    let mut ok = true;
    let mut notes = Vec::new();

    let mut prev = f64::NEG_INFINITY;
    let mut trace = Vec::new();
    for gamma in [0.5, 0.65, 0.8, 0.95] {
        let p = ModelParams {
            gamma,
            ..grid_params(0.8, 0.001)
        };
        let (_, res) = solve(&p, opts).unwrap();
        ok &= res.adoption.i >= prev - SLACK;
        prev = res.adoption.i;
        trace.push(format!("{:.3}", res.adoption.i));
    }
    notes.push(format!("gamma: p_I {}", trace.join(",")));

    for r in [0.001, 0.03, 0.1] {
        let (mut s_prev, mut i_prev) = (f64::NEG_INFINITY, f64::INFINITY);
        let mut trace = Vec::new();
        for n in [10, 20, 30, 40] {
            let p = ModelParams {
                n,
                ..grid_params(0.8, r)
            };
            let (_, res) = solve(&p, opts).unwrap();
            let a = res.adoption;
            ok &= a.s >= s_prev - SLACK && a.i <= i_prev + SLACK;
            s_prev = a.s;
            i_prev = a.i;
            trace.push(format!("{:.3}/{:.3}", a.s, a.i));
        }
        notes.push(format!("N at r={r}: p_S/p_I {}", trace.join(",")));
    }
    report(7, ok, &notes.join("; "));
}

#[test]
fn criterion_8_restricted_modes() {
    let opts = StationaryOptions::default();
    let hazard = ModelParams {
        p: 0.5,
        q: 0.5,
        alpha: 0.8,
        r: 0.03,
        ..ModelParams::default()
    };
    let sa = restrict_strategies(&hazard, &[Strategy::S, Strategy::A]).unwrap();
    let model = TransitionModel::build(&sa).unwrap();
    let mut row_err: f64 = 0.0;
    let mut only_sa = true;
    for k in 0..model.len() {
        let (cols, vals) = model.row(k);
        row_err = row_err.max((vals.iter().sum::<f64>() - 1.0).abs());
        only_sa &= cols.iter().all(|&j| model.space().state(j).i == 0);
    }
    let res = stationary(&model, opts).unwrap();
    let sa_ok = model.len() == sa.z + 1
        && row_err <= 1e-12
        && only_sa
        && res.adoption.i == 0.0
        && res.adoption.argmax() == Regime::S;

    let si = ModelParams {
        strategies: StrategySet::new(&[Strategy::S, Strategy::I]).unwrap(),
        ..grid_params(0.8, 0.001)
    };
    let (si_model, si_res) = solve(&si, opts).unwrap();
    let si_ok = si_model.len() == si.z + 1 && si_res.adoption.argmax() == Regime::I;

    report(
        8,
        sa_ok && si_ok,
        &format!(
            "{{S,A}}: {} states, row error {row_err:.2e}, p_S={:.3}, argmax {}; {{S,I}}: p_I={:.3}, argmax {}",
            model.len(),
            res.adoption.s,
            res.adoption.argmax(),
            si_res.adoption.i,
            si_res.adoption.argmax()
        ),
    );
}

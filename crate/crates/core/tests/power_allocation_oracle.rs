mod common;

use common::{random_link, random_unit, rng};
use rand::Rng;
use uavdm_core::ais::{alternate, optimize_point_grid};
use uavdm_core::beamforming::leakage_pair;
use uavdm_core::power_allocation::stationary_points;
use uavdm_core::rates::rate_difference;
use uavdm_core::{
    beta_grid_oracle, optimal_beta, optimize_point, AisConfig, BeamformingPair, Candidate,
    LinkState,
};

fn random_pair<R: Rng>(r: &mut R, m: usize) -> BeamformingPair {
    BeamformingPair::new(random_unit(r, m), random_unit(r, m)).unwrap()
}

/// Exhaustive search at `1e-4`, then at `1e-8` within one coarse step of the
/// coarse winner. Random beamformers can give `f` a spike near `beta = 1`
/// narrower than the coarse step.
fn refined_search(link: &LinkState, pair: &BeamformingPair) -> (f64, f64) {
    let (coarse, _) = beta_grid_oracle(link, pair, 1e-4).unwrap();
    let lo = (coarse - 1e-4).max(0.0);
    let hi = (coarse + 1e-4).min(1.0);
    let n = ((hi - lo) / 1e-8).round() as usize;
    (0..=n)
        .map(|k| (lo + (hi - lo) * k as f64 / n as f64).min(1.0))
        .map(|b| (b, rate_difference(link, pair, b).unwrap()))
        .fold((0.0, f64::NEG_INFINITY), |best, x| {
            if x.1 >= best.1 {
                x
            } else {
                best
            }
        })
}

#[test]
fn closed_form_matches_grid_search_on_leakage_pairs() {
    let mut r = rng("pa vs grid", 21);
    for i in 0..300 {
        let m = [4, 8, 16][i % 3];
        let link = random_link(&mut r, m, [10.0, 20.0, 30.0][(i / 3) % 3]);
        let pair = leakage_pair(&link, r.random_range(0.0..1.0)).unwrap();
        let sol = optimal_beta(&link, &pair).unwrap();
        let (grid_beta, grid_f) = beta_grid_oracle(&link, &pair, 1e-4).unwrap();
        assert!(
            (sol.secrecy_rate() - grid_f.max(0.0)).abs() <= 1e-6,
            "instance {i}: closed {} ({:?}) vs grid {grid_f} at {grid_beta}",
            sol.secrecy_rate_at_beta,
            sol.winning_candidate
        );
    }
}

#[test]
fn closed_form_matches_refined_search_on_random_pairs() {
    let mut r = rng("pa vs refined", 28);
    let mut interior = 0;
    for i in 0..90 {
        let m = [4, 8, 16][i % 3];
        let link = random_link(&mut r, m, [10.0, 20.0, 30.0][(i / 3) % 3]);
        let pair = random_pair(&mut r, m);
        let sol = optimal_beta(&link, &pair).unwrap();
        let (_, grid_f) = beta_grid_oracle(&link, &pair, 1e-4).unwrap();
        assert!(
            sol.secrecy_rate() >= grid_f.max(0.0) - 1e-9,
            "instance {i}: grid beats closed form"
        );
        let (fine_beta, fine_f) = refined_search(&link, &pair);
        assert!(
            (sol.secrecy_rate() - fine_f.max(0.0)).abs() <= 1e-6,
            "instance {i}: closed {} at {} ({:?}) vs refined {fine_f} at {fine_beta}",
            sol.secrecy_rate_at_beta,
            sol.beta_star,
            sol.winning_candidate
        );
        if sol.beta_star < 1.0 {
            interior += 1;
        }
    }
    assert!(interior > 0, "no instance exercised an interior optimum");
}

#[test]
fn closed_form_dominates_every_grid_point() {
    let mut r = rng("pa dominance", 22);
    for i in 0..40 {
        let link = random_link(&mut r, 8, 10.0);
        let pair = random_pair(&mut r, 8);
        let sol = optimal_beta(&link, &pair).unwrap();
        for k in 1..=10_000 {
            let beta = k as f64 * 1e-4;
            let f = rate_difference(&link, &pair, beta).unwrap();
            assert!(
                sol.secrecy_rate() >= f - 1e-9,
                "instance {i}: f({beta}) = {f} beats {}",
                sol.secrecy_rate()
            );
        }
    }
}

#[test]
fn reported_rate_is_recomputable() {
    let mut r = rng("pa reporting", 23);
    for _ in 0..100 {
        let link = random_link(&mut r, 8, 20.0);
        let pair = random_pair(&mut r, 8);
        let sol = optimal_beta(&link, &pair).unwrap();
        assert!((0.0..=1.0).contains(&sol.beta_star));
        let f = rate_difference(&link, &pair, sol.beta_star).unwrap();
        assert!((sol.secrecy_rate_at_beta - f).abs() <= 1e-9);
        let sp = stationary_points(&sol.coefficients);
        assert_eq!(sp.delta, sol.delta);
        match sol.winning_candidate {
            Candidate::Root1 => assert_eq!(Some(sol.beta_star), sp.root1),
            Candidate::Root2 => assert_eq!(Some(sol.beta_star), sp.root2),
            Candidate::DegenerateRoot => assert_eq!(Some(sol.beta_star), sp.root3),
            Candidate::Endpoint1 | Candidate::ConstantFunction => assert_eq!(sol.beta_star, 1.0),
        }
    }
}

#[test]
fn pa_step_is_never_worse_than_the_candidates() {
    let mut r = rng("ais pa step", 24);
    for _ in 0..50 {
        let link = random_link(&mut r, 8, 20.0);
        let out = optimize_point(&link, &AisConfig::default()).unwrap();
        for w in out.trace.records.windows(2) {
            let sol = optimal_beta(&link, &w[0].pair).unwrap();
            assert_eq!(sol.beta_star, w[1].beta);
            let here = rate_difference(&link, &w[0].pair, w[1].beta).unwrap();
            assert!(here >= rate_difference(&link, &w[0].pair, 1.0).unwrap() - 1e-9);
            let sp = stationary_points(&sol.coefficients);
            for root in [sp.root1, sp.root2, sp.root3]
                .into_iter()
                .flatten()
                .filter(|b| *b > 0.0 && *b < 1.0)
            {
                assert!(here >= rate_difference(&link, &w[0].pair, root).unwrap() - 1e-9);
            }
        }
    }
}

#[test]
fn trace_is_consistent() {
    let mut r = rng("ais trace", 25);
    for _ in 0..50 {
        let m = [4, 8, 16][r.random_range(0..3)];
        let link = random_link(&mut r, m, 30.0);
        let cfg = AisConfig::default();
        let out = optimize_point(&link, &cfg).unwrap();
        let t = &out.trace;
        assert_eq!(t.records.len(), t.iterations_used + 1);
        assert!(t.iterations_used <= cfg.max_iterations);
        assert_eq!(t.records[0].beta, cfg.beta_init);
        for rec in &t.records {
            assert_eq!(rec.pair, leakage_pair(&link, rec.beta).unwrap());
            assert_eq!(
                rec.value,
                rate_difference(&link, &rec.pair, rec.beta).unwrap()
            );
        }
        if t.converged {
            let n = t.records.len();
            assert!((t.records[n - 1].value - t.records[n - 2].value).abs() <= cfg.epsilon);
            assert_eq!(out.beta, t.records[n - 1].beta);
        }
        let rates = out.rates(&link).unwrap();
        assert!((rates.secrecy_rate - out.secrecy_rate()).abs() < 1e-12);
    }
}

#[test]
fn grid_driven_loop_tracks_closed_form_loop() {
    let mut r = rng("ais grid", 26);
    for _ in 0..10 {
        let link = random_link(&mut r, 8, 20.0);
        let cfg = AisConfig::default();
        let closed = optimize_point(&link, &cfg).unwrap();
        let grid = optimize_point_grid(&link, &cfg, 1e-4).unwrap();
        assert!((closed.secrecy_rate() - grid.secrecy_rate()).abs() <= 1e-5);
    }
}

#[test]
fn alternate_accepts_any_allocator() {
    let mut r = rng("ais generic", 27);
    let link = random_link(&mut r, 4, 10.0);
    let cfg = AisConfig {
        max_iterations: 7,
        ..AisConfig::default()
    };
    let mut calls = 0;
    let out = alternate(&link, &cfg, |_| {
        calls += 1;
        Ok((0.5, ()))
    })
    .unwrap();
    // the same split twice in a row gives the same value, so it stops at 2
    assert_eq!(calls, 2);
    assert!(out.trace.converged);
    assert_eq!(out.beta, 0.5);
}

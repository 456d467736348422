//! Report-level integration checks on Adult-scale synthetic data.

use dpboost::eval::{rademacher_accuracy_estimate, rademacher_estimate, run_grid, GridSpec};
use dpboost::synth::census_like;
use dpboost_core::{lazy_bregman_boost, Accounting, BoostConfig, LearnerKind};

/// The margin/Rademacher generalization bound is far more pessimistic than
/// the observed holdout accuracy: the gap exceeds 0.2 at this scale.
#[test]
fn rademacher_bound_is_far_below_observed_accuracy() {
    let (train, test) = census_like(32_561, 16_281, 42);
    let cfg = BoostConfig {
        kappa: 0.35,
        lambda: 0.45,
        rounds: 39,
        learner: LearnerKind::DpOneRule,
        tree_nodes: 1,
        epsilon: 1.0,
        delta: 0.0,
        accounting: Accounting::Basic,
        beta: 0.1,
        seed: 0,
        early_stop_window: None,
    };
    let ens = lazy_bregman_boost(&train, &cfg).unwrap();
    let holdout = ens.accuracy(&test);
    let complexity = rademacher_estimate(&train, 200, 7);
    let (estimate, theta) = rademacher_accuracy_estimate(&ens, &train, complexity).unwrap();
    assert!(
        estimate < holdout - 0.2,
        "bound-based estimate {estimate:.3} (theta {theta}) vs holdout {holdout:.3}"
    );
    // The complexity itself is small at this n; the pessimism comes from
    // the margin-loss term, not a loose complexity estimate.
    assert!(complexity < 0.05, "complexity {complexity}");
}

/// Smaller budgets select fewer boosting rounds: the cross-validated
/// winner's tau at a tight epsilon never exceeds the winner's tau at a
/// generous one.
#[test]
fn grid_winner_tau_grows_with_budget() {
    let (train, _) = census_like(6_000, 1, 11);
    let base = BoostConfig {
        kappa: 0.35,
        lambda: 0.5,
        rounds: 1,
        learner: LearnerKind::DpOneRule,
        tree_nodes: 1,
        epsilon: 1.0,
        delta: 0.0,
        accounting: Accounting::Basic,
        beta: 0.1,
        seed: 0,
        early_stop_window: None,
    };
    let spec = GridSpec {
        epsilons: vec![0.05, 3.0],
        taus: vec![5, 19, 49],
        lambdas: vec![0.5],
        kappas: vec![0.35],
        folds: 3,
        repeats: 2,
    };
    let outcome = run_grid(&train, &base, &spec, 4).unwrap();
    let tau_at = |eps: f64| {
        outcome
            .winners
            .iter()
            .find(|w| w.epsilon == eps)
            .expect("winner per epsilon")
            .tau
    };
    assert!(
        tau_at(0.05) <= tau_at(3.0),
        "tight budget picked tau {} vs {} at the generous one",
        tau_at(0.05),
        tau_at(3.0)
    );
}

//! Built-in audit scenarios: fixed neighboring pairs and mechanism
//! wrappers whose empirical epsilon can be compared against declared
//! budgets.

use dpboost_core::{
    audit_mechanism, audit_weak_learner, train_1r, train_dp_1r, train_dp_topdown,
    weighted_exponential_mechanism, weighted_report_noisy_max, AuditReport, AuditSide,
    BooleanDataset, NoiseRate, RngStream, SmoothDistribution,
};

use crate::DataError;

/// An 8-example neighboring pair over 2 features, crafted so the exact
/// stump argmin flips across the substitution: x0 wins on the first
/// dataset (error 2/8 vs 3/8), x1 wins on the second (3/8 vs 2/8).
pub fn toy_neighboring_pair() -> (BooleanDataset, BooleanDataset) {
    let names = vec!["f0".to_string(), "f1".to_string()];
    let rows: Vec<Vec<usize>> = vec![
        vec![0, 1],
        vec![0, 1],
        vec![],
        vec![],
        vec![0],
        vec![1],
        vec![1],
        vec![0, 1],
    ];
    let labels = vec![1, 1, -1, -1, 1, -1, 1, -1];
    let a = BooleanDataset::from_sparse_rows(2, &rows, labels, names).unwrap();
    // Substitute row 4: (x0=1, x1=0, +1) becomes (x0=1, x1=0, -1).
    let b = a.substitute(4, &[0], -1).unwrap();
    (a, b)
}

/// Supported audit targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditTarget {
    Dp1r,
    DpTopDown,
    Wem,
    Wrnm,
    /// Non-private exact argmin; the control that any sound audit must
    /// flag.
    Argmin1r,
}

impl AuditTarget {
    pub fn parse(name: &str) -> Result<Self, DataError> {
        match name {
            "dp-1r" => Ok(AuditTarget::Dp1r),
            "dp-topdown" => Ok(AuditTarget::DpTopDown),
            "wem" => Ok(AuditTarget::Wem),
            "wrnm" => Ok(AuditTarget::Wrnm),
            "argmin-1r" => Ok(AuditTarget::Argmin1r),
            other => Err(DataError::Schema(format!(
                "unknown audit mechanism `{other}`"
            ))),
        }
    }
}

/// Run the built-in audit for a target at a declared epsilon. Returns the
/// report plus the declared epsilon (None when the target is non-private
/// or trivially 0-DP on identical inputs).
pub fn run_audit(
    target: AuditTarget,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<(AuditReport, Option<f64>), DataError> {
    let rng = RngStream::new(seed, 0xA0D1);
    match target {
        AuditTarget::Dp1r => {
            let (a, b) = toy_neighboring_pair();
            let mu = SmoothDistribution::uniform(a.n()).unwrap();
            // Declared epsilon = 4 eta zeta with the promise zeta = 1/n on
            // uniform weights, so eta = epsilon n / 4.
            let eta = NoiseRate::new(epsilon * a.n() as f64 / 4.0)
                .map_err(|e| DataError::Train(e.to_string()))?;
            let report = audit_weak_learner(
                |ds, mu, r| {
                    train_dp_1r(ds, mu, eta, r)
                        .expect("valid inputs")
                        .canonical_string()
                },
                &a,
                &b,
                &mu,
                &mu,
                trials,
                &rng,
            )
            .map_err(|e| DataError::Train(e.to_string()))?;
            Ok((report, Some(epsilon)))
        }
        AuditTarget::DpTopDown => {
            let (a, b) = toy_neighboring_pair();
            let mu = SmoothDistribution::uniform(a.n()).unwrap();
            // One internal node: epsilon = 16 t eta zeta, zeta = 1/n.
            let eta = NoiseRate::new(epsilon * a.n() as f64 / 16.0)
                .map_err(|e| DataError::Train(e.to_string()))?;
            let report = audit_weak_learner(
                |ds, mu, r| {
                    train_dp_topdown(ds, mu, 1, eta, r)
                        .expect("valid inputs")
                        .canonical_string()
                },
                &a,
                &b,
                &mu,
                &mu,
                trials,
                &rng,
            )
            .map_err(|e| DataError::Train(e.to_string()))?;
            Ok((report, Some(epsilon)))
        }
        AuditTarget::Argmin1r => {
            let (a, b) = toy_neighboring_pair();
            let mu = SmoothDistribution::uniform(a.n()).unwrap();
            let report = audit_weak_learner(
                |ds, mu, _| train_1r(ds, mu).expect("valid inputs").canonical_string(),
                &a,
                &b,
                &mu,
                &mu,
                trials,
                &rng,
            )
            .map_err(|e| DataError::Train(e.to_string()))?;
            Ok((report, None))
        }
        AuditTarget::Wem => {
            // Identical score vectors on both sides: outcome distributions
            // coincide, so the estimate measures pure sampling error.
            let scores = [0.0, 0.0, 0.0, 0.0];
            let report = audit_mechanism(
                |_, r| {
                    format!(
                        "{}",
                        weighted_exponential_mechanism(&scores, 2.0, r).unwrap()
                    )
                },
                trials,
                &rng,
            );
            Ok((report, Some(0.0)))
        }
        AuditTarget::Wrnm => {
            // Shifted scores: noisy-max is shift invariant, so this pair
            // is also distributionally identical.
            let base = [0.5, 1.5, 0.2];
            let shifted: Vec<f64> = base.iter().map(|s| s + 100.0).collect();
            let report = audit_mechanism(
                |side, r| {
                    let scores: &[f64] = if side == AuditSide::A {
                        &base
                    } else {
                        &shifted
                    };
                    format!("{}", weighted_report_noisy_max(scores, 3.0, r).unwrap())
                },
                trials,
                &rng,
            );
            Ok((report, Some(0.0)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dpboost_core::{stump_errors, Error};

    #[test]
    fn toy_pair_is_neighboring_with_flipped_argmin() {
        let (a, b) = toy_neighboring_pair();
        assert_eq!(a.differing_records(&b).unwrap(), 1);
        let mu = SmoothDistribution::uniform(8).unwrap();
        let errs_a = stump_errors(&a, &mu).unwrap();
        let errs_b = stump_errors(&b, &mu).unwrap();
        // x0 (index 0) strictly best on A; x1 (index 2) strictly best on B.
        assert!((errs_a[0] - 0.25).abs() < 1e-12, "{errs_a:?}");
        assert!((errs_a[2] - 0.375).abs() < 1e-12);
        assert!((errs_b[0] - 0.375).abs() < 1e-12, "{errs_b:?}");
        assert!((errs_b[2] - 0.25).abs() < 1e-12);
        assert_eq!(train_1r(&a, &mu).unwrap().canonical_string(), "x0");
        assert_eq!(train_1r(&b, &mu).unwrap().canonical_string(), "x1");
    }

    #[test]
    fn non_private_argmin_is_flagged() {
        let (report, _) = run_audit(AuditTarget::Argmin1r, 0.0, 10_000, 5).unwrap();
        assert!(
            report.epsilon_hat.is_infinite(),
            "eps_hat {}",
            report.epsilon_hat
        );
    }

    #[test]
    fn wem_self_audit_is_tight() {
        let (report, _) = run_audit(AuditTarget::Wem, 0.0, 100_000, 6).unwrap();
        assert!(report.epsilon_hat <= 0.05, "eps_hat {}", report.epsilon_hat);
    }

    #[test]
    fn wrnm_shift_audit_is_tight() {
        let (report, _) = run_audit(AuditTarget::Wrnm, 0.0, 100_000, 7).unwrap();
        assert!(report.epsilon_hat <= 0.05, "eps_hat {}", report.epsilon_hat);
    }

    #[test]
    fn unknown_mechanism_is_a_usage_error() {
        assert!(AuditTarget::parse("gauss").is_err());
    }

    #[test]
    fn audit_rejects_too_few_trials() {
        let (a, b) = toy_neighboring_pair();
        let mu = SmoothDistribution::uniform(8).unwrap();
        let rng = RngStream::new(0, 0);
        let err = audit_weak_learner(
            |ds, mu, _| train_1r(ds, mu).unwrap().canonical_string(),
            &a,
            &b,
            &mu,
            &mu,
            100,
            &rng,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { .. }));
    }
}

//! Smooth boosting by lazy-Bregman reweighting.
//!
//! Each round normalizes the current bounded measure to a kappa-smooth
//! distribution, calls the weak learner on it, exponentially reweights by
//! the cumulative margins, and projects back onto the kappa-dense
//! measures. The final predictor is the unweighted majority vote.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::BooleanDataset;
use crate::error::{Error, Result};
use crate::float::exp;
use crate::learners::{
    train_1r, train_dp_1r, train_dp_topdown, weighted_error, Hypothesis, Predict,
};
use crate::measures::{bregman_project, Measure};
use crate::mechanisms::{
    advanced_composition, basic_composition, noise_rate_1r, noise_rate_topdown,
    solve_round_budget_approx, NoiseRate, PrivacyBudget,
};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerKind {
    /// Exact (non-private) 1-Rule induction.
    OneRule,
    /// 1-Rule selection through the weighted exponential mechanism.
    DpOneRule,
    /// Differentially private TopDown trees.
    DpTopDown,
}

impl LearnerKind {
    pub fn is_private(&self) -> bool {
        !matches!(self, LearnerKind::OneRule)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Accounting {
    /// Split epsilon evenly across rounds (pure DP).
    Basic,
    /// Advanced sequential composition; requires delta > 0.
    Advanced,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoostConfig {
    /// Smoothness / target training-error parameter, in (0, 1).
    pub kappa: f64,
    /// Learning rate for the exponential update, in (0, 1).
    pub lambda: f64,
    /// Number of boosting rounds.
    pub rounds: usize,
    pub learner: LearnerKind,
    /// Internal node count for the tree learner; ignored by stumps.
    pub tree_nodes: usize,
    /// Total privacy budget; ignored by the non-private learner.
    pub epsilon: f64,
    pub delta: f64,
    pub accounting: Accounting,
    /// Weak-learner failure probability, used only in reported bounds.
    pub beta: f64,
    pub seed: u64,
    /// Stop after this many consecutive rounds of negative recorded
    /// advantage. Off by default: the loop is non-adaptive, and stopping
    /// rules interact with accounting (budget for unrun rounds is simply
    /// left unspent and reported as such).
    pub early_stop_window: Option<usize>,
}

/// The schedule under which the training-error guarantee is stated for a
/// weak learner of advantage gamma: lambda = gamma / 4 and
/// tau = ceil(16 ln(1/kappa) / gamma^2). Grid search is the operational
/// policy; this is the analytical reference point.
pub fn theorem_schedule(gamma: f64, kappa: f64) -> Result<(f64, usize)> {
    if !(gamma > 0.0 && gamma <= 0.5) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: "advantage must lie in (0, 1/2]",
        });
    }
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::InvalidParameter {
            name: "kappa",
            reason: "kappa must lie strictly inside (0, 1)",
        });
    }
    let lambda = gamma / 4.0;
    let tau = crate::float::ceil(16.0 * crate::float::ln(1.0 / kappa) / (gamma * gamma));
    Ok((lambda, (tau as usize).max(1)))
}

impl BoostConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            // kappa = 1 forces the uniform distribution (no reweighting);
            // kappa -> 0 removes the smoothness promise entirely.
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: "kappa must lie strictly inside (0, 1)",
            });
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: "lambda must lie strictly inside (0, 1)",
            });
        }
        if self.rounds == 0 {
            return Err(Error::InvalidParameter {
                name: "rounds",
                reason: "boosting needs at least one round",
            });
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: "beta must lie in (0, 1)",
            });
        }
        if self.learner.is_private() {
            if self.epsilon <= 0.0 || !self.epsilon.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "epsilon",
                    reason: "private learners need a positive finite budget",
                });
            }
            match self.accounting {
                Accounting::Basic => {
                    if self.delta != 0.0 {
                        return Err(Error::InvalidParameter {
                            name: "delta",
                            reason: "basic accounting is pure DP; delta must be 0",
                        });
                    }
                }
                Accounting::Advanced => {
                    if !(self.delta > 0.0 && self.delta < 1.0) {
                        return Err(Error::InvalidParameter {
                            name: "delta",
                            reason: "advanced accounting requires delta in (0, 1)",
                        });
                    }
                }
            }
        }
        if self.learner == LearnerKind::DpTopDown && self.tree_nodes == 0 {
            return Err(Error::InvalidParameter {
                name: "tree_nodes",
                reason: "the tree learner needs at least one internal node",
            });
        }
        if self.early_stop_window == Some(0) {
            return Err(Error::InvalidParameter {
                name: "early_stop_window",
                reason: "the stop window must be at least one round",
            });
        }
        Ok(())
    }

    /// Statistical-distance promise the boosting loop furnishes to the
    /// weak learner: zeta = 1 / (kappa n).
    pub fn zeta(&self, n: usize) -> f64 {
        1.0 / (self.kappa * n as f64)
    }

    /// Per-round noise rate implied by the budget; `None` for the
    /// non-private learner.
    pub fn noise_rate(&self, n: usize) -> Result<Option<NoiseRate>> {
        match (self.learner, self.accounting) {
            (LearnerKind::OneRule, _) => Ok(None),
            (LearnerKind::DpOneRule, Accounting::Basic) => Ok(Some(noise_rate_1r(
                self.epsilon,
                self.kappa,
                n,
                self.rounds,
            )?)),
            (LearnerKind::DpTopDown, Accounting::Basic) => Ok(Some(noise_rate_topdown(
                self.epsilon,
                self.kappa,
                n,
                self.rounds,
                self.tree_nodes,
            )?)),
            (LearnerKind::DpOneRule, Accounting::Advanced) => {
                let eps_b = solve_round_budget_approx(self.epsilon, self.delta, self.rounds)?;
                // eps_b = 4 eta zeta with zeta = 1/(kappa n).
                Ok(Some(NoiseRate::new(eps_b * self.kappa * n as f64 / 4.0)?))
            }
            (LearnerKind::DpTopDown, Accounting::Advanced) => {
                let eps_b = solve_round_budget_approx(self.epsilon, self.delta, self.rounds)?;
                // eps_b = 16 t eta zeta.
                Ok(Some(NoiseRate::new(
                    eps_b * self.kappa * n as f64 / (16.0 * self.tree_nodes as f64),
                )?))
            }
        }
    }

    /// The declared total spend; `None` for the non-private learner.
    pub fn declared_budget(&self, n: usize) -> Result<Option<PrivacyBudget>> {
        if !self.learner.is_private() {
            return Ok(None);
        }
        Ok(Some(PrivacyBudget::new(
            self.epsilon,
            self.delta,
            self.zeta(n),
        )?))
    }
}

/// Per-round training telemetry.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    /// 1-based round index.
    pub round: usize,
    /// 1/2 minus the weighted error of the returned hypothesis on the
    /// distribution it was trained on.
    pub advantage: f64,
    /// Noise rate used this round; `None` for the non-private learner.
    pub eta: Option<f64>,
    /// Mass of the bounded measure before normalization.
    pub measure_mass: f64,
}

/// An ordered ensemble voted by unweighted majority.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub hypotheses: Vec<Hypothesis>,
    pub config: BoostConfig,
    pub trace: Vec<RoundRecord>,
    /// Feature count of the training data; prediction inputs must match.
    pub feature_count: usize,
    /// Training-set size; fixes zeta = 1/(kappa n) in the declared budget.
    pub train_n: usize,
}

/// Raw and normalized margins of an ensemble on a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Margins {
    /// Label-signed vote sums, each in [-tau, tau].
    pub raw: Vec<i64>,
    /// Raw margins divided by the ensemble size, each in [-1, 1].
    pub normalized: Vec<f64>,
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    /// Majority vote on example `i`; a tied vote predicts +1.
    pub fn majority_predict(&self, ds: &BooleanDataset, i: usize) -> i8 {
        let sum: i64 = self
            .hypotheses
            .iter()
            .map(|h| h.predict(ds, i) as i64)
            .sum();
        if sum >= 0 {
            1
        } else {
            -1
        }
    }

    /// Fraction of examples on which the majority vote matches the label.
    pub fn accuracy(&self, ds: &BooleanDataset) -> f64 {
        let correct = (0..ds.n())
            .filter(|&i| self.majority_predict(ds, i) == ds.label(i))
            .count();
        correct as f64 / ds.n() as f64
    }

    pub fn margins(&self, ds: &BooleanDataset) -> Result<Margins> {
        if self.is_empty() {
            return Err(Error::EmptyInput("ensemble"));
        }
        let tau = self.hypotheses.len() as f64;
        let mut raw = vec![0i64; ds.n()];
        for h in &self.hypotheses {
            for (i, m) in raw.iter_mut().enumerate() {
                *m += h.predict(ds, i) as i64;
            }
        }
        for (i, m) in raw.iter_mut().enumerate() {
            *m *= ds.label(i) as i64;
        }
        let normalized = raw.iter().map(|&m| m as f64 / tau).collect();
        Ok(Margins { raw, normalized })
    }

    /// Recorded per-round advantages gamma_t = 1/2 - err_t.
    pub fn advantage_curve(&self) -> Result<Vec<f64>> {
        if self.trace.is_empty() {
            return Err(Error::MissingTrace);
        }
        Ok(self.trace.iter().map(|r| r.advantage).collect())
    }

    /// Distinct feature indices used across the whole ensemble.
    pub fn features_used(&self) -> Vec<usize> {
        let mut fs: Vec<usize> = self
            .hypotheses
            .iter()
            .flat_map(|h| h.features_used())
            .collect();
        fs.sort_unstable();
        fs.dedup();
        fs
    }

    pub fn declared_budget(&self) -> Option<PrivacyBudget> {
        self.config.declared_budget(self.train_n).ok().flatten()
    }

    /// Budget actually consumed by the rounds that ran; less than the
    /// declared epsilon when an early stop left rounds unspent.
    pub fn consumed_budget(&self) -> Option<(f64, f64)> {
        if !self.config.learner.is_private() {
            return None;
        }
        let rounds_run = self.trace.len();
        let eta = self.trace.first().and_then(|r| r.eta)?;
        let zeta = self.config.zeta(self.train_n);
        let per_round = match self.config.learner {
            LearnerKind::DpOneRule => 4.0 * eta * zeta,
            LearnerKind::DpTopDown => 16.0 * self.config.tree_nodes as f64 * eta * zeta,
            LearnerKind::OneRule => unreachable!("non-private handled above"),
        };
        match self.config.accounting {
            Accounting::Basic => Some(basic_composition(rounds_run, per_round, 0.0)),
            Accounting::Advanced => {
                advanced_composition(rounds_run, per_round, 0.0, self.config.delta).ok()
            }
        }
    }
}

/// Weighted lazy-Bregman boosting.
///
/// Starts from the uniform bounded measure mu_1(i) = kappa. Round t
/// normalizes mu_t, trains a weak hypothesis on the resulting smooth
/// distribution, records its advantage, then sets
/// mu~_{t+1}(i) = exp(-lambda sigma_t(i)) kappa from the cumulative
/// margins sigma_t and projects onto the kappa-dense measures.
pub fn lazy_bregman_boost(ds: &BooleanDataset, cfg: &BoostConfig) -> Result<Ensemble> {
    cfg.validate()?;
    let n = ds.n();
    let eta = cfg.noise_rate(n)?;
    let base_rng = RngStream::new(cfg.seed, 0);

    let mut weights = vec![cfg.kappa; n];
    let mut votes = vec![0i64; n];
    let mut hypotheses: Vec<Hypothesis> = Vec::with_capacity(cfg.rounds);
    let mut trace = Vec::with_capacity(cfg.rounds);
    let mut negative_streak = 0usize;

    for round in 1..=cfg.rounds {
        let measure = Measure::new(weights.clone())?;
        let mass = measure.mass();
        let dist = measure.normalize()?;
        debug_assert!(dist.is_kappa_smooth(cfg.kappa), "smoothness cap violated");

        let mut round_rng = base_rng.substream(round as u64);
        let hypothesis = match cfg.learner {
            LearnerKind::OneRule => Hypothesis::Rule(train_1r(ds, &dist)?),
            LearnerKind::DpOneRule => Hypothesis::Rule(train_dp_1r(
                ds,
                &dist,
                eta.expect("private learner has a noise rate"),
                &mut round_rng,
            )?),
            LearnerKind::DpTopDown => Hypothesis::Tree(train_dp_topdown(
                ds,
                &dist,
                cfg.tree_nodes,
                eta.expect("private learner has a noise rate"),
                &mut round_rng,
            )?),
        };
        let err = weighted_error(ds, &dist, &hypothesis)?;
        let advantage = 0.5 - err;
        trace.push(RoundRecord {
            round,
            advantage,
            eta: eta.map(|e| e.eta()),
            measure_mass: mass,
        });

        for (i, v) in votes.iter_mut().enumerate() {
            *v += hypothesis.predict(ds, i) as i64;
        }
        hypotheses.push(hypothesis);

        // Raw cumulative margin, not normalized; the update saturates at 1
        // where the exponential escapes the measure range (the projection
        // would cap it there anyway).
        for (i, w) in weights.iter_mut().enumerate() {
            let margin = (ds.label(i) as i64 * votes[i]) as f64;
            *w = (cfg.kappa * exp(-cfg.lambda * margin)).min(1.0);
        }
        weights = bregman_project(&weights, cfg.kappa)?.weights().to_vec();

        if let Some(window) = cfg.early_stop_window {
            negative_streak = if advantage < 0.0 {
                negative_streak + 1
            } else {
                0
            };
            if negative_streak >= window {
                break;
            }
        }
    }

    Ok(Ensemble {
        hypotheses,
        config: cfg.clone(),
        trace,
        feature_count: ds.r(),
        train_n: n,
    })
}

//! Randomness and privacy: Laplace noise, weighted selection mechanisms,
//! composition accounting, noise-rate calibration, and an empirical audit
//! harness for weak learners.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dataset::BooleanDataset;
use crate::error::{Error, Result};
use crate::float::{abs, exp, exp_m1, ln, sqrt, stable_sum};
use crate::measures::{statistical_distance, SmoothDistribution};
use crate::rng::RngStream;

/// Declared privacy parameters of a weak learner or a whole run.
/// `zeta` is the promised total-variation bound between the distributions
/// handed to the learner on neighboring runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyBudget {
    pub epsilon: f64,
    pub delta: f64,
    pub zeta: f64,
}

impl PrivacyBudget {
    pub fn new(epsilon: f64, delta: f64, zeta: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: "epsilon must be finite and nonnegative",
            });
        }
        if !delta.is_finite() || !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: "delta must lie in [0, 1)",
            });
        }
        if !zeta.is_finite() || !(zeta > 0.0 && zeta <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "zeta",
                reason: "zeta must lie in (0, 1]",
            });
        }
        Ok(Self {
            epsilon,
            delta,
            zeta,
        })
    }
}

/// Exponent scale for the selection mechanisms; Laplace noise uses scale 1/eta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseRate {
    eta: f64,
}

impl NoiseRate {
    pub fn new(eta: f64) -> Result<Self> {
        if !eta.is_finite() || eta <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "eta",
                reason: "noise rate must be positive and finite",
            });
        }
        Ok(Self { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Laplace quantile: the value whose CDF equals `u` for scale `b`.
/// `u = 1/2` maps to the median 0.
pub fn laplace_quantile(u: f64, scale: f64) -> f64 {
    debug_assert!(u > 0.0 && u < 1.0);
    let centered = u - 0.5;
    let sign = if centered < 0.0 { -1.0 } else { 1.0 };
    -scale * sign * ln(1.0 - 2.0 * abs(centered))
}

/// One draw from Laplace(0, scale) by inverse CDF of a uniform draw.
pub fn sample_laplace(scale: f64, rng: &mut RngStream) -> Result<f64> {
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "scale",
            reason: "Laplace scale must be positive and finite",
        });
    }
    Ok(laplace_quantile(rng.uniform(), scale))
}

/// Exact selection probabilities of the weighted exponential mechanism:
/// softmax of eta * scores, computed with a max shift.
pub fn wem_probabilities(scores: &[f64], eta: f64) -> Result<Vec<f64>> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("scores"));
    }
    if !eta.is_finite() || eta < 0.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: "eta must be finite and nonnegative",
        });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("score"));
    }
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = scores.iter().map(|&q| exp(eta * (q - max))).collect();
    let total = stable_sum(weights.iter().copied());
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// Weighted Exponential Mechanism: select index i with probability
/// proportional to exp(eta * scores[i]).
///
/// Sampling is one uniform draw against the cumulative max-shifted
/// weights. `eta = 0` degenerates to the uniform distribution.
pub fn weighted_exponential_mechanism(
    scores: &[f64],
    eta: f64,
    rng: &mut RngStream,
) -> Result<usize> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("scores"));
    }
    if !eta.is_finite() || eta < 0.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: "eta must be finite and nonnegative",
        });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("score"));
    }
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = scores.iter().map(|&q| exp(eta * (q - max))).collect();
    let total = stable_sum(weights.iter().copied());
    let mut u = rng.uniform() * total;
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            return Ok(i);
        }
        u -= w;
    }
    Ok(scores.len() - 1)
}

/// Weighted Report Noisy Max: add Laplace(1/eta) noise to every score and
/// return the argmax index. Exact ties after noise (a probability-zero
/// event) break toward the lowest index.
pub fn weighted_report_noisy_max(scores: &[f64], eta: f64, rng: &mut RngStream) -> Result<usize> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("scores"));
    }
    if !eta.is_finite() || eta <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: "noisy max requires positive finite eta",
        });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("score"));
    }
    let scale = 1.0 / eta;
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, &q) in scores.iter().enumerate() {
        let noisy = q + laplace_quantile(rng.uniform(), scale);
        if noisy > best_value {
            best = i;
            best_value = noisy;
        }
    }
    Ok(best)
}

/// Basic sequential composition: k mechanisms at (eps0, delta0) compose to
/// (k eps0, k delta0).
pub fn basic_composition(k: usize, eps0: f64, delta0: f64) -> (f64, f64) {
    (k as f64 * eps0, k as f64 * delta0)
}

/// Advanced sequential composition: for any delta' in (0, 1),
/// eps = sqrt(2 k ln(1/delta')) eps0 + k eps0 (e^{eps0} - 1) and
/// delta = delta' + k delta0.
pub fn advanced_composition(
    k: usize,
    eps0: f64,
    delta0: f64,
    delta_prime: f64,
) -> Result<(f64, f64)> {
    if !(delta_prime > 0.0 && delta_prime < 1.0) {
        return Err(Error::InvalidParameter {
            name: "delta_prime",
            reason: "advanced composition requires delta' in (0, 1)",
        });
    }
    let kf = k as f64;
    let eps = sqrt(2.0 * kf * ln(1.0 / delta_prime)) * eps0 + kf * eps0 * exp_m1(eps0);
    Ok((eps, delta_prime + kf * delta0))
}

/// Per-round noise rate for the stump learner under basic composition:
/// eta = eps kappa n / (4 tau).
pub fn noise_rate_1r(eps_total: f64, kappa: f64, n: usize, tau: usize) -> Result<NoiseRate> {
    if n == 0 || tau == 0 {
        return Err(Error::InvalidParameter {
            name: "n/tau",
            reason: "noise rate requires n >= 1 and tau >= 1",
        });
    }
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "kappa",
            reason: "kappa must lie in (0, 1]",
        });
    }
    NoiseRate::new(eps_total * kappa * n as f64 / (4.0 * tau as f64))
}

/// Advanced-composition spend of a single t-node tree induction at noise
/// rate eta under promise zeta: the split selections compose to
/// eps_tilde = t (8 eta zeta)^2 + 8 eta zeta sqrt(t ln(1/delta_tilde)),
/// and with the leaf-labeling half the learner is
/// (2 eps_tilde, delta_tilde, zeta)-DP. Returns (2 eps_tilde, delta_tilde).
pub fn topdown_advanced_budget(
    t: usize,
    eta: f64,
    zeta: f64,
    delta_tilde: f64,
) -> Result<(f64, f64)> {
    if t == 0 {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: "t must be >= 1",
        });
    }
    if !(delta_tilde > 0.0 && delta_tilde < 1.0) {
        return Err(Error::InvalidParameter {
            name: "delta_tilde",
            reason: "the advanced variant requires delta in (0, 1)",
        });
    }
    if eta <= 0.0 || !eta.is_finite() || !(zeta > 0.0 && zeta <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "eta/zeta",
            reason: "eta must be positive and zeta in (0, 1]",
        });
    }
    let step = 8.0 * eta * zeta;
    let eps_tilde = t as f64 * step * step + step * sqrt(t as f64 * ln(1.0 / delta_tilde));
    Ok((2.0 * eps_tilde, delta_tilde))
}

/// Per-round noise rate for the tree learner under basic composition:
/// eta = eps kappa n / (16 tau t).
pub fn noise_rate_topdown(
    eps_total: f64,
    kappa: f64,
    n: usize,
    tau: usize,
    t: usize,
) -> Result<NoiseRate> {
    if n == 0 || tau == 0 || t == 0 {
        return Err(Error::InvalidParameter {
            name: "n/tau/t",
            reason: "noise rate requires n, tau, t >= 1",
        });
    }
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "kappa",
            reason: "kappa must lie in (0, 1]",
        });
    }
    NoiseRate::new(eps_total * kappa * n as f64 / (16.0 * tau as f64 * t as f64))
}

/// Largest per-round eps_b whose advanced composition over tau rounds stays
/// within (eps_total, delta_total), taking delta' = delta_total (our weak
/// learners are pure DP, so no per-round delta accrues). Bisection to
/// relative tolerance 1e-9.
pub fn solve_round_budget_approx(eps_total: f64, delta_total: f64, tau: usize) -> Result<f64> {
    if !(delta_total > 0.0 && delta_total < 1.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            reason: "approximate-DP budget requires delta in (0, 1)",
        });
    }
    if tau == 0 {
        return Err(Error::InvalidParameter {
            name: "tau",
            reason: "tau must be >= 1",
        });
    }
    if eps_total <= 0.0 || !eps_total.is_finite() {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: "no positive per-round budget exists",
        });
    }
    let spend = |eps_b: f64| advanced_composition(tau, eps_b, 0.0, delta_total).map(|(e, _)| e);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while spend(hi)? <= eps_total {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: "budget does not bound the per-round epsilon",
            });
        }
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if spend(mid)? <= eps_total {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-9 * hi.max(f64::MIN_POSITIVE) {
            return Ok(lo);
        }
    }
}

/// Frequency comparison for one canonical outcome across the two audited
/// inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditOutcome {
    pub outcome: String,
    pub count_a: usize,
    pub count_b: usize,
    /// ln(freq_a / freq_b); infinite when one side never saw the outcome.
    pub log_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub outcomes: Vec<AuditOutcome>,
    /// Max |log ratio| over outcomes observed at least `min_count` times
    /// on either side.
    pub epsilon_hat: f64,
    pub trials: usize,
    pub min_count: usize,
}

/// Outcomes rarer than this on both sides are excluded from epsilon_hat;
/// their frequency ratios are dominated by sampling error.
pub const AUDIT_MIN_OUTCOME_COUNT: usize = 100;

/// Which of the two audited inputs a trial runs against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditSide {
    A,
    B,
}

/// Run a mechanism `trials` times per side on independent derived streams
/// and compare outcome frequencies.
pub fn audit_mechanism<F>(mut run: F, trials: usize, rng: &RngStream) -> AuditReport
where
    F: FnMut(AuditSide, &mut RngStream) -> String,
{
    let mut counts: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for t in 0..trials {
        let mut ra = rng.substream(2 * t as u64);
        counts.entry(run(AuditSide::A, &mut ra)).or_default().0 += 1;
        let mut rb = rng.substream(2 * t as u64 + 1);
        counts.entry(run(AuditSide::B, &mut rb)).or_default().1 += 1;
    }
    let mut outcomes = Vec::with_capacity(counts.len());
    let mut epsilon_hat = 0.0f64;
    for (outcome, (ca, cb)) in counts {
        let log_ratio = match (ca, cb) {
            (0, _) => f64::NEG_INFINITY,
            (_, 0) => f64::INFINITY,
            (a, b) => ln(a as f64 / b as f64),
        };
        if ca.max(cb) >= AUDIT_MIN_OUTCOME_COUNT && abs(log_ratio) > epsilon_hat {
            epsilon_hat = abs(log_ratio);
        }
        outcomes.push(AuditOutcome {
            outcome,
            count_a: ca,
            count_b: cb,
            log_ratio,
        });
    }
    AuditReport {
        outcomes,
        epsilon_hat,
        trials,
        min_count: AUDIT_MIN_OUTCOME_COUNT,
    }
}

/// Empirically stress-test the DP weak-learning guarantee of `mechanism`
/// on a neighboring pair of datasets and nearby distributions.
///
/// The mechanism's output must be canonicalized to a string so outcomes
/// can be counted across runs.
pub fn audit_weak_learner<M>(
    mut mechanism: M,
    data_a: &BooleanDataset,
    data_b: &BooleanDataset,
    mu_a: &SmoothDistribution,
    mu_b: &SmoothDistribution,
    trials: usize,
    rng: &RngStream,
) -> Result<AuditReport>
where
    M: FnMut(&BooleanDataset, &SmoothDistribution, &mut RngStream) -> String,
{
    let differing = data_a.differing_records(data_b)?;
    if differing > 1 {
        return Err(Error::NotNeighboring { differing });
    }
    if mu_a.len() != data_a.n() {
        return Err(Error::LengthMismatch {
            expected: data_a.n(),
            got: mu_a.len(),
        });
    }
    if mu_b.len() != data_b.n() {
        return Err(Error::LengthMismatch {
            expected: data_b.n(),
            got: mu_b.len(),
        });
    }
    if trials < 10_000 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "audits need at least 10^4 trials per side",
        });
    }
    // Recorded for the caller's zeta bookkeeping; the audit itself runs on
    // whatever pair it is given.
    let _tv = statistical_distance(mu_a.probs(), mu_b.probs())?;
    Ok(audit_mechanism(
        |side, r| match side {
            AuditSide::A => mechanism(data_a, mu_a, r),
            AuditSide::B => mechanism(data_b, mu_b, r),
        },
        trials,
        rng,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    #[test]
    fn laplace_median_is_zero() {
        assert_eq!(laplace_quantile(0.5, 1.0), 0.0);
        assert_eq!(laplace_quantile(0.5, 7.3), 0.0);
    }

    #[test]
    fn laplace_moments_match_closed_form() {
        let mut rng = RngStream::new(42, 0);
        let n = 100_000;
        let draws: Vec<f64> = (0..n)
            .map(|_| sample_laplace(1.0, &mut rng).unwrap())
            .collect();
        let mean = stable_sum(draws.iter().copied()) / n as f64;
        let var = stable_sum(draws.iter().map(|z| (z - mean) * (z - mean))) / n as f64;
        assert!(abs(mean) < 0.02, "mean {mean}");
        assert!(abs(var - 2.0) < 0.1, "var {var}");
    }

    #[test]
    fn laplace_rejects_nonpositive_scale() {
        let mut rng = RngStream::new(0, 0);
        assert!(sample_laplace(0.0, &mut rng).is_err());
        assert!(sample_laplace(-1.0, &mut rng).is_err());
    }

    #[test]
    fn wem_equal_scores_is_uniform() {
        let mut rng = RngStream::new(7, 0);
        let scores = [2.0, 2.0, 2.0, 2.0];
        let mut counts = [0usize; 4];
        let trials = 100_000;
        for _ in 0..trials {
            counts[weighted_exponential_mechanism(&scores, 5.0, &mut rng).unwrap()] += 1;
        }
        // Chi-square against uniform, df = 3, significance 0.001.
        let expected = trials as f64 / 4.0;
        let stat: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected) * (c as f64 - expected) / expected)
            .sum();
        assert!(stat < 16.266, "chi-square {stat}, counts {counts:?}");
    }

    #[test]
    fn wem_zero_eta_ignores_scores() {
        let mut rng = RngStream::new(8, 0);
        let scores = [-100.0, 0.0, 250.0];
        let mut counts = [0usize; 3];
        let trials = 90_000;
        for _ in 0..trials {
            counts[weighted_exponential_mechanism(&scores, 0.0, &mut rng).unwrap()] += 1;
        }
        for &c in &counts {
            assert!(
                abs(c as f64 / trials as f64 - 1.0 / 3.0) < 0.01,
                "{counts:?}"
            );
        }
    }

    #[test]
    fn wem_matches_exact_softmax() {
        // scores (0, ln 2) at eta = 1 select with probability (1/3, 2/3).
        let scores = [0.0, core::f64::consts::LN_2];
        let probs = wem_probabilities(&scores, 1.0).unwrap();
        assert!(abs(probs[0] - 1.0 / 3.0) < 1e-12);
        assert!(abs(probs[1] - 2.0 / 3.0) < 1e-12);

        let mut rng = RngStream::new(9, 0);
        let trials = 100_000;
        let mut ones = 0usize;
        for _ in 0..trials {
            if weighted_exponential_mechanism(&scores, 1.0, &mut rng).unwrap() == 1 {
                ones += 1;
            }
        }
        assert!(abs(ones as f64 / trials as f64 - 2.0 / 3.0) < 0.01);
    }

    #[test]
    fn wem_rejects_bad_inputs() {
        let mut rng = RngStream::new(0, 0);
        assert!(weighted_exponential_mechanism(&[], 1.0, &mut rng).is_err());
        assert!(weighted_exponential_mechanism(&[f64::NAN], 1.0, &mut rng).is_err());
        assert!(weighted_exponential_mechanism(&[1.0], -1.0, &mut rng).is_err());
    }

    #[test]
    fn wrnm_single_candidate() {
        let mut rng = RngStream::new(3, 0);
        for _ in 0..100 {
            assert_eq!(weighted_report_noisy_max(&[0.4], 1.0, &mut rng).unwrap(), 0);
        }
    }

    #[test]
    fn wrnm_wide_gap_rarely_flips() {
        let mut rng = RngStream::new(4, 0);
        let trials = 10_000;
        let mut zero = 0usize;
        for _ in 0..trials {
            if weighted_report_noisy_max(&[100.0, 0.0], 10.0, &mut rng).unwrap() == 0 {
                zero += 1;
            }
        }
        assert!(zero as f64 / trials as f64 >= 0.999, "{zero}");
    }

    #[test]
    fn wrnm_requires_positive_eta() {
        let mut rng = RngStream::new(0, 0);
        assert!(weighted_report_noisy_max(&[1.0, 2.0], 0.0, &mut rng).is_err());
        assert!(weighted_report_noisy_max(&[], 1.0, &mut rng).is_err());
    }

    #[test]
    fn basic_composition_examples() {
        let (eps, delta) = basic_composition(10, 0.1, 0.0);
        assert!(abs(eps - 1.0) < 1e-12 && delta == 0.0);
        assert_eq!(basic_composition(1, 0.3, 0.2), (0.3, 0.2));
        assert_eq!(basic_composition(5, 0.0, 0.0), (0.0, 0.0));
    }

    #[test]
    fn advanced_composition_zero_budget() {
        let (eps, delta) = advanced_composition(7, 0.0, 1e-6, 1e-5).unwrap();
        assert_eq!(eps, 0.0);
        assert!(abs(delta - (1e-5 + 7.0 * 1e-6)) < 1e-18);
    }

    #[test]
    fn advanced_composition_closed_form() {
        // sqrt(2 ln 1e5) * 0.1 + 0.1 (e^0.1 - 1), evaluated independently.
        let (eps, delta) = advanced_composition(1, 0.1, 0.0, 1e-5).unwrap();
        assert!(abs(eps - 0.4903696830263729) < 1e-12, "eps {eps}");
        assert_eq!(delta, 1e-5);
        assert!(advanced_composition(1, 0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn advanced_composition_monotone_in_k() {
        let mut prev = 0.0;
        for k in 1..40 {
            let (eps, _) = advanced_composition(k, 0.05, 0.0, 1e-5).unwrap();
            assert!(eps >= prev);
            prev = eps;
        }
    }

    #[test]
    fn noise_rate_formulas() {
        assert!(abs(noise_rate_1r(1.0, 0.5, 800, 10).unwrap().eta() - 10.0) < 1e-12);
        let eta = noise_rate_1r(1.0, 0.25, 32_561, 99).unwrap().eta();
        assert!(abs(eta - 32_561.0 / 1584.0) < 1e-9, "eta {eta}");
        assert!(abs(noise_rate_topdown(1.0, 0.5, 1600, 10, 5).unwrap().eta() - 1.0) < 1e-12);
        // t = 1 reduces to a quarter of the stump rate.
        let a = noise_rate_1r(0.7, 0.3, 500, 7).unwrap().eta();
        let b = noise_rate_topdown(0.7, 0.3, 500, 7, 1).unwrap().eta();
        assert!(abs(a / b - 4.0) < 1e-12);
        assert!(noise_rate_1r(0.0, 0.5, 10, 1).is_err());
        assert!(noise_rate_1r(1.0, 0.5, 10, 0).is_err());
        assert!(noise_rate_topdown(1.0, 0.5, 10, 0, 1).is_err());
    }

    #[test]
    fn topdown_advanced_budget_formula() {
        // t (8 eta zeta)^2 + 8 eta zeta sqrt(t ln(1/delta)), doubled.
        let (eps, delta) = topdown_advanced_budget(4, 0.5, 0.1, 1e-5).unwrap();
        let step = 8.0 * 0.5 * 0.1;
        let want = 2.0 * (4.0 * step * step + step * (4.0 * (1e5f64).ln()).sqrt());
        assert!(abs(eps - want) < 1e-12);
        assert_eq!(delta, 1e-5);
        // More internal nodes never cost less.
        let (eps2, _) = topdown_advanced_budget(8, 0.5, 0.1, 1e-5).unwrap();
        assert!(eps2 > eps);
        assert!(topdown_advanced_budget(0, 0.5, 0.1, 1e-5).is_err());
        assert!(topdown_advanced_budget(4, 0.5, 0.1, 0.0).is_err());
    }

    #[test]
    fn round_budget_inverts_advanced_composition() {
        for &(eps, tau) in &[(0.5, 9), (1.0, 25), (3.0, 99)] {
            let eps_b = solve_round_budget_approx(eps, 1e-5, tau).unwrap();
            let (recomposed, _) = advanced_composition(tau, eps_b, 0.0, 1e-5).unwrap();
            assert!(
                abs(recomposed - eps) < 1e-6,
                "eps {eps} tau {tau} -> {recomposed}"
            );
        }
        // Inverse of the closed-form example above.
        let eps_b = solve_round_budget_approx(0.4903696830263729, 1e-5, 1).unwrap();
        assert!(abs(eps_b - 0.1) < 1e-7, "eps_b {eps_b}");
        assert!(solve_round_budget_approx(0.5, 0.0, 9).is_err());
        assert!(solve_round_budget_approx(0.0, 1e-5, 9).is_err());
    }

    #[test]
    fn audit_identical_mechanisms_reports_near_zero() {
        let rng = RngStream::new(21, 0);
        let report = audit_mechanism(|_, r| format!("{}", r.index(4)), 100_000, &rng);
        assert!(report.epsilon_hat < 0.05, "eps_hat {}", report.epsilon_hat);
    }

    #[test]
    fn audit_weak_learner_validates_inputs() {
        let names: Vec<_> = (0..2).map(|j| format!("f{j}")).collect();
        let ds = BooleanDataset::from_sparse_rows(
            2,
            &[vec![0], vec![1], vec![], vec![0, 1]],
            vec![1, -1, 1, -1],
            names,
        )
        .unwrap();
        let far = {
            let mut rows: Vec<Vec<usize>> = vec![vec![1], vec![0], vec![], vec![0, 1]];
            rows[3] = vec![];
            let labels = vec![-1, 1, 1, -1];
            BooleanDataset::from_sparse_rows(2, &rows, labels, ds.feature_names().to_vec()).unwrap()
        };
        let mu = SmoothDistribution::uniform(4).unwrap();
        let rng = RngStream::new(0, 0);
        let mech = |_: &BooleanDataset, _: &SmoothDistribution, r: &mut RngStream| {
            format!("{}", r.index(2))
        };
        assert!(matches!(
            audit_weak_learner(mech, &ds, &far, &mu, &mu, 10_000, &rng).unwrap_err(),
            Error::NotNeighboring { .. }
        ));
        let mech2 = |_: &BooleanDataset, _: &SmoothDistribution, r: &mut RngStream| {
            format!("{}", r.index(2))
        };
        assert!(audit_weak_learner(mech2, &ds, &ds, &mu, &mu, 100, &rng).is_err());
    }
}

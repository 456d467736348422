//! Measures and smooth distributions over examples.
//!
//! A measure assigns each example a weight in [0, 1]. A measure with
//! density at least kappa normalizes to a kappa-smooth distribution:
//! no example carries probability above 1/(kappa n). Boosting keeps its
//! per-round weights inside this set by KL (Bregman) projection.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::float::{abs, ln, stable_sum};

/// Per-example weights in [0, 1]; the boosting state between rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    w: Vec<f64>,
}

impl Measure {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyInput("measure weights"));
        }
        for &v in &w {
            if !v.is_finite() {
                return Err(Error::NonFinite("measure weight"));
            }
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter {
                    name: "measure weight",
                    reason: "weights must lie in [0, 1]",
                });
            }
        }
        Ok(Self { w })
    }

    /// The uniform bounded measure mu(i) = kappa used to start boosting.
    pub fn uniform(n: usize, kappa: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput("measure domain"));
        }
        Self::new(alloc::vec![kappa; n])
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn mass(&self) -> f64 {
        stable_sum(self.w.iter().copied())
    }

    /// mass / n, in [0, 1].
    pub fn density(&self) -> f64 {
        self.mass() / self.w.len() as f64
    }

    /// Normalize to a probability distribution; fails on zero mass.
    pub fn normalize(&self) -> Result<SmoothDistribution> {
        let mass = self.mass();
        if mass <= 0.0 {
            return Err(Error::ZeroMass);
        }
        let p: Vec<f64> = self.w.iter().map(|&v| v / mass).collect();
        SmoothDistribution::from_probs(p)
    }
}

/// A probability vector together with the largest kappa it certifies:
/// every entry satisfies p(i) <= 1/(kappa n).
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothDistribution {
    p: Vec<f64>,
    smoothness_bound: f64,
}

impl SmoothDistribution {
    pub fn from_probs(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::EmptyInput("probability vector"));
        }
        let mut max = 0.0f64;
        for &v in &p {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::NonFinite("probability"));
            }
            if v > max {
                max = v;
            }
        }
        let total = stable_sum(p.iter().copied());
        if abs(total - 1.0) > 1e-9 {
            return Err(Error::InvalidParameter {
                name: "probability vector",
                reason: "entries must sum to 1 within 1e-9",
            });
        }
        // max >= 1/n, so the bound lands in (0, 1] up to rounding.
        let smoothness_bound = (1.0 / (p.len() as f64 * max)).min(1.0);
        Ok(Self {
            p,
            smoothness_bound,
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput("probability vector"));
        }
        Self::from_probs(alloc::vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    #[inline(always)]
    pub fn get(&self, i: usize) -> f64 {
        self.p[i]
    }

    /// Largest kappa such that every entry is at most 1/(kappa n).
    pub fn smoothness_bound(&self) -> f64 {
        self.smoothness_bound
    }

    /// True when every entry respects the 1/(kappa n) cap (with slack for
    /// accumulated rounding).
    pub fn is_kappa_smooth(&self, kappa: f64) -> bool {
        let cap = 1.0 / (kappa * self.p.len() as f64);
        self.p.iter().all(|&v| v <= cap + 1e-12)
    }
}

/// Total variation distance between two probability vectors:
/// half the L1 distance.
pub fn statistical_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptyInput("probability vector"));
    }
    Ok(0.5 * stable_sum(a.iter().zip(b).map(|(&x, &y)| abs(x - y))))
}

/// Generalized (unnormalized) KL divergence between nonnegative weight
/// vectors: sum of m ln(m/ref) - m + ref, with 0 ln 0 = 0.
///
/// Infinite when the reference vanishes somewhere the measure does not.
pub fn kl_divergence(m: &[f64], reference: &[f64]) -> Result<f64> {
    if m.len() != reference.len() {
        return Err(Error::LengthMismatch {
            expected: m.len(),
            got: reference.len(),
        });
    }
    if m.is_empty() {
        return Err(Error::EmptyInput("measure weights"));
    }
    let mut terms = Vec::with_capacity(m.len());
    for (i, (&mi, &ri)) in m.iter().zip(reference).enumerate() {
        if !mi.is_finite() || !ri.is_finite() || mi < 0.0 || ri < 0.0 {
            return Err(Error::NonFinite("kl divergence input"));
        }
        if mi > 0.0 && ri == 0.0 {
            return Err(Error::InfiniteDivergence { index: i });
        }
        let term = if mi == 0.0 {
            ri
        } else {
            mi * ln(mi / ri) - mi + ri
        };
        terms.push(term);
    }
    Ok(stable_sum(terms))
}

/// KL projection onto the kappa-dense measures: weights in [0, 1] with
/// total mass at least kappa n.
///
/// The projection has the closed form min(1, c w) for a scalar c >= 1.
/// Inputs with entries above 1 are accepted (the pre-projection boosting
/// update escapes [0, 1]); they saturate at 1 for every valid c.
pub fn bregman_project(weights: &[f64], kappa: f64) -> Result<Measure> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::InvalidParameter {
            name: "kappa",
            reason: "projection requires 0 < kappa < 1",
        });
    }
    if weights.is_empty() {
        return Err(Error::EmptyInput("projection weights"));
    }
    for &v in weights {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::NonFinite("projection weight"));
        }
    }
    let n = weights.len();
    let target = kappa * n as f64;

    let capped: Vec<f64> = weights.iter().map(|&v| v.min(1.0)).collect();
    let capped_mass = stable_sum(capped.iter().copied());
    if capped_mass <= 0.0 {
        return Err(Error::ZeroMass);
    }
    if capped_mass >= target {
        // Already kappa-dense: the projection is the identity (after the
        // box cap, which is itself the KL projection onto [0, 1]^n).
        return Measure::new(capped);
    }

    let support = weights.iter().filter(|&&v| v > 0.0).count();
    if (support as f64) < target - 1e-9 {
        return Err(Error::InsufficientSupport {
            support,
            required_mass: target,
        });
    }

    // Sort positive weights descending; with k weights saturated the mass
    // is k + c * tail_k, linear in c between breakpoints c = 1/w_(k).
    let mut sorted: Vec<f64> = weights.iter().copied().filter(|&v| v > 0.0).collect();
    sorted.sort_unstable_by(|a, b| b.partial_cmp(a).expect("finite weights"));
    let s = sorted.len();
    let mut suffix = alloc::vec![0.0f64; s + 1];
    for k in (0..s).rev() {
        suffix[k] = suffix[k + 1] + sorted[k];
    }

    let mut scale = None;
    for k in 0..s {
        let tail = suffix[k];
        if tail <= 0.0 {
            break;
        }
        let c = (target - k as f64) / tail;
        let lower = if k == 0 { 1.0 } else { 1.0 / sorted[k - 1] }.max(1.0);
        let upper = 1.0 / sorted[k];
        if c >= lower - 1e-12 && c <= upper + 1e-12 {
            scale = Some(c.max(lower));
            break;
        }
    }
    // Breakpoint rounding can leave the scan empty-handed; bisection on the
    // true mass function recovers a bracket.
    let mut c = match scale {
        Some(c) => c,
        None => {
            let mass_at = |c: f64| stable_sum(weights.iter().map(|&v| (c * v).min(1.0))) - target;
            let mut lo = 1.0;
            let mut hi = 1.0 / sorted[s - 1].min(1.0);
            while mass_at(hi) < 0.0 {
                hi *= 2.0;
                if !hi.is_finite() {
                    return Err(Error::InsufficientSupport {
                        support,
                        required_mass: target,
                    });
                }
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mass_at(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-15 * hi {
                    break;
                }
            }
            0.5 * (lo + hi)
        }
    };

    // Newton refinement against the actually-summed mass; the mass is
    // linear in c on the active bracket, so this converges immediately.
    for _ in 0..3 {
        let out: Vec<f64> = weights.iter().map(|&v| (c * v).min(1.0)).collect();
        let mass = stable_sum(out.iter().copied());
        let resid = target - mass;
        if abs(resid) <= 1e-12 * target.max(1.0) {
            break;
        }
        let free: f64 = stable_sum(weights.iter().filter(|&&v| v > 0.0 && c * v < 1.0).copied());
        if free <= 0.0 {
            break;
        }
        c += resid / free;
    }
    c = c.max(1.0);

    Measure::new(weights.iter().map(|&v| (c * v).min(1.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    // Frozen expected value for the generalized-KL example, equal to ln 2.
    const LN2: f64 = core::f64::consts::LN_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        abs(a - b) <= tol
    }

    #[test]
    fn density_examples() {
        assert_eq!(
            Measure::new(vec![1.0, 1.0, 1.0, 1.0]).unwrap().density(),
            1.0
        );
        assert_eq!(
            Measure::new(vec![0.5, 0.5, 0.5, 0.5]).unwrap().density(),
            0.5
        );
        assert_eq!(Measure::new(vec![0.0, 0.0]).unwrap().density(), 0.0);
    }

    #[test]
    fn normalize_preserves_mass_one_vectors() {
        let m = Measure::new(vec![0.5, 0.25, 0.25]).unwrap();
        let d = m.normalize().unwrap();
        assert_eq!(d.probs(), &[0.5, 0.25, 0.25]);
    }

    #[test]
    fn normalize_uniform_bounded_measure_is_uniform() {
        let kappa = 0.3;
        let m = Measure::uniform(8, kappa).unwrap();
        let d = m.normalize().unwrap();
        for &p in d.probs() {
            assert!(close(p, 1.0 / 8.0, 1e-15));
        }
        assert!(d.is_kappa_smooth(kappa));
        assert!(close(d.smoothness_bound(), 1.0, 1e-12));
    }

    #[test]
    fn normalize_zero_mass_fails() {
        let m = Measure::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(m.normalize().unwrap_err(), Error::ZeroMass);
    }

    #[test]
    fn dense_measure_normalizes_to_smooth_distribution() {
        // Density >= kappa implies the 1/(kappa n) cap after normalizing.
        let m = Measure::new(vec![1.0, 0.3, 0.4, 0.5]).unwrap();
        let kappa = 0.5;
        assert!(m.density() >= kappa);
        assert!(m.normalize().unwrap().is_kappa_smooth(kappa));
    }

    #[test]
    fn statistical_distance_examples() {
        assert_eq!(statistical_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(statistical_distance(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
        assert!(close(
            statistical_distance(&[0.6, 0.4], &[0.5, 0.5]).unwrap(),
            0.1,
            1e-15
        ));
        assert!(statistical_distance(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn kl_identity_is_zero() {
        let m = [0.2, 0.5, 0.3];
        assert_eq!(kl_divergence(&m, &m).unwrap(), 0.0);
    }

    #[test]
    fn kl_point_mass_against_fair_coin() {
        // Generalized KL: 1*ln(1/0.5) - 1 + 0.5 for the first entry plus
        // the reference mass 0.5 left on the second entry.
        let got = kl_divergence(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        assert!(close(got, LN2, 1e-15), "got {got}");
    }

    #[test]
    fn kl_support_violation_is_infinite() {
        assert_eq!(
            kl_divergence(&[1.0, 0.0], &[0.0, 1.0]).unwrap_err(),
            Error::InfiniteDivergence { index: 0 }
        );
    }

    #[test]
    fn projection_identity_on_feasible_input() {
        let w = [0.5, 0.5, 0.5, 0.5];
        let out = bregman_project(&w, 0.5).unwrap();
        assert_eq!(out.weights(), &w);
    }

    #[test]
    fn projection_four_point_example() {
        // Solving sum min(1, c w) = kappa n = 2 gives c = 2.5.
        let out = bregman_project(&[0.8, 0.1, 0.1, 0.2], 0.5).unwrap();
        let want = [1.0, 0.25, 0.25, 0.5];
        for (a, b) in out.weights().iter().zip(&want) {
            assert!(close(*a, *b, 1e-12), "{:?}", out.weights());
        }
        assert!(close(out.mass(), 2.0, 1e-12));
    }

    #[test]
    fn projection_leaves_dense_measures_alone() {
        let w = [1.0, 1.0, 0.0, 0.0];
        let out = bregman_project(&w, 0.25).unwrap();
        assert_eq!(out.weights(), &w);
    }

    #[test]
    fn projection_caps_oversized_weights() {
        // Pre-projection boosting weights may exceed 1; they saturate.
        let out = bregman_project(&[3.0, 0.3], 0.9).unwrap();
        assert!(close(out.weights()[0], 1.0, 1e-15));
        assert!(close(out.weights()[1], 0.8, 1e-12));
        assert!(close(out.mass(), 1.8, 1e-12));
    }

    #[test]
    fn projection_rejects_bad_inputs() {
        assert!(bregman_project(&[0.5], 0.0).is_err());
        assert!(bregman_project(&[0.5], 1.0).is_err());
        assert!(bregman_project(&[0.0, 0.0], 0.5).is_err());
        assert!(matches!(
            bregman_project(&[1.0, 0.0, 0.0, 0.0], 0.5).unwrap_err(),
            Error::InsufficientSupport { .. }
        ));
    }

    #[test]
    fn projection_is_idempotent() {
        let w = [0.9, 0.05, 0.3, 0.02, 0.11];
        let once = bregman_project(&w, 0.4).unwrap();
        let twice = bregman_project(once.weights(), 0.4).unwrap();
        for (a, b) in once.weights().iter().zip(twice.weights()) {
            assert!(close(*a, *b, 1e-12));
        }
    }

    #[test]
    fn projection_normalizes_to_smooth_distribution() {
        let w = [0.9, 0.05, 0.3, 0.02, 0.11];
        let kappa = 0.4;
        let d = bregman_project(&w, kappa).unwrap().normalize().unwrap();
        assert!(d.is_kappa_smooth(kappa));
    }
}

//! Experiment machinery: cross-validation, grid search, and the report
//! computations behind the CLI.

use dpboost_core::{lazy_bregman_boost, BooleanDataset, BoostConfig, Ensemble, Predict, RngStream};
use rayon::prelude::*;

use crate::data::make_folds;
use crate::DataError;

/// Deterministic per-task seed derived from the master seed and two task
/// coordinates; independent tasks get independent streams.
pub fn derive_seed(master: u64, a: u64, b: u64) -> u64 {
    RngStream::new(master, a).substream(b).next_u64()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    /// One accuracy per (repeat, fold), repeats outer.
    pub scores: Vec<f64>,
}

fn mean_std(scores: &[f64]) -> (f64, f64) {
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let var = scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// k-fold cross-validation with `repeats` differently-seeded runs per
/// fold. Validation indices never intersect the training indices of the
/// same cell.
pub fn cross_validate(
    ds: &BooleanDataset,
    cfg: &BoostConfig,
    folds: usize,
    repeats: usize,
    master_seed: u64,
) -> Result<CvResult, DataError> {
    if repeats == 0 {
        return Err(DataError::Schema("repeats must be at least 1".to_string()));
    }
    let splits = make_folds(ds.n(), folds, master_seed)?;
    let tasks: Vec<(usize, usize, u64)> = (0..repeats)
        .flat_map(|s| (0..folds).map(move |f| (s, f, derive_seed(master_seed, s as u64, f as u64))))
        .collect();
    let scores: Result<Vec<f64>, DataError> = tasks
        .par_iter()
        .map(|&(_, f, seed)| {
            let (train_idx, val_idx) = &splits[f];
            debug_assert!(train_idx.iter().all(|i| !val_idx.contains(i)));
            let train = ds
                .subset(train_idx)
                .map_err(|e| DataError::Encode(e.to_string()))?;
            let val = ds
                .subset(val_idx)
                .map_err(|e| DataError::Encode(e.to_string()))?;
            let mut cell_cfg = cfg.clone();
            cell_cfg.seed = seed;
            let ens = lazy_bregman_boost(&train, &cell_cfg)
                .map_err(|e| DataError::Train(e.to_string()))?;
            Ok(ens.accuracy(&val))
        })
        .collect();
    let scores = scores?;
    let (mean_accuracy, std_accuracy) = mean_std(&scores);
    Ok(CvResult {
        mean_accuracy,
        std_accuracy,
        scores,
    })
}

/// Hyperparameter grid, defaulting to the search space used for the
/// privacy-vs-accuracy experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub epsilons: Vec<f64>,
    pub taus: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub kappas: Vec<f64>,
    pub folds: usize,
    pub repeats: usize,
}

impl GridSpec {
    pub fn default_one_rule() -> Self {
        GridSpec {
            epsilons: vec![
                0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 1.0, 3.0, 5.0,
            ],
            taus: vec![5, 9, 15, 19, 25, 29, 39, 49, 65, 75, 99],
            lambdas: vec![0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5],
            kappas: vec![0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5],
            folds: 5,
            repeats: 5,
        }
    }

    pub fn default_topdown() -> Self {
        GridSpec {
            epsilons: vec![
                0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 1.0, 3.0, 5.0,
            ],
            taus: vec![5, 9, 15, 19, 25, 29, 35, 39, 45, 51],
            lambdas: vec![0.35, 0.4],
            kappas: vec![0.25, 0.3],
            folds: 5,
            repeats: 5,
        }
    }

    pub fn validate(&self) -> Result<(), DataError> {
        if self.epsilons.is_empty()
            || self.taus.is_empty()
            || self.lambdas.is_empty()
            || self.kappas.is_empty()
        {
            return Err(DataError::Schema("grid lists must be nonempty".to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub epsilon: f64,
    pub tau: usize,
    pub lambda: f64,
    pub kappa: f64,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOutcome {
    /// Every cell, ordered by (epsilon, tau, lambda, kappa).
    pub cells: Vec<GridCell>,
    /// Best cell per epsilon; ties prefer smaller tau, then smaller lambda.
    pub winners: Vec<GridCell>,
}

pub fn run_grid(
    ds: &BooleanDataset,
    base: &BoostConfig,
    spec: &GridSpec,
    master_seed: u64,
) -> Result<GridOutcome, DataError> {
    spec.validate()?;
    let mut combos = Vec::new();
    for &epsilon in &spec.epsilons {
        for &tau in &spec.taus {
            for &lambda in &spec.lambdas {
                for &kappa in &spec.kappas {
                    combos.push((epsilon, tau, lambda, kappa));
                }
            }
        }
    }
    let cells: Result<Vec<GridCell>, DataError> = combos
        .par_iter()
        .enumerate()
        .map(|(cell_idx, &(epsilon, tau, lambda, kappa))| {
            let mut cfg = base.clone();
            cfg.epsilon = epsilon;
            cfg.rounds = tau;
            cfg.lambda = lambda;
            cfg.kappa = kappa;
            let cv = cross_validate(
                ds,
                &cfg,
                spec.folds,
                spec.repeats,
                derive_seed(master_seed, 0xCE11, cell_idx as u64),
            )?;
            Ok(GridCell {
                epsilon,
                tau,
                lambda,
                kappa,
                mean_accuracy: cv.mean_accuracy,
                std_accuracy: cv.std_accuracy,
            })
        })
        .collect();
    let mut cells = cells?;
    cells.sort_by(|a, b| {
        a.epsilon
            .total_cmp(&b.epsilon)
            .then(a.tau.cmp(&b.tau))
            .then(a.lambda.total_cmp(&b.lambda))
            .then(a.kappa.total_cmp(&b.kappa))
    });

    let mut winners: Vec<GridCell> = Vec::new();
    for &epsilon in &spec.epsilons {
        let best = cells
            .iter()
            .filter(|c| c.epsilon == epsilon)
            .max_by(|a, b| {
                a.mean_accuracy
                    .total_cmp(&b.mean_accuracy)
                    .then(b.tau.cmp(&a.tau))
                    .then(b.lambda.total_cmp(&a.lambda))
                    .then(b.kappa.total_cmp(&a.kappa))
            })
            .expect("nonempty grid");
        winners.push(best.clone());
    }
    Ok(GridOutcome { cells, winners })
}

/// Distinct-feature usage of one model.
pub fn sparsity_count(ens: &Ensemble) -> (usize, f64) {
    let used = ens.features_used().len();
    let pct = if ens.feature_count == 0 {
        0.0
    } else {
        100.0 * used as f64 / ens.feature_count as f64
    };
    (used, pct)
}

/// Mean/std of distinct-feature counts over repeated runs.
pub fn sparsity_summary(ensembles: &[Ensemble]) -> (f64, f64) {
    let counts: Vec<f64> = ensembles
        .iter()
        .map(|e| e.features_used().len() as f64)
        .collect();
    mean_std(&counts)
}

pub const MARGIN_HISTOGRAM_BINS: usize = 21;

/// Histogram of normalized margins over [-1, 1] with 21 bins; counts sum
/// to n.
pub fn margin_histogram(
    ens: &Ensemble,
    ds: &BooleanDataset,
) -> Result<Vec<(f64, f64, usize)>, DataError> {
    let margins = ens
        .margins(ds)
        .map_err(|e| DataError::Train(e.to_string()))?;
    let k = MARGIN_HISTOGRAM_BINS;
    let width = 2.0 / k as f64;
    let mut counts = vec![0usize; k];
    for &m in &margins.normalized {
        let bin = (((m + 1.0) / width) as usize).min(k - 1);
        counts[bin] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (-1.0 + i as f64 * width, -1.0 + (i + 1) as f64 * width, c))
        .collect())
}

/// Empirical Rademacher complexity of the stump class: the mean over
/// `draws` sign vectors of the best absolute correlation any stump
/// achieves with the signs.
pub fn rademacher_estimate(ds: &BooleanDataset, draws: usize, seed: u64) -> f64 {
    assert!(draws >= 1);
    let n = ds.n();
    let r = ds.r();
    let mut rng = RngStream::new(seed, 0x4ADE);
    let mut total_sup = 0.0f64;
    for _ in 0..draws {
        let signs: Vec<f64> = (0..n)
            .map(|_| if rng.uniform() < 0.5 { 1.0 } else { -1.0 })
            .collect();
        let total: f64 = signs.iter().sum();
        let mut ones = vec![0.0f64; r];
        for (i, s) in signs.iter().enumerate() {
            for j in ds.row_ones(i) {
                ones[j] += s;
            }
        }
        // Literal correlation is 2 s_j - S; negation and the constants
        // close the class under sign flips, so the supremum is a max of
        // absolute values.
        let mut best = total.abs();
        for &s_j in &ones {
            best = best.max((2.0 * s_j - total).abs());
        }
        total_sup += best / n as f64;
    }
    total_sup / draws as f64
}

/// Margin-bound test-accuracy estimate for a voting classifier:
/// 1 - [margin loss at theta + 2 R / theta + sqrt(ln(1/0.05) / 2n)],
/// maximized over a 20-point theta grid. Deliberately pessimistic.
pub fn rademacher_accuracy_estimate(
    ens: &Ensemble,
    ds: &BooleanDataset,
    rademacher: f64,
) -> Result<(f64, f64), DataError> {
    let margins = ens
        .margins(ds)
        .map_err(|e| DataError::Train(e.to_string()))?;
    let n = ds.n() as f64;
    let confidence = (1.0f64 / 0.05).ln();
    let slack = (confidence / (2.0 * n)).sqrt();
    let mut best = (f64::NEG_INFINITY, 0.0);
    for j in 1..=20 {
        let theta = j as f64 / 20.0;
        let loss = margins.normalized.iter().filter(|&&m| m <= theta).count() as f64 / n;
        let estimate = 1.0 - (loss + 2.0 * rademacher / theta + slack);
        if estimate > best.0 {
            best = (estimate, theta);
        }
    }
    Ok(best)
}

/// Training accuracy of the single best stump, the weak non-private
/// baseline.
pub fn best_single_stump_accuracy(ds: &BooleanDataset) -> f64 {
    let uniform = dpboost_core::SmoothDistribution::uniform(ds.n()).expect("nonempty");
    let best = dpboost_core::train_1r(ds, &uniform).expect("stump training is total");
    let correct = (0..ds.n())
        .filter(|&i| best.predict(ds, i) == ds.label(i))
        .count();
    correct as f64 / ds.n() as f64
}

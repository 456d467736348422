//! Command-line surface: train, predict, cv, grid, report, audit.
//!
//! Exit codes: 0 on success, 2 on usage errors (including invalid flag
//! combinations), 3 on data errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dpboost_core::{
    lazy_bregman_boost, Accounting, BooleanDataset, BoostConfig, Ensemble, LearnerKind,
};

use crate::audit::{run_audit, AuditTarget};
use crate::data::{
    load_dataset, one_hot_encode, one_hot_encode_unlabeled, DataFormat, EncodingSchema,
};
use crate::eval::{
    cross_validate, margin_histogram, rademacher_accuracy_estimate, rademacher_estimate, run_grid,
    sparsity_count, sparsity_summary, GridSpec,
};
use crate::{model, DataError};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(DataError),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(err) => write!(f, "data error: {err}"),
        }
    }
}

impl From<DataError> for CliError {
    fn from(err: DataError) -> Self {
        CliError::Data(err)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dpboost",
    about = "Differentially private smooth boosting over decision stumps and trees",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Libsvm,
}

impl From<FormatArg> for DataFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => DataFormat::Csv,
            FormatArg::Libsvm => DataFormat::Libsvm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LearnerArg {
    #[value(name = "1r")]
    OneRule,
    #[value(name = "dp-1r")]
    Dp1r,
    #[value(name = "dp-topdown")]
    DpTopdown,
}

impl From<LearnerArg> for LearnerKind {
    fn from(l: LearnerArg) -> Self {
        match l {
            LearnerArg::OneRule => LearnerKind::OneRule,
            LearnerArg::Dp1r => LearnerKind::DpOneRule,
            LearnerArg::DpTopdown => LearnerKind::DpTopDown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AccountingArg {
    Basic,
    Advanced,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Input data file.
    #[arg(long)]
    pub data: PathBuf,
    /// Input format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// Dataset-oblivious encoding schema (JSON). Required unless every
    /// feature column is already boolean.
    #[arg(long)]
    pub schema: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Weak learner.
    #[arg(long, value_enum)]
    pub learner: LearnerArg,
    /// Total privacy budget epsilon (ignored by the non-private learner).
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    /// Privacy budget delta; requires --accounting advanced when positive.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Smoothness / target-error parameter kappa in (0, 1).
    #[arg(long)]
    pub kappa: f64,
    /// Learning rate lambda in (0, 1).
    #[arg(long)]
    pub lambda: f64,
    /// Boosting rounds tau.
    #[arg(long)]
    pub rounds: usize,
    /// Internal nodes per tree (dp-topdown only).
    #[arg(long, default_value_t = 4)]
    pub tree_nodes: usize,
    /// Budget accounting across rounds.
    #[arg(long, value_enum, default_value = "basic")]
    pub accounting: AccountingArg,
    /// Weak-learner failure probability used in reported bounds.
    #[arg(long, default_value_t = 0.1)]
    pub beta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stop after this many consecutive negative-advantage rounds; unrun
    /// rounds leave their budget unspent.
    #[arg(long)]
    pub early_stop_window: Option<usize>,
}

impl TrainArgs {
    pub fn to_config(&self) -> BoostConfig {
        BoostConfig {
            kappa: self.kappa,
            lambda: self.lambda,
            rounds: self.rounds,
            learner: self.learner.into(),
            tree_nodes: self.tree_nodes,
            epsilon: self.epsilon,
            delta: self.delta,
            accounting: match self.accounting {
                AccountingArg::Basic => Accounting::Basic,
                AccountingArg::Advanced => Accounting::Advanced,
            },
            beta: self.beta,
            seed: self.seed,
            early_stop_window: self.early_stop_window,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train an ensemble and write the model file.
    Train {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        train: TrainArgs,
        /// Output model path (JSON).
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict with a trained model; prints accuracy when labels exist.
    Predict {
        /// Trained model file.
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        /// Predictions CSV (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-validate one configuration.
    Cv {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        train: TrainArgs,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        /// Per-(repeat, fold) accuracies CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-validated grid search; emits the full table and per-epsilon
    /// winners.
    Grid {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value = "dp-1r")]
        learner: LearnerArg,
        /// Comma-separated epsilon list (defaults to the standard sweep).
        #[arg(long, value_delimiter = ',')]
        epsilons: Vec<f64>,
        /// Comma-separated round counts.
        #[arg(long, value_delimiter = ',')]
        taus: Vec<usize>,
        /// Comma-separated learning rates.
        #[arg(long, value_delimiter = ',')]
        lambdas: Vec<f64>,
        /// Comma-separated kappa values.
        #[arg(long, value_delimiter = ',')]
        kappas: Vec<f64>,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, default_value_t = 4)]
        tree_nodes: usize,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[arg(long, value_enum, default_value = "basic")]
        accounting: AccountingArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Full grid table CSV (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Model and data reports.
    Report {
        #[command(subcommand)]
        kind: ReportKind,
    },
    /// Empirical privacy audits of the built-in mechanisms.
    Audit {
        /// One of: dp-1r, dp-topdown, wem, wrnm, argmin-1r.
        #[arg(long)]
        mechanism: String,
        /// Declared total epsilon for the DP learners.
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Outcome frequency CSV (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReportKind {
    /// Distinct features used by one or more models.
    Sparsity {
        /// Model file; repeat the flag for mean/std over runs.
        #[arg(long, required = true)]
        model: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalized-margin histogram (21 bins over [-1, 1]).
    Margins {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-round advantage curve from the training trace.
    Advantage {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rademacher complexity of the stump class and the margin-bound
    /// accuracy estimate (pessimistic by construction).
    Rademacher {
        #[command(flatten)]
        data: DataArgs,
        /// Model for the margin-bound estimate; the complexity alone needs
        /// no model.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Load and encode a data file. Returns the dataset and whether labels
/// were present.
pub fn load_encoded(
    args: &DataArgs,
    for_prediction: bool,
) -> Result<(BooleanDataset, bool), CliError> {
    let raw = load_dataset(&args.data, args.format.into())?;
    let schema = match &args.schema {
        Some(path) => EncodingSchema::from_path(path)?,
        None => EncodingSchema::infer_boolean(&raw)
            .map_err(|e| CliError::Usage(format!("--schema required: {e}")))?,
    };
    let label_col = schema.label_column(&raw).to_string();
    if raw.column_index(&label_col).is_some() {
        Ok((one_hot_encode(&raw, &schema)?, true))
    } else if for_prediction {
        Ok((one_hot_encode_unlabeled(&raw, &schema)?, false))
    } else {
        Err(CliError::Data(DataError::Encode(format!(
            "label column `{label_col}` not present in the data"
        ))))
    }
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Data(DataError::Io(path.display().to_string(), e))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn usage_from_core(err: dpboost_core::Error) -> CliError {
    match err {
        dpboost_core::Error::InvalidParameter { .. } | dpboost_core::Error::EmptyInput(_) => {
            CliError::Usage(err.to_string())
        }
        other => CliError::Data(DataError::Train(other.to_string())),
    }
}

fn print_privacy_summary(ens: &Ensemble) {
    match ens.declared_budget() {
        Some(budget) => {
            println!(
                "privacy: epsilon={:.6} delta={:e} (zeta=1/(kappa n)={:.6e})",
                budget.epsilon, budget.delta, budget.zeta
            );
            if let Some(eta) = ens.trace.first().and_then(|r| r.eta) {
                println!("per-round noise rate eta={eta:.6}");
            }
            if ens.trace.len() < ens.config.rounds {
                if let Some((eps, delta)) = ens.consumed_budget() {
                    println!(
                        "early stop after {} of {} rounds; consumed epsilon={eps:.6} \
                         delta={delta:e} (remainder unspent)",
                        ens.trace.len(),
                        ens.config.rounds
                    );
                }
            }
        }
        None => println!("privacy: non-private learner (no budget consumed)"),
    }
}

fn cmd_train(data: &DataArgs, train: &TrainArgs, out: &Path) -> Result<(), CliError> {
    let cfg = train.to_config();
    cfg.validate().map_err(usage_from_core)?;
    let (ds, labeled) = load_encoded(data, false)?;
    debug_assert!(labeled);
    let ens = lazy_bregman_boost(&ds, &cfg).map_err(usage_from_core)?;
    model::save(&ens, out)?;
    println!(
        "trained {} {} hypotheses on n={} examples (r={} features)",
        ens.len(),
        model::learner_name(cfg.learner),
        ds.n(),
        ds.r()
    );
    println!("training accuracy {:.4}", ens.accuracy(&ds));
    print_privacy_summary(&ens);
    println!("model written to {}", out.display());
    Ok(())
}

fn cmd_predict(model_path: &Path, data: &DataArgs, out: Option<&Path>) -> Result<(), CliError> {
    let ens = model::load(model_path)?;
    let (ds, labeled) = load_encoded(data, true)?;
    if ds.r() != ens.feature_count {
        return Err(CliError::Data(DataError::Encode(format!(
            "feature-count mismatch: model expects {}, data has {}",
            ens.feature_count,
            ds.r()
        ))));
    }
    let mut csv = String::from("row,prediction\n");
    let mut correct = 0usize;
    for i in 0..ds.n() {
        let pred = ens.majority_predict(&ds, i);
        if pred == ds.label(i) {
            correct += 1;
        }
        let _ = writeln!(csv, "{i},{pred:+}");
    }
    write_output(out, &csv)?;
    if labeled {
        println!(
            "accuracy {:.6} on {} examples",
            correct as f64 / ds.n() as f64,
            ds.n()
        );
    } else {
        println!("predicted {} unlabeled examples", ds.n());
    }
    Ok(())
}

fn cmd_cv(
    data: &DataArgs,
    train: &TrainArgs,
    folds: usize,
    repeats: usize,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let cfg = train.to_config();
    cfg.validate().map_err(usage_from_core)?;
    let (ds, _) = load_encoded(data, false)?;
    let cv = cross_validate(&ds, &cfg, folds, repeats, train.seed)?;
    let mut csv = String::from("repeat,fold,accuracy\n");
    for (i, score) in cv.scores.iter().enumerate() {
        let _ = writeln!(csv, "{},{},{score}", i / folds, i % folds);
    }
    write_output(out, &csv)?;
    println!(
        "cv accuracy {:.4} +/- {:.4} over {} folds x {} repeats",
        cv.mean_accuracy, cv.std_accuracy, folds, repeats
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_grid(
    data: &DataArgs,
    learner: LearnerArg,
    epsilons: &[f64],
    taus: &[usize],
    lambdas: &[f64],
    kappas: &[f64],
    folds: usize,
    repeats: usize,
    tree_nodes: usize,
    delta: f64,
    accounting: AccountingArg,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let defaults = match learner {
        LearnerArg::DpTopdown => GridSpec::default_topdown(),
        _ => GridSpec::default_one_rule(),
    };
    let spec = GridSpec {
        epsilons: if epsilons.is_empty() {
            defaults.epsilons
        } else {
            epsilons.to_vec()
        },
        taus: if taus.is_empty() {
            defaults.taus
        } else {
            taus.to_vec()
        },
        lambdas: if lambdas.is_empty() {
            defaults.lambdas
        } else {
            lambdas.to_vec()
        },
        kappas: if kappas.is_empty() {
            defaults.kappas
        } else {
            kappas.to_vec()
        },
        folds,
        repeats,
    };
    spec.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let base = BoostConfig {
        kappa: 0.5,
        lambda: 0.5,
        rounds: 1,
        learner: learner.into(),
        tree_nodes,
        epsilon: 1.0,
        delta,
        accounting: match accounting {
            AccountingArg::Basic => Accounting::Basic,
            AccountingArg::Advanced => Accounting::Advanced,
        },
        beta: 0.1,
        seed,
        early_stop_window: None,
    };
    let (ds, _) = load_encoded(data, false)?;
    let outcome = run_grid(&ds, &base, &spec, seed)?;
    let mut csv = String::from("epsilon,tau,lambda,kappa,mean_accuracy,std_accuracy\n");
    for c in &outcome.cells {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            c.epsilon, c.tau, c.lambda, c.kappa, c.mean_accuracy, c.std_accuracy
        );
    }
    write_output(out, &csv)?;
    println!("winners (epsilon,tau,lambda,kappa,mean_accuracy,std_accuracy):");
    for w in &outcome.winners {
        println!(
            "{},{},{},{},{:.6},{:.6}",
            w.epsilon, w.tau, w.lambda, w.kappa, w.mean_accuracy, w.std_accuracy
        );
    }
    Ok(())
}

fn cmd_report(kind: &ReportKind) -> Result<(), CliError> {
    match kind {
        ReportKind::Sparsity { model: models, out } => {
            let mut ensembles = Vec::new();
            let mut csv = String::from("model,features_used,pct_of_total\n");
            for path in models {
                let ens = model::load(path)?;
                let (count, pct) = sparsity_count(&ens);
                let _ = writeln!(csv, "{},{count},{pct:.4}", path.display());
                ensembles.push(ens);
            }
            write_output(out.as_deref(), &csv)?;
            let (mean, std) = sparsity_summary(&ensembles);
            println!(
                "features used: mean {mean:.3} std {std:.3} over {} model(s)",
                ensembles.len()
            );
            Ok(())
        }
        ReportKind::Margins {
            model: model_path,
            data,
            out,
        } => {
            let ens = model::load(model_path)?;
            let (ds, _) = load_encoded(data, false)?;
            let hist = margin_histogram(&ens, &ds)?;
            let mut csv = String::from("bin_lo,bin_hi,count\n");
            for (lo, hi, count) in &hist {
                let _ = writeln!(csv, "{lo},{hi},{count}");
            }
            write_output(out.as_deref(), &csv)?;
            println!(
                "margin histogram over {} examples, {} bins",
                ds.n(),
                hist.len()
            );
            Ok(())
        }
        ReportKind::Advantage {
            model: model_path,
            out,
        } => {
            let ens = model::load(model_path)?;
            let curve = ens
                .advantage_curve()
                .map_err(|e| CliError::Data(DataError::Model(e.to_string())))?;
            let mut csv = String::from("round,advantage\n");
            for (i, adv) in curve.iter().enumerate() {
                let _ = writeln!(csv, "{},{adv}", i + 1);
            }
            write_output(out.as_deref(), &csv)?;
            println!("advantage curve over {} rounds", curve.len());
            Ok(())
        }
        ReportKind::Rademacher {
            data,
            model: model_path,
            draws,
            seed,
            out,
        } => {
            if *draws < 100 {
                return Err(CliError::Usage(
                    "rademacher needs at least 100 draws".into(),
                ));
            }
            let (ds, _) = load_encoded(data, false)?;
            let estimate = rademacher_estimate(&ds, *draws, *seed);
            let mut csv = format!("draws,rademacher\n{draws},{estimate}\n");
            println!("rademacher complexity of the stump class: {estimate:.6}");
            if let Some(path) = model_path {
                let ens = model::load(path)?;
                let (acc, theta) = rademacher_accuracy_estimate(&ens, &ds, estimate)?;
                csv = format!(
                    "draws,rademacher,accuracy_estimate,theta\n{draws},{estimate},{acc},{theta}\n"
                );
                println!("margin-bound accuracy estimate (pessimistic): {acc:.4} at theta={theta}");
            }
            write_output(out.as_deref(), &csv)?;
            Ok(())
        }
    }
}

fn cmd_audit(
    mechanism: &str,
    epsilon: f64,
    trials: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let target = AuditTarget::parse(mechanism).map_err(|e| CliError::Usage(e.to_string()))?;
    let (report, declared) = run_audit(target, epsilon, trials, seed)?;
    let mut csv = String::from("outcome,count_a,count_b,freq_a,freq_b,log_ratio\n");
    for o in &report.outcomes {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            o.outcome,
            o.count_a,
            o.count_b,
            o.count_a as f64 / trials as f64,
            o.count_b as f64 / trials as f64,
            o.log_ratio
        );
    }
    write_output(out, &csv)?;
    match declared {
        Some(eps) => println!(
            "empirical epsilon_hat = {:.4} over {} trials (declared epsilon = {eps})",
            report.epsilon_hat, report.trials
        ),
        None => println!(
            "empirical epsilon_hat = {:.4} over {} trials (non-private control)",
            report.epsilon_hat, report.trials
        ),
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Train { data, train, out } => cmd_train(data, train, out),
        Command::Predict { model, data, out } => cmd_predict(model, data, out.as_deref()),
        Command::Cv {
            data,
            train,
            folds,
            repeats,
            out,
        } => cmd_cv(data, train, *folds, *repeats, out.as_deref()),
        Command::Grid {
            data,
            learner,
            epsilons,
            taus,
            lambdas,
            kappas,
            folds,
            repeats,
            tree_nodes,
            delta,
            accounting,
            seed,
            out,
        } => cmd_grid(
            data,
            *learner,
            epsilons,
            taus,
            lambdas,
            kappas,
            *folds,
            *repeats,
            *tree_nodes,
            *delta,
            *accounting,
            *seed,
            out.as_deref(),
        ),
        Command::Report { kind } => cmd_report(kind),
        Command::Audit {
            mechanism,
            epsilon,
            trials,
            seed,
            out,
        } => cmd_audit(mechanism, *epsilon, *trials, *seed, out.as_deref()),
    }
}

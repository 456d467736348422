//! Ensemble model files: JSON with stable field order so identical runs
//! serialize byte-identically.

use std::fs;
use std::path::Path;

use dpboost_core::{
    Accounting, BoostConfig, DecisionTree, Ensemble, Hypothesis, LearnerKind, OneRule, RoundRecord,
    TreeNode,
};
use serde::{Deserialize, Serialize};

use crate::DataError;

#[derive(Debug, Serialize, Deserialize)]
struct ModelJson {
    config: ConfigJson,
    hypotheses: Vec<HypothesisJson>,
    trace: Vec<TraceJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ConfigJson {
    kappa: f64,
    lambda: f64,
    rounds: usize,
    learner: String,
    tree_nodes: usize,
    epsilon: f64,
    delta: f64,
    accounting: String,
    beta: f64,
    seed: u64,
    features: usize,
    train_n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    early_stop_window: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum HypothesisJson {
    Rule(RuleJson),
    Tree(TreeJson),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum RuleJson {
    Literal { feature: usize },
    NegatedLiteral { feature: usize },
    ConstTrue,
    ConstFalse,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum TreeJson {
    Split {
        split: usize,
        left: Box<TreeJson>,
        right: Box<TreeJson>,
    },
    Leaf {
        label: i8,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct TraceJson {
    round: usize,
    advantage: f64,
    eta: Option<f64>,
}

pub fn learner_name(kind: LearnerKind) -> &'static str {
    match kind {
        LearnerKind::OneRule => "1r",
        LearnerKind::DpOneRule => "dp-1r",
        LearnerKind::DpTopDown => "dp-topdown",
    }
}

pub fn learner_from_name(name: &str) -> Result<LearnerKind, DataError> {
    match name {
        "1r" => Ok(LearnerKind::OneRule),
        "dp-1r" => Ok(LearnerKind::DpOneRule),
        "dp-topdown" => Ok(LearnerKind::DpTopDown),
        other => Err(DataError::Model(format!("unknown learner `{other}`"))),
    }
}

fn accounting_name(a: Accounting) -> &'static str {
    match a {
        Accounting::Basic => "basic",
        Accounting::Advanced => "advanced",
    }
}

fn accounting_from_name(name: &str) -> Result<Accounting, DataError> {
    match name {
        "basic" => Ok(Accounting::Basic),
        "advanced" => Ok(Accounting::Advanced),
        other => Err(DataError::Model(format!(
            "unknown accounting mode `{other}`"
        ))),
    }
}

fn tree_to_json(tree: &DecisionTree, node: usize) -> TreeJson {
    match &tree.nodes()[node] {
        TreeNode::Leaf { label } => TreeJson::Leaf { label: *label },
        TreeNode::Split {
            feature,
            left,
            right,
        } => TreeJson::Split {
            split: *feature,
            left: Box::new(tree_to_json(tree, *left)),
            right: Box::new(tree_to_json(tree, *right)),
        },
    }
}

fn tree_from_json(json: &TreeJson) -> Result<DecisionTree, DataError> {
    fn build(json: &TreeJson, nodes: &mut Vec<TreeNode>) -> usize {
        let id = nodes.len();
        match json {
            TreeJson::Leaf { label } => nodes.push(TreeNode::Leaf { label: *label }),
            TreeJson::Split { split, left, right } => {
                nodes.push(TreeNode::Leaf { label: 1 }); // placeholder
                let l = build(left, nodes);
                let r = build(right, nodes);
                nodes[id] = TreeNode::Split {
                    feature: *split,
                    left: l,
                    right: r,
                };
            }
        }
        id
    }
    let mut nodes = Vec::new();
    build(json, &mut nodes);
    DecisionTree::from_nodes(nodes).map_err(|e| DataError::Model(e.to_string()))
}

fn hypothesis_to_json(h: &Hypothesis) -> HypothesisJson {
    match h {
        Hypothesis::Rule(OneRule::Literal(j)) => {
            HypothesisJson::Rule(RuleJson::Literal { feature: *j })
        }
        Hypothesis::Rule(OneRule::NegatedLiteral(j)) => {
            HypothesisJson::Rule(RuleJson::NegatedLiteral { feature: *j })
        }
        Hypothesis::Rule(OneRule::ConstTrue) => HypothesisJson::Rule(RuleJson::ConstTrue),
        Hypothesis::Rule(OneRule::ConstFalse) => HypothesisJson::Rule(RuleJson::ConstFalse),
        Hypothesis::Tree(t) => HypothesisJson::Tree(tree_to_json(t, 0)),
    }
}

fn hypothesis_from_json(json: &HypothesisJson) -> Result<Hypothesis, DataError> {
    Ok(match json {
        HypothesisJson::Rule(RuleJson::Literal { feature }) => {
            Hypothesis::Rule(OneRule::Literal(*feature))
        }
        HypothesisJson::Rule(RuleJson::NegatedLiteral { feature }) => {
            Hypothesis::Rule(OneRule::NegatedLiteral(*feature))
        }
        HypothesisJson::Rule(RuleJson::ConstTrue) => Hypothesis::Rule(OneRule::ConstTrue),
        HypothesisJson::Rule(RuleJson::ConstFalse) => Hypothesis::Rule(OneRule::ConstFalse),
        HypothesisJson::Tree(t) => Hypothesis::Tree(tree_from_json(t)?),
    })
}

pub fn to_json_string(ensemble: &Ensemble) -> String {
    let json = ModelJson {
        config: ConfigJson {
            kappa: ensemble.config.kappa,
            lambda: ensemble.config.lambda,
            rounds: ensemble.config.rounds,
            learner: learner_name(ensemble.config.learner).to_string(),
            tree_nodes: ensemble.config.tree_nodes,
            epsilon: ensemble.config.epsilon,
            delta: ensemble.config.delta,
            accounting: accounting_name(ensemble.config.accounting).to_string(),
            beta: ensemble.config.beta,
            seed: ensemble.config.seed,
            features: ensemble.feature_count,
            train_n: ensemble.train_n,
            early_stop_window: ensemble.config.early_stop_window,
        },
        hypotheses: ensemble.hypotheses.iter().map(hypothesis_to_json).collect(),
        trace: ensemble
            .trace
            .iter()
            .map(|r| TraceJson {
                round: r.round,
                advantage: r.advantage,
                eta: r.eta,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&json).expect("model serialization is infallible")
}

pub fn save(ensemble: &Ensemble, path: &Path) -> Result<(), DataError> {
    fs::write(path, to_json_string(ensemble) + "\n")
        .map_err(|e| DataError::Io(path.display().to_string(), e))
}

pub fn load(path: &Path) -> Result<Ensemble, DataError> {
    let text =
        fs::read_to_string(path).map_err(|e| DataError::Io(path.display().to_string(), e))?;
    let json: ModelJson = serde_json::from_str(&text)
        .map_err(|e| DataError::Model(format!("{}: {e}", path.display())))?;
    let hypotheses = json
        .hypotheses
        .iter()
        .map(hypothesis_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    for h in &hypotheses {
        if let Some(&max) = h.features_used().iter().max() {
            if max >= json.config.features {
                return Err(DataError::Model(format!(
                    "{}: hypothesis reads feature {max} but the model declares only {} \
                     features",
                    path.display(),
                    json.config.features
                )));
            }
        }
    }
    let config = BoostConfig {
        kappa: json.config.kappa,
        lambda: json.config.lambda,
        rounds: json.config.rounds,
        learner: learner_from_name(&json.config.learner)?,
        tree_nodes: json.config.tree_nodes,
        epsilon: json.config.epsilon,
        delta: json.config.delta,
        accounting: accounting_from_name(&json.config.accounting)?,
        beta: json.config.beta,
        seed: json.config.seed,
        early_stop_window: json.config.early_stop_window,
    };
    Ok(Ensemble {
        hypotheses,
        config,
        trace: json
            .trace
            .iter()
            .map(|t| RoundRecord {
                round: t.round,
                advantage: t.advantage,
                eta: t.eta,
                // Not serialized; only training-time consumers read it.
                measure_mass: 0.0,
            })
            .collect(),
        feature_count: json.config.features,
        train_n: json.config.train_n,
    })
}

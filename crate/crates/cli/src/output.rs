//! JSON document shape shared by all commands.

use aggsem::{Interpretation, Pair, Universe};
use serde::Serialize;
use serde_json::Value;

#[derive(Serialize, Debug, Default)]
pub struct Document {
    pub command: String,
    pub semantics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub models: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kk: Option<PairDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wf: Option<PairDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Value>,
}

impl Document {
    pub fn render(&self) -> String {
        let mut out = serde_json::to_string(self).expect("document serializes");
        out.push('\n');
        out
    }
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct PairDoc {
    pub lower: Vec<String>,
    pub upper: Vec<String>,
}

/// Atom names of `i`, sorted.
pub fn atoms(universe: &Universe, i: &Interpretation) -> Vec<String> {
    universe.sorted_names(i).into_iter().map(str::to_string).collect()
}

pub fn pair_doc(universe: &Universe, pair: &Pair) -> PairDoc {
    PairDoc {
        lower: atoms(universe, &pair.lower),
        upper: atoms(universe, &pair.upper),
    }
}

pub fn models_doc(universe: &Universe, models: &[Interpretation]) -> Vec<Vec<String>> {
    models.iter().map(|m| atoms(universe, m)).collect()
}

pub fn show_pair(universe: &Universe, pair: &Pair) -> String {
    format!("({}, {})", universe.format(&pair.lower), universe.format(&pair.upper))
}

pub fn show_models(universe: &Universe, models: &[Interpretation]) -> String {
    if models.is_empty() {
        "none".to_string()
    } else {
        models
            .iter()
            .map(|m| universe.format(m))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

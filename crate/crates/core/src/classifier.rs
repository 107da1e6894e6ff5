//! Sentence and document polarity labels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::conllu::{DepTree, Document};
use crate::error::{Error, Result};
use crate::lexicon::SentimentLexicon;
use crate::ops::{compute_so, OperationDefinition, SoTrace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        })
    }
}

impl FromStr for Polarity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "positive" | "pos" => Ok(Polarity::Positive),
            "negative" | "neg" => Ok(Polarity::Negative),
            other => Err(Error::Usage(format!("unknown polarity `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Granularity {
    Sentence,
    Document,
}

/// How sentence SOs combine into a document SO.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Aggregation {
    #[default]
    Sum,
    Mean,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifierOptions {
    pub aggregation: Aggregation,
    /// Label given to an SO of exactly zero.
    pub tie: Polarity,
}

impl Default for ClassifierOptions {
    fn default() -> Self {
        ClassifierOptions {
            aggregation: Aggregation::Sum,
            tie: Polarity::Positive,
        }
    }
}

/// Label for an SO value; zero gets the tie label.
pub fn label(so: f64, tie: Polarity) -> Polarity {
    if so > 0.0 {
        Polarity::Positive
    } else if so < 0.0 {
        Polarity::Negative
    } else {
        tie
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolarityResult {
    pub so: f64,
    pub label: Polarity,
    pub granularity: Granularity,
    pub traces: Vec<SoTrace>,
}

#[derive(Clone, Copy, Debug)]
pub struct Classifier<'a> {
    pub lexicon: &'a SentimentLexicon,
    pub rules: &'a [OperationDefinition],
    pub options: ClassifierOptions,
}

impl<'a> Classifier<'a> {
    pub fn new(lexicon: &'a SentimentLexicon, rules: &'a [OperationDefinition]) -> Self {
        Classifier {
            lexicon,
            rules,
            options: ClassifierOptions::default(),
        }
    }

    pub fn with_options(mut self, options: ClassifierOptions) -> Self {
        self.options = options;
        self
    }

    pub fn classify_sentence(&self, tree: &DepTree) -> PolarityResult {
        let trace = compute_so(tree, self.lexicon, self.rules);
        PolarityResult {
            so: trace.sentence_so,
            label: label(trace.sentence_so, self.options.tie),
            granularity: Granularity::Sentence,
            traces: vec![trace],
        }
    }

    pub fn classify_document(&self, doc: &Document) -> Result<PolarityResult> {
        if doc.sentences.is_empty() {
            return Err(Error::Usage(format!(
                "document `{}` has no sentences",
                doc.source_id
            )));
        }
        let traces: Vec<SoTrace> = doc
            .sentences
            .iter()
            .map(|tree| compute_so(tree, self.lexicon, self.rules))
            .collect();
        let so = aggregate(
            traces.iter().map(|t| t.sentence_so),
            self.options.aggregation,
        );
        Ok(PolarityResult {
            so,
            label: label(so, self.options.tie),
            granularity: Granularity::Document,
            traces,
        })
    }
}

/// Combines sentence SOs. Values are summed in sorted order so the result
/// does not depend on sentence order.
pub fn aggregate(sentence_sos: impl IntoIterator<Item = f64>, aggregation: Aggregation) -> f64 {
    let mut values: Vec<f64> = sentence_sos.into_iter().collect();
    values.sort_by(f64::total_cmp);
    let sum: f64 = values.iter().sum();
    match aggregation {
        Aggregation::Sum => sum,
        Aggregation::Mean if values.is_empty() => 0.0,
        Aggregation::Mean => sum / values.len() as f64,
    }
}

pub fn classify_sentence(
    tree: &DepTree,
    lexicon: &SentimentLexicon,
    rules: &[OperationDefinition],
) -> PolarityResult {
    Classifier::new(lexicon, rules).classify_sentence(tree)
}

pub fn classify_document(
    doc: &Document,
    lexicon: &SentimentLexicon,
    rules: &[OperationDefinition],
) -> Result<PolarityResult> {
    Classifier::new(lexicon, rules).classify_document(doc)
}

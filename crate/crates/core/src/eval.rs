//! Accuracy over labeled corpora and the four lexicon/operation configurations.

use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{Classifier, ClassifierOptions, Polarity};
use crate::conllu::Document;
use crate::error::{read_file, Error, Result};
use crate::format::format_so;
use crate::lexicon::SentimentLexicon;
use crate::ops::OperationDefinition;

/// Single or merged lexicon, with or without operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConfigId {
    #[serde(rename = "SL-O")]
    SlNoOps,
    #[serde(rename = "SL+O")]
    SlOps,
    #[serde(rename = "ML-O")]
    MlNoOps,
    #[serde(rename = "ML+O")]
    MlOps,
}

impl ConfigId {
    pub const ALL: [ConfigId; 4] = [
        ConfigId::SlNoOps,
        ConfigId::SlOps,
        ConfigId::MlNoOps,
        ConfigId::MlOps,
    ];

    pub fn uses_operations(self) -> bool {
        matches!(self, ConfigId::SlOps | ConfigId::MlOps)
    }

    pub fn uses_merged_lexicon(self) -> bool {
        matches!(self, ConfigId::MlNoOps | ConfigId::MlOps)
    }
}

impl fmt::Display for ConfigId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfigId::SlNoOps => "SL-O",
            ConfigId::SlOps => "SL+O",
            ConfigId::MlNoOps => "ML-O",
            ConfigId::MlOps => "ML+O",
        })
    }
}

impl FromStr for ConfigId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConfigId::ALL
            .into_iter()
            .find(|id| id.to_string() == s.trim())
            .ok_or_else(|| Error::Usage(format!("unknown configuration `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestItem {
    pub path: PathBuf,
    pub gold: Polarity,
}

/// Gold labels paired with CoNLL-U files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusManifest {
    pub name: String,
    pub items: Vec<ManifestItem>,
}

impl CorpusManifest {
    /// Parses `path<TAB>positive|negative` lines. Relative paths are
    /// resolved against `base_dir`.
    pub fn parse(text: &str, name: &str, base_dir: &Path) -> Result<Self> {
        let mut items = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (path, gold) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(idx + 1, "expected `path<TAB>label`"))?;
            let gold = match gold.trim() {
                "positive" => Polarity::Positive,
                "negative" => Polarity::Negative,
                other => {
                    return Err(Error::parse(
                        idx + 1,
                        format!("gold label must be positive or negative, found `{other}`"),
                    ))
                }
            };
            items.push(ManifestItem {
                path: base_dir.join(path.trim()),
                gold,
            });
        }
        Ok(CorpusManifest {
            name: name.to_string(),
            items,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_file(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, &name, base).map_err(|e| e.in_file(path))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunConfig<'a> {
    pub id: ConfigId,
    pub lexicon: &'a SentimentLexicon,
    /// Empty for the configurations without operations.
    pub rules: &'a [OperationDefinition],
    pub options: ClassifierOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItemResult {
    pub path: String,
    pub gold: Polarity,
    pub predicted: Option<Polarity>,
    pub so: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub config_id: ConfigId,
    pub manifest: String,
    pub correct: usize,
    /// Items that were classified; errored items are excluded.
    pub total: usize,
    pub accuracy: f64,
    pub errored: usize,
    pub items: Vec<ItemResult>,
}

impl EvaluationReport {
    /// `config<TAB>correct<TAB>total<TAB>accuracy`, followed by one line per
    /// item when `verbose` is set.
    pub fn to_tsv(&self, verbose: bool) -> String {
        let mut out = format!(
            "{}\t{}\t{}\t{}\n",
            self.config_id,
            self.correct,
            self.total,
            format_so(self.accuracy)
        );
        if verbose {
            for item in &self.items {
                let _ = match (&item.predicted, item.so, &item.error) {
                    (Some(p), Some(so), _) => writeln!(
                        out,
                        "  {}\t{}\t{}\t{}",
                        item.path,
                        item.gold,
                        p,
                        format_so(so)
                    ),
                    (_, _, error) => writeln!(
                        out,
                        "  {}\t{}\terror\t{}",
                        item.path,
                        item.gold,
                        error.as_deref().unwrap_or("unknown")
                    ),
                };
            }
        }
        out
    }

    fn item_paths(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|i| i.path.as_str())
    }
}

/// Classifies every manifest item with `cfg` and scores it against gold.
pub fn evaluate(manifest: &CorpusManifest, cfg: &RunConfig<'_>) -> Result<EvaluationReport> {
    if manifest.items.is_empty() {
        return Err(Error::Usage(format!("manifest `{}` is empty", manifest.name)));
    }
    let classifier = Classifier {
        lexicon: cfg.lexicon,
        rules: cfg.rules,
        options: cfg.options,
    };

    let items: Vec<ItemResult> = manifest
        .items
        .par_iter()
        .map(|item| {
            let outcome = Document::read(&item.path).and_then(|doc| classifier.classify_document(&doc));
            let path = item.path.display().to_string();
            match outcome {
                Ok(result) => ItemResult {
                    path,
                    gold: item.gold,
                    predicted: Some(result.label),
                    so: Some(result.so),
                    error: None,
                },
                Err(e) => {
                    log::warn!("skipping {path}: {e}");
                    ItemResult {
                        path,
                        gold: item.gold,
                        predicted: None,
                        so: None,
                        error: Some(e.to_string()),
                    }
                }
            }
        })
        .collect();

    let errored = items.iter().filter(|i| i.error.is_some()).count();
    let total = items.len() - errored;
    if total == 0 {
        return Err(Error::Usage(format!(
            "no readable items in manifest `{}`",
            manifest.name
        )));
    }
    let correct = items
        .iter()
        .filter(|i| i.predicted == Some(i.gold))
        .count();

    Ok(EvaluationReport {
        config_id: cfg.id,
        manifest: manifest.name.clone(),
        correct,
        total,
        accuracy: correct as f64 / total as f64,
        errored,
        items,
    })
}

/// Accuracies of the four configurations, in percent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AccuracyRow {
    pub sl_no_ops: f64,
    pub sl_ops: f64,
    pub ml_no_ops: f64,
    pub ml_ops: f64,
}

/// Pairwise configuration differences in percentage points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ImpactTable {
    /// SL+O - SL-O
    pub o_effect_sl: f64,
    /// ML+O - ML-O
    pub o_effect_ml: f64,
    /// ML-O - SL-O
    pub ml_effect_no_ops: f64,
    /// ML+O - SL+O
    pub ml_effect_ops: f64,
}

impl ImpactTable {
    pub fn from_accuracies(row: AccuracyRow) -> Self {
        ImpactTable {
            o_effect_sl: row.sl_ops - row.sl_no_ops,
            o_effect_ml: row.ml_ops - row.ml_no_ops,
            ml_effect_no_ops: row.ml_no_ops - row.sl_no_ops,
            ml_effect_ops: row.ml_ops - row.sl_ops,
        }
    }

    pub fn to_tsv(&self) -> String {
        format!(
            "O(SL)\tO(ML)\tML(-O)\tML(+O)\n{:.2}\t{:.2}\t{:.2}\t{:.2}\n",
            self.o_effect_sl, self.o_effect_ml, self.ml_effect_no_ops, self.ml_effect_ops
        )
    }
}

/// Derives the impact table from one report per configuration.
pub fn compare_configs(reports: &[EvaluationReport]) -> Result<ImpactTable> {
    let find = |id: ConfigId| {
        let mut matching = reports.iter().filter(|r| r.config_id == id);
        match (matching.next(), matching.next()) {
            (Some(r), None) => Ok(r),
            (None, _) => Err(Error::Usage(format!("missing a report for {id}"))),
            (Some(_), Some(_)) => Err(Error::Usage(format!("more than one report for {id}"))),
        }
    };
    let [sl_no, sl_ops, ml_no, ml_ops] = [
        find(ConfigId::SlNoOps)?,
        find(ConfigId::SlOps)?,
        find(ConfigId::MlNoOps)?,
        find(ConfigId::MlOps)?,
    ];
    for r in [sl_ops, ml_no, ml_ops] {
        if r.manifest != sl_no.manifest || !r.item_paths().eq(sl_no.item_paths()) {
            return Err(Error::Usage(format!(
                "{} and {} were evaluated on different manifests",
                sl_no.config_id, r.config_id
            )));
        }
    }
    Ok(ImpactTable::from_accuracies(AccuracyRow {
        sl_no_ops: sl_no.accuracy * 100.0,
        sl_ops: sl_ops.accuracy * 100.0,
        ml_no_ops: ml_no.accuracy * 100.0,
        ml_ops: ml_ops.accuracy * 100.0,
    }))
}

/// Machine-readable evaluation summary.
#[derive(Clone, Debug, Serialize)]
pub struct EvaluationSummary {
    pub reports: Vec<EvaluationReport>,
    pub impact: Option<ImpactTable>,
}

impl EvaluationSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

//! Block-structured rule files.
//!
//! ```text
//! [operation]
//! name = negation
//! trigger.forms = @negators
//! trigger.pos = *
//! trigger.deprel = neg,advmod
//! tau = shift(4)
//! delta = 1
//! priority = 2
//! scope = target,b(root),b(cop),b(nsubj),subjr,all
//! ```
//!
//! `@name` refers to a word list supplied at load time. `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use super::{Beta, FormSet, OperationDefinition, ScopeSpec, TagSet, Transformation, TriggerPredicate};
use crate::error::{read_file, Error, Result};
use crate::lexicon::{WordList, WordLists};

/// The intensification, adversative, negation and irrealis rules.
pub const DEFAULT_RULES: &str = include_str!("../../../../rules/sisa_default.rules");

const KEYS: [&str; 8] = [
    "name",
    "trigger.forms",
    "trigger.pos",
    "trigger.deprel",
    "tau",
    "delta",
    "priority",
    "scope",
];

pub fn load_rules(path: &Path, lists: &WordLists) -> Result<Vec<OperationDefinition>> {
    let text = read_file(path)?;
    parse_rules(&text, lists).map_err(|e| e.in_file(path))
}

/// Parses rule definitions, keeping file order.
pub fn parse_rules(text: &str, lists: &WordLists) -> Result<Vec<OperationDefinition>> {
    let mut blocks: Vec<Block> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if line != "[operation]" {
                return Err(Error::parse(line_no, format!("unknown section `{line}`")));
            }
            blocks.push(Block {
                index: blocks.len() + 1,
                fields: BTreeMap::new(),
            });
            continue;
        }
        let block = blocks
            .last_mut()
            .ok_or_else(|| Error::parse(line_no, "setting outside an [operation] block"))?;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, format!("expected `key = value`, found `{line}`")))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(block.error(format!("unknown key `{key}` on line {line_no}")));
        }
        if block.fields.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(block.error(format!("duplicate key `{key}` on line {line_no}")));
        }
    }

    blocks.iter().map(|b| b.build(lists)).collect()
}

struct Block {
    index: usize,
    fields: BTreeMap<String, String>,
}

impl Block {
    fn rule_name(&self) -> String {
        self.fields
            .get("name")
            .cloned()
            .unwrap_or_else(|| format!("#{}", self.index))
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Config {
            rule: self.rule_name(),
            message: message.into(),
        }
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.fields
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| self.error(format!("missing `{key}`")))
    }

    fn build(&self, lists: &WordLists) -> Result<OperationDefinition> {
        let name = self.required("name")?;
        if name.is_empty() {
            return Err(self.error("empty name"));
        }

        let trigger = TriggerPredicate {
            forms: self.forms(lists)?,
            pos: tag_set(self.fields.get("trigger.pos")),
            deprels: tag_set(self.fields.get("trigger.deprel")),
        };
        if trigger.is_unconstrained() {
            return Err(self.error("trigger must constrain the form, tag or relation"));
        }

        let tau = self.transformation(lists)?;
        let delta = self
            .required("delta")?
            .parse::<u32>()
            .map_err(|_| self.error("delta must be a non-negative integer"))?;
        let priority = self
            .required("priority")?
            .parse::<i32>()
            .map_err(|_| self.error("priority must be an integer"))?;
        let scopes = self
            .required("scope")?
            .split(',')
            .map(|s| self.scope(s.trim()))
            .collect::<Result<Vec<_>>>()?;

        Ok(OperationDefinition {
            name: Arc::from(name),
            trigger,
            tau,
            delta,
            priority,
            scopes,
        })
    }

    fn list(&self, lists: &WordLists, reference: &str) -> Result<Arc<WordList>> {
        lists
            .get(reference)
            .cloned()
            .ok_or_else(|| self.error(format!("word list `@{reference}` was not supplied")))
    }

    fn forms(&self, lists: &WordLists) -> Result<FormSet> {
        match self.fields.get("trigger.forms").map(String::as_str) {
            None | Some("*") | Some("") => Ok(FormSet::Any),
            Some(value) => match value.strip_prefix('@') {
                Some(reference) => Ok(FormSet::Words(self.list(lists, reference.trim())?)),
                None => {
                    let words = value
                        .split(',')
                        .map(str::trim)
                        .filter(|w| !w.is_empty())
                        .map(|w| (w, None));
                    let name = format!("{}.forms", self.rule_name());
                    Ok(FormSet::Words(Arc::new(WordList::from_words(&name, words))))
                }
            },
        }
    }

    fn transformation(&self, lists: &WordLists) -> Result<Transformation> {
        let value = self.required("tau")?;
        let (kind, arg) = value
            .strip_suffix(')')
            .and_then(|v| v.split_once('('))
            .map(|(k, a)| (k.trim(), a.trim()))
            .ok_or_else(|| self.error(format!("malformed transformation `{value}`")))?;
        let constant = |arg: &str| {
            arg.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| self.error(format!("invalid parameter `{arg}` in `{value}`")))
        };
        match kind {
            "shift" if arg.starts_with('@') => {
                Err(self.error("shift requires a constant parameter"))
            }
            "shift" => Ok(Transformation::Shift(constant(arg)?)),
            "weighting" => match arg.strip_prefix('@') {
                Some(reference) => Ok(Transformation::Weighting(Beta::FromList(
                    self.list(lists, reference.trim())?,
                ))),
                None => Ok(Transformation::Weighting(Beta::Constant(constant(arg)?))),
            },
            other => Err(self.error(format!("unknown transformation `{other}`"))),
        }
    }

    fn scope(&self, spec: &str) -> Result<ScopeSpec> {
        match spec {
            "target" | "target_node" => Ok(ScopeSpec::TargetNode),
            "subjl" => Ok(ScopeSpec::SubjL),
            "subjr" => Ok(ScopeSpec::SubjR),
            "all" => Ok(ScopeSpec::All),
            _ => {
                let relation = spec
                    .strip_prefix("b(")
                    .and_then(|s| s.strip_suffix(')'))
                    .map(str::trim)
                    .filter(|r| !r.is_empty() && !r.contains(['(', ')']));
                match relation {
                    Some(rel) => Ok(ScopeSpec::Branch(rel.to_string())),
                    None => Err(self.error(format!("unknown scope `{spec}`"))),
                }
            }
        }
    }
}

fn tag_set(value: Option<&String>) -> TagSet {
    match value.map(|v| v.trim()) {
        None | Some("*") | Some("") => TagSet::Any,
        Some(v) => TagSet::Only(
            v.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(str::to_string)
                .collect(),
        ),
    }
}

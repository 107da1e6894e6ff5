//! Compositional operations over dependency trees.
//!
//! An operation fires on tokens matching its trigger predicate, climbs
//! `delta` levels towards the root and is then applied to one constituent
//! at that level, chosen by the first matching entry of its scope list.

mod config;
mod engine;
mod scope;
mod trace;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::conllu::Token;
use crate::lexicon::WordList;

pub use config::{load_rules, parse_rules, DEFAULT_RULES};
pub use engine::compute_so;
pub use scope::{resolve_scope, Branch, Level, ScopeMatch, Selection};
pub use trace::{Constituent, NodeTrace, SoTrace, TraceEvent};

/// `so * (1 + beta)`
pub fn apply_weighting(beta: f64, so: f64) -> f64 {
    so * (1.0 + beta)
}

/// Moves `so` by `alpha` towards the opposite sign; zero counts as positive.
pub fn apply_shift(alpha: f64, so: f64) -> f64 {
    if so >= 0.0 {
        so - alpha
    } else {
        so + alpha
    }
}

#[derive(Clone, Debug)]
pub enum Beta {
    Constant(f64),
    /// Read per trigger word from a booster list.
    FromList(Arc<WordList>),
}

#[derive(Clone, Debug)]
pub enum Transformation {
    Weighting(Beta),
    Shift(f64),
}

/// A transformation with its parameter fixed for one trigger.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResolvedTransformation {
    Weighting(f64),
    Shift(f64),
}

impl ResolvedTransformation {
    pub fn apply(self, so: f64) -> f64 {
        match self {
            ResolvedTransformation::Weighting(beta) => apply_weighting(beta, so),
            ResolvedTransformation::Shift(alpha) => apply_shift(alpha, so),
        }
    }
}

impl Transformation {
    /// Fixes the parameter for a trigger token. A booster lookup that finds
    /// no value for the trigger resolves to a no-op weighting and reports
    /// the missing word.
    pub fn resolve(&self, trigger: &Token) -> (ResolvedTransformation, Option<String>) {
        match self {
            Transformation::Shift(alpha) => (ResolvedTransformation::Shift(*alpha), None),
            Transformation::Weighting(Beta::Constant(beta)) => {
                (ResolvedTransformation::Weighting(*beta), None)
            }
            Transformation::Weighting(Beta::FromList(list)) => {
                let form = trigger.lower_form();
                match list.value(&form).or_else(|| list.value(&trigger.lookup_lemma())) {
                    Some(beta) => (ResolvedTransformation::Weighting(beta), None),
                    None => (ResolvedTransformation::Weighting(0.0), Some(form)),
                }
            }
        }
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transformation::Weighting(Beta::Constant(b)) => write!(f, "weighting({b})"),
            Transformation::Weighting(Beta::FromList(l)) => write!(f, "weighting(@{})", l.name),
            Transformation::Shift(a) => write!(f, "shift({a})"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum FormSet {
    Any,
    Words(Arc<WordList>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TagSet {
    Any,
    Only(BTreeSet<String>),
}

impl TagSet {
    pub fn contains(&self, tag: &str) -> bool {
        match self {
            TagSet::Any => true,
            TagSet::Only(tags) => tags.contains(tag),
        }
    }
}

/// Conjunction of constraints over word form, UPOS tag and relation.
#[derive(Clone, Debug)]
pub struct TriggerPredicate {
    pub forms: FormSet,
    pub pos: TagSet,
    pub deprels: TagSet,
}

impl TriggerPredicate {
    pub fn is_unconstrained(&self) -> bool {
        matches!(
            (&self.forms, &self.pos, &self.deprels),
            (FormSet::Any, TagSet::Any, TagSet::Any)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScopeSpec {
    /// The node at the target level itself.
    TargetNode,
    /// First branch at the target level with the given relation.
    Branch(String),
    /// First branch left of the trigger with a nonzero SO.
    SubjL,
    /// First branch right of the trigger with a nonzero SO.
    SubjR,
    /// The whole target level.
    All,
}

impl fmt::Display for ScopeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScopeSpec::TargetNode => f.write_str("target"),
            ScopeSpec::Branch(rel) => write!(f, "b({rel})"),
            ScopeSpec::SubjL => f.write_str("subjl"),
            ScopeSpec::SubjR => f.write_str("subjr"),
            ScopeSpec::All => f.write_str("all"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct OperationDefinition {
    pub name: Arc<str>,
    pub trigger: TriggerPredicate,
    pub tau: Transformation,
    /// Levels to climb from the trigger before applying.
    pub delta: u32,
    /// Higher priorities apply first among operations dequeued together.
    pub priority: i32,
    pub scopes: Vec<ScopeSpec>,
}

/// Whether `tok` triggers `defn`. Forms match on the lowercased form or
/// the lemma; relations match on their base type.
pub fn matches(defn: &OperationDefinition, tok: &Token) -> bool {
    let trigger = &defn.trigger;
    if !trigger.pos.contains(&tok.upos) || !trigger.deprels.contains(tok.base_deprel()) {
        return false;
    }
    match &trigger.forms {
        FormSet::Any => true,
        FormSet::Words(list) => {
            list.contains(&tok.lower_form()) || list.contains(&tok.lookup_lemma())
        }
    }
}

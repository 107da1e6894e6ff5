use std::fmt;
use std::sync::Arc;

use super::ScopeSpec;
use crate::format::format_so;

/// What an applied operation transformed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constituent {
    /// The lexical SO of the target node.
    Head(usize),
    /// The accumulated SO of the branch rooted at this node.
    Branch(usize),
    /// The whole level at this node.
    Level(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum TraceEvent {
    Triggered {
        rule: Arc<str>,
        trigger: usize,
        remaining: u32,
    },
    /// A booster rule fired on a word without a booster value.
    MissingBooster {
        rule: Arc<str>,
        trigger: usize,
        word: String,
    },
    /// The operation climbed into this node from a dependent.
    Arrived {
        rule: Arc<str>,
        trigger: usize,
        from: usize,
        remaining: u32,
    },
    Applied {
        rule: Arc<str>,
        trigger: usize,
        scope: ScopeSpec,
        target: Constituent,
        before: f64,
        after: f64,
        /// Applied at the root before climbing its full distance.
        forced: bool,
    },
    /// No scope entry matched.
    Discarded {
        rule: Arc<str>,
        trigger: usize,
        forced: bool,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeTrace {
    pub id: usize,
    pub form: String,
    pub lexical_so: f64,
    pub events: Vec<TraceEvent>,
    pub subtree_so: f64,
}

/// Record of one SO computation, nodes in surface order.
#[derive(Clone, Debug, PartialEq)]
pub struct SoTrace {
    pub nodes: Vec<NodeTrace>,
    pub root: usize,
    pub sentence_so: f64,
}

impl SoTrace {
    pub fn node(&self, id: usize) -> &NodeTrace {
        &self.nodes[id - 1]
    }

    pub fn events(&self) -> impl Iterator<Item = &TraceEvent> {
        self.nodes.iter().flat_map(|n| n.events.iter())
    }

    /// Applied and discarded operations, in application order per node.
    pub fn applications(&self) -> impl Iterator<Item = &TraceEvent> {
        self.events()
            .filter(|e| matches!(e, TraceEvent::Applied { .. } | TraceEvent::Discarded { .. }))
    }
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Triggered {
                rule,
                trigger,
                remaining,
            } => write!(f, "trigger {rule}@{trigger} remaining={remaining}"),
            TraceEvent::MissingBooster { rule, trigger, word } => {
                write!(f, "warn {rule}@{trigger} no booster value for \"{word}\", beta=0")
            }
            TraceEvent::Arrived {
                rule,
                trigger,
                from,
                remaining,
            } => write!(
                f,
                "arrive {rule}@{trigger} from={from} remaining={}->{remaining}",
                remaining + 1
            ),
            TraceEvent::Applied {
                rule,
                trigger,
                scope,
                target,
                before,
                after,
                forced,
            } => {
                let target = match target {
                    Constituent::Head(id) => format!("node={id}"),
                    Constituent::Branch(id) => format!("branch={id}"),
                    Constituent::Level(id) => format!("level={id}"),
                };
                write!(
                    f,
                    "apply {rule}@{trigger} scope={scope} {target} {} -> {}",
                    format_so(*before),
                    format_so(*after)
                )?;
                if *scope == ScopeSpec::All {
                    f.write_str(" backoff")?;
                }
                if *forced {
                    f.write_str(" forced")?;
                }
                Ok(())
            }
            TraceEvent::Discarded {
                rule,
                trigger,
                forced,
            } => {
                write!(f, "discard {rule}@{trigger} no scope matched")?;
                if *forced {
                    f.write_str(" forced")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for SoTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for node in &self.nodes {
            writeln!(
                f,
                "node {} {} lex={} subtree={}{}",
                node.id,
                node.form,
                format_so(node.lexical_so),
                format_so(node.subtree_so),
                if node.id == self.root { " root" } else { "" }
            )?;
            for event in &node.events {
                writeln!(f, "  {event}")?;
            }
        }
        writeln!(f, "sentence_so={}", format_so(self.sentence_so))
    }
}

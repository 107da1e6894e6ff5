use std::cmp::Reverse;

use super::scope::{resolve_scope, Branch, Level, Selection};
use super::trace::{Constituent, NodeTrace, SoTrace, TraceEvent};
use super::{matches, OperationDefinition, ResolvedTransformation};
use crate::conllu::DepTree;
use crate::lexicon::SentimentLexicon;

/// A triggered operation on its way to the target level.
#[derive(Clone, Debug)]
struct Pending {
    rule: usize,
    trigger: usize,
    remaining: u32,
    /// Branch at the current level that holds the trigger, or the trigger itself.
    origin: usize,
    tau: ResolvedTransformation,
}

struct Subtree {
    so: f64,
    pending: Vec<Pending>,
}

/// Computes the SO of a sentence.
///
/// Nodes are visited bottom-up. Operations triggered at a node climb one
/// level per step; when their remaining distance reaches zero they are
/// applied at that level in descending priority, leftmost trigger first.
/// The subtree SO of a node is its own (possibly transformed) lexical SO
/// plus the (possibly transformed) SOs of its branches. Operations still
/// climbing when they reach the root are applied there and flagged as
/// forced.
pub fn compute_so(
    tree: &DepTree,
    lexicon: &SentimentLexicon,
    rules: &[OperationDefinition],
) -> SoTrace {
    let mut nodes: Vec<NodeTrace> = tree
        .tokens()
        .iter()
        .map(|t| NodeTrace {
            id: t.id,
            form: t.form.clone(),
            lexical_so: lexicon.lookup(&t.form, &t.lookup_lemma(), &t.upos),
            events: Vec::new(),
            subtree_so: 0.0,
        })
        .collect();
    let mut results: Vec<Option<Subtree>> = (0..=tree.len()).map(|_| None).collect();

    for id in tree.post_order() {
        let token = tree.token(id);
        let is_root = id == tree.root_id();
        let mut events = Vec::new();

        let mut level = Level {
            node: id,
            head_so: nodes[id - 1].lexical_so,
            branches: Vec::with_capacity(tree.children(id).len()),
            adjustment: 0.0,
        };
        let mut ready = Vec::new();
        let mut climbing = Vec::new();

        for &child in tree.children(id) {
            let sub = results[child].take().expect("children are visited first");
            level.branches.push(Branch {
                id: child,
                deprel: tree.token(child).base_deprel(),
                so: sub.so,
            });
            for mut op in sub.pending {
                op.remaining -= 1;
                op.origin = child;
                events.push(TraceEvent::Arrived {
                    rule: rules[op.rule].name.clone(),
                    trigger: op.trigger,
                    from: child,
                    remaining: op.remaining,
                });
                if op.remaining == 0 || is_root {
                    ready.push(op);
                } else {
                    climbing.push(op);
                }
            }
        }

        for (idx, rule) in rules.iter().enumerate() {
            if !matches(rule, token) {
                continue;
            }
            let (tau, missing) = rule.tau.resolve(token);
            events.push(TraceEvent::Triggered {
                rule: rule.name.clone(),
                trigger: id,
                remaining: rule.delta,
            });
            if let Some(word) = missing {
                events.push(TraceEvent::MissingBooster {
                    rule: rule.name.clone(),
                    trigger: id,
                    word,
                });
            }
            let op = Pending {
                rule: idx,
                trigger: id,
                remaining: rule.delta,
                origin: id,
                tau,
            };
            if op.remaining == 0 || is_root {
                ready.push(op);
            } else {
                climbing.push(op);
            }
        }

        ready.sort_by_key(|op| (Reverse(rules[op.rule].priority), op.trigger, op.rule));
        for op in ready {
            let rule = &rules[op.rule];
            let forced = op.remaining > 0;
            match resolve_scope(&rule.scopes, &level, op.origin) {
                None => events.push(TraceEvent::Discarded {
                    rule: rule.name.clone(),
                    trigger: op.trigger,
                    forced,
                }),
                Some(m) => {
                    let (target, before, after) = match m.selection {
                        Selection::Head => {
                            let before = level.head_so;
                            level.head_so = op.tau.apply(before);
                            (Constituent::Head(id), before, level.head_so)
                        }
                        Selection::Branch(i) => {
                            let branch = &mut level.branches[i];
                            let before = branch.so;
                            branch.so = op.tau.apply(before);
                            (Constituent::Branch(branch.id), before, branch.so)
                        }
                        Selection::Level => {
                            let before = level.total();
                            let after = op.tau.apply(before);
                            level.adjustment += after - before;
                            (Constituent::Level(id), before, after)
                        }
                    };
                    events.push(TraceEvent::Applied {
                        rule: rule.name.clone(),
                        trigger: op.trigger,
                        scope: rule.scopes[m.spec].clone(),
                        target,
                        before,
                        after,
                        forced,
                    });
                }
            }
        }

        let so = level.total();
        let node = &mut nodes[id - 1];
        node.subtree_so = so;
        node.events = events;
        results[id] = Some(Subtree {
            so,
            pending: climbing,
        });
    }

    let root = tree.root_id();
    SoTrace {
        sentence_so: nodes[root - 1].subtree_so,
        nodes,
        root,
    }
}

//! Reference SO computation written directly from the operation contract.
//!
//! Instead of queuing operations and carrying them up the tree, this
//! materializes every (trigger, target level, origin) tuple up front and
//! then evaluates levels deepest first, applying the tuples aimed at each
//! level in priority order. It shares no code with the engine.

use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct Node {
    pub form: &'static str,
    pub upos: &'static str,
    /// 1-based head, 0 for the root.
    pub head: usize,
    pub deprel: &'static str,
}

#[derive(Clone, Copy, Debug)]
pub enum Tau {
    /// Weighting with beta taken from the booster table.
    Booster,
    Weight(f64),
    Shift(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scope {
    Target,
    B(&'static str),
    SubjL,
    SubjR,
    All,
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub forms: &'static [&'static str],
    pub pos: Option<&'static [&'static str]>,
    pub deprels: &'static [&'static str],
    pub tau: Tau,
    pub delta: usize,
    pub priority: i32,
    pub scopes: &'static [Scope],
}

pub struct Model {
    pub rules: Vec<Rule>,
    pub lexicon: HashMap<(&'static str, &'static str), f64>,
    pub boosters: HashMap<&'static str, f64>,
}

/// The four default operations, restated by hand.
pub fn default_rules(
    boosters: &'static [&'static str],
    adversatives: &'static [&'static str],
    negators: &'static [&'static str],
    irrealis: &'static [&'static str],
) -> Vec<Rule> {
    vec![
        Rule {
            forms: boosters,
            pos: Some(&["ADV", "ADJ"]),
            deprels: &["advmod", "amod", "nmod"],
            tau: Tau::Booster,
            delta: 1,
            priority: 3,
            scopes: &[Scope::Target, Scope::B("advmod"), Scope::B("amod")],
        },
        Rule {
            forms: adversatives,
            pos: Some(&["CONJ", "SCONJ"]),
            deprels: &["cc", "advmod", "mark"],
            tau: Tau::Weight(-0.25),
            delta: 1,
            priority: 1,
            scopes: &[Scope::SubjL],
        },
        Rule {
            forms: negators,
            pos: None,
            deprels: &["neg", "advmod"],
            tau: Tau::Shift(4.0),
            delta: 1,
            priority: 2,
            scopes: &[
                Scope::Target,
                Scope::B("root"),
                Scope::B("cop"),
                Scope::B("nsubj"),
                Scope::SubjR,
                Scope::All,
            ],
        },
        Rule {
            forms: irrealis,
            pos: None,
            deprels: &["mark", "advmod", "cc"],
            tau: Tau::Weight(-1.0),
            delta: 1,
            priority: 3,
            scopes: &[Scope::Target, Scope::SubjR],
        },
    ]
}

struct Tuple {
    rule: usize,
    trigger: usize,
    target: usize,
    origin: usize,
    beta: f64,
}

impl Model {
    fn fires(&self, rule: &Rule, node: &Node) -> bool {
        rule.forms.contains(&node.form)
            && rule.pos.is_none_or(|p| p.contains(&node.upos))
            && rule.deprels.contains(&node.deprel)
    }

    fn transform(&self, tau: Tau, beta: f64, so: f64) -> f64 {
        match tau {
            Tau::Booster | Tau::Weight(_) => so + so * beta,
            Tau::Shift(alpha) => {
                if so < 0.0 {
                    so + alpha
                } else {
                    so - alpha
                }
            }
        }
    }

    pub fn sentence_so(&self, nodes: &[Node]) -> f64 {
        let n = nodes.len();
        let parent = |id: usize| nodes[id - 1].head;
        let root = (1..=n).find(|&id| parent(id) == 0).expect("rooted");
        let depth = |mut id: usize| {
            let mut d = 0;
            while parent(id) != 0 {
                id = parent(id);
                d += 1;
            }
            d
        };

        let mut tuples = Vec::new();
        for trigger in 1..=n {
            for (r, rule) in self.rules.iter().enumerate() {
                if !self.fires(rule, &nodes[trigger - 1]) {
                    continue;
                }
                let (mut target, mut origin) = (trigger, trigger);
                let mut steps = rule.delta;
                while steps > 0 && target != root {
                    origin = target;
                    target = parent(target);
                    steps -= 1;
                }
                let beta = match rule.tau {
                    Tau::Booster => self.boosters.get(nodes[trigger - 1].form).copied().unwrap_or(0.0),
                    Tau::Weight(b) => b,
                    Tau::Shift(_) => 0.0,
                };
                tuples.push(Tuple {
                    rule: r,
                    trigger,
                    target,
                    origin,
                    beta,
                });
            }
        }

        let mut order: Vec<usize> = (1..=n).collect();
        order.sort_by_key(|&id| std::cmp::Reverse(depth(id)));

        let mut value = vec![0.0f64; n + 1];
        for v in order {
            let node = &nodes[v - 1];
            let mut head = self.lexicon.get(&(node.form, node.upos)).copied().unwrap_or(0.0);
            let kids: Vec<usize> = (1..=n).filter(|&c| parent(c) == v).collect();
            let mut kid_so: Vec<f64> = kids.iter().map(|&c| value[c]).collect();
            let mut adjust = 0.0;

            let mut here: Vec<&Tuple> = tuples.iter().filter(|t| t.target == v).collect();
            here.sort_by(|a, b| {
                let (pa, pb) = (self.rules[a.rule].priority, self.rules[b.rule].priority);
                pb.cmp(&pa)
                    .then(a.trigger.cmp(&b.trigger))
                    .then(a.rule.cmp(&b.rule))
            });

            for t in here {
                let rule = &self.rules[t.rule];
                for scope in rule.scopes {
                    let pick = |pred: &dyn Fn(usize) -> bool, kid_so: &[f64]| {
                        (0..kids.len()).find(|&i| pred(kids[i]) && kid_so[i] != 0.0)
                    };
                    let hit = match *scope {
                        Scope::Target => {
                            if head != 0.0 {
                                head = self.transform(rule.tau, t.beta, head);
                                true
                            } else {
                                false
                            }
                        }
                        Scope::B(rel) => {
                            let found = pick(&|c| c != t.origin && nodes[c - 1].deprel == rel, &kid_so);
                            found.map(|i| kid_so[i] = self.transform(rule.tau, t.beta, kid_so[i])).is_some()
                        }
                        Scope::SubjL => {
                            let found = pick(&|c| c < t.origin, &kid_so);
                            found.map(|i| kid_so[i] = self.transform(rule.tau, t.beta, kid_so[i])).is_some()
                        }
                        Scope::SubjR => {
                            let found = pick(&|c| c > t.origin, &kid_so);
                            found.map(|i| kid_so[i] = self.transform(rule.tau, t.beta, kid_so[i])).is_some()
                        }
                        Scope::All => {
                            let total = head + kid_so.iter().sum::<f64>() + adjust;
                            adjust += self.transform(rule.tau, t.beta, total) - total;
                            true
                        }
                    };
                    if hit {
                        break;
                    }
                }
            }

            value[v] = head + kid_so.iter().sum::<f64>() + adjust;
        }
        value[root]
    }
}

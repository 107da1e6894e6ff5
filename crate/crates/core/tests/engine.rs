mod common;

use std::collections::HashMap;

use proptest::prelude::*;

use sisa_core::conllu::{parse_document, DepTree};
use sisa_core::lexicon::{Scale, SentimentLexicon, WordList, WordLists};
use sisa_core::ops::{compute_so, parse_rules, Constituent, TraceEvent, DEFAULT_RULES};

use common::gen;
use common::oracle::{self, Model, Node, Rule, Scope, Tau};

fn tree(conllu: &str) -> DepTree {
    parse_document(conllu, "t").unwrap().sentences.remove(0)
}

fn lists() -> WordLists {
    [
        WordList::from_words("boosters", [("muy", Some(0.25)), ("poco", Some(-0.5)), ("tan", None)]),
        WordList::from_words("negators", [("no", None)]),
        WordList::from_words("adversatives", [("pero", None)]),
        WordList::from_words("irrealis", [("si", None)]),
    ]
    .into_iter()
    .collect()
}

fn lexicon() -> SentimentLexicon {
    SentimentLexicon::parse(
        "bueno\tADJ\t3\nmalo\tADJ\t-2.5\nbonito\tADJ\t3.5\ncasa\tNOUN\t0.75\npoco\tADJ\t-1.25\n",
        "t",
        Scale::Sfu,
    )
    .unwrap()
}

#[test]
fn no_triggers_sums_the_lexicon() {
    let t = tree(
        "1\tbueno\t_\tADJ\t_\t_\t0\troot\t_\t_\n2\tmalo\t_\tADJ\t_\t_\t1\tconj\t_\t_\n3\tcasa\t_\tNOUN\t_\t_\t2\tnmod\t_\t_\n",
    );
    let rules = parse_rules(DEFAULT_RULES, &lists()).unwrap();
    let trace = compute_so(&t, &lexicon(), &rules);
    assert_eq!(trace.sentence_so, 3.0 - 2.5 + 0.75);
    assert_eq!(trace.events().count(), 0);
}

#[test]
fn irrealis_neutralizes_its_head() {
    // si es bueno: weighting(-1) zeroes the head.
    let t = tree(
        "1\tsi\t_\tSCONJ\t_\t_\t3\tmark\t_\t_\n2\tes\t_\tAUX\t_\t_\t3\tcop\t_\t_\n3\tbueno\t_\tADJ\t_\t_\t0\troot\t_\t_\n",
    );
    let rules = parse_rules(DEFAULT_RULES, &lists()).unwrap();
    assert_eq!(compute_so(&t, &lexicon(), &rules).sentence_so, 0.0);
}

#[test]
fn negation_falls_through_to_a_branch() {
    // no tiene casa bonita: neutral verb head, polar object to the right.
    let t = tree(
        "1\tno\t_\tADV\t_\t_\t2\tadvmod\t_\t_\n2\ttiene\t_\tVERB\t_\t_\t0\troot\t_\t_\n3\tcasa\t_\tNOUN\t_\t_\t2\tobj\t_\t_\n4\tbonito\t_\tADJ\t_\t_\t3\tamod\t_\t_\n",
    );
    let rules = parse_rules(DEFAULT_RULES, &lists()).unwrap();
    let trace = compute_so(&t, &lexicon(), &rules);
    // obj branch holds 0.75 + 3.5 and is picked by subjr.
    assert_eq!(trace.sentence_so, 4.25 - 4.0);
    let applied: Vec<&TraceEvent> = trace.applications().collect();
    assert!(matches!(
        applied[0],
        TraceEvent::Applied { target: Constituent::Branch(3), forced: false, .. }
    ));
}

#[test]
fn zero_lexicon_negation_yields_minus_alpha() {
    let t = tree("1\tno\t_\tADV\t_\t_\t2\tadvmod\t_\t_\n2\tllueve\t_\tVERB\t_\t_\t0\troot\t_\t_\n");
    let rules = parse_rules(DEFAULT_RULES, &lists()).unwrap();
    let empty = SentimentLexicon::new("empty", Scale::Sfu);
    assert_eq!(compute_so(&t, &empty, &rules).sentence_so, -4.0);
}

#[test]
fn unmatched_scope_discards_the_operation() {
    // muy attached to a neutral head with no polar advmod/amod branch.
    let t = tree("1\tmuy\t_\tADV\t_\t_\t2\tadvmod\t_\t_\n2\tcorre\t_\tVERB\t_\t_\t0\troot\t_\t_\n");
    let rules = parse_rules(DEFAULT_RULES, &lists()).unwrap();
    let trace = compute_so(&t, &lexicon(), &rules);
    assert_eq!(trace.sentence_so, 0.0);
    assert!(matches!(
        trace.applications().next(),
        Some(TraceEvent::Discarded { forced: false, .. })
    ));
}

#[test]
fn trigger_at_root_is_forced() {
    // A lone negator is its own root; delta 1 cannot be climbed.
    let t = tree("1\tno\t_\tADV\t_\t_\t0\tadvmod\t_\t_\n");
    let rules = parse_rules(DEFAULT_RULES, &lists()).unwrap();
    let trace = compute_so(&t, &lexicon(), &rules);
    assert_eq!(trace.sentence_so, -4.0);
    assert!(matches!(
        trace.applications().next(),
        Some(TraceEvent::Applied { forced: true, target: Constituent::Level(1), .. })
    ));
    assert!(trace.to_string().contains("backoff forced"));
}

#[test]
fn missing_booster_value_is_a_traced_no_op() {
    let t = tree("1\ttan\t_\tADV\t_\t_\t2\tadvmod\t_\t_\n2\tbueno\t_\tADJ\t_\t_\t0\troot\t_\t_\n");
    let rules = parse_rules(DEFAULT_RULES, &lists()).unwrap();
    let trace = compute_so(&t, &lexicon(), &rules);
    assert_eq!(trace.sentence_so, 3.0);
    assert!(trace
        .events()
        .any(|e| matches!(e, TraceEvent::MissingBooster { word, .. } if word == "tan")));
}

#[test]
fn deeper_and_zero_delta_rules() {
    let text = "\
[operation]
name = deep
trigger.forms = no
trigger.deprel = advmod
tau = shift(1)
delta = 2
priority = 1
scope = target,all

[operation]
name = local
trigger.forms = poco
tau = weighting(-0.5)
delta = 0
priority = 1
scope = target
";
    let rules = parse_rules(text, &lists()).unwrap();
    // no -> poco -> bueno: `deep` climbs two levels to bueno, `local` fires on poco itself.
    let t = tree(
        "1\tno\t_\tADV\t_\t_\t2\tadvmod\t_\t_\n2\tpoco\t_\tADJ\t_\t_\t3\tamod\t_\t_\n3\tbueno\t_\tADJ\t_\t_\t0\troot\t_\t_\n",
    );
    let trace = compute_so(&t, &lexicon(), &rules);
    // poco: -1.25 * 0.5 = -0.625; bueno: 3 - 1 = 2.
    assert_eq!(trace.node(2).subtree_so, -0.625);
    assert_eq!(trace.sentence_so, 2.0 - 0.625);
}

#[test]
fn relation_subtypes_match_their_base() {
    let t = tree("1\tmuy\t_\tADV\t_\t_\t2\tadvmod:emph\t_\t_\n2\tbueno\t_\tADJ\t_\t_\t0\troot\t_\t_\n");
    let rules = parse_rules(DEFAULT_RULES, &lists()).unwrap();
    assert_eq!(compute_so(&t, &lexicon(), &rules).sentence_so, 3.75);
}

#[test]
fn neutralized_lexicon_entries_contribute_nothing() {
    let a = SentimentLexicon::parse("bueno\tADJ\t2\n", "a", Scale::Sfu).unwrap();
    let b = SentimentLexicon::parse("bueno\tADJ\t-2\n", "b", Scale::Sfu).unwrap();
    let merged = sisa_core::merge_lexica(&[a, b], "m").unwrap();
    let t = tree("1\tno\t_\tADV\t_\t_\t2\tadvmod\t_\t_\n2\tbueno\t_\tADJ\t_\t_\t0\troot\t_\t_\n");
    let rules = parse_rules(DEFAULT_RULES, &lists()).unwrap();
    // The head counts as neutral, so negation backs off to the level.
    assert_eq!(compute_so(&t, &merged, &rules).sentence_so, -4.0);
}

fn oracle_model(rules: Vec<Rule>) -> Model {
    Model {
        rules,
        lexicon: HashMap::from([
            (("bueno", "ADJ"), 3.0),
            (("malo", "ADJ"), -2.5),
            (("bonito", "ADJ"), 3.5),
            (("casa", "NOUN"), 0.75),
            (("poco", "ADJ"), -1.25),
        ]),
        boosters: HashMap::from([("muy", 0.25), ("poco", -0.5)]),
    }
}

fn to_nodes(tree: &DepTree) -> Vec<Node> {
    // Map back onto the static vocabulary the oracle borrows from.
    tree.tokens()
        .iter()
        .map(|t| Node {
            form: gen::WORDS.iter().find(|w| w.0 == t.form).unwrap().0,
            upos: gen::WORDS.iter().find(|w| w.0 == t.form).unwrap().1,
            head: t.head,
            deprel: ["root"]
                .iter()
                .chain(gen::RELATIONS.iter())
                .find(|r| **r == t.deprel)
                .copied()
                .unwrap(),
        })
        .collect()
}

const VARIANT_RULES: &str = "\
[operation]
name = far_negation
trigger.forms = @negators
trigger.deprel = neg,advmod
tau = shift(3)
delta = 2
priority = 2
scope = b(nsubj),subjl,target,all

[operation]
name = self_boost
trigger.forms = @boosters
trigger.pos = ADJ
tau = weighting(@boosters)
delta = 0
priority = 2
scope = target,subjr

[operation]
name = adversative
trigger.forms = @adversatives
trigger.deprel = cc,mark
tau = weighting(-0.25)
delta = 1
priority = 5
scope = subjl,b(conj)
";

fn variant_oracle_rules() -> Vec<Rule> {
    vec![
        Rule {
            forms: &["no"],
            pos: None,
            deprels: &["neg", "advmod"],
            tau: Tau::Shift(3.0),
            delta: 2,
            priority: 2,
            scopes: &[Scope::B("nsubj"), Scope::SubjL, Scope::Target, Scope::All],
        },
        Rule {
            forms: &["muy", "poco"],
            pos: Some(&["ADJ"]),
            deprels: &["advmod", "amod", "nmod", "cc", "mark", "neg", "cop", "nsubj", "obj", "conj", "xcomp", "root"],
            tau: Tau::Booster,
            delta: 0,
            priority: 2,
            scopes: &[Scope::Target, Scope::SubjR],
        },
        Rule {
            forms: &["pero"],
            pos: None,
            deprels: &["cc", "mark"],
            tau: Tau::Weight(-0.25),
            delta: 1,
            priority: 5,
            scopes: &[Scope::SubjL, Scope::B("conj")],
        },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn default_rules_agree_with_oracle(t in gen::word_tree(9)) {
        let rules = parse_rules(DEFAULT_RULES, &lists()).unwrap();
        let model = oracle_model(oracle::default_rules(&["muy", "poco"], &["pero"], &["no"], &["si"]));
        let got = compute_so(&t, &lexicon(), &rules).sentence_so;
        let want = model.sentence_so(&to_nodes(&t));
        prop_assert!((got - want).abs() <= 1e-9, "engine {} oracle {}", got, want);
    }

    #[test]
    fn variant_rules_agree_with_oracle(t in gen::word_tree(9)) {
        let rules = parse_rules(VARIANT_RULES, &lists()).unwrap();
        let model = oracle_model(variant_oracle_rules());
        let got = compute_so(&t, &lexicon(), &rules).sentence_so;
        let want = model.sentence_so(&to_nodes(&t));
        prop_assert!((got - want).abs() <= 1e-9, "engine {} oracle {}", got, want);
    }

    #[test]
    fn trace_root_matches_sentence_so(t in gen::word_tree(9)) {
        let rules = parse_rules(DEFAULT_RULES, &lists()).unwrap();
        let trace = compute_so(&t, &lexicon(), &rules);
        prop_assert_eq!(trace.node(trace.root).subtree_so, trace.sentence_so);
    }
}

//! Proptest strategies for trees and lexica.

use proptest::prelude::*;

use sisa_core::conllu::{DepTree, Document, Token};

/// Head vectors (1-based, 0 = root) of random trees with `1..=max_n` nodes.
pub fn tree_shape(max_n: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let parents = proptest::collection::vec(any::<prop::sample::Index>(), n);
            let order = Just((1..=n).collect::<Vec<usize>>()).prop_shuffle();
            (parents, order)
        })
        .prop_map(|(parents, order)| {
            // order[k] is the surface id of the k-th node attached; each node
            // hangs off one attached before it.
            let n = order.len();
            let mut heads = vec![0; n];
            for k in 1..n {
                let parent = order[parents[k].index(k)];
                heads[order[k] - 1] = parent;
            }
            heads
        })
}

pub const RELATIONS: [&str; 11] = [
    "advmod", "amod", "nmod", "cc", "mark", "neg", "cop", "nsubj", "obj", "conj", "xcomp",
];

/// (form, upos) pairs covering every default trigger and some polar words.
pub const WORDS: [(&str, &str); 10] = [
    ("muy", "ADV"),
    ("poco", "ADJ"),
    ("no", "ADV"),
    ("pero", "CONJ"),
    ("si", "SCONJ"),
    ("bueno", "ADJ"),
    ("malo", "ADJ"),
    ("bonito", "ADJ"),
    ("casa", "NOUN"),
    ("es", "AUX"),
];

/// Trees over [`WORDS`] with random relations.
pub fn word_tree(max_n: usize) -> impl Strategy<Value = DepTree> {
    tree_shape(max_n)
        .prop_flat_map(|heads| {
            let n = heads.len();
            let words = proptest::collection::vec(0..WORDS.len(), n);
            let rels = proptest::collection::vec(0..RELATIONS.len(), n);
            (Just(heads), words, rels)
        })
        .prop_map(|(heads, words, rels)| {
            let tokens = heads
                .iter()
                .enumerate()
                .map(|(i, &head)| {
                    let (form, upos) = WORDS[words[i]];
                    Token {
                        id: i + 1,
                        form: form.to_string(),
                        lemma: "_".to_string(),
                        upos: upos.to_string(),
                        head,
                        deprel: if head == 0 { "root" } else { RELATIONS[rels[i]] }.to_string(),
                    }
                })
                .collect();
            DepTree::new(tokens, 1).expect("generated trees are valid")
        })
}

/// Trees with arbitrary printable forms, for format round trips.
pub fn free_tree(max_n: usize) -> impl Strategy<Value = DepTree> {
    tree_shape(max_n)
        .prop_flat_map(|heads| {
            let n = heads.len();
            let forms = proptest::collection::vec("[A-Za-zÁÉñçã'.,!?]{1,8}", n);
            let lemmas = proptest::collection::vec(prop_oneof!["_", "[a-zñ]{1,6}"], n);
            let upos = proptest::collection::vec(
                prop::sample::select(vec!["ADJ", "ADV", "NOUN", "VERB", "CONJ", "PUNCT"]),
                n,
            );
            let rels = proptest::collection::vec(
                prop::sample::select(vec!["advmod", "amod", "nsubj", "obj", "advmod:emph", "nmod:poss"]),
                n,
            );
            (Just(heads), forms, lemmas, upos, rels)
        })
        .prop_map(|(heads, forms, lemmas, upos, rels)| {
            let tokens = heads
                .iter()
                .enumerate()
                .map(|(i, &head)| Token {
                    id: i + 1,
                    form: forms[i].clone(),
                    lemma: lemmas[i].clone(),
                    upos: upos[i].to_string(),
                    head,
                    deprel: if head == 0 { "root".to_string() } else { rels[i].to_string() },
                })
                .collect();
            DepTree::new(tokens, 1).expect("generated trees are valid")
        })
}

pub fn document<S>(sentence: S, max_sentences: usize) -> impl Strategy<Value = Document>
where
    S: Strategy<Value = DepTree>,
{
    proptest::collection::vec(sentence, 0..=max_sentences).prop_map(|sentences| Document {
        sentences,
        source_id: "generated".to_string(),
    })
}

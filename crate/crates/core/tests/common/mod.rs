#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use std::path::PathBuf;

use sisa_core::lexicon::{Scale, SentimentLexicon, WordLists};
use sisa_core::ops::{parse_rules, OperationDefinition, DEFAULT_RULES};

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn shipped_lists() -> WordLists {
    WordLists::load_dir(&repo_root().join("lists")).unwrap()
}

pub fn default_rules(lists: &WordLists) -> Vec<OperationDefinition> {
    parse_rules(DEFAULT_RULES, lists).unwrap()
}

pub fn fixture_lexicon() -> SentimentLexicon {
    sisa_core::lexicon::load_lexicon(&fixture("lexicon.tsv"), Scale::Sfu).unwrap()
}

/// Every head assignment over `n` tokens that forms a single rooted tree.
pub fn rooted_trees(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut heads = vec![0usize; n];
    loop {
        if is_tree(&heads) {
            out.push(heads.clone());
        }
        // Odometer over heads[i] in 0..=n.
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            heads[i] += 1;
            if heads[i] <= n {
                break;
            }
            heads[i] = 0;
            i += 1;
        }
    }
}

fn is_tree(heads: &[usize]) -> bool {
    let n = heads.len();
    if heads.iter().filter(|&&h| h == 0).count() != 1 {
        return false;
    }
    (1..=n).all(|start| {
        let mut id = start;
        for _ in 0..=n {
            if heads[id - 1] == id {
                return false;
            }
            id = heads[id - 1];
            if id == 0 {
                return true;
            }
        }
        false
    })
}

//! Syntax-aware polarity classification.
//!
//! Sentences arrive as UD dependency trees in CoNLL-U. Each token gets a
//! semantic orientation (SO) from a subjectivity lexicon, and compositional
//! operations (intensification, adversatives, negation, irrealis) triggered
//! by particular words rewrite the SO of the constituents they govern as
//! the computation moves up the tree.

pub mod classifier;
pub mod conllu;
pub mod error;
pub mod eval;
pub mod format;
pub mod lexicon;
pub mod ops;

pub use classifier::{Aggregation, Classifier, ClassifierOptions, Polarity, PolarityResult};
pub use conllu::{parse_document, serialize_document, DepTree, Document, Token};
pub use error::{Error, Result};
pub use lexicon::{merge_lexica, scale_senticon, Scale, SentimentLexicon, WordList, WordLists};
pub use ops::{compute_so, parse_rules, OperationDefinition, SoTrace};

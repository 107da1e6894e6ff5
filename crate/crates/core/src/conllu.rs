//! Reading and writing dependency trees in CoNLL-U format.
//!
//! Only basic trees are modeled: multiword-token ranges (`1-2`) and empty
//! nodes (`5.1`) are dropped while reading. The XPOS, FEATS, DEPS and MISC
//! columns are not retained and are written back as `_`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{read_file, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    /// 1-based surface position.
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    /// Head position, 0 for the root.
    pub head: usize,
    pub deprel: String,
}

impl Token {
    /// Dependency relation without its subtype (`advmod:emph` -> `advmod`).
    pub fn base_deprel(&self) -> &str {
        base_relation(&self.deprel)
    }

    /// Lowercased word form.
    pub fn lower_form(&self) -> String {
        self.form.to_lowercase()
    }

    /// Lemma used for lookups. An unknown lemma (`_`) falls back to the
    /// lowercased form.
    pub fn lookup_lemma(&self) -> String {
        if self.lemma.is_empty() || self.lemma == "_" {
            self.form.to_lowercase()
        } else {
            self.lemma.to_lowercase()
        }
    }
}

/// Strips a relation subtype: `nmod:poss` -> `nmod`.
pub fn base_relation(deprel: &str) -> &str {
    deprel.split(':').next().unwrap_or(deprel)
}

/// A dependency-parsed sentence with a single root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepTree {
    tokens: Vec<Token>,
    root_id: usize,
    // children[id] lists the dependents of `id`, sorted; index 0 is unused.
    children: Vec<Vec<usize>>,
}

impl DepTree {
    /// Builds a tree, checking ids, heads, the single root and acyclicity.
    ///
    /// `sentence` is only used to label structural errors.
    pub fn new(tokens: Vec<Token>, sentence: usize) -> Result<Self> {
        let structure = |message: String| Error::Structure { sentence, message };

        if tokens.is_empty() {
            return Err(structure("sentence has no tokens".into()));
        }

        let n = tokens.len();
        let mut children = vec![Vec::new(); n + 1];
        let mut root_id = None;

        for (idx, token) in tokens.iter().enumerate() {
            if token.id != idx + 1 {
                return Err(structure(format!(
                    "token ids must be consecutive from 1, found {} at position {}",
                    token.id,
                    idx + 1
                )));
            }
            if token.form.is_empty() || token.upos.is_empty() {
                return Err(structure(format!("token {} has an empty form or tag", token.id)));
            }
            if token.head == token.id {
                return Err(structure(format!("token {} is its own head", token.id)));
            }
            if token.head > n {
                return Err(structure(format!(
                    "token {} has head {} beyond the sentence length {}",
                    token.id, token.head, n
                )));
            }
            if token.head == 0 {
                if let Some(other) = root_id {
                    return Err(structure(format!(
                        "multiple roots: tokens {} and {}",
                        other, token.id
                    )));
                }
                root_id = Some(token.id);
            } else {
                children[token.head].push(token.id);
            }
        }

        let root_id = root_id.ok_or_else(|| structure("no token is attached to the root".into()))?;

        // Every token must be reachable from the root, otherwise the heads form a cycle.
        let mut seen = vec![false; n + 1];
        let mut stack = vec![root_id];
        let mut reached = 0;
        while let Some(id) = stack.pop() {
            seen[id] = true;
            reached += 1;
            stack.extend(children[id].iter().copied());
        }
        if reached != n {
            let stray = (1..=n).find(|&id| !seen[id]).unwrap_or(0);
            return Err(structure(format!("head cycle involving token {stray}")));
        }

        Ok(DepTree {
            tokens,
            root_id,
            children,
        })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn root_id(&self) -> usize {
        self.root_id
    }

    /// Token with the given 1-based id.
    pub fn token(&self, id: usize) -> &Token {
        &self.tokens[id - 1]
    }

    /// Dependents of `id`, in surface order.
    pub fn children(&self, id: usize) -> &[usize] {
        &self.children[id]
    }

    /// Node ids in post-order: every node appears after all of its dependents.
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.tokens.len());
        let mut stack = vec![(self.root_id, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                order.push(id);
            } else {
                stack.push((id, true));
                for &child in self.children[id].iter().rev() {
                    stack.push((child, false));
                }
            }
        }
        order
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub sentences: Vec<DepTree>,
    pub source_id: String,
}

impl Document {
    pub fn read(path: &Path) -> Result<Self> {
        let text = read_file(path)?;
        let source_id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        parse_document(&text, &source_id).map_err(|e| e.in_file(path))
    }
}

/// Parses a CoNLL-U stream into one tree per sentence block.
pub fn parse_document(text: &str, source_id: &str) -> Result<Document> {
    let mut sentences = Vec::new();
    let mut block: Vec<Token> = Vec::new();
    let mut block_has_lines = false;

    let mut flush = |block: &mut Vec<Token>, has_lines: &mut bool| -> Result<()> {
        if *has_lines {
            let tokens = std::mem::take(block);
            sentences.push(DepTree::new(tokens, sentences.len() + 1)?);
        }
        *has_lines = false;
        Ok(())
    };

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);

        if line.trim().is_empty() {
            flush(&mut block, &mut block_has_lines)?;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }

        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 10 {
            return Err(Error::parse(
                line_no,
                format!("expected 10 tab-separated columns, found {}", fields.len()),
            ));
        }

        let id_field = fields[0];
        if id_field.contains('-') || id_field.contains('.') {
            // Multiword range or empty node.
            block_has_lines = true;
            continue;
        }
        let id: usize = id_field
            .parse()
            .map_err(|_| Error::parse(line_no, format!("invalid token id `{id_field}`")))?;
        if id == 0 {
            return Err(Error::parse(line_no, "token id must be at least 1"));
        }
        let head: usize = fields[6]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("invalid head `{}`", fields[6])))?;

        block.push(Token {
            id,
            form: fields[1].to_string(),
            lemma: fields[2].to_string(),
            upos: fields[3].to_string(),
            head,
            deprel: fields[7].to_string(),
        });
        block_has_lines = true;
    }
    flush(&mut block, &mut block_has_lines)?;

    Ok(Document {
        sentences,
        source_id: source_id.to_string(),
    })
}

/// Writes a document as CoNLL-U, one blank line after every sentence.
pub fn serialize_document(doc: &Document) -> String {
    let mut out = String::new();
    for tree in &doc.sentences {
        for t in tree.tokens() {
            // Writing to a String cannot fail.
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t_\t_\t{}\t{}\t_\t_",
                t.id, t.form, t.lemma, t.upos, t.head, t.deprel
            );
        }
        out.push('\n');
    }
    out
}

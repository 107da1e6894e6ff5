//! Subjectivity lexica and trigger word lists.
//!
//! Lexicon files hold one `entry<TAB>pos<TAB>so` record per line. Values are
//! stored on the SFU scale (magnitudes 1 to 5). Raw ML-Senticon values
//! (magnitudes up to 1) are rescaled on load with [`scale_senticon`].
//!
//! Every entry keeps the sum and the number of contributing values, so
//! repeated merging computes the mean over all original values regardless
//! of how the merges are grouped.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{read_file, Error, Result};
use crate::format::format_so;

/// Part-of-speech classes used by lexicon files.
pub const LEXICON_POS: [&str; 5] = ["ADJ", "NOUN", "ADV", "VERB", "*"];

pub const WILDCARD_POS: &str = "*";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Sfu,
    SenticonRaw,
}

impl Scale {
    fn max_magnitude(self) -> f64 {
        match self {
            Scale::Sfu => 5.0,
            Scale::SenticonRaw => 1.0,
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Sfu => "sfu",
            Scale::SenticonRaw => "senticon_raw",
        })
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sfu" => Ok(Scale::Sfu),
            "senticon_raw" | "senticon" => Ok(Scale::SenticonRaw),
            other => Err(Error::Usage(format!("unknown lexicon scale `{other}`"))),
        }
    }
}

/// Maps a raw ML-Senticon value onto the SFU scale: sign(x) * (1 + 4|x|).
pub fn scale_senticon(so_raw: f64) -> Result<f64> {
    if !so_raw.is_finite() || so_raw.abs() > 1.0 {
        return Err(Error::InvalidValue {
            value: so_raw,
            reason: "raw ML-Senticon values must lie in [-1, 1]",
        });
    }
    if so_raw == 0.0 {
        return Err(Error::InvalidValue {
            value: so_raw,
            reason: "zero-polarity entries are not stored",
        });
    }
    Ok(so_raw.signum() * (1.0 + 4.0 * so_raw.abs()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LexiconEntry {
    pub so_sum: f64,
    pub count: u32,
}

impl LexiconEntry {
    pub fn new(so: f64) -> Self {
        LexiconEntry { so_sum: so, count: 1 }
    }

    pub fn so(&self) -> f64 {
        self.so_sum / self.count as f64
    }

    /// Contradictory contributions averaged out to exactly zero.
    pub fn is_neutralized(&self) -> bool {
        self.so() == 0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SentimentLexicon {
    pub name: String,
    pub scale: Scale,
    // entry -> pos -> value
    entries: BTreeMap<String, BTreeMap<String, LexiconEntry>>,
}

impl SentimentLexicon {
    pub fn new(name: impl Into<String>, scale: Scale) -> Self {
        SentimentLexicon {
            name: name.into(),
            scale,
            entries: BTreeMap::new(),
        }
    }

    /// Parses a lexicon, rescaling raw ML-Senticon values to the SFU scale.
    pub fn parse(text: &str, name: &str, scale: Scale) -> Result<Self> {
        Self::parse_with(text, name, scale, true)
    }

    /// Parses a lexicon keeping the values on their source scale.
    pub fn parse_unscaled(text: &str, name: &str, scale: Scale) -> Result<Self> {
        Self::parse_with(text, name, scale, false)
    }

    fn parse_with(text: &str, name: &str, scale: Scale, rescale: bool) -> Result<Self> {
        let rescale = rescale && scale == Scale::SenticonRaw;
        let stored_scale = if rescale { Scale::Sfu } else { scale };
        let mut lex = SentimentLexicon::new(name, stored_scale);
        for record in records(text) {
            let (line, entry, pos, so) = record?;
            if so.abs() > scale.max_magnitude() {
                return Err(Error::Range {
                    line,
                    value: so,
                    scale,
                });
            }
            if so == 0.0 {
                log::warn!("{name}: line {line}: skipping zero-polarity entry `{entry}`");
                continue;
            }
            let so = if rescale { scale_senticon(so)? } else { so };
            lex.accumulate(entry, pos, LexiconEntry::new(so));
        }
        Ok(lex)
    }

    fn accumulate(&mut self, entry: String, pos: String, contribution: LexiconEntry) {
        self.entries
            .entry(entry)
            .or_default()
            .entry(pos)
            .and_modify(|e| {
                e.so_sum += contribution.so_sum;
                e.count += contribution.count;
            })
            .or_insert(contribution);
    }

    /// Adds one contributing value for `(entry, pos)`.
    pub fn insert(&mut self, entry: &str, pos: &str, so: f64) {
        self.accumulate(entry.to_lowercase(), pos.to_string(), LexiconEntry::new(so));
    }

    pub fn get(&self, entry: &str, pos: &str) -> Option<&LexiconEntry> {
        self.entries.get(entry)?.get(pos)
    }

    /// All entries ordered by `(entry, pos)`.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &LexiconEntry)> {
        self.entries.iter().flat_map(|(entry, by_pos)| {
            by_pos
                .iter()
                .map(move |(pos, e)| (entry.as_str(), pos.as_str(), e))
        })
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of entries per part-of-speech class, in [`LEXICON_POS`] order.
    pub fn size_by_pos(&self) -> Vec<(&'static str, usize)> {
        LEXICON_POS
            .iter()
            .map(|&pos| (pos, self.entries.values().filter(|m| m.contains_key(pos)).count()))
            .collect()
    }

    /// SO for a token, or 0 when absent. Keys are tried in the order
    /// (form, upos), (lemma, upos), (form, *), (lemma, *); the first hit
    /// wins and a neutralized hit yields 0.
    pub fn lookup(&self, form: &str, lemma: &str, upos: &str) -> f64 {
        let form = form.to_lowercase();
        let lemma = lemma.to_lowercase();
        let keys = [
            (&form, upos),
            (&lemma, upos),
            (&form, WILDCARD_POS),
            (&lemma, WILDCARD_POS),
        ];
        for (entry, pos) in keys {
            if let Some(e) = self.get(entry, pos) {
                return if e.is_neutralized() { 0.0 } else { e.so() };
            }
        }
        0.0
    }

    /// Writes the lexicon in the tab-separated file schema, one effective SO
    /// per entry.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# scale: {}\n", self.scale);
        for (entry, pos, e) in self.entries() {
            out.push_str(&format!("{entry}\t{pos}\t{}\n", format_so(e.so())));
        }
        out
    }
}

type Record = Result<(usize, String, String, f64)>;

fn records(text: &str) -> impl Iterator<Item = Record> + '_ {
    text.lines().enumerate().filter_map(|(idx, raw)| {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            return None;
        }
        Some(parse_record(line_no, line))
    })
}

fn parse_record(line_no: usize, line: &str) -> Record {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 3 {
        return Err(Error::parse(
            line_no,
            format!("expected entry, pos and SO, found {} fields", fields.len()),
        ));
    }
    let entry = fields[0].trim().to_lowercase();
    let pos = fields[1].trim().to_string();
    if entry.is_empty() {
        return Err(Error::parse(line_no, "empty entry"));
    }
    if !LEXICON_POS.contains(&pos.as_str()) {
        return Err(Error::parse(line_no, format!("unknown part of speech `{pos}`")));
    }
    let so: f64 = fields[2]
        .trim()
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite())
        .ok_or_else(|| Error::parse(line_no, format!("invalid SO value `{}`", fields[2])))?;
    Ok((line_no, entry, pos, so))
}

/// Scale declared by a `# scale: <tag>` header comment, if any.
pub fn declared_scale(text: &str) -> Option<Scale> {
    text.lines()
        .map(str::trim)
        .take_while(|l| l.is_empty() || l.starts_with('#'))
        .filter_map(|l| l.trim_start_matches('#').trim().strip_prefix("scale:"))
        .find_map(|tag| tag.parse().ok())
}

pub fn load_lexicon(path: &Path, scale: Scale) -> Result<SentimentLexicon> {
    let text = read_file(path)?;
    SentimentLexicon::parse(&text, &file_name(path), scale).map_err(|e| e.in_file(path))
}

pub fn load_lexicon_unscaled(path: &Path, scale: Scale) -> Result<SentimentLexicon> {
    let text = read_file(path)?;
    SentimentLexicon::parse_unscaled(&text, &file_name(path), scale).map_err(|e| e.in_file(path))
}

fn file_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Fuses lexica by averaging every contributing value of each
/// `(entry, pos)` key. The result does not depend on the order of `sources`.
pub fn merge_lexica(sources: &[SentimentLexicon], name: &str) -> Result<SentimentLexicon> {
    let first = sources
        .first()
        .ok_or_else(|| Error::Usage("nothing to merge".into()))?;
    if let Some(odd) = sources.iter().find(|l| l.scale != Scale::Sfu) {
        return Err(Error::ScaleMismatch(format!(
            "`{}` is on the {} scale while `{}` is on the sfu scale; rescale it first",
            odd.name, odd.scale, first.name
        )));
    }

    let mut parts: BTreeMap<(&str, &str), Vec<LexiconEntry>> = BTreeMap::new();
    for lex in sources {
        for (entry, pos, e) in lex.entries() {
            parts.entry((entry, pos)).or_default().push(*e);
        }
    }

    let mut merged_lex = SentimentLexicon::new(name, Scale::Sfu);
    for ((entry, pos), mut contributions) in parts {
        // Canonical summation order keeps the result independent of source order.
        contributions.sort_by(|a, b| a.so_sum.total_cmp(&b.so_sum).then(a.count.cmp(&b.count)));
        let merged = LexiconEntry {
            so_sum: contributions.iter().map(|c| c.so_sum).sum(),
            count: contributions.iter().map(|c| c.count).sum(),
        };
        merged_lex.accumulate(entry.to_string(), pos.to_string(), merged);
    }
    Ok(merged_lex)
}

/// A set of trigger words, optionally carrying a booster value per word.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WordList {
    pub name: String,
    words: BTreeMap<String, Option<f64>>,
    /// Entries that appeared more than once; the last value was kept.
    pub duplicates: Vec<String>,
}

impl WordList {
    pub fn parse(text: &str, name: &str) -> Result<Self> {
        let mut list = WordList {
            name: name.to_string(),
            ..Default::default()
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let word = fields.next().unwrap_or_default().trim().to_lowercase();
            let value = match fields.next().map(str::trim) {
                None | Some("") => None,
                Some(v) => Some(
                    v.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::parse(idx + 1, format!("invalid value `{v}`")))?,
                ),
            };
            if fields.next().is_some() {
                return Err(Error::parse(idx + 1, "expected at most two fields"));
            }
            if list.words.insert(word.clone(), value).is_some() {
                log::warn!("{name}: line {}: duplicate entry `{word}`, keeping the last value", idx + 1);
                list.duplicates.push(word);
            }
        }
        Ok(list)
    }

    pub fn from_words<I, S>(name: &str, words: I) -> Self
    where
        I: IntoIterator<Item = (S, Option<f64>)>,
        S: AsRef<str>,
    {
        WordList {
            name: name.to_string(),
            words: words
                .into_iter()
                .map(|(w, v)| (w.as_ref().to_lowercase(), v))
                .collect(),
            duplicates: Vec::new(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains_key(word)
    }

    /// Booster value of `word`; `None` when absent or listed without a value.
    pub fn value(&self, word: &str) -> Option<f64> {
        self.words.get(word).copied().flatten()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

pub fn load_wordlist(path: &Path) -> Result<WordList> {
    let text = read_file(path)?;
    WordList::parse(&text, &file_name(path)).map_err(|e| e.in_file(path))
}

/// Named word lists referenced from rule files as `@name`.
#[derive(Clone, Debug, Default)]
pub struct WordLists(BTreeMap<String, Arc<WordList>>);

impl WordLists {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, list: WordList) {
        self.0.insert(list.name.clone(), Arc::new(list));
    }

    pub fn get(&self, name: &str) -> Option<&Arc<WordList>> {
        self.0.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    /// Loads every `.txt` and `.tsv` file in `dir`, named by file stem.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut lists = WordLists::new();
        let mut paths: Vec<_> = fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| {
                p.is_file()
                    && matches!(p.extension().and_then(|e| e.to_str()), Some("txt" | "tsv"))
            })
            .collect();
        paths.sort();
        for path in paths {
            lists.insert(load_wordlist(&path)?);
        }
        Ok(lists)
    }
}

impl FromIterator<WordList> for WordLists {
    fn from_iter<T: IntoIterator<Item = WordList>>(iter: T) -> Self {
        let mut lists = WordLists::new();
        for list in iter {
            lists.insert(list);
        }
        lists
    }
}

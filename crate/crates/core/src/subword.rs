//! Byte-pair-encoding subword vocabulary: learning, application, decoding.
//!
//! The vocabulary is learned jointly over the source and target sides of a
//! corpus from a single word-frequency map. Each word starts as its
//! characters followed by a dedicated end-of-word symbol; the learner then
//! repeatedly merges the most frequent adjacent symbol pair (weighted by
//! word counts) until `|alphabet| + |merges|` reaches the requested
//! vocabulary size or no pair occurs at least twice. Count ties are broken
//! by ascending `(left, right)` symbol order, with the end-of-word symbol
//! ordering after every ordinary symbol, so learning is deterministic.
//!
//! Application replays the merges in learned order wherever they fit,
//! greedily left to right within each word, and renders the surviving
//! units with the `@@` continuation suffix on every non-final unit:
//!
//! ```text
//! low   -> low            (fully merged)
//! lower -> low@@ e@@ r
//! ```
//!
//! Decoding concatenates continuation units and is the exact inverse of
//! application for any token sequence; a unit stream that ends mid-word
//! raises [`SubwordError::DanglingContinuation`]. The one surface form that
//! could confuse decoding — a word-final unit whose own text ends in `@@` —
//! is split during rendering so the invariant holds even for tokens made of
//! `@` characters.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::corpus::ParallelCorpus;
use crate::parallel;

/// Suffix marking a unit that continues inside the same word.
pub const CONTINUATION_MARKER: &str = "@@";

/// Default rendering of the end-of-word symbol in merge files.
pub const DEFAULT_EOW_MARKER: &str = "</w>";

/// Errors raised by subword operations.
#[derive(Debug, thiserror::Error)]
pub enum SubwordError {
    /// The requested vocabulary cannot even hold the alphabet.
    #[error("target size {target} must exceed the alphabet size {alphabet}")]
    TargetTooSmall {
        /// Requested vocabulary size.
        target: usize,
        /// Number of initial symbols (characters plus end-of-word).
        alphabet: usize,
    },
    /// Learning over a corpus with no words.
    #[error("cannot learn subwords from an empty corpus")]
    EmptyCorpus,
    /// A unit stream that ends while a word is still open.
    #[error("dangling continuation: unit stream ends after {unit:?}")]
    DanglingContinuation {
        /// The final, still-continuing unit.
        unit: String,
    },
    /// Underlying I/O failure.
    #[error("{path}: {source}")]
    Io {
        /// File involved.
        path: PathBuf,
        /// Original error.
        #[source]
        source: io::Error,
    },
    /// A merges file that does not follow the documented format.
    #[error("{path}:{line}: {reason}")]
    MalformedModel {
        /// File being parsed.
        path: PathBuf,
        /// 1-based line number.
        line: u64,
        /// What was wrong.
        reason: String,
    },
}

/// Result alias for subword operations.
pub type Result<T> = std::result::Result<T, SubwordError>;

/// A vocabulary symbol: a run of characters, optionally closed by the
/// end-of-word atom. The atom can only ever sit at the end of a symbol
/// because nothing follows it inside a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    text: String,
    eow: bool,
}

impl Symbol {
    fn from_char(c: char) -> Self {
        Self {
            text: c.to_string(),
            eow: false,
        }
    }

    fn end_of_word() -> Self {
        Self {
            text: String::new(),
            eow: true,
        }
    }

    fn concat(&self, right: &Symbol) -> Self {
        debug_assert!(!self.eow, "nothing may follow the end-of-word atom");
        Self {
            text: format!("{}{}", self.text, right.text),
            eow: right.eow,
        }
    }

    /// The symbol's characters, without the end-of-word marker.
    pub fn text(&self) -> &str {
        &self.text
    }

    /// True when the symbol closes a word.
    pub fn is_word_final(&self) -> bool {
        self.eow
    }

    /// Renders the symbol, appending `marker` when it closes a word.
    pub fn render(&self, marker: &str) -> String {
        if self.eow {
            format!("{}{marker}", self.text)
        } else {
            self.text.clone()
        }
    }

    /// Parses a rendering produced by [`Symbol::render`].
    fn parse(rendered: &str, marker: &str) -> Self {
        match rendered.strip_suffix(marker) {
            Some(text) => Self {
                text: text.to_owned(),
                eow: true,
            },
            None => Self {
                text: rendered.to_owned(),
                eow: false,
            },
        }
    }
}

impl Ord for Symbol {
    /// Lexicographic order over the unit sequence (characters, then the
    /// optional end-of-word atom), with the atom greater than any character.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.text.chars();
        let mut b = other.text.chars();
        loop {
            match (a.next(), b.next()) {
                (Some(x), Some(y)) => match x.cmp(&y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
                (None, None) => return self.eow.cmp(&other.eow),
                (None, Some(_)) => {
                    return if self.eow {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    }
                }
                (Some(_), None) => {
                    return if other.eow {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    }
                }
            }
        }
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A learned subword vocabulary: the initial alphabet and the ordered
/// merge list.
#[derive(Clone, Debug)]
pub struct BpeModel {
    alphabet: BTreeSet<Symbol>,
    merges: Vec<(Symbol, Symbol)>,
    eow_marker: String,
}

impl BpeModel {
    /// The ordered merges.
    pub fn merges(&self) -> &[(Symbol, Symbol)] {
        &self.merges
    }

    /// Merges rendered as text pairs, e.g. `("lo", "w")` or `("w", "</w>")`.
    pub fn rendered_merges(&self) -> Vec<(String, String)> {
        self.merges
            .iter()
            .map(|(l, r)| (l.render(&self.eow_marker), r.render(&self.eow_marker)))
            .collect()
    }

    /// The initial symbols: every character seen plus the end-of-word atom.
    /// For models loaded from a file this is reconstructed from the merges
    /// and may omit characters that were never merged.
    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    /// Distinct symbols producible by the model: the alphabet plus one new
    /// symbol per merge.
    pub fn vocab_size(&self) -> usize {
        self.alphabet.len() + self.merges.len()
    }

    /// The end-of-word rendering used in files.
    pub fn eow_marker(&self) -> &str {
        &self.eow_marker
    }

    /// A copy of the model keeping only the first `n_merges` merges; handy
    /// for comparing vocabulary sizes.
    pub fn truncated(&self, n_merges: usize) -> Self {
        Self {
            alphabet: self.alphabet.clone(),
            merges: self.merges[..n_merges.min(self.merges.len())].to_vec(),
            eow_marker: self.eow_marker.clone(),
        }
    }

    /// Splits one word into rendered subword units.
    ///
    /// The word is decomposed into characters plus the end-of-word atom,
    /// every merge is applied in learned order (greedily left to right
    /// where its pair occurs), and the surviving units are rendered with
    /// [`CONTINUATION_MARKER`] on all but the final unit.
    pub fn segment_word(&self, word: &str) -> Vec<String> {
        let mut units: Vec<Symbol> = word.chars().map(Symbol::from_char).collect();
        if units.is_empty() {
            return Vec::new();
        }
        units.push(Symbol::end_of_word());

        let mut present: HashSet<Symbol> = units.iter().cloned().collect();
        for (left, right) in &self.merges {
            if units.len() < 2 {
                break;
            }
            if !present.contains(left) || !present.contains(right) {
                continue;
            }
            if merge_adjacent(&mut units, left, right) {
                present = units.iter().cloned().collect();
            }
        }

        render_units(&units)
    }

    /// Serializes the model: a `#eow=` header and one `left right` merge
    /// per line, in learned order.
    pub fn write_to(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "#eow={}", self.eow_marker)?;
        for (left, right) in &self.merges {
            writeln!(
                w,
                "{} {}",
                left.render(&self.eow_marker),
                right.render(&self.eow_marker)
            )?;
        }
        Ok(())
    }

    /// Writes the model to a file; see [`BpeModel::write_to`].
    pub fn write_to_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|source| SubwordError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut w = BufWriter::new(file);
        self.write_to(&mut w)
            .and_then(|_| w.flush())
            .map_err(|source| SubwordError::Io {
                path: path.to_path_buf(),
                source,
            })
    }

    /// Reads a model written by [`BpeModel::write_to`].
    pub fn read_from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| SubwordError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let reader = BufReader::new(file);
        let mut eow_marker = DEFAULT_EOW_MARKER.to_owned();
        let mut merges = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i as u64 + 1;
            let line = line.map_err(|source| SubwordError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            if let Some(header) = line.strip_prefix('#') {
                if let Some(marker) = header.strip_prefix("eow=") {
                    eow_marker = marker.to_owned();
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let Some((left, right)) = line.split_once(' ') else {
                return Err(SubwordError::MalformedModel {
                    path: path.to_path_buf(),
                    line: line_no,
                    reason: "expected two space-separated symbols".to_owned(),
                });
            };
            merges.push((
                Symbol::parse(left, &eow_marker),
                Symbol::parse(right, &eow_marker),
            ));
        }
        // Reconstruct the alphabet implied by the merges.
        let mut alphabet: BTreeSet<Symbol> = BTreeSet::new();
        alphabet.insert(Symbol::end_of_word());
        for (left, right) in &merges {
            for sym in [left, right] {
                for c in sym.text.chars() {
                    alphabet.insert(Symbol::from_char(c));
                }
            }
        }
        Ok(Self {
            alphabet,
            merges,
            eow_marker,
        })
    }
}

/// Replaces every adjacent `left,right` occurrence in `units` with their
/// concatenation, scanning greedily left to right. Returns whether any
/// replacement happened.
fn merge_adjacent(units: &mut Vec<Symbol>, left: &Symbol, right: &Symbol) -> bool {
    let mut out: Vec<Symbol> = Vec::with_capacity(units.len());
    let mut i = 0;
    let mut changed = false;
    while i < units.len() {
        if i + 1 < units.len() && units[i] == *left && units[i + 1] == *right {
            out.push(left.concat(right));
            i += 2;
            changed = true;
        } else {
            out.push(units[i].clone());
            i += 1;
        }
    }
    if changed {
        *units = out;
    }
    changed
}

/// Renders final units: drop a bare end-of-word atom, mark every non-final
/// unit with the continuation suffix, and split a final unit whose own text
/// ends in the suffix so decoding stays unambiguous.
fn render_units(units: &[Symbol]) -> Vec<String> {
    let mut texts: Vec<&str> = units.iter().map(|u| u.text.as_str()).collect();
    if units.last().map(|u| u.eow && u.text.is_empty()) == Some(true) {
        texts.pop();
    }
    let Some((last, init)) = texts.split_last() else {
        return Vec::new();
    };
    let mut rendered: Vec<String> =
        init.iter().map(|t| format!("{t}{CONTINUATION_MARKER}")).collect();
    if let Some(stem) = last.strip_suffix(CONTINUATION_MARKER) {
        // "y@@" would read as a continuation; emit it as "y@@@" + "@".
        rendered.push(format!("{stem}@{CONTINUATION_MARKER}"));
        rendered.push("@".to_owned());
    } else {
        rendered.push((*last).to_owned());
    }
    rendered
}

/// Segments every token and concatenates the unit sequences.
pub fn apply_bpe(tokens: &[String], model: &BpeModel) -> Vec<String> {
    let mut units = Vec::new();
    for token in tokens {
        units.extend(model.segment_word(token));
    }
    units
}

/// Reassembles tokens from subword units, the inverse of [`apply_bpe`].
pub fn decode_bpe<T: AsRef<str>>(units: &[T]) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut buf = String::new();
    let mut open = false;
    for unit in units {
        let unit = unit.as_ref();
        match unit.strip_suffix(CONTINUATION_MARKER) {
            Some(stem) => {
                buf.push_str(stem);
                open = true;
            }
            None => {
                buf.push_str(unit);
                tokens.push(std::mem::take(&mut buf));
                open = false;
            }
        }
    }
    if open {
        return Err(SubwordError::DanglingContinuation {
            unit: units
                .last()
                .map(|u| u.as_ref().to_owned())
                .unwrap_or_default(),
        });
    }
    Ok(tokens)
}

/// A segmenting wrapper that memoizes distinct tokens; segmentation is a
/// pure function of the token, so the cache never changes results.
pub struct Segmenter<'a> {
    model: &'a BpeModel,
    cache: HashMap<String, Vec<String>>,
}

impl<'a> Segmenter<'a> {
    /// Wraps a model with an empty cache.
    pub fn new(model: &'a BpeModel) -> Self {
        Self {
            model,
            cache: HashMap::new(),
        }
    }

    /// Segments one token, consulting the cache first.
    pub fn segment_token(&mut self, token: &str) -> &[String] {
        if !self.cache.contains_key(token) {
            let units = self.model.segment_word(token);
            self.cache.insert(token.to_owned(), units);
        }
        &self.cache[token]
    }

    /// Segments a whitespace-tokenized line into a unit line.
    pub fn segment_line(&mut self, line: &str) -> String {
        let mut out = String::with_capacity(line.len() * 2);
        for token in line.split_whitespace() {
            for unit in self.segment_token(token) {
                if !out.is_empty() {
                    out.push(' ');
                }
                out.push_str(unit);
            }
        }
        out
    }
}

type SymId = u32;
type Pair = (SymId, SymId);

/// Interning table mapping symbols to dense ids.
struct SymbolTable {
    symbols: Vec<Symbol>,
    ids: HashMap<Symbol, SymId>,
}

impl SymbolTable {
    fn new() -> Self {
        Self {
            symbols: Vec::new(),
            ids: HashMap::new(),
        }
    }

    fn intern(&mut self, symbol: Symbol) -> SymId {
        if let Some(&id) = self.ids.get(&symbol) {
            return id;
        }
        let id = self.symbols.len() as SymId;
        self.symbols.push(symbol.clone());
        self.ids.insert(symbol, id);
        id
    }

    fn get(&self, id: SymId) -> &Symbol {
        &self.symbols[id as usize]
    }

    fn contains(&self, symbol: &Symbol) -> bool {
        self.ids.contains_key(symbol)
    }
}

/// A heap entry: preferred candidates have the higher count, ties going to
/// the lexicographically smallest `(left, right)` symbol pair.
struct Candidate {
    count: u64,
    left: Symbol,
    right: Symbol,
    pair: Pair,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.count
            .cmp(&other.count)
            .then_with(|| other.left.cmp(&self.left))
            .then_with(|| other.right.cmp(&self.right))
    }
}

/// Mutable learning state: words as symbol sequences, live pair counts, a
/// lazily maintained pair→word index and the candidate heap.
struct Learner {
    table: SymbolTable,
    words: Vec<(Vec<SymId>, u64)>,
    counts: HashMap<Pair, u64>,
    index: HashMap<Pair, BTreeSet<u32>>,
    heap: BinaryHeap<Candidate>,
    /// Pairs whose concatenation already names an existing symbol; merging
    /// them would not grow the vocabulary, so they are never chosen.
    banned: HashSet<Pair>,
}

impl Learner {
    fn push_candidate(&mut self, pair: Pair, count: u64) {
        if count < 2 || self.banned.contains(&pair) {
            return;
        }
        self.heap.push(Candidate {
            count,
            left: self.table.get(pair.0).clone(),
            right: self.table.get(pair.1).clone(),
            pair,
        });
    }

    /// Applies `delta` to a pair count and refreshes its heap entry.
    fn bump(&mut self, pair: Pair, delta: i64) {
        let entry = self.counts.entry(pair).or_insert(0);
        let next = (*entry as i64) + delta;
        debug_assert!(next >= 0, "pair counts never go negative");
        if next <= 0 {
            self.counts.remove(&pair);
            return;
        }
        *entry = next as u64;
        self.push_candidate(pair, next as u64);
    }

    /// Pops candidates until one matches its live count; stale entries are
    /// discarded because every count change pushed a fresh entry.
    fn best_pair(&mut self) -> Option<(Pair, u64)> {
        while let Some(candidate) = self.heap.pop() {
            if self.banned.contains(&candidate.pair) {
                continue;
            }
            let live = self.counts.get(&candidate.pair).copied().unwrap_or(0);
            if live == candidate.count && live >= 2 {
                return Some((candidate.pair, live));
            }
        }
        None
    }

    /// Rewrites every word containing `pair`, updating counts and index.
    fn apply_merge(&mut self, pair: Pair, merged: SymId) {
        let members = self.index.remove(&pair).unwrap_or_default();
        let (a, b) = pair;
        for w in members {
            let (word, count) = &self.words[w as usize];
            let count = *count;
            let mut rewritten: Vec<SymId> = Vec::with_capacity(word.len());
            let mut i = 0;
            let mut changed = false;
            while i < word.len() {
                if i + 1 < word.len() && word[i] == a && word[i + 1] == b {
                    rewritten.push(merged);
                    i += 2;
                    changed = true;
                } else {
                    rewritten.push(word[i]);
                    i += 1;
                }
            }
            if !changed {
                // Stale index entry left behind by an earlier rewrite.
                continue;
            }
            let old = std::mem::replace(&mut self.words[w as usize].0, rewritten);
            for window in old.windows(2) {
                self.bump((window[0], window[1]), -(count as i64));
            }
            let new_word = self.words[w as usize].0.clone();
            for window in new_word.windows(2) {
                let p = (window[0], window[1]);
                self.bump(p, count as i64);
                self.index.entry(p).or_default().insert(w);
            }
        }
        debug_assert!(!self.counts.contains_key(&pair));
    }
}

/// Learns a subword vocabulary from a word-frequency map.
///
/// `target_size` counts the alphabet (all characters plus the end-of-word
/// symbol) together with the merges, i.e. the number of distinct symbols
/// the finished model can produce. Learning stops early when no adjacent
/// pair occurs at least twice.
pub fn learn_bpe_from_counts(
    counts: HashMap<String, u64>,
    target_size: usize,
) -> Result<BpeModel> {
    let mut word_list: Vec<(String, u64)> = counts
        .into_iter()
        .filter(|(w, c)| !w.is_empty() && *c > 0)
        .collect();
    if word_list.is_empty() {
        return Err(SubwordError::EmptyCorpus);
    }
    word_list.sort_unstable_by(|a, b| a.0.cmp(&b.0));

    let mut learner = Learner {
        table: SymbolTable::new(),
        words: Vec::with_capacity(word_list.len()),
        counts: HashMap::new(),
        index: HashMap::new(),
        heap: BinaryHeap::new(),
        banned: HashSet::new(),
    };

    let mut alphabet: BTreeSet<Symbol> = BTreeSet::new();
    alphabet.insert(Symbol::end_of_word());
    for (word, count) in word_list {
        let mut ids: Vec<SymId> = Vec::with_capacity(word.chars().count() + 1);
        for c in word.chars() {
            let symbol = Symbol::from_char(c);
            alphabet.insert(symbol.clone());
            ids.push(learner.table.intern(symbol));
        }
        ids.push(learner.table.intern(Symbol::end_of_word()));
        let w = learner.words.len() as u32;
        for window in ids.windows(2) {
            let pair = (window[0], window[1]);
            *learner.counts.entry(pair).or_insert(0) += count;
            learner.index.entry(pair).or_default().insert(w);
        }
        learner.words.push((ids, count));
    }

    if target_size <= alphabet.len() {
        return Err(SubwordError::TargetTooSmall {
            target: target_size,
            alphabet: alphabet.len(),
        });
    }

    let initial: Vec<(Pair, u64)> = learner
        .counts
        .iter()
        .map(|(&pair, &count)| (pair, count))
        .collect();
    for (pair, count) in initial {
        learner.push_candidate(pair, count);
    }

    let mut merges: Vec<(Symbol, Symbol)> = Vec::new();
    while alphabet.len() + merges.len() < target_size {
        let Some((pair, _)) = learner.best_pair() else {
            break;
        };
        let left = learner.table.get(pair.0).clone();
        let right = learner.table.get(pair.1).clone();
        let merged_symbol = left.concat(&right);
        if learner.table.contains(&merged_symbol) {
            // The concatenation already names a symbol; merging would not
            // introduce a new one, so skip this pair for good.
            learner.banned.insert(pair);
            continue;
        }
        let merged = learner.table.intern(merged_symbol);
        learner.apply_merge(pair, merged);
        merges.push((left, right));
    }

    Ok(BpeModel {
        alphabet,
        merges,
        eow_marker: DEFAULT_EOW_MARKER.to_owned(),
    })
}

/// Counts every word on both sides of the corpus, the joint frequency map
/// BPE learning starts from.
pub fn joint_word_counts(corpus: &ParallelCorpus) -> HashMap<String, u64> {
    parallel::fold_chunks(
        corpus.pairs(),
        HashMap::new,
        |acc: &mut HashMap<String, u64>, pair| {
            for token in pair.src_tokens.iter().chain(pair.tgt_tokens.iter()) {
                *acc.entry(token.clone()).or_insert(0) += 1;
            }
        },
        |mut a, b| {
            for (word, count) in b {
                *a.entry(word).or_insert(0) += count;
            }
            a
        },
    )
}

/// Learns a subword vocabulary jointly over both sides of a corpus; see
/// [`learn_bpe_from_counts`].
pub fn learn_bpe(corpus: &ParallelCorpus, target_size: usize) -> Result<BpeModel> {
    learn_bpe_from_counts(joint_word_counts(corpus), target_size)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(entries: &[(&str, u64)]) -> HashMap<String, u64> {
        entries.iter().map(|(w, c)| (w.to_string(), *c)).collect()
    }

    fn model_for(entries: &[(&str, u64)], extra_merges: usize) -> BpeModel {
        let map = counts(entries);
        let alphabet: HashSet<char> = map.keys().flat_map(|w| w.chars()).collect();
        learn_bpe_from_counts(map, alphabet.len() + 1 + extra_merges).unwrap()
    }

    #[test]
    fn learns_the_expected_merges() {
        let model = model_for(&[("low", 5), ("lower", 2)], 2);
        assert_eq!(
            model.rendered_merges(),
            vec![
                ("l".to_owned(), "o".to_owned()),
                ("lo".to_owned(), "w".to_owned())
            ]
        );
        // Alphabet: l, o, w, e, r plus the end-of-word symbol.
        assert_eq!(model.alphabet_size(), 6);
        assert_eq!(model.vocab_size(), 8);
    }

    #[test]
    fn count_ties_prefer_the_smaller_pair() {
        // "aa" x3 yields (a,a)=3 and (a,</w>)=3; the end-of-word symbol
        // sorts after 'a', so (a,a) must win.
        let model = model_for(&[("aa", 3)], 1);
        assert_eq!(
            model.rendered_merges(),
            vec![("a".to_owned(), "a".to_owned())]
        );
    }

    #[test]
    fn end_of_word_sorts_after_every_character() {
        let eow = Symbol::end_of_word();
        let z = Symbol::from_char('z');
        assert!(eow > z);
        let a_end = Symbol {
            text: "a".to_owned(),
            eow: true,
        };
        let aa = Symbol {
            text: "aa".to_owned(),
            eow: false,
        };
        assert!(a_end > aa);
        let a = Symbol::from_char('a');
        assert!(a < a_end);
    }

    #[test]
    fn target_just_above_the_alphabet_allows_one_merge() {
        // Alphabet: l, o, w plus end-of-word = 4; 5 leaves room for one merge.
        let model = learn_bpe_from_counts(counts(&[("low", 5)]), 5).unwrap();
        assert_eq!(model.merges().len(), 1);
        assert_eq!(model.vocab_size(), 5);
    }

    #[test]
    fn target_too_small_is_rejected() {
        let err = learn_bpe_from_counts(counts(&[("low", 5)]), 4).unwrap_err();
        assert!(matches!(
            err,
            SubwordError::TargetTooSmall {
                target: 4,
                alphabet: 4
            }
        ));
    }

    #[test]
    fn learning_stops_when_no_pair_repeats() {
        let model = learn_bpe_from_counts(counts(&[("ab", 1), ("cd", 1)]), 100).unwrap();
        assert!(model.merges().is_empty());
    }

    #[test]
    fn segmentation_matches_the_worked_example() {
        let model = model_for(&[("low", 5), ("lower", 2)], 2);
        assert_eq!(model.segment_word("low"), vec!["low"]);
        assert_eq!(model.segment_word("lower"), vec!["low@@", "e@@", "r"]);
        // Unseen characters fall back to character units.
        assert_eq!(model.segment_word("wol"), vec!["w@@", "o@@", "l"]);
    }

    #[test]
    fn empty_model_splits_into_characters() {
        let model = learn_bpe_from_counts(counts(&[("ab", 1)]), 100).unwrap();
        assert!(model.merges().is_empty());
        assert_eq!(model.segment_word("ab"), vec!["a@@", "b"]);
    }

    #[test]
    fn fully_merged_words_round_trip_through_files() {
        let dir = tempfile::TempDir::new().unwrap();
        let path = dir.path().join("model.merges");
        let model = model_for(&[("low", 5), ("lower", 2)], 4);
        model.write_to_file(&path).unwrap();
        let loaded = BpeModel::read_from_file(&path).unwrap();
        assert_eq!(loaded.rendered_merges(), model.rendered_merges());
        assert_eq!(loaded.segment_word("lower"), model.segment_word("lower"));
        // Serialization is byte-stable.
        let mut a = Vec::new();
        model.write_to(&mut a).unwrap();
        let mut b = Vec::new();
        loaded.write_to(&mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn merges_involving_the_end_of_word_render_with_the_marker() {
        // "low" x5 alone: merges run to completion, ending in a symbol
        // that closes the word.
        let model = model_for(&[("low", 5)], 3);
        let rendered = model.rendered_merges();
        assert!(rendered.iter().any(|(_, r)| r.ends_with("</w>")));
        assert_eq!(model.segment_word("low"), vec!["low"]);
    }

    #[test]
    fn apply_and_decode_are_inverses() {
        let model = model_for(&[("low", 5), ("lower", 2), ("newest", 6), ("widest", 3)], 10);
        let tokens: Vec<String> = ["the", "newest", "lower", "widest", "low"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let units = apply_bpe(&tokens, &model);
        assert_eq!(decode_bpe(&units).unwrap(), tokens);
    }

    #[test]
    fn tokens_full_of_marker_characters_still_round_trip() {
        let model = learn_bpe_from_counts(counts(&[("x@@", 3), ("@@", 2)]), 100).unwrap();
        for word in ["@@", "x@@", "@", "a@b", "@@@"] {
            let tokens = vec![word.to_owned()];
            let units = apply_bpe(&tokens, &model);
            assert_eq!(decode_bpe(&units).unwrap(), tokens, "word {word:?}");
        }
    }

    #[test]
    fn dangling_continuation_is_detected() {
        let err = decode_bpe(&["lo@@", "w", "ne@@"]).unwrap_err();
        assert!(matches!(
            err,
            SubwordError::DanglingContinuation { unit } if unit == "ne@@"
        ));
        // A bare continuation marker also leaves the word open.
        assert!(decode_bpe(&["@@"]).is_err());
    }

    #[test]
    fn more_merges_never_lengthen_a_segmentation() {
        let model = model_for(&[("low", 5), ("lower", 2), ("lowest", 4)], 8);
        for word in ["low", "lower", "lowest", "slow"] {
            let mut prev = usize::MAX;
            for k in 0..=model.merges().len() {
                let len = model.truncated(k).segment_word(word).len();
                assert!(len <= prev, "{word}: {len} units after {k} merges");
                prev = len;
            }
        }
    }

    #[test]
    fn segmenter_cache_changes_nothing() {
        let model = model_for(&[("low", 5), ("lower", 2)], 2);
        let mut segmenter = Segmenter::new(&model);
        let line = "low lower low";
        let a = segmenter.segment_line(line);
        let b = segmenter.segment_line(line);
        assert_eq!(a, b);
        assert_eq!(a, "low low@@ e@@ r low");
        assert_eq!(
            decode_bpe(&a.split(' ').collect::<Vec<_>>()).unwrap(),
            vec!["low", "lower", "low"]
        );
    }
}

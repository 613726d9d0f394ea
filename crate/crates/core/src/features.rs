//! Per-sentence difficulty features: lengths, category counts and
//! frequency-rank blocks.
//!
//! Every feature maps a sentence pair to a single integer, so downstream
//! code (binning, bucketing, curricula, metrics) never touches text. Three
//! families are supported:
//!
//! * **lengths** — token count of the source or target sentence;
//! * **category counts** — occurrences of a word class (conjunctions,
//!   nouns, proper nouns, verbs) on one side, counted either against a
//!   lexicon (case-insensitive surface match) or against part-of-speech
//!   tags by prefix (case-sensitive, e.g. prefix `NN` matches `NN`/`NNS`);
//! * **word-rank blocks** — words sorted by corpus frequency are split into
//!   fixed-size blocks (block 1 holding the most frequent ones), and a
//!   sentence is ranked by its least frequent word, i.e. the maximum block
//!   over its tokens. Words absent from the table fall into a dedicated
//!   out-of-vocabulary block one past the last real block.
//!
//! Rank tables are case-sensitive and built on whole words, before any
//! subword segmentation. Frequency ties are broken by ascending word order
//! so a table is a pure function of the corpus.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use indexmap::IndexMap;

use crate::corpus::{ParallelCorpus, SentencePair, Side};
use crate::parallel;
use crate::ExampleId;

/// Dense per-example feature values, indexed by example id.
pub type FeatureVector = Vec<u32>;

/// Errors raised while building resources or extracting features.
#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    /// Tag-based counting was requested on a side that carries no tags.
    #[error("the {side} side has no tags; attach a tagged file or use a lexicon")]
    MissingTags {
        /// Side that lacks tags.
        side: Side,
    },
    /// Lexicon-based counting was requested without a lexicon.
    #[error("no lexicon available for this category")]
    MissingLexicon,
    /// A rank feature was requested without the table it needs.
    #[error("no rank table available for scope {scope}")]
    MissingRankTable {
        /// Scope of the missing table (`src`, `tgt` or `combined`).
        scope: &'static str,
    },
    /// A block size of zero.
    #[error("block size must be at least 1")]
    InvalidBlockSize,
    /// Building a rank table over a corpus with no words.
    #[error("cannot rank an empty vocabulary")]
    EmptyVocabulary,
    /// Underlying I/O failure.
    #[error("{path}: {source}")]
    Io {
        /// File involved.
        path: PathBuf,
        /// Original error.
        #[source]
        source: io::Error,
    },
    /// A rank table file that does not follow the `word<TAB>block` format.
    #[error("{path}:{line}: {reason}")]
    MalformedTable {
        /// File being parsed.
        path: PathBuf,
        /// 1-based line number.
        line: u64,
        /// What was wrong.
        reason: String,
    },
    /// An extraction failure annotated with the example it occurred on.
    #[error("example {id}: {source}")]
    AtExample {
        /// Id of the offending example.
        id: ExampleId,
        /// Underlying failure.
        #[source]
        source: Box<FeatureError>,
    },
}

/// Result alias for feature operations.
pub type Result<T> = std::result::Result<T, FeatureError>;

/// Word classes that can be counted as a difficulty feature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Category {
    /// Coordinating conjunctions.
    Conjunction,
    /// Common nouns.
    Noun,
    /// Proper nouns.
    ProperNoun,
    /// Verbs.
    Verb,
}

impl Category {
    /// Label used in feature names (`conjunctions`, `nouns`, …).
    pub fn label(self) -> &'static str {
        match self {
            Category::Conjunction => "conjunctions",
            Category::Noun => "nouns",
            Category::ProperNoun => "proper-nouns",
            Category::Verb => "verbs",
        }
    }

    /// Default tag prefix for tagged corpora, following the Universal
    /// Dependencies coarse tag set. Override it for other tag sets.
    pub fn default_tag_prefix(self) -> &'static str {
        match self {
            Category::Conjunction => "CCONJ",
            Category::Noun => "NOUN",
            Category::ProperNoun => "PROPN",
            Category::Verb => "VERB",
        }
    }
}

/// How category occurrences are recognized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountMethod {
    /// Case-insensitive surface match against a [`Lexicon`].
    Lexicon,
    /// Case-sensitive prefix match against the side's part-of-speech tags.
    TagPrefix(String),
}

/// Which rank table(s) a word-rank feature consults.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankScope {
    /// Source sentence against the source-side table.
    Src,
    /// Target sentence against the target-side table.
    Tgt,
    /// Maximum of the two per-side ranks.
    Max,
    /// Both sides against a table built over the concatenated corpora.
    Combined,
}

impl RankScope {
    /// Label used in feature names.
    pub fn label(self) -> &'static str {
        match self {
            RankScope::Src => "src",
            RankScope::Tgt => "tgt",
            RankScope::Max => "max",
            RankScope::Combined => "combined",
        }
    }
}

/// A difficulty feature, mapping each sentence pair to an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeatureKind {
    /// Token count of the source sentence.
    SrcLength,
    /// Token count of the target sentence.
    TgtLength,
    /// Occurrences of a word class on one side.
    CategoryCount {
        /// Side whose tokens are inspected.
        side: Side,
        /// Word class being counted.
        category: Category,
        /// Recognition method.
        method: CountMethod,
    },
    /// Frequency-rank block of the least frequent word.
    WordRank {
        /// Table(s) consulted.
        scope: RankScope,
    },
}

impl FeatureKind {
    /// Stable name used in schedule headers and reports.
    pub fn label(&self) -> String {
        match self {
            FeatureKind::SrcLength => "src-length".to_owned(),
            FeatureKind::TgtLength => "tgt-length".to_owned(),
            FeatureKind::CategoryCount { side, category, .. } => {
                format!("{}-{}", side.name(), category.label())
            }
            FeatureKind::WordRank { scope } => format!("rank-{}", scope.label()),
        }
    }
}

/// A set of surface forms matched case-insensitively.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    words: HashSet<String>,
}

impl Lexicon {
    /// Builds a lexicon from surface forms; entries are lowercased.
    pub fn new(words: impl IntoIterator<Item = impl AsRef<str>>) -> Self {
        Self {
            words: words
                .into_iter()
                .map(|w| w.as_ref().trim().to_lowercase())
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }

    /// Reads a lexicon file: one surface form per line, UTF-8, blank lines
    /// ignored.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut text = String::new();
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|source| FeatureError::Io {
                path: path.to_path_buf(),
                source,
            })?;
        Ok(Self::new(text.lines()))
    }

    /// The bundled English coordinating conjunctions
    /// (`and, or, but, nor, yet, so`).
    pub fn english_conjunctions() -> Self {
        Self::new(include_str!("data/conjunctions_en.txt").lines())
    }

    /// Number of distinct entries.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// True when the lexicon has no entries.
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// True when `token` matches an entry, ignoring case.
    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(&token.to_lowercase())
    }
}

/// Words partitioned into fixed-size frequency blocks.
///
/// Block 1 holds the `block_size` most frequent words, block 2 the next
/// `block_size`, and so on; ties in frequency are broken by ascending word
/// order. Lookup of an unknown word yields [`RankTable::oov_block`].
#[derive(Clone, Debug)]
pub struct RankTable {
    /// Word → block, iterated in rank order (most frequent first).
    blocks: IndexMap<String, u32>,
    block_size: u32,
    total_blocks: u32,
}

impl RankTable {
    /// Ranks a word-frequency map into blocks of `block_size`.
    pub fn from_counts(counts: HashMap<String, u64>, block_size: u32) -> Result<Self> {
        if block_size == 0 {
            return Err(FeatureError::InvalidBlockSize);
        }
        if counts.is_empty() {
            return Err(FeatureError::EmptyVocabulary);
        }
        let mut ranked: Vec<(String, u64)> = counts.into_iter().collect();
        ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let blocks: IndexMap<String, u32> = ranked
            .into_iter()
            .enumerate()
            .map(|(i, (word, _))| (word, (i / block_size as usize) as u32 + 1))
            .collect();
        let total_blocks = blocks.last().map(|(_, &b)| b).unwrap_or(0);
        Ok(Self {
            blocks,
            block_size,
            total_blocks,
        })
    }

    /// Size of each block.
    pub fn block_size(&self) -> u32 {
        self.block_size
    }

    /// Number of blocks actually populated by the vocabulary.
    pub fn total_blocks(&self) -> u32 {
        self.total_blocks
    }

    /// Block reserved for words missing from the table.
    pub fn oov_block(&self) -> u32 {
        self.total_blocks + 1
    }

    /// Number of words in the table.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    /// True when the table holds no words.
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The block of `word`, or [`RankTable::oov_block`] when unknown.
    /// Lookup is case-sensitive.
    pub fn block(&self, word: &str) -> u32 {
        self.blocks
            .get(word)
            .copied()
            .unwrap_or_else(|| self.oov_block())
    }

    /// The block of a sentence: the maximum block over its tokens, i.e. the
    /// rank of its least frequent word. `tokens` must be non-empty.
    pub fn sentence_rank_block<T: AsRef<str>>(&self, tokens: &[T]) -> u32 {
        debug_assert!(!tokens.is_empty(), "sentences have at least one token");
        tokens
            .iter()
            .map(|t| self.block(t.as_ref()))
            .max()
            .unwrap_or(0)
    }

    /// Serializes the table: a `#block_size=<n>` header followed by one
    /// `word<TAB>block` line per word in rank order.
    pub fn write_to(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "#block_size={}", self.block_size)?;
        for (word, block) in &self.blocks {
            writeln!(w, "{word}\t{block}")?;
        }
        Ok(())
    }

    /// Writes the table to a file; see [`RankTable::write_to`].
    pub fn write_to_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|source| FeatureError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut w = BufWriter::new(file);
        self.write_to(&mut w)
            .and_then(|_| w.flush())
            .map_err(|source| FeatureError::Io {
                path: path.to_path_buf(),
                source,
            })
    }

    /// Reads a table produced by [`RankTable::write_to`].
    pub fn read_from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| FeatureError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let reader = BufReader::new(file);
        let malformed = |line: u64, reason: &str| FeatureError::MalformedTable {
            path: path.to_path_buf(),
            line,
            reason: reason.to_owned(),
        };
        let mut blocks = IndexMap::new();
        let mut block_size: Option<u32> = None;
        let mut total_blocks = 0u32;
        for (i, line) in reader.lines().enumerate() {
            let line_no = i as u64 + 1;
            let line = line.map_err(|source| FeatureError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(value) = rest.strip_prefix("block_size=") {
                    let parsed = value
                        .trim()
                        .parse::<u32>()
                        .map_err(|_| malformed(line_no, "unreadable block_size header"))?;
                    if parsed == 0 {
                        return Err(FeatureError::InvalidBlockSize);
                    }
                    block_size = Some(parsed);
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let (word, block) = line
                .split_once('\t')
                .ok_or_else(|| malformed(line_no, "expected word<TAB>block"))?;
            let block: u32 = block
                .parse()
                .map_err(|_| malformed(line_no, "block index is not an integer"))?;
            if block == 0 {
                return Err(malformed(line_no, "block indices are 1-based"));
            }
            total_blocks = total_blocks.max(block);
            blocks.insert(word.to_owned(), block);
        }
        let block_size = block_size.ok_or_else(|| malformed(0, "missing #block_size header"))?;
        if blocks.is_empty() {
            return Err(FeatureError::EmptyVocabulary);
        }
        Ok(Self {
            blocks,
            block_size,
            total_blocks,
        })
    }
}

/// Which corpus text feeds a rank table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableScope {
    /// Source sentences only.
    Src,
    /// Target sentences only.
    Tgt,
    /// Both sides concatenated.
    Combined,
}

impl TableScope {
    /// Label used in messages and file names.
    pub fn label(self) -> &'static str {
        match self {
            TableScope::Src => "src",
            TableScope::Tgt => "tgt",
            TableScope::Combined => "combined",
        }
    }
}

/// Counts word frequencies over the selected side(s) of a corpus.
pub fn count_words(corpus: &ParallelCorpus, scope: TableScope) -> HashMap<String, u64> {
    parallel::fold_chunks(
        corpus.pairs(),
        HashMap::new,
        |acc: &mut HashMap<String, u64>, pair| {
            let mut add = |tokens: &[String]| {
                for token in tokens {
                    *acc.entry(token.clone()).or_insert(0) += 1;
                }
            };
            match scope {
                TableScope::Src => add(&pair.src_tokens),
                TableScope::Tgt => add(&pair.tgt_tokens),
                TableScope::Combined => {
                    add(&pair.src_tokens);
                    add(&pair.tgt_tokens);
                }
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

/// Builds a frequency-rank table over one side of a corpus, or over both
/// sides concatenated.
pub fn build_rank_table(
    corpus: &ParallelCorpus,
    scope: TableScope,
    block_size: u32,
) -> Result<RankTable> {
    RankTable::from_counts(count_words(corpus, scope), block_size)
}

/// External resources a feature may need; all optional, checked at use.
#[derive(Clone, Copy, Debug, Default)]
pub struct Resources<'a> {
    /// Lexicon for [`CountMethod::Lexicon`] counting.
    pub lexicon: Option<&'a Lexicon>,
    /// Source-side rank table.
    pub rank_src: Option<&'a RankTable>,
    /// Target-side rank table.
    pub rank_tgt: Option<&'a RankTable>,
    /// Rank table over the concatenated corpora.
    pub rank_combined: Option<&'a RankTable>,
}

impl<'a> Resources<'a> {
    fn require_src(&self) -> Result<&'a RankTable> {
        self.rank_src
            .ok_or(FeatureError::MissingRankTable { scope: "src" })
    }

    fn require_tgt(&self) -> Result<&'a RankTable> {
        self.rank_tgt
            .ok_or(FeatureError::MissingRankTable { scope: "tgt" })
    }

    fn require_combined(&self) -> Result<&'a RankTable> {
        self.rank_combined
            .ok_or(FeatureError::MissingRankTable { scope: "combined" })
    }
}

/// Extracts one feature value from one sentence pair.
pub fn extract(pair: &SentencePair, kind: &FeatureKind, resources: &Resources) -> Result<u32> {
    match kind {
        FeatureKind::SrcLength => Ok(pair.src_tokens.len() as u32),
        FeatureKind::TgtLength => Ok(pair.tgt_tokens.len() as u32),
        FeatureKind::CategoryCount { side, method, .. } => match method {
            CountMethod::Lexicon => {
                let lexicon = resources.lexicon.ok_or(FeatureError::MissingLexicon)?;
                Ok(pair
                    .tokens(*side)
                    .iter()
                    .filter(|t| lexicon.contains(t))
                    .count() as u32)
            }
            CountMethod::TagPrefix(prefix) => {
                let tags = pair
                    .tags(*side)
                    .ok_or(FeatureError::MissingTags { side: *side })?;
                Ok(tags.iter().filter(|t| t.starts_with(prefix)).count() as u32)
            }
        },
        FeatureKind::WordRank { scope } => match scope {
            RankScope::Src => Ok(resources
                .require_src()?
                .sentence_rank_block(&pair.src_tokens)),
            RankScope::Tgt => Ok(resources
                .require_tgt()?
                .sentence_rank_block(&pair.tgt_tokens)),
            RankScope::Max => {
                let src = resources
                    .require_src()?
                    .sentence_rank_block(&pair.src_tokens);
                let tgt = resources
                    .require_tgt()?
                    .sentence_rank_block(&pair.tgt_tokens);
                Ok(src.max(tgt))
            }
            RankScope::Combined => {
                let table = resources.require_combined()?;
                let src = table.sentence_rank_block(&pair.src_tokens);
                let tgt = table.sentence_rank_block(&pair.tgt_tokens);
                Ok(src.max(tgt))
            }
        },
    }
}

/// Extracts a feature for every pair, in id order.
///
/// Equivalent to calling [`extract`] on each pair sequentially; the first
/// failing example (by id) is reported.
pub fn extract_all(
    corpus: &ParallelCorpus,
    kind: &FeatureKind,
    resources: &Resources,
) -> Result<FeatureVector> {
    let results = parallel::map(corpus.pairs(), |pair| extract(pair, kind, resources));
    let mut values = Vec::with_capacity(results.len());
    for (id, result) in results.into_iter().enumerate() {
        match result {
            Ok(v) => values.push(v),
            Err(source) => {
                return Err(FeatureError::AtExample {
                    id: id as ExampleId,
                    source: Box::new(source),
                })
            }
        }
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::load_parallel;
    use std::fs;
    use tempfile::TempDir;

    fn pair(src: &str, tgt: &str) -> SentencePair {
        SentencePair {
            id: 0,
            src_tokens: src.split_whitespace().map(str::to_owned).collect(),
            tgt_tokens: tgt.split_whitespace().map(str::to_owned).collect(),
            src_tags: None,
            tgt_tags: None,
        }
    }

    fn toy_table() -> RankTable {
        let counts = HashMap::from([
            ("the".to_owned(), 10),
            ("cat".to_owned(), 3),
            ("sat".to_owned(), 1),
        ]);
        RankTable::from_counts(counts, 2).unwrap()
    }

    #[test]
    fn blocks_follow_frequency_order() {
        let table = toy_table();
        assert_eq!(table.block("the"), 1);
        assert_eq!(table.block("cat"), 1);
        assert_eq!(table.block("sat"), 2);
        assert_eq!(table.total_blocks(), 2);
        assert_eq!(table.oov_block(), 3);
        assert_eq!(table.block("dog"), 3);
    }

    #[test]
    fn frequency_ties_break_alphabetically() {
        let counts = HashMap::from([
            ("b".to_owned(), 5),
            ("a".to_owned(), 5),
            ("c".to_owned(), 1),
        ]);
        let table = RankTable::from_counts(counts, 1).unwrap();
        assert_eq!(table.block("a"), 1);
        assert_eq!(table.block("b"), 2);
        assert_eq!(table.block("c"), 3);
    }

    #[test]
    fn table_lookup_is_case_sensitive() {
        let table = toy_table();
        assert_eq!(table.block("The"), table.oov_block());
    }

    #[test]
    fn sentence_rank_is_the_least_frequent_word() {
        let table = toy_table();
        assert_eq!(table.sentence_rank_block(&["the", "sat"]), 2);
        assert_eq!(table.sentence_rank_block(&["the", "the"]), 1);
        assert_eq!(table.sentence_rank_block(&["the", "unseen"]), 3);
    }

    #[test]
    fn zero_block_size_is_rejected() {
        let counts = HashMap::from([("a".to_owned(), 1)]);
        assert!(matches!(
            RankTable::from_counts(counts, 0).unwrap_err(),
            FeatureError::InvalidBlockSize
        ));
    }

    #[test]
    fn table_file_roundtrips() {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("ranks.tsv");
        let table = toy_table();
        table.write_to_file(&path).unwrap();
        let loaded = RankTable::read_from_file(&path).unwrap();
        assert_eq!(loaded.block_size(), 2);
        assert_eq!(loaded.block("sat"), 2);
        assert_eq!(loaded.oov_block(), 3);
        // Serialization is byte-stable.
        let mut first = Vec::new();
        table.write_to(&mut first).unwrap();
        let mut second = Vec::new();
        loaded.write_to(&mut second).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn malformed_table_lines_are_reported() {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("ranks.tsv");
        fs::write(&path, "#block_size=2\nthe no-tab-here\n").unwrap();
        assert!(matches!(
            RankTable::read_from_file(&path).unwrap_err(),
            FeatureError::MalformedTable { line: 2, .. }
        ));
    }

    #[test]
    fn lengths_count_tokens() {
        let p = pair("ein Hund läuft", "a dog runs fast");
        let r = Resources::default();
        assert_eq!(extract(&p, &FeatureKind::SrcLength, &r).unwrap(), 3);
        assert_eq!(extract(&p, &FeatureKind::TgtLength, &r).unwrap(), 4);
    }

    #[test]
    fn lexicon_counts_are_case_insensitive() {
        let p = pair("x", "And he ran and ran but nobody followed");
        let lexicon = Lexicon::english_conjunctions();
        let kind = FeatureKind::CategoryCount {
            side: Side::Tgt,
            category: Category::Conjunction,
            method: CountMethod::Lexicon,
        };
        let r = Resources {
            lexicon: Some(&lexicon),
            ..Default::default()
        };
        assert_eq!(extract(&p, &kind, &r).unwrap(), 3);
    }

    #[test]
    fn tag_prefix_counting_requires_tags() {
        let mut p = pair("x", "the dog runs");
        let kind = FeatureKind::CategoryCount {
            side: Side::Tgt,
            category: Category::Verb,
            method: CountMethod::TagPrefix("VB".to_owned()),
        };
        let r = Resources::default();
        assert!(matches!(
            extract(&p, &kind, &r).unwrap_err(),
            FeatureError::MissingTags { side: Side::Tgt }
        ));
        p.tgt_tags = Some(vec!["DT".to_owned(), "NN".to_owned(), "VBZ".to_owned()]);
        assert_eq!(extract(&p, &kind, &r).unwrap(), 1);
    }

    #[test]
    fn rank_features_demand_their_tables() {
        let p = pair("the cat", "sat cat");
        let table = toy_table();
        let r = Resources {
            rank_src: Some(&table),
            ..Default::default()
        };
        let src = FeatureKind::WordRank {
            scope: RankScope::Src,
        };
        let max = FeatureKind::WordRank {
            scope: RankScope::Max,
        };
        assert_eq!(extract(&p, &src, &r).unwrap(), 1);
        assert!(matches!(
            extract(&p, &max, &r).unwrap_err(),
            FeatureError::MissingRankTable { scope: "tgt" }
        ));
        let r = Resources {
            rank_src: Some(&table),
            rank_tgt: Some(&table),
            ..Default::default()
        };
        assert_eq!(extract(&p, &max, &r).unwrap(), 2);
    }

    #[test]
    fn extract_all_matches_the_sequential_loop() {
        let dir = TempDir::new().unwrap();
        let src_path = dir.path().join("c.src");
        let tgt_path = dir.path().join("c.tgt");
        let mut src = String::new();
        let mut tgt = String::new();
        for i in 0..500 {
            for k in 0..=(i % 7) {
                src.push_str(&format!("s{k} "));
                tgt.push_str(&format!("t{k} "));
            }
            tgt.push_str("extra");
            src.push_str("end\n");
            tgt.push('\n');
        }
        fs::write(&src_path, src).unwrap();
        fs::write(&tgt_path, tgt).unwrap();
        let corpus = load_parallel(&src_path, &tgt_path).unwrap();
        let r = Resources::default();
        let all = extract_all(&corpus, &FeatureKind::TgtLength, &r).unwrap();
        let looped: Vec<u32> = corpus
            .pairs()
            .iter()
            .map(|p| extract(p, &FeatureKind::TgtLength, &r).unwrap())
            .collect();
        assert_eq!(all, looped);
    }

    #[test]
    fn extract_all_reports_the_first_offender() {
        let pairs = vec![
            SentencePair {
                id: 0,
                src_tokens: vec!["a".into()],
                tgt_tokens: vec!["x".into()],
                src_tags: None,
                tgt_tags: Some(vec!["DT".into()]),
            },
            SentencePair {
                id: 1,
                src_tokens: vec!["b".into()],
                tgt_tokens: vec!["y".into()],
                src_tags: None,
                tgt_tags: None,
            },
        ];
        let corpus = ParallelCorpus::from_pairs(pairs);
        let kind = FeatureKind::CategoryCount {
            side: Side::Tgt,
            category: Category::Noun,
            method: CountMethod::TagPrefix("NN".to_owned()),
        };
        let err = extract_all(&corpus, &kind, &Resources::default()).unwrap_err();
        match err {
            FeatureError::AtExample { id, .. } => assert_eq!(id, 1),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn feature_labels_are_stable() {
        assert_eq!(FeatureKind::TgtLength.label(), "tgt-length");
        let kind = FeatureKind::CategoryCount {
            side: Side::Tgt,
            category: Category::ProperNoun,
            method: CountMethod::Lexicon,
        };
        assert_eq!(kind.label(), "tgt-proper-nouns");
        let kind = FeatureKind::WordRank {
            scope: RankScope::Combined,
        };
        assert_eq!(kind.label(), "rank-combined");
    }
}

//! Parallel corpus loading, tag attachment and reordered output.
//!
//! A corpus is a pair of UTF-8 text files, one sentence per line, aligned by
//! line number. Tokenization is whitespace splitting and nothing else; ids
//! are assigned densely in file order and never change afterwards. Every
//! other part of the crate speaks in these ids, so schedules stay valid for
//! exactly one load of one corpus.
//!
//! Loading is strict: mismatched line counts, empty lines and invalid UTF-8
//! are errors rather than silently skipped rows, because a single dropped
//! line would desynchronize source and target from that point on.
//!
//! For corpora that do not fit comfortably in memory, [`CorpusReader::open`]
//! yields pairs one at a time so callers can keep only derived values (such
//! as per-pair feature numbers) and discard the text.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::ExampleId;

/// Which half of a sentence pair an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// The source-language file.
    Src,
    /// The target-language file.
    Tgt,
}

impl Side {
    /// Lowercase name used in messages and feature labels.
    pub fn name(self) -> &'static str {
        match self {
            Side::Src => "src",
            Side::Tgt => "tgt",
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Errors raised while reading or writing corpus files.
#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    /// Underlying I/O failure, annotated with the file involved.
    #[error("{path}: {source}")]
    Io {
        /// File being read or written.
        path: PathBuf,
        /// Original I/O error.
        #[source]
        source: io::Error,
    },
    /// A line that is not valid UTF-8.
    #[error("{path}:{line}: invalid UTF-8")]
    InvalidUtf8 {
        /// Offending file.
        path: PathBuf,
        /// 1-based line number.
        line: u64,
    },
    /// Aligned files disagree on the number of lines.
    #[error("line count mismatch: {path_a} has {lines_a} lines, {path_b} has {lines_b}")]
    LineCountMismatch {
        /// First file compared.
        path_a: PathBuf,
        /// Line count of `path_a`.
        lines_a: u64,
        /// Second file compared.
        path_b: PathBuf,
        /// Line count of `path_b`.
        lines_b: u64,
    },
    /// A line with zero tokens.
    #[error("{path}:{line}: empty line")]
    EmptyLine {
        /// Offending file.
        path: PathBuf,
        /// 1-based line number.
        line: u64,
    },
    /// A tagged line whose item count differs from the sentence it annotates.
    #[error("{path}:{line}: tagged line has {found} items but the {side} sentence has {expected} tokens")]
    TagArityMismatch {
        /// Tag file.
        path: PathBuf,
        /// 1-based line number.
        line: u64,
        /// Side being annotated.
        side: Side,
        /// Token count of the sentence.
        expected: usize,
        /// Item count found on the tagged line.
        found: usize,
    },
    /// A tagged item without the expected `token<sep>tag` separator.
    #[error("{path}:{line}: item {item:?} lacks the {separator:?} separator")]
    MalformedItem {
        /// Tag file.
        path: PathBuf,
        /// 1-based line number.
        line: u64,
        /// The raw item text.
        item: String,
        /// Separator that was expected.
        separator: char,
    },
    /// An id outside the corpus, e.g. from a schedule built for other data.
    #[error("unknown example id {id}: corpus holds ids 0..{n}")]
    UnknownId {
        /// The out-of-range id.
        id: ExampleId,
        /// Number of pairs in the corpus.
        n: usize,
    },
}

/// Result alias for corpus operations.
pub type Result<T> = std::result::Result<T, CorpusError>;

/// One aligned sentence pair, plus optional per-token tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentencePair {
    /// Dense id equal to the pair's position in file order.
    pub id: ExampleId,
    /// Source tokens; never empty.
    pub src_tokens: Vec<String>,
    /// Target tokens; never empty.
    pub tgt_tokens: Vec<String>,
    /// Source-side tags, aligned 1:1 with `src_tokens` when present.
    pub src_tags: Option<Vec<String>>,
    /// Target-side tags, aligned 1:1 with `tgt_tokens` when present.
    pub tgt_tags: Option<Vec<String>>,
}

impl SentencePair {
    /// Tokens of the requested side.
    pub fn tokens(&self, side: Side) -> &[String] {
        match side {
            Side::Src => &self.src_tokens,
            Side::Tgt => &self.tgt_tokens,
        }
    }

    /// Tags of the requested side, if attached.
    pub fn tags(&self, side: Side) -> Option<&[String]> {
        match side {
            Side::Src => self.src_tags.as_deref(),
            Side::Tgt => self.tgt_tags.as_deref(),
        }
    }
}

/// A fully loaded parallel corpus with dense ids `0..len`.
#[derive(Clone, Debug, Default)]
pub struct ParallelCorpus {
    pairs: Vec<SentencePair>,
}

impl ParallelCorpus {
    /// Builds a corpus from pairs that already carry dense ids in order.
    ///
    /// # Panics
    ///
    /// Panics if ids are not exactly `0..pairs.len()` in order.
    pub fn from_pairs(pairs: Vec<SentencePair>) -> Self {
        for (i, pair) in pairs.iter().enumerate() {
            assert_eq!(pair.id as usize, i, "pair ids must be dense and ordered");
        }
        Self { pairs }
    }

    /// Number of sentence pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// True when the corpus holds no pairs.
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// All pairs in id order.
    pub fn pairs(&self) -> &[SentencePair] {
        &self.pairs
    }

    /// The pair with the given id, if it exists.
    pub fn get(&self, id: ExampleId) -> Option<&SentencePair> {
        self.pairs.get(id as usize)
    }

    /// True when every pair carries tags on `side`.
    pub fn has_tags(&self, side: Side) -> bool {
        !self.pairs.is_empty() && self.pairs.iter().all(|p| p.tags(side).is_some())
    }
}

/// Buffered line reader that tracks its path and 1-based line number.
struct LineSource {
    path: PathBuf,
    reader: BufReader<File>,
    line: u64,
    buf: Vec<u8>,
}

impl LineSource {
    fn open(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self {
            path: path.to_path_buf(),
            reader: BufReader::new(file),
            line: 0,
            buf: Vec::new(),
        })
    }

    /// Reads the next line without its terminator; `None` at end of file.
    fn next_line(&mut self) -> Result<Option<&str>> {
        self.buf.clear();
        let n = self
            .reader
            .read_until(b'\n', &mut self.buf)
            .map_err(|source| CorpusError::Io {
                path: self.path.clone(),
                source,
            })?;
        if n == 0 {
            return Ok(None);
        }
        self.line += 1;
        if self.buf.last() == Some(&b'\n') {
            self.buf.pop();
        }
        match std::str::from_utf8(&self.buf) {
            Ok(s) => Ok(Some(s)),
            Err(_) => Err(CorpusError::InvalidUtf8 {
                path: self.path.clone(),
                line: self.line,
            }),
        }
    }

    /// Consumes the rest of the file, returning the total line count.
    fn drain(&mut self) -> u64 {
        while matches!(self.next_line(), Ok(Some(_))) {}
        self.line
    }
}

/// Splits a line into owned whitespace-separated tokens, rejecting blanks.
fn tokenize(line: &str, path: &Path, line_no: u64) -> Result<Vec<String>> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_owned).collect();
    if tokens.is_empty() {
        return Err(CorpusError::EmptyLine {
            path: path.to_path_buf(),
            line: line_no,
        });
    }
    Ok(tokens)
}

/// Splits a `token<sep>tag ...` line into aligned token and tag vectors.
fn parse_tagged_line(
    line: &str,
    separator: char,
    path: &Path,
    line_no: u64,
) -> Result<(Vec<String>, Vec<String>)> {
    let mut tokens = Vec::new();
    let mut tags = Vec::new();
    for item in line.split_whitespace() {
        // Split at the last separator: tags never contain it, tokens may.
        let Some((token, tag)) = item.rsplit_once(separator) else {
            return Err(CorpusError::MalformedItem {
                path: path.to_path_buf(),
                line: line_no,
                item: item.to_owned(),
                separator,
            });
        };
        tokens.push(token.to_owned());
        tags.push(tag.to_owned());
    }
    if tokens.is_empty() {
        return Err(CorpusError::EmptyLine {
            path: path.to_path_buf(),
            line: line_no,
        });
    }
    Ok((tokens, tags))
}

/// Default separator between a token and its tag in tagged files.
pub const DEFAULT_TAG_SEPARATOR: char = '|';

/// Configurable reader for a parallel corpus and optional tag files.
///
/// ```no_run
/// use curbatch::corpus::{CorpusReader, Side};
///
/// let corpus = CorpusReader::new("train.de", "train.en")
///     .tags(Side::Tgt, "train.en.tagged")
///     .load()?;
/// # Ok::<(), curbatch::corpus::CorpusError>(())
/// ```
pub struct CorpusReader {
    src: PathBuf,
    tgt: PathBuf,
    src_tags: Option<PathBuf>,
    tgt_tags: Option<PathBuf>,
    separator: char,
    max_tokens: Option<usize>,
}

impl CorpusReader {
    /// Starts a reader over aligned `src` and `tgt` files.
    pub fn new(src: impl AsRef<Path>, tgt: impl AsRef<Path>) -> Self {
        Self {
            src: src.as_ref().to_path_buf(),
            tgt: tgt.as_ref().to_path_buf(),
            src_tags: None,
            tgt_tags: None,
            separator: DEFAULT_TAG_SEPARATOR,
            max_tokens: None,
        }
    }

    /// Attaches a `token<sep>tag` file for one side.
    pub fn tags(mut self, side: Side, path: impl AsRef<Path>) -> Self {
        let path = path.as_ref().to_path_buf();
        match side {
            Side::Src => self.src_tags = Some(path),
            Side::Tgt => self.tgt_tags = Some(path),
        }
        self
    }

    /// Changes the separator used in tagged files (default `|`).
    pub fn tag_separator(mut self, separator: char) -> Self {
        self.separator = separator;
        self
    }

    /// Drops pairs where either side exceeds `limit` tokens.
    ///
    /// Filtering happens before ids are assigned, so the surviving pairs
    /// still carry dense ids. No limit is applied unless this is called.
    pub fn max_tokens(mut self, limit: usize) -> Self {
        self.max_tokens = Some(limit);
        self
    }

    /// Opens the files and returns a streaming pair iterator.
    pub fn open(self) -> Result<PairStream> {
        Ok(PairStream {
            src: LineSource::open(&self.src)?,
            tgt: LineSource::open(&self.tgt)?,
            src_tags: match &self.src_tags {
                Some(p) => Some(LineSource::open(p)?),
                None => None,
            },
            tgt_tags: match &self.tgt_tags {
                Some(p) => Some(LineSource::open(p)?),
                None => None,
            },
            separator: self.separator,
            max_tokens: self.max_tokens,
            next_id: 0,
            failed: false,
        })
    }

    /// Reads the whole corpus into memory.
    pub fn load(self) -> Result<ParallelCorpus> {
        let stream = self.open()?;
        let mut pairs = Vec::new();
        for pair in stream {
            pairs.push(pair?);
        }
        Ok(ParallelCorpus { pairs })
    }
}

/// Streaming iterator over sentence pairs; see [`CorpusReader::open`].
///
/// Yields pairs in file order with dense ids. After the first error the
/// stream fuses and yields nothing further.
pub struct PairStream {
    src: LineSource,
    tgt: LineSource,
    src_tags: Option<LineSource>,
    tgt_tags: Option<LineSource>,
    separator: char,
    max_tokens: Option<usize>,
    next_id: ExampleId,
    failed: bool,
}

impl PairStream {
    /// Reads one aligned row from every open file, or detects length skew.
    fn read_row(&mut self) -> Result<Option<SentencePair>> {
        loop {
            let src_line = self.src.next_line()?.map(str::to_owned);
            let tgt_line = self.tgt.next_line()?.map(str::to_owned);
            let (src_line, tgt_line) = match (src_line, tgt_line) {
                (Some(s), Some(t)) => (s, t),
                (None, None) => {
                    // Main files are done; any leftover tag lines are a skew.
                    for tags in [self.src_tags.as_mut(), self.tgt_tags.as_mut()]
                        .into_iter()
                        .flatten()
                    {
                        if tags.next_line()?.is_some() {
                            let lines_b = tags.drain();
                            return Err(CorpusError::LineCountMismatch {
                                path_a: self.src.path.clone(),
                                lines_a: self.src.line,
                                path_b: tags.path.clone(),
                                lines_b,
                            });
                        }
                    }
                    return Ok(None);
                }
                _ => {
                    let lines_a = self.src.drain();
                    let lines_b = self.tgt.drain();
                    return Err(CorpusError::LineCountMismatch {
                        path_a: self.src.path.clone(),
                        lines_a,
                        path_b: self.tgt.path.clone(),
                        lines_b,
                    });
                }
            };

            let src_tokens = tokenize(&src_line, &self.src.path, self.src.line)?;
            let tgt_tokens = tokenize(&tgt_line, &self.tgt.path, self.tgt.line)?;

            let src_tags = Self::read_tags(
                self.src_tags.as_mut(),
                Side::Src,
                &src_tokens,
                self.separator,
                &self.src.path,
                self.src.line,
            )?;
            let tgt_tags = Self::read_tags(
                self.tgt_tags.as_mut(),
                Side::Tgt,
                &tgt_tokens,
                self.separator,
                &self.tgt.path,
                self.tgt.line,
            )?;

            if let Some(limit) = self.max_tokens {
                if src_tokens.len() > limit || tgt_tokens.len() > limit {
                    continue;
                }
            }

            let id = self.next_id;
            self.next_id += 1;
            return Ok(Some(SentencePair {
                id,
                src_tokens,
                tgt_tokens,
                src_tags,
                tgt_tags,
            }));
        }
    }

    fn read_tags(
        source: Option<&mut LineSource>,
        side: Side,
        tokens: &[String],
        separator: char,
        main_path: &Path,
        main_line: u64,
    ) -> Result<Option<Vec<String>>> {
        let Some(source) = source else {
            return Ok(None);
        };
        let Some(line) = source.next_line()? else {
            let lines_b = source.line;
            return Err(CorpusError::LineCountMismatch {
                path_a: main_path.to_path_buf(),
                lines_a: main_line,
                path_b: source.path.clone(),
                lines_b,
            });
        };
        let line = line.to_owned();
        let (_, tags) = parse_tagged_line(&line, separator, &source.path, source.line)?;
        if tags.len() != tokens.len() {
            return Err(CorpusError::TagArityMismatch {
                path: source.path.clone(),
                line: source.line,
                side,
                expected: tokens.len(),
                found: tags.len(),
            });
        }
        Ok(Some(tags))
    }
}

impl Iterator for PairStream {
    type Item = Result<SentencePair>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        match self.read_row() {
            Ok(Some(pair)) => Some(Ok(pair)),
            Ok(None) => None,
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

/// Loads a parallel corpus from two aligned plain-text files.
pub fn load_parallel(src: impl AsRef<Path>, tgt: impl AsRef<Path>) -> Result<ParallelCorpus> {
    CorpusReader::new(src, tgt).load()
}

/// Attaches per-token tags from a `token<sep>tag` file to one side of an
/// already loaded corpus.
///
/// The tag file must align line-by-line with the corpus and item-by-item
/// with each sentence's tokens; only the tags are kept, the tokens in the
/// tagged file are not compared textually.
pub fn load_tagged(
    corpus: ParallelCorpus,
    path: impl AsRef<Path>,
    separator: char,
    side: Side,
) -> Result<ParallelCorpus> {
    let path = path.as_ref();
    let mut source = LineSource::open(path)?;
    let mut pairs = corpus.pairs;
    for pair in &mut pairs {
        let Some(line) = source.next_line()? else {
            let lines_b = source.line;
            return Err(CorpusError::LineCountMismatch {
                path_a: PathBuf::from("<corpus>"),
                lines_a: pairs.len() as u64,
                path_b: path.to_path_buf(),
                lines_b,
            });
        };
        let line = line.to_owned();
        let (_, tags) = parse_tagged_line(&line, separator, path, source.line)?;
        let expected = pair.tokens(side).len();
        if tags.len() != expected {
            return Err(CorpusError::TagArityMismatch {
                path: path.to_path_buf(),
                line: source.line,
                side,
                expected,
                found: tags.len(),
            });
        }
        match side {
            Side::Src => pair.src_tags = Some(tags),
            Side::Tgt => pair.tgt_tags = Some(tags),
        }
    }
    if source.next_line()?.is_some() {
        let lines_b = source.drain();
        return Err(CorpusError::LineCountMismatch {
            path_a: PathBuf::from("<corpus>"),
            lines_a: pairs.len() as u64,
            path_b: path.to_path_buf(),
            lines_b,
        });
    }
    Ok(ParallelCorpus { pairs })
}

/// Writes the corpus to `out_src`/`out_tgt` in the order given by `ids`,
/// one detokenized (single-space joined) sentence per line.
///
/// `ids` may repeat or omit examples; each referenced id must exist.
pub fn write_reordered(
    corpus: &ParallelCorpus,
    ids: &[ExampleId],
    out_src: impl AsRef<Path>,
    out_tgt: impl AsRef<Path>,
) -> Result<()> {
    let open = |path: &Path| -> Result<BufWriter<File>> {
        File::create(path)
            .map(BufWriter::new)
            .map_err(|source| CorpusError::Io {
                path: path.to_path_buf(),
                source,
            })
    };
    let out_src = out_src.as_ref();
    let out_tgt = out_tgt.as_ref();
    let mut src_w = open(out_src)?;
    let mut tgt_w = open(out_tgt)?;
    for &id in ids {
        let pair = corpus.get(id).ok_or(CorpusError::UnknownId {
            id,
            n: corpus.len(),
        })?;
        let write_line = |w: &mut BufWriter<File>, tokens: &[String], path: &Path| {
            let mut line = tokens.join(" ");
            line.push('\n');
            w.write_all(line.as_bytes())
                .map_err(|source| CorpusError::Io {
                    path: path.to_path_buf(),
                    source,
                })
        };
        write_line(&mut src_w, &pair.src_tokens, out_src)?;
        write_line(&mut tgt_w, &pair.tgt_tokens, out_tgt)?;
    }
    for (w, path) in [(&mut src_w, out_src), (&mut tgt_w, out_tgt)] {
        w.flush().map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;
    use tempfile::TempDir;

    fn write(dir: &TempDir, name: &str, content: &str) -> PathBuf {
        let path = dir.path().join(name);
        fs::write(&path, content).unwrap();
        path
    }

    #[test]
    fn loads_aligned_pairs_with_dense_ids() {
        let dir = TempDir::new().unwrap();
        let src = write(&dir, "a.src", "ein Hund\nzwei Katzen laufen\n");
        let tgt = write(&dir, "a.tgt", "a dog\ntwo cats run\n");
        let corpus = load_parallel(&src, &tgt).unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus.get(0).unwrap().src_tokens, ["ein", "Hund"]);
        assert_eq!(corpus.get(1).unwrap().tgt_tokens, ["two", "cats", "run"]);
        assert_eq!(corpus.pairs()[1].id, 1);
    }

    #[test]
    fn missing_final_newline_still_counts_the_line() {
        let dir = TempDir::new().unwrap();
        let src = write(&dir, "a.src", "eins\nzwei");
        let tgt = write(&dir, "a.tgt", "one\ntwo\n");
        let corpus = load_parallel(&src, &tgt).unwrap();
        assert_eq!(corpus.len(), 2);
    }

    #[test]
    fn line_count_mismatch_is_rejected() {
        let dir = TempDir::new().unwrap();
        let src = write(&dir, "a.src", "eins\nzwei\ndrei\n");
        let tgt = write(&dir, "a.tgt", "one\ntwo\n");
        let err = load_parallel(&src, &tgt).unwrap_err();
        match err {
            CorpusError::LineCountMismatch {
                lines_a, lines_b, ..
            } => {
                assert_eq!((lines_a, lines_b), (3, 2));
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn empty_line_is_rejected_with_position() {
        let dir = TempDir::new().unwrap();
        let src = write(&dir, "a.src", "eins\n\ndrei\n");
        let tgt = write(&dir, "a.tgt", "one\ntwo\nthree\n");
        let err = load_parallel(&src, &tgt).unwrap_err();
        match err {
            CorpusError::EmptyLine { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn invalid_utf8_is_a_load_error() {
        let dir = TempDir::new().unwrap();
        let src = dir.path().join("a.src");
        fs::write(&src, b"ok\n\xFF\xFE bad\n").unwrap();
        let tgt = write(&dir, "a.tgt", "one\ntwo\n");
        let err = load_parallel(&src, &tgt).unwrap_err();
        match err {
            CorpusError::InvalidUtf8 { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn tags_attach_to_one_side() {
        let dir = TempDir::new().unwrap();
        let src = write(&dir, "a.src", "ein Hund\n");
        let tgt = write(&dir, "a.tgt", "a dog\n");
        let tagged = write(&dir, "a.tgt.tag", "a|DET dog|NOUN\n");
        let corpus = load_parallel(&src, &tgt).unwrap();
        let corpus = load_tagged(corpus, &tagged, '|', Side::Tgt).unwrap();
        assert!(corpus.has_tags(Side::Tgt));
        assert!(!corpus.has_tags(Side::Src));
        assert_eq!(
            corpus.get(0).unwrap().tags(Side::Tgt).unwrap(),
            ["DET", "NOUN"]
        );
    }

    #[test]
    fn tag_arity_mismatch_is_rejected() {
        let dir = TempDir::new().unwrap();
        let src = write(&dir, "a.src", "ein Hund\n");
        let tgt = write(&dir, "a.tgt", "a dog\n");
        let tagged = write(&dir, "a.tgt.tag", "a|DET dog|NOUN runs|VERB\n");
        let corpus = load_parallel(&src, &tgt).unwrap();
        let err = load_tagged(corpus, &tagged, '|', Side::Tgt).unwrap_err();
        match err {
            CorpusError::TagArityMismatch {
                expected, found, ..
            } => assert_eq!((expected, found), (2, 3)),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn item_without_separator_is_malformed() {
        let dir = TempDir::new().unwrap();
        let src = write(&dir, "a.src", "ein Hund\n");
        let tgt = write(&dir, "a.tgt", "dog runs\n");
        let tagged = write(&dir, "a.tgt.tag", "dog runs|VERB\n");
        let corpus = load_parallel(&src, &tgt).unwrap();
        let err = load_tagged(corpus, &tagged, '|', Side::Tgt).unwrap_err();
        match err {
            CorpusError::MalformedItem { item, .. } => assert_eq!(item, "dog"),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn token_may_contain_the_separator() {
        let dir = TempDir::new().unwrap();
        let src = write(&dir, "a.src", "x\n");
        let tgt = write(&dir, "a.tgt", "a|b\n");
        let tagged = write(&dir, "a.tgt.tag", "a|b|SYM\n");
        let corpus = load_parallel(&src, &tgt).unwrap();
        let corpus = load_tagged(corpus, &tagged, '|', Side::Tgt).unwrap();
        assert_eq!(corpus.get(0).unwrap().tags(Side::Tgt).unwrap(), ["SYM"]);
    }

    #[test]
    fn streaming_matches_full_load() {
        let dir = TempDir::new().unwrap();
        let src = write(&dir, "a.src", "a\nb c\nd e f\n");
        let tgt = write(&dir, "a.tgt", "x\ny z\nu v w\n");
        let loaded = load_parallel(&src, &tgt).unwrap();
        let streamed: Vec<SentencePair> = CorpusReader::new(&src, &tgt)
            .open()
            .unwrap()
            .map(|p| p.unwrap())
            .collect();
        assert_eq!(loaded.pairs(), streamed.as_slice());
    }

    #[test]
    fn max_tokens_filter_keeps_ids_dense() {
        let dir = TempDir::new().unwrap();
        let src = write(&dir, "a.src", "a\nb b b b\nc\n");
        let tgt = write(&dir, "a.tgt", "x\ny\nz\n");
        let corpus = CorpusReader::new(&src, &tgt)
            .max_tokens(3)
            .load()
            .unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus.get(0).unwrap().src_tokens, ["a"]);
        assert_eq!(corpus.get(1).unwrap().src_tokens, ["c"]);
        assert_eq!(corpus.get(1).unwrap().id, 1);
    }

    #[test]
    fn reorder_roundtrip_preserves_token_sequences() {
        let dir = TempDir::new().unwrap();
        let src = write(&dir, "a.src", "ein  Hund\nzwei Katzen\n");
        let tgt = write(&dir, "a.tgt", "a dog\ntwo cats\n");
        let corpus = load_parallel(&src, &tgt).unwrap();
        let out_src = dir.path().join("out.src");
        let out_tgt = dir.path().join("out.tgt");
        write_reordered(&corpus, &[0, 1], &out_src, &out_tgt).unwrap();
        let reloaded = load_parallel(&out_src, &out_tgt).unwrap();
        assert_eq!(corpus.pairs(), reloaded.pairs());
        // Detokenized output is single-spaced regardless of input spacing.
        assert_eq!(fs::read_to_string(&out_src).unwrap(), "ein Hund\nzwei Katzen\n");
        // Writing the reloaded corpus again is byte-stable.
        let again_src = dir.path().join("again.src");
        let again_tgt = dir.path().join("again.tgt");
        write_reordered(&reloaded, &[0, 1], &again_src, &again_tgt).unwrap();
        assert_eq!(
            fs::read_to_string(&out_src).unwrap(),
            fs::read_to_string(&again_src).unwrap()
        );
    }

    #[test]
    fn reorder_rejects_unknown_ids() {
        let dir = TempDir::new().unwrap();
        let src = write(&dir, "a.src", "a\n");
        let tgt = write(&dir, "a.tgt", "x\n");
        let corpus = load_parallel(&src, &tgt).unwrap();
        let err = write_reordered(
            &corpus,
            &[0, 5],
            dir.path().join("o.src"),
            dir.path().join("o.tgt"),
        )
        .unwrap_err();
        match err {
            CorpusError::UnknownId { id, n } => assert_eq!((id, n), (5, 1)),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn tag_file_length_skew_is_detected_when_streaming() {
        let dir = TempDir::new().unwrap();
        let src = write(&dir, "a.src", "a\nb\n");
        let tgt = write(&dir, "a.tgt", "x\ny\n");
        let tagged = write(&dir, "a.src.tag", "a|DET\n");
        let result: Result<Vec<_>> = CorpusReader::new(&src, &tgt)
            .tags(Side::Src, &tagged)
            .open()
            .unwrap()
            .collect();
        assert!(matches!(
            result.unwrap_err(),
            CorpusError::LineCountMismatch { .. }
        ));
    }
}

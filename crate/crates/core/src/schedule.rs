//! Schedule container and its plain-text file format.
//!
//! A schedule is an ordered list of minibatches over example ids, together
//! with the parameters that produced it. The file format is line-oriented
//! and deterministic, so equal inputs and seeds serialize to identical
//! bytes:
//!
//! ```text
//! #strategy=curriculum
//! #batch_size=64
//! #seed=7
//! #n=100000
//! #feature=tgt-length
//! #thresholds=8,12,16,20,40
//! #epoch=1
//! 17 4 99 ...\t@phase=1
//! 23 8 41 ...
//! ```
//!
//! Header lines start with `#` and appear in the fixed order above;
//! `#feature` and `#thresholds` are present only when the strategy used
//! them. Each following line is one batch: space-separated decimal ids,
//! optionally suffixed with a tab and an `@key=value` annotation naming the
//! batch's bucket or the curriculum phase at its first example.
//!
//! Reading enforces per-line shape (non-empty batches within the stated
//! batch size) but deliberately not exactly-once coverage, so that damaged
//! files can still be loaded and audited by the metrics module.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::ExampleId;

/// The scheduling strategies a file can declare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Uniform shuffle of all ids.
    Shuffle,
    /// Feature-homogeneous buckets, shuffled within and between.
    Bucket,
    /// Easy-to-hard curriculum over difficulty bins.
    Curriculum,
    /// The curriculum example stream, reversed.
    ReverseCurriculum,
    /// Ids in feature order.
    Sorted,
}

impl Strategy {
    /// Stable tag used in files and on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            Strategy::Shuffle => "shuffle",
            Strategy::Bucket => "bucket",
            Strategy::Curriculum => "curriculum",
            Strategy::ReverseCurriculum => "reverse-curriculum",
            Strategy::Sorted => "sorted",
        }
    }

    /// Parses a strategy tag.
    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "shuffle" => Some(Strategy::Shuffle),
            "bucket" => Some(Strategy::Bucket),
            "curriculum" => Some(Strategy::Curriculum),
            "reverse-curriculum" => Some(Strategy::ReverseCurriculum),
            "sorted" => Some(Strategy::Sorted),
            _ => None,
        }
    }

    /// All strategies, in tag order.
    pub const ALL: [Strategy; 5] = [
        Strategy::Shuffle,
        Strategy::Bucket,
        Strategy::Curriculum,
        Strategy::ReverseCurriculum,
        Strategy::Sorted,
    ];
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Optional origin note attached to a batch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Annotation {
    /// The bucket key (feature value or bin index) all members share.
    Bucket(u32),
    /// The 1-based curriculum phase at the batch's first example.
    Phase(u32),
}

impl Annotation {
    fn render(&self) -> String {
        match self {
            Annotation::Bucket(key) => format!("bucket={key}"),
            Annotation::Phase(phase) => format!("phase={phase}"),
        }
    }

    fn parse(text: &str) -> Option<Self> {
        if let Some(v) = text.strip_prefix("bucket=") {
            return v.parse().ok().map(Annotation::Bucket);
        }
        if let Some(v) = text.strip_prefix("phase=") {
            return v.parse().ok().map(Annotation::Phase);
        }
        None
    }
}

/// One minibatch: a non-empty run of example ids plus an optional note on
/// where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Batch {
    /// Example ids in presentation order.
    pub ids: Vec<ExampleId>,
    /// Bucket or phase annotation, when the strategy provides one.
    pub annotation: Option<Annotation>,
}

/// Parameters recorded alongside a schedule's batches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleMeta {
    /// Strategy that produced the schedule.
    pub strategy: Strategy,
    /// Maximum ids per batch; at least 1.
    pub batch_size: u32,
    /// Seed that drove the random draws (recorded even when unused).
    pub seed: u64,
    /// Number of examples the schedule was built for.
    pub n: u64,
    /// Label of the feature that ordered or grouped the examples.
    pub feature: Option<String>,
    /// Bin thresholds in effect, after any automatic adjustment.
    pub thresholds: Option<Vec<u32>>,
    /// 1-based training epoch this schedule serves.
    pub epoch: u32,
}

/// Errors raised when constructing, writing or parsing schedules.
#[derive(Debug, thiserror::Error)]
pub enum ScheduleFileError {
    /// Underlying I/O failure.
    #[error("{path}: {source}")]
    Io {
        /// File involved.
        path: PathBuf,
        /// Original error.
        #[source]
        source: io::Error,
    },
    /// A structural problem in a schedule file or batch list.
    #[error("schedule line {line}: {reason}")]
    Malformed {
        /// 1-based line number (0 for file-level problems).
        line: u64,
        /// What was wrong.
        reason: String,
    },
}

/// Result alias for schedule file operations.
pub type Result<T> = std::result::Result<T, ScheduleFileError>;

/// An ordered list of minibatches plus the parameters that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    meta: ScheduleMeta,
    batches: Vec<Batch>,
}

impl Schedule {
    /// Assembles a schedule, enforcing that every batch is non-empty and
    /// within `batch_size`. Exactly-once coverage is *not* enforced here;
    /// use the metrics module to audit it.
    pub fn new(meta: ScheduleMeta, batches: Vec<Batch>) -> Result<Self> {
        if meta.batch_size == 0 {
            return Err(ScheduleFileError::Malformed {
                line: 0,
                reason: "batch_size must be at least 1".to_owned(),
            });
        }
        for (i, batch) in batches.iter().enumerate() {
            if batch.ids.is_empty() {
                return Err(ScheduleFileError::Malformed {
                    line: 0,
                    reason: format!("batch {i} is empty"),
                });
            }
            if batch.ids.len() > meta.batch_size as usize {
                return Err(ScheduleFileError::Malformed {
                    line: 0,
                    reason: format!(
                        "batch {i} holds {} ids, exceeding batch_size {}",
                        batch.ids.len(),
                        meta.batch_size
                    ),
                });
            }
        }
        Ok(Self { meta, batches })
    }

    /// The recorded parameters.
    pub fn meta(&self) -> &ScheduleMeta {
        &self.meta
    }

    /// Returns the schedule with its feature label replaced.
    pub fn with_feature(mut self, feature: Option<String>) -> Self {
        self.meta.feature = feature;
        self
    }

    /// Returns the schedule with its threshold metadata replaced.
    pub fn with_thresholds(mut self, thresholds: Option<Vec<u32>>) -> Self {
        self.meta.thresholds = thresholds;
        self
    }

    /// Returns the schedule with its epoch index replaced.
    pub fn with_epoch(mut self, epoch: u32) -> Self {
        self.meta.epoch = epoch;
        self
    }

    /// All batches in presentation order.
    pub fn batches(&self) -> &[Batch] {
        &self.batches
    }

    /// Number of batches.
    pub fn n_batches(&self) -> usize {
        self.batches.len()
    }

    /// All ids in presentation order, batch boundaries dropped.
    pub fn flattened(&self) -> Vec<ExampleId> {
        let mut ids = Vec::with_capacity(self.meta.n as usize);
        for batch in &self.batches {
            ids.extend_from_slice(&batch.ids);
        }
        ids
    }

    /// Serializes the schedule in the documented text format.
    pub fn write_to(&self, mut w: impl Write) -> io::Result<()> {
        let meta = &self.meta;
        writeln!(w, "#strategy={}", meta.strategy.tag())?;
        writeln!(w, "#batch_size={}", meta.batch_size)?;
        writeln!(w, "#seed={}", meta.seed)?;
        writeln!(w, "#n={}", meta.n)?;
        if let Some(feature) = &meta.feature {
            writeln!(w, "#feature={feature}")?;
        }
        if let Some(thresholds) = &meta.thresholds {
            let rendered: Vec<String> = thresholds.iter().map(u32::to_string).collect();
            writeln!(w, "#thresholds={}", rendered.join(","))?;
        }
        writeln!(w, "#epoch={}", meta.epoch)?;
        let mut line = String::new();
        for batch in &self.batches {
            line.clear();
            for (i, id) in batch.ids.iter().enumerate() {
                if i > 0 {
                    line.push(' ');
                }
                line.push_str(&id.to_string());
            }
            if let Some(annotation) = &batch.annotation {
                line.push('\t');
                line.push('@');
                line.push_str(&annotation.render());
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    /// The exact bytes [`Schedule::write_to`] would emit.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bytes = Vec::new();
        self.write_to(&mut bytes)
            .expect("writing to a Vec cannot fail");
        bytes
    }

    /// Writes the schedule to a file.
    pub fn write_to_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let wrap = |source: io::Error| ScheduleFileError::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = File::create(path).map_err(wrap)?;
        let mut w = BufWriter::new(file);
        self.write_to(&mut w).and_then(|_| w.flush()).map_err(wrap)
    }

    /// Parses a schedule from a reader; see the module docs for the format.
    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let malformed = |line: u64, reason: String| ScheduleFileError::Malformed { line, reason };
        let mut strategy = None;
        let mut batch_size = None;
        let mut seed = None;
        let mut n = None;
        let mut feature = None;
        let mut thresholds = None;
        let mut epoch = 1u32;
        let mut batches = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line_no = i as u64 + 1;
            let line = line.map_err(|source| ScheduleFileError::Io {
                path: PathBuf::from("<schedule>"),
                source,
            })?;
            if let Some(header) = line.strip_prefix('#') {
                let Some((key, value)) = header.split_once('=') else {
                    continue;
                };
                match key {
                    "strategy" => {
                        strategy = Some(Strategy::from_tag(value).ok_or_else(|| {
                            malformed(line_no, format!("unknown strategy {value:?}"))
                        })?)
                    }
                    "batch_size" => {
                        batch_size = Some(value.parse::<u32>().map_err(|_| {
                            malformed(line_no, "unreadable batch_size".to_owned())
                        })?)
                    }
                    "seed" => {
                        seed = Some(
                            value
                                .parse::<u64>()
                                .map_err(|_| malformed(line_no, "unreadable seed".to_owned()))?,
                        )
                    }
                    "n" => {
                        n = Some(
                            value
                                .parse::<u64>()
                                .map_err(|_| malformed(line_no, "unreadable n".to_owned()))?,
                        )
                    }
                    "feature" => feature = Some(value.to_owned()),
                    "thresholds" => {
                        let parsed: std::result::Result<Vec<u32>, _> =
                            value.split(',').map(|t| t.trim().parse::<u32>()).collect();
                        thresholds = Some(parsed.map_err(|_| {
                            malformed(line_no, "unreadable thresholds".to_owned())
                        })?);
                    }
                    "epoch" => {
                        epoch = value
                            .parse::<u32>()
                            .map_err(|_| malformed(line_no, "unreadable epoch".to_owned()))?
                    }
                    // Unknown headers are ignored for forward compatibility.
                    _ => {}
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let (ids_part, annotation) = match line.split_once('\t') {
                Some((ids_part, suffix)) => {
                    let text = suffix.strip_prefix('@').ok_or_else(|| {
                        malformed(line_no, "annotation must start with '@'".to_owned())
                    })?;
                    let parsed = Annotation::parse(text).ok_or_else(|| {
                        malformed(line_no, format!("unreadable annotation {text:?}"))
                    })?;
                    (ids_part, Some(parsed))
                }
                None => (line.as_str(), None),
            };
            let ids: std::result::Result<Vec<ExampleId>, _> = ids_part
                .split(' ')
                .map(|t| t.parse::<ExampleId>())
                .collect();
            let ids =
                ids.map_err(|_| malformed(line_no, "unreadable example id".to_owned()))?;
            batches.push(Batch { ids, annotation });
        }
        let meta = ScheduleMeta {
            strategy: strategy
                .ok_or_else(|| malformed(0, "missing #strategy header".to_owned()))?,
            batch_size: batch_size
                .ok_or_else(|| malformed(0, "missing #batch_size header".to_owned()))?,
            seed: seed.ok_or_else(|| malformed(0, "missing #seed header".to_owned()))?,
            n: n.ok_or_else(|| malformed(0, "missing #n header".to_owned()))?,
            feature,
            thresholds,
            epoch,
        };
        Self::new(meta, batches)
    }

    /// Reads a schedule from a file.
    pub fn read_from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| ScheduleFileError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::read_from(BufReader::new(file)).map_err(|e| match e {
            ScheduleFileError::Io { source, .. } => ScheduleFileError::Io {
                path: path.to_path_buf(),
                source,
            },
            other => other,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Schedule {
        Schedule::new(
            ScheduleMeta {
                strategy: Strategy::Curriculum,
                batch_size: 3,
                seed: 9,
                n: 7,
                feature: Some("tgt-length".to_owned()),
                thresholds: Some(vec![8, 12]),
                epoch: 2,
            },
            vec![
                Batch {
                    ids: vec![4, 0, 6],
                    annotation: Some(Annotation::Phase(1)),
                },
                Batch {
                    ids: vec![2, 5, 1],
                    annotation: Some(Annotation::Phase(2)),
                },
                Batch {
                    ids: vec![3],
                    annotation: Some(Annotation::Phase(2)),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn serialization_roundtrips() {
        let schedule = sample();
        let bytes = schedule.to_bytes();
        let parsed = Schedule::read_from(&bytes[..]).unwrap();
        assert_eq!(parsed, schedule);
        assert_eq!(parsed.to_bytes(), bytes);
    }

    #[test]
    fn file_format_is_exactly_as_documented() {
        let text = String::from_utf8(sample().to_bytes()).unwrap();
        assert_eq!(
            text,
            "#strategy=curriculum\n#batch_size=3\n#seed=9\n#n=7\n\
             #feature=tgt-length\n#thresholds=8,12\n#epoch=2\n\
             4 0 6\t@phase=1\n2 5 1\t@phase=2\n3\t@phase=2\n"
        );
    }

    #[test]
    fn optional_headers_are_omitted_when_absent() {
        let schedule = Schedule::new(
            ScheduleMeta {
                strategy: Strategy::Shuffle,
                batch_size: 2,
                seed: 0,
                n: 2,
                feature: None,
                thresholds: None,
                epoch: 1,
            },
            vec![Batch {
                ids: vec![1, 0],
                annotation: None,
            }],
        )
        .unwrap();
        let text = String::from_utf8(schedule.to_bytes()).unwrap();
        assert_eq!(
            text,
            "#strategy=shuffle\n#batch_size=2\n#seed=0\n#n=2\n#epoch=1\n1 0\n"
        );
    }

    #[test]
    fn empty_batches_are_rejected() {
        let err = Schedule::new(
            ScheduleMeta {
                strategy: Strategy::Shuffle,
                batch_size: 2,
                seed: 0,
                n: 0,
                feature: None,
                thresholds: None,
                epoch: 1,
            },
            vec![Batch {
                ids: vec![],
                annotation: None,
            }],
        )
        .unwrap_err();
        assert!(matches!(err, ScheduleFileError::Malformed { .. }));
    }

    #[test]
    fn oversized_batches_are_rejected() {
        let text = "#strategy=shuffle\n#batch_size=2\n#seed=0\n#n=3\n#epoch=1\n0 1 2\n";
        assert!(Schedule::read_from(text.as_bytes()).is_err());
    }

    #[test]
    fn missing_headers_are_rejected() {
        let text = "#strategy=shuffle\n#seed=0\n#n=1\n0\n";
        let err = Schedule::read_from(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("batch_size"));
    }

    #[test]
    fn garbage_ids_are_rejected_with_line_numbers() {
        let text = "#strategy=shuffle\n#batch_size=2\n#seed=0\n#n=2\n0 x\n";
        let err = Schedule::read_from(text.as_bytes()).unwrap_err();
        assert!(matches!(err, ScheduleFileError::Malformed { line: 5, .. }));
    }

    #[test]
    fn truncated_files_still_parse() {
        // Coverage problems are the metrics module's concern, not parsing's.
        let text = "#strategy=shuffle\n#batch_size=2\n#seed=0\n#n=6\n0 3\n5 1\n";
        let schedule = Schedule::read_from(text.as_bytes()).unwrap();
        assert_eq!(schedule.flattened(), vec![0, 3, 5, 1]);
        assert_eq!(schedule.meta().n, 6);
    }
}

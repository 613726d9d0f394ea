//! Deterministic minibatch scheduling for parallel corpora.
//!
//! This crate turns a sentence-aligned corpus into an explicit, replayable
//! training order. A schedule fixes which examples form each minibatch and
//! in which order the minibatches are consumed, so experiments that differ
//! only in data ordering can be compared — and reproduced — exactly.
//!
//! The pipeline has four stages, each usable on its own:
//!
//! 1. **Measure** ([`features`]): score every sentence pair with an integer
//!    difficulty feature — token lengths, word-category counts from tags or
//!    a lexicon, or frequency-rank blocks over the vocabulary.
//! 2. **Bin** ([`binning`]): map scores to 1-based bins via inclusive
//!    thresholds, and repair threshold choices that leave a later bin
//!    larger than an earlier one.
//! 3. **Schedule** ([`schedulers`]): build batch orders — uniform shuffle,
//!    feature-homogeneous buckets, sorted orders, and a curriculum that
//!    grows the pool phase by phase while using every example exactly once
//!    per epoch.
//! 4. **Audit** ([`metrics`]): verify exactly-once coverage and quantify
//!    padding waste, batch homogeneity, and complexity progression.
//!
//! [`subword`] adds a byte-pair-encoding vocabulary so token counts can be
//! computed over subword units, and [`schedule`] defines the plain-text
//! schedule file format all tools exchange.
//!
//! Everything is deterministic: randomness comes solely from [`rng`], a
//! fixed, portable generator seeded explicitly, and identical inputs with
//! identical seeds produce byte-identical files on every platform. With
//! the `parallel` feature (on by default) the heavy per-example loops run
//! on a work-stealing pool without changing any result.

#![warn(missing_docs)]

pub mod binning;
pub mod corpus;
pub mod features;
pub mod metrics;
mod parallel;
pub mod rng;
pub mod schedule;
pub mod schedulers;
pub mod subword;

/// Stable index of a sentence pair: its 0-based line number in the corpus.
///
/// Schedules store these ids, so a schedule stays meaningful as long as
/// the corpus files it was built from are unchanged.
pub type ExampleId = u32;

pub use binning::{BinAssignment, BinSpec};
pub use corpus::{CorpusReader, ParallelCorpus, SentencePair, Side};
pub use features::{FeatureKind, FeatureVector, RankTable};
pub use rng::PortableRng;
pub use schedule::{Batch, Schedule, ScheduleMeta, Strategy};
pub use subword::BpeModel;

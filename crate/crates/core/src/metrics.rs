//! Schedule auditing: coverage, padding waste, homogeneity, complexity
//! progression, and curriculum phase accounting.
//!
//! Every metric is a pure fold over a [`Schedule`]; per-batch work runs in
//! parallel when the `parallel` feature is enabled, with order-preserving
//! aggregation so results never depend on thread count. Metrics that look
//! up per-example values (`padding_waste`, `batch_homogeneity`,
//! `complexity_curve`, `phase_report`) require the value table to cover
//! every scheduled id; run [`coverage_audit`] first when the schedule file
//! is untrusted.

use std::collections::BTreeSet;
use std::io::{self, BufRead, Write};

use serde::Serialize;

use crate::binning::BinAssignment;
use crate::schedule::{Annotation, Batch, Schedule, Strategy};
use crate::{parallel, ExampleId};

/// Errors raised by metrics that require specific schedule shapes.
#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    /// A phase report was requested for a schedule without phase
    /// annotations (only curriculum schedules carry them).
    #[error("schedule carries no phase annotations; phase reports need a curriculum schedule")]
    MissingPhaseAnnotations,
}

/// Exactly which ids a schedule covers, computed with set semantics in a
/// single pass regardless of batch structure.
#[derive(Clone, Debug, Serialize)]
pub struct CoverageReport {
    /// Corpus size the schedule claims to cover.
    pub n_expected: u64,
    /// Total ids actually scheduled (with multiplicity).
    pub n_scheduled: u64,
    /// Number of batches.
    pub n_batches: u64,
    /// Batches smaller than the declared batch size.
    pub n_underfull: u64,
    /// Ids scheduled more than once, each listed once, ascending.
    pub duplicate_ids: Vec<ExampleId>,
    /// Expected ids that never appear, ascending.
    pub missing_ids: Vec<ExampleId>,
    /// Scheduled ids outside `0..n_expected`, each listed once, ascending.
    pub out_of_range_ids: Vec<ExampleId>,
}

impl CoverageReport {
    /// True when the schedule is an exact cover: every expected id exactly
    /// once and nothing else.
    pub fn coverage_ok(&self) -> bool {
        self.duplicate_ids.is_empty()
            && self.missing_ids.is_empty()
            && self.out_of_range_ids.is_empty()
    }
}

/// Audits which ids the schedule covers against an expected corpus size.
///
/// Uses a bitset over `0..n`, so a multi-million-id schedule is audited in
/// one pass and O(n/8) bytes.
pub fn coverage_audit(schedule: &Schedule, n: u64) -> CoverageReport {
    let words = (n as usize).div_ceil(64);
    let mut seen = vec![0u64; words];
    let mut duplicates = BTreeSet::new();
    let mut out_of_range = BTreeSet::new();
    let mut n_scheduled = 0u64;
    let mut n_underfull = 0u64;
    let batch_size = schedule.meta().batch_size as usize;

    for batch in schedule.batches() {
        if batch.ids.len() < batch_size {
            n_underfull += 1;
        }
        for &id in &batch.ids {
            n_scheduled += 1;
            if (id as u64) >= n {
                out_of_range.insert(id);
                continue;
            }
            let (word, bit) = (id as usize / 64, id as usize % 64);
            if seen[word] & (1 << bit) != 0 {
                duplicates.insert(id);
            } else {
                seen[word] |= 1 << bit;
            }
        }
    }

    let mut missing = Vec::new();
    for id in 0..n {
        let (word, bit) = (id as usize / 64, id as usize % 64);
        if seen[word] & (1 << bit) == 0 {
            missing.push(id as ExampleId);
        }
    }

    CoverageReport {
        n_expected: n,
        n_scheduled,
        n_batches: schedule.n_batches() as u64,
        n_underfull,
        duplicate_ids: duplicates.into_iter().collect(),
        missing_ids: missing,
        out_of_range_ids: out_of_range.into_iter().collect(),
    }
}

/// Padding waste of every batch plus two aggregates.
#[derive(Clone, Debug, Serialize)]
pub struct PaddingReport {
    /// Waste fraction per batch, in schedule order.
    pub per_batch: Vec<f64>,
    /// Unweighted mean over batches; underfull batches count as much as
    /// full ones.
    pub mean: f64,
    /// Padded-slot-weighted aggregate: total padding over total slots.
    pub token_weighted: f64,
}

/// Measures the padding each batch would need to become rectangular.
///
/// A batch with member lengths `L` and maximum `m` wastes
/// `Σ (m − l) / (|L| · m)` of its slots. `lengths` must cover every
/// scheduled id.
pub fn padding_waste(schedule: &Schedule, lengths: &[u32]) -> PaddingReport {
    let cells: Vec<(u64, u64)> = parallel::map(schedule.batches(), |batch| {
        let max = batch
            .ids
            .iter()
            .map(|&id| lengths[id as usize] as u64)
            .max()
            .unwrap_or(0);
        let padding: u64 = batch
            .ids
            .iter()
            .map(|&id| max - lengths[id as usize] as u64)
            .sum();
        (padding, batch.ids.len() as u64 * max)
    });

    let per_batch: Vec<f64> = cells
        .iter()
        .map(|&(padding, slots)| {
            if slots == 0 {
                0.0
            } else {
                padding as f64 / slots as f64
            }
        })
        .collect();
    let mean = if per_batch.is_empty() {
        0.0
    } else {
        per_batch.iter().sum::<f64>() / per_batch.len() as f64
    };
    let total_padding: u64 = cells.iter().map(|c| c.0).sum();
    let total_slots: u64 = cells.iter().map(|c| c.1).sum();
    let token_weighted = if total_slots == 0 {
        0.0
    } else {
        total_padding as f64 / total_slots as f64
    };

    PaddingReport {
        per_batch,
        mean,
        token_weighted,
    }
}

/// Fraction of batches whose members all fall in one bin. `assignment`
/// must cover every scheduled id.
pub fn batch_homogeneity(schedule: &Schedule, assignment: &BinAssignment) -> f64 {
    if schedule.n_batches() == 0 {
        return 1.0;
    }
    let uniform: Vec<bool> = parallel::map(schedule.batches(), |batch| {
        let first = assignment.bin_of(batch.ids[0]);
        batch.ids.iter().all(|&id| assignment.bin_of(id) == first)
    });
    uniform.iter().filter(|&&u| u).count() as f64 / uniform.len() as f64
}

/// Per-batch arithmetic mean of a feature value, in schedule order, paired
/// with the 1-based batch index. `values` must cover every scheduled id.
pub fn complexity_curve(schedule: &Schedule, values: &[u32]) -> Vec<(u64, f64)> {
    let means: Vec<f64> = parallel::map(schedule.batches(), |batch| {
        let sum: u64 = batch.ids.iter().map(|&id| values[id as usize] as u64).sum();
        sum as f64 / batch.ids.len() as f64
    });
    means
        .into_iter()
        .enumerate()
        .map(|(i, mean)| (i as u64 + 1, mean))
        .collect()
}

/// Writes a complexity curve as CSV: optional `#key=value` configuration
/// headers, a `batch,mean` column header, then one row per batch.
pub fn write_complexity_csv(
    mut w: impl Write,
    curve: &[(u64, f64)],
    config: &[(&str, String)],
) -> io::Result<()> {
    for (key, value) in config {
        writeln!(w, "#{key}={value}")?;
    }
    writeln!(w, "batch,mean")?;
    for (batch, mean) in curve {
        writeln!(w, "{batch},{mean}")?;
    }
    Ok(())
}

/// Reads a curve written by [`write_complexity_csv`], skipping `#` headers
/// and the column header; intended for tools that post-process curves.
pub fn read_complexity_csv(r: impl BufRead) -> io::Result<Vec<(u64, f64)>> {
    let mut curve = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.is_empty() || line.starts_with('#') || line == "batch,mean" {
            continue;
        }
        let parse = |l: &str| -> Option<(u64, f64)> {
            let (batch, mean) = l.split_once(',')?;
            Some((batch.parse().ok()?, mean.parse().ok()?))
        };
        let (batch, mean) = parse(&line).ok_or_else(|| {
            io::Error::new(io::ErrorKind::InvalidData, format!("bad curve row: {line:?}"))
        })?;
        curve.push((batch, mean));
    }
    Ok(curve)
}

/// How many examples one curriculum phase drew from each bin.
#[derive(Clone, Debug, Serialize)]
pub struct PhaseBinCounts {
    /// 1-based phase index.
    pub phase: u32,
    /// Examples the phase contains in total.
    pub n_examples: u64,
    /// Examples drawn from each bin, indexed by bin − 1.
    pub per_bin: Vec<u64>,
}

/// Per-phase bin accounting for a curriculum schedule.
#[derive(Clone, Debug, Serialize)]
pub struct PhaseReport {
    /// One entry per phase, ascending. Interior empty phases (equal-sized
    /// consecutive bins) are kept; trailing empty phases from empty bins
    /// are dropped.
    pub phases: Vec<PhaseBinCounts>,
    /// Whether every batch's phase annotation matches the phase its first
    /// example falls into.
    pub annotations_consistent: bool,
}

/// Reconstructs per-phase per-bin draw counts for a curriculum schedule.
///
/// Phase boundaries follow from the bin sizes alone: with nonincreasing
/// sizes `s_1 ≥ … ≥ s_k`, phase `j` holds `j · (s_j − s_{j+1})` examples
/// (taking `s_{k+1} = 0`), so the flattened stream is cut at those offsets
/// and each segment's members are counted per bin. Batch annotations are
/// cross-checked against the reconstruction.
///
/// `assignment` must be the one the schedule was built from (same length,
/// nonincreasing bin sizes).
pub fn phase_report(
    schedule: &Schedule,
    assignment: &BinAssignment,
) -> Result<PhaseReport, MetricsError> {
    let annotated = schedule.meta().strategy == Strategy::Curriculum
        && schedule
            .batches()
            .iter()
            .all(|b| matches!(b.annotation, Some(Annotation::Phase(_))));
    if !annotated {
        return Err(MetricsError::MissingPhaseAnnotations);
    }

    let sizes = assignment.sizes();
    let monotone = assignment.validate_monotone();
    assert!(
        monotone.first_violation.is_none(),
        "phase reports require the nonincreasing bin sizes the scheduler enforced"
    );
    assert_eq!(
        assignment.len() as u64,
        schedule.meta().n,
        "assignment must cover the scheduled corpus"
    );

    // Cumulative phase end offsets in the flattened stream.
    let k = sizes.len();
    let mut ends = Vec::with_capacity(k);
    let mut total = 0u64;
    for j in 0..k {
        let next = if j + 1 < k { sizes[j + 1] } else { 0 };
        total += (j as u64 + 1) * (sizes[j] - next);
        ends.push(total);
    }

    let n_bins = assignment.bin_count();
    let mut phases: Vec<PhaseBinCounts> = (1..=k as u32)
        .map(|phase| PhaseBinCounts {
            phase,
            n_examples: 0,
            per_bin: vec![0; n_bins],
        })
        .collect();

    let phase_at = |offset: u64| ends.partition_point(|&e| e <= offset);
    let mut consistent = true;
    let mut offset = 0u64;
    for batch in schedule.batches() {
        let batch_phase = phase_at(offset) as u32 + 1;
        if batch.annotation != Some(Annotation::Phase(batch_phase)) {
            consistent = false;
        }
        for &id in &batch.ids {
            let stats = &mut phases[phase_at(offset)];
            stats.n_examples += 1;
            stats.per_bin[assignment.bin_of(id) as usize - 1] += 1;
            offset += 1;
        }
    }

    while phases.last().map(|p| p.n_examples) == Some(0) {
        phases.pop();
    }

    Ok(PhaseReport {
        phases,
        annotations_consistent: consistent,
    })
}

/// Everything `coverage_audit` and the value-based metrics can say about
/// one schedule, bundled for JSON emission. Value-based fields are absent
/// when the caller had no feature values or bin assignment to offer.
#[derive(Clone, Debug, Serialize)]
pub struct ScheduleReport {
    /// True when the schedule covers each expected id exactly once.
    pub coverage_ok: bool,
    /// Ids scheduled more than once.
    pub duplicate_ids: Vec<ExampleId>,
    /// Expected ids never scheduled.
    pub missing_ids: Vec<ExampleId>,
    /// Scheduled ids outside the expected range.
    pub out_of_range_ids: Vec<ExampleId>,
    /// Number of batches.
    pub n_batches: u64,
    /// Batches below the declared batch size.
    pub n_underfull: u64,
    /// Fraction of bin-uniform batches, when an assignment was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homogeneity: Option<f64>,
    /// Mean per-batch padding waste, when lengths were supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_padding_waste: Option<f64>,
    /// Slot-weighted padding waste, when lengths were supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub token_weighted_padding_waste: Option<f64>,
    /// Per-batch mean feature value, when values were supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub progression: Option<Vec<f64>>,
}

/// Runs every applicable metric over one schedule.
///
/// `values` feeds the progression curve, `lengths` the padding waste, and
/// `assignment` the homogeneity fraction; pass what is available. The
/// value-based metrics index by scheduled id, so they are skipped (left
/// `None`) whenever coverage found out-of-range ids.
pub fn compile_report(
    schedule: &Schedule,
    n: u64,
    values: Option<&[u32]>,
    lengths: Option<&[u32]>,
    assignment: Option<&BinAssignment>,
) -> ScheduleReport {
    let coverage = coverage_audit(schedule, n);
    let ids_usable = coverage.out_of_range_ids.is_empty();

    let homogeneity = assignment
        .filter(|_| ids_usable)
        .map(|a| batch_homogeneity(schedule, a));
    let padding = lengths
        .filter(|_| ids_usable)
        .map(|l| padding_waste(schedule, l));
    let progression = values.filter(|_| ids_usable).map(|v| {
        complexity_curve(schedule, v)
            .into_iter()
            .map(|(_, mean)| mean)
            .collect()
    });

    ScheduleReport {
        coverage_ok: coverage.coverage_ok(),
        duplicate_ids: coverage.duplicate_ids,
        missing_ids: coverage.missing_ids,
        out_of_range_ids: coverage.out_of_range_ids,
        n_batches: coverage.n_batches,
        n_underfull: coverage.n_underfull,
        homogeneity,
        mean_padding_waste: padding.as_ref().map(|p| p.mean),
        token_weighted_padding_waste: padding.as_ref().map(|p| p.token_weighted),
        progression,
    }
}

/// Builds a schedule from explicit batches for tests and tools; shape
/// validation matches [`Schedule::new`].
pub fn assemble_schedule(
    strategy: Strategy,
    batch_size: u32,
    seed: u64,
    n: u64,
    batches: Vec<Batch>,
) -> Schedule {
    use crate::schedule::ScheduleMeta;
    Schedule::new(
        ScheduleMeta {
            strategy,
            batch_size,
            seed,
            n,
            feature: None,
            thresholds: None,
            epoch: 1,
        },
        batches,
    )
    .expect("test batches must be well-formed")
}

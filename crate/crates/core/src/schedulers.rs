//! The scheduling strategies: shuffle, sorted, bucket, curriculum,
//! reversed curriculum and epoch continuation.
//!
//! Every strategy arranges the ids `0..n` into an example stream, cuts the
//! stream sequentially into batches of at most `batch_size` (only the final
//! batch may be smaller for stream-cut strategies) and never repeats or
//! drops an id: the flattened schedule is always a permutation of `0..n`.
//!
//! All randomness flows through [`PortableRng`](crate::rng::PortableRng) in
//! a fixed consumption order, so a `(strategy, inputs, seed)` triple decides
//! the schedule bytes completely:
//!
//! * **shuffle** — one Fisher–Yates pass over all ids.
//! * **bucket** — ids are grouped by a shared key (a raw feature value or a
//!   bin index); each bucket is shuffled in ascending key order and cut
//!   into groups of `batch_size` (the last group of a bucket may be
//!   underfull and is kept); the pooled group list is then shuffled once
//!   and concatenated. Every batch is homogeneous in the key and carries it
//!   as an annotation.
//! * **curriculum** — bins ordered easy to hard with sizes `s_1 >= … >= s_k`
//!   are drained in `k` phases: phase `j` draws `s_j − s_{j+1}` examples
//!   (with `s_{k+1} = 0`) from each of bins `1..=j`, without replacement,
//!   and shuffles the drawn pool. Earlier phases therefore hold easier
//!   examples, and after phase `j` every active bin has exactly `s_{j+1}`
//!   examples left. Batches are cut across phase boundaries and annotated
//!   with the phase of their first example. Bin decks are shuffled in bin
//!   order before drawing, then each phase pool is shuffled once.
//! * **reverse-curriculum** — the curriculum example stream, built with the
//!   identical draws, reversed at the example level and re-cut.
//! * **sorted** — ids ordered by `(value, id)`; descending order reverses
//!   that stream. No randomness is consumed.
//!
//! [`continuation`] derives a follow-up epoch from an existing schedule,
//! either restarting the curriculum or falling back to a plain shuffle,
//! always under a fresh seed.

use crate::binning::BinAssignment;
use crate::rng::PortableRng;
use crate::schedule::{Annotation, Batch, Schedule, ScheduleMeta, Strategy};
use crate::ExampleId;

/// Errors raised while building schedules.
#[derive(Debug, thiserror::Error)]
pub enum ScheduleError {
    /// No examples to schedule.
    #[error("cannot schedule zero examples")]
    EmptyInput,
    /// A batch size of zero.
    #[error("batch size must be at least 1")]
    InvalidBatchSize,
    /// Bin sizes grow from easy to hard, so no curriculum exists.
    #[error(
        "bin sizes must be nonincreasing for a curriculum, but bin {first_violation} \
         outgrows its predecessor (sizes {sizes:?}); adjust the thresholds"
    )]
    NonMonotoneBins {
        /// 1-based index of the first bin larger than the one before it.
        first_violation: usize,
        /// All bin sizes, easiest first.
        sizes: Vec<u64>,
    },
    /// More examples than the id space can address.
    #[error("{n} examples exceed the supported id range")]
    TooManyExamples {
        /// Requested example count.
        n: usize,
    },
    /// A curriculum restart without the bin assignment it needs.
    #[error("restarting a curriculum requires the bin assignment")]
    MissingAssignment,
    /// A continuation whose assignment does not match the first epoch.
    #[error("assignment covers {assigned} examples but the schedule holds {expected}")]
    AssignmentMismatch {
        /// Examples covered by the assignment.
        assigned: usize,
        /// Examples recorded in the first epoch.
        expected: u64,
    },
}

/// Result alias for scheduler operations.
pub type Result<T> = std::result::Result<T, ScheduleError>;

fn check_common(n: usize, batch_size: u32) -> Result<()> {
    if n == 0 {
        return Err(ScheduleError::EmptyInput);
    }
    if batch_size == 0 {
        return Err(ScheduleError::InvalidBatchSize);
    }
    if n > ExampleId::MAX as usize {
        return Err(ScheduleError::TooManyExamples { n });
    }
    Ok(())
}

/// Cuts a stream into consecutive batches of at most `batch_size` ids.
fn cut(stream: &[ExampleId], batch_size: u32) -> Vec<Batch> {
    stream
        .chunks(batch_size as usize)
        .map(|chunk| Batch {
            ids: chunk.to_vec(),
            annotation: None,
        })
        .collect()
}

fn meta(strategy: Strategy, batch_size: u32, seed: u64, n: usize) -> ScheduleMeta {
    ScheduleMeta {
        strategy,
        batch_size,
        seed,
        n: n as u64,
        feature: None,
        thresholds: None,
        epoch: 1,
    }
}

fn assemble(meta: ScheduleMeta, batches: Vec<Batch>) -> Schedule {
    Schedule::new(meta, batches).expect("schedulers construct well-formed batches")
}

/// Uniformly shuffles the ids `0..n` and cuts them into batches.
pub fn shuffle_schedule(n: usize, batch_size: u32, seed: u64) -> Result<Schedule> {
    check_common(n, batch_size)?;
    let mut stream: Vec<ExampleId> = (0..n as ExampleId).collect();
    PortableRng::new(seed).shuffle(&mut stream);
    let batches = cut(&stream, batch_size);
    Ok(assemble(meta(Strategy::Shuffle, batch_size, seed, n), batches))
}

/// Orders ids by `(value, id)` — ascending, or the exact reverse of that
/// stream when `ascending` is false — and cuts them into batches.
///
/// No randomness is consumed; the recorded seed is 0.
pub fn sorted_schedule(values: &[u32], batch_size: u32, ascending: bool) -> Result<Schedule> {
    check_common(values.len(), batch_size)?;
    let mut stream: Vec<ExampleId> = (0..values.len() as ExampleId).collect();
    stream.sort_unstable_by_key(|&id| (values[id as usize], id));
    if !ascending {
        stream.reverse();
    }
    let batches = cut(&stream, batch_size);
    Ok(assemble(
        meta(Strategy::Sorted, batch_size, 0, values.len()),
        batches,
    ))
}

/// Groups ids by `keys`, shuffles within each bucket, cuts each bucket into
/// groups of `batch_size` (keeping the final underfull group) and shuffles
/// the pooled group list.
///
/// Keys may be raw feature values or bin indices; each batch is homogeneous
/// in its key and carries it as a [`Annotation::Bucket`]. The batch count
/// is exactly the sum over buckets of `ceil(bucket_len / batch_size)`.
pub fn bucket_schedule(keys: &[u32], batch_size: u32, seed: u64) -> Result<Schedule> {
    check_common(keys.len(), batch_size)?;
    let mut rng = PortableRng::new(seed);

    // Bucket membership in ascending key order, members in ascending id
    // order, so the draws below are a pure function of (keys, seed).
    let mut buckets: std::collections::BTreeMap<u32, Vec<ExampleId>> =
        std::collections::BTreeMap::new();
    for (id, &key) in keys.iter().enumerate() {
        buckets.entry(key).or_default().push(id as ExampleId);
    }

    let mut groups: Vec<(u32, Vec<ExampleId>)> = Vec::new();
    for (&key, members) in buckets.iter_mut() {
        rng.shuffle(members);
        for chunk in members.chunks(batch_size as usize) {
            groups.push((key, chunk.to_vec()));
        }
    }
    rng.shuffle(&mut groups);

    let batches: Vec<Batch> = groups
        .into_iter()
        .map(|(key, ids)| Batch {
            ids,
            annotation: Some(Annotation::Bucket(key)),
        })
        .collect();
    Ok(assemble(
        meta(Strategy::Bucket, batch_size, seed, keys.len()),
        batches,
    ))
}

/// The curriculum example stream and the end offset of each phase.
///
/// Phase `j` (1-based) occupies stream positions
/// `phase_ends[j-2] .. phase_ends[j-1]` (starting at 0 for the first).
struct CurriculumStream {
    stream: Vec<ExampleId>,
    phase_ends: Vec<usize>,
}

/// Builds the curriculum stream shared by the forward and reversed
/// strategies. See the module docs for the drawing rule.
fn curriculum_stream(assignment: &BinAssignment, seed: u64) -> Result<CurriculumStream> {
    let report = assignment.validate_monotone();
    if let Some(first_violation) = report.first_violation {
        return Err(ScheduleError::NonMonotoneBins {
            first_violation,
            sizes: report.sizes,
        });
    }
    let sizes = assignment.sizes();
    let k = sizes.len();
    let mut rng = PortableRng::new(seed);

    // One deck per bin, members in ascending id order, shuffled bin by bin.
    let mut decks: Vec<Vec<ExampleId>> = vec![Vec::new(); k];
    for id in 0..assignment.len() {
        let bin = assignment.bin_of(id as ExampleId) as usize;
        decks[bin - 1].push(id as ExampleId);
    }
    for deck in decks.iter_mut() {
        rng.shuffle(deck);
    }

    let mut stream: Vec<ExampleId> = Vec::with_capacity(assignment.len());
    let mut phase_ends = Vec::with_capacity(k);
    let mut consumed = vec![0usize; k];
    let mut pool: Vec<ExampleId> = Vec::new();
    for j in 0..k {
        let next_size = if j + 1 < k { sizes[j + 1] } else { 0 };
        let quota = (sizes[j] - next_size) as usize;
        pool.clear();
        for (deck, used) in decks.iter().zip(consumed.iter_mut()).take(j + 1) {
            pool.extend_from_slice(&deck[*used..*used + quota]);
            *used += quota;
        }
        rng.shuffle(&mut pool);
        stream.extend_from_slice(&pool);
        phase_ends.push(stream.len());
    }
    debug_assert_eq!(stream.len(), assignment.len());
    Ok(CurriculumStream { stream, phase_ends })
}

/// The 1-based phase containing stream position `offset`.
fn phase_at(phase_ends: &[usize], offset: usize) -> u32 {
    phase_ends.partition_point(|&end| end <= offset) as u32 + 1
}

/// Schedules examples easy-to-hard by draining difficulty bins phase by
/// phase; see the module docs for the drawing rule.
///
/// Bin sizes must be nonincreasing from easiest to hardest, or
/// [`ScheduleError::NonMonotoneBins`] is returned. Batches may straddle
/// phase boundaries and are annotated with the phase of their first
/// example.
pub fn curriculum_schedule(
    assignment: &BinAssignment,
    batch_size: u32,
    seed: u64,
) -> Result<Schedule> {
    check_common(assignment.len(), batch_size)?;
    let CurriculumStream { stream, phase_ends } = curriculum_stream(assignment, seed)?;
    let mut batches = cut(&stream, batch_size);
    let mut offset = 0usize;
    for batch in batches.iter_mut() {
        batch.annotation = Some(Annotation::Phase(phase_at(&phase_ends, offset)));
        offset += batch.ids.len();
    }
    Ok(assemble(
        meta(Strategy::Curriculum, batch_size, seed, assignment.len()),
        batches,
    ))
}

/// The curriculum stream reversed at the example level and re-cut, so the
/// hardest bin's unique contribution comes first and the final
/// `s_1 − s_2` examples are all from the easiest bin.
///
/// The underlying draws are identical to [`curriculum_schedule`] with the
/// same seed; only the presentation order changes. Phase annotations are
/// not carried over because the reversed batches no longer follow the
/// drawing rule.
pub fn reverse_curriculum_schedule(
    assignment: &BinAssignment,
    batch_size: u32,
    seed: u64,
) -> Result<Schedule> {
    check_common(assignment.len(), batch_size)?;
    let CurriculumStream { mut stream, .. } = curriculum_stream(assignment, seed)?;
    stream.reverse();
    let batches = cut(&stream, batch_size);
    Ok(assemble(
        meta(
            Strategy::ReverseCurriculum,
            batch_size,
            seed,
            assignment.len(),
        ),
        batches,
    ))
}

/// How a follow-up epoch arranges the same examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContinuationMode {
    /// Run the curriculum again under the new seed.
    RestartCurriculum,
    /// Plain uniform shuffle under the new seed.
    Shuffled,
}

/// Builds the next epoch's schedule from a finished one.
///
/// The result covers the same `n` examples with the same batch size, uses
/// `seed` for its own draws and records `first_epoch`'s epoch plus one.
/// Restarting a curriculum needs the bin assignment again and inherits the
/// first epoch's feature and threshold metadata.
pub fn continuation(
    first_epoch: &Schedule,
    mode: ContinuationMode,
    assignment: Option<&BinAssignment>,
    seed: u64,
) -> Result<Schedule> {
    let prev = first_epoch.meta();
    let next = match mode {
        ContinuationMode::Shuffled => {
            shuffle_schedule(prev.n as usize, prev.batch_size, seed)?
        }
        ContinuationMode::RestartCurriculum => {
            let assignment = assignment.ok_or(ScheduleError::MissingAssignment)?;
            if assignment.len() as u64 != prev.n {
                return Err(ScheduleError::AssignmentMismatch {
                    assigned: assignment.len(),
                    expected: prev.n,
                });
            }
            curriculum_schedule(assignment, prev.batch_size, seed)?
                .with_feature(prev.feature.clone())
                .with_thresholds(prev.thresholds.clone())
        }
    };
    Ok(next.with_epoch(prev.epoch + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binning::BinSpec;
    use crate::schedule::Annotation;

    fn assert_permutation(schedule: &Schedule, n: usize) {
        let mut seen = vec![false; n];
        for id in schedule.flattened() {
            assert!(!seen[id as usize], "id {id} scheduled twice");
            seen[id as usize] = true;
        }
        assert!(seen.iter().all(|&s| s), "some id never scheduled");
    }

    #[test]
    fn shuffle_covers_everything_once() {
        let schedule = shuffle_schedule(103, 8, 5).unwrap();
        assert_permutation(&schedule, 103);
        assert_eq!(schedule.n_batches(), 13);
        assert_eq!(schedule.batches().last().unwrap().ids.len(), 103 % 8);
    }

    #[test]
    fn shuffle_is_deterministic_per_seed() {
        let a = shuffle_schedule(50, 7, 11).unwrap();
        let b = shuffle_schedule(50, 7, 11).unwrap();
        let c = shuffle_schedule(50, 7, 12).unwrap();
        assert_eq!(a.to_bytes(), b.to_bytes());
        assert_ne!(a.to_bytes(), c.to_bytes());
    }

    #[test]
    fn single_example_single_batch() {
        let schedule = shuffle_schedule(1, 64, 0).unwrap();
        assert_eq!(schedule.n_batches(), 1);
        assert_eq!(schedule.batches()[0].ids, vec![0]);
    }

    #[test]
    fn empty_input_and_zero_batch_size_are_rejected() {
        assert!(matches!(
            shuffle_schedule(0, 8, 0).unwrap_err(),
            ScheduleError::EmptyInput
        ));
        assert!(matches!(
            shuffle_schedule(5, 0, 0).unwrap_err(),
            ScheduleError::InvalidBatchSize
        ));
    }

    #[test]
    fn sorted_orders_by_value_then_id() {
        let values = [3u32, 1, 2];
        let asc = sorted_schedule(&values, 1, true).unwrap();
        let ids: Vec<Vec<ExampleId>> =
            asc.batches().iter().map(|b| b.ids.clone()).collect();
        assert_eq!(ids, vec![vec![1], vec![2], vec![0]]);

        let desc = sorted_schedule(&values, 1, false).unwrap();
        let ids: Vec<Vec<ExampleId>> =
            desc.batches().iter().map(|b| b.ids.clone()).collect();
        assert_eq!(ids, vec![vec![0], vec![2], vec![1]]);
    }

    #[test]
    fn sorted_ties_fall_back_to_id_order() {
        let values = [5u32, 5, 5, 1];
        let schedule = sorted_schedule(&values, 4, true).unwrap();
        assert_eq!(schedule.batches()[0].ids, vec![3, 0, 1, 2]);
    }

    #[test]
    fn buckets_are_homogeneous_and_fully_counted() {
        // Keys with deliberately unequal bucket sizes.
        let keys: Vec<u32> = (0..97).map(|i| i % 5).collect();
        let schedule = bucket_schedule(&keys, 8, 3).unwrap();
        assert_permutation(&schedule, keys.len());
        let mut expected_batches = 0usize;
        for key in 0..5u32 {
            let len = keys.iter().filter(|&&k| k == key).count();
            expected_batches += len.div_ceil(8);
        }
        assert_eq!(schedule.n_batches(), expected_batches);
        for batch in schedule.batches() {
            let Some(Annotation::Bucket(key)) = batch.annotation else {
                panic!("bucket batch lacks its key annotation");
            };
            assert!(batch.ids.iter().all(|&id| keys[id as usize] == key));
        }
    }

    #[test]
    fn bucket_label_multiset_is_seed_independent() {
        let keys: Vec<u32> = (0..60).map(|i| i % 4).collect();
        let labels = |seed: u64| {
            let mut labels: Vec<u32> = bucket_schedule(&keys, 7, seed)
                .unwrap()
                .batches()
                .iter()
                .map(|b| match b.annotation {
                    Some(Annotation::Bucket(k)) => k,
                    _ => unreachable!(),
                })
                .collect();
            labels.sort_unstable();
            labels
        };
        let order = |seed: u64| -> Vec<u32> {
            bucket_schedule(&keys, 7, seed)
                .unwrap()
                .batches()
                .iter()
                .map(|b| match b.annotation {
                    Some(Annotation::Bucket(k)) => k,
                    _ => unreachable!(),
                })
                .collect()
        };
        assert_eq!(labels(1), labels(2));
        assert_ne!(order(1), order(2), "group order should depend on the seed");
    }

    fn assignment_for_sizes(sizes: &[u64]) -> crate::binning::BinAssignment {
        // Bin i+1 gets value 10*i+5 under thresholds 10,20,30,…
        let mut values = Vec::new();
        for (i, &s) in sizes.iter().enumerate() {
            values.extend(std::iter::repeat(10 * i as u32 + 5).take(s as usize));
        }
        let thresholds: Vec<u32> = (1..sizes.len() as u32).map(|i| 10 * i).collect();
        let spec = BinSpec::new(if thresholds.is_empty() {
            vec![u32::MAX]
        } else {
            thresholds
        })
        .unwrap();
        spec.assign(&values)
    }

    #[test]
    fn curriculum_follows_the_drawing_rule() {
        let assignment = assignment_for_sizes(&[5, 3, 2]);
        let schedule = curriculum_schedule(&assignment, 4, 21).unwrap();
        assert_permutation(&schedule, 10);

        // Phase extents: 2, then 2, then 6 examples.
        let stream = schedule.flattened();
        let count_bins = |slice: &[ExampleId]| {
            let mut counts = vec![0u64; assignment.bin_count()];
            for &id in slice {
                counts[(assignment.bin_of(id) - 1) as usize] += 1;
            }
            counts
        };
        assert_eq!(count_bins(&stream[0..2]), vec![2, 0, 0]);
        assert_eq!(count_bins(&stream[2..4]), vec![1, 1, 0]);
        assert_eq!(count_bins(&stream[4..10]), vec![2, 2, 2]);
    }

    #[test]
    fn curriculum_batches_carry_their_starting_phase() {
        let assignment = assignment_for_sizes(&[5, 3, 2]);
        let schedule = curriculum_schedule(&assignment, 4, 21).unwrap();
        // Offsets 0, 4, 8 against phase ends [2, 4, 10].
        let phases: Vec<u32> = schedule
            .batches()
            .iter()
            .map(|b| match b.annotation {
                Some(Annotation::Phase(p)) => p,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(phases, vec![1, 3, 3]);
    }

    #[test]
    fn curriculum_rejects_growing_bins() {
        let assignment = assignment_for_sizes(&[3, 5]);
        let err = curriculum_schedule(&assignment, 4, 0).unwrap_err();
        match err {
            ScheduleError::NonMonotoneBins {
                first_violation,
                sizes,
            } => {
                assert_eq!(first_violation, 2);
                assert_eq!(sizes, vec![3, 5]);
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn single_bin_is_one_phase() {
        let assignment = assignment_for_sizes(&[7]);
        let schedule = curriculum_schedule(&assignment, 3, 2).unwrap();
        assert_permutation(&schedule, 7);
        for batch in schedule.batches() {
            assert_eq!(batch.annotation, Some(Annotation::Phase(1)));
        }
    }

    #[test]
    fn trailing_empty_bins_contribute_nothing() {
        let assignment = assignment_for_sizes(&[4, 2, 0, 0]);
        let schedule = curriculum_schedule(&assignment, 2, 9).unwrap();
        assert_permutation(&schedule, 6);
    }

    #[test]
    fn reversed_curriculum_is_the_exact_reverse() {
        let assignment = assignment_for_sizes(&[5, 3, 2]);
        let forward = curriculum_schedule(&assignment, 4, 21).unwrap();
        let reversed = reverse_curriculum_schedule(&assignment, 4, 21).unwrap();
        let mut forward_stream = forward.flattened();
        forward_stream.reverse();
        assert_eq!(reversed.flattened(), forward_stream);
        assert_permutation(&reversed, 10);

        // The unique hardest-phase prefix mirrors the easiest-phase suffix.
        let stream = reversed.flattened();
        let tail = &stream[stream.len() - 2..];
        assert!(tail.iter().all(|&id| assignment.bin_of(id) == 1));
    }

    #[test]
    fn continuation_increments_the_epoch() {
        let assignment = assignment_for_sizes(&[5, 3, 2]);
        let first = curriculum_schedule(&assignment, 4, 21)
            .unwrap()
            .with_thresholds(Some(vec![10, 20]));
        let restart = continuation(
            &first,
            ContinuationMode::RestartCurriculum,
            Some(&assignment),
            99,
        )
        .unwrap();
        assert_eq!(restart.meta().epoch, 2);
        assert_eq!(restart.meta().seed, 99);
        assert_eq!(restart.meta().thresholds, Some(vec![10, 20]));
        assert_eq!(
            restart.flattened(),
            curriculum_schedule(&assignment, 4, 99).unwrap().flattened()
        );

        let shuffled = continuation(&first, ContinuationMode::Shuffled, None, 7).unwrap();
        assert_eq!(shuffled.meta().epoch, 2);
        assert_eq!(
            shuffled.flattened(),
            shuffle_schedule(10, 4, 7).unwrap().flattened()
        );
    }

    #[test]
    fn curriculum_restart_demands_its_assignment() {
        let first = shuffle_schedule(10, 4, 1).unwrap();
        assert!(matches!(
            continuation(&first, ContinuationMode::RestartCurriculum, None, 2).unwrap_err(),
            ScheduleError::MissingAssignment
        ));
        let wrong = assignment_for_sizes(&[3, 2]);
        assert!(matches!(
            continuation(
                &first,
                ContinuationMode::RestartCurriculum,
                Some(&wrong),
                2
            )
            .unwrap_err(),
            ScheduleError::AssignmentMismatch { assigned: 5, .. }
        ));
    }
}

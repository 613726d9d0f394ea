//! Threshold binning of integer feature values.
//!
//! A [`BinSpec`] holds strictly ascending thresholds `t_1 < … < t_m` that
//! carve feature values into `m + 1` bins: a value `v` lands in the first
//! bin `i` with `v <= t_i` (upper bounds inclusive), or in bin `m + 1` when
//! it exceeds every threshold. Bin indices are 1-based throughout.
//!
//! Difficulty curricula additionally require that bin sizes never increase
//! from easy to hard. [`BinAssignment::validate_monotone`] checks that law,
//! and [`adjust_thresholds`] repairs a spec that violates it by greedily
//! merging each offending bin into its predecessor until the sizes are
//! nonincreasing. The repair is deterministic: scan sizes left to right,
//! drop the threshold separating the first oversized bin from the bin before
//! it, recompute, repeat. In the worst case all thresholds are dropped and a
//! single bin remains, which is trivially monotone, so the loop always
//! terminates.

use std::fmt;
use std::str::FromStr;

use crate::ExampleId;

/// Errors raised when building or adjusting bin specifications.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BinError {
    /// A spec with no thresholds at all.
    #[error("a bin spec needs at least one threshold")]
    Empty,
    /// Thresholds that are not strictly ascending.
    #[error("thresholds must be strictly ascending: {prev} then {next} at position {position}")]
    NotAscending {
        /// Threshold before the violation.
        prev: u32,
        /// Offending threshold.
        next: u32,
        /// 0-based position of the offending threshold.
        position: usize,
    },
    /// A threshold list that could not be parsed from text.
    #[error("malformed threshold {text:?}: expected a comma-separated list of integers")]
    Malformed {
        /// The fragment that failed to parse.
        text: String,
    },
}

/// Strictly ascending inclusive upper bounds defining `len() + 1` bins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinSpec {
    thresholds: Vec<u32>,
}

impl BinSpec {
    /// Validates and wraps a threshold list.
    pub fn new(thresholds: Vec<u32>) -> Result<Self, BinError> {
        if thresholds.is_empty() {
            return Err(BinError::Empty);
        }
        for (i, pair) in thresholds.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(BinError::NotAscending {
                    prev: pair[0],
                    next: pair[1],
                    position: i + 1,
                });
            }
        }
        Ok(Self { thresholds })
    }

    /// The thresholds, ascending.
    pub fn thresholds(&self) -> &[u32] {
        &self.thresholds
    }

    /// Number of bins, always one more than the threshold count.
    pub fn bin_count(&self) -> usize {
        self.thresholds.len() + 1
    }

    /// The 1-based bin for `value`: the first bin whose inclusive upper
    /// bound admits it, or the overflow bin past the last threshold.
    pub fn bin_for(&self, value: u32) -> u32 {
        self.thresholds.partition_point(|&t| t < value) as u32 + 1
    }

    /// Assigns every value in `values` to its bin and tallies bin sizes.
    pub fn assign(&self, values: &[u32]) -> BinAssignment {
        let mut sizes = vec![0u64; self.bin_count()];
        let bins: Vec<u32> = values
            .iter()
            .map(|&v| {
                let bin = self.bin_for(v);
                sizes[(bin - 1) as usize] += 1;
                bin
            })
            .collect();
        BinAssignment { bins, sizes }
    }
}

impl fmt::Display for BinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.thresholds.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for BinSpec {
    type Err = BinError;

    /// Parses a comma-separated threshold list such as `8,12,16,20,40`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let thresholds = s
            .split(',')
            .map(|part| {
                part.trim().parse::<u32>().map_err(|_| BinError::Malformed {
                    text: part.to_owned(),
                })
            })
            .collect::<Result<Vec<u32>, BinError>>()?;
        Self::new(thresholds)
    }
}

/// Per-example bin indices plus the resulting bin sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinAssignment {
    /// 1-based bin index per example id.
    bins: Vec<u32>,
    /// Example count per bin, index 0 holding bin 1.
    sizes: Vec<u64>,
}

impl BinAssignment {
    /// Number of examples assigned.
    pub fn len(&self) -> usize {
        self.bins.len()
    }

    /// True when no examples were assigned.
    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Number of bins, including empty ones.
    pub fn bin_count(&self) -> usize {
        self.sizes.len()
    }

    /// The 1-based bin of one example.
    pub fn bin_of(&self, id: ExampleId) -> u32 {
        self.bins[id as usize]
    }

    /// 1-based bin index per example id.
    pub fn bins(&self) -> &[u32] {
        &self.bins
    }

    /// Example count per bin; index 0 holds bin 1.
    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// Checks that bin sizes never increase from bin 1 upward.
    pub fn validate_monotone(&self) -> MonotoneReport {
        let first_violation = self
            .sizes
            .windows(2)
            .position(|w| w[1] > w[0])
            .map(|i| i + 2);
        MonotoneReport {
            sizes: self.sizes.clone(),
            first_violation,
        }
    }
}

/// Outcome of a monotonicity check over bin sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneReport {
    /// Example count per bin, index 0 holding bin 1.
    pub sizes: Vec<u64>,
    /// 1-based index of the first bin larger than its predecessor, if any.
    pub first_violation: Option<usize>,
}

impl MonotoneReport {
    /// True when sizes are nonincreasing.
    pub fn is_monotone(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Repairs `spec` so that the sizes of `values`'s bins are nonincreasing.
///
/// Repeatedly finds the first bin whose size exceeds its predecessor's and
/// removes the threshold between the two, merging them; a spec that is
/// already monotone is returned unchanged. At least one bin always remains.
pub fn adjust_thresholds(values: &[u32], spec: &BinSpec) -> BinSpec {
    let mut thresholds = spec.thresholds().to_vec();
    let mut sizes = spec.assign(values).sizes;
    loop {
        match sizes.windows(2).position(|w| w[1] > w[0]) {
            None => break,
            Some(i) => {
                // Bin i+2 (1-based) outgrew bin i+1; drop the threshold
                // between them and pour the later bin into the earlier one.
                sizes[i] += sizes[i + 1];
                sizes.remove(i + 1);
                thresholds.remove(i);
            }
        }
    }
    match BinSpec::new(thresholds) {
        Ok(spec) => spec,
        // All thresholds were removed: a single unbounded bin remains. Its
        // representation still needs one threshold, so use the maximum value
        // (every value satisfies `v <= u32::MAX`, leaving the overflow bin
        // empty).
        Err(_) => BinSpec::new(vec![u32::MAX]).expect("constant spec is valid"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(ts: &[u32]) -> BinSpec {
        BinSpec::new(ts.to_vec()).unwrap()
    }

    #[test]
    fn rejects_empty_and_non_ascending() {
        assert_eq!(BinSpec::new(vec![]).unwrap_err(), BinError::Empty);
        assert!(matches!(
            BinSpec::new(vec![8, 8]).unwrap_err(),
            BinError::NotAscending { position: 1, .. }
        ));
        assert!(matches!(
            BinSpec::new(vec![12, 8]).unwrap_err(),
            BinError::NotAscending { .. }
        ));
    }

    #[test]
    fn upper_bounds_are_inclusive() {
        let s = spec(&[8, 12, 16, 20, 40]);
        assert_eq!(s.bin_for(1), 1);
        assert_eq!(s.bin_for(8), 1);
        assert_eq!(s.bin_for(9), 2);
        assert_eq!(s.bin_for(12), 2);
        assert_eq!(s.bin_for(40), 5);
        assert_eq!(s.bin_for(41), 6);
        assert_eq!(s.bin_count(), 6);
    }

    #[test]
    fn assign_counts_sizes() {
        let s = spec(&[2, 4]);
        let a = s.assign(&[1, 2, 3, 4, 5, 1]);
        assert_eq!(a.bins(), &[1, 1, 2, 2, 3, 1]);
        assert_eq!(a.sizes(), &[3, 2, 1]);
        assert_eq!(a.bin_of(4), 3);
    }

    #[test]
    fn monotone_check_reports_first_offender() {
        let s = spec(&[1, 2]);
        // Sizes [1, 2, 0]: bin 2 outgrows bin 1.
        let report = s.assign(&[1, 2, 2]).validate_monotone();
        assert!(!report.is_monotone());
        assert_eq!(report.first_violation, Some(2));

        // Sizes [2, 1, 0] pass.
        let report = s.assign(&[1, 1, 2]).validate_monotone();
        assert!(report.is_monotone());
    }

    #[test]
    fn trailing_empty_bins_are_monotone() {
        let s = spec(&[10, 20, 30]);
        let report = s.assign(&[1, 2, 3]).validate_monotone();
        assert!(report.is_monotone());
        assert_eq!(report.sizes, vec![3, 0, 0, 0]);
    }

    #[test]
    fn parses_and_prints_threshold_lists() {
        let s: BinSpec = "8,12,16,20,40".parse().unwrap();
        assert_eq!(s.thresholds(), &[8, 12, 16, 20, 40]);
        assert_eq!(s.to_string(), "8,12,16,20,40");
        assert!(matches!(
            " 8, x".parse::<BinSpec>().unwrap_err(),
            BinError::Malformed { .. }
        ));
        assert!(matches!(
            "".parse::<BinSpec>().unwrap_err(),
            BinError::Malformed { .. }
        ));
    }

    #[test]
    fn adjust_merges_until_monotone() {
        // Two thresholds produce sizes [5, 3, 4]: bin 3 is too big, so t2
        // goes first ([5, 7], still bad), then t1, leaving a single bin.
        let mut values = vec![1; 5];
        values.extend(vec![11; 3]);
        values.extend(vec![21; 4]);
        let s = spec(&[10, 20]);
        let adjusted = adjust_thresholds(&values, &s);
        assert_eq!(adjusted.bin_count(), 2);
        assert_eq!(adjusted.thresholds(), &[u32::MAX]);
        assert!(adjusted.assign(&values).validate_monotone().is_monotone());
        assert_eq!(adjusted.assign(&values).sizes(), &[12, 0]);
    }

    #[test]
    fn adjust_keeps_monotone_specs_unchanged() {
        let values = [1, 1, 1, 11, 11, 21];
        let s = spec(&[10, 20]);
        assert_eq!(adjust_thresholds(&values, &s), s);
    }

    #[test]
    fn adjust_handles_partial_merges() {
        // Sizes [4, 2, 3, 1]: only the third bin offends; merging it into
        // the second gives [4, 5, 1]... which then offends again, so the
        // result keeps collapsing left until monotone.
        let mut values = vec![1; 4];
        values.extend(vec![11; 2]);
        values.extend(vec![21; 3]);
        values.push(31);
        let s = spec(&[10, 20, 30]);
        let adjusted = adjust_thresholds(&values, &s);
        assert!(adjusted.assign(&values).validate_monotone().is_monotone());
        assert_eq!(adjusted.thresholds(), &[30]);
        assert_eq!(adjusted.assign(&values).sizes(), &[9, 1]);
    }

    #[test]
    fn adjust_result_is_a_fixed_point() {
        let values: Vec<u32> = (0..100).map(|i| (i * 7 + 3) % 50).collect();
        let s = spec(&[5, 10, 15, 20, 25]);
        let once = adjust_thresholds(&values, &s);
        let twice = adjust_thresholds(&values, &once);
        assert_eq!(once, twice);
        assert!(once.assign(&values).validate_monotone().is_monotone());
    }

    #[test]
    fn all_values_equal_collapse_to_one_populated_bin() {
        let values = vec![25u32; 10];
        let s = spec(&[8, 12, 16, 20, 40]);
        let adjusted = adjust_thresholds(&values, &s);
        let sizes = adjusted.assign(&values).sizes().to_vec();
        assert_eq!(sizes.iter().filter(|&&n| n > 0).count(), 1);
        assert_eq!(sizes[0], 10);
    }
}

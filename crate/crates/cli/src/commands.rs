//! Implementations of the five subcommands.
//!
//! Corpus text is never held in memory by `schedule` and `analyze`: both
//! stream sentence pairs and keep only one integer per pair (per measured
//! feature), so multi-million-pair corpora fit comfortably. `reorder` is
//! the exception by nature — it must load the text it rewrites.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use curbatch::binning::{adjust_thresholds, BinAssignment, BinSpec};
use curbatch::corpus::{self, CorpusReader, Side};
use curbatch::features::{
    self, Category, CountMethod, FeatureKind, Lexicon, RankScope, RankTable, Resources,
    TableScope,
};
use curbatch::metrics::{self, PhaseReport, ScheduleReport};
use curbatch::schedule::{Schedule, Strategy};
use curbatch::schedulers;
use curbatch::subword::{decode_bpe, learn_bpe_from_counts, BpeModel, Segmenter};

use crate::config::{Config, Effective};
use crate::{
    usage, AnalyzeArgs, BpeApplyArgs, BpeDecodeArgs, BpeLearnArgs, CliError, CorpusInputArgs,
    RanksArgs, ReorderArgs, ScheduleArgs,
};

/// Wraps an I/O failure on `path` as a data error.
fn file_err(path: &Path, e: io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

fn create_out(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| file_err(path, e))
}

fn open_in(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| file_err(path, e))
}

fn join_u32(values: &[u32]) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v}");
    }
    out
}

/// Builds the streaming corpus reader shared by schedule and analyze.
fn reader_from(input: &CorpusInputArgs, cfg: &Config) -> Result<CorpusReader, CliError> {
    let (Some(src), Some(tgt)) = (&input.src, &input.tgt) else {
        return Err(usage!(
            "a corpus (--src and --tgt) or a feature vector (--values) is required"
        ));
    };
    let mut reader = CorpusReader::new(src, tgt);
    if let Some(path) = &input.src_tags {
        reader = reader.tags(Side::Src, path);
    }
    if let Some(path) = &input.tgt_tags {
        reader = reader.tags(Side::Tgt, path);
    }
    let separator = match input.tag_separator {
        Some(c) => Some(c),
        None => match cfg.string("tag-separator")? {
            None => None,
            Some(s) => {
                let mut chars = s.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => Some(c),
                    _ => {
                        return Err(usage!(
                            "config key \"tag-separator\": expected a single character"
                        ))
                    }
                }
            }
        },
    };
    if let Some(c) = separator {
        reader = reader.tag_separator(c);
    }
    if let Some(limit) = input.max_tokens.or(cfg.u32("max-tokens")?) {
        reader = reader.max_tokens(limit as usize);
    }
    Ok(reader)
}

/// Parses a feature name as printed in schedule headers.
fn parse_feature(label: &str) -> Result<FeatureKind, CliError> {
    let kind = match label {
        "src-length" => FeatureKind::SrcLength,
        "tgt-length" => FeatureKind::TgtLength,
        "rank-src" => FeatureKind::WordRank {
            scope: RankScope::Src,
        },
        "rank-tgt" => FeatureKind::WordRank {
            scope: RankScope::Tgt,
        },
        "rank-max" => FeatureKind::WordRank {
            scope: RankScope::Max,
        },
        "rank-combined" => FeatureKind::WordRank {
            scope: RankScope::Combined,
        },
        other => {
            let parsed = other.split_once('-').and_then(|(side, category)| {
                let side = match side {
                    "src" => Side::Src,
                    "tgt" => Side::Tgt,
                    _ => return None,
                };
                let category = match category {
                    "conjunctions" => Category::Conjunction,
                    "nouns" => Category::Noun,
                    "proper-nouns" => Category::ProperNoun,
                    "verbs" => Category::Verb,
                    _ => return None,
                };
                Some((side, category))
            });
            let Some((side, category)) = parsed else {
                return Err(usage!(
                    "unknown feature {label:?}; expected src-length, tgt-length, \
                     rank-{{src,tgt,max,combined}}, or {{src,tgt}}-{{conjunctions,nouns,\
                     proper-nouns,verbs}}"
                ));
            };
            // Conjunctions match a lexicon of surface forms; the other
            // categories need part-of-speech tags.
            let method = if category == Category::Conjunction {
                CountMethod::Lexicon
            } else {
                CountMethod::TagPrefix(category.default_tag_prefix().to_owned())
            };
            FeatureKind::CategoryCount {
                side,
                category,
                method,
            }
        }
    };
    Ok(kind)
}

/// Feature resources loaded for this run; referenced via [`Resources`].
#[derive(Default)]
struct OwnedResources {
    lexicon: Option<Lexicon>,
    src: Option<RankTable>,
    tgt: Option<RankTable>,
    combined: Option<RankTable>,
}

impl OwnedResources {
    fn load(input: &CorpusInputArgs, kind: &FeatureKind) -> Result<Self, CliError> {
        let mut owned = Self::default();
        if matches!(
            kind,
            FeatureKind::CategoryCount {
                method: CountMethod::Lexicon,
                ..
            }
        ) {
            owned.lexicon = Some(match &input.lexicon {
                Some(path) => Lexicon::from_file(path)?,
                None => Lexicon::english_conjunctions(),
            });
        }
        if let Some(path) = &input.ranks_src {
            owned.src = Some(RankTable::read_from_file(path)?);
        }
        if let Some(path) = &input.ranks_tgt {
            owned.tgt = Some(RankTable::read_from_file(path)?);
        }
        if let Some(path) = &input.ranks_combined {
            owned.combined = Some(RankTable::read_from_file(path)?);
        }
        Ok(owned)
    }

    fn as_refs(&self) -> Resources<'_> {
        Resources {
            lexicon: self.lexicon.as_ref(),
            rank_src: self.src.as_ref(),
            rank_tgt: self.tgt.as_ref(),
            rank_combined: self.combined.as_ref(),
        }
    }
}

/// Streams the corpus once, extracting one value per pair per feature.
fn stream_features(
    reader: CorpusReader,
    kinds: &[FeatureKind],
    resources: &Resources,
) -> Result<Vec<Vec<u32>>, CliError> {
    let mut stream = reader.open()?;
    let mut columns: Vec<Vec<u32>> = kinds.iter().map(|_| Vec::new()).collect();
    for pair in stream.by_ref() {
        let pair = pair?;
        for (column, kind) in columns.iter_mut().zip(kinds) {
            let value = features::extract(&pair, kind, resources).map_err(|e| {
                CliError::from(features::FeatureError::AtExample {
                    id: pair.id,
                    source: Box::new(e),
                })
            })?;
            column.push(value);
        }
    }
    Ok(columns)
}

/// Streams the corpus once, validating alignment and counting pairs.
fn stream_count(reader: CorpusReader) -> Result<u64, CliError> {
    let mut stream = reader.open()?;
    let mut n = 0u64;
    for pair in stream.by_ref() {
        pair?;
        n += 1;
    }
    Ok(n)
}

/// Reads a feature vector file: one unsigned integer per line.
fn read_values_file(path: &Path) -> Result<Vec<u32>, CliError> {
    let reader = open_in(path)?;
    let mut values = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| file_err(path, e))?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let value = text.parse::<u32>().map_err(|_| {
            CliError::Data(format!(
                "{}:{}: not an unsigned integer: {text:?}",
                path.display(),
                i + 1
            ))
        })?;
        values.push(value);
    }
    Ok(values)
}

/// A spec giving every distinct value its own bin, for homogeneity checks
/// without explicit thresholds.
fn exact_value_spec(values: &[u32]) -> BinSpec {
    let mut distinct = values.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    BinSpec::new(distinct).expect("sorted distinct values are valid thresholds")
}

pub fn ranks(args: RanksArgs, cfg: &Config) -> Result<(), CliError> {
    let scope_text = args
        .scope
        .or(cfg.string("scope")?)
        .unwrap_or_else(|| "combined".to_owned());
    let scope = match scope_text.as_str() {
        "src" => TableScope::Src,
        "tgt" => TableScope::Tgt,
        "combined" => TableScope::Combined,
        other => return Err(usage!("--scope must be src, tgt, or combined, not {other:?}")),
    };
    let block_size = args
        .block_size
        .or(cfg.u32("block-size")?)
        .unwrap_or(5000);
    if block_size == 0 {
        return Err(usage!("--block-size must be at least 1"));
    }

    let mut stream = CorpusReader::new(&args.src, &args.tgt).open()?;
    let mut counts: HashMap<String, u64> = HashMap::new();
    for pair in stream.by_ref() {
        let pair = pair?;
        let sides: &[&[String]] = match scope {
            TableScope::Src => &[&pair.src_tokens],
            TableScope::Tgt => &[&pair.tgt_tokens],
            TableScope::Combined => &[&pair.src_tokens, &pair.tgt_tokens],
        };
        for tokens in sides {
            for token in *tokens {
                *counts.entry(token.clone()).or_insert(0) += 1;
            }
        }
    }
    let table = RankTable::from_counts(counts, block_size)?;

    let mut out = create_out(&args.out)?;
    writeln!(out, "#scope={}", scope.label()).map_err(|e| file_err(&args.out, e))?;
    table
        .write_to(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| file_err(&args.out, e))?;

    let mut eff = Effective::default();
    eff.push("scope", scope.label());
    eff.push("block-size", block_size);
    eff.push("words", table.len());
    eff.push("blocks", table.total_blocks());
    eff.push("out", args.out.display());
    eff.echo();
    Ok(())
}

pub fn bpe_learn(args: BpeLearnArgs, cfg: &Config) -> Result<(), CliError> {
    let target_size = args
        .target_size
        .or(cfg.u64("target-size")?)
        .unwrap_or(30_000);

    let mut stream = CorpusReader::new(&args.src, &args.tgt).open()?;
    let mut counts: HashMap<String, u64> = HashMap::new();
    for pair in stream.by_ref() {
        let pair = pair?;
        for token in pair.src_tokens.iter().chain(pair.tgt_tokens.iter()) {
            *counts.entry(token.clone()).or_insert(0) += 1;
        }
    }
    let model = learn_bpe_from_counts(counts, target_size as usize)?;

    let mut out = create_out(&args.out)?;
    writeln!(out, "#target_size={target_size}").map_err(|e| file_err(&args.out, e))?;
    model
        .write_to(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| file_err(&args.out, e))?;

    let mut eff = Effective::default();
    eff.push("target-size", target_size);
    eff.push("alphabet", model.alphabet_size());
    eff.push("merges", model.merges().len());
    eff.push("out", args.out.display());
    eff.echo();
    Ok(())
}

pub fn bpe_apply(args: BpeApplyArgs) -> Result<(), CliError> {
    let model = BpeModel::read_from_file(&args.model)?;
    let input = open_in(&args.input)?;
    let mut out = create_out(&args.output)?;
    let mut segmenter = Segmenter::new(&model);
    for line in input.lines() {
        let line = line.map_err(|e| file_err(&args.input, e))?;
        writeln!(out, "{}", segmenter.segment_line(&line)).map_err(|e| file_err(&args.output, e))?;
    }
    out.flush().map_err(|e| file_err(&args.output, e))?;

    let mut eff = Effective::default();
    eff.push("model", args.model.display());
    eff.push("merges", model.merges().len());
    eff.push("output", args.output.display());
    eff.echo();
    Ok(())
}

pub fn bpe_decode(args: BpeDecodeArgs) -> Result<(), CliError> {
    let input = open_in(&args.input)?;
    let mut out = create_out(&args.output)?;
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| file_err(&args.input, e))?;
        let units: Vec<&str> = line.split_whitespace().collect();
        let tokens = decode_bpe(&units)
            .map_err(|e| CliError::Data(format!("{}:{}: {e}", args.input.display(), i + 1)))?;
        writeln!(out, "{}", tokens.join(" ")).map_err(|e| file_err(&args.output, e))?;
    }
    out.flush().map_err(|e| file_err(&args.output, e))?;

    let mut eff = Effective::default();
    eff.push("output", args.output.display());
    eff.echo();
    Ok(())
}

pub fn schedule(args: ScheduleArgs, cfg: &Config) -> Result<(), CliError> {
    let strategy_text = args.strategy.or(cfg.string("strategy")?).ok_or_else(|| {
        usage!("--strategy is required: shuffle, bucket, curriculum, reverse-curriculum, or sorted")
    })?;
    let strategy = Strategy::from_tag(&strategy_text).ok_or_else(|| {
        usage!(
            "unknown strategy {strategy_text:?}; expected shuffle, bucket, curriculum, \
             reverse-curriculum, or sorted"
        )
    })?;
    let batch_size = args.batch_size.or(cfg.u32("batch-size")?).unwrap_or(64);
    let seed = args.seed.or(cfg.u64("seed")?).unwrap_or(0);
    let auto_adjust = args.auto_adjust || cfg.flag("auto-adjust")?;
    let descending = args.descending || cfg.flag("descending")?;
    let thresholds_text = args.thresholds.or(cfg.string("thresholds")?);
    let spec: Option<BinSpec> = thresholds_text.as_deref().map(str::parse).transpose()?;

    let needs_values = strategy != Strategy::Shuffle;
    let feature_text = args.input.feature.clone().or(cfg.string("feature")?);

    let (values, n, feature_label): (Option<Vec<u32>>, u64, Option<String>) =
        if let Some(values_path) = &args.input.values {
            if args.input.src.is_some() || args.input.tgt.is_some() {
                return Err(usage!("--values replaces --src/--tgt; give one or the other"));
            }
            let values = read_values_file(values_path)?;
            let n = values.len() as u64;
            if needs_values {
                (Some(values), n, Some("values".to_owned()))
            } else {
                (None, n, None)
            }
        } else {
            let reader = reader_from(&args.input, cfg)?;
            if needs_values {
                let label = feature_text.unwrap_or_else(|| "tgt-length".to_owned());
                let kind = parse_feature(&label)?;
                let owned = OwnedResources::load(&args.input, &kind)?;
                let mut columns = stream_features(reader, &[kind], &owned.as_refs())?;
                let values = columns.pop().expect("one requested feature");
                let n = values.len() as u64;
                (Some(values), n, Some(label))
            } else {
                (None, stream_count(reader)?, None)
            }
        };

    let schedule = match strategy {
        Strategy::Shuffle => schedulers::shuffle_schedule(n as usize, batch_size, seed)?,
        Strategy::Sorted => {
            let values = values.as_ref().expect("sorted needs values");
            schedulers::sorted_schedule(values, batch_size, !descending)?
        }
        Strategy::Bucket => {
            let values = values.as_ref().expect("bucket needs values");
            match &spec {
                // With thresholds, bucket by bin; otherwise every distinct
                // raw value is its own bucket.
                Some(spec) => {
                    let spec = if auto_adjust {
                        adjust_thresholds(values, spec)
                    } else {
                        spec.clone()
                    };
                    let assignment = spec.assign(values);
                    schedulers::bucket_schedule(assignment.bins(), batch_size, seed)?
                        .with_thresholds(Some(spec.thresholds().to_vec()))
                }
                None => schedulers::bucket_schedule(values, batch_size, seed)?,
            }
        }
        Strategy::Curriculum | Strategy::ReverseCurriculum => {
            let values = values.as_ref().expect("curriculum needs values");
            let spec = spec
                .as_ref()
                .ok_or_else(|| usage!("{} needs --thresholds to define its bins", strategy.tag()))?;
            let spec = if auto_adjust {
                adjust_thresholds(values, spec)
            } else {
                spec.clone()
            };
            let assignment = spec.assign(values);
            let built = if strategy == Strategy::Curriculum {
                schedulers::curriculum_schedule(&assignment, batch_size, seed)?
            } else {
                schedulers::reverse_curriculum_schedule(&assignment, batch_size, seed)?
            };
            built.with_thresholds(Some(spec.thresholds().to_vec()))
        }
    }
    .with_feature(feature_label);

    schedule.write_to_file(&args.out)?;

    let meta = schedule.meta();
    let mut eff = Effective::default();
    eff.push("strategy", meta.strategy.tag());
    eff.push("batch-size", meta.batch_size);
    eff.push("seed", meta.seed);
    eff.push("n", meta.n);
    eff.push_opt("feature", meta.feature.as_ref());
    eff.push_opt("thresholds", meta.thresholds.as_deref().map(join_u32));
    if auto_adjust {
        eff.push("auto-adjust", true);
    }
    if strategy == Strategy::Sorted {
        eff.push("descending", descending);
    }
    eff.push("out", args.out.display());
    eff.echo();
    Ok(())
}

/// The JSON document `analyze` emits: the configuration it ran with, the
/// flattened metric report, and the phase accounting when applicable.
#[derive(serde::Serialize)]
struct FullReport<'a> {
    config: &'a BTreeMap<String, String>,
    #[serde(flatten)]
    report: &'a ScheduleReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    phases: Option<&'a PhaseReport>,
}

pub fn analyze(args: AnalyzeArgs, cfg: &Config) -> Result<(), CliError> {
    let schedule = Schedule::read_from_file(&args.schedule)?;
    let meta = schedule.meta().clone();

    let padding_side = {
        let text = args
            .padding_side
            .clone()
            .or(cfg.string("padding-side")?)
            .unwrap_or_else(|| "tgt".to_owned());
        match text.as_str() {
            "src" => Side::Src,
            "tgt" => Side::Tgt,
            other => return Err(usage!("--padding-side must be src or tgt, not {other:?}")),
        }
    };

    let feature_text = args.input.feature.clone().or(cfg.string("feature")?);
    let (values, lengths, observed_n, feature_label) = if let Some(values_path) =
        &args.input.values
    {
        if args.input.src.is_some() || args.input.tgt.is_some() {
            return Err(usage!("--values replaces --src/--tgt; give one or the other"));
        }
        let values = read_values_file(values_path)?;
        let n = values.len() as u64;
        // With no corpus, the supplied values double as the lengths.
        (
            Some(values.clone()),
            Some(values),
            Some(n),
            Some("values".to_owned()),
        )
    } else if args.input.src.is_some() || args.input.tgt.is_some() {
        // Prefer the feature the schedule was built with.
        let label = feature_text
            .or_else(|| meta.feature.clone().filter(|f| f != "values"))
            .unwrap_or_else(|| "tgt-length".to_owned());
        let kind = parse_feature(&label)?;
        let length_kind = match padding_side {
            Side::Src => FeatureKind::SrcLength,
            Side::Tgt => FeatureKind::TgtLength,
        };
        let owned = OwnedResources::load(&args.input, &kind)?;
        let reader = reader_from(&args.input, cfg)?;
        let mut columns = stream_features(reader, &[kind, length_kind], &owned.as_refs())?;
        let lengths = columns.pop().expect("two requested features");
        let values = columns.pop().expect("two requested features");
        let n = values.len() as u64;
        (Some(values), Some(lengths), Some(n), Some(label))
    } else {
        (None, None, None, None)
    };

    let n = args
        .n
        .or(cfg.u64("n")?)
        .or(observed_n)
        .unwrap_or(meta.n);

    let thresholds_text = args.thresholds.or(cfg.string("thresholds")?);
    let flag_spec: Option<BinSpec> = thresholds_text.as_deref().map(str::parse).transpose()?;
    let spec: Option<BinSpec> = match (flag_spec, &meta.thresholds) {
        (Some(spec), _) => Some(spec),
        (None, Some(thresholds)) => Some(
            BinSpec::new(thresholds.clone())
                .map_err(|e| CliError::Data(format!("schedule thresholds header: {e}")))?,
        ),
        (None, None) => None,
    };
    let assignment: Option<BinAssignment> = values
        .as_ref()
        .filter(|v| !v.is_empty())
        .map(|v| match &spec {
            Some(spec) => spec.assign(v),
            None => exact_value_spec(v).assign(v),
        });

    let report = metrics::compile_report(
        &schedule,
        n,
        values.as_deref(),
        lengths.as_deref(),
        assignment.as_ref(),
    );

    // Out-of-range ids would index past the assignment, so a schedule that
    // failed that part of the audit gets no phase accounting.
    let phases: Option<PhaseReport> = if (args.phases || meta.strategy == Strategy::Curriculum)
        && report.out_of_range_ids.is_empty()
    {
        match &assignment {
            Some(a)
                if a.validate_monotone().is_monotone() && a.len() as u64 == meta.n =>
            {
                Some(metrics::phase_report(&schedule, a)?)
            }
            Some(_) if args.phases => {
                return Err(CliError::Precondition(
                    "phase report needs the bins the curriculum was built with \
                     (nonincreasing sizes covering the schedule)"
                        .to_owned(),
                ))
            }
            None if args.phases => {
                return Err(usage!("--phases needs feature values: give --values or a corpus"))
            }
            _ => None,
        }
    } else {
        None
    };

    let mut config = BTreeMap::new();
    config.insert("strategy".to_owned(), meta.strategy.tag().to_owned());
    config.insert("batch-size".to_owned(), meta.batch_size.to_string());
    config.insert("seed".to_owned(), meta.seed.to_string());
    config.insert("epoch".to_owned(), meta.epoch.to_string());
    config.insert("n".to_owned(), n.to_string());
    if let Some(label) = &feature_label {
        config.insert("feature".to_owned(), label.clone());
    }
    if let Some(spec) = &spec {
        config.insert("thresholds".to_owned(), join_u32(spec.thresholds()));
    }
    if lengths.is_some() {
        config.insert("padding-side".to_owned(), padding_side.name().to_owned());
    }

    let full = FullReport {
        config: &config,
        report: &report,
        phases: phases.as_ref(),
    };
    let json = serde_json::to_string_pretty(&full)
        .expect("reports always serialize")
        + "\n";
    match &args.report {
        Some(path) => {
            let mut out = create_out(path)?;
            out.write_all(json.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| file_err(path, e))?;
        }
        None => {
            io::stdout()
                .write_all(json.as_bytes())
                .map_err(|e| CliError::Data(format!("stdout: {e}")))?;
        }
    }

    if let Some(curve_path) = &args.curve {
        let Some(values) = values.as_deref() else {
            return Err(usage!("--curve needs feature values: give --values or a corpus"));
        };
        let curve = metrics::complexity_curve(&schedule, values);
        let headers: Vec<(&str, String)> = config
            .iter()
            .map(|(k, v)| (k.as_str(), v.clone()))
            .collect();
        let mut out = create_out(curve_path)?;
        metrics::write_complexity_csv(&mut out, &curve, &headers)
            .and_then(|_| out.flush())
            .map_err(|e| file_err(curve_path, e))?;
    }

    let mut eff = Effective::default();
    eff.push("schedule", args.schedule.display());
    for (key, value) in &config {
        eff.push(key, value);
    }
    eff.push_opt("report", args.report.as_ref().map(|p| p.display()));
    eff.push_opt("curve", args.curve.as_ref().map(|p| p.display()));
    eff.echo();

    if !report.coverage_ok {
        return Err(CliError::Data(format!(
            "schedule does not cover the corpus exactly once: {} duplicated, {} missing, \
             {} out of range (details in the report)",
            report.duplicate_ids.len(),
            report.missing_ids.len(),
            report.out_of_range_ids.len()
        )));
    }
    Ok(())
}

pub fn reorder(args: ReorderArgs) -> Result<(), CliError> {
    let schedule = Schedule::read_from_file(&args.schedule)?;
    let mut reader = CorpusReader::new(&args.src, &args.tgt);
    if let Some(limit) = args.max_tokens {
        reader = reader.max_tokens(limit as usize);
    }
    let loaded = reader.load()?;
    let order = schedule.flattened();
    corpus::write_reordered(&loaded, &order, &args.out_src, &args.out_tgt)?;

    // Reordered corpora are plain parallel text with no header syntax, so
    // the configuration echo below is the only record of this run.
    let meta = schedule.meta();
    let mut eff = Effective::default();
    eff.push("schedule", args.schedule.display());
    eff.push("strategy", meta.strategy.tag());
    eff.push("n", meta.n);
    eff.push("out-src", args.out_src.display());
    eff.push("out-tgt", args.out_tgt.display());
    eff.echo();
    Ok(())
}

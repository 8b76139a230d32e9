use std::borrow::Cow;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use edittag::edit2seq::{edit2seq, edit2seq_lenient};
use edittag::eval::{evaluate, Metric};
use edittag::labels::LabeledExample;
use edittag::lexicon::load_patterns;
use edittag::noiser::{generate_corpus, read_edit_dictionary, EditDictionary, NoiseProfile, Noiser};
use edittag::tagger::{self, FeatureEncoder, MultiHeadModel, TrainConfig, Tweaks, DEFAULT_TEMPLATES};
use edittag::types::TagFamily;
use edittag::{tokenize, EditSequence, EditTag, Lexicon, PatternInventories, RefineOptions, Seq2Edit, Sentence, TagSet};
use log::{info, warn};
use serde::Serialize;

use crate::lines::{data_err, open, process, CliResult, Failure, Output};
use crate::{
    ApplyArgs, CoverageArgs, HeadCount, MetricArg, NoiseArgs, PredictArgs, ScoreArgs, TagArgs, TrainArgs,
};

fn load_tagset(path: &Option<PathBuf>) -> CliResult<Cow<'static, TagSet>> {
    match path {
        Some(p) => Ok(Cow::Owned(TagSet::load(p).map_err(|e| data_err(p, e))?)),
        None => Ok(Cow::Borrowed(TagSet::default_tagset())),
    }
}

fn load_lexicon(dir: &Option<PathBuf>) -> CliResult<Cow<'static, Lexicon>> {
    match dir {
        Some(d) => Ok(Cow::Owned(Lexicon::load_dir(d)?)),
        None => Ok(Cow::Borrowed(Lexicon::bundled())),
    }
}

fn load_inventories(dir: &Option<PathBuf>) -> CliResult<Cow<'static, PatternInventories>> {
    match dir {
        Some(d) => Ok(Cow::Owned(load_patterns(d)?)),
        None => Ok(Cow::Borrowed(PatternInventories::bundled())),
    }
}

fn split_pair(line: &str) -> Result<(Sentence, Sentence), String> {
    let (src, tgt) = line
        .split_once('\t')
        .ok_or_else(|| "expected source<TAB>target".to_string())?;
    let src = tokenize(src);
    if src.is_empty() {
        return Err("empty source sentence".into());
    }
    Ok((src, tokenize(tgt)))
}

fn converter<'a>(lexicon: &'a Lexicon, tagset: &'a TagSet, no_char: bool) -> Seq2Edit<'a> {
    let c = Seq2Edit::new(lexicon, tagset);
    if no_char {
        c.without_char_transforms()
    } else {
        c
    }
}

pub fn tag(a: TagArgs) -> CliResult {
    let tagset = load_tagset(&a.tagset)?;
    let lexicon = load_lexicon(&a.lexicon)?;
    let conv = converter(&lexicon, &tagset, a.no_char_transforms);
    let mut out = Output::create(&a.out)?;
    process(
        &[&a.src_tgt],
        |l| {
            let (src, tgt) = split_pair(&l[0])?;
            let edits = conv.convert(&src, &tgt).map_err(|e| e.to_string())?;
            let ex = LabeledExample::new(src, &edits).map_err(|e| e.to_string())?;
            Ok(ex.to_json_line() + "\n")
        },
        |s| out.write_str(&s),
    )?;
    out.finish()
}

fn parse_edits(line: &str) -> Result<EditSequence, String> {
    if line.trim_start().starts_with('{') {
        Ok(LabeledExample::from_json_line(line)?.labels.correction)
    } else {
        line.parse::<EditSequence>().map_err(|e| e.to_string())
    }
}

pub fn apply(a: ApplyArgs) -> CliResult {
    let lexicon = load_lexicon(&a.lexicon)?;
    let mut out = Output::create(&a.out)?;
    process(
        &[&a.src, &a.edits],
        |l| {
            let src = tokenize(&l[0]);
            let edits = parse_edits(&l[1])?;
            let hyp = if a.lenient {
                let (hyp, skipped) = edit2seq_lenient(&src, &edits, &lexicon).map_err(|e| e.to_string())?;
                for s in skipped {
                    warn!("{s}");
                }
                hyp
            } else {
                edit2seq(&src, &edits, &lexicon).map_err(|e| e.to_string())?
            };
            Ok(format!("{hyp}\n"))
        },
        |s| out.write_str(&s),
    )?;
    out.finish()
}

pub fn noise(a: NoiseArgs) -> CliResult {
    let mut profile = match &a.profile {
        Some(p) => NoiseProfile::load(p).map_err(|e| data_err(p, e))?,
        None => NoiseProfile::bundled(),
    };
    if let Some(seed) = a.seed {
        profile.seed = seed;
    }
    let lexicon = load_lexicon(&a.lexicon)?;
    let patterns = load_inventories(&a.lexicon)?;
    let dict = match &a.dict {
        Some(p) => read_edit_dictionary(open(p)?, &p.display().to_string())?,
        None => EditDictionary::new(),
    };
    let noiser = Noiser::new(&profile, &dict, &lexicon, &patterns, TagSet::default_tagset())?;
    let mut out = Output::create(&a.out)?;
    let stats = generate_corpus(open(&a.input)?, out.writer(), &noiser).map_err(|e| data_err(&a.input, e))?;
    out.finish()?;
    info!("{} lines, {} errors", stats.lines, stats.realized_errors);
    if let Some(p) = &a.stats {
        let mut s = Output::create(p)?;
        s.write_str(&(stats.to_json() + "\n"))?;
        s.finish()?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TrainSummary {
    examples: usize,
    tags: usize,
    heads: Vec<&'static str>,
    parameters: usize,
    steps: usize,
    losses: Vec<f64>,
}

pub fn train_toy(a: TrainArgs) -> CliResult {
    if !(0.0..=1.0).contains(&a.lambda) {
        return Err(Failure::Usage(format!("--lambda {} outside [0, 1]", a.lambda)));
    }
    if a.batch_size == 0 || a.dim == 0 {
        return Err(Failure::Usage("--batch-size and --dim must be positive".into()));
    }
    let base = load_tagset(&a.tagset)?;
    let mut examples = Vec::new();
    process(
        &[&a.data],
        |l| {
            if l[0].trim().is_empty() {
                return Ok(None);
            }
            LabeledExample::from_json_line(&l[0]).map(Some)
        },
        |ex| {
            examples.extend(ex);
            Ok(())
        },
    )?;
    if examples.is_empty() {
        return Err(data_err(&a.data, "no training examples"));
    }
    let tagset = if a.full_tagset {
        base.into_owned()
    } else {
        tagger::observed_tagset(examples.iter().map(|e| &e.labels.correction), &base)?
    };
    let heads = tagger::head_set(match a.heads {
        HeadCount::Five => 5,
        HeadCount::Seven => 7,
    })?;
    let encoder = FeatureEncoder::new(a.dim, DEFAULT_TEMPLATES.to_vec())?;
    let mut model = MultiHeadModel::new(encoder, tagset, heads, a.lambda)?;
    let encoded: Vec<_> = examples.iter().map(|e| model.encode_example(e)).collect();
    let config = TrainConfig {
        epochs: a.epochs,
        learning_rate: a.learning_rate,
        batch_size: a.batch_size,
        seed: a.seed,
    };
    let report = tagger::train(&mut model, &encoded, &config)?;
    for (epoch, loss) in report.losses.iter().enumerate() {
        info!("epoch {epoch}: loss {loss:.6}");
    }
    tagger::save(&model, &a.out)?;
    if let Some(p) = &a.report {
        let summary = TrainSummary {
            examples: examples.len(),
            tags: model.tagset().len(),
            heads: model.heads().iter().map(|h| h.name()).collect(),
            parameters: model.parameter_count(),
            steps: report.steps,
            losses: report.losses,
        };
        let mut s = Output::create(p)?;
        s.write_str(&(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"))?;
        s.finish()?;
    }
    Ok(())
}

pub fn predict(a: PredictArgs) -> CliResult {
    if a.iters == 0 {
        return Err(Failure::Usage("--iters must be at least 1".into()));
    }
    let model = tagger::load(&a.model).map_err(|e| data_err(&a.model, e))?;
    let lexicon = load_lexicon(&a.lexicon)?;
    let tweaks = Tweaks::new(a.keep_bias, a.min_error_prob);
    let options = RefineOptions {
        max_iters: a.iters,
        strict: false,
    };
    let mut out = Output::create(&a.out)?;
    process(
        &[&a.input],
        |l| {
            let src = tokenize(&l[0]);
            let r = tagger::correct(&model, &src, &tweaks, &options, &lexicon).map_err(|e| e.to_string())?;
            Ok(format!("{}\n", r.sentence))
        },
        |s| out.write_str(&s),
    )?;
    out.finish()
}

fn read_sentences(paths: &[&Path]) -> CliResult<Vec<Vec<Sentence>>> {
    let mut cols: Vec<Vec<Sentence>> = vec![Vec::new(); paths.len()];
    process(
        paths,
        |l| Ok(l.iter().map(|s| tokenize(s)).collect::<Vec<_>>()),
        |row| {
            for (c, s) in cols.iter_mut().zip(row) {
                c.push(s);
            }
            Ok(())
        },
    )?;
    Ok(cols)
}

pub fn score(a: ScoreArgs) -> CliResult {
    let mut paths: Vec<&Path> = vec![&a.src, &a.hyp];
    paths.extend(a.refs.iter().map(PathBuf::as_path));
    let mut cols = read_sentences(&paths)?.into_iter();
    let src = cols.next().unwrap_or_default();
    let hyp = cols.next().unwrap_or_default();
    let ref_cols: Vec<Vec<Sentence>> = cols.collect();
    if hyp.is_empty() {
        return Err(data_err(&a.hyp, "empty hypothesis stream"));
    }
    let refs: Vec<Vec<Sentence>> = (0..src.len())
        .map(|i| ref_cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let metric = match a.metric {
        MetricArg::F05 => Metric::FHalf,
        MetricArg::Gleu => Metric::Gleu,
        MetricArg::Both => Metric::Both,
    };
    let report = evaluate(&src, &hyp, &refs, metric, a.seed)?;
    let mut out = Output::or_stdout(a.out.as_deref())?;
    out.write_str(&(report.to_json() + "\n"))?;
    out.finish()
}

#[derive(Serialize, Default)]
struct Coverage {
    pairs: u64,
    source_tokens: u64,
    edited_tokens: u64,
    unknown: u64,
    /// UNKNOWN tags as a fraction of edited tokens.
    unknown_rate: f64,
    families: BTreeMap<&'static str, u64>,
}

pub fn coverage(a: CoverageArgs) -> CliResult {
    let tagset = load_tagset(&a.tagset)?;
    let lexicon = load_lexicon(&a.lexicon)?;
    let conv = converter(&lexicon, &tagset, a.no_char_transforms);
    let mut report = Coverage {
        families: TagFamily::ALL.iter().map(|f| (f.name(), 0)).collect(),
        ..Default::default()
    };
    process(
        &[&a.src_tgt],
        |l| {
            if l[0].trim().is_empty() {
                return Ok(None);
            }
            let (src, tgt) = split_pair(&l[0])?;
            conv.convert(&src, &tgt).map(Some).map_err(|e| e.to_string())
        },
        |edits| {
            let Some(edits) = edits else { return Ok(()) };
            report.pairs += 1;
            report.source_tokens += edits.len() as u64;
            for t in edits.iter() {
                report.edited_tokens += u64::from(!t.is_keep());
                report.unknown += u64::from(*t == EditTag::Unknown);
                *report.families.entry(t.family().name()).or_default() += 1;
            }
            Ok(())
        },
    )?;
    if report.edited_tokens > 0 {
        report.unknown_rate = report.unknown as f64 / report.edited_tokens as f64;
    }
    let mut out = Output::or_stdout(a.out.as_deref())?;
    out.write_str(&(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"))?;
    out.finish()
}

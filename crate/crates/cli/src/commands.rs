//! Subcommand implementations.

use blinkforge::attribution::{column_means, fit_ridge, mean_abs_shap, shapley_exact, shapley_exact_averaged};
use blinkforge::blink::{passes_prefilter, segment_all, PeakSegment};
use blinkforge::cull::{
    apply_bounds, bfs_search, combination_sweep, evaluate, individual_search, CullConfig, EvalReport, FeatureRow,
    FeatureTable, Label,
};
use blinkforge::eda::{decompose, eda_feature_table, EDA_FEATURE_NAMES};
use blinkforge::eog::{eog_feature_names, extract_eog_features_with, EogOptions};
use blinkforge::error::Error as CoreError;
use blinkforge::pipeline::{preprocess_eog, PipelineConfig};
use blinkforge::signal::{derivative_of, Channel, Recording};
use blinkforge::surveys::{score_panas, score_stai_state, StaiRoster, SurveyResponse};
use blinkforge::synth::{
    match_segment, plan_events, synth_blink_session, synth_eda_session, synth_eog_session, synth_wire_session,
    EventKind, GroundTruth, PlanParams, SynthSpec,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::*;
use crate::error::{CliError, Result};
use crate::formats::*;
use crate::manifest::Run;

/// Settings shared by every subcommand of one run.
pub struct Ctx {
    pub seed: u64,
    pub config: PipelineConfig,
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out =
        serde_json::to_vec_pretty(value).map_err(|e| CliError::Internal(format!("JSON serialization failed: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, path: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| CliError::parse(path, e.line() as u64, e.to_string()))
}

fn read_recording(run: &mut Run, path: &str) -> Result<Recording> {
    parse_recording(&run.read(path)?, path)
}

fn read_features(run: &mut Run, path: &str) -> Result<FeatureTable> {
    parse_features(&run.read(path)?, path)
}

fn read_truth(run: &mut Run, path: Option<&str>) -> Result<Option<Vec<GroundTruth>>> {
    path.map(|p| parse_truth(&run.read(p)?, p)).transpose()
}

fn truth_label(seg: &PeakSegment, truth: &[GroundTruth]) -> Label {
    match match_segment(seg, truth) {
        Some(EventKind::Blink) => Label::Blink,
        _ => Label::Artifact,
    }
}

fn require_channel(rec: &Recording, want: Channel, path: &str) -> Result<()> {
    if rec.channel() != want {
        return Err(CliError::data(
            path,
            format!("expected a {want} recording, got {}", rec.channel()),
        ));
    }
    Ok(())
}

pub fn dispatch(ctx: &Ctx, run: &mut Run, command: Command) -> Result<()> {
    match command {
        Command::Filter(a) => filter(ctx, run, a),
        Command::Detect(a) => detect(ctx, run, a),
        Command::Features(FeaturesCmd::Eog(a)) => features_eog(ctx, run, a),
        Command::Features(FeaturesCmd::Eda(a)) => features_eda(ctx, run, a),
        Command::Cull(CullCmd::Individual(a)) => cull_individual(run, a),
        Command::Cull(CullCmd::Bfs(a)) => cull_bfs(run, a),
        Command::Cull(CullCmd::Apply(a)) => cull_apply(run, a),
        Command::Sweep(a) => sweep(run, a),
        Command::Shapley(a) => shapley(run, a),
        Command::Survey(SurveyCmd::Score(a)) => survey_score(run, a),
        Command::Synth(cmd) => synth(ctx, run, cmd),
        Command::Plotdata(a) => plotdata(ctx, run, a),
        Command::Replay(_) => Err(CliError::Usage("replay cannot be nested".into())),
    }
}

fn filter(ctx: &Ctx, run: &mut Run, a: FilterArgs) -> Result<()> {
    let rec = read_recording(run, &a.input)?;
    let out = match rec.channel() {
        Channel::Eog => preprocess_eog(&rec, &ctx.config.eog_filter)?,
        Channel::Eda => {
            let c = decompose(&rec, &ctx.config.eda)?;
            match a.component {
                EdaPart::Filtered => c.filtered,
                EdaPart::Tonic => c.tonic,
                EdaPart::Phasic => c.phasic,
            }
        }
    };
    run.write(&a.output, format_recording(&out).as_bytes())
}

/// Filtered recording and its segments with prefilter flags and labels.
fn detected_rows(
    ctx: &Ctx,
    rec: &Recording,
    truth: Option<&[GroundTruth]>,
) -> Result<(Recording, Vec<(SegmentRow, PeakSegment)>)> {
    let filtered = preprocess_eog(rec, &ctx.config.eog_filter)?;
    let rows = segment_all(&filtered, &ctx.config.search)?
        .into_iter()
        .map(|seg| {
            let pass = passes_prefilter(&seg.candidate, &ctx.config.search);
            let label = truth.map(|t| truth_label(&seg, t));
            (SegmentRow::new(&seg, pass, label), seg)
        })
        .collect();
    Ok((filtered, rows))
}

fn detect(ctx: &Ctx, run: &mut Run, a: DetectArgs) -> Result<()> {
    let rec = read_recording(run, &a.input)?;
    require_channel(&rec, Channel::Eog, &a.input)?;
    let truth = read_truth(run, a.truth.as_deref())?;
    let (_, rows) = detected_rows(ctx, &rec, truth.as_deref())?;
    let rows: Vec<SegmentRow> = rows
        .into_iter()
        .map(|(r, _)| r)
        .filter(|r| !a.blink_like || r.passes_prefilter)
        .collect();
    run.write(&a.output, &format_rows(&rows)?)
}

fn features_eog(ctx: &Ctx, run: &mut Run, a: EogFeatureArgs) -> Result<()> {
    let rec = read_recording(run, &a.input)?;
    require_channel(&rec, Channel::Eog, &a.input)?;
    let truth = read_truth(run, a.truth.as_deref())?;
    let segments: Vec<(SegmentRow, PeakSegment)> = match &a.segments {
        Some(path) => {
            let filtered = preprocess_eog(&rec, &ctx.config.eog_filter)?;
            parse_rows::<SegmentRow>(&run.read(path)?, path)?
                .into_iter()
                .map(|(line, mut row)| {
                    let seg = row.segment(&filtered, path, line)?;
                    if row.label.is_none() {
                        row.label = truth.as_deref().map(|t| truth_label(&seg, t));
                    }
                    Ok((row, seg))
                })
                .collect::<Result<_>>()?
        }
        None => detected_rows(ctx, &rec, truth.as_deref())?.1,
    };

    let opts = EogOptions {
        normalize: a.normalize,
        ..ctx.config.eog
    };
    let described: Vec<Option<FeatureRow>> = segments
        .par_iter()
        .map(|(row, seg)| match extract_eog_features_with(seg, &opts) {
            Ok(f) => Ok(Some(FeatureRow {
                id: row.id.clone(),
                values: f.values().into_iter().map(|(_, v)| v).collect(),
                label: row.label,
            })),
            Err(CoreError::DegenerateShape(_) | CoreError::InvalidSegment(_)) => Ok(None),
            Err(e) => Err(CliError::from(e)),
        })
        .collect::<Result<_>>()?;
    let skipped = described.iter().filter(|r| r.is_none()).count();
    if skipped > 0 {
        log::warn!("{skipped} of {} segments have no usable shape and were left out", described.len());
    }
    let names = eog_feature_names(a.normalize).iter().map(|s| s.to_string()).collect();
    let table = FeatureTable::new(names, described.into_iter().flatten().collect())?;
    run.write(&a.output, &format_features(&table)?)
}

fn features_eda(ctx: &Ctx, run: &mut Run, a: EdaFeatureArgs) -> Result<()> {
    let rec = read_recording(run, &a.input)?;
    require_channel(&rec, Channel::Eda, &a.input)?;
    let rows = eda_feature_table(&rec, &ctx.config.eda)?
        .into_iter()
        .map(|(w, f)| FeatureRow {
            id: w.start_index.to_string(),
            values: f.values().into_iter().map(|(_, v)| v.unwrap_or(f64::NAN)).collect(),
            label: None,
        })
        .collect();
    let table = FeatureTable::new(EDA_FEATURE_NAMES.iter().map(|s| s.to_string()).collect(), rows)?;
    run.write(&a.output, &format_features(&table)?)
}

/// Bounds with their evaluation, as written by `cull individual|bfs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CullResult {
    pub config: CullConfig,
    pub report: EvalReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_evaluated: Option<u64>,
}

fn cull_individual(run: &mut Run, a: IndividualArgs) -> Result<()> {
    let table = read_features(run, &a.input)?;
    let r = individual_search(&table, &a.feature, a.bins)?;
    let mut config = CullConfig::default();
    config.bounds.insert(r.feature, (r.lower, r.upper));
    let out = CullResult {
        config,
        report: r.report,
        steps: None,
        nodes_evaluated: None,
    };
    run.write(&a.output, &json_bytes(&out)?)
}

fn cull_bfs(run: &mut Run, a: BfsArgs) -> Result<()> {
    let table = read_features(run, &a.input)?;
    let names: Vec<&str> = a.features.iter().map(|s| s.trim()).collect();
    let r = bfs_search(&table, &names, a.bins)?;
    let out = CullResult {
        config: r.config,
        report: r.report,
        steps: Some(r.steps),
        nodes_evaluated: Some(r.nodes_evaluated),
    };
    run.write(&a.output, &json_bytes(&out)?)
}

/// Outcome of `cull apply`; the report needs every row labelled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApplyOutput {
    pub rows: usize,
    pub predicted_blinks: usize,
    pub report: Option<EvalReport>,
}

fn cull_apply(run: &mut Run, a: ApplyArgs) -> Result<()> {
    let table = read_features(run, &a.input)?;
    let text = run.read(&a.bounds)?;
    let value: serde_json::Value = parse_json(&text, &a.bounds)?;
    let bounds = match value.get("config") {
        Some(inner) => inner.clone(),
        None => value,
    };
    let config: CullConfig = serde_json::from_value(bounds).map_err(|e| CliError::data(&a.bounds, e.to_string()))?;
    let pred = apply_bounds(&table, &config)?;
    let report = match table.labels() {
        Ok(labels) => Some(evaluate(&pred, &labels)?),
        Err(_) => None,
    };
    let out = ApplyOutput {
        rows: pred.len(),
        predicted_blinks: pred.iter().filter(|&&p| p).count(),
        report,
    };
    run.write(&a.output, &json_bytes(&out)?)?;
    if let Some(path) = &a.predictions {
        let rows: Vec<Vec<String>> = table
            .rows()
            .iter()
            .zip(&pred)
            .map(|(r, &p)| {
                let l = if p { Label::Blink } else { Label::Artifact };
                vec![r.id.clone(), l.to_string()]
            })
            .collect();
        run.write(path, &format_table(&["id", "prediction"], &rows)?)?;
    }
    Ok(())
}

fn sweep(run: &mut Run, a: SweepArgs) -> Result<()> {
    let table = read_features(run, &a.input)?;
    let candidates: Vec<&str> = if a.candidates.is_empty() {
        table.feature_names().iter().map(String::as_str).collect()
    } else {
        a.candidates.iter().map(|s| s.trim()).collect()
    };
    let entries = combination_sweep(&table, a.k, &candidates, a.bins)?;
    let rows = entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let bounds = serde_json::to_string(&e.config).map_err(|e| CliError::Internal(e.to_string()))?;
            let r = &e.report;
            Ok(vec![
                (i + 1).to_string(),
                e.features.join(";"),
                r.accuracy.to_string(),
                r.f1.to_string(),
                r.tp.to_string(),
                r.fp.to_string(),
                r.tn.to_string(),
                r.fn_.to_string(),
                bounds,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let header = ["rank", "features", "accuracy", "f1", "tp", "fp", "tn", "fn", "bounds"];
    run.write(&a.output, &format_table(&header, &rows)?)
}

fn shapley(run: &mut Run, a: ShapleyArgs) -> Result<()> {
    let table = read_features(run, &a.input)?;
    let target: Vec<f64> = if a.target == "label" {
        table.labels()?.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    } else {
        table.column(&a.target)?
    };
    let features: Vec<String> = if a.features.is_empty() {
        table.feature_names().iter().filter(|n| **n != a.target).cloned().collect()
    } else {
        a.features.iter().map(|s| s.trim().to_string()).collect()
    };
    if features.contains(&a.target) {
        return Err(CliError::Usage(format!("target `{}` is also a model input", a.target)));
    }
    let idx: Vec<usize> = features.iter().map(|f| table.index_of(f)).collect::<Result<_, _>>()?;

    let mut ids = Vec::new();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (row, &t) in table.rows().iter().zip(&target) {
        let v: Vec<f64> = idx.iter().map(|&i| row.values[i]).collect();
        if t.is_finite() && v.iter().all(|x| x.is_finite()) {
            ids.push(row.id.clone());
            x.push(v);
            y.push(t);
        }
    }
    if x.len() < table.len() {
        log::warn!("{} rows with undefined values were left out", table.len() - x.len());
    }
    let model = fit_ridge(&x, &y, a.lambda)?;
    let predict = |v: &[f64]| model.predict(v);
    let means = column_means(&x)?;
    let reports = x
        .iter()
        .map(|inst| match a.background {
            Background::Mean => shapley_exact(predict, inst, &means, &features),
            Background::Rows => shapley_exact_averaged(predict, inst, &x, &features),
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::new();
    for ((id, inst), rep) in ids.iter().zip(&x).zip(&reports) {
        for (j, name) in features.iter().enumerate() {
            rows.push(vec![id.clone(), name.clone(), rep.phi[j].to_string(), inst[j].to_string()]);
        }
    }
    run.write(
        &a.output,
        &format_table(&["instance_id", "feature", "phi", "feature_value"], &rows)?,
    )?;
    if let Some(path) = &a.importance {
        let imp = mean_abs_shap(&reports)?;
        let rows: Vec<Vec<String>> = features
            .iter()
            .zip(&imp)
            .map(|(f, v)| vec![f.clone(), v.to_string()])
            .collect();
        run.write(path, &format_table(&["feature", "mean_abs_phi"], &rows)?)?;
    }
    Ok(())
}

fn roster(r: Roster) -> StaiRoster {
    match r {
        Roster::Standard => StaiRoster::standard(),
        Roster::Nineteen => StaiRoster::nineteen_item(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
struct ScoreRow {
    participant_id: String,
    stage: String,
    positive_affect: Option<u32>,
    negative_affect: Option<u32>,
    state_anxiety: Option<u32>,
}

/// Scores every participant-stage group; a questionnaire with no answers
/// in a group is left blank.
fn score_file(text: &str, path: &str, roster: &StaiRoster) -> Result<Vec<ScoreRow>> {
    let groups = group_survey(parse_rows::<SurveyRow>(text, path)?, path)?;
    groups
        .into_iter()
        .map(|((pid, stage), items)| {
            let ctx = |e: CoreError| CliError::data(path, format!("participant {pid}, stage {stage}: {e}"));
            let resp = SurveyResponse::from_items(items.iter().map(|(i, v)| (i.as_str(), *v)), roster).map_err(ctx)?;
            let panas = if resp.panas_items.is_empty() {
                None
            } else {
                Some(score_panas(&resp).map_err(ctx)?)
            };
            let stai = if resp.stai_items.is_empty() {
                None
            } else {
                Some(score_stai_state(&resp, roster).map_err(ctx)?)
            };
            Ok(ScoreRow {
                participant_id: pid.clone(),
                stage: stage.to_string(),
                positive_affect: panas.map(|p| p.positive_affect),
                negative_affect: panas.map(|p| p.negative_affect),
                state_anxiety: stai,
            })
        })
        .collect()
}

fn survey_score(run: &mut Run, a: ScoreArgs) -> Result<()> {
    let text = run.read(&a.input)?;
    let rows = score_file(&text, &a.input, &roster(a.roster))?;
    run.write(&a.output, &format_rows(&rows)?)
}

fn synth(ctx: &Ctx, run: &mut Run, cmd: SynthCmd) -> Result<()> {
    let (kind, a) = match cmd {
        SynthCmd::Blink(a) => (EventKind::Blink, a),
        SynthCmd::Wire(a) => (EventKind::Wire, a),
        SynthCmd::Eda(a) => (EventKind::Scr, a),
    };
    let spec: SynthSpec = match &a.spec {
        Some(path) => parse_json(&run.read(path)?, path)?,
        None => {
            let plan = match kind {
                EventKind::Blink => PlanParams::blinks(),
                EventKind::Wire => PlanParams::wires(),
                EventKind::Scr => PlanParams::scrs(),
            };
            let mut events = plan_events(ctx.seed, a.duration_s, &plan)?;
            if a.with_wires && kind == EventKind::Blink {
                events.extend(plan_events(ctx.seed.wrapping_add(1), a.duration_s, &PlanParams::wires())?);
                events.sort_by(|p, q| p.time_s.total_cmp(&q.time_s));
            }
            let eda = kind == EventKind::Scr;
            SynthSpec {
                seed: ctx.seed,
                sample_rate_hz: a.sample_rate_hz,
                duration_s: a.duration_s,
                events,
                noise_sigma: a.noise_sigma.unwrap_or(if eda { 0.005 } else { 0.01 }),
                baseline: if eda { 5.0 } else { 0.0 },
            }
        }
    };
    if kind == EventKind::Scr {
        let rec = synth_eda_session(&spec)?;
        run.write(&a.output, format_recording(&rec).as_bytes())?;
        if let Some(path) = &a.truth {
            run.write(path, &format_rows(&spec.events)?)?;
        }
        return Ok(());
    }
    let (rec, truth) = match kind {
        EventKind::Wire => synth_wire_session(&spec)?,
        _ if a.with_wires || a.spec.is_some() => synth_eog_session(&spec)?,
        _ => synth_blink_session(&spec)?,
    };
    run.write(&a.output, format_recording(&rec).as_bytes())?;
    if let Some(path) = &a.truth {
        run.write(path, &format_rows(&truth)?)?;
    }
    Ok(())
}

fn trace(rows: &mut Vec<Vec<String>>, series: &str, rec: &Recording) {
    for (i, v) in rec.samples().iter().enumerate() {
        rows.push(vec![series.to_string(), rec.time_of(i).to_string(), v.to_string()]);
    }
}

fn plotdata(ctx: &Ctx, run: &mut Run, a: PlotArgs) -> Result<()> {
    let bytes = match a.kind {
        PlotKind::Eog => {
            let rec = read_recording(run, &a.input)?;
            require_channel(&rec, Channel::Eog, &a.input)?;
            let (filtered, detected) = detected_rows(ctx, &rec, None)?;
            let segments: Vec<SegmentRow> = match &a.segments {
                Some(path) => parse_rows::<SegmentRow>(&run.read(path)?, path)?
                    .into_iter()
                    .map(|(_, r)| r)
                    .collect(),
                None => detected.into_iter().map(|(r, _)| r).collect(),
            };
            let velocity = filtered.with_samples(derivative_of(filtered.samples(), filtered.sample_rate_hz(), 1)?)?;
            let mut rows = Vec::new();
            trace(&mut rows, "raw", &rec);
            trace(&mut rows, "filtered", &filtered);
            trace(&mut rows, "velocity", &velocity);
            let x = filtered.samples();
            for s in &segments {
                for (series, i) in [
                    ("peak", s.center_index),
                    ("left_base", s.left_base_index),
                    ("right_base", s.right_base_index),
                ] {
                    if i < x.len() {
                        rows.push(vec![series.into(), filtered.time_of(i).to_string(), x[i].to_string()]);
                    }
                }
            }
            format_table(&["series", "t_s", "value"], &rows)?
        }
        PlotKind::Eda => {
            let rec = read_recording(run, &a.input)?;
            require_channel(&rec, Channel::Eda, &a.input)?;
            let c = decompose(&rec, &ctx.config.eda)?;
            let mut rows = Vec::new();
            trace(&mut rows, "raw", &rec);
            trace(&mut rows, "filtered", &c.filtered);
            trace(&mut rows, "tonic", &c.tonic);
            trace(&mut rows, "phasic", &c.phasic);
            format_table(&["series", "t_s", "value"], &rows)?
        }
        PlotKind::Features => {
            let table = read_features(run, &a.input)?;
            let mut rows = Vec::new();
            for r in table.rows() {
                let label = r.label.map_or(String::new(), |l| l.to_string());
                for (name, v) in table.feature_names().iter().zip(&r.values) {
                    let cell = if v.is_nan() { String::new() } else { v.to_string() };
                    rows.push(vec![r.id.clone(), label.clone(), name.clone(), cell]);
                }
            }
            format_table(&["id", "label", "feature", "value"], &rows)?
        }
        PlotKind::Survey => {
            let text = run.read(&a.input)?;
            let mut rows = Vec::new();
            for s in score_file(&text, &a.input, &roster(a.roster))? {
                for (scale, v) in [
                    ("positive_affect", s.positive_affect),
                    ("negative_affect", s.negative_affect),
                    ("state_anxiety", s.state_anxiety),
                ] {
                    if let Some(v) = v {
                        rows.push(vec![s.participant_id.clone(), s.stage.clone(), scale.into(), v.to_string()]);
                    }
                }
            }
            format_table(&["participant_id", "stage", "scale", "score"], &rows)?
        }
    };
    run.write(&a.output, &bytes)
}

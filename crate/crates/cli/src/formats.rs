//! Text file formats read and written by the command line.
//!
//! Floats are written with Rust's `Display`, the shortest decimal that
//! parses back to the same value, so reruns produce identical bytes.

use std::collections::BTreeMap;

use blinkforge::blink::{PeakCandidate, PeakSegment};
use blinkforge::cull::{FeatureRow, FeatureTable, Label};
use blinkforge::eda::is_eda_feature;
use blinkforge::eog::is_eog_feature;
use blinkforge::signal::{Channel, Recording};
use blinkforge::surveys::Stage;
use blinkforge::synth::GroundTruth;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Largest deviation of a `t_s` value from the uniform grid, seconds.
pub const TIME_JITTER_S: f64 = 1e-6;

fn parse_finite(cell: &str, path: &str, line: u64, what: &str) -> Result<f64> {
    match cell.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::parse(path, line, format!("{what} `{cell}` is not a finite number"))),
    }
}

/// Parses a recording: `# channel=EOG|EDA`, optional
/// `# sample_rate_hz=<v>`, then a `t_s,value` or `value` header and rows.
/// Without the rate line the rate comes from the time column.
pub fn parse_recording(text: &str, path: &str) -> Result<Recording> {
    let mut rate = None;
    let mut channel = None;
    let mut timed = None;
    let mut times: Vec<(u64, f64)> = Vec::new();
    let mut values = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k as u64 + 1;
        let s = raw.trim();
        if s.is_empty() {
            continue;
        }
        if let Some(meta) = s.strip_prefix('#') {
            let Some((key, val)) = meta.split_once('=') else {
                continue;
            };
            match key.trim() {
                "sample_rate_hz" => {
                    let v = parse_finite(val, path, line, "sample rate")?;
                    if v <= 0.0 {
                        return Err(CliError::parse(path, line, "sample rate must be positive"));
                    }
                    rate = Some(v);
                }
                "channel" => {
                    channel = Some(
                        val.parse::<Channel>()
                            .map_err(|e| CliError::parse(path, line, e.to_string()))?,
                    );
                }
                _ => {}
            }
            continue;
        }
        let cols: Vec<&str> = s.split(',').map(str::trim).collect();
        let Some(has_time) = timed else {
            timed = Some(match cols.as_slice() {
                ["t_s", "value"] => true,
                ["value"] => false,
                _ => {
                    return Err(CliError::parse(
                        path,
                        line,
                        format!("expected header `t_s,value` or `value`, got `{s}`"),
                    ))
                }
            });
            continue;
        };
        let want = if has_time { 2 } else { 1 };
        if cols.len() != want {
            return Err(CliError::parse(path, line, format!("expected {want} columns, got {}", cols.len())));
        }
        if has_time {
            times.push((line, parse_finite(cols[0], path, line, "time")?));
        }
        values.push(parse_finite(cols[want - 1], path, line, "value")?);
    }

    let channel = channel.ok_or_else(|| CliError::data(path, "missing `# channel=EOG|EDA` line"))?;
    if values.len() < 2 {
        return Err(CliError::data(path, format!("need at least 2 samples, got {}", values.len())));
    }
    if timed == Some(true) {
        for w in times.windows(2) {
            if w[1].1 <= w[0].1 {
                return Err(CliError::parse(path, w[1].0, "t_s must be strictly increasing"));
            }
        }
        // The median spacing is robust to the gap being reported.
        let t0 = times[0].1;
        let step = match rate {
            Some(fs) => 1.0 / fs,
            None => {
                let mut d: Vec<f64> = times.windows(2).map(|w| w[1].1 - w[0].1).collect();
                d.sort_by(f64::total_cmp);
                d[d.len() / 2]
            }
        };
        for (i, &(line, t)) in times.iter().enumerate() {
            let expected = t0 + i as f64 * step;
            if (t - expected).abs() > TIME_JITTER_S {
                return Err(CliError::parse(
                    path,
                    line,
                    format!("non-uniform t_s: expected {expected} for sample {i}, got {t}"),
                ));
            }
        }
        rate.get_or_insert(1.0 / step);
    }
    let fs = rate.ok_or_else(|| CliError::data(path, "no `t_s` column and no `# sample_rate_hz=` line"))?;
    Recording::new(fs, values, channel).map_err(|e| CliError::data(path, e.to_string()))
}

pub fn format_recording(rec: &Recording) -> String {
    let fs = rec.sample_rate_hz();
    let mut out = format!("# channel={}\n# sample_rate_hz={fs}\nt_s,value\n", rec.channel());
    for (i, v) in rec.samples().iter().enumerate() {
        out.push_str(&format!("{},{v}\n", i as f64 / fs));
    }
    out
}

fn csv_error(path: &str, e: csv::Error) -> CliError {
    match e.position() {
        Some(p) => CliError::parse(path, p.line(), e.to_string()),
        None => CliError::data(path, e.to_string()),
    }
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner()
        .map_err(|e| CliError::Internal(format!("in-memory CSV writer failed: {e}")))
}

/// Parses a feature file: `id`, one column per catalog feature, and an
/// optional `label` column. Empty cells mark undefined values.
pub fn parse_features(text: &str, path: &str) -> Result<FeatureTable> {
    let mut rdr = csv_reader(text);
    let header = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.get(0) != Some("id") {
        return Err(CliError::parse(path, 1, "first column must be `id`"));
    }
    let label_col = header.iter().position(|h| h == "label");
    let mut names = Vec::new();
    let mut cols = Vec::new();
    for (i, h) in header.iter().enumerate().skip(1) {
        if Some(i) == label_col {
            continue;
        }
        if !(is_eog_feature(h) || is_eda_feature(h)) {
            return Err(CliError::parse(path, 1, format!("`{h}` is not a catalog feature")));
        }
        names.push(h.to_string());
        cols.push(i);
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let values = cols
            .iter()
            .map(|&c| match rec.get(c).unwrap_or("") {
                "" => Ok(f64::NAN),
                cell => parse_finite(cell, path, line, &format!("`{}`", &header[c])),
            })
            .collect::<Result<Vec<f64>>>()?;
        let label = match label_col.map(|c| rec.get(c).unwrap_or("")) {
            None | Some("") => None,
            Some(l) => Some(l.parse::<Label>().map_err(|e| CliError::parse(path, line, e.to_string()))?),
        };
        rows.push(FeatureRow {
            id: rec.get(0).unwrap_or("").to_string(),
            values,
            label,
        });
    }
    FeatureTable::new(names, rows).map_err(|e| CliError::data(path, e.to_string()))
}

pub fn format_features(table: &FeatureTable) -> Result<Vec<u8>> {
    let labelled = table.rows().iter().any(|r| r.label.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string()];
    header.extend(table.feature_names().iter().cloned());
    if labelled {
        header.push("label".into());
    }
    w.write_record(&header).map_err(|e| CliError::Internal(e.to_string()))?;
    for r in table.rows() {
        let mut cells = vec![r.id.clone()];
        cells.extend(r.values.iter().map(|v| if v.is_nan() { String::new() } else { v.to_string() }));
        if labelled {
            cells.push(r.label.map_or(String::new(), |l| l.to_string()));
        }
        w.write_record(&cells).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    finish(w)
}

/// One row of a segments file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentRow {
    pub id: String,
    pub center_index: usize,
    pub left_base_index: usize,
    pub right_base_index: usize,
    pub height: f64,
    pub prominence: f64,
    pub width_s: f64,
    pub edge_truncated: bool,
    pub passes_prefilter: bool,
    pub label: Option<Label>,
}

impl SegmentRow {
    pub fn new(seg: &PeakSegment, passes_prefilter: bool, label: Option<Label>) -> Self {
        Self {
            id: seg.candidate.center_index.to_string(),
            center_index: seg.candidate.center_index,
            left_base_index: seg.left_base_index,
            right_base_index: seg.right_base_index,
            height: seg.candidate.height,
            prominence: seg.candidate.prominence,
            width_s: seg.candidate.width_s,
            edge_truncated: seg.edge_truncated,
            passes_prefilter,
            label,
        }
    }

    /// Rebuilds the segment on `filtered`, which must be the recording the
    /// row was detected on.
    pub fn segment(&self, filtered: &Recording, path: &str, line: u64) -> Result<PeakSegment> {
        let (l, c, r) = (self.left_base_index, self.center_index, self.right_base_index);
        if !(l <= c && c <= r && r < filtered.len()) {
            return Err(CliError::parse(
                path,
                line,
                format!("indices {l} <= {c} <= {r} do not fit a recording of {} samples", filtered.len()),
            ));
        }
        Ok(PeakSegment {
            candidate: PeakCandidate {
                center_index: c,
                height: self.height,
                prominence: self.prominence,
                width_s: self.width_s,
            },
            left_base_index: l,
            right_base_index: r,
            slice: filtered.samples()[l..=r].to_vec(),
            sample_rate_hz: filtered.sample_rate_hz(),
            edge_truncated: self.edge_truncated,
        })
    }
}

/// Deserializes every row of a CSV file, reporting the line of a bad row.
pub fn parse_rows<T: for<'de> Deserialize<'de>>(text: &str, path: &str) -> Result<Vec<(u64, T)>> {
    let mut rdr = csv_reader(text);
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let row: T = rec
            .deserialize(Some(&headers))
            .map_err(|e| CliError::parse(path, line, e.to_string()))?;
        out.push((line, row));
    }
    Ok(out)
}

/// Serializes rows under a header derived from `T`.
pub fn format_rows<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    finish(w)
}

/// Writes string records under `header`.
pub fn format_table(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Internal(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    finish(w)
}

pub fn parse_truth(text: &str, path: &str) -> Result<Vec<GroundTruth>> {
    Ok(parse_rows::<GroundTruth>(text, path)?.into_iter().map(|(_, g)| g).collect())
}

/// One answered item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub participant_id: String,
    pub stage: String,
    pub item: String,
    pub value: u8,
}

/// `(item, value)` answers keyed by participant and stage.
pub type SurveyGroups = BTreeMap<(String, Stage), Vec<(String, u8)>>;

/// Answers grouped by participant and stage, in file order of first
/// appearance within each participant.
pub fn group_survey(rows: Vec<(u64, SurveyRow)>, path: &str) -> Result<SurveyGroups> {
    let mut out = SurveyGroups::new();
    for (line, r) in rows {
        let stage = r
            .stage
            .parse::<Stage>()
            .map_err(|e| CliError::parse(path, line, e.to_string()))?;
        out.entry((r.participant_id, stage)).or_default().push((r.item, r.value));
    }
    Ok(out)
}

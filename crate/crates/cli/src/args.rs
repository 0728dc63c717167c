//! Command-line surface.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "blinkforge",
    version,
    about = "EOG blink identification, EDA features, threshold culling, and survey scoring",
    after_help = "Every command that writes files also writes <first output>.manifest.json. \
                  BLINKFORGE_THREADS caps worker threads (default: all cores)."
)]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Pipeline configuration JSON; omitted fields keep their defaults.
    #[arg(long, global = true, value_name = "JSON")]
    pub config: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the filter chain: Butterworth then Savitzky-Golay for EOG, the
    /// tonic/phasic split for EDA.
    Filter(FilterArgs),
    /// Detect, prefilter, and segment EOG peaks into a segments CSV.
    Detect(DetectArgs),
    /// Extract per-peak or per-window features into a feature file.
    #[command(subcommand)]
    Features(FeaturesCmd),
    /// Fit or apply interval culling bounds.
    #[command(subcommand)]
    Cull(CullCmd),
    /// Rank every k-feature subset of the candidates by culling accuracy.
    Sweep(SweepArgs),
    /// Fit a ridge model on a feature file and attribute each row exactly.
    Shapley(ShapleyArgs),
    /// Score questionnaires.
    #[command(subcommand)]
    Survey(SurveyCmd),
    /// Generate synthetic recordings.
    #[command(subcommand)]
    Synth(SynthCmd),
    /// Emit tidy CSV for external plotting.
    Plotdata(PlotArgs),
    /// Rerun a command from its manifest and check its outputs.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EdaPart {
    Filtered,
    Tonic,
    Phasic,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Recording CSV.
    #[arg(long)]
    pub input: String,
    #[arg(long)]
    pub output: String,
    /// EDA component to write.
    #[arg(long, value_enum, default_value_t = EdaPart::Phasic)]
    pub component: EdaPart,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Raw EOG recording CSV.
    #[arg(long)]
    pub input: String,
    /// Segments CSV.
    #[arg(long)]
    pub output: String,
    /// Ground-truth CSV from `synth`; labels each segment.
    #[arg(long)]
    pub truth: Option<String>,
    /// Keep only peaks that pass the width/height prefilter.
    #[arg(long)]
    pub blink_like: bool,
}

#[derive(Debug, Subcommand)]
pub enum FeaturesCmd {
    /// Blink-shape features per segment.
    Eog(EogFeatureArgs),
    /// Complexity and variability features per window.
    Eda(EdaFeatureArgs),
}

#[derive(Debug, Args)]
pub struct EogFeatureArgs {
    /// Raw EOG recording CSV; filtered with the configured chain.
    #[arg(long)]
    pub input: String,
    /// Segments CSV from `detect`; peaks are detected afresh when omitted.
    #[arg(long)]
    pub segments: Option<String>,
    /// Ground-truth CSV from `synth`, used when segments carry no labels.
    #[arg(long)]
    pub truth: Option<String>,
    #[arg(long)]
    pub output: String,
    /// Min-max normalize each segment; drops Signal Height.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Args)]
pub struct EdaFeatureArgs {
    /// Raw EDA recording CSV.
    #[arg(long)]
    pub input: String,
    #[arg(long)]
    pub output: String,
}

#[derive(Debug, Subcommand)]
pub enum CullCmd {
    /// Greedy two-phase bounds on one feature.
    Individual(IndividualArgs),
    /// Breadth-first joint bounds on several features.
    Bfs(BfsArgs),
    /// Apply bounds and report the confusion counts.
    Apply(ApplyArgs),
}

#[derive(Debug, Args)]
pub struct IndividualArgs {
    /// Labelled feature file.
    #[arg(long)]
    pub input: String,
    #[arg(long)]
    pub feature: String,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    /// Result JSON: bounds and report.
    #[arg(long)]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct BfsArgs {
    /// Labelled feature file.
    #[arg(long)]
    pub input: String,
    /// Comma-separated feature names.
    #[arg(long, value_delimiter = ',', required = true)]
    pub features: Vec<String>,
    #[arg(long, default_value_t = 15)]
    pub bins: usize,
    /// Result JSON: bounds, report, grid steps.
    #[arg(long)]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    /// Feature file; labels are needed for the report.
    #[arg(long)]
    pub input: String,
    /// Bounds JSON, either a `{feature: [lower, upper]}` map or a
    /// `cull individual|bfs` result.
    #[arg(long)]
    pub bounds: String,
    /// Report JSON.
    #[arg(long)]
    pub output: String,
    /// Per-row predictions CSV.
    #[arg(long)]
    pub predictions: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Labelled feature file.
    #[arg(long)]
    pub input: String,
    /// Subset size.
    #[arg(long)]
    pub k: usize,
    /// Comma-separated candidate features; every feature when omitted.
    #[arg(long, value_delimiter = ',')]
    pub candidates: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub bins: usize,
    /// Rankings CSV.
    #[arg(long)]
    pub output: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Background {
    /// One reference point: the column means.
    Mean,
    /// Average over every training row.
    Rows,
}

#[derive(Debug, Args)]
pub struct ShapleyArgs {
    /// Feature file.
    #[arg(long)]
    pub input: String,
    /// Comma-separated model inputs; every feature except the target when
    /// omitted.
    #[arg(long, value_delimiter = ',')]
    pub features: Vec<String>,
    /// `label` (blink = 1) or a feature column to regress on.
    #[arg(long, default_value = "label")]
    pub target: String,
    /// Ridge penalty.
    #[arg(long, default_value_t = 0.1)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value_t = Background::Mean)]
    pub background: Background,
    /// Attribution CSV: instance_id, feature, phi, feature_value.
    #[arg(long)]
    pub output: String,
    /// Mean absolute attribution per feature.
    #[arg(long)]
    pub importance: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Roster {
    /// The 20-item state form, 20 to 80.
    Standard,
    /// The standard form less one item, 19 to 76.
    Nineteen,
}

#[derive(Debug, Subcommand)]
pub enum SurveyCmd {
    /// PANAS and STAI-State totals per participant and stage.
    Score(ScoreArgs),
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Responses CSV: participant_id, stage, item, value.
    #[arg(long)]
    pub input: String,
    #[arg(long)]
    pub output: String,
    #[arg(long, value_enum, default_value_t = Roster::Standard)]
    pub roster: Roster,
}

#[derive(Debug, Subcommand)]
pub enum SynthCmd {
    /// Blinks on a flat baseline, optionally mixed with wire bursts.
    Blink(SynthArgs),
    /// Wire-movement bursts only.
    Wire(SynthArgs),
    /// Tonic drift with skin conductance responses.
    Eda(SynthArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Recording CSV.
    #[arg(long)]
    pub output: String,
    /// Ground-truth CSV of rendered events.
    #[arg(long)]
    pub truth: Option<String>,
    /// Full session spec JSON; replaces the planned events and the flags
    /// below.
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long, default_value_t = 300.0)]
    pub duration_s: f64,
    #[arg(long, default_value_t = 100.0)]
    pub sample_rate_hz: f64,
    /// Gaussian noise standard deviation; 0.01 V for EOG and 0.005 uS for
    /// EDA when omitted.
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    /// Add wire bursts to a blink session.
    #[arg(long)]
    pub with_wires: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    /// Raw, filtered, and velocity traces with peak markers.
    Eog,
    /// Raw, filtered, tonic, and phasic traces.
    Eda,
    /// Feature values in long form with labels.
    Features,
    /// Questionnaire scores in long form by stage.
    Survey,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(value_enum)]
    pub kind: PlotKind,
    #[arg(long)]
    pub input: String,
    #[arg(long)]
    pub output: String,
    /// Segments CSV for `eog` markers; detected afresh when omitted.
    #[arg(long)]
    pub segments: Option<String>,
    #[arg(long, value_enum, default_value_t = Roster::Standard)]
    pub roster: Roster,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Manifest JSON written by an earlier run.
    pub manifest: String,
}

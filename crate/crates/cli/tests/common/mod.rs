//! Helpers for driving the built binary.
#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use blinkforge::surveys::{StaiRoster, PANAS_NEGATIVE, PANAS_POSITIVE};

pub const BIN: &str = env!("CARGO_BIN_EXE_blinkforge");

/// Runs the binary in `dir` with an optional thread cap.
pub fn run_in(dir: &Path, args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.current_dir(dir).args(args).env_remove("BLINKFORGE_THREADS");
    if let Some(n) = threads {
        cmd.env("BLINKFORGE_THREADS", n.to_string());
    }
    cmd.output().expect("binary runs")
}

/// Like [`run_in`] but fails with the captured stderr on a non-zero exit.
pub fn ok_in(dir: &Path, args: &[&str], threads: Option<usize>) -> Output {
    let out = run_in(dir, args, threads);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// Questionnaire answers for a few participants over every stage, drawn
/// from a fixed linear congruence so the file is stable.
pub fn survey_csv() -> String {
    let roster = StaiRoster::standard();
    let mut s = String::from("participant_id,stage,item,value\n");
    let mut state = 17u64;
    let mut next = |hi: u64| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        1 + (state >> 33) % hi
    };
    for p in ["P01", "P02", "P03"] {
        for stage in ["Baseline", "CPT", "Recovery"] {
            for item in PANAS_POSITIVE.iter().chain(&PANAS_NEGATIVE) {
                s.push_str(&format!("{p},{stage},{item},{}\n", next(5)));
            }
            for item in &roster.items {
                s.push_str(&format!("{p},{stage},{},{}\n", item.text, next(4)));
            }
        }
    }
    s
}

/// Every output-producing command chained over synthetic inputs, with
/// relative paths so two directories hold comparable runs. Returns the
/// files written, manifests included.
pub fn full_pipeline(dir: &Path, threads: Option<usize>) -> Vec<String> {
    std::fs::write(dir.join("responses.csv"), survey_csv()).unwrap();
    let five = "Velocity Entropy,Signal Entropy,Slope at Closing Tent Maximum Acceleration,Blink Duration,\
                Maximum Acceleration Velocity Ratio";
    let steps: Vec<Vec<&str>> = vec![
        vec!["--seed", "7", "synth", "blink", "--with-wires", "--duration-s", "120", "--output", "eog.csv", "--truth", "truth.csv"],
        vec!["filter", "--input", "eog.csv", "--output", "eog_filtered.csv"],
        vec!["detect", "--input", "eog.csv", "--truth", "truth.csv", "--output", "segments.csv"],
        vec!["features", "eog", "--input", "eog.csv", "--segments", "segments.csv", "--output", "features.csv"],
        vec!["features", "eog", "--input", "eog.csv", "--truth", "truth.csv", "--normalize", "--output", "features_norm.csv"],
        vec!["cull", "individual", "--input", "features.csv", "--feature", "Blink Duration", "--output", "individual.json"],
        vec!["cull", "bfs", "--input", "features.csv", "--features", five, "--bins", "6", "--output", "bfs.json"],
        vec!["cull", "apply", "--input", "features.csv", "--bounds", "bfs.json", "--output", "apply.json", "--predictions", "predictions.csv"],
        vec!["sweep", "--input", "features.csv", "--k", "4", "--candidates", five, "--bins", "4", "--output", "sweep.csv"],
        vec!["shapley", "--input", "features.csv", "--features", five, "--output", "shap.csv", "--importance", "importance.csv"],
        vec!["shapley", "--input", "features.csv", "--features", five, "--background", "rows", "--output", "shap_rows.csv"],
        vec!["plotdata", "eog", "--input", "eog.csv", "--segments", "segments.csv", "--output", "plot_eog.csv"],
        vec!["plotdata", "features", "--input", "features.csv", "--output", "plot_features.csv"],
        vec!["--seed", "3", "synth", "eda", "--duration-s", "120", "--output", "eda.csv", "--truth", "eda_truth.csv"],
        vec!["filter", "--input", "eda.csv", "--component", "tonic", "--output", "eda_tonic.csv"],
        vec!["features", "eda", "--input", "eda.csv", "--output", "eda_features.csv"],
        vec!["plotdata", "eda", "--input", "eda.csv", "--output", "plot_eda.csv"],
        vec!["survey", "score", "--input", "responses.csv", "--output", "scores.csv"],
        vec!["plotdata", "survey", "--input", "responses.csv", "--output", "plot_survey.csv"],
    ];
    let mut written = Vec::new();
    for args in &steps {
        ok_in(dir, args, threads);
        for (i, a) in args.iter().enumerate() {
            let flag = i > 0 && matches!(args[i - 1], "--output" | "--truth" | "--predictions" | "--importance");
            if flag && !(args[i - 1] == "--truth" && args.contains(&"--input")) {
                written.push(a.to_string());
            }
        }
        let primary = args[args.iter().position(|a| *a == "--output").unwrap() + 1];
        written.push(format!("{primary}.manifest.json"));
    }
    written
}

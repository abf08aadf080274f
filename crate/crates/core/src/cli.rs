//! `scribkit` command line. Every subcommand is a thin wrapper over a
//! library call.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::DEFAULT_IGNORE;
use crate::overlay::{overlay_dataset, Colormap};
use crate::pipeline::{ablate_dataset, run_dataset, NoiseMode, ParameterProfile};
use crate::stats::{dataset_stats, render_report, StatsOptions};

pub const PROFILE_DIR_ENV: &str = "SCRIBKIT_PROFILE_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "scribkit", version, about = "Synthesize scribble labels from dense segmentation masks")]
pub struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate scribble rasters and sidecars for a directory of label masks.
    Generate(GenerateArgs),
    /// Compare scribble rasters with their dense masks.
    Stats(StatsArgs),
    /// Shrink every scribble of a generated dataset to a fraction of its length.
    Ablate(AblateArgs),
    /// Paint scribbles over the source photographs.
    Overlay(OverlayArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NoiseArg {
    Sqrt,
    Literal,
}

impl From<NoiseArg> for NoiseMode {
    fn from(n: NoiseArg) -> Self {
        match n {
            NoiseArg::Sqrt => NoiseMode::SqrtArea,
            NoiseArg::Literal => NoiseMode::LiteralArea,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Built-in profile name, a TOML file, or a name resolved in $SCRIBKIT_PROFILE_DIR.
    #[arg(long, default_value = "s4pascal")]
    pub profile: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub parallelism: Option<usize>,
    #[arg(long, value_enum)]
    pub noise_mode: Option<NoiseArg>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub dense: PathBuf,
    #[arg(long)]
    pub scribbles: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Boundary distance thresholds in pixels.
    #[arg(long = "d", value_delimiter = ',', default_values_t = [10u32, 20, 30])]
    pub thresholds: Vec<u32>,
    #[arg(long, default_value_t = DEFAULT_IGNORE)]
    pub ignore_value: u16,
    /// Do not treat class/ignore edges as boundaries.
    #[arg(long)]
    pub ignore_not_boundary: bool,
    /// Map dense label 0 to ignore and shift the other labels down by one.
    #[arg(long)]
    pub reduce_zero_label: bool,
    #[arg(long)]
    pub parallelism: Option<usize>,
}

fn parse_ratio(s: &str) -> std::result::Result<f64, String> {
    let r: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if r > 0.0 && r <= 1.0 {
        Ok(r)
    } else {
        Err(format!("ratio must lie in (0, 1], got {r}"))
    }
}

#[derive(Debug, Args)]
pub struct AblateArgs {
    #[arg(long)]
    pub scribbles: PathBuf,
    #[arg(long, value_parser = parse_ratio)]
    pub ratio: f64,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct OverlayArgs {
    #[arg(long)]
    pub images: PathBuf,
    #[arg(long)]
    pub scribbles: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// JSON object mapping class ids to [r, g, b]; unlisted classes use the VOC palette.
    #[arg(long)]
    pub colormap: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_IGNORE)]
    pub ignore_value: u16,
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Resolves `--profile`: built-in name, existing file, then
/// `$SCRIBKIT_PROFILE_DIR/<name>` or `<name>.toml`.
pub fn resolve_profile(spec: &str) -> Result<ParameterProfile> {
    if let Some(p) = ParameterProfile::builtin(spec) {
        return Ok(p);
    }
    let direct = Path::new(spec);
    if direct.is_file() {
        return ParameterProfile::from_file(direct);
    }
    if let Some(dirs) = std::env::var_os(PROFILE_DIR_ENV) {
        for dir in std::env::split_paths(&dirs) {
            for candidate in [dir.join(spec), dir.join(format!("{spec}.toml"))] {
                if candidate.is_file() {
                    return ParameterProfile::from_file(&candidate);
                }
            }
        }
    }
    Err(Error::Profile(format!(
        "no built-in profile or profile file named {spec:?} (built-ins: {})",
        ParameterProfile::BUILTIN.join(", ")
    )))
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        print!("{}", text());
    }
}

fn generate(a: &GenerateArgs, json: bool) -> std::result::Result<i32, Failure> {
    let mut profile = match resolve_profile(&a.profile) {
        Ok(p) => p,
        Err(e) => return Err(Failure::Usage(e.to_string())),
    };
    if let Some(n) = a.noise_mode {
        profile.noise_mode = n.into();
    }
    let summary =
        run_dataset(&a.input, &a.output, &profile, a.seed, a.parallelism.unwrap_or_else(default_parallelism))?;
    emit(json, &summary, || {
        format!(
            "images {} (unreadable {})\nobjects {}: emitted {}, failed {}, skipped small {}\nwall time {:.2}s\n",
            summary.n_images,
            summary.n_images_unreadable,
            summary.n_objects_considered,
            summary.n_scribbles_emitted,
            summary.n_blobs_failed,
            summary.n_blobs_skipped_small,
            summary.wall_time_seconds
        )
    });
    Ok(if summary.n_images_unreadable > 0 { EXIT_FAILURE } else { EXIT_OK })
}

fn stats(a: &StatsArgs, json: bool) -> std::result::Result<i32, Failure> {
    let opts = StatsOptions {
        thresholds: a.thresholds.clone(),
        ignore_value: a.ignore_value,
        ignore_is_class: !a.ignore_not_boundary,
        reduce_zero_label: a.reduce_zero_label,
        parallelism: a.parallelism.unwrap_or_else(default_parallelism),
    };
    let s = dataset_stats(&a.dense, &a.scribbles, &opts)?;
    let table = render_report(&s, &a.out)?;
    emit(json, &s, || table);
    Ok(EXIT_OK)
}

fn ablate(a: &AblateArgs, json: bool) -> std::result::Result<i32, Failure> {
    let s = ablate_dataset(&a.scribbles, &a.output, a.ratio)?;
    emit(json, &s, || {
        format!(
            "images {}, records {}, labeled px {} -> {}\n",
            s.n_images, s.n_records, s.labeled_px_before, s.labeled_px_after
        )
    });
    Ok(EXIT_OK)
}

fn overlay(a: &OverlayArgs, json: bool) -> std::result::Result<i32, Failure> {
    let colormap = match &a.colormap {
        Some(path) => Colormap::from_file(path)?,
        None => Colormap::default(),
    };
    let n = overlay_dataset(&a.images, &a.scribbles, &a.output, &colormap, a.ignore_value)?;
    emit(json, &serde_json::json!({ "n_overlays": n }), || format!("wrote {n} overlays\n"));
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => generate(a, cli.json),
        Command::Stats(a) => stats(a, cli.json),
        Command::Ablate(a) => ablate(a, cli.json),
        Command::Overlay(a) => overlay(a, cli.json),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

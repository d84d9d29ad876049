mod error;
mod io;
mod overlay;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clumpsplit::evaluation::match_label_maps;
use clumpsplit::splitter::MinConcaveArea;
use clumpsplit::{
    generate_scene, run, MatchCounts, PipelineConfig, PipelineInput, SceneParams,
    SegmentationResult, SplitConfig, SplitTrace, ThresholdConfig, ThresholdMethod, VacReport,
};
use serde::Serialize;

use crate::error::CliError;
use crate::io::LabelFormat;

#[derive(Debug, Parser)]
#[command(name = "clumpsplit", version, about = "Split overlapping blobs at their bottlenecks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Threshold a gray image, split its clumps and write labels and a report.
    Segment(SegmentArgs),
    /// Split the clumps of a binary mask and print cell centroids as CSV.
    Split(SplitArgs),
    /// Score a predicted label map against ground truth.
    Evaluate(EvaluateArgs),
    /// Generate a synthetic scene of overlapping ellipses.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct SplitOptions {
    /// Low-pass bandwidth applied to the radial signature.
    #[arg(long, default_value_t = 50, env = "CLUMPSPLIT_BANDWIDTH")]
    bandwidth: usize,
    /// Samples on each side used by the slope fits.
    #[arg(long, default_value_t = 5, env = "CLUMPSPLIT_HALF_WINDOW")]
    half_window: usize,
    /// Extrema weaker than this fraction of the strongest are ignored.
    #[arg(long, default_value_t = 0.05, env = "CLUMPSPLIT_PROMINENCE_FLOOR")]
    prominence_floor: f64,
    /// Smallest concave part, in pixels.
    #[arg(long, default_value_t = 3, env = "CLUMPSPLIT_MIN_CONCAVE_PIXELS")]
    min_concave_pixels: usize,
    /// Smallest concave part, as a fraction of the clump area.
    #[arg(long, default_value_t = 0.005, env = "CLUMPSPLIT_MIN_CONCAVE_FRACTION")]
    min_concave_fraction: f64,
    /// Maximum number of nested cuts per clump.
    #[arg(long, default_value_t = 32, env = "CLUMPSPLIT_MAX_DEPTH")]
    max_depth: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0, env = "CLUMPSPLIT_WORKERS")]
    workers: usize,
}

impl SplitOptions {
    fn config(&self, threshold: ThresholdConfig) -> Result<PipelineConfig, CliError> {
        let config = PipelineConfig {
            split: SplitConfig {
                bandwidth: self.bandwidth,
                half_window: self.half_window,
                prominence_floor: self.prominence_floor,
                min_concave_area: MinConcaveArea {
                    pixels: self.min_concave_pixels,
                    fraction: self.min_concave_fraction,
                },
                max_depth: self.max_depth,
            },
            threshold,
            workers: self.workers,
        };
        config.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(config)
    }
}

#[derive(Debug, Args)]
struct SegmentArgs {
    /// Gray input image (PNG, PNM or TIFF).
    input: PathBuf,
    /// Directory for the output files.
    #[arg(short, long, default_value = ".", env = "CLUMPSPLIT_OUT_DIR")]
    out_dir: PathBuf,
    /// Objects are darker than the background.
    #[arg(long, env = "CLUMPSPLIT_INVERT")]
    invert: bool,
    /// Fixed threshold instead of histogram valley selection.
    #[arg(long, env = "CLUMPSPLIT_THRESHOLD")]
    threshold: Option<u8>,
    /// Low-pass bandwidth applied to the histogram.
    #[arg(long, default_value_t = 8, env = "CLUMPSPLIT_HISTOGRAM_BANDWIDTH")]
    histogram_bandwidth: usize,
    /// Label map format.
    #[arg(long, value_enum, default_value_t = LabelFormat::Png, env = "CLUMPSPLIT_FORMAT")]
    format: LabelFormat,
    /// Also write an RGB image with the cuts drawn on the input.
    #[arg(long, env = "CLUMPSPLIT_OVERLAY")]
    overlay: bool,
    #[command(flatten)]
    split: SplitOptions,
}

#[derive(Debug, Args)]
struct SplitArgs {
    /// Mask image; zero is background and at most one other value may occur.
    mask: PathBuf,
    /// Binarise a non-binary image at this level (foreground is above it).
    #[arg(long, env = "CLUMPSPLIT_THRESHOLD")]
    threshold: Option<u8>,
    #[command(flatten)]
    split: SplitOptions,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["pred", "counts"]))]
struct EvaluateArgs {
    /// Predicted label map (PNG or CSV).
    #[arg(long, requires = "truth")]
    pred: Option<PathBuf>,
    /// Ground-truth label map (PNG or CSV).
    #[arg(long, requires = "pred")]
    truth: Option<PathBuf>,
    /// Precomputed counts: segment,split,merge,add,missing.
    #[arg(long, value_parser = parse_counts)]
    counts: Option<MatchCounts>,
}

fn parse_counts(s: &str) -> Result<MatchCounts, String> {
    let v = s
        .split(',')
        .map(|n| n.trim().parse::<u64>().map_err(|e| format!("{n:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    match v[..] {
        [a, b, c, d, e] => Ok(MatchCounts::new(a, b, c, d, e)),
        _ => Err(format!("expected 5 comma-separated counts, got {}", v.len())),
    }
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Directory for the output files.
    #[arg(short, long, default_value = ".", env = "CLUMPSPLIT_OUT_DIR")]
    out_dir: PathBuf,
    /// File name prefix.
    #[arg(long, default_value = "scene")]
    name: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 512)]
    width: usize,
    #[arg(long, default_value_t = 512)]
    height: usize,
    #[arg(long, default_value_t = 2)]
    min_count: usize,
    #[arg(long, default_value_t = 4)]
    max_count: usize,
    #[arg(long, default_value_t = 15.0)]
    min_axis: f64,
    #[arg(long, default_value_t = 40.0)]
    max_axis: f64,
    /// Lower bound of the centre distance over the sum of radii.
    #[arg(long, default_value_t = 0.8)]
    min_ratio: f64,
    #[arg(long, default_value_t = 1.2)]
    max_ratio: f64,
    #[arg(long, default_value_t = 300.0)]
    min_area: f64,
    #[arg(long, default_value_t = 200)]
    foreground: u8,
    #[arg(long, default_value_t = 30)]
    background: u8,
    /// Standard deviation of additive Gaussian noise.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
}

#[derive(Serialize)]
struct ClumpReport<'a> {
    clump_label: u32,
    cuts: usize,
    trace: &'a SplitTrace,
}

#[derive(Serialize)]
struct SegmentReport<'a> {
    input: &'a Path,
    config: &'a PipelineConfig,
    threshold: Option<u8>,
    clump_count: usize,
    cell_count: usize,
    clumps: Vec<ClumpReport<'a>>,
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".into())
}

fn centroid_csv(result: &SegmentationResult) -> String {
    let mut out = String::from("label,x,y,area\n");
    for cell in &result.cells {
        out.push_str(&format!(
            "{},{:.3},{:.3},{}\n",
            cell.label,
            cell.centroid.x,
            cell.centroid.y,
            cell.area()
        ));
    }
    out
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, contents).map_err(CliError::io(path))
}

fn segment(args: &SegmentArgs) -> Result<(), CliError> {
    let method = match args.threshold {
        Some(threshold) => ThresholdMethod::Fixed { threshold },
        None => match ThresholdMethod::default() {
            ThresholdMethod::Sdd {
                half_window,
                prominence_floor,
                ..
            } => ThresholdMethod::Sdd {
                bandwidth: args.histogram_bandwidth,
                half_window,
                prominence_floor,
            },
            other => other,
        },
    };
    let config = args.split.config(ThresholdConfig {
        method,
        invert: args.invert,
    })?;
    let image = io::read_gray(&args.input)?;
    let result = run(&PipelineInput::Gray(image.clone()), &config)?;

    fs::create_dir_all(&args.out_dir).map_err(CliError::io(&args.out_dir))?;
    let stem = stem(&args.input);
    let out = |suffix: &str| args.out_dir.join(format!("{stem}_{suffix}"));

    io::write_labels(
        &out(&format!("labels.{}", args.format.extension())),
        &result.label_map,
        args.format,
    )?;
    write(&out("centroids.csv"), centroid_csv(&result))?;
    let report = SegmentReport {
        input: &args.input,
        config: &result.config,
        threshold: result.threshold,
        clump_count: result.clump_count(),
        cell_count: result.cells.len(),
        clumps: result
            .traces
            .iter()
            .enumerate()
            .map(|(i, trace)| ClumpReport {
                clump_label: i as u32 + 1,
                cuts: trace.cuts(),
                trace,
            })
            .collect(),
    };
    write(&out("report.json"), serde_json::to_vec_pretty(&report)?)?;
    if args.overlay {
        let mut rgb = io::gray_to_rgb(&image);
        overlay::draw(&mut rgb, &result);
        io::write_rgb(&out("overlay.png"), &rgb)?;
    }
    println!(
        "{}: threshold {}, {} clumps, {} cells",
        args.input.display(),
        result.threshold.map_or_else(|| "-".into(), |t| t.to_string()),
        result.clump_count(),
        result.cells.len()
    );
    Ok(())
}

fn split(args: &SplitArgs) -> Result<(), CliError> {
    let config = args.split.config(ThresholdConfig::default())?;
    let image = io::read_gray(&args.mask)?;
    let mask = match (io::binary_mask(&image), args.threshold) {
        (_, Some(t)) => {
            let data = image.data().iter().map(|&v| v > t).collect();
            clumpsplit::BinaryMask::from_vec(image.width(), image.height(), data)
                .expect("image dimensions")
        }
        (Some(mask), None) => mask,
        (None, None) => {
            return Err(CliError::Config(format!(
                "{} is not binary; pass --threshold to binarise it",
                args.mask.display()
            )))
        }
    };
    let result = run(&PipelineInput::Mask(mask), &config)?;
    print!("{}", centroid_csv(&result));
    Ok(())
}

fn evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let counts = match (&args.counts, &args.pred, &args.truth) {
        (Some(c), _, _) => *c,
        (None, Some(pred), Some(truth)) => {
            match_label_maps(&io::read_labels(pred)?, &io::read_labels(truth)?)?
        }
        _ => unreachable!("clap enforces the argument groups"),
    };
    let report = VacReport::from_counts(counts)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn synth(args: &SynthArgs) -> Result<(), CliError> {
    let params = SceneParams {
        width: args.width,
        height: args.height,
        count: (args.min_count, args.max_count),
        semi_axis: (args.min_axis, args.max_axis),
        overlap_ratio: (args.min_ratio, args.max_ratio),
        min_area: args.min_area,
        foreground: args.foreground,
        background: args.background,
        noise_sigma: args.noise,
        seed: args.seed,
        ..SceneParams::default()
    };
    let scene = generate_scene(&params)?;
    fs::create_dir_all(&args.out_dir).map_err(CliError::io(&args.out_dir))?;
    let out = |suffix: &str| args.out_dir.join(format!("{}_{suffix}", args.name));
    io::write_gray(&out("image.png"), &scene.image)?;
    io::write_labels(&out("truth.png"), &scene.truth, LabelFormat::Png)?;
    let meta = serde_json::json!({
        "params": scene.params,
        "ellipses": scene.ellipses,
    });
    write(&out("scene.json"), serde_json::to_vec_pretty(&meta)?)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Segment(args) => segment(args),
        Command::Split(args) => split(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Synth(args) => synth(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("clumpsplit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

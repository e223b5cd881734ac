//! The `mdlp` command line.

use std::collections::HashSet;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mdlp_core::{tile_vistex, LabeledImage};

use crate::config::{default_grid, OutputFormat, RunConfig, Settings};
use crate::corpus;
use crate::error::{Error, Result};
use crate::index::FeatureIndex;
use crate::ingest::{decode_image, ingest_directory, save_image};
use crate::pipeline::{evaluate_index, index_manifest, query_image};
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "mdlp",
    version,
    about = "Colour texture retrieval with multichannel local patterns"
)]
struct Cli {
    /// TOML file with defaults for the shared flags
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(flatten)]
    shared: SharedFlags,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SharedFlags {
    /// Dataset root directory
    #[arg(long, global = true, value_name = "DIR")]
    dataset: Option<PathBuf>,
    /// Label rule: folders, corel or csv:<path>
    #[arg(long, global = true, value_name = "RULE")]
    labels: Option<String>,
    /// Ring neighbour count
    #[arg(long, global = true)]
    nb: Option<u32>,
    /// Ring radius in pixels
    #[arg(long, global = true)]
    radius: Option<u32>,
    /// Descriptor: mdlp, lbp or lmep
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Keep raw histogram counts
    #[arg(long, global = true)]
    no_normalize: bool,
    /// Index file path
    #[arg(long, global = true, value_name = "PATH")]
    index: Option<PathBuf>,
    /// Comma-separated retrieval depths
    #[arg(long, global = true, value_delimiter = ',', value_name = "LIST")]
    nr_grid: Option<Vec<usize>>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

impl SharedFlags {
    fn settings(self) -> Settings {
        Settings {
            dataset: self.dataset,
            labels: self.labels,
            nb: self.nb,
            radius: self.radius,
            mode: self.mode,
            normalize: self.no_normalize.then_some(false),
            index: self.index,
            nr_grid: self.nr_grid,
            format: self.format,
            jobs: self.jobs,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Describe every image of a dataset and write an index file
    Index,
    /// Rank the indexed images against a query image
    Query {
        image: PathBuf,
        /// Number of matches to list
        #[arg(long, default_value_t = 10)]
        nr: usize,
    },
    /// Use every indexed image as a query and report ARP/ARR
    Evaluate {
        /// Write the n_r,arp,arr CSV here
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Write per-category results here
        #[arg(long, value_name = "PATH")]
        per_category: Option<PathBuf>,
    },
    /// Cut 512x512 textures into 16 non-overlapping 128x128 tiles
    Tile {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, short, value_name = "DIR")]
        output: PathBuf,
        /// Write all tiles directly into the output directory instead of one folder per source
        #[arg(long)]
        flat: bool,
    },
    /// Write the procedural texture corpus as a folder-per-class dataset
    Synth {
        #[arg(long, short, value_name = "DIR")]
        output: PathBuf,
        #[arg(long, default_value_t = corpus::COMPARISON_CLASSES)]
        classes: usize,
        #[arg(long, default_value_t = corpus::DEFAULT_SEED)]
        seed: u64,
        /// Write the 16 tiles of each texture instead of the 512x512 sources
        #[arg(long)]
        tiles: bool,
    },
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let config = match resolve(cli.config.as_deref(), cli.shared) {
        Ok(c) => c,
        Err(e @ Error::Io { .. }) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
        Err(e) => {
            // anything wrong with flags or the config file is a usage error
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = match cli.command {
        Command::Index => cmd_index(&config),
        Command::Query { image, nr } => cmd_query(&config, &image, nr),
        Command::Evaluate { output, per_category } => cmd_evaluate(&config, output.as_deref(), per_category.as_deref()),
        Command::Tile { inputs, output, flat } => cmd_tile(&inputs, &output, flat),
        Command::Synth {
            output,
            classes,
            seed,
            tiles,
        } => cmd_synth(&output, classes, seed, tiles),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn resolve(config_file: Option<&Path>, flags: SharedFlags) -> Result<RunConfig> {
    let file = match config_file {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    RunConfig::resolve(flags.settings().over(file))
}

fn require<'a>(value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    value
        .as_deref()
        .ok_or_else(|| Error::Config(format!("{flag} is required for this command")))
}

fn build_from_dataset(config: &RunConfig, root: &Path) -> Result<FeatureIndex> {
    let manifest = ingest_directory(root, &config.labels)?;
    for s in &manifest.skipped {
        eprintln!("warning: skipped {}: {}", s.path.display(), s.reason);
    }
    index_manifest(&manifest, &config.feature, config.jobs)
}

fn cmd_index(config: &RunConfig) -> Result<i32> {
    let root = require(&config.dataset, "--dataset")?;
    let path = require(&config.index, "--index")?;
    let start = Instant::now();
    let index = build_from_dataset(config, root)?;
    let bytes = index.save(path)?;
    println!(
        "indexed {} images, dimension {}, {} bytes -> {} in {:.2}s",
        index.entries.len(),
        index.layout.dimension(),
        bytes,
        path.display(),
        start.elapsed().as_secs_f64()
    );
    Ok(EXIT_OK)
}

fn cmd_query(config: &RunConfig, image: &Path, depth: usize) -> Result<i32> {
    let path = require(&config.index, "--index")?;
    let index = FeatureIndex::load(path)?;
    let overrides = config.feature_explicit.then_some(config.feature);
    let result = query_image(&index, image, overrides, depth)?;
    let text = match config.format {
        OutputFormat::Table => report::matches_table(&result),
        OutputFormat::Csv => report::matches_csv(&result),
    };
    print!("{text}");
    Ok(EXIT_OK)
}

fn cmd_evaluate(config: &RunConfig, output: Option<&Path>, per_category: Option<&Path>) -> Result<i32> {
    let (index, name) = match (&config.index, &config.dataset) {
        (Some(path), _) => (FeatureIndex::load(path)?, path.display().to_string()),
        (None, Some(root)) => (build_from_dataset(config, root)?, root.display().to_string()),
        (None, None) => return Err(Error::Config("evaluate needs --index or --dataset".into())),
    };
    let grid = match &config.nr_grid {
        Some(grid) => grid.clone(),
        None => {
            let mut sizes = std::collections::HashMap::new();
            for e in &index.entries {
                *sizes.entry(e.category).or_insert(0usize) += 1;
            }
            default_grid(sizes.values().copied().max().unwrap_or(0))
        }
    };
    let start = Instant::now();
    let mut report = evaluate_index(&index, &grid, config.jobs)?;
    report.metadata.dataset = name;
    if let Some(path) = output {
        fs::write(path, report::eval_csv(&report)).map_err(|e| Error::io(path, e))?;
    }
    if let Some(path) = per_category {
        fs::write(path, report::category_csv(&report)).map_err(|e| Error::io(path, e))?;
    }
    match config.format {
        OutputFormat::Table => {
            print!("{}", report::eval_table(&report));
            println!("evaluated in {:.2}s", start.elapsed().as_secs_f64());
        }
        OutputFormat::Csv => print!("{}", report::eval_csv(&report)),
    }
    Ok(EXIT_OK)
}

fn tile_one(input: &Path, output: &Path, flat: bool, stems: &mut HashSet<String>) -> Result<usize> {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .ok_or_else(|| Error::Inconsistent(format!("{} has no file name", input.display())))?;
    if !stems.insert(stem.clone()) {
        return Err(Error::Inconsistent(format!(
            "another input already produced tiles named {stem}_r*_c*"
        )));
    }
    let source = LabeledImage {
        id: stem.clone(),
        category: 0,
        image: decode_image(input)?,
    };
    let tiles = tile_vistex(&source)?;
    let dir = if flat { output.to_path_buf() } else { output.join(&stem) };
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    for tile in &tiles {
        save_image(&tile.image, &dir.join(format!("{}.png", tile.id)))?;
    }
    Ok(tiles.len())
}

fn cmd_tile(inputs: &[PathBuf], output: &Path, flat: bool) -> Result<i32> {
    let mut stems = HashSet::new();
    let (mut written, mut failed) = (0, 0);
    let mut worst = EXIT_OK;
    for input in inputs {
        match tile_one(input, output, flat, &mut stems) {
            Ok(n) => written += n,
            Err(e) => {
                eprintln!("error: {}: {e}", input.display());
                failed += 1;
                worst = worst.max(e.exit_code());
            }
        }
    }
    println!(
        "wrote {written} tiles from {} inputs ({failed} failed)",
        inputs.len() - failed
    );
    Ok(worst)
}

fn cmd_synth(output: &Path, classes: usize, seed: u64, tiles: bool) -> Result<i32> {
    let images = if tiles {
        corpus::synthetic_tiles(classes, seed)?
    } else {
        corpus::synthetic_sources(classes, seed)
    };
    for img in &images {
        let dir = output.join(corpus::source_name(img.category));
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        save_image(&img.image, &dir.join(format!("{}.png", img.id)))?;
    }
    println!(
        "wrote {} images in {classes} classes to {}",
        images.len(),
        output.display()
    );
    Ok(EXIT_OK)
}

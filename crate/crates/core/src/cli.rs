//! Command-line front end. [`run`] parses arguments, dispatches, and maps
//! errors to exit codes: 0 ok, 1 usage, 2 parse or I/O, 3 void model or
//! unsatisfiable request, 4 sample inconsistent with the model.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::experiment::{
    parse_setups, results_csv, run_experiments, summarize, summary_csv, ExperimentSetup, HarnessOptions,
};
use crate::interactions::{coverage_csv, coverage_of, enumerate_valid_interactions, CoverageRow};
use crate::model::{convert, load_model, FeatureModel, ModelFormat};
use crate::sampler::file::{parse_sample_file, write_sample_file};
use crate::sampler::{multiwise_sample, GroupOrder, GroupSpec, Sample, SamplerOptions, DEFAULT_MAX_T};
use crate::sat::{core_dead_features, enumerate_all_configurations, is_satisfiable, CompletionPolicy};
use crate::{Error, Result};

pub const MAX_T_ENV: &str = "MULTIWISE_MAX_T";

#[derive(Debug, Parser)]
#[command(name = "multiwise", version, about = "t-wise sampling with per-group interaction strengths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a sample covering every group at its strength.
    Sample(SampleArgs),
    /// Measure t-wise coverage of a sample.
    Coverage(CoverageArgs),
    /// Run repeated experiment setups and write CSV results.
    Experiment(ExperimentArgs),
    /// Convert a model between .uvl and .dimacs.
    Convert(ConvertArgs),
    /// Print model statistics, core and dead features.
    Inspect(InspectArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrderArg {
    Spec,
    AscendingT,
    DescendingT,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CompletionArg {
    Deselect,
    Select,
    Random,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("strength").required(true).args(["groups", "t"])))]
pub struct SampleArgs {
    /// Model file (.uvl, .dimacs or .cnf).
    pub model: PathBuf,
    /// JSON group specification.
    #[arg(long)]
    pub groups: Option<PathBuf>,
    /// Cover all features at this strength.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "spec")]
    pub order: OrderArg,
    /// Complete configurations once after all groups instead of after each.
    #[arg(long)]
    pub defer_completion: bool,
    #[arg(long, value_enum, default_value = "deselect")]
    pub completion: CompletionArg,
    /// Write the sample here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    pub model: PathBuf,
    pub sample: PathBuf,
    /// Interaction strength. With a group file, defaults to each group's own.
    #[arg(long)]
    pub t: Option<usize>,
    /// `all` or a JSON group specification.
    #[arg(long, default_value = "all")]
    pub scope: String,
    /// Print CSV rows instead of key=value lines.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    pub model: PathBuf,
    /// Comma-separated subset of Exp1..Exp7.
    #[arg(long, default_value = "Exp1,Exp2,Exp3,Exp4,Exp5,Exp6,Exp7")]
    pub setups: String,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Record time_ms as 0 so that reruns give byte-identical CSV.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    pub input: PathBuf,
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    pub model: PathBuf,
    /// Count valid configurations only up to this many.
    #[arg(long, default_value_t = 100_000)]
    pub enumerate_cap: usize,
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Run { source, .. } => exit_code(source),
        Error::VoidModel | Error::UnsatisfiablePartial => 3,
        Error::SampleFile(e) if e.is_inconsistency() => 4,
        Error::InconsistentSample(_) | Error::UnknownFeature(_) => 4,
        Error::StrengthTooLarge { .. } | Error::NoRecords | Error::CapExceeded { .. } => 1,
        Error::Uvl(_)
        | Error::Dimacs(_)
        | Error::Model(_)
        | Error::SampleFile(_)
        | Error::GroupSpec(_)
        | Error::UnknownFormat(_)
        | Error::Unsupported(_)
        | Error::Io(_) => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Sample(a) => cmd_sample(a),
        Command::Coverage(a) => cmd_coverage(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Convert(a) => cmd_convert(a),
        Command::Inspect(a) => cmd_inspect(a),
    }
}

fn max_t() -> usize {
    std::env::var(MAX_T_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_T)
}

fn model_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".into())
}

fn read_spec(model: &FeatureModel, path: &Path) -> Result<GroupSpec> {
    GroupSpec::from_json(model, &fs::read_to_string(path)?)
}

fn cmd_sample(a: SampleArgs) -> Result<()> {
    let model = load_model(&a.model)?;
    let spec = match (&a.groups, a.t) {
        (Some(path), _) => read_spec(&model, path)?,
        (None, Some(t)) => GroupSpec::uniform(&model, t),
        (None, None) => unreachable!("clap requires --groups or --t"),
    };
    let options = SamplerOptions {
        order: match a.order {
            OrderArg::Spec => GroupOrder::Spec,
            OrderArg::AscendingT => GroupOrder::AscendingT,
            OrderArg::DescendingT => GroupOrder::DescendingT,
        },
        defer_completion: a.defer_completion,
        completion: match a.completion {
            CompletionArg::Deselect => CompletionPolicy::PreferDeselect,
            CompletionArg::Select => CompletionPolicy::PreferSelect,
            CompletionArg::Random => CompletionPolicy::Random { seed: a.seed },
        },
        seed: a.seed,
        max_t: max_t(),
        ..SamplerOptions::default()
    };
    let start = Instant::now();
    let sample = multiwise_sample(&model, &spec, &options)?;
    let ms = start.elapsed().as_secs_f64() * 1000.0;
    let text = write_sample_file(&model, &sample, &model_name(&a.model), a.seed);
    let summary = format!("size={} time_ms={ms:.3}", sample.len());
    match a.out {
        Some(path) => {
            fs::write(path, text)?;
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn load_sample(model: &FeatureModel, path: &Path) -> Result<Sample> {
    let sample = parse_sample_file(&fs::read_to_string(path)?)?.into_sample(model)?;
    for (i, c) in sample.configurations().iter().enumerate() {
        if !is_satisfiable(model, c) {
            return Err(Error::InconsistentSample(format!(
                "configuration {} is not valid",
                i + 1
            )));
        }
    }
    Ok(sample)
}

fn cmd_coverage(a: CoverageArgs) -> Result<()> {
    let model = load_model(&a.model)?;
    let sample = load_sample(&model, &a.sample)?;
    let max_t = max_t();
    let check = |t: usize| {
        if t > max_t {
            Err(Error::StrengthTooLarge { t, max: max_t })
        } else {
            Ok(t)
        }
    };
    let mut rows = Vec::new();
    if a.scope == "all" {
        let t = check(a.t.unwrap_or(2))?;
        let set = enumerate_valid_interactions(&model, &model.all_features(), t)?;
        rows.push(CoverageRow {
            scope: "all".into(),
            t,
            coverage: coverage_of(&set, sample.configurations()),
        });
    } else {
        let spec = read_spec(&model, Path::new(&a.scope))?;
        for group in spec.resolve(&model, max_t)? {
            let t = check(a.t.unwrap_or(group.t))?;
            let set = enumerate_valid_interactions(&model, &group.members, t)?;
            rows.push(CoverageRow {
                scope: group.name,
                t,
                coverage: coverage_of(&set, sample.configurations()),
            });
        }
    }
    if a.csv {
        print!("{}", coverage_csv(&rows));
    } else if a.scope == "all" {
        println!("{}", rows[0].coverage);
    } else {
        for row in &rows {
            println!("group={} t={} {}", row.scope, row.t, row.coverage);
        }
    }
    Ok(())
}

fn cmd_experiment(a: ExperimentArgs) -> Result<()> {
    let model = load_model(&a.model)?;
    let setups: Vec<ExperimentSetup> = parse_setups(&a.setups).map_err(Error::GroupSpec)?;
    let options = HarnessOptions {
        repetitions: a.reps as usize,
        root_seed: a.seed,
        jobs: a.jobs,
        timing: !a.no_timing,
        sampler: SamplerOptions {
            max_t: max_t(),
            ..SamplerOptions::default()
        },
    };
    let records = run_experiments(&model, &model_name(&a.model), &setups, &options)?;
    let summary = summarize(&records)?;
    fs::create_dir_all(&a.out_dir)?;
    let results_path = a.out_dir.join("results.csv");
    let summary_path = a.out_dir.join("summary.csv");
    fs::write(&results_path, results_csv(&records))?;
    fs::write(&summary_path, summary_csv(&summary))?;
    println!(
        "records={} results={} summary={}",
        records.len(),
        results_path.display(),
        summary_path.display()
    );
    Ok(())
}

fn cmd_convert(a: ConvertArgs) -> Result<()> {
    let from = ModelFormat::from_path(&a.input)?;
    let to = ModelFormat::from_path(&a.output)?;
    let out = convert(&fs::read_to_string(&a.input)?, from, to)?;
    fs::write(&a.output, out)?;
    Ok(())
}

fn cmd_inspect(a: InspectArgs) -> Result<()> {
    let model = load_model(&a.model)?;
    let names = |vars: &[usize]| {
        vars.iter()
            .map(|&v| model.features()[v].as_str())
            .collect::<Vec<_>>()
            .join(",")
    };
    println!("features={}", model.num_features());
    println!("clauses={}", model.clauses().len());
    println!("aux_vars={}", model.aux_var_count());
    let cd = core_dead_features(&model)?;
    println!("core={}", names(&cd.core));
    println!("dead={}", names(&cd.dead));
    match enumerate_all_configurations(&model, a.enumerate_cap) {
        Ok(all) => println!("configurations={}", all.len()),
        Err(Error::CapExceeded { cap }) => println!("configurations>{cap}"),
        Err(e) => return Err(e),
    }
    Ok(())
}

//! `perm`, `dist` and `sample`: single pipeline stages on explicit files.

use std::path::PathBuf;
use std::str::FromStr;

use timebin::linalg::MatrixFile;
use timebin::permanent::{permanent, Method};
use timebin::sampling::{draw_events, output_distribution, read_distribution, Model, SamplingInstance};
use timebin::ModeConfiguration;

use super::{compile_effective, out_path, read_unitary, save_distribution, save_events, Globals};
use super::{DISTRIBUTION_FILE, EVENTS_FILE};
use crate::config::{build_model, GramSource, ModelTag, DEFAULT_EVENTS, DEFAULT_SEED};
use crate::error::{exit, CliError, CliResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum PermMethod {
    #[default]
    Ryser,
    Naive,
}

#[derive(Clone, Debug, clap::Args)]
pub struct PermArgs {
    /// Square matrix in the JSON exchange format.
    pub matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = PermMethod::Ryser)]
    pub method: PermMethod,
}

pub fn perm(args: &PermArgs) -> CliResult<i32> {
    let m = MatrixFile::read(&args.matrix)?;
    let method = match args.method {
        PermMethod::Ryser => Method::Ryser,
        PermMethod::Naive => Method::Naive,
    };
    let p = permanent(&m, method)?;
    println!("{} {}", p.value.re, p.value.im);
    Ok(exit::OK)
}

/// Explicit unitary and input, as an alternative to --config.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct InstanceArgs {
    /// Unitary in the JSON exchange format.
    #[arg(long, requires = "input")]
    pub unitary: Option<PathBuf>,
    /// Input occupations, e.g. 1-1-1-0-0-0.
    #[arg(long)]
    pub input: Option<String>,
}

pub(crate) struct Resolved {
    pub instance: SamplingInstance,
    pub model: Model,
    pub model_tag: ModelTag,
    pub seed: u64,
    pub events: usize,
    pub out: PathBuf,
}

pub(crate) fn resolve_instance(args: &InstanceArgs, globals: &Globals) -> CliResult<Resolved> {
    match (&args.unitary, &args.input) {
        (Some(path), Some(input)) => {
            let u = read_unitary(path)?;
            let input = ModeConfiguration::from_str(input)?;
            if !input.is_collision_free() {
                return Err(CliError::config("input occupations must be 0 or 1"));
            }
            let model_tag = globals.model.unwrap_or(ModelTag::Ind);
            let gram = globals.gram.clone().map(GramSource::File);
            let model = build_model(model_tag, gram.as_ref(), input.photons())?;
            Ok(Resolved {
                instance: SamplingInstance::new(&u, input)?,
                model,
                model_tag,
                seed: globals.seed.unwrap_or(DEFAULT_SEED),
                events: globals.events.unwrap_or(DEFAULT_EVENTS),
                out: globals.out_dir(),
            })
        }
        (None, None) => {
            let cfg = globals.load()?;
            let eff = compile_effective(&cfg)?;
            Ok(Resolved {
                instance: SamplingInstance::new(&eff.unitary, cfg.input.clone())?,
                model: cfg.model,
                model_tag: cfg.model_tag,
                seed: cfg.seed,
                events: cfg.events,
                out: cfg.out,
            })
        }
        _ => Err(CliError::config("--unitary and --input must be given together")),
    }
}

#[derive(Clone, Debug, clap::Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
}

pub fn dist(args: &DistArgs, globals: &Globals) -> CliResult<i32> {
    let r = resolve_instance(&args.instance, globals)?;
    let d = output_distribution(&r.instance, &r.model)?;
    let path = out_path(&r.out, DISTRIBUTION_FILE);
    save_distribution(&path, &d)?;
    println!("model={} configurations={} file={}", r.model_tag.as_str(), d.len(), path.display());
    Ok(exit::OK)
}

#[derive(Clone, Debug, clap::Args)]
pub struct SampleArgs {
    /// Distribution CSV to draw from; otherwise computed from the instance.
    #[arg(long, conflicts_with_all = ["unitary", "input"])]
    pub distribution: Option<PathBuf>,
    #[command(flatten)]
    pub instance: InstanceArgs,
}

pub fn sample(args: &SampleArgs, globals: &Globals) -> CliResult<i32> {
    let (d, seed, events, out) = match &args.distribution {
        Some(path) => {
            let d = read_distribution(std::fs::File::open(path)?)?;
            (
                d,
                globals.seed.unwrap_or(DEFAULT_SEED),
                globals.events.unwrap_or(DEFAULT_EVENTS),
                globals.out_dir(),
            )
        }
        None => {
            let r = resolve_instance(&args.instance, globals)?;
            (output_distribution(&r.instance, &r.model)?, r.seed, r.events, r.out)
        }
    };
    let log = draw_events(&d, events, seed);
    let path = out_path(&out, EVENTS_FILE);
    save_events(&path, &log)?;
    println!("seed={seed} events={} file={}", log.len(), path.display());
    Ok(exit::OK)
}

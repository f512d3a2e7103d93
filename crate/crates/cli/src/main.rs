use std::fs::{self, File};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use banova::{
    banova_table, default_hyperparameters, fixed_effects_table_labeled, hpd_region_grid, posterior_update,
    relative_likelihood_grid, replicate_study, sample, BalancedOneWayData, GridSpec, HyperOverrides, StudyCases,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "banova", version, about = "Classical and Bayesian one-way ANOVA")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fixed-effects ANOVA table.
    Classic {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Posterior summary table for the finite, super-population and error sds.
    Banova {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        post: PosteriorArgs,
        /// Credible-interval level.
        #[arg(long, default_value_t = 0.95)]
        ci: f64,
        /// Write every posterior draw to this CSV file.
        #[arg(long, value_name = "PATH")]
        export_draws: Option<PathBuf>,
    },
    /// Relative-likelihood and posterior-density grids over (sigma_alpha, sigma_eps).
    Region {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        post: PosteriorArgs,
        /// Comma-separated coverage levels.
        #[arg(long, default_value = "0.5,0.75,0.95", value_parser = parse_levels)]
        levels: Levels,
        /// Grid size as `NAxNE`.
        #[arg(long, default_value = "100x100")]
        grid: String,
        /// Directory for the two grid files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Repeated-sampling study contrasting p-values with posterior summaries.
    Simulate {
        /// JSON file with `case_a` and `case_b` designs.
        #[arg(long, value_name = "FILE", conflicts_with = "preset")]
        spec: Option<PathBuf>,
        #[arg(long)]
        preset: Option<Preset>,
        /// Replicates per case.
        #[arg(long, default_value_t = 200)]
        reps: usize,
        /// Posterior draws per replicate.
        #[arg(long, default_value_t = 20_000)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Directory for the per-replicate CSV and aggregate JSON.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct InputArgs {
    /// CSV with header `group,value`; `-` reads standard input.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Row label for the between-group source.
    #[arg(long, default_value = "Factor")]
    factor: String,
}

#[derive(Args)]
struct PosteriorArgs {
    #[arg(long, default_value_t = 200_000)]
    draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON object overriding any of the eight hyperparameters.
    #[arg(long, value_name = "FILE")]
    hyper: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Paper,
}

#[derive(Clone)]
struct Levels(Vec<f64>);

fn parse_levels(s: &str) -> std::result::Result<Levels, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad level `{t}`")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Levels)
}

fn load(path: &Path) -> Result<BalancedOneWayData> {
    let data = if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        BalancedOneWayData::load_csv(buf.as_slice())?
    } else {
        let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        BalancedOneWayData::load_csv(file)?
    };
    Ok(data)
}

fn posterior(data: &BalancedOneWayData, args: &PosteriorArgs) -> Result<banova::PosteriorSample> {
    let mut h = default_hyperparameters(data);
    if let Some(path) = &args.hyper {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let o: HyperOverrides =
            serde_json::from_str(&text).with_context(|| format!("bad hyperparameters in {}", path.display()))?;
        h = h.with_overrides(&o);
    }
    h.validate()?;
    let post = posterior_update(&h, data)?;
    Ok(sample(&post, args.draws, args.seed)?)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Classic { input } => {
            let data = load(&input.input)?;
            let table = fixed_effects_table_labeled(&data, &input.factor)?;
            Ok(match input.format {
                Format::Text => table.render_text(),
                Format::Json => table.to_json() + "\n",
                Format::Csv => table.to_csv(),
            })
        }
        Command::Banova {
            input,
            post,
            ci,
            export_draws,
        } => {
            if !(ci > 0.0 && ci < 1.0) {
                bail!(banova::Error::Domain(format!("ci must lie in (0, 1), got {ci}")));
            }
            let data = load(&input.input)?;
            let draws = posterior(&data, &post)?;
            let table = banova_table(&draws, ci)?;
            if let Some(path) = export_draws {
                write_file(&path, &draws.to_csv())?;
            }
            Ok(match input.format {
                Format::Text => table.render_text(&input.factor),
                Format::Json => table.to_json() + "\n",
                Format::Csv => table.to_csv(),
            })
        }
        Command::Region {
            input,
            post,
            levels,
            grid,
            out_dir,
        } => {
            let spec = GridSpec::parse(&grid)?;
            let data = load(&input.input)?;
            let lik = relative_likelihood_grid(&data, &spec, &levels.0)?;
            let draws = posterior(&data, &post)?;
            let hpd = hpd_region_grid(&draws, &spec, &levels.0)?;
            fs::create_dir_all(&out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
            let (ext, render): (&str, fn(&banova::RegionGrid) -> String) = match input.format {
                Format::Json => ("json", |g| g.to_json() + "\n"),
                Format::Text | Format::Csv => ("csv", |g| g.to_csv()),
            };
            let mut out = String::new();
            for (name, g) in [("relative_likelihood", &lik), ("hpd_density", &hpd)] {
                let path = out_dir.join(format!("{name}.{ext}"));
                write_file(&path, &render(g))?;
                out.push_str(&format!("{}", path.display()));
                for l in &g.contour_levels {
                    out.push_str(&format!(" level={} threshold={}", l.confidence, l.threshold));
                }
                out.push('\n');
            }
            Ok(out)
        }
        Command::Simulate {
            spec,
            preset,
            reps,
            draws,
            seed,
            format,
            out_dir,
        } => {
            let cases = match (spec, preset) {
                (Some(path), _) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
                    serde_json::from_str::<StudyCases>(&text)
                        .map_err(|e| banova::Error::InvalidSpec(format!("{}: {e}", path.display())))?
                }
                (None, Some(Preset::Paper)) => StudyCases::paper(),
                (None, None) => bail!(banova::Error::InvalidSpec("give --spec FILE or --preset paper".into())),
            };
            let report = replicate_study(&cases.case_a, &cases.case_b, reps, draws, seed)?;
            fs::create_dir_all(&out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
            write_file(&out_dir.join("simulation_records.csv"), &report.records_csv())?;
            write_file(
                &out_dir.join("simulation_aggregate.json"),
                &(report.aggregate_json() + "\n"),
            )?;
            Ok(match format {
                Format::Text => report.render_text(),
                Format::Json => report.aggregate_json() + "\n",
                Format::Csv => report.records_csv(),
            })
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<banova::Error>() {
        Some(e) if e.is_degenerate() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sepfaces::gallery::GalleryParams;
use sepfaces::locator::LocatorConfig;
use sepfaces::report::{self, Input, ReportEnvelope, Section, SpaceChoice};
use sepfaces::{Error, Result};

/// Faces of separable and PPT states: reproduce reference claims, locate
/// product vectors, certify faces and extract edge states.
///
/// Reports are printed as JSON lines on stdout. The exit status is 0 iff
/// every claim passes.
#[derive(Parser, Debug)]
#[command(name = "sepfaces", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Relative eigenvalue cutoff for ranks.
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    /// Residual below which a vector counts as lying in a subspace.
    #[arg(long, global = true)]
    tol_residual: Option<f64>,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Also print a claim table to stderr.
    #[arg(long, global = true)]
    pretty: bool,
    /// Also write the report line to this file.
    #[arg(long, global = true, value_name = "FILE")]
    json_out: Option<PathBuf>,
}

#[derive(clap::Args, Debug, Clone)]
struct ParamArgs {
    #[arg(long, default_value_t = 2.0)]
    b: f64,
    /// Angle in radians.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "theta_frac_pi")]
    theta: Option<f64>,
    /// Angle given as pi/k.
    #[arg(long, allow_negative_numbers = true)]
    theta_frac_pi: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    s: f64,
}

impl ParamArgs {
    fn resolve(&self) -> Result<GalleryParams> {
        let theta = match (self.theta, self.theta_frac_pi) {
            (Some(t), _) => t,
            (None, Some(k)) => std::f64::consts::PI / k,
            (None, None) => GalleryParams::default().theta,
        };
        GalleryParams::new(self.b, theta, self.s)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Space {
    Kernel,
    Range,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the claim suite of one reference section (s3, s4, s5 or s6).
    Reproduce {
        section: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Locate product vectors in a subspace, or in the kernel/range of an operator.
    FindProducts {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "kernel")]
        space: Space,
    },
    /// Certify the face spanned by a family of product vectors.
    Certify { family: PathBuf },
    /// Push SIGMA away from RHO0 to the PPT boundary.
    ExtractEdge { sigma: PathBuf, rho0: PathBuf },
    /// Tabulate gUPB and general position over random six-vector families.
    GupbSearch {
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Print a reference object as JSON.
    Gallery {
        name: String,
        #[command(flatten)]
        params: ParamArgs,
    },
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn run(cli: &Cli) -> Result<ReportEnvelope> {
    let mut cfg = LocatorConfig {
        rng_seed: cli.seed,
        ..LocatorConfig::default()
    };
    if let Some(t) = cli.tol_rank {
        cfg.tol.rank_rel_tol = t;
    }
    if let Some(t) = cli.tol_residual {
        cfg.tol.residual_tol = t;
    }
    cfg.validate()?;
    match &cli.command {
        Command::Reproduce { section, params } => {
            let section: Section = section.parse()?;
            Ok(report::reproduce(section, &params.resolve()?, &cfg))
        }
        Command::FindProducts { file, space } => {
            let input = report::parse_input(&read(file)?)?;
            let space = match space {
                Space::Kernel => SpaceChoice::Kernel,
                Space::Range => SpaceChoice::Range,
            };
            report::find_products(&input, space, &cfg)
        }
        Command::Certify { family } => match report::parse_input(&read(family)?)? {
            Input::Family(f) => report::certify(&f, &cfg),
            _ => Err(Error::Parse("expected a list of product vectors".into())),
        },
        Command::ExtractEdge { sigma, rho0 } => {
            let sigma = report::parse_operator(&read(sigma)?)?;
            let rho0 = report::parse_operator(&read(rho0)?)?;
            report::extract_edge(&sigma, &rho0, &cfg)
        }
        Command::GupbSearch { count } => report::gupb_search(*count, &cfg),
        Command::Gallery { name, params } => report::gallery_object(name, &params.resolve()?, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env = match run(&cli) {
        Ok(env) => env,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let line = match env.to_json_line() {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut out = io::stdout().lock();
    if let Err(e) = writeln!(out, "{line}") {
        // a closed pipe (e.g. `| head`) is not an error worth reporting
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if let Some(path) = &cli.json_out {
        if let Err(e) = fs::write(path, format!("{line}\n")) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if cli.pretty {
        eprint!("{}", env.table());
    }
    if env.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use netform::bounds::{
    feasible_degree_set, ur_envelope, utility_envelope_asymptotic, utility_envelope_finite, welfare_envelope,
};
use netform::equilibrium::{construct_symmetric_equilibrium, enumerate_equilibria, is_dfpn_with, EnumerateOptions};
use netform::harness::sweep::{run_sweep, write_csv, Figure, RowStatus, SweepMode, SweepOverrides, SweepSpec};
use netform::harness::verify::{run_suite, Budget, Suite, Verdict};
use netform::harness::{render_svg, InstanceFile};
use netform::scalar::{format_rational, rational_to_f64};
use netform::{Error, Group, PairScoring, Rational};
use serde_json::json;

const EXIT_FAILURE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INAPPLICABLE: u8 = 3;

#[derive(Parser)]
#[command(name = "netform", version, about = "Network formation games with platform recommendations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check, enumerate, or construct equilibria of an instance file.
    #[command(subcommand)]
    Eq(EqCommand),
    /// Degree, utility, ratio, and welfare bounds over all equilibria.
    Bounds {
        #[arg(value_enum)]
        kind: BoundsKind,
        file: PathBuf,
        /// Use the large-population closed forms (utility only).
        #[arg(long)]
        asymptotic: bool,
    },
    /// Run a figure sweep and write CSV.
    Sweep(SweepArgs),
    /// Run a verification suite and print a JSON report.
    Verify {
        /// A suite name, or `all`.
        suite: String,
        /// `quick`, `standard`, `full`, or `max_n=N,points=M`.
        #[arg(long, default_value = "standard")]
        budget: Budget,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EqCommand {
    /// Decide whether the `[E]` network is an equilibrium.
    Check {
        file: PathBuf,
        #[command(flatten)]
        scoring: ScoringArg,
    },
    /// List every equilibrium.
    Enumerate {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[command(flatten)]
        scoring: ScoringArg,
        /// Search one network per symmetry orbit.
        #[arg(long)]
        canonicalize: bool,
    },
    /// Build the group-symmetric equilibrium for the file's population.
    Construct {
        file: PathBuf,
        /// Also write an instance file holding the result as `[Q]` and `[E]`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScoringArg {
    /// Score both endpoints of an add on the network after both sides' severances.
    #[arg(long)]
    joint: bool,
}

impl ScoringArg {
    fn scoring(&self) -> PairScoring {
        if self.joint {
            PairScoring::Joint
        } else {
            PairScoring::Separate
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundsKind {
    Degrees,
    Utility,
    Ur,
    Welfare,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    FiniteEnvelope,
    Asymptotic,
    BruteForce,
}

impl From<ModeArg> for SweepMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::FiniteEnvelope => SweepMode::FiniteEnvelope,
            ModeArg::Asymptotic => SweepMode::Asymptotic,
            ModeArg::BruteForce => SweepMode::BruteForce,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// fig1, fig2, fig3, or fig4.
    figure: Figure,
    /// TOML file overriding the figure's defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config's mode.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG chart beside the CSV (or `<figure>.svg`).
    #[arg(long)]
    plot: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Inapplicable(_) | Error::DegenerateDenominator(_)) => EXIT_INAPPLICABLE,
        Some(Error::Consistency(_)) => EXIT_FAILURE,
        _ => EXIT_INPUT,
    }
}

fn load(path: &Path) -> anyhow::Result<InstanceFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    InstanceFile::parse(&text).map_err(anyhow::Error::from)
}

fn print_json(value: &serde_json::Value) {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout(), "{text}");
}

/// An exact interval as decimals plus the exact fractions.
fn interval(lower: &Rational, upper: &Rational) -> serde_json::Value {
    json!({
        "lower": rational_to_f64(lower),
        "upper": rational_to_f64(upper),
        "lower_exact": format_rational(lower),
        "upper_exact": format_rational(upper),
    })
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Eq(cmd) => eq(cmd),
        Command::Bounds { kind, file, asymptotic } => bounds(kind, &file, asymptotic),
        Command::Sweep(args) => sweep(args),
        Command::Verify { suite, budget, out } => verify(&suite, budget, out.as_deref()),
    }
}

fn eq(cmd: EqCommand) -> anyhow::Result<u8> {
    match cmd {
        EqCommand::Check { file, scoring } => {
            let f = load(&file)?;
            let verdict = is_dfpn_with(&f.instance()?, f.network()?, scoring.scoring())?;
            print_json(&json!({
                "equilibrium": verdict.is_equilibrium(),
                "witness": verdict.witness(),
            }));
            Ok(if verdict.is_equilibrium() { 0 } else { EXIT_FAILURE })
        }
        EqCommand::Enumerate { file, max_n, scoring, canonicalize } => {
            let f = load(&file)?;
            let opts = EnumerateOptions { max_n, canonicalize, scoring: scoring.scoring(), ..Default::default() };
            let found = enumerate_equilibria(&f.instance()?, &opts)?;
            let nets: Vec<_> = found.equilibria.iter().map(|n| n.edges()).collect();
            print_json(&json!({
                "count": nets.len(),
                "networks_checked": found.networks_checked,
                "equilibria": nets,
            }));
            Ok(0)
        }
        EqCommand::Construct { file, out } => {
            let f = load(&file)?;
            let Some(built) = construct_symmetric_equilibrium(&f.population, &f.params)? else {
                return Err(Error::Inapplicable("blues may gain from organic links at this edge cost".into()).into());
            };
            if let Some(path) = out {
                let result = InstanceFile {
                    recs: Some(built.recs.network().clone()),
                    network: Some(built.network.clone()),
                    ..f.clone()
                };
                fs::write(&path, result.to_text()).with_context(|| format!("writing {}", path.display()))?;
            }
            print_json(&json!({
                "green_degree": built.green_degree,
                "feasible_green_degrees": built.feasible_green_degrees,
                "recommendations": built.recs.network().edges(),
                "network": built.network.edges(),
            }));
            Ok(0)
        }
    }
}

fn bounds(kind: BoundsKind, file: &Path, asymptotic: bool) -> anyhow::Result<u8> {
    let f = load(file)?;
    let (pop, params) = (&f.population, &f.params);
    let value = match kind {
        BoundsKind::Degrees => {
            let green = feasible_degree_set(Group::Green, pop, params)?;
            let blue = feasible_degree_set(Group::Blue, pop, params)?;
            json!({
                "green": green.feasible_degrees,
                "blue": blue.feasible_degrees,
                "assumptions": green.assumptions,
            })
        }
        BoundsKind::Utility if asymptotic => json!({
            "green": utility_envelope_asymptotic(Group::Green, pop, params)?,
            "blue": utility_envelope_asymptotic(Group::Blue, pop, params)?,
        }),
        BoundsKind::Utility => {
            let green = utility_envelope_finite::<Rational>(Group::Green, pop, params)?;
            let blue = utility_envelope_finite::<Rational>(Group::Blue, pop, params)?;
            json!({
                "green": interval(&green.lower, &green.upper),
                "blue": interval(&blue.lower, &blue.upper),
            })
        }
        BoundsKind::Ur => {
            let ur = ur_envelope::<Rational>(pop, params)?;
            let exo = pop.exogenous_utility_ratio()?;
            json!({
                "ur_exogenous": rational_to_f64(&exo),
                "ur_exogenous_exact": format_rational(&exo),
                "ur": interval(&ur.lower, &ur.upper),
            })
        }
        BoundsKind::Welfare => {
            let w = welfare_envelope::<Rational>(pop, params)?;
            json!({
                "utilitarian_mean": interval(&w.utilitarian.lower, &w.utilitarian.upper),
                "rawlsian": interval(&w.rawlsian.lower, &w.rawlsian.upper),
            })
        }
    };
    print_json(&value);
    Ok(0)
}

fn sweep(args: SweepArgs) -> anyhow::Result<u8> {
    let mut overrides = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str::<SweepOverrides>(&text)
                .map_err(|e| Error::Input(format!("config {}: {e}", path.display())))?
        }
        None => SweepOverrides::default(),
    };
    if let Some(mode) = args.mode {
        overrides.mode = Some(mode.into());
    }
    let spec = SweepSpec::with_overrides(args.figure, &overrides)?;
    let rows = run_sweep(&spec);
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&rows, file)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_csv(&rows, &mut lock)?;
            lock.flush()?;
        }
    }
    if args.plot {
        let path = match &args.out {
            Some(p) => p.with_extension("svg"),
            None => PathBuf::from(format!("{}.svg", args.figure)),
        };
        fs::write(&path, render_svg(args.figure, &rows)?).with_context(|| format!("writing {}", path.display()))?;
    }
    let ok = rows.iter().filter(|r| r.status == RowStatus::Ok).count();
    for r in rows.iter().filter(|r| r.reason.is_some()).take(3) {
        eprintln!("{} row g0={} ur_exo={}: {}", r.status, r.g0, r.ur_exo, r.reason.as_deref().unwrap_or(""));
    }
    Ok(if ok == 0 { EXIT_INAPPLICABLE } else { 0 })
}

fn verify(suite: &str, budget: Budget, out: Option<&Path>) -> anyhow::Result<u8> {
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    let mut reports = Vec::new();
    for s in &suites {
        reports.push(run_suite(*s, &budget)?);
    }
    let text = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        serde_json::to_string_pretty(&reports).expect("reports serialize")
    };
    match out {
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => {
            let _ = writeln!(std::io::stdout(), "{text}");
        }
    }
    for r in &reports {
        eprintln!("{}: {} ({} non-vacuous points, {} failures)", r.suite, r.verdict, r.points_non_vacuous, r.failure_count);
    }
    let verdicts: Vec<Verdict> = reports.iter().map(|r| r.verdict).collect();
    Ok(if verdicts.contains(&Verdict::Fail) {
        EXIT_FAILURE
    } else if verdicts.contains(&Verdict::Vacuous) {
        EXIT_INAPPLICABLE
    } else {
        0
    })
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use modest_voi::adversary::demonstrate_aversion;
use modest_voi::problem_file::{load_problem, read_policy, save_problem, write_text, ProblemFile};
use modest_voi::properties::property_suite;
use modest_voi::rational::{display_rational, parse_rational};
use modest_voi::scenarios::{sweep, Decision, Scenario, ScenarioKind};
use modest_voi::update::UpdatePolicy;
use modest_voi::voi::{evaluate, VoiReport};
use modest_voi::{Error, Rational};

#[derive(Debug, Parser)]
#[command(name = "modest-voi", version, about = "Exact value of information for agents unsure how they will update")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classical and generalized value of information for a problem file.
    Eval {
        #[arg(long)]
        problem: PathBuf,
        /// `conditionalization`, or a JSON file with a top-level `policy` key.
        #[arg(long)]
        policy: Option<String>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a preset scenario.
    Scenario {
        #[arg(value_parser = parse_kind)]
        name: ScenarioKind,
        #[arg(long, value_parser = parse_rat)]
        epsilon: Rational,
        #[arg(long, value_parser = parse_rat)]
        confidence: Option<Rational>,
        /// Also write the assembled instance as a problem file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a preset scenario across several deviation probabilities.
    Sweep {
        #[arg(value_parser = parse_kind)]
        name: ScenarioKind,
        /// Comma-separated rationals.
        #[arg(long, value_delimiter = ',', value_parser = parse_rat, required = true)]
        epsilons: Vec<Rational>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long, value_parser = parse_rat)]
        confidence: Option<Rational>,
    },
    /// Synthesize a choice set on which the policy should refuse to learn.
    Adversary {
        #[arg(long)]
        problem: PathBuf,
        /// Defaults to the policy stored in the problem file.
        #[arg(long)]
        policy: Option<String>,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized property suite.
    Check {
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Write the full JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print every trial row.
        #[arg(long)]
        verbose: bool,
    },
}

fn parse_rat(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn parse_kind(text: &str) -> Result<ScenarioKind, String> {
    text.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Error(Error),
    Counterexample,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn load_with_policy(problem: &Path, policy: Option<&str>) -> Result<(modest_voi::decision::DecisionProblem, UpdatePolicy), Error> {
    let (problem, partition, stored) = load_problem(problem)?;
    let policy = match policy {
        Some(source) => read_policy(source, problem.prior(), &partition)?,
        None => stored,
    };
    Ok((problem, policy))
}

fn print_report(report: &VoiReport) {
    println!("prior max EU  {}", display_rational(&report.prior_max_eu));
    println!("val_good      {}", display_rational(&report.val_good));
    println!("val_general   {}", display_rational(&report.val_general));
    for (c, cell) in report.per_cell.iter().enumerate() {
        println!();
        println!(
            "cell {c} {}  p = {}  max EU = {}",
            cell.cell,
            display_rational(&cell.probability),
            display_rational(&cell.max_conditional_eu)
        );
        match &cell.lemma_rows {
            Some(rows) => {
                println!("  {:<20} {:>14} {:>14}", "action", "P(choose|E)", "E[f|E]");
                for row in rows {
                    println!(
                        "  {:<20} {:>14} {:>14}",
                        row.action,
                        display_rational(&row.choose_prob),
                        display_rational(&row.cond_eu)
                    );
                }
            }
            None => println!("  evidential independence fails in this cell; no decomposition"),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval { problem, policy, json } => {
            let (problem, policy) = load_with_policy(&problem, policy.as_deref())?;
            let report = evaluate(&problem, &policy)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("values serialize"));
            } else {
                print_report(&report);
            }
        }
        Command::Scenario {
            name,
            epsilon,
            confidence,
            out,
        } => {
            let sc = Scenario::build(name, &epsilon, confidence.as_ref())?;
            let val_general = sc.val_general()?;
            println!("scenario      {}", sc.name);
            println!("epsilon       {}", display_rational(&sc.epsilon));
            if let Some(c) = &sc.fallacy_confidence {
                println!("confidence    {}", display_rational(c));
            }
            println!("val_good      {}", display_rational(&sc.val_good()?));
            println!("val_general   {}", display_rational(&val_general));
            println!("decision      {}", Decision::from_value(&val_general));
            if let Some(path) = out {
                save_problem(&path, &sc.problem, &sc.policy)?;
            }
        }
        Command::Sweep {
            name,
            epsilons,
            format,
            confidence,
        } => {
            let table = sweep(name.name(), &epsilons, confidence.as_ref())?;
            match format {
                Format::Table => print!("{table}"),
                Format::Csv => print!("{}", table.to_csv()),
            }
        }
        Command::Adversary { problem, policy, out } => {
            let (problem, policy) = load_with_policy(&problem, policy.as_deref())?;
            let cert = demonstrate_aversion(&problem, &policy)?;
            let text = ProblemFile::from_certificate(&cert, &policy)?.to_canonical_json();
            match out {
                Some(path) => {
                    write_text(&path, &text)?;
                    println!("val_general   {}", display_rational(&cert.val_general));
                }
                None => print!("{text}"),
            }
        }
        Command::Check {
            trials,
            seed,
            report,
            verbose,
        } => {
            let result = property_suite(seed, trials);
            if let Some(path) = report {
                let text = serde_json::to_string_pretty(&result.to_json()).expect("values serialize") + "\n";
                write_text(&path, &text)?;
            }
            if verbose {
                print!("{result}");
            } else {
                println!("seed {seed} trials {trials}");
                for p in modest_voi::properties::Property::ALL {
                    let fails = result.failures(p);
                    println!("{:<7} {}", p.name(), if fails == 0 { "ok".to_string() } else { format!("{fails} failures") });
                }
                for c in &result.counterexamples {
                    println!("counterexample: trial {} {}: {}", c.trial, c.property.name(), c.detail);
                }
            }
            if !result.passed() {
                return Err(Failure::Counterexample);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Counterexample) => ExitCode::from(2),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Io { .. } => 3,
                _ => 1,
            })
        }
    }
}

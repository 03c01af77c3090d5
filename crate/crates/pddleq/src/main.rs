use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pddleq::config::Config;
use pddleq::dataset::{generate_corpus, write_jsonl, Manifest};
use pddleq::domains::{declared_domain, DomainSet};
use pddleq::eval::{evaluate_batch, report_render, EvalOptions, ReportFormat};
use pddleq::Error;
use pddleq_core::equivalence::{equivalent, EquivalenceMode};
use pddleq_core::fixtures::DomainId;
use pddleq_core::fullspec::{fully_specify_oracle, fully_specify_problem};
use pddleq_core::pddl::{parse_domain, parse_problem};
use pddleq_core::planning::{is_solvable, Solvability};
use pddleq_core::{DomainModel, ProblemModel};

#[derive(Parser)]
#[command(name = "pddleq", version, about = "Semantic equivalence of PDDL problems, corpus generation and evaluation")]
struct Cli {
    /// Strip `- type` annotations from objects instead of rejecting them.
    #[arg(long, global = true)]
    relax_typing: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Overrides the manifest's generation seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two problem files describe the same planning problem.
    Check {
        a: PathBuf,
        b: PathBuf,
        /// A bundled domain name or a domain file; defaults to the problem's `:domain`.
        #[arg(long)]
        domain: Option<String>,
        /// Treat goal objects as interchangeable placeholders.
        #[arg(long)]
        placeholder: bool,
    },
    /// Find a plan for a problem file.
    Solve {
        problem: PathBuf,
        #[arg(long)]
        domain: Option<String>,
    },
    /// Generate a corpus from a manifest.
    Generate {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write corpus statistics as JSON here.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Score model outputs against a corpus.
    Evaluate {
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        /// Directory of extra or replacement domain files.
        #[arg(long)]
        domain_dir: Option<PathBuf>,
        #[arg(long)]
        report: PathBuf,
        /// Also print the report to stdout in this format.
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Write per-example results as JSON lines here.
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Print the fully specified goal of a problem.
    Fullspecify {
        problem: PathBuf,
        #[arg(long)]
        domain: Option<String>,
        /// Use exhaustive search instead of the domain rules.
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<Error>().map_or(2, Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    Ok(std::fs::read_to_string(path).map_err(Error::io_error(path))?)
}

fn load_domain(spec: Option<&str>, problem_text: &str) -> anyhow::Result<DomainModel> {
    let spec = match spec {
        Some(s) => s.to_string(),
        None => declared_domain(problem_text).ok_or_else(|| anyhow::anyhow!("problem names no domain; pass --domain"))?,
    };
    if let Ok(id) = spec.parse::<DomainId>() {
        return Ok(pddleq_core::fixtures::domain(id));
    }
    let path = Path::new(&spec);
    if path.exists() {
        let text = read(path)?;
        return parse_domain(&text).map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        }
        .into());
    }
    Err(Error::UnknownDomain(spec).into())
}

fn load_problem(path: &Path, domain: Option<&str>, relax: bool) -> anyhow::Result<(ProblemModel, DomainModel)> {
    let text = read(path)?;
    let d = load_domain(domain, &text)?;
    let p = parse_problem(&text, &d, relax).map_err(|e| Error::Malformed {
        path: path.to_path_buf(),
        line: 0,
        message: e.to_string(),
    })?;
    Ok((p, d))
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let mut config = Config::load(cli.config.as_deref()).map_err(|e| Error::Manifest(format!("{e:#}")))?;
    config.relax_typing |= cli.relax_typing;
    if cli.workers.is_some() {
        config.workers = cli.workers;
    }
    if cli.seed.is_some() {
        config.seed = cli.seed;
    }
    match cli.command {
        Command::Check { a, b, domain, placeholder } => {
            let (pa, d) = load_problem(&a, domain.as_deref(), config.relax_typing)?;
            let (pb, _) = load_problem(&b, Some(domain.as_deref().unwrap_or(&d.name)), config.relax_typing)?;
            let verdict = equivalent(&pa, &pb, EquivalenceMode { is_placeholder: placeholder })
                .map_err(|e| Error::UnknownDomain(e.to_string()))?;
            println!("{}", verdict.summary());
            Ok(if verdict.equal { 0 } else { 1 })
        }
        Command::Solve { problem, domain } => {
            let (p, d) = load_problem(&problem, domain.as_deref(), config.relax_typing)?;
            match is_solvable(&p, &d, config.planner.budget) {
                Solvability::Solvable(plan) => {
                    print!("{}", plan.to_text());
                    Ok(0)
                }
                Solvability::Unsolvable(why) | Solvability::Unknown(why) => {
                    println!("; no plan: {why}");
                    Ok(1)
                }
            }
        }
        Command::Generate { manifest, out, stats } => {
            let m = Manifest::load(&manifest)?;
            let (records, s) = pddleq::with_workers(config.workers, || generate_corpus(&m, config.seed))?;
            write_jsonl(&out, &records)?;
            let text = serde_json::to_string_pretty(&s)? + "\n";
            match stats {
                Some(path) => std::fs::write(&path, text).map_err(Error::io_error(&path))?,
                None => eprint!("{text}"),
            }
            Ok(0)
        }
        Command::Evaluate { predictions, dataset, domain_dir, report, format, records } => {
            let domains = match domain_dir {
                Some(dir) => DomainSet::with_dir(&dir)?,
                None => DomainSet::default(),
            };
            let options = EvalOptions {
                relax_typing: config.relax_typing,
                planner_budget: config.planner.budget,
                workers: config.workers,
            };
            let (r, scored) = evaluate_batch(&predictions, &dataset, &domains, &options)?;
            std::fs::write(&report, report_render(&r, ReportFormat::Json)).map_err(Error::io_error(&report))?;
            if let Some(path) = records {
                write_jsonl(&path, &scored)?;
            }
            match format {
                Some(Format::Table) => print!("{}", report_render(&r, ReportFormat::Table)),
                Some(Format::Json) => print!("{}", report_render(&r, ReportFormat::Json)),
                None => {}
            }
            Ok(0)
        }
        Command::Fullspecify { problem, domain, oracle } => {
            let (p, d) = load_problem(&problem, domain.as_deref(), config.relax_typing)?;
            let goal = if oracle {
                fully_specify_oracle(&d, &p, config.oracle.max_states)?
            } else {
                let id: DomainId = d.name.parse().map_err(|_| Error::UnknownDomain(d.name.clone()))?;
                let mut g = p.goal.clone();
                g.extend(fully_specify_problem(id, &p)?);
                g
            };
            for prop in &goal {
                let mark = if p.goal.contains(prop) { " " } else { "+" };
                println!("{mark} {prop}");
            }
            Ok(0)
        }
    }
}

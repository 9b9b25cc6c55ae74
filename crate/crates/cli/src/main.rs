//! Experiment CLI: generate instances, run the cycle pipeline, verify
//! structure files, and summarise batches of run reports.
//!
//! Exit codes: 0 success, 1 verification or pipeline failure, 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hyperham::cleaning::{classify_bad, clean_bicolour, shadow_colouring};
use hyperham::assembly::path_forest;
use hyperham::fractional::discrepant_pfm;
use hyperham::instances::{Family, GenSpec};
use hyperham::io;
use hyperham::verify::{verify_cycle, verify_matching};
use hyperham::{hamilton_with_discrepancy, Ledger, PipelineParams};

#[derive(Parser)]
#[command(name = "hyperham", version, about = "Tight Hamilton cycles with colour discrepancy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file from a family spec.
    Gen(GenArgs),
    /// Run the cycle pipeline on an instance and emit a JSON report.
    Run(RunArgs),
    /// Re-verify a structure file against an instance.
    Verify(VerifyArgs),
    /// Summarise a batch of run reports as CSV.
    Stats(StatsArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Instance family.
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Edge probability for the random family.
    #[arg(long)]
    p: Option<f64>,
    /// Split set size (the first a_size vertices form A).
    #[arg(long)]
    a_size: Option<usize>,
    /// Codegree slack used by the densifier.
    #[arg(long)]
    epsilon: Option<f64>,
    /// key=value spec file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Instance file produced by `gen`.
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ledger overrides as a key=value file.
    #[arg(long)]
    ledger: Option<PathBuf>,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the cycle as a one-line structure file.
    #[arg(long)]
    cycle_out: Option<PathBuf>,
    /// Dump the boosted fractional matching as CSV.
    #[arg(long)]
    dump_pfm: Option<PathBuf>,
    /// Dump the extracted gadgets as JSON.
    #[arg(long)]
    dump_gadgets: Option<PathBuf>,
    /// Dump the bad/clean set classification as JSON.
    #[arg(long)]
    dump_bad_sets: Option<PathBuf>,
    /// Dump the path forest as newline-delimited vertex sequences.
    #[arg(long)]
    dump_paths: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Cycle file: one line of n vertex ids.
    #[arg(long, conflicts_with = "matching")]
    cycle: Option<PathBuf>,
    /// Matching file: one edge per line.
    #[arg(long)]
    matching: Option<PathBuf>,
    /// Require the matching to be perfect.
    #[arg(long, default_value_t = false)]
    perfect: bool,
}

#[derive(Args)]
struct StatsArgs {
    /// Run report JSON files.
    reports: Vec<PathBuf>,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "complete" => Ok(Family::Complete),
        "random_dirac" => Ok(Family::RandomDirac),
        "split_colour" => Ok(Family::SplitColour),
        "near_perfect_extremal" => Ok(Family::NearPerfectExtremal),
        other => Err(format!(
            "unknown family {other:?}; expected complete, random_dirac, split_colour or near_perfect_extremal"
        )),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Stats(args) => cmd_stats(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn spec_from_config(path: &Path) -> anyhow::Result<GenSpec> {
    let mut spec = GenSpec::default();
    for (lineno, raw) in std::fs::read_to_string(path)?.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow::anyhow!("line {}: expected key=value", lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "family" => spec.family = parse_family(value).map_err(|e| anyhow::anyhow!(e))?,
            "n" => spec.n = value.parse()?,
            "k" => spec.k = value.parse()?,
            "r" => spec.r = value.parse()?,
            "seed" => spec.seed = value.parse()?,
            "p" => spec.p = value.parse()?,
            "a_size" => spec.a_size = value.parse()?,
            "epsilon" => spec.epsilon = value.parse()?,
            other => anyhow::bail!("unknown spec key {other:?}"),
        }
    }
    Ok(spec)
}

fn cmd_gen(args: GenArgs) -> anyhow::Result<ExitCode> {
    let mut spec = match &args.config {
        Some(path) => spec_from_config(path)?,
        None => GenSpec::default(),
    };
    if let Some(f) = args.family {
        spec.family = f;
    }
    if let Some(n) = args.n {
        spec.n = n;
        if args.a_size.is_none() && args.config.is_none() {
            spec.a_size = n / 2;
        }
    }
    if let Some(k) = args.k {
        spec.k = k;
    }
    if let Some(r) = args.r {
        spec.r = r;
    }
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(p) = args.p {
        spec.p = p;
    }
    if let Some(a) = args.a_size {
        spec.a_size = a;
    }
    if let Some(e) = args.epsilon {
        spec.epsilon = e;
    }
    let (g, c) = spec.generate()?;
    emit(&args.out, &io::write_instance(&g, &c))?;
    Ok(ExitCode::SUCCESS)
}

fn load_ledger(path: &Option<PathBuf>) -> anyhow::Result<Ledger> {
    match path {
        Some(p) => Ok(Ledger::from_file(p)?),
        None => Ok(Ledger::default()),
    }
}

fn cmd_run(args: RunArgs) -> anyhow::Result<ExitCode> {
    let (g, c) = io::read_instance(&std::fs::read_to_string(&args.instance)?)?;
    let ledger = load_ledger(&args.ledger)?;
    let params = PipelineParams::new(ledger.clone(), args.seed)?;

    // inspection dumps are computed at the host level with the same ledger
    if args.dump_pfm.is_some() || args.dump_gadgets.is_some() {
        let disc = discrepant_pfm(&g, &c, ledger.epsilon, &ledger, args.seed)?;
        if let Some(path) = &args.dump_pfm {
            std::fs::write(path, io::write_pfm_csv(&g, &disc.matching))?;
        }
        if let Some(path) = &args.dump_gadgets {
            std::fs::write(path, serde_json::to_string_pretty(&disc.gadgets)?)?;
        }
    }
    if let Some(path) = &args.dump_paths {
        let (forest, _, _, _) = path_forest(&g, &c, ledger.epsilon, &ledger, args.seed)?;
        std::fs::write(path, io::write_paths(&forest.paths))?;
    }
    if let Some(path) = &args.dump_bad_sets {
        let merged = c.merge_colours(0)?;
        let pair = clean_bicolour(&g, &merged, ledger.t_clean)?;
        let cc = merged.restrict_to(&g, &pair.cleaned)?;
        let sc = shadow_colouring(&pair.cleaned, &cc)?;
        let report = classify_bad(&pair.cleaned, &sc, ledger.epsilon, &ledger)?;
        std::fs::write(path, report.to_json())?;
    }

    let outcome = match hamilton_with_discrepancy(&g, &c, &params) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("pipeline failed: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    // independent audit before reporting success
    let audit = verify_cycle(&g, &c, outcome.cycle.vertices());
    if let Err(e) = audit {
        eprintln!("verifier rejected the pipeline output: {e}");
        return Ok(ExitCode::from(1));
    }
    if let Some(path) = &args.cycle_out {
        std::fs::write(path, io::write_cycle(outcome.cycle.vertices()))?;
    }
    emit(&args.out, &(outcome.report.to_json() + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let (g, c) = io::read_instance(&std::fs::read_to_string(&args.instance)?)?;
    let report = if let Some(path) = &args.cycle {
        let text = std::fs::read_to_string(path)?;
        io::read_cycle(&text)
            .map_err(anyhow::Error::from)
            .and_then(|cycle| verify_cycle(&g, &c, &cycle).map_err(anyhow::Error::from))
    } else if let Some(path) = &args.matching {
        let text = std::fs::read_to_string(path)?;
        io::read_matching(&text)
            .map_err(anyhow::Error::from)
            .and_then(|m| verify_matching(&g, &c, &m, args.perfect).map_err(anyhow::Error::from))
    } else {
        anyhow::bail!("pass --cycle or --matching");
    };
    match report {
        Ok(report) => {
            println!("{}", report.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("verification failed: {e:#}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_stats(args: StatsArgs) -> anyhow::Result<ExitCode> {
    if args.reports.is_empty() {
        anyhow::bail!("no report files given");
    }
    let mut csv = String::from("file,seed,n,k,r,majority,surplus,scaled_discrepancy,retries,millis_total\n");
    let mut ok = 0usize;
    for path in &args.reports {
        let parsed: Result<serde_json::Value, _> = std::fs::read_to_string(path)
            .map_err(anyhow::Error::from)
            .and_then(|t| serde_json::from_str(&t).map_err(anyhow::Error::from));
        match parsed {
            Ok(v) if v.get("cycle").is_some() => {
                ok += 1;
                let millis: u64 = v["stages"]
                    .as_array()
                    .map(|stages| {
                        stages
                            .iter()
                            .filter_map(|s| s["millis"].as_u64())
                            .sum()
                    })
                    .unwrap_or(0);
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    path.display(),
                    v["seed"],
                    v["n"],
                    v["k"],
                    v["r"],
                    v["majority"],
                    v["surplus"],
                    v["scaled_discrepancy"],
                    v["retries"],
                    millis
                ));
            }
            _ => {
                csv.push_str(&format!("{},,,,,,,,,\n", path.display()));
            }
        }
    }
    emit(&args.out, &csv)?;
    eprintln!(
        "success {ok}/{} ({:.1}%)",
        args.reports.len(),
        100.0 * ok as f64 / args.reports.len() as f64
    );
    Ok(ExitCode::SUCCESS)
}

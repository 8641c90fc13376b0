use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sieveforge::graph::{
    builtin_graph, emit_graph6, parse_graph6, parse_graph6_file, parse_graph_jsonl, Graph,
    BUILTIN_NAMES,
};
use sieveforge::harness::{embed_stats, run_csl, run_srg, DiscriminationReport, Stat};
use sieveforge::sieve::Level;
use sieveforge::snn::{snn, transform_dataset, ExportFormat, Gamma, SnnConfig, Variant};
use sieveforge::validate;
use sieveforge::wl::wl_distinguish;
use sieveforge::{Error, ScalarKind};

#[derive(Parser, Debug)]
#[command(
    name = "sieveforge",
    version,
    about = "Sieve transforms and graph isomorphism experiments"
)]
struct Cli {
    /// Worker threads (0 or unset: one per logical core).
    #[arg(long, global = true, env = "SIEVEFORGE_THREADS")]
    threads: Option<usize>,

    /// Seed for every random choice; echoed in reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Record wall-clock time in reports (makes them run-dependent).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Replace every graph of a dataset by its transform matrix.
    Transform(TransformArgs),
    /// Compare two graphs with the sieve transform and with 1-WL.
    Iso(IsoArgs),
    /// Run the circular skip link experiment.
    Csl(ReportArgs),
    /// Compare every pair of graphs in a strongly regular family.
    Srg {
        #[arg(long = "in")]
        input: String,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Run the built-in oracle and golden-matrix checks.
    Validate,
    /// graph6 utilities.
    G6 {
        /// Parse every graph of FILE, re-encode it and compare with the input.
        #[arg(long, value_name = "FILE")]
        roundtrip: PathBuf,
    },
}

#[derive(Args, Debug)]
struct SnnArgs {
    #[arg(long, value_enum, default_value_t = VariantArg::Alpha)]
    variant: VariantArg,

    /// Comma-separated levels; -1 means the stable level.
    #[arg(long, value_parser = parse_levels, allow_hyphen_values = true)]
    levels: Option<LevelList>,

    #[arg(long)]
    normalize: bool,

    /// Damping factor in (0, 1], e.g. 1/2 or 0.5.
    #[arg(long, default_value = "1")]
    gamma: String,

    /// Use edge feature vectors as arc weights.
    #[arg(long)]
    featured: bool,

    /// Entry kind; defaults to bigint, rational when normalizing or damping,
    /// featurevec when featured.
    #[arg(long)]
    scalar: Option<String>,
}

#[derive(Args, Debug)]
struct TransformArgs {
    /// graph6 file, JSONL file, builtin name or graph6 string.
    #[arg(long = "in")]
    input: String,

    #[command(flatten)]
    snn: SnnArgs,

    #[arg(long, value_enum, default_value_t = FormatArg::Jsonl)]
    format: FormatArg,

    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IsoArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[command(flatten)]
    snn: SnnArgs,
    /// Comma-separated statistics compared between the two outputs.
    #[arg(long, default_value = "var")]
    stats: String,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Report JSON path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the embedding table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Alpha,
    Beta,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Jsonl,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
struct LevelList(Vec<Level>);

fn parse_levels(s: &str) -> Result<LevelList, String> {
    s.split(',')
        .map(|t| t.trim().parse::<Level>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()
        .map(LevelList)
}

/// An error that should exit with status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

impl SnnArgs {
    fn config(&self, default_levels: &[Level]) -> anyhow::Result<SnnConfig> {
        let gamma: Gamma = self
            .gamma
            .parse()
            .map_err(|e: Error| usage(e.to_string()))?;
        let scalar_kind = match &self.scalar {
            Some(s) => s.parse::<ScalarKind>().map_err(|e| usage(e.to_string()))?,
            None if self.featured => ScalarKind::FeatureVec,
            None if self.normalize || !gamma.is_one() => ScalarKind::Rational,
            None => ScalarKind::BigInt,
        };
        let cfg = SnnConfig {
            variant: match self.variant {
                VariantArg::Alpha => Variant::Alpha,
                VariantArg::Beta => Variant::Beta,
            },
            levels: self
                .levels
                .clone()
                .map_or_else(|| default_levels.to_vec(), |l| l.0),
            normalize: self.normalize,
            gamma,
            featured: self.featured,
            scalar_kind,
        };
        cfg.validate().map_err(|e| usage(e.to_string()))?;
        Ok(cfg)
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("graph")
        .to_string()
}

/// Resolves an input argument to named graphs.
fn load_graphs(input: &str) -> anyhow::Result<Vec<(String, Graph)>> {
    if let Some(name) = input.strip_prefix("builtin:") {
        return Ok(vec![(name.to_string(), builtin_graph(name)?)]);
    }
    let path = Path::new(input);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {input}"))?;
        let stem = file_stem(path);
        let is_jsonl =
            path.extension().is_some_and(|e| e == "jsonl") || text.trim_start().starts_with('{');
        if is_jsonl {
            return Ok(parse_graph_jsonl(&text)?
                .into_iter()
                .enumerate()
                .map(|(i, (id, g))| (id.unwrap_or_else(|| format!("{stem}-{i}")), g))
                .collect());
        }
        return Ok(parse_graph6_file(&text)?
            .into_iter()
            .enumerate()
            .map(|(i, g)| (format!("{stem}-{i}"), g))
            .collect());
    }
    if BUILTIN_NAMES.contains(&input) {
        return Ok(vec![(input.to_string(), builtin_graph(input)?)]);
    }
    match parse_graph6(input) {
        Ok(g) => Ok(vec![(input.to_string(), g)]),
        Err(e) => Err(usage(format!(
            "'{input}' is not a file, a builtin ({}) or a graph6 string: {e}",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

fn load_one(input: &str) -> anyhow::Result<Graph> {
    let mut graphs = load_graphs(input)?;
    if graphs.len() != 1 {
        bail!(usage(format!(
            "'{input}' holds {} graphs, expected one",
            graphs.len()
        )));
    }
    Ok(graphs.remove(0).1)
}

fn write_output(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_report(
    report: &DiscriminationReport,
    args: &ReportArgs,
    timing: bool,
) -> anyhow::Result<()> {
    write_output(args.out.as_deref(), &report.to_json(timing)?)?;
    if let Some(csv) = &args.csv {
        fs::write(csv, report.embeddings_csv())
            .with_context(|| format!("writing {}", csv.display()))?;
    }
    Ok(())
}

fn cmd_transform(args: &TransformArgs) -> anyhow::Result<ExitCode> {
    let cfg = args.snn.config(&[Level::At(1), Level::At(1)])?;
    let format = match args.format {
        FormatArg::Jsonl => ExportFormat::JsonLines,
        FormatArg::Csv => ExportFormat::Csv,
    };
    if format == ExportFormat::Csv && cfg.scalar_kind == ScalarKind::FeatureVec {
        bail!(usage(
            "csv export cannot hold feature vectors; use --format jsonl"
        ));
    }
    let graphs = load_graphs(&args.input)?;
    let mut buf = Vec::new();
    let count = transform_dataset(&graphs, &cfg, format, &mut buf)?;
    write_output(args.out.as_deref(), std::str::from_utf8(&buf)?)?;
    eprintln!("transformed {count} graph(s) with {}", cfg.label());
    Ok(ExitCode::SUCCESS)
}

fn cmd_iso(args: &IsoArgs) -> anyhow::Result<ExitCode> {
    let cfg = args.snn.config(&[Level::At(1), Level::At(1)])?;
    let stats = Stat::parse_list(&args.stats).map_err(|e| usage(e.to_string()))?;
    let a = load_one(&args.a)?;
    let b = load_one(&args.b)?;
    let snn_differs = if a.node_count() != b.node_count() {
        true
    } else {
        let ea = embed_stats(&snn(&a, &cfg)?.matrix, &stats)?;
        let eb = embed_stats(&snn(&b, &cfg)?.matrix, &stats)?;
        ea != eb
    };
    let verdict = |d: bool| {
        if d {
            "DISTINGUISHED"
        } else {
            "indistinguishable"
        }
    };
    let names: Vec<&str> = stats.iter().map(|s| s.name()).collect();
    println!(
        "WL: {}; SNN({}): {}",
        verdict(wl_distinguish(&a, &b)),
        names.join(","),
        verdict(snn_differs)
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_srg(input: &str, args: &ReportArgs, seed: u64, timing: bool) -> anyhow::Result<ExitCode> {
    let graphs = load_graphs(input)?;
    let report = run_srg(&graphs, seed)?;
    emit_report(&report, args, timing)?;
    eprintln!(
        "{} graphs, {} pairs, {} distinguished, failure rate {}",
        report.graphs.len(),
        report.pairs.total,
        report.pairs.distinguished,
        report.failure_rate
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(seed: u64) -> ExitCode {
    let results = validate::run_all(seed);
    let mut ok = true;
    for r in &results {
        println!(
            "{} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
        ok &= r.passed;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_roundtrip(path: &Path) -> anyhow::Result<ExitCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let graphs = parse_graph6_file(&text)?;
    let originals: Vec<&str> = text
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .map(|l| l.strip_prefix(">>graph6<<").unwrap_or(l))
        .filter(|l| !l.is_empty())
        .collect();
    for (i, (g, line)) in graphs.iter().zip(&originals).enumerate() {
        let again = emit_graph6(g);
        if again != *line {
            println!("graph {i}: re-encoded as '{again}', input was '{line}'");
            return Ok(ExitCode::from(1));
        }
        if parse_graph6(&again)? != *g {
            println!("graph {i}: decoding the re-encoding gives a different graph");
            return Ok(ExitCode::from(1));
        }
    }
    println!("roundtrip ok: {} graph(s)", graphs.len());
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Some(n) = cli.threads.filter(|&n| n > 0) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    match &cli.command {
        Command::Transform(args) => cmd_transform(args),
        Command::Iso(args) => cmd_iso(args),
        Command::Csl(args) => {
            emit_report(&run_csl(cli.seed)?, args, cli.timing)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Srg { input, report } => cmd_srg(input, report, cli.seed, cli.timing),
        Command::Validate => Ok(cmd_validate(cli.seed)),
        Command::G6 { roundtrip } => cmd_roundtrip(roundtrip),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_parse() {
        assert_eq!(
            parse_levels("1,-1").unwrap().0,
            vec![Level::At(1), Level::Stable]
        );
        assert!(parse_levels("1,x").is_err());
    }

    #[test]
    fn default_scalar_follows_flags() {
        let cli = Cli::parse_from(["sieveforge", "iso", "--a", "k3", "--b", "p3", "--normalize"]);
        let Command::Iso(args) = cli.command else {
            panic!()
        };
        assert_eq!(
            args.snn
                .config(&[Level::At(1), Level::At(1)])
                .unwrap()
                .scalar_kind,
            ScalarKind::Rational
        );
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

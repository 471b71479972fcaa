use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::{Command as Process, ExitCode};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ramsey_core::constructions::{
    affine_plane_coloring, grid_construction, layered_coloring, lexical_coloring, random_coloring, subsample,
    GridConstructionSpec,
};
use ramsey_core::median_order::{check_feedback_property, compute_median_order, PartialOrientation};
use ramsey_core::mono_embed::SubgraphView;
use ramsey_core::oracle::{
    longest_rainbow_path_exact, max_distinct_colors_at_vertex, median_order_exact, mono_component_profile,
    tree_containment_exact, RainbowSearch, SearchOutcome, DEFAULT_NODE_BUDGET,
};
use ramsey_core::proper::embed_proper_or_mono;
use ramsey_core::rainbow::{extract_with_report, ExtractOptions, Mode};
use ramsey_core::{verify_certificate, Certificate, CertificateDocument, EdgeColoring, TreeSpec, Verdict};

#[derive(Parser)]
#[command(name = "cramsey", version, about = "Monochromatic trees and rainbow paths in edge-colored complete graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a coloring in the KCOLOR format
    Generate {
        #[command(subcommand)]
        kind: Generator,
        /// Output file (stdout if omitted)
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Find a monochromatic tree or a rainbow path
    Extract {
        coloring: PathBuf,
        /// Tree file or preset (path:s, star:s, spider:a,b,c)
        #[arg(long)]
        tree: String,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
        #[arg(long)]
        seed: u64,
        /// Write the pipeline trace here
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find a monochromatic S or a properly colored T
    Proper {
        coloring: PathBuf,
        #[arg(long)]
        tree_s: String,
        #[arg(long)]
        tree_t: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a certificate against a coloring
    Verify {
        certificate: PathBuf,
        coloring: PathBuf,
        #[arg(long)]
        tree: Option<String>,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Run an exhaustive reference search
    Oracle {
        input: PathBuf,
        #[arg(long, value_enum)]
        task: OracleTask,
        /// Tree for tree-contain
        #[arg(long)]
        tree: Option<String>,
        /// Restrict tree-contain to one color label
        #[arg(long)]
        color: Option<u32>,
        /// Stop the rainbow search at this many edges
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Relocation-stable ordering of a KORIENT file
    MedianOrder {
        orientation: PathBuf,
        #[arg(long)]
        seed: u64,
    },
    /// Time the extraction fixtures, one process per fixture
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum Generator {
    Affine {
        #[arg(long)]
        q: u64,
    },
    Lexical {
        #[arg(long)]
        n: usize,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        seed: u64,
    },
    Layered {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    Grid {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 0)]
        connectors: usize,
        /// Write parts, rogue colors and orientation here
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    Subsample {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Opportunistic,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleTask {
    RainbowPath,
    TreeContain,
    MedianExact,
    MonoProfile,
    MaxColors,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Comma-separated fixture names (all if omitted)
    #[arg(long, value_delimiter = ',')]
    fixtures: Vec<String>,
}

#[derive(Debug)]
enum Failure {
    /// Usage, IO or format problems (exit 2).
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure
where
    E: Into<ramsey_core::Error>,
{
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Generate { kind, output } => generate(kind, output.as_deref()),
        Command::Extract { coloring, tree, t, mode, seed, trace, output } => {
            let coloring = load_coloring(&coloring)?;
            let tree = load_tree(&tree)?;
            let mode = match mode {
                ModeArg::Strict => Mode::Strict,
                ModeArg::Opportunistic => Mode::Opportunistic,
            };
            let report = extract_with_report(&coloring, &tree, t, &ExtractOptions::new(mode, seed))?;
            if let Some(path) = trace {
                write_json(Some(&path), &serde_json::to_value(&report.trace).expect("trace serializes"))?;
            }
            emit_certificate(&coloring, &report.certificate, output.as_deref())
        }
        Command::Proper { coloring, tree_s, tree_t, output } => {
            let coloring = load_coloring(&coloring)?;
            let cert = embed_proper_or_mono(&coloring, &load_tree(&tree_s)?, &load_tree(&tree_t)?);
            emit_certificate(&coloring, &cert, output.as_deref())
        }
        Command::Verify { certificate, coloring, tree, t } => {
            let coloring = load_coloring(&coloring)?;
            let doc: CertificateDocument = serde_json::from_reader(BufReader::new(open(&certificate)?))?;
            let cert = Certificate::from_document(&doc, &coloring)?;
            let tree = tree.as_deref().map(load_tree).transpose()?;
            match verify_certificate(&coloring, tree.as_ref(), t, &cert) {
                Verdict::Valid => {
                    println!("valid");
                    Ok(0)
                }
                Verdict::Invalid(reason) => {
                    println!("invalid: {reason}");
                    Ok(1)
                }
            }
        }
        Command::Oracle { input, task, tree, color, cap, budget } => oracle(&input, task, tree, color, cap, budget),
        Command::MedianOrder { orientation, seed } => {
            let g = PartialOrientation::load(BufReader::new(open(&orientation)?))?;
            let ord = compute_median_order(&g, seed);
            let doc = json!({
                "order": ord.order,
                "forward_count": ord.forward_count,
                "feedback_property": check_feedback_property(&g, &ord),
            });
            write_json(None, &doc)?;
            Ok(0)
        }
        Command::Bench(args) => bench(args),
    }
}

fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_coloring(path: &Path) -> CliResult<EdgeColoring> {
    EdgeColoring::load(BufReader::new(open(path)?)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// A preset like `path:3` or a tree file.
fn load_tree(spec: &str) -> CliResult<TreeSpec> {
    if ["path:", "star:", "spider:"].iter().any(|p| spec.starts_with(p)) {
        return Ok(TreeSpec::parse_preset(spec)?);
    }
    Ok(TreeSpec::load(BufReader::new(open(Path::new(spec))?))?)
}

fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_json(path: Option<&Path>, value: &serde_json::Value) -> CliResult<()> {
    let mut out = sink(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).and_then(|_| out.flush()).map_err(|e| Failure::Usage(e.to_string()))
}

fn emit_certificate(coloring: &EdgeColoring, cert: &Certificate, output: Option<&Path>) -> CliResult<u8> {
    let doc = serde_json::to_value(cert.to_document(coloring)).expect("certificate serializes");
    write_json(output, &doc)?;
    Ok(if cert.is_failure() { 1 } else { 0 })
}

fn generate(kind: Generator, output: Option<&Path>) -> CliResult<u8> {
    let coloring = match kind {
        Generator::Affine { q } => affine_plane_coloring(q)?,
        Generator::Lexical { n } => lexical_coloring(n)?,
        Generator::Random { n, k, seed } => random_coloring(n, k, seed)?,
        Generator::Layered { s, t } => layered_coloring(s, t)?,
        Generator::Subsample { input, p, seed } => subsample(&load_coloring(&input)?, p, seed)?,
        Generator::Grid { h, t, s, connectors, meta } => {
            let (coloring, ss) = grid_construction(GridConstructionSpec::new(h, t, s).with_connectors(connectors))?;
            if let Some(path) = meta {
                let mut codes = Vec::new();
                ss.orientation().save(&mut codes)?;
                let codes = String::from_utf8(codes).expect("ascii");
                let doc = json!({
                    "h": h,
                    "t": t,
                    "s": s,
                    "connectors": connectors,
                    "parts": ss.parts.iter().map(|p| json!({
                        "color": coloring.label_of(p.color),
                        "vertices": p.vertices,
                    })).collect::<Vec<_>>(),
                    "rogue_colors": ss.rogue_colors.iter().map(|&c| coloring.label_of(c)).collect::<Vec<_>>(),
                    "connector_scope": ss.connector_scope,
                    "orientation": codes.lines().nth(1).unwrap_or(""),
                });
                write_json(Some(&path), &doc)?;
            }
            coloring
        }
    };
    let mut out = sink(output)?;
    coloring.save(&mut out)?;
    Ok(0)
}

fn oracle(
    input: &Path,
    task: OracleTask,
    tree: Option<String>,
    color: Option<u32>,
    cap: Option<usize>,
    budget: u64,
) -> CliResult<u8> {
    if let OracleTask::MedianExact = task {
        let g = PartialOrientation::load(BufReader::new(open(input)?))?;
        let best = median_order_exact(&g)?;
        write_json(None, &json!({ "order": best.order, "forward_count": best.forward_count }))?;
        return Ok(0);
    }
    let coloring = load_coloring(input)?;
    match task {
        OracleTask::RainbowPath => match longest_rainbow_path_exact(&coloring, cap, budget) {
            RainbowSearch::Exact { length, path } => {
                write_json(None, &json!({ "status": "exact", "length": length, "path": path }))?;
                Ok(0)
            }
            RainbowSearch::Unknown { best } => {
                let length = best.len().saturating_sub(1);
                write_json(None, &json!({ "status": "unknown", "lower_bound": length, "path": best }))?;
                Ok(1)
            }
        },
        OracleTask::TreeContain => {
            let tree = load_tree(tree.as_deref().ok_or_else(|| Failure::Usage("tree-contain needs --tree".into()))?)?;
            let all: Vec<usize> = (0..coloring.n()).collect();
            let colors: Vec<_> = match color {
                Some(label) => vec![coloring
                    .color_of_label(label)
                    .ok_or_else(|| Failure::Usage(format!("color {label} does not occur")))?],
                None => coloring.palette().collect(),
            };
            let mut found = None;
            let mut unknown = false;
            for c in colors {
                match tree_containment_exact(&SubgraphView::color_class(&coloring, c, &all), &tree, budget) {
                    SearchOutcome::Found(map) => {
                        found = Some((c, map));
                        break;
                    }
                    SearchOutcome::Unknown => unknown = true,
                    SearchOutcome::NotFound => {}
                }
            }
            let (doc, code) = match found {
                Some((c, map)) => (json!({ "status": "found", "color": coloring.label_of(c), "map": map }), 0),
                None if unknown => (json!({ "status": "unknown" }), 1),
                None => (json!({ "status": "none" }), 1),
            };
            write_json(None, &doc)?;
            Ok(code)
        }
        OracleTask::MonoProfile => {
            let profile = mono_component_profile(&coloring);
            write_json(None, &json!({ "colors": profile.len(), "profile": profile }))?;
            Ok(0)
        }
        OracleTask::MaxColors => {
            write_json(None, &json!({ "max_distinct_colors": max_distinct_colors_at_vertex(&coloring) }))?;
            Ok(0)
        }
        OracleTask::MedianExact => unreachable!("handled above"),
    }
}

struct Fixture {
    name: &'static str,
    build: fn() -> ramsey_core::Result<EdgeColoring>,
    mode: Mode,
}

const FIXTURES: &[Fixture] = &[
    Fixture { name: "lexical-14400", build: || lexical_coloring(14400), mode: Mode::Strict },
    Fixture { name: "random-14400-8-1", build: || random_coloring(14400, 8, 1), mode: Mode::Strict },
    Fixture { name: "random-14400-8-2", build: || random_coloring(14400, 8, 2), mode: Mode::Strict },
    Fixture { name: "random-14400-8-3", build: || random_coloring(14400, 8, 3), mode: Mode::Strict },
    Fixture {
        name: "affine-127-sub",
        build: || subsample(&affine_plane_coloring(127)?, 0.89, 1),
        mode: Mode::Strict,
    },
];

fn peak_memory_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn bench(args: BenchArgs) -> CliResult<u8> {
    let names: Vec<String> = if args.fixtures.is_empty() {
        FIXTURES.iter().map(|f| f.name.to_string()).collect()
    } else {
        args.fixtures.clone()
    };
    for name in &names {
        if !FIXTURES.iter().any(|f| f.name == name) {
            return Err(Failure::Usage(format!("unknown fixture `{name}`")));
        }
    }
    if names.len() == 1 {
        let fixture = FIXTURES.iter().find(|f| f.name == names[0]).expect("checked");
        return bench_one(fixture, args.seed);
    }
    let exe = std::env::current_exe().map_err(|e| Failure::Usage(e.to_string()))?;
    let mut failed = false;
    for batch in names.chunks(args.jobs.max(1)) {
        let children: Vec<_> = batch
            .iter()
            .map(|name| {
                Process::new(&exe)
                    .args(["bench", "--seed", &args.seed.to_string(), "--fixtures", name])
                    .output()
            })
            .collect();
        for child in children {
            let out = child.map_err(|e| Failure::Usage(e.to_string()))?;
            io::stdout().write_all(&out.stdout).map_err(|e| Failure::Usage(e.to_string()))?;
            failed |= !out.status.success();
        }
    }
    Ok(u8::from(failed))
}

fn bench_one(fixture: &Fixture, seed: u64) -> CliResult<u8> {
    let start = Instant::now();
    let coloring = (fixture.build)()?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let tree = TreeSpec::path(2);
    let result = extract_with_report(&coloring, &tree, 2, &ExtractOptions::new(fixture.mode, seed));
    let doc = match &result {
        Ok(report) => json!({
            "fixture": fixture.name,
            "n": coloring.n(),
            "outcome": report.certificate.variant_name(),
            "verified": verify_certificate(&coloring, Some(&tree), Some(2), &report.certificate).is_valid(),
            "build_ms": build_ms,
            "stages": report.timings.iter().map(|(s, d)| json!({ "stage": s, "ms": d.as_secs_f64() * 1e3 })).collect::<Vec<_>>(),
            "total_ms": start.elapsed().as_secs_f64() * 1e3,
            "peak_kib": peak_memory_kib(),
        }),
        Err(e) => json!({
            "fixture": fixture.name,
            "n": coloring.n(),
            "outcome": "Rejected",
            "reason": e.to_string(),
            "peak_kib": peak_memory_kib(),
        }),
    };
    println!("{}", serde_json::to_string(&doc).expect("bench record serializes"));
    Ok(match result {
        Ok(r) if !r.certificate.is_failure() => 0,
        _ => 1,
    })
}

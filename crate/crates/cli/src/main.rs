use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lhtw::bounds::bounds_report;
use lhtw::constructions::{supertree_to_td, td_to_supertree};
use lhtw::decomposition::{normalize_leaf_based, validate_std, validate_td};
use lhtw::derivations::{graph_as_hypergraph, two_section};
use lhtw::generators::{Generated, GeneratorKind, GeneratorSpec};
use lhtw::io::{self, Parsed};
use lhtw::solvers::{exact_treewidth, supertree_width};
use lhtw::{format_rational, Hypergraph};

mod suites;

#[derive(Parser)]
#[command(name = "lhtw", version, about = "Treewidth, supertree width and bounds for linear hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree and rank statistics of a graph or hypergraph file.
    Stats { file: Option<PathBuf> },
    /// Exact treewidth of a graph, or of a hypergraph's 2-section.
    Tw { file: Option<PathBuf> },
    /// Exact supertree width of a hypergraph.
    Stw { file: Option<PathBuf> },
    /// Every applicable bound on the 2-section's treewidth, as JSON.
    Bounds {
        file: Option<PathBuf>,
        /// Also compute the exact widths and check the bounds against them.
        #[arg(long)]
        exact: bool,
    },
    /// Generate a family member or a random linear hypergraph.
    Gen {
        kind: String,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Remove the matching that lowers the anti-rank to 2k - 1.
        #[arg(long)]
        odd: bool,
        /// Edge count for random instances.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 2)]
        min_degree: usize,
        /// The graph to dualize, for `graph-dual`.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Convert between tree decompositions of [H]_2 and supertree decompositions of H.
    Convert {
        direction: Direction,
        /// The hypergraph file.
        #[arg(long)]
        hypergraph: PathBuf,
        /// The decomposition; stdin when omitted.
        file: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = lhtw::corpus::DEFAULT_MAX_N)]
        max_n: usize,
        /// A JSON run manifest replacing the default corpus.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Write the corpus report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the corpus report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Td2std,
    Std2td,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Core,
    Bounds,
    Appendix,
    Sharpness,
    All,
}

enum Failure {
    /// Unreadable or unparsable input: exit 2.
    Input(String),
    /// Well-formed input that fails a check: exit 1.
    Invalid(String),
}

type Outcome = Result<(), Failure>;

/// Writes to stdout. A closed pipe (as with `| head`) is not an error.
pub fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn input(msg: impl ToString) -> Failure {
    Failure::Input(msg.to_string())
}

fn read_text(file: Option<&Path>) -> Result<String, Failure> {
    match file {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p).map_err(|e| input(format!("{}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(input)?;
            Ok(s)
        }
    }
}

fn read_parsed(file: Option<&Path>) -> Result<Parsed, Failure> {
    io::parse_any(&read_text(file)?).map_err(input)
}

fn read_hypergraph(file: Option<&Path>) -> Result<Hypergraph, Failure> {
    match read_parsed(file)? {
        Parsed::Hypergraph(h) => Ok(h),
        Parsed::Graph(g) => graph_as_hypergraph(&g).map_err(input),
        Parsed::Decomposition(_) => Err(input("expected a hypergraph, found a decomposition")),
    }
}

fn stats(file: Option<&Path>) -> Outcome {
    let h = read_hypergraph(file)?;
    let s = h.stats();
    let out = serde_json::json!({
        "n": s.n,
        "m": s.m,
        "rank": s.rank,
        "anti_rank": s.anti_rank,
        "min_degree": s.min_degree,
        "max_degree": s.max_degree,
        "avg_rank": format_rational(&s.avg_rank),
        "linear": s.is_linear,
        "regular": s.regular,
    });
    emit(&format!("{}\n", serde_json::to_string_pretty(&out).expect("json")));
    Ok(())
}

fn tw(file: Option<&Path>) -> Outcome {
    let g = match read_parsed(file)? {
        Parsed::Graph(g) => g,
        Parsed::Hypergraph(h) => two_section(&h),
        Parsed::Decomposition(_) => return Err(input("expected a graph, found a decomposition")),
    };
    let r = exact_treewidth(&g, None).map_err(|e| Failure::Invalid(e.to_string()))?;
    let td = r.tree_decomposition().expect("tree certificate");
    emit(&format!("c width {}\n{}", r.width, io::write_td(td, g.n())));
    Ok(())
}

fn stw(file: Option<&Path>) -> Outcome {
    let h = read_hypergraph(file)?;
    let r = supertree_width(&h).map_err(|e| Failure::Invalid(e.to_string()))?;
    let d = r.supertree_decomposition().expect("supertree certificate");
    emit(&format!("c width {}\n{}", r.width, io::write_std(d, h.n())));
    Ok(())
}

fn bounds(file: Option<&Path>, exact: bool) -> Outcome {
    let h = read_hypergraph(file)?;
    let report = bounds_report(&h, exact);
    emit(&format!("{}\n", serde_json::to_string_pretty(&report.to_json()).expect("json")));
    if report.violations().is_empty() {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("bounds violated: {:?}", report.violations())))
    }
}

fn generate(kind: &str, spec: GeneratorSpec) -> Outcome {
    let kind: GeneratorKind = kind.parse().map_err(input)?;
    let spec = GeneratorSpec { kind, ..spec };
    match spec.generate().map_err(input)? {
        Generated::Graph(g) => emit(&format!("{}", io::write_graph(&g))),
        Generated::Hypergraph(h) => emit(&format!("{}", io::write_hypergraph(&h))),
    }
    Ok(())
}

fn convert(direction: Direction, hypergraph: &Path, file: Option<&Path>) -> Outcome {
    let h = read_hypergraph(Some(hypergraph))?;
    let d = match read_parsed(file)? {
        Parsed::Decomposition(d) => d,
        _ => return Err(input("expected a decomposition file")),
    };
    match direction {
        Direction::Td2std => {
            let td = d.tree_decomposition();
            let report = validate_td(&two_section(&h), &td);
            if !report.is_valid() {
                return Err(Failure::Invalid(format!("not a tree decomposition of [H]_2: {:?}", report.violations)));
            }
            let leaf = normalize_leaf_based(&h, &td).map_err(|e| Failure::Invalid(e.to_string()))?;
            let std = td_to_supertree(&h, &leaf).map_err(|e| Failure::Invalid(e.to_string()))?;
            emit(&format!("c width {}\n{}", std.width(), io::write_std(&std, h.n())));
        }
        Direction::Std2td => {
            let std = d.supertree_decomposition().ok_or_else(|| input("decomposition has no edge bags"))?;
            let report = validate_std(&h, &std);
            if !report.is_valid() {
                return Err(Failure::Invalid(format!("not a supertree decomposition of H: {:?}", report.violations)));
            }
            let c = supertree_to_td(&h, &std).map_err(|e| Failure::Invalid(e.to_string()))?;
            emit(&format!("c width {}\nc bag bound {}\n{}", c.td.width(), format_rational(&c.bag_bound), io::write_td(&c.td, h.n())));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Stats { file } => stats(file.as_deref()),
        Command::Tw { file } => tw(file.as_deref()),
        Command::Stw { file } => stw(file.as_deref()),
        Command::Bounds { file, exact } => bounds(file.as_deref(), *exact),
        Command::Gen { kind, n, k, seed, odd, m, min_degree, graph } => (|| {
            let mut spec = GeneratorSpec::new(GeneratorKind::RandomLinear, *n, *k);
            spec.seed = *seed;
            spec.odd = *odd;
            spec.m = *m;
            spec.min_degree = *min_degree;
            if let Some(p) = graph {
                spec.source = Some(io::parse_graph(&read_text(Some(p))?).map_err(input)?);
            }
            generate(kind, spec)
        })(),
        Command::Convert { direction, hypergraph, file } => convert(*direction, hypergraph, file.as_deref()),
        Command::Verify { suite, seed, max_n, manifest, json, csv } => {
            let opts = suites::Options {
                seed: *seed,
                max_n: *max_n,
                manifest: manifest.clone(),
                json: json.clone(),
                csv: csv.clone(),
            };
            match suites::run(*suite, &opts) {
                Ok(true) => Ok(()),
                Ok(false) => Err(Failure::Invalid("verification failed".into())),
                Err(e) => Err(input(e)),
            }
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("lhtw: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("lhtw: {msg}");
            ExitCode::from(2)
        }
    }
}

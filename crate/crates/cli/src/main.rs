//! `cycle-encode` command-line front end.
//!
//! JSON goes to stdout, diagnostics to stderr. Exit codes: 0 success, 1
//! property failure, 2 usage or invalid input, 3 computation error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cycle_encode::distinguish::{compare, Encoder, FilterSpec, RootChoice};
use cycle_encode::export::{npy_bytes_f64, to_csv, to_json_matrix, FeatureMetadata};
use cycle_encode::generators::{GeneratorSpec, PointCloudParams};
use cycle_encode::hodge::{betti_number, cycle_space_projector, kernel_basis, ZERO_TOL};
use cycle_encode::peoi::{family_by_name, filter_enhanced_incidence, peoi_encode, Provenance};
use cycle_encode::scb::{cycle_incidence, scb_edge_embedding, shortest_cycle_basis};
use cycle_encode::topo::{cycle_epd, epd_to_json};
use cycle_encode::verify::{run_property, Property};
use cycle_encode::{load_graph, save_graph, Error, Graph, VERSION};

const THREADS_ENV: &str = "CYCLE_ENCODE_THREADS";

#[derive(Parser)]
#[command(
    name = "cycle-encode",
    version,
    about = "Cycle-aware edge encodings for graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as JSON.
    Gen(GenArgs),
    /// Compute an edge feature matrix.
    Features(FeaturesArgs),
    /// Run a seeded property suite on a graph.
    Verify(VerifyArgs),
    /// Compare two graphs under one or more encoders.
    Distinguish(DistinguishArgs),
    /// Print the cycle-wise persistence pairs of a graph.
    Epd(EpdArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: GenFamily,
    /// Output path for the graph JSON.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenFamily {
    #[command(name = "rook4x4")]
    Rook4x4,
    Shrikhande,
    Cfi {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
    },
    PointCloud {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        n_large: usize,
        #[arg(long, default_value_t = 60)]
        n_small: usize,
        #[arg(long, default_value_t = 20.0)]
        d_large: f64,
        #[arg(long, default_value_t = 1.0)]
        d_small: f64,
        #[arg(long, default_value_t = 3)]
        knn_k: usize,
    },
    /// Load, validate and canonicalize an existing graph file.
    Json {
        path: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Projector,
    Kernel,
    Scb,
    Peoi,
    ScbEdgeHist,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Npy,
}

#[derive(Args)]
struct FeaturesArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    /// ρ-family for `--mode peoi`.
    #[arg(long, default_value = "counting")]
    family: String,
    /// `none`, `sssp:<root>` or `coord:<axis>`; with `--mode peoi` a filter
    /// switches to the filter-enhanced incidence matrix.
    #[arg(long, default_value = "none")]
    filter: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path; stdout when omitted. A `<out>.meta.json` sidecar is
    /// written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Longest cycle length counted by `--mode scb-edge-hist` (default: the
    /// longest basis cycle).
    #[arg(long)]
    max_len: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    property: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DistinguishArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long = "encoder", required = true, num_args = 1..)]
    encoders: Vec<String>,
}

#[derive(Args)]
struct EpdArgs {
    #[arg(long)]
    graph: PathBuf,
    /// `sssp:<root>` or `coord:<axis>`.
    #[arg(long, default_value = "sssp:0")]
    filter: String,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

/// Errors caused by the request itself map to 2, the rest to 3.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidCfiParams { .. }
            | Error::InvalidGeneratorParams(_)
            | Error::UnknownFamily(_)
            | Error::UnknownEncoder(_)
            | Error::UnknownProperty(_)
            | Error::MissingFilter(_)
            | Error::Parse(_)
            | Error::RootOutOfRange { .. }
            | Error::AxisOutOfRange { .. } => 2,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read_graph(path: &Path) -> CliResult<Graph> {
    load_graph(path).map_err(|e| Failure::usage(format!("cannot load {}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    let io = |e: std::io::Error| Failure {
        code: 3,
        message: format!("write failed: {e}"),
    };
    match out {
        Some(path) => fs::write(path, bytes).map_err(io),
        None => std::io::stdout().write_all(bytes).map_err(io),
    }
}

fn cmd_gen(args: GenArgs) -> CliResult<u8> {
    let spec = match args.family {
        GenFamily::Rook4x4 => GeneratorSpec::Rook4x4,
        GenFamily::Shrikhande => GeneratorSpec::Shrikhande,
        GenFamily::Cfi { k, l } => GeneratorSpec::Cfi { k, l },
        GenFamily::PointCloud {
            seed,
            n_large,
            n_small,
            d_large,
            d_small,
            knn_k,
        } => GeneratorSpec::CyclePointCloud(PointCloudParams {
            seed,
            n_large,
            n_small,
            d_large,
            d_small,
            knn_k,
        }),
        GenFamily::Json { path } => GeneratorSpec::JsonFile(path),
    };
    let graph = match &spec {
        GeneratorSpec::JsonFile(path) => read_graph(path)?,
        other => other.generate()?,
    };
    if let Some(out) = &args.out {
        save_graph(&graph, out).map_err(|e| Failure {
            code: 3,
            message: format!("write failed: {e}"),
        })?;
    }
    let summary =
        serde_json::json!({"n": graph.n(), "m": graph.m(), "betti": betti_number(&graph)});
    println!("{summary}");
    Ok(0)
}

fn parse_filter(text: &str) -> CliResult<Option<FilterSpec>> {
    if text == "none" {
        return Ok(None);
    }
    match text.parse::<FilterSpec>()? {
        FilterSpec::Sssp(RootChoice::All) => {
            Err(Failure::usage("sssp:all is only valid for distinguish"))
        }
        spec => Ok(Some(spec)),
    }
}

fn cmd_features(args: FeaturesArgs) -> CliResult<u8> {
    let graph = read_graph(&args.graph)?;
    let filter = parse_filter(&args.filter)?;
    let mut family = None;
    let (data, provenance) = match args.mode {
        Mode::Projector => (cycle_space_projector(&graph).matrix, "projector"),
        Mode::Kernel => (kernel_basis(&graph).gamma, "kernel"),
        Mode::Scb => (
            cycle_incidence(&shortest_cycle_basis(&graph)?).to_f64(),
            "scb-incidence",
        ),
        Mode::ScbEdgeHist => {
            let basis = shortest_cycle_basis(&graph)?;
            let longest = basis
                .cycles()
                .iter()
                .map(|c| c.count_ones())
                .max()
                .unwrap_or(3);
            let max_len = args.max_len.unwrap_or(longest.max(3));
            if max_len < 3 {
                return Err(Failure::usage("--max-len must be at least 3"));
            }
            (
                scb_edge_embedding(&basis, max_len).data,
                Provenance::ScbHistogram.as_str(),
            )
        }
        Mode::Peoi => {
            let fam = family_by_name(&args.family)?;
            if fam.requires_filter() && filter.is_none() {
                return Err(Error::MissingFilter(format!("family '{}'", args.family)).into());
            }
            family = Some(args.family.clone());
            let x = cycle_incidence(&shortest_cycle_basis(&graph)?);
            let input = match filter {
                None => x.to_f64(),
                Some(spec) => {
                    let f = spec.assignments(&graph)?.remove(0);
                    filter_enhanced_incidence(&x, &f.edge_values)?
                }
            };
            (peoi_encode(&input, &fam)?.data, Provenance::Peoi.as_str())
        }
    };
    let (bytes, format) = match args.format {
        Format::Json => ((to_json_matrix(&data) + "\n").into_bytes(), "json"),
        Format::Csv => (to_csv(&graph, &data)?.into_bytes(), "csv"),
        Format::Npy => (npy_bytes_f64(&data), "npy"),
    };
    write_output(args.out.as_deref(), &bytes)?;
    if let Some(out) = &args.out {
        let meta = FeatureMetadata {
            mode: args
                .mode
                .to_possible_value()
                .expect("named")
                .get_name()
                .to_string(),
            provenance: provenance.to_string(),
            family,
            filter: filter.map(|f| f.to_string()),
            shape: (data.nrows(), data.ncols()),
            n: graph.n(),
            m: graph.m(),
            betti: betti_number(&graph),
            format: format.to_string(),
            zero_tol: ZERO_TOL,
            library_version: VERSION.to_string(),
        };
        let mut sidecar = out.as_os_str().to_owned();
        sidecar.push(".meta.json");
        write_output(
            Some(Path::new(&sidecar)),
            (meta.to_json_string() + "\n").as_bytes(),
        )?;
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> CliResult<u8> {
    let property: Property = args.property.parse()?;
    let graph = read_graph(&args.graph)?;
    let report = run_property(&graph, property, args.trials, args.seed)?;
    println!("{}", report.to_json());
    if report.passed {
        Ok(0)
    } else {
        eprintln!("property '{property}' failed");
        Ok(1)
    }
}

fn cmd_distinguish(args: DistinguishArgs) -> CliResult<u8> {
    let encoders = args
        .encoders
        .iter()
        .map(|e| e.parse::<Encoder>())
        .collect::<Result<Vec<_>, _>>()?;
    let a = read_graph(&args.a)?;
    let b = read_graph(&args.b)?;
    for encoder in &encoders {
        let verdict = compare(&a, &b, encoder).map_err(|e| Failure {
            code: 3,
            message: format!("encoder {encoder}: {e}"),
        })?;
        println!("{}", verdict.to_json());
    }
    Ok(0)
}

fn cmd_epd(args: EpdArgs) -> CliResult<u8> {
    let spec = parse_filter(&args.filter)?.ok_or_else(|| Failure::usage("epd needs a filter"))?;
    let graph = read_graph(&args.graph)?;
    let filter = spec.assignments(&graph)?.remove(0);
    let basis = shortest_cycle_basis(&graph)?;
    println!("{}", epd_to_json(&cycle_epd(&graph, &basis, &filter)?));
    Ok(0)
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value.parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        Failure::usage(format!(
            "{THREADS_ENV} must be a positive integer, got '{value}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure {
            code: 3,
            message: e.to_string(),
        })
}

fn run(cli: Cli) -> CliResult<u8> {
    configure_threads()?;
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Features(a) => cmd_features(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Distinguish(a) => cmd_distinguish(a),
        Command::Epd(a) => cmd_epd(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

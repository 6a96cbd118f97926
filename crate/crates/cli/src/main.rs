use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use wzw::fusion::{FusionAlphabet, FusionRing};
use wzw::kz::{kz_system, parallel_transport, Path};
use wzw::liealg::{DominantWeight, RootSystem};
use wzw::linalg::{fmt_rational, parse_rational, Matrix, Rational};
use wzw::oracle::{npoint_block_rank, three_point_rank, CoinvariantProblem};
use wzw::surface::{block_dimension, dehn_twist_eigenvalue, MarkedSurface, TrivalentGraph};
use wzw::verify::{self, Report};
use wzw::Error;

#[derive(Parser)]
#[command(
    name = "wzw",
    version,
    about = "Fusion rings, conformal blocks and KZ connections for WZW models"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Nonzero fusion coefficients of the level-ℓ alphabet.
    FusionTable {
        #[arg(long, default_value = "A1")]
        algebra: String,
        #[arg(long)]
        level: u32,
    },
    /// Dimension of the space of conformal blocks of a marked surface.
    Dim {
        #[arg(long, default_value = "A1")]
        algebra: String,
        #[arg(long, required_unless_present = "surface")]
        level: Option<u32>,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        /// Boundary labels as Dynkin coordinates, e.g. `1,1,0` for A1 or `1,0,0,1` for A2.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        labels: String,
        /// Surface JSON with an optional pair-of-pants graph; overrides the other flags.
        #[arg(long)]
        surface: Option<PathBuf>,
    },
    /// Eigenvalue of the Dehn twist around a boundary circle labelled μ.
    Dehn {
        #[arg(long, default_value = "A1")]
        algebra: String,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        label: String,
    },
    /// Brute-force coinvariant ranks.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// The KZ connection on sl2 conformal blocks.
    Kz {
        #[command(subcommand)]
        command: KzCommand,
    },
    /// Exact operator identities and the acceptance suite.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Rank of the three-point coinvariants at z = (0, 1, ∞).
    ThreePoint {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        labels: String,
    },
    /// Rank of the n-point coinvariants at finite points.
    Npoint {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        labels: String,
        /// Distinct rational points `p/q`; random when omitted.
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum KzCommand {
    /// The residue matrices A_ij on the coinvariants.
    Matrices {
        #[arg(long, default_value = "A1")]
        algebra: String,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        labels: String,
    },
    /// Parallel transport along a piecewise-linear path.
    Transport {
        #[arg(long)]
        path: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        labels: String,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    Virasoro {
        #[arg(long, default_value_t = 3)]
        kmax: i64,
        #[arg(long, default_value_t = 12)]
        degree: usize,
    },
    Sugawara {
        #[arg(long, default_value = "A1")]
        algebra: String,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        label: u32,
        #[arg(long, default_value_t = 6)]
        degree: usize,
    },
    /// One acceptance criterion by number.
    Criterion {
        id: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every acceptance criterion.
    All {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    User(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::User(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// A computed result together with its two renderings.
struct Output {
    json: Value,
    tsv: String,
    ok: bool,
}

impl Output {
    fn new(json: Value, tsv: String) -> Self {
        Output { json, tsv, ok: true }
    }
}

fn user(msg: impl Into<String>) -> Failure {
    Failure::User(msg.into())
}

fn algebra(name: &str) -> CliResult<RootSystem> {
    Ok(name.parse::<RootSystem>()?)
}

fn parse_ints(s: &str) -> CliResult<Vec<i64>> {
    s.split([',', ';'])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| user(format!("`{t}` is not an integer"))))
        .collect()
}

/// Splits a flat coordinate list into weights of the algebra's rank.
fn parse_weights(rs: &RootSystem, s: &str) -> CliResult<Vec<DominantWeight>> {
    let ints = parse_ints(s)?;
    let r = rs.rank();
    if ints.len() % r != 0 {
        return Err(user(format!(
            "{} coordinates do not split into weights of rank {r}",
            ints.len()
        )));
    }
    Ok(ints.chunks(r).map(|c| rs.dominant(c)).collect::<Result<_, _>>()?)
}

fn parse_sl2_labels(s: &str) -> CliResult<Vec<u32>> {
    parse_ints(s)?
        .into_iter()
        .map(|x| u32::try_from(x).map_err(|_| user(format!("label {x} is negative"))))
        .collect()
}

fn require_a1(name: &str) -> CliResult<()> {
    let rs = algebra(name)?;
    if rs.name() != "A1" {
        return Err(user(format!("only A1 is supported here, got {}", rs.name())));
    }
    Ok(())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| Value::String(fmt_rational(&m[(i, j)]))).collect()))
            .collect(),
    )
}

fn fusion_table(name: &str, level: u32) -> CliResult<Output> {
    let rs = algebra(name)?;
    let ring = FusionRing::build(&FusionAlphabet::new(&rs, level))?;
    let labels = ring.alphabet().labels();
    let triples = ring.nonzero_triples();
    let json = json!({
        "algebra": rs.name(),
        "level": level,
        "labels": labels,
        "coeffs": triples.iter().map(|(t, n)| json!({"labels": t, "n": n})).collect::<Vec<_>>(),
    });
    let mut tsv = String::from("i\tj\tk\tn\n");
    for ([i, j, k], n) in &triples {
        let _ = writeln!(tsv, "{}\t{}\t{}\t{n}", labels[*i], labels[*j], labels[*k]);
    }
    Ok(Output::new(json, tsv))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceFile {
    algebra: String,
    level: u32,
    genus: u32,
    #[serde(default)]
    boundary: Vec<Vec<i64>>,
    graph: Option<TrivalentGraph>,
}

fn dim(name: &str, level: Option<u32>, genus: u32, labels: &str, surface: Option<&PathBuf>) -> CliResult<Output> {
    let (rs, level, genus, boundary, graph) = match surface {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| user(format!("{}: {e}", p.display())))?;
            let f: SurfaceFile = serde_json::from_str(&text).map_err(|e| user(format!("{}: {e}", p.display())))?;
            let rs = algebra(&f.algebra)?;
            let boundary = f
                .boundary
                .iter()
                .map(|c| rs.dominant(c))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(g) = &f.graph {
                g.validate()?;
            }
            (rs, f.level, f.genus, boundary, f.graph)
        }
        None => {
            let rs = algebra(name)?;
            let boundary = parse_weights(&rs, labels)?;
            (
                rs,
                level.ok_or_else(|| user("--level is required"))?,
                genus,
                boundary,
                None,
            )
        }
    };
    let ring = Arc::new(FusionRing::build(&FusionAlphabet::new(&rs, level))?);
    let s = MarkedSurface::with_ring(ring, genus, &boundary)?;
    let d = block_dimension(&s, graph.as_ref())?;
    Ok(Output::new(json!({ "dimension": d }), format!("dimension\n{d}\n")))
}

fn dehn(name: &str, level: u32, label: &str) -> CliResult<Output> {
    let rs = algebra(name)?;
    let mu = rs.dominant(&parse_ints(label)?)?;
    let tw = dehn_twist_eigenvalue(&rs, level, &mu)?;
    let e = fmt_rational(tw.exponent());
    Ok(Output::new(
        json!({ "exponent": e, "eigenvalue": tw.to_string() }),
        format!("exponent\teigenvalue\n{e}\t{tw}\n"),
    ))
}

fn oracle(cmd: &OracleCommand) -> CliResult<Output> {
    match cmd {
        OracleCommand::ThreePoint { level, labels } => {
            let l = parse_sl2_labels(labels)?;
            let [a, b, c] = l[..] else {
                return Err(user(format!("three-point needs 3 labels, got {}", l.len())));
            };
            let r = three_point_rank(*level, a, b, c)?;
            Ok(Output::new(
                json!({ "rank": r.rank, "classical_rank": r.classical_rank }),
                format!("rank\tclassical_rank\n{}\t{}\n", r.rank, r.classical_rank),
            ))
        }
        OracleCommand::Npoint {
            level,
            labels,
            points,
            seed,
        } => {
            let l = parse_sl2_labels(labels)?;
            let z: Vec<Rational> = match points {
                Some(p) => p
                    .split(',')
                    .map(|t| parse_rational(t).ok_or_else(|| user(format!("`{t}` is not a rational"))))
                    .collect::<CliResult<_>>()?,
                None => {
                    use rand::SeedableRng;
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
                    verify::random_points(&mut rng, l.len())
                }
            };
            let rank = npoint_block_rank(&CoinvariantProblem::new(*level, l, z.clone()))?;
            let zs: Vec<String> = z.iter().map(fmt_rational).collect();
            Ok(Output::new(
                json!({ "rank": rank, "points": zs }),
                format!("rank\tpoints\n{rank}\t{}\n", zs.join(",")),
            ))
        }
    }
}

fn kz(cmd: &KzCommand) -> CliResult<Output> {
    match cmd {
        KzCommand::Matrices { algebra, level, labels } => {
            require_a1(algebra)?;
            let l = parse_sl2_labels(labels)?;
            let s = kz_system(*level, &l)?;
            let mut tsv = String::from("i\tj\trow\tentries\n");
            let mut mats = Vec::new();
            for (&(i, j), m) in s.matrices() {
                mats.push(json!({ "pair": [i, j], "matrix": matrix_json(m) }));
                for r in 0..m.rows() {
                    let row: Vec<String> = (0..m.cols()).map(|c| fmt_rational(&m[(r, c)])).collect();
                    let _ = writeln!(tsv, "{i}\t{j}\t{r}\t{}", row.join(" "));
                }
            }
            Ok(Output::new(
                json!({ "algebra": "A1", "level": level, "labels": l, "rank": s.rank(), "matrices": mats }),
                tsv,
            ))
        }
        KzCommand::Transport {
            path,
            steps,
            level,
            labels,
        } => {
            let l = parse_sl2_labels(labels)?;
            let text = std::fs::read_to_string(path).map_err(|e| user(format!("{}: {e}", path.display())))?;
            let p: Path = serde_json::from_str(&text).map_err(|e| user(format!("{}: {e}", path.display())))?;
            let s = kz_system(*level, &l)?;
            let r = parallel_transport(&s, &p, *steps)?;
            let mut tsv = String::from("row\tentries\n");
            for (i, row) in r.matrix.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|[a, b]| format!("{a:+.12e}{b:+.12e}i")).collect();
                let _ = writeln!(tsv, "{i}\t{}", cells.join(" "));
            }
            let _ = writeln!(tsv, "error_estimate\t{:.3e}", r.error_estimate);
            let mut out = Output::new(
                serde_json::to_value(&r).map_err(|e| Failure::Internal(e.to_string()))?,
                tsv,
            );
            out.ok = r.converged;
            Ok(out)
        }
    }
}

fn report_output(r: &Report) -> CliResult<Output> {
    let mut tsv = String::from("criterion\tname\twindow\tresidual_norm\tstatus\n");
    for c in &r.checks {
        let crit = c.criterion.map(|x| x.to_string()).unwrap_or_default();
        let status = if c.passed() { "pass" } else { "fail" };
        let _ = writeln!(tsv, "{crit}\t{}\t{}\t{}\t{status}", c.name, c.window, c.residual_norm);
    }
    let json = serde_json::to_value(r).map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(Output {
        json,
        tsv,
        ok: r.passed(),
    })
}

fn verify_cmd(cmd: &VerifyCommand) -> CliResult<Output> {
    let report = match cmd {
        VerifyCommand::Virasoro { kmax, degree } => verify::virasoro(*kmax, *degree)?,
        VerifyCommand::Sugawara {
            algebra,
            level,
            label,
            degree,
        } => {
            require_a1(algebra)?;
            verify::sugawara(*level, *label, *degree)?
        }
        VerifyCommand::Criterion { id, seed } => Report {
            checks: verify::criterion(*id, *seed)?,
        },
        VerifyCommand::All { seed } => verify::all(*seed)?,
    };
    report_output(&report)
}

fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::FusionTable { algebra, level } => fusion_table(algebra, *level),
        Command::Dim {
            algebra,
            level,
            genus,
            labels,
            surface,
        } => dim(algebra, *level, *genus, labels, surface.as_ref()),
        Command::Dehn { algebra, level, label } => dehn(algebra, *level, label),
        Command::Oracle { command } => oracle(command),
        Command::Kz { command } => kz(command),
        Command::Verify { command } => verify_cmd(command),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json value serializes") + "\n",
                Format::Tsv => out.tsv,
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(Failure::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}

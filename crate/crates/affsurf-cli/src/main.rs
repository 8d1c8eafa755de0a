//! `affsurf`: command-line front end.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 out-of-scope graph.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use affsurf::divisor::{self, RewriteLog};
use affsurf::family::{self, Chart, FamilyParams};
use affsurf::iso::{find_isomorphism, SignMode};
use affsurf::linalg::AbelianGroup;
use affsurf::plumbing;
use affsurf::topology::{self, FiniteGroupTable};
use affsurf::{Error, GraphKind, WeightedGraph};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "affsurf", version, about = "Boundary divisors, plumbing graphs and invariants of the surfaces S_{p1,p2}")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Emit graph results as Graphviz DOT.
    #[arg(long, global = true, conflicts_with = "json")]
    dot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Degrees {
    #[arg(long)]
    d1: usize,
    #[arg(long)]
    d2: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Family graph D + A1 + A2.
    Construct {
        #[arg(long)]
        d1: Option<usize>,
        #[arg(long)]
        d2: Option<usize>,
        /// Replay the blowups from the four lines; needs --p1 and --p2.
        #[arg(long)]
        by_blowups: bool,
        /// Monic polynomial, coefficients from the leading term down, e.g. 1,0,-2.
        #[arg(long, allow_hyphen_values = true)]
        p1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p2: Option<String>,
        /// Drop A1 and A2.
        #[arg(long)]
        d_part: bool,
        /// Write the blowup log here.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Bring every segment into standard form.
    Standardize {
        file: PathBuf,
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Contract superfluous (-1)-vertices.
    Minimalize {
        file: PathBuf,
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Elementary transformation at a 0-vertex.
    Flow {
        file: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        toward: String,
    },
    /// Bark coefficients of a twig, ids tip first.
    Bark {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        twig: Vec<String>,
    },
    /// Plumbing normal form.
    Normalize { file: PathBuf },
    /// Normal form of the reversed orientation.
    Reverse { file: PathBuf },
    /// Isomorphism test with witness.
    Compare { first: PathBuf, second: PathBuf },
    /// Seifert pieces of the JSJ cut.
    Jsj { file: PathBuf },
    /// First homology of the graph manifold.
    H1 { file: PathBuf },
    /// Presentation of the fundamental group at infinity.
    Pi1 {
        #[command(flatten)]
        d: Degrees,
        /// Count homomorphisms into every catalog group of at most this order.
        #[arg(long)]
        quotients: Option<usize>,
    },
    /// Alexander polynomial and 2-bridge fraction of K_[2d1,2d2].
    Alexander {
        #[command(flatten)]
        d: Degrees,
    },
    /// Homology of the surface from its handle decomposition.
    Homology {
        #[command(flatten)]
        d: Degrees,
    },
    /// Unimodularity and fibre relations of the boundary.
    Picard {
        #[command(flatten)]
        d: Degrees,
    },
    /// Symbolic check of a torus chart.
    VerifyChart {
        #[arg(long, value_parser = ["aa", "al1", "al2", "lc1", "lc2"])]
        case: String,
        #[arg(long, allow_hyphen_values = true)]
        p1: String,
        #[arg(long, allow_hyphen_values = true)]
        p2: String,
    },
    /// Graphviz rendering of a graph file.
    Dot { file: PathBuf },
    /// Apply a rewrite log to a graph.
    Replay { file: PathBuf, log: PathBuf },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<Output, Failure>;

/// Result of a subcommand: a graph or free text, with its JSON form.
enum Output {
    Graph(WeightedGraph),
    Normal(plumbing::NormalForm),
    Report { text: String, json: Value },
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

/// Accepts a bare graph or a normal-form object carrying one under `graph`.
fn load(path: &Path) -> Result<WeightedGraph, Failure> {
    let text = read(path)?;
    if let Ok(Value::Object(obj)) = serde_json::from_str::<Value>(&text) {
        if let Some(inner) = obj.get("graph") {
            return Ok(WeightedGraph::from_json(&inner.to_string())?);
        }
    }
    Ok(WeightedGraph::from_json(&text)?)
}

fn params(p1: &str, p2: &str) -> Result<FamilyParams, Failure> {
    FamilyParams::parse(p1, p2).map_err(|e| match e {
        Error::Parse(msg) => Failure::Usage(msg),
        e => Failure::Domain(e),
    })
}

fn save_log(path: &Option<PathBuf>, log: &RewriteLog) -> Result<(), Failure> {
    match path {
        Some(p) => write(p, &log.to_json()),
        None => Ok(()),
    }
}

fn group_json(g: &AbelianGroup) -> Value {
    json!({ "text": g.to_string(), "group": g })
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Construct { d1, d2, by_blowups, p1, p2, d_part, log } => {
            let fg = if *by_blowups {
                let (Some(p1), Some(p2)) = (p1, p2) else { return usage("--by-blowups needs --p1 and --p2") };
                let params = params(p1, p2)?;
                for (given, j) in [(d1, 1), (d2, 2)] {
                    if given.is_some_and(|d| d != params.d(j)) {
                        return usage(format!("--d{j} does not match deg p{j} + 1 = {}", params.d(j)));
                    }
                }
                let (fg, l) = family::build_by_blowups(&params)?;
                save_log(log, &l)?;
                fg
            } else {
                if p1.is_some() || p2.is_some() {
                    return usage("--p1/--p2 are only used with --by-blowups");
                }
                if log.is_some() {
                    return usage("--log needs --by-blowups");
                }
                let (Some(d1), Some(d2)) = (d1, d2) else { return usage("construct needs --d1 and --d2") };
                family::build_boundary_graph(*d1, *d2)?
            };
            Ok(Output::Graph(if *d_part { fg.d_part() } else { fg.graph }))
        }
        Command::Standardize { file, log } => {
            let (g, l) = divisor::standardize(&load(file)?)?;
            save_log(log, &l)?;
            Ok(Output::Graph(g))
        }
        Command::Minimalize { file, log } => {
            let (g, l) = divisor::snc_minimalize(&load(file)?)?;
            save_log(log, &l)?;
            Ok(Output::Graph(g))
        }
        Command::Flow { file, vertex, toward } => Ok(Output::Graph(divisor::elementary_flow(&load(file)?, vertex, toward)?)),
        Command::Bark { file, twig } => {
            if twig.is_empty() {
                return usage("--twig needs at least one vertex id");
            }
            let b = divisor::bark(&load(file)?, twig)?;
            let mut text = String::new();
            for id in twig {
                writeln!(text, "{id}: {}", b[id]).unwrap();
            }
            let json = Value::Object(b.iter().map(|(k, v)| (k.clone(), json!(v.to_string()))).collect());
            Ok(Output::Report { text, json })
        }
        Command::Normalize { file } => {
            let nf = plumbing::normalize(&as_plumbing(load(file)?))?;
            Ok(Output::Normal(nf))
        }
        Command::Reverse { file } => {
            let nf = plumbing::normalize(&as_plumbing(load(file)?))?;
            Ok(Output::Normal(plumbing::reverse_orientation(&nf)?))
        }
        Command::Compare { first, second } => {
            let (a, b) = (load(first)?, load(second)?);
            let mode = if a.kind == GraphKind::Plumbing || b.kind == GraphKind::Plumbing {
                SignMode::UpToFlips
            } else {
                SignMode::Strict
            };
            let witness = find_isomorphism(&a, &b, mode);
            let mut text = String::new();
            match &witness {
                Some(w) => {
                    writeln!(text, "isomorphic").unwrap();
                    for (x, y) in w {
                        writeln!(text, "  {x} -> {y}").unwrap();
                    }
                }
                None => writeln!(text, "not isomorphic").unwrap(),
            }
            Ok(Output::Report { text, json: json!({ "isomorphic": witness.is_some(), "witness": witness }) })
        }
        Command::Jsj { file } => {
            let nf = plumbing::normalize(&as_plumbing(load(file)?))?;
            let pieces = plumbing::jsj_cut(&nf)?;
            let text = pieces.iter().map(|p| format!("{p}\n")).collect();
            Ok(Output::Report { text, json: json!(pieces) })
        }
        Command::H1 { file } => {
            let h = plumbing::h1_from_graph(&load(file)?)?;
            Ok(Output::Report { text: format!("{h}\n"), json: group_json(&h) })
        }
        Command::Pi1 { d, quotients } => {
            let p = topology::pi1_presentation(d.d1, d.d2)?;
            let ab = topology::abelianization(&p);
            let mut text = format!("{p}\nabelianization: {ab}\n");
            let mut counts = serde_json::Map::new();
            if let Some(max) = quotients {
                for g in FiniteGroupTable::catalog().into_iter().filter(|g| g.order() <= *max) {
                    let n = topology::count_homs(&p, &g)?;
                    writeln!(text, "{:>8} {:>3} {n}", g.name, g.order()).unwrap();
                    counts.insert(g.name.clone(), json!(n));
                }
            }
            let json = json!({ "presentation": p, "text": p.to_string(), "abelianization": group_json(&ab), "hom_counts": counts });
            Ok(Output::Report { text, json })
        }
        Command::Alexander { d } => {
            let delta = topology::alexander_polynomial(d.d1, d.d2)?;
            let (p, q) = topology::two_bridge_fraction(d.d1, d.d2)?;
            let text = format!("{delta}\n2-bridge fraction: {p}/{q}\n");
            Ok(Output::Report { text, json: json!({ "alexander": delta.to_string(), "two_bridge": [p, q] }) })
        }
        Command::Homology { d } => {
            let h = family::surface_homology(d.d1, d.d2)?;
            let text = format!("H0 = {}\nH1 = {}\nH2 = {}\nchi = {}\n", h.h0, h.h1, h.h2, h.chi);
            Ok(Output::Report { text, json: json!(h) })
        }
        Command::Picard { d } => {
            let r = family::picard_check(&family::build_boundary_graph(d.d1, d.d2)?)?;
            let text = format!("det = {}\nunimodular = {}\nrelations = {}\n", r.det, r.unimodular, r.relations_verified);
            Ok(Output::Report { text, json: json!(r) })
        }
        Command::VerifyChart { case, p1, p2 } => {
            let chart = Chart::parse(case)?;
            let params = params(p1, p2)?;
            let report = family::verify_chart(chart, &params)?;
            let sign = family::volume_form_sign(chart, &params)?;
            let [r1, r2] = &report.residuals;
            let text = format!(
                "residual 1: {r1}\nresidual 2: {r2}\ninverse: {}\nvolume form ratio: {}\n",
                report.inverse_ok,
                sign.map_or("none".to_string(), |s| s.to_string())
            );
            let json = json!({
                "residuals": [r1.to_string(), r2.to_string()],
                "inverse_ok": report.inverse_ok,
                "volume_form_ratio": sign,
                "ok": report.ok() && sign.is_some(),
            });
            if !(report.ok() && sign.is_some()) {
                eprint!("{text}");
                return Err(Failure::Domain(Error::Precondition(format!("chart {case} does not verify"))));
            }
            Ok(Output::Report { text, json })
        }
        Command::Dot { file } => {
            let g = load(file)?;
            Ok(Output::Report { text: g.to_dot(), json: json!({ "dot": g.to_dot() }) })
        }
        Command::Replay { file, log } => {
            let log = RewriteLog::from_json(&read(log)?)?;
            Ok(Output::Graph(divisor::replay(&load(file)?, &log)?))
        }
    }
}

/// Divisor input is read as its plumbing graph with `+` edges.
fn as_plumbing(g: WeightedGraph) -> WeightedGraph {
    match g.kind {
        GraphKind::Divisor => plumbing::from_divisor_graph(&g),
        GraphKind::Plumbing => g,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pretty = |v: &Value| format!("{}\n", serde_json::to_string_pretty(v).expect("json"));
    let emitted = match run(&cli) {
        Ok(Output::Normal(nf)) if cli.json => Ok(pretty(&nf.to_json_value())),
        Ok(Output::Normal(plumbing::NormalForm { graph: g, .. })) | Ok(Output::Graph(g)) => {
            Ok(if cli.dot { g.to_dot() } else { format!("{}\n", g.to_json()) })
        }
        Ok(Output::Report { text, json }) => Ok(if cli.json { pretty(&json) } else { text }),
        Err(f) => Err(f),
    };
    match emitted {
        Ok(out) => {
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::OutOfScope(_)) { 3 } else { 1 })
        }
    }
}

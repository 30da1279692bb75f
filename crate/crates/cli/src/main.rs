use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minorkit::boundaried::{self, BoundariedGraph, RepresentativeSet};
use minorkit::bounds::{self, BoundParams, Constants, Evaluator, Ful};
use minorkit::contraction::{self, ColorLayout};
use minorkit::decomp::{self, TreeDecomposition};
use minorkit::flatness::{self, FlatnessDocument};
use minorkit::graph::{self, named};
use minorkit::walls::{self, Wall};
use minorkit::{minor, obstruction, Budget, Error, Graph, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "minorkit", version, about = "Graph-minor toolkit")]
struct Cli {
    /// Worker threads; 0 lets the pool decide.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Search node budget for minor, hitting-set and treewidth searches.
    #[arg(long, global = true, env = "MINORKIT_BUDGET", default_value_t = Budget::DEFAULT_NODES)]
    budget: u64,
    /// Write a run manifest here.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the minor obstructions of A_k(F) up to a vertex count.
    Obstructions {
        /// Family member; repeat for several.
        #[arg(short = 'F', long = "family", required = true)]
        family: Vec<String>,
        #[arg(short, default_value_t = 0)]
        k: usize,
        #[arg(long)]
        nmax: usize,
        /// Also write the enumeration summary as JSON.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Search for a minor model of a pattern in a host.
    Minor {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        host: String,
    },
    /// Apex number, or a hitting set for a family when -F is given.
    Apex {
        #[arg(long)]
        graph: String,
        #[arg(short = 'F', long = "family")]
        family: Vec<String>,
        #[arg(short)]
        k: Option<usize>,
    },
    /// Build a wall of height r, optionally subdivided at random.
    Wall {
        #[arg(long)]
        r: usize,
        /// Probability that a template edge gets subdivided.
        #[arg(long, default_value_t = 0.0)]
        subdiv_p: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Canonical partition of the elementary wall of height r.
    Partition {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    #[command(subcommand)]
    Flatness(FlatnessCmd),
    #[command(subcommand)]
    Contract(ContractCmd),
    /// The l-folio of a boundaried graph.
    Folio {
        #[arg(long)]
        graph: String,
        /// Comma-separated boundary vertices, in boundary order.
        #[arg(long, default_value = "")]
        boundary: String,
        #[arg(long, default_value_t = 1)]
        ell: usize,
    },
    /// The characteristic of a boundaried graph, as CSV.
    Char(CharArgs),
    #[command(subcommand)]
    Decomp(DecompCmd),
    #[command(subcommand)]
    Bounds(BoundsCmd),
}

#[derive(Subcommand)]
enum FlatnessCmd {
    /// Check a flatness document.
    Validate { doc: PathBuf },
    /// Tilt of the central subwall of height q.
    Tilt {
        doc: PathBuf,
        #[arg(long)]
        q: usize,
    },
    /// Emit a seeded plane fixture document.
    Fixture {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0.3)]
        subdiv_p: f64,
        #[arg(long, default_value_t = 0.3)]
        flap_p: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Layout {
    Blocks,
    Interleaved,
    Shuffled,
}

#[derive(Subcommand)]
enum ContractCmd {
    /// Contract a seeded host with a scattered colouring onto an r-grid.
    Panchromatic {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        a: usize,
        /// Scatter distance; defaults to 2r².
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_enum, default_value_t = Layout::Shuffled)]
        layout: Layout,
        #[arg(long, default_value_t = 0.3)]
        chord_p: f64,
    },
    /// Scattered selection on a seeded apex grid.
    Select {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        a: usize,
        #[arg(long, default_value_t = 0.0)]
        density: f64,
        #[arg(long, default_value_t = 0.3)]
        chord_p: f64,
    },
    /// Apex-fixed contraction of a seeded apex grid onto a complete apex r-grid.
    Apexgrid {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        a: usize,
        #[arg(long, default_value_t = 0.0)]
        density: f64,
        #[arg(long, default_value_t = 0.3)]
        chord_p: f64,
    },
}

#[derive(Args)]
struct CharArgs {
    /// `graph6|b1,b2,...`, or a graph argument used with --boundary.
    #[arg(long)]
    graph: String,
    #[arg(long)]
    boundary: Option<String>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    h: usize,
    /// Context size of the bounded order.
    #[arg(long, default_value_t = 4)]
    c: usize,
    #[arg(long, default_value_t = 4)]
    size_bound: usize,
    /// Load the representative set instead of computing it.
    #[arg(long)]
    reps: Option<PathBuf>,
    #[arg(long)]
    save_reps: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DecompCmd {
    /// Check a .td decomposition against a graph.
    Validate { graph: String, td: PathBuf },
    /// Check linkedness, optionally refining first.
    Linked {
        graph: String,
        td: PathBuf,
        #[arg(long, default_value_t = usize::MAX)]
        s_max: usize,
        #[arg(long)]
        refine: bool,
    },
    /// Exact treewidth with an optimal decomposition in .td format.
    Tw { graph: String },
}

#[derive(Args)]
struct BoundArgs {
    name: String,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    t: Option<u64>,
    #[arg(long)]
    l: Option<u64>,
    #[arg(long)]
    h: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    x: Option<u64>,
    #[arg(long)]
    y: Option<u64>,
    #[arg(long)]
    z: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    at: Option<u64>,
    #[arg(long)]
    tw: Option<u64>,
    /// JSON object of named constants.
    #[arg(long)]
    constants: Option<PathBuf>,
    /// JSON description of the f_ul plug-in.
    #[arg(long)]
    ful: Option<PathBuf>,
    #[arg(long, default_value_t = bounds::DEFAULT_MAX_BITS)]
    max_bits: u64,
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// JSON {value, trace, constants}.
    Eval(BoundArgs),
    /// Human-readable derivation tree.
    Explain(BoundArgs),
    /// List the catalog.
    List,
}

#[derive(Serialize)]
struct RunManifest {
    command_line: Vec<String>,
    seed: u64,
    threads: usize,
    budgets: BTreeMap<String, u64>,
    constants: Option<Constants>,
    wall_clock_ms: u128,
    complete: bool,
    exit_code: u8,
}

/// Output of a subcommand plus what the manifest needs to know about it.
struct Outcome {
    stdout: String,
    complete: bool,
    constants: Option<Constants>,
}

impl Outcome {
    fn text(s: String) -> Self {
        Outcome { stdout: s, complete: true, constants: None }
    }

    fn json<T: Serialize>(v: &T) -> Self {
        Outcome::text(serde_json::to_string_pretty(v).expect("serialisable") + "\n")
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::Parse(_) | Error::Configuration(_) => 2,
        Error::ResourceLimit(_) => 3,
        Error::NotFound(_) => 4,
        Error::Unsupported(_) => 5,
        Error::ConstructionBug(_) => 70,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn write(path: &Path, s: &str) -> Result<()> {
    std::fs::write(path, s).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

/// A file path, a built-in name, or a graph6/JSON literal, tried in that order.
fn load_graph(arg: &str) -> Result<Graph> {
    let p = Path::new(arg);
    if p.is_file() {
        return graph::parse_graph(read(p)?.trim());
    }
    named::by_name(arg).or_else(|_| graph::parse_graph(arg))
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::InvalidArgument(format!("bad vertex '{t}'"))))
        .collect()
}

fn load_boundaried(arg: &str, boundary: Option<&str>) -> Result<BoundariedGraph> {
    match boundary {
        Some(b) => BoundariedGraph::new(load_graph(arg)?, parse_list(b)?),
        None if Path::new(arg).is_file() => BoundariedGraph::from_text(read(Path::new(arg))?.trim()),
        None if arg.contains('|') => BoundariedGraph::from_text(arg),
        None => BoundariedGraph::new(load_graph(arg)?, Vec::new()),
    }
}

fn load_td(path: &Path, g: &Graph) -> Result<TreeDecomposition> {
    let (td, n) = TreeDecomposition::from_td(&read(path)?)?;
    if n != g.n() {
        return Err(Error::InvalidArgument(format!("decomposition is for {n} vertices, graph has {}", g.n())));
    }
    Ok(td)
}

fn bound_params(b: &BoundArgs) -> BoundParams {
    let all = [
        ("a", b.a),
        ("s", b.s),
        ("k", b.k),
        ("t", b.t),
        ("l", b.l),
        ("h", b.h),
        ("r", b.r),
        ("q", b.q),
        ("d", b.d),
        ("n", b.n),
        ("x", b.x),
        ("y", b.y),
        ("z", b.z),
        ("p", b.p),
        ("at", b.at),
        ("tw", b.tw),
    ];
    let mut p = BoundParams::default();
    for (k, v) in all {
        if let Some(v) = v {
            p.set(k, v);
        }
    }
    p
}

fn evaluator(b: &BoundArgs) -> Result<Evaluator> {
    let constants = match &b.constants {
        Some(p) => Constants::from_json(&read(p)?)?,
        None => Constants::default(),
    };
    let ful = match &b.ful {
        Some(p) => Ful::from_json(&read(p)?)?,
        None => Ful::default(),
    };
    Ok(Evaluator::new(constants, ful).with_max_bits(b.max_bits))
}

fn run_bounds(cmd: &BoundsCmd) -> Result<Outcome> {
    match cmd {
        BoundsCmd::List => {
            let rows: Vec<Value> = bounds::CATALOG
                .iter()
                .map(|e| json!({"name": e.name, "params": e.params, "about": e.about, "needs_ful": e.needs_ful}))
                .collect();
            Ok(Outcome::json(&rows))
        }
        BoundsCmd::Eval(b) => {
            let ev = evaluator(b)?;
            let (value, trace) = ev.explain(&b.name, &bound_params(b))?;
            let value = value.ok_or_else(|| Error::ResourceLimit(format!("{} exceeds 2^{}", b.name, b.max_bits)))?;
            let mut out = Outcome::json(&json!({
                "value": value.to_string(),
                "trace": trace,
                "constants": ev.constants,
            }));
            out.constants = Some(ev.constants.clone());
            Ok(out)
        }
        BoundsCmd::Explain(b) => {
            let ev = evaluator(b)?;
            let (_, trace) = ev.explain(&b.name, &bound_params(b))?;
            let mut out = Outcome::text(trace.to_string());
            out.constants = Some(ev.constants.clone());
            Ok(out)
        }
    }
}

fn random_subdivisions(r: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Wall> {
    let base = walls::build_elementary_wall(r)?;
    let mut sub = BTreeMap::new();
    for (u, v) in base.graph().edges() {
        if rng.gen_bool(p) {
            sub.insert((u, v), rng.gen_range(1..=2));
        }
    }
    Wall::with_subdivisions(r, sub)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match &cli.cmd {
        Cmd::Obstructions { family, k, nmax, summary } => {
            let fam = family.iter().map(|f| load_graph(f)).collect::<Result<Vec<_>>>()?;
            let run = obstruction::enumerate_obstructions(&fam, *k, *nmax)?;
            if let Some(p) = summary {
                write(p, &run.manifest_json())?;
            }
            Ok(Outcome { stdout: run.to_ndjson(), complete: run.complete_up_to_n_max, constants: None })
        }
        Cmd::Minor { pattern, host } => {
            let (h, g) = (load_graph(pattern)?, load_graph(host)?);
            match minor::is_minor_budget(&h, &g, &Budget::new(cli.budget))? {
                Some(w) => Ok(Outcome::json(&json!({"minor": true, "witness": w}))),
                None => Ok(Outcome::json(&json!({"minor": false}))),
            }
        }
        Cmd::Apex { graph, family, k } => {
            let g = load_graph(graph)?;
            if family.is_empty() {
                let a = graph::apex_number(&g)?;
                return Ok(Outcome::json(&json!({"apex_number": a, "planar": a == 0})));
            }
            let fam = family.iter().map(|f| load_graph(f)).collect::<Result<Vec<_>>>()?;
            let budget = Budget::new(cli.budget);
            match k {
                Some(k) => {
                    let s = minor::hitting_set_budget(&g, &fam, *k, &budget)?;
                    Ok(Outcome::json(&json!({"k": k, "hitting_set": s})))
                }
                None => Ok(Outcome::json(&json!({"min_hitting_size": minor::min_hitting_size(&g, &fam)?}))),
            }
        }
        Cmd::Wall { r, subdiv_p, svg } => {
            let w = random_subdivisions(*r, *subdiv_p, &mut rng)?;
            if let Some(p) = svg {
                write(p, &w.partition_svg(&w.canonical_partition()))?;
            }
            Ok(Outcome::json(&json!({"wall": w.to_json(), "graph": graph::to_graph6(&w.graph())})))
        }
        Cmd::Partition { r, svg } => {
            let w = walls::build_elementary_wall(*r)?;
            let cp = w.canonical_partition();
            if let Some(p) = svg {
                write(p, &w.partition_svg(&cp))?;
            }
            let internal: Vec<Value> = cp.internal.iter().map(|(&(i, j), bag)| json!({"i": i, "j": j, "bag": bag})).collect();
            Ok(Outcome::json(&json!({"r": r, "internal": internal, "external": cp.external})))
        }
        Cmd::Flatness(f) => match f {
            FlatnessCmd::Validate { doc } => {
                let d = FlatnessDocument::from_json(&read(doc)?)?;
                Ok(Outcome::json(&flatness::validate_flatness(&d.graph, &d.wall()?, &d.certificate)))
            }
            FlatnessCmd::Tilt { doc, q } => {
                let d = FlatnessDocument::from_json(&read(doc)?)?;
                let w = d.wall()?;
                let sub = w.central_subwall(*q)?;
                let tilt = flatness::compute_tilt(&d.graph, &w, &d.certificate, &sub)?;
                let conditions = flatness::tilt_conditions(&d.graph, &w, &d.certificate, &sub, &tilt)?;
                Ok(Outcome::json(&json!({"tilt": tilt, "conditions": conditions})))
            }
            FlatnessCmd::Fixture { r, subdiv_p, flap_p } => {
                let d = flatness::plane_fixture(*r, *subdiv_p, *flap_p, &mut rng)?;
                Ok(Outcome::text(d.to_json() + "\n"))
            }
        },
        Cmd::Contract(c) => match c {
            ContractCmd::Panchromatic { r, a, d, layout, chord_p } => {
                let layout = match layout {
                    Layout::Blocks => ColorLayout::Blocks,
                    Layout::Interleaved => ColorLayout::Interleaved,
                    Layout::Shuffled => ColorLayout::Shuffled,
                };
                let d = d.unwrap_or(2 * r * r);
                let (host, sets) = contraction::panchromatic_fixture(*r, *a, d, 0, layout, *chord_p, &mut rng)?;
                let out = contraction::panchromatic_contract(&host, &sets, *r)?;
                let verified = contraction::verify_witness(&host.graph(), &out.witness, &[]);
                Ok(Outcome::json(&json!({"host": host, "collection": sets, "result": out, "verified": verified})))
            }
            ContractCmd::Select { r, a, density, chord_p } => {
                let ag = contraction::apex_fixture(*r, *a, *density, *chord_p, &mut rng)?;
                let sel = contraction::select_scattered(&ag.grid, &ag.apex_neighbors, *r)?;
                let verified = contraction::verify_witness(&ag.grid.graph(), &sel.witness, &[]);
                Ok(Outcome::json(&json!({"host": ag, "result": sel, "verified": verified})))
            }
            ContractCmd::Apexgrid { r, a, density, chord_p } => {
                let ag = contraction::apex_fixture(*r, *a, *density, *chord_p, &mut rng)?;
                let out = contraction::apex_grid_contract(&ag, *r)?;
                let verified = contraction::verify_witness(&ag.graph()?, &out.witness, &out.fixed);
                Ok(Outcome::json(&json!({"host": ag, "result": out, "verified": verified})))
            }
        },
        Cmd::Folio { graph, boundary, ell } => {
            let g = BoundariedGraph::new(load_graph(graph)?, parse_list(boundary)?)?;
            let f = boundaried::folio(&g, *ell)?;
            let members: Vec<String> = f.members.iter().map(|c| c.to_hex()).collect();
            Ok(Outcome::json(&json!({"t": f.t, "ell": f.ell, "size": members.len(), "members": members})))
        }
        Cmd::Char(a) => {
            let g = load_boundaried(&a.graph, a.boundary.as_deref())?;
            let reps = match &a.reps {
                Some(p) => RepresentativeSet::from_json(&read(p)?)?,
                None => boundaried::representatives(g.t(), a.h, a.size_bound, a.c)?,
            };
            if let Some(p) = &a.save_reps {
                write(p, &reps.to_json())?;
            }
            let ch = boundaried::characteristic(&g, a.k, a.h, &reps)?;
            Ok(Outcome::text(ch.to_csv()))
        }
        Cmd::Decomp(d) => match d {
            DecompCmd::Validate { graph, td } => {
                let g = load_graph(graph)?;
                let td = load_td(td, &g)?;
                let v = td.validate(&g);
                Ok(Outcome::json(&json!({"valid": v.is_valid(), "verdict": v, "width": td.width()})))
            }
            DecompCmd::Linked { graph, td, s_max, refine } => {
                let g = load_graph(graph)?;
                let td = load_td(td, &g)?;
                if *refine {
                    let (t2, v) = decomp::refine_linked(&td, &g, *s_max)?;
                    Ok(Outcome::json(&json!({"verdict": v, "td": t2.to_td(g.n())})))
                } else {
                    Ok(Outcome::json(&json!({"verdict": decomp::check_linked(&td, &g, *s_max)?})))
                }
            }
            DecompCmd::Tw { graph } => {
                let g = load_graph(graph)?;
                let (_, td) = decomp::treewidth_exact(&g, &Budget::new(cli.budget))?;
                Ok(Outcome::text(td.to_td(g.n())))
            }
        },
        Cmd::Bounds(b) => run_bounds(b),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(70);
    }
    let result = run(&cli);
    let (code, complete, constants) = match &result {
        Ok(o) => {
            print!("{}", o.stdout);
            (0, o.complete, o.constants.clone())
        }
        Err(e) => {
            eprintln!("error: {e}");
            (exit_code(e), false, None)
        }
    };
    if let Some(p) = &cli.manifest {
        let m = RunManifest {
            command_line: std::env::args().collect(),
            seed: cli.seed,
            threads: cli.threads,
            budgets: BTreeMap::from([("nodes".to_string(), cli.budget)]),
            constants,
            wall_clock_ms: start.elapsed().as_millis(),
            complete,
            exit_code: code,
        };
        if let Err(e) = write(p, &(serde_json::to_string_pretty(&m).expect("serialisable") + "\n")) {
            eprintln!("error: {e}");
        }
    }
    ExitCode::from(code)
}

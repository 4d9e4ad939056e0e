use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sge_cli::{render_svg, RenderStyle};
use sge_core::analyzer::{analyze, index_from_plan};
use sge_core::counterexample::{
    build_instance, compute_paper_parameters, parse_plan, validate_structure, write_plan, BuildOutput,
    CounterexampleParams, SizeReport, DEFAULT_CAP,
};
use sge_core::format::{parse_drawing, parse_instance, parse_level_tree, write_drawing, write_instance};
use sge_core::leveltree::{search_level_planar, search_region_level_planar, LevelError, LevelOutcome, RegionOutcome};
use sge_core::model::{tree_depth, validate_instance, ModelError};
use sge_core::planarity::{check_drawing, search_embedding, CrossingReport, PlanarityError, SearchOutcome, Strategy};
use sge_core::{depth2, Drawing, Instance, Point};

#[derive(Parser)]
#[command(name = "sge", version, about = "Simultaneous geometric embeddings of trees and paths")]
struct Cli {
    /// Worker threads for parallel searches (output does not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Build the depth-4 tree and path (writes PREFIX.sge and PREFIX.plan).
    Generate(GenerateArgs),
    /// Exact paper-scale parameters for the given x values.
    Params {
        #[arg(default_values_t = [1u64, 2])]
        x: Vec<u64>,
    },
    /// Draw an instance whose tree has depth at most 2.
    #[command(name = "embed-depth2")]
    EmbedDepth2 {
        instance: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check that a drawing is planar for both the tree and the path.
    Check {
        instance: PathBuf,
        drawing: PathBuf,
        /// Use the all-pairs checker instead of the sweep.
        #[arg(long)]
        naive: bool,
    },
    /// Exhaustive search for a simultaneous embedding on candidate points.
    Search(SearchArgs),
    /// Exhaustive search for a planar level or region-level drawing.
    #[command(name = "level-search")]
    LevelSearch {
        tree: PathBuf,
        /// Grid width for level drawings; candidates per side for regions.
        #[arg(long, default_value_t = 10)]
        grid: usize,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Passages, doors, channels and cuts of a drawing of a generated instance.
    Analyze { instance: PathBuf, plan: PathBuf, drawing: PathBuf },
    /// Write an SVG picture of a drawing.
    Render {
        instance: PathBuf,
        drawing: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Faint horizontal lines through the occupied y-coordinates.
        #[arg(long)]
        level_lines: bool,
    },
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 2)]
    s: u64,
    #[arg(long, default_value_t = 1)]
    x: u64,
    /// Use the given y and q with the paper's constants and report sizes only.
    #[arg(long, requires = "y", requires = "q")]
    symbolic: bool,
    #[arg(long)]
    y: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    /// Largest instance (in vertices) built explicitly.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Output prefix; required unless `--symbolic`.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    instance: PathBuf,
    /// Candidates are the integer points of a `grid` x `grid` square.
    #[arg(long)]
    grid: Option<usize>,
    /// Candidates are this many random integer points (see `--seed`).
    #[arg(long, conflicts_with = "grid")]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Clean,
    Violation,
    Budget,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn load_drawing(path: &Path) -> Result<Drawing> {
    parse_drawing(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command, cli.format) {
        Ok(Status::Clean) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(1),
        Ok(Status::Budget) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command, format: Format) -> Result<Status> {
    match cmd {
        Command::Generate(a) => generate(a, format),
        Command::Params { x } => params(&x, format),
        Command::EmbedDepth2 { instance, out } => embed(&instance, out.as_deref()),
        Command::Check { instance, drawing, naive } => check(&instance, &drawing, naive, format),
        Command::Search(a) => search(a),
        Command::LevelSearch { tree, grid, budget, out } => level_search(&tree, grid, budget, out.as_deref()),
        Command::Analyze { instance, plan, drawing } => analyze_cmd(&instance, &plan, &drawing, format),
        Command::Render { instance, drawing, out, level_lines } => {
            let i = load_instance(&instance)?;
            let d = load_drawing(&drawing)?;
            let style = RenderStyle { level_lines, ..RenderStyle::default() };
            emit(out.as_deref(), &render_svg(&i, &d, &style)?)?;
            Ok(Status::Clean)
        }
    }
}

fn size_lines(r: &SizeReport) -> Vec<(&'static str, String)> {
    vec![
        ("vertices", r.vertices.to_string()),
        ("tree-edges", r.tree_edges.to_string()),
        ("path-edges", r.path_edges.to_string()),
        ("cells", r.cells.to_string()),
        ("cell-sets", r.cell_sets.to_string()),
        ("formations", r.formations.to_string()),
        ("extended-formations", r.extended_formations.to_string()),
        ("sefs", r.sefs.to_string()),
        ("cells-per-formation", r.cells_per_formation.to_string()),
        ("cells-per-joint-per-formation", r.cells_per_joint_per_formation.to_string()),
        ("cell-vertices", r.cell_vertices.to_string()),
    ]
}

fn generate(a: GenerateArgs, format: Format) -> Result<Status> {
    let mut p = if a.symbolic {
        CounterexampleParams::paper(a.s, a.x, a.y.unwrap_or(0), a.q.unwrap_or(0))
    } else {
        CounterexampleParams::reduced(a.s, a.x)
    };
    p.cap = a.cap;
    if !a.symbolic && a.out.is_none() {
        bail!("--out PREFIX is required unless --symbolic is given");
    }
    match build_instance(&p)? {
        BuildOutput::Symbolic(r) => {
            for (k, v) in size_lines(&r) {
                match format {
                    Format::Text => println!("{k:>30}  {v}"),
                    Format::Records => println!("size {k} {v}"),
                }
            }
            Ok(Status::Clean)
        }
        BuildOutput::Desk(g) => {
            let prefix = a.out.expect("checked above");
            write(&prefix.with_extension("sge"), &write_instance(&g.instance))?;
            write(&prefix.with_extension("plan"), &write_plan(&g.plan))?;
            let report = validate_structure(&g.instance, &p);
            let depth = tree_depth(&g.instance.tree);
            match format {
                Format::Text => println!(
                    "{} vertices, tree depth {depth}, {} cells, {} structural violations",
                    g.instance.len(),
                    g.plan.cells.len(),
                    report.violations.len()
                ),
                Format::Records => {
                    println!("generated {} {depth} {}", g.instance.len(), g.plan.cells.len());
                    for v in &report.violations {
                        println!("violation {v}");
                    }
                }
            }
            Ok(if report.is_clean() { Status::Clean } else { Status::Violation })
        }
    }
}

fn params(xs: &[u64], format: Format) -> Result<Status> {
    if xs.contains(&0) {
        bail!("x must be positive");
    }
    for &x in xs {
        let p = compute_paper_parameters(x);
        let flags = [
            ("degenerate", p.degenerate),
            ("y-divisible", p.y_divisible),
            ("x-within-cap", p.x_within_cap),
            ("y-within-cap", p.y_within_cap),
        ];
        match format {
            Format::Text => {
                println!("x = {}", p.x);
                for (k, v) in [("r", &p.r), ("y", &p.y), ("s", &p.s), ("l", &p.l), ("t", &p.t), ("n bound", &p.n_bound)] {
                    println!("  {k:>8} = {v}");
                }
                for (k, v) in flags {
                    println!("  {k:>12}: {}", if v { "yes" } else { "no" });
                }
                if p.degenerate {
                    println!("  warning: s = 0 at x = 1, the construction needs x >= 2");
                }
            }
            Format::Records => {
                let f: Vec<String> = flags.iter().map(|(k, v)| format!("{k}={}", u8::from(*v))).collect();
                println!("params {} {} {} {} {} {} {}", p.x, p.r, p.y, p.s, p.l, p.t, f.join(" "));
            }
        }
    }
    Ok(Status::Clean)
}

fn embed(path: &Path, out: Option<&Path>) -> Result<Status> {
    let i = load_instance(path)?;
    match depth2::embed_depth2(&i) {
        Ok(d) => {
            emit(out, &write_drawing(&d))?;
            Ok(Status::Clean)
        }
        Err(depth2::Depth2Error::Model(ModelError::DepthExceeded { depth, .. })) => {
            eprintln!(
                "embed-depth2: tree has depth {depth}, only depth <= 2 is supported. Depth 3 is open, and \
                 at depth 4 some tree and path admit no simultaneous embedding at all: \
                 `sge generate` builds that counterexample construction."
            );
            Ok(Status::Violation)
        }
        Err(e) => Err(e.into()),
    }
}

fn report_lines(graph: &str, r: &CrossingReport, format: Format) {
    match format {
        Format::Text => {
            println!(
                "{graph}: {} ({} crossings, {} vertices on edges)",
                if r.planar { "planar" } else { "NOT planar" },
                r.crossings.len(),
                r.vertex_on_edge.len()
            );
            for (e, f, rel) in &r.crossings {
                println!("  ({}, {}) x ({}, {}): {rel:?}", e.0, e.1, f.0, f.1);
            }
            for (v, e) in &r.vertex_on_edge {
                println!("  vertex {v} on ({}, {})", e.0, e.1);
            }
        }
        Format::Records => {
            println!("graph {graph} {}", u8::from(r.planar));
            for (e, f, rel) in &r.crossings {
                println!("crossing {graph} {} {} {} {} {rel:?}", e.0, e.1, f.0, f.1);
            }
            for (v, e) in &r.vertex_on_edge {
                println!("on-edge {graph} {v} {} {}", e.0, e.1);
            }
        }
    }
}

fn check(instance: &Path, drawing: &Path, naive: bool, format: Format) -> Result<Status> {
    let i = load_instance(instance)?;
    let d = load_drawing(drawing)?;
    let v = validate_instance(&i);
    if !v.is_clean() {
        for x in &v.violations {
            println!("invalid instance: {x}");
        }
        return Ok(Status::Violation);
    }
    if d.len() != i.len() {
        bail!("drawing has {} vertices, instance has {}", d.len(), i.len());
    }
    let strategy = if naive { Strategy::Naive } else { Strategy::Sweep };
    let tree = check_drawing(&i.tree.edges(), &d, strategy)?;
    let path = check_drawing(&i.path.edges(), &d, strategy)?;
    report_lines("tree", &tree, format);
    report_lines("path", &path, format);
    Ok(if tree.planar && path.planar { Status::Clean } else { Status::Violation })
}

fn search(a: SearchArgs) -> Result<Status> {
    let i = load_instance(&a.instance)?;
    let points: Vec<Point> = match (a.grid, a.random) {
        (Some(w), _) => (0..w as i64).flat_map(|x| (0..w as i64).map(move |y| Point::int(x, y))).collect(),
        (None, Some(m)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let side = (4 * m as i64).max(8);
            let mut pts: Vec<Point> = Vec::new();
            while pts.len() < m {
                let p = Point::int(rng.random_range(0..side), rng.random_range(0..side));
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            pts
        }
        (None, None) => bail!("give --grid W or --random M"),
    };
    match search_embedding(&i, &points, a.budget) {
        Ok(SearchOutcome::Found(d)) => {
            println!("found a simultaneous embedding on {} candidate points", points.len());
            if let Some(out) = a.out {
                write(&out, &write_drawing(&d))?;
            }
            Ok(Status::Clean)
        }
        Ok(SearchOutcome::Exhausted) => {
            println!("no simultaneous embedding on these {} candidate points", points.len());
            Ok(Status::Violation)
        }
        Ok(SearchOutcome::BudgetExceeded) => {
            println!("budget of {} placements exceeded", a.budget);
            Ok(Status::Budget)
        }
        Err(PlanarityError::TooFewPoints { points, vertices }) => {
            bail!("{points} candidate points for {vertices} vertices")
        }
        Err(e) => Err(e.into()),
    }
}

fn level_search(path: &Path, grid: usize, budget: u64, out: Option<&Path>) -> Result<Status> {
    let (t, regions) = parse_level_tree(&read(path)?).with_context(|| format!("{}", path.display()))?;
    let found = match regions {
        None => match search_level_planar(&t, grid, budget) {
            Ok(LevelOutcome::Found(ld)) => Some(ld.to_drawing(&t)?),
            Ok(LevelOutcome::ExhaustedNone) => None,
            Err(LevelError::BudgetExceeded) => return budget_exceeded(budget),
            Err(e) => return Err(e.into()),
        },
        Some(rs) => {
            let cands = rs.candidate_grid(grid)?;
            match search_region_level_planar(&t, &rs, &cands, budget) {
                Ok(RegionOutcome::Found(d)) => Some(d),
                Ok(RegionOutcome::ExhaustedNoneOverGrid(ev)) => {
                    println!("candidates per region: {:?}, {} nodes", ev.candidates_per_region, ev.nodes);
                    None
                }
                Err(LevelError::BudgetExceeded) => return budget_exceeded(budget),
                Err(e) => return Err(e.into()),
            }
        }
    };
    match found {
        Some(d) => {
            println!("found a planar drawing");
            if let Some(out) = out {
                write(out, &write_drawing(&d))?;
            }
            Ok(Status::Clean)
        }
        None => {
            println!("no planar drawing on the candidate grid");
            Ok(Status::Violation)
        }
    }
}

fn budget_exceeded(budget: u64) -> Result<Status> {
    println!("budget of {budget} nodes exceeded");
    Ok(Status::Budget)
}

fn analyze_cmd(instance: &Path, plan: &Path, drawing: &Path, format: Format) -> Result<Status> {
    let i = load_instance(instance)?;
    let plan = parse_plan(&read(plan)?).with_context(|| format!("{}", plan.display()))?;
    let d = load_drawing(drawing)?;
    let idx = index_from_plan(&i, &plan)?;
    let report = analyze(&i, &d, &idx, Some(&plan))?;
    print!(
        "{}",
        match format {
            Format::Text => report.to_text(),
            Format::Records => report.to_records(),
        }
    );
    Ok(Status::Clean)
}

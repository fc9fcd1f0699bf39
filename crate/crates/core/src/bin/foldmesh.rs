use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use foldmesh::engine::{restore, World};
use foldmesh::events::Event;
use foldmesh::io::{
    config_path, load_config, read_trace, render_machines, run_to_dir, summarize, ConfigOverrides, RenderOptions,
    RunError, SummaryRecord,
};
use foldmesh::seedlab::{compile_shape, parse_seed, validate_seed, Shape};

#[derive(Parser)]
#[command(name = "foldmesh", version, about = "Self-replicating, self-folding strands in a 2D soup")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate and write config, trace, snapshots and summary to --out
    Run(RunArgs),
    /// Report whether a seed folds into a closed, meshable shape
    Validate { seed: String },
    /// Print a seed for a polygon: triangle, square, rectangle:LxS, hexagon, octagon
    Compile {
        shape: String,
        #[arg(long, default_value_t = 1)]
        expansion: u32,
    },
    /// Draw a checkpoint as SVG
    Render {
        checkpoint: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 20.0)]
        scale: f64,
        #[arg(long)]
        no_bonds: bool,
    },
    /// Tabulate checkpoints, or a run directory's snapshots
    Summarize {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Event trace for the shatter and unfold columns
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    seed: Option<String>,
    /// TYPE=COUNT, repeatable
    #[arg(long, value_name = "TYPE=COUNT")]
    free: Vec<String>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    rng_seed: Option<u64>,
    #[arg(long, value_name = "WxH", value_parser = parse_container)]
    container: Option<(f64, f64)>,
    #[arg(long)]
    snapshot_every: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Falls back to $JV2_CONFIG
    #[arg(long)]
    config: Option<PathBuf>,
    /// KEY=VALUE, repeatable
    #[arg(long, value_name = "KEY=VALUE")]
    param: Vec<String>,
}

fn parse_container(s: &str) -> Result<(f64, f64), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or("expected WIDTHxHEIGHT")?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
    Ok((num(w)?, num(h)?))
}

const VALIDATION: u8 = 1;
const INTEGRITY: u8 = 2;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("foldmesh: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(a) => run(a),
        Command::Validate { seed } => match parse_seed(&seed) {
            Err(e) => fail(VALIDATION, e),
            Ok(spec) => {
                let report = validate_seed(&spec);
                print!("{report}");
                if report.is_valid() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(VALIDATION)
                }
            }
        },
        Command::Compile { shape, expansion } => {
            match shape.parse::<Shape>().map_err(|e| e.to_string()).and_then(|s| compile_shape(s, expansion).map_err(|e| e.to_string())) {
                Ok(seed) => {
                    println!("{seed}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail(VALIDATION, e),
            }
        }
        Command::Render { checkpoint, output, scale, no_bonds } => {
            let world = match load_world(&checkpoint) {
                Ok(w) => w,
                Err(e) => return fail(VALIDATION, e),
            };
            let svg = render_machines(world.machines(), world.params(), world.step_number(), &RenderOptions { scale, draw_bonds: !no_bonds });
            match output {
                None => {
                    print!("{svg}");
                    ExitCode::SUCCESS
                }
                Some(p) => match fs::write(&p, svg) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => fail(VALIDATION, format!("{}: {e}", p.display())),
                },
            }
        }
        Command::Summarize { paths, trace, csv } => match summarize_paths(&paths, trace.as_deref()) {
            Ok(rows) => {
                print_rows(&rows, csv);
                ExitCode::SUCCESS
            }
            Err(e) => fail(VALIDATION, e),
        },
    }
}

fn run(a: RunArgs) -> ExitCode {
    let flags = ConfigOverrides {
        seed: a.seed,
        free: a.free,
        steps: a.steps,
        rng_seed: a.rng_seed,
        container: a.container,
        snapshot_every: a.snapshot_every,
        out: a.out,
        params: a.param,
    };
    let cfg = match load_config(config_path(a.config.as_deref()).as_deref(), &flags) {
        Ok(c) => c,
        Err(e) => return fail(VALIDATION, e),
    };
    let report = validate_seed(&cfg.seed);
    if !report.is_valid() {
        return fail(VALIDATION, format!("seed {} does not fold:\n{report}", cfg.seed));
    }
    for w in &report.warnings {
        eprintln!("foldmesh: warning: {w}");
    }
    match run_to_dir(&cfg) {
        Ok(r) => {
            println!("{} steps, {} events, output in {}", r.steps, r.events, r.out.display());
            if let Some(s) = r.first_split {
                println!("first split at step {s}");
            }
            println!("{}", r.summary);
            ExitCode::SUCCESS
        }
        Err(e @ (RunError::Step(_) | RunError::Topology(_))) => fail(INTEGRITY, e),
        Err(e) => fail(VALIDATION, e),
    }
}

fn load_world(path: &Path) -> Result<World, String> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    restore(&bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn summarize_paths(paths: &[PathBuf], trace: Option<&Path>) -> Result<Vec<SummaryRecord>, String> {
    let mut files = Vec::new();
    let mut trace = trace.map(Path::to_path_buf);
    for p in paths {
        if p.is_dir() {
            let snaps = p.join("snapshots");
            if let Ok(dir) = fs::read_dir(&snaps) {
                let mut found: Vec<PathBuf> =
                    dir.filter_map(|e| e.ok().map(|e| e.path())).filter(|f| f.extension().is_some_and(|x| x == "jv2s")).collect();
                found.sort();
                files.extend(found);
            }
            files.push(p.join("final.jv2s"));
            if trace.is_none() && p.join("trace.jsonl").is_file() {
                trace = Some(p.join("trace.jsonl"));
            }
        } else {
            files.push(p.clone());
        }
    }
    let events: Vec<Event> = match &trace {
        Some(t) => {
            let f = fs::File::open(t).map_err(|e| format!("{}: {e}", t.display()))?;
            read_trace(BufReader::new(f)).map_err(|e| format!("{}: {e}", t.display()))?
        }
        None => Vec::new(),
    };
    let mut rows = Vec::new();
    for f in files {
        let world = load_world(&f)?;
        let step = world.step_number();
        let upto = events.partition_point(|e| e.step <= step);
        let row = summarize(step, world.machines(), &events[..upto]).map_err(|e| format!("{}: {e}", f.display()))?;
        if rows.last().is_some_and(|r: &SummaryRecord| r.timestep == row.timestep) {
            continue;
        }
        rows.push(row);
    }
    Ok(rows)
}

fn print_rows(rows: &[SummaryRecord], csv: bool) {
    if csv {
        println!("{}", SummaryRecord::HEADER);
        for r in rows {
            println!("{}", r.csv_row());
        }
        return;
    }
    let head: Vec<&str> = SummaryRecord::HEADER.split(',').collect();
    let body: Vec<Vec<String>> = rows.iter().map(|r| r.csv_row().split(',').map(str::to_string).collect()).collect();
    let widths: Vec<usize> =
        (0..head.len()).map(|i| body.iter().map(|r| r[i].len()).chain([head[i].len()]).max().unwrap_or(0)).collect();
    let line = |cells: Vec<&str>| cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ");
    println!("{}", line(head.clone()));
    for r in &body {
        println!("{}", line(r.iter().map(String::as_str).collect()));
    }
}

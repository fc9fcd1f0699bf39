//! Runs a configured simulation into an output directory.
//!
//! ```text
//! out/
//!   config.toml          resolved configuration
//!   trace.jsonl          every event
//!   summary.csv          one row per snapshot plus the final state
//!   snapshots/step-NNNNNNNN.jv2s
//!   snapshots/step-NNNNNNNN.svg
//!   final.jv2s
//!   final.svg
//! ```

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::engine::{checkpoint, InitError, StepError, World};
use crate::events::{Event, EventKind};

use super::analysis::{summarize, SummaryRecord, TopologyError};
use super::config::RunConfig;
use super::render::render_svg;
use super::trace::TraceWriter;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Init(#[from] InitError),
    #[error(transparent)]
    Step(#[from] StepError),
    #[error("cannot derive strands: {0}")]
    Topology(#[from] TopologyError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub steps: u64,
    pub events: u64,
    pub stopped_early: bool,
    pub first_split: Option<u64>,
    pub summary: SummaryRecord,
    pub out: PathBuf,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io { path: path.to_path_buf(), source }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    fs::write(path, bytes).map_err(io_err(path))
}

/// Shatter and unfold counts over a run.
#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    shatters: usize,
    unfolds: usize,
}

impl Tally {
    fn add(&mut self, events: &[Event]) {
        for e in events {
            match e.kind {
                EventKind::Shatter => self.shatters += 1,
                EventKind::UnfoldStart => self.unfolds += 1,
                _ => {}
            }
        }
    }

    fn summary(&self, world: &World) -> Result<SummaryRecord, TopologyError> {
        let mut s = summarize(world.step_number(), world.machines(), &[])?;
        s.shatters = self.shatters;
        s.unfolds = self.unfolds;
        Ok(s)
    }
}

/// Builds the world from `cfg` and runs it to completion.
pub fn run_to_dir(cfg: &RunConfig) -> Result<RunReport, RunError> {
    run_to_dir_until(cfg, |_, _| false)
}

/// As [`run_to_dir`], stopping after the first step for which `stop` is true.
pub fn run_to_dir_until(cfg: &RunConfig, stop: impl FnMut(&World, &[Event]) -> bool) -> Result<RunReport, RunError> {
    let mut world = World::init(cfg.sim, &cfg.seed, &cfg.free, cfg.rng_seed)?;
    world.set_index_mode(cfg.index);
    drive(&mut world, cfg, stop)
}

/// Continues `world` for `cfg.steps` more steps, writing into `cfg.out`.
/// The trace is appended to when it exists.
pub fn drive(world: &mut World, cfg: &RunConfig, mut stop: impl FnMut(&World, &[Event]) -> bool) -> Result<RunReport, RunError> {
    let out = cfg.out.as_path();
    let snaps = out.join("snapshots");
    fs::create_dir_all(&snaps).map_err(io_err(&snaps))?;
    write_file(&out.join("config.toml"), cfg.to_toml().as_bytes())?;

    let trace_path = out.join("trace.jsonl");
    let file = File::options().create(true).append(true).open(&trace_path).map_err(io_err(&trace_path))?;
    let mut trace = TraceWriter::new(BufWriter::new(file));
    let summary_path = out.join("summary.csv");
    let mut rows = vec![SummaryRecord::HEADER.to_string()];

    let mut tally = Tally::default();
    let mut first_split = None;
    let mut failure: Option<RunError> = None;
    let every = cfg.snapshot_every;

    let mut observe = |w: &World, events: &[Event]| -> ControlFlow<()> {
        let result = (|| {
            trace.write_all(events).map_err(io_err(&trace_path))?;
            tally.add(events);
            if first_split.is_none() {
                first_split = events.iter().find(|e| e.kind == EventKind::Split).map(|e| e.step);
            }
            if every > 0 && w.step_number().is_multiple_of(every) {
                let stem = snaps.join(format!("step-{:08}", w.step_number()));
                write_file(&stem.with_extension("jv2s"), &checkpoint(w))?;
                write_file(&stem.with_extension("svg"), render_svg(w).as_bytes())?;
                rows.push(tally.summary(w)?.csv_row());
            }
            Ok::<_, RunError>(())
        })();
        match result {
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
            Ok(()) if stop(w, events) => ControlFlow::Break(()),
            Ok(()) => ControlFlow::Continue(()),
        }
    };
    let stats = world.run(cfg.steps, &mut observe);
    // the trace of a failed run is still worth keeping
    trace.flush().map_err(io_err(&trace_path))?;
    let stats = stats?;
    if let Some(e) = failure {
        return Err(e);
    }

    let summary = tally.summary(world)?;
    if rows.last().map(|r| !r.starts_with(&format!("{},", world.step_number()))).unwrap_or(true) {
        rows.push(summary.csv_row());
    }
    rows.push(String::new());
    write_file(&summary_path, rows.join("\n").as_bytes())?;
    write_file(&out.join("final.jv2s"), &checkpoint(world))?;
    write_file(&out.join("final.svg"), render_svg(world).as_bytes())?;
    let mut w = trace.into_inner();
    w.flush().map_err(io_err(&trace_path))?;

    Ok(RunReport {
        steps: stats.steps,
        events: stats.events,
        stopped_early: stats.stopped_early,
        first_split,
        summary,
        out: out.to_path_buf(),
    })
}

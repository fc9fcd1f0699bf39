//! Line-delimited JSON event traces.
//!
//! One object per line, fields in this order:
//!
//! ```text
//! {"step":2385,"kind":"Split","subjects":[0,1,2,14,9,31],"detail":{"child":"2-2-2",...}}
//! ```
//!
//! `detail` is omitted when empty and its keys are sorted.

use std::io::{self, BufRead, Write};

use crate::events::Event;

pub struct TraceWriter<W: Write> {
    out: W,
    written: u64,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        TraceWriter { out, written: 0 }
    }

    pub fn write(&mut self, event: &Event) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, event)?;
        self.out.write_all(b"\n")?;
        self.written += 1;
        Ok(())
    }

    pub fn write_all(&mut self, events: &[Event]) -> io::Result<()> {
        events.iter().try_for_each(|e| self.write(e))
    }

    pub fn written(&self) -> u64 {
        self.written
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

pub fn write_trace(out: impl Write, events: &[Event]) -> io::Result<()> {
    let mut w = TraceWriter::new(out);
    w.write_all(events)?;
    w.flush()
}

/// Reads a trace back. Blank lines are skipped.
pub fn read_trace(input: impl BufRead) -> io::Result<Vec<Event>> {
    let mut events = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let e = serde_json::from_str(&line)
            .map_err(|err| io::Error::new(io::ErrorKind::InvalidData, format!("trace line {}: {err}", n + 1)))?;
        events.push(e);
    }
    Ok(events)
}

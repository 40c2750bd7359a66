use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use landscape_core::io::Table;
use serde::Serialize;

use crate::args::Format;
use crate::error::CliResult;

/// Sole writer of a run's output directory; records every file it creates.
pub struct Output {
    dir: PathBuf,
    format: Format,
    written: Vec<String>,
    seeds: Vec<u64>,
    started: Instant,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub seeds: Vec<u64>,
    pub version: String,
    pub outputs: Vec<String>,
    pub wall_time_seconds: f64,
}

impl Output {
    pub fn new(dir: &Path, format: Format) -> CliResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            format,
            written: Vec::new(),
            seeds: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn seed(&mut self, seed: u64) {
        if !self.seeds.contains(&seed) {
            self.seeds.push(seed);
        }
    }

    fn create(&mut self, name: String) -> CliResult<BufWriter<File>> {
        let f = File::create(self.dir.join(&name))?;
        self.written.push(name);
        Ok(BufWriter::new(f))
    }

    /// `<stem>.csv`, plus `<stem>_<column>.dat` per value column in `dat` format.
    pub fn table(&mut self, stem: &str, table: &Table) -> CliResult<()> {
        let mut w = self.create(format!("{stem}.csv"))?;
        table.write_csv(&mut w)?;
        w.flush()?;
        if self.format == Format::Dat {
            for col in 1..table.columns.len() {
                let name = if table.columns.len() == 2 {
                    format!("{stem}.dat")
                } else {
                    format!("{stem}_{}.dat", table.columns[col])
                };
                let mut w = self.create(name)?;
                table.write_dat(&mut w, col)?;
                w.flush()?;
            }
        }
        Ok(())
    }

    pub fn file(&mut self, name: &str, write: impl FnOnce(&mut dyn Write) -> CliResult<()>) -> CliResult<()> {
        let mut w = self.create(name.to_string())?;
        write(&mut w)?;
        w.flush()?;
        Ok(())
    }

    /// Writes `<command>_manifest.json` listing everything written so far.
    pub fn finish(mut self, command: &str, command_line: Vec<String>) -> CliResult<()> {
        let manifest = RunManifest {
            command_line,
            seeds: self.seeds.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: self.written.clone(),
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
        };
        let mut w = self.create(format!("{command}_manifest.json"))?;
        serde_json::to_writer_pretty(&mut w, &manifest)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }
}

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Timing {
    On,
    Off,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Directory for CSV/JSON artifacts; without it only the report is printed
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Both)]
    pub format: Format,

    /// Record wall-clock time in reports; `off` writes runtime_ms = 0 so reruns are byte-identical
    #[arg(long, value_enum, default_value_t = Timing::Off)]
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub config: Value,
    pub checks: Vec<Check>,
    pub results: Value,
    pub runtime_ms: u64,
    pub artifacts: Vec<String>,
    pub passed: bool,
}

/// Collects checks, results and artifacts for one subcommand.
pub struct Run<'a> {
    command: &'static str,
    out: &'a OutputArgs,
    config: Value,
    checks: Vec<Check>,
    results: Map<String, Value>,
    artifacts: Vec<String>,
    start: Instant,
}

impl<'a> Run<'a> {
    pub fn new(command: &'static str, out: &'a OutputArgs, config: &impl Serialize) -> Self {
        Self {
            command,
            out,
            config: serde_json::to_value(config).expect("config serialises"),
            checks: Vec::new(),
            results: Map::new(),
            artifacts: Vec::new(),
            start: Instant::now(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(
            key.to_owned(),
            serde_json::to_value(value).expect("result serialises"),
        );
    }

    pub fn runtime_ms(&self) -> u64 {
        match self.out.timing {
            Timing::On => self.start.elapsed().as_millis() as u64,
            Timing::Off => 0,
        }
    }

    fn open(&mut self, name: &str) -> Result<Option<BufWriter<File>>, CliError> {
        let Some(dir) = &self.out.output else {
            return Ok(None);
        };
        fs::create_dir_all(dir)?;
        let path = dir.join(name);
        self.artifacts.push(path.display().to_string());
        Ok(Some(BufWriter::new(File::create(path)?)))
    }

    /// Writes a CSV artifact when an output directory is set and CSV is enabled.
    pub fn csv(
        &mut self,
        name: &str,
        write: impl FnOnce(&mut dyn Write) -> heatlab_core::Result<()>,
    ) -> Result<(), CliError> {
        if self.out.format == Format::Json {
            return Ok(());
        }
        if let Some(mut w) = self.open(name)? {
            write(&mut w)?;
            w.flush()?;
        }
        Ok(())
    }

    /// Writes a JSON artifact when an output directory is set and JSON is enabled.
    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        if self.out.format == Format::Csv {
            return Ok(());
        }
        if let Some(mut w) = self.open(name)? {
            heatlab_core::io::write_json(&mut w, value)?;
            w.flush()?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<RunReport, CliError> {
        let name = format!("{}_report.json", self.command);
        let will_write = self.out.output.is_some() && self.out.format != Format::Csv;
        if will_write {
            let dir = self.out.output.as_ref().expect("checked");
            self.artifacts.push(dir.join(&name).display().to_string());
        }
        let runtime_ms = self.runtime_ms();
        let report = RunReport {
            command: self.command,
            passed: self.checks.iter().all(|c| c.passed),
            config: self.config,
            checks: self.checks,
            results: Value::Object(self.results),
            runtime_ms,
            artifacts: self.artifacts,
        };
        if will_write {
            let dir = self.out.output.as_ref().expect("checked");
            fs::create_dir_all(dir)?;
            let mut w = BufWriter::new(File::create(dir.join(&name))?);
            heatlab_core::io::write_json(&mut w, &report)?;
            w.flush()?;
        }
        Ok(report)
    }
}

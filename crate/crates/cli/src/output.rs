use std::cell::Cell;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use anyhow::Context;
use serde::Serialize;

use crate::outcome::OrUsage;
use crate::{CmdResult, Command};

/// Output directory that is only created once a command has validated its inputs.
pub struct OutputDir {
    root: PathBuf,
    created: Cell<bool>,
}

impl OutputDir {
    pub fn new(root: PathBuf) -> Self {
        Self { root, created: Cell::new(false) }
    }

    pub fn is_created(&self) -> bool {
        self.created.get()
    }

    /// Creates the directory and echoes the command configuration into it.
    pub fn create(&self, command: &impl Serialize) -> Result<&Path, crate::outcome::Failure> {
        std::fs::create_dir_all(&self.root)
            .or_usage(&format!("cannot create output directory {}", self.root.display()))?;
        self.created.set(true);
        self.write_json("config.json", command)?;
        Ok(&self.root)
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write_json(&self, name: &str, value: &impl Serialize) -> Result<(), crate::outcome::Failure> {
        let text = serde_json::to_string_pretty(value).or_usage("serializing JSON")?;
        std::fs::write(self.path(name), text + "\n").or_usage(&format!("writing {name}"))
    }

    pub fn write_manifest(&self, command: &Command, wall: Duration, result: &CmdResult) -> anyhow::Result<()> {
        #[derive(Serialize)]
        struct Manifest<'a> {
            command: &'a str,
            command_line: Vec<String>,
            config: serde_json::Value,
            seed: Option<u64>,
            versions: Versions,
            started_unix_seconds: u64,
            wall_time_seconds: f64,
            exit_code: u8,
            error: Option<String>,
        }
        #[derive(Serialize)]
        struct Versions {
            fecam: &'static str,
            manifest: u32,
        }
        let now = SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default();
        let manifest = Manifest {
            command: command.name(),
            command_line: std::env::args().collect(),
            config: command.config_json(),
            seed: command.seed(),
            versions: Versions { fecam: env!("CARGO_PKG_VERSION"), manifest: 1 },
            started_unix_seconds: now.saturating_sub(wall).as_secs(),
            wall_time_seconds: wall.as_secs_f64(),
            exit_code: result.as_ref().map_or_else(|f| f.code(), |_| 0),
            error: result.as_ref().err().map(|f| f.message()),
        };
        let text = serde_json::to_string_pretty(&manifest)?;
        std::fs::write(self.path("manifest.json"), text + "\n").context("writing manifest.json")
    }
}

//! Artifact writing: every output embeds the tool version, the resolved
//! configuration, the seed, and the error budgets in force.

use anyhow::{Context, Result};
use std::fs;
use std::path::{Path, PathBuf};

pub struct Meta {
    pub command: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub budgets: serde_json::Value,
}

impl Meta {
    pub fn new(command: &str, seed: u64, config: serde_json::Value) -> Self {
        Self {
            command: command.into(),
            seed,
            config,
            budgets: serde_json::Value::Null,
        }
    }

    pub fn with_budgets(mut self, budgets: serde_json::Value) -> Self {
        self.budgets = budgets;
        self
    }

    pub fn preamble(&self) -> String {
        format!(
            "# tool=scf version={}\n# command={}\n# seed={}\n# config={}\n# budgets={}\n",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.seed,
            self.config,
            self.budgets
        )
    }

    pub fn json_header(&self) -> serde_json::Value {
        serde_json::json!({
            "tool": "scf",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "seed": self.seed,
            "config": self.config,
            "budgets": self.budgets,
        })
    }
}

pub fn write_csv(
    dir: &Path,
    name: &str,
    meta: &Meta,
    header: &str,
    rows: &[String],
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut body = meta.preamble();
    body.push_str(header);
    body.push('\n');
    for r in rows {
        body.push_str(r);
        body.push('\n');
    }
    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

pub fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(value)?)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

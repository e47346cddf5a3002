//! CSV and manifest writing.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliResult;

/// 17 significant digits; `inf`/`NaN` pass through.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Optional values are written as empty fields.
pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Collects the files of one run and writes its manifest.
pub struct RunDir {
    root: PathBuf,
    files: Vec<PathBuf>,
    started: Instant,
}

impl RunDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Writes `rows` under `header` to `name` (relative to the run root).
    pub fn csv<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> CliResult<PathBuf>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        let path = self.root.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        self.files.push(PathBuf::from(name));
        Ok(path)
    }

    /// Writes `manifest.json` and returns the list of data files.
    pub fn finish<C: Serialize>(self, command: &str, preset: Option<&str>, config: &C, summary: Value) -> CliResult<Vec<PathBuf>> {
        let manifest = serde_json::json!({
            "tool": "ladder-qca",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "preset": preset,
            "config": config,
            "summary": summary,
            "workers": rayon::current_num_threads(),
            "wall_time_s": self.started.elapsed().as_secs_f64(),
            "files": self.files,
        });
        fs::write(self.root.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
        Ok(self.files)
    }
}

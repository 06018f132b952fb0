//! Run settings from flags, a flat `key=value` config file and a tolerance directory.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::params::parse_real;
use crate::report::CheckReport;
use crate::runner::RunOptions;

/// Environment variable naming a directory whose `tolerances.conf` supplies default
/// tolerance overrides (`check.id=value` per line).
pub const TOL_DIR_ENV: &str = "PREHOM_TOL_DIR";
pub const TOL_FILE: &str = "tolerances.conf";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    JsonLines,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "jsonl" | "json-lines" => Ok(Format::JsonLines),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::config("format", format!("unknown format `{s}` (jsonl, csv)"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub opts: RunOptions,
}

/// `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::config(format!("line {}", i + 1), "expected key=value"))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl Settings {
    /// Known keys: `format`, `out`, `seed`, `mc_samples`, `tol.<check id>`.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "format" => self.format = Format::parse(value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "seed" => {
                self.opts.seed = Some(
                    value
                        .parse()
                        .map_err(|_| Error::config("seed", format!("bad seed `{value}`")))?,
                )
            }
            "mc_samples" => {
                let n: usize = value
                    .parse()
                    .map_err(|_| Error::config("mc_samples", format!("bad count `{value}`")))?;
                if n < 2 {
                    return Err(Error::config("mc_samples", "need at least 2 samples"));
                }
                self.opts.mc_samples = Some(n);
            }
            _ => match key.strip_prefix("tol.") {
                Some(id) => {
                    let t = parse_real(value).map_err(|_| Error::config(key, format!("bad tolerance `{value}`")))?;
                    self.opts.set_tolerance(id, t)?;
                }
                None => return Err(Error::config(key, "unknown config key")),
            },
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
        for (k, v) in parse_kv(&text)? {
            self.apply(&k, &v)?;
        }
        Ok(())
    }

    /// Reads `<dir>/tolerances.conf` if present; its keys are bare check ids.
    pub fn apply_tolerance_dir(&mut self, dir: &Path) -> Result<()> {
        let path = dir.join(TOL_FILE);
        if !path.exists() {
            return Ok(());
        }
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::config(TOL_DIR_ENV, format!("{}: {e}", path.display())))?;
        for (k, v) in parse_kv(&text)? {
            self.apply(&format!("tol.{k}"), &v)?;
        }
        Ok(())
    }
}

pub fn render(rows: &[CheckReport], format: Format) -> String {
    let mut s = String::new();
    if format == Format::Csv {
        s.push_str(CheckReport::CSV_HEADER);
        s.push('\n');
    }
    for r in rows {
        s.push_str(&match format {
            Format::JsonLines => r.to_json(),
            Format::Csv => r.to_csv(),
        });
        s.push('\n');
    }
    s
}

/// Human-readable tally for stderr.
pub fn summary(rows: &[CheckReport]) -> String {
    let failed: Vec<&CheckReport> = rows.iter().filter(|r| !r.passed).collect();
    let mut s = format!(
        "{} checks, {} passed, {} failed\n",
        rows.len(),
        rows.len() - failed.len(),
        failed.len()
    );
    for r in failed {
        let shown = match r.measured {
            Some(m) => format!("measured {m:.6e}"),
            None => format!("rel {:.3e}", r.rel_residual),
        };
        s.push_str(&format!(
            "  FAIL {} {} ({shown}, tol {:.1e})\n",
            r.id,
            serde_json::to_string(&r.params).unwrap_or_default(),
            r.tolerance
        ));
    }
    s
}

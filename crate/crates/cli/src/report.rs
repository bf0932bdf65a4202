//! Output writers: CSV curves and JSON reports, both embedding the resolved
//! configuration and the library version.

use std::fs;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::ScenarioConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One CSV cell. Floats are printed with 17 significant digits so that the
/// text round-trips the underlying f64 exactly.
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

/// Comma-separated values, `.` decimal, LF line endings, header first; the
/// config echo and version ride along as trailing `#` comment lines.
pub fn render_csv(
    header: &[String],
    rows: &[Vec<Cell>],
    extra_comments: &[String],
    config: &ScenarioConfig,
) -> Result<String> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let line: Vec<String> = row.iter().map(Cell::render).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    for comment in extra_comments {
        out.push_str("# ");
        out.push_str(comment);
        out.push('\n');
    }
    out.push_str("# config = ");
    out.push_str(&serde_json::to_string(config)?);
    out.push('\n');
    out.push_str(&format!("# version = {VERSION}\n"));
    Ok(out)
}

/// Top-level JSON report: `{config, results, version, timestamp}`.
pub fn render_json<T: Serialize>(results: &T, config: &ScenarioConfig) -> Result<String> {
    let report = serde_json::json!({
        "config": config,
        "results": results,
        "version": VERSION,
        "timestamp": iso8601_utc_now(),
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&report)?))
}

/// Recover the config echo from a CSV artifact.
pub fn parse_csv_config(text: &str) -> Option<ScenarioConfig> {
    let line = text.lines().find(|l| l.starts_with("# config = "))?;
    serde_json::from_str(line.trim_start_matches("# config = ")).ok()
}

pub fn write_artifact(path: Option<&str>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {p}")),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// ISO-8601 UTC timestamp without external clock dependencies.
fn iso8601_utc_now() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let days = (secs / 86_400) as i64;
    let rem = secs % 86_400;
    let (y, m, d) = civil_from_days(days);
    format!(
        "{y:04}-{m:02}-{d:02}T{:02}:{:02}:{:02}Z",
        rem / 3600,
        (rem % 3600) / 60,
        rem % 60
    )
}

/// Days since 1970-01-01 to (year, month, day), proleptic Gregorian.
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    (if m <= 2 { y + 1 } else { y }, m, d)
}

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use ipro_core::engine::{FrontEntry, LogRecord};
use ipro_core::geometry::ValueVec;

use crate::CliError;

pub const LOG_FILE: &str = "iterations.jsonl";
pub const FRONT_FILE: &str = "front.csv";
pub const SUMMARY_FILE: &str = "summary.json";

const SOLUTION_COLUMN: &str = "solution_id";

/// Reads a point set: a JSON array of vectors for `.json`, otherwise CSV with
/// a header row. A `solution_id` column is ignored.
pub fn read_points(path: &Path) -> Result<Vec<ValueVec>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let parse_err = |m: String| CliError::Parse(format!("{}: {m}", path.display()));
    let raw: Vec<Vec<f64>> = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| parse_err(e.to_string()))?
    } else {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| parse_err(e.to_string()))?.clone();
        let keep: Vec<usize> = (0..headers.len())
            .filter(|&i| &headers[i] != SOLUTION_COLUMN)
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| parse_err(e.to_string()))?;
            let row = keep
                .iter()
                .map(|&i| {
                    record[i]
                        .parse::<f64>()
                        .map_err(|_| parse_err(format!("bad number `{}`", &record[i])))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        rows
    };
    if raw.is_empty() {
        return Err(parse_err("no points".into()));
    }
    raw.into_iter()
        .map(|r| ValueVec::new(r).map_err(|e| parse_err(e.to_string())))
        .collect()
}

/// Parses a comma-separated vector such as `0,-50`.
pub fn parse_vector(text: &str) -> Result<ValueVec, CliError> {
    let parts = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Parse(format!("bad vector component `{p}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ValueVec::new(parts).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn write_front(path: &Path, front: &[FrontEntry]) -> Result<(), CliError> {
    let d = front.first().map_or(0, |e| e.value.dim());
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Parse(e.to_string()))?;
    let mut header: Vec<String> = (1..=d).map(|j| format!("o{j}")).collect();
    header.push(SOLUTION_COLUMN.into());
    w.write_record(&header).map_err(|e| CliError::Parse(e.to_string()))?;
    for e in front {
        let mut row: Vec<String> = e.value.iter().map(|x| x.to_string()).collect();
        row.push(e.solution.map(|s| s.0.to_string()).unwrap_or_default());
        w.write_record(&row).map_err(|e| CliError::Parse(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_log(path: &Path, records: &[LogRecord]) -> Result<(), CliError> {
    let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| CliError::Parse(e.to_string()))?;
        writeln!(out, "{line}").map_err(|e| CliError::io(path, e))?;
    }
    out.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_log(path: &Path) -> Result<Vec<LogRecord>, CliError> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let r = serde_json::from_str(&line)
            .map_err(|e| CliError::Parse(format!("{}:{}: {e}", path.display(), n + 1)))?;
        out.push(r);
    }
    Ok(out)
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Parse(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};

use super::config::OutputFormat;
use super::run::SweepResult;
use crate::error::{Error, Result};

/// Twelve significant digits.
fn format_value(v: f64) -> String {
    format!("{v:.11e}")
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn render_csv(result: &SweepResult) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let to_io = |e: csv::Error| io_error(Path::new("<csv>"), std::io::Error::other(e));
    let header = std::iter::once(result.variable.as_str()).chain(result.columns.iter().map(String::as_str));
    w.write_record(header).map_err(to_io)?;
    for row in &result.rows {
        let fields = std::iter::once(row.value).chain(row.values.iter().copied()).map(format_value);
        w.write_record(fields).map_err(to_io)?;
    }
    let bytes = w.into_inner().map_err(|e| io_error(Path::new("<csv>"), e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

fn number(v: f64) -> Value {
    Number::from_f64(v).map_or(Value::Null, Value::Number)
}

/// `{metadata, rows}` with one object per row keyed by column name;
/// non-finite values become `null`.
pub fn render_json(result: &SweepResult) -> Result<String> {
    let rows: Vec<Value> = result
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            obj.insert(result.variable.clone(), number(row.value));
            for (name, &v) in result.columns.iter().zip(&row.values) {
                obj.insert(name.clone(), number(v));
            }
            Value::Object(obj)
        })
        .collect();
    let doc = serde_json::json!({
        "metadata": result.metadata,
        "rows": rows,
    });
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| io_error(Path::new("<json>"), e.into()))?;
    text.push('\n');
    Ok(text)
}

pub fn render(result: &SweepResult, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => render_csv(result),
        OutputFormat::Json => render_json(result),
    }
}

/// Writes the rendered result to `path`, or to stdout when `path` is `None`.
pub fn emit(result: &SweepResult, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    let text = render(result, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_error(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| io_error(Path::new("<stdout>"), e))
        }
    }
}

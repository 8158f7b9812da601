use crate::CliError;
use serde::{Deserialize, Serialize};
use sparsegeom::geometry::PointSet;
use std::fs;
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
struct JsonPoints {
    dim: usize,
    points: Vec<Vec<f64>>,
}

fn is_json(path: &Path, text: &str) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) || text.trim_start().starts_with('{')
}

/// Reads rows of reals from CSV (one point per line, no header) or from
/// `{"dim": d, "points": [[...], ...]}`. Rows are numbered from 1.
pub fn load_rows(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = fs::read_to_string(path)?;
    let name = path.display().to_string();
    if is_json(path, &text) {
        let parsed: JsonPoints = serde_json::from_str(&text).map_err(|e| CliError::Parse {
            path: name.clone(),
            row: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        check_dims(&name, &parsed.points, Some(parsed.dim))?;
        return Ok(parsed.points);
    }
    parse_csv(&name, &text)
}

fn parse_csv(name: &str, text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse {
            path: name.to_string(),
            row: e.position().map_or(0, |p| p.line() as usize),
            column: 0,
            message: e.to_string(),
        })?;
        let row = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let values = record
            .iter()
            .enumerate()
            .map(|(c, field)| {
                field.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| CliError::Parse {
                    path: name.to_string(),
                    row,
                    column: c + 1,
                    message: format!("not a finite number: {field:?}"),
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if let Some(first) = rows.first().map(Vec::len) {
            if values.len() != first {
                return Err(CliError::Parse {
                    path: name.to_string(),
                    row,
                    column: values.len().min(first) + 1,
                    message: format!("ragged row: {} fields, expected {first}", values.len()),
                });
            }
        }
        rows.push(values);
    }
    check_dims(name, &rows, None)?;
    Ok(rows)
}

fn check_dims(name: &str, rows: &[Vec<f64>], declared: Option<usize>) -> Result<(), CliError> {
    let expected = declared.or(rows.first().map(Vec::len)).unwrap_or(0);
    for (i, r) in rows.iter().enumerate() {
        if r.len() != expected {
            return Err(CliError::DimensionMismatch {
                path: name.to_string(),
                row: i + 1,
                expected,
                got: r.len(),
            });
        }
    }
    Ok(())
}

/// Loads a point set; see [`load_rows`] for the accepted formats.
pub fn load_pointset(path: &Path) -> Result<PointSet, CliError> {
    let rows = load_rows(path)?;
    if rows.is_empty() {
        return Err(sparsegeom::Error::EmptySet.into());
    }
    Ok(PointSet::new(rows)?)
}

/// Writes the JSON form read by [`load_pointset`].
pub fn save_pointset_json(points: &PointSet, path: &Path) -> Result<(), CliError> {
    let doc = JsonPoints {
        dim: points.dim(),
        points: points.iter().map(|p| p.coords.clone()).collect(),
    };
    fs::write(path, serde_json::to_string(&doc)?)?;
    Ok(())
}

/// Reads integers, one per line or comma separated.
pub fn load_integers(path: &Path) -> Result<Vec<i64>, CliError> {
    let text = fs::read_to_string(path)?;
    parse_integers(&path.display().to_string(), &text)
}

pub fn parse_integers(name: &str, text: &str) -> Result<Vec<i64>, CliError> {
    let mut out = Vec::new();
    for (r, line) in text.lines().enumerate() {
        for (c, field) in line.split(',').map(str::trim).filter(|f| !f.is_empty()).enumerate() {
            out.push(field.parse().map_err(|_| CliError::Parse {
                path: name.to_string(),
                row: r + 1,
                column: c + 1,
                message: format!("not an integer: {field:?}"),
            })?);
        }
    }
    Ok(out)
}

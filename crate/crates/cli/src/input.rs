use std::fs;
use std::path::Path;

use gamecond::{MatrixGame, StrategyProfile};
use serde::Deserialize;

use crate::args::Format;
use crate::error::CliError;

#[derive(Deserialize)]
struct MatrixFile {
    matrix: Vec<Vec<f64>>,
}

pub fn sniff_format(path: &Path, explicit: Option<Format>) -> Result<Format, CliError> {
    if let Some(f) = explicit {
        return Ok(f);
    }
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("csv") => Ok(Format::Csv),
        Some("json") => Ok(Format::Json),
        _ => Err(CliError::Input(format!(
            "cannot tell the format of {}; pass --format",
            path.display()
        ))),
    }
}

pub fn load_game(path: &Path, format: Format) -> Result<MatrixGame, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let rows = match format {
        Format::Csv => parse_csv(&text)?,
        Format::Json => {
            serde_json::from_str::<MatrixFile>(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
                .matrix
        }
    };
    Ok(MatrixGame::new(&rows)?)
}

fn parse_csv(text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(e.to_string()))?;
        let row = record
            .iter()
            .enumerate()
            .map(|(c, field)| {
                field.parse::<f64>().map_err(|_| {
                    CliError::Input(format!("row {}, column {}: not a number: {field:?}", r + 1, c + 1))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Parses `"x1,x2;y1,y2"`.
pub fn parse_point(s: &str, tol: f64) -> Result<StrategyProfile, CliError> {
    let (x, y) = s
        .split_once(';')
        .ok_or_else(|| CliError::Input(format!("point must look like \"x1,x2;y1,y2\", got {s:?}")))?;
    let numbers = |part: &str| {
        part.split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Input(format!("not a number in point: {v:?}")))
            })
            .collect::<Result<Vec<_>, _>>()
    };
    Ok(StrategyProfile::with_tolerance(numbers(x)?, numbers(y)?, tol)?)
}

pub fn parse_ladder(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("not a number in ladder: {v:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_spaces_and_exponents() {
        let rows = parse_csv("1, -1\n-1e0 ,1.0\n").unwrap();
        assert_eq!(rows, vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
        assert!(parse_csv("1,a\n").is_err());
    }

    #[test]
    fn points() {
        let p = parse_point("1,0; 0.5,0.5", 1e-9).unwrap();
        assert_eq!(p.y, vec![0.5, 0.5]);
        assert!(parse_point("1,0", 1e-9).is_err());
        assert!(parse_point("1,1;1,0", 1e-9).is_err());
    }

    #[test]
    fn formats() {
        assert_eq!(sniff_format(Path::new("a.CSV"), None).unwrap(), Format::Csv);
        assert_eq!(sniff_format(Path::new("a.txt"), Some(Format::Json)).unwrap(), Format::Json);
        assert!(sniff_format(Path::new("a.txt"), None).is_err());
    }
}

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PdbError;
use crate::geometry::{Chain, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainFormat {
    /// One vertex per row: `x,y[,z][,weight]`, with an optional header row
    /// naming the columns.
    Csv,
    /// `[[x, y], ...]` or `{"points": [[x, y], ...], "weights": [...]}`.
    Json,
}

impl ChainFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" | "txt" => Some(ChainFormat::Csv),
            "json" => Some(ChainFormat::Json),
            _ => None,
        }
    }
}

impl std::str::FromStr for ChainFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(ChainFormat::Csv),
            "json" => Ok(ChainFormat::Json),
            other => Err(format!("unknown chain format `{other}`")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonChain {
    Bare(Vec<Vec<f64>>),
    Full {
        points: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
    },
}

fn build(rows: Vec<Vec<f64>>, weights: Option<Vec<f64>>) -> Result<Chain, PdbError> {
    if rows.is_empty() {
        return Err(PdbError::Format("no points".into()));
    }
    if let Some(w) = &weights {
        if let Some((i, v)) = w.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(PdbError::Format(format!("weight {v} at vertex {i} is not positive")));
        }
    }
    let points = rows.iter().map(|r| Point::from_slice(r)).collect::<Result<Vec<_>, _>>()?;
    let chain = Chain::new(points)?;
    Ok(match weights {
        Some(w) => chain.weighted(w)?,
        None => chain,
    })
}

/// Column layout of a csv file: which positions hold coordinates and which
/// (if any) the weight.
fn csv_layout(header: Option<&csv::StringRecord>, width: usize) -> Result<(usize, Option<usize>), PdbError> {
    match header {
        Some(h) => {
            let names: Vec<String> = h.iter().map(|s| s.trim().to_ascii_lowercase()).collect();
            let dims = match names.iter().take_while(|n| ["x", "y", "z"].contains(&n.as_str())).count() {
                d @ (2 | 3) => d,
                _ => return Err(PdbError::Format(format!("unexpected csv header {names:?}"))),
            };
            match &names[dims..] {
                [] => Ok((dims, None)),
                [w] if w == "weight" => Ok((dims, Some(dims))),
                _ => Err(PdbError::Format(format!("unexpected csv header {names:?}"))),
            }
        }
        None => match width {
            2 | 3 => Ok((width, None)),
            4 => Ok((3, Some(3))),
            _ => Err(PdbError::Format(format!("rows of {width} fields; expected 2 to 4"))),
        },
    }
}

/// Parses chain text in the given format.
pub fn parse_chain(text: &str, format: ChainFormat) -> Result<Chain, PdbError> {
    match format {
        ChainFormat::Json => {
            let parsed: JsonChain = serde_json::from_str(text).map_err(|e| PdbError::Format(e.to_string()))?;
            match parsed {
                JsonChain::Bare(points) => build(points, None),
                JsonChain::Full { points, weights } => build(points, weights),
            }
        }
        ChainFormat::Csv => {
            let mut reader =
                csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
            let mut records = Vec::new();
            for (k, rec) in reader.records().enumerate() {
                let rec = rec.map_err(|e| PdbError::Malformed { line: k + 1, message: e.to_string() })?;
                records.push(rec);
            }
            let Some(first) = records.first() else {
                return Err(PdbError::Format("no points".into()));
            };
            let has_header = first.iter().next().is_some_and(|f| f.parse::<f64>().is_err());
            let (dims, weight_col) = csv_layout(has_header.then_some(first), first.len())?;
            let body = if has_header { &records[1..] } else { &records[..] };
            let mut rows = Vec::with_capacity(body.len());
            let mut weights = weight_col.map(|_| Vec::with_capacity(body.len()));
            for (k, rec) in body.iter().enumerate() {
                let line = k + 1 + usize::from(has_header);
                let values = rec
                    .iter()
                    .map(|f| f.parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| PdbError::Malformed { line, message: e.to_string() })?;
                if let Some(v) = values.iter().find(|v| !v.is_finite()) {
                    return Err(PdbError::Malformed { line, message: format!("non-finite value {v}") });
                }
                rows.push(values[..dims].to_vec());
                if let (Some(w), Some(col)) = (weights.as_mut(), weight_col) {
                    w.push(values[col]);
                }
            }
            build(rows, weights)
        }
    }
}

/// Reads a chain file; the format defaults to the file extension.
pub fn load_chain(path: &Path, format: Option<ChainFormat>) -> Result<Chain, PdbError> {
    let format = format
        .or_else(|| ChainFormat::from_path(path))
        .ok_or_else(|| PdbError::Format(format!("{}: cannot tell the chain format", path.display())))?;
    let text = fs::read_to_string(path).map_err(|e| PdbError::io(path, e))?;
    parse_chain(&text, format)
}

/// Serializes a chain. Csv values carry 17 significant digits and json uses
/// the shortest round-trip form, so reloading gives identical floats.
pub fn write_chain(chain: &Chain, format: ChainFormat) -> String {
    let rows: Vec<Vec<f64>> = chain.points().iter().map(|p| p.coords().to_vec()).collect();
    match format {
        ChainFormat::Json => {
            let value = JsonChain::Full { points: rows, weights: chain.weights().map(<[f64]>::to_vec) };
            serde_json::to_string(&value).expect("finite floats serialize")
        }
        ChainFormat::Csv => {
            let mut out = String::new();
            let names = ["x", "y", "z"];
            out.push_str(&names[..chain.dim()].join(","));
            if chain.weights().is_some() {
                out.push_str(",weight");
            }
            out.push('\n');
            for (i, row) in rows.iter().enumerate() {
                let mut fields: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
                if let Some(w) = chain.weights() {
                    fields.push(format!("{:.16e}", w[i]));
                }
                out.push_str(&fields.join(","));
                out.push('\n');
            }
            out
        }
    }
}

pub fn save_chain(chain: &Chain, path: &Path, format: Option<ChainFormat>) -> Result<(), PdbError> {
    let format = format.or_else(|| ChainFormat::from_path(path)).unwrap_or(ChainFormat::Csv);
    fs::write(path, write_chain(chain, format)).map_err(|e| PdbError::io(path, e))
}

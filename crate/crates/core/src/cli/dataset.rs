use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, WriterBuilder};

use crate::error::{Error, Result};
use crate::numeric::FiniteMeasure;
use crate::regression::LabeledDataset;

/// Column roles and delimiter for delimiter-separated input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadOptions {
    pub label: String,
    pub weight: Option<String>,
    /// `None` detects among comma, tab and semicolon from the header line.
    pub delimiter: Option<u8>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            label: "y".into(),
            weight: None,
            delimiter: None,
        }
    }
}

/// Picks whichever of `,`, `\t`, `;` occurs most in the header (comma on ties).
pub fn detect_delimiter(header: &str) -> u8 {
    b",\t;"
        .iter()
        .copied()
        .max_by_key(|&d| (header.bytes().filter(|&b| b == d).count(), d == b','))
        .unwrap_or(b',')
}

struct Table {
    header: Vec<String>,
    /// `(line number, fields)`, line numbers 1-based with the header on line 1.
    rows: Vec<(usize, Vec<String>)>,
}

fn read_table(mut input: impl Read, delimiter: Option<u8>) -> Result<Table> {
    let mut text = String::new();
    input
        .read_to_string(&mut text)
        .map_err(|e| Error::Input { line: 0, message: e.to_string() })?;
    let first = BufReader::new(text.as_bytes())
        .lines()
        .next()
        .transpose()
        .map_err(|e| Error::Input { line: 1, message: e.to_string() })?
        .filter(|l| !l.trim().is_empty())
        .ok_or(Error::Input { line: 1, message: "missing header row".into() })?;
    let delimiter = delimiter.unwrap_or_else(|| detect_delimiter(&first));
    let mut reader = ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Input { line: 1, message: e.to_string() })?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    let mut record = StringRecord::new();
    loop {
        let line = reader.position().line() as usize;
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map_or(line, |p| p.line() as usize);
                rows.push((line, record.iter().map(str::to_owned).collect()));
            }
            Err(e) => {
                let line = e.position().map_or(line, |p| p.line() as usize);
                return Err(Error::Input { line, message: e.to_string() });
            }
        }
    }
    Ok(Table { header, rows })
}

fn parse_cell(text: &str, line: usize, column: &str) -> Result<f64> {
    let v: f64 = text.parse().map_err(|_| Error::Input {
        line,
        message: format!("column '{column}': '{text}' is not a number"),
    })?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(Error::domain(format!(
            "row at line {line}, column '{column}': {v} is not a nonnegative real"
        )));
    }
    Ok(v)
}

fn column_index(header: &[String], name: &str) -> Result<usize> {
    header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::Input { line: 1, message: format!("no column named '{name}'") })
}

/// Loads a labelled dataset: every column other than the label and weight
/// columns is a coordinate, in header order. Without a weight column the
/// measure is uniform.
pub fn load_dataset(path: &Path, opts: &LoadOptions) -> Result<LabeledDataset> {
    let file = File::open(path).map_err(|e| Error::Input {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    read_dataset(file, opts)
}

pub fn read_dataset(input: impl Read, opts: &LoadOptions) -> Result<LabeledDataset> {
    let table = read_table(input, opts.delimiter)?;
    let label = column_index(&table.header, &opts.label)?;
    let weight = opts.weight.as_deref().map(|w| column_index(&table.header, w)).transpose()?;
    let coords: Vec<usize> = (0..table.header.len()).filter(|&j| j != label && Some(j) != weight).collect();
    if coords.is_empty() {
        return Err(Error::Input { line: 1, message: "no coordinate columns".into() });
    }
    if table.rows.is_empty() {
        return Err(Error::Input { line: 2, message: "no data rows".into() });
    }
    let mut points = Vec::with_capacity(table.rows.len());
    let mut labels = Vec::with_capacity(table.rows.len());
    let mut weights = Vec::new();
    for (line, fields) in &table.rows {
        let point = coords
            .iter()
            .map(|&j| parse_cell(&fields[j], *line, &table.header[j]))
            .collect::<Result<Vec<_>>>()?;
        points.push(point);
        labels.push(parse_cell(&fields[label], *line, &opts.label)?);
        if let Some(w) = weight {
            weights.push(parse_cell(&fields[w], *line, &table.header[w])?);
        }
    }
    let measure = if weight.is_some() {
        FiniteMeasure::from_weights(weights)?
    } else {
        FiniteMeasure::uniform(points.len())?
    };
    LabeledDataset::with_measure(points, labels, measure)
}

/// Loads query points: all columns except the label and weight columns, if present.
pub fn load_points(path: &Path, opts: &LoadOptions) -> Result<Vec<Vec<f64>>> {
    let file = File::open(path).map_err(|e| Error::Input {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    let table = read_table(file, opts.delimiter)?;
    let skip: Vec<&str> = std::iter::once(opts.label.as_str()).chain(opts.weight.as_deref()).collect();
    let coords: Vec<usize> = (0..table.header.len())
        .filter(|&j| !skip.contains(&table.header[j].as_str()))
        .collect();
    if coords.is_empty() {
        return Err(Error::Input { line: 1, message: "no coordinate columns".into() });
    }
    table
        .rows
        .iter()
        .map(|(line, fields)| {
            coords
                .iter()
                .map(|&j| parse_cell(&fields[j], *line, &table.header[j]))
                .collect()
        })
        .collect()
}

/// Writes `x1..xn, <label>` and, for non-uniform measures, a `weight` column.
/// Values use the shortest representation that parses back to the same `f64`.
pub fn write_dataset(dataset: &LabeledDataset, out: impl Write, delimiter: u8, label: &str) -> Result<()> {
    let io = |e: csv::Error| Error::Output(e.to_string());
    let weights = dataset.measure().weights();
    let uniform = weights.iter().all(|w| *w == weights[0]);
    let mut writer = WriterBuilder::new().delimiter(delimiter).from_writer(out);
    let mut header: Vec<String> = (1..=dataset.dim()).map(|j| format!("x{j}")).collect();
    header.push(label.to_owned());
    if !uniform {
        header.push("weight".into());
    }
    writer.write_record(&header).map_err(io)?;
    for (i, (pt, y)) in dataset.points().iter().zip(dataset.labels()).enumerate() {
        let mut row: Vec<String> = pt.iter().map(f64::to_string).collect();
        row.push(y.to_string());
        if !uniform {
            row.push(weights[i].to_string());
        }
        writer.write_record(&row).map_err(io)?;
    }
    writer.flush().map_err(|e| Error::Output(e.to_string()))
}

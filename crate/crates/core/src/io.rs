//! Design files: CSV (17 significant digits, optional `x1,...,xp` header) or
//! JSON, plus the provenance sidecar written next to CSV designs.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{Design, Error, Provenance, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    /// `.json` means JSON; anything else is CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReadOptions {
    /// Accept coordinates outside `[0, 1]` (raw lattice dumps).
    pub allow_out_of_range: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct WriteOptions {
    pub format: Format,
    /// Emit an `x1,...,xp` header line (CSV only).
    pub header: bool,
}

#[derive(Serialize, Deserialize)]
struct JsonDesign {
    n: usize,
    p: usize,
    points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

/// Where the provenance of a CSV design lives: `d.csv` → `d.provenance.json`.
pub fn provenance_path(path: &Path) -> PathBuf {
    path.with_extension("provenance.json")
}

/// Formats like C's `%.17g`: enough digits for any binary64 to round-trip.
pub fn format_g17(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..17).contains(&exp) {
        let body = if exp < 0 {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        } else {
            let split = exp as usize + 1;
            format!("{}.{}", &digits[..split], &digits[split..])
        };
        format!("{sign}{}", trim(body))
    } else {
        let m = trim(format!("{}.{}", &digits[..1], &digits[1..]));
        format!(
            "{sign}{m}e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn parse_error(path: &Path, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message: message.into(),
    }
}

/// Reads a CSV or JSON design. For CSV, a first row with any non-numeric
/// cell is taken as a header, and a provenance sidecar is attached when one
/// exists.
pub fn read_design(path: &Path, opts: &ReadOptions) -> Result<Design> {
    let text = fs::read_to_string(path)?;
    let design = match Format::from_path(path) {
        Format::Json => parse_json(path, &text)?,
        Format::Csv => {
            let mut design = parse_csv(path, &text)?;
            let side = provenance_path(path);
            if side.is_file() {
                let prov: Provenance = serde_json::from_str(&fs::read_to_string(&side)?)
                    .map_err(|e| parse_error(&side, e.line(), e.column(), e.to_string()))?;
                design = design.with_provenance(prov);
            }
            design
        }
    };
    check_values(path, &design, opts)?;
    Ok(design)
}

fn parse_json(path: &Path, text: &str) -> Result<Design> {
    let json: JsonDesign = serde_json::from_str(text)
        .map_err(|e| parse_error(path, e.line(), e.column(), e.to_string()))?;
    if json.points.len() != json.n {
        return Err(parse_error(
            path,
            1,
            1,
            format!(
                "declared n = {} but found {} points",
                json.n,
                json.points.len()
            ),
        ));
    }
    for (i, row) in json.points.iter().enumerate() {
        if row.len() != json.p {
            return Err(parse_error(
                path,
                1,
                1,
                format!(
                    "point {} has {} coordinates, expected {}",
                    i + 1,
                    row.len(),
                    json.p
                ),
            ));
        }
    }
    let design = Design::from_row_major(json.n, json.p, json.points.concat())?;
    Ok(match json.provenance {
        Some(p) => design.with_provenance(p),
        None => design,
    })
}

fn parse_csv(path: &Path, text: &str) -> Result<Design> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut data = Vec::new();
    let mut p = None;
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |pos| pos.line() as usize);
            parse_error(path, line, 1, e.to_string())
        })?;
        let line = record.position().map_or(0, |pos| pos.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let is_header = first && record.iter().any(|c| c.parse::<f64>().is_err());
        if is_header {
            first = false;
            p = Some(record.len());
            continue;
        }
        first = false;
        let width = *p.get_or_insert(record.len());
        if record.len() != width {
            return Err(parse_error(
                path,
                line,
                record.len().min(width) + 1,
                format!("expected {width} columns, found {}", record.len()),
            ));
        }
        for (k, cell) in record.iter().enumerate() {
            let v: f64 = cell
                .parse()
                .map_err(|_| parse_error(path, line, k + 1, format!("'{cell}' is not a number")))?;
            data.push(v);
        }
    }
    let p = p.ok_or_else(|| parse_error(path, 1, 1, "file contains no points"))?;
    if data.is_empty() {
        return Err(parse_error(path, 1, 1, "file contains no points"));
    }
    Design::from_row_major(data.len() / p, p, data)
}

fn check_values(path: &Path, design: &Design, opts: &ReadOptions) -> Result<()> {
    for (i, row) in design.rows().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(parse_error(
                    path,
                    i + 1,
                    k + 1,
                    format!("non-finite value {v} in point {}", i + 1),
                ));
            }
            if !opts.allow_out_of_range && !(0.0..=1.0).contains(&v) {
                return Err(parse_error(
                    path,
                    i + 1,
                    k + 1,
                    format!("value {v} in point {} lies outside [0, 1]", i + 1),
                ));
            }
        }
    }
    Ok(())
}

/// Renders a design as CSV text.
pub fn design_to_csv(design: &Design, header: bool) -> String {
    let mut out = String::new();
    if header {
        let names: Vec<String> = (1..=design.p()).map(|k| format!("x{k}")).collect();
        out.push_str(&names.join(","));
        out.push('\n');
    }
    for row in design.rows() {
        let cells: Vec<String> = row.iter().map(|&v| format_g17(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Renders a design, with provenance when present, as pretty JSON.
pub fn design_to_json(design: &Design) -> Result<String> {
    let json = JsonDesign {
        n: design.n(),
        p: design.p(),
        points: design.rows().map(<[f64]>::to_vec).collect(),
        provenance: design.provenance.clone(),
    };
    let mut s = serde_json::to_string_pretty(&json)?;
    s.push('\n');
    Ok(s)
}

/// Writes `design` to `path`. CSV designs that carry provenance also get a
/// sidecar at [`provenance_path`].
pub fn write_design(design: &Design, path: &Path, opts: &WriteOptions) -> Result<()> {
    match opts.format {
        Format::Csv => {
            fs::write(path, design_to_csv(design, opts.header))?;
            if let Some(prov) = &design.provenance {
                write_provenance(prov, &provenance_path(path))?;
            }
        }
        Format::Json => fs::write(path, design_to_json(design)?)?,
    }
    Ok(())
}

pub fn write_provenance(prov: &Provenance, path: &Path) -> Result<()> {
    let mut s = serde_json::to_string_pretty(prov)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

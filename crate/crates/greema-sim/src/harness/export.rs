//! Textual export primitives: bit-stable number formatting, unit-tagged
//! CSV, and JSON with lexicographic key order.

use std::path::Path;

use serde::Serialize;

use crate::error::{Result, SimError};
use crate::units::Unit;

/// Format a float with 9 significant digits, C `%.9g` style: plain
/// decimal while the exponent fits, scientific otherwise, trailing
/// zeros trimmed. Pure function of the value, so identical runs export
/// identical bytes.
pub fn fmt_g9(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let neg = x < 0.0;
    let formatted = format!("{:.8e}", x.abs());
    let (mantissa, exp_str) = formatted.split_once('e').expect("exponential format");
    let exp: i32 = exp_str.parse().expect("exponent");
    let digits: Vec<u8> = mantissa.bytes().filter(|&b| b != b'.').collect();
    debug_assert_eq!(digits.len(), 9);

    let trim = |ds: &[u8]| -> String {
        let end = ds.iter().rposition(|&b| b != b'0').map_or(0, |i| i + 1);
        String::from_utf8_lossy(&ds[..end]).into_owned()
    };

    let body = if (-4..9).contains(&exp) {
        if exp >= 0 {
            let int_len = exp as usize + 1;
            let int_part = String::from_utf8_lossy(&digits[..int_len]).into_owned();
            let frac = trim(&digits[int_len..]);
            if frac.is_empty() {
                int_part
            } else {
                format!("{int_part}.{frac}")
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            format!("0.{zeros}{}", trim(&digits))
        }
    } else {
        let frac = trim(&digits[1..]);
        let lead = digits[0] as char;
        let mant = if frac.is_empty() {
            lead.to_string()
        } else {
            format!("{lead}.{frac}")
        };
        format!("{mant}e{}{:02}", if exp >= 0 { "+" } else { "-" }, exp.abs())
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// One exported CSV column.
pub struct Column<'a> {
    pub name: &'a str,
    pub unit: Unit,
    pub values: &'a [f64],
}

impl<'a> Column<'a> {
    pub fn new(name: &'a str, unit: Unit, values: &'a [f64]) -> Self {
        Column { name, unit, values }
    }
}

/// Write columns as UTF-8 CSV with `\n` endings; each header cell is
/// `name [unit]`.
pub fn csv_string(columns: &[Column<'_>]) -> Result<String> {
    if columns.is_empty() {
        return Err(SimError::invalid("columns", "nothing to export"));
    }
    let rows = columns[0].values.len();
    for c in columns {
        if c.values.len() != rows {
            return Err(SimError::invalid(
                "columns",
                format!("column {} has {} rows, expected {rows}", c.name, c.values.len()),
            ));
        }
    }
    let mut out = String::new();
    let header: Vec<String> = columns
        .iter()
        .map(|c| format!("{} [{}]", c.name, c.unit))
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in 0..rows {
        let cells: Vec<String> = columns.iter().map(|c| fmt_g9(c.values[row])).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_csv(path: &Path, columns: &[Column<'_>]) -> Result<()> {
    std::fs::write(path, csv_string(columns)?)?;
    Ok(())
}

/// A parsed CSV column.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedColumn {
    pub name: String,
    pub unit: Unit,
    pub values: Vec<f64>,
}

/// Parse CSV text produced by [`csv_string`].
pub fn parse_csv(text: &str) -> Result<Vec<ParsedColumn>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| SimError::invalid("csv", "empty file"))?;
    let mut columns: Vec<ParsedColumn> = Vec::new();
    for cell in header.split(',') {
        let cell = cell.trim();
        let (name, unit_part) = cell
            .rsplit_once(" [")
            .ok_or_else(|| SimError::invalid("csv", format!("header cell {cell:?} lacks a unit tag")))?;
        let unit_tag = unit_part
            .strip_suffix(']')
            .ok_or_else(|| SimError::invalid("csv", format!("malformed unit in {cell:?}")))?;
        columns.push(ParsedColumn {
            name: name.to_string(),
            unit: unit_tag.parse()?,
            values: Vec::new(),
        });
    }
    for (line_no, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != columns.len() {
            return Err(SimError::invalid(
                "csv",
                format!("row {} has {} cells, expected {}", line_no + 2, cells.len(), columns.len()),
            ));
        }
        for (col, cell) in columns.iter_mut().zip(cells) {
            let value: f64 = cell.parse().map_err(|_| {
                SimError::invalid("csv", format!("row {}: bad number {cell:?}", line_no + 2))
            })?;
            col.values.push(value);
        }
    }
    Ok(columns)
}

pub fn read_csv(path: &Path) -> Result<Vec<ParsedColumn>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SimError::invalid("csv", format!("{}: {e}", path.display())))?;
    parse_csv(&text)
}

/// Serialize with lexicographically ordered keys and a trailing newline.
pub fn json_string<T: Serialize>(value: &T) -> Result<String> {
    // Routing through Value sorts object keys (the map is a BTreeMap).
    let value = serde_json::to_value(value)
        .map_err(|e| SimError::invalid("json", e.to_string()))?;
    let mut text = serde_json::to_string_pretty(&value)
        .map_err(|e| SimError::invalid("json", e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, json_string(value)?)?;
    Ok(())
}

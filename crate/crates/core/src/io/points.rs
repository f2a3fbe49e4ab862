//! Point clouds and layerings as CSV.
//!
//! Dialect: comma separated, `.` decimal point, LF line endings, no quoting.
//! A point cloud has one point per row and an optional header `x1,...,xd`.

use std::io::Write;

use csv::{ReaderBuilder, StringRecord, Trim};

use crate::convex::ConvexLayering;
use crate::error::{Error, Result};
use crate::geometry::PointCloud;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn is_header(record: &StringRecord) -> bool {
    record.iter().enumerate().all(|(k, field)| field == format!("x{}", k + 1))
}

fn line_of(record: &StringRecord) -> usize {
    record.position().map_or(0, |p| p.line() as usize)
}

fn records(text: &str) -> impl Iterator<Item = Result<StringRecord>> + '_ {
    ReaderBuilder::new()
        .has_headers(false)
        .trim(Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes())
        .into_records()
        .map(|r| {
            r.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                parse_err(line, e.to_string())
            })
        })
}

/// Parse a point cloud. The dimension is the width of the first row.
pub fn parse_points_csv(text: &str) -> Result<PointCloud> {
    let mut dim = None;
    let mut coords = Vec::new();
    for (k, record) in records(text).enumerate() {
        let record = record?;
        let line = line_of(&record);
        if k == 0 && is_header(&record) {
            dim = Some(record.len());
            continue;
        }
        let width = *dim.get_or_insert(record.len());
        if record.len() != width {
            return Err(parse_err(line, format!("expected {width} fields, found {}", record.len())));
        }
        for field in record.iter() {
            let v: f64 = field.parse().map_err(|_| parse_err(line, format!("not a number: {field:?}")))?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("non-finite coordinate {field:?}")));
            }
            coords.push(v);
        }
    }
    let dim = dim.ok_or(Error::EmptyCloud)?;
    PointCloud::from_flat(dim, coords)
}

pub fn read_points_csv(path: &std::path::Path) -> Result<PointCloud> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(0, format!("{}: {e}", path.display())))?;
    parse_points_csv(&text)
}

/// Rows of plain numbers under a header; values use the shortest
/// representation that reads back to the same `f64`.
pub fn write_rows<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()
}

/// Format an `f64` so that parsing the text gives back the same value.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_points_csv<W: Write>(out: W, cloud: &PointCloud) -> std::io::Result<()> {
    let names: Vec<String> = (1..=cloud.dim()).map(|k| format!("x{k}")).collect();
    let header: Vec<&str> = names.iter().map(String::as_str).collect();
    write_rows(out, &header, cloud.iter().map(|p| p.iter().copied().map(num).collect()))
}

/// `point_index,layer` with one row per input point.
pub fn write_layering_csv<W: Write, T: crate::geometry::Scalar>(
    out: W,
    layering: &ConvexLayering<T>,
) -> std::io::Result<()> {
    let rows = layering.layer_of_point().iter().enumerate().map(|(i, l)| vec![i.to_string(), l.to_string()]);
    write_rows(out, &["point_index", "layer"], rows)
}

/// Inverse of [`write_layering_csv`]: the layer of every point, in index order.
pub fn parse_layering_csv(text: &str) -> Result<Vec<usize>> {
    let mut layers = Vec::new();
    for (k, record) in records(text).enumerate() {
        let record = record?;
        let line = line_of(&record);
        if k == 0 {
            if record.iter().collect::<Vec<_>>() != ["point_index", "layer"] {
                return Err(parse_err(line, "expected header point_index,layer"));
            }
            continue;
        }
        if record.len() != 2 {
            return Err(parse_err(line, format!("expected 2 fields, found {}", record.len())));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|_| parse_err(line, format!("not an index: {s:?}")));
        let (i, l) = (int(&record[0])?, int(&record[1])?);
        if i != layers.len() {
            return Err(parse_err(line, format!("expected point index {}, found {i}", layers.len())));
        }
        layers.push(l);
    }
    if layers.is_empty() && text.trim().is_empty() {
        return Err(parse_err(1, "missing header"));
    }
    Ok(layers)
}

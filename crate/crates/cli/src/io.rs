//! Signal files: one-column CSV, comma-separated 2D CSV and PGM (P2/P5).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use fmd_core::{Shape, Signal};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One real number per line.
    Csv1d,
    /// One row per line, values separated by commas.
    Csv2d,
    /// Portable graymap, ASCII (P2) or binary (P5).
    Pgm,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv1d => "csv1d",
            Format::Csv2d => "csv2d",
            Format::Pgm => "pgm",
        }
    }
}

/// Affine map used for a PGM display copy: `pixel = round((v - offset) * scale)`,
/// clamped to `0..=maxval`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplayMapping {
    pub offset: f64,
    pub scale: f64,
}

pub const DISPLAY_MAXVAL: u16 = 255;

pub fn read_signal(path: &Path, format: Format) -> Result<Signal, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let parsed = match format {
        Format::Csv1d => text(&bytes).and_then(parse_csv1d),
        Format::Csv2d => text(&bytes).and_then(parse_csv2d),
        Format::Pgm => parse_pgm(&bytes),
    };
    parsed.map_err(|msg| CliError::Parse {
        path: path.to_path_buf(),
        msg,
    })
}

fn text(bytes: &[u8]) -> Result<&str, String> {
    std::str::from_utf8(bytes).map_err(|e| format!("byte {}: invalid UTF-8", e.valid_up_to()))
}

fn parse_value(field: &str, line: usize) -> Result<f64, String> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| format!("line {line}: cannot parse {:?} as a number", field.trim()))?;
    if !v.is_finite() {
        return Err(format!("line {line}: non-finite value {v}"));
    }
    Ok(v)
}

/// Data lines with their 1-based line numbers; `#` lines and blank lines are skipped.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_csv1d(text: &str) -> Result<Signal, String> {
    let mut values = Vec::new();
    for (line, l) in data_lines(text) {
        if l.contains(',') {
            return Err(format!("line {line}: expected one value per line"));
        }
        values.push(parse_value(l, line)?);
    }
    if values.is_empty() {
        return Err("no samples".into());
    }
    Signal::real_1d(&values).map_err(|e| e.to_string())
}

pub fn parse_csv2d(text: &str) -> Result<Signal, String> {
    let mut values = Vec::new();
    let mut rows = 0;
    let mut cols = None;
    for (line, l) in data_lines(text) {
        let row: Vec<f64> = l.split(',').map(|f| parse_value(f, line)).collect::<Result<_, _>>()?;
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(format!("line {line}: expected {c} columns, found {}", row.len()))
            }
            _ => {}
        }
        values.extend(row);
        rows += 1;
    }
    let Some(cols) = cols else {
        return Err("no samples".into());
    };
    Signal::real_2d(rows, cols, &values).map_err(|e| e.to_string())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    /// Skips whitespace and `#` comments.
    fn skip_blank(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32, String> {
        self.skip_blank();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.bytes.get(start) {
                Some(b) => format!("byte {start}: expected {what}, found {:?}", *b as char),
                None => format!("byte {start}: unexpected end of file, expected {what}"),
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| format!("byte {start}: {what} out of range"))
    }
}

pub fn parse_pgm(bytes: &[u8]) -> Result<Signal, String> {
    if bytes.is_empty() {
        return Err("empty file".into());
    }
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err("byte 0: expected magic number P2 or P5".into()),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let cols = cur.number("width")? as usize;
    let rows = cur.number("height")? as usize;
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if cols == 0 || rows == 0 {
        return Err(format!("byte {maxval_at}: zero image dimension {cols}x{rows}"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(format!("byte {maxval_at}: unsupported maxval {maxval}"));
    }
    let count = rows * cols;
    let mut values = Vec::with_capacity(count);
    if binary {
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(format!("byte {}: expected whitespace before raster", cur.pos)),
        }
        let width = if maxval < 256 { 1 } else { 2 };
        let raster = &bytes[cur.pos..];
        if raster.len() < count * width {
            return Err(format!(
                "byte {}: raster truncated, need {} bytes, found {}",
                bytes.len(),
                count * width,
                raster.len()
            ));
        }
        for (i, px) in raster.chunks_exact(width).take(count).enumerate() {
            let v = if width == 1 {
                px[0] as u32
            } else {
                u16::from_be_bytes([px[0], px[1]]) as u32
            };
            if v > maxval {
                return Err(format!("byte {}: sample {v} exceeds maxval {maxval}", cur.pos + i * width));
            }
            values.push(v as f64);
        }
    } else {
        for _ in 0..count {
            let at = cur.pos;
            let v = cur.number("sample")?;
            if v > maxval {
                return Err(format!("byte {at}: sample {v} exceeds maxval {maxval}"));
            }
            values.push(v as f64);
        }
        cur.skip_blank();
        if cur.pos < bytes.len() {
            return Err(format!("byte {}: trailing data after {count} samples", cur.pos));
        }
    }
    Signal::real_2d(rows, cols, &values).map_err(|e| e.to_string())
}

/// Shortest decimal that parses back to the same `f64`.
fn push_value(out: &mut String, v: f64) {
    write!(out, "{v:?}").unwrap();
}

pub fn format_csv1d(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 20);
    for &v in values {
        push_value(&mut out, v);
        out.push('\n');
    }
    out
}

pub fn format_csv2d(cols: usize, values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 20);
    for row in values.chunks(cols) {
        for (j, &v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            push_value(&mut out, v);
        }
        out.push('\n');
    }
    out
}

/// Maps samples to `0..=maxval`. Samples already in range are kept (rounded),
/// anything else is stretched from its min and max.
pub fn display_mapping(values: &[f64], maxval: u16) -> DisplayMapping {
    let top = maxval as f64;
    if values.iter().all(|&v| v == 0.0) {
        return DisplayMapping { offset: 0.0, scale: 0.0 };
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min >= 0.0 && max <= top {
        DisplayMapping { offset: 0.0, scale: 1.0 }
    } else if max > min {
        DisplayMapping { offset: min, scale: top / (max - min) }
    } else {
        DisplayMapping { offset: min, scale: 0.0 }
    }
}

pub fn encode_pgm(rows: usize, cols: usize, values: &[f64], maxval: u16, map: DisplayMapping) -> Vec<u8> {
    let mut out = format!("P5\n{cols} {rows}\n{maxval}\n").into_bytes();
    for &v in values {
        let px = ((v - map.offset) * map.scale).round().clamp(0.0, maxval as f64) as u16;
        if maxval < 256 {
            out.push(px as u8);
        } else {
            out.extend_from_slice(&px.to_be_bytes());
        }
    }
    out
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Files produced by [`write_signal`].
#[derive(Debug, Clone, PartialEq)]
pub struct Written {
    /// Exact sample file (CSV).
    pub exact: PathBuf,
    /// Display copy and its mapping, for PGM output.
    pub display: Option<(PathBuf, DisplayMapping)>,
}

/// Writes the real parts of `signal`. For `Format::Pgm` the PGM is a display
/// copy and an exact `.csv` sidecar is written next to it.
pub fn write_signal(signal: &Signal, path: &Path, format: Format) -> Result<Written, CliError> {
    let values = signal.real_parts();
    let dims = match signal.shape() {
        Shape::D1(n) => (1, n),
        Shape::D2 { rows, cols } => (rows, cols),
    };
    match format {
        Format::Csv1d => {
            write_file(path, format_csv1d(&values))?;
            Ok(Written { exact: path.to_path_buf(), display: None })
        }
        Format::Csv2d => {
            write_file(path, format_csv2d(dims.1, &values))?;
            Ok(Written { exact: path.to_path_buf(), display: None })
        }
        Format::Pgm => {
            let map = display_mapping(&values, DISPLAY_MAXVAL);
            write_file(path, encode_pgm(dims.0, dims.1, &values, DISPLAY_MAXVAL, map))?;
            let exact = path.with_extension("csv");
            write_file(&exact, format_csv2d(dims.1, &values))?;
            Ok(Written { exact, display: Some((path.to_path_buf(), map)) })
        }
    }
}

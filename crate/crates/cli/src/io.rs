//! Relation file formats.
//!
//! Two input formats are supported:
//!
//! - **dense-csv**: header row of observation labels (the corner cell is
//!   ignored), one row per feature with its label in the first column and
//!   0/1 cells. Fields follow CSV quoting, so labels may contain commas.
//! - **pattern-log**: a patterns file (one regular expression per line,
//!   line order defining the feature axis) plus a directory of text files,
//!   one per observation. Cell (x, y) is 1 when pattern x matches anywhere
//!   in file y's bytes. File names are sorted bytewise and become the
//!   observation labels, so ingestion is deterministic for fixed file
//!   contents. The pattern dialect is the `regex` crate's: no
//!   backreferences, no look-around.

use regex::bytes::RegexSet;
use relmetric::{BitSet, Relation};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

/// How a relation is stored on disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    DenseCsv,
    PatternLog,
}

/// A failure while loading or writing a relation, naming the file.
#[derive(Debug)]
pub struct FileError {
    pub path: String,
    pub message: String,
}

impl FileError {
    fn new(path: &Path, message: impl Into<String>) -> Self {
        FileError {
            path: path.display().to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for FileError {}

/// Load a relation, dispatching on the format. `patterns` is required for
/// pattern-log inputs and ignored otherwise.
pub fn load_relation(
    path: &Path,
    format: InputFormat,
    patterns: Option<&Path>,
) -> Result<Relation, FileError> {
    match format {
        InputFormat::DenseCsv => load_dense_csv(path),
        InputFormat::PatternLog => {
            let patterns = patterns.ok_or_else(|| {
                FileError::new(path, "pattern-log input needs a --patterns file")
            })?;
            load_pattern_log(patterns, path)
        }
    }
}

/// Parse one CSV record, handling quoted fields. Returns the fields and the
/// byte offset just past the record. An unterminated quote runs to the end
/// of input.
fn parse_record(data: &[u8], mut pos: usize) -> (Vec<String>, usize) {
    let mut fields = Vec::new();
    let mut field = Vec::new();
    let mut in_quotes = false;
    loop {
        if pos >= data.len() {
            fields.push(String::from_utf8_lossy(&field).into_owned());
            return (fields, pos);
        }
        let b = data[pos];
        if in_quotes {
            match b {
                b'"' if data.get(pos + 1) == Some(&b'"') => {
                    field.push(b'"');
                    pos += 2;
                }
                b'"' => {
                    in_quotes = false;
                    pos += 1;
                }
                _ => {
                    field.push(b);
                    pos += 1;
                }
            }
        } else {
            match b {
                b'"' if field.is_empty() => {
                    in_quotes = true;
                    pos += 1;
                }
                b',' => {
                    fields.push(String::from_utf8_lossy(&field).into_owned());
                    field.clear();
                    pos += 1;
                }
                b'\r' if data.get(pos + 1) == Some(&b'\n') => {
                    fields.push(String::from_utf8_lossy(&field).into_owned());
                    return (fields, pos + 2);
                }
                b'\n' => {
                    fields.push(String::from_utf8_lossy(&field).into_owned());
                    return (fields, pos + 1);
                }
                _ => {
                    field.push(b);
                    pos += 1;
                }
            }
        }
    }
}

/// Load the dense 0/1 matrix format.
pub fn load_dense_csv(path: &Path) -> Result<Relation, FileError> {
    let data = fs::read(path).map_err(|e| FileError::new(path, e.to_string()))?;
    if data.is_empty() {
        return Err(FileError::new(path, "empty file, expected a header row"));
    }
    let (header, mut pos) = parse_record(&data, 0);
    let y_labels: Vec<String> = header[1..].to_vec();
    let mut x_labels = Vec::new();
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut line = 1usize;
    while pos < data.len() {
        line += 1;
        let (record, next) = parse_record(&data, pos);
        pos = next;
        if record.len() == 1 && record[0].is_empty() {
            continue; // blank line
        }
        if record.len() != y_labels.len() + 1 {
            return Err(FileError::new(
                path,
                format!(
                    "line {line}: {} fields, expected {}",
                    record.len(),
                    y_labels.len() + 1
                ),
            ));
        }
        let mut cells = Vec::with_capacity(y_labels.len());
        for (col, cell) in record[1..].iter().enumerate() {
            match cell.trim() {
                "0" => cells.push(0),
                "1" => cells.push(1),
                other => {
                    return Err(FileError::new(
                        path,
                        format!("line {line}, column {}: {other:?} is not 0 or 1", col + 2),
                    ));
                }
            }
        }
        x_labels.push(record[0].clone());
        rows.push(cells);
    }
    let mut columns = vec![BitSet::new(x_labels.len()); y_labels.len()];
    for (i, row) in rows.iter().enumerate() {
        for (j, &cell) in row.iter().enumerate() {
            if cell == 1 {
                columns[j].insert(i);
            }
        }
    }
    Relation::from_columns(x_labels, y_labels, columns)
        .map_err(|e| FileError::new(path, e.to_string()))
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Write a relation in the dense format; inverse of [`load_dense_csv`].
pub fn write_dense_csv(relation: &Relation, out: &mut impl Write) -> std::io::Result<()> {
    let header: Vec<String> = std::iter::once(String::new())
        .chain(relation.y_labels().iter().map(|l| csv_field(l)))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for (i, row) in relation.to_matrix().into_iter().enumerate() {
        let mut fields = vec![csv_field(&relation.x_labels()[i])];
        fields.extend(row.iter().map(|c| c.to_string()));
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Load a pattern-log relation: regexes from `patterns_path` matched
/// against every file in `dir`.
pub fn load_pattern_log(patterns_path: &Path, dir: &Path) -> Result<Relation, FileError> {
    let text = fs::read_to_string(patterns_path)
        .map_err(|e| FileError::new(patterns_path, e.to_string()))?;
    let mut patterns = Vec::new();
    for (i, raw) in text.split_terminator('\n').enumerate() {
        let pattern = raw.strip_suffix('\r').unwrap_or(raw);
        if pattern.is_empty() {
            return Err(FileError::new(
                patterns_path,
                format!("line {}: empty pattern", i + 1),
            ));
        }
        patterns.push(pattern.to_string());
    }
    let set = RegexSet::new(&patterns).map_err(|e| {
        FileError::new(patterns_path, format!("invalid pattern: {e}"))
    })?;

    let mut names: Vec<(Vec<u8>, std::path::PathBuf)> = Vec::new();
    let entries = fs::read_dir(dir).map_err(|e| FileError::new(dir, e.to_string()))?;
    for entry in entries {
        let entry = entry.map_err(|e| FileError::new(dir, e.to_string()))?;
        let file_type = entry
            .file_type()
            .map_err(|e| FileError::new(&entry.path(), e.to_string()))?;
        if file_type.is_file() {
            names.push((entry.file_name().into_encoded_bytes(), entry.path()));
        }
    }
    names.sort();

    let mut y_labels = Vec::with_capacity(names.len());
    let mut columns = Vec::with_capacity(names.len());
    for (name, file_path) in &names {
        let bytes = fs::read(file_path).map_err(|e| FileError::new(file_path, e.to_string()))?;
        let mut column = BitSet::new(patterns.len());
        for m in set.matches(&bytes) {
            column.insert(m);
        }
        y_labels.push(String::from_utf8_lossy(name).into_owned());
        columns.push(column);
    }
    Relation::from_columns(patterns, y_labels, columns)
        .map_err(|e| FileError::new(dir, e.to_string()))
}

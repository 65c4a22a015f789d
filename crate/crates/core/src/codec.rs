//! Text formats for analysis results.
//!
//! A vector (dead places or dead transitions) is one line with one character
//! per item: `1` yes, `0` no, `.` unknown. The concurrency half matrix is one
//! such line per place, line `i` holding cells `(i, 1) ..= (i, i)`.
//!
//! Every line is run-length compressed: a run of `n > 3` copies of a
//! character `c` is written `c(n)`, shorter runs stay verbatim. Lines end
//! with LF; readers also accept CRLF.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::analysis::TriState;
use crate::matrix::HalfMatrix;

/// Shortest run that gets abbreviated.
pub const MIN_RUN: usize = 4;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("invalid character {found:?} at offset {offset}")]
    BadChar { found: char, offset: usize },
    #[error("malformed repeat count at offset {offset}")]
    MalformedCount { offset: usize },
    #[error("unbalanced parenthesis at offset {offset}")]
    Unbalanced { offset: usize },
    #[error("row {row} has {found} cells, expected {row}")]
    RowLength { row: usize, found: usize },
    #[error("expected a single line")]
    ExtraLines,
    #[error("missing result line")]
    MissingLine,
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn is_cell(c: char) -> bool {
    matches!(c, '0' | '1' | '.')
}

/// Run-length compresses a line over `{0, 1, .}`.
pub fn compress(line: &str) -> Result<String, CodecError> {
    if let Some((offset, found)) = line.char_indices().find(|&(_, c)| !is_cell(c)) {
        return Err(CodecError::BadChar { found, offset });
    }
    let mut out = String::with_capacity(line.len().min(64));
    compress_into(line.chars(), &mut out);
    Ok(out)
}

fn compress_into(cells: impl IntoIterator<Item = char>, out: &mut String) {
    let mut run: Option<(char, usize)> = None;
    for c in cells {
        match &mut run {
            Some((prev, n)) if *prev == c => *n += 1,
            _ => {
                if let Some((prev, n)) = run {
                    emit_run(prev, n, out);
                }
                run = Some((c, 1));
            }
        }
    }
    if let Some((prev, n)) = run {
        emit_run(prev, n, out);
    }
}

fn emit_run(c: char, n: usize, out: &mut String) {
    if n >= MIN_RUN {
        out.push(c);
        out.push('(');
        out.push_str(&n.to_string());
        out.push(')');
    } else {
        out.extend(std::iter::repeat_n(c, n));
    }
}

/// Expands `c(n)` abbreviations. Counts below [`MIN_RUN`] are accepted.
pub fn decompress(line: &str) -> Result<String, CodecError> {
    let mut out = String::with_capacity(line.len());
    let mut chars = line.char_indices().peekable();
    while let Some((offset, c)) = chars.next() {
        match c {
            c if is_cell(c) => {
                if chars.peek().map(|&(_, n)| n) != Some('(') {
                    out.push(c);
                    continue;
                }
                let (open, _) = chars.next().unwrap();
                let mut digits = String::new();
                loop {
                    match chars.next() {
                        Some((_, ')')) => break,
                        Some((_, d)) if d.is_ascii_digit() => digits.push(d),
                        Some((at, '(')) => return Err(CodecError::Unbalanced { offset: at }),
                        Some((at, _)) => return Err(CodecError::MalformedCount { offset: at }),
                        None => return Err(CodecError::Unbalanced { offset: open }),
                    }
                }
                let count: usize = digits
                    .parse()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or(CodecError::MalformedCount { offset: open + 1 })?;
                out.extend(std::iter::repeat_n(c, count));
            }
            '(' | ')' => return Err(CodecError::Unbalanced { offset }),
            found => return Err(CodecError::BadChar { found, offset }),
        }
    }
    Ok(out)
}

/// Compressed rendering of a row of cells, without line terminator.
pub fn render(cells: &[TriState]) -> String {
    let mut out = String::new();
    compress_into(cells.iter().map(|c| c.as_char()), &mut out);
    out
}

fn parse_cells(line: &str) -> Result<Vec<TriState>, CodecError> {
    let expanded = decompress(line)?;
    Ok(expanded
        .chars()
        .map(|c| TriState::from_char(c).expect("decompress checks the alphabet"))
        .collect())
}

/// Writes one compressed line for a vector result.
pub fn write_vector<W: Write>(cells: &[TriState], mut sink: W) -> io::Result<()> {
    writeln!(sink, "{}", render(cells))
}

/// Writes the half matrix, one compressed line per row.
pub fn write_matrix<W: Write>(matrix: &HalfMatrix<TriState>, mut sink: W) -> io::Result<()> {
    for row in matrix.rows() {
        writeln!(sink, "{}", render(row))?;
    }
    Ok(())
}

fn trim_eol(line: &str) -> &str {
    let line = line.strip_suffix('\n').unwrap_or(line);
    line.strip_suffix('\r').unwrap_or(line)
}

pub fn read_vector<R: BufRead>(mut source: R) -> Result<Vec<TriState>, CodecError> {
    let mut line = String::new();
    if source.read_line(&mut line)? == 0 {
        return Err(CodecError::MissingLine);
    }
    let cells = parse_cells(trim_eol(&line))?;
    let mut rest = String::new();
    source.read_to_string(&mut rest)?;
    if !rest.trim_end_matches(['\r', '\n']).is_empty() {
        return Err(CodecError::ExtraLines);
    }
    Ok(cells)
}

pub fn read_matrix<R: BufRead>(source: R) -> Result<HalfMatrix<TriState>, CodecError> {
    let mut rows = Vec::new();
    for line in source.lines() {
        let line = line?;
        let row = parse_cells(trim_eol(&line))?;
        let index = rows.len() + 1;
        if row.len() != index {
            return Err(CodecError::RowLength {
                row: index,
                found: row.len(),
            });
        }
        rows.push(row);
    }
    Ok(HalfMatrix::from_rows(rows).expect("row lengths checked"))
}

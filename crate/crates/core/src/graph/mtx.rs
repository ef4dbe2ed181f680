use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{Csr, SparseSymGraph};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Symmetric,
    General,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<Kind> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(parse_err(lineno, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'"));
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(parse_err(lineno, "only 'matrix coordinate' files are supported"));
    }
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(parse_err(lineno, format!("unsupported field '{}'", tokens[3])));
    }
    match tokens[4].as_str() {
        "symmetric" => Ok(Kind::Symmetric),
        "general" => Ok(Kind::General),
        other => Err(parse_err(lineno, format!("unsupported symmetry '{other}'"))),
    }
}

/// Reads a similarity graph from a Matrix Market coordinate file.
///
/// `symmetric` files may list either triangle; `general` files must contain
/// every off-diagonal entry together with an identical mirrored entry.
/// Diagonal entries are dropped.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseSymGraph> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let kind = match lines.next() {
        Some((no, line)) => parse_header(&line?, no)?,
        None => return Err(parse_err(1, "empty file")),
    };

    let mut size: Option<(usize, usize)> = None;
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut last_line = 1;
    for (no, line) in lines {
        let line = line?;
        last_line = no;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(no, "size line must be '<rows> <cols> <entries>'"));
                }
                let rows: usize = fields[0].parse().map_err(|_| parse_err(no, "bad row count"))?;
                let cols: usize = fields[1].parse().map_err(|_| parse_err(no, "bad column count"))?;
                let nnz: usize = fields[2].parse().map_err(|_| parse_err(no, "bad entry count"))?;
                if rows != cols {
                    return Err(parse_err(no, format!("matrix must be square, got {rows}x{cols}")));
                }
                size = Some((rows, nnz));
                entries.reserve(nnz);
            }
            Some((n, nnz)) => {
                if fields.len() != 3 {
                    return Err(parse_err(no, "entry must be '<row> <col> <value>'"));
                }
                if entries.len() == nnz {
                    return Err(parse_err(no, format!("more than the declared {nnz} entries")));
                }
                let i: usize = fields[0].parse().map_err(|_| parse_err(no, "bad row index"))?;
                let j: usize = fields[1].parse().map_err(|_| parse_err(no, "bad column index"))?;
                let w: f64 = fields[2].parse().map_err(|_| parse_err(no, "bad value"))?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(parse_err(no, format!("index ({i}, {j}) outside 1..={n}")));
                }
                if !w.is_finite() || w < 0.0 {
                    return Err(parse_err(no, format!("weight {w} must be finite and nonnegative")));
                }
                entries.push((i - 1, j - 1, w));
            }
        }
    }
    let (n, nnz) = size.ok_or_else(|| parse_err(last_line, "missing size line"))?;
    if entries.len() != nnz {
        return Err(parse_err(
            last_line,
            format!("declared {nnz} entries but found {}", entries.len()),
        ));
    }

    let undirected = match kind {
        Kind::Symmetric => entries,
        Kind::General => fold_general(entries)?,
    };
    let (csr, dropped) = Csr::from_undirected(n, &undirected)?;
    if dropped > 0 {
        log::warn!("dropped {dropped} diagonal entries");
    }
    SparseSymGraph::from_csr(csr, dropped)
}

/// Collapses a general (both triangles) entry list to one entry per
/// undirected pair, verifying exact symmetry.
fn fold_general(entries: Vec<(usize, usize, f64)>) -> Result<Vec<(usize, usize, f64)>> {
    let mut directed: HashMap<(usize, usize), f64> = HashMap::with_capacity(entries.len());
    for &(i, j, w) in &entries {
        *directed.entry((i, j)).or_insert(0.0) += w;
    }
    let mut out = Vec::with_capacity(entries.len() / 2 + 1);
    for &(i, j, _) in &entries {
        let w = directed[&(i, j)];
        if i != j {
            let mirrored = directed.get(&(j, i)).copied().unwrap_or(0.0);
            if mirrored.to_bits() != w.to_bits() {
                return Err(Error::AsymmetricInput { i, j });
            }
        }
        // diagonal entries pass through so the drop is counted downstream
        if i <= j {
            out.push((i, j, w));
        }
    }
    out.sort_by_key(|&(i, j, _)| (i, j));
    out.dedup_by_key(|e| (e.0, e.1));
    Ok(out)
}

/// Writes the lower triangle of `graph` as a symmetric real Matrix Market file.
pub fn write_matrix_market(graph: &SparseSymGraph, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
    let n = graph.n();
    writeln!(out, "{n} {n} {}", graph.num_edges())?;
    for i in 0..n {
        for (j, w) in graph.neighbors(i) {
            if j >= i {
                break;
            }
            writeln!(out, "{} {} {}", i + 1, j + 1, w)?;
        }
    }
    out.flush()?;
    Ok(())
}

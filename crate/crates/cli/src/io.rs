//! Text file formats for tensors and vectors.
//!
//! Tensor files: a header line `tns <m> <n> <nnz>` followed by `nnz` entry
//! lines `<i1> .. <im> <value>` with 1-based indices. Vector files: a header
//! `vec <n>` followed by `n` whitespace-separated values. Lines starting
//! with `#` and blank lines are ignored in both formats.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use mtensor::Tensor;
use nalgebra::DVector;

#[derive(Debug)]
pub enum CliError {
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    Io {
        path: String,
        msg: String,
    },
    Usage(String),
    Core(mtensor::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { path, line, msg } => {
                write!(f, "{path}:{line}: {msg}")
            }
            CliError::Io { path, msg } => write!(f, "{path}: {msg}"),
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<mtensor::Error> for CliError {
    fn from(e: mtensor::Error) -> Self {
        CliError::Core(e)
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Reads a tensor file; duplicate index tuples are coalesced by summation
/// with a warning on stderr.
pub fn read_tensor(path: &Path) -> Result<Tensor, CliError> {
    let text = read_to_string(path)?;
    let name = path.display().to_string();
    let perr = |line: usize, msg: String| CliError::Parse {
        path: name.clone(),
        line,
        msg,
    };

    let mut lines = content_lines(&text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| perr(1, "empty file; expected header 'tns <m> <n> <nnz>'".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "tns" {
        return Err(perr(hline, "expected header 'tns <m> <n> <nnz>'".into()));
    }
    let order: usize = tokens[1]
        .parse()
        .map_err(|_| perr(hline, format!("invalid order '{}'", tokens[1])))?;
    let dim: usize = tokens[2]
        .parse()
        .map_err(|_| perr(hline, format!("invalid dimension '{}'", tokens[2])))?;
    let nnz: usize = tokens[3]
        .parse()
        .map_err(|_| perr(hline, format!("invalid entry count '{}'", tokens[3])))?;

    let mut entries: Vec<(Vec<usize>, f64)> = Vec::with_capacity(nnz);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut duplicates = 0usize;
    for _ in 0..nnz {
        let (lno, line) = lines
            .next()
            .ok_or_else(|| perr(text.lines().count(), format!("expected {nnz} entry lines")))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != order + 1 {
            return Err(perr(
                lno,
                format!("expected {} indices and a value, got {} tokens", order, toks.len()),
            ));
        }
        let mut tuple = Vec::with_capacity(order);
        for t in &toks[..order] {
            let idx: usize = t
                .parse()
                .map_err(|_| perr(lno, format!("invalid index '{t}'")))?;
            if idx == 0 || idx > dim {
                return Err(perr(lno, format!("index {idx} outside [1, {dim}]")));
            }
            tuple.push(idx - 1);
        }
        let value: f64 = toks[order]
            .parse()
            .map_err(|_| perr(lno, format!("invalid value '{}'", toks[order])))?;
        if !seen.insert(tuple.clone()) {
            duplicates += 1;
        }
        entries.push((tuple, value));
    }
    if let Some((lno, _)) = lines.next() {
        return Err(perr(lno, format!("trailing content after {nnz} entries")));
    }
    if duplicates > 0 {
        eprintln!("warning: {name}: {duplicates} duplicate index tuple(s) coalesced by summation");
    }
    Tensor::from_entries(order, dim, entries).map_err(CliError::Core)
}

/// Reads a vector file.
pub fn read_vector(path: &Path) -> Result<DVector<f64>, CliError> {
    let text = read_to_string(path)?;
    let name = path.display().to_string();
    let perr = |line: usize, msg: String| CliError::Parse {
        path: name.clone(),
        line,
        msg,
    };

    let mut lines = content_lines(&text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| perr(1, "empty file; expected header 'vec <n>'".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 2 || tokens[0] != "vec" {
        return Err(perr(hline, "expected header 'vec <n>'".into()));
    }
    let n: usize = tokens[1]
        .parse()
        .map_err(|_| perr(hline, format!("invalid length '{}'", tokens[1])))?;

    let mut values = Vec::with_capacity(n);
    for (lno, line) in lines {
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| perr(lno, format!("invalid value '{tok}'")))?;
            values.push(v);
        }
    }
    if values.len() != n {
        return Err(perr(
            text.lines().count().max(1),
            format!("expected {n} values, found {}", values.len()),
        ));
    }
    Ok(DVector::from_vec(values))
}

//! Line-oriented text formats.
//!
//! A plain code file starts with the header `q ℓ`, followed by one codeword
//! per line as space-separated symbols. A grouped file starts with
//! `q ℓ g p` and each codeword line is prefixed by its 1-based group index.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use twolevel_core::{Alphabet, Code, Codeword, Symbol, TwoLevelCode};

use crate::CliError;

/// Either kind of file, as detected from the header width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeFile {
    Plain(Code),
    Grouped(TwoLevelCode),
}

impl CodeFile {
    pub fn base(&self) -> &Code {
        match self {
            CodeFile::Plain(c) => c,
            CodeFile::Grouped(g) => g.base(),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line, msg: msg.into() }
}

fn numbers(line: usize, text: &str) -> Result<Vec<u64>, CliError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| parse_err(line, format!("not a non-negative integer: {tok:?}")))
        })
        .collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn to_usize(line: usize, v: u64, what: &str) -> Result<usize, CliError> {
    usize::try_from(v).map_err(|_| parse_err(line, format!("{what} {v} is too large")))
}

fn symbols(line: usize, q: u32, values: &[u64]) -> Result<Codeword, CliError> {
    let word = values
        .iter()
        .map(|&v| {
            if v >= q as u64 {
                Err(parse_err(
                    line,
                    format!("symbol {v} is outside the alphabet of size {q}"),
                ))
            } else {
                Ok(v as Symbol)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Codeword::from(word))
}

pub fn parse(text: &str) -> Result<CodeFile, CliError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let header = numbers(hline, header)?;
    let grouped = match header.len() {
        2 => false,
        4 => true,
        k => return Err(parse_err(hline, format!("header needs 2 or 4 fields, found {k}"))),
    };
    let q = u32::try_from(header[0]).map_err(|_| parse_err(hline, "alphabet size too large"))?;
    let alphabet = Alphabet::new(q)?;
    let len = to_usize(hline, header[1], "word length")?;
    if len == 0 {
        return Err(parse_err(hline, "word length must be positive"));
    }

    let width = len + grouped as usize;
    let mut words = Vec::new();
    let mut labels = Vec::new();
    for (n, line) in lines {
        let values = numbers(n, line)?;
        if values.len() != width {
            return Err(parse_err(n, format!("expected {width} fields, found {}", values.len())));
        }
        let (label, rest) = if grouped {
            (Some(to_usize(n, values[0], "group index")?), &values[1..])
        } else {
            (None, &values[..])
        };
        words.push(symbols(n, q, rest)?);
        labels.extend(label);
    }
    let code = Code::new(alphabet, len, words)?;
    if !grouped {
        return Ok(CodeFile::Plain(code));
    }

    let two = TwoLevelCode::new(code, &labels)?;
    let (g, p) = (
        to_usize(hline, header[2], "group count")?,
        to_usize(hline, header[3], "group size")?,
    );
    if (two.group_count(), two.group_size()) != (g, p) {
        return Err(parse_err(
            hline,
            format!(
                "header declares {g} groups of {p}, body has {} groups of {}",
                two.group_count(),
                two.group_size()
            ),
        ));
    }
    Ok(CodeFile::Grouped(two))
}

fn push_word(out: &mut String, w: &Codeword) {
    let parts: Vec<String> = w.symbols().iter().map(ToString::to_string).collect();
    out.push_str(&parts.join(" "));
    out.push('\n');
}

pub fn render_code(code: &Code) -> String {
    let mut out = format!("{} {}\n", code.alphabet().size(), code.word_len());
    for w in code {
        push_word(&mut out, w);
    }
    out
}

/// Codewords are written in base-code order so a reread gives back the same
/// value.
pub fn render_grouped(code: &TwoLevelCode) -> String {
    let base = code.base();
    let mut out = format!(
        "{} {} {} {}\n",
        base.alphabet().size(),
        base.word_len(),
        code.group_count(),
        code.group_size()
    );
    for (i, w) in base.iter().enumerate() {
        let _ = write!(out, "{} ", code.group_at(i));
        push_word(&mut out, w);
    }
    out
}

pub fn read(path: &Path) -> Result<CodeFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text).map_err(|e| match e {
        CliError::Parse { line, msg } => CliError::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    })
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

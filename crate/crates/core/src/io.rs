//! The file protocol: `.in` input files and one output file per result
//! component (`.gen`, `.sup`, `.typ`, `.equ`, `.cgr`, `.inv`, `.out`).
//!
//! Input grammar, repeated once per matrix:
//!
//! ```text
//! <nrows> <ncols> <entries, row-major> <type>
//! ```
//!
//! where `<type>` is a numeric code or its keyword. Tokens are separated by
//! any whitespace and `#` starts a comment running to the end of the line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::input::{compute_cone, keys, ComputationOptions, InputItem, InputSystem, InputType, InvValue, RationalCone};
use crate::linalg::IntMatrix;

/// On-disk names of the invariants, in the order they are written.
pub const INV_NAMES: [(&str, &str); 12] = [
    (keys::HILBERT_BASIS_ELEMENTS, "hilbert_basis_elements"),
    (keys::NUMBER_EXTREME_RAYS, "number_extreme_rays"),
    (keys::NUMBER_SUPPORT_HYPERPLANES, "number_support_hyperplanes"),
    (keys::RANK, "rank"),
    (keys::INDEX, "index"),
    (keys::HOMOGENEOUS, "homogeneous"),
    (keys::HOMOGENEOUS_WEIGHTS, "homogeneous_weights"),
    (keys::GRADING_DENOMINATOR, "grading_denominator"),
    (keys::HEIGHT_1_ELEMENTS, "height_1_elements"),
    (keys::MULTIPLICITY, "multiplicity"),
    (keys::H_VECTOR, "h_vector"),
    (keys::HILBERT_POLYNOMIAL, "hilbert_polynomial"),
];

fn disk_name(key: &str) -> Option<&'static str> {
    INV_NAMES.iter().find(|(k, _)| *k == key).map(|(_, n)| *n)
}

fn memory_name(name: &str) -> Option<&'static str> {
    INV_NAMES.iter().find(|(_, n)| *n == name).map(|(k, _)| *k)
}

/// Paths belonging to one problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectFiles {
    pub basename: PathBuf,
}

impl ProjectFiles {
    pub const MATRIX_SUFFIXES: [&'static str; 5] = ["gen", "sup", "typ", "equ", "cgr"];

    pub fn new(basename: impl Into<PathBuf>) -> Self {
        ProjectFiles {
            basename: basename.into(),
        }
    }

    /// Basename of an `.in` file.
    pub fn from_input_path(path: &Path) -> Self {
        ProjectFiles::new(path.with_extension(""))
    }

    pub fn with_suffix(&self, suffix: &str) -> PathBuf {
        let mut s = self.basename.clone().into_os_string();
        s.push(".");
        s.push(suffix);
        PathBuf::from(s)
    }

    pub fn input(&self) -> PathBuf {
        self.with_suffix("in")
    }
}

struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .flat_map(|(i, line)| {
                let line = line.split('#').next().unwrap_or("");
                line.split_whitespace().map(move |t| (i + 1, t))
            })
            .collect();
        Tokens { items, pos: 0 }
    }

    fn is_done(&self) -> bool {
        self.pos >= self.items.len()
    }

    fn last_line(&self) -> usize {
        self.items.last().map_or(1, |(l, _)| *l)
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.items.get(self.pos) {
            Some(&t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(Error::parse(self.last_line(), "", format!("unexpected end of input, expected {}", what))),
        }
    }

    fn count(&mut self, what: &str) -> Result<(usize, usize)> {
        let (line, tok) = self.next(what)?;
        let n = tok
            .parse::<usize>()
            .map_err(|_| Error::parse(line, tok, format!("expected {}", what)))?;
        Ok((line, n))
    }

    fn integer(&mut self) -> Result<BigInt> {
        let (line, tok) = self.next("a matrix entry")?;
        parse_integer(tok).ok_or_else(|| Error::parse(line, tok, "expected an integer"))
    }

    fn matrix(&mut self) -> Result<(usize, IntMatrix)> {
        let (line, nrows) = self.count("a row count")?;
        let (_, ncols) = self.count("a column count")?;
        let mut m = IntMatrix::empty(ncols);
        for _ in 0..nrows {
            let row = (0..ncols).map(|_| self.integer()).collect::<Result<Vec<_>>>()?;
            m.push_row(row);
        }
        Ok((line, m))
    }
}

fn parse_integer(tok: &str) -> Option<BigInt> {
    let digits = tok.strip_prefix('-').unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    tok.parse().ok()
}

fn parse_rational(tok: &str) -> Option<BigRational> {
    match tok.split_once('/') {
        Some((n, d)) => {
            let d = parse_integer(d)?;
            if d == BigInt::from(0) || d < BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(parse_integer(n)?, d))
        }
        None => parse_integer(tok).map(BigRational::from_integer),
    }
}

fn write_matrix_rows(out: &mut String, m: &IntMatrix) {
    for row in m.rows() {
        let parts: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
}

/// The `.in` text for an input system.
pub fn format_input(input: &InputSystem) -> String {
    let mut out = String::new();
    for item in &input.items {
        let _ = writeln!(out, "{}", item.matrix.nrows());
        let _ = writeln!(out, "{}", item.matrix.ncols());
        write_matrix_rows(&mut out, &item.matrix);
        let _ = writeln!(out, "{}", item.input_type.code());
    }
    out
}

pub fn parse_input(text: &str) -> Result<InputSystem> {
    let mut tokens = Tokens::new(text);
    if tokens.is_done() {
        return Err(Error::parse(1, "", "input contains no matrix"));
    }
    let mut items = Vec::new();
    let mut dim: Option<usize> = None;
    while !tokens.is_done() {
        let (line, matrix) = tokens.matrix()?;
        let (tline, tok) = tokens.next("an input type")?;
        let input_type = InputType::from_token(tok).ok_or_else(|| Error::parse(tline, tok, "unknown input type"))?;
        let d = if input_type == InputType::Congruences {
            matrix
                .ncols()
                .checked_sub(1)
                .ok_or_else(|| Error::parse(line, "0", "congruences need at least one column"))?
        } else {
            matrix.ncols()
        };
        match dim {
            Some(prev) if prev != d => {
                return Err(Error::parse(
                    line,
                    matrix.ncols().to_string(),
                    format!("matrix is for dimension {} but earlier matrices use {}", d, prev),
                ))
            }
            _ => dim = Some(d),
        }
        items.push(InputItem::new(matrix, input_type));
    }
    let system = InputSystem {
        items,
        ambient_dim: dim.expect("at least one matrix"),
    };
    system.validate().map_err(|e| match e {
        Error::InvalidInput(msg) => Error::parse(tokens.last_line(), "", msg),
        other => other,
    })?;
    Ok(system)
}

pub fn write_input_file(input: &InputSystem, path: &Path) -> Result<()> {
    fs::write(path, format_input(input))?;
    Ok(())
}

pub fn read_input_file(path: &Path) -> Result<InputSystem> {
    parse_input(&fs::read_to_string(path)?)
}

/// `<nrows> <ncols>` followed by one line per row.
pub fn format_matrix(m: &IntMatrix) -> String {
    let mut out = format!("{} {}\n", m.nrows(), m.ncols());
    write_matrix_rows(&mut out, m);
    out
}

pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let mut tokens = Tokens::new(text);
    let (_, m) = tokens.matrix()?;
    if !tokens.is_done() {
        let (line, tok) = tokens.next("")?;
        return Err(Error::parse(line, tok, "unexpected token after the matrix"));
    }
    Ok(m)
}

fn format_inv_value(name: &str, value: &InvValue) -> String {
    match value {
        InvValue::Integer(n) => format!("integer {} = {}", name, n),
        InvValue::Boolean(b) => format!("boolean {} = {}", name, b),
        InvValue::Vector(v) => {
            let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
            format!("vector {} {} = {}", v.len(), name, parts.join(" ")).trim_end().to_string()
        }
        InvValue::Rational(v) => {
            let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
            format!("vector {} {} = {}", v.len(), name, parts.join(" ")).trim_end().to_string()
        }
    }
}

/// The `.inv` text: known invariants in a fixed order, then preserved lines.
pub fn format_inv(rc: &RationalCone) -> String {
    let mut out = String::new();
    for (key, name) in INV_NAMES.iter() {
        if let Some(v) = rc.inv.get(*key) {
            out.push_str(&format_inv_value(name, v));
            out.push('\n');
        }
    }
    for (key, v) in &rc.inv {
        if disk_name(key).is_none() {
            out.push_str(&format_inv_value(&key.replace([' ', '-'], "_"), v));
            out.push('\n');
        }
    }
    for line in &rc.inv_extra {
        out.push_str(line);
        out.push('\n');
    }
    out
}

/// Parses `.inv` text into the invariant map and the lines of unknown kind.
pub fn parse_inv(text: &str) -> Result<(std::collections::BTreeMap<String, InvValue>, Vec<String>)> {
    let mut inv = std::collections::BTreeMap::new();
    let mut extra = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) = match line.split_once('=') {
            Some((l, r)) => (l.trim(), r.trim()),
            None => {
                extra.push(raw.to_string());
                continue;
            }
        };
        let words: Vec<&str> = lhs.split_whitespace().collect();
        let (name, value) = match words.as_slice() {
            ["integer", name] => {
                let n = parse_integer(rhs).ok_or_else(|| Error::parse(line_no, rhs, "expected an integer"))?;
                (*name, InvValue::Integer(n))
            }
            ["boolean", name] => {
                let b = match rhs {
                    "true" => true,
                    "false" => false,
                    _ => return Err(Error::parse(line_no, rhs, "expected true or false")),
                };
                (*name, InvValue::Boolean(b))
            }
            ["vector", len, name] => {
                let len: usize = len
                    .parse()
                    .map_err(|_| Error::parse(line_no, *len, "expected a vector length"))?;
                let toks: Vec<&str> = rhs.split_whitespace().collect();
                if toks.len() != len {
                    return Err(Error::parse(
                        line_no,
                        rhs,
                        format!("vector has {} entries, expected {}", toks.len(), len),
                    ));
                }
                let rational = memory_name(name) == Some(keys::HILBERT_POLYNOMIAL) || toks.iter().any(|t| t.contains('/'));
                let value = if rational {
                    InvValue::Rational(
                        toks.iter()
                            .map(|t| parse_rational(t).ok_or_else(|| Error::parse(line_no, *t, "expected a rational")))
                            .collect::<Result<_>>()?,
                    )
                } else {
                    InvValue::Vector(
                        toks.iter()
                            .map(|t| parse_integer(t).ok_or_else(|| Error::parse(line_no, *t, "expected an integer")))
                            .collect::<Result<_>>()?,
                    )
                };
                (*name, value)
            }
            _ => {
                extra.push(raw.to_string());
                continue;
            }
        };
        let key = memory_name(name).map(str::to_string).unwrap_or_else(|| name.replace('_', " "));
        inv.insert(key, value);
    }
    Ok((inv, extra))
}

/// Human-readable summary; its layout is not part of the protocol.
pub fn format_summary(rc: &RationalCone) -> String {
    let mut out = String::new();
    for (key, name) in INV_NAMES.iter() {
        if let Some(v) = rc.inv.get(*key) {
            let _ = writeln!(out, "{} = {}", name.replace('_', " "), v);
        }
    }
    let sections: [(&str, Option<&IntMatrix>); 5] = [
        ("Hilbert basis", Some(&rc.gen)),
        ("support hyperplanes", rc.sup.as_ref()),
        ("values on the Hilbert basis", rc.typ.as_ref()),
        ("equations", rc.equ.as_ref()),
        ("congruences", rc.cgr.as_ref()),
    ];
    for (title, m) in sections {
        if let Some(m) = m {
            let _ = writeln!(out, "\n{} ({} rows):", title, m.nrows());
            for row in m.rows() {
                let parts: Vec<String> = row.iter().map(|e| format!("{:>4}", e)).collect();
                let _ = writeln!(out, "{}", parts.join(" "));
            }
        }
    }
    out
}

/// Writes every present component; files of absent components are removed
/// so that reading back gives exactly `rc`.
pub fn write_result_files(rc: &RationalCone, files: &ProjectFiles) -> Result<()> {
    let matrices = [
        ("gen", Some(&rc.gen)),
        ("sup", rc.sup.as_ref()),
        ("typ", rc.typ.as_ref()),
        ("equ", rc.equ.as_ref()),
        ("cgr", rc.cgr.as_ref()),
    ];
    for (suffix, m) in matrices {
        let path = files.with_suffix(suffix);
        match m {
            Some(m) => fs::write(&path, format_matrix(m))?,
            None if path.exists() => fs::remove_file(&path)?,
            None => {}
        }
    }
    fs::write(files.with_suffix("inv"), format_inv(rc))?;
    fs::write(files.with_suffix("out"), format_summary(rc))?;
    Ok(())
}

pub fn read_rational_cone(files: &ProjectFiles) -> Result<RationalCone> {
    let read_required = |suffix: &str| -> Result<String> {
        let path = files.with_suffix(suffix);
        if !path.exists() {
            return Err(Error::IncompleteResult(path.display().to_string()));
        }
        Ok(fs::read_to_string(path)?)
    };
    let read_optional = |suffix: &str| -> Result<Option<IntMatrix>> {
        let path = files.with_suffix(suffix);
        if !path.exists() {
            return Ok(None);
        }
        Ok(Some(parse_matrix(&fs::read_to_string(path)?)?))
    };
    let gen = parse_matrix(&read_required("gen")?)?;
    let (inv, inv_extra) = parse_inv(&read_required("inv")?)?;
    Ok(RationalCone {
        gen,
        sup: read_optional("sup")?,
        typ: read_optional("typ")?,
        equ: read_optional("equ")?,
        cgr: read_optional("cgr")?,
        inv,
        inv_extra,
    })
}

/// Runs a computation through files, as an external program would: the
/// input is written to `<basename>.in`, read back, computed, and the result
/// is written and read back. Without a basename the files live in a
/// temporary directory that is removed afterwards.
pub fn compute_via_files(
    input: &InputSystem,
    opts: &ComputationOptions,
    basename: Option<&Path>,
) -> Result<RationalCone> {
    let run = |files: &ProjectFiles| -> Result<RationalCone> {
        write_input_file(input, &files.input())?;
        let parsed = read_input_file(&files.input())?;
        let rc = compute_cone(&parsed, opts)?;
        write_result_files(&rc, files)?;
        read_rational_cone(files)
    };
    match basename {
        Some(b) => run(&ProjectFiles::new(b)),
        None => {
            let dir = tempfile::tempdir()?;
            run(&ProjectFiles::new(dir.path().join("normcone")))
        }
    }
}

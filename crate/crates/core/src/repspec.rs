//! Representation specifications read from TOML:
//!
//! ```toml
//! name = "sl2_natural"
//! dim_v = 2
//! generators = [
//!   [[0, 1], [0, 0]],
//!   [["0", "0"], ["1", "0"]],
//!   [["1/2", 0], [0, "-1/2"]],
//! ]
//! ```
//!
//! Entries are integers or exact rationals written as strings; floats are
//! rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toml::Spanned;

use crate::error::{Error, Result};
use crate::exactalg::{parse_rat, Rat, RatMatrix};
use crate::liestruct::{close_under_bracket, LinearRep};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepSpec {
    pub name: String,
    pub dim_v: usize,
    pub generators: Vec<RatMatrix>,
}

/// A matrix as written in the file, with source spans on rows and entries.
type RawMatrix = Spanned<Vec<Spanned<Vec<Spanned<toml::Value>>>>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: Spanned<String>,
    dim_v: Spanned<i64>,
    #[serde(default)]
    generators: Vec<RawMatrix>,
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn parse_error(path: &str, text: &str, offset: usize, message: impl Into<String>) -> Error {
    let (line, column) = position(text, offset);
    Error::Parse {
        path: path.to_string(),
        line,
        column,
        message: message.into(),
    }
}

impl RepSpec {
    /// Parses a specification; `path` is only used in diagnostics.
    pub fn parse(text: &str, path: &str) -> Result<RepSpec> {
        let raw: RawSpec = toml::from_str(text).map_err(|e| {
            let offset = e.span().map_or(0, |s| s.start);
            parse_error(path, text, offset, e.message().trim().to_string())
        })?;
        let dim_v = *raw.dim_v.get_ref();
        if dim_v < 1 {
            return Err(parse_error(
                path,
                text,
                raw.dim_v.span().start,
                "dim_v must be positive",
            ));
        }
        let dim_v = dim_v as usize;
        let mut generators = Vec::with_capacity(raw.generators.len());
        for (g, gen) in raw.generators.iter().enumerate() {
            let rows = gen.get_ref();
            if rows.len() != dim_v {
                return Err(parse_error(
                    path,
                    text,
                    gen.span().start,
                    format!("generator {g} has {} rows, expected {dim_v}", rows.len()),
                ));
            }
            let mut entries = Vec::with_capacity(dim_v * dim_v);
            for (i, row) in rows.iter().enumerate() {
                if row.get_ref().len() != dim_v {
                    return Err(parse_error(
                        path,
                        text,
                        row.span().start,
                        format!(
                            "row {i} of generator {g} has {} entries, expected {dim_v}",
                            row.get_ref().len()
                        ),
                    ));
                }
                for entry in row.get_ref() {
                    let value = match entry.get_ref() {
                        toml::Value::Integer(x) => Some(Rat::from_integer((*x).into())),
                        toml::Value::String(s) => parse_rat(s.trim()),
                        _ => None,
                    };
                    let value = value.ok_or_else(|| {
                        parse_error(
                            path,
                            text,
                            entry.span().start,
                            format!(
                                "entry {} is not an integer or an exact rational \"p/q\"",
                                entry.get_ref()
                            ),
                        )
                    })?;
                    entries.push(value);
                }
            }
            generators.push(RatMatrix::from_flat(dim_v, dim_v, entries)?);
        }
        Ok(RepSpec {
            name: raw.name.into_inner(),
            dim_v,
            generators,
        })
    }

    pub fn from_file(path: &Path) -> Result<RepSpec> {
        let text = std::fs::read_to_string(path)?;
        RepSpec::parse(&text, &path.display().to_string())
    }

    /// TOML text that parses back to the same specification, entries
    /// written as strings.
    pub fn to_toml(&self) -> String {
        let mut out = format!(
            "name = {}\ndim_v = {}\ngenerators = [\n",
            toml_string(&self.name),
            self.dim_v
        );
        for g in &self.generators {
            let rows: Vec<String> = (0..g.rows())
                .map(|i| {
                    let cells: Vec<String> = g.row(i).iter().map(|x| format!("\"{x}\"")).collect();
                    format!("[{}]", cells.join(", "))
                })
                .collect();
            out.push_str(&format!("  [{}],\n", rows.join(", ")));
        }
        out.push_str("]\n");
        out
    }

    pub fn rep(&self) -> Result<LinearRep> {
        close_under_bracket(&self.generators, self.dim_v)
    }

    /// Hex SHA-256 of the canonical JSON form together with the crate
    /// version, used as a cache key.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("specification serialises");
        let mut hasher = Sha256::new();
        hasher.update(env!("CARGO_PKG_VERSION").as_bytes());
        hasher.update([0u8]);
        hasher.update(json.as_bytes());
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn toml_string(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

//! Constraint specs on the command line:
//!
//! ```text
//! key=A,B          one key
//! fd=A,B->C        a functional dependency
//! keys=A,B;B,C     a key system
//! ```
//!
//! Attributes are referenced by name or by 1-based position.

use spapprox::constraint::{Constraint, FdConstraint, KeySystem};
use spapprox::error::{Error, Result};
use spapprox::table::{AttrSet, Schema};

fn malformed(text: &str, why: &str) -> Error {
    Error::Malformed(format!("constraint `{text}`: {why}"))
}

fn attr_list(schema: &Schema, list: &str, whole: &str) -> Result<AttrSet> {
    let refs: Vec<&str> = list.split(',').map(str::trim).collect();
    if refs.iter().any(|r| r.is_empty()) {
        return Err(malformed(whole, "empty attribute reference"));
    }
    schema.attr_set(&refs)
}

pub fn parse_constraint(schema: &Schema, text: &str) -> Result<Constraint> {
    let (kind, body) = text
        .split_once('=')
        .ok_or_else(|| malformed(text, "expected `key=`, `fd=` or `keys=`"))?;
    match kind.trim() {
        "key" => Ok(Constraint::Key(attr_list(schema, body, text)?)),
        "fd" => {
            let (lhs, rhs) = body
                .split_once("->")
                .ok_or_else(|| malformed(text, "an FD needs `->`"))?;
            Ok(Constraint::Fd(FdConstraint::new(
                attr_list(schema, lhs, text)?,
                attr_list(schema, rhs, text)?,
            )?))
        }
        "keys" => parse_key_system(schema, body).map(Constraint::Keys),
        other => Err(malformed(
            text,
            &format!("unknown constraint kind `{other}`"),
        )),
    }
}

/// `A,B;B,C`, with or without a leading `keys=`.
pub fn parse_key_system(schema: &Schema, text: &str) -> Result<KeySystem> {
    let body = text.trim().strip_prefix("keys=").unwrap_or(text);
    let keys = body
        .split(';')
        .map(|k| attr_list(schema, k, text))
        .collect::<Result<Vec<_>>>()?;
    KeySystem::new(keys)
}

/// A single byte, or `tab` / `\t`.
pub fn parse_delimiter(text: &str) -> std::result::Result<u8, String> {
    match text {
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        _ if text.len() == 1 => Ok(text.as_bytes()[0]),
        _ => Err(format!("delimiter must be a single byte, got `{text}`")),
    }
}

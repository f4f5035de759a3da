use std::fmt;

use crate::error::{Error, Result};
use crate::table::{AttrSet, Schema};

/// `lhs →sp rhs`. Both sides nonempty; they may overlap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdConstraint {
    lhs: AttrSet,
    rhs: AttrSet,
}

impl FdConstraint {
    pub fn new(lhs: AttrSet, rhs: AttrSet) -> Result<Self> {
        if lhs.is_empty() || rhs.is_empty() {
            return Err(Error::EmptyAttributeSet);
        }
        Ok(FdConstraint { lhs, rhs })
    }

    pub fn parse<S: AsRef<str>>(schema: &Schema, lhs: &[S], rhs: &[S]) -> Result<Self> {
        FdConstraint::new(schema.attr_set(lhs)?, schema.attr_set(rhs)?)
    }

    pub fn lhs(&self) -> &AttrSet {
        &self.lhs
    }

    pub fn rhs(&self) -> &AttrSet {
        &self.rhs
    }

    /// `X ∪ Y`: the only attributes satisfaction depends on.
    pub fn attrs(&self) -> AttrSet {
        self.lhs.union(&self.rhs)
    }

    pub fn describe(&self, schema: &Schema) -> String {
        format!(
            "{} -> {}",
            schema.describe(&self.lhs),
            schema.describe(&self.rhs)
        )
    }
}

/// A nonempty list of pairwise distinct nonempty keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeySystem {
    keys: Vec<AttrSet>,
}

impl KeySystem {
    pub fn new(keys: Vec<AttrSet>) -> Result<Self> {
        if keys.is_empty() {
            return Err(Error::EmptyKeySystem);
        }
        for (i, k) in keys.iter().enumerate() {
            if k.is_empty() {
                return Err(Error::EmptyKey);
            }
            if keys[..i].contains(k) {
                return Err(Error::DuplicateKey(format!("{:?}", k.positions())));
            }
        }
        Ok(KeySystem { keys })
    }

    pub fn keys(&self) -> &[AttrSet] {
        &self.keys
    }

    /// Union of all keys.
    pub fn attrs(&self) -> AttrSet {
        self.keys
            .iter()
            .fold(AttrSet::default(), |acc, k| acc.union(k))
    }

    pub fn describe(&self, schema: &Schema) -> String {
        let parts: Vec<String> = self.keys.iter().map(|k| schema.describe(k)).collect();
        format!("[{}]", parts.join(", "))
    }
}

/// Any constraint the engine can decide or measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    Key(AttrSet),
    Fd(FdConstraint),
    Keys(KeySystem),
}

impl Constraint {
    pub fn attrs(&self) -> AttrSet {
        match self {
            Constraint::Key(k) => k.clone(),
            Constraint::Fd(fd) => fd.attrs(),
            Constraint::Keys(ks) => ks.attrs(),
        }
    }

    pub fn describe(&self, schema: &Schema) -> String {
        match self {
            Constraint::Key(k) => format!("key {}", schema.describe(k)),
            Constraint::Fd(fd) => format!("fd {}", fd.describe(schema)),
            Constraint::Keys(ks) => format!("keys {}", ks.describe(schema)),
        }
    }

    pub(crate) fn validate(&self, arity: usize) -> Result<()> {
        match self {
            Constraint::Key(k) if k.is_empty() => Err(Error::EmptyKey),
            c => c.attrs().check(arity),
        }
    }
}

impl fmt::Display for FdConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} -> {:?}",
            self.lhs.positions(),
            self.rhs.positions()
        )
    }
}

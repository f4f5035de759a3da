//! Entry points that dispatch on [`Constraint`].

use std::fmt;
use std::str::FromStr;

use crate::constraint::Constraint;
use crate::error::{Error, Result};
use crate::keysystem;
use crate::measure::{MeasureResult, SearchLimits, Verdict};
use crate::spfd;
use crate::spkey;
use crate::table::Table;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    /// Fraction of rows to remove.
    G3,
    /// Fraction of rows to add.
    G5,
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureKind::G3 => "g3",
            MeasureKind::G5 => "g5",
        })
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g3" => Ok(MeasureKind::G3),
            "g5" => Ok(MeasureKind::G5),
            other => Err(Error::Malformed(format!("unknown measure `{other}`"))),
        }
    }
}

/// Keys ignore `limits`: they are decided in polynomial time.
pub fn check(table: &Table, constraint: &Constraint, limits: SearchLimits) -> Result<Verdict> {
    match constraint {
        Constraint::Key(k) => spkey::check_spkey(table, k),
        Constraint::Fd(fd) => spfd::check_spfd(table, fd, limits),
        Constraint::Keys(ks) => keysystem::check_spkey_system(table, ks, limits),
    }
}

pub fn measure(
    table: &Table,
    constraint: &Constraint,
    kind: MeasureKind,
    limits: SearchLimits,
) -> Result<MeasureResult> {
    match (constraint, kind) {
        (Constraint::Key(k), MeasureKind::G3) => spkey::g3_spkey(table, k),
        (Constraint::Key(k), MeasureKind::G5) => spkey::g5_spkey(table, k),
        (Constraint::Fd(fd), MeasureKind::G3) => spfd::g3_spfd(table, fd, limits),
        (Constraint::Fd(fd), MeasureKind::G5) => spfd::g5_spfd(table, fd, limits),
        (Constraint::Keys(ks), MeasureKind::G3) => keysystem::g3_spkey_system(table, ks, limits),
        (Constraint::Keys(_), MeasureKind::G5) => Err(Error::Unsupported(
            "g5 is not defined for key systems".into(),
        )),
    }
}

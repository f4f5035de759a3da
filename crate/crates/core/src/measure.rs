//! Exact measure values, certificates, fresh symbols and search limits.

use std::collections::HashSet;
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::table::{AttrSet, Symbol, Table, Tuple};

/// Exact non-negative rational. Removal measures live in `[0, 1]`; addition
/// measures may exceed 1 on degenerate inputs.
pub type Rational = Ratio<u64>;

pub fn ratio(numer: u64, denom: u64) -> Rational {
    Ratio::new(numer, denom)
}

/// `p/q` with both parts spelled out, e.g. `0/1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parses `p/q` or a bare integer.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim().parse().ok()?, q.trim().parse().ok()?),
        None => (text.parse().ok()?, 1),
    };
    (q != 0).then(|| Ratio::new(p, q))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Measure {
    Exact(Rational),
    /// No finite number of added tuples repairs the table.
    Undefined,
}

impl Measure {
    pub fn exact(&self) -> Option<Rational> {
        match self {
            Measure::Exact(r) => Some(*r),
            Measure::Undefined => None,
        }
    }

    /// The decision-problem form: is the measure at most `bound`?
    /// Undefined is never within a bound.
    pub fn within(&self, bound: &Rational) -> bool {
        matches!(self, Measure::Exact(r) if r <= bound)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Exact(r) => f.write_str(&format_rational(r)),
            Measure::Undefined => f.write_str("undefined"),
        }
    }
}

/// Chosen total projections for a set of rows: one entry per row index of the
/// (possibly extended) table, values listed in `attrs` order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Witness {
    pub attrs: AttrSet,
    pub rows: Vec<(usize, Vec<Symbol>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    None,
    /// Remove these rows; the witness covers the remaining rows and draws
    /// from the original table's active domains.
    Removal {
        removed: Vec<usize>,
        witness: Witness,
    },
    /// Append these tuples; the witness covers every row of the extended
    /// table (original rows first) and draws from its active domains.
    Addition {
        added: Vec<Tuple>,
        witness: Witness,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// An attribute outside the constraint has an empty active domain, so no
    /// strongly possible world of the whole table exists even though the
    /// constraint's own attributes can be imputed.
    EmptyDomainOutside { attribute: String },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::EmptyDomainOutside { attribute } => write!(
                f,
                "attribute `{attribute}` is NULL everywhere; the table has no strongly possible world, \
                 the verdict only concerns the constraint's attributes"
            ),
        }
    }
}

pub(crate) fn outside_warnings(table: &Table, relevant: &AttrSet) -> Vec<Warning> {
    if table.is_empty() {
        return Vec::new();
    }
    (0..table.schema().len())
        .filter(|&p| !relevant.contains(p))
        .filter(|&p| table.tuples().iter().all(|t| t.get(p).is_null()))
        .map(|p| Warning::EmptyDomainOutside {
            attribute: table.schema().name(p).to_string(),
        })
        .collect()
}

/// Outcome of a satisfaction check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// Present when `holds`: one total projection per row.
    pub witness: Option<Witness>,
    pub warnings: Vec<Warning>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureResult {
    pub value: Measure,
    pub certificate: Certificate,
    pub warnings: Vec<Warning>,
}

/// Generates symbols that do not occur in a given table: a reserved prefix
/// followed by a counter, skipping any token already present.
#[derive(Clone, Debug)]
pub struct FreshSymbols {
    taken: HashSet<String>,
    next: u64,
}

impl FreshSymbols {
    pub const PREFIX: &'static str = "#new";

    pub fn for_table(table: &Table) -> Self {
        FreshSymbols {
            taken: table
                .symbol_universe()
                .into_iter()
                .map(str::to_string)
                .collect(),
            next: 1,
        }
    }

    pub fn next_symbol(&mut self) -> Symbol {
        loop {
            let token = format!("{}{}", Self::PREFIX, self.next);
            self.next += 1;
            if self.taken.insert(token.clone()) {
                return Symbol::new(&token);
            }
        }
    }

    /// A tuple carrying one brand-new symbol in every attribute.
    pub fn fresh_tuple(&mut self, arity: usize) -> Tuple {
        let z = self.next_symbol();
        Tuple::new(vec![crate::table::Value::Sym(z); arity])
    }
}

/// Bounds the exponential searches. `None` means unbounded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchLimits {
    pub node_cap: Option<u64>,
}

impl SearchLimits {
    pub fn capped(nodes: u64) -> Self {
        SearchLimits {
            node_cap: Some(nodes),
        }
    }
}

/// Node counter shared by one search.
#[derive(Debug)]
pub(crate) struct Budget {
    used: u64,
    cap: Option<u64>,
}

impl Budget {
    pub fn new(limits: SearchLimits) -> Self {
        Budget {
            used: 0,
            cap: limits.node_cap,
        }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        match self.cap {
            Some(cap) if self.used > cap => Err(Error::Exhausted { cap }),
            _ => Ok(()),
        }
    }
}

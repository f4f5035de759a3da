//! Active domains and sp-extensions.
//!
//! The active domain of an attribute is the set of distinct non-NULL symbols
//! occurring in its column. An sp-extension of a tuple on an attribute set
//! replaces each NULL by a symbol of that attribute's active domain. Symbols
//! are kept in first-occurrence order, which fixes the order in which
//! extensions are produced.
//!
//! Internally every symbol is addressed by its position in its attribute's
//! active domain (its *code*), so projections are plain `u32` slices.

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::table::{AttrSet, Symbol, Table, Tuple, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveDomains {
    per_attr: Vec<IndexSet<Symbol>>,
}

impl ActiveDomains {
    /// Scans the table once.
    pub fn of(table: &Table) -> Self {
        let mut domains = ActiveDomains {
            per_attr: vec![IndexSet::new(); table.schema().len()],
        };
        for t in table.tuples() {
            domains.absorb(t);
        }
        domains
    }

    /// Adds the non-NULL symbols of `tuple`.
    pub fn absorb(&mut self, tuple: &Tuple) {
        for (set, v) in self.per_attr.iter_mut().zip(tuple.values()) {
            if let Value::Sym(s) = v {
                if !set.contains(s) {
                    set.insert(s.clone());
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.per_attr.len()
    }

    pub fn get(&self, pos: usize) -> &IndexSet<Symbol> {
        &self.per_attr[pos]
    }

    pub fn size(&self, pos: usize) -> usize {
        self.per_attr[pos].len()
    }

    pub fn contains(&self, pos: usize, sym: &Symbol) -> bool {
        self.per_attr[pos].contains(sym)
    }

    pub(crate) fn code(&self, pos: usize, sym: &Symbol) -> Option<u32> {
        self.per_attr[pos].get_index_of(sym).map(|i| i as u32)
    }

    pub(crate) fn symbol(&self, pos: usize, code: u32) -> &Symbol {
        &self.per_attr[pos][code as usize]
    }

    /// Number of sp-extensions of `tuple` on `attrs`: the product of the
    /// active-domain sizes over the NULL positions. Saturates at `u64::MAX`.
    pub fn extension_count(&self, tuple: &Tuple, attrs: &AttrSet) -> u64 {
        attrs
            .iter()
            .filter(|&p| tuple.get(p).is_null())
            .fold(1u64, |acc, p| acc.saturating_mul(self.size(p) as u64))
    }

    /// Lazily yields the sp-extensions of `tuple` on `attrs`.
    pub fn extensions<'a>(&'a self, tuple: &Tuple, attrs: &'a AttrSet) -> Extensions<'a> {
        let pattern = Pattern::of(self, tuple, attrs);
        Extensions {
            domains: self,
            attrs,
            odometer: Odometer::new(&pattern, &self.sizes(attrs)),
        }
    }

    /// Decodes a coded projection back into symbols.
    pub(crate) fn decode(&self, attrs: &AttrSet, codes: &[u32]) -> Vec<Symbol> {
        attrs
            .iter()
            .zip(codes)
            .map(|(p, &c)| self.symbol(p, c).clone())
            .collect()
    }

    pub(crate) fn sizes(&self, attrs: &AttrSet) -> Vec<u32> {
        attrs.iter().map(|p| self.size(p) as u32).collect()
    }
}

pub fn active_domains(table: &Table) -> ActiveDomains {
    ActiveDomains::of(table)
}

/// Number of sp-extensions of tuple `index` on `attrs` in `table`.
pub fn extension_count(table: &Table, index: usize, attrs: &AttrSet) -> Result<u64> {
    attrs.check(table.schema().len())?;
    let tuple = table.tuple(index)?;
    Ok(ActiveDomains::of(table).extension_count(tuple, attrs))
}

/// Streams the sp-extensions of tuple `index` on `attrs`, using `domains`
/// (normally `ActiveDomains::of(table)`).
pub fn enumerate_extensions<'a>(
    domains: &'a ActiveDomains,
    table: &Table,
    index: usize,
    attrs: &'a AttrSet,
) -> Result<Extensions<'a>> {
    attrs.check(table.schema().len())?;
    let tuple = table.tuple(index)?;
    Ok(domains.extensions(tuple, attrs))
}

pub struct Extensions<'a> {
    domains: &'a ActiveDomains,
    attrs: &'a AttrSet,
    odometer: Odometer,
}

impl Iterator for Extensions<'_> {
    type Item = Vec<Symbol>;

    fn next(&mut self) -> Option<Vec<Symbol>> {
        let codes = self.odometer.next()?;
        Some(self.domains.decode(self.attrs, codes))
    }
}

/// A sub-bag of a table whose NULLs are imputed from a fixed set of active
/// domains. Removal measures evaluate the kept rows against the original
/// table's domains, which is what this captures.
#[derive(Clone, Copy, Debug)]
pub struct View<'a> {
    pub table: &'a Table,
    pub rows: &'a [usize],
    pub domains: &'a ActiveDomains,
}

impl<'a> View<'a> {
    /// Every row of `rows` must be a valid index of `table`, and `domains`
    /// must contain every non-NULL symbol of those rows.
    pub fn new(table: &'a Table, rows: &'a [usize], domains: &'a ActiveDomains) -> Result<Self> {
        for &r in rows {
            let t = table.tuple(r)?;
            for (p, v) in t.values().iter().enumerate() {
                if let Value::Sym(s) = v {
                    if !domains.contains(p, s) {
                        return Err(Error::Unsupported(format!(
                            "row {r} holds `{s}` which is outside the supplied active domain"
                        )));
                    }
                }
            }
        }
        Ok(View {
            table,
            rows,
            domains,
        })
    }

    pub(crate) fn patterns(&self, attrs: &AttrSet) -> Vec<Pattern> {
        self.rows
            .iter()
            .map(|&r| Pattern::of(self.domains, &self.table.tuples()[r], attrs))
            .collect()
    }
}

/// A tuple's projection on an attribute set in code form; `None` is NULL.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Pattern(pub Vec<Option<u32>>);

impl Pattern {
    /// Panics if a non-NULL symbol is missing from `domains`; callers build
    /// domains that cover every row they encode.
    pub fn of(domains: &ActiveDomains, tuple: &Tuple, attrs: &AttrSet) -> Self {
        Pattern(
            attrs
                .iter()
                .map(|p| match tuple.get(p) {
                    Value::Null => None,
                    Value::Sym(s) => Some(
                        domains
                            .code(p, s)
                            .expect("active domains cover every symbol of the rows they encode"),
                    ),
                })
                .collect(),
        )
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    pub fn count(&self, sizes: &[u32]) -> u64 {
        self.0
            .iter()
            .zip(sizes)
            .filter(|(c, _)| c.is_none())
            .fold(1u64, |acc, (_, &s)| acc.saturating_mul(s as u64))
    }
}

/// Mixed-radix counter over the NULL positions of a pattern. The first NULL
/// position is the most significant digit.
#[derive(Clone, Debug)]
pub(crate) struct Odometer {
    current: Vec<u32>,
    free: Vec<usize>,
    radix: Vec<u32>,
    state: OdoState,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum OdoState {
    Fresh,
    Running,
    Done,
}

impl Odometer {
    pub fn new(pattern: &Pattern, sizes: &[u32]) -> Self {
        let mut current = Vec::with_capacity(pattern.0.len());
        let mut free = Vec::new();
        let mut radix = Vec::new();
        for (i, (c, &s)) in pattern.0.iter().zip(sizes).enumerate() {
            match c {
                Some(code) => current.push(*code),
                None => {
                    current.push(0);
                    free.push(i);
                    radix.push(s);
                }
            }
        }
        let state = if radix.contains(&0) {
            OdoState::Done
        } else {
            OdoState::Fresh
        };
        Odometer {
            current,
            free,
            radix,
            state,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<&[u32]> {
        match self.state {
            OdoState::Done => return None,
            OdoState::Fresh => self.state = OdoState::Running,
            OdoState::Running => {
                let mut k = self.free.len();
                loop {
                    if k == 0 {
                        self.state = OdoState::Done;
                        return None;
                    }
                    k -= 1;
                    let slot = self.free[k];
                    self.current[slot] += 1;
                    if self.current[slot] < self.radix[k] {
                        break;
                    }
                    self.current[slot] = 0;
                }
            }
        }
        Some(&self.current)
    }
}

//! Brute-force ground truth for tiny tables.
//!
//! Nothing here shares code with the fast paths beyond the table model.
//! Worlds are built from symbols directly, removal sets are enumerated by
//! size, and additions are enumerated over a wider candidate space than the
//! FD search uses (old values are allowed in every column).
//!
//! Satisfaction only looks at the constraint's attributes, the same policy
//! as the fast paths: a world of those attributes exists iff a world of the
//! table does, unless some other column is NULL everywhere.

use std::collections::HashSet;

use crate::constraint::Constraint;
use crate::domains::ActiveDomains;
use crate::error::{Error, Result};
use crate::measure::{ratio, FreshSymbols, Rational};
use crate::table::{AttrSet, Symbol, Table, Tuple, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Most worlds [`enumerate_spworlds`] agrees to stream.
    pub world_cap: u128,
    /// Most partial worlds a single satisfaction check may visit.
    pub node_cap: u64,
    /// Most candidate added sets tried per size in FD g5.
    pub candidate_cap: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            world_cap: 10_000_000,
            node_cap: 20_000_000,
            candidate_cap: 200_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleG5 {
    Exact(Rational),
    /// No addition of up to `searched_to` rows works and a forced
    /// violation exists.
    Undefined {
        searched_to: usize,
    },
    /// The candidate space outgrew the cap; no addition of fewer than
    /// `no_solution_below` rows works.
    Inconclusive {
        no_solution_below: usize,
    },
    /// Nothing up to the bound works, yet no forced violation explains it.
    Unrepaired {
        bound: usize,
    },
}

/// Streams every strongly possible world of a table.
pub struct SpWorlds {
    base: Vec<Vec<Symbol>>,
    cells: Vec<(usize, usize)>,
    choices: Vec<Vec<Symbol>>,
    digits: Vec<usize>,
    schema: Table,
    state: Option<bool>,
}

pub fn enumerate_spworlds(table: &Table, config: &OracleConfig) -> Result<SpWorlds> {
    let domains = ActiveDomains::of(table);
    let mut cells = Vec::new();
    let mut choices = Vec::new();
    let mut count: u128 = 1;
    for (r, t) in table.tuples().iter().enumerate() {
        for (a, v) in t.values().iter().enumerate() {
            if v.is_null() {
                let options: Vec<Symbol> = domains.get(a).iter().cloned().collect();
                count = count.saturating_mul(options.len() as u128);
                cells.push((r, a));
                choices.push(options);
            }
        }
    }
    if count > config.world_cap {
        return Err(Error::SizeGuard {
            count,
            cap: config.world_cap,
        });
    }
    let base = table
        .tuples()
        .iter()
        .map(|t| {
            t.values()
                .iter()
                .map(|v| v.symbol().cloned().unwrap_or_else(|| Symbol::new("")))
                .collect()
        })
        .collect();
    Ok(SpWorlds {
        base,
        digits: vec![0; cells.len()],
        state: if count == 0 { None } else { Some(false) },
        cells,
        choices,
        schema: Table::empty(table.schema().clone()),
    })
}

impl Iterator for SpWorlds {
    type Item = Table;

    fn next(&mut self) -> Option<Table> {
        let started = self.state?;
        if started {
            let mut k = self.digits.len();
            loop {
                if k == 0 {
                    self.state = None;
                    return None;
                }
                k -= 1;
                self.digits[k] += 1;
                if self.digits[k] < self.choices[k].len() {
                    break;
                }
                self.digits[k] = 0;
            }
        }
        self.state = Some(true);
        let mut rows = self.base.clone();
        for (i, &(r, a)) in self.cells.iter().enumerate() {
            rows[r][a] = self.choices[i][self.digits[i]].clone();
        }
        let tuples = rows
            .into_iter()
            .map(|r| Tuple::new(r.into_iter().map(Value::Sym).collect()))
            .collect();
        Some(Table::new(self.schema.schema().clone(), tuples).expect("worlds keep the arity"))
    }
}

/// Pairwise classical test on projections to `attrs`.
struct Classical {
    attrs: AttrSet,
    /// For keys: one index list per key. For FDs: `[lhs, rhs]`.
    parts: Vec<Vec<usize>>,
    fd: bool,
}

impl Classical {
    fn new(c: &Constraint) -> Self {
        let attrs = c.attrs();
        let idx = |s: &AttrSet| s.iter().map(|p| attrs.rank(p).unwrap()).collect::<Vec<_>>();
        let (parts, fd) = match c {
            Constraint::Key(k) => (vec![idx(k)], false),
            Constraint::Keys(ks) => (ks.keys().iter().map(idx).collect(), false),
            Constraint::Fd(f) => (vec![idx(f.lhs()), idx(f.rhs())], true),
        };
        Classical { attrs, parts, fd }
    }

    fn compatible(&self, a: &[Symbol], b: &[Symbol]) -> bool {
        let eq = |idx: &[usize]| idx.iter().all(|&i| a[i] == b[i]);
        if self.fd {
            !eq(&self.parts[0]) || eq(&self.parts[1])
        } else {
            self.parts.iter().all(|k| !eq(k))
        }
    }
}

/// Depth-first over rows; each row tries every completion of its NULLs from
/// `domains` and must be compatible with all earlier rows.
fn exists_world(
    rows: &[&Tuple],
    test: &Classical,
    domains: &[Vec<Symbol>],
    nodes: &mut u64,
    cap: u64,
) -> Result<bool> {
    fn completions(t: &Tuple, attrs: &AttrSet, domains: &[Vec<Symbol>]) -> Vec<Vec<Symbol>> {
        let mut out: Vec<Vec<Symbol>> = vec![Vec::new()];
        for (i, p) in attrs.iter().enumerate() {
            let options: Vec<Symbol> = match t.get(p) {
                Value::Sym(s) => vec![s.clone()],
                Value::Null => domains[i].clone(),
            };
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |s| {
                        let mut next = prefix.clone();
                        next.push(s.clone());
                        next
                    })
                })
                .collect();
        }
        out
    }

    fn go(
        k: usize,
        rows: &[&Tuple],
        test: &Classical,
        domains: &[Vec<Symbol>],
        placed: &mut Vec<Vec<Symbol>>,
        nodes: &mut u64,
        cap: u64,
    ) -> Result<bool> {
        if k == rows.len() {
            return Ok(true);
        }
        for world_row in completions(rows[k], &test.attrs, domains) {
            *nodes += 1;
            if *nodes > cap {
                return Err(Error::SizeGuard {
                    count: *nodes as u128,
                    cap: cap as u128,
                });
            }
            if placed.iter().all(|p| test.compatible(p, &world_row)) {
                placed.push(world_row);
                if go(k + 1, rows, test, domains, placed, nodes, cap)? {
                    return Ok(true);
                }
                placed.pop();
            }
        }
        Ok(false)
    }

    go(0, rows, test, domains, &mut Vec::new(), nodes, cap)
}

fn domain_lists(table: &Table, attrs: &AttrSet) -> Vec<Vec<Symbol>> {
    attrs
        .iter()
        .map(|p| {
            let mut seen = HashSet::new();
            table
                .tuples()
                .iter()
                .filter_map(|t| t.get(p).symbol())
                .filter(|s| seen.insert((*s).clone()))
                .cloned()
                .collect()
        })
        .collect()
}

fn check_rows(
    rows: &[&Tuple],
    test: &Classical,
    domains: &[Vec<Symbol>],
    config: &OracleConfig,
) -> Result<bool> {
    // rows with fewer completions first, so clashes among total rows show
    // up before any branching
    let mut ordered = rows.to_vec();
    ordered.sort_by_cached_key(|t| {
        test.attrs
            .iter()
            .zip(domains)
            .filter(|(p, _)| t.get(*p).is_null())
            .map(|(_, d)| d.len() as u128)
            .product::<u128>()
    });
    let mut nodes = 0;
    exists_world(&ordered, test, domains, &mut nodes, config.node_cap)
}

pub fn oracle_check(table: &Table, constraint: &Constraint, config: &OracleConfig) -> Result<bool> {
    constraint.validate(table.schema().len())?;
    let test = Classical::new(constraint);
    let domains = domain_lists(table, &test.attrs);
    let rows: Vec<&Tuple> = table.tuples().iter().collect();
    check_rows(&rows, &test, &domains, config)
}

/// Smallest removal set, trying sets in order of size. Kept rows are
/// imputed from the whole table's active domains.
pub fn oracle_g3(
    table: &Table,
    constraint: &Constraint,
    config: &OracleConfig,
) -> Result<Rational> {
    Ok(oracle_g3_with_set(table, constraint, config)?.0)
}

pub fn oracle_g3_with_set(
    table: &Table,
    constraint: &Constraint,
    config: &OracleConfig,
) -> Result<(Rational, Vec<usize>)> {
    constraint.validate(table.schema().len())?;
    let m = table.len();
    if m == 0 {
        return Ok((ratio(0, 1), Vec::new()));
    }
    if m > 24 {
        return Err(Error::SizeGuard {
            count: 1u128 << m.min(127),
            cap: 1 << 24,
        });
    }
    let test = Classical::new(constraint);
    let domains = domain_lists(table, &test.attrs);
    let mut masks: Vec<u32> = (0..1u32 << m).collect();
    masks.sort_by_key(|mask| (mask.count_ones(), *mask));
    for mask in masks {
        let kept: Vec<&Tuple> = (0..m)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| &table.tuples()[i])
            .collect();
        if check_rows(&kept, &test, &domains, config)? {
            let removed = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            return Ok((ratio(mask.count_ones() as u64, m as u64), removed));
        }
    }
    unreachable!("removing every row always satisfies the constraint")
}

/// A row equal on X and total there, conflicting on a non-NULL Y value.
fn forced_fd_violation(table: &Table, lhs: &AttrSet, rhs: &AttrSet) -> bool {
    let rows = table.tuples();
    (0..rows.len()).any(|i| {
        (i + 1..rows.len()).any(|j| {
            let (a, b) = (&rows[i], &rows[j]);
            lhs.iter()
                .all(|p| !a.get(p).is_null() && a.get(p) == b.get(p))
                && rhs
                    .iter()
                    .any(|p| !a.get(p).is_null() && !b.get(p).is_null() && a.get(p) != b.get(p))
        })
    })
}

/// Two rows total and equal on K, or a NULL on a single-attribute key.
fn forced_key_violation(table: &Table, key: &AttrSet) -> bool {
    let rows = table.tuples();
    let total = |t: &Tuple| key.iter().all(|p| !t.get(p).is_null());
    let dup = (0..rows.len()).any(|i| {
        (i + 1..rows.len()).any(|j| {
            total(&rows[i])
                && total(&rows[j])
                && key.iter().all(|p| rows[i].get(p) == rows[j].get(p))
        })
    });
    dup || (key.len() == 1 && rows.iter().any(|t| !total(t)))
}

/// Smallest addition. Keys add all-fresh rows; FDs try every canonical set
/// of added rows over old values and new labels.
pub fn oracle_g5(
    table: &Table,
    constraint: &Constraint,
    config: &OracleConfig,
) -> Result<OracleG5> {
    constraint.validate(table.schema().len())?;
    let m = table.len();
    if m == 0 {
        return Ok(OracleG5::Exact(ratio(0, 1)));
    }
    match constraint {
        Constraint::Keys(_) => Err(Error::Unsupported(
            "g5 is not defined for key systems".into(),
        )),
        Constraint::Key(key) => {
            let non_total = table
                .tuples()
                .iter()
                .filter(|t| !t.is_total_on(key))
                .count();
            let bound = if non_total == 0 { 0 } else { non_total + 1 };
            let test = Classical::new(constraint);
            for p in 0..=bound {
                let mut fresh = FreshSymbols::for_table(table);
                let added: Vec<Tuple> = (0..p)
                    .map(|_| fresh.fresh_tuple(table.schema().len()))
                    .collect();
                let extended = table.with_appended(&added)?;
                let domains = domain_lists(&extended, &test.attrs);
                let rows: Vec<&Tuple> = extended.tuples().iter().collect();
                match check_rows(&rows, &test, &domains, config) {
                    Ok(true) => return Ok(OracleG5::Exact(ratio(p as u64, m as u64))),
                    Ok(false) => {}
                    Err(Error::SizeGuard { .. }) => {
                        return Ok(OracleG5::Inconclusive {
                            no_solution_below: p,
                        })
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(if forced_key_violation(table, key) {
                OracleG5::Undefined { searched_to: bound }
            } else {
                OracleG5::Unrepaired { bound }
            })
        }
        Constraint::Fd(fd) => {
            let bound = table
                .tuples()
                .iter()
                .filter(|t| !t.is_total_on(fd.lhs()))
                .count()
                .max(1);
            let test = Classical::new(constraint);
            let old = domain_lists(table, &test.attrs);
            for p in 0..=bound {
                match fd_addition_exists(table, &test, &old, p, config) {
                    Ok(true) => return Ok(OracleG5::Exact(ratio(p as u64, m as u64))),
                    Ok(false) => {}
                    Err(Error::SizeGuard { .. }) => {
                        return Ok(if forced_fd_violation(table, fd.lhs(), fd.rhs()) {
                            OracleG5::Undefined {
                                searched_to: p.saturating_sub(1),
                            }
                        } else {
                            OracleG5::Inconclusive {
                                no_solution_below: p,
                            }
                        })
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(if forced_fd_violation(table, fd.lhs(), fd.rhs()) {
                OracleG5::Undefined { searched_to: bound }
            } else {
                OracleG5::Unrepaired { bound }
            })
        }
    }
}

/// Checks one complete candidate: the added rows and the labels used per column.
type Finish<'a> = dyn FnMut(&[Vec<Cell>], &[usize]) -> Result<bool> + 'a;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Cell {
    Old(usize),
    New(usize),
}

/// Is there a set of `p` added rows (on the constraint's attributes) after
/// which the FD holds? New labels are numbered by first use per column and
/// rows are listed in non-decreasing order with all labels ranking equal.
fn fd_addition_exists(
    table: &Table,
    test: &Classical,
    old: &[Vec<Symbol>],
    p: usize,
    config: &OracleConfig,
) -> Result<bool> {
    let width = old.len();
    let labels: Vec<Vec<Symbol>> = {
        let mut fresh = FreshSymbols::for_table(table);
        (0..width)
            .map(|_| (0..p).map(|_| fresh.next_symbol()).collect())
            .collect()
    };
    let rank = |c: &Cell| match c {
        Cell::Old(i) => *i,
        Cell::New(_) => usize::MAX,
    };
    let mut candidates = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn go(
        rows: &mut Vec<Vec<Cell>>,
        used: Vec<usize>,
        p: usize,
        old: &[Vec<Symbol>],
        rank: &dyn Fn(&Cell) -> usize,
        candidates: &mut u64,
        finish: &mut Finish<'_>,
        cap: u64,
    ) -> Result<bool> {
        if rows.len() == p {
            *candidates += 1;
            if *candidates > cap {
                return Err(Error::SizeGuard {
                    count: *candidates as u128,
                    cap: cap as u128,
                });
            }
            return finish(rows, &used);
        }
        let mut row: Vec<Vec<Cell>> = vec![Vec::new()];
        for (i, dom) in old.iter().enumerate() {
            let options: Vec<Cell> = (0..dom.len())
                .map(Cell::Old)
                .chain((0..=used[i].min(p - 1)).map(Cell::New))
                .collect();
            row = row
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |c| {
                        let mut next = prefix.clone();
                        next.push(*c);
                        next
                    })
                })
                .collect();
        }
        for r in row {
            if let Some(prev) = rows.last() {
                let key = |x: &[Cell]| x.iter().map(rank).collect::<Vec<_>>();
                if key(&r) < key(prev) {
                    continue;
                }
            }
            let next_used: Vec<usize> = used
                .iter()
                .zip(&r)
                .map(|(&u, c)| match c {
                    Cell::New(k) => u.max(k + 1),
                    Cell::Old(_) => u,
                })
                .collect();
            rows.push(r);
            let found = go(rows, next_used, p, old, rank, candidates, finish, cap)?;
            rows.pop();
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }

    let mut finish = |rows: &[Vec<Cell>], used: &[usize]| -> Result<bool> {
        let added: Vec<Tuple> = rows
            .iter()
            .map(|r| {
                let mut values = vec![Value::Null; table.schema().len()];
                for (i, (p, c)) in test.attrs.iter().zip(r).enumerate() {
                    values[p] = Value::Sym(match c {
                        Cell::Old(k) => old[i][*k].clone(),
                        Cell::New(k) => labels[i][*k].clone(),
                    });
                }
                Tuple::new(values)
            })
            .collect();
        let domains: Vec<Vec<Symbol>> = old
            .iter()
            .zip(&labels)
            .zip(used)
            .map(|((o, l), &u)| o.iter().chain(&l[..u]).cloned().collect())
            .collect();
        let mut all: Vec<&Tuple> = table.tuples().iter().collect();
        all.extend(added.iter());
        check_rows(&all, test, &domains, config)
    };
    go(
        &mut Vec::new(),
        vec![0; width],
        p,
        old,
        &rank,
        &mut candidates,
        &mut finish,
        config.candidate_cap,
    )
}

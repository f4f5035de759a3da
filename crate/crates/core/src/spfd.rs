//! Strongly possible functional dependencies `X →sp Y`.
//!
//! Deciding satisfaction is NP-complete, and so are both measures, so every
//! operation here is an exact search with an optional node cap. Only the
//! attributes of `Z = X ∪ Y` matter; each row is assigned a total
//! Z-projection among its extensions, and the assignments must induce a
//! function from X-projections to Y-projections.
//!
//! Rows with identical Z-patterns are searched as one group: giving all of
//! them the same projection never hurts an FD, and for removal a group is
//! either kept whole or dropped whole.
//!
//! For g5 the added rows range over canonical forms. An added row that holds
//! an old value in some X column can trade it for a private new value, which
//! makes its X-projection unique without losing any value the table still
//! needs. So added rows carry only new values in X columns, new values are
//! numbered in order of first use per column, and rows are kept in
//! non-decreasing order of their old Y values.

use std::collections::HashMap;

use crate::constraint::FdConstraint;
use crate::domains::{ActiveDomains, Odometer, Pattern, View};
use crate::error::Result;
use crate::measure::{
    outside_warnings, ratio, Budget, Certificate, FreshSymbols, Measure, MeasureResult,
    SearchLimits, Verdict, Witness,
};
use crate::search::{group, max_kept, satisfy, Group, Placement};
use crate::table::{AttrSet, Symbol, Table, Tuple, Value};

/// Where X and Y sit inside `Z = X ∪ Y`.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub z: AttrSet,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl Layout {
    pub fn new(fd: &FdConstraint) -> Self {
        let z = fd.attrs();
        let x = fd.lhs().iter().map(|p| z.rank(p).unwrap()).collect();
        let y = fd.rhs().iter().map(|p| z.rank(p).unwrap()).collect();
        Layout { z, x, y }
    }

    fn pick(idx: &[usize], code: &[u32]) -> Box<[u32]> {
        idx.iter().map(|&i| code[i]).collect()
    }
}

type Code = Box<[u32]>;

/// X-projection to forced Y-projection, with reference counts for undo.
struct FdMap<'a> {
    lay: &'a Layout,
    forced: HashMap<Code, (Code, usize)>,
}

impl<'a> FdMap<'a> {
    fn new(lay: &'a Layout) -> Self {
        FdMap {
            lay,
            forced: HashMap::new(),
        }
    }
}

impl Placement for FdMap<'_> {
    fn place(&mut self, code: &[u32]) -> bool {
        let lay = self.lay;
        let x = Layout::pick(&lay.x, code);
        let y = Layout::pick(&lay.y, code);
        match self.forced.get_mut(&x) {
            Some((fy, n)) if *fy == y => {
                *n += 1;
                true
            }
            Some(_) => false,
            None => {
                self.forced.insert(x, (y, 1));
                true
            }
        }
    }

    fn unplace(&mut self, code: &[u32]) {
        let x = Layout::pick(&self.lay.x, code);
        let entry = self.forced.get_mut(&x).expect("placed before");
        entry.1 -= 1;
        if entry.1 == 0 {
            self.forced.remove(&x);
        }
    }
}

fn validate(table: &Table, fd: &FdConstraint) -> Result<()> {
    fd.attrs().check(table.schema().len())
}

fn witness(
    z: &AttrSet,
    rows: &[usize],
    groups: &[Group],
    chosen: &[Option<Box<[u32]>>],
    decode: impl Fn(&[u32]) -> Vec<Symbol>,
) -> Witness {
    let mut out: Vec<(usize, Vec<Symbol>)> = Vec::new();
    for (g, c) in groups.iter().zip(chosen) {
        if let Some(code) = c {
            let syms = decode(code);
            out.extend(g.members.iter().map(|&pos| (rows[pos], syms.clone())));
        }
    }
    out.sort_by_key(|(r, _)| *r);
    Witness {
        attrs: z.clone(),
        rows: out,
    }
}

/// Decides the FD on a view.
pub fn check_spfd_in(view: &View<'_>, fd: &FdConstraint, limits: SearchLimits) -> Result<Verdict> {
    validate(view.table, fd)?;
    let lay = Layout::new(fd);
    let groups = group(view.patterns(&lay.z));
    let sizes = view.domains.sizes(&lay.z);
    let mut budget = Budget::new(limits);
    let found = satisfy(&groups, &sizes, &mut FdMap::new(&lay), &mut budget)?;
    Ok(Verdict {
        holds: found.is_some(),
        witness: found.map(|chosen| {
            let chosen: Vec<_> = chosen.into_iter().map(Some).collect();
            witness(&lay.z, view.rows, &groups, &chosen, |c| {
                view.domains.decode(&lay.z, c)
            })
        }),
        warnings: Vec::new(),
    })
}

pub fn check_spfd(table: &Table, fd: &FdConstraint, limits: SearchLimits) -> Result<Verdict> {
    validate(table, fd)?;
    let domains = ActiveDomains::of(table);
    let rows: Vec<usize> = (0..table.len()).collect();
    let mut verdict = check_spfd_in(&View::new(table, &rows, &domains)?, fd, limits)?;
    verdict.warnings = outside_warnings(table, &fd.attrs());
    Ok(verdict)
}

/// Minimum removals; kept rows are imputed from the whole table's active
/// domains.
pub fn g3_spfd(table: &Table, fd: &FdConstraint, limits: SearchLimits) -> Result<MeasureResult> {
    validate(table, fd)?;
    let lay = Layout::new(fd);
    let warnings = outside_warnings(table, &lay.z);
    let m = table.len();
    let domains = ActiveDomains::of(table);
    let rows: Vec<usize> = (0..m).collect();
    let view = View::new(table, &rows, &domains)?;
    let groups = group(view.patterns(&lay.z));
    let sizes = domains.sizes(&lay.z);
    let mut budget = Budget::new(limits);
    let chosen = max_kept(&groups, &sizes, &mut FdMap::new(&lay), None, &mut budget)?;

    let mut removed: Vec<usize> = groups
        .iter()
        .zip(&chosen)
        .filter(|(_, c)| c.is_none())
        .flat_map(|(g, _)| g.members.iter().copied())
        .collect();
    removed.sort_unstable();
    Ok(MeasureResult {
        value: Measure::Exact(ratio(removed.len() as u64, m.max(1) as u64)),
        certificate: Certificate::Removal {
            witness: witness(&lay.z, &rows, &groups, &chosen, |c| {
                domains.decode(&lay.z, c)
            }),
            removed,
        },
        warnings,
    })
}

/// A pair of X-total rows equal on X and conflicting on a non-NULL Y value.
/// Such a pair violates the FD in every world of every extension.
pub fn g5_spfd_obstruction(table: &Table, fd: &FdConstraint) -> Option<(usize, usize)> {
    let mut by_x: HashMap<Vec<&Value>, Vec<usize>> = HashMap::new();
    for (i, t) in table.tuples().iter().enumerate() {
        if t.is_total_on(fd.lhs()) {
            by_x.entry(fd.lhs().iter().map(|p| t.get(p)).collect())
                .or_default()
                .push(i);
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for members in by_x.values() {
        for a in 0..members.len() {
            for b in a + 1..members.len() {
                let (ta, tb) = (&table.tuples()[members[a]], &table.tuples()[members[b]]);
                let clash = fd.rhs().iter().any(|p| {
                    let (va, vb) = (ta.get(p), tb.get(p));
                    !va.is_null() && !vb.is_null() && va != vb
                });
                if clash {
                    pairs.push((members[a], members[b]));
                }
            }
        }
    }
    pairs.into_iter().min()
}

/// Largest number of added rows the g5 search tries: one per non-X-total
/// row, and at least one so that all-NULL Y columns can get a value.
pub fn g5_spfd_search_bound(table: &Table, fd: &FdConstraint) -> usize {
    table
        .tuples()
        .iter()
        .filter(|t| !t.is_total_on(fd.lhs()))
        .count()
        .max(1)
}

struct AddFrame {
    odo: Odometer,
    row: Vec<u32>,
    used: Vec<u32>,
}

/// Canonical added rows in code form. A code `c` in Z-position `i` is an
/// old symbol when `c < old[i]`, otherwise new label `c − old[i]`.
struct Additions<'a> {
    lay: &'a Layout,
    old: &'a [u32],
    in_x: Vec<bool>,
    p: usize,
}

impl Additions<'_> {
    fn radices(&self, used: &[u32]) -> Vec<u32> {
        used.iter()
            .enumerate()
            .map(|(i, &u)| {
                let labels = (u + 1).min(self.p as u32);
                if self.in_x[i] {
                    labels
                } else {
                    self.old[i] + labels
                }
            })
            .collect()
    }

    fn decode(&self, digits: &[u32]) -> Vec<u32> {
        digits
            .iter()
            .enumerate()
            .map(|(i, &d)| if self.in_x[i] { self.old[i] + d } else { d })
            .collect()
    }

    /// Old Y values, with every new label ranked after all old ones.
    fn key(&self, row: &[u32]) -> Vec<u32> {
        row.iter()
            .enumerate()
            .filter(|&(i, _)| !self.in_x[i])
            .map(|(i, &c)| c.min(self.old[i]))
            .collect()
    }

    fn used_after(&self, used: &[u32], row: &[u32]) -> Vec<u32> {
        used.iter()
            .zip(row)
            .zip(self.old)
            .map(|((&u, &c), &o)| if c >= o { u.max(c - o + 1) } else { u })
            .collect()
    }

    /// Calls `probe` on every canonical list of `p` added rows until it
    /// returns `Some`.
    fn search<R>(
        &self,
        budget: &mut Budget,
        mut probe: impl FnMut(&[Vec<u32>], &[u32], &mut Budget) -> Result<Option<R>>,
    ) -> Result<Option<(Vec<Vec<u32>>, R)>> {
        let width = self.lay.z.len();
        let start = vec![0u32; width];
        let mut frames = vec![AddFrame {
            odo: Odometer::new(&Pattern(vec![None; width]), &self.radices(&start)),
            row: Vec::new(),
            used: start,
        }];
        while let Some(top) = frames.last_mut() {
            let digits: Vec<u32> = match top.odo.next() {
                None => {
                    frames.pop();
                    continue;
                }
                Some(d) => d.to_vec(),
            };
            budget.tick()?;
            let row = self.decode(&digits);
            let depth = frames.len();
            if depth >= 2 && self.key(&row) < self.key(&frames[depth - 2].row) {
                continue;
            }
            let used = self.used_after(&frames[depth - 1].used, &row);
            frames[depth - 1].row = row;
            if depth == self.p {
                let rows: Vec<Vec<u32>> = frames.iter().map(|f| f.row.clone()).collect();
                if let Some(r) = probe(&rows, &used, budget)? {
                    return Ok(Some((rows, r)));
                }
            } else {
                frames.push(AddFrame {
                    odo: Odometer::new(&Pattern(vec![None; width]), &self.radices(&used)),
                    row: Vec::new(),
                    used,
                });
            }
        }
        Ok(None)
    }
}

/// Minimum additions. Undefined exactly when a forced violation exists.
pub fn g5_spfd(table: &Table, fd: &FdConstraint, limits: SearchLimits) -> Result<MeasureResult> {
    validate(table, fd)?;
    let lay = Layout::new(fd);
    let warnings = outside_warnings(table, &lay.z);
    let m = table.len();
    if g5_spfd_obstruction(table, fd).is_some() {
        return Ok(MeasureResult {
            value: Measure::Undefined,
            certificate: Certificate::None,
            warnings,
        });
    }
    let mut budget = Budget::new(limits);
    let domains = ActiveDomains::of(table);
    let rows: Vec<usize> = (0..m).collect();
    let view = View::new(table, &rows, &domains)?;
    let patterns = view.patterns(&lay.z);
    let old = domains.sizes(&lay.z);

    let groups = group(patterns.clone());
    if let Some(chosen) = satisfy(&groups, &old, &mut FdMap::new(&lay), &mut budget)? {
        let chosen: Vec<_> = chosen.into_iter().map(Some).collect();
        return Ok(MeasureResult {
            value: Measure::Exact(ratio(0, m.max(1) as u64)),
            certificate: Certificate::Addition {
                added: Vec::new(),
                witness: witness(&lay.z, &rows, &groups, &chosen, |c| {
                    domains.decode(&lay.z, c)
                }),
            },
            warnings,
        });
    }

    let in_x: Vec<bool> = (0..lay.z.len()).map(|i| lay.x.contains(&i)).collect();
    for p in 1..=g5_spfd_search_bound(table, fd) {
        let adds = Additions {
            lay: &lay,
            old: &old,
            in_x: in_x.clone(),
            p,
        };
        let found = adds.search(&mut budget, |added, used, budget| {
            let sizes: Vec<u32> = old.iter().zip(used).map(|(o, u)| o + u).collect();
            let mut all = patterns.clone();
            all.extend(
                added
                    .iter()
                    .map(|r| Pattern(r.iter().map(|&c| Some(c)).collect())),
            );
            let groups = group(all);
            Ok(satisfy(&groups, &sizes, &mut FdMap::new(&lay), budget)?.map(|c| (groups, c)))
        })?;
        if let Some((added_codes, (groups, chosen))) = found {
            return Ok(realize_addition(
                table,
                &lay,
                &domains,
                &old,
                added_codes,
                &groups,
                chosen,
                warnings,
                p,
            ));
        }
    }
    unreachable!("an instance without a forced violation is repaired within the search bound")
}

#[allow(clippy::too_many_arguments)]
fn realize_addition(
    table: &Table,
    lay: &Layout,
    domains: &ActiveDomains,
    old: &[u32],
    added_codes: Vec<Vec<u32>>,
    groups: &[Group],
    chosen: Vec<Box<[u32]>>,
    warnings: Vec<crate::measure::Warning>,
    p: usize,
) -> MeasureResult {
    let mut fresh = FreshSymbols::for_table(table);
    let mut labels: Vec<Vec<Symbol>> = vec![Vec::new(); lay.z.len()];
    for code in added_codes
        .iter()
        .map(Vec::as_slice)
        .chain(chosen.iter().map(|c| &c[..]))
    {
        for (i, &c) in code.iter().enumerate() {
            while c >= old[i] && labels[i].len() <= (c - old[i]) as usize {
                labels[i].push(fresh.next_symbol());
            }
        }
    }
    let symbol = |i: usize, c: u32| -> Symbol {
        if c < old[i] {
            domains.symbol(lay.z.positions()[i], c).clone()
        } else {
            labels[i][(c - old[i]) as usize].clone()
        }
    };
    let decode = |code: &[u32]| -> Vec<Symbol> {
        code.iter()
            .enumerate()
            .map(|(i, &c)| symbol(i, c))
            .collect()
    };

    let arity = table.schema().len();
    let added: Vec<Tuple> = added_codes
        .iter()
        .map(|codes| {
            let mut values: Vec<Value> = (0..arity)
                .map(|_| Value::Sym(fresh.next_symbol()))
                .collect();
            for (i, &c) in codes.iter().enumerate() {
                values[lay.z.positions()[i]] = Value::Sym(symbol(i, c));
            }
            Tuple::new(values)
        })
        .collect();
    let rows: Vec<usize> = (0..table.len() + p).collect();
    let chosen: Vec<_> = chosen.into_iter().map(Some).collect();
    MeasureResult {
        value: Measure::Exact(ratio(p as u64, table.len() as u64)),
        certificate: Certificate::Addition {
            added,
            witness: witness(&lay.z, &rows, groups, &chosen, decode),
        },
        warnings,
    }
}

//! Systems of strongly possible keys: one world must make every key hold.
//!
//! Each key alone is decided by matching, but the system is NP-complete, so
//! the system operations search over extensions on the union of the keys,
//! keeping one set of used projections per key. The per-key matching sizes
//! cap how many rows any system solution can keep.

use std::collections::HashSet;

use crate::constraint::KeySystem;
use crate::domains::{ActiveDomains, View};
use crate::error::Result;
use crate::measure::{
    outside_warnings, ratio, Budget, Certificate, Measure, MeasureResult, Rational, SearchLimits,
    Verdict, Witness,
};
use crate::search::{max_kept, satisfy, singletons, Placement};
use crate::spkey;
use crate::table::{AttrSet, Table};

struct KeySets {
    /// Positions of each key inside the union.
    keys: Vec<Vec<usize>>,
    used: Vec<HashSet<Box<[u32]>>>,
}

impl KeySets {
    fn new(system: &KeySystem, union: &AttrSet) -> Self {
        let keys: Vec<Vec<usize>> = system
            .keys()
            .iter()
            .map(|k| k.iter().map(|p| union.rank(p).unwrap()).collect())
            .collect();
        let used = vec![HashSet::new(); keys.len()];
        KeySets { keys, used }
    }

    fn project(idx: &[usize], code: &[u32]) -> Box<[u32]> {
        idx.iter().map(|&i| code[i]).collect()
    }
}

impl Placement for KeySets {
    fn place(&mut self, code: &[u32]) -> bool {
        let projections: Vec<Box<[u32]>> =
            self.keys.iter().map(|k| Self::project(k, code)).collect();
        if projections
            .iter()
            .zip(&self.used)
            .any(|(p, set)| set.contains(p))
        {
            return false;
        }
        for (p, set) in projections.into_iter().zip(&mut self.used) {
            set.insert(p);
        }
        true
    }

    fn unplace(&mut self, code: &[u32]) {
        for (k, set) in self.keys.iter().zip(&mut self.used) {
            set.remove(&Self::project(k, code));
        }
    }
}

fn validate(table: &Table, system: &KeySystem) -> Result<()> {
    system.attrs().check(table.schema().len())
}

/// Decides the system on a view.
pub fn check_spkey_system_in(
    view: &View<'_>,
    system: &KeySystem,
    limits: SearchLimits,
) -> Result<Verdict> {
    validate(view.table, system)?;
    let union = system.attrs();
    let groups = singletons(view.patterns(&union));
    let sizes = view.domains.sizes(&union);
    let mut budget = Budget::new(limits);
    let found = satisfy(
        &groups,
        &sizes,
        &mut KeySets::new(system, &union),
        &mut budget,
    )?;
    Ok(Verdict {
        holds: found.is_some(),
        witness: found.map(|codes| Witness {
            rows: view
                .rows
                .iter()
                .zip(&codes)
                .map(|(&r, c)| (r, view.domains.decode(&union, c)))
                .collect(),
            attrs: union.clone(),
        }),
        warnings: Vec::new(),
    })
}

pub fn check_spkey_system(
    table: &Table,
    system: &KeySystem,
    limits: SearchLimits,
) -> Result<Verdict> {
    validate(table, system)?;
    let domains = ActiveDomains::of(table);
    let rows: Vec<usize> = (0..table.len()).collect();
    let mut verdict = check_spkey_system_in(&View::new(table, &rows, &domains)?, system, limits)?;
    verdict.warnings = outside_warnings(table, &system.attrs());
    Ok(verdict)
}

/// Minimum removals after which one world makes every key hold; kept rows
/// are imputed from the whole table's active domains.
pub fn g3_spkey_system(
    table: &Table,
    system: &KeySystem,
    limits: SearchLimits,
) -> Result<MeasureResult> {
    validate(table, system)?;
    let union = system.attrs();
    let warnings = outside_warnings(table, &union);
    let m = table.len();
    let domains = ActiveDomains::of(table);
    let rows: Vec<usize> = (0..m).collect();
    let view = View::new(table, &rows, &domains)?;
    let groups = singletons(view.patterns(&union));
    let sizes = domains.sizes(&union);
    let ceiling = system
        .keys()
        .iter()
        .map(|k| spkey::analyze(table, k).map(|a| a.nu))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min();
    let mut budget = Budget::new(limits);
    let chosen = max_kept(
        &groups,
        &sizes,
        &mut KeySets::new(system, &union),
        ceiling,
        &mut budget,
    )?;

    let removed: Vec<usize> = (0..m).filter(|&i| chosen[i].is_none()).collect();
    let witness = Witness {
        attrs: union.clone(),
        rows: chosen
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|c| (i, domains.decode(&union, c))))
            .collect(),
    };
    Ok(MeasureResult {
        value: Measure::Exact(ratio(removed.len() as u64, m.max(1) as u64)),
        certificate: Certificate::Removal { removed, witness },
        warnings,
    })
}

/// The certificate of a "yes" answer: removing `removed` leaves a table
/// whose world `world` makes every key hold, and the key at `key_index`
/// alone already needs that many removals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxG3Witness {
    pub removed: Vec<usize>,
    pub key_index: usize,
    pub world: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxG3 {
    /// Is g3 of the system equal to the largest g3 of a single key?
    pub holds: bool,
    pub per_key: Vec<Rational>,
    pub system: MeasureResult,
    pub witness: Option<MaxG3Witness>,
}

pub fn max_g3_decision(table: &Table, system: &KeySystem, limits: SearchLimits) -> Result<MaxG3> {
    validate(table, system)?;
    let per_key: Vec<Rational> = system
        .keys()
        .iter()
        .map(|k| {
            Ok(spkey::g3_spkey(table, k)?
                .value
                .exact()
                .expect("g3 is always defined"))
        })
        .collect::<Result<_>>()?;
    let system_result = g3_spkey_system(table, system, limits)?;
    let value = system_result.value.exact().expect("g3 is always defined");
    let top = per_key
        .iter()
        .copied()
        .max()
        .expect("a key system is nonempty");
    let holds = value == top;
    let witness = match (&system_result.certificate, holds) {
        (Certificate::Removal { removed, witness }, true) => Some(MaxG3Witness {
            removed: removed.clone(),
            key_index: per_key.iter().position(|&g| g == value).unwrap(),
            world: witness.clone(),
        }),
        _ => None,
    };
    Ok(MaxG3 {
        holds,
        per_key,
        system: system_result,
        witness,
    })
}

//! Independent re-validation of verdicts and measure certificates.
//!
//! A witness is accepted when it covers exactly the expected rows, agrees
//! with every non-NULL cell, fills NULLs only from the relevant active
//! domains, and classically satisfies the constraint.

use crate::constraint::Constraint;
use crate::domains::ActiveDomains;
use crate::error::{Error, Result};
use crate::measure::{ratio, Certificate, Measure, MeasureResult, Verdict, Witness};
use crate::ops::MeasureKind;
use crate::spfd::g5_spfd_obstruction;
use crate::spkey::g5_spkey_obstruction;
use crate::table::{Symbol, Table, Value};

fn reject<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidCertificate(msg.into()))
}

fn pairwise_ok(constraint: &Constraint, a: &[Symbol], b: &[Symbol]) -> bool {
    let attrs = constraint.attrs();
    let eq = |set: &crate::table::AttrSet| {
        set.iter().all(|p| {
            let i = attrs.rank(p).unwrap();
            a[i] == b[i]
        })
    };
    match constraint {
        Constraint::Key(k) => !eq(k),
        Constraint::Keys(ks) => ks.keys().iter().all(|k| !eq(k)),
        Constraint::Fd(fd) => !eq(fd.lhs()) || eq(fd.rhs()),
    }
}

/// Checks `witness` as a world of `rows` of `table`, imputed from `domains`.
pub fn verify_world(
    table: &Table,
    rows: &[usize],
    domains: &ActiveDomains,
    constraint: &Constraint,
    witness: &Witness,
) -> Result<()> {
    let attrs = constraint.attrs();
    if witness.attrs != attrs {
        return reject("witness covers the wrong attributes");
    }
    let mut covered: Vec<usize> = witness.rows.iter().map(|(r, _)| *r).collect();
    covered.sort_unstable();
    let mut expected = rows.to_vec();
    expected.sort_unstable();
    if covered != expected {
        return reject(format!(
            "witness covers rows {covered:?}, expected {expected:?}"
        ));
    }
    for (r, syms) in &witness.rows {
        if syms.len() != attrs.len() {
            return reject(format!("row {r}: projection has the wrong width"));
        }
        let tuple = table.tuple(*r)?;
        for (p, s) in attrs.iter().zip(syms) {
            match tuple.get(p) {
                Value::Sym(v) if v != s => {
                    return reject(format!("row {r}: `{s}` overwrites `{v}`"));
                }
                Value::Null if !domains.contains(p, s) => {
                    return reject(format!("row {r}: `{s}` is not in the active domain"));
                }
                _ => {}
            }
        }
    }
    for (i, (ra, a)) in witness.rows.iter().enumerate() {
        for (rb, b) in &witness.rows[i + 1..] {
            if !pairwise_ok(constraint, a, b) {
                return reject(format!("rows {ra} and {rb} violate the constraint"));
            }
        }
    }
    Ok(())
}

pub fn verify_verdict(table: &Table, constraint: &Constraint, verdict: &Verdict) -> Result<()> {
    match (&verdict.witness, verdict.holds) {
        (None, false) => Ok(()),
        (Some(w), true) => {
            let rows: Vec<usize> = (0..table.len()).collect();
            verify_world(table, &rows, &ActiveDomains::of(table), constraint, w)
        }
        (Some(_), false) => reject("a failing verdict carries a witness"),
        (None, true) => reject("a holding verdict lacks a witness"),
    }
}

pub fn verify_measure(
    table: &Table,
    constraint: &Constraint,
    kind: MeasureKind,
    result: &MeasureResult,
) -> Result<()> {
    let m = table.len() as u64;
    let fraction = |n: usize| {
        if m == 0 {
            ratio(0, 1)
        } else {
            ratio(n as u64, m)
        }
    };
    match (&result.value, &result.certificate, kind) {
        (Measure::Exact(v), Certificate::Removal { removed, witness }, MeasureKind::G3) => {
            if *v != fraction(removed.len()) {
                return reject("value does not match the removal set");
            }
            let kept: Vec<usize> = (0..table.len()).filter(|i| !removed.contains(i)).collect();
            if kept.len() + removed.len() != table.len() {
                return reject("removal set lists unknown or repeated rows");
            }
            verify_world(table, &kept, &ActiveDomains::of(table), constraint, witness)
        }
        (Measure::Exact(v), Certificate::Addition { added, witness }, MeasureKind::G5) => {
            if *v != fraction(added.len()) {
                return reject("value does not match the added rows");
            }
            let extended = table.with_appended(added)?;
            let rows: Vec<usize> = (0..extended.len()).collect();
            verify_world(
                &extended,
                &rows,
                &ActiveDomains::of(&extended),
                constraint,
                witness,
            )
        }
        (Measure::Undefined, Certificate::None, MeasureKind::G5) => {
            let forced = match constraint {
                Constraint::Key(k) => g5_spkey_obstruction(table, k).is_some(),
                Constraint::Fd(fd) => g5_spfd_obstruction(table, fd).is_some(),
                Constraint::Keys(_) => false,
            };
            if forced {
                Ok(())
            } else {
                reject("undefined without a forced violation")
            }
        }
        _ => reject(format!("certificate does not fit a {kind} measure")),
    }
}

//! Strongly possible keys: satisfaction, the removal measure g3 and the
//! addition measure g5.
//!
//! A table satisfies `sp⟨K⟩` iff its K-extension graph (tuples on one side,
//! total K-projections over the active domains on the other, weak similarity
//! as edges) has a matching covering every tuple, and g3 is `(m − ν)/m` for
//! the maximum matching size ν. The full graph is usually exponential, so the
//! matching is computed on a pruned graph:
//!
//! 1. let `ℓ(t)` be the number of extensions of `t`, and sort the tuples by
//!    `ℓ` (ties by index);
//! 2. let `j` be the largest 1-based position with `ℓ(t_j) < j`, or 0;
//! 3. find a maximum matching between the first `j` tuples and their
//!    extensions with augmenting paths;
//! 4. extend it greedily over the remaining tuples: tuple `i > j` has at
//!    least `i` extensions and at most `i − 1` are taken, so one is free.
//!
//! Then `ν = ν(G★) + (m − j)`. Step 3 generates neighbours lazily, so only
//! the projections it actually touches are materialized.

use std::collections::HashMap;

use crate::domains::{ActiveDomains, Odometer, Pattern, View};
use crate::error::{Error, Result};
use crate::matching::ExtensionGraph;
use crate::measure::{
    outside_warnings, ratio, Certificate, FreshSymbols, Measure, MeasureResult, Verdict, Witness,
};
use crate::table::{AttrSet, Table, Tuple};

/// The sorted order, the cut point and the materialized pruned graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrunedGraph {
    /// Tuple indices sorted by non-decreasing extension count.
    pub order: Vec<usize>,
    /// Extension counts, aligned with `order`.
    pub ell: Vec<u64>,
    /// The cut point `j` (number of tuples in the pruned graph).
    pub cut: usize,
    /// The first `cut` tuples of `order` and all of their extensions.
    pub graph: ExtensionGraph,
}

/// Diagnostics of one run of the pruned matching algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyAnalysis {
    pub rows: usize,
    pub cut: usize,
    /// Maximum matching size of the pruned graph.
    pub nu_pruned: usize,
    /// Maximum matching size of the full extension graph.
    pub nu: usize,
    /// Right vertices materialized while matching the pruned graph.
    pub realized_right: usize,
}

fn validate_key(table: &Table, key: &AttrSet) -> Result<()> {
    if key.is_empty() {
        return Err(Error::EmptyKey);
    }
    key.check(table.schema().len())
}

fn sort_by_ell(patterns: &[Pattern], sizes: &[u32]) -> (Vec<usize>, Vec<u64>, usize) {
    let ell: Vec<u64> = patterns.iter().map(|p| p.count(sizes)).collect();
    let mut order: Vec<usize> = (0..patterns.len()).collect();
    order.sort_by_key(|&i| (ell[i], i));
    let cut = (1..=order.len())
        .rev()
        .find(|&k| ell[order[k - 1]] < k as u64)
        .unwrap_or(0);
    (order, ell, cut)
}

pub fn build_pruned_graph(table: &Table, key: &AttrSet) -> Result<PrunedGraph> {
    validate_key(table, key)?;
    let domains = ActiveDomains::of(table);
    let rows: Vec<usize> = (0..table.len()).collect();
    let view = View::new(table, &rows, &domains)?;
    let patterns = view.patterns(key);
    let sizes = domains.sizes(key);
    let (order, ell, cut) = sort_by_ell(&patterns, &sizes);

    let mut ids: HashMap<Box<[u32]>, usize> = HashMap::new();
    let mut right = Vec::new();
    let mut adjacency = Vec::with_capacity(cut);
    for &pos in &order[..cut] {
        let mut odo = Odometer::new(&patterns[pos], &sizes);
        let mut adj = Vec::new();
        while let Some(code) = odo.next() {
            let id = match ids.get(code) {
                Some(&id) => id,
                None => {
                    let id = right.len();
                    ids.insert(code.into(), id);
                    right.push(domains.decode(key, code));
                    id
                }
            };
            adj.push(id);
        }
        adjacency.push(adj);
    }
    let realized_right = right.len();
    Ok(PrunedGraph {
        ell: order.iter().map(|&i| ell[i]).collect(),
        graph: ExtensionGraph {
            left: order[..cut].to_vec(),
            right,
            adjacency,
            realized_right,
        },
        order,
        cut,
    })
}

/// The full K-extension graph: every tuple against every total projection
/// weakly similar to some tuple. Exponential; refuses to build more than
/// `edge_cap` edges.
pub fn build_full_graph(table: &Table, key: &AttrSet, edge_cap: u128) -> Result<ExtensionGraph> {
    validate_key(table, key)?;
    let domains = ActiveDomains::of(table);
    let total: u128 = table
        .tuples()
        .iter()
        .map(|t| domains.extension_count(t, key) as u128)
        .sum();
    if total > edge_cap {
        return Err(Error::SizeGuard {
            count: total,
            cap: edge_cap,
        });
    }
    let mut ids: HashMap<Vec<_>, usize> = HashMap::new();
    let mut g = ExtensionGraph::default();
    for (i, t) in table.tuples().iter().enumerate() {
        let mut adj = Vec::new();
        for ext in domains.extensions(t, key) {
            let next = g.right.len();
            let id = *ids.entry(ext.clone()).or_insert_with(|| {
                g.right.push(ext);
                next
            });
            adj.push(id);
        }
        g.left.push(i);
        g.adjacency.push(adj);
    }
    g.realized_right = g.right.len();
    Ok(g)
}

/// Result of the pruned matching, indexed by position in the view.
struct Solved {
    assignment: Vec<Option<Box<[u32]>>>,
    matched: usize,
    cut: usize,
    nu_pruned: usize,
    realized_right: usize,
    complete: bool,
}

struct Frame {
    pos: usize,
    odo: Odometer,
    entry: Option<usize>,
}

/// Runs the pruned algorithm. With `stop_on_failure`, returns as soon as some
/// tuple of the pruned part cannot be matched.
fn solve(patterns: &[Pattern], sizes: &[u32], stop_on_failure: bool) -> Solved {
    let m = patterns.len();
    let (order, _ell, cut) = sort_by_ell(patterns, sizes);

    let mut ids: HashMap<Box<[u32]>, usize> = HashMap::new();
    let mut codes: Vec<Box<[u32]>> = Vec::new();
    let mut owner: Vec<Option<usize>> = Vec::new();
    let mut seen: Vec<u64> = Vec::new();
    let mut mate: Vec<Option<usize>> = vec![None; m];
    let mut stamp = 1u64;
    let mut nu_pruned = 0;

    for &root in &order[..cut] {
        let mut stack = vec![Frame {
            pos: root,
            odo: Odometer::new(&patterns[root], sizes),
            entry: None,
        }];
        let mut free = None;
        while let Some(frame) = stack.last_mut() {
            let step = frame.odo.next().map(|code| match ids.get(code) {
                Some(&r) => Ok(r),
                None => Err(Box::<[u32]>::from(code)),
            });
            match step {
                None => {
                    stack.pop();
                }
                Some(Err(code)) => {
                    let r = codes.len();
                    ids.insert(code.clone(), r);
                    codes.push(code);
                    owner.push(None);
                    seen.push(0);
                    free = Some(r);
                    break;
                }
                Some(Ok(r)) => match owner[r] {
                    None => {
                        free = Some(r);
                        break;
                    }
                    Some(w) => {
                        if seen[r] != stamp {
                            seen[r] = stamp;
                            stack.push(Frame {
                                pos: w,
                                odo: Odometer::new(&patterns[w], sizes),
                                entry: Some(r),
                            });
                        }
                    }
                },
            }
        }
        match free {
            Some(mut r) => {
                for f in stack.iter().rev() {
                    mate[f.pos] = Some(r);
                    owner[r] = Some(f.pos);
                    match f.entry {
                        Some(e) => r = e,
                        None => break,
                    }
                }
                nu_pruned += 1;
                // vertices marked during a failed search stay dead until the
                // matching changes
                stamp += 1;
            }
            None if stop_on_failure => {
                return Solved {
                    assignment: Vec::new(),
                    matched: nu_pruned,
                    cut,
                    nu_pruned,
                    realized_right: codes.len(),
                    complete: false,
                };
            }
            None => {}
        }
    }
    let realized_right = codes.len();

    let mut assignment: Vec<Option<Box<[u32]>>> =
        mate.iter().map(|r| r.map(|r| codes[r].clone())).collect();

    // greedy completion; tuples sharing a pattern resume one cursor since
    // taken projections never become free again
    let mut cursors: HashMap<&Pattern, Odometer> = HashMap::new();
    for &pos in &order[cut..] {
        let pattern = &patterns[pos];
        let odo = cursors
            .entry(pattern)
            .or_insert_with(|| Odometer::new(pattern, sizes));
        loop {
            let code = odo
                .next()
                .expect("a tuple past the cut has more extensions than taken projections");
            match ids.get(code) {
                Some(&r) if owner[r].is_some() => continue,
                Some(&r) => {
                    owner[r] = Some(pos);
                    assignment[pos] = Some(codes[r].clone());
                }
                None => {
                    let code: Box<[u32]> = code.into();
                    ids.insert(code.clone(), codes.len());
                    codes.push(code.clone());
                    owner.push(Some(pos));
                    assignment[pos] = Some(code);
                }
            }
            break;
        }
    }

    Solved {
        assignment,
        matched: nu_pruned + (m - cut),
        cut,
        nu_pruned,
        realized_right,
        complete: true,
    }
}

fn witness_for(view: &View<'_>, key: &AttrSet, assignment: &[Option<Box<[u32]>>]) -> Witness {
    Witness {
        attrs: key.clone(),
        rows: view
            .rows
            .iter()
            .zip(assignment)
            .filter_map(|(&row, a)| a.as_ref().map(|c| (row, view.domains.decode(key, c))))
            .collect(),
    }
}

/// Decides `sp⟨K⟩` on a view.
pub fn check_spkey_in(view: &View<'_>, key: &AttrSet) -> Result<Verdict> {
    validate_key(view.table, key)?;
    let patterns = view.patterns(key);
    let solved = solve(&patterns, &view.domains.sizes(key), true);
    let holds = solved.complete && solved.matched == patterns.len();
    Ok(Verdict {
        holds,
        witness: holds.then(|| witness_for(view, key, &solved.assignment)),
        warnings: Vec::new(),
    })
}

pub fn check_spkey(table: &Table, key: &AttrSet) -> Result<Verdict> {
    validate_key(table, key)?;
    let domains = ActiveDomains::of(table);
    let rows: Vec<usize> = (0..table.len()).collect();
    let mut verdict = check_spkey_in(&View::new(table, &rows, &domains)?, key)?;
    verdict.warnings = outside_warnings(table, key);
    Ok(verdict)
}

/// Runs the pruned algorithm and reports its sizes.
pub fn analyze(table: &Table, key: &AttrSet) -> Result<KeyAnalysis> {
    validate_key(table, key)?;
    let domains = ActiveDomains::of(table);
    let rows: Vec<usize> = (0..table.len()).collect();
    let view = View::new(table, &rows, &domains)?;
    let solved = solve(&view.patterns(key), &domains.sizes(key), false);
    Ok(KeyAnalysis {
        rows: table.len(),
        cut: solved.cut,
        nu_pruned: solved.nu_pruned,
        nu: solved.matched,
        realized_right: solved.realized_right,
    })
}

pub fn g3_spkey(table: &Table, key: &AttrSet) -> Result<MeasureResult> {
    validate_key(table, key)?;
    let warnings = outside_warnings(table, key);
    let m = table.len();
    if m == 0 {
        return Ok(MeasureResult {
            value: Measure::Exact(ratio(0, 1)),
            certificate: Certificate::Removal {
                removed: Vec::new(),
                witness: Witness {
                    attrs: key.clone(),
                    rows: Vec::new(),
                },
            },
            warnings,
        });
    }
    let domains = ActiveDomains::of(table);
    let rows: Vec<usize> = (0..m).collect();
    let view = View::new(table, &rows, &domains)?;
    let patterns = view.patterns(key);
    let mut solved = solve(&patterns, &domains.sizes(key), false);

    // An unmatched K-total tuple can take its own projection back from a
    // non-total holder: same size, and the removal set then prefers
    // non-total tuples whenever the total part is itself a key.
    let mut holder: HashMap<Box<[u32]>, usize> = solved
        .assignment
        .iter()
        .enumerate()
        .filter_map(|(pos, a)| a.clone().map(|c| (c, pos)))
        .collect();
    for pos in 0..m {
        if solved.assignment[pos].is_some() || !patterns[pos].is_total() {
            continue;
        }
        let own: Box<[u32]> = patterns[pos].0.iter().map(|c| c.unwrap()).collect();
        if let Some(&w) = holder.get(&own) {
            if !patterns[w].is_total() {
                solved.assignment[w] = None;
                solved.assignment[pos] = Some(own.clone());
                holder.insert(own, pos);
            }
        }
    }

    let removed: Vec<usize> = (0..m).filter(|&i| solved.assignment[i].is_none()).collect();
    Ok(MeasureResult {
        value: Measure::Exact(ratio(removed.len() as u64, m as u64)),
        certificate: Certificate::Removal {
            witness: witness_for(&view, key, &solved.assignment),
            removed,
        },
        warnings,
    })
}

/// Why g5 of a key can be undefined, if it is.
pub fn g5_spkey_obstruction(table: &Table, key: &AttrSet) -> Option<String> {
    let mut seen: HashMap<Vec<&crate::table::Value>, usize> = HashMap::new();
    for (i, t) in table.tuples().iter().enumerate() {
        if t.is_total_on(key) {
            let proj: Vec<_> = key.iter().map(|p| t.get(p)).collect();
            if let Some(j) = seen.insert(proj, i) {
                return Some(format!(
                    "tuples {j} and {i} are total and equal on the key; every extension keeps them equal"
                ));
            }
        }
    }
    if key.len() == 1 {
        if let Some(i) = table.tuples().iter().position(|t| !t.is_total_on(key)) {
            return Some(format!(
                "tuple {i} is NULL on the single key attribute; added tuples bring as many values \
                 as they consume, so the NULL can never be given a value of its own"
            ));
        }
    }
    None
}

/// Appends `p` fresh tuples and decides the key on the result.
fn probe(table: &Table, key: &AttrSet, p: usize) -> Result<(Vec<Tuple>, Verdict)> {
    let mut fresh = FreshSymbols::for_table(table);
    let added: Vec<Tuple> = (0..p)
        .map(|_| fresh.fresh_tuple(table.schema().len()))
        .collect();
    let extended = table.with_appended(&added)?;
    let domains = ActiveDomains::of(&extended);
    let rows: Vec<usize> = (0..extended.len()).collect();
    let verdict = check_spkey_in(&View::new(&extended, &rows, &domains)?, key)?;
    Ok((added, verdict))
}

/// Minimum number of fresh tuples (scaled by the table size) after which the
/// key holds. Fresh tuples are optimal among all additions for keys.
pub fn g5_spkey(table: &Table, key: &AttrSet) -> Result<MeasureResult> {
    validate_key(table, key)?;
    let warnings = outside_warnings(table, key);
    let m = table.len();
    if m == 0 {
        return Ok(MeasureResult {
            value: Measure::Exact(ratio(0, 1)),
            certificate: Certificate::Addition {
                added: Vec::new(),
                witness: Witness {
                    attrs: key.clone(),
                    rows: Vec::new(),
                },
            },
            warnings,
        });
    }
    if g5_spkey_obstruction(table, key).is_some() {
        return Ok(MeasureResult {
            value: Measure::Undefined,
            certificate: Certificate::None,
            warnings,
        });
    }
    let (p, added, verdict) = minimal_addition(table, key)?;
    Ok(MeasureResult {
        value: Measure::Exact(ratio(p as u64, m as u64)),
        certificate: Certificate::Addition {
            added,
            witness: verdict
                .witness
                .expect("a holding verdict carries a witness"),
        },
        warnings,
    })
}

/// Upper end of the fresh-tuple search: with `n` non-total tuples, `n + 1`
/// fresh tuples always suffice for keys of two or more attributes (each
/// non-total tuple takes its own fresh symbol in one NULL position and the
/// extra symbol elsewhere).
pub fn g5_spkey_search_bound(table: &Table, key: &AttrSet) -> usize {
    let n = table
        .tuples()
        .iter()
        .filter(|t| !t.is_total_on(key))
        .count();
    if n == 0 {
        0
    } else {
        n + 1
    }
}

fn minimal_addition(table: &Table, key: &AttrSet) -> Result<(usize, Vec<Tuple>, Verdict)> {
    let (added, verdict) = probe(table, key, 0)?;
    if verdict.holds {
        return Ok((0, added, verdict));
    }
    // satisfaction is monotone in the number of fresh tuples
    let (mut lo, mut hi) = (1, g5_spkey_search_bound(table, key));
    let mut best = probe(table, key, hi)?;
    assert!(
        best.1.holds,
        "the fresh-tuple bound must repair any table without an obstruction"
    );
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let attempt = probe(table, key, mid)?;
        if attempt.1.holds {
            hi = mid;
            best = attempt;
        } else {
            lo = mid + 1;
        }
    }
    Ok((hi, best.0, best.1))
}

pub fn g3_equals_g5(table: &Table, key: &AttrSet) -> Result<bool> {
    let g3 = g3_spkey(table, key)?.value;
    let g5 = g5_spkey(table, key)?.value;
    Ok(matches!((g3, g5), (Measure::Exact(a), Measure::Exact(b)) if a == b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::fixture;
    use crate::matching::max_matching;
    use crate::table::Schema;

    fn key(t: &Table, names: &[&str]) -> AttrSet {
        t.schema().attr_set(names).unwrap()
    }

    #[test]
    fn table2_is_not_a_key_but_table4_is() {
        let t2 = fixture("table2").unwrap();
        assert!(!check_spkey(&t2, &key(&t2, &["X1", "X2"])).unwrap().holds);
        let t4 = fixture("table4").unwrap();
        let v = check_spkey(&t4, &key(&t4, &["X1", "X2"])).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness.unwrap().rows.len(), 5);
    }

    #[test]
    fn empty_table_satisfies_every_key() {
        let t = Table::empty(Schema::new(["A"]).unwrap());
        let k = key(&t, &["A"]);
        assert!(check_spkey(&t, &k).unwrap().holds);
        assert_eq!(g3_spkey(&t, &k).unwrap().value, Measure::Exact(ratio(0, 1)));
        assert_eq!(g5_spkey(&t, &k).unwrap().value, Measure::Exact(ratio(0, 1)));
    }

    #[test]
    fn key_errors() {
        let t = fixture("table2").unwrap();
        assert_eq!(check_spkey(&t, &AttrSet::default()), Err(Error::EmptyKey));
        assert!(matches!(
            g3_spkey(&t, &AttrSet::from_unchecked(vec![7])),
            Err(Error::UnknownAttribute(_))
        ));
    }

    #[test]
    fn pruned_graph_of_table2() {
        let t = fixture("table2").unwrap();
        let pg = build_pruned_graph(&t, &key(&t, &["X1", "X2"])).unwrap();
        assert_eq!(pg.ell, vec![1, 1, 2, 2]);
        assert_eq!(pg.order, vec![0, 3, 1, 2]);
        assert_eq!(pg.cut, 4);
        assert_eq!(pg.graph.right.len(), 2);
        assert_eq!(pg.graph.edge_count(), 6);
        assert_eq!(max_matching(&pg.graph).size, 2);
    }

    #[test]
    fn total_distinct_table_is_cut_in_full() {
        // every ℓ is 1, so ℓ(t_i) < i from the second tuple on
        let t = Table::from_rows(
            ["A", "B"],
            &[
                &[Some("1"), Some("1")],
                &[Some("1"), Some("2")],
                &[Some("2"), Some("1")],
            ],
        )
        .unwrap();
        let k = t.schema().all();
        let pg = build_pruned_graph(&t, &k).unwrap();
        assert_eq!(pg.cut, 3);
        assert_eq!(pg.graph.edge_count(), 3);
        assert_eq!(g3_spkey(&t, &k).unwrap().value, Measure::Exact(ratio(0, 1)));
        let one = t.select(&[0]).unwrap();
        assert_eq!(build_pruned_graph(&one, &k).unwrap().cut, 0);
    }

    #[test]
    fn single_tuple_with_null_has_zero_cut() {
        let t = Table::from_rows(["A", "B"], &[&[None, Some("1")]]).unwrap();
        // VD(A) is empty, so ℓ = 0 < 1 and the tuple is cut in
        let pg = build_pruned_graph(&t, &t.schema().all()).unwrap();
        assert_eq!(pg.cut, 1);
        let t =
            Table::from_rows(["A", "B"], &[&[None, Some("1")], &[Some("a"), Some("2")]]).unwrap();
        let pg = build_pruned_graph(&t, &t.schema().all()).unwrap();
        // ℓ = (1, 1): sorted [t0, t1]; ℓ(t2)=1 < 2 so j = 2
        assert_eq!(pg.cut, 2);
        let t = Table::from_rows(["A", "B"], &[&[Some("a"), None]]).unwrap();
        let pg = build_pruned_graph(&t, &t.schema().all()).unwrap();
        assert_eq!(pg.cut, 1);
        let single = Table::from_rows(["A", "B"], &[&[Some("a"), Some("b")]]).unwrap();
        assert_eq!(
            build_pruned_graph(&single, &single.schema().all())
                .unwrap()
                .cut,
            0
        );
    }

    #[test]
    fn table2_measures() {
        let t = fixture("table2").unwrap();
        let k = key(&t, &["X1", "X2"]);
        let g3 = g3_spkey(&t, &k).unwrap();
        assert_eq!(g3.value, Measure::Exact(ratio(1, 2)));
        match &g3.certificate {
            Certificate::Removal { removed, witness } => {
                assert_eq!(removed.len(), 2);
                assert_eq!(witness.rows.len(), 2);
            }
            c => panic!("unexpected certificate {c:?}"),
        }
        let g5 = g5_spkey(&t, &k).unwrap();
        assert_eq!(g5.value, Measure::Exact(ratio(1, 4)));
        match &g5.certificate {
            Certificate::Addition { added, witness } => {
                assert_eq!(added.len(), 1);
                assert_eq!(witness.rows.len(), 5);
            }
            c => panic!("unexpected certificate {c:?}"),
        }
        assert!(!g3_equals_g5(&t, &k).unwrap());
    }

    #[test]
    fn cars_measures() {
        let t = fixture("cars").unwrap();
        let k = key(&t, &["Car_Model", "DoorNo"]);
        assert_eq!(g3_spkey(&t, &k).unwrap().value, Measure::Exact(ratio(1, 2)));
        assert_eq!(g5_spkey(&t, &k).unwrap().value, Measure::Exact(ratio(1, 4)));
    }

    #[test]
    fn keysystem_fixture_single_keys() {
        let t = fixture("keysystem").unwrap();
        for names in [["A1", "A2"], ["A2", "A3"]] {
            assert_eq!(
                g3_spkey(&t, &key(&t, &names)).unwrap().value,
                Measure::Exact(ratio(1, 4))
            );
        }
    }

    #[test]
    fn duplicate_total_rows_make_g5_undefined() {
        let t = Table::from_rows(
            ["A", "B"],
            &[&[Some("1"), Some("2")], &[Some("1"), Some("2")]],
        )
        .unwrap();
        let k = t.schema().all();
        assert_eq!(g5_spkey(&t, &k).unwrap().value, Measure::Undefined);
        assert_eq!(g3_spkey(&t, &k).unwrap().value, Measure::Exact(ratio(1, 2)));
        assert!(!g3_equals_g5(&t, &k).unwrap());
    }

    #[test]
    fn satisfied_key_has_equal_zero_measures() {
        let t = fixture("table4").unwrap();
        assert!(g3_equals_g5(&t, &t.schema().all()).unwrap());
    }

    #[test]
    fn single_attribute_key_with_null_is_never_repairable_by_addition() {
        let t =
            Table::from_rows(["A", "B"], &[&[Some("1"), Some("x")], &[None, Some("y")]]).unwrap();
        let k = key(&t, &["A"]);
        assert_eq!(g5_spkey(&t, &k).unwrap().value, Measure::Undefined);
        assert_eq!(g3_spkey(&t, &k).unwrap().value, Measure::Exact(ratio(1, 2)));
    }

    #[test]
    fn lone_all_null_row_needs_two_fresh_tuples() {
        // one fresh tuple gives each attribute a single value, which the
        // fresh tuple itself already occupies
        let t = Table::from_rows(["A", "B"], &[&[None, None]]).unwrap();
        let k = t.schema().all();
        assert_eq!(g5_spkey(&t, &k).unwrap().value, Measure::Exact(ratio(2, 1)));
        assert_eq!(g3_spkey(&t, &k).unwrap().value, Measure::Exact(ratio(1, 1)));
    }

    #[test]
    fn removal_prefers_non_total_tuples() {
        // the total tuple (1,1) comes last in index order but is kept
        let t = Table::from_rows(
            ["A", "B"],
            &[
                &[None, Some("1")],
                &[Some("1"), None],
                &[Some("1"), Some("1")],
            ],
        )
        .unwrap();
        let k = t.schema().all();
        let r = g3_spkey(&t, &k).unwrap();
        assert_eq!(r.value, Measure::Exact(ratio(2, 3)));
        match r.certificate {
            Certificate::Removal { removed, .. } => assert_eq!(removed, vec![0, 1]),
            c => panic!("unexpected certificate {c:?}"),
        }
    }

    #[test]
    fn analysis_reports_the_cut() {
        let t = fixture("table2").unwrap();
        let a = analyze(&t, &t.schema().all()).unwrap();
        assert_eq!(a.cut, 4);
        assert_eq!(a.nu_pruned, 2);
        assert_eq!(a.nu, 2);
        assert!(a.realized_right <= 2);
    }
}

//! Backtracking over per-row extensions, shared by the FD and key-system
//! searches. A [`Placement`] decides whether a chosen projection is
//! compatible with those already placed.

use std::collections::HashMap;

use crate::domains::{Odometer, Pattern};
use crate::error::Result;
use crate::measure::Budget;

pub(crate) trait Placement {
    fn place(&mut self, code: &[u32]) -> bool;
    /// Undoes the most recent `place` of `code`.
    fn unplace(&mut self, code: &[u32]);
}

pub(crate) struct Group {
    pub pattern: Pattern,
    /// Positions (in the searched row list) sharing this pattern.
    pub members: Vec<usize>,
}

pub(crate) fn group(patterns: Vec<Pattern>) -> Vec<Group> {
    let mut index: HashMap<Pattern, usize> = HashMap::new();
    let mut groups: Vec<Group> = Vec::new();
    for (pos, p) in patterns.into_iter().enumerate() {
        match index.get(&p) {
            Some(&g) => groups[g].members.push(pos),
            None => {
                index.insert(p.clone(), groups.len());
                groups.push(Group {
                    pattern: p,
                    members: vec![pos],
                });
            }
        }
    }
    groups
}

/// Every row its own group.
pub(crate) fn singletons(patterns: Vec<Pattern>) -> Vec<Group> {
    patterns
        .into_iter()
        .enumerate()
        .map(|(pos, pattern)| Group {
            pattern,
            members: vec![pos],
        })
        .collect()
}

/// Fewest extensions first, ties by first occurrence.
pub(crate) fn fail_first(groups: &[Group], sizes: &[u32]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by_key(|&g| (groups[g].pattern.count(sizes), g));
    order
}

/// One projection per group accepted by the placement, if any.
pub(crate) fn satisfy(
    groups: &[Group],
    sizes: &[u32],
    placer: &mut impl Placement,
    budget: &mut Budget,
) -> Result<Option<Vec<Box<[u32]>>>> {
    let order = fail_first(groups, sizes);
    let n = order.len();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut odos = vec![Odometer::new(&groups[order[0]].pattern, sizes)];
    let mut chosen: Vec<Option<Box<[u32]>>> = vec![None; n];
    loop {
        let d = odos.len() - 1;
        if let Some(prev) = chosen[d].take() {
            placer.unplace(&prev);
        }
        let code: Box<[u32]> = match odos[d].next() {
            None => {
                odos.pop();
                if odos.is_empty() {
                    return Ok(None);
                }
                continue;
            }
            Some(c) => c.into(),
        };
        budget.tick()?;
        if placer.place(&code) {
            chosen[d] = Some(code);
            if d + 1 == n {
                let mut out = vec![Box::<[u32]>::default(); n];
                for (depth, &g) in order.iter().enumerate() {
                    out[g] = chosen[depth].clone().unwrap();
                }
                return Ok(Some(out));
            }
            odos.push(Odometer::new(&groups[order[d + 1]].pattern, sizes));
        }
    }
}

struct BbFrame {
    odo: Odometer,
    chosen: Option<Box<[u32]>>,
    discarding: bool,
}

/// Keeps a maximum-weight set of groups (weight = member count) for which
/// the placement accepts. Returns one entry per group, `None` for dropped
/// groups. The search stops early once it keeps `ceiling` rows.
pub(crate) fn max_kept(
    groups: &[Group],
    sizes: &[u32],
    placer: &mut impl Placement,
    ceiling: Option<usize>,
    budget: &mut Budget,
) -> Result<Vec<Option<Box<[u32]>>>> {
    let order = fail_first(groups, sizes);
    let n = order.len();
    let weight: Vec<i64> = order
        .iter()
        .map(|&g| groups[g].members.len() as i64)
        .collect();
    let mut suffix = vec![0i64; n + 1];
    for d in (0..n).rev() {
        suffix[d] = suffix[d + 1] + weight[d];
    }
    let total = ceiling.map_or(suffix[0], |c| (c as i64).min(suffix[0]));
    let mut best = -1i64;
    let mut best_chosen: Vec<Option<Box<[u32]>>> = vec![None; n];
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut kept = 0i64;
    let mut frames = vec![BbFrame {
        odo: Odometer::new(&groups[order[0]].pattern, sizes),
        chosen: None,
        discarding: false,
    }];
    while let Some(d) = frames.len().checked_sub(1) {
        if best == total {
            break;
        }
        if let Some(prev) = frames[d].chosen.take() {
            placer.unplace(&prev);
            kept -= weight[d];
        }
        if frames[d].discarding {
            frames.pop();
            continue;
        }
        let next = if kept + suffix[d] > best {
            frames[d].odo.next().map(Box::<[u32]>::from)
        } else {
            None
        };
        match next {
            Some(code) => {
                budget.tick()?;
                if !placer.place(&code) {
                    continue;
                }
                kept += weight[d];
                frames[d].chosen = Some(code);
            }
            None => {
                frames[d].discarding = true;
                if kept + suffix[d + 1] <= best {
                    continue;
                }
            }
        }
        if d + 1 == n {
            if kept > best {
                best = kept;
                for (depth, f) in frames.iter().enumerate() {
                    best_chosen[depth] = f.chosen.clone();
                }
            }
        } else if kept + suffix[d + 1] > best {
            frames.push(BbFrame {
                odo: Odometer::new(&groups[order[d + 1]].pattern, sizes),
                chosen: None,
                discarding: false,
            });
        }
    }
    let mut out = vec![None; n];
    for (depth, &g) in order.iter().enumerate() {
        out[g] = best_chosen[depth].take();
    }
    Ok(out)
}

//! Bipartite extension graphs and maximum matching.

use std::collections::VecDeque;

use crate::table::Symbol;

/// Tuples on the left, distinct total projections on the right; an edge
/// joins a tuple to every projection it is weakly similar to.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtensionGraph {
    /// Tuple index of each left vertex.
    pub left: Vec<usize>,
    /// Right vertices, pairwise distinct.
    pub right: Vec<Vec<Symbol>>,
    /// `adjacency[l]` lists the right vertices adjacent to left vertex `l`.
    pub adjacency: Vec<Vec<usize>>,
    /// Number of right vertices that were materialized to build the graph.
    pub realized_right: usize,
}

impl ExtensionGraph {
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }
}

/// `mate[l]` is the right vertex matched to left vertex `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub mate: Vec<Option<usize>>,
    pub size: usize,
}

impl Matching {
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(l, r)| r.map(|r| (l, r)))
    }
}

pub fn max_matching(g: &ExtensionGraph) -> Matching {
    hopcroft_karp(g.right.len(), &g.adjacency)
}

const UNSEEN: usize = usize::MAX;

/// Hopcroft–Karp on an adjacency list. Deterministic: vertices and
/// neighbours are scanned in index order.
pub fn hopcroft_karp(n_right: usize, adjacency: &[Vec<usize>]) -> Matching {
    let n_left = adjacency.len();
    let mut mate_l: Vec<Option<usize>> = vec![None; n_left];
    let mut mate_r: Vec<Option<usize>> = vec![None; n_right];
    let mut dist = vec![UNSEEN; n_left];
    let mut size = 0;

    loop {
        // BFS layering from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..n_left {
            if mate_l[l].is_none() {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = UNSEEN;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adjacency[l] {
                match mate_r[r] {
                    None => found = true,
                    Some(l2) if dist[l2] == UNSEEN => {
                        dist[l2] = dist[l] + 1;
                        queue.push_back(l2);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }

        // layered DFS, iterative
        let mut next_edge = vec![0usize; n_left];
        for root in 0..n_left {
            if mate_l[root].is_some() {
                continue;
            }
            let mut path: Vec<usize> = vec![root];
            while let Some(&l) = path.last() {
                if next_edge[l] == adjacency[l].len() {
                    dist[l] = UNSEEN;
                    path.pop();
                    continue;
                }
                let r = adjacency[l][next_edge[l]];
                next_edge[l] += 1;
                match mate_r[r] {
                    None => {
                        // augment along the path; each left takes the right
                        // vertex it advanced through last
                        let mut r = r;
                        while let Some(l) = path.pop() {
                            let prev = mate_l[l];
                            mate_l[l] = Some(r);
                            mate_r[r] = Some(l);
                            match prev {
                                Some(p) => r = p,
                                None => break,
                            }
                        }
                        size += 1;
                        path.clear();
                    }
                    Some(l2) if dist[l2] == dist[l] + 1 => path.push(l2),
                    Some(_) => {}
                }
            }
        }
    }
    Matching { mate: mate_l, size }
}

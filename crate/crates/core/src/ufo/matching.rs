use std::collections::VecDeque;

use crate::graphs::{BfsScratch, BoundedGraph, NONE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    U,
    O,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::U => "U",
            Side::O => "O",
        }
    }
}

/// `W` on one side with fewer than `|W|` partners within distance `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallCertificate {
    pub side: Side,
    pub w: Vec<u32>,
    pub neighborhood: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchingOutcome {
    /// Bijection `U → O` as `(u, o)` pairs sorted by `u`.
    Complete(Vec<(u32, u32)>),
    Deficient(HallCertificate),
}

/// Maximum matching in the bipartite graph `{(u,o) : d(u,o) ≤ k}`; returns it
/// when complete and a Hall certificate from the deficient side otherwise.
pub fn bounded_matching(bg: &BoundedGraph, u: &[u32], o: &[u32], k: u32) -> MatchingOutcome {
    let mut o_index = vec![NONE; 0];
    if !o.is_empty() {
        o_index = vec![NONE; bg.len()];
        for (j, &v) in o.iter().enumerate() {
            o_index[v as usize] = j as u32;
        }
    }
    let mut scratch = BfsScratch::new();
    let mut adj: Vec<Vec<u32>> = Vec::with_capacity(u.len());
    for &x in u {
        let mut row = Vec::new();
        if !o.is_empty() {
            scratch.run(bg, &[x], None, k);
            for &y in scratch.reached() {
                let j = o_index[y as usize];
                if j != NONE {
                    row.push(j);
                }
            }
            row.sort_unstable();
        }
        adj.push(row);
    }
    let (match_u, match_o) = hopcroft_karp(&adj, o.len());
    let size = match_u.iter().filter(|&&j| j != NONE).count();
    if size == u.len() && size == o.len() {
        let pairs = u.iter().zip(&match_u).map(|(&x, &j)| (x, o[j as usize])).collect();
        return MatchingOutcome::Complete(pairs);
    }
    if size < u.len() {
        let (w, n) = hall_set(&adj, &match_u, &match_o);
        MatchingOutcome::Deficient(HallCertificate {
            side: Side::U,
            w: w.into_iter().map(|i| u[i as usize]).collect(),
            neighborhood: n.into_iter().map(|j| o[j as usize]).collect(),
        })
    } else {
        let mut radj = vec![Vec::new(); o.len()];
        for (i, row) in adj.iter().enumerate() {
            for &j in row {
                radj[j as usize].push(i as u32);
            }
        }
        let (w, n) = hall_set(&radj, &match_o, &match_u);
        MatchingOutcome::Deficient(HallCertificate {
            side: Side::O,
            w: w.into_iter().map(|j| o[j as usize]).collect(),
            neighborhood: n.into_iter().map(|i| u[i as usize]).collect(),
        })
    }
}

/// Returns `(match_left, match_right)` with [`NONE`] for unmatched vertices.
pub(crate) fn hopcroft_karp(adj: &[Vec<u32>], right: usize) -> (Vec<u32>, Vec<u32>) {
    let left = adj.len();
    let mut ml = vec![NONE; left];
    let mut mr = vec![NONE; right];
    let mut layer = vec![NONE; left];
    loop {
        // BFS layering from free left vertices
        let mut queue = VecDeque::new();
        for i in 0..left {
            if ml[i] == NONE {
                layer[i] = 0;
                queue.push_back(i as u32);
            } else {
                layer[i] = NONE;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i as usize] {
                let partner = mr[j as usize];
                if partner == NONE {
                    found = true;
                } else if layer[partner as usize] == NONE {
                    layer[partner as usize] = layer[i as usize] + 1;
                    queue.push_back(partner);
                }
            }
        }
        if !found {
            break;
        }
        let mut next_edge = vec![0usize; left];
        for i in 0..left {
            if ml[i] == NONE {
                augment(i as u32, adj, &mut ml, &mut mr, &mut layer, &mut next_edge);
            }
        }
    }
    (ml, mr)
}

fn augment(start: u32, adj: &[Vec<u32>], ml: &mut [u32], mr: &mut [u32], layer: &mut [u32], next: &mut [usize]) -> bool {
    // iterative DFS along layered edges
    let mut stack: Vec<u32> = vec![start];
    let mut via: Vec<u32> = Vec::new();
    while let Some(&i) = stack.last() {
        let iu = i as usize;
        if next[iu] == adj[iu].len() {
            layer[iu] = NONE;
            stack.pop();
            via.pop();
            continue;
        }
        let j = adj[iu][next[iu]];
        next[iu] += 1;
        let partner = mr[j as usize];
        if partner == NONE {
            via.push(j);
            for (depth, &l) in stack.iter().enumerate() {
                let r = via[depth];
                ml[l as usize] = r;
                mr[r as usize] = l;
            }
            return true;
        }
        if layer[partner as usize] != NONE && layer[partner as usize] == layer[iu] + 1 {
            via.push(j);
            stack.push(partner);
        }
    }
    false
}

/// König-style alternating reachability from unmatched left vertices.
fn hall_set(adj: &[Vec<u32>], ml: &[u32], mr: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut seen_l = vec![false; adj.len()];
    let mut seen_r = vec![false; mr.len()];
    let mut queue: VecDeque<u32> = VecDeque::new();
    for i in 0..adj.len() {
        if ml[i] == NONE {
            seen_l[i] = true;
            queue.push_back(i as u32);
        }
    }
    while let Some(i) = queue.pop_front() {
        for &j in &adj[i as usize] {
            if !seen_r[j as usize] {
                seen_r[j as usize] = true;
                let p = mr[j as usize];
                if p != NONE && !seen_l[p as usize] {
                    seen_l[p as usize] = true;
                    queue.push_back(p);
                }
            }
        }
    }
    let w = (0..adj.len() as u32).filter(|&i| seen_l[i as usize]).collect();
    let n = (0..mr.len() as u32).filter(|&j| seen_r[j as usize]).collect();
    (w, n)
}

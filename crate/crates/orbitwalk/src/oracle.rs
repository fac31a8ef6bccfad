//! Exhaustive reference implementations for small instances.
//!
//! Everything here recomputes its answer by direct enumeration over raw
//! state spaces, sharing no machinery with the main algorithms, so the two
//! can be compared in tests. Budgets guard against accidentally feeding an
//! instance whose state space cannot be enumerated.

use itertools::Itertools;
use std::collections::VecDeque;

use crate::autgroup::Permutation;
use crate::tgraph::{TemporalGraph, TemporalWalk};

/// Size limits for the exhaustive searches.
pub struct OracleBudget {
    /// Largest vertex count for which all `n!` permutations are tried.
    pub max_n_perms: usize,
    /// Largest vertex count for exploration over visited-set states.
    pub max_n_explore: usize,
    /// Cap on `(vertex, visited set, time)` states in exploration search.
    pub max_states: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_n_perms: 8, max_n_explore: 10, max_states: 64_000_000 }
    }
}

/// Every vertex permutation that maps each snapshot onto itself, in
/// lexicographic order of image vectors.
pub fn brute_automorphisms(g: &TemporalGraph, budget: &OracleBudget) -> Vec<Permutation> {
    let n = g.n();
    assert!(
        n <= budget.max_n_perms,
        "refusing to enumerate {n}! permutations (budget {})",
        budget.max_n_perms
    );
    let mut found = Vec::new();
    'perms: for image in (0..n).permutations(n) {
        for layer in g.layers() {
            for (u, v) in layer.edges() {
                if !layer.has_edge(image[u], image[v]) {
                    continue 'perms;
                }
            }
        }
        found.push(Permutation::from_image(image).expect("itertools yields bijections"));
    }
    found
}

/// Earliest-arrival walk from `u` at time `t0` to `v`, by breadth-first
/// search over explicit `(vertex, time)` states. `None` when unreachable
/// within the lifetime.
pub fn foremost_oracle(g: &TemporalGraph, u: usize, v: usize, t0: u64) -> Option<TemporalWalk> {
    let n = g.n();
    if t0 > g.lifetime() + 1 {
        return None;
    }
    let horizon = (g.lifetime() + 1 - t0) as usize + 1;
    let idx = |vertex: usize, t: u64| -> usize { (t - t0) as usize * n + vertex };
    let mut seen = vec![false; horizon * n];
    let mut pred: Vec<Option<usize>> = vec![None; horizon * n];
    let mut queue = VecDeque::new();
    seen[idx(u, t0)] = true;
    queue.push_back((u, t0));
    while let Some((x, t)) = queue.pop_front() {
        if x == v {
            // Backtrack through predecessor states.
            let mut positions = Vec::new();
            let mut cur = Some(idx(x, t));
            while let Some(c) = cur {
                positions.push(c % n);
                cur = pred[c];
            }
            positions.reverse();
            return Some(TemporalWalk { start_time: t0, positions });
        }
        if t > g.lifetime() {
            continue;
        }
        let layer = g.layer_at(t);
        let mut push = |y: usize, from: usize, t_next: u64| {
            let i = idx(y, t_next);
            if !seen[i] {
                seen[i] = true;
                pred[i] = Some(idx(from, t_next - 1));
                queue.push_back((y, t_next));
            }
        };
        push(x, x, t + 1);
        for y in layer.neighbors(x).ones() {
            push(y, x, t + 1);
        }
    }
    None
}

/// Minimum number of steps to visit every vertex starting from `u` at time
/// `t0`, by search over `(vertex, visited set, time)` states. `None` when no
/// complete exploration fits in the lifetime.
pub fn optimal_exploration_span(
    g: &TemporalGraph,
    u: usize,
    t0: u64,
    budget: &OracleBudget,
) -> Option<u64> {
    let n = g.n();
    assert!(
        n <= budget.max_n_explore,
        "refusing visited-set search over {n} vertices (budget {})",
        budget.max_n_explore
    );
    assert!(t0 >= 1 && t0 <= g.lifetime() + 1);
    let horizon = (g.lifetime() + 1 - t0) + 1;
    let states = n as u64 * (1u64 << n) * horizon;
    assert!(states <= budget.max_states, "state space {states} exceeds budget");

    let full: u32 = (1u32 << n) - 1;
    let idx = |vertex: usize, mask: u32, t: u64| -> usize {
        ((t - t0) as usize * (1usize << n) + mask as usize) * n + vertex
    };
    let mut seen = vec![false; states as usize];
    let mut queue = VecDeque::new();
    let start_mask = 1u32 << u;
    seen[idx(u, start_mask, t0)] = true;
    queue.push_back((u, start_mask, t0));
    while let Some((x, mask, t)) = queue.pop_front() {
        if mask == full {
            return Some(t - t0);
        }
        if t > g.lifetime() {
            continue;
        }
        let layer = g.layer_at(t);
        let i = idx(x, mask, t + 1);
        if !seen[i] {
            seen[i] = true;
            queue.push_back((x, mask, t + 1));
        }
        for y in layer.neighbors(x).ones() {
            let next_mask = mask | (1u32 << y);
            let i = idx(y, next_mask, t + 1);
            if !seen[i] {
                seen[i] = true;
                queue.push_back((y, next_mask, t + 1));
            }
        }
    }
    None
}

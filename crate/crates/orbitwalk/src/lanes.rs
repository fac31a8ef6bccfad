//! Spreading through an orbit by crossing orbit boundaries.
//!
//! Restrict a reachability sweep to edges whose endpoints lie in different
//! orbits and the sweep becomes symmetric enough to count: conjugating by a
//! group element maps the closure of one source set to the closure of its
//! image, so the number of vertices such a closure picks up in each orbit
//! depends only on how many sources it started from. Averaging turns that
//! into a floor: sources X inside an orbit S spread, within r steps (r the
//! number of orbits, every snapshot connected), into at least
//! ceil(|X| * |S'| / |S|) vertices of every orbit S'.
//!
//! [`reach_h_in_orbit`] combines that floor with a plain sweep to collect
//! `h` vertices of a chosen orbit quickly: a plain sweep is fast when the
//! orbit count is large, boundary spreading when it is small, and running
//! both and keeping the cheaper one is never much worse than either.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::autgroup::OrbitPartition;
use crate::tgraph::{SweepTrace, TemporalGraph, TemporalWalk};

/// Floor on |closure(X) ∩ S'| for |X| sources inside an orbit of size `s`
/// spreading into an orbit of size `s_prime`.
pub fn spread_floor(x: usize, s: usize, s_prime: usize) -> usize {
    assert!(s > 0);
    (x * s_prime).div_ceil(s)
}

/// Closure of `sources` under boundary edges over `steps` steps starting at
/// the beginning of step `t0`, truncated at the end of the lifetime.
pub fn lane_closure(
    g: &TemporalGraph,
    part: &OrbitPartition,
    sources: &[usize],
    t0: u64,
    steps: u64,
) -> FixedBitSet {
    let class = part.classes();
    let mut reached = FixedBitSet::with_capacity(g.n());
    for &v in sources {
        reached.insert(v);
    }
    let mut add = Vec::new();
    for t in t0..t0 + steps {
        if t > g.lifetime() {
            break;
        }
        let layer = g.layer_at(t);
        add.clear();
        for v in reached.ones() {
            for w in layer.neighbors(v).ones() {
                if class[w] != class[v] && !reached.contains(w) {
                    add.push(w);
                }
            }
        }
        for &w in &add {
            reached.insert(w);
        }
    }
    reached
}

/// A set of vertices gathered inside one orbit, with a witness walk to each
/// from the common start.
#[derive(Debug)]
pub struct OrbitReach {
    /// Distinct vertices of the requested orbit, by (arrival, vertex).
    pub targets: Vec<usize>,
    /// walks[i] runs from the start to targets[i]; all end by `end_time`.
    pub walks: Vec<TemporalWalk>,
    /// Beginning-of-step time at which the gathering finished.
    pub end_time: u64,
    pub steps_used: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReachError {
    #[error("lifetime ends before {wanted} vertices of the orbit are reachable")]
    OutOfTime { wanted: usize },
}

struct Gather {
    trace: SweepTrace,
    end: u64,
}

/// Reaches at least `h` distinct vertices of the given orbit from
/// `(start, t0)` and returns witness walks to `h` of them.
///
/// Requires `1 <= h <= |orbit|` and every snapshot connected. The number of
/// steps used is at most `5 * (min(ceil(h*n/|S|), h*r) + r)`: a plain sweep
/// triggers a boundary phase once some orbit holds a proportional share of
/// the reached set, while the alternative alternates boundary phases with
/// single spreading steps; the cheaper of the two is kept.
pub fn reach_h_in_orbit(
    g: &TemporalGraph,
    part: &OrbitPartition,
    start: usize,
    t0: u64,
    orbit: usize,
    h: usize,
) -> Result<OrbitReach, ReachError> {
    let s = part.orbit(orbit).len();
    assert!(h >= 1 && h <= s, "want {h} vertices of an orbit of {s}");
    assert!(t0 >= 1 && t0 <= g.lifetime() + 1);
    assert!(start < g.n());

    let a = strategy_spread(g, part, start, t0, orbit, h);
    let b = strategy_pump(g, part, start, t0, orbit, h);
    let won = match (a, b) {
        (Some(ga), Some(gb)) => {
            if ga.end <= gb.end {
                ga
            } else {
                gb
            }
        }
        (Some(ga), None) => ga,
        (None, Some(gb)) => gb,
        (None, None) => return Err(ReachError::OutOfTime { wanted: h }),
    };

    let used = won.end - t0;
    let r = part.r() as u64;
    let route_cap = ((h * g.n()) as u64).div_ceil(s as u64).min(h as u64 * r);
    assert!(
        used <= 5 * (route_cap + r),
        "gathering {h} of {s} took {used} steps, past the {} budget",
        5 * (route_cap + r)
    );

    let mut targets: Vec<usize> = part
        .orbit(orbit)
        .iter()
        .copied()
        .filter(|&v| won.trace.reached(v))
        .collect();
    targets.sort_by_key(|&v| (won.trace.arrival[v], v));
    targets.truncate(h);
    let walks: Vec<TemporalWalk> = targets.iter().map(|&v| won.trace.walk_to(v)).collect();
    debug_assert!(walks.iter().all(|w| w.end_time() <= won.end));
    Ok(OrbitReach { targets, walks, end_time: won.end, steps_used: used })
}

/// Plain sweep until some orbit holds its proportional share, then one
/// boundary phase.
fn strategy_spread(
    g: &TemporalGraph,
    part: &OrbitPartition,
    start: usize,
    t0: u64,
    orbit: usize,
    h: usize,
) -> Option<Gather> {
    let r = part.r();
    let s = part.orbit(orbit).len();
    let caps: Vec<usize> = (0..r)
        .map(|o| {
            let so = part.orbit(o).len();
            so.min(spread_floor(h, s, so) + 1)
        })
        .collect();

    let mut trace = SweepTrace::new(g.n(), start, t0);
    let mut counts = vec![0usize; r];
    counts[part.orbit_of(start)] = 1;
    let mut lane_left = 0u64;
    let mut t = t0;
    loop {
        if counts[orbit] >= h {
            return Some(Gather { trace, end: t });
        }
        if lane_left == 0 && (0..r).any(|o| counts[o] >= caps[o]) {
            lane_left = r as u64;
        }
        if t > g.lifetime() {
            return None;
        }
        let added = if lane_left > 0 {
            lane_left -= 1;
            trace.advance_across(g.layer_at(t), t, part.classes())
        } else {
            trace.advance(g.layer_at(t), t)
        };
        for w in added {
            counts[part.orbit_of(w)] += 1;
        }
        t += 1;
    }
}

/// Rounds of boundary phase, one spreading step, boundary phase: each round
/// nets at least one more vertex of the target orbit.
fn strategy_pump(
    g: &TemporalGraph,
    part: &OrbitPartition,
    start: usize,
    t0: u64,
    orbit: usize,
    h: usize,
) -> Option<Gather> {
    let r = part.r() as u64;
    let mut trace = SweepTrace::new(g.n(), start, t0);
    let mut count = usize::from(part.orbit_of(start) == orbit);
    let mut t = t0;
    loop {
        let before = count;
        for seg in 0..3 {
            let steps = if seg == 1 { 1 } else { r };
            for _ in 0..steps {
                if count >= h {
                    return Some(Gather { trace, end: t });
                }
                if t > g.lifetime() {
                    return None;
                }
                let added = if seg == 1 {
                    trace.advance(g.layer_at(t), t)
                } else {
                    trace.advance_across(g.layer_at(t), t, part.classes())
                };
                for w in added {
                    count += usize::from(part.orbit_of(w) == orbit);
                }
                t += 1;
            }
        }
        debug_assert!(
            count > before,
            "a full round must gather a fresh vertex when every snapshot is connected"
        );
    }
}

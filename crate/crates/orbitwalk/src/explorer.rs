//! Exploration walks that lean on symmetry.
//!
//! The baseline visits all vertices with greedy earliest-arrival legs, at
//! most n-1 steps each. The orbit-aware algorithms beat that by exploring a
//! fraction of an orbit once and replaying the plan through group elements
//! chosen to land on fresh vertices, so most of the orbit is covered by
//! transformed copies of one sub-walk instead of by individual legs.
//!
//! The recursive planner doubles its coverage target per merge: a plan
//! covering k' vertices, a gathered set of c*k' reachable landing points,
//! and a transform steering the second copy through one of them yield
//! (2 - 1/c) * k' covered vertices. Repeating until the target is a whole
//! orbit fraction gives the exponent 1 / log2((2c-1)/c) on the merge count,
//! which the tuning knob in [`choose_c`] trades against coverage per phase.

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::autgroup::{
    automorphism_generators, canonical_coloring, orbit_partition, OrbitPartition, PermGroup,
};
use crate::lanes::reach_h_in_orbit;
use crate::tgraph::{
    apply_automorphism_to_walk, concat_walks, foremost_walk, SweepTrace, TemporalGraph,
    TemporalWalk,
};
use crate::walktrans::{best_transform, walk_orbit_coverage, TransformError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExploreError {
    #[error("lifetime ends before the walk completes")]
    OutOfTime,
    #[error("walk exceeded its step budget")]
    OverBudget,
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Smallest c >= 2 whose merge exponent 1/log2((2c-1)/c) stays within
/// 1 + 0.9 * eps.
pub fn choose_c(eps: f64) -> usize {
    assert!(eps > 0.0, "tuning parameter must be positive");
    let cap = 1.0 + 0.9 * eps;
    (2usize..)
        .find(|&c| {
            let rho = (2 * c - 1) as f64 / c as f64;
            1.0 / rho.log2() <= cap
        })
        .unwrap()
}

/// Step budget the fraction planner is allowed for covering `k` vertices of
/// an orbit of size `s` among `r` orbits: greedy legs below the base size,
/// two half plans plus one gathering window above it.
pub fn fraction_budget(n: usize, s: usize, r: usize, k: usize, c: usize) -> u64 {
    if k <= 2 * c {
        return k as u64 * n as u64;
    }
    let kp = (k * c).div_ceil(2 * c - 1);
    let h = (c * kp).min(s);
    let route = ((h * n) as u64).div_ceil(s as u64).min((h * r) as u64);
    2 * fraction_budget(n, s, r, kp, c) + 5 * (route + r as u64)
}

/// Greedy tour from `(v0, t0)`: repeatedly walk an earliest-arrival leg to
/// the nearest untoured vertex of `want` (ties to the smallest id) until
/// `k` distinct members are on the walk. `cap` bounds the total span.
fn greedy_tour(
    g: &TemporalGraph,
    want: &FixedBitSet,
    k: usize,
    v0: usize,
    t0: u64,
    cap: Option<u64>,
) -> Result<TemporalWalk, ExploreError> {
    assert!(k <= want.count_ones(..));
    let mut walk = TemporalWalk::single(v0, t0);
    let mut toured = FixedBitSet::with_capacity(g.n());
    let mut count = 0;
    if want.contains(v0) {
        toured.insert(v0);
        count = 1;
    }
    while count < k {
        let (v, tau) = (walk.end_vertex(), walk.end_time());
        let mut trace = SweepTrace::new(g.n(), v, tau);
        let mut t = tau;
        let found = loop {
            if t > g.lifetime() {
                return Err(ExploreError::OutOfTime);
            }
            let added = trace.advance(g.layer_at(t), t);
            t += 1;
            let hit = added
                .iter()
                .copied()
                .filter(|&w| want.contains(w) && !toured.contains(w))
                .min();
            if let Some(w) = hit {
                break w;
            }
            if added.is_empty() && trace.count() == g.n() {
                unreachable!("an untoured wanted vertex is reached but was not detected");
            }
        };
        let leg = trace.walk_to(found);
        walk = concat_walks(g, &walk, &leg).expect("leg continues the tour");
        toured.insert(found);
        count += 1;
        if let Some(cap) = cap {
            if walk.span() > cap {
                return Err(ExploreError::OverBudget);
            }
        }
    }
    Ok(walk)
}

/// Walk from `(x0, t0)` visiting at least `k` distinct vertices of the
/// orbit, where `x0` lies in the orbit and `c * k <= |orbit|`.
///
/// The span never exceeds [`fraction_budget`]. A greedy tour is accepted
/// when it fits that same budget; otherwise the plan is built recursively
/// from two half plans joined through a gathered landing set.
pub fn explore_fraction<R: Rng>(
    g: &TemporalGraph,
    part: &OrbitPartition,
    group: &PermGroup,
    orbit: usize,
    k: usize,
    x0: usize,
    t0: u64,
    c: usize,
    rng: &mut R,
) -> Result<TemporalWalk, ExploreError> {
    let s = part.orbit(orbit).len();
    assert!(k >= 1 && c * k <= s.max(c), "fraction target {k} too large for an orbit of {s}");
    fraction_inner(g, part, group, orbit, k, x0, t0, c, rng, true)
}

#[allow(clippy::too_many_arguments)]
fn fraction_inner<R: Rng>(
    g: &TemporalGraph,
    part: &OrbitPartition,
    group: &PermGroup,
    orbit: usize,
    k: usize,
    x0: usize,
    t0: u64,
    c: usize,
    rng: &mut R,
    try_greedy: bool,
) -> Result<TemporalWalk, ExploreError> {
    let (n, s, r) = (g.n(), part.orbit(orbit).len(), part.r());
    debug_assert_eq!(part.orbit_of(x0), orbit);
    let mask = part.mask(orbit);
    let budget = fraction_budget(n, s, r, k, c);

    if k <= 2 * c {
        let w = greedy_tour(g, mask, k, x0, t0, Some(budget))?;
        return Ok(w);
    }
    if try_greedy {
        // A tour that fits the recursive budget keeps every guarantee the
        // recursion offers and is usually far shorter on tame schedules.
        if let Ok(w) = greedy_tour(g, mask, k, x0, t0, Some(budget)) {
            return Ok(w);
        }
    }

    let kp = (k * c).div_ceil(2 * c - 1);
    assert!(c * kp <= s, "half target {kp} overflows the orbit");
    let w1 = fraction_inner(g, part, group, orbit, kp, x0, t0, c, rng, false)?;
    let y1 = walk_orbit_coverage(&w1, mask);
    if y1.len() >= k {
        return Ok(w1);
    }

    let h = c * kp;
    let gathered = reach_h_in_orbit(g, part, w1.end_vertex(), w1.end_time(), orbit, h)
        .map_err(|_| ExploreError::OutOfTime)?;
    let t2 = gathered.end_time;
    let w2 = fraction_inner(g, part, group, orbit, kp, x0, t2, c, rng, false)?;
    let y2 = walk_orbit_coverage(&w2, mask);

    let mut covered = FixedBitSet::with_capacity(n);
    for &v in &y1 {
        covered.insert(v);
    }
    let mut landing = FixedBitSet::with_capacity(n);
    for &v in &gathered.targets {
        landing.insert(v);
    }
    let choice = best_transform(group, &y2, &covered, x0, &landing, c, rng)?;

    let entry = choice.sigma.apply(x0);
    let idx = gathered.targets.iter().position(|&v| v == entry).unwrap();
    let mut connector = gathered.walks[idx].clone();
    connector.wait_until(t2);
    let replay = apply_automorphism_to_walk(&choice.sigma, &w2);

    let joined = concat_walks(g, &w1, &connector).expect("connector starts at the half plan's end");
    let total = concat_walks(g, &joined, &replay).expect("replay starts at the landing point");
    let cover = walk_orbit_coverage(&total, mask).len();
    assert!(cover >= k, "merge covered {cover} of the {k} required vertices");
    assert!(total.span() <= budget, "merge span {} over budget {budget}", total.span());
    Ok(total)
}

/// Walk from `(start, t0)` visiting every vertex of the orbit: phases of one
/// fraction plan each, steered onto the uncovered part by a transform and
/// entered through an earliest-arrival connector padded to exactly n steps.
pub fn explore_orbit<R: Rng>(
    g: &TemporalGraph,
    part: &OrbitPartition,
    group: &PermGroup,
    orbit: usize,
    start: usize,
    t0: u64,
    c: usize,
    rng: &mut R,
) -> Result<TemporalWalk, ExploreError> {
    let n = g.n() as u64;
    let s = part.orbit(orbit).len();
    let mask = part.mask(orbit);
    let x0 = part.orbit(orbit)[0];
    let k = (s / c).max(1);

    let mut walk = TemporalWalk::single(start, t0);
    let mut covered = FixedBitSet::with_capacity(g.n());
    if mask.contains(start) {
        covered.insert(start);
    }
    let mut phases = 0u64;
    while covered.count_ones(..) < s {
        phases += 1;
        assert!(
            phases <= 2 * c as u64 * (s.max(2).ilog2() as u64 + 2),
            "uncovered part of the orbit is not shrinking geometrically"
        );
        let (v, tau) = (walk.end_vertex(), walk.end_time());
        if tau + n > g.lifetime() + 1 {
            return Err(ExploreError::OutOfTime);
        }
        let plan = explore_fraction(g, part, group, orbit, k, x0, tau + n, c, rng)?;
        let y = walk_orbit_coverage(&plan, mask);
        let choice = best_transform(group, &y, &covered, x0, mask, c, rng)?;

        let mut connector =
            foremost_walk(g, v, choice.sigma.apply(x0), tau).map_err(|_| ExploreError::OutOfTime)?;
        if connector.end_time() > tau + n {
            return Err(ExploreError::OutOfTime);
        }
        connector.wait_until(tau + n);
        let replay = apply_automorphism_to_walk(&choice.sigma, &plan);
        let joined = concat_walks(g, &walk, &connector).expect("connector continues the walk");
        walk = concat_walks(g, &joined, &replay).expect("replay starts at the connector's end");

        let before = covered.count_ones(..);
        for &y_v in &y {
            covered.insert(choice.sigma.apply(y_v));
        }
        assert!(covered.count_ones(..) > before, "phase covered nothing new");
    }
    Ok(walk)
}

/// Integer ceiling of the cube root.
fn cube_root_ceil(n: usize) -> usize {
    (1..).find(|&i| i * i * i >= n).unwrap()
}

/// Walk from `(start, t0)` visiting every vertex of the orbit in gathered
/// chunks: a cheap reachability gather proposes a nearby batch of cube-root
/// size, and a greedy tour visits the fresh part of the batch.
pub fn explore_orbit_basic(
    g: &TemporalGraph,
    part: &OrbitPartition,
    orbit: usize,
    start: usize,
    t0: u64,
) -> Result<TemporalWalk, ExploreError> {
    let s = part.orbit(orbit).len();
    let mask = part.mask(orbit);
    let h = cube_root_ceil(g.n()).min(s);

    let mut walk = TemporalWalk::single(start, t0);
    let mut covered = FixedBitSet::with_capacity(g.n());
    if mask.contains(start) {
        covered.insert(start);
    }
    let mut chunks = 0;
    while covered.count_ones(..) < s {
        chunks += 1;
        assert!(chunks <= s, "every chunk must cover a fresh vertex");
        let (v, tau) = (walk.end_vertex(), walk.end_time());
        let gathered = reach_h_in_orbit(g, part, v, tau, orbit, h)
            .map_err(|_| ExploreError::OutOfTime)?;
        let mut batch: FixedBitSet = FixedBitSet::with_capacity(g.n());
        for &t in &gathered.targets {
            if !covered.contains(t) {
                batch.insert(t);
            }
        }
        if batch.count_ones(..) == 0 {
            // The whole gathered batch was already covered: take one direct
            // leg to the nearest uncovered member instead.
            let mut rest = mask.clone();
            rest.difference_with(&covered);
            batch = rest;
            let leg = greedy_tour(g, &batch, 1, v, tau, None)?;
            covered.insert(leg.end_vertex());
            walk = concat_walks(g, &walk, &leg).expect("leg continues the walk");
            continue;
        }
        let want = batch.count_ones(..);
        let tour = greedy_tour(g, &batch, want, v, tau, None)?;
        for b in batch.ones() {
            covered.insert(b);
        }
        walk = concat_walks(g, &walk, &tour).expect("tour continues the walk");
    }
    Ok(walk)
}

/// Greedy earliest-arrival tour of every vertex. The span is at most
/// n * (n - 1) when every snapshot is connected.
pub fn explore_baseline(
    g: &TemporalGraph,
    start: usize,
    t0: u64,
) -> Result<TemporalWalk, ExploreError> {
    let n = g.n();
    let mut all = FixedBitSet::with_capacity(n);
    all.insert_range(..);
    let walk = greedy_tour(g, &all, n, start, t0, None)?;
    assert!(
        walk.span() <= (n * (n - 1)) as u64,
        "greedy legs exceeded n-1 steps; was a snapshot disconnected?"
    );
    Ok(walk)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExploreAlgo {
    /// Greedy legs over the whole vertex set.
    Baseline,
    /// Orbit by orbit, gathered cube-root chunks.
    OrbitChunks,
    /// Orbit by orbit, transformed fraction phases tuned by eps.
    Phases,
}

pub struct Exploration {
    pub walk: TemporalWalk,
    /// Whether an orbit algorithm gave up and the baseline took over.
    pub fell_back: bool,
}

/// Walk from `(start, t0)` visiting every vertex of the graph. The orbit
/// algorithms chain orbits in canonical order, skipping any orbit the walk
/// has already covered in passing, and fall back to the baseline when a
/// budget or the lifetime runs out.
pub fn explore_all(
    g: &TemporalGraph,
    start: usize,
    t0: u64,
    algo: ExploreAlgo,
    eps: f64,
    seed: u64,
) -> Result<Exploration, ExploreError> {
    let orbit_run = |result: Result<TemporalWalk, ExploreError>| -> Result<Exploration, ExploreError> {
        match result {
            Ok(walk) => Ok(Exploration { walk, fell_back: false }),
            Err(_) => {
                let walk = explore_baseline(g, start, t0)?;
                Ok(Exploration { walk, fell_back: true })
            }
        }
    };
    let out = match algo {
        ExploreAlgo::Baseline => {
            Exploration { walk: explore_baseline(g, start, t0)?, fell_back: false }
        }
        ExploreAlgo::OrbitChunks => {
            let part = canonical_coloring(g);
            orbit_run(chain_orbits(g, &part, start, t0, |g, walk| {
                explore_orbit_basic(g, &part, walk.1, walk.0.end_vertex(), walk.0.end_time())
            }))?
        }
        ExploreAlgo::Phases => {
            let group = automorphism_generators(g);
            let part = orbit_partition(g, &group);
            let c = choose_c(eps);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            orbit_run(chain_orbits(g, &part, start, t0, |g, walk| {
                explore_orbit(
                    g,
                    &part,
                    &group,
                    walk.1,
                    walk.0.end_vertex(),
                    walk.0.end_time(),
                    c,
                    &mut rng,
                )
            }))?
        }
    };
    let mut seen = FixedBitSet::with_capacity(g.n());
    for &v in &out.walk.positions {
        seen.insert(v);
    }
    assert_eq!(seen.count_ones(..), g.n(), "exploration missed a vertex");
    Ok(out)
}

fn chain_orbits(
    g: &TemporalGraph,
    part: &OrbitPartition,
    start: usize,
    t0: u64,
    mut run: impl FnMut(&TemporalGraph, (&TemporalWalk, usize)) -> Result<TemporalWalk, ExploreError>,
) -> Result<TemporalWalk, ExploreError> {
    let mut walk = TemporalWalk::single(start, t0);
    let mut seen = FixedBitSet::with_capacity(g.n());
    seen.insert(start);
    for orbit in 0..part.r() {
        if part.orbit(orbit).iter().all(|&v| seen.contains(v)) {
            continue;
        }
        let piece = run(g, (&walk, orbit))?;
        for &v in &piece.positions {
            seen.insert(v);
        }
        walk = concat_walks(g, &walk, &piece).expect("orbit walk continues the chain");
    }
    Ok(walk)
}

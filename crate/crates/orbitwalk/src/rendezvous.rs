//! Two agents with private vertex names meeting on a shared schedule.
//!
//! Each agent knows the whole temporal graph, but only up to a private
//! relabeling of the vertices, and the two cannot communicate. Everything
//! an agent computes from its own copy that is label-invariant, it computes
//! identically to the other agent. The canonical orbit partition is label
//! invariant, so both agents agree on the smallest orbit as a set of actual
//! vertices without ever comparing names.
//!
//! The roles are asymmetric. The mover walks straight to the agreed orbit's
//! most canonical quickly-reachable vertex and parks there. The searcher
//! waits n steps for the mover to settle, then explores the whole agreed
//! orbit; passing the parked vertex ends the hunt.

use fixedbitset::FixedBitSet;
use rand::Rng;
use thiserror::Error;

use crate::autgroup::{
    automorphism_generators, canonical_coloring, orbit_partition, OrbitPartition, Permutation,
};
use crate::explorer::{choose_c, explore_baseline, explore_orbit};
use crate::tgraph::{
    apply_automorphism_to_walk, concat_walks, foremost_walk, TemporalGraph, TemporalWalk,
};

/// One agent's picture of the graph: the true graph with every vertex
/// renamed by `relabeling`, so private name `relabeling(v)` means true `v`.
pub struct AgentView {
    pub graph: TemporalGraph,
    relabeling: Permutation,
    inverse: Permutation,
}

impl AgentView {
    pub fn new(g: &TemporalGraph, relabeling: Permutation) -> Self {
        assert_eq!(relabeling.degree(), g.n());
        let inverse = relabeling.inverse();
        AgentView { graph: g.relabeled(&relabeling), relabeling, inverse }
    }

    pub fn to_private(&self, v: usize) -> usize {
        self.relabeling.apply(v)
    }

    pub fn to_true(&self, p: usize) -> usize {
        self.inverse.apply(p)
    }

    /// Translates a walk planned in private names back to true names.
    pub fn walk_to_true(&self, w: &TemporalWalk) -> TemporalWalk {
        apply_automorphism_to_walk(&self.inverse, w)
    }
}

/// The meeting place both agents deduce independently: the smallest orbit,
/// ties broken by canonical order. Its size is at most n divided by the
/// orbit count.
pub fn choose_meeting_orbit(part: &OrbitPartition) -> usize {
    let orbit = part.smallest_orbit();
    assert!(part.orbit(orbit).len() * part.r() <= part.n());
    orbit
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RendezvousError {
    #[error("lifetime ends before the protocol completes")]
    OutOfTime,
}

/// The mover's whole plan, in the agent's private names: an earliest
/// arrival walk to the meeting orbit member minimizing (arrival, canonical
/// rank), then parking until the end of the lifetime.
pub fn program_mover(view: &AgentView, start: usize) -> Result<TemporalWalk, RendezvousError> {
    let g = &view.graph;
    let part = canonical_coloring(g);
    let orbit = choose_meeting_orbit(&part);
    let mut best: Option<(u64, usize, TemporalWalk)> = None;
    for &v in part.orbit(orbit) {
        let Ok(w) = foremost_walk(g, start, v, 1) else { continue };
        let key = (w.end_time(), part.canonical_rank(v));
        if best.as_ref().is_none_or(|(t, r, _)| key < (*t, *r)) {
            best = Some((key.0, key.1, w));
        }
    }
    let Some((_, _, mut walk)) = best else { return Err(RendezvousError::OutOfTime) };
    walk.wait_until(g.lifetime() + 1);
    Ok(walk)
}

/// The searcher's whole plan, in the agent's private names: hold still for
/// n steps, explore the meeting orbit, then park. Falls back to exploring
/// everything greedily when the orbit walk does not fit the lifetime.
pub fn program_searcher<R: Rng>(
    view: &AgentView,
    start: usize,
    eps: f64,
    rng: &mut R,
) -> Result<TemporalWalk, RendezvousError> {
    let g = &view.graph;
    let n = g.n() as u64;
    if n + 1 > g.lifetime() + 1 {
        return Err(RendezvousError::OutOfTime);
    }
    let group = automorphism_generators(g);
    let part = orbit_partition(g, &group);
    let orbit = choose_meeting_orbit(&part);

    let mut walk = TemporalWalk::single(start, 1);
    walk.wait_until(n + 1);
    let hunt = explore_orbit(g, &part, &group, orbit, start, n + 1, choose_c(eps), rng)
        .or_else(|_| explore_baseline(g, start, n + 1))
        .map_err(|_| RendezvousError::OutOfTime)?;
    let mut walk = concat_walks(g, &walk, &hunt).expect("hunt starts where the wait ends");
    walk.wait_until(g.lifetime() + 1);
    Ok(walk)
}

#[derive(Debug)]
pub struct RendezvousOutcome {
    /// Beginning-of-step time of the first co-location.
    pub meet_time: u64,
    pub meet_vertex: usize,
    /// Both full-lifetime walks, in true names.
    pub mover_walk: TemporalWalk,
    pub searcher_walk: TemporalWalk,
    pub orbit_size: usize,
}

/// Runs the whole protocol: both agents plan in their own private names
/// from their own true start vertices, and the traces are compared in true
/// names. The protocol guarantees a meeting whenever both plans fit the
/// lifetime.
pub fn simulate<R: Rng>(
    g: &TemporalGraph,
    mover_names: &Permutation,
    searcher_names: &Permutation,
    mover_start: usize,
    searcher_start: usize,
    eps: f64,
    rng: &mut R,
) -> Result<RendezvousOutcome, RendezvousError> {
    let mover_view = AgentView::new(g, mover_names.clone());
    let searcher_view = AgentView::new(g, searcher_names.clone());

    let mover_private = program_mover(&mover_view, mover_view.to_private(mover_start))?;
    let searcher_private =
        program_searcher(&searcher_view, searcher_view.to_private(searcher_start), eps, rng)?;
    let mover_walk = mover_view.walk_to_true(&mover_private);
    let searcher_walk = searcher_view.walk_to_true(&searcher_private);

    let met = mover_walk
        .positions
        .iter()
        .zip(&searcher_walk.positions)
        .enumerate()
        .find(|(_, (a, b))| a == b);
    let (idx, (&v, _)) = met.expect("a parked mover must be found by a full orbit sweep");
    let meet_time = mover_walk.start_time + idx as u64;
    assert!(meet_time <= g.lifetime() + 1);

    // The meeting the protocol engineers happens inside the agreed orbit,
    // but the mover's transit may cross the waiting searcher even earlier
    // (or the two may start on the same vertex), so the first co-location
    // can land anywhere. What must hold is that the searcher swept the
    // whole agreed orbit, which is what forces a meeting at all.
    let part = canonical_coloring(g);
    let orbit = choose_meeting_orbit(&part);
    let mut swept = FixedBitSet::with_capacity(g.n());
    for &p in &searcher_walk.positions {
        swept.insert(p);
    }
    for &w in part.orbit(orbit) {
        assert!(swept.contains(w), "the sweep skipped vertex {w} of the agreed orbit");
    }
    Ok(RendezvousOutcome {
        meet_time,
        meet_vertex: v,
        mover_walk,
        searcher_walk,
        orbit_size: part.orbit(orbit).len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_circulant, gen_random_connected, gen_star};
    use crate::tgraph::{validate_walk, Layer};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_names(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
        let mut image: Vec<usize> = (0..n).collect();
        image.shuffle(rng);
        Permutation::from_image(image).unwrap()
    }

    #[test]
    fn private_names_round_trip() {
        let g = gen_star(8, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let names = random_names(8, &mut rng);
        let view = AgentView::new(&g, names);
        for v in 0..8 {
            assert_eq!(view.to_true(view.to_private(v)), v);
        }
    }

    #[test]
    fn both_labelings_pick_the_same_meeting_set() {
        let g = gen_star(10, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let view = AgentView::new(&g, random_names(10, &mut rng));
            let part = canonical_coloring(&view.graph);
            let orbit = choose_meeting_orbit(&part);
            let mut in_true: Vec<usize> =
                part.orbit(orbit).iter().map(|&p| view.to_true(p)).collect();
            in_true.sort_unstable();

            let base_part = canonical_coloring(&g);
            let base: Vec<usize> =
                base_part.orbit(choose_meeting_orbit(&base_part)).to_vec();
            assert_eq!(in_true, base);
        }
    }

    #[test]
    fn agents_meet_despite_disagreeing_names() {
        let g = gen_star(8, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for case in 0..6 {
            let pi1 = random_names(8, &mut rng);
            let pi2 = random_names(8, &mut rng);
            let s1 = case % 8;
            let s2 = (3 * case + 1) % 8;
            let out = simulate(&g, &pi1, &pi2, s1, s2, 1.0, &mut rng).unwrap();
            assert!(validate_walk(&g, &out.mover_walk));
            assert!(validate_walk(&g, &out.searcher_walk));
            assert_eq!(out.mover_walk.start_vertex(), s1);
            assert_eq!(out.searcher_walk.start_vertex(), s2);
            let idx = (out.meet_time - 1) as usize;
            assert_eq!(out.mover_walk.positions[idx], out.meet_vertex);
            assert_eq!(out.searcher_walk.positions[idx], out.meet_vertex);
        }
    }

    #[test]
    fn fully_symmetric_rings_still_meet() {
        let g = gen_circulant(10, 100, &[vec![1], vec![3]]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pi1 = random_names(10, &mut rng);
        let pi2 = random_names(10, &mut rng);
        let out = simulate(&g, &pi1, &pi2, 0, 7, 1.0, &mut rng).unwrap();
        // One orbit covering everything: the meeting set is the whole ring.
        assert_eq!(out.orbit_size, 10);
        assert!(out.meet_time <= 100);
    }

    #[test]
    fn early_crossings_count_as_meetings() {
        // Static path: the agreed orbit is the singleton centre, yet the
        // mover's transit crosses the searcher's waiting spot first.
        let path = Layer::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let g = TemporalGraph::from_parts(5, 20, vec![path], vec![], vec![0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pi1 = random_names(5, &mut rng);
        let pi2 = random_names(5, &mut rng);

        let out = simulate(&g, &pi1, &pi2, 0, 1, 1.0, &mut rng).unwrap();
        assert_eq!((out.meet_time, out.meet_vertex), (2, 1));
        assert_eq!(out.orbit_size, 1);

        // Identical starts meet before anyone moves.
        let out = simulate(&g, &pi1, &pi2, 4, 4, 1.0, &mut rng).unwrap();
        assert_eq!((out.meet_time, out.meet_vertex), (1, 4));
    }

    #[test]
    fn protocol_is_deterministic() {
        let g = gen_random_connected(9, 81, 3, 2, 21);
        let pi1 = random_names(9, &mut ChaCha8Rng::seed_from_u64(31));
        let pi2 = random_names(9, &mut ChaCha8Rng::seed_from_u64(32));
        let one = simulate(&g, &pi1, &pi2, 2, 5, 1.0, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        let two = simulate(&g, &pi1, &pi2, 2, 5, 1.0, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        assert_eq!(one.meet_time, two.meet_time);
        assert_eq!(one.meet_vertex, two.meet_vertex);
        assert_eq!(one.searcher_walk.positions, two.searcher_walk.positions);
    }

    #[test]
    fn short_lifetimes_fail_cleanly() {
        let g = gen_circulant(12, 5, &[vec![1]]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pi = random_names(12, &mut rng);
        let pi2 = random_names(12, &mut rng);
        let err = simulate(&g, &pi, &pi2, 0, 6, 1.0, &mut rng).unwrap_err();
        assert_eq!(err, RendezvousError::OutOfTime);
    }
}

//! Picking a symmetry that moves a walk onto fresh ground.
//!
//! A walk that covered some vertices of an orbit can be replayed through any
//! group element; the image walk is just as valid and covers the image
//! vertices. Averaging over the group (or over the elements steering the
//! walk's start into a prescribed target set) shows some element always
//! lands a guaranteed fraction of the coverage outside the already-visited
//! set; [`best_transform`] finds one.

use fixedbitset::FixedBitSet;
use rand::Rng;
use thiserror::Error;

use crate::autgroup::{enumerate_group, EnumError, PermGroup, Permutation};
use crate::tgraph::TemporalWalk;

/// Group sizes up to this are enumerated; larger groups are sampled.
pub const ENUMERATE_CAP: usize = 1_000_000;

/// Samples drawn per unit of `sample_factor` before the bound is rechecked.
const SAMPLES_PER_FACTOR: usize = 64;

/// The distinct vertices of `walk` lying in the given orbit, ascending.
pub fn walk_orbit_coverage(walk: &TemporalWalk, orbit: &FixedBitSet) -> Vec<usize> {
    let mut seen = FixedBitSet::with_capacity(orbit.len());
    for &v in &walk.positions {
        if orbit.contains(v) {
            seen.insert(v);
        }
    }
    seen.ones().collect()
}

/// All group elements sending `u` into the set `x`, in enumeration order.
pub fn aut_maps_into(
    group: &PermGroup,
    u: usize,
    x: &FixedBitSet,
) -> Result<Vec<Permutation>, EnumError> {
    let elems = enumerate_group(group, ENUMERATE_CAP)?;
    Ok(elems.into_iter().filter(|s| x.contains(s.apply(u))).collect())
}

pub struct TransformOutcome {
    pub sigma: Permutation,
    /// Vertices of the transformed coverage that fall outside `t`.
    pub new_count: usize,
    /// Whether the whole group was scanned (max) or only a sample.
    pub exact: bool,
    /// Group elements examined.
    pub candidates: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("anchor target set is empty")]
    EmptyTarget,
    #[error("no sampled candidate met the coverage bound after {tried} draws")]
    GuaranteeUnmet { tried: usize },
}

/// Finds a group element `sigma` with `sigma(u)` in `x` whose transformed
/// coverage `sigma(y)` has many vertices outside `t`.
///
/// Preconditions: `y` lists distinct vertices of one orbit S, `t` and `x`
/// are subsets of S, `x` is nonempty, and `u` is the walk's start in S.
/// Averaging over the elements with `sigma(u)` in `x` guarantees some
/// candidate reaches `new_count * |x| >= (|x| - |t|) * |y|`; with `x = S`
/// that constraint is vacuous and every element competes.
///
/// Groups up to [`ENUMERATE_CAP`] are scanned exhaustively (ties broken
/// toward the lexicographically smallest image) and the bound is asserted.
/// Larger groups are sampled uniformly, `SAMPLES_PER_FACTOR * sample_factor`
/// draws at a time, escalating once by a factor of four before giving up
/// with [`TransformError::GuaranteeUnmet`].
pub fn best_transform(
    group: &PermGroup,
    y: &[usize],
    t: &FixedBitSet,
    u: usize,
    x: &FixedBitSet,
    sample_factor: usize,
    rng: &mut impl Rng,
) -> Result<TransformOutcome, TransformError> {
    let x_size = x.count_ones(..);
    if x_size == 0 {
        return Err(TransformError::EmptyTarget);
    }
    let t_size = t.count_ones(..);
    let k = y.len();
    // new_count * |x| >= (|x| - |t|) * k, as integers.
    let required = (x_size.saturating_sub(t_size)) * k;
    let score = |s: &Permutation| y.iter().filter(|&&v| !t.contains(s.apply(v))).count();

    match enumerate_group(group, ENUMERATE_CAP) {
        Ok(elems) => {
            let mut best: Option<(usize, Permutation)> = None;
            let candidates = elems.len();
            for s in elems {
                if !x.contains(s.apply(u)) {
                    continue;
                }
                let sc = score(&s);
                let better = match &best {
                    None => true,
                    Some((bs, bp)) => sc > *bs || (sc == *bs && s < *bp),
                };
                if better {
                    best = Some((sc, s));
                }
            }
            let (new_count, sigma) = best.expect("nonempty target within the orbit");
            assert!(
                new_count * x_size >= required,
                "averaging bound failed over the full group: {new_count} * {x_size} < {required}"
            );
            Ok(TransformOutcome { sigma, new_count, exact: true, candidates })
        }
        Err(_) => {
            let mut tried = 0;
            let mut best: Option<(usize, Permutation)> = None;
            for round in 0..2 {
                let draws = SAMPLES_PER_FACTOR * sample_factor.max(1) * if round == 0 { 1 } else { 4 };
                for _ in 0..draws {
                    tried += 1;
                    let s = group.random_element(rng);
                    if !x.contains(s.apply(u)) {
                        continue;
                    }
                    let sc = score(&s);
                    let better = match &best {
                        None => true,
                        Some((bs, bp)) => sc > *bs || (sc == *bs && s < *bp),
                    };
                    if better {
                        best = Some((sc, s));
                    }
                }
                if let Some((new_count, _)) = &best {
                    if new_count * x_size >= required {
                        let (new_count, sigma) = best.unwrap();
                        return Ok(TransformOutcome {
                            sigma,
                            new_count,
                            exact: false,
                            candidates: tried,
                        });
                    }
                }
            }
            Err(TransformError::GuaranteeUnmet { tried })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgroup::{automorphism_generators, canonical_coloring};
    use crate::gen::{gen_circulant, gen_star};
    use crate::tgraph::fixtures::{mirrored_three, static_cycle};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits(n: usize, members: &[usize]) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(n);
        for &v in members {
            b.insert(v);
        }
        b
    }

    #[test]
    fn anchored_elements_of_the_ring() {
        let g = static_cycle(8, 2);
        let grp = automorphism_generators(&g);
        let sel = aut_maps_into(&grp, 0, &bits(8, &[0, 4])).unwrap();
        assert_eq!(sel.len(), 4);
        let mut images: Vec<Vec<usize>> = sel.iter().map(|s| s.as_slice().to_vec()).collect();
        images.sort();
        let expect: Vec<Vec<usize>> = vec![
            (0..8).collect(),                         // identity
            (0..8).map(|v| (8 - v) % 8).collect(),    // reflection through 0
            (0..8).map(|v| (v + 4) % 8).collect(),    // half turn
            (0..8).map(|v| (12 - v) % 8).collect(),   // reflection through 2
        ];
        let mut expect = expect;
        expect.sort();
        assert_eq!(images, expect);
    }

    #[test]
    fn anchored_counts_are_uniform_within_an_orbit() {
        // The number of elements sending u to x depends only on the orbits.
        let g = static_cycle(6, 1);
        let grp = automorphism_generators(&g);
        for u in 0..6 {
            for x in 0..6 {
                let sel = aut_maps_into(&grp, u, &bits(6, &[x])).unwrap();
                assert_eq!(sel.len(), 2, "u={u} x={x}");
            }
        }

        let m = mirrored_three();
        let mg = automorphism_generators(&m);
        assert_eq!(aut_maps_into(&mg, 0, &bits(3, &[2])).unwrap().len(), 1);
        assert_eq!(aut_maps_into(&mg, 0, &bits(3, &[0])).unwrap().len(), 1);
        assert_eq!(aut_maps_into(&mg, 1, &bits(3, &[1])).unwrap().len(), 2);
        assert_eq!(aut_maps_into(&mg, 1, &bits(3, &[0])).unwrap().len(), 0);
    }

    #[test]
    fn ring_coverage_rotates_onto_fresh_vertices() {
        let g = static_cycle(9, 3);
        let grp = automorphism_generators(&g);
        let y = [0, 1, 2];
        let t = bits(9, &[0, 1, 2]);
        let full: FixedBitSet = bits(9, &(0..9).collect::<Vec<_>>());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = best_transform(&grp, &y, &t, 0, &full, 1, &mut rng).unwrap();
        assert!(out.exact);
        assert_eq!(out.new_count, 3);
        // Among all elements moving {0,1,2} fully outside itself, the
        // rotation by three has the lexicographically smallest image.
        let expect: Vec<usize> = (0..9).map(|v| (v + 3) % 9).collect();
        assert_eq!(out.sigma.as_slice(), &expect[..]);
    }

    #[test]
    fn bounds_hold_for_random_requests() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let star = gen_star(8, 3);
        let ring = gen_circulant(10, 50, &[vec![1], vec![3]]);
        for g in [&star, &ring] {
            let grp = automorphism_generators(g);
            let part = canonical_coloring(g);
            let orbit = (0..part.r()).max_by_key(|&i| part.orbit(i).len()).unwrap();
            let members = part.orbit(orbit).to_vec();
            let mask = part.mask(orbit).clone();
            for _ in 0..40 {
                // Random distinct y, random t, x = whole orbit or a random
                // superset of t.
                let mut y: Vec<usize> = members
                    .iter()
                    .copied()
                    .filter(|_| rng.gen_bool(0.5))
                    .collect();
                if y.is_empty() {
                    y.push(members[rng.gen_range(0..members.len())]);
                }
                let t_members: Vec<usize> =
                    members.iter().copied().filter(|_| rng.gen_bool(0.3)).collect();
                let t = bits(g.n(), &t_members);
                let u = y[0];
                let x = if rng.gen_bool(0.5) {
                    mask.clone()
                } else {
                    let mut extra: Vec<usize> = t_members.clone();
                    for &v in &members {
                        if rng.gen_bool(0.5) {
                            extra.push(v);
                        }
                    }
                    if extra.is_empty() {
                        extra.push(members[0]);
                    }
                    bits(g.n(), &extra)
                };
                let x_size = x.count_ones(..);
                let t_size = t.count_ones(..);
                let out = best_transform(&grp, &y, &t, u, &x, 1, &mut rng).unwrap();
                assert!(x.contains(out.sigma.apply(u)));
                assert!(out.new_count * x_size >= x_size.saturating_sub(t_size) * y.len());
            }
        }
    }

    #[test]
    fn oversized_groups_fall_back_to_sampling() {
        // 13 interchangeable vertices: 13! elements is far past the cap.
        let g = gen_star(16, 4);
        let grp = automorphism_generators(&g);
        assert!(grp.order().unwrap() > ENUMERATE_CAP as u128);
        let part = canonical_coloring(&g);
        let orbit = (0..part.r()).max_by_key(|&i| part.orbit(i).len()).unwrap();
        let members = part.orbit(orbit).to_vec();
        assert_eq!(members.len(), 13);
        let mask = part.mask(orbit).clone();

        let y = &members[0..4];
        let t = bits(g.n(), &members[0..6]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let out = best_transform(&grp, y, &t, y[0], &mask, 2, &mut rng).unwrap();
        assert!(!out.exact);
        assert!(mask.contains(out.sigma.apply(y[0])));
        assert!(out.new_count * 13 >= (13 - 6) * 4);
    }
}

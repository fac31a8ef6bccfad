//! Acceptance suite: nine end-to-end checks, one test each, covering group
//! exactness, counting and spread properties, transform quotas, exploration
//! validity and scaling, rendezvous, the start-placement adversary, and the
//! baseline gap. Each test asserts everything it claims, checks its own
//! runtime against a pinned budget, and prints one PASS line with the
//! numbers it measured (visible with `--nocapture`).

use std::time::Instant;

use fixedbitset::FixedBitSet;
use orbitwalk::autgroup::{
    automorphism_generators, canonical_coloring, enumerate_group, orbit_partition, Permutation,
};
use orbitwalk::explorer::{explore_all, explore_baseline, ExploreAlgo};
use orbitwalk::gen::{
    adversary_fix_starts, cycle_phase_params, gen_circulant, gen_orbit_chain,
    gen_random_connected, gen_star, gen_star_extended, run_program, Action, AgentProgram,
};
use orbitwalk::lanes::{lane_closure, spread_floor};
use orbitwalk::oracle::{
    brute_automorphisms, foremost_oracle, optimal_exploration_span, OracleBudget,
};
use orbitwalk::rendezvous::{choose_meeting_orbit, simulate};
use orbitwalk::tgraph::{validate_walk, TemporalGraph};
use orbitwalk::walktrans::best_transform;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Three vertices over three steps with no symmetry at all: triangle, then
/// path 0-1-2, then the path 0-2-1.
fn rigid_triple() -> TemporalGraph {
    TemporalGraph::from_step_edges(
        3,
        &[vec![(0, 1), (0, 2), (1, 2)], vec![(0, 1), (1, 2)], vec![(0, 2), (1, 2)]],
    )
    .unwrap()
}

/// Triangle, path 0-1-2, triangle; swapping 0 and 2 is the one nontrivial
/// symmetry.
fn mirrored_triple() -> TemporalGraph {
    TemporalGraph::from_step_edges(
        3,
        &[vec![(0, 1), (0, 2), (1, 2)], vec![(0, 1), (1, 2)], vec![(0, 1), (0, 2), (1, 2)]],
    )
    .unwrap()
}

/// Random connected instances small enough for permutation brute force.
fn small_pool(count: usize, seed0: u64) -> Vec<TemporalGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed0);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(2..=7);
            let lifetime = rng.gen_range(1..=4u64);
            let period = rng.gen_range(1..=lifetime) as usize;
            let extra = rng.gen_range(0..3);
            gen_random_connected(
                n,
                lifetime,
                period,
                extra,
                seed0.wrapping_mul(1000).wrapping_add(i as u64),
            )
        })
        .collect()
}

/// Random connected instances with room to explore (lifetime n^2).
fn mid_pool(count: usize, n_lo: usize, n_hi: usize, seed0: u64) -> Vec<TemporalGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed0);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(n_lo..=n_hi);
            gen_random_connected(
                n,
                (n * n) as u64,
                3,
                2,
                seed0.wrapping_mul(1000).wrapping_add(i as u64),
            )
        })
        .collect()
}

fn ring(n: usize) -> TemporalGraph {
    gen_circulant(n, (n as u64) * (n as u64), &[vec![1]])
}

/// Least-squares slope of ln(y) against ln(x).
fn loglog_slope(rows: &[(usize, u64)]) -> f64 {
    let xs: Vec<f64> = rows.iter().map(|r| (r.0 as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| (r.1 as f64).ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

fn coverage(g: &TemporalGraph, positions: &[usize]) -> usize {
    let mut seen = FixedBitSet::with_capacity(g.n());
    for &v in positions {
        seen.insert(v);
    }
    seen.count_ones(..)
}

#[test]
fn c1_automorphism_groups_match_brute_force() {
    let t = Instant::now();
    let budget = OracleBudget::default();
    let mut checked = 0usize;
    let mut instances = small_pool(200, 11);
    instances.push(rigid_triple());
    instances.push(mirrored_triple());
    for (i, g) in instances.iter().enumerate() {
        let group = automorphism_generators(g);
        let mut ours = enumerate_group(&group, 1_000_000).expect("small groups enumerate");
        let mut brute = brute_automorphisms(g, &budget);
        ours.sort();
        brute.sort();
        assert_eq!(ours, brute, "group mismatch on instance {i} (n={})", g.n());
        checked += 1;
    }
    // The two fixed triples pin the smallest orders exactly.
    assert_eq!(automorphism_generators(&rigid_triple()).order(), Some(1));
    assert_eq!(automorphism_generators(&mirrored_triple()).order(), Some(2));
    assert!(checked >= 202);
    let secs = t.elapsed().as_secs_f64();
    assert!(secs < 60.0, "took {secs:.1}s, budget 60s");
    eprintln!("PASS 1 automorphism groups equal brute force on {checked} instances ({secs:.1}s)");
}

#[test]
fn c2_transport_counts_uniform_within_orbits() {
    // In any permutation group the elements sending u to x form either an
    // empty set or a coset of the stabilizer of u, so the count depends
    // only on the orbit x lies in, never on x itself.
    let t = Instant::now();
    let mut instances = small_pool(120, 21);
    instances.push(rigid_triple());
    instances.push(mirrored_triple());
    instances.push(gen_star(8, 3));
    instances.push(gen_star(10, 3));
    instances.push(gen_star_extended(8, 6));
    instances.push(gen_circulant(10, 50, &[vec![1], vec![3]]));
    instances.push(gen_circulant(12, 60, &[vec![1, 5]]));
    instances.push(gen_orbit_chain(&[3, 4, 5], 20));
    let mut checked = 0usize;
    for (i, g) in instances.iter().enumerate() {
        let group = automorphism_generators(g);
        let part = orbit_partition(g, &group);
        let elems = enumerate_group(&group, 1_000_000).expect("test groups enumerate");
        for u in 0..g.n() {
            let mut count = vec![0usize; g.n()];
            for sigma in &elems {
                count[sigma.apply(u)] += 1;
            }
            for o in 0..part.r() {
                let members = part.orbit(o);
                let c0 = count[members[0]];
                for &x in members {
                    assert_eq!(
                        count[x], c0,
                        "instance {i} (n={}): transport counts differ inside orbit {o}",
                        g.n()
                    );
                }
            }
        }
        checked += 1;
    }
    let secs = t.elapsed().as_secs_f64();
    assert!(secs < 60.0, "took {secs:.1}s, budget 60s");
    eprintln!("PASS 2 transport counts uniform within orbits on {checked} instances ({secs:.1}s)");
}

#[test]
fn c3_boundary_regularity_and_lane_floors() {
    let t = Instant::now();
    let mut instances = vec![
        gen_star(8, 3),
        gen_star(12, 4),
        gen_star_extended(8, 6),
        gen_star_extended(10, 7),
        gen_circulant(16, 256, &[vec![1, 3], vec![2, 5]]),
        gen_orbit_chain(&[3, 4, 5], 144),
    ];
    instances.extend(mid_pool(30, 5, 10, 31));

    // Neighbour counts into any fixed orbit are constant across an orbit
    // in every snapshot: symmetries act transitively inside an orbit and
    // preserve each snapshot and each orbit.
    let mut layers_checked = 0usize;
    for g in &instances {
        let part = canonical_coloring(g);
        for layer in g.layers() {
            for o in 0..part.r() {
                let members = part.orbit(o);
                let profile = |v: usize| -> Vec<usize> {
                    let mut counts = vec![0usize; part.r()];
                    for w in layer.neighbors(v).ones() {
                        counts[part.orbit_of(w)] += 1;
                    }
                    counts
                };
                let first = profile(members[0]);
                for &v in members {
                    assert_eq!(profile(v), first, "irregular degrees in orbit {o} (n={})", g.n());
                }
            }
            layers_checked += 1;
        }
    }

    // Spreading along boundary edges for r steps reaches at least a
    // proportional share of every orbit.
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut samples = 0usize;
    while samples < 1000 {
        let g = &instances[rng.gen_range(0..instances.len())];
        let part = canonical_coloring(g);
        let r = part.r() as u64;
        let orbit = rng.gen_range(0..part.r());
        let members = part.orbit(orbit);
        let sources: Vec<usize> =
            members.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if sources.is_empty() {
            continue;
        }
        let t0 = rng.gen_range(1..=(g.lifetime() - r).max(1));
        let closure = lane_closure(g, &part, &sources, t0, r);
        for o in 0..part.r() {
            let got = part.orbit(o).iter().filter(|&&v| closure.contains(v)).count();
            let floor = spread_floor(sources.len(), members.len(), part.orbit(o).len());
            assert!(
                got >= floor,
                "lane floor broken: n={} t0={t0} orbit {o}: {got} < {floor}",
                g.n()
            );
            samples += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    assert!(secs < 120.0, "took {secs:.1}s, budget 120s");
    eprintln!(
        "PASS 3 degree regularity on {layers_checked} layers, lane floors on {samples} samples ({secs:.1}s)"
    );
}

#[test]
fn c4_transform_quota_bounds() {
    let t = Instant::now();
    // Orders pinned first: the hub instances carry factorial groups, the
    // two-layer rings exactly the 2n rotations and reflections.
    let star12 = gen_star(12, 4);
    let star10 = gen_star(10, 3);
    let ring10 = gen_circulant(10, 50, &[vec![1], vec![3]]);
    let ring12 = gen_circulant(12, 60, &[vec![1], vec![5]]);
    assert_eq!(automorphism_generators(&star12).order(), Some(362_880));
    assert_eq!(automorphism_generators(&star10).order(), Some(40_320));
    assert_eq!(automorphism_generators(&ring10).order(), Some(20));
    assert_eq!(automorphism_generators(&ring12).order(), Some(24));

    let mut requests = 0usize;
    for (gi, g) in [star12, star10, ring10, ring12].iter().enumerate() {
        let group = automorphism_generators(g);
        let part = orbit_partition(g, &group);
        let mut rng = ChaCha8Rng::seed_from_u64(40 + gi as u64);
        let orbits: Vec<usize> = (0..part.r()).filter(|&o| part.orbit(o).len() >= 2).collect();
        for req in 0..100 {
            let orbit = orbits[rng.gen_range(0..orbits.len())];
            let members = part.orbit(orbit);
            let s = members.len();
            let x = part.mask(orbit);

            // Three request shapes: an arbitrary covered set, and covered
            // sets capped at a half or a third of the orbit.
            let t_cap = match req % 3 {
                0 => rng.gen_range(0..s),
                1 => s / 2,
                _ => s / 3,
            };
            let mut shuffled = members.to_vec();
            shuffled.shuffle(&mut rng);
            let t_len = rng.gen_range(0..=t_cap);
            let mut t_mask = FixedBitSet::with_capacity(g.n());
            for &v in &shuffled[..t_len] {
                t_mask.insert(v);
            }
            let mut y: Vec<usize> =
                members.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
            if y.is_empty() {
                y.push(members[0]);
            }
            let u = members[rng.gen_range(0..s)];

            let out = best_transform(&group, &y, &t_mask, u, x, 1, &mut rng)
                .expect("transform request succeeds");
            assert!(group.contains(&out.sigma), "returned element outside the group");
            assert!(x.contains(out.sigma.apply(u)), "anchor landed outside the target set");
            let recount =
                y.iter().filter(|&&v| !t_mask.contains(out.sigma.apply(v))).count();
            assert_eq!(recount, out.new_count, "reported fresh count is wrong");
            // Averaging quota: the best element uncovers at least the
            // uncovered fraction of the orbit, applied to y.
            assert!(
                out.new_count * s >= (s - t_len) * y.len(),
                "quota missed: {} * {s} < ({s} - {t_len}) * {}",
                out.new_count,
                y.len()
            );
            // With the covered set capped at s/c the quota specializes to
            // a (c-1)/c share of y.
            match req % 3 {
                1 => assert!(2 * out.new_count >= y.len()),
                2 => assert!(3 * out.new_count >= 2 * y.len()),
                _ => {}
            }
            requests += 1;
        }
    }
    assert!(requests >= 400);
    let secs = t.elapsed().as_secs_f64();
    assert!(secs < 120.0, "took {secs:.1}s, budget 120s");
    eprintln!("PASS 4 transform quotas met on {requests} requests over 4 instances ({secs:.1}s)");
}

#[test]
fn c5_exploration_valid_and_complete() {
    let t = Instant::now();
    let mut instances = vec![
        gen_star(8, 3),
        gen_star(12, 4),
        gen_star(16, 5),
        gen_star(64, 8),
        gen_star_extended(8, 6),
        gen_star_extended(12, 9),
        gen_star_extended(16, 16),
        ring(64),
        ring(128),
        ring(256),
        ring(512),
        gen_circulant(30, 900, &[vec![1], vec![7]]),
        gen_circulant(48, 2304, &[vec![1, 5], vec![7]]),
        gen_orbit_chain(&[3, 4, 5], 144),
        gen_orbit_chain(&[4, 6, 9], 361),
    ];
    instances.extend(mid_pool(15, 5, 10, 51));

    let algos = [ExploreAlgo::Baseline, ExploreAlgo::OrbitChunks, ExploreAlgo::Phases];
    let mut runs = 0usize;
    let mut fallbacks = 0usize;
    for (i, g) in instances.iter().enumerate() {
        for algo in algos {
            let out = explore_all(g, 0, 1, algo, 1.0, 9)
                .unwrap_or_else(|e| panic!("instance {i} (n={}) {algo:?}: {e}", g.n()));
            assert!(validate_walk(g, &out.walk), "invalid walk on instance {i} {algo:?}");
            assert_eq!(out.walk.start_vertex(), 0);
            assert_eq!(out.walk.start_time, 1);
            assert_eq!(
                coverage(g, &out.walk.positions),
                g.n(),
                "instance {i} (n={}) {algo:?} missed vertices",
                g.n()
            );
            fallbacks += out.fell_back as usize;
            runs += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    assert!(secs < 600.0, "took {secs:.1}s, budget 600s");
    eprintln!(
        "PASS 5 {runs} explorations (3 planners x {} instances, n up to 512) all valid and complete, {fallbacks} fallbacks ({secs:.1}s)",
        instances.len()
    );
}

#[test]
fn c6_scaling_and_hub_travel_time() {
    let t = Instant::now();
    // Spans on single-orbit rings must grow strictly subquadratically.
    let mut rows = Vec::new();
    for n in [64usize, 128, 256, 512] {
        let g = ring(n);
        let out = explore_all(&g, 0, 1, ExploreAlgo::Phases, 1.0, 7).unwrap();
        rows.push((n, out.walk.span()));
    }
    let slope = loglog_slope(&rows);
    assert!(slope <= 1.8, "ring span slope {slope:.3} above 1.8; rows {rows:?}");

    // On the hub instance with r orbits, moving between two interchangeable
    // vertices costs exactly r steps: one to enter the current hub, r-2
    // waiting for that hub's next turn, one to leave. Verified against the
    // exhaustive earliest-arrival search from every phase of the rotation.
    for n in [6usize, 8, 10] {
        let r = n / 2;
        let g = gen_star(n, r);
        let hubs = r - 1;
        for b1 in hubs..n {
            for b2 in hubs..n {
                if b1 == b2 {
                    continue;
                }
                for t0 in 1..=(hubs as u64 + 1) {
                    let w = foremost_oracle(&g, b1, b2, t0).expect("block vertices reachable");
                    assert_eq!(
                        w.span(),
                        r as u64,
                        "n={n} r={r}: {b1}->{b2} from t0={t0} took {} steps",
                        w.span()
                    );
                }
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    assert!(secs < 900.0, "took {secs:.1}s, budget 900s");
    eprintln!(
        "PASS 6 ring span slope {slope:.3} <= 1.8 (rows {rows:?}), hub travel time exactly r at n=6,8,10 ({secs:.1}s)"
    );
}

/// The meeting set an agent with this relabeling would commit to, named in
/// true vertices.
fn agreed_set(g: &TemporalGraph, names: &Permutation) -> Vec<usize> {
    let private = g.relabeled(names);
    let part = canonical_coloring(&private);
    let orbit = choose_meeting_orbit(&part);
    let inv = names.inverse();
    let mut set: Vec<usize> = part.orbit(orbit).iter().map(|&v| inv.apply(v)).collect();
    set.sort_unstable();
    set
}

fn random_names(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut image: Vec<usize> = (0..n).collect();
    image.shuffle(rng);
    Permutation::from_image(image).unwrap()
}

#[test]
fn c7_rendezvous_meets_and_scales() {
    let t = Instant::now();
    // Orbit counts from 1 (rings) through n (fully pinned extension).
    let mut instances = vec![
        ring(6),
        ring(8),
        ring(12),
        gen_star(8, 3),
        gen_star(10, 4),
        gen_star_extended(8, 5),
        gen_star_extended(8, 8),
        gen_star_extended(10, 7),
        gen_orbit_chain(&[3, 4], 49),
        gen_orbit_chain(&[3, 4, 5], 144),
    ];
    instances.extend(mid_pool(30, 5, 9, 71));

    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let mut triples = 0usize;
    for g in &instances {
        let n = g.n();
        for _ in 0..5 {
            let pi1 = random_names(n, &mut rng);
            let pi2 = random_names(n, &mut rng);
            let u1 = rng.gen_range(0..n);
            let u2 = rng.gen_range(0..n);
            assert_eq!(agreed_set(g, &pi1), agreed_set(g, &pi2), "agents disagree (n={n})");
            let out = simulate(g, &pi1, &pi2, u1, u2, 1.0, &mut rng)
                .unwrap_or_else(|e| panic!("n={n} u1={u1} u2={u2}: {e}"));
            assert!(validate_walk(g, &out.mover_walk));
            assert!(validate_walk(g, &out.searcher_walk));
            let idx = (out.meet_time - 1) as usize;
            assert_eq!(out.mover_walk.positions[idx], out.meet_vertex);
            assert_eq!(out.searcher_walk.positions[idx], out.meet_vertex);
            assert!(
                out.meet_time <= (n * n) as u64,
                "n={n}: met only at {}",
                out.meet_time
            );
            triples += 1;
        }
    }
    assert!(triples >= 200, "only {triples} triples");

    // Meeting time on single-orbit rings grows strictly subquadratically.
    let mut rows = Vec::new();
    for n in [64usize, 128, 256, 512] {
        let g = ring(n);
        let mut rrng = ChaCha8Rng::seed_from_u64(700 + n as u64);
        let pi1 = random_names(n, &mut rrng);
        let pi2 = random_names(n, &mut rrng);
        let out = simulate(&g, &pi1, &pi2, 0, n / 2, 1.0, &mut rrng).unwrap();
        rows.push((n, out.meet_time));
    }
    let slope = loglog_slope(&rows);
    assert!(slope <= 1.8, "meet-time slope {slope:.3} above 1.8; rows {rows:?}");
    let secs = t.elapsed().as_secs_f64();
    assert!(secs < 900.0, "took {secs:.1}s, budget 900s");
    eprintln!(
        "PASS 7 {triples} rendezvous triples met inside n^2 with agreeing orbit choices, ring meet-time slope {slope:.3} ({secs:.1}s)"
    );
}

#[test]
fn c8_start_adversary_prevents_meetings() {
    let t = Instant::now();
    let mut total_pairs = 0usize;
    for m in [11u32, 13] {
        let p = cycle_phase_params(m);
        let total = p.total_steps() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(80 + m as u64);
        let mut programs = vec![
            AgentProgram::all_wait(total),
            AgentProgram::constant(total, Action::Forward),
            AgentProgram::constant(total, Action::Backward),
            AgentProgram::alternating(total),
        ];
        for _ in 0..10 {
            programs.push(AgentProgram::random(total, &mut rng));
        }
        let mut pairs = 0usize;
        for i in 0..programs.len() {
            for j in i..programs.len() {
                let out = adversary_fix_starts(m, &programs[i], &programs[j])
                    .expect("standard programs stay in the analyzed regime");
                // The outcome's traces must match an independent replay.
                assert_eq!(run_program(&p, out.start_1, &programs[i]), out.trace_1);
                assert_eq!(run_program(&p, out.start_2, &programs[j]), out.trace_2);
                assert_eq!(out.trace_1.len() as u64, p.total_steps() + 1);
                for (k, (a, b)) in out.trace_1.iter().zip(&out.trace_2).enumerate() {
                    assert_ne!(a, b, "m={m} pair ({i},{j}): co-located at time {}", k + 1);
                }
                assert!(out.min_separation >= 1);
                pairs += 1;
            }
        }
        assert!(pairs >= 100, "m={m}: only {pairs} pairs");
        total_pairs += pairs;
    }
    let secs = t.elapsed().as_secs_f64();
    assert!(secs < 300.0, "took {secs:.1}s, budget 300s");
    eprintln!(
        "PASS 8 start placement kept agents apart through every phase for {total_pairs} program pairs at m=11,13 ({secs:.1}s)"
    );
}

#[test]
fn c9_baseline_validity_and_optimality_gap() {
    let t = Instant::now();
    // Validity everywhere, including the largest instances.
    let mut big = vec![
        ring(64),
        ring(512),
        gen_star(64, 8),
        gen_star_extended(16, 16),
        gen_circulant(48, 2304, &[vec![1, 5], vec![7]]),
    ];
    big.extend(mid_pool(10, 5, 10, 91));
    let mut validity_runs = 0usize;
    for g in &big {
        let w = explore_baseline(g, 0, 1).expect("baseline fits the lifetime");
        assert!(validate_walk(g, &w));
        assert_eq!(coverage(g, &w.positions), g.n());
        assert!(w.span() <= (g.n() * (g.n() - 1)) as u64);
        validity_runs += 1;
    }

    // Gap against the exhaustive optimum on everything small enough for
    // the visited-set search. The ratio is recorded, not bounded.
    let budget = OracleBudget::default();
    let mut gap_instances = vec![
        rigid_triple(),
        mirrored_triple(),
        gen_star(8, 3),
        gen_circulant(5, 20, &[vec![1]]),
        gen_circulant(7, 42, &[vec![1], vec![2]]),
        gen_circulant(9, 72, &[vec![1]]),
    ];
    gap_instances.extend(mid_pool(15, 5, 9, 92));
    let mut worst = 1.0f64;
    let mut gaps = 0usize;
    for g in &gap_instances {
        let w = explore_baseline(g, 0, 1).expect("baseline fits the lifetime");
        assert!(validate_walk(g, &w));
        assert_eq!(coverage(g, &w.positions), g.n());
        assert!(w.span() <= (g.n() * (g.n() - 1)) as u64);
        let best = optimal_exploration_span(g, 0, 1, &budget)
            .expect("connected instances are explorable in n^2 steps");
        assert!(w.span() >= best, "baseline beat the exhaustive optimum");
        if best > 0 {
            worst = worst.max(w.span() as f64 / best as f64);
        }
        gaps += 1;
    }
    let secs = t.elapsed().as_secs_f64();
    assert!(secs < 300.0, "took {secs:.1}s, budget 300s");
    eprintln!(
        "PASS 9 baseline within n(n-1) on {} instances; worst gap {worst:.2}x the exact optimum over {gaps} small instances ({secs:.1}s)",
        validity_runs + gaps
    );
}

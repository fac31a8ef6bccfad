//! Instance generators and the start-placement adversary.
//!
//! Every generator returns a connected instance with a compact periodic
//! schedule and a known orbit structure. The default lifetime is n^2 steps,
//! stored as a short head plus a repeating cycle so even the largest sizes
//! stay small in memory.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::tgraph::{Layer, TemporalGraph};

fn star_layer(n: usize, center: usize) -> Layer {
    let edges: Vec<(usize, usize)> =
        (0..n).filter(|&v| v != center).map(|v| (center.min(v), center.max(v))).collect();
    Layer::new(n, &edges)
}

fn circulant_layer(n: usize, strides: &[usize]) -> Layer {
    let mut edges = Vec::new();
    for &s in strides {
        assert!(s >= 1 && s < n, "stride must be in 1..n");
        for v in 0..n {
            let w = (v + s) % n;
            edges.push((v.min(w), v.max(w)));
        }
    }
    Layer::new(n, &edges)
}

/// Hub rotation instance with exactly `r` orbits: vertices `0..r-1` take
/// turns hosting a full star (one per step, cycling), so each hub is pinned
/// while the remaining `n-r+1` vertices stay freely interchangeable.
///
/// Requires `n` even and `2 <= r <= n/2`. Lifetime is n^2.
pub fn gen_star(n: usize, r: usize) -> TemporalGraph {
    assert!(n % 2 == 0 && n >= 4, "vertex count must be even and at least 4");
    assert!((2..=n / 2).contains(&r), "orbit count must satisfy 2 <= r <= n/2");
    let hubs = r - 1;
    let layers: Vec<Layer> = (0..hubs).map(|c| star_layer(n, c)).collect();
    let cycle: Vec<u32> = (0..hubs as u32).collect();
    let lifetime = (n as u64) * (n as u64);
    TemporalGraph::from_parts(n, lifetime, layers, vec![], cycle).unwrap()
}

/// Extends the hub instance past n/2 orbits, up to `r = n`: the schedule of
/// `gen_star(n, n/2)` runs for n^2 steps and one extra final snapshot pins
/// `r - n/2` of the interchangeable vertices onto a path, leaving the rest
/// as a single pendant block. `r = n/2` is the plain hub instance.
pub fn gen_star_extended(n: usize, r: usize) -> TemporalGraph {
    assert!(n % 2 == 0 && n >= 4, "vertex count must be even and at least 4");
    assert!((n / 2..=n).contains(&r), "orbit count must satisfy n/2 <= r <= n");
    if r == n / 2 {
        return gen_star(n, r);
    }
    let hubs = n / 2 - 1;
    let k = r - n / 2;
    let mut layers: Vec<Layer> = (0..hubs).map(|c| star_layer(n, c)).collect();

    // Path through all hubs then k former leaves; everything else hangs off
    // the path's end. Leaves on the path become singleton orbits, the
    // pendant block stays one orbit: (n/2 - 1) + k + 1 = r orbits.
    let path_end = hubs + k - 1;
    let mut edges: Vec<(usize, usize)> = (0..path_end).map(|v| (v, v + 1)).collect();
    for v in path_end + 1..n {
        edges.push((path_end, v));
    }
    layers.push(Layer::new(n, &edges));

    let base_lifetime = (n as u64) * (n as u64);
    let head: Vec<u32> = (0..base_lifetime)
        .map(|t| (t % hubs as u64) as u32)
        .chain([hubs as u32])
        .collect();
    TemporalGraph::from_parts(n, base_lifetime + 1, layers, head, vec![]).unwrap()
}

/// Rotation-symmetric instance: step t applies the circulant graph with
/// stride set `stride_sets[(t-1) % stride_sets.len()]`. Every snapshot must
/// come out connected (e.g. some stride coprime with n).
pub fn gen_circulant(n: usize, lifetime: u64, stride_sets: &[Vec<usize>]) -> TemporalGraph {
    assert!(n >= 3);
    assert!(!stride_sets.is_empty());
    let layers: Vec<Layer> = stride_sets.iter().map(|s| circulant_layer(n, s)).collect();
    for (i, layer) in layers.iter().enumerate() {
        assert!(layer.is_connected(), "stride set {i} gives a disconnected snapshot");
    }
    let cycle: Vec<u32> = (0..layers.len() as u32).collect();
    TemporalGraph::from_parts(n, lifetime, layers, vec![], cycle).unwrap()
}

/// Shape of the phase-schedule instance for a given odd `m >= 11`.
pub struct CyclePhaseParams {
    pub m: u32,
    /// Ring size 2^m - 1.
    pub n: usize,
    /// Number of phases, (m-7)/2.
    pub phases: usize,
    /// Steps per phase.
    pub phase_len: u64,
    /// Stride of each phase: 1, then 2^(2i) for phase i >= 2.
    pub strides: Vec<usize>,
}

impl CyclePhaseParams {
    pub fn total_steps(&self) -> u64 {
        self.phases as u64 * self.phase_len
    }
}

pub fn cycle_phase_params(m: u32) -> CyclePhaseParams {
    assert!(m % 2 == 1 && m >= 11, "m must be odd and at least 11");
    let n = (1usize << m) - 1;
    let phases = ((m - 7) / 2) as usize;
    let strides: Vec<usize> =
        (1..=phases).map(|i| if i == 1 { 1 } else { 1usize << (2 * i) }).collect();
    CyclePhaseParams { m, n, phases, phase_len: (n / 16) as u64, strides }
}

/// Ring on 2^m - 1 vertices whose stride grows geometrically through a
/// schedule of equal-length phases, then stays 1 for the rest of the n^2
/// lifetime. Every stride is a power of two and the ring size is odd, so
/// each snapshot is one connected cycle.
pub fn gen_cycle_phase(m: u32) -> TemporalGraph {
    let p = cycle_phase_params(m);
    let layers: Vec<Layer> = p.strides.iter().map(|&s| circulant_layer(p.n, &[s])).collect();
    for layer in &layers {
        debug_assert!(layer.is_connected());
    }
    let mut head = Vec::with_capacity(p.phases * p.phase_len as usize);
    for i in 0..p.phases as u32 {
        head.extend(std::iter::repeat(i).take(p.phase_len as usize));
    }
    let lifetime = (p.n as u64) * (p.n as u64);
    TemporalGraph::from_parts(p.n, lifetime, layers, head, vec![0]).unwrap()
}

/// Static chain of rotation classes with strictly increasing sizes. Rotating
/// every class in step is a symmetry, so each class is vertex-transitive;
/// the distinct sizes keep classes from mapping onto each other, so the
/// orbits are exactly the classes.
pub fn gen_orbit_chain(class_sizes: &[usize], lifetime: u64) -> TemporalGraph {
    assert!(!class_sizes.is_empty());
    assert!(class_sizes[0] >= 3, "classes need at least 3 vertices");
    assert!(
        class_sizes.windows(2).all(|w| w[0] < w[1]),
        "class sizes must strictly increase"
    );
    let n: usize = class_sizes.iter().sum();
    let mut edges = Vec::new();
    let mut offset = 0;
    let mut prev: Option<(usize, usize)> = None;
    for &size in class_sizes {
        for i in 0..size {
            let j = (i + 1) % size;
            let (a, b) = (offset + i, offset + j);
            edges.push((a.min(b), a.max(b)));
        }
        if let Some((prev_offset, prev_size)) = prev {
            // Linking rule a = b mod gcd commutes with rotating both classes.
            let d = gcd(prev_size, size);
            for i in 0..prev_size {
                for j in 0..size {
                    if i % d == j % d {
                        edges.push((prev_offset + i, offset + j));
                    }
                }
            }
        }
        prev = Some((offset, size));
        offset += size;
    }
    let layer = Layer::new(n, &edges);
    assert!(layer.is_connected());
    TemporalGraph::from_parts(n, lifetime, vec![layer], vec![], vec![0]).unwrap()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `period` random snapshots cycled to the given lifetime. Each snapshot is
/// a random recursive tree plus `extra_edges` random extra pairs, so every
/// step is connected. Deterministic in the seed.
pub fn gen_random_connected(
    n: usize,
    lifetime: u64,
    period: usize,
    extra_edges: usize,
    seed: u64,
) -> TemporalGraph {
    assert!(n >= 2 && period >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layers = Vec::with_capacity(period);
    for _ in 0..period {
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        let mut edges = Vec::new();
        for i in 1..n {
            let j = rng.gen_range(0..i);
            let (a, b) = (order[i], order[j]);
            edges.push((a.min(b), a.max(b)));
        }
        for _ in 0..extra_edges {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                edges.push((a.min(b), a.max(b)));
            }
        }
        layers.push(Layer::new(n, &edges));
    }
    let cycle: Vec<u32> = (0..period as u32).collect();
    TemporalGraph::from_parts(n, lifetime, layers, vec![], cycle).unwrap()
}

/// One agent's per-step intent on the phase instance. Programs are
/// oblivious: an action names a direction relative to the running phase's
/// stride, never a concrete vertex.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Action {
    Wait,
    Forward,
    Backward,
}

#[derive(Clone)]
pub struct AgentProgram {
    actions: Vec<Action>,
}

impl AgentProgram {
    pub fn new(actions: Vec<Action>) -> Self {
        AgentProgram { actions }
    }

    pub fn all_wait(len: usize) -> Self {
        AgentProgram { actions: vec![Action::Wait; len] }
    }

    pub fn constant(len: usize, action: Action) -> Self {
        AgentProgram { actions: vec![action; len] }
    }

    pub fn alternating(len: usize) -> Self {
        AgentProgram {
            actions: (0..len)
                .map(|i| if i % 2 == 0 { Action::Forward } else { Action::Backward })
                .collect(),
        }
    }

    pub fn random(len: usize, rng: &mut impl Rng) -> Self {
        AgentProgram {
            actions: (0..len)
                .map(|_| match rng.gen_range(0..3) {
                    0 => Action::Wait,
                    1 => Action::Forward,
                    _ => Action::Backward,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }
}

/// Positions at the beginning of steps `1..=total_steps+1` for an agent
/// running `prog` from `start` on the phase instance.
pub fn run_program(p: &CyclePhaseParams, start: usize, prog: &AgentProgram) -> Vec<usize> {
    let total = p.total_steps();
    assert!(prog.len() as u64 >= total, "program shorter than the phase schedule");
    let n = p.n;
    let mut pos = start % n;
    let mut trace = Vec::with_capacity(total as usize + 1);
    trace.push(pos);
    for t in 0..total {
        let s = p.strides[(t / p.phase_len) as usize];
        pos = match prog.actions[t as usize] {
            Action::Wait => pos,
            Action::Forward => (pos + s) % n,
            Action::Backward => (pos + n - s) % n,
        };
        trace.push(pos);
    }
    trace
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdversaryError {
    #[error("both programs must cover at least {needed} steps")]
    ProgramTooShort { needed: usize },
    #[error("agent drift left the analyzed wraparound regime in phase {phase}")]
    WraparoundOutsideRegime { phase: usize },
}

pub struct AdversaryOutcome {
    pub n: usize,
    pub start_1: usize,
    pub start_2: usize,
    /// Positions at the beginning of steps 1..=total+1.
    pub trace_1: Vec<usize>,
    pub trace_2: Vec<usize>,
    pub phases: usize,
    pub phase_len: u64,
    /// Smallest cyclic distance ever observed between the agents.
    pub min_separation: usize,
}

/// Chooses start vertices for two oblivious programs on the phase instance
/// so the agents sit on distinct vertices at every time through the whole
/// phase schedule.
///
/// Start bits are fixed from low to high. The low four bits steer each
/// agent's end-of-phase-1 position to residues 4 and 12 mod 16; each later
/// boundary fixes two more bits, parking the agents in quarter-sections of
/// the next stride half a turn apart. While a phase runs its stride moves
/// agents only in multiples of the anchored modulus, so the residues pin
/// the separation; wrapping fully around the odd ring perturbs a residue by
/// one per turn, which the quarter-section margin absorbs. Programs whose
/// drift outruns that margin are outside the analyzed regime and rejected.
pub fn adversary_fix_starts(
    m: u32,
    prog1: &AgentProgram,
    prog2: &AgentProgram,
) -> Result<AdversaryOutcome, AdversaryError> {
    let p = cycle_phase_params(m);
    let total = p.total_steps() as usize;
    if prog1.len() < total || prog2.len() < total {
        return Err(AdversaryError::ProgramTooShort { needed: total });
    }
    let n = p.n as i64;

    let phase_disp = |prog: &AgentProgram| -> Vec<i64> {
        (0..p.phases)
            .map(|i| {
                let s = p.strides[i] as i64;
                prog.actions()[i * p.phase_len as usize..(i + 1) * p.phase_len as usize]
                    .iter()
                    .map(|a| match a {
                        Action::Wait => 0,
                        Action::Forward => s,
                        Action::Backward => -s,
                    })
                    .sum::<i64>()
            })
            .collect()
    };
    let d1 = phase_disp(prog1);
    let d2 = phase_disp(prog2);

    let base1 = (n + 1) / 4;
    let base2 = 3 * (n + 1) / 4;
    let mut off1 = (4 - base1 - d1[0]).rem_euclid(16);
    let mut off2 = (12 - base2 - d2[0]).rem_euclid(16);
    let mut cum1 = d1[0];
    let mut cum2 = d2[0];
    for i in 2..p.phases {
        cum1 += d1[i - 1];
        cum2 += d2[i - 1];
        let shift = 2 * i as u32;
        let section = |end: i64| (end.rem_euclid(1 << (shift + 2))) >> shift;
        off1 += (-section(base1 + off1 + cum1)).rem_euclid(4) << shift;
        off2 += (2 - section(base2 + off2 + cum2)).rem_euclid(4) << shift;
    }

    let start_1 = (base1 + off1).rem_euclid(n) as usize;
    let start_2 = (base2 + off2).rem_euclid(n) as usize;
    let trace_1 = run_program(&p, start_1, prog1);
    let trace_2 = run_program(&p, start_2, prog2);

    // The anchored residue separation while phase i runs: 8 mod 16 for
    // phase 2, and each deeper phase adds half its own modulus on top
    // (8, 40, 168, ... = 8 + sum of 2^(2j-1)).
    let k = p.phase_len as usize;
    let mut target = 8i64;
    for phase in 2..=p.phases {
        let modulus = 1i64 << (2 * phase);
        let margin = modulus / 4;
        for idx in (phase - 1) * k..=phase * k {
            let sep = (trace_2[idx] as i64 - trace_1[idx] as i64).rem_euclid(modulus);
            if (sep - target).abs() > margin {
                return Err(AdversaryError::WraparoundOutsideRegime { phase });
            }
        }
        target += 2 * modulus;
    }

    let mut min_separation = usize::MAX;
    for (a, b) in trace_1.iter().zip(&trace_2) {
        assert_ne!(a, b, "separation argument violated");
        let d = (*b as i64 - *a as i64).rem_euclid(n) as usize;
        min_separation = min_separation.min(d.min(p.n - d));
    }

    Ok(AdversaryOutcome {
        n: p.n,
        start_1,
        start_2,
        trace_1,
        trace_2,
        phases: p.phases,
        phase_len: p.phase_len,
        min_separation,
    })
}

//! Command line interface.
//!
//! Subcommands cover the whole toolkit: orbit summaries, exploration and
//! rendezvous planning, instance generators, brute-force oracles, and
//! scaling sweeps. Reports print as `key=value` text or as single-line
//! JSON (`--format json`, schema version 1); `gen` always emits the graph
//! file format. A fixed seed makes every byte of output reproducible.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::autgroup::{automorphism_generators, canonical_coloring, encode, Permutation};
use crate::explorer::{explore_all, ExploreAlgo};
use crate::gen::{gen_circulant, gen_cycle_phase, gen_star, gen_star_extended};
use crate::oracle::{brute_automorphisms, foremost_oracle, optimal_exploration_span, OracleBudget};
use crate::rendezvous::simulate;
use crate::tgraph::{parse_temporal_graph, TemporalGraph, TemporalWalk};

#[derive(Parser)]
#[command(
    name = "orbitwalk",
    version,
    about = "Symmetry-aware exploration and rendezvous on periodically varying graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format; `gen` always emits the graph file format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output to a file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize the symmetries of a graph file: orbit count, pair colors,
    /// group order, and the orbits themselves.
    Orbits { file: PathBuf },
    /// Plan a walk from a start vertex that visits every vertex.
    Explore {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// First step the walk may use.
        #[arg(long, default_value_t = 1)]
        t0: u64,
        #[arg(long, value_enum, default_value_t = AlgoArg::Epsilon)]
        algo: AlgoArg,
        /// Revisit-tolerance knob for `--algo epsilon`: smaller values
        /// spend more transform phases to waste fewer steps.
        #[arg(long, default_value_t = 1.0, value_parser = parse_eps)]
        eps: f64,
        /// Drives the sampling fallback inside oversized symmetry groups.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Simulate the two-agent meeting protocol. Each agent sees the graph
    /// under its own seed-controlled private relabeling.
    Rendezvous {
        file: PathBuf,
        /// True start vertex of the parking agent.
        #[arg(long)]
        u1: usize,
        /// True start vertex of the sweeping agent.
        #[arg(long)]
        u2: usize,
        /// Seeds both relabelings and the sweep's sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0, value_parser = parse_eps)]
        eps: f64,
    },
    /// Emit a generated instance in the graph file format.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Brute-force reference answers on small instances.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Scaling sweeps over growing rings, with a fitted log-log slope.
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    /// Greedy earliest-arrival legs over the whole vertex set.
    Baseline,
    /// Orbit by orbit, gathering cube-root-sized chunks.
    Orbit53,
    /// Orbit by orbit, doubling coverage through symmetry transforms.
    Epsilon,
}

impl AlgoArg {
    fn to_algo(self) -> ExploreAlgo {
        match self {
            AlgoArg::Baseline => ExploreAlgo::Baseline,
            AlgoArg::Orbit53 => ExploreAlgo::OrbitChunks,
            AlgoArg::Epsilon => ExploreAlgo::Phases,
        }
    }

    fn name(self) -> &'static str {
        match self {
            AlgoArg::Baseline => "baseline",
            AlgoArg::Orbit53 => "orbit53",
            AlgoArg::Epsilon => "epsilon",
        }
    }
}

#[derive(Subcommand)]
enum GenCmd {
    /// Hub rotation on `n` vertices (`n` even) with exactly `r` orbits,
    /// `2 <= r <= n/2`.
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Hub rotation plus one final pinning snapshot, for `n/2 <= r <= n`.
    StarExt {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Ring on `2^m - 1` vertices whose stride grows through a schedule of
    /// equal-length phases (`m` odd, at least 11). The emitted file expands
    /// the full square-of-n lifetime, so it is large.
    Cyclephase {
        #[arg(long)]
        m: u32,
    },
    /// Rotation-symmetric rings: step `t` uses the stride set numbered
    /// `t mod k` out of the `k` given sets.
    Circulant {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lifetime: u64,
        /// One snapshot's strides as a comma list, e.g. `1,3`; repeat the
        /// flag for a rotating schedule of snapshots.
        #[arg(long, required = true, value_name = "S1,S2,...")]
        strides: Vec<String>,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Every automorphism, by filtering all permutations (at most 8
    /// vertices).
    Aut { file: PathBuf },
    /// Earliest-arrival walk between two vertices.
    Foremost {
        file: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value_t = 1)]
        t0: u64,
    },
    /// Exact minimum span of a walk visiting every vertex, by search over
    /// visited sets (at most 10 vertices).
    Explore {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long, default_value_t = 1)]
        t0: u64,
    },
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Span of a full exploration on stride-1 rings of growing size.
    ExploreScaling {
        #[arg(long, value_delimiter = ',', default_value = "64,128,256,512")]
        sizes: Vec<usize>,
        #[arg(long, value_enum, default_value_t = AlgoArg::Epsilon)]
        algo: AlgoArg,
        #[arg(long, default_value_t = 1.0, value_parser = parse_eps)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Meeting time of the two-agent protocol on stride-1 rings of growing
    /// size, with antipodal starts and seeded relabelings.
    RendezvousScaling {
        #[arg(long, value_delimiter = ',', default_value = "64,128,256,512")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1.0, value_parser = parse_eps)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_eps(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| "must be a number".to_string())?;
    if !v.is_finite() || !(0.01..=100.0).contains(&v) {
        return Err("must lie in [0.01, 100]".to_string());
    }
    Ok(v)
}

pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code =
                if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                    0
                } else {
                    2
                };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.output {
        Some(path) => File::create(path)
            .map_err(|e| format!("{}: {e}", path.display()))
            .and_then(|f| {
                let mut w = BufWriter::new(f);
                execute(&cli, &mut w)?;
                w.flush().map_err(|e| format!("write failed: {e}"))
            }),
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            execute(&cli, &mut w).and_then(|()| {
                w.flush().map_err(|e| format!("write failed: {e}"))
            })
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: &Cli, out: &mut impl Write) -> Result<(), String> {
    let report = match &cli.command {
        Command::Gen(cmd) => {
            let g = build_instance(cmd)?;
            return g.write_to(out).map_err(|e| format!("write failed: {e}"));
        }
        Command::Orbits { file } => cmd_orbits(file, cli.format)?,
        Command::Explore { file, start, t0, algo, eps, seed } => {
            cmd_explore(file, *start, *t0, *algo, *eps, *seed, cli.format)?
        }
        Command::Rendezvous { file, u1, u2, seed, eps } => {
            cmd_rendezvous(file, *u1, *u2, *seed, *eps, cli.format)?
        }
        Command::Oracle(cmd) => cmd_oracle(cmd, cli.format)?,
        Command::Bench(cmd) => cmd_bench(cmd, cli.format)?,
    };
    out.write_all(report.as_bytes()).map_err(|e| format!("write failed: {e}"))
}

fn load_graph(path: &Path) -> Result<TemporalGraph, String> {
    let f = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_temporal_graph(BufReader::new(f)).map_err(|e| format!("{}: {e}", path.display()))
}

fn check_vertex(g: &TemporalGraph, label: &str, v: usize) -> Result<(), String> {
    if v >= g.n() {
        return Err(format!("{label}={v} is out of range for n={}", g.n()));
    }
    Ok(())
}

fn check_t0(g: &TemporalGraph, t0: u64) -> Result<(), String> {
    if t0 < 1 || t0 > g.lifetime() + 1 {
        return Err(format!(
            "t0={t0} must lie in 1..={} (lifetime plus one)",
            g.lifetime() + 1
        ));
    }
    Ok(())
}

/// Planner precondition: every snapshot connected. Checked once per layer.
fn check_connected(g: &TemporalGraph) -> Result<(), String> {
    let firsts = g.first_step_of_layers();
    for (i, layer) in g.layers().iter().enumerate() {
        if !layer.is_connected() {
            return Err(format!(
                "snapshot at step {} is disconnected; this command needs every snapshot connected",
                firsts[i]
            ));
        }
    }
    Ok(())
}

fn random_relabeling(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut image: Vec<usize> = (0..n).collect();
    image.shuffle(rng);
    Permutation::from_image(image).unwrap()
}

#[derive(Serialize)]
struct WalkOut {
    start_time: u64,
    positions: Vec<usize>,
}

impl WalkOut {
    fn of(w: &TemporalWalk) -> Self {
        WalkOut { start_time: w.start_time, positions: w.positions.clone() }
    }
}

fn to_json_line(report: &impl Serialize) -> String {
    let mut s = serde_json::to_string(report).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct OrbitsReport {
    schema: u32,
    command: &'static str,
    n: usize,
    lifetime: u64,
    r: usize,
    colors: usize,
    order: Option<String>,
    orbits: Vec<Vec<usize>>,
}

fn cmd_orbits(file: &Path, fmt: Format) -> Result<String, String> {
    let g = load_graph(file)?;
    let group = automorphism_generators(&g);
    let part = canonical_coloring(&g);
    let report = OrbitsReport {
        schema: 1,
        command: "orbits",
        n: g.n(),
        lifetime: g.lifetime(),
        r: part.r(),
        colors: encode(&g).num_colors(),
        order: group.order().map(|o| o.to_string()),
        orbits: part.orbits().to_vec(),
    };
    Ok(match fmt {
        Format::Json => to_json_line(&report),
        Format::Text => {
            let mut s = String::new();
            s.push_str(&format!("n={}\n", report.n));
            s.push_str(&format!("lifetime={}\n", report.lifetime));
            s.push_str(&format!("r={}\n", report.r));
            s.push_str(&format!("colors={}\n", report.colors));
            s.push_str(&format!(
                "order={}\n",
                report.order.as_deref().unwrap_or("overflow")
            ));
            s.push_str("orbits:\n");
            s.push_str(&part.to_lines());
            s
        }
    })
}

#[derive(Serialize)]
struct ExploreReport {
    schema: u32,
    command: &'static str,
    algo: &'static str,
    eps: f64,
    seed: u64,
    start: usize,
    t0: u64,
    fell_back: bool,
    span: u64,
    walk: WalkOut,
}

fn cmd_explore(
    file: &Path,
    start: usize,
    t0: u64,
    algo: AlgoArg,
    eps: f64,
    seed: u64,
    fmt: Format,
) -> Result<String, String> {
    let g = load_graph(file)?;
    check_vertex(&g, "start", start)?;
    check_t0(&g, t0)?;
    check_connected(&g)?;
    let out = explore_all(&g, start, t0, algo.to_algo(), eps, seed)
        .map_err(|e| format!("exploration failed: {e}"))?;
    let report = ExploreReport {
        schema: 1,
        command: "explore",
        algo: algo.name(),
        eps,
        seed,
        start,
        t0,
        fell_back: out.fell_back,
        span: out.walk.span(),
        walk: WalkOut::of(&out.walk),
    };
    Ok(match fmt {
        Format::Json => to_json_line(&report),
        Format::Text => format!(
            "algo={}\neps={}\nseed={}\nstart={}\nt0={}\nfell_back={}\nspan={}\nwalk={}\n",
            report.algo,
            report.eps,
            report.seed,
            report.start,
            report.t0,
            report.fell_back,
            report.span,
            out.walk.to_line()
        ),
    })
}

#[derive(Serialize)]
struct RendezvousReport {
    schema: u32,
    command: &'static str,
    eps: f64,
    seed: u64,
    u1: usize,
    u2: usize,
    met: bool,
    meet_time: u64,
    meet_vertex: usize,
    orbit_size: usize,
    mover: WalkOut,
    searcher: WalkOut,
}

fn cmd_rendezvous(
    file: &Path,
    u1: usize,
    u2: usize,
    seed: u64,
    eps: f64,
    fmt: Format,
) -> Result<String, String> {
    let g = load_graph(file)?;
    check_vertex(&g, "u1", u1)?;
    check_vertex(&g, "u2", u2)?;
    check_connected(&g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pi1 = random_relabeling(g.n(), &mut rng);
    let pi2 = random_relabeling(g.n(), &mut rng);
    let out = simulate(&g, &pi1, &pi2, u1, u2, eps, &mut rng)
        .map_err(|e| format!("rendezvous failed: {e}"))?;
    let report = RendezvousReport {
        schema: 1,
        command: "rendezvous",
        eps,
        seed,
        u1,
        u2,
        met: true,
        meet_time: out.meet_time,
        meet_vertex: out.meet_vertex,
        orbit_size: out.orbit_size,
        mover: WalkOut::of(&out.mover_walk),
        searcher: WalkOut::of(&out.searcher_walk),
    };
    Ok(match fmt {
        Format::Json => to_json_line(&report),
        Format::Text => format!(
            "eps={}\nseed={}\nu1={}\nu2={}\nmet=true\nmeet_time={}\nmeet_vertex={}\norbit_size={}\nmover={}\nsearcher={}\n",
            report.eps,
            report.seed,
            report.u1,
            report.u2,
            report.meet_time,
            report.meet_vertex,
            report.orbit_size,
            out.mover_walk.to_line(),
            out.searcher_walk.to_line()
        ),
    })
}

fn build_instance(cmd: &GenCmd) -> Result<TemporalGraph, String> {
    match cmd {
        GenCmd::Star { n, r } => {
            if *n % 2 != 0 || *n < 4 {
                return Err(format!("n={n} must be even and at least 4"));
            }
            if !(2..=n / 2).contains(r) {
                return Err(format!("r={r} must satisfy 2 <= r <= n/2={}", n / 2));
            }
            Ok(gen_star(*n, *r))
        }
        GenCmd::StarExt { n, r } => {
            if *n % 2 != 0 || *n < 4 {
                return Err(format!("n={n} must be even and at least 4"));
            }
            if !(n / 2..=*n).contains(r) {
                return Err(format!("r={r} must satisfy n/2={} <= r <= n={n}", n / 2));
            }
            Ok(gen_star_extended(*n, *r))
        }
        GenCmd::Cyclephase { m } => {
            if *m % 2 != 1 || *m < 11 {
                return Err(format!("m={m} must be odd and at least 11"));
            }
            Ok(gen_cycle_phase(*m))
        }
        GenCmd::Circulant { n, lifetime, strides } => {
            if *n < 3 {
                return Err(format!("n={n} must be at least 3"));
            }
            if *lifetime < 1 {
                return Err("lifetime must be at least 1".into());
            }
            let sets = parse_stride_sets(strides, *n)?;
            Ok(gen_circulant(*n, *lifetime, &sets))
        }
    }
}

fn parse_stride_sets(raw: &[String], n: usize) -> Result<Vec<Vec<usize>>, String> {
    let mut sets = Vec::with_capacity(raw.len());
    for (i, one) in raw.iter().enumerate() {
        let mut set = Vec::new();
        for tok in one.split(',') {
            let s: usize = tok
                .trim()
                .parse()
                .map_err(|_| format!("stride set {i}: bad stride '{tok}'"))?;
            if s < 1 || s >= n {
                return Err(format!("stride set {i}: stride {s} out of range 1..{n}"));
            }
            // A stride and its ring complement give the same edges.
            set.push(s.min(n - s));
        }
        set.sort_unstable();
        set.dedup();
        if set.is_empty() {
            return Err(format!("stride set {i} is empty"));
        }
        let mut d = n;
        for &s in &set {
            d = gcd(d, s);
        }
        if d != 1 {
            return Err(format!(
                "stride set {i} gives a disconnected snapshot ({} rings of {})",
                d,
                n / d
            ));
        }
        sets.push(set);
    }
    Ok(sets)
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Serialize)]
struct AutReport {
    schema: u32,
    command: &'static str,
    n: usize,
    count: usize,
    automorphisms: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct ForemostReport {
    schema: u32,
    command: &'static str,
    from: usize,
    to: usize,
    t0: u64,
    reachable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    arrival: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    span: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    walk: Option<WalkOut>,
}

#[derive(Serialize)]
struct OracleExploreReport {
    schema: u32,
    command: &'static str,
    start: usize,
    t0: u64,
    feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    span: Option<u64>,
}

fn cmd_oracle(cmd: &OracleCmd, fmt: Format) -> Result<String, String> {
    let budget = OracleBudget::default();
    match cmd {
        OracleCmd::Aut { file } => {
            let g = load_graph(file)?;
            if g.n() > budget.max_n_perms {
                return Err(format!(
                    "n={} exceeds the brute-force cap of {} vertices",
                    g.n(),
                    budget.max_n_perms
                ));
            }
            let auts = brute_automorphisms(&g, &budget);
            let report = AutReport {
                schema: 1,
                command: "oracle-aut",
                n: g.n(),
                count: auts.len(),
                automorphisms: auts.iter().map(|p| p.as_slice().to_vec()).collect(),
            };
            Ok(match fmt {
                Format::Json => to_json_line(&report),
                Format::Text => {
                    let mut s = format!("n={}\ncount={}\n", report.n, report.count);
                    for p in &report.automorphisms {
                        let words: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                        s.push_str(&words.join(" "));
                        s.push('\n');
                    }
                    s
                }
            })
        }
        OracleCmd::Foremost { file, from, to, t0 } => {
            let g = load_graph(file)?;
            check_vertex(&g, "from", *from)?;
            check_vertex(&g, "to", *to)?;
            check_t0(&g, *t0)?;
            let walk = foremost_oracle(&g, *from, *to, *t0);
            let report = ForemostReport {
                schema: 1,
                command: "oracle-foremost",
                from: *from,
                to: *to,
                t0: *t0,
                reachable: walk.is_some(),
                arrival: walk.as_ref().map(|w| w.end_time()),
                span: walk.as_ref().map(|w| w.span()),
                walk: walk.as_ref().map(WalkOut::of),
            };
            Ok(match fmt {
                Format::Json => to_json_line(&report),
                Format::Text => match &walk {
                    Some(w) => format!(
                        "from={}\nto={}\nt0={}\nreachable=true\narrival={}\nspan={}\nwalk={}\n",
                        from,
                        to,
                        t0,
                        w.end_time(),
                        w.span(),
                        w.to_line()
                    ),
                    None => format!("from={from}\nto={to}\nt0={t0}\nreachable=false\n"),
                },
            })
        }
        OracleCmd::Explore { file, start, t0 } => {
            let g = load_graph(file)?;
            check_vertex(&g, "start", *start)?;
            check_t0(&g, *t0)?;
            if g.n() > budget.max_n_explore {
                return Err(format!(
                    "n={} exceeds the visited-set search cap of {} vertices",
                    g.n(),
                    budget.max_n_explore
                ));
            }
            let horizon = (g.lifetime() + 1 - t0) + 1;
            let states = (g.n() as u64)
                .checked_mul(1u64 << g.n())
                .and_then(|x| x.checked_mul(horizon));
            match states {
                Some(s) if s <= budget.max_states => {}
                _ => {
                    return Err(format!(
                        "state space over {} steps exceeds the oracle budget; trim the lifetime",
                        horizon
                    ))
                }
            }
            let span = optimal_exploration_span(&g, *start, *t0, &budget);
            let report = OracleExploreReport {
                schema: 1,
                command: "oracle-explore",
                start: *start,
                t0: *t0,
                feasible: span.is_some(),
                span,
            };
            Ok(match fmt {
                Format::Json => to_json_line(&report),
                Format::Text => match span {
                    Some(v) => format!("start={start}\nt0={t0}\nfeasible=true\nspan={v}\n"),
                    None => format!("start={start}\nt0={t0}\nfeasible=false\n"),
                },
            })
        }
    }
}

#[derive(Serialize)]
struct SpanRow {
    n: usize,
    span: u64,
}

#[derive(Serialize)]
struct MeetRow {
    n: usize,
    meet_time: u64,
}

#[derive(Serialize)]
struct BenchExploreReport {
    schema: u32,
    command: &'static str,
    kind: &'static str,
    algo: &'static str,
    eps: f64,
    seed: u64,
    rows: Vec<SpanRow>,
    slope: f64,
}

#[derive(Serialize)]
struct BenchMeetReport {
    schema: u32,
    command: &'static str,
    kind: &'static str,
    eps: f64,
    seed: u64,
    rows: Vec<MeetRow>,
    slope: f64,
}

fn normalize_sizes(sizes: &[usize]) -> Result<Vec<usize>, String> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err("need at least two distinct sizes to fit a slope".into());
    }
    if sizes[0] < 3 {
        return Err(format!("size {} is too small; rings need at least 3 vertices", sizes[0]));
    }
    Ok(sizes)
}

fn ring(n: usize) -> TemporalGraph {
    gen_circulant(n, (n as u64) * (n as u64), &[vec![1]])
}

/// Least-squares slope of `ln y` against `ln x`, rounded to 4 decimals.
fn loglog_slope(points: &[(usize, u64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.1 as f64).ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = num / den;
    (slope * 1e4).round() / 1e4
}

fn cmd_bench(cmd: &BenchCmd, fmt: Format) -> Result<String, String> {
    match cmd {
        BenchCmd::ExploreScaling { sizes, algo, eps, seed } => {
            let sizes = normalize_sizes(sizes)?;
            let mut rows = Vec::with_capacity(sizes.len());
            for &n in &sizes {
                let g = ring(n);
                let out = explore_all(&g, 0, 1, algo.to_algo(), *eps, seed.wrapping_add(n as u64))
                    .map_err(|e| format!("exploration failed at n={n}: {e}"))?;
                rows.push((n, out.walk.span()));
            }
            let slope = loglog_slope(&rows);
            let report = BenchExploreReport {
                schema: 1,
                command: "bench",
                kind: "explore-scaling",
                algo: algo.name(),
                eps: *eps,
                seed: *seed,
                rows: rows.iter().map(|&(n, span)| SpanRow { n, span }).collect(),
                slope,
            };
            Ok(match fmt {
                Format::Json => to_json_line(&report),
                Format::Text => {
                    let mut s = format!(
                        "kind=explore-scaling\nalgo={}\neps={}\nseed={}\n",
                        report.algo, report.eps, report.seed
                    );
                    for (n, span) in &rows {
                        s.push_str(&format!("n={n} span={span}\n"));
                    }
                    s.push_str(&format!("slope={:.4}\n", slope));
                    s
                }
            })
        }
        BenchCmd::RendezvousScaling { sizes, eps, seed } => {
            let sizes = normalize_sizes(sizes)?;
            let mut rows = Vec::with_capacity(sizes.len());
            for &n in &sizes {
                let g = ring(n);
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(n as u64));
                let pi1 = random_relabeling(n, &mut rng);
                let pi2 = random_relabeling(n, &mut rng);
                let out = simulate(&g, &pi1, &pi2, 0, n / 2, *eps, &mut rng)
                    .map_err(|e| format!("rendezvous failed at n={n}: {e}"))?;
                rows.push((n, out.meet_time));
            }
            let slope = loglog_slope(&rows);
            let report = BenchMeetReport {
                schema: 1,
                command: "bench",
                kind: "rendezvous-scaling",
                eps: *eps,
                seed: *seed,
                rows: rows.iter().map(|&(n, meet_time)| MeetRow { n, meet_time }).collect(),
                slope,
            };
            Ok(match fmt {
                Format::Json => to_json_line(&report),
                Format::Text => {
                    let mut s = format!(
                        "kind=rendezvous-scaling\neps={}\nseed={}\n",
                        report.eps, report.seed
                    );
                    for (n, meet) in &rows {
                        s.push_str(&format!("n={n} meet_time={meet}\n"));
                    }
                    s.push_str(&format!("slope={:.4}\n", slope));
                    s
                }
            })
        }
    }
}

//! Symmetries shared by every snapshot of a temporal graph.
//!
//! A permutation of the vertices is a symmetry of the temporal graph when it
//! is an automorphism of every snapshot. Equivalently, color each vertex pair
//! by the set of time steps at which it is an edge; the shared symmetries are
//! exactly the color-preserving permutations of that complete colored graph
//! ([`encode`]). All group computations here work on that encoding:
//! generator search, orbit partitions, and a canonical labeling that gives
//! orbits names independent of the input labeling.
//!
//! Because every layer occurs at some step, two pairs carry the same step set
//! exactly when they lie in the same set of layers, so colors are interned as
//! layer sets and ordered by their step characteristic sequence.

use fixedbitset::FixedBitSet;
use rand::Rng;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::tgraph::TemporalGraph;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// A permutation of `0..n`, stored as its image vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("image vector is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("cannot parse permutation: {0}")]
    Parse(String),
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self, PermError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(PermError::NotBijection(n));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(a, b);
        Permutation { image }
    }

    /// Maps `cycle[i]` to `cycle[i+1]` (wrapping), fixing everything else.
    pub fn from_cycle(n: usize, cycle: &[usize]) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        for i in 0..cycle.len() {
            image[cycle[i]] = cycle[(i + 1) % cycle.len()];
        }
        Permutation { image }
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { image: other.image.iter().map(|&v| self.image[v]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.image.len()];
        for (v, &w) in self.image.iter().enumerate() {
            image[w] = v;
        }
        Permutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(v, &w)| v == w)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.image {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, PermError> {
        let image: Result<Vec<usize>, _> =
            s.split_whitespace().map(|tok| tok.parse::<usize>()).collect();
        let image = image.map_err(|e| PermError::Parse(e.to_string()))?;
        Permutation::from_image(image)
    }
}

/// The complete graph on the vertex set with each pair colored by the set of
/// time steps at which it is an edge. Colors are interned ids; id order
/// follows the lexicographic order of the pairs' step characteristic vectors
/// (absent before present), so it does not depend on vertex labels.
pub struct ColoredEncoding {
    n: usize,
    color: Vec<u32>,
    num_colors: usize,
    /// Sorted layer ids carrying each color.
    color_layers: Vec<Vec<usize>>,
}

impl ColoredEncoding {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn color_of(&self, u: usize, v: usize) -> u32 {
        debug_assert_ne!(u, v);
        self.color[u * self.n + v]
    }

    /// Layers whose steps make up the given color.
    pub fn color_layers(&self, c: u32) -> &[usize] {
        &self.color_layers[c as usize]
    }

    /// The actual step set of a color, in increasing order.
    pub fn color_steps<'a>(
        &'a self,
        g: &'a TemporalGraph,
        c: u32,
    ) -> impl Iterator<Item = u64> + 'a {
        let layers = &self.color_layers[c as usize];
        g.runs().flat_map(move |(start, len, layer)| {
            let hit = layers.binary_search(&layer).is_ok();
            let range = if hit { start..start + len } else { start..start };
            range
        })
    }
}

/// Builds the colored pair encoding of a temporal graph.
pub fn encode(g: &TemporalGraph) -> ColoredEncoding {
    let n = g.n();
    let num_layers = g.layers().len();
    let words = num_layers.div_ceil(64).max(1);
    let pair_count = n * (n - 1) / 2;
    let mut masks = vec![0u64; pair_count * words];
    let pair_index = |u: usize, v: usize| -> usize {
        // Index into the strict upper triangle, u < v.
        u * n + v - (u + 1) * (u + 2) / 2
    };
    for (id, layer) in g.layers().iter().enumerate() {
        for (u, v) in layer.edges() {
            masks[pair_index(u, v) * words + id / 64] |= 1u64 << (id % 64);
        }
    }

    // Intern distinct masks in first-seen order, then rank them canonically.
    let mut intern: HashMap<&[u64], u32> = HashMap::new();
    let mut distinct: Vec<&[u64]> = Vec::new();
    let mut provisional = vec![0u32; pair_count];
    for p in 0..pair_count {
        let mask = &masks[p * words..(p + 1) * words];
        let id = *intern.entry(mask).or_insert_with(|| {
            distinct.push(mask);
            (distinct.len() - 1) as u32
        });
        provisional[p] = id;
    }

    // Runs are compared in schedule order until every layer has appeared;
    // membership is constant within a run, so the first differing run finds
    // the first differing step of any two distinct layer sets.
    let mut seq = Vec::new();
    {
        let mut seen = FixedBitSet::with_capacity(num_layers);
        for (_, _, layer) in g.runs() {
            seq.push(layer);
            seen.insert(layer);
            if seen.count_ones(..) == num_layers {
                break;
            }
        }
    }
    let rank_cmp = |a: &[u64], b: &[u64]| -> std::cmp::Ordering {
        for &layer in &seq {
            let ab = a[layer / 64] >> (layer % 64) & 1;
            let bb = b[layer / 64] >> (layer % 64) & 1;
            if ab != bb {
                return ab.cmp(&bb);
            }
        }
        std::cmp::Ordering::Equal
    };
    let mut order: Vec<u32> = (0..distinct.len() as u32).collect();
    order.sort_by(|&a, &b| rank_cmp(distinct[a as usize], distinct[b as usize]));
    let mut rank_of = vec![0u32; distinct.len()];
    for (rank, &id) in order.iter().enumerate() {
        rank_of[id as usize] = rank as u32;
    }

    let mut color = vec![u32::MAX; n * n];
    for u in 0..n {
        for v in u + 1..n {
            let c = rank_of[provisional[pair_index(u, v)] as usize];
            color[u * n + v] = c;
            color[v * n + u] = c;
        }
    }
    let mut color_layers = vec![Vec::new(); distinct.len()];
    for (id, mask) in distinct.iter().enumerate() {
        let layers: Vec<usize> =
            (0..num_layers).filter(|&l| mask[l / 64] >> (l % 64) & 1 == 1).collect();
        color_layers[rank_of[id] as usize] = layers;
    }
    ColoredEncoding { n, color, num_colors: distinct.len(), color_layers }
}

/// An ordered partition of the vertices into cells. Cells are kept sorted
/// ascending and their order is maintained canonically by the refiner.
#[derive(Clone)]
struct Partition {
    cell_of: Vec<u32>,
    cells: Vec<Vec<usize>>,
}

impl Partition {
    fn unit(n: usize) -> Self {
        Partition { cell_of: vec![0; n], cells: vec![(0..n).collect()] }
    }

    fn is_discrete(&self) -> bool {
        self.cells.len() == self.cell_of.len()
    }

    /// Rank of the first smallest non-singleton cell.
    fn target_cell(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (rank, cell) in self.cells.iter().enumerate() {
            if cell.len() > 1 && best.map_or(true, |(size, _)| cell.len() < size) {
                best = Some((cell.len(), rank));
            }
        }
        best.map(|(_, rank)| rank)
    }

    /// Splits `v` into its own cell, placed directly before the remainder of
    /// its former cell.
    fn individualize(&mut self, v: usize) {
        let rank = self.cell_of[v] as usize;
        if self.cells[rank].len() == 1 {
            return;
        }
        let rest: Vec<usize> = self.cells[rank].iter().copied().filter(|&w| w != v).collect();
        self.cells[rank] = vec![v];
        self.cells.insert(rank + 1, rest);
        self.renumber();
    }

    fn renumber(&mut self) {
        for (rank, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                self.cell_of[v] = rank as u32;
            }
        }
    }

    /// For a discrete partition, the canonical rank of every vertex.
    fn labeling(&self) -> Vec<usize> {
        debug_assert!(self.is_discrete());
        let mut lab = vec![0; self.cell_of.len()];
        for (rank, cell) in self.cells.iter().enumerate() {
            lab[cell[0]] = rank;
        }
        lab
    }

    fn signatures(&self, enc: &ColoredEncoding) -> Vec<u64> {
        let n = self.cell_of.len();
        let mut sig = vec![0u64; n];
        for v in 0..n {
            let row = &enc.color[v * n..(v + 1) * n];
            let mut acc = 0u64;
            for w in 0..n {
                if w != v {
                    acc = acc.wrapping_add(splitmix64(
                        ((self.cell_of[w] as u64) << 32) | row[w] as u64,
                    ));
                }
            }
            sig[v] = acc;
        }
        sig
    }

    /// One splitting round; returns whether any cell split.
    fn split_round(&mut self, sig: &[u64]) -> bool {
        let mut new_cells = Vec::with_capacity(self.cells.len());
        let mut split = false;
        for cell in &self.cells {
            if cell.len() == 1 {
                new_cells.push(cell.clone());
                continue;
            }
            let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
            for &v in cell {
                groups.entry(sig[v]).or_default().push(v);
            }
            if groups.len() > 1 {
                split = true;
            }
            new_cells.extend(groups.into_values());
        }
        if split {
            self.cells = new_cells;
            self.renumber();
        }
        split
    }
}

/// Refines until stable under the one-step color signature.
fn refine(enc: &ColoredEncoding, part: &mut Partition) {
    loop {
        let sig = part.signatures(enc);
        if !part.split_round(&sig) {
            return;
        }
        if part.is_discrete() {
            return;
        }
    }
}

/// Refines two aligned partitions of the same encoding in lockstep. Returns
/// `false` as soon as their split structures diverge (no mapping possible).
fn refine_pair(enc: &ColoredEncoding, ps: &mut Partition, pt: &mut Partition) -> bool {
    loop {
        let sig_s = ps.signatures(enc);
        let sig_t = pt.signatures(enc);
        // Cells correspond by rank; their signature multisets must match.
        for rank in 0..ps.cells.len() {
            let mut ms: Vec<u64> = ps.cells[rank].iter().map(|&v| sig_s[v]).collect();
            let mut mt: Vec<u64> = pt.cells[rank].iter().map(|&v| sig_t[v]).collect();
            ms.sort_unstable();
            mt.sort_unstable();
            if ms != mt {
                return false;
            }
        }
        let split_s = ps.split_round(&sig_s);
        let split_t = pt.split_round(&sig_t);
        debug_assert_eq!(split_s, split_t);
        if !split_s {
            return true;
        }
        if ps.cells.len() != pt.cells.len() {
            return false;
        }
        if ps.is_discrete() {
            return true;
        }
    }
}

/// True when every pair inside `cell` has one color and every outside vertex
/// sees all of `cell` in one color. Any permutation of such a cell (fixing
/// the rest) then preserves the whole coloring.
fn is_homogeneous(enc: &ColoredEncoding, cell: &[usize]) -> bool {
    if cell.len() < 2 {
        return true;
    }
    let inner = enc.color_of(cell[0], cell[1]);
    for i in 0..cell.len() {
        for j in i + 1..cell.len() {
            if enc.color_of(cell[i], cell[j]) != inner {
                return false;
            }
        }
    }
    let mut in_cell = vec![false; enc.n];
    for &v in cell {
        in_cell[v] = true;
    }
    let anchor = cell[0];
    for w in 0..enc.n {
        if in_cell[w] {
            continue;
        }
        let want = enc.color_of(anchor, w);
        for &v in &cell[1..] {
            if enc.color_of(v, w) != want {
                return false;
            }
        }
    }
    true
}

fn preserves_coloring(enc: &ColoredEncoding, image: &[usize]) -> bool {
    let n = enc.n;
    for u in 0..n {
        for v in u + 1..n {
            if enc.color_of(u, v) != enc.color_of(image[u], image[v]) {
                return false;
            }
        }
    }
    true
}

/// Searches for one color-preserving permutation extending the partial map
/// that sends `x` to `y` on top of the already individualized `base`
/// partition (whose singletons are anchored identically on both sides).
fn find_mapping(
    enc: &ColoredEncoding,
    base: &Partition,
    x: usize,
    y: usize,
) -> Option<Permutation> {
    let mut ps = base.clone();
    ps.individualize(x);
    let mut pt = base.clone();
    pt.individualize(y);
    if !refine_pair(enc, &mut ps, &mut pt) {
        return None;
    }
    mapping_dfs(enc, &ps, &pt)
}

fn mapping_dfs(enc: &ColoredEncoding, ps: &Partition, pt: &Partition) -> Option<Permutation> {
    if ps.is_discrete() {
        let n = enc.n;
        let mut image = vec![0; n];
        for rank in 0..ps.cells.len() {
            image[ps.cells[rank][0]] = pt.cells[rank][0];
        }
        if preserves_coloring(enc, &image) {
            return Some(Permutation { image });
        }
        return None;
    }
    let rank = ps.target_cell().expect("non-discrete partition has a target cell");
    let x = ps.cells[rank][0];
    for &y in &pt.cells[rank] {
        let mut ns = ps.clone();
        ns.individualize(x);
        let mut nt = pt.clone();
        nt.individualize(y);
        if !refine_pair(enc, &mut ns, &mut nt) {
            continue;
        }
        if let Some(found) = mapping_dfs(enc, &ns, &nt) {
            return Some(found);
        }
    }
    None
}

/// One coset-representative table of a stabilizer chain level: for each
/// vertex in the orbit of `base`, a group element sending `base` there.
enum TransEntry {
    Identity,
    Swap(usize, usize),
    Explicit(Permutation),
}

impl TransEntry {
    fn to_perm(&self, n: usize) -> Permutation {
        match self {
            TransEntry::Identity => Permutation::identity(n),
            TransEntry::Swap(a, b) => Permutation::transposition(n, *a, *b),
            TransEntry::Explicit(p) => p.clone(),
        }
    }
}

pub struct ChainLevel {
    base: usize,
    transversal: BTreeMap<usize, TransEntry>,
}

impl ChainLevel {
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn orbit_len(&self) -> usize {
        self.transversal.len()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumError {
    #[error("group order {order} exceeds enumeration cap {cap}")]
    CapExceeded { order: u128, cap: u128 },
    #[error("group order exceeds u128, far beyond enumeration cap {cap}")]
    OrderOverflow { cap: u128 },
}

/// The symmetry group of a temporal graph: generators plus a stabilizer
/// transversal chain giving order, membership, and uniform sampling.
pub struct PermGroup {
    n: usize,
    generators: Vec<Permutation>,
    chain: Vec<ChainLevel>,
    /// `None` when the order overflows `u128`.
    order: Option<u128>,
}

impl PermGroup {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &[ChainLevel] {
        &self.chain
    }

    pub fn order(&self) -> Option<u128> {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == Some(1)
    }

    /// Membership by sifting through the transversal chain.
    pub fn contains(&self, sigma: &Permutation) -> bool {
        if sigma.degree() != self.n {
            return false;
        }
        let mut residue = sigma.clone();
        for level in &self.chain {
            let target = residue.apply(level.base);
            let Some(entry) = level.transversal.get(&target) else {
                return false;
            };
            residue = entry.to_perm(self.n).inverse().compose(&residue);
        }
        residue.is_identity()
    }

    /// Uniformly random element: one random coset representative per level.
    pub fn random_element(&self, rng: &mut impl Rng) -> Permutation {
        let mut out = Permutation::identity(self.n);
        for level in &self.chain {
            let k = rng.gen_range(0..level.transversal.len());
            let entry = level.transversal.values().nth(k).unwrap();
            out = out.compose(&entry.to_perm(self.n));
        }
        out
    }

    /// Orbits of the natural action, unordered (sorted by smallest member).
    pub fn orbit_sets(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n);
        for g in &self.generators {
            for v in 0..self.n {
                uf.union(v, g.apply(v));
            }
        }
        uf.sets()
    }
}

/// Lists every group element. Fails fast when the order exceeds `cap`.
pub fn enumerate_group(group: &PermGroup, cap: usize) -> Result<Vec<Permutation>, EnumError> {
    match group.order {
        None => return Err(EnumError::OrderOverflow { cap: cap as u128 }),
        Some(order) if order > cap as u128 => {
            return Err(EnumError::CapExceeded { order, cap: cap as u128 })
        }
        _ => {}
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut elements = vec![Permutation::identity(group.n)];
    seen.insert(elements[0].image.clone());
    let mut queue = 0;
    while queue < elements.len() {
        let current = elements[queue].clone();
        queue += 1;
        for g in &group.generators {
            let next = g.compose(&current);
            if seen.insert(next.image.clone()) {
                elements.push(next);
            }
        }
    }
    debug_assert_eq!(Some(elements.len() as u128), group.order);
    Ok(elements)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, v: usize) -> usize {
        if self.parent[v] != v {
            let root = self.find(self.parent[v]);
            self.parent[v] = root;
        }
        self.parent[v]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    fn sets(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = self.find(v);
            by_root.entry(r).or_default().push(v);
        }
        by_root.into_values().collect()
    }
}

/// Computes a generating set for the color-preserving group of `enc`,
/// together with the stabilizer chain backing order and membership.
///
/// The search walks one base sequence: at each level it takes the first
/// smallest non-singleton cell, collects one mapping per orbit point of its
/// lowest vertex (skipping points already in the known orbit), then fixes
/// that vertex and refines. Cells in which all pairs look alike inside and
/// from outside contribute their full symmetric group directly.
fn search_generators(enc: &ColoredEncoding) -> PermGroup {
    let n = enc.n;
    let mut part = Partition::unit(n);
    refine(enc, &mut part);

    let mut generators: Vec<Permutation> = Vec::new();
    let mut chain: Vec<ChainLevel> = Vec::new();
    let mut order: Option<u128> = Some(1);
    let mul = |acc: Option<u128>, k: u128| acc.and_then(|o| o.checked_mul(k));

    while let Some(rank) = part.target_cell() {
        let cell = part.cells[rank].clone();
        if is_homogeneous(enc, &cell) {
            generators.push(Permutation::transposition(n, cell[0], cell[1]));
            if cell.len() > 2 {
                generators.push(Permutation::from_cycle(n, &cell));
            }
            for j in 0..cell.len() - 1 {
                let mut transversal = BTreeMap::new();
                transversal.insert(cell[j], TransEntry::Identity);
                for &m in &cell[j + 1..] {
                    transversal.insert(m, TransEntry::Swap(cell[j], m));
                }
                chain.push(ChainLevel { base: cell[j], transversal });
                order = mul(order, (cell.len() - j) as u128);
            }
            for &v in &cell {
                part.individualize(v);
            }
            refine(enc, &mut part);
            continue;
        }

        let u = cell[0];
        let mut transversal: BTreeMap<usize, TransEntry> = BTreeMap::new();
        transversal.insert(u, TransEntry::Identity);
        let mut level_gens: Vec<Permutation> = Vec::new();
        for &v in &cell[1..] {
            if transversal.contains_key(&v) {
                continue;
            }
            let Some(sigma) = find_mapping(enc, &part, u, v) else {
                continue;
            };
            debug_assert_eq!(sigma.apply(u), v);
            transversal.insert(v, TransEntry::Explicit(sigma.clone()));
            level_gens.push(sigma.clone());
            generators.push(sigma);
            // Close the orbit under everything found at this level.
            let mut frontier: Vec<usize> = transversal.keys().copied().collect();
            while let Some(x) = frontier.pop() {
                for g in &level_gens {
                    let y = g.apply(x);
                    if !transversal.contains_key(&y) {
                        let tx = transversal[&x].to_perm(n);
                        transversal.insert(y, TransEntry::Explicit(g.compose(&tx)));
                        frontier.push(y);
                    }
                }
            }
        }
        order = mul(order, transversal.len() as u128);
        chain.push(ChainLevel { base: u, transversal });
        part.individualize(u);
        refine(enc, &mut part);
    }

    PermGroup { n, generators, chain, order }
}

/// Generating set of the group of symmetries shared by all snapshots.
pub fn automorphism_generators(g: &TemporalGraph) -> PermGroup {
    search_generators(&encode(g))
}

/// Minimal colored-adjacency certificate over the individualization tree,
/// with the vertex ranks of one optimal leaf.
///
/// Branches are pruned when a known symmetry maps them to an explored
/// sibling: at the root through `root_orbits`, below it through
/// automorphisms discovered at certificate-equal leaves, restricted to those
/// fixing the current individualized prefix pointwise.
fn canonical_form(
    enc: &ColoredEncoding,
    root_orbits: Option<&[Vec<usize>]>,
) -> (Vec<u32>, Vec<usize>) {
    let n = enc.n;
    let mut part = Partition::unit(n);
    refine(enc, &mut part);

    struct Search<'a> {
        enc: &'a ColoredEncoding,
        best_cert: Option<Vec<u32>>,
        best_verts: Vec<usize>,
        auts: Vec<Permutation>,
        root_orbit_of: Option<Vec<usize>>,
    }

    impl Search<'_> {
        fn leaf(&mut self, part: &Partition) {
            let n = self.enc.n;
            let lab = part.labeling();
            let mut verts = vec![0; n];
            for (v, &rank) in lab.iter().enumerate() {
                verts[rank] = v;
            }
            let mut cert = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                for j in i + 1..n {
                    cert.push(self.enc.color_of(verts[i], verts[j]));
                }
            }
            match &self.best_cert {
                None => {
                    self.best_cert = Some(cert);
                    self.best_verts = verts;
                }
                Some(best) => match cert.cmp(best) {
                    std::cmp::Ordering::Less => {
                        self.best_cert = Some(cert);
                        self.best_verts = verts;
                    }
                    std::cmp::Ordering::Equal => {
                        // Two optimal leaves compose to a symmetry.
                        let image: Vec<usize> =
                            lab.iter().map(|&rank| self.best_verts[rank]).collect();
                        debug_assert!(preserves_coloring(self.enc, &image));
                        let sigma = Permutation { image };
                        if !sigma.is_identity() && !self.auts.contains(&sigma) {
                            self.auts.push(sigma);
                        }
                    }
                    std::cmp::Ordering::Greater => {}
                },
            }
        }

        fn node(&mut self, part: &Partition, prefix: &mut Vec<usize>) {
            let Some(rank) = part.target_cell() else {
                self.leaf(part);
                return;
            };
            let cell = part.cells[rank].clone();
            if is_homogeneous(self.enc, &cell) {
                // Every ordering of the cell yields the same certificate.
                let mut next = part.clone();
                for &v in &cell {
                    next.individualize(v);
                }
                refine(self.enc, &mut next);
                let before = prefix.len();
                prefix.extend_from_slice(&cell);
                self.node(&next, prefix);
                prefix.truncate(before);
                return;
            }
            let mut explored: Vec<usize> = Vec::new();
            for &v in &cell {
                if !explored.is_empty() && self.pruned(v, &explored, prefix) {
                    continue;
                }
                let mut next = part.clone();
                next.individualize(v);
                refine(self.enc, &mut next);
                prefix.push(v);
                self.node(&next, prefix);
                prefix.pop();
                explored.push(v);
            }
        }

        fn pruned(&self, v: usize, explored: &[usize], prefix: &[usize]) -> bool {
            if prefix.is_empty() {
                if let Some(orbit_of) = &self.root_orbit_of {
                    return explored.iter().any(|&e| orbit_of[e] == orbit_of[v]);
                }
            }
            let fixing: Vec<&Permutation> = self
                .auts
                .iter()
                .filter(|s| prefix.iter().all(|&p| s.apply(p) == p))
                .collect();
            if fixing.is_empty() {
                return false;
            }
            let mut closure = FixedBitSet::with_capacity(self.enc.n);
            for &e in explored {
                closure.insert(e);
            }
            let mut frontier: Vec<usize> = explored.to_vec();
            while let Some(x) = frontier.pop() {
                if closure.contains(v) {
                    return true;
                }
                for s in &fixing {
                    let y = s.apply(x);
                    if !closure.contains(y) {
                        closure.insert(y);
                        frontier.push(y);
                    }
                }
            }
            closure.contains(v)
        }
    }

    let root_orbit_of = root_orbits.map(|orbits| {
        let mut of = vec![0usize; n];
        for (i, orbit) in orbits.iter().enumerate() {
            for &v in orbit {
                of[v] = i;
            }
        }
        of
    });
    let mut search = Search {
        enc,
        best_cert: None,
        best_verts: Vec::new(),
        auts: Vec::new(),
        root_orbit_of,
    };
    let mut prefix = Vec::new();
    search.node(&part, &mut prefix);
    let cert = search.best_cert.expect("search visits at least one leaf");
    let mut lab = vec![0; n];
    for (rank, &v) in search.best_verts.iter().enumerate() {
        lab[v] = rank;
    }
    (cert, lab)
}

/// Vertex orbits under the group action, with orbit ids and member order
/// fixed by the canonical labeling so they survive relabeling.
pub struct OrbitPartition {
    orbit_of: Vec<usize>,
    orbits: Vec<Vec<usize>>,
    masks: Vec<FixedBitSet>,
    canonical_rank: Vec<usize>,
}

impl OrbitPartition {
    pub fn n(&self) -> usize {
        self.orbit_of.len()
    }

    /// Number of orbits.
    pub fn r(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbit_of(&self, v: usize) -> usize {
        self.orbit_of[v]
    }

    /// Orbit id per vertex, as a slice indexed by vertex.
    pub fn classes(&self) -> &[usize] {
        &self.orbit_of
    }

    /// Members of one orbit, ascending.
    pub fn orbit(&self, id: usize) -> &[usize] {
        &self.orbits[id]
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn mask(&self, id: usize) -> &FixedBitSet {
        &self.masks[id]
    }

    /// Rank of `v` in the canonical labeling backing the orbit ids.
    pub fn canonical_rank(&self, v: usize) -> usize {
        self.canonical_rank[v]
    }

    /// Smallest orbit id, ties broken by id (= canonical color).
    pub fn smallest_orbit(&self) -> usize {
        let mut best = 0;
        for id in 1..self.orbits.len() {
            if self.orbits[id].len() < self.orbits[best].len() {
                best = id;
            }
        }
        best
    }

    /// One `id: v1 v2 ...` line per orbit.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for (id, orbit) in self.orbits.iter().enumerate() {
            out.push_str(&id.to_string());
            out.push(':');
            for &v in orbit {
                out.push(' ');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Orbits of `group` on the vertices of `g`, canonically ordered.
pub fn orbit_partition(g: &TemporalGraph, group: &PermGroup) -> OrbitPartition {
    let enc = encode(g);
    let sets = group.orbit_sets();
    let (_, lab) = canonical_form(&enc, Some(&sets));
    build_partition(g.n(), sets, lab)
}

/// Orbit partition with label-independent orbit colors: relabeling the graph
/// by any permutation relabels orbits but keeps each vertex's color.
pub fn canonical_coloring(g: &TemporalGraph) -> OrbitPartition {
    let group = automorphism_generators(g);
    orbit_partition(g, &group)
}

fn build_partition(n: usize, mut sets: Vec<Vec<usize>>, lab: Vec<usize>) -> OrbitPartition {
    // Orbit color = rank of the orbit's minimal canonical label. The
    // canonical labeling maps orbits onto fixed rank sets, so this order is
    // independent of the input labeling.
    sets.sort_by_key(|orbit| orbit.iter().map(|&v| lab[v]).min().unwrap());
    let mut orbit_of = vec![0; n];
    let mut masks = Vec::with_capacity(sets.len());
    for (id, orbit) in sets.iter().enumerate() {
        let mut mask = FixedBitSet::with_capacity(n);
        for &v in orbit {
            orbit_of[v] = id;
            mask.insert(v);
        }
        masks.push(mask);
    }
    OrbitPartition { orbit_of, orbits: sets, masks, canonical_rank: lab }
}

/// Edges of the snapshot at step `t` whose endpoints lie in different orbits.
pub fn orbit_boundary_edges(
    g: &TemporalGraph,
    part: &OrbitPartition,
    t: u64,
) -> Vec<(usize, usize)> {
    g.layer_at(t)
        .edges()
        .into_iter()
        .filter(|&(u, v)| part.orbit_of(u) != part.orbit_of(v))
        .collect()
}

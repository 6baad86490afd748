//! Fractional list assignments, partial-coloring extension, Hall machinery,
//! the clique-minus-matching coloring lemma, the list transfer lemma, the
//! multiplicative list pipeline, and the brute-force list-colorability
//! checker.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::coloring_search::subset_coloring_search;
use crate::demand::DemandFn;
use crate::error::{Error, Result};
use crate::fracsolve::{self, FractionalColoring, SetColoring};
use crate::graph::Graph;
use crate::interval::IntervalSet;
use crate::rational::Q;
use crate::setsys::VertexSet;

pub const HALL_SIZE_CAP: usize = 20;
pub const LIST_BRUTE_CAP: usize = 12;

/// Fractional list assignment: vertex -> measurable subset of [0,1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListAssignment {
    pub lists: BTreeMap<usize, IntervalSet>,
}

impl ListAssignment {
    pub fn uniform_measure(&self) -> Option<Q> {
        let mut it = self.lists.values();
        let first = it.next()?.measure();
        for l in it {
            if l.measure() != first {
                return None;
            }
        }
        Some(first)
    }
}

/// Discrete N-list assignment: every vertex gets exactly N colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteListAssignment {
    #[serde(rename = "N")]
    pub n: usize,
    pub lists: Vec<BTreeSet<u32>>,
}

impl DiscreteListAssignment {
    pub fn new(n: usize, lists: Vec<BTreeSet<u32>>) -> Result<Self> {
        for (v, l) in lists.iter().enumerate() {
            if l.len() != n {
                return Err(Error::InvalidDemand(format!(
                    "list of vertex {v} has {} colors, expected {n}",
                    l.len()
                )));
            }
        }
        Ok(DiscreteListAssignment { n, lists })
    }
}

/// One atom of a color partition: a set of colors lying in exactly the
/// lists of `signature`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub colors: BTreeSet<u32>,
    pub signature: VertexSet,
    pub size: usize,
}

/// Atoms plus (optionally) a partition of atom indices into groups with
/// equal size sums.
#[derive(Clone, Debug, Default)]
pub struct AtomPartition {
    pub atoms: Vec<Atom>,
    pub groups: Vec<Vec<usize>>,
}

/// Residual lists after a partial coloring: every uncolored vertex keeps
/// [0,1) minus the color of its colored neighbors. The partial coloring is
/// validated on its own induced subgraph first.
pub fn residual_lists(
    g: &Graph,
    colored: &BTreeMap<usize, IntervalSet>,
) -> Result<ListAssignment> {
    for (&v, set) in colored {
        if v >= g.n() {
            return Err(Error::InvalidColoring(format!("vertex {v} out of range")));
        }
        if !set.is_subset_of(&IntervalSet::full()) {
            return Err(Error::InvalidColoring(format!(
                "color of vertex {v} escapes [0,1)"
            )));
        }
    }
    for (&u, su) in colored {
        for (&v, sv) in colored.range(u + 1..) {
            if g.is_edge(u, v) && !su.is_disjoint_from(sv) {
                return Err(Error::InvalidColoring(format!(
                    "partial coloring shares color on edge ({u},{v})"
                )));
            }
        }
    }
    let mut lists = BTreeMap::new();
    for v in g.vertices() {
        if colored.contains_key(&v) {
            continue;
        }
        let mut seen = IntervalSet::empty();
        for u in g.neighbors(v) {
            if let Some(su) = colored.get(&u) {
                seen = seen.union(su);
            }
        }
        lists.insert(v, seen.complement());
    }
    Ok(ListAssignment { lists })
}

/// Merges a partial coloring with an extension on the remaining vertices.
pub fn merge_colorings(
    g: &Graph,
    colored: &BTreeMap<usize, IntervalSet>,
    extension: &BTreeMap<usize, IntervalSet>,
) -> Result<FractionalColoring> {
    let mut assignment = vec![IntervalSet::empty(); g.n()];
    for (&v, s) in colored.iter().chain(extension.iter()) {
        assignment[v] = s.clone();
    }
    Ok(FractionalColoring { assignment })
}

pub enum HallOutcome {
    Pass,
    /// A minimal violating subset, by cardinality then lexicographic order.
    Violation(VertexSet),
}

/// Checks sum_{v in S} g(v) <= mu(union of lists over S) for every subset.
/// Exponential; capped at 20 vertices.
pub fn hall_check(
    demands: &[Q],
    lists: &[IntervalSet],
) -> Result<HallOutcome> {
    let n = demands.len();
    assert_eq!(lists.len(), n);
    if n > HALL_SIZE_CAP {
        return Err(Error::InstanceTooLarge(format!(
            "hall_check supports at most {HALL_SIZE_CAP} vertices"
        )));
    }
    let mut subsets: Vec<u32> = (1..(1u32 << n)).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    for mask in subsets {
        let mut demand = Q::zero();
        let mut union = IntervalSet::empty();
        for v in 0..n {
            if mask >> v & 1 == 1 {
                demand += &demands[v];
                union = union.union(&lists[v]);
            }
        }
        if demand > union.measure() {
            let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            return Ok(HallOutcome::Violation(VertexSet::new(verts)));
        }
    }
    Ok(HallOutcome::Pass)
}

/// Atomizes a family of interval sets into cells with constant membership.
/// Returns (cell, member bitmask) pairs with positive measure.
fn atomize(lists: &[IntervalSet]) -> Vec<(IntervalSet, u64)> {
    assert!(lists.len() <= 64);
    let mut bounds: BTreeSet<Q> = BTreeSet::new();
    bounds.insert(Q::zero());
    bounds.insert(Q::one());
    for l in lists {
        for (a, b) in l.parts() {
            bounds.insert(a.clone());
            bounds.insert(b.clone());
        }
    }
    let points: Vec<Q> = bounds.into_iter().collect();
    let mut cells: BTreeMap<u64, IntervalSet> = BTreeMap::new();
    for w in points.windows(2) {
        let piece = IntervalSet::interval(w[0].clone(), w[1].clone());
        if piece.is_empty() {
            continue;
        }
        let mut mask = 0u64;
        for (v, l) in lists.iter().enumerate() {
            if piece.is_subset_of(l) {
                mask |= 1 << v;
            }
        }
        let entry = cells.entry(mask).or_insert_with(IntervalSet::empty);
        *entry = entry.union(&piece);
    }
    cells.into_iter().map(|(m, c)| (c, m)).collect()
}

/// Exact rational max-flow (Edmonds-Karp) on a small dense network.
struct FlowNet {
    n: usize,
    cap: Vec<Vec<Q>>,
}

impl FlowNet {
    fn new(n: usize) -> Self {
        FlowNet {
            n,
            cap: vec![vec![Q::zero(); n]; n],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: Q) {
        self.cap[u][v] = &self.cap[u][v] + &c;
    }

    fn max_flow(&mut self, s: usize, t: usize) -> (Q, Vec<Vec<Q>>) {
        let mut flow = vec![vec![Q::zero(); self.n]; self.n];
        let mut total = Q::zero();
        loop {
            // BFS for a shortest augmenting path
            let mut parent = vec![usize::MAX; self.n];
            parent[s] = s;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in 0..self.n {
                    if parent[v] == usize::MAX && self.cap[u][v] > flow[u][v] {
                        parent[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if parent[t] == usize::MAX {
                return (total, flow);
            }
            let mut bottleneck: Option<Q> = None;
            let mut v = t;
            while v != s {
                let u = parent[v];
                let slack = &self.cap[u][v] - &flow[u][v];
                bottleneck = Some(match bottleneck {
                    Some(b) => b.min(slack),
                    None => slack,
                });
                v = u;
            }
            let b = bottleneck.expect("path has an edge");
            let mut v = t;
            while v != s {
                let u = parent[v];
                flow[u][v] = &flow[u][v] + &b;
                flow[v][u] = &flow[v][u] - &b;
                v = u;
            }
            total += &b;
        }
    }
}

/// Constructs a (g,L)-coloring of a clique: pairwise disjoint interval sets
/// phi(v) inside L(v) with measure at least g(v). Lists are decomposed into
/// membership atoms and demands routed to atoms by exact max flow; on a
/// clique a Hall pass guarantees saturation.
pub fn hall_color(demands: &[Q], lists: &[IntervalSet]) -> Result<Vec<IntervalSet>> {
    let n = demands.len();
    assert_eq!(lists.len(), n);
    if n > HALL_SIZE_CAP {
        return Err(Error::InstanceTooLarge(format!(
            "hall_color supports at most {HALL_SIZE_CAP} vertices"
        )));
    }
    if let HallOutcome::Violation(s) = hall_check(demands, lists)? {
        return Err(Error::HallViolated(s.as_slice().to_vec()));
    }
    let atoms = atomize(lists);
    let na = atoms.len();
    // nodes: 0 = source, 1..=n vertices, n+1..=n+na atoms, n+na+1 sink
    let s = 0;
    let t = n + na + 1;
    let mut net = FlowNet::new(n + na + 2);
    for v in 0..n {
        net.add(s, 1 + v, demands[v].clone());
    }
    for (ai, (cell, mask)) in atoms.iter().enumerate() {
        net.add(1 + n + ai, t, cell.measure());
        for v in 0..n {
            if mask >> v & 1 == 1 {
                net.add(1 + v, 1 + n + ai, cell.measure());
            }
        }
    }
    let want: Q = demands.iter().cloned().sum();
    let (total, flow) = net.max_flow(s, t);
    if total != want {
        return Err(Error::Defect(
            "Hall passed but flow does not saturate demands".into(),
        ));
    }
    let mut out = vec![IntervalSet::empty(); n];
    for (ai, (cell, _)) in atoms.iter().enumerate() {
        let mut offset = Q::zero();
        for v in 0..n {
            let amount = &flow[1 + v][1 + n + ai];
            if amount.is_positive() {
                let end = &offset + amount;
                out[v] = out[v].union(&cell.portion(&offset, &end));
                offset = end;
            }
        }
    }
    for v in 0..n {
        if out[v].measure() < demands[v] || !out[v].is_subset_of(&lists[v]) {
            return Err(Error::Defect("hall_color produced an invalid part".into()));
        }
    }
    Ok(out)
}

/// The complement edges of h, which must form a matching.
fn complement_matching(h: &Graph) -> Result<Vec<(usize, usize)>> {
    let mut matching = Vec::new();
    let mut used = vec![false; h.n()];
    for u in 0..h.n() {
        for v in u + 1..h.n() {
            if !h.is_edge(u, v) {
                if used[u] || used[v] {
                    return Err(Error::InvalidGraph(
                        "graph is not a clique minus a matching".into(),
                    ));
                }
                used[u] = true;
                used[v] = true;
                matching.push((u, v));
            }
        }
    }
    Ok(matching)
}

/// Colors H = K_n - M from lists, letting matched pairs share color.
/// The three size conditions are checked exactly and reported by name.
pub fn color_clique_minus_matching(
    h: &Graph,
    demands: &[Q],
    lists: &[IntervalSet],
) -> Result<Vec<IntervalSet>> {
    let n = h.n();
    assert_eq!(demands.len(), n);
    assert_eq!(lists.len(), n);
    let matching = complement_matching(h)?;
    let matched: BTreeSet<usize> = matching.iter().flat_map(|&(u, v)| [u, v]).collect();

    // (i) unmatched vertices have long lists
    let unmatched_total: Q = (0..n)
        .filter(|v| !matched.contains(v))
        .map(|v| demands[v].clone())
        .sum();
    let pair_max_total: Q = matching
        .iter()
        .map(|&(u, v)| demands[u].clone().max(demands[v].clone()))
        .sum();
    for v in 0..n {
        if !matched.contains(&v) {
            let need = &unmatched_total + &pair_max_total;
            if lists[v].measure() < need {
                return Err(Error::MatchingLemmaCondition {
                    name: "i",
                    detail: format!("mu(L({v})) = {} < {need}", lists[v].measure()),
                });
            }
        }
    }
    // (ii) matched vertices still see enough beyond the other pairs
    for &(x, y) in &matching {
        for v in [x, y] {
            let others: Q = matching
                .iter()
                .filter(|&&(u, w)| u != x || w != y)
                .map(|&(u, w)| demands[u].clone().max(demands[w].clone()))
                .sum();
            let need = &demands[v] + &others;
            if lists[v].measure() < need {
                return Err(Error::MatchingLemmaCondition {
                    name: "ii",
                    detail: format!("mu(L({v})) = {} < {need}", lists[v].measure()),
                });
            }
        }
    }
    // (iii) each pair jointly covers the whole demand
    let total: Q = demands.iter().cloned().sum();
    for &(x, y) in &matching {
        let have = lists[x].measure() + lists[y].measure();
        if have < total {
            return Err(Error::MatchingLemmaCondition {
                name: "iii",
                detail: format!("mu(L({x})) + mu(L({y})) = {have} < {total}"),
            });
        }
    }

    // Give each overlapping pair a shared chunk, then finish disjointly.
    let mut g = demands.to_vec();
    let mut l = lists.to_vec();
    let mut shared = vec![IntervalSet::empty(); n];
    for &(x, y) in &matching {
        let (lo, _hi) = if g[x] <= g[y] { (x, y) } else { (y, x) };
        let inter = l[x].intersection(&l[y]);
        if inter.is_empty() || g[lo].is_zero() {
            continue;
        }
        let amount = g[lo].clone().min(inter.measure());
        let chunk = inter.take_prefix(&amount);
        for v in [x, y] {
            shared[v] = shared[v].union(&chunk);
            g[v] = (&g[v] - &amount).max(Q::zero());
        }
        for item in l.iter_mut() {
            *item = item.difference(&chunk);
        }
    }
    let disjoint_part = hall_color(&g, &l)?;
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        out.push(disjoint_part[v].union(&shared[v]));
    }
    // final validity check against the original instance
    for v in 0..n {
        if out[v].measure() < demands[v] || !out[v].is_subset_of(&lists[v]) {
            return Err(Error::Defect("matching-lemma coloring invalid".into()));
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            if h.is_edge(u, v) && !out[u].is_disjoint_from(&out[v]) {
                return Err(Error::Defect("matching-lemma coloring shares on edge".into()));
            }
        }
    }
    Ok(out)
}

/// List transfer: assembles a (g,L)-coloring of G cell by cell. For every
/// membership cell C_S with positive measure the induced subgraph G[S] must
/// be f-colorable; the f-coloring is scaled into the cell.
pub fn list_transfer_color(
    g: &Graph,
    f: &DemandFn,
    demands: &[Q],
    lists: &[IntervalSet],
    cap: usize,
) -> Result<FractionalColoring> {
    let n = g.n();
    assert_eq!(f.len(), n);
    assert_eq!(demands.len(), n);
    assert_eq!(lists.len(), n);
    if n > 64 {
        return Err(Error::InstanceTooLarge("list transfer supports n <= 64".into()));
    }
    for v in 0..n {
        if demands[v] > f.get(v) * &lists[v].measure() {
            return Err(Error::HypothesisFailed(format!(
                "g({v}) = {} exceeds f({v})*mu(L({v})) = {}",
                demands[v],
                f.get(v) * &lists[v].measure()
            )));
        }
    }
    let mut assignment = vec![IntervalSet::empty(); n];
    for (cell, mask) in atomize(lists) {
        if mask == 0 {
            continue;
        }
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let (sub, back) = g.induced(&verts);
        let sub_f = DemandFn::new(verts.iter().map(|&v| f.get(v).clone()).collect())?;
        let verdict = fracsolve::is_fcolorable(&sub, &sub_f, cap)?;
        let phi = match verdict.primal {
            Some(phi) => phi,
            None => {
                return Err(Error::NotColorable(format!(
                    "induced subgraph {verts:?} has no f-coloring"
                )))
            }
        };
        for (i, &v) in back.iter().enumerate() {
            let image = cell.embed_scaled(&phi.assignment[i]);
            assignment[v] = assignment[v].union(&image);
        }
    }
    let coloring = FractionalColoring { assignment };
    // verify the (g,L) contract before returning
    for v in 0..n {
        if coloring.assignment[v].measure() < demands[v]
            || !coloring.assignment[v].is_subset_of(&lists[v])
        {
            return Err(Error::Defect("list transfer produced an invalid part".into()));
        }
    }
    for (u, v) in g.edges() {
        if !coloring.assignment[u].is_disjoint_from(&coloring.assignment[v]) {
            return Err(Error::Defect("list transfer shares color on an edge".into()));
        }
    }
    Ok(coloring)
}

pub fn lcm_up_to(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k.max(1) {
        acc = num_integer::lcm(acc, BigInt::from(i));
    }
    acc
}

/// Partitions indices of (n_i) into N parts with equal sums M/N, under the
/// divisibility hypotheses. Greedy by descending size class with exact
/// backtracking; failure under valid hypotheses is reported as a defect.
pub fn atv_partition_integers(
    sizes: &[usize],
    m: u64,
    n_parts: usize,
    k: usize,
) -> Result<Vec<Vec<usize>>> {
    if n_parts == 0 {
        return Err(Error::HypothesisFailed("N must be positive".into()));
    }
    if sizes.iter().any(|&s| s == 0 || s > k) {
        return Err(Error::HypothesisFailed(format!(
            "every n_i must lie in 1..={k}"
        )));
    }
    let total: u64 = sizes.iter().map(|&s| s as u64).sum();
    if total != m {
        return Err(Error::HypothesisFailed(format!(
            "sum of n_i is {total}, stated M is {m}"
        )));
    }
    if m % n_parts as u64 != 0 {
        return Err(Error::HypothesisFailed(format!("{n_parts} does not divide {m}")));
    }
    let target = m / n_parts as u64;
    let lcm = lcm_up_to(k);
    let lcm_u64: u64 = (&lcm)
        .try_into()
        .map_err(|_| Error::HypothesisFailed("lcm(2..k) overflows u64".into()))?;
    if target % lcm_u64 != 0 {
        return Err(Error::HypothesisFailed(format!(
            "lcm(2..{k}) = {lcm_u64} does not divide M/N = {target}"
        )));
    }
    if (k as u64).saturating_mul(lcm_u64) > target {
        return Err(Error::HypothesisFailed(format!(
            "k*lcm(2..k) = {} exceeds M/N = {target}",
            k as u64 * lcm_u64
        )));
    }

    // Work over size classes; per part find an exact-sum take vector.
    let mut count = vec![0u64; k + 1];
    for &s in sizes {
        count[s] += 1;
    }
    let mut parts_take: Vec<Vec<u64>> = Vec::with_capacity(n_parts);
    for _ in 0..n_parts - 1 {
        let take = exact_take(&count, k, target).ok_or_else(|| {
            Error::Defect("no exact-sum part exists despite valid hypotheses".into())
        })?;
        for s in 1..=k {
            count[s] -= take[s];
        }
        parts_take.push(take);
    }
    parts_take.push(count.clone());

    // Materialize index lists, consuming indices per size class in order.
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); k + 1];
    for (i, &s) in sizes.iter().enumerate() {
        by_size[s].push(i);
    }
    let mut cursor = vec![0usize; k + 1];
    let mut parts = Vec::with_capacity(n_parts);
    for take in parts_take {
        let mut part = Vec::new();
        for s in 1..=k {
            for _ in 0..take[s] {
                part.push(by_size[s][cursor[s]]);
                cursor[s] += 1;
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    Ok(parts)
}

/// Take vector summing exactly to target: greedy from the largest class
/// with backtracking on the greedy amounts.
fn exact_take(count: &[u64], k: usize, target: u64) -> Option<Vec<u64>> {
    fn go(count: &[u64], s: usize, remaining: u64, take: &mut Vec<u64>) -> bool {
        if remaining == 0 {
            for x in take.iter_mut().take(s + 1).skip(1) {
                *x = 0;
            }
            return true;
        }
        if s == 0 {
            return false;
        }
        let most = count[s].min(remaining / s as u64);
        let mut t = most as i64;
        while t >= 0 {
            take[s] = t as u64;
            if go(count, s - 1, remaining - t as u64 * s as u64, take) {
                return true;
            }
            t -= 1;
        }
        take[s] = 0;
        false
    }
    let mut take = vec![0u64; k + 1];
    if go(count, k, target, &mut take) {
        Some(take)
    } else {
        None
    }
}

/// Chunk size bound floor((n+1)^((n+1)/2)) for a hypergraph with n edges.
pub fn atom_chunk_bound(n_edges: usize) -> BigInt {
    let base = BigInt::from(n_edges + 1);
    let power = num_traits::pow::pow(base, n_edges + 1);
    power.sqrt()
}

/// Partitions the color universe into membership-signature atoms, splitting
/// any atom larger than the uniformity bound into chunks.
pub fn atv_partition_hypergraph(lists: &DiscreteListAssignment) -> AtomPartition {
    let nv = lists.lists.len();
    let mut by_sig: BTreeMap<Vec<usize>, BTreeSet<u32>> = BTreeMap::new();
    let universe: BTreeSet<u32> = lists.lists.iter().flatten().copied().collect();
    for c in universe {
        let sig: Vec<usize> = (0..nv).filter(|&v| lists.lists[v].contains(&c)).collect();
        by_sig.entry(sig).or_default().insert(c);
    }
    let bound = atom_chunk_bound(nv);
    let bound_usize: usize = (&bound).try_into().unwrap_or(usize::MAX);
    let mut atoms = Vec::new();
    for (sig, colors) in by_sig {
        let colors: Vec<u32> = colors.into_iter().collect();
        for chunk in colors.chunks(bound_usize.max(1)) {
            atoms.push(Atom {
                colors: chunk.iter().copied().collect(),
                signature: VertexSet::new(sig.clone()),
                size: chunk.len(),
            });
        }
    }
    AtomPartition {
        atoms,
        groups: Vec::new(),
    }
}

/// Independent checker for f-fold L-colorings: subsets of the lists with
/// |psi(v)| >= M*f(v), disjoint across edges.
pub fn verify_ffold(
    g: &Graph,
    f: &DemandFn,
    lists: &DiscreteListAssignment,
    assignment: &[BTreeSet<u32>],
) -> Result<()> {
    let n = g.n();
    if assignment.len() != n || lists.lists.len() != n {
        return Err(Error::InvalidColoring("wrong domain".into()));
    }
    let m = lists.n as i64;
    for v in 0..n {
        if !assignment[v].is_subset(&lists.lists[v]) {
            return Err(Error::InvalidColoring(format!(
                "vertex {v} uses colors outside its list"
            )));
        }
        if Q::from_int(assignment[v].len() as i64) < f.get(v) * &Q::from_int(m) {
            return Err(Error::InvalidColoring(format!(
                "vertex {v} has {} colors, needs {}",
                assignment[v].len(),
                f.get(v) * &Q::from_int(m)
            )));
        }
    }
    for (u, v) in g.edges() {
        if !assignment[u].is_disjoint(&assignment[v]) {
            return Err(Error::InvalidColoring(format!(
                "adjacent vertices {u},{v} share a color"
            )));
        }
    }
    Ok(())
}

/// Uplifts an (f,N)-coloring to an f-fold coloring from M-lists.
///
/// Pipeline: signature atoms, then a per-vertex balance step that splits the
/// color universe into N groups with |L(v) ∩ Y_j| = M/N for every vertex and
/// group (exact backtracking over atom splits), then psi'(v) = L(v) ∩
/// union of the groups psi(v) selects. The output is re-verified by
/// `verify_ffold` before it is returned; a balance failure is reported,
/// never papered over.
pub fn multiplicative_uplift(
    g: &Graph,
    f: &DemandFn,
    psi: &SetColoring,
    lists: &DiscreteListAssignment,
) -> Result<Vec<BTreeSet<u32>>> {
    fracsolve::verify_set_coloring(g, f, psi)?;
    let n_groups: usize = psi
        .n
        .try_into()
        .map_err(|_| Error::InstanceTooLarge("N exceeds usize".into()))?;
    let m = lists.n;
    if lists.lists.len() != g.n() {
        return Err(Error::InvalidDemand("list domain mismatch".into()));
    }
    if n_groups == 0 || m % n_groups != 0 {
        return Err(Error::HypothesisFailed(format!(
            "N = {n_groups} must divide M = {m}"
        )));
    }
    let quota = m / n_groups;
    let partition = atv_partition_hypergraph(lists);
    let splits = balance_atoms(&partition.atoms, g.n(), n_groups, quota)?;

    // groups of colors: atom i contributes its first splits[i][j] colors
    // (in sorted order) to group j
    let mut group_of_color: BTreeMap<u32, usize> = BTreeMap::new();
    for (atom, split) in partition.atoms.iter().zip(&splits) {
        let mut it = atom.colors.iter();
        for (j, &cnt) in split.iter().enumerate() {
            for _ in 0..cnt {
                let c = it.next().expect("split sums to atom size");
                group_of_color.insert(*c, j);
            }
        }
    }
    let mut out = vec![BTreeSet::new(); g.n()];
    for v in g.vertices() {
        let groups: BTreeSet<usize> = psi.assignment[v]
            .iter()
            .map(|&slot| (slot - 1) as usize)
            .collect();
        for &c in &lists.lists[v] {
            if groups.contains(&group_of_color[&c]) {
                out[v].insert(c);
            }
        }
    }
    verify_ffold(g, f, lists, &out)?;
    Ok(out)
}

/// Finds per-atom splits y[i][j] with row sums the atom sizes and, for
/// every vertex v and group j, sum over atoms containing v of y[i][j]
/// equal to the quota. Backtracking with quota pruning.
fn balance_atoms(
    atoms: &[Atom],
    nv: usize,
    n_groups: usize,
    quota: usize,
) -> Result<Vec<Vec<usize>>> {
    // process most-constrained atoms first
    let mut order: Vec<usize> = (0..atoms.len()).collect();
    order.sort_by_key(|&i| {
        (
            std::cmp::Reverse(atoms[i].signature.len()),
            std::cmp::Reverse(atoms[i].size),
            i,
        )
    });
    let mut remaining = vec![vec![quota as i64; n_groups]; nv];
    // supply[v] = colors still to come for v among unprocessed atoms
    let mut supply = vec![0i64; nv];
    for atom in atoms {
        for v in atom.signature.iter() {
            supply[v] += atom.size as i64;
        }
    }
    let mut splits = vec![vec![0usize; n_groups]; atoms.len()];
    let mut nodes = 0usize;
    let cap = 20_000_000usize;

    fn rec(
        atoms: &[Atom],
        order: &[usize],
        pos: usize,
        remaining: &mut Vec<Vec<i64>>,
        supply: &mut Vec<i64>,
        splits: &mut Vec<Vec<usize>>,
        n_groups: usize,
        nodes: &mut usize,
        cap: usize,
    ) -> Result<bool> {
        if pos == order.len() {
            let ok = remaining.iter().all(|r| r.iter().all(|&x| x == 0));
            return Ok(ok);
        }
        *nodes += 1;
        if *nodes > cap {
            return Err(Error::BalanceFailed(
                "balance search exceeded its node budget".into(),
            ));
        }
        let ai = order[pos];
        let atom = &atoms[ai];
        let members: Vec<usize> = atom.signature.iter().collect();
        for &v in &members {
            supply[v] -= atom.size as i64;
        }
        // For each member v and group j we must keep
        //   0 <= remaining[v][j] - y_j <= supply_after[v] summed over groups,
        // enforced per group: y_j <= remaining[v][j] and
        // remaining[v][j] - y_j <= supply_after[v].
        let found = distribute_atom(
            atoms, order, pos, atom, &members, 0, atom.size, remaining, supply, splits, n_groups,
            nodes, cap,
        )?;
        if !found {
            for &v in &members {
                supply[v] += atom.size as i64;
            }
        }
        Ok(found)
    }

    #[allow(clippy::too_many_arguments)]
    fn distribute_atom(
        atoms: &[Atom],
        order: &[usize],
        pos: usize,
        atom: &Atom,
        members: &[usize],
        j: usize,
        left: usize,
        remaining: &mut Vec<Vec<i64>>,
        supply: &mut Vec<i64>,
        splits: &mut Vec<Vec<usize>>,
        n_groups: usize,
        nodes: &mut usize,
        cap: usize,
    ) -> Result<bool> {
        let ai = order[pos];
        if j == n_groups {
            if left != 0 {
                return Ok(false);
            }
            return rec(
                atoms, order, pos + 1, remaining, supply, splits, n_groups, nodes, cap,
            );
        }
        // bounds for y_j
        let mut hi = left as i64;
        let mut lo = 0i64;
        if j == n_groups - 1 {
            lo = left as i64;
        }
        for &v in members {
            hi = hi.min(remaining[v][j]);
            lo = lo.max(remaining[v][j] - supply[v]);
        }
        if lo > hi {
            return Ok(false);
        }
        let mut y = hi;
        while y >= lo {
            splits[ai][j] = y as usize;
            for &v in members.iter() {
                remaining[v][j] -= y;
            }
            let ok = distribute_atom(
                atoms,
                order,
                pos,
                atom,
                members,
                j + 1,
                left - y as usize,
                remaining,
                supply,
                splits,
                n_groups,
                nodes,
                cap,
            )?;
            if ok {
                return Ok(true);
            }
            for &v in members.iter() {
                remaining[v][j] += y;
            }
            splits[ai][j] = 0;
            y -= 1;
        }
        Ok(false)
    }

    let ok = rec(
        atoms,
        &order,
        0,
        &mut remaining,
        &mut supply,
        &mut splits,
        n_groups,
        &mut nodes,
        cap,
    )?;
    if !ok {
        return Err(Error::BalanceFailed(format!(
            "no balanced {n_groups}-group split of the color universe exists for these lists"
        )));
    }
    Ok(splits)
}

/// Decides (f,N)-list-colorability by exhausting all N-list assignments
/// over a universe of n*N colors, up to color renaming. The renaming cap is
/// sound: any assignment uses at most n*N distinct colors, and colorability
/// is invariant under injective recoloring.
pub fn list_colorable_bruteforce(
    g: &Graph,
    f: &DemandFn,
    n_list: usize,
    node_cap: usize,
) -> Result<bool> {
    let n = g.n();
    assert_eq!(f.len(), n);
    if n * n_list > LIST_BRUTE_CAP {
        return Err(Error::InstanceTooLarge(format!(
            "n*N = {} exceeds the brute-force cap {LIST_BRUTE_CAP}",
            n * n_list
        )));
    }
    let mut sizes = Vec::with_capacity(n);
    for v in g.vertices() {
        let s = f
            .get(v)
            .scaled_usize(n_list as u64)
            .ok_or_else(|| Error::InvalidDemand(format!("{n_list} is not a common denominator")))?;
        sizes.push(s);
    }
    if n == 0 {
        return Ok(true);
    }

    // canonical enumeration: new colors enter in increasing consecutive order
    fn enumerate(
        g: &Graph,
        sizes: &[usize],
        n_list: usize,
        lists: &mut Vec<BTreeSet<u32>>,
        used: u32,
        node_cap: usize,
    ) -> Result<bool> {
        let v = lists.len();
        if v == g.n() {
            let found = subset_coloring_search(g, sizes, lists, node_cap)?;
            return Ok(found.is_some());
        }
        // choose how many fresh colors this list introduces, then which old
        let old_pool: Vec<u32> = (0..used).collect();
        for fresh in 0..=n_list.min(n_list) {
            let old_needed = n_list - fresh;
            if old_needed > old_pool.len() {
                continue;
            }
            let mut combo: Vec<usize> = (0..old_needed).collect();
            loop {
                let mut list: BTreeSet<u32> = combo.iter().map(|&i| old_pool[i]).collect();
                for t in 0..fresh {
                    list.insert(used + t as u32);
                }
                lists.push(list);
                let ok = enumerate(g, sizes, n_list, lists, used + fresh as u32, node_cap)?;
                lists.pop();
                if !ok {
                    return Ok(false);
                }
                // next combination of old colors
                if old_needed == 0 {
                    break;
                }
                let mut i = old_needed;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if combo[i] + 1 <= old_pool.len() - (old_needed - i) {
                        combo[i] += 1;
                        for j in i + 1..old_needed {
                            combo[j] = combo[j - 1] + 1;
                        }
                        break;
                    }
                    if i == 0 {
                        combo.clear();
                        break;
                    }
                }
                if combo.is_empty() || combo[old_needed - 1] >= old_pool.len() {
                    break;
                }
            }
        }
        Ok(true)
    }

    let mut lists = Vec::new();
    enumerate(g, &sizes, n_list, &mut lists, 0, node_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{complete, cycle};

    fn iv(a: Q, b: Q) -> IntervalSet {
        IntervalSet::interval(a, b)
    }

    #[test]
    fn residual_lists_examples() {
        // K2 with vertex 0 colored [0,1/3)
        let g = complete(2);
        let mut colored = BTreeMap::new();
        colored.insert(0, iv(Q::zero(), Q::new(1, 3)));
        let l = residual_lists(&g, &colored).unwrap();
        assert_eq!(l.lists[&1], iv(Q::new(1, 3), Q::one()));

        // C5: color vertex 0 with [0,2/5)
        let g = cycle(5);
        let mut colored = BTreeMap::new();
        colored.insert(0, iv(Q::zero(), Q::new(2, 5)));
        let l = residual_lists(&g, &colored).unwrap();
        assert_eq!(l.lists[&1].measure(), Q::new(3, 5));
        assert_eq!(l.lists[&4].measure(), Q::new(3, 5));
        assert_eq!(l.lists[&2], IntervalSet::full());
        assert_eq!(l.lists[&3], IntervalSet::full());

        // K3 with two colored vertices
        let g = complete(3);
        let mut colored = BTreeMap::new();
        colored.insert(0, iv(Q::zero(), Q::new(1, 3)));
        colored.insert(1, iv(Q::new(1, 3), Q::new(2, 3)));
        let l = residual_lists(&g, &colored).unwrap();
        assert_eq!(l.lists[&2], iv(Q::new(2, 3), Q::one()));

        // invalid partial coloring is rejected
        let mut colored = BTreeMap::new();
        colored.insert(0, iv(Q::zero(), Q::new(1, 2)));
        colored.insert(1, iv(Q::zero(), Q::new(1, 2)));
        assert!(residual_lists(&g, &colored).is_err());
    }

    #[test]
    fn hall_check_examples() {
        let full = IntervalSet::full();
        // K2, g = 1/2: pass
        let out = hall_check(&[Q::new(1, 2), Q::new(1, 2)], &[full.clone(), full.clone()])
            .unwrap();
        assert!(matches!(out, HallOutcome::Pass));
        // K2, g = 2/3: the pair violates
        let out = hall_check(&[Q::new(2, 3), Q::new(2, 3)], &[full.clone(), full.clone()])
            .unwrap();
        match out {
            HallOutcome::Violation(s) => assert_eq!(s.as_slice(), &[0, 1]),
            _ => panic!("expected violation"),
        }
        // disjoint thirds, tight singletons
        let thirds = [
            iv(Q::zero(), Q::new(1, 3)),
            iv(Q::new(1, 3), Q::new(2, 3)),
            iv(Q::new(2, 3), Q::one()),
        ];
        let out = hall_check(&[Q::new(1, 3), Q::new(1, 3), Q::new(1, 3)], &thirds).unwrap();
        assert!(matches!(out, HallOutcome::Pass));
    }

    #[test]
    fn hall_color_examples() {
        let full = IntervalSet::full();
        let parts = hall_color(&[Q::new(1, 2), Q::new(1, 2)], &[full.clone(), full.clone()])
            .unwrap();
        assert!(parts[0].is_disjoint_from(&parts[1]));
        assert_eq!(parts[0].measure(), Q::new(1, 2));

        // forced assignment: L(0) = [0,1/2), L(1) = [0,1)
        let lists = [iv(Q::zero(), Q::new(1, 2)), full.clone()];
        let parts = hall_color(&[Q::new(1, 2), Q::new(1, 2)], &lists).unwrap();
        assert_eq!(parts[0], iv(Q::zero(), Q::new(1, 2)));
        assert_eq!(parts[1], iv(Q::new(1, 2), Q::one()));

        // Hall violation is reported
        assert!(matches!(
            hall_color(&[Q::new(2, 3), Q::new(2, 3)], &[full.clone(), full]),
            Err(Error::HallViolated(_))
        ));
    }

    #[test]
    fn clique_minus_matching_examples() {
        // K2 minus its edge: both vertices share [0,1/2)
        let h = Graph::empty(2);
        let half = iv(Q::zero(), Q::new(1, 2));
        let out = color_clique_minus_matching(
            &h,
            &[Q::new(1, 2), Q::new(1, 2)],
            &[half.clone(), half.clone()],
        )
        .unwrap();
        assert_eq!(out[0], half);
        assert_eq!(out[1], half);

        // K3 minus one edge, g = 1/3, full lists: the non-adjacent pair
        // shares and the third vertex gets its own color
        let h = Graph::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        let full = IntervalSet::full();
        let g3 = [Q::new(1, 3), Q::new(1, 3), Q::new(1, 3)];
        let out =
            color_clique_minus_matching(&h, &g3, &[full.clone(), full.clone(), full.clone()])
                .unwrap();
        assert_eq!(out[0], out[1]);
        assert!(out[2].is_disjoint_from(&out[0]));
        assert_eq!(out[0].measure(), Q::new(1, 3));

        // the empty graph on 3 vertices is not a clique minus a matching
        let e3 = Graph::empty(3);
        assert!(color_clique_minus_matching(&e3, &g3, &[full.clone(), full.clone(), full.clone()])
            .is_err());
    }

    #[test]
    fn clique_minus_matching_condition_failure_is_named() {
        // K4 minus edge {0,1} with condition (iii) tight, then perturbed.
        let h = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let g4 = [Q::new(1, 4), Q::new(1, 4), Q::new(1, 4), Q::new(1, 4)];
        let lists = [
            iv(Q::zero(), Q::new(1, 2)),
            iv(Q::new(1, 2), Q::one()),
            IntervalSet::full(),
            IntervalSet::full(),
        ];
        let out = color_clique_minus_matching(&h, &g4, &lists).unwrap();
        for v in 0..4 {
            assert!(out[v].measure() >= Q::new(1, 4));
        }
        let lists_bad = [
            iv(Q::zero(), Q::new(1, 2) - Q::new(1, 100)),
            iv(Q::new(1, 2), Q::one()),
            IntervalSet::full(),
            IntervalSet::full(),
        ];
        match color_clique_minus_matching(&h, &g4, &lists_bad) {
            Err(Error::MatchingLemmaCondition { name, .. }) => assert_eq!(name, "iii"),
            other => panic!("expected condition (iii) failure, got {other:?}"),
        }
    }

    #[test]
    fn list_transfer_examples() {
        let cap = 1_000_000;
        // single cell: all lists equal [0,1/2), g = f/2
        let g = cycle(5);
        let f = DemandFn::uniform(5, Q::new(2, 5)).unwrap();
        let half = iv(Q::zero(), Q::new(1, 2));
        let lists = vec![half; 5];
        let demands: Vec<Q> = f.values.iter().map(|x| x * &Q::new(1, 2)).collect();
        let out = list_transfer_color(&g, &f, &demands, &lists, cap).unwrap();
        for v in 0..5 {
            assert!(out.assignment[v].measure() >= demands[v]);
            assert!(out.assignment[v].is_subset_of(&lists[v]));
        }

        // two vertices with disjoint lists: singleton cells
        let g = complete(2);
        let f = DemandFn::uniform(2, Q::one()).unwrap();
        let lists = vec![iv(Q::zero(), Q::new(1, 2)), iv(Q::new(1, 2), Q::one())];
        let demands = vec![Q::new(1, 2), Q::new(1, 2)];
        let out = list_transfer_color(&g, &f, &demands, &lists, cap).unwrap();
        assert_eq!(out.assignment[0], lists[0]);
        assert_eq!(out.assignment[1], lists[1]);

        // hypothesis violation reported
        let bad = list_transfer_color(&g, &f, &[Q::one(), Q::one()], &lists, cap);
        assert!(matches!(bad, Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn atv_integers_examples() {
        // four ones into two pairs
        let parts = atv_partition_integers(&[1, 1, 1, 1], 4, 2, 1).unwrap();
        assert_eq!(parts.len(), 2);
        for p in &parts {
            assert_eq!(p.iter().map(|&i| [1, 1, 1, 1][i] as u64).sum::<u64>(), 2);
        }

        // mixed sizes, k = 2
        let sizes = [2, 2, 2, 1, 1, 1, 1, 1, 1];
        let parts = atv_partition_integers(&sizes, 12, 2, 2).unwrap();
        for p in &parts {
            assert_eq!(p.iter().map(|&i| sizes[i] as u64).sum::<u64>(), 6);
        }

        // N = 1: single part holding everything
        let parts = atv_partition_integers(&[3, 3, 3, 3, 3, 3], 18, 1, 3).unwrap();
        assert_eq!(parts, vec![vec![0, 1, 2, 3, 4, 5]]);

        // hypothesis violations
        assert!(atv_partition_integers(&[3], 3, 1, 2).is_err()); // n_i > k
        assert!(atv_partition_integers(&[1, 1, 1], 4, 2, 1).is_err()); // wrong M
        assert!(atv_partition_integers(&[1, 1, 1], 3, 2, 1).is_err()); // N does not divide M
    }

    #[test]
    fn atv_integers_random_instances() {
        let mut rng = crate::rng::seeded(17);
        for _ in 0..100 {
            let k = crate::rng::range_inclusive(&mut rng, 1, 4) as usize;
            let n_parts = crate::rng::range_inclusive(&mut rng, 1, 3) as usize;
            let lcm: u64 = (&lcm_up_to(k)).try_into().unwrap();
            let mult = crate::rng::range_inclusive(&mut rng, k as u64, 2 * k as u64 + 2);
            let target = lcm * mult; // divisible by lcm, >= k*lcm
            let m = target * n_parts as u64;
            // fill with random sizes, padding by 1s to hit the total
            let mut sizes = Vec::new();
            let mut acc = 0u64;
            while acc < m {
                let s = crate::rng::range_inclusive(&mut rng, 1, k as u64).min(m - acc);
                sizes.push(s as usize);
                acc += s;
            }
            let parts = atv_partition_integers(&sizes, m, n_parts, k).unwrap();
            assert_eq!(parts.len(), n_parts);
            let mut seen = vec![false; sizes.len()];
            for p in &parts {
                let sum: u64 = p.iter().map(|&i| sizes[i] as u64).sum();
                assert_eq!(sum, target);
                for &i in p {
                    assert!(!seen[i]);
                    seen[i] = true;
                }
            }
            assert!(seen.iter().all(|&x| x));
        }
    }

    #[test]
    fn hypergraph_atoms() {
        // two identical lists: one signature
        let l = DiscreteListAssignment::new(4, vec![(0..4).collect(), (0..4).collect()])
            .unwrap();
        let ap = atv_partition_hypergraph(&l);
        assert_eq!(ap.atoms.len(), 1);
        assert_eq!(ap.atoms[0].signature.as_slice(), &[0, 1]);

        // two disjoint lists: two atoms
        let l = DiscreteListAssignment::new(2, vec![[0, 1].into(), [2, 3].into()]).unwrap();
        let ap = atv_partition_hypergraph(&l);
        assert_eq!(ap.atoms.len(), 2);

        // three lists realizing all seven signatures
        let l = DiscreteListAssignment::new(4, vec![
            [0, 3, 4, 6].into(),
            [1, 3, 5, 6].into(),
            [2, 4, 5, 6].into(),
        ])
        .unwrap();
        let ap = atv_partition_hypergraph(&l);
        assert_eq!(ap.atoms.len(), 7);
    }

    #[test]
    fn chunk_bound_values() {
        assert_eq!(atom_chunk_bound(1), BigInt::from(2)); // sqrt(4)
        assert_eq!(atom_chunk_bound(3), BigInt::from(16)); // sqrt(256)
        assert_eq!(atom_chunk_bound(5), BigInt::from(216)); // 6^3
    }

    #[test]
    fn uplift_identical_lists() {
        // C5, f = 2/5, N = 5, identical 10-lists: relabeling across 2 copies
        let g = cycle(5);
        let f = DemandFn::uniform(5, Q::new(2, 5)).unwrap();
        let psi = fracsolve::set_coloring_bruteforce(&g, &f, 5, 1_000_000)
            .unwrap()
            .expect("C5 tight coloring");
        let lists =
            DiscreteListAssignment::new(10, (0..5).map(|_| (0..10).collect()).collect()).unwrap();
        let out = multiplicative_uplift(&g, &f, &psi, &lists).unwrap();
        for v in 0..5 {
            assert_eq!(out[v].len(), 4); // 2M/5 with M = 10
        }
    }

    #[test]
    fn uplift_k2_random_lists() {
        let g = complete(2);
        let f = DemandFn::uniform(2, Q::new(1, 2)).unwrap();
        let psi = SetColoring {
            n: 2,
            assignment: vec![vec![1], vec![2]],
        };
        let mut rng = crate::rng::seeded(23);
        for _ in 0..20 {
            let mut lists = Vec::new();
            for _ in 0..2 {
                let mut s = BTreeSet::new();
                while s.len() < 4 {
                    s.insert(crate::rng::below(&mut rng, 8) as u32);
                }
                lists.push(s);
            }
            let lists = DiscreteListAssignment::new(4, lists).unwrap();
            let out = multiplicative_uplift(&g, &f, &psi, &lists).unwrap();
            verify_ffold(&g, &f, &lists, &out).unwrap();
        }
    }

    #[test]
    fn bruteforce_list_colorability() {
        // K2 at f = 1/2, N = 2: true
        let g = complete(2);
        let f = DemandFn::uniform(2, Q::new(1, 2)).unwrap();
        assert!(list_colorable_bruteforce(&g, &f, 2, 10_000_000).unwrap());

        // K3 at f = 1/2, N = 2: identical lists defeat it
        let g = complete(3);
        let f = DemandFn::uniform(3, Q::new(1, 2)).unwrap();
        assert!(!list_colorable_bruteforce(&g, &f, 2, 10_000_000).unwrap());

        // single vertex: always true
        let g = Graph::empty(1);
        let f = DemandFn::uniform(1, Q::new(2, 3)).unwrap();
        assert!(list_colorable_bruteforce(&g, &f, 3, 10_000_000).unwrap());

        // cap enforced
        let g = complete(4);
        let f = DemandFn::uniform(4, Q::new(1, 4)).unwrap();
        assert!(matches!(
            list_colorable_bruteforce(&g, &f, 4, 10_000_000),
            Err(Error::InstanceTooLarge(_))
        ));
    }
}

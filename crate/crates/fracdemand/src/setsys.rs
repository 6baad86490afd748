//! Independent-set and clique oracles. Everything here is exact: the
//! max-weight search is branch-and-bound with rational bounds, and the
//! enumerations are exhaustive with hard caps.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Q;

pub const DEFAULT_ENUM_CAP: usize = 1_000_000;

/// Strictly increasing vertex indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut verts: Vec<usize>) -> Self {
        verts.sort_unstable();
        verts.dedup();
        VertexSet(verts)
    }

    pub fn from_bits(bits: &Bits) -> Self {
        VertexSet(bits.to_vec())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        VertexSet::new(v)
    }
}

impl std::fmt::Display for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Maximum-weight independent set, exact. Ties break toward the
/// lexicographically least vertex set. Weights must be nonnegative.
pub fn max_weight_independent_set(g: &Graph, weights: &[Q]) -> (VertexSet, Q) {
    assert_eq!(weights.len(), g.n());
    assert!(
        weights.iter().all(|w| !w.is_negative()),
        "weights must be nonnegative"
    );
    let n = g.n();
    let mut candidates = Bits::new(n);
    for v in 0..n {
        candidates.set(v);
    }
    let mut best = Bits::new(n);
    let mut best_weight = Q::zero();
    let mut current = Bits::new(n);
    branch_mwis(
        g,
        weights,
        candidates,
        &mut current,
        &Q::zero(),
        &mut best,
        &mut best_weight,
    );
    let set = VertexSet::from_bits(&best);
    (set, best_weight)
}

fn branch_mwis(
    g: &Graph,
    weights: &[Q],
    mut candidates: Bits,
    current: &mut Bits,
    current_weight: &Q,
    best: &mut Bits,
    best_weight: &mut Q,
) {
    // Vertices with no remaining candidate neighbor are always taken.
    let mut current_weight = current_weight.clone();
    let mut taken_here = Vec::new();
    loop {
        let mut isolated = None;
        for v in candidates.iter_set() {
            if !candidates.intersects(g.neighbor_row(v)) {
                isolated = Some(v);
                break;
            }
        }
        match isolated {
            Some(v) => {
                candidates.clear(v);
                current.set(v);
                taken_here.push(v);
                current_weight += &weights[v];
            }
            None => break,
        }
    }

    let remaining: Q = candidates.iter_set().map(|v| weights[v].clone()).sum();
    let bound = &current_weight + &remaining;
    let improves = bound > *best_weight
        || (bound == *best_weight && better_tie(current, best, best_weight, &current_weight));
    if !improves {
        for v in taken_here {
            current.clear(v);
        }
        return;
    }

    // Branch on a remaining vertex of maximum residual degree.
    let pick = candidates
        .iter_set()
        .max_by_key(|&v| (candidates.and(g.neighbor_row(v)).count(), usize::MAX - v));
    match pick {
        None => {
            if current_weight > *best_weight
                || (current_weight == *best_weight && lex_less(current, best))
            {
                *best = current.clone();
                *best_weight = current_weight.clone();
            }
        }
        Some(v) => {
            // include v
            let mut inc = candidates.clone();
            inc.clear(v);
            inc.and_not_assign(g.neighbor_row(v));
            current.set(v);
            let w = &current_weight + &weights[v];
            branch_mwis(g, weights, inc, current, &w, best, best_weight);
            current.clear(v);
            // exclude v
            let mut exc = candidates.clone();
            exc.clear(v);
            branch_mwis(g, weights, exc, current, &current_weight, best, best_weight);
        }
    }
    for v in taken_here {
        current.clear(v);
    }
}

fn better_tie(current: &Bits, best: &Bits, best_weight: &Q, current_weight: &Q) -> bool {
    // On equal bound keep exploring only if we could still improve the tie.
    current_weight == best_weight && !best.is_empty() && lex_less(current, best)
        || best.is_empty() && best_weight.is_zero()
}

fn lex_less(a: &Bits, b: &Bits) -> bool {
    let mut xa = a.iter_set();
    let mut xb = b.iter_set();
    loop {
        match (xa.next(), xb.next()) {
            (None, None) => return false,
            (None, Some(_)) => return true,
            (Some(_), None) => return false,
            (Some(x), Some(y)) => {
                if x != y {
                    return x < y;
                }
            }
        }
    }
}

/// All maximal independent sets, each exactly once, via pivoting recursion
/// on the complement. Errors once more than `cap` sets are produced.
pub fn enumerate_maximal_independent_sets(g: &Graph, cap: usize) -> Result<Vec<VertexSet>> {
    let n = g.n();
    // complement adjacency rows
    let mut rows = Vec::with_capacity(n);
    for v in 0..n {
        let mut row = Bits::new(n);
        for u in 0..n {
            if u != v && !g.is_edge(u, v) {
                row.set(u);
            }
        }
        rows.push(row);
    }
    let mut out = Vec::new();
    let mut r = Bits::new(n);
    let mut p = Bits::new(n);
    for v in 0..n {
        p.set(v);
    }
    let x = Bits::new(n);
    bron_kerbosch(&rows, &mut r, p, x, cap, &mut out)?;
    out.sort();
    Ok(out)
}

/// All maximal cliques of g, sorted.
pub fn maximal_cliques(g: &Graph, cap: usize) -> Result<Vec<VertexSet>> {
    let n = g.n();
    let rows: Vec<Bits> = (0..n).map(|v| g.neighbor_row(v).clone()).collect();
    let mut out = Vec::new();
    let mut r = Bits::new(n);
    let mut p = Bits::new(n);
    for v in 0..n {
        p.set(v);
    }
    let x = Bits::new(n);
    bron_kerbosch(&rows, &mut r, p, x, cap, &mut out)?;
    out.sort();
    Ok(out)
}

fn bron_kerbosch(
    rows: &[Bits],
    r: &mut Bits,
    p: Bits,
    x: Bits,
    cap: usize,
    out: &mut Vec<VertexSet>,
) -> Result<()> {
    if p.is_empty() && x.is_empty() {
        if out.len() >= cap {
            return Err(Error::CapExceeded { cap });
        }
        out.push(VertexSet::from_bits(r));
        return Ok(());
    }
    // pivot: vertex of P ∪ X with most neighbors in P
    let pivot = p
        .iter_set()
        .chain(x.iter_set())
        .max_by_key(|&v| p.and(&rows[v]).count())
        .expect("nonempty P or X");
    let ext = p.and_not(&rows[pivot]);
    let mut p = p;
    let mut x = x;
    for v in ext.iter_set() {
        r.set(v);
        let np = p.and(&rows[v]);
        let nx = x.and(&rows[v]);
        bron_kerbosch(rows, r, np, nx, cap, out)?;
        r.clear(v);
        p.clear(v);
        x.set(v);
    }
    Ok(())
}

/// All nonempty cliques (not only maximal), sorted; capped.
pub fn enumerate_cliques(g: &Graph, cap: usize) -> Result<Vec<VertexSet>> {
    let n = g.n();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn extend(
        g: &Graph,
        stack: &mut Vec<usize>,
        from: usize,
        cap: usize,
        out: &mut Vec<VertexSet>,
    ) -> Result<()> {
        for v in from..g.n() {
            if stack.iter().all(|&u| g.is_edge(u, v)) {
                stack.push(v);
                if out.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                out.push(VertexSet::new(stack.clone()));
                extend(g, stack, v + 1, cap, out)?;
                stack.pop();
            }
        }
        Ok(())
    }
    extend(g, &mut stack, 0, cap, &mut out)?;
    let _ = n;
    out.sort();
    Ok(out)
}

/// Clique number of the whole graph.
pub fn omega(g: &Graph) -> usize {
    if g.n() == 0 {
        return 0;
    }
    maximal_cliques(g, DEFAULT_ENUM_CAP)
        .expect("clique enumeration within cap")
        .iter()
        .map(|c| c.len())
        .max()
        .unwrap_or(0)
}

/// Local clique number: size of the largest clique inside the closed
/// neighborhood of v.
pub fn omega_local(g: &Graph, v: usize) -> usize {
    let mut verts: Vec<usize> = g.neighbors(v).collect();
    verts.push(v);
    verts.sort_unstable();
    let (h, _) = g.induced(&verts);
    omega(&h)
}

/// A vertex is simplicial iff its neighborhood is a clique, equivalently
/// omega(v) = d(v) + 1.
pub fn is_simplicial(g: &Graph, v: usize) -> bool {
    let nb: Vec<usize> = g.neighbors(v).collect();
    g.is_clique(&nb)
}

/// Max over cliques K of sum of weights, exact. Weights must be >= 0.
pub fn max_clique_weight(g: &Graph, weights: &[Q]) -> Q {
    let mut best = Q::zero();
    if g.n() == 0 {
        return best;
    }
    for c in maximal_cliques(g, DEFAULT_ENUM_CAP).expect("clique enumeration within cap") {
        let s: Q = c.iter().map(|v| weights[v].clone()).sum();
        if s > best {
            best = s;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{complete, cycle, petersen, star};
    use crate::rng;
    use proptest::prelude::*;

    fn unit_weights(n: usize) -> Vec<Q> {
        vec![Q::one(); n]
    }

    #[test]
    fn mwis_examples() {
        let (set, w) = max_weight_independent_set(&cycle(5), &unit_weights(5));
        assert_eq!(w, Q::from_int(2));
        assert!(cycle(5).is_independent(set.as_slice()));

        let (_, w) = max_weight_independent_set(&petersen(), &unit_weights(10));
        assert_eq!(w, Q::from_int(4));

        let weights: Vec<Q> = (1..=4).map(Q::from_int).collect();
        let (set, w) = max_weight_independent_set(&complete(4), &weights);
        assert_eq!(w, Q::from_int(4));
        assert_eq!(set.as_slice(), &[3]);
    }

    #[test]
    fn maximal_independent_sets_examples() {
        let sets = enumerate_maximal_independent_sets(&complete(3), 100).unwrap();
        assert_eq!(sets.len(), 3);
        assert!(sets.iter().all(|s| s.len() == 1));

        let sets = enumerate_maximal_independent_sets(&cycle(5), 100).unwrap();
        assert_eq!(sets.len(), 5);
        assert!(sets.iter().all(|s| s.len() == 2));

        let sets = enumerate_maximal_independent_sets(&Graph::empty(3), 100).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].as_slice(), &[0, 1, 2]);
    }

    #[test]
    fn cap_aborts_enumeration() {
        assert!(matches!(
            enumerate_maximal_independent_sets(&cycle(5), 3),
            Err(Error::CapExceeded { cap: 3 })
        ));
    }

    #[test]
    fn omega_and_simplicial() {
        let c5 = cycle(5);
        for v in c5.vertices() {
            assert_eq!(omega_local(&c5, v), 2);
            assert!(!is_simplicial(&c5, v));
        }
        let k4 = complete(4);
        for v in k4.vertices() {
            assert_eq!(omega_local(&k4, v), 4);
            assert!(is_simplicial(&k4, v));
        }
        let s = star(3);
        assert_eq!(omega_local(&s, 1), 2);
        assert!(is_simplicial(&s, 1));
        assert_eq!(omega_local(&s, 0), 2);
        assert!(!is_simplicial(&s, 0));
    }

    #[test]
    fn omega_bounds_hold() {
        let mut rng = rng::seeded(11);
        for _ in 0..40 {
            let n = rng::range_inclusive(&mut rng, 1, 9) as usize;
            let g = crate::family::gnp(n, &Q::new(1, 2), &mut rng).unwrap();
            for v in g.vertices() {
                let w = omega_local(&g, v);
                assert!(w >= 1 && w <= g.degree(v) + 1);
                assert_eq!(w == g.degree(v) + 1, is_simplicial(&g, v));
            }
        }
    }

    fn brute_force_mwis(g: &Graph, weights: &[Q]) -> Q {
        let n = g.n();
        let mut best = Q::zero();
        for mask in 0u32..(1 << n) {
            let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if g.is_independent(&verts) {
                let w: Q = verts.iter().map(|&v| weights[v].clone()).sum();
                if w > best {
                    best = w;
                }
            }
        }
        best
    }

    #[test]
    fn mwis_beats_random_greedy_completions() {
        let mut rng = rng::seeded(5);
        let g = petersen();
        let weights: Vec<Q> = (0..10)
            .map(|_| Q::new(rng::range_inclusive(&mut rng, 0, 6) as i64, 3))
            .collect();
        let (_, exact) = max_weight_independent_set(&g, &weights);
        for _ in 0..1000 {
            let mut order: Vec<usize> = (0..10).collect();
            rng::shuffle(&mut rng, &mut order);
            let mut picked: Vec<usize> = Vec::new();
            for v in order {
                if picked.iter().all(|&u| !g.is_edge(u, v)) {
                    picked.push(v);
                }
            }
            let w: Q = picked.iter().map(|&v| weights[v].clone()).sum();
            assert!(exact >= w);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn mwis_matches_brute_force(seed in 0u64..500, n in 1usize..9) {
            let mut rng = rng::seeded(seed);
            let g = crate::family::gnp(n, &Q::new(1, 2), &mut rng).unwrap();
            let weights: Vec<Q> = (0..n)
                .map(|_| Q::new(rng::range_inclusive(&mut rng, 0, 8) as i64, 4))
                .collect();
            let (set, w) = max_weight_independent_set(&g, &weights);
            prop_assert!(g.is_independent(set.as_slice()));
            let direct: Q = set.iter().map(|v| weights[v].clone()).sum();
            prop_assert_eq!(&w, &direct);
            prop_assert_eq!(w, brute_force_mwis(&g, &weights));
        }
    }
}

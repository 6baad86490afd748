//! Detectors and constructors for the structural configurations the
//! minimum-counterexample analysis revolves around: base cliques with their
//! apex/outside parameters, odd-cycle blowups and their exact colorability
//! characterization, dangerous degree-based 5-cycle blowups, turtles and
//! skew-turtles, and the explicit blowup families with their inequalities.

use serde::{Deserialize, Serialize};

use crate::demand::DemandFn;
use crate::error::{Error, Result};
use crate::family;
use crate::graph::Graph;
use crate::rational::Q;
use crate::setsys::{self, VertexSet};

/// A base clique (maximum-cardinality clique of minimum-degree vertices)
/// with its derived parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseCliqueReport {
    pub clique: VertexSet,
    /// Vertices outside the clique adjacent to all of it.
    pub apex: VertexSet,
    /// Vertices outside clique and apex with at least one clique neighbor.
    pub outside: VertexSet,
    /// Outside-neighbor count for each clique vertex, in clique order.
    pub ell_per_vertex: Vec<usize>,
    /// Max outside-neighbor count; the paper presumes uniformity, which
    /// holds in a minimal counterexample but not in general graphs.
    pub ell: usize,
    pub ell_uniform: bool,
    /// Max number of clique neighbors over outside vertices.
    pub max_attachment: usize,
}

/// All base cliques of g with full reports.
pub fn find_base_cliques(g: &Graph) -> Vec<BaseCliqueReport> {
    if g.n() == 0 {
        return Vec::new();
    }
    let delta = g.min_degree();
    let low: Vec<usize> = g.vertices().filter(|&v| g.degree(v) == delta).collect();
    let (induced, back) = g.induced(&low);
    let cliques = setsys::enumerate_cliques(&induced, setsys::DEFAULT_ENUM_CAP)
        .expect("clique enumeration of the minimum-degree set");
    let best = cliques.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut out = Vec::new();
    for c in cliques.into_iter().filter(|c| c.len() == best) {
        let verts: Vec<usize> = c.iter().map(|i| back[i]).collect();
        let clique = VertexSet::new(verts);
        let apex: Vec<usize> = g
            .vertices()
            .filter(|&u| !clique.contains(u) && clique.iter().all(|k| g.is_edge(u, k)))
            .collect();
        let apex = VertexSet::new(apex);
        let outside: Vec<usize> = g
            .vertices()
            .filter(|&u| {
                !clique.contains(u)
                    && !apex.contains(u)
                    && clique.iter().any(|k| g.is_edge(u, k))
            })
            .collect();
        let outside = VertexSet::new(outside);
        let ell_per_vertex: Vec<usize> = clique
            .iter()
            .map(|k| outside.iter().filter(|&u| g.is_edge(u, k)).count())
            .collect();
        let ell = ell_per_vertex.iter().copied().max().unwrap_or(0);
        let ell_uniform = ell_per_vertex.iter().all(|&x| x == ell);
        let max_attachment = outside
            .iter()
            .map(|u| clique.iter().filter(|&k| g.is_edge(u, k)).count())
            .max()
            .unwrap_or(0);
        out.push(BaseCliqueReport {
            clique,
            apex,
            outside,
            ell_per_vertex,
            ell,
            ell_uniform,
            max_attachment,
        });
    }
    out
}

/// Parts of an odd-cycle blowup: consecutive parts union to cliques.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleBlowupWitness {
    pub parts: Vec<Vec<usize>>,
}

impl CycleBlowupWitness {
    pub fn new(parts: Vec<Vec<usize>>) -> Self {
        CycleBlowupWitness {
            parts: parts
                .into_iter()
                .map(|mut p| {
                    p.sort_unstable();
                    p
                })
                .collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.parts.len() / 2
    }

    pub fn all_vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.parts.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    fn parts_disjoint(&self) -> bool {
        let all = self.all_vertices();
        all.windows(2).all(|w| w[0] != w[1])
    }
}

/// Validates that the witness describes a genuine blowup of an odd cycle
/// inside g: odd number of nonempty disjoint parts, consecutive unions are
/// cliques, non-consecutive parts are non-adjacent.
pub fn validate_cycle_blowup(g: &Graph, w: &CycleBlowupWitness) -> Result<()> {
    let m = w.parts.len();
    if m < 3 || m % 2 == 0 {
        return Err(Error::MalformedWitness(format!(
            "{m} parts do not form an odd cycle"
        )));
    }
    if w.parts.iter().any(|p| p.is_empty()) {
        return Err(Error::MalformedWitness("empty part".into()));
    }
    if !w.parts_disjoint() {
        return Err(Error::MalformedWitness("parts overlap".into()));
    }
    for p in &w.parts {
        if p.iter().any(|&v| v >= g.n()) {
            return Err(Error::MalformedWitness("vertex out of range".into()));
        }
    }
    for i in 0..m {
        let mut both: Vec<usize> = w.parts[i].clone();
        both.extend(&w.parts[(i + 1) % m]);
        if !g.is_clique(&both) {
            return Err(Error::MalformedWitness(format!(
                "parts {i} and {} do not union to a clique",
                (i + 1) % m
            )));
        }
    }
    for i in 0..m {
        for j in i + 2..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            for &u in &w.parts[i] {
                for &v in &w.parts[j] {
                    if g.is_edge(u, v) {
                        return Err(Error::MalformedWitness(format!(
                            "non-consecutive parts {i},{j} are adjacent"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Exact colorability characterization for odd-cycle blowups: an f-coloring
/// of the blowup exists iff the total demand is at most k and every clique
/// sums to at most 1.
pub fn odd_cycle_blowup_colorable(
    g: &Graph,
    w: &CycleBlowupWitness,
    f: &DemandFn,
) -> Result<bool> {
    validate_cycle_blowup(g, w)?;
    assert_eq!(f.len(), g.n());
    let verts = w.all_vertices();
    let total: Q = verts.iter().map(|&v| f.get(v).clone()).sum();
    if total > Q::from_int(w.k() as i64) {
        return Ok(false);
    }
    let (h, back) = g.induced(&verts);
    let weights: Vec<Q> = back.iter().map(|&v| f.get(v).clone()).collect();
    Ok(setsys::max_clique_weight(&h, &weights) <= Q::one())
}

/// Validates every bullet of the degree-based 5-cycle blowup definition and
/// returns the danger sum over the last three parts.
pub fn validate_dangerous_blowup(
    g: &Graph,
    w: &CycleBlowupWitness,
    f: &DemandFn,
    delta: usize,
) -> Result<Q> {
    if w.parts.len() != 5 {
        return Err(Error::MalformedWitness("need exactly five parts".into()));
    }
    if !w.parts_disjoint() {
        return Err(Error::MalformedWitness("parts overlap".into()));
    }
    for i in 0..5 {
        let mut both: Vec<usize> = w.parts[i].clone();
        both.extend(&w.parts[(i + 1) % 5]);
        if both.iter().any(|&v| v >= g.n()) {
            return Err(Error::MalformedWitness("vertex out of range".into()));
        }
        if !g.is_clique(&both) {
            return Err(Error::MalformedWitness(format!(
                "parts {i} and {} do not union to a clique",
                (i + 1) % 5
            )));
        }
    }
    for &v in w.parts[0].iter().chain(&w.parts[1]) {
        if g.degree(v) != delta {
            return Err(Error::MalformedWitness(format!(
                "vertex {v} in the first two parts has degree {} != {delta}",
                g.degree(v)
            )));
        }
    }
    for &v in w.parts[2].iter().chain(&w.parts[4]) {
        if g.degree(v) < delta + 1 {
            return Err(Error::MalformedWitness(format!(
                "vertex {v} in parts 2/4 has degree {} <= {delta}",
                g.degree(v)
            )));
        }
    }
    if w.parts[1].len() != 1 || w.parts[4].len() != 1 {
        return Err(Error::MalformedWitness(
            "parts 1 and 4 must be singletons".into(),
        ));
    }
    if w.parts[2].len() > w.parts[0].len() {
        return Err(Error::MalformedWitness(
            "part 2 may not outgrow part 0".into(),
        ));
    }
    let danger: Q = w.parts[2]
        .iter()
        .chain(&w.parts[3])
        .chain(&w.parts[4])
        .map(|&v| f.get(v).clone())
        .sum();
    Ok(danger)
}

/// Finds dangerous degree-based 5-cycle blowups by seeding (u, v, K) from
/// the base cliques and growing the third part greedily over common
/// neighbors, largest demand first. A heuristic detector: every returned
/// witness is definition-valid and dangerous, but the enumeration is capped.
pub fn detect_dangerous_blowup(
    g: &Graph,
    f: &DemandFn,
    delta: usize,
    candidate_cap: usize,
) -> Result<Vec<CycleBlowupWitness>> {
    assert_eq!(f.len(), g.n());
    let mut found = std::collections::BTreeSet::new();
    let mut candidates = 0usize;
    for report in find_base_cliques(g) {
        for u in report.outside.iter() {
            if g.degree(u) < delta + 1 {
                continue;
            }
            let v0: Vec<usize> = report.clique.iter().filter(|&k| g.is_edge(u, k)).collect();
            if v0.is_empty() || v0.iter().any(|&x| g.degree(x) != delta) {
                continue;
            }
            for v in report.clique.iter().filter(|&v| !g.is_edge(u, v)) {
                candidates += 1;
                if candidates > candidate_cap {
                    return Err(Error::CapExceeded { cap: candidate_cap });
                }
                if g.degree(v) != delta {
                    continue;
                }
                let v2: Vec<usize> = report.outside.iter().filter(|&w| g.is_edge(v, w)).collect();
                if v2.len() > v0.len()
                    || v2.iter().any(|&w| g.degree(w) < delta + 1)
                    || v2.contains(&u)
                {
                    continue;
                }
                let mut v1v2 = vec![v];
                v1v2.extend(&v2);
                if !g.is_clique(&v1v2) {
                    continue;
                }
                // grow part 3 greedily over common neighbors of part 2 and u
                let mut used: Vec<usize> = v0.clone();
                used.push(v);
                used.push(u);
                used.extend(&v2);
                let mut pool: Vec<usize> = g
                    .vertices()
                    .filter(|&w| {
                        !used.contains(&w)
                            && g.is_edge(w, u)
                            && v2.iter().all(|&x| g.is_edge(w, x))
                    })
                    .collect();
                pool.sort_by(|&a, &b| {
                    f.get(b).cmp(f.get(a)).then(a.cmp(&b))
                });
                let mut v3: Vec<usize> = Vec::new();
                for w in pool {
                    if v3.iter().all(|&x| g.is_edge(w, x)) {
                        v3.push(w);
                    }
                }
                let witness = CycleBlowupWitness::new(vec![
                    v0.clone(),
                    vec![v],
                    v2.clone(),
                    v3,
                    vec![u],
                ]);
                match validate_dangerous_blowup(g, &witness, f, delta) {
                    Ok(danger) if danger > Q::one() => {
                        found.insert(witness);
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TurtleClass {
    Turtle,
    SkewTurtle,
    Neither,
}

/// Classifies a 5-part witness via its essential restriction. X is
/// recomputed from degrees inside the last three parts; when several
/// candidates for the non-adjacent part-2 vertex qualify, all are tried.
pub fn classify_turtle(g: &Graph, w: &CycleBlowupWitness) -> Result<TurtleClass> {
    if w.parts.len() != 5 {
        return Err(Error::MalformedWitness("need exactly five parts".into()));
    }
    if g.min_degree() != 2 {
        return Err(Error::HypothesisFailed(
            "turtle classification requires minimum degree 2".into(),
        ));
    }
    if w.parts[4].len() != 1 {
        return Err(Error::MalformedWitness("part 4 must be a singleton".into()));
    }
    let u = w.parts[4][0];
    let tail: Vec<usize> = w.parts[2]
        .iter()
        .chain(&w.parts[3])
        .chain(&w.parts[4])
        .copied()
        .collect();
    let x: Vec<usize> = tail
        .iter()
        .copied()
        .filter(|&v| g.degree(v) == tail.len() - 1)
        .collect();
    if x.len() != 2 {
        return Err(Error::HypothesisFailed(format!(
            "essential restriction has |X| = {}, need 2",
            x.len()
        )));
    }
    let u_primes: Vec<usize> = w.parts[2]
        .iter()
        .copied()
        .filter(|&w2| !g.is_edge(u, w2))
        .collect();
    if u_primes.is_empty() {
        return Err(Error::HypothesisFailed(
            "no part-2 vertex is non-adjacent to the part-4 vertex".into(),
        ));
    }
    let core: Vec<usize> = w.parts[0].iter().chain(&w.parts[1]).copied().collect();
    let has_low_outside_neighbor = |v: usize| {
        g.neighbors(v)
            .any(|y| g.degree(y) == 2 && !core.contains(&y))
    };
    let mut skew = false;
    for &up in &u_primes {
        if g.degree(u) == 4
            && g.degree(up) == 4
            && has_low_outside_neighbor(u)
            && has_low_outside_neighbor(up)
        {
            return Ok(TurtleClass::Turtle);
        }
        if g.degree(u) == 3 && g.degree(up) == 3 {
            skew = true;
        }
    }
    if skew {
        Ok(TurtleClass::SkewTurtle)
    } else {
        Ok(TurtleClass::Neither)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropositionCycle {
    Five,
    Seven,
}

/// The explicit blowup families with their inequalities: two (resp. three)
/// pairwise non-adjacent vertices of an odd cycle blown up to cliques, with
/// a rational epsilon chosen per the stated inequality; `verified` is the
/// exact check that the reciprocal degree sum exceeds 2 (resp. 3).
pub fn proposition_blowup(
    delta: usize,
    which: PropositionCycle,
) -> Result<(Graph, Q, bool)> {
    if delta < 2 {
        return Err(Error::InvalidParams {
            family: "proposition_blowup".into(),
            reason: "delta >= 2 required".into(),
        });
    }
    let d = delta as i64;
    let (graph, eps, threshold) = match which {
        PropositionCycle::Five => {
            // eps - 1/4 < (1/2)/(delta + eps) holds for eps = 1/4 + 1/(4 delta)
            let eps = Q::new(1, 4) + Q::new(1, 4 * d);
            (
                family::prop_five_cycle_blowup(delta)?.graph,
                eps,
                Q::from_int(2),
            )
        }
        PropositionCycle::Seven => {
            // 3 eps < (2 + eps)/(2 delta - 2 + eps) holds for eps = 1/(6 delta)
            let eps = Q::new(1, 6 * d);
            (
                family::prop_seven_cycle_blowup(delta)?.graph,
                eps,
                Q::from_int(3),
            )
        }
    };
    let sum: Q = graph
        .vertices()
        .map(|v| Q::one() / (Q::from_int(graph.degree(v) as i64) + eps.clone()))
        .sum();
    let verified = sum > threshold;
    Ok((graph, eps, verified))
}

/// The independence lower bound sum 1/(d(v)+1/2) that simplicial-free
/// graphs must meet.
pub fn independence_bound_half(g: &Graph) -> Q {
    g.vertices()
        .map(|v| Q::one() / (Q::from_int(g.degree(v) as i64) + Q::new(1, 2)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demand::brooks_demand;
    use crate::family::{complete, cycle, star};
    use crate::graph::{blowup, BlowupSpec};

    /// Eight-vertex skew-turtle: pentagon v'-v-u'-{w1,w2}-u with u',u of
    /// degree 3 and a pendant path w1-w3-w4-w2 keeping minimum degree 2.
    fn skew_turtle_graph() -> (Graph, CycleBlowupWitness) {
        let g = Graph::from_edges(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (2, 4),
                (3, 4),
                (3, 5),
                (4, 5),
                (5, 0),
                (3, 6),
                (4, 7),
                (6, 7),
            ],
        )
        .unwrap();
        let w = CycleBlowupWitness::new(vec![vec![0], vec![1], vec![2], vec![3, 4], vec![5]]);
        (g, w)
    }

    /// Eight-vertex turtle: u and u' have degree 4 with degree-two
    /// neighbors t1, t2 outside the first two parts.
    fn turtle_graph() -> (Graph, CycleBlowupWitness) {
        let g = Graph::from_edges(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (2, 4),
                (3, 4),
                (3, 5),
                (4, 5),
                (5, 0),
                (5, 6),
                (2, 7),
                (6, 7),
            ],
        )
        .unwrap();
        let w = CycleBlowupWitness::new(vec![vec![0], vec![1], vec![2], vec![3, 4], vec![5]]);
        (g, w)
    }

    #[test]
    fn base_cliques_examples() {
        // K4: the clique is everything, no apex, no outside
        let reports = find_base_cliques(&complete(4));
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].clique.len(), 4);
        assert!(reports[0].apex.is_empty());
        assert!(reports[0].outside.is_empty());

        // C5: every edge is a base clique
        let reports = find_base_cliques(&cycle(5));
        assert_eq!(reports.len(), 5);
        assert!(reports.iter().all(|r| r.clique.len() == 2));
        for r in &reports {
            assert_eq!(r.ell, 1);
            assert!(r.ell_uniform);
            assert_eq!(r.max_attachment, 1);
        }

        // star: leaves are min-degree but pairwise non-adjacent
        let reports = find_base_cliques(&star(3));
        assert_eq!(reports.len(), 3);
        assert!(reports.iter().all(|r| r.clique.len() == 1));
        // the center apexes each leaf
        assert!(reports.iter().all(|r| r.apex.as_slice() == [0]));
    }

    #[test]
    fn odd_cycle_blowup_characterization() {
        let g = cycle(5);
        let w = CycleBlowupWitness::new((0..5).map(|i| vec![i]).collect());
        let f = DemandFn::uniform(5, Q::new(2, 5)).unwrap();
        assert!(odd_cycle_blowup_colorable(&g, &w, &f).unwrap());
        let f = DemandFn::uniform(5, Q::new(1, 2)).unwrap();
        assert!(!odd_cycle_blowup_colorable(&g, &w, &f).unwrap());

        // C5 blown at two non-adjacent vertices, f = 1/3: sum 7/3 > 2
        let b = blowup(&BlowupSpec {
            base: cycle(5),
            sizes: vec![2, 1, 2, 1, 1],
        })
        .unwrap();
        let mut parts: Vec<Vec<usize>> = vec![Vec::new(); 5];
        for (w, &orig) in b.origin.iter().enumerate() {
            parts[orig].push(w);
        }
        let w = CycleBlowupWitness::new(parts);
        let f = DemandFn::uniform(7, Q::new(1, 3)).unwrap();
        assert!(!odd_cycle_blowup_colorable(&b.graph, &w, &f).unwrap());

        // malformed: a missing edge between consecutive parts
        let g = crate::family::path(5);
        let w = CycleBlowupWitness::new((0..5).map(|i| vec![i]).collect());
        let f = DemandFn::uniform(5, Q::new(1, 3)).unwrap();
        assert!(matches!(
            odd_cycle_blowup_colorable(&g, &w, &f),
            Err(Error::MalformedWitness(_))
        ));
    }

    #[test]
    fn plain_c5_has_no_dangerous_blowup() {
        let g = cycle(5);
        let f = DemandFn::uniform(5, Q::new(2, 5)).unwrap();
        let found = detect_dangerous_blowup(&g, &f, 2, 10_000).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn skew_turtle_is_found_and_classified() {
        let (g, expected) = skew_turtle_graph();
        assert_eq!(g.min_degree(), 2);
        let f = brooks_demand(&g, &Q::new(1, 2)).unwrap();
        let found = detect_dangerous_blowup(&g, &f, 2, 10_000).unwrap();
        assert!(found.contains(&expected), "witness not found: {found:?}");
        for w in &found {
            let danger = validate_dangerous_blowup(&g, w, &f, 2).unwrap();
            assert!(danger > Q::one());
        }
        assert_eq!(
            classify_turtle(&g, &expected).unwrap(),
            TurtleClass::SkewTurtle
        );
    }

    #[test]
    fn turtle_is_classified() {
        let (g, w) = turtle_graph();
        assert_eq!(g.min_degree(), 2);
        let f = brooks_demand(&g, &Q::new(1, 2)).unwrap();
        let danger = validate_dangerous_blowup(&g, &w, &f, 2).unwrap();
        assert!(danger > Q::one());
        assert_eq!(classify_turtle(&g, &w).unwrap(), TurtleClass::Turtle);
        // the detector finds it too
        let found = detect_dangerous_blowup(&g, &f, 2, 10_000).unwrap();
        assert!(found.contains(&w));
    }

    #[test]
    fn mixed_degrees_are_neither() {
        // as the skew-turtle but with d(u') = 4, d(u) = 3 and the degree-3
        // slot in part 3 moved so that |X| stays 2
        let g = Graph::from_edges(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (2, 4),
                (3, 4),
                (3, 5),
                (4, 5),
                (5, 0),
                (2, 6),
                (4, 7),
                (6, 7),
            ],
        )
        .unwrap();
        let w = CycleBlowupWitness::new(vec![vec![0], vec![1], vec![2], vec![3, 4], vec![5]]);
        assert_eq!(classify_turtle(&g, &w).unwrap(), TurtleClass::Neither);
    }

    #[test]
    fn proposition_blowups_verify() {
        for delta in 2..=12 {
            let (g, eps, ok) = proposition_blowup(delta, PropositionCycle::Five).unwrap();
            assert!(ok, "five-cycle inequality fails at delta={delta}");
            assert!(eps > Q::new(1, 4));
            assert!(g.min_degree() >= delta);
            let (g, _, ok) = proposition_blowup(delta, PropositionCycle::Seven).unwrap();
            assert!(ok, "seven-cycle inequality fails at delta={delta}");
            assert!(g.min_degree() >= delta);
        }
        // delta = 2 degenerates to the plain cycles
        let (g, _, ok) = proposition_blowup(2, PropositionCycle::Five).unwrap();
        assert_eq!(g.n(), 5);
        assert!(ok);
    }
}

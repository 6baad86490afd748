//! The decision core: exact membership of a demand vector in the stable set
//! polytope, with self-verifying certificates on both sides.
//!
//! A yes comes with a fractional coloring (per-vertex interval sets), a no
//! comes with a nonnegative weight function that strictly separates: the
//! weighted demand total exceeds the exact maximum weight of any independent
//! set. Both certificates are re-checked against first principles before
//! they are returned.

use num_bigint::BigInt;
use rand_core::RngCore;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coloring_search::{chromatic_at_most, subset_coloring_search};
use crate::demand::{DemandFile, DemandFn, WeightFn};
use crate::error::{Error, Result};
use crate::graph::{blowup, BlowupSpec, Graph, GraphFile};
use crate::interval::IntervalSet;
use crate::lp;
use crate::rational::{denominator_lcm, Q};
use crate::rng;
use crate::setsys::{self, VertexSet};

/// Per-vertex interval sets; adjacent vertices get disjoint sets.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FractionalColoring {
    pub assignment: Vec<IntervalSet>,
}

impl FractionalColoring {
    pub fn measure(&self, v: usize) -> Q {
        self.assignment[v].measure()
    }
}

/// Discrete (f,N)-coloring: subsets of {1..N}, 1-indexed slots.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SetColoring {
    pub n: u64,
    pub assignment: Vec<Vec<u64>>,
}

/// Feasible covering-LP solution presented as reusable columns.
#[derive(Clone, Debug)]
pub struct LPSolution {
    pub columns: Vec<(VertexSet, Q)>,
    pub objective: Q,
}

#[derive(Clone, Debug)]
pub struct ColorabilityVerdict {
    pub colorable: bool,
    pub primal: Option<FractionalColoring>,
    pub dual: Option<WeightFn>,
    pub transcript_hash: String,
}

/// Certificate document; the hash covers graph, demand, and both
/// certificate sides, so any edit to a bundle is detectable.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictFile {
    pub decision: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primal: Option<Vec<IntervalSet>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual: Option<Vec<Q>>,
    pub transcript_hash: String,
}

impl VerdictFile {
    pub fn from_verdict(v: &ColorabilityVerdict) -> Self {
        VerdictFile {
            decision: if v.colorable { "yes" } else { "no" }.into(),
            primal: v.primal.as_ref().map(|p| p.assignment.clone()),
            dual: v.dual.as_ref().map(|d| d.values.clone()),
            transcript_hash: v.transcript_hash.clone(),
        }
    }
}

#[derive(Serialize)]
struct Transcript<'a> {
    graph: &'a GraphFile,
    demand: &'a DemandFile,
    decision: &'a str,
    primal: &'a Option<Vec<IntervalSet>>,
    dual: &'a Option<Vec<Q>>,
}

pub fn transcript_hash(
    g: &Graph,
    f: &DemandFn,
    decision: &str,
    primal: &Option<Vec<IntervalSet>>,
    dual: &Option<Vec<Q>>,
) -> String {
    let graph = GraphFile::from_graph(g);
    let demand = DemandFile::from_demand(f);
    let t = Transcript {
        graph: &graph,
        demand: &demand,
        decision,
        primal,
        dual,
    };
    let bytes = serde_json::to_vec(&t).expect("transcript serialization");
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    format!("{:x}", hasher.finalize())
}

/// Checks a fractional coloring against f: interval sets live in [0,1),
/// adjacent sets are disjoint, and every vertex receives its demand.
pub fn verify_fcoloring(g: &Graph, f: &DemandFn, phi: &FractionalColoring) -> Result<()> {
    if phi.assignment.len() != g.n() {
        return Err(Error::InvalidColoring(format!(
            "coloring covers {} of {} vertices",
            phi.assignment.len(),
            g.n()
        )));
    }
    for v in g.vertices() {
        if phi.measure(v) < *f.get(v) {
            return Err(Error::InvalidColoring(format!(
                "vertex {v} receives {} < demand {}",
                phi.measure(v),
                f.get(v)
            )));
        }
    }
    for (u, v) in g.edges() {
        if !phi.assignment[u].is_disjoint_from(&phi.assignment[v]) {
            return Err(Error::InvalidColoring(format!(
                "adjacent vertices {u},{v} share color"
            )));
        }
    }
    Ok(())
}

pub fn verify_set_coloring(g: &Graph, f: &DemandFn, psi: &SetColoring) -> Result<()> {
    if psi.assignment.len() != g.n() {
        return Err(Error::InvalidColoring("wrong domain".into()));
    }
    let n_big = BigInt::from(psi.n);
    for v in g.vertices() {
        let need = f.get(v) * &Q::from_bigint(n_big.clone());
        if Q::from_int(psi.assignment[v].len() as i64) < need {
            return Err(Error::InvalidColoring(format!(
                "vertex {v} has {} slots, needs {}",
                psi.assignment[v].len(),
                need
            )));
        }
        if psi.assignment[v].iter().any(|&s| s == 0 || s > psi.n) {
            return Err(Error::InvalidColoring(format!("slot out of range at {v}")));
        }
    }
    for (u, v) in g.edges() {
        let a: std::collections::BTreeSet<u64> = psi.assignment[u].iter().copied().collect();
        if psi.assignment[v].iter().any(|s| a.contains(s)) {
            return Err(Error::InvalidColoring(format!(
                "adjacent vertices {u},{v} share a slot"
            )));
        }
    }
    Ok(())
}

/// Decides f-colorability with a verified certificate either way.
pub fn is_fcolorable(g: &Graph, f: &DemandFn, cap: usize) -> Result<ColorabilityVerdict> {
    assert_eq!(f.len(), g.n());
    let sol = lp::solve_covering(g, f, cap)?;
    if sol.objective <= Q::one() {
        let lp_solution = LPSolution {
            columns: sol.columns,
            objective: sol.objective,
        };
        let phi = extract_fractional_coloring(&lp_solution, f)?;
        verify_fcoloring(g, f, &phi)?;
        let primal = Some(phi.assignment.clone());
        let hash = transcript_hash(g, f, "yes", &primal, &None);
        Ok(ColorabilityVerdict {
            colorable: true,
            primal: Some(phi),
            dual: None,
            transcript_hash: hash,
        })
    } else {
        // Strong duality: the optimal dual prices witness non-membership.
        let dual_value: Q = g.vertices().map(|v| &sol.duals[v] * f.get(v)).sum();
        if dual_value != sol.objective {
            return Err(Error::Defect(format!(
                "dual value {dual_value} differs from optimum {}",
                sol.objective
            )));
        }
        let scale = Q::from_bigint(denominator_lcm(sol.duals.iter()));
        let w: Vec<Q> = sol.duals.iter().map(|y| y * &scale).collect();
        let weights = WeightFn::new(w.clone())?;
        // Independent re-verification through the branch-and-bound oracle.
        let (_, best) = setsys::max_weight_independent_set(g, &weights.values);
        let demanded: Q = g.vertices().map(|v| &weights.values[v] * f.get(v)).sum();
        if demanded <= best {
            return Err(Error::Defect(
                "dual certificate fails exact separation check".into(),
            ));
        }
        let dual = Some(w);
        let hash = transcript_hash(g, f, "no", &None, &dual);
        Ok(ColorabilityVerdict {
            colorable: false,
            primal: None,
            dual: Some(weights),
            transcript_hash: hash,
        })
    }
}

/// Exact fractional chromatic number: the optimum of the unit-demand cover.
pub fn chi_f(g: &Graph, cap: usize) -> Result<Q> {
    if g.n() == 0 {
        return Err(Error::InvalidGraph("chi_f of the empty graph".into()));
    }
    let f = DemandFn::uniform(g.n(), Q::one())?;
    Ok(lp::solve_covering(g, &f, cap)?.objective)
}

/// Lays the LP columns out on [0,1) in lexicographic column order; each
/// vertex receives the union of the intervals of the columns containing it.
pub fn extract_fractional_coloring(sol: &LPSolution, f: &DemandFn) -> Result<FractionalColoring> {
    if sol.objective > Q::one() {
        return Err(Error::LpInfeasible);
    }
    let mut columns = sol.columns.clone();
    columns.sort_by(|a, b| a.0.cmp(&b.0));
    for v in 0..f.len() {
        let cover: Q = columns
            .iter()
            .filter(|(c, _)| c.contains(v))
            .map(|(_, w)| w.clone())
            .sum();
        if cover < *f.get(v) {
            return Err(Error::LpInfeasible);
        }
    }
    let mut assignment = vec![Vec::new(); f.len()];
    let mut offset = Q::zero();
    for (set, weight) in &columns {
        if !weight.is_positive() {
            continue;
        }
        let end = &offset + weight;
        for v in set.iter() {
            if v < assignment.len() {
                assignment[v].push((offset.clone(), end.clone()));
            }
        }
        offset = end;
    }
    Ok(FractionalColoring {
        assignment: assignment
            .into_iter()
            .map(IntervalSet::from_intervals)
            .collect(),
    })
}

/// Discretizes a rational-endpoint fractional coloring into an
/// (f,N)-coloring with N the least common slot refinement.
pub fn to_set_coloring(phi: &FractionalColoring, f: &DemandFn) -> Result<SetColoring> {
    let mut endpoints: Vec<Q> = Vec::new();
    for set in &phi.assignment {
        for (a, b) in set.parts() {
            endpoints.push(a.clone());
            endpoints.push(b.clone());
        }
    }
    let n_big = denominator_lcm(endpoints.iter().chain(f.values.iter()));
    let n: u64 = (&n_big)
        .try_into()
        .map_err(|_| Error::InstanceTooLarge("set coloring denominator exceeds u64".into()))?;
    let mut assignment = Vec::with_capacity(phi.assignment.len());
    let nq = Q::from_bigint(n_big);
    for set in &phi.assignment {
        let mut slots = Vec::new();
        for (a, b) in set.parts() {
            let lo = (a * &nq)
                .scaled_usize(1)
                .ok_or_else(|| Error::Defect("non-integral slot boundary".into()))?;
            let hi = (b * &nq)
                .scaled_usize(1)
                .ok_or_else(|| Error::Defect("non-integral slot boundary".into()))?;
            for s in lo..hi {
                slots.push(s as u64 + 1);
            }
        }
        slots.sort_unstable();
        assignment.push(slots);
    }
    Ok(SetColoring { n, assignment })
}

/// For colorable (G,f) and nonnegative w, returns an independent set whose
/// weight is at least the weighted demand total. If no such set exists the
/// instance was not colorable and that is reported as the error.
pub fn dual_independent_set(g: &Graph, f: &DemandFn, w: &WeightFn) -> Result<VertexSet> {
    assert_eq!(w.values.len(), g.n());
    let (set, weight) = setsys::max_weight_independent_set(g, &w.values);
    let demanded: Q = g.vertices().map(|v| &w.values[v] * f.get(v)).sum();
    if weight >= demanded {
        Ok(set)
    } else {
        Err(Error::NotColorable(format!(
            "every independent set has weight < {demanded}; (G,f) is not colorable"
        )))
    }
}

/// Remark-style blowup oracle: replace each vertex with a clique of size
/// N*f(v) and decide chi <= N by explicit proper-coloring search.
pub fn blowup_chromatic_oracle(g: &Graph, f: &DemandFn, n: u64, node_cap: usize) -> Result<bool> {
    assert_eq!(f.len(), g.n());
    let mut sizes = Vec::with_capacity(g.n());
    for v in g.vertices() {
        let s = f.get(v).scaled_usize(n).ok_or_else(|| {
            Error::InvalidDemand(format!("{n} is not a common denominator of f"))
        })?;
        sizes.push(s);
    }
    let total: usize = sizes.iter().sum();
    if total > 4000 {
        return Err(Error::InstanceTooLarge(format!(
            "blowup has {total} vertices"
        )));
    }
    let b = blowup(&BlowupSpec {
        base: g.clone(),
        sizes,
    })?;
    let k: usize = n
        .try_into()
        .map_err(|_| Error::InstanceTooLarge("color count exceeds usize".into()))?;
    chromatic_at_most(&b.graph, k, node_cap)
}

/// Third oracle: direct exhaustive search for an (f,N)-coloring on the base
/// graph (subsets of {1..N} per vertex).
pub fn set_coloring_bruteforce(
    g: &Graph,
    f: &DemandFn,
    n: u64,
    node_cap: usize,
) -> Result<Option<SetColoring>> {
    let mut sizes = Vec::with_capacity(g.n());
    for v in g.vertices() {
        let s = f.get(v).scaled_usize(n).ok_or_else(|| {
            Error::InvalidDemand(format!("{n} is not a common denominator of f"))
        })?;
        sizes.push(s);
    }
    let universe: std::collections::BTreeSet<u32> = (0..n as u32).collect();
    let lists = vec![universe; g.n()];
    let found = subset_coloring_search(g, &sizes, &lists, node_cap)?;
    Ok(found.map(|sets| SetColoring {
        n,
        assignment: sets
            .into_iter()
            .map(|s| s.into_iter().map(|c| c as u64 + 1).collect())
            .collect(),
    }))
}

/// Empirical inclusion frequencies of the random-permutation greedy
/// independent set: v joins iff it precedes all its neighbors.
pub struct GreedySampleReport {
    pub trials: u64,
    pub hits: Vec<u64>,
}

impl GreedySampleReport {
    pub fn frequency(&self, v: usize) -> Q {
        Q::new(self.hits[v] as i64, self.trials as i64)
    }
}

pub fn sample_greedy_independent_set(g: &Graph, trials: u64, seed: u64) -> GreedySampleReport {
    assert!(trials >= 1);
    let n = g.n();
    let mut rng = rng::seeded(seed);
    let mut hits = vec![0u64; n];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut position = vec![0usize; n];
    for _ in 0..trials {
        rng::shuffle(&mut rng, &mut perm);
        for (pos, &v) in perm.iter().enumerate() {
            position[v] = pos;
        }
        for v in 0..n {
            if g.neighbors(v).all(|u| position[v] < position[u]) {
                hits[v] += 1;
            }
        }
    }
    let _ = rng.next_u64();
    GreedySampleReport { trials, hits }
}

/// Blowup clique bound for chi-bounded demands f(v) = 1/(c*omega(v)):
/// the blowup with sizes N*f(v) has clique number at most N/c.
pub fn blowup_clique_bound(g: &Graph, c: &Q, n: u64) -> Result<bool> {
    let f = crate::demand::chi_bounded_demand(g, c)?;
    let mut sizes = Vec::with_capacity(g.n());
    for v in g.vertices() {
        let s = f.get(v).scaled_usize(n).ok_or_else(|| {
            Error::InvalidDemand(format!("{n} is not a common denominator of 1/(c*omega)"))
        })?;
        sizes.push(s);
    }
    let b = blowup(&BlowupSpec {
        base: g.clone(),
        sizes,
    })?;
    let omega = setsys::omega(&b.graph);
    let bound = Q::from_int(n as i64) / c.clone();
    Ok(Q::from_int(omega as i64) <= bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{complete, cycle, petersen};
    use crate::setsys::DEFAULT_ENUM_CAP;

    const CAP: usize = DEFAULT_ENUM_CAP;
    const NODES: usize = crate::coloring_search::DEFAULT_NODE_CAP;

    #[test]
    fn c5_tightness() {
        let g = cycle(5);
        let f = DemandFn::uniform(5, Q::new(2, 5)).unwrap();
        let v = is_fcolorable(&g, &f, CAP).unwrap();
        assert!(v.colorable);
        verify_fcoloring(&g, &f, v.primal.as_ref().unwrap()).unwrap();

        let f = DemandFn::uniform(5, Q::new(2, 5) + Q::new(1, 100)).unwrap();
        let v = is_fcolorable(&g, &f, CAP).unwrap();
        assert!(!v.colorable);
        let w = v.dual.unwrap();
        // the scaled dual is the all-ones weight here
        assert!(w.values.iter().all(|x| *x == Q::one()));
    }

    #[test]
    fn k3_thirds() {
        let g = complete(3);
        let f = DemandFn::uniform(3, Q::new(1, 3)).unwrap();
        let v = is_fcolorable(&g, &f, CAP).unwrap();
        assert!(v.colorable);
    }

    #[test]
    fn chi_f_known_values() {
        for k in 1..=5usize {
            let g = cycle(2 * k + 1);
            assert_eq!(
                chi_f(&g, CAP).unwrap(),
                Q::from_int(2) + Q::new(1, k as i64)
            );
        }
        for n in 2..=6usize {
            assert_eq!(chi_f(&complete(n), CAP).unwrap(), Q::from_int(n as i64));
        }
        assert_eq!(chi_f(&petersen(), CAP).unwrap(), Q::new(5, 2));
    }

    #[test]
    fn extraction_examples() {
        // K2 with columns {0},{1} at weight 1/2 each
        let sol = LPSolution {
            columns: vec![
                (VertexSet::new(vec![0]), Q::new(1, 2)),
                (VertexSet::new(vec![1]), Q::new(1, 2)),
            ],
            objective: Q::one(),
        };
        let f = DemandFn::uniform(2, Q::new(1, 2)).unwrap();
        let phi = extract_fractional_coloring(&sol, &f).unwrap();
        assert_eq!(
            phi.assignment[0],
            IntervalSet::interval(Q::zero(), Q::new(1, 2))
        );
        assert_eq!(
            phi.assignment[1],
            IntervalSet::interval(Q::new(1, 2), Q::one())
        );

        let psi = to_set_coloring(&phi, &f).unwrap();
        assert_eq!(psi.n, 2);
        assert_eq!(psi.assignment, vec![vec![1], vec![2]]);

        // single column covering the empty graph
        let sol = LPSolution {
            columns: vec![(VertexSet::new(vec![0, 1, 2]), Q::one())],
            objective: Q::one(),
        };
        let f = DemandFn::uniform(3, Q::one()).unwrap();
        let phi = extract_fractional_coloring(&sol, &f).unwrap();
        for v in 0..3 {
            assert_eq!(phi.assignment[v], IntervalSet::full());
        }

        // infeasible input is rejected
        let sol = LPSolution {
            columns: vec![],
            objective: Q::zero(),
        };
        let f = DemandFn::uniform(1, Q::new(1, 2)).unwrap();
        assert!(extract_fractional_coloring(&sol, &f).is_err());
    }

    #[test]
    fn c5_five_column_extraction() {
        // the five maximal sets at weight 1/5 each: every vertex lies in
        // exactly two of them, so ends with measure 2/5 over two intervals
        let g = cycle(5);
        let sets = setsys::enumerate_maximal_independent_sets(&g, 100).unwrap();
        let sol = LPSolution {
            columns: sets.into_iter().map(|s| (s, Q::new(1, 5))).collect(),
            objective: Q::one(),
        };
        let f = DemandFn::uniform(5, Q::new(2, 5)).unwrap();
        let phi = extract_fractional_coloring(&sol, &f).unwrap();
        verify_fcoloring(&g, &f, &phi).unwrap();
        for v in 0..5 {
            assert_eq!(phi.measure(v), Q::new(2, 5));
        }
        let psi = to_set_coloring(&phi, &f).unwrap();
        assert_eq!(psi.n, 5);
        for v in 0..5 {
            assert_eq!(psi.assignment[v].len(), 2);
        }
        verify_set_coloring(&g, &f, &psi).unwrap();
    }

    #[test]
    fn single_vertex_set_coloring() {
        let phi = FractionalColoring {
            assignment: vec![IntervalSet::interval(Q::zero(), Q::new(3, 7))],
        };
        let f = DemandFn::uniform(1, Q::new(3, 7)).unwrap();
        let psi = to_set_coloring(&phi, &f).unwrap();
        assert_eq!(psi.n, 7);
        assert_eq!(psi.assignment, vec![vec![1, 2, 3]]);
    }

    #[test]
    fn dual_independent_set_examples() {
        let g = cycle(5);
        let f = DemandFn::uniform(5, Q::new(2, 5)).unwrap();
        let w = WeightFn::unit(5);
        let set = dual_independent_set(&g, &f, &w).unwrap();
        assert_eq!(set.len(), 2);

        let w = WeightFn::new(vec![Q::zero(); 5]).unwrap();
        let set = dual_independent_set(&g, &f, &w).unwrap();
        assert!(g.is_independent(set.as_slice()));

        let g = complete(3);
        let f = DemandFn::uniform(3, Q::new(1, 3)).unwrap();
        let w = WeightFn::new(vec![Q::from_int(3), Q::one(), Q::one()]).unwrap();
        let set = dual_independent_set(&g, &f, &w).unwrap();
        assert_eq!(set.as_slice(), &[0]);

        // non-colorable instance is reported
        let f = DemandFn::uniform(3, Q::new(1, 2)).unwrap();
        assert!(matches!(
            dual_independent_set(&g, &f, &WeightFn::unit(3)),
            Err(Error::NotColorable(_))
        ));
    }

    #[test]
    fn blowup_oracle_examples() {
        let g = cycle(5);
        let f = DemandFn::uniform(5, Q::new(2, 5)).unwrap();
        assert!(blowup_chromatic_oracle(&g, &f, 5, NODES).unwrap());

        let g = complete(3);
        let f = DemandFn::uniform(3, Q::new(1, 2)).unwrap();
        assert!(!blowup_chromatic_oracle(&g, &f, 2, NODES).unwrap());

        let f = DemandFn::uniform(3, Q::zero()).unwrap();
        assert!(blowup_chromatic_oracle(&g, &f, 1, NODES).unwrap());

        // 5 is not a common denominator of 1/2
        let f = DemandFn::uniform(3, Q::new(1, 2)).unwrap();
        assert!(blowup_chromatic_oracle(&g, &f, 5, NODES).is_err());
    }

    #[test]
    fn greedy_sampler_expectations() {
        // K2: exactly one endpoint wins each trial
        let report = sample_greedy_independent_set(&complete(2), 2000, 1);
        assert_eq!(report.hits[0] + report.hits[1], 2000);

        // C5 at 1/3, Petersen at 1/4; allow 4 sigma
        for (g, p_num, p_den) in [(cycle(5), 1i64, 3i64), (petersen(), 1, 4)] {
            let trials = 20_000u64;
            let report = sample_greedy_independent_set(&g, trials, 7);
            let p = Q::new(p_num, p_den);
            let var = &p * &(Q::one() - p.clone());
            for v in g.vertices() {
                let diff = report.frequency(v) - p.clone();
                let bound = Q::from_int(16) * &var / Q::from_int(trials as i64);
                assert!(&diff * &diff <= bound, "vertex {v} off by {diff}");
            }
        }
    }

    #[test]
    fn blowup_clique_bound_examples() {
        assert!(blowup_clique_bound(&complete(4), &Q::one(), 4).unwrap());
        assert!(blowup_clique_bound(&cycle(5), &Q::one(), 2).unwrap());
        assert!(blowup_clique_bound(&cycle(5), &Q::new(3, 2), 3).unwrap());
    }

    #[test]
    fn verdict_hash_changes_with_demand() {
        let g = cycle(5);
        let f1 = DemandFn::uniform(5, Q::new(2, 5)).unwrap();
        let f2 = DemandFn::uniform(5, Q::new(1, 3)).unwrap();
        let v1 = is_fcolorable(&g, &f1, CAP).unwrap();
        let v2 = is_fcolorable(&g, &f2, CAP).unwrap();
        assert_ne!(v1.transcript_hash, v2.transcript_hash);
        // deterministic replay
        let v1again = is_fcolorable(&g, &f1, CAP).unwrap();
        assert_eq!(v1.transcript_hash, v1again.transcript_hash);
    }
}

//! Edge-coloring side: exact matching-polytope membership for edge demands,
//! the local Vizing/Shannon/Konig verifications (dual-checked against the
//! line-graph LP), and the two supporting counting inequalities.

use crate::demand::{DemandFn, DemandSpec};
use crate::error::{Error, Result};
use crate::family::GeneratedGraph;
use crate::fracsolve;
use crate::graph::{line_graph, Graph, Multigraph};
use crate::rational::Q;
use crate::setsys::VertexSet;

pub const EDMONDS_MAX_N: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdmondsOutcome {
    Pass,
    /// A vertex whose incident demand exceeds 1, with the excess.
    VertexViolation { vertex: usize, excess: Q },
    /// An odd set whose internal demand exceeds floor(|S|/2), with the excess.
    SubsetViolation { set: VertexSet, excess: Q },
}

impl EdmondsOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, EdmondsOutcome::Pass)
    }
}

/// Aggregates per-instance edge demands onto the underlying simple graph:
/// parallel instances contribute their sum.
fn aggregate_edge_demand(g: &Multigraph, f: &DemandFn) -> Result<Vec<Vec<Q>>> {
    let instances = g.edge_instances();
    if f.len() != instances.len() {
        return Err(Error::InvalidDemand(format!(
            "edge demand has {} entries for {} edge instances",
            f.len(),
            instances.len()
        )));
    }
    let n = g.n();
    let mut agg = vec![vec![Q::zero(); n]; n];
    for (i, &(u, v)) in instances.iter().enumerate() {
        agg[u][v] += f.get(i);
        agg[v][u] += f.get(i);
    }
    Ok(agg)
}

/// Checks the matching-polytope conditions for an edge demand on a
/// multigraph: per-vertex incident sums at most 1, and for every odd subset
/// S with |S| >= 3, the demand inside S at most floor(|S|/2).
///
/// Even subsets are implied: half the vertex constraints summed over S
/// already dominate |S|/2 = floor(|S|/2). Only odd sets are enumerated.
pub fn edmonds_check(g: &Multigraph, f: &DemandFn) -> Result<EdmondsOutcome> {
    let n = g.n();
    if n > EDMONDS_MAX_N {
        return Err(Error::InstanceTooLarge(format!(
            "edmonds_check supports at most {EDMONDS_MAX_N} vertices"
        )));
    }
    let agg = aggregate_edge_demand(g, f)?;
    for v in 0..n {
        let total: Q = g.underlying().neighbors(v).map(|u| agg[v][u].clone()).sum();
        if total > Q::one() {
            return Ok(EdmondsOutcome::VertexViolation {
                vertex: v,
                excess: total - Q::one(),
            });
        }
    }
    for mask in 1u64..(1 << n) {
        let size = mask.count_ones() as usize;
        if size < 3 || size % 2 == 0 {
            continue;
        }
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let mut inside = Q::zero();
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                inside += &agg[u][v];
            }
        }
        let bound = Q::from_int((size / 2) as i64);
        if inside > bound {
            return Ok(EdmondsOutcome::SubsetViolation {
                set: VertexSet::new(verts),
                excess: inside - bound,
            });
        }
    }
    Ok(EdmondsOutcome::Pass)
}

/// Reference version enumerating every subset; used to validate the odd-set
/// reduction at small n.
pub fn edmonds_check_all_subsets(g: &Multigraph, f: &DemandFn) -> Result<bool> {
    let n = g.n();
    if n > 16 {
        return Err(Error::InstanceTooLarge("all-subset check supports n <= 16".into()));
    }
    let agg = aggregate_edge_demand(g, f)?;
    for v in 0..n {
        let total: Q = g.underlying().neighbors(v).map(|u| agg[v][u].clone()).sum();
        if total > Q::one() {
            return Ok(false);
        }
    }
    for mask in 1u64..(1 << n) {
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let mut inside = Q::zero();
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                inside += &agg[u][v];
            }
        }
        if inside > Q::from_int((verts.len() / 2) as i64) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeTheorem {
    Vizing,
    Shannon,
    Konig,
}

impl EdgeTheorem {
    pub fn demand_family(&self) -> &'static str {
        match self {
            EdgeTheorem::Vizing => "vizing_edge",
            EdgeTheorem::Shannon => "shannon_edge",
            EdgeTheorem::Konig => "konig_edge",
        }
    }
}

/// Outcome of one edge-theorem verification: the generated demand, the
/// matching-polytope verdict, and the independent line-graph LP verdict.
#[derive(Clone, Debug)]
pub struct EdgeTheoremReport {
    pub theorem: EdgeTheorem,
    pub demand: DemandFn,
    pub edmonds: EdmondsOutcome,
    pub lp_colorable: bool,
}

impl EdgeTheoremReport {
    /// The theorems predict a pass on both routes.
    pub fn holds(&self) -> bool {
        self.edmonds.passed() && self.lp_colorable
    }

    pub fn routes_agree(&self) -> bool {
        self.edmonds.passed() == self.lp_colorable
    }
}

/// Builds the theorem's edge demand, checks the matching polytope, and
/// cross-validates against the exact LP on the line graph.
pub fn verify_edge_theorem(
    g: &Multigraph,
    theorem: EdgeTheorem,
    cap: usize,
) -> Result<EdgeTheoremReport> {
    if theorem == EdgeTheorem::Konig && g.underlying().bipartition().is_none() {
        return Err(Error::DemandMismatch {
            family: "konig_edge".into(),
            reason: "graph is not bipartite".into(),
        });
    }
    let line = line_graph(g);
    let target = GeneratedGraph::Line {
        base: g.clone(),
        line,
    };
    let spec = DemandSpec::parse(theorem.demand_family())?;
    let demand = crate::demand::demand_generate(&target, &spec)?;
    let edmonds = edmonds_check(g, &demand)?;
    let line = match target {
        GeneratedGraph::Line { line, .. } => line,
        _ => unreachable!(),
    };
    let verdict = fracsolve::is_fcolorable(&line.graph, &demand, cap)?;
    Ok(EdgeTheoremReport {
        theorem,
        demand,
        edmonds,
        lp_colorable: verdict.colorable,
    })
}

/// Exact evaluation of the degree-sum inequality sum d/(d+1) <= n-1 for a
/// simple graph.
pub fn check_degree_sum_lemma(g: &Graph) -> (Q, Q, bool) {
    let lhs: Q = g
        .vertices()
        .map(|v| {
            let d = Q::from_int(g.degree(v) as i64);
            &d / &(&d + &Q::one())
        })
        .sum();
    let rhs = Q::from_int(g.n() as i64 - 1);
    let pass = lhs <= rhs;
    (lhs, rhs, pass)
}

/// Exact evaluation of the concavity inequality
/// sum_u mu_uv/(d(v)+mu_uv) <= |N(v)|/(1+|N(v)|) at one vertex.
pub fn check_jensen_lemma(g: &Multigraph, v: usize) -> Result<(Q, Q, bool)> {
    let neighbors: Vec<usize> = g.underlying().neighbors(v).collect();
    if neighbors.is_empty() {
        return Err(Error::InvalidGraph(format!("vertex {v} is isolated")));
    }
    let d = Q::from_int(g.degree(v) as i64);
    let lhs: Q = neighbors
        .iter()
        .map(|&u| {
            let mu = Q::from_int(g.multiplicity(u, v) as i64);
            &mu / &(&d + &mu)
        })
        .sum();
    let k = Q::from_int(neighbors.len() as i64);
    let rhs = &k / &(&Q::one() + &k);
    let pass = lhs <= rhs;
    Ok((lhs, rhs, pass))
}

//! Graph and multigraph representations with the derived constructions
//! (line graph, total graph, blowup). Vertices are dense indices `0..n`;
//! derived graphs carry provenance back to the base so certificates can be
//! translated in both directions.

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Simple undirected graph: symmetric irreflexive adjacency on `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    rows: Vec<Bits>,
    degrees: Vec<usize>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            rows: (0..n).map(|_| Bits::new(n)).collect(),
            degrees: vec![0; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u},{v}) out of range for n={}",
                self.n
            )));
        }
        if !self.rows[u].test(v) {
            self.rows[u].set(v);
            self.rows[v].set(u);
            self.degrees[u] += 1;
            self.degrees[v] += 1;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.rows[u].test(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn min_degree(&self) -> usize {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[v].iter_set()
    }

    pub fn neighbor_row(&self, v: usize) -> &Bits {
        &self.rows[v]
    }

    /// Edges in canonical sorted order (u < v).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.rows[u].iter_set() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.iter().sum::<usize>() / 2
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Induced subgraph on `verts` (kept in the given order), with the map
    /// back to original vertex indices.
    pub fn induced(&self, verts: &[usize]) -> (Graph, Vec<usize>) {
        let mut g = Graph::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.is_edge(u, v) {
                    g.add_edge(i, j).expect("induced edge");
                }
            }
        }
        (g, verts.to_vec())
    }

    /// True if `verts` is pairwise adjacent.
    pub fn is_clique(&self, verts: &[usize]) -> bool {
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if !self.is_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// True if `verts` is pairwise non-adjacent.
    pub fn is_independent(&self, verts: &[usize]) -> bool {
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if self.is_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// Two-coloring attempt; `Some(side)` iff bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side = vec![None; self.n];
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = vec![s];
            while let Some(u) = queue.pop() {
                let su = side[u].unwrap();
                for v in self.neighbors(u) {
                    match side[v] {
                        None => {
                            side[v] = Some(!su);
                            queue.push(v);
                        }
                        Some(sv) if sv == su => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    pub fn is_triangle_free(&self) -> bool {
        for (u, v) in self.edges() {
            if self.rows[u].intersects(&self.rows[v]) {
                return false;
            }
        }
        true
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Multigraph: simple underlying graph plus per-edge multiplicities.
/// Degrees count edge instances: d(v) = sum of multiplicities at v.
#[derive(Clone, PartialEq, Eq)]
pub struct Multigraph {
    underlying: Graph,
    mult: BTreeMap<(usize, usize), usize>,
}

impl Multigraph {
    pub fn simple(g: Graph) -> Self {
        let mult = g.edges().into_iter().map(|e| (e, 1)).collect();
        Multigraph { underlying: g, mult }
    }

    pub fn from_edge_multiplicities(
        n: usize,
        edges: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let mut g = Graph::empty(n);
        let mut mult = BTreeMap::new();
        for &(u, v, m) in edges {
            if m == 0 {
                return Err(Error::InvalidGraph(format!(
                    "multiplicity 0 on edge ({u},{v})"
                )));
            }
            g.add_edge(u, v)?;
            *mult.entry((u.min(v), u.max(v))).or_insert(0) += m;
        }
        Ok(Multigraph { underlying: g, mult })
    }

    pub fn underlying(&self) -> &Graph {
        &self.underlying
    }

    pub fn n(&self) -> usize {
        self.underlying.n()
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        *self.mult.get(&(u.min(v), u.max(v))).unwrap_or(&0)
    }

    /// d(v) = sum of edge multiplicities at v.
    pub fn degree(&self, v: usize) -> usize {
        self.underlying
            .neighbors(v)
            .map(|u| self.multiplicity(u, v))
            .sum()
    }

    pub fn neighbor_count(&self, v: usize) -> usize {
        self.underlying.degree(v)
    }

    /// Simple edges in canonical order.
    pub fn simple_edges(&self) -> Vec<(usize, usize)> {
        self.underlying.edges()
    }

    /// Edge instances in canonical order: (u, v) repeated with multiplicity.
    pub fn edge_instances(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, v) in self.underlying.edges() {
            for _ in 0..self.multiplicity(u, v) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn instance_count(&self) -> usize {
        self.mult.values().sum()
    }
}

impl std::fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Multigraph(n={}, mult={:?})", self.n(), self.mult)
    }
}

/// Line graph of a multigraph: one vertex per edge instance, adjacency iff
/// the instances share an endpoint. Parallel instances are pairwise adjacent.
pub struct LineGraph {
    pub graph: Graph,
    /// Endpoints of each line-graph vertex in the base multigraph,
    /// in canonical instance order.
    pub instances: Vec<(usize, usize)>,
}

pub fn line_graph(g: &Multigraph) -> LineGraph {
    let instances = g.edge_instances();
    let m = instances.len();
    let mut lg = Graph::empty(m);
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = instances[i];
            let (c, d) = instances[j];
            if a == c || a == d || b == c || b == d {
                lg.add_edge(i, j).expect("line graph edge");
            }
        }
    }
    LineGraph {
        graph: lg,
        instances,
    }
}

/// Total graph of a simple graph: vertices V(G) then E(G); a base vertex is
/// adjacent to its neighbors and incident edges, an edge to its endpoints
/// and all edges sharing an endpoint.
pub struct TotalGraph {
    pub graph: Graph,
    pub n_base: usize,
    /// Endpoints of edge-vertex i (total-graph index n_base + i).
    pub base_edges: Vec<(usize, usize)>,
}

pub fn total_graph(g: &Graph) -> TotalGraph {
    let base_edges = g.edges();
    let n = g.n();
    let m = base_edges.len();
    let mut tg = Graph::empty(n + m);
    for (u, v) in &base_edges {
        tg.add_edge(*u, *v).expect("vertex-vertex edge");
    }
    for (i, &(u, v)) in base_edges.iter().enumerate() {
        tg.add_edge(n + i, u).expect("edge-endpoint edge");
        tg.add_edge(n + i, v).expect("edge-endpoint edge");
        for (j, &(x, y)) in base_edges.iter().enumerate().skip(i + 1) {
            if u == x || u == y || v == x || v == y {
                tg.add_edge(n + i, n + j).expect("edge-edge edge");
            }
        }
    }
    TotalGraph {
        graph: tg,
        n_base: n,
        base_edges,
    }
}

/// Blowup request: per-vertex clique sizes over a base graph; size 0 deletes.
#[derive(Clone, Debug)]
pub struct BlowupSpec {
    pub base: Graph,
    pub sizes: Vec<usize>,
}

/// Blowup result with provenance from blown vertices back to base vertices.
pub struct Blowup {
    pub graph: Graph,
    /// origin[w] = base vertex that w replaces.
    pub origin: Vec<usize>,
}

pub fn blowup(spec: &BlowupSpec) -> Result<Blowup> {
    if spec.sizes.len() != spec.base.n() {
        return Err(Error::InvalidGraph(format!(
            "blowup sizes cover {} of {} vertices",
            spec.sizes.len(),
            spec.base.n()
        )));
    }
    let mut origin = Vec::new();
    let mut first = vec![0usize; spec.base.n()];
    for v in spec.base.vertices() {
        first[v] = origin.len();
        for _ in 0..spec.sizes[v] {
            origin.push(v);
        }
    }
    let mut g = Graph::empty(origin.len());
    for v in spec.base.vertices() {
        // clique replacing v
        for i in 0..spec.sizes[v] {
            for j in i + 1..spec.sizes[v] {
                g.add_edge(first[v] + i, first[v] + j)?;
            }
        }
    }
    for (u, v) in spec.base.edges() {
        // complete bipartite join between the replacing cliques
        for i in 0..spec.sizes[u] {
            for j in 0..spec.sizes[v] {
                g.add_edge(first[u] + i, first[v] + j)?;
            }
        }
    }
    Ok(Blowup { graph: g, origin })
}

/// On-disk graph document. Multiplicity keys are "u-v" with u < v.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult: Option<BTreeMap<String, usize>>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        GraphFile {
            n: g.n(),
            edges: g.edges(),
            mult: None,
        }
    }

    pub fn from_multigraph(g: &Multigraph) -> Self {
        let mult: BTreeMap<String, usize> = g
            .simple_edges()
            .iter()
            .map(|&(u, v)| (format!("{u}-{v}"), g.multiplicity(u, v)))
            .collect();
        let nontrivial = mult.values().any(|&m| m > 1);
        GraphFile {
            n: g.n(),
            edges: g.simple_edges(),
            mult: if nontrivial { Some(mult) } else { None },
        }
    }

    pub fn to_multigraph(&self) -> Result<Multigraph> {
        let mut g = Graph::empty(self.n);
        for &(u, v) in &self.edges {
            g.add_edge(u, v)?;
        }
        let mut mg = Multigraph::simple(g);
        if let Some(mult) = &self.mult {
            for (key, &m) in mult {
                let (u, v) = key
                    .split_once('-')
                    .ok_or_else(|| Error::InvalidGraph(format!("bad mult key {key:?}")))?;
                let u: usize = u
                    .parse()
                    .map_err(|_| Error::InvalidGraph(format!("bad mult key {key:?}")))?;
                let v: usize = v
                    .parse()
                    .map_err(|_| Error::InvalidGraph(format!("bad mult key {key:?}")))?;
                if !mg.underlying.is_edge(u, v) {
                    return Err(Error::InvalidGraph(format!(
                        "multiplicity on non-edge ({u},{v})"
                    )));
                }
                if m == 0 {
                    return Err(Error::InvalidGraph(format!(
                        "multiplicity 0 on edge ({u},{v})"
                    )));
                }
                mg.mult.insert((u.min(v), u.max(v)), m);
            }
        }
        Ok(mg)
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::from_edges(self.n, &self.edges)
    }
}

/// Parses DIMACS edge-list format: "p edge n m" then "e u v" (1-indexed).
pub fn parse_dimacs<R: BufRead>(reader: R) -> Result<Graph> {
    let mut g: Option<Graph> = None;
    for line in reader.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["p", "edge" | "col", n, _m] => {
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::InvalidGraph(format!("bad DIMACS p line {line:?}")))?;
                g = Some(Graph::empty(n));
            }
            ["e", u, v] => {
                let g = g
                    .as_mut()
                    .ok_or_else(|| Error::InvalidGraph("DIMACS e line before p line".into()))?;
                let u: usize = u
                    .parse()
                    .map_err(|_| Error::InvalidGraph(format!("bad DIMACS e line {line:?}")))?;
                let v: usize = v
                    .parse()
                    .map_err(|_| Error::InvalidGraph(format!("bad DIMACS e line {line:?}")))?;
                if u == 0 || v == 0 {
                    return Err(Error::InvalidGraph(
                        "DIMACS vertices are 1-indexed".into(),
                    ));
                }
                g.add_edge(u - 1, v - 1)?;
            }
            _ => {
                return Err(Error::InvalidGraph(format!(
                    "unrecognized DIMACS line {line:?}"
                )));
            }
        }
    }
    g.ok_or_else(|| Error::InvalidGraph("DIMACS input has no p line".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn rejects_self_loops() {
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
    }

    #[test]
    fn handshake() {
        let g = cycle(7);
        let total: usize = g.vertices().map(|v| g.degree(v)).sum();
        assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn line_graph_of_path_and_cycle() {
        // path with 2 edges -> K2
        let lg = line_graph(&Multigraph::simple(path(3)));
        assert_eq!(lg.graph.n(), 2);
        assert!(lg.graph.is_edge(0, 1));

        // C5 is its own line graph
        let lg = line_graph(&Multigraph::simple(cycle(5)));
        assert_eq!(lg.graph.n(), 5);
        assert_eq!(lg.graph.edge_count(), 5);
        for v in lg.graph.vertices() {
            assert_eq!(lg.graph.degree(v), 2);
        }
    }

    #[test]
    fn line_graph_with_parallel_edges() {
        // K3 with one edge doubled: 4 instances; the parallel pair is
        // adjacent, and each parallel instance is adjacent to both others.
        let mg =
            Multigraph::from_edge_multiplicities(3, &[(0, 1, 2), (1, 2, 1), (0, 2, 1)]).unwrap();
        let lg = line_graph(&mg);
        assert_eq!(lg.graph.n(), 4);
        assert_eq!(mg.instance_count(), 4);
        // hand oracle: adjacency iff shared endpoint
        for i in 0..4 {
            for j in i + 1..4 {
                let (a, b) = lg.instances[i];
                let (c, d) = lg.instances[j];
                let share = a == c || a == d || b == c || b == d;
                assert_eq!(lg.graph.is_edge(i, j), share);
            }
        }
        // the two parallel instances share both endpoints
        assert!(lg.graph.is_edge(0, 1));
        assert_eq!(lg.graph.degree(0), 3);
    }

    #[test]
    fn total_graph_small() {
        // K2 -> K3
        let tg = total_graph(&path(2));
        assert_eq!(tg.graph.n(), 3);
        assert_eq!(tg.graph.edge_count(), 3);

        // C3 -> 6 vertices each of degree 4
        let tg = total_graph(&cycle(3));
        assert_eq!(tg.graph.n(), 6);
        for v in tg.graph.vertices() {
            assert_eq!(tg.graph.degree(v), 4);
        }

        // single vertex -> single vertex
        let tg = total_graph(&Graph::empty(1));
        assert_eq!(tg.graph.n(), 1);
    }

    #[test]
    fn total_graph_restrictions() {
        let g = cycle(5);
        let tg = total_graph(&g);
        // restricted to V(G) equals G
        for u in 0..5 {
            for v in 0..5 {
                assert_eq!(tg.graph.is_edge(u, v), g.is_edge(u, v));
            }
        }
        // restricted to E(G) equals the line graph
        let lg = line_graph(&Multigraph::simple(g));
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    assert_eq!(tg.graph.is_edge(5 + i, 5 + j), lg.graph.is_edge(i, j));
                }
            }
        }
    }

    #[test]
    fn blowup_examples() {
        // K2 with sizes (2,2) -> K4
        let b = blowup(&BlowupSpec {
            base: path(2),
            sizes: vec![2, 2],
        })
        .unwrap();
        assert_eq!(b.graph.n(), 4);
        assert_eq!(b.graph.edge_count(), 6);

        // C5 with sizes (2,1,1,1,1): 6 vertices, 8 edges
        let b = blowup(&BlowupSpec {
            base: cycle(5),
            sizes: vec![2, 1, 1, 1, 1],
        })
        .unwrap();
        assert_eq!(b.graph.n(), 6);
        assert_eq!(b.graph.edge_count(), 8);

        // all-ones blowup is identical to the base under provenance order
        let g = cycle(7);
        let b = blowup(&BlowupSpec {
            base: g.clone(),
            sizes: vec![1; 7],
        })
        .unwrap();
        assert_eq!(b.graph, g);
        assert_eq!(b.origin, (0..7).collect::<Vec<_>>());

        // size 0 deletes
        let b = blowup(&BlowupSpec {
            base: cycle(5),
            sizes: vec![1, 0, 1, 0, 0],
        })
        .unwrap();
        assert_eq!(b.graph.n(), 2);
        assert_eq!(b.graph.edge_count(), 0);
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let mg =
            Multigraph::from_edge_multiplicities(4, &[(2, 3, 2), (0, 1, 1), (1, 2, 1)]).unwrap();
        let doc = GraphFile::from_multigraph(&mg);
        let s1 = serde_json::to_string(&doc).unwrap();
        let mg2 = doc.to_multigraph().unwrap();
        let s2 = serde_json::to_string(&GraphFile::from_multigraph(&mg2)).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(mg, mg2);
    }

    #[test]
    fn dimacs_import() {
        let text = "c comment\np edge 4 3\ne 1 2\ne 2 3\ne 3 4\n";
        let g = parse_dimacs(text.as_bytes()).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2), (2, 3)]);
        assert!(parse_dimacs("e 1 2\n".as_bytes()).is_err());
    }
}

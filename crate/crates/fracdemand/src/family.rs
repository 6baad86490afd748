//! Generators for every graph family used in campaigns and tests.
//! `generate_family` is a pure function of (spec, seed).

use crate::error::{Error, Result};
use crate::graph::{
    blowup, line_graph, total_graph, Blowup, BlowupSpec, Graph, LineGraph, Multigraph, TotalGraph,
};
use crate::rational::Q;
use crate::rng;
use rand_core::RngCore;

/// Output of a family generator. Line and total families keep their base
/// and provenance so edge/total demand generators can see base degrees.
pub enum GeneratedGraph {
    Simple(Graph),
    Multi(Multigraph),
    Line { base: Multigraph, line: LineGraph },
    Total { base: Graph, total: TotalGraph },
}

impl GeneratedGraph {
    /// The graph whose vertices get colored.
    pub fn vertex_graph(&self) -> &Graph {
        match self {
            GeneratedGraph::Simple(g) => g,
            GeneratedGraph::Multi(m) => m.underlying(),
            GeneratedGraph::Line { line, .. } => &line.graph,
            GeneratedGraph::Total { total, .. } => &total.graph,
        }
    }
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).expect("cycle")
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).expect("complete")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    Graph::from_edges(a + b, &edges).expect("complete bipartite")
}

pub fn path(n: usize) -> Graph {
    assert!(n >= 1);
    let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &edges).expect("path")
}

/// Star K_{1,k}: center 0, leaves 1..=k.
pub fn star(k: usize) -> Graph {
    let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    Graph::from_edges(k + 1, &edges).expect("star")
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    Graph::from_edges(10, &edges).expect("petersen")
}

pub fn gnp(n: usize, p: &Q, rng: &mut impl RngCore) -> Result<Graph> {
    if p.is_negative() || *p > 1 {
        return Err(Error::InvalidParams {
            family: "gnp".into(),
            reason: format!("p={p} outside [0,1]"),
        });
    }
    let num: u64 = p.numer().try_into().map_err(|_| Error::InvalidParams {
        family: "gnp".into(),
        reason: "p numerator too large".into(),
    })?;
    let den: u64 = p.denom().try_into().map_err(|_| Error::InvalidParams {
        family: "gnp".into(),
        reason: "p denominator too large".into(),
    })?;
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng::chance(rng, num, den) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

pub fn random_multigraph(
    n: usize,
    p: &Q,
    mu_max: usize,
    rng: &mut impl RngCore,
) -> Result<Multigraph> {
    let simple = gnp(n, p, rng)?;
    let edges: Vec<(usize, usize, usize)> = simple
        .edges()
        .into_iter()
        .map(|(u, v)| (u, v, rng::range_inclusive(rng, 1, mu_max.max(1) as u64) as usize))
        .collect();
    Multigraph::from_edge_multiplicities(n, &edges)
}

pub fn random_bipartite(a: usize, b: usize, p: &Q, rng: &mut impl RngCore) -> Result<Graph> {
    let num: u64 = p.numer().try_into().unwrap_or(1);
    let den: u64 = p.denom().try_into().unwrap_or(1);
    let mut g = Graph::empty(a + b);
    for u in 0..a {
        for v in 0..b {
            if rng::chance(rng, num, den) {
                g.add_edge(u, a + v)?;
            }
        }
    }
    Ok(g)
}

/// The 5-cycle blowup of Proposition "two non-adjacent vertices of C5 blown
/// to K_{delta-1}"; returns the blowup with its provenance.
pub fn prop_five_cycle_blowup(delta: usize) -> Result<Blowup> {
    if delta < 2 {
        return Err(Error::InvalidParams {
            family: "prop5".into(),
            reason: "delta >= 2 required".into(),
        });
    }
    let mut sizes = vec![1; 5];
    sizes[0] = delta - 1;
    sizes[2] = delta - 1;
    blowup(&BlowupSpec {
        base: cycle(5),
        sizes,
    })
}

/// Same for the 7-cycle with three pairwise non-adjacent vertices blown up.
pub fn prop_seven_cycle_blowup(delta: usize) -> Result<Blowup> {
    if delta < 2 {
        return Err(Error::InvalidParams {
            family: "prop7".into(),
            reason: "delta >= 2 required".into(),
        });
    }
    let mut sizes = vec![1; 7];
    sizes[0] = delta - 1;
    sizes[2] = delta - 1;
    sizes[4] = delta - 1;
    blowup(&BlowupSpec {
        base: cycle(7),
        sizes,
    })
}

fn parse_usize(family: &str, s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::InvalidParams {
        family: family.into(),
        reason: format!("expected integer, got {s:?}"),
    })
}

/// Builds a family from a spec string like "cycle:5", "gnp:8,1/2",
/// "line:complete:4", "total:cycle:5". Deterministic given (spec, seed).
pub fn generate_family(spec: &str, seed: u64) -> Result<GeneratedGraph> {
    let spec = spec.trim();
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (spec, None),
    };
    let args = |expect: usize| -> Result<Vec<&str>> {
        let parts: Vec<&str> = rest
            .map(|r| r.split(',').collect())
            .unwrap_or_default();
        if parts.len() != expect {
            return Err(Error::InvalidParams {
                family: name.into(),
                reason: format!("expected {expect} params, got {}", parts.len()),
            });
        }
        Ok(parts)
    };
    match name {
        "cycle" => {
            let n = parse_usize(name, args(1)?[0])?;
            if n < 3 {
                return Err(Error::InvalidParams {
                    family: name.into(),
                    reason: "cycle needs n >= 3".into(),
                });
            }
            Ok(GeneratedGraph::Simple(cycle(n)))
        }
        "complete" => Ok(GeneratedGraph::Simple(complete(parse_usize(
            name,
            args(1)?[0],
        )?))),
        "complete_bipartite" => {
            let a = args(2)?;
            Ok(GeneratedGraph::Simple(complete_bipartite(
                parse_usize(name, a[0])?,
                parse_usize(name, a[1])?,
            )))
        }
        "path" => {
            let n = parse_usize(name, args(1)?[0])?;
            if n == 0 {
                return Err(Error::InvalidParams {
                    family: name.into(),
                    reason: "path needs n >= 1".into(),
                });
            }
            Ok(GeneratedGraph::Simple(path(n)))
        }
        "star" => Ok(GeneratedGraph::Simple(star(parse_usize(name, args(1)?[0])?))),
        "petersen" => {
            args(0)?;
            Ok(GeneratedGraph::Simple(petersen()))
        }
        "gnp" => {
            let a = args(2)?;
            let n = parse_usize(name, a[0])?;
            let p: Q = a[1].parse()?;
            let mut rng = rng::seeded(seed);
            Ok(GeneratedGraph::Simple(gnp(n, &p, &mut rng)?))
        }
        "multi" => {
            let a = args(3)?;
            let n = parse_usize(name, a[0])?;
            let p: Q = a[1].parse()?;
            let mu = parse_usize(name, a[2])?;
            let mut rng = rng::seeded(seed);
            Ok(GeneratedGraph::Multi(random_multigraph(
                n, &p, mu, &mut rng,
            )?))
        }
        "bipartite" => {
            let a = args(3)?;
            let na = parse_usize(name, a[0])?;
            let nb = parse_usize(name, a[1])?;
            let p: Q = a[2].parse()?;
            let mut rng = rng::seeded(seed);
            Ok(GeneratedGraph::Simple(random_bipartite(
                na, nb, &p, &mut rng,
            )?))
        }
        "prop5" => Ok(GeneratedGraph::Simple(
            prop_five_cycle_blowup(parse_usize(name, args(1)?[0])?)?.graph,
        )),
        "prop7" => Ok(GeneratedGraph::Simple(
            prop_seven_cycle_blowup(parse_usize(name, args(1)?[0])?)?.graph,
        )),
        "line" => {
            let inner = rest.ok_or_else(|| Error::InvalidParams {
                family: name.into(),
                reason: "line: needs an inner family".into(),
            })?;
            let base = match generate_family(inner, seed)? {
                GeneratedGraph::Simple(g) => Multigraph::simple(g),
                GeneratedGraph::Multi(m) => m,
                _ => {
                    return Err(Error::InvalidParams {
                        family: name.into(),
                        reason: "line of line/total not supported".into(),
                    })
                }
            };
            let line = line_graph(&base);
            Ok(GeneratedGraph::Line { base, line })
        }
        "total" => {
            let inner = rest.ok_or_else(|| Error::InvalidParams {
                family: name.into(),
                reason: "total: needs an inner family".into(),
            })?;
            let base = match generate_family(inner, seed)? {
                GeneratedGraph::Simple(g) => g,
                _ => {
                    return Err(Error::InvalidParams {
                        family: name.into(),
                        reason: "total requires a simple base".into(),
                    })
                }
            };
            let total = total_graph(&base);
            Ok(GeneratedGraph::Total { base, total })
        }
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_families() {
        let g = match generate_family("cycle:5", 0).unwrap() {
            GeneratedGraph::Simple(g) => g,
            _ => panic!(),
        };
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 5);

        let p = petersen();
        assert_eq!(p.n(), 10);
        assert_eq!(p.edge_count(), 15);
        for v in p.vertices() {
            assert_eq!(p.degree(v), 3);
        }
        assert!(p.is_triangle_free());
    }

    #[test]
    fn gnp_is_deterministic() {
        let a = generate_family("gnp:8,1/2", 7).unwrap();
        let b = generate_family("gnp:8,1/2", 7).unwrap();
        assert_eq!(a.vertex_graph().edges(), b.vertex_graph().edges());
        let c = generate_family("gnp:8,1/2", 8).unwrap();
        // overwhelmingly likely to differ; the seeds select different graphs
        assert!(
            a.vertex_graph().edges() != c.vertex_graph().edges()
                || a.vertex_graph().edge_count() == 0
        );
    }

    #[test]
    fn unknown_family_errors() {
        assert!(matches!(
            generate_family("nosuch:3", 0),
            Err(Error::UnknownFamily(_))
        ));
        assert!(generate_family("cycle:2", 0).is_err());
    }

    #[test]
    fn prop_blowups_have_min_degree_delta() {
        for delta in 2..=6 {
            let b = prop_five_cycle_blowup(delta).unwrap();
            assert!(b.graph.min_degree() >= delta);
            let b = prop_seven_cycle_blowup(delta).unwrap();
            assert!(b.graph.min_degree() >= delta);
        }
    }
}

//! Demand and weight functions with one generator per demand family the
//! theorems and conjectures quantify over.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::GeneratedGraph;
use crate::graph::Graph;
use crate::rational::{denominator_lcm, Q};
use crate::setsys;

/// Per-vertex rational demand in [0,1]; indexed by vertex.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DemandFn {
    pub values: Vec<Q>,
}

impl DemandFn {
    pub fn uniform(n: usize, value: Q) -> Result<Self> {
        DemandFn::new(vec![value; n])
    }

    pub fn new(values: Vec<Q>) -> Result<Self> {
        for (v, q) in values.iter().enumerate() {
            if q.is_negative() || *q > 1 {
                return Err(Error::DemandOutOfRange {
                    vertex: v,
                    value: q.to_string(),
                });
            }
        }
        Ok(DemandFn { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> &Q {
        &self.values[v]
    }

    pub fn total(&self) -> Q {
        self.values.iter().cloned().sum()
    }
}

/// Nonnegative per-vertex weights (Theorem "for every nonnegative weight
/// function" side of the duality).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WeightFn {
    pub values: Vec<Q>,
}

impl WeightFn {
    pub fn new(values: Vec<Q>) -> Result<Self> {
        if let Some(v) = values.iter().position(|q| q.is_negative()) {
            return Err(Error::InvalidDemand(format!("negative weight at {v}")));
        }
        Ok(WeightFn { values })
    }

    pub fn unit(n: usize) -> Self {
        WeightFn {
            values: vec![Q::one(); n],
        }
    }
}

/// Least positive N with N*f(v) integral for every v; 1 on an empty domain.
pub fn common_denominator(f: &DemandFn) -> BigInt {
    denominator_lcm(f.values.iter())
}

pub fn common_denominator_u64(f: &DemandFn) -> Result<u64> {
    common_denominator(f)
        .try_into()
        .map_err(|_| Error::InstanceTooLarge("common denominator exceeds u64".into()))
}

/// On-disk demand document: {"f": ["1/3", "2/5", ...]}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DemandFile {
    pub f: Vec<Q>,
}

impl DemandFile {
    pub fn from_demand(f: &DemandFn) -> Self {
        DemandFile {
            f: f.values.clone(),
        }
    }

    pub fn to_demand(&self) -> Result<DemandFn> {
        DemandFn::new(self.f.clone())
    }
}

/// Parsed generator spec, e.g. "brooks:eps=1/2" or "chi_bounded:c=3/2".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemandSpec {
    pub family: String,
    pub params: BTreeMap<String, String>,
}

impl DemandSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (family, rest) = match s.split_once(':') {
            Some((f, r)) => (f, Some(r)),
            None => (s, None),
        };
        let mut params = BTreeMap::new();
        if let Some(rest) = rest {
            for item in rest.split(',') {
                let (k, v) = item.split_once('=').ok_or_else(|| {
                    Error::UnknownDemandFamily(format!("bad param {item:?} in {s:?}"))
                })?;
                params.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(DemandSpec {
            family: family.to_string(),
            params,
        })
    }

    fn rational(&self, key: &str, default: Option<Q>) -> Result<Q> {
        match self.params.get(key) {
            Some(v) => v.parse(),
            None => default.ok_or_else(|| {
                Error::UnknownDemandFamily(format!(
                    "family {} requires param {key}",
                    self.family
                ))
            }),
        }
    }
}

fn q_usize(n: usize) -> Q {
    Q::from_int(n as i64)
}

/// Builds the demand family on the generated graph. Edge and total families
/// need the provenance the generator kept; vertex families apply to the
/// vertex graph of whatever was generated.
pub fn demand_generate(target: &GeneratedGraph, spec: &DemandSpec) -> Result<DemandFn> {
    match spec.family.as_str() {
        "greedy" => Ok(greedy_demand(target.vertex_graph())),
        "brooks" => {
            let eps = spec.rational("eps", Some(Q::new(1, 2)))?;
            brooks_demand(target.vertex_graph(), &eps)
        }
        "reed" => Ok(reed_demand(target.vertex_graph())),
        "chi_bounded" => {
            let c = spec.rational("c", None)?;
            chi_bounded_demand(target.vertex_graph(), &c)
        }
        "perfect" => chi_bounded_demand(target.vertex_graph(), &Q::one()),
        "quasiline" => chi_bounded_demand(target.vertex_graph(), &Q::new(3, 2)),
        "clawfree" => chi_bounded_demand(target.vertex_graph(), &Q::from_int(2)),
        "shearer" => {
            let c = spec.rational("c", Some(Q::one()))?;
            shearer_demand(target.vertex_graph(), &c)
        }
        "vizing_edge" | "shannon_edge" | "konig_edge" => match target {
            GeneratedGraph::Line { base, line } => {
                if spec.family == "konig_edge" && base.underlying().bipartition().is_none() {
                    return Err(Error::DemandMismatch {
                        family: spec.family.clone(),
                        reason: "base graph is not bipartite".into(),
                    });
                }
                let mut values = Vec::with_capacity(line.instances.len());
                for &(u, v) in &line.instances {
                    let dmax = q_usize(base.degree(u).max(base.degree(v)));
                    let val = match spec.family.as_str() {
                        "vizing_edge" => {
                            Q::one() / (&dmax + &q_usize(base.multiplicity(u, v)))
                        }
                        "shannon_edge" => Q::from_int(2) / (Q::from_int(3) * dmax),
                        _ => Q::one() / dmax,
                    };
                    values.push(val);
                }
                DemandFn::new(values)
            }
            _ => Err(Error::DemandMismatch {
                family: spec.family.clone(),
                reason: "requires a line graph with provenance (family line:...)".into(),
            }),
        },
        "total" => match target {
            GeneratedGraph::Total { base, total } => {
                let mut values = Vec::with_capacity(total.graph.n());
                for v in base.vertices() {
                    values.push(Q::one() / q_usize(base.degree(v) + 2));
                }
                for &(u, v) in &total.base_edges {
                    values.push(Q::one() / q_usize(base.degree(u).max(base.degree(v)) + 2));
                }
                DemandFn::new(values)
            }
            _ => Err(Error::DemandMismatch {
                family: spec.family.clone(),
                reason: "requires a total graph with provenance (family total:...)".into(),
            }),
        },
        other => Err(Error::UnknownDemandFamily(other.to_string())),
    }
}

/// f(v) = 1/(d(v)+1).
pub fn greedy_demand(g: &Graph) -> DemandFn {
    DemandFn {
        values: g
            .vertices()
            .map(|v| Q::one() / q_usize(g.degree(v) + 1))
            .collect(),
    }
}

/// f(v) = 1/(d(v)+1-eps), capped at 1 for isolated vertices.
pub fn brooks_demand(g: &Graph, eps: &Q) -> Result<DemandFn> {
    if eps.is_negative() || *eps > 1 {
        return Err(Error::InvalidParams {
            family: "brooks".into(),
            reason: format!("eps={eps} outside [0,1]"),
        });
    }
    let values = g
        .vertices()
        .map(|v| {
            let den = q_usize(g.degree(v) + 1) - eps;
            let f = Q::one() / den;
            if f > 1 {
                Q::one()
            } else {
                f
            }
        })
        .collect();
    DemandFn::new(values)
}

/// f(v) = 2/(d(v)+omega(v)+1).
pub fn reed_demand(g: &Graph) -> DemandFn {
    DemandFn {
        values: g
            .vertices()
            .map(|v| Q::from_int(2) / q_usize(g.degree(v) + setsys::omega_local(g, v) + 1))
            .collect(),
    }
}

/// f(v) = 1/(c*omega(v)); c = 1 perfect, 3/2 quasiline, 2 claw-free.
pub fn chi_bounded_demand(g: &Graph, c: &Q) -> Result<DemandFn> {
    if *c < 1 {
        return Err(Error::InvalidParams {
            family: "chi_bounded".into(),
            reason: format!("c={c} must be >= 1 to keep demands in [0,1]"),
        });
    }
    let values = g
        .vertices()
        .map(|v| Q::one() / (c * &q_usize(setsys::omega_local(g, v))))
        .collect();
    DemandFn::new(values)
}

/// Rational lower bound on ln(d) with error < `tol`, via the series
/// ln d = 2 * sum_{k>=0} z^(2k+1)/(2k+1), z = (d-1)/(d+1). All terms are
/// positive, so every partial sum is a lower bound; the tail is bounded by
/// a geometric series.
pub fn ln_lower_bound(d: u64, tol: &Q) -> Q {
    assert!(d >= 1);
    if d == 1 {
        return Q::zero();
    }
    let z = Q::new(d as i64 - 1, d as i64 + 1);
    let z2 = &z * &z;
    let mut term = z.clone(); // z^(2k+1)
    let mut sum = Q::zero();
    let mut k: u32 = 0;
    loop {
        sum += &(&term / &Q::from_int(2 * k as i64 + 1));
        // tail <= 2 * z^(2k+3) / ((2k+3)(1-z^2))
        let next_pow = &term * &z2;
        let tail_bound = Q::from_int(2) * &next_pow
            / (Q::from_int(2 * k as i64 + 3) * (Q::one() - z2.clone()));
        if tail_bound < *tol {
            return Q::from_int(2) * sum;
        }
        term = next_pow;
        k += 1;
    }
}

/// f(v) = a rational lower bound of c*ln(d(v))/d(v) with error < 1e-6;
/// 0 for d <= 1. Rounding the demand down is always safe for colorability.
pub fn shearer_demand(g: &Graph, c: &Q) -> Result<DemandFn> {
    if c.is_negative() {
        return Err(Error::InvalidParams {
            family: "shearer".into(),
            reason: format!("c={c} must be nonnegative"),
        });
    }
    let tol = Q::new(1, 1_000_000);
    let mut values = Vec::with_capacity(g.n());
    for v in g.vertices() {
        let d = g.degree(v) as u64;
        if d <= 1 || c.is_zero() {
            values.push(Q::zero());
            continue;
        }
        // pick the series tolerance so that c * tail / d stays under 1e-6
        let series_tol = &(&tol * &q_usize(d as usize)) / c;
        let ln_lo = ln_lower_bound(d, &series_tol);
        let f = c * &ln_lo / q_usize(d as usize);
        if f > 1 {
            return Err(Error::InvalidParams {
                family: "shearer".into(),
                reason: format!("c={c} pushes demand above 1 at degree {d}"),
            });
        }
        values.push(f);
    }
    DemandFn::new(values)
}

/// Uniform scaling; errors if any scaled value leaves [0,1].
pub fn demand_scale(f: &DemandFn, factor: &Q) -> Result<DemandFn> {
    if factor.is_negative() {
        return Err(Error::InvalidDemand(format!("negative factor {factor}")));
    }
    DemandFn::new(f.values.iter().map(|v| v * factor).collect())
}

/// Uniformly scales f down until every clique sums to at most 1; identity
/// when all clique sums are already <= 1.
pub fn demand_clip_to_clique_condition(g: &Graph, f: &DemandFn) -> Result<DemandFn> {
    assert_eq!(f.len(), g.n());
    let worst = setsys::max_clique_weight(g, &f.values);
    if worst <= Q::one() {
        return Ok(f.clone());
    }
    demand_scale(f, &(Q::one() / worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{complete, cycle, generate_family};

    #[test]
    fn common_denominator_examples() {
        let f = DemandFn::new(vec![Q::new(1, 3), Q::new(2, 5)]).unwrap();
        assert_eq!(common_denominator(&f), BigInt::from(15));
        let f = DemandFn::new(vec![Q::zero(), Q::one()]).unwrap();
        assert_eq!(common_denominator(&f), BigInt::from(1));
        let f = DemandFn::uniform(5, Q::new(2, 5)).unwrap();
        assert_eq!(common_denominator(&f), BigInt::from(5));
        let f = DemandFn::new(vec![]).unwrap();
        assert_eq!(common_denominator(&f), BigInt::from(1));
    }

    #[test]
    fn common_denominator_divides_any_other() {
        let f = DemandFn::new(vec![Q::new(1, 6), Q::new(3, 4), Q::new(2, 3)]).unwrap();
        let n = common_denominator(&f);
        // 24 is another common denominator; the least one divides it
        assert_eq!(&BigInt::from(24) % &n, BigInt::from(0));
        assert_eq!(n, BigInt::from(12));
    }

    #[test]
    fn generator_formulas() {
        let c5 = GeneratedGraph::Simple(cycle(5));
        let f = demand_generate(&c5, &DemandSpec::parse("greedy").unwrap()).unwrap();
        assert!(f.values.iter().all(|v| *v == Q::new(1, 3)));

        let f = demand_generate(&c5, &DemandSpec::parse("brooks:eps=1/2").unwrap()).unwrap();
        assert!(f.values.iter().all(|v| *v == Q::new(2, 5)));

        let k4 = GeneratedGraph::Simple(complete(4));
        let f = demand_generate(&k4, &DemandSpec::parse("reed").unwrap()).unwrap();
        assert!(f.values.iter().all(|v| *v == Q::new(1, 4)));

        let lk3 = generate_family("line:complete:3", 0).unwrap();
        let f = demand_generate(&lk3, &DemandSpec::parse("vizing_edge").unwrap()).unwrap();
        assert!(f.values.iter().all(|v| *v == Q::new(1, 3)));
    }

    #[test]
    fn edge_families_reject_plain_graphs() {
        let c5 = GeneratedGraph::Simple(cycle(5));
        assert!(matches!(
            demand_generate(&c5, &DemandSpec::parse("vizing_edge").unwrap()),
            Err(Error::DemandMismatch { .. })
        ));
        let lk3 = generate_family("line:complete:3", 0).unwrap();
        assert!(matches!(
            demand_generate(&lk3, &DemandSpec::parse("konig_edge").unwrap()),
            Err(Error::DemandMismatch { .. })
        ));
    }

    #[test]
    fn total_family() {
        let t = generate_family("total:complete:2", 0).unwrap();
        let f = demand_generate(&t, &DemandSpec::parse("total").unwrap()).unwrap();
        // K2: both vertices have degree 1, the single edge max degree 1
        assert_eq!(f.values, vec![Q::new(1, 3), Q::new(1, 3), Q::new(1, 3)]);
    }

    #[test]
    fn scale_and_clip() {
        let f = DemandFn::uniform(2, Q::new(1, 3)).unwrap();
        let scaled = demand_scale(&f, &Q::new(1, 2)).unwrap();
        assert!(scaled.values.iter().all(|v| *v == Q::new(1, 6)));
        assert!(demand_scale(&f, &Q::from_int(4)).is_err());

        // K3 with f = 2/5 has clique sum 6/5, so clip scales by 5/6
        let k3 = complete(3);
        let f = DemandFn::uniform(3, Q::new(2, 5)).unwrap();
        let clipped = demand_clip_to_clique_condition(&k3, &f).unwrap();
        assert!(clipped.values.iter().all(|v| *v == Q::new(1, 3)));

        // C5 with f = 2/5: max clique is an edge with sum 4/5, unchanged
        let c5 = cycle(5);
        let f = DemandFn::uniform(5, Q::new(2, 5)).unwrap();
        let clipped = demand_clip_to_clique_condition(&c5, &f).unwrap();
        assert_eq!(clipped, f);
    }

    #[test]
    fn clip_output_respects_clique_condition() {
        let mut rng = crate::rng::seeded(3);
        for _ in 0..30 {
            let n = crate::rng::range_inclusive(&mut rng, 1, 8) as usize;
            let g = crate::family::gnp(n, &Q::new(1, 2), &mut rng).unwrap();
            let f = DemandFn::new(
                (0..n)
                    .map(|_| Q::new(crate::rng::range_inclusive(&mut rng, 0, 4) as i64, 4))
                    .collect(),
            )
            .unwrap();
            let clipped = demand_clip_to_clique_condition(&g, &f).unwrap();
            assert!(setsys::max_clique_weight(&g, &clipped.values) <= Q::one());
        }
    }

    #[test]
    fn shearer_lower_bound_is_tight_enough() {
        // ln 2 = 0.6931471805..., ln 10 = 2.302585092...
        let tol = Q::new(1, 1_000_000);
        for (d, ln_d) in [(2u64, 0.693_147_180_6), (3, 1.098_612_288_7), (10, 2.302_585_093_0)] {
            let lo = ln_lower_bound(d, &tol);
            let lo_f = lo.to_f64_lossy();
            assert!(lo_f <= ln_d + 1e-12, "bound not below at d={d}");
            assert!(ln_d - lo_f < 1e-6, "bound too loose at d={d}");
        }

        let g = crate::family::petersen();
        let f = shearer_demand(&g, &Q::one()).unwrap();
        let formula = (3.0f64).ln() / 3.0;
        for v in f.values {
            let diff = formula - v.to_f64_lossy();
            assert!(diff >= -1e-12 && diff < 1e-6);
        }
    }

    #[test]
    fn spec_string_parsing() {
        let s = DemandSpec::parse("brooks:eps=1/2").unwrap();
        assert_eq!(s.family, "brooks");
        assert_eq!(s.params["eps"], "1/2");
        assert!(DemandSpec::parse("brooks:oops").is_err());
        assert!(matches!(
            demand_generate(
                &GeneratedGraph::Simple(cycle(5)),
                &DemandSpec::parse("nosuch").unwrap()
            ),
            Err(Error::UnknownDemandFamily(_))
        ));
    }

    #[test]
    fn demand_json_shape() {
        let f = DemandFn::new(vec![Q::new(1, 3), Q::new(2, 5)]).unwrap();
        let doc = DemandFile::from_demand(&f);
        assert_eq!(serde_json::to_string(&doc).unwrap(), r#"{"f":["1/3","2/5"]}"#);
    }
}

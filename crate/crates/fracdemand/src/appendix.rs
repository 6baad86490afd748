//! Exact grid evaluation of the technical nonnegativity claims: each claim
//! is a rational function of the minimum degree and a few bounded
//! variables, asserted nonnegative over a region. Integer points are
//! evaluated exhaustively and real-valued coordinates are additionally
//! sampled at range endpoints and equally spaced rational midpoints
//! (the "refinement"). Grid sampling falsifies, it does not prove; the
//! report states its coverage.
//!
//! Evaluation uses exact i128 fractions (magnitudes here stay far below
//! the overflow range, and every operation is overflow-checked).

use crate::error::{Error, Result};
use crate::rational::Q;

pub const CLAIM_IDS: [&str; 6] = [
    "sink-clique",
    "free-color",
    "kprime-color",
    "uprime-color",
    "turtle-degree",
    "lost-color-average",
];

/// Exact i128 fraction, reduced, positive denominator. Overflow anywhere
/// is a hard error: these grids stay tiny, so an overflow means a bug.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Frac {
    num: i128,
    den: i128,
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl Frac {
    fn new(num: i128, den: i128) -> Frac {
        assert!(den != 0);
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den);
        Frac {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    fn int(n: i128) -> Frac {
        Frac { num: n, den: 1 }
    }

    fn half(twice: i128) -> Frac {
        Frac::new(twice, 2)
    }

    fn add(self, other: Frac) -> Frac {
        let num = self
            .num
            .checked_mul(other.den)
            .and_then(|a| other.num.checked_mul(self.den).and_then(|b| a.checked_add(b)))
            .expect("fraction overflow");
        let den = self.den.checked_mul(other.den).expect("fraction overflow");
        Frac::new(num, den)
    }

    fn sub(self, other: Frac) -> Frac {
        self.add(Frac {
            num: -other.num,
            den: other.den,
        })
    }

    fn mul(self, other: Frac) -> Frac {
        let num = self.num.checked_mul(other.num).expect("fraction overflow");
        let den = self.den.checked_mul(other.den).expect("fraction overflow");
        Frac::new(num, den)
    }

    fn div(self, other: Frac) -> Frac {
        assert!(other.num != 0, "division by zero fraction");
        self.mul(Frac {
            num: other.den,
            den: other.num,
        })
    }

    fn recip_of(value: Frac) -> Frac {
        Frac::int(1).div(value)
    }

    fn min(self, other: Frac) -> Frac {
        if self.le(other) {
            self
        } else {
            other
        }
    }

    fn le(self, other: Frac) -> bool {
        let lhs = self.num.checked_mul(other.den).expect("fraction overflow");
        let rhs = other.num.checked_mul(self.den).expect("fraction overflow");
        lhs <= rhs
    }

    fn lt(self, other: Frac) -> bool {
        let lhs = self.num.checked_mul(other.den).expect("fraction overflow");
        let rhs = other.num.checked_mul(self.den).expect("fraction overflow");
        lhs < rhs
    }

    fn is_negative(self) -> bool {
        self.num < 0
    }

    fn to_q(self) -> Q {
        Q::new(self.num as i64, self.den as i64)
    }

    fn ceil_int(self) -> i128 {
        self.num.div_euclid(self.den) + i128::from(self.num.rem_euclid(self.den) != 0)
    }

    fn floor_int(self) -> i128 {
        self.num.div_euclid(self.den)
    }
}

/// A counterpoint: the exact coordinates and the negative value.
#[derive(Clone, Debug)]
pub struct Counterpoint {
    pub delta: u64,
    pub coords: Vec<(String, Q)>,
    pub value: Q,
}

#[derive(Clone, Debug)]
pub enum AppendixOutcome {
    Pass { points_checked: u64 },
    Counterpoint(Counterpoint),
}

impl AppendixOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, AppendixOutcome::Pass { .. })
    }
}

/// Integer points of [lo,hi] plus `refinement` equal subdivisions
/// (endpoints included); empty when lo > hi.
fn sample_points(lo: Frac, hi: Frac, refinement: u32) -> Vec<Frac> {
    if hi.lt(lo) {
        return Vec::new();
    }
    let mut pts = Vec::new();
    let mut i = lo.ceil_int();
    while Frac::int(i).le(hi) && i <= hi.floor_int() {
        pts.push(Frac::int(i));
        i += 1;
    }
    let span = hi.sub(lo);
    if span.num == 0 {
        pts.push(lo);
    } else {
        for t in 0..=refinement as i128 {
            let p = lo.add(span.mul(Frac::new(t, refinement as i128)));
            pts.push(p);
        }
    }
    pts.sort_by(|a, b| {
        if a.lt(*b) {
            std::cmp::Ordering::Less
        } else if a == b {
            std::cmp::Ordering::Equal
        } else {
            std::cmp::Ordering::Greater
        }
    });
    pts.dedup();
    pts
}

/// The claim's minimum admissible delta.
pub fn claim_delta_min(claim: &str) -> Result<u64> {
    match claim {
        "sink-clique" | "free-color" | "kprime-color" | "uprime-color" | "turtle-degree" => Ok(2),
        "lost-color-average" => Ok(4),
        "negated-fixture" => Ok(2),
        other => Err(Error::UnknownClaim(other.to_string())),
    }
}

/// Evaluates one claim over integer deltas in [delta_lo, delta_hi], walking
/// the claim's own variable region. Returns the first counterpoint found,
/// or the number of points checked.
pub fn appendix_verify(
    claim: &str,
    delta_lo: u64,
    delta_hi: u64,
    refinement: u32,
) -> Result<AppendixOutcome> {
    let dmin = claim_delta_min(claim)?;
    if delta_lo < dmin || delta_lo > delta_hi {
        return Err(Error::MalformedRange(format!(
            "claim {claim} requires {dmin} <= delta_lo <= delta_hi, got [{delta_lo},{delta_hi}]"
        )));
    }
    if refinement == 0 {
        return Err(Error::MalformedRange("refinement must be positive".into()));
    }
    let mut points = 0u64;
    let mut check = |delta: u64, coords: &[(&str, Frac)], value: Frac| -> Option<Counterpoint> {
        points += 1;
        if value.is_negative() {
            Some(Counterpoint {
                delta,
                coords: coords
                    .iter()
                    .map(|(n, f)| (n.to_string(), f.to_q()))
                    .collect(),
                value: value.to_q(),
            })
        } else {
            None
        }
    };

    for delta in delta_lo..=delta_hi {
        let d128 = delta as i128;
        let dl = Frac::int(d128);
        let dl_half = Frac::half(2 * d128 + 1); // delta + 1/2
        let cp = match claim {
            // q(d, du, du') = 1.5/(d+.5) - 1/(du+.5) - 1/(du'+.5)
            //                 + min{.5/(du+du'-d-.5), .5/(delta+.5)}
            // region: d >= delta, du, du' >= d; degrees in context stay
            // at most 2*delta, which bounds the grid.
            "sink-clique" => (|| {
                for d in sample_points(dl, Frac::int(2 * d128), refinement) {
                    for du in sample_points(d, Frac::int(2 * d128), refinement) {
                        for dup in sample_points(d, Frac::int(2 * d128), refinement) {
                            let lead = Frac::new(3, 2)
                                .div(d.add(Frac::half(1)))
                                .sub(Frac::recip_of(du.add(Frac::half(1))))
                                .sub(Frac::recip_of(dup.add(Frac::half(1))));
                            let alt1 = Frac::half(1).div(du.add(dup).sub(d).sub(Frac::half(1)));
                            let alt2 = Frac::half(1).div(dl_half);
                            let q = lead.add(alt1.min(alt2));
                            if let Some(c) =
                                check(delta, &[("d", d), ("d_u", du), ("d_u'", dup)], q)
                            {
                                return Some(c);
                            }
                        }
                    }
                }
                None
            })(),
            // q(k, d_x) = 1 - (d_x - k)/(delta+.5) - 1/(d_x+.5)
            // region: khat >= delta+1, k in [khat/2, delta-1],
            //         d_x in [delta+1, (khat+.5)/(1.5 - k/(khat-.5)) - .5];
            // khat ranges over [delta+1, 2delta+1]; empty slices skipped.
            "free-color" => (|| {
                for khat in sample_points(
                    Frac::int(d128 + 1),
                    Frac::int(2 * d128 + 1),
                    refinement,
                ) {
                    let k_lo = khat.div(Frac::int(2));
                    let k_hi = Frac::int(d128 - 1);
                    for k in sample_points(k_lo, k_hi, refinement) {
                        let denom = Frac::new(3, 2).sub(k.div(khat.sub(Frac::half(1))));
                        if !Frac::int(0).lt(denom) {
                            continue;
                        }
                        let dx_hi = khat.add(Frac::half(1)).div(denom).sub(Frac::half(1));
                        for dx in sample_points(Frac::int(d128 + 1), dx_hi, refinement) {
                            let q = Frac::int(1)
                                .sub(dx.sub(k).div(dl_half))
                                .sub(Frac::recip_of(dx.add(Frac::half(1))));
                            if let Some(c) = check(
                                delta,
                                &[("khat", khat), ("k", k), ("d_x", dx)],
                                q,
                            ) {
                                return Some(c);
                            }
                        }
                    }
                }
                None
            })(),
            // q(k', khat, d_x) = 1 - (khat-k'-1)/(khat+.5)
            //                      - (d_x+1-khat)/(delta+.5) - 1/(d_x+.5)
            // region: k' >= delta, khat >= max{k'+1, delta+2}, d_x in [khat, 2delta]
            "kprime-color" => (|| {
                for kp in sample_points(dl, Frac::int(2 * d128), refinement) {
                    let khat_lo = kp.add(Frac::int(1)).num.max((d128 + 2) * kp.add(Frac::int(1)).den)
                        as i128;
                    let _ = khat_lo;
                    let khat_lo = if kp.add(Frac::int(1)).le(Frac::int(d128 + 2)) {
                        Frac::int(d128 + 2)
                    } else {
                        kp.add(Frac::int(1))
                    };
                    for khat in sample_points(khat_lo, Frac::int(2 * d128 + 1), refinement) {
                        for dx in sample_points(khat, Frac::int(2 * d128), refinement) {
                            let q = Frac::int(1)
                                .sub(khat.sub(kp).sub(Frac::int(1)).div(khat.add(Frac::half(1))))
                                .sub(dx.add(Frac::int(1)).sub(khat).div(dl_half))
                                .sub(Frac::recip_of(dx.add(Frac::half(1))));
                            if let Some(c) = check(
                                delta,
                                &[("k'", kp), ("khat", khat), ("d_x", dx)],
                                q,
                            ) {
                                return Some(c);
                            }
                        }
                    }
                }
                None
            })(),
            // q(k', khat, d_u') = 1 - (khat-k'-2)/(khat+.5)
            //                       - (d_u'+2-khat)/(delta+.5) - 1/(d_u'+.5)
            // union of the two stated regimes:
            //   (a) khat >= max{k'+2, delta+3}, d in [khat, 2delta]
            //   (b) khat >= k'+2,               d in [khat, 2delta-1]
            "uprime-color" => (|| {
                for kp in sample_points(dl, Frac::int(2 * d128), refinement) {
                    for khat in sample_points(
                        kp.add(Frac::int(2)),
                        Frac::int(2 * d128 + 1),
                        refinement,
                    ) {
                        for du in sample_points(khat, Frac::int(2 * d128), refinement) {
                            let in_a = Frac::int(d128 + 3).le(khat);
                            let in_b = du.le(Frac::int(2 * d128 - 1));
                            if !in_a && !in_b {
                                continue;
                            }
                            let q = Frac::int(1)
                                .sub(khat.sub(kp).sub(Frac::int(2)).div(khat.add(Frac::half(1))))
                                .sub(du.add(Frac::int(2)).sub(khat).div(dl_half))
                                .sub(Frac::recip_of(du.add(Frac::half(1))));
                            if let Some(c) = check(
                                delta,
                                &[("k'", kp), ("khat", khat), ("d_u'", du)],
                                q,
                            ) {
                                return Some(c);
                            }
                        }
                    }
                }
                None
            })(),
            // q(d) = 1 - .5(d-1)/(d+1.5) - .5 delta/(delta+.5) - 1/(d+.5)
            // region: d in [delta, 2delta]
            "turtle-degree" => (|| {
                for d in sample_points(dl, Frac::int(2 * d128), refinement) {
                    let q = Frac::int(1)
                        .sub(
                            Frac::half(1)
                                .mul(d.sub(Frac::int(1)))
                                .div(d.add(Frac::half(3))),
                        )
                        .sub(Frac::half(d128).div(dl_half))
                        .sub(Frac::recip_of(d.add(Frac::half(1))));
                    if let Some(c) = check(delta, &[("d", d)], q) {
                        return Some(c);
                    }
                }
                None
            })(),
            // q(l, k) = l + .5 - k/(delta+.5) - (l(delta+1.5-k) + .5k)/(delta+2-l)
            // region: l in [2, delta/2], k in [(delta+1)/2, delta+1], delta >= 4
            "lost-color-average" => (|| {
                for l in sample_points(Frac::int(2), Frac::half(d128), refinement) {
                    for k in sample_points(
                        Frac::half(d128 + 1),
                        Frac::int(d128 + 1),
                        refinement,
                    ) {
                        let q = l
                            .add(Frac::half(1))
                            .sub(k.div(dl_half))
                            .sub(
                                l.mul(dl.add(Frac::half(3)).sub(k))
                                    .add(Frac::half(1).mul(k))
                                    .div(dl.add(Frac::int(2)).sub(l)),
                            );
                        if let Some(c) = check(delta, &[("l", l), ("k", k)], q) {
                            return Some(c);
                        }
                    }
                }
                None
            })(),
            // harness self-test: deliberately negative in half its range
            "negated-fixture" => (|| {
                for t in sample_points(Frac::int(0), dl.add(Frac::int(1)), refinement) {
                    let q = Frac::half(1).sub(t.div(dl.add(Frac::int(1))));
                    if let Some(c) = check(delta, &[("t", t)], q) {
                        return Some(c);
                    }
                }
                None
            })(),
            other => return Err(Error::UnknownClaim(other.to_string())),
        };
        if let Some(c) = cp {
            return Ok(AppendixOutcome::Counterpoint(c));
        }
    }
    Ok(AppendixOutcome::Pass {
        points_checked: points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_points_mixes_integers_and_midpoints() {
        let pts = sample_points(Frac::new(1, 2), Frac::new(5, 2), 4);
        // integers 1, 2 plus endpoints and quarters of [1/2, 5/2]
        assert!(pts.contains(&Frac::int(1)));
        assert!(pts.contains(&Frac::int(2)));
        assert!(pts.contains(&Frac::new(1, 2)));
        assert!(pts.contains(&Frac::new(5, 2)));
        assert!(pts.contains(&Frac::int(1))); // 1/2 + 1/4 * 2
        assert!(sample_points(Frac::int(3), Frac::int(2), 4).is_empty());
    }

    #[test]
    fn all_six_claims_pass_at_small_delta() {
        for claim in CLAIM_IDS {
            let lo = claim_delta_min(claim).unwrap();
            let out = appendix_verify(claim, lo, 12, 4).unwrap();
            assert!(out.passed(), "claim {claim} failed: {out:?}");
        }
    }

    #[test]
    fn sink_clique_is_tight_at_the_corner() {
        // q_2(2,2,2) = 0: the pass must include boundary equality
        let out = appendix_verify("sink-clique", 2, 2, 2).unwrap();
        assert!(out.passed());
    }

    #[test]
    fn negated_fixture_yields_exact_counterpoint() {
        let out = appendix_verify("negated-fixture", 2, 5, 4).unwrap();
        match out {
            AppendixOutcome::Counterpoint(c) => {
                assert!(c.value.is_negative());
                assert_eq!(c.coords.len(), 1);
            }
            other => panic!("expected counterpoint, got {other:?}"),
        }
    }

    #[test]
    fn range_validation() {
        assert!(appendix_verify("lost-color-average", 2, 10, 4).is_err());
        assert!(appendix_verify("sink-clique", 5, 3, 4).is_err());
        assert!(appendix_verify("sink-clique", 2, 3, 0).is_err());
        assert!(matches!(
            appendix_verify("nonsense", 2, 3, 4),
            Err(Error::UnknownClaim(_))
        ));
    }
}

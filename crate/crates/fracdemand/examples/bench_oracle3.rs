use fracdemand::demand::{common_denominator_u64, DemandFn};
use fracdemand::rational::Q;
use fracdemand::{fracsolve, rng};
use rand_core::RngCore;

fn main() {
    let t0 = std::time::Instant::now();
    let mut worst = std::time::Duration::ZERO;
    let mut count = 0u64;
    let instances = 400; // scaled-down probe of the 2000-instance criterion
    for trial in 0..instances {
        let mut r = rng::trial_rng(99, trial);
        let n = rng::range_inclusive(&mut r, 1, 6) as usize;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if r.next_u64() % 2 == 0 {
                    edges.push((u, v));
                }
            }
        }
        let g = fracdemand::Graph::from_edges(n, &edges).unwrap();
        for _ in 0..5 {
            let f = DemandFn::new(
                (0..n)
                    .map(|_| {
                        let den = rng::range_inclusive(&mut r, 1, 6) as i64;
                        let num = rng::range_inclusive(&mut r, 0, den as u64) as i64;
                        Q::new(num, den)
                    })
                    .collect(),
            )
            .unwrap();
            let t = std::time::Instant::now();
            let lp = fracsolve::is_fcolorable(&g, &f, 1_000_000).unwrap().colorable;
            let nden = common_denominator_u64(&f).unwrap();
            let blow = fracsolve::blowup_chromatic_oracle(&g, &f, nden, 200_000_000).unwrap();
            let brute = fracsolve::set_coloring_bruteforce(&g, &f, nden, 200_000_000)
                .unwrap()
                .is_some();
            let dt = t.elapsed();
            if dt > worst {
                worst = dt;
                eprintln!("new worst {dt:?}: n={n} N={nden} lp={lp}");
            }
            assert_eq!(lp, blow, "blowup mismatch n={n} N={nden} f={:?}", f.values);
            assert_eq!(lp, brute, "brute mismatch n={n} N={nden} f={:?}", f.values);
            count += 1;
        }
    }
    println!("{count} instances agreed; total {:?}, worst {:?}", t0.elapsed(), worst);
}

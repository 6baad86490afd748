fn main() {
    let t0 = std::time::Instant::now();
    for claim in fracdemand::appendix::CLAIM_IDS {
        let lo = fracdemand::appendix::claim_delta_min(claim).unwrap();
        let t = std::time::Instant::now();
        let out = fracdemand::appendix::appendix_verify(claim, lo, 100, 4).unwrap();
        let pts = match &out {
            fracdemand::appendix::AppendixOutcome::Pass { points_checked } => *points_checked,
            _ => panic!("claim {claim} FAILED: {out:?}"),
        };
        println!("{claim}: pass, {pts} points, {:?}", t.elapsed());
    }
    println!("total {:?}", t0.elapsed());
}

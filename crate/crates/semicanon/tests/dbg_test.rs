#[test]
fn dbg_reduce() {
    use semicanon::randgen::*;
    use semicanon::scalar::{GaussianRational as GQ, TolerancePolicy};
    use semicanon::opcanon::reduce_bounded;
    let pol = TolerancePolicy::exact();
    for seed in 0..10u64 {
        let mut rng = rng_from_seed(seed + 400);
        let space = random_space(&mut rng, 6);
        println!("seed {seed} space n={} m={}", space.n, space.m);
        let a: semicanon::kv::KvMatrix<GQ> = random_kv(space, Profile::Bounded, seed);
        match reduce_bounded(&a, &pol) {
            Ok(_) => println!("  ok"),
            Err(e) => { println!("  ERR {e}"); println!("a11 = {:?}", a.a11); }
        }
    }
}

#[test]
fn dbg_weights() {
    use semicanon::randgen::*;
    use semicanon::scalar::{GaussianRational as GQ, Scalar, TolerancePolicy};
    use semicanon::mat::Mat;
    use semicanon::kernel::{schur::*, unitary::*, solve::nullspace, eigen::eigenvalues};
    let pol = TolerancePolicy::exact();
    let mut rng = rng_from_seed(3 + 400);
    let space = random_space(&mut rng, 6);
    let a: semicanon::kv::KvMatrix<GQ> = random_kv(space, Profile::Bounded, 3);
    println!("m = {}", space.m);
    let evs = eigenvalues(&a.a11, &pol).unwrap();
    println!("eigs: {:?}", evs);
    // mimic lower-shape: reversed lex order, upper deflation
    let mut diag = evs.clone();
    diag.reverse();
    let lambda = &diag[0];
    let mut shifted = a.a11.clone();
    for i in 0..space.m { shifted[(i,i)] = shifted[(i,i)].clone() - lambda.clone(); }
    let ns = nullspace(&shifted, &pol);
    println!("kernel dim {}", ns.cols());
    let u = unit_vector_in_span(&ns, &pol).unwrap();
    println!("u found: {:?}", u.iter().map(|x| format!("{x}")).collect::<Vec<_>>());
    // completion complement
    let cols = Mat::from_cols(&[u]);
    let comp = nullspace(&cols.adjoint(), &pol);
    let gs_cols: Vec<Vec<GQ>> = (0..comp.cols()).map(|c| comp.col(c)).collect();
    let (_basis, norms) = gram_schmidt(&gs_cols, &pol);
    println!("complement GS weights: {:?}", norms.iter().map(|x| format!("{x}")).collect::<Vec<_>>());
}

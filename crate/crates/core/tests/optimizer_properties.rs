use littlewood::optimizer::{maximize, objective, SearchBox, DEFAULT_BOX, DEFAULT_TOL};

#[test]
fn maximize_is_deterministic() {
    let first = maximize(&DEFAULT_BOX, DEFAULT_TOL).unwrap();
    for _ in 0..3 {
        let again = maximize(&DEFAULT_BOX, DEFAULT_TOL).unwrap();
        assert_eq!(again.f_star.to_bits(), first.f_star.to_bits());
        assert_eq!(again.b_star.to_bits(), first.b_star.to_bits());
        assert_eq!(again.lambda_star.to_bits(), first.lambda_star.to_bits());
        assert_eq!(again, first);
    }
}

#[test]
fn stationary_at_optimum() {
    let r = maximize(&DEFAULT_BOX, DEFAULT_TOL).unwrap();
    let h = 1e-5;
    let f = |b, l| objective(b, l).unwrap();
    let db = (f(r.b_star + h, r.lambda_star) - f(r.b_star - h, r.lambda_star)) / (2.0 * h);
    let dl = (f(r.b_star, r.lambda_star + h) - f(r.b_star, r.lambda_star - h)) / (2.0 * h);
    assert!(db.abs() <= 1e-3, "df/db = {db}");
    assert!(dl.abs() <= 1e-5, "df/dlambda = {dl}");
    assert!(r.certificate.passed);
    assert!(r.certificate.active_bounds.is_empty());
}

#[test]
fn optimum_dominates_coarse_scan() {
    let r = maximize(&DEFAULT_BOX, DEFAULT_TOL).unwrap();
    let bx: SearchBox = DEFAULT_BOX;
    for i in 0..=40 {
        for j in 0..=40 {
            let b = bx.b.0 + (bx.b.1 - bx.b.0) * i as f64 / 40.0;
            let l = bx.lambda.0 + (bx.lambda.1 - bx.lambda.0) * j as f64 / 40.0;
            assert!(objective(b, l).unwrap() <= r.f_star + 1e-12);
        }
    }
}

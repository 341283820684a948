//! The benchmark inputs are what the benchmark names claim.

use p4_bench::{expression, smooth_expressions, tensors};
use p4_core::poisson::is_poisson;
use p4_core::{Point4, SampleConfig};

#[test]
fn only_quadratic_k_fails_jacobi() {
    let cfg = SampleConfig::default();
    for (name, l) in tensors() {
        let zero = is_poisson(&l, &cfg).unwrap().is_zero();
        assert_eq!(zero, name != "quadratic-k", "{name}");
    }
}

#[test]
fn expressions_evaluate() {
    let p = Point4::new(0.5, -1.0, 1.5, 0.25);
    assert!(expression().eval(&p).unwrap().is_finite());
    for e in smooth_expressions(8) {
        assert!(e.simplify().eval(&p).is_ok(), "{e}");
    }
}

use proptest::prelude::*;

use super::*;
use crate::corpus::{canonical, example2, quadratic_k, random_poisson_tensors};
use crate::expr::{parse, SplitMix64};
use crate::families::s_tensor;
use crate::multivec::{lie_bracket, lie_derivative_mv2, trace, Multivector};
use crate::random::random_polynomial;

fn cfg() -> SampleConfig {
    SampleConfig::default()
}

fn p(s: &str) -> ScalarExpr {
    parse(s).unwrap().simplify()
}

fn mv1(w: [&str; 3], b: &str) -> MV1 {
    MV1::new(Vec3Expr::parse(w).unwrap().simplify(), p(b))
}

#[test]
fn bracket_examples() {
    assert_eq!(bracket(&example2(), &p("x2"), &p("x3")), p("2*x1"));
    assert_eq!(bracket(&canonical(), &p("x1"), &p("x2")), p("1"));
    assert_eq!(bracket(&example2(), &p("x1"), &p("y")), p("x1/2"));
}

#[test]
fn bracket_is_pairing_with_sharp() {
    let mut rng = SplitMix64::new(11);
    for (_, l) in random_poisson_tensors(7).iter().take(4) {
        let f = random_polynomial(&mut rng, 2, 3);
        let g = random_polynomial(&mut rng, 2, 3);
        let direct = bracket(l, &f, &g);
        let paired = OneForm::d(&g).pair(&sharp(l, &OneForm::d(&f)));
        assert!(zero_verdict(&(direct.clone() - paired), &cfg()).unwrap().is_symbolic());
        let comp = crate::multivec::component_bracket(l, &f, &g);
        assert!(zero_verdict(&(direct - comp), &cfg()).unwrap().is_symbolic());
    }
}

#[test]
fn stated_phi_sign_is_the_opposite_one() {
    let l = example2();
    let (f, g) = (p("x1"), p("y"));
    let canon = bracket(&l, &f, &g);
    assert_eq!(bracket_with_phi_sign(&l, &f, &g, signs::BRACKET_PHI_TERM), canon);
    assert_eq!(bracket_with_phi_sign(&l, &f, &g, 1), -canon);
}

#[test]
fn sharp_examples() {
    assert_eq!(sharp(&canonical(), &OneForm::dy()), mv1(["0", "0", "-1"], "0"));
    assert_eq!(sharp(&example2(), &OneForm::d(&p("x1^2"))), mv1(["0", "0", "0"], "x1^2"));
}

#[test]
fn hamiltonian_examples() {
    let l = example2();
    assert_eq!(hamiltonian(&l, &p("-y")), MV1::new(l.phi.clone(), ScalarExpr::zero()));
    assert_eq!(hamiltonian(&canonical(), &p("x1")), MV1::basis(1));
    assert_eq!(hamiltonian(&l, &p("y")), mv1(["-x1/2", "-x2/4", "-x3/4"], "0"));
}

#[test]
fn hamiltonian_derives_bracket() {
    let l = quadratic_k();
    let (f, g) = (p("x1*y + x3"), p("x2^2 - y"));
    assert_eq!(hamiltonian(&l, &f).apply(&g).simplify(), bracket(&l, &f, &g));
}

#[test]
fn jacobiator_examples() {
    assert!(jacobiator(&example2(), &p("x2"), &p("x3"), &p("y")).is_zero_literal());
    assert!(jacobiator(&canonical(), &p("x1"), &p("x2"), &p("x3")).is_zero_literal());
    let l = quadratic_k();
    assert_eq!(jacobiator(&l, &p("x1"), &p("x2"), &p("x3")), p("-x1^2*x2"));
    assert_eq!(jacobiator(&l, &p("x2"), &p("x3"), &p("y")), p("-2*x1*x2*y"));
    let jac = coordinate_jacobiators(&l);
    assert!(jac[1].is_zero_literal() && jac[2].is_zero_literal());
}

#[test]
fn residual_examples() {
    let (r0, r) = jacobi_residuals(&example2());
    assert!(r0.is_zero_literal());
    assert_eq!(r, Vec3Expr::zero());
    let (r0, r) = jacobi_residuals(&canonical());
    assert!(r0.is_zero_literal());
    assert_eq!(r, Vec3Expr::zero());
    let (r0, _) = jacobi_residuals(&quadratic_k());
    assert_eq!(r0, p("x1^2*x2"));
}

#[test]
fn is_poisson_examples() {
    assert!(is_poisson(&example2(), &cfg()).unwrap().is_symbolic());
    let v = is_poisson(&quadratic_k(), &cfg()).unwrap();
    let w = v.witness().expect("witness");
    assert!((w.x1 * w.x1 * w.x2).abs() > 0.0);
    assert!(is_poisson(&s_tensor(&p("x1 + y"), &p("x2")), &cfg()).unwrap().is_zero());
}

#[test]
fn casimir_examples() {
    let l = MV2::new(Vec3Expr::parse(["x2", "x1*x3", "y"]).unwrap(), Vec3Expr::zero());
    assert!(is_casimir(&l, &p("y"), &cfg()).unwrap().is_symbolic());
    assert!(!is_casimir(&canonical(), &p("x1"), &cfg()).unwrap().is_zero());
}

#[test]
fn rank_examples() {
    let l = example2();
    assert_eq!(rank_at(&l, &Point4::new(1.0, 0.0, 0.0, 0.0)).unwrap().rank, 4);
    let r = rank_at(&l, &Point4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
    assert_eq!(r.rank, 2);
    assert_eq!(r.norm_sq, 1.0 / 16.0);
    assert_eq!(rank_at(&l, &Point4::new(0.0, 0.0, 0.0, 7.0)).unwrap().rank, 0);
}

#[test]
fn region_examples() {
    let l = example2();
    assert_eq!(region_at(&l, &Point4::new(1.0, 0.0, 0.0, 0.0)).unwrap(), Region::Positive);
    assert_eq!(region_at(&l, &Point4::new(0.0, 1.0, 2.0, 3.0)).unwrap(), Region::Boundary);
    let l = MV2::parse(["0", "0", "1"], ["0", "0", "-1"]).unwrap();
    assert_eq!(region_at(&l, &Point4::new(0.3, -1.0, 2.0, 5.0)).unwrap(), Region::Negative);
}

#[test]
fn modular_examples() {
    assert_eq!(modular(&example2()), mv1(["0", "0", "0"], "-1"));
    assert_eq!(modular(&canonical()), MV1::zero());
    assert_eq!(modular(&quadratic_k()), mv1(["-2*x1", "-x2", "x1 + 2*x3"], "y"));
}

#[test]
fn rank_agrees_with_matrix_rank() {
    let mut rng = SplitMix64::new(17);
    let mut tensors: Vec<MV2> = random_poisson_tensors(23).into_iter().map(|(_, l)| l).collect();
    tensors.push(example2());
    for l in &tensors {
        for _ in 0..8 {
            let pt = Point4::new(
                rng.range_i64(-2, 2) as f64,
                rng.range_i64(-2, 2) as f64,
                rng.range_i64(-2, 2) as f64,
                rng.range_i64(-2, 2) as f64,
            );
            let r = rank_at(l, &pt).unwrap();
            let m = l.eval_matrix(&pt).unwrap();
            assert_eq!(matrix_rank(&m, 1e-9) as u8, r.rank, "{l:?} at {pt}");
        }
    }
}

#[test]
fn candidate_cache_matches_recomputation() {
    let c = PoissonCandidate::new("example2", example2());
    let first = c.is_poisson().unwrap();
    let cached = c.verdicts().unwrap().clone();
    assert_eq!(cached.0, residual_verdict(&c.tensor, c.config()).unwrap());
    assert_eq!(cached.1, jacobiator_verdict(&c.tensor, c.config()).unwrap());
    assert_eq!(c.clone().is_poisson().unwrap(), first);
    let bad = PoissonCandidate::new("quadratic-k", quadratic_k());
    assert!(!bad.is_poisson().unwrap().is_zero());
}

fn corpus() -> Vec<MV2> {
    let mut v: Vec<MV2> = random_poisson_tensors(0xA5A5).into_iter().map(|(_, l)| l).collect();
    v.push(example2());
    v.push(canonical());
    v
}

#[test]
fn residuals_agree_with_jacobiators() {
    let mut rng = SplitMix64::new(29);
    let mut tensors = corpus();
    tensors.push(quadratic_k());
    for _ in 0..6 {
        tensors.push(MV2::new(
            crate::random::random_vec3(&mut rng, 1, 3),
            crate::random::random_vec3(&mut rng, 1, 3),
        ));
    }
    for l in &tensors {
        let r = residual_verdict(l, &cfg()).unwrap();
        let j = jacobiator_verdict(l, &cfg()).unwrap();
        assert_eq!(r.is_zero(), j.is_zero(), "{l:?}");
    }
}

#[test]
fn modular_field_is_a_traceless_automorphism() {
    for l in corpus() {
        let z = modular(&l);
        let lz = lie_derivative_mv2(&z, &l);
        assert!(Multivector::G2(lz).zero_verdict(&cfg()).unwrap().is_zero());
        let tz = trace(&Multivector::G1(z.clone())).unwrap().into_scalar();
        assert!(zero_verdict(&tz, &cfg()).unwrap().is_zero());
        let tangency = OneForm::d(&l.psi_dot_phi()).pair(&z);
        assert!(zero_verdict(&tangency, &cfg()).unwrap().is_zero());
    }
}

#[test]
fn hamiltonian_homomorphism() {
    let mut rng = SplitMix64::new(31);
    for l in corpus() {
        let f = random_polynomial(&mut rng, 2, 3);
        let g = random_polynomial(&mut rng, 2, 3);
        let lhs = lie_bracket(&hamiltonian(&l, &f), &hamiltonian(&l, &g));
        let rhs = hamiltonian(&l, &bracket(&l, &f, &g));
        let d = Multivector::G1(lhs).sub(&Multivector::G1(rhs));
        assert!(d.zero_verdict(&cfg()).unwrap().is_zero(), "{l:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bracket_antisymmetry_and_leibniz(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let l = MV2::new(
            crate::random::random_vec3(&mut rng, 2, 3),
            crate::random::random_vec3(&mut rng, 2, 3),
        );
        let f = random_polynomial(&mut rng, 2, 3);
        let g = random_polynomial(&mut rng, 2, 3);
        let h = random_polynomial(&mut rng, 2, 3);
        let anti = bracket(&l, &f, &g) + bracket(&l, &g, &f);
        prop_assert!(zero_verdict(&anti, &cfg()).unwrap().is_zero());
        let leibniz = bracket(&l, &f, &(&g * &h)) - &g * bracket(&l, &f, &h) - &h * bracket(&l, &f, &g);
        prop_assert!(zero_verdict(&leibniz, &cfg()).unwrap().is_zero());
    }

    #[test]
    fn rank_four_iff_open_region(seed in any::<u64>(), c in proptest::array::uniform4(-2i64..=2)) {
        let mut rng = SplitMix64::new(seed);
        let l = MV2::new(
            crate::random::random_vec3(&mut rng, 1, 2),
            crate::random::random_vec3(&mut rng, 1, 2),
        );
        let pt = Point4::new(c[0] as f64, c[1] as f64, c[2] as f64, c[3] as f64);
        let rank = rank_at(&l, &pt).unwrap().rank;
        let region = region_at(&l, &pt).unwrap();
        prop_assert_eq!(rank == 4, region != Region::Boundary);
    }
}


//! Random Poisson tensors built from the family constructors, used by the
//! property tests and the identity audit.

use crate::expr::{ScalarExpr, SplitMix64, Var};
use crate::families::{casimir_family, two_casimir_family};
use crate::maps::{pushforward, Diffeo4};
use crate::multivec::MV2;
use crate::random::{random_polynomial, random_polynomial_in, random_spatial_polynomial};
use crate::veccalc::{grad, Vec3Expr};

/// The linear tensor `Ψ = (2x1, 0, 0)`, `Φ = (x1/2, x2/4, x3/4)`.
pub fn example2() -> MV2 {
    MV2::parse(["2*x1", "0", "0"], ["x1/2", "x2/4", "x3/4"]).unwrap()
}

/// `Ψ = Φ = e3`, the Darboux tensor `∂1∧∂2 + ∂3∧∂y`.
pub fn canonical() -> MV2 {
    MV2::parse(["0", "0", "1"], ["0", "0", "1"]).unwrap()
}

/// `Ψ = (−x1x2, x1x3, 0)`, `Φ = (−yx1, −yx2, yx3)`.
pub fn quadratic_k() -> MV2 {
    MV2::parse(["-x1*x2", "x1*x3", "0"], ["-y*x1", "-y*x2", "y*x3"]).unwrap()
}

/// Symplectic tensor with vanishing modular field: `Ψ = (0,−1,0)`, `Φ = (0,1,0)`.
pub fn liouville() -> MV2 {
    MV2::parse(["0", "-1", "0"], ["0", "1", "0"]).unwrap()
}

/// Quadratic-Casimir tensor with `M = diag(1,2,0)`, `α = e1`, `b = 3`,
/// `A = (0,1,1)`, `c = 2`; Casimirs `½x1² + x2² + x1y + 3y²/2` and `x2 + x3 − 2y`.
pub fn casimir_quadratic() -> crate::families::QuadraticCasimir {
    use crate::veccalc::Mat3Expr;
    let int = ScalarExpr::int;
    crate::families::quadratic_casimir(
        &Mat3Expr::diag([int(1), int(2), int(0)]),
        &Vec3Expr::from_ints([1, 0, 0]),
        &int(3),
        &Vec3Expr::from_ints([0, 1, 1]),
        &int(2),
    )
    .expect("diagonal matrix is symmetric")
}

/// Named tensors shared by the catalog and the identity audit.
pub fn named_tensors() -> Vec<(String, MV2)> {
    let parse = |psi: [&str; 3], phi: [&str; 3]| MV2::parse(psi, phi).unwrap();
    vec![
        ("example2-linear".into(), example2()),
        ("quadratic-k".into(), quadratic_k()),
        ("canonical-symplectic".into(), canonical()),
        ("liouville-symplectic".into(), liouville()),
        ("rank2-gradient".into(), parse(["x1", "x2", "x3"], ["0", "0", "0"])),
        ("casimir-quadratic".into(), casimir_quadratic().tensor),
        ("dirac-canonical".into(), parse(["0", "0", "0"], ["0", "0", "1"])),
        ("s-tensor-sample".into(), parse(["0", "-1", "0"], ["0", "0", "1"])),
        ("rank2-linear".into(), parse(["0", "0", "x3 + y"], ["x3 + y", "0", "0"])),
    ]
}

/// Pushforward of `l` by `f` expressed in target coordinates, given the
/// inverse map as a substitution.
pub fn transport(l: &MV2, f: &Diffeo4, inverse: &[Option<ScalarExpr>; 4]) -> MV2 {
    let composed = pushforward(l, f);
    MV2::new(
        composed.psi.substitute(inverse).simplify(),
        composed.phi.substitute(inverse).simplify(),
    )
}

fn unimodular(rng: &mut SplitMix64) -> ([[i64; 4]; 4], [[i64; 4]; 4]) {
    // product of an upper and a lower unit-triangular matrix
    let mut u = [[0i64; 4]; 4];
    let mut l = [[0i64; 4]; 4];
    for i in 0..4 {
        u[i][i] = 1;
        l[i][i] = 1;
        for j in i + 1..4 {
            u[i][j] = rng.range_i64(-1, 1);
            l[j][i] = rng.range_i64(-1, 1);
        }
    }
    let a = matmul(&u, &l);
    let inv = matmul(&unit_triangular_inverse(&l, false), &unit_triangular_inverse(&u, true));
    (a, inv)
}

fn matmul(a: &[[i64; 4]; 4], b: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

fn unit_triangular_inverse(m: &[[i64; 4]; 4], upper: bool) -> [[i64; 4]; 4] {
    let mut inv = [[0i64; 4]; 4];
    for c in 0..4 {
        // solve m·x = e_c by substitution
        let mut x = [0i64; 4];
        let order: Vec<usize> = if upper { (0..4).rev().collect() } else { (0..4).collect() };
        for &i in &order {
            let mut s = if i == c { 1 } else { 0 };
            for j in 0..4 {
                if j != i {
                    s -= m[i][j] * x[j];
                }
            }
            x[i] = s;
        }
        for i in 0..4 {
            inv[i][c] = x[i];
        }
    }
    inv
}

fn linear_map(a: &[[i64; 4]; 4]) -> [ScalarExpr; 4] {
    std::array::from_fn(|i| {
        let terms = (0..4)
            .filter(|&j| a[i][j] != 0)
            .map(|j| ScalarExpr::int(a[i][j]) * ScalarExpr::var(Var::from_index(j)))
            .collect();
        ScalarExpr::add_all(terms).simplify()
    })
}

/// `F(u) = A·u` for a random unimodular integer `A`, with its inverse.
pub fn random_linear_diffeo(rng: &mut SplitMix64) -> (Diffeo4, [Option<ScalarExpr>; 4]) {
    let (a, inv) = unimodular(rng);
    let f = linear_map(&a);
    let g = linear_map(&inv);
    let [s1, s2, s3, h] = f;
    (
        Diffeo4::new(Vec3Expr::new(s1, s2, s3), h),
        g.map(Some),
    )
}

/// Triangular map `(x1, x2 + p(x1), x3 + q(x1,x2), y + r(x))` and its inverse.
pub fn random_triangular_diffeo(rng: &mut SplitMix64) -> (Diffeo4, [Option<ScalarExpr>; 4]) {
    let p = random_polynomial_in(rng, 2, 2, &[Var::X1]);
    let q = random_polynomial_in(rng, 2, 2, &[Var::X1, Var::X2]);
    let r = random_spatial_polynomial(rng, 2, 2);
    let f = Diffeo4::new(
        Vec3Expr::new(ScalarExpr::x1(), ScalarExpr::x2() + &p, ScalarExpr::x3() + &q),
        ScalarExpr::y() + &r,
    );
    let x1 = ScalarExpr::x1();
    let x2 = (ScalarExpr::x2() - &p).simplify();
    let sub2 = [Some(x1.clone()), Some(x2.clone()), None, None];
    let x3 = (ScalarExpr::x3() - q.substitute(&sub2)).simplify();
    let sub3 = [Some(x1.clone()), Some(x2.clone()), Some(x3.clone()), None];
    let y = (ScalarExpr::y() - r.substitute(&sub3)).simplify();
    (f, [Some(x1), Some(x2), Some(x3), Some(y)])
}

/// Ten Poisson tensors: three two-Casimir tensors, two gradient tensors
/// `f∇k ∂x∧∂x` with Casimirs `k, y`, three pushed-forward copies of the
/// linear example and two pushed-forward symplectic tensors.
pub fn random_poisson_tensors(seed: u64) -> Vec<(String, MV2)> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::new();
    for i in 0..3 {
        let k1 = random_polynomial(&mut rng, 2, 3);
        let k2 = random_polynomial(&mut rng, 2, 3);
        let f = random_polynomial(&mut rng, 1, 2);
        out.push((format!("two-casimir-{i}"), two_casimir_family(&k1, &k2, &f)));
    }
    for i in 0..2 {
        let k = random_spatial_polynomial(&mut rng, 2, 3);
        let f = random_polynomial(&mut rng, 1, 2);
        let fam = casimir_family(&ScalarExpr::y(), &grad(&k).scale(&f), &ScalarExpr::zero());
        out.push((format!("gradient-{i}"), fam.tensor));
    }
    for i in 0..3 {
        let (f, inv) = random_linear_diffeo(&mut rng);
        out.push((format!("linear-image-{i}"), transport(&example2(), &f, &inv)));
    }
    for (i, base) in [canonical(), liouville()].iter().enumerate() {
        let (f, inv) = random_triangular_diffeo(&mut rng);
        out.push((format!("symplectic-image-{i}"), transport(base, &f, &inv)));
    }
    out
}

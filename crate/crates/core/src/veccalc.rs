//! 3-vector functions on R⁴ and the operators ∇, div, rot, ×, ·, ∂/∂y.
//!
//! All spatial operators act on `(x1, x2, x3)` only; `y` is a parameter.

use std::fmt;
use std::ops;

use crate::expr::{zero_verdict_all, Point4, SampleConfig, ScalarExpr, Var, ZeroVerdict};
use crate::Result;

/// A triple of scalar functions.
#[derive(Clone, Debug, PartialEq)]
pub struct Vec3Expr(pub [ScalarExpr; 3]);

impl Vec3Expr {
    pub fn new(c1: ScalarExpr, c2: ScalarExpr, c3: ScalarExpr) -> Self {
        Vec3Expr([c1, c2, c3])
    }

    pub fn zero() -> Self {
        Vec3Expr::from_ints([0, 0, 0])
    }

    pub fn from_ints(c: [i64; 3]) -> Self {
        Vec3Expr(c.map(ScalarExpr::int))
    }

    /// Unit vector along `x_{i+1}`.
    pub fn unit(i: usize) -> Self {
        let mut c = [0; 3];
        c[i] = 1;
        Vec3Expr::from_ints(c)
    }

    /// The position vector `x = (x1, x2, x3)`.
    pub fn position() -> Self {
        Vec3Expr::new(ScalarExpr::x1(), ScalarExpr::x2(), ScalarExpr::x3())
    }

    pub fn parse(parts: [&str; 3]) -> Result<Self> {
        Ok(Vec3Expr([
            crate::expr::parse(parts[0])?,
            crate::expr::parse(parts[1])?,
            crate::expr::parse(parts[2])?,
        ]))
    }

    pub fn map(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> Self {
        Vec3Expr([f(&self.0[0]), f(&self.0[1]), f(&self.0[2])])
    }

    pub fn zip(&self, other: &Vec3Expr, f: impl Fn(&ScalarExpr, &ScalarExpr) -> ScalarExpr) -> Self {
        Vec3Expr([
            f(&self.0[0], &other.0[0]),
            f(&self.0[1], &other.0[1]),
            f(&self.0[2], &other.0[2]),
        ])
    }

    pub fn simplify(&self) -> Self {
        self.map(|c| c.simplify())
    }

    pub fn scale(&self, s: &ScalarExpr) -> Self {
        self.map(|c| s * c)
    }

    pub fn dot(&self, other: &Vec3Expr) -> ScalarExpr {
        ScalarExpr::add_all(vec![
            &self.0[0] * &other.0[0],
            &self.0[1] * &other.0[1],
            &self.0[2] * &other.0[2],
        ])
    }

    pub fn cross(&self, other: &Vec3Expr) -> Vec3Expr {
        let [a1, a2, a3] = &self.0;
        let [b1, b2, b3] = &other.0;
        Vec3Expr::new(a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
    }

    pub fn norm_sq(&self) -> ScalarExpr {
        self.dot(self)
    }

    /// Componentwise ∂/∂v.
    pub fn diff(&self, v: Var) -> Vec3Expr {
        self.map(|c| c.diff(v))
    }

    pub fn d_dy(&self) -> Vec3Expr {
        self.diff(Var::Y)
    }

    pub fn substitute(&self, map: &[Option<ScalarExpr>; 4]) -> Vec3Expr {
        self.map(|c| c.substitute(map))
    }

    pub fn eval(&self, p: &Point4) -> Result<[f64; 3]> {
        Ok([self.0[0].eval(p)?, self.0[1].eval(p)?, self.0[2].eval(p)?])
    }

    pub fn zero_verdict(&self, cfg: &SampleConfig) -> Result<ZeroVerdict> {
        zero_verdict_all(self.0.iter(), cfg)
    }

    pub fn components(&self) -> &[ScalarExpr; 3] {
        &self.0
    }

    pub fn to_strings(&self) -> [String; 3] {
        [
            self.0[0].to_string(),
            self.0[1].to_string(),
            self.0[2].to_string(),
        ]
    }
}

impl fmt::Display for Vec3Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

impl ops::Index<usize> for Vec3Expr {
    type Output = ScalarExpr;
    fn index(&self, i: usize) -> &ScalarExpr {
        &self.0[i]
    }
}

impl ops::Add<&Vec3Expr> for &Vec3Expr {
    type Output = Vec3Expr;
    fn add(self, rhs: &Vec3Expr) -> Vec3Expr {
        self.zip(rhs, |a, b| a + b)
    }
}

impl ops::Sub<&Vec3Expr> for &Vec3Expr {
    type Output = Vec3Expr;
    fn sub(self, rhs: &Vec3Expr) -> Vec3Expr {
        self.zip(rhs, |a, b| a - b)
    }
}

impl ops::Neg for &Vec3Expr {
    type Output = Vec3Expr;
    fn neg(self) -> Vec3Expr {
        self.map(|c| -c)
    }
}

impl ops::Add for Vec3Expr {
    type Output = Vec3Expr;
    fn add(self, rhs: Vec3Expr) -> Vec3Expr {
        &self + &rhs
    }
}

impl ops::Sub for Vec3Expr {
    type Output = Vec3Expr;
    fn sub(self, rhs: Vec3Expr) -> Vec3Expr {
        &self - &rhs
    }
}

impl ops::Neg for Vec3Expr {
    type Output = Vec3Expr;
    fn neg(self) -> Vec3Expr {
        -&self
    }
}

/// A 3×3 matrix of scalar functions, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat3Expr(pub [[ScalarExpr; 3]; 3]);

impl Mat3Expr {
    pub fn from_fn(f: impl Fn(usize, usize) -> ScalarExpr) -> Self {
        Mat3Expr(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn zero() -> Self {
        Mat3Expr::from_fn(|_, _| ScalarExpr::zero())
    }

    pub fn identity() -> Self {
        Mat3Expr::from_fn(|i, j| ScalarExpr::int((i == j) as i64))
    }

    pub fn diag(d: [ScalarExpr; 3]) -> Self {
        Mat3Expr::from_fn(|i, j| {
            if i == j {
                d[i].clone()
            } else {
                ScalarExpr::zero()
            }
        })
    }

    /// The hat map: `hat(v)·w = v × w`.
    pub fn hat(v: &Vec3Expr) -> Self {
        let z = ScalarExpr::zero;
        let [a, b, c] = &v.0;
        Mat3Expr([
            [z(), -c, b.clone()],
            [c.clone(), z(), -a],
            [-b, a.clone(), z()],
        ])
    }

    pub fn get(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.0[i][j]
    }

    pub fn row(&self, i: usize) -> Vec3Expr {
        Vec3Expr(self.0[i].clone())
    }

    pub fn col(&self, j: usize) -> Vec3Expr {
        Vec3Expr(std::array::from_fn(|i| self.0[i][j].clone()))
    }

    pub fn transpose(&self) -> Self {
        Mat3Expr::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn mul_vec(&self, v: &Vec3Expr) -> Vec3Expr {
        Vec3Expr(std::array::from_fn(|i| self.row(i).dot(v)))
    }

    pub fn mul(&self, other: &Mat3Expr) -> Mat3Expr {
        Mat3Expr::from_fn(|i, j| self.row(i).dot(&other.col(j)))
    }

    pub fn add(&self, other: &Mat3Expr) -> Mat3Expr {
        Mat3Expr::from_fn(|i, j| &self.0[i][j] + &other.0[i][j])
    }

    pub fn sub(&self, other: &Mat3Expr) -> Mat3Expr {
        Mat3Expr::from_fn(|i, j| &self.0[i][j] - &other.0[i][j])
    }

    pub fn scale(&self, s: &ScalarExpr) -> Mat3Expr {
        Mat3Expr::from_fn(|i, j| s * &self.0[i][j])
    }

    pub fn trace(&self) -> ScalarExpr {
        ScalarExpr::add_all(vec![
            self.0[0][0].clone(),
            self.0[1][1].clone(),
            self.0[2][2].clone(),
        ])
    }

    pub fn simplify(&self) -> Self {
        Mat3Expr::from_fn(|i, j| self.0[i][j].simplify())
    }

    pub fn det(&self) -> ScalarExpr {
        self.row(0).dot(&self.row(1).cross(&self.row(2)))
    }

    /// Transposed cofactor matrix: `M·adj(M) = det(M)·I`.
    pub fn adjugate(&self) -> Self {
        let cof = Mat3Expr([
            self.row(1).cross(&self.row(2)).0,
            self.row(2).cross(&self.row(0)).0,
            self.row(0).cross(&self.row(1)).0,
        ]);
        cof.transpose()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| (&self.0[i][j] - &self.0[j][i]).simplify().is_zero_literal())
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = &ScalarExpr> {
        self.0.iter().flat_map(|r| r.iter())
    }

    pub fn zero_verdict(&self, cfg: &SampleConfig) -> Result<ZeroVerdict> {
        zero_verdict_all(self.entries(), cfg)
    }

    pub fn eval(&self, p: &Point4) -> Result<[[f64; 3]; 3]> {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.0[i][j].eval(p)?;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Mat3Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}; {}]", self.row(0), self.row(1), self.row(2))
    }
}

/// Spatial gradient `(∂1 f, ∂2 f, ∂3 f)`.
pub fn grad(f: &ScalarExpr) -> Vec3Expr {
    Vec3Expr::new(f.diff(Var::X1), f.diff(Var::X2), f.diff(Var::X3))
}

pub fn div(v: &Vec3Expr) -> ScalarExpr {
    ScalarExpr::add_all(vec![
        v.0[0].diff(Var::X1),
        v.0[1].diff(Var::X2),
        v.0[2].diff(Var::X3),
    ])
    .simplify()
}

pub fn rot(v: &Vec3Expr) -> Vec3Expr {
    let [a1, a2, a3] = &v.0;
    Vec3Expr::new(
        a3.diff(Var::X2) - a2.diff(Var::X3),
        a1.diff(Var::X3) - a3.diff(Var::X1),
        a2.diff(Var::X1) - a1.diff(Var::X2),
    )
    .simplify()
}

pub fn d_dy(v: &Vec3Expr) -> Vec3Expr {
    v.d_dy()
}

pub fn dot(a: &Vec3Expr, b: &Vec3Expr) -> ScalarExpr {
    a.dot(b)
}

pub fn cross(a: &Vec3Expr, b: &Vec3Expr) -> Vec3Expr {
    a.cross(b)
}

/// Spatial Jacobian, entry `(i, j) = ∂S_i/∂x_j`.
pub fn jacobian_x(s: &Vec3Expr) -> Mat3Expr {
    Mat3Expr::from_fn(|i, j| s.0[i].diff(Var::SPATIAL[j]))
}

/// Derivative of `f` along the vector field `w·∂x + b·∂y`.
pub fn directional(f: &ScalarExpr, w: &Vec3Expr, b: &ScalarExpr) -> ScalarExpr {
    (grad(f).dot(w) + b * &f.diff(Var::Y)).simplify()
}

//! Symbolic scalar expressions in the coordinates `(x1, x2, x3, y)`.
//!
//! Expressions are immutable trees behind an `Arc`, so cloning is cheap and
//! values can be shared across threads. [`ScalarExpr::simplify`] maps a tree
//! to a canonical rendering of its expanded normal form (see `poly`), and
//! [`zero_verdict`] decides whether an expression vanishes, symbolically when
//! the normal form is the literal zero and by deterministic sampling
//! otherwise.

mod eval;
mod parse;
pub(crate) mod poly;
mod render;
mod verdict;

use std::fmt;
use std::ops;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use eval::Point4;
pub use parse::parse;
pub use verdict::{
    combine_verdicts, first_vanishing_sample, zero_verdict, zero_verdict_all, SampleConfig,
    SplitMix64, ZeroVerdict, DEFAULT_SAMPLES, DEFAULT_SEED,
};

use poly::Poly;

pub type Rational = num_rational::BigRational;

/// Coordinate variables of R⁴. `y` is the distinguished fourth coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X1,
    X2,
    X3,
    Y,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X1, Var::X2, Var::X3, Var::Y];
    pub const SPATIAL: [Var; 3] = [Var::X1, Var::X2, Var::X3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::X3 => "x3",
            Var::Y => "y",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "x1" => Some(Var::X1),
            "x2" => Some(Var::X2),
            "x3" => Some(Var::X3),
            "y" => Some(Var::Y),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Elementary functions accepted by the grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(Rational),
    Var(Var),
    Add(Vec<ScalarExpr>),
    Mul(Vec<ScalarExpr>),
    Div(ScalarExpr, ScalarExpr),
    Pow(ScalarExpr, i32),
    Neg(ScalarExpr),
    Fn(Func, ScalarExpr),
}

struct Inner {
    node: Node,
    // Normal form, computed on first use. `None` inside means the tree has a
    // literal division by zero and has no normal form.
    normal: OnceLock<Option<Arc<Poly>>>,
}

/// A symbolic smooth function of `(x1, x2, x3, y)`.
#[derive(Clone)]
pub struct ScalarExpr(Arc<Inner>);

impl PartialEq for ScalarExpr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.node == other.0.node
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarExpr({})", self)
    }
}

impl ScalarExpr {
    pub fn from_node(node: Node) -> Self {
        ScalarExpr(Arc::new(Inner {
            node,
            normal: OnceLock::new(),
        }))
    }

    pub(crate) fn with_normal(node: Node, normal: Poly) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(Some(Arc::new(normal)));
        ScalarExpr(Arc::new(Inner { node, normal: cell }))
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn constant(value: Rational) -> Self {
        Self::from_node(Node::Const(value))
    }

    pub fn int(value: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(value)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn var(v: Var) -> Self {
        Self::from_node(Node::Var(v))
    }

    pub fn x1() -> Self {
        Self::var(Var::X1)
    }

    pub fn x2() -> Self {
        Self::var(Var::X2)
    }

    pub fn x3() -> Self {
        Self::var(Var::X3)
    }

    pub fn y() -> Self {
        Self::var(Var::Y)
    }

    pub fn add_all(terms: Vec<ScalarExpr>) -> Self {
        match terms.len() {
            0 => Self::zero(),
            1 => terms.into_iter().next().unwrap(),
            _ => Self::from_node(Node::Add(terms)),
        }
    }

    pub fn mul_all(factors: Vec<ScalarExpr>) -> Self {
        match factors.len() {
            0 => Self::one(),
            1 => factors.into_iter().next().unwrap(),
            _ => Self::from_node(Node::Mul(factors)),
        }
    }

    pub fn div(num: ScalarExpr, den: ScalarExpr) -> Self {
        Self::from_node(Node::Div(num, den))
    }

    pub fn pow(&self, exponent: i32) -> Self {
        Self::from_node(Node::Pow(self.clone(), exponent))
    }

    pub fn apply(func: Func, arg: ScalarExpr) -> Self {
        Self::from_node(Node::Fn(func, arg))
    }

    pub fn sin(&self) -> Self {
        Self::apply(Func::Sin, self.clone())
    }

    pub fn cos(&self) -> Self {
        Self::apply(Func::Cos, self.clone())
    }

    pub fn exp(&self) -> Self {
        Self::apply(Func::Exp, self.clone())
    }

    pub fn ln(&self) -> Self {
        Self::apply(Func::Ln, self.clone())
    }

    pub fn sqrt(&self) -> Self {
        Self::apply(Func::Sqrt, self.clone())
    }

    /// Literal constant value, if this node is a constant.
    pub fn as_rational(&self) -> Option<&Rational> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero_literal(&self) -> bool {
        self.as_rational().is_some_and(|c| c.is_zero())
    }

    pub fn is_one_literal(&self) -> bool {
        self.as_rational().is_some_and(|c| c.is_one())
    }

    /// Constant value after simplification, if the expression is constant.
    pub fn constant_value(&self) -> Option<Rational> {
        self.normal_form().and_then(|p| p.constant_value())
    }

    pub fn to_f64_constant(&self) -> Option<f64> {
        self.constant_value().and_then(|c| c.to_f64())
    }

    pub(crate) fn normal_form(&self) -> Option<Arc<Poly>> {
        self.0
            .normal
            .get_or_init(|| poly::from_expr(self).map(Arc::new))
            .clone()
    }

    /// Canonical form: expanded sum of monomials with exact rational
    /// coefficients, identical additive terms combined. Idempotent.
    pub fn simplify(&self) -> ScalarExpr {
        match self.normal_form() {
            Some(p) => poly::to_expr(&p),
            None => self.map_children(|c| c.simplify()),
        }
    }

    fn map_children(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> ScalarExpr {
        let node = match self.node() {
            Node::Const(_) | Node::Var(_) => return self.clone(),
            Node::Add(ts) => Node::Add(ts.iter().map(&f).collect()),
            Node::Mul(ts) => Node::Mul(ts.iter().map(&f).collect()),
            Node::Div(a, b) => Node::Div(f(a), f(b)),
            Node::Pow(a, n) => Node::Pow(f(a), *n),
            Node::Neg(a) => Node::Neg(f(a)),
            Node::Fn(g, a) => Node::Fn(*g, f(a)),
        };
        Self::from_node(node)
    }

    /// Exact partial derivative, returned simplified.
    pub fn diff(&self, v: Var) -> ScalarExpr {
        match self.normal_form() {
            Some(p) => poly::to_expr(&p.diff(v)),
            None => self.diff_tree(v).simplify(),
        }
    }

    /// Rule-based derivative on the raw tree, used when no normal form exists.
    fn diff_tree(&self, v: Var) -> ScalarExpr {
        match self.node() {
            Node::Const(_) => Self::zero(),
            Node::Var(w) => {
                if *w == v {
                    Self::one()
                } else {
                    Self::zero()
                }
            }
            Node::Add(ts) => Self::add_all(ts.iter().map(|t| t.diff_tree(v)).collect()),
            Node::Mul(fs) => {
                let mut terms = Vec::with_capacity(fs.len());
                for i in 0..fs.len() {
                    let mut factors: Vec<ScalarExpr> = fs.clone();
                    factors[i] = fs[i].diff_tree(v);
                    terms.push(Self::mul_all(factors));
                }
                Self::add_all(terms)
            }
            Node::Div(a, b) => {
                let num = a.diff_tree(v) * b - a * &b.diff_tree(v);
                Self::div(num, b.pow(2))
            }
            Node::Pow(b, n) => Self::int(*n as i64) * &b.pow(n - 1) * &b.diff_tree(v),
            Node::Neg(a) => -a.diff_tree(v),
            Node::Fn(g, a) => {
                let da = a.diff_tree(v);
                let outer = match g {
                    Func::Sin => a.cos(),
                    Func::Cos => -a.sin(),
                    Func::Exp => a.exp(),
                    Func::Ln => Self::div(Self::one(), a.clone()),
                    Func::Sqrt => Self::div(Self::one(), Self::int(2) * &a.sqrt()),
                };
                outer * &da
            }
        }
    }

    /// Simultaneous substitution of the coordinates. `None` keeps the variable.
    pub fn substitute(&self, map: &[Option<ScalarExpr>; 4]) -> ScalarExpr {
        match self.node() {
            Node::Var(v) => match &map[v.index()] {
                Some(e) => e.clone(),
                None => self.clone(),
            },
            Node::Const(_) => self.clone(),
            _ => self.map_children(|c| c.substitute(map)),
        }
    }

    /// Substitute a numeric point (converted to nearby rationals) and simplify.
    pub fn at_point(&self, p: &Point4) -> ScalarExpr {
        let map = p
            .coords()
            .map(|c| Some(ScalarExpr::constant(rational_from_f64(c))));
        self.substitute(&map).simplify()
    }

    /// Number of tree nodes, a rough size measure.
    pub fn size(&self) -> usize {
        1 + match self.node() {
            Node::Const(_) | Node::Var(_) => 0,
            Node::Add(ts) | Node::Mul(ts) => ts.iter().map(|t| t.size()).sum(),
            Node::Div(a, b) => a.size() + b.size(),
            Node::Pow(a, _) | Node::Neg(a) | Node::Fn(_, a) => a.size(),
        }
    }

    /// Total degree when the normal form is a polynomial in the coordinates.
    pub fn polynomial_degree(&self) -> Option<u32> {
        self.normal_form().and_then(|p| p.polynomial_degree())
    }

    /// Degree if every monomial has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        self.normal_form().and_then(|p| p.homogeneous_degree())
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render::render(self))
    }
}

impl std::str::FromStr for ScalarExpr {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl From<i64> for ScalarExpr {
    fn from(v: i64) -> Self {
        ScalarExpr::int(v)
    }
}

impl From<Var> for ScalarExpr {
    fn from(v: Var) -> Self {
        ScalarExpr::var(v)
    }
}

/// Nearest rational with denominator at most `max_den`.
pub fn limit_denominator(value: &Rational, max_den: &BigInt) -> Rational {
    if value.denom() <= max_den {
        return value.clone();
    }
    let negative = value.is_negative();
    let abs = value.abs();
    let (mut n, mut d) = (abs.numer().clone(), abs.denom().clone());
    let (mut p0, mut q0, mut p1, mut q1) = (
        BigInt::zero(),
        BigInt::one(),
        BigInt::one(),
        BigInt::zero(),
    );
    loop {
        let a = &n / &d;
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
        if d.is_zero() {
            break;
        }
    }
    let k = (max_den - &q0) / &q1;
    let lower = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let upper = Rational::new(p1, q1);
    let pick = if (&upper - &abs).abs() <= (&lower - &abs).abs() {
        upper
    } else {
        lower
    };
    if negative {
        -pick
    } else {
        pick
    }
}

/// Nearest rational to `x` with denominator at most 10⁶.
pub fn rational_from_f64(x: f64) -> Rational {
    match Rational::from_float(x) {
        Some(r) => limit_denominator(&r, &BigInt::from(1_000_000)),
        None => Rational::zero(),
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl ops::$tr<&ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                let f: fn(&ScalarExpr, &ScalarExpr) -> ScalarExpr = $body;
                f(self, rhs)
            }
        }
        impl ops::$tr<ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                ops::$tr::$method(&self, &rhs)
            }
        }
        impl ops::$tr<&ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                ops::$tr::$method(&self, rhs)
            }
        }
        impl ops::$tr<ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                ops::$tr::$method(self, &rhs)
            }
        }
    };
}

fn flat_push(out: &mut Vec<ScalarExpr>, e: &ScalarExpr, add: bool) {
    match (e.node(), add) {
        (Node::Add(ts), true) | (Node::Mul(ts), false) => out.extend(ts.iter().cloned()),
        _ => out.push(e.clone()),
    }
}

binop!(Add, add, |a, b| {
    if a.is_zero_literal() {
        return b.clone();
    }
    if b.is_zero_literal() {
        return a.clone();
    }
    let mut ts = Vec::new();
    flat_push(&mut ts, a, true);
    flat_push(&mut ts, b, true);
    ScalarExpr::add_all(ts)
});

binop!(Sub, sub, |a, b| {
    if b.is_zero_literal() {
        return a.clone();
    }
    a + &(-b)
});

binop!(Mul, mul, |a, b| {
    if a.is_zero_literal() || b.is_zero_literal() {
        return ScalarExpr::zero();
    }
    if a.is_one_literal() {
        return b.clone();
    }
    if b.is_one_literal() {
        return a.clone();
    }
    let mut fs = Vec::new();
    flat_push(&mut fs, a, false);
    flat_push(&mut fs, b, false);
    ScalarExpr::mul_all(fs)
});

binop!(Div, div, |a, b| {
    if b.is_one_literal() {
        return a.clone();
    }
    ScalarExpr::div(a.clone(), b.clone())
});

impl ops::Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        match self.node() {
            Node::Const(c) => ScalarExpr::constant(-c.clone()),
            Node::Neg(inner) => inner.clone(),
            _ => ScalarExpr::from_node(Node::Neg(self.clone())),
        }
    }
}

impl ops::Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

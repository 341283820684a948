use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::{Func, Node, ScalarExpr};
use crate::{Error, Result};

/// A point `(x1, x2, x3, y)` of R⁴.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize)]
pub struct Point4 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub y: f64,
}

impl Point4 {
    pub const ORIGIN: Point4 = Point4::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(x1: f64, x2: f64, x3: f64, y: f64) -> Self {
        Point4 { x1, x2, x3, y }
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.y]
    }

    pub fn from_coords(c: [f64; 4]) -> Self {
        Point4::new(c[0], c[1], c[2], c[3])
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|c| c.is_finite())
    }

    pub fn distance(&self, other: &Point4) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl fmt::Display for Point4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x1, self.x2, self.x3, self.y)
    }
}

const POLE: f64 = 1e-12;

// The subexpression responsible for a domain failure.
type EvalResult<'a> = std::result::Result<f64, &'a ScalarExpr>;

impl ScalarExpr {
    /// Evaluate at `p` in double precision.
    pub fn eval(&self, p: &Point4) -> Result<f64> {
        self.eval_scaled(p).map(|(v, _)| v)
    }

    /// Value at `p` together with the largest absolute additive term met
    /// during evaluation, the scale used by the zero tolerance.
    pub fn eval_scaled(&self, p: &Point4) -> Result<(f64, f64)> {
        let mut scale = 0.0f64;
        let coords = p.coords();
        eval_node(self, &coords, &mut scale)
            .map(|v| (v, scale))
            .map_err(|bad| Error::Domain {
                expr: bad.to_string(),
                x1: p.x1,
                x2: p.x2,
                x3: p.x3,
                y: p.y,
            })
    }
}

fn check(e: &ScalarExpr, v: f64) -> EvalResult<'_> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(e)
    }
}

fn eval_node<'a>(e: &'a ScalarExpr, x: &[f64; 4], scale: &mut f64) -> EvalResult<'a> {
    let v = match e.node() {
        Node::Const(c) => c.to_f64().unwrap_or(f64::NAN),
        Node::Var(v) => x[v.index()],
        Node::Add(ts) => {
            let mut sum = 0.0;
            for t in ts {
                let tv = eval_node(t, x, scale)?;
                *scale = scale.max(tv.abs());
                sum += tv;
            }
            sum
        }
        Node::Mul(fs) => {
            let mut prod = 1.0;
            for f in fs {
                prod *= eval_node(f, x, scale)?;
            }
            prod
        }
        Node::Div(a, b) => {
            let num = eval_node(a, x, scale)?;
            let den = eval_node(b, x, scale)?;
            if den.abs() < POLE {
                return Err(e);
            }
            num / den
        }
        Node::Pow(b, n) => {
            let base = eval_node(b, x, scale)?;
            if *n < 0 && base.abs() < POLE {
                return Err(e);
            }
            base.powi(*n)
        }
        Node::Neg(a) => -eval_node(a, x, scale)?,
        Node::Fn(f, a) => {
            let u = eval_node(a, x, scale)?;
            match f {
                Func::Sin => u.sin(),
                Func::Cos => u.cos(),
                Func::Exp => u.exp(),
                Func::Ln => {
                    if u <= 0.0 {
                        return Err(e);
                    }
                    u.ln()
                }
                Func::Sqrt => {
                    if u < 0.0 {
                        return Err(e);
                    }
                    u.sqrt()
                }
            }
        }
    };
    check(e, v)
}

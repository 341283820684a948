//! Deterministic random inputs for property checks and the audit corpus.

use crate::expr::{Func, ScalarExpr, SplitMix64, Var};
use crate::veccalc::Vec3Expr;

fn monomial(rng: &mut SplitMix64, max_degree: u32, vars: &[Var]) -> ScalarExpr {
    let degree = rng.range_i64(0, max_degree as i64) as u32;
    let mut factors = Vec::new();
    for _ in 0..degree {
        let v = vars[rng.range_i64(0, vars.len() as i64 - 1) as usize];
        factors.push(ScalarExpr::var(v));
    }
    ScalarExpr::mul_all(factors)
}

fn coefficient(rng: &mut SplitMix64) -> ScalarExpr {
    let c = rng.range_i64(-3, 3);
    let c = if c == 0 { 1 } else { c };
    if rng.range_i64(0, 3) == 0 {
        ScalarExpr::ratio(c, 2)
    } else {
        ScalarExpr::int(c)
    }
}

/// Polynomial in all four coordinates with up to `terms` terms of degree at
/// most `max_degree` and small rational coefficients.
pub fn random_polynomial(rng: &mut SplitMix64, max_degree: u32, terms: usize) -> ScalarExpr {
    random_polynomial_in(rng, max_degree, terms, &Var::ALL)
}

pub fn random_polynomial_in(
    rng: &mut SplitMix64,
    max_degree: u32,
    terms: usize,
    vars: &[Var],
) -> ScalarExpr {
    let n = rng.range_i64(1, terms.max(1) as i64) as usize;
    let ts = (0..n)
        .map(|_| coefficient(rng) * monomial(rng, max_degree, vars))
        .collect();
    ScalarExpr::add_all(ts).simplify()
}

/// Polynomial in `x1, x2, x3` only.
pub fn random_spatial_polynomial(rng: &mut SplitMix64, max_degree: u32, terms: usize) -> ScalarExpr {
    random_polynomial_in(rng, max_degree, terms, &Var::SPATIAL)
}

pub fn random_vec3(rng: &mut SplitMix64, max_degree: u32, terms: usize) -> Vec3Expr {
    Vec3Expr::new(
        random_polynomial(rng, max_degree, terms),
        random_polynomial(rng, max_degree, terms),
        random_polynomial(rng, max_degree, terms),
    )
}

/// Smooth expression mixing polynomials with sin, cos, exp, ln, sqrt and
/// quotients, defined on all of R⁴.
pub fn random_smooth(rng: &mut SplitMix64, depth: u32) -> ScalarExpr {
    if depth == 0 {
        return random_polynomial(rng, 2, 3);
    }
    let a = random_smooth(rng, depth - 1);
    match rng.range_i64(0, 7) {
        0 => a * random_smooth(rng, depth - 1),
        1 => a + random_smooth(rng, depth - 1),
        2 => ScalarExpr::apply(Func::Sin, a),
        3 => ScalarExpr::apply(Func::Cos, a),
        4 => ScalarExpr::apply(Func::Exp, a * ScalarExpr::ratio(1, 8)),
        5 => ScalarExpr::apply(Func::Ln, a.pow(2) + ScalarExpr::one()),
        6 => ScalarExpr::apply(Func::Sqrt, a.pow(2) + ScalarExpr::int(1)),
        _ => ScalarExpr::div(random_polynomial(rng, 2, 2), a.pow(2) + ScalarExpr::int(1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = random_smooth(&mut SplitMix64::new(3), 3);
        let b = random_smooth(&mut SplitMix64::new(3), 3);
        assert_eq!(a, b);
        let p = random_polynomial(&mut SplitMix64::new(9), 3, 4);
        assert!(p.polynomial_degree().unwrap() <= 3);
    }
}

//! Expanded normal form used by `simplify`, `diff`, and the symbolic zero test.
//!
//! A [`Poly`] is a finite sum `Σ c·∏ aᵢ^eᵢ` with exact rational coefficients
//! `c` and integer exponents over *atoms*: coordinates, elementary functions
//! of a normalized argument, and multi-term sums that are kept opaque (sums in
//! a denominator, or raised to a power above [`EXPAND_LIMIT`]). This is not a
//! canonical form for rational functions; it only guarantees that equal
//! polynomial parts cancel.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{Func, Node, Rational, ScalarExpr, Var};

/// Largest positive power of a multi-term sum that is expanded.
pub(crate) const EXPAND_LIMIT: i32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Atom {
    Var(Var),
    Fn(Func, Arc<Poly>),
    Sum(Arc<Poly>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Monomial(pub(crate) Vec<(Atom, i32)>);

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Monomial {
    fn one() -> Self {
        Monomial(Vec::new())
    }

    fn atom(a: Atom, e: i32) -> Self {
        Monomial(vec![(a, e)])
    }

    fn merge(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let e = self.0[i].1 + other.0[j].1;
                    if e != 0 {
                        out.push((self.0[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    fn scale_exponents(&self, n: i32) -> Monomial {
        Monomial(self.0.iter().map(|(a, e)| (a.clone(), e * n)).collect())
    }

    fn needs_settling(&self) -> bool {
        self.0.iter().any(|(a, e)| needs_rewrite(a, *e))
    }

    pub(crate) fn is_pure_polynomial(&self) -> bool {
        self.0
            .iter()
            .all(|(a, e)| matches!(a, Atom::Var(_)) && *e > 0)
    }

    fn degree(&self) -> i32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }
}

fn needs_rewrite(a: &Atom, e: i32) -> bool {
    match a {
        Atom::Fn(Func::Sqrt, _) => e.abs() >= 2,
        Atom::Sum(_) => (1..=EXPAND_LIMIT).contains(&e),
        _ => false,
    }
}

/// Display order: at the first atom (in atom order) where the exponents
/// differ, the monomial with the larger exponent comes first.
pub(crate) fn render_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.0.get(i), b.0.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some((_, ea)), None) => return 0.cmp(ea),
            (None, Some((_, eb))) => return eb.cmp(&0),
            (Some((aa, ea)), Some((ab, eb))) => match aa.cmp(ab) {
                Ordering::Less => return 0.cmp(ea),
                Ordering::Greater => return eb.cmp(&0),
                Ordering::Equal => {
                    if ea != eb {
                        return eb.cmp(ea);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

impl Poly {
    pub(crate) fn zero() -> Poly {
        Poly::default()
    }

    pub(crate) fn constant(c: Rational) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub(crate) fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    fn from_monomial(m: Monomial, c: Rational) -> Poly {
        if m.needs_settling() {
            settle(m, c)
        } else {
            let mut p = Poly::zero();
            p.add_term(m, c);
            p
        }
    }

    fn from_atom(a: Atom, e: i32) -> Poly {
        Poly::from_monomial(Monomial::atom(a, e), Rational::one())
    }

    pub(crate) fn var(v: Var) -> Poly {
        Poly::from_atom(Atom::Var(v), 1)
    }

    pub(crate) fn len(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn add_scaled(&mut self, other: &Poly, scale: &Rational) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * scale);
        }
    }

    pub(crate) fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub(crate) fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub(crate) fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub(crate) fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.merge(mb);
                let c = ca * cb;
                if m.needs_settling() {
                    let settled = settle(m, Rational::one());
                    out.add_scaled(&settled, &c);
                } else {
                    out.add_term(m, c);
                }
            }
        }
        out
    }

    pub(crate) fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.0.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn single_term(&self) -> Option<(&Monomial, &Rational)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().unwrap())
    }

    /// Terms in display order.
    pub(crate) fn ordered_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| render_cmp(a.0, b.0));
        ts
    }

    pub(crate) fn leading_coefficient(&self) -> Option<Rational> {
        self.ordered_terms().first().map(|(_, c)| (*c).clone())
    }

    /// Integer power; `None` when inverting zero.
    pub(crate) fn pow(&self, n: i32) -> Option<Poly> {
        if n == 0 {
            return Some(Poly::one());
        }
        if self.is_zero() {
            return if n > 0 { Some(Poly::zero()) } else { None };
        }
        if let Some((m, c)) = self.single_term() {
            let coeff = rational_pow(c, n);
            return Some(Poly::from_monomial(m.scale_exponents(n), coeff));
        }
        if n > 0 && n <= EXPAND_LIMIT {
            let mut acc = self.clone();
            for _ in 1..n {
                acc = acc.mul(self);
            }
            return Some(acc);
        }
        let lc = self.leading_coefficient().unwrap();
        let primitive = self.scale(&lc.recip());
        let atom = Atom::Sum(Arc::new(primitive));
        Some(Poly::from_monomial(
            Monomial::atom(atom, n),
            rational_pow(&lc, n),
        ))
    }

    pub(crate) fn diff(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (i, (atom, e)) in m.0.iter().enumerate() {
                let da = atom_diff(atom, v);
                if da.is_zero() {
                    continue;
                }
                let mut rest = m.0.clone();
                if *e == 1 {
                    rest.remove(i);
                } else {
                    rest[i].1 = e - 1;
                }
                let rest = Poly::from_monomial(Monomial(rest), c * Rational::from_integer((*e).into()));
                out = out.add(&rest.mul(&da));
            }
        }
        out
    }

    pub(crate) fn polynomial_degree(&self) -> Option<u32> {
        let mut deg = 0;
        for (m, _) in &self.terms {
            if !m.is_pure_polynomial() {
                return None;
            }
            deg = deg.max(m.degree() as u32);
        }
        Some(deg)
    }

    pub(crate) fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for (m, _) in &self.terms {
            if !m.is_pure_polynomial() {
                return None;
            }
            let d = m.degree() as u32;
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        deg
    }
}

fn rational_pow(c: &Rational, n: i32) -> Rational {
    let base = if n < 0 { c.recip() } else { c.clone() };
    num_traits::pow(base, n.unsigned_abs() as usize)
}

/// Rewrite atoms whose exponent calls for expansion.
fn settle(m: Monomial, c: Rational) -> Poly {
    let Some(idx) = m.0.iter().position(|(a, e)| needs_rewrite(a, *e)) else {
        let mut p = Poly::zero();
        p.add_term(m, c);
        return p;
    };
    let mut rest = m.0;
    let (atom, e) = rest.remove(idx);
    let replacement = match &atom {
        Atom::Fn(Func::Sqrt, inner) => {
            // sqrt(u)^e = u^(e div 2) · sqrt(u)^(e rem 2)
            let half = e / 2;
            let rem = e % 2;
            let base = inner.pow(half).unwrap_or_default();
            if rem == 0 {
                base
            } else {
                base.mul(&Poly::from_monomial(Monomial::atom(atom.clone(), rem), Rational::one()))
            }
        }
        Atom::Sum(inner) => {
            let mut acc = (**inner).clone();
            for _ in 1..e {
                acc = acc.mul(inner);
            }
            acc
        }
        _ => unreachable!(),
    };
    let rest = settle(Monomial(rest), c);
    rest.mul(&replacement)
}

fn atom_diff(atom: &Atom, v: Var) -> Poly {
    match atom {
        Atom::Var(w) => {
            if *w == v {
                Poly::one()
            } else {
                Poly::zero()
            }
        }
        Atom::Sum(inner) => inner.diff(v),
        Atom::Fn(f, inner) => {
            let du = inner.diff(v);
            if du.is_zero() {
                return du;
            }
            let u = (**inner).clone();
            let outer = match f {
                Func::Sin => apply_fn(Func::Cos, u),
                Func::Cos => apply_fn(Func::Sin, u).neg(),
                Func::Exp => apply_fn(Func::Exp, u),
                Func::Ln => match u.pow(-1) {
                    Some(p) => p,
                    None => return Poly::zero(),
                },
                Func::Sqrt => Poly::from_atom(atom.clone(), -1).scale(&Rational::new(1.into(), 2.into())),
            };
            outer.mul(&du)
        }
    }
}

fn exact_sqrt(c: &Rational) -> Option<Rational> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    (&n * &n == *c.numer() && &d * &d == *c.denom()).then(|| Rational::new(n, d))
}

/// Normal form of `f(u)` with light folding and sign canonicalization.
pub(crate) fn apply_fn(f: Func, u: Poly) -> Poly {
    if let Some(c) = u.constant_value() {
        match f {
            Func::Sin if c.is_zero() => return Poly::zero(),
            Func::Cos | Func::Exp if c.is_zero() => return Poly::one(),
            Func::Ln if c.is_one() => return Poly::zero(),
            Func::Sqrt => {
                if let Some(r) = exact_sqrt(&c) {
                    return Poly::constant(r);
                }
            }
            _ => {}
        }
    }
    if f == Func::Ln {
        // ln(exp(v)^k) = k·v
        if let Some((m, c)) = u.single_term() {
            if c.is_one() && m.0.len() == 1 {
                if let (Atom::Fn(Func::Exp, inner), k) = &m.0[0] {
                    return inner.scale(&Rational::from_integer((*k).into()));
                }
            }
        }
    }
    if matches!(f, Func::Sin | Func::Cos) {
        if let Some(lc) = u.leading_coefficient() {
            if lc.is_negative() {
                let flipped = u.neg();
                let p = Poly::from_atom(Atom::Fn(f, Arc::new(flipped)), 1);
                return if f == Func::Sin { p.neg() } else { p };
            }
        }
    }
    Poly::from_atom(Atom::Fn(f, Arc::new(u)), 1)
}

/// Normal form of an expression tree; `None` on a literal division by zero.
pub(crate) fn from_expr(e: &ScalarExpr) -> Option<Poly> {
    Some(match e.node() {
        Node::Const(c) => Poly::constant(c.clone()),
        Node::Var(v) => Poly::var(*v),
        Node::Add(ts) => {
            let mut acc = Poly::zero();
            for t in ts {
                acc = acc.add(&*t.normal_form()?);
            }
            acc.collapse()
        }
        Node::Mul(fs) => {
            let mut acc = Poly::one();
            for f in fs {
                let p = f.normal_form()?;
                acc = acc.mul(&p);
                if acc.is_zero() {
                    break;
                }
            }
            acc
        }
        Node::Div(a, b) => {
            let num = a.normal_form()?;
            let den = b.normal_form()?;
            if let Some(r) = proportional(&num, &den) {
                return Some(Poly::constant(r));
            }
            num.mul(&den.pow(-1)?).collapse()
        }
        Node::Pow(b, n) => b.normal_form()?.pow(*n)?,
        Node::Neg(a) => a.normal_form()?.neg(),
        Node::Fn(f, a) => apply_fn(*f, (*a.normal_form()?).clone()),
    })
}

fn atom_expr(a: &Atom) -> ScalarExpr {
    match a {
        Atom::Var(v) => ScalarExpr::var(*v),
        Atom::Fn(f, inner) => ScalarExpr::apply(*f, to_expr(inner)),
        Atom::Sum(inner) => to_expr(inner),
    }
}

fn power_expr(base: ScalarExpr, e: i32) -> ScalarExpr {
    if e == 1 {
        base
    } else {
        base.pow(e)
    }
}

fn term_expr(m: &Monomial, magnitude: &Rational) -> ScalarExpr {
    let mut num: Vec<ScalarExpr> = Vec::new();
    let mut den: Vec<ScalarExpr> = Vec::new();
    if !magnitude.numer().is_one()
        || m.0.iter().all(|(a, e)| *e < 0 && !(matches!(a, Atom::Sum(_)) && *e < -1))
    {
        num.push(ScalarExpr::constant(Rational::from_integer(
            magnitude.numer().clone(),
        )));
    }
    if !magnitude.denom().is_one() {
        den.push(ScalarExpr::constant(Rational::from_integer(
            magnitude.denom().clone(),
        )));
    }
    for (a, e) in &m.0 {
        match a {
            Atom::Sum(_) if *e == -1 => den.push(atom_expr(a)),
            Atom::Sum(_) => num.push(power_expr(atom_expr(a), *e)),
            _ if *e > 0 => num.push(power_expr(atom_expr(a), *e)),
            _ => den.push(power_expr(atom_expr(a), -e)),
        }
    }
    let numerator = ScalarExpr::mul_all(num);
    if den.is_empty() {
        numerator
    } else {
        ScalarExpr::div(numerator, ScalarExpr::mul_all(den))
    }
}

/// Canonical tree for a normal form. Terms sharing the same multi-term
/// denominators are grouped over it. The result carries `p` as its cached
/// normal form.
pub(crate) fn to_expr(p: &Poly) -> ScalarExpr {
    let ordered = p.ordered_terms();
    if ordered.is_empty() {
        return ScalarExpr::with_normal(Node::Const(Rational::zero()), p.clone());
    }
    if ordered.len() == 1 && ordered[0].0 .0.is_empty() {
        return ScalarExpr::with_normal(Node::Const(ordered[0].1.clone()), p.clone());
    }

    // Group by the Sum atoms carrying negative exponents.
    let mut groups: Vec<(Vec<(Atom, i32)>, Vec<(Monomial, Rational)>)> = Vec::new();
    for (m, c) in &ordered {
        let (den, rest): (Vec<_>, Vec<_>) = m
            .0
            .iter()
            .cloned()
            .partition(|(a, e)| matches!(a, Atom::Sum(_)) && *e < 0);
        let rest = (Monomial(rest), (*c).clone());
        match groups.iter_mut().find(|(d, _)| *d == den) {
            Some((_, members)) => members.push(rest),
            None => groups.push((den, vec![rest])),
        }
    }

    let mut terms = Vec::new();
    for (den, members) in groups {
        if den.is_empty() || members.len() == 1 {
            for (rest, c) in members {
                let m = Monomial(rest.0.into_iter().chain(den.iter().cloned()).collect());
                let mut m = m;
                m.0.sort_by(|a, b| a.0.cmp(&b.0));
                terms.push(signed_term(&m, &c));
            }
            continue;
        }
        let mut inner = Poly::zero();
        for (rest, c) in members {
            inner.add_term(rest, c);
        }
        let mut num = vec![to_expr(&inner)];
        let mut dens = Vec::new();
        for (a, e) in &den {
            if *e == -1 {
                dens.push(atom_expr(a));
            } else {
                num.push(atom_expr(a).pow(*e));
            }
        }
        let numerator = ScalarExpr::mul_all(num);
        terms.push(if dens.is_empty() {
            numerator
        } else {
            ScalarExpr::div(numerator, ScalarExpr::mul_all(dens))
        });
    }
    let node = if terms.len() == 1 {
        terms.pop().unwrap().node().clone()
    } else {
        Node::Add(terms)
    };
    ScalarExpr::with_normal(node, p.clone())
}

fn signed_term(m: &Monomial, c: &Rational) -> ScalarExpr {
    if m.0.is_empty() {
        return ScalarExpr::constant(c.clone());
    }
    let t = term_expr(m, &c.abs());
    if c.is_negative() {
        ScalarExpr::from_node(Node::Neg(t))
    } else {
        t
    }
}

impl Poly {
    /// Cancel groups of terms whose common multi-term denominator divides
    /// their sum exactly, e.g. `x1/(x1+x2) + x2/(x1+x2)`.
    fn collapse(self) -> Poly {
        let has_den = |m: &Monomial| m.0.iter().any(|(a, e)| matches!(a, Atom::Sum(_)) && *e < 0);
        if !self.terms.keys().any(has_den) {
            return self;
        }
        let mut groups: BTreeMap<Vec<(Atom, i32)>, Poly> = BTreeMap::new();
        for (m, c) in self.terms {
            let (den, rest): (Vec<_>, Vec<_>) = m
                .0
                .into_iter()
                .partition(|(a, e)| matches!(a, Atom::Sum(_)) && *e < 0);
            groups.entry(den).or_default().add_term(Monomial(rest), c);
        }
        let mut out = Poly::zero();
        for (den, inner) in groups {
            let hit = den.iter().enumerate().find_map(|(i, (a, _))| match a {
                Atom::Sum(s) => proportional(&inner, s).map(|r| (i, r)),
                _ => None,
            });
            let den_poly = |den: &[(Atom, i32)]| {
                Poly::from_monomial(Monomial(den.to_vec()), Rational::one())
            };
            match hit {
                Some((i, r)) => {
                    let mut den = den.clone();
                    den[i].1 += 1;
                    den.retain(|(_, e)| *e != 0);
                    out = out.add(&den_poly(&den).scale(&r));
                }
                None => out = out.add(&inner.mul(&den_poly(&den))),
            }
        }
        out
    }
}

/// `Some(r)` when `num = r·den` exactly.
fn proportional(num: &Poly, den: &Poly) -> Option<Rational> {
    if num.len() != den.len() || den.is_zero() {
        return None;
    }
    let (m0, c0) = den.terms.iter().next().unwrap();
    let r = num.terms.get(m0)? / c0;
    den.terms
        .iter()
        .all(|(m, c)| num.terms.get(m) == Some(&(c * &r)))
        .then_some(r)
}

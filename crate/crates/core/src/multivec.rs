//! Multivector fields on R⁴ in reduced coordinates, the wedge product, the
//! trace operator `D`, Lie derivatives, and the Schouten brackets needed for
//! bivectors.
//!
//! Coordinates are indexed `0..4` as `(x1, x2, x3, y)`. Every grade has a
//! reduced form (the structs below) and a component form ([`Components`]),
//! with the dictionary
//!
//! ```text
//! Λ²³ = Ψ1   Λ³¹ = Ψ2   Λ¹² = Ψ3   Λ¹⁴ = Φ1   Λ²⁴ = Φ2   Λ³⁴ = Φ3
//! A¹²³ = g   A²³⁴ = Σ1  A³¹⁴ = Σ2  A¹²⁴ = Σ3  A¹²³⁴ = f
//! ```
//!
//! (1-based, index 4 = y). Definitional computations run on components.

use std::collections::BTreeMap;
use std::fmt;

use crate::expr::{zero_verdict_all, Point4, SampleConfig, ScalarExpr, Var, ZeroVerdict};
use crate::veccalc::{div, grad, rot, Vec3Expr};
use crate::{Error, Result};

/// Vector field `W·∂x + b·∂y`.
#[derive(Clone, Debug, PartialEq)]
pub struct MV1 {
    pub w: Vec3Expr,
    pub b: ScalarExpr,
}

/// Bivector `Ψ·∂x∧∂x + Φ·∂x∧∂y`.
#[derive(Clone, Debug, PartialEq)]
pub struct MV2 {
    pub psi: Vec3Expr,
    pub phi: Vec3Expr,
}

/// Trivector `g·∂1∧∂2∧∂3 + Σ1·∂2∧∂3∧∂y + Σ2·∂3∧∂1∧∂y + Σ3·∂1∧∂2∧∂y`.
#[derive(Clone, Debug, PartialEq)]
pub struct MV3 {
    pub g: ScalarExpr,
    pub sigma: Vec3Expr,
}

/// Four-vector `f·∂1∧∂2∧∂3∧∂y`.
#[derive(Clone, Debug, PartialEq)]
pub struct MV4 {
    pub f: ScalarExpr,
}

/// One-form `a·dx + c·dy`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm {
    pub a: Vec3Expr,
    pub c: ScalarExpr,
}

impl OneForm {
    pub fn new(a: Vec3Expr, c: ScalarExpr) -> Self {
        OneForm { a, c }
    }

    /// The differential `df`.
    pub fn d(f: &ScalarExpr) -> Self {
        OneForm {
            a: grad(f),
            c: f.diff(Var::Y),
        }
    }

    pub fn dy() -> Self {
        OneForm::new(Vec3Expr::zero(), ScalarExpr::one())
    }

    pub fn pair(&self, x: &MV1) -> ScalarExpr {
        (self.a.dot(&x.w) + &self.c * &x.b).simplify()
    }

    pub fn component(&self, k: usize) -> ScalarExpr {
        if k < 3 {
            self.a[k].clone()
        } else {
            self.c.clone()
        }
    }
}

impl MV1 {
    pub fn new(w: Vec3Expr, b: ScalarExpr) -> Self {
        MV1 { w, b }
    }

    pub fn zero() -> Self {
        MV1::new(Vec3Expr::zero(), ScalarExpr::zero())
    }

    /// Coordinate field `∂_k`, `k = 3` being `∂y`.
    pub fn basis(k: usize) -> Self {
        if k < 3 {
            MV1::new(Vec3Expr::unit(k), ScalarExpr::zero())
        } else {
            MV1::new(Vec3Expr::zero(), ScalarExpr::one())
        }
    }

    pub fn component(&self, k: usize) -> ScalarExpr {
        if k < 3 {
            self.w[k].clone()
        } else {
            self.b.clone()
        }
    }

    pub fn from_array(c: [ScalarExpr; 4]) -> Self {
        let [a, b, c3, d] = c;
        MV1::new(Vec3Expr::new(a, b, c3), d)
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &ScalarExpr) -> ScalarExpr {
        crate::veccalc::directional(f, &self.w, &self.b)
    }

    pub fn eval(&self, p: &Point4) -> Result<[f64; 4]> {
        let w = self.w.eval(p)?;
        Ok([w[0], w[1], w[2], self.b.eval(p)?])
    }

    pub fn to_strings(&self) -> ([String; 3], String) {
        (self.w.to_strings(), self.b.to_string())
    }
}

impl MV2 {
    pub fn new(psi: Vec3Expr, phi: Vec3Expr) -> Self {
        MV2 { psi, phi }
    }

    pub fn zero() -> Self {
        MV2::new(Vec3Expr::zero(), Vec3Expr::zero())
    }

    pub fn parse(psi: [&str; 3], phi: [&str; 3]) -> Result<Self> {
        Ok(MV2::new(Vec3Expr::parse(psi)?, Vec3Expr::parse(phi)?))
    }

    /// `Ψ·Φ`, the scalar whose sign splits R⁴ into regions.
    pub fn psi_dot_phi(&self) -> ScalarExpr {
        self.psi.dot(&self.phi).simplify()
    }

    /// Antisymmetric 4×4 component matrix `Λⁱʲ`.
    pub fn to_matrix(&self) -> [[ScalarExpr; 4]; 4] {
        let c = Multivector::G2(self.clone()).to_components();
        std::array::from_fn(|i| std::array::from_fn(|j| c.get(&[i, j])))
    }

    pub fn from_matrix(m: &[[ScalarExpr; 4]; 4]) -> Self {
        MV2::new(
            Vec3Expr::new(m[1][2].clone(), m[2][0].clone(), m[0][1].clone()),
            Vec3Expr::new(m[0][3].clone(), m[1][3].clone(), m[2][3].clone()),
        )
    }

    pub fn eval_matrix(&self, p: &Point4) -> Result<[[f64; 4]; 4]> {
        let m = self.to_matrix();
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = m[i][j].eval(p)?;
            }
        }
        Ok(out)
    }
}

impl MV3 {
    pub fn new(g: ScalarExpr, sigma: Vec3Expr) -> Self {
        MV3 { g, sigma }
    }

    pub fn zero() -> Self {
        MV3::new(ScalarExpr::zero(), Vec3Expr::zero())
    }
}

impl MV4 {
    pub fn new(f: ScalarExpr) -> Self {
        MV4 { f }
    }
}

/// A multivector field of grade 0 to 4.
#[derive(Clone, Debug, PartialEq)]
pub enum Multivector {
    G0(ScalarExpr),
    G1(MV1),
    G2(MV2),
    G3(MV3),
    G4(MV4),
}

/// Component form: coefficient per strictly increasing index set, keyed by
/// bitmask over `(x1, x2, x3, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Components {
    pub grade: usize,
    pub coeffs: BTreeMap<u8, ScalarExpr>,
}

/// Bitmask and permutation sign of an index tuple; `None` on repeats.
fn sort_sign(indices: &[usize]) -> Option<(u8, i32)> {
    let mut mask = 0u8;
    for &i in indices {
        if mask & (1 << i) != 0 {
            return None;
        }
        mask |= 1 << i;
    }
    let mut inversions = 0;
    for a in 0..indices.len() {
        for b in a + 1..indices.len() {
            if indices[a] > indices[b] {
                inversions += 1;
            }
        }
    }
    Some((mask, if inversions % 2 == 0 { 1 } else { -1 }))
}

fn mask_indices(mask: u8) -> Vec<usize> {
    (0..4).filter(|i| mask & (1 << i) != 0).collect()
}

fn masks_of_grade(p: usize) -> impl Iterator<Item = u8> {
    (0u8..16).filter(move |m| m.count_ones() as usize == p)
}

fn signed(sign: i32, e: ScalarExpr) -> ScalarExpr {
    if sign < 0 {
        -e
    } else {
        e
    }
}

impl Components {
    pub fn zero(grade: usize) -> Self {
        Components {
            grade,
            coeffs: masks_of_grade(grade)
                .map(|m| (m, ScalarExpr::zero()))
                .collect(),
        }
    }

    /// Antisymmetric lookup `A^{i1…ip}` for any index tuple.
    pub fn get(&self, indices: &[usize]) -> ScalarExpr {
        debug_assert_eq!(indices.len(), self.grade);
        match sort_sign(indices) {
            None => ScalarExpr::zero(),
            Some((mask, sign)) => signed(sign, self.coeffs[&mask].clone()),
        }
    }

    fn set(&mut self, indices: &[usize], value: ScalarExpr) {
        let (mask, sign) = sort_sign(indices).expect("repeated index");
        self.coeffs.insert(mask, signed(sign, value));
    }
}

impl Multivector {
    pub fn grade(&self) -> usize {
        match self {
            Multivector::G0(_) => 0,
            Multivector::G1(_) => 1,
            Multivector::G2(_) => 2,
            Multivector::G3(_) => 3,
            Multivector::G4(_) => 4,
        }
    }

    pub fn zero(grade: usize) -> Self {
        Multivector::from_components(&Components::zero(grade))
    }

    /// Reduced coefficients in a fixed order.
    pub fn coefficients(&self) -> Vec<ScalarExpr> {
        match self {
            Multivector::G0(f) => vec![f.clone()],
            Multivector::G1(x) => vec![x.w[0].clone(), x.w[1].clone(), x.w[2].clone(), x.b.clone()],
            Multivector::G2(l) => l.psi.0.iter().chain(l.phi.0.iter()).cloned().collect(),
            Multivector::G3(a) => std::iter::once(a.g.clone())
                .chain(a.sigma.0.iter().cloned())
                .collect(),
            Multivector::G4(a) => vec![a.f.clone()],
        }
    }

    /// Inverse of [`Multivector::coefficients`].
    pub fn from_coefficients(grade: usize, c: Vec<ScalarExpr>) -> Multivector {
        let v3 = |c: &[ScalarExpr]| Vec3Expr::new(c[0].clone(), c[1].clone(), c[2].clone());
        match grade {
            0 => Multivector::G0(c[0].clone()),
            1 => Multivector::G1(MV1::new(v3(&c[0..3]), c[3].clone())),
            2 => Multivector::G2(MV2::new(v3(&c[0..3]), v3(&c[3..6]))),
            3 => Multivector::G3(MV3::new(c[0].clone(), v3(&c[1..4]))),
            _ => Multivector::G4(MV4::new(c[0].clone())),
        }
    }

    pub fn map(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> Multivector {
        Multivector::from_coefficients(self.grade(), self.coefficients().iter().map(f).collect())
    }

    fn zip(&self, other: &Multivector, f: impl Fn(&ScalarExpr, &ScalarExpr) -> ScalarExpr) -> Multivector {
        assert_eq!(self.grade(), other.grade(), "grade mismatch");
        let c = self
            .coefficients()
            .iter()
            .zip(other.coefficients().iter())
            .map(|(a, b)| f(a, b))
            .collect();
        Multivector::from_coefficients(self.grade(), c)
    }

    pub fn add(&self, other: &Multivector) -> Multivector {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Multivector) -> Multivector {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &ScalarExpr) -> Multivector {
        self.map(|c| s * c)
    }

    pub fn neg(&self) -> Multivector {
        self.map(|c| -c)
    }

    pub fn simplify(&self) -> Multivector {
        self.map(|c| c.simplify())
    }

    pub fn zero_verdict(&self, cfg: &SampleConfig) -> Result<ZeroVerdict> {
        zero_verdict_all(self.coefficients().iter(), cfg)
    }

    pub fn to_components(&self) -> Components {
        let p = self.grade();
        let mut c = Components::zero(p);
        match self {
            Multivector::G0(f) => {
                c.coeffs.insert(0, f.clone());
            }
            Multivector::G1(x) => {
                for k in 0..4 {
                    c.set(&[k], x.component(k));
                }
            }
            Multivector::G2(l) => {
                c.set(&[1, 2], l.psi[0].clone());
                c.set(&[2, 0], l.psi[1].clone());
                c.set(&[0, 1], l.psi[2].clone());
                for i in 0..3 {
                    c.set(&[i, 3], l.phi[i].clone());
                }
            }
            Multivector::G3(a) => {
                c.set(&[0, 1, 2], a.g.clone());
                c.set(&[1, 2, 3], a.sigma[0].clone());
                c.set(&[2, 0, 3], a.sigma[1].clone());
                c.set(&[0, 1, 3], a.sigma[2].clone());
            }
            Multivector::G4(a) => c.set(&[0, 1, 2, 3], a.f.clone()),
        }
        c
    }

    pub fn from_components(c: &Components) -> Multivector {
        match c.grade {
            0 => Multivector::G0(c.coeffs[&0].clone()),
            1 => Multivector::G1(MV1::from_array(std::array::from_fn(|k| c.get(&[k])))),
            2 => Multivector::G2(MV2::new(
                Vec3Expr::new(c.get(&[1, 2]), c.get(&[2, 0]), c.get(&[0, 1])),
                Vec3Expr::new(c.get(&[0, 3]), c.get(&[1, 3]), c.get(&[2, 3])),
            )),
            3 => Multivector::G3(MV3::new(
                c.get(&[0, 1, 2]),
                Vec3Expr::new(c.get(&[1, 2, 3]), c.get(&[2, 0, 3]), c.get(&[0, 1, 3])),
            )),
            4 => Multivector::G4(MV4::new(c.get(&[0, 1, 2, 3]))),
            g => panic!("grade {g} out of range"),
        }
    }

    pub fn as_mv1(&self) -> Option<&MV1> {
        match self {
            Multivector::G1(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_mv2(&self) -> Option<&MV2> {
        match self {
            Multivector::G2(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_mv3(&self) -> Option<&MV3> {
        match self {
            Multivector::G3(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_scalar(&self) -> Option<&ScalarExpr> {
        match self {
            Multivector::G0(x) => Some(x),
            _ => None,
        }
    }

    pub fn into_mv1(self) -> MV1 {
        match self {
            Multivector::G1(x) => x,
            other => panic!("expected grade 1, got grade {}", other.grade()),
        }
    }

    pub fn into_mv2(self) -> MV2 {
        match self {
            Multivector::G2(x) => x,
            other => panic!("expected grade 2, got grade {}", other.grade()),
        }
    }

    pub fn into_mv3(self) -> MV3 {
        match self {
            Multivector::G3(x) => x,
            other => panic!("expected grade 3, got grade {}", other.grade()),
        }
    }

    pub fn into_mv4(self) -> MV4 {
        match self {
            Multivector::G4(x) => x,
            other => panic!("expected grade 4, got grade {}", other.grade()),
        }
    }

    pub fn into_scalar(self) -> ScalarExpr {
        match self {
            Multivector::G0(x) => x,
            other => panic!("expected grade 0, got grade {}", other.grade()),
        }
    }
}

impl From<ScalarExpr> for Multivector {
    fn from(v: ScalarExpr) -> Self {
        Multivector::G0(v)
    }
}
impl From<MV1> for Multivector {
    fn from(v: MV1) -> Self {
        Multivector::G1(v)
    }
}
impl From<MV2> for Multivector {
    fn from(v: MV2) -> Self {
        Multivector::G2(v)
    }
}
impl From<MV3> for Multivector {
    fn from(v: MV3) -> Self {
        Multivector::G3(v)
    }
}
impl From<MV4> for Multivector {
    fn from(v: MV4) -> Self {
        Multivector::G4(v)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multivector::G0(s) => write!(f, "{s}"),
            Multivector::G1(x) => write!(f, "W = {}, b = {}", x.w, x.b),
            Multivector::G2(l) => write!(f, "Ψ = {}, Φ = {}", l.psi, l.phi),
            Multivector::G3(a) => write!(f, "g = {}, Σ = {}", a.g, a.sigma),
            Multivector::G4(a) => write!(f, "f = {}", a.f),
        }
    }
}

/// Wedge product, `(A∧B)^K = Σ sign(I,J)·A^I·B^J` over splits `K = I ⊔ J`.
pub fn wedge(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    let (p, q) = (a.grade(), b.grade());
    if p + q > 4 {
        return Err(Error::GradeOverflow { p, q });
    }
    let ca = a.to_components();
    let cb = b.to_components();
    let mut out = Components::zero(p + q);
    for k in masks_of_grade(p + q) {
        let mut terms = Vec::new();
        for i in masks_of_grade(p).filter(|i| i & !k == 0) {
            let j = k & !i;
            let idx: Vec<usize> = mask_indices(i).into_iter().chain(mask_indices(j)).collect();
            let (_, sign) = sort_sign(&idx).unwrap();
            let t = &ca.coeffs[&i] * &cb.coeffs[&j];
            terms.push(signed(sign, t));
        }
        out.coeffs.insert(k, ScalarExpr::add_all(terms).simplify());
    }
    Ok(Multivector::from_components(&out))
}

pub fn wedge_11(x: &MV1, y: &MV1) -> MV2 {
    wedge(&x.clone().into(), &y.clone().into()).unwrap().into_mv2()
}

pub fn wedge_12(x: &MV1, l: &MV2) -> MV3 {
    wedge(&x.clone().into(), &l.clone().into()).unwrap().into_mv3()
}

pub fn wedge_22(a: &MV2, b: &MV2) -> MV4 {
    wedge(&a.clone().into(), &b.clone().into()).unwrap().into_mv4()
}

/// Trace operator from the reduced grade formulas.
pub fn trace(a: &Multivector) -> Result<Multivector> {
    Ok(match a {
        Multivector::G0(_) => return Err(Error::InvalidGrade(0)),
        Multivector::G1(x) => Multivector::G0((div(&x.w) + x.b.diff(Var::Y)).simplify()),
        Multivector::G2(l) => Multivector::G1(MV1::new(
            (rot(&l.psi) + l.phi.d_dy()).simplify(),
            (-div(&l.phi)).simplify(),
        )),
        Multivector::G3(t) => Multivector::G2(MV2::new(
            (grad(&t.g) + t.sigma.d_dy()).simplify(),
            (-rot(&t.sigma)).simplify(),
        )),
        Multivector::G4(t) => Multivector::G3(MV3::new(
            t.f.diff(Var::Y),
            (-grad(&t.f)).simplify(),
        )),
    })
}

/// Trace operator from components: `D(A)^J = Σ_k ∂_k A^{J k}`.
pub fn trace_components(a: &Multivector) -> Result<Multivector> {
    let p = a.grade();
    if p == 0 {
        return Err(Error::InvalidGrade(0));
    }
    let c = a.to_components();
    let mut out = Components::zero(p - 1);
    for j in masks_of_grade(p - 1) {
        let base = mask_indices(j);
        let mut terms = Vec::new();
        for k in 0..4 {
            let mut idx = base.clone();
            idx.push(k);
            terms.push(c.get(&idx).diff(Var::from_index(k)));
        }
        out.coeffs.insert(j, ScalarExpr::add_all(terms).simplify());
    }
    Ok(Multivector::from_components(&out))
}

pub fn trace_mv2(l: &MV2) -> MV1 {
    trace(&l.clone().into()).unwrap().into_mv1()
}

/// Trace with respect to the volume form `f·Ω`: `(1/f)·D(f·A)`.
pub fn trace_rescaled(a: &Multivector, f: &ScalarExpr, cfg: &SampleConfig) -> Result<Multivector> {
    if let Some(p) = crate::expr::first_vanishing_sample(f, cfg) {
        return Err(Error::Precondition(format!(
            "rescaling function {f} vanishes or is undefined at {p}"
        )));
    }
    let inner = trace(&a.scale(f))?;
    let inv = ScalarExpr::div(ScalarExpr::one(), f.clone());
    Ok(inner.scale(&inv).simplify())
}

/// Contraction with a one-form in the first slot: `(i_α A)^J = α_k A^{kJ}`.
pub fn contract(alpha: &OneForm, a: &Multivector) -> Result<Multivector> {
    let p = a.grade();
    if p == 0 {
        return Err(Error::InvalidGrade(0));
    }
    let c = a.to_components();
    let mut out = Components::zero(p - 1);
    for j in masks_of_grade(p - 1) {
        let rest = mask_indices(j);
        let terms = (0..4)
            .map(|k| {
                let mut idx = vec![k];
                idx.extend(&rest);
                alpha.component(k) * c.get(&idx)
            })
            .collect();
        out.coeffs.insert(j, ScalarExpr::add_all(terms).simplify());
    }
    Ok(Multivector::from_components(&out))
}

/// Lie derivative `L_X A` of a multivector of any grade.
pub fn lie_derivative(x: &MV1, a: &Multivector) -> Multivector {
    let p = a.grade();
    let c = a.to_components();
    let xs: [ScalarExpr; 4] = std::array::from_fn(|k| x.component(k));
    let dx: [[ScalarExpr; 4]; 4] =
        std::array::from_fn(|i| std::array::from_fn(|k| xs[i].diff(Var::from_index(k))));
    let mut out = Components::zero(p);
    for m in masks_of_grade(p) {
        let idx = mask_indices(m);
        let mut terms = vec![x.apply(&c.coeffs[&m])];
        for s in 0..p {
            for k in 0..4 {
                if dx[idx[s]][k].is_zero_literal() {
                    continue;
                }
                let mut j = idx.clone();
                j[s] = k;
                terms.push(-(c.get(&j) * &dx[idx[s]][k]));
            }
        }
        out.coeffs.insert(m, ScalarExpr::add_all(terms).simplify());
    }
    Multivector::from_components(&out)
}

pub fn lie_derivative_mv2(x: &MV1, l: &MV2) -> MV2 {
    lie_derivative(x, &l.clone().into()).into_mv2()
}

/// Lie bracket of vector fields, `[X,Y]^i = X(Y^i) − Y(X^i)`.
pub fn lie_bracket(x: &MV1, y: &MV1) -> MV1 {
    MV1::from_array(std::array::from_fn(|i| {
        (x.apply(&y.component(i)) - y.apply(&x.component(i))).simplify()
    }))
}

/// `{f,g} = Λⁱʲ ∂_i f ∂_j g` from the component matrix.
pub fn component_bracket(l: &MV2, f: &ScalarExpr, g: &ScalarExpr) -> ScalarExpr {
    let m = l.to_matrix();
    let df: [ScalarExpr; 4] = std::array::from_fn(|i| f.diff(Var::from_index(i)));
    let dg: [ScalarExpr; 4] = std::array::from_fn(|i| g.diff(Var::from_index(i)));
    let mut terms = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if i != j && !df[i].is_zero_literal() && !dg[j].is_zero_literal() {
                terms.push(&m[i][j] * &df[i] * &dg[j]);
            }
        }
    }
    ScalarExpr::add_all(terms).simplify()
}

fn component_jacobiator(l: &MV2, f: &ScalarExpr, g: &ScalarExpr, h: &ScalarExpr) -> ScalarExpr {
    let b = |a: &ScalarExpr, c: &ScalarExpr| component_bracket(l, a, c);
    (b(f, &b(g, h)) + b(h, &b(f, g)) + b(g, &b(h, f))).simplify()
}

/// Self-bracket `[Λ,Λ]`, whose components are `ε·2·Jac(x_i, x_j, x_k)` with
/// the audited normalization `ε`.
pub fn schouten_self(l: &MV2) -> MV3 {
    let two = ScalarExpr::int(2 * crate::poisson::signs::SCHOUTEN_NORMALIZATION as i64);
    let xs: [ScalarExpr; 4] = std::array::from_fn(|i| ScalarExpr::var(Var::from_index(i)));
    let mut out = Components::zero(3);
    for m in masks_of_grade(3) {
        let idx = mask_indices(m);
        let jac = component_jacobiator(l, &xs[idx[0]], &xs[idx[1]], &xs[idx[2]]);
        out.coeffs.insert(m, (&two * jac).simplify());
    }
    Multivector::from_components(&out).into_mv3()
}

/// Schouten bracket of two bivectors by polarization.
pub fn schouten_22(a: &MV2, b: &MV2) -> MV3 {
    if a == b {
        return schouten_self(a);
    }
    let sum = Multivector::G2(a.clone()).add(&b.clone().into()).into_mv2();
    let half = ScalarExpr::ratio(1, 2);
    let whole: Multivector = schouten_self(&sum).into();
    whole
        .sub(&schouten_self(a).into())
        .sub(&schouten_self(b).into())
        .scale(&half)
        .simplify()
        .into_mv3()
}

/// Schouten bracket for the grade pairs this crate needs: functions and
/// vector fields against anything, and two bivectors. Conventions:
/// `[X,A] = L_X A`, `[f,A] = −i_{df}A`, graded antisymmetry
/// `[A,B] = −(−1)^{(a−1)(b−1)}[B,A]`.
pub fn schouten(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    let (p, q) = (a.grade(), b.grade());
    if p + q == 0 || p + q > 5 {
        return Err(Error::GradeOverflow { p, q });
    }
    match (a, b) {
        (Multivector::G0(f), _) => Ok(contract(&OneForm::d(f), b)?.neg()),
        (Multivector::G1(x), _) => Ok(lie_derivative(x, b)),
        (Multivector::G2(l1), Multivector::G2(l2)) => Ok(schouten_22(l1, l2).into()),
        (_, Multivector::G0(_)) | (_, Multivector::G1(_)) => {
            let swapped = schouten(b, a)?;
            let exponent = (p as i32 - 1) * (q as i32 - 1);
            Ok(if exponent.rem_euclid(2) == 0 {
                swapped.neg()
            } else {
                swapped
            })
        }
        _ => Err(Error::GradeOverflow { p, q }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, SplitMix64};
    use crate::random::{random_polynomial, random_vec3};

    fn cfg() -> SampleConfig {
        SampleConfig::default()
    }

    fn strs(v: &Vec3Expr) -> [String; 3] {
        v.simplify().to_strings()
    }

    fn canonical() -> MV2 {
        MV2::parse(["0", "0", "1"], ["0", "0", "1"]).unwrap()
    }

    fn example2() -> MV2 {
        MV2::parse(["2*x1", "0", "0"], ["x1/2", "x2/4", "x3/4"]).unwrap()
    }

    pub(crate) fn random_mv(rng: &mut SplitMix64, grade: usize) -> Multivector {
        let n = Multivector::zero(grade).coefficients().len();
        let c = (0..n).map(|_| random_polynomial(rng, 3, 4)).collect();
        Multivector::from_coefficients(grade, c)
    }

    fn random_mv1(rng: &mut SplitMix64) -> MV1 {
        MV1::new(random_vec3(rng, 2, 3), random_polynomial(rng, 2, 3))
    }

    #[test]
    fn basis_wedges() {
        let l = wedge_11(&MV1::basis(0), &MV1::basis(1));
        assert_eq!(strs(&l.psi), ["0", "0", "1"]);
        assert_eq!(strs(&l.phi), ["0", "0", "0"]);
        let l = wedge_11(&MV1::basis(0), &MV1::basis(3));
        assert_eq!(strs(&l.psi), ["0", "0", "0"]);
        assert_eq!(strs(&l.phi), ["1", "0", "0"]);
        let l = wedge_11(&MV1::basis(1), &MV1::basis(2));
        assert_eq!(strs(&l.psi), ["1", "0", "0"]);
        let l = wedge_11(&MV1::basis(2), &MV1::basis(0));
        assert_eq!(strs(&l.psi), ["0", "1", "0"]);
    }

    #[test]
    fn wedge_11_reduced_form() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..5 {
            let x = random_mv1(&mut rng);
            let y = random_mv1(&mut rng);
            let l = wedge_11(&x, &y);
            let psi = x.w.cross(&y.w);
            let phi = &x.w.scale(&y.b) - &y.w.scale(&x.b);
            assert!((&l.psi - &psi).zero_verdict(&cfg()).unwrap().is_symbolic());
            assert!((&l.phi - &phi).zero_verdict(&cfg()).unwrap().is_symbolic());
        }
    }

    #[test]
    fn self_wedge_of_bivector() {
        let f = wedge_22(&canonical(), &canonical());
        assert_eq!(f.f.to_string(), "2");
        let l = example2();
        let f = wedge_22(&l, &l);
        let expected = ScalarExpr::int(2) * l.psi_dot_phi();
        assert!(crate::expr::zero_verdict(&(f.f - expected), &cfg()).unwrap().is_symbolic());
    }

    #[test]
    fn wedge_grade_overflow() {
        let err = wedge(&MV3::zero().into(), &MV2::zero().into()).unwrap_err();
        assert_eq!(err, Error::GradeOverflow { p: 3, q: 2 });
    }

    #[test]
    fn wedge_is_graded_antisymmetric() {
        let mut rng = SplitMix64::new(5);
        for (p, q) in [(1, 1), (1, 2), (1, 3), (2, 2), (0, 3)] {
            let a = random_mv(&mut rng, p);
            let b = random_mv(&mut rng, q);
            let ab = wedge(&a, &b).unwrap();
            let ba = wedge(&b, &a).unwrap();
            let sign = if (p * q) % 2 == 0 { 1 } else { -1 };
            let d = ab.sub(&ba.scale(&ScalarExpr::int(sign)));
            assert!(d.zero_verdict(&cfg()).unwrap().is_symbolic(), "({p},{q})");
        }
    }

    #[test]
    fn components_round_trip() {
        let mut rng = SplitMix64::new(2);
        for grade in 0..=4 {
            let a = random_mv(&mut rng, grade);
            assert_eq!(Multivector::from_components(&a.to_components()), a);
        }
        let l = example2();
        let m = l.to_matrix();
        for i in 0..4 {
            for j in 0..4 {
                assert!((&m[i][j] + &m[j][i]).simplify().is_zero_literal());
            }
        }
        assert_eq!(MV2::from_matrix(&m), l);
    }

    #[test]
    fn trace_examples() {
        let x = MV1::new(Vec3Expr::parse(["x1", "0", "0"]).unwrap(), parse("y^2").unwrap());
        let d = trace(&x.into()).unwrap();
        assert_eq!(d.as_scalar().unwrap().to_string(), "2*y + 1");
        let z = trace_mv2(&example2());
        assert_eq!(strs(&z.w), ["0", "0", "0"]);
        assert_eq!(z.b.to_string(), "-1");
        assert_eq!(trace(&ScalarExpr::one().into()).unwrap_err(), Error::InvalidGrade(0));
    }

    #[test]
    fn reduced_trace_matches_components() {
        let mut rng = SplitMix64::new(13);
        for grade in 1..=4 {
            for _ in 0..5 {
                let a = random_mv(&mut rng, grade);
                let d = trace(&a).unwrap().sub(&trace_components(&a).unwrap());
                assert!(d.zero_verdict(&cfg()).unwrap().is_symbolic(), "grade {grade}");
            }
        }
    }

    #[test]
    fn trace_squares_to_zero() {
        let mut rng = SplitMix64::new(17);
        for grade in 2..=4 {
            for _ in 0..20 {
                let a = random_mv(&mut rng, grade);
                let dd = trace(&trace(&a).unwrap()).unwrap();
                assert!(dd.zero_verdict(&cfg()).unwrap().is_symbolic());
            }
        }
    }

    #[test]
    fn trace_of_wedge_of_vector_fields() {
        let mut rng = SplitMix64::new(19);
        for _ in 0..20 {
            let x = random_mv1(&mut rng);
            let y = random_mv1(&mut rng);
            let lhs = trace_mv2(&wedge_11(&x, &y));
            let dx = trace(&x.clone().into()).unwrap().into_scalar();
            let dy = trace(&y.clone().into()).unwrap().into_scalar();
            let rhs = Multivector::G1(lie_bracket(&y, &x))
                .add(&Multivector::G1(x.clone()).scale(&dy))
                .sub(&Multivector::G1(y.clone()).scale(&dx));
            let d = Multivector::G1(lhs).sub(&rhs);
            assert!(d.zero_verdict(&cfg()).unwrap().is_zero());
        }
    }

    #[test]
    fn rescaled_trace() {
        let cfg = cfg();
        let l: Multivector = canonical().into();
        let d = trace_rescaled(&l, &ScalarExpr::one(), &cfg).unwrap();
        assert_eq!(d, trace(&l).unwrap().simplify());
        let d = trace_rescaled(&l, &parse("exp(y)").unwrap(), &cfg)
            .unwrap()
            .into_mv1();
        assert_eq!(strs(&d.w), ["0", "0", "1"]);
        assert_eq!(d.b.to_string(), "0");
        let f = parse("x1^2 + 1").unwrap();
        let d = trace_rescaled(&MV1::basis(3).into(), &f, &cfg).unwrap();
        assert!(d.as_scalar().unwrap().is_zero_literal());
        let f = parse("exp(x1*y)").unwrap();
        let d = trace_rescaled(&MV1::basis(3).into(), &f, &cfg).unwrap();
        assert_eq!(d.as_scalar().unwrap().to_string(), "x1");
        assert!(trace_rescaled(&l, &parse("x1").unwrap(), &cfg.clone().with_bounds(0, -1.0, 0.0)).is_ok());
        assert!(trace_rescaled(&l, &ScalarExpr::zero(), &cfg).is_err());
    }

    #[test]
    fn lie_derivative_examples() {
        let z = lie_derivative_mv2(&MV1::basis(3), &example2());
        assert!(Multivector::G2(z).zero_verdict(&cfg()).unwrap().is_symbolic());

        // Euler field on a bivector with linear coefficients
        let euler = MV1::new(Vec3Expr::position(), ScalarExpr::y());
        let l = MV2::parse(["x1 - y", "2*x3", "x2"], ["y", "x1 + x3", "-x2"]).unwrap();
        let d = Multivector::G2(lie_derivative_mv2(&euler, &l)).add(&l.clone().into());
        assert!(d.zero_verdict(&cfg()).unwrap().is_symbolic());
    }

    #[test]
    fn lie_derivative_of_vector_field_is_bracket() {
        let mut rng = SplitMix64::new(23);
        let x = random_mv1(&mut rng);
        let y = random_mv1(&mut rng);
        let d = lie_derivative(&x, &y.clone().into()).sub(&lie_bracket(&x, &y).into());
        assert!(d.zero_verdict(&cfg()).unwrap().is_symbolic());
    }

    #[test]
    fn schouten_examples() {
        let s = schouten_self(&example2());
        assert!(Multivector::G3(s).zero_verdict(&cfg()).unwrap().is_symbolic());
        let s = schouten_self(&canonical());
        assert!(Multivector::G3(s).zero_verdict(&cfg()).unwrap().is_symbolic());
        let k = MV2::parse(["-x1*x2", "x1*x3", "0"], ["-y*x1", "-y*x2", "y*x3"]).unwrap();
        let s = schouten_self(&k);
        // Jac(x1, x2, x3) = −x1²x2 for this tensor
        assert_eq!(s.g.to_string(), "2*x1^2*x2");
    }

    #[test]
    fn schouten_graded_antisymmetry() {
        let mut rng = SplitMix64::new(29);
        let x = random_mv1(&mut rng);
        let l = random_mv(&mut rng, 2);
        let h = random_polynomial(&mut rng, 2, 3);
        let xl = schouten(&x.clone().into(), &l).unwrap();
        let lx = schouten(&l, &x.clone().into()).unwrap();
        assert!(xl.add(&lx).zero_verdict(&cfg()).unwrap().is_symbolic());
        // [X,h] = X(h)
        let xh = schouten(&x.clone().into(), &h.clone().into()).unwrap();
        let d = xh.into_scalar() - x.apply(&h);
        assert!(d.simplify().is_zero_literal());
        let hx = schouten(&h.clone().into(), &x.clone().into()).unwrap();
        assert!((hx.into_scalar() + x.apply(&h)).simplify().is_zero_literal());
    }

    #[test]
    fn polarization_is_symmetric_and_consistent() {
        let mut rng = SplitMix64::new(31);
        let a = random_mv(&mut rng, 2).into_mv2();
        let b = random_mv(&mut rng, 2).into_mv2();
        let ab: Multivector = schouten_22(&a, &b).into();
        let ba: Multivector = schouten_22(&b, &a).into();
        assert!(ab.sub(&ba).zero_verdict(&cfg()).unwrap().is_symbolic());
        // bilinearity in the first slot
        let two_a = Multivector::G2(a.clone()).scale(&ScalarExpr::int(2)).into_mv2();
        let d = Multivector::G3(schouten_22(&two_a, &b)).sub(&ab.scale(&ScalarExpr::int(2)));
        assert!(d.zero_verdict(&cfg()).unwrap().is_symbolic());
    }

    #[test]
    fn contraction_with_differential_is_sharp() {
        let l = example2();
        let x = contract(&OneForm::d(&parse("x1^2").unwrap()), &l.into()).unwrap().into_mv1();
        assert_eq!(strs(&x.w), ["0", "0", "0"]);
        assert_eq!(x.b.to_string(), "x1^2");
        let x = contract(&OneForm::dy(), &canonical().into()).unwrap().into_mv1();
        assert_eq!(strs(&x.w), ["0", "0", "-1"]);
    }
}

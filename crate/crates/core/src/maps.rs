//! Poisson maps, Poisson vector fields, tangent symmetries and the Casimir
//! normal form. Maps are never inverted: pushed-forward tensors are kept in
//! composed form, as functions of the source coordinates.

use serde::Serialize;

use crate::expr::{first_vanishing_sample, zero_verdict, SampleConfig, ScalarExpr, Var, ZeroVerdict};
use crate::multivec::{lie_derivative_mv2, Multivector, MV1, MV2};
use crate::poisson::{hamiltonian, is_casimir, signs};
use crate::veccalc::{div, grad, jacobian_x, rot, Vec3Expr};
use crate::{Error, Result};

/// A map `F(x, y) = (S(x, y), h(x, y))` of R⁴.
#[derive(Clone, Debug, PartialEq)]
pub struct Diffeo4 {
    pub s: Vec3Expr,
    pub h: ScalarExpr,
}

impl Diffeo4 {
    pub fn new(s: Vec3Expr, h: ScalarExpr) -> Self {
        Diffeo4 { s, h }
    }

    pub fn identity() -> Self {
        Diffeo4::new(Vec3Expr::position(), ScalarExpr::y())
    }

    pub fn parse(s: [&str; 3], h: &str) -> Result<Self> {
        Ok(Diffeo4::new(Vec3Expr::parse(s)?, crate::expr::parse(h)?))
    }

    /// Output component `a` (`a = 3` is `h`).
    pub fn component(&self, a: usize) -> ScalarExpr {
        if a < 3 {
            self.s[a].clone()
        } else {
            self.h.clone()
        }
    }

    /// `J[a][i] = ∂F^a/∂u^i`.
    pub fn jacobian(&self) -> [[ScalarExpr; 4]; 4] {
        std::array::from_fn(|a| {
            let c = self.component(a);
            std::array::from_fn(|i| c.diff(Var::from_index(i)))
        })
    }

    pub fn determinant(&self) -> ScalarExpr {
        det4(&self.jacobian()).simplify()
    }

    /// `e ∘ F`.
    pub fn compose(&self, e: &ScalarExpr) -> ScalarExpr {
        let map: [Option<ScalarExpr>; 4] = std::array::from_fn(|a| Some(self.component(a)));
        e.substitute(&map).simplify()
    }

    pub fn compose_mv2(&self, l: &MV2) -> MV2 {
        MV2::new(l.psi.map(|c| self.compose(c)), l.phi.map(|c| self.compose(c)))
    }
}

fn det4(m: &[[ScalarExpr; 4]; 4]) -> ScalarExpr {
    let mut terms = Vec::new();
    for j in 0..4 {
        if m[0][j].is_zero_literal() {
            continue;
        }
        let minor: [[ScalarExpr; 3]; 3] = std::array::from_fn(|r| {
            let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
            std::array::from_fn(|c| m[r + 1][cols[c]].clone())
        });
        let d3 = crate::veccalc::Mat3Expr(minor).det();
        let t = &m[0][j] * &d3;
        terms.push(if j % 2 == 0 { t } else { -t });
    }
    ScalarExpr::add_all(terms)
}

/// Pushforward in composed form: `(F_*Λ)^{ab} ∘ F = Σ J_{ai} J_{bj} Λ^{ij}`.
pub fn pushforward(l: &MV2, f: &Diffeo4) -> MV2 {
    let j = f.jacobian();
    let m = l.to_matrix();
    let out: [[ScalarExpr; 4]; 4] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut terms = Vec::new();
            for i in 0..4 {
                for k in 0..4 {
                    if i == k || j[a][i].is_zero_literal() || j[b][k].is_zero_literal() || m[i][k].is_zero_literal() {
                        continue;
                    }
                    terms.push(&j[a][i] * &j[b][k] * &m[i][k]);
                }
            }
            ScalarExpr::add_all(terms).simplify()
        })
    });
    MV2::from_matrix(&out)
}

/// Pushforward from the coordinate formulas:
/// `Ψ̃∘F = det(D_xS)(D_xS)^{-T}Ψ + D_xS(Φ)×S_y` and
/// `Φ̃∘F = −D_xS(Ψ×∇h) + h_y·D_xS(Φ) + ε(Φ·∇h)S_y`.
/// The cofactor matrix replaces `det·inverse-transpose`, so no division occurs.
pub fn pushforward_formula(l: &MV2, f: &Diffeo4, eps: i32) -> MV2 {
    let dxs = jacobian_x(&f.s);
    let cof = dxs.adjugate().transpose();
    let sy = f.s.d_dy();
    let gh = grad(&f.h);
    let hy = f.h.diff(Var::Y);
    let dphi = dxs.mul_vec(&l.phi);
    let psi = &cof.mul_vec(&l.psi) + &dphi.cross(&sy);
    let phi = &(&(-dxs.mul_vec(&l.psi.cross(&gh))) + &dphi.scale(&hy))
        + &sy.scale(&(ScalarExpr::int(eps as i64) * l.phi.dot(&gh)));
    MV2::new(psi.simplify(), phi.simplify())
}

/// `Φ̃∘F = −(D_xS·W_h + S_y·b_h)` where `X_h = (W_h, b_h)`.
pub fn pushforward_phi_hamiltonian(l: &MV2, f: &Diffeo4) -> Vec3Expr {
    let xh = hamiltonian(l, &f.h);
    let v = &jacobian_x(&f.s).mul_vec(&xh.w) + &f.s.d_dy().scale(&xh.b);
    (-v).simplify()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCheck {
    pub pair: String,
    pub verdict: ZeroVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MapReport {
    pub passes: bool,
    pub pairs: Vec<PairCheck>,
    /// `(Φ·Ψ)_dst ∘ F − det(DF)·(Φ·Ψ)_src`.
    pub determinant_relation: ZeroVerdict,
    /// Coordinate formulas against the definitional pushforward.
    pub formula_agrees: ZeroVerdict,
    /// First failing pair with composed and target values at the witness.
    pub failure: Option<MapFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MapFailure {
    pub pair: String,
    pub witness: [f64; 4],
    pub composed: f64,
    pub target: f64,
}

const NAMES: [&str; 4] = ["x1", "x2", "x3", "y"];

/// Whether `F` carries `src` to `dst` (`None` means `dst = src`), checked on
/// the six coordinate pairs in composed form.
pub fn poisson_map_check(src: &MV2, f: &Diffeo4, dst: Option<&MV2>, cfg: &SampleConfig) -> Result<MapReport> {
    let det = f.determinant();
    if let Some(p) = first_vanishing_sample(&det, cfg) {
        return Err(Error::Degenerate(format!("det DF = {det} vanishes at {p}")));
    }
    let dst = dst.unwrap_or(src);
    let pushed = pushforward(src, f);
    let target = f.compose_mv2(dst);
    let (pm, tm) = (pushed.to_matrix(), target.to_matrix());
    let mut pairs = Vec::new();
    let mut failure = None;
    for a in 0..4 {
        for b in a + 1..4 {
            let d = (&pm[a][b] - &tm[a][b]).simplify();
            let verdict = zero_verdict(&d, cfg)?;
            let pair = format!("{},{}", NAMES[a], NAMES[b]);
            if failure.is_none() {
                if let Some(w) = verdict.witness() {
                    failure = Some(MapFailure {
                        pair: pair.clone(),
                        witness: w.coords(),
                        composed: pm[a][b].eval(&w)?,
                        target: tm[a][b].eval(&w)?,
                    });
                }
            }
            pairs.push(PairCheck { pair, verdict });
        }
    }
    let det_rel = (f.compose(&dst.psi_dot_phi()) - &det * &src.psi_dot_phi()).simplify();
    let determinant_relation = zero_verdict(&det_rel, cfg)?;
    let formula = pushforward_formula(src, f, signs::PUSHFORWARD_PHI_SY);
    let diff = Multivector::G2(formula).sub(&pushed.into());
    let formula_agrees = diff.zero_verdict(cfg)?;
    Ok(MapReport {
        passes: failure.is_none(),
        pairs,
        determinant_relation,
        formula_agrees,
        failure,
    })
}

/// The vector-calculus form of `L_XΛ`:
/// `P1 = ∇(Ψ·W) − (div W)Ψ − W×rot Ψ + bΨ_y + W_y×Φ`,
/// `P2 = rot(Φ×W) − (div W)Φ + (div Φ)W + Ψ×∇b − b_yΦ + bΦ_y`.
pub fn vector_field_form(l: &MV2, x: &MV1) -> (Vec3Expr, Vec3Expr) {
    let (w, b) = (&x.w, &x.b);
    let dw = div(w);
    let p1 = &(&(&(&grad(&l.psi.dot(w)) - &l.psi.scale(&dw)) - &w.cross(&rot(&l.psi)))
        + &l.psi.d_dy().scale(b))
        + &w.d_dy().cross(&l.phi);
    let p2 = &(&(&(&(&rot(&l.phi.cross(w)) - &l.phi.scale(&dw)) + &w.scale(&div(&l.phi)))
        + &l.psi.cross(&grad(b)))
        - &l.phi.scale(&b.diff(Var::Y)))
        + &l.phi.d_dy().scale(b);
    (p1.simplify(), p2.simplify())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    /// `L_XΛ`.
    #[serde(skip)]
    pub definitional: MV2,
    #[serde(skip)]
    pub p1: Vec3Expr,
    #[serde(skip)]
    pub p2: Vec3Expr,
    pub definitional_verdict: ZeroVerdict,
    pub form_verdict: ZeroVerdict,
    /// `(P1, P2) − ε·L_XΛ`.
    pub agreement: ZeroVerdict,
    pub sign: i32,
    pub passes: bool,
}

pub fn poisson_vf_check(l: &MV2, x: &MV1, cfg: &SampleConfig) -> Result<SymmetryReport> {
    let definitional = lie_derivative_mv2(x, l);
    let (p1, p2) = vector_field_form(l, x);
    let definitional_verdict = Multivector::G2(definitional.clone()).zero_verdict(cfg)?;
    let form = Multivector::G2(MV2::new(p1.clone(), p2.clone()));
    let form_verdict = form.zero_verdict(cfg)?;
    let sign = signs::VECTOR_FIELD_FORM;
    let agreement = form
        .sub(&Multivector::G2(definitional.clone()).scale(&ScalarExpr::int(sign as i64)))
        .simplify()
        .zero_verdict(cfg)?;
    if definitional_verdict.is_zero() != form_verdict.is_zero() {
        return Err(Error::InternalInconsistency(format!(
            "Lie derivative gives {} but the vector-calculus form gives {}",
            definitional_verdict.kind(),
            form_verdict.kind()
        )));
    }
    Ok(SymmetryReport {
        passes: definitional_verdict.is_zero(),
        definitional,
        p1,
        p2,
        definitional_verdict,
        form_verdict,
        agreement,
        sign,
    })
}

/// Tangent field `W = (Ψ×α − gΦ)·∂x + (α·Φ)·∂y` and its closure conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentField {
    pub field: MV1,
    /// `(ω·Φ − Ψ·rot α)Ψ − (Φ·Ψ)ω` with `ω = −∇g + α_y`.
    pub p31: Vec3Expr,
    /// `(ω·Φ − Ψ·rot α)Φ + (Φ·Ψ)rot α`.
    pub p32: Vec3Expr,
    /// Rank-2 scalar condition `ω·Φ − Ψ·rot α`.
    pub scalar: ScalarExpr,
    /// Whether `Φ·Ψ` vanishes identically, selecting the scalar condition.
    pub rank2: bool,
    pub conditions: ZeroVerdict,
}

pub fn tangent_pvf(l: &MV2, alpha: &Vec3Expr, g: &ScalarExpr, cfg: &SampleConfig) -> Result<TangentField> {
    let field = MV1::new(
        (&l.psi.cross(alpha) - &l.phi.scale(g)).simplify(),
        alpha.dot(&l.phi).simplify(),
    );
    let omega = &(-grad(g)) + &alpha.d_dy();
    let ra = rot(alpha);
    let scalar = (omega.dot(&l.phi) - l.psi.dot(&ra)).simplify();
    let pp = l.psi_dot_phi();
    let p31 = (&l.psi.scale(&scalar) - &omega.scale(&pp)).simplify();
    let p32 = (&l.phi.scale(&scalar) + &ra.scale(&pp)).simplify();
    let rank2 = zero_verdict(&pp, cfg)?.is_zero();
    let conditions = if rank2 {
        zero_verdict(&scalar, cfg)?
    } else {
        crate::expr::zero_verdict_all(p31.0.iter().chain(p32.0.iter()), cfg)?
    };
    Ok(TangentField {
        field,
        p31,
        p32,
        scalar,
        rank2,
        conditions,
    })
}

/// `Λ` pushed forward by `F(x, y) = (x, k(x, y))` for a Casimir `k`, in
/// composed form. The `Φ` part vanishes and `Ψ̃∘F` is returned.
#[derive(Clone, Debug, PartialEq)]
pub struct CasimirNormalForm {
    pub psi: Vec3Expr,
    pub phi_verdict: ZeroVerdict,
}

pub fn casimir_normal_form(l: &MV2, k: &ScalarExpr, cfg: &SampleConfig) -> Result<CasimirNormalForm> {
    if !is_casimir(l, k, cfg)?.is_zero() {
        return Err(Error::Precondition(format!("{k} is not a Casimir function")));
    }
    let ky = k.diff(Var::Y);
    if let Some(p) = first_vanishing_sample(&ky, cfg) {
        return Err(Error::Precondition(format!("∂k/∂y = {ky} vanishes at {p}")));
    }
    let f = Diffeo4::new(Vec3Expr::position(), k.clone());
    let pushed = pushforward(l, &f);
    let phi_verdict = pushed.phi.zero_verdict(cfg)?;
    if !phi_verdict.is_zero() {
        return Err(Error::InternalInconsistency(format!(
            "Φ part of the normal form does not vanish: {}",
            pushed.phi
        )));
    }
    Ok(CasimirNormalForm {
        psi: pushed.psi,
        phi_verdict,
    })
}

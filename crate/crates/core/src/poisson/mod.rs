//! Bracket, sharp map, Hamiltonian and modular fields, Jacobi residuals,
//! rank classification and Casimir tests for a bivector `Λ = (Ψ, Φ)`.

pub mod audit;
pub mod signs;

use std::sync::OnceLock;

use serde::Serialize;

use crate::expr::{combine_verdicts, zero_verdict, zero_verdict_all, Point4, SampleConfig, ScalarExpr, Var, ZeroVerdict};
use crate::multivec::{trace_mv2, OneForm, MV1, MV2};
use crate::veccalc::{div, grad, rot, Vec3Expr};
use crate::{Error, Result};

/// Absolute tolerance for the pointwise zero tests of the rank classifier.
pub const RANK_TOL: f64 = 1e-12;

/// `{f,g} = Ψ·(∇f×∇g) + Φ·(g_y∇f − f_y∇g)`, equal to `dg(Λ#(df))`.
pub fn bracket(l: &MV2, f: &ScalarExpr, g: &ScalarExpr) -> ScalarExpr {
    let (gf, gg) = (grad(f), grad(g));
    let (fy, gy) = (f.diff(Var::Y), g.diff(Var::Y));
    let psi_part = l.psi.dot(&gf.cross(&gg));
    let phi_part = l.phi.dot(&(&gf.scale(&gy) - &gg.scale(&fy)));
    (psi_part + phi_part).simplify()
}

/// The coordinate form of the bracket with the `Φ` term carrying sign `eps`:
/// `Ψ·∇f×∇g + eps·Φ·(f_y∇g − g_y∇f)`.
pub fn bracket_with_phi_sign(l: &MV2, f: &ScalarExpr, g: &ScalarExpr, eps: i32) -> ScalarExpr {
    let (gf, gg) = (grad(f), grad(g));
    let (fy, gy) = (f.diff(Var::Y), g.diff(Var::Y));
    let psi_part = l.psi.dot(&gf.cross(&gg));
    let phi_part = l.phi.dot(&(&gg.scale(&fy) - &gf.scale(&gy)));
    (psi_part + ScalarExpr::int(eps as i64) * phi_part).simplify()
}

/// `Λ#(a·dx + c·dy) = (Ψ×a − c·Φ)·∂x + (a·Φ)·∂y`.
pub fn sharp(l: &MV2, alpha: &OneForm) -> MV1 {
    MV1::new(
        (&l.psi.cross(&alpha.a) - &l.phi.scale(&alpha.c)).simplify(),
        alpha.a.dot(&l.phi).simplify(),
    )
}

/// Hamiltonian vector field `X_H = Λ#(dH)`.
pub fn hamiltonian(l: &MV2, h: &ScalarExpr) -> MV1 {
    sharp(l, &OneForm::d(h))
}

/// `{f,{g,h}} + {h,{f,g}} + {g,{h,f}}`.
pub fn jacobiator(l: &MV2, f: &ScalarExpr, g: &ScalarExpr, h: &ScalarExpr) -> ScalarExpr {
    let b = |a: &ScalarExpr, c: &ScalarExpr| bracket(l, a, c);
    (b(f, &b(g, h)) + b(h, &b(f, g)) + b(g, &b(h, f))).simplify()
}

/// Jacobiators of the four coordinate triples, in the order
/// `(x1,x2,x3), (x1,x2,y), (x1,x3,y), (x2,x3,y)`.
pub fn coordinate_jacobiators(l: &MV2) -> [ScalarExpr; 4] {
    let x: [ScalarExpr; 4] = std::array::from_fn(|i| ScalarExpr::var(Var::from_index(i)));
    [
        jacobiator(l, &x[0], &x[1], &x[2]),
        jacobiator(l, &x[0], &x[1], &x[3]),
        jacobiator(l, &x[0], &x[2], &x[3]),
        jacobiator(l, &x[1], &x[2], &x[3]),
    ]
}

/// Residuals of the Jacobi equations:
/// `r0 = Ψ·(rot Ψ + Φ_y) − ∂y(Ψ·Φ)` and
/// `r = Φ×(rot Ψ + Φ_y) + (div Φ)Ψ − ∇(Ψ·Φ)`.
pub fn jacobi_residuals(l: &MV2) -> (ScalarExpr, Vec3Expr) {
    let curl = &rot(&l.psi) + &l.phi.d_dy();
    let pp = l.psi_dot_phi();
    let r0 = (l.psi.dot(&curl) - pp.diff(Var::Y)).simplify();
    let r = (&(&l.phi.cross(&curl) + &l.psi.scale(&div(&l.phi))) - &grad(&pp)).simplify();
    (r0, r)
}

/// Verdict over the four Jacobi residual components.
pub fn residual_verdict(l: &MV2, cfg: &SampleConfig) -> Result<ZeroVerdict> {
    let (r0, r) = jacobi_residuals(l);
    zero_verdict_all(std::iter::once(&r0).chain(r.0.iter()), cfg)
}

/// Verdict over the four coordinate-triple jacobiators.
pub fn jacobiator_verdict(l: &MV2, cfg: &SampleConfig) -> Result<ZeroVerdict> {
    let jac = coordinate_jacobiators(l);
    let mut out = Vec::new();
    for j in &jac {
        out.push(zero_verdict(j, cfg)?);
    }
    Ok(combine_verdicts(out))
}

/// Decide whether `Λ` satisfies the Jacobi identity. The residual verdict is
/// returned after cross-checking it against the jacobiator oracle.
pub fn is_poisson(l: &MV2, cfg: &SampleConfig) -> Result<ZeroVerdict> {
    let r = residual_verdict(l, cfg)?;
    let j = jacobiator_verdict(l, cfg)?;
    if r.is_zero() != j.is_zero() {
        return Err(Error::InternalInconsistency(format!(
            "Jacobi residuals give {} but coordinate jacobiators give {}",
            r.kind(),
            j.kind()
        )));
    }
    Ok(r)
}

/// Verdict over the four components of `Λ#(dk)`.
pub fn is_casimir(l: &MV2, k: &ScalarExpr, cfg: &SampleConfig) -> Result<ZeroVerdict> {
    let x = hamiltonian(l, k);
    zero_verdict_all(x.w.0.iter().chain(std::iter::once(&x.b)), cfg)
}

/// Modular vector field `Z_Λ = D(Λ) = (rot Ψ + Φ_y)·∂x − (div Φ)·∂y`.
pub fn modular(l: &MV2) -> MV1 {
    trace_mv2(l)
}

/// Rank of `Λ` at a point together with the two classifying scalars.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RankValue {
    pub rank: u8,
    /// `(Φ² + Ψ²)(p)`
    pub norm_sq: f64,
    /// `(Φ·Ψ)(p)`
    pub psi_dot_phi: f64,
}

pub fn rank_at(l: &MV2, p: &Point4) -> Result<RankValue> {
    let norm_sq = (l.psi.norm_sq() + l.phi.norm_sq()).eval(p)?;
    let psi_dot_phi = l.psi.dot(&l.phi).eval(p)?;
    let rank = if norm_sq.abs() <= RANK_TOL {
        0
    } else if psi_dot_phi.abs() <= RANK_TOL {
        2
    } else {
        4
    };
    Ok(RankValue {
        rank,
        norm_sq,
        psi_dot_phi,
    })
}

/// Sign class of `Φ·Ψ` at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    #[serde(rename = "S+")]
    Positive,
    #[serde(rename = "S-")]
    Negative,
    #[serde(rename = "boundary")]
    Boundary,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::Positive => "S+",
            Region::Negative => "S-",
            Region::Boundary => "boundary",
        }
    }
}

pub fn region_at(l: &MV2, p: &Point4) -> Result<Region> {
    let v = l.psi.dot(&l.phi).eval(p)?;
    Ok(if v > RANK_TOL {
        Region::Positive
    } else if v < -RANK_TOL {
        Region::Negative
    } else {
        Region::Boundary
    })
}

/// Rank of the numeric 4×4 component matrix, by Gaussian elimination with
/// partial pivoting. Used as an independent cross-check of [`rank_at`].
pub fn matrix_rank(m: &[[f64; 4]; 4], tol: f64) -> usize {
    let mut a = *m;
    let mut rank = 0;
    for col in 0..4 {
        let pivot = (rank..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()));
        let Some(piv) = pivot else { break };
        if a[piv][col].abs() <= tol {
            continue;
        }
        a.swap(rank, piv);
        for i in rank + 1..4 {
            let factor = a[i][col] / a[rank][col];
            for j in col..4 {
                a[i][j] -= factor * a[rank][j];
            }
        }
        rank += 1;
    }
    rank
}

/// A named bivector with a lazily computed pair of verdicts
/// `(residuals, jacobiators)`.
#[derive(Debug)]
pub struct PoissonCandidate {
    pub name: String,
    pub tensor: MV2,
    cfg: SampleConfig,
    verdicts: OnceLock<(ZeroVerdict, ZeroVerdict)>,
}

impl Clone for PoissonCandidate {
    fn clone(&self) -> Self {
        let out = PoissonCandidate::with_config(self.name.clone(), self.tensor.clone(), self.cfg.clone());
        if let Some(v) = self.verdicts.get() {
            let _ = out.verdicts.set(v.clone());
        }
        out
    }
}

impl PoissonCandidate {
    pub fn new(name: impl Into<String>, tensor: MV2) -> Self {
        PoissonCandidate::with_config(name, tensor, SampleConfig::default())
    }

    pub fn with_config(name: impl Into<String>, tensor: MV2, cfg: SampleConfig) -> Self {
        PoissonCandidate {
            name: name.into(),
            tensor,
            cfg,
            verdicts: OnceLock::new(),
        }
    }

    pub fn config(&self) -> &SampleConfig {
        &self.cfg
    }

    pub fn verdicts(&self) -> Result<&(ZeroVerdict, ZeroVerdict)> {
        if let Some(v) = self.verdicts.get() {
            return Ok(v);
        }
        let r = residual_verdict(&self.tensor, &self.cfg)?;
        let j = jacobiator_verdict(&self.tensor, &self.cfg)?;
        Ok(self.verdicts.get_or_init(|| (r, j)))
    }

    pub fn is_poisson(&self) -> Result<ZeroVerdict> {
        let (r, j) = self.verdicts()?;
        if r.is_zero() != j.is_zero() {
            return Err(Error::InternalInconsistency(format!(
                "{}: residuals give {} but jacobiators give {}",
                self.name,
                r.kind(),
                j.kind()
            )));
        }
        Ok(r.clone())
    }
}

#[cfg(test)]
mod tests;

//! Sign audit of the displayed identities. Each identity is written as a
//! residual `base + Σ εᵢ·termᵢ` over a corpus of cases; every sign choice is
//! tried and the choices vanishing on the whole corpus are kept.

use serde::Serialize;

use super::{bracket, hamiltonian, is_poisson, modular, sharp};
use crate::corpus::{named_tensors, random_linear_diffeo, random_poisson_tensors, random_triangular_diffeo};
use crate::expr::{combine_verdicts, zero_verdict_all, SampleConfig, ScalarExpr, SplitMix64, Var, ZeroVerdict};
use crate::families::{rank2_build, s_tensor};
use crate::maps::{pushforward, pushforward_formula, pushforward_phi_hamiltonian, vector_field_form};
use crate::multivec::{
    lie_bracket, lie_derivative_mv2, schouten, trace, wedge, wedge_11, Multivector, OneForm, MV1, MV2,
};
use crate::random::{random_polynomial, random_polynomial_in, random_vec3};
use crate::veccalc::{div, grad, Vec3Expr};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Identity {
    pub id: &'static str,
    pub name: &'static str,
    pub statement: &'static str,
    /// Signs as the identity is usually displayed, one per `ε` slot.
    pub stated: &'static [i32],
}

pub const IDENTITIES: &[Identity] = &[
    Identity {
        id: "A1",
        name: "trace of the square",
        statement: "D(Λ∧Λ) = 2ε·Λ∧D(Λ) for Poisson Λ",
        stated: &[1],
    },
    Identity {
        id: "A2",
        name: "trace of a wedge of vector fields",
        statement: "D(X∧Y) = ε[Y,X] + D(Y)X − D(X)Y",
        stated: &[1],
    },
    Identity {
        id: "A3",
        name: "graded Leibniz rule",
        statement: "D(A∧B) = (−1)^q D(A)∧B + A∧D(B) − ε(−1)^(p+q)[A,B], slots (1,1), (1,2), (2,2)",
        stated: &[1, 1, 1],
    },
    Identity {
        id: "A4",
        name: "trace squares to zero",
        statement: "D(D(A)) = 0",
        stated: &[],
    },
    Identity {
        id: "A5",
        name: "modular field is an automorphism",
        statement: "[D(Λ),Λ] = 0 for Poisson Λ",
        stated: &[],
    },
    Identity {
        id: "A6",
        name: "trace of a Hamiltonian field",
        statement: "D(X_H) = ε·L_Z H",
        stated: &[-1],
    },
    Identity {
        id: "A7",
        name: "bracket of a Poisson field with the modular field",
        statement: "[W,Z] = ε·Λ#(d D(W)) for Poisson fields W",
        stated: &[-1],
    },
    Identity {
        id: "A8",
        name: "modular derivative of a Hamiltonian",
        statement: "(Φ·Ψ)·L_Z H = ε·L_{X_H}(Φ·Ψ)",
        stated: &[-1],
    },
    Identity {
        id: "A9",
        name: "Hamiltonian field of Φ·Ψ",
        statement: "Λ#(d(Φ·Ψ)) = ε·(Φ·Ψ)·Z",
        stated: &[1],
    },
    Identity {
        id: "A10",
        name: "decomposition along two functions",
        statement: "{f,g}·Λ = X_f∧X_g + ε·(Ψ·Φ)·S_(f,g)",
        stated: &[-1],
    },
    Identity {
        id: "A11",
        name: "modular decomposition",
        statement: "(div Φ)·Λ = ε₁·Z∧Φ∂x + ε₂·∇(Φ·Ψ)∂x∧∂x",
        stated: &[1, 1],
    },
    Identity {
        id: "A12",
        name: "rank-2 modular wedge",
        statement: "(div Φ)·Λ = ε·Z∧Φ∂x for rank-2 Poisson Λ",
        stated: &[1],
    },
    Identity {
        id: "A13",
        name: "Euler decomposition",
        statement: "(4 + ε(d−2))·A = D(A∧L) + D(A)∧L for bivectors A homogeneous of degree d, L = x∂x + y∂y",
        stated: &[1],
    },
    Identity {
        id: "A14",
        name: "trace for a rescaled volume form",
        statement: "D(fA) = f·D(A) + ε(−1)^p·[f,A]",
        stated: &[1],
    },
    Identity {
        id: "A15",
        name: "pushforward formulas",
        statement: "Φ̃∘F = −D_xS(Ψ×∇h) + h_y·D_xS(Φ) + ε₁(Φ·∇h)S_y and Φ̃∘F = ε₂·DF(X_h)",
        stated: &[-1, -1],
    },
    Identity {
        id: "A16",
        name: "vector-calculus form of L_XΛ",
        statement: "(P1, P2) = ε·L_XΛ",
        stated: &[1],
    },
    Identity {
        id: "A17",
        name: "coordinate bracket",
        statement: "{f,g} = Ψ·(∇f×∇g) + ε·Φ·(f_y∇g − g_y∇f)",
        stated: &[1],
    },
    Identity {
        id: "A18",
        name: "rank-2 position wedge",
        statement: "(Φ·x)·Λ = ε·Λ#(d(|x|²/2))∧Λ#(dy) for rank-2 Poisson Λ",
        stated: &[-1],
    },
    Identity {
        id: "A19",
        name: "rank-2 Hamiltonian fields",
        statement: "X_H = ε·V(H)·U + U(H)·V with U = Φ∂x, V = Σ∂x + ∂y",
        stated: &[-1],
    },
    Identity {
        id: "A20",
        name: "transversal fields",
        statement: "[Λ,Vᵢ] = ε·(−div Vᵢ + Vᵢ(f)/f)·Λ",
        stated: &[1],
    },
];

pub fn identity(id: &str) -> Option<&'static Identity> {
    IDENTITIES.iter().find(|i| i.id.eq_ignore_ascii_case(id))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusTensor {
    pub name: String,
    pub tensor: MV2,
    pub poisson: bool,
}

/// Tensors the audit runs over, with their Poisson verdicts, and the seed for
/// the auxiliary random functions.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditCorpus {
    pub tensors: Vec<CorpusTensor>,
    pub seed: u64,
}

impl AuditCorpus {
    pub fn new(named: Vec<(String, MV2)>, seed: u64, cfg: &SampleConfig) -> Result<Self> {
        let mut tensors = Vec::with_capacity(named.len());
        for (name, tensor) in named {
            let poisson = is_poisson(&tensor, cfg)?.is_zero();
            tensors.push(CorpusTensor { name, tensor, poisson });
        }
        Ok(AuditCorpus { tensors, seed })
    }

    /// The named tensors plus `random_count` random Poisson tensors.
    pub fn builtin(random_count: usize, cfg: &SampleConfig) -> Result<Self> {
        let mut named = named_tensors();
        let mut batch = 0u64;
        let mut added = 0;
        while added < random_count {
            for (name, l) in random_poisson_tensors(cfg.seed.wrapping_add(batch)) {
                if added == random_count {
                    break;
                }
                named.push((format!("{name}/{batch}"), l));
                added += 1;
            }
            batch += 1;
        }
        AuditCorpus::new(named, cfg.seed, cfg)
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    fn poisson(&self) -> impl Iterator<Item = &CorpusTensor> {
        self.tensors.iter().filter(|t| t.poisson)
    }
}

/// One residual `base + Σ εᵢ·terms[i]`, componentwise.
struct Case {
    item: String,
    base: Vec<ScalarExpr>,
    terms: Vec<Vec<ScalarExpr>>,
}

impl Case {
    fn new(item: impl Into<String>, base: Vec<ScalarExpr>, terms: Vec<Vec<ScalarExpr>>) -> Self {
        Case {
            item: item.into(),
            base,
            terms,
        }
    }

    fn fixed(item: impl Into<String>, base: Vec<ScalarExpr>) -> Self {
        Case::new(item, base, Vec::new())
    }

    fn residual(&self, signs: &[i32]) -> Vec<ScalarExpr> {
        let n = self.base.len();
        (0..n)
            .map(|j| {
                let mut parts = vec![self.base[j].clone()];
                for (s, t) in signs.iter().zip(&self.terms) {
                    if let Some(c) = t.get(j) {
                        if !c.is_zero_literal() {
                            parts.push(ScalarExpr::int(*s as i64) * c);
                        }
                    }
                }
                ScalarExpr::add_all(parts).simplify()
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditStatus {
    /// Exactly one sign choice vanishes on the corpus.
    Resolved,
    /// Every sign choice vanishes (or there is no sign).
    SignIndependent,
    /// Several but not all choices vanish.
    Ambiguous,
    /// No choice vanishes on the whole corpus.
    Failed,
}

/// First corpus case on which a sign choice fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rejection {
    pub signs: Vec<i32>,
    pub item: String,
    pub witness: [f64; 4],
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResult {
    pub id: String,
    pub name: String,
    pub statement: String,
    pub stated: Vec<i32>,
    pub status: AuditStatus,
    pub resolved: Option<Vec<i32>>,
    /// All sign choices that vanish on every case.
    pub accepted: Vec<Vec<i32>>,
    /// Combined verdict under the first accepted choice.
    pub verdict: Option<ZeroVerdict>,
    pub corpus_size: usize,
    /// Cases on which no sign choice vanishes.
    pub failures: Vec<String>,
    pub rejected: Vec<Rejection>,
    pub agrees_with_stated: Option<bool>,
}

impl IdentityResult {
    pub fn holds(&self) -> bool {
        matches!(self.status, AuditStatus::Resolved | AuditStatus::SignIndependent)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub seed: u64,
    pub samples: usize,
    pub corpus: Vec<String>,
    pub identities: Vec<IdentityResult>,
}

impl AuditReport {
    pub fn holds(&self) -> bool {
        self.identities.iter().all(IdentityResult::holds)
    }

    pub fn get(&self, id: &str) -> Option<&IdentityResult> {
        self.identities.iter().find(|r| r.id == id)
    }

    pub fn failed_ids(&self) -> Vec<String> {
        self.identities.iter().filter(|r| !r.holds()).map(|r| r.id.clone()).collect()
    }

    /// The single resolved sign of an identity with one slot.
    pub fn sign(&self, id: &str) -> Option<i32> {
        match self.get(id)?.resolved.as_deref() {
            Some([s]) => Some(*s),
            _ => None,
        }
    }
}

fn assignments(k: usize) -> Vec<Vec<i32>> {
    (0..1usize << k)
        .map(|m| (0..k).map(|i| if m >> i & 1 == 0 { 1 } else { -1 }).collect())
        .collect()
}

fn evaluate(def: &Identity, cases: &[Case], cfg: &SampleConfig) -> Result<IdentityResult> {
    let all = assignments(def.stated.len());
    let mut alive: Vec<Option<Vec<ZeroVerdict>>> = vec![Some(Vec::new()); all.len()];
    let mut rejected: Vec<Rejection> = Vec::new();
    let mut failures = Vec::new();
    for case in cases {
        let mut any = false;
        for (a, signs) in all.iter().enumerate() {
            // a rejected choice is not re-evaluated, but the case still needs
            // one evaluation to decide whether it fails under every choice
            let v = zero_verdict_all(case.residual(signs).iter(), cfg)?;
            if v.is_zero() {
                any = true;
                if let Some(vs) = alive[a].as_mut() {
                    vs.push(v);
                }
            } else if alive[a].is_some() {
                alive[a] = None;
                let (witness, value) = match v {
                    ZeroVerdict::NonZero { witness, value } => (witness, value),
                    _ => unreachable!(),
                };
                rejected.push(Rejection {
                    signs: signs.clone(),
                    item: case.item.clone(),
                    witness,
                    value,
                });
            }
        }
        if !any {
            failures.push(case.item.clone());
        }
    }
    let accepted: Vec<(Vec<i32>, Vec<ZeroVerdict>)> = all
        .iter()
        .zip(alive)
        .filter_map(|(s, v)| v.map(|v| (s.clone(), v)))
        .collect();
    let status = match accepted.len() {
        0 => AuditStatus::Failed,
        n if n == all.len() => AuditStatus::SignIndependent,
        1 => AuditStatus::Resolved,
        _ => AuditStatus::Ambiguous,
    };
    let resolved = (status == AuditStatus::Resolved).then(|| accepted[0].0.clone());
    let verdict = accepted.first().map(|(_, v)| combine_verdicts(v.iter().cloned()));
    let agrees_with_stated = resolved.as_ref().map(|r| r.as_slice() == def.stated);
    rejected.sort_by(|a, b| a.signs.cmp(&b.signs).reverse());
    Ok(IdentityResult {
        id: def.id.to_string(),
        name: def.name.to_string(),
        statement: def.statement.to_string(),
        stated: def.stated.to_vec(),
        status,
        resolved,
        accepted: accepted.into_iter().map(|(s, _)| s).collect(),
        verdict,
        corpus_size: cases.len(),
        failures,
        rejected,
        agrees_with_stated,
    })
}

fn coeffs(m: impl Into<Multivector>) -> Vec<ScalarExpr> {
    m.into().coefficients()
}

fn neg(v: Vec<ScalarExpr>) -> Vec<ScalarExpr> {
    v.into_iter().map(|c| -c).collect()
}

fn sub(a: Vec<ScalarExpr>, b: Vec<ScalarExpr>) -> Vec<ScalarExpr> {
    a.into_iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale(s: &ScalarExpr, v: Vec<ScalarExpr>) -> Vec<ScalarExpr> {
    v.into_iter().map(|c| s * c).collect()
}

fn zeros(n: usize) -> Vec<ScalarExpr> {
    vec![ScalarExpr::zero(); n]
}

fn random_mv(rng: &mut SplitMix64, grade: usize, degree: u32) -> Multivector {
    let n = Multivector::zero(grade).coefficients().len();
    let c = (0..n).map(|_| random_polynomial(rng, degree, 3)).collect();
    Multivector::from_coefficients(grade, c)
}

fn random_field(rng: &mut SplitMix64) -> MV1 {
    MV1::new(random_vec3(rng, 2, 2), random_polynomial(rng, 2, 2))
}

fn random_homogeneous(rng: &mut SplitMix64, degree: u32) -> ScalarExpr {
    let terms = (0..2)
        .map(|_| {
            let mut f = vec![ScalarExpr::int(rng.range_i64(1, 3))];
            for _ in 0..degree {
                f.push(ScalarExpr::var(Var::from_index(rng.range_i64(0, 3) as usize)));
            }
            ScalarExpr::mul_all(f)
        })
        .collect();
    ScalarExpr::add_all(terms).simplify()
}

fn t(x: &Multivector) -> Multivector {
    trace(x).expect("positive grade")
}

fn w(a: &Multivector, b: &Multivector) -> Multivector {
    wedge(a, b).expect("grade at most 4")
}

/// Rank-2 Poisson tensors `Φ∂x∧(Σ∂x + ∂y)` with `Φ = λe3` and `Σ` free of
/// `x3`, for which the residual `Φ×([Σ,Φ] + Φ_y)` vanishes for every `λ`.
fn rank2_pairs(rng: &mut SplitMix64, n: usize) -> Vec<(Vec3Expr, Vec3Expr)> {
    let free = [Var::X1, Var::X2, Var::Y];
    (0..n)
        .map(|_| {
            let lambda = (random_polynomial(rng, 2, 3) + ScalarExpr::int(3)).simplify();
            let phi = Vec3Expr::new(ScalarExpr::zero(), ScalarExpr::zero(), lambda);
            let sigma = Vec3Expr::new(
                random_polynomial_in(rng, 2, 2, &free),
                random_polynomial_in(rng, 2, 2, &free),
                random_polynomial_in(rng, 2, 2, &free),
            );
            debug_assert!(rank2_build(&phi, &sigma).residual == Vec3Expr::zero());
            (phi, sigma)
        })
        .collect()
}

fn build_cases(id: &str, corpus: &AuditCorpus, rng: &mut SplitMix64, cfg: &SampleConfig) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    match id {
        "A1" => {
            for c in corpus.poisson() {
                let l: Multivector = c.tensor.clone().into();
                let base = coeffs(t(&w(&l, &l)));
                let term = scale(&ScalarExpr::int(-2), coeffs(w(&l, &t(&l))));
                cases.push(Case::new(&c.name, base, vec![term]));
            }
        }
        "A2" => {
            for i in 0..20 {
                let (x, y) = (random_field(rng), random_field(rng));
                let (xm, ym): (Multivector, Multivector) = (x.clone().into(), y.clone().into());
                let lhs = t(&w(&xm, &ym));
                let dx = t(&xm).into_scalar();
                let dy = t(&ym).into_scalar();
                let rest = xm.scale(&dy).sub(&ym.scale(&dx));
                let base = coeffs(lhs.sub(&rest));
                let term = neg(coeffs(lie_bracket(&y, &x)));
                cases.push(Case::new(format!("fields-{i}"), base, vec![term]));
            }
        }
        "A3" => {
            for (slot, (p, q)) in [(1usize, 1usize), (1, 2), (2, 2)].into_iter().enumerate() {
                for i in 0..8 {
                    let a = random_mv(rng, p, 2);
                    let b = random_mv(rng, q, 2);
                    let sign_q = if q % 2 == 0 { 1 } else { -1 };
                    let lhs = t(&w(&a, &b));
                    let rhs = w(&t(&a), &b).scale(&ScalarExpr::int(sign_q)).add(&w(&a, &t(&b)));
                    let base = coeffs(lhs.sub(&rhs));
                    let sign_pq = if (p + q) % 2 == 0 { 1 } else { -1 };
                    let br = schouten(&a, &b)?.scale(&ScalarExpr::int(sign_pq));
                    let mut terms = vec![zeros(base.len()); 3];
                    terms[slot] = coeffs(br);
                    cases.push(Case::new(format!("grades-{p}{q}-{i}"), base, terms));
                }
            }
        }
        "A4" => {
            for grade in 2..=4 {
                for i in 0..5 {
                    let a = random_mv(rng, grade, 3);
                    cases.push(Case::fixed(format!("grade-{grade}-{i}"), coeffs(t(&t(&a)))));
                }
            }
            for c in &corpus.tensors {
                cases.push(Case::fixed(&c.name, coeffs(t(&t(&c.tensor.clone().into())))));
            }
        }
        "A5" => {
            for c in corpus.poisson() {
                let z = modular(&c.tensor);
                cases.push(Case::fixed(&c.name, coeffs(lie_derivative_mv2(&z, &c.tensor))));
            }
        }
        "A6" => {
            for c in corpus.poisson() {
                let z = modular(&c.tensor);
                for h in [ScalarExpr::y(), random_polynomial(rng, 3, 4)] {
                    let xh = hamiltonian(&c.tensor, &h);
                    let base = vec![t(&xh.into()).into_scalar()];
                    let term = vec![-z.apply(&h)];
                    cases.push(Case::new(format!("{}, H = {h}", c.name), base, vec![term]));
                }
            }
        }
        "A7" => {
            for c in corpus.poisson() {
                let l = &c.tensor;
                let z = modular(l);
                let mut fields = vec![("X_H".to_string(), hamiltonian(l, &random_polynomial(rng, 3, 4)))];
                let dy = MV1::basis(3);
                if zero_verdict_all(coeffs(lie_derivative_mv2(&dy, l)).iter(), cfg)?.is_zero() {
                    fields.push(("∂y".to_string(), dy));
                }
                for (label, wf) in fields {
                    let dw = t(&wf.clone().into()).into_scalar();
                    let base = coeffs(lie_bracket(&wf, &z));
                    let term = neg(coeffs(sharp(l, &OneForm::d(&dw))));
                    cases.push(Case::new(format!("{}, W = {label}", c.name), base, vec![term]));
                }
            }
        }
        "A8" => {
            for c in corpus.poisson() {
                let l = &c.tensor;
                let z = modular(l);
                let pp = l.psi_dot_phi();
                let h = random_polynomial(rng, 3, 4);
                let base = vec![&pp * z.apply(&h)];
                let term = vec![-hamiltonian(l, &h).apply(&pp)];
                cases.push(Case::new(&c.name, base, vec![term]));
            }
        }
        "A9" => {
            for c in corpus.poisson() {
                let l = &c.tensor;
                let pp = l.psi_dot_phi();
                let base = coeffs(sharp(l, &OneForm::d(&pp)));
                let term = neg(coeffs(Multivector::G1(modular(l)).scale(&pp)));
                cases.push(Case::new(&c.name, base, vec![term]));
            }
        }
        "A10" => {
            for c in corpus.poisson() {
                let l = &c.tensor;
                let (f, g) = (random_polynomial(rng, 2, 3), random_polynomial(rng, 2, 3));
                let b = bracket(l, &f, &g);
                let lhs = Multivector::G2(l.clone()).scale(&b);
                let xfxg = wedge_11(&hamiltonian(l, &f), &hamiltonian(l, &g));
                let base = coeffs(lhs.sub(&xfxg.into()));
                let term = neg(coeffs(Multivector::G2(s_tensor(&f, &g)).scale(&l.psi_dot_phi())));
                cases.push(Case::new(&c.name, base, vec![term]));
            }
        }
        "A11" => {
            for c in corpus.poisson() {
                let l = &c.tensor;
                let u = MV1::new(l.phi.clone(), ScalarExpr::zero());
                let base = coeffs(Multivector::G2(l.clone()).scale(&div(&l.phi)));
                let t1 = neg(coeffs(wedge_11(&modular(l), &u)));
                let t2 = neg(coeffs(MV2::new(grad(&l.psi_dot_phi()), Vec3Expr::zero())));
                cases.push(Case::new(&c.name, base, vec![t1, t2]));
            }
        }
        "A12" => {
            let mut tensors: Vec<(String, MV2)> = Vec::new();
            for c in corpus.poisson() {
                if zero_verdict_all([c.tensor.psi_dot_phi()].iter(), cfg)?.is_zero() {
                    tensors.push((c.name.clone(), c.tensor.clone()));
                }
            }
            for (i, (phi, sigma)) in rank2_pairs(rng, 4).into_iter().enumerate() {
                tensors.push((format!("rank2-{i}"), rank2_build(&phi, &sigma).tensor));
            }
            for (name, l) in tensors {
                let u = MV1::new(l.phi.clone(), ScalarExpr::zero());
                let base = coeffs(Multivector::G2(l.clone()).scale(&div(&l.phi)));
                let term = neg(coeffs(wedge_11(&modular(&l), &u)));
                cases.push(Case::new(name, base, vec![term]));
            }
        }
        "A13" => {
            let euler = Multivector::G1(MV1::new(Vec3Expr::position(), ScalarExpr::y()));
            for degree in [0u32, 1, 3] {
                for i in 0..3 {
                    let c: Vec<ScalarExpr> = (0..6).map(|_| random_homogeneous(rng, degree)).collect();
                    let a = Multivector::from_coefficients(2, c);
                    let rhs = t(&w(&a, &euler)).add(&w(&t(&a), &euler));
                    let base = coeffs(a.scale(&ScalarExpr::int(4)).sub(&rhs));
                    let term = coeffs(a.scale(&ScalarExpr::int(degree as i64 - 2)));
                    cases.push(Case::new(format!("degree-{degree}-{i}"), base, vec![term]));
                }
            }
        }
        "A14" => {
            for grade in 1..=4 {
                for i in 0..3 {
                    let a = random_mv(rng, grade, 2);
                    let p = random_polynomial(rng, 2, 2);
                    let f = (ScalarExpr::one() + p.pow(2)).simplify();
                    let base = coeffs(t(&a.scale(&f)).sub(&t(&a).scale(&f)));
                    let sign_p = if grade % 2 == 0 { 1 } else { -1 };
                    let br = schouten(&Multivector::G0(f), &a)?.scale(&ScalarExpr::int(-sign_p));
                    cases.push(Case::new(format!("grade-{grade}-{i}"), base, vec![coeffs(br)]));
                }
            }
        }
        "A15" => {
            let mut tensors: Vec<(String, MV2)> = corpus
                .poisson()
                .take(6)
                .map(|c| (c.name.clone(), c.tensor.clone()))
                .collect();
            for i in 0..2 {
                tensors.push((format!("random-{i}"), MV2::new(random_vec3(rng, 1, 2), random_vec3(rng, 1, 2))));
            }
            for (i, (name, l)) in tensors.into_iter().enumerate() {
                // linear maps mix y into the spatial part, so S_y ≠ 0
                let (f, _) = if i % 2 == 0 {
                    random_linear_diffeo(rng)
                } else {
                    random_triangular_diffeo(rng)
                };
                let composed = pushforward(&l, &f);
                let at0 = pushforward_formula(&l, &f, 0);
                let at1 = pushforward_formula(&l, &f, 1);
                let n = 6;
                let base1 = sub(coeffs(at0.clone()), coeffs(composed.clone()));
                let term1 = sub(coeffs(at1), coeffs(at0));
                cases.push(Case::new(format!("{name}, formula"), base1, vec![term1, zeros(n)]));
                // pushforward_phi_hamiltonian returns −DF(X_h)
                let base2 = composed.phi.0.to_vec();
                let term2 = pushforward_phi_hamiltonian(&l, &f).0.to_vec();
                cases.push(Case::new(format!("{name}, hamiltonian row"), base2, vec![zeros(3), term2]));
            }
        }
        "A16" => {
            let mut tensors: Vec<(String, MV2)> = corpus
                .tensors
                .iter()
                .take(6)
                .map(|c| (c.name.clone(), c.tensor.clone()))
                .collect();
            for i in 0..4 {
                tensors.push((format!("random-{i}"), MV2::new(random_vec3(rng, 2, 2), random_vec3(rng, 2, 2))));
            }
            for (name, l) in tensors {
                let x = random_field(rng);
                let (p1, p2) = vector_field_form(&l, &x);
                let base = coeffs(MV2::new(p1, p2));
                let term = neg(coeffs(lie_derivative_mv2(&x, &l)));
                cases.push(Case::new(name, base, vec![term]));
            }
        }
        "A17" => {
            for c in &corpus.tensors {
                let l = &c.tensor;
                let (f, g) = (random_polynomial(rng, 2, 3), random_polynomial(rng, 2, 3));
                let canonical = crate::multivec::component_bracket(l, &f, &g);
                let psi_part = l.psi.dot(&grad(&f).cross(&grad(&g)));
                let phi_part = l
                    .phi
                    .dot(&(&grad(&g).scale(&f.diff(Var::Y)) - &grad(&f).scale(&g.diff(Var::Y))));
                cases.push(Case::new(&c.name, vec![psi_part - canonical], vec![vec![phi_part]]));
            }
        }
        "A18" => {
            let mut tensors: Vec<(String, MV2)> = Vec::new();
            for c in corpus.poisson() {
                if zero_verdict_all([c.tensor.psi_dot_phi()].iter(), cfg)?.is_zero() {
                    tensors.push((c.name.clone(), c.tensor.clone()));
                }
            }
            for (i, (phi, sigma)) in rank2_pairs(rng, 4).into_iter().enumerate() {
                tensors.push((format!("rank2-{i}"), rank2_build(&phi, &sigma).tensor));
            }
            let half_sq = (ScalarExpr::ratio(1, 2) * Vec3Expr::position().norm_sq()).simplify();
            for (name, l) in tensors {
                let px = l.phi.dot(&Vec3Expr::position());
                let base = coeffs(Multivector::G2(l.clone()).scale(&px));
                let xw = wedge_11(&hamiltonian(&l, &half_sq), &sharp(&l, &OneForm::dy()));
                cases.push(Case::new(name, base, vec![neg(coeffs(xw))]));
            }
        }
        "A19" => {
            for (i, (phi, sigma)) in rank2_pairs(rng, 6).into_iter().enumerate() {
                let l = rank2_build(&phi, &sigma).tensor;
                let h = random_polynomial(rng, 3, 4);
                let u = MV1::new(phi.clone(), ScalarExpr::zero());
                let v = MV1::new(sigma.clone(), ScalarExpr::one());
                let xh = Multivector::G1(hamiltonian(&l, &h));
                let base = coeffs(xh.sub(&Multivector::G1(v.clone()).scale(&u.apply(&h))));
                let term = neg(coeffs(Multivector::G1(u).scale(&v.apply(&h))));
                cases.push(Case::new(format!("rank2-{i}"), base, vec![term]));
            }
        }
        "A20" => {
            for i in 0..4 {
                let a = random_polynomial_in(rng, 2, 2, &[Var::X2, Var::X3, Var::Y]);
                let b = random_polynomial_in(rng, 2, 2, &[Var::X3, Var::Y]);
                let k1 = (ScalarExpr::x1() + a).simplify();
                let k2 = (ScalarExpr::x2() + b).simplify();
                let f = (ScalarExpr::one() + random_polynomial(rng, 1, 2).pow(2)).simplify();
                let input = crate::families::TransversalInput::TwoCasimir {
                    k1,
                    k2,
                    f: f.clone(),
                };
                let rep = crate::families::transversal_fields(&input, cfg)?;
                for (j, (v, s)) in [(&rep.v1, &rep.scalars[0]), (&rep.v2, &rep.scalars[1])]
                    .into_iter()
                    .enumerate()
                {
                    // [Λ,V] = −L_VΛ under [X,A] = L_X A
                    let br = neg(coeffs(lie_derivative_mv2(v, &rep.tensor)));
                    let term = neg(coeffs(Multivector::G2(rep.tensor.clone()).scale(s)));
                    cases.push(Case::new(format!("two-casimir-{i}, V{}", j + 1), br, vec![term]));
                }
            }
            for i in 0..2 {
                let p = random_polynomial_in(rng, 2, 3, &[Var::X2, Var::X3, Var::Y]);
                let k = (ScalarExpr::x1() + p).simplify();
                let f = (ScalarExpr::int(2) + random_polynomial(rng, 1, 1).pow(2)).simplify();
                let input = crate::families::TransversalInput::Gradient { k, f };
                let rep = crate::families::transversal_fields(&input, cfg)?;
                for (j, (v, s)) in [(&rep.v1, &rep.scalars[0]), (&rep.v2, &rep.scalars[1])]
                    .into_iter()
                    .enumerate()
                {
                    let br = neg(coeffs(lie_derivative_mv2(v, &rep.tensor)));
                    let term = neg(coeffs(Multivector::G2(rep.tensor.clone()).scale(s)));
                    cases.push(Case::new(format!("gradient-{i}, V{}", j + 1), br, vec![term]));
                }
            }
        }
        _ => return Err(Error::Precondition(format!("unknown identity `{id}`"))),
    }
    Ok(cases)
}

fn identity_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// Run the audit for `ids` (all identities when empty). Identities are
/// evaluated on worker threads and reported in table order.
pub fn run_audit(corpus: &AuditCorpus, ids: &[&str], cfg: &SampleConfig) -> Result<AuditReport> {
    let mut selected = Vec::new();
    for (index, def) in IDENTITIES.iter().enumerate() {
        if ids.is_empty() || ids.iter().any(|i| i.eq_ignore_ascii_case(def.id)) {
            selected.push((index, def));
        }
    }
    for id in ids {
        if identity(id).is_none() {
            return Err(Error::Precondition(format!("unknown identity `{id}`")));
        }
    }
    let results: Vec<Result<IdentityResult>> = std::thread::scope(|s| {
        let handles: Vec<_> = selected
            .iter()
            .map(|&(index, def)| {
                s.spawn(move || {
                    let mut rng = SplitMix64::new(identity_seed(corpus.seed, index));
                    let cases = build_cases(def.id, corpus, &mut rng, cfg)?;
                    evaluate(def, &cases, cfg)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("audit worker panicked")).collect()
    });
    Ok(AuditReport {
        seed: corpus.seed,
        samples: cfg.samples,
        corpus: corpus.tensors.iter().map(|t| t.name.clone()).collect(),
        identities: results.into_iter().collect::<Result<_>>()?,
    })
}

/// [`run_audit`], failing when some identity holds under no sign choice.
pub fn identity_audit(corpus: &AuditCorpus, ids: &[&str], cfg: &SampleConfig) -> Result<AuditReport> {
    let report = run_audit(corpus, ids, cfg)?;
    let failed: Vec<String> = report
        .identities
        .iter()
        .filter(|r| r.status == AuditStatus::Failed)
        .map(|r| r.id.clone())
        .collect();
    if failed.is_empty() {
        Ok(report)
    } else {
        Err(Error::AuditFailure(failed))
    }
}

//! Built-in catalog of worked examples with hand-derived expectations.
//! `run` recomputes every expectation and reports each check.

use serde::Serialize;

use crate::expr::{parse, zero_verdict, SampleConfig, ScalarExpr};
use crate::io::TensorFile;
use crate::multivec::{Multivector, MV1};
use crate::poisson::{coordinate_jacobiators, is_casimir, is_poisson, jacobi_residuals, modular, rank_at};
use crate::veccalc::Vec3Expr;
use crate::{Error, Point4, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Expected {
    /// `"zero"` or `"nonzero"`.
    pub poisson: &'static str,
    /// The scalar Jacobi residual `r0`, when it is nonzero.
    pub residual_r0: Option<&'static str>,
    /// Jacobiator of the coordinate triple `(x1, x2, x3)`.
    pub jacobiator_123: &'static str,
    pub modular: ([&'static str; 3], &'static str),
    /// A displayed modular field that the computed one must differ from.
    pub displayed_modular: Option<([&'static str; 3], &'static str)>,
    pub psi_dot_phi: &'static str,
    pub ranks: &'static [([f64; 4], u8)],
    pub casimirs: &'static [&'static str],
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub file: TensorFile,
    pub expected: Expected,
}

impl CatalogEntry {
    pub fn name(&self) -> &str {
        &self.file.name
    }
}

#[allow(clippy::too_many_arguments)]
fn entry(
    name: &str,
    psi: [&str; 3],
    phi: [&str; 3],
    notes: Option<&str>,
    paper_discrepancy: Option<bool>,
    expected: Expected,
) -> CatalogEntry {
    let mut file = TensorFile::new(name, psi, phi);
    file.notes = notes.map(String::from);
    file.paper_discrepancy = paper_discrepancy;
    CatalogEntry { file, expected }
}

const ZERO_FIELD: ([&str; 3], &str) = (["0", "0", "0"], "0");

pub fn entries() -> Vec<CatalogEntry> {
    vec![
        entry(
            "example2-linear",
            ["2*x1", "0", "0"],
            ["x1/2", "x2/4", "x3/4"],
            Some(
                "Linear tensor 2x1 ∂2∧∂3 + ½x1 ∂1∧∂y + ¼x2 ∂2∧∂y + ¼x3 ∂3∧∂y. Open leaves x1 > 0 and x1 < 0; \
                 2-dimensional leaves in x1 = 0 on level sets of x2/x3; points (0,0,0,y) are leaves. \
                 The displayed Hamiltonian fields carry +f_y·Φ in the spatial part and omit the ∂1 term; \
                 the canonical field is X_f = Ψ×∇f − f_y·Φ + (∇f·Φ)∂y.",
            ),
            None,
            Expected {
                poisson: "zero",
                residual_r0: None,
                jacobiator_123: "0",
                modular: (["0", "0", "0"], "-1"),
                displayed_modular: None,
                psi_dot_phi: "x1^2",
                ranks: &[
                    ([1.0, 0.0, 0.0, 0.0], 4),
                    ([-1.0, 0.0, 0.0, 0.0], 4),
                    ([0.0, 1.0, 0.0, 0.0], 2),
                    ([0.0, 0.0, 1.0, 0.0], 2),
                    ([0.0, 0.0, 0.0, 5.0], 0),
                ],
                casimirs: &[],
            },
        ),
        entry(
            "quadratic-k",
            ["-x1*x2", "x1*x3", "0"],
            ["-y*x1", "-y*x2", "y*x3"],
            Some(
                "Stated to be Poisson with modular field -3*x1 ∂1 + 2*x3 ∂3 + y ∂y. \
                 Computed: Jacobi residual r0 = x1^2*x2 (Jac(x1,x2,x3) = -x1^2*x2), so the tensor is not Poisson, \
                 and Z = (-2*x1, -x2, x1 + 2*x3; y). Φ·Ψ = x1*x2*y*(x1 - x3).",
            ),
            Some(true),
            Expected {
                poisson: "nonzero",
                residual_r0: Some("x1^2*x2"),
                jacobiator_123: "-x1^2*x2",
                modular: (["-2*x1", "-x2", "x1 + 2*x3"], "y"),
                displayed_modular: Some((["-3*x1", "0", "2*x3"], "y")),
                psi_dot_phi: "x1^2*x2*y - x1*x2*x3*y",
                ranks: &[
                    ([1.0, 1.0, 2.0, 1.0], 4),
                    ([1.0, 0.0, 1.0, 1.0], 2),
                    ([0.0, 1.0, 1.0, 0.0], 0),
                    ([0.0, 0.0, 0.0, 1.0], 0),
                ],
                casimirs: &[],
            },
        ),
        entry(
            "canonical-symplectic",
            ["0", "0", "1"],
            ["0", "0", "1"],
            Some("Darboux tensor ∂1∧∂2 + ∂3∧∂y."),
            None,
            Expected {
                poisson: "zero",
                residual_r0: None,
                jacobiator_123: "0",
                modular: ZERO_FIELD,
                displayed_modular: None,
                psi_dot_phi: "1",
                ranks: &[([0.0, 0.0, 0.0, 0.0], 4), ([1.0, -1.0, 2.0, 3.0], 4)],
                casimirs: &[],
            },
        ),
        entry(
            "liouville-symplectic",
            ["0", "-1", "0"],
            ["0", "1", "0"],
            Some("Constant symplectic tensor with vanishing modular field; Φ·Ψ = -1."),
            None,
            Expected {
                poisson: "zero",
                residual_r0: None,
                jacobiator_123: "0",
                modular: ZERO_FIELD,
                displayed_modular: None,
                psi_dot_phi: "-1",
                ranks: &[([0.0, 0.0, 0.0, 0.0], 4), ([2.0, 1.0, -1.0, 0.5], 4)],
                casimirs: &[],
            },
        ),
        entry(
            "rank2-gradient",
            ["x1", "x2", "x3"],
            ["0", "0", "0"],
            Some("Ψ = ∇(|x|²/2), Φ = 0: leaves are spheres |x| = r in each slice y = const."),
            None,
            Expected {
                poisson: "zero",
                residual_r0: None,
                jacobiator_123: "0",
                modular: ZERO_FIELD,
                displayed_modular: None,
                psi_dot_phi: "0",
                ranks: &[([1.0, 0.0, 0.0, 0.0], 2), ([0.0, 0.0, 0.0, 3.0], 0)],
                casimirs: &["y", "x1^2 + x2^2 + x3^2"],
            },
        ),
        entry(
            "casimir-quadratic",
            ["2*x1 + 2*y", "x1 + 4*x2 + 3*y", "x1 + 3*y"],
            ["-2*x2", "x1 + y", "-x1 - y"],
            Some("Linear tensor with quadratic Casimir: M = diag(1,2,0), α = e1, b = 3, A = (0,1,1), c = 2."),
            None,
            Expected {
                poisson: "zero",
                residual_r0: None,
                jacobiator_123: "0",
                modular: ZERO_FIELD,
                displayed_modular: None,
                psi_dot_phi: "0",
                ranks: &[([1.0, 0.0, 0.0, 0.0], 2), ([0.0, 0.0, 0.0, 0.0], 0)],
                casimirs: &["x1^2/2 + x2^2 + x1*y + 3*y^2/2", "x2 + x3 - 2*y"],
            },
        ),
        entry(
            "dirac-canonical",
            ["0", "0", "0"],
            ["0", "0", "1"],
            Some("Dirac tensor of the canonical tensor for (x1, x2): ∂3∧∂y."),
            None,
            Expected {
                poisson: "zero",
                residual_r0: None,
                jacobiator_123: "0",
                modular: ZERO_FIELD,
                displayed_modular: None,
                psi_dot_phi: "0",
                ranks: &[([0.0, 0.0, 0.0, 0.0], 2), ([1.0, 2.0, 3.0, 4.0], 2)],
                casimirs: &["x1", "x2"],
            },
        ),
        entry(
            "s-tensor-sample",
            ["0", "-1", "0"],
            ["0", "0", "1"],
            Some("S_(f,g) for f = x1 + y, g = x2."),
            None,
            Expected {
                poisson: "zero",
                residual_r0: None,
                jacobiator_123: "0",
                modular: ZERO_FIELD,
                displayed_modular: None,
                psi_dot_phi: "0",
                ranks: &[([0.0, 0.0, 0.0, 0.0], 2)],
                casimirs: &["x1 + y", "x2"],
            },
        ),
        entry(
            "rank2-linear",
            ["0", "0", "x3 + y"],
            ["x3 + y", "0", "0"],
            Some("Linear rank-2 tensor (m·x + yb)(A×B)∂x∧∂x + (m·x + yb)A∂x∧∂y with A = e1, B = e2, m = e3, b = 1."),
            None,
            Expected {
                poisson: "zero",
                residual_r0: None,
                jacobiator_123: "0",
                modular: (["1", "0", "0"], "0"),
                displayed_modular: None,
                psi_dot_phi: "0",
                ranks: &[([0.0, 0.0, 1.0, 0.0], 2), ([0.0, 0.0, 1.0, -1.0], 0)],
                casimirs: &["x3", "x2 - y"],
            },
        ),
    ]
}

pub fn names() -> Vec<String> {
    entries().into_iter().map(|e| e.file.name).collect()
}

pub fn lookup(name: &str) -> Result<CatalogEntry> {
    entries()
        .into_iter()
        .find(|e| e.file.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub expected: String,
    pub actual: String,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub passes: bool,
    pub paper_discrepancy: bool,
    pub checks: Vec<Check>,
}

fn expr(s: &str) -> ScalarExpr {
    parse(s).expect("catalog expression parses").simplify()
}

fn field(f: &([&str; 3], &str)) -> MV1 {
    MV1::new(Vec3Expr::new(expr(f.0[0]), expr(f.0[1]), expr(f.0[2])), expr(f.1))
}

fn same(a: &ScalarExpr, b: &ScalarExpr, cfg: &SampleConfig) -> Result<bool> {
    Ok(zero_verdict(&(a - b).simplify(), cfg)?.is_zero())
}

fn same_field(a: &MV1, b: &MV1, cfg: &SampleConfig) -> Result<bool> {
    Ok(Multivector::G1(a.clone()).sub(&b.clone().into()).simplify().zero_verdict(cfg)?.is_zero())
}

fn field_string(x: &MV1) -> String {
    let (w, b) = x.to_strings();
    format!("({}, {}, {}; {})", w[0], w[1], w[2], b)
}

/// Recompute every expectation of an entry.
pub fn run(entry: &CatalogEntry, cfg: &SampleConfig) -> Result<EntryReport> {
    let l = entry.file.tensor()?;
    let e = &entry.expected;
    let mut checks = Vec::new();
    let mut push = |check: String, expected: String, actual: String, passes: bool| {
        checks.push(Check {
            check,
            expected,
            actual,
            passes,
        })
    };

    let verdict = is_poisson(&l, cfg)?;
    let kind = if verdict.is_zero() { "zero" } else { "nonzero" };
    push("is_poisson".into(), e.poisson.into(), verdict.kind().into(), kind == e.poisson);

    let (r0, _) = jacobi_residuals(&l);
    if let Some(want) = e.residual_r0 {
        let ok = same(&r0, &expr(want), cfg)?;
        push("residual_r0".into(), want.into(), r0.to_string(), ok);
    }
    let jac = coordinate_jacobiators(&l)[0].clone();
    let ok = same(&jac, &expr(e.jacobiator_123), cfg)?;
    push("jacobiator(x1,x2,x3)".into(), e.jacobiator_123.into(), jac.to_string(), ok);

    let z = modular(&l);
    let want = field(&e.modular);
    push(
        "modular".into(),
        field_string(&want),
        field_string(&z),
        same_field(&z, &want, cfg)?,
    );
    if let Some(shown) = &e.displayed_modular {
        let shown = field(shown);
        push(
            "modular differs from displayed".into(),
            field_string(&shown),
            field_string(&z),
            !same_field(&z, &shown, cfg)?,
        );
    }
    if let Some(flag) = entry.file.paper_discrepancy {
        push("paper_discrepancy".into(), "true".into(), flag.to_string(), flag);
    }

    let pp = l.psi_dot_phi();
    let ok = same(&pp, &expr(e.psi_dot_phi), cfg)?;
    push("psi_dot_phi".into(), e.psi_dot_phi.into(), pp.to_string(), ok);

    for (c, want) in e.ranks {
        let p = Point4::from_coords(*c);
        let r = rank_at(&l, &p)?.rank;
        push(format!("rank at {p}"), want.to_string(), r.to_string(), r == *want);
    }
    for k in e.casimirs {
        let v = is_casimir(&l, &expr(k), cfg)?;
        push(format!("casimir {k}"), "zero".into(), v.kind().into(), v.is_zero());
    }

    Ok(EntryReport {
        name: entry.file.name.clone(),
        passes: checks.iter().all(|c| c.passes),
        paper_discrepancy: entry.file.paper_discrepancy.unwrap_or(false),
        checks,
    })
}

pub fn run_all(cfg: &SampleConfig) -> Result<Vec<EntryReport>> {
    entries().iter().map(|e| run(e, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named_tensors;

    fn cfg() -> SampleConfig {
        SampleConfig::default()
    }

    #[test]
    fn required_entries_are_present() {
        let names = names();
        assert!(names.len() >= 8);
        for n in [
            "example2-linear",
            "quadratic-k",
            "canonical-symplectic",
            "liouville-symplectic",
            "rank2-gradient",
            "casimir-quadratic",
            "dirac-canonical",
            "s-tensor-sample",
        ] {
            assert!(names.iter().any(|m| m == n), "{n}");
        }
    }

    #[test]
    fn every_entry_passes() {
        for rep in run_all(&cfg()).unwrap() {
            for c in &rep.checks {
                assert!(c.passes, "{}: {c:?}", rep.name);
            }
            assert!(rep.passes);
        }
    }

    #[test]
    fn entries_match_the_constructors() {
        let simp = |l: crate::MV2| Multivector::G2(l).simplify();
        let named = named_tensors();
        assert_eq!(named.len(), entries().len());
        for (e, (name, l)) in entries().iter().zip(named) {
            assert_eq!(e.name(), name);
            assert_eq!(simp(e.file.tensor().unwrap()), simp(l), "{name}");
        }
    }

    #[test]
    fn quadratic_k_records_the_discrepancy() {
        let e = lookup("quadratic-k").unwrap();
        assert_eq!(e.file.paper_discrepancy, Some(true));
        let rep = run(&e, &cfg()).unwrap();
        assert!(rep.passes && rep.paper_discrepancy);
        let r0 = rep.checks.iter().find(|c| c.check == "residual_r0").unwrap();
        assert_eq!(r0.actual, "x1^2*x2");
        assert!(rep.checks.iter().any(|c| c.check == "modular differs from displayed" && c.passes));
    }

    #[test]
    fn wrong_expectation_fails() {
        let mut e = lookup("example2-linear").unwrap();
        e.expected.modular = (["0", "0", "0"], "1");
        let rep = run(&e, &cfg()).unwrap();
        assert!(!rep.passes);
        assert_eq!(rep.checks.iter().filter(|c| !c.passes).count(), 1);
    }

    #[test]
    fn unknown_entry() {
        assert_eq!(lookup("nope"), Err(Error::UnknownEntry("nope".into())));
    }
}

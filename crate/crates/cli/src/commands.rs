use std::path::Path;

use serde_json::{json, Map, Value};

use p4_core::catalog::{self, CatalogEntry, Expected};
use p4_core::expr::parse;
use p4_core::families::{
    casimir_family, liouville_family, linear_build, linear_check, rank2_build, two_casimir_family, Decomposition,
    LinearParams,
};
use p4_core::flow::{conservation_report, integrate};
use p4_core::maps::{poisson_map_check, poisson_vf_check, tangent_pvf};
use p4_core::poisson::audit::{identity, run_audit, AuditCorpus};
use p4_core::poisson::{
    bracket, coordinate_jacobiators, hamiltonian, is_casimir, is_poisson, jacobi_residuals, modular, rank_at,
    region_at,
};
use p4_core::{
    Diffeo4, Error, Mat3Expr, Multivector, Point4, SampleConfig, ScalarExpr, TensorFile, Vec3Expr, ZeroVerdict,
    MV1, MV2,
};

use crate::args::{CatalogCmd, Command, Family, Method, Output};

pub struct Outcome {
    pub value: Value,
    pub pass: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Errors caused by the input rather than by the computation.
pub fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Syntax { .. }
            | Error::UnknownIdentifier { .. }
            | Error::NonIntegerExponent { .. }
            | Error::InvalidFile(_)
            | Error::UnknownEntry(_)
            | Error::NotSymmetric(_)
    )
}

fn expr(s: &str) -> CliResult<ScalarExpr> {
    Ok(parse(s)?.simplify())
}

fn split<const N: usize>(s: &str, sep: char, what: &str) -> CliResult<[String; N]> {
    let parts: Vec<String> = s.split(sep).map(|p| p.trim().to_string()).collect();
    parts
        .try_into()
        .map_err(|p: Vec<String>| CliError::Usage(format!("{what} needs {N} components separated by '{sep}', got {}", p.len())))
}

fn vec3(s: &str, what: &str) -> CliResult<Vec3Expr> {
    let [a, b, c] = split::<3>(s, ',', what)?;
    Ok(Vec3Expr::new(expr(&a)?, expr(&b)?, expr(&c)?))
}

fn mat3(s: &str, what: &str) -> CliResult<Mat3Expr> {
    let rows = split::<3>(s, ';', what)?;
    let mut r = Vec::new();
    for row in &rows {
        r.push(vec3(row, what)?);
    }
    Ok(Mat3Expr::from_fn(|i, j| r[i].components()[j].clone()))
}

fn point(s: &str) -> CliResult<Point4> {
    let parts = split::<4>(s, ',', "point")?;
    let mut c = [0.0; 4];
    for (i, p) in parts.iter().enumerate() {
        c[i] = p
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Usage(format!("point coordinate `{p}` is not a number")))?;
    }
    Ok(Point4::from_coords(c))
}

fn list(s: &str) -> Vec<String> {
    s.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

/// A path to a tensor file, or a catalog entry name.
pub fn load_tensor(arg: &str) -> CliResult<TensorFile> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(TensorFile::load(path)?);
    }
    if arg.ends_with(".json") || arg.contains('/') {
        return Err(Error::InvalidFile(format!("{arg}: no such file")).into());
    }
    Ok(catalog::lookup(arg)?.file)
}

fn verdict(v: &ZeroVerdict) -> Value {
    serde_json::to_value(v).expect("verdict serializes")
}

fn mv1(x: &MV1) -> Value {
    let (w, b) = x.to_strings();
    json!({ "w": w, "b": b })
}

fn mv2(l: &MV2) -> Value {
    json!({ "psi": l.psi.to_strings(), "phi": l.phi.to_strings() })
}

/// Start an output object with the tensor name and its discrepancy flag.
fn header(file: &TensorFile) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tensor".into(), json!(file.name));
    if let Some(flag) = file.paper_discrepancy {
        m.insert("paper_discrepancy".into(), json!(flag));
    }
    m
}

fn outcome(m: Map<String, Value>, pass: bool) -> CliResult<Outcome> {
    Ok(Outcome {
        value: Value::Object(m),
        pass,
    })
}

pub fn dispatch(cmd: &Command, cfg: &SampleConfig) -> CliResult<Outcome> {
    match cmd {
        Command::Check(t) => check(&load_tensor(&t.tensor)?, cfg),
        Command::Bracket { t, f, g } => {
            let file = load_tensor(&t.tensor)?;
            let l = file.tensor()?;
            let (f, g) = (expr(f)?, expr(g)?);
            let mut m = header(&file);
            m.insert("f".into(), json!(f.to_string()));
            m.insert("g".into(), json!(g.to_string()));
            m.insert("bracket".into(), json!(bracket(&l, &f, &g).to_string()));
            outcome(m, true)
        }
        Command::Ham { t, h } => {
            let file = load_tensor(&t.tensor)?;
            let h = expr(h)?;
            let mut m = header(&file);
            m.insert("H".into(), json!(h.to_string()));
            m.insert("field".into(), mv1(&hamiltonian(&file.tensor()?, &h)));
            outcome(m, true)
        }
        Command::Modular(t) => {
            let file = load_tensor(&t.tensor)?;
            let z = modular(&file.tensor()?);
            let mut m = header(&file);
            m.insert("modular".into(), mv1(&z));
            m.insert("verdict".into(), verdict(&Multivector::G1(z).zero_verdict(cfg)?));
            outcome(m, true)
        }
        Command::Rank { t, p } => {
            let file = load_tensor(&t.tensor)?;
            let l = file.tensor()?;
            let p = point(p)?;
            let r = rank_at(&l, &p)?;
            let mut m = header(&file);
            m.insert("point".into(), json!(p.coords()));
            m.insert("rank".into(), json!(r.rank));
            m.insert("norm_sq".into(), json!(r.norm_sq));
            m.insert("psi_dot_phi".into(), json!(r.psi_dot_phi));
            m.insert("region".into(), json!(region_at(&l, &p)?.label()));
            outcome(m, true)
        }
        Command::Region { t, p } => {
            let file = load_tensor(&t.tensor)?;
            let p = point(p)?;
            let mut m = header(&file);
            m.insert("point".into(), json!(p.coords()));
            m.insert("region".into(), json!(region_at(&file.tensor()?, &p)?.label()));
            outcome(m, true)
        }
        Command::Casimir { t, k } => {
            let file = load_tensor(&t.tensor)?;
            let k = expr(k)?;
            let v = is_casimir(&file.tensor()?, &k, cfg)?;
            let mut m = header(&file);
            m.insert("k".into(), json!(k.to_string()));
            m.insert("is_casimir".into(), json!(v.kind()));
            m.insert("verdict".into(), verdict(&v));
            outcome(m, v.is_zero())
        }
        Command::Audit {
            identities,
            corpus_size,
        } => audit(identities.as_deref(), *corpus_size, cfg),
        Command::Decompose { t, method, f, g } => {
            let file = load_tensor(&t.tensor)?;
            let l = file.tensor()?;
            let dec = match method {
                Method::Fg => {
                    let (Some(f), Some(g)) = (f, g) else {
                        return Err(CliError::Usage("--method fg needs --f and --g".into()));
                    };
                    p4_core::families::decompose_fg(&l, &expr(f)?, &expr(g)?, cfg)?
                }
                Method::Modular => p4_core::families::decompose_modular(&l, cfg)?,
            };
            let mut m = header(&file);
            let pass = dec.verdict.is_zero();
            m.insert("decomposition".into(), decomposition(&dec));
            outcome(m, pass)
        }
        Command::Map { t, s, h, target } => {
            let file = load_tensor(&t.tensor)?;
            let [a, b, c] = split::<3>(s, ',', "--S")?;
            let f = Diffeo4::parse([&a, &b, &c], h)?;
            let dst = target.as_deref().map(load_tensor).transpose()?;
            let dst_tensor = dst.as_ref().map(TensorFile::tensor).transpose()?;
            let rep = poisson_map_check(&file.tensor()?, &f, dst_tensor.as_ref(), cfg)?;
            let mut m = header(&file);
            if let Some(d) = &dst {
                m.insert("target".into(), json!(d.name));
            }
            m.insert("map".into(), json!({ "S": f.s.to_strings(), "h": f.h.to_string() }));
            m.insert("determinant".into(), json!(f.determinant().simplify().to_string()));
            m.insert("report".into(), serde_json::to_value(&rep).expect("serializes"));
            outcome(m, rep.passes)
        }
        Command::Pvf { t, w, b } => {
            let file = load_tensor(&t.tensor)?;
            let x = MV1::new(vec3(w, "--W")?, expr(b)?);
            let rep = poisson_vf_check(&file.tensor()?, &x, cfg)?;
            let mut m = header(&file);
            m.insert("field".into(), mv1(&x));
            m.insert("lie_derivative".into(), mv2(&rep.definitional.clone()));
            m.insert("report".into(), serde_json::to_value(&rep).expect("serializes"));
            outcome(m, rep.passes)
        }
        Command::TangentPvf { t, alpha, g } => {
            let file = load_tensor(&t.tensor)?;
            let tf = tangent_pvf(&file.tensor()?, &vec3(alpha, "--alpha")?, &expr(g)?, cfg)?;
            let mut m = header(&file);
            m.insert("field".into(), mv1(&tf.field));
            m.insert("rank2".into(), json!(tf.rank2));
            m.insert("scalar".into(), json!(tf.scalar.to_string()));
            m.insert("p31".into(), json!(tf.p31.to_strings()));
            m.insert("p32".into(), json!(tf.p32.to_strings()));
            m.insert("conditions".into(), verdict(&tf.conditions));
            outcome(m, tf.conditions.is_zero())
        }
        Command::Family { kind } => family(kind, cfg),
        Command::Flow {
            t,
            h,
            p,
            t_end,
            dt,
            check,
            tol,
        } => {
            let file = load_tensor(&t.tensor)?;
            let l = file.tensor()?;
            let h = expr(h)?;
            let p0 = point(p)?;
            let mut invariants = Vec::new();
            for k in check.as_deref().map(list).unwrap_or_default() {
                invariants.push(expr(&k)?);
            }
            let traj = integrate(&hamiltonian(&l, &h), p0, *t_end, *dt)?;
            let rep = conservation_report(&l, &h, &invariants, &traj, cfg)?;
            let pass = rep.drifts.iter().all(|d| d.max_drift <= *tol);
            let mut m = header(&file);
            m.insert("H".into(), json!(h.to_string()));
            m.insert("field".into(), json!(traj.field));
            m.insert("start".into(), json!(p0.coords()));
            m.insert("end".into(), json!(traj.endpoint().coords()));
            m.insert("steps".into(), json!(traj.points.len() - 1));
            m.insert("dt".into(), json!(traj.step()));
            m.insert("tol".into(), json!(tol));
            m.insert("conservation".into(), serde_json::to_value(&rep).expect("serializes"));
            outcome(m, pass)
        }
        Command::Catalog { cmd } => catalog_cmd(cmd, cfg),
    }
}

fn check(file: &TensorFile, cfg: &SampleConfig) -> CliResult<Outcome> {
    let l = file.tensor()?;
    let v = is_poisson(&l, cfg)?;
    let (r0, r) = jacobi_residuals(&l);
    let residuals: Vec<&ScalarExpr> = std::iter::once(&r0).chain(r.components().iter()).collect();
    let mut residual_verdicts = Vec::new();
    for e in &residuals {
        residual_verdicts.push(json!(p4_core::expr::zero_verdict(e, cfg)?.kind()));
    }
    let jac = coordinate_jacobiators(&l).map(|j| j.simplify());
    let mut jacobiator_verdicts = Vec::new();
    for j in &jac {
        jacobiator_verdicts.push(json!(p4_core::expr::zero_verdict(j, cfg)?.kind()));
    }
    let mut m = header(file);
    m.insert("is_poisson".into(), json!(v.kind()));
    m.insert("verdict".into(), verdict(&v));
    m.insert("residuals".into(), json!(residuals.iter().map(|e| e.to_string()).collect::<Vec<_>>()));
    m.insert("residual_verdicts".into(), Value::Array(residual_verdicts));
    m.insert(
        "jacobiators".into(),
        json!({
            "triples": ["x1,x2,x3", "x1,x2,y", "x1,x3,y", "x2,x3,y"],
            "values": jac.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "verdicts": jacobiator_verdicts,
        }),
    );
    m.insert("psi_dot_phi".into(), json!(l.psi_dot_phi().to_string()));
    outcome(m, v.is_zero())
}

fn audit(ids: Option<&str>, corpus_size: usize, cfg: &SampleConfig) -> CliResult<Outcome> {
    let ids = ids.map(list).unwrap_or_default();
    for id in &ids {
        if identity(id).is_none() {
            return Err(CliError::Usage(format!("unknown identity `{id}`")));
        }
    }
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    let corpus = AuditCorpus::builtin(corpus_size, cfg)?;
    let report = run_audit(&corpus, &refs, cfg)?;
    let mut table = Map::new();
    for r in &report.identities {
        let entry = match &r.resolved {
            Some(s) if s.len() == 1 => json!(s[0]),
            Some(s) => json!(s),
            None => json!(serde_json::to_value(r.status).expect("serializes")),
        };
        table.insert(r.id.clone(), entry);
    }
    let mut value = serde_json::to_value(&report).expect("report serializes");
    let obj = value.as_object_mut().expect("report is an object");
    obj.insert("sign_table".into(), Value::Object(table));
    obj.insert("holds".into(), json!(report.holds()));
    obj.insert("failed".into(), json!(report.failed_ids()));
    Ok(Outcome {
        value,
        pass: report.holds(),
    })
}

fn decomposition(d: &Decomposition) -> Value {
    let parts: Vec<Value> = d
        .parts
        .iter()
        .zip(&d.signs)
        .map(|(p, s)| json!({ "name": p.name, "sign": s, "tensor": mv2(&p.tensor) }))
        .collect();
    json!({
        "method": d.method,
        "target": mv2(&d.target),
        "parts": parts,
        "residual": mv2(&d.residual),
        "verdict": verdict(&d.verdict),
        "divided": d.divided.as_deref().map(decomposition),
        "notes": d.notes,
    })
}

fn built(out: &Output, l: &MV2, cfg: &SampleConfig, extra: Map<String, Value>) -> CliResult<Outcome> {
    let file = TensorFile::from_tensor(&out.name, &MV2::new(l.psi.simplify(), l.phi.simplify()));
    if let Some(path) = &out.out {
        file.save(path)?;
    }
    let v = is_poisson(&file.tensor()?, cfg)?;
    let mut m = extra;
    m.insert("file".into(), serde_json::to_value(&file).expect("serializes"));
    m.insert("is_poisson".into(), json!(v.kind()));
    m.insert("verdict".into(), verdict(&v));
    outcome(m, v.is_zero())
}

fn family(kind: &Family, cfg: &SampleConfig) -> CliResult<Outcome> {
    let mut extra = Map::new();
    match kind {
        Family::Linear {
            m,
            n,
            p,
            q,
            alpha,
            beta,
            out,
        } => {
            let params = LinearParams::new(
                mat3(m, "--M")?,
                mat3(n, "--N")?,
                vec3(p, "--p")?,
                vec3(q, "--q")?,
                vec3(alpha, "--alpha")?,
                vec3(beta, "--beta")?,
            )?;
            let rep = linear_check(&params, cfg)?;
            extra.insert("family".into(), json!("linear"));
            extra.insert("constraints".into(), serde_json::to_value(&rep).expect("serializes"));
            built(out, &linear_build(&params), cfg, extra)
        }
        Family::Casimir { k, a, f, out } => {
            let c = casimir_family(&expr(k)?, &vec3(a, "--A")?, &expr(f)?);
            extra.insert("family".into(), json!("casimir"));
            extra.insert("residual".into(), json!(c.residual.to_string()));
            built(out, &c.tensor, cfg, extra)
        }
        Family::TwoCasimir { k1, k2, f, out } => {
            extra.insert("family".into(), json!("two-casimir"));
            built(out, &two_casimir_family(&expr(k1)?, &expr(k2)?, &expr(f)?), cfg, extra)
        }
        Family::Liouville { f, sigma, out } => {
            let lv = liouville_family(&expr(f)?, &vec3(sigma, "--sigma")?, cfg)?;
            extra.insert("family".into(), json!("liouville"));
            extra.insert("c_expr".into(), json!(lv.c_expr.to_string()));
            extra.insert("c_constant".into(), json!(lv.c_constant));
            extra.insert("c".into(), json!(lv.c));
            extra.insert("modular".into(), mv1(&modular(&lv.tensor)));
            built(out, &lv.tensor, cfg, extra)
        }
        Family::Rank2 { phi, sigma, out } => {
            let c = rank2_build(&vec3(phi, "--phi")?, &vec3(sigma, "--sigma")?);
            extra.insert("family".into(), json!("rank2"));
            extra.insert("residual".into(), json!(c.residual.to_strings()));
            built(out, &c.tensor, cfg, extra)
        }
    }
}

fn expected(e: &Expected) -> Value {
    let field = |f: &([&str; 3], &str)| json!({ "w": f.0, "b": f.1 });
    let ranks: Vec<Value> = e.ranks.iter().map(|(p, r)| json!({ "point": p, "rank": r })).collect();
    json!({
        "is_poisson": e.poisson,
        "residual_r0": e.residual_r0,
        "jacobiator_123": e.jacobiator_123,
        "modular": field(&e.modular),
        "displayed_modular": e.displayed_modular.as_ref().map(field),
        "psi_dot_phi": e.psi_dot_phi,
        "ranks": ranks,
        "casimirs": e.casimirs,
    })
}

fn entry_json(e: &CatalogEntry) -> Value {
    json!({
        "file": serde_json::to_value(&e.file).expect("serializes"),
        "expected": expected(&e.expected),
    })
}

fn catalog_cmd(cmd: &CatalogCmd, cfg: &SampleConfig) -> CliResult<Outcome> {
    match cmd {
        CatalogCmd::List => {
            let entries: Vec<Value> = catalog::entries()
                .iter()
                .map(|e| {
                    json!({
                        "name": e.file.name,
                        "paper_discrepancy": e.file.paper_discrepancy.unwrap_or(false),
                    })
                })
                .collect();
            Ok(Outcome {
                value: json!({ "entries": entries }),
                pass: true,
            })
        }
        CatalogCmd::Show { name } => Ok(Outcome {
            value: entry_json(&catalog::lookup(name)?),
            pass: true,
        }),
        CatalogCmd::Run { name, all } => {
            let entries = match (name, all) {
                (Some(n), false) => vec![catalog::lookup(n)?],
                (None, true) => catalog::entries(),
                _ => return Err(CliError::Usage("catalog run needs a name or --all".into())),
            };
            let reports = std::thread::scope(|s| {
                let handles: Vec<_> = entries.iter().map(|e| s.spawn(move || catalog::run(e, cfg))).collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("catalog worker panicked"))
                    .collect::<Result<Vec<_>, _>>()
            })?;
            let pass = reports.iter().all(|r| r.passes);
            let value = if *all {
                json!({
                    "entries": reports,
                    "passes": pass,
                    "passed": reports.iter().filter(|r| r.passes).count(),
                    "total": reports.len(),
                })
            } else {
                serde_json::to_value(&reports[0]).expect("serializes")
            };
            Ok(Outcome { value, pass })
        }
    }
}

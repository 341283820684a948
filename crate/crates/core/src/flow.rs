//! Fixed-step RK4 integration of vector fields and conservation reports for
//! Hamiltonian flows.

use serde::Serialize;

use crate::expr::{zero_verdict, Point4, SampleConfig, ScalarExpr, ZeroVerdict};
use crate::multivec::{trace, Multivector, MV1, MV2};
use crate::poisson::{hamiltonian, modular};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub points: Vec<Point4>,
    pub times: Vec<f64>,
    pub field: String,
}

impl Trajectory {
    pub fn endpoint(&self) -> Point4 {
        *self.points.last().expect("trajectory has at least one point")
    }

    pub fn step(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }
}

fn add_scaled(p: &Point4, k: &[f64; 4], h: f64) -> Point4 {
    let c = p.coords();
    Point4::from_coords(std::array::from_fn(|i| c[i] + h * k[i]))
}

/// Classical RK4 with `n = round(T/dt)` steps of size `T/n`.
pub fn integrate(x: &MV1, p0: Point4, t: f64, dt: f64) -> Result<Trajectory> {
    if !(dt > 0.0) || !(t >= dt) || !t.is_finite() {
        return Err(Error::Precondition(format!("need dt > 0 and T ≥ dt, got T = {t}, dt = {dt}")));
    }
    let n = (t / dt).round().max(1.0) as usize;
    let h = t / n as f64;
    let mut points = Vec::with_capacity(n + 1);
    let mut times = Vec::with_capacity(n + 1);
    points.push(p0);
    times.push(0.0);
    let mut p = p0;
    for i in 0..n {
        let k1 = x.eval(&p)?;
        let k2 = x.eval(&add_scaled(&p, &k1, h / 2.0))?;
        let k3 = x.eval(&add_scaled(&p, &k2, h / 2.0))?;
        let k4 = x.eval(&add_scaled(&p, &k3, h))?;
        let incr: [f64; 4] = std::array::from_fn(|j| (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) / 6.0);
        p = add_scaled(&p, &incr, h);
        points.push(p);
        times.push((i + 1) as f64 * h);
    }
    Ok(Trajectory {
        points,
        times,
        field: Multivector::G1(x.clone()).to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Drift {
    pub function: String,
    pub max_drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConservationReport {
    pub drifts: Vec<Drift>,
    /// `trace(X_H)` symbolically, and its largest magnitude along the path.
    pub trace: String,
    pub trace_verdict: ZeroVerdict,
    pub max_abs_trace: f64,
    /// Drift of `Φ·Ψ`, reported when `Z(H)` vanishes identically.
    pub psi_dot_phi_drift: Option<f64>,
}

fn max_drift(k: &ScalarExpr, traj: &Trajectory) -> Result<f64> {
    let k0 = k.eval(&traj.points[0])?;
    let mut worst = 0.0f64;
    for p in &traj.points {
        worst = worst.max((k.eval(p)? - k0).abs());
    }
    Ok(worst)
}

pub fn conservation_report(
    l: &MV2,
    h: &ScalarExpr,
    invariants: &[ScalarExpr],
    traj: &Trajectory,
    cfg: &SampleConfig,
) -> Result<ConservationReport> {
    let mut drifts = Vec::new();
    for k in invariants {
        drifts.push(Drift {
            function: k.to_string(),
            max_drift: max_drift(k, traj)?,
        });
    }
    let xh = hamiltonian(l, h);
    let tr = trace(&Multivector::G1(xh))?.into_scalar().simplify();
    let trace_verdict = zero_verdict(&tr, cfg)?;
    let mut max_abs_trace = 0.0f64;
    for p in &traj.points {
        max_abs_trace = max_abs_trace.max(tr.eval(p)?.abs());
    }
    let zh = modular(l).apply(h).simplify();
    let psi_dot_phi_drift = if zero_verdict(&zh, cfg)?.is_zero() {
        Some(max_drift(&l.psi_dot_phi(), traj)?)
    } else {
        None
    };
    Ok(ConservationReport {
        drifts,
        trace: tr.to_string(),
        trace_verdict,
        max_abs_trace,
        psi_dot_phi_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{example2, liouville};
    use crate::expr::{parse, SplitMix64, Var};
    use crate::random::random_polynomial;
    use crate::veccalc::{grad, Vec3Expr};

    fn p(s: &str) -> ScalarExpr {
        parse(s).unwrap().simplify()
    }

    fn sphere() -> MV2 {
        let g = p("x1^2/2 + x2^2/2 + x3^2/2");
        MV2::new(grad(&g), Vec3Expr::zero())
    }

    #[test]
    fn constant_field() {
        let tr = integrate(&MV1::basis(3), Point4::ORIGIN, 1.0, 0.1).unwrap();
        assert_eq!(tr.points.len(), 11);
        let e = tr.endpoint();
        assert!((e.y - 1.0).abs() < 1e-15 && e.x1 == 0.0 && e.x2 == 0.0 && e.x3 == 0.0);
    }

    #[test]
    fn circular_orbit_returns() {
        let x = hamiltonian(&sphere(), &p("x1"));
        assert_eq!(x.w, Vec3Expr::parse(["0", "x3", "-x2"]).unwrap().simplify());
        let p0 = Point4::new(0.0, 1.0, 0.0, 0.0);
        let tr = integrate(&x, p0, 2.0 * std::f64::consts::PI, 1e-3).unwrap();
        assert!(tr.endpoint().distance(&p0) <= 1e-8);
    }

    #[test]
    fn rk4_order() {
        let x = hamiltonian(&sphere(), &p("x1"));
        let p0 = Point4::new(0.0, 1.0, 0.0, 0.0);
        let t = 2.0 * std::f64::consts::PI;
        let e1 = integrate(&x, p0, t, 0.1).unwrap().endpoint().distance(&p0);
        let e2 = integrate(&x, p0, t, 0.05).unwrap().endpoint().distance(&p0);
        assert!(e1 / e2 >= 12.0, "{e1} {e2}");
    }

    #[test]
    fn modular_flow() {
        let z = modular(&example2());
        let tr = integrate(&z, Point4::new(1.0, 1.0, 1.0, 1.0), 1.0, 0.25).unwrap();
        let e = tr.endpoint();
        assert_eq!((e.x1, e.x2, e.x3), (1.0, 1.0, 1.0));
        assert!(e.y.abs() < 1e-15);
    }

    #[test]
    fn invalid_steps() {
        assert!(integrate(&MV1::basis(0), Point4::ORIGIN, 1.0, 0.0).is_err());
        assert!(integrate(&MV1::basis(0), Point4::ORIGIN, 0.01, 0.1).is_err());
    }

    #[test]
    fn pole_is_a_domain_error() {
        let x = MV1::new(Vec3Expr::new(p("1/x1"), ScalarExpr::zero(), ScalarExpr::zero()), ScalarExpr::zero());
        assert!(matches!(
            integrate(&x, Point4::ORIGIN, 1.0, 0.1),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn casimirs_are_conserved() {
        let l = sphere();
        let h = p("x1");
        let g = p("x1^2/2 + x2^2/2 + x3^2/2");
        let p0 = Point4::new(0.6, 0.0, 0.8, 0.3);
        let tr = integrate(&hamiltonian(&l, &h), p0, 10.0, 1e-2).unwrap();
        let rep = conservation_report(&l, &h, &[g, ScalarExpr::y()], &tr, &SampleConfig::default()).unwrap();
        for d in &rep.drifts {
            assert!(d.max_drift <= 1e-8, "{d:?}");
        }
    }

    #[test]
    fn liouville_flows_are_traceless() {
        let mut rng = SplitMix64::new(61);
        let l = liouville();
        for _ in 0..5 {
            let h = random_polynomial(&mut rng, 3, 4);
            let tr = trace(&Multivector::G1(hamiltonian(&l, &h))).unwrap().into_scalar();
            assert!(zero_verdict(&tr, &SampleConfig::default()).unwrap().is_symbolic());
        }
    }

    #[test]
    fn nonzero_modular_field_has_a_witness() {
        let l = example2();
        let found = Var::ALL.iter().any(|&v| {
            let tr = trace(&Multivector::G1(hamiltonian(&l, &ScalarExpr::var(v)))).unwrap().into_scalar();
            !zero_verdict(&tr, &SampleConfig::default()).unwrap().is_zero()
        });
        assert!(found);
    }

    #[test]
    fn example2_psi_dot_phi_is_conserved() {
        let l = example2();
        let h = p("x2");
        let p0 = Point4::new(0.5, 0.3, -0.2, 0.1);
        let tr = integrate(&hamiltonian(&l, &h), p0, 1.0, 1e-2).unwrap();
        let rep = conservation_report(&l, &h, &[], &tr, &SampleConfig::default()).unwrap();
        assert!(rep.psi_dot_phi_drift.unwrap() <= 1e-8);
    }

    #[test]
    fn casimir_drift_on_random_tensors() {
        let mut rng = SplitMix64::new(67);
        for _ in 0..3 {
            let k1 = random_polynomial(&mut rng, 2, 2);
            let k2 = random_polynomial(&mut rng, 2, 2);
            let l = crate::families::two_casimir_family(&k1, &k2, &ScalarExpr::one());
            let h = random_polynomial(&mut rng, 2, 2);
            let x = hamiltonian(&l, &h);
            let p0 = Point4::new(0.1, -0.2, 0.15, 0.05);
            let Ok(tr) = integrate(&x, p0, 1.0, 1e-2) else { continue };
            if tr.points.iter().any(|q| q.coords().iter().any(|c| c.abs() > 2.0 || !c.is_finite())) {
                continue;
            }
            let rep = conservation_report(&l, &h, &[k1, k2], &tr, &SampleConfig::default()).unwrap();
            for d in &rep.drifts {
                assert!(d.max_drift <= 1e-6, "{d:?}");
            }
        }
    }
}

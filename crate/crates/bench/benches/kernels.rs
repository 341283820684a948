use criterion::{black_box, criterion_group, criterion_main, Criterion};

use p4_bench::{expression, smooth_expressions, tensors, EXPRESSION};
use p4_core::corpus::example2;
use p4_core::expr::{parse, zero_verdict};
use p4_core::flow::integrate;
use p4_core::multivec::{schouten_self, trace, Multivector};
use p4_core::poisson::audit::{run_audit, AuditCorpus};
use p4_core::poisson::{hamiltonian, is_poisson, jacobi_residuals, modular};
use p4_core::{Point4, SampleConfig, ScalarExpr, Var};

fn expr_kernels(c: &mut Criterion) {
    let e = expression();
    let cfg = SampleConfig::default();
    c.bench_function("parse", |b| b.iter(|| parse(black_box(EXPRESSION)).unwrap()));
    c.bench_function("simplify", |b| b.iter(|| black_box(&e).simplify()));
    c.bench_function("diff_all_vars", |b| {
        b.iter(|| Var::ALL.map(|v| black_box(&e).diff(v).simplify()))
    });
    let smooth = smooth_expressions(16);
    let p = Point4::new(0.3, -0.7, 1.1, 0.5);
    c.bench_function("eval_16_smooth", |b| {
        b.iter(|| smooth.iter().map(|s| s.eval(black_box(&p)).unwrap_or(0.0)).sum::<f64>())
    });
    let zero = (&e - &e.simplify()).simplify();
    let nonzero = e.diff(Var::X1);
    c.bench_function("zero_verdict_symbolic", |b| b.iter(|| zero_verdict(black_box(&zero), &cfg).unwrap()));
    c.bench_function("zero_verdict_nonzero", |b| b.iter(|| zero_verdict(black_box(&nonzero), &cfg).unwrap()));
}

fn poisson_kernels(c: &mut Criterion) {
    let cfg = SampleConfig::default();
    let mut group = c.benchmark_group("is_poisson");
    for (name, l) in tensors() {
        group.bench_function(&name, |b| b.iter(|| is_poisson(black_box(&l), &cfg).unwrap()));
    }
    group.finish();
    let l = example2();
    c.bench_function("jacobi_residuals", |b| b.iter(|| jacobi_residuals(black_box(&l))));
    c.bench_function("modular", |b| b.iter(|| modular(black_box(&l))));
    c.bench_function("schouten_self", |b| b.iter(|| schouten_self(black_box(&l))));
    let h = ScalarExpr::x2() * ScalarExpr::y();
    c.bench_function("trace_hamiltonian", |b| {
        b.iter(|| trace(&Multivector::G1(hamiltonian(black_box(&l), &h))).unwrap())
    });
}

fn flow_kernels(c: &mut Criterion) {
    let x = hamiltonian(&example2(), &ScalarExpr::x2());
    let p0 = Point4::new(0.5, 0.3, -0.2, 0.1);
    c.bench_function("rk4_100_steps", |b| b.iter(|| integrate(black_box(&x), p0, 1.0, 1e-2).unwrap()));
}

fn audit_kernels(c: &mut Criterion) {
    let cfg = SampleConfig::default();
    let corpus = AuditCorpus::builtin(2, &cfg).unwrap();
    let mut group = c.benchmark_group("audit");
    group.sample_size(10);
    for id in ["A1", "A6", "A9"] {
        group.bench_function(id, |b| b.iter(|| run_audit(black_box(&corpus), &[id], &cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, expr_kernels, poisson_kernels, flow_kernels, audit_kernels);
criterion_main!(benches);

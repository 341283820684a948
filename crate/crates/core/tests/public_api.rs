//! End-to-end checks through the public API: tensor files, catalog, maps,
//! symmetries, flows and the audit.

use std::path::Path;

use p4_core::corpus::{random_linear_diffeo, transport};
use p4_core::expr::{parse, zero_verdict, SplitMix64};
use p4_core::families::two_casimir_family;
use p4_core::flow::{conservation_report, integrate};
use p4_core::maps::{poisson_map_check, poisson_vf_check};
use p4_core::multivec::Multivector;
use p4_core::poisson::audit::identity_audit;
use p4_core::poisson::{bracket, hamiltonian, is_casimir, is_poisson, signs};
use p4_core::random::{random_polynomial, random_vec3};
use p4_core::{catalog, AuditCorpus, Point4, SampleConfig, ScalarExpr, TensorFile, MV2};
use proptest::prelude::*;

fn cfg() -> SampleConfig {
    SampleConfig::default()
}

fn data_files() -> Vec<TensorFile> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let mut paths: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| TensorFile::load(p).unwrap()).collect()
}

#[test]
fn data_files_are_the_catalog() {
    let files = data_files();
    assert_eq!(files.len(), catalog::entries().len());
    for f in &files {
        let entry = catalog::lookup(&f.name).unwrap();
        assert_eq!(f, &entry.file);
        let report = catalog::run(&entry, &cfg()).unwrap();
        assert!(report.passes, "{}", f.name);
    }
}

#[test]
fn audit_on_data_files_reproduces_the_sign_table() {
    let named: Vec<(String, MV2)> = data_files()
        .into_iter()
        .map(|f| (f.name.clone(), f.tensor().unwrap()))
        .collect();
    let corpus = AuditCorpus::new(named, 1, &cfg()).unwrap();
    let ids = ["A16", "A17", "A18"];
    let report = identity_audit(&corpus, &ids, &cfg()).unwrap();
    assert!(report.holds(), "{:?}", report.failed_ids());
    assert_eq!(report.sign("A16"), Some(signs::VECTOR_FIELD_FORM));
    assert_eq!(report.sign("A17"), Some(signs::BRACKET_PHI_TERM));
    assert_eq!(report.sign("A18"), Some(signs::RANK2_POSITION_WEDGE));
}

#[test]
fn hamiltonian_fields_are_symmetries() {
    let mut rng = SplitMix64::new(5);
    for e in catalog::entries() {
        if e.expected.poisson != "zero" {
            continue;
        }
        let l = e.file.tensor().unwrap();
        let h = random_polynomial(&mut rng, 2, 3);
        let report = poisson_vf_check(&l, &hamiltonian(&l, &h), &cfg()).unwrap();
        assert!(report.passes, "{}", e.name());
        assert!(report.definitional_verdict.is_zero(), "{}", e.name());
    }
}

#[test]
fn flow_stays_on_the_sphere() {
    let l = catalog::lookup("rank2-gradient").unwrap().file.tensor().unwrap();
    let h = parse("x1*x2 + x3").unwrap();
    let sphere = parse("x1^2 + x2^2 + x3^2").unwrap();
    let traj = integrate(&hamiltonian(&l, &h), Point4::new(0.3, 0.8, -0.5, 1.0), 2.0, 1e-3).unwrap();
    let report = conservation_report(&l, &h, &[sphere, ScalarExpr::y(), h.clone()], &traj, &cfg()).unwrap();
    for d in &report.drifts {
        assert!(d.max_drift < 1e-9, "{}: {}", d.function, d.max_drift);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tensor_files_round_trip(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let l = MV2::new(random_vec3(&mut rng, 2, 3), random_vec3(&mut rng, 2, 3));
        let file = TensorFile::from_tensor("t", &l);
        let text = file.to_json();
        let back = TensorFile::from_json(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.to_json(), text);
        let diff = Multivector::G2(back.tensor().unwrap()).sub(&Multivector::G2(l));
        prop_assert!(diff.zero_verdict(&cfg()).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn linear_maps_transport_poisson_structures(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let k1 = random_polynomial(&mut rng, 2, 2);
        let k2 = random_polynomial(&mut rng, 2, 2);
        let l = two_casimir_family(&k1, &k2, &ScalarExpr::int(1));
        let (f, inverse) = random_linear_diffeo(&mut rng);
        let moved = transport(&l, &f, &inverse);
        prop_assert!(is_poisson(&moved, &cfg()).unwrap().is_zero());
        let report = poisson_map_check(&l, &f, Some(&moved), &cfg()).unwrap();
        prop_assert!(report.passes);
        // Casimirs move with the map.
        for k in [&k1, &k2] {
            let moved_k = k.substitute(&inverse).simplify();
            prop_assert!(is_casimir(&moved, &moved_k, &cfg()).unwrap().is_zero());
        }
        // {u, v}' = {u∘F, v∘F} ∘ F⁻¹.
        let u = random_polynomial(&mut rng, 1, 2);
        let v = random_polynomial(&mut rng, 1, 2);
        let lhs = bracket(&moved, &u, &v);
        let rhs = bracket(&l, &f.compose(&u), &f.compose(&v)).substitute(&inverse);
        prop_assert!(zero_verdict(&(lhs - rhs), &cfg()).unwrap().is_zero());
    }
}

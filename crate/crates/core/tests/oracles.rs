//! Hand-computed values and catalog-level expectations.

use bas_core::connections::{bismut, verdict_suite, BismutGeometry};
use bas_core::constructions::catalog::{self, calabi_eckmann, calabi_eckmann_witness_data, heisenberg_list_algebra, kodaira4};
use bas_core::constructions::{
    catalog_build, decide_nilpotent_bas, natred_witness, product_bas, NilVerdict, Obstruction, ProductFactor, WitnessInput,
};
use bas_core::hermitian::{ce_differential, HermitianData};
use bas_core::homogeneous::{canonical_reduction, canonical_tensors_of, kostant_form, natred_test};
use bas_core::linalg::{unit_vec, Matrix, Subspace};
use bas_core::nomizu::canonical_presentation;
use bas_core::scalar::qi;
use bas_core::Error;
use std::collections::BTreeMap;

#[test]
fn kodaira_torsion_and_verdicts() {
    let h = kodaira4();
    // basis z, w, e, Je with [e, Je] = z
    let b = bismut(&h).unwrap();
    assert_eq!(*b.t.get(&[0, 2, 3]), qi(-1));
    assert_eq!(*b.t.get(&[1, 2, 3]), qi(0));
    let v = verdict_suite(&h).unwrap();
    assert!(v.passes("bas"));
    assert!(v.passes("pluriclosed"));
    assert!(!v.passes("balanced"));
    assert!(!v.passes("kahler"));
}

#[test]
fn heisenberg_list_is_bas() {
    for name in ["r1_h3", "r3_h3", "r1_h5", "h3_h3", "r5_h3", "r3_h5", "r2_h3_h3", "r1_h7", "h3_h5", "n8_11"] {
        let n = heisenberg_list_algebra(name).unwrap();
        let d = decide_nilpotent_bas(&n);
        assert_eq!(d.verdict, NilVerdict::Yes, "{name}");
        let w = d.witness.expect("witness");
        assert!(w.is_exact(), "{name}");
        let h = w.standard_structure(&n).unwrap();
        assert!(verdict_suite(&h).unwrap().passes("bas"), "{name}");
    }
}

#[test]
fn complex_heisenberg_is_not_bas() {
    let h = catalog::h3c_natural();
    let n = h.carrier().algebra().unwrap();
    let d = decide_nilpotent_bas(n);
    assert_eq!(d.verdict, NilVerdict::No);
    match d.obstruction {
        Some(Obstruction::NotRealSemisimple { min_poly, .. }) => assert_eq!(min_poly.to_string(), "t^2 + 1"),
        other => panic!("{other:?}"),
    }
    let v = verdict_suite(&h).unwrap();
    let bas = v.get("bas").unwrap();
    assert!(!bas.pass);
    assert!(!bas.witness.as_ref().unwrap().is_zero());
}

#[test]
fn complex_semisimple() {
    let h = catalog::sl2c_canonical();
    assert!(verdict_suite(&h).unwrap().passes("bas"));
    let w = natred_witness(&WitnessInput::ComplexSemisimple(catalog::sl2c_witness_data())).unwrap();
    assert!(natred_test(&w.pair, &w.g).unwrap().all_pass());
}

#[test]
fn calabi_eckmann_family() {
    for (p, q, r) in [(1, 0, 1), (1, 0, 4), (4, 0, 9), (2, 1, 1)] {
        let h = calabi_eckmann(&qi(p), &qi(q), &qi(r)).unwrap();
        let v = verdict_suite(&h).unwrap();
        assert!(v.passes("bas"), "({p},{q},{r})");
        assert_eq!(v.passes("pluriclosed"), q == 0, "({p},{q},{r})");
        let dt = ce_differential(&bismut(&h).unwrap().t_form, h.carrier()).unwrap();
        // basis X1, X2, Y1, Y2, X3, Y3
        assert_eq!(*dt.get(&[0, 1, 2, 3]), qi(2 * q));
        let data = calabi_eckmann_witness_data(&qi(p), &qi(q), &qi(r)).unwrap();
        natred_witness(&WitnessInput::CompactTorusBundle(data)).unwrap();
    }
}

#[test]
fn presentation_matches_group_tensors() {
    for h in [kodaira4(), calabi_eckmann(&qi(1), &qi(0), &qi(4)).unwrap(), calabi_eckmann(&qi(1), &qi(0), &qi(1)).unwrap()] {
        let cp = canonical_presentation(&h).unwrap();
        let hp = HermitianData::on_pair(&cp.pair, cp.g.clone(), cp.j.clone()).unwrap();
        let ct = canonical_tensors_of(&hp);
        let geo = BismutGeometry::new(&h).unwrap();
        assert_eq!(&ct.t, geo.t());
        assert_eq!(ct.r, geo.r);
        assert_eq!(ct.theta_sharp, geo.chern.theta_sharp);
    }
}

#[test]
fn kodaira_reduction() {
    let h = kodaira4();
    let cp = canonical_presentation(&h).unwrap();
    let form = kostant_form(&cp.pair, &cp.g).unwrap();
    let red = canonical_reduction(&cp.pair, &cp.g, &cp.j, &form).unwrap();
    assert_eq!(red.f, Subspace::span(4, &[unit_vec(4, 0), unit_vec(4, 1)]));
    assert!(red.base_flat_kahler());
    assert_eq!(red.base.dim_m(), 2);
}

#[test]
fn bismut_flat_group_has_no_torus_reduction() {
    // bi-invariant metric on SU(2) x SU(2): the trivial submodule is all of m
    let h = calabi_eckmann(&qi(1), &qi(0), &qi(1)).unwrap();
    let cp = canonical_presentation(&h).unwrap();
    assert_eq!(cp.pair.dim_u(), 0);
    assert_eq!(cp.pair.trivial_submodule().dim(), 6);
    let form = kostant_form(&cp.pair, &cp.g).unwrap();
    assert!(matches!(canonical_reduction(&cp.pair, &cp.g, &cp.j, &form), Err(Error::UnsupportedHypothesis(_))));
}

#[test]
fn every_catalog_entry_verifies() {
    for name in catalog::list() {
        let e = catalog_build(name, &BTreeMap::new()).unwrap();
        let c = e.verify().unwrap();
        assert!(c.ok(), "{name}: {:?}", c.mismatches);
    }
}

#[test]
fn unknown_catalog_entry() {
    assert!(matches!(catalog_build("nope", &BTreeMap::new()), Err(Error::UnknownEntry(_))));
}

#[test]
fn kodaira_times_sl2c_product() {
    let s = catalog::sl2c_canonical();
    let k = ProductFactor::from_hermitian(&kodaira4(), vec![unit_vec(4, 0), unit_vec(4, 1)]).unwrap();
    let sf = ProductFactor::from_hermitian(&s, Vec::new()).unwrap();
    let j = Matrix::block_diag(&[kodaira4().j(), s.j()]);
    let h = product_bas(&[k, sf], &j).unwrap();
    assert!(verdict_suite(&h).unwrap().passes("bas"));
}

#[test]
fn non_integrable_j_is_reported() {
    let g = bas_core::algebra::LieAlgebra::from_int_brackets(&["a", "b", "c", "d"], &[(0, 1, &[(2, 1)])]).unwrap();
    // J a = c, J b = d
    let j = Matrix::from_ints(4, 4, &[0, 0, -1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 1, 0, 0]);
    let h = HermitianData::on_algebra(&g, Matrix::identity(4), j).unwrap();
    match h.require_integrable() {
        Err(Error::NotIntegrable { nijenhuis, .. }) => assert!(!nijenhuis.is_zero()),
        other => panic!("{other:?}"),
    }
}

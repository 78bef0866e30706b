use bas_core::connections::{identities::identity_suite, verdict_suite, BismutGeometry};
use bas_core::constructions::catalog::kodaira4;
use bas_core::constructions::nildecide::{verify_exact_witness, WitnessBasis};
use bas_core::constructions::{build_k_nilpotent, decide_nilpotent_bas, KNilpotentSpec, NilVerdict, Obstruction};
use bas_core::hermitian::HermitianData;
use bas_core::linalg::Matrix;
use bas_core::scalar::{qi, Scalar};
use proptest::prelude::*;

/// Weight vectors for `m` complex lines of a `k`-dimensional torus, none zero.
fn weights(k: usize, m: usize) -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    proptest::collection::vec(proptest::collection::vec(-3i64..4, k), m)
        .prop_filter("nonzero weights", |ws| ws.iter().all(|w| w.iter().any(|&x| x != 0)))
        .prop_map(|ws| ws.into_iter().map(|w| w.into_iter().map(qi).collect()).collect())
}

fn unit_upper(n: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-2i64..3, n * n).prop_map(move |v| {
        Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => qi(v[i * n + j]),
            std::cmp::Ordering::Equal => qi(1),
            std::cmp::Ordering::Greater => qi(0),
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn diagonal_specs_are_bas(ws in (1usize..3).prop_flat_map(|m| weights(2, m))) {
        let spec = KNilpotentSpec::diagonal(2, &ws);
        let built = build_k_nilpotent(&spec).unwrap();
        let d = decide_nilpotent_bas(&built.algebra);
        prop_assert_eq!(d.verdict, NilVerdict::Yes);
        let w = d.witness.unwrap();
        let WitnessBasis::Exact(p) = &w.basis else { panic!("numeric witness") };
        prop_assert!(verify_exact_witness(&built.algebra, p, w.centre_dim).is_some());
        let h = w.standard_structure(&built.algebra).unwrap();
        prop_assert!(verdict_suite(&h).unwrap().passes("bas"));
        prop_assert!(identity_suite(&BismutGeometry::new(&h).unwrap()).unwrap().all_pass());
    }

    #[test]
    fn odd_torus_has_no_structure(ws in (1usize..3).prop_flat_map(|m| weights(3, m))) {
        let built = build_k_nilpotent(&KNilpotentSpec::diagonal(3, &ws)).unwrap();
        let d = decide_nilpotent_bas(&built.algebra);
        let odd = matches!(d.obstruction, Some(Obstruction::OddCentre { dim: 3 }));
        prop_assert!(odd);
    }

    #[test]
    fn verdicts_do_not_depend_on_the_basis(p in unit_upper(4)) {
        let h = kodaira4();
        let l = h.carrier().algebra().unwrap();
        let names = l.names().to_vec();
        let moved = l.change_basis(&p, names).unwrap();
        let pinv = p.inverse().unwrap();
        let g = p.transpose().mul(h.g()).mul(&p);
        let j = pinv.mul(h.j()).mul(&p);
        let h2 = HermitianData::on_algebra(&moved, g, j).unwrap();
        let (a, b) = (verdict_suite(&h).unwrap(), verdict_suite(&h2).unwrap());
        for (name, c) in &a.checks {
            prop_assert_eq!(c.pass, b.passes(name), "{}", name);
        }
    }
}

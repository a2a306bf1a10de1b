use std::sync::Arc;

use proptest::prelude::*;

use qcss::constructions::{Family, QcssDescriptor};
use qcss::gf::{make_field, FieldElement};
use qcss::verifier::{correlate, predict_correlation, Prediction};

fn field_params() -> impl Strategy<Value = (u32, u32)> {
    prop::sample::select(vec![
        (2, 1),
        (2, 3),
        (2, 5),
        (3, 1),
        (3, 3),
        (5, 2),
        (7, 1),
        (11, 1),
        (13, 2),
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_operations_are_consistent((p, n) in field_params(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let fs = make_field(p, n).unwrap();
        let q = fs.q();
        let (a, b, c) = (fs.element_at(a % q).unwrap(), fs.element_at(b % q).unwrap(), fs.element_at(c % q).unwrap());
        prop_assert_eq!(fs.mul(a, fs.add(b, c)), fs.add(fs.mul(a, b), fs.mul(a, c)));
        prop_assert_eq!(fs.sub(fs.add(a, b), b), a);
        if let Some(inv) = fs.inv(a) {
            prop_assert_eq!(fs.mul(a, inv), FieldElement::ONE);
        }
        // the trace is additive and Frobenius-invariant
        prop_assert_eq!(fs.trace(fs.add(a, b)), (fs.trace(a) + fs.trace(b)) % p);
        prop_assert_eq!(fs.trace(fs.frobenius(c, 1)), fs.trace(c));
    }

    #[test]
    fn polynomial_families_take_integer_values(m1 in 0u64..729, m2 in 0u64..729, tau in 0u32..8) {
        let d = QcssDescriptor::new(Family::CubicOdd, Arc::new(make_field(3, 2).unwrap()), None).unwrap();
        let exact = correlate(&d, m1, m2, tau).unwrap();
        let v = exact.as_integer();
        prop_assert!(v.is_some());
        prop_assert_eq!(predict_correlation(&d, m1, m2, tau).unwrap().value, Prediction::Integer(v.unwrap()));
    }

    #[test]
    fn gauss_values_match_closed_form(m1 in 0u64..600, m2 in 0u64..600, tau in 0u32..24) {
        let d = QcssDescriptor::new(Family::GaussMixed, Arc::new(make_field(5, 2).unwrap()), None).unwrap();
        let exact = correlate(&d, m1, m2, tau).unwrap();
        let pred = predict_correlation(&d, m1, m2, tau).unwrap().value;
        prop_assert!(exact.value_eq(&pred.to_cyclo(d.unit_root_order()).unwrap()));
    }
}

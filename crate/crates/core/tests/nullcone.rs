use binvar_core::nullcone::{
    exceptional_forms_check, is_nullform, is_pair_nullform, lemma7_case_check, lemma8_case_check,
    verify_hsop, NumericForm,
};
use binvar_core::search::stream;
use binvar_core::BinaryForm;
use num_bigint::BigInt;
use num_rational::BigRational;

fn form(values: &[i64]) -> NumericForm {
    let coeffs = values
        .iter()
        .map(|&v| BigRational::from_integer(BigInt::from(v)))
        .collect();
    BinaryForm::new(values.len() as u32 - 1, 1, coeffs).unwrap()
}

#[test]
fn case_identities_hold() {
    let all: Vec<_> = lemma8_case_check()
        .unwrap()
        .into_iter()
        .chain(lemma7_case_check().unwrap())
        .collect();
    assert_eq!(all.len(), 8 + 8 + 11);
    for c in &all {
        assert!(c.holds(), "{}: ratio {:?}", c.label, c.ratio);
    }
}

#[test]
fn exceptional_forms_single_out_one_invariant() {
    let forms = exceptional_forms_check().unwrap();
    assert_eq!(forms.len(), 2);
    assert_eq!(forms[0].nonzero, vec!["A14".to_string()]);
    assert_eq!(forms[1].nonzero, vec!["j14".to_string()]);
    assert!(forms.iter().all(|f| f.combined_nonzero));
}

#[test]
fn hsop_cuts_out_the_nullcone_on_samples() {
    for n in [2, 4, 6, 8, 10] {
        let r = verify_hsop(n, 20, &mut stream(11, &[n as u64])).unwrap();
        assert!(r.passed(), "n={n}: {r:?}");
        assert_eq!(r.nullforms, 20);
    }
}

#[test]
fn nullform_examples() {
    // x^10 and x^6 y^4 are nullforms; x^5 y^5 sits on the border.
    let mut v = vec![0i64; 11];
    v[0] = 1;
    assert!(is_nullform(&form(&v)));
    let mut v = vec![0i64; 11];
    v[4] = 1;
    assert!(is_nullform(&form(&v)));
    let mut v = vec![0i64; 11];
    v[5] = 1;
    assert!(!is_nullform(&form(&v)));
    // x^3 y and x^6 share the root [0:1] with heavy multiplicity in each.
    assert!(is_pair_nullform(&form(&[0, 1, 0, 0, 0]), &form(&[1, 0, 0, 0, 0, 0, 0])).unwrap());
    assert!(!is_pair_nullform(&form(&[0, 1, 0, 0, 0]), &form(&[0, 0, 0, 0, 0, 0, 1])).unwrap());
}

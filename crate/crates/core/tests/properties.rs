use binvar_core::catalog::{evaluate_on, form_from_normalized};
use binvar_core::hilbert::dim_invariants;
use binvar_core::nullcone::{is_nullform, max_multiplicity, NumericForm};
use binvar_core::BinaryForm;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn form(values: &[i64]) -> NumericForm {
    BinaryForm::new(
        values.len() as u32 - 1,
        1,
        values.iter().map(|&v| q(v)).collect(),
    )
    .unwrap()
}

fn coeffs(order: u32) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, order as usize + 1)
}

/// Two forms of orders in 1..=7 and an admissible transvectant index.
fn pair() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, u32)> {
    (1u32..=7, 1u32..=7).prop_flat_map(|(n, m)| (coeffs(n), coeffs(m), 0..=n.min(m)))
}

fn sl2() -> impl Strategy<Value = [[i64; 2]; 2]> {
    (-3i64..=3, -3i64..=3, any::<bool>()).prop_map(|(s, t, swap)| {
        let m = [[1 + s * t, s], [t, 1]];
        if swap {
            // Composing with the rotation x -> -y, y -> x stays in SL2.
            [[-m[0][1], m[0][0]], [-m[1][1], m[1][0]]]
        } else {
            m
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn transvectant_symmetry((f, g, k) in pair()) {
        let (f, g) = (form(&f), form(&g));
        let sign = BigInt::from(if k % 2 == 0 { 1 } else { -1 });
        prop_assert_eq!(f.transvectant(&g, k).unwrap(), g.transvectant(&f, k).unwrap().scale_int(&sign));
    }

    #[test]
    fn transvectant_bilinear((f, g, k) in pair(), a in -4i64..=4, b in -4i64..=4, seed in any::<u64>()) {
        let (f, g) = (form(&f), form(&g));
        let h: Vec<i64> = (0..=f.order()).map(|i| ((seed >> (3 * i)) & 7) as i64 - 3).collect();
        let h = form(&h);
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let lhs = f.scale_int(&a).add(&h.scale_int(&b)).unwrap().transvectant(&g, k).unwrap();
        let rhs = f
            .transvectant(&g, k)
            .unwrap()
            .scale_int(&a)
            .add(&h.transvectant(&g, k).unwrap().scale_int(&b))
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn transvectant_equivariant((f, g, k) in pair(), m in sl2()) {
        let (f, g) = (form(&f), form(&g));
        let moved = f.apply_sl2(m).unwrap().transvectant(&g.apply_sl2(m).unwrap(), k).unwrap();
        prop_assert_eq!(moved, f.transvectant(&g, k).unwrap().apply_sl2(m).unwrap());
    }

    #[test]
    fn nullforms_are_sl2_stable(values in coeffs(6), m in sl2()) {
        let f = form(&values);
        let g = f.apply_sl2(m).unwrap();
        prop_assert_eq!(is_nullform(&f), is_nullform(&g));
        if !f.is_zero() {
            prop_assert_eq!(max_multiplicity(&f).unwrap().multiplicity, max_multiplicity(&g).unwrap().multiplicity);
        }
    }

    #[test]
    fn hermite_reciprocity(n in 1u32..=16, m in 1u32..=16) {
        prop_assert_eq!(dim_invariants(n, m), dim_invariants(m, n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn decimic_invariants_are_sl2_invariant(values in prop::collection::vec(-2i64..=2, 11), m in sl2()) {
        let f = form_from_normalized(&values.iter().map(|&v| q(v)).collect::<Vec<_>>());
        let g = f.apply_sl2(m).unwrap();
        for s in ["j2", "j4", "A6", "C6", "j6", "B6"] {
            prop_assert_eq!(evaluate_on(&f, s).unwrap(), evaluate_on(&g, s).unwrap(), "{}", s);
        }
    }
}

//! Comparisons of computed results against reference numbers and exact
//! property sweeps. Each check yields a named pass/fail line.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::binform::{generic_rational_form, BinaryForm};
use crate::catalog::{decimic_definitions, Catalog, CatalogError};
use crate::hilbert::{dim_invariants, numerator, poincare_table};
use crate::nullcone::{jerzy_predicate, jerzy_sample, NullconeError, NumericForm};
use crate::poly::{QPoly, VariableSet};
use crate::recipe::Evaluator;
use crate::reference;
use crate::ring::Rationals;
use crate::search::{DegreeReport, Status};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckLine {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// `dim I_m` for `m <= 48` against the reference series.
pub fn poincare_check() -> CheckLine {
    let table = poincare_table(10, 48);
    let bad: Vec<usize> = (0..=48)
        .filter(|&m| table.coeffs[m] != BigInt::from(reference::POINCARE_48[m]))
        .collect();
    CheckLine::new(
        "poincare",
        bad.is_empty(),
        if bad.is_empty() {
            "49 coefficients through t^48 agree".to_string()
        } else {
            format!("mismatch at degrees {bad:?}")
        },
    )
}

/// The numerator over the standard system of parameters: all coefficients
/// through `t^58`, the degree bound, palindromy and the first zero at a
/// multiple of six.
pub fn numerator_check() -> CheckLine {
    let need: u32 = reference::HSOP_DEGREES.iter().sum::<u32>() - 1;
    let table = poincare_table(10, need);
    let a = numerator(&table, &reference::HSOP_DEGREES).expect("table is long enough");
    let expected = |k: usize| {
        reference::NUMERATOR
            .iter()
            .find(|(d, _)| *d == k)
            .map_or(0, |(_, c)| *c)
    };
    let bad: Vec<usize> = (0..a.coeffs.len())
        .filter(|&k| a.coeffs[k] != BigInt::from(expected(k)))
        .collect();
    let ok = bad.is_empty()
        && a.nonzero_count() == reference::NUMERATOR.len()
        && a.degree_bound() == 48
        && a.is_palindromic()
        && a.smallest_zero_multiple(6) == Some(reference::FIRST_ZERO_MULTIPLE_OF_SIX);
    CheckLine::new(
        "numerator",
        ok,
        format!(
            "{} nonzero coefficients, degree bound {}, palindromic {}, first zero at a multiple of 6: {:?}, mismatches {:?}",
            a.nonzero_count(),
            a.degree_bound(),
            a.is_palindromic(),
            a.smallest_zero_multiple(6),
            bad
        ),
    )
}

fn parse(text: &str) -> QPoly {
    QPoly::parse(&VariableSet::form_coefficients(10), &Rationals, text).expect("fixed text parses")
}

fn form_matches(form: &BinaryForm<QPoly>, expected: &[&str]) -> bool {
    form.coeffs().len() == expected.len()
        && form
            .coeffs()
            .iter()
            .zip(expected)
            .all(|(c, e)| c == &parse(e))
}

/// Expansions of `j2`, `k`, `q` and of `(f, x^4)_4`, `(f, x^3 y)_4` against
/// the printed polynomials. The catalog must contain `j2`, `k` and `q`.
pub fn golden_checks(catalog: &Catalog) -> Result<Vec<CheckLine>, CatalogError> {
    let mut out = Vec::new();
    let j2 = catalog.invariant("j2")?;
    out.push(CheckLine::new(
        "golden j2",
        j2 == &parse(reference::J2),
        "(f,f)_10",
    ));
    let k = &catalog.get("k")?.expansion;
    out.push(CheckLine::new(
        "golden k",
        form_matches(k, &reference::K),
        "(f,f)_8, 5 coefficients",
    ));
    let q = &catalog.get("q")?.expansion;
    out.push(CheckLine::new(
        "golden q",
        form_matches(q, &reference::Q),
        "(f,f)_6, 9 coefficients",
    ));
    let defs = decimic_definitions();
    let f = generic_rational_form(10);
    let mut ev = Evaluator::new(f.clone(), &defs);
    for (label, index, expected) in [
        ("golden (f,x^4)_4", 0, &reference::F_X4),
        ("golden (f,x^3y)_4", 1, &reference::F_X3Y),
    ] {
        let vars = f.coeffs()[0].vars().clone();
        let mut c = alloc::vec![QPoly::zero(&vars, &Rationals); 5];
        c[index] = QPoly::one(&vars, &Rationals);
        ev.bind("g", BinaryForm::new(4, 0, c).expect("order four"));
        let m = ev.eval_str("(f,g)_4")?;
        out.push(CheckLine::new(
            label,
            form_matches(&m, expected),
            "7 coefficients",
        ));
    }
    Ok(out)
}

/// `d_m` from a search run against the reference table, through `max`.
pub fn basic_count_check(reports: &[DegreeReport], max: u32) -> CheckLine {
    let mut bad = Vec::new();
    for m in 2..=max {
        match reports.iter().find(|r| r.degree == m) {
            Some(r) if r.status == Status::Complete && r.dm == reference::basic_count(m) => {}
            Some(r) => bad.push(format!("d{m} = {} ({:?})", r.dm, r.status)),
            None => bad.push(format!("d{m} missing")),
        }
    }
    let found: Vec<String> = reports
        .iter()
        .filter(|r| r.degree <= max && r.dm > 0)
        .map(|r| format!("d{}={}", r.degree, r.dm))
        .collect();
    CheckLine::new(
        &format!("basic counts through degree {max}"),
        bad.is_empty(),
        if bad.is_empty() {
            found.join(" ")
        } else {
            format!("mismatch: {}", bad.join(", "))
        },
    )
}

/// `dim I_m` of `V_n` equals that of `V_m` for all `n, m <= max`.
pub fn hermite_check(max: u32) -> CheckLine {
    let bad: Vec<(u32, u32)> = (1..=max)
        .flat_map(|n| (1..=max).map(move |m| (n, m)))
        .filter(|&(n, m)| dim_invariants(n, m) != dim_invariants(m, n))
        .collect();
    CheckLine::new(
        "hermite reciprocity",
        bad.is_empty(),
        format!("{max}x{max} grid, mismatches {bad:?}"),
    )
}

fn random_numeric<R: Rng>(order: u32, rng: &mut R) -> NumericForm {
    let coeffs = (0..=order)
        .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-6i64..=6))))
        .collect();
    BinaryForm::new(order, 1, coeffs).expect("length matches order")
}

fn random_sl2<R: Rng>(rng: &mut R) -> [[i64; 2]; 2] {
    // Products of elementary matrices have determinant one.
    let s: i64 = rng.gen_range(-3..=3);
    let t: i64 = rng.gen_range(-3..=3);
    [[1 + s * t, s], [t, 1]]
}

/// Failures per property over `cases` random triples of forms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PropertyTally {
    pub cases: usize,
    pub symmetry: usize,
    pub bilinearity: usize,
    pub equivariance: usize,
}

/// `(f,g)_k = (-1)^k (g,f)_k`, linearity in the first argument, and
/// `(f M, g M)_k = (f,g)_k M` for random `M` in `SL2(Z)`, in exact arithmetic.
pub fn transvectant_properties<R: Rng>(cases: usize, rng: &mut R) -> PropertyTally {
    let mut tally = PropertyTally {
        cases,
        ..Default::default()
    };
    for _ in 0..cases {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=8);
        let k = rng.gen_range(0..=n.min(m));
        let f = random_numeric(n, rng);
        let h = random_numeric(n, rng);
        let g = random_numeric(m, rng);
        let fg = f.transvectant(&g, k).expect("index in range");
        let gf = g.transvectant(&f, k).expect("index in range");
        let sign = BigInt::from(if k % 2 == 0 { 1 } else { -1 });
        if fg != gf.scale_int(&sign) {
            tally.symmetry += 1;
        }
        let (a, b) = (
            BigInt::from(rng.gen_range(-5..=5)),
            BigInt::from(rng.gen_range(-5..=5)),
        );
        let combo = f.scale_int(&a).add(&h.scale_int(&b)).expect("same shape");
        let lhs = combo.transvectant(&g, k).expect("index in range");
        let rhs = fg
            .scale_int(&a)
            .add(&h.transvectant(&g, k).expect("index in range").scale_int(&b))
            .expect("same shape");
        if lhs != rhs {
            tally.bilinearity += 1;
        }
        let mat = random_sl2(rng);
        let moved = f
            .apply_sl2(mat)
            .expect("det one")
            .transvectant(&g.apply_sl2(mat).expect("det one"), k)
            .expect("index in range");
        if moved != fg.apply_sl2(mat).expect("det one") {
            tally.equivariance += 1;
        }
    }
    tally
}

pub fn transvectant_property_check<R: Rng>(cases: usize, rng: &mut R) -> CheckLine {
    let t = transvectant_properties(cases, rng);
    CheckLine::new(
        "transvectant properties",
        t.symmetry + t.bilinearity + t.equivariance == 0,
        format!(
            "{} cases; failures: symmetry {}, bilinearity {}, equivariance {}",
            t.cases, t.symmetry, t.bilinearity, t.equivariance
        ),
    )
}

/// Samples the root-multiplicity criterion over several `(d, k)` pairs from
/// both branches and counts violations (hypothesis without conclusion).
pub fn jerzy_check<R: Rng>(samples: usize, rng: &mut R) -> Result<CheckLine, NullconeError> {
    const CASES: [(u32, u32); 8] = [
        (8, 1),
        (6, 2),
        (8, 2),
        (10, 2),
        (8, 3),
        (10, 3),
        (12, 4),
        (9, 3),
    ];
    let mut hypotheses = 0;
    let mut violations = 0;
    for s in 0..samples {
        let (d, k) = CASES[s % CASES.len()];
        let f = jerzy_sample(d, k, rng);
        let o = jerzy_predicate(&f, k)?;
        hypotheses += o.hypothesis as usize;
        violations += !o.consistent() as usize;
    }
    Ok(CheckLine::new(
        "jerzy predicate",
        violations == 0,
        format!("{samples} samples, hypothesis held {hypotheses} times, violations {violations}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reference_series_and_numerator() {
        assert!(poincare_check().passed);
        let n = numerator_check();
        assert!(n.passed, "{}", n.detail);
    }

    #[test]
    fn properties_on_a_few_cases() {
        let t = transvectant_properties(30, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(
            t,
            PropertyTally {
                cases: 30,
                ..Default::default()
            }
        );
    }

    #[test]
    fn jerzy_few_samples() {
        let c = jerzy_check(24, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert!(c.passed, "{}", c.detail);
    }

    #[test]
    fn golden_small_catalog() {
        let c = Catalog::build_selected(|e| ["j2", "k", "q"].contains(&e.symbol)).unwrap();
        for line in golden_checks(&c).unwrap() {
            assert!(line.passed, "{}", line.name);
        }
    }
}

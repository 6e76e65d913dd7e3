//! JSON encodings of polynomials and binary forms.
//!
//! A polynomial is `{vars, domain, terms}` with `terms` a list of
//! `[exponents, "coefficient"]` pairs. A form is `{order, degree, vars,
//! domain, terms}` where `terms[i]` is the term list of the coefficient of
//! `x^(order-i) y^i`. Coefficients are always strings so that big integers
//! and fractions survive any JSON reader.

use std::sync::Arc;

use anyhow::{anyhow, bail, ensure, Context, Result};
use binvar_core::poly::{Monomial, QPoly, VariableSet};
use binvar_core::ring::{Coeff, Rationals};
use binvar_core::BinaryForm;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

pub type Term = (Vec<u32>, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub domain: String,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub order: u32,
    pub degree: u32,
    pub vars: Vec<String>,
    pub domain: String,
    pub terms: Vec<Vec<Term>>,
}

fn terms_of(p: &QPoly) -> Vec<Term> {
    let n = p.vars().len();
    p.terms()
        .map(|(m, c)| (m.exponents(n), c.render()))
        .collect()
}

fn poly_from_terms(vars: &Arc<VariableSet>, terms: &[Term]) -> Result<QPoly> {
    let mut out = Vec::with_capacity(terms.len());
    for (exps, c) in terms {
        ensure!(
            exps.len() == vars.len(),
            "term has {} exponents for {} variables",
            exps.len(),
            vars.len()
        );
        let m = Monomial::from_exponents(exps)?;
        let c = <BigRational as Coeff>::parse(&Rationals, c)
            .ok_or_else(|| anyhow!("bad coefficient `{c}`"))?;
        out.push((m, c));
    }
    Ok(QPoly::from_terms(vars, &Rationals, out))
}

fn check_domain(domain: &str) -> Result<()> {
    match domain {
        "QQ" | "ZZ" => Ok(()),
        other => bail!("unsupported domain `{other}`; expected QQ or ZZ"),
    }
}

pub fn poly_to_json(p: &QPoly) -> PolyJson {
    PolyJson {
        vars: p.vars().names().to_vec(),
        domain: "QQ".into(),
        terms: terms_of(p),
    }
}

pub fn poly_from_json(j: &PolyJson) -> Result<QPoly> {
    check_domain(&j.domain)?;
    let vars = VariableSet::new(&j.vars)?;
    poly_from_terms(&vars, &j.terms)
}

pub fn form_to_json(f: &BinaryForm<QPoly>) -> FormJson {
    let vars = f
        .coeffs()
        .first()
        .map(|c| c.vars().names().to_vec())
        .unwrap_or_default();
    FormJson {
        order: f.order(),
        degree: f.degree(),
        vars,
        domain: "QQ".into(),
        terms: f.coeffs().iter().map(terms_of).collect(),
    }
}

pub fn form_from_json(j: &FormJson) -> Result<BinaryForm<QPoly>> {
    check_domain(&j.domain)?;
    let vars = VariableSet::new(&j.vars)?;
    let coeffs = j
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| poly_from_terms(&vars, t).with_context(|| format!("coefficient {i}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(BinaryForm::new(j.order, j.degree, coeffs)?)
}

/// A form whose coefficients are numbers: every term list is empty or a
/// single constant term.
pub fn numeric_form_from_json(j: &FormJson) -> Result<BinaryForm<BigRational>> {
    let f = form_from_json(j)?;
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.as_constant()
                .ok_or_else(|| anyhow!("coefficient {i} is not a number"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BinaryForm::new(f.order(), f.degree(), coeffs)?)
}

pub fn numeric_form_to_json(f: &BinaryForm<BigRational>) -> FormJson {
    FormJson {
        order: f.order(),
        degree: f.degree(),
        vars: Vec::new(),
        domain: "QQ".into(),
        terms: f
            .coeffs()
            .iter()
            .map(|c| {
                if num_traits::Zero::is_zero(c) {
                    Vec::new()
                } else {
                    vec![(Vec::new(), c.render())]
                }
            })
            .collect(),
    }
}

pub fn read_form_file(path: &std::path::Path) -> Result<FormJson> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use binvar_core::binform::generic_rational_form;

    #[test]
    fn poly_round_trip() {
        let vars = VariableSet::form_coefficients(10);
        let p = QPoly::parse(&vars, &Rationals, "-252*a5^2 + 420*a4*a6 + 1/3*a0*a10").unwrap();
        let j = poly_to_json(&p);
        assert_eq!(poly_from_json(&j).unwrap(), p);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"1/3\""));
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn form_round_trip() {
        let f = generic_rational_form(4);
        let k = f.transvectant(&f, 2).unwrap();
        assert_eq!(form_from_json(&form_to_json(&k)).unwrap(), k);
    }

    #[test]
    fn numeric_forms() {
        let j: FormJson = serde_json::from_str(
            r#"{"order":2,"degree":1,"vars":[],"domain":"QQ","terms":[[[[],"1"]],[],[[[],"-2/3"]]]}"#,
        )
        .unwrap();
        let f = numeric_form_from_json(&j).unwrap();
        assert_eq!(f.coeffs()[2], BigRational::new((-2).into(), 3.into()));
        assert_eq!(numeric_form_to_json(&f), j);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = PolyJson {
            vars: vec!["x".into()],
            domain: "QQ".into(),
            terms: vec![(vec![1, 2], "1".into())],
        };
        assert!(poly_from_json(&bad).is_err());
        let bad = PolyJson {
            vars: vec!["x".into()],
            domain: "GF(7)".into(),
            terms: vec![],
        };
        assert!(poly_from_json(&bad).is_err());
    }
}

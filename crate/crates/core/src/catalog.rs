//! Named covariants and invariants of the binary decimic, and homogeneous
//! systems of parameters for forms of order 2, 4, 6, 8 and 10.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::binform::{generic_rational_form, BinaryForm};
use crate::poly::QPoly;
use crate::recipe::{Definitions, Evaluator, Recipe, RecipeError};
use crate::ring::{binomial, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error(transparent)]
    Recipe(#[from] RecipeError),
    #[error("`{symbol}` expanded to order {got_order}, degree {got_degree}; expected order {order}, degree {degree}")]
    Mismatch {
        symbol: String,
        order: u32,
        degree: u32,
        got_order: u32,
        got_degree: u32,
    },
    #[error("unknown catalog symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{0}` is a covariant, not an invariant")]
    NotInvariant(String),
    #[error("`{0}` has a coefficient that cannot be represented in the target ring")]
    NotRepresentable(String),
    #[error("no system of parameters is recorded for forms of order {0}")]
    UnsupportedOrder(u32),
    #[error("expected {expected} coefficients, got {got}")]
    BadPoint { expected: usize, got: usize },
}

/// Where an entry is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// The table of covariants and invariants that define the system of parameters.
    Table,
    /// Extra invariants of the eleven-element nullcone description.
    Nullcone,
    /// Invariants of `q` used in the `k = 0` membership checks.
    KZeroCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntrySpec {
    pub symbol: &'static str,
    pub recipe: &'static str,
    pub order: u32,
    pub degree: u32,
    pub role: Role,
}

const fn entry(
    symbol: &'static str,
    recipe: &'static str,
    order: u32,
    degree: u32,
    role: Role,
) -> EntrySpec {
    EntrySpec {
        symbol,
        recipe,
        order,
        degree,
        role,
    }
}

/// Every named covariant and invariant of the decimic, in dependency order.
pub const DECIMIC: &[EntrySpec] = &[
    entry("k", "(f,f)_8", 4, 2, Role::Table),
    entry("m", "(f,k)_4", 6, 3, Role::Table),
    entry("q", "(f,f)_6", 8, 2, Role::Table),
    entry("r", "(f,q)_8", 2, 3, Role::Table),
    entry("k_q", "(q,q)_6", 4, 4, Role::Table),
    entry("k_m", "(m,m)_4", 4, 6, Role::Table),
    entry("m_q", "(q,k_q)_4", 4, 6, Role::Table),
    entry("j2", "(f,f)_10", 0, 2, Role::Table),
    entry("j4", "(k,k)_4", 0, 4, Role::Table),
    entry("A6", "(m,m)_6", 0, 6, Role::Table),
    entry("C6", "(r,r)_2", 0, 6, Role::Table),
    entry("j8", "(k,k_m)_4", 0, 8, Role::Table),
    entry("j9", "((m,k)_1,k^2)_8", 0, 9, Role::Table),
    entry("j10", "((m,m)_2,k^2)_8", 0, 10, Role::Table),
    entry("j14", "((k_q,k_q)_2,m_q)_4", 0, 14, Role::Table),
    entry("A14", "((k,k)_2^2,(m,m)_2)_8", 0, 14, Role::Table),
    entry("j6", "((k,k)_2,k)_4", 0, 6, Role::Nullcone),
    entry("B6", "((q,q)_4,q)_8", 0, 6, Role::Nullcone),
    entry("A12", "(m^2,k^3)_12", 0, 12, Role::Nullcone),
    entry("A4", "(q,q)_8", 0, 4, Role::KZeroCase),
    entry("A8", "(k_q,k_q)_4", 0, 8, Role::KZeroCase),
    entry("A10", "(m_q,k_q)_4", 0, 10, Role::KZeroCase),
    entry("B12", "((k_q,k_q)_2,k_q)_4", 0, 12, Role::KZeroCase),
];

/// The eleven invariants whose common zero set is the nullcone of the decimic.
pub const NULLCONE_INVARIANTS: &[&str] = &[
    "j2", "j4", "j6", "A6", "B6", "j8", "j9", "j10", "A12", "j14", "A14",
];

/// Recipe table for the decimic.
pub fn decimic_definitions() -> Definitions {
    let mut defs = Definitions::new();
    for e in DECIMIC {
        defs.define(e.symbol, e.recipe)
            .expect("catalog recipes parse");
    }
    defs
}

pub fn spec(symbol: &str) -> Option<&'static EntrySpec> {
    DECIMIC.iter().find(|e| e.symbol == symbol)
}

/// A catalog entry with its expansion for the generic decimic.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedForm {
    pub spec: EntrySpec,
    pub recipe: Recipe,
    pub expansion: BinaryForm<QPoly>,
}

impl NamedForm {
    pub fn is_invariant(&self) -> bool {
        self.spec.order == 0
    }

    /// The invariant as a polynomial in `a0..a10`.
    pub fn invariant_polynomial(&self) -> Option<&QPoly> {
        self.expansion.scalar_value()
    }
}

/// All named decimic covariants and invariants, expanded once.
#[derive(Debug, Clone)]
pub struct Catalog {
    entries: Vec<NamedForm>,
    defs: Definitions,
}

fn check_shape(spec: &EntrySpec, form: &BinaryForm<QPoly>) -> Result<(), CatalogError> {
    if form.order() != spec.order || form.degree() != spec.degree {
        return Err(CatalogError::Mismatch {
            symbol: spec.symbol.to_string(),
            order: spec.order,
            degree: spec.degree,
            got_order: form.order(),
            got_degree: form.degree(),
        });
    }
    Ok(())
}

impl Catalog {
    /// Expands every recipe against the generic decimic.
    pub fn build_decimic() -> Result<Self, CatalogError> {
        Self::build_selected(|_| true)
    }

    /// Expands the entries accepted by `keep` (and whatever they depend on).
    pub fn build_selected(keep: impl Fn(&EntrySpec) -> bool) -> Result<Self, CatalogError> {
        let defs = decimic_definitions();
        let f = generic_rational_form(10);
        let mut ev = Evaluator::new(f, &defs);
        let mut entries = Vec::new();
        for spec in DECIMIC.iter().filter(|e| keep(e)) {
            let expansion = ev.eval_named(spec.symbol)?;
            check_shape(spec, &expansion)?;
            entries.push(NamedForm {
                spec: *spec,
                recipe: Recipe::parse(spec.recipe)?,
                expansion,
            });
        }
        Ok(Self { entries, defs })
    }

    /// Reassembles a catalog from previously computed expansions.
    pub fn from_expansions(
        expansions: Vec<(String, BinaryForm<QPoly>)>,
    ) -> Result<Self, CatalogError> {
        let mut entries = Vec::new();
        for (symbol, expansion) in expansions {
            let spec = spec(&symbol).ok_or_else(|| CatalogError::UnknownSymbol(symbol.clone()))?;
            check_shape(spec, &expansion)?;
            entries.push(NamedForm {
                spec: *spec,
                recipe: Recipe::parse(spec.recipe)?,
                expansion,
            });
        }
        Ok(Self {
            entries,
            defs: decimic_definitions(),
        })
    }

    pub fn entries(&self) -> &[NamedForm] {
        &self.entries
    }

    pub fn definitions(&self) -> &Definitions {
        &self.defs
    }

    pub fn get(&self, symbol: &str) -> Result<&NamedForm, CatalogError> {
        self.entries
            .iter()
            .find(|e| e.spec.symbol == symbol)
            .ok_or_else(|| CatalogError::UnknownSymbol(symbol.to_string()))
    }

    pub fn invariant(&self, symbol: &str) -> Result<&QPoly, CatalogError> {
        self.get(symbol)?
            .invariant_polynomial()
            .ok_or_else(|| CatalogError::NotInvariant(symbol.to_string()))
    }

    /// Value of a cached invariant at `a0..a10`.
    pub fn eval_invariant<S: Scalar>(&self, symbol: &str, coeffs: &[S]) -> Result<S, CatalogError> {
        if coeffs.len() != 11 {
            return Err(CatalogError::BadPoint {
                expected: 11,
                got: coeffs.len(),
            });
        }
        let poly = self.invariant(symbol)?;
        if poly.terms().any(|(_, c)| coeffs[0].ratio_like(c).is_none()) {
            return Err(CatalogError::NotRepresentable(symbol.to_string()));
        }
        Ok(poly
            .eval_with(coeffs, |c| coeffs[0].ratio_like(c).expect("checked above"))
            .expect("nonempty point"))
    }
}

/// The form `sum C(n,i) a_i x^(n-i) y^i` for given values of the `a_i`.
pub fn form_from_normalized<S: Scalar>(values: &[S]) -> BinaryForm<S> {
    let n = values.len() as u32 - 1;
    let coeffs = values
        .iter()
        .enumerate()
        .map(|(i, a)| a.scale_int(&binomial(n, i as u32)))
        .collect();
    BinaryForm::new(n, 1, coeffs).expect("length matches order")
}

/// Evaluates a decimic recipe (by symbol or expression) on a concrete form.
pub fn evaluate_on<S: Scalar>(
    form: &BinaryForm<S>,
    recipe: &str,
) -> Result<BinaryForm<S>, CatalogError> {
    let defs = decimic_definitions();
    let mut ev = Evaluator::new(form.clone(), &defs);
    Ok(ev.eval_str(recipe)?)
}

/// A homogeneous system of parameters given by recipes over `f`.
#[derive(Debug, Clone)]
pub struct HsopSpec {
    pub n: u32,
    pub defs: Definitions,
    pub members: Vec<(String, Recipe, u32)>,
}

impl HsopSpec {
    pub fn degrees(&self) -> Vec<u32> {
        self.members.iter().map(|m| m.2).collect()
    }

    /// Values of the members on a form of order `n`.
    pub fn evaluate<S: Scalar>(&self, form: &BinaryForm<S>) -> Result<Vec<S>, CatalogError> {
        let mut ev = Evaluator::new(form.clone(), &self.defs);
        let mut out = Vec::with_capacity(self.members.len());
        for (label, recipe, degree) in &self.members {
            let v = ev.eval(recipe)?;
            if v.order() != 0 || v.degree() != *degree {
                return Err(CatalogError::Mismatch {
                    symbol: label.clone(),
                    order: 0,
                    degree: *degree,
                    got_order: v.order(),
                    got_degree: v.degree(),
                });
            }
            out.push(v.scalar_value().expect("order zero").clone());
        }
        Ok(out)
    }
}

/// Systems of parameters for forms of order 2, 4, 6, 8 and the decimic.
pub fn hsop(n: u32) -> Result<HsopSpec, CatalogError> {
    let mut defs = Definitions::new();
    let members: &[(&str, &str, u32)] = match n {
        2 => &[("(f,f)_2", "(f,f)_2", 2)],
        4 => &[
            ("(f,f)_4", "(f,f)_4", 2),
            ("((f,f)_2,f)_4", "((f,f)_2,f)_4", 3),
        ],
        6 => {
            defs.define("k", "(f,f)_4")?;
            defs.define("m", "(f,k)_4")?;
            &[
                ("(f,f)_6", "(f,f)_6", 2),
                ("(k,k)_4", "(k,k)_4", 4),
                ("((k,k)_2,k)_4", "((k,k)_2,k)_4", 6),
                ("(m^2,(k,k)_2)_4", "(m^2,(k,k)_2)_4", 10),
            ]
        }
        8 => {
            defs.define("k", "(f,f)_6")?;
            defs.define("m", "(f,k)_4")?;
            &[
                ("(f,f)_8", "(f,f)_8", 2),
                ("((f,f)_4,f)_8", "((f,f)_4,f)_8", 3),
                ("(k,k)_4", "(k,k)_4", 4),
                ("(m,k)_4", "(m,k)_4", 5),
                ("((k,k)_2,k)_4", "((k,k)_2,k)_4", 6),
                ("((k,k)_2,m)_4", "((k,k)_2,m)_4", 7),
            ]
        }
        10 => {
            defs = decimic_definitions();
            &[
                ("j2", "j2", 2),
                ("j4", "j4", 4),
                ("A6", "A6", 6),
                ("C6", "C6", 6),
                ("j8", "j8", 8),
                ("j9", "j9", 9),
                ("j10", "j10", 10),
                ("j14+A14", "j14 + A14", 14),
            ]
        }
        other => return Err(CatalogError::UnsupportedOrder(other)),
    };
    let members = members
        .iter()
        .map(|(label, text, d)| Ok((label.to_string(), Recipe::parse(text)?, *d)))
        .collect::<Result<Vec<_>, CatalogError>>()?;
    Ok(HsopSpec { n, defs, members })
}

/// Small integers as exact rationals, e.g. for a point `a0..a10`.
pub fn rational_point(values: &[i64]) -> Vec<BigRational> {
    values
        .iter()
        .map(|&v| BigRational::from_integer(BigInt::from(v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Rationals;

    fn qpoly(text: &str) -> QPoly {
        QPoly::parse(
            &crate::poly::VariableSet::form_coefficients(10),
            &Rationals,
            text,
        )
        .unwrap()
    }

    fn small() -> Catalog {
        Catalog::build_selected(|e| ["j2", "k", "q"].contains(&e.symbol)).unwrap()
    }

    #[test]
    fn j2_matches_printed_expansion() {
        let c = small();
        assert_eq!(
            c.invariant("j2").unwrap(),
            &qpoly("-252*a5^2 + 420*a4*a6 - 240*a3*a7 + 90*a2*a8 - 20*a1*a9 + 2*a0*a10")
        );
    }

    #[test]
    fn k_and_q_extreme_coefficients() {
        let c = small();
        let k = &c.get("k").unwrap().expansion;
        assert_eq!(
            k.coeff(0),
            &qpoly("70*a4^2 - 112*a3*a5 + 56*a2*a6 - 16*a1*a7 + 2*a0*a8")
        );
        let q = &c.get("q").unwrap().expansion;
        assert_eq!(
            q.coeff(8),
            &qpoly("-20*a7^2 + 30*a6*a8 - 12*a5*a9 + 2*a4*a10")
        );
    }

    #[test]
    fn eval_j2() {
        let c = small();
        let mut p = alloc::vec![BigRational::from_integer(0.into()); 11];
        assert_eq!(
            c.eval_invariant("j2", &p).unwrap(),
            BigRational::from_integer(0.into())
        );
        p[0] = BigRational::from_integer(1.into());
        p[10] = BigRational::from_integer(1.into());
        assert_eq!(
            c.eval_invariant("j2", &p).unwrap(),
            BigRational::from_integer(2.into())
        );
        assert!(matches!(
            c.eval_invariant("k", &p),
            Err(CatalogError::NotInvariant(_))
        ));
        assert!(matches!(
            c.eval_invariant("zz", &p),
            Err(CatalogError::UnknownSymbol(_))
        ));
    }

    #[test]
    fn hsop_degrees() {
        assert_eq!(hsop(2).unwrap().degrees(), [2]);
        assert_eq!(hsop(4).unwrap().degrees(), [2, 3]);
        assert_eq!(hsop(6).unwrap().degrees(), [2, 4, 6, 10]);
        assert_eq!(hsop(8).unwrap().degrees(), [2, 3, 4, 5, 6, 7]);
        assert_eq!(hsop(10).unwrap().degrees(), [2, 4, 6, 6, 8, 9, 10, 14]);
        assert!(matches!(hsop(5), Err(CatalogError::UnsupportedOrder(5))));
    }

    #[test]
    fn hsop_on_quadratics() {
        let h = hsop(2).unwrap();
        let xy = BinaryForm::new(2, 1, rational_point(&[0, 1, 0])).unwrap();
        let x2 = BinaryForm::new(2, 1, rational_point(&[1, 0, 0])).unwrap();
        assert_ne!(h.evaluate(&xy).unwrap()[0], rational_point(&[0])[0]);
        assert_eq!(h.evaluate(&x2).unwrap()[0], rational_point(&[0])[0]);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let mut f = generic_rational_form(10);
        f = f.transvectant(&f, 8).unwrap();
        let err = check_shape(spec("q").unwrap(), &f).unwrap_err();
        assert!(matches!(
            err,
            CatalogError::Mismatch {
                order: 8,
                got_order: 4,
                ..
            }
        ));
    }
}

//! Ideal-membership facts about the covariants `j2`, `k`, `q` of the decimic
//! that feed the nullcone argument, decided by Gröbner bases.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::catalog::{Catalog, CatalogError};
use crate::groebner::{Budget, GroebnerError, Ideal};
use crate::modlin::PrimeField;
use crate::poly::{MonomialOrder, Polynomial, QPoly};
use crate::ring::{FieldCoeff, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MembershipError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("coefficient {0} has no image in the chosen field")]
    BadReduction(String),
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
}

/// The named membership claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Claim {
    /// `A4, A8, A10` lie in `I = (j2, coefficients of k)`.
    QInvariantsInI,
    /// `B12` lies in `(I, B6)`.
    B12InIB6,
    /// With `J = (j2, k, coefficients of x^4y^4 .. y^8 in q)` and `p1, p2, p3`
    /// the coefficients of `x^7y, x^6y^2, x^5y^3` in `q`: `p1^4, p2^3, p3^2 ∈ J`.
    QPowersInJ,
    /// With `J' = (j2, k, coefficients of x^7y .. y^8 in q)` and `p0` the
    /// coefficient of `x^8` in `q`: `a_i p0 ∈ J'` for `i = 4..10`.
    LeadTimesAInJPrime,
    /// `a5^2 ∈ (168 a5^2 + 2 a0 a10, -252 a5^2 + 2 a0 a10)`.
    A5FromKAndJ2,
}

impl Claim {
    pub const ALL: [Claim; 5] = [
        Claim::QInvariantsInI,
        Claim::B12InIB6,
        Claim::QPowersInJ,
        Claim::LeadTimesAInJPrime,
        Claim::A5FromKAndJ2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Claim::QInvariantsInI => "a4-a8-a10-in-i",
            Claim::B12InIB6 => "b12-in-i-b6",
            Claim::QPowersInJ => "q-powers-in-j",
            Claim::LeadTimesAInJPrime => "a-times-p0-in-j",
            Claim::A5FromKAndJ2 => "a5-vanishes",
        }
    }

    pub fn parse(name: &str) -> Result<Self, MembershipError> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| MembershipError::UnknownClaim(name.to_string()))
    }

    /// Catalog symbols the claim needs.
    pub fn symbols(&self) -> &'static [&'static str] {
        match self {
            Claim::QInvariantsInI => &["j2", "k", "A4", "A8", "A10"],
            Claim::B12InIB6 => &["j2", "k", "B6", "B12"],
            Claim::QPowersInJ | Claim::LeadTimesAInJPrime => &["j2", "k", "q"],
            Claim::A5FromKAndJ2 => &[],
        }
    }
}

/// Outcome of one membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipResult {
    pub label: String,
    pub member: bool,
}

/// Outcome of a claim over one coefficient field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimReport {
    pub claim: Claim,
    pub field: String,
    pub results: Vec<MembershipResult>,
    /// S-polynomial reductions spent across the claim's ideals.
    pub steps: usize,
}

impl ClaimReport {
    pub fn holds(&self) -> bool {
        self.results.iter().all(|r| r.member)
    }
}

/// Builds the catalog entries every claim needs.
pub fn claim_catalog() -> Result<Catalog, CatalogError> {
    Catalog::build_selected(|e| Claim::ALL.iter().any(|c| c.symbols().contains(&e.symbol)))
}

/// The image of a rational polynomial in a coefficient field.
trait Lift: FieldCoeff {
    fn lift(domain: &Self::Domain, c: &BigRational) -> Option<Self>;
}

impl Lift for BigRational {
    fn lift(_: &Rationals, c: &BigRational) -> Option<Self> {
        Some(c.clone())
    }
}

impl Lift for u32 {
    fn lift(f: &PrimeField, c: &BigRational) -> Option<Self> {
        let d = f.reduce_bigint(c.denom());
        f.inv(d).map(|di| f.mul(f.reduce_bigint(c.numer()), di))
    }
}

fn lift_poly<C: Lift>(p: &QPoly, domain: &C::Domain) -> Result<Polynomial<C>, MembershipError> {
    if let Some((_, c)) = p.terms().find(|(_, c)| C::lift(domain, c).is_none()) {
        return Err(MembershipError::BadReduction(c.to_string()));
    }
    Ok(p.map_coeffs(domain, |c| C::lift(domain, c).expect("checked above")))
}

struct Context<'a, C: Lift> {
    catalog: &'a Catalog,
    domain: C::Domain,
    budget: Budget,
}

impl<C: Lift> Context<'_, C> {
    fn invariant(&self, symbol: &str) -> Result<Polynomial<C>, MembershipError> {
        lift_poly(self.catalog.invariant(symbol)?, &self.domain)
    }

    fn coefficients(
        &self,
        symbol: &str,
        range: core::ops::RangeInclusive<u32>,
    ) -> Result<Vec<Polynomial<C>>, MembershipError> {
        let form = &self.catalog.get(symbol)?.expansion;
        range
            .map(|i| lift_poly(form.coeff(i), &self.domain))
            .collect()
    }

    fn ideal(&self, gens: Vec<Polynomial<C>>) -> Result<Ideal<C>, MembershipError> {
        Ok(Ideal::new(gens, MonomialOrder::GRevLex)?.with_budget(self.budget))
    }

    /// `(j2, coefficients of k)`.
    fn base_generators(&self) -> Result<Vec<Polynomial<C>>, MembershipError> {
        let mut gens = alloc::vec![self.invariant("j2")?];
        gens.extend(self.coefficients("k", 0..=4)?);
        Ok(gens)
    }

    fn run(&self, claim: Claim) -> Result<(Vec<MembershipResult>, usize), MembershipError> {
        let mut results = Vec::new();
        let mut steps = 0;
        let mut test = |ideal: &mut Ideal<C>,
                        label: String,
                        p: &Polynomial<C>|
         -> Result<(), MembershipError> {
            let member = ideal.reduces_to_zero(p)?;
            results.push(MembershipResult { label, member });
            Ok(())
        };
        match claim {
            Claim::QInvariantsInI => {
                let mut ideal = self.ideal(self.base_generators()?)?;
                for s in ["A4", "A8", "A10"] {
                    test(&mut ideal, s.to_string(), &self.invariant(s)?)?;
                }
                steps += ideal.state().steps();
            }
            Claim::B12InIB6 => {
                let mut gens = self.base_generators()?;
                gens.push(self.invariant("B6")?);
                let mut ideal = self.ideal(gens)?;
                test(&mut ideal, "B12".to_string(), &self.invariant("B12")?)?;
                steps += ideal.state().steps();
            }
            Claim::QPowersInJ => {
                let mut gens = self.base_generators()?;
                gens.extend(self.coefficients("q", 4..=8)?);
                let mut ideal = self.ideal(gens)?;
                let p = self.coefficients("q", 1..=3)?;
                for (i, e) in [(1usize, 4u32), (2, 3), (3, 2)] {
                    test(&mut ideal, alloc::format!("p{i}^{e}"), &p[i - 1].pow(e))?;
                }
                steps += ideal.state().steps();
            }
            Claim::LeadTimesAInJPrime => {
                let mut gens = self.base_generators()?;
                gens.extend(self.coefficients("q", 1..=8)?);
                let mut ideal = self.ideal(gens)?;
                let p0 = self.coefficients("q", 0..=0)?.remove(0);
                let vars = p0.vars().clone();
                for i in (4..=10).rev() {
                    let a = Polynomial::var(&vars, &self.domain, i);
                    test(&mut ideal, alloc::format!("a{i}*p0"), &(&a * &p0))?;
                }
                steps += ideal.state().steps();
            }
            Claim::A5FromKAndJ2 => {
                let vars = crate::poly::VariableSet::form_coefficients(10);
                let p = |s: &str| {
                    Polynomial::<C>::parse(&vars, &self.domain, s).expect("fixed text parses")
                };
                let mut ideal = self.ideal(alloc::vec![
                    p("168*a5^2 + 2*a0*a10"),
                    p("-252*a5^2 + 2*a0*a10")
                ])?;
                test(&mut ideal, "a5^2".to_string(), &p("a5^2"))?;
                steps += ideal.state().steps();
            }
        }
        Ok((results, steps))
    }
}

fn check<C: Lift>(
    catalog: &Catalog,
    claim: Claim,
    domain: C::Domain,
    field: String,
    budget: Budget,
) -> Result<ClaimReport, MembershipError> {
    let ctx = Context::<C> {
        catalog,
        domain,
        budget,
    };
    let (results, steps) = ctx.run(claim)?;
    Ok(ClaimReport {
        claim,
        field,
        results,
        steps,
    })
}

/// Decides a claim over the rationals.
pub fn check_over_rationals(
    catalog: &Catalog,
    claim: Claim,
    budget: Budget,
) -> Result<ClaimReport, MembershipError> {
    check::<BigRational>(catalog, claim, Rationals, "QQ".to_string(), budget)
}

/// Decides a claim over `GF(p)`; a sanity check against the rational verdict.
pub fn check_over_prime(
    catalog: &Catalog,
    claim: Claim,
    field: PrimeField,
    budget: Budget,
) -> Result<ClaimReport, MembershipError> {
    let name = alloc::format!("GF({})", field.modulus());
    check::<u32>(catalog, claim, field, name, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_names_round_trip() {
        for c in Claim::ALL {
            assert_eq!(Claim::parse(c.name()).unwrap(), c);
        }
        assert!(Claim::parse("nope").is_err());
    }

    #[test]
    fn a5_claim_over_both_fields() {
        let catalog = Catalog::from_expansions(Vec::new()).unwrap();
        let q = check_over_rationals(&catalog, Claim::A5FromKAndJ2, Budget::default()).unwrap();
        assert!(q.holds());
        let p = check_over_prime(
            &catalog,
            Claim::A5FromKAndJ2,
            PrimeField::new(32003).unwrap(),
            Budget::default(),
        )
        .unwrap();
        assert!(p.holds());
    }

    #[test]
    fn a4_lies_in_i() {
        let catalog = Catalog::build_selected(|e| ["j2", "k", "A4"].contains(&e.symbol)).unwrap();
        let ctx = Context::<BigRational> {
            catalog: &catalog,
            domain: Rationals,
            budget: Budget::default(),
        };
        let mut ideal = ctx.ideal(ctx.base_generators().unwrap()).unwrap();
        assert!(ideal
            .reduces_to_zero(&ctx.invariant("A4").unwrap())
            .unwrap());
        // A nonzero quadric outside I: a5^2 alone.
        let a5 = Polynomial::var(ctx.invariant("j2").unwrap().vars(), &Rationals, 5);
        assert!(!ideal.reduces_to_zero(&(&a5 * &a5)).unwrap());
    }
}

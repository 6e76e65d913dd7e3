use binvar_core::catalog::Catalog;
use binvar_core::membership::{check_over_prime, check_over_rationals, Claim};
use binvar_core::poly::QPoly;
use binvar_core::ring::Rationals;
use binvar_core::{Budget, GroebnerError, Ideal, MonomialOrder, PrimeField};

fn catalog() -> Catalog {
    Catalog::build_selected(|e| ["j2", "k", "q", "A4", "A8", "A10"].contains(&e.symbol)).unwrap()
}

#[test]
fn fast_claims_hold_over_both_fields() {
    let c = catalog();
    let field = PrimeField::new(32003).unwrap();
    for claim in [
        Claim::QInvariantsInI,
        Claim::QPowersInJ,
        Claim::LeadTimesAInJPrime,
        Claim::A5FromKAndJ2,
    ] {
        let q = check_over_rationals(&c, claim, Budget::default()).unwrap();
        assert!(q.holds(), "{} over QQ: {:?}", claim.name(), q.results);
        let p = check_over_prime(&c, claim, field, Budget::default()).unwrap();
        assert!(p.holds(), "{} mod p: {:?}", claim.name(), p.results);
    }
}

/// Non-membership controls: the same machinery must answer "no" when it
/// should.
#[test]
fn controls_fail() {
    let c = catalog();
    let mut gens = vec![c.invariant("j2").unwrap().clone()];
    gens.extend(c.get("k").unwrap().expansion.coeffs().iter().cloned());
    let mut ideal = Ideal::new(gens, MonomialOrder::GRevLex).unwrap();
    // p0 alone, without a factor a_i, is not in the ideal of j2 and k.
    let p0 = c.get("q").unwrap().expansion.coeffs()[0].clone();
    assert!(!ideal.reduces_to_zero(&p0).unwrap());
    let vars = p0.vars().clone();
    let a0 = QPoly::var(&vars, &Rationals, 0);
    assert!(!ideal.reduces_to_zero(&(&a0 * &a0)).unwrap());
}

#[test]
fn tiny_budget_is_reported() {
    let c = catalog();
    let err = check_over_rationals(&c, Claim::QInvariantsInI, Budget { max_steps: 1 }).unwrap_err();
    assert!(matches!(
        err,
        binvar_core::membership::MembershipError::Groebner(GroebnerError::Budget { .. })
    ));
}

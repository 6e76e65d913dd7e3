//! Buchberger's algorithm with the Gebauer–Möller pair criteria, normal
//! forms and ideal membership over any field coefficient domain.
//!
//! Homogeneous ideals can be completed degree by degree: a basis complete
//! through degree `D` decides membership of every homogeneous polynomial of
//! degree at most `D`, and the computation resumes where it stopped when a
//! higher degree is needed.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::poly::{Monomial, MonomialOrder, PolyError, Polynomial, VariableSet, MAX_VARS};
use crate::ring::FieldCoeff;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("step budget exhausted after {steps} S-polynomial reductions ({basis} basis elements, {pending} pairs pending)")]
    Budget {
        steps: usize,
        basis: usize,
        pending: usize,
    },
    #[error("degree truncation needs homogeneous generators")]
    NotHomogeneous,
    #[error("an ideal needs at least one generator to fix the ring")]
    NoGenerators,
}

/// Sort key realising a monomial order as plain lexicographic comparison.
type Key = [u16; MAX_VARS + 1];

fn key(order: MonomialOrder, m: &Monomial) -> Key {
    let mut k = [0u16; MAX_VARS + 1];
    match order {
        MonomialOrder::Lex => {
            for (i, e) in k.iter_mut().take(MAX_VARS).enumerate() {
                *e = m.exponent(i) as u16;
            }
        }
        MonomialOrder::GrLex => {
            k[0] = m.degree() as u16;
            for i in 0..MAX_VARS {
                k[i + 1] = m.exponent(i) as u16;
            }
        }
        MonomialOrder::GRevLex => {
            k[0] = m.degree() as u16;
            for i in 0..MAX_VARS {
                k[i + 1] = u16::MAX - m.exponent(MAX_VARS - 1 - i) as u16;
            }
        }
    }
    k
}

/// A polynomial as a list of terms, strictly decreasing in the order.
#[derive(Clone, Debug)]
struct Terms<C> {
    terms: Vec<(Monomial, C)>,
}

impl<C: FieldCoeff> Terms<C> {
    fn from_poly(p: &Polynomial<C>, order: MonomialOrder) -> Self {
        let mut terms: Vec<(Monomial, C)> = p.terms().map(|(m, c)| (*m, c.clone())).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Self { terms }
    }

    fn to_poly(&self, vars: &Arc<VariableSet>, domain: &C::Domain) -> Polynomial<C> {
        Polynomial::from_terms(vars, domain, self.terms.iter().cloned())
    }

    fn lead(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn make_monic(&mut self, domain: &C::Domain) {
        let inv = C::inv(domain, &self.terms[0].1).expect("leading coefficient is nonzero");
        for (_, c) in &mut self.terms {
            *c = C::mul(domain, c, &inv);
        }
    }
}

/// Reduces `p` completely by `reducers` (all monic). Returns the remainder.
fn reduce<C: FieldCoeff>(
    order: MonomialOrder,
    domain: &C::Domain,
    p: Terms<C>,
    reducers: &[&Terms<C>],
) -> Terms<C> {
    let mut pending: BTreeMap<Key, (Monomial, C)> = p
        .terms
        .into_iter()
        .map(|(m, c)| (key(order, &m), (m, c)))
        .collect();
    let mut out = Vec::new();
    while let Some((_, (m, c))) = pending.pop_last() {
        let divisor = reducers
            .iter()
            .find_map(|g| g.lead().quotient_of(&m).map(|q| (*g, q)));
        let Some((g, q)) = divisor else {
            out.push((m, c));
            continue;
        };
        for (gm, gc) in &g.terms[1..] {
            let nm = gm.mul(&q);
            let delta = C::mul(domain, &c, gc);
            let k = key(order, &nm);
            match pending.get_mut(&k) {
                Some(slot) => {
                    let s = C::sub(domain, &slot.1, &delta);
                    if s.is_zero() {
                        pending.remove(&k);
                    } else {
                        slot.1 = s;
                    }
                }
                None => {
                    pending.insert(k, (nm, C::neg(domain, &delta)));
                }
            }
        }
    }
    Terms { terms: out }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    degree: u32,
    lcm: Key,
    i: usize,
    j: usize,
}

/// Limits on a basis computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of S-polynomials reduced before giving up.
    pub max_steps: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_steps: 200_000 }
    }
}

/// Resumable Buchberger state for one ideal.
#[derive(Clone, Debug)]
pub struct Buchberger<C: FieldCoeff> {
    vars: Arc<VariableSet>,
    domain: C::Domain,
    order: MonomialOrder,
    homogeneous: bool,
    polys: Vec<Terms<C>>,
    active: Vec<bool>,
    pairs: BTreeSet<Pair>,
    /// Generators of degree above the current truncation, not yet inserted.
    deferred: Vec<Terms<C>>,
    /// Every pair and generator of degree at most this value has been handled.
    complete_through: Option<u32>,
    steps: usize,
}

impl<C: FieldCoeff> Buchberger<C> {
    pub fn new(generators: &[Polynomial<C>], order: MonomialOrder) -> Result<Self, GroebnerError> {
        let first = generators.first().ok_or(GroebnerError::NoGenerators)?;
        let vars = first.vars().clone();
        let domain = first.domain().clone();
        for g in generators {
            if g.vars() != &vars {
                return Err(PolyError::VariableMismatch.into());
            }
            if g.domain() != &domain {
                return Err(PolyError::DomainMismatch.into());
            }
        }
        let all: Vec<usize> = (0..vars.len()).collect();
        let homogeneous = generators.iter().all(|g| g.is_homogeneous_in(&all));
        let mut deferred: Vec<Terms<C>> = generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| Terms::from_poly(g, order))
            .collect();
        // Lowest degree last so that `pop` yields it first.
        deferred.sort_by_key(|p| core::cmp::Reverse(p.lead().degree()));
        Ok(Self {
            vars,
            domain,
            order,
            homogeneous,
            polys: Vec::new(),
            active: Vec::new(),
            pairs: BTreeSet::new(),
            deferred,
            complete_through: None,
            steps: 0,
        })
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// Number of S-polynomial reductions performed so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn is_complete(&self) -> bool {
        self.pairs.is_empty() && self.deferred.is_empty()
    }

    /// Completes the basis. With `Some(d)` only pairs and generators of degree
    /// at most `d` are processed, which needs homogeneous generators.
    pub fn run(&mut self, through: Option<u32>, budget: &Budget) -> Result<(), GroebnerError> {
        if through.is_some() && !self.homogeneous {
            return Err(GroebnerError::NotHomogeneous);
        }
        let within = |d: u32| through.is_none_or(|t| d <= t);
        loop {
            let next_gen = self.deferred.last().map(|g| g.lead().degree());
            let next_pair = self.pairs.first().map(|p| p.degree);
            let take_gen = match (next_gen, next_pair) {
                (Some(g), Some(p)) => g <= p,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            let degree = if take_gen {
                next_gen.unwrap()
            } else {
                next_pair.unwrap()
            };
            if !within(degree) {
                break;
            }
            let candidate = if take_gen {
                self.deferred.pop().unwrap()
            } else {
                if self.steps >= budget.max_steps {
                    return Err(GroebnerError::Budget {
                        steps: self.steps,
                        basis: self.basis_len(),
                        pending: self.pairs.len(),
                    });
                }
                self.steps += 1;
                let pair = self.pairs.pop_first().unwrap();
                self.s_polynomial(pair.i, pair.j)
            };
            let reducers = self.reducers();
            let h = reduce(self.order, &self.domain, candidate, &reducers);
            if !h.terms.is_empty() {
                self.insert(h);
            }
        }
        self.complete_through = match through {
            None => None,
            Some(t) => Some(self.complete_through.map_or(t, |c| c.max(t))),
        };
        Ok(())
    }

    fn basis_len(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    fn reducers(&self) -> Vec<&Terms<C>> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(p, _)| p)
            .collect()
    }

    fn s_polynomial(&self, i: usize, j: usize) -> Terms<C> {
        let (f, g) = (&self.polys[i], &self.polys[j]);
        let l = f.lead().lcm(g.lead());
        let qf = f.lead().quotient_of(&l).unwrap();
        let qg = g.lead().quotient_of(&l).unwrap();
        let mut acc: BTreeMap<Key, (Monomial, C)> = BTreeMap::new();
        for (m, c) in &f.terms[1..] {
            let nm = m.mul(&qf);
            acc.insert(key(self.order, &nm), (nm, c.clone()));
        }
        for (m, c) in &g.terms[1..] {
            let nm = m.mul(&qg);
            let k = key(self.order, &nm);
            match acc.get_mut(&k) {
                Some(slot) => {
                    let s = C::sub(&self.domain, &slot.1, c);
                    if s.is_zero() {
                        acc.remove(&k);
                    } else {
                        slot.1 = s;
                    }
                }
                None => {
                    acc.insert(k, (nm, C::neg(&self.domain, c)));
                }
            }
        }
        Terms {
            terms: acc.into_values().rev().collect(),
        }
    }

    fn pair(&self, i: usize, j: usize) -> Pair {
        let l = self.polys[i].lead().lcm(self.polys[j].lead());
        Pair {
            degree: l.degree(),
            lcm: key(self.order, &l),
            i,
            j,
        }
    }

    /// Gebauer–Möller update: adds `h` and its pairs, discarding those ruled
    /// out by the product and chain criteria.
    fn insert(&mut self, mut h: Terms<C>) {
        h.make_monic(&self.domain);
        let hi = self.polys.len();
        let hl = *h.lead();
        self.polys.push(h);
        self.active.push(true);

        let lcm_of = |s: &Self, i: usize| s.polys[i].lead().lcm(&hl);
        // Chain criterion among the new pairs: (g, h) is dropped when another
        // new pair still under consideration or already kept has an lcm
        // dividing lcm(g, h). Pairs with coprime leads survive this step so
        // that they can shadow others, then fall to the product criterion.
        let mut pending: Vec<(usize, Monomial)> = (0..hi)
            .filter(|&i| self.active[i])
            .map(|i| (i, lcm_of(self, i)))
            .collect();
        pending.reverse();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        while let Some((i, li)) = pending.pop() {
            let coprime = self.polys[i].lead().is_coprime(&hl);
            if coprime
                || !pending
                    .iter()
                    .chain(kept.iter())
                    .any(|(_, l)| l.divides(&li))
            {
                kept.push((i, li));
            }
        }
        // Old pairs whose lcm is strictly reached through h.
        let old: Vec<Pair> = self.pairs.iter().copied().collect();
        for p in old {
            let l = self.polys[p.i].lead().lcm(self.polys[p.j].lead());
            if hl.divides(&l) && lcm_of(self, p.i) != l && lcm_of(self, p.j) != l {
                self.pairs.remove(&p);
            }
        }
        // Product criterion.
        for (i, _) in kept {
            if !self.polys[i].lead().is_coprime(&hl) {
                let p = self.pair(i, hi);
                self.pairs.insert(p);
            }
        }
        for i in 0..hi {
            if self.active[i] && hl.divides(self.polys[i].lead()) {
                self.active[i] = false;
            }
        }
    }

    /// The current basis, reduced (monic, no lead divides any term of another).
    pub fn basis(&self) -> GroebnerBasis<C> {
        let mut leads: Vec<&Terms<C>> = self.reducers();
        leads.sort_by(|a, b| self.order.cmp(a.lead(), b.lead()));
        let minimal: Vec<&Terms<C>> = leads
            .iter()
            .enumerate()
            .filter(|(i, g)| !leads[..*i].iter().any(|h| h.lead().divides(g.lead())))
            .map(|(_, g)| *g)
            .collect();
        let mut reduced = Vec::with_capacity(minimal.len());
        for (i, g) in minimal.iter().enumerate() {
            let others: Vec<&Terms<C>> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, h)| *h)
                .collect();
            let head = Terms {
                terms: alloc::vec![g.terms[0].clone()],
            };
            let tail = reduce(
                self.order,
                &self.domain,
                Terms {
                    terms: g.terms[1..].to_vec(),
                },
                &others,
            );
            let mut t = head;
            t.terms.extend(tail.terms);
            reduced.push(t);
        }
        GroebnerBasis {
            vars: self.vars.clone(),
            domain: self.domain.clone(),
            order: self.order,
            elements: reduced,
            complete_through: if self.is_complete() {
                None
            } else {
                self.complete_through
            },
        }
    }

    /// Normal form of `p` modulo the current (possibly truncated) basis.
    pub fn normal_form(&self, p: &Polynomial<C>) -> Polynomial<C> {
        let reducers = self.reducers();
        reduce(
            self.order,
            &self.domain,
            Terms::from_poly(p, self.order),
            &reducers,
        )
        .to_poly(&self.vars, &self.domain)
    }
}

/// A reduced Gröbner basis, possibly truncated at a degree.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<C: FieldCoeff> {
    vars: Arc<VariableSet>,
    domain: C::Domain,
    order: MonomialOrder,
    elements: Vec<Terms<C>>,
    complete_through: Option<u32>,
}

impl<C: FieldCoeff> GroebnerBasis<C> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// `None` for a complete basis, otherwise the degree it is complete through.
    pub fn truncation(&self) -> Option<u32> {
        self.complete_through
    }

    pub fn polynomials(&self) -> Vec<Polynomial<C>> {
        self.elements
            .iter()
            .map(|t| t.to_poly(&self.vars, &self.domain))
            .collect()
    }

    pub fn normal_form(&self, p: &Polynomial<C>) -> Polynomial<C> {
        let reducers: Vec<&Terms<C>> = self.elements.iter().collect();
        reduce(
            self.order,
            &self.domain,
            Terms::from_poly(p, self.order),
            &reducers,
        )
        .to_poly(&self.vars, &self.domain)
    }
}

/// Computes a reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger<C: FieldCoeff>(
    gens: &[Polynomial<C>],
    order: MonomialOrder,
    budget: &Budget,
) -> Result<GroebnerBasis<C>, GroebnerError> {
    let mut state = Buchberger::new(gens, order)?;
    state.run(None, budget)?;
    Ok(state.basis())
}

/// An ideal with a lazily computed basis, used for membership questions.
#[derive(Clone, Debug)]
pub struct Ideal<C: FieldCoeff> {
    generators: Vec<Polynomial<C>>,
    state: Buchberger<C>,
    budget: Budget,
}

impl<C: FieldCoeff> Ideal<C> {
    pub fn new(
        generators: Vec<Polynomial<C>>,
        order: MonomialOrder,
    ) -> Result<Self, GroebnerError> {
        let state = Buchberger::new(&generators, order)?;
        Ok(Self {
            generators,
            state,
            budget: Budget::default(),
        })
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn generators(&self) -> &[Polynomial<C>] {
        &self.generators
    }

    pub fn state(&self) -> &Buchberger<C> {
        &self.state
    }

    /// Exact membership test. For homogeneous ideals and homogeneous `p` the
    /// basis is only completed through `deg p`.
    pub fn reduces_to_zero(&mut self, p: &Polynomial<C>) -> Result<bool, GroebnerError> {
        if p.is_zero() {
            return Ok(true);
        }
        if p.vars() != &self.state.vars {
            return Err(PolyError::VariableMismatch.into());
        }
        let all: Vec<usize> = (0..p.vars().len()).collect();
        let through = if self.state.homogeneous && p.is_homogeneous_in(&all) {
            p.total_degree()
        } else {
            None
        };
        let done = match (through, self.state.complete_through) {
            _ if self.state.is_complete() => true,
            (Some(d), Some(c)) => d <= c,
            _ => false,
        };
        if !done {
            self.state.run(through, &self.budget)?;
        }
        Ok(self.state.normal_form(p).is_zero())
    }

    /// Complete reduced basis of the ideal.
    pub fn basis(&mut self) -> Result<GroebnerBasis<C>, GroebnerError> {
        if !self.state.is_complete() {
            self.state.run(None, &self.budget)?;
        }
        Ok(self.state.basis())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modlin::PrimeField;
    use crate::ring::Rationals;
    use alloc::vec;
    use num_rational::BigRational;

    type Q = Polynomial<BigRational>;

    fn ring(names: &[&str]) -> Arc<VariableSet> {
        VariableSet::new(names).unwrap()
    }

    fn q(v: &Arc<VariableSet>, s: &str) -> Q {
        Q::parse(v, &Rationals, s).unwrap()
    }

    #[test]
    fn linear_generators() {
        let v = ring(&["x", "y"]);
        let b = buchberger(
            &[q(&v, "x + y"), q(&v, "y")],
            MonomialOrder::GRevLex,
            &Budget::default(),
        )
        .unwrap();
        let mut polys = b.polynomials();
        polys.sort_by_key(|p| p.to_text());
        assert_eq!(polys, vec![q(&v, "x"), q(&v, "y")]);
    }

    #[test]
    fn principal_ideal() {
        let v = ring(&["x"]);
        let b = buchberger(
            &[q(&v, "x^2 - 1")],
            MonomialOrder::GRevLex,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(b.polynomials(), vec![q(&v, "x^2 - 1")]);
    }

    #[test]
    fn one_is_not_in_a_proper_ideal() {
        let v = ring(&["x"]);
        let mut i = Ideal::new(vec![q(&v, "x")], MonomialOrder::GRevLex).unwrap();
        assert!(!i.reduces_to_zero(&q(&v, "1")).unwrap());
        assert!(i.reduces_to_zero(&q(&v, "x^3 - 2*x")).unwrap());
    }

    #[test]
    fn twisted_cubic() {
        // The 2x2 minors of [[x, y, z], [y, z, w]].
        let v = ring(&["x", "y", "z", "w"]);
        let gens = vec![q(&v, "x*z - y^2"), q(&v, "x*w - y*z"), q(&v, "y*w - z^2")];
        for order in [
            MonomialOrder::GRevLex,
            MonomialOrder::GrLex,
            MonomialOrder::Lex,
        ] {
            let b = buchberger(&gens, order, &Budget::default()).unwrap();
            for g in &gens {
                assert!(b.normal_form(g).is_zero());
            }
            assert!(!b.normal_form(&q(&v, "x*w")).is_zero());
        }
        let b = buchberger(&gens, MonomialOrder::GRevLex, &Budget::default()).unwrap();
        assert_eq!(b.len(), 3);
    }

    #[test]
    fn cyclic_three_over_a_prime() {
        let f = PrimeField::new(32003).unwrap();
        let v = ring(&["a", "b", "c"]);
        let p = |s: &str| Polynomial::<u32>::parse(&v, &f, s).unwrap();
        let gens = vec![p("a + b + c"), p("a*b + b*c + c*a"), p("a*b*c - 1")];
        let b = buchberger(&gens, MonomialOrder::Lex, &Budget::default()).unwrap();
        // Lex basis of cyclic-3 is {a + b + c, b^2 + b*c + c^2, c^3 - 1}.
        let mut polys = b.polynomials();
        polys.sort_by_key(|p| p.total_degree());
        assert_eq!(
            polys,
            vec![p("a + b + c"), p("b^2 + b*c + c^2"), p("c^3 - 1")]
        );
    }

    #[test]
    fn truncated_runs_resume() {
        let v = ring(&["x", "y", "z", "w"]);
        let gens = vec![q(&v, "x*z - y^2"), q(&v, "x*w - y*z"), q(&v, "y*w - z^2")];
        let mut ideal = Ideal::new(gens, MonomialOrder::GRevLex).unwrap();
        assert!(ideal.reduces_to_zero(&q(&v, "x*z - y^2")).unwrap());
        assert!(!ideal.state().is_complete());
        let combo = &(&q(&v, "z^2") * &q(&v, "x*z - y^2")) + &(&q(&v, "y*w") * &q(&v, "y*w - z^2"));
        assert!(ideal.reduces_to_zero(&combo).unwrap());
        assert!(!ideal.reduces_to_zero(&q(&v, "x*z - y*z")).unwrap());
        assert!(!ideal.reduces_to_zero(&q(&v, "x^4")).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let v = ring(&["x", "y", "z", "w"]);
        let gens = vec![q(&v, "x*z - y^2"), q(&v, "x*w - y*z"), q(&v, "y*w - z^2")];
        let mut s = Buchberger::new(&gens, MonomialOrder::GRevLex).unwrap();
        let err = s.run(None, &Budget { max_steps: 0 }).unwrap_err();
        assert!(matches!(err, GroebnerError::Budget { steps: 0, .. }));
    }

    #[test]
    fn normal_form_is_idempotent() {
        let v = ring(&["x", "y", "z"]);
        let gens = vec![q(&v, "x^2 - y*z"), q(&v, "y^2 - x*z + z^2")];
        let b = buchberger(&gens, MonomialOrder::GRevLex, &Budget::default()).unwrap();
        let p = q(&v, "x^3*y + 3*x*y*z^2 - 7*z^4 + y^3");
        let r = b.normal_form(&p);
        assert_eq!(b.normal_form(&r), r);
        assert!(b.normal_form(&(&p - &r)).is_zero());
    }

    #[test]
    fn truncation_needs_homogeneous_input() {
        let v = ring(&["x"]);
        let mut s = Buchberger::new(&[q(&v, "x^2 - 1")], MonomialOrder::GRevLex).unwrap();
        assert_eq!(
            s.run(Some(3), &Budget::default()).unwrap_err(),
            GroebnerError::NotHomogeneous
        );
    }
}

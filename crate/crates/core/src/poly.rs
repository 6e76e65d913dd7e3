//! Sparse multivariate polynomials over a pluggable coefficient domain.
//!
//! Monomials are fixed-width exponent arrays over an ordered [`VariableSet`];
//! terms are kept in a `BTreeMap` under graded lexicographic order, so the
//! printed form and every iteration order are canonical.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;

use crate::modlin::PrimeField;
use crate::ring::{Coeff, Integers, Scalar};

/// Hard limit on the number of variables of a ring.
pub const MAX_VARS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("coefficient domains differ")]
    DomainMismatch,
    #[error("variable sets differ")]
    VariableMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("variable `{0}` is not bound")]
    Unbound(String),
    #[error("{0} is not a prime")]
    CompositeModulus(u64),
    #[error("exponent {0} exceeds the supported range")]
    ExponentOverflow(u64),
    #[error("polynomial is not homogeneous of degree {0} in the requested variables")]
    NotHomogeneous(u32),
    #[error("parse error: {0}")]
    Parse(String),
}

/// An ordered list of variable names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VariableSet {
    names: Vec<String>,
}

impl VariableSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, PolyError> {
        if names.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(names.len()));
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if out.iter().any(|o| o == n) {
                return Err(PolyError::DuplicateVariable(n.to_string()));
            }
            out.push(n.to_string());
        }
        Ok(Arc::new(Self { names: out }))
    }

    /// `a0, ..., an` followed by `x, y`.
    pub fn form_coefficients_xy(n: u32) -> Arc<Self> {
        let mut names: Vec<String> = (0..=n).map(|i| alloc::format!("a{i}")).collect();
        names.push("x".into());
        names.push("y".into());
        Self::new(&names).expect("valid variable set")
    }

    /// `a0, ..., an`.
    pub fn form_coefficients(n: u32) -> Arc<Self> {
        let names: Vec<String> = (0..=n).map(|i| alloc::format!("a{i}")).collect();
        Self::new(&names).expect("valid variable set")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, PolyError> {
        self.index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }
}

impl fmt::Debug for VariableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

fn same_vars(a: &Arc<VariableSet>, b: &Arc<VariableSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A power product. Unused trailing slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::one();
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self, PolyError> {
        if exps.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(exps.len()));
        }
        let mut m = Self::one();
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u16::try_from(e).map_err(|_| PolyError::ExponentOverflow(e as u64))?;
        }
        Ok(m)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| e as u32).collect()
    }

    pub fn set_exponent(&mut self, i: usize, e: u32) {
        self.exps[i] = e as u16;
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&v| self.exps[v] as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = *self;
        for (o, e) in out.exps.iter_mut().zip(other.exps.iter()) {
            *o += *e;
        }
        out
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        if !self.divides(other) {
            return None;
        }
        let mut out = *other;
        for (o, e) in out.exps.iter_mut().zip(self.exps.iter()) {
            *o -= *e;
        }
        Some(out)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut out = *self;
        for (o, e) in out.exps.iter_mut().zip(other.exps.iter()) {
            *o = (*o).max(*e);
        }
        out
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    fn render(&self, vars: &VariableSet) -> String {
        let mut parts = Vec::new();
        for (i, name) in vars.names.iter().enumerate() {
            match self.exps[i] {
                0 => {}
                1 => parts.push(name.clone()),
                e => parts.push(alloc::format!("{name}^{e}")),
            }
        }
        parts.join("*")
    }
}

impl Ord for Monomial {
    /// Graded lexicographic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

/// Term orders used by the Groebner engine. Storage order is always graded lex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    Lex,
    GrLex,
    #[default]
    GRevLex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::GrLex => a.cmp(b),
            MonomialOrder::GRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for i in (0..MAX_VARS).rev() {
                    match a.exps[i].cmp(&b.exps[i]) {
                        Ordering::Equal => continue,
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// A sparse polynomial. Zero coefficients are never stored.
#[derive(Clone)]
pub struct Polynomial<C: Coeff> {
    vars: Arc<VariableSet>,
    domain: C::Domain,
    terms: BTreeMap<Monomial, C>,
}

/// Integer polynomials, the carrier of every exact expansion.
pub type IntPoly = Polynomial<BigInt>;
pub type QPoly = Polynomial<num_rational::BigRational>;

impl<C: Coeff> PartialEq for Polynomial<C> {
    fn eq(&self, other: &Self) -> bool {
        same_vars(&self.vars, &other.vars)
            && self.domain == other.domain
            && self.terms == other.terms
    }
}

impl<C: Coeff> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero(vars: &Arc<VariableSet>, domain: &C::Domain) -> Self {
        Self {
            vars: vars.clone(),
            domain: domain.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VariableSet>, domain: &C::Domain, c: C) -> Self {
        let mut p = Self::zero(vars, domain);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(vars: &Arc<VariableSet>, domain: &C::Domain) -> Self {
        Self::constant(vars, domain, C::one(domain))
    }

    pub fn int(vars: &Arc<VariableSet>, domain: &C::Domain, c: i64) -> Self {
        Self::constant(vars, domain, C::from_int(domain, &BigInt::from(c)))
    }

    pub fn var(vars: &Arc<VariableSet>, domain: &C::Domain, i: usize) -> Self {
        Self::monomial(vars, domain, Monomial::var(i), C::one(domain))
    }

    pub fn var_named(
        vars: &Arc<VariableSet>,
        domain: &C::Domain,
        name: &str,
    ) -> Result<Self, PolyError> {
        Ok(Self::var(vars, domain, vars.require(name)?))
    }

    pub fn monomial(vars: &Arc<VariableSet>, domain: &C::Domain, m: Monomial, c: C) -> Self {
        let mut p = Self::zero(vars, domain);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I>(vars: &Arc<VariableSet>, domain: &C::Domain, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, C)>,
    {
        let mut p = Self::zero(vars, domain);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VariableSet> {
        &self.vars
    }

    pub fn domain(&self) -> &C::Domain {
        &self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| C::zero(&self.domain))
    }

    /// Leading term in graded lex order.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Returns the constant value if the polynomial has no variables in it.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero(&self.domain)),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_homogeneous_in(&self, vars: &[usize]) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree_in(vars));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.exponent(i) > 0))
            .collect()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = C::add(&self.domain, existing, c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if !same_vars(&self.vars, &other.vars) {
            return Err(PolyError::VariableMismatch);
        }
        if self.domain != other.domain {
            return Err(PolyError::DomainMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, &C::neg(&self.domain, c));
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Self::zero(&self.vars, &self.domain);
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                out.add_term(ma.mul(mb), &C::mul(&self.domain, ca, cb));
            }
        }
        Ok(out)
    }

    /// `self += c * m * other`.
    pub fn add_scaled_shifted(&mut self, c: &C, m: &Monomial, other: &Self) {
        for (mo, co) in &other.terms {
            self.add_term(mo.mul(m), &C::mul(&self.domain, c, co));
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars, &self.domain);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (*m, C::mul(&self.domain, a, c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Self {
            vars: self.vars.clone(),
            domain: self.domain.clone(),
            terms,
        }
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        self.scale(&C::from_int(&self.domain, c))
    }

    /// Exact division of every coefficient by an integer.
    pub fn div_int_exact(&self, d: &BigInt) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let q = C::div_int_exact(&self.domain, c, d)?;
            if !q.is_zero() {
                terms.insert(*m, q);
            }
        }
        Some(Self {
            vars: self.vars.clone(),
            domain: self.domain.clone(),
            terms,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.vars, &self.domain);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Iterated partial derivative with respect to variable `v`.
    pub fn diff(&self, v: usize, times: u32) -> Self {
        let mut out = Self::zero(&self.vars, &self.domain);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e < times {
                continue;
            }
            let factor = crate::ring::falling(e, times);
            let mut nm = *m;
            nm.set_exponent(v, e - times);
            out.add_term(
                nm,
                &C::mul(&self.domain, c, &C::from_int(&self.domain, &factor)),
            );
        }
        out
    }

    /// Simultaneous substitution `v -> bindings[v]` for the listed variables.
    pub fn substitute(&self, bindings: &[(usize, Self)]) -> Result<Self, PolyError> {
        for (_, b) in bindings {
            self.check_compatible(b)?;
        }
        let mut image: Vec<Option<&Self>> = alloc::vec![None; self.vars.len()];
        for (v, b) in bindings {
            if *v >= self.vars.len() {
                return Err(PolyError::UnknownVariable(alloc::format!("#{v}")));
            }
            image[*v] = Some(b);
        }
        let mut powers: BTreeMap<(usize, u32), Self> = BTreeMap::new();
        let mut out = Self::zero(&self.vars, &self.domain);
        for (m, c) in &self.terms {
            let mut kept = *m;
            let mut term = Self::one(&self.vars, &self.domain);
            for (v, img) in image.iter().enumerate() {
                let e = m.exponent(v);
                if e == 0 {
                    continue;
                }
                if let Some(img) = img {
                    kept.set_exponent(v, 0);
                    let pw = powers.entry((v, e)).or_insert_with(|| img.pow(e));
                    term = &term * pw;
                }
            }
            out.add_scaled_shifted(c, &kept, &term);
        }
        Ok(out)
    }

    /// Substitution by name; convenient for tests and the checks.
    pub fn substitute_named(&self, bindings: &[(&str, Self)]) -> Result<Self, PolyError> {
        let idx: Result<Vec<(usize, Self)>, PolyError> = bindings
            .iter()
            .map(|(n, p)| Ok((self.vars.require(n)?, p.clone())))
            .collect();
        self.substitute(&idx?)
    }

    /// Sets each listed variable to zero.
    pub fn vanish(&self, vars: &[usize]) -> Self {
        let mut out = Self::zero(&self.vars, &self.domain);
        for (m, c) in &self.terms {
            if vars.iter().all(|&v| m.exponent(v) == 0) {
                out.terms.insert(*m, c.clone());
            }
        }
        out
    }

    /// Sum of the terms whose degree in `vars` is exactly `degree`.
    pub fn homogeneous_component(&self, vars: &[usize], degree: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree_in(vars) == degree)
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        Self {
            vars: self.vars.clone(),
            domain: self.domain.clone(),
            terms,
        }
    }

    /// Coefficient of `x^e` in `variable`, as a polynomial in the rest.
    pub fn coefficient_of_power(&self, v: usize, e: u32) -> Self {
        let mut out = Self::zero(&self.vars, &self.domain);
        for (m, c) in &self.terms {
            if m.exponent(v) == e {
                let mut nm = *m;
                nm.set_exponent(v, 0);
                out.terms.insert(nm, c.clone());
            }
        }
        out
    }

    /// Changes the coefficient domain term by term.
    pub fn map_coeffs<D: Coeff>(&self, domain: &D::Domain, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut out = Polynomial::zero(&self.vars, domain);
        for (m, c) in &self.terms {
            out.add_term(*m, &f(c));
        }
        out
    }

    /// Moves the polynomial to another variable set, matching by name.
    pub fn rename_into(&self, target: &Arc<VariableSet>) -> Result<Self, PolyError> {
        let mut map = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            map.push(target.index_of(name));
        }
        let mut out = Self::zero(target, &self.domain);
        for (m, c) in &self.terms {
            let mut nm = Monomial::one();
            for (i, slot) in map.iter().enumerate() {
                let e = m.exponent(i);
                if e == 0 {
                    continue;
                }
                match slot {
                    Some(j) => nm.set_exponent(*j, e),
                    None => return Err(PolyError::UnknownVariable(self.vars.name(i).to_string())),
                }
            }
            out.add_term(nm, c);
        }
        Ok(out)
    }

    /// Evaluates at a point given one scalar per variable.
    pub fn eval_with<S: Scalar>(&self, point: &[S], lift: impl Fn(&C) -> S) -> Option<S> {
        let zero = point.first()?.zero_like();
        let mut acc = zero;
        let mut cache: BTreeMap<(usize, u32), S> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = lift(c);
            for (v, value) in point.iter().enumerate().take(self.vars.len()) {
                let e = m.exponent(v);
                if e == 0 {
                    continue;
                }
                let pw = cache.entry((v, e)).or_insert_with(|| {
                    let mut r = value.int_like(&<BigInt as One>::one());
                    for _ in 0..e {
                        r = r.mul_ref(value);
                    }
                    r
                });
                t = t.mul_ref(pw);
            }
            acc = acc.add_ref(&t);
        }
        Some(acc)
    }

    /// Canonical text form, highest term first: `-252*a5^2 + 2*a0*a10`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg {
                C::neg(&self.domain, c)
            } else {
                c.clone()
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mono = m.render(&self.vars);
            let unit = abs == C::one(&self.domain);
            if mono.is_empty() {
                out.push_str(&abs.render());
            } else if unit {
                out.push_str(&mono);
            } else {
                out.push_str(&abs.render());
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    /// Parses the text form produced by [`Polynomial::to_text`].
    pub fn parse(
        vars: &Arc<VariableSet>,
        domain: &C::Domain,
        text: &str,
    ) -> Result<Self, PolyError> {
        let mut out = Self::zero(vars, domain);
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(PolyError::Parse("empty input".into()));
        }
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut pieces = Vec::new();
        for i in 1..=bytes.len() {
            if i == bytes.len()
                || ((bytes[i] == b'+' || bytes[i] == b'-')
                    && bytes[i - 1] != b'^'
                    && bytes[i - 1] != b'*')
            {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        for piece in pieces {
            let (negative, body) = match piece.as_bytes()[0] {
                b'-' => (true, &piece[1..]),
                b'+' => (false, &piece[1..]),
                _ => (false, piece),
            };
            if body.is_empty() {
                return Err(PolyError::Parse(alloc::format!(
                    "dangling sign in `{piece}`"
                )));
            }
            let mut coeff = C::one(domain);
            let mut mono = Monomial::one();
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(PolyError::Parse(alloc::format!(
                        "empty factor in `{piece}`"
                    )));
                }
                let first = factor.as_bytes()[0];
                if first.is_ascii_digit() {
                    let c = C::parse(domain, factor).ok_or_else(|| {
                        PolyError::Parse(alloc::format!("bad coefficient `{factor}`"))
                    })?;
                    coeff = C::mul(domain, &coeff, &c);
                } else {
                    let (name, exp) = match factor.split_once('^') {
                        Some((n, e)) => {
                            let e: u32 = e.parse().map_err(|_| {
                                PolyError::Parse(alloc::format!("bad exponent in `{factor}`"))
                            })?;
                            (n, e)
                        }
                        None => (factor, 1),
                    };
                    let v = vars.require(name)?;
                    let e = mono.exponent(v) + exp;
                    if e > u16::MAX as u32 {
                        return Err(PolyError::ExponentOverflow(e as u64));
                    }
                    mono.set_exponent(v, e);
                }
            }
            if negative {
                coeff = C::neg(domain, &coeff);
            }
            out.add_term(mono, &coeff);
        }
        Ok(out)
    }
}

impl IntPoly {
    /// Value modulo a prime; every variable that occurs must be bound.
    pub fn eval_mod_p(&self, point: &[Option<u32>], modulus: u32) -> Result<u32, PolyError> {
        let field = PrimeField::new(modulus)?;
        let mut acc = 0u32;
        for (m, c) in &self.terms {
            let mut t = field.reduce_bigint(c);
            for v in 0..self.vars.len() {
                let e = m.exponent(v);
                if e == 0 {
                    continue;
                }
                let value = point
                    .get(v)
                    .copied()
                    .flatten()
                    .ok_or_else(|| PolyError::Unbound(self.vars.name(v).to_string()))?;
                t = field.mul(t, field.pow(value % modulus, e as u64));
            }
            acc = field.add(acc, t);
        }
        Ok(acc)
    }

    /// Reduction of every coefficient modulo the prime.
    pub fn reduce_mod(&self, field: &PrimeField) -> Polynomial<u32> {
        self.map_coeffs(field, |c| field.reduce_bigint(c))
    }

    pub fn from_int_terms(
        vars: &Arc<VariableSet>,
        terms: &[(i64, &[u32])],
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars, &Integers);
        for (c, e) in terms {
            p.add_term(Monomial::from_exponents(e)?, &BigInt::from(*c));
        }
        Ok(p)
    }
}

impl<C: Coeff> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a, C: Coeff> Add<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        self.try_add(rhs).expect("polynomial addition across rings")
    }
}

impl<'a, C: Coeff> Sub<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        self.try_sub(rhs)
            .expect("polynomial subtraction across rings")
    }
}

impl<'a, C: Coeff> Mul<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        self.try_mul(rhs)
            .expect("polynomial multiplication across rings")
    }
}

impl<C: Coeff> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, C::neg(&self.domain, c)))
            .collect();
        Polynomial {
            vars: self.vars.clone(),
            domain: self.domain.clone(),
            terms,
        }
    }
}

/// Polynomials double as binary-form coefficients.
impl<C: Coeff> Scalar for Polynomial<C> {
    fn zero_like(&self) -> Self {
        Self::zero(&self.vars, &self.domain)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_int(&self, c: &BigInt) -> Self {
        Polynomial::scale_int(self, c)
    }
    fn div_int_exact(&self, d: &BigInt) -> Option<Self> {
        Polynomial::div_int_exact(self, d)
    }
    fn int_like(&self, c: &BigInt) -> Self {
        Self::constant(&self.vars, &self.domain, C::from_int(&self.domain, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Arc<VariableSet> {
        VariableSet::new(&["x", "y"]).unwrap()
    }

    fn p(vars: &Arc<VariableSet>, s: &str) -> IntPoly {
        IntPoly::parse(vars, &Integers, s).unwrap()
    }

    #[test]
    fn additive_inverse_and_doubling() {
        let v = VariableSet::form_coefficients_xy(10);
        let a = p(&v, "x^2");
        assert!((&a + &(-&a)).is_zero());
        let b = p(&v, "a0*x");
        assert_eq!(&b + &b, p(&v, "2*a0*x"));
    }

    #[test]
    fn difference_of_squares() {
        let v = xy();
        assert_eq!(&p(&v, "x + y") * &p(&v, "x - y"), p(&v, "x^2 - y^2"));
        let q = p(&v, "3*x*y - 7");
        assert_eq!(&q * &IntPoly::one(&v, &Integers), q);
    }

    #[test]
    fn derivatives() {
        let v = xy();
        assert_eq!(p(&v, "x^3").diff(0, 1), p(&v, "3*x^2"));
        assert!(p(&v, "x^3").diff(1, 1).is_zero());
        assert!(IntPoly::int(&v, &Integers, 5).diff(0, 1).is_zero());
    }

    #[test]
    fn homogeneous_components() {
        let v = xy();
        let q = p(&v, "x^2 + x*y + y^3");
        assert_eq!(q.homogeneous_component(&[0, 1], 2), p(&v, "x^2 + x*y"));
        let c = IntPoly::int(&v, &Integers, 4);
        assert_eq!(c.homogeneous_component(&[0, 1], 0), c);
    }

    #[test]
    fn fermat_and_plain_evaluation() {
        let v = xy();
        assert_eq!(
            p(&v, "x + y").eval_mod_p(&[Some(1), Some(2)], 109).unwrap(),
            3
        );
        let fermat = p(&v, "x^109 - x");
        for x in [0, 1, 5, 108, 250] {
            assert_eq!(fermat.eval_mod_p(&[Some(x), None], 109).unwrap(), 0);
        }
    }

    #[test]
    fn evaluation_errors() {
        let v = xy();
        assert_eq!(
            p(&v, "x + y").eval_mod_p(&[Some(1), None], 109),
            Err(PolyError::Unbound("y".into()))
        );
        assert_eq!(
            p(&v, "x").eval_mod_p(&[Some(1), Some(1)], 91),
            Err(PolyError::CompositeModulus(91))
        );
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = p(&xy(), "x");
        let b = p(&VariableSet::new(&["u", "v"]).unwrap(), "u");
        assert_eq!(a.try_add(&b), Err(PolyError::VariableMismatch));
        let field = PrimeField::new(109).unwrap();
        let c = a.reduce_mod(&field);
        let d = PrimeField::new(197).unwrap();
        assert_eq!(c.try_mul(&a.reduce_mod(&d)), Err(PolyError::DomainMismatch));
    }

    #[test]
    fn substitution_of_a0() {
        let v = VariableSet::form_coefficients(10);
        let expr = p(&v, "a0 + 45*a2*a8 - 126*a5^2");
        let image = p(&v, "-45*a2*a8 + 126*a5^2");
        assert!(expr.substitute(&[(0, image)]).unwrap().is_zero());
        let w = xy();
        let x2 = p(&w, "x^2");
        assert_eq!(x2.substitute(&[(0, p(&w, "x"))]).unwrap(), x2);
    }

    #[test]
    fn text_form_examples() {
        let v = VariableSet::form_coefficients(10);
        let j2 = p(
            &v,
            "2*a0*a10 - 20*a1*a9 + 90*a2*a8 - 240*a3*a7 + 420*a4*a6 - 252*a5^2",
        );
        assert_eq!(
            j2.to_text(),
            "2*a0*a10 - 20*a1*a9 + 90*a2*a8 - 240*a3*a7 + 420*a4*a6 - 252*a5^2"
        );
        assert_eq!(p(&v, "-a3 + 1").to_text(), "-a3 + 1");
        assert_eq!(IntPoly::zero(&v, &Integers).to_text(), "0");
        assert!(IntPoly::parse(&v, &Integers, "a11").is_err());
        assert!(IntPoly::parse(&v, &Integers, "2*").is_err());
    }

    #[test]
    fn grevlex_breaks_ties_on_last_variable() {
        let a = Monomial::from_exponents(&[1, 0, 1]).unwrap();
        let b = Monomial::from_exponents(&[0, 2, 0]).unwrap();
        assert_eq!(MonomialOrder::GRevLex.cmp(&b, &a), Ordering::Greater);
        assert_eq!(MonomialOrder::GrLex.cmp(&a, &b), Ordering::Greater);
        assert_eq!(MonomialOrder::Lex.cmp(&a, &b), Ordering::Greater);
    }
}

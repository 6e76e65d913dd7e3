//! Prime fields, dense vectors over them, and an incremental reduced
//! row-echelon span.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::poly::{Monomial, PolyError, Polynomial};

/// Primes below this bound are refused for the search.
pub const MIN_SEARCH_PRIME: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("{0} is not a prime")]
pub struct NotPrime(pub u64);

impl From<NotPrime> for PolyError {
    fn from(e: NotPrime) -> Self {
        PolyError::CompositeModulus(e.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpanError {
    #[error("vector has length {got}, span has dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("prime {0} is too small for the search (need > {MIN_SEARCH_PRIME})")]
    PrimeTooSmall(u32),
    #[error(transparent)]
    NotPrime(#[from] NotPrime),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("stored rows are not linearly independent")]
    DependentRow,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The field of integers modulo a prime below 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, NotPrime> {
        if p >= 1 << 31 || !is_prime(p as u64) {
            return Err(NotPrime(p as u64));
        }
        Ok(Self { p })
    }

    /// Field for the modular search; enforces the `p > 50` guard.
    pub fn for_search(p: u32) -> Result<Self, SpanError> {
        let f = Self::new(p)?;
        if p <= MIN_SEARCH_PRIME {
            return Err(SpanError::PrimeTooSmall(p));
        }
        Ok(f)
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        let a = a % self.p;
        (a != 0).then(|| self.pow(a, self.p as u64 - 2))
    }

    pub fn reduce_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn reduce_bigint(&self, v: &BigInt) -> u32 {
        let r = v.mod_floor(&BigInt::from(self.p));
        debug_assert!(r.sign() != Sign::Minus);
        r.to_u32().expect("residue fits")
    }

    /// Symmetric representative in `(-p/2, p/2]`, handy for printing.
    pub fn centered(&self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

/// Outcome of offering a vector to a span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insertion {
    Independent,
    Dependent,
}

/// Rows in reduced echelon form over a prime field, grown one vector at a time.
///
/// Every stored row has a leading 1 in its pivot column and zeros in every
/// other row's pivot column, so a membership test is a single pass over the
/// rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncrementalSpan {
    field: PrimeField,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    row_of_pivot: BTreeMap<usize, usize>,
}

impl IncrementalSpan {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        Self {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of_pivot: BTreeMap::new(),
        }
    }

    /// Rebuilds a span from rows previously returned by [`rows`](Self::rows),
    /// re-inserting them so a corrupted checkpoint cannot produce a bogus state.
    pub fn from_rows(field: PrimeField, dim: usize, rows: &[Vec<u32>]) -> Result<Self, SpanError> {
        let mut span = Self::new(field, dim);
        for r in rows {
            if span.insert(r)? == Insertion::Dependent {
                return Err(SpanError::DependentRow);
            }
        }
        Ok(span)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` in place against the stored rows; returns true if it
    /// reduced to zero.
    fn reduce_in_place(&self, v: &mut [u32]) -> bool {
        let p = self.field.modulus() as u64;
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c == 0 {
                continue;
            }
            let factor = p - c as u64;
            for (x, &r) in v.iter_mut().zip(row.iter()) {
                if r != 0 {
                    *x = ((*x as u64 + factor * r as u64) % p) as u32;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// True if `v` lies in the current span.
    pub fn contains(&self, v: &[u32]) -> Result<bool, SpanError> {
        self.check_len(v)?;
        let mut w = v.to_vec();
        Ok(self.reduce_in_place(&mut w))
    }

    fn check_len(&self, v: &[u32]) -> Result<(), SpanError> {
        if v.len() != self.dim {
            return Err(SpanError::LengthMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    pub fn insert(&mut self, v: &[u32]) -> Result<Insertion, SpanError> {
        self.check_len(v)?;
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.field.modulus()).collect();
        if self.reduce_in_place(&mut w) {
            return Ok(Insertion::Dependent);
        }
        let piv = w
            .iter()
            .position(|&x| x != 0)
            .expect("nonzero after reduction");
        let inv = self.field.inv(w[piv]).expect("pivot is a unit");
        for x in w.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        let p = self.field.modulus() as u64;
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c == 0 {
                continue;
            }
            let factor = p - c as u64;
            for (x, &r) in row.iter_mut().zip(w.iter()) {
                if r != 0 {
                    *x = ((*x as u64 + factor * r as u64) % p) as u32;
                }
            }
        }
        self.row_of_pivot.insert(piv, self.rows.len());
        self.pivots.push(piv);
        self.rows.push(w);
        Ok(Insertion::Independent)
    }
}

/// Monomials of total degree `degree` in `nvars` variables, descending
/// graded lex order (which is plain lex within one degree).
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, var: usize, left: u32, cur: &mut [u32], out: &mut Vec<Monomial>) {
        if var + 1 == nvars {
            cur[var] = left;
            out.push(Monomial::from_exponents(cur).expect("small exponents"));
            return;
        }
        for e in (0..=left).rev() {
            cur[var] = e;
            rec(nvars, var + 1, left - e, cur, out);
        }
        cur[var] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    let mut cur = alloc::vec![0u32; nvars];
    rec(nvars, 0, degree, &mut cur, &mut out);
    out
}

/// Coefficient vector of a homogeneous polynomial in the degree slice of the
/// listed variables. Coordinates follow descending lex order of the slice.
pub fn vectorize(p: &Polynomial<u32>, vars: &[usize], degree: u32) -> Result<Vec<u32>, PolyError> {
    let slice = monomials_of_degree(vars.len(), degree);
    let index: BTreeMap<Monomial, usize> = slice.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut out = alloc::vec![0u32; slice.len()];
    for (m, c) in p.terms() {
        let mut local = Monomial::one();
        for (slot, &v) in vars.iter().enumerate() {
            local.set_exponent(slot, m.exponent(v));
        }
        if local.degree() != m.degree() || local.degree() != degree {
            return Err(PolyError::NotHomogeneous(degree));
        }
        out[index[&local]] = *c;
    }
    Ok(out)
}

/// Assigns coordinates to monomials on first sight.
#[derive(Debug, Clone, Default)]
pub struct MonomialInterner {
    index: BTreeMap<Monomial, usize>,
}

impl MonomialInterner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn intern_all(&mut self, p: &Polynomial<u32>) {
        for (m, _) in p.terms() {
            let next = self.index.len();
            self.index.entry(*m).or_insert(next);
        }
    }

    /// Sparse coordinates of `p`, interning unseen monomials.
    pub fn coordinates(&mut self, p: &Polynomial<u32>) -> Vec<(usize, u32)> {
        self.intern_all(p);
        p.terms().map(|(m, c)| (self.index[m], *c)).collect()
    }

    /// Dense vector of `p` in the current coordinate system.
    pub fn dense(&self, p: &Polynomial<u32>, dim: usize) -> Option<Vec<u32>> {
        let mut out = alloc::vec![0u32; dim];
        for (m, c) in p.terms() {
            let i = *self.index.get(m)?;
            if i >= dim {
                return None;
            }
            out[i] = *c;
        }
        Some(out)
    }
}

/// Rank of a list of polynomials using lazily interned monomial coordinates.
pub fn rank_by_monomials(field: PrimeField, polys: &[Polynomial<u32>]) -> usize {
    let mut interner = MonomialInterner::new();
    for p in polys {
        interner.intern_all(p);
    }
    let dim = interner.len();
    let mut span = IncrementalSpan::new(field, dim);
    for p in polys {
        let v = interner.dense(p, dim).expect("all monomials interned");
        span.insert(&v).expect("length matches");
    }
    span.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VariableSet;

    fn f109() -> PrimeField {
        PrimeField::new(109).unwrap()
    }

    #[test]
    fn field_basics() {
        let f = f109();
        assert_eq!(f.add(100, 20), 11);
        assert_eq!(f.sub(3, 5), 107);
        assert_eq!(f.mul(f.inv(7).unwrap(), 7), 1);
        assert_eq!(f.inv(0), None);
        assert_eq!(f.reduce_bigint(&BigInt::from(-1)), 108);
        assert!(PrimeField::new(91).is_err());
        assert!(matches!(
            PrimeField::for_search(47),
            Err(SpanError::PrimeTooSmall(47))
        ));
        assert!(PrimeField::for_search(197).is_ok());
    }

    #[test]
    fn zero_vector_is_dependent() {
        let mut s = IncrementalSpan::new(f109(), 3);
        assert_eq!(s.insert(&[0, 0, 0]).unwrap(), Insertion::Dependent);
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn repeated_unit_vector() {
        let mut s = IncrementalSpan::new(f109(), 3);
        assert_eq!(s.insert(&[1, 0, 0]).unwrap(), Insertion::Independent);
        assert_eq!(s.insert(&[1, 0, 0]).unwrap(), Insertion::Dependent);
        assert_eq!(s.insert(&[5, 0, 0]).unwrap(), Insertion::Dependent);
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn rank_is_capped_by_dimension() {
        let mut s = IncrementalSpan::new(f109(), 2);
        for v in [[1, 2], [3, 4], [5, 6], [7, 8]] {
            s.insert(&v).unwrap();
        }
        assert_eq!(s.rank(), 2);
        assert!(s.insert(&[1, 2, 3]).is_err());
    }

    #[test]
    fn stored_rows_are_dependent_on_reinsertion() {
        let mut s = IncrementalSpan::new(f109(), 4);
        for v in [[1, 2, 3, 4], [0, 1, 1, 0], [2, 5, 7, 8]] {
            s.insert(&v).unwrap();
        }
        assert_eq!(s.rank(), 2);
        let rows = s.rows().to_vec();
        for r in rows {
            assert_eq!(s.insert(&r).unwrap(), Insertion::Dependent);
        }
    }

    #[test]
    fn degree_two_slice_in_six_variables() {
        let vars = VariableSet::new(&["a1", "a2", "a3", "a5", "a6", "a8"]).unwrap();
        let field = f109();
        let zero = Polynomial::<u32>::zero(&vars, &field);
        let all: Vec<usize> = (0..6).collect();
        let v = vectorize(&zero, &all, 2).unwrap();
        assert_eq!(v.len(), 21);
        assert!(v.iter().all(|&c| c == 0));

        let one = VariableSet::new(&["x"]).unwrap();
        let x = Polynomial::<u32>::var(&one, &field, 0);
        assert_eq!(vectorize(&x, &[0], 1).unwrap(), alloc::vec![1]);
        let bad = &x + &Polynomial::one(&one, &field);
        assert!(vectorize(&bad, &[0], 1).is_err());
    }
}

//! Coefficient domains.
//!
//! Two flavours of arithmetic live here. [`Coeff`] is the context-style trait
//! used by [`Polynomial`](crate::poly::Polynomial): the polynomial carries its
//! domain (integers, rationals, or a prime field) and every coefficient
//! operation receives it. [`Scalar`] is the element-style trait used for the
//! coefficients of binary forms, where each coefficient knows enough about
//! itself to produce a zero of the same kind.

use core::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::modlin::PrimeField;

/// A coefficient type whose arithmetic depends on a runtime domain value.
pub trait Coeff: Clone + PartialEq + Debug {
    type Domain: Clone + PartialEq + Debug;

    fn zero(domain: &Self::Domain) -> Self;
    fn one(domain: &Self::Domain) -> Self;
    fn from_int(domain: &Self::Domain, value: &BigInt) -> Self;
    fn is_zero(&self) -> bool;
    fn add(domain: &Self::Domain, a: &Self, b: &Self) -> Self;
    fn sub(domain: &Self::Domain, a: &Self, b: &Self) -> Self;
    fn mul(domain: &Self::Domain, a: &Self, b: &Self) -> Self;
    fn neg(domain: &Self::Domain, a: &Self) -> Self;
    /// Division by an integer that must be exact in this domain.
    fn div_int_exact(domain: &Self::Domain, a: &Self, d: &BigInt) -> Option<Self>;
    /// Text form of a coefficient (used by the polynomial printer).
    fn render(&self) -> alloc::string::String;
    /// Parses the text form produced by [`Coeff::render`].
    fn parse(domain: &Self::Domain, text: &str) -> Option<Self>;
    /// True when the printed form starts with a minus sign.
    fn is_negative(&self) -> bool {
        false
    }
    /// Short name of the domain for serialization: `ZZ`, `QQ`, `GF(p)`.
    fn domain_name(domain: &Self::Domain) -> alloc::string::String;
}

/// Coefficient domains that are fields.
pub trait FieldCoeff: Coeff {
    fn inv(domain: &Self::Domain, a: &Self) -> Option<Self>;

    fn div(domain: &Self::Domain, a: &Self, b: &Self) -> Option<Self> {
        Self::inv(domain, b).map(|bi| Self::mul(domain, a, &bi))
    }
}

/// The ring of integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Integers;

/// The field of rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Coeff for BigInt {
    type Domain = Integers;

    fn zero(_: &Integers) -> Self {
        <BigInt as Zero>::zero()
    }
    fn one(_: &Integers) -> Self {
        <BigInt as One>::one()
    }
    fn from_int(_: &Integers, value: &BigInt) -> Self {
        value.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(_: &Integers, a: &Self, b: &Self) -> Self {
        a + b
    }
    fn sub(_: &Integers, a: &Self, b: &Self) -> Self {
        a - b
    }
    fn mul(_: &Integers, a: &Self, b: &Self) -> Self {
        a * b
    }
    fn neg(_: &Integers, a: &Self) -> Self {
        -a
    }
    fn div_int_exact(_: &Integers, a: &Self, d: &BigInt) -> Option<Self> {
        if Zero::is_zero(d) {
            return None;
        }
        let (q, r) = a.div_rem(d);
        Zero::is_zero(&r).then_some(q)
    }
    fn render(&self) -> alloc::string::String {
        alloc::format!("{}", self)
    }
    fn parse(_: &Integers, text: &str) -> Option<Self> {
        text.parse().ok()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn domain_name(_: &Integers) -> alloc::string::String {
        "ZZ".into()
    }
}

impl Coeff for BigRational {
    type Domain = Rationals;

    fn zero(_: &Rationals) -> Self {
        <BigRational as Zero>::zero()
    }
    fn one(_: &Rationals) -> Self {
        <BigRational as One>::one()
    }
    fn from_int(_: &Rationals, value: &BigInt) -> Self {
        BigRational::from_integer(value.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(_: &Rationals, a: &Self, b: &Self) -> Self {
        a + b
    }
    fn sub(_: &Rationals, a: &Self, b: &Self) -> Self {
        a - b
    }
    fn mul(_: &Rationals, a: &Self, b: &Self) -> Self {
        a * b
    }
    fn neg(_: &Rationals, a: &Self) -> Self {
        -a
    }
    fn div_int_exact(_: &Rationals, a: &Self, d: &BigInt) -> Option<Self> {
        if Zero::is_zero(d) {
            return None;
        }
        Some(a / BigRational::from_integer(d.clone()))
    }
    fn render(&self) -> alloc::string::String {
        alloc::format!("{}", self)
    }
    fn parse(_: &Rationals, text: &str) -> Option<Self> {
        match text.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().ok()?;
                let d: BigInt = d.trim().parse().ok()?;
                if Zero::is_zero(&d) {
                    None
                } else {
                    Some(BigRational::new(n, d))
                }
            }
            None => text.trim().parse().ok().map(BigRational::from_integer),
        }
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn domain_name(_: &Rationals) -> alloc::string::String {
        "QQ".into()
    }
}

impl FieldCoeff for BigRational {
    fn inv(_: &Rationals, a: &Self) -> Option<Self> {
        (!Zero::is_zero(a)).then(|| a.recip())
    }
}

impl Coeff for u32 {
    type Domain = PrimeField;

    fn zero(_: &PrimeField) -> Self {
        0
    }
    fn one(_: &PrimeField) -> Self {
        1
    }
    fn from_int(f: &PrimeField, value: &BigInt) -> Self {
        f.reduce_bigint(value)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(f: &PrimeField, a: &Self, b: &Self) -> Self {
        f.add(*a, *b)
    }
    fn sub(f: &PrimeField, a: &Self, b: &Self) -> Self {
        f.sub(*a, *b)
    }
    fn mul(f: &PrimeField, a: &Self, b: &Self) -> Self {
        f.mul(*a, *b)
    }
    fn neg(f: &PrimeField, a: &Self) -> Self {
        f.neg(*a)
    }
    fn div_int_exact(f: &PrimeField, a: &Self, d: &BigInt) -> Option<Self> {
        let d = f.reduce_bigint(d);
        f.inv(d).map(|di| f.mul(*a, di))
    }
    fn render(&self) -> alloc::string::String {
        alloc::format!("{}", self)
    }
    fn parse(f: &PrimeField, text: &str) -> Option<Self> {
        let v: BigInt = text.trim().parse().ok()?;
        Some(f.reduce_bigint(&v))
    }
    fn domain_name(f: &PrimeField) -> alloc::string::String {
        alloc::format!("GF({})", f.modulus())
    }
}

impl FieldCoeff for u32 {
    fn inv(f: &PrimeField, a: &Self) -> Option<Self> {
        f.inv(*a)
    }
}

/// Element-style arithmetic for binary-form coefficients.
///
/// Forms over integer polynomials, exact rationals, plain integers, and prime
/// fields all share one transvectant implementation through this trait.
pub trait Scalar: Clone + PartialEq + Debug {
    /// A zero of the same kind (same variable set, same modulus).
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn scale_int(&self, c: &BigInt) -> Self;
    fn div_int_exact(&self, d: &BigInt) -> Option<Self>;

    fn neg_ref(&self) -> Self {
        self.scale_int(&BigInt::from(-1))
    }

    /// An integer constant of the same kind.
    fn int_like(&self, c: &BigInt) -> Self;

    /// A rational constant of the same kind, if the denominator can be inverted.
    fn ratio_like(&self, r: &BigRational) -> Option<Self> {
        self.int_like(r.numer()).div_int_exact(r.denom())
    }
}

impl Scalar for BigInt {
    fn zero_like(&self) -> Self {
        <BigInt as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
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
        self * c
    }
    fn div_int_exact(&self, d: &BigInt) -> Option<Self> {
        <BigInt as Coeff>::div_int_exact(&Integers, self, d)
    }
    fn int_like(&self, c: &BigInt) -> Self {
        c.clone()
    }
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        <BigRational as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
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
        self * BigRational::from_integer(c.clone())
    }
    fn div_int_exact(&self, d: &BigInt) -> Option<Self> {
        <BigRational as Coeff>::div_int_exact(&Rationals, self, d)
    }
    fn int_like(&self, c: &BigInt) -> Self {
        BigRational::from_integer(c.clone())
    }
}

/// An element of a prime field that carries its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Zp {
    value: u32,
    field: PrimeField,
}

impl Zp {
    pub fn new(field: PrimeField, value: u64) -> Self {
        Self {
            value: (value % field.modulus() as u64) as u32,
            field,
        }
    }

    pub fn from_int(field: PrimeField, value: &BigInt) -> Self {
        Self {
            value: field.reduce_bigint(value),
            field,
        }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
}

impl Debug for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.field.modulus())
    }
}

impl Display for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Scalar for Zp {
    fn zero_like(&self) -> Self {
        Self {
            value: 0,
            field: self.field,
        }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add_ref(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field, other.field);
        Self {
            value: self.field.add(self.value, other.value),
            field: self.field,
        }
    }
    fn sub_ref(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field, other.field);
        Self {
            value: self.field.sub(self.value, other.value),
            field: self.field,
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field, other.field);
        Self {
            value: self.field.mul(self.value, other.value),
            field: self.field,
        }
    }
    fn scale_int(&self, c: &BigInt) -> Self {
        Self {
            value: self.field.mul(self.value, self.field.reduce_bigint(c)),
            field: self.field,
        }
    }
    fn div_int_exact(&self, d: &BigInt) -> Option<Self> {
        let d = self.field.reduce_bigint(d);
        self.field.inv(d).map(|di| Self {
            value: self.field.mul(self.value, di),
            field: self.field,
        })
    }
    fn int_like(&self, c: &BigInt) -> Self {
        Self::from_int(self.field, c)
    }
}

/// Falling factorial `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling(n: u32, k: u32) -> BigInt {
    if k > n {
        return <BigInt as Zero>::zero();
    }
    (0..k).fold(<BigInt as One>::one(), |acc, i| acc * BigInt::from(n - i))
}

pub fn factorial(n: u32) -> BigInt {
    falling(n, n)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return <BigInt as Zero>::zero();
    }
    falling(n, k) / factorial(k)
}

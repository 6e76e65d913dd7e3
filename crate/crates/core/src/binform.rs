//! Binary forms and the transvectant.
//!
//! A form of order `n` is stored densely: `coeffs[i]` is the coefficient of
//! `x^(n-i) y^i`, so the generic form `sum C(n,i) a_i x^(n-i) y^i` has
//! `coeffs[i] = C(n,i) a_i`. Coefficients are any [`Scalar`]: integer
//! polynomials in the `a_i` for symbolic work, exact rationals for sampled
//! forms, prime-field elements for the modular route.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{IntPoly, Monomial, Polynomial, QPoly, VariableSet};
use crate::ring::{binomial, falling, Coeff, Integers, Rationals, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("transvectant index {k} out of range for orders {n} and {m}")]
    IndexOutOfRange { k: u32, n: u32, m: u32 },
    #[error("transvectant normalization by {0} did not clear")]
    NotIntegral(String),
    #[error("forms of order {0} and {1} cannot be added")]
    OrderMismatch(u32, u32),
    #[error("forms of degree {0} and {1} cannot be added")]
    DegreeMismatch(u32, u32),
    #[error("expected {expected} coefficients, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("matrix has determinant {0}, expected 1")]
    Determinant(i64),
    #[error("form has no coefficients to infer a ring from")]
    Empty,
}

/// A binary form together with its order (in x, y) and degree (in the
/// coefficients of the underlying generic form).
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryForm<S> {
    order: u32,
    degree: u32,
    coeffs: Vec<S>,
}

/// One nonzero contribution `weight * F[j] * G[l]` to output coefficient `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightEntry {
    pub j: u32,
    pub l: u32,
    pub s: u32,
    pub weight: BigInt,
}

/// Integer weights of `(f, g)_k` on raw coefficients, and the normalizing
/// divisor `n!/(n-k)! * m!/(m-k)!`.
///
/// With `F[j]` the coefficient of `x^(n-j) y^j` (and `G[l]` likewise),
/// `(f,g)_k` has coefficient `sum w(j,l) F[j] G[l] / norm` at
/// `x^(n+m-2k-s) y^s`, `s = j + l - k`, where
/// `w(j,l) = sum_i (-1)^i C(k,i) (n-j)_(k-i) j_(i) (m-l)_(i) l_(k-i)`
/// with falling factorials.
pub fn transvectant_weights(n: u32, m: u32, k: u32) -> (Vec<WeightEntry>, BigInt) {
    let mut entries = Vec::new();
    for j in 0..=n {
        for l in 0..=m {
            if j + l < k || j + l - k > n + m - 2 * k {
                continue;
            }
            let mut w = <BigInt as Zero>::zero();
            for i in 0..=k {
                let t =
                    falling(n - j, k - i) * falling(j, i) * falling(m - l, i) * falling(l, k - i);
                if Zero::is_zero(&t) {
                    continue;
                }
                let t = t * binomial(k, i);
                if i % 2 == 0 {
                    w += t;
                } else {
                    w -= t;
                }
            }
            if !Zero::is_zero(&w) {
                entries.push(WeightEntry {
                    j,
                    l,
                    s: j + l - k,
                    weight: w,
                });
            }
        }
    }
    (entries, falling(n, k) * falling(m, k))
}

impl<S: Scalar> BinaryForm<S> {
    pub fn new(order: u32, degree: u32, coeffs: Vec<S>) -> Result<Self, FormError> {
        if coeffs.len() != order as usize + 1 {
            return Err(FormError::BadLength {
                expected: order as usize + 1,
                got: coeffs.len(),
            });
        }
        Ok(Self {
            order,
            degree,
            coeffs,
        })
    }

    /// The form `c * x^(order-i) y^i`.
    pub fn monomial(order: u32, degree: u32, i: u32, c: S) -> Self {
        let zero = c.zero_like();
        let mut coeffs = alloc::vec![zero; order as usize + 1];
        coeffs[i as usize] = c;
        Self {
            order,
            degree,
            coeffs,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Coefficient of `x^(order-i) y^i`.
    pub fn coeff(&self, i: u32) -> &S {
        &self.coeffs[i as usize]
    }

    /// Coefficient of `x^a y^b` (requires `a + b = order`).
    pub fn coeff_xy(&self, a: u32, b: u32) -> Option<&S> {
        (a + b == self.order).then(|| &self.coeffs[b as usize])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// For an order-0 form, its single coefficient.
    pub fn scalar_value(&self) -> Option<&S> {
        (self.order == 0).then(|| &self.coeffs[0])
    }

    pub fn with_degree(mut self, degree: u32) -> Self {
        self.degree = degree;
        self
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BinaryForm<T> {
        BinaryForm {
            order: self.order,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// The normalized `k`-th transvectant `(self, other)_k`.
    pub fn transvectant(&self, other: &Self, k: u32) -> Result<Self, FormError> {
        let (n, m) = (self.order, other.order);
        if k > n || k > m {
            return Err(FormError::IndexOutOfRange { k, n, m });
        }
        let (entries, norm) = transvectant_weights(n, m, k);
        let order = n + m - 2 * k;
        let zero = self.coeffs[0].zero_like();
        let mut out = alloc::vec![zero; order as usize + 1];
        for e in &entries {
            let a = &self.coeffs[e.j as usize];
            let b = &other.coeffs[e.l as usize];
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let t = a.mul_ref(b).scale_int(&e.weight);
            let slot = &mut out[e.s as usize];
            *slot = slot.add_ref(&t);
        }
        if !norm.is_one() {
            for c in out.iter_mut() {
                if c.is_zero() {
                    continue;
                }
                *c = c
                    .div_int_exact(&norm)
                    .ok_or_else(|| FormError::NotIntegral(alloc::format!("{norm}")))?;
            }
        }
        Ok(Self {
            order,
            degree: self.degree + other.degree,
            coeffs: out,
        })
    }

    /// Polynomial product of two forms.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order + other.order;
        let zero = self.coeffs[0].zero_like();
        let mut out = alloc::vec![zero; order as usize + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self {
            order,
            degree: self.degree + other.degree,
            coeffs: out,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let one = self.coeffs[0].int_like(&<BigInt as One>::one());
        let mut acc = BinaryForm {
            order: 0,
            degree: 0,
            coeffs: alloc::vec![one],
        };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Result<Self, FormError> {
        if self.order != other.order {
            return Err(FormError::OrderMismatch(self.order, other.order));
        }
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch(self.degree, other.degree));
        }
        Ok(Self {
            order: self.order,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        })
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        self.map(|a| a.scale_int(c))
    }

    /// `f((x, y) M)`: `x -> a x + c y`, `y -> b x + d y` for `M = [[a, b], [c, d]]`.
    pub fn apply_sl2(&self, m: [[i64; 2]; 2]) -> Result<Self, FormError> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det != 1 {
            return Err(FormError::Determinant(det));
        }
        let n = self.order as usize;
        let x_image = [BigInt::from(m[0][0]), BigInt::from(m[1][0])];
        let y_image = [BigInt::from(m[0][1]), BigInt::from(m[1][1])];
        let zero = self.coeffs[0].zero_like();
        let mut out = alloc::vec![zero; n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // (x_image)^(n-i) * (y_image)^i as integer coefficient vector.
            let mut expansion = alloc::vec![<BigInt as One>::one()];
            for step in 0..n {
                let lin = if step < n - i { &x_image } else { &y_image };
                let mut next = alloc::vec![<BigInt as Zero>::zero(); expansion.len() + 1];
                for (t, e) in expansion.iter().enumerate() {
                    next[t] += e * &lin[0];
                    next[t + 1] += e * &lin[1];
                }
                expansion = next;
            }
            for (t, e) in expansion.iter().enumerate() {
                if !Zero::is_zero(e) {
                    out[t] = out[t].add_ref(&c.scale_int(e));
                }
            }
        }
        Ok(Self {
            order: self.order,
            degree: self.degree,
            coeffs: out,
        })
    }
}

/// The generic form of order `n` over `Z[a0..an]`.
pub fn generic_form(n: u32) -> BinaryForm<IntPoly> {
    generic_form_over(n, &Integers)
}

/// The generic form of order `n` over `Q[a0..an]`.
pub fn generic_rational_form(n: u32) -> BinaryForm<QPoly> {
    generic_form_over(n, &Rationals)
}

/// `sum C(n,i) a_i x^(n-i) y^i` with coefficients in `domain[a0..an]`.
pub fn generic_form_over<C: Coeff>(n: u32, domain: &C::Domain) -> BinaryForm<Polynomial<C>> {
    let vars = VariableSet::form_coefficients(n);
    let coeffs = (0..=n)
        .map(|i| {
            let c = C::from_int(domain, &binomial(n, i));
            Polynomial::monomial(&vars, domain, Monomial::var(i as usize), c)
        })
        .collect();
    BinaryForm {
        order: n,
        degree: 1,
        coeffs,
    }
}

impl<C: Coeff> BinaryForm<Polynomial<C>> {
    /// The full polynomial in the coefficient variables and `x, y`.
    pub fn to_xy_polynomial(&self) -> Polynomial<C> {
        let base = self.coeffs[0].vars();
        let mut names: Vec<String> = base.names().to_vec();
        names.push("x".into());
        names.push("y".into());
        let vars: Arc<VariableSet> = VariableSet::new(&names).expect("room for x and y");
        let (xi, yi) = (names.len() - 2, names.len() - 1);
        let domain = self.coeffs[0].domain().clone();
        let one = C::one(&domain);
        let mut out = Polynomial::zero(&vars, &domain);
        for (i, c) in self.coeffs.iter().enumerate() {
            let lifted = c.rename_into(&vars).expect("coefficient variables embed");
            let mut m = Monomial::one();
            m.set_exponent(xi, self.order - i as u32);
            m.set_exponent(yi, i as u32);
            out.add_scaled_shifted(&one, &m, &lifted);
        }
        out
    }

    /// Line-per-monomial layout, ascending powers of x:
    /// `(c_0)*y^4 +`, `(c_1)*x*y^3 +`, ..., `(c_4)*x^4`.
    pub fn pretty(&self) -> String {
        let n = self.order;
        let mut lines = Vec::new();
        for i in (0..=n).rev() {
            let c = &self.coeffs[i as usize];
            if c.is_zero() {
                continue;
            }
            let xs = match n - i {
                0 => String::new(),
                1 => "x".into(),
                e => alloc::format!("x^{e}"),
            };
            let ys = match i {
                0 => String::new(),
                1 => "y".into(),
                e => alloc::format!("y^{e}"),
            };
            let mono = match (xs.is_empty(), ys.is_empty()) {
                (true, true) => String::new(),
                (false, true) => xs,
                (true, false) => ys,
                (false, false) => alloc::format!("{xs}*{ys}"),
            };
            if mono.is_empty() {
                lines.push(alloc::format!("{c}"));
            } else {
                lines.push(alloc::format!("({c})*{mono}"));
            }
        }
        if lines.is_empty() {
            return "0".into();
        }
        lines.join(" +\n")
    }
}

/// `x^(order-i) y^i` with a unit coefficient in the ring of `template`.
pub fn unit_monomial_form<S: Scalar>(
    template: &S,
    order: u32,
    degree: u32,
    i: u32,
) -> BinaryForm<S> {
    BinaryForm::monomial(order, degree, i, template.int_like(&<BigInt as One>::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rat_form(c: &[i64]) -> BinaryForm<BigRational> {
        BinaryForm::new(
            c.len() as u32 - 1,
            1,
            c.iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn generic_quadratic_convention() {
        let f = generic_form(2);
        let text: Vec<String> = f.coeffs().iter().map(|c| c.to_text()).collect();
        assert_eq!(text, ["a0", "2*a1", "a2"]);
        let d = generic_form(10);
        assert_eq!(d.coeff_xy(9, 1).unwrap().to_text(), "10*a1");
        assert_eq!(d.coeff_xy(1, 9).unwrap().to_text(), "10*a9");
    }

    #[test]
    fn zeroth_transvectant_is_product() {
        let f = rat_form(&[1, 2, 3]);
        let g = rat_form(&[4, 0, -1, 5]);
        assert_eq!(f.transvectant(&g, 0).unwrap(), f.mul(&g));
    }

    #[test]
    fn square_has_zero_discriminant() {
        let x2 = rat_form(&[1, 0, 0]);
        assert!(x2.transvectant(&x2, 2).unwrap().is_zero());
    }

    #[test]
    fn index_out_of_range() {
        let f = rat_form(&[1, 0, 0]);
        let g = rat_form(&[1, 1, 1, 1]);
        assert_eq!(
            f.transvectant(&g, 3),
            Err(FormError::IndexOutOfRange { k: 3, n: 2, m: 3 })
        );
    }

    #[test]
    fn sl2_conventions() {
        let x2 = rat_form(&[1, 0, 0]);
        let y2 = rat_form(&[0, 0, 1]);
        let u = [[1, 1], [0, 1]];
        assert_eq!(x2.apply_sl2(u).unwrap(), x2);
        assert_eq!(y2.apply_sl2(u).unwrap(), rat_form(&[1, 2, 1]));
        assert_eq!(x2.apply_sl2([[1, 0], [0, 1]]).unwrap(), x2);
        assert_eq!(
            x2.apply_sl2([[2, 0], [0, 1]]),
            Err(FormError::Determinant(2))
        );
        let f = rat_form(&[3, -1, 4, 1, -5]);
        let m = [[2, 3], [1, 2]];
        let inv = [[2, -3], [-1, 2]];
        assert_eq!(f.apply_sl2(m).unwrap().apply_sl2(inv).unwrap(), f);
    }

    #[test]
    fn pretty_layout() {
        let f = generic_form(2);
        assert_eq!(f.pretty(), "(a2)*y^2 +\n(2*a1)*x*y +\n(a0)*x^2");
    }
}

//! Root multiplicities of binary forms, nullform predicates, and the exact
//! checks behind the description of the nullcone of the decimic.
//!
//! A root is a point `[x0 : y0]` of the projective line. The root `[1 : 0]`
//! belongs to the factor `y`; every other root is found on the dehomogenized
//! polynomial `f(t, 1)`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::binform::{BinaryForm, FormError};
use crate::catalog::{decimic_definitions, hsop, CatalogError, NULLCONE_INVARIANTS};
use crate::poly::{QPoly, VariableSet};
use crate::recipe::{Definitions, Evaluator, RecipeError};
use crate::ring::Rationals;

pub type NumericForm = BinaryForm<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NullconeError {
    #[error("the zero form has no roots")]
    ZeroForm,
    #[error("order {d} with k = {k} is outside both branches (need d >= 4k - 4)")]
    Branch { d: u32, k: u32 },
    #[error("order must be at least 2")]
    OrderTooSmall,
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Recipe(#[from] RecipeError),
    #[error(transparent)]
    Form(#[from] FormError),
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Dense univariate polynomials over the rationals, lowest degree first.
mod upoly {
    use super::*;

    pub type U = Vec<BigRational>;

    pub fn trim(mut p: U) -> U {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    pub fn degree(p: &U) -> Option<usize> {
        p.len().checked_sub(1)
    }

    pub fn derivative(p: &U) -> U {
        trim(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    pub fn sub(a: &U, b: &U) -> U {
        let mut out = vec![BigRational::zero(); a.len().max(b.len())];
        for (i, c) in a.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in b.iter().enumerate() {
            out[i] -= c;
        }
        trim(out)
    }

    /// Quotient and remainder of `a` by nonzero `b`.
    pub fn divmod(a: &U, b: &U) -> (U, U) {
        let db = degree(b).expect("nonzero divisor");
        let lead = b[db].clone();
        let mut r = a.clone();
        let mut quo = vec![BigRational::zero(); a.len().saturating_sub(db).max(1)];
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let c = &r[dr] / &lead;
            let shift = dr - db;
            for (i, bc) in b.iter().enumerate() {
                r[i + shift] -= &c * bc;
            }
            quo[shift] = c;
            r = trim(r);
        }
        (trim(quo), r)
    }

    pub fn monic(p: U) -> U {
        match p.last().cloned() {
            Some(l) => p.into_iter().map(|c| c / &l).collect(),
            None => p,
        }
    }

    pub fn gcd(a: &U, b: &U) -> U {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = divmod(&a, &b).1;
            a = b;
            b = r;
        }
        monic(a)
    }

    pub fn exact_div(a: &U, b: &U) -> U {
        let (quo, r) = divmod(a, b);
        debug_assert!(r.is_empty());
        quo
    }

    /// Yun's square-free decomposition of a nonzero `p`: pairs `(a_i, i)`
    /// with `p = c * prod a_i^i`, each `a_i` square-free, monic and of
    /// positive degree.
    pub fn squarefree(p: &U) -> Vec<(U, u32)> {
        let mut out = Vec::new();
        if degree(p).unwrap_or(0) == 0 {
            return out;
        }
        let dp = derivative(p);
        let b = gcd(p, &dp);
        let mut c = exact_div(p, &b);
        let mut d = sub(&exact_div(&dp, &b), &derivative(&c));
        let mut i = 1;
        while degree(&c).unwrap_or(0) > 0 {
            let a = gcd(&c, &d);
            c = exact_div(&c, &a);
            d = sub(&exact_div(&d, &a), &derivative(&c));
            if degree(&a).unwrap_or(0) > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }
}

/// The largest root multiplicity of a nonzero form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub multiplicity: u32,
    /// `(alpha, beta)` with the root a zero of `alpha x + beta y`, when that
    /// root is rational.
    pub linear_factor: Option<(BigRational, BigRational)>,
}

/// Multiplicity of the root `[1 : 0]` (the power of `y` dividing `f`) and the
/// square-free layers of `f(t, 1)`.
fn root_structure(f: &NumericForm) -> Result<(u32, Vec<(upoly::U, u32)>), NullconeError> {
    if f.is_zero() {
        return Err(NullconeError::ZeroForm);
    }
    let n = f.order() as usize;
    let at_infinity = f
        .coeffs()
        .iter()
        .position(|c| !Zero::is_zero(c))
        .expect("nonzero form") as u32;
    // f(t, 1) = sum c_i t^(n-i).
    let u = upoly::trim((0..=n).map(|e| f.coeffs()[n - e].clone()).collect());
    Ok((at_infinity, upoly::squarefree(&u)))
}

/// Exact maximum root multiplicity by square-free decomposition.
pub fn max_multiplicity(f: &NumericForm) -> Result<MultiplicityReport, NullconeError> {
    let (inf, layers) = root_structure(f)?;
    let finite = layers.iter().max_by_key(|(_, i)| *i);
    let best_finite = finite.map_or(0, |(_, i)| *i);
    if inf >= best_finite {
        let factor = (inf > 0).then(|| (BigRational::zero(), BigRational::one()));
        return Ok(MultiplicityReport {
            multiplicity: inf,
            linear_factor: factor,
        });
    }
    let (a, i) = finite.expect("finite root exists");
    // A monic linear layer t + b gives the factor x + b y.
    let factor = (a.len() == 2).then(|| (BigRational::one(), a[0].clone()));
    Ok(MultiplicityReport {
        multiplicity: *i,
        linear_factor: factor,
    })
}

/// True iff `f` has a root of multiplicity greater than half its order. The
/// zero form counts as a nullform.
pub fn is_nullform(f: &NumericForm) -> bool {
    if f.is_zero() {
        return true;
    }
    let m = max_multiplicity(f).expect("nonzero form").multiplicity;
    2 * m > f.order()
}

/// Roots of multiplicity above `order / 2`: whether `[1 : 0]` is one, and
/// the monic polynomial in `t` vanishing exactly at the finite ones.
fn heavy_roots(f: &NumericForm) -> Result<(bool, upoly::U), NullconeError> {
    let (inf, layers) = root_structure(f)?;
    let n = f.order();
    let mut finite = vec![BigRational::one()];
    for (a, i) in layers {
        if 2 * i > n {
            finite = mul_u(&finite, &a);
        }
    }
    Ok((2 * inf > n, finite))
}

fn mul_u(a: &upoly::U, b: &upoly::U) -> upoly::U {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// True iff `g` and `h` share a root of multiplicity above half the order in
/// each.
pub fn is_pair_nullform(g: &NumericForm, h: &NumericForm) -> Result<bool, NullconeError> {
    let (gi, gf) = heavy_roots(g)?;
    let (hi, hf) = heavy_roots(h)?;
    Ok((gi && hi) || upoly::degree(&upoly::gcd(&gf, &hf)).unwrap_or(0) > 0)
}

fn random_form<R: Rng>(order: u32, rng: &mut R, range: i64) -> NumericForm {
    let coeffs = (0..=order)
        .map(|_| q(rng.gen_range(-range..=range)))
        .collect();
    BinaryForm::new(order, 1, coeffs).expect("length matches order")
}

fn random_linear<R: Rng>(rng: &mut R) -> (i64, i64) {
    loop {
        let l = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        if l != (0, 0) {
            return l;
        }
    }
}

fn linear_power(l: (i64, i64), e: u32) -> NumericForm {
    let lin = BinaryForm::new(1, 1, vec![q(l.0), q(l.1)]).expect("order one");
    if e == 0 {
        return BinaryForm::new(0, 1, vec![q(1)]).expect("constant");
    }
    lin.pow(e)
}

/// `l^e * g` for a random linear `l` and a random `g` of order `n - e` not
/// divisible by `l`, so the root of `l` has multiplicity exactly `e`.
pub fn random_form_with_root<R: Rng>(n: u32, e: u32, rng: &mut R) -> NumericForm {
    let l = random_linear(rng);
    let mut g = random_form(n - e, rng, 9);
    // l vanishes at [x : y] = [l.1 : -l.0].
    while g.is_zero() || Zero::is_zero(&eval_at(&g, l.1, -l.0)) {
        g = random_form(n - e, rng, 9);
    }
    linear_power(l, e).mul(&g).with_degree(1)
}

fn eval_at(f: &NumericForm, x: i64, y: i64) -> BigRational {
    let n = f.order();
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c * q(x).pow((n - i as u32) as i32) * q(y).pow(i as i32))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// A form with a root of multiplicity exactly `n/2 + 1` (rounded down).
pub fn random_nullform<R: Rng>(n: u32, rng: &mut R) -> Result<NumericForm, NullconeError> {
    if n < 2 {
        return Err(NullconeError::OrderTooSmall);
    }
    Ok(random_form_with_root(n, n / 2 + 1, rng))
}

/// Result of testing that a system of parameters cuts out the nullcone.
#[derive(Debug, Clone, PartialEq)]
pub struct HsopCheck {
    pub n: u32,
    pub nullforms: usize,
    /// Nullforms on which some member of the system did not vanish.
    pub nullform_failures: Vec<NumericForm>,
    pub others: usize,
    /// Forms outside the nullcone on which every member vanished.
    pub other_failures: Vec<NumericForm>,
}

impl HsopCheck {
    pub fn passed(&self) -> bool {
        self.nullform_failures.is_empty() && self.other_failures.is_empty()
    }
}

/// Both directions on samples: every sampled nullform annihilates the whole
/// system, and every sampled form outside the nullcone has a nonvanishing
/// member. The second direction is evidence, not proof. Half of the forms
/// outside the nullcone sit on its border, with a root of multiplicity
/// exactly `n/2`.
pub fn verify_hsop<R: Rng>(
    n: u32,
    samples: usize,
    rng: &mut R,
) -> Result<HsopCheck, NullconeError> {
    let spec = hsop(n)?;
    let mut report = HsopCheck {
        n,
        nullforms: 0,
        nullform_failures: Vec::new(),
        others: 0,
        other_failures: Vec::new(),
    };
    for _ in 0..samples {
        let f = random_nullform(n, rng)?;
        report.nullforms += 1;
        if spec.evaluate(&f)?.iter().any(|v| !Zero::is_zero(v)) {
            report.nullform_failures.push(f);
        }
    }
    for s in 0..samples {
        let f = if s % 2 == 0 {
            random_form_with_root(n, n / 2, rng)
        } else {
            random_form(n, rng, 9)
        };
        if is_nullform(&f) {
            continue;
        }
        report.others += 1;
        if spec.evaluate(&f)?.iter().all(Zero::is_zero) {
            report.other_failures.push(f);
        }
    }
    Ok(report)
}

/// `Some(c)` with `computed = c * expected` and `c` a nonzero constant.
pub fn proportionality(computed: &QPoly, expected: &QPoly) -> Option<BigRational> {
    let (m, e) = expected.leading()?;
    let c = computed.coeff(m) / e;
    if Zero::is_zero(&c) || computed != &expected.scale(&c) {
        return None;
    }
    Some(c)
}

/// One displayed identity, checked up to a constant (or exactly).
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub label: String,
    pub computed: QPoly,
    pub expected: QPoly,
    /// Whether the identity is an equality rather than a proportionality.
    pub exact: bool,
    pub ratio: Option<BigRational>,
}

impl IdentityCheck {
    fn new(label: &str, computed: QPoly, expected: QPoly, exact: bool) -> Self {
        let ratio = proportionality(&computed, &expected);
        Self {
            label: label.to_string(),
            computed,
            expected,
            exact,
            ratio,
        }
    }

    pub fn holds(&self) -> bool {
        match &self.ratio {
            Some(r) => !self.exact || r.is_one(),
            None => false,
        }
    }
}

fn parse(vars: &alloc::sync::Arc<VariableSet>, text: &str) -> QPoly {
    QPoly::parse(vars, &Rationals, text).expect("fixed text parses")
}

fn scalar(f: BinaryForm<QPoly>, label: &str) -> Result<QPoly, NullconeError> {
    f.scalar_value()
        .cloned()
        .ok_or_else(|| CatalogError::NotInvariant(label.to_string()).into())
}

fn set_zero(p: &QPoly, names: &[&str]) -> QPoly {
    let zero = QPoly::zero(p.vars(), &Rationals);
    let bindings: Vec<(&str, QPoly)> = names.iter().map(|n| (*n, zero.clone())).collect();
    p.substitute_named(&bindings)
        .expect("names belong to the ring")
}

/// The pair `k = x^3 (a1 x + a2 y)`, `m = y^4 (b1 x^2 + b2 x y + b3 y^2)`
/// outside the nullcone of `V4 + V6`: the displayed transvectants are
/// proportional to the listed monomial expressions.
pub fn lemma8_case_check() -> Result<Vec<IdentityCheck>, NullconeError> {
    let vars = VariableSet::new(&["a1", "a2", "b1", "b2", "b3"]).expect("distinct names");
    let v = |s: &str| parse(&vars, s);
    let zero = QPoly::zero(&vars, &Rationals);
    let k = BinaryForm::new(
        4,
        1,
        vec![v("a1"), v("a2"), zero.clone(), zero.clone(), zero.clone()],
    )?;
    let m = BinaryForm::new(
        6,
        1,
        vec![
            zero.clone(),
            zero.clone(),
            zero.clone(),
            zero.clone(),
            v("b1"),
            v("b2"),
            v("b3"),
        ],
    )?;
    let defs = Definitions::new();
    let mut ev = Evaluator::new(k.clone(), &defs);
    ev.bind("k", k);
    ev.bind("m", m);
    let mut value =
        |text: &str| -> Result<QPoly, NullconeError> { scalar(ev.eval_str(text)?, text) };
    let general = value("((m,m)_4,k)_4")?;
    let j10 = value("((m,m)_2,k^2)_8")?;
    let j9 = value("((m,k)_1,k^2)_8")?;
    let a14 = value("((k,k)_2^2,(m,m)_2)_8")?;
    let a12 = value("(m^2,k^3)_12")?;
    let case1 = |p: &QPoly| set_zero(p, &["a1"]);
    let case2 = |p: &QPoly| set_zero(p, &["b1"]);
    Ok(vec![
        IdentityCheck::new("((m,m)_4,k)_4 ~ a1 b1^2", general, v("a1*b1^2"), false),
        IdentityCheck::new(
            "a1 = 0: ((m,m)_2,k^2)_8 ~ a2^2 b1^2",
            case1(&j10),
            v("a2^2*b1^2"),
            false,
        ),
        IdentityCheck::new(
            "a1 = 0: ((m,k)_1,k^2)_8 ~ a2^3 b3",
            case1(&j9),
            v("a2^3*b3"),
            false,
        ),
        IdentityCheck::new(
            "a1 = 0: ((k,k)_2^2,(m,m)_2)_8 ~ a2^4 (5 b2^2 - 12 b1 b3)",
            case1(&a14),
            v("5*a2^4*b2^2 - 12*a2^4*b1*b3"),
            false,
        ),
        IdentityCheck::new(
            "b1 = 0: ((m,m)_2,k^2)_8 ~ a1^2 b2^2",
            case2(&j10),
            v("a1^2*b2^2"),
            false,
        ),
        IdentityCheck::new(
            "b1 = 0: ((m,k)_1,k^2)_8 ~ a2^3 b3",
            case2(&j9),
            v("a2^3*b3"),
            false,
        ),
        IdentityCheck::new(
            "b1 = 0: ((k,k)_2^2,(m,m)_2)_8 ~ a2^4 b2^2",
            case2(&a14),
            v("a2^4*b2^2"),
            false,
        ),
        IdentityCheck::new(
            "b1 = 0: (m^2,k^3)_12 ~ a1 (a2^2 b2^2 - 11 a1 a2 b2 b3 + 22 a1^2 b3^2)",
            case2(&a12),
            v("a1*a2^2*b2^2 - 11*a1^2*a2*b2*b3 + 22*a1^3*b3^2"),
            false,
        ),
    ])
}

/// The cases `k = x^4` and `k = x^3 y` for the generic decimic, plus the
/// specializations of `k` and `j2` used to rule them out.
pub fn lemma7_case_check() -> Result<Vec<IdentityCheck>, NullconeError> {
    let vars = VariableSet::form_coefficients(10);
    let v = |s: &str| parse(&vars, s);
    let defs = decimic_definitions();
    let f = crate::binform::generic_rational_form(10);
    let zero = QPoly::zero(&vars, &Rationals);
    let one = QPoly::one(&vars, &Rationals);
    let pinned = |i: usize| {
        let mut c = vec![zero.clone(); 5];
        c[i] = one.clone();
        BinaryForm::new(4, 2, c).expect("order four")
    };
    let mut out = Vec::new();

    let mut ev = Evaluator::new(f.clone(), &defs);
    ev.bind("k", pinned(0));
    let mut value = |s: &str| -> Result<QPoly, NullconeError> { scalar(ev.eval_named(s)?, s) };
    out.push(IdentityCheck::new(
        "k = x^4: A12 ~ a10^2",
        value("A12")?,
        v("a10^2"),
        false,
    ));
    out.push(IdentityCheck::new(
        "k = x^4: j10 ~ -a9^2 + a8 a10",
        value("j10")?,
        v("-a9^2 + a8*a10"),
        false,
    ));
    out.push(IdentityCheck::new(
        "k = x^4: j8 ~ 3 a8^2 - 4 a7 a9 + a6 a10",
        value("j8")?,
        v("3*a8^2 - 4*a7*a9 + a6*a10"),
        false,
    ));
    out.push(IdentityCheck::new(
        "k = x^4: A6 ~ -10 a7^2 + 15 a6 a8 - 6 a5 a9 + a4 a10",
        value("A6")?,
        v("-10*a7^2 + 15*a6*a8 - 6*a5*a9 + a4*a10"),
        false,
    ));

    let mut ev = Evaluator::new(f.clone(), &defs);
    ev.bind("k", pinned(1));
    let mut value = |s: &str| -> Result<QPoly, NullconeError> { scalar(ev.eval_named(s)?, s) };
    out.push(IdentityCheck::new(
        "k = x^3 y: j9 ~ a9",
        value("j9")?,
        v("a9"),
        false,
    ));
    out.push(IdentityCheck::new(
        "k = x^3 y: A14 ~ a7 a9 - a8^2",
        value("A14")?,
        v("a7*a9 - a8^2"),
        false,
    ));
    out.push(IdentityCheck::new(
        "k = x^3 y: j10 ~ -5 a7^2 + 2 a6 a8 + 3 a5 a9",
        value("j10")?,
        v("-5*a7^2 + 2*a6*a8 + 3*a5*a9"),
        false,
    ));
    out.push(IdentityCheck::new(
        "k = x^3 y: A6 ~ -10 a6^2 + 15 a5 a7 - 6 a4 a8 + a3 a9",
        value("A6")?,
        v("-10*a6^2 + 15*a5*a7 - 6*a4*a8 + a3*a9"),
        false,
    ));

    // Specializations of the generic k and j2.
    let mut ev = Evaluator::new(f, &defs);
    let k = ev.eval_named("k")?;
    let j2 = scalar(ev.eval_named("j2")?, "j2")?;
    let high = ["a7", "a8", "a9", "a10"];
    let printed_high = [
        "70*a4^2 - 112*a3*a5 + 56*a2*a6",
        "56*a4*a5 - 112*a3*a6",
        "168*a5^2 - 252*a4*a6",
        "56*a5*a6",
        "70*a6^2",
    ];
    for (i, text) in printed_high.iter().enumerate() {
        out.push(IdentityCheck::new(
            &alloc::format!("a7 = .. = a10 = 0: coefficient {i} of k"),
            set_zero(k.coeff(i as u32), &high),
            v(text),
            true,
        ));
    }
    let middle = ["a6", "a7", "a8", "a9"];
    let printed_middle = [
        "70*a4^2 - 112*a3*a5",
        "56*a4*a5",
        "168*a5^2 + 2*a0*a10",
        "4*a1*a10",
        "2*a2*a10",
    ];
    for (i, text) in printed_middle.iter().enumerate() {
        out.push(IdentityCheck::new(
            &alloc::format!("a6 = .. = a9 = 0: coefficient {i} of k"),
            set_zero(k.coeff(i as u32), &middle),
            v(text),
            true,
        ));
    }
    out.push(IdentityCheck::new(
        "a6 = .. = a9 = 0: j2",
        set_zero(&j2, &middle),
        v("-252*a5^2 + 2*a0*a10"),
        true,
    ));
    Ok(out)
}

/// Which of the eleven nullcone invariants survive on one special form.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalForm {
    pub label: String,
    pub nonzero: Vec<String>,
    pub expected_nonzero: Vec<String>,
    /// Whether `j14 + A14` is a nonzero polynomial on this form.
    pub combined_nonzero: bool,
}

impl ExceptionalForm {
    pub fn holds(&self) -> bool {
        self.nonzero == self.expected_nonzero && self.combined_nonzero
    }
}

/// `x^2 y (2 a1 x^7 + 9 a8 y^7)` kills every nullcone invariant except
/// `A14`, and `y^3 (120 a3 x^7 + a10 y^7)` every one except `j14`; on both,
/// `j14 + A14` survives.
pub fn exceptional_forms_check() -> Result<Vec<ExceptionalForm>, NullconeError> {
    let vars = VariableSet::form_coefficients(10);
    let defs = decimic_definitions();
    type Case<'a> = (&'a str, [(usize, &'a str); 2], &'a str);
    let cases: [Case; 2] = [
        (
            "x^2 y (2 a1 x^7 + 9 a8 y^7)",
            [(1, "2*a1"), (8, "9*a8")],
            "A14",
        ),
        (
            "y^3 (120 a3 x^7 + a10 y^7)",
            [(3, "120*a3"), (10, "a10")],
            "j14",
        ),
    ];
    let mut out = Vec::new();
    for (label, terms, survivor) in cases {
        let mut coeffs = vec![QPoly::zero(&vars, &Rationals); 11];
        for (i, text) in terms {
            coeffs[i] = parse(&vars, text);
        }
        let f = BinaryForm::new(10, 1, coeffs)?;
        let mut ev = Evaluator::new(f, &defs);
        let mut nonzero = Vec::new();
        for s in NULLCONE_INVARIANTS {
            if !scalar(ev.eval_named(s)?, s)?.is_zero() {
                nonzero.push(s.to_string());
            }
        }
        let combined = scalar(ev.eval_str("j14 + A14")?, "j14 + A14")?;
        out.push(ExceptionalForm {
            label: label.to_string(),
            nonzero,
            expected_nonzero: vec![survivor.to_string()],
            combined_nonzero: !combined.is_zero(),
        });
    }
    Ok(out)
}

/// Hypothesis and conclusion of the root-multiplicity criterion: if the
/// listed transvectants of `f` (order `d`) vanish, `f` has a root of
/// multiplicity `d - k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JerzyOutcome {
    pub hypothesis: bool,
    pub conclusion: bool,
}

impl JerzyOutcome {
    pub fn consistent(&self) -> bool {
        !self.hypothesis || self.conclusion
    }
}

pub fn jerzy_predicate(f: &NumericForm, k: u32) -> Result<JerzyOutcome, NullconeError> {
    let d = f.order();
    if k == 0 || d + 4 < 4 * k {
        return Err(NullconeError::Branch { d, k });
    }
    let mut hypothesis = (k..)
        .map(|j| 2 * j)
        .take_while(|&e| e <= d)
        .all(|e| f.transvectant(f, e).map(|t| t.is_zero()).unwrap_or(false));
    if hypothesis && d + 4 == 4 * k {
        let inner = f.transvectant(f, 2 * k - 2)?;
        hypothesis = inner.transvectant(f, d)?.is_zero();
    }
    let conclusion = !f.is_zero() && max_multiplicity(f)?.multiplicity > d - k;
    Ok(JerzyOutcome {
        hypothesis,
        conclusion,
    })
}

/// A mix of forms for exercising [`jerzy_predicate`]: powers of linear forms
/// times small cofactors, borderline multiplicities, and random forms.
pub fn jerzy_sample<R: Rng>(d: u32, k: u32, rng: &mut R) -> NumericForm {
    let top = d - k + 1;
    match rng.gen_range(0..3) {
        0 => random_form_with_root(d, top, rng),
        1 => random_form_with_root(d, top.saturating_sub(1).max(1), rng),
        _ => random_form(d, rng, 5),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn form(coeffs: &[i64]) -> NumericForm {
        BinaryForm::new(
            coeffs.len() as u32 - 1,
            1,
            coeffs.iter().map(|&c| q(c)).collect(),
        )
        .unwrap()
    }

    fn monomial(n: u32, i: u32) -> NumericForm {
        let mut c = vec![0; n as usize + 1];
        c[i as usize] = 1;
        form(&c)
    }

    #[test]
    fn multiplicities_of_visible_factorizations() {
        // x^6 y^4
        assert_eq!(max_multiplicity(&monomial(10, 4)).unwrap().multiplicity, 6);
        // (x + y)^7 x^3
        let f = form(&[1, 1]).pow(7).mul(&monomial(3, 0)).with_degree(1);
        let r = max_multiplicity(&f).unwrap();
        assert_eq!(r.multiplicity, 7);
        assert_eq!(r.linear_factor, Some((q(1), q(1))));
        // x^10 + y^10
        let mut c = vec![0; 11];
        c[0] = 1;
        c[10] = 1;
        assert_eq!(max_multiplicity(&form(&c)).unwrap().multiplicity, 1);
        assert_eq!(
            max_multiplicity(&form(&[0, 0, 0])),
            Err(NullconeError::ZeroForm)
        );
    }

    #[test]
    fn root_at_infinity_is_the_factor_y() {
        let r = max_multiplicity(&monomial(5, 4)).unwrap();
        assert_eq!(r.multiplicity, 4);
        assert_eq!(r.linear_factor, Some((q(0), q(1))));
        let r = max_multiplicity(&monomial(5, 1)).unwrap();
        assert_eq!(r.multiplicity, 4);
        assert_eq!(r.linear_factor, Some((q(1), q(0))));
    }

    #[test]
    fn nullform_thresholds() {
        assert!(is_nullform(&monomial(10, 4)));
        assert!(!is_nullform(&monomial(10, 5)));
        let x5_x_plus_y5 = form(&[1, 1]).pow(5).mul(&monomial(5, 0)).with_degree(1);
        assert!(!is_nullform(&x5_x_plus_y5));
        assert!(is_nullform(&form(&[0; 11])));
    }

    #[test]
    fn pair_nullforms() {
        // x^4 and x^4 y^2 share x = 0 with multiplicities 4 > 2 and 4 > 3.
        assert!(is_pair_nullform(&monomial(4, 0), &monomial(6, 2)).unwrap());
        // x^3 y has its triple root at x = 0, y^6 vanishes only at y = 0.
        assert!(!is_pair_nullform(&monomial(4, 1), &monomial(6, 6)).unwrap());
        assert!(is_pair_nullform(&monomial(4, 1), &monomial(6, 0)).unwrap());
        assert!(!is_pair_nullform(&monomial(4, 0), &monomial(6, 6)).unwrap());
        // y^4 and x y^5 share the root at infinity.
        assert!(is_pair_nullform(&monomial(4, 4), &monomial(6, 5)).unwrap());
    }

    #[test]
    fn random_nullforms_have_the_intended_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = random_nullform(10, &mut rng).unwrap();
            assert!(is_nullform(&f));
            assert_eq!(max_multiplicity(&f).unwrap().multiplicity, 6);
        }
        let a = random_nullform(8, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = random_nullform(8, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hsop_on_special_decimics() {
        let spec = hsop(10).unwrap();
        assert!(spec
            .evaluate(&monomial(10, 4))
            .unwrap()
            .iter()
            .all(Zero::is_zero));
        let mut c = vec![0; 11];
        c[0] = 1;
        c[10] = 1;
        assert_eq!(spec.evaluate(&form(&c)).unwrap()[0], q(2));
    }

    #[test]
    fn hsop_small_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 4, 6] {
            let r = verify_hsop(n, 10, &mut rng).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.nullforms, 10);
        }
    }

    #[test]
    fn jerzy_examples() {
        let x8 = monomial(8, 0);
        let o = jerzy_predicate(&x8, 1).unwrap();
        assert!(o.hypothesis && o.conclusion);
        let x4y4 = monomial(8, 4);
        let o = jerzy_predicate(&x4y4, 1).unwrap();
        assert!(!o.hypothesis && !o.conclusion);
        assert_eq!(
            jerzy_predicate(&x8, 4),
            Err(NullconeError::Branch { d: 8, k: 4 })
        );
        // d = 4k - 4 branch: d = 8, k = 3.
        let o = jerzy_predicate(&x8, 3).unwrap();
        assert!(o.hypothesis && o.conclusion);
    }

    #[test]
    fn proportionality_constant() {
        let vars = VariableSet::new(&["a", "b"]).unwrap();
        let p = |s: &str| parse(&vars, s);
        assert_eq!(
            proportionality(&p("-6*a^2 + 3*a*b"), &p("2*a^2 - a*b")),
            Some(q(-3))
        );
        assert_eq!(proportionality(&p("a^2 + a*b"), &p("a^2 - a*b")), None);
        assert_eq!(proportionality(&p("0"), &p("a")), None);
    }
}

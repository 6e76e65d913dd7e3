//! Transvectant expressions: `((m,k)_1,k^2)_8`, `j14 + A14`, ...
//!
//! A [`Recipe`] is built over the base form `f` and named covariants whose
//! own recipes live in a [`Definitions`] table. The [`Evaluator`] expands a
//! recipe against any concrete base form and lets callers pin a named
//! covariant to a chosen form (for example `k = x^4`).

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::binform::{BinaryForm, FormError};
use crate::ring::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecipeError {
    #[error("cannot parse recipe `{text}`: {reason}")]
    Parse { text: String, reason: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("definition of `{0}` refers to itself")]
    Cycle(String),
    #[error(transparent)]
    Form(#[from] FormError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recipe {
    /// The base form `f`.
    Form,
    /// A named covariant or invariant.
    Ref(String),
    Transvectant(Box<Recipe>, Box<Recipe>, u32),
    Product(Box<Recipe>, Box<Recipe>),
    Power(Box<Recipe>, u32),
    Sum(Box<Recipe>, Box<Recipe>),
    /// Integer multiple.
    Scaled(i64, Box<Recipe>),
}

impl Recipe {
    pub fn parse(text: &str) -> Result<Self, RecipeError> {
        let word = |c: char| c.is_ascii_alphanumeric() || c == '_';
        let mut prev: Option<char> = None;
        let mut gap = false;
        for c in text.chars() {
            if c.is_whitespace() {
                gap = prev.is_some();
                continue;
            }
            if gap && word(c) && prev.is_some_and(word) {
                return Err(RecipeError::Parse {
                    text: text.to_owned(),
                    reason: "two symbols separated only by whitespace".into(),
                });
            }
            prev = Some(c);
            gap = false;
        }
        let mut p = Parser {
            src: text,
            chars: text
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            pos: 0,
        };
        let r = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(r)
    }

    pub fn transvectant(a: Recipe, b: Recipe, k: u32) -> Self {
        Recipe::Transvectant(Box::new(a), Box::new(b), k)
    }

    pub fn sym(name: &str) -> Self {
        if name == "f" {
            Recipe::Form
        } else {
            Recipe::Ref(name.to_string())
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Recipe::Sum(..) => 0,
            Recipe::Product(..) | Recipe::Scaled(..) => 1,
            Recipe::Power(..) => 2,
            _ => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Recipe::Form => f.write_str("f")?,
            Recipe::Ref(s) => f.write_str(s)?,
            Recipe::Transvectant(a, b, k) => {
                f.write_str("(")?;
                a.fmt_at(f, 0)?;
                f.write_str(",")?;
                b.fmt_at(f, 0)?;
                write!(f, ")_{k}")?;
            }
            Recipe::Product(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str("*")?;
                b.fmt_at(f, 2)?;
            }
            Recipe::Power(a, e) => {
                a.fmt_at(f, 3)?;
                write!(f, "^{e}")?;
            }
            Recipe::Sum(a, b) => {
                a.fmt_at(f, 0)?;
                f.write_str(" + ")?;
                b.fmt_at(f, 1)?;
            }
            Recipe::Scaled(c, a) => {
                write!(f, "{c}*")?;
                a.fmt_at(f, 1)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }

    /// Named symbols this recipe mentions directly.
    pub fn references(&self, out: &mut Vec<String>) {
        match self {
            Recipe::Form => {}
            Recipe::Ref(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Recipe::Transvectant(a, b, _) | Recipe::Product(a, b) | Recipe::Sum(a, b) => {
                a.references(out);
                b.references(out);
            }
            Recipe::Power(a, _) | Recipe::Scaled(_, a) => a.references(out),
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl core::str::FromStr for Recipe {
    type Err = RecipeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Recipe::parse(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> RecipeError {
        RecipeError::Parse {
            text: self.src.to_owned(),
            reason: alloc::format!("{reason} at position {}", self.pos),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u32, RecipeError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let s: String = self.chars[start..self.pos]
            .iter()
            .map(|(_, c)| *c)
            .collect();
        s.parse().map_err(|_| self.error("number out of range"))
    }

    fn expr(&mut self) -> Result<Recipe, RecipeError> {
        let mut lhs = self.term()?;
        while self.eat('+') {
            let rhs = self.term()?;
            lhs = Recipe::Sum(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Recipe, RecipeError> {
        if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '-') {
            let negative = self.eat('-');
            let c = self.number()? as i64;
            if !self.eat('*') {
                return Err(self.error("expected `*` after a scalar"));
            }
            let inner = self.term()?;
            return Ok(Recipe::Scaled(
                if negative { -c } else { c },
                Box::new(inner),
            ));
        }
        let mut lhs = self.factor()?;
        while self.eat('*') {
            let rhs = self.factor()?;
            lhs = Recipe::Product(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Recipe, RecipeError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.number()?;
            return Ok(Recipe::Power(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Recipe, RecipeError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let first = self.expr()?;
                if self.eat(',') {
                    let second = self.expr()?;
                    if !self.eat(')') || !self.eat('_') {
                        return Err(self.error("expected `)_k`"));
                    }
                    let k = self.number()?;
                    Ok(Recipe::transvectant(first, second, k))
                } else if self.eat(')') {
                    Ok(first)
                } else {
                    Err(self.error("expected `,` or `)`"))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos]
                    .iter()
                    .map(|(_, c)| *c)
                    .collect();
                Ok(Recipe::sym(&name))
            }
            _ => Err(self.error("expected a symbol or `(`")),
        }
    }
}

/// Named recipes, e.g. `k = (f,f)_8`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Definitions {
    map: BTreeMap<String, Recipe>,
}

impl Definitions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn define(&mut self, name: &str, text: &str) -> Result<(), RecipeError> {
        let r = Recipe::parse(text)?;
        self.map.insert(name.to_string(), r);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Recipe> {
        self.map.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Recipe)> {
        self.map.iter()
    }
}

/// Expands recipes against one base form, memoizing every subexpression.
pub struct Evaluator<'a, S: Scalar> {
    base: BinaryForm<S>,
    defs: &'a Definitions,
    pinned: BTreeMap<String, BinaryForm<S>>,
    named: BTreeMap<String, BinaryForm<S>>,
    memo: BTreeMap<String, BinaryForm<S>>,
    active: Vec<String>,
}

impl<'a, S: Scalar> Evaluator<'a, S> {
    pub fn new(base: BinaryForm<S>, defs: &'a Definitions) -> Self {
        Self {
            base,
            defs,
            pinned: BTreeMap::new(),
            named: BTreeMap::new(),
            memo: BTreeMap::new(),
            active: Vec::new(),
        }
    }

    pub fn base(&self) -> &BinaryForm<S> {
        &self.base
    }

    /// Pins a named covariant to a given form; later references use it.
    pub fn bind(&mut self, name: &str, form: BinaryForm<S>) {
        self.memo.clear();
        self.named.clear();
        self.pinned.insert(name.to_string(), form);
    }

    pub fn eval_named(&mut self, name: &str) -> Result<BinaryForm<S>, RecipeError> {
        self.eval(&Recipe::sym(name))
    }

    pub fn eval_str(&mut self, text: &str) -> Result<BinaryForm<S>, RecipeError> {
        let r = Recipe::parse(text)?;
        self.eval(&r)
    }

    pub fn eval(&mut self, r: &Recipe) -> Result<BinaryForm<S>, RecipeError> {
        match r {
            Recipe::Form => Ok(self.base.clone()),
            Recipe::Ref(name) => {
                if let Some(f) = self.pinned.get(name).or_else(|| self.named.get(name)) {
                    return Ok(f.clone());
                }
                let def = self
                    .defs
                    .get(name)
                    .ok_or_else(|| RecipeError::UnknownSymbol(name.clone()))?
                    .clone();
                if self.active.contains(name) {
                    return Err(RecipeError::Cycle(name.clone()));
                }
                self.active.push(name.clone());
                let out = self.eval(&def);
                self.active.pop();
                let out = out?;
                self.named.insert(name.clone(), out.clone());
                Ok(out)
            }
            _ => {
                let key = alloc::format!("{r}");
                if let Some(f) = self.memo.get(&key) {
                    return Ok(f.clone());
                }
                let out = match r {
                    Recipe::Transvectant(a, b, k) => {
                        let a = self.eval(a)?;
                        let b = self.eval(b)?;
                        a.transvectant(&b, *k)?
                    }
                    Recipe::Product(a, b) => {
                        let a = self.eval(a)?;
                        let b = self.eval(b)?;
                        a.mul(&b)
                    }
                    Recipe::Power(a, e) => self.eval(a)?.pow(*e),
                    Recipe::Sum(a, b) => {
                        let a = self.eval(a)?;
                        let b = self.eval(b)?;
                        a.add(&b)?
                    }
                    Recipe::Scaled(c, a) => self.eval(a)?.scale_int(&BigInt::from(*c)),
                    Recipe::Form | Recipe::Ref(_) => unreachable!(),
                };
                self.memo.insert(key, out.clone());
                Ok(out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in [
            "(f,f)_8",
            "((m,k)_1,k^2)_8",
            "((k,k)_2^2,(m,m)_2)_8",
            "(m^2,k^3)_12",
            "j14 + A14",
            "3*j2*j4",
            "((k_q,k_q)_2,m_q)_4",
        ] {
            let r = Recipe::parse(s).unwrap();
            assert_eq!(alloc::format!("{r}"), s);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(Recipe::parse("(f,f)").is_err());
        assert!(Recipe::parse("(f,f)_").is_err());
        assert!(Recipe::parse("f +").is_err());
        assert!(Recipe::parse("f f").is_err());
    }

    #[test]
    fn cycles_are_reported() {
        let mut defs = Definitions::new();
        defs.define("u", "(u,f)_1").unwrap();
        let f = crate::binform::generic_form(2);
        let mut ev = Evaluator::new(f, &defs);
        assert_eq!(ev.eval_named("u"), Err(RecipeError::Cycle("u".into())));
        assert_eq!(
            ev.eval_named("w"),
            Err(RecipeError::UnknownSymbol("w".into()))
        );
    }
}

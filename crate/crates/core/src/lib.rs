//! Computer algebra for invariants of binary forms, specialised to the binary
//! decimic. Everything here needs only `alloc`; file formats, caching and the
//! command line live in the `binvar` crate.

#![no_std]

extern crate alloc;

pub mod binform;
pub mod catalog;
pub mod groebner;
pub mod hilbert;
pub mod membership;
pub mod modlin;
pub mod nullcone;
pub mod poly;
pub mod recipe;
pub mod reference;
pub mod ring;
pub mod search;
pub mod verify;

pub use binform::{generic_form, BinaryForm, FormError};
pub use catalog::{Catalog, CatalogError};
pub use groebner::{buchberger, Budget, GroebnerBasis, GroebnerError, Ideal};
pub use modlin::{IncrementalSpan, PrimeField};
pub use poly::{IntPoly, Monomial, MonomialOrder, PolyError, Polynomial, VariableSet};
pub use recipe::{Definitions, Evaluator, Recipe, RecipeError};
pub use ring::{Scalar, Zp};

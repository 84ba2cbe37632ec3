//! Superfields: exterior forms, polynomial sections, and derivations of ΛS.

mod form;
mod poly;

pub use form::{wedge_words, word_degree, SuperForm, Word};
pub use poly::{Monomial, PolySection};
mod derivation;

pub use derivation::{monomials_up_to, words_up_to, Derivation, DerivationError, Engine, Slot};

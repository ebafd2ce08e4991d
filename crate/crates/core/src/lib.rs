//! Proof normalization and witness extraction for Heyting Arithmetic with
//! the restricted excluded-middle rule EM₁.

pub mod branch;
pub mod derivation;
pub mod dsl;
pub mod extract;
pub mod formula;
pub mod oracle;
pub mod reduce;
pub mod registry;
pub mod term;
pub mod theory;

pub use derivation::{Address, Derivation, Label, Rule, Side};
pub use formula::{Formula, Pred, SimpleClass};
pub use oracle::AtomicRule;
pub use registry::FunctionRegistry;
pub use term::Term;
pub use theory::Theory;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/terms.md")]
    mod terms {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/derivations.md")]
    mod derivations {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    mod reductions {}
    #[doc = include_str!("../../../book/src/extraction.md")]
    mod extraction {}
}

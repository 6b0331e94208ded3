//! A proof-theory toolkit for the logic of bunched implications (BI).
//!
//! The crate provides:
//!
//! - [`syntax`]: formulas, bunches, bunch equivalence, one-hole contexts
//!   and the decomposition calculus, plus parsers and printers;
//! - [`calculus`]: derivation trees and a checking kernel for the BI
//!   sequent calculus, its extension with simple structural rules, and
//!   its S4 modal extension;
//! - [`admissible`]: constructive admissible-rule transformations
//!   (identity expansion and the invertible-rule family) with height
//!   contracts;
//! - [`bterm`]: bunched terms, linearity, substitution and the algebraic
//!   interpretation of simple structural rules;
//! - [`algebra`]: BI and BIS4 algebras, formula interpretation, finite
//!   powerset algebras over partial commutative monoids, and exhaustive
//!   axiom checking;
//! - [`closure`]: Moore closures on finite powerset algebras and the
//!   lifted BI algebra of closed sets;
//! - [`search`]: bounded backward cut-free proof search and cut
//!   elimination by re-proving.

pub mod admissible;
pub mod algebra;
pub mod bterm;
pub mod calculus;
pub mod closure;
pub mod search;
pub mod syntax;

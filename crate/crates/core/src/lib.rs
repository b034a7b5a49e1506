//! A toolkit for basic hybrid modal logic.
//!
//! The crate has four layers:
//!
//! * [`syntax`]: formulas, the ASCII surface grammar, parsing and printing.
//! * [`kripke`]: finite Kripke models with assignments, the recursive truth
//!   evaluator, bounded model enumeration and a brute-force validity oracle.
//! * [`game`]: the two-player semantic game over a model, solved exactly by
//!   backward induction, with explicit winning strategies.
//! * [`calculus`]: the labelled sequent calculus obtained by finitizing the
//!   search for winning strategies over all models, with saturation-based
//!   proof search, countermodel extraction from open branches, and an
//!   independent proof checker.

pub mod calculus;
pub mod game;
pub mod kripke;
pub mod syntax;

#[cfg(test)]
mod testutil;

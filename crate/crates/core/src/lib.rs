//! Exact twisted L2-Euler characteristics of 3-manifold group presentations.
//!
//! The pipeline takes a finite presentation, a homomorphism `mu` onto a free abelian
//! or poly-Z group `G` and a character `phi: G -> Z`. Fox derivatives are pushed
//! through `mu`, rewritten over the twisted Laurent ring `D[u^+-1]` determined by
//! `phi`, and diagonalized; the degrees of the diagonal give the Euler characteristic
//! and hence a lower bound for the Thurston norm of `phi o mu`.

pub mod acceptance;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod euler;
pub mod intmat;
pub mod oracles;
pub mod polytope;
pub mod presentation;
pub mod reduction;
pub mod ring;
pub mod skew;

pub use error::{Error, Result};

//! Frobenius and Cartier invariants of hypersurfaces in `F_p[x_1, …, x_n]`.
//!
//! A Cartier module is modeled as the ring itself with the structure map
//! `κ_g = κ∘(g·)`, where `κ` is the canonical Cartier operator whose image of
//! an ideal `I` is the Frobenius root `I^{[1/p]}` and `g` is a twist polynomial.
//! On top of that the crate computes test modules `τ(M, f^λ)`, F-jumping
//! numbers, nilpotence of induced Cartier structures on graded pieces,
//! non-F-pure submodules `σ(M, f^λ)` and the level-`e` Bernstein-Sato roots.
//!
//! ```
//! use cartier_lab::prelude::*;
//!
//! let ring = RingSpec::new(7, &["x", "y"]).unwrap();
//! let cusp = Polynomial::parse("x^2 + y^3", &ring).unwrap();
//! let filt = TestModuleFiltration::new(CartierModule::canonical(&ring), cusp, Budget::default()).unwrap();
//! assert_eq!(filt.fpt().unwrap(), ExactRational::frac(5, 6));
//! ```

pub mod bernstein;
pub mod budget;
pub mod cartmod;
pub mod cli;
pub mod error;
pub mod filtration;
pub mod frobenius;
pub mod ideals;
pub mod ring;
pub mod sigma;

pub use budget::Budget;
pub use error::{Error, Result};

/// The types most programs need.
pub mod prelude {
    pub use crate::bernstein::{bs_polynomial, gamma_set, lasttheo_check};
    pub use crate::budget::Budget;
    pub use crate::cartmod::{tau_zero, underline, CartierModule};
    pub use crate::error::{Error, Result};
    pub use crate::filtration::{TauRequest, TestModuleFiltration};
    pub use crate::ideals::Ideal;
    pub use crate::ring::{ExactRational, Polynomial, RingSpec};
    pub use crate::sigma::SigmaFiltration;
}

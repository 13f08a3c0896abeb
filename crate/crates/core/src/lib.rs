//! Exact resolutions of squarefree monomial ideals and DG algebra structures on them.

pub mod classify;
pub mod combin;
pub mod complex;
pub mod dg;
pub mod diam4;
pub mod error;
pub mod linalg;
pub mod morse;
pub mod poly;
pub mod prune;
pub mod taylor;

pub use error::{Error, Result};
pub use poly::{coeff, ideal_colon, minimalize, Coeff, Monomial, MonomialIdeal, Polynomial, VarSet};

pub mod classifying;
pub mod complex;
pub mod cpn;
pub mod derivation;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod gca;
pub mod linalg;
pub mod poset;
pub mod relative;

pub use error::{Error, Result};
pub use gca::{Algebra, Differential, Element, Generator, Monomial, SullivanModel};
pub use linalg::{q, q_frac, SparseVec, Subspace, Q};

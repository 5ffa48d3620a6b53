//! Hochschild homology and cohomology of exterior algebras over Z, Q and F_p.

pub mod algebra;
pub mod combinat;
pub mod complex;
pub mod error;
pub mod hochschild;
pub mod linalg;
pub mod morse;
pub mod products;
pub mod ring;
pub mod table;
pub mod verify;

pub use error::{Error, Result};

//! Polynomial vertical symmetries of linear differential systems `y' = A(x) y`
//! over `Q(x)`, the eigenring, and the constraints they impose on the
//! differential Galois group.

pub mod error;
pub mod exactcore;
pub mod expr_io;
pub mod galois_report;
pub mod lvhier;
pub mod ratsolve;
pub mod symclass;

pub use error::{Error, Result};
pub use exactcore::{BigInt, BigRational, Matrix, QMatrix, RatFunc, RfMatrix, UniPoly};
pub mod system;
pub mod vfields;

pub use galois_report::{GaloisConstraint, GaloisReport};
pub use lvhier::{LieVessiotMatrix, MonomialIndex};
pub use system::SystemSpec;
pub use vfields::{AmbientField, MvPoly, VerticalField};

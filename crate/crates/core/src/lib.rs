//! Exact singlet bases for three coupled SU(2) or SU(3) irreps, the action of the invariant
//! operators on them, and a brute-force Fock-space oracle to check every coefficient.

pub mod basis;
pub mod fock;
pub mod opexpr;
pub mod printed;
pub mod sqrt_rational;
pub mod su2;
pub mod su3;
pub mod symmetry;
pub mod validate;

pub use basis::{enumerate_su2, enumerate_su3, Group, Su2Label, Su3Label};
pub use opexpr::{canonicalize, parse, BaseOp, InvariantOp};
pub use sqrt_rational::SqrtRational;

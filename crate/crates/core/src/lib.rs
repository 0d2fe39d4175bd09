//! Twisted half-integral Kloosterman and Salié sums, the Whittaker/Bessel
//! kernel of the Kuznetsov formula, and experiments on sharp-cutoff shifted
//! convolution sums of half-integral weight.

pub mod arith;
pub mod error;
pub mod expsums;
pub mod harness;
pub mod modforms;
pub mod specfun;

pub use arith::{epsilon_d, kronecker, CharacterRecord, DirichletCharacter, Residue};
pub use error::{Error, Result};
pub use expsums::ExpSumResult;
pub use modforms::{CuspForm, ShiftedSumSeries};
pub use specfun::{QuadratureSpec, WhittakerParams};

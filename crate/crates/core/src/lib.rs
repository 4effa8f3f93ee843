//! Exact arithmetic in the wreath products `Z^n wr Z^m`, the integer codes
//! interpreting them in `Z` and back, and the central extensions `G_S`.

pub mod condensed;
pub mod definable;
pub mod encoding;
pub mod interp;
pub mod laurent;
pub mod lcs;
pub mod random;
pub mod scalar;
pub mod selftest;
pub mod wreath;

use num_bigint::BigInt;

pub type Poly = laurent::LaurentPoly<BigInt>;
pub type Element = wreath::WreathElement<BigInt>;
pub type Basis = definable::basis::BasisCandidate<BigInt>;
pub type Power = interp::IntAsPower<BigInt>;
pub type GsElem = condensed::GsElement<BigInt>;

//! Skew power series rings `R[[Y; sigma, delta]]` over `R = Z_p[[X]]` or
//! `F_p[[X]]`, computed exactly modulo the two-sided filtration ideals.

pub mod cli;
pub mod coeff;
pub mod error;
pub(crate) mod limb;
pub mod io;
pub mod iwasawa;
pub mod linalg;
pub mod padic;
pub mod par;
pub mod random;
pub mod selfcheck;
pub mod series;
pub mod skew;
pub mod weierstrass;

pub use coeff::CoeffSeries;
pub use error::{Error, Result};
pub use padic::{Mode, Order, PadicInt, PrecisionContext};
pub use series::{ResidueSeries, SkewSeries, ZPoly};
pub use skew::SkewData;
pub use weierstrass::{w_divide, w_divide_oracle, w_prepare, DistinguishedPoly};

//! Twisted Laurent polynomials over rational function fields.

mod laurent;
mod twist;

pub use laurent::{skew_mul, SkewLaurentPoly};
pub use twist::{apply_twist, Twist, DEFAULT_MEMO_CAP};

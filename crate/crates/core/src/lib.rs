pub mod catalog;
pub mod cooper;
pub mod factorization;
pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod seifert;
pub mod sigfn;
pub mod signature;

/// Exact rational with machine-word parts, used for angles and signature
/// values.
pub type Rat = num_rational::Ratio<i64>;

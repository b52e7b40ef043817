//! Grid solver for `σ(ω^k) = g(ω^b) − g(ω^a)` and the finite Fourier
//! exponent lemma.

pub mod fourier;
pub mod grid;

pub use fourier::{
    axis_marginal, case2_witness, eigen_dichotomy, fourier_compose, lemma_check, Action, Dichotomy, FourierSeries,
    Identity, LemmaReport,
};
pub use grid::{solve_g, verify_g, OrbitSolution, SolveOutcome, VerifyOutcome};

use crate::sigfn::SigFnError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FactorError {
    #[error("{name} = {value} is not coprime to p = {p}")]
    NotCoprime { name: &'static str, value: i64, p: i64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("e1 is not an eigenvector of M^p for any p up to {0}")]
    CaseOne(u32),
    #[error("exponent overflow")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Eval(#[from] SigFnError),
}

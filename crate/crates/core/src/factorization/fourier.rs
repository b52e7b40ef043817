//! Finitely supported Fourier series on the n-torus and the exponent lemma:
//! if `f(ω^M) − f(ω^d)` only involves `ω₁`, then either `e₁` is an
//! eigenvector of some `M^p`, with an explicit factorization of the
//! difference, or the difference vanishes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::FactorError;
use crate::linalg::IntMatrix;
use crate::Rat;

/// `Σ a_I ω^I` with finitely many nonzero `a_I`, `I ∈ ℤⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierSeries {
    dim: usize,
    coeffs: BTreeMap<Vec<i64>, Rat>,
}

impl FourierSeries {
    pub fn zero(dim: usize) -> Self {
        FourierSeries { dim, coeffs: BTreeMap::new() }
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<i64>, Rat)>) -> Result<Self, FactorError> {
        let mut f = Self::zero(dim);
        for (e, c) in terms {
            f.add_term(e, c)?;
        }
        Ok(f)
    }

    /// One-variable series `Σ c_k z^k`.
    pub fn univariate(terms: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        Self::from_terms(1, terms.into_iter().map(|(k, c)| (vec![k], c))).expect("dimension 1")
    }

    pub fn add_term(&mut self, exponent: Vec<i64>, c: Rat) -> Result<(), FactorError> {
        if exponent.len() != self.dim {
            return Err(FactorError::DimensionMismatch(self.dim, exponent.len()));
        }
        let entry = self.coeffs.entry(exponent).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exponent: &[i64]) -> Rat {
        self.coeffs.get(exponent).copied().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.coeffs.iter()
    }

    /// `Σ a_I`.
    pub fn mass(&self) -> Rat {
        self.coeffs.values().copied().sum()
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FactorError> {
        if self.dim != other.dim {
            return Err(FactorError::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(e.clone(), -c)?;
        }
        Ok(out)
    }

    /// Terms whose exponent vanishes after the first coordinate, kept in
    /// dimension `n`.
    pub fn axis_part(&self) -> Self {
        let coeffs = self.coeffs.iter().filter(|(e, _)| on_axis(e)).map(|(e, c)| (e.clone(), *c)).collect();
        FourierSeries { dim: self.dim, coeffs }
    }
}

fn on_axis(e: &[i64]) -> bool {
    e.iter().skip(1).all(|x| *x == 0)
}

/// Restriction to the `ω₁` axis, as a one-variable series.
pub fn axis_marginal(f: &FourierSeries) -> FourierSeries {
    let coeffs =
        f.coeffs.iter().filter(|(e, _)| on_axis(e)).map(|(e, c)| (vec![e.first().copied().unwrap_or(0)], *c)).collect();
    FourierSeries { dim: 1, coeffs }
}

/// Exponent substitution `I ↦ M·I` or `I ↦ d·I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    Matrix(IntMatrix),
    Scalar(i64),
}

/// `f(ω^A) = Σ a_I ω^{A·I}`, collisions summed.
pub fn fourier_compose(f: &FourierSeries, action: &Action) -> Result<FourierSeries, FactorError> {
    let mut out = FourierSeries::zero(f.dim);
    for (e, c) in &f.coeffs {
        let image = match action {
            Action::Matrix(m) => {
                if m.size() != f.dim {
                    return Err(FactorError::DimensionMismatch(f.dim, m.size()));
                }
                m.mul_vec(e).ok_or(FactorError::Overflow)?
            }
            Action::Scalar(d) => e.iter().map(|x| x.checked_mul(*d)).collect::<Option<_>>().ok_or(FactorError::Overflow)?,
        };
        out.add_term(image, *c)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dichotomy {
    /// `e₁` is not an eigenvector of `M^p` for `p ≤ bound`.
    CaseOneUpTo(u32),
    /// Minimal `p` with `M^p e₁ = λ e₁`.
    CaseTwo { p: u32, lambda: BigInt },
}

pub fn eigen_dichotomy(m: &IntMatrix, p_bound: u32) -> Dichotomy {
    let n = m.size();
    let big = m.to_big();
    let mut v: Vec<BigInt> = (0..n).map(|i| if i == 0 { BigInt::one() } else { BigInt::zero() }).collect();
    for p in 1..=p_bound {
        v = (0..n).map(|i| (0..n).map(|j| &big[i][j] * &v[j]).sum()).collect();
        if v.iter().skip(1).all(Zero::is_zero) && !v[0].is_zero() {
            return Dichotomy::CaseTwo { p, lambda: v[0].clone() };
        }
    }
    Dichotomy::CaseOneUpTo(p_bound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    Verified,
    Failed,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    /// `D = f(ω^M) − f(ω^d)`.
    pub difference: FourierSeries,
    pub off_axis_residual: FourierSeries,
    /// Axis part of `D` as a one-variable series.
    pub s: FourierSeries,
    pub dichotomy: Dichotomy,
    /// `s(ω^{d^{p−1}}) = g(ω^λ) − g(ω^{d^p})` with `g` the axis marginal of
    /// `f`, checked in case two when the residual vanishes.
    pub case2_identity: Identity,
}

fn pow_checked(d: i64, e: u32) -> Result<i64, FactorError> {
    d.checked_pow(e).ok_or(FactorError::Overflow)
}

fn check_action(m: &IntMatrix, d: i64) -> Result<(), FactorError> {
    if m.det().is_zero() {
        return Err(FactorError::InvalidParams("M must be nonsingular".into()));
    }
    if d == 0 {
        return Err(FactorError::InvalidParams("d must be nonzero".into()));
    }
    Ok(())
}

pub fn lemma_check(f: &FourierSeries, m: &IntMatrix, d: i64, p_bound: u32) -> Result<LemmaReport, FactorError> {
    check_action(m, d)?;
    let difference =
        fourier_compose(f, &Action::Matrix(m.clone()))?.sub(&fourier_compose(f, &Action::Scalar(d))?)?;
    let axis = difference.axis_part();
    let off_axis_residual = difference.sub(&axis)?;
    let s = axis_marginal(&difference);
    let dichotomy = eigen_dichotomy(m, p_bound);
    let case2_identity = match (&dichotomy, off_axis_residual.is_zero()) {
        (Dichotomy::CaseTwo { p, lambda }, true) => {
            let lambda = lambda.to_i64().ok_or(FactorError::Overflow)?;
            let g = axis_marginal(f);
            let lhs = fourier_compose(&s, &Action::Scalar(pow_checked(d, p - 1)?))?;
            let rhs = fourier_compose(&g, &Action::Scalar(lambda))?
                .sub(&fourier_compose(&g, &Action::Scalar(pow_checked(d, *p)?))?)?;
            if lhs == rhs {
                Identity::Verified
            } else {
                Identity::Failed
            }
        }
        _ => Identity::NotApplicable,
    };
    Ok(LemmaReport { difference, off_axis_residual, s, dichotomy, case2_identity })
}

/// `f = Σ_k c_k Σ_{j<p} ω^{d^{p−1−j} M^j (k e₁)}` for `g = Σ c_k z^k`, whose
/// difference is `Σ_k c_k (ω₁^{λk} − ω₁^{d^p k})`.
pub fn case2_witness(g: &FourierSeries, m: &IntMatrix, d: i64, p_bound: u32) -> Result<FourierSeries, FactorError> {
    if g.dim != 1 {
        return Err(FactorError::DimensionMismatch(1, g.dim));
    }
    check_action(m, d)?;
    let Dichotomy::CaseTwo { p, lambda } = eigen_dichotomy(m, p_bound) else {
        return Err(FactorError::CaseOne(p_bound));
    };
    let n = m.size();
    let mut f = FourierSeries::zero(n);
    for (e, c) in &g.coeffs {
        let mut v: Vec<i64> = (0..n).map(|i| if i == 0 { e[0] } else { 0 }).collect();
        for j in 0..p {
            let scale = pow_checked(d, p - 1 - j)?;
            let w = v.iter().map(|x| x.checked_mul(scale)).collect::<Option<Vec<_>>>().ok_or(FactorError::Overflow)?;
            f.add_term(w, *c)?;
            if j + 1 < p {
                v = m.mul_vec(&v).ok_or(FactorError::Overflow)?;
            }
        }
    }
    let lambda = lambda.to_i64().ok_or(FactorError::Overflow)?;
    let report = lemma_check(&f, m, d, p_bound)?;
    let expected = fourier_compose(g, &Action::Scalar(lambda))?.sub(&fourier_compose(g, &Action::Scalar(pow_checked(d, p)?))?)?;
    assert!(report.off_axis_residual.is_zero() && report.s == expected, "witness telescopes");
    Ok(f)
}

impl fmt::Display for FourierSeries {
    /// One `coeff i1 .. in` line per term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in &self.coeffs {
            write!(f, "{c}")?;
            for x in e {
                write!(f, " {x}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for FourierSeries {
    type Err = FactorError;

    /// Parses `coeff i1 .. in` lines; the dimension comes from the first
    /// line and defaults to 1 for an empty file.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out: Option<FourierSeries> = None;
        for (lineno, line) in s.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| FactorError::Parse(format!("line {}: {msg}", lineno + 1));
            let mut fields = line.split_whitespace();
            let c = parse_rat(fields.next().unwrap_or("")).ok_or_else(|| err("bad coefficient"))?;
            let e: Vec<i64> =
                fields.map(|x| x.parse::<i64>()).collect::<Result<_, _>>().map_err(|_| err("bad exponent"))?;
            if e.is_empty() {
                return Err(err("missing exponents"));
            }
            let series = out.get_or_insert_with(|| FourierSeries::zero(e.len()));
            series.add_term(e, c).map_err(|_| err("exponent length differs from first line"))?;
        }
        Ok(out.unwrap_or_else(|| FourierSeries::zero(1)))
    }
}

fn parse_rat(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.parse().ok()?;
            (d != 0).then_some(())?;
            Some(Rat::new(n.parse().ok()?, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n)
    }

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn series(dim: usize, terms: &[(&[i64], i64)]) -> FourierSeries {
        FourierSeries::from_terms(dim, terms.iter().map(|(e, c)| (e.to_vec(), r(*c)))).unwrap()
    }

    #[test]
    fn compose_examples() {
        let f = series(2, &[(&[1, 0], 2), (&[0, 3], -1)]);
        assert_eq!(fourier_compose(&f, &Action::Matrix(IntMatrix::identity(2))).unwrap(), f);
        let w1 = series(2, &[(&[1, 0], 1)]);
        assert_eq!(fourier_compose(&w1, &Action::Scalar(2)).unwrap(), series(2, &[(&[2, 0], 1)]));
        let w12 = series(2, &[(&[1, 1], 1)]);
        let m = mat(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(fourier_compose(&w12, &Action::Matrix(m)).unwrap(), series(2, &[(&[2, 1], 1)]));
        let collide = series(2, &[(&[1, 0], 1), (&[0, 1], 2)]);
        let out = fourier_compose(&collide, &Action::Matrix(mat(&[vec![1, 1], vec![0, 0]]))).unwrap();
        assert_eq!(out, series(2, &[(&[1, 0], 3)]));
        assert!(matches!(
            fourier_compose(&collide, &Action::Matrix(IntMatrix::identity(3))),
            Err(FactorError::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn marginal_examples() {
        let f = series(2, &[(&[3, 0], 1), (&[0, 1], 1)]);
        assert_eq!(axis_marginal(&f), FourierSeries::univariate([(3, r(1))]));
        assert_eq!(axis_marginal(&series(2, &[(&[0, 0], 5)])), FourierSeries::univariate([(0, r(5))]));
        assert!(axis_marginal(&series(2, &[(&[1, 1], 1)])).is_zero());
    }

    #[test]
    fn dichotomy_examples() {
        assert_eq!(
            eigen_dichotomy(&mat(&[vec![2, 0], vec![0, 3]]), 10),
            Dichotomy::CaseTwo { p: 1, lambda: 2.into() }
        );
        assert_eq!(
            eigen_dichotomy(&mat(&[vec![0, 2], vec![1, 0]]), 10),
            Dichotomy::CaseTwo { p: 2, lambda: 2.into() }
        );
        assert_eq!(eigen_dichotomy(&mat(&[vec![1, 0], vec![1, 1]]), 50), Dichotomy::CaseOneUpTo(50));
    }

    #[test]
    fn lemma_examples() {
        let m = mat(&[vec![0, 2], vec![1, 0]]);
        let f = series(2, &[(&[3, 0], 1), (&[0, 1], 1)]);
        let rep = lemma_check(&f, &m, 3, 16).unwrap();
        assert_eq!(rep.difference, series(2, &[(&[2, 0], 1), (&[9, 0], -1)]));
        assert!(rep.off_axis_residual.is_zero());
        assert_eq!(rep.s, FourierSeries::univariate([(2, r(1)), (9, r(-1))]));
        assert_eq!(rep.case2_identity, Identity::Verified);

        let rep = lemma_check(&FourierSeries::zero(2), &m, 3, 16).unwrap();
        assert!(rep.difference.is_zero() && rep.s.is_zero());
        assert_eq!(rep.case2_identity, Identity::Verified);

        let rep = lemma_check(&series(2, &[(&[0, 1], 1)]), &IntMatrix::identity(2), 1, 16).unwrap();
        assert!(rep.difference.is_zero() && rep.s.is_zero());
    }

    #[test]
    fn witness_examples() {
        let m = mat(&[vec![0, 2], vec![1, 0]]);
        let f = case2_witness(&FourierSeries::univariate([(1, r(1))]), &m, 3, 16).unwrap();
        assert_eq!(f, series(2, &[(&[3, 0], 1), (&[0, 1], 1)]));
        assert!(case2_witness(&FourierSeries::zero(1), &m, 3, 16).unwrap().is_zero());
        let f = case2_witness(&FourierSeries::univariate([(2, r(1))]), &m, 3, 16).unwrap();
        assert_eq!(f, series(2, &[(&[6, 0], 1), (&[0, 2], 1)]));
        let rep = lemma_check(&f, &m, 3, 16).unwrap();
        assert_eq!(rep.s, FourierSeries::univariate([(4, r(1)), (18, r(-1))]));
        assert!(matches!(
            case2_witness(&FourierSeries::univariate([(1, r(1))]), &mat(&[vec![1, 0], vec![1, 1]]), 2, 20),
            Err(FactorError::CaseOne(20))
        ));
    }

    #[test]
    fn text_round_trip() {
        let f = FourierSeries::from_terms(3, [(vec![1, -2, 0], Rat::new(3, 2)), (vec![0, 0, 0], r(5))]).unwrap();
        let text = f.to_string();
        assert_eq!(text.parse::<FourierSeries>().unwrap(), f);
        assert!("1 2 3\n1 2".parse::<FourierSeries>().is_err());
        assert!("x 1".parse::<FourierSeries>().is_err());
    }
}

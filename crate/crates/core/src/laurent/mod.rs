//! Integer Laurent polynomials and the polynomial-level concordance tests.
//!
//! Two Laurent polynomials are associated (`p ≐ q`) when they differ by a
//! unit `±t^j`. [`AssocClass`] holds the canonical representative: lowest
//! exponent zero and positive leading coefficient.

mod factor;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::poly::{write_terms, IntPoly, RatPoly};

pub use factor::{Factor, Factorization, MAX_FACTOR_DEGREE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("degree {degree} exceeds the factorization guard of {limit}")]
    DegreeGuardExceeded { degree: usize, limit: usize },
    #[error("no usable interpolation nodes: coefficients too large for Kronecker search")]
    CoefficientsTooLarge,
    #[error("polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("{0} is not irreducible over the rationals")]
    NotIrreducible(String),
    #[error("polynomial is not symmetric under t -> 1/t")]
    NotSymmetric,
    #[error("symmetric polynomial has odd degree {0}")]
    OddDegree(usize),
    #[error("duplicate exponent {0}")]
    DuplicateExponent(i64),
    #[error("malformed term `{0}`, expected coeff:exponent")]
    Parse(String),
}

/// Finitely supported integer Laurent polynomial. Stored coefficients are
/// never zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c.into());
        p
    }

    /// `coeffs[i]` is the coefficient of `t^(lowest + i)`.
    pub fn from_coeffs(lowest: i64, coeffs: &[i64]) -> Self {
        let mut p = Self::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(lowest + i as i64, c.into());
        }
        p
    }

    pub fn from_int_poly(p: &IntPoly) -> Self {
        let mut out = Self::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add_term(i as i64, c.clone());
        }
        out
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `max_exp - min_exp`; zero for the zero polynomial.
    pub fn span(&self) -> usize {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (hi - lo) as usize,
            _ => 0,
        }
    }

    /// Multiplication by `t^j`.
    pub fn shift(&self, j: i64) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (e + j, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// The involution `t ↦ t⁻¹`.
    pub fn conjugate(&self) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// Dense coefficients starting at the lowest exponent.
    pub fn to_int_poly(&self) -> IntPoly {
        let lo = self.min_exp().unwrap_or(0);
        let mut dense = vec![BigInt::zero(); self.span() + 1];
        for (e, c) in &self.coeffs {
            dense[(e - lo) as usize] = c.clone();
        }
        IntPoly::new(dense)
    }

    /// Value at an integer point; negative exponents require `x = ±1`.
    pub fn eval_at_unit(&self, x: i64) -> BigInt {
        assert!(x == 1 || x == -1);
        self.coeffs
            .iter()
            .map(|(e, c)| if x == -1 && e.rem_euclid(2) == 1 { -c } else { c.clone() })
            .sum()
    }

    /// Human-readable form such as `2t^2 - 5t + 2`.
    pub fn pretty(&self) -> String {
        struct Pretty<'a>(&'a LaurentPoly);
        impl fmt::Display for Pretty<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_terms(f, self.0.coeffs.iter().rev().map(|(e, c)| (*e, c)), "t")
            }
        }
        Pretty(self).to_string()
    }
}

impl fmt::Display for LaurentPoly {
    /// Wire format: whitespace-separated `coeff:exponent` pairs by exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|(e, c)| format!("{c}:{e}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut seen = BTreeMap::new();
        for tok in s.split_whitespace() {
            let (c, e) = tok.split_once(':').ok_or_else(|| LaurentError::Parse(tok.into()))?;
            let c: BigInt = c.parse().map_err(|_| LaurentError::Parse(tok.into()))?;
            let e: i64 = e.parse().map_err(|_| LaurentError::Parse(tok.into()))?;
            if seen.insert(e, c).is_some() {
                return Err(LaurentError::DuplicateExponent(e));
            }
        }
        let mut p = LaurentPoly::zero();
        for (e, c) in seen {
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Canonical representative of a class under `p ≐ ±t^j p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AssocClass(LaurentPoly);

impl AssocClass {
    pub fn poly(&self) -> &LaurentPoly {
        &self.0
    }

    pub fn into_poly(self) -> LaurentPoly {
        self.0
    }

    /// Degree of the canonical representative.
    pub fn degree(&self) -> usize {
        self.0.span()
    }

    pub fn to_int_poly(&self) -> IntPoly {
        self.0.to_int_poly()
    }

    pub fn is_one(&self) -> bool {
        self.0 == LaurentPoly::one()
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LaurentPoly {
    /// Orders by span, then coefficients from the lowest exponent up.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.span()
            .cmp(&other.span())
            .then_with(|| self.coeffs.iter().cmp(other.coeffs.iter()))
    }
}

impl fmt::Display for AssocClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<&IntPoly> for AssocClass {
    fn from(p: &IntPoly) -> Self {
        normalize_assoc(&LaurentPoly::from_int_poly(p))
    }
}

/// Shifts to lowest exponent zero and makes the leading coefficient
/// positive. Idempotent; the zero polynomial maps to itself.
pub fn normalize_assoc(p: &LaurentPoly) -> AssocClass {
    let Some(lo) = p.min_exp() else {
        return AssocClass(LaurentPoly::zero());
    };
    let mut q = p.shift(-lo);
    if q.coeffs.values().next_back().is_some_and(Signed::is_negative) {
        q = -&q;
    }
    AssocClass(q)
}

/// `p ≐ q`.
pub fn associated(p: &LaurentPoly, q: &LaurentPoly) -> bool {
    normalize_assoc(p) == normalize_assoc(q)
}

pub fn conjugate(p: &LaurentPoly) -> LaurentPoly {
    p.conjugate()
}

/// Content and irreducible factors over the rationals of a nonzero
/// polynomial whose canonical degree is at most [`MAX_FACTOR_DEGREE`].
pub fn factor_rational(p: &LaurentPoly) -> Result<Factorization, LaurentError> {
    factor::factor(p)
}

/// Outcome of the Fox-Milnor test `p ≐ δ(t)·δ(t⁻¹)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoxMilnor {
    /// A verified witness δ.
    Yes(LaurentPoly),
    No,
}

/// Decides whether `p ≐ δ(t)δ(t⁻¹)` for some integer polynomial δ.
///
/// Irreducible factors fixed by conjugation need even multiplicity; the rest
/// must pair with their conjugates in equal multiplicity. The integer
/// content must be a perfect square.
pub fn fox_milnor(p: &LaurentPoly) -> Result<FoxMilnor, LaurentError> {
    let fact = factor_rational(p)?;
    let root = fact.content.sqrt();
    if &root * &root != fact.content {
        return Ok(FoxMilnor::No);
    }
    let mult = |f: &AssocClass| {
        fact.factors
            .iter()
            .find(|x| &x.poly == f)
            .map_or(0, |x| x.multiplicity)
    };
    let mut delta = LaurentPoly::monomial(root, 0);
    for Factor { poly, multiplicity } in &fact.factors {
        let conj = normalize_assoc(&poly.poly().conjugate());
        if &conj == poly {
            if multiplicity % 2 == 1 {
                return Ok(FoxMilnor::No);
            }
            delta = &delta * &poly.poly().pow(multiplicity / 2);
            continue;
        }
        if mult(&conj) != *multiplicity {
            return Ok(FoxMilnor::No);
        }
        if prefer_in_pair(poly, &conj) {
            delta = &delta * &poly.poly().pow(*multiplicity);
        }
    }
    let check = &delta * &delta.conjugate();
    if !associated(&check, p) {
        // Unique factorization makes this unreachable.
        return Ok(FoxMilnor::No);
    }
    Ok(FoxMilnor::Yes(delta))
}

/// Picks one member of a conjugate pair: the one whose leading coefficient
/// dominates its constant term, then the smaller in the canonical order.
fn prefer_in_pair(f: &AssocClass, conj: &AssocClass) -> bool {
    let dominance = |c: &AssocClass| {
        let lead = c.poly().coeff(c.degree() as i64).abs();
        let cst = c.poly().coeff(0).abs();
        lead.cmp(&cst)
    };
    match dominance(f).cmp(&dominance(conj)) {
        std::cmp::Ordering::Equal => f < conj,
        o => o.is_gt(),
    }
}

/// Result of searching for a binomial `a·t^p − b` divisible by δ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Annihilator {
    /// δ divides `a·t^p − b` with `gcd(a, b) = 1`, `a > 0`, and `p` minimal.
    Found { a: BigInt, b: BigInt, p: u32 },
    NoneUpToBound { p_max: u32 },
}

pub const DEFAULT_ANNIHILATOR_BOUND: u32 = 64;

/// Searches `p = 1..=p_max` for `t^p` to reduce to a rational constant
/// modulo the irreducible δ.
pub fn eigen_annihilator(delta: &LaurentPoly, p_max: u32) -> Result<Annihilator, LaurentError> {
    let class = normalize_assoc(delta);
    if class.degree() == 0 {
        return Err(LaurentError::NotIrreducible(delta.pretty()));
    }
    let fact = factor_rational(delta)?;
    if fact.factors.len() != 1 || fact.factors[0].multiplicity != 1 {
        return Err(LaurentError::NotIrreducible(delta.pretty()));
    }
    let modulus = class.to_int_poly().to_rat().monic();
    let t = RatPoly::x();
    let mut residue = t.rem(&modulus);
    for p in 1..=p_max {
        if residue.degree().unwrap_or(0) == 0 {
            let c = residue.coeffs().first().cloned().unwrap_or_default();
            return Ok(Annihilator::Found { a: c.denom().clone(), b: c.numer().clone(), p });
        }
        residue = residue.mul(&t).rem(&modulus);
    }
    Ok(Annihilator::NoneUpToBound { p_max })
}

/// Writes a palindromic `p` of degree `2d` as `t^d · q(t + t⁻¹)` and returns
/// `q` as an integer polynomial in `z = t + t⁻¹`.
pub fn cos_substitute(p: &LaurentPoly) -> Result<IntPoly, LaurentError> {
    let class = normalize_assoc(p);
    if class != normalize_assoc(&p.conjugate()) {
        return Err(LaurentError::NotSymmetric);
    }
    let deg = class.degree();
    if deg % 2 == 1 {
        return Err(LaurentError::OddDegree(deg));
    }
    let c = class.to_int_poly();
    let coeffs = c.coeffs();
    if (0..=deg).any(|i| coeffs[i] != coeffs[deg - i]) {
        // ≐-symmetric but antipalindromic, like t² − 1.
        return Err(LaurentError::NotSymmetric);
    }
    let d = deg / 2;
    // chebyshev[j] = t^j + t^-j as a polynomial in z
    let mut chebyshev = vec![IntPoly::from_i64s(&[2]), IntPoly::from_i64s(&[0, 1])];
    for j in 2..=d {
        let next = chebyshev[j - 1].mul(&IntPoly::from_i64s(&[0, 1]));
        let prev = &chebyshev[j - 2];
        let n = next.coeffs().len().max(prev.coeffs().len());
        let diff = (0..n)
            .map(|i| {
                next.coeffs().get(i).cloned().unwrap_or_default()
                    - prev.coeffs().get(i).cloned().unwrap_or_default()
            })
            .collect();
        chebyshev.push(IntPoly::new(diff));
    }
    let mut acc = vec![BigInt::zero(); d + 1];
    acc[0] = coeffs[d].clone();
    for j in 1..=d {
        for (i, x) in chebyshev[j].coeffs().iter().enumerate() {
            acc[i] += &coeffs[d + j] * x;
        }
    }
    Ok(IntPoly::new(acc))
}

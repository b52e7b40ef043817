//! Kronecker factorization of integer polynomials.
//!
//! A factor of degree `d` is pinned down by its values at `d + 1` integer
//! nodes, each of which must divide the value of the input there. Nodes are
//! picked where the input has the fewest divisors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{normalize_assoc, AssocClass, LaurentError, LaurentPoly};
use crate::poly::{interpolate, IntPoly, RatPoly};

/// Largest canonical degree accepted by the factorizer.
pub const MAX_FACTOR_DEGREE: usize = 12;

/// Values larger than this are never used as interpolation nodes.
const MAX_NODE_VALUE: u64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    /// Primitive, lowest exponent zero, positive leading coefficient.
    pub poly: AssocClass,
    pub multiplicity: u32,
}

/// `p ≐ content · Π factorᵐ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Positive integer content.
    pub content: BigInt,
    /// Sorted by degree, then coefficients.
    pub factors: Vec<Factor>,
}

impl Factorization {
    /// Reassembles the canonical representative.
    pub fn expand(&self) -> LaurentPoly {
        self.factors.iter().fold(LaurentPoly::monomial(self.content.clone(), 0), |acc, f| {
            &acc * &f.poly.poly().pow(f.multiplicity)
        })
    }
}

pub(super) fn factor(p: &LaurentPoly) -> Result<Factorization, LaurentError> {
    if p.is_zero() {
        return Err(LaurentError::ZeroPolynomial);
    }
    let canon = normalize_assoc(p).to_int_poly();
    let degree = canon.degree().unwrap_or(0);
    if degree > MAX_FACTOR_DEGREE {
        return Err(LaurentError::DegreeGuardExceeded { degree, limit: MAX_FACTOR_DEGREE });
    }
    let content = canon.content();
    let prim = canon.primitive();
    let mut pieces = if degree == 0 { Vec::new() } else { factor_primitive(&prim)? };
    pieces.sort_by(|a, b| AssocClass::from(a).cmp(&AssocClass::from(b)));
    let mut factors: Vec<Factor> = Vec::new();
    for piece in pieces {
        let class = AssocClass::from(&piece);
        match factors.last_mut() {
            Some(last) if last.poly == class => last.multiplicity += 1,
            _ => factors.push(Factor { poly: class, multiplicity: 1 }),
        }
    }
    Ok(Factorization { content, factors })
}

/// Irreducible factors, with repetition, of a primitive polynomial of
/// positive degree and nonzero constant term.
fn factor_primitive(f: &IntPoly) -> Result<Vec<IntPoly>, LaurentError> {
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut d = 1;
    loop {
        let n = rest.degree().unwrap_or(0);
        if n == 0 {
            break;
        }
        if 2 * d > n {
            out.push(rest);
            break;
        }
        match find_factor(&rest, d)? {
            Some(g) => {
                rest = rest.exact_div(&g).expect("candidate was checked to divide");
                out.push(g);
            }
            None => d += 1,
        }
    }
    Ok(out)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// A primitive factor of degree exactly `d`, if any.
fn find_factor(f: &IntPoly, d: usize) -> Result<Option<IntPoly>, LaurentError> {
    let mut nodes: Vec<(i64, Vec<u64>)> = (0..=24i64)
        .map(|k| if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 })
        .filter_map(|x| {
            let v = f.eval(&BigInt::from(x)).abs().to_u64()?;
            (v != 0 && v <= MAX_NODE_VALUE).then(|| (x, divisors(v)))
        })
        .collect();
    nodes.sort_by_key(|(x, ds)| (ds.len(), x.abs()));
    nodes.truncate(d + 1);
    if nodes.len() < d + 1 {
        return Err(LaurentError::CoefficientsTooLarge);
    }

    let xs: Vec<BigInt> = nodes.iter().map(|(x, _)| BigInt::from(*x)).collect();
    let basis: Vec<RatPoly> = (0..=d)
        .map(|i| {
            let ys: Vec<BigRational> = (0..=d)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect();
            interpolate(&xs, &ys)
        })
        .collect();
    // candidate values: positive at the first node, either sign elsewhere
    let choices: Vec<Vec<i64>> = nodes
        .iter()
        .enumerate()
        .map(|(i, (_, ds))| {
            let mut c: Vec<i64> = ds.iter().map(|&x| x as i64).collect();
            if i > 0 {
                c.extend(ds.iter().map(|&x| -(x as i64)));
            }
            c
        })
        .collect();
    let lead = f.leading().unwrap().clone();
    let constant = f.coeffs()[0].clone();
    let mut idx = vec![0usize; d + 1];
    loop {
        let mut cand = RatPoly::zero();
        for (i, b) in basis.iter().enumerate() {
            cand = cand.add(&b.scale(&BigRational::from_integer(choices[i][idx[i]].into())));
        }
        if cand.degree() == Some(d) {
            if let Some(g) = cand.to_int() {
                let g = g.primitive();
                let plausible = (&lead % g.leading().unwrap()).is_zero()
                    && !g.coeffs()[0].is_zero()
                    && (&constant % &g.coeffs()[0]).is_zero();
                if plausible && f.exact_div(&g).is_some() {
                    return Ok(Some(g));
                }
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos > d {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn splits_products_of_quadratics() {
        // (t² + t + 1)(t² − 3t + 1)(2t − 1)
        let a = IntPoly::from_i64s(&[1, 1, 1]);
        let b = IntPoly::from_i64s(&[1, -3, 1]);
        let c = IntPoly::from_i64s(&[-1, 2]);
        let mut got = factor_primitive(&a.mul(&b).mul(&c)).unwrap();
        got.sort_by(|x, y| AssocClass::from(x).cmp(&AssocClass::from(y)));
        assert_eq!(got, vec![c, b, a]);
    }

    #[test]
    fn detects_irreducible_quartic() {
        // t⁴ − t³ + t² − t + 1 is the 10th cyclotomic polynomial
        let p = IntPoly::from_i64s(&[1, -1, 1, -1, 1]);
        assert_eq!(factor_primitive(&p).unwrap(), vec![p]);
    }
}

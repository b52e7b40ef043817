//! Cooper signature sums over multiplicative orbits mod `p`.

use num_integer::Integer;
use num_traits::Zero;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::sigfn::{Evaluate, SigFnError, SignatureFunction};
use crate::signature::{Side, UnitAngle};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CooperError {
    #[error("{name} = {value} is not coprime to {modulus}")]
    NotCoprime { name: &'static str, value: i64, modulus: i64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Eval(#[from] SigFnError),
}

/// `u⁻¹ mod p` in `[0, p)`.
pub fn mod_inverse(u: i64, p: i64) -> Option<i64> {
    let e = u.rem_euclid(p).extended_gcd(&p);
    (e.gcd == 1).then(|| e.x.rem_euclid(p))
}

fn mul_mod(a: i64, b: i64, p: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(p as i128)) as i64
}

/// Least `r ≥ 1` with `u^r ≡ 1 (mod p)`.
pub fn mult_order(u: i64, p: i64) -> Result<i64, CooperError> {
    if p < 2 {
        return Err(CooperError::InvalidParams(format!("modulus {p} < 2")));
    }
    if u.gcd(&p) != 1 {
        return Err(CooperError::NotCoprime { name: "u", value: u, modulus: p });
    }
    let u = u.rem_euclid(p);
    let mut x = u;
    let mut r = 1;
    while x != 1 {
        x = mul_mod(x, u, p);
        r += 1;
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CooperParams {
    pub m: i64,
    pub n: i64,
    pub p: i64,
    pub c: i64,
}

impl CooperParams {
    pub fn new(m: i64, n: i64, p: i64, c: i64) -> Result<Self, CooperError> {
        let params = CooperParams { m, n, p, c };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), CooperError> {
        if self.m == 0 || self.n == 0 {
            return Err(CooperError::InvalidParams("m and n must be nonzero".into()));
        }
        if self.p < 2 {
            return Err(CooperError::InvalidParams(format!("modulus {} < 2", self.p)));
        }
        for (name, value) in [("m", self.m), ("n", self.n), ("c", self.c)] {
            if value.gcd(&self.p) != 1 {
                return Err(CooperError::NotCoprime { name, value, modulus: self.p });
            }
        }
        Ok(())
    }

    /// `n·m̄ mod p`.
    pub fn ratio(&self) -> i64 {
        let m_bar = mod_inverse(self.m, self.p).expect("validated");
        mul_mod(self.n, m_bar, self.p)
    }

    /// Orbit length `r`.
    pub fn order(&self) -> i64 {
        mult_order(self.ratio(), self.p).expect("validated")
    }

    /// Residues `c·(n m̄)^ℓ mod p` for `ℓ = 1..=r`.
    pub fn orbit(&self) -> Vec<i64> {
        let u = self.ratio();
        let r = self.order();
        let mut x = self.c.rem_euclid(self.p);
        (0..r)
            .map(|_| {
                x = mul_mod(x, u, self.p);
                x
            })
            .collect()
    }
}

/// `Σ_{ℓ=1}^{r} f(c(n m̄)^ℓ / p)` with averaged values.
pub fn cooper_sum(f: &SignatureFunction, params: &CooperParams) -> Result<Rat, CooperError> {
    params.validate()?;
    let mut sum = Rat::zero();
    for x in params.orbit() {
        sum += f.averaged(UnitAngle::new(x, params.p))?;
    }
    Ok(sum)
}

/// Scan bounds. `coprime_to` additionally restricts `p` to be coprime to
/// the given integer (1 for no restriction).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanGrid {
    pub p_max: i64,
    pub c_max: i64,
    pub coprime_to: i64,
}

impl ScanGrid {
    pub fn new(p_max: i64, c_max: i64) -> Self {
        ScanGrid { p_max, c_max, coprime_to: 1 }
    }

    pub fn coprime_to(mut self, k: i64) -> Self {
        self.coprime_to = k;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub p: i64,
    pub c: i64,
    pub r: i64,
    pub sum: Rat,
}

/// Admissible `(p, c)` pairs in scan order.
pub fn scan_points(m: i64, n: i64, grid: &ScanGrid) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for p in 2..=grid.p_max {
        if p.gcd(&m) != 1 || p.gcd(&n) != 1 || p.gcd(&grid.coprime_to) != 1 {
            continue;
        }
        for c in 1..=grid.c_max.min(p - 1) {
            if c.gcd(&p) == 1 {
                out.push((p, c));
            }
        }
    }
    out
}

/// Every admissible `(p, c)` on the grid with a nonzero Cooper sum, ordered
/// by `(p, c)`.
pub fn cooper_scan(
    f: &SignatureFunction,
    m: i64,
    n: i64,
    grid: &ScanGrid,
) -> Result<Vec<Violation>, CooperError> {
    if m == 0 || n == 0 || m.gcd(&n) != 1 {
        return Err(CooperError::InvalidParams(format!("m = {m} and n = {n} must be nonzero and coprime")));
    }
    let points = scan_points(m, n, grid);
    let check = |&(p, c): &(i64, i64)| -> Result<Option<Violation>, CooperError> {
        let params = CooperParams { m, n, p, c };
        let sum = cooper_sum(f, &params)?;
        Ok((!sum.is_zero()).then(|| Violation { p, c, r: params.order(), sum }))
    };
    #[cfg(feature = "parallel")]
    let results: Vec<_> = points.par_iter().map(check).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = points.iter().map(check).collect();
    results.into_iter().filter_map(Result::transpose).collect()
}

struct Synth {
    g: SignatureFunction,
    a: i64,
    b: i64,
    k: i64,
}

impl Evaluate for Synth {
    fn eval(&self, theta: UnitAngle, _side: Side) -> Result<Rat, SigFnError> {
        let (c, p) = (theta.numer(), theta.denom());
        let k_bar = if p == 1 {
            0
        } else {
            mod_inverse(self.k, p).ok_or_else(|| {
                SigFnError::Domain(format!("denominator {p} shares a factor with k = {}", self.k))
            })?
        };
        let x = mul_mod(k_bar, c, p);
        let hi = self.g.averaged(UnitAngle::new(mul_mod(self.b, x, p), p))?;
        let lo = self.g.averaged(UnitAngle::new(mul_mod(self.a, x, p), p))?;
        Ok(hi - lo)
    }
}

/// `f(c/p) = g(b k̄ c/p) − g(a k̄ c/p)` with `k̄ = k⁻¹ mod p`, defined for
/// `gcd(p, k) = 1`. Every side returns this value.
pub fn synth_from_g(g: &SignatureFunction, a: i64, b: i64, k: i64) -> Result<SignatureFunction, CooperError> {
    if a.gcd(&b) != 1 {
        return Err(CooperError::InvalidParams(format!("gcd({a}, {b}) ≠ 1")));
    }
    if k < 1 {
        return Err(CooperError::InvalidParams(format!("k = {k} must be positive")));
    }
    let label = format!("synth({g}, {a}, {b}, {k})");
    Ok(SignatureFunction::custom(label, Synth { g: g.clone(), a, b, k }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seifert::SeifertMatrix;
    use crate::sigfn::step_from_jumps;

    fn trefoil() -> SignatureFunction {
        SignatureFunction::from_seifert(&SeifertMatrix::from_rows(&[vec![-1, 1], vec![0, -1]]).unwrap()).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order(1, 7).unwrap(), 1);
        assert_eq!(mult_order(2, 5).unwrap(), 4);
        assert_eq!(mult_order(2, 7).unwrap(), 3);
        assert_eq!(mult_order(-1, 7).unwrap(), 2);
        assert!(matches!(mult_order(2, 4), Err(CooperError::NotCoprime { .. })));
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
    }

    #[test]
    fn trefoil_sum() {
        let params = CooperParams::new(1, 2, 5, 1).unwrap();
        assert_eq!(params.orbit(), vec![2, 4, 3, 1]);
        assert_eq!(cooper_sum(&trefoil(), &params).unwrap(), Rat::from_integer(-8));
        assert_eq!(cooper_sum(&SignatureFunction::zero(), &params).unwrap(), Rat::zero());
        assert!(CooperParams::new(1, 2, 6, 1).is_err());
        assert!(CooperParams::new(1, 3, 5, 5).is_err());
    }

    #[test]
    fn scan_examples() {
        let t = trefoil();
        let v = cooper_scan(&t, 1, 2, &ScanGrid::new(10, 10)).unwrap();
        assert!(v.contains(&Violation { p: 5, c: 1, r: 4, sum: Rat::from_integer(-8) }));
        assert!(cooper_scan(&SignatureFunction::zero(), 1, 2, &ScanGrid::new(30, 30)).unwrap().is_empty());
        let f = &t.cable(1).unwrap() - &t.cable(2).unwrap();
        assert!(cooper_scan(&f, 1, 2, &ScanGrid::new(50, 50)).unwrap().is_empty());
        let sorted = v.windows(2).all(|w| (w[0].p, w[0].c) < (w[1].p, w[1].c));
        assert!(sorted);
    }

    #[test]
    fn synth_examples() {
        let g = step_from_jumps(&[(UnitAngle::new(1, 3), Rat::from_integer(1))], Rat::zero()).unwrap().to_function();
        let f = synth_from_g(&g, 1, 2, 1).unwrap();
        assert_eq!(f.averaged(UnitAngle::new(1, 3)).unwrap(), Rat::new(1, 2));
        let zero = synth_from_g(&SignatureFunction::zero(), 1, 2, 3).unwrap();
        assert_eq!(zero.averaged(UnitAngle::new(2, 7)).unwrap(), Rat::zero());
        let f3 = synth_from_g(&g, 1, 2, 3).unwrap();
        assert!(matches!(f3.averaged(UnitAngle::new(1, 6)), Err(SigFnError::Domain(_))));
        assert_eq!(f3.averaged(UnitAngle::ZERO).unwrap(), Rat::zero());
        assert!(cooper_scan(&f3, 1, 2, &ScanGrid::new(40, 40).coprime_to(3)).unwrap().is_empty());
    }
}

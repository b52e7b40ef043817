//! Solving `σ(kx) = g(bx) − g(ax)` on the grid `x ∈ (1/p)ℤ/ℤ`.
//!
//! Substituting `x = ā·y` gives `g(y) = g(u·y) − σ(kā·y)` with `u = bā`, so
//! `g` is determined along each orbit of multiplication by `u` once one
//! value is fixed. Going once around the orbit of `y` forces
//! `Σ_j σ(kā·u^j·y) = 0`, which is the Cooper sum with `m = a`, `n = b`,
//! `c = kā·y`.

use num_integer::Integer;
use num_traits::Zero;

use super::FactorError;
use crate::cooper::mod_inverse;
use crate::sigfn::SignatureFunction;
use crate::signature::UnitAngle;
use crate::Rat;

/// Values of `g` at `y/p` for `y = 0..p`, with one value per orbit fixed
/// to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSolution {
    pub p: i64,
    pub values: Vec<Rat>,
    /// Smallest residue of each orbit, where `g` is set to 0.
    pub free: Vec<i64>,
}

impl OrbitSolution {
    pub fn value(&self, y: i64) -> Rat {
        self.values[y.rem_euclid(self.p) as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(OrbitSolution),
    /// The first orbit, in order of its smallest residue, whose
    /// consistency sum is nonzero.
    Violation { orbit: Vec<i64>, sum: Rat },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyOutcome {
    Pass,
    /// `σ(kx) ≠ g(bx) − g(ax)` at `x = residue/p`.
    Fail { residue: i64, lhs: Rat, rhs: Rat },
}

fn check_params(a: i64, b: i64, k: i64, p: i64) -> Result<(), FactorError> {
    if p < 1 {
        return Err(FactorError::InvalidParams(format!("modulus {p} < 1")));
    }
    if a == b {
        return Err(FactorError::InvalidParams("a and b must differ".into()));
    }
    for (name, value) in [("a", a), ("b", b), ("k", k)] {
        if value.gcd(&p) != 1 {
            return Err(FactorError::NotCoprime { name, value, p });
        }
    }
    Ok(())
}

fn mul_mod(x: i64, y: i64, p: i64) -> i64 {
    (x as i128 * y as i128).rem_euclid(p as i128) as i64
}

pub fn solve_g(sigma: &SignatureFunction, a: i64, b: i64, k: i64, p: i64) -> Result<SolveOutcome, FactorError> {
    check_params(a, b, k, p)?;
    let a_bar = mod_inverse(a, p).unwrap_or(0);
    let u = mul_mod(b, a_bar, p);
    let ka = mul_mod(k, a_bar, p);
    let n = p as usize;
    let mut values: Vec<Option<Rat>> = vec![None; n];
    let mut free = Vec::new();
    for rep in 0..p {
        if values[rep as usize].is_some() {
            continue;
        }
        // walk y, uy, u²y, … accumulating g(u^{j+1} y) = g(u^j y) + σ(kā u^j y)
        let mut orbit = vec![rep];
        let mut steps = Vec::new();
        let mut y = rep;
        loop {
            steps.push(sigma.averaged(UnitAngle::new(mul_mod(ka, y, p), p))?);
            y = mul_mod(u, y, p);
            if y == rep {
                break;
            }
            orbit.push(y);
        }
        let sum: Rat = steps.iter().copied().sum();
        if !sum.is_zero() {
            return Ok(SolveOutcome::Violation { orbit, sum });
        }
        let mut g = Rat::zero();
        for (y, step) in orbit.iter().zip(&steps) {
            values[*y as usize] = Some(g);
            g += step;
        }
        free.push(rep);
    }
    let values = values.into_iter().map(|v| v.expect("every residue lies on an orbit")).collect();
    Ok(SolveOutcome::Solution(OrbitSolution { p, values, free }))
}

/// Checks `σ(kx) = g(bx) − g(ax)` at every grid point.
pub fn verify_g(
    sigma: &SignatureFunction,
    g: &OrbitSolution,
    a: i64,
    b: i64,
    k: i64,
    p: i64,
) -> Result<VerifyOutcome, FactorError> {
    check_params(a, b, k, p)?;
    if g.p != p || g.values.len() != p as usize {
        return Err(FactorError::InvalidParams(format!("solution is for modulus {}, not {p}", g.p)));
    }
    for x in 0..p {
        let lhs = sigma.averaged(UnitAngle::new(mul_mod(k, x, p), p))?;
        let rhs = g.value(mul_mod(b, x, p)) - g.value(mul_mod(a, x, p));
        if lhs != rhs {
            return Ok(VerifyOutcome::Fail { residue: x, lhs, rhs });
        }
    }
    Ok(VerifyOutcome::Pass)
}

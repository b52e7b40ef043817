//! Certified enclosures of `2cos(2πθ)` at rational `θ`, in fixed-point
//! integer arithmetic with explicit error accounting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::Rat;

/// `floor(2^prec · arctan(1/x))` up to the returned error in ulps.
fn arctan_inv(x: u32, prec: u32) -> (BigInt, u64) {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    // power_k = floor(2^prec / x^(2k+1)) exactly, by nested floors
    let mut power = (BigInt::one() << prec) / &x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    // one ulp per truncated term plus the alternating tail
    (sum, k + 1)
}

/// `π · 2^prec` with error bound in ulps.
fn pi_fixed(prec: u32) -> (BigInt, u64) {
    let (a, ea) = arctan_inv(5, prec);
    let (b, eb) = arctan_inv(239, prec);
    (a * 16 - b * 4, 16 * ea + 4 * eb)
}

/// Rational enclosure `[lo, hi]` of `2cos(2πθ)` for `θ ∈ [0, 1/2]`, of
/// width below `2^-bits`.
pub fn two_cos_enclosure(theta: Rat, bits: u32) -> (BigRational, BigRational) {
    assert!(theta >= Rat::zero() && theta <= Rat::new(1, 2));
    let prec = bits + 64;
    let one = BigInt::one() << prec;
    let (pi, e_pi) = pi_fixed(prec);
    let (a, b) = (BigInt::from(*theta.numer()), BigInt::from(*theta.denom()));
    // x = 2πθ ≤ π, error ≤ e_pi + 1 since 2θ ≤ 1
    let x = (&pi * 2 * &a) / &b;
    let e_x = e_pi + 1;
    let x2 = (&x * &x) >> prec;
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut k = 1u64;
    let mut e_terms = 0u64;
    loop {
        term = ((&term * &x2) >> prec) / BigInt::from((2 * k - 1) * 2 * k);
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        // each term carries a few ulps of rounding, amplified at most π²/2
        e_terms += 8;
        k += 1;
    }
    // |d cos / dx| ≤ 1 and the omitted tail is below one ulp
    let err = BigInt::from(e_terms + e_x + 16);
    let scale = BigRational::from_integer(one);
    let lo = BigRational::from_integer((&sum - &err) * 2) / &scale;
    let hi = BigRational::from_integer((&sum + &err) * 2) / &scale;
    let two = BigRational::from_integer(2.into());
    (lo.max(-&two), hi.min(two))
}

/// `lo ≤ x ≤ hi` for the enclosure returned above.
#[cfg(test)]
fn contains(enclosure: &(BigRational, BigRational), x: &BigRational) -> bool {
    &enclosure.0 <= x && x <= &enclosure.1
}

//! Exact inertia of the signature matrix at rational points of the circle.
//!
//! For `s > 0` the point `ω = (1 − s² + 2si)/(1 + s²)` has `2Re ω = z(s) =
//! 2(1 − s²)/(1 + s²)`, and `(1 + s²)·((1−ω)S + (1−ω̄)Sᵀ) = 2s·H(s)` with
//! `H(s) = s(S + Sᵀ) − i(S − Sᵀ)`. The signature of `H(s)` is computed from
//! the characteristic polynomial of its real form `[[X, −Y], [Y, X]]`, whose
//! roots are real, so Descartes' rule counts them exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::det_pencil;
use crate::seifert::SeifertMatrix;

/// `z(s) = 2(1 − s²)/(1 + s²)`, strictly decreasing on `s > 0`.
pub fn z_of_s(s: &BigRational) -> BigRational {
    let s2 = s * s;
    let one = BigRational::one();
    BigRational::from_integer(2.into()) * (&one - &s2) / (&one + &s2)
}

/// A rational `s > 0` with `z(s)` strictly inside `(z_lo, z_hi)`, where
/// `−2 ≤ z_lo < z_hi ≤ 2`.
pub fn s_in_gap(z_lo: &BigRational, z_hi: &BigRational) -> BigRational {
    assert!(z_lo < z_hi);
    let inside = |s: &BigRational| {
        let z = z_of_s(s);
        &z > z_lo && &z < z_hi
    };
    let two = BigRational::from_integer(2.into());
    let mut lo = BigRational::zero();
    let mut hi = BigRational::one();
    while z_of_s(&hi) >= *z_hi {
        lo = hi.clone();
        hi *= &two;
    }
    loop {
        let mid = (&lo + &hi) / &two;
        if inside(&mid) {
            return mid;
        }
        if z_of_s(&mid) >= *z_hi {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn sign_changes(coeffs: &[BigInt]) -> usize {
    let signs: Vec<bool> = coeffs.iter().filter(|c| !c.is_zero()).map(Signed::is_positive).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Counts of positive, negative, and zero eigenvalues of a real symmetric
/// integer matrix.
pub fn inertia(m: &[Vec<BigInt>]) -> (usize, usize, usize) {
    let n = m.len();
    if n == 0 {
        return (0, 0, 0);
    }
    let neg_m: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let ident: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    // det(xI − M), lowest degree first
    let charpoly = det_pencil(&neg_m, &ident);
    let c = charpoly.coeffs();
    let zeros = c.iter().take_while(|x| x.is_zero()).count();
    let pos = sign_changes(c);
    let flipped: Vec<BigInt> =
        c.iter().enumerate().map(|(i, x)| if i % 2 == 1 { -x } else { x.clone() }).collect();
    let neg = sign_changes(&flipped);
    debug_assert_eq!(pos + neg + zeros, n);
    (pos, neg, zeros)
}

/// Signature (positive minus negative count) of the Hermitian matrix at the
/// circle point parametrized by `s > 0`.
pub fn signature_at_s(seifert: &SeifertMatrix, s: &BigRational) -> i64 {
    let n = seifert.size();
    if n == 0 {
        return 0;
    }
    assert!(s.is_positive());
    let (a, b) = (s.numer().clone(), s.denom().clone());
    let sym = seifert.symmetrized();
    let anti = seifert.antisymmetrized();
    // b·H(s) = X + iY with X = a(S + Sᵀ), Y = −b(S − Sᵀ)
    let x = |i: usize, j: usize| &a * sym.get(i, j);
    let y = |i: usize, j: usize| -(&b * anti.get(i, j));
    let mut real = vec![vec![BigInt::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            real[i][j] = x(i, j);
            real[n + i][n + j] = x(i, j);
            real[i][n + j] = -y(i, j);
            real[n + i][j] = y(i, j);
        }
    }
    let (pos, neg, _) = inertia(&real);
    // each eigenvalue of the Hermitian matrix appears twice
    (pos as i64 - neg as i64) / 2
}

/// Compares `z(s)` against a rational.
pub fn cmp_z(s: &BigRational, z: &BigRational) -> Ordering {
    z_of_s(s).cmp(z)
}

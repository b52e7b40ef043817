//! Floating-point evaluation of the Hermitian signature matrix, used as an
//! independent cross-check of the exact step values.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{SignatureError, UnitAngle};
use crate::seifert::SeifertMatrix;

/// `ω = e^{2πiθ}`, exact at quarter turns.
fn unit_point(theta: UnitAngle) -> Complex64 {
    match (theta.numer(), theta.denom()) {
        (0, _) => Complex64::new(1.0, 0.0),
        (1, 4) => Complex64::new(0.0, 1.0),
        (1, 2) => Complex64::new(-1.0, 0.0),
        (3, 4) => Complex64::new(0.0, -1.0),
        _ => Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * theta.to_f64()),
    }
}

/// `(1 − ω)S + (1 − ω̄)Sᵀ` with `ω = e^{2πiθ}`.
pub fn hermitian_at(s: &SeifertMatrix, theta: UnitAngle) -> DMatrix<Complex64> {
    let n = s.size();
    let w = unit_point(theta);
    let one = Complex64::new(1.0, 0.0);
    let (a, b) = (one - w, one - w.conj());
    let m = s.matrix();
    DMatrix::from_fn(n, n, |i, j| a * m.get(i, j) as f64 + b * m.get(j, i) as f64)
}

/// Signature of a Hermitian matrix through its real symmetric form
/// `[[Re, −Im], [Im, Re]]`. Fails if an eigenvalue is within
/// `tolerance · max(1, ‖·‖)` of zero.
pub fn hermitian_signature(h: &DMatrix<Complex64>, tolerance: f64) -> Result<i64, f64> {
    let n = h.nrows();
    if n == 0 {
        return Ok(0);
    }
    let real = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = h[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let eig = SymmetricEigen::new(real).eigenvalues;
    let scale = eig.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let gap = eig.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    if gap < tolerance * scale {
        return Err(gap);
    }
    let pos = eig.iter().filter(|x| **x > 0.0).count() as i64;
    let neg = eig.len() as i64 - pos;
    Ok((pos - neg) / 2)
}

/// Numeric signature of `hermitian_at(s, θ)`.
pub fn signature_numeric(s: &SeifertMatrix, theta: UnitAngle, tolerance: f64) -> Result<i64, SignatureError> {
    hermitian_signature(&hermitian_at(s, theta), tolerance)
        .map_err(|gap| SignatureError::EigenvalueTooClose { theta, gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> SeifertMatrix {
        SeifertMatrix::from_rows(&[vec![-1, 1], vec![0, -1]]).unwrap()
    }

    #[test]
    fn matrix_at_special_angles() {
        let h = hermitian_at(&trefoil(), UnitAngle::new(1, 2));
        let expect = [[-4.0, 2.0], [2.0, -4.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(h[(i, j)], Complex64::new(expect[i][j], 0.0));
            }
        }
        let z = hermitian_at(&trefoil(), UnitAngle::ZERO);
        assert!(z.iter().all(|c| *c == Complex64::new(0.0, 0.0)));
        assert_eq!(hermitian_at(&SeifertMatrix::unknot(), UnitAngle::new(1, 3)).nrows(), 0);
    }

    #[test]
    fn hermitian_by_construction() {
        let s = SeifertMatrix::from_rows(&[vec![2, 1, 0, 3], vec![0, -1, 1, 0], vec![0, 0, 1, 1], vec![1, 0, 0, 2]]);
        if let Ok(s) = s {
            let h = hermitian_at(&s, UnitAngle::new(2, 7));
            assert!((h.adjoint() - &h).norm() < 1e-12);
        }
        let h = hermitian_at(&trefoil(), UnitAngle::new(1, 5));
        assert!((h.adjoint() - &h).norm() < 1e-12);
    }

    #[test]
    fn numeric_values() {
        let t = trefoil();
        assert_eq!(signature_numeric(&t, UnitAngle::new(1, 2), 1e-9).unwrap(), -2);
        assert_eq!(signature_numeric(&t, UnitAngle::new(1, 10), 1e-9).unwrap(), 0);
        assert!(matches!(
            signature_numeric(&t, UnitAngle::new(1, 6), 1e-9),
            Err(SignatureError::EigenvalueTooClose { .. })
        ));
        assert!(signature_numeric(&t, UnitAngle::ZERO, 1e-9).is_err());
    }
}

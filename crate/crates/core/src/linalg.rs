//! Small dense integer matrices with exact determinants.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::{interpolate, IntPoly};

/// Square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows; `None` if the rows are not square.
    pub fn from_rows(rows: &[Vec<i64>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(IntMatrix { n, data: rows.concat() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(i64) -> i64) -> Self {
        IntMatrix { n: self.n, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        assert_eq!(self.n, other.n);
        IntMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut m = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                m.set(self.n + i, self.n + j, other.get(i, j));
            }
        }
        m
    }

    /// Matrix-vector product with overflow checking.
    pub fn mul_vec(&self, v: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n).try_fold(0i64, |acc, j| {
                    self.get(i, j).checked_mul(v[j]).and_then(|x| acc.checked_add(x))
                })
            })
            .collect()
    }

    /// `uᵀ M v`.
    pub fn bilinear(&self, u: &[i64], v: &[i64]) -> i128 {
        let mut s = 0i128;
        for i in 0..self.n {
            if u[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                s += u[i] as i128 * self.get(i, j) as i128 * v[j] as i128;
            }
        }
        s
    }

    pub fn to_big(&self) -> Vec<Vec<BigInt>> {
        self.rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect()
    }

    pub fn det(&self) -> BigInt {
        det_bareiss(self.to_big())
    }
}

impl fmt::Display for IntMatrix {
    /// The matrix file format: the size, then one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Fraction-free Gaussian elimination.
pub fn det_bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `det(A + x·B)` as a polynomial in `x`, by evaluation at integer nodes.
pub fn det_pencil(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntPoly {
    let n = a.len();
    let xs: Vec<BigInt> = (0..=n as i64).map(BigInt::from).collect();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|x| {
            let m = a
                .iter()
                .zip(b)
                .map(|(ra, rb)| ra.iter().zip(rb).map(|(p, q)| p + x * q).collect())
                .collect();
            BigRational::from(det_bareiss(m))
        })
        .collect();
    interpolate(&xs, &ys)
        .to_int()
        .expect("determinant of an integer pencil has integer coefficients")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = IntMatrix::from_rows(&[vec![2, -1, 0], vec![1, 3, 4], vec![0, 5, -2]]).unwrap();
        // 2(3·-2 - 4·5) + 1(1·-2 - 0) = -52 - 2
        assert_eq!(m.det(), BigInt::from(-54));
        let z = IntMatrix::from_rows(&[vec![0, 1], vec![0, 2]]).unwrap();
        assert!(z.det().is_zero());
        assert_eq!(IntMatrix::zeros(0).det(), BigInt::one());
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(m.det(), BigInt::one());
    }

    #[test]
    fn pencil_determinant() {
        // det([[x, 1], [-1, x]]) = x^2 + 1
        let a = vec![vec![0.into(), 1.into()], vec![(-1).into(), 0.into()]];
        let b = vec![vec![1.into(), 0.into()], vec![0.into(), 1.into()]];
        assert_eq!(det_pencil(&a, &b), IntPoly::from_i64s(&[1, 0, 1]));
    }
}

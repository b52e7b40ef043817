//! Seifert matrices and the algebra of Seifert forms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::laurent::{normalize_assoc, AssocClass, LaurentPoly};
use crate::linalg::{det_bareiss, det_pencil, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("matrix rows are not all of length {0}")]
    NotSquare(usize),
    #[error("Seifert matrix must have even size, got {0}")]
    OddSize(usize),
    #[error("det(S - S^T) = {det}, expected 1")]
    NotUnimodular { det: BigInt },
    #[error("expected a 2x2 matrix, got {0}x{0}")]
    WrongSize(usize),
    #[error("matrix file: {0}")]
    Parse(String),
}

/// A `2g × 2g` integer matrix with `det(S − Sᵀ) = 1`. The empty matrix is
/// the unknot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeifertMatrix(IntMatrix);

impl SeifertMatrix {
    pub fn validate(raw: IntMatrix) -> Result<Self, SeifertError> {
        let n = raw.size();
        if n % 2 == 1 {
            return Err(SeifertError::OddSize(n));
        }
        let det = raw.zip_with(&raw.transpose(), |a, b| a - b).det();
        if !det.is_one() {
            return Err(SeifertError::NotUnimodular { det });
        }
        Ok(SeifertMatrix(raw))
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, SeifertError> {
        let raw = IntMatrix::from_rows(rows).ok_or(SeifertError::NotSquare(rows.len()))?;
        Self::validate(raw)
    }

    pub fn unknot() -> Self {
        SeifertMatrix(IntMatrix::zeros(0))
    }

    /// `[[0, λ], [λ + 1, ℓ]]`, the genus-one surface whose first basis curve
    /// has self-linking zero.
    pub fn genus1(lambda: i64, ell: i64) -> Self {
        SeifertMatrix(
            IntMatrix::from_rows(&[vec![0, lambda], vec![lambda + 1, ell]]).expect("2x2"),
        )
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn genus(&self) -> usize {
        self.0.size() / 2
    }

    /// `det(S − t·Sᵀ)` up to units.
    pub fn alexander(&self) -> AssocClass {
        let s = self.0.to_big();
        let minus_st = self.0.transpose().map(|x| -x).to_big();
        let p = det_pencil(&s, &minus_st);
        normalize_assoc(&LaurentPoly::from_int_poly(&p))
    }

    /// Block sum; realizes connected sum of knots.
    pub fn connected_sum(&self, other: &Self) -> Self {
        SeifertMatrix(self.0.direct_sum(&other.0))
    }

    /// `−Sᵀ`, a Seifert matrix for the mirror image with reversed
    /// orientation, the concordance inverse.
    pub fn mirror(&self) -> Self {
        SeifertMatrix(self.0.transpose().map(|x| -x))
    }

    /// Symmetrization `S + Sᵀ`.
    pub fn symmetrized(&self) -> IntMatrix {
        self.0.zip_with(&self.0.transpose(), |a, b| a + b)
    }

    /// Antisymmetrization `S − Sᵀ`.
    pub fn antisymmetrized(&self) -> IntMatrix {
        self.0.zip_with(&self.0.transpose(), |a, b| a - b)
    }

    /// A primitive `v ≠ 0` with `vᵀSv = 0` for a genus-one matrix.
    pub fn metabolizer_genus1(&self) -> Result<Option<[i64; 2]>, SeifertError> {
        if self.size() != 2 {
            return Err(SeifertError::WrongSize(self.size()));
        }
        let (a, b, c, d) = (self.0.get(0, 0), self.0.get(0, 1), self.0.get(1, 0), self.0.get(1, 1));
        let cross = b + c;
        let v = if a == 0 {
            Some([1, 0])
        } else if d == 0 {
            Some([0, 1])
        } else {
            let disc = (cross as i128) * (cross as i128) - 4 * (a as i128) * (d as i128);
            let root = if disc >= 0 { disc.isqrt() } else { -1 };
            (root >= 0 && root * root == disc).then(|| {
                // a x² + (b+c) x y + d y² = 0 at x/y = (−(b+c) + √disc) / 2a
                let x = -(cross as i128) + root;
                let y = 2 * a as i128;
                let g = x.gcd(&y);
                [(x / g) as i64, (y / g) as i64]
            })
        };
        if let Some(v) = v {
            assert_eq!(self.0.bilinear(&v, &v), 0, "metabolizer check");
            assert_eq!(v[0].gcd(&v[1]), 1);
        }
        Ok(v)
    }

    /// Bounded brute-force search for a rank-`g` summand on which the Seifert
    /// form vanishes, over primitive vectors with entries in `[-height, height]`.
    pub fn isotropic_search(&self, height: u32) -> Isotropic {
        let g = self.genus();
        if g == 0 {
            return Isotropic::Found(Vec::new());
        }
        let n = self.size();
        let h = height as i64;
        let mut cands: Vec<Vec<i64>> = Vec::new();
        let mut v = vec![-h; n];
        loop {
            let first_nonzero = v.iter().find(|&&x| x != 0);
            if first_nonzero.is_some_and(|&x| x > 0)
                && v.iter().fold(0i64, |acc, x| acc.gcd(x)) == 1
                && self.0.bilinear(&v, &v) == 0
            {
                cands.push(v.clone());
            }
            // odometer over the cube
            let mut i = 0;
            while i < n && v[i] == h {
                v[i] = -h;
                i += 1;
            }
            if i == n {
                break;
            }
            v[i] += 1;
        }
        cands.sort_by_key(|v| (v.iter().map(|x| x.abs()).max(), v.clone()));
        let mut chosen = Vec::new();
        if self.extend_isotropic(&cands, 0, &mut chosen) {
            Isotropic::Found(chosen)
        } else {
            Isotropic::NotFoundUpToHeight(height)
        }
    }

    fn extend_isotropic(&self, cands: &[Vec<i64>], start: usize, chosen: &mut Vec<Vec<i64>>) -> bool {
        let g = self.genus();
        if chosen.len() == g {
            return spans_summand(chosen, self.size());
        }
        for (i, c) in cands.iter().enumerate().skip(start) {
            let orthogonal = chosen
                .iter()
                .all(|u| self.0.bilinear(u, c) == 0 && self.0.bilinear(c, u) == 0);
            if !orthogonal {
                continue;
            }
            chosen.push(c.clone());
            if rank(chosen) == chosen.len() && self.extend_isotropic(cands, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

/// Result of [`SeifertMatrix::isotropic_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isotropic {
    /// Basis of a summand of `Z^{2g}` on which the form vanishes.
    Found(Vec<Vec<i64>>),
    NotFoundUpToHeight(u32),
}

fn rank(vectors: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<BigInt>> =
        vectors.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            let (f, g) = (rows[i][c].clone(), rows[r][c].clone());
            for j in 0..cols {
                rows[i][j] = &rows[i][j] * &g - &rows[r][j] * &f;
            }
        }
        r += 1;
    }
    r
}

/// Whether the rows span a direct summand: the gcd of maximal minors is 1.
pub(crate) fn spans_summand(vectors: &[Vec<i64>], n: usize) -> bool {
    let k = vectors.len();
    let mut cols: Vec<usize> = (0..k).collect();
    let mut g = BigInt::zero();
    loop {
        let minor = vectors
            .iter()
            .map(|v| cols.iter().map(|&c| BigInt::from(v[c])).collect())
            .collect();
        g = g.gcd(&det_bareiss(minor));
        if g.is_one() {
            return true;
        }
        // next k-combination of 0..n
        let Some(i) = (0..k).rev().find(|&i| cols[i] < n - k + i) else {
            return g.abs().is_one();
        };
        cols[i] += 1;
        for j in i + 1..k {
            cols[j] = cols[j - 1] + 1;
        }
    }
}

impl fmt::Display for SeifertMatrix {
    /// Matrix file format, reproduced byte-for-byte by the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Parses the matrix file format without validating the Seifert condition.
pub fn parse_matrix(s: &str) -> Result<IntMatrix, SeifertError> {
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let n: usize = lines
        .next()
        .ok_or_else(|| SeifertError::Parse("missing size line".into()))?
        .parse()
        .map_err(|e| SeifertError::Parse(format!("size: {e}")))?;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let line = lines.next().ok_or_else(|| SeifertError::Parse(format!("missing row {i}")))?;
        let row = line
            .split_whitespace()
            .map(|x| x.parse::<i64>().map_err(|e| SeifertError::Parse(format!("row {i}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != n {
            return Err(SeifertError::Parse(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        rows.push(row);
    }
    if let Some(extra) = lines.next() {
        return Err(SeifertError::Parse(format!("trailing content `{extra}`")));
    }
    IntMatrix::from_rows(&rows).ok_or(SeifertError::NotSquare(n))
}

impl FromStr for SeifertMatrix {
    type Err = SeifertError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::validate(parse_matrix(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> SeifertMatrix {
        SeifertMatrix::from_rows(&[vec![-1, 1], vec![0, -1]]).unwrap()
    }

    fn lp(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(0, c)
    }

    #[test]
    fn validation() {
        assert!(SeifertMatrix::from_rows(&[vec![-1, 1], vec![0, -1]]).is_ok());
        assert_eq!(SeifertMatrix::from_rows(&[]).unwrap(), SeifertMatrix::unknot());
        assert_eq!(
            SeifertMatrix::from_rows(&[vec![0, 2], vec![0, 0]]),
            Err(SeifertError::NotUnimodular { det: 4.into() })
        );
        assert_eq!(SeifertMatrix::from_rows(&[vec![1]]), Err(SeifertError::OddSize(1)));
        assert_eq!(
            SeifertMatrix::from_rows(&[vec![1, 2], vec![3]]),
            Err(SeifertError::NotSquare(2))
        );
    }

    #[test]
    fn genus_one_constructor() {
        assert_eq!(SeifertMatrix::genus1(1, 0).matrix().rows(), vec![vec![0, 1], vec![2, 0]]);
        assert_eq!(SeifertMatrix::genus1(0, 0).matrix().rows(), vec![vec![0, 0], vec![1, 0]]);
        assert_eq!(SeifertMatrix::genus1(-2, 3).matrix().rows(), vec![vec![0, -2], vec![-1, 3]]);
        for (l, e) in [(1, 0), (0, 0), (-2, 3), (4, -1)] {
            assert!(SeifertMatrix::validate(SeifertMatrix::genus1(l, e).matrix().clone()).is_ok());
        }
    }

    #[test]
    fn alexander_examples() {
        assert_eq!(trefoil().alexander().poly(), &lp(&[1, -1, 1]));
        assert_eq!(SeifertMatrix::unknot().alexander().poly(), &LaurentPoly::one());
        // (t − 2)(2t − 1)
        assert_eq!(SeifertMatrix::genus1(1, 0).alexander().poly(), &lp(&[2, -5, 2]));
        let sq = trefoil().connected_sum(&trefoil()).alexander();
        assert_eq!(sq.poly(), &lp(&[1, -1, 1]).pow(2));
    }

    #[test]
    fn mirror_and_sum() {
        let t = trefoil();
        assert_eq!(t.mirror().matrix().rows(), vec![vec![1, 0], vec![-1, 1]]);
        assert_eq!(t.mirror().mirror(), t);
        assert_eq!(SeifertMatrix::unknot().mirror(), SeifertMatrix::unknot());
        assert_eq!(t.connected_sum(&SeifertMatrix::unknot()), t);
        assert_eq!(t.mirror().alexander(), t.alexander());
    }

    #[test]
    fn genus_one_metabolizers() {
        assert_eq!(SeifertMatrix::genus1(3, -2).metabolizer_genus1().unwrap(), Some([1, 0]));
        let fig8 = SeifertMatrix::from_rows(&[vec![1, 1], vec![0, -1]]).unwrap();
        assert_eq!(fig8.metabolizer_genus1().unwrap(), None);
        assert_eq!(trefoil().metabolizer_genus1().unwrap(), None);
        // 2x² − 3xy − 2y² = (2x + y)(x − 2y), primitive solution (2, 1)
        let s = SeifertMatrix::from_rows(&[vec![2, -1], vec![-2, -2]]).unwrap();
        assert_eq!(s.metabolizer_genus1().unwrap(), Some([2, 1]));
        let big = trefoil().connected_sum(&trefoil());
        assert_eq!(big.metabolizer_genus1(), Err(SeifertError::WrongSize(4)));
    }

    #[test]
    fn isotropic_examples() {
        let s = SeifertMatrix::genus1(1, 0).connected_sum(&SeifertMatrix::genus1(1, 0));
        let Isotropic::Found(b) = s.isotropic_search(3) else { panic!("expected a metabolizer") };
        assert_eq!(b.len(), 2);
        for u in &b {
            for v in &b {
                assert_eq!(s.matrix().bilinear(u, v), 0);
            }
        }
        assert!(spans_summand(&b, 4));
        assert_eq!(trefoil().isotropic_search(10), Isotropic::NotFoundUpToHeight(10));
        let t = trefoil().connected_sum(&trefoil().mirror());
        assert!(matches!(t.isotropic_search(3), Isotropic::Found(_)));
    }

    #[test]
    fn summand_detection() {
        assert!(spans_summand(&[vec![1, 0, 0, 0], vec![0, 0, 1, 0]], 4));
        assert!(!spans_summand(&[vec![2, 0, 0, 0], vec![0, 0, 1, 0]], 4));
        assert!(!spans_summand(&[vec![1, 1, 0, 0], vec![1, -1, 0, 0]], 4));
    }

    #[test]
    fn matrix_file_round_trip() {
        let text = "2\n-1 1\n0 -1\n";
        let s: SeifertMatrix = text.parse().unwrap();
        assert_eq!(s, trefoil());
        assert_eq!(s.to_string(), text);
        assert_eq!(SeifertMatrix::unknot().to_string(), "0\n");
        assert!(matches!("2\n1 2\n".parse::<SeifertMatrix>(), Err(SeifertError::Parse(_))));
        assert!(matches!("2\n1 2 3\n0 1\n".parse::<SeifertMatrix>(), Err(SeifertError::Parse(_))));
    }
}

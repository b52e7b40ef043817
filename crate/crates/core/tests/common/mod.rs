//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use concordia::linalg::IntMatrix;
use concordia::seifert::SeifertMatrix;
use concordia::sigfn::{step_from_jumps, RationalStepFn, SignatureFunction};
use concordia::signature::UnitAngle;
use concordia::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

/// `⊕ [[0,1],[0,0]]` plus a random symmetric matrix: `S − Sᵀ` is the
/// standard symplectic form, so `S` is a valid Seifert matrix.
pub fn random_seifert<R: Rng>(rng: &mut R, genus: usize, bound: i64) -> SeifertMatrix {
    let n = 2 * genus;
    let mut m = IntMatrix::zeros(n);
    for i in 0..genus {
        m.set(2 * i, 2 * i + 1, 1);
    }
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-bound..=bound);
            m.set(i, j, m.get(i, j) + v);
            if i != j {
                m.set(j, i, m.get(j, i) + v);
            }
        }
    }
    SeifertMatrix::validate(m).expect("symplectic antisymmetric part")
}

pub fn random_angle<R: Rng>(rng: &mut R, max_den: i64) -> UnitAngle {
    let d = rng.gen_range(1..=max_den);
    UnitAngle::new(rng.gen_range(0..d), d)
}

/// Step function with up to `max_jumps` jumps at angles with denominator
/// at most `max_den` and small rational jump sizes.
pub fn random_step<R: Rng>(rng: &mut R, max_jumps: usize, max_den: i64) -> RationalStepFn {
    let count = rng.gen_range(0..=max_jumps);
    let mut jumps: Vec<(UnitAngle, Rat)> = Vec::new();
    while jumps.len() < count {
        let a = random_angle(rng, max_den);
        if jumps.iter().any(|(b, _)| *b == a) {
            continue;
        }
        let j = Rat::new(rng.gen_range(-6..=6), rng.gen_range(1..=3));
        jumps.push((a, j));
    }
    let base = Rat::new(rng.gen_range(-2..=2), rng.gen_range(1..=2));
    step_from_jumps(&jumps, base).expect("distinct angles")
}

pub fn coprime_pair<R: Rng>(rng: &mut R, max: i64) -> (i64, i64) {
    loop {
        let a = rng.gen_range(1..=max);
        let b = rng.gen_range(1..=max);
        if a != b && a.gcd(&b) == 1 {
            return (a, b);
        }
    }
}

/// Decides solvability of `σ(kx) = g(bx) − g(ax)` for all `x ∈ ℤ/p` by
/// Gaussian elimination over the rationals on the full `p × p` system.
pub fn exhaustive_feasible(sigma: &SignatureFunction, a: i64, b: i64, k: i64, p: i64) -> bool {
    let n = p as usize;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for x in 0..p {
        let mut row = vec![BigRational::zero(); n + 1];
        let bx = (b * x).rem_euclid(p) as usize;
        let ax = (a * x).rem_euclid(p) as usize;
        row[bx] += BigRational::one();
        row[ax] -= BigRational::one();
        let s = sigma.averaged(UnitAngle::new(k * x, p)).expect("defined on grid");
        row[n] = BigRational::new(BigInt::from(*s.numer()), BigInt::from(*s.denom()));
        rows.push(row);
    }
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, pivot);
        let inv = BigRational::one() / rows[rank][col].clone();
        for c in col..=n {
            rows[rank][c] = &rows[rank][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &rows[rank][c];
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rows[rank..].iter().all(|r| r[n].is_zero())
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.size();
    let mut out = IntMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, (0..n).map(|k| a.get(i, k) * b.get(k, j)).sum());
        }
    }
    out
}

/// Unit upper triangular `U` with small random entries and its inverse.
fn random_unipotent<R: Rng>(rng: &mut R, n: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            u.set(i, j, rng.gen_range(-1..=1));
        }
    }
    // back substitution, column by column
    let mut inv = IntMatrix::identity(n);
    for j in 0..n {
        for i in (0..j).rev() {
            let s: i64 = (i + 1..=j).map(|k| u.get(i, k) * inv.get(k, j)).sum();
            inv.set(i, j, -s);
        }
    }
    (u, inv)
}

/// `(M, p, λ)` with `p` minimal such that `M^p e₁ = λ e₁`: a scaled cycle
/// `e₁ → e₂ → … → e_p → λe₁` on the first block, conjugated by a unipotent
/// matrix fixing `e₁`.
pub fn random_case_two<R: Rng>(rng: &mut R, max_p: u32) -> (IntMatrix, u32, i64) {
    let p = rng.gen_range(1..=max_p) as usize;
    let n = p.max(2) + rng.gen_range(0..=1);
    let lambda = *[-3i64, -2, -1, 1, 2, 3].get(rng.gen_range(0..6)).unwrap();
    let mut m0 = IntMatrix::zeros(n);
    for i in 0..p {
        if i + 1 < p {
            m0.set(i + 1, i, 1);
        } else {
            m0.set(0, i, lambda);
        }
    }
    for j in p..n {
        for i in 0..j {
            m0.set(i, j, rng.gen_range(-1..=1));
        }
        m0.set(j, j, *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap());
    }
    let (u, inv) = random_unipotent(rng, n);
    (mat_mul(&mat_mul(&u, &m0), &inv), p as u32, lambda)
}

//! Levine-Tristram signatures of Seifert matrices.
//!
//! Jumps can only occur at unit-circle roots of the Alexander polynomial.
//! Writing `z = ω + ω̄ = 2cos(2πθ)`, those roots become real roots of an
//! integer polynomial in `(−2, 2)`, which are isolated exactly. The value on
//! each jump-free arc is computed exactly at a rational point of the circle
//! chosen inside the arc. At a jump the signature is the average of the two
//! one-sided values.

mod angle;
pub mod exact;
pub mod numeric;
mod trig;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use angle::{AngleParseError, UnitAngle};
pub use numeric::{hermitian_at, signature_numeric};
pub use trig::two_cos_enclosure;

use crate::laurent::cos_substitute;
use crate::poly::{isolate_real_roots, refine_root, IntPoly};
use crate::seifert::SeifertMatrix;
use crate::Rat;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignatureConfig {
    /// Starting bit precision for certified comparisons of `2cos(2πθ)`
    /// against jump loci. Doubled until the comparison is decided.
    pub precision_bits: u32,
    /// Relative threshold below which a floating-point eigenvalue counts as
    /// zero in the numeric cross-check.
    pub zero_tolerance: f64,
}

impl Default for SignatureConfig {
    fn default() -> Self {
        SignatureConfig { precision_bits: 128, zero_tolerance: 2f64.powi(-40) }
    }
}

/// Which value to report at an angle: a one-sided limit or their mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Averaged,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SignatureError {
    #[error("eigenvalue {gap:e} too close to zero at θ = {theta}")]
    EigenvalueTooClose { theta: UnitAngle, gap: f64 },
    #[error("inconsistent step values: {0}")]
    Inconsistent(String),
}

/// Width of refined locus intervals in `z`.
const LOCUS_WIDTH_BITS: u32 = 50;
/// Grid of the decimal turn enclosures.
const TURNS_GRID: i64 = 1_000_000_000_000;
/// Separation below which the floating-point fast path defers to certified
/// arithmetic.
const FAST_PATH_MARGIN: f64 = 1e-9;

/// A root `z₀ ∈ (−2, 2)` of the squarefree `z`-polynomial, i.e. a conjugate
/// pair `e^{±2πiθ₀}` of unit-circle roots of the Alexander polynomial.
#[derive(Clone, Debug)]
pub struct JumpLocus {
    zpoly: IntPoly,
    interval: (BigRational, BigRational),
    turns_interval: (Rat, Rat),
    z_approx: f64,
}

impl JumpLocus {
    fn new(zpoly: IntPoly, interval: (BigRational, BigRational)) -> Self {
        let lo = interval.0.to_f64().unwrap_or(-2.0);
        let hi = interval.1.to_f64().unwrap_or(2.0);
        let turns = |z: f64| (z / 2.0).clamp(-1.0, 1.0).acos() / (2.0 * std::f64::consts::PI);
        let pad = 1e-11;
        let t_lo = ((turns(hi) - pad) * TURNS_GRID as f64).floor().max(0.0) as i64;
        let t_hi = ((turns(lo) + pad) * TURNS_GRID as f64).ceil().min(TURNS_GRID as f64 / 2.0) as i64;
        JumpLocus {
            zpoly,
            turns_interval: (Rat::new(t_lo, TURNS_GRID), Rat::new(t_hi, TURNS_GRID)),
            z_approx: (lo + hi) / 2.0,
            interval,
        }
    }

    /// Squarefree polynomial in `z` with exactly one root in `interval()`.
    pub fn zpoly(&self) -> &IntPoly {
        &self.zpoly
    }

    /// Isolating interval in `z`; neither endpoint is a root.
    pub fn interval(&self) -> &(BigRational, BigRational) {
        &self.interval
    }

    /// Enclosure of the jump angle `θ₀ ∈ (0, 1/2)` in turns.
    pub fn turns_interval(&self) -> (Rat, Rat) {
        self.turns_interval
    }

    pub fn z_approx(&self) -> f64 {
        self.z_approx
    }

    pub fn turns_approx(&self) -> f64 {
        (self.z_approx / 2.0).acos() / (2.0 * std::f64::consts::PI)
    }

    fn refined(&self, width: &BigRational) -> (BigRational, BigRational) {
        refine_root(&self.zpoly, self.interval.0.clone(), self.interval.1.clone(), width)
    }

    fn shrink(&mut self) {
        let half = (&self.interval.1 - &self.interval.0) / BigRational::from_integer(2.into());
        *self = JumpLocus::new(self.zpoly.clone(), self.refined(&half));
    }
}

fn pow2_inv(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// Jump loci of the signature function, ordered by increasing angle
/// (decreasing `z`).
pub fn jump_loci(s: &SeifertMatrix) -> Vec<JumpLocus> {
    let delta = s.alexander();
    if delta.degree() == 0 {
        return Vec::new();
    }
    let z = cos_substitute(delta.poly()).expect("Alexander polynomials of knots are symmetric");
    let sf = z.squarefree();
    let two = BigRational::from_integer(2.into());
    let width = pow2_inv(LOCUS_WIDTH_BITS);
    let mut loci: Vec<JumpLocus> = isolate_real_roots(&sf, &-&two, &two)
        .into_iter()
        .rev()
        .map(|(a, b)| JumpLocus::new(sf.clone(), refine_root(&sf, a, b, &width)))
        .collect();
    // make the gaps between consecutive intervals, and to ±2, nonempty
    loop {
        let mut done = true;
        for k in 0..loci.len() {
            let upper = if k == 0 { two.clone() } else { loci[k - 1].interval.0.clone() };
            if loci[k].interval.1 >= upper {
                loci[k].shrink();
                if k > 0 {
                    loci[k - 1].shrink();
                }
                done = false;
            }
        }
        if let Some(last) = loci.last_mut() {
            if last.interval.0 <= -&two {
                last.shrink();
                done = false;
            }
        }
        if done {
            return loci;
        }
    }
}

fn totient(n: i64) -> i64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn mobius(n: i64) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// The `q`-th cyclotomic polynomial, as `∏_{d | q} (t^d − 1)^{μ(q/d)}`.
pub(crate) fn cyclotomic(q: i64) -> IntPoly {
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for d in (1..=q).filter(|d| q % d == 0) {
        let mut c = vec![BigInt::zero(); d as usize + 1];
        c[0] = BigInt::from(-1);
        c[d as usize] = BigInt::one();
        let f = IntPoly::new(c);
        match mobius(q / d) {
            1 => num = num.mul(&f),
            -1 => den = den.mul(&f),
            _ => {}
        }
    }
    num.exact_div(&den).expect("cyclotomic quotient is exact")
}

/// Orders `q ≥ 3` of roots of unity that are roots of `delta`.
fn root_of_unity_orders(delta: &IntPoly) -> BTreeSet<i64> {
    let deg = delta.degree().unwrap_or(0) as i64;
    let mut out = BTreeSet::new();
    if deg == 0 {
        return out;
    }
    // φ(q) ≥ sqrt(q/2)
    for q in 3..=2 * deg * deg + 2 {
        if totient(q) <= deg && delta.exact_div(&cyclotomic(q)).is_some() {
            out.insert(q);
        }
    }
    out
}

/// Where an angle `φ ∈ [0, 1/2]` sits relative to the loci.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    /// Strictly inside the jump-free arc with this index.
    Gap(usize),
    /// Exactly at the locus with this index.
    Locus(usize),
}

/// The signature function of a Seifert matrix on the whole circle.
#[derive(Clone, Debug)]
pub struct SignatureProfile {
    genus: usize,
    loci: Vec<JumpLocus>,
    values: Vec<i64>,
    root_orders: BTreeSet<i64>,
    config: SignatureConfig,
}

/// A line of the profile export, in increasing angle over `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileRecord {
    Interval { lo: Rat, hi: Rat, value: i64 },
    Jump { lo: Rat, hi: Rat, amount: i64 },
}

pub fn profile_of(s: &SeifertMatrix) -> Result<SignatureProfile, SignatureError> {
    profile_with(s, SignatureConfig::default())
}

pub fn profile_with(s: &SeifertMatrix, config: SignatureConfig) -> Result<SignatureProfile, SignatureError> {
    let loci = jump_loci(s);
    let two = BigRational::from_integer(2.into());
    let m = loci.len();
    let genus = s.genus();
    let mut values = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let z_hi = if k == 0 { two.clone() } else { loci[k - 1].interval.0.clone() };
        let z_lo = if k == m { -&two } else { loci[k].interval.1.clone() };
        let point = exact::s_in_gap(&z_lo, &z_hi);
        let v = exact::signature_at_s(s, &point);
        cross_check(s, &point, v, config.zero_tolerance)?;
        if v % 2 != 0 || v.unsigned_abs() as usize > 2 * genus {
            return Err(SignatureError::Inconsistent(format!("value {v} on arc {k} for genus {genus}")));
        }
        values.push(v);
    }
    if values[0] != 0 {
        return Err(SignatureError::Inconsistent(format!("value {} near θ = 0", values[0])));
    }
    let root_orders = root_of_unity_orders(&s.alexander().to_int_poly());
    Ok(SignatureProfile { genus, loci, values, root_orders, config })
}

/// Compares the exact value with a floating-point eigenvalue count of
/// `s(S + Sᵀ) − i(S − Sᵀ)`. An ill-conditioned numeric result is ignored.
fn cross_check(seifert: &SeifertMatrix, s: &BigRational, exact: i64, tol: f64) -> Result<(), SignatureError> {
    let sf = s.to_f64().unwrap_or(f64::NAN);
    if !sf.is_finite() {
        return Ok(());
    }
    let m = seifert.matrix();
    let n = seifert.size();
    let h = DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (m.get(i, j) as f64, m.get(j, i) as f64);
        Complex64::new(sf * (a + b), -(a - b))
    });
    match numeric::hermitian_signature(&h, tol) {
        Ok(v) if v != exact => Err(SignatureError::Inconsistent(format!(
            "exact value {exact} but floating-point value {v} at s = {s}"
        ))),
        _ => Ok(()),
    }
}

/// Signature at `θ`, averaged at jumps.
pub fn signature_at(s: &SeifertMatrix, theta: UnitAngle) -> Result<Rat, SignatureError> {
    Ok(profile_of(s)?.value_at(theta, Side::Averaged))
}

fn decimal(r: Rat) -> String {
    let scaled = r * Rat::from_integer(TURNS_GRID);
    if scaled.is_integer() {
        let v = scaled.to_integer();
        let (q, rem) = v.div_rem(&TURNS_GRID);
        format!("{q}.{rem:012}")
    } else {
        r.to_string()
    }
}

impl SignatureProfile {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn loci(&self) -> &[JumpLocus] {
        &self.loci
    }

    /// Values on the jump-free arcs of `(0, 1/2)`, in increasing angle.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Jump amount (right minus left) at each locus.
    pub fn jumps(&self) -> Vec<i64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn config(&self) -> SignatureConfig {
        self.config
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0)
    }

    /// Locates `φ ∈ [0, 1/2]`.
    pub fn position(&self, phi: Rat) -> Position {
        assert!(phi >= Rat::zero() && phi <= Rat::new(1, 2));
        let m = self.loci.len();
        if phi.is_zero() {
            return Position::Gap(0);
        }
        if phi == Rat::new(1, 2) {
            return Position::Gap(m);
        }
        let on_root = self.root_orders.contains(phi.denom());
        let zf = 2.0 * (2.0 * std::f64::consts::PI * phi.to_f64().unwrap_or(0.0)).cos();
        let near: Vec<usize> =
            (0..m).filter(|&i| (self.loci[i].z_approx - zf).abs() <= FAST_PATH_MARGIN).collect();
        let above = |i: usize| self.loci[i].z_approx > zf;
        if on_root {
            let nearest = (0..m)
                .min_by(|&a, &b| {
                    let da = (self.loci[a].z_approx - zf).abs();
                    let db = (self.loci[b].z_approx - zf).abs();
                    da.total_cmp(&db)
                })
                .expect("root angle implies a locus");
            if near.len() == 1 && near[0] == nearest {
                return Position::Locus(nearest);
            }
        } else if near.is_empty() {
            return Position::Gap((0..m).filter(|&i| above(i)).count());
        }
        self.position_certified(phi, on_root)
    }

    fn position_certified(&self, phi: Rat, on_root: bool) -> Position {
        let mut bits = self.config.precision_bits.max(16);
        loop {
            let enc = two_cos_enclosure(phi, bits);
            let width = pow2_inv(bits);
            let mut above = 0;
            let mut overlapping = Vec::new();
            for (i, locus) in self.loci.iter().enumerate() {
                let (a, b) = locus.refined(&width);
                if a > enc.1 {
                    above += 1;
                } else if b >= enc.0 {
                    overlapping.push(i);
                }
            }
            match (on_root, overlapping.as_slice()) {
                (false, []) => return Position::Gap(above),
                (true, [i]) => return Position::Locus(*i),
                _ => bits *= 2,
            }
        }
    }

    /// Value at `θ`: a one-sided limit or the average of both.
    pub fn value_at(&self, theta: UnitAngle, side: Side) -> Rat {
        if theta.is_zero() {
            return Rat::zero();
        }
        let t = theta.turns();
        let half = Rat::new(1, 2);
        let (phi, mirrored) = if t > half { (Rat::one() - t, true) } else { (t, false) };
        match self.position(phi) {
            Position::Gap(k) => Rat::from_integer(self.values[k]),
            Position::Locus(k) => {
                let (l, r) = (self.values[k], self.values[k + 1]);
                let (l, r) = if mirrored { (r, l) } else { (l, r) };
                match side {
                    Side::Left => Rat::from_integer(l),
                    Side::Right => Rat::from_integer(r),
                    Side::Averaged => Rat::new(l + r, 2),
                }
            }
        }
    }

    /// Intervals and jumps over the whole circle, in increasing angle.
    /// Endpoints are decimal enclosures of the jump angles.
    pub fn records(&self) -> Vec<ProfileRecord> {
        let one = Rat::one();
        let mut jumps: Vec<(Rat, Rat, i64)> = Vec::new();
        for (locus, amount) in self.loci.iter().zip(self.jumps()) {
            let (lo, hi) = locus.turns_interval;
            jumps.push((lo, hi, amount));
        }
        for (locus, amount) in self.loci.iter().zip(self.jumps()).rev() {
            let (lo, hi) = locus.turns_interval;
            jumps.push((one - hi, one - lo, -amount));
        }
        let mut values: Vec<i64> = self.values.clone();
        values.extend(self.values.iter().rev().skip(1));
        let mut out = Vec::new();
        let mut start = Rat::zero();
        for (k, (lo, hi, amount)) in jumps.into_iter().enumerate() {
            out.push(ProfileRecord::Interval { lo: start, hi: lo, value: values[k] });
            out.push(ProfileRecord::Jump { lo, hi, amount });
            start = hi;
        }
        out.push(ProfileRecord::Interval { lo: start, hi: one, value: *values.last().unwrap_or(&0) });
        out
    }

    /// Line-oriented export: `lo hi value` for arcs and
    /// `jump lo hi amount` for jumps.
    pub fn export(&self) -> String {
        let mut s = String::new();
        for r in self.records() {
            match r {
                ProfileRecord::Interval { lo, hi, value } => {
                    let _ = writeln!(s, "{} {} {}", decimal(lo), decimal(hi), value);
                }
                ProfileRecord::Jump { lo, hi, amount } => {
                    let _ = writeln!(s, "jump {} {} {}", decimal(lo), decimal(hi), amount);
                }
            }
        }
        s
    }

    /// `theta,sigma` samples at `θ = j/steps`, `j = 0..=steps`, averaged at
    /// jumps.
    pub fn sample_csv(&self, steps: u32) -> String {
        let steps = steps.max(1) as i64;
        let mut s = String::from("theta,sigma\n");
        for j in 0..=steps {
            let v = self.value_at(UnitAngle::new(j, steps), Side::Averaged);
            let _ = writeln!(s, "{},{}", j as f64 / steps as f64, v.to_f64().unwrap_or(f64::NAN));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> SeifertMatrix {
        SeifertMatrix::from_rows(rows).unwrap()
    }

    fn trefoil() -> SeifertMatrix {
        m(&[vec![-1, 1], vec![0, -1]])
    }

    #[test]
    fn trefoil_examples() {
        let t = trefoil();
        assert_eq!(signature_at(&t, UnitAngle::new(1, 2)).unwrap(), Rat::from_integer(-2));
        assert_eq!(signature_at(&t, UnitAngle::ZERO).unwrap(), Rat::zero());
        assert_eq!(signature_at(&t, UnitAngle::new(1, 6)).unwrap(), Rat::from_integer(-1));
        assert_eq!(signature_at(&t, UnitAngle::new(5, 6)).unwrap(), Rat::from_integer(-1));
        assert_eq!(signature_at(&t, UnitAngle::new(1, 12)).unwrap(), Rat::zero());
        assert_eq!(signature_at(&t, UnitAngle::new(11, 12)).unwrap(), Rat::zero());
    }

    #[test]
    fn trefoil_locus() {
        let loci = jump_loci(&trefoil());
        assert_eq!(loci.len(), 1);
        assert_eq!(loci[0].zpoly(), &IntPoly::from_i64s(&[-1, 1]));
        let one = BigRational::one();
        assert!(loci[0].interval().0 < one && one < loci[0].interval().1);
        let (lo, hi) = loci[0].turns_interval();
        assert!(lo < Rat::new(1, 6) && Rat::new(1, 6) < hi);
        let p = profile_of(&trefoil()).unwrap();
        assert_eq!(p.values(), &[0, -2]);
        assert_eq!(p.jumps(), vec![-2]);
    }

    #[test]
    fn figure_eight_and_unknot() {
        let f8 = m(&[vec![1, 1], vec![0, -1]]);
        assert!(jump_loci(&f8).is_empty());
        let p = profile_of(&f8).unwrap();
        assert!(p.is_zero());
        assert!(jump_loci(&SeifertMatrix::unknot()).is_empty());
        assert_eq!(signature_at(&SeifertMatrix::unknot(), UnitAngle::new(1, 3)).unwrap(), Rat::zero());
    }

    #[test]
    fn trefoil_sum_with_mirror_vanishes() {
        let t = trefoil();
        let p = profile_of(&t.connected_sum(&t.mirror())).unwrap();
        assert!(p.is_zero());
        for (n, d) in [(1, 6), (1, 4), (5, 6), (1, 2)] {
            assert_eq!(p.value_at(UnitAngle::new(n, d), Side::Left), Rat::zero());
        }
    }

    #[test]
    fn one_sided_limits() {
        let p = profile_of(&trefoil()).unwrap();
        let a = UnitAngle::new(1, 6);
        assert_eq!(p.value_at(a, Side::Left), Rat::zero());
        assert_eq!(p.value_at(a, Side::Right), Rat::from_integer(-2));
        let b = UnitAngle::new(5, 6);
        assert_eq!(p.value_at(b, Side::Left), Rat::from_integer(-2));
        assert_eq!(p.value_at(b, Side::Right), Rat::zero());
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64s(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64s(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(9), IntPoly::from_i64s(&[1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(totient(12), 4);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
    }

    #[test]
    fn torus_knot_with_several_loci() {
        // T(2,5): Δ = t⁴ − t³ + t² − t + 1 = Φ₁₀, roots at θ = 1/10, 3/10
        let mut rows = vec![vec![0i64; 4]; 4];
        for i in 0..4 {
            rows[i][i] = -1;
            if i + 1 < 4 {
                rows[i][i + 1] = 1;
            }
        }
        let s = m(&rows);
        let p = profile_of(&s).unwrap();
        assert_eq!(p.loci().len(), 2);
        assert_eq!(p.values(), &[0, -2, -4]);
        assert_eq!(p.value_at(UnitAngle::new(1, 10), Side::Averaged), Rat::from_integer(-1));
        assert_eq!(p.value_at(UnitAngle::new(3, 10), Side::Averaged), Rat::from_integer(-3));
        assert_eq!(p.value_at(UnitAngle::new(1, 5), Side::Averaged), Rat::from_integer(-2));
        assert_eq!(p.value_at(UnitAngle::new(7, 10), Side::Averaged), Rat::from_integer(-3));
    }

    #[test]
    fn certified_path_agrees() {
        let p = profile_of(&trefoil()).unwrap();
        assert_eq!(p.position_certified(Rat::new(1, 6), true), Position::Locus(0));
        assert_eq!(p.position_certified(Rat::new(1, 7), false), Position::Gap(0));
        assert_eq!(p.position_certified(Rat::new(1, 5), false), Position::Gap(1));
        // just past the jump, inside the floating-point margin
        let close = Rat::new(1_000_000_001, 6_000_000_000);
        assert_eq!(p.position(close), Position::Gap(1));
        let close = Rat::new(999_999_999, 6_000_000_000);
        assert_eq!(p.position(close), Position::Gap(0));
    }

    #[test]
    fn export_format() {
        let p = profile_of(&trefoil()).unwrap();
        let text = p.export();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].starts_with("0.000000000000 0.16666"));
        assert!(lines[0].ends_with(" 0"));
        assert!(lines[1].starts_with("jump 0.16666") && lines[1].ends_with(" -2"));
        assert!(lines[2].ends_with(" -2"));
        assert!(lines[3].starts_with("jump 0.83333") && lines[3].ends_with(" 2"));
        assert!(lines[4].ends_with("1.000000000000 0"));
        let csv = p.sample_csv(12);
        assert_eq!(csv.lines().count(), 14);
        assert!(csv.contains("0.5,-2"));
    }
}

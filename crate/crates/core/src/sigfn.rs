//! Signature functions as evaluable combinator trees: matrix-backed profiles,
//! cables, integer combinations, satellites, and rational step functions.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use crate::seifert::SeifertMatrix;
use crate::signature::{profile_of, Side, SignatureError, SignatureProfile, UnitAngle};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SigFnError {
    #[error("cable index must be nonzero")]
    ZeroIndex,
    #[error("duplicate jump angle {0}")]
    DuplicateAngle(UnitAngle),
    #[error("step function has total jump {0}, so it does not close up on the circle")]
    NotPeriodic(Rat),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Custom evaluation capability.
pub trait Evaluate: Send + Sync {
    fn eval(&self, theta: UnitAngle, side: Side) -> Result<Rat, SigFnError>;
}

/// Which constructor produced a function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Zero,
    Matrix,
    Cable,
    Combination,
    Step,
    Custom,
}

#[derive(Clone)]
enum Node {
    Zero,
    Matrix(Arc<SignatureProfile>),
    Cable(SignatureFunction, i64),
    Combination(Vec<(i64, SignatureFunction)>),
    Step(Arc<RationalStepFn>),
    Custom(String, Arc<dyn Evaluate>),
}

/// A function `𝕋 → ℚ` with one-sided limits, evaluated at rational angles.
#[derive(Clone)]
pub struct SignatureFunction(Arc<Node>);

impl SignatureFunction {
    fn node(n: Node) -> Self {
        SignatureFunction(Arc::new(n))
    }

    pub fn zero() -> Self {
        Self::node(Node::Zero)
    }

    pub fn from_seifert(s: &SeifertMatrix) -> Result<Self, SignatureError> {
        Ok(Self::from_profile(profile_of(s)?))
    }

    pub fn from_profile(p: SignatureProfile) -> Self {
        Self::node(Node::Matrix(Arc::new(p)))
    }

    pub fn from_step(step: RationalStepFn) -> Self {
        Self::node(Node::Step(Arc::new(step)))
    }

    pub fn custom(label: impl Into<String>, f: impl Evaluate + 'static) -> Self {
        Self::node(Node::Custom(label.into(), Arc::new(f)))
    }

    pub fn provenance(&self) -> Provenance {
        match &*self.0 {
            Node::Zero => Provenance::Zero,
            Node::Matrix(_) => Provenance::Matrix,
            Node::Cable(..) => Provenance::Cable,
            Node::Combination(_) => Provenance::Combination,
            Node::Step(_) => Provenance::Step,
            Node::Custom(..) => Provenance::Custom,
        }
    }

    pub fn as_profile(&self) -> Option<&SignatureProfile> {
        match &*self.0 {
            Node::Matrix(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_step(&self) -> Option<&RationalStepFn> {
        match &*self.0 {
            Node::Step(s) => Some(s),
            _ => None,
        }
    }

    pub fn eval(&self, theta: UnitAngle, side: Side) -> Result<Rat, SigFnError> {
        match &*self.0 {
            Node::Zero => Ok(Rat::zero()),
            Node::Matrix(p) => Ok(p.value_at(theta, side)),
            Node::Cable(f, k) => {
                let side = if *k < 0 { side.flipped() } else { side };
                f.eval(theta.times(*k), side)
            }
            Node::Combination(terms) => terms.iter().try_fold(Rat::zero(), |acc, (c, f)| {
                Ok(acc + Rat::from_integer(*c) * f.eval(theta, side)?)
            }),
            Node::Step(s) => Ok(s.eval(theta, side)),
            Node::Custom(_, f) => f.eval(theta, side),
        }
    }

    pub fn averaged(&self, theta: UnitAngle) -> Result<Rat, SigFnError> {
        self.eval(theta, Side::Averaged)
    }

    /// `θ ↦ f(kθ)`.
    pub fn cable(&self, k: i64) -> Result<Self, SigFnError> {
        if k == 0 {
            return Err(SigFnError::ZeroIndex);
        }
        Ok(match &*self.0 {
            _ if k == 1 => self.clone(),
            Node::Zero => self.clone(),
            Node::Cable(f, j) => match j.checked_mul(k) {
                Some(jk) => f.cable(jk)?,
                None => Self::node(Node::Cable(self.clone(), k)),
            },
            _ => Self::node(Node::Cable(self.clone(), k)),
        })
    }

    pub fn scale(&self, c: i64) -> Self {
        linear_combine(vec![(c, self.clone())])
    }

    /// Samples `theta,value` at `θ = j/steps` for `j = 0..=steps`.
    pub fn sample_csv(&self, steps: u32) -> Result<String, SigFnError> {
        let steps = steps.max(1) as i64;
        let mut s = String::from("theta,sigma\n");
        for j in 0..=steps {
            let v = self.averaged(UnitAngle::new(j, steps))?;
            let _ = writeln!(s, "{},{}", j as f64 / steps as f64, v.to_f64().unwrap_or(f64::NAN));
        }
        Ok(s)
    }
}

impl Side {
    /// Left and right exchanged, averaged kept.
    pub fn flipped(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::Averaged => Side::Averaged,
        }
    }
}

impl fmt::Debug for SignatureFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SignatureFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Zero => write!(f, "0"),
            Node::Matrix(p) => write!(f, "matrix(genus {})", p.genus()),
            Node::Cable(g, k) => write!(f, "cable({g}, {k})"),
            Node::Combination(terms) => {
                for (i, (c, g)) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{c}*{g}")?;
                }
                if terms.is_empty() {
                    write!(f, "0")?;
                }
                Ok(())
            }
            Node::Step(s) => write!(f, "step({} jumps)", s.jumps().len()),
            Node::Custom(label, _) => write!(f, "{label}"),
        }
    }
}

pub fn cable(f: &SignatureFunction, k: i64) -> Result<SignatureFunction, SigFnError> {
    f.cable(k)
}

/// Pointwise integer combination, evaluated side by side.
pub fn linear_combine(terms: Vec<(i64, SignatureFunction)>) -> SignatureFunction {
    let terms: Vec<_> = terms.into_iter().filter(|(c, f)| *c != 0 && f.provenance() != Provenance::Zero).collect();
    if terms.is_empty() {
        return SignatureFunction::zero();
    }
    SignatureFunction::node(Node::Combination(terms))
}

/// `σ_P + cable(σ_J, c)`, with winding number zero contributing nothing.
pub fn satellite(p: &SignatureFunction, j: &SignatureFunction, c: i64) -> SignatureFunction {
    if c == 0 {
        return p.clone();
    }
    let cabled = j.cable(c).expect("nonzero index");
    linear_combine(vec![(1, p.clone()), (1, cabled)])
}

impl Add for &SignatureFunction {
    type Output = SignatureFunction;
    fn add(self, rhs: Self) -> SignatureFunction {
        linear_combine(vec![(1, self.clone()), (1, rhs.clone())])
    }
}

impl Sub for &SignatureFunction {
    type Output = SignatureFunction;
    fn sub(self, rhs: Self) -> SignatureFunction {
        linear_combine(vec![(1, self.clone()), (-1, rhs.clone())])
    }
}

impl Neg for &SignatureFunction {
    type Output = SignatureFunction;
    fn neg(self) -> SignatureFunction {
        self.scale(-1)
    }
}

/// Piecewise constant function on `[0, 1)` with finitely many rational
/// jumps. The value on `[0, first jump)` is `base`; at `θ = 0` both one-sided
/// values are `base` unless there is a jump at 0, in which case the right
/// value includes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalStepFn {
    base: Rat,
    jumps: BTreeMap<UnitAngle, Rat>,
}

pub fn step_from_jumps(jumps: &[(UnitAngle, Rat)], base: Rat) -> Result<RationalStepFn, SigFnError> {
    let mut map = BTreeMap::new();
    for (a, j) in jumps {
        if map.insert(*a, *j).is_some() {
            return Err(SigFnError::DuplicateAngle(*a));
        }
    }
    map.retain(|_, j| !j.is_zero());
    Ok(RationalStepFn { base, jumps: map })
}

impl RationalStepFn {
    pub fn zero() -> Self {
        RationalStepFn { base: Rat::zero(), jumps: BTreeMap::new() }
    }

    pub fn base(&self) -> Rat {
        self.base
    }

    pub fn jumps(&self) -> Vec<(UnitAngle, Rat)> {
        self.jumps.iter().map(|(a, j)| (*a, *j)).collect()
    }

    pub fn total_jump(&self) -> Rat {
        self.jumps.values().copied().sum()
    }

    pub fn is_periodic(&self) -> bool {
        self.total_jump().is_zero()
    }

    pub fn eval(&self, theta: UnitAngle, side: Side) -> Rat {
        let before: Rat = self.jumps.range(..theta).map(|(_, j)| *j).sum();
        let left = self.base + before;
        let right = left + self.jumps.get(&theta).copied().unwrap_or_else(Rat::zero);
        match side {
            Side::Left => left,
            Side::Right => right,
            Side::Averaged => (left + right) / Rat::from_integer(2),
        }
    }

    pub fn to_function(&self) -> SignatureFunction {
        SignatureFunction::from_step(self.clone())
    }

    /// Integer combination with merged jump lists.
    pub fn combine(terms: &[(i64, &RationalStepFn)]) -> RationalStepFn {
        let mut base = Rat::zero();
        let mut jumps: BTreeMap<UnitAngle, Rat> = BTreeMap::new();
        for (c, f) in terms {
            let c = Rat::from_integer(*c);
            base += c * f.base;
            for (a, j) in &f.jumps {
                *jumps.entry(*a).or_insert_with(Rat::zero) += c * j;
            }
        }
        jumps.retain(|_, j| !j.is_zero());
        RationalStepFn { base, jumps }
    }

    /// Explicit jump transport for `θ ↦ f(kθ)`. Requires total jump zero.
    pub fn cable(&self, k: i64) -> Result<RationalStepFn, SigFnError> {
        if k == 0 {
            return Err(SigFnError::ZeroIndex);
        }
        if !self.is_periodic() {
            return Err(SigFnError::NotPeriodic(self.total_jump()));
        }
        let n = k.unsigned_abs() as i64;
        let sign = Rat::from_integer(k.signum());
        let mut jumps = BTreeMap::new();
        for (a, j) in &self.jumps {
            // preimages of a under θ ↦ kθ
            for i in 0..n {
                let t = (a.turns() * Rat::from_integer(k.signum()) + Rat::from_integer(i)) / Rat::from_integer(n);
                jumps.insert(UnitAngle::from_rat(t), sign * j);
            }
        }
        // value just right of 0 determines the base
        let start = self.eval(UnitAngle::ZERO, if k > 0 { Side::Right } else { Side::Left });
        let at_zero = jumps.get(&UnitAngle::ZERO).copied().unwrap_or_else(Rat::zero);
        Ok(RationalStepFn { base: start - at_zero, jumps })
    }

    /// Lines `num/den jump_num/jump_den`, preceded by `base b` when the base
    /// is nonzero.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        if !self.base.is_zero() {
            let _ = writeln!(s, "base {}", self.base);
        }
        for (a, j) in &self.jumps {
            let _ = writeln!(s, "{a} {}/{}", j.numer(), j.denom());
        }
        s
    }
}

fn parse_rat(s: &str) -> Result<Rat, SigFnError> {
    let err = || SigFnError::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.trim().parse().map_err(|_| err())?)),
    }
}

impl FromStr for RationalStepFn {
    type Err = SigFnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut base = Rat::zero();
        let mut jumps = Vec::new();
        for (lineno, line) in s.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let at = |e: SigFnError| SigFnError::Parse(format!("line {}: {e}", lineno + 1));
            match fields.as_slice() {
                ["base", b] => base = parse_rat(b).map_err(at)?,
                [a, j] => {
                    let angle: UnitAngle =
                        a.parse().map_err(|e: crate::signature::AngleParseError| at(SigFnError::Parse(e.to_string())))?;
                    jumps.push((angle, parse_rat(j).map_err(at)?));
                }
                _ => return Err(at(SigFnError::Parse(format!("expected `angle jump`, got `{line}`")))),
            }
        }
        step_from_jumps(&jumps, base)
    }
}

//! Built-in knot table and the composite obstruction tests.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cooper::{cooper_scan, CooperError, ScanGrid, Violation};
use crate::laurent::{eigen_annihilator, factor_rational, normalize_assoc, Annihilator, AssocClass, LaurentError, LaurentPoly};
use crate::seifert::{parse_matrix, SeifertMatrix};
use crate::sigfn::{SigFnError, SignatureFunction};
use crate::signature::{Side, SignatureError, UnitAngle};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown knot `{0}`")]
    UnknownKnot(String),
    #[error("m = {0} is excluded; m must not be 0 or -1")]
    BadM(i64),
    #[error("catalog data: {0}")]
    Data(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Cooper(#[from] CooperError),
    #[error(transparent)]
    Eval(#[from] SigFnError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub seifert: SeifertMatrix,
    pub alexander: AssocClass,
    pub notes: String,
}

impl CatalogEntry {
    pub fn signature_function(&self) -> Result<SignatureFunction, SignatureError> {
        SignatureFunction::from_seifert(&self.seifert)
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

const BUILTIN: &str = include_str!("../data/catalog.txt");

impl Catalog {
    /// The shipped table, parsed and validated once.
    pub fn builtin() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::parse(BUILTIN).expect("built-in catalog is valid"))
    }

    /// Parses blocks of `name`/`matrix`/`alexander`/`notes` lines and checks
    /// each stored Alexander polynomial against the matrix.
    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let mut entries = Vec::new();
        let mut block: Vec<(usize, &str)> = Vec::new();
        let lines = text.lines().enumerate().chain(std::iter::once((usize::MAX, "")));
        for (i, line) in lines {
            let line = line.trim();
            if line.starts_with('#') {
                continue;
            }
            if line.is_empty() {
                if !block.is_empty() {
                    entries.push(parse_entry(&block)?);
                    block.clear();
                }
                continue;
            }
            block.push((i + 1, line));
        }
        let mut names: Vec<&str> = entries.iter().map(|e: &CatalogEntry| e.name.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(CatalogError::Data(format!("duplicate entry `{}`", w[0])));
        }
        Ok(Catalog { entries })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries.iter().find(|e| e.name == name).ok_or_else(|| CatalogError::UnknownKnot(name.into()))
    }
}

fn parse_entry(block: &[(usize, &str)]) -> Result<CatalogEntry, CatalogError> {
    let (mut name, mut matrix, mut alexander, mut notes) = (None, None, None, String::new());
    for &(lineno, line) in block {
        let (key, value) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let value = value.trim();
        let err = |msg: String| CatalogError::Data(format!("line {lineno}: {msg}"));
        match key {
            "name" => name = Some(value.to_string()),
            "matrix" => {
                let rows: Vec<&str> = value.split(';').map(str::trim).filter(|r| !r.is_empty()).collect();
                let text = format!("{}\n{}", rows.len(), rows.join("\n"));
                let m = parse_matrix(&text).map_err(|e| err(e.to_string()))?;
                matrix = Some(SeifertMatrix::validate(m).map_err(|e| err(e.to_string()))?);
            }
            "alexander" => {
                let p: LaurentPoly = value.parse().map_err(|e: LaurentError| err(e.to_string()))?;
                alexander = Some(normalize_assoc(&p));
            }
            "notes" => notes = value.to_string(),
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    let first = block.first().map(|b| b.0).unwrap_or(0);
    let missing = |k: &str| CatalogError::Data(format!("entry at line {first}: missing `{k}`"));
    let name = name.ok_or_else(|| missing("name"))?;
    let seifert = matrix.ok_or_else(|| missing("matrix"))?;
    let alexander = alexander.ok_or_else(|| missing("alexander"))?;
    let computed = seifert.alexander();
    if computed != alexander {
        return Err(CatalogError::Data(format!(
            "{name}: matrix gives Alexander polynomial {computed}, table says {alexander}"
        )));
    }
    Ok(CatalogEntry { name, seifert, alexander, notes })
}

pub fn catalog_lookup(name: &str) -> Result<&'static CatalogEntry, CatalogError> {
    Catalog::builtin().get(name)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Violated,
    Inapplicable,
    BoundedPass,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Violated => "violated",
            Verdict::Inapplicable => "inapplicable",
            Verdict::BoundedPass => "bounded-pass",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    CooperViolation(Violation),
    NonzeroSignature { theta: UnitAngle, value: Rat },
    Annihilated { factor: AssocClass, a: BigInt, b: BigInt, p: u32 },
    NotAnnihilated { factor: AssocClass, bound: u32 },
    /// Every scanned point gave zero.
    ScanBounds { p_max: i64, c_max: i64, points: usize },
    Sampled { count: usize },
    /// The signature function is a matrix profile with every step value 0.
    CertifiedZero,
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::CooperViolation(v) => write!(f, "p={} c={} r={} sum={}", v.p, v.c, v.r, v.sum),
            Evidence::NonzeroSignature { theta, value } => write!(f, "sigma({theta}) = {value}"),
            Evidence::Annihilated { factor, a, b, p } => write!(f, "{factor} divides {a}*t^{p} - ({b})"),
            Evidence::NotAnnihilated { factor, bound } => {
                write!(f, "{factor} divides no binomial a*t^p - b with p <= {bound}")
            }
            Evidence::ScanBounds { p_max, c_max, points } => {
                write!(f, "all {points} points with p <= {p_max}, c <= {c_max} vanish")
            }
            Evidence::Sampled { count } => write!(f, "{count} sampled angles vanish"),
            Evidence::CertifiedZero => write!(f, "no step value is nonzero"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
    pub parameters: Vec<(String, String)>,
}

fn check_m(m: i64) -> Result<(), CatalogError> {
    if m == 0 || m == -1 {
        Err(CatalogError::BadM(m))
    } else {
        Ok(())
    }
}

/// Cooper `(m, m+1)` scan of `σ_J` on the bounded grid.
pub fn derivative_obstruction(
    m: i64,
    sigma_j: &SignatureFunction,
    p_max: i64,
    c_max: i64,
) -> Result<ObstructionReport, CatalogError> {
    check_m(m)?;
    let grid = ScanGrid::new(p_max, c_max);
    let violations = cooper_scan(sigma_j, m, m + 1, &grid)?;
    let parameters = vec![
        ("m".into(), m.to_string()),
        ("n".into(), (m + 1).to_string()),
        ("p_max".into(), p_max.to_string()),
        ("c_max".into(), c_max.to_string()),
    ];
    if violations.is_empty() {
        let points = crate::cooper::scan_points(m, m + 1, &grid).len();
        Ok(ObstructionReport {
            verdict: Verdict::BoundedPass,
            evidence: vec![Evidence::ScanBounds { p_max, c_max, points }],
            parameters,
        })
    } else {
        Ok(ObstructionReport {
            verdict: Verdict::Violated,
            evidence: violations.into_iter().map(Evidence::CooperViolation).collect(),
            parameters,
        })
    }
}

/// The first `count` reduced fractions `c/q ∈ (0, 1)`, ordered by `q` then
/// `c`. Longer lists extend shorter ones.
pub fn farey_samples(count: usize) -> Vec<UnitAngle> {
    let mut out = Vec::with_capacity(count);
    let mut q = 2i64;
    while out.len() < count {
        for c in 1..q {
            if out.len() == count {
                break;
            }
            if num_integer::gcd(c, q) == 1 {
                out.push(UnitAngle::new(c, q));
            }
        }
        q += 1;
    }
    out
}

/// Tests whether `σ_J ≡ 0`, the conclusion forced when some factor of
/// `Δ_R` divides no binomial `a·t^p − b`.
pub fn doubling_obstruction(
    delta_r: &LaurentPoly,
    sigma_j: &SignatureFunction,
    p_max_poly: u32,
    sample_count: usize,
) -> Result<ObstructionReport, CatalogError> {
    if delta_r.is_zero() {
        return Err(CatalogError::InvalidInput("Δ_R must be nonzero".into()));
    }
    let parameters = vec![
        ("delta_r".into(), delta_r.to_string()),
        ("p_max_poly".into(), p_max_poly.to_string()),
        ("samples".into(), sample_count.to_string()),
    ];
    let mut evidence = Vec::new();
    let mut applicable = false;
    for f in factor_rational(delta_r)?.factors {
        match eigen_annihilator(f.poly.poly(), p_max_poly)? {
            Annihilator::Found { a, b, p } => evidence.push(Evidence::Annihilated { factor: f.poly, a, b, p }),
            Annihilator::NoneUpToBound { p_max } => {
                applicable = true;
                evidence.push(Evidence::NotAnnihilated { factor: f.poly, bound: p_max });
            }
        }
    }
    if !applicable {
        return Ok(ObstructionReport { verdict: Verdict::Inapplicable, evidence, parameters });
    }
    if let Some(profile) = sigma_j.as_profile() {
        if profile.is_zero() {
            evidence.push(Evidence::CertifiedZero);
            return Ok(ObstructionReport { verdict: Verdict::BoundedPass, evidence, parameters });
        }
        if let Some((theta, value)) = nonzero_profile_witness(sigma_j) {
            evidence.push(Evidence::NonzeroSignature { theta, value });
            return Ok(ObstructionReport { verdict: Verdict::Violated, evidence, parameters });
        }
    }
    for theta in farey_samples(sample_count) {
        let value = sigma_j.averaged(theta)?;
        if !value.is_zero() {
            evidence.push(Evidence::NonzeroSignature { theta, value });
            return Ok(ObstructionReport { verdict: Verdict::Violated, evidence, parameters });
        }
    }
    evidence.push(Evidence::Sampled { count: sample_count });
    Ok(ObstructionReport { verdict: Verdict::BoundedPass, evidence, parameters })
}

/// A rational angle strictly inside an arc with nonzero step value.
fn nonzero_profile_witness(f: &SignatureFunction) -> Option<(UnitAngle, Rat)> {
    let profile = f.as_profile()?;
    let loci = profile.loci();
    let values = profile.values();
    let k = values.iter().position(|v| *v != 0)?;
    let lo = if k == 0 { Rat::zero() } else { loci[k - 1].turns_interval().1 };
    let hi = if k == loci.len() { Rat::new(1, 2) } else { loci[k].turns_interval().0 };
    let theta = UnitAngle::from_rat((lo + hi) / Rat::from_integer(2));
    let value = profile.value_at(theta, Side::Averaged);
    (!value.is_zero()).then_some((theta, value))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sufficiency {
    Pass,
    Fail { theta: UnitAngle, lhs: Rat, rhs: Rat },
}

/// Checks `σ_J(θ) = σ_T(mθ) − σ_T((m+1)θ)` at each sample.
pub fn sufficiency_verify(
    sigma_j: &SignatureFunction,
    sigma_t: &SignatureFunction,
    m: i64,
    samples: &[UnitAngle],
) -> Result<Sufficiency, CatalogError> {
    check_m(m)?;
    for &theta in samples {
        let lhs = sigma_j.averaged(theta)?;
        let rhs = sigma_t.averaged(theta.times(m))? - sigma_t.averaged(theta.times(m + 1))?;
        if lhs != rhs {
            return Ok(Sufficiency::Fail { theta, lhs, rhs });
        }
    }
    Ok(Sufficiency::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(name: &str) -> SignatureFunction {
        catalog_lookup(name).unwrap().signature_function().unwrap()
    }

    #[test]
    fn lookups() {
        let u = catalog_lookup("unknot").unwrap();
        assert_eq!(u.seifert.size(), 0);
        assert!(u.alexander.is_one());
        let t = catalog_lookup("3_1").unwrap();
        assert_eq!(t.seifert.matrix().rows(), vec![vec![-1, 1], vec![0, -1]]);
        assert_eq!(t.alexander.to_string(), "1:0 -1:1 1:2");
        assert_eq!(catalog_lookup("4_1").unwrap().alexander.to_string(), "1:0 -3:1 1:2");
        assert!(matches!(catalog_lookup("10_1"), Err(CatalogError::UnknownKnot(_))));
        assert!(Catalog::builtin().entries().len() >= 12);
    }

    #[test]
    fn validation_rejects_wrong_alexander() {
        let bad = "name x\nmatrix -1 1; 0 -1\nalexander 1:0 -3:1 1:2\n";
        assert!(matches!(Catalog::parse(bad), Err(CatalogError::Data(_))));
        let dup = "name x\nmatrix\nalexander 1:0\n\nname x\nmatrix\nalexander 1:0\n";
        assert!(Catalog::parse(dup).is_err());
        let key = "name x\nmatrix\nalexander 1:0\ncolor red\n";
        assert!(Catalog::parse(key).is_err());
    }

    #[test]
    fn derivative_examples() {
        let r = derivative_obstruction(1, &SignatureFunction::zero(), 20, 20).unwrap();
        assert_eq!(r.verdict, Verdict::BoundedPass);
        let t = sigma("3_1");
        let r = derivative_obstruction(1, &t, 10, 10).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert!(r.evidence.contains(&Evidence::CooperViolation(Violation { p: 5, c: 1, r: 4, sum: Rat::from_integer(-8) })));
        let j = &t.cable(1).unwrap() - &t.cable(2).unwrap();
        assert_eq!(derivative_obstruction(1, &j, 50, 50).unwrap().verdict, Verdict::BoundedPass);
        assert!(matches!(derivative_obstruction(0, &t, 5, 5), Err(CatalogError::BadM(0))));
        assert!(matches!(derivative_obstruction(-1, &t, 5, 5), Err(CatalogError::BadM(-1))));
    }

    #[test]
    fn doubling_examples() {
        let fig8: LaurentPoly = "1:0 -3:1 1:2".parse().unwrap();
        let r = doubling_obstruction(&fig8, &sigma("4_1"), 20, 100).unwrap();
        assert_eq!(r.verdict, Verdict::BoundedPass);
        assert!(r.evidence.contains(&Evidence::CertifiedZero));
        let r = doubling_obstruction(&fig8, &sigma("3_1"), 20, 100).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        let stevedore: LaurentPoly = "2:0 -5:1 2:2".parse().unwrap();
        let r = doubling_obstruction(&stevedore, &sigma("3_1"), 20, 100).unwrap();
        assert_eq!(r.verdict, Verdict::Inapplicable);
        // a combinator tree falls back to sampling
        let t = sigma("3_1");
        let r = doubling_obstruction(&fig8, &t.cable(1).unwrap().scale(1), 20, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.evidence.last(), Some(&Evidence::NonzeroSignature { theta: UnitAngle::new(1, 2), value: Rat::from_integer(-2) }));
    }

    #[test]
    fn sufficiency_examples() {
        let samples = farey_samples(500);
        assert_eq!(samples.len(), 500);
        let z = SignatureFunction::zero();
        assert_eq!(sufficiency_verify(&z, &z, 1, &samples).unwrap(), Sufficiency::Pass);
        let t = sigma("3_1");
        let j = &t.cable(1).unwrap() - &t.cable(2).unwrap();
        assert_eq!(sufficiency_verify(&j, &t, 1, &samples).unwrap(), Sufficiency::Pass);
        match sufficiency_verify(&t, &z, 1, &samples).unwrap() {
            Sufficiency::Fail { theta, .. } => assert_eq!(theta, UnitAngle::new(1, 2)),
            Sufficiency::Pass => panic!("expected failure"),
        }
        assert!(matches!(sufficiency_verify(&z, &z, -1, &samples), Err(CatalogError::BadM(-1))));
    }

    #[test]
    fn farey_prefixes_nest() {
        let a = farey_samples(30);
        let b = farey_samples(100);
        assert_eq!(&b[..30], &a[..]);
        assert_eq!(a[0], UnitAngle::new(1, 2));
        assert_eq!(a[1], UnitAngle::new(1, 3));
    }
}

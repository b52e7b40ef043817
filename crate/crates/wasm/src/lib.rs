//! Browser bindings for the demo page in `www/`.
//!
//! Each export wraps a plain function returning `Result<_, String>` so the
//! logic can be tested natively.

use concordia::catalog::Catalog;
use concordia::cooper::{cooper_sum, CooperParams};
use concordia::seifert::SeifertMatrix;
use concordia::sigfn::SignatureFunction;
use concordia::signature::UnitAngle;
use concordia::Rat;
use wasm_bindgen::prelude::*;

/// `source` is a catalog name, or `genus1` for `[[0, λ], [λ+1, ℓ]]`.
fn seifert(source: &str, lambda: i32, ell: i32) -> Result<SeifertMatrix, String> {
    if source == "genus1" {
        return Ok(SeifertMatrix::genus1(lambda.into(), ell.into()));
    }
    Catalog::builtin().get(source).map(|e| e.seifert.clone()).map_err(|e| e.to_string())
}

fn function(source: &str, lambda: i32, ell: i32, cable: i32) -> Result<SignatureFunction, String> {
    let f = SignatureFunction::from_seifert(&seifert(source, lambda, ell)?).map_err(|e| e.to_string())?;
    if cable == 1 {
        Ok(f)
    } else {
        f.cable(cable.into()).map_err(|e| e.to_string())
    }
}

fn to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn curve(source: &str, lambda: i32, ell: i32, cable: i32, steps: u32) -> Result<Vec<f64>, String> {
    let f = function(source, lambda, ell, cable)?;
    let steps = steps.clamp(1, 20_000) as i64;
    (0..=steps)
        .map(|j| f.averaged(UnitAngle::new(j, steps)).map(to_f64).map_err(|e| e.to_string()))
        .collect()
}

/// Cooper sums on `p = 2..=pmax`, `c = 1..=cmax`, row-major by `p`; NaN
/// where `(m, n, p, c)` is not admissible.
#[allow(clippy::too_many_arguments)]
pub fn grid(source: &str, lambda: i32, ell: i32, cable: i32, m: i32, n: i32, pmax: u32, cmax: u32) -> Result<Vec<f64>, String> {
    let f = function(source, lambda, ell, cable)?;
    let (pmax, cmax) = (pmax.clamp(2, 200) as i64, cmax.clamp(1, 200) as i64);
    let mut out = Vec::with_capacity(((pmax - 1) * cmax) as usize);
    for p in 2..=pmax {
        for c in 1..=cmax {
            out.push(match CooperParams::new(m.into(), n.into(), p, c) {
                Ok(params) => to_f64(cooper_sum(&f, &params).map_err(|e| e.to_string())?),
                Err(_) => f64::NAN,
            });
        }
    }
    Ok(out)
}

pub fn alexander_text(source: &str, lambda: i32, ell: i32) -> Result<String, String> {
    Ok(seifert(source, lambda, ell)?.alexander().poly().pretty())
}

#[wasm_bindgen]
pub fn signature_curve(source: &str, lambda: i32, ell: i32, cable: i32, steps: u32) -> Result<Vec<f64>, JsValue> {
    curve(source, lambda, ell, cable, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn cooper_grid(
    source: &str,
    lambda: i32,
    ell: i32,
    cable: i32,
    m: i32,
    n: i32,
    pmax: u32,
    cmax: u32,
) -> Result<Vec<f64>, JsValue> {
    grid(source, lambda, ell, cable, m, n, pmax, cmax).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn alexander(source: &str, lambda: i32, ell: i32) -> Result<String, JsValue> {
    alexander_text(source, lambda, ell).map_err(|e| JsValue::from_str(&e))
}

/// Catalog names, one per line.
#[wasm_bindgen]
pub fn catalog_names() -> String {
    Catalog::builtin().entries().iter().map(|e| e.name.as_str()).collect::<Vec<_>>().join("\n")
}

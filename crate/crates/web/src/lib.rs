//! wasm-bindgen bindings behind `www/index.html`: a 1F1 curve plotter, an
//! operator flow viewer (RK4 against the closed form) and a one-shot formal
//! identity check. Every export takes plain numbers or strings and returns
//! either a float array or a JSON string.

use hypersym::hypfun::{f11_float, DEFAULT_TERM_CAP};
use hypersym::identities::{record, verify_formal, Orders, Outcome, ParamPoint};
use hypersym::liealg::{Family, FlowPoint, FlowSpec, OperatorId, DEFAULT_SINGULAR_MARGIN};
use hypersym::ExactScalar;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// `samples` values of 1F1(a;b;x) on an even grid over `[x_min, x_max]`;
/// NaN where the float sum does not converge.
pub fn curve(a: f64, b: f64, x_min: f64, x_max: f64, samples: usize) -> Result<Vec<f64>, String> {
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(format!("b = {b} is a pole"));
    }
    let n = samples.clamp(2, 4096);
    let step = (x_max - x_min) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let x = x_min + step * i as f64;
            f11_float(a, b, x, 1e-14, DEFAULT_TERM_CAP).map_or(f64::NAN, |r| r.value)
        })
        .collect())
}

#[derive(Serialize)]
struct Trajectory {
    system: Vec<String>,
    variables: Vec<String>,
    alpha: Vec<f64>,
    rk4: Vec<Vec<f64>>,
    exact: Vec<Vec<f64>>,
    max_deviation: f64,
}

fn scalar(name: &str, s: &str) -> Result<ExactScalar, String> {
    s.trim().parse().map_err(|e| format!("{name}: {e}"))
}

/// RK4 trajectory of an operator flow next to its closed form, as JSON.
/// `start` is `"x,y,z,u,t"` with rational entries.
pub fn trajectory(family: &str, operator: &str, start: &str, alpha: f64, step: f64) -> Result<String, String> {
    let family: Family = family.parse().map_err(|e| format!("{e}"))?;
    let op: OperatorId = operator.parse().map_err(|e| format!("{e}"))?;
    let coords: Vec<ExactScalar> = start.split(',').map(|s| scalar("start", s)).collect::<Result<_, _>>()?;
    let coords: [ExactScalar; 5] = coords.try_into().map_err(|_| "start needs five coordinates x,y,z,u,t".to_string())?;
    let start = FlowPoint::new(coords);
    let spec = FlowSpec::new(family, op).map_err(|e| e.to_string())?;
    let steps = spec.rk4_trajectory(&start, alpha, step).map_err(|e| e.to_string())?;
    let mut out = Trajectory {
        system: spec.characteristic_system(),
        variables: family.variables().iter().map(|v| v.to_string()).chain(["M".to_string()]).collect(),
        alpha: Vec::with_capacity(steps.len()),
        rk4: Vec::with_capacity(steps.len()),
        exact: Vec::with_capacity(steps.len()),
        max_deviation: 0.0,
    };
    for (a, state) in steps {
        let exact = spec.closed_form(&start, a, DEFAULT_SINGULAR_MARGIN).map_err(|e| e.to_string())?;
        for (u, v) in state.iter().zip(&exact) {
            out.max_deviation = out.max_deviation.max((u - v).abs());
        }
        out.alpha.push(a);
        out.rk4.push(state);
        out.exact.push(exact);
    }
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct IdentityCheck<'a> {
    id: &'a str,
    variant: String,
    formula: &'a str,
    verified: bool,
    witness: Option<hypersym::identities::Witness>,
}

/// Formal check of one catalogued identity at `(a, b[, c])`, as JSON.
pub fn identity(id: &str, variant: &str, a: &str, b: &str, c: &str, n: u32, m: u32) -> Result<String, String> {
    let rec = record(id.parse().map_err(|e| format!("{e}"))?, variant.parse().map_err(|e| format!("{e}"))?)
        .map_err(|e| e.to_string())?;
    let c = if c.trim().is_empty() { None } else { Some(scalar("c", c)?) };
    let point = ParamPoint::new(scalar("a", a)?, scalar("b", b)?, c);
    let outcome = verify_formal(&rec, &point, Orders::new(n.min(12), m.min(24))).map_err(|e| e.to_string())?;
    let check = IdentityCheck {
        id: rec.id.as_str(),
        variant: rec.variant.to_string(),
        formula: rec.formula,
        verified: outcome == Outcome::Verified,
        witness: outcome.witness().cloned(),
    };
    serde_json::to_string(&check).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn f11_curve(a: f64, b: f64, x_min: f64, x_max: f64, samples: usize) -> Result<Vec<f64>, JsValue> {
    curve(a, b, x_min, x_max, samples).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn flow_trajectory(family: &str, operator: &str, start: &str, alpha: f64, step: f64) -> Result<String, JsValue> {
    trajectory(family, operator, start, alpha, step).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn verify_identity(id: &str, variant: &str, a: &str, b: &str, c: &str, n: u32, m: u32) -> Result<String, JsValue> {
    identity(id, variant, a, b, c, n, m).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_matches_exponential() {
        let ys = curve(1.0, 1.0, 0.0, 1.0, 11).unwrap();
        assert_eq!(ys.len(), 11);
        assert!((ys[10] - std::f64::consts::E).abs() < 1e-13);
        assert!(curve(1.0, -2.0, 0.0, 1.0, 5).is_err());
    }

    #[test]
    fn trajectory_json() {
        let json = trajectory("f11", "E_ab", "1,2,3,1/2,1/3", 0.1, 1e-2).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["alpha"].as_array().unwrap().len(), 11);
        assert!(v["max_deviation"].as_f64().unwrap() < 1e-12);
        assert!(trajectory("f11", "E_c", "1,2,3,1/2,1/3", 0.1, 1e-2).is_err());
        assert!(trajectory("f11", "E_a", "1,2", 0.1, 1e-2).is_err());
    }

    #[test]
    fn identity_json() {
        let ok: serde_json::Value = serde_json::from_str(&identity("I-F11-SHIFT", "as_stated", "1/2", "4/3", "", 3, 6).unwrap()).unwrap();
        assert_eq!(ok["verified"], true);
        let bad: serde_json::Value =
            serde_json::from_str(&identity("I-F11-LOWER-B", "as_stated", "1/2", "4/3", "", 2, 4).unwrap()).unwrap();
        assert_eq!(bad["verified"], false);
        assert_eq!(bad["witness"]["monomial"], "χ");
    }
}

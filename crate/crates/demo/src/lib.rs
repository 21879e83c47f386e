//! Browser bindings: the disc figure, the jump profile of the explicit map,
//! and the cone product check. Each export returns a string (SVG or JSON);
//! errors come back as rejected values with the message.

use coarsehyp::cone::{build_cone, cone_boundary_product_check, CompactModel};
use coarsehyp::maps::{jump_bound, measured_jump};
use coarsehyp::render::{render, Figure};
use wasm_bindgen::prelude::*;

pub fn figure_svg(figure: &str, depth: usize) -> Result<String, String> {
    let figure: Figure = figure.parse().map_err(|e: coarsehyp::Error| e.to_string())?;
    render(figure, depth, None).map_err(|e| e.to_string())
}

/// `[{n, bound, measured}]` for `n = 1..=max_n`.
pub fn jump_profile_json(max_n: usize) -> Result<String, String> {
    if !(1..=12).contains(&max_n) {
        return Err("max_n must lie in 1..=12".into());
    }
    let rows = (1..=max_n)
        .map(|n| {
            Ok(serde_json::json!({
                "n": n,
                "bound": jump_bound(n).map_err(|e| e.to_string())?,
                "measured": measured_jump(n).map_err(|e| e.to_string())?,
            }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(serde_json::Value::Array(rows).to_string())
}

/// Worst deviation between graph products and `log₂(1/d)` on the top level.
pub fn cone_products_json(model: &str, levels: usize, slack: f64) -> Result<String, String> {
    let model = match model {
        "cantor" => CompactModel::Cantor,
        "interval" => CompactModel::Interval,
        "circle" => CompactModel::Circle,
        other => return Err(format!("unknown model {other:?}")),
    };
    if !(3..=7).contains(&levels) {
        return Err("levels must lie in 3..=7".into());
    }
    let g = build_cone(&model, levels).map_err(|e| e.to_string())?;
    let v = cone_boundary_product_check(&g, None, slack).map_err(|e| e.to_string())?;
    Ok(serde_json::json!({
        "model": model.name(),
        "levels": levels,
        "vertices": g.len(),
        "pass": v.pass,
        "worst_deviation": v.worst_deviation,
        "pairs": v.pairs,
    })
    .to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn figure(figure: &str, depth: usize) -> Result<String, JsValue> {
    js(figure_svg(figure, depth))
}

#[wasm_bindgen]
pub fn jump_profile(max_n: usize) -> Result<String, JsValue> {
    js(jump_profile_json(max_n))
}

#[wasm_bindgen]
pub fn cone_products(model: &str, levels: usize, slack: f64) -> Result<String, JsValue> {
    js(cone_products_json(model, levels, slack))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_has_segments() {
        let svg = figure_svg("figure2", 2).unwrap();
        assert_eq!(svg.matches("class=\"edge\"").count(), 4 + 12);
        assert!(figure_svg("figure3", 2).is_err());
        assert!(figure_svg("figure1", 8).is_err());
    }

    #[test]
    fn jump_profile_peaks_at_two() {
        let rows: serde_json::Value = serde_json::from_str(&jump_profile_json(5).unwrap()).unwrap();
        let bounds: Vec<f64> = rows.as_array().unwrap().iter().map(|r| r["bound"].as_f64().unwrap()).collect();
        let top = bounds.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(top, bounds[1]);
        assert!(jump_profile_json(0).is_err());
    }

    #[test]
    fn cone_products_report() {
        let v: serde_json::Value = serde_json::from_str(&cone_products_json("cantor", 5, 2.0).unwrap()).unwrap();
        assert_eq!(v["vertices"], 63);
        assert_eq!(v["pass"], true);
        assert!(cone_products_json("sphere", 5, 2.0).is_err());
    }
}

//! wasm-bindgen exports for `www/index.html`. Each export takes a group spec
//! (the same JSON the CLI reads) and returns a string; errors become thrown
//! JS strings.

use eostrata::eo_order::{build_eo_poset, eo_type, JConvention};
use eostrata::rootdata::{build_root_system, GroupSpec};
use eostrata::siegel::Siegel;
use eostrata::strata::enumerate_bgmu;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// `ᴶW` with lengths plus the Hasse diagram, as JSON.
pub fn eo_poset(spec_json: &str) -> Result<String, String> {
    let spec = GroupSpec::from_json(spec_json).map_err(|e| e.to_string())?;
    let rs = build_root_system(&spec).map_err(|e| e.to_string())?;
    let mu = rs.flatten(&spec.mu).map_err(|e| e.to_string())?;
    let poset = build_eo_poset(&rs, &eo_type(&rs, &mu, JConvention::FrobeniusTwisted)).map_err(|e| e.to_string())?;
    let rows: Vec<_> = poset
        .elements()
        .iter()
        .map(|w| json!({ "w": rs.fmt_weyl(w), "length": rs.length(w) }))
        .collect();
    Ok(json!({ "strata": rows, "hasse": poset.hasse_diagram(), "dot": poset.to_dot() }).to_string())
}

/// `B(G,μ)` in increasing lexicographic order with its cover relations.
pub fn newton_set(spec_json: &str) -> Result<String, String> {
    let spec = GroupSpec::from_json(spec_json).map_err(|e| e.to_string())?;
    let rs = build_root_system(&spec).map_err(|e| e.to_string())?;
    let mu = rs.flatten(&spec.mu).map_err(|e| e.to_string())?;
    let bg = enumerate_bgmu(&rs, &mu).map_err(|e| e.to_string())?;
    let rows: Vec<_> = bg
        .elements
        .iter()
        .enumerate()
        .map(|(i, b)| json!({ "label": b.describe(&rs), "basic": i == bg.basic, "mu_ordinary": i == bg.mu_ordinary }))
        .collect();
    Ok(json!({ "newton": rows, "covers": bg.hasse() }).to_string())
}

/// The Siegel table for genus `g` as CSV.
pub fn siegel_csv(g: usize) -> Result<String, String> {
    let s = Siegel::new(g).map_err(|e| e.to_string())?;
    let poset = build_eo_poset(s.root_system(), s.j()).map_err(|e| e.to_string())?;
    s.table_csv(&poset).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = eoPoset)]
pub fn eo_poset_js(spec_json: &str) -> Result<String, JsValue> {
    eo_poset(spec_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = newtonSet)]
pub fn newton_set_js(spec_json: &str) -> Result<String, JsValue> {
    newton_set(spec_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = siegelTable)]
pub fn siegel_table_js(g: u32) -> Result<String, JsValue> {
    // genus 6 already has 64 strata; larger tables are not useful on a page
    if g > 6 {
        return Err(JsValue::from_str("genus must be at most 6"));
    }
    siegel_csv(g as usize).map_err(|e| JsValue::from_str(&e))
}

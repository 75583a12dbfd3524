//! Browser bindings. Every export takes plain numbers or config text and
//! returns a JSON string for the page script.

use std::f64::consts::PI;

use serde_json::{Value, json};
use torus_layer::cli::{parse_config, profile_angles, resolved_entries};
use torus_layer::{Model, TorusGeometry, build_basis, solve};
use wasm_bindgen::prelude::*;

fn to_js(r: torus_layer::Result<Value>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

/// `V_C`, `h` and `k` on the surface over `θ ∈ [0, π]`.
pub fn curvature_profile_value(major_radius: f64, minor_radius: f64, samples: usize) -> torus_layer::Result<Value> {
    let geom = TorusGeometry::new(major_radius, minor_radius)?;
    let thetas = profile_angles(samples.max(2));
    let mut vc = Vec::with_capacity(thetas.len());
    let mut h = Vec::with_capacity(thetas.len());
    let mut k = Vec::with_capacity(thetas.len());
    for &t in &thetas {
        let c = geom.curvatures(geom.point(t, 0.0)?);
        vc.push(geom.curvature_potential(t));
        h.push(c.h);
        k.push(c.k);
    }
    Ok(json!({ "theta": thetas, "vc": vc, "h": h, "k": k }))
}

/// Low-lying spectrum for a `key = value` config.
pub fn solve_spectrum_value(config: &str) -> torus_layer::Result<Value> {
    let cfg = parse_config(Some(config), &[])?.solve_config()?;
    let result = solve(&cfg)?;
    let config: serde_json::Map<String, Value> = resolved_entries(&cfg)
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect();
    let states: Vec<Value> = result
        .states
        .iter()
        .map(|s| json!({ "E": s.energy, "beta": s.beta, "q_sector": s.q_sector }))
        .collect();
    Ok(json!({
        "config": config,
        "ground_sector_betas": result.ground_sector_betas(),
        "states": states,
        "asymmetry": result.diagnostics.asymmetry,
    }))
}

/// `ψ(θ, q)` of one state on a `theta_samples × q_samples` grid over the
/// full circle and the layer's quadrature interval.
pub fn wavefunction_slice_value(
    config: &str,
    state: usize,
    theta_samples: usize,
    q_samples: usize,
) -> torus_layer::Result<Value> {
    let cfg = parse_config(Some(config), &[])?.solve_config()?;
    let geom = cfg.validate()?;
    let result = solve(&cfg)?;
    let coefficients = &result
        .states
        .get(state)
        .ok_or_else(|| torus_layer::Error::Argument(format!("state {state} out of range")))?
        .coefficients;
    let basis = build_basis(&cfg.basis, cfg.confinement.as_ref())?;
    let n_theta = theta_samples.max(2);
    let thetas: Vec<f64> = (0..n_theta).map(|i| 2.0 * PI * i as f64 / (n_theta - 1) as f64).collect();
    let qs: Vec<f64> = match (cfg.model(), cfg.confinement) {
        (Model::Layer, Some(conf)) => {
            let (lo, hi) = conf.interval(&geom, cfg.quadrature.sigma_multiple)?;
            let n = q_samples.max(2);
            (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
        }
        _ => vec![0.0],
    };
    let psi: Vec<Vec<f64>> = qs
        .iter()
        .map(|&q| {
            thetas
                .iter()
                .map(|&t| basis.iter().zip(coefficients).map(|(f, c)| c * f.value(t, q)).sum())
                .collect()
        })
        .collect();
    Ok(json!({
        "theta": thetas,
        "q": qs,
        "psi": psi,
        "beta": result.states[state].beta,
    }))
}

#[wasm_bindgen]
pub fn curvature_profile(major_radius: f64, minor_radius: f64, samples: usize) -> Result<String, JsError> {
    to_js(curvature_profile_value(major_radius, minor_radius, samples))
}

#[wasm_bindgen]
pub fn solve_spectrum(config: &str) -> Result<String, JsError> {
    to_js(solve_spectrum_value(config))
}

#[wasm_bindgen]
pub fn wavefunction_slice(config: &str, state: usize, theta_samples: usize, q_samples: usize) -> Result<String, JsError> {
    to_js(wavefunction_slice_value(config, state, theta_samples, q_samples))
}

#[cfg(test)]
mod tests {
    use super::*;

    const L25: &str = "model = layer\nconfinement.kind = hardwall_centered\nconfinement.L_angstrom = 25\n";

    #[test]
    fn profile_endpoints() {
        let v = curvature_profile_value(500.0, 250.0, 3).unwrap();
        assert_eq!(v["theta"].as_array().unwrap().len(), 3);
        assert!((v["vc"][1].as_f64().unwrap() + 2.0e-6).abs() < 1e-15);
        assert!((v["h"][1].as_f64().unwrap() - 0.002).abs() < 1e-12);
        assert!(curvature_profile_value(500.0, 600.0, 3).is_err());
    }

    #[test]
    fn spectrum_matches_core() {
        let v = solve_spectrum_value(L25).unwrap();
        let betas: Vec<f64> = v["ground_sector_betas"]
            .as_array()
            .unwrap()
            .iter()
            .map(|b| b.as_f64().unwrap())
            .collect();
        assert!((betas[0] + 0.3405).abs() < 2e-3);
        assert_eq!(v["config"]["basis.n_theta"], "3");
        assert!(solve_spectrum_value("model = torus\n").is_err());
    }

    #[test]
    fn slice_vanishes_at_walls_and_is_periodic() {
        let v = wavefunction_slice_value(L25, 0, 9, 5).unwrap();
        let psi = v["psi"].as_array().unwrap();
        assert_eq!(psi.len(), 5);
        for x in psi[0].as_array().unwrap() {
            assert!(x.as_f64().unwrap().abs() < 1e-12);
        }
        let mid = psi[2].as_array().unwrap();
        let first = mid[0].as_f64().unwrap();
        let last = mid[8].as_f64().unwrap();
        assert!((first - last).abs() < 1e-12 * first.abs().max(1e-30));
        assert!(wavefunction_slice_value(L25, 99, 9, 5).is_err());
    }

    #[test]
    fn surface_slice_is_one_row() {
        let v = wavefunction_slice_value("model = surface_bare\n", 0, 5, 5).unwrap();
        assert_eq!(v["q"].as_array().unwrap().len(), 1);
    }
}

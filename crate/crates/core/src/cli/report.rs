//! Self-describing CSV / JSON / text emission.

use serde_json::{Map, Value, json};

use crate::spectra::SpectralResult;

pub const UNITS: &str = "hbar = m = 1; lengths in angstrom; energies in 1/angstrom^2; beta = 2 a^2 (E - E_normal) is dimensionless";

/// Scientific notation with 10 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.9e}")
}

fn header_lines(title: &str, config: &[(&str, String)]) -> String {
    let mut out = format!("# {title}\n# torus-layer {}\n# units: {UNITS}\n", crate::VERSION);
    for (k, v) in config {
        out.push_str(&format!("# config {k} = {v}\n"));
    }
    out
}

fn config_object(config: &[(&str, String)]) -> Value {
    let mut map = Map::new();
    for (k, v) in config {
        map.insert((*k).to_string(), Value::String(v.clone()));
    }
    Value::Object(map)
}

/// Numeric table with a titled, config-bearing header and optional footer notes.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub config: Vec<(&'static str, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Free-form `key = value` notes, printed after the rows.
    pub footer: Vec<(String, String)>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = header_lines(&self.title, &self.config);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| sci(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for (k, v) in &self.footer {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (c, &x) in self.columns.iter().zip(row) {
                    m.insert(c.clone(), json!(x));
                }
                Value::Object(m)
            })
            .collect();
        let footer: Map<String, Value> = self
            .footer
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        json!({
            "title": self.title,
            "version": crate::VERSION,
            "units": UNITS,
            "config": config_object(&self.config),
            "rows": rows,
            "notes": footer,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.title);
        let width = 16;
        out.push_str(
            &self
                .columns
                .iter()
                .map(|c| format!("{c:>width$}"))
                .collect::<String>(),
        );
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|x| format!("{x:>width$.6}")).collect::<String>());
            out.push('\n');
        }
        for (k, v) in &self.footer {
            out.push_str(&format!("{k}: {v}\n"));
        }
        out
    }
}

fn basis_columns(result: &SpectralResult) -> Vec<String> {
    result
        .basis
        .iter()
        .map(|b| {
            let t = match b.parity {
                crate::basis::Parity::Even => "cos",
                crate::basis::Parity::Odd => "sin",
            };
            format!("c_q{}_{}{}", b.q_index, t, b.theta_mode)
        })
        .collect()
}

/// Solve output as a table: one row per eigenstate.
pub fn result_table(result: &SpectralResult, config: Vec<(&'static str, String)>) -> Table {
    let mut columns: Vec<String> = ["state", "E", "beta", "q_sector", "norm_residual"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    columns.extend(basis_columns(result));
    let rows = result
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut row = vec![i as f64, s.energy, s.beta, s.q_sector as f64, s.norm_residual];
            row.extend(&s.coefficients);
            row
        })
        .collect();
    let d = result.diagnostics;
    Table {
        title: "solve".into(),
        config,
        columns,
        rows,
        footer: vec![
            ("asymmetry".into(), sci(d.asymmetry)),
            ("gram_condition".into(), sci(d.gram_condition)),
            ("orthonormality_error".into(), sci(d.orthonormality_error)),
        ],
    }
}

/// `{"config", "diagnostics", "states": [{E, beta, q_sector, coefficients}]}`.
pub fn result_json(result: &SpectralResult, config: &[(&'static str, String)]) -> Value {
    let states: Vec<Value> = result
        .states
        .iter()
        .map(|s| {
            json!({
                "E": s.energy,
                "beta": s.beta,
                "q_sector": s.q_sector,
                "norm_residual": s.norm_residual,
                "coefficients": s.coefficients,
            })
        })
        .collect();
    json!({
        "version": crate::VERSION,
        "units": UNITS,
        "config": config_object(config),
        "basis": basis_columns(result),
        "diagnostics": {
            "asymmetry": result.diagnostics.asymmetry,
            "gram_condition": result.diagnostics.gram_condition,
            "orthonormality_error": result.diagnostics.orthonormality_error,
        },
        "states": states,
    })
}

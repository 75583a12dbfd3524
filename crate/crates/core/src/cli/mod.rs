//! Command implementations behind the `torus-layer` binary.
//!
//! Each command returns the rendered output as a `String`; the binary only
//! handles argument parsing, file I/O and exit codes.

pub mod config;
pub mod report;

use std::f64::consts::PI;

use crate::basis::Model;
use crate::error::{Error, Result};
use crate::geometry::TorusGeometry;
use crate::linalg::sample_basis;
use crate::published::Column;
use crate::quadrature::{ProductGrid, periodic_trapezoid};
use crate::spectra::{
    CoefficientConvention, QuadratureConfig, SolveConfig, SpectralResult, format_coefficients, solve,
};

pub use config::{OutputFormat, RunManifest, Settings, parse_config, resolved_entries};
pub use report::{Table, result_json, result_table, sci};

fn render(table: &Table, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => format!("{:#}\n", table.to_json()),
        OutputFormat::Text => table.to_text(),
    }
}

pub fn cmd_solve(settings: &Settings, format: OutputFormat) -> Result<String> {
    let cfg = settings.solve_config()?;
    let result = solve(&cfg)?;
    let entries = resolved_entries(&cfg);
    Ok(match format {
        OutputFormat::Json => format!("{:#}\n", result_json(&result, &entries)),
        _ => render(&result_table(&result, entries), format),
    })
}

/// Solves the six published configurations, concurrently, in column order.
pub fn reproduce_all() -> Result<Vec<(Column, SpectralResult)>> {
    let configs = Column::ALL
        .iter()
        .map(|&c| c.config().map(|cfg| (c, cfg)))
        .collect::<Result<Vec<_>>>()?;
    std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|(col, cfg)| scope.spawn(move || solve(cfg).map(|r| (*col, r))))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().map_err(|_| Error::Numerical("solver thread panicked".into()))?)
            .collect()
    })
}

/// Ground-sector θ-series ratios of the `k`-th ground-sector state.
pub fn sector_ratios(result: &SpectralResult, k: usize, convention: CoefficientConvention) -> Result<Vec<f64>> {
    let idx = *result
        .ground_sector()
        .get(k)
        .ok_or_else(|| Error::Numerical(format!("fewer than {} ground-sector states", k + 1)))?;
    format_coefficients(result, idx, convention)
}

/// Side-by-side comparison with published values for table 1, 2 or 3.
pub fn cmd_reproduce(table: u8, format: OutputFormat) -> Result<String> {
    if !(1..=3).contains(&table) {
        return Err(Error::config("--table", None, "table must be 1, 2 or 3"));
    }
    let results = reproduce_all()?;
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (col, result) in &results {
        let (computed, published): (Vec<f64>, Vec<f64>) = match table {
            1 => (result.ground_sector_betas().into_iter().take(3).collect(), col.betas().to_vec()),
            2 => (
                sector_ratios(result, 0, CoefficientConvention::ConstantTerm)?,
                col.ground_ratios().to_vec(),
            ),
            _ => (
                sector_ratios(result, 1, CoefficientConvention::CosThetaTerm)?,
                col.excited_ratios().to_vec(),
            ),
        };
        for (i, (c, p)) in computed.iter().zip(&published).enumerate() {
            labels.push(format!("{}: {}", col.label(), entry_name(table, i)));
            rows.push(vec![i as f64, *c, *p, (c - p).abs()]);
        }
    }
    let title = match table {
        1 => "Table 1: ground, first and second excited beta",
        2 => "Table 2: ground-state coefficients over the constant term",
        _ => "Table 3: first-excited coefficients over the cos(theta) term",
    };
    let max_dev = rows.iter().map(|r| r[3]).fold(0.0, f64::max);
    let t = Table {
        title: title.into(),
        config: vec![
            ("geometry.R_angstrom", crate::published::MAJOR_RADIUS.to_string()),
            ("geometry.a_angstrom", crate::published::MINOR_RADIUS.to_string()),
            ("mode.table_reproduction", "true".into()),
        ],
        columns: vec!["entry".into(), "computed".into(), "published".into(), "abs_deviation".into()],
        rows,
        footer: vec![
            ("rows".into(), labels.join("; ")),
            ("max_abs_deviation".into(), sci(max_dev)),
        ],
    };
    Ok(match format {
        OutputFormat::Text => reproduce_text(table, &results)?,
        _ => render(&t, format),
    })
}

fn entry_name(table: u8, i: usize) -> String {
    match table {
        1 => format!("beta_{i}"),
        _ => match i {
            0 => "1".into(),
            1 => "cos θ".into(),
            n => format!("cos {n}θ"),
        },
    }
}

fn reproduce_text(table: u8, results: &[(Column, SpectralResult)]) -> Result<String> {
    let mut out = String::new();
    match table {
        1 => {
            out.push_str(&format!("{:<8}", ""));
            for (col, _) in results {
                out.push_str(&format!("{:>28}", col.label()));
            }
            out.push('\n');
            for i in 0..3 {
                out.push_str(&format!("{:<8}", format!("beta_{i}")));
                for (col, r) in results {
                    let c = r.ground_sector_betas()[i];
                    let p = col.betas()[i];
                    out.push_str(&format!("{:>28}", format!("{c:.4} ({p:.4}, Δ{:.1e})", (c - p).abs())));
                }
                out.push('\n');
            }
        }
        _ => {
            let (k, conv) = if table == 2 {
                (0, CoefficientConvention::ConstantTerm)
            } else {
                (1, CoefficientConvention::CosThetaTerm)
            };
            for (col, r) in results {
                let ratios = sector_ratios(r, k, conv)?;
                let published = if table == 2 { col.ground_ratios() } else { col.excited_ratios() };
                out.push_str(&format!(
                    "{:<12} computed: {}\n{:<12} published: {}\n",
                    col.label(),
                    crate::spectra::display_series(&ratios, crate::basis::Parity::Even),
                    "",
                    crate::spectra::display_series(published, crate::basis::Parity::Even),
                ));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileQuantity {
    CurvaturePotential,
    MeanCurvature,
    GaussianCurvature,
    Measure,
    Wavefunction,
}

impl std::str::FromStr for ProfileQuantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "vc" => ProfileQuantity::CurvaturePotential,
            "h" => ProfileQuantity::MeanCurvature,
            "k" => ProfileQuantity::GaussianCurvature,
            "measure" => ProfileQuantity::Measure,
            "wavefunction" => ProfileQuantity::Wavefunction,
            other => {
                return Err(Error::config(
                    "--quantity",
                    None,
                    format!("unknown quantity `{other}` (vc|h|k|measure|wavefunction)"),
                ))
            }
        })
    }
}

/// `samples` angles evenly spaced on `[0, π]`, endpoints included.
pub fn profile_angles(samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| PI * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `∮∮ k M dθ dφ` at offset `q` on a fine periodic grid.
pub fn gauss_bonnet_integral(geom: &TorusGeometry, q: f64) -> Result<f64> {
    let grid = periodic_trapezoid(256)?;
    let mut total = 0.0;
    for (&t, &w) in grid.nodes().iter().zip(grid.weights()) {
        let p = geom.point(t, q)?;
        total += w * 2.0 * PI * geom.curvatures(p).k * geom.measure(p);
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRequest {
    pub quantity: ProfileQuantity,
    pub samples: usize,
    /// Normal offset for `h`, `k` and `measure`.
    pub q: f64,
    /// Offsets across the layer for `wavefunction`.
    pub q_samples: usize,
}

pub fn cmd_profile(settings: &Settings, req: ProfileRequest, format: OutputFormat) -> Result<String> {
    if req.samples == 0 {
        return Err(Error::config("--samples", None, "need at least one sample"));
    }
    let geom = settings.geometry()?;
    let thetas = profile_angles(req.samples);
    let geometry_entries = vec![
        ("geometry.R_angstrom", geom.major_radius().to_string()),
        ("geometry.a_angstrom", geom.minor_radius().to_string()),
    ];
    let table = match req.quantity {
        ProfileQuantity::Wavefunction => wavefunction_profile(settings, &thetas, req.q_samples)?,
        quantity => {
            let (name, unit) = match quantity {
                ProfileQuantity::CurvaturePotential => ("V_C", "1/angstrom^2"),
                ProfileQuantity::MeanCurvature => ("h", "1/angstrom"),
                ProfileQuantity::GaussianCurvature => ("k", "1/angstrom^2"),
                _ => ("M", "angstrom^2"),
            };
            let q = if quantity == ProfileQuantity::CurvaturePotential { 0.0 } else { req.q };
            let mut rows = Vec::with_capacity(thetas.len());
            for &t in &thetas {
                let p = geom.point(t, q)?;
                let v = match quantity {
                    ProfileQuantity::CurvaturePotential => geom.curvature_potential(t),
                    ProfileQuantity::MeanCurvature => geom.curvatures(p).h,
                    ProfileQuantity::GaussianCurvature => geom.curvatures(p).k,
                    _ => geom.measure(p),
                };
                rows.push(vec![t, q, v]);
            }
            let mut footer = vec![("unit".to_string(), unit.to_string())];
            if quantity == ProfileQuantity::GaussianCurvature {
                let total = gauss_bonnet_integral(&geom, q)?;
                let scale = 4.0 * PI * PI * geom.minor_radius() * geom.major_radius();
                footer.push(("gauss_bonnet_integral".into(), sci(total)));
                footer.push(("gauss_bonnet_relative".into(), sci(total / scale)));
            }
            let mut config = geometry_entries;
            config.push(("profile.q_angstrom", q.to_string()));
            Table {
                title: format!("profile {name}"),
                config,
                columns: vec!["theta".into(), "q".into(), name.into()],
                rows,
                footer,
            }
        }
    };
    Ok(render(&table, format))
}

fn wavefunction_profile(settings: &Settings, thetas: &[f64], q_samples: usize) -> Result<Table> {
    let cfg = settings.solve_config()?;
    let geom = cfg.validate()?;
    let result = solve(&cfg)?;
    let basis = crate::basis::build_basis(&cfg.basis, cfg.confinement.as_ref())?;
    let qs: Vec<f64> = match (cfg.model(), cfg.confinement) {
        (Model::Layer, Some(conf)) => {
            let (lo, hi) = conf.interval(&geom, cfg.quadrature.sigma_multiple)?;
            match q_samples {
                0 | 1 => vec![0.5 * (lo + hi)],
                n => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
            }
        }
        _ => vec![0.0],
    };
    let states: Vec<usize> = result.ground_sector().into_iter().take(3).collect();
    let mut rows = Vec::new();
    for &t in thetas {
        for &q in &qs {
            let mut row = vec![t, q];
            for &s in &states {
                let c = &result.states[s].coefficients;
                row.push(basis.iter().zip(c).map(|(f, x)| x * f.value(t, q)).sum());
            }
            rows.push(row);
        }
    }
    let mut columns = vec!["theta".to_string(), "q".to_string()];
    columns.extend(states.iter().map(|s| format!("psi_{s}")));
    let betas: Vec<String> = states.iter().map(|&s| sci(result.states[s].beta)).collect();
    Ok(Table {
        title: "profile wavefunction".into(),
        config: resolved_entries(&cfg),
        columns,
        rows,
        footer: vec![
            ("normalization".into(), "integral of psi^2 M dtheta dphi dq = 1".into()),
            ("betas".into(), betas.join(" ")),
        ],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRequest {
    pub max_n_theta: usize,
    pub max_n_q: usize,
    /// Multipliers applied to the configured quadrature point counts.
    pub quadrature_ladder: Vec<usize>,
}

pub fn convergence_rows(base: &SolveConfig, req: &ConvergenceRequest) -> Result<Vec<Vec<f64>>> {
    let surface = base.model().is_surface();
    let n_q_range = if surface { 1..=1 } else { base.basis.n_q..=req.max_n_q.max(base.basis.n_q) };
    let mut rows = Vec::new();
    for &mult in &req.quadrature_ladder {
        if mult == 0 {
            return Err(Error::config("--quadrature-ladder", None, "multipliers must be positive"));
        }
        for n_q in n_q_range.clone() {
            for n_theta in base.basis.n_theta..=req.max_n_theta.max(base.basis.n_theta) {
                let mut cfg = *base;
                cfg.table_reproduction = false;
                cfg.basis.n_theta = n_theta;
                cfg.basis.n_q = n_q;
                cfg.quadrature = QuadratureConfig {
                    n_theta: base.quadrature.n_theta * mult,
                    n_q: base.quadrature.n_q * mult,
                    sigma_multiple: base.quadrature.sigma_multiple,
                };
                let r = solve(&cfg)?;
                let betas = r.ground_sector_betas();
                let mut row = vec![
                    n_theta as f64,
                    n_q as f64,
                    cfg.quadrature.n_theta as f64,
                    if surface { 1.0 } else { cfg.quadrature.n_q as f64 },
                ];
                row.extend((0..3).map(|i| betas.get(i).copied().unwrap_or(f64::NAN)));
                row.push(r.diagnostics.asymmetry);
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

pub fn cmd_convergence(settings: &Settings, req: &ConvergenceRequest, format: OutputFormat) -> Result<String> {
    let base = settings.solve_config()?;
    let rows = convergence_rows(&base, req)?;
    // β₀ along the n_theta sweep at the base n_q and first quadrature rung
    let sweep: Vec<f64> = rows
        .iter()
        .filter(|r| r[1] == rows[0][1] && r[2] == rows[0][2])
        .map(|r| r[4])
        .collect();
    let monotone = sweep.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let table = Table {
        title: "convergence".into(),
        config: resolved_entries(&base),
        columns: ["n_theta", "n_q", "quad_n_theta", "quad_n_q", "beta_0", "beta_1", "beta_2", "asymmetry"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows,
        footer: vec![
            ("beta0_monotone_in_n_theta".into(), monotone.to_string()),
            (
                "quadrature_ladder".into(),
                req.quadrature_ladder.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
            ),
        ],
    };
    Ok(render(&table, format))
}

/// Overlap-weighted `ψ` samples of a state on its own quadrature grid.
pub fn state_on_grid(cfg: &SolveConfig, result: &SpectralResult, state: usize) -> Result<(ProductGrid, Vec<f64>)> {
    let geom = cfg.validate()?;
    let grid = cfg.grid(&geom)?;
    let basis = crate::basis::build_basis(&cfg.basis, cfg.confinement.as_ref())?;
    let samples = sample_basis(&basis, &grid);
    let coeffs = &result
        .states
        .get(state)
        .ok_or_else(|| Error::Argument(format!("no state {state}")))?
        .coefficients;
    let mut psi = vec![0.0; grid.len()];
    for (c, s) in coeffs.iter().zip(&samples) {
        for (p, v) in psi.iter_mut().zip(s) {
            *p += c * v;
        }
    }
    Ok((grid, psi))
}

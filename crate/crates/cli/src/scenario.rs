use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use finscat::amplitude::{amplitude_asymptotic, amplitude_finite, amplitude_series};
use finscat::field::flux;
use finscat::observables::{differential_cross_section, sigma_total, sigma_total_asymptotic};
use finscat::phases::{
    default_l_max, hard_sphere_phases, numerov_phases, square_well_phases, PhaseShiftSet,
    PotentialSpec,
};
use finscat::wavefront::{gaussian_curvature, trace_generatrix_with, FluxConvention};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{FluxChoice, Format, OutputKind, ScenarioConfig};
use crate::error::CliError;
use crate::table::{Cell, Table};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Series truncation diagnostics at one observation radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub r: f64,
    pub l_max_eff: usize,
    pub tail_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEntry {
    pub table: String,
    pub file: String,
    pub rows: usize,
    pub columns: Vec<String>,
    pub units: Vec<String>,
}

/// Record of one run, written next to the tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    /// SHA-256 of the canonical JSON serialization of `config`.
    pub config_sha256: String,
    pub l_max: usize,
    pub series: Vec<SeriesEntry>,
    pub outputs: Vec<OutputEntry>,
    pub conventions: BTreeMap<String, String>,
    pub config: ScenarioConfig,
}

pub fn config_hash(config: &ScenarioConfig) -> String {
    let canonical = serde_json::to_vec(config).expect("config serializes");
    hex::encode(Sha256::digest(&canonical))
}

fn convention(config: &ScenarioConfig) -> FluxConvention {
    match config.flux_convention {
        FluxChoice::Outgoing => FluxConvention::Outgoing,
        FluxChoice::Interference => FluxConvention::Interference,
    }
}

/// Phase shifts for the configured potential or fixture.
pub fn scenario_phases(config: &ScenarioConfig) -> Result<PhaseShiftSet, CliError> {
    let k = config.k;
    if let Some(deltas) = &config.phase_shifts {
        return PhaseShiftSet::new(k, deltas.clone()).map_err(CliError::numerical("phase_shifts"));
    }
    let spec = config
        .potential_spec()
        .ok_or_else(|| CliError::Config("no potential given".into()))?;
    let l_max = config
        .l_max
        .unwrap_or_else(|| default_l_max(k, spec.cutoff()));
    let context = format!("phase shifts (k = {k}, l_max = {l_max})");
    match &spec {
        PotentialSpec::HardSphere { radius } => hard_sphere_phases(k, *radius, l_max),
        PotentialSpec::SquareWell { radius, depth } => {
            square_well_phases(k, *depth, *radius, l_max)
        }
        PotentialSpec::Tabulated { .. } => {
            let r_match = config.r_match.unwrap_or(spec.cutoff());
            let step = config
                .numerov_step
                .unwrap_or_else(|| (1.0 / (10.0 * k)).min(spec.length_scale() / 100.0) / 4.0);
            numerov_phases(&spec, k, l_max, r_match, step)
        }
    }
    .map_err(CliError::numerical(context))
}

fn point_context(r: f64, theta: f64) -> String {
    format!("r = {r}, theta = {theta}")
}

/// Evaluate `f` over `points` in parallel; the first failure in grid order
/// is reported, so diagnostics do not depend on scheduling.
fn evaluate_grid<T, F>(points: &[(f64, f64)], f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(f64, f64) -> finscat::Result<T> + Sync,
{
    let results: Vec<finscat::Result<T>> = points.par_iter().map(|&(r, t)| f(r, t)).collect();
    results
        .into_iter()
        .zip(points)
        .map(|(res, &(r, t))| res.map_err(CliError::numerical(point_context(r, t))))
        .collect()
}

fn grid(config: &ScenarioConfig) -> Vec<(f64, f64)> {
    let thetas = config.theta_grid.values();
    config
        .r_values
        .iter()
        .flat_map(|&r| thetas.iter().map(move |&t| (r, t)))
        .collect()
}

fn phases_table(phases: &PhaseShiftSet) -> Table {
    let mut t = Table::new("phases", &[("l", "1"), ("delta_l", "rad")]);
    for (l, &d) in phases.deltas().iter().enumerate() {
        t.rows.push(vec![Cell::Int(l as i64), d.into()]);
    }
    t
}

fn amplitude_table(config: &ScenarioConfig, phases: &PhaseShiftSet) -> Result<Table, CliError> {
    let points = grid(config);
    let values = evaluate_grid(&points, |r, t| {
        Ok((
            amplitude_finite(phases, r, t)?,
            amplitude_asymptotic(phases, t)?,
        ))
    })?;
    let mut table = Table::new(
        "amplitude",
        &[
            ("r", "length"),
            ("theta", "rad"),
            ("re_f", "length"),
            ("im_f", "length"),
            ("re_f_asymptotic", "length"),
            ("im_f_asymptotic", "length"),
        ],
    );
    for (&(r, t), (f, f_inf)) in points.iter().zip(values) {
        table.rows.push(vec![
            r.into(),
            t.into(),
            f.re.into(),
            f.im.into(),
            f_inf.re.into(),
            f_inf.im.into(),
        ]);
    }
    Ok(table)
}

fn field_map_table(config: &ScenarioConfig, phases: &PhaseShiftSet) -> Result<Table, CliError> {
    let points = grid(config);
    let values = evaluate_grid(&points, |r, t| flux(phases, r, t))?;
    let mut table = Table::new(
        "field_map",
        &[
            ("r", "length"),
            ("theta", "rad"),
            ("re_psi", "1"),
            ("im_psi", "1"),
            ("jr_sc", "1/length"),
            ("jtheta_sc", "1/length"),
            ("gamma_sc", "rad"),
        ],
    );
    for p in values {
        table.rows.push(vec![
            p.r.into(),
            p.theta.into(),
            p.psi.re.into(),
            p.psi.im.into(),
            p.j_sc.radial.into(),
            p.j_sc.polar.into(),
            p.gamma_sc.into(),
        ]);
    }
    Ok(table)
}

fn cross_section_table(config: &ScenarioConfig, phases: &PhaseShiftSet) -> Result<Table, CliError> {
    let points = grid(config);
    let values = evaluate_grid(&points, |r, t| differential_cross_section(phases, r, t))?;
    let mut table = Table::new(
        "cross_section",
        &[
            ("r", "length"),
            ("theta", "rad"),
            ("dsigma_domega", "length^2/sr"),
            ("f_abs2", "length^2/sr"),
            ("eta", "length^2/sr"),
            ("tan_gamma", "1"),
        ],
    );
    for s in values {
        table.rows.push(vec![
            s.r.into(),
            s.theta.into(),
            s.dsigma_domega.into(),
            s.f_abs2.into(),
            s.eta.into(),
            s.tan_gamma.into(),
        ]);
    }
    Ok(table)
}

fn sigma_total_table(config: &ScenarioConfig, phases: &PhaseShiftSet) -> Result<Table, CliError> {
    let asymptotic = sigma_total_asymptotic(phases);
    let mut table = Table::new(
        "sigma_total",
        &[
            ("R", "length"),
            ("sigma_t", "length^2"),
            ("sigma_t_asymptotic", "length^2"),
        ],
    );
    for &r in &config.r_values {
        let s = sigma_total(phases, r).map_err(CliError::numerical(format!("R = {r}")))?;
        table.rows.push(vec![r.into(), s.into(), asymptotic.into()]);
    }
    Ok(table)
}

fn wavefront_tables(
    config: &ScenarioConfig,
    phases: &PhaseShiftSet,
) -> Result<Vec<Table>, CliError> {
    let end = config.trace_end();
    let curves: Vec<finscat::Result<_>> = config
        .r_values
        .par_iter()
        .map(|&r| {
            let curve = trace_generatrix_with(phases, r, end, config.ode_step, convention(config))?;
            gaussian_curvature(&curve)
        })
        .collect();
    let mut tables = Vec::with_capacity(curves.len());
    for (i, (curve, &r)) in curves.into_iter().zip(&config.r_values).enumerate() {
        let curve = curve.map_err(CliError::numerical(format!(
            "wave front anchored at R = {r}"
        )))?;
        let mut table = Table::new(
            format!("wavefront_{i}"),
            &[
                ("theta", "rad"),
                ("r", "length"),
                ("gamma_sc", "rad"),
                ("K", "1/length^2"),
            ],
        );
        for s in &curve.samples {
            table.rows.push(vec![
                s.theta.into(),
                s.r.into(),
                s.gamma_sc.into(),
                s.curvature.into(),
            ]);
        }
        tables.push(table);
    }
    Ok(tables)
}

/// Least-squares slope of `ln y` against `ln x` over the positive entries.
fn power_law_exponent(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(_, &v)| v > 0.0 && v.is_finite())
        .map(|(&a, &b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (u, v)| (a + u / n, b + v / n));
    let sxx: f64 = pts.iter().map(|(u, _)| (u - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|(u, v)| (u - mx) * (v - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Per-radius distance from the conventional results and fitted decay
/// exponents. Returns the convergence table and the fit table.
pub fn compare_asymptotic(config: &ScenarioConfig) -> Result<(Table, Table), CliError> {
    let phases = scenario_phases(config)?;
    let r = &config.r_values;
    let (lo, hi) = r
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(a, b), &v| (a.min(v), b.max(v)));
    if hi < 100.0 * lo {
        return Err(CliError::Config(
            "compare-asymptotic needs r_values spanning at least two decades".into(),
        ));
    }
    let thetas = config.theta_grid.values();
    let f_inf: Vec<_> = thetas
        .iter()
        .map(|&t| amplitude_asymptotic(&phases, t))
        .collect::<finscat::Result<_>>()
        .map_err(CliError::numerical("asymptotic amplitude"))?;
    let sigma_inf = sigma_total_asymptotic(&phases);
    let end = config.trace_end();
    let rows: Vec<Result<[f64; 4], CliError>> = r
        .par_iter()
        .map(|&radius| {
            let ctx = || CliError::numerical(format!("R = {radius}"));
            let mut amp = 0.0_f64;
            for (t, fi) in thetas.iter().zip(&f_inf) {
                let f = amplitude_finite(&phases, radius, *t)
                    .map_err(CliError::numerical(point_context(radius, *t)))?;
                amp = amp.max((f - fi).norm());
            }
            let ratio = sigma_total(&phases, radius).map_err(ctx())? / sigma_inf;
            let curve =
                trace_generatrix_with(&phases, radius, end, config.ode_step, convention(config))
                    .map_err(ctx())?;
            let sphere = curve
                .samples
                .iter()
                .map(|s| (s.r / radius - 1.0).abs())
                .fold(0.0, f64::max);
            Ok([radius, amp, ratio, sphere])
        })
        .collect();
    let mut table = Table::new(
        "compare_asymptotic",
        &[
            ("r", "length"),
            ("max_amplitude_deviation", "length"),
            ("sigma_ratio", "1"),
            ("max_sphericity_deviation", "1"),
        ],
    );
    let mut columns: [Vec<f64>; 4] = Default::default();
    for row in rows {
        let row = row?;
        for (c, v) in columns.iter_mut().zip(row) {
            c.push(v);
        }
        table.rows.push(row.iter().map(|&v| v.into()).collect());
    }
    let ratio_dev: Vec<f64> = columns[2].iter().map(|v| (v - 1.0).abs()).collect();
    let mut fit = Table::new(
        "compare_asymptotic_fit",
        &[("quantity", "1"), ("exponent", "1")],
    );
    for (name, values) in FIT_QUANTITIES
        .into_iter()
        .zip([&columns[1], &ratio_dev, &columns[3]])
    {
        fit.rows.push(vec![
            Cell::Text(name),
            power_law_exponent(&columns[0], values).into(),
        ]);
    }
    Ok((table, fit))
}

/// Rows of the fit table.
pub const FIT_QUANTITIES: [&str; 3] = [
    "max_amplitude_deviation",
    "abs(sigma_ratio - 1)",
    "max_sphericity_deviation",
];

/// Compute every requested table.
pub fn compute_tables(
    config: &ScenarioConfig,
    outputs: &[OutputKind],
) -> Result<(PhaseShiftSet, Vec<Table>), CliError> {
    let phases = scenario_phases(config)?;
    let mut tables = Vec::new();
    for kind in outputs {
        match kind {
            OutputKind::Phases => tables.push(phases_table(&phases)),
            OutputKind::Amplitude => tables.push(amplitude_table(config, &phases)?),
            OutputKind::FieldMap => tables.push(field_map_table(config, &phases)?),
            OutputKind::CrossSection => tables.push(cross_section_table(config, &phases)?),
            OutputKind::SigmaTotal => tables.push(sigma_total_table(config, &phases)?),
            OutputKind::Wavefront => tables.extend(wavefront_tables(config, &phases)?),
            OutputKind::CompareAsymptotic => {
                let (table, fit) = compare_asymptotic(config)?;
                tables.push(table);
                tables.push(fit);
            }
        }
    }
    Ok((phases, tables))
}

fn conventions() -> BTreeMap<String, String> {
    [
        (
            "units",
            "hbar = m = 1; V carries the factor 2m/hbar^2; lengths in the unit of 1/k",
        ),
        ("flux", "j = Im(psi* grad psi), components (radial, polar)"),
        ("gamma_sc", "atan2(j_theta^sc, j_r^sc) with j^sc = j - j_in"),
        (
            "wavefront",
            "generatrix normal to the flux named by flux_convention",
        ),
        ("missing", "NaN in CSV, null in JSON"),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect()
}

/// Run the requested outputs and write tables plus `manifest.json` into
/// `out_dir`. Identical configs give byte-identical files.
pub fn run_outputs(
    config: &ScenarioConfig,
    outputs: &[OutputKind],
    format: Format,
    out_dir: &Path,
) -> Result<Manifest, CliError> {
    let (phases, tables) = compute_tables(config, outputs)?;
    let needs_series = outputs.iter().any(|k| *k != OutputKind::Phases);
    let series = if needs_series {
        config
            .r_values
            .iter()
            .map(|&r| {
                amplitude_series(&phases, r)
                    .map(|s| SeriesEntry {
                        r,
                        l_max_eff: s.l_max_eff,
                        tail_estimate: s.tail_estimate,
                    })
                    .map_err(CliError::numerical(format!("series at r = {r}")))
            })
            .collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    fs::create_dir_all(out_dir).map_err(CliError::io(out_dir))?;
    let mut entries = Vec::with_capacity(tables.len());
    for table in &tables {
        let file = format!("{}.{}", table.name, format.extension());
        let text = match format {
            Format::Csv => table.to_csv(),
            Format::Json => table.to_json(),
        };
        let path = out_dir.join(&file);
        fs::write(&path, text).map_err(CliError::io(&path))?;
        entries.push(OutputEntry {
            table: table.name.clone(),
            file,
            rows: table.rows.len(),
            columns: table.columns.iter().map(|s| s.to_string()).collect(),
            units: table.units.iter().map(|s| s.to_string()).collect(),
        });
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_sha256: config_hash(config),
        l_max: phases.l_max(),
        series,
        outputs: entries,
        conventions: conventions(),
        config: config.clone(),
    };
    let path = out_dir.join(MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(&path, text).map_err(CliError::io(&path))?;
    Ok(manifest)
}

/// Run every output listed in the config, in the config's format.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<Manifest, CliError> {
    run_outputs(config, &config.outputs, config.format, out_dir)
}

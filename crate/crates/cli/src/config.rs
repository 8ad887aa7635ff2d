use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use finscat::phases::PotentialSpec;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Scenario description read from a flat JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Scattering potential; mutually exclusive with `phase_shifts`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialConfig>,
    /// Explicit phase shifts `delta_0 ..= delta_L` in radians.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_shifts: Option<Vec<f64>>,
    /// Wavenumber in inverse length units.
    pub k: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_max: Option<usize>,
    /// Observation radii; also the anchor radii of traced wave fronts.
    pub r_values: Vec<f64>,
    pub theta_grid: ThetaGrid,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<OutputKind>,
    #[serde(default)]
    pub format: Format,
    /// Angular step of the wave-front integration, radians.
    #[serde(default = "default_ode_step")]
    pub ode_step: f64,
    /// End angle of wave-front traces; defaults to the top of `theta_grid`,
    /// capped at `pi - ode_step`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_end: Option<f64>,
    #[serde(default)]
    pub flux_convention: FluxChoice,
    /// Numerov match radius; defaults to the potential cutoff.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_match: Option<f64>,
    /// Numerov radial step; defaults to a quarter of `min(1/(10k), r_c/100)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerov_step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaGrid {
    pub count: usize,
    /// `[theta_min, theta_max]` in radians.
    pub range: [f64; 2],
}

impl ThetaGrid {
    pub fn values(&self) -> Vec<f64> {
        let [lo, hi] = self.range;
        if self.count == 1 {
            return vec![lo];
        }
        let last = self.count - 1;
        (0..self.count)
            .map(|i| {
                if i == last {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialConfig {
    HardSphere {
        radius: f64,
    },
    SquareWell {
        radius: f64,
        depth: f64,
    },
    /// Samples either inline or from a two-column `(r, V)` CSV file whose
    /// path is relative to the config file.
    Tabulated {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        samples: Option<Vec<(f64, f64)>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        csv: Option<PathBuf>,
        cutoff: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputKind {
    Phases,
    Amplitude,
    FieldMap,
    CrossSection,
    SigmaTotal,
    Wavefront,
    CompareAsymptotic,
}

impl OutputKind {
    pub fn file_stem(&self) -> &'static str {
        match self {
            OutputKind::Phases => "phases",
            OutputKind::Amplitude => "amplitude",
            OutputKind::FieldMap => "field_map",
            OutputKind::CrossSection => "cross_section",
            OutputKind::SigmaTotal => "sigma_total",
            OutputKind::Wavefront => "wavefront",
            OutputKind::CompareAsymptotic => "compare_asymptotic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FluxChoice {
    #[default]
    Outgoing,
    Interference,
}

fn default_outputs() -> Vec<OutputKind> {
    vec![OutputKind::Phases]
}

fn default_ode_step() -> f64 {
    PI / 500.0
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl ScenarioConfig {
    /// Parse, resolve file references relative to `base_dir`, and validate.
    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self, CliError> {
        let mut config: ScenarioConfig = serde_json::from_str(text)
            .map_err(|e| config_error(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        config.resolve(base_dir)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_json(&text, base)
    }

    /// Inline tabulated samples read from CSV so the config is self-contained.
    fn resolve(&mut self, base_dir: &Path) -> Result<(), CliError> {
        if let Some(PotentialConfig::Tabulated {
            samples,
            csv,
            cutoff,
        }) = &mut self.potential
        {
            match (samples.is_some(), csv.take()) {
                (true, Some(_)) => {
                    return Err(config_error(
                        "potential: give either `samples` or `csv`, not both",
                    ))
                }
                (false, None) => {
                    return Err(config_error(
                        "potential: tabulated kind needs `samples` or `csv`",
                    ))
                }
                (true, None) => {}
                (false, Some(path)) => {
                    let full = base_dir.join(&path);
                    let file = fs::File::open(&full).map_err(CliError::io(&full))?;
                    let spec = PotentialSpec::tabulated_from_csv(file, *cutoff).map_err(|e| {
                        config_error(format!("potential csv {}: {e}", full.display()))
                    })?;
                    if let PotentialSpec::Tabulated { samples: s, .. } = spec {
                        *samples = Some(s);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn potential_spec(&self) -> Option<PotentialSpec> {
        self.potential.as_ref().map(|p| match p {
            PotentialConfig::HardSphere { radius } => PotentialSpec::HardSphere { radius: *radius },
            PotentialConfig::SquareWell { radius, depth } => PotentialSpec::SquareWell {
                radius: *radius,
                depth: *depth,
            },
            PotentialConfig::Tabulated {
                samples, cutoff, ..
            } => PotentialSpec::Tabulated {
                samples: samples.clone().unwrap_or_default(),
                cutoff: *cutoff,
            },
        })
    }

    /// Radius beyond which the potential vanishes; zero for explicit phases.
    pub fn cutoff(&self) -> f64 {
        self.potential_spec().map_or(0.0, |p| p.cutoff())
    }

    pub fn trace_end(&self) -> f64 {
        self.theta_end
            .unwrap_or(self.theta_grid.range[1])
            .min(PI - self.ode_step)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config_error(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        positive("k", self.k)?;
        match (&self.potential, &self.phase_shifts) {
            (Some(_), Some(_)) => {
                return Err(config_error(
                    "give either `potential` or `phase_shifts`, not both",
                ))
            }
            (None, None) => {
                return Err(config_error(
                    "one of `potential` or `phase_shifts` is required",
                ))
            }
            (None, Some(d)) => {
                if d.is_empty() {
                    return Err(config_error("phase_shifts must not be empty"));
                }
                if let Some(l) = self.l_max {
                    if l + 1 != d.len() {
                        return Err(config_error(format!(
                            "l_max = {l} disagrees with {} phase shifts",
                            d.len()
                        )));
                    }
                }
            }
            (Some(_), None) => {
                let spec = self.potential_spec().expect("potential present");
                spec.validate()
                    .map_err(|e| config_error(format!("potential: {e}")))?;
            }
        }
        if self.r_values.is_empty() {
            return Err(config_error("r_values must not be empty"));
        }
        let cutoff = self.cutoff();
        for (i, &r) in self.r_values.iter().enumerate() {
            positive(&format!("r_values[{i}]"), r)?;
            if r < cutoff {
                return Err(config_error(format!(
                    "r_values[{i}] = {r} lies inside the potential cutoff {cutoff}"
                )));
            }
        }
        if self.theta_grid.count == 0 {
            return Err(config_error("theta_grid.count must be at least 1"));
        }
        let [lo, hi] = self.theta_grid.range;
        if !(0.0 <= lo && lo <= hi && hi <= PI) {
            return Err(config_error(format!(
                "theta_grid.range [{lo}, {hi}] must be ordered within [0, pi]"
            )));
        }
        positive("ode_step", self.ode_step)?;
        if self.ode_step > PI / 500.0 {
            return Err(config_error("ode_step must not exceed pi/500"));
        }
        if let Some(end) = self.theta_end {
            positive("theta_end", end)?;
        }
        if let Some(r) = self.r_match {
            positive("r_match", r)?;
        }
        if let Some(h) = self.numerov_step {
            positive("numerov_step", h)?;
        }
        if self.outputs.is_empty() {
            return Err(config_error("outputs must name at least one table"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{"potential": {"kind": "hard-sphere", "radius": 1.0}, "k": 1.0,
        "r_values": [2.0], "theta_grid": {"count": 3, "range": [0.0, 3.0]}}"#;

    #[test]
    fn parses_defaults() {
        let c = ScenarioConfig::from_json(BASE, Path::new(".")).unwrap();
        assert_eq!(c.outputs, vec![OutputKind::Phases]);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.theta_grid.values(), vec![0.0, 1.5, 3.0]);
        assert_eq!(c.cutoff(), 1.0);
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let text = BASE.replace("\"k\"", "\"kk\": 1, \"k\"");
        let err = ScenarioConfig::from_json(&text, Path::new(".")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 1") && msg.contains("kk"), "{msg}");
        assert_eq!(err.exit_code(), 2);
        let text = BASE.replace("\"radius\": 1.0", "\"radius\": 1.0, \"depth\": 2");
        assert!(ScenarioConfig::from_json(&text, Path::new(".")).is_err());
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for (from, to) in [
            ("\"k\": 1.0", "\"k\": -1.0"),
            ("[2.0]", "[0.5]"),
            ("[0.0, 3.0]", "[0.0, 3.5]"),
            ("\"count\": 3", "\"count\": 0"),
        ] {
            let text = BASE.replace(from, to);
            let err = ScenarioConfig::from_json(&text, Path::new(".")).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{to}");
        }
    }
}

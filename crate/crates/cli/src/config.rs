//! Experiment configuration: flat `key = value` text with dotted section
//! names. SI units throughout; dimensional keys carry `_m` / `_per_m`
//! suffixes. Unknown keys are rejected so configs stay diffable and typo
//! errors fail loudly.

use std::collections::BTreeMap;

use ghostint_core::{GramError, Geometry, ParamError, PathDetector, SourceParams, C64};

use crate::oracle::SlitMode;

#[derive(thiserror::Error, Debug)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("key `{key}`: {detail}")]
    BadValue { key: String, detail: String },
    #[error("invalid parameters: {0}")]
    Param(#[from] ParamError),
    #[error("invalid detector: {0}")]
    Gram(#[from] GramError),
    #[error("oracle mode cannot carry a path detector (the grid models the photons only)")]
    OracleWithDetector,
}

/// Which pipelines a ghost run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Analytic,
    Oracle,
    Both,
}

impl RunMode {
    pub fn wants_analytic(self) -> bool {
        matches!(self, RunMode::Analytic | RunMode::Both)
    }

    pub fn wants_oracle(self) -> bool {
        matches!(self, RunMode::Oracle | RunMode::Both)
    }
}

/// Visibility source for duality records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum V2Choice {
    Max,
    Fringe,
    Measured,
}

/// Optional explicit grid request; anything unset is auto-sized.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GridOverride {
    pub n1: Option<usize>,
    pub n2: Option<usize>,
    pub span1: Option<f64>,
    pub span2: Option<f64>,
    pub max_points: Option<usize>,
}

/// Run-control block.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub mode: RunMode,
    /// Half-width of the detector window; `None` auto-sizes from the fringe
    /// spacing.
    pub z2_window: Option<f64>,
    pub samples: usize,
    pub neglect_beta: bool,
    pub exact_gamma: bool,
    pub seed: u64,
    /// Number of random Grams for a duality sweep (0 = use the configured
    /// detector).
    pub sweep_count: usize,
    pub two_slit: bool,
    /// Two-state detector overlap for the two-slit check.
    pub two_slit_overlap: f64,
    /// Off-center fringe index for the fringe-evaluated visibility.
    pub fringe_index: u32,
    pub v2_source: Option<V2Choice>,
    /// Margin slack for the duality pass/fail verdict; `None` picks a
    /// per-source default.
    pub margin_slack: Option<f64>,
    pub slit_mode: SlitMode,
    pub grid: GridOverride,
    pub dump_grid: bool,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            mode: RunMode::Analytic,
            z2_window: None,
            samples: 2048,
            neglect_beta: true,
            exact_gamma: false,
            seed: 1,
            sweep_count: 0,
            two_slit: false,
            two_slit_overlap: 1.0,
            fringe_index: 2,
            v2_source: None,
            margin_slack: None,
            slit_mode: SlitMode::Gaussian,
            grid: GridOverride::default(),
            dump_grid: false,
        }
    }
}

/// Fully parsed experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub source: SourceParams,
    pub geometry: Geometry,
    pub detector: Option<PathDetector>,
    pub run: RunSettings,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line: idx + 1,
                    text: raw.trim().to_string(),
                });
            };
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Self::from_map(map)
    }

    fn from_map(mut map: BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let mut take = |key: &'static str| map.remove(key);
        let mut require_f64 = |key: &'static str| -> Result<f64, ConfigError> {
            take(key)
                .ok_or(ConfigError::MissingKey(key))
                .and_then(|v| parse_f64(key, &v))
        };

        let sigma = require_f64("source.sigma_per_m")?;
        let omega = require_f64("source.omega_m")?;
        let z0 = require_f64("geometry.z0_m")?;
        let epsilon = require_f64("geometry.epsilon_m")?;
        let lambda = require_f64("geometry.lambda_m")?;
        let l1 = require_f64("geometry.l1_m")?;
        let l2 = require_f64("geometry.l2_m")?;

        let source = SourceParams::new(sigma, omega)?;
        let geometry = Geometry::new(z0, epsilon, lambda, l1, l2)?;

        let detector = parse_detector(&mut map)?;
        let run = parse_run(&mut map, detector.is_some())?;

        if let Some(key) = map.into_keys().next() {
            return Err(ConfigError::UnknownKey(key));
        }
        if run.mode.wants_oracle() && detector.is_some() {
            return Err(ConfigError::OracleWithDetector);
        }
        Ok(Self {
            source,
            geometry,
            detector,
            run,
        })
    }
}

fn parse_detector(
    map: &mut BTreeMap<String, String>,
) -> Result<Option<PathDetector>, ConfigError> {
    let keys = [
        "detector.g12",
        "detector.g13",
        "detector.g23",
        "detector.phase12_rad",
        "detector.phase13_rad",
        "detector.phase23_rad",
    ];
    if !keys.iter().any(|k| map.contains_key(*k)) {
        return Ok(None);
    }
    let mut grab = |key: &'static str, default: Option<f64>| -> Result<f64, ConfigError> {
        match map.remove(key) {
            Some(v) => parse_f64(key, &v),
            None => default.ok_or(ConfigError::MissingKey(key)),
        }
    };
    let g12 = grab("detector.g12", None)?;
    let g13 = grab("detector.g13", None)?;
    let g23 = grab("detector.g23", None)?;
    let p12 = grab("detector.phase12_rad", Some(0.0))?;
    let p13 = grab("detector.phase13_rad", Some(0.0))?;
    let p23 = grab("detector.phase23_rad", Some(0.0))?;
    let e12 = C64::from_polar(g12, p12);
    let e13 = C64::from_polar(g13, p13);
    let e23 = C64::from_polar(g23, p23);
    let gram = [
        [C64::ONE, e12, e13],
        [e12.conj(), C64::ONE, e23],
        [e13.conj(), e23.conj(), C64::ONE],
    ];
    Ok(Some(PathDetector::new(gram)?))
}

fn parse_run(
    map: &mut BTreeMap<String, String>,
    _has_detector: bool,
) -> Result<RunSettings, ConfigError> {
    let mut run = RunSettings::default();
    if let Some(v) = map.remove("run.mode") {
        run.mode = match v.as_str() {
            "analytic" => RunMode::Analytic,
            "oracle" => RunMode::Oracle,
            "both" => RunMode::Both,
            other => {
                return Err(ConfigError::BadValue {
                    key: "run.mode".into(),
                    detail: format!("expected analytic|oracle|both, got `{other}`"),
                })
            }
        };
    }
    if let Some(v) = map.remove("run.z2_window_m") {
        run.z2_window = Some(parse_f64("run.z2_window_m", &v)?);
    }
    if let Some(v) = map.remove("run.samples") {
        run.samples = parse_usize("run.samples", &v)?;
        if run.samples < 16 {
            return Err(ConfigError::BadValue {
                key: "run.samples".into(),
                detail: "need at least 16 samples".into(),
            });
        }
    }
    if let Some(v) = map.remove("run.neglect_beta") {
        run.neglect_beta = parse_bool("run.neglect_beta", &v)?;
    }
    if let Some(v) = map.remove("run.exact_gamma") {
        run.exact_gamma = parse_bool("run.exact_gamma", &v)?;
    }
    if let Some(v) = map.remove("run.seed") {
        run.seed = parse_usize("run.seed", &v)? as u64;
    }
    if let Some(v) = map.remove("run.sweep_count") {
        run.sweep_count = parse_usize("run.sweep_count", &v)?;
    }
    if let Some(v) = map.remove("run.two_slit") {
        run.two_slit = parse_bool("run.two_slit", &v)?;
    }
    if let Some(v) = map.remove("run.two_slit_overlap") {
        run.two_slit_overlap = parse_f64("run.two_slit_overlap", &v)?;
        if !(0.0..=1.0).contains(&run.two_slit_overlap) {
            return Err(ConfigError::BadValue {
                key: "run.two_slit_overlap".into(),
                detail: "overlap magnitude must be in [0, 1]".into(),
            });
        }
    }
    if let Some(v) = map.remove("run.fringe_index") {
        run.fringe_index = parse_usize("run.fringe_index", &v)? as u32;
        if run.fringe_index == 0 {
            return Err(ConfigError::BadValue {
                key: "run.fringe_index".into(),
                detail: "fringe index counts off-center fringes, must be >= 1".into(),
            });
        }
    }
    if let Some(v) = map.remove("run.v2_source") {
        run.v2_source = Some(match v.as_str() {
            "max" => V2Choice::Max,
            "fringe" => V2Choice::Fringe,
            "measured" => V2Choice::Measured,
            other => {
                return Err(ConfigError::BadValue {
                    key: "run.v2_source".into(),
                    detail: format!("expected max|fringe|measured, got `{other}`"),
                })
            }
        });
    }
    if let Some(v) = map.remove("run.margin_slack") {
        run.margin_slack = Some(parse_f64("run.margin_slack", &v)?);
    }
    if let Some(v) = map.remove("run.slit_mode") {
        run.slit_mode = match v.as_str() {
            "gaussian" => SlitMode::Gaussian,
            "hard" => SlitMode::Hard,
            other => {
                return Err(ConfigError::BadValue {
                    key: "run.slit_mode".into(),
                    detail: format!("expected gaussian|hard, got `{other}`"),
                })
            }
        };
    }
    if let Some(v) = map.remove("run.grid.n1") {
        run.grid.n1 = Some(parse_usize("run.grid.n1", &v)?);
    }
    if let Some(v) = map.remove("run.grid.n2") {
        run.grid.n2 = Some(parse_usize("run.grid.n2", &v)?);
    }
    if let Some(v) = map.remove("run.grid.span1_m") {
        run.grid.span1 = Some(parse_f64("run.grid.span1_m", &v)?);
    }
    if let Some(v) = map.remove("run.grid.span2_m") {
        run.grid.span2 = Some(parse_f64("run.grid.span2_m", &v)?);
    }
    if let Some(v) = map.remove("run.grid.max_points") {
        run.grid.max_points = Some(parse_usize("run.grid.max_points", &v)?);
    }
    if let Some(v) = map.remove("run.dump_grid") {
        run.dump_grid = parse_bool("run.dump_grid", &v)?;
    }
    Ok(run)
}

fn parse_f64(key: &str, v: &str) -> Result<f64, ConfigError> {
    v.parse::<f64>().map_err(|e| ConfigError::BadValue {
        key: key.to_string(),
        detail: e.to_string(),
    })
}

fn parse_usize(key: &str, v: &str) -> Result<usize, ConfigError> {
    if let Ok(n) = v.parse::<usize>() {
        return Ok(n);
    }
    // Allow scientific notation for counts (1e4 and the like).
    match v.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < usize::MAX as f64 => Ok(x as usize),
        _ => Err(ConfigError::BadValue {
            key: key.to_string(),
            detail: format!("expected a non-negative integer, got `{v}`"),
        }),
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ConfigError::BadValue {
            key: key.to_string(),
            detail: format!("expected true|false, got `{v}`"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "
source.sigma_per_m = 1e6
source.omega_m = 1e-2
geometry.z0_m = 1e-4
geometry.epsilon_m = 5e-6
geometry.lambda_m = 702e-9
geometry.l1_m = 0.5
geometry.l2_m = 0.5
";

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = ExperimentConfig::parse(MINIMAL).unwrap();
        assert_eq!(cfg.run.mode, RunMode::Analytic);
        assert_eq!(cfg.run.samples, 2048);
        assert!(cfg.run.neglect_beta);
        assert!(cfg.detector.is_none());
        assert_eq!(cfg.geometry.big_d(), 1.5);
    }

    #[test]
    fn unknown_key_rejected() {
        let text = format!("{MINIMAL}\nrun.modee = both\n");
        match ExperimentConfig::parse(&text) {
            Err(ConfigError::UnknownKey(k)) => assert_eq!(k, "run.modee"),
            other => panic!("expected UnknownKey, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_carries_line_number() {
        let text = format!("{MINIMAL}\nthis is not a key value pair\n");
        assert!(matches!(
            ExperimentConfig::parse(&text),
            Err(ConfigError::Syntax { .. })
        ));
    }

    #[test]
    fn detector_block_with_phases() {
        let text = format!(
            "{MINIMAL}\ndetector.g12 = 0.5\ndetector.g13 = 0.5\ndetector.g23 = 0.5\ndetector.phase12_rad = 1.0\n"
        );
        let cfg = ExperimentConfig::parse(&text).unwrap();
        let det = cfg.detector.unwrap();
        let (g12, g13, g23) = det.overlap_magnitudes();
        assert!((g12 - 0.5).abs() < 1e-15);
        assert!((g13 - 0.5).abs() < 1e-15);
        assert!((g23 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn invalid_detector_rejected() {
        let text = format!("{MINIMAL}\ndetector.g12 = 1.5\ndetector.g13 = 0\ndetector.g23 = 0\n");
        assert!(matches!(
            ExperimentConfig::parse(&text),
            Err(ConfigError::Gram(_))
        ));
    }

    #[test]
    fn incomplete_detector_rejected() {
        let text = format!("{MINIMAL}\ndetector.g12 = 0.5\n");
        assert!(matches!(
            ExperimentConfig::parse(&text),
            Err(ConfigError::MissingKey("detector.g13"))
        ));
    }

    #[test]
    fn physical_invariants_enforced_at_parse() {
        let text = MINIMAL.replace("source.sigma_per_m = 1e6", "source.sigma_per_m = -1");
        assert!(matches!(
            ExperimentConfig::parse(&text),
            Err(ConfigError::Param(_))
        ));
    }

    #[test]
    fn oracle_with_detector_rejected() {
        let text = format!(
            "{MINIMAL}\nrun.mode = both\ndetector.g12 = 0.5\ndetector.g13 = 0.5\ndetector.g23 = 0.5\n"
        );
        assert!(matches!(
            ExperimentConfig::parse(&text),
            Err(ConfigError::OracleWithDetector)
        ));
    }

    #[test]
    fn sweep_count_scientific_notation() {
        let text = format!("{MINIMAL}\nrun.sweep_count = 1e4\n");
        let cfg = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(cfg.run.sweep_count, 10000);
    }
}

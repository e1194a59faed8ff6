//! Command orchestration shared by the CLI binary and the test suites.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ghostint_core::{
    check_duality, conditional_packets, detector_pattern, distinguishability,
    expected_fringe_widths, fringe_widths, ghost_pattern, post_slit_state, sample_gram,
    two_slit_check, two_slit_pattern, AnalysisError, AnalyticError, CoincidencePattern,
    DualityError, DualitySample, FringeReport, SlitSet, V2Source,
};

use crate::config::{ConfigError, ExperimentConfig, RunMode, V2Choice};
use crate::oracle::{oracle_coincidence, GridSpec, OracleError};
use crate::output::{fmt_f64, normalized_rms, pattern_csv, unit_peak, Report};

/// Default grid budget: 2^25 points (512 MiB of complex samples).
const DEFAULT_MAX_POINTS: usize = 1 << 25;

#[derive(thiserror::Error, Debug)]
pub enum RunnerError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical guard: {0}")]
    Oracle(#[from] OracleError),
    #[error("numerical guard: {0}")]
    Analytic(#[from] AnalyticError),
    #[error("analysis: {0}")]
    Analysis(#[from] AnalysisError),
    #[error("duality: {0}")]
    Duality(#[from] DualityError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl RunnerError {
    /// Exit-code contract: 0 ok, 2 config, 3 numerical guard, 1 other.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunnerError::Config(_) => 2,
            RunnerError::Oracle(_) | RunnerError::Analytic(_) => 3,
            RunnerError::Duality(DualityError::Analytic(_))
            | RunnerError::Duality(DualityError::OutsideEnvelope { .. }) => 3,
            _ => 1,
        }
    }
}

/// Outcome of a ghost run.
pub struct GhostOutcome {
    pub csv_path: PathBuf,
    pub report_path: PathBuf,
    pub warnings: Vec<String>,
    pub fringes: Option<FringeReport>,
    pub rms_deviation: Option<f64>,
    pub runtime_s: f64,
}

/// Runs the ghost-pattern pipeline(s) and writes `pattern.csv` and
/// `report.txt` into `out_dir`.
pub fn run_ghost(config: &ExperimentConfig, out_dir: &Path) -> Result<GhostOutcome, RunnerError> {
    let started = Instant::now();
    fs::create_dir_all(out_dir)?;
    let warnings: Vec<String> = config
        .geometry
        .warnings()
        .iter()
        .map(|w| w.to_string())
        .collect();

    let geom = &config.geometry;
    let fringe_spacing = geom.lambda() * geom.big_d() / geom.z0();
    let half = config.run.z2_window.unwrap_or(2.2 * fringe_spacing);
    let z2: Vec<f64> = linspace(-half, half, config.run.samples);

    // Analytic column.
    let packets = conditional_packets(&config.source, geom, config.run.exact_gamma)?;
    let base = post_slit_state(&config.source, geom, packets);
    let analytic: Option<CoincidencePattern> = if config.run.mode.wants_analytic() {
        Some(match (&config.detector, config.run.two_slit) {
            (_, true) => two_slit_pattern(
                &base.clone().with_slits(SlitSet::Double),
                &z2,
                config.run.two_slit_overlap,
            )?,
            (Some(det), false) => {
                detector_pattern(&base.clone().with_detector(det.clone()), &z2)?
            }
            (None, false) => ghost_pattern(&base, &z2, config.run.neglect_beta)?,
        })
    } else {
        None
    };

    // Oracle column.
    let oracle = if config.run.mode.wants_oracle() {
        let spec = resolve_spec(config)?;
        let result = oracle_coincidence(&config.source, geom, spec, config.run.slit_mode, &z2)?;
        if config.run.dump_grid {
            let mut f = fs::File::create(out_dir.join("slit_plane.grid"))?;
            result.slit_plane.dump(&mut f)?;
        }
        Some(result)
    } else {
        None
    };

    // Assemble columns (unit peak each).
    let mut columns: Vec<(&str, Vec<f64>)> = Vec::new();
    if let Some(p) = &analytic {
        columns.push(("density_analytic", unit_peak(p.density())));
    }
    if let Some(o) = &oracle {
        columns.push(("density_oracle", unit_peak(o.pattern.density())));
    }
    let column_refs: Vec<(&str, &[f64])> =
        columns.iter().map(|(n, c)| (*n, c.as_slice())).collect();
    let csv_path = out_dir.join("pattern.csv");
    fs::write(&csv_path, pattern_csv(&z2, &column_refs))?;

    // Report.
    let mut report = Report::new();
    report.put("command", "ghost");
    report.put("mode", mode_label(config.run.mode));
    report.put("two_slit", config.run.two_slit);
    report.put("samples", config.run.samples);
    report.put("z2_half_window_m", half);
    report.put("d_m", geom.big_d());
    let (w_ab, w_ac) = expected_fringe_widths(geom)?;
    report.put("predicted_width_ab_m", w_ab);
    report.put("predicted_width_ac_m", w_ac);

    let fringes = analytic
        .as_ref()
        .or(oracle.as_ref().map(|o| &o.pattern))
        .and_then(|p| fringe_widths(p).ok());
    if let Some(f) = &fringes {
        report.put("primary_width_m", f.primary_width);
        match f.secondary_width {
            Some(w) => report.put("secondary_width_m", w),
            None => report.put("secondary_width_m", "none"),
        };
        report.put("visibility", f.visibility);
        report.put("resolved_peaks", f.peak_positions.len());
    }
    let rms = match (&analytic, &oracle) {
        (Some(_), Some(_)) => {
            let rms = normalized_rms(&z2, &columns[0].1, &columns[1].1, 2.0 * fringe_spacing);
            report.put("rms_deviation_central_2_fringes", rms);
            Some(rms)
        }
        _ => None,
    };
    if let Some(o) = &oracle {
        report.put("oracle_grid_n1", o.spec.n1);
        report.put("oracle_grid_n2", o.spec.n2);
        report.put("oracle_span1_m", o.spec.span1);
        report.put("oracle_span2_m", o.spec.span2);
        report.put("oracle_norm_drift", o.norm_drift);
    }
    for w in &warnings {
        report.put("warning", w.as_str());
    }
    report.put("seed", config.run.seed as usize);
    let report_path = out_dir.join("report.txt");
    fs::write(&report_path, report.finish())?;

    Ok(GhostOutcome {
        csv_path,
        report_path,
        warnings,
        fringes,
        rms_deviation: rms,
        runtime_s: started.elapsed().as_secs_f64(),
    })
}

fn resolve_spec(config: &ExperimentConfig) -> Result<GridSpec, RunnerError> {
    let o = &config.run.grid;
    let max_points = o.max_points.unwrap_or(DEFAULT_MAX_POINTS);
    let auto = GridSpec::auto(&config.source, &config.geometry, max_points);
    let spec = match (o.n1, o.n2, o.span1, o.span2) {
        (None, None, None, None) => auto?,
        _ => {
            let fallback = auto.ok();
            let pick = |v: Option<f64>, f: Option<f64>| v.or(f);
            let span1 = pick(o.span1, fallback.map(|s| s.span1)).ok_or_else(|| {
                ConfigError::MissingKey("run.grid.span1_m")
            })?;
            let span2 = pick(o.span2, fallback.map(|s| s.span2)).unwrap_or(span1);
            let n1 = o.n1.or(fallback.map(|s| s.n1)).ok_or_else(|| {
                ConfigError::MissingKey("run.grid.n1")
            })?;
            let n2 = o.n2.unwrap_or(n1);
            if n1 * n2 > max_points {
                return Err(OracleError::GridTooLarge {
                    points: n1 * n2,
                    max: max_points,
                }
                .into());
            }
            GridSpec::new(n1, n2, span1, span2)?
        }
    };
    Ok(spec)
}

fn mode_label(mode: RunMode) -> &'static str {
    match mode {
        RunMode::Analytic => "analytic",
        RunMode::Oracle => "oracle",
        RunMode::Both => "both",
    }
}

/// One line of `duality.txt`.
fn record_line(sample: &DualitySample, extra: &str) -> String {
    format!(
        "D={} V2={} bound_lhs={} margin={} source={}{extra}\n",
        fmt_f64(sample.report.distinguishability),
        fmt_f64(sample.report.visibility),
        fmt_f64(sample.report.bound_lhs),
        fmt_f64(sample.report.margin),
        sample.source.label(),
    )
}

/// Outcome of a duality run.
pub struct DualityOutcome {
    pub records_path: PathBuf,
    pub count: usize,
    pub min_margin: f64,
    pub violations: usize,
    pub slack: f64,
    pub runtime_s: f64,
}

/// Runs the duality check(s) and writes line-delimited records plus a
/// summary into `out_dir`. A sample violates when `margin < -slack`.
pub fn run_duality(
    config: &ExperimentConfig,
    out_dir: &Path,
) -> Result<DualityOutcome, RunnerError> {
    fs::create_dir_all(out_dir)?;
    let started = Instant::now();
    let source = &config.source;
    let geom = &config.geometry;

    let mut records = String::new();
    let mut samples: Vec<DualitySample> = Vec::new();

    if config.run.two_slit {
        let sample = two_slit_check(config.run.two_slit_overlap, source, geom)?;
        records.push_str(&record_line(&sample, "-two-slit"));
        samples.push(sample);
    } else if config.run.sweep_count > 0 {
        let choice = config.run.v2_source.unwrap_or(V2Choice::Fringe);
        let v2_source = to_v2_source(choice, config.run.fringe_index);
        for det in sample_gram(config.run.seed, config.run.sweep_count) {
            let sample = check_duality(&det, source, geom, v2_source)?;
            records.push_str(&record_line(&sample, ""));
            samples.push(sample);
        }
    } else if let Some(det) = &config.detector {
        let choice = config.run.v2_source.unwrap_or(V2Choice::Measured);
        let v2_source = to_v2_source(choice, config.run.fringe_index);
        let sample = check_duality(det, source, geom, v2_source)?;
        records.push_str(&record_line(&sample, ""));
        samples.push(sample);
    } else {
        return Err(ConfigError::MissingKey(
            "detector.g12 (or run.sweep_count, or run.two_slit)",
        )
        .into());
    }

    let slack = config.run.margin_slack.unwrap_or_else(|| {
        match samples.first().map(|s| s.source) {
            Some(V2Source::MaxVisibility) => 1e-9,
            Some(V2Source::AnalyticFringe { .. }) => 1e-2,
            _ => 5e-2,
        }
    });
    let min_margin = samples
        .iter()
        .map(|s| s.report.margin)
        .fold(f64::INFINITY, f64::min);
    let violations = samples
        .iter()
        .filter(|s| s.report.margin < -slack)
        .count();

    records.push_str(&format!(
        "# summary count={} min_margin={} violations={} slack={}\n",
        samples.len(),
        fmt_f64(min_margin),
        violations,
        fmt_f64(slack),
    ));
    let records_path = out_dir.join("duality.txt");
    fs::write(&records_path, records)?;
    Ok(DualityOutcome {
        records_path,
        count: samples.len(),
        min_margin,
        violations,
        slack,
        runtime_s: started.elapsed().as_secs_f64(),
    })
}

fn to_v2_source(choice: V2Choice, fringe: u32) -> V2Source {
    match choice {
        V2Choice::Max => V2Source::MaxVisibility,
        V2Choice::Fringe => V2Source::AnalyticFringe { fringe },
        V2Choice::Measured => V2Source::MeasuredPattern,
    }
}

/// Config lint: constructs everything, reports derived quantities and
/// warnings as a key-value block.
pub fn validate(config: &ExperimentConfig) -> Result<String, RunnerError> {
    let mut report = Report::new();
    let geom = &config.geometry;
    let source = &config.source;
    report.put("command", "validate");
    report.put("sigma_per_m", source.sigma());
    report.put("omega_m", source.omega());
    report.put("d_m", geom.big_d());
    let packets = conditional_packets(source, geom, config.run.exact_gamma)?;
    report.put("gamma_m", packets.gamma_sq.sqrt());
    let state = post_slit_state(source, geom, packets);
    report.put("gamma_d_m", state.envelope2().sqrt());
    if let Ok((w_ab, w_ac)) = expected_fringe_widths(geom) {
        report.put("predicted_width_ab_m", w_ab);
        report.put("predicted_width_ac_m", w_ac);
    }
    if geom.l1() > 0.0 && geom.big_d() > 0.0 {
        let beta = geom.z0() * geom.z0() * std::f64::consts::PI / geom.lambda()
            * (1.0 / geom.l1() + 1.0 / geom.big_d());
        report.put("beta_rad", beta);
    }
    report.put(
        "good_correlation",
        source.is_good_correlation(geom.epsilon(), 10.0),
    );
    if let Some(det) = &config.detector {
        report.put("distinguishability", distinguishability(det));
    }
    if config.run.mode.wants_oracle() {
        match resolve_spec(config) {
            Ok(spec) => {
                report.put("oracle_grid_n1", spec.n1);
                report.put("oracle_grid_n2", spec.n2);
                report.put("oracle_span1_m", spec.span1);
            }
            Err(e) => {
                report.put("oracle_grid_error", e.to_string().as_str());
            }
        }
    }
    for w in geom.warnings() {
        report.put("warning", w.to_string().as_str());
    }
    report.put("ok", true);
    Ok(report.finish())
}

/// Inclusive uniform grid with `n` points.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

//! Subcommand implementations behind the `nussbaum` binary.
//!
//! Every command takes a scenario config, either a path to a JSON file or
//! the name of a bundled scenario (`reference_saturated`, `reference_traditional`).
//! Commands return `anyhow` errors; the binary maps them to exit codes.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use nussbaum_core::analysis::{
    certify_lemma33, certify_lemma35, check_nussbaum_ratio, compare_scenarios, compute_metrics,
    lyapunov_value, Comparison, MetricsReport, DEFAULT_CONSENSUS_TOL,
};
use nussbaum_core::nussbaum::{synthesize_params, validate_theorem_params, Direction, TheoremConstraintReport};
use nussbaum_core::scenario::GainScheme;
use nussbaum_core::sim::{run, Blowup, RunOutcome, SimConfig, Trajectory};
use nussbaum_core::{Scenario, ScenarioConfig};

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const METRICS_FILE: &str = "metrics.json";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const COMPARISON_FILE: &str = "comparison.json";
pub const CERTIFY_FILE: &str = "certify.txt";

/// Overrides applied on top of a config's own `sim` block.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub tol: Option<f64>,
}

impl RunOptions {
    fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_CONSENSUS_TOL)
    }
}

/// Loads a config from a file path, falling back to a bundled scenario name.
pub fn load_config(source: &Path) -> Result<ScenarioConfig> {
    if source.exists() {
        let text = fs::read_to_string(source).with_context(|| format!("reading {}", source.display()))?;
        return ScenarioConfig::from_json(&text).with_context(|| format!("parsing {}", source.display()));
    }
    let name = source.to_string_lossy();
    match Scenario::bundled_json(&name) {
        Some(text) => Ok(ScenarioConfig::from_json(text)?),
        None => bail!(
            "config `{name}` is neither a file nor a bundled scenario ({})",
            Scenario::bundled_names().collect::<Vec<_>>().join(", ")
        ),
    }
}

/// Loads, applies overrides and validates.
pub fn load_scenario(source: &Path, opts: &RunOptions) -> Result<Scenario> {
    let mut config = load_config(source)?;
    if let Some(dt) = opts.dt {
        config.sim.dt = dt;
    }
    if let Some(t) = opts.t_final {
        config.sim.t_final = t;
    }
    Scenario::from_config(config).with_context(|| format!("invalid config {}", source.display()))
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub scenario: String,
    pub config_sha256: String,
    pub trajectory_fingerprint: String,
    pub sim: SimConfig,
    pub samples: usize,
    pub blowup: Option<Blowup>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub metrics: MetricsReport,
    pub blowup: Option<Blowup>,
}

fn header(n: usize) -> String {
    let mut h = String::from("t");
    for prefix in ["x", "u", "uN", "e", "chi", "gain"] {
        for i in 1..=n {
            let _ = write!(h, ",{prefix}_{i}");
        }
    }
    h.push_str(",V");
    h
}

/// Writes the trajectory as CSV; floats use the shortest round-trip form.
pub fn write_trajectory_csv(path: &Path, trajectory: &Trajectory, scenario: &Scenario) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{}", header(trajectory.n_agents))?;
    let mut line = String::new();
    for s in &trajectory.samples {
        line.clear();
        let _ = write!(line, "{:?}", s.t);
        for series in [&s.x, &s.u, &s.u_n, &s.e, &s.chi, &s.gain] {
            for v in series.iter() {
                let _ = write!(line, ",{v:?}");
            }
        }
        let v = lyapunov_value(scenario.graph(), scenario.agents(), &s.x, &s.theta_hat)?;
        let _ = write!(line, ",{v:?}");
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn write_run(out_dir: &Path, scenario: &Scenario, outcome: &RunOutcome, tol: f64) -> Result<RunSummary> {
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let trajectory = &outcome.trajectory;
    write_trajectory_csv(&out_dir.join(TRAJECTORY_FILE), trajectory, scenario)?;
    let summary = RunSummary {
        metrics: compute_metrics(trajectory, tol),
        blowup: outcome.blowup.clone(),
    };
    write_json(&out_dir.join(METRICS_FILE), &summary)?;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        scenario: scenario.config().name.clone(),
        config_sha256: scenario.config().sha256(),
        trajectory_fingerprint: trajectory.fingerprint.clone(),
        sim: trajectory.sim,
        samples: trajectory.samples.len(),
        blowup: outcome.blowup.clone(),
    };
    write_json(&out_dir.join(MANIFEST_FILE), &manifest)?;
    Ok(summary)
}

/// Runs one scenario and writes `trajectory.csv`, `metrics.json` and
/// `manifest.json` into `out_dir`. Nothing is written when the config is
/// invalid; a blowup still writes the partial trajectory.
pub fn cmd_run(config: &Path, out_dir: &Path, opts: &RunOptions) -> Result<RunSummary> {
    let scenario = load_scenario(config, opts)?;
    let outcome = run(&scenario, &scenario.sim_config())?;
    write_run(out_dir, &scenario, &outcome, opts.tol())
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRecord {
    pub scenario_a: String,
    pub scenario_b: String,
    #[serde(flatten)]
    pub comparison: Comparison,
    pub blowup_a: Option<Blowup>,
    pub blowup_b: Option<Blowup>,
}

impl ComparisonRecord {
    pub fn any_blowup(&self) -> bool {
        self.blowup_a.is_some() || self.blowup_b.is_some()
    }
}

/// Runs two scenarios concurrently, writes each into `out_dir/a` and
/// `out_dir/b`, and the MAI comparison into `out_dir/comparison.json`.
pub fn cmd_compare(config_a: &Path, config_b: &Path, out_dir: &Path, opts: &RunOptions) -> Result<ComparisonRecord> {
    let a = load_scenario(config_a, opts)?;
    let b = load_scenario(config_b, opts)?;
    let (ra, rb) = std::thread::scope(|scope| {
        let ha = scope.spawn(|| run(&a, &a.sim_config()));
        let hb = scope.spawn(|| run(&b, &b.sim_config()));
        (ha.join().expect("run thread panicked"), hb.join().expect("run thread panicked"))
    });
    let (ra, rb) = (ra?, rb?);
    write_run(&out_dir.join("a"), &a, &ra, opts.tol())?;
    write_run(&out_dir.join("b"), &b, &rb, opts.tol())?;
    let comparison = compare_scenarios(&ra.trajectory, &rb.trajectory, opts.tol()).map_err(anyhow::Error::msg)?;
    let record = ComparisonRecord {
        scenario_a: a.config().name.clone(),
        scenario_b: b.config().name.clone(),
        comparison,
        blowup_a: ra.blowup,
        blowup_b: rb.blowup,
    };
    write_json(&out_dir.join(COMPARISON_FILE), &record)?;
    Ok(record)
}

/// Evaluates the `(a_N, b_N)` constraints for a saturated-scheme config.
pub fn cmd_validate_params(config: &Path) -> Result<TheoremConstraintReport> {
    let scenario = load_scenario(config, &RunOptions::default())?;
    scenario
        .theorem_report()
        .context("parameter constraints only apply to the saturated gain scheme")
}

#[derive(Debug, Clone, Serialize)]
pub struct Synthesis {
    pub a_n: f64,
    pub b_n: f64,
    pub report: TheoremConstraintReport,
    pub config: ScenarioConfig,
}

/// Picks `(a_N, b_N)` that satisfy the constraints with the given margin and
/// returns the config with those values substituted.
pub fn cmd_synthesize_params(config: &Path, margin: f64) -> Result<Synthesis> {
    let scenario = load_scenario(config, &RunOptions::default())?;
    let n = scenario.agents().len();
    let (rho_min, rho_max, eta_bar) = scenario.effective_constraint_inputs();
    let (a, b) = synthesize_params(n, rho_min, rho_max, eta_bar, margin)?;
    let report = validate_theorem_params(n, rho_min, rho_max, eta_bar, a, b)?;
    let mut updated = scenario.config().clone();
    updated.gain_scheme = match updated.gain_scheme {
        GainScheme::Saturated { t_n, m, horizon, .. } => GainScheme::Saturated {
            a_n: a,
            b_n: b,
            t_n,
            m,
            horizon,
        },
        GainScheme::Traditional { .. } => GainScheme::Saturated {
            a_n: a,
            b_n: b,
            t_n: 1.0,
            m: 4,
            horizon: None,
        },
    };
    Ok(Synthesis {
        a_n: a,
        b_n: b,
        report,
        config: updated,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifyRow {
    pub pair: (usize, usize),
    pub k: u32,
    pub slow_direction: Direction,
    pub fast_direction: Direction,
    pub chi_in: f64,
    pub chi_out: f64,
    pub margin: f64,
    pub contained: bool,
    pub widened_rejected: bool,
    pub prior_bound_ok: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioRow {
    pub agent: usize,
    pub segments: u32,
    pub limit: f64,
    pub terminal_deviation: f64,
    pub sign_alternation_ok: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifyReport {
    pub rows: Vec<CertifyRow>,
    pub ratios: Vec<RatioRow>,
}

impl CertifyReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed) && self.ratios.iter().all(|r| r.passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<6} {:>2} {:>4} {:>4} {:>14} {:>14} {:>12} {:>9} {:>8} {:>6} {:>6}",
            "pair", "k", "sgnS", "sgnF", "chi_in", "chi_out", "margin", "contained", "widened", "prior", "result"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<6} {:>2} {:>4} {:>4} {:>14.6e} {:>14.6e} {:>12.4e} {:>9} {:>8} {:>6} {:>6}",
                format!("{}-{}", r.pair.0, r.pair.1),
                r.k,
                sign_char(r.slow_direction),
                sign_char(r.fast_direction),
                r.chi_in,
                r.chi_out,
                r.margin,
                r.contained,
                if r.widened_rejected { "reject" } else { "ACCEPT" },
                r.prior_bound_ok,
                if r.passed { "PASS" } else { "FAIL" }
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<6} {:>8} {:>12} {:>12} {:>10} {:>6}", "agent", "segments", "limit", "deviation", "alternates", "result");
        for r in &self.ratios {
            let _ = writeln!(
                s,
                "{:<6} {:>8} {:>12.6} {:>12.3e} {:>10} {:>6}",
                r.agent,
                r.segments,
                r.limit,
                r.terminal_deviation,
                r.sign_alternation_ok,
                if r.passed { "PASS" } else { "FAIL" }
            );
        }
        let _ = write!(s, "overall: {}", if self.all_passed() { "PASS" } else { "FAIL" });
        s
    }
}

fn sign_char(d: Direction) -> &'static str {
    match d {
        Direction::Positive => "+",
        Direction::Negative => "-",
    }
}

/// Interval certification for every consecutive pair of the config's chain
/// (`k ∈ {1, 2}`, all four direction combinations) plus the ratio check for
/// each agent. Writes the table to `out_dir/certify.txt` when given.
pub fn cmd_certify(config: &Path, out_dir: Option<&Path>, grid_points: usize) -> Result<CertifyReport> {
    let scenario = load_scenario(config, &RunOptions::default())?;
    let chain = scenario
        .chain()
        .context("certification applies to the saturated gain scheme only")?;
    let mut rows = Vec::new();
    for (i, (slow, fast)) in chain.pairs().enumerate() {
        for k in 1..=2 {
            for ds in Direction::ALL {
                for df in Direction::ALL {
                    let c = certify_lemma33(slow, fast, ds, df, k, grid_points)?;
                    let prior = certify_lemma35(slow, fast, ds, df, k, grid_points)?;
                    rows.push(CertifyRow {
                        pair: (i + 1, i + 2),
                        k,
                        slow_direction: ds,
                        fast_direction: df,
                        chi_in: c.interval.chi_in,
                        chi_out: c.interval.chi_out,
                        margin: c.scan.worst_margin(),
                        contained: c.contained,
                        widened_rejected: !c.widened_probe.passed,
                        prior_bound_ok: prior.passed,
                        passed: c.passed && !c.widened_probe.passed && prior.passed,
                    });
                }
            }
        }
    }
    let mut ratios = Vec::new();
    for (i, p) in chain.params().iter().enumerate() {
        // very large b overflows before segment 30; use the longest prefix that fits
        let Some((segments, r)) = (1..=30u32.min(p.horizon))
            .rev()
            .find_map(|n| check_nussbaum_ratio(p, n).ok().map(|r| (n, r)))
        else {
            bail!("agent {}: ratio check failed on the first segment", i + 1);
        };
        ratios.push(RatioRow {
            agent: i + 1,
            segments,
            limit: r.limiting_constant,
            terminal_deviation: r.terminal_deviation,
            sign_alternation_ok: r.sign_alternation_ok,
            passed: r.sign_alternation_ok && (segments < 30 || r.terminal_deviation < 0.01),
        });
    }
    let report = CertifyReport { rows, ratios };
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(CERTIFY_FILE), report.render() + "\n")?;
    }
    Ok(report)
}

/// Default output directory for a config: `out/<scenario name>`.
pub fn default_out_dir(config: &Path) -> PathBuf {
    let stem = config.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
    PathBuf::from("out").join(stem)
}

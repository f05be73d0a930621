//! The `vlasov-bridge` command-line front end.
//!
//! Subcommands: `verify`, `bridge`, `sphere`, `fields`, `com`. Every run is
//! described by a [`RunConfig`], assembled from an optional JSON config file
//! with command-line flags taking precedence. Exit codes: `0` all checks
//! pass, `1` a check failed, `2` the configuration or input was rejected.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bridge::{self, forward, im_u, inverse};
use crate::em::{self, electric_field, em_fields, em_report, magnetic_field, TOL_AGREE};
use crate::error::{Error, Result};
use crate::fields::io::{write_complex_csv, write_scalar_csv, write_vector_csv};
use crate::fields::{
    divergence, laplacian, ops::complex_laplacian, Boundary, ComplexField, Constants, Grid, GridSpec, ScalarField,
    VectorField,
};
use crate::kinematics::{com_diagnostics, lorentz_residual, material_derivative, ComReport};
use crate::scenarios::{
    evaluate, sphere_integrate, sphere_radius_at, DerivativeMode, Example1, Example2,
    SampledScenario, SampledSpec, Scenario, Snapshot, SphereState, SyntheticFlow,
};

/// Environment variable holding the log filter (`error`, `info`, `debug`, ...).
pub const LOG_ENV: &str = "VLASOV_BRIDGE_LOG";

/// Default multiple of the truncation estimate allowed for residuals.
pub const TOL_TRUNC: f64 = 10.0;
/// Default relative tolerance of the center-of-mass identities.
pub const TOL_COM: f64 = 1e-3;
/// Default relative tolerance of a Helmholtz recomposition.
pub const TOL_REC: f64 = 1e-6;
/// Default relative tolerance of the sphere closed-form gap column.
pub const TOL_SPHERE_GAP: f64 = 1e-6;
/// Default step of the time difference used for `D_t = eps_bar E_t`.
pub const E_RATE_STEP: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(
    name = "vlasov-bridge",
    version,
    about = "Continuity equation <-> Schrodinger-form bridge: residual reports, field dumps and the charged-sphere trajectory",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every check on a scenario and write report.json.
    #[command(allow_negative_numbers = true)]
    Verify(RunArgs),
    /// Forward map (f, v) -> (Psi, U), inverse map, or both.
    #[command(allow_negative_numbers = true)]
    Bridge(BridgeArgs),
    /// Integrate the charged-sphere radius and compare with the closed form.
    #[command(allow_negative_numbers = true)]
    Sphere(SphereArgs),
    /// Dump the electromagnetic-analogue fields.
    #[command(allow_negative_numbers = true)]
    Fields(RunArgs),
    /// Center-of-mass averages and their integral identities.
    #[command(allow_negative_numbers = true)]
    Com(RunArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Scenario name: example1 | example2 | synthetic | sampled.
    #[arg(long)]
    pub scenario: Option<String>,
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub grid_n: Option<usize>,
    #[arg(long)]
    pub grid_lo: Option<f64>,
    #[arg(long)]
    pub grid_hi: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    /// Comma-separated, increasing evaluation times.
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Comma-separated outputs: fields, residuals, com, agreement, sphere_trajectory.
    #[arg(long, value_delimiter = ',')]
    pub emit: Option<Vec<Emit>>,
    /// Residuals may reach this multiple of the truncation estimate.
    #[arg(long)]
    pub tol_trunc: Option<f64>,
    /// Relative tolerance of the agreement classifier.
    #[arg(long)]
    pub tol_agree: Option<f64>,
    /// Relative tolerance of the center-of-mass identities.
    #[arg(long)]
    pub tol_com: Option<f64>,
    /// Relative tolerance of Helmholtz recomposition (sampled input).
    #[arg(long)]
    pub tol_rec: Option<f64>,
    /// Acceleration of the example1 packet.
    #[arg(long)]
    pub a: Option<f64>,
    /// Initial centre of the example1 packet.
    #[arg(long)]
    pub x0: Option<f64>,
    /// Total charge of the example2 sphere.
    #[arg(long)]
    pub q: Option<f64>,
    /// Initial radius of the example2 sphere.
    #[arg(long)]
    pub r0: Option<f64>,
    /// Seed of the synthetic scenario.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Dimension of the synthetic scenario (1 or 3).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Sampled-scenario JSON file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Replace closed-form time derivatives by central differences with this step.
    #[arg(long)]
    pub fd_dt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
    RoundTrip,
}

#[derive(Debug, Clone, Args)]
pub struct BridgeArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value = "forward")]
    pub direction: Direction,
    /// Wavefunction CSV (`x[,y,z],re,im`) for the inverse map; by default the
    /// scenario's own wavefunction is inverted.
    #[arg(long)]
    pub psi: Option<PathBuf>,
    /// Shorthand for `--direction round-trip`.
    #[arg(long)]
    pub round_trip: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SphereArgs {
    /// Total charge; ignored when --gamma-bar is given.
    #[arg(long)]
    pub q: Option<f64>,
    /// Repulsion strength `-gamma Q / (4 pi eps_bar)`.
    #[arg(long)]
    pub gamma_bar: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub r0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative tolerance of the closed-form gap column.
    #[arg(long, default_value_t = TOL_SPHERE_GAP)]
    pub tol_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Emit {
    Fields,
    Residuals,
    Com,
    Agreement,
    SphereTrajectory,
}

/// Scenario section of a config file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub name: Option<String>,
    pub a: Option<f64>,
    pub x0: Option<f64>,
    pub q: Option<f64>,
    pub r0: Option<f64>,
    pub seed: Option<u64>,
    pub dim: Option<usize>,
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstantsConfig {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub eps_bar: Option<f64>,
    pub mu_bar: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n: Option<usize>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

/// On-disk configuration; every field is optional.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    pub scenario: ScenarioConfig,
    pub constants: ConstantsConfig,
    pub times: Option<Vec<f64>>,
    pub tolerances: BTreeMap<String, f64>,
    pub output_dir: Option<PathBuf>,
    pub emit: Option<Vec<Emit>>,
    pub grid: GridConfig,
    pub derivative_mode: Option<DerivativeMode>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub trunc: f64,
    pub agree: f64,
    pub com: f64,
    pub rec: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            trunc: TOL_TRUNC,
            agree: TOL_AGREE,
            com: TOL_COM,
            rec: TOL_REC,
        }
    }
}

/// Fully resolved description of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    pub constants: Constants,
    pub times: Vec<f64>,
    pub tolerances: Tolerances,
    pub output_dir: PathBuf,
    pub emit: BTreeSet<Emit>,
    pub grid: GridConfig,
    pub derivative_mode: DerivativeMode,
}

fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

impl RunConfig {
    /// Merges the config file (if any) with the flags; flags win.
    pub fn resolve(args: &RunArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let fs = file.scenario;
        let scenario = ScenarioConfig {
            name: pick(args.scenario.clone(), fs.name),
            a: pick(args.a, fs.a),
            x0: pick(args.x0, fs.x0),
            q: pick(args.q, fs.q),
            r0: pick(args.r0, fs.r0),
            seed: pick(args.seed, fs.seed),
            dim: pick(args.dim, fs.dim),
            input: pick(args.input.clone(), fs.input),
        };
        if scenario.name.is_none() {
            return Err(Error::Config("no scenario given (--scenario or config)".into()));
        }
        let d = Constants::default();
        let fc = file.constants;
        let constants = Constants::new(
            pick(args.alpha, fc.alpha).unwrap_or(d.alpha),
            pick(args.beta, fc.beta).unwrap_or(d.beta),
            pick(args.gamma, fc.gamma).unwrap_or(d.gamma),
            pick(args.eps, fc.eps_bar).unwrap_or(d.eps_bar),
            pick(args.mu, fc.mu_bar).unwrap_or(d.mu_bar),
        )?;
        let mut tolerances = Tolerances::default();
        for (k, v) in &file.tolerances {
            let slot = match k.as_str() {
                "trunc" => &mut tolerances.trunc,
                "agree" => &mut tolerances.agree,
                "com" => &mut tolerances.com,
                "rec" => &mut tolerances.rec,
                other => return Err(Error::Config(format!("unknown tolerance '{other}'"))),
            };
            *slot = *v;
        }
        let flag_tols = [
            (args.tol_trunc, &mut tolerances.trunc),
            (args.tol_agree, &mut tolerances.agree),
            (args.tol_com, &mut tolerances.com),
            (args.tol_rec, &mut tolerances.rec),
        ];
        for (flag, slot) in flag_tols {
            if let Some(v) = flag {
                *slot = v;
            }
        }
        for v in [tolerances.trunc, tolerances.agree, tolerances.com, tolerances.rec] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("tolerance {v} must be non-negative")));
            }
        }
        let times = pick(args.times.clone(), file.times).unwrap_or_else(|| vec![0.0, 0.5, 1.0]);
        if times.is_empty() {
            return Err(Error::Config("times must not be empty".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::Config("times must be finite and strictly increasing".into()));
        }
        let derivative_mode = match args.fd_dt {
            Some(dt) => DerivativeMode::FiniteDifference { dt },
            None => file.derivative_mode.unwrap_or_default(),
        };
        let fg = file.grid;
        Ok(Self {
            scenario,
            constants,
            times,
            tolerances,
            output_dir: pick(args.out.clone(), file.output_dir).unwrap_or_else(|| PathBuf::from(".")),
            emit: pick(args.emit.clone(), file.emit)
                .unwrap_or_default()
                .into_iter()
                .collect(),
            grid: GridConfig {
                n: pick(args.grid_n, fg.n),
                lo: pick(args.grid_lo, fg.lo),
                hi: pick(args.grid_hi, fg.hi),
            },
            derivative_mode,
        })
    }

    pub fn scenario_name(&self) -> &str {
        self.scenario.name.as_deref().unwrap_or("")
    }

    pub fn build_scenario(&self) -> Result<Box<dyn Scenario>> {
        let s = &self.scenario;
        let c = self.constants;
        Ok(match self.scenario_name() {
            "example1" => Box::new(Example1::new(s.a.unwrap_or(2.0), s.x0.unwrap_or(0.0), c)?),
            "example2" => Box::new(Example2::new(
                s.q.unwrap_or(4.0 * std::f64::consts::PI),
                s.r0.unwrap_or(1.0),
                c,
            )?),
            "synthetic" => Box::new(SyntheticFlow::random(
                s.seed.unwrap_or(0),
                s.dim.unwrap_or(3),
                c,
            )?),
            "sampled" => {
                let path = s
                    .input
                    .as_ref()
                    .ok_or_else(|| Error::Config("sampled scenario needs --input".into()))?;
                let text = std::fs::read_to_string(path)?;
                let spec: SampledSpec = serde_json::from_str(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                Box::new(SampledScenario::from_spec("sampled", &spec, &c)?)
            }
            other => return Err(Error::Config(format!("unknown scenario '{other}'"))),
        })
    }

    /// The scenario's default grid with any `n`, `lo`, `hi` overrides.
    pub fn build_grid(&self, scenario: &dyn Scenario) -> Result<Grid> {
        let base = GridSpec::from(&scenario.default_grid()?);
        GridSpec {
            n: self.grid.n.unwrap_or(base.n),
            lo: self.grid.lo.unwrap_or(base.lo),
            hi: self.grid.hi.unwrap_or(base.hi),
            ..base
        }
        .build()
    }

    fn prepare_output(&self) -> Result<()> {
        std::fs::create_dir_all(&self.output_dir)?;
        Ok(())
    }

    fn out(&self, name: &str) -> PathBuf {
        self.output_dir.join(name)
    }
}

/// A named check: observed value, bound, outcome.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Check {
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn new(value: f64, bound: f64) -> Self {
        Self {
            value,
            bound,
            pass: value <= bound,
        }
    }
}

/// Every quantity `verify` computes at one time.
#[derive(Debug, Clone)]
pub struct TimeReport {
    pub t: f64,
    pub residuals: BTreeMap<&'static str, f64>,
    pub agreement: Option<em::AgreementReport>,
    pub agreement_note: Option<String>,
    pub com: std::result::Result<ComReport, String>,
    pub checks: BTreeMap<String, Check>,
}

impl TimeReport {
    pub fn pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        let agreement = match (&self.agreement, &self.agreement_note) {
            (Some(a), _) => json!({
                "verdict": a.verdict,
                "ampere": a.ampere_residual,
                "gauss": a.gauss_residual,
                "scale": a.scale,
            }),
            (None, Some(note)) => json!({ "skipped": note }),
            (None, None) => Value::Null,
        };
        let com = match &self.com {
            Ok(r) => serde_json::to_value(r).unwrap_or(Value::Null),
            Err(note) => json!({ "skipped": note }),
        };
        json!({
            "t": self.t,
            "residuals": self.residuals,
            "agreement": agreement,
            "com": com,
            "checks": self.checks,
            "pass": self.pass(),
        })
    }
}

/// `dE/dt` by a time difference of the velocity route; central when the
/// scenario allows it, one-sided otherwise.
fn electric_rate(
    scenario: &dyn Scenario,
    grid: &Grid,
    t: f64,
    cfg: &RunConfig,
) -> Result<VectorField> {
    let c = &cfg.constants;
    let e_at = |s: f64| -> Result<VectorField> {
        electric_field(&evaluate(scenario, grid, s, cfg.derivative_mode)?, c)
    };
    let h = E_RATE_STEP * t.abs().max(1.0);
    if let (Ok(p), Ok(m)) = (e_at(t + h), e_at(t - h)) {
        return Ok(p.sub(&m)?.scale(0.5 / h));
    }
    let e0 = e_at(t)?;
    match e_at(t + h) {
        Ok(p) => Ok(p.sub(&e0)?.scale(1.0 / h)),
        Err(_) => Ok(e0.sub(&e_at(t - h)?)?.scale(1.0 / h)),
    }
}

/// Rounding allowance: residuals of exactly satisfied identities sit at a
/// few hundred ulps of the operands, divided by the stencil's power of `h`.
const ROUNDING: f64 = 1e3 * f64::EPSILON;

/// Evaluates one snapshot: bridge residuals, force law, analogue fields,
/// agreement and center-of-mass identities.
///
/// Every residual of a discretized identity is judged against
/// `trunc_factor x truncation x natural scale + rounding`, where
/// `truncation` is the scenario's own `O(h^2)` stencil-error estimate.
pub fn verify_time(scenario: &dyn Scenario, grid: &Grid, t: f64, cfg: &RunConfig) -> Result<TimeReport> {
    let c = &cfg.constants;
    let tol = cfg.tolerances;
    let snap = evaluate(scenario, grid, t, cfg.derivative_mode)?;
    let br = forward(&snap, c)?;
    let h = grid.min_spacing();
    let k = tol.trunc * scenario.truncation(grid, t);
    // Time differences amplify rounding by roughly 1/dt.
    let rounding = match cfg.derivative_mode {
        DerivativeMode::Analytic => ROUNDING,
        DerivativeMode::FiniteDifference { dt } => ROUNDING * (t.abs().max(1.0) / dt).max(1.0),
    };
    let bound = |scale: f64| k * scale + rounding * scale;
    // Relative O(dt^2) error of a time difference, on the field itself.
    let time_trunc = match cfg.derivative_mode {
        DerivativeMode::Analytic => 0.0,
        DerivativeMode::FiniteDifference { dt } => (dt / t.abs().max(1.0)).powi(2),
    };
    let mut residuals = BTreeMap::new();
    let mut checks = BTreeMap::new();

    let div_fv = divergence(&snap.f.scaled_vector(&snap.v)?)?;
    let cont = bridge::continuity_residual(&snap.f, &snap.df_dt, &snap.v)?.max_abs();
    let flux_scale = snap.df_dt.max_abs() + div_fv.max_abs();
    residuals.insert("continuity", cont);
    let f_norm = snap.f.max_abs();
    checks.insert(
        "continuity".into(),
        Check::new(cont, bound(flux_scale) + time_trunc * f_norm),
    );

    // Natural scale of the wave equation: the size of each of its terms.
    let lap_psi = complex_laplacian(&br.psi)?;
    let adv = bridge::advection(&snap.a_vec, &br.psi)?;
    let wave_scale = br.dpsi_dt.max_abs() / c.beta.abs()
        + (c.alpha / c.beta).abs() * lap_psi.max_abs()
        + (c.gamma / c.beta).abs() * adv.max_abs()
        + br.u_psi_scale;
    residuals.insert("schrodinger", br.schrodinger_residual);
    checks.insert(
        "schrodinger".into(),
        Check::new(br.schrodinger_residual, bound(wave_scale)),
    );

    let im = im_u(&snap.f, &snap.df_dt, &snap.v, c)?.max_abs();
    let min_2bf = snap
        .f
        .data()
        .iter()
        .map(|f| (2.0 * c.beta * f).abs())
        .fold(f64::INFINITY, f64::min);
    residuals.insert("im_u", im);
    checks.insert(
        "im_u".into(),
        Check::new(im, bound(flux_scale / min_2bf) + time_trunc * f_norm / min_2bf),
    );

    let fields = em_fields(&snap, &br.u_pot, c)?;
    let mat = material_derivative(&snap.v, &snap.dv_dt)?;
    let lorentz = lorentz_residual(&mat, &fields.e_field, &fields.b_field, &snap.v, c)?.max_norm();
    let force_scale = mat.max_norm()
        + c.gamma.abs() * (fields.e_field.max_norm() + snap.v.cross(&fields.b_field)?.max_norm());
    residuals.insert("lorentz", lorentz);
    checks.insert("lorentz".into(), Check::new(lorentz, bound(force_scale)));

    let displacement = match scenario.displacement(grid, t) {
        Some(d) => Some(d?),
        None => None,
    };
    let (e_rate, agreement_note) = if displacement.is_some() {
        (None, None)
    } else {
        match electric_rate(scenario, grid, t, cfg) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(format!("no time derivative of E: {e}"))),
        }
    };
    let (em_rep, agreement) = if displacement.is_some() || e_rate.is_some() {
        let (r, a) = em_report(&snap, &fields, displacement, e_rate.as_ref(), c, tol.agree)?;
        (Some(r), Some(a))
    } else {
        (None, None)
    };
    let (faraday, div_b, route_gap, chi_gauss) = match em_rep {
        Some(r) => (r.faraday, r.div_b, r.route_gap_e, r.chi_gauss_gap),
        None => {
            let faraday = em::faraday_residual(&fields.e_field, &fields.db_dt)?.max_norm();
            let div_b = if grid.dim() == 3 {
                divergence(&fields.b_field)?.max_abs()
            } else {
                0.0
            };
            let route = fields.e_field.sub(&fields.e_from_chi)?.max_norm();
            let chi_gauss = em::chi_gauss_gap(&fields.e_field, &fields.chi, c)?.max_abs();
            (faraday, div_b, route, chi_gauss)
        }
    };
    residuals.insert("faraday", faraday);
    residuals.insert("div_b", div_b);
    residuals.insert("route_gap_E", route_gap);
    residuals.insert("chi_gauss_gap", chi_gauss);
    let e_norm = fields.e_field.max_norm();
    let curl_scale = if grid.dim() == 3 {
        crate::fields::curl(&fields.e_field)?.max_norm() + fields.db_dt.max_norm()
    } else {
        0.0
    };
    checks.insert(
        "faraday".into(),
        Check::new(faraday, bound(curl_scale) + rounding * e_norm / h),
    );
    let v_norm = snap.v.max_norm() / c.gamma.abs().max(f64::MIN_POSITIVE);
    checks.insert(
        "div_b".into(),
        Check::new(div_b, bound(fields.b_field.max_norm() / h) + rounding * v_norm / (h * h)),
    );
    let e_scale = e_norm + fields.e_from_chi.max_norm();
    checks.insert(
        "route_gap_E".into(),
        Check::new(
            route_gap,
            bound(e_scale) + rounding * fields.chi_from_u.max_abs() / h + scenario.a_rate_floor(),
        ),
    );
    let div_e_scale = divergence(&fields.e_field)?.max_abs() + laplacian(&fields.chi)?.max_abs();
    let chi_gauss_floor =
        rounding * (e_norm / h + fields.chi.max_abs() / (h * h)) + scenario.a_rate_floor() / h;
    checks.insert(
        "chi_gauss_gap".into(),
        Check::new(chi_gauss, c.eps_bar.abs() * (bound(div_e_scale) + chi_gauss_floor)),
    );

    if cfg.scenario_name() == "sampled" {
        // v = -alpha grad Phi + gamma A with Phi = 2 phi.
        let recomposed = crate::fields::gradient(&snap.phi.scale(2.0))?
            .scale(-c.alpha)
            .add(&snap.a_vec.scale(c.gamma))?;
        let gap = recomposed.sub(&snap.v)?.max_norm();
        residuals.insert("recompose", gap);
        checks.insert("recompose".into(), Check::new(gap, tol.rec * snap.v.max_norm()));
    }

    let com = if grid.boundary() == Boundary::Decaying {
        match com_diagnostics(&snap, &fields.e_field, &fields.b_field, &br.u_pot, c) {
            Ok(r) => {
                for key in ["transport", "force_balance", "quantum_force", "pressure_symmetry", "com_potential"] {
                    let g = r.identity_gaps[key];
                    let limit = if key == "com_potential" { tol.com * g.scale } else { bound(g.scale) };
                    checks.insert(format!("com.{key}"), Check::new(g.residual, limit));
                }
                Ok(r)
            }
            Err(Error::BoundaryFloor { ratio }) => Err(format!(
                "density does not decay at the box edge (edge/interior = {ratio:.3e})"
            )),
            Err(e) => return Err(e),
        }
    } else {
        Err("center-of-mass identities need a decaying grid".to_owned())
    };

    Ok(TimeReport {
        t: snap.t,
        residuals,
        agreement,
        agreement_note,
        com,
        checks,
    })
}

fn time_tag(k: usize) -> String {
    format!("t{k:03}")
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn write_field_dumps(cfg: &RunConfig, k: usize, snap: &Snapshot, psi: &ComplexField, u: &ScalarField) -> Result<()> {
    let tag = time_tag(k);
    write_scalar_csv(&cfg.out(&format!("{tag}_f.csv")), &snap.f)?;
    write_vector_csv(&cfg.out(&format!("{tag}_v.csv")), &snap.v)?;
    write_complex_csv(&cfg.out(&format!("{tag}_psi.csv")), psi)?;
    write_scalar_csv(&cfg.out(&format!("{tag}_U.csv")), u)?;
    Ok(())
}

fn write_com_csv(path: &Path, rows: &[(f64, &ComReport)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "t", "n_total", "com_accel_x", "com_accel_y", "com_accel_z", "mean_grad_u_x",
        "mean_grad_u_y", "mean_grad_u_z",
    ])?;
    for (t, r) in rows {
        let vals = [
            *t,
            r.n_total,
            r.com_accel[0],
            r.com_accel[1],
            r.com_accel[2],
            r.mean_grad_u[0],
            r.mean_grad_u[1],
            r.mean_grad_u[2],
        ];
        w.write_record(vals.iter().map(|v| format!("{v:.16e}")))?;
    }
    w.flush()?;
    Ok(())
}

/// `verify`: every check at every time, report.json, optional dumps.
pub fn cmd_verify(cfg: &RunConfig) -> Result<(bool, Value)> {
    cfg.prepare_output()?;
    let scenario = cfg.build_scenario()?;
    let grid = cfg.build_grid(scenario.as_ref())?;
    let mut per_time = Vec::new();
    let mut reports = Vec::new();
    for (k, &t) in cfg.times.iter().enumerate() {
        log::info!("{}: evaluating t = {t}", scenario.name());
        let rep = verify_time(scenario.as_ref(), &grid, t, cfg)?;
        for (name, check) in rep.checks.iter().filter(|(_, c)| !c.pass) {
            log::warn!("t = {t}: check {name} failed ({:.3e} > {:.3e})", check.value, check.bound);
        }
        let tag = time_tag(k);
        if cfg.emit.contains(&Emit::Fields) || cfg.emit.contains(&Emit::Residuals) {
            let snap = evaluate(scenario.as_ref(), &grid, t, cfg.derivative_mode)?;
            let br = forward(&snap, &cfg.constants)?;
            if cfg.emit.contains(&Emit::Fields) {
                write_field_dumps(cfg, k, &snap, &br.psi, &br.u_pot)?;
            }
            if cfg.emit.contains(&Emit::Residuals) {
                let res = bridge::schrodinger_residual(&br.psi, &br.dpsi_dt, &br.u_pot, &snap.a_vec, &cfg.constants)?;
                write_complex_csv(&cfg.out(&format!("{tag}_schrodinger_residual.csv")), &res)?;
                let cont = bridge::continuity_residual(&snap.f, &snap.df_dt, &snap.v)?;
                write_scalar_csv(&cfg.out(&format!("{tag}_continuity_residual.csv")), &cont)?;
                let im = im_u(&snap.f, &snap.df_dt, &snap.v, &cfg.constants)?;
                write_scalar_csv(&cfg.out(&format!("{tag}_im_u.csv")), &im)?;
            }
        }
        if cfg.emit.contains(&Emit::Agreement) {
            if let Some(a) = &rep.agreement {
                write_vector_csv(&cfg.out(&format!("{tag}_ampere_residual.csv")), &a.ampere_field)?;
                write_scalar_csv(&cfg.out(&format!("{tag}_gauss_residual.csv")), &a.gauss_field)?;
            }
        }
        per_time.push(rep.to_json());
        reports.push(rep);
    }
    if cfg.emit.contains(&Emit::Com) {
        let rows: Vec<(f64, &ComReport)> = reports
            .iter()
            .filter_map(|r| r.com.as_ref().ok().map(|c| (r.t, c)))
            .collect();
        write_com_csv(&cfg.out("com.csv"), &rows)?;
    }
    if cfg.emit.contains(&Emit::SphereTrajectory) {
        if cfg.scenario_name() != "example2" {
            return Err(Error::Config("sphere_trajectory output needs the example2 scenario".into()));
        }
        let state0 = SphereState::initial(
            cfg.scenario.q.unwrap_or(4.0 * std::f64::consts::PI),
            cfg.scenario.r0.unwrap_or(1.0),
            &cfg.constants,
        )?;
        let t_end = *cfg.times.last().expect("times are non-empty");
        write_sphere_csv(&cfg.out("sphere.csv"), &state0, t_end.max(0.0), 0.01)?;
    }
    let pass = reports.iter().all(TimeReport::pass);
    let report = json!({
        "scenario": {
            "name": scenario.name(),
            "params": cfg.scenario,
            "grid": GridSpec::from(&grid),
            "derivative_mode": cfg.derivative_mode,
        },
        "constants": cfg.constants,
        "tolerances": cfg.tolerances,
        "per_time": per_time,
        "pass": pass,
    });
    write_json(&cfg.out("report.json"), &report)?;
    Ok((pass, report))
}

/// Result of the `bridge` subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct BridgeSummary {
    pub t: f64,
    pub density_gap: Option<f64>,
    pub velocity_gap: Option<f64>,
    pub bound: Option<f64>,
}

/// `bridge`: forward emits `psi`/`U` dumps, inverse emits `f`/`v` dumps,
/// round trip runs both and checks the velocity gap against
/// `10 x truncation x max(1, |v|)`.
pub fn cmd_bridge(cfg: &RunConfig, direction: Direction, psi_file: Option<&Path>) -> Result<(bool, Vec<BridgeSummary>)> {
    cfg.prepare_output()?;
    let c = &cfg.constants;
    if let (Direction::Inverse, Some(path)) = (direction, psi_file) {
        let scenario = cfg.build_scenario()?;
        let grid = cfg.build_grid(scenario.as_ref())?;
        let psi = read_psi(path, &grid)?;
        let (f, v) = inverse(&psi, &VectorField::zeros(&grid), c)?;
        write_scalar_csv(&cfg.out("inverse_f.csv"), &f)?;
        write_vector_csv(&cfg.out("inverse_v.csv"), &v)?;
        return Ok((true, Vec::new()));
    }
    let scenario = cfg.build_scenario()?;
    let grid = cfg.build_grid(scenario.as_ref())?;
    let mut pass = true;
    let mut out = Vec::new();
    for (k, &t) in cfg.times.iter().enumerate() {
        let tag = time_tag(k);
        let snap = evaluate(scenario.as_ref(), &grid, t, cfg.derivative_mode)?;
        let br = forward(&snap, c)?;
        let mut summary = BridgeSummary {
            t,
            density_gap: None,
            velocity_gap: None,
            bound: None,
        };
        if direction != Direction::Inverse {
            write_scalar_csv(&cfg.out(&format!("{tag}_psi_re.csv")), &br.psi.re())?;
            write_scalar_csv(&cfg.out(&format!("{tag}_psi_im.csv")), &br.psi.im())?;
            write_scalar_csv(&cfg.out(&format!("{tag}_U.csv")), &br.u_pot)?;
        }
        if direction != Direction::Forward {
            let (f, v) = inverse(&br.psi, &snap.a_vec, c)?;
            write_scalar_csv(&cfg.out(&format!("{tag}_f.csv")), &f)?;
            write_vector_csv(&cfg.out(&format!("{tag}_v.csv")), &v)?;
            if direction == Direction::RoundTrip {
                let dv = v.sub(&snap.v)?.max_norm();
                let df = f.sub(&snap.f)?.max_abs();
                let bound = 10.0 * scenario.truncation(&grid, t) * snap.v.max_norm().max(1.0);
                pass &= dv <= bound;
                summary.density_gap = Some(df);
                summary.velocity_gap = Some(dv);
                summary.bound = Some(bound);
            }
        }
        out.push(summary);
    }
    write_json(&cfg.out("bridge.json"), &serde_json::to_value(&out)?)?;
    Ok((pass, out))
}

fn read_psi(path: &Path, grid: &Grid) -> Result<ComplexField> {
    let (header, rows) = crate::fields::io::read_csv(path)?;
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("{}: no '{name}' column", path.display())))
    };
    let (re, im) = (col("re")?, col("im")?);
    if rows.len() != grid.len() {
        return Err(Error::Config(format!(
            "{}: {} rows for a grid of {} nodes",
            path.display(),
            rows.len(),
            grid.len()
        )));
    }
    let data = rows
        .iter()
        .map(|r| num_complex::Complex64::new(r[re], r[im]))
        .collect();
    ComplexField::from_vec(*grid, data)
}

/// Writes the sphere trajectory with columns `t, R, R_closed_form_gap, a, b, f`
/// and returns the largest gap.
pub fn write_sphere_csv(path: &Path, state0: &SphereState, t_end: f64, dt: f64) -> Result<f64> {
    let traj = sphere_integrate(state0, t_end, dt)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["t", "R", "R_closed_form_gap", "a", "b", "f"])?;
    let mut worst = 0.0f64;
    for s in &traj.states {
        let closed = sphere_radius_at(s.t, state0)?;
        let gap = (s.r_radius - closed).abs() / closed;
        worst = worst.max(gap);
        let row = [s.t, s.r_radius, gap, s.a_coef, s.b_coef, s.density()];
        w.write_record(row.iter().map(|v| format!("{v:.16e}")))?;
    }
    w.flush()?;
    Ok(worst)
}

/// `sphere`: integrates to `t_end`, writes `sphere.csv`, returns whether
/// every gap is within tolerance together with the final state.
pub fn cmd_sphere(args: &SphereArgs) -> Result<(bool, SphereState)> {
    let d = Constants::default();
    let gamma = args.gamma.unwrap_or(d.gamma);
    let eps = args.eps.unwrap_or(d.eps_bar);
    let c = Constants::new(d.alpha, d.beta, gamma, eps, d.mu_bar)?;
    let q = match (args.gamma_bar, args.q) {
        (Some(gb), _) => {
            let g = c.require_gamma()?;
            -4.0 * std::f64::consts::PI * eps * gb / g
        }
        (None, Some(q)) => q,
        (None, None) => -4.0 * std::f64::consts::PI * eps / c.require_gamma()?,
    };
    let state0 = SphereState::initial(q, args.r0, &c)?;
    let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    let worst = write_sphere_csv(&dir.join("sphere.csv"), &state0, args.t_end, args.dt)?;
    let traj = sphere_integrate(&state0, args.t_end, args.dt)?;
    let last = *traj.last();
    log::info!(
        "sphere: t = {}, R = {:.10}, worst closed-form gap {worst:.3e}",
        last.t,
        last.r_radius
    );
    Ok((worst <= args.tol_gap, last))
}

/// `fields`: dumps `chi`, `E`, `B`, `D`, `H` per time and a summary JSON.
pub fn cmd_fields(cfg: &RunConfig) -> Result<Value> {
    cfg.prepare_output()?;
    let c = &cfg.constants;
    let scenario = cfg.build_scenario()?;
    let grid = cfg.build_grid(scenario.as_ref())?;
    let mut rows = Vec::new();
    for (k, &t) in cfg.times.iter().enumerate() {
        let tag = time_tag(k);
        let snap = evaluate(scenario.as_ref(), &grid, t, cfg.derivative_mode)?;
        let u = bridge::reconstruct_potential(&snap.f, &snap.phi, &snap.dphi_dt, &snap.a_vec, c)?;
        let fields = em_fields(&snap, &u, c)?;
        write_scalar_csv(&cfg.out(&format!("{tag}_chi.csv")), &fields.chi)?;
        write_vector_csv(&cfg.out(&format!("{tag}_E.csv")), &fields.e_field)?;
        write_vector_csv(&cfg.out(&format!("{tag}_B.csv")), &fields.b_field)?;
        write_vector_csv(&cfg.out(&format!("{tag}_D.csv")), &fields.d_field)?;
        write_vector_csv(&cfg.out(&format!("{tag}_H.csv")), &fields.h_field)?;
        let b_check = magnetic_field(&snap.v, c)?.max_norm();
        rows.push(json!({
            "t": t,
            "max_E": fields.e_field.max_norm(),
            "max_B": b_check,
            "route_gap_E": fields.e_field.sub(&fields.e_from_chi)?.max_norm(),
            "chi_gap": fields.chi.sub(&fields.chi_from_u)?.max_abs(),
        }));
    }
    let summary = Value::Array(rows);
    write_json(&cfg.out("fields.json"), &summary)?;
    Ok(summary)
}

/// `com`: center-of-mass report per time, written to `com.json` and `com.csv`.
pub fn cmd_com(cfg: &RunConfig) -> Result<Vec<(f64, ComReport)>> {
    cfg.prepare_output()?;
    let c = &cfg.constants;
    let scenario = cfg.build_scenario()?;
    let grid = cfg.build_grid(scenario.as_ref())?;
    let mut out = Vec::new();
    for &t in &cfg.times {
        let snap = evaluate(scenario.as_ref(), &grid, t, cfg.derivative_mode)?;
        let u = bridge::reconstruct_potential(&snap.f, &snap.phi, &snap.dphi_dt, &snap.a_vec, c)?;
        let e = electric_field(&snap, c)?;
        let b = magnetic_field(&snap.v, c)?;
        out.push((t, com_diagnostics(&snap, &e, &b, &u, c)?));
    }
    let json_rows: Vec<Value> = out
        .iter()
        .map(|(t, r)| json!({ "t": t, "com": r }))
        .collect();
    write_json(&cfg.out("com.json"), &Value::Array(json_rows))?;
    let rows: Vec<(f64, &ComReport)> = out.iter().map(|(t, r)| (*t, r)).collect();
    write_com_csv(&cfg.out("com.csv"), &rows)?;
    Ok(out)
}

fn exit(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Runs a parsed command line and maps the outcome to an exit code.
pub fn run(cli: Cli) -> ExitCode {
    let outcome: Result<bool> = match cli.command {
        Command::Verify(args) => RunConfig::resolve(&args).and_then(|cfg| {
            let (pass, _) = cmd_verify(&cfg)?;
            println!(
                "verify {}: {} ({})",
                cfg.scenario_name(),
                if pass { "pass" } else { "FAIL" },
                cfg.out("report.json").display()
            );
            Ok(pass)
        }),
        Command::Bridge(args) => RunConfig::resolve(&args.run).and_then(|cfg| {
            let direction = if args.round_trip { Direction::RoundTrip } else { args.direction };
            let (pass, rows) = cmd_bridge(&cfg, direction, args.psi.as_deref())?;
            for r in rows.iter().filter(|r| r.velocity_gap.is_some()) {
                println!(
                    "t = {}: velocity gap {:.3e} (bound {:.3e}), density gap {:.3e}",
                    r.t,
                    r.velocity_gap.unwrap_or_default(),
                    r.bound.unwrap_or_default(),
                    r.density_gap.unwrap_or_default()
                );
            }
            Ok(pass)
        }),
        Command::Sphere(args) => cmd_sphere(&args).map(|(pass, last)| {
            println!("t = {}, R = {:.10}", last.t, last.r_radius);
            pass
        }),
        Command::Fields(args) => RunConfig::resolve(&args).and_then(|cfg| {
            let summary = cmd_fields(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(true)
        }),
        Command::Com(args) => RunConfig::resolve(&args).and_then(|cfg| {
            for (t, r) in cmd_com(&cfg)? {
                println!("t = {t}: com_accel {:?}, <grad U> {:?}", r.com_accel, r.mean_grad_u);
            }
            Ok(true)
        }),
    };
    match outcome {
        Ok(pass) => exit(pass),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Entry point of the binary: logging from [`LOG_ENV`], argument parsing, run.
pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    run(Cli::parse())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(scenario: &str) -> RunArgs {
        RunArgs {
            scenario: Some(scenario.into()),
            ..RunArgs::default()
        }
    }

    #[test]
    fn flags_override_defaults() {
        let mut a = args("example1");
        a.alpha = Some(-0.25);
        a.times = Some(vec![0.0, 1.0]);
        a.tol_trunc = Some(3.0);
        let cfg = RunConfig::resolve(&a).unwrap();
        assert_eq!(cfg.constants.alpha, -0.25);
        assert_eq!(cfg.times, vec![0.0, 1.0]);
        assert_eq!(cfg.tolerances.trunc, 3.0);
        assert_eq!(cfg.tolerances.agree, TOL_AGREE);
    }

    #[test]
    fn decreasing_times_rejected() {
        let mut a = args("example1");
        a.times = Some(vec![1.0, 0.5]);
        assert!(matches!(RunConfig::resolve(&a), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_scenario_rejected() {
        let cfg = RunConfig::resolve(&args("nope")).unwrap();
        assert!(matches!(cfg.build_scenario(), Err(Error::Config(_))));
    }

    #[test]
    fn grid_overrides_keep_boundary() {
        let mut a = args("example1");
        a.grid_n = Some(64);
        let cfg = RunConfig::resolve(&a).unwrap();
        let s = cfg.build_scenario().unwrap();
        let g = cfg.build_grid(s.as_ref()).unwrap();
        assert_eq!(g.axis(0).n, 64);
        assert_eq!(g.boundary(), Boundary::Decaying);
    }

    #[test]
    fn emit_names_parse() {
        let cli = Cli::try_parse_from([
            "vlasov-bridge",
            "verify",
            "--scenario",
            "example1",
            "--emit",
            "fields,sphere_trajectory",
            "--a",
            "-1",
        ])
        .unwrap();
        let Command::Verify(a) = cli.command else { panic!() };
        assert_eq!(a.emit.unwrap(), vec![Emit::Fields, Emit::SphereTrajectory]);
        assert_eq!(a.a, Some(-1.0));
    }
}

//! Time-parameterised kinetic states `(f, v)` with their decompositions and
//! time derivatives.

mod example1;
mod example2;
mod sampled;
mod sphere;
mod synthetic;

use serde::{Deserialize, Serialize};

pub use example1::Example1;
pub use example2::Example2;
pub use sampled::{SampledFrame, SampledScenario, SampledSpec};
pub use sphere::{
    sphere_identity_residuals, sphere_integrate, sphere_radius_at, sphere_time_of_density,
    sphere_time_of_radius, SphereIdentityResiduals, SphereState, Trajectory,
};
pub use synthetic::{random_velocity, FluxDerivative, SyntheticFlow};

use crate::error::{Error, Result};
use crate::fields::{Grid, ScalarField, VectorField};

/// Everything the bridge and the field analogue need at one instant.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub f: ScalarField,
    pub df_dt: ScalarField,
    pub v: VectorField,
    pub dv_dt: VectorField,
    /// Wavefunction phase `phi = Phi / 2`.
    pub phi: ScalarField,
    pub dphi_dt: ScalarField,
    pub a_vec: VectorField,
    pub da_dt: VectorField,
}

impl Snapshot {
    pub fn grid(&self) -> &Grid {
        self.f.grid()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DerivativeMode {
    /// Time derivatives come from closed forms.
    #[default]
    Analytic,
    /// Time derivatives are second-order central differences with step `dt`.
    FiniteDifference { dt: f64 },
}

/// A kinetic state evolving in time.
pub trait Scenario {
    fn name(&self) -> &str;

    /// Grid the scenario is designed to be sampled on.
    fn default_grid(&self) -> Result<Grid>;

    /// State at time `t` with closed-form time derivatives.
    fn snapshot(&self, grid: &Grid, t: f64) -> Result<Snapshot>;

    /// Closed-form potential `U`, when known.
    fn exact_potential(&self, _grid: &Grid, _t: f64) -> Option<Result<ScalarField>> {
        None
    }

    /// Scenario-specific displacement field `D` and its time derivative.
    /// `None` means the default `D = eps_bar E`.
    fn displacement(&self, _grid: &Grid, _t: f64) -> Option<Result<(VectorField, VectorField)>> {
        None
    }

    /// Leading stencil error scale for fields of unit size on `grid`.
    fn truncation(&self, grid: &Grid, t: f64) -> f64;

    /// Absolute error floor of `A_t` left by iterative field splits; zero
    /// when `A` is known in closed form.
    fn a_rate_floor(&self) -> f64 {
        0.0
    }
}

/// Snapshot using the requested derivative mode.
pub fn evaluate(
    scenario: &dyn Scenario,
    grid: &Grid,
    t: f64,
    mode: DerivativeMode,
) -> Result<Snapshot> {
    match mode {
        DerivativeMode::Analytic => scenario.snapshot(grid, t),
        DerivativeMode::FiniteDifference { dt } => finite_difference_snapshot(scenario, grid, t, dt),
    }
}

/// Replaces every time derivative by a second-order difference with step
/// `dt`: central where the scenario is defined on both sides of `t`,
/// one-sided forward otherwise (e.g. at the start of a trajectory).
pub fn finite_difference_snapshot(
    scenario: &dyn Scenario,
    grid: &Grid,
    t: f64,
    dt: f64,
) -> Result<Snapshot> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidStep(format!("finite-difference step {dt}")));
    }
    let mut s = scenario.snapshot(grid, t)?;
    let plus = scenario.snapshot(grid, t + dt)?;
    match scenario.snapshot(grid, t - dt) {
        Ok(minus) => {
            let k = 0.5 / dt;
            s.df_dt = plus.f.sub(&minus.f)?.scale(k);
            s.dv_dt = plus.v.sub(&minus.v)?.scale(k);
            s.dphi_dt = plus.phi.sub(&minus.phi)?.scale(k);
            s.da_dt = plus.a_vec.sub(&minus.a_vec)?.scale(k);
        }
        Err(_) => {
            let plus2 = scenario.snapshot(grid, t + 2.0 * dt)?;
            let k = 0.5 / dt;
            // (-3 g(t) + 4 g(t + dt) - g(t + 2 dt)) / (2 dt)
            s.df_dt = plus.f.scale(4.0).sub(&s.f.scale(3.0))?.sub(&plus2.f)?.scale(k);
            s.dv_dt = plus.v.scale(4.0).sub(&s.v.scale(3.0))?.sub(&plus2.v)?.scale(k);
            s.dphi_dt = plus.phi.scale(4.0).sub(&s.phi.scale(3.0))?.sub(&plus2.phi)?.scale(k);
            s.da_dt = plus
                .a_vec
                .scale(4.0)
                .sub(&s.a_vec.scale(3.0))?
                .sub(&plus2.a_vec)?
                .scale(k);
        }
    }
    Ok(s)
}

/// Largest relative gap between analytic and finite-difference derivatives:
/// `[f_t, v_t, phi_t, A_t]`, each relative to the analytic max-norm.
pub fn derivative_cross_check(
    scenario: &dyn Scenario,
    grid: &Grid,
    t: f64,
    dt: f64,
) -> Result<[f64; 4]> {
    let a = scenario.snapshot(grid, t)?;
    let d = finite_difference_snapshot(scenario, grid, t, dt)?;
    let rel = |gap: f64, scale: f64| if scale > 0.0 { gap / scale } else { gap };
    Ok([
        rel(a.df_dt.sub(&d.df_dt)?.max_abs(), a.df_dt.max_abs()),
        rel(a.dv_dt.sub(&d.dv_dt)?.max_norm(), a.dv_dt.max_norm()),
        rel(a.dphi_dt.sub(&d.dphi_dt)?.max_abs(), a.dphi_dt.max_abs()),
        rel(a.da_dt.sub(&d.da_dt)?.max_norm(), a.da_dt.max_norm()),
    ])
}

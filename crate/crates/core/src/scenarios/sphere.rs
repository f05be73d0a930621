//! Coulomb expansion of a uniformly charged sphere.
//!
//! The radius obeys `R'' = gamma_bar / R^2` with `R(0) = R0`, `R'(0) = 0`,
//! which has the first integral `R'^2 = 2 gamma_bar (1/R0 - 1/R)` and the
//! closed-form inverse
//!
//! ```text
//! t(R) = R0^{3/2} / sqrt(2 gamma_bar) [ sqrt(x (x - 1)) + acosh(sqrt x) ],  x = R / R0.
//! ```
//!
//! Inside the sphere the density is uniform, `f = 3a` with `a = Q/(4 pi R^3)`,
//! and the velocity is the linear profile `v = b r` with `b = R'/R`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::Constants;

/// Relative agreement required between step `h` and `h/2` integrations.
pub const ODE_REL_TOL: f64 = 1e-8;
const MAX_HALVINGS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereState {
    pub t: f64,
    /// Sphere radius `R`.
    pub r_radius: f64,
    /// Expansion speed `R'`.
    pub r_dot: f64,
    /// `a = Q / (4 pi R^3)`; the density is `3a`.
    pub a_coef: f64,
    /// Velocity slope `b = R'/R`.
    pub b_coef: f64,
    pub q_charge: f64,
    /// `gamma_bar = -gamma Q / (4 pi eps_bar)`, positive for repulsion.
    pub gamma_bar: f64,
    pub r0: f64,
}

impl SphereState {
    /// State at `t = 0`: radius `r0`, at rest.
    pub fn initial(q_charge: f64, r0: f64, c: &Constants) -> Result<Self> {
        c.validate()?;
        let gamma_bar = -c.gamma * q_charge / (4.0 * PI * c.eps_bar);
        if !(gamma_bar > 0.0) || !gamma_bar.is_finite() {
            return Err(Error::NonRepulsive { gamma_bar });
        }
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::InvalidConstants(format!("initial radius {r0} must be positive")));
        }
        Ok(Self::on_trajectory(q_charge, gamma_bar, r0, 0.0, r0, 0.0))
    }

    fn on_trajectory(q: f64, gamma_bar: f64, r0: f64, t: f64, r: f64, r_dot: f64) -> Self {
        Self {
            t,
            r_radius: r,
            r_dot,
            a_coef: q / (4.0 * PI * r.powi(3)),
            b_coef: r_dot / r,
            q_charge: q,
            gamma_bar,
            r0,
        }
    }

    /// Same trajectory at another point `(t, R, R')`.
    pub fn at(&self, t: f64, r: f64, r_dot: f64) -> Self {
        Self::on_trajectory(self.q_charge, self.gamma_bar, self.r0, t, r, r_dot)
    }

    /// Uniform density `3a`.
    pub fn density(&self) -> f64 {
        3.0 * self.a_coef
    }

    /// Initial density `3 Q / (4 pi R0^3)`.
    pub fn initial_density(&self) -> f64 {
        3.0 * self.q_charge / (4.0 * PI * self.r0.powi(3))
    }

    /// `a' = -3ab`.
    pub fn a_dot(&self) -> f64 {
        -3.0 * self.a_coef * self.b_coef
    }

    /// `b' = R''/R - b^2 = gamma_bar / R^3 - b^2`.
    pub fn b_dot(&self) -> f64 {
        self.gamma_bar / self.r_radius.powi(3) - self.b_coef * self.b_coef
    }

    /// `gamma / eps_bar`, recovered from `gamma_bar` and `Q`.
    pub fn gamma_over_eps(&self) -> f64 {
        -4.0 * PI * self.gamma_bar / self.q_charge
    }

    /// `R'^2 / 2 + gamma_bar / R`, conserved along the motion.
    pub fn energy(&self) -> f64 {
        0.5 * self.r_dot * self.r_dot + self.gamma_bar / self.r_radius
    }

    /// Speed from the first integral, `sqrt(2 gamma_bar (1/R0 - 1/R))`.
    pub fn speed_from_energy(&self, r: f64) -> f64 {
        (2.0 * self.gamma_bar * (1.0 / self.r0 - 1.0 / r)).max(0.0).sqrt()
    }
}

/// Closed-form time at which the radius reaches `r`.
pub fn sphere_time_of_radius(r: f64, state0: &SphereState) -> Result<f64> {
    if !(state0.gamma_bar > 0.0) {
        return Err(Error::NonRepulsive {
            gamma_bar: state0.gamma_bar,
        });
    }
    if !(r >= state0.r0) {
        return Err(Error::RadiusBelowInitial { r, r0: state0.r0 });
    }
    let x = r / state0.r0;
    let scale = state0.r0.powf(1.5) / (2.0 * state0.gamma_bar).sqrt();
    Ok(scale * ((x * (x - 1.0)).sqrt() + x.sqrt().acosh()))
}

/// Closed-form time at which the density has dropped to `f`, using
/// `R / R0 = (f0 / f)^{1/3}`.
pub fn sphere_time_of_density(f: f64, state0: &SphereState) -> Result<f64> {
    let f0 = state0.initial_density();
    if !(f > 0.0) || f > f0 {
        return Err(Error::InvalidConstants(format!(
            "density {f} must lie in (0, {f0}]"
        )));
    }
    let y = (f0 / f).cbrt();
    let scale = state0.r0.powf(1.5) / (2.0 * state0.gamma_bar).sqrt();
    Ok(scale * ((y * (y - 1.0)).max(0.0).sqrt() + y.sqrt().acosh()))
}

/// Radius at time `t` by bisection on the closed form.
pub fn sphere_radius_at(t: f64, state0: &SphereState) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidStep(format!("time {t} must be non-negative")));
    }
    let mut lo = state0.r0;
    let mut hi = 2.0 * state0.r0;
    while sphere_time_of_radius(hi, state0)? < t {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sphere_time_of_radius(mid, state0)? < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Uniformly spaced states produced by [`sphere_integrate`].
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub states: Vec<SphereState>,
    /// Step actually used (the requested step, possibly halved).
    pub step: f64,
}

impl Trajectory {
    pub fn last(&self) -> &SphereState {
        self.states.last().expect("trajectory is never empty")
    }

    /// Largest relative drift of the energy `R'^2/2 + gamma_bar/R`.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.states[0].energy();
        self.states
            .iter()
            .map(|s| (s.energy() - e0).abs() / e0.abs())
            .fold(0.0, f64::max)
    }

    /// Time at which the integrated radius reaches `r`, from a cubic
    /// Hermite interpolant through `(R, R')` and bisection.
    pub fn time_of_radius(&self, r: f64) -> Option<f64> {
        let k = self
            .states
            .windows(2)
            .position(|w| w[0].r_radius <= r && r <= w[1].r_radius)?;
        let (s0, s1) = (&self.states[k], &self.states[k + 1]);
        let h = s1.t - s0.t;
        let p = |tau: f64| {
            let (t2, t3) = (tau * tau, tau * tau * tau);
            (2.0 * t3 - 3.0 * t2 + 1.0) * s0.r_radius
                + (t3 - 2.0 * t2 + tau) * h * s0.r_dot
                + (-2.0 * t3 + 3.0 * t2) * s1.r_radius
                + (t3 - t2) * h * s1.r_dot
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if p(mid) < r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(s0.t + 0.5 * (lo + hi) * h)
    }
}

fn rk4_run(state0: &SphereState, t_end: f64, steps: usize) -> Vec<SphereState> {
    let g = state0.gamma_bar;
    let rhs = |y: [f64; 2]| [y[1], g / (y[0] * y[0])];
    let h = if steps == 0 { 0.0 } else { t_end / steps as f64 };
    let mut y = [state0.r_radius, state0.r_dot];
    let mut out = Vec::with_capacity(steps + 1);
    out.push(*state0);
    for i in 0..steps {
        let k1 = rhs(y);
        let k2 = rhs([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs([y[0] + h * k3[0], y[1] + h * k3[1]]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t = if i + 1 == steps { t_end } else { (i + 1) as f64 * h };
        out.push(state0.at(t, y[0], y[1]));
    }
    out
}

/// Classical fourth-order Runge-Kutta integration of `R'' = gamma_bar/R^2`
/// from `state0` to exactly `t_end`.
///
/// The step is the largest `h <= dt` dividing `t_end` evenly. The run is
/// accepted when a second run at `h/2` agrees on the final `(R, R')` to
/// relative [`ODE_REL_TOL`]; otherwise the step is halved and retried.
pub fn sphere_integrate(state0: &SphereState, t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidStep(format!("step {dt} must be positive")));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidStep(format!("end time {t_end} must be non-negative")));
    }
    if t_end == 0.0 {
        return Ok(Trajectory {
            states: vec![*state0],
            step: dt,
        });
    }
    let mut steps = (t_end / dt).ceil().max(1.0) as usize;
    for _ in 0..MAX_HALVINGS {
        let coarse = rk4_run(state0, t_end, steps);
        let fine = rk4_run(state0, t_end, 2 * steps);
        let (c, f) = (coarse.last().unwrap(), fine.last().unwrap());
        let scale_r = f.r_radius.abs();
        let scale_v = f.r_dot.abs().max(state0.speed_from_energy(f.r_radius));
        let ok_r = (c.r_radius - f.r_radius).abs() <= ODE_REL_TOL * scale_r;
        let ok_v = (c.r_dot - f.r_dot).abs() <= ODE_REL_TOL * scale_v.max(f64::MIN_POSITIVE);
        if ok_r && ok_v {
            return Ok(Trajectory {
                states: coarse,
                step: t_end / steps as f64,
            });
        }
        log::debug!("halving sphere step below {}", t_end / steps as f64);
        steps *= 2;
    }
    Err(Error::InvalidStep(
        "step-halving check did not reach the requested tolerance".into(),
    ))
}

/// Worst relative residuals of the trajectory identities
/// `b' + b^2 = -(gamma/eps_bar) a` and
/// `3 a a'' - 4 a'^2 - 9 (gamma/eps_bar) a^3 = 0`, with `b'` and `a''` taken
/// by fourth-order finite differences along the integrated trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereIdentityResiduals {
    pub velocity_slope: f64,
    pub density_ode: f64,
}

pub fn sphere_identity_residuals(traj: &Trajectory) -> Result<SphereIdentityResiduals> {
    let s = &traj.states;
    if s.len() < 5 {
        return Err(Error::InvalidStep(
            "identity check needs at least five trajectory points".into(),
        ));
    }
    let h = traj.step;
    let d4 = |g: &dyn Fn(&SphereState) -> f64, i: usize| {
        (-g(&s[i + 2]) + 8.0 * g(&s[i + 1]) - 8.0 * g(&s[i - 1]) + g(&s[i - 2])) / (12.0 * h)
    };
    let mut worst = SphereIdentityResiduals {
        velocity_slope: 0.0,
        density_ode: 0.0,
    };
    for i in 2..s.len() - 2 {
        let st = &s[i];
        let ge = st.gamma_over_eps();
        let b_dot = d4(&|x: &SphereState| x.b_coef, i);
        let rhs = -ge * st.a_coef;
        let r91 = (b_dot + st.b_coef * st.b_coef - rhs).abs() / rhs.abs();
        let a = st.a_coef;
        let a_dot = st.a_dot();
        let a_ddot = d4(&|x: &SphereState| x.a_dot(), i);
        let cubic = 9.0 * ge * a * a * a;
        let r92 = (3.0 * a * a_ddot - 4.0 * a_dot * a_dot - cubic).abs() / cubic.abs();
        worst.velocity_slope = worst.velocity_slope.max(r91);
        worst.density_ode = worst.density_ode.max(r92);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_state() -> SphereState {
        // gamma_bar = 1 with gamma = -1, eps_bar = 1 requires Q = 4 pi.
        SphereState::initial(4.0 * PI, 1.0, &Constants::default()).unwrap()
    }

    #[test]
    fn closed_form_values() {
        let s = unit_state();
        assert!((s.gamma_bar - 1.0).abs() < 1e-15);
        assert_eq!(sphere_time_of_radius(1.0, &s).unwrap(), 0.0);
        let t2 = sphere_time_of_radius(2.0, &s).unwrap();
        let ex = (2.0_f64.sqrt() + (1.0 + 2.0_f64.sqrt()).ln()) / 2.0_f64.sqrt();
        assert!((t2 - ex).abs() < 1e-14);
        assert!((t2 - 1.6232252).abs() < 1e-7);
        assert!(matches!(
            sphere_time_of_radius(0.5, &s),
            Err(Error::RadiusBelowInitial { .. })
        ));
    }

    #[test]
    fn density_form_matches_radius_form() {
        let s = unit_state();
        for r in [1.0, 1.7, 4.0] {
            let f = s.at(0.0, r, 0.0).density();
            let a = sphere_time_of_density(f, &s).unwrap();
            let b = sphere_time_of_radius(r, &s).unwrap();
            assert!((a - b).abs() < 1e-12 * b.max(1.0));
        }
    }

    #[test]
    fn closed_form_is_monotone() {
        let s = unit_state();
        let mut last = -1.0;
        for k in 0..50 {
            let t = sphere_time_of_radius(1.0 + 0.2 * k as f64, &s).unwrap();
            assert!(t > last);
            last = t;
        }
    }

    #[test]
    fn non_repulsive_rejected() {
        let c = Constants::default();
        assert!(matches!(
            SphereState::initial(-1.0, 1.0, &c),
            Err(Error::NonRepulsive { .. })
        ));
    }

    #[test]
    fn zero_end_time_gives_single_row() {
        let s = unit_state();
        let traj = sphere_integrate(&s, 0.0, 0.01).unwrap();
        assert_eq!(traj.states.len(), 1);
        assert_eq!(traj.last().r_radius, 1.0);
    }

    #[test]
    fn integration_lands_on_end_time_and_matches_inverse() {
        let s = unit_state();
        let t2 = sphere_time_of_radius(2.0, &s).unwrap();
        let traj = sphere_integrate(&s, t2, 0.01).unwrap();
        assert_eq!(traj.last().t, t2);
        assert!((traj.last().r_radius - 2.0).abs() < 1e-6 * 2.0);
        assert!(traj.energy_drift() < 1e-8);
        let r = sphere_radius_at(t2, &s).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn identities_hold_along_trajectory() {
        let s = unit_state();
        let traj = sphere_integrate(&s, 3.0, 0.01).unwrap();
        let res = sphere_identity_residuals(&traj).unwrap();
        assert!(res.velocity_slope < 1e-6, "{res:?}");
        assert!(res.density_ode < 1e-6, "{res:?}");
    }
}

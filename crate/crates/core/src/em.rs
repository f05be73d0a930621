//! Electromagnetic analogue of a kinetic state.
//!
//! From `(f, v)` and its split `v = -2 alpha grad phi + gamma A` the
//! analogue potentials and fields are
//!
//! ```text
//! chi = (|v|^2 / 2 - 2 alpha phi_t) / gamma
//!     = (2 alpha beta / gamma)(|gamma A|^2 / (4 alpha beta) + U + (alpha/beta) Q),
//! E   = -(v_t + grad |v|^2 / 2) / gamma  =  -grad chi - A_t,
//! B   = curl v / gamma,
//! ```
//!
//! with `Q = lap sqrt(f) / sqrt(f)`. The state is *strongly agreed* when, in
//! addition, `D_t + f v = curl H` and `div D = f` hold; otherwise it is
//! *weakly agreed*.

use serde::Serialize;

use crate::bridge::reconstruct_potential;
use crate::error::{Error, Result};
use crate::fields::{
    curl, divergence, gradient, laplacian, Constants, ScalarField, VectorField,
};
use crate::scenarios::Snapshot;

/// Default relative tolerance of the agreement classifier.
pub const TOL_AGREE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Strong,
    Weak,
}

/// The analogue fields at one instant, with both routes to `chi` and `E`.
#[derive(Debug, Clone)]
pub struct EmFields {
    /// `chi` from `(|v|^2/2 - 2 alpha phi_t)/gamma`.
    pub chi: ScalarField,
    /// `chi` from the potential `U`.
    pub chi_from_u: ScalarField,
    /// `E` from the velocity rate.
    pub e_field: VectorField,
    /// `E = -grad chi - A_t`.
    pub e_from_chi: VectorField,
    pub b_field: VectorField,
    pub db_dt: VectorField,
    pub d_field: VectorField,
    pub h_field: VectorField,
}

#[derive(Debug, Clone)]
pub struct AgreementReport {
    pub verdict: Verdict,
    /// Max-norm of `D_t + f v - curl H`.
    pub ampere_residual: f64,
    /// Max-norm of `div D - f`.
    pub gauss_residual: f64,
    /// `max(|f|, |curl H|)`, the scale the residuals are judged against.
    pub scale: f64,
    pub ampere_field: VectorField,
    pub gauss_field: ScalarField,
}

/// Serializable summary of every analogue-field check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmReport {
    pub verdict: Verdict,
    pub ampere_residual: f64,
    pub gauss_residual: f64,
    pub div_b: f64,
    pub faraday: f64,
    pub route_gap_e: f64,
    pub chi_gauss_gap: f64,
}

impl EmReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "verdict": self.verdict,
            "ampere_residual": self.ampere_residual,
            "gauss_residual": self.gauss_residual,
            "div_b": self.div_b,
            "faraday": self.faraday,
            "route_gap_E": self.route_gap_e,
            "chi_gauss_gap": self.chi_gauss_gap,
        })
    }
}

/// `chi = (|v|^2 / 2 - 2 alpha phi_t) / gamma`.
pub fn chi_field(snap: &Snapshot, c: &Constants) -> Result<ScalarField> {
    let g = c.require_gamma()?;
    snap.v
        .norm_sq()
        .scale(0.5)
        .sub(&snap.dphi_dt.scale(2.0 * c.alpha))
        .map(|s| s.scale(1.0 / g))
}

/// `chi = (2 alpha beta / gamma)(|gamma A|^2/(4 alpha beta) + U + (alpha/beta) Q)`.
pub fn chi_from_potential(
    snap: &Snapshot,
    u_pot: &ScalarField,
    c: &Constants,
) -> Result<ScalarField> {
    let g = c.require_gamma()?;
    let rho = snap.f.map(f64::sqrt);
    let q = laplacian(&rho)?.zip_with(&rho, |l, r| l / r)?;
    let rot = snap.a_vec.norm_sq().scale(g * g / (4.0 * c.alpha * c.beta));
    let inner = rot.add(u_pot)?.add(&q.scale(c.alpha / c.beta))?;
    Ok(inner.scale(2.0 * c.alpha * c.beta / g))
}

/// `E = -(v_t + grad |v|^2 / 2) / gamma`.
pub fn electric_field(snap: &Snapshot, c: &Constants) -> Result<VectorField> {
    let g = c.require_gamma()?;
    let grad_ke = gradient(&snap.v.norm_sq().scale(0.5))?;
    Ok(snap.dv_dt.add(&grad_ke)?.scale(-1.0 / g))
}

/// `E = -grad chi - A_t`.
pub fn electric_field_from_chi(chi: &ScalarField, da_dt: &VectorField) -> Result<VectorField> {
    gradient(chi)?.scale(-1.0).sub(da_dt)
}

/// `B = curl v / gamma`; identically zero in one dimension.
pub fn magnetic_field(v: &VectorField, c: &Constants) -> Result<VectorField> {
    let g = c.require_gamma()?;
    if v.grid().dim() == 1 {
        return Ok(VectorField::zeros(v.grid()));
    }
    Ok(curl(v)?.scale(1.0 / g))
}

/// `curl E + B_t`; zero in one dimension where both vanish identically.
pub fn faraday_residual(e: &VectorField, db_dt: &VectorField) -> Result<VectorField> {
    if e.grid().dim() == 1 {
        return Ok(VectorField::zeros(e.grid()));
    }
    curl(e)?.add(db_dt)
}

/// `div(eps_bar E) + eps_bar lap chi`, zero for an irrotational state.
pub fn chi_gauss_gap(e: &VectorField, chi: &ScalarField, c: &Constants) -> Result<ScalarField> {
    Ok(divergence(e)?
        .add(&laplacian(chi)?)?
        .scale(c.eps_bar))
}

/// All analogue fields. `D` defaults to `eps_bar E` and `H` to `B / mu_bar`.
pub fn em_fields(snap: &Snapshot, u_pot: &ScalarField, c: &Constants) -> Result<EmFields> {
    let chi = chi_field(snap, c)?;
    let chi_from_u = chi_from_potential(snap, u_pot, c)?;
    let e_field = electric_field(snap, c)?;
    let e_from_chi = electric_field_from_chi(&chi_from_u, &snap.da_dt)?;
    let b_field = magnetic_field(&snap.v, c)?;
    let db_dt = magnetic_field(&snap.dv_dt, c)?;
    Ok(EmFields {
        d_field: e_field.scale(c.eps_bar),
        h_field: b_field.scale(1.0 / c.mu_bar),
        chi,
        chi_from_u,
        e_field,
        e_from_chi,
        b_field,
        db_dt,
    })
}

/// Convenience: fields of a snapshot with `U` reconstructed on the fly.
pub fn em_fields_of(snap: &Snapshot, c: &Constants) -> Result<EmFields> {
    let u = reconstruct_potential(&snap.f, &snap.phi, &snap.dphi_dt, &snap.a_vec, c)?;
    em_fields(snap, &u, c)
}

/// Checks `D_t + f v = curl H` and `div D = f` against
/// `tol_agree * max(|f|, |curl H|)`.
pub fn classify_agreement(
    snap: &Snapshot,
    d_field: &VectorField,
    dd_dt: &VectorField,
    h_field: &VectorField,
    tol_agree: f64,
) -> Result<AgreementReport> {
    if !(tol_agree >= 0.0) {
        return Err(Error::Config(format!("agreement tolerance {tol_agree}")));
    }
    let grid = *snap.grid();
    let curl_h = if grid.dim() == 3 {
        curl(h_field)?
    } else {
        VectorField::zeros(&grid)
    };
    let flux = snap.f.scaled_vector(&snap.v)?;
    let ampere_field = dd_dt.add(&flux)?.sub(&curl_h)?;
    let gauss_field = divergence(d_field)?.sub(&snap.f)?;
    let scale = snap.f.max_abs().max(curl_h.max_norm());
    let ampere_residual = ampere_field.max_norm();
    let gauss_residual = gauss_field.max_abs();
    let strong = ampere_residual <= tol_agree * scale && gauss_residual <= tol_agree * scale;
    Ok(AgreementReport {
        verdict: if strong { Verdict::Strong } else { Verdict::Weak },
        ampere_residual,
        gauss_residual,
        scale,
        ampere_field,
        gauss_field,
    })
}

/// Every analogue-field check for one snapshot in one report.
///
/// `displacement` is `(D, D_t)`; when absent, `D = eps_bar E` with `D_t`
/// from `e_rate` (typically a time finite difference of `E`).
pub fn em_report(
    snap: &Snapshot,
    fields: &EmFields,
    displacement: Option<(VectorField, VectorField)>,
    e_rate: Option<&VectorField>,
    c: &Constants,
    tol_agree: f64,
) -> Result<(EmReport, AgreementReport)> {
    let (d, dd_dt) = match displacement {
        Some(pair) => pair,
        None => {
            let rate = e_rate.ok_or_else(|| {
                Error::MissingInput("time derivative of E for the default displacement".into())
            })?;
            (fields.d_field.clone(), rate.scale(c.eps_bar))
        }
    };
    let agreement = classify_agreement(snap, &d, &dd_dt, &fields.h_field, tol_agree)?;
    let div_b = if snap.grid().dim() == 3 {
        divergence(&fields.b_field)?.max_abs()
    } else {
        0.0
    };
    let faraday = faraday_residual(&fields.e_field, &fields.db_dt)?.max_norm();
    let route_gap_e = fields.e_field.sub(&fields.e_from_chi)?.max_norm();
    let chi_gauss = chi_gauss_gap(&fields.e_field, &fields.chi, c)?.max_abs();
    Ok((
        EmReport {
            verdict: agreement.verdict,
            ampere_residual: agreement.ampere_residual,
            gauss_residual: agreement.gauss_residual,
            div_b,
            faraday,
            route_gap_e,
            chi_gauss_gap: chi_gauss,
        },
        agreement,
    ))
}

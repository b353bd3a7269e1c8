//! Normalized spherical and cylindrical eigenfunctions and their ring-shape
//! and isotropic limits.
//!
//! Evaluation is restricted to the half-space z > 0 (θ < π/2). The angular
//! and axial factors carry the half-space normalizations
//! ∫₀^{π/2} Θ² sinθ dθ = ½ and ∫₀^∞ Z² dz = ½, so a full wavefunction has
//! norm ½ over the half-space.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::{Branch, CylindricalLabel, SphericalLabel, SystemParams};
use crate::specfun::{assoc_legendre, gegenbauer, gen_laguerre, hermite, jacobi_p, ln_factorial, ln_gamma};

/// (r, θ, φ) with r > 0 and θ ∈ (0, π/2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

/// (ρ, φ, z) with ρ > 0 and z > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylindricalPoint {
    pub rho: f64,
    pub phi: f64,
    pub z: f64,
}

impl SphericalPoint {
    pub fn to_cylindrical(self) -> CylindricalPoint {
        CylindricalPoint {
            rho: self.r * self.theta.sin(),
            phi: self.phi,
            z: self.r * self.theta.cos(),
        }
    }
}

impl CylindricalPoint {
    pub fn to_spherical(self) -> SphericalPoint {
        SphericalPoint {
            r: self.rho.hypot(self.z),
            theta: self.rho.atan2(self.z),
            phi: self.phi,
        }
    }
}

fn azimuthal(m: i32, phi: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), m as f64 * phi)
}

fn require_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive and finite, got {x}")))
    }
}

fn check_label_m(label_m: i32, params: &SystemParams) -> Result<()> {
    if label_m == params.m() {
        Ok(())
    } else {
        Err(domain(format!(
            "label has m = {label_m} but the system was built with m = {}",
            params.m()
        )))
    }
}

/// Θ_q(θ) = N_q sin^c θ cos^{½±b} θ P_q^{(c,±b)}(cos 2θ) on θ ∈ (0, π/2).
pub fn theta_angular(q: u32, params: &SystemParams, branch: Branch, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(domain(format!("theta must lie in (0, pi/2), got {theta}")));
    }
    let sb = params.signed_b(branch)?;
    let c = params.channel().c;
    let qf = q as f64;
    let ln_norm = 0.5
        * ((2.0 * qf + c + sb + 1.0).ln() + ln_factorial(q) + ln_gamma(qf + c + sb + 1.0)?
            - ln_gamma(qf + c + 1.0)?
            - ln_gamma(qf + sb + 1.0)?);
    let envelope = ln_norm + c * theta.sin().ln() + (0.5 + sb) * theta.cos().ln();
    Ok(envelope.exp() * jacobi_p(q, c, sb, (2.0 * theta).cos())?)
}

/// R_{n_r q}(r), normalized with measure r² dr.
pub fn radial_spherical(n_r: u32, q: u32, params: &SystemParams, branch: Branch, r: f64) -> Result<f64> {
    require_positive("r", r)?;
    let sb = params.signed_b(branch)?;
    let c = params.channel().c;
    let omega = params.omega();
    let power = 2.0 * q as f64 + c + sb + 0.5;
    let ln_norm =
        0.5 * (LN_2 + 1.5 * omega.ln() + ln_factorial(n_r) - ln_gamma(n_r as f64 + power + 1.5)?);
    let t = omega * r * r;
    let envelope = ln_norm + power * (omega.sqrt() * r).ln() - 0.5 * t;
    Ok(envelope.exp() * gen_laguerre(n_r, power + 0.5, t)?)
}

/// Ψ_{n_r q m}(r, θ, φ) = R Θ e^{imφ}/√(2π).
pub fn psi_spherical(label: &SphericalLabel, params: &SystemParams, point: SphericalPoint) -> Result<Complex64> {
    check_label_m(label.m, params)?;
    let radial = radial_spherical(label.n_r, label.q, params, label.branch, point.r)?;
    let angular = theta_angular(label.q, params, label.branch, point.theta)?;
    Ok(azimuthal(label.m, point.phi) * (radial * angular))
}

/// R_{n_ρ}(ρ), normalized with measure ρ dρ.
pub fn radial_cylindrical(n_rho: u32, params: &SystemParams, rho: f64) -> Result<f64> {
    require_positive("rho", rho)?;
    let c = params.channel().c;
    let omega = params.omega();
    let ln_norm = 0.5 * (LN_2 + omega.ln() + ln_factorial(n_rho) - ln_gamma(n_rho as f64 + c + 1.0)?);
    let t = omega * rho * rho;
    let envelope = ln_norm + c * (omega.sqrt() * rho).ln() - 0.5 * t;
    Ok(envelope.exp() * gen_laguerre(n_rho, c, t)?)
}

/// Z_p(z) = (−1)^p √(Ω^{½} p!/Γ(p±b+1)) e^{−Ωz²/2} (√Ω z)^{½±b} L_p^{±b}(Ωz²);
/// half-line norm ½.
pub fn z_axial(p: u32, params: &SystemParams, branch: Branch, z: f64) -> Result<f64> {
    require_positive("z", z)?;
    let sb = params.signed_b(branch)?;
    let omega = params.omega();
    let ln_norm = 0.5 * (0.5 * omega.ln() + ln_factorial(p) - ln_gamma(p as f64 + sb + 1.0)?);
    let t = omega * z * z;
    let envelope = ln_norm + (0.5 + sb) * (omega.sqrt() * z).ln() - 0.5 * t;
    let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * envelope.exp() * gen_laguerre(p, sb, t)?)
}

/// Ψ_{n_ρ p m}(ρ, φ, z) = R_{n_ρ}(ρ) Z_p(z) e^{imφ}/√(2π).
pub fn psi_cylindrical(
    label: &CylindricalLabel,
    params: &SystemParams,
    point: CylindricalPoint,
) -> Result<Complex64> {
    check_label_m(label.m, params)?;
    let radial = radial_cylindrical(label.n_rho, params, point.rho)?;
    let axial = z_axial(label.p, params, label.branch, point.z)?;
    Ok(azimuthal(label.m, point.phi) * (radial * axial))
}

/// Ring-shape angular function Θ_{lm}(θ; δ) in Gegenbauer form, valid on (0, π).
pub fn theta_ring(orbital: u32, m: i32, delta: f64, theta: f64) -> Result<f64> {
    let am = m.unsigned_abs();
    if orbital < am {
        return Err(domain(format!("orbital number {orbital} is below |m| = {am}")));
    }
    if !(theta > 0.0 && theta < PI) {
        return Err(domain(format!("theta must lie in (0, pi), got {theta}")));
    }
    if !(delta >= 0.0) {
        return Err(domain(format!("delta must be non-negative, got {delta}")));
    }
    let (l, amf) = (orbital as f64, am as f64);
    let lambda = amf + delta + 0.5;
    let ln_pre = (amf + delta) * LN_2
        + ln_gamma(lambda)?
        + 0.5
            * ((2.0 * l + 2.0 * delta + 1.0).ln() + ln_factorial(orbital - am)
                - (2.0 * PI).ln()
                - ln_gamma(l + amf + 2.0 * delta + 1.0)?);
    let envelope = ln_pre + (amf + delta) * theta.sin().ln();
    Ok(envelope.exp() * gegenbauer(orbital - am, lambda, theta.cos())?)
}

/// Ring-shape radial function R_{Nl}(r; δ).
pub fn radial_ring(principal: u32, orbital: u32, delta: f64, omega: f64, r: f64) -> Result<f64> {
    require_positive("r", r)?;
    require_positive("omega", omega)?;
    if orbital > principal || !(principal - orbital).is_multiple_of(2) {
        return Err(domain(format!(
            "N - l must be even and non-negative, got N = {principal}, l = {orbital}"
        )));
    }
    let n_r = (principal - orbital) / 2;
    let (big_n, l) = (principal as f64, orbital as f64);
    let ln_norm = 0.5
        * (LN_2 + 1.5 * omega.ln() + ln_factorial(n_r) - ln_gamma((big_n + l) / 2.0 + delta + 1.5)?);
    let t = omega * r * r;
    let envelope = ln_norm + (l + delta) * (omega.sqrt() * r).ln() - 0.5 * t;
    Ok(envelope.exp() * gen_laguerre(n_r, l + delta + 0.5, t)?)
}

/// Axial function in Hermite form, (Ω/π)^{¼} e^{−Ωz²/2} H_{n₃}(√Ω z)/√(2^{n₃} n₃!).
pub fn z_hermite(axial: u32, omega: f64, z: f64) -> Result<f64> {
    require_positive("omega", omega)?;
    let ln_pre = 0.25 * (omega / PI).ln() - 0.5 * (axial as f64 * LN_2 + ln_factorial(axial));
    let x = omega.sqrt() * z;
    Ok((ln_pre - 0.5 * x * x).exp() * hermite(axial, x))
}

/// Θ_{lm}(θ; 0) e^{imφ}/√(2π), the P = Q = 0 angular function, through the
/// associated Legendre function (which carries the (−1)^m phase).
pub fn spherical_harmonic_limit(orbital: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    let am = m.unsigned_abs();
    if am > orbital {
        return Err(domain(format!("|m| = {am} exceeds l = {orbital}")));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(domain(format!("theta must lie in [0, pi], got {theta}")));
    }
    let l = orbital as f64;
    let ln_norm = 0.5 * ((l + 0.5).ln() + ln_factorial(orbital - am) - ln_factorial(orbital + am));
    let sign = if am.is_multiple_of(2) { 1.0 } else { -1.0 };
    let value = sign * ln_norm.exp() * assoc_legendre(orbital, am, theta.cos())?;
    Ok(azimuthal(m, phi) * value)
}

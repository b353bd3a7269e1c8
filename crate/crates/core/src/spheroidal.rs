//! Spheroidal separation constants λ_k(R) and the expansion coefficients of
//! the spheroidal basis over the cylindrical (U) and spherical (T) bases.
//!
//! Both expansions reduce to symmetric tridiagonal eigenproblems. The oblate
//! system is the prolate one with every R²-proportional term negated.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bases::{psi_cylindrical, psi_spherical, CylindricalPoint, SphericalPoint};
use crate::error::{domain, Error, Result};
use crate::interbasis::{a_coupling, b_coupling, c_coupling, d_coupling, w_matrix};
use crate::model::{
    energy_cylindrical_parts, ring_energy, ring_separation_constant, separation_constant_a, Branch,
    CylindricalLabel, SphericalLabel, SystemParams,
};
use crate::tridiag::tridiag_eigen;

/// Prolate or oblate spheroidal coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpheroidalKind {
    Prolate,
    Oblate,
}

impl SpheroidalKind {
    /// Sign carried by R² terms.
    pub fn sign(self) -> f64 {
        match self {
            SpheroidalKind::Prolate => 1.0,
            SpheroidalKind::Oblate => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpheroidalKind::Prolate => "prolate",
            SpheroidalKind::Oblate => "oblate",
        }
    }
}

impl std::str::FromStr for SpheroidalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prolate" => Ok(SpheroidalKind::Prolate),
            "oblate" => Ok(SpheroidalKind::Oblate),
            other => Err(domain(format!("unknown spheroidal kind '{other}', expected prolate or oblate"))),
        }
    }
}

/// Basis over which a spheroidal state is expanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpansionBasis {
    /// Coefficients U_{nk}^p over cylindrical states.
    Cylindrical,
    /// Coefficients T_{nk}^q over spherical states.
    Spherical,
}

/// Symmetric tridiagonal matrix whose eigenvalues are λ_k(R).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalSystem {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub basis: ExpansionBasis,
    pub kind: SpheroidalKind,
    pub interfocus: f64,
}

impl TridiagonalSystem {
    pub fn dense(&self) -> DMatrix<f64> {
        let dim = self.diag.len();
        DMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                self.diag[i]
            } else if i + 1 == j {
                self.offdiag[i]
            } else if j + 1 == i {
                self.offdiag[j]
            } else {
                0.0
            }
        })
    }
}

/// Eigenvalues (ascending) and unit eigenvectors (columns) of a system.
#[derive(Debug, Clone, PartialEq)]
pub struct SpheroidalSolution {
    pub lambda: Vec<f64>,
    pub vectors: DMatrix<f64>,
    pub basis: ExpansionBasis,
}

impl SpheroidalSolution {
    pub fn column(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k).iter().copied().collect()
    }
}

fn check_interfocus(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("interfocus distance must be positive and finite, got {r}")))
    }
}

/// Cylindrical-basis system: diagonal 4D_n^p ± (R²/2)E_z(p), off-diagonal 4C_n^{p+1}.
pub fn build_tridiag_u(
    n: u32,
    params: &SystemParams,
    branch: Branch,
    interfocus: f64,
    kind: SpheroidalKind,
) -> Result<TridiagonalSystem> {
    check_interfocus(interfocus)?;
    let r2 = kind.sign() * interfocus * interfocus / 2.0;
    let mut diag = Vec::with_capacity(n as usize + 1);
    for p in 0..=n {
        let e_z = energy_cylindrical_parts(n - p, p, params, branch)?.1;
        diag.push(4.0 * d_coupling(n, p, params, branch)? + r2 * e_z);
    }
    let offdiag = (1..=n)
        .map(|p| c_coupling(n, p, params, branch).map(|v| 4.0 * v))
        .collect::<Result<Vec<_>>>()?;
    Ok(TridiagonalSystem { diag, offdiag, basis: ExpansionBasis::Cylindrical, kind, interfocus })
}

/// Spherical-basis system: diagonal A_q ± ΩR²B_n^q, off-diagonal ∓ΩR²A_n^{q+1}.
pub fn build_tridiag_t(
    n: u32,
    params: &SystemParams,
    branch: Branch,
    interfocus: f64,
    kind: SpheroidalKind,
) -> Result<TridiagonalSystem> {
    check_interfocus(interfocus)?;
    let scale = kind.sign() * params.omega() * interfocus * interfocus;
    let diag = (0..=n)
        .map(|q| Ok(separation_constant_a(q, params, branch)? + scale * b_coupling(n, q, params, branch)?))
        .collect::<Result<Vec<_>>>()?;
    let offdiag = (1..=n)
        .map(|q| a_coupling(n, q, params, branch).map(|a| -scale * a))
        .collect::<Result<Vec<_>>>()?;
    Ok(TridiagonalSystem { diag, offdiag, basis: ExpansionBasis::Spherical, kind, interfocus })
}

/// Ring-shape (P = 0) spherical-basis system in δ form, rows l = |m| or
/// |m|+1, …, N in steps of 2.
pub fn build_ring_tridiag_t(
    principal: u32,
    m: i32,
    delta: f64,
    omega: f64,
    interfocus: f64,
    kind: SpheroidalKind,
) -> Result<TridiagonalSystem> {
    check_interfocus(interfocus)?;
    let am = m.unsigned_abs();
    if principal < am {
        return Err(domain(format!("N = {principal} is below |m| = {am}")));
    }
    let scale = kind.sign() * interfocus * interfocus;
    let energy = ring_energy(principal, delta, omega);
    let orbitals: Vec<u32> = ((am + (principal - am) % 2)..=principal).step_by(2).collect();
    let amd = am as f64 + delta;
    let diag = orbitals
        .iter()
        .map(|&l| {
            let big_l = l as f64 + delta;
            let ratio = if l == am {
                // removable singularity when 2(|m|+δ) = 1
                1.0 / (2.0 * big_l + 3.0)
            } else {
                (2.0 * ring_separation_constant(l, delta) - 2.0 * amd * amd - 1.0)
                    / ((2.0 * big_l - 1.0) * (2.0 * big_l + 3.0))
            };
            ring_separation_constant(l, delta) + scale / 2.0 * energy * ratio
        })
        .collect();
    let big_n = principal as f64;
    let offdiag = orbitals[1..]
        .iter()
        .map(|&l| {
            let (lf, l_minus, l_plus) = (l as f64, (l - am) as f64, (l + am) as f64);
            let s = 2.0 * lf + 2.0 * delta;
            let num = l_minus
                * (l_minus - 1.0)
                * (l_plus + 2.0 * delta)
                * (l_plus + 2.0 * delta - 1.0)
                * (big_n - lf + 2.0)
                * (big_n + lf + 2.0 * delta + 1.0);
            let den = 4.0 * (s - 1.0).powi(2) * (s - 3.0) * (s + 1.0);
            -scale * omega * (num / den).sqrt()
        })
        .collect();
    Ok(TridiagonalSystem { diag, offdiag, basis: ExpansionBasis::Spherical, kind, interfocus })
}

/// Ring-shape (P = 0) cylindrical-basis system in δ form, rows n₃ = 0 or 1,
/// …, N − |m| in steps of 2.
pub fn build_ring_tridiag_u(
    principal: u32,
    m: i32,
    delta: f64,
    omega: f64,
    interfocus: f64,
    kind: SpheroidalKind,
) -> Result<TridiagonalSystem> {
    check_interfocus(interfocus)?;
    let am = m.unsigned_abs();
    if principal < am {
        return Err(domain(format!("N = {principal} is below |m| = {am}")));
    }
    let scale = kind.sign() * omega * interfocus * interfocus / 4.0;
    let top = principal - am;
    let axials: Vec<u32> = ((top % 2)..=top).step_by(2).collect();
    let (big_n, amf) = (principal as f64, am as f64);
    let diag = axials
        .iter()
        .map(|&n3| {
            let n3 = n3 as f64;
            (2.0 * n3 + 1.0) * (big_n - n3 + delta + 1.0) + (amf + delta).powi(2) - 1.0
                + scale * (2.0 * n3 + 1.0)
        })
        .collect();
    let offdiag = axials[..axials.len() - 1]
        .iter()
        .map(|&n3| {
            let n3 = n3 as f64;
            ((n3 + 1.0) * (n3 + 2.0) * (big_n - amf - n3) * (big_n + amf - n3 + 2.0 * delta)).sqrt()
        })
        .collect();
    Ok(TridiagonalSystem { diag, offdiag, basis: ExpansionBasis::Cylindrical, kind, interfocus })
}

/// Flips each column so that component k is non-negative, or the largest
/// component when component k is below 1e-12 in magnitude.
fn fix_signs(vectors: &mut DMatrix<f64>) {
    for k in 0..vectors.ncols() {
        let mut col = vectors.column_mut(k);
        let pivot = if col[k].abs() >= 1e-12 {
            col[k]
        } else {
            col.iter().copied().fold(0.0f64, |best, v| if v.abs() > best.abs() { v } else { best })
        };
        if pivot < 0.0 {
            col.neg_mut();
        }
    }
}

/// Diagonalizes a system; eigenvalues ascending, sign-fixed eigenvectors.
pub fn eigensolve(system: &TridiagonalSystem) -> Result<SpheroidalSolution> {
    let eig = tridiag_eigen(&system.diag, &system.offdiag, true)?;
    let mut vectors = eig.vectors.expect("eigenvectors requested");
    fix_signs(&mut vectors);
    Ok(SpheroidalSolution { lambda: eig.values, vectors, basis: system.basis })
}

fn check_k(n: u32, k: u32) -> Result<()> {
    if k > n {
        return Err(Error::Index(format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

/// U_{nk}^p, p = 0..n.
pub fn u_coefficients(
    n: u32,
    k: u32,
    params: &SystemParams,
    branch: Branch,
    interfocus: f64,
    kind: SpheroidalKind,
) -> Result<Vec<f64>> {
    check_k(n, k)?;
    Ok(eigensolve(&build_tridiag_u(n, params, branch, interfocus, kind)?)?.column(k as usize))
}

/// T_{nk}^q, q = 0..n.
pub fn t_coefficients(
    n: u32,
    k: u32,
    params: &SystemParams,
    branch: Branch,
    interfocus: f64,
    kind: SpheroidalKind,
) -> Result<Vec<f64>> {
    check_k(n, k)?;
    Ok(eigensolve(&build_tridiag_t(n, params, branch, interfocus, kind)?)?.column(k as usize))
}

/// U_{nk}^p with the overall sign chosen so that Σ_p U^p W_{np}^q reproduces
/// T_{nk}^q (rather than making U^k non-negative).
pub fn u_coefficients_aligned(
    n: u32,
    k: u32,
    params: &SystemParams,
    branch: Branch,
    interfocus: f64,
    kind: SpheroidalKind,
) -> Result<Vec<f64>> {
    let u = u_coefficients(n, k, params, branch, interfocus, kind)?;
    let t = t_coefficients(n, k, params, branch, interfocus, kind)?;
    let w = w_matrix(n, params, branch)?.entries;
    let image = w.transpose() * nalgebra::DVector::from_column_slice(&u);
    let overlap: f64 = image.iter().zip(&t).map(|(a, b)| a * b).sum();
    Ok(if overlap < 0.0 { u.iter().map(|v| -v).collect() } else { u })
}

/// λ_k sampled on an ascending grid of interfocus distances.
pub fn lambda_curve(
    n: u32,
    k: u32,
    params: &SystemParams,
    branch: Branch,
    kind: SpheroidalKind,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    check_k(n, k)?;
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(domain("interfocus grid must be strictly ascending"));
    }
    grid.iter()
        .map(|&r| {
            let sys = build_tridiag_t(n, params, branch, r, kind)?;
            let values = tridiag_eigen(&sys.diag, &sys.offdiag, false)?.values;
            Ok((r, values[k as usize]))
        })
        .collect()
}

/// Spheroidal coordinates (ξ, η, φ); ξ ≥ 1 (prolate) or ξ ≥ 0 (oblate).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpheroidalPoint {
    pub xi: f64,
    pub eta: f64,
    pub phi: f64,
}

/// One point in all coordinate systems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MappedPoint {
    pub cartesian: [f64; 3],
    pub spherical: SphericalPoint,
    pub cylindrical: CylindricalPoint,
}

pub fn map_spheroidal_point(point: SpheroidalPoint, interfocus: f64, kind: SpheroidalKind) -> Result<MappedPoint> {
    check_interfocus(interfocus)?;
    let SpheroidalPoint { xi, eta, phi } = point;
    if !(-1.0..=1.0).contains(&eta) {
        return Err(domain(format!("eta must lie in [-1, 1], got {eta}")));
    }
    if !(0.0..2.0 * std::f64::consts::PI).contains(&phi) {
        return Err(domain(format!("phi must lie in [0, 2pi), got {phi}")));
    }
    let radial = match kind {
        SpheroidalKind::Prolate if xi >= 1.0 && xi.is_finite() => xi * xi - 1.0,
        SpheroidalKind::Oblate if xi >= 0.0 && xi.is_finite() => xi * xi + 1.0,
        _ => return Err(domain(format!("xi = {xi} is outside the {} range", kind.name()))),
    };
    let half = interfocus / 2.0;
    let rho = half * (radial * (1.0 - eta * eta)).sqrt();
    let z = half * xi * eta;
    Ok(MappedPoint {
        cartesian: [rho * phi.cos(), rho * phi.sin(), z],
        spherical: SphericalPoint { r: rho.hypot(z), theta: rho.atan2(z), phi },
        cylindrical: CylindricalPoint { rho, phi, z },
    })
}

/// How a spheroidal wavefunction is synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SynthesisRoute {
    /// Σ_q T_{nk}^q Ψ_{n−q, q, m}.
    ViaSpherical,
    /// Σ_p U_{nk}^p Ψ_{n−p, p, m}.
    ViaCylindrical,
}

/// Spheroidal state Ψ_{nkm} at a point of the half-space z > 0.
#[allow(clippy::too_many_arguments)]
pub fn psi_spheroidal(
    n: u32,
    k: u32,
    params: &SystemParams,
    branch: Branch,
    interfocus: f64,
    kind: SpheroidalKind,
    point: SpheroidalPoint,
    route: SynthesisRoute,
) -> Result<Complex64> {
    let mapped = map_spheroidal_point(point, interfocus, kind)?;
    if !(mapped.cylindrical.z > 0.0 && mapped.cylindrical.rho > 0.0) {
        return Err(domain("spheroidal point must map to rho > 0 and z > 0"));
    }
    let mut total = Complex64::new(0.0, 0.0);
    match route {
        SynthesisRoute::ViaSpherical => {
            let t = t_coefficients(n, k, params, branch, interfocus, kind)?;
            for (q, coeff) in (0..=n).zip(t) {
                let label = SphericalLabel::new(n - q, q, branch, params)?;
                total += coeff * psi_spherical(&label, params, mapped.spherical)?;
            }
        }
        SynthesisRoute::ViaCylindrical => {
            let u = u_coefficients_aligned(n, k, params, branch, interfocus, kind)?;
            for (p, coeff) in (0..=n).zip(u) {
                let label = CylindricalLabel::new(n - p, p, branch, params)?;
                total += coeff * psi_cylindrical(&label, params, mapped.cylindrical)?;
            }
        }
    }
    Ok(total)
}

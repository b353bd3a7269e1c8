//! Independent numerical cross-checks: Gram matrices and overlaps computed
//! by quadrature from the basis evaluators, and the radial bi-orthogonality
//! relation in q.
//!
//! Oracle values are built from `specfun` and `bases` alone; the closed-form
//! coefficient code only appears on the other side of a comparison.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bases::{radial_cylindrical, radial_spherical, theta_angular, z_axial, z_hermite};
use crate::error::{domain, Result};
use crate::interbasis::{w_integral_oracle, w_matrix};
use crate::model::{Branch, SystemParams};
use crate::morse::{morse_overlap, MorseParams};
use crate::specfun::{build_quadrature, ln_factorial, ln_gamma, recip_gamma, CompensatedSum, QuadratureKind};

/// Outcome of one numerical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    /// Tolerance is relative to |expected| rather than absolute.
    pub relative: bool,
    pub passed: bool,
}

impl CheckReport {
    pub fn absolute(name: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        let passed = (measured - expected).abs() <= tolerance;
        CheckReport { name: name.into(), measured, expected, tolerance, relative: false, passed }
    }

    pub fn relative(name: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        let passed = if expected != 0.0 {
            (measured - expected).abs() <= tolerance * expected.abs()
        } else {
            measured.abs() <= tolerance
        };
        CheckReport { name: name.into(), measured, expected, tolerance, relative: true, passed }
    }

    /// Same check against `tolerance × scale`.
    pub fn rescaled(&self, scale: f64) -> Self {
        if self.relative {
            CheckReport::relative(self.name.clone(), self.measured, self.expected, self.tolerance * scale)
        } else {
            CheckReport::absolute(self.name.clone(), self.measured, self.expected, self.tolerance * scale)
        }
    }
}

fn max_deviation(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

/// Gauss-Laguerre integral of f(t) dt over (0, ∞), where f(t)/(t^α e^{−t}) is
/// a low-degree polynomial.
fn laguerre_integral(alpha: f64, nodes: usize, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let rule = build_quadrature(QuadratureKind::GaussLaguerre { alpha }, nodes)?;
    let mut sum = CompensatedSum::default();
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        sum.add(w * f(t)? / (t.powf(alpha) * (-t).exp()));
    }
    Ok(sum.value())
}

/// Gauss-Jacobi integral of f(x) dx over (−1, 1), where f/((1−x)^α(1+x)^β)
/// is a low-degree polynomial.
fn jacobi_integral(alpha: f64, beta: f64, nodes: usize, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let rule = build_quadrature(QuadratureKind::GaussJacobi { alpha, beta }, nodes)?;
    let mut sum = CompensatedSum::default();
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        sum.add(w * f(x)? / ((1.0 - x).powf(alpha) * (1.0 + x).powf(beta)));
    }
    Ok(sum.value())
}

/// ∫₀^∞ R_{n−q', q'}(r) R_{n−q, q}(r) dr (measure dr, not r² dr).
pub fn bi_orthogonality_integral(n: u32, q: u32, q_prime: u32, params: &SystemParams, branch: Branch) -> Result<f64> {
    if q > n || q_prime > n {
        return Err(crate::error::Error::Index(format!("q = {q}, q' = {q_prime} must not exceed n = {n}")));
    }
    let sum_cb = params.channel().c + params.signed_b(branch)?;
    // combined power of r is 2q + 2q' + 2(c ± b) + 1, so r → 0 converges
    let alpha = (q + q_prime) as f64 + sum_cb;
    if alpha <= -1.0 {
        return Err(domain("bi-orthogonality integral diverges at r = 0"));
    }
    let omega = params.omega();
    laguerre_integral(alpha, n as usize + 3, |t| {
        let r = (t / omega).sqrt();
        let jac = 1.0 / (2.0 * (omega * t).sqrt());
        Ok(radial_spherical(n - q_prime, q_prime, params, branch, r)?
            * radial_spherical(n - q, q, params, branch, r)?
            * jac)
    })
}

/// Ω/(2q + c ± b + 1) δ_{qq'}.
pub fn bi_orthogonality_expected(q: u32, q_prime: u32, params: &SystemParams, branch: Branch) -> Result<f64> {
    if q != q_prime {
        return Ok(0.0);
    }
    let sum_cb = params.channel().c + params.signed_b(branch)?;
    Ok(params.omega() / (2.0 * q as f64 + sum_cb + 1.0))
}

/// The pre-summation form: a Γ-ratio prefactor times a terminating
/// ₂F₁(q'−q, q+q'+c±b+1; 2q'+c±b+2; 1), summed term by term.
pub fn bi_orthogonality_hypergeometric(n: u32, q: u32, q_prime: u32, params: &SystemParams, branch: Branch) -> Result<f64> {
    let s = params.channel().c + params.signed_b(branch)?;
    let (nf, qf, qpf) = (n as f64, q as f64, q_prime as f64);
    let reciprocal = recip_gamma(qf - qpf + 1.0);
    if reciprocal == 0.0 {
        return Ok(0.0);
    }
    let ln_pre = ln_gamma(qpf + qf + s + 1.0)? - ln_gamma(2.0 * qpf + s + 2.0)?
        + 0.5
            * (ln_factorial(n - q_prime) + ln_gamma(nf + qpf + s + 2.0)?
                - ln_factorial(n - q)
                - ln_gamma(nf + qf + s + 2.0)?);
    let (a, b, c) = (qpf - qf, qf + qpf + s + 1.0, 2.0 * qpf + s + 2.0);
    let mut series = CompensatedSum::default();
    let mut term = 1.0;
    series.add(term);
    for k in 0..(q - q_prime) {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
        series.add(term);
    }
    Ok(params.omega() * ln_pre.exp() * reciprocal * series.value())
}

pub fn bi_orthogonality(n: u32, q: u32, q_prime: u32, params: &SystemParams, branch: Branch) -> Result<CheckReport> {
    let measured = bi_orthogonality_integral(n, q, q_prime, params, branch)?;
    let expected = bi_orthogonality_expected(q, q_prime, params, branch)?;
    Ok(CheckReport::absolute(
        format!("bi-orthogonality n={n} q={q} q'={q_prime} {branch}"),
        measured,
        expected,
        1e-10,
    ))
}

/// Basis family whose Gram matrix is checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Family {
    /// Θ_q, q = 0..=n_max, weight sinθ dθ on (0, π/2); Gram ½·I.
    Theta,
    /// R_{n_r q} at fixed q, n_r = 0..=n_max, weight r² dr; Gram I.
    RadialSpherical { q: u32 },
    /// R_{n_ρ}, weight ρ dρ; Gram I.
    RadialCylindrical,
    /// Z_p on the half-line; Gram ½·I.
    Axial,
    /// Hermite functions of one parity on the half-line; Gram ½·I.
    HermiteHalfLine { odd: bool },
    /// Bound Morse states on the full line; Gram I.
    Morse(MorseParams),
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::Theta => "theta".into(),
            Family::RadialSpherical { q } => format!("radial-spherical(q={q})"),
            Family::RadialCylindrical => "radial-cylindrical".into(),
            Family::Axial => "axial".into(),
            Family::HermiteHalfLine { odd } => format!("hermite-half-line(odd={odd})"),
            Family::Morse(_) => "morse".into(),
        }
    }

    /// Diagonal constant of the Gram matrix.
    pub fn norm_constant(&self) -> f64 {
        match self {
            Family::Theta | Family::Axial | Family::HermiteHalfLine { .. } => 0.5,
            _ => 1.0,
        }
    }
}

/// Gram matrix of `family` for indices 0..=n_max.
pub fn gram_table(family: Family, n_max: u32, params: &SystemParams, branch: Branch) -> Result<DMatrix<f64>> {
    let dim = n_max as usize + 1;
    let nodes = dim + 3;
    let omega = params.omega();
    let c = params.channel().c;
    let mut gram = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..=i {
            let (a, b) = (i as u32, j as u32);
            let value = match family {
                Family::Theta => {
                    let sb = params.signed_b(branch)?;
                    // x = cos 2θ, sinθ dθ = dx / (4 cosθ)
                    jacobi_integral(c, sb, nodes, |x| {
                        let theta = 0.5 * x.acos();
                        Ok(theta_angular(a, params, branch, theta)? * theta_angular(b, params, branch, theta)?
                            / (4.0 * theta.cos()))
                    })?
                }
                Family::RadialSpherical { q } => {
                    let s = c + params.signed_b(branch)?;
                    laguerre_integral(2.0 * q as f64 + s + 1.0, nodes, |t| {
                        let r = (t / omega).sqrt();
                        Ok(radial_spherical(a, q, params, branch, r)?
                            * radial_spherical(b, q, params, branch, r)?
                            * r
                            * r
                            / (2.0 * (omega * t).sqrt()))
                    })?
                }
                Family::RadialCylindrical => laguerre_integral(c, nodes, |t| {
                    let rho = (t / omega).sqrt();
                    Ok(radial_cylindrical(a, params, rho)? * radial_cylindrical(b, params, rho)? / (2.0 * omega))
                })?,
                Family::Axial => {
                    let sb = params.signed_b(branch)?;
                    laguerre_integral(sb, nodes, |t| {
                        let z = (t / omega).sqrt();
                        Ok(z_axial(a, params, branch, z)? * z_axial(b, params, branch, z)? / (2.0 * (omega * t).sqrt()))
                    })?
                }
                Family::HermiteHalfLine { odd } => {
                    let (ka, kb) = (2 * a + u32::from(odd), 2 * b + u32::from(odd));
                    let alpha = if odd { 0.5 } else { -0.5 };
                    laguerre_integral(alpha, nodes, |t| {
                        let z = (t / omega).sqrt();
                        Ok(z_hermite(ka, omega, z)? * z_hermite(kb, omega, z)? / (2.0 * (omega * t).sqrt()))
                    })?
                }
                Family::Morse(morse) => morse_overlap(a, b, &morse)?,
            };
            gram[(i, j)] = value;
            gram[(j, i)] = value;
        }
    }
    Ok(gram)
}

pub fn gram_matrix(
    family: Family,
    n_max: u32,
    params: &SystemParams,
    branch: Branch,
    tolerance: f64,
) -> Result<(DMatrix<f64>, CheckReport)> {
    let gram = gram_table(family, n_max, params, branch)?;
    let dim = gram.nrows();
    let deviation = max_deviation(&gram, &(DMatrix::identity(dim, dim) * family.norm_constant()));
    let report = CheckReport::absolute(
        format!("gram {} n_max={n_max} {}", family.name(), describe(params, branch)),
        deviation,
        0.0,
        tolerance,
    );
    Ok((gram, report))
}

fn describe(params: &SystemParams, branch: Branch) -> String {
    format!(
        "(omega={}, P={}, Q={}, m={}, {branch})",
        params.omega(),
        params.p_strength(),
        params.q_strength(),
        params.m()
    )
}

/// W matrix (rows p, columns q) from the overlap
/// W_np^q = 2 ∫∫ R_{n−p}(r sinθ) Z_p(r cosθ) R_{n−q,q}(r) Θ_q(θ) r² sinθ dr dθ.
///
/// The θ-integrand carries e^{−Ωr²/2} independently of θ, so both
/// integrals are Gaussian and exact at modest node counts.
pub fn w_overlap_table(n: u32, params: &SystemParams, branch: Branch) -> Result<DMatrix<f64>> {
    if n > 12 {
        return Err(domain(format!("overlap oracle is limited to n <= 12, got {n}")));
    }
    let c = params.channel().c;
    let sb = params.signed_b(branch)?;
    let omega = params.omega();
    let dim = n as usize + 1;
    let r_rule = build_quadrature(QuadratureKind::GaussLaguerre { alpha: c + sb + 1.0 }, 2 * dim + 4)?;
    let x_rule = build_quadrature(QuadratureKind::GaussJacobi { alpha: c, beta: sb }, dim + 4)?;
    let mut table = DMatrix::zeros(dim, dim);
    for p in 0..=n {
        for q in 0..=n {
            let mut total = CompensatedSum::default();
            for (&t, &wt) in r_rule.nodes.iter().zip(&r_rule.weights) {
                let r = (t / omega).sqrt();
                let radial = radial_spherical(n - q, q, params, branch, r)?;
                // r² dr = t^{½} dt / (2Ω^{3/2})
                let r_factor = wt * radial * t.sqrt() / (2.0 * omega.powf(1.5)) / (t.powf(c + sb + 1.0) * (-t).exp());
                let mut inner = CompensatedSum::default();
                for (&x, &wx) in x_rule.nodes.iter().zip(&x_rule.weights) {
                    let theta = 0.5 * x.acos();
                    let cyl = radial_cylindrical(n - p, params, r * theta.sin())? * z_axial(p, params, branch, r * theta.cos())?;
                    let angular = theta_angular(q, params, branch, theta)?;
                    let weight = (1.0 - x).powf(c) * (1.0 + x).powf(sb);
                    inner.add(wx * cyl * angular / (4.0 * theta.cos()) / weight);
                }
                total.add(r_factor * inner.value());
            }
            table[(p as usize, q as usize)] = 2.0 * total.value();
        }
    }
    Ok(table)
}

/// Overlap-oracle W against the closed-form W; tolerance 1e-10 up to n = 6
/// and 1e-8 up to n = 12.
pub fn w_overlap_oracle(n: u32, params: &SystemParams, branch: Branch) -> Result<(DMatrix<f64>, CheckReport)> {
    let table = w_overlap_table(n, params, branch)?;
    let closed = w_matrix(n, params, branch)?.entries;
    let tolerance = if n <= 6 { 1e-10 } else { 1e-8 };
    let report = CheckReport::absolute(
        format!("w overlap n={n} {}", describe(params, branch)),
        max_deviation(&table, &closed),
        0.0,
        tolerance,
    );
    Ok((table, report))
}

/// Which tolerance constants the default suite uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceProfile {
    Default,
    /// Every tolerance divided by 10.
    Strict,
}

impl ToleranceProfile {
    pub fn factor(self) -> f64 {
        match self {
            ToleranceProfile::Default => 1.0,
            ToleranceProfile::Strict => 0.1,
        }
    }
}

impl std::str::FromStr for ToleranceProfile {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(ToleranceProfile::Default),
            "strict" => Ok(ToleranceProfile::Strict),
            other => Err(domain(format!("unknown tolerance profile '{other}'"))),
        }
    }
}

/// Parameter sets swept by the default suite as (Ω, P, Q, m).
pub const SUITE_PARAMS: [(f64, f64, f64, i32); 3] = [(1.0, 0.05, 0.5, 1), (1.0, 2.0, 3.0, 0), (2.0, 0.1, 0.0, 2)];

/// The fixed verification suite.
pub fn default_suite(profile: ToleranceProfile) -> Result<Vec<CheckReport>> {
    let f = profile.factor();
    let mut reports = Vec::new();
    for &(omega, p_strength, q_strength, m) in &SUITE_PARAMS {
        let params = SystemParams::new(omega, p_strength, q_strength, m)?;
        for branch in params.admissible_branches() {
            for family in [Family::Theta, Family::RadialCylindrical, Family::Axial] {
                reports.push(gram_matrix(family, 6, &params, branch, 1e-10 * f)?.1);
            }
            for q in 0..=6 {
                reports.push(gram_matrix(Family::RadialSpherical { q }, 6, &params, branch, 1e-10 * f)?.1);
            }
            for n in 0..=5 {
                let mut worst: f64 = 0.0;
                for q in 0..=n {
                    for qp in 0..=n {
                        let got = bi_orthogonality_integral(n, q, qp, &params, branch)?;
                        let want = bi_orthogonality_expected(q, qp, &params, branch)?;
                        let via = bi_orthogonality_hypergeometric(n, q, qp, &params, branch)?;
                        worst = worst.max((got - want).abs()).max((via - want).abs());
                    }
                }
                reports.push(CheckReport::absolute(
                    format!("bi-orthogonality n={n} {}", describe(&params, branch)),
                    worst,
                    0.0,
                    1e-10 * f,
                ));
            }
            for n in 0..=12 {
                reports.push(w_overlap_oracle(n, &params, branch)?.1.rescaled(f));
            }
            for n in 0..=6 {
                let mut worst: f64 = 0.0;
                for p in 0..=n {
                    for q in 0..=n {
                        let a = crate::interbasis::w_coefficient(n, p, q, &params, branch)?;
                        worst = worst.max((a - w_integral_oracle(n, p, q, &params, branch)?).abs());
                    }
                }
                reports.push(CheckReport::absolute(
                    format!("w racah vs reduced integral n={n} {}", describe(&params, branch)),
                    worst,
                    0.0,
                    1e-10 * f,
                ));
                reports.push(CheckReport::absolute(
                    format!("w orthogonality n={n} {}", describe(&params, branch)),
                    w_matrix(n, &params, branch)?.orthogonality_defect(),
                    0.0,
                    1e-10 * f,
                ));
            }
        }
    }
    let ring = SystemParams::new(1.0, 0.0, 0.0, 0)?;
    let (axial, _) = gram_matrix(Family::Axial, 6, &ring, Branch::Minus, 1e-10)?;
    let (hermite, _) = gram_matrix(Family::HermiteHalfLine { odd: false }, 6, &ring, Branch::Minus, 1e-10)?;
    reports.push(CheckReport::absolute(
        "axial minus branch at P=0 vs even hermite gram",
        max_deviation(&axial, &hermite),
        0.0,
        1e-10 * f,
    ));
    let morse = MorseParams::new(3.2 * 3.2 / 2.0, 1.0)?;
    let top = morse.level_count() as u32 - 1;
    reports.push(gram_matrix(Family::Morse(morse), top, &ring, Branch::Plus, 1e-10 * f)?.1);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{psi_cylindrical, psi_spherical, SphericalPoint};
    use crate::model::{CylindricalLabel, SphericalLabel};

    fn params(omega: f64, p: f64, q: f64, m: i32) -> SystemParams {
        SystemParams::new(omega, p, q, m).unwrap()
    }

    fn reference() -> SystemParams {
        params(1.0, 0.09 - 0.25, 0.0, 1)
    }

    #[test]
    fn bi_orthogonality_examples() {
        let prm = reference();
        let r = bi_orthogonality(0, 0, 0, &prm, Branch::Plus).unwrap();
        assert!((r.expected - 1.0 / 2.3).abs() < 1e-15);
        assert!(r.passed, "{r:?}");
        assert!(bi_orthogonality(1, 0, 1, &prm, Branch::Plus).unwrap().passed);
        for q in 0..=4u32 {
            for qp in 0..=4u32 {
                let v = recip_gamma(q as f64 - qp as f64 + 1.0) * recip_gamma(qp as f64 - q as f64 + 1.0);
                assert_eq!(v, if q == qp { 1.0 } else { 0.0 });
            }
        }
        for n in 0..=5 {
            for q in 0..=n {
                for qp in 0..=n {
                    let via = bi_orthogonality_hypergeometric(n, q, qp, &prm, Branch::Plus).unwrap();
                    let want = bi_orthogonality_expected(q, qp, &prm, Branch::Plus).unwrap();
                    assert!((via - want).abs() < 1e-12, "{n} {q} {qp}: {via}");
                }
            }
        }
    }

    #[test]
    fn gram_examples() {
        let prm = reference();
        assert!(gram_matrix(Family::Theta, 4, &prm, Branch::Plus, 1e-10).unwrap().1.passed);
        let c2 = params(1.0, 0.3, 3.0, 1); // c = 2
        assert!((c2.channel().c - 2.0).abs() < 1e-15);
        assert!(gram_matrix(Family::RadialCylindrical, 4, &c2, Branch::Plus, 1e-10).unwrap().1.passed);
        let ring = params(1.0, 0.0, 0.0, 0);
        let a = gram_table(Family::Axial, 5, &ring, Branch::Minus).unwrap();
        let h = gram_table(Family::HermiteHalfLine { odd: false }, 5, &ring, Branch::Minus).unwrap();
        assert!(max_deviation(&a, &h) < 1e-10);
        let a = gram_table(Family::Axial, 5, &ring, Branch::Plus).unwrap();
        let h = gram_table(Family::HermiteHalfLine { odd: true }, 5, &ring, Branch::Plus).unwrap();
        assert!(max_deviation(&a, &h) < 1e-10);
    }

    #[test]
    fn overlap_oracle_matches() {
        let prm = reference();
        let (w0, _) = w_overlap_oracle(0, &prm, Branch::Plus).unwrap();
        assert!((w0[(0, 0)] - 1.0).abs() < 1e-13);
        let both = params(1.0, 0.09 - 0.25, 0.0, 1);
        for branch in both.admissible_branches() {
            let (table, report) = w_overlap_oracle(2, &both, branch).unwrap();
            assert!(report.passed, "{report:?}");
            let defect = (table.transpose() * &table - DMatrix::identity(3, 3)).abs().max();
            assert!(defect < 1e-10);
        }
        assert!(w_overlap_oracle(13, &prm, Branch::Plus).is_err());
    }

    #[test]
    fn overlap_reconstructs_cylindrical_state() {
        // Ψ_cyl = Σ_q W_np^q Ψ_sph pointwise, using the oracle W only
        let prm = params(1.2, 0.4, 0.7, 1);
        let n = 3;
        let table = w_overlap_table(n, &prm, Branch::Plus).unwrap();
        for p in 0..=n {
            let cyl = CylindricalLabel::new(n - p, p, Branch::Plus, &prm).unwrap();
            for i in 0..6 {
                let pt = SphericalPoint { r: 0.4 + 0.3 * i as f64, theta: 0.1 + 0.2 * i as f64, phi: 0.5 };
                let lhs = psi_cylindrical(&cyl, &prm, pt.to_cylindrical()).unwrap();
                let mut rhs = num_complex::Complex64::new(0.0, 0.0);
                for q in 0..=n {
                    let sph = SphericalLabel::new(n - q, q, Branch::Plus, &prm).unwrap();
                    rhs += table[(p as usize, q as usize)] * psi_spherical(&sph, &prm, pt).unwrap();
                }
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn report_semantics() {
        assert!(CheckReport::absolute("a", 1.0, 1.0 + 1e-11, 1e-10).passed);
        assert!(!CheckReport::absolute("a", 1.0, 1.1, 1e-10).passed);
        assert!(CheckReport::relative("r", 100.0, 100.0 + 1e-9, 1e-10).passed);
        assert!(!CheckReport::absolute("a", 1e-9, 0.0, 1e-10).passed);
        let r = CheckReport::absolute("a", 5e-11, 0.0, 1e-10);
        assert!(r.passed && !r.rescaled(0.1).passed);
    }

    #[test]
    fn default_suite_passes() {
        let reports = default_suite(ToleranceProfile::Default).unwrap();
        let failed: Vec<_> = reports.iter().filter(|r| !r.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        let again = default_suite(ToleranceProfile::Default).unwrap();
        assert_eq!(reports, again);
    }
}

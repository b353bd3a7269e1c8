//! Interbasis coefficients between the cylindrical and spherical bases.
//!
//! The coefficients are SU(2) Clebsch-Gordan coefficients continued to real
//! arguments. They are evaluated from the Racah single sum with every
//! factorial replaced by a Γ function, 1/Γ at the poles set to zero, and each
//! term formed as log-magnitude plus sign.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::model::{energy_level, separation_constant_a, Branch, SystemParams};
use crate::specfun::{
    build_quadrature, jacobi_p, ln_factorial, ln_gamma, ln_gamma_signed, snap, CompensatedSum,
    QuadratureKind,
};

/// Arguments of (a b α β | c γ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CgArgs {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub gamma: f64,
}

impl CgArgs {
    /// Arguments with γ = α + β.
    pub fn new(a: f64, b: f64, alpha: f64, beta: f64, c: f64) -> Self {
        Self { a, b, alpha, beta, c, gamma: alpha + beta }
    }
}

fn nonneg_integer(x: f64) -> Option<u32> {
    let x = snap(x);
    (x >= 0.0 && x == x.round() && x < u32::MAX as f64).then_some(x as u32)
}

fn negative_integer(x: f64) -> bool {
    let x = snap(x);
    x < 0.0 && x == x.round()
}

/// Continued Clebsch-Gordan coefficient (a b α β | c γ).
///
/// The sum terminates when one of a+b−c, a−α, b+β is a non-negative
/// integer; otherwise the call is rejected. A negative-integer value of one
/// of these combinations makes every term vanish and yields 0.
pub fn cg_continued(args: &CgArgs) -> Result<f64> {
    let CgArgs { a, b, alpha, beta, c, gamma } = *args;
    if (gamma - alpha - beta).abs() > 1e-9 * (1.0 + gamma.abs()) {
        return Ok(0.0);
    }
    let limits = [a + b - c, a - alpha, b + beta];
    if limits.iter().any(|&x| negative_integer(x)) {
        return Ok(0.0);
    }
    let t_max = limits
        .iter()
        .filter_map(|&x| nonneg_integer(x))
        .min()
        .ok_or_else(|| {
            domain(format!(
                "continued Racah sum does not terminate: a+b-c = {}, a-alpha = {}, b+beta = {}",
                limits[0], limits[1], limits[2]
            ))
        })?;

    let weight = 2.0 * c + 1.0;
    if !(weight > 0.0) {
        return Err(domain(format!("2c + 1 must be positive, got {weight}")));
    }
    let numerator = [
        a + b - c + 1.0,
        a - b + c + 1.0,
        -a + b + c + 1.0,
        a + alpha + 1.0,
        a - alpha + 1.0,
        b + beta + 1.0,
        b - beta + 1.0,
        c + gamma + 1.0,
        c - gamma + 1.0,
    ];
    let mut ln_pref = weight.ln();
    let mut sign_pref = 1.0;
    for x in numerator {
        let (lg, s) = ln_gamma_signed(snap(x))
            .ok_or_else(|| domain(format!("Clebsch-Gordan prefactor has a Gamma pole at {x}")))?;
        ln_pref += lg;
        sign_pref *= s;
    }
    let (lg, s) = ln_gamma_signed(snap(a + b + c + 2.0))
        .ok_or_else(|| domain("Clebsch-Gordan prefactor denominator has a Gamma pole"))?;
    ln_pref -= lg;
    sign_pref *= s;
    if sign_pref < 0.0 {
        return Err(domain(format!(
            "negative Gamma product under the Clebsch-Gordan square root for {args:?}"
        )));
    }
    let half_ln_pref = 0.5 * ln_pref;

    let mut sum = CompensatedSum::default();
    'terms: for t in 0..=t_max {
        let tf = t as f64;
        let denominators = [
            tf + 1.0,
            a + b - c - tf + 1.0,
            a - alpha - tf + 1.0,
            b + beta - tf + 1.0,
            c - b + alpha + tf + 1.0,
            c - a - beta + tf + 1.0,
        ];
        let mut ln_term = half_ln_pref;
        let mut sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        for x in denominators {
            match ln_gamma_signed(snap(x)) {
                None => continue 'terms,
                Some((lg, s)) => {
                    ln_term -= lg;
                    sign *= s;
                }
            }
        }
        sum.add(sign * ln_term.exp());
    }
    let value = sum.value();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numeric(format!("Clebsch-Gordan sum overflowed for {args:?}")))
    }
}

fn check_indices(n: u32, p: u32, q: u32) -> Result<()> {
    if p > n || q > n {
        return Err(Error::Index(format!("p = {p} and q = {q} must not exceed n = {n}")));
    }
    Ok(())
}

/// Arguments (a₀ b₀ α β | c₀) for W_{np}^q.
pub fn w_cg_args(n: u32, p: u32, q: u32, params: &SystemParams, branch: Branch) -> Result<CgArgs> {
    check_indices(n, p, q)?;
    let sb = params.signed_b(branch)?;
    let c = params.channel().c;
    let (n, p, q) = (n as f64, p as f64, q as f64);
    Ok(CgArgs::new(
        (n + sb) / 2.0,
        (n + c) / 2.0,
        p - (n - sb) / 2.0,
        (n + c) / 2.0 - p,
        q + (c + sb) / 2.0,
    ))
}

/// W_{np}^q = (−1)^{n−q} (a₀ b₀ α β | c₀, α+β): coefficient of the spherical
/// state q in the expansion of the cylindrical state p at level n.
pub fn w_coefficient(n: u32, p: u32, q: u32, params: &SystemParams, branch: Branch) -> Result<f64> {
    let args = w_cg_args(n, p, q, params, branch)?;
    let sign = if (n - q).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * cg_continued(&args)?)
}

/// The same coefficient from the θ-integral representation, evaluated by
/// Gauss-Jacobi quadrature in x = cos 2θ.
pub fn w_integral_oracle(n: u32, p: u32, q: u32, params: &SystemParams, branch: Branch) -> Result<f64> {
    check_indices(n, p, q)?;
    let sb = params.signed_b(branch)?;
    let c = params.channel().c;
    // integrand is a polynomial of degree n + q ≤ 2n
    let points = n as usize + 2;
    if 2 * points - 1 < (n + q) as usize {
        return Err(Error::Numeric("quadrature too small for the overlap integrand".into()));
    }
    let rule = build_quadrature(QuadratureKind::GaussJacobi { alpha: c, beta: sb }, points)?;
    let (nf, pf, qf) = (n as f64, p as f64, q as f64);
    let mut failure = None;
    let integral = rule.integrate(|x| {
        let poly = jacobi_p(q, c, sb, x).unwrap_or_else(|e| {
            failure = Some(e);
            0.0
        });
        (1.0 - x).powi((n - p) as i32) * (1.0 + x).powi(p as i32) * poly
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let overlap = 0.5 * (-(nf + c + sb) * std::f64::consts::LN_2).exp() * integral;

    let ln_b2 = (2.0 * qf + c + sb + 1.0).ln()
        + ln_factorial(n - q)
        + ln_factorial(q)
        + ln_gamma(qf + c + sb + 1.0)?
        + ln_gamma(nf + qf + c + sb + 2.0)?
        - ln_factorial(n - p)
        - ln_factorial(p)
        - ln_gamma(qf + c + 1.0)?
        - ln_gamma(qf + sb + 1.0)?
        - ln_gamma(nf - pf + c + 1.0)?
        - ln_gamma(pf + sb + 1.0)?;
    let sign = if (q + p).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * (0.5 * ln_b2).exp() * overlap)
}

/// Which way a [`CoefficientMatrix`] maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// entries[(p, q)] = W_{np}^q: row p expands a cylindrical state over spherical ones.
    CylindricalToSpherical,
    /// entries[(q, p)] = W̃_{nq}^p = W_{np}^q.
    SphericalToCylindrical,
}

/// Orthogonal (n+1)×(n+1) matrix of interbasis coefficients at level n.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    pub n: u32,
    pub branch: Branch,
    pub orientation: Orientation,
    pub entries: DMatrix<f64>,
}

impl CoefficientMatrix {
    /// The inverse expansion.
    pub fn transpose(&self) -> Self {
        Self {
            n: self.n,
            branch: self.branch,
            orientation: match self.orientation {
                Orientation::CylindricalToSpherical => Orientation::SphericalToCylindrical,
                Orientation::SphericalToCylindrical => Orientation::CylindricalToSpherical,
            },
            entries: self.entries.transpose(),
        }
    }

    /// max |W Wᵀ − I| over both products.
    pub fn orthogonality_defect(&self) -> f64 {
        let dim = self.entries.nrows();
        let id = DMatrix::<f64>::identity(dim, dim);
        let left = (&self.entries * self.entries.transpose() - &id).abs().max();
        let right = (self.entries.transpose() * &self.entries - id).abs().max();
        left.max(right)
    }
}

/// Full W matrix at level n, rows indexed by p.
pub fn w_matrix(n: u32, params: &SystemParams, branch: Branch) -> Result<CoefficientMatrix> {
    let dim = n as usize + 1;
    let mut entries = DMatrix::zeros(dim, dim);
    for p in 0..=n {
        for q in 0..=n {
            entries[(p as usize, q as usize)] = w_coefficient(n, p, q, params, branch)?;
        }
    }
    Ok(CoefficientMatrix { n, branch, orientation: Orientation::CylindricalToSpherical, entries })
}

/// Arguments of the ring-shape coefficient W_{N m n₃}^l(δ).
pub fn ring_w_args(principal: u32, m: i32, axial: u32, orbital: u32, delta: f64) -> Result<CgArgs> {
    let am = m.unsigned_abs();
    if !(delta >= 0.0) {
        return Err(domain(format!("delta must be non-negative, got {delta}")));
    }
    if axial + am > principal || !(principal - am - axial).is_multiple_of(2) {
        return Err(domain(format!(
            "N - |m| - n3 must be even and non-negative (N = {principal}, m = {m}, n3 = {axial})"
        )));
    }
    if orbital < am || orbital > principal || !(principal - orbital).is_multiple_of(2) {
        return Err(domain(format!(
            "l must satisfy |m| <= l <= N with N - l even (N = {principal}, l = {orbital})"
        )));
    }
    let (big_n, amf, n3, l) = (principal as f64, am as f64, axial as f64, orbital as f64);
    Ok(CgArgs::new(
        (big_n + amf) / 4.0 + delta / 2.0,
        (big_n - amf - 1.0) / 4.0,
        (big_n + amf - 2.0 * n3) / 4.0 + delta / 2.0,
        (2.0 * n3 - big_n + amf - 1.0) / 4.0,
        (2.0 * l - 1.0) / 4.0 + delta / 2.0,
    ))
}

/// Ring-shape (P = 0) interbasis coefficient W_{N m n₃}^l(δ).
pub fn ring_w(principal: u32, m: i32, axial: u32, orbital: u32, delta: f64) -> Result<f64> {
    cg_continued(&ring_w_args(principal, m, axial, orbital, delta)?)
}

struct Channel {
    c: f64,
    sb: f64,
}

fn channel(params: &SystemParams, branch: Branch) -> Result<Channel> {
    Ok(Channel { c: params.channel().c, sb: params.signed_b(branch)? })
}

/// C_n^p = √(p(p±b)(n−p+1)(n+c−p+1)), the cylindrical off-diagonal coupling.
pub fn c_coupling(n: u32, p: u32, params: &SystemParams, branch: Branch) -> Result<f64> {
    let Channel { c, sb } = channel(params, branch)?;
    if p == 0 || p > n {
        return Ok(0.0);
    }
    let (n, p) = (n as f64, p as f64);
    Ok((p * (p + sb) * (n - p + 1.0) * (n + c - p + 1.0)).sqrt())
}

/// D_n^p = (p+1)(n−p) + (p±b)(n+c−p+1) + ¼(c∓b+½)(c∓b+3/2).
pub fn d_coupling(n: u32, p: u32, params: &SystemParams, branch: Branch) -> Result<f64> {
    let Channel { c, sb } = channel(params, branch)?;
    let (n, p) = (n as f64, p as f64);
    let shifted = c - sb;
    Ok((p + 1.0) * (n - p) + (p + sb) * (n + c - p + 1.0) + 0.25 * (shifted + 0.5) * (shifted + 1.5))
}

/// A_n^q, the spherical off-diagonal coupling; zero at q = 0 and q = n + 1.
pub fn a_coupling(n: u32, q: u32, params: &SystemParams, branch: Branch) -> Result<f64> {
    let Channel { c, sb } = channel(params, branch)?;
    if q == 0 || q > n {
        return Ok(0.0);
    }
    let (n, q) = (n as f64, q as f64);
    let s = 2.0 * q + c + sb;
    let num = q * (n - q + 1.0) * (q + c + sb) * (q + sb) * (q + c) * (n + q + c + sb + 1.0);
    let den = s * s * (s - 1.0) * (s + 1.0);
    Ok((num / den).sqrt())
}

/// [2q(q+1) + (c±b)(2q±b+1)] / [(2q+c±b)(2q+c±b+2)], continued through its
/// removable singularity at q = 0, c±b = 0.
fn n_diagonal_ratio(q: u32, c: f64, sb: f64) -> f64 {
    let s0 = c + sb;
    if q == 0 {
        return (sb + 1.0) / (s0 + 2.0);
    }
    let q = q as f64;
    let s = 2.0 * q + s0;
    (2.0 * q * (q + 1.0) + s0 * (2.0 * q + sb + 1.0)) / (s * (s + 2.0))
}

/// B_n^q = ½(2n+c±b+2) × n_diagonal_ratio, so that the spherical diagonal of
/// N is 2Ω B_n^q.
pub fn b_coupling(n: u32, q: u32, params: &SystemParams, branch: Branch) -> Result<f64> {
    let Channel { c, sb } = channel(params, branch)?;
    Ok(0.5 * (2.0 * n as f64 + c + sb + 2.0) * n_diagonal_ratio(q, c, sb))
}

fn symmetric_tridiagonal(diag: &[f64], off: &[f64]) -> DMatrix<f64> {
    let dim = diag.len();
    DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            diag[i]
        } else if i + 1 == j {
            off[i]
        } else if j + 1 == i {
            off[j]
        } else {
            0.0
        }
    })
}

/// Matrix of M in the cylindrical basis at level n (half-space convention):
/// diagonal 2D_n^p, off-diagonal 2C_n^{p+1}. Satisfies 2M = W diag(A) Wᵀ.
pub fn m_matrix_cyl(n: u32, params: &SystemParams, branch: Branch) -> Result<DMatrix<f64>> {
    let diag = (0..=n).map(|p| d_coupling(n, p, params, branch).map(|d| 2.0 * d)).collect::<Result<Vec<_>>>()?;
    let off = (1..=n).map(|p| c_coupling(n, p, params, branch).map(|v| 2.0 * v)).collect::<Result<Vec<_>>>()?;
    Ok(symmetric_tridiagonal(&diag, &off))
}

/// Matrix of N in the spherical basis at level n (half-space convention):
/// diagonal E_n × ratio, off-diagonal −2Ω A_n^{q+1}. Its eigenvalues are
/// E_z(p), and 2N = Wᵀ diag(2E_z) W.
pub fn n_matrix_sph(n: u32, params: &SystemParams, branch: Branch) -> Result<DMatrix<f64>> {
    let Channel { c, sb } = channel(params, branch)?;
    let e_n = energy_level(n, params, branch)?;
    let diag: Vec<f64> = (0..=n).map(|q| e_n * n_diagonal_ratio(q, c, sb)).collect();
    let off = (1..=n)
        .map(|q| a_coupling(n, q, params, branch).map(|a| -2.0 * params.omega() * a))
        .collect::<Result<Vec<_>>>()?;
    Ok(symmetric_tridiagonal(&diag, &off))
}

/// diag(A_0, …, A_n).
pub fn separation_constants(n: u32, params: &SystemParams, branch: Branch) -> Result<Vec<f64>> {
    (0..=n).map(|q| separation_constant_a(q, params, branch)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::energy_cylindrical_parts;
    use crate::tridiag::tridiag_eigen;
    use proptest::prelude::*;

    fn params(omega: f64, p: f64, q: f64, m: i32) -> SystemParams {
        SystemParams::new(omega, p, q, m).unwrap()
    }

    fn reference() -> SystemParams {
        params(1.0, 0.09 - 0.25, 0.0, 1)
    }

    /// Textbook Racah formula with integer factorials, for (half-)integer arguments.
    fn racah(a: f64, b: f64, al: f64, be: f64, c: f64) -> f64 {
        let f = |x: f64| -> f64 { (1..=(x.round() as i64)).map(|i| i as f64).product() };
        let ga = al + be;
        let pref = (2.0 * c + 1.0) * f(a + b - c) * f(a - b + c) * f(-a + b + c) / f(a + b + c + 1.0)
            * f(a + al) * f(a - al) * f(b + be) * f(b - be) * f(c + ga) * f(c - ga);
        let mut s = 0.0;
        for t in 0..40 {
            let t = t as f64;
            let args = [a + b - c - t, a - al - t, b + be - t, c - b + al + t, c - a - be + t];
            if args.iter().any(|&x| x < -1e-9) {
                continue;
            }
            let den: f64 = f(t) * args.iter().map(|&x| f(x)).product::<f64>();
            s += if t as i64 % 2 == 0 { 1.0 } else { -1.0 } / den;
        }
        pref.sqrt() * s
    }

    fn half_integer_cases() -> Vec<(f64, f64, f64, f64, f64)> {
        let mut out = vec![];
        for a2 in 0..=5i32 {
            for b2 in 0..=5i32 {
                let (a, b) = (a2 as f64 / 2.0, b2 as f64 / 2.0);
                let mut c = (a - b).abs();
                while c <= a + b + 1e-9 {
                    for al2 in (-a2..=a2).step_by(2) {
                        for be2 in (-b2..=b2).step_by(2) {
                            let (al, be) = (al2 as f64 / 2.0, be2 as f64 / 2.0);
                            if (al + be).abs() <= c + 1e-9 {
                                out.push((a, b, al, be, c));
                            }
                        }
                    }
                    c += 1.0;
                }
            }
        }
        out
    }

    #[test]
    fn textbook_values() {
        let v = cg_continued(&CgArgs::new(0.5, 0.5, 0.5, -0.5, 1.0)).unwrap();
        assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
        let v = cg_continued(&CgArgs::new(1.0, 1.0, 0.0, 0.0, 2.0)).unwrap();
        assert!((v - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let mut off = CgArgs::new(1.0, 1.0, 0.0, 0.0, 2.0);
        off.gamma = 1.0;
        assert_eq!(cg_continued(&off).unwrap(), 0.0);
    }

    #[test]
    fn matches_integer_racah_formula() {
        for (a, b, al, be, c) in half_integer_cases() {
            let v = cg_continued(&CgArgs::new(a, b, al, be, c)).unwrap();
            assert!((v - racah(a, b, al, be, c)).abs() < 1e-13, "{a} {b} {al} {be} {c}");
        }
    }

    #[test]
    fn rejects_non_terminating_arguments() {
        assert!(cg_continued(&CgArgs::new(0.3, 0.4, 0.1, 0.2, 0.25)).is_err());
    }

    #[test]
    fn symmetries_at_half_integers() {
        for (a, b, al, be, c) in half_integer_cases() {
            let ga = al + be;
            let v = cg_continued(&CgArgs::new(a, b, al, be, c)).unwrap();
            let phase = if ((a + b - c).round() as i64) % 2 == 0 { 1.0 } else { -1.0 };
            let flipped = cg_continued(&CgArgs::new(a, b, -al, -be, c)).unwrap();
            assert!((v - phase * flipped).abs() < 1e-12);
            let swapped = cg_continued(&CgArgs::new(b, a, be, al, c)).unwrap();
            assert!((v - phase * swapped).abs() < 1e-12);
            let regge = cg_continued(&CgArgs::new(
                (a + b + ga) / 2.0,
                (a + b - ga) / 2.0,
                (a - b + al - be) / 2.0,
                (a - b - al + be) / 2.0,
                c,
            ))
            .unwrap();
            assert!((v - regge).abs() < 1e-12, "Regge {a} {b} {al} {be} {c}");
        }
    }

    #[test]
    fn ground_level_is_one() {
        for prm in [reference(), params(2.0, 3.0, 1.0, 2), params(1.0, 0.0, 0.0, 0)] {
            for branch in prm.admissible_branches() {
                assert!((w_coefficient(0, 0, 0, &prm, branch).unwrap() - 1.0).abs() < 1e-14);
                assert!((w_integral_oracle(0, 0, 0, &prm, branch).unwrap() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn racah_and_integral_routes_agree() {
        let prm = reference();
        for branch in prm.admissible_branches() {
            for n in 0..=6 {
                for p in 0..=n {
                    for q in 0..=n {
                        let w = w_coefficient(n, p, q, &prm, branch).unwrap();
                        let o = w_integral_oracle(n, p, q, &prm, branch).unwrap();
                        assert!((w - o).abs() < 1e-12, "n={n} p={p} q={q} {branch}: {w} vs {o}");
                    }
                }
            }
        }
    }

    #[test]
    fn index_errors() {
        assert!(matches!(w_coefficient(2, 3, 0, &reference(), Branch::Plus), Err(Error::Index(_))));
        assert!(w_coefficient(1, 0, 0, &params(1.0, 1.0, 0.0, 0), Branch::Minus).is_err());
    }

    #[test]
    fn matrix_element_examples() {
        let prm = reference();
        let m0 = m_matrix_cyl(0, &prm, Branch::Plus).unwrap();
        assert!((m0[(0, 0)] - 2.52).abs() < 1e-13);
        let a0 = separation_constant_a(0, &prm, Branch::Plus).unwrap();
        assert!((m0[(0, 0)] - a0 / 2.0).abs() < 1e-13);
        let n0 = n_matrix_sph(0, &prm, Branch::Plus).unwrap();
        assert!((n0[(0, 0)] - 1.3).abs() < 1e-13);

        let m2 = m_matrix_cyl(2, &prm, Branch::Plus).unwrap();
        let spec = tridiag_eigen(
            &(0..3).map(|i| 2.0 * m2[(i, i)]).collect::<Vec<_>>(),
            &(0..2).map(|i| 2.0 * m2[(i, i + 1)]).collect::<Vec<_>>(),
            false,
        )
        .unwrap();
        for q in 0..3 {
            let a = separation_constant_a(q, &prm, Branch::Plus).unwrap();
            assert!((spec.values[q as usize] - a).abs() < 1e-10);
        }
        let n3 = n_matrix_sph(3, &prm, Branch::Plus).unwrap();
        let spec = tridiag_eigen(
            &(0..4).map(|i| n3[(i, i)]).collect::<Vec<_>>(),
            &(0..3).map(|i| n3[(i, i + 1)]).collect::<Vec<_>>(),
            false,
        )
        .unwrap();
        for p in 0..4 {
            let ez = energy_cylindrical_parts(3 - p, p, &prm, Branch::Plus).unwrap().1;
            assert!((spec.values[p as usize] - ez).abs() < 1e-10);
        }
        for n in 0..5 {
            let m = m_matrix_cyl(n, &prm, Branch::Plus).unwrap();
            assert_eq!(m, m.transpose());
            let nm = n_matrix_sph(n, &prm, Branch::Plus).unwrap();
            assert_eq!(nm, nm.transpose());
            assert_eq!(a_coupling(n, n + 1, &prm, Branch::Plus).unwrap(), 0.0);
        }
    }

    #[test]
    fn removable_singularity_in_n_diagonal() {
        // c = b = ½ on the Minus branch makes c − b vanish
        let prm = params(1.0, 0.0, 0.25, 0);
        let n = n_matrix_sph(3, &prm, Branch::Minus).unwrap();
        assert!(n.iter().all(|v| v.is_finite()));
        let w = w_matrix(3, &prm, Branch::Minus).unwrap();
        let ez: Vec<f64> = (0..=3).map(|p| energy_cylindrical_parts(3 - p, p, &prm, Branch::Minus).unwrap().1).collect();
        let back = w.entries.transpose() * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(ez)) * &w.entries;
        assert!((back - n).abs().max() < 1e-12);
    }

    #[test]
    fn ring_coefficients_match_general_ones() {
        for &(q_strength, m) in &[(0.0, 0), (0.49, 1), (3.0, 2)] {
            let prm = params(1.0, 0.0, q_strength, m);
            let delta = prm.channel().delta;
            let am = m.unsigned_abs();
            for branch in [Branch::Plus, Branch::Minus] {
                let odd = u32::from(branch == Branch::Plus);
                for n in 0..=5u32 {
                    for p in 0..=n {
                        for q in 0..=n {
                            let w = w_coefficient(n, p, q, &prm, branch).unwrap();
                            let big_n = am + 2 * n + odd;
                            let r = ring_w(big_n, m, 2 * p + odd, am + 2 * q + odd, delta).unwrap();
                            assert!((w - r).abs() < 1e-12, "m={m} n={n} p={p} q={q} {branch}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ring_examples_and_parity() {
        // N = |m|, n3 = 0: one-dimensional level
        assert!((ring_w(1, 1, 0, 1, 0.3).unwrap().abs() - 1.0).abs() < 1e-14);
        assert!((ring_w(0, 0, 0, 0, 0.0).unwrap() - 1.0).abs() < 1e-14);
        // N − |m| − n3 odd, N − l odd
        assert!(ring_w(4, 1, 2, 2, 0.7).is_err());
        assert!(ring_w(4, 1, 1, 3, 0.7).is_err());
        assert!(ring_w(4, 1, 1, 0, 0.7).is_err());
    }

    #[test]
    fn ring_unitarity() {
        // N = 4, m = 1: N − |m| odd, so n3 ∈ {1, 3} and l ∈ {2, 4}
        for n3 in [1u32, 3] {
            let s: f64 = [2u32, 4].iter().map(|&l| ring_w(4, 1, n3, l, 0.7).unwrap().powi(2)).sum();
            assert!((s - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn regge_route_at_continued_arguments() {
        // the untransformed ring-shape arguments, with phase (−1)^{(N−l)/2},
        // reproduce the canonical form obtained through the symmetries
        let prm = params(1.0, 0.0, 1.3, 1);
        let delta = prm.channel().delta;
        for branch in [Branch::Plus, Branch::Minus] {
            let (odd, pm) = if branch == Branch::Plus { (1u32, 1.0) } else { (0, -1.0) };
            for n in 0..=4u32 {
                for p in 0..=n {
                    for q in 0..=n {
                        let big_n = 1 + 2 * n + odd;
                        let (n3, l) = (2 * p + odd, 1 + 2 * q + odd);
                        let (bn, am, n3f, lf) = (big_n as f64, 1.0, n3 as f64, l as f64);
                        let raw = CgArgs::new(
                            (bn - am - 0.5 + pm * 0.5) / 4.0,
                            (bn + am - 0.5 - pm * 0.5) / 4.0 + delta / 2.0,
                            (2.0 * n3f - bn + am - 0.5 + pm * 0.5) / 4.0,
                            (-2.0 * n3f + bn + am + 0.5 + pm * 0.5) / 4.0 + delta / 2.0,
                            (2.0 * lf - 1.0) / 4.0 + delta / 2.0,
                        );
                        let phase = if ((big_n - l) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                        let via_raw = phase * cg_continued(&raw).unwrap();
                        let canonical = ring_w(big_n, 1, n3, l, delta).unwrap();
                        assert!((via_raw - canonical).abs() < 1e-12);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn w_is_orthogonal(
            p_strength in -0.24f64..4.0,
            q_strength in 0.0f64..4.0,
            m in -2i32..=2,
            n in 0u32..=8,
        ) {
            let prm = params(1.0, p_strength, q_strength, m);
            for branch in prm.admissible_branches() {
                let w = w_matrix(n, &prm, branch).unwrap();
                prop_assert!(w.orthogonality_defect() < 1e-10);
                prop_assert_eq!(w.transpose().transpose(), w.clone());
            }
        }

        #[test]
        fn change_of_basis_identities(
            omega in 0.2f64..3.0,
            p_strength in -0.24f64..4.0,
            q_strength in 0.0f64..4.0,
            m in -2i32..=2,
            n in 0u32..=5,
        ) {
            let prm = params(omega, p_strength, q_strength, m);
            for branch in prm.admissible_branches() {
                let w = w_matrix(n, &prm, branch).unwrap().entries;
                let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(separation_constants(n, &prm, branch).unwrap()));
                let lhs = 2.0 * m_matrix_cyl(n, &prm, branch).unwrap();
                let rhs = &w * a * w.transpose();
                prop_assert!((lhs - &rhs).abs().max() < 1e-10 * rhs.abs().max().max(1.0));

                let ez: Vec<f64> = (0..=n)
                    .map(|p| energy_cylindrical_parts(n - p, p, &prm, branch).unwrap().1)
                    .collect();
                let ez2 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(ez)) * 2.0;
                let lhs = 2.0 * n_matrix_sph(n, &prm, branch).unwrap();
                let rhs = w.transpose() * ez2 * &w;
                prop_assert!((lhs - &rhs).abs().max() < 1e-10 * rhs.abs().max().max(1.0));
            }
        }

        #[test]
        fn projection_recursion(
            p_strength in -0.24f64..4.0,
            q_strength in 0.0f64..4.0,
            n in 2u32..=7,
            p_seed in 0u32..100,
            q_seed in 0u32..100,
        ) {
            // interior p, so that p ± 1 stay in range
            let prm = params(1.0, p_strength, q_strength, 1);
            let p = 1 + p_seed % (n - 1);
            let q = q_seed % (n + 1);
            for branch in prm.admissible_branches() {
                let x = w_cg_args(n, p, q, &prm, branch).unwrap();
                let (a, b, al, be, c) = (x.a, x.b, x.alpha, x.beta, x.c);
                let centre = cg_continued(&x).unwrap();
                let lower = cg_continued(&CgArgs::new(a, b, al - 1.0, be + 1.0, c)).unwrap();
                let upper = cg_continued(&CgArgs::new(a, b, al + 1.0, be - 1.0, c)).unwrap();
                let lhs = (-a * (a + 1.0) - b * (b + 1.0) + c * (c + 1.0) - 2.0 * al * be) * centre;
                let rhs = ((a + al) * (a - al + 1.0) * (b - be) * (b + be + 1.0)).sqrt() * lower
                    + ((a - al) * (a + al + 1.0) * (b + be) * (b - be + 1.0)).sqrt() * upper;
                let scale = lhs.abs().max(rhs.abs()).max(1.0);
                prop_assert!((lhs - rhs).abs() < 1e-10 * scale);
            }
        }
    }
}

//! Scalar special functions and Gaussian quadrature.
//!
//! Everything downstream (normalization constants, continued Clebsch-Gordan
//! sums, overlap oracles) is built on the handful of routines here. Gamma
//! function products are always formed in log space.

mod poly;
mod quadrature;

pub use poly::{assoc_legendre, gegenbauer, gen_laguerre, hermite, jacobi_p};
pub use quadrature::{build_quadrature, QuadratureKind, QuadratureRule};

use crate::error::{domain, Result};

/// Natural logarithm of Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(libm::lgamma_r(x).0)
}

/// `ln|Γ(x)|` together with the sign of Γ(x); `None` at the poles x = 0, −1, −2, …
pub fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if is_nonpositive_integer(x) {
        return None;
    }
    let (v, s) = libm::lgamma_r(x);
    Some((v, if s < 0 { -1.0 } else { 1.0 }))
}

/// 1/Γ(x), with the convention 1/Γ(k) = 0 for k ∈ {0, −1, −2, …}.
pub fn recip_gamma(x: f64) -> f64 {
    match ln_gamma_signed(x) {
        None => 0.0,
        Some((lg, s)) => s * (-lg).exp(),
    }
}

/// Pochhammer symbol (x)_n = Γ(x+n)/Γ(x).
pub fn pochhammer(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (x + k as f64))
}

/// ln(n!).
pub fn ln_factorial(n: u32) -> f64 {
    libm::lgamma_r(n as f64 + 1.0).0
}

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Rounds `x` to the nearest integer when it is within `1e-9` of one.
///
/// Integer combinations such as `a + b − c` are assembled from halves of
/// non-integer reals and pick up a few ulps of noise on the way.
pub(crate) fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// ₂F₁(a, b; c; 1).
///
/// Uses the Gauss summation formula when `c − a − b > 0`, and the finite
/// series when `a` is a non-positive integer.
pub fn hyp2f1_unit(a: f64, b: f64, c: f64) -> Result<f64> {
    let a = snap(a);
    if is_nonpositive_integer(a) && is_nonpositive_integer(snap(c)) {
        return Err(domain(format!(
            "2F1(a,b;c;1) undefined for non-positive integer c = {c}"
        )));
    }
    if c - a - b > 0.0 {
        // Γ(c)Γ(c−a−b) / [Γ(c−a)Γ(c−b)]
        let num = match (ln_gamma_signed(c), ln_gamma_signed(c - a - b)) {
            (Some(x), Some(y)) => (x.0 + y.0, x.1 * y.1),
            _ => return Err(domain(format!("2F1(a,b;c;1): Γ({c}) has a pole"))),
        };
        let (ra, rb) = (recip_gamma(c - a), recip_gamma(c - b));
        return Ok(num.1 * num.0.exp() * ra * rb);
    }
    if is_nonpositive_integer(a) {
        let terms = (-a) as u32;
        let mut sum = CompensatedSum::default();
        let mut term = 1.0;
        sum.add(term);
        for k in 0..terms {
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
            sum.add(term);
        }
        return Ok(sum.value());
    }
    Err(domain(format!(
        "2F1({a},{b};{c};1) diverges: c - a - b = {} <= 0",
        c - a - b
    )))
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn ln_gamma_reference_values() {
        assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
        assert!((ln_gamma(0.5).unwrap() - std::f64::consts::PI.sqrt().ln()).abs() < 1e-15);
        // 40-digit reference values
        assert!(rel(ln_gamma(7.3).unwrap(), 7.147_892_523_022_248) < 1e-14);
        assert!(rel(ln_gamma(1e-3).unwrap(), 6.907_178_885_383_853) < 1e-14);
        assert!(rel(ln_gamma(300.0).unwrap(), 1_409.202_067_470_411_7) < 1e-14);
        assert!(rel(ln_gamma(1.000001).unwrap(), -5.772_148_423_874_147e-7) < 1e-13);
        assert!(rel(ln_gamma(1.9999).unwrap(), -4.227_520_877_215_346e-5) < 1e-13);
        assert!(rel(ln_gamma(2.5).unwrap(), 0.284_682_870_472_919_2) < 1e-14);
    }

    #[test]
    fn ln_gamma_rejects_nonpositive() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-2.5).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn reciprocal_gamma_vanishes_at_poles() {
        for k in 0..6 {
            assert_eq!(recip_gamma(-(k as f64)), 0.0);
        }
        assert!((recip_gamma(-0.5) + 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
        assert!((recip_gamma(4.0) - 1.0 / 6.0).abs() < 1e-16);
        // [Γ(q−q'+1)Γ(q'−q+1)]⁻¹ = δ_qq'
        for q in 0..5i32 {
            for qp in 0..5i32 {
                let v = recip_gamma((q - qp + 1) as f64) * recip_gamma((qp - q + 1) as f64);
                assert_eq!(v, if q == qp { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn hyp2f1_unit_cases() {
        assert!((hyp2f1_unit(-1.0, 2.0, 4.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((hyp2f1_unit(0.0, 1.7, 2.2).unwrap() - 1.0).abs() < 1e-15);
        let direct = 1.0 + (-2.0 * 1.3) / 3.7 + (-2.0 * -1.0) * (1.3 * 2.3) / (3.7 * 4.7 * 2.0);
        assert!((hyp2f1_unit(-2.0, 1.3, 3.7).unwrap() - direct).abs() < 1e-14);
        assert!((hyp2f1_unit(-2.0, 1.3, 3.7).unwrap() - 0.469_235_192_639_447_96).abs() < 1e-14);
        // non-terminating convergent case against Gauss' formula by hand: 2F1(0.5,0.5;2;1) = Γ(2)Γ(1)/Γ(1.5)²
        let g15 = 0.5 * std::f64::consts::PI.sqrt();
        assert!((hyp2f1_unit(0.5, 0.5, 2.0).unwrap() - 1.0 / (g15 * g15)).abs() < 1e-14);
        assert!(hyp2f1_unit(0.5, 0.7, 1.0).is_err());
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let s: CompensatedSum = [1e16, 1.0, -1e16, 1.0].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }
}

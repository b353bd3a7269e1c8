//! Classical orthogonal polynomials by forward three-term recurrence.

use crate::error::{domain, Result};

/// Jacobi polynomial P_n^(α,β)(x).
pub fn jacobi_p(n: u32, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(domain(format!(
            "jacobi_p requires alpha, beta > -1, got ({alpha}, {beta})"
        )));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let ab = alpha + beta;
    let mut prev = 1.0;
    let mut cur = 0.5 * (alpha - beta) + 0.5 * (ab + 2.0) * x;
    for k in 1..n {
        let k = k as f64;
        let s = 2.0 * k + ab;
        let a1 = 2.0 * (k + 1.0) * (k + ab + 1.0) * s;
        let a2 = (s + 1.0) * (alpha * alpha - beta * beta);
        let a3 = s * (s + 1.0) * (s + 2.0);
        let a4 = 2.0 * (k + alpha) * (k + beta) * (s + 2.0);
        let next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Generalized Laguerre polynomial L_n^α(x).
pub fn gen_laguerre(n: u32, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(domain(format!("gen_laguerre requires alpha > -1, got {alpha}")));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Gegenbauer polynomial C_n^λ(x), λ > −1/2, λ ≠ 0.
pub fn gegenbauer(n: u32, lambda: f64, x: f64) -> Result<f64> {
    if !(lambda > -0.5) || lambda == 0.0 {
        return Err(domain(format!(
            "gegenbauer requires lambda > -1/2 and lambda != 0, got {lambda}"
        )));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lambda * x;
    for k in 1..n {
        let k = k as f64;
        let next = (2.0 * (k + lambda) * x * cur - (k + 2.0 * lambda - 1.0) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Physicists' Hermite polynomial H_n(x).
pub fn hermite(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Associated Legendre function P_l^m(x) for 0 ≤ m ≤ l and |x| ≤ 1.
///
/// The sign follows the Gegenbauer connecting formula
/// `P_l^m(x) = (−2)^m Γ(m+½)/√π (1−x²)^{m/2} C_{l−m}^{m+½}(x)`, so that
/// `P_m^m(x) = (−1)^m (2m−1)!! (1−x²)^{m/2}`.
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> Result<f64> {
    if m > l {
        return Err(domain(format!("assoc_legendre requires m <= l, got m={m}, l={l}")));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain(format!("assoc_legendre requires |x| <= 1, got {x}")));
    }
    let s = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut pmm = 1.0;
    for i in 0..m {
        pmm *= -((2 * i + 1) as f64) * s;
    }
    if l == m {
        return Ok(pmm);
    }
    let mut prev = pmm;
    let mut cur = x * (2 * m + 1) as f64 * pmm;
    for ll in (m + 1)..l {
        let llf = ll as f64;
        let mf = m as f64;
        let next = ((2.0 * llf + 1.0) * x * cur - (llf + mf) * prev) / (llf - mf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{ln_gamma, pochhammer};
    use proptest::prelude::*;

    /// Falling factorial a(a−1)…(a−k+1).
    fn falling(a: f64, k: u32) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (a - i as f64))
    }

    fn binom(n: u32, k: u32) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    /// Rodrigues form, differentiated with the Leibniz rule.
    fn jacobi_rodrigues(n: u32, a: f64, b: f64, x: f64) -> (f64, f64) {
        let (an, bn) = (a + n as f64, b + n as f64);
        let mut d = 0.0;
        let mut mag = 0.0;
        for k in 0..=n {
            let left = (-1f64).powi(k as i32) * falling(an, k) * (1.0 - x).powf(an - k as f64);
            let right = falling(bn, n - k) * (1.0 + x).powf(bn - (n - k) as f64);
            d += binom(n, k) * left * right;
            mag += (binom(n, k) * left * right).abs();
        }
        let fact: f64 = (1..=n).map(|i| i as f64).product();
        let pre = (-1f64).powi(n as i32) / (2f64.powi(n as i32) * fact)
            * (1.0 - x).powf(-a)
            * (1.0 + x).powf(-b);
        (pre * d, (pre * mag).abs())
    }

    /// L_n^α(x) = Σ_k C(n+α, n−k) (−x)^k / k!
    fn laguerre_sum(n: u32, a: f64, x: f64) -> (f64, f64) {
        let mut s = 0.0;
        let mut mag = 0.0;
        for k in 0..=n {
            let c = (ln_gamma(n as f64 + a + 1.0).unwrap()
                - ln_gamma((n - k) as f64 + 1.0).unwrap()
                - ln_gamma(k as f64 + a + 1.0).unwrap())
                .exp();
            let fk: f64 = (1..=k).map(|i| i as f64).product();
            s += c * (-x).powi(k as i32) / fk;
            mag += (c * x.powi(k as i32) / fk).abs();
        }
        (s, mag)
    }

    /// C_n^λ(x) = Σ_k (−1)^k (λ)_{n−k} (2x)^{n−2k} / (k! (n−2k)!)
    fn gegenbauer_sum(n: u32, lam: f64, x: f64) -> (f64, f64) {
        let mut s = 0.0;
        let mut mag = 0.0;
        for k in 0..=n / 2 {
            let fk: f64 = (1..=k).map(|i| i as f64).product();
            let fnk: f64 = (1..=(n - 2 * k)).map(|i| i as f64).product();
            let term = pochhammer(lam, n - k) * (2.0 * x).powi((n - 2 * k) as i32) / (fk * fnk);
            s += (-1f64).powi(k as i32) * term;
            mag += term.abs();
        }
        (s, mag)
    }

    /// H_n(x) = n! Σ_k (−1)^k (2x)^{n−2k} / (k!(n−2k)!)
    fn hermite_sum(n: u32, x: f64) -> (f64, f64) {
        let fnn: f64 = (1..=n).map(|i| i as f64).product();
        let mut s = 0.0;
        let mut mag = 0.0;
        for k in 0..=n / 2 {
            let fk: f64 = (1..=k).map(|i| i as f64).product();
            let fnk: f64 = (1..=(n - 2 * k)).map(|i| i as f64).product();
            let term = (2.0 * x).powi((n - 2 * k) as i32) / (fk * fnk);
            s += (-1f64).powi(k as i32) * term;
            mag += term.abs();
        }
        (fnn * s, fnn * mag)
    }

    /// Agreement up to `tol` relative, plus the rounding floor of the
    /// alternating oracle sum whose absolute terms add up to `mag`.
    fn agrees(v: f64, (o, mag): (f64, f64), tol: f64) -> bool {
        (v - o).abs() <= tol * o.abs().max(1.0) + 64.0 * f64::EPSILON * mag
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_p(0, 0.3, -0.2, 0.77).unwrap(), 1.0);
        assert!((jacobi_p(1, 1.0, 0.5, 0.0).unwrap() - 0.25).abs() < 1e-16);
        let v = jacobi_p(4, 0.7, 1.3, 0.3).unwrap();
        assert!(close(v, jacobi_rodrigues(4, 0.7, 1.3, 0.3).0, 1e-12));
        assert!(close(v, 0.201_475_000_000_000_07, 1e-13));
        assert!(jacobi_p(2, -1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(gen_laguerre(0, 2.2, 5.0).unwrap(), 1.0);
        assert!((gen_laguerre(1, 0.5, 2.0).unwrap() + 0.5).abs() < 1e-15);
        let v = gen_laguerre(3, 1.2, 0.7).unwrap();
        assert!(close(v, laguerre_sum(3, 1.2, 0.7).0, 1e-12));
        assert!(close(v, 1.195_833_333_333_333_3, 1e-13));
    }

    #[test]
    fn gegenbauer_examples() {
        assert_eq!(gegenbauer(0, 0.4, 0.9).unwrap(), 1.0);
        assert!((gegenbauer(1, 0.4, 0.9).unwrap() - 0.72).abs() < 1e-15);
        // C_{2n}^λ(x) = (λ)_n/(½)_n P_n^(λ−½,−½)(2x²−1) at (n, λ, x) = (2, 0.9, 0.4)
        let lhs = gegenbauer(4, 0.9, 0.4).unwrap();
        let rhs = pochhammer(0.9, 2) / pochhammer(0.5, 2) * jacobi_p(2, 0.4, -0.5, 2.0 * 0.16 - 1.0).unwrap();
        assert!(close(lhs, rhs, 1e-12));
        assert!(close(lhs, -0.401_808_960_000_000_1, 1e-13));
        assert!(gegenbauer(2, 0.0, 0.3).is_err());
        assert!(gegenbauer(2, -0.6, 0.3).is_err());
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(0, 3.3), 1.0);
        assert_eq!(hermite(1, 2.0), 4.0);
        assert!((hermite(3, 0.5) + 5.0).abs() < 1e-14);
    }

    #[test]
    fn assoc_legendre_examples() {
        assert_eq!(assoc_legendre(0, 0, 0.3).unwrap(), 1.0);
        assert!((assoc_legendre(1, 1, 0.0).unwrap().abs() - 1.0).abs() < 1e-15);
        // mpmath.legenp(2, 1, 0.5), mpmath.legenp(5, 3, -0.3)
        assert!(close(assoc_legendre(2, 1, 0.5).unwrap(), -1.299_038_105_676_658, 1e-14));
        assert!(close(assoc_legendre(5, 3, -0.3).unwrap(), 8.659_144_616_061_958, 1e-13));
        assert!(assoc_legendre(1, 2, 0.1).is_err());
    }

    fn legendre_via_gegenbauer(l: u32, m: u32, x: f64) -> f64 {
        let pre = (-2f64).powi(m as i32) / std::f64::consts::PI.sqrt()
            * ln_gamma(m as f64 + 0.5).unwrap().exp();
        pre * (1.0 - x * x).powf(0.5 * m as f64) * gegenbauer(l - m, m as f64 + 0.5, x).unwrap()
    }

    #[test]
    fn connecting_formulas_on_grid() {
        let grid: Vec<f64> = (0..50).map(|i| -0.98 + 1.96 * i as f64 / 49.0).collect();
        for &x in &grid {
            for n in 0..5u32 {
                for &lam in &[0.3, 0.9, 2.4] {
                    // Gegenbauer ↔ Jacobi, odd and even
                    let even = pochhammer(lam, n) / pochhammer(0.5, n)
                        * jacobi_p(n, lam - 0.5, -0.5, 2.0 * x * x - 1.0).unwrap();
                    assert!(close(gegenbauer(2 * n, lam, x).unwrap(), even, 1e-11));
                    let odd = pochhammer(lam, n + 1) / pochhammer(0.5, n + 1)
                        * x
                        * jacobi_p(n, lam - 0.5, 0.5, 2.0 * x * x - 1.0).unwrap();
                    assert!(close(gegenbauer(2 * n + 1, lam, x).unwrap(), odd, 1e-11));
                }
                // Hermite ↔ Laguerre, odd and even
                let fact: f64 = (1..=n).map(|i| i as f64).product();
                let sgn = (-1f64).powi(n as i32);
                let y = 2.5 * x;
                let h_even = sgn * 4f64.powi(n as i32) * fact * gen_laguerre(n, -0.5, y * y).unwrap();
                assert!(close(hermite(2 * n, y), h_even, 1e-11));
                let h_odd = sgn * 2.0 * 4f64.powi(n as i32) * fact * y * gen_laguerre(n, 0.5, y * y).unwrap();
                assert!(close(hermite(2 * n + 1, y), h_odd, 1e-11));
            }
            // Legendre ↔ Gegenbauer
            for l in 0..7u32 {
                for m in 0..=l {
                    let lhs = assoc_legendre(l, m, x).unwrap();
                    assert!(close(lhs, legendre_via_gegenbauer(l, m, x), 1e-11));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn recurrences_match_explicit_forms(
            n in 0u32..=8,
            a in -0.95f64..4.0,
            b in -0.95f64..4.0,
            x in -0.99f64..0.99,
            t in 0.0f64..6.0,
            lam in 0.05f64..3.0,
        ) {
            let tol = 1e-11;
            prop_assert!(agrees(jacobi_p(n, a, b, x).unwrap(), jacobi_rodrigues(n, a, b, x), tol));
            prop_assert!(agrees(gen_laguerre(n, a, t).unwrap(), laguerre_sum(n, a, t), tol));
            prop_assert!(agrees(gegenbauer(n, lam, x).unwrap(), gegenbauer_sum(n, lam, x), tol));
            prop_assert!(agrees(hermite(n, t - 3.0), hermite_sum(n, t - 3.0), tol));
        }
    }
}

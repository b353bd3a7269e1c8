//! Perturbation series for λ_k(R) and the prolate expansion coefficients,
//! in powers of ΩR² (small R, over the spherical basis) or of 1/(ΩR²)
//! (large R, over the cylindrical basis).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interbasis::{a_coupling, b_coupling, c_coupling, d_coupling};
use crate::model::{energy_cylindrical_parts, separation_constant_a, Branch, SystemParams};
use crate::specfun::CompensatedSum;

pub const DEFAULT_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    SmallR,
    LargeR,
}

/// Series coefficients for one state (n, k).
///
/// `vector_coeffs[j][i]` is T_{ki}^{(j)} (small R) or U_{ki}^{(j)} (large R)
/// for j = 0..=order; `lambda_coeffs[j-1]` is λ_k^{(j)}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesExpansion {
    pub regime: Regime,
    pub n: u32,
    pub k: u32,
    pub order: usize,
    /// A_k (small R) or E_z(k)/(2Ω) (large R).
    pub leading: f64,
    pub omega: f64,
    pub lambda_coeffs: Vec<f64>,
    pub vector_coeffs: Vec<Vec<f64>>,
}

impl SeriesExpansion {
    /// Expansion variable: ΩR² for small R, 1/(ΩR²) for large R.
    pub fn variable(&self, interfocus: f64) -> f64 {
        let x = self.omega * interfocus * interfocus;
        match self.regime {
            Regime::SmallR => x,
            Regime::LargeR => 1.0 / x,
        }
    }

    /// The series for λ_k(R) (small R) or λ_k(R)/(ΩR²) (large R) truncated
    /// after `upto` correction orders.
    pub fn reduced_lambda(&self, interfocus: f64, upto: usize) -> f64 {
        let x = self.variable(interfocus);
        let mut sum = CompensatedSum::default();
        sum.add(self.leading);
        let mut power = 1.0;
        for coeff in self.lambda_coeffs.iter().take(upto) {
            power *= x;
            sum.add(coeff * power);
        }
        sum.value()
    }

    /// λ_k(R) from the series truncated after `upto` orders.
    pub fn lambda(&self, interfocus: f64, upto: usize) -> f64 {
        let reduced = self.reduced_lambda(interfocus, upto);
        match self.regime {
            Regime::SmallR => reduced,
            Regime::LargeR => reduced * self.omega * interfocus * interfocus,
        }
    }

    /// Coefficient vector (T or U over i = 0..=n) truncated after `upto` orders.
    pub fn vector(&self, interfocus: f64, upto: usize) -> Vec<f64> {
        let x = self.variable(interfocus);
        (0..self.vector_coeffs[0].len())
            .map(|i| {
                let mut sum = CompensatedSum::default();
                let mut power = 1.0;
                for coeffs in self.vector_coeffs.iter().take(upto + 1) {
                    sum.add(coeffs[i] * power);
                    power *= x;
                }
                sum.value()
            })
            .collect()
    }
}

fn check_order(n: u32, k: u32, order: usize) -> Result<()> {
    if order == 0 {
        return Err(crate::error::domain("series order must be at least 1"));
    }
    if k > n {
        return Err(Error::Index(format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

fn resonance(denominator: f64, k: u32, i: u32) -> Result<f64> {
    if denominator == 0.0 || !denominator.is_finite() {
        return Err(Error::Degenerate(format!("resonant denominator coupling k = {k} and {i}")));
    }
    Ok(denominator)
}

/// Small-R series: T_{nk}^q = δ_kq + Σ T_kq^{(j)}(ΩR²)^j,
/// λ_k = A_k + Σ λ_k^{(j)}(ΩR²)^j.
pub fn small_r_series(n: u32, k: u32, params: &SystemParams, branch: Branch, order: usize) -> Result<SeriesExpansion> {
    check_order(n, k, order)?;
    let dim = n as usize + 1;
    let sum_cb = params.channel().c + params.signed_b(branch)?;
    let upper: Vec<f64> = (0..=n).map(|q| a_coupling(n, q + 1, params, branch)).collect::<Result<_>>()?;
    let lower: Vec<f64> = (0..=n).map(|q| a_coupling(n, q, params, branch)).collect::<Result<_>>()?;
    let diag: Vec<f64> = (0..=n).map(|q| b_coupling(n, q, params, branch)).collect::<Result<_>>()?;

    // B T_q − A^{q+1} T_{q+1} − A^q T_{q−1} at order j − 1
    let coupled = |prev: &[f64], q: usize| -> f64 {
        let mut s = CompensatedSum::default();
        s.add(diag[q] * prev[q]);
        if q + 1 < dim {
            s.add(-upper[q] * prev[q + 1]);
        }
        if q > 0 {
            s.add(-lower[q] * prev[q - 1]);
        }
        s.value()
    };

    let ku = k as usize;
    let mut vectors = vec![unit(dim, ku)];
    let mut lambdas = Vec::with_capacity(order);
    for j in 1..=order {
        let prev = &vectors[j - 1];
        lambdas.push(coupled(prev, ku));
        let mut next = vec![0.0; dim];
        for q in (0..dim).filter(|&q| q != ku) {
            let mut rhs = CompensatedSum::default();
            rhs.add(coupled(prev, q));
            for t in 0..j {
                rhs.add(-lambdas[j - t - 1] * vectors[t][q]);
            }
            let (kf, qf) = (k as f64, q as f64);
            let den = resonance(4.0 * (kf - qf) * (kf + qf + sum_cb + 1.0), k, q as u32)?;
            next[q] = rhs.value() / den;
        }
        vectors.push(next);
    }
    Ok(SeriesExpansion {
        regime: Regime::SmallR,
        n,
        k,
        order,
        leading: separation_constant_a(k, params, branch)?,
        omega: params.omega(),
        lambda_coeffs: lambdas,
        vector_coeffs: vectors,
    })
}

/// Large-R series: U_{nk}^p = δ_kp + Σ U_kp^{(j)}(ΩR²)^{−j},
/// λ_k/(ΩR²) = E_z(k)/(2Ω) + Σ λ_k^{(j)}(ΩR²)^{−j}.
pub fn large_r_series(n: u32, k: u32, params: &SystemParams, branch: Branch, order: usize) -> Result<SeriesExpansion> {
    check_order(n, k, order)?;
    let dim = n as usize + 1;
    let upper: Vec<f64> = (0..=n).map(|p| c_coupling(n, p + 1, params, branch)).collect::<Result<_>>()?;
    let lower: Vec<f64> = (0..=n).map(|p| c_coupling(n, p, params, branch)).collect::<Result<_>>()?;
    let diag: Vec<f64> = (0..=n).map(|p| d_coupling(n, p, params, branch)).collect::<Result<_>>()?;

    let coupled = |prev: &[f64], p: usize| -> f64 {
        let mut s = CompensatedSum::default();
        s.add(diag[p] * prev[p]);
        if p + 1 < dim {
            s.add(upper[p] * prev[p + 1]);
        }
        if p > 0 {
            s.add(lower[p] * prev[p - 1]);
        }
        s.value()
    };

    let ku = k as usize;
    let mut vectors = vec![unit(dim, ku)];
    let mut lambdas = Vec::with_capacity(order);
    for j in 1..=order {
        let prev = &vectors[j - 1];
        lambdas.push(4.0 * coupled(prev, ku));
        let mut next = vec![0.0; dim];
        for p in (0..dim).filter(|&p| p != ku) {
            // the t = 0 term carries δ_kp and drops out for p ≠ k
            let mut rhs = CompensatedSum::default();
            rhs.add(-coupled(prev, p));
            for t in 1..j {
                rhs.add(0.25 * lambdas[j - t - 1] * vectors[t][p]);
            }
            let den = resonance(0.25 * (p as f64 - k as f64), k, p as u32)?;
            next[p] = rhs.value() / den;
        }
        vectors.push(next);
    }
    let e_z = energy_cylindrical_parts(n - k, k, params, branch)?.1;
    Ok(SeriesExpansion {
        regime: Regime::LargeR,
        n,
        k,
        order,
        leading: e_z / (2.0 * params.omega()),
        omega: params.omega(),
        lambda_coeffs: lambdas,
        vector_coeffs: vectors,
    })
}

fn unit(dim: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[k] = 1.0;
    v
}

/// First-order expansion of a spheroidal state over Ψ_{n,k−1,m}, Ψ_{n,k,m},
/// Ψ_{n,k+1,m} (spherical states for small R, cylindrical for large R).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstOrderCorrection {
    pub below: f64,
    pub center: f64,
    pub above: f64,
}

pub fn wavefunction_correction(
    n: u32,
    k: u32,
    params: &SystemParams,
    branch: Branch,
    interfocus: f64,
    regime: Regime,
) -> Result<FirstOrderCorrection> {
    check_order(n, k, 1)?;
    let x = params.omega() * interfocus * interfocus;
    match regime {
        Regime::SmallR => {
            let s = params.channel().c + params.signed_b(branch)? + 2.0 * k as f64;
            let a_k = a_coupling(n, k, params, branch)?;
            let a_next = a_coupling(n, k + 1, params, branch)?;
            // A_n^0 = 0 also covers the 0/0 at k = 0, c ± b = 0
            let below = if a_k == 0.0 { 0.0 } else { -x * a_k / (4.0 * s) };
            let above = if a_next == 0.0 { 0.0 } else { x * a_next / (4.0 * (s + 2.0)) };
            Ok(FirstOrderCorrection { below, center: 1.0, above })
        }
        Regime::LargeR => Ok(FirstOrderCorrection {
            below: 4.0 * c_coupling(n, k, params, branch)? / x,
            center: 1.0,
            above: -4.0 * c_coupling(n, k + 1, params, branch)? / x,
        }),
    }
}

/// Largest deviation between the recursion output and the displayed
/// closed forms for λ^{(1)}, λ^{(2)} and the first-order vector.
pub fn closed_form_mismatch(series: &SeriesExpansion, params: &SystemParams, branch: Branch) -> Result<f64> {
    let (n, k) = (series.n, series.k);
    let mut expected_vector = vec![0.0; n as usize + 1];
    let (l1, l2) = match series.regime {
        Regime::SmallR => {
            let s = params.channel().c + params.signed_b(branch)? + 2.0 * k as f64;
            let a_k = a_coupling(n, k, params, branch)?;
            let a_next = a_coupling(n, k + 1, params, branch)?;
            let low = if a_k == 0.0 { 0.0 } else { a_k * a_k / s };
            let high = a_next * a_next / (s + 2.0);
            if k > 0 {
                expected_vector[k as usize - 1] = if a_k == 0.0 { 0.0 } else { -a_k / (4.0 * s) };
            }
            if k < n {
                expected_vector[k as usize + 1] = a_next / (4.0 * (s + 2.0));
            }
            (b_coupling(n, k, params, branch)?, (low - high) / 4.0)
        }
        Regime::LargeR => {
            let c_k = c_coupling(n, k, params, branch)?;
            let c_next = c_coupling(n, k + 1, params, branch)?;
            if k > 0 {
                expected_vector[k as usize - 1] = 4.0 * c_k;
            }
            if k < n {
                expected_vector[k as usize + 1] = -4.0 * c_next;
            }
            (4.0 * d_coupling(n, k, params, branch)?, 16.0 * (c_k * c_k - c_next * c_next))
        }
    };
    let mut worst = (series.lambda_coeffs[0] - l1).abs();
    if series.order >= 2 {
        worst = worst.max((series.lambda_coeffs[1] - l2).abs());
    }
    for (a, b) in series.vector_coeffs[1].iter().zip(&expected_vector) {
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

/// Empirical exponent of a truncation error e(x) ~ x^s from two probes.
pub fn observed_exponent(x1: f64, err1: f64, x2: f64, err2: f64) -> f64 {
    (err2.abs() / err1.abs()).ln() / (x2 / x1).ln()
}

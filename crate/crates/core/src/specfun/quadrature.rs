use serde::{Deserialize, Serialize};

use super::ln_gamma;
use crate::error::{domain, Error, Result};
use crate::tridiag::tridiag_eigen;

/// Weight function of a Gaussian rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QuadratureKind {
    /// Weight 1 on (−1, 1).
    GaussLegendre,
    /// Weight (1−x)^alpha (1+x)^beta on (−1, 1).
    GaussJacobi { alpha: f64, beta: f64 },
    /// Weight x^alpha e^{−x} on (0, ∞).
    GaussLaguerre { alpha: f64 },
}

/// An N-point Gaussian rule: ∫ w(x) f(x) dx ≈ Σ weights[i] f(nodes[i]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ wᵢ f(xᵢ), accumulated with compensated summation.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect::<super::CompensatedSum>()
            .value()
    }
}

/// Recurrence data for the monic family: p_{k+1} = (x − a_k) p_k − b_k p_{k−1}.
struct Recurrence {
    a: Vec<f64>,
    b: Vec<f64>,
    /// ∫ w(x) dx.
    mu0: f64,
}

fn recurrence(kind: QuadratureKind, n: usize) -> Result<Recurrence> {
    match kind {
        QuadratureKind::GaussLegendre => {
            let b = (0..n)
                .map(|k| {
                    let k = k as f64;
                    if k == 0.0 {
                        0.0
                    } else {
                        k * k / (4.0 * k * k - 1.0)
                    }
                })
                .collect();
            Ok(Recurrence { a: vec![0.0; n], b, mu0: 2.0 })
        }
        QuadratureKind::GaussJacobi { alpha, beta } => {
            if !(alpha > -1.0 && beta > -1.0) {
                return Err(domain(format!(
                    "Gauss-Jacobi exponents must exceed -1, got alpha = {alpha}, beta = {beta}"
                )));
            }
            let ab = alpha + beta;
            let mut a = Vec::with_capacity(n);
            let mut b = Vec::with_capacity(n);
            for k in 0..n {
                let kf = k as f64;
                let s = 2.0 * kf + ab;
                a.push(if k == 0 {
                    (beta - alpha) / (ab + 2.0)
                } else {
                    (beta * beta - alpha * alpha) / (s * (s + 2.0))
                });
                b.push(match k {
                    0 => 0.0,
                    1 => 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab)),
                    _ => {
                        4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab)
                            / (s * s * (s + 1.0) * (s - 1.0))
                    }
                });
            }
            let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0)?
                + ln_gamma(beta + 1.0)?
                - ln_gamma(ab + 2.0)?;
            Ok(Recurrence { a, b, mu0: ln_mu0.exp() })
        }
        QuadratureKind::GaussLaguerre { alpha } => {
            if !(alpha > -1.0) {
                return Err(domain(format!("Gauss-Laguerre exponent must exceed -1, got {alpha}")));
            }
            let a = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
            let b = (0..n).map(|k| k as f64 * (k as f64 + alpha)).collect();
            Ok(Recurrence { a, b, mu0: ln_gamma(alpha + 1.0)?.exp() })
        }
    }
}

/// Evaluates the orthonormal polynomials p_0..p_N at `x`, where the
/// recurrence tables hold N+1 entries.
///
/// Returns (ln Σ_{k<N} p_k², p_N/p_N') with internal rescaling so that the
/// Laguerre family does not overflow far out on the half-line.
fn christoffel(rec: &Recurrence, x: f64) -> (f64, f64) {
    let n = rec.a.len() - 1;
    let mut ln_scale = 0.0;
    let mut prev = 0.0;
    let mut prev_d = 0.0;
    let mut cur = 1.0 / rec.mu0.sqrt();
    let mut cur_d = 0.0;
    let mut sum = 0.0;
    for k in 0..n {
        sum += cur * cur;
        let sb_next = rec.b[k + 1].sqrt();
        let sb = rec.b[k].sqrt();
        let next = ((x - rec.a[k]) * cur - sb * prev) / sb_next;
        let next_d = ((x - rec.a[k]) * cur_d + cur - sb * prev_d) / sb_next;
        prev = cur;
        prev_d = cur_d;
        cur = next;
        cur_d = next_d;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e100 {
            let s = 1e-100;
            prev *= s;
            cur *= s;
            prev_d *= s;
            cur_d *= s;
            sum *= s * s;
            ln_scale += 2.0 * 100.0 * std::f64::consts::LN_10;
        }
    }
    (sum.ln() + ln_scale, cur / cur_d)
}

/// Builds an N-point Gaussian rule for `kind`.
///
/// Nodes are the eigenvalues of the Jacobi matrix, polished by Newton steps
/// on p_N; weights come from the Christoffel function 1/Σ p_k(x)², which
/// keeps full relative accuracy even for the tiny outer Laguerre weights.
pub fn build_quadrature(kind: QuadratureKind, n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(domain("quadrature rule needs at least one node"));
    }
    let rec = recurrence(kind, n + 1)?;
    let off: Vec<f64> = rec.b[1..n].iter().map(|b| b.sqrt()).collect();
    let mut nodes = tridiag_eigen(&rec.a[..n], &off, false)?.values;

    for i in 0..n {
        let gap = if n == 1 {
            1.0
        } else {
            let l = if i > 0 { nodes[i] - nodes[i - 1] } else { f64::INFINITY };
            let r = if i + 1 < n { nodes[i + 1] - nodes[i] } else { f64::INFINITY };
            l.min(r)
        };
        let mut x = nodes[i];
        for _ in 0..3 {
            let (_, step) = christoffel(&rec, x);
            if !step.is_finite() || step.abs() > 0.1 * gap {
                break;
            }
            x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        nodes[i] = x;
    }

    let weights: Vec<f64> = nodes.iter().map(|&x| (-christoffel(&rec, x).0).exp()).collect();

    let (lo, hi) = match kind {
        QuadratureKind::GaussLaguerre { .. } => (0.0, f64::INFINITY),
        _ => (-1.0, 1.0),
    };
    let ordered = nodes.windows(2).all(|w| w[0] < w[1]);
    let inside = nodes.iter().all(|&x| x > lo && x < hi);
    if !ordered || !inside || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::Numeric(format!("{n}-point {kind:?} rule failed its sanity checks")));
    }
    Ok(QuadratureRule { kind, nodes, weights })
}

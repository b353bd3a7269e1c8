//! Symmetric tridiagonal eigensolver (implicit-shift QL).
//!
//! Shared by the Golub-Welsch quadrature construction and the spheroidal
//! separation-constant problems.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition of a real symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct TridiagEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector of `values[k]`; `None` when only
    /// eigenvalues were requested.
    pub vectors: Option<DMatrix<f64>>,
}

/// Diagonalizes the symmetric tridiagonal matrix with diagonal `diag` and
/// sub/super-diagonal `offdiag` (`offdiag.len() + 1 == diag.len()`).
pub fn tridiag_eigen(diag: &[f64], offdiag: &[f64], want_vectors: bool) -> Result<TridiagEigen> {
    let n = diag.len();
    if n == 0 {
        return Ok(TridiagEigen { values: vec![], vectors: want_vectors.then(|| DMatrix::zeros(0, 0)) });
    }
    if offdiag.len() + 1 != n {
        return Err(Error::Index(format!(
            "tridiagonal system with {n} diagonal entries needs {} off-diagonal entries, got {}",
            n - 1,
            offdiag.len()
        )));
    }
    if diag.iter().chain(offdiag).any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite entry in tridiagonal matrix".into()));
    }

    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    let mut z = want_vectors.then(|| DMatrix::<f64>::identity(n, n));

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::Numeric(format!(
                        "QL iteration did not converge for eigenvalue {l} of {n}"
                    )));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_mut() {
                        for k in 0..n {
                            let h = z[(k, i + 1)];
                            z[(k, i + 1)] = s * z[(k, i)] + c * h;
                            z[(k, i)] = c * z[(k, i)] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = z.map(|z| DMatrix::from_fn(n, n, |r, c| z[(r, order[c])]));
    Ok(TridiagEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense(diag: &[f64], off: &[f64]) -> DMatrix<f64> {
        let n = diag.len();
        DMatrix::from_fn(n, n, |i, j| {
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

    #[test]
    fn scalar_and_two_by_two() {
        let e = tridiag_eigen(&[3.5], &[], true).unwrap();
        assert_eq!(e.values, vec![3.5]);
        assert_eq!(e.vectors.unwrap()[(0, 0)], 1.0);

        let e = tridiag_eigen(&[2.0, 2.0], &[1.0], false).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15);
        assert!((e.values[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn second_difference_matrix_spectrum() {
        // eigenvalues of tridiag(-1, 2, -1) are 2 - 2cos(kπ/(n+1))
        let n = 40;
        let e = tridiag_eigen(&vec![2.0; n], &vec![-1.0; n - 1], false).unwrap();
        for (k, v) in e.values.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(tridiag_eigen(&[1.0, 2.0], &[], false).is_err());
        assert!(tridiag_eigen(&[1.0, f64::NAN], &[0.1], false).is_err());
    }

    proptest! {
        #[test]
        fn residual_and_orthonormality(
            diag in proptest::collection::vec(-50.0f64..50.0, 1..30),
            seed in proptest::collection::vec(-20.0f64..20.0, 30),
        ) {
            let n = diag.len();
            let off: Vec<f64> = seed[..n - 1].to_vec();
            let e = tridiag_eigen(&diag, &off, true).unwrap();
            let v = e.vectors.unwrap();
            let a = dense(&diag, &off);
            let norm = a.norm();
            for k in 0..n {
                let col = v.column(k);
                let res = &a * col - col * e.values[k];
                prop_assert!(res.norm() <= 1e-12 * norm.max(1.0));
                if k > 0 {
                    prop_assert!(e.values[k] >= e.values[k - 1]);
                }
            }
            let gram = v.transpose() * &v;
            prop_assert!((gram - DMatrix::identity(n, n)).abs().max() < 1e-12);
        }
    }
}

//! Small dense linear algebra.
//!
//! Matrix inversion runs over the jet ring (jets form a commutative ring
//! with division at nonzero value), so the derivatives of `g^{-1}` come out
//! of the same elimination that produces its values. Dimensions here are
//! tiny (n <= 8), so everything is straightforward Gauss-Jordan / Jacobi.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::scalar::Scalar;

/// Rank-1 array built from a closure.
pub fn tensor1<T>(n: usize, mut f: impl FnMut(usize) -> T) -> Vec<T> {
    (0..n).map(&mut f).collect()
}

/// Rank-2 array built from a closure.
pub fn tensor2<T>(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Vec<Vec<T>> {
    (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect()
}

/// Rank-3 array built from a closure.
pub fn tensor3<T>(n: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Vec<Vec<Vec<T>>> {
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| f(i, j, k)).collect()).collect())
        .collect()
}

/// Rank-4 array built from a closure.
#[allow(clippy::type_complexity)]
pub fn tensor4<T>(
    n: usize,
    mut f: impl FnMut(usize, usize, usize, usize) -> T,
) -> Vec<Vec<Vec<Vec<T>>>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| (0..n).map(|l| f(i, j, k, l)).collect()).collect())
                .collect()
        })
        .collect()
}

/// Sum `f(i)` over `0..n`.
pub fn sum1<T: Scalar>(n: usize, mut f: impl FnMut(usize) -> T) -> T {
    (0..n).fold(T::zero(), |acc, i| acc + f(i))
}

/// Sum `f(i, j)` over the full square.
pub fn sum2<T: Scalar>(n: usize, mut f: impl FnMut(usize, usize) -> T) -> T {
    sum1(n, |i| sum1(n, |j| f(i, j)))
}

/// Invert a matrix of jets by Gauss-Jordan with partial pivoting on values.
///
/// Returns the inverse and the determinant of the value matrix.
pub fn invert_jet_matrix<T: Scalar>(a: &[Vec<Jet<T>>]) -> Result<(Vec<Vec<Jet<T>>>, T)> {
    let n = a.len();
    let order = a[0][0].order();
    let dim = a[0][0].dimension();
    let mut work: Vec<Vec<Jet<T>>> = a.to_vec();
    let mut inv: Vec<Vec<Jet<T>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    Jet::constant(if i == j { T::one() } else { T::zero() }, dim, order)
                })
                .collect()
        })
        .collect();
    let mut det = T::one();

    for col in 0..n {
        let mut pivot = col;
        let mut best = work[col][col].value().abs();
        for row in col + 1..n {
            let v = work[row][col].value().abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == T::zero() {
            return Ok((inv, T::zero()));
        }
        if pivot != col {
            work.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = work[col][col].clone();
        det = det * p.value();
        for j in 0..n {
            work[col][j] = work[col][j].div(&p)?;
            inv[col][j] = inv[col][j].div(&p)?;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = work[row][col].clone();
            if factor.value() == T::zero()
                && factor == Jet::constant(T::zero(), dim, order)
            {
                continue;
            }
            for j in 0..n {
                work[row][j] = work[row][j].sub(&factor.mul(&work[col][j]));
                inv[row][j] = inv[row][j].sub(&factor.mul(&inv[col][j]));
            }
        }
    }
    Ok((inv, det))
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues<T: Scalar>(matrix: &[Vec<T>]) -> Vec<T> {
    let n = matrix.len();
    let mut a: Vec<Vec<T>> = matrix.to_vec();
    let eps = T::epsilon() * T::from_f64_lossy(64.0);
    let scale = a
        .iter()
        .flatten()
        .fold(T::zero(), |m, &v| m.max(v.abs()))
        .max(T::one());
    for _sweep in 0..64 {
        let mut off = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(a[i][j].abs());
            }
        }
        if off <= eps * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= eps * scale * T::from_f64_lossy(1e-3) {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::from_f64_lossy(2.0) * a[p][q]);
                let t = {
                    let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigen: Vec<T> = (0..n).map(|i| a[i][i]).collect();
    eigen.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalue NaN"));
    eigen
}

/// Least-squares solution of `r + lambda*u + mu*v = 0` over tensor slots.
///
/// Solves the 2x2 normal equations in closed form. When the `v` column is
/// numerically absent (below the guard relative to `u`), only `lambda` is
/// recoverable and `mu` is reported as undetermined.
pub struct TwoColumnFit<T> {
    pub lambda: T,
    pub mu: Option<T>,
    /// Ratio of extreme eigenvalues of the normal matrix (1 = perfectly conditioned).
    pub condition: T,
}

pub fn least_squares_two_columns<T: Scalar>(
    r: &[T],
    u: &[T],
    v: &[T],
    guard: T,
) -> Result<TwoColumnFit<T>> {
    if r.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dot = |x: &[T], y: &[T]| {
        x.iter().zip(y).fold(T::zero(), |acc, (a, b)| acc + *a * *b)
    };
    let uu = dot(u, u);
    let vv = dot(v, v);
    let uv = dot(u, v);
    let ur = dot(u, r);
    let vr = dot(v, r);
    if uu == T::zero() {
        return Err(Error::EmptyInput);
    }
    if vv <= guard * uu.max(T::one()) {
        // v column absent: minimize over lambda alone
        return Ok(TwoColumnFit {
            lambda: -ur / uu,
            mu: None,
            condition: T::infinity(),
        });
    }
    let det = uu * vv - uv * uv;
    if det.abs() <= guard * uu * vv {
        return Ok(TwoColumnFit {
            lambda: -ur / uu,
            mu: None,
            condition: T::infinity(),
        });
    }
    let lambda = (-ur * vv + vr * uv) / det;
    let mu = (-vr * uu + ur * uv) / det;
    // eigenvalues of [[uu, uv], [uv, vv]]
    let tr = uu + vv;
    let disc = ((uu - vv) * (uu - vv) + T::from_f64_lossy(4.0) * uv * uv).sqrt();
    let lo = (tr - disc) / T::from_f64_lossy(2.0);
    let hi = (tr + disc) / T::from_f64_lossy(2.0);
    let condition = if lo > T::zero() { hi / lo } else { T::infinity() };
    Ok(TwoColumnFit { lambda, mu: Some(mu), condition })
}

/// Max absolute entry of any nested array.
pub fn max_abs<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    values.into_iter().fold(T::zero(), |m, v| m.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Order;

    fn jmat(vals: &[&[f64]]) -> Vec<Vec<Jet<f64>>> {
        vals.iter()
            .map(|row| {
                row.iter()
                    .map(|&v| Jet::constant(v, 1, Order::Zero))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn invert_constant_matrix() {
        let m = jmat(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let (inv, det) = invert_jet_matrix(&m).unwrap();
        assert!((det - 1.0).abs() < 1e-15);
        assert!((inv[0][0].value() - 1.0).abs() < 1e-14);
        assert!((inv[0][1].value() + 1.0).abs() < 1e-14);
        assert!((inv[1][0].value() + 1.0).abs() < 1e-14);
        assert!((inv[1][1].value() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_derivative_matches_analytic() {
        // g = [[x, 0], [0, 1]]; g^{-1} = [[1/x, 0], [0, 1]]; d/dx(1/x) = -1/x^2
        let x = Jet::variable(2.0f64, 0, 2, Order::Two);
        let one = Jet::constant(1.0, 2, Order::Two);
        let zero = Jet::constant(0.0, 2, Order::Two);
        let m = vec![vec![x, zero.clone()], vec![zero, one]];
        let (inv, det) = invert_jet_matrix(&m).unwrap();
        assert!((det - 2.0).abs() < 1e-15);
        assert!((inv[0][0].value() - 0.5).abs() < 1e-15);
        assert!((inv[0][0].d1(0) + 0.25).abs() < 1e-15);
        assert!((inv[0][0].d2(0, 0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_reports_zero_det() {
        let m = jmat(&[&[0.0, 0.0], &[0.0, 0.0]]);
        let (_, det) = invert_jet_matrix(&m).unwrap();
        assert_eq!(det, 0.0);
    }

    #[test]
    fn jacobi_eigenvalues_diag_plus_rotation() {
        let m: Vec<Vec<f64>> = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let e = symmetric_eigenvalues(&m);
        assert!((e[0] - 1.0).abs() < 1e-12);
        assert!((e[1] - 3.0).abs() < 1e-12);
        // Lorentzian diag
        let m: Vec<Vec<f64>> = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, -1.0],
        ];
        let e = symmetric_eigenvalues(&m);
        assert!((e[0] + 1.0).abs() < 1e-12);
        assert!((e[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_column_fit_recovers_exact_solution() {
        // r = -(3u + 5v) => lambda = 3, mu = 5
        let u: Vec<f64> = vec![1.0, 0.0, 2.0, 1.0];
        let v = vec![0.0, 1.0, 1.0, -1.0];
        let r: Vec<f64> = u.iter().zip(&v).map(|(a, b)| -(3.0 * a + 5.0 * b)).collect();
        let fit = least_squares_two_columns(&r, &u, &v, 1e-12).unwrap();
        assert!((fit.lambda - 3.0).abs() < 1e-12);
        assert!((fit.mu.unwrap() - 5.0).abs() < 1e-12);
        assert!(fit.condition.is_finite());
    }

    #[test]
    fn two_column_fit_undetermined_mu() {
        let u: Vec<f64> = vec![2.0, 2.0];
        let v = vec![0.0, 0.0];
        let r = vec![-2.0, -2.0];
        let fit = least_squares_two_columns(&r, &u, &v, 1e-12).unwrap();
        assert!((fit.lambda - 1.0).abs() < 1e-14);
        assert!(fit.mu.is_none());
    }
}

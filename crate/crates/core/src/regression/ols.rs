use serde::{Deserialize, Serialize};

use crate::regression::{student_t_two_sided, RegressionError};
use crate::scalar::Scalar;

/// Dense row-major design matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DesignMatrix<T> {
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self, RegressionError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(RegressionError::Shape(format!(
                    "row {i} has {} columns, expected {cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    /// Copy keeping only the listed columns, in that order.
    pub fn select_columns(&self, keep: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * keep.len());
        for r in 0..self.rows {
            data.extend(keep.iter().map(|&c| self.get(r, c)));
        }
        Self { rows: self.rows, cols: keep.len(), data }
    }
}

/// Least-squares fit with coefficient significance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel<T> {
    pub coefficients: Vec<T>,
    /// `None` when the design is rank deficient or has no residual degrees of freedom.
    pub standard_errors: Option<Vec<T>>,
    pub p_values: Option<Vec<T>>,
    /// Residual sum of squares over `n - rank`; zero when `n <= rank`.
    pub residual_variance: T,
    pub residual_sum_squares: T,
    pub n_samples: usize,
    pub rank: usize,
}

impl<T: Scalar> FittedModel<T> {
    pub fn is_rank_deficient(&self) -> bool {
        self.rank < self.coefficients.len()
    }

    pub fn predict(&self, x: &[T]) -> Result<T, RegressionError> {
        ols_predict(self, x)
    }
}

/// Dot product of the coefficients with a feature vector.
pub fn ols_predict<T: Scalar>(model: &FittedModel<T>, x: &[T]) -> Result<T, RegressionError> {
    if x.len() != model.coefficients.len() {
        return Err(RegressionError::Shape(format!(
            "feature vector has {} entries, model has {} coefficients",
            x.len(),
            model.coefficients.len()
        )));
    }
    Ok(model.coefficients.iter().zip(x).map(|(&c, &v)| c * v).sum())
}

/// Householder reflector stored as `(v, beta)` acting on rows `k..`.
struct Reflector<T> {
    k: usize,
    v: Vec<T>,
    beta: T,
}

impl<T: Scalar> Reflector<T> {
    /// Builds the reflector mapping `x` onto a multiple of e1; returns it and that multiple.
    fn new(k: usize, x: &[T]) -> (Option<Self>, T) {
        let norm = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        if norm == T::zero() {
            return (None, T::zero());
        }
        let alpha = if x[0] >= T::zero() { -norm } else { norm };
        let mut v = x.to_vec();
        v[0] -= alpha;
        let vv: T = v.iter().map(|&e| e * e).sum();
        if vv == T::zero() {
            return (None, alpha);
        }
        (Some(Self { k, v, beta: T::lit(2.0) / vv }), alpha)
    }

    fn apply(&self, col: &mut [T]) {
        let seg = &mut col[self.k..self.k + self.v.len()];
        let dot: T = self.v.iter().zip(seg.iter()).map(|(&a, &b)| a * b).sum();
        let scale = self.beta * dot;
        for (s, &v) in seg.iter_mut().zip(&self.v) {
            *s -= scale * v;
        }
    }
}

/// Ordinary least squares via column-pivoted Householder QR.
///
/// Rank-deficient designs get the minimum-norm solution from a complete
/// orthogonal decomposition; their p-values are left unavailable.
pub fn ols_fit<T: Scalar>(x: &DesignMatrix<T>, y: &[T]) -> Result<FittedModel<T>, RegressionError> {
    let (n, p) = (x.nrows(), x.ncols());
    if n == 0 {
        return Err(RegressionError::EmptyData);
    }
    if p == 0 {
        return Err(RegressionError::Shape("design matrix has no columns".into()));
    }
    if y.len() != n {
        return Err(RegressionError::Shape(format!("{n} rows but {} responses", y.len())));
    }
    for r in 0..n {
        for c in 0..p {
            if !x.get(r, c).is_finite() {
                return Err(RegressionError::NonFinite(format!("design entry ({r}, {c})")));
            }
        }
        if !y[r].is_finite() {
            return Err(RegressionError::NonFinite(format!("response {r}")));
        }
    }

    // column-major working copy
    let mut cols: Vec<Vec<T>> = (0..p).map(|c| (0..n).map(|r| x.get(r, c)).collect()).collect();
    let mut perm: Vec<usize> = (0..p).collect();
    let mut qty = y.to_vec();
    let mut diag = vec![T::zero(); p];
    let steps = n.min(p);

    for k in 0..steps {
        let (best, _) = (k..p)
            .map(|j| (j, cols[j][k..].iter().map(|&v| v * v).sum::<T>()))
            .fold((k, -T::one()), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        cols.swap(k, best);
        perm.swap(k, best);

        let (reflector, alpha) = Reflector::new(k, &cols[k][k..]);
        if let Some(h) = reflector {
            for col in cols.iter_mut().skip(k + 1) {
                h.apply(col);
            }
            h.apply(&mut qty);
        }
        cols[k][k] = alpha;
        for v in cols[k][k + 1..].iter_mut() {
            *v = T::zero();
        }
        diag[k] = alpha;
    }

    let scale = diag.first().map_or(T::zero(), |d| d.abs());
    let tol = T::from_usize_lossy(n.max(p)) * T::epsilon() * scale;
    let rank = diag[..steps].iter().take_while(|d| d.abs() > tol).count();
    // r(i, j) of the upper-trapezoidal factor, in pivoted column order
    let r_at = |i: usize, j: usize| cols[j][i];

    let mut z = vec![T::zero(); p];
    if rank == p {
        for i in (0..p).rev() {
            let mut acc = qty[i];
            for j in i + 1..p {
                acc -= r_at(i, j) * z[j];
            }
            z[i] = acc / r_at(i, i);
        }
    } else if rank > 0 {
        // [R11 R12]^T = W = Z [L; 0]; solve L^T w = c, z = Z [w; 0]
        let mut w_cols: Vec<Vec<T>> = (0..rank).map(|i| (0..p).map(|j| r_at(i, j)).collect()).collect();
        let mut reflectors = Vec::with_capacity(rank);
        for k in 0..rank {
            let (reflector, alpha) = Reflector::new(k, &w_cols[k][k..]);
            if let Some(h) = reflector {
                for col in w_cols.iter_mut().skip(k + 1) {
                    h.apply(col);
                }
                reflectors.push(h);
            }
            w_cols[k][k] = alpha;
        }
        // L^T is lower triangular with L^T(i, j) = L(j, i) = w_cols[i][j]
        let mut w = vec![T::zero(); p];
        for i in 0..rank {
            let mut acc = qty[i];
            for j in 0..i {
                acc -= w_cols[i][j] * w[j];
            }
            w[i] = acc / w_cols[i][i];
        }
        for h in reflectors.iter().rev() {
            h.apply(&mut w);
        }
        z = w;
    }

    let mut coefficients = vec![T::zero(); p];
    for (j, &orig) in perm.iter().enumerate() {
        coefficients[orig] = z[j];
    }

    let rss: T = (0..n)
        .map(|r| {
            let fit: T = x.row(r).iter().zip(&coefficients).map(|(&a, &b)| a * b).sum();
            let e = y[r] - fit;
            e * e
        })
        .sum();
    let dof = n.saturating_sub(rank);
    let residual_variance =
        if dof > 0 { rss / T::from_usize_lossy(dof) } else { T::zero() };

    let (standard_errors, p_values) = if rank == p && n > p {
        // diag((R^T R)^-1) from the rows of R^-1
        let mut rinv = vec![vec![T::zero(); p]; p];
        for j in 0..p {
            rinv[j][j] = T::one() / r_at(j, j);
            for i in (0..j).rev() {
                let mut acc = T::zero();
                for k in i + 1..=j {
                    acc += r_at(i, k) * rinv[k][j];
                }
                rinv[i][j] = -acc / r_at(i, i);
            }
        }
        let mut se = vec![T::zero(); p];
        let mut pv = vec![T::zero(); p];
        let dof_t = T::from_usize_lossy(dof);
        for (j, &orig) in perm.iter().enumerate() {
            let var: T = rinv[j].iter().map(|&v| v * v).sum::<T>() * residual_variance;
            let s = var.sqrt();
            se[orig] = s;
            pv[orig] = if s > T::zero() {
                student_t_two_sided(coefficients[orig] / s, dof_t)
            } else if coefficients[orig] == T::zero() {
                T::one()
            } else {
                T::zero()
            };
        }
        (Some(se), Some(pv))
    } else {
        (None, None)
    };

    Ok(FittedModel {
        coefficients,
        standard_errors,
        p_values,
        residual_variance,
        residual_sum_squares: rss,
        n_samples: n,
        rank,
    })
}

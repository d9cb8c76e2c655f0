use crate::regression::{ols_fit, DesignMatrix, Feature, FeatureSpec, FittedModel, RegressionError};
use crate::scalar::Scalar;

/// Result of backward elimination: the surviving features and their final fit.
#[derive(Debug, Clone, PartialEq)]
pub struct Elimination<T> {
    pub spec: FeatureSpec,
    pub model: FittedModel<T>,
    /// Removed features, in removal order.
    pub removed: Vec<Feature>,
    pub refits: usize,
}

/// Drops the least significant non-intercept feature, one per refit, until
/// every remaining feature has `p < alpha`.
///
/// `x` columns must follow `spec` (intercept first when present).
pub fn backward_eliminate<T: Scalar>(
    x: &DesignMatrix<T>,
    y: &[T],
    spec: &FeatureSpec,
    alpha: T,
) -> Result<Elimination<T>, RegressionError> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(RegressionError::Shape(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if x.ncols() != spec.width() {
        return Err(RegressionError::Shape(format!(
            "design has {} columns, spec has {}",
            x.ncols(),
            spec.width()
        )));
    }
    let offset = usize::from(spec.includes_intercept);
    let mut current = spec.clone();
    let mut columns: Vec<usize> = (0..x.ncols()).collect();
    let mut removed = Vec::new();
    let mut refits = 0;
    loop {
        let model = ols_fit(&x.select_columns(&columns), y)?;
        let p_values = model.p_values.as_ref().ok_or(RegressionError::PValuesUnavailable)?;
        let worst = p_values[offset..]
            .iter()
            .enumerate()
            .fold(None::<(usize, T)>, |acc, (i, &p)| match acc {
                Some((_, best)) if best >= p => acc,
                _ => Some((i, p)),
            });
        match worst {
            Some((i, p)) if p >= alpha => {
                let feature = current.names[i];
                current = current.without(feature);
                columns.remove(offset + i);
                removed.push(feature);
                refits += 1;
            }
            _ => return Ok(Elimination { spec: current, model, removed, refits }),
        }
    }
}

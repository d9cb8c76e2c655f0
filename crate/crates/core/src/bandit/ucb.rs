use crate::scalar::Scalar;

/// UCB1 upper confidence score: `mean + c * sqrt(ln(n_total) / n_arm)`.
///
/// `n_arm` must be at least one; unpulled arms are force-selected by the
/// strategy instead of scored.
pub fn ucb1_score<T: Scalar>(mean: T, n_arm: u64, n_total: u64, c: T) -> T {
    debug_assert!(n_arm >= 1 && n_total >= 1);
    let n_arm = T::from_u64(n_arm).unwrap_or_else(T::max_value);
    let n_total = T::from_u64(n_total).unwrap_or_else(T::max_value);
    mean + c * (n_total.ln() / n_arm).sqrt()
}

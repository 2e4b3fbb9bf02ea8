//! Order-fixed reductions.

/// Pairwise (cascade) summation with a fixed split pattern.
///
/// The result depends only on the slice contents and order, never on how the
/// values were produced, so parallel producers give bit-identical totals.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values.iter().fold(0.0, |a, &b| a + b);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

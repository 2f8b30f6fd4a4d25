use std::ops::Add;

/// Pairwise (tree) summation in slice order.
///
/// The result depends only on the order of `terms`, never on how the terms were
/// produced, so parallel evaluation followed by this reduction is reproducible.
pub fn pairwise_sum<T: Copy + Default + Add<Output = T>>(terms: &[T]) -> T {
    const LEAF: usize = 16;
    if terms.len() <= LEAF {
        return terms.iter().fold(T::default(), |acc, &t| acc + t);
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
}

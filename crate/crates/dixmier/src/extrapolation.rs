//! Richardson extrapolation on a geometric step sequence.

use crate::scalar::Real;

/// Extrapolated limit with the table that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Extrapolated<T> {
    pub value: T,
    /// |last − previous| at the requested order.
    pub error: T,
    /// False when the trailing increments stop shrinking.
    pub converged: bool,
    /// Column `order` of the table, one entry per usable sample.
    pub column: Vec<T>,
}

/// Extrapolates samples v_j = v(h_j) with h_j = h_0·2^{-j} to h → 0,
/// eliminating the h, h², …, h^order terms.
pub fn richardson_halving<T: Real>(samples: &[T], order: usize) -> Extrapolated<T> {
    assert!(samples.len() > order, "need more samples than the order");
    let mut col = samples.to_vec();
    let two = T::lit(2.0);
    for i in 1..=order {
        let f = two.powi(i as i32);
        col = col
            .windows(2)
            .map(|w| w[1] + (w[1] - w[0]) / (f - T::one()))
            .collect();
    }
    let value = *col.last().unwrap();
    let incs: Vec<T> = col.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let (error, converged) = match incs.len() {
        0 => (T::infinity(), false),
        1 => (incs[0], true),
        k => {
            let last = incs[k - 1];
            let prev = incs[k - 2];
            // a table is contracting when increments shrink, or already sit at roundoff
            let floor = T::epsilon() * T::lit(1e3) * value.abs().max(T::one());
            (last, last < prev || last <= floor)
        }
    };
    Extrapolated {
        value,
        error,
        converged,
        column: col,
    }
}

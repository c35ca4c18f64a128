//! Sequence-space machinery: shift and dilation maps, the logarithmic
//! averaging chain, γ-sequences, limit brackets and weak-ideal seminorms.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::compensated_prefix_sums;

/// Where the entries of a sequence came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ExactFormula,
    Computed,
}

/// Finite prefix a_1…a_K of a bounded sequence. `values[0]` is a_1.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedSequence<T> {
    pub values: Vec<T>,
    pub provenance: Provenance,
}

impl<T: Real> BoundedSequence<T> {
    pub fn new(values: Vec<T>, provenance: Provenance) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid("sequence needs at least one entry".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("sequence entries must be finite".into()));
        }
        Ok(Self { values, provenance })
    }

    pub fn computed(values: Vec<T>) -> Result<Self> {
        Self::new(values, Provenance::Computed)
    }

    pub fn from_fn<F: FnMut(usize) -> T>(len: usize, f: F) -> Result<Self> {
        Self::new((1..=len).map(f).collect(), Provenance::ExactFormula)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// a_k with 1-based k.
    pub fn at(&self, k: usize) -> T {
        self.values[k - 1]
    }
}

/// T_j: a_k ↦ a_{k+j}.
pub fn shift<T: Real>(a: &BoundedSequence<T>, j: usize) -> Result<BoundedSequence<T>> {
    if j == 0 {
        return Err(Error::Invalid("shift needs j ≥ 1".into()));
    }
    if j >= a.len() {
        return Err(Error::EmptyResult(format!(
            "shift by {j} of a length-{} prefix",
            a.len()
        )));
    }
    Ok(BoundedSequence {
        values: a.values[j..].to_vec(),
        provenance: a.provenance,
    })
}

/// D_j: entry k is a_{⌈k/j⌉}; the output has length j·K.
pub fn dilate<T: Real>(a: &BoundedSequence<T>, j: usize) -> Result<BoundedSequence<T>> {
    if j == 0 {
        return Err(Error::Invalid("dilation needs j ≥ 1".into()));
    }
    let values = a
        .values
        .iter()
        .flat_map(|&v| std::iter::repeat_n(v, j))
        .collect();
    Ok(BoundedSequence {
        values,
        provenance: a.provenance,
    })
}

/// Log-overlap weights of output index k: w_{k,j} = |[k−1,k] ∩ [ln j, ln(j+1))|
/// for the j that overlap, as (first j, weights). Each weight is a difference
/// of the clamped logarithm, so the weights telescope to exactly k − (k−1).
pub fn averaging_weights<T: Real>(k: usize) -> (usize, Vec<T>) {
    let lo = T::of(k - 1);
    let hi = T::of(k);
    let clamp = |x: usize| T::of(x).ln().max(lo).min(hi);
    // e^{k−1} ∈ [j0, j0+1)
    let mut j0 = lo.exp().floor().to_usize().unwrap_or(1).max(1);
    while T::of(j0 + 1).ln() <= lo {
        j0 += 1;
    }
    while j0 > 1 && T::of(j0).ln() > lo {
        j0 -= 1;
    }
    let mut w = Vec::new();
    let mut j = j0;
    loop {
        let a = clamp(j);
        let b = clamp(j + 1);
        w.push(b - a);
        if b >= hi {
            break;
        }
        j += 1;
    }
    (j0, w)
}

/// ℒ-chain E∘L⁻¹∘p: b_k = ∫_{k−1}^{k} p(a)(e^t) dt = Σ_j w_{k,j} a_j, for every k
/// whose overlaps stay inside the prefix (k ≤ ⌊ln(K+1)⌋).
pub fn averaging_chain<T: Real>(a: &BoundedSequence<T>) -> Result<BoundedSequence<T>> {
    let kmax = T::of(a.len() + 1).ln().floor().to_usize().unwrap_or(0);
    if kmax == 0 {
        return Err(Error::EmptyResult(format!(
            "averaging chain needs at least 2 entries, got {}",
            a.len()
        )));
    }
    let values = (1..=kmax)
        .map(|k| {
            let (j0, w) = averaging_weights::<T>(k);
            w.iter()
                .enumerate()
                .map(|(i, &wi)| wi * a.at(j0 + i))
                .fold(T::zero(), |s, x| s + x)
        })
        .collect();
    Ok(BoundedSequence {
        values,
        provenance: Provenance::Computed,
    })
}

/// Running Cesàro means (a_1 + … + a_k)/k.
pub fn cesaro_means<T: Real>(a: &BoundedSequence<T>) -> BoundedSequence<T> {
    let sums = compensated_prefix_sums(&a.values);
    BoundedSequence {
        values: sums
            .iter()
            .enumerate()
            .map(|(i, &s)| s / T::of(i + 1))
            .collect(),
        provenance: Provenance::Computed,
    }
}

/// γ_k = (μ_1 + … + μ_k)/ln(1+k), k = 1…K.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaSequence<T> {
    pub gamma: Vec<T>,
    pub partial_sums: Vec<T>,
}

impl<T: Real> GammaSequence<T> {
    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn as_sequence(&self) -> BoundedSequence<T> {
        BoundedSequence {
            values: self.gamma.clone(),
            provenance: Provenance::Computed,
        }
    }
}

fn validate_spectrum<T: Real>(mu: &[T]) -> Result<()> {
    if mu.is_empty() {
        return Err(Error::Invalid("empty singular-value list".into()));
    }
    if mu.iter().any(|m| !(*m >= T::zero()) || !m.is_finite()) {
        return Err(Error::Invalid(
            "singular values must be finite and nonnegative".into(),
        ));
    }
    if let Some(i) = mu.windows(2).position(|w| w[1] > w[0]) {
        return Err(Error::Invalid(format!(
            "singular values not nonincreasing at position {}",
            i + 1
        )));
    }
    Ok(())
}

pub fn gamma_sequence<T: Real>(mu: &[T]) -> Result<GammaSequence<T>> {
    validate_spectrum(mu)?;
    let partial_sums = compensated_prefix_sums(mu);
    let gamma = partial_sums
        .iter()
        .enumerate()
        .map(|(i, &s)| s / T::of(i + 2).ln())
        .collect();
    Ok(GammaSequence {
        gamma,
        partial_sums,
    })
}

/// Windowed (liminf, limsup) estimate. `window` holds 1-based inclusive indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitBracket<T> {
    pub lower: T,
    pub upper: T,
    pub window: (usize, usize),
}

impl<T: Real> LimitBracket<T> {
    pub fn contains(&self, x: T) -> bool {
        self.contains_within(x, T::zero())
    }

    /// x ∈ [lower − tol, upper + tol].
    pub fn contains_within(&self, x: T, tol: T) -> bool {
        self.lower - tol <= x && x <= self.upper + tol
    }

    pub fn midpoint(&self) -> T {
        (self.lower + self.upper) / T::lit(2.0)
    }

    pub fn half_width(&self) -> T {
        (self.upper - self.lower) / T::lit(2.0)
    }

    /// Bracket of a − b for independent brackets of a and b.
    pub fn minus(&self, other: &Self) -> Self {
        Self {
            lower: self.lower - other.upper,
            upper: self.upper - other.lower,
            window: self.window,
        }
    }

    pub fn scale(&self, c: T) -> Self {
        let (a, b) = (self.lower * c, self.upper * c);
        Self {
            lower: a.min(b),
            upper: a.max(b),
            window: self.window,
        }
    }
}

pub const DEFAULT_WINDOW: f64 = 0.5;

/// Trailing-window index range (1-based, inclusive) covering the last
/// `fraction` of K entries.
pub fn trailing_window(len: usize, fraction: f64) -> Result<(usize, usize)> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Invalid(format!(
            "window fraction {fraction} outside (0, 1]"
        )));
    }
    if len == 0 {
        return Err(Error::Invalid("empty sequence".into()));
    }
    let width = ((len as f64 * fraction).ceil() as usize).clamp(1, len);
    Ok((len - width + 1, len))
}

/// Min and max over an explicit 1-based inclusive window.
pub fn window_bracket<T: Real>(a: &[T], window: (usize, usize)) -> Result<LimitBracket<T>> {
    let (lo, hi) = window;
    if lo == 0 || hi < lo || hi > a.len() {
        return Err(Error::Invalid(format!(
            "window {window:?} outside 1..={}",
            a.len()
        )));
    }
    let slice = &a[lo - 1..hi];
    let lower = slice.iter().copied().fold(T::infinity(), T::min);
    let upper = slice.iter().copied().fold(T::neg_infinity(), T::max);
    Ok(LimitBracket {
        lower,
        upper,
        window,
    })
}

pub fn limit_bracket<T: Real>(a: &BoundedSequence<T>, fraction: f64) -> Result<LimitBracket<T>> {
    window_bracket(&a.values, trailing_window(a.len(), fraction)?)
}

/// ‖T‖_{1,∞} = sup_k γ_k.
pub fn norm_one_inf<T: Real>(mu: &[T]) -> Result<T> {
    let g = gamma_sequence(mu)?;
    Ok(g.gamma.iter().copied().fold(T::zero(), T::max))
}

/// Riesz seminorm ‖T‖₀ = limsup γ_k, estimated on the default trailing window.
pub fn riesz_seminorm<T: Real>(mu: &[T]) -> Result<T> {
    let g = gamma_sequence(mu)?;
    Ok(limit_bracket(&g.as_sequence(), DEFAULT_WINDOW)?.upper)
}

/// Z₁ estimate limsup_{s↓1} (s−1)·Tr(|T|^s)^{1/s} from samples (s, Tr|T|^s):
/// the maximum over the half of the grid closest to s = 1.
pub fn z1_norm<T: Real>(trace_curve: &[(T, T)]) -> Result<T> {
    if trace_curve.is_empty() {
        return Err(Error::Invalid("empty trace curve".into()));
    }
    if trace_curve
        .iter()
        .any(|(s, tr)| !(*s > T::one()) || !(*tr >= T::zero()) || !tr.is_finite())
    {
        return Err(Error::Invalid(
            "trace curve needs s > 1 and finite nonnegative traces".into(),
        ));
    }
    let mut pts: Vec<(T, T)> = trace_curve.to_vec();
    pts.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let vals: Vec<T> = pts
        .iter()
        .map(|&(s, tr)| (s - T::one()) * tr.powf(s.recip()))
        .collect();
    let (lo, hi) = trailing_window(vals.len(), DEFAULT_WINDOW)?;
    Ok(vals[lo - 1..hi].iter().copied().fold(T::zero(), T::max))
}

/// Log-increment sequence σ_k = (S_k − S_{⌈k/r⌉}) / (ln(1+k) − ln(1+⌈k/r⌉)).
///
/// For S_k = L·ln k + b + o(1) it has the same limit L as γ_k but without the
/// O(1/ln k) offset b/ln k, which at desk-scale k is tens of percent.
/// Entry k (1-based) is defined for k ≥ r+1; earlier entries repeat the first
/// defined value so indices line up with γ.
pub fn log_increments<T: Real>(g: &GammaSequence<T>, ratio: usize) -> Result<BoundedSequence<T>> {
    if ratio < 2 {
        return Err(Error::Invalid(
            "log-increment ratio must be at least 2".into(),
        ));
    }
    let k_len = g.len();
    if k_len <= ratio {
        return Err(Error::EmptyResult(format!(
            "need more than {ratio} entries"
        )));
    }
    let s = &g.partial_sums;
    let sigma = |k: usize| {
        let j = k.div_ceil(ratio);
        (s[k - 1] - s[j - 1]) / (T::of(1 + k).ln() - T::of(1 + j).ln())
    };
    let first = sigma(ratio + 1);
    let values = (1..=k_len)
        .map(|k| if k <= ratio { first } else { sigma(k) })
        .collect();
    Ok(BoundedSequence {
        values,
        provenance: Provenance::Computed,
    })
}

/// Trailing-window mean of the averaging chain: the surrogate functional
/// value reported next to brackets.
pub fn surrogate_limit<T: Real>(a: &BoundedSequence<T>) -> Result<T> {
    let b = averaging_chain(a)?;
    let (lo, hi) = trailing_window(b.len(), DEFAULT_WINDOW)?;
    let w = &b.values[lo - 1..hi];
    Ok(w.iter().copied().fold(T::zero(), |s, x| s + x) / T::of(w.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> BoundedSequence<f64> {
        BoundedSequence::computed(v.to_vec()).unwrap()
    }

    #[test]
    fn shift_drops_leading_entries() {
        assert_eq!(
            shift(&seq(&[1.0, 2.0, 3.0, 4.0]), 1).unwrap().values,
            vec![2.0, 3.0, 4.0]
        );
        assert!(matches!(
            shift(&seq(&[1.0, 2.0]), 2),
            Err(Error::EmptyResult(_))
        ));
        assert!(shift(&seq(&[1.0, 2.0]), 0).is_err());
    }

    #[test]
    fn dilate_repeats_by_ceiling_index() {
        assert_eq!(
            dilate(&seq(&[1.0, 2.0, 3.0]), 2).unwrap().values,
            vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0]
        );
    }

    #[test]
    fn averaging_first_entry_closed_form() {
        // a_j = 1{j ≥ 2}: b_1 = 1 − ln 2
        let a = BoundedSequence::from_fn(100, |j| if j >= 2 { 1.0 } else { 0.0 }).unwrap();
        let b = averaging_chain(&a).unwrap();
        assert!((b.values[0] - (1.0 - 2f64.ln())).abs() < 1e-15);
        assert_eq!(b.len(), (101f64).ln().floor() as usize);
    }

    #[test]
    fn averaging_weights_sum_to_one() {
        for k in 1..=14 {
            let (_, w) = averaging_weights::<f64>(k);
            let s: f64 = w.iter().sum();
            assert!((s - 1.0).abs() <= 1e-15, "k={k} sum={s}");
            assert!(w.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn averaging_chain_needs_two_entries() {
        assert!(averaging_chain(&seq(&[1.0])).is_err());
        assert_eq!(
            averaging_chain(&seq(&[5.0, 5.0])).unwrap().values,
            vec![5.0]
        );
    }

    #[test]
    fn gamma_rejects_unsorted() {
        assert!(gamma_sequence(&[1.0, 2.0]).is_err());
        assert!(gamma_sequence(&[1.0, -0.5]).is_err());
    }

    #[test]
    fn norm_one_inf_of_harmonic_is_first_entry() {
        let mu: Vec<f64> = (1..=10_000).map(|n| 1.0 / n as f64).collect();
        let v = norm_one_inf(&mu).unwrap();
        assert!((v - 1.0 / 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn trace_class_has_no_riesz_part() {
        let mu: Vec<f64> = (1..=200).map(|n| 0.5f64.powi(n)).collect();
        assert!(riesz_seminorm(&mu).unwrap() < 0.25);
        let g = gamma_sequence(&mu).unwrap();
        assert!(g.gamma[199] < 1.0 / 200f64.ln());
    }

    #[test]
    fn alternating_bracket() {
        let a = BoundedSequence::from_fn(100, |k| (k % 2) as f64).unwrap();
        let b = limit_bracket(&a, 0.5).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 1.0));
        assert_eq!(b.window, (51, 100));
    }

    #[test]
    fn z1_rejects_empty_grid() {
        assert!(z1_norm::<f64>(&[]).is_err());
    }

    #[test]
    fn log_increments_of_harmonic_tend_to_one() {
        let mu: Vec<f64> = (1..=100_000).map(|n| 1.0 / n as f64).collect();
        let g = gamma_sequence(&mu).unwrap();
        let s = log_increments(&g, 4).unwrap();
        assert!((s.values[99_999] - 1.0).abs() < 1e-4);
        // γ itself is still visibly off
        assert!((g.gamma[99_999] - 1.0).abs() > 0.04);
    }
}

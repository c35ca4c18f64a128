//! Fourier-basis compressions of M_f·G(Δ)^s and their spectra.

use std::sync::Once;

use faer::{Mat, Side};
use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::pairwise_sum;
use crate::spectral_lattice::{
    lap_eigenvalue, mode_indices, norm_sq, partial_zeta, SymbolFunction,
};

use super::function::FourierTable;

/// Dense-matrix caps on the compression dimension.
pub const DIM_CAP_1D: usize = 4097;
pub const DIM_CAP_2D: usize = 4225;

/// Decompositions run single-threaded: faer's parallel kernels may reorder
/// floating-point reductions with the pool size, which would make results
/// depend on the thread count.
pub(crate) fn sequential_linalg() {
    static INIT: Once = Once::new();
    INIT.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OperatorKind<T> {
    /// Entries ĥ(j−k)·G(λ_k)^s.
    Plain { s: T },
    /// Entries G(λ_j)^{s/2}·ĥ(j−k)·G(λ_k)^{s/2}.
    Symmetrized { s: T },
}

impl<T: Real> OperatorKind<T> {
    pub fn s(&self) -> T {
        match *self {
            Self::Plain { s } | Self::Symmetrized { s } => s,
        }
    }

    pub fn is_symmetrized(&self) -> bool {
        matches!(self, Self::Symmetrized { .. })
    }
}

/// Either a real or a complex dense matrix.
#[derive(Clone, Debug)]
pub enum OperatorMatrix<T: Real> {
    Real(Mat<T>),
    Complex(Mat<Complex<T>>),
}

impl<T: Real> OperatorMatrix<T> {
    pub fn dim(&self) -> usize {
        match self {
            Self::Real(m) => m.nrows(),
            Self::Complex(m) => m.nrows(),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        match self {
            Self::Real(m) => Complex::new(m[(i, j)], T::zero()),
            Self::Complex(m) => m[(i, j)],
        }
    }

    /// Σ|c_ij|², summed column by column.
    pub fn frobenius_sq(&self) -> T {
        let d = self.dim();
        let cols: Vec<T> = (0..d)
            .into_par_iter()
            .map(|j| {
                let v: Vec<T> = (0..d).map(|i| self.entry(i, j).norm_sqr()).collect();
                pairwise_sum(&v)
            })
            .collect();
        pairwise_sum(&cols)
    }

    pub fn trace(&self) -> Complex<T> {
        let d = self.dim();
        let re: Vec<T> = (0..d).map(|i| self.entry(i, i).re).collect();
        let im: Vec<T> = (0..d).map(|i| self.entry(i, i).im).collect();
        Complex::new(pairwise_sum(&re), pairwise_sum(&im))
    }
}

/// Compression of the operator to modes |m|_∞ ≤ N, in spectral rank order.
#[derive(Clone, Debug)]
pub struct CompressedOperator<T: Real> {
    pub kind: OperatorKind<T>,
    pub n: usize,
    pub cutoff: usize,
    pub modes: Vec<Vec<i64>>,
    /// G(λ_k)^s per mode.
    pub weights: Vec<T>,
    pub matrix: OperatorMatrix<T>,
    pub mean: Complex<T>,
    /// Whether ĥ(−m) = conj ĥ(m) on the table.
    pub hermitian_symbol: bool,
    /// Whether the block has no off-diagonal entries.
    pub diagonal: bool,
}

impl<T: Real> CompressedOperator<T> {
    pub fn dim(&self) -> usize {
        self.modes.len()
    }
}

pub fn dimension_cap(n: usize) -> usize {
    if n == 1 {
        DIM_CAP_1D
    } else {
        DIM_CAP_2D
    }
}

/// Assembles the compression of M_f G(Δ)^s (or its symmetrized form).
pub fn compress<T: Real>(
    table: &FourierTable<T>,
    g: &SymbolFunction<T>,
    kind: OperatorKind<T>,
    cutoff: usize,
) -> Result<CompressedOperator<T>> {
    g.validate()?;
    let s = kind.s();
    if !(s > T::zero()) {
        return Err(Error::Invalid(format!(
            "operator power s = {s} must be positive"
        )));
    }
    if table.band < 2 * cutoff {
        return Err(Error::BandTooSmall {
            band: table.band,
            required: 2 * cutoff,
        });
    }
    let n = table.n;
    if n > 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let modes = mode_indices(n, cutoff)?;
    let dim = modes.len();
    let cap = dimension_cap(n);
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let weights: Vec<T> = modes
        .iter()
        .map(|m| g.power(lap_eigenvalue(norm_sq(m)), s))
        .collect();
    let (left, right): (Vec<T>, Vec<T>) = match kind {
        OperatorKind::Plain { .. } => (vec![T::one(); dim], weights.clone()),
        OperatorKind::Symmetrized { .. } => {
            let h: Vec<T> = weights.iter().map(|w| w.sqrt()).collect();
            (h.clone(), h)
        }
    };
    let real_table = table.coeffs.iter().all(|c| c.im == T::zero());
    let diff = |j: usize, k: usize| -> Vec<i64> {
        modes[j].iter().zip(&modes[k]).map(|(a, b)| a - b).collect()
    };
    let matrix = if real_table {
        let cols: Vec<Vec<T>> = (0..dim)
            .into_par_iter()
            .map(|k| {
                (0..dim)
                    .map(|j| left[j] * table.get(&diff(j, k)).re * right[k])
                    .collect()
            })
            .collect();
        OperatorMatrix::Real(Mat::from_fn(dim, dim, |j, k| cols[k][j]))
    } else {
        let cols: Vec<Vec<Complex<T>>> = (0..dim)
            .into_par_iter()
            .map(|k| {
                (0..dim)
                    .map(|j| table.get(&diff(j, k)) * (left[j] * right[k]))
                    .collect()
            })
            .collect();
        OperatorMatrix::Complex(Mat::from_fn(dim, dim, |j, k| cols[k][j]))
    };
    Ok(CompressedOperator {
        kind,
        n,
        cutoff,
        modes,
        weights,
        matrix,
        mean: table.mean(),
        hermitian_symbol: table.is_hermitian(),
        diagonal: table.is_constant_within(2 * cutoff),
    })
}

/// Nonincreasing singular values; signed eigenvalues too when the matrix is
/// hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSpectrum<T> {
    pub values: Vec<T>,
    /// Nonincreasing eigenvalues for hermitian compressions.
    pub eigenvalues: Option<Vec<T>>,
    pub frobenius_sq: T,
}

impl<T: Real> SingularSpectrum<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Full singular spectrum of a compression, with the Frobenius consistency
/// check Σμ² = ‖C‖_F².
pub fn singular_spectrum<T: Real>(c: &CompressedOperator<T>) -> Result<SingularSpectrum<T>> {
    singular_spectrum_capped(c, dimension_cap(c.n))
}

pub fn singular_spectrum_capped<T: Real>(
    c: &CompressedOperator<T>,
    cap: usize,
) -> Result<SingularSpectrum<T>> {
    let dim = c.dim();
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    sequential_linalg();
    let frobenius_sq = c.matrix.frobenius_sq();
    let hermitian = c.kind.is_symmetrized() && c.hermitian_symbol;
    let mut eigenvalues = None;
    let mut values: Vec<T> = if c.diagonal {
        let d: Vec<T> = (0..dim).map(|i| c.matrix.entry(i, i).re).collect();
        if hermitian {
            let mut e = d.clone();
            e.sort_by(|a, b| b.partial_cmp(a).unwrap());
            eigenvalues = Some(e);
        }
        (0..dim).map(|i| c.matrix.entry(i, i).norm()).collect()
    } else if hermitian {
        let mut e = match &c.matrix {
            OperatorMatrix::Real(m) => m.self_adjoint_eigenvalues(Side::Lower),
            OperatorMatrix::Complex(m) => m.self_adjoint_eigenvalues(Side::Lower),
        }
        .map_err(|e| Error::Decomposition(format!("{e:?}")))?;
        e.reverse();
        let abs = e.iter().map(|x| x.abs()).collect();
        eigenvalues = Some(e);
        abs
    } else {
        match &c.matrix {
            OperatorMatrix::Real(m) => m.singular_values(),
            OperatorMatrix::Complex(m) => m.singular_values(),
        }
        .map_err(|e| Error::Decomposition(format!("{e:?}")))?
    };
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let sq: Vec<T> = values.iter().map(|v| *v * *v).collect();
    let sum_sq = pairwise_sum(&sq);
    let tol = if T::epsilon() < T::lit(1e-10) {
        T::lit(1e-10)
    } else {
        T::lit(1e-4)
    };
    if (sum_sq - frobenius_sq).abs() > tol * frobenius_sq.max(T::min_positive_value()) {
        return Err(Error::Decomposition(format!(
            "Σμ² = {sum_sq} disagrees with ‖C‖_F² = {frobenius_sq}"
        )));
    }
    Ok(SingularSpectrum {
        values,
        eigenvalues,
        frobenius_sq,
    })
}

/// (Σ μ_i^p)^{1/p}; p = ∞ gives μ_1.
pub fn schatten_norm<T: Real>(spec: &SingularSpectrum<T>, p: T) -> Result<T> {
    if !(p >= T::one()) {
        return Err(Error::Invalid(format!(
            "Schatten index p = {p} must be ≥ 1"
        )));
    }
    if p.is_infinite() {
        return Ok(spec.values.first().copied().unwrap_or(T::zero()));
    }
    let top = spec.values.first().copied().unwrap_or(T::zero());
    if top == T::zero() {
        return Ok(T::zero());
    }
    // scale by μ_1 so large p does not overflow
    let v: Vec<T> = spec.values.iter().map(|m| (*m / top).powf(p)).collect();
    Ok(top * pairwise_sum(&v).powf(p.recip()))
}

/// Frobenius norm of the compression.
pub fn hs_norm_matrix<T: Real>(c: &CompressedOperator<T>) -> T {
    c.matrix.frobenius_sq().sqrt()
}

/// ‖f‖₂·(Σ_{|m|≤N} G(λ_m)^{2s})^{1/2}: the Hilbert–Schmidt norm predicted by
/// the product formula on modes |m|_∞ ≤ N.
pub fn hs_norm_formula<T: Real>(
    f_l2: T,
    g: &SymbolFunction<T>,
    s: T,
    n: usize,
    cutoff: usize,
) -> Result<T> {
    Ok(f_l2 * partial_zeta(g, s + s, n, cutoff)?.sqrt())
}

/// Trace identity: Tr C = ĥ(0)·Σ_{|m|≤N} G(λ_m)^s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceIdentity<T> {
    pub lhs: Complex<T>,
    pub rhs: Complex<T>,
    /// |lhs − rhs| / max(|rhs|, 1).
    pub defect: T,
    /// max_k |C_kk/w_k − ĥ(0)|: every diagonal entry of M_f is the mean.
    pub diagonal_defect: T,
}

pub fn trace_identity_check<T: Real>(c: &CompressedOperator<T>) -> TraceIdentity<T> {
    let lhs = c.matrix.trace();
    let zeta = pairwise_sum(&c.weights);
    let rhs = c.mean * zeta;
    let defect = (lhs - rhs).norm() / rhs.norm().max(T::one());
    let diagonal_defect = (0..c.dim())
        .map(|k| (c.matrix.entry(k, k) / c.weights[k] - c.mean).norm())
        .fold(T::zero(), T::max);
    TraceIdentity {
        lhs,
        rhs,
        defect,
        diagonal_defect,
    }
}

/// Edge-effect form of the Hilbert–Schmidt product formula for a band-b
/// trigonometric polynomial in the plain compression: modes with |m| ≤ N − b
/// see every coefficient, so
/// ‖f‖₂²·Σ_{|m|≤N−b} G^{2s} ≤ ‖C‖_F² ≤ ‖f‖₂²·Σ_{|m|≤N} G^{2s}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeEffect<T> {
    pub hs_sq: T,
    pub interior: T,
    pub full: T,
    /// |‖C‖_F² − interior| / interior.
    pub relative_defect: T,
    /// Allowed defect: (full − interior)/interior.
    pub relative_allowance: T,
}

impl<T: Real> EdgeEffect<T> {
    /// Relative amount by which ‖C‖_F² leaves [interior, full].
    pub fn excess(&self) -> T {
        let out = (self.interior - self.hs_sq)
            .max(self.hs_sq - self.full)
            .max(T::zero());
        out / self.interior
    }
}

pub fn edge_effect_check<T: Real>(
    c: &CompressedOperator<T>,
    f_l2_sq: T,
    band: usize,
    g: &SymbolFunction<T>,
) -> Result<EdgeEffect<T>> {
    if let OperatorKind::Symmetrized { .. } = c.kind {
        return Err(Error::Invalid(
            "edge-effect bound is stated for the plain compression".into(),
        ));
    }
    if band > c.cutoff {
        return Err(Error::Invalid(format!(
            "band {band} exceeds cutoff {}",
            c.cutoff
        )));
    }
    let s2 = c.kind.s() + c.kind.s();
    let hs_sq = c.matrix.frobenius_sq();
    let interior = f_l2_sq * partial_zeta(g, s2, c.n, c.cutoff - band)?;
    let full = f_l2_sq * partial_zeta(g, s2, c.n, c.cutoff)?;
    Ok(EdgeEffect {
        hs_sq,
        interior,
        full,
        relative_defect: (hs_sq - interior).abs() / interior,
        relative_allowance: (full - interior) / interior,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus_operators::function::{fourier_coefficients, TorusFunction, TrigPoly};

    fn table(p: TrigPoly<f64>, band: usize) -> FourierTable<f64> {
        fourier_coefficients(&TorusFunction::TrigPoly(p), band, 0.0).unwrap()
    }

    #[test]
    fn cosine_plain_block() {
        let t = table(TrigPoly::real_1d(0.0, &[1.0], &[]), 2);
        let g = SymbolFunction::canonical(1);
        let c = compress(&t, &g, OperatorKind::Plain { s: 1.0 }, 1).unwrap();
        // modes are [0, −1, 1]
        let w1 = (1.0 + 4.0 * std::f64::consts::PI.powi(2)).powf(-0.5);
        assert_eq!(c.matrix.entry(1, 0).re, 0.5);
        assert!((c.matrix.entry(0, 1).re - 0.5 * w1).abs() < 1e-16);
        assert_eq!(c.matrix.entry(1, 2).re, 0.0);
        assert_eq!(c.matrix.entry(0, 0).re, 0.0);
    }

    #[test]
    fn band_guard() {
        let t = table(TrigPoly::constant(1, 1.0), 3);
        let g = SymbolFunction::canonical(1);
        assert!(matches!(
            compress(&t, &g, OperatorKind::Plain { s: 1.0 }, 2),
            Err(Error::BandTooSmall {
                band: 3,
                required: 4
            })
        ));
    }

    #[test]
    fn cap_refusal() {
        let t = table(TrigPoly::constant(1, 1.0), 4200);
        let g = SymbolFunction::canonical(1);
        let c = compress(&t, &g, OperatorKind::Plain { s: 1.0 }, 2049);
        assert!(matches!(
            c,
            Err(Error::DimensionCap {
                dim: 4099,
                cap: 4097
            })
        ));
    }

    #[test]
    fn complex_symbol_assembles_complex_matrix() {
        let mut coeffs = std::collections::BTreeMap::new();
        coeffs.insert(vec![1], Complex::new(1.0, 0.0));
        let t = table(TrigPoly::new(1, coeffs).unwrap(), 8);
        assert!(!t.is_hermitian());
        let g = SymbolFunction::canonical(1);
        let c = compress(&t, &g, OperatorKind::Plain { s: 1.0 }, 4).unwrap();
        let spec = singular_spectrum(&c).unwrap();
        assert!(spec.eigenvalues.is_none());
        assert_eq!(spec.len(), 9);
    }

    #[test]
    fn schatten_infinity_is_top() {
        let spec = SingularSpectrum {
            values: vec![3.0, 2.0, 1.0f64],
            eigenvalues: None,
            frobenius_sq: 14.0,
        };
        assert_eq!(schatten_norm(&spec, f64::INFINITY).unwrap(), 3.0);
        assert!((schatten_norm(&spec, 2.0).unwrap() - 14f64.sqrt()).abs() < 1e-15);
        assert!((schatten_norm(&spec, 1.0).unwrap() - 6.0).abs() < 1e-15);
        assert!(schatten_norm(&spec, 0.5).is_err());
    }
}

//! Schatten-norm bounds for compressions against norms of f and G.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sequence_limits::z1_norm;
use crate::spectral_lattice::{partial_zeta, zeta_sum, SymbolFunction};

use super::compress::{schatten_norm, OperatorKind, SingularSpectrum};

/// lhs ≤ rhs at Schatten index p.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck<T> {
    pub p: T,
    pub lhs: T,
    pub rhs: T,
}

impl<T: Real> BoundCheck<T> {
    /// (lhs − rhs)/rhs; ≤ 0 when the bound holds.
    pub fn relative_excess(&self) -> T {
        (self.lhs - self.rhs) / self.rhs
    }
}

/// ‖C‖_p against norm·‖G_N^{s₀}‖_p where G_N is G restricted to the modes of
/// the compression and s₀ the operator power of C.
///
/// With norm = ‖f‖₂ and the plain kind this is the Hölder route
/// ‖M_f G‖_p ≤ ‖G‖_p^{1−p/2}‖f‖_{2,μ_p}, since ‖f‖_{2,μ_p} = ζ(p)^{1/2}‖f‖₂ on
/// the torus. With norm = ‖f‖_{1+ε} and the symmetrized kind it is the
/// L^{1+ε} estimate, valid for 1 < p < 1 + ε.
pub fn schatten_bound_curve<T: Real>(
    spec: &SingularSpectrum<T>,
    kind: OperatorKind<T>,
    norm: T,
    g: &SymbolFunction<T>,
    n: usize,
    cutoff: usize,
    ps: &[T],
) -> Result<Vec<BoundCheck<T>>> {
    ps.iter()
        .map(|&p| {
            let lhs = schatten_norm(spec, p)?;
            let rhs = norm * partial_zeta(g, kind.s() * p, n, cutoff)?.powf(p.recip());
            Ok(BoundCheck { p, lhs, rhs })
        })
        .collect()
}

/// Points s = 1 + 2^{-j}, j ≥ j_min, that a compression of dimension d can
/// resolve: (s − 1)·ln d ≥ 1, so the truncated trace still carries the pole.
pub fn reliable_s_grid<T: Real>(j_min: u32, dim: usize, s_max: Option<T>) -> Vec<T> {
    let ln_d = (dim.max(2) as f64).ln();
    (j_min..40)
        .take_while(|&j| 2f64.powi(-(j as i32)) * ln_d >= 1.0)
        .map(|j| T::one() + T::lit(2f64.powi(-(j as i32))))
        .filter(|&s| s_max.is_none_or(|m| s < m))
        .collect()
}

/// Z₁ estimates of a compression and of G on the same s-grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Z1Comparison<T> {
    pub grid: Vec<T>,
    pub operator_z1: T,
    /// Z₁ of G from tail-corrected zeta sums (not truncated).
    pub symbol_z1: T,
    pub norm: T,
    /// operator_z1 − norm·symbol_z1, relative to the right side.
    pub relative_excess: T,
}

/// Z₁(C) ≤ norm·Z₁(G), both estimated on `grid`.
pub fn z1_comparison<T: Real>(
    spec: &SingularSpectrum<T>,
    kind: OperatorKind<T>,
    norm: T,
    g: &SymbolFunction<T>,
    n: usize,
    grid: &[T],
) -> Result<Z1Comparison<T>> {
    if grid.is_empty() {
        return Err(Error::EmptyResult("no resolvable s in the grid".into()));
    }
    let op_curve = grid
        .iter()
        .map(|&s| schatten_norm(spec, s).map(|v| (s, v.powf(s))))
        .collect::<Result<Vec<_>>>()?;
    let g_curve = grid
        .iter()
        .map(|&s| zeta_sum(g, kind.s() * s, n, 256).map(|z| (s, z.upper())))
        .collect::<Result<Vec<_>>>()?;
    let operator_z1 = z1_norm(&op_curve)?;
    let symbol_z1 = z1_norm(&g_curve)?;
    let rhs = norm * symbol_z1;
    Ok(Z1Comparison {
        grid: grid.to_vec(),
        operator_z1,
        symbol_z1,
        norm,
        relative_excess: (operator_z1 - rhs) / rhs,
    })
}

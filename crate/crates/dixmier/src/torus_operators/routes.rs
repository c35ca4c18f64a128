//! Dixmier-trace estimates for compressions: the singular-value route and
//! the zeta-residue route.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sequence_limits::{
    gamma_sequence, log_increments, trailing_window, window_bracket, LimitBracket,
};
use crate::spectral_lattice::{residue_at_one, Residue, ResidueOptions, SymbolFunction};

use super::compress::{compress, singular_spectrum, OperatorKind, SingularSpectrum};
use super::function::{FourierTable, TorusFunction};

/// Where in the spectrum the bracket is read off.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BracketOptions {
    /// Log-increment window [lo·d, hi·d] in spectral index.
    pub window_lo: f64,
    pub window_hi: f64,
    /// σ_k compares partial sums at k and ⌈k/ratio⌉.
    pub ratio: usize,
    /// Trailing fraction for the raw γ bracket.
    pub raw_window: f64,
}

impl Default for BracketOptions {
    fn default() -> Self {
        Self {
            window_lo: 1.0 / 64.0,
            window_hi: 1.0 / 8.0,
            ratio: 4,
            raw_window: 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BracketMethod<T> {
    /// f ≥ 0: singular values of the compression.
    SingularValues,
    /// Hermitian compression: positive and negative eigenvalues separately.
    HermitianSplit,
    /// Real f of either sign, plain kind: f = (f + K) − K.
    PositiveShift { shift: T },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DixmierBracket<T> {
    /// Bracket from log-increments of the singular-value partial sums.
    pub bracket: LimitBracket<T>,
    /// Trailing-window bracket of γ_k itself.
    pub raw: LimitBracket<T>,
    /// sup_k γ_k of the (positive part of the) spectrum.
    pub norm_one_inf: T,
    pub dim: usize,
    pub method: BracketMethod<T>,
}

/// Brackets for a nonincreasing nonnegative spectrum: (log-increment, raw γ, sup γ).
pub fn spectrum_brackets<T: Real>(
    mu: &[T],
    opts: &BracketOptions,
) -> Result<(LimitBracket<T>, LimitBracket<T>, T)> {
    let g = gamma_sequence(mu)?;
    let d = mu.len();
    let raw = window_bracket(&g.gamma, trailing_window(d, opts.raw_window)?)?;
    let sup = g.gamma.iter().copied().fold(T::zero(), T::max);
    let sigma = log_increments(&g, opts.ratio)?;
    let lo = ((d as f64 * opts.window_lo).ceil() as usize).max(opts.ratio + 1);
    let hi = (d as f64 * opts.window_hi).floor() as usize;
    let window = if hi >= lo { (lo, hi) } else { (lo.min(d), d) };
    let bracket = window_bracket(&sigma.values, window)?;
    Ok((bracket, raw, sup))
}

fn signed_parts<T: Real>(eig: &[T]) -> (Vec<T>, Vec<T>) {
    let d = eig.len();
    let mut pos: Vec<T> = eig.iter().copied().filter(|x| *x > T::zero()).collect();
    let mut neg: Vec<T> = eig
        .iter()
        .copied()
        .filter(|x| *x < T::zero())
        .map(|x| -x)
        .collect();
    pos.sort_by(|a, b| b.partial_cmp(a).unwrap());
    neg.sort_by(|a, b| b.partial_cmp(a).unwrap());
    pos.resize(d, T::zero());
    neg.resize(d, T::zero());
    (pos, neg)
}

fn minus<T: Real>(a: &LimitBracket<T>, b: &LimitBracket<T>) -> LimitBracket<T> {
    a.minus(b)
}

/// Dixmier bracket of the compression of f at cutoff N.
pub fn dixmier_bracket<T: Real>(
    f: &TorusFunction<T>,
    table: &FourierTable<T>,
    g: &SymbolFunction<T>,
    kind: OperatorKind<T>,
    cutoff: usize,
    opts: &BracketOptions,
) -> Result<DixmierBracket<T>> {
    let c = compress(table, g, kind, cutoff)?;
    let spec = singular_spectrum(&c)?;
    bracket_from_spectrum(f, table, g, kind, cutoff, &spec, opts)
}

/// Same as [`dixmier_bracket`] for an already computed spectrum.
pub fn bracket_from_spectrum<T: Real>(
    f: &TorusFunction<T>,
    table: &FourierTable<T>,
    g: &SymbolFunction<T>,
    kind: OperatorKind<T>,
    cutoff: usize,
    spec: &SingularSpectrum<T>,
    opts: &BracketOptions,
) -> Result<DixmierBracket<T>> {
    let dim = spec.len();
    let sign = f.is_nonnegative();
    if let Some(eig) = &spec.eigenvalues {
        if sign != Some(true) {
            let (pos, neg) = signed_parts(eig);
            let (bp, rp, sp) = spectrum_brackets(&pos, opts)?;
            let (bn, rn, _) = spectrum_brackets(&neg, opts)?;
            return Ok(DixmierBracket {
                bracket: minus(&bp, &bn),
                raw: minus(&rp, &rn),
                norm_one_inf: sp,
                dim,
                method: BracketMethod::HermitianSplit,
            });
        }
    }
    match sign {
        Some(true) => {
            let (bracket, raw, norm_one_inf) = spectrum_brackets(&spec.values, opts)?;
            Ok(DixmierBracket {
                bracket,
                raw,
                norm_one_inf,
                dim,
                method: if spec.eigenvalues.is_some() {
                    BracketMethod::HermitianSplit
                } else {
                    BracketMethod::SingularValues
                },
            })
        }
        Some(false) => {
            let shift = table.abs_sum();
            let shifted = table.shifted(shift);
            let cs = compress(&shifted, g, kind, cutoff)?;
            let ss = singular_spectrum(&cs)?;
            let (b1, r1, s1) = spectrum_brackets(&ss.values, opts)?;
            let unit = FourierTable {
                n: table.n,
                band: table.band,
                coeffs: table
                    .coeffs
                    .iter()
                    .map(|_| Complex::new(T::zero(), T::zero()))
                    .collect(),
                errors: vec![T::zero(); table.coeffs.len()],
            }
            .shifted(T::one());
            let cu = compress(&unit, g, kind, cutoff)?;
            let su = singular_spectrum(&cu)?;
            let (b0, r0, _) = spectrum_brackets(&su.values, opts)?;
            Ok(DixmierBracket {
                bracket: minus(&b1, &b0.scale(shift)),
                raw: minus(&r1, &r0.scale(shift)),
                norm_one_inf: s1,
                dim,
                method: BracketMethod::PositiveShift { shift },
            })
        }
        None => Err(Error::Invalid(
            "Dixmier bracket of a complex-valued f: bracket real and imaginary parts separately"
                .into(),
        )),
    }
}

/// ĥ(0)·Res_{s=1} ζ_G: the Dixmier trace through the zeta residue.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueRoute<T> {
    pub value: Complex<T>,
    pub error: T,
    pub mean: Complex<T>,
    pub residue: Residue<T>,
}

/// Both compression kinds have the same trace, so the residue route does not
/// depend on the kind.
pub fn residue_route<T: Real>(
    table: &FourierTable<T>,
    g: &SymbolFunction<T>,
    opts: &ResidueOptions,
) -> Result<ResidueRoute<T>> {
    let mean = table.mean();
    let residue = residue_at_one(g, table.n, opts)?;
    let zero = vec![0i64; table.n];
    let error = mean.norm() * residue.error + table.error(&zero) * residue.value.abs();
    Ok(ResidueRoute {
        value: mean * residue.value,
        error,
        mean,
        residue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus_operators::function::{fourier_coefficients, TrigPoly};

    #[test]
    fn constant_plain_bracket_brackets_one_over_pi() {
        let f = TorusFunction::TrigPoly(TrigPoly::constant(1, 1.0f64));
        let t = fourier_coefficients(&f, 4000, 0.0).unwrap();
        let g = SymbolFunction::canonical(1);
        let b = dixmier_bracket(
            &f,
            &t,
            &g,
            OperatorKind::Plain { s: 1.0 },
            2000,
            &BracketOptions::default(),
        )
        .unwrap();
        let target = std::f64::consts::FRAC_1_PI;
        assert!(
            b.bracket.contains_within(target, 0.03 * target),
            "{:?}",
            b.bracket
        );
        assert_eq!(b.method, BracketMethod::SingularValues);
    }

    #[test]
    fn sine_bracket_is_near_zero() {
        let f = TorusFunction::TrigPoly(TrigPoly::real_1d(0.0, &[], &[1.0f64]));
        let t = fourier_coefficients(&f, 400, 0.0).unwrap();
        let g = SymbolFunction::canonical(1);
        let b = dixmier_bracket(
            &f,
            &t,
            &g,
            OperatorKind::Symmetrized { s: 1.0 },
            200,
            &BracketOptions::default(),
        )
        .unwrap();
        assert_eq!(b.method, BracketMethod::HermitianSplit);
        assert!(
            b.bracket.lower.abs() < 0.05 && (b.bracket.lower + b.bracket.upper).abs() < 1e-9,
            "{:?}",
            b.bracket
        );
    }
}

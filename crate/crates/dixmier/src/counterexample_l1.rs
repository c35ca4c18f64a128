//! An integrable f on T whose symmetrized operator T_Δ^{1/2} M_f T_Δ^{1/2}
//! is not Hilbert–Schmidt, tested against dyadic shell vectors.
//!
//! f(t) = 1/(|t|·|ln|t||^{1+ε}) and h_n = 2^{n/2}·χ{2^{-n-1} ≤ |t| ≤ 2^{-n}}.
//! For T = M_{√f} T_Δ M_{√f} the diagonal elements are
//! d_n = ⟨T h_n, h_n⟩ = Σ_k λ_k |∫ √f e_k h_n|², λ_k = (1+4π²k²)^{-1/2}, and
//! Σ d_n² = ∞ forces T ∉ L².

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive, GaussRule};
use crate::scalar::Real;
use crate::special::pairwise_sum;
use crate::spectral_lattice::{lap_eigenvalue, residue_at_one, ResidueOptions, SymbolFunction};
use crate::torus_operators::function::cosine_sums;

/// Largest supported Fourier cutoff.
pub const MAX_CUTOFF: usize = 1 << 18;

/// 2^{n/2}·χ_n with χ_n the indicator of 2^{-n-1} ≤ |t| ≤ 2^{-n}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShellVector {
    pub n: u32,
}

impl ShellVector {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > 60 {
            return Err(Error::Invalid(format!("shell index {n} outside 1..=60")));
        }
        Ok(Self { n })
    }

    /// (2^{-n-1}, 2^{-n}) on the positive side.
    pub fn support<T: Real>(&self) -> (T, T) {
        let hi = T::lit(2f64.powi(-(self.n as i32)));
        (hi / T::lit(2.0), hi)
    }

    pub fn amplitude<T: Real>(&self) -> T {
        T::lit(2f64.powf(self.n as f64 / 2.0))
    }

    /// amplitude²·|support| over both sides of 0, with amplitude² = 2^n
    /// taken exactly.
    pub fn norm_sq<T: Real>(&self) -> T {
        let (lo, hi) = self.support::<T>();
        T::lit(2f64.powi(self.n as i32)) * T::lit(2.0) * (hi - lo)
    }

    /// ⟨h_n, h_m⟩; distinct shells meet only at an endpoint.
    pub fn inner<T: Real>(&self, other: &ShellVector) -> T {
        if self.n == other.n {
            self.norm_sq()
        } else {
            T::zero()
        }
    }
}

fn check_eps<T: Real>(eps: T) -> Result<()> {
    if !(eps > T::zero()) || !eps.is_finite() {
        return Err(Error::Invalid(format!("ε = {eps} must be positive")));
    }
    Ok(())
}

/// √f(t) = t^{-1/2}·(−ln t)^{-(1+ε)/2} for 0 < t < 1.
fn sqrt_f<T: Real>(eps: T, t: T) -> T {
    (t * (-t.ln()).powf(T::one() + eps)).sqrt().recip()
}

/// ∫ 2^{n/2}√f(t) e^{2πikt} dt over the shell; real because f is even.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Overlap<T> {
    pub value: T,
    pub error: T,
}

pub fn shell_overlap<T: Real>(eps: T, n: u32, k: i64) -> Result<Overlap<T>> {
    check_eps(eps)?;
    if n < 3 {
        return Err(Error::Invalid(
            "shell overlaps are defined for n ≥ 3".into(),
        ));
    }
    let shell = ShellVector::new(n)?;
    let (lo, hi) = shell.support::<T>();
    let amp = shell.amplitude::<T>();
    let w = (T::PI() + T::PI()) * T::of_i(k);
    let tol = if T::epsilon() < T::lit(1e-10) {
        T::lit(1e-12)
    } else {
        T::lit(1e-5)
    };
    let r = adaptive(
        |t: T| sqrt_f(eps, t) * (w * t).cos(),
        lo,
        hi,
        T::zero(),
        tol,
        4096,
    );
    if !r.converged {
        return Err(Error::ToleranceNotMet {
            achieved: (r.error / r.value.abs()).to_f64_lossy(),
            requested: tol.to_f64_lossy(),
        });
    }
    let two_amp = amp + amp;
    Ok(Overlap {
        value: two_amp * r.value,
        error: two_amp * r.error,
    })
}

/// d_n truncated to |k| ≤ K.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalElement<T> {
    pub n: u32,
    pub cutoff: usize,
    pub value: T,
    pub error: T,
    /// Overlaps o_k, k = 0..=K.
    pub overlaps: Vec<T>,
    /// Largest disagreement with adaptive quadrature on the control set.
    pub spot_check: T,
    /// (c₀/n^{1+ε})·Σ_{|k|≤2^{n−3}} λ_k with c₀ = ¼(ln 2)^{-(1+ε)}, when
    /// K ≥ 2^{n−3}.
    pub chain_bound: Option<T>,
}

/// λ_k = (1+4π²k²)^{-1/2}.
pub fn lambda_k<T: Real>(k: usize) -> T {
    SymbolFunction::<T>::canonical(1).eval(lap_eigenvalue((k * k) as u64))
}

/// The paper-style lower bound constant: |o_k|² ≥ c₀/n^{1+ε} for |k| ≤ 2^{n−3}.
pub fn c0<T: Real>(eps: T) -> T {
    T::lit(0.25) * T::LN_2().powf(-(T::one() + eps))
}

/// Default Fourier cutoff 2^{n−3}.
pub fn default_cutoff(n: u32) -> usize {
    1usize << n.saturating_sub(3)
}

pub fn diagonal_element<T: Real>(eps: T, n: u32, cutoff: usize) -> Result<DiagonalElement<T>> {
    check_eps(eps)?;
    if n < 3 {
        return Err(Error::Invalid(
            "diagonal elements are computed for n ≥ 3".into(),
        ));
    }
    if cutoff > MAX_CUTOFF {
        return Err(Error::Resolution {
            resolution: cutoff,
            reason: format!("Fourier cutoff above {MAX_CUTOFF}"),
        });
    }
    let shell = ShellVector::new(n)?;
    let (lo, hi) = shell.support::<T>();
    let amp = shell.amplitude::<T>();
    // ≥ 8K nodes in panels of 16; cos(2πkt) stays resolved up to k = K
    let panels = (8 * cutoff.max(1)).div_ceil(16).max(4);
    let nodes = |rule: &GaussRule<T>| {
        let (mut xs, mut ws) = (Vec::new(), Vec::new());
        for p in 0..panels {
            let a = lo + (hi - lo) * T::of(p) / T::of(panels);
            let b = lo + (hi - lo) * T::of(p + 1) / T::of(panels);
            rule.push_mapped(a, b, &mut xs, &mut ws);
        }
        let wy: Vec<T> = xs
            .iter()
            .zip(&ws)
            .map(|(&x, &w)| w * sqrt_f(eps, x))
            .collect();
        (xs, wy)
    };
    let (x16, y16) = nodes(&GaussRule::new(16));
    let (x12, y12) = nodes(&GaussRule::new(12));
    let s16 = cosine_sums(&x16, &y16, cutoff);
    let s12 = cosine_sums(&x12, &y12, cutoff);
    let two_amp = amp + amp;
    let mass = pairwise_sum(&y16);
    let round = T::epsilon() * T::lit(64.0) * mass * T::of(cutoff.max(1)).sqrt();
    let overlaps: Vec<T> = s16.iter().map(|v| two_amp * *v).collect();
    let errs: Vec<T> = s16
        .iter()
        .zip(&s12)
        .map(|(a, b)| two_amp * ((*a - *b).abs() + round))
        .collect();

    let mut control = vec![0usize, cutoff / 2, cutoff];
    control.dedup();
    let mut spot_check = T::zero();
    for &k in &control {
        let o = shell_overlap(eps, n, k as i64)?;
        spot_check = spot_check.max((o.value - overlaps[k]).abs());
    }

    let terms: Vec<T> = (0..=cutoff)
        .into_par_iter()
        .map(|k| {
            let mult = if k == 0 { T::one() } else { T::lit(2.0) };
            mult * lambda_k::<T>(k) * overlaps[k] * overlaps[k]
        })
        .collect();
    let err_terms: Vec<T> = (0..=cutoff)
        .map(|k| {
            let mult = if k == 0 { T::one() } else { T::lit(2.0) };
            mult * lambda_k::<T>(k)
                * (T::lit(2.0) * overlaps[k].abs() * errs[k] + errs[k] * errs[k])
        })
        .collect();
    let value = pairwise_sum(&terms);
    let error = pairwise_sum(&err_terms) + spot_check * spot_check;

    let k_min = default_cutoff(n);
    let chain_bound = (cutoff >= k_min).then(|| {
        let lam: Vec<T> = (0..=k_min)
            .map(|k| {
                if k == 0 {
                    T::one()
                } else {
                    T::lit(2.0) * lambda_k::<T>(k)
                }
            })
            .collect();
        c0(eps) / T::of(n as usize).powf(T::one() + eps) * pairwise_sum(&lam)
    });

    Ok(DiagonalElement {
        n,
        cutoff,
        value,
        error,
        overlaps,
        spot_check,
        chain_bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivergenceVerdict {
    /// S_N keeps growing like ln N.
    LogGrowth,
    /// The late increments of S_N are negligible.
    Converging,
    Inconclusive,
    /// n_max too small to compare two halves of the range.
    InsufficientRange,
}

/// Partial sums S_N = Σ_{3≤n≤N} d_n² and their growth.
#[derive(Clone, Debug, PartialEq)]
pub struct HsDivergenceReport<T> {
    pub eps: T,
    pub elements: Vec<DiagonalElement<T>>,
    /// (N, S_N).
    pub partial_sums: Vec<(u32, T)>,
    /// ĉ₁ = min_{5≤n≤n_max} d_n·√n.
    pub c1: T,
    /// S_{n_max} − S_{n_max/2}.
    pub increment: T,
    /// 0.8·ĉ₁²·(H_{n_max} − H_{n_max/2}).
    pub increment_floor: T,
    /// S_N ≈ a·ln N + b on the upper half of the range, with r².
    pub fit: (T, T, T),
    /// Every n where d_n falls below its chain bound.
    pub chain_violations: Vec<u32>,
    pub verdict: DivergenceVerdict,
}

pub const C1_FROM: u32 = 5;

pub fn hs_divergence_report<T: Real>(eps: T, n_max: u32) -> Result<HsDivergenceReport<T>> {
    check_eps(eps)?;
    if !(3..=18).contains(&n_max) {
        return Err(Error::Invalid(format!("n_max = {n_max} outside 3..=18")));
    }
    let elements = (3..=n_max)
        .into_par_iter()
        .map(|n| diagonal_element(eps, n, default_cutoff(n)))
        .collect::<Result<Vec<_>>>()?;
    let mut partial_sums = Vec::with_capacity(elements.len());
    let mut acc = T::zero();
    for e in &elements {
        acc = acc + e.value * e.value;
        partial_sums.push((e.n, acc));
    }
    let s_at = |n: u32| {
        partial_sums
            .iter()
            .find(|p| p.0 == n)
            .map(|p| p.1)
            .unwrap_or(T::zero())
    };
    let c1 = elements
        .iter()
        .filter(|e| e.n >= C1_FROM)
        .map(|e| e.value * T::of(e.n as usize).sqrt())
        .fold(T::infinity(), T::min);
    let half = n_max / 2;
    let harmonic = |m: u32| {
        (1..=m)
            .map(|j| T::of(j as usize).recip())
            .fold(T::zero(), |a, b| a + b)
    };
    let increment = s_at(n_max) - s_at(half);
    let increment_floor = T::lit(0.8) * c1 * c1 * (harmonic(n_max) - harmonic(half));
    let fit_pts: Vec<(T, T)> = partial_sums
        .iter()
        .filter(|p| p.0 >= half.max(3))
        .map(|p| (T::of(p.0 as usize).ln(), p.1))
        .collect();
    let fit = least_squares(&fit_pts);
    let chain_violations = elements
        .iter()
        .filter(|e| e.chain_bound.is_some_and(|b| e.value + e.error < b))
        .map(|e| e.n)
        .collect();
    let verdict = if n_max < 8 {
        DivergenceVerdict::InsufficientRange
    } else if increment <= T::lit(0.05) * s_at(n_max) {
        // the floor test alone cannot separate the cases: for fast-decaying
        // d_n the measured ĉ₁ is tiny and the floor shrinks with it
        DivergenceVerdict::Converging
    } else if increment >= increment_floor && fit.0 > T::zero() && fit.2 >= T::lit(0.9) {
        DivergenceVerdict::LogGrowth
    } else {
        DivergenceVerdict::Inconclusive
    };
    Ok(HsDivergenceReport {
        eps,
        elements,
        partial_sums,
        c1,
        increment,
        increment_floor,
        fit,
        chain_violations,
        verdict,
    })
}

/// (slope, intercept, r²) of y on x.
fn least_squares<T: Real>(pts: &[(T, T)]) -> (T, T, T) {
    let m = T::of(pts.len());
    if pts.len() < 2 {
        return (T::zero(), pts.first().map_or(T::zero(), |p| p.1), T::zero());
    }
    let mx = pts.iter().map(|p| p.0).fold(T::zero(), |a, b| a + b) / m;
    let my = pts.iter().map(|p| p.1).fold(T::zero(), |a, b| a + b) / m;
    let sxx = pts
        .iter()
        .map(|p| (p.0 - mx) * (p.0 - mx))
        .fold(T::zero(), |a, b| a + b);
    let sxy = pts
        .iter()
        .map(|p| (p.0 - mx) * (p.1 - my))
        .fold(T::zero(), |a, b| a + b);
    let syy = pts
        .iter()
        .map(|p| (p.1 - my) * (p.1 - my))
        .fold(T::zero(), |a, b| a + b);
    let slope = sxy / sxx;
    let r2 = if syy > T::zero() {
        sxy * sxy / (sxx * syy)
    } else {
        T::one()
    };
    (slope, my - slope * mx, r2)
}

/// ĥ(0)·Res_{s=1}ζ for f = LogPower(ε): the symmetrized residue route.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContrastResidue<T> {
    pub mean: T,
    pub residue: T,
    pub value: T,
    pub error: T,
}

/// ĥ(0) = 2∫_0^{1/2} dt/(t(−ln t)^{1+ε}) = (2/ε)(ln 2)^{-ε}, times the residue
/// of ζ_{T_Δ} at 1.
pub fn contrast_residue<T: Real>(eps: T) -> Result<ContrastResidue<T>> {
    check_eps(eps)?;
    let mean = T::lit(2.0) / eps * T::LN_2().powf(-eps);
    let r = residue_at_one(&SymbolFunction::canonical(1), 1, &ResidueOptions::default())?;
    Ok(ContrastResidue {
        mean,
        residue: r.value,
        value: mean * r.value,
        error: mean * r.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shells_are_orthonormal() {
        for n in 1..20 {
            let h = ShellVector::new(n).unwrap();
            assert_eq!(h.norm_sq::<f64>(), 1.0);
            assert_eq!(h.inner::<f64>(&ShellVector::new(n + 1).unwrap()), 0.0);
        }
    }

    #[test]
    fn cosine_bound_on_small_frequencies() {
        let eps = 0.5f64;
        for n in [4u32, 7, 10] {
            let floor = c0(eps) / (n as f64).powf(1.0 + eps);
            for k in [0i64, 1, (default_cutoff(n) as i64)] {
                let o = shell_overlap(eps, n, k).unwrap();
                assert!(o.value * o.value >= floor, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn overlaps_die_out_at_high_frequency() {
        let low = shell_overlap(0.5f64, 6, 0).unwrap().value;
        let high = shell_overlap(0.5f64, 6, 1 << 14).unwrap().value;
        assert!(high.abs() < 1e-2 * low.abs());
    }

    #[test]
    fn small_shells_refused() {
        assert!(shell_overlap(0.5f64, 2, 0).is_err());
        assert!(diagonal_element(0.5f64, 5, MAX_CUTOFF + 1).is_err());
    }

    #[test]
    fn monotone_in_cutoff() {
        let a = diagonal_element(0.5f64, 8, 16).unwrap().value;
        let b = diagonal_element(0.5f64, 8, 32).unwrap().value;
        let c = diagonal_element(0.5f64, 8, 64).unwrap().value;
        assert!(a <= b && b <= c);
    }

    #[test]
    fn fast_decay_converges() {
        let r = hs_divergence_report(2.0f64, 12).unwrap();
        assert_eq!(r.verdict, DivergenceVerdict::Converging);
    }

    #[test]
    fn short_range_is_flagged() {
        let r = hs_divergence_report(0.5f64, 4).unwrap();
        assert_eq!(r.verdict, DivergenceVerdict::InsufficientRange);
    }
}

//! Functions on the torus and their Fourier tables.

use std::collections::BTreeMap;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::GaussRule;
use crate::scalar::Real;
use crate::special::pairwise_sum;

/// Finite Fourier series Σ c_m e^{2πi m·x}.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly<T> {
    pub n: usize,
    pub coeffs: BTreeMap<Vec<i64>, Complex<T>>,
}

impl<T: Real> TrigPoly<T> {
    pub fn new(n: usize, coeffs: BTreeMap<Vec<i64>, Complex<T>>) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        if coeffs.keys().any(|k| k.len() != n) {
            return Err(Error::Invalid(
                "coefficient index length differs from dimension".into(),
            ));
        }
        Ok(Self { n, coeffs })
    }

    pub fn constant(n: usize, c: T) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![0; n], Complex::new(c, T::zero()));
        Self { n, coeffs }
    }

    /// Real 1-d polynomial a_0 + Σ (a_k cos 2πkt + b_k sin 2πkt).
    pub fn real_1d(a0: T, cos: &[T], sin: &[T]) -> Self {
        let half = T::lit(0.5);
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![0], Complex::new(a0, T::zero()));
        for k in 1..=cos.len().max(sin.len()) {
            let a = cos.get(k - 1).copied().unwrap_or(T::zero());
            let b = sin.get(k - 1).copied().unwrap_or(T::zero());
            // a cos + b sin = (a − ib)/2 e^{+} + (a + ib)/2 e^{−}
            coeffs.insert(vec![k as i64], Complex::new(a * half, -b * half));
            coeffs.insert(vec![-(k as i64)], Complex::new(a * half, b * half));
        }
        Self { n: 1, coeffs }
    }

    pub fn coefficient(&self, m: &[i64]) -> Complex<T> {
        self.coeffs
            .get(m)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// max |m|_∞ over nonzero coefficients.
    pub fn band(&self) -> usize {
        self.coeffs
            .iter()
            .filter(|(_, c)| c.norm_sqr() > T::zero())
            .map(|(m, _)| {
                m.iter()
                    .map(|x| x.unsigned_abs() as usize)
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// c_{−m} = conj(c_m) for every m, i.e. the polynomial is real valued.
    pub fn is_hermitian(&self) -> bool {
        self.coeffs.iter().all(|(m, c)| {
            let neg: Vec<i64> = m.iter().map(|x| -x).collect();
            let d = self.coefficient(&neg);
            (d.re - c.re).abs() <= T::epsilon() * T::lit(16.0) * c.norm()
                && (d.im + c.im).abs() <= T::epsilon() * T::lit(16.0) * c.norm()
        })
    }

    pub fn eval(&self, x: &[T]) -> Complex<T> {
        let two_pi = T::PI() + T::PI();
        let mut acc = Complex::new(T::zero(), T::zero());
        for (m, c) in &self.coeffs {
            let phase = two_pi
                * m.iter()
                    .zip(x)
                    .fold(T::zero(), |s, (&mi, &xi)| s + T::of_i(mi) * xi);
            acc = acc + *c * Complex::new(phase.cos(), phase.sin());
        }
        acc
    }

    /// ‖f‖₂² by Parseval.
    pub fn l2_norm_sq(&self) -> T {
        let v: Vec<T> = self.coeffs.values().map(|c| c.norm_sqr()).collect();
        pairwise_sum(&v)
    }

    /// ‖f‖₄⁴ = Σ_m |(f f̄)^(m)|², exact through the coefficient convolution.
    pub fn l4_norm_pow4(&self) -> T {
        let mut conv: BTreeMap<Vec<i64>, Complex<T>> = BTreeMap::new();
        for (j, cj) in &self.coeffs {
            for (k, ck) in &self.coeffs {
                let m: Vec<i64> = j.iter().zip(k).map(|(a, b)| a - b).collect();
                let e = conv
                    .entry(m)
                    .or_insert_with(|| Complex::new(T::zero(), T::zero()));
                *e = *e + *cj * ck.conj();
            }
        }
        let v: Vec<T> = conv.values().map(|c| c.norm_sqr()).collect();
        pairwise_sum(&v)
    }

    /// Values on the uniform grid j/M in each coordinate, row-major.
    pub fn sample_grid(&self, m: usize) -> Vec<Complex<T>> {
        let total = m.pow(self.n as u32);
        (0..total)
            .into_par_iter()
            .map(|lin| {
                let mut x = vec![T::zero(); self.n];
                let mut r = lin;
                for d in (0..self.n).rev() {
                    x[d] = T::of(r % m) / T::of(m);
                    r /= m;
                }
                self.eval(&x)
            })
            .collect()
    }

    /// Certified upper bound on ‖f‖_∞ from M samples per axis:
    /// Bernstein's inequality gives |f(x) − f(x_j)| ≤ nπb‖f‖_∞/M.
    pub fn sup_norm_bound(&self) -> T {
        let b = self.band();
        if b == 0 {
            return self.coefficient(&vec![0; self.n]).norm();
        }
        let m = match self.n {
            1 => 64 * b + 64,
            _ => 16 * b + 16,
        };
        let samples = self.sample_grid(m);
        let max = samples.iter().map(|z| z.norm()).fold(T::zero(), T::max);
        let slack = T::of(self.n) * T::PI() * T::of(b) / T::of(m);
        max / (T::one() - slack)
    }
}

/// Uniform samples of a real function on [0,1)^n, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSamples<T> {
    pub n: usize,
    pub resolution: usize,
    pub samples: Vec<T>,
}

/// Symbolic description of f on T^n.
#[derive(Clone, Debug, PartialEq)]
pub enum TorusFunction<T> {
    TrigPoly(TrigPoly<T>),
    /// Even periodization of |t|^{-a} from [−1/2, 1/2], 0 < a < 1 (n = 1).
    PowerSingularity {
        a: T,
    },
    /// 1/(|t|·|ln|t||^{1+ε}) on [−1/2, 1/2] (n = 1).
    LogPower {
        eps: T,
    },
    GridSampled(GridSamples<T>),
}

impl<T: Real> TorusFunction<T> {
    pub fn dimension(&self) -> usize {
        match self {
            Self::TrigPoly(p) => p.n,
            Self::PowerSingularity { .. } | Self::LogPower { .. } => 1,
            Self::GridSampled(g) => g.n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::TrigPoly(p) => {
                TrigPoly::new(p.n, p.coeffs.clone())?;
            }
            Self::PowerSingularity { a } => {
                if !(*a > T::zero() && *a < T::one()) {
                    return Err(Error::Invalid(format!(
                        "power singularity exponent {a} outside (0, 1)"
                    )));
                }
            }
            Self::LogPower { eps } => {
                if !(*eps > T::zero()) || !eps.is_finite() {
                    return Err(Error::Invalid(format!(
                        "log-power ε = {eps} must be positive"
                    )));
                }
            }
            Self::GridSampled(g) => {
                if !(1..=2).contains(&g.n) {
                    return Err(Error::UnsupportedDimension(g.n));
                }
                if g.samples.len() != g.resolution.pow(g.n as u32) || g.resolution < 4 {
                    return Err(Error::Invalid(
                        "grid sample count does not match resolution".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Pointwise value of a 1-d singular variant at t ∈ R (periodized).
    pub fn eval_1d(&self, t: T) -> T {
        let r = t - t.round();
        let x = r.abs();
        match self {
            Self::PowerSingularity { a } => x.powf(-*a),
            Self::LogPower { eps } => (x * (-x.ln()).powf(T::one() + *eps)).recip(),
            Self::TrigPoly(p) => p.eval(&[t]).re,
            Self::GridSampled(g) => {
                let m = g.resolution;
                let j = ((r + T::one()) * T::of(m)).floor().to_usize().unwrap_or(0) % m;
                g.samples[j]
            }
        }
    }

    /// Some(true) when f ≥ 0 is certain, Some(false) when a negative value
    /// was found, None for complex-valued f.
    pub fn is_nonnegative(&self) -> Option<bool> {
        match self {
            Self::PowerSingularity { .. } | Self::LogPower { .. } => Some(true),
            Self::GridSampled(g) => Some(g.samples.iter().all(|&v| v >= T::zero())),
            Self::TrigPoly(p) => {
                if !p.is_hermitian() {
                    return None;
                }
                let zero = vec![0; p.n];
                let mean = p.coefficient(&zero).re;
                let rest: T = p
                    .coeffs
                    .iter()
                    .filter(|(m, _)| **m != zero)
                    .map(|(_, c)| c.norm())
                    .sum();
                if mean >= rest {
                    return Some(true);
                }
                let b = p.band().max(1);
                let m = if p.n == 1 { 64 * b } else { 16 * b };
                Some(p.sample_grid(m).iter().all(|z| z.re >= T::zero()))
            }
        }
    }
}

/// ĥ(m) for |m|_∞ ≤ B with per-coefficient error bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierTable<T> {
    pub n: usize,
    pub band: usize,
    /// Row-major over the box [−B, B]^n.
    pub coeffs: Vec<Complex<T>>,
    pub errors: Vec<T>,
}

impl<T: Real> FourierTable<T> {
    fn offset(&self, m: &[i64]) -> Option<usize> {
        let side = 2 * self.band as i64 + 1;
        let mut idx = 0i64;
        for &x in m {
            if x.unsigned_abs() as usize > self.band {
                return None;
            }
            idx = idx * side + x + self.band as i64;
        }
        Some(idx as usize)
    }

    pub fn get(&self, m: &[i64]) -> Complex<T> {
        self.offset(m)
            .map(|i| self.coeffs[i])
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn error(&self, m: &[i64]) -> T {
        self.offset(m).map(|i| self.errors[i]).unwrap_or(T::zero())
    }

    /// ĥ(0) = ∫ f.
    pub fn mean(&self) -> Complex<T> {
        self.get(&vec![0; self.n])
    }

    pub fn max_error(&self) -> T {
        self.errors.iter().copied().fold(T::zero(), T::max)
    }

    /// ĥ(−m) = conj ĥ(m) throughout, i.e. f is real.
    pub fn is_hermitian(&self) -> bool {
        let len = self.coeffs.len();
        (0..len).all(|i| {
            let c = self.coeffs[i];
            let d = self.coeffs[len - 1 - i];
            let tol = T::epsilon() * T::lit(64.0) * (c.norm() + d.norm())
                + self.errors[i]
                + self.errors[len - 1 - i];
            (c.re - d.re).abs() <= tol && (c.im + d.im).abs() <= tol
        })
    }

    /// True when only ĥ(0) is nonzero inside |m|_∞ ≤ r.
    pub fn is_constant_within(&self, r: usize) -> bool {
        let zero = vec![0i64; self.n];
        let side = 2 * self.band + 1;
        (0..self.coeffs.len()).all(|i| {
            let mut m = vec![0i64; self.n];
            let mut q = i;
            for d in (0..self.n).rev() {
                m[d] = (q % side) as i64 - self.band as i64;
                q /= side;
            }
            m == zero
                || m.iter().any(|x| x.unsigned_abs() as usize > r)
                || self.coeffs[i].norm_sqr() == T::zero()
        })
    }

    /// The table of f + c.
    pub fn shifted(&self, c: T) -> Self {
        let mut out = self.clone();
        let z = out.offset(&vec![0; self.n]).unwrap();
        out.coeffs[z] = out.coeffs[z] + Complex::new(c, T::zero());
        out
    }

    /// Σ_m |ĥ(m)| over the table, an upper bound on sup|f| for trig polynomials.
    pub fn abs_sum(&self) -> T {
        let v: Vec<T> = self.coeffs.iter().map(|c| c.norm()).collect();
        pairwise_sum(&v)
    }
}

/// Fourier coefficients of f up to band B; singular variants are computed by
/// dyadic Gauss–Legendre panels with an analytic remainder at t = 0, and
/// every coefficient must meet `tol`.
pub fn fourier_coefficients<T: Real>(
    f: &TorusFunction<T>,
    band: usize,
    tol: T,
) -> Result<FourierTable<T>> {
    f.validate()?;
    let n = f.dimension();
    match f {
        TorusFunction::TrigPoly(p) => {
            let side = 2 * band + 1;
            let total = side.pow(n as u32);
            let mut coeffs = vec![Complex::new(T::zero(), T::zero()); total];
            let mut table = FourierTable {
                n,
                band,
                coeffs: Vec::new(),
                errors: vec![T::zero(); total],
            };
            for (m, c) in &p.coeffs {
                if let Some(i) = table.offset(m) {
                    coeffs[i] = *c;
                }
            }
            table.coeffs = coeffs;
            Ok(table)
        }
        TorusFunction::PowerSingularity { .. } | TorusFunction::LogPower { .. } => {
            let (vals, errs) = even_singular_cosine_integrals(f, band)?;
            let achieved = errs.iter().copied().fold(T::zero(), T::max);
            if achieved > tol {
                return Err(Error::ToleranceNotMet {
                    achieved: achieved.to_f64_lossy(),
                    requested: tol.to_f64_lossy(),
                });
            }
            let side = 2 * band + 1;
            let mut coeffs = Vec::with_capacity(side);
            let mut errors = Vec::with_capacity(side);
            for i in 0..side {
                let m = (i as i64 - band as i64).unsigned_abs() as usize;
                coeffs.push(Complex::new(vals[m], T::zero()));
                errors.push(errs[m]);
            }
            Ok(FourierTable {
                n,
                band,
                coeffs,
                errors,
            })
        }
        TorusFunction::GridSampled(g) => grid_coefficients(g, band),
    }
}

/// Composite nodes for [δ, 1/2]: dyadic panels, each cut to length ≤ h_max,
/// for a primary and a check rule.
fn dyadic_nodes<T: Real>(levels: u32, h_max: T, rule: &GaussRule<T>) -> (Vec<T>, Vec<T>) {
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    let two = T::lit(2.0);
    for j in 1..levels {
        let b = two.powi(-(j as i32));
        let a = b / two;
        let pieces = ((b - a) / h_max).ceil().to_usize().unwrap_or(1).max(1);
        for p in 0..pieces {
            let lo = a + (b - a) * T::of(p) / T::of(pieces);
            let hi = a + (b - a) * T::of(p + 1) / T::of(pieces);
            rule.push_mapped(lo, hi, &mut xs, &mut ws);
        }
    }
    (xs, ws)
}

/// Σ_i w_i·y_i·cos(2π m x_i) for m = 0..=B, blocked over m with a fixed block
/// size so the result does not depend on the thread count.
pub(crate) fn cosine_sums<T: Real>(xs: &[T], wy: &[T], band: usize) -> Vec<T> {
    const BLOCK: usize = 128;
    let two_pi = T::PI() + T::PI();
    let blocks: Vec<usize> = (0..=band).step_by(BLOCK).collect();
    let parts: Vec<Vec<T>> = blocks
        .par_iter()
        .map(|&m0| {
            let m1 = (m0 + BLOCK).min(band + 1);
            let mut acc = vec![T::zero(); m1 - m0];
            for (&x, &w) in xs.iter().zip(wy) {
                let th = two_pi * x;
                let c1 = th.cos();
                let two_c1 = c1 + c1;
                let mut prev = (th * T::of(m0) - th).cos();
                let mut cur = (th * T::of(m0)).cos();
                for a in acc.iter_mut() {
                    *a = *a + w * cur;
                    let next = two_c1 * cur - prev;
                    prev = cur;
                    cur = next;
                }
            }
            acc
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// 2∫_0^{1/2} f(t) cos(2πmt) dt for m = 0..=B with error estimates.
fn even_singular_cosine_integrals<T: Real>(
    f: &TorusFunction<T>,
    band: usize,
) -> Result<(Vec<T>, Vec<T>)> {
    let levels = (((band + 1) as f64).log2().ceil() as u32) + 30;
    let delta = T::lit(2.0).powi(-(levels as i32));
    let h_max = T::lit(1.0) / T::of(2 * band + 2);
    let main = GaussRule::<T>::new(16);
    let check = GaussRule::<T>::new(12);
    let (x16, w16) = dyadic_nodes(levels, h_max, &main);
    let (x12, w12) = dyadic_nodes(levels, h_max, &check);
    let wy16: Vec<T> = x16
        .iter()
        .zip(&w16)
        .map(|(&x, &w)| w * f.eval_1d(x))
        .collect();
    let wy12: Vec<T> = x12
        .iter()
        .zip(&w12)
        .map(|(&x, &w)| w * f.eval_1d(x))
        .collect();
    let s16 = cosine_sums(&x16, &wy16, band);
    let s12 = cosine_sums(&x12, &wy12, band);
    let mass: T = pairwise_sum(&wy16.iter().map(|v| v.abs()).collect::<Vec<_>>());
    let round = T::epsilon() * T::lit(64.0) * mass * T::of(band.max(1)).sqrt();
    let two = T::lit(2.0);
    let mut vals = Vec::with_capacity(band + 1);
    let mut errs = Vec::with_capacity(band + 1);
    for m in 0..=band {
        let (rem, rem_err) = singular_remainder(f, delta, m);
        vals.push(two * s16[m] + rem);
        errs.push(two * (s16[m] - s12[m]).abs() + rem_err + two * round);
    }
    Ok((vals, errs))
}

/// 2∫_0^δ f(t) cos(2πmt) dt and its uncertainty.
fn singular_remainder<T: Real>(f: &TorusFunction<T>, delta: T, m: usize) -> (T, T) {
    let two = T::lit(2.0);
    let w = (T::PI() + T::PI()) * T::of(m);
    match f {
        TorusFunction::PowerSingularity { a } => {
            // termwise cosine series; 2πmδ ≪ 1 so it converges at once
            let mut sum = T::zero();
            let mut term_pow = delta.powf(T::one() - *a);
            let mut fact = T::one();
            let x2 = (w * delta) * (w * delta);
            for k in 0..30 {
                let kk = T::of(2 * k);
                let term = term_pow / (fact * (kk + T::one() - *a));
                let signed = if k % 2 == 0 { term } else { -term };
                sum = sum + signed;
                if term <= T::epsilon() * sum.abs() {
                    break;
                }
                term_pow = term_pow * x2;
                fact = fact * (kk + T::one()) * (kk + two);
            }
            (two * sum, T::epsilon() * two * sum.abs())
        }
        TorusFunction::LogPower { eps } => {
            let l = -delta.ln();
            let base = l.powf(-*eps) / *eps;
            // 0 ≤ ∫_0^δ f(1 − cos) ≤ π²m²δ²·l^{−1−ε}
            let corr =
                T::PI() * T::PI() * T::of(m) * T::of(m) * delta * delta * l.powf(-T::one() - *eps);
            (two * (base - corr / two), corr + T::epsilon() * two * base)
        }
        _ => (T::zero(), T::zero()),
    }
}

fn grid_coefficients<T: Real>(g: &GridSamples<T>, band: usize) -> Result<FourierTable<T>> {
    let m = g.resolution;
    if 4 * band > m {
        return Err(Error::Resolution {
            resolution: m,
            reason: format!("band {band} exceeds resolution/4"),
        });
    }
    let data = grid_dft(g);
    let side = 2 * band + 1;
    let total = side.pow(g.n as u32);
    let wrap = |k: i64| ((k % m as i64 + m as i64) % m as i64) as usize;
    // aliasing proxy: largest coefficient in the outer half of the resolvable band
    let mut alias = T::zero();
    for (i, c) in data.iter().enumerate() {
        let outer = match g.n {
            1 => {
                let k = i.min(m - i);
                k > m / 4
            }
            _ => {
                let (r, col) = (i / m, i % m);
                r.min(m - r) > m / 4 || col.min(m - col) > m / 4
            }
        };
        if outer {
            alias = alias.max(c.norm());
        }
    }
    let mut coeffs = Vec::with_capacity(total);
    for lin in 0..total {
        let mut idx = vec![0i64; g.n];
        let mut q = lin;
        for d in (0..g.n).rev() {
            idx[d] = (q % side) as i64 - band as i64;
            q /= side;
        }
        let flat = match g.n {
            1 => wrap(idx[0]),
            _ => wrap(idx[0]) * m + wrap(idx[1]),
        };
        coeffs.push(data[flat]);
    }
    Ok(FourierTable {
        n: g.n,
        band,
        coeffs,
        errors: vec![alias; total],
    })
}

/// Normalized DFT (1/M^n) Σ f(x_j) e^{−2πi k·x_j} of grid samples.
fn grid_dft<T: Real>(g: &GridSamples<T>) -> Vec<Complex<T>> {
    let m = g.resolution;
    let scale = T::one() / T::of(m.pow(g.n as u32));
    let mut buf: Vec<Complex<f64>> = g
        .samples
        .iter()
        .map(|&v| Complex::new(v.to_f64_lossy(), 0.0))
        .collect();
    let mut planner = rustfft::FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    for row in buf.chunks_mut(m) {
        fft.process(row);
    }
    if g.n == 2 {
        let mut col = vec![Complex::new(0.0, 0.0); m];
        for c in 0..m {
            for r in 0..m {
                col[r] = buf[r * m + c];
            }
            fft.process(&mut col);
            for r in 0..m {
                buf[r * m + c] = col[r];
            }
        }
    }
    buf.into_iter()
        .map(|z| Complex::new(T::lit(z.re), T::lit(z.im)) * scale)
        .collect()
}

/// L^p norm with its status.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpNorm<T> {
    pub p: T,
    /// +∞ when f ∉ L^p.
    pub value: T,
    pub error: T,
    pub exact: bool,
}

/// ∫_{2^{-ℓ} ≤ |t| ≤ 1/2} |f|^p dt for a 1-d singular variant, without any
/// analytic remainder.
pub fn truncated_power_integral<T: Real>(f: &TorusFunction<T>, p: T, level: u32) -> T {
    let rule = GaussRule::<T>::new(16);
    let two = T::lit(2.0);
    let mut parts = Vec::with_capacity(level as usize);
    for j in 1..=level {
        let b = two.powi(-(j as i32));
        let a = b / two;
        parts.push(rule.integrate(a, b, |t| f.eval_1d(t).abs().powf(p)));
    }
    two * pairwise_sum(&parts)
}

/// ‖f‖_p on the torus (probability measure).
pub fn lp_norm<T: Real>(f: &TorusFunction<T>, p: T) -> Result<LpNorm<T>> {
    f.validate()?;
    if !(p >= T::one()) {
        return Err(Error::Invalid(format!("p = {p} must be ≥ 1")));
    }
    let inf = LpNorm {
        p,
        value: T::infinity(),
        error: T::zero(),
        exact: true,
    };
    match f {
        TorusFunction::TrigPoly(poly) => {
            if p == T::lit(2.0) {
                return Ok(LpNorm {
                    p,
                    value: poly.l2_norm_sq().sqrt(),
                    error: T::zero(),
                    exact: true,
                });
            }
            if p == T::lit(4.0) {
                return Ok(LpNorm {
                    p,
                    value: poly.l4_norm_pow4().sqrt().sqrt(),
                    error: T::zero(),
                    exact: true,
                });
            }
            if p.is_infinite() {
                return Ok(LpNorm {
                    p,
                    value: poly.sup_norm_bound(),
                    error: T::zero(),
                    exact: false,
                });
            }
            let b = poly.band().max(1);
            let m = if poly.n == 1 { 256 * b } else { 32 * b };
            let s = poly.sample_grid(m);
            let v: Vec<T> = s.iter().map(|z| z.norm().powf(p)).collect();
            let mean = pairwise_sum(&v) / T::of(v.len());
            Ok(LpNorm {
                p,
                value: mean.powf(p.recip()),
                error: T::zero(),
                exact: false,
            })
        }
        TorusFunction::GridSampled(g) => {
            if p.is_infinite() {
                let v = g.samples.iter().map(|v| v.abs()).fold(T::zero(), T::max);
                return Ok(LpNorm {
                    p,
                    value: v,
                    error: T::zero(),
                    exact: false,
                });
            }
            let v: Vec<T> = g.samples.iter().map(|z| z.abs().powf(p)).collect();
            let mean = pairwise_sum(&v) / T::of(v.len());
            Ok(LpNorm {
                p,
                value: mean.powf(p.recip()),
                error: T::zero(),
                exact: false,
            })
        }
        TorusFunction::PowerSingularity { a } => {
            if p.is_infinite() || *a * p >= T::one() {
                return Ok(inf);
            }
            let level =
                60u32.min((T::min_positive_value().log2().abs().to_f64_lossy() / 2.0) as u32);
            // the panels stop at 2^{-level-1}
            let delta = T::lit(2.0).powi(-(level as i32) - 1);
            let body = truncated_power_integral(f, p, level);
            let e = T::one() - *a * p;
            let rem = T::lit(2.0) * delta.powf(e) / e;
            let total = body + rem;
            Ok(LpNorm {
                p,
                value: total.powf(p.recip()),
                error: T::epsilon() * T::lit(100.0) * total.powf(p.recip()),
                exact: false,
            })
        }
        TorusFunction::LogPower { eps } => {
            if p != T::one() {
                return Ok(inf);
            }
            let level =
                60u32.min((T::min_positive_value().log2().abs().to_f64_lossy() / 2.0) as u32);
            // the panels stop at 2^{-level-1}
            let delta = T::lit(2.0).powi(-(level as i32) - 1);
            let body = truncated_power_integral(f, p, level);
            let rem = T::lit(2.0) * (-delta.ln()).powf(-*eps) / *eps;
            Ok(LpNorm {
                p,
                value: body + rem,
                error: T::epsilon() * T::lit(100.0) * (body + rem),
                exact: false,
            })
        }
    }
}

/// Verdict of the ‖f‖₂ refinement sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum L2Verdict {
    Converged,
    Divergent,
    Undecided,
}

/// ‖f‖₂² on |t| ≥ 2^{-ℓ} for increasing ℓ.
#[derive(Clone, Debug, PartialEq)]
pub struct L2Refinement<T> {
    pub levels: Vec<u32>,
    pub values: Vec<T>,
    pub ratios: Vec<T>,
    pub verdict: L2Verdict,
}

pub const REFINEMENT_LEVELS: [u32; 5] = [16, 32, 64, 128, 256];

/// Refines ‖f‖₂² by pushing the excluded neighbourhood of the singularity
/// toward 0. Converged when the last ratio is ≤ 1.02, divergent when ≥ 1.10.
pub fn l2_refinement<T: Real>(f: &TorusFunction<T>) -> Result<L2Refinement<T>> {
    f.validate()?;
    let two = T::lit(2.0);
    let levels: Vec<u32> = match f {
        TorusFunction::PowerSingularity { .. } | TorusFunction::LogPower { .. } => {
            REFINEMENT_LEVELS
                .iter()
                .copied()
                .filter(|&l| {
                    let d = two.powi(-(l as i32));
                    d >= T::min_positive_value() && f.eval_1d(d).powi(2).is_finite()
                })
                .collect()
        }
        _ => REFINEMENT_LEVELS.to_vec(),
    };
    let values: Vec<T> = levels
        .iter()
        .map(|&l| match f {
            TorusFunction::TrigPoly(p) => p.l2_norm_sq(),
            TorusFunction::GridSampled(_) => lp_norm(f, two)
                .map(|v| v.value * v.value)
                .unwrap_or(T::nan()),
            _ => truncated_power_integral(f, two, l),
        })
        .collect();
    let ratios: Vec<T> = values.windows(2).map(|w| w[1] / w[0]).collect();
    let verdict = match ratios.last() {
        Some(&r) if r <= T::lit(1.02) => L2Verdict::Converged,
        Some(&r) if r >= T::lit(1.10) => L2Verdict::Divergent,
        _ => L2Verdict::Undecided,
    };
    Ok(L2Refinement {
        levels,
        values,
        ratios,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_coefficients_are_exact() {
        let f = TorusFunction::TrigPoly(TrigPoly::real_1d(0.0, &[1.0f64], &[]));
        let t = fourier_coefficients(&f, 3, 0.0).unwrap();
        assert_eq!(t.get(&[1]), Complex::new(0.5, 0.0));
        assert_eq!(t.get(&[-1]), Complex::new(0.5, 0.0));
        assert_eq!(t.get(&[0]), Complex::new(0.0, 0.0));
        assert_eq!(t.get(&[2]), Complex::new(0.0, 0.0));
        assert!(t.is_hermitian());
    }

    #[test]
    fn sine_is_hermitian_but_imaginary() {
        let f = TrigPoly::real_1d(0.0, &[], &[1.0f64]);
        assert!(f.is_hermitian());
        assert_eq!(f.coefficient(&[1]), Complex::new(0.0, -0.5));
        let v = f.eval(&[0.25]);
        assert!((v.re - 1.0).abs() < 1e-15 && v.im.abs() < 1e-15);
    }

    #[test]
    fn single_precision_table() {
        let f = TorusFunction::PowerSingularity { a: 0.5f32 };
        let t = fourier_coefficients(&f, 8, 1e-3).unwrap();
        assert!((t.mean().re - 2.0 * 2f32.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn grid_band_guard() {
        let g = GridSamples {
            n: 1,
            resolution: 16,
            samples: vec![1.0f64; 16],
        };
        let f = TorusFunction::GridSampled(g);
        assert!(matches!(
            fourier_coefficients(&f, 5, 1e-9),
            Err(Error::Resolution { .. })
        ));
        let t = fourier_coefficients(&f, 4, 1e-9).unwrap();
        assert!((t.mean().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn l4_by_convolution_matches_sampling() {
        let p = TrigPoly::real_1d(0.3, &[1.0f64, -0.2], &[0.4]);
        let exact = p.l4_norm_pow4();
        let s = p.sample_grid(64);
        let sampled: f64 = s.iter().map(|z| z.norm().powi(4)).sum::<f64>() / 64.0;
        assert!((exact - sampled).abs() < 1e-13);
    }

    #[test]
    fn sup_bound_is_an_upper_bound() {
        let p = TrigPoly::real_1d(0.0, &[1.0f64], &[]);
        let b = p.sup_norm_bound();
        assert!((1.0..1.05).contains(&b));
    }
}

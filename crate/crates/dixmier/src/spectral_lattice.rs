//! Torus Laplacian modes, symbol functions and tail-corrected spectral zeta sums.
//!
//! Convention: unit-period torus, e_m(t) = exp(2πi m·t), Δe_m = 4π²|m|² e_m.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extrapolation::richardson_halving;
use crate::quadrature::GaussRule;
use crate::scalar::Real;
use crate::special::{ln_gamma, pairwise_sum};

pub const MAX_DIMENSION: usize = 3;

/// One lattice mode m ∈ Z^n.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralMode<T> {
    pub index: Vec<i64>,
    pub lap_eigenvalue: T,
    pub rank: usize,
}

impl<T: Real> SpectralMode<T> {
    pub fn norm_sq(&self) -> u64 {
        norm_sq(&self.index)
    }
}

#[inline]
pub fn norm_sq(m: &[i64]) -> u64 {
    m.iter().map(|&x| (x * x) as u64).sum()
}

#[inline]
pub fn four_pi_sq<T: Real>() -> T {
    let two_pi = T::PI() + T::PI();
    two_pi * two_pi
}

/// 4π²·|m|², computed the same way everywhere so equal norms give equal bits.
#[inline]
pub fn lap_eigenvalue<T: Real>(m2: u64) -> T {
    four_pi_sq::<T>() * T::lit(m2 as f64)
}

fn check_dimension(n: usize) -> Result<()> {
    if (1..=MAX_DIMENSION).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

/// Number of modes with |m|_∞ ≤ N.
pub fn mode_count(n: usize, cutoff: usize) -> usize {
    (2 * cutoff + 1).pow(n as u32)
}

/// Index vectors with |m|_∞ ≤ N ordered by |m|², ties lexicographic.
pub fn mode_indices(n: usize, cutoff: usize) -> Result<Vec<Vec<i64>>> {
    check_dimension(n)?;
    let side = 2 * cutoff as i64 + 1;
    let total = mode_count(n, cutoff);
    let mut out = Vec::with_capacity(total);
    // odometer in lexicographic order, so a stable sort keeps ties lexicographic
    let mut cur = vec![-(cutoff as i64); n];
    for _ in 0..total {
        out.push(cur.clone());
        for d in (0..n).rev() {
            cur[d] += 1;
            if cur[d] < -(cutoff as i64) + side {
                break;
            }
            cur[d] = -(cutoff as i64);
        }
    }
    out.sort_by_key(|m| norm_sq(m));
    Ok(out)
}

/// All modes |m|_∞ ≤ N in rank order.
pub fn enumerate_modes<T: Real>(n: usize, cutoff: usize) -> Result<Vec<SpectralMode<T>>> {
    Ok(mode_indices(n, cutoff)?
        .into_iter()
        .enumerate()
        .map(|(rank, index)| {
            let lap_eigenvalue = lap_eigenvalue(norm_sq(&index));
            SpectralMode {
                index,
                lap_eigenvalue,
                rank,
            }
        })
        .collect())
}

/// |m|² of every mode with |m|_∞ ≤ N, in rank order.
pub fn ranked_norms(n: usize, cutoff: usize) -> Result<Vec<u64>> {
    check_dimension(n)?;
    let c = cutoff as i64;
    let mut v: Vec<u64> = Vec::with_capacity(mode_count(n, cutoff));
    match n {
        1 => {
            v.push(0);
            for k in 1..=c {
                v.push((k * k) as u64);
                v.push((k * k) as u64);
            }
        }
        2 => {
            for a in -c..=c {
                for b in -c..=c {
                    v.push((a * a + b * b) as u64);
                }
            }
        }
        _ => {
            for a in -c..=c {
                for b in -c..=c {
                    for d in -c..=c {
                        v.push((a * a + b * b + d * d) as u64);
                    }
                }
            }
        }
    }
    v.sort_unstable();
    Ok(v)
}

/// A spectral weight λ ↦ G(λ).
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolFunction<T> {
    /// (1+λ)^{-r/2}; r = n gives T_Δ = (1+Δ)^{-n/2}.
    PowerResolvent { order: T },
    /// max(λ,1)^{-q}, used by sequence models with eigenvalues λ_m = m.
    InversePower { order: T },
    /// Piecewise-linear table on increasing nodes, extended beyond the last
    /// node by the power law through the final two nodes.
    Table { lambda: Vec<T>, values: Vec<T> },
}

impl<T: Real> SymbolFunction<T> {
    /// T_Δ on T^n.
    pub fn canonical(n: usize) -> Self {
        Self::PowerResolvent { order: T::of(n) }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::PowerResolvent { order } | Self::InversePower { order } => {
                if !(*order > T::zero()) || !order.is_finite() {
                    return Err(Error::Invalid(format!(
                        "symbol order must be positive, got {order}"
                    )));
                }
            }
            Self::Table { lambda, values } => {
                if lambda.len() < 2 || lambda.len() != values.len() {
                    return Err(Error::Invalid(
                        "table needs at least two matching nodes".into(),
                    ));
                }
                if lambda[0] < T::zero() || lambda.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::Invalid(
                        "table nodes must be increasing and ≥ 0".into(),
                    ));
                }
                if values.iter().any(|v| !(*v > T::zero()))
                    || values.windows(2).any(|w| w[1] > w[0])
                {
                    return Err(Error::Invalid(
                        "table values must be positive and nonincreasing".into(),
                    ));
                }
                if self.decay_exponent() <= T::zero() {
                    return Err(Error::Invalid(
                        "table must decay at its last two nodes".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, lambda: T) -> T {
        self.power(lambda, T::one())
    }

    /// G(λ)^s.
    pub fn power(&self, lambda: T, s: T) -> T {
        match self {
            Self::PowerResolvent { order } => (-(*order * s / T::lit(2.0)) * lambda.ln_1p()).exp(),
            Self::InversePower { order } => lambda.max(T::one()).powf(-*order * s),
            Self::Table {
                lambda: nodes,
                values,
            } => {
                let k = nodes.len();
                let v = if lambda <= nodes[0] {
                    values[0]
                } else if lambda >= nodes[k - 1] {
                    let p = self.decay_exponent();
                    values[k - 1] * (lambda / nodes[k - 1]).powf(-p)
                } else {
                    let i = nodes.partition_point(|x| *x <= lambda) - 1;
                    let w = (lambda - nodes[i]) / (nodes[i + 1] - nodes[i]);
                    values[i] + w * (values[i + 1] - values[i])
                };
                v.powf(s)
            }
        }
    }

    /// p with G(λ) ≍ λ^{-p} as λ → ∞.
    pub fn decay_exponent(&self) -> T {
        match self {
            Self::PowerResolvent { order } => *order / T::lit(2.0),
            Self::InversePower { order } => *order,
            Self::Table { lambda, values } => {
                let k = lambda.len();
                if lambda[k - 2] <= T::zero() {
                    return T::zero();
                }
                -(values[k - 1] / values[k - 2]).ln() / (lambda[k - 1] / lambda[k - 2]).ln()
            }
        }
    }

    /// Σ_m G(λ_m)^s over Z^n converges iff s exceeds this value.
    pub fn threshold(&self, n: usize) -> T {
        T::of(n) / (T::lit(2.0) * self.decay_exponent())
    }

    /// Constants (c_lo, c_up) with c_lo·λ^{-p} ≤ G(λ) ≤ c_up·λ^{-p} for λ ≥ λ0.
    fn envelope(&self, lambda0: T) -> (T, T) {
        match self {
            Self::PowerResolvent { order } => (
                (T::one() + lambda0.recip()).powf(-*order / T::lit(2.0)),
                T::one(),
            ),
            Self::InversePower { .. } => (T::one(), T::one()),
            Self::Table { lambda, values } => {
                let k = lambda.len();
                let c = values[k - 1] * lambda[k - 1].powf(self.decay_exponent());
                (c, c)
            }
        }
    }

    fn table_edge(&self) -> T {
        match self {
            Self::Table { lambda, .. } => lambda[lambda.len() - 1],
            _ => T::zero(),
        }
    }
}

/// A truncated zeta sum Σ_{|m|_∞≤N} G(λ_m)^s with bounds on the omitted modes.
///
/// The true value lies in [lower(), upper()]: the tail bounds plus a
/// floating-point allowance for the partial sum itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaValue<T> {
    pub n: usize,
    pub s: T,
    pub cutoff: usize,
    pub partial_sum: T,
    /// Rigorous upper bound on the omitted modes.
    pub tail_bound: T,
    /// Rigorous lower bound on the omitted modes.
    pub tail_lower: T,
    /// Best estimate of the omitted modes, inside [tail_lower, tail_bound].
    pub tail_estimate: T,
    /// Bound on the rounding error of `partial_sum`.
    pub rounding: T,
}

impl<T: Real> ZetaValue<T> {
    pub fn lower(&self) -> T {
        self.partial_sum + self.tail_lower - self.rounding
    }
    pub fn upper(&self) -> T {
        self.partial_sum + self.tail_bound + self.rounding
    }
    pub fn estimate(&self) -> T {
        self.partial_sum + self.tail_estimate
    }
    pub fn width(&self) -> T {
        self.upper() - self.lower()
    }
    pub fn contains(&self, x: T) -> bool {
        self.lower() <= x && x <= self.upper()
    }
}

/// Σ over ranked modes of G(λ_m)^s, summed pairwise in rank order.
pub fn partial_zeta<T: Real>(g: &SymbolFunction<T>, s: T, n: usize, cutoff: usize) -> Result<T> {
    let norms = ranked_norms(n, cutoff)?;
    let terms: Vec<T> = norms
        .par_iter()
        .map(|&m2| g.power(lap_eigenvalue(m2), s))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Tail-corrected zeta sum.
pub fn zeta_sum<T: Real>(
    g: &SymbolFunction<T>,
    s: T,
    n: usize,
    cutoff: usize,
) -> Result<ZetaValue<T>> {
    check_dimension(n)?;
    g.validate()?;
    let threshold = g.threshold(n);
    if !(s > threshold) {
        return Err(Error::Divergent {
            s: s.to_f64_lossy(),
            threshold: threshold.to_f64_lossy(),
        });
    }
    let partial_sum = partial_zeta(g, s, n, cutoff)?;
    // a few ulps per term for λ and the power, plus the depth of the
    // pairwise summation
    let depth = (mode_count(n, cutoff).max(2) as f64).log2().ceil();
    let rounding = T::lit(8.0 + depth + 1.0) * T::epsilon() * partial_sum;
    let (tail_lower, tail_bound, tail_estimate) = match (g, n) {
        (SymbolFunction::PowerResolvent { order }, 1) => {
            resolvent_tail_1d(*order * s / T::lit(2.0), cutoff)
        }
        (SymbolFunction::PowerResolvent { order }, _) => {
            let (lo, up) = shell_tail(g, s, n, cutoff);
            let q = *order * s / T::lit(2.0);
            let est = full_space_integral(q, n) - cube_integral(q, n, T::of(cutoff) + T::lit(0.5));
            (lo, up, est.max(lo).min(up))
        }
        _ => {
            let (lo, up) = shell_tail(g, s, n, cutoff);
            (lo, up, (lo + up) / T::lit(2.0))
        }
    };
    Ok(ZetaValue {
        n,
        s,
        cutoff,
        partial_sum,
        tail_bound,
        tail_lower,
        tail_estimate,
        rounding,
    })
}

/// ∫_A^∞ (1+4π²x²)^{-q} dx for q > 1/2, A ≥ 1/2, by the binomial series
/// in (4π²x²)^{-1}.
pub fn resolvent_tail_integral<T: Real>(q: T, a: T) -> T {
    let c = four_pi_sq::<T>();
    let mut coeff = T::one(); // binom(−q, j)
    let mut sum = T::zero();
    let base = c.powf(-q) * a.powf(T::one() - q - q);
    let ratio = (c * a * a).recip();
    let mut rpow = T::one();
    for j in 0..400 {
        let jj = T::of(j);
        let term = coeff * base * rpow / (q + q + jj + jj - T::one());
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() * T::lit(0.01) {
            break;
        }
        coeff = coeff * (-(q + jj)) / (jj + T::one());
        rpow = rpow * ratio;
    }
    sum
}

/// Convexity bracket and Euler–Maclaurin estimate for 2Σ_{m>N}(1+4π²m²)^{-q}.
fn resolvent_tail_1d<T: Real>(q: T, cutoff: usize) -> (T, T, T) {
    let two = T::lit(2.0);
    let a = T::of(cutoff + 1);
    let g = |x: T| (T::one() + four_pi_sq::<T>() * x * x).powf(-q);
    let ga = g(a);
    // trapezoid overestimates ∫ of a convex decreasing function, midpoint underestimates
    let lower = resolvent_tail_integral(q, a) + ga / two;
    let upper = resolvent_tail_integral(q, a - T::lit(0.5));
    let c = four_pi_sq::<T>();
    let dg = -q * two * c * a * (T::one() + c * a * a).powf(-q - T::one());
    let est = (lower - dg / T::lit(12.0)).max(lower).min(upper);
    (two * lower, two * upper, two * est)
}

/// Rigorous bracket for Σ_{|m|_∞>N} G(λ_m)^s from shells |m|_∞ = k, on which
/// k ≤ |m|₂ ≤ k√n, followed by a power-law envelope.
fn shell_tail<T: Real>(g: &SymbolFunction<T>, s: T, n: usize, cutoff: usize) -> (T, T) {
    let c = four_pi_sq::<T>();
    let nn = T::of(n);
    let mut k_exp = (4 * (cutoff + 1)).max(cutoff + 4096);
    let edge = g.table_edge();
    while c * T::of(k_exp) * T::of(k_exp) < edge {
        k_exp *= 2;
    }
    let mut lo_terms = Vec::with_capacity(k_exp - cutoff);
    let mut up_terms = Vec::with_capacity(k_exp - cutoff);
    for k in cutoff + 1..=k_exp {
        let kk = T::of(k);
        let shell = T::of((2 * k + 1).pow(n as u32) - (2 * k - 1).pow(n as u32));
        lo_terms.push(shell * g.power(c * nn * kk * kk, s));
        up_terms.push(shell * g.power(c * kk * kk, s));
    }
    let p = g.decay_exponent();
    let e = T::lit(2.0) * p * s - nn; // > 0 above threshold
    let kx = T::of(k_exp);
    let lambda0 = c * kx * kx;
    let (c_lo, c_up) = g.envelope(lambda0);
    let two_n = T::lit(2.0) * nn;
    let up_env =
        c_up.powf(s) * c.powf(-p * s) * two_n * T::lit(3.0).powi(n as i32 - 1) * kx.powf(-e) / e;
    let lo_env = c_lo.powf(s) * (c * nn).powf(-p * s) * two_n * (kx + T::one()).powf(-e) / e;
    (
        pairwise_sum(&lo_terms) + lo_env,
        pairwise_sum(&up_terms) + up_env,
    )
}

/// ∫_{R^n} (1+4π²|x|²)^{-q} dx = (2π)^{-n} π^{n/2} Γ(q−n/2)/Γ(q), q > n/2.
pub fn full_space_integral<T: Real>(q: T, n: usize) -> T {
    let nn = T::of(n);
    let half_n = nn / T::lit(2.0);
    let two_pi = T::PI() + T::PI();
    two_pi.powf(-nn) * T::PI().powf(half_n) * (ln_gamma(q - half_n) - ln_gamma(q)).exp()
}

/// ∫_{[−L,L]²} (a + 4π²|x|²)^{-q} dx in polar coordinates.
fn square_integral<T: Real>(q: T, a: T, l: T, rule: &GaussRule<T>) -> T {
    let c = four_pi_sq::<T>();
    let pi = T::PI();
    let one = T::one();
    let disc = if (q - one).abs() < T::lit(1e-12) {
        pi / c * ((a + c * l * l) / a).ln()
    } else {
        pi / c * (a.powf(one - q) - (a + c * l * l).powf(one - q)) / (q - one)
    };
    // corners: ρ = L·secθ, θ ∈ [0, π/4]; the arc inside the square has length (2π − 8θ)ρ
    let quarter = pi / T::lit(4.0);
    let mut corners = T::zero();
    let panels = 4;
    for i in 0..panels {
        let t0 = quarter * T::of(i) / T::of(panels);
        let t1 = quarter * T::of(i + 1) / T::of(panels);
        corners = corners
            + rule.integrate(t0, t1, |th| {
                let sec = th.cos().recip();
                let rho = l * sec;
                (T::lit(2.0) * pi - T::lit(8.0) * th)
                    * rho
                    * (a + c * rho * rho).powf(-q)
                    * l
                    * sec
                    * th.tan()
            });
    }
    disc + corners
}

/// ∫_{[−L,L]^n} (1+4π²|x|²)^{-q} dx.
pub fn cube_integral<T: Real>(q: T, n: usize, l: T) -> T {
    let rule = GaussRule::<T>::new(20);
    match n {
        1 => {
            if l >= T::lit(0.5) {
                full_space_integral(q, 1) - T::lit(2.0) * resolvent_tail_integral(q, l)
            } else {
                T::lit(2.0)
                    * rule.integrate(T::zero(), l, |x| {
                        (T::one() + four_pi_sq::<T>() * x * x).powf(-q)
                    })
            }
        }
        2 => square_integral(q, T::one(), l, &rule),
        _ => {
            // slice along z with geometric panels
            let c = four_pi_sq::<T>();
            let mut total = T::zero();
            let mut z0 = T::zero();
            let mut h = T::lit(0.05);
            while z0 < l {
                let z1 = (z0 + h).min(l);
                total = total
                    + rule.integrate(z0, z1, |z| {
                        square_integral(q, T::one() + c * z * z, l, &rule)
                    });
                z0 = z1;
                h = h * T::lit(1.3);
            }
            T::lit(2.0) * total
        }
    }
}

/// Geometric grid s_j = 1 + 2^{-j}, j = j_min…j_max.
pub fn s_grid<T: Real>(j_min: u32, j_max: u32) -> Vec<T> {
    (j_min..=j_max)
        .map(|j| T::one() + T::lit(2f64.powi(-(j as i32))))
        .collect()
}

/// Settings of the residue extrapolation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidueOptions {
    pub j_min: u32,
    pub j_max: u32,
    pub order: usize,
    /// Lattice cutoff for the partial sums; `None` picks a dimension default.
    pub cutoff: Option<usize>,
}

impl Default for ResidueOptions {
    fn default() -> Self {
        Self {
            j_min: 3,
            j_max: 12,
            order: 2,
            cutoff: None,
        }
    }
}

impl ResidueOptions {
    pub fn cutoff_for(&self, n: usize) -> usize {
        self.cutoff.unwrap_or(match n {
            1 => 2048,
            2 => 64,
            _ => 16,
        })
    }
}

/// lim_{s↓1} (s−1)·ζ(s) with its error estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct Residue<T> {
    pub value: T,
    pub error: T,
    /// False when the extrapolation table did not contract; the value is
    /// still returned as a diagnostic.
    pub converged: bool,
    /// (s_j, (s_j − 1)·ζ(s_j)) samples fed to the extrapolation.
    pub samples: Vec<(T, T)>,
}

/// Residue of the zeta function of G at s = 1 by Richardson extrapolation.
pub fn residue_at_one<T: Real>(
    g: &SymbolFunction<T>,
    n: usize,
    opts: &ResidueOptions,
) -> Result<Residue<T>> {
    check_dimension(n)?;
    if !matches!(g, SymbolFunction::PowerResolvent { .. }) {
        return Err(Error::Invalid(
            "residue extrapolation needs a power_resolvent symbol".into(),
        ));
    }
    if opts.j_max < opts.j_min + opts.order as u32 {
        return Err(Error::Invalid(
            "s-grid too short for the extrapolation order".into(),
        ));
    }
    let cutoff = opts.cutoff_for(n);
    let grid = s_grid::<T>(opts.j_min, opts.j_max);
    let samples = grid
        .iter()
        .map(|&s| zeta_sum(g, s, n, cutoff).map(|z| (s, (s - T::one()) * z.estimate())))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<T> = samples.iter().map(|p| p.1).collect();
    let ex = richardson_halving(&values, opts.order);
    Ok(Residue {
        value: ex.value,
        error: ex.error,
        converged: ex.converged,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_order() {
        let idx = mode_indices(1, 2).unwrap();
        assert_eq!(idx, vec![vec![0], vec![-1], vec![1], vec![-2], vec![2]]);
    }

    #[test]
    fn two_dimensional_first_shell() {
        let modes = enumerate_modes::<f64>(2, 1).unwrap();
        assert_eq!(modes.len(), 9);
        assert_eq!(modes[0].index, vec![0, 0]);
        assert!(modes[1..5].iter().all(|m| m.norm_sq() == 1));
        assert_eq!(modes[1].index, vec![-1, 0]);
        assert_eq!(modes[4].index, vec![1, 0]);
    }

    #[test]
    fn large_cutoff_count_and_top_eigenvalue() {
        let modes = enumerate_modes::<f64>(1, 10_000).unwrap();
        assert_eq!(modes.len(), 20_001);
        let top = modes.last().unwrap().lap_eigenvalue;
        assert_eq!(top, four_pi_sq::<f64>() * 1e8);
    }

    #[test]
    fn unsupported_dimension() {
        assert_eq!(mode_indices(4, 1), Err(Error::UnsupportedDimension(4)));
        assert!(zeta_sum(&SymbolFunction::<f64>::canonical(0), 2.0, 0, 3).is_err());
    }

    #[test]
    fn ranked_norms_match_modes() {
        for n in 1..=3 {
            let a = ranked_norms(n, 3).unwrap();
            let b: Vec<u64> = enumerate_modes::<f64>(n, 3)
                .unwrap()
                .iter()
                .map(|m| m.norm_sq())
                .collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn single_mode_sum_is_one() {
        let g = SymbolFunction::<f64>::canonical(1);
        let z = zeta_sum(&g, 1.7, 1, 0).unwrap();
        assert_eq!(z.partial_sum, 1.0);
    }

    #[test]
    fn divergent_below_threshold() {
        let g = SymbolFunction::<f64>::canonical(2);
        assert!(matches!(
            zeta_sum(&g, 1.0, 2, 10),
            Err(Error::Divergent { .. })
        ));
    }

    #[test]
    fn tail_integral_against_quadrature() {
        let q = 1.3f64;
        let a = 0.75;
        let direct = crate::quadrature::adaptive(
            |u: f64| {
                // x = a / u maps [a, ∞) to (0, 1]
                let x = a / u;
                (1.0 + four_pi_sq::<f64>() * x * x).powf(-q) * a / (u * u)
            },
            0.0,
            1.0,
            1e-15,
            1e-13,
            2000,
        );
        let series = resolvent_tail_integral(q, a);
        assert!(
            (series - direct.value).abs() < 1e-12 * series,
            "{series} {}",
            direct.value
        );
    }

    #[test]
    fn cube_integral_tends_to_full_space() {
        for n in 1..=3 {
            let q = 0.5 * n as f64 + 0.75;
            let full = full_space_integral(q, n);
            let cube = cube_integral(q, n, 200.0);
            assert!((full - cube).abs() < 1e-3 * full, "n={n} {full} {cube}");
            assert!(cube < full);
        }
    }

    #[test]
    fn square_integral_small_box_against_tensor_quadrature() {
        let q = 1.2f64;
        let l = 0.8;
        let r = GaussRule::<f64>::new(40);
        let direct = 4.0
            * r.integrate(0.0, l, |x| {
                r.integrate(0.0, l, |y| {
                    (1.0 + four_pi_sq::<f64>() * (x * x + y * y)).powf(-q)
                })
            });
        let polar = cube_integral(q, 2, l);
        assert!((direct - polar).abs() < 1e-10, "{direct} {polar}");
    }

    #[test]
    fn shell_bracket_contains_resolvent_estimate_and_brute_force() {
        let g = SymbolFunction::<f64>::canonical(2);
        let s = 1.5;
        let small = zeta_sum(&g, s, 2, 8).unwrap();
        let big = partial_zeta(&g, s, 2, 400).unwrap();
        assert!(small.lower() <= big && big <= small.upper());
        assert!(small.tail_lower <= small.tail_estimate && small.tail_estimate <= small.tail_bound);
    }

    #[test]
    fn table_symbol_matches_resolvent_it_samples() {
        let exact = SymbolFunction::<f64>::canonical(1);
        let lambda: Vec<f64> = (0..4000u64).map(|k| lap_eigenvalue(k * k)).collect();
        let values: Vec<f64> = lambda.iter().map(|&l| exact.eval(l)).collect();
        let table = SymbolFunction::Table { lambda, values };
        table.validate().unwrap();
        let a = zeta_sum(&table, 2.0, 1, 300).unwrap();
        let b = zeta_sum(&exact, 2.0, 1, 300).unwrap();
        assert!((a.estimate() - b.estimate()).abs() < 1e-6);
    }
}

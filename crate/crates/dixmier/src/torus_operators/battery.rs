//! Seeded small-matrix checks of the operator inequalities used for the
//! symmetrized Dixmier trace.

use faer::{Mat, Side};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::pairwise_sum;

use super::compress::sequential_linalg;
use super::function::TrigPoly;

pub type CMat<T> = Mat<Complex<T>>;

/// Generator for one battery instance; instance i of a run seeded with s
/// uses seed s + i, independent of scheduling.
pub fn instance_rng(seed: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64))
}

fn uniform<T: Real>(rng: &mut ChaCha8Rng) -> T {
    T::lit(rng.gen_range(-1.0..1.0))
}

pub fn random_matrix<T: Real>(rng: &mut ChaCha8Rng, d: usize) -> CMat<T> {
    let mut m = Mat::<Complex<T>>::zeros(d, d);
    for j in 0..d {
        for i in 0..d {
            m[(i, j)] = Complex::new(uniform(rng), uniform(rng));
        }
    }
    m
}

pub fn adjoint<T: Real>(m: &CMat<T>) -> CMat<T> {
    Mat::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

/// (X + X*)/2 with uniform entries.
pub fn random_hermitian<T: Real>(rng: &mut ChaCha8Rng, d: usize) -> CMat<T> {
    let x = random_matrix::<T>(rng, d);
    let half = T::lit(0.5);
    Mat::from_fn(d, d, |i, j| (x[(i, j)] + x[(j, i)].conj()) * half)
}

/// X X*/d + δ I, strictly positive.
pub fn random_positive<T: Real>(rng: &mut ChaCha8Rng, d: usize) -> CMat<T> {
    let x = random_matrix::<T>(rng, d);
    let mut p = &x * adjoint(&x);
    let delta = T::lit(rng.gen_range(1e-3..1e-1));
    let scale = T::of(d).recip();
    for j in 0..d {
        for i in 0..d {
            p[(i, j)] = p[(i, j)] * scale;
        }
        p[(j, j)] = p[(j, j)] + Complex::new(delta, T::zero());
    }
    // exact hermitian symmetry for the eigensolver
    let half = T::lit(0.5);
    Mat::from_fn(d, d, |i, j| (p[(i, j)] + p[(j, i)].conj()) * half)
}

/// B^t for positive semidefinite B.
pub fn psd_power<T: Real>(b: &CMat<T>, t: T) -> Result<CMat<T>> {
    sequential_linalg();
    let evd = b
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Decomposition(format!("{e:?}")))?;
    let u = evd.U();
    let s = evd.S().column_vector();
    let d = b.nrows();
    let scaled = Mat::from_fn(d, d, |i, j| u[(i, j)] * s[j].re.max(T::zero()).powf(t));
    Ok(&scaled * adjoint(&u.to_owned()))
}

pub fn singular_values<T: Real>(m: &CMat<T>) -> Result<Vec<T>> {
    sequential_linalg();
    m.singular_values()
        .map_err(|e| Error::Decomposition(format!("{e:?}")))
}

/// Schatten p-norm from singular values; p = ∞ gives the largest.
pub fn schatten<T: Real>(sv: &[T], p: T) -> T {
    if p.is_infinite() {
        return sv.iter().copied().fold(T::zero(), T::max);
    }
    let v: Vec<T> = sv.iter().map(|x| x.powf(p)).collect();
    pairwise_sum(&v).powf(p.recip())
}

/// Outcome of one family of seeded checks.
#[derive(Clone, Debug, PartialEq)]
pub struct BatteryReport<T> {
    pub name: String,
    pub instances: usize,
    pub violations: usize,
    /// Largest lhs − rhs seen (negative when every instance has room).
    pub worst_excess: T,
    pub worst_instance: usize,
}

fn summarize<T: Real>(name: &str, excess: Vec<Vec<T>>, slack: T) -> BatteryReport<T> {
    let mut worst = T::neg_infinity();
    let mut worst_instance = 0;
    let mut violations = 0;
    for (i, ex) in excess.iter().enumerate() {
        for &e in ex {
            if e > slack {
                violations += 1;
            }
            if e > worst {
                worst = e;
                worst_instance = i;
            }
        }
    }
    BatteryReport {
        name: name.to_string(),
        instances: excess.len(),
        violations,
        worst_excess: worst,
        worst_instance,
    }
}

fn dim_for(rng: &mut ChaCha8Rng, max_dim: usize) -> usize {
    rng.gen_range(2..=max_dim.max(2))
}

/// √A·B·√A and √B·A·√B have the same singular values (A, B > 0). Excess is
/// the largest entrywise difference relative to the top singular value.
pub fn symmetrization_battery<T: Real>(
    seed: u64,
    count: usize,
    max_dim: usize,
    slack: T,
) -> Result<BatteryReport<T>> {
    let excess = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            let d = dim_for(&mut rng, max_dim);
            let a = random_positive::<T>(&mut rng, d);
            let b = random_positive::<T>(&mut rng, d);
            let (ra, rb) = (psd_power(&a, T::lit(0.5))?, psd_power(&b, T::lit(0.5))?);
            let x = singular_values(&(&(&ra * &b) * &ra))?;
            let y = singular_values(&(&(&rb * &a) * &rb))?;
            let top = x[0].max(y[0]);
            let diff = x
                .iter()
                .zip(&y)
                .map(|(p, q)| (*p - *q).abs())
                .fold(T::zero(), T::max);
            Ok(vec![diff / top])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize("symmetrization", excess, slack))
}

pub const THETAS: [f64; 3] = [0.25, 0.5, 0.75];
pub const THREE_LINE_P: [f64; 3] = [1.0, 2.0, 4.0];

/// ‖B^{1/2}AB^{1/2}‖_p ≤ ‖B^{(1−θ)/2}AB^{(1+θ)/2}‖_p for B > 0, A = A*.
/// Excess is (lhs − rhs)/max(rhs, 1).
pub fn three_line_battery<T: Real>(
    seed: u64,
    count: usize,
    max_dim: usize,
    slack: T,
) -> Result<BatteryReport<T>> {
    let excess = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            let d = dim_for(&mut rng, max_dim);
            let a = random_hermitian::<T>(&mut rng, d);
            let b = random_positive::<T>(&mut rng, d);
            let half = psd_power(&b, T::lit(0.5))?;
            let lhs_sv = singular_values(&(&(&half * &a) * &half))?;
            let mut out = Vec::new();
            for &theta in &THETAS {
                let th = T::lit(theta);
                let two = T::lit(2.0);
                let l = psd_power(&b, (T::one() - th) / two)?;
                let r = psd_power(&b, (T::one() + th) / two)?;
                let rhs_sv = singular_values(&(&(&l * &a) * &r))?;
                for &p in &THREE_LINE_P {
                    let p = T::lit(p);
                    let (lhs, rhs) = (schatten(&lhs_sv, p), schatten(&rhs_sv, p));
                    out.push((lhs - rhs) / rhs.max(T::one()));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize("three-line", excess, slack))
}

/// Random real trigonometric polynomial of band ≤ `band` in one variable.
pub fn random_trig_poly<T: Real>(rng: &mut ChaCha8Rng, band: usize) -> TrigPoly<T> {
    let b = rng.gen_range(1..=band.max(1));
    let cos: Vec<T> = (0..b).map(|_| uniform(rng)).collect();
    let sin: Vec<T> = (0..b).map(|_| uniform(rng)).collect();
    TrigPoly::real_1d(uniform(rng), &cos, &sin)
}

/// Matrix of M_f·G for G = diag(g) on modes −N..N; rows run over −N−b..N+b
/// so no coefficient of f is lost.
pub fn multiplier_block<T: Real>(f: &TrigPoly<T>, g: &[T]) -> CMat<T> {
    let n = (g.len() - 1) / 2;
    let b = f.band();
    let rows = 2 * (n + b) + 1;
    Mat::from_fn(rows, g.len(), |j, k| {
        let mj = j as i64 - (n + b) as i64;
        let mk = k as i64 - n as i64;
        f.coefficient(&[mj - mk]) * g[k]
    })
}

pub const INTERPOLATION_P: [f64; 3] = [2.0, 4.0, f64::INFINITY];
pub const LOWER_P: [f64; 5] = [1.0, 1.25, 1.5, 1.75, 2.0];

/// ‖M_f G‖_p ≤ ‖f‖_p‖G‖_p for p ∈ {2, 4, ∞} and ‖M_f G‖_p ≤ ‖f‖₂‖G‖_p for
/// p ∈ [1, 2]. Excess is (lhs − rhs)/max(rhs, 1).
pub fn interpolation_battery<T: Real>(
    seed: u64,
    count: usize,
    max_dim: usize,
    slack: T,
) -> Result<(BatteryReport<T>, BatteryReport<T>)> {
    let pairs = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            let band = rng.gen_range(1..=3usize);
            let f = random_trig_poly::<T>(&mut rng, band);
            let b = f.band();
            // rows 2(N+b)+1 ≤ max_dim
            let n_max = ((max_dim.max(3) - 1) / 2).saturating_sub(b).max(1);
            let n = rng.gen_range(1..=n_max);
            let g: Vec<T> = (0..2 * n + 1)
                .map(|_| T::lit(rng.gen_range(0.01..1.0)))
                .collect();
            let sv = singular_values(&multiplier_block(&f, &g))?;
            let f2 = f.l2_norm_sq().sqrt();
            let mut upper = Vec::new();
            for &p in &INTERPOLATION_P {
                let p = T::lit(p);
                let fp = if p == T::lit(2.0) {
                    f2
                } else if p == T::lit(4.0) {
                    f.l4_norm_pow4().sqrt().sqrt()
                } else {
                    f.sup_norm_bound()
                };
                let rhs = fp * schatten(&g, p);
                upper.push((schatten(&sv, p) - rhs) / rhs.max(T::one()));
            }
            let lower: Vec<T> = LOWER_P
                .iter()
                .map(|&p| {
                    let p = T::lit(p);
                    let rhs = f2 * schatten(&g, p);
                    (schatten(&sv, p) - rhs) / rhs.max(T::one())
                })
                .collect();
            Ok((upper, lower))
        })
        .collect::<Result<Vec<_>>>()?;
    let (upper, lower): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok((
        summarize("interpolation-upper", upper, slack),
        summarize("interpolation-lower", lower, slack),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_compose() {
        let mut rng = instance_rng(7, 0);
        let b = random_positive::<f64>(&mut rng, 5);
        let h = psd_power(&b, 0.5).unwrap();
        let back = &h * &h;
        for i in 0..5 {
            for j in 0..5 {
                assert!((back[(i, j)] - b[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn instances_depend_only_on_seed_and_index() {
        let a = random_matrix::<f64>(&mut instance_rng(11, 3), 4);
        let b = random_matrix::<f64>(&mut instance_rng(11, 3), 4);
        assert_eq!(a, b);
    }

    #[test]
    fn two_norm_interpolation_is_an_equality() {
        let mut rng = instance_rng(3, 0);
        let f = random_trig_poly::<f64>(&mut rng, 2);
        let g = vec![0.3, 0.7, 1.0, 0.2, 0.9];
        let sv = singular_values(&multiplier_block(&f, &g)).unwrap();
        let lhs = schatten(&sv, 2.0);
        let rhs = f.l2_norm_sq().sqrt() * schatten(&g, 2.0);
        assert!((lhs - rhs).abs() < 1e-13);
    }
}

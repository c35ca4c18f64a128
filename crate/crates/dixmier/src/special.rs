//! Special functions and deterministic summation.

use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of |Γ(x)| for x > 0 (Lanczos, g = 7).
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // reflection keeps the series in its accurate range
        let pi = T::PI();
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::of(i));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    half * (T::lit(2.0) * T::PI()).ln() + (x + half) * t.ln() - t + acc.ln()
}

/// Γ(x) for x > 0.
pub fn gamma<T: Real>(x: T) -> T {
    ln_gamma(x).exp()
}

/// Pairwise (cascade) summation in slice order. The result depends only on
/// the order of the input, never on how work was scheduled to produce it.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    const LEAF: usize = 64;
    if xs.len() <= LEAF {
        let mut s = T::zero();
        for &x in xs {
            s = s + x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Running Neumaier-compensated prefix sums: out[i] = x[0] + … + x[i].
pub fn compensated_prefix_sums<T: Real>(xs: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(xs.len());
    let mut s = T::zero();
    let mut c = T::zero();
    for &x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c = c + ((s - t) + x);
        } else {
            c = c + ((x - t) + s);
        }
        s = t;
        out.push(s + c);
    }
    out
}

/// Σ_{j≥0} (j + a)^{-p} for p > 1, a > 0: direct terms then Euler–Maclaurin.
pub fn hurwitz_zeta<T: Real>(p: T, a: T) -> T {
    hurwitz_from(p, a, 0)
}

/// Σ_{j≥start} (j + a)^{-p}.
pub fn hurwitz_from<T: Real>(p: T, a: T, start: usize) -> T {
    // Bernoulli numbers B_2 … B_16
    const B2K: [f64; 8] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    let direct = 24usize;
    let mut terms = Vec::with_capacity(direct);
    for j in start..start + direct {
        terms.push((T::of(j) + a).powf(-p));
    }
    let x0 = T::of(start + direct) + a;
    // ∫_{x0}^∞ x^{-p} + x0^{-p}/2 + Σ B_2k/(2k)! · p(p+1)…(p+2k−2) x0^{-p-2k+1}
    let mut tail = x0.powf(T::one() - p) / (p - T::one()) + x0.powf(-p) / T::lit(2.0);
    let mut rising = p; // p(p+1)…(p+2k−2)
    let mut fact = T::lit(2.0); // (2k)!
    let mut xpow = x0.powf(-p - T::one());
    for (k, &b) in B2K.iter().enumerate() {
        let term = T::lit(b) / fact * rising * xpow;
        tail = tail + term;
        let k2 = T::of(2 * k + 2);
        rising = rising * (p + k2 - T::one()) * (p + k2);
        fact = fact * (k2 + T::one()) * (k2 + T::lit(2.0));
        xpow = xpow / (x0 * x0);
    }
    pairwise_sum(&terms) + tail
}

//! Gauss–Legendre and adaptive Gauss–Kronrod rules.

use crate::scalar::Real;

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1],
/// computed by Newton iteration in `f64` and rounded to `T`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (
        nodes.into_iter().map(T::lit).collect(),
        weights.into_iter().map(T::lit).collect(),
    )
}

/// A fixed rule mapped onto subintervals.
#[derive(Clone, Debug)]
pub struct GaussRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussRule<T> {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    /// ∫_a^b f.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let h = (b - a) / T::lit(2.0);
        let c = (a + b) / T::lit(2.0);
        let mut s = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s = s + *w * f(c + h * *x);
        }
        s * h
    }

    /// Appends mapped nodes and weights of [a, b] to the output buffers.
    pub fn push_mapped(&self, a: T, b: T, xs: &mut Vec<T>, ws: &mut Vec<T>) {
        let h = (b - a) / T::lit(2.0);
        let c = (a + b) / T::lit(2.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            xs.push(c + h * *x);
            ws.push(*w * h);
        }
    }
}

// Kronrod 21-point extension of the 10-point Gauss rule (abscissae ≥ 0).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_460,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_958_109_831,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Integral with an error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quad<T> {
    pub value: T,
    pub error: T,
}

fn gk21<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Quad<T> {
    let c = (a + b) / T::lit(2.0);
    let h = (b - a) / T::lit(2.0);
    let fc = f(c);
    let mut kron = fc * T::lit(WGK[10]);
    let mut gauss = T::zero();
    for j in 0..10 {
        let dx = h * T::lit(XGK[j]);
        let pair = f(c - dx) + f(c + dx);
        kron = kron + pair * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[j / 2]);
        }
    }
    Quad {
        value: kron * h,
        error: ((kron - gauss) * h).abs(),
    }
}

/// Outcome of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Adaptive<T> {
    pub value: T,
    pub error: T,
    pub converged: bool,
}

/// Globally adaptive G10/K21 integration of f on [a, b]: the interval with
/// the largest error estimate is bisected until the summed estimate meets
/// max(abs_tol, rel_tol·|I|) or `max_intervals` is reached.
pub fn adaptive<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_intervals: usize,
) -> Adaptive<T> {
    let mut pieces: Vec<(T, T, Quad<T>)> = vec![(a, b, gk21(&mut f, a, b))];
    loop {
        let value: T = pieces.iter().map(|p| p.2.value).sum();
        let error: T = pieces.iter().map(|p| p.2.error).sum();
        // roundoff floor keeps tight tolerances from looping forever
        let floor = T::epsilon() * T::lit(50.0) * pieces.iter().map(|p| p.2.value.abs()).sum::<T>();
        let target = abs_tol.max(rel_tol * value.abs()).max(floor);
        if error <= target || pieces.len() >= max_intervals {
            return Adaptive {
                value,
                error: error.max(floor),
                converged: error <= target,
            };
        }
        let (worst, _) =
            pieces
                .iter()
                .enumerate()
                .fold((0usize, T::neg_infinity()), |(bi, be), (i, p)| {
                    if p.2.error > be {
                        (i, p.2.error)
                    } else {
                        (bi, be)
                    }
                });
        let (lo, hi, _) = pieces.swap_remove(worst);
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            return Adaptive {
                value,
                error,
                converged: false,
            };
        }
        pieces.push((lo, mid, gk21(&mut f, lo, mid)));
        pieces.push((mid, hi, gk21(&mut f, mid, hi)));
        // keep the sum order independent of the swap_remove history
        pieces.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 12, 16, 32] {
            let r = GaussRule::<f64>::new(n);
            let wsum: f64 = r.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14, "n={n}");
            let deg = 2 * n - 1;
            let got = r.integrate(0.0, 1.0, |x| x.powi(deg as i32));
            assert!((got - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        // ∫_0^1 t^{-1/2} = 2
        let q = adaptive(|t: f64| t.powf(-0.5), 0.0, 1.0, 1e-12, 1e-12, 500);
        assert!(q.converged);
        assert!((q.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn adaptive_oscillatory() {
        // ∫_0^1 cos(40πt) t dt = 0
        let q = adaptive(
            |t: f64| (40.0 * std::f64::consts::PI * t).cos() * t,
            0.0,
            1.0,
            1e-14,
            1e-13,
            500,
        );
        assert!(q.value.abs() < 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let q = adaptive(|t: f32| t.exp(), 0.0, 1.0, 1e-6, 1e-6, 100);
        assert!((q.value - (1f32.exp() - 1.0)).abs() < 1e-5);
    }
}

use std::f64::consts::PI;

use approx::assert_relative_eq;
use dixmier::abstract_model::{tail_seminorm, DiagonalModel};
use dixmier::spectral_lattice::{residue_at_one, ResidueOptions, SymbolFunction};
use dixmier::torus_operators::{fourier_coefficients, lp_norm, TorusFunction};

// composite Simpson on [a, b] with an even number of panels
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn residues_are_volume_constants() {
    let opts = ResidueOptions::default();
    // Weyl: #{λ ≤ x} ~ 2√x/(2π) on the circle, πx/(4π²) on T²
    let r1 = residue_at_one(&SymbolFunction::<f64>::canonical(1), 1, &opts).unwrap();
    assert!(r1.converged);
    assert_relative_eq!(r1.value, 1.0 / PI, max_relative = 1e-8);
    let r2 = residue_at_one(&SymbolFunction::<f64>::canonical(2), 2, &opts).unwrap();
    assert_relative_eq!(r2.value, 0.25 / PI, max_relative = 1e-6);
}

#[test]
fn harmonic_tail_against_direct_gamma() {
    let model = DiagonalModel::<f64>::harmonic_sequence();
    for (start, len) in [(1, 2000), (10, 5000), (100, 20000)] {
        let t = tail_seminorm(&model, start, len).unwrap();
        let mut s = 0.0f64;
        let mut comp = 0.0f64;
        let mut gammas = Vec::with_capacity(len);
        for k in 1..=len {
            // Kahan
            let y = 1.0 / (start + k) as f64 - comp;
            let u = s + y;
            comp = (u - s) - y;
            s = u;
            gammas.push(s / (1.0 + k as f64).ln());
        }
        let window = &gammas[len / 2..];
        let max = window.iter().copied().fold(f64::MIN, f64::max);
        assert_relative_eq!(t.value, max, max_relative = 1e-12);
        assert_relative_eq!(t.last, gammas[len - 1], max_relative = 1e-12);
    }
}

#[test]
fn power_singularity_coefficients() {
    let a = 0.6;
    let f = TorusFunction::PowerSingularity { a };
    let table = fourier_coefficients(&f, 16, 1e-10).unwrap();
    assert_relative_eq!(
        table.mean().re,
        2f64.powf(a) / (1.0 - a),
        max_relative = 1e-12
    );
    // t = u^{1/(1−a)} removes the singularity
    let q = 1.0 / (1.0 - a);
    let top = 0.5f64.powf(1.0 - a);
    for k in [1i64, 2, 5, 16] {
        let oracle =
            2.0 * q * simpson(|u| (2.0 * PI * k as f64 * u.powf(q)).cos(), 0.0, top, 20000);
        let got = table.get(&[k]);
        assert!(
            (got.re - oracle).abs() < 1e-9,
            "k = {k}: {} vs {oracle}",
            got.re
        );
        assert!(got.im.abs() < 1e-12);
        assert_relative_eq!(table.get(&[-k]).re, got.re, max_relative = 1e-14);
    }
}

#[test]
fn power_singularity_lp_norms() {
    for (a, p) in [(0.6, 1.5), (0.3, 2.0), (0.45, 2.0)] {
        let f = TorusFunction::PowerSingularity { a };
        let n = lp_norm(&f, p).unwrap();
        let exact = (2f64.powf(a * p) / (1.0 - a * p)).powf(1.0 / p);
        assert!(
            (n.value - exact).abs() <= n.error.max(1e-10) * 10.0,
            "{} vs {exact}",
            n.value
        );
    }
    let n = lp_norm(&TorusFunction::PowerSingularity { a: 0.6f64 }, 2.0).unwrap();
    assert!(n.value.is_infinite());
}

#[test]
fn log_power_mean() {
    // ∫_0^{1/2} dt/(t|ln t|^{1+ε}) = (ln 2)^{−ε}/ε
    for eps in [0.5, 1.0] {
        let f = TorusFunction::LogPower { eps };
        let table = fourier_coefficients(&f, 4, 1e-9).unwrap();
        let exact = 2.0 / (eps * 2f64.ln().powf(eps));
        assert_relative_eq!(table.mean().re, exact, max_relative = 1e-9);
        assert_relative_eq!(lp_norm(&f, 1.0).unwrap().value, exact, max_relative = 1e-12);
    }
}

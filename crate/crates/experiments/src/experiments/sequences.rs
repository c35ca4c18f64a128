//! Experiments on sequences: the L¹ counterexample, the non-normal witness
//! and the Banach-limit machinery.

use std::f64::consts::PI;

use dixmier::abstract_model::{
    additivity_probe, domination_check, tail_seminorm, AdditivityVerdict, DiagonalModel, Dominator,
    Partition, Spectrum,
};
use dixmier::counterexample_l1::{
    contrast_residue, hs_divergence_report, DivergenceVerdict, C1_FROM,
};
use dixmier::sequence_limits::{
    averaging_chain, averaging_weights, dilate, gamma_sequence, shift, trailing_window,
    BoundedSequence, DEFAULT_WINDOW,
};
use dixmier::spectral_lattice::{ResidueOptions, SymbolFunction};
use dixmier::torus_operators::battery::instance_rng;
use rand::Rng;

use super::{closed_form_mean, harmonic};
use crate::config::FunctionSpec;
use crate::{Ctx, RunError};

pub(super) fn l1_counterexample(ctx: &mut Ctx) -> Result<(), RunError> {
    let cfg = ctx.cfg;
    let spec = &cfg.functions[0];
    let FunctionSpec::LogPower { eps } = *spec else {
        unreachable!("validated")
    };
    let n_max = cfg.cutoffs.n_list[0] as u32;
    let report = ctx.timed("hs-divergence", |_| Ok(hs_divergence_report(eps, n_max)?))?;
    for e in &report.elements {
        ctx.point("diagonal-element", e.n as u64, e.value, e.error);
        let scale = (e.n as f64).sqrt();
        ctx.point(
            "scaled-diagonal",
            e.n as u64,
            e.value * scale,
            e.error * scale,
        );
        if let Some(b) = e.chain_bound {
            ctx.row("chain-bound", e.n as u64, b, 0.0, b, e.value);
        }
    }
    for &(n, s) in &report.partial_sums {
        ctx.point("partial-sum", n as u64, s, 0.0);
    }
    ctx.point("c1", n_max as u64, report.c1, 0.0);
    ctx.row(
        "increment",
        n_max as u64,
        report.increment,
        0.0,
        report.increment_floor,
        report.increment,
    );
    let (slope, intercept, r2) = report.fit;
    ctx.row("log-fit", n_max as u64, slope, 1.0 - r2, intercept, r2);

    let scaled_min = report
        .elements
        .iter()
        .filter(|e| e.n >= C1_FROM)
        .map(|e| e.value * (e.n as f64).sqrt())
        .fold(f64::INFINITY, f64::min);
    ctx.check(
        "c1-positive",
        report.c1 > 0.0 && scaled_min >= report.c1,
        format!(
            "min d_n·√n over n ≥ {C1_FROM} is {scaled_min:.6}, ĉ₁ = {:.6}",
            report.c1
        ),
    );
    let h = |n: u32| harmonic(n as u64);
    let floor = cfg.tol("increment_factor")? * report.c1 * report.c1 * (h(n_max) - h(n_max / 2));
    ctx.check(
        "increment-floor",
        report.increment >= floor,
        format!(
            "S_{n_max} − S_{} = {:.6} vs floor {floor:.6}",
            n_max / 2,
            report.increment
        ),
    );
    ctx.check(
        "log-growth",
        report.verdict == DivergenceVerdict::LogGrowth && report.chain_violations.is_empty(),
        format!(
            "verdict {:?}, slope {slope:.4}, r² {r2:.5}, chain violations {:?}",
            report.verdict, report.chain_violations
        ),
    );

    let contrast = ctx.timed("contrast-residue", |_| Ok(contrast_residue(eps)?))?;
    let oracle = closed_form_mean(spec).unwrap() / PI;
    ctx.point("contrast-residue", 0, contrast.value, contrast.error);
    ctx.point("contrast-oracle", 0, oracle, 0.0);
    ctx.check(
        "contrast-residue",
        (contrast.value - oracle).abs() <= cfg.tol("contrast_abs")?,
        format!("{:.12} vs {oracle:.12}", contrast.value),
    );
    Ok(())
}

fn is_harmonic(m: &DiagonalModel<f64>) -> bool {
    matches!(m.spectrum, Spectrum::Natural)
        && matches!(m.symbol, SymbolFunction::InversePower { order } if order == 1.0)
}

pub(super) fn non_normal_witness(ctx: &mut Ctx) -> Result<(), RunError> {
    let cfg = ctx.cfg;
    let model: DiagonalModel<f64> = cfg.model.as_ref().unwrap().to_model()?;
    let k = cfg.cutoffs.k_grid[0];
    let tol = cfg.tol("tail_abs")?;
    let harmonic_model = is_harmonic(&model);

    ctx.timed("tail-seminorm", |ctx| {
        for &n in &cfg.cutoffs.n_list {
            let t = tail_seminorm(&model, n, k)?;
            ctx.row(
                "tail-seminorm",
                n as u64,
                t.value,
                0.0,
                t.bracket.lower,
                t.bracket.upper,
            );
            ctx.point("tail-gamma-last", n as u64, t.last, 0.0);
            if harmonic_model {
                let oracle =
                    (harmonic((n + k) as u64) - harmonic(n as u64)) / ((1 + k) as f64).ln();
                ctx.point("tail-oracle", n as u64, oracle, 0.0);
                ctx.check(
                    format!("tail-seminorm:N={n}"),
                    (t.value - oracle).abs() <= tol,
                    format!("{:.9} vs harmonic oracle {oracle:.9}", t.value),
                );
            }
        }
        Ok(())
    })?;

    ctx.timed("additivity", |ctx| {
        let levels = [1usize, 10, 100, 1000];
        let r = additivity_probe(
            &model,
            Partition::Atoms,
            &levels,
            &ResidueOptions::default(),
        )?;
        ctx.point("additivity-total", 0, r.total, 0.0);
        ctx.point(
            "additivity-piece-sum",
            r.pieces.len() as u64,
            r.piece_sum,
            0.0,
        );
        for &(j, v) in r.pieces.iter().take(10) {
            ctx.point("additivity-piece", j as u64, v, 0.0);
        }
        for &(j, v) in &r.tails {
            ctx.point("additivity-tail", j as u64, v, 0.0);
        }
        ctx.check(
            "additivity-failure",
            r.verdict == AdditivityVerdict::Failure,
            format!(
                "ν(F) = {:.6}, Σ ν(F_j) = {:.3e}, tails {:?}, verdict {:?}",
                r.total, r.piece_sum, r.tails, r.verdict
            ),
        );
        Ok(())
    })?;

    ctx.timed("domination", |ctx| {
        let dtol = cfg.tol("domination_tol")?;
        let candidates = [
            (
                "power-decay-2",
                Dominator::PowerDecay {
                    scale: 1.0,
                    exponent: 2.0,
                },
            ),
            (
                "power-decay-1.1",
                Dominator::PowerDecay {
                    scale: 10.0,
                    exponent: 1.1,
                },
            ),
        ];
        for (label, l) in candidates {
            let r = domination_check(&model, &l, dtol)?;
            let (mode, density, cand) = r.witness.as_ref().map_or((0, f64::NAN, f64::NAN), |w| {
                (w.mode as u64, w.density, w.candidate)
            });
            ctx.row(
                format!("domination:{label}"),
                mode,
                r.l1_norm,
                0.0,
                cand,
                density,
            );
            ctx.check(
                format!("domination-fails:{label}"),
                !r.passed && r.witness.is_some() && r.l1_norm.is_finite(),
                format!(
                    "‖l‖₁ = {:.6}, witness mode {mode}: density {density} > l = {cand:.3e}",
                    r.l1_norm
                ),
            );
        }
        Ok(())
    })
}

/// a_k = L + A·cos(ωk + φ)/k^p with |a_k − L| ≤ A/k^p.
struct Oscillating {
    limit: f64,
    amp: f64,
    power: f64,
    freq: f64,
    phase: f64,
}

impl Oscillating {
    fn draw(seed: u64, i: usize) -> Self {
        let mut rng = instance_rng(seed, i);
        Self {
            limit: rng.gen_range(-2.0..2.0),
            amp: rng.gen_range(0.1..1.0),
            power: rng.gen_range(0.5..2.0),
            freq: rng.gen_range(0.3..3.0),
            phase: rng.gen_range(0.0..2.0 * PI),
        }
    }

    fn at(&self, k: usize) -> f64 {
        let x = k as f64;
        self.limit + self.amp * (self.freq * x + self.phase).cos() / x.powf(self.power)
    }

    fn envelope(&self, k: usize) -> f64 {
        self.amp / (k as f64).powf(self.power)
    }
}

/// Intersection of [b_k − e_k, b_k + e_k] over the trailing window: every
/// point of it is consistent with every entry's distance to the limit.
fn envelope_bracket(
    b: &BoundedSequence<f64>,
    env: impl Fn(usize) -> f64,
) -> Result<(f64, f64), RunError> {
    let (lo, hi) = trailing_window(b.len(), DEFAULT_WINDOW)?;
    Ok(
        (lo..=hi).fold((f64::NEG_INFINITY, f64::INFINITY), |(l, u), k| {
            let e = env(k);
            (l.max(b.at(k) - e), u.min(b.at(k) + e))
        }),
    )
}

pub(super) fn limits_battery(ctx: &mut Ctx) -> Result<(), RunError> {
    let cfg = ctx.cfg;
    let short = cfg.cutoffs.n_list[0];
    let long = cfg.cutoffs.n_list[1];

    let wtol = cfg.tol("weight_sum_abs")?;
    let chain_len = ((long + 1) as f64).ln().floor() as usize;
    let mut worst = 0f64;
    for k in 1..=chain_len {
        let (_, w) = averaging_weights::<f64>(k);
        let sum: f64 = w.iter().sum();
        ctx.point("weight-sum", k as u64, sum, (sum - 1.0).abs());
        worst = worst.max((sum - 1.0).abs());
    }
    ctx.check(
        "weight-sums",
        worst <= wtol,
        format!("max |Σ_j w_kj − 1| = {worst:.3e} over k ≤ {chain_len}"),
    );

    // (label, contained count, worst margin, widest bracket)
    let mut tallies: Vec<(String, usize, f64, f64)> = Vec::new();
    let mut tally = |label: &str, limit: f64, (lo, hi): (f64, f64)| {
        let margin = (limit - lo).min(hi - limit);
        match tallies.iter_mut().find(|t| t.0 == label) {
            Some(t) => {
                t.1 += usize::from(margin >= 0.0);
                t.2 = t.2.min(margin);
                t.3 = t.3.max(hi - lo);
            }
            None => tallies.push((
                label.to_string(),
                usize::from(margin >= 0.0),
                margin,
                hi - lo,
            )),
        }
    };
    ctx.timed("limit-preservation", |_| {
        for i in 0..cfg.instances {
            let seq = Oscillating::draw(cfg.seed, i);
            let a = BoundedSequence::from_fn(short, |k| seq.at(k + 1))?;
            tally(
                "identity",
                seq.limit,
                envelope_bracket(&a, |k| seq.envelope(k))?,
            );
            for j in 1..=3 {
                let b = shift(&a, j)?;
                tally(
                    &format!("shift:{j}"),
                    seq.limit,
                    envelope_bracket(&b, |k| seq.envelope(k + j))?,
                );
            }
            for j in 2..=3 {
                let b = dilate(&a, j)?;
                tally(
                    &format!("dilate:{j}"),
                    seq.limit,
                    envelope_bracket(&b, |k| seq.envelope(k.div_ceil(j)))?,
                );
            }
            let a = BoundedSequence::from_fn(long, |k| seq.at(k + 1))?;
            let b = averaging_chain(&a)?;
            // entry k averages a_j over j ≥ j0(k)
            tally(
                "averaging-chain",
                seq.limit,
                envelope_bracket(&b, |k| seq.envelope(averaging_weights::<f64>(k).0))?,
            );
        }
        Ok(())
    })?;
    for (label, hits, margin, width) in tallies {
        ctx.row(
            format!("limit-preserved:{label}"),
            cfg.instances as u64,
            hits as f64,
            0.0,
            margin,
            width,
        );
        ctx.check(
            format!("limit-preserved:{label}"),
            hits == cfg.instances,
            format!(
                "{hits}/{} brackets contain the limit; worst margin {margin:.3e}",
                cfg.instances
            ),
        );
    }

    let k = cfg.cutoffs.k_grid[0];
    ctx.timed("gamma-harmonic", |ctx| {
        let mu: Vec<f64> = (1..=k).map(|n| 1.0 / n as f64).collect();
        let g = gamma_sequence(&mu)?;
        let value = g.gamma[k - 1];
        let oracle = harmonic(k as u64) / ((1 + k) as f64).ln();
        ctx.point("gamma-harmonic", k as u64, value, (value - oracle).abs());
        ctx.check(
            "gamma-harmonic",
            (value - oracle).abs() <= cfg.tol("gamma_abs")?,
            format!("γ_k = {value:.15} vs H_k/ln(1+k) = {oracle:.15}"),
        );
        Ok(())
    })
}

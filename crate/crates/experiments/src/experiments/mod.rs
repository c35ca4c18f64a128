mod sequences;
mod torus;

use std::f64::consts::PI;

use crate::config::{ExperimentId, FunctionSpec};
use crate::{Ctx, RunError};

pub(crate) fn dispatch(ctx: &mut Ctx) -> Result<(), RunError> {
    match ctx.cfg.experiment {
        ExperimentId::LInfinityIdentity => torus::l_infinity_identity(ctx),
        ExperimentId::L2Sharpness => torus::l2_sharpness(ctx),
        ExperimentId::L1Residue => torus::l1_residue(ctx),
        ExperimentId::L1PlusEps => torus::l1_plus_eps(ctx),
        ExperimentId::L1Counterexample => sequences::l1_counterexample(ctx),
        ExperimentId::NonNormalWitness => sequences::non_normal_witness(ctx),
        ExperimentId::LimitsBattery => sequences::limits_battery(ctx),
    }
}

/// ∫_{−1/2}^{1/2} f for the singular model functions.
fn closed_form_mean(f: &FunctionSpec) -> Option<f64> {
    match *f {
        FunctionSpec::PowerSingularity { a } => Some(2f64.powf(a) / (1.0 - a)),
        FunctionSpec::LogPower { eps } => Some(2.0 / (eps * 2f64.ln().powf(eps))),
        FunctionSpec::Constant { value } => Some(value),
        FunctionSpec::Cosine { a0, .. } => Some(a0),
        _ => None,
    }
}

/// Dixmier trace target ĥ(0)/π on the circle.
fn circle_target(f: &FunctionSpec) -> Option<f64> {
    closed_form_mean(f).map(|m| m / PI)
}

/// H_n, summed directly for small n and by its asymptotic series otherwise.
fn harmonic(n: u64) -> f64 {
    if n < 64 {
        return (1..=n).rev().map(|k| 1.0 / k as f64).sum();
    }
    let x = n as f64;
    let x2 = x * x;
    x.ln() + 0.577_215_664_901_532_9 + 0.5 / x - 1.0 / (12.0 * x2) + 1.0 / (120.0 * x2 * x2)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

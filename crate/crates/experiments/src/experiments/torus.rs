//! Experiments on the circle: compressions of M_f·T_Δ and their traces.

use std::f64::consts::PI;

use dixmier::spectral_lattice::{residue_at_one, zeta_sum, ResidueOptions, SymbolFunction};
use dixmier::torus_operators::battery::{
    instance_rng, interpolation_battery, random_trig_poly, symmetrization_battery,
    three_line_battery, BatteryReport,
};
use dixmier::torus_operators::{
    bracket_from_spectrum, compress, dixmier_bracket, edge_effect_check, fourier_coefficients,
    l2_refinement, lp_norm, reliable_s_grid, residue_route, schatten_bound_curve,
    singular_spectrum, trace_identity_check, z1_comparison, BracketOptions, DixmierBracket,
    FourierTable, OperatorKind, TorusFunction, TrigPoly,
};

use super::{circle_target, closed_form_mean, rel};
use crate::config::FunctionSpec;
use crate::{Ctx, RunError};

/// Quadrature tolerance for tables of the singular functions.
const TABLE_TOL: f64 = 1e-9;

fn bracket_rows(ctx: &mut Ctx, label: &str, n: usize, b: &DixmierBracket<f64>) {
    let (lo, hi) = (b.bracket.lower, b.bracket.upper);
    ctx.row(
        format!("gamma-bracket:{label}"),
        n as u64,
        0.5 * (lo + hi),
        0.5 * (hi - lo),
        lo,
        hi,
    );
    let (lo, hi) = (b.raw.lower, b.raw.upper);
    ctx.row(
        format!("gamma-raw:{label}"),
        n as u64,
        0.5 * (lo + hi),
        0.5 * (hi - lo),
        lo,
        hi,
    );
    ctx.row(
        format!("gamma-sup:{label}"),
        n as u64,
        b.norm_one_inf,
        0.0,
        b.norm_one_inf,
        b.norm_one_inf,
    );
}

fn seeded_polys(ctx: &Ctx) -> Vec<TrigPoly<f64>> {
    let cfg = ctx.cfg;
    cfg.functions
        .iter()
        .filter_map(|f| match f {
            FunctionSpec::RandomTrigPoly { band } => Some(*band),
            _ => None,
        })
        .flat_map(|band| {
            (0..cfg.instances).map(move |i| random_trig_poly(&mut instance_rng(cfg.seed, i), band))
        })
        .collect()
}

pub(super) fn l_infinity_identity(ctx: &mut Ctx) -> Result<(), RunError> {
    let cfg = ctx.cfg;
    let g = cfg.symbol.to_symbol::<f64>()?;

    let zeta_cutoff = cfg.cutoffs.k_grid[0];
    let width_tol = cfg.tol("zeta_width")?;
    ctx.timed("zeta-sum", |ctx| {
        let z = zeta_sum(&g, 2.0, 1, zeta_cutoff)?;
        // Σ_m 1/(1 + 4π²m²) = coth(1/2)/2
        let oracle = 0.5 / 0.5f64.tanh();
        ctx.row(
            "zeta-sum",
            zeta_cutoff as u64,
            z.estimate(),
            0.5 * z.width(),
            z.lower(),
            z.upper(),
        );
        ctx.check(
            "zeta-closed-form",
            z.contains(oracle) && z.width() <= width_tol,
            format!(
                "[{:.17e}, {:.17e}] vs {oracle:.17e}, width {:.3e}",
                z.lower(),
                z.upper(),
                z.width()
            ),
        );
        Ok(())
    })?;

    for (n, tol, oracle) in [
        (1usize, cfg.tol("residue_1d_abs")?, 1.0 / PI),
        (2, cfg.tol("residue_2d_rel")? / (4.0 * PI), 1.0 / (4.0 * PI)),
    ] {
        ctx.timed(&format!("residue-n{n}"), |ctx| {
            let r = residue_at_one(&SymbolFunction::canonical(n), n, &ResidueOptions::default())?;
            ctx.point("residue", n as u64, r.value, r.error);
            ctx.check(
                format!("residue-n{n}"),
                (r.value - oracle).abs() <= tol && r.converged,
                format!("{:.12} vs {oracle:.12} (tol {tol:.1e})", r.value),
            );
            Ok(())
        })?;
    }

    let polys = seeded_polys(ctx);
    let trace_tol = cfg.tol("trace_identity_rel")?;
    ctx.timed("trace-identity", |ctx| {
        for &s in &cfg.cutoffs.s_grid {
            for &n in &cfg.cutoffs.n_list {
                let mut worst = 0f64;
                let mut best = f64::INFINITY;
                let mut diag = 0f64;
                for p in &polys {
                    let table = fourier_coefficients(
                        &TorusFunction::TrigPoly(p.clone()),
                        2 * n,
                        TABLE_TOL,
                    )?;
                    let c = compress(&table, &g, OperatorKind::Plain { s }, n)?;
                    let t = trace_identity_check(&c);
                    worst = worst.max(t.defect);
                    best = best.min(t.defect);
                    diag = diag.max(t.diagonal_defect);
                }
                ctx.row(
                    format!("trace-identity:s={s}"),
                    n as u64,
                    worst,
                    0.0,
                    best,
                    worst,
                );
                ctx.row(
                    format!("trace-diagonal:s={s}"),
                    n as u64,
                    diag,
                    0.0,
                    0.0,
                    diag,
                );
                ctx.check(
                    format!("trace-identity:s={s}:N={n}"),
                    worst <= trace_tol && polys.len() == cfg.instances,
                    format!(
                        "max relative defect {worst:.3e} over {} polynomials",
                        polys.len()
                    ),
                );
            }
        }
        Ok(())
    })?;

    let edge_tol = cfg.tol("edge_effect_rel")?;
    let mut edge_fns: Vec<(String, TrigPoly<f64>)> = Vec::new();
    for f in &cfg.functions {
        if let TorusFunction::TrigPoly(p) = match f {
            FunctionSpec::RandomTrigPoly { .. } => continue,
            other => other.build(1)?,
        } {
            edge_fns.push((f.label(), p));
        }
    }
    edge_fns.extend(
        polys
            .iter()
            .take(5)
            .cloned()
            .enumerate()
            .map(|(i, p)| (format!("poly{i}"), p)),
    );
    ctx.timed("edge-effect", |ctx| {
        for &n in &cfg.cutoffs.aux_n_list {
            let mut worst = 0f64;
            for (label, p) in &edge_fns {
                let band = p.band();
                let table =
                    fourier_coefficients(&TorusFunction::TrigPoly(p.clone()), 2 * n, TABLE_TOL)?;
                let c = compress(&table, &g, OperatorKind::Plain { s: 1.0 }, n)?;
                let e = edge_effect_check(&c, p.l2_norm_sq(), band, &g)?;
                ctx.row(
                    format!("hs-matrix:{label}"),
                    n as u64,
                    e.hs_sq,
                    0.0,
                    e.interior,
                    e.full,
                );
                ctx.row(
                    format!("hs-formula:{label}"),
                    n as u64,
                    e.full,
                    e.full - e.interior,
                    e.interior,
                    e.full,
                );
                worst = worst.max(e.excess());
            }
            ctx.row("edge-effect-excess", n as u64, worst, 0.0, 0.0, worst);
            ctx.check(
                format!("edge-effect:N={n}"),
                worst <= edge_tol,
                format!("largest relative excess outside [interior, full]: {worst:.3e}"),
            );
        }
        Ok(())
    })?;

    // the 1 + cos example: residue route against the gamma bracket
    let bracket_tol = cfg.tol("bracket_rel")?;
    let n = *cfg.cutoffs.aux_n_list.iter().max().unwrap();
    for spec in cfg
        .functions
        .iter()
        .filter(|f| !matches!(f, FunctionSpec::RandomTrigPoly { .. }))
    {
        let f = spec.build(1)?;
        let label = spec.label();
        ctx.timed(&format!("routes:{label}"), |ctx| {
            let table = fourier_coefficients(&f, 2 * n, TABLE_TOL)?;
            let route = residue_route(&table, &g, &ResidueOptions::default())?;
            ctx.point(
                format!("residue-route:{label}"),
                0,
                route.value.re,
                route.error,
            );
            let target = circle_target(spec).unwrap();
            ctx.check(
                format!("residue-route:{label}"),
                (route.value.re - target).abs()
                    <= cfg.tol("residue_1d_abs")? * target.abs().max(1.0),
                format!("{:.12} vs ĥ(0)/π = {target:.12}", route.value.re),
            );
            let b = dixmier_bracket(
                &f,
                &table,
                &g,
                OperatorKind::Plain { s: 1.0 },
                n,
                &BracketOptions::default(),
            )?;
            bracket_rows(ctx, &label, n, &b);
            let slack = bracket_tol * route.value.re.abs();
            ctx.check(
                format!("gamma-bracket:{label}"),
                b.bracket.contains_within(route.value.re, slack),
                format!(
                    "[{:.6}, {:.6}] vs residue route {:.6} (slack {slack:.2e})",
                    b.bracket.lower, b.bracket.upper, route.value.re
                ),
            );
            Ok(())
        })?;
    }
    Ok(())
}

pub(super) fn l2_sharpness(ctx: &mut Ctx) -> Result<(), RunError> {
    let cfg = ctx.cfg;
    let g = cfg.symbol.to_symbol::<f64>()?;
    let stable = cfg.tol("stable_ratio")?;
    let growth = cfg.tol("growth_ratio")?;
    let within = cfg.tol("bracket_rel")?;
    let band = cfg.band();
    for spec in &cfg.functions {
        let f = spec.build(1)?;
        let label = spec.label();
        let in_l2 = match spec {
            FunctionSpec::PowerSingularity { a } => *a < 0.5,
            _ => lp_norm(&f, 2.0)?.value.is_finite(),
        };

        ctx.timed(&format!("refinement:{label}"), |ctx| {
            let r = l2_refinement(&f)?;
            for (lvl, v) in r.levels.iter().zip(&r.values) {
                ctx.point(format!("hs-refinement:{label}"), *lvl as u64, *v, 0.0);
            }
            for (lvl, q) in r.levels.iter().skip(1).zip(&r.ratios) {
                ctx.point(format!("hs-refinement-ratio:{label}"), *lvl as u64, *q, 0.0);
            }
            let (name, ok) = if in_l2 {
                // settled: ratios shrink and the last one is within tolerance
                let settling = r.ratios.windows(2).all(|w| w[1] <= w[0]);
                (
                    "refinement-stable",
                    settling && r.ratios.last().is_some_and(|&q| q <= stable),
                )
            } else {
                (
                    "refinement-divergent",
                    r.ratios.iter().all(|&q| q >= growth),
                )
            };
            ctx.check(
                format!("{name}:{label}"),
                ok && !r.ratios.is_empty(),
                format!("ratios {:?}, verdict {:?}", r.ratios, r.verdict),
            );
            Ok(())
        })?;

        let mut brackets = Vec::new();
        ctx.timed(&format!("compressions:{label}"), |ctx| {
            let table = fourier_coefficients(&f, band, TABLE_TOL)?;
            let route = residue_route(&table, &g, &ResidueOptions::default())?;
            ctx.point(
                format!("residue-route:{label}"),
                0,
                route.value.re,
                route.error,
            );
            for &n in &cfg.cutoffs.n_list {
                let b = dixmier_bracket(
                    &f,
                    &table,
                    &g,
                    OperatorKind::Plain { s: 1.0 },
                    n,
                    &BracketOptions::default(),
                )?;
                bracket_rows(ctx, &label, n, &b);
                brackets.push((n, b));
            }
            Ok(())
        })?;

        let target = circle_target(spec).unwrap();
        if in_l2 {
            let ok = brackets.iter().all(|(_, b)| {
                b.bracket.lower >= (1.0 - within) * target
                    && b.bracket.upper <= (1.0 + within) * target
            });
            let detail = brackets
                .iter()
                .map(|(n, b)| format!("N={n}: [{:.5}, {:.5}]", b.bracket.lower, b.bracket.upper))
                .collect::<Vec<_>>()
                .join(", ");
            ctx.check(
                format!("bracket-within:{label}"),
                ok,
                format!("{detail} vs ĥ(0)/π = {target:.5} ± {within}"),
            );
        } else {
            let sups: Vec<f64> = brackets.iter().map(|(_, b)| b.norm_one_inf).collect();
            ctx.check(
                format!("sup-growth:{label}"),
                sups.windows(2).all(|w| w[1] > w[0]),
                format!("sup γ over the cutoffs: {sups:?}"),
            );
        }
    }
    Ok(())
}

pub(super) fn l1_residue(ctx: &mut Ctx) -> Result<(), RunError> {
    let cfg = ctx.cfg;
    let g = cfg.symbol.to_symbol::<f64>()?;
    let n = cfg.cutoffs.n_list[0];
    let tol = cfg.tol("residue_rel")?;
    let mean_tol = cfg.tol("mean_rel")?;
    for spec in &cfg.functions {
        let f = spec.build(1)?;
        let label = spec.label();
        let mean = closed_form_mean(spec).ok_or_else(|| {
            RunError::Infeasible(format!(
                "{label} has no closed-form mean to compare the residue route with"
            ))
        })?;
        let target = mean / PI;
        ctx.timed(&format!("residue-route:{label}"), |ctx| {
            let table = fourier_coefficients(&f, 2 * n, TABLE_TOL)?;
            let route = residue_route(&table, &g, &ResidueOptions::default())?;
            ctx.point(
                format!("mean-quadrature:{label}"),
                0,
                table.mean().re,
                table.error(&[0]),
            );
            ctx.point(format!("mean-closed-form:{label}"), 0, mean, 0.0);
            ctx.point(
                format!("residue-route:{label}"),
                0,
                route.value.re,
                route.error,
            );
            ctx.check(
                format!("mean:{label}"),
                rel(table.mean().re, mean) <= mean_tol,
                format!(
                    "quadrature {:.15} vs closed form {mean:.15}",
                    table.mean().re
                ),
            );
            ctx.check(
                format!("residue-route:{label}"),
                rel(route.value.re, target) <= tol,
                format!("{:.9} vs ĥ(0)/π = {target:.9}", route.value.re),
            );
            // the symmetrized compression at a desk-scale cutoff, for comparison
            let b = dixmier_bracket(
                &f,
                &table,
                &g,
                OperatorKind::Symmetrized { s: 1.0 },
                n,
                &BracketOptions::default(),
            )?;
            bracket_rows(ctx, &label, n, &b);
            Ok(())
        })?;
    }
    Ok(())
}

fn battery_rows(ctx: &mut Ctx, r: &BatteryReport<f64>) {
    ctx.point(
        format!("battery-violations:{}", r.name),
        r.instances as u64,
        r.violations as f64,
        0.0,
    );
    ctx.point(
        format!("battery-worst-excess:{}", r.name),
        r.worst_instance as u64,
        r.worst_excess,
        0.0,
    );
    ctx.check(
        format!("battery:{}", r.name),
        r.violations == 0,
        format!(
            "{} violations in {} instances; worst excess {:.3e} at instance {}",
            r.violations, r.instances, r.worst_excess, r.worst_instance
        ),
    );
}

pub(super) fn l1_plus_eps(ctx: &mut Ctx) -> Result<(), RunError> {
    let cfg = ctx.cfg;
    let g = cfg.symbol.to_symbol::<f64>()?;
    let n = cfg.cutoffs.n_list[0];
    let p = cfg.cutoffs.s_grid[0];
    let slack = cfg.tol("bound_slack")?;
    let kind = OperatorKind::Symmetrized { s: 1.0 };
    for spec in &cfg.functions {
        let f = spec.build(1)?;
        let label = spec.label();
        let target = circle_target(spec).ok_or_else(|| {
            RunError::Infeasible(format!("{label} has no closed-form Dixmier trace"))
        })?;
        let (table, spectrum) = ctx.timed(&format!("spectrum:{label}"), |_| {
            let table: FourierTable<f64> = fourier_coefficients(&f, 2 * n, TABLE_TOL)?;
            let c = compress(&table, &g, kind, n)?;
            let spectrum = singular_spectrum(&c)?;
            Ok((table, spectrum))
        })?;

        let route = residue_route(&table, &g, &ResidueOptions::default())?;
        ctx.point(
            format!("residue-route:{label}"),
            0,
            route.value.re,
            route.error,
        );
        let b = bracket_from_spectrum(
            &f,
            &table,
            &g,
            kind,
            n,
            &spectrum,
            &BracketOptions::default(),
        )?;
        bracket_rows(ctx, &label, n, &b);
        let half = b.bracket.half_width();
        ctx.check(
            format!("gamma-bracket:{label}"),
            b.bracket.contains(target) && half <= cfg.tol("bracket_half_width_rel")? * target,
            format!(
                "[{:.6}, {:.6}] vs ĥ(0)/π = {target:.6}, half-width {:.2}%",
                b.bracket.lower,
                b.bracket.upper,
                100.0 * half / target
            ),
        );

        let norm = lp_norm(&f, p)?;
        ctx.point(format!("lp-norm:{label}"), 0, norm.value, norm.error);
        if !norm.value.is_finite() {
            ctx.check(
                format!("lp-norm:{label}"),
                false,
                format!("f is not in L^{p}"),
            );
            continue;
        }
        let bound = norm.value + norm.error;
        let grid = reliable_s_grid::<f64>(1, spectrum.len(), Some(p));
        let z1 = z1_comparison(&spectrum, kind, bound, &g, 1, &grid)?;
        ctx.point(
            format!("z1-operator:{label}"),
            n as u64,
            z1.operator_z1,
            0.0,
        );
        ctx.point(format!("z1-symbol:{label}"), n as u64, z1.symbol_z1, 0.0);
        ctx.row(
            format!("z1-bound:{label}"),
            n as u64,
            z1.operator_z1,
            0.0,
            z1.operator_z1,
            bound * z1.symbol_z1,
        );
        ctx.check(
            format!("z1-bound:{label}"),
            z1.relative_excess <= slack,
            format!(
                "Z₁(C) = {:.6} ≤ ‖f‖_{p}·Z₁(G) = {:.6} on s ∈ {:?}",
                z1.operator_z1,
                bound * z1.symbol_z1,
                z1.grid
            ),
        );
        let curve = schatten_bound_curve(&spectrum, kind, bound, &g, 1, n, &grid)?;
        for (j, c) in curve.iter().enumerate() {
            ctx.row(
                format!("schatten-bound:{label}"),
                j as u64 + 1,
                c.lhs,
                0.0,
                c.lhs,
                c.rhs,
            );
        }
        let worst = curve
            .iter()
            .map(|c| c.relative_excess())
            .fold(f64::NEG_INFINITY, f64::max);
        ctx.check(
            format!("schatten-bound:{label}"),
            worst <= slack,
            format!("worst relative excess {worst:.3e} over s ∈ {grid:?}"),
        );
    }

    let seed = cfg.seed;
    let count = cfg.instances;
    let dim = cfg.tol("battery_max_dim")? as usize;
    let bslack = cfg.tol("battery_slack")?;
    ctx.timed("matrix-batteries", |ctx| {
        let sym = symmetrization_battery::<f64>(seed, count, dim, bslack)?;
        let three = three_line_battery::<f64>(seed, count, dim, bslack)?;
        let (upper, lower) = interpolation_battery::<f64>(seed, count, dim, bslack)?;
        for r in [&sym, &three, &upper, &lower] {
            battery_rows(ctx, r);
        }
        Ok(())
    })
}

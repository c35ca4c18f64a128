//! Probes of domination, tail decay and countable additivity.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extrapolation::richardson_halving;
use crate::scalar::Real;
use crate::sequence_limits::{gamma_sequence, limit_bracket, LimitBracket, DEFAULT_WINDOW};
use crate::special::pairwise_sum;
use crate::spectral_lattice::{lap_eigenvalue, mode_count, ranked_norms, s_grid, ResidueOptions};
use crate::torus_operators::{fourier_coefficients, TorusFunction};

use super::{mu_s, DensityFamily, DiagonalModel, MeasureSet, ModelFunction, Spectrum};

/// Candidate l ∈ L¹(F, μ) for |Uh_m|² ≤ l.
#[derive(Clone, Debug, PartialEq)]
pub enum Dominator<T> {
    Constant(T),
    /// l_m at atoms 1, 2, …; zero beyond the list.
    Sequence(Vec<T>),
    /// l_m = scale·m^{-exponent}.
    PowerDecay {
        scale: T,
        exponent: T,
    },
    Function(TorusFunction<T>),
}

/// A mode and location where |Uh_m|² exceeds l.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<T> {
    pub mode: usize,
    pub point: Option<Vec<T>>,
    pub density: T,
    pub candidate: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DominationReport<T> {
    pub passed: bool,
    /// ‖l‖₁ when it is known; +∞ for non-summable candidates.
    pub l1_norm: T,
    pub witness: Option<Witness<T>>,
}

pub fn domination_check<T: Real>(
    model: &DiagonalModel<T>,
    l: &Dominator<T>,
    tol: T,
) -> Result<DominationReport<T>> {
    model.validate()?;
    let need = T::one() - tol;
    match model.density {
        DensityFamily::Constant => {
            // |Uh_m(x)|² = 1 for every m and x
            let n = match model.spectrum {
                Spectrum::Torus { n } => n,
                _ => 1,
            };
            let (min_at, min_val, l1) = match l {
                Dominator::Constant(c) => (vec![T::zero(); n], *c, c.abs()),
                Dominator::Function(f) => {
                    if f.dimension() != n {
                        return Err(Error::Invalid(
                            "dominator dimension differs from the model".into(),
                        ));
                    }
                    let (x, v) = function_minimum(f)?;
                    let l1 = crate::torus_operators::lp_norm(f, T::one())?.value;
                    (x, v, l1)
                }
                _ => {
                    return Err(Error::Invalid(
                        "constant-density models take constant or function dominators".into(),
                    ))
                }
            };
            let passed = min_val >= need;
            Ok(DominationReport {
                passed,
                l1_norm: l1,
                witness: (!passed).then(|| Witness {
                    mode: 1,
                    point: Some(min_at),
                    density: T::one(),
                    candidate: min_val,
                }),
            })
        }
        DensityFamily::Atoms => {
            let cap = match &model.spectrum {
                Spectrum::Explicit(v) => Some(v.len()),
                _ => None,
            };
            let (first_bad, l1) = match l {
                Dominator::Constant(c) => (
                    (*c < need).then_some(1),
                    if *c == T::zero() {
                        T::zero()
                    } else {
                        T::infinity()
                    },
                ),
                Dominator::Sequence(v) => {
                    let pos = v
                        .iter()
                        .position(|x| *x < need)
                        .map(|i| i + 1)
                        .unwrap_or(v.len() + 1);
                    let abs: Vec<T> = v.iter().map(|x| x.abs()).collect();
                    (Some(pos), pairwise_sum(&abs))
                }
                Dominator::PowerDecay { scale, exponent } => {
                    let l1 = if *exponent > T::one() {
                        scale.abs() * crate::special::hurwitz_zeta(*exponent, T::one())
                    } else {
                        T::infinity()
                    };
                    if *exponent <= T::zero() {
                        ((*scale < need).then_some(1), l1)
                    } else {
                        // first m with scale·m^{-p} < 1 − tol
                        let m0 = (*scale / need)
                            .powf(exponent.recip())
                            .floor()
                            .to_usize()
                            .unwrap_or(0);
                        let mut m = m0.max(1);
                        while m > 1 && *scale * T::of(m - 1).powf(-*exponent) < need {
                            m -= 1;
                        }
                        while *scale * T::of(m).powf(-*exponent) >= need {
                            m += 1;
                        }
                        (Some(m), l1)
                    }
                }
                Dominator::Function(_) => {
                    return Err(Error::Invalid(
                        "atomic models take sequence dominators".into(),
                    ))
                }
            };
            let first_bad = first_bad.filter(|m| cap.is_none_or(|c| *m <= c));
            let candidate_at = |m: usize| match l {
                Dominator::Constant(c) => *c,
                Dominator::Sequence(v) => v.get(m - 1).copied().unwrap_or(T::zero()),
                Dominator::PowerDecay { scale, exponent } => *scale * T::of(m).powf(-*exponent),
                Dominator::Function(_) => T::zero(),
            };
            Ok(DominationReport {
                passed: first_bad.is_none(),
                l1_norm: l1,
                witness: first_bad.map(|m| Witness {
                    mode: m,
                    point: None,
                    density: T::one(),
                    candidate: candidate_at(m),
                }),
            })
        }
    }
}

fn function_minimum<T: Real>(f: &TorusFunction<T>) -> Result<(Vec<T>, T)> {
    match f {
        TorusFunction::TrigPoly(p) => {
            let m = if p.n == 1 {
                64 * (p.band() + 1)
            } else {
                16 * (p.band() + 1)
            };
            let vals = p.sample_grid(m);
            let (i, v) = vals
                .iter()
                .enumerate()
                .map(|(i, z)| (i, z.re))
                .fold((0, T::infinity()), |b, t| if t.1 < b.1 { t } else { b });
            let mut x = vec![T::zero(); p.n];
            let mut r = i;
            for d in (0..p.n).rev() {
                x[d] = T::of(r % m) / T::of(m);
                r /= m;
            }
            Ok((x, v))
        }
        _ => {
            let m = 4096;
            let (i, v) = (0..m)
                .map(|i| (i, f.eval_1d((T::of(i) + T::lit(0.5)) / T::of(m))))
                .fold((0, T::infinity()), |b, t| if t.1 < b.1 { t } else { b });
            Ok((vec![(T::of(i) + T::lit(0.5)) / T::of(m)], v))
        }
    }
}

/// γ of G(λ_m) over ranks N+1 … N+K.
#[derive(Clone, Debug, PartialEq)]
pub struct TailSeminorm<T> {
    pub start: usize,
    pub length: usize,
    /// Riesz-seminorm estimate: max of γ over the trailing window.
    pub value: T,
    /// γ_K.
    pub last: T,
    pub bracket: LimitBracket<T>,
}

pub fn tail_seminorm<T: Real>(
    model: &DiagonalModel<T>,
    start: usize,
    length: usize,
) -> Result<TailSeminorm<T>> {
    model.validate()?;
    if length == 0 {
        return Err(Error::Invalid("tail window must be nonempty".into()));
    }
    let total = start + length;
    let mu: Vec<T> = match &model.spectrum {
        Spectrum::Natural => (start + 1..=total)
            .into_par_iter()
            .map(|m| model.symbol.eval(T::of(m)))
            .collect(),
        Spectrum::Explicit(v) => {
            if v.len() < total {
                return Err(Error::Invalid(format!(
                    "only {} eigenvalues, need {total}",
                    v.len()
                )));
            }
            v[start..total]
                .iter()
                .map(|l| model.symbol.eval(l.abs()))
                .collect()
        }
        Spectrum::Torus { n } => {
            let mut cutoff = 1usize;
            while mode_count(*n, cutoff) < total {
                cutoff *= 2;
            }
            let norms = ranked_norms(*n, cutoff)?;
            norms[start..total]
                .par_iter()
                .map(|&m2| model.symbol.eval(lap_eigenvalue(m2)))
                .collect()
        }
    };
    let g = gamma_sequence(&mu)?;
    let bracket = limit_bracket(&g.as_sequence(), DEFAULT_WINDOW)?;
    Ok(TailSeminorm {
        start,
        length,
        value: bracket.upper,
        last: *g.gamma.last().unwrap(),
        bracket,
    })
}

/// Countable families {F_j} covering F.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partition {
    /// The single piece F.
    Trivial,
    /// F_j = [2^{-j}, 2^{1-j}) × [0,1)^{n−1}, j ≥ 1.
    Dyadic,
    /// F_j = {j}.
    Atoms,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdditivityVerdict {
    /// Tail values fall toward 0.
    Consistent,
    /// Tail values stay bounded below: ν is not countably additive.
    Failure,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdditivityReport<T> {
    pub total: T,
    /// (j, ν(F_j)).
    pub pieces: Vec<(usize, T)>,
    /// (N, ν(∪_{j≥N} F_j)).
    pub tails: Vec<(usize, T)>,
    pub piece_sum: T,
    pub verdict: AdditivityVerdict,
}

fn piece<T: Real>(partition: Partition, j: usize, tail: bool, n: usize) -> MeasureSet<T> {
    match partition {
        Partition::Trivial => MeasureSet::Full,
        Partition::Atoms => {
            if tail {
                MeasureSet::AtomRange { from: j, to: None }
            } else {
                MeasureSet::Atoms(vec![j])
            }
        }
        Partition::Dyadic => {
            let hi = T::lit(2f64.powi(1 - j as i32));
            let lo = if tail { T::zero() } else { hi / T::lit(2.0) };
            let mut b = vec![(lo, hi)];
            b.extend(std::iter::repeat_n((T::zero(), T::one()), n - 1));
            MeasureSet::Boxes(vec![b])
        }
    }
}

/// ν(J) = lim_{s↓1} (s−1)μ_s(J) by Richardson extrapolation on the residue grid.
pub fn residue_measure<T: Real>(
    model: &DiagonalModel<T>,
    set: &MeasureSet<T>,
    opts: &ResidueOptions,
) -> Result<T> {
    let samples = s_grid::<T>(opts.j_min, opts.j_max)
        .into_iter()
        .map(|s| Ok((s - T::one()) * mu_s(model, set, s)?.value))
        .collect::<Result<Vec<T>>>()?;
    Ok(richardson_halving(&samples, opts.order).value)
}

pub fn additivity_probe<T: Real>(
    model: &DiagonalModel<T>,
    partition: Partition,
    levels: &[usize],
    opts: &ResidueOptions,
) -> Result<AdditivityReport<T>> {
    model.validate()?;
    let n = match model.spectrum {
        Spectrum::Torus { n } => n,
        _ => 1,
    };
    match (partition, model.density) {
        (Partition::Dyadic, DensityFamily::Atoms) | (Partition::Atoms, DensityFamily::Constant) => {
            return Err(Error::Invalid(
                "partition does not match the density family".into(),
            ))
        }
        _ => {}
    }
    let total = residue_measure(model, &MeasureSet::Full, opts)?;
    if partition == Partition::Trivial {
        return Ok(AdditivityReport {
            total,
            pieces: vec![(1, total)],
            tails: vec![(1, total)],
            piece_sum: total,
            verdict: AdditivityVerdict::Consistent,
        });
    }
    if levels.is_empty() || levels.contains(&0) {
        return Err(Error::Invalid("levels must be positive".into()));
    }
    let max_level = *levels.iter().max().unwrap();
    let pieces = (1..=max_level)
        .into_par_iter()
        .map(|j| {
            Ok((
                j,
                residue_measure(model, &piece(partition, j, false, n), opts)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let tails = levels
        .par_iter()
        .map(|&l| {
            Ok((
                l,
                residue_measure(model, &piece(partition, l, true, n), opts)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let piece_sum = pairwise_sum(&pieces.iter().map(|p| p.1).collect::<Vec<_>>());
    let min_tail = tails.iter().map(|t| t.1).fold(T::infinity(), T::min);
    let last = tails.iter().max_by_key(|t| t.0).unwrap().1;
    let monotone = {
        let mut sorted = tails.clone();
        sorted.sort_by_key(|t| t.0);
        sorted
            .windows(2)
            .all(|w| w[1].1 <= w[0].1 + T::epsilon() * total.abs() * T::lit(16.0))
    };
    let verdict = if min_tail >= T::lit(0.5) * total {
        AdditivityVerdict::Failure
    } else if monotone && last.abs() <= T::lit(0.01) * total.abs() {
        AdditivityVerdict::Consistent
    } else {
        AdditivityVerdict::Inconclusive
    };
    Ok(AdditivityReport {
        total,
        pieces,
        tails,
        piece_sum,
        verdict,
    })
}

/// A bounded test function h for ∫ h·V_k dμ.
#[derive(Clone, Debug, PartialEq)]
pub enum TestFunction<T> {
    Indicator(MeasureSet<T>),
    Function(ModelFunction<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeakLimitRow<T> {
    /// (k, k⁻¹∫ h dμ_{1+1/k}).
    pub values: Vec<(usize, T)>,
    pub bracket: LimitBracket<T>,
}

fn integrate_against<T: Real>(model: &DiagonalModel<T>, h: &TestFunction<T>, s: T) -> Result<T> {
    match h {
        TestFunction::Indicator(set) => Ok(mu_s(model, set, s)?.value),
        TestFunction::Function(ModelFunction::Constant(c)) => {
            Ok(*c * mu_s(model, &MeasureSet::Full, s)?.value)
        }
        TestFunction::Function(ModelFunction::Torus(f)) => {
            if model.density != DensityFamily::Constant {
                return Err(Error::Invalid(
                    "torus test functions need a constant-density model".into(),
                ));
            }
            let mean = fourier_coefficients(f, 0, T::lit(1e-8))?.mean().re;
            Ok(mean * mu_s(model, &MeasureSet::Full, s)?.value)
        }
        TestFunction::Function(ModelFunction::Atoms(v)) => {
            let terms = v
                .iter()
                .enumerate()
                .map(|(i, x)| Ok(*x * mu_s(model, &MeasureSet::Atoms(vec![i + 1]), s)?.value))
                .collect::<Result<Vec<T>>>()?;
            Ok(pairwise_sum(&terms))
        }
    }
}

/// ∫ h·V_k dμ with V_k = k⁻¹F_D(G^{1+1/k}) along a k-grid; bracketed over the
/// trailing half of the grid.
pub fn weak_limit_probe<T: Real>(
    model: &DiagonalModel<T>,
    tests: &[TestFunction<T>],
    k_grid: &[usize],
) -> Result<Vec<WeakLimitRow<T>>> {
    model.validate()?;
    if k_grid.is_empty() || k_grid.contains(&0) {
        return Err(Error::Invalid("k-grid must be positive".into()));
    }
    tests
        .iter()
        .map(|h| {
            let values = k_grid
                .iter()
                .map(|&k| {
                    let kk = T::of(k);
                    Ok((k, integrate_against(model, h, T::one() + kk.recip())? / kk))
                })
                .collect::<Result<Vec<_>>>()?;
            let seq = crate::sequence_limits::BoundedSequence::computed(
                values.iter().map(|v| v.1).collect(),
            )?;
            let bracket = limit_bracket(&seq, DEFAULT_WINDOW)?;
            Ok(WeakLimitRow { values, bracket })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_atoms_escape_power_decay() {
        let m = DiagonalModel::<f64>::harmonic_sequence();
        let r = domination_check(
            &m,
            &Dominator::PowerDecay {
                scale: 10.0,
                exponent: 2.0,
            },
            1e-12,
        )
        .unwrap();
        assert!(!r.passed);
        let w = r.witness.unwrap();
        assert_eq!(w.mode, 4);
        assert!(w.candidate < 1.0);
        assert!(r.l1_norm.is_finite());
    }

    #[test]
    fn torus_constant_domination() {
        let m = DiagonalModel::<f64>::torus(1);
        assert!(
            domination_check(&m, &Dominator::Constant(1.0), 1e-12)
                .unwrap()
                .passed
        );
        let r = domination_check(&m, &Dominator::Constant(0.5), 1e-12).unwrap();
        assert!(!r.passed && r.witness.is_some());
    }

    #[test]
    fn sequence_tail_does_not_decay() {
        let m = DiagonalModel::<f64>::harmonic_sequence();
        let t = tail_seminorm(&m, 10, 10_000).unwrap();
        let h = |k: usize| (1..=k).map(|j| 1.0 / j as f64).sum::<f64>();
        let oracle = (h(10_010) - h(10)) / (10_001f64).ln();
        assert!((t.value - oracle).abs() < 1e-12);
    }

    #[test]
    fn singleton_atoms_carry_no_residue() {
        let m = DiagonalModel::<f64>::harmonic_sequence();
        let r = additivity_probe(
            &m,
            Partition::Atoms,
            &[1, 10, 100],
            &ResidueOptions::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, AdditivityVerdict::Failure);
        assert!(r.piece_sum.abs() < 1e-3);
        assert!((r.total - 1.0).abs() < 1e-6);
    }
}

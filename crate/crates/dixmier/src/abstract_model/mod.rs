//! Diagonal models (F, μ, {h_m}, {λ_m}, G): spectral densities, the measures
//! μ_s and weak norms, with probes for normality of the Dixmier functional.

mod probes;

pub use probes::{
    additivity_probe, domination_check, tail_seminorm, weak_limit_probe, AdditivityReport,
    AdditivityVerdict, DominationReport, Dominator, Partition, TailSeminorm, TestFunction,
    WeakLimitRow, Witness,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{hurwitz_from, hurwitz_zeta, pairwise_sum};
use crate::spectral_lattice::{zeta_sum, ResidueOptions, SymbolFunction};
use crate::torus_operators::{lp_norm, TorusFunction};

/// Eigenvalues λ_m of D, nondecreasing in |λ|.
#[derive(Clone, Debug, PartialEq)]
pub enum Spectrum<T> {
    /// Laplacian on T^n, modes in lattice rank order.
    Torus { n: usize },
    /// λ_m = m, m = 1, 2, …
    Natural,
    /// A finite list.
    Explicit(Vec<T>),
}

/// How |Uh_m|² sits on F.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityFamily {
    /// |Uh_m|² ≡ 1 on a probability space.
    Constant,
    /// |Uh_m|² is a unit mass at atom m.
    Atoms,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalModel<T> {
    pub label: String,
    pub spectrum: Spectrum<T>,
    pub density: DensityFamily,
    pub symbol: SymbolFunction<T>,
}

impl<T: Real> DiagonalModel<T> {
    /// T^n with G = (1+Δ)^{-n/2}.
    pub fn torus(n: usize) -> Self {
        Self {
            label: format!("torus-{n}"),
            spectrum: Spectrum::Torus { n },
            density: DensityFamily::Constant,
            symbol: SymbolFunction::canonical(n),
        }
    }

    /// ℓ² with D h_m = m h_m and G(λ) = 1/λ.
    pub fn harmonic_sequence() -> Self {
        Self {
            label: "harmonic-sequence".into(),
            spectrum: Spectrum::Natural,
            density: DensityFamily::Atoms,
            symbol: SymbolFunction::InversePower { order: T::one() },
        }
    }

    pub fn with_symbol(mut self, symbol: SymbolFunction<T>) -> Self {
        self.symbol = symbol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.symbol.validate()?;
        match (&self.spectrum, self.density) {
            (Spectrum::Torus { n }, DensityFamily::Constant) => {
                if !(1..=3).contains(n) {
                    return Err(Error::UnsupportedDimension(*n));
                }
            }
            (Spectrum::Torus { .. }, DensityFamily::Atoms) => {
                return Err(Error::Invalid("torus modes have constant densities".into()));
            }
            (Spectrum::Natural, _) => {
                if !matches!(self.symbol, SymbolFunction::InversePower { .. }) {
                    return Err(Error::Invalid(
                        "the natural spectrum is paired with an inverse_power symbol".into(),
                    ));
                }
            }
            (Spectrum::Explicit(v), _) => {
                if v.is_empty() || v.windows(2).any(|w| w[1].abs() < w[0].abs()) {
                    return Err(Error::Invalid(
                        "explicit eigenvalues must be nonempty and sorted by |λ|".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Sum of G(λ_m)^s over atoms (1-based) in the set, or over all modes for
    /// the whole space.
    fn atom_sum(&self, set: &MeasureSet<T>, s: T) -> Result<T> {
        let q = match &self.symbol {
            SymbolFunction::InversePower { order } => *order * s,
            _ => T::zero(),
        };
        let weight = |m: usize| -> T {
            match &self.spectrum {
                Spectrum::Explicit(v) => self.symbol.power(v[m - 1].abs(), s),
                _ => self.symbol.power(T::of(m), s),
            }
        };
        let finite_sum = |atoms: &mut dyn Iterator<Item = usize>| -> T {
            let v: Vec<T> = atoms.map(weight).collect();
            pairwise_sum(&v)
        };
        if let Spectrum::Explicit(v) = &self.spectrum {
            let len = v.len();
            let ok = |m: &usize| *m >= 1 && *m <= len;
            return Ok(match set {
                MeasureSet::Full => finite_sum(&mut (1..=len)),
                MeasureSet::Atoms(a) => finite_sum(&mut a.iter().copied().filter(ok)),
                MeasureSet::AtomRange { from, to } => {
                    let hi = to.unwrap_or(len).min(len);
                    finite_sum(&mut ((*from).max(1)..=hi))
                }
                MeasureSet::EvenAtoms => finite_sum(&mut (2..=len).step_by(2)),
                MeasureSet::OddAtoms => finite_sum(&mut (1..=len).step_by(2)),
                MeasureSet::Boxes(_) => {
                    return Err(Error::Invalid("boxes are not atom sets".into()))
                }
            });
        }
        if !(q > T::one()) {
            return Err(Error::Divergent {
                s: s.to_f64_lossy(),
                threshold: (q / s).recip().to_f64_lossy(),
            });
        }
        let two = T::lit(2.0);
        Ok(match set {
            MeasureSet::Full => hurwitz_zeta(q, T::one()),
            MeasureSet::Atoms(a) => finite_sum(&mut a.iter().copied().filter(|m| *m >= 1)),
            MeasureSet::AtomRange { from, to: Some(to) } => finite_sum(&mut ((*from).max(1)..=*to)),
            MeasureSet::AtomRange { from, to: None } => {
                hurwitz_from(q, T::one(), from.saturating_sub(1))
            }
            MeasureSet::EvenAtoms => two.powf(-q) * hurwitz_zeta(q, T::one()),
            MeasureSet::OddAtoms => two.powf(-q) * hurwitz_zeta(q, T::lit(0.5)),
            MeasureSet::Boxes(_) => return Err(Error::Invalid("boxes are not atom sets".into())),
        })
    }

    /// μ_s(F) = Tr(G(D)^s).
    pub fn total_mass(&self, s: T) -> Result<T> {
        match &self.spectrum {
            Spectrum::Torus { n } => {
                let cutoff = ResidueOptions::default().cutoff_for(*n);
                Ok(zeta_sum(&self.symbol, s, *n, cutoff)?.estimate())
            }
            _ => self.atom_sum(&MeasureSet::Full, s),
        }
    }

    fn space_dimension(&self) -> usize {
        match self.spectrum {
            Spectrum::Torus { n } => n,
            _ => 1,
        }
    }
}

/// Subsets of F.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasureSet<T> {
    Full,
    /// Disjoint half-open boxes in [0,1)^n, each a list of n intervals.
    Boxes(Vec<Vec<(T, T)>>),
    /// Finite set of atoms, 1-based.
    Atoms(Vec<usize>),
    /// Atoms from..=to; `to = None` runs to infinity.
    AtomRange {
        from: usize,
        to: Option<usize>,
    },
    EvenAtoms,
    OddAtoms,
}

impl<T: Real> MeasureSet<T> {
    /// Lebesgue measure of a box set on [0,1)^n.
    pub fn lebesgue(&self, n: usize) -> Result<T> {
        match self {
            MeasureSet::Full => Ok(T::one()),
            MeasureSet::Boxes(boxes) => {
                let mut v = Vec::with_capacity(boxes.len());
                for b in boxes {
                    if b.len() != n {
                        return Err(Error::Invalid(
                            "box dimension differs from the model".into(),
                        ));
                    }
                    let mut vol = T::one();
                    for &(lo, hi) in b {
                        if !(T::zero() <= lo && lo <= hi && hi <= T::one()) {
                            return Err(Error::Invalid(format!(
                                "interval [{lo}, {hi}) outside [0, 1]"
                            )));
                        }
                        vol = vol * (hi - lo);
                    }
                    v.push(vol);
                }
                Ok(pairwise_sum(&v))
            }
            _ => Err(Error::Invalid("atom sets have no Lebesgue measure".into())),
        }
    }
}

/// Where F_D is evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelPoint<T> {
    Point(Vec<T>),
    Atom(usize),
}

/// F_D(G^s) = Σ_m G(λ_m)^s |Uh_m|² at a point or atom.
pub fn density_f_d<T: Real>(model: &DiagonalModel<T>, s: T, at: &ModelPoint<T>) -> Result<T> {
    model.validate()?;
    match (model.density, at) {
        (DensityFamily::Constant, ModelPoint::Point(x)) => {
            if x.len() != model.space_dimension() {
                return Err(Error::Invalid(
                    "point dimension differs from the model".into(),
                ));
            }
            model.total_mass(s)
        }
        (DensityFamily::Atoms, ModelPoint::Atom(m)) => {
            model.atom_sum(&MeasureSet::Atoms(vec![*m]), s)
        }
        _ => Err(Error::Invalid(
            "point kind does not match the density family".into(),
        )),
    }
}

/// μ_s(J).
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureEstimate<T> {
    pub set: MeasureSet<T>,
    pub s: T,
    pub value: T,
}

pub fn mu_s<T: Real>(
    model: &DiagonalModel<T>,
    set: &MeasureSet<T>,
    s: T,
) -> Result<MeasureEstimate<T>> {
    model.validate()?;
    let value = match model.density {
        DensityFamily::Constant => {
            let frac = match set {
                MeasureSet::Full | MeasureSet::Boxes(_) => set.lebesgue(model.space_dimension())?,
                _ => return Err(Error::Invalid("atom sets need an atomic model".into())),
            };
            frac * model.total_mass(s)?
        }
        DensityFamily::Atoms => model.atom_sum(set, s)?,
    };
    Ok(MeasureEstimate {
        set: set.clone(),
        s,
        value,
    })
}

/// f as seen by the model.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelFunction<T> {
    Constant(T),
    Torus(TorusFunction<T>),
    /// Values at atoms 1, 2, …; zero beyond the list.
    Atoms(Vec<T>),
}

/// ‖f‖_{p,μ_s}.
pub fn lp_mu_s<T: Real>(model: &DiagonalModel<T>, f: &ModelFunction<T>, p: T, s: T) -> Result<T> {
    if !(p >= T::one()) {
        return Err(Error::Invalid(format!("p = {p} must be ≥ 1")));
    }
    match (f, model.density) {
        (ModelFunction::Constant(c), _) => {
            if p.is_infinite() {
                return Ok(c.abs());
            }
            Ok(c.abs() * model.total_mass(s)?.powf(p.recip()))
        }
        (ModelFunction::Torus(g), DensityFamily::Constant) => {
            if g.dimension() != model.space_dimension() {
                return Err(Error::Invalid(
                    "function dimension differs from the model".into(),
                ));
            }
            let norm = lp_norm(g, p)?.value;
            if p.is_infinite() {
                return Ok(norm);
            }
            Ok(model.total_mass(s)?.powf(p.recip()) * norm)
        }
        (ModelFunction::Atoms(v), DensityFamily::Atoms) => {
            if p.is_infinite() {
                return Ok(v.iter().map(|x| x.abs()).fold(T::zero(), T::max));
            }
            let terms = v
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    Ok(x.abs().powf(p) * model.atom_sum(&MeasureSet::Atoms(vec![i + 1]), s)?)
                })
                .collect::<Result<Vec<T>>>()?;
            Ok(pairwise_sum(&terms).powf(p.recip()))
        }
        _ => Err(Error::Invalid(
            "function kind does not match the density family".into(),
        )),
    }
}

/// ‖f‖_{1,∞,p} = sup over the grid of (s−1)^{1/p}‖f‖_{p,μ_s}.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakNormValue<T> {
    pub p: T,
    /// +∞ when f ∉ L^p(μ_s) at some grid point.
    pub value: T,
    pub arg_s: T,
    pub terms: Vec<(T, T)>,
}

/// s_j = 1 + 2^{-j}, j = 0..=10 (s = 2 included).
pub fn weak_norm_grid<T: Real>() -> Vec<T> {
    (0..=10).map(|j| T::one() + T::lit(2f64.powi(-j))).collect()
}

pub fn weak_norm<T: Real>(
    model: &DiagonalModel<T>,
    f: &ModelFunction<T>,
    p: T,
    grid: &[T],
) -> Result<WeakNormValue<T>> {
    model.validate()?;
    if grid.is_empty() || grid.iter().any(|s| !(*s > T::one() && *s <= T::lit(2.0))) {
        return Err(Error::Invalid("weak-norm grid must lie in (1, 2]".into()));
    }
    let expo = if p.is_infinite() {
        T::zero()
    } else {
        p.recip()
    };
    let terms = grid
        .iter()
        .map(|&s| Ok((s, (s - T::one()).powf(expo) * lp_mu_s(model, f, p, s)?)))
        .collect::<Result<Vec<_>>>()?;
    let (arg_s, value) = terms
        .iter()
        .copied()
        .fold((grid[0], T::neg_infinity()), |best, t| {
            if t.1 > best.1 {
                t
            } else {
                best
            }
        });
    Ok(WeakNormValue {
        p,
        value,
        arg_s,
        terms,
    })
}

/// JSON model definition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDefinition {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
    /// "torus" or "natural" when `eigenvalues` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalue_rule: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub density: DensityFamily,
    pub symbol: SymbolDefinition,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolDefinition {
    /// "power_resolvent" or "inverse_power".
    pub kind: String,
    pub order: f64,
}

impl SymbolDefinition {
    pub fn to_symbol<T: Real>(&self) -> Result<SymbolFunction<T>> {
        let order = T::lit(self.order);
        let g = match self.kind.as_str() {
            "power_resolvent" => SymbolFunction::PowerResolvent { order },
            "inverse_power" => SymbolFunction::InversePower { order },
            other => return Err(Error::Invalid(format!("unknown symbol kind {other:?}"))),
        };
        g.validate()?;
        Ok(g)
    }
}

impl ModelDefinition {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("model definition: {e}")))
    }

    pub fn to_model<T: Real>(&self) -> Result<DiagonalModel<T>> {
        let spectrum = match (&self.eigenvalues, self.eigenvalue_rule.as_deref()) {
            (Some(v), None) => Spectrum::Explicit(v.iter().map(|&x| T::lit(x)).collect()),
            (None, Some("natural")) => Spectrum::Natural,
            (None, Some("torus")) => Spectrum::Torus {
                n: self.dimension.unwrap_or(1),
            },
            _ => {
                return Err(Error::Invalid(
                    "give exactly one of eigenvalues or eigenvalue_rule (torus | natural)".into(),
                ))
            }
        };
        let model = DiagonalModel {
            label: self.label.clone(),
            spectrum,
            density: self.density,
            symbol: self.symbol.to_symbol()?,
        };
        model.validate()?;
        Ok(model)
    }
}

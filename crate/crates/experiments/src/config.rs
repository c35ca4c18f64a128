//! Experiment configuration: one JSON document per run.

use std::collections::BTreeMap;
use std::fmt;

use dixmier::abstract_model::{DensityFamily, ModelDefinition, SymbolDefinition};
use dixmier::torus_operators::{TorusFunction, TrigPoly};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::RunError;

#[derive(
    Clone,
    Copy,
    Debug,
    PartialEq,
    Eq,
    PartialOrd,
    Ord,
    Hash,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    LInfinityIdentity,
    L2Sharpness,
    L1Residue,
    L1Counterexample,
    L1PlusEps,
    NonNormalWitness,
    LimitsBattery,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 7] = [
        Self::LInfinityIdentity,
        Self::L2Sharpness,
        Self::L1Residue,
        Self::L1Counterexample,
        Self::L1PlusEps,
        Self::NonNormalWitness,
        Self::LimitsBattery,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::LInfinityIdentity => "l-infinity-identity",
            Self::L2Sharpness => "l2-sharpness",
            Self::L1Residue => "l1-residue",
            Self::L1Counterexample => "l1-counterexample",
            Self::L1PlusEps => "l1-plus-eps",
            Self::NonNormalWitness => "non-normal-witness",
            Self::LimitsBattery => "limits-battery",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A term c·e^{2πi⟨m,t⟩}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub m: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Constant {
        value: f64,
    },
    /// a0 + Σ cos_k cos(2πkt) + Σ sin_k sin(2πkt).
    Cosine {
        a0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    TrigPoly {
        terms: Vec<Term>,
    },
    /// `instances` seeded random polynomials of the given band.
    RandomTrigPoly {
        band: usize,
    },
    PowerSingularity {
        a: f64,
    },
    LogPower {
        eps: f64,
    },
}

impl FunctionSpec {
    pub fn label(&self) -> String {
        match self {
            Self::Constant { value } => format!("constant({value})"),
            Self::Cosine { a0, cos, sin } => format!("cosine(a0={a0},cos={cos:?},sin={sin:?})"),
            Self::TrigPoly { terms } => format!("trig_poly({} terms)", terms.len()),
            Self::RandomTrigPoly { band } => format!("random_trig_poly(band={band})"),
            Self::PowerSingularity { a } => format!("power_singularity(a={a})"),
            Self::LogPower { eps } => format!("log_power(eps={eps})"),
        }
    }

    /// The concrete function; random polynomials need the battery generator
    /// and are built elsewhere.
    pub fn build(&self, n: usize) -> Result<TorusFunction<f64>, RunError> {
        let f = match self {
            Self::Constant { value } => TorusFunction::TrigPoly(TrigPoly::constant(n, *value)),
            Self::Cosine { a0, cos, sin } => {
                if n != 1 {
                    return Err(RunError::Infeasible(
                        "cosine functions are one-dimensional".into(),
                    ));
                }
                TorusFunction::TrigPoly(TrigPoly::real_1d(*a0, cos, sin))
            }
            Self::TrigPoly { terms } => {
                let coeffs: BTreeMap<Vec<i64>, Complex<f64>> = terms
                    .iter()
                    .map(|t| (t.m.clone(), Complex::new(t.re, t.im)))
                    .collect();
                TorusFunction::TrigPoly(TrigPoly::new(n, coeffs)?)
            }
            Self::RandomTrigPoly { .. } => {
                return Err(RunError::Infeasible(
                    "random polynomials are generated per instance".into(),
                ))
            }
            Self::PowerSingularity { a } => TorusFunction::PowerSingularity { a: *a },
            Self::LogPower { eps } => TorusFunction::LogPower { eps: *eps },
        };
        f.validate()?;
        Ok(f)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cutoffs {
    #[serde(default)]
    pub n_list: Vec<usize>,
    /// Secondary cutoffs (edge-effect check, bracket comparison).
    #[serde(default)]
    pub aux_n_list: Vec<usize>,
    /// Fourier band; defaults to twice the largest cutoff.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<usize>,
    #[serde(default)]
    pub s_grid: Vec<f64>,
    #[serde(default)]
    pub k_grid: Vec<usize>,
}

/// File names, resolved against the output directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub csv: String,
    pub json: String,
    pub timing: String,
}

impl OutputPaths {
    fn for_id(id: ExperimentId) -> Self {
        Self {
            csv: format!("{id}.csv"),
            json: format!("{id}.json"),
            timing: format!("{id}.timing.json"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub dimension: usize,
    #[serde(default)]
    pub functions: Vec<FunctionSpec>,
    pub symbol: SymbolDefinition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelDefinition>,
    #[serde(default)]
    pub cutoffs: Cutoffs,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
    #[serde(default)]
    pub instances: usize,
    pub output: OutputPaths,
}

fn canonical_symbol(n: usize) -> SymbolDefinition {
    SymbolDefinition {
        kind: "power_resolvent".into(),
        order: n as f64,
    }
}

fn tolerances(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

impl ExperimentConfig {
    /// The shipped configuration of each experiment.
    pub fn default_for(id: ExperimentId) -> Self {
        let base = Self {
            experiment: id,
            dimension: 1,
            functions: Vec::new(),
            symbol: canonical_symbol(1),
            model: None,
            cutoffs: Cutoffs::default(),
            tolerances: BTreeMap::new(),
            seed: 20_240_601,
            instances: 0,
            output: OutputPaths::for_id(id),
        };
        match id {
            ExperimentId::LInfinityIdentity => Self {
                functions: vec![
                    FunctionSpec::Cosine {
                        a0: 1.0,
                        cos: vec![1.0],
                        sin: vec![],
                    },
                    FunctionSpec::RandomTrigPoly { band: 8 },
                ],
                cutoffs: Cutoffs {
                    n_list: vec![256, 512],
                    aux_n_list: vec![512, 1024],
                    band: None,
                    s_grid: vec![1.25, 1.5],
                    k_grid: vec![100_000],
                },
                tolerances: tolerances(&[
                    ("zeta_width", 1e-8),
                    ("residue_1d_abs", 1e-3),
                    ("residue_2d_rel", 1e-2),
                    ("trace_identity_rel", 1e-12),
                    ("edge_effect_rel", 1e-6),
                    ("bracket_rel", 0.05),
                ]),
                instances: 20,
                ..base
            },
            ExperimentId::L2Sharpness => Self {
                functions: [0.40, 0.45, 0.55, 0.60]
                    .into_iter()
                    .map(|a| FunctionSpec::PowerSingularity { a })
                    .collect(),
                cutoffs: Cutoffs {
                    n_list: vec![1024, 2048],
                    ..Cutoffs::default()
                },
                tolerances: tolerances(&[
                    ("stable_ratio", 1.02),
                    ("growth_ratio", 1.10),
                    ("bracket_rel", 0.15),
                ]),
                ..base
            },
            ExperimentId::L1Residue => Self {
                functions: vec![
                    FunctionSpec::LogPower { eps: 0.5 },
                    FunctionSpec::PowerSingularity { a: 0.6 },
                ],
                cutoffs: Cutoffs {
                    n_list: vec![1024],
                    ..Cutoffs::default()
                },
                tolerances: tolerances(&[("residue_rel", 0.02), ("mean_rel", 1e-8)]),
                ..base
            },
            ExperimentId::L1Counterexample => Self {
                functions: vec![FunctionSpec::LogPower { eps: 0.5 }],
                cutoffs: Cutoffs {
                    n_list: vec![16],
                    ..Cutoffs::default()
                },
                tolerances: tolerances(&[("increment_factor", 0.8), ("contrast_abs", 1e-6)]),
                ..base
            },
            ExperimentId::L1PlusEps => Self {
                functions: vec![FunctionSpec::PowerSingularity { a: 0.6 }],
                cutoffs: Cutoffs {
                    n_list: vec![2048],
                    s_grid: vec![1.5],
                    ..Cutoffs::default()
                },
                tolerances: tolerances(&[
                    ("bracket_half_width_rel", 0.2),
                    ("bound_slack", 1e-6),
                    ("battery_slack", 1e-10),
                    ("battery_max_dim", 16.0),
                ]),
                instances: 200,
                ..base
            },
            ExperimentId::NonNormalWitness => Self {
                symbol: SymbolDefinition {
                    kind: "inverse_power".into(),
                    order: 1.0,
                },
                model: Some(ModelDefinition {
                    label: "harmonic sequence".into(),
                    eigenvalues: None,
                    eigenvalue_rule: Some("natural".into()),
                    dimension: None,
                    density: DensityFamily::Atoms,
                    symbol: SymbolDefinition {
                        kind: "inverse_power".into(),
                        order: 1.0,
                    },
                }),
                cutoffs: Cutoffs {
                    n_list: vec![1, 10, 100],
                    k_grid: vec![1_000_000],
                    ..Cutoffs::default()
                },
                tolerances: tolerances(&[("tail_abs", 1e-3), ("domination_tol", 1e-12)]),
                ..base
            },
            ExperimentId::LimitsBattery => Self {
                cutoffs: Cutoffs {
                    n_list: vec![4096, 65_536],
                    k_grid: vec![1_000_000],
                    ..Cutoffs::default()
                },
                tolerances: tolerances(&[("weight_sum_abs", 1e-15), ("gamma_abs", 1e-6)]),
                instances: 50,
                ..base
            },
        }
    }

    pub fn from_json(text: &str) -> Result<Self, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::Infeasible(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON serialization.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn tol(&self, name: &str) -> Result<f64, RunError> {
        self.tolerances.get(name).copied().ok_or_else(|| {
            RunError::Infeasible(format!("tolerance {name:?} missing from the config"))
        })
    }

    pub fn band(&self) -> usize {
        let top = self
            .cutoffs
            .n_list
            .iter()
            .chain(&self.cutoffs.aux_n_list)
            .copied()
            .max()
            .unwrap_or(0);
        self.cutoffs.band.unwrap_or(2 * top)
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |m: String| Err(RunError::Infeasible(m));
        if !(1..=3).contains(&self.dimension) {
            return bad(format!("dimension {} is outside 1..=3", self.dimension));
        }
        self.symbol.to_symbol::<f64>()?;
        if let Some(m) = &self.model {
            m.to_model::<f64>()?;
        }
        for (k, v) in &self.tolerances {
            if !(v.is_finite() && *v >= 0.0) {
                return bad(format!(
                    "tolerance {k} = {v} must be finite and nonnegative"
                ));
            }
        }
        if self
            .cutoffs
            .s_grid
            .iter()
            .any(|s| !s.is_finite() || *s <= 1.0)
        {
            return bad("s-grid points must be finite and above 1".into());
        }
        if self.cutoffs.n_list.contains(&0)
            || self.cutoffs.aux_n_list.contains(&0)
            || self.cutoffs.k_grid.contains(&0)
        {
            return bad("cutoffs and k-grid entries must be positive".into());
        }
        if let Some(b) = self.cutoffs.band {
            let top = self
                .cutoffs
                .n_list
                .iter()
                .chain(&self.cutoffs.aux_n_list)
                .copied()
                .max()
                .unwrap_or(0);
            if b < 2 * top {
                return bad(format!(
                    "band {b} is below 2N = {}; raise the band or lower the cutoffs",
                    2 * top
                ));
            }
        }
        for f in &self.functions {
            if let FunctionSpec::RandomTrigPoly { band } = f {
                if *band == 0 || self.instances == 0 {
                    return bad("random polynomials need a positive band and instance count".into());
                }
            } else {
                f.build(self.dimension)?;
            }
        }
        for p in [&self.output.csv, &self.output.json, &self.output.timing] {
            if p.is_empty() || p.contains('/') || p.contains('\\') {
                return bad(format!("output name {p:?} must be a bare file name"));
            }
        }
        let need = |cond: bool, what: &str| {
            if cond {
                Ok(())
            } else {
                bad(format!("{}: {what}", self.experiment))
            }
        };
        // the closed-form targets ĥ(0)/π assume T_Δ itself
        let canonical = self.symbol == canonical_symbol(self.dimension);
        match self.experiment {
            ExperimentId::LInfinityIdentity
            | ExperimentId::L2Sharpness
            | ExperimentId::L1Residue
            | ExperimentId::L1PlusEps => {
                need(canonical, "the symbol must be power_resolvent of order n")?
            }
            _ => {}
        }
        match self.experiment {
            ExperimentId::LInfinityIdentity => {
                need(self.dimension == 1, "runs on the circle")?;
                need(
                    !self.cutoffs.n_list.is_empty() && !self.cutoffs.s_grid.is_empty(),
                    "needs n_list and s_grid",
                )?;
                need(
                    !self.cutoffs.k_grid.is_empty(),
                    "k_grid[0] is the zeta-sum cutoff",
                )?;
                need(
                    !self.cutoffs.aux_n_list.is_empty(),
                    "aux_n_list holds the edge-effect cutoffs",
                )?;
            }
            ExperimentId::L2Sharpness => {
                need(self.dimension == 1, "runs on the circle")?;
                need(
                    self.cutoffs.n_list.len() >= 2,
                    "needs two cutoffs to compare",
                )?;
            }
            ExperimentId::L1Residue | ExperimentId::L1PlusEps => {
                need(self.dimension == 1, "runs on the circle")?;
                need(!self.cutoffs.n_list.is_empty(), "needs a bracket cutoff")?;
                if self.experiment == ExperimentId::L1PlusEps {
                    need(
                        self.cutoffs.s_grid.len() == 1,
                        "s_grid holds the single exponent 1 + ε",
                    )?;
                    need(self.instances > 0, "needs battery instances")?;
                }
            }
            ExperimentId::L1Counterexample => {
                need(self.cutoffs.n_list.len() == 1, "n_list holds n_max")?;
                need(
                    matches!(self.functions.as_slice(), [FunctionSpec::LogPower { .. }]),
                    "the function must be a single log_power",
                )?;
            }
            ExperimentId::NonNormalWitness => {
                need(self.model.is_some(), "needs a model definition")?;
                need(
                    self.cutoffs.k_grid.len() == 1,
                    "k_grid holds the tail length K",
                )?;
            }
            ExperimentId::LimitsBattery => {
                need(
                    self.cutoffs.n_list.len() == 2,
                    "n_list holds the short and long sequence lengths",
                )?;
                need(self.cutoffs.k_grid.len() == 1, "k_grid holds the γ index")?;
                need(self.instances > 0, "needs sequence instances")?;
            }
        }
        Ok(())
    }
}

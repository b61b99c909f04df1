//! JSON run configurations for the command-line front end.
//!
//! Parsing is strict everywhere: unknown fields are rejected so a typo in
//! a config fails loudly instead of silently running defaults. Every
//! command can emit its fully resolved configuration with `--emit-config`;
//! re-running from that document reproduces the run byte for byte.

use crate::benchmarks;
use crate::error::{Error, Result};
use crate::family::PlantFamily;
use crate::nonlin::dob::DobParams;
use crate::nonlin::plant::{BaselineController, Envelope, NominalModel, NormalFormPlant};
use crate::qfilter::{GainInterval, QFilterSpec};
use crate::signal::SignalSpec;
use crate::tf::TransferFunction;
use serde::{Deserialize, Serialize};

/// Input to `design-q`: the gain interval the loop must survive and the
/// fixed filter tail; `a0_initial` seeds the halving search.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignQConfig {
    pub gain: GainInterval,
    pub nu: usize,
    pub a_tail: Vec<f64>,
    pub a0_initial: f64,
}

/// Input to `analyze`: family, controller, filter, and the tau grid to
/// sweep (strictly descending).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeConfig {
    pub family: PlantFamily,
    pub controller: TransferFunction,
    pub qfilter: QFilterSpec,
    pub tau_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

/// Input to `poles`: a single plant against the nominal, tracked over a
/// shrinking tau sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolesConfig {
    pub plant: crate::family::PlantSample,
    pub nominal: crate::family::PlantSample,
    pub controller: TransferFunction,
    pub qfilter: QFilterSpec,
    pub tau_grid: Vec<f64>,
}

/// The four blocks of the linear loop.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearLoopConfig {
    pub plant: TransferFunction,
    pub nominal: TransferFunction,
    pub controller: TransferFunction,
    pub qfilter: QFilterSpec,
}

/// Input to `simulate`: the loop plus the three exogenous signals and the
/// integration window.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(rename = "loop")]
    pub loop_def: LinearLoopConfig,
    pub r: SignalSpec,
    pub d: SignalSpec,
    pub n: SignalSpec,
    pub t_end: f64,
    pub dt: f64,
}

/// Input to `simulate-nl` and `compare-transient`. A run either references
/// a built-in benchmark by name (`"n1"`, `"n1-zero-uncertainty"`,
/// `"double-integrator"`) or spells out every block inline; inline fields
/// override the benchmark's values when both are present.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearRunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub benchmark: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plant: Option<NormalFormPlant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nominal: Option<NominalModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub controller: Option<BaselineController>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<DobParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<Envelope>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0z0eta0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dob0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
}

/// A fully resolved nonlinear run.
#[derive(Debug)]
pub struct ResolvedNonlinearRun {
    pub bench: benchmarks::NonlinearBenchmark,
    pub dt: f64,
}

impl NonlinearRunConfig {
    pub fn resolve(&self) -> Result<ResolvedNonlinearRun> {
        let tau = self.tau.unwrap_or(1e-2);
        let mut bench = match self.benchmark.as_deref() {
            Some("n1") => benchmarks::n1(tau)?,
            Some("n1-zero-uncertainty") => benchmarks::n1_zero_uncertainty(tau)?,
            Some("double-integrator") => {
                let pair = benchmarks::double_integrator_pair(tau);
                benchmarks::NonlinearBenchmark {
                    plant: pair.plant,
                    nominal: pair.nominal,
                    controller: pair.controller,
                    envelope: pair.envelope,
                    params: pair.params,
                    x0z0eta0: vec![1.0, 0.0, 0.0, 0.0],
                    dob0: vec![],
                    t_end: 10.0,
                }
            }
            Some(other) => {
                return Err(Error::InvalidParameter {
                    field: "benchmark".into(),
                    reason: format!(
                        "unknown benchmark {other:?}; known: n1, n1-zero-uncertainty, double-integrator"
                    ),
                })
            }
            None => {
                let missing = |field: &str| Error::InvalidParameter {
                    field: field.into(),
                    reason: "required when no benchmark is referenced".into(),
                };
                benchmarks::NonlinearBenchmark {
                    plant: self.plant.clone().ok_or_else(|| missing("plant"))?,
                    nominal: self.nominal.clone().ok_or_else(|| missing("nominal"))?,
                    controller: self.controller.clone().ok_or_else(|| missing("controller"))?,
                    params: self.params.clone().ok_or_else(|| missing("params"))?,
                    envelope: self.envelope.clone().ok_or_else(|| missing("envelope"))?,
                    x0z0eta0: self.x0z0eta0.clone().ok_or_else(|| missing("x0z0eta0"))?,
                    dob0: self.dob0.clone().unwrap_or_default(),
                    t_end: self.t_end.ok_or_else(|| missing("t_end"))?,
                }
            }
        };
        if self.benchmark.is_some() {
            if let Some(p) = &self.plant {
                bench.plant = p.clone();
            }
            if let Some(n) = &self.nominal {
                bench.nominal = n.clone();
            }
            if let Some(c) = &self.controller {
                bench.controller = c.clone();
            }
            if let Some(p) = &self.params {
                bench.params = p.clone();
            }
            if let Some(e) = &self.envelope {
                bench.envelope = e.clone();
            }
            if let Some(x) = &self.x0z0eta0 {
                bench.x0z0eta0 = x.clone();
            }
            if let Some(d) = &self.dob0 {
                bench.dob0 = d.clone();
            }
            if let Some(t) = self.t_end {
                bench.t_end = t;
            }
        }
        if let Some(tau) = self.tau {
            bench.params.qspec.tau = tau;
        }
        let dt = self.dt.unwrap_or((bench.params.qspec.tau / 20.0).min(1e-3));
        Ok(ResolvedNonlinearRun { bench, dt })
    }
}

/// Parses a tau grid given either as a comma list (`1e-2,3e-3,1e-3`) or as
/// a decade range `start:stop:log10` that expands to powers of ten from
/// start down to stop inclusive.
pub fn parse_tau_grid(text: &str) -> Result<Vec<f64>> {
    let bad = |reason: String| Error::InvalidParameter {
        field: "tau-grid".into(),
        reason,
    };
    let values: Vec<f64> = if let Some(range) = text.strip_suffix(":log10") {
        let (a, b) = range
            .split_once(':')
            .ok_or_else(|| bad(format!("expected start:stop:log10, got {text:?}")))?;
        let start: f64 = a.trim().parse().map_err(|_| bad(format!("bad number {a:?}")))?;
        let stop: f64 = b.trim().parse().map_err(|_| bad(format!("bad number {b:?}")))?;
        if start <= 0.0 || stop <= 0.0 || stop > start {
            return Err(bad("need start >= stop > 0".into()));
        }
        let hi = start.log10().round() as i64;
        let lo = stop.log10().round() as i64;
        (lo..=hi).rev().map(|e| 10f64.powi(e as i32)).collect()
    } else {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad(format!("bad number {s:?}"))))
            .collect::<Result<_>>()?
    };
    if values.is_empty() {
        return Err(bad("empty tau grid".into()));
    }
    Ok(values)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

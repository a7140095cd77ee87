//! Resolved experiments and their execution.

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{ExperimentConfig, Format, Preset, Protocol};
use super::output::{Cell, OutputSet, Table};
use crate::dynamics::{RunConfig, Trajectory};
use crate::error::{Error, Result};
use crate::fock::{coherent_state_with_threshold, DEFAULT_LEAKAGE_THRESHOLD};
use crate::model::{Model, ModelParams};
use crate::scalar::Cplx;
use crate::topology::{self, ChernResult, Initial, Method, ProtocolRun};
use crate::wigner::{self, GridSpec};

/// Movie frames as fractions of `τ`.
pub const MOVIE_FRACTIONS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const MOVIE_SAMPLES: usize = 401;

/// Everything needed to run, after presets, config and flags are merged.
#[derive(Clone, Debug, Serialize)]
pub struct Experiment {
    pub protocol: Protocol,
    pub preset: Preset,
    pub params: ModelParams,
    pub method: Method,
    pub sta: bool,
    pub initial: Initial,
    pub n_steps: usize,
    pub n_samples: usize,
    pub max_refinements: usize,
    pub tolerance: f64,
    pub chi: Vec<f64>,
    pub grid: GridSpec,
    pub format: Format,
    #[serde(skip)]
    pub jobs: usize,
}

/// Command-line values that take precedence over the config.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub chi: Option<Vec<f64>>,
    pub initial: Option<Initial>,
    pub sta: Option<bool>,
    pub steps: Option<usize>,
    pub dim: Option<usize>,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
}

impl Experiment {
    pub fn resolve(config: &ExperimentConfig, over: &Overrides) -> Result<Self> {
        let mut params = config.model_params()?;
        if let Some(dim) = over.dim {
            params.dim = dim;
        }
        let mut chi = over
            .chi
            .clone()
            .or_else(|| config.sweep.as_ref().map(|s| s.chi.clone()))
            .unwrap_or_default();
        match config.protocol {
            Protocol::Sweep => {
                if chi.is_empty() {
                    return Err(Error::Config("sweep needs at least one chi value".into()));
                }
            }
            _ => match chi.as_slice() {
                [] => chi.push(params.chi()?),
                [one] => params = params.with_chi(*one),
                _ => return Err(Error::Config("only sweeps take more than one chi value".into())),
            },
        }
        let method = config.method();
        let sta = over.sta.unwrap_or_else(|| config.sta());
        if method == Method::LinearResponse && sta {
            return Err(Error::Config("linear response runs without the counterdiabatic drive".into()));
        }
        let n_samples = match config.protocol {
            Protocol::WignerMovie => {
                if config.n_samples.is_some_and(|n| n != MOVIE_SAMPLES) {
                    return Err(Error::Config(format!("wigner_movie uses {MOVIE_SAMPLES} samples")));
                }
                MOVIE_SAMPLES
            }
            _ => config.n_samples.unwrap_or(400),
        };
        if n_samples < 2 {
            return Err(Error::Config("n_samples must be at least 2".into()));
        }
        let n_steps = over.steps.unwrap_or_else(|| config.n_steps());
        if n_steps == 0 {
            return Err(Error::Config("steps must be positive".into()));
        }
        let exp = Self {
            protocol: config.protocol,
            preset: config.effective_preset(),
            params,
            method,
            sta,
            initial: over.initial.or(config.initial).unwrap_or(Initial::Ket0),
            n_steps,
            n_samples,
            max_refinements: 2,
            tolerance: 1e-4,
            chi,
            grid: config.grid.unwrap_or_default(),
            format: over.format.unwrap_or(config.output.format),
            jobs: over.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
        };
        exp.params.validate()?;
        Ok(exp)
    }

    pub fn run_config(&self) -> RunConfig {
        let snapshots = match self.protocol {
            Protocol::WignerMovie => MOVIE_FRACTIONS
                .iter()
                .map(|f| (f * (self.n_samples - 1) as f64).round() as usize)
                .collect(),
            _ => Vec::new(),
        };
        RunConfig {
            sta: self.sta,
            n_steps: self.n_steps,
            n_samples: self.n_samples,
            max_refinements: self.max_refinements,
            tolerance: self.tolerance,
            snapshots,
        }
    }

    /// Runs the experiment and gathers its output files. Returns the files
    /// and a short human-readable summary.
    pub fn execute(&self) -> Result<(OutputSet, String)> {
        let mut out = OutputSet::default();
        let summary = match self.protocol {
            Protocol::LinearResponse | Protocol::Sta => {
                let run = self.single()?;
                self.emit_run(&mut out, &run);
                format_chern(&run.chern)
            }
            Protocol::Sweep => self.sweep(&mut out)?,
            Protocol::WignerMovie => self.movie(&mut out)?,
        };
        Ok((out, summary))
    }

    fn single(&self) -> Result<ProtocolRun> {
        let model = Model::new(self.params.clone())?;
        topology::run_protocol(&model, self.method, self.initial, &self.run_config())
    }

    fn emit_run(&self, out: &mut OutputSet, run: &ProtocolRun) {
        out.table("trajectory", &trajectory_table(&run.trajectory), self.format);
        if let Some(curve) = &run.curvature {
            let mut t = Table::new(&["theta_rad", "b_theta"]);
            for p in curve {
                t.push(vec![p.theta.into(), p.b_theta.into()]);
            }
            out.table("curvature", &t, self.format);
        }
        if let Some(series) = &run.theta_q {
            let mut t = Table::new(&["theta_rad", "theta_q_rad"]);
            for p in series {
                t.push(vec![p.theta.into(), p.theta_q.into()]);
            }
            out.table("theta_q", &t, self.format);
        }
        out.json("chern.json", &self.chern_json(&run.chern, &run.trajectory));
    }

    fn chern_json(&self, chern: &ChernResult, tr: &Trajectory) -> Value {
        let min_pop = tr.samples.iter().map(|s| s.pop).fold(f64::INFINITY, f64::min);
        let norm_drift = tr.samples.iter().map(|s| (s.norm - 1.0).abs()).fold(0.0, f64::max);
        json!({
            "c1": chern.c1,
            "method": chern.method,
            "chi": chern.chi,
            "initial": chern.initial,
            "sta": self.sta,
            "raw": chern.raw,
            "quadrature": chern.quadrature,
            "warning": chern.warning,
            "convergence": {
                "converged": tr.converged,
                "n_steps": tr.n_steps,
                "refinements": tr.refinements,
                "max_change": finite_or_null(tr.refinement_change),
                "tolerance": self.tolerance,
            },
            "stabilizer_ratio": self.params.stabilizer_ratio(),
            "min_population": min_pop,
            "max_norm_drift": norm_drift,
        })
    }

    fn sweep(&self, out: &mut OutputSet) -> Result<String> {
        let points = topology::sweep_chi(&self.params, &self.chi, self.method, self.initial, &self.run_config(), self.jobs)?;
        let mut t = Table::new(&["chi", "c1", "status"]);
        let mut lines = Vec::new();
        for p in &points {
            let (c1, status) = match &p.outcome {
                Ok(run) if !run.trajectory.converged => (run.chern.c1, "unconverged".to_string()),
                Ok(run) => match &run.chern.warning {
                    Some(w) => (run.chern.c1, format!("warning: {w}")),
                    None => (run.chern.c1, "ok".to_string()),
                },
                Err(e) => (f64::NAN, format!("error: {e}")),
            };
            lines.push(format!("chi = {:+.4}  c1 = {c1:.4}  {status}", p.chi));
            t.push(vec![p.chi.into(), c1.into(), Cell::Text(status)]);
        }
        out.table("sweep", &t, self.format);
        Ok(lines.join("\n"))
    }

    fn movie(&self, out: &mut OutputSet) -> Result<String> {
        let model = Model::new(self.params.clone())?;
        let run = topology::run_protocol(&model, self.method, self.initial, &self.run_config())?;
        self.emit_run(out, &run);
        let frame = model.frame();
        let mut frames = Vec::new();
        for (&fraction, (t, psi)) in MOVIE_FRACTIONS.iter().zip(&run.trajectory.snapshots) {
            let grid = wigner::wigner(psi, self.grid)?;
            let mut table = Table::new(&["re_alpha", "im_alpha", "w", "low_confidence"]);
            for (i, &y) in grid.im_axis.iter().enumerate() {
                for (j, &x) in grid.re_axis.iter().enumerate() {
                    let flag = if grid.low_confidence[i][j] { 1.0 } else { 0.0 };
                    table.push(vec![x.into(), y.into(), grid.values[i][j].into(), flag.into()]);
                }
            }
            out.table(&format!("wigner_t{fraction:.2}"), &table, self.format);
            frames.push(json!({
                "fraction": fraction,
                "t_us": t,
                "w_origin": wigner::wigner_point(psi, Cplx::new(0.0, 0.0))?,
                "integral": grid.integral(),
                "max_abs": grid.max_abs(),
                "origin_residual": grid.origin_residual,
                "low_confidence_cells": grid.low_confidence_count(),
                "fidelity_ket0": frame.ket0().fidelity(psi)?,
                "fidelity_ket1": frame.ket1().fidelity(psi)?,
            }));
        }
        let last = frames.last().cloned().unwrap_or(Value::Null);
        out.json("movie.json", &json!({ "grid": self.grid, "frames": frames }));
        Ok(format!(
            "{}\nfinal fidelity with ket0 {:.6}, ket1 {:.6}",
            format_chern(&run.chern),
            last["fidelity_ket0"].as_f64().unwrap_or(f64::NAN),
            last["fidelity_ket1"].as_f64().unwrap_or(f64::NAN),
        ))
    }

    /// Deterministic record of the resolved inputs and the files produced.
    pub fn manifest(&self, files: &[String]) -> Value {
        json!({
            "tool": "kno",
            "version": env!("CARGO_PKG_VERSION"),
            "modules": module_versions(),
            "experiment": self,
            "derived": {
                "alpha0": self.params.alpha0(),
                "chi": self.params.chi().ok(),
                "stabilizer_ratio": self.params.stabilizer_ratio(),
                "steps_per_sample": self.run_config().steps_per_sample(),
            },
            "files": files,
        })
    }
}

fn module_versions() -> Value {
    let v = env!("CARGO_PKG_VERSION");
    let names = ["fock", "logical", "model", "dynamics", "topology", "twolevel", "wigner", "cli"];
    Value::Object(names.iter().map(|n| (n.to_string(), json!(v))).collect())
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn format_chern(c: &ChernResult) -> String {
    let mut s = format!("C1 = {:.6} ({:?}, chi = {}, {})", c.c1, c.method, c.chi, c.initial);
    if let Some(w) = &c.warning {
        s.push_str(&format!("\nwarning: {w}"));
    }
    s
}

pub fn trajectory_table(tr: &Trajectory) -> Table {
    let mut t = Table::new(&["t_us", "theta_rad", "sx", "sy", "sz", "pop", "norm"]);
    for s in &tr.samples {
        t.push(vec![s.t.into(), s.theta.into(), s.sx.into(), s.sy.into(), s.sz.into(), s.pop.into(), s.norm.into()]);
    }
    t
}

/// One line of the validation report.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Static checks on a resolved experiment plus a runtime estimate.
pub fn validate(exp: &Experiment) -> (Vec<Check>, String) {
    let p = &exp.params;
    let mut checks = Vec::new();

    let chi = p.chi();
    checks.push(Check {
        name: "chi",
        passed: chi.is_ok(),
        detail: match &chi {
            Ok(c) => format!("chi = {c}"),
            Err(e) => e.to_string(),
        },
    });

    let ratio = p.stabilizer_ratio();
    checks.push(Check {
        name: "stabilizer ratio",
        passed: ratio <= 0.1 + 1e-12,
        detail: format!("e^(2 alpha0^2) Omega0 / P = {ratio:.6} (limit 0.1)"),
    });

    let truncation = coherent_state_with_threshold(Cplx::new(p.alpha0(), 0.0), p.dim, DEFAULT_LEAKAGE_THRESHOLD);
    checks.push(Check {
        name: "truncation",
        passed: truncation.is_ok(),
        detail: match truncation {
            Ok(c) => format!("coherent-state leakage {:.3e} at N = {} (threshold {DEFAULT_LEAKAGE_THRESHOLD:e})", c.leakage, p.dim),
            Err(e) => format!("warning: {e}"),
        },
    });

    if exp.sta {
        let matched = (p.delta_z - p.omega0).abs() <= 1e-12 * p.omega0.abs().max(p.delta_z.abs());
        checks.push(Check {
            name: "counterdiabatic drive",
            passed: matched,
            detail: if matched {
                "delta_z = omega0".into()
            } else {
                format!("needs delta_z = omega0, got {} and {}", p.delta_z, p.omega0)
            },
        });
    }

    (checks, estimate_runtime(exp))
}

fn estimate_runtime(exp: &Experiment) -> String {
    let Ok(model) = Model::new(exp.params.clone()) else {
        return "unavailable (model does not build)".into();
    };
    let Ok(h) = model.total_hamiltonian(0.5 * exp.params.tau, false) else {
        return "unavailable".into();
    };
    let trials = 20;
    let start = Instant::now();
    for _ in 0..trials {
        if h.eigh().is_err() {
            return "unavailable (eigensolver failed)".into();
        }
    }
    let per_step = start.elapsed().as_secs_f64() / trials as f64;
    let cfg = exp.run_config();
    let steps = cfg.steps_per_sample() * (cfg.n_samples - 1);
    // the coarse pass plus one doubling, per chi point
    let points = if exp.protocol == Protocol::Sweep { exp.chi.len() } else { 1 };
    let total = per_step * steps as f64 * 3.0 * points as f64;
    format!("~{total:.1} s single-threaded ({steps} steps per pass, {:.1} us per step)", per_step * 1e6)
}

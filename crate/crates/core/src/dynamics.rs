//! Time evolution of the oscillator under the ramp protocol.
//!
//! Each step applies `exp(-i H(t + dt/2) dt)` through an exact Hermitian
//! eigendecomposition. A run is repeated with the step count doubled until
//! every sampled Bloch component moves by less than the tolerance.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{propagate_step, Operator, StateVector};
use crate::model::Model;
use crate::twolevel;

/// Starting state of a run.
#[derive(Clone, Debug)]
pub enum InitialState {
    Ket0,
    Ket1,
    Custom(StateVector<f64>),
}

/// One readout of the logical Bloch vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub theta: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub pop: f64,
    pub norm: f64,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub sta: bool,
    /// Requested step count for the coarsest pass; rounded up to a multiple
    /// of `n_samples - 1`.
    pub n_steps: usize,
    pub n_samples: usize,
    pub max_refinements: usize,
    pub tolerance: f64,
    /// Sample indices whose full state is kept.
    pub snapshots: Vec<usize>,
}

impl RunConfig {
    pub fn new(sta: bool, n_steps: usize) -> Self {
        Self {
            sta,
            n_steps,
            n_samples: 400,
            max_refinements: 2,
            tolerance: 1e-4,
            snapshots: Vec::new(),
        }
    }

    pub fn steps_per_sample(&self) -> usize {
        self.n_steps.div_ceil(self.n_samples - 1).max(1)
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Steps taken by the returned (finest) pass.
    pub n_steps: usize,
    pub converged: bool,
    /// Largest change in any sampled component at the last doubling.
    pub refinement_change: f64,
    pub refinements: usize,
    pub final_state: StateVector<f64>,
    pub snapshots: Vec<(f64, StateVector<f64>)>,
}

/// Marches `psi0` from 0 to `tau`, calling `observe(index, t, psi)` at each
/// of `n_samples` uniform times. Returns the final state.
pub(crate) fn march<F, G>(
    psi0: StateVector<f64>,
    tau: f64,
    steps_per_sample: usize,
    n_samples: usize,
    mut h_at: F,
    mut observe: G,
) -> Result<StateVector<f64>>
where
    F: FnMut(f64) -> Result<Operator<f64>>,
    G: FnMut(usize, f64, &StateVector<f64>) -> Result<()>,
{
    if n_samples < 2 {
        return Err(Error::InsufficientSampling { points: n_samples, required: 2 });
    }
    if steps_per_sample == 0 {
        return Err(Error::InvalidParams("need at least one step per sample".into()));
    }
    let intervals = n_samples - 1;
    let total = intervals * steps_per_sample;
    let dt = tau / total as f64;
    let mut psi = psi0;
    observe(0, 0.0, &psi)?;
    for k in 0..intervals {
        for s in 0..steps_per_sample {
            let t_mid = ((k * steps_per_sample + s) as f64 + 0.5) * dt;
            psi = propagate_step(&h_at(t_mid)?, &psi, dt)?;
        }
        let t = tau * (k + 1) as f64 / intervals as f64;
        observe(k + 1, t, &psi)?;
    }
    Ok(psi)
}

struct Pass {
    samples: Vec<Sample>,
    final_state: StateVector<f64>,
    snapshots: Vec<(f64, StateVector<f64>)>,
}

fn resolve_initial(model: &Model, initial: &InitialState) -> Result<StateVector<f64>> {
    let frame = model.frame();
    match initial {
        InitialState::Ket0 => Ok(frame.ket0().clone()),
        InitialState::Ket1 => Ok(frame.ket1().clone()),
        InitialState::Custom(s) => {
            if s.dim() != frame.dim() {
                return Err(Error::DimensionMismatch {
                    expected: frame.dim(),
                    found: s.dim(),
                });
            }
            s.normalized()
        }
    }
}

fn single_pass(model: &Model, psi0: &StateVector<f64>, cfg: &RunConfig, steps_per_sample: usize) -> Result<Pass> {
    let ramp = model.ramp();
    let frame = model.frame();
    let mut samples = Vec::with_capacity(cfg.n_samples);
    let mut snapshots = Vec::new();
    let final_state = march(
        psi0.clone(),
        model.params().tau,
        steps_per_sample,
        cfg.n_samples,
        |t| model.total_hamiltonian(t, cfg.sta),
        |k, t, psi| {
            let b = frame.bloch_vector(psi)?;
            samples.push(Sample {
                t,
                theta: ramp.theta(t),
                sx: b.sx,
                sy: b.sy,
                sz: b.sz,
                pop: b.pop,
                norm: psi.norm(),
            });
            if cfg.snapshots.contains(&k) {
                snapshots.push((t, psi.clone()));
            }
            Ok(())
        },
    )?;
    Ok(Pass { samples, final_state, snapshots })
}

fn max_change(a: &[Sample], b: &[Sample]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p.sx - q.sx).abs().max((p.sy - q.sy).abs()).max((p.sz - q.sz).abs()))
        .fold(0.0, f64::max)
}

/// Runs the protocol, refining the step until the sampled Bloch vector is
/// stable. The finest pass is returned; `converged` is false if the last
/// doubling still moved a component by more than `cfg.tolerance`.
pub fn run(model: &Model, initial: &InitialState, cfg: &RunConfig) -> Result<Trajectory> {
    if let Some(&bad) = cfg.snapshots.iter().find(|&&k| k >= cfg.n_samples) {
        return Err(Error::InvalidParams(format!(
            "snapshot index {bad} beyond {} samples",
            cfg.n_samples
        )));
    }
    let psi0 = resolve_initial(model, initial)?;
    let base = cfg.steps_per_sample();
    let intervals = cfg.n_samples.saturating_sub(1);

    if cfg.max_refinements == 0 {
        let pass = single_pass(model, &psi0, cfg, base)?;
        return Ok(Trajectory {
            samples: pass.samples,
            n_steps: base * intervals,
            converged: false,
            refinement_change: f64::NAN,
            refinements: 0,
            final_state: pass.final_state,
            snapshots: pass.snapshots,
        });
    }

    let (coarse, fine) = rayon::join(
        || single_pass(model, &psi0, cfg, base),
        || single_pass(model, &psi0, cfg, 2 * base),
    );
    let mut prev = coarse?;
    let mut current = fine?;
    let mut sps = 2 * base;
    let mut refinements = 1;
    let mut change = max_change(&prev.samples, &current.samples);
    while change > cfg.tolerance && refinements < cfg.max_refinements {
        sps *= 2;
        prev = current;
        current = single_pass(model, &psi0, cfg, sps)?;
        change = max_change(&prev.samples, &current.samples);
        refinements += 1;
    }
    Ok(Trajectory {
        samples: current.samples,
        n_steps: sps * intervals,
        converged: change <= cfg.tolerance,
        refinement_change: change,
        refinements,
        final_state: current.final_state,
        snapshots: current.snapshots,
    })
}

/// Fidelity of each sample with the instantaneous two-level eigenstate.
///
/// The branch is the one the first sample overlaps most. Leakage is
/// divided out, so this measures the direction of the logical Bloch vector.
pub fn instantaneous_eigenstate_fidelity(model: &Model, samples: &[Sample]) -> Result<Vec<f64>> {
    let p = model.params();
    let first = samples
        .first()
        .ok_or(Error::InsufficientSampling { points: 0, required: 1 })?;
    let fid = |s: &Sample, upper: bool| -> Result<f64> {
        let n = twolevel::eigen_bloch(p.delta_z_at(s.theta), p.omega_at(s.theta), p.phi, upper)?;
        if s.pop <= 0.0 {
            return Err(Error::DegenerateReadout { index: 0, length: s.pop });
        }
        Ok(0.5 * (1.0 + (s.sx * n[0] + s.sy * n[1] + s.sz * n[2]) / s.pop))
    };
    let upper = fid(first, true)? >= fid(first, false)?;
    samples.iter().map(|s| fid(s, upper)).collect()
}

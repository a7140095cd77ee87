//! Chern numbers from trajectories.
//!
//! Two readouts are supported. Linear response integrates the Berry
//! curvature `B_θ = -Ω0 sin θ <σ̄y> / (2 v_θ)` over a slow ramp. The polar
//! method tracks `θ_q`, the polar angle of the logical Bloch vector, along a
//! counterdiabatic ramp and uses `C1q = ½[cos θ_q(0) - cos θ_q(π)]`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{self, InitialState, RunConfig, Sample, Trajectory};
use crate::error::{Error, Result};
use crate::model::{Model, ModelParams, RampSchedule};

/// Largest allowed gap between the closed-form and quadrature `C1q`.
pub const STA_QUADRATURE_TOL: f64 = 0.01;
pub const MIN_CURVATURE_POINTS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    LinearResponse,
    StaPolar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Initial {
    Ket0,
    Ket1,
}

impl Initial {
    pub fn state(self) -> InitialState {
        match self {
            Initial::Ket0 => InitialState::Ket0,
            Initial::Ket1 => InitialState::Ket1,
        }
    }
}

impl fmt::Display for Initial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Initial::Ket0 => "ket0",
            Initial::Ket1 => "ket1",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvaturePoint {
    pub theta: f64,
    pub b_theta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaQPoint {
    pub theta: f64,
    pub theta_q: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChernResult {
    pub c1: f64,
    pub method: Method,
    pub chi: f64,
    pub initial: Initial,
    /// For the polar method: `½[cos θ_q(0) - cos θ_q(π)]` before the ket1
    /// complement is applied.
    pub raw: Option<f64>,
    /// For the polar method: the same integral by quadrature over samples.
    pub quadrature: Option<f64>,
    pub warning: Option<String>,
}

/// `B_θ` at each sample. Endpoints where `sin θ = 0` get zero curvature
/// even when the ramp velocity vanishes there.
pub fn berry_curvature(samples: &[Sample], params: &ModelParams, ramp: &RampSchedule) -> Result<Vec<CurvaturePoint>> {
    samples
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let sin = s.theta.sin();
            let v = ramp.theta_dot(s.t);
            let at_pole = sin.abs() < 1e-12;
            if v == 0.0 && !at_pole {
                return Err(Error::ZeroVelocity { index, theta: s.theta });
            }
            let b_theta = if at_pole { 0.0 } else { -params.omega0 * sin * s.sy / (2.0 * v) };
            Ok(CurvaturePoint { theta: s.theta, b_theta })
        })
        .collect()
}

/// Trapezoidal `∫ B_θ dθ` over the sampled curve.
pub fn chern_linear_response(series: &[CurvaturePoint], chi: f64, initial: Initial) -> Result<ChernResult> {
    if series.len() < MIN_CURVATURE_POINTS {
        return Err(Error::InsufficientSampling {
            points: series.len(),
            required: MIN_CURVATURE_POINTS,
        });
    }
    let c1 = series
        .windows(2)
        .map(|w| 0.5 * (w[0].b_theta + w[1].b_theta) * (w[1].theta - w[0].theta))
        .sum();
    Ok(ChernResult {
        c1,
        method: Method::LinearResponse,
        chi,
        initial,
        raw: None,
        quadrature: None,
        warning: None,
    })
}

/// `θ_q = arccos(s_z / |s|)` at each sample.
pub fn theta_q_series(samples: &[Sample]) -> Result<Vec<ThetaQPoint>> {
    samples
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let length = (s.sx * s.sx + s.sy * s.sy + s.sz * s.sz).sqrt();
            if length < 1e-6 {
                return Err(Error::DegenerateReadout { index, length });
            }
            Ok(ThetaQPoint {
                theta: s.theta,
                theta_q: (s.sz / length).clamp(-1.0, 1.0).acos(),
            })
        })
        .collect()
}

/// Polar-angle Chern number.
///
/// The integral `½∫ sin θ_q dθ_q` runs from 0 to π for a state starting at
/// the north pole. A ket1 run starts at the south pole, so its integral is
/// shifted by one; the reported `c1` is `1 + raw` there, which makes the two
/// initial states give complementary steps.
pub fn chern_sta(series: &[ThetaQPoint], chi: f64, initial: Initial) -> Result<ChernResult> {
    if series.len() < 2 {
        return Err(Error::InsufficientSampling { points: series.len(), required: 2 });
    }
    let first = series[0].theta_q;
    let last = series[series.len() - 1].theta_q;
    let raw = 0.5 * (first.cos() - last.cos());
    let quadrature: f64 = series
        .windows(2)
        .map(|w| 0.25 * (w[0].theta_q.sin() + w[1].theta_q.sin()) * (w[1].theta_q - w[0].theta_q))
        .sum();
    let gap = (raw - quadrature).abs();
    let warning = (gap > STA_QUADRATURE_TOL).then(|| {
        format!("closed form and quadrature differ by {gap:.3e}; theta_q sampling is not monotone enough")
    });
    let c1 = match initial {
        Initial::Ket0 => raw,
        Initial::Ket1 => 1.0 + raw,
    };
    Ok(ChernResult {
        c1,
        method: Method::StaPolar,
        chi,
        initial,
        raw: Some(raw),
        quadrature: Some(quadrature),
        warning,
    })
}

/// A finished run with its Chern readout.
#[derive(Clone, Debug)]
pub struct ProtocolRun {
    pub trajectory: Trajectory,
    pub curvature: Option<Vec<CurvaturePoint>>,
    pub theta_q: Option<Vec<ThetaQPoint>>,
    pub chern: ChernResult,
}

/// Simulates one protocol and extracts its Chern number. The polar readout
/// also accepts runs without the counterdiabatic drive.
pub fn run_protocol(model: &Model, method: Method, initial: Initial, cfg: &RunConfig) -> Result<ProtocolRun> {
    if method == Method::LinearResponse && cfg.sta {
        return Err(Error::InvalidParams(
            "linear response needs the counterdiabatic drive off".into(),
        ));
    }
    let trajectory = dynamics::run(model, &initial.state(), cfg)?;
    match method {
        Method::LinearResponse => {
            let curvature = berry_curvature(&trajectory.samples, model.params(), model.ramp())?;
            let chern = chern_linear_response(&curvature, model.chi(), initial)?;
            Ok(ProtocolRun { trajectory, curvature: Some(curvature), theta_q: None, chern })
        }
        Method::StaPolar => {
            let series = theta_q_series(&trajectory.samples)?;
            let chern = chern_sta(&series, model.chi(), initial)?;
            Ok(ProtocolRun { trajectory, curvature: None, theta_q: Some(series), chern })
        }
    }
}

/// Outcome of one sweep point.
#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub chi: f64,
    pub outcome: Result<ProtocolRun>,
}

/// Runs one independent simulation per `χ` on a pool of `jobs` threads.
/// Failures are kept per point; results come back in ascending `χ`.
pub fn sweep_chi(
    template: &ModelParams,
    chi_values: &[f64],
    method: Method,
    initial: Initial,
    cfg: &RunConfig,
    jobs: usize,
) -> Result<Vec<SweepPoint>> {
    let mut chis = chi_values.to_vec();
    if chis.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidParams("chi values must be finite".into()));
    }
    chis.sort_by(f64::total_cmp);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(e.to_string()))?;
    Ok(pool.install(|| {
        chis.par_iter()
            .map(|&chi| SweepPoint {
                chi,
                outcome: Model::new(template.clone().with_chi(chi))
                    .and_then(|m| run_protocol(&m, method, initial, cfg)),
            })
            .collect()
    }))
}

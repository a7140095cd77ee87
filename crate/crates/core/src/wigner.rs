//! Wigner tomography of pure states.
//!
//! `W(β) = (2/π) <ψ| D(β) P D(β)† |ψ>`, evaluated as the parity sum of
//! `D(-β)ψ` on an enlarged Fock space. `D(-β)` is split into a displacement
//! along the imaginary axis, applied once per grid row, and one along the
//! real axis, applied per cell; the cross phase drops out of the parity sum.

use std::f64::consts::FRAC_2_PI;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{DisplacementFamily, StateVector, DISPLACEMENT_GUARD};
use crate::scalar::Cplx;

pub const MIN_GRID_POINTS: usize = 41;
/// Weight allowed in the guard band before a cell is flagged.
pub const TAIL_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub half_width: f64,
    pub n_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { half_width: 4.5, n_points: 81 }
    }
}

impl GridSpec {
    pub fn axis(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n)
            .map(|k| self.half_width * (2.0 * k as f64 / (n - 1) as f64 - 1.0))
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.n_points < MIN_GRID_POINTS {
            return Err(Error::InsufficientSampling {
                points: self.n_points,
                required: MIN_GRID_POINTS,
            });
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::InvalidParams(format!("grid half width {}", self.half_width)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WignerGrid {
    pub re_axis: Vec<f64>,
    pub im_axis: Vec<f64>,
    /// `values[i][j]` is `W(re_axis[j] + i im_axis[i])`.
    pub values: Vec<Vec<f64>>,
    /// Cells whose displaced state reached the guard band.
    pub low_confidence: Vec<Vec<bool>>,
    /// `W(0) - (2/π)<P>`, evaluated independently of the grid.
    pub origin_residual: f64,
    pub work_dim: usize,
}

impl WignerGrid {
    /// `∫∫ W d²β` by the rectangle rule.
    pub fn integral(&self) -> f64 {
        let step = |a: &[f64]| (a[a.len() - 1] - a[0]) / (a.len() - 1) as f64;
        let cell = step(&self.re_axis) * step(&self.im_axis);
        self.values.iter().flatten().sum::<f64>() * cell
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, w| m.max(w.abs()))
    }

    pub fn low_confidence_count(&self) -> usize {
        self.low_confidence.iter().flatten().filter(|&&f| f).count()
    }
}

/// Enough levels to hold the state displaced by up to `reach`.
fn working_dim(psi: &StateVector<f64>, reach: f64) -> usize {
    let mean_n: f64 = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| n as f64 * c.norm_sqr())
        .sum::<f64>()
        / psi.norm().powi(2);
    let amp = reach + mean_n.sqrt() + 6.0;
    ((amp * amp).ceil() as usize).max(psi.dim())
}

fn parity_sum(x: &DVector<Cplx<f64>>) -> f64 {
    x.iter()
        .enumerate()
        .map(|(n, c)| if n % 2 == 0 { c.norm_sqr() } else { -c.norm_sqr() })
        .sum()
}

fn guard_weight(x: &DVector<Cplx<f64>>) -> f64 {
    let n = x.len();
    x.rows(n - DISPLACEMENT_GUARD, DISPLACEMENT_GUARD).norm_squared()
}

struct Displacer {
    re: DisplacementFamily<f64>,
    im: DisplacementFamily<f64>,
    psi: DVector<Cplx<f64>>,
}

impl Displacer {
    fn new(psi: &StateVector<f64>, reach: f64) -> Result<Self> {
        let dim = working_dim(psi, reach);
        let psi = psi.normalized()?.padded(dim + DISPLACEMENT_GUARD)?;
        Ok(Self {
            re: DisplacementFamily::new(Cplx::new(1.0, 0.0), dim)?,
            im: DisplacementFamily::new(Cplx::new(0.0, 1.0), dim)?,
            psi: psi.amplitudes().clone(),
        })
    }

    fn row(&self, y: f64) -> DVector<Cplx<f64>> {
        self.im.apply_work(-y, &self.psi)
    }

    /// `(W, guard weight)` at `x + i y`, given `row(y)`.
    fn cell(&self, row: &DVector<Cplx<f64>>, x: f64) -> (f64, f64) {
        let phi = self.re.apply_work(-x, row);
        (FRAC_2_PI * parity_sum(&phi), guard_weight(&phi).max(guard_weight(row)))
    }
}

/// `W(β)` at one point.
pub fn wigner_point(psi: &StateVector<f64>, beta: Cplx<f64>) -> Result<f64> {
    let d = Displacer::new(psi, beta.norm())?;
    Ok(d.cell(&d.row(beta.im), beta.re).0)
}

/// `(2/π) <ψ|P|ψ>` computed directly in the Fock basis.
pub fn origin_value(psi: &StateVector<f64>) -> Result<f64> {
    let psi = psi.normalized()?;
    Ok(FRAC_2_PI * parity_sum(psi.amplitudes()))
}

/// Wigner function on a square grid; rows are evaluated in parallel.
pub fn wigner(psi: &StateVector<f64>, grid: GridSpec) -> Result<WignerGrid> {
    grid.validate()?;
    let axis = grid.axis();
    let d = Displacer::new(psi, grid.half_width * std::f64::consts::SQRT_2)?;
    let rows: Vec<(Vec<f64>, Vec<bool>)> = axis
        .par_iter()
        .map(|&y| {
            let row = d.row(y);
            axis.iter()
                .map(|&x| {
                    let (w, tail) = d.cell(&row, x);
                    (w, tail > TAIL_THRESHOLD)
                })
                .unzip()
        })
        .collect();
    let (values, low_confidence) = rows.into_iter().unzip();
    let at_origin = d.cell(&d.row(0.0), 0.0).0;
    Ok(WignerGrid {
        re_axis: axis.clone(),
        im_axis: axis,
        values,
        low_confidence,
        origin_residual: at_origin - origin_value(psi)?,
        work_dim: d.re.work_dim(),
    })
}

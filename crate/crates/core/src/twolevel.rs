//! Two-level reduction of the driven oscillator.
//!
//! Confined to the cat subspace the Hamiltonian is
//! `H = ½ [[Δz, Ω e^{-iφ}], [Ω e^{iφ}, -Δz]]`, a spin in the field
//! `R = (Ω cos φ, Ω sin φ, Δz)`. This module gives its eigen-structure,
//! reference dynamics on the same time grid as the oscillator runs, and the
//! monopole-flux Chern number of the ramp manifold.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::dynamics::{march, InitialState, Sample};
use crate::error::{Error, Result};
use crate::fock::{Operator, StateVector};
use crate::model::ModelParams;
use crate::scalar::{Cplx, Real};

/// Eigenpairs of the two-level Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigensystem<R: Real> {
    pub e_plus: R,
    pub e_minus: R,
    /// `Θ = atan2(Ω, Δz)`, in `[0, π]` for `Ω >= 0`.
    pub mixing_angle: R,
    /// `cos(Θ/2)|0̄> + e^{iφ} sin(Θ/2)|1̄>`, eigenvalue `E+`.
    pub excited: [Cplx<R>; 2],
    /// `-e^{-iφ} sin(Θ/2)|0̄> + cos(Θ/2)|1̄>`, eigenvalue `E-`.
    pub ground: [Cplx<R>; 2],
}

pub fn eigensystem<R: Real>(delta_z: R, omega: R, phi: R) -> Result<Eigensystem<R>> {
    if delta_z == R::zero() && omega == R::zero() {
        return Err(Error::DegenerateHamiltonian);
    }
    let half: R = crate::scalar::real(0.5);
    let r = (delta_z * delta_z + omega * omega).sqrt();
    let big_theta = omega.atan2(delta_z);
    let (s, c) = (big_theta * half).sin_cos();
    let e = Cplx::new(phi.cos(), phi.sin());
    let zero = R::zero();
    Ok(Eigensystem {
        e_plus: r * half,
        e_minus: -r * half,
        mixing_angle: big_theta,
        excited: [Cplx::new(c, zero), e * s],
        ground: [-e.conj() * s, Cplx::new(c, zero)],
    })
}

/// `½ [[Δz, Ω e^{-iφ}], [Ω e^{iφ}, -Δz]]` as a 2x2 operator.
pub fn hamiltonian<R: Real>(delta_z: R, omega: R, phi: R) -> Result<Operator<R>> {
    let half: R = crate::scalar::real(0.5);
    let e = Cplx::new(phi.cos(), phi.sin()) * (omega * half);
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            Cplx::new(delta_z * half, R::zero()),
            e.conj(),
            e,
            Cplx::new(-delta_z * half, R::zero()),
        ],
    );
    Operator::hermitian(m)
}

/// Bloch unit vector of the eigenstate on the given branch at this point.
pub fn eigen_bloch(delta_z: f64, omega: f64, phi: f64, upper: bool) -> Result<[f64; 3]> {
    let es = eigensystem(delta_z, omega, phi)?;
    let th = es.mixing_angle;
    let n = [th.sin() * phi.cos(), th.sin() * phi.sin(), th.cos()];
    Ok(if upper { n } else { [-n[0], -n[1], -n[2]] })
}

fn sigma_y() -> Operator<f64> {
    let i = Cplx::new(0.0, 1.0);
    let z = Cplx::new(0.0, 0.0);
    Operator::hermitian(DMatrix::from_row_slice(2, 2, &[z, -i, i, z])).expect("sigma_y is Hermitian")
}

fn bloch_of(psi: &StateVector<f64>) -> (f64, f64, f64, f64) {
    let a = psi.amplitudes();
    let cross = a[0].conj() * a[1];
    let pop = a[0].norm_sqr() + a[1].norm_sqr();
    (2.0 * cross.re, 2.0 * cross.im, a[0].norm_sqr() - a[1].norm_sqr(), pop)
}

/// Two-level propagation on the oscillator's time grid.
///
/// `initial` may be `Ket0`, `Ket1` or a custom 2-component state. Returns
/// samples at `n_samples` uniform times; `steps_per_sample` midpoint steps
/// are taken between samples.
pub fn reference_dynamics(
    params: &ModelParams,
    sta: bool,
    initial: &InitialState,
    steps_per_sample: usize,
    n_samples: usize,
) -> Result<Vec<Sample>> {
    params.validate()?;
    let ramp = params.ramp()?;
    let chi = params.chi()?;
    if sta && (params.delta_z - params.omega0).abs() > 1e-12 * params.omega0.abs().max(params.delta_z.abs()) {
        return Err(Error::InvalidParams("counterdiabatic drive requires delta_z = omega0".into()));
    }
    let one = Cplx::new(1.0, 0.0);
    let zero = Cplx::new(0.0, 0.0);
    let psi0 = match initial {
        InitialState::Ket0 => StateVector::from_slice(&[one, zero])?,
        InitialState::Ket1 => StateVector::from_slice(&[zero, one])?,
        InitialState::Custom(s) => {
            if s.dim() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, found: s.dim() });
            }
            s.normalized()?
        }
    };
    let sy = sigma_y();
    let h_at = |t: f64| -> Result<Operator<f64>> {
        let th = ramp.theta(t);
        let mut h = hamiltonian(params.delta_z_at(th), params.omega_at(th), params.phi)?;
        if sta {
            let rate = crate::model::cd_coefficient(th, ramp.theta_dot(t), chi)?;
            h = h.add_scaled(0.5 * rate, &sy);
        }
        Ok(h)
    };
    let mut samples = Vec::with_capacity(n_samples);
    march(psi0, params.tau, steps_per_sample, n_samples, h_at, |_, t, psi| {
        let (sx, sy, sz, pop) = bloch_of(psi);
        samples.push(Sample {
            t,
            theta: ramp.theta(t),
            sx,
            sy,
            sz,
            pop,
            norm: psi.norm(),
        });
        Ok(())
    })?;
    Ok(samples)
}

/// Solid angle subtended at the origin by triangle `(a, b, c)`, signed by
/// the orientation of `(b - a) x (c - a)`.
fn triangle_solid_angle(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let dot = |u: [f64; 3], v: [f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    let cross = |u: [f64; 3], v: [f64; 3]| {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let (la, lb, lc) = (dot(a, a).sqrt(), dot(b, b).sqrt(), dot(c, c).sqrt());
    let num = dot(a, cross(b, c));
    let den = la * lb * lc + dot(a, b) * lc + dot(a, c) * lb + dot(b, c) * la;
    2.0 * num.atan2(den)
}

/// Flux of the monopole field `R / 2R³` through the triangulated manifold
/// `(Ω0 sin θ cos φ, Ω0 sin θ sin φ, δz cos θ + δ0)`, divided by 2π.
fn monopole_flux(omega0: f64, delta_z: f64, delta_0: f64, n: usize) -> f64 {
    let point = |i: usize, j: usize| {
        let th = PI * i as f64 / n as f64;
        let ph = 2.0 * PI * (j % n) as f64 / n as f64;
        [
            omega0 * th.sin() * ph.cos(),
            omega0 * th.sin() * ph.sin(),
            delta_z * th.cos() + delta_0,
        ]
    };
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let p00 = point(i, j);
            let p10 = point(i + 1, j);
            let p11 = point(i + 1, j + 1);
            let p01 = point(i, j + 1);
            total += triangle_solid_angle(p00, p10, p11);
            total += triangle_solid_angle(p00, p11, p01);
        }
    }
    // flux of R/2R^3 is half the solid angle
    0.5 * total / (2.0 * PI)
}

/// First Chern number of the unit-aspect manifold with offset `χ`.
pub fn monopole_chern(chi: f64) -> Result<f64> {
    monopole_chern_on(1.0, 1.0, chi)
}

/// First Chern number for a general ellipsoidal manifold, by solid-angle
/// quadrature on a (θ, φ) grid that starts at 200 x 200 and doubles until
/// successive values differ by less than 1e-6.
pub fn monopole_chern_on(omega0: f64, delta_z: f64, delta_0: f64) -> Result<f64> {
    if omega0 == 0.0 || delta_z == 0.0 {
        return Err(Error::InvalidParams("degenerate manifold".into()));
    }
    let chi = delta_0 / delta_z;
    if (chi.abs() - 1.0).abs() <= 1e-12 {
        return Err(Error::OnManifoldDegeneracy { chi });
    }
    let mut n = 200;
    let mut prev = monopole_flux(omega0, delta_z, delta_0, n);
    for _ in 0..4 {
        n *= 2;
        let next = monopole_flux(omega0, delta_z, delta_0, n);
        if (next - prev).abs() < 1e-6 {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

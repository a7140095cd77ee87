//! Driven Kerr-oscillator Hamiltonians and ramp schedules.
//!
//! Frequencies are angular (rad/µs) and times are in µs. The topological
//! Hamiltonian is
//!
//! ```text
//! H(t) = H0 + (Δz/2) Hz ± (Ω/2) Hx cos φ + (Ω/2) Hy sin φ [+ (Θ̇/2) σ̄y]
//! Δz = δz cos θ(t) + δ0,   Ω = Ω0 sin θ(t)
//! ```
//!
//! where the bracketed counterdiabatic term is present for the STA protocol.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{annihilation, number, Operator};
use crate::logical::{build_frame, LogicalFrame, Orthogonalization};
use crate::scalar::Cplx;

type C = Cplx<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// `θ = π t / τ`
    Linear,
    /// `θ = (π/2) [1 - cos(π t / τ)]`
    Cosine,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RampSchedule {
    pub shape: Schedule,
    pub tau: f64,
}

impl RampSchedule {
    pub fn new(shape: Schedule, tau: f64) -> Result<Self> {
        if tau.is_nan() || tau <= 0.0 {
            return Err(Error::InvalidParams(format!("tau must be positive, got {tau}")));
        }
        Ok(Self { shape, tau })
    }

    pub fn theta(&self, t: f64) -> f64 {
        match self.shape {
            Schedule::Linear => PI * t / self.tau,
            Schedule::Cosine => 0.5 * PI * (1.0 - (PI * t / self.tau).cos()),
        }
    }

    /// Analytic `dθ/dt` in rad/µs.
    pub fn theta_dot(&self, t: f64) -> f64 {
        match self.shape {
            Schedule::Linear => PI / self.tau,
            Schedule::Cosine => 0.5 * PI * PI / self.tau * (PI * t / self.tau).sin(),
        }
    }
}

/// Prefactor `c` in `Hx = c a^dagger a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HxPrefactor {
    /// `sinh(2 α0²) / α0²`: the value for which the projection onto the
    /// orthonormal cat subspace has off-diagonal element exactly -1.
    #[default]
    Exact,
    /// `e^{2 α0²} / |2 α0|`.
    ExpOverTwoAlpha,
    /// `e^{2 α0²} / α0²`, from the bare coherent-state matrix element
    /// `<α0|a^dagger a|-α0> = -α0² e^{-2 α0²}` without orthonormalization.
    RawOverlap,
}

impl HxPrefactor {
    pub fn value(self, alpha0: f64) -> f64 {
        let a2 = alpha0 * alpha0;
        match self {
            HxPrefactor::Exact => (2.0 * a2).sinh() / a2,
            HxPrefactor::ExpOverTwoAlpha => (2.0 * a2).exp() / (2.0 * alpha0.abs()),
            HxPrefactor::RawOverlap => (2.0 * a2).exp() / a2,
        }
    }
}

/// Sign with which the `Hx` drive enters the total Hamiltonian.
///
/// `Ī Hx Ī` carries `-σ̄x`, so the two-level drive `+(Ω/2) σ̄x` needs
/// `-(Ω/2) Hx`. `Literal` keeps `+(Ω/2) Hx`, which mirrors the manifold
/// through the y-z plane and flips the sign of the extracted curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XDriveSign {
    #[default]
    Projected,
    Literal,
}

impl XDriveSign {
    fn factor(self) -> f64 {
        match self {
            XDriveSign::Projected => -1.0,
            XDriveSign::Literal => 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Kerr amplitude `K` (rad/µs).
    pub kerr: f64,
    /// Two-photon pump amplitude `P` (rad/µs).
    pub pump: f64,
    /// Drive scale `Ω0` (rad/µs).
    pub omega0: f64,
    /// z-ramp amplitude `δz` (rad/µs).
    pub delta_z: f64,
    /// Manifold offset `δ0` (rad/µs).
    pub delta_0: f64,
    /// Protocol duration (µs).
    pub tau: f64,
    pub schedule: Schedule,
    /// Azimuth (rad).
    pub phi: f64,
    pub hx_prefactor: HxPrefactor,
    pub x_drive: XDriveSign,
    /// Fock truncation.
    pub dim: usize,
    pub orthogonalization: Orthogonalization,
}

impl ModelParams {
    /// Linear-response run: `P = 2K = 2π·1000`, `Ω0 = P / (10 e^{2α0²})`,
    /// `δz = 2Ω0`, linear ramp, `τ = 40 µs`.
    pub fn linear_response() -> Self {
        let pump = 2.0 * PI * 1000.0;
        let kerr = pump / 2.0;
        let alpha_sq = pump / kerr;
        let omega0 = pump / (10.0 * (2.0 * alpha_sq).exp());
        Self {
            kerr,
            pump,
            omega0,
            delta_z: 2.0 * omega0,
            delta_0: 0.0,
            tau: 40.0,
            schedule: Schedule::Linear,
            phi: 0.0,
            hx_prefactor: HxPrefactor::Exact,
            x_drive: XDriveSign::Projected,
            dim: 30,
            orthogonalization: Orthogonalization::Lowdin,
        }
    }

    /// Shortcut-to-adiabaticity run: `Ω0 = δz = 2π·0.02` (20 kHz), cosine
    /// ramp, `τ = 1.5 µs`.
    pub fn sta() -> Self {
        let omega0 = 2.0 * PI * 0.02;
        Self {
            omega0,
            delta_z: omega0,
            tau: 1.5,
            schedule: Schedule::Cosine,
            ..Self::linear_response()
        }
    }

    /// Sets `δ0 = χ δz`.
    pub fn with_chi(mut self, chi: f64) -> Self {
        self.delta_0 = chi * self.delta_z;
        self
    }

    pub fn alpha0(&self) -> f64 {
        (self.pump / self.kerr).sqrt()
    }

    /// `χ = δ0 / δz`.
    pub fn chi(&self) -> Result<f64> {
        if self.delta_z == 0.0 {
            if self.delta_0 == 0.0 {
                return Ok(0.0);
            }
            return Err(Error::InvalidParams("chi undefined: delta_0 set with delta_z = 0".into()));
        }
        Ok(self.delta_0 / self.delta_z)
    }

    /// `e^{2 α0²} Ω0 / P`.
    pub fn stabilizer_ratio(&self) -> f64 {
        (2.0 * self.alpha0().powi(2)).exp() * self.omega0 / self.pump
    }

    pub fn ramp(&self) -> Result<RampSchedule> {
        RampSchedule::new(self.schedule, self.tau)
    }

    pub fn delta_z_at(&self, theta: f64) -> f64 {
        self.delta_z * theta.cos() + self.delta_0
    }

    pub fn omega_at(&self, theta: f64) -> f64 {
        self.omega0 * theta.sin()
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("kerr", self.kerr), ("pump", self.pump), ("tau", self.tau)];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let finite = [
            ("omega0", self.omega0),
            ("delta_z", self.delta_z),
            ("delta_0", self.delta_0),
            ("phi", self.phi),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        if self.dim < 2 {
            return Err(Error::InvalidDimension { dim: self.dim });
        }
        self.chi()?;
        Ok(())
    }
}

fn from_dense(m: DMatrix<C>) -> Result<Operator<f64>> {
    Operator::hermitian(m)
}

/// `H0 = -(K/2) a†² a² + (P/2)(a†² + a²)`.
pub fn h0(params: &ModelParams) -> Result<Operator<f64>> {
    let n = params.dim;
    let a = annihilation::<f64>(n)?;
    let a2 = a.matrix() * a.matrix();
    let mut m = a2.adjoint() + &a2;
    m.apply(|z| *z *= 0.5 * params.pump);
    for k in 0..n {
        m[(k, k)] -= C::new(0.5 * params.kerr * (k * k.saturating_sub(1)) as f64, 0.0);
    }
    from_dense(m)
}

/// `Hz = (a† + a) / (2 α0)`.
pub fn hz(params: &ModelParams) -> Result<Operator<f64>> {
    let a = annihilation::<f64>(params.dim)?;
    let m = (a.matrix().adjoint() + a.matrix()).map(|z| z / (2.0 * params.alpha0()));
    from_dense(m)
}

/// `Hx = c a† a` with `c` from [`HxPrefactor`].
pub fn hx(params: &ModelParams) -> Result<Operator<f64>> {
    let c = params.hx_prefactor.value(params.alpha0());
    Ok(number::<f64>(params.dim)?.scale_real(c))
}

/// `Hy = (-i / 2α0) e^{2 α0²} (a† - a)`.
pub fn hy(params: &ModelParams) -> Result<Operator<f64>> {
    let alpha0 = params.alpha0();
    let a = annihilation::<f64>(params.dim)?;
    let pref = C::new(0.0, -(2.0 * alpha0 * alpha0).exp() / (2.0 * alpha0));
    let m = (a.matrix().adjoint() - a.matrix()).map(|z| z * pref);
    from_dense(m)
}

/// `Θ̇ = θ̇ (1 + χ cos θ) / (1 + 2χ cos θ + χ²)`, the time derivative of
/// `Θ = arctan(sin θ / (cos θ + χ))`. Valid when `δz = Ω0`.
pub fn cd_coefficient(theta: f64, theta_dot: f64, chi: f64) -> Result<f64> {
    let c = theta.cos();
    let den = 1.0 + 2.0 * chi * c + chi * chi;
    if den.abs() <= 1e-12 {
        return Err(Error::SingularCounterdiabatic { theta, chi });
    }
    Ok(theta_dot * (1.0 + chi * c) / den)
}

/// Prebuilt operators for one parameter set.
#[derive(Clone, Debug)]
pub struct Model {
    params: ModelParams,
    ramp: RampSchedule,
    chi: f64,
    frame: LogicalFrame<f64>,
    h0: Operator<f64>,
    hz: Operator<f64>,
    hx: Operator<f64>,
    hy: Operator<f64>,
}

impl Model {
    pub fn new(params: ModelParams) -> Result<Self> {
        params.validate()?;
        let ramp = params.ramp()?;
        let chi = params.chi()?;
        let frame = build_frame(params.alpha0(), params.dim, params.orthogonalization)?;
        Ok(Self {
            ramp,
            chi,
            frame,
            h0: h0(&params)?,
            hz: hz(&params)?,
            hx: hx(&params)?,
            hy: hy(&params)?,
            params,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn ramp(&self) -> &RampSchedule {
        &self.ramp
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn frame(&self) -> &LogicalFrame<f64> {
        &self.frame
    }

    pub fn h0(&self) -> &Operator<f64> {
        &self.h0
    }

    pub fn hz(&self) -> &Operator<f64> {
        &self.hz
    }

    pub fn hx(&self) -> &Operator<f64> {
        &self.hx
    }

    pub fn hy(&self) -> &Operator<f64> {
        &self.hy
    }

    /// `Θ̇(t)` for the counterdiabatic drive. Requires `δz = Ω0`.
    pub fn cd_rate(&self, t: f64) -> Result<f64> {
        let p = &self.params;
        if (p.delta_z - p.omega0).abs() > 1e-12 * p.omega0.abs().max(p.delta_z.abs()) {
            return Err(Error::InvalidParams(format!(
                "counterdiabatic drive requires delta_z = omega0 (got {} vs {})",
                p.delta_z, p.omega0
            )));
        }
        cd_coefficient(self.ramp.theta(t), self.ramp.theta_dot(t), self.chi)
    }

    /// `H(t)`, with the counterdiabatic `(Θ̇/2) σ̄y` term when `sta` is set.
    pub fn total_hamiltonian(&self, t: f64, sta: bool) -> Result<Operator<f64>> {
        let tau = self.params.tau;
        if !(0.0..=tau).contains(&t) {
            return Err(Error::TimeOutOfRange { t, tau });
        }
        let p = &self.params;
        let theta = self.ramp.theta(t);
        let dz = p.delta_z_at(theta);
        let om = p.omega_at(theta);
        let mut h = self.h0.add_scaled(0.5 * dz, &self.hz);
        let cx = p.x_drive.factor() * 0.5 * om * p.phi.cos();
        if cx != 0.0 {
            h = h.add_scaled(cx, &self.hx);
        }
        let cy = 0.5 * om * p.phi.sin();
        if cy != 0.0 {
            h = h.add_scaled(cy, &self.hy);
        }
        if sta {
            let rate = self.cd_rate(t)?;
            h = h.add_scaled(0.5 * rate, self.frame.pauli_y());
        }
        Ok(h)
    }

    /// `<i|M|j>` on the logical kets.
    pub fn logical_block(&self, m: &Operator<f64>) -> Result<[[C; 2]; 2]> {
        let kets = [self.frame.ket0(), self.frame.ket1()];
        let mut out = [[C::new(0.0, 0.0); 2]; 2];
        for (i, bra) in kets.iter().enumerate() {
            for (j, ket) in kets.iter().enumerate() {
                out[i][j] = bra.inner(&m.apply(ket)?)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, parity};

    fn lr_model() -> Model {
        Model::new(ModelParams::linear_response()).unwrap()
    }

    #[test]
    fn presets_match_parameter_tables() {
        let p = ModelParams::linear_response();
        assert!((p.pump - 2.0 * PI * 1000.0).abs() < 1e-9);
        assert!((p.kerr - PI * 1000.0).abs() < 1e-9);
        assert!((p.alpha0() - 2f64.sqrt()).abs() < 1e-15);
        assert!((p.stabilizer_ratio() - 0.1).abs() < 1e-12);
        assert!((p.delta_z - 2.0 * p.omega0).abs() < 1e-15);
        let s = ModelParams::sta();
        assert!((s.omega0 - 0.12566370614359174).abs() < 1e-12);
        assert_eq!(s.omega0, s.delta_z);
        assert_eq!(s.schedule, Schedule::Cosine);
        assert_eq!(s.tau, 1.5);
    }

    #[test]
    fn chi_undefined_without_delta_z() {
        let mut p = ModelParams::sta();
        p.delta_z = 0.0;
        p.delta_0 = 0.1;
        assert!(p.chi().is_err());
        assert!(Model::new(p).is_err());
    }

    #[test]
    fn ramp_endpoints_and_derivatives() {
        for shape in [Schedule::Linear, Schedule::Cosine] {
            let r = RampSchedule::new(shape, 1.5).unwrap();
            assert!(r.theta(0.0).abs() < 1e-15);
            assert!((r.theta(1.5) - PI).abs() < 1e-14);
            for k in 1..30 {
                let t = 1.5 * k as f64 / 30.0;
                let h = 1e-5;
                let fd = (r.theta(t + h) - r.theta(t - h)) / (2.0 * h);
                let rel = (fd - r.theta_dot(t)).abs() / r.theta_dot(t).abs();
                assert!(rel <= 1e-6, "{shape:?} t={t} rel={rel}");
            }
        }
    }

    #[test]
    fn h0_cat_eigenvalue() {
        let p = ModelParams::linear_response();
        let h = h0(&p).unwrap();
        let ev = p.pump * p.pump / (2.0 * p.kerr);
        assert!((ev - p.pump).abs() < 1e-9);
        for sign in [1.0, -1.0] {
            let cs = coherent_state(C::new(sign * p.alpha0(), 0.0), p.dim).unwrap().state;
            let hpsi = h.apply(&cs).unwrap();
            let resid = hpsi.combine(C::new(1.0, 0.0), &cs, C::new(-ev, 0.0)).unwrap().norm();
            assert!(resid <= 1e-6 * p.pump, "resid {resid}");
        }
    }

    #[test]
    fn h0_commutes_with_parity() {
        let p = ModelParams::linear_response();
        let h = h0(&p).unwrap();
        let par = parity::<f64>(p.dim).unwrap();
        assert!(h.commutator(&par).max_abs() <= 1e-10);
    }

    #[test]
    fn drive_projections() {
        let m = lr_model();
        let bz = m.logical_block(m.hz()).unwrap();
        assert!((bz[0][0] - C::new(1.0, 0.0)).norm() < 0.02);
        assert!((bz[1][1] - C::new(-1.0, 0.0)).norm() < 0.02);
        assert!(bz[0][1].norm() < 0.02);

        let by = m.logical_block(m.hy()).unwrap();
        assert!((by[0][1] - C::new(0.0, -1.0)).norm() < 0.02);
        assert!(by[0][0].norm() < 0.02 && by[1][1].norm() < 0.02);

        let bx = m.logical_block(m.hx()).unwrap();
        assert!((bx[0][1] - C::new(-1.0, 0.0)).norm() < 0.02);
        assert!((bx[1][0] - C::new(-1.0, 0.0)).norm() < 0.02);
        // diagonal: c <n>_cat = cosh(2 α0²) for the exact prefactor
        let a2: f64 = 2.0;
        assert!((bx[0][0].re - (2.0 * a2).cosh()).abs() < 0.02);
        assert!((bx[0][0] - bx[1][1]).norm() < 1e-9);
    }

    #[test]
    fn alternative_hx_prefactors() {
        // Fock-sum oracle for the orthonormal projection: off-diagonal is
        // -c α0² / sinh(2 α0²) for Hx = c a†a.
        let a2: f64 = 2.0;
        for pref in [HxPrefactor::ExpOverTwoAlpha, HxPrefactor::RawOverlap] {
            let p = ModelParams { hx_prefactor: pref, ..ModelParams::linear_response() };
            let m = Model::new(p.clone()).unwrap();
            let bx = m.logical_block(m.hx()).unwrap();
            let c = pref.value(p.alpha0());
            let expected = -c * a2 / (2.0 * a2).sinh();
            assert!((bx[0][1].re - expected).abs() < 1e-6, "{pref:?}");
        }
        // raw-frame matrix element of the bare coherent states
        let p = ModelParams {
            hx_prefactor: HxPrefactor::RawOverlap,
            orthogonalization: Orthogonalization::Raw,
            ..ModelParams::linear_response()
        };
        let m = Model::new(p).unwrap();
        let bx = m.logical_block(m.hx()).unwrap();
        assert!((bx[0][1].re + 1.0).abs() < 1e-9);
        assert!((bx[0][0].re - (2.0 * a2).exp()).abs() < 1e-9);
        // e^{2 α0²} / |2 α0| in the raw frame gives -1/sqrt(2)
        let p = ModelParams {
            hx_prefactor: HxPrefactor::ExpOverTwoAlpha,
            orthogonalization: Orthogonalization::Raw,
            ..ModelParams::linear_response()
        };
        let m = Model::new(p).unwrap();
        assert!((m.logical_block(m.hx()).unwrap()[0][1].re + 0.5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn projected_drive_matches_two_level_form() {
        // (Δz/2)Hz - (Ω/2)Hx cos φ + (Ω/2)Hy sin φ projected onto the frame
        // equals ½[[Δz, Ω e^{-iφ}], [Ω e^{iφ}, -Δz]] plus -(Ω cos φ/2) cosh(2α0²) Ī.
        for phi in [0.0, 0.7, 2.0] {
            let p = ModelParams { phi, ..ModelParams::linear_response() };
            let m = Model::new(p.clone()).unwrap();
            for &t in &[5.0, 13.0, 20.0, 31.0] {
                let h = m.total_hamiltonian(t, false).unwrap();
                let drive = h.add_scaled(-1.0, m.h0());
                let b = m.logical_block(&drive).unwrap();
                let th = m.ramp().theta(t);
                let dz = p.delta_z_at(th);
                let om = p.omega_at(th);
                let shift = -0.5 * om * phi.cos() * (2.0 * p.alpha0().powi(2)).cosh();
                let e = C::new(0.0, phi).exp();
                let want = [
                    [C::new(0.5 * dz + shift, 0.0), 0.5 * om / e],
                    [0.5 * om * e, C::new(-0.5 * dz + shift, 0.0)],
                ];
                let tol = 0.02 * dz.abs().max(om.abs());
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((b[i][j] - want[i][j]).norm() <= tol, "phi={phi} t={t} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn total_hamiltonian_examples() {
        let m = lr_model();
        let p = m.params().clone();
        let h0t = m.total_hamiltonian(0.0, false).unwrap();
        let want = m.h0().add_scaled(0.5 * p.delta_z, m.hz());
        assert!(h0t.max_abs_diff(&want) < 1e-9);
        assert!(h0t.is_hermitian());

        let th = m.ramp().theta(p.tau / 2.0);
        assert!((th - PI / 2.0).abs() < 1e-15);
        assert!(p.delta_z_at(th).abs() < 1e-12);
        assert!((p.omega_at(th) - p.omega0).abs() < 1e-12);

        assert!(matches!(m.total_hamiltonian(-0.1, false), Err(Error::TimeOutOfRange { .. })));
        assert!(matches!(m.total_hamiltonian(40.1, false), Err(Error::TimeOutOfRange { .. })));
    }

    #[test]
    fn sta_requires_matched_amplitudes() {
        let m = lr_model();
        assert!(matches!(m.total_hamiltonian(1.0, true), Err(Error::InvalidParams(_))));
        let s = Model::new(ModelParams::sta()).unwrap();
        for k in 0..=10 {
            let t = 1.5 * k as f64 / 10.0;
            // chi = 0: Θ = θ
            assert!((s.cd_rate(t).unwrap() - s.ramp().theta_dot(t)).abs() < 1e-12);
            assert!(s.total_hamiltonian(t, true).unwrap().hermitian_deviation() <= 1e-10);
        }
    }

    #[test]
    fn cd_coefficient_examples() {
        assert_eq!(cd_coefficient(1.1, 2.0, 0.0).unwrap(), 2.0);
        for chi in [-0.5, 0.3, 2.0] {
            assert!((cd_coefficient(0.0, 1.0, chi).unwrap() - 1.0 / (1.0 + chi)).abs() < 1e-15);
        }
        // central difference of atan2(sin θ, cos θ + χ) at θ = π/2, χ = 1.2
        let big_theta = |th: f64| th.sin().atan2(th.cos() + 1.2);
        let h = 1e-6;
        let fd = (big_theta(PI / 2.0 + h) - big_theta(PI / 2.0 - h)) / (2.0 * h);
        let v = cd_coefficient(PI / 2.0, 1.0, 1.2).unwrap();
        assert!((v - fd).abs() < 1e-8);
        assert!((v - 0.4098).abs() < 1e-4);
        assert!(matches!(cd_coefficient(0.0, 1.0, -1.0), Err(Error::SingularCounterdiabatic { .. })));
        assert!(matches!(cd_coefficient(PI, 1.0, 1.0), Err(Error::SingularCounterdiabatic { .. })));
    }

    #[test]
    fn cd_matches_finite_difference_along_ramp() {
        for chi in [-1.5, -0.5, 0.0, 0.5, 1.2] {
            let s = Model::new(ModelParams::sta().with_chi(chi)).unwrap();
            let r = *s.ramp();
            let big_theta = |t: f64| {
                let th = r.theta(t);
                th.sin().atan2(th.cos() + chi)
            };
            for k in 1..20 {
                let t = 1.5 * k as f64 / 20.0;
                let h = 1e-6;
                let fd = (big_theta(t + h) - big_theta(t - h)) / (2.0 * h);
                let v = s.cd_rate(t).unwrap();
                assert!((v - fd).abs() <= 1e-6 * v.abs().max(1e-3), "chi={chi} t={t}");
            }
        }
    }
}

//! Coherent-state qubit embedded in the Fock space.
//!
//! `|0̄> ~ |alpha0>` and `|1̄> ~ |-alpha0>`; the logical Pauli operators are
//! full Fock-space matrices built from dyads of the two basis kets.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::{coherent_state, Operator, StateVector};
use crate::scalar::{real, Cplx, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orthogonalization {
    /// Symmetric orthonormalization of `{|alpha0>, |-alpha0>}`.
    #[default]
    Lowdin,
    /// Bare coherent states; overlap `exp(-2 alpha0^2)` is left in place.
    Raw,
}

#[derive(Clone, Debug)]
pub struct LogicalFrame<R: Real> {
    alpha0: R,
    orthogonalization: Orthogonalization,
    raw_overlap: Cplx<R>,
    ket0: StateVector<R>,
    ket1: StateVector<R>,
    projector: Operator<R>,
    pauli_x: Operator<R>,
    pauli_y: Operator<R>,
    pauli_z: Operator<R>,
}

/// Bloch-vector readout of a Fock-space state. Components are not divided
/// by the subspace population.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bloch<R> {
    pub sx: R,
    pub sy: R,
    pub sz: R,
    pub pop: R,
}

impl<R: Real> Bloch<R> {
    pub fn length(&self) -> R {
        (self.sx * self.sx + self.sy * self.sy + self.sz * self.sz).sqrt()
    }

    /// Components divided by the logical population.
    pub fn renormalized(&self) -> Self {
        Self {
            sx: self.sx / self.pop,
            sy: self.sy / self.pop,
            sz: self.sz / self.pop,
            pop: R::one(),
        }
    }
}

fn dyad<R: Real>(ket: &StateVector<R>, bra: &StateVector<R>) -> DMatrix<Cplx<R>> {
    ket.amplitudes() * bra.amplitudes().adjoint()
}

/// Builds the logical frame for `alpha0 > 0` on `dim` Fock levels.
pub fn build_frame<R: Real>(alpha0: R, dim: usize, orthogonalization: Orthogonalization) -> Result<LogicalFrame<R>> {
    if alpha0.partial_cmp(&R::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidParams("alpha0 must be positive".into()));
    }
    let plus = coherent_state(Cplx::new(alpha0, R::zero()), dim)?.state;
    let minus = coherent_state(Cplx::new(-alpha0, R::zero()), dim)?.state;
    let s = plus.inner(&minus)?;
    let s_abs = s.norm_sqr().sqrt();
    if s_abs >= real(0.5) {
        return Err(Error::IllConditionedBasis {
            overlap: nalgebra::try_convert(s_abs).unwrap_or(f64::NAN),
        });
    }

    let (ket0, ket1) = match orthogonalization {
        Orthogonalization::Raw => (plus, minus),
        Orthogonalization::Lowdin => {
            // S = I + B with B = [[0, s], [s*, 0]] and B^2 = |s|^2 I, so
            // S^{-1/2} = p I + q B.
            let one = R::one();
            let f_hi = (one + s_abs).sqrt().recip();
            let f_lo = (one - s_abs).sqrt().recip();
            let p = (f_hi + f_lo) * real(0.5);
            let q = if s_abs > R::zero() {
                (f_hi - f_lo) / (s_abs + s_abs)
            } else {
                real(-0.5)
            };
            let pc = Cplx::new(p, R::zero());
            let k0 = plus.combine(pc, &minus, s.conj() * q)?;
            let k1 = plus.combine(s * q, &minus, pc)?;
            (k0, k1)
        }
    };

    let i = Cplx::new(R::zero(), R::one());
    let d00 = dyad(&ket0, &ket0);
    let d11 = dyad(&ket1, &ket1);
    let d01 = dyad(&ket0, &ket1);
    let d10 = dyad(&ket1, &ket0);
    let projector = Operator::hermitian(&d00 + &d11)?;
    let pauli_z = Operator::hermitian(&d00 - &d11)?;
    let pauli_x = Operator::hermitian(&d01 + &d10)?;
    let pauli_y = Operator::hermitian(d01 * (-i) + d10 * i)?;

    Ok(LogicalFrame {
        alpha0,
        orthogonalization,
        raw_overlap: s,
        ket0,
        ket1,
        projector,
        pauli_x,
        pauli_y,
        pauli_z,
    })
}

impl<R: Real> LogicalFrame<R> {
    pub fn alpha0(&self) -> R {
        self.alpha0
    }

    pub fn dim(&self) -> usize {
        self.ket0.dim()
    }

    pub fn orthogonalization(&self) -> Orthogonalization {
        self.orthogonalization
    }

    /// `<alpha0|-alpha0>` before any orthogonalization.
    pub fn raw_overlap(&self) -> Cplx<R> {
        self.raw_overlap
    }

    pub fn ket0(&self) -> &StateVector<R> {
        &self.ket0
    }

    pub fn ket1(&self) -> &StateVector<R> {
        &self.ket1
    }

    pub fn projector(&self) -> &Operator<R> {
        &self.projector
    }

    pub fn pauli_x(&self) -> &Operator<R> {
        &self.pauli_x
    }

    pub fn pauli_y(&self) -> &Operator<R> {
        &self.pauli_y
    }

    pub fn pauli_z(&self) -> &Operator<R> {
        &self.pauli_z
    }

    /// Logical Pauli by index 0, 1, 2 = x, y, z.
    pub fn pauli(&self, j: usize) -> &Operator<R> {
        match j {
            0 => &self.pauli_x,
            1 => &self.pauli_y,
            2 => &self.pauli_z,
            _ => panic!("Pauli index {j} out of range"),
        }
    }

    /// Amplitudes `(<0̄|psi>, <1̄|psi>)`.
    pub fn project(&self, psi: &StateVector<R>) -> Result<(Cplx<R>, Cplx<R>)> {
        Ok((self.ket0.inner(psi)?, self.ket1.inner(psi)?))
    }

    /// Normalized `c0 |0̄> + c1 |1̄>`.
    pub fn logical_state(&self, c0: Cplx<R>, c1: Cplx<R>) -> Result<StateVector<R>> {
        self.ket0.combine(c0, &self.ket1, c1)?.normalized()
    }

    /// `(<sigma_x>, <sigma_y>, <sigma_z>, <I>)` on the full state.
    pub fn bloch_vector(&self, psi: &StateVector<R>) -> Result<Bloch<R>> {
        let (c0, c1) = self.project(psi)?;
        // The dyadic Paulis reduce to these closed forms for any pair of kets.
        let cross = c0.conj() * c1;
        let two: R = real(2.0);
        Ok(Bloch {
            sx: two * cross.re,
            sy: two * cross.im,
            sz: c0.norm_sqr() - c1.norm_sqr(),
            pop: c0.norm_sqr() + c1.norm_sqr(),
        })
    }

    /// Weight outside the logical subspace, `1 - <psi|I|psi>`.
    pub fn leakage(&self, psi: &StateVector<R>) -> Result<R> {
        Ok(R::one() - self.bloch_vector(psi)?.pop)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{expectation_real, StateVector};

    type C = Cplx<f64>;

    fn frame() -> LogicalFrame<f64> {
        build_frame(2f64.sqrt(), 30, Orthogonalization::Lowdin).unwrap()
    }

    #[test]
    fn lowdin_basis_is_orthonormal() {
        let f = frame();
        assert!((f.raw_overlap().re - (-4f64).exp()).abs() < 1e-12);
        assert!((f.raw_overlap().re - 0.018316).abs() < 1e-6);
        assert!(f.ket0().inner(f.ket1()).unwrap().norm() < 1e-12);
        assert!((f.ket0().norm() - 1.0).abs() < 1e-12);
        assert!((f.ket1().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_z_eigenstates() {
        let f = frame();
        let z0 = f.pauli_z().apply(f.ket0()).unwrap();
        let z1 = f.pauli_z().apply(f.ket1()).unwrap();
        assert!((z0.amplitudes() - f.ket0().amplitudes()).norm() < 1e-12);
        assert!((z1.amplitudes() + f.ket1().amplitudes()).norm() < 1e-12);
    }

    #[test]
    fn projector_trace_and_idempotence() {
        let f = frame();
        assert!((f.projector().trace() - C::new(2.0, 0.0)).norm() < 1e-10);
        let p2 = f.projector() * f.projector();
        assert!(p2.max_abs_diff(f.projector()) < 1e-10);
        for j in 0..3 {
            let s2 = f.pauli(j) * f.pauli(j);
            assert!(s2.max_abs_diff(f.projector()) < 1e-10);
        }
    }

    #[test]
    fn pauli_algebra() {
        let f = frame();
        let i = C::new(0.0, 1.0);
        // sigma_x sigma_y = i sigma_z and cyclic
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let ab = f.pauli(a) * f.pauli(b);
            assert!(ab.max_abs_diff(&f.pauli(c).scale(i)) < 1e-10);
        }
        for a in 0..3 {
            for b in 0..3 {
                let anti = f.pauli(a).anticommutator(f.pauli(b));
                let expected = if a == b {
                    f.projector().scale_real(2.0)
                } else {
                    Operator::zeros(30).unwrap()
                };
                assert!(anti.max_abs_diff(&expected) < 1e-10);
                if a != b {
                    let k = 3 - a - b;
                    let eps = if (a + 1) % 3 == b { 1.0 } else { -1.0 };
                    let comm = f.pauli(a).commutator(f.pauli(b));
                    assert!(comm.max_abs_diff(&f.pauli(k).scale(C::new(0.0, 2.0 * eps))) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn lowdin_fidelity_bound() {
        let f = frame();
        let a0 = f.alpha0();
        let plus = coherent_state(C::new(a0, 0.0), 30).unwrap().state;
        let fid = f.ket0().fidelity(&plus).unwrap();
        assert!(fid >= 1.0 - (-4.0 * a0 * a0).exp(), "{fid}");
    }

    #[test]
    fn mirror_symmetry() {
        // alpha0 -> -alpha0 swaps the kets: compare against a frame built from
        // the swapped coherent states directly.
        let f = frame();
        let parity = crate::fock::parity::<f64>(30).unwrap();
        // parity maps |a> -> |-a>, so P|0̄> = |1̄> for the symmetric construction
        let p0 = parity.apply(f.ket0()).unwrap();
        assert!((p0.amplitudes() - f.ket1().amplitudes()).norm() < 1e-12);
    }

    #[test]
    fn bloch_examples() {
        let f = frame();
        let b0 = f.bloch_vector(f.ket0()).unwrap();
        assert!((b0.sx).abs() < 1e-12 && b0.sy.abs() < 1e-12);
        assert!((b0.sz - 1.0).abs() < 1e-12 && (b0.pop - 1.0).abs() < 1e-12);

        let plus = f.logical_state(C::new(1.0, 0.0), C::new(1.0, 0.0)).unwrap();
        let bp = f.bloch_vector(&plus).unwrap();
        assert!((bp.sx - 1.0).abs() < 1e-12 && bp.sy.abs() < 1e-12 && bp.sz.abs() < 1e-12);

        // raw coherent state read out in the Lowdin frame
        let raw = coherent_state(C::new(2f64.sqrt(), 0.0), 30).unwrap().state;
        let br = f.bloch_vector(&raw).unwrap();
        assert!((br.sz - 1.0).abs() < 5e-3);
        assert!(br.pop >= 0.999);
    }

    #[test]
    fn closed_form_matches_operator_expectations() {
        let f = frame();
        let psi = coherent_state(C::new(0.7, 0.9), 30).unwrap().state;
        let b = f.bloch_vector(&psi).unwrap();
        assert!((b.sx - expectation_real(&psi, f.pauli_x()).unwrap()).abs() < 1e-12);
        assert!((b.sy - expectation_real(&psi, f.pauli_y()).unwrap()).abs() < 1e-12);
        assert!((b.sz - expectation_real(&psi, f.pauli_z()).unwrap()).abs() < 1e-12);
        assert!((b.pop - expectation_real(&psi, f.projector()).unwrap()).abs() < 1e-12);
        // Bloch length equals subspace weight for a Lowdin frame
        assert!((b.length() - b.pop).abs() < 1e-9);
    }

    #[test]
    fn leakage_examples() {
        let f = frame();
        assert!(f.leakage(f.ket0()).unwrap().abs() < 1e-10);
        let fock5 = StateVector::basis(5, 30).unwrap();
        // oracle: weight of |5> on the two cat kets by explicit Fock sums
        let a = f.ket0().amplitudes()[5].norm_sqr() + f.ket1().amplitudes()[5].norm_sqr();
        let leak = f.leakage(&fock5).unwrap();
        assert!((leak - (1.0 - a)).abs() < 1e-12);
        assert!(leak >= 0.5);
        let b = f.bloch_vector(&fock5).unwrap();
        assert!((leak + b.pop - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ill_conditioned_basis() {
        let err = build_frame(0.3f64, 20, Orthogonalization::Lowdin).unwrap_err();
        assert!(matches!(err, Error::IllConditionedBasis { .. }));
    }

    #[test]
    fn raw_frame_keeps_overlap() {
        let f = build_frame(2f64.sqrt(), 30, Orthogonalization::Raw).unwrap();
        let ov = f.ket0().inner(f.ket1()).unwrap();
        assert!((ov.re - (-4f64).exp()).abs() < 1e-12);
        // Pauli algebra is only approximate in the raw frame
        let s2 = f.pauli_z() * f.pauli_z();
        assert!(s2.max_abs_diff(f.projector()) > 1e-6);
    }
}

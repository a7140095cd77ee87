//! Dense linear algebra on a truncated Fock space.
//!
//! Operators and states carry their truncation dimension `N`; basis index
//! `n` is the photon number. Hamiltonians are in rad/µs and times in µs
//! (ħ = 1).

use std::ops::{Add, Mul, Sub};

use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{real, Cplx, Real};

/// Rows/columns added above the target dimension when exponentiating the
/// displacement generator. They are cropped away afterwards.
pub const DISPLACEMENT_GUARD: usize = 10;

/// Default upper bound on coherent-state truncation leakage.
pub const DEFAULT_LEAKAGE_THRESHOLD: f64 = 1e-8;

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim });
    }
    Ok(())
}

fn to_f64<R: Real>(x: R) -> f64 {
    nalgebra::try_convert(x).unwrap_or(f64::NAN)
}

/// Square complex matrix on the truncated Fock basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<R: Real> {
    matrix: DMatrix<Cplx<R>>,
    hermitian: bool,
}

impl<R: Real> Operator<R> {
    /// Wraps a general square matrix. The Hermitian flag is not set.
    pub fn from_matrix(matrix: DMatrix<Cplx<R>>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        check_dim(matrix.nrows())?;
        Ok(Self {
            matrix,
            hermitian: false,
        })
    }

    /// Wraps a matrix that must be Hermitian. The input is checked against
    /// a tolerance relative to its largest entry and then symmetrized, so
    /// the flagged operator satisfies `M == M^dagger` exactly.
    pub fn hermitian(matrix: DMatrix<Cplx<R>>) -> Result<Self> {
        let mut op = Self::from_matrix(matrix)?;
        let scale = op.max_abs().max(R::one());
        let deviation = op.hermitian_deviation();
        if deviation > R::HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian {
                deviation: to_f64(deviation),
            });
        }
        let half: R = real(0.5);
        let adj = op.matrix.adjoint();
        op.matrix = (&op.matrix + adj).map(|z| z * half);
        op.hermitian = true;
        Ok(op)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            matrix: DMatrix::identity(dim, dim),
            hermitian: true,
        })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            matrix: DMatrix::zeros(dim, dim),
            hermitian: true,
        })
    }

    /// Real diagonal operator.
    pub fn diagonal(diag: &[R]) -> Result<Self> {
        check_dim(diag.len())?;
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&d| Cplx::new(d, R::zero())));
        Ok(Self {
            matrix: DMatrix::from_diagonal(&v),
            hermitian: true,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Cplx<R>> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Cplx<R>> {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn entry(&self, row: usize, col: usize) -> Cplx<R> {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            hermitian: self.hermitian,
        }
    }

    /// Multiplies by a complex scalar; Hermiticity survives only real factors.
    pub fn scale(&self, factor: Cplx<R>) -> Self {
        Self {
            matrix: self.matrix.map(|z| z * factor),
            hermitian: self.hermitian && factor.im == R::zero(),
        }
    }

    pub fn scale_real(&self, factor: R) -> Self {
        Self {
            matrix: self.matrix.map(|z| z * factor),
            hermitian: self.hermitian,
        }
    }

    /// `self + factor * other`, keeping the Hermitian flag when both are.
    pub fn add_scaled(&self, factor: R, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "operator dimension mismatch");
        let mut matrix = self.matrix.clone();
        matrix.zip_apply(&other.matrix, |a, b| *a += b * factor);
        Self {
            matrix,
            hermitian: self.hermitian && other.hermitian,
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        let ab = &self.matrix * &other.matrix;
        let ba = &other.matrix * &self.matrix;
        Self {
            matrix: ab - ba,
            hermitian: false,
        }
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        let ab = &self.matrix * &other.matrix;
        let ba = &other.matrix * &self.matrix;
        Self {
            matrix: ab + ba,
            hermitian: self.hermitian && other.hermitian,
        }
    }

    pub fn trace(&self) -> Cplx<R> {
        self.matrix.trace()
    }

    pub fn max_abs(&self) -> R {
        self.matrix.iter().fold(R::zero(), |m, z| m.max(z.modulus()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> R {
        assert_eq!(self.dim(), other.dim(), "operator dimension mismatch");
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .fold(R::zero(), |m, (a, b)| m.max((a - b).modulus()))
    }

    /// Largest entrywise deviation from Hermiticity, `max |M - M^dagger|`.
    pub fn hermitian_deviation(&self) -> R {
        let n = self.dim();
        let mut dev = R::zero();
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).modulus());
            }
        }
        dev
    }

    /// Upper-left `dim x dim` block.
    pub fn cropped(&self, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if dim > self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        Ok(Self {
            matrix: self.matrix.view((0, 0), (dim, dim)).into_owned(),
            hermitian: self.hermitian,
        })
    }

    pub fn apply(&self, psi: &StateVector<R>) -> Result<StateVector<R>> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        Ok(StateVector {
            amplitudes: &self.matrix * &psi.amplitudes,
        })
    }

    /// Hermitian eigendecomposition `M = V diag(w) V^dagger`.
    pub fn eigh(&self) -> Result<HermitianEigen<R>> {
        if !self.hermitian {
            return Err(Error::NotHermitian {
                deviation: to_f64(self.hermitian_deviation()),
            });
        }
        let eps = R::default_epsilon();
        SymmetricEigen::try_new(self.matrix.clone(), eps, 0)
            .map(|e| HermitianEigen {
                values: e.eigenvalues,
                vectors: e.eigenvectors,
            })
            .ok_or_else(|| Error::EigenFailure {
                dim: self.dim(),
                max_entry: to_f64(self.max_abs()),
            })
    }
}

impl<'a, R: Real> Mul<&'a Operator<R>> for &'a Operator<R> {
    type Output = Operator<R>;

    fn mul(self, rhs: &'a Operator<R>) -> Operator<R> {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator {
            matrix: &self.matrix * &rhs.matrix,
            hermitian: false,
        }
    }
}

impl<'a, R: Real> Add<&'a Operator<R>> for &'a Operator<R> {
    type Output = Operator<R>;

    fn add(self, rhs: &'a Operator<R>) -> Operator<R> {
        self.add_scaled(R::one(), rhs)
    }
}

impl<'a, R: Real> Sub<&'a Operator<R>> for &'a Operator<R> {
    type Output = Operator<R>;

    fn sub(self, rhs: &'a Operator<R>) -> Operator<R> {
        self.add_scaled(-R::one(), rhs)
    }
}

/// Eigenpairs of a Hermitian operator; columns of `vectors` are eigenvectors.
#[derive(Clone, Debug)]
pub struct HermitianEigen<R: Real> {
    pub values: DVector<R>,
    pub vectors: DMatrix<Cplx<R>>,
}

impl<R: Real> HermitianEigen<R> {
    /// `V f(w) V^dagger x` for a complex spectral function `f`.
    pub fn apply_fn<F>(&self, x: &DVector<Cplx<R>>, f: F) -> DVector<Cplx<R>>
    where
        F: Fn(R) -> Cplx<R>,
    {
        let mut coeffs = self.vectors.ad_mul(x);
        for (c, &w) in coeffs.iter_mut().zip(self.values.iter()) {
            *c *= f(w);
        }
        &self.vectors * coeffs
    }

    /// Dense `V f(w) V^dagger`.
    pub fn matrix_fn<F>(&self, f: F) -> DMatrix<Cplx<R>>
    where
        F: Fn(R) -> Cplx<R>,
    {
        let mut scaled = self.vectors.clone();
        for (mut col, &w) in scaled.column_iter_mut().zip(self.values.iter()) {
            let fw = f(w);
            col.apply(|z| *z *= fw);
        }
        scaled * self.vectors.adjoint()
    }
}

/// Complex amplitude vector in the truncated Fock basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<R: Real> {
    amplitudes: DVector<Cplx<R>>,
}

impl<R: Real> StateVector<R> {
    pub fn new(amplitudes: DVector<Cplx<R>>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        Ok(Self { amplitudes })
    }

    pub fn from_slice(amplitudes: &[Cplx<R>]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amplitudes))
    }

    /// Fock state `|n>`.
    pub fn basis(n: usize, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if n >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: n + 1,
            });
        }
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[n] = Cplx::new(R::one(), R::zero());
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Cplx<R>> {
        &self.amplitudes
    }

    pub fn norm(&self) -> R {
        self.amplitudes.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == R::zero() {
            return Err(Error::InvalidParams("cannot normalize the zero vector".into()));
        }
        Ok(Self {
            amplitudes: self.amplitudes.unscale(n),
        })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Cplx<R>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|<a|b>|^2 / (|a|^2 |b|^2)`.
    pub fn fidelity(&self, other: &Self) -> Result<R> {
        let ov = self.inner(other)?;
        Ok(ov.norm_sqr() / (self.amplitudes.norm_squared() * other.amplitudes.norm_squared()))
    }

    /// Linear combination `a*self + b*other`.
    pub fn combine(&self, a: Cplx<R>, other: &Self, b: Cplx<R>) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            amplitudes: self.amplitudes.map(|z| z * a) + other.amplitudes.map(|z| z * b),
        })
    }

    /// Population in the top `k` Fock levels.
    pub fn edge_population(&self, k: usize) -> R {
        let start = self.dim().saturating_sub(k);
        self.amplitudes
            .iter()
            .skip(start)
            .fold(R::zero(), |s, z| s + z.norm_sqr())
    }

    /// Zero-padded copy in a larger space.
    pub fn padded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        let mut amplitudes = DVector::zeros(dim);
        amplitudes.rows_mut(0, self.dim()).copy_from(&self.amplitudes);
        Ok(Self { amplitudes })
    }
}

/// `a` with `<n-1|a|n> = sqrt(n)`.
pub fn annihilation<R: Real>(dim: usize) -> Result<Operator<R>> {
    check_dim(dim)?;
    let mut m = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = Cplx::new(real::<R>(n as f64).sqrt(), R::zero());
    }
    Operator::from_matrix(m)
}

pub fn creation<R: Real>(dim: usize) -> Result<Operator<R>> {
    Ok(annihilation::<R>(dim)?.adjoint())
}

/// `a^dagger a`, built directly as `diag(0, 1, ..., dim-1)`.
pub fn number<R: Real>(dim: usize) -> Result<Operator<R>> {
    let diag: Vec<R> = (0..dim).map(|n| real(n as f64)).collect();
    Operator::diagonal(&diag)
}

/// Photon-number parity `exp(i pi a^dagger a) = diag(+1, -1, +1, ...)`.
pub fn parity<R: Real>(dim: usize) -> Result<Operator<R>> {
    let diag: Vec<R> = (0..dim)
        .map(|n| if n % 2 == 0 { R::one() } else { -R::one() })
        .collect();
    Operator::diagonal(&diag)
}

/// Coherent state together with the weight lost to truncation.
#[derive(Clone, Debug)]
pub struct CoherentState<R: Real> {
    pub state: StateVector<R>,
    /// `1 - sum_{n<dim} |c_n|^2` before renormalization.
    pub leakage: R,
}

pub fn coherent_state<R: Real>(alpha: Cplx<R>, dim: usize) -> Result<CoherentState<R>> {
    coherent_state_with_threshold(alpha, dim, DEFAULT_LEAKAGE_THRESHOLD)
}

/// `c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!)`, renormalized on `dim` levels.
///
/// The leakage is accumulated from the tail of the recurrence instead of
/// `1 - sum`, so it stays accurate below the working precision.
pub fn coherent_state_with_threshold<R: Real>(
    alpha: Cplx<R>,
    dim: usize,
    threshold: f64,
) -> Result<CoherentState<R>> {
    check_dim(dim)?;
    let leakage = coherent_tail(alpha, dim);
    let leak64 = to_f64(leakage);
    if leak64 > threshold {
        return Err(Error::TruncationTooSmall {
            leakage: leak64,
            threshold,
            dim,
        });
    }
    let mut amps = DVector::zeros(dim);
    let mut c = Cplx::new((-alpha.norm_sqr() * real(0.5)).exp(), R::zero());
    amps[0] = c;
    for n in 1..dim {
        c = c * alpha / real::<R>(n as f64).sqrt();
        amps[n] = c;
    }
    let state = StateVector::new(amps)?.normalized()?;
    Ok(CoherentState { state, leakage })
}

/// Coherent-state weight in levels `n >= dim` (untruncated series).
fn coherent_tail<R: Real>(alpha: Cplx<R>, dim: usize) -> R {
    // Work with probabilities p_n = e^{-x} x^n / n! in log space to avoid
    // underflow of the prefactor for large |alpha|.
    let x = to_f64(alpha.norm_sqr());
    if x == 0.0 {
        return R::zero();
    }
    let ln_x = x.ln();
    let mut ln_p = -x;
    for n in 1..=dim {
        ln_p += ln_x - (n as f64).ln();
    }
    // ln_p now refers to n = dim
    let mut tail = 0.0;
    let mut n = dim;
    loop {
        let p = ln_p.exp();
        tail += p;
        n += 1;
        ln_p += ln_x - (n as f64).ln();
        if (n as f64) > x && p < 1e-30 * tail.max(1e-300) {
            break;
        }
        if n > dim + 100_000 {
            break;
        }
    }
    real(tail.min(1.0))
}

/// Spectral factorization of the displacement generator along a fixed
/// phase direction, `D(r e^{i phi}) = exp(r (e^{i phi} a^dagger - e^{-i phi} a))`.
///
/// The generator is exponentiated on `dim + DISPLACEMENT_GUARD` levels.
#[derive(Clone, Debug)]
pub struct DisplacementFamily<R: Real> {
    dim: usize,
    eigen: HermitianEigen<R>,
}

impl<R: Real> DisplacementFamily<R> {
    pub fn new(direction: Cplx<R>, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let work = dim + DISPLACEMENT_GUARD;
        let u = direction / direction.modulus();
        let i = Cplx::new(R::zero(), R::one());
        // i (u a^dagger - u* a) is Hermitian
        let mut m = DMatrix::zeros(work, work);
        for n in 1..work {
            let s: R = real::<R>(n as f64).sqrt();
            m[(n, n - 1)] = i * u * s;
            m[(n - 1, n)] = -i * u.conj() * s;
        }
        let eigen = Operator::hermitian(m)?.eigh()?;
        Ok(Self { dim, eigen })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn work_dim(&self) -> usize {
        self.dim + DISPLACEMENT_GUARD
    }

    /// `D(r u)` cropped to `dim`.
    pub fn operator(&self, r: R) -> Result<Operator<R>> {
        let full = self.eigen.matrix_fn(|w| {
            let ph = -r * w;
            Cplx::new(ph.cos(), ph.sin())
        });
        Operator::from_matrix(full.view((0, 0), (self.dim, self.dim)).into_owned())
    }

    /// `D(r u) x` on the guard-banded space (`x.len() == work_dim`).
    pub fn apply_work(&self, r: R, x: &DVector<Cplx<R>>) -> DVector<Cplx<R>> {
        self.eigen.apply_fn(x, |w| {
            let ph = -r * w;
            Cplx::new(ph.cos(), ph.sin())
        })
    }
}

/// `D_alpha = exp(alpha a^dagger - alpha* a)`, exponentiated on a
/// guard-banded space and cropped to `dim`.
pub fn displacement<R: Real>(alpha: Cplx<R>, dim: usize) -> Result<Operator<R>> {
    check_dim(dim)?;
    let r = alpha.modulus();
    if r == R::zero() {
        return Operator::from_matrix(DMatrix::identity(dim, dim));
    }
    DisplacementFamily::new(alpha, dim)?.operator(r)
}

/// `exp(-i H dt) psi` through the eigendecomposition of `H`.
pub fn propagate_step<R: Real>(h: &Operator<R>, psi: &StateVector<R>, dt: R) -> Result<StateVector<R>> {
    if dt.partial_cmp(&R::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::NonPositiveStep { dt: to_f64(dt) });
    }
    if psi.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi.dim(),
        });
    }
    let eig = h.eigh()?;
    let amplitudes = eig.apply_fn(&psi.amplitudes, |w| {
        let ph = -w * dt;
        Cplx::new(ph.cos(), ph.sin())
    });
    Ok(StateVector { amplitudes })
}

/// `<psi|M|psi>`.
pub fn expectation<R: Real>(psi: &StateVector<R>, m: &Operator<R>) -> Result<Cplx<R>> {
    let mpsi = m.apply(psi)?;
    Ok(psi.amplitudes.dotc(&mpsi.amplitudes))
}

/// Real part of `<psi|M|psi>` for a Hermitian-flagged `M`.
pub fn expectation_real<R: Real>(psi: &StateVector<R>, m: &Operator<R>) -> Result<R> {
    if !m.is_hermitian() {
        return Err(Error::NotHermitian {
            deviation: to_f64(m.hermitian_deviation()),
        });
    }
    Ok(expectation(psi, m)?.re)
}

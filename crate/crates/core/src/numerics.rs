//! Dense complex linear algebra with antilinear operators as first-class values.
//!
//! Every matrix function goes through one primitive: the eigendecomposition of a
//! Hermitian matrix. Antilinear maps are stored as their linear part `L`, acting
//! as `v -> L * conj(v)`.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default tolerance, relative to the Frobenius norm of the input.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Condition number above which an operator is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Frobenius norm.
pub fn norm(m: &CMatrix) -> f64 {
    m.norm()
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0, |a, &b| a.max(b))
}

/// `‖a - b‖ / max(1, ‖b‖)` in the Frobenius norm.
pub fn relative_residual(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

pub fn hermitian_residual(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm() / m.norm().max(1.0)
}

pub fn unitary_residual(m: &CMatrix) -> f64 {
    let n = m.ncols();
    (m.adjoint() * m - identity(n)).norm()
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && hermitian_residual(m) <= tol
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && unitary_residual(m) <= tol
}

/// Entrywise complex conjugate.
pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

pub fn conj_vec(v: &CVector) -> CVector {
    v.map(|z| z.conj())
}

/// Commutator `ab - ba`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Anticommutator `ab + ba`.
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Hilbert-Schmidt inner product `tr(a† b)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        })
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn new(m: &CMatrix) -> Result<Self> {
        Self::with_tol(m, DEFAULT_TOL)
    }

    pub fn with_tol(m: &CMatrix, tol: f64) -> Result<Self> {
        check_square(m)?;
        let residual = hermitian_residual(m);
        if !(residual <= tol) {
            return Err(Error::NonHermitianInput { residual, tol });
        }
        let sym = (m + m.adjoint()).unscale(2.0);
        let eig = sym.symmetric_eigen();
        let n = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
        let mut eigenvectors = CMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        Ok(Self {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= f(self.eigenvalues[k]);
        }
        scaled * v.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|x| c64(x, 0.0))
    }

    /// Largest `‖M v_k - λ_k v_k‖` over eigenpairs.
    pub fn residual(&self, m: &CMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..self.dim() {
            let v = self.eigenvectors.column(k);
            let r = m * v - v * c64(self.eigenvalues[k], 0.0);
            worst = worst.max(r.norm());
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Scalar functions applied through the spectral calculus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixFunction {
    /// `e^M`
    Exp,
    /// `e^{itM}`
    ExpIt(f64),
    /// `log M`, needs `M > 0`
    Log,
    /// `M^{it}`, needs `M > 0`
    PowerIt(f64),
    /// `M^{1/2}`, needs `M >= 0`
    PowerHalf,
    /// `M^{-1/2}`, needs `M > 0`
    PowerNegHalf,
    /// `M^p` for real `p`; negative `p` needs `M > 0`
    Power(f64),
}

impl MatrixFunction {
    fn needs_positive_definite(self) -> bool {
        match self {
            MatrixFunction::Log | MatrixFunction::PowerIt(_) | MatrixFunction::PowerNegHalf => {
                true
            }
            MatrixFunction::Power(p) => p < 0.0,
            _ => false,
        }
    }

    fn needs_semidefinite(self) -> bool {
        matches!(self, MatrixFunction::PowerHalf | MatrixFunction::Power(_))
    }

    fn eval(self, x: f64) -> Complex64 {
        match self {
            MatrixFunction::Exp => c64(x.exp(), 0.0),
            MatrixFunction::ExpIt(t) => Complex64::from_polar(1.0, t * x),
            MatrixFunction::Log => c64(x.ln(), 0.0),
            MatrixFunction::PowerIt(t) => Complex64::from_polar(1.0, t * x.ln()),
            MatrixFunction::PowerHalf => c64(x.max(0.0).sqrt(), 0.0),
            MatrixFunction::PowerNegHalf => c64(1.0 / x.sqrt(), 0.0),
            MatrixFunction::Power(p) => c64(x.max(0.0).powf(p), 0.0),
        }
    }
}

/// `f(M)` for Hermitian `M`, with the default tolerance.
pub fn spectral_function(m: &CMatrix, f: MatrixFunction) -> Result<CMatrix> {
    spectral_function_with_tol(m, f, DEFAULT_TOL)
}

pub fn spectral_function_with_tol(m: &CMatrix, f: MatrixFunction, tol: f64) -> Result<CMatrix> {
    let spec = SpectralDecomposition::with_tol(m, tol)?;
    apply_function(&spec, f, tol)
}

/// `f` applied to an existing decomposition.
pub fn apply_function(
    spec: &SpectralDecomposition,
    f: MatrixFunction,
    tol: f64,
) -> Result<CMatrix> {
    if spec.dim() == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let min = spec.min_eigenvalue();
    if f.needs_positive_definite() && min <= tol {
        return Err(Error::SingularForLog { min_eigenvalue: min });
    }
    if f.needs_semidefinite() && min < -tol * spec.max_eigenvalue().abs().max(1.0) {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(spec.map(|x| f.eval(x)))
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `rel_tol * s_max`.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&max) = s.first() else { return 0 };
    if max == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * max).count()
}

/// Ratio of extreme singular values (infinite when singular).
pub fn condition_number(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

/// An antilinear operator `v -> L * conj(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearMap {
    linear: CMatrix,
}

impl AntilinearMap {
    pub fn new(linear: CMatrix) -> Result<Self> {
        check_square(&linear)?;
        Ok(Self { linear })
    }

    /// Plain complex conjugation on `C^n`.
    pub fn conjugation(n: usize) -> Self {
        Self {
            linear: identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.linear.nrows()
    }

    pub fn linear_part(&self) -> &CMatrix {
        &self.linear
    }

    pub fn into_linear_part(self) -> CMatrix {
        self.linear
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.linear * conj_vec(v)
    }

    /// The antilinear adjoint, characterised by `<Aξ, η> = conj<ξ, A†η>`.
    pub fn adjoint(&self) -> Self {
        Self {
            linear: self.linear.transpose(),
        }
    }

    pub fn is_antiunitary(&self, tol: f64) -> bool {
        is_unitary(&self.linear, tol)
    }

    /// `self ∘ self`, always linear.
    pub fn square(&self) -> CMatrix {
        &self.linear * conj(&self.linear)
    }
}

/// A linear or antilinear operator on `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Linear(CMatrix),
    Antilinear(AntilinearMap),
}

impl Operator {
    pub fn dim(&self) -> usize {
        match self {
            Operator::Linear(m) => m.nrows(),
            Operator::Antilinear(a) => a.dim(),
        }
    }

    pub fn is_antilinear(&self) -> bool {
        matches!(self, Operator::Antilinear(_))
    }

    /// The matrix stored for either kind.
    pub fn matrix(&self) -> &CMatrix {
        match self {
            Operator::Linear(m) => m,
            Operator::Antilinear(a) => a.linear_part(),
        }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        match self {
            Operator::Linear(m) => m * v,
            Operator::Antilinear(a) => a.apply(v),
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            Operator::Linear(m) => Operator::Linear(m.adjoint()),
            Operator::Antilinear(a) => Operator::Antilinear(a.adjoint()),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(match (self, other) {
            (Operator::Linear(a), Operator::Linear(b)) => Operator::Linear(a * b),
            (Operator::Linear(a), Operator::Antilinear(b)) => {
                Operator::Antilinear(AntilinearMap {
                    linear: a * b.linear_part(),
                })
            }
            (Operator::Antilinear(a), Operator::Linear(b)) => {
                Operator::Antilinear(AntilinearMap {
                    linear: a.linear_part() * conj(b),
                })
            }
            (Operator::Antilinear(a), Operator::Antilinear(b)) => {
                Operator::Linear(a.linear_part() * conj(b.linear_part()))
            }
        })
    }

    /// Distance to another operator of the same kind; infinite if the kinds differ.
    pub fn distance(&self, other: &Operator) -> f64 {
        if self.is_antilinear() != other.is_antilinear() || self.dim() != other.dim() {
            return f64::INFINITY;
        }
        relative_residual(self.matrix(), other.matrix())
    }
}

impl From<CMatrix> for Operator {
    fn from(m: CMatrix) -> Self {
        Operator::Linear(m)
    }
}

impl From<AntilinearMap> for Operator {
    fn from(a: AntilinearMap) -> Self {
        Operator::Antilinear(a)
    }
}

/// `A ∘ B` for antilinear `A`: linear if `B` is antilinear, antilinear if `B` is linear.
pub fn antilinear_compose(a: &AntilinearMap, b: &Operator) -> Result<Operator> {
    Operator::Antilinear(a.clone()).compose(b)
}

/// Polar parts of an antilinear map `S = J Δ^{1/2}`.
#[derive(Debug, Clone)]
pub struct PolarParts {
    pub j: AntilinearMap,
    pub delta: CMatrix,
}

/// Polar decomposition `S = J Δ^{1/2}` with `Δ = S†S`.
pub fn polar_antilinear(s: &AntilinearMap) -> Result<PolarParts> {
    let l = s.linear_part();
    let condition = condition_number(l);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularOperator { condition });
    }
    let delta = l.transpose() * conj(l);
    let delta = (&delta + delta.adjoint()).unscale(2.0);
    let spec = SpectralDecomposition::with_tol(&delta, DEFAULT_TOL)?;
    let inv_sqrt = apply_function(&spec, MatrixFunction::PowerNegHalf, 0.0)?;
    let j = AntilinearMap {
        linear: l * conj(&inv_sqrt),
    };
    Ok(PolarParts { j, delta })
}

/// Orthonormal columns spanning the range of `cols`, by two-pass Gram-Schmidt
/// with relative drop threshold `tol`.
pub fn orthonormalize(cols: &[CVector], tol: f64) -> Vec<CVector> {
    let mut out: Vec<CVector> = Vec::new();
    for v in cols {
        if let Some(u) = orthonormal_residual(&out, v, tol) {
            out.push(u);
        }
    }
    out
}

/// Component of `v` orthogonal to the orthonormal set `basis`, normalised, or
/// `None` if it is smaller than `tol * ‖v‖`.
pub fn orthonormal_residual(basis: &[CVector], v: &CVector, tol: f64) -> Option<CVector> {
    let scale = v.norm();
    if scale == 0.0 {
        return None;
    }
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis {
            let coeff = b.dotc(&w);
            w.axpy(-coeff, b, ONE);
        }
    }
    let n = w.norm();
    if n <= tol * scale {
        None
    } else {
        Some(w.unscale(n))
    }
}

/// Orthonormal basis of the kernel of a Hermitian positive semidefinite matrix,
/// keeping eigenvalues below `tol * max(1, λ_max)`.
pub fn psd_null_space(m: &CMatrix, tol: f64) -> Result<Vec<CVector>> {
    let spec = SpectralDecomposition::with_tol(m, DEFAULT_TOL.max(tol))?;
    let cut = tol * spec.max_eigenvalue().abs().max(1.0);
    Ok((0..spec.dim())
        .filter(|&k| spec.eigenvalues[k] <= cut)
        .map(|k| spec.eigenvectors.column(k).into_owned())
        .collect())
}

/// Stack a matrix column-major into a vector.
pub fn vec_of(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec_of`].
pub fn unvec(v: &CVector, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_column_slice(rows, cols, v.as_slice())
}

//! Real-linear subspaces of `C^n`, their Tomita pair and symplectic complement.
//!
//! A vector `v` in `C^n` has real coordinates `(Re v, Im v)` in `R^{2n}`. The
//! imaginary part of the inner product is `Im<ξ, η> = coords(ξ) · coords(-iη)`,
//! so the symplectic complement `K'` is the real orthogonal complement of `iK`.

use alloc::vec::Vec;
use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{
    c64, conj, identity, polar_antilinear, relative_residual, spectral_function, AntilinearMap,
    CMatrix, CVector, MatrixFunction, Operator, I,
};
use crate::random::random_matrix_with_norm;

type RMatrix = DMatrix<f64>;

/// Relative singular-value threshold for real-linear independence.
pub const RANK_TOL: f64 = 1e-10;
/// Smallest admissible singular value of `[Q | iQ]` for standardness.
pub const STANDARD_TOL: f64 = 1e-7;

/// A real-linear subspace of `C^n`, stored by a real-linearly independent basis.
#[derive(Debug, Clone)]
pub struct StandardSubspace {
    ambient_dim: usize,
    basis: Vec<CVector>,
}

fn coords(v: &CVector) -> nalgebra::DVector<f64> {
    let n = v.len();
    nalgebra::DVector::from_fn(2 * n, |i, _| if i < n { v[i].re } else { v[i - n].im })
}

fn from_coords(x: nalgebra::DVectorView<'_, f64>) -> CVector {
    let n = x.len() / 2;
    CVector::from_fn(n, |i, _| c64(x[i], x[i + n]))
}

fn coordinate_matrix(vs: &[CVector], n: usize) -> RMatrix {
    let mut m = RMatrix::zeros(2 * n, vs.len());
    for (k, v) in vs.iter().enumerate() {
        m.set_column(k, &coords(v));
    }
    m
}

/// Orthonormal real basis (columns) of the span of the columns of `m`.
fn real_range(m: &RMatrix) -> RMatrix {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| max > 0.0 && svd.singular_values[k] > RANK_TOL * max)
        .collect();
    let mut q = RMatrix::zeros(m.nrows(), keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        q.set_column(dst, &u.column(src));
    }
    q
}

fn real_singular_values(m: &RMatrix) -> Vec<f64> {
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

impl StandardSubspace {
    /// Real span of `basis` inside `C^ambient_dim`.
    pub fn new(ambient_dim: usize, basis: Vec<CVector>) -> Result<Self> {
        if ambient_dim == 0 || basis.is_empty() {
            return Err(Error::DegenerateBasis {
                rank: 0,
                vectors: basis.len(),
            });
        }
        if let Some(v) = basis.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: v.len(),
            });
        }
        let rank = real_range(&coordinate_matrix(&basis, ambient_dim)).ncols();
        if rank < basis.len() {
            return Err(Error::DegenerateBasis {
                rank,
                vectors: basis.len(),
            });
        }
        Ok(Self { ambient_dim, basis })
    }

    /// Columns of a complex matrix as a real basis.
    pub fn from_columns(m: &CMatrix) -> Result<Self> {
        let basis = m.column_iter().map(|c| c.into_owned()).collect();
        Self::new(m.nrows(), basis)
    }

    /// The real points `R^n`.
    pub fn real_form(n: usize) -> Self {
        Self::from_columns(&identity(n)).expect("standard basis is independent")
    }

    /// Graph subspace `(I + A) R^n` with `‖A‖_F` drawn from `[0.1, 0.8]`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let scale = rng.gen_range(0.1..0.8);
        let m = identity(n) + random_matrix_with_norm(n, scale, rng);
        Self::from_columns(&m).expect("graph of a contraction is independent")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    pub fn real_dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormal real basis as a `2n × k` matrix.
    pub fn orthonormal_coordinates(&self) -> RMatrix {
        real_range(&coordinate_matrix(&self.basis, self.ambient_dim))
    }

    fn orthonormal_basis(&self) -> Vec<CVector> {
        let q = self.orthonormal_coordinates();
        q.column_iter().map(|c| from_coords(c.as_view())).collect()
    }

    /// Image under a linear or antilinear operator.
    pub fn image(&self, op: &Operator) -> Result<Self> {
        if op.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: op.dim(),
            });
        }
        Self::new(
            self.ambient_dim,
            self.basis.iter().map(|v| op.apply(v)).collect(),
        )
    }

    /// `iK`.
    pub fn times_i(&self) -> Self {
        Self {
            ambient_dim: self.ambient_dim,
            basis: self.basis.iter().map(|v| v * I).collect(),
        }
    }

    /// Smallest singular value of `[Q | iQ]` for an orthonormal real basis `Q`.
    pub fn standardness_margin(&self) -> f64 {
        let q = self.orthonormal_basis();
        let iq: Vec<CVector> = q.iter().map(|v| v * I).collect();
        let mut all = q;
        all.extend(iq);
        real_singular_values(&coordinate_matrix(&all, self.ambient_dim))
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

/// `K + iK = C^n` and `K ∩ iK = {0}`, decided by real rank.
pub fn is_standard(k: &StandardSubspace) -> Result<bool> {
    StandardSubspace::new(k.ambient_dim, k.basis.clone())?;
    Ok(k.real_dim() == k.ambient_dim && k.standardness_margin() >= STANDARD_TOL)
}

fn require_standard(k: &StandardSubspace) -> Result<()> {
    if is_standard(k)? {
        Ok(())
    } else {
        Err(Error::NotStandard)
    }
}

/// Modular conjugation and modular operator of a standard subspace.
#[derive(Debug, Clone)]
pub struct TomitaPair {
    pub s: AntilinearMap,
    pub j: AntilinearMap,
    pub delta: CMatrix,
}

impl TomitaPair {
    /// `‖J² - I‖`.
    pub fn j_square_residual(&self) -> f64 {
        relative_residual(&self.j.square(), &identity(self.j.dim()))
    }

    /// `‖JΔJ - Δ^{-1}‖ / max(1, ‖Δ^{-1}‖)`.
    pub fn j_delta_j_residual(&self) -> Result<f64> {
        let j = Operator::from(self.j.clone());
        let jdj = j.compose(&Operator::Linear(self.delta.clone()))?.compose(&j)?;
        let inv = spectral_function(&self.delta, MatrixFunction::Power(-1.0))?;
        Ok(relative_residual(jdj.matrix(), &inv))
    }

    /// `Δ^{it}`.
    pub fn delta_it(&self, t: f64) -> Result<CMatrix> {
        spectral_function(&self.delta, MatrixFunction::PowerIt(t))
    }
}

/// The antilinear involution fixing `K` pointwise, and its polar parts.
pub fn tomita_pair(k: &StandardSubspace) -> Result<TomitaPair> {
    require_standard(k)?;
    let n = k.ambient_dim;
    let q = k.orthonormal_basis();
    let b = CMatrix::from_columns(&q);
    // S b = b for real-spanning columns b: L conj(B) = B.
    let inv = conj(&b).try_inverse().ok_or(Error::NotStandard)?;
    let s = AntilinearMap::new(&b * inv)?;
    debug_assert_eq!(s.dim(), n);
    let parts = polar_antilinear(&s)?;
    Ok(TomitaPair {
        s,
        j: parts.j,
        delta: parts.delta,
    })
}

/// `K' = {ξ : Im<ξ, η> = 0 for all η in K}`.
pub fn symplectic_complement(k: &StandardSubspace) -> Result<StandardSubspace> {
    require_standard(k)?;
    let n = k.ambient_dim;
    let q = k.times_i().orthonormal_coordinates();
    let proj = RMatrix::identity(2 * n, 2 * n) - &q * q.transpose();
    let eig = proj.symmetric_eigen();
    let basis: Vec<CVector> = (0..2 * n)
        .filter(|&i| eig.eigenvalues[i] > 0.5)
        .map(|i| from_coords(eig.eigenvectors.column(i).as_view()))
        .collect();
    StandardSubspace::new(n, basis)
}

/// Sine of the largest principal angle between two real subspaces; `1` if the
/// real dimensions differ.
pub fn subspace_distance(a: &StandardSubspace, b: &StandardSubspace) -> f64 {
    if a.ambient_dim != b.ambient_dim {
        return 1.0;
    }
    let qa = a.orthonormal_coordinates();
    let qb = b.orthonormal_coordinates();
    if qa.ncols() != qb.ncols() {
        return 1.0;
    }
    let one_way = |x: &RMatrix, y: &RMatrix| {
        let r = y - x * (x.transpose() * y);
        real_singular_values(&r).into_iter().fold(0.0, f64::max)
    };
    one_way(&qa, &qb).max(one_way(&qb, &qa))
}

/// Residuals of the modular laws of one standard subspace.
#[derive(Debug, Clone)]
pub struct FlowReport {
    /// `(t, d(Δ^{it}K, K))`
    pub flow_distances: Vec<(f64, f64)>,
    /// `d(JK, K')`
    pub conjugation_distance: f64,
    /// `‖Δ_{K'} - Δ_K^{-1}‖`, relative
    pub complement_delta_residual: f64,
    /// `‖J² - I‖`
    pub j_square_residual: f64,
    /// `‖JΔJ - Δ^{-1}‖`, relative
    pub j_delta_j_residual: f64,
    /// `max ‖Sv - v‖` over the basis of `K` and `max ‖S(iv) + iv‖`
    pub s_fixes_k_residual: f64,
    /// `max ‖JΔ^{1/2}v - Sv‖`, `‖Δ^{-1/2}Jv - Sv‖` over basis vectors, and
    /// `‖Δ^{1/2}J - S†‖`
    pub reassembly_residual: f64,
    /// `d((K')', K)`
    pub double_complement_distance: f64,
}

impl FlowReport {
    pub fn max_flow_distance(&self) -> f64 {
        self.flow_distances
            .iter()
            .map(|&(_, d)| d)
            .fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        [
            self.max_flow_distance(),
            self.conjugation_distance,
            self.complement_delta_residual,
            self.j_square_residual,
            self.j_delta_j_residual,
            self.s_fixes_k_residual,
            self.reassembly_residual,
            self.double_complement_distance,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Modular invariance `Δ^{it}K = K`, `JK = K'`, `Δ_{K'} = Δ^{-1}` and the
/// involution laws of the Tomita pair.
pub fn flow_invariance_check(k: &StandardSubspace, t_grid: &[f64]) -> Result<FlowReport> {
    let pair = tomita_pair(k)?;
    let mut flow_distances = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let moved = k.image(&Operator::Linear(pair.delta_it(t)?))?;
        flow_distances.push((t, subspace_distance(&moved, k)));
    }
    let complement = symplectic_complement(k)?;
    let jk = k.image(&Operator::from(pair.j.clone()))?;
    let conjugation_distance = subspace_distance(&jk, &complement);
    let complement_pair = tomita_pair(&complement)?;
    let inv = spectral_function(&pair.delta, MatrixFunction::Power(-1.0))?;
    let complement_delta_residual = relative_residual(&complement_pair.delta, &inv);
    let double_complement_distance = subspace_distance(&symplectic_complement(&complement)?, k);

    let half = spectral_function(&pair.delta, MatrixFunction::PowerHalf)?;
    let neg_half = spectral_function(&pair.delta, MatrixFunction::PowerNegHalf)?;
    let j = Operator::from(pair.j.clone());
    let j_half = j.compose(&Operator::Linear(half.clone()))?;
    let neg_half_j = Operator::Linear(neg_half).compose(&j)?;
    let half_j = Operator::Linear(half).compose(&j)?;
    let s_adjoint = Operator::from(pair.s.adjoint());
    let mut s_fixes_k_residual: f64 = 0.0;
    let mut reassembly_residual = half_j.distance(&s_adjoint);
    for v in k.basis() {
        let sv = pair.s.apply(v);
        s_fixes_k_residual = s_fixes_k_residual.max((&sv - v).norm());
        let iv = v * I;
        s_fixes_k_residual = s_fixes_k_residual.max((pair.s.apply(&iv) + &iv).norm());
        reassembly_residual = reassembly_residual
            .max((j_half.apply(v) - &sv).norm())
            .max((neg_half_j.apply(v) - &sv).norm());
    }
    Ok(FlowReport {
        flow_distances,
        conjugation_distance,
        complement_delta_residual,
        j_square_residual: pair.j_square_residual(),
        j_delta_j_residual: pair.j_delta_j_residual()?,
        s_fixes_k_residual,
        reassembly_residual,
        double_complement_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ONE;
    use alloc::vec;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line(z: Complex64) -> StandardSubspace {
        StandardSubspace::new(1, vec![CVector::from_vec(vec![z])]).unwrap()
    }

    #[test]
    fn real_line_is_standard() {
        assert!(is_standard(&line(ONE)).unwrap());
    }

    #[test]
    fn full_plane_is_not_standard() {
        let k = StandardSubspace::new(
            1,
            vec![CVector::from_vec(vec![ONE]), CVector::from_vec(vec![I])],
        )
        .unwrap();
        assert!(!is_standard(&k).unwrap());
        assert_eq!(tomita_pair(&k).unwrap_err(), Error::NotStandard);
    }

    #[test]
    fn two_dim_example_matches_real_rank() {
        let w = c64(1.0, 1.0) / 2f64.sqrt();
        let k = StandardSubspace::new(
            2,
            vec![
                CVector::from_vec(vec![ONE, c64(0.0, 0.0)]),
                CVector::from_vec(vec![c64(0.0, 0.0), w]),
            ],
        )
        .unwrap();
        // oracle: the 4×4 real matrix [b1 b2 ib1 ib2] in (Re, Im) coordinates
        let s = 0.5f64.sqrt();
        let m = RMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, s, 0.0, -s, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, s, 0.0, s,
            ],
        );
        assert!(m.determinant().abs() > 0.5);
        assert!(is_standard(&k).unwrap());
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let v = CVector::from_vec(vec![ONE, ONE]);
        let err = StandardSubspace::new(2, vec![v.clone(), v * c64(2.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::DegenerateBasis { rank: 1, vectors: 2 }));
    }

    #[test]
    fn real_line_pair() {
        let pair = tomita_pair(&line(ONE)).unwrap();
        assert!((pair.delta[(0, 0)] - ONE).norm() < 1e-14);
        assert!((pair.j.linear_part()[(0, 0)] - ONE).norm() < 1e-14);
    }

    #[test]
    fn rotated_line_pair() {
        for theta in [0.3, 1.0, 2.5, -0.7] {
            let phase = Complex64::from_polar(1.0, theta);
            let pair = tomita_pair(&line(phase)).unwrap();
            // S(e^{iθ}) = e^{iθ} forces S = e^{2iθ} conj, already unitary.
            let want = Complex64::from_polar(1.0, 2.0 * theta);
            assert!((pair.delta[(0, 0)] - ONE).norm() < 1e-13);
            assert!((pair.j.linear_part()[(0, 0)] - want).norm() < 1e-13);
        }
    }

    #[test]
    fn self_dual_examples() {
        for n in [1, 2] {
            let k = StandardSubspace::real_form(n);
            let kp = symplectic_complement(&k).unwrap();
            assert!(subspace_distance(&kp, &k) < 1e-14);
        }
    }

    #[test]
    fn real_line_flow_is_trivial() {
        let report = flow_invariance_check(&line(ONE), &[-1.0, 0.5, 3.0]).unwrap();
        assert!(report.max_residual() < 1e-14);
    }

    #[test]
    fn random_subspaces_satisfy_modular_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for n in [3, 4] {
            let k = StandardSubspace::random(n, &mut rng);
            let report = flow_invariance_check(&k, &[-1.0, 0.5, 2.0]).unwrap();
            assert!(report.max_residual() <= 1e-8, "{report:?}");
            assert!(report.reassembly_residual <= 1e-9);
        }
    }

    #[test]
    fn distance_detects_different_subspaces() {
        let a = StandardSubspace::real_form(2);
        let b = a.times_i();
        assert!((subspace_distance(&a, &b) - 1.0).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn modular_laws_hold(seed in any::<u64>(), n in 1usize..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = StandardSubspace::random(n, &mut rng);
            prop_assert!(is_standard(&k).unwrap());
            let report = flow_invariance_check(&k, &[-1.0, 0.5, 2.0]).unwrap();
            prop_assert!(report.max_residual() <= 1e-8, "{:?}", report);
        }
    }
}

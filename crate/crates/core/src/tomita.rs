//! Tomita-Takesaki theory for finite-dimensional von Neumann algebras.
//!
//! An algebra is given by a set of generators; its linear basis is built lazily
//! by breadth-first closure under left multiplication and kept orthonormal in
//! the Hilbert-Schmidt inner product, so membership tests are projections.

use alloc::vec::Vec;
use core::cell::OnceCell;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{
    c64, conj, hs_inner, identity, numerical_rank, orthonormal_residual, polar_antilinear,
    psd_null_space, relative_residual, spectral_function, unvec, vec_of, AntilinearMap, CMatrix,
    CVector, MatrixFunction, Operator, SpectralDecomposition, DEFAULT_TOL, ONE,
};
use crate::random::complex_gaussian;

/// Hilbert space dimension allowed for commutant and center by default.
pub const DEFAULT_CAP: usize = 64;
/// Largest Hilbert space dimension accepted at all.
pub const HARD_CAP: usize = 256;
/// Relative drop threshold while orthonormalising the algebra basis.
pub const BASIS_TOL: f64 = 1e-10;
/// Relative singular-value threshold for cyclicity and separation.
pub const RANK_TOL: f64 = 1e-8;
/// Relative eigenvalue threshold for null spaces of constraint matrices.
pub const NULL_TOL: f64 = 1e-9;

/// A unital *-algebra of `N × N` matrices.
#[derive(Debug, Clone)]
pub struct FiniteVNAlgebra {
    dim: usize,
    generators: Vec<CMatrix>,
    cap: usize,
    basis: OnceCell<Vec<CMatrix>>,
}

fn as_vec(m: &CMatrix) -> CVector {
    vec_of(m)
}

fn check_dim(dim: usize, m: &CMatrix) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: if m.nrows() != dim { m.nrows() } else { m.ncols() },
        });
    }
    Ok(())
}

impl FiniteVNAlgebra {
    /// The unital *-algebra generated by `generators`; adjoints are added as needed.
    pub fn new(dim: usize, generators: Vec<CMatrix>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadDimension(0));
        }
        if dim > HARD_CAP {
            return Err(Error::DimensionCapExceeded { dim, cap: HARD_CAP });
        }
        let mut closed = Vec::with_capacity(2 * generators.len());
        for g in generators {
            check_dim(dim, &g)?;
            let adj = g.adjoint();
            let hermitian = relative_residual(&g, &adj) <= 1e-14;
            closed.push(g);
            if !hermitian {
                closed.push(adj);
            }
        }
        Ok(Self {
            dim,
            generators: closed,
            cap: DEFAULT_CAP,
            basis: OnceCell::new(),
        })
    }

    /// As [`new`](Self::new) with a known Hilbert-Schmidt orthonormal basis of the algebra.
    pub fn with_basis(dim: usize, generators: Vec<CMatrix>, basis: Vec<CMatrix>) -> Result<Self> {
        let alg = Self::new(dim, generators)?;
        for b in &basis {
            check_dim(dim, b)?;
        }
        let _ = alg.basis.set(basis);
        Ok(alg)
    }

    /// All `n × n` matrices.
    pub fn full_matrix_algebra(n: usize) -> Result<Self> {
        let mut units = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let mut e = CMatrix::zeros(n, n);
                e[(i, j)] = ONE;
                units.push(e);
            }
        }
        let gens = units.clone();
        Self::with_basis(n, gens, units)
    }

    /// Cap applied by [`commutant`] and [`center`], at most [`HARD_CAP`].
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap.min(HARD_CAP);
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn hilbert_dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// Hilbert-Schmidt orthonormal basis, computed on first use.
    pub fn basis(&self) -> &[CMatrix] {
        self.basis.get_or_init(|| self.closure())
    }

    pub fn algebra_dim(&self) -> usize {
        self.basis().len()
    }

    fn closure(&self) -> Vec<CMatrix> {
        let n = self.dim;
        let unit = as_vec(&identity(n)).unscale((n as f64).sqrt());
        let mut vecs: Vec<CVector> = alloc::vec![unit];
        let mut mats: Vec<CMatrix> = alloc::vec![identity(n).unscale((n as f64).sqrt())];
        let mut head = 0;
        while head < mats.len() && mats.len() < n * n {
            let current = mats[head].clone();
            head += 1;
            for g in &self.generators {
                let cand = as_vec(&(g * &current));
                if let Some(u) = orthonormal_residual(&vecs, &cand, BASIS_TOL) {
                    mats.push(unvec(&u, n, n));
                    vecs.push(u);
                }
            }
        }
        mats
    }

    /// Orthogonal projection onto the algebra in the Hilbert-Schmidt inner product.
    pub fn project(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for b in self.basis() {
            out += b * hs_inner(b, x);
        }
        out
    }

    /// `‖x - P(x)‖ / max(1, ‖x‖)`.
    pub fn membership_residual(&self, x: &CMatrix) -> f64 {
        (x - self.project(x)).norm() / x.norm().max(1.0)
    }

    /// Largest `‖[x, g]‖` over generators.
    pub fn commutes_with_residual(&self, x: &CMatrix) -> f64 {
        self.generators
            .iter()
            .map(|g| (x * g - g * x).norm())
            .fold(0.0, f64::max)
    }

    /// `max ‖P(x) - x‖` over `x` in another algebra's basis: zero iff `other ⊂ self`.
    pub fn contains_algebra_residual(&self, other: &FiniteVNAlgebra) -> f64 {
        other
            .basis()
            .iter()
            .map(|b| self.membership_residual(b))
            .fold(0.0, f64::max)
    }

    /// A random element `Σ c_k b_k` with complex Gaussian coefficients.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for b in self.basis() {
            out += b * complex_gaussian(rng);
        }
        out
    }

    fn check_cap(&self) -> Result<()> {
        if self.dim > self.cap {
            Err(Error::DimensionCapExceeded {
                dim: self.dim,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }
}

/// Hermitian generators spanning the same *-algebra as an adjoint-closed basis.
fn hermitian_parts(basis: &[CMatrix]) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(2 * basis.len());
    for b in basis {
        let adj = b.adjoint();
        let re = (b + &adj).unscale(2.0);
        let im = (b - &adj) * c64(0.0, -0.5);
        for h in [re, im] {
            if h.norm() > BASIS_TOL {
                out.push(h);
            }
        }
    }
    out
}

/// `{X : [X, g] = 0 for all generators g}`.
///
/// Solved as the null space of `Σ_g ad_g† ad_g` on `C^{N²}`, which costs
/// `O(N⁶)`; intended for small `N`.
pub fn commutant(m: &FiniteVNAlgebra) -> Result<FiniteVNAlgebra> {
    m.check_cap()?;
    let n = m.dim;
    let id = identity(n);
    let mut c = CMatrix::zeros(n * n, n * n);
    for g in &m.generators {
        // vec(Xg - gX) = (gᵀ ⊗ I - I ⊗ g) vec(X) for column-major vec
        let ad = g.transpose().kronecker(&id) - id.kronecker(g);
        c += ad.adjoint() * &ad;
    }
    let null = psd_null_space(&c, NULL_TOL)?;
    let basis: Vec<CMatrix> = null.iter().map(|v| unvec(v, n, n)).collect();
    let generators = hermitian_parts(&basis);
    Ok(FiniteVNAlgebra::with_basis(n, generators, basis)?.with_cap(m.cap))
}

/// One block of the central decomposition.
#[derive(Debug, Clone)]
pub struct CentralProjection {
    pub projection: CMatrix,
    pub rank: usize,
    /// `n` with `P M ≅ M_n`
    pub factor_dim: usize,
    /// `rank / factor_dim`
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct CenterInfo {
    pub center: FiniteVNAlgebra,
    pub is_factor: bool,
    pub projections: Vec<CentralProjection>,
}

/// `M ∩ M'` with its minimal central projections.
pub fn center(m: &FiniteVNAlgebra) -> Result<CenterInfo> {
    m.check_cap()?;
    let n = m.dim;
    let basis = m.basis();
    let d = basis.len();
    // Gram matrix of the constraint map c -> ([Σ c_i b_i, g])_g
    let mut gram = CMatrix::zeros(d, d);
    let images: Vec<Vec<CMatrix>> = basis
        .iter()
        .map(|b| m.generators.iter().map(|g| b * g - g * b).collect())
        .collect();
    for i in 0..d {
        for j in i..d {
            let v: num_complex::Complex64 = images[i]
                .iter()
                .zip(&images[j])
                .map(|(x, y)| hs_inner(x, y))
                .sum();
            gram[(i, j)] = v;
            gram[(j, i)] = v.conj();
        }
    }
    let null = psd_null_space(&gram, NULL_TOL)?;
    let central: Vec<CMatrix> = null
        .iter()
        .map(|coef| {
            let mut z = CMatrix::zeros(n, n);
            for (k, b) in basis.iter().enumerate() {
                z += b * coef[k];
            }
            z
        })
        .collect();
    let generators = hermitian_parts(&central);
    let center_alg =
        FiniteVNAlgebra::with_basis(n, generators.clone(), central)?.with_cap(m.cap);
    let projections = minimal_projections(&generators, center_alg.algebra_dim(), n)?;
    let projections = projections
        .into_iter()
        .map(|p| describe_block(m, p))
        .collect::<Vec<_>>();
    Ok(CenterInfo {
        is_factor: center_alg.algebra_dim() == 1,
        center: center_alg,
        projections,
    })
}

/// Spectral projections of a generic element of a commutative *-algebra.
fn minimal_projections(hermitian: &[CMatrix], count: usize, n: usize) -> Result<Vec<CMatrix>> {
    if count <= 1 || hermitian.is_empty() {
        return Ok(alloc::vec![identity(n)]);
    }
    let mut last = Vec::new();
    for attempt in 0..8u32 {
        let mut z = CMatrix::zeros(n, n);
        for (k, h) in hermitian.iter().enumerate() {
            // deterministic, rationally independent weights
            let w = ((k as f64 + 1.0) * (0.618_033_988_749_895 + 0.1 * attempt as f64)).fract()
                + 0.5 * (k as f64 + 1.0).sqrt();
            z += h * c64(w, 0.0);
        }
        let spec = SpectralDecomposition::new(&z)?;
        let scale = spec
            .eigenvalues
            .iter()
            .fold(0.0f64, |a, &b| a.max(b.abs()))
            .max(1.0);
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for k in 0..n {
            match groups.last_mut() {
                Some(g)
                    if (spec.eigenvalues[k] - spec.eigenvalues[*g.last().unwrap()]).abs()
                        <= 1e-7 * scale =>
                {
                    g.push(k)
                }
                _ => groups.push(alloc::vec![k]),
            }
        }
        last = groups
            .iter()
            .map(|g| {
                let mut p = CMatrix::zeros(n, n);
                for &k in g {
                    let v = spec.eigenvectors.column(k);
                    p += v * v.adjoint();
                }
                p
            })
            .collect();
        if last.len() == count {
            return Ok(last);
        }
    }
    Ok(last)
}

fn describe_block(m: &FiniteVNAlgebra, p: CMatrix) -> CentralProjection {
    let rank = p.trace().re.round() as usize;
    let mut vecs: Vec<CVector> = Vec::new();
    for b in m.basis() {
        let pb = as_vec(&(&p * b));
        if let Some(u) = orthonormal_residual(&vecs, &pb, 1e-8) {
            vecs.push(u);
        }
    }
    let factor_dim = (vecs.len() as f64).sqrt().round() as usize;
    CentralProjection {
        projection: p,
        rank,
        factor_dim,
        multiplicity: rank.checked_div(factor_dim).unwrap_or(0),
    }
}

/// Modular objects of `(M, Ω)`.
#[derive(Debug, Clone)]
pub struct ModularData {
    pub s: AntilinearMap,
    pub j: AntilinearMap,
    pub delta: CMatrix,
    pub omega: CVector,
}

impl ModularData {
    pub fn delta_it(&self, t: f64) -> Result<CMatrix> {
        spectral_function(&self.delta, MatrixFunction::PowerIt(t))
    }

    /// Ascending eigenvalues of `log Δ`.
    pub fn log_delta_spectrum(&self) -> Result<Vec<f64>> {
        let spec = SpectralDecomposition::new(&self.delta)?;
        if spec.min_eigenvalue() <= 0.0 {
            return Err(Error::SingularForLog {
                min_eigenvalue: spec.min_eigenvalue(),
            });
        }
        Ok(spec.eigenvalues.iter().map(|x| x.ln()).collect())
    }
}

/// Modular data of `M` with respect to `omega` (normalised internally).
pub fn modular_data(m: &FiniteVNAlgebra, omega: &CVector) -> Result<ModularData> {
    let n = m.dim;
    if omega.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: omega.len(),
        });
    }
    let norm = omega.norm();
    if norm == 0.0 {
        return Err(Error::NotCyclic { rank: 0, dim: n });
    }
    let omega = omega.unscale(norm);
    let basis = m.basis();
    let d = basis.len();
    let e = CMatrix::from_columns(&basis.iter().map(|b| b * &omega).collect::<Vec<_>>());
    let rank = numerical_rank(&e, RANK_TOL);
    if rank < n {
        return Err(Error::NotCyclic { rank, dim: n });
    }
    if rank < d {
        return Err(Error::NotSeparating { rank, dim: d });
    }
    let f = CMatrix::from_columns(
        &basis
            .iter()
            .map(|b| b.adjoint() * &omega)
            .collect::<Vec<_>>(),
    );
    // S(E c) = F conj(c) gives L conj(E) = F.
    let inv = conj(&e)
        .try_inverse()
        .ok_or(Error::NotSeparating { rank, dim: d })?;
    let s = AntilinearMap::new(f * inv)?;
    let parts = polar_antilinear(&s)?;
    Ok(ModularData {
        s,
        j: parts.j,
        delta: parts.delta,
        omega,
    })
}

/// Residuals of the modular theorem and the KMS boundary identity.
#[derive(Debug, Clone, Default)]
pub struct ModularTheoremReport {
    /// `max_t,g dist(Δ^{it} g Δ^{-it}, M)`
    pub flow_membership: f64,
    /// `max_g,h ‖[JgJ, h]‖`: `JMJ ⊂ M'`
    pub commutant_membership: f64,
    /// `max |<Ω, aΔbΩ> - <Ω, baΩ>| / (‖a‖ ‖b‖)`
    pub kms_residual: f64,
    /// `max ‖S(bΩ) - b*Ω‖` over the basis
    pub s_consistency: f64,
    /// `‖JΔ^{1/2} - S‖`, relative
    pub reassembly: f64,
}

impl ModularTheoremReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.flow_membership,
            self.commutant_membership,
            self.kms_residual,
            self.s_consistency,
            self.reassembly,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Checks `Δ^{it}MΔ^{-it} = M`, `JMJ ⊂ M'` and the KMS boundary identity
/// `<Ω, aΔbΩ> = <Ω, baΩ>` on `kms_pairs` random pairs.
pub fn verify_modular_theorem<R: Rng + ?Sized>(
    md: &ModularData,
    m: &FiniteVNAlgebra,
    t_grid: &[f64],
    kms_pairs: usize,
    rng: &mut R,
) -> Result<ModularTheoremReport> {
    let mut report = ModularTheoremReport::default();
    let spec = SpectralDecomposition::with_tol(&md.delta, DEFAULT_TOL)?;
    for &t in t_grid {
        let u = spec.map(|x| num_complex::Complex64::from_polar(1.0, t * x.ln()));
        let u_inv = u.adjoint();
        for g in m.generators() {
            let moved = &u * g * &u_inv;
            report.flow_membership = report.flow_membership.max(m.membership_residual(&moved));
        }
    }
    let j = Operator::from(md.j.clone());
    for g in m.generators() {
        let jgj = j.compose(&Operator::Linear(g.clone()))?.compose(&j)?;
        report.commutant_membership = report
            .commutant_membership
            .max(m.commutes_with_residual(jgj.matrix()));
    }
    let omega = &md.omega;
    for _ in 0..kms_pairs {
        let a = m.random_element(rng);
        let b = m.random_element(rng);
        let lhs = omega.dotc(&(&a * (&md.delta * (&b * omega))));
        let rhs = omega.dotc(&(&b * (&a * omega)));
        let scale = (a.norm() * b.norm()).max(f64::MIN_POSITIVE);
        report.kms_residual = report.kms_residual.max((lhs - rhs).norm() / scale);
    }
    for b in m.basis() {
        let lhs = md.s.apply(&(b * omega));
        let rhs = b.adjoint() * omega;
        report.s_consistency = report.s_consistency.max((lhs - rhs).norm());
    }
    let half = spec.map(|x| c64(x.max(0.0).sqrt(), 0.0));
    let jh = j.compose(&Operator::Linear(half))?;
    report.reassembly = relative_residual(jh.matrix(), md.s.linear_part());
    Ok(report)
}

/// `Σ_i √λ_i e_i ⊗ e_i` in `C^n ⊗ C^n`.
pub fn schmidt_vector(weights: &[f64]) -> CVector {
    let n = weights.len();
    let mut v = CVector::zeros(n * n);
    for (i, &w) in weights.iter().enumerate() {
        v[i * n + i] = c64(w.sqrt(), 0.0);
    }
    v
}

/// `M_n ⊗ I` on `C^n ⊗ C^n`, with matrix units as basis.
pub fn left_tensor_factor(n: usize) -> Result<FiniteVNAlgebra> {
    let id = identity(n);
    let mut units = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let mut e = CMatrix::zeros(n, n);
            e[(i, j)] = ONE;
            units.push(e.kronecker(&id).unscale((n as f64).sqrt()));
        }
    }
    FiniteVNAlgebra::with_basis(n * n, units.clone(), units)
}

/// The tensor flip on `C^n ⊗ C^n`.
pub fn tensor_flip(n: usize) -> CMatrix {
    let mut f = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            f[(j * n + i, i * n + j)] = ONE;
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ZERO;
    use crate::random::random_hermitian;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn block_diag(blocks: &[CMatrix]) -> CMatrix {
        let n: usize = blocks.iter().map(|b| b.nrows()).sum();
        let mut m = CMatrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            m.view_mut((off, off), (b.nrows(), b.ncols())).copy_from(b);
            off += b.nrows();
        }
        m
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn full_algebra_has_scalar_commutant() {
        let m = FiniteVNAlgebra::full_matrix_algebra(3).unwrap();
        let mc = commutant(&m).unwrap();
        assert_eq!(mc.algebra_dim(), 1);
        let b = &mc.basis()[0];
        let scalar = b[(0, 0)];
        assert!(relative_residual(b, &(identity(3) * scalar)) < 1e-10);
    }

    #[test]
    fn tensor_factor_commutant_is_other_factor() {
        let m = left_tensor_factor(2).unwrap();
        let mc = commutant(&m).unwrap();
        assert_eq!(mc.algebra_dim(), 4);
        let other = FiniteVNAlgebra::new(
            4,
            vec![
                identity(2).kronecker(&CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])),
                identity(2).kronecker(&CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])),
            ],
        )
        .unwrap();
        assert_eq!(other.algebra_dim(), 4);
        assert!(mc.contains_algebra_residual(&other) < 1e-9);
        assert!(other.contains_algebra_residual(&mc) < 1e-9);
    }

    #[test]
    fn basis_closure_is_an_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g1 = block_diag(&[random_hermitian(2, &mut rng), random_hermitian(4, &mut rng)]);
        let g2 = block_diag(&[random_hermitian(2, &mut rng), random_hermitian(4, &mut rng)]);
        let m = FiniteVNAlgebra::new(6, vec![g1, g2]).unwrap();
        assert_eq!(m.algebra_dim(), 4 + 16);
        for a in m.basis().iter().take(6) {
            for b in m.basis().iter().take(6) {
                assert!(m.membership_residual(&(a * b)) < 1e-9);
            }
            assert!(m.membership_residual(&a.adjoint()) < 1e-9);
        }
    }

    #[test]
    fn random_algebra_double_commutant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g1 = block_diag(&[random_hermitian(2, &mut rng), random_hermitian(4, &mut rng)]);
        let g2 = block_diag(&[random_hermitian(2, &mut rng), random_hermitian(4, &mut rng)]);
        let m = FiniteVNAlgebra::new(6, vec![g1, g2]).unwrap();
        let mcc = commutant(&commutant(&m).unwrap()).unwrap();
        assert_eq!(mcc.algebra_dim(), m.algebra_dim());
        assert!(m.contains_algebra_residual(&mcc) < 1e-9);
        assert!(mcc.contains_algebra_residual(&m) < 1e-9);
    }

    #[test]
    fn cap_is_enforced() {
        let m = FiniteVNAlgebra::full_matrix_algebra(3).unwrap().with_cap(2);
        assert_eq!(
            commutant(&m).unwrap_err(),
            Error::DimensionCapExceeded { dim: 3, cap: 2 }
        );
        assert!(matches!(center(&m), Err(Error::DimensionCapExceeded { .. })));
        assert!(matches!(
            FiniteVNAlgebra::new(300, vec![]),
            Err(Error::DimensionCapExceeded { .. })
        ));
    }

    #[test]
    fn tracial_vector_gives_flip() {
        let m = left_tensor_factor(2).unwrap();
        let md = modular_data(&m, &schmidt_vector(&[0.5, 0.5])).unwrap();
        assert!(relative_residual(&md.delta, &identity(4)) < 1e-12);
        assert!(relative_residual(md.j.linear_part(), &tensor_flip(2)) < 1e-12);
    }

    #[test]
    fn weighted_vector_spectrum() {
        let m = left_tensor_factor(2).unwrap();
        let md = modular_data(&m, &schmidt_vector(&[2.0 / 3.0, 1.0 / 3.0])).unwrap();
        let spec = sorted(SpectralDecomposition::new(&md.delta).unwrap().eigenvalues.iter().copied().collect());
        // λ_i / λ_j over ordered pairs
        let want = [0.5, 1.0, 1.0, 2.0];
        for (a, b) in spec.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{spec:?}");
        }
    }

    #[test]
    fn abelian_tracial_case() {
        let d = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
        let m = FiniteVNAlgebra::new(2, vec![d]).unwrap();
        let omega = CVector::from_vec(vec![ONE, ONE]);
        let md = modular_data(&m, &omega).unwrap();
        assert!(relative_residual(&md.delta, &identity(2)) < 1e-12);
    }

    #[test]
    fn cyclic_and_separating_preconditions() {
        let m = left_tensor_factor(2).unwrap();
        let product = CVector::from_vec(vec![ONE, ZERO, ZERO, ZERO]);
        assert!(matches!(modular_data(&m, &product), Err(Error::NotCyclic { .. })));
        let full = FiniteVNAlgebra::full_matrix_algebra(2).unwrap();
        let v = CVector::from_vec(vec![ONE, ZERO]);
        assert!(matches!(modular_data(&full, &v), Err(Error::NotSeparating { .. })));
    }

    #[test]
    fn kms_boundary_form_by_enumeration() {
        // Δ = ρ ⊗ ρ^{-1}; enumerate matrix units to pin down which ordering holds.
        let m = left_tensor_factor(2).unwrap();
        let md = modular_data(&m, &schmidt_vector(&[2.0 / 3.0, 1.0 / 3.0])).unwrap();
        let omega = &md.omega;
        let units: Vec<CMatrix> = (0..4)
            .map(|k| {
                let mut e = CMatrix::zeros(2, 2);
                e[(k % 2, k / 2)] = ONE;
                e.kronecker(&identity(2))
            })
            .collect();
        let mut ba_err: f64 = 0.0;
        let mut ab_err: f64 = 0.0;
        for a in &units {
            for b in &units {
                let lhs = omega.dotc(&(a * (&md.delta * (b * omega))));
                ba_err = ba_err.max((lhs - omega.dotc(&(b * (a * omega)))).norm());
                ab_err = ab_err.max((lhs - omega.dotc(&(a * (b * omega)))).norm());
            }
        }
        assert!(ba_err < 1e-12);
        assert!(ab_err > 0.1);
    }

    #[test]
    fn weighted_vector_theorem_report() {
        let m = left_tensor_factor(2).unwrap();
        let md = modular_data(&m, &schmidt_vector(&[2.0 / 3.0, 1.0 / 3.0])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = verify_modular_theorem(&md, &m, &[-2.0, -1.0, 0.5, 3.0], 20, &mut rng).unwrap();
        assert!(r.max_residual() <= 1e-9, "{r:?}");
    }

    #[test]
    fn tracial_theorem_report_is_exact() {
        let m = left_tensor_factor(2).unwrap();
        let md = modular_data(&m, &schmidt_vector(&[0.5, 0.5])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = verify_modular_theorem(&md, &m, &[1.0], 5, &mut rng).unwrap();
        assert!(r.max_residual() < 1e-12, "{r:?}");
    }

    #[test]
    fn commutant_modular_operator_is_inverse() {
        let m = left_tensor_factor(3).unwrap();
        let omega = schmidt_vector(&[0.5, 0.3, 0.2]);
        let md = modular_data(&m, &omega).unwrap();
        let mc = commutant(&m).unwrap();
        let mdc = modular_data(&mc, &omega).unwrap();
        let inv = spectral_function(&md.delta, MatrixFunction::Power(-1.0)).unwrap();
        assert!(relative_residual(&mdc.delta, &inv) < 1e-9);
        // JMJ = M' as sets
        let j = Operator::from(md.j.clone());
        for g in m.basis() {
            let jgj = j.compose(&Operator::Linear(g.clone())).unwrap().compose(&j).unwrap();
            assert!(mc.membership_residual(jgj.matrix()) < 1e-9);
        }
    }

    #[test]
    fn factor_and_block_centers() {
        let full = FiniteVNAlgebra::full_matrix_algebra(3).unwrap();
        let info = center(&full).unwrap();
        assert!(info.is_factor);
        assert_eq!(info.projections.len(), 1);
        assert_eq!(info.projections[0].factor_dim, 3);

        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g1 = block_diag(&[random_hermitian(2, &mut rng), random_hermitian(3, &mut rng)]);
        let g2 = block_diag(&[random_hermitian(2, &mut rng), random_hermitian(3, &mut rng)]);
        let m = FiniteVNAlgebra::new(5, vec![g1, g2]).unwrap();
        let info = center(&m).unwrap();
        assert!(!info.is_factor);
        assert_eq!(info.center.algebra_dim(), 2);
        let mut dims: Vec<(usize, usize)> = info
            .projections
            .iter()
            .map(|p| (p.factor_dim, p.multiplicity))
            .collect();
        dims.sort();
        assert_eq!(dims, vec![(2, 1), (3, 1)]);
        for p in &info.projections {
            assert!(m.commutes_with_residual(&p.projection) < 1e-9);
            assert!(m.membership_residual(&p.projection) < 1e-9);
        }
    }

    #[test]
    fn multiplicity_is_detected() {
        // M_2 ⊗ I_3 ⊕ C on C^7
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let id3 = identity(3);
        let a = random_hermitian(2, &mut rng).kronecker(&id3);
        let b = random_hermitian(2, &mut rng).kronecker(&id3);
        let g1 = block_diag(&[a, CMatrix::from_element(1, 1, c64(5.0, 0.0))]);
        let g2 = block_diag(&[b, CMatrix::from_element(1, 1, c64(-1.0, 0.0))]);
        let m = FiniteVNAlgebra::new(7, vec![g1, g2]).unwrap();
        let info = center(&m).unwrap();
        let mut dims: Vec<(usize, usize, usize)> = info
            .projections
            .iter()
            .map(|p| (p.rank, p.factor_dim, p.multiplicity))
            .collect();
        dims.sort();
        assert_eq!(dims, vec![(1, 1, 1), (6, 2, 3)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn random_faithful_states(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w: Vec<f64> = (0..3).map(|_| rand::Rng::gen_range(&mut rng, 0.2..1.0)).collect();
            let total: f64 = w.iter().sum();
            let w: Vec<f64> = w.iter().map(|x| x / total).collect();
            let m = left_tensor_factor(3).unwrap();
            let md = modular_data(&m, &schmidt_vector(&w)).unwrap();
            let r = verify_modular_theorem(&md, &m, &[-1.0, 0.5, 2.0], 10, &mut rng).unwrap();
            prop_assert!(r.max_residual() <= 1e-9, "{:?}", r);
            prop_assert!(md.j.is_antiunitary(1e-10));
            prop_assert!(relative_residual(&md.j.square(), &identity(9)) < 1e-10);
            let logs = md.log_delta_spectrum().unwrap();
            let mut want: Vec<f64> = Vec::new();
            for a in &w { for b in &w { want.push(a.ln() - b.ln()); } }
            let want = sorted(want);
            for (x, y) in logs.iter().zip(&want) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }
}

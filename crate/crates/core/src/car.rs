//! Fermionic Fock space over `n` modes.
//!
//! Basis states are bit strings `s` with bit `j` the occupation of mode `j`.
//! Jordan-Wigner strings run over lower modes:
//! `a_j† |s> = (-1)^{Σ_{k<j} s_k} |s + 2^j>` when `s_j = 0`.
//!
//! Every field monomial has at most one nonzero entry per column, so operators
//! are stored sparsely as [`MonomialOp`] and only densified on request.

use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{
    c64, identity, is_unitary, relative_residual, AntilinearMap, CMatrix, CVector, Operator,
    SpectralDecomposition, I, ONE, ZERO,
};
use crate::random::random_unitary;
use crate::tomita::{modular_data, FiniteVNAlgebra, HARD_CAP};

/// Largest supported number of modes.
pub const MAX_MODES: usize = 12;
/// Required distance of covariance eigenvalues from 0 and 1.
pub const FAITHFUL_MARGIN: f64 = 1e-6;
/// Parity homogeneity tolerance.
pub const PARITY_TOL: f64 = 1e-12;

/// A matrix with at most one nonzero entry in each column.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialOp {
    dim: usize,
    cols: Vec<Option<(usize, Complex64)>>,
}

impl MonomialOp {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            cols: (0..dim).map(|c| Some((c, ONE))).collect(),
        }
    }

    pub fn diagonal(values: impl IntoIterator<Item = Complex64>) -> Self {
        let cols: Vec<_> = values.into_iter().enumerate().map(|(c, v)| Some((c, v))).collect();
        Self {
            dim: cols.len(),
            cols,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Image of basis vector `col`, if nonzero.
    pub fn column(&self, col: usize) -> Option<(usize, Complex64)> {
        self.cols[col]
    }

    /// `self * other`.
    pub fn mul(&self, other: &MonomialOp) -> MonomialOp {
        let cols = other
            .cols
            .iter()
            .map(|e| {
                e.and_then(|(mid, v)| self.cols[mid].map(|(row, w)| (row, w * v)))
                    .filter(|(_, v)| *v != ZERO)
            })
            .collect();
        MonomialOp {
            dim: self.dim,
            cols,
        }
    }

    pub fn scale(&self, s: Complex64) -> MonomialOp {
        MonomialOp {
            dim: self.dim,
            cols: self.cols.iter().map(|e| e.map(|(r, v)| (r, v * s))).collect(),
        }
    }

    /// Conjugate transpose; the column map must be injective on its support.
    pub fn adjoint(&self) -> MonomialOp {
        let mut cols = alloc::vec![None; self.dim];
        for (c, e) in self.cols.iter().enumerate() {
            if let Some((r, v)) = *e {
                debug_assert!(cols[r].is_none(), "monomial adjoint needs an injective map");
                cols[r] = Some((c, v.conj()));
            }
        }
        MonomialOp {
            dim: self.dim,
            cols,
        }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        let mut out = CVector::zeros(self.dim);
        for (c, e) in self.cols.iter().enumerate() {
            if let Some((r, w)) = *e {
                out[r] += w * v[c];
            }
        }
        out
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        self.add_into(&mut m, ONE);
        m
    }

    /// `m += s * self`.
    pub fn add_into(&self, m: &mut CMatrix, s: Complex64) {
        for (c, e) in self.cols.iter().enumerate() {
            if let Some((r, v)) = *e {
                m[(r, c)] += s * v;
            }
        }
    }

    /// Frobenius norm of `self + s * other`.
    pub fn norm_of_sum(&self, other: &MonomialOp, s: Complex64) -> f64 {
        let mut sq = 0.0;
        for c in 0..self.dim {
            match (self.cols[c], other.cols[c]) {
                (Some((r1, v1)), Some((r2, v2))) if r1 == r2 => sq += (v1 + s * v2).norm_sqr(),
                (a, b) => {
                    if let Some((_, v)) = a {
                        sq += v.norm_sqr();
                    }
                    if let Some((_, v)) = b {
                        sq += (s * v).norm_sqr();
                    }
                }
            }
        }
        sq.sqrt()
    }
}

/// Fock space of `n` fermionic modes with grading `Γ` and twist `Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockModel {
    modes: usize,
}

/// Jordan-Wigner CAR model on `n` modes.
pub fn build_car(n: usize) -> Result<FockModel> {
    FockModel::new(n)
}

impl FockModel {
    pub fn new(modes: usize) -> Result<Self> {
        if !(1..=MAX_MODES).contains(&modes) {
            return Err(Error::ModeCapExceeded {
                modes,
                cap: MAX_MODES,
            });
        }
        Ok(Self { modes })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        1 << self.modes
    }

    fn check_mode(&self, j: usize) -> Result<()> {
        if j >= self.modes {
            Err(Error::ModeOutOfRange {
                mode: j,
                modes: self.modes,
            })
        } else {
            Ok(())
        }
    }

    fn string_sign(s: usize, j: usize) -> f64 {
        if (s & ((1 << j) - 1)).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `a_j†`.
    pub fn creation(&self, j: usize) -> Result<MonomialOp> {
        self.check_mode(j)?;
        let cols = (0..self.dim())
            .map(|s| {
                (s & (1 << j) == 0).then(|| (s | (1 << j), c64(Self::string_sign(s, j), 0.0)))
            })
            .collect();
        Ok(MonomialOp {
            dim: self.dim(),
            cols,
        })
    }

    /// `a_j`.
    pub fn annihilation(&self, j: usize) -> Result<MonomialOp> {
        Ok(self.creation(j)?.adjoint())
    }

    /// All creation operators `a_0†, …, a_{n-1}†`.
    pub fn creation_ops(&self) -> Vec<MonomialOp> {
        (0..self.modes)
            .map(|j| self.creation(j).expect("mode in range"))
            .collect()
    }

    /// Majorana operators `γ_{2j} = a_j + a_j†`, `γ_{2j+1} = i(a_j† - a_j)`.
    pub fn majorana(&self, k: usize) -> Result<MonomialOp> {
        let j = k / 2;
        self.check_mode(j)?;
        let sign_bit = 1usize << j;
        let cols = (0..self.dim())
            .map(|s| {
                let sign = Self::string_sign(s, j);
                let occupied = s & sign_bit != 0;
                let v = match (k % 2, occupied) {
                    (0, _) => c64(sign, 0.0),
                    (_, false) => c64(0.0, sign),
                    (_, true) => c64(0.0, -sign),
                };
                Some((s ^ sign_bit, v))
            })
            .collect();
        Ok(MonomialOp {
            dim: self.dim(),
            cols,
        })
    }

    /// Ordered product of Majoranas over the set bits of `mask`
    /// (bit `k` selects `γ_k` on the given mode list, ascending).
    pub fn majorana_monomial(&self, modes: &[usize], mask: usize) -> Result<MonomialOp> {
        let mut out = MonomialOp::identity(self.dim());
        for (pos, &mode) in modes.iter().enumerate() {
            for half in 0..2 {
                if mask & (1 << (2 * pos + half)) != 0 {
                    out = out.mul(&self.majorana(2 * mode + half)?);
                }
            }
        }
        Ok(out)
    }

    pub fn number_op(&self) -> MonomialOp {
        MonomialOp::diagonal((0..self.dim()).map(|s| c64(s.count_ones() as f64, 0.0)))
    }

    /// `Γ = (-1)^N`.
    pub fn grading(&self) -> MonomialOp {
        MonomialOp::diagonal((0..self.dim()).map(|s| c64(parity_sign(s), 0.0)))
    }

    /// `Z = (I + iΓ)/(1 + i)`: `1` on even and `-i` on odd states.
    pub fn twist(&self) -> MonomialOp {
        let one_plus_i = c64(1.0, 1.0);
        MonomialOp::diagonal(
            (0..self.dim()).map(|s| (ONE + I * c64(parity_sign(s), 0.0)) / one_plus_i),
        )
    }

    pub fn vacuum(&self) -> CVector {
        let mut v = CVector::zeros(self.dim());
        v[0] = ONE;
        v
    }
}

fn parity_sign(s: usize) -> f64 {
    if s.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Residuals of the twist relations.
#[derive(Debug, Clone, Default)]
pub struct TwistReport {
    /// `max ‖ZBZ* - B‖`
    pub even_residual: f64,
    /// `max ‖ZFZ* - iΓF‖`
    pub odd_residual: f64,
    /// `max ‖VZV - Z*‖`
    pub antiunitary_residual: f64,
    /// `‖Z² - Γ‖`
    pub square_residual: f64,
    /// `‖Z⁴ - I‖`
    pub fourth_power_residual: f64,
    /// `‖Z*Z - I‖`
    pub unitarity_residual: f64,
}

impl TwistReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.even_residual,
            self.odd_residual,
            self.antiunitary_residual,
            self.square_residual,
            self.fourth_power_residual,
            self.unitarity_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn parity_residual(gamma: &CMatrix, x: &CMatrix, sign: f64) -> f64 {
    let conj = gamma * x * gamma;
    (conj - x * c64(sign, 0.0)).norm() / x.norm().max(1.0)
}

/// `ZBZ* = B` on even, `ZFZ* = iΓF` on odd operators, and `VZV = Z*` for each
/// antiunitary `V` with `VΓV = Γ` and `VΩ = Ω`.
pub fn twist_relations_check(
    fm: &FockModel,
    even_ops: &[CMatrix],
    odd_ops: &[CMatrix],
    antiunitaries: &[AntilinearMap],
) -> Result<TwistReport> {
    let n = fm.dim();
    let gamma = fm.grading().to_dense();
    let z = fm.twist().to_dense();
    let zs = z.adjoint();
    let mut report = TwistReport::default();
    for (ops, sign) in [(even_ops, 1.0), (odd_ops, -1.0)] {
        for x in ops {
            if x.nrows() != n || x.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: x.nrows(),
                });
            }
            let residual = parity_residual(&gamma, x, sign);
            if residual > PARITY_TOL {
                return Err(Error::WrongParity { residual });
            }
            let lhs = &z * x * &zs;
            if sign > 0.0 {
                report.even_residual = report.even_residual.max((lhs - x).norm());
            } else {
                let rhs = &gamma * x * I;
                report.odd_residual = report.odd_residual.max((lhs - rhs).norm());
            }
        }
    }
    let vacuum = fm.vacuum();
    for v in antiunitaries {
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
        let op = Operator::from(v.clone());
        let vgv = op.compose(&Operator::Linear(gamma.clone()))?.compose(&op)?;
        if !v.is_antiunitary(1e-10)
            || relative_residual(vgv.matrix(), &gamma) > 1e-10
            || (v.apply(&vacuum) - &vacuum).norm() > 1e-10
        {
            return Err(Error::InvalidAntiunitary);
        }
        let vzv = op.compose(&Operator::Linear(z.clone()))?.compose(&op)?;
        report.antiunitary_residual = report
            .antiunitary_residual
            .max((vzv.matrix() - &zs).norm());
    }
    let z2 = &z * &z;
    report.square_residual = (&z2 - &gamma).norm();
    report.fourth_power_residual = (&z2 * &z2 - identity(n)).norm();
    report.unitarity_residual = (&zs * &z - identity(n)).norm();
    Ok(report)
}

/// A random antiunitary `V = L ∘ conj` with `VΓV = Γ` and `VΩ = Ω`: `L = U Uᵀ`
/// for a random parity-block unitary `U` fixing the vacuum.
pub fn random_grading_antiunitary<R: Rng + ?Sized>(fm: &FockModel, rng: &mut R) -> AntilinearMap {
    let n = fm.dim();
    let even: Vec<usize> = (0..n).filter(|&s| s.count_ones() % 2 == 0 && s != 0).collect();
    let odd: Vec<usize> = (0..n).filter(|&s| s.count_ones() % 2 == 1).collect();
    let mut u = CMatrix::zeros(n, n);
    u[(0, 0)] = ONE;
    for block in [&even, &odd] {
        let b = random_unitary(block.len(), rng);
        for (i, &r) in block.iter().enumerate() {
            for (j, &c) in block.iter().enumerate() {
                u[(r, c)] = b[(i, j)];
            }
        }
    }
    let l = &u * u.transpose();
    debug_assert!(is_unitary(&l, 1e-10));
    AntilinearMap::new(l).expect("square")
}

/// Residuals of twisted locality between two mode regions.
#[derive(Debug, Clone, Default)]
pub struct LocalityReport {
    pub pairs_checked: usize,
    /// `max ‖{F₁, F₂}‖` or `‖[B₁, F₂]‖` over graded pairs
    pub graded_residual: f64,
    /// `max ‖[ZF₁Z*, F₂]‖`
    pub twisted_residual: f64,
    /// Pairs where graded and twisted commutation disagree
    pub equivalence_mismatches: usize,
}

impl LocalityReport {
    pub fn max_residual(&self) -> f64 {
        self.graded_residual.max(self.twisted_residual)
    }
}

fn region_check(fm: &FockModel, region: &[usize]) -> Result<()> {
    for &m in region {
        fm.check_mode(m)?;
    }
    Ok(())
}

fn monomials(fm: &FockModel, region: &[usize]) -> Result<Vec<(MonomialOp, bool)>> {
    (0..1usize << (2 * region.len()))
        .map(|mask| {
            let odd = mask.count_ones() % 2 == 1;
            fm.majorana_monomial(region, mask).map(|op| (op, odd))
        })
        .collect()
}

/// Graded and twisted commutators of one homogeneous pair.
fn graded_and_twisted(z: &MonomialOp, zs: &MonomialOp, x: &MonomialOp, x_odd: bool, y: &MonomialOp, y_odd: bool) -> (f64, f64) {
    let xy = x.mul(y);
    let yx = y.mul(x);
    let sign = if x_odd && y_odd { ONE } else { -ONE };
    let graded = xy.norm_of_sum(&yx, sign);
    let zxz = z.mul(x).mul(zs);
    let twisted = zxz.mul(y).norm_of_sum(&y.mul(&zxz), -ONE);
    (graded, twisted)
}

/// Exhaustive twisted-locality check over Majorana monomials of two disjoint regions.
pub fn twisted_locality_check(
    fm: &FockModel,
    modes_a: &[usize],
    modes_b: &[usize],
) -> Result<LocalityReport> {
    region_check(fm, modes_a)?;
    region_check(fm, modes_b)?;
    if modes_a.iter().any(|m| modes_b.contains(m)) {
        return Err(Error::OverlappingRegions);
    }
    pair_scan(fm, modes_a, modes_b)
}

/// For every pair of homogeneous monomials on all modes (overlapping allowed),
/// graded commutation holds iff twisted commutation holds, with equal norms.
pub fn graded_twisted_equivalence(fm: &FockModel) -> Result<LocalityReport> {
    let all: Vec<usize> = (0..fm.modes).collect();
    pair_scan(fm, &all, &all)
}

fn pair_scan(fm: &FockModel, modes_a: &[usize], modes_b: &[usize]) -> Result<LocalityReport> {
    let z = fm.twist();
    let zs = z.adjoint();
    let left = monomials(fm, modes_a)?;
    let right = monomials(fm, modes_b)?;
    let disjoint = !modes_a.iter().any(|m| modes_b.contains(m));
    let mut report = LocalityReport::default();
    let mut norm_gap: f64 = 0.0;
    for (x, x_odd) in &left {
        for (y, y_odd) in &right {
            let (graded, twisted) = graded_and_twisted(&z, &zs, x, *x_odd, y, *y_odd);
            report.pairs_checked += 1;
            if (graded <= PARITY_TOL) != (twisted <= PARITY_TOL) {
                report.equivalence_mismatches += 1;
            }
            norm_gap = norm_gap.max((graded - twisted).abs());
            if disjoint {
                report.graded_residual = report.graded_residual.max(graded);
                report.twisted_residual = report.twisted_residual.max(twisted);
            }
        }
    }
    if !disjoint {
        // the residuals become the norm gap between the two commutators
        report.graded_residual = norm_gap;
        report.twisted_residual = norm_gap;
    }
    Ok(report)
}

/// A fermionic quasi-free state given by `G_ij = ω(a_i† a_j)`.
#[derive(Debug, Clone)]
pub struct QuasiFreeState {
    covariance: CMatrix,
}

impl QuasiFreeState {
    pub fn new(covariance: CMatrix) -> Result<Self> {
        let spec = SpectralDecomposition::new(&covariance)?;
        if spec.min_eigenvalue() < -1e-12 {
            return Err(Error::NotPositive {
                min_eigenvalue: spec.min_eigenvalue(),
            });
        }
        if spec.max_eigenvalue() > 1.0 + 1e-12 {
            return Err(Error::NotPositive {
                min_eigenvalue: 1.0 - spec.max_eigenvalue(),
            });
        }
        Ok(Self { covariance })
    }

    pub fn diagonal(occupations: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_diagonal(&CVector::from_iterator(
            occupations.len(),
            occupations.iter().map(|&g| c64(g, 0.0)),
        )))
    }

    /// `U diag(g) U†` with Haar `U` and `g` uniform in `[lo, hi]`.
    pub fn random<R: Rng + ?Sized>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Result<Self> {
        let u = random_unitary(n, rng);
        let g = CVector::from_fn(n, |_, _| c64(rng.gen_range(lo..hi), 0.0));
        let cov = &u * CMatrix::from_diagonal(&g) * u.adjoint();
        Self::new((&cov + cov.adjoint()).unscale(2.0))
    }

    pub fn covariance(&self) -> &CMatrix {
        &self.covariance
    }

    pub fn modes(&self) -> usize {
        self.covariance.nrows()
    }

    /// Covariance restricted to a subset of modes.
    pub fn restrict(&self, modes: &[usize]) -> Result<Self> {
        for &m in modes {
            if m >= self.modes() {
                return Err(Error::ModeOutOfRange {
                    mode: m,
                    modes: self.modes(),
                });
            }
        }
        let k = modes.len();
        let sub = CMatrix::from_fn(k, k, |i, j| self.covariance[(modes[i], modes[j])]);
        Self::new(sub)
    }

    pub fn is_faithful(&self, margin: f64) -> bool {
        match SpectralDecomposition::new(&self.covariance) {
            Ok(spec) => spec.min_eigenvalue() > margin && spec.max_eigenvalue() < 1.0 - margin,
            Err(_) => false,
        }
    }
}

/// Brute-force GNS modular spectrum against the closed form.
#[derive(Debug, Clone)]
pub struct QuasiFreeReport {
    pub modes: usize,
    /// Eigenvalues `g_k` of the restricted covariance
    pub occupations: Vec<f64>,
    /// `ε_k = log((1 - g_k)/g_k)`
    pub one_particle_modular: Vec<f64>,
    /// Ascending spectrum of `log Δ` from the GNS construction
    pub gns_spectrum: Vec<f64>,
    /// Ascending multiset of sums `Σ_k n_k ε_k`, `n_k ∈ {-1, 0, 0, 1}`
    pub predicted_spectrum: Vec<f64>,
    /// `max |gns - predicted|`
    pub spectrum_residual: f64,
    /// `max |ω(a_i† a_j) - G_ij|` in the purified vector state
    pub covariance_residual: f64,
}

/// Closed-form `log Δ` spectrum of a quasi-free state with occupations `g`.
pub fn predicted_log_delta_spectrum(occupations: &[f64]) -> Vec<f64> {
    let mut values = alloc::vec![0.0];
    for &g in occupations {
        let eps = ((1.0 - g) / g).ln();
        values = values
            .iter()
            .flat_map(|&v| [v - eps, v, v, v + eps])
            .collect();
    }
    values.sort_by(f64::total_cmp);
    values
}

/// Builds the GNS representation of the CAR algebra over `modes_a` in the
/// quasi-free state `g` by purification doubling, computes its modular operator
/// with the brute-force Tomita engine, and compares spectra.
pub fn quasifree_modular_oracle(
    fm: &FockModel,
    modes_a: &[usize],
    g: &QuasiFreeState,
) -> Result<QuasiFreeReport> {
    region_check(fm, modes_a)?;
    if g.modes() != fm.modes() {
        return Err(Error::DimensionMismatch {
            expected: fm.modes(),
            found: g.modes(),
        });
    }
    let k = modes_a.len();
    let doubled_dim = 1usize << (2 * k);
    if k == 0 || doubled_dim > HARD_CAP {
        return Err(Error::DimensionCapExceeded {
            dim: doubled_dim,
            cap: HARD_CAP,
        });
    }
    let local = g.restrict(modes_a)?;
    let spec = SpectralDecomposition::new(local.covariance())?;
    for &x in spec.eigenvalues.iter() {
        if x <= FAITHFUL_MARGIN || x >= 1.0 - FAITHFUL_MARGIN {
            return Err(Error::NotFaithful { eigenvalue: x });
        }
    }
    let occupations: Vec<f64> = spec.eigenvalues.iter().copied().collect();
    let u = &spec.eigenvectors;

    let big = FockModel::new(2 * k)?;
    let mut omega = big.vacuum();
    for (mode, &gk) in occupations.iter().enumerate() {
        // Bogoliubov-rotated vacuum: (√(1-g) + √g c_k† c_{k̄}†) on each pair
        let pair = big.creation(mode)?.mul(&big.creation(k + mode)?);
        omega = omega.scale((1.0 - gk).sqrt()) + pair.apply(&omega).scale(gk.sqrt());
    }

    // a_i = Σ_m conj(U_im) c_m
    let c_ops: Vec<CMatrix> = (0..k)
        .map(|m| big.annihilation(m).map(|op| op.to_dense()))
        .collect::<Result<_>>()?;
    let a_ops: Vec<CMatrix> = (0..k)
        .map(|i| {
            let mut a = CMatrix::zeros(doubled_dim, doubled_dim);
            for (m, c) in c_ops.iter().enumerate() {
                a += c * u[(i, m)].conj();
            }
            a
        })
        .collect();
    let mut covariance_residual: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let val = omega.dotc(&(a_ops[i].adjoint() * (&a_ops[j] * &omega)));
            covariance_residual = covariance_residual.max((val - local.covariance()[(i, j)]).norm());
        }
    }

    let local_modes: Vec<usize> = (0..k).collect();
    let norm = (doubled_dim as f64).sqrt();
    let basis: Vec<CMatrix> = (0..1usize << (2 * k))
        .map(|mask| {
            big.majorana_monomial(&local_modes, mask)
                .map(|op| op.to_dense().unscale(norm))
        })
        .collect::<Result<_>>()?;
    let algebra = FiniteVNAlgebra::with_basis(doubled_dim, a_ops, basis)?;
    let md = modular_data(&algebra, &omega)?;
    let gns_spectrum = md.log_delta_spectrum()?;
    let predicted_spectrum = predicted_log_delta_spectrum(&occupations);
    let spectrum_residual = gns_spectrum
        .iter()
        .zip(&predicted_spectrum)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(QuasiFreeReport {
        modes: k,
        one_particle_modular: occupations.iter().map(|g| ((1.0 - g) / g).ln()).collect(),
        occupations,
        gns_spectrum,
        predicted_spectrum,
        spectrum_residual,
        covariance_residual,
    })
}

/// A superselection sector of the `Z₂` gauge action generated by `Γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorInfo {
    pub label: String,
    /// Dimension of the sector subspace of Fock space
    pub subspace_dim: usize,
    /// Statistical dimension `d`
    pub dimension: usize,
    /// Statistics phase `κ = ±1`
    pub statistics_phase: i32,
    /// `d²`
    pub index: usize,
    /// `max ‖Γ v - κ v‖` over the sector's basis
    pub grading_residual: f64,
}

/// Even and odd sectors with their statistics phases.
pub fn sector_statistics(fm: &FockModel) -> Vec<SectorInfo> {
    let gamma = fm.grading();
    [("even", 0usize, 1i32), ("odd", 1, -1)]
        .into_iter()
        .map(|(label, parity, kappa)| {
            let states: Vec<usize> = (0..fm.dim())
                .filter(|s| s.count_ones() as usize % 2 == parity)
                .collect();
            let mut residual: f64 = 0.0;
            for &s in &states {
                let (r, v) = gamma.column(s).expect("Γ is invertible");
                let err = if r == s {
                    (v - c64(kappa as f64, 0.0)).norm()
                } else {
                    f64::INFINITY
                };
                residual = residual.max(err);
            }
            SectorInfo {
                label: label.into(),
                subspace_dim: states.len(),
                dimension: 1,
                statistics_phase: kappa,
                index: 1,
                grading_residual: residual,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::anticommutator;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dense(op: Result<MonomialOp>) -> CMatrix {
        op.unwrap().to_dense()
    }

    #[test]
    fn single_mode_matrices() {
        let fm = build_car(1).unwrap();
        let adag = dense(fm.creation(0));
        assert_eq!(adag, CMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ONE, ZERO]));
        assert_eq!(
            fm.grading().to_dense(),
            CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
        );
    }

    #[test]
    fn car_relations_exact() {
        for n in 1..=4 {
            let fm = build_car(n).unwrap();
            let id = identity(fm.dim());
            for i in 0..n {
                for j in 0..n {
                    let ai = dense(fm.annihilation(i));
                    let aj = dense(fm.annihilation(j));
                    let ajd = dense(fm.creation(j));
                    let want = if i == j { id.clone() } else { CMatrix::zeros(fm.dim(), fm.dim()) };
                    assert_eq!(anticommutator(&ai, &ajd), want);
                    assert_eq!(anticommutator(&ai, &aj), CMatrix::zeros(fm.dim(), fm.dim()));
                }
            }
        }
    }

    #[test]
    fn grading_is_popcount_parity() {
        let fm = build_car(3).unwrap();
        let g = fm.grading().to_dense();
        for s in 0..8usize {
            let want = if s.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(g[(s, s)], c64(want, 0.0));
        }
        let n_op = fm.number_op().to_dense();
        let spectrum: Vec<f64> = (0..8).map(|s| n_op[(s, s)].re).collect();
        for k in 0..=3 {
            assert!(spectrum.contains(&(k as f64)));
        }
    }

    #[test]
    fn mode_caps() {
        assert!(matches!(build_car(0), Err(Error::ModeCapExceeded { .. })));
        assert!(matches!(build_car(13), Err(Error::ModeCapExceeded { .. })));
        let fm = build_car(12).unwrap();
        assert_eq!(fm.dim(), 4096);
        let a = fm.creation(11).unwrap();
        assert_eq!(a.mul(&a), MonomialOp { dim: 4096, cols: vec![None; 4096] });
    }

    #[test]
    fn twist_closed_form_by_enumeration() {
        // (I + iΓ)/(1 + i) entrywise: even -> 1, odd -> (1 - i)/(1 + i) = -i
        let fm = build_car(1).unwrap();
        let z = fm.twist().to_dense();
        assert_eq!(z[(0, 0)], ONE);
        assert!((z[(1, 1)] - c64(0.0, -1.0)).norm() < 1e-16);
        let z2 = &z * &z;
        // Z² = Γ, not -iΓ; hence Z⁴ = I
        assert!((z2 - fm.grading().to_dense()).norm() < 1e-15);
    }

    #[test]
    fn single_mode_twist_examples() {
        let fm = build_car(1).unwrap();
        let a = dense(fm.annihilation(0));
        let ad = dense(fm.creation(0));
        let b = &ad * &a;
        let f = &a + &ad;
        let conj = AntilinearMap::conjugation(2);
        let r = twist_relations_check(&fm, &[b], std::slice::from_ref(&f), &[conj]).unwrap();
        assert!(r.max_residual() == 0.0 || r.max_residual() < 1e-15, "{r:?}");
        let z = fm.twist().to_dense();
        let lhs = &z * &f * z.adjoint();
        let rhs = fm.grading().to_dense() * &f * I;
        for i in 0..2 {
            for j in 0..2 {
                assert!((lhs[(i, j)] - rhs[(i, j)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn wrong_parity_is_rejected() {
        let fm = build_car(1).unwrap();
        let mixed = identity(2) + dense(fm.creation(0));
        assert!(matches!(
            twist_relations_check(&fm, std::slice::from_ref(&mixed), &[], &[]),
            Err(Error::WrongParity { .. })
        ));
        assert!(matches!(
            twist_relations_check(&fm, &[], &[mixed], &[]),
            Err(Error::WrongParity { .. })
        ));
    }

    #[test]
    fn invalid_antiunitary_is_rejected() {
        let fm = build_car(1).unwrap();
        let swap = AntilinearMap::new(CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])).unwrap();
        assert_eq!(
            twist_relations_check(&fm, &[], &[], &[swap]).unwrap_err(),
            Error::InvalidAntiunitary
        );
    }

    #[test]
    fn random_grading_antiunitaries_twist_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let fm = build_car(3).unwrap();
        for _ in 0..5 {
            let v = random_grading_antiunitary(&fm, &mut rng);
            let r = twist_relations_check(&fm, &[], &[], &[v]).unwrap();
            assert!(r.antiunitary_residual < 1e-12);
        }
    }

    #[test]
    fn locality_examples() {
        let fm = build_car(2).unwrap();
        let r = twisted_locality_check(&fm, &[0], &[1]).unwrap();
        assert_eq!(r.pairs_checked, 4 * 4);
        assert_eq!(r.max_residual(), 0.0);
        assert_eq!(
            twisted_locality_check(&fm, &[0], &[0]).unwrap_err(),
            Error::OverlappingRegions
        );
        // hand-built pair: F1 = a_0 + a_0†, F2 = a_1 + a_1†
        let f1 = dense(fm.majorana(0));
        let f2 = dense(fm.majorana(2));
        assert_eq!(anticommutator(&f1, &f2), CMatrix::zeros(4, 4));
        let z = fm.twist().to_dense();
        let zfz = &z * &f1 * z.adjoint();
        assert!((&zfz * &f2 - &f2 * &zfz).norm() < 1e-15);
    }

    #[test]
    fn even_odd_disjoint() {
        let fm = build_car(3).unwrap();
        let b = dense(fm.creation(0)) * dense(fm.annihilation(0));
        let f = dense(fm.majorana(4));
        assert_eq!(&b * &f - &f * &b, CMatrix::zeros(8, 8));
        let r = twisted_locality_check(&fm, &[0, 1], &[2]).unwrap();
        assert_eq!(r.max_residual(), 0.0);
        assert_eq!(r.equivalence_mismatches, 0);
    }

    #[test]
    fn equivalence_over_all_pairs() {
        for n in 1..=3 {
            let fm = build_car(n).unwrap();
            let r = graded_twisted_equivalence(&fm).unwrap();
            assert_eq!(r.pairs_checked, 1 << (4 * n));
            assert_eq!(r.equivalence_mismatches, 0);
            assert!(r.max_residual() < 1e-12);
        }
    }

    #[test]
    fn majoranas_square_to_one() {
        let fm = build_car(3).unwrap();
        for k in 0..6 {
            let g = fm.majorana(k).unwrap();
            assert_eq!(g.mul(&g), MonomialOp::identity(8));
            assert_eq!(g.adjoint(), g);
        }
    }

    #[test]
    fn quasifree_half_filling_is_tracial() {
        let fm = build_car(2).unwrap();
        let g = QuasiFreeState::diagonal(&[0.5, 0.5]).unwrap();
        let r = quasifree_modular_oracle(&fm, &[0, 1], &g).unwrap();
        assert!(r.gns_spectrum.iter().all(|x| x.abs() < 1e-10));
        assert!(r.spectrum_residual < 1e-10);
    }

    #[test]
    fn quasifree_single_mode() {
        let fm = build_car(1).unwrap();
        let g = QuasiFreeState::diagonal(&[2.0 / 3.0]).unwrap();
        let r = quasifree_modular_oracle(&fm, &[0], &g).unwrap();
        let l2 = 2f64.ln();
        let want = [-l2, 0.0, 0.0, l2];
        for (a, b) in r.gns_spectrum.iter().zip(want) {
            assert!((a - b).abs() < 1e-10, "{:?}", r.gns_spectrum);
        }
        assert!((r.one_particle_modular[0] + l2).abs() < 1e-14);
    }

    #[test]
    fn quasifree_two_modes() {
        let fm = build_car(2).unwrap();
        let g = QuasiFreeState::diagonal(&[0.6, 0.7]).unwrap();
        let r = quasifree_modular_oracle(&fm, &[0, 1], &g).unwrap();
        assert!(r.spectrum_residual < 1e-8, "{r:?}");
        assert!(r.covariance_residual < 1e-12);
    }

    #[test]
    fn quasifree_rejects_pure_states() {
        let fm = build_car(1).unwrap();
        let g = QuasiFreeState::diagonal(&[1.0]).unwrap();
        assert!(matches!(
            quasifree_modular_oracle(&fm, &[0], &g),
            Err(Error::NotFaithful { .. })
        ));
        let fm = build_car(5).unwrap();
        let g = QuasiFreeState::diagonal(&[0.5; 5]).unwrap();
        assert!(matches!(
            quasifree_modular_oracle(&fm, &[0, 1, 2, 3, 4], &g),
            Err(Error::DimensionCapExceeded { .. })
        ));
    }

    #[test]
    fn quasifree_restricted_subregion() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let fm = build_car(3).unwrap();
        let g = QuasiFreeState::random(3, 0.25, 0.75, &mut rng).unwrap();
        let r = quasifree_modular_oracle(&fm, &[0, 2], &g).unwrap();
        assert!(r.spectrum_residual < 1e-8, "{r:?}");
        assert!(r.covariance_residual < 1e-12);
    }

    #[test]
    fn sectors() {
        let s1 = sector_statistics(&build_car(1).unwrap());
        assert_eq!(
            s1.iter().map(|s| (s.subspace_dim, s.statistics_phase)).collect::<Vec<_>>(),
            vec![(1, 1), (1, -1)]
        );
        let s3 = sector_statistics(&build_car(3).unwrap());
        for s in &s3 {
            assert_eq!(s.subspace_dim, 4);
            assert_eq!(s.grading_residual, 0.0);
            assert_eq!(s.index, s.dimension * s.dimension);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn quasifree_random_covariances(seed in any::<u64>(), k in 1usize..=3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fm = build_car(k).unwrap();
            let g = QuasiFreeState::random(k, 0.25, 0.75, &mut rng).unwrap();
            let modes: Vec<usize> = (0..k).collect();
            let r = quasifree_modular_oracle(&fm, &modes, &g).unwrap();
            prop_assert!(r.spectrum_residual < 1e-8);
        }

        #[test]
        fn twist_on_random_homogeneous(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fm = build_car(3).unwrap();
            let mut even = CMatrix::zeros(8, 8);
            let mut odd = CMatrix::zeros(8, 8);
            for mask in 0..64usize {
                let w = crate::random::complex_gaussian(&mut rng);
                let op = fm.majorana_monomial(&[0, 1, 2], mask).unwrap();
                if mask.count_ones() % 2 == 0 { op.add_into(&mut even, w) } else { op.add_into(&mut odd, w) }
            }
            let v = random_grading_antiunitary(&fm, &mut rng);
            let r = twist_relations_check(&fm, &[even], &[odd], &[v]).unwrap();
            prop_assert!(r.max_residual() < 1e-12, "{:?}", r);
        }
    }
}

//! Concrete representations where the wedge operator identities are exactly
//! checkable: finite-dimensional `sl(2,R)` representations and symbolic
//! one-particle wedge operators acting on mass-shell wavefunctions.
//!
//! A [`SymbolicWedgeOp`] `(L, c, φ, A, a)` acts on a wavefunction by
//!
//! ```text
//! (Oψ)(p) = φ e^{i<p, a>} A C^c[ψ(L⁻¹ p)]
//! ```
//!
//! with `C` entrywise complex conjugation. Scalar `Θ` is plain momentum-space
//! conjugation; every `J_W` is fixed by `Θ = J_W U(R_W)`. Spin-1/2 multipliers
//! are `SL(2,C)` cover elements; the antilinear identities hold on the subgroup
//! preserving `x₃` (where `conj(A) = σ₁ A σ₁`), so spin-1/2 reflection checks
//! are restricted to it.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::car::{sector_statistics, FockModel};
use crate::error::{Error, Result};
use crate::lorentz::{
    boost, cone_check, edge_reflection_r1, lift_lorentz, lorentz_inverse, minkowski_dot,
    pauli, pct_region_check, rotation, sl2c_boost, sl2c_rotation, sl2c_to_lorentz,
    CoverElement, DoubleCone, LorentzMatrix, MinkVector, Sl2c, Wedge,
};
use crate::numerics::{c64, spectral_function, CMatrix, CVector, MatrixFunction, I, ONE, ZERO};
use crate::random::{complex_gaussian, gaussian};

/// Spin-`j` triple `(J_z, J₊, J₋)` in the basis `m = j, j-1, …, -j`.
pub fn spin_matrices(m: usize) -> (CMatrix, CMatrix, CMatrix) {
    let j = (m as f64 - 1.0) / 2.0;
    let jz = CMatrix::from_fn(m, m, |r, c| {
        if r == c {
            c64(j - r as f64, 0.0)
        } else {
            ZERO
        }
    });
    let jp = CMatrix::from_fn(m, m, |r, c| {
        if c == r + 1 {
            let mc = j - c as f64;
            c64((j * (j + 1.0) - mc * (mc + 1.0)).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let jm = jp.transpose();
    (jz, jp, jm)
}

/// Irreducible `m`-dimensional representation of `sl(2,R)` with
/// `h -> 2J_z`, `e -> J₊`, `f -> J₋`.
#[derive(Debug, Clone)]
pub struct Sl2FiniteRep {
    pub dim: usize,
    /// `dπ(μ'(0)) = -π dπ(e + f)`
    pub mu_generator: CMatrix,
    /// `dπ(ν'(0)) = -π dπ(h)`
    pub nu_generator: CMatrix,
    /// `H = i dπ(μ'(0))`
    pub h: CMatrix,
    /// `K = i dπ(ν'(0))`
    pub k: CMatrix,
    e: CMatrix,
    f: CMatrix,
}

impl Sl2FiniteRep {
    /// `‖[dπ(μ'), dπ(ν')] - 2π² dπ(f - e)‖`.
    pub fn bracket_residual(&self) -> f64 {
        let a = &self.mu_generator;
        let b = &self.nu_generator;
        let bracket = a * b - b * a;
        let want = (&self.f - &self.e) * c64(2.0 * PI * PI, 0.0);
        (bracket - want).norm()
    }
}

pub fn finite_sl2_rep(m: usize) -> Result<Sl2FiniteRep> {
    if !(2..=12).contains(&m) {
        return Err(Error::BadDimension(m));
    }
    let (jz, jp, jm) = spin_matrices(m);
    let mu_generator = (&jp + &jm) * c64(-PI, 0.0);
    let nu_generator = &jz * c64(-2.0 * PI, 0.0);
    Ok(Sl2FiniteRep {
        dim: m,
        h: &mu_generator * I,
        k: &nu_generator * I,
        mu_generator,
        nu_generator,
        e: jp,
        f: jm,
    })
}

/// Residuals of `e^{K/2} e^{itH} e^{-K/2} = e^{-itH}` on a grid.
#[derive(Debug, Clone)]
pub struct PropertyIIReport {
    pub dim: usize,
    /// `(t, ‖LHS - RHS‖ / ‖RHS‖)`
    pub residuals: Vec<(f64, f64)>,
    pub max_residual: f64,
    /// Same residual at the doubled grid `2t`
    pub doubled_max_residual: f64,
    pub bracket_residual: f64,
}

fn property_ii_residual(rep: &Sl2FiniteRep, t: f64) -> f64 {
    // e^{itH} = e^{-tA} with A = dπ(μ'(0)) real symmetric, e^{±K/2} = e^{±iB/2}
    let a = &rep.mu_generator;
    let b = &rep.nu_generator;
    let compute = || -> Result<f64> {
        let fwd = spectral_function(&(a * c64(-t, 0.0)), MatrixFunction::Exp)?;
        let back = spectral_function(&(a * c64(t, 0.0)), MatrixFunction::Exp)?;
        let half = spectral_function(b, MatrixFunction::ExpIt(0.5))?;
        let half_inv = spectral_function(b, MatrixFunction::ExpIt(-0.5))?;
        let lhs = half * fwd * half_inv;
        Ok((lhs - &back).norm() / back.norm())
    };
    compute().unwrap_or(f64::INFINITY)
}

pub fn check_property_ii(rep: &Sl2FiniteRep, t_grid: &[f64]) -> PropertyIIReport {
    let residuals: Vec<(f64, f64)> = t_grid
        .iter()
        .map(|&t| (t, property_ii_residual(rep, t)))
        .collect();
    let doubled = t_grid
        .iter()
        .map(|&t| property_ii_residual(rep, 2.0 * t))
        .fold(0.0, f64::max);
    PropertyIIReport {
        dim: rep.dim,
        max_residual: residuals.iter().map(|r| r.1).fold(0.0, f64::max),
        residuals,
        doubled_max_residual: doubled,
        bracket_residual: rep.bracket_residual(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Zero,
    Half,
}

impl Spin {
    /// Parses `0`, `1/2`, `0.5` and `half`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "0" | "zero" => Ok(Spin::Zero),
            "1/2" | "0.5" | "half" => Ok(Spin::Half),
            other => Err(Error::UnsupportedSpin(other.into())),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Spin::Zero => "0",
            Spin::Half => "1/2",
        }
    }

    pub fn components(&self) -> usize {
        match self {
            Spin::Zero => 1,
            Spin::Half => 2,
        }
    }

    /// Constant value of the twist `Z` on the one-particle space.
    pub fn twist_phase(&self) -> Complex64 {
        match self {
            Spin::Zero => ONE,
            Spin::Half => -I,
        }
    }
}

fn conj_m(a: &Sl2c) -> Sl2c {
    a.map(|z| z.conj())
}

fn in_x3_fixing_subgroup(l: &LorentzMatrix, tol: f64) -> bool {
    (l[(3, 3)] - 1.0).abs() <= tol && (0..3).all(|k| l[(3, k)].abs() <= tol && l[(k, 3)].abs() <= tol)
}

fn lorentz_scale_tol(l: &LorentzMatrix) -> f64 {
    1e-9 * l.amax().max(1.0)
}

/// One-particle operator `(L, c, φ, A, a)`; see the module docs for the action.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicWedgeOp {
    pub lorentz: LorentzMatrix,
    pub conj: bool,
    pub phase: Complex64,
    /// `None` for spin 0
    pub multiplier: Option<Sl2c>,
    pub translation: MinkVector,
}

impl SymbolicWedgeOp {
    pub fn identity(spin: Spin) -> Self {
        Self::scalar(spin, ONE)
    }

    pub fn scalar(spin: Spin, phase: Complex64) -> Self {
        Self {
            lorentz: LorentzMatrix::identity(4, 4),
            conj: false,
            phase,
            multiplier: match spin {
                Spin::Zero => None,
                Spin::Half => Some(pauli(0)),
            },
            translation: MinkVector::zeros(4),
        }
    }

    /// `Z` on the one-particle space.
    pub fn twist(spin: Spin) -> Self {
        Self::scalar(spin, spin.twist_phase())
    }

    /// `Γ = Z²` on the one-particle space.
    pub fn grading(spin: Spin) -> Self {
        let z = spin.twist_phase();
        Self::scalar(spin, z * z)
    }

    /// `Θ` for scalars: plain momentum-space conjugation.
    pub fn scalar_pct() -> Self {
        Self {
            conj: true,
            ..Self::identity(Spin::Zero)
        }
    }

    /// `U(g)` for a `d = 4` cover element.
    pub fn unitary(g: &CoverElement, spin: Spin) -> Result<Self> {
        let CoverElement::Sl2c { a, translation } = g else {
            return Err(Error::BadDimension(g.dim()));
        };
        let (l, _) = g.covering_map()?;
        Ok(Self {
            lorentz: l,
            conj: false,
            phase: ONE,
            multiplier: match spin {
                Spin::Zero => None,
                Spin::Half => Some(*a),
            },
            translation: MinkVector::from_row_slice(translation),
        })
    }

    pub fn spin(&self) -> Spin {
        if self.multiplier.is_some() {
            Spin::Half
        } else {
            Spin::Zero
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let multiplier = match (&self.multiplier, &other.multiplier) {
            (None, None) => None,
            (Some(a), Some(b)) => Some(a * if self.conj { conj_m(b) } else { *b }),
            _ => {
                return Err(Error::UnsupportedSpin(
                    "cannot compose spin 0 with spin 1/2 operators".into(),
                ))
            }
        };
        let sign = if self.conj { -1.0 } else { 1.0 };
        Ok(Self {
            lorentz: &self.lorentz * &other.lorentz,
            conj: self.conj ^ other.conj,
            phase: self.phase
                * if self.conj {
                    other.phase.conj()
                } else {
                    other.phase
                },
            multiplier,
            translation: &self.translation + &self.lorentz * &other.translation * sign,
        })
    }

    pub fn inverse(&self) -> Self {
        let l_inv = lorentz_inverse(&self.lorentz);
        let cc = |z: Complex64| if self.conj { z.conj() } else { z };
        let sign = if self.conj { 1.0 } else { -1.0 };
        Self {
            translation: &l_inv * &self.translation * sign,
            lorentz: l_inv,
            conj: self.conj,
            phase: cc(ONE / self.phase),
            multiplier: self.multiplier.map(|a| {
                let inv = a.try_inverse().expect("det A = 1");
                if self.conj {
                    conj_m(&inv)
                } else {
                    inv
                }
            }),
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            phase: -self.phase,
            ..self.clone()
        }
    }

    /// Reduces a word `O₁ ∘ O₂ ∘ …` to one operator.
    pub fn reduce(word: &[SymbolicWedgeOp]) -> Result<Self> {
        let (first, rest) = word
            .split_first()
            .ok_or_else(|| Error::MalformedWord("empty operator word".into()))?;
        rest.iter().try_fold(first.clone(), |acc, op| acc.compose(op))
    }

    /// Largest entry difference of the data; `∞` if linearity or spin differ.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.conj != other.conj || self.spin() != other.spin() {
            return f64::INFINITY;
        }
        let spin_part = match (&self.multiplier, &other.multiplier) {
            (Some(a), Some(b)) => (a * self.phase - b * other.phase).camax(),
            _ => (self.phase - other.phase).norm(),
        };
        spin_part
            .max((&self.lorentz - &other.lorentz).amax())
            .max((&self.translation - &other.translation).amax())
    }

    /// `φ` (times the multiplier's diagonal) if the operator is a multiple of the identity.
    pub fn scalar_value(&self, tol: f64) -> Option<Complex64> {
        if self.conj
            || (&self.lorentz - LorentzMatrix::identity(4, 4)).amax() > tol
            || self.translation.amax() > tol
        {
            return None;
        }
        match &self.multiplier {
            None => Some(self.phase),
            Some(a) => {
                let lambda = a[(0, 0)];
                let off = a[(0, 1)].norm().max(a[(1, 0)].norm());
                if off > tol || (a[(1, 1)] - lambda).norm() > tol {
                    None
                } else {
                    Some(self.phase * lambda)
                }
            }
        }
    }

    /// `σ(A) = L` for linear operators; for antilinear ones the conjugation
    /// contributes `P₂ = diag(1, 1, -1, 1)` and the comparison is made on the
    /// `(x₀, x₁, x₂)` block.
    pub fn covering_residual(&self) -> f64 {
        let Some(a) = &self.multiplier else {
            return 0.0;
        };
        let s = sl2c_to_lorentz(a);
        if self.conj {
            let mut p2 = LorentzMatrix::identity(4, 4);
            p2[(2, 2)] = -1.0;
            let diff = s * p2 - &self.lorentz;
            diff.view((0, 0), (3, 3)).amax()
        } else {
            (s - &self.lorentz).amax()
        }
    }

    /// Pointwise value `(Oψ)(p)`.
    pub fn apply(&self, psi: &TestWavefunction, p: &MinkVector) -> CVector {
        apply_word(core::slice::from_ref(self), psi, p)
    }
}

fn on_shell(p: MinkVector, mass: f64) -> MinkVector {
    let mut q = p;
    let spatial = q.rows(1, 3).norm_squared();
    q[0] = (mass * mass + spatial).sqrt();
    q
}

/// Evaluates `(O₁ ∘ O₂ ∘ … ψ)(p)` by pulling the momentum back through each
/// operator, rightmost applied first.
pub fn apply_word(ops: &[SymbolicWedgeOp], psi: &TestWavefunction, p: &MinkVector) -> CVector {
    match ops.split_first() {
        None => psi.eval(p),
        Some((op, rest)) => {
            let q = on_shell(lorentz_inverse(&op.lorentz) * p, psi.mass);
            let mut v = apply_word(rest, psi, &q);
            if op.conj {
                v = v.map(|z| z.conj());
            }
            if let Some(a) = &op.multiplier {
                let w0 = a[(0, 0)] * v[0] + a[(0, 1)] * v[1];
                let w1 = a[(1, 0)] * v[0] + a[(1, 1)] * v[1];
                v = CVector::from_vec(vec![w0, w1]);
            }
            let phase = op.phase * Complex64::from_polar(1.0, minkowski_dot(p, &op.translation));
            v * phase
        }
    }
}

/// Smooth mass-shell function: Gaussian × quadratic polynomial × plane wave,
/// times spin weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TestWavefunction {
    pub mass: f64,
    pub center: [f64; 3],
    pub width: f64,
    pub constant: Complex64,
    pub linear: [Complex64; 3],
    pub quadratic: [[Complex64; 3]; 3],
    pub plane_wave: [f64; 4],
    pub spin_weights: Vec<Complex64>,
}

impl TestWavefunction {
    pub fn random<R: Rng + ?Sized>(spin: Spin, mass: f64, rng: &mut R) -> Self {
        let mut cg = |s: f64| complex_gaussian(rng) * s;
        let constant = cg(1.0);
        let linear = [cg(0.5), cg(0.5), cg(0.5)];
        let quadratic = [
            [cg(0.2), cg(0.2), cg(0.2)],
            [cg(0.2), cg(0.2), cg(0.2)],
            [cg(0.2), cg(0.2), cg(0.2)],
        ];
        let spin_weights = (0..spin.components()).map(|_| cg(1.0)).collect();
        Self {
            mass,
            center: [0.5 * gaussian(rng), 0.5 * gaussian(rng), 0.5 * gaussian(rng)],
            width: rng.gen_range(1.0..3.0),
            constant,
            linear,
            quadratic,
            plane_wave: [
                0.3 * gaussian(rng),
                0.3 * gaussian(rng),
                0.3 * gaussian(rng),
                0.3 * gaussian(rng),
            ],
            spin_weights,
        }
    }

    /// Value at the on-shell point with spatial part `p⃗`; `p₀` is recomputed.
    pub fn eval(&self, p: &MinkVector) -> CVector {
        let q = on_shell(p.clone(), self.mass);
        let k = [q[1], q[2], q[3]];
        let mut poly = self.constant;
        for i in 0..3 {
            poly += self.linear[i] * k[i];
            for j in 0..3 {
                poly += self.quadratic[i][j] * (k[i] * k[j]);
            }
        }
        let r2: f64 = (0..3).map(|i| (k[i] - self.center[i]).powi(2)).sum();
        let envelope = (-r2 / (2.0 * self.width * self.width)).exp();
        let b = MinkVector::from_row_slice(&self.plane_wave);
        let wave = Complex64::from_polar(1.0, minkowski_dot(&q, &b));
        let base = poly * envelope * wave;
        CVector::from_iterator(self.spin_weights.len(), self.spin_weights.iter().map(|w| w * base))
    }
}

/// On-shell momenta with rapidity `|N(0, 1)|` and uniform direction.
pub fn sample_momenta<R: Rng + ?Sized>(n: usize, mass: f64, rng: &mut R) -> Vec<MinkVector> {
    (0..n)
        .map(|_| {
            let eta = gaussian(rng).abs();
            let mut dir = [gaussian(rng), gaussian(rng), gaussian(rng)];
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
            dir.iter_mut().for_each(|x| *x /= norm);
            let k = mass * eta.sinh();
            MinkVector::from_row_slice(&[mass * eta.cosh(), k * dir[0], k * dir[1], k * dir[2]])
        })
        .collect()
}

/// Seeded wavefunctions and momenta for pointwise checks.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub spin: Spin,
    pub mass: f64,
    pub wavefunctions: Vec<TestWavefunction>,
    pub momenta: Vec<MinkVector>,
}

pub const MIN_WAVEFUNCTIONS: usize = 20;
pub const MIN_MOMENTA: usize = 100;

impl SampleSet {
    pub fn generate<R: Rng + ?Sized>(
        spin: Spin,
        mass: f64,
        wavefunctions: usize,
        momenta: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::BadSeed(format!("mass {mass} is not positive")));
        }
        if wavefunctions == 0 || momenta == 0 {
            return Err(Error::BadSeed("empty sample set".into()));
        }
        Ok(Self {
            spin,
            mass,
            wavefunctions: (0..wavefunctions)
                .map(|_| TestWavefunction::random(spin, mass, rng))
                .collect(),
            momenta: sample_momenta(momenta, mass, rng),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WedgeOpKind {
    /// `Δ_W^{it}`
    DeltaIt(f64),
    /// `J_W`
    J,
}

/// Frame of `W` as a proper orthochronous map from `W₁`. For spin 1/2 the
/// frame is normalised (right-multiplying by `R₁` if needed) to fix `x₃`.
fn wedge_frame(w: &Wedge, spin: Spin) -> Result<LorentzMatrix> {
    if w.dim() != 4 {
        return Err(Error::BadWedge(format!("wedge in d = {}", w.dim())));
    }
    if !w.edge_through_origin(1e-9) {
        return Err(Error::BadWedge("edge must pass through the origin".into()));
    }
    let mut l = w.lorentz().clone();
    if spin == Spin::Half {
        if l[(3, 3)] < 0.0 {
            l *= edge_reflection_r1(4)?;
        }
        if !in_x3_fixing_subgroup(&l, lorentz_scale_tol(&l)) {
            return Err(Error::UnsupportedSpin(
                "spin 1/2 wedge operators need wedges whose edge contains the x₃ axis".into(),
            ));
        }
    }
    Ok(l)
}

/// `Δ_W^{it}` (pullback by `Λ_W(-t)`) or `J_W` (antilinear, `Θ = J_W U(R_W)`).
pub fn wedge_operator(kind: WedgeOpKind, w: &Wedge, spin: Spin, mass: f64) -> Result<SymbolicWedgeOp> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::BadWedge(format!("mass {mass} is not positive")));
    }
    let l = wedge_frame(w, spin)?;
    let frame_lift = match spin {
        Spin::Zero => None,
        Spin::Half => Some(lift_lorentz(&l)?),
    };
    let l_inv = lorentz_inverse(&l);
    Ok(match kind {
        WedgeOpKind::DeltaIt(t) => SymbolicWedgeOp {
            lorentz: &l * boost(1, t, 4)? * &l_inv,
            conj: false,
            phase: ONE,
            multiplier: frame_lift.map(|a| {
                a * sl2c_boost(1, t).expect("axis 1") * a.try_inverse().expect("det 1")
            }),
            translation: MinkVector::zeros(4),
        },
        WedgeOpKind::J => SymbolicWedgeOp {
            lorentz: &l * edge_reflection_r1(4)? * &l_inv,
            conj: true,
            phase: ONE,
            multiplier: frame_lift.map(|a| a * conj_m(&a.try_inverse().expect("det 1"))),
            translation: MinkVector::zeros(4),
        },
    })
}

/// Common frame `F` of an orthogonal wedge pair: columns `ê₀`, the two edge
/// normals `ê₁(W₁)`, `ê₁(W₂)` and a completing `ê₃`.
pub fn orthogonal_pair_frame(w1: &Wedge, w2: &Wedge) -> Result<LorentzMatrix> {
    for w in [w1, w2] {
        if w.dim() != 4 {
            return Err(Error::BadWedge(format!("wedge in d = {}", w.dim())));
        }
        if !w.edge_through_origin(1e-9) {
            return Err(Error::BadWedge("edge must pass through the origin".into()));
        }
    }
    let unit = |w: &Wedge| {
        let c = w.canonical();
        let e0 = &c.future - &c.past;
        let e1 = -(&c.future + &c.past);
        let e0 = &e0 / minkowski_dot(&e0, &e0).sqrt();
        let e1 = &e1 / (-minkowski_dot(&e1, &e1)).sqrt();
        (e0, e1)
    };
    let (t1, n1) = unit(w1);
    let (t2, n2) = unit(w2);
    if (&t1 - &t2).amax() > 1e-9 || minkowski_dot(&n1, &n2).abs() > 1e-9 {
        return Err(Error::NonOrthogonalWedges);
    }
    let mut cols = vec![t1, n1, n2];
    for k in 1..4 {
        if cols.len() == 4 {
            break;
        }
        let mut w = MinkVector::zeros(4);
        w[k] = 1.0;
        for e in &cols {
            w -= e * (minkowski_dot(&w, e) / minkowski_dot(e, e));
        }
        let ww = minkowski_dot(&w, &w);
        if ww < -1e-6 {
            cols.push(w / (-ww).sqrt());
        }
    }
    let mut f = LorentzMatrix::from_columns(&cols);
    if f.determinant() < 0.0 {
        let mut last = f.column_mut(3);
        last *= -1.0;
    }
    Ok(f)
}

/// `U(r̃(θ))` for the rotation carrying `ê₁(W₁)` towards `ê₁(W₂)`.
fn pair_rotation(frame: &LorentzMatrix, theta: f64, spin: Spin) -> Result<SymbolicWedgeOp> {
    let lift = lift_lorentz(frame)?;
    let a = lift * sl2c_rotation(1, 2, theta)? * lift.try_inverse().expect("det 1");
    Ok(SymbolicWedgeOp {
        lorentz: frame * rotation(1, 2, theta, 4)? * lorentz_inverse(frame),
        conj: false,
        phase: ONE,
        multiplier: match spin {
            Spin::Zero => None,
            Spin::Half => Some(a),
        },
        translation: MinkVector::zeros(4),
    })
}

/// Operator identities checked two ways.
#[derive(Debug, Clone, PartialEq)]
pub enum Identity {
    /// `J₁ Δ₂^{it} J₁ = Δ₂^{-it}`
    ConjugatedOrthogonalBoost { t: f64 },
    /// `Z J₁ U(g) (Z J₁)* = U(α(g))`
    ReflectionCovariance { g: CoverElement },
    /// `Θ = J_W U(R_W)` is wedge independent, `Θ U(Λ, a) Θ* = U(Λ, -a)`, and
    /// `Θ` maps the dual wedges of `O` onto those of `-O`
    Pct,
    /// `Z J₁ Z J₂ = U(r̃(-π))` and `(Z J₁ Z J₂)² = U(2π) = Γ`
    SpinStatistics,
}

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Identity::ConjugatedOrthogonalBoost { .. } => "conjugated_orthogonal_boost",
            Identity::ReflectionCovariance { .. } => "reflection_covariance",
            Identity::Pct => "pct",
            Identity::SpinStatistics => "spin_statistics",
        }
    }
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub identity: &'static str,
    pub spin: Spin,
    pub equations: usize,
    /// Word reduction vs the expected operator
    pub symbolic_residual: f64,
    /// Pointwise word evaluation vs the expected operator
    pub pointwise_residual: f64,
    /// Pointwise word evaluation vs the reduced word
    pub path_agreement: f64,
    pub points_checked: usize,
    /// Geometric residual (PCT region map), if any
    pub region_residual: Option<f64>,
    /// `(Z J₁ Z J₂)²` as an integer, for the spin-statistics chain
    pub value: Option<i64>,
    /// Distance of the scalar value from its rounded integer
    pub value_residual: Option<f64>,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.symbolic_residual
            .max(self.pointwise_residual)
            .max(self.path_agreement)
            .max(self.region_residual.unwrap_or(0.0))
            .max(self.value_residual.unwrap_or(0.0))
    }
}

struct Equation {
    word: Vec<SymbolicWedgeOp>,
    expected: SymbolicWedgeOp,
    up_to_sign: bool,
}

impl Equation {
    fn new(word: Vec<SymbolicWedgeOp>, expected: SymbolicWedgeOp) -> Self {
        Self {
            word,
            expected,
            up_to_sign: false,
        }
    }
}

fn relative_gap(a: &CVector, b: &CVector) -> f64 {
    (a - b).camax() / b.camax().max(1.0)
}

/// Evaluates an identity for an orthogonal wedge pair `w1 ⊥ w2` with edges
/// through the origin.
pub fn verify_identity_chain<R: Rng + ?Sized>(
    identity: &Identity,
    spin: Spin,
    w1: &Wedge,
    w2: &Wedge,
    samples: &SampleSet,
    rng: &mut R,
) -> Result<IdentityReport> {
    if samples.wavefunctions.len() < MIN_WAVEFUNCTIONS || samples.momenta.len() < MIN_MOMENTA {
        return Err(Error::BadSeed(format!(
            "need at least {MIN_WAVEFUNCTIONS} wavefunctions and {MIN_MOMENTA} momenta"
        )));
    }
    if samples.spin != spin {
        return Err(Error::BadSeed("sample set spin does not match".into()));
    }
    let frame = orthogonal_pair_frame(w1, w2)?;
    let m = samples.mass;
    let z = SymbolicWedgeOp::twist(spin);
    let j1 = wedge_operator(WedgeOpKind::J, w1, spin, m)?;
    let j2 = wedge_operator(WedgeOpKind::J, w2, spin, m)?;
    let zj1 = z.compose(&j1)?;
    let zj2 = z.compose(&j2)?;
    let mut region_residual = None;
    let mut value = None;
    let mut value_residual = None;

    let equations = match identity {
        Identity::ConjugatedOrthogonalBoost { t } => {
            let d = wedge_operator(WedgeOpKind::DeltaIt(*t), w2, spin, m)?;
            let d_inv = wedge_operator(WedgeOpKind::DeltaIt(-*t), w2, spin, m)?;
            vec![Equation::new(vec![j1.clone(), d, j1.clone()], d_inv)]
        }
        Identity::ReflectionCovariance { g } => {
            let w1_frame = wedge_frame(w1, spin)?;
            let gw = CoverElement::sl2c(lift_lorentz(&w1_frame)?, [0.0; 4])?;
            let local = gw.inverse().compose(g)?.compose(&gw)?;
            if spin == Spin::Half {
                let (l, _) = local.covering_map()?;
                if !in_x3_fixing_subgroup(&l, lorentz_scale_tol(&l)) {
                    return Err(Error::UnsupportedSpin(
                        "spin 1/2 reflection covariance needs g in the x₃-fixing subgroup".into(),
                    ));
                }
            }
            let reflected = gw.compose(&local.alpha())?.compose(&gw.inverse())?;
            vec![Equation::new(
                vec![zj1.clone(), SymbolicWedgeOp::unitary(g, spin)?, zj1.inverse()],
                SymbolicWedgeOp::unitary(&reflected, spin)?,
            )]
        }
        Identity::Pct => {
            let theta = |w: &Wedge, j: &SymbolicWedgeOp| -> Result<SymbolicWedgeOp> {
                let r = w.edge_reflection();
                let u = SymbolicWedgeOp::unitary(&CoverElement::sl2c(lift_lorentz(&r)?, [0.0; 4])?, spin)?;
                j.compose(&u)
            };
            let th1 = theta(w1, &j1)?;
            let th2 = theta(w2, &j2)?;
            let mut eqs = vec![
                Equation {
                    word: vec![th1.clone()],
                    expected: th2.clone(),
                    up_to_sign: true,
                },
                Equation::new(vec![th1.clone(), th1.clone()], SymbolicWedgeOp::identity(spin)),
            ];
            if spin == Spin::Zero {
                eqs.push(Equation::new(vec![th1.clone()], SymbolicWedgeOp::scalar_pct()));
            }
            let gens = [
                CoverElement::boost_lift(1, 0.3, 4)?,
                CoverElement::boost_lift(2, -0.2, 4)?,
                CoverElement::sl2c(sl2c_rotation(1, 2, 0.7)?, [0.0; 4])?,
                CoverElement::translation(&[0.3, -0.5, 0.2, 0.1])?,
            ];
            for g in gens {
                let CoverElement::Sl2c { a, translation } = &g else { unreachable!() };
                let neg = CoverElement::sl2c(*a, translation.map(|x| -x))?;
                eqs.push(Equation::new(
                    vec![th1.clone(), SymbolicWedgeOp::unitary(&g, spin)?, th1.inverse()],
                    SymbolicWedgeOp::unitary(&neg, spin)?,
                ));
            }
            let o = DoubleCone::new(MinkVector::from_row_slice(&[0.2, -0.1, 0.3, 0.05]), 0.9)?;
            let report = pct_region_check(&o, &(-LorentzMatrix::identity(4, 4)), 1000, rng)?;
            region_residual = Some(if report.containment_violations == 0 {
                report.set_identity_residual
            } else {
                f64::INFINITY
            });
            eqs
        }
        Identity::SpinStatistics => {
            let half_turn = pair_rotation(&frame, -PI, spin)?;
            let full_turn = pair_rotation(&frame, 2.0 * PI, spin)?;
            let gamma = SymbolicWedgeOp::grading(spin);
            let square = vec![zj1.clone(), zj2.clone(), zj1.clone(), zj2.clone()];
            let reduced = SymbolicWedgeOp::reduce(&square)?;
            match reduced.scalar_value(1e-9) {
                Some(lambda) => {
                    let rounded = lambda.re.round();
                    value = Some(rounded as i64);
                    value_residual = Some((lambda - c64(rounded, 0.0)).norm());
                }
                None => value_residual = Some(f64::INFINITY),
            }
            vec![
                Equation::new(vec![zj1.clone(), zj2.clone()], half_turn),
                Equation::new(square, gamma.clone()),
                Equation::new(vec![full_turn], gamma),
            ]
        }
    };

    let mut report = IdentityReport {
        identity: identity.name(),
        spin,
        equations: equations.len(),
        symbolic_residual: 0.0,
        pointwise_residual: 0.0,
        path_agreement: 0.0,
        points_checked: 0,
        region_residual,
        value,
        value_residual,
    };
    for eq in &equations {
        let reduced = SymbolicWedgeOp::reduce(&eq.word)?;
        let negated = eq.expected.negated();
        let symbolic = if eq.up_to_sign {
            reduced.distance(&eq.expected).min(reduced.distance(&negated))
        } else {
            reduced.distance(&eq.expected)
        };
        report.symbolic_residual = report.symbolic_residual.max(symbolic);
        for psi in &samples.wavefunctions {
            for p in &samples.momenta {
                let word_value = apply_word(&eq.word, psi, p);
                let expected = eq.expected.apply(psi, p);
                let gap = if eq.up_to_sign {
                    relative_gap(&word_value, &expected).min(relative_gap(&word_value, &-&expected))
                } else {
                    relative_gap(&word_value, &expected)
                };
                report.pointwise_residual = report.pointwise_residual.max(gap);
                report.path_agreement = report
                    .path_agreement
                    .max(relative_gap(&word_value, &reduced.apply(psi, p)));
                report.points_checked += 1;
            }
        }
    }
    Ok(report)
}

/// One row of the spin-statistics table.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinStatisticsRow {
    pub spin: Spin,
    /// Scalar value of `U(r̃(2π))`
    pub rotation_2pi: i64,
    /// Statistics phase of the matching CAR sector
    pub kappa: i64,
    pub statistical_dimension: usize,
    pub index: usize,
    pub matches: bool,
}

/// `U(2π)` from the lifted rotation against `κ` of the even (spin 0) and odd
/// (spin 1/2) CAR sectors.
pub fn spin_statistics_table(spins: &[Spin]) -> Result<Vec<SpinStatisticsRow>> {
    let fm = FockModel::new(2)?;
    let sectors = sector_statistics(&fm);
    spins
        .iter()
        .map(|&spin| {
            let full = CoverElement::sl2c(sl2c_rotation(1, 2, 2.0 * PI)?, [0.0; 4])?;
            let op = SymbolicWedgeOp::unitary(&full, spin)?;
            let lambda = op
                .scalar_value(1e-12)
                .ok_or_else(|| Error::UnsupportedSpin("U(2π) is not scalar".into()))?;
            let rotation_2pi = lambda.re.round() as i64;
            let label = match spin {
                Spin::Zero => "even",
                Spin::Half => "odd",
            };
            let sector = sectors
                .iter()
                .find(|s| s.label == label)
                .expect("both sectors present");
            let kappa = if sector.grading_residual <= 1e-12 {
                sector.statistics_phase as i64
            } else {
                0
            };
            Ok(SpinStatisticsRow {
                spin,
                rotation_2pi,
                kappa,
                statistical_dimension: sector.dimension,
                index: sector.index,
                matches: rotation_2pi == kappa && (lambda - c64(rotation_2pi as f64, 0.0)).norm() <= 1e-12,
            })
        })
        .collect()
}

/// Runs [`cone_check`] over a list of parameters; shorthand for suites.
pub fn cone_checks<R: Rng + ?Sized>(ts: &[f64], samples: usize, rng: &mut R) -> Result<Vec<(f64, bool, f64)>> {
    ts.iter()
        .map(|&t| {
            let r = cone_check(t, samples, rng)?;
            Ok((t, r.passed(), r.min_relative_margin))
        })
        .collect()
}

/// Human-readable form of an identity with its parameters.
pub fn describe(identity: &Identity) -> String {
    match identity {
        Identity::ConjugatedOrthogonalBoost { t } => format!("t={t}"),
        Identity::ReflectionCovariance { g } => format!("g={g:?}"),
        Identity::Pct => "pct".into(),
        Identity::SpinStatistics => "chain".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::{rotation_lift, Sl2r};
    use crate::numerics::identity;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn taylor_exp(m: &CMatrix) -> CMatrix {
        // scaling and squaring with a Taylor core, independent of the spectral path
        let n = m.nrows();
        let s = (m.norm().log2().ceil().max(0.0) as i32) + 4;
        let scaled = m * c64(0.5f64.powi(s), 0.0);
        let mut term = identity(n);
        let mut sum = identity(n);
        for k in 1..30 {
            term = &term * &scaled * c64(1.0 / k as f64, 0.0);
            sum += &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }

    fn samples(spin: Spin, mass: f64, seed: u64) -> SampleSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SampleSet::generate(spin, mass, MIN_WAVEFUNCTIONS, MIN_MOMENTA, &mut rng).unwrap()
    }

    fn w(i: usize) -> Wedge {
        Wedge::axis(i, 4).unwrap()
    }

    #[test]
    fn spin_half_generators_match_tangents() {
        let rep = finite_sl2_rep(2).unwrap();
        // μ(t) = cosh πt I - sinh πt σ₁, ν(t) = diag(e^{-πt}, e^{πt})
        let want_mu = CMatrix::from_row_slice(2, 2, &[ZERO, c64(-PI, 0.0), c64(-PI, 0.0), ZERO]);
        let want_nu = CMatrix::from_row_slice(2, 2, &[c64(-PI, 0.0), ZERO, ZERO, c64(PI, 0.0)]);
        assert!((&rep.mu_generator - want_mu).norm() < 1e-15);
        assert!((&rep.nu_generator - want_nu).norm() < 1e-15);
        // bracket oracle on the 2×2 matrices
        let b = &rep.mu_generator * &rep.nu_generator - &rep.nu_generator * &rep.mu_generator;
        let third = CMatrix::from_row_slice(2, 2, &[ZERO, c64(-2.0 * PI * PI, 0.0), c64(2.0 * PI * PI, 0.0), ZERO]);
        assert!((b - third).norm() < 1e-12);
        assert!(rep.bracket_residual() < 1e-12);
        // finite differences of the explicit one-parameter groups
        let h = 1e-6;
        let fd = (crate::lorentz::mu(h) - crate::lorentz::mu(-h)) / (2.0 * h);
        assert!((fd[(0, 1)] + PI).abs() < 1e-6 && fd[(0, 0)].abs() < 1e-6);
        let fd: Sl2r = (crate::lorentz::nu(h) - crate::lorentz::nu(-h)) / (2.0 * h);
        assert!((fd[(0, 0)] + PI).abs() < 1e-6);
    }

    #[test]
    fn reps_are_traceless_and_close() {
        for m in 2..=12 {
            let rep = finite_sl2_rep(m).unwrap();
            assert!(rep.h.trace().norm() < 1e-12);
            assert!(rep.k.trace().norm() < 1e-12);
            assert!(rep.bracket_residual() < 1e-10 * (m * m) as f64, "m={m}");
            let (jz, jp, jm) = spin_matrices(m);
            assert!((&jp * &jm - &jm * &jp - &jz * c64(2.0, 0.0)).norm() < 1e-12);
        }
        assert_eq!(finite_sl2_rep(1).unwrap_err(), Error::BadDimension(1));
        assert_eq!(finite_sl2_rep(13).unwrap_err(), Error::BadDimension(13));
    }

    #[test]
    fn property_ii_two_by_two() {
        let rep = finite_sl2_rep(2).unwrap();
        let r = check_property_ii(&rep, &[0.0, 1.0]);
        assert!(r.residuals[0].1 < 1e-15);
        assert!(r.residuals[1].1 < 1e-10);
        // explicit: diag(i, -i) μ(-t) diag(i, -i)⁻¹ = μ(t)
        let t = 1.0;
        let d = CMatrix::from_row_slice(2, 2, &[I, ZERO, ZERO, -I]);
        let mu_neg = crate::lorentz::mu(-t).map(|x| c64(x, 0.0));
        let mu_pos = crate::lorentz::mu(t).map(|x| c64(x, 0.0));
        let lhs = &d * CMatrix::from_iterator(2, 2, mu_neg.iter().cloned()) * d.try_inverse().unwrap();
        let rhs = CMatrix::from_iterator(2, 2, mu_pos.iter().cloned());
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn property_ii_against_taylor_oracle() {
        for m in 3..=8 {
            let rep = finite_sl2_rep(m).unwrap();
            let r = check_property_ii(&rep, &[-2.0, -1.0, 0.5, 1.0, 2.0]);
            assert!(r.max_residual < 1e-8, "m={m} {r:?}");
            assert!(r.doubled_max_residual < 1e-8);
            // oracle: Taylor exponentials of K/2 and itH
            let t = 0.5;
            let lhs = taylor_exp(&(&rep.k * c64(0.5, 0.0)))
                * taylor_exp(&(&rep.h * c64(0.0, t)))
                * taylor_exp(&(&rep.k * c64(-0.5, 0.0)));
            let rhs = taylor_exp(&(&rep.h * c64(0.0, -t)));
            assert!((&lhs - &rhs).norm() / rhs.norm() < 1e-8, "m={m}");
        }
    }

    #[test]
    fn scalar_j_is_reflected_conjugation() {
        let j = wedge_operator(WedgeOpKind::J, &w(1), Spin::Zero, 1.0).unwrap();
        let s = samples(Spin::Zero, 1.0, 5);
        for psi in s.wavefunctions.iter().take(3) {
            for p in s.momenta.iter().take(20) {
                let mut q = p.clone();
                q[2] = -q[2];
                q[3] = -q[3];
                let want = psi.eval(&q).map(|z| z.conj());
                assert!(relative_gap(&j.apply(psi, p), &want) < 1e-14);
            }
        }
        // Θ = J₁ U(R₁) is plain conjugation
        let r1 = CoverElement::sl2c(sl2c_rotation(2, 3, PI).unwrap(), [0.0; 4]).unwrap();
        let theta = j.compose(&SymbolicWedgeOp::unitary(&r1, Spin::Zero).unwrap()).unwrap();
        assert!(theta.distance(&SymbolicWedgeOp::scalar_pct()) < 1e-15);
    }

    #[test]
    fn delta_it_group_law() {
        for spin in [Spin::Zero, Spin::Half] {
            for wedge in [w(1), w(2)] {
                let d0 = wedge_operator(WedgeOpKind::DeltaIt(0.0), &wedge, spin, 1.0).unwrap();
                assert!(d0.distance(&SymbolicWedgeOp::identity(spin)) < 1e-15);
                let (s, t) = (0.13, -0.31);
                let ds = wedge_operator(WedgeOpKind::DeltaIt(s), &wedge, spin, 1.0).unwrap();
                let dt = wedge_operator(WedgeOpKind::DeltaIt(t), &wedge, spin, 1.0).unwrap();
                let dst = wedge_operator(WedgeOpKind::DeltaIt(s + t), &wedge, spin, 1.0).unwrap();
                assert!(ds.compose(&dt).unwrap().distance(&dst) < 1e-13);
                assert!(ds.covering_residual() < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_and_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = samples(Spin::Half, 1.0, 8);
        for _ in 0..10 {
            let g = CoverElement::random(4, 3, &mut rng).unwrap();
            let u = SymbolicWedgeOp::unitary(&g, Spin::Half).unwrap();
            let j = wedge_operator(WedgeOpKind::J, &w(2), Spin::Half, 1.0).unwrap();
            let op = j.compose(&u).unwrap();
            assert!(op.compose(&op.inverse()).unwrap().distance(&SymbolicWedgeOp::identity(Spin::Half)) < 1e-10);
            assert!(u.covering_residual() < 1e-10);
            assert!(j.covering_residual() < 1e-12);
            // composition agrees with sequential pointwise evaluation
            for psi in s.wavefunctions.iter().take(2) {
                for p in s.momenta.iter().take(10) {
                    let a = apply_word(&[j.clone(), u.clone()], psi, p);
                    let b = op.apply(psi, p);
                    assert!(relative_gap(&a, &b) < 1e-10);
                }
            }
        }
        let mixed = SymbolicWedgeOp::identity(Spin::Zero).compose(&SymbolicWedgeOp::identity(Spin::Half));
        assert!(matches!(mixed, Err(Error::UnsupportedSpin(_))));
    }

    #[test]
    fn wedge_operator_errors() {
        let shifted = Wedge::from_transform(LorentzMatrix::identity(4, 4), MinkVector::from_row_slice(&[0.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(matches!(wedge_operator(WedgeOpKind::J, &shifted, Spin::Zero, 1.0), Err(Error::BadWedge(_))));
        assert!(matches!(wedge_operator(WedgeOpKind::J, &Wedge::standard(3).unwrap(), Spin::Zero, 1.0), Err(Error::BadWedge(_))));
        assert!(matches!(wedge_operator(WedgeOpKind::J, &w(1), Spin::Zero, 0.0), Err(Error::BadWedge(_))));
        assert!(matches!(wedge_operator(WedgeOpKind::J, &w(3), Spin::Half, 1.0), Err(Error::UnsupportedSpin(_))));
        assert!(wedge_operator(WedgeOpKind::J, &w(3), Spin::Zero, 1.0).is_ok());
        assert_eq!(Spin::parse("1/2").unwrap(), Spin::Half);
        assert!(matches!(Spin::parse("3/2"), Err(Error::UnsupportedSpin(_))));
    }

    #[test]
    fn conjugated_boost_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for spin in [Spin::Zero, Spin::Half] {
            let s = samples(spin, 1.0, 11);
            for t in [-0.25, 0.0, 0.3] {
                let r = verify_identity_chain(&Identity::ConjugatedOrthogonalBoost { t }, spin, &w(1), &w(2), &s, &mut rng).unwrap();
                assert!(r.max_residual() < 1e-10, "{r:?}");
                assert_eq!(r.points_checked, 2000);
            }
        }
        // matrix oracle: R₁ Λ₂(t) R₁ = Λ₂(-t)
        let r1 = edge_reflection_r1(4).unwrap();
        let lhs = &r1 * boost(2, 0.4, 4).unwrap() * &r1;
        assert!((lhs - boost(2, -0.4, 4).unwrap()).amax() < 1e-13);
    }

    #[test]
    fn reflection_covariance_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let gens = [
            CoverElement::boost_lift(1, 0.2, 4).unwrap(),
            CoverElement::boost_lift(2, -0.3, 4).unwrap(),
            rotation_lift((1, 2), 2.5, 4).unwrap(),
            CoverElement::translation(&[0.1, 0.4, -0.2, 0.3]).unwrap(),
        ];
        for spin in [Spin::Zero, Spin::Half] {
            let s = samples(spin, 1.0, 12);
            for g in &gens {
                let r = verify_identity_chain(&Identity::ReflectionCovariance { g: g.clone() }, spin, &w(1), &w(2), &s, &mut rng).unwrap();
                assert!(r.max_residual() < 1e-10, "{r:?}");
            }
        }
        let s = samples(Spin::Half, 1.0, 12);
        let g = CoverElement::boost_lift(3, 0.2, 4).unwrap();
        assert!(matches!(
            verify_identity_chain(&Identity::ReflectionCovariance { g: g.clone() }, Spin::Half, &w(1), &w(2), &s, &mut rng),
            Err(Error::UnsupportedSpin(_))
        ));
        let s0 = samples(Spin::Zero, 1.0, 12);
        let r = verify_identity_chain(&Identity::ReflectionCovariance { g }, Spin::Zero, &w(1), &w(2), &s0, &mut rng).unwrap();
        assert!(r.max_residual() < 1e-10);
    }

    #[test]
    fn spin_statistics_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (spin, want) in [(Spin::Zero, 1), (Spin::Half, -1)] {
            let s = samples(spin, 1.0, 3);
            let r = verify_identity_chain(&Identity::SpinStatistics, spin, &w(1), &w(2), &s, &mut rng).unwrap();
            assert_eq!(r.value, Some(want));
            assert!(r.max_residual() < 1e-10, "{r:?}");
        }
        // SU(2) oracle: r̃(2π) = -I
        let CoverElement::Sl2c { a, .. } = rotation_lift((1, 2), 2.0 * PI, 4).unwrap() else { panic!() };
        assert!((a + pauli(0)).norm() < 1e-15);
    }

    #[test]
    fn twisted_and_plain_dihedral_relations() {
        for spin in [Spin::Zero, Spin::Half] {
            let z = SymbolicWedgeOp::twist(spin);
            let j1 = wedge_operator(WedgeOpKind::J, &w(1), spin, 1.0).unwrap();
            let j2 = wedge_operator(WedgeOpKind::J, &w(2), spin, 1.0).unwrap();
            let zj1 = z.compose(&j1).unwrap();
            let twisted = SymbolicWedgeOp::reduce(&[zj1.clone(), j2.clone(), zj1.inverse()]).unwrap();
            assert!(twisted.distance(&j2) < 1e-13);
            // J₁ J₂ J₁ = J of the reflected wedge R₁W₂
            let reflected = w(2).image(&edge_reflection_r1(4).unwrap(), &MinkVector::zeros(4)).unwrap();
            let j_ref = wedge_operator(WedgeOpKind::J, &reflected, spin, 1.0).unwrap();
            let plain = SymbolicWedgeOp::reduce(&[j1.clone(), j2.clone(), j1.clone()]).unwrap();
            assert!(plain.distance(&j_ref) < 1e-13);
            let j2_sq = j2.compose(&j2).unwrap();
            assert!(j2_sq.distance(&SymbolicWedgeOp::identity(spin)) < 1e-13);
        }
    }

    #[test]
    fn pct_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for spin in [Spin::Zero, Spin::Half] {
            let s = samples(spin, 1.0, 14);
            let r = verify_identity_chain(&Identity::Pct, spin, &w(1), &w(2), &s, &mut rng).unwrap();
            assert!(r.max_residual() < 1e-10, "{r:?}");
            assert!(r.region_residual.unwrap() < 1e-12);
        }
    }

    #[test]
    fn general_orthogonal_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let s = samples(Spin::Half, 0.5, 16);
        let rot = boost(3, 0.0, 4).unwrap() * rotation(1, 2, 0.6, 4).unwrap();
        let b = boost(3, 0.2, 4).unwrap();
        let u1 = Wedge::standard(4).unwrap().image(&rot, &MinkVector::zeros(4)).unwrap();
        let u2 = w(2).image(&rot, &MinkVector::zeros(4)).unwrap();
        let r = verify_identity_chain(&Identity::SpinStatistics, Spin::Half, &u1, &u2, &s, &mut rng).unwrap();
        assert_eq!(r.value, Some(-1));
        assert!(r.max_residual() < 1e-10, "{r:?}");
        // scalar case under a boost that leaves the pair's time direction moving
        let v1 = Wedge::standard(4).unwrap().image(&b, &MinkVector::zeros(4)).unwrap();
        let v2 = w(2).image(&b, &MinkVector::zeros(4)).unwrap();
        let s0 = samples(Spin::Zero, 1.0, 17);
        for id in [Identity::ConjugatedOrthogonalBoost { t: 0.2 }, Identity::SpinStatistics, Identity::Pct] {
            let r = verify_identity_chain(&id, Spin::Zero, &v1, &v2, &s0, &mut rng).unwrap();
            assert!(r.max_residual() < 1e-10, "{id:?} {r:?}");
        }
        assert_eq!(
            verify_identity_chain(&Identity::Pct, Spin::Zero, &w(1), &Wedge::standard(4).unwrap().complement(), &s0, &mut rng).unwrap_err(),
            Error::NonOrthogonalWedges
        );
    }

    #[test]
    fn sample_set_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(SampleSet::generate(Spin::Zero, -1.0, 20, 100, &mut rng), Err(Error::BadSeed(_))));
        let small = SampleSet::generate(Spin::Zero, 1.0, 5, 10, &mut rng).unwrap();
        assert!(matches!(
            verify_identity_chain(&Identity::Pct, Spin::Zero, &w(1), &w(2), &small, &mut rng),
            Err(Error::BadSeed(_))
        ));
        let s = samples(Spin::Zero, 1.0, 1);
        assert!(matches!(
            verify_identity_chain(&Identity::Pct, Spin::Half, &w(1), &w(2), &s, &mut rng),
            Err(Error::BadSeed(_))
        ));
    }

    #[test]
    fn wavefunctions_and_momenta() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for m in [1.0, 0.5] {
            for p in sample_momenta(200, m, &mut rng) {
                assert!((minkowski_dot(&p, &p) - m * m).abs() < 1e-9 * p[0].powi(2));
                assert!(p[0] > 0.0);
            }
            let psi = TestWavefunction::random(Spin::Half, m, &mut rng);
            let far = MinkVector::from_row_slice(&[0.0, 1e3, -1e3, 5e2]);
            assert!(psi.eval(&far).iter().all(|z| z.re.is_finite() && z.im.is_finite()));
            // p₀ is recomputed from p⃗
            let p = MinkVector::from_row_slice(&[123.0, 0.3, 0.1, -0.2]);
            let q = on_shell(p.clone(), m);
            assert_eq!(psi.eval(&p), psi.eval(&q));
        }
    }

    #[test]
    fn spin_statistics_rows() {
        let rows = spin_statistics_table(&[Spin::Zero, Spin::Half]).unwrap();
        assert_eq!(rows[0].rotation_2pi, 1);
        assert_eq!(rows[0].kappa, 1);
        assert_eq!(rows[1].rotation_2pi, -1);
        assert_eq!(rows[1].kappa, -1);
        assert!(rows.iter().all(|r| r.matches && r.statistical_dimension == 1 && r.index == 1));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn word_reduction_matches_pointwise(seed in any::<u64>(), half in any::<bool>()) {
            let spin = if half { Spin::Half } else { Spin::Zero };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ops = Vec::new();
            for _ in 0..4 {
                let op = match rand::Rng::gen_range(&mut rng, 0..3) {
                    0 => SymbolicWedgeOp::unitary(&CoverElement::random(4, 2, &mut rng).unwrap(), spin).unwrap(),
                    1 => wedge_operator(WedgeOpKind::J, &w(1 + rand::Rng::gen_range(&mut rng, 0..2)), spin, 1.0).unwrap(),
                    _ => wedge_operator(WedgeOpKind::DeltaIt(rand::Rng::gen_range(&mut rng, -0.3..0.3)), &w(2), spin, 1.0).unwrap(),
                };
                ops.push(op);
            }
            let reduced = SymbolicWedgeOp::reduce(&ops).unwrap();
            let psi = TestWavefunction::random(spin, 1.0, &mut rng);
            for p in sample_momenta(10, 1.0, &mut rng) {
                let a = apply_word(&ops, &psi, &p);
                let b = reduced.apply(&psi, &p);
                prop_assert!(relative_gap(&a, &b) < 1e-10);
            }
        }
    }
}

//! Minkowski geometry, wedges and covering groups of the Poincaré group.
//!
//! Conventions:
//! - metric `(+, -, …, -)` in `d ∈ {3, 4}` spacetime dimensions;
//! - `W₁ = {x : |x₀| < x₁}` with boosts `Λ₁(t)` of rapidity `-2πt` on `(x₀, x₁)`;
//! - `d = 4` cover: `A ∈ SL(2,C)` acts on `X = x₀ I + x·σ` by `X -> A X A†`, so
//!   `σ₃` pairs with `x₃` and `diag(e^{λ/2}, e^{-λ/2})` boosts `(x₀, x₃)` by `λ`;
//! - `d = 3` cover: formal words in `boost₁(t)`, `boost₂(t)`, `rot(θ)` and
//!   translations; their `SL(2,R)` image acts on `X = x₀ I + x₁ σ₁ + x₂ σ₃` by
//!   `X -> A X Aᵀ`, sending `μ(t)` to `Λ₁(t)` and `ν(t)` to `Λ₂(t)`. The parameter
//!   `πt` inside `μ, ν` doubles to `2πt` in `Λ` because the action is quadratic in `A`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{c64, I, ONE, ZERO};
use crate::random::gaussian;

pub type LorentzMatrix = DMatrix<f64>;
pub type MinkVector = DVector<f64>;
pub type Sl2c = Matrix2<Complex64>;
pub type Sl2r = Matrix2<f64>;

/// Tolerance for Lorentz and determinant invariants.
pub const GROUP_TOL: f64 = 1e-12;

fn check_dim(d: usize) -> Result<()> {
    if d == 3 || d == 4 {
        Ok(())
    } else {
        Err(Error::BadDimension(d))
    }
}

pub fn metric(d: usize) -> LorentzMatrix {
    let mut m = LorentzMatrix::identity(d, d) * -1.0;
    m[(0, 0)] = 1.0;
    m
}

/// Minkowski product `x₀y₀ - x⃗·y⃗`.
pub fn minkowski_dot(x: &MinkVector, y: &MinkVector) -> f64 {
    x[0] * y[0] - x.iter().zip(y.iter()).skip(1).map(|(a, b)| a * b).sum::<f64>()
}

/// `max |ΛᵀηΛ - η|`.
pub fn lorentz_residual(l: &LorentzMatrix) -> f64 {
    let eta = metric(l.nrows());
    (l.transpose() * &eta * l - eta).amax()
}

/// `Λ^{-1} = η Λᵀ η`.
pub fn lorentz_inverse(l: &LorentzMatrix) -> LorentzMatrix {
    let eta = metric(l.nrows());
    &eta * l.transpose() * &eta
}

pub fn is_proper_orthochronous(l: &LorentzMatrix) -> bool {
    lorentz_residual(l) <= 1e-10 && l[(0, 0)] >= 1.0 - 1e-10 && l.determinant() > 0.0
}

/// `Λ_{W_i}(t)` on `(x₀, x_i)`: `[[cosh 2πt, -sinh 2πt], [-sinh 2πt, cosh 2πt]]`.
pub fn boost(axis: usize, t: f64, d: usize) -> Result<LorentzMatrix> {
    check_dim(d)?;
    if axis == 0 || axis >= d {
        return Err(Error::BadAxis { axis, dim: d });
    }
    let (ch, sh) = ((2.0 * PI * t).cosh(), (2.0 * PI * t).sinh());
    let mut m = LorentzMatrix::identity(d, d);
    m[(0, 0)] = ch;
    m[(axis, axis)] = ch;
    m[(0, axis)] = -sh;
    m[(axis, 0)] = -sh;
    Ok(m)
}

/// Rotation by `θ` in the spatial plane `(i, j)`, taking `e_i` towards `e_j`.
pub fn rotation(i: usize, j: usize, theta: f64, d: usize) -> Result<LorentzMatrix> {
    check_dim(d)?;
    if i == 0 || j == 0 || i >= d || j >= d || i == j {
        return Err(Error::BadPlane { i, j, dim: d });
    }
    let (c, s) = (theta.cos(), theta.sin());
    let mut m = LorentzMatrix::identity(d, d);
    m[(i, i)] = c;
    m[(j, j)] = c;
    m[(j, i)] = s;
    m[(i, j)] = -s;
    Ok(m)
}

/// `I₁`: `x₀, x₁ -> -x₀, -x₁`.
pub fn reflection_i1(d: usize) -> Result<LorentzMatrix> {
    check_dim(d)?;
    let mut m = LorentzMatrix::identity(d, d);
    m[(0, 0)] = -1.0;
    m[(1, 1)] = -1.0;
    Ok(m)
}

/// `R₁`: reflection of the edge directions of `W₁`, `x₂, …, x_{d-1} -> -x₂, …`.
pub fn edge_reflection_r1(d: usize) -> Result<LorentzMatrix> {
    check_dim(d)?;
    let mut m = LorentzMatrix::identity(d, d);
    for k in 2..d {
        m[(k, k)] = -1.0;
    }
    Ok(m)
}

/// `μ(t) = [[cosh πt, -sinh πt], [-sinh πt, cosh πt]]`.
pub fn mu(t: f64) -> Sl2r {
    let (ch, sh) = ((PI * t).cosh(), (PI * t).sinh());
    Sl2r::new(ch, -sh, -sh, ch)
}

/// `ν(t) = diag(e^{-πt}, e^{πt})`.
pub fn nu(t: f64) -> Sl2r {
    Sl2r::new((-PI * t).exp(), 0.0, 0.0, (PI * t).exp())
}

/// Pauli matrices, `σ₀ = I`.
pub fn pauli(k: usize) -> Sl2c {
    match k {
        0 => Sl2c::new(ONE, ZERO, ZERO, ONE),
        1 => Sl2c::new(ZERO, ONE, ONE, ZERO),
        2 => Sl2c::new(ZERO, -I, I, ZERO),
        3 => Sl2c::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("pauli index {k} out of range"),
    }
}

/// `Λ_{μν} = ½ tr(σ_μ A σ_ν A†)`.
pub fn sl2c_to_lorentz(a: &Sl2c) -> LorentzMatrix {
    let adj = a.adjoint();
    LorentzMatrix::from_fn(4, 4, |m, n| {
        (pauli(m) * a * pauli(n) * adj).trace().re / 2.0
    })
}

/// `Λ̃_{W_i}(t) = exp(-πt σ_i)`.
pub fn sl2c_boost(axis: usize, t: f64) -> Result<Sl2c> {
    if !(1..=3).contains(&axis) {
        return Err(Error::BadAxis { axis, dim: 4 });
    }
    let (ch, sh) = ((PI * t).cosh(), (PI * t).sinh());
    Ok(pauli(0) * c64(ch, 0.0) - pauli(axis) * c64(sh, 0.0))
}

/// `exp(-iθ ε_{ijk} σ_k / 2)`, the lift of [`rotation`]`(i, j, θ)`.
pub fn sl2c_rotation(i: usize, j: usize, theta: f64) -> Result<Sl2c> {
    if i == 0 || j == 0 || i > 3 || j > 3 || i == j {
        return Err(Error::BadPlane { i, j, dim: 4 });
    }
    let k = 6 - i - j;
    let sign = if (i, j, k) == (1, 2, 3) || (i, j, k) == (2, 3, 1) || (i, j, k) == (3, 1, 2) {
        1.0
    } else {
        -1.0
    };
    let half = theta / 2.0;
    Ok(pauli(0) * c64(half.cos(), 0.0) - pauli(k) * (I * (sign * half.sin())))
}

/// `A` with `σ(A) = Λ`, determined up to sign, for proper orthochronous `Λ` in `d = 4`.
///
/// Uses `Σ_ν (A σ_ν A†) Q σ_ν = 2 tr(A†Q) A` with the Pauli matrix `Q`
/// maximising the left side, then normalises the determinant.
pub fn lift_lorentz(l: &LorentzMatrix) -> Result<Sl2c> {
    if l.nrows() != 4 || l.ncols() != 4 {
        return Err(Error::BadDimension(l.nrows()));
    }
    if !is_proper_orthochronous(l) {
        return Err(Error::MalformedWord(
            "only proper orthochronous transformations lift".into(),
        ));
    }
    let y: Vec<Sl2c> = (0..4)
        .map(|n| {
            (0..4).fold(Sl2c::zeros(), |acc, m| acc + pauli(m) * c64(l[(m, n)], 0.0))
        })
        .collect();
    let best = (0..4)
        .map(|q| {
            (0..4).fold(Sl2c::zeros(), |acc, n| acc + y[n] * pauli(q) * pauli(n))
        })
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("four candidates");
    let det = best.determinant();
    Ok(best / det.sqrt())
}

/// One generator of the `d = 3` covering group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Letter {
    /// `Λ̃_{W_axis}(t)`, axis 1 or 2
    Boost { axis: usize, t: f64 },
    /// Lifted rotation in the `(1, 2)` plane; the unbounded angle is the covering datum
    Rotation { theta: f64 },
    Translation([f64; 3]),
}

impl Letter {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Letter::Boost { axis, t } => (axis == 1 || axis == 2) && t.is_finite(),
            Letter::Rotation { theta } => theta.is_finite(),
            Letter::Translation(a) => a.iter().all(|x| x.is_finite()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::MalformedWord(format!("{self:?}")))
        }
    }

    fn is_trivial(&self) -> bool {
        match *self {
            Letter::Boost { t, .. } => t == 0.0,
            Letter::Rotation { theta } => theta == 0.0,
            Letter::Translation(a) => a.iter().all(|&x| x == 0.0),
        }
    }

    fn merge(&self, other: &Letter) -> Option<Letter> {
        match (*self, *other) {
            (Letter::Boost { axis: a, t: s }, Letter::Boost { axis: b, t }) if a == b => {
                Some(Letter::Boost { axis: a, t: s + t })
            }
            (Letter::Rotation { theta: a }, Letter::Rotation { theta: b }) => {
                Some(Letter::Rotation { theta: a + b })
            }
            (Letter::Translation(a), Letter::Translation(b)) => {
                Some(Letter::Translation([a[0] + b[0], a[1] + b[1], a[2] + b[2]]))
            }
            _ => None,
        }
    }

    fn inverse(&self) -> Letter {
        match *self {
            Letter::Boost { axis, t } => Letter::Boost { axis, t: -t },
            Letter::Rotation { theta } => Letter::Rotation { theta: -theta },
            Letter::Translation(a) => Letter::Translation([-a[0], -a[1], -a[2]]),
        }
    }

    /// `I₁ g I₁` on generators.
    fn alpha(&self) -> Letter {
        match *self {
            Letter::Boost { axis: 1, t } => Letter::Boost { axis: 1, t },
            Letter::Boost { axis, t } => Letter::Boost { axis, t: -t },
            Letter::Rotation { theta } => Letter::Rotation { theta: -theta },
            Letter::Translation(a) => Letter::Translation([-a[0], -a[1], a[2]]),
        }
    }

    fn poincare(&self) -> (LorentzMatrix, MinkVector) {
        match *self {
            Letter::Boost { axis, t } => (
                boost(axis, t, 3).expect("validated"),
                MinkVector::zeros(3),
            ),
            Letter::Rotation { theta } => (
                rotation(1, 2, theta, 3).expect("valid plane"),
                MinkVector::zeros(3),
            ),
            Letter::Translation(a) => (LorentzMatrix::identity(3, 3), MinkVector::from_row_slice(&a)),
        }
    }
}

/// A reduced word in the `d = 3` generators.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        for l in &letters {
            l.validate()?;
        }
        let mut w = Word { letters: Vec::new() };
        for l in letters {
            w.push(l);
        }
        Ok(w)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    fn push(&mut self, l: Letter) {
        if l.is_trivial() {
            return;
        }
        if let Some(last) = self.letters.last() {
            if let Some(m) = last.merge(&l) {
                self.letters.pop();
                if !m.is_trivial() {
                    self.push(m);
                }
                return;
            }
        }
        self.letters.push(l);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        let mut w = Word::default();
        for l in self.letters.iter().rev() {
            w.push(l.inverse());
        }
        w
    }

    pub fn alpha(&self) -> Word {
        let mut w = Word::default();
        for l in &self.letters {
            w.push(l.alpha());
        }
        w
    }

    /// The word's image in `SL(2,R)` (translations ignored): `boost₁ -> μ`,
    /// `boost₂ -> ν`, `rot(θ) -> [[cos θ/2, sin θ/2], [-sin θ/2, cos θ/2]]`.
    pub fn to_sl2r(&self) -> Sl2r {
        self.letters.iter().fold(Sl2r::identity(), |acc, l| {
            acc * match *l {
                Letter::Boost { axis: 1, t } => mu(t),
                Letter::Boost { t, .. } => nu(t),
                Letter::Rotation { theta } => {
                    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                    Sl2r::new(c, s, -s, c)
                }
                Letter::Translation(_) => Sl2r::identity(),
            }
        })
    }
}

/// `X -> A X Aᵀ` on `X = x₀ I + x₁ σ₁ + x₂ σ₃`.
pub fn sl2r_to_lorentz3(a: &Sl2r) -> LorentzMatrix {
    let basis = [
        Sl2r::identity(),
        Sl2r::new(0.0, 1.0, 1.0, 0.0),
        Sl2r::new(1.0, 0.0, 0.0, -1.0),
    ];
    LorentzMatrix::from_fn(3, 3, |m, n| {
        (basis[m] * a * basis[n] * a.transpose()).trace() / 2.0
    })
}

/// Element of the universal cover of the proper orthochronous Poincaré group
/// (`d = 4`: `SL(2,C) ⋉ R⁴`; `d = 3`: formal words).
#[derive(Debug, Clone, PartialEq)]
pub enum CoverElement {
    Sl2c { a: Sl2c, translation: [f64; 4] },
    Word(Word),
}

fn compose_poincare(
    (l1, a1): &(LorentzMatrix, MinkVector),
    (l2, a2): &(LorentzMatrix, MinkVector),
) -> (LorentzMatrix, MinkVector) {
    (l1 * l2, a1 + l1 * a2)
}

impl CoverElement {
    pub fn identity(d: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(if d == 4 {
            CoverElement::Sl2c {
                a: pauli(0),
                translation: [0.0; 4],
            }
        } else {
            CoverElement::Word(Word::default())
        })
    }

    pub fn sl2c(a: Sl2c, translation: [f64; 4]) -> Result<Self> {
        let det = a.determinant();
        if (det - ONE).norm() > GROUP_TOL * a.norm_squared().max(1.0)
            || !translation.iter().all(|x| x.is_finite())
        {
            return Err(Error::MalformedWord(format!("det A = {det}")));
        }
        Ok(CoverElement::Sl2c { a, translation })
    }

    pub fn word(letters: Vec<Letter>) -> Result<Self> {
        Ok(CoverElement::Word(Word::new(letters)?))
    }

    /// `Λ̃_{W_axis}(t)`.
    pub fn boost_lift(axis: usize, t: f64, d: usize) -> Result<Self> {
        check_dim(d)?;
        if d == 4 {
            Self::sl2c(sl2c_boost(axis, t)?, [0.0; 4])
        } else if axis == 1 || axis == 2 {
            Self::word(vec![Letter::Boost { axis, t }])
        } else {
            Err(Error::BadAxis { axis, dim: d })
        }
    }

    /// Pure translation.
    pub fn translation(a: &[f64]) -> Result<Self> {
        match a.len() {
            4 => Self::sl2c(pauli(0), [a[0], a[1], a[2], a[3]]),
            3 => Self::word(vec![Letter::Translation([a[0], a[1], a[2]])]),
            n => Err(Error::BadDimension(n)),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            CoverElement::Sl2c { .. } => 4,
            CoverElement::Word(_) => 3,
        }
    }

    /// Group product `self · other`.
    pub fn compose(&self, other: &CoverElement) -> Result<Self> {
        match (self, other) {
            (
                CoverElement::Sl2c { a: a1, translation: t1 },
                CoverElement::Sl2c { a: a2, translation: t2 },
            ) => {
                let l1 = sl2c_to_lorentz(a1);
                let t = MinkVector::from_row_slice(t1) + l1 * MinkVector::from_row_slice(t2);
                Ok(CoverElement::Sl2c {
                    a: a1 * a2,
                    translation: [t[0], t[1], t[2], t[3]],
                })
            }
            (CoverElement::Word(w1), CoverElement::Word(w2)) => {
                Ok(CoverElement::Word(w1.concat(w2)))
            }
            _ => Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            }),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            CoverElement::Sl2c { a, translation } => {
                let inv = a.try_inverse().expect("det A = 1");
                let l = sl2c_to_lorentz(&inv);
                let t = -(l * MinkVector::from_row_slice(translation));
                CoverElement::Sl2c {
                    a: inv,
                    translation: [t[0], t[1], t[2], t[3]],
                }
            }
            CoverElement::Word(w) => CoverElement::Word(w.inverse()),
        }
    }

    /// `α(g) = Ĩ₁ g Ĩ₁`: `A -> σ₁ A σ₁`, `a -> I₁ a` in `d = 4`; generator-wise in `d = 3`.
    pub fn alpha(&self) -> Self {
        match self {
            CoverElement::Sl2c { a, translation: t } => CoverElement::Sl2c {
                a: pauli(1) * a * pauli(1),
                translation: [-t[0], -t[1], t[2], t[3]],
            },
            CoverElement::Word(w) => CoverElement::Word(w.alpha()),
        }
    }

    /// The covering map `σ` to `(Λ, a)`.
    pub fn covering_map(&self) -> Result<(LorentzMatrix, MinkVector)> {
        match self {
            CoverElement::Sl2c { a, translation } => {
                let det = a.determinant();
                if (det - ONE).norm() > 1e-9 {
                    return Err(Error::MalformedWord(format!("det A = {det}")));
                }
                Ok((sl2c_to_lorentz(a), MinkVector::from_row_slice(translation)))
            }
            CoverElement::Word(w) => {
                let id = (LorentzMatrix::identity(3, 3), MinkVector::zeros(3));
                w.letters.iter().try_fold(id, |acc, l| {
                    l.validate()?;
                    Ok(compose_poincare(&acc, &l.poincare()))
                })
            }
        }
    }

    /// Random element: in `d = 4` a product of lifted boosts and rotations with a
    /// translation, in `d = 3` a word of up to `max_len` letters.
    pub fn random<R: Rng + ?Sized>(d: usize, max_len: usize, rng: &mut R) -> Result<Self> {
        check_dim(d)?;
        let len = rng.gen_range(1..=max_len.max(1));
        let mut g = Self::identity(d)?;
        for _ in 0..len {
            let next = match (d, rng.gen_range(0..3)) {
                (4, 0) => Self::boost_lift(rng.gen_range(1..=3), rng.gen_range(-0.3..0.3), 4)?,
                (4, 1) => {
                    let (i, j) = [(1, 2), (2, 3), (3, 1)][rng.gen_range(0..3)];
                    Self::sl2c(sl2c_rotation(i, j, rng.gen_range(-7.0..7.0))?, [0.0; 4])?
                }
                (4, _) => Self::translation(&[
                    gaussian(rng),
                    gaussian(rng),
                    gaussian(rng),
                    gaussian(rng),
                ])?,
                (_, 0) => Self::boost_lift(rng.gen_range(1..=2), rng.gen_range(-0.3..0.3), 3)?,
                (_, 1) => Self::word(vec![Letter::Rotation {
                    theta: rng.gen_range(-7.0..7.0),
                }])?,
                (_, _) => Self::translation(&[gaussian(rng), gaussian(rng), gaussian(rng)])?,
            };
            g = g.compose(&next)?;
        }
        Ok(g)
    }
}

/// `r̃(θ)`, the lift of the rotation in the spatial plane `(i, j)`.
pub fn rotation_lift(plane: (usize, usize), theta: f64, d: usize) -> Result<CoverElement> {
    check_dim(d)?;
    let (i, j) = plane;
    if d == 4 {
        CoverElement::sl2c(sl2c_rotation(i, j, theta)?, [0.0; 4])
    } else {
        match (i, j) {
            (1, 2) => CoverElement::word(vec![Letter::Rotation { theta }]),
            (2, 1) => CoverElement::word(vec![Letter::Rotation { theta: -theta }]),
            _ => Err(Error::BadPlane { i, j, dim: d }),
        }
    }
}

/// Element `g Ĩ₁^r` of the `Z₂`-extended cover.
#[derive(Debug, Clone, PartialEq)]
pub struct ProperCoverElement {
    pub g: CoverElement,
    pub reflection: bool,
}

impl ProperCoverElement {
    pub fn new(g: CoverElement, reflection: bool) -> Self {
        Self { g, reflection }
    }

    pub fn reflection(d: usize) -> Result<Self> {
        Ok(Self::new(CoverElement::identity(d)?, true))
    }

    /// `(g₁, r₁)(g₂, r₂) = (g₁ α^{r₁}(g₂), r₁ ⊕ r₂)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let g2 = if self.reflection {
            other.g.alpha()
        } else {
            other.g.clone()
        };
        Ok(Self::new(
            self.g.compose(&g2)?,
            self.reflection ^ other.reflection,
        ))
    }

    /// `σ(g) I₁^r` as `(Λ, a)`.
    pub fn covering_map(&self) -> Result<(LorentzMatrix, MinkVector)> {
        let (l, a) = self.g.covering_map()?;
        if self.reflection {
            Ok((l * reflection_i1(self.g.dim())?, a))
        } else {
            Ok((l, a))
        }
    }
}

/// Covering map on pairs: shorthand for [`CoverElement::covering_map`].
pub fn covering_map(g: &CoverElement) -> Result<(LorentzMatrix, MinkVector)> {
    g.covering_map()
}

/// Twisted product on the `Z₂`-extended cover.
pub fn cover_compose(
    a: &ProperCoverElement,
    b: &ProperCoverElement,
) -> Result<ProperCoverElement> {
    a.compose(b)
}

/// A wedge `Λ W₁ + a` stored by its proper orthochronous transform.
#[derive(Debug, Clone, PartialEq)]
pub struct Wedge {
    lorentz: LorentzMatrix,
    translation: MinkVector,
}

/// Transform-independent description: normalised future and past null
/// normals `f, p` (`f₀ = 1`, `p₀ = -1`) and offsets `<a, f>`, `<a, p>`.
/// The wedge is `{x : <x, f> > <a, f>, <x, p> > <a, p>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalWedge {
    pub future: MinkVector,
    pub past: MinkVector,
    pub future_offset: f64,
    pub past_offset: f64,
}

fn null_normals(d: usize) -> (MinkVector, MinkVector) {
    let mut u = MinkVector::zeros(d);
    u[0] = 1.0;
    u[1] = -1.0;
    let mut v = MinkVector::zeros(d);
    v[0] = -1.0;
    v[1] = -1.0;
    (u, v)
}

impl Wedge {
    /// `W₁`.
    pub fn standard(d: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(Self {
            lorentz: LorentzMatrix::identity(d, d),
            translation: MinkVector::zeros(d),
        })
    }

    /// `W_i = {|x₀| < x_i}`.
    pub fn axis(i: usize, d: usize) -> Result<Self> {
        check_dim(d)?;
        if i == 0 || i >= d {
            return Err(Error::BadAxis { axis: i, dim: d });
        }
        if i == 1 {
            return Self::standard(d);
        }
        Self::from_transform(rotation(1, i, PI / 2.0, d)?, MinkVector::zeros(d))
    }

    pub fn from_transform(lorentz: LorentzMatrix, translation: MinkVector) -> Result<Self> {
        let d = lorentz.nrows();
        check_dim(d)?;
        if lorentz.ncols() != d || translation.len() != d {
            return Err(Error::MalformedRegion("shape mismatch".into()));
        }
        if lorentz_residual(&lorentz) > 1e-10 * lorentz.amax().powi(2).max(1.0) {
            return Err(Error::MalformedRegion("transform is not Lorentz".into()));
        }
        if lorentz[(0, 0)] < 1.0 - 1e-10 || lorentz.determinant() < 0.0 {
            return Err(Error::MalformedRegion(
                "transform is not proper orthochronous".into(),
            ));
        }
        Ok(Self {
            lorentz,
            translation,
        })
    }

    /// Wedge `{<x - a, f> > 0, <x - a, p> > 0}` for a future null `f` and past null `p`.
    pub fn from_null_pair(f: &MinkVector, p: &MinkVector, a: &MinkVector) -> Result<Self> {
        let d = f.len();
        check_dim(d)?;
        if p.len() != d || a.len() != d {
            return Err(Error::MalformedRegion("shape mismatch".into()));
        }
        if !(f[0] > 0.0 && p[0] < 0.0) {
            return Err(Error::MalformedRegion("need one future and one past normal".into()));
        }
        let f = f / f[0];
        let p = p / -p[0];
        let scale = 1e-9 * f.amax().max(p.amax());
        if minkowski_dot(&f, &f).abs() > scale || minkowski_dot(&p, &p).abs() > scale {
            return Err(Error::MalformedRegion("normals are not null".into()));
        }
        let fp = minkowski_dot(&f, &p);
        if !(fp < -1e-12) {
            return Err(Error::MalformedRegion("normals are parallel".into()));
        }
        let alpha = (-2.0 / fp).sqrt();
        let e0 = (&f - &p) * (alpha / 2.0);
        let e1 = (&f + &p) * (-alpha / 2.0);
        let mut frame: Vec<MinkVector> = vec![e0, e1];
        for k in (1..d).chain(0..1) {
            if frame.len() == d {
                break;
            }
            let mut w = MinkVector::zeros(d);
            w[k] = 1.0;
            for e in &frame {
                let ee = minkowski_dot(e, e);
                w -= e * (minkowski_dot(&w, e) / ee);
            }
            let ww = minkowski_dot(&w, &w);
            if ww < -1e-6 {
                frame.push(w / (-ww).sqrt());
            }
        }
        let mut l = LorentzMatrix::from_columns(&frame);
        if l.determinant() < 0.0 {
            let mut last = l.column_mut(d - 1);
            last *= -1.0;
        }
        Self::from_transform(l, a.clone())
    }

    pub fn dim(&self) -> usize {
        self.lorentz.nrows()
    }

    pub fn lorentz(&self) -> &LorentzMatrix {
        &self.lorentz
    }

    pub fn translation(&self) -> &MinkVector {
        &self.translation
    }

    pub fn canonical(&self) -> CanonicalWedge {
        let (u, v) = null_normals(self.dim());
        let f = &self.lorentz * u;
        let p = &self.lorentz * v;
        let f = &f / f[0];
        let p = &p / -p[0];
        CanonicalWedge {
            future_offset: minkowski_dot(&self.translation, &f),
            past_offset: minkowski_dot(&self.translation, &p),
            future: f,
            past: p,
        }
    }

    /// Largest difference of canonical data; `∞` across dimensions.
    pub fn distance(&self, other: &Wedge) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        let (a, b) = (self.canonical(), other.canonical());
        (&a.future - &b.future)
            .amax()
            .max((&a.past - &b.past).amax())
            .max((a.future_offset - b.future_offset).abs())
            .max((a.past_offset - b.past_offset).abs())
    }

    /// `min(<x - a, f>, <x - a, p>)` with normalised normals; positive inside.
    pub fn margin(&self, x: &MinkVector) -> f64 {
        let c = self.canonical();
        let fx = minkowski_dot(x, &c.future) - c.future_offset;
        let px = minkowski_dot(x, &c.past) - c.past_offset;
        fx.min(px)
    }

    pub fn contains(&self, x: &MinkVector) -> bool {
        self.margin(x) > 0.0
    }

    /// Causal complement `W'`.
    pub fn complement(&self) -> Wedge {
        let c = self.canonical();
        let f = -&c.past;
        let p = -&c.future;
        Self::from_null_pair(&f, &p, &self.translation).expect("complement of a wedge")
    }

    /// Image under `x -> Λx + b` for any Lorentz `Λ` (reflections allowed).
    pub fn image(&self, l: &LorentzMatrix, b: &MinkVector) -> Result<Wedge> {
        let d = self.dim();
        if l.nrows() != d || b.len() != d {
            return Err(Error::MalformedRegion("dimension mismatch".into()));
        }
        if lorentz_residual(l) > 1e-10 * l.amax().powi(2).max(1.0) {
            return Err(Error::MalformedRegion("map is not Lorentz".into()));
        }
        let c = self.canonical();
        let f = l * &c.future;
        let p = l * &c.past;
        let a = l * &self.translation + b;
        if f[0] > 0.0 {
            Self::from_null_pair(&f, &p, &a)
        } else {
            Self::from_null_pair(&p, &f, &a)
        }
    }

    /// Image under a cover element of the `Z₂`-extended group.
    pub fn transformed(&self, g: &ProperCoverElement) -> Result<Wedge> {
        let (l, a) = g.covering_map()?;
        self.image(&l, &a)
    }

    /// `Λ_W(t) = L Λ₁(t) L^{-1}` (Lorentz part; the translation conjugates along).
    pub fn boost(&self, t: f64) -> LorentzMatrix {
        let d = self.dim();
        &self.lorentz * boost(1, t, d).expect("axis 1") * lorentz_inverse(&self.lorentz)
    }

    /// `R_W = L R₁ L^{-1}`: reflection of the edge directions.
    pub fn edge_reflection(&self) -> LorentzMatrix {
        let d = self.dim();
        &self.lorentz * edge_reflection_r1(d).expect("d checked") * lorentz_inverse(&self.lorentz)
    }

    /// True if the edge passes through the origin.
    pub fn edge_through_origin(&self, tol: f64) -> bool {
        let c = self.canonical();
        c.future_offset.abs() <= tol && c.past_offset.abs() <= tol
    }
}

/// Wedge selector used by [`wedge_geometry`].
#[derive(Debug, Clone)]
pub enum WedgeMap {
    Cover(ProperCoverElement),
    Lorentz(LorentzMatrix),
}

/// Image of a wedge under a cover element or a Lorentz matrix.
pub fn wedge_geometry(g: &WedgeMap, w: &Wedge) -> Result<Wedge> {
    match g {
        WedgeMap::Cover(c) => w.transformed(c),
        WedgeMap::Lorentz(l) => w.image(l, &MinkVector::zeros(w.dim())),
    }
}

/// Causal complement.
pub fn complement(w: &Wedge) -> Wedge {
    w.complement()
}

/// Double cone `{x : |x₀ - c₀| + |x⃗ - c⃗| < r}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleCone {
    pub center: MinkVector,
    pub radius: f64,
}

impl DoubleCone {
    pub fn new(center: MinkVector, radius: f64) -> Result<Self> {
        check_dim(center.len())?;
        if !(radius > 0.0) || !center.iter().all(|x| x.is_finite()) {
            return Err(Error::MalformedRegion("double cone needs radius > 0".into()));
        }
        Ok(Self { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains(&self, x: &MinkVector) -> bool {
        let y = x - &self.center;
        let spatial = y.rows(1, self.dim() - 1).norm();
        y[0].abs() + spatial < self.radius
    }

    /// Point reflection `-O`.
    pub fn negated(&self) -> Self {
        Self {
            center: -&self.center,
            radius: self.radius,
        }
    }

    /// Uniform-ish interior samples, including points close to the boundary.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<MinkVector> {
        let d = self.dim();
        (0..n)
            .map(|k| {
                let mut dir = MinkVector::from_fn(d - 1, |_, _| gaussian(rng));
                let norm = dir.norm().max(1e-300);
                dir /= norm;
                let shell = if k % 4 == 0 { 1.0 - 1e-9 } else { rng.gen::<f64>() };
                let total = self.radius * shell;
                let split: f64 = rng.gen_range(-1.0..1.0);
                let t = total * split;
                let s = total - t.abs();
                let mut x = MinkVector::zeros(d);
                x[0] = t;
                for i in 1..d {
                    x[i] = s * dir[i - 1];
                }
                x + &self.center
            })
            .collect()
    }
}

/// Wedges `{|x₀ - c₀| < n̂·(x⃗ - c⃗) + r}` for `n̂ ∈ {±e₁, …, ±e_{d-1}}`; each
/// contains `O` and their intersection is a finite outer approximation of it.
pub fn dual_region(o: &DoubleCone) -> Result<Vec<Wedge>> {
    let d = o.dim();
    let mut out = Vec::with_capacity(2 * (d - 1));
    for axis in 1..d {
        for sign in [1.0, -1.0] {
            let mut f = MinkVector::zeros(d);
            let mut p = MinkVector::zeros(d);
            f[0] = 1.0;
            p[0] = -1.0;
            f[axis] = -sign;
            p[axis] = -sign;
            let mut a = o.center.clone();
            a[axis] -= sign * o.radius;
            out.push(Wedge::from_null_pair(&f, &p, &a)?);
        }
    }
    Ok(out)
}

/// Result of the PCT region map check.
#[derive(Debug, Clone)]
pub struct PctRegionReport {
    pub wedges: usize,
    /// Matching distance between `{-W : W ∈ dual(O)}` and `dual(-O)`
    pub set_identity_residual: f64,
    /// Sampled points of `-O` outside some image wedge
    pub containment_violations: usize,
    pub samples: usize,
}

/// `-W` for each `W ⊃ O` is a wedge containing `-O`, and `-dual(O) = dual(-O)`.
pub fn pct_region_check<R: Rng + ?Sized>(
    o: &DoubleCone,
    theta_geometric: &LorentzMatrix,
    samples: usize,
    rng: &mut R,
) -> Result<PctRegionReport> {
    let d = o.dim();
    let wedges = dual_region(o)?;
    let zero = MinkVector::zeros(d);
    let images: Vec<Wedge> = wedges
        .iter()
        .map(|w| w.image(theta_geometric, &zero))
        .collect::<Result<_>>()?;
    let target = dual_region(&o.negated())?;
    let mut residual: f64 = 0.0;
    for w in &images {
        let best = target
            .iter()
            .map(|t| w.distance(t))
            .fold(f64::INFINITY, f64::min);
        residual = residual.max(best);
    }
    for t in &target {
        let best = images
            .iter()
            .map(|w| w.distance(t))
            .fold(f64::INFINITY, f64::min);
        residual = residual.max(best);
    }
    let points = o.negated().sample(samples, rng);
    let violations = points
        .iter()
        .filter(|x| images.iter().any(|w| !w.contains(x)))
        .count();
    Ok(PctRegionReport {
        wedges: images.len(),
        set_identity_residual: residual,
        containment_violations: violations,
        samples: points.len(),
    })
}

/// Result of the cone inclusion check.
#[derive(Debug, Clone)]
pub struct ConeReport {
    pub t: f64,
    pub samples: usize,
    /// Sampled points of `C_t` outside `W₁`
    pub outside_w1: usize,
    /// Sampled points with `Λ₂(t)x` outside `W₁`
    pub boosted_outside_w1: usize,
    /// Smallest `(y₁ - |y₀|) / y₁` over boosted samples
    pub min_relative_margin: f64,
}

impl ConeReport {
    pub fn passed(&self) -> bool {
        self.outside_w1 == 0 && self.boosted_outside_w1 == 0
    }
}

/// Samples `C_t = {√(x₀² + x₂²) < x₁ / (√2 cosh 2πt)}` in `d = 4` and checks
/// `C_t ⊂ W₁` and `Λ₂(t) C_t ⊂ W₁`.
pub fn cone_check<R: Rng + ?Sized>(t: f64, samples: usize, rng: &mut R) -> Result<ConeReport> {
    let w1 = Wedge::standard(4)?;
    let l2 = boost(2, t, 4)?;
    let bound = 2f64.sqrt() * (2.0 * PI * t).cosh();
    let mut report = ConeReport {
        t,
        samples,
        outside_w1: 0,
        boosted_outside_w1: 0,
        min_relative_margin: f64::INFINITY,
    };
    for k in 0..samples {
        let x1 = rng.gen_range(1e-3..10.0);
        let shell = match k % 3 {
            0 => 1.0 - 1e-12,
            _ => rng.gen::<f64>(),
        };
        let rho = shell * x1 / bound;
        // every third sample sits at the worst angle for Λ₂(t)
        let phi = if k % 3 == 0 {
            (-(2.0 * PI * t).tanh()).atan() + if rng.gen::<bool>() { PI } else { 0.0 }
        } else {
            rng.gen_range(0.0..2.0 * PI)
        };
        let x = MinkVector::from_row_slice(&[rho * phi.cos(), x1, rho * phi.sin(), 10.0 * gaussian(rng)]);
        if !w1.contains(&x) {
            report.outside_w1 += 1;
        }
        let y = &l2 * &x;
        if !w1.contains(&y) {
            report.boosted_outside_w1 += 1;
        }
        report.min_relative_margin = report.min_relative_margin.min((y[1] - y[0].abs()) / y[1]);
    }
    Ok(report)
}

//! Matrix Lie algebras `u(1,n)`, `su(1,n)`, `so(2,n)`: elements, bracket,
//! Killing form, Cartan involution and a scaling-and-squaring exponential.

mod subalgebra;

pub use subalgebra::{Subalgebra, CLOSURE_TOL};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::indefinite::{Model, C64};

/// Default truncation tolerance of [`exp_series`].
pub const EXP_TOL: f64 = 1e-14;

const EXP_MAX_TERMS: usize = 200;

/// Which matrix algebra an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraKind {
    U1n,
    Su1n,
    So2n,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraKind::U1n => "u(1,n)",
            AlgebraKind::Su1n => "su(1,n)",
            AlgebraKind::So2n => "so(2,n)",
        })
    }
}

impl AlgebraKind {
    /// Matrix size for parameter `n`.
    pub const fn size(self, n: usize) -> usize {
        match self {
            AlgebraKind::So2n => n + 2,
            _ => n + 1,
        }
    }

    /// Real dimension of the algebra.
    pub const fn dim(self, n: usize) -> usize {
        match self {
            AlgebraKind::So2n => (n + 2) * (n + 1) / 2,
            AlgebraKind::U1n => (n + 1) * (n + 1),
            AlgebraKind::Su1n => (n + 1) * (n + 1) - 1,
        }
    }

    /// Number of timelike directions in the defining representation.
    pub const fn neg(self) -> usize {
        match self {
            AlgebraKind::So2n => 2,
            _ => 1,
        }
    }

    pub const fn model(self) -> Model {
        match self {
            AlgebraKind::So2n => Model::Real,
            _ => Model::Complex,
        }
    }

    pub const fn min_n(self) -> usize {
        match self {
            AlgebraKind::So2n => 3,
            _ => 2,
        }
    }

    /// `diag(-I_neg, I)`.
    pub fn epsilon(self, n: usize) -> DMatrix<C64> {
        let size = self.size(n);
        DMatrix::from_fn(size, size, |i, j| {
            if i != j {
                C64::new(0.0, 0.0)
            } else if i < self.neg() {
                C64::new(-1.0, 0.0)
            } else {
                C64::new(1.0, 0.0)
            }
        })
    }

    fn check_n(self, n: usize) -> Result<()> {
        if n < self.min_n() {
            return Err(Error::Argument(format!("{self} needs n >= {}, got {n}", self.min_n())));
        }
        Ok(())
    }
}

fn entrywise_max(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn one_norm(m: &DMatrix<C64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// A square matrix tagged with its algebra and parameter `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    mat: DMatrix<C64>,
    kind: AlgebraKind,
    n: usize,
}

impl AlgebraElement {
    /// Wrap a matrix. Only the shape is checked; use [`AlgebraElement::validate`]
    /// or [`AlgebraElement::checked`] for membership.
    pub fn new(kind: AlgebraKind, n: usize, mat: DMatrix<C64>) -> Result<Self> {
        let size = kind.size(n);
        if mat.nrows() != size || mat.ncols() != size {
            return Err(Error::Dimension { expected: size, found: mat.nrows().max(mat.ncols()) });
        }
        Ok(Self { mat, kind, n })
    }

    /// Wrap a matrix and require membership to `1e-10`.
    pub fn checked(kind: AlgebraKind, n: usize, mat: DMatrix<C64>) -> Result<Self> {
        let x = Self::new(kind, n, mat)?;
        if !x.validate(1e-10) {
            return Err(Error::Argument(format!("matrix is not in {kind}")));
        }
        Ok(x)
    }

    pub fn from_real(kind: AlgebraKind, n: usize, mat: &DMatrix<f64>) -> Result<Self> {
        Self::new(kind, n, mat.map(|x| C64::new(x, 0.0)))
    }

    pub fn zero(kind: AlgebraKind, n: usize) -> Self {
        let size = kind.size(n);
        Self { mat: DMatrix::zeros(size, size), kind, n }
    }

    pub fn mat(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_mat(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Same matrix under another tag (e.g. an `su(1,n)` element viewed in `u(1,n)`).
    pub fn retag(&self, kind: AlgebraKind) -> Result<Self> {
        Self::new(kind, self.n, self.mat.clone())
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind || self.n != other.n {
            return Err(Error::Tag(format!("{} (n = {}) vs {} (n = {})", self.kind, self.n, other.kind, other.n)));
        }
        Ok(())
    }

    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        Ok(Self { mat: &self.mat * &other.mat - &other.mat * &self.mat, kind: self.kind, n: self.n })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        Ok(Self { mat: &self.mat + &other.mat, kind: self.kind, n: self.n })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        Ok(Self { mat: &self.mat - &other.mat, kind: self.kind, n: self.n })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { mat: self.mat.map(|z| z * s), kind: self.kind, n: self.n }
    }

    /// Real linear combination of elements of one algebra.
    pub fn combination(coeffs: &[f64], elements: &[Self]) -> Result<Self> {
        let first = elements.first().ok_or_else(|| Error::Argument("empty combination".into()))?;
        let mut acc = Self::zero(first.kind, first.n);
        for (c, x) in coeffs.iter().zip(elements) {
            acc.same_algebra(x)?;
            acc.mat += x.mat.map(|z| z * *c);
        }
        Ok(acc)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Real coordinates `(Re entries, Im entries)`, column-major.
    pub fn flatten(&self) -> DVector<f64> {
        let len = self.mat.len();
        DVector::from_fn(2 * len, |i, _| if i < len { self.mat[i].re } else { self.mat[i - len].im })
    }

    /// `theta X = -X^*` (`-X^T` on real matrices).
    pub fn theta(&self) -> Self {
        Self { mat: -self.mat.adjoint(), kind: self.kind, n: self.n }
    }

    /// `(k_part, p_part)` with `theta` acting as `+1` and `-1`.
    pub fn cartan_split(&self) -> (Self, Self) {
        let t = self.theta();
        let k = Self { mat: (&self.mat + &t.mat).map(|z| z * 0.5), kind: self.kind, n: self.n };
        let p = Self { mat: (&self.mat - &t.mat).map(|z| z * 0.5), kind: self.kind, n: self.n };
        (k, p)
    }

    /// Membership in the tagged algebra, entrywise to `tol`.
    pub fn validate(&self, tol: f64) -> bool {
        let eps = self.kind.epsilon(self.n);
        let defect = &eps * &self.mat + self.mat.adjoint() * &eps;
        if entrywise_max(&defect) > tol {
            return false;
        }
        match self.kind {
            AlgebraKind::U1n => true,
            AlgebraKind::Su1n => self.mat.trace().norm() <= tol,
            AlgebraKind::So2n => self.mat.iter().all(|z| z.im.abs() <= tol) && self.mat.trace().norm() <= tol,
        }
    }

    /// Action on a coordinate vector.
    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.mat * v
    }
}

/// `B(X, Y) = n tr(XY)` on `so(2,n)`.
pub fn killing_form(x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    x.same_algebra(y)?;
    if x.kind != AlgebraKind::So2n {
        return Err(Error::Tag(format!("closed-form Killing form is only exposed for so(2,n), got {}", x.kind)));
    }
    Ok(x.n as f64 * (&x.mat * &y.mat).trace().re)
}

/// `B_theta(X, Y) = -B(X, theta Y)`.
///
/// `so(2,n)` uses `n tr(X Y^T)`; `su(1,n)` uses its own Killing form through
/// the ad-trace. `u(1,n)` has a degenerate Killing form, so the `su(1,n)`
/// normalisation `2(n+1) Re tr(X Y^*)` is extended to the centre.
pub fn btheta_inner(x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    x.same_algebra(y)?;
    match x.kind {
        AlgebraKind::So2n => Ok(x.n as f64 * (&x.mat * y.mat.transpose()).trace().re),
        AlgebraKind::Su1n => Ok(-killing_ad(x, &y.theta())?),
        AlgebraKind::U1n => Ok(2.0 * (x.n as f64 + 1.0) * (&x.mat * y.mat.adjoint()).trace().re),
    }
}

/// Faster closed form of [`btheta_inner`], used where many inner products are needed.
pub(crate) fn btheta_fast(x: &AlgebraElement, y: &AlgebraElement) -> f64 {
    let scale = match x.kind {
        AlgebraKind::So2n => x.n as f64,
        _ => 2.0 * (x.n as f64 + 1.0),
    };
    scale * (&x.mat * y.mat.adjoint()).trace().re
}

/// Standard basis together with a left inverse for reading off coordinates.
#[derive(Debug)]
pub struct StandardBasis {
    pub elements: Vec<AlgebraElement>,
    coords: DMatrix<f64>,
}

impl StandardBasis {
    fn build(kind: AlgebraKind, n: usize) -> Self {
        let size = kind.size(n);
        let neg = kind.neg();
        let unit = |i: usize, j: usize, z: C64| {
            let mut m = DMatrix::zeros(size, size);
            m[(i, j)] = z;
            m
        };
        let one = C64::new(1.0, 0.0);
        let im = C64::new(0.0, 1.0);
        let mut mats: Vec<DMatrix<C64>> = Vec::with_capacity(kind.dim(n));
        for i in 0..size {
            for j in i + 1..size {
                let same_block = (i < neg) == (j < neg);
                if same_block {
                    mats.push(unit(i, j, one) - unit(j, i, one));
                } else {
                    mats.push(unit(i, j, one) + unit(j, i, one));
                }
                if kind != AlgebraKind::So2n {
                    if same_block {
                        mats.push(unit(i, j, im) + unit(j, i, im));
                    } else {
                        mats.push(unit(i, j, im) - unit(j, i, im));
                    }
                }
            }
        }
        match kind {
            AlgebraKind::U1n => (0..size).for_each(|j| mats.push(unit(j, j, im))),
            AlgebraKind::Su1n => (1..size).for_each(|j| mats.push(unit(j, j, im) - unit(0, 0, im))),
            AlgebraKind::So2n => {}
        }
        let elements: Vec<AlgebraElement> = mats.into_iter().map(|mat| AlgebraElement { mat, kind, n }).collect();
        let cols: Vec<DVector<f64>> = elements.iter().map(AlgebraElement::flatten).collect();
        let b = DMatrix::from_columns(&cols);
        let coords = (b.transpose() * &b).try_inverse().expect("standard basis is independent") * b.transpose();
        Self { elements, coords }
    }

    /// Coordinates of `x` in the standard basis (least squares).
    pub fn coordinates(&self, x: &AlgebraElement) -> DVector<f64> {
        &self.coords * x.flatten()
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

type BasisMemo = RwLock<HashMap<(AlgebraKind, usize), Arc<StandardBasis>>>;

/// Cached standard basis of the algebra.
pub fn standard_basis(kind: AlgebraKind, n: usize) -> Arc<StandardBasis> {
    static MEMO: OnceLock<BasisMemo> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(b) = memo.read().expect("memo lock").get(&(kind, n)) {
        return b.clone();
    }
    let built = Arc::new(StandardBasis::build(kind, n));
    memo.write().expect("memo lock").entry((kind, n)).or_insert(built).clone()
}

/// Matrix of `ad X` in the standard basis.
pub fn ad_matrix(x: &AlgebraElement) -> DMatrix<f64> {
    let basis = standard_basis(x.kind, x.n);
    let cols: Vec<DVector<f64>> =
        basis.elements.iter().map(|b| basis.coordinates(&x.bracket(b).expect("same algebra"))).collect();
    DMatrix::from_columns(&cols)
}

/// `tr(ad X o ad Y)` computed on the full standard basis.
pub fn killing_ad(x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    x.same_algebra(y)?;
    Ok((ad_matrix(x) * ad_matrix(y)).trace())
}

/// Element with standard-basis coordinates uniform in `[-1, 1]`.
pub fn random_element<R: Rng + ?Sized>(kind: AlgebraKind, n: usize, rng: &mut R) -> AlgebraElement {
    let basis = standard_basis(kind, n);
    let coeffs: Vec<f64> = (0..basis.dim()).map(|_| rng.random_range(-1.0..=1.0)).collect();
    AlgebraElement::combination(&coeffs, &basis.elements).expect("nonempty basis")
}

/// A tagged group matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    mat: DMatrix<C64>,
    kind: AlgebraKind,
    n: usize,
}

impl GroupElement {
    pub fn new(kind: AlgebraKind, n: usize, mat: DMatrix<C64>) -> Result<Self> {
        let size = kind.size(n);
        if mat.nrows() != size || mat.ncols() != size {
            return Err(Error::Dimension { expected: size, found: mat.nrows().max(mat.ncols()) });
        }
        Ok(Self { mat, kind, n })
    }

    pub fn identity(kind: AlgebraKind, n: usize) -> Self {
        let size = kind.size(n);
        Self { mat: DMatrix::identity(size, size), kind, n }
    }

    pub fn mat(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_mat(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.kind != other.kind || self.n != other.n {
            return Err(Error::Tag(format!("{} vs {}", self.kind, other.kind)));
        }
        Ok(Self { mat: &self.mat * &other.mat, kind: self.kind, n: self.n })
    }

    /// Entrywise distance to another matrix of the same size.
    pub fn max_deviation(&self, other: &DMatrix<C64>) -> f64 {
        entrywise_max(&(&self.mat - other))
    }

    /// `g^* eps g = eps` plus the determinant condition where required.
    pub fn validate(&self, tol: f64) -> bool {
        let eps = self.kind.epsilon(self.n);
        let defect = self.mat.adjoint() * &eps * &self.mat - &eps;
        if entrywise_max(&defect) > tol {
            return false;
        }
        let scale = tol * entrywise_max(&self.mat).max(1.0).powi(self.mat.nrows() as i32);
        match self.kind {
            AlgebraKind::U1n => true,
            AlgebraKind::Su1n => (self.mat.determinant() - C64::new(1.0, 0.0)).norm() <= scale,
            AlgebraKind::So2n => {
                self.mat.iter().all(|z| z.im.abs() <= tol)
                    && (self.mat.determinant() - C64::new(1.0, 0.0)).norm() <= scale
            }
        }
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.mat * v
    }
}

/// Scaling-and-squaring Taylor exponential.
///
/// The argument is halved until its 1-norm is below `1/2`; the series stops
/// once a term falls under `tol` times the partial sum.
pub fn exp_series(x: &AlgebraElement, tol: f64) -> Result<GroupElement> {
    let norm = one_norm(&x.mat);
    if !norm.is_finite() {
        return Err(Error::Numeric("non-finite matrix entries".into()));
    }
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = x.mat.map(|z| z / f64::powi(2.0, squarings as i32));
    let size = scaled.nrows();
    let mut sum = DMatrix::<C64>::identity(size, size);
    let mut term = DMatrix::<C64>::identity(size, size);
    let mut converged = false;
    for k in 1..=EXP_MAX_TERMS {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        sum += &term;
        let t = one_norm(&term);
        if t == 0.0 || t <= tol * one_norm(&sum) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric(format!("exponential series did not converge within {EXP_MAX_TERMS} terms")));
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    if !sum.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Numeric("exponential overflowed".into()));
    }
    if x.kind == AlgebraKind::So2n {
        sum.iter_mut().for_each(|z| z.im = 0.0);
    }
    Ok(GroupElement { mat: sum, kind: x.kind, n: x.n })
}

/// Check `n` against the algebra's supported range.
pub fn check_parameter(kind: AlgebraKind, n: usize) -> Result<()> {
    kind.check_n(n)
}

//! Kähler angles of real subspaces of `C^m` and the `w = w_0 + w_phi`
//! decompositions used by the `N_K(S) S` actions.
//!
//! Vectors of `C^m` are realified with [`complex_to_real`], which makes the
//! Euclidean product of the images equal to `Re <u, w>`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::indefinite::{complex_to_real, numerical_rank, orthonormal_basis, C64, RANK_TOL};

/// Angle tolerance in radians.
pub const ANGLE_TOL: f64 = 1e-9;

/// Multiplication by `i` on a realified vector.
fn j_map(x: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(x.len());
    for k in 0..x.len() / 2 {
        out[2 * k] = -x[2 * k + 1];
        out[2 * k + 1] = x[2 * k];
    }
    out
}

/// A real subspace of `C^m` given by a real-independent basis.
#[derive(Debug, Clone)]
pub struct RealSubspace {
    m: usize,
    basis: Vec<DVector<C64>>,
    frame: DMatrix<f64>,
}

impl RealSubspace {
    pub fn new(m: usize, basis: Vec<DVector<C64>>) -> Result<Self> {
        if let Some(v) = basis.iter().find(|v| v.len() != m) {
            return Err(Error::Dimension { expected: m, found: v.len() });
        }
        let real: Vec<DVector<f64>> = basis.iter().map(complex_to_real).collect();
        if !real.is_empty() && numerical_rank(&real, RANK_TOL)? != real.len() {
            return Err(Error::Argument("basis is not independent over R".into()));
        }
        let frame = orthonormal_basis(&real, 2 * m, RANK_TOL)?;
        Ok(Self { m, basis, frame })
    }

    /// `span_R` of the standard vectors `e_j` for the given 0-based indices.
    pub fn real_span_of_units(m: usize, indices: &[usize]) -> Result<Self> {
        Self::new(m, indices.iter().map(|&j| unit(m, j, C64::new(1.0, 0.0))).collect())
    }

    /// `span_C` of the standard vectors with the given 0-based indices.
    pub fn complex_span_of_units(m: usize, indices: &[usize]) -> Result<Self> {
        let mut basis = Vec::new();
        for &j in indices {
            basis.push(unit(m, j, C64::new(1.0, 0.0)));
            basis.push(unit(m, j, C64::new(0.0, 1.0)));
        }
        Self::new(m, basis)
    }

    pub fn ambient(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[DVector<C64>] {
        &self.basis
    }

    /// Orthonormal realified frame (columns in `R^{2m}`).
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    fn project_real(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.frame * (self.frame.transpose() * x)
    }

    /// Orthogonal projection (real part of the Hermitian product).
    pub fn project(&self, v: &DVector<C64>) -> DVector<C64> {
        let p = self.project_real(&complex_to_real(v));
        DVector::from_fn(self.m, |k, _| C64::new(p[2 * k], p[2 * k + 1]))
    }

    pub fn contains(&self, v: &DVector<C64>, tol: f64) -> bool {
        let x = complex_to_real(v);
        (&x - self.project_real(&x)).norm() <= tol * x.norm().max(f64::MIN_POSITIVE)
    }

    /// `span_R` of both families.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        Self::new(self.m, basis)
    }

    /// `span_C` of the subspace.
    pub fn complexification(&self) -> Result<Self> {
        let i = C64::new(0.0, 1.0);
        let mut vecs: Vec<DVector<f64>> = self.basis.iter().map(complex_to_real).collect();
        vecs.extend(self.basis.iter().map(|v| complex_to_real(&v.map(|z| z * i))));
        let frame = orthonormal_basis(&vecs, 2 * self.m, RANK_TOL)?;
        let basis =
            frame.column_iter().map(|c| DVector::from_fn(self.m, |k, _| C64::new(c[2 * k], c[2 * k + 1]))).collect();
        Self::new(self.m, basis)
    }

    /// Equality of real spans.
    pub fn same_span(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim()
            && self.basis.iter().all(|v| other.contains(v, tol))
            && other.basis.iter().all(|v| self.contains(v, tol))
    }

    /// Largest `|Re <u, w>|` between unit vectors of the two subspaces.
    pub fn max_overlap(&self, other: &Self) -> f64 {
        let c = self.frame.transpose() * &other.frame;
        c.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

fn unit(m: usize, j: usize, z: C64) -> DVector<C64> {
    let mut v = DVector::zeros(m);
    v[j] = z;
    v
}

/// Kähler angle of a nonzero `v` in `V`: the angle between `iv` and `V`.
pub fn kaehler_angle(v: &DVector<C64>, space: &RealSubspace) -> Result<f64> {
    if v.len() != space.m {
        return Err(Error::Dimension { expected: space.m, found: v.len() });
    }
    let x = complex_to_real(v);
    let norm = x.norm();
    if norm <= 1e-300 {
        return Err(Error::Argument("zero vector has no Kähler angle".into()));
    }
    if (&x - space.project_real(&x)).norm() > 1e-9 * norm {
        return Err(Error::Argument("vector is not in the subspace".into()));
    }
    let jx = j_map(&x);
    let inside = space.project_real(&jx);
    let outside = &jx - &inside;
    Ok(outside.norm().atan2(inside.norm()))
}

/// Principal Kähler angles: for each eigenvector `c` of the restricted form
/// `S^T S`, the angle between `J F c` and `V`.
pub fn principal_kaehler_angles(space: &RealSubspace) -> Vec<f64> {
    let f = &space.frame;
    if f.ncols() == 0 {
        return Vec::new();
    }
    let jf = DMatrix::from_columns(&f.column_iter().map(|c| j_map(&c.into_owned())).collect::<Vec<_>>());
    let s = f.transpose() * &jf;
    let b = &jf - f * &s;
    let eig = SymmetricEigen::new(s.transpose() * &s);
    let mut angles: Vec<f64> = eig.eigenvectors.column_iter().map(|c| (&b * c).norm().atan2((&s * c).norm())).collect();
    angles.sort_by(f64::total_cmp);
    angles
}

/// The common Kähler angle of every nonzero vector of `V`, if there is one.
///
/// Decided from the spectrum of the restricted skew form and cross-checked
/// on 50 random unit vectors.
pub fn constant_kaehler_angle(space: &RealSubspace, tol: f64) -> Option<f64> {
    let angles = principal_kaehler_angles(space);
    let (&lo, &hi) = (angles.first()?, angles.last()?);
    if hi - lo > tol {
        return None;
    }
    let phi = 0.5 * (lo + hi);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b61_6568);
    for _ in 0..50 {
        let coeffs: Vec<f64> = (0..space.dim()).map(|_| rng.sample(StandardNormal)).collect();
        let mut v = DVector::zeros(space.m);
        for (c, b) in coeffs.iter().zip(&space.basis) {
            v += b.map(|z| z * *c);
        }
        match kaehler_angle(&v, space) {
            Ok(a) if (a - phi).abs() <= tol.max(1e-9) => {}
            _ => return None,
        }
    }
    Some(phi)
}

/// `w = w_0 + w_phi` inside `C^{n-1}` and the complement `w^perp` of `w_phi`
/// in `C w_phi`.
#[derive(Debug, Clone)]
pub struct WDecomposition {
    pub k: usize,
    pub l: usize,
    pub phi: f64,
    pub n: usize,
    pub w0: RealSubspace,
    pub w_phi: RealSubspace,
    pub w_perp: RealSubspace,
    pub f: Vec<DVector<C64>>,
    pub h: Vec<DVector<C64>>,
    pub f_perp: Vec<DVector<C64>>,
    pub h_perp: Vec<DVector<C64>>,
}

impl WDecomposition {
    /// `w = w_0 + w_phi`.
    pub fn w(&self) -> Result<RealSubspace> {
        self.w0.sum(&self.w_phi)
    }
}

/// Build the decomposition with `w_0 = span_C{e_2, ..., e_{k+1}}` and the
/// `f_j, h_j, f'_j, h'_j` bases; requires `k + 2l = n - 1`, `l >= 1`.
///
/// In `C^{n-1}` (0-based, `e_2` at index 0) the vectors `e_{k+j+1}` and
/// `e_{k+l+j+1}` sit at indices `k+j-1` and `k+l+j-1`.
pub fn build_w_decomposition(k: usize, l: usize, phi: f64, n: usize) -> Result<WDecomposition> {
    if n < 2 || k + 2 * l != n - 1 {
        return Err(Error::Argument(format!("need k + 2l = n - 1, got k = {k}, l = {l}, n = {n}")));
    }
    if l == 0 {
        return Err(Error::Argument("w_phi must be nonzero (l >= 1)".into()));
    }
    if !(phi > 0.0 && phi <= std::f64::consts::FRAC_PI_2 + 1e-15) {
        return Err(Error::Argument(format!("angle {phi} outside (0, pi/2]")));
    }
    let m = n - 1;
    let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
    let re = |x: f64| C64::new(x, 0.0);
    let im = |x: f64| C64::new(0.0, x);
    let pair = |a: usize, b: usize, za: C64, zb: C64| {
        let mut v = DVector::zeros(m);
        v[a] = za;
        v[b] = zb;
        v
    };
    let mut f = Vec::with_capacity(l);
    let mut h = Vec::with_capacity(l);
    let mut f_perp = Vec::with_capacity(l);
    let mut h_perp = Vec::with_capacity(l);
    for j in 1..=l {
        let (a, b) = (k + j - 1, k + l + j - 1);
        f.push(pair(a, b, re(c), im(s)));
        h.push(pair(a, b, im(c), re(s)));
        f_perp.push(pair(a, b, re(-s), im(c)));
        h_perp.push(pair(a, b, im(-s), re(c)));
    }
    let w0 = RealSubspace::complex_span_of_units(m, &(0..k).collect::<Vec<_>>())?;
    let w_phi = RealSubspace::new(m, f.iter().chain(&h).cloned().collect())?;
    let w_perp = RealSubspace::new(m, f_perp.iter().chain(&h_perp).cloned().collect())?;
    Ok(WDecomposition { k, l, phi, n, w0, w_phi, w_perp, f, h, f_perp, h_perp })
}

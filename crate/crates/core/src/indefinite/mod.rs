//! Indefinite scalar products, anti de Sitter quadrics and the
//! `C^{1,n} -> R^{2,2n}` bridge.
//!
//! Real-model coordinates are stored 0-based; documentation refers to them
//! 1-based as `p_1, ..., p_{n+2}`, so `p_2` is `coords[1]` and `p_4` is
//! `coords[3]`. Complex-model points are realified by interleaving
//! `(Re z_k, Im z_k)`, which puts the two negative directions first.

mod rank;

pub use rank::{
    column_matrix, in_span, nullspace, numerical_rank, orthogonal_complement, orthonormal_basis, project_onto,
    RANK_GAP, RANK_TOL,
};

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Tolerance used when a point is accepted as lying on the quadric.
pub const QUADRIC_TOL: f64 = 1e-9;

/// Sign pattern `(neg, pos)` of a diagonal scalar product, negative directions first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub neg: usize,
    pub pos: usize,
}

impl Signature {
    pub const fn new(neg: usize, pos: usize) -> Self {
        Self { neg, pos }
    }

    pub const fn euclidean(dim: usize) -> Self {
        Self { neg: 0, pos: dim }
    }

    pub const fn dim(&self) -> usize {
        self.neg + self.pos
    }

    /// `+1` or `-1` for the given coordinate.
    pub fn sign(&self, index: usize) -> f64 {
        if index < self.neg {
            -1.0
        } else {
            1.0
        }
    }
}

/// `-sum_{i<neg} x_i y_i + sum_{i>=neg} x_i y_i`.
pub fn scalar_product(x: &DVector<f64>, y: &DVector<f64>, sig: Signature) -> Result<f64> {
    let dim = sig.dim();
    for v in [x, y] {
        if v.len() != dim {
            return Err(Error::Dimension { expected: dim, found: v.len() });
        }
    }
    Ok(x.iter().zip(y.iter()).enumerate().map(|(i, (a, b))| sig.sign(i) * a * b).sum())
}

/// `Re(-z_0 conj(w_0) + sum_{k>=1} z_k conj(w_k))`.
pub fn hermitian_real_part(z: &DVector<C64>, w: &DVector<C64>) -> Result<f64> {
    if z.len() != w.len() {
        return Err(Error::Dimension { expected: z.len(), found: w.len() });
    }
    if z.is_empty() {
        return Err(Error::Dimension { expected: 1, found: 0 });
    }
    let head = -(z[0] * w[0].conj()).re;
    let tail: f64 = z.iter().zip(w.iter()).skip(1).map(|(a, b)| (a * b.conj()).re).sum();
    Ok(head + tail)
}

/// Realify a complex vector as `(Re z_0, Im z_0, Re z_1, Im z_1, ...)`.
pub fn complex_to_real(z: &DVector<C64>) -> DVector<f64> {
    DVector::from_iterator(2 * z.len(), z.iter().flat_map(|c| [c.re, c.im]))
}

/// Inverse of [`complex_to_real`].
pub fn real_to_complex(x: &DVector<f64>) -> Result<DVector<C64>> {
    if !x.len().is_multiple_of(2) {
        return Err(Error::Dimension { expected: x.len() + 1, found: x.len() });
    }
    Ok(DVector::from_iterator(x.len() / 2, x.as_slice().chunks(2).map(|c| C64::new(c[0], c[1]))))
}

/// Which linear model an anti de Sitter point lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    /// `AdS^{n+1}` inside `R^{2,n}`.
    Real,
    /// `AdS^{2n+1}` inside `C^{1,n}`.
    Complex,
}

impl Model {
    /// Length of the coordinate vector (real or complex entries).
    pub const fn coord_len(self, n: usize) -> usize {
        match self {
            Model::Real => n + 2,
            Model::Complex => n + 1,
        }
    }

    /// Dimension of the realified ambient space.
    pub const fn real_dim(self, n: usize) -> usize {
        match self {
            Model::Real => n + 2,
            Model::Complex => 2 * (n + 1),
        }
    }

    /// Dimension of the quadric itself.
    pub const fn ads_dim(self, n: usize) -> usize {
        match self {
            Model::Real => n + 1,
            Model::Complex => 2 * n + 1,
        }
    }

    pub const fn signature(self, n: usize) -> Signature {
        match self {
            Model::Real => Signature::new(2, n),
            Model::Complex => Signature::new(2, 2 * n),
        }
    }

    pub const fn min_n(self) -> usize {
        match self {
            Model::Real => 3,
            Model::Complex => 2,
        }
    }
}

/// A point on the quadric `<p,p> = -1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdsPoint {
    coords: DVector<C64>,
    model: Model,
    n: usize,
}

impl AdsPoint {
    /// Build a point, checking length, reality (real model) and quadric membership.
    pub fn new(model: Model, n: usize, coords: DVector<C64>) -> Result<Self> {
        Self::with_tol(model, n, coords, QUADRIC_TOL)
    }

    pub fn with_tol(model: Model, n: usize, coords: DVector<C64>, tol: f64) -> Result<Self> {
        let len = model.coord_len(n);
        if coords.len() != len {
            return Err(Error::Dimension { expected: len, found: coords.len() });
        }
        if model == Model::Real && coords.iter().any(|c| c.im != 0.0) {
            return Err(Error::Argument("real-model point with imaginary part".into()));
        }
        let p = Self { coords, model, n };
        let scale = p.realified().norm_squared().max(1.0);
        let residual = p.quadric_residual();
        if residual > tol * scale {
            return Err(Error::Argument(format!("point is off the quadric: |<p,p> + 1| = {residual:e}")));
        }
        Ok(p)
    }

    /// Real-model point from 0-based coordinates `(p_1, ..., p_{n+2})`.
    pub fn real(coords: &[f64]) -> Result<Self> {
        let n = coords.len().checked_sub(2).ok_or(Error::Dimension { expected: 2, found: coords.len() })?;
        Self::new(Model::Real, n, DVector::from_iterator(coords.len(), coords.iter().map(|&x| C64::new(x, 0.0))))
    }

    /// Complex-model point `(z_0, ..., z_n)`.
    pub fn complex(coords: DVector<C64>) -> Result<Self> {
        let n = coords.len().checked_sub(1).ok_or(Error::Dimension { expected: 1, found: 0 })?;
        Self::new(Model::Complex, n, coords)
    }

    /// Rebuild from realified coordinates.
    pub fn from_realified(model: Model, n: usize, x: &DVector<f64>) -> Result<Self> {
        let coords = match model {
            Model::Real => x.map(|v| C64::new(v, 0.0)),
            Model::Complex => real_to_complex(x)?,
        };
        Self::new(model, n, coords)
    }

    /// The first basis vector: `e_1` in `R^{2,n}` or `e_0` in `C^{1,n}`.
    pub fn base_point(model: Model, n: usize) -> Self {
        let mut coords = DVector::zeros(model.coord_len(n));
        coords[0] = C64::new(1.0, 0.0);
        Self { coords, model, n }
    }

    pub fn coords(&self) -> &DVector<C64> {
        &self.coords
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 0-based real coordinate of a real-model point.
    pub fn x(&self, index: usize) -> f64 {
        self.coords[index].re
    }

    pub fn realified(&self) -> DVector<f64> {
        match self.model {
            Model::Real => self.coords.map(|c| c.re),
            Model::Complex => complex_to_real(&self.coords),
        }
    }

    pub fn signature(&self) -> Signature {
        self.model.signature(self.n)
    }

    /// `|<p,p> + 1|`.
    pub fn quadric_residual(&self) -> f64 {
        let x = self.realified();
        let q = scalar_product(&x, &x, self.signature()).expect("consistent lengths");
        (q + 1.0).abs()
    }

    /// Apply a matrix acting on the coordinate vector.
    pub fn transform(&self, mat: &DMatrix<C64>) -> Result<Self> {
        if mat.ncols() != self.coords.len() || mat.nrows() != self.coords.len() {
            return Err(Error::Dimension { expected: self.coords.len(), found: mat.ncols() });
        }
        let mut coords = mat * &self.coords;
        if self.model == Model::Real {
            coords.iter_mut().for_each(|c| c.im = 0.0);
        }
        Self::new(self.model, self.n, coords)
    }
}

/// Linear constraints on realified coordinates (0-based) for the sampler.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Constraint {
    pub equal: Vec<(usize, usize)>,
    pub zero: Vec<usize>,
}

impl Constraint {
    pub fn none() -> Self {
        Self::default()
    }

    /// `x_i = x_j` on 0-based realified coordinates.
    pub fn equal(i: usize, j: usize) -> Self {
        Self { equal: vec![(i, j)], zero: Vec::new() }
    }

    /// The singular locus `p_2 = p_4` of the real model.
    pub fn p2_eq_p4() -> Self {
        Self::equal(1, 3)
    }

    pub fn and_equal(mut self, i: usize, j: usize) -> Self {
        self.equal.push((i, j));
        self
    }

    pub fn and_zero(mut self, i: usize) -> Self {
        self.zero.push(i);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.equal.is_empty() && self.zero.is_empty()
    }

    /// Groups of coordinates forced equal, with zeroed groups removed.
    fn free_groups(&self, dim: usize) -> Result<Vec<Vec<usize>>> {
        let mut parent: Vec<usize> = (0..dim).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            parent[i] = r;
            r
        }
        for &(i, j) in &self.equal {
            if i >= dim || j >= dim {
                return Err(Error::Constraint(format!("index out of range in {i} = {j}")));
            }
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
        let mut zeroed = vec![false; dim];
        for &i in &self.zero {
            if i >= dim {
                return Err(Error::Constraint(format!("index {i} out of range")));
            }
            let root = find(&mut parent, i);
            zeroed[root] = true;
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; dim];
        for i in 0..dim {
            let root = find(&mut parent, i);
            if zeroed[root] {
                continue;
            }
            if slot[root] == usize::MAX {
                slot[root] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[root]].push(i);
        }
        Ok(groups)
    }
}

/// Derive an independent per-index seed from a suite seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.random()
}

/// Draw a point on the quadric satisfying `constraint`, deterministic in `seed`.
///
/// A Gaussian vector in the constrained subspace is moved along its most
/// timelike direction by solving a quadratic; discriminant failures resample.
pub fn sample_ads_point(n: usize, model: Model, seed: u64, constraint: &Constraint) -> Result<AdsPoint> {
    if n < model.min_n() {
        return Err(Error::Argument(format!("n = {n} below the minimum {} for the {model:?} model", model.min_n())));
    }
    let dim = model.real_dim(n);
    let sig = model.signature(n);
    let groups = constraint.free_groups(dim)?;
    // Gram matrix of the embedding is diagonal: groups have disjoint supports.
    let weights: Vec<f64> = groups.iter().map(|g| g.iter().map(|&i| sig.sign(i)).sum()).collect();
    let (timelike, &weight) = weights
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Constraint("every coordinate is fixed".into()))?;
    if weight >= 0.0 {
        return Err(Error::Constraint("constrained subspace has no timelike direction".into()));
    }
    let quad = |y: &[f64]| -> f64 { y.iter().zip(&weights).map(|(a, w)| w * a * a).sum() };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let mut y: Vec<f64> = (0..groups.len()).map(|_| rng.sample(StandardNormal)).collect();
        let flip: bool = rng.random();
        // Q(y + t d) = -1 with d the timelike group direction.
        let a = weight;
        let b = 2.0 * weight * y[timelike];
        let c = quad(&y) + 1.0;
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            continue;
        }
        let root = disc.sqrt();
        let t = if flip { (-b + root) / (2.0 * a) } else { (-b - root) / (2.0 * a) };
        y[timelike] += t;
        let q = quad(&y);
        if q >= 0.0 {
            continue;
        }
        let scale = (-q).sqrt().recip();
        let mut x = DVector::zeros(dim);
        for (g, val) in groups.iter().zip(&y) {
            for &i in g {
                x[i] = val * scale;
            }
        }
        return AdsPoint::from_realified(model, n, &x);
    }
    Err(Error::Constraint("sampler failed to reach the quadric".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn e(i: usize, dim: usize) -> DVector<f64> {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        v
    }

    fn ce(i: usize, len: usize, c: C64) -> DVector<C64> {
        let mut v = DVector::zeros(len);
        v[i] = c;
        v
    }

    #[test]
    fn scalar_product_examples() {
        let sig = Signature::new(2, 3);
        assert_eq!(scalar_product(&e(0, 5), &e(0, 5), sig).unwrap(), -1.0);
        assert_eq!(scalar_product(&e(0, 5), &e(2, 5), sig).unwrap(), 0.0);
        let x = DVector::from_vec(vec![1.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(scalar_product(&x, &x, sig).unwrap(), 0.0);
        assert!(matches!(scalar_product(&e(0, 4), &e(0, 5), sig), Err(Error::Dimension { .. })));
    }

    #[test]
    fn hermitian_examples() {
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        assert_eq!(hermitian_real_part(&ce(0, 3, one), &ce(0, 3, one)).unwrap(), -1.0);
        assert_eq!(hermitian_real_part(&ce(0, 3, one), &ce(0, 3, i)).unwrap(), 0.0);
        let ones = DVector::from_element(3, one);
        assert_eq!(hermitian_real_part(&ones, &ones).unwrap(), 1.0);
    }

    #[test]
    fn realification_layout() {
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        assert_eq!(complex_to_real(&ce(0, 3, one)), e(0, 6));
        assert_eq!(complex_to_real(&ce(1, 3, i)), e(3, 6));
    }

    #[test]
    fn realification_is_isometric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let z = DVector::from_fn(4, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
            let w = DVector::from_fn(4, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
            let lhs = hermitian_real_part(&z, &w).unwrap();
            let rhs = scalar_product(&complex_to_real(&z), &complex_to_real(&w), Signature::new(2, 6)).unwrap();
            assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn sampler_honours_singular_locus() {
        let p = sample_ads_point(3, Model::Real, 5, &Constraint::p2_eq_p4()).unwrap();
        assert!((p.x(1) - p.x(3)).abs() <= 1e-12);
        assert!(p.quadric_residual() <= 1e-12);
    }

    #[test]
    fn sampler_is_deterministic() {
        let a = sample_ads_point(3, Model::Real, 42, &Constraint::none()).unwrap();
        let b = sample_ads_point(3, Model::Real, 42, &Constraint::none()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampler_membership_over_many_draws() {
        for seed in 0..1000 {
            let model = if seed % 2 == 0 { Model::Real } else { Model::Complex };
            let p = sample_ads_point(3 + (seed as usize % 3), model, seed, &Constraint::none()).unwrap();
            assert!(p.quadric_residual() <= 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn sampler_rejects_unsatisfiable_constraints() {
        let c = Constraint::none().and_zero(0).and_zero(1);
        assert!(matches!(sample_ads_point(3, Model::Real, 1, &c), Err(Error::Constraint(_))));
        // p1 = p3 and p2 = p4 leaves only spacelike mass.
        let c = Constraint::equal(0, 2).and_equal(1, 3);
        assert!(matches!(sample_ads_point(3, Model::Real, 1, &c), Err(Error::Constraint(_))));
    }

    #[test]
    fn sampler_rejects_small_n() {
        assert!(sample_ads_point(2, Model::Real, 0, &Constraint::none()).is_err());
        assert!(sample_ads_point(1, Model::Complex, 0, &Constraint::none()).is_err());
    }

    #[test]
    fn point_construction_checks_quadric() {
        assert!(AdsPoint::real(&[1.0, 0.0, 0.0, 0.0, 0.0]).is_ok());
        assert!(AdsPoint::real(&[1.0, 1.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn projection_in_complex_plane() {
        // v = e2 + i e3 in C^2 realified, V = span_R{e2}
        let v = complex_to_real(&DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)]));
        let basis = vec![complex_to_real(&ce(0, 2, C64::new(1.0, 0.0)))];
        let p = project_onto(&v, &basis, Signature::euclidean(4)).unwrap();
        assert_relative_eq!(p, basis[0].clone(), epsilon = 1e-14);
    }
}

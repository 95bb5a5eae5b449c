use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::indefinite::{
    complex_to_real, in_span, orthogonal_complement, orthonormal_basis, real_to_complex, scalar_product, AdsPoint,
    Model, Signature, C64, RANK_TOL,
};

/// Symbolic membership tests that are not slices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Predicate {
    /// `q = lambda x` with `|lambda| = 1` and `x` real: `Im(q_j conj(q_k)) = 0`.
    SamePhase,
    /// `|sum_j eps_j q_j^2| = value` (at least 1, equal to 1 exactly on `SamePhase`).
    BilinearModulus(f64),
}

/// Shape of an orbit, in realified coordinates.
#[derive(Debug, Clone)]
pub enum Shape {
    /// `AdS` intersected with `point + span(subspace)`.
    AffineSlice {
        point: DVector<f64>,
        subspace: DMatrix<f64>,
    },
    /// Affine slice cut further by `functional . q > 0`.
    HalfSlice {
        point: DVector<f64>,
        subspace: DMatrix<f64>,
        functional: DVector<f64>,
    },
    /// `(sphere + W)` intersected with `AdS`: the component in `sphere_space`
    /// (the complement of `W`) has fixed norm `radius`. When the sphere space
    /// is a line the sign is fixed as well, given by `anchor`.
    SphereSlice {
        subspace: DMatrix<f64>,
        sphere_space: DMatrix<f64>,
        radius: f64,
        anchor: Option<DVector<f64>>,
    },
    /// Orbits of groups `S^1 H S`: with `lambda` the phase of `q_0 - q_1`,
    /// the component of `conj(lambda) q` in `normal` is fixed (up to norm
    /// unless `normal` is a line). `slice` spans the remaining directions.
    FibredSlice {
        slice: DMatrix<f64>,
        normal: DMatrix<f64>,
        anchor: DVector<f64>,
    },
    Predicate(Predicate),
}

/// A described orbit with its expected dimension and invariants.
#[derive(Debug, Clone)]
pub struct OrbitModel {
    pub model: Model,
    pub n: usize,
    pub shape: Shape,
    pub expected_dim: Option<usize>,
    pub invariants: Vec<(&'static str, f64)>,
}

const MEMBER_TOL: f64 = 1e-8;

fn frame_of(vectors: &[DVector<f64>], dim: usize) -> Result<DMatrix<f64>> {
    orthonormal_basis(vectors, dim, RANK_TOL)
}

impl OrbitModel {
    pub fn affine(p: &AdsPoint, point: DVector<f64>, subspace: &[DVector<f64>]) -> Result<Self> {
        let dim = point.len();
        Ok(Self {
            model: p.model(),
            n: p.n(),
            shape: Shape::AffineSlice { point, subspace: frame_of(subspace, dim)? },
            expected_dim: None,
            invariants: Vec::new(),
        })
    }

    pub fn half(p: &AdsPoint, subspace: &[DVector<f64>], functional: DVector<f64>) -> Result<Self> {
        let point = p.realified();
        let dim = point.len();
        Ok(Self {
            model: p.model(),
            n: p.n(),
            shape: Shape::HalfSlice { point, subspace: frame_of(subspace, dim)?, functional },
            expected_dim: None,
            invariants: Vec::new(),
        })
    }

    /// Sphere slice through `p` with the linear part `w`.
    pub fn sphere(p: &AdsPoint, w: &[DVector<f64>]) -> Result<Self> {
        let x = p.realified();
        let dim = x.len();
        let subspace = frame_of(w, dim)?;
        let sphere_space = orthogonal_complement(w, dim, RANK_TOL)?;
        let u = sphere_space.transpose() * &x;
        let radius = u.norm();
        let anchor = (sphere_space.ncols() == 1).then_some(u);
        Ok(Self {
            model: p.model(),
            n: p.n(),
            shape: Shape::SphereSlice { subspace, sphere_space, radius, anchor },
            expected_dim: None,
            invariants: vec![("radius", radius)],
        })
    }

    pub fn fibred(p: &AdsPoint, slice: &[DVector<f64>], normal: &[DVector<f64>]) -> Result<Self> {
        let dim = 2 * (p.n() + 1);
        let normal = frame_of(normal, dim)?;
        let anchor = fibre_component(p.coords(), &normal);
        let radius = anchor.norm();
        Ok(Self {
            model: p.model(),
            n: p.n(),
            shape: Shape::FibredSlice { slice: frame_of(slice, dim)?, normal, anchor },
            expected_dim: None,
            invariants: vec![("radius", radius)],
        })
    }

    pub fn predicate(p: &AdsPoint, pred: Predicate) -> Self {
        Self { model: p.model(), n: p.n(), shape: Shape::Predicate(pred), expected_dim: None, invariants: Vec::new() }
    }

    pub fn with_expected_dim(mut self, dim: usize) -> Self {
        self.expected_dim = Some(dim);
        self
    }

    pub fn with_invariant(mut self, name: &'static str, value: f64) -> Self {
        self.invariants.push((name, value));
        self
    }

    pub fn invariant(&self, name: &str) -> Option<f64> {
        self.invariants.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }

    /// Dimension of the linear part of a slice model.
    pub fn subspace_dim(&self) -> Option<usize> {
        match &self.shape {
            Shape::AffineSlice { subspace, .. }
            | Shape::HalfSlice { subspace, .. }
            | Shape::SphereSlice { subspace, .. }
            | Shape::FibredSlice { slice: subspace, .. } => Some(subspace.ncols()),
            Shape::Predicate(_) => None,
        }
    }

    pub fn signature(&self) -> Signature {
        self.model.signature(self.n)
    }

    /// Membership of `q` (already on the quadric).
    pub fn contains(&self, q: &AdsPoint) -> bool {
        if q.model() != self.model || q.n() != self.n {
            return false;
        }
        let x = q.realified();
        let scale = x.norm().max(1.0);
        match &self.shape {
            Shape::AffineSlice { point, subspace } => in_span(&(&x - point), subspace, MEMBER_TOL * scale),
            Shape::HalfSlice { point, subspace, functional } => {
                in_span(&(&x - point), subspace, MEMBER_TOL * scale) && functional.dot(&x) > 0.0
            }
            Shape::SphereSlice { sphere_space, radius, anchor, .. } => {
                let u = sphere_space.transpose() * &x;
                match anchor {
                    Some(a) => (&u - a).norm() <= MEMBER_TOL * scale,
                    None => (u.norm() - radius).abs() <= MEMBER_TOL * scale,
                }
            }
            Shape::FibredSlice { normal, anchor, .. } => {
                let m = fibre_component(q.coords(), normal);
                if anchor.len() == 1 {
                    (&m - anchor).norm() <= MEMBER_TOL * scale
                } else {
                    (m.norm() - anchor.norm()).abs() <= MEMBER_TOL * scale
                }
            }
            Shape::Predicate(Predicate::SamePhase) => {
                let c = q.coords();
                let big = c.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
                c.iter().all(|a| c.iter().all(|b| (a * b.conj()).im.abs() <= MEMBER_TOL * big.max(1.0)))
            }
            Shape::Predicate(Predicate::BilinearModulus(value)) => {
                (bilinear(q.coords()).norm() - value).abs() <= MEMBER_TOL * scale * scale
            }
        }
    }

    /// Draw a point of the modelled set.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<AdsPoint> {
        let sig = self.signature();
        for _ in 0..1000 {
            let candidate = match &self.shape {
                Shape::AffineSlice { point, subspace } => affine_draw(point, subspace, sig, rng),
                Shape::HalfSlice { point, subspace, functional } => {
                    affine_draw(point, subspace, sig, rng).filter(|x| functional.dot(x) > 0.0)
                }
                Shape::SphereSlice { subspace, sphere_space, radius, anchor } => {
                    sphere_draw(subspace, sphere_space, *radius, anchor.as_ref(), sig, rng)
                }
                Shape::FibredSlice { slice, normal, anchor } => fibred_draw(slice, normal, anchor, sig, rng),
                Shape::Predicate(Predicate::SamePhase) => Some(bilinear_draw(self.n, 1.0, rng)),
                Shape::Predicate(Predicate::BilinearModulus(value)) => {
                    (*value >= 1.0).then(|| bilinear_draw(self.n, *value, rng))
                }
            };
            if let Some(x) = candidate {
                if let Ok(p) = AdsPoint::from_realified(self.model, self.n, &x) {
                    return Ok(p);
                }
            }
        }
        Err(Error::Constraint("could not draw a point of the orbit model".into()))
    }
}

fn gaussian<R: Rng + ?Sized>(len: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(len, |_, _| rng.sample(StandardNormal))
}

/// Solve `<p + v, p + v> = -1` along a random line `v = v0 + t d` in the slice.
fn affine_draw<R: Rng + ?Sized>(
    point: &DVector<f64>,
    frame: &DMatrix<f64>,
    sig: Signature,
    rng: &mut R,
) -> Option<DVector<f64>> {
    let k = frame.ncols();
    if k == 0 {
        return Some(point.clone());
    }
    let v0 = frame * gaussian(k, rng) * 0.5;
    let d = frame * gaussian(k, rng);
    let ip = |a: &DVector<f64>, b: &DVector<f64>| scalar_product(a, b, sig).expect("lengths");
    let a = ip(&d, &d);
    let b = 2.0 * ip(&v0, &d) + 2.0 * ip(point, &d);
    let c = ip(&v0, &v0) + 2.0 * ip(point, &v0) + ip(point, point) + 1.0;
    let t = if a.abs() < 1e-12 {
        if b.abs() < 1e-12 {
            return None;
        }
        -c / b
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return None;
        }
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        (-b + sign * disc.sqrt()) / (2.0 * a)
    };
    let x = point + v0 + d * t;
    let residual = (ip(&x, &x) + 1.0).abs();
    (residual <= 1e-10 * x.norm_squared().max(1.0)).then_some(x)
}

fn sphere_draw<R: Rng + ?Sized>(
    w: &DMatrix<f64>,
    u_frame: &DMatrix<f64>,
    radius: f64,
    anchor: Option<&DVector<f64>>,
    sig: Signature,
    rng: &mut R,
) -> Option<DVector<f64>> {
    let u_coeffs = match anchor {
        Some(a) => a.clone(),
        None => {
            let g = gaussian(u_frame.ncols(), rng);
            let nrm = g.norm();
            if nrm < 1e-12 {
                return None;
            }
            g * (radius / nrm)
        }
    };
    let u = u_frame * u_coeffs;
    let wv = w * gaussian(w.ncols(), rng);
    let q = scalar_product(&wv, &wv, sig).ok()?;
    let target = -1.0 - scalar_product(&u, &u, sig).ok()?;
    if q >= -1e-12 || target >= 0.0 {
        return None;
    }
    Some(wv * (target / q).sqrt() + u)
}

/// Coordinates in `normal` of `conj(lambda) q`, `lambda` the phase of `q_0 - q_1`
/// (never zero on the quadric).
fn fibre_component(q: &DVector<C64>, normal: &DMatrix<f64>) -> DVector<f64> {
    let d = q[0] - q[1];
    let lambda = d / d.norm();
    normal.transpose() * complex_to_real(&q.map(|z| z * lambda.conj()))
}

/// `lambda (y + u)` with `y` in the slice, `Re(y_0 - y_1) > 0` and `u` the
/// normal part.
fn fibred_draw<R: Rng + ?Sized>(
    slice: &DMatrix<f64>,
    normal: &DMatrix<f64>,
    anchor: &DVector<f64>,
    sig: Signature,
    rng: &mut R,
) -> Option<DVector<f64>> {
    let coeffs = if anchor.len() == 1 {
        anchor.clone()
    } else {
        let g = gaussian(anchor.len(), rng);
        let nrm = g.norm();
        if nrm < 1e-12 {
            return None;
        }
        g * (anchor.norm() / nrm)
    };
    let u = normal * coeffs;
    let mut y = slice * gaussian(slice.ncols(), rng);
    let q = scalar_product(&y, &y, sig).ok()?;
    let target = -1.0 - u.norm_squared();
    if q >= -1e-12 {
        return None;
    }
    y *= (target / q).sqrt();
    if y[0] - y[2] < 0.0 {
        y = -y;
    }
    let lambda = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let z = real_to_complex(&(y + u)).ok()?;
    Some(complex_to_real(&z.map(|c| c * lambda)))
}

/// `sum_j eps_j q_j^2` with `eps = diag(-1, 1, ..., 1)`.
pub(crate) fn bilinear(q: &DVector<C64>) -> C64 {
    q.iter().enumerate().map(|(j, z)| if j == 0 { -z * z } else { z * z }).sum()
}

/// `lambda (cosh t a + i sinh t b)` with `a` a unit timelike vector, `b` a unit
/// spacelike vector orthogonal to it and `cosh 2t = value`.
fn bilinear_draw<R: Rng + ?Sized>(n: usize, value: f64, rng: &mut R) -> DVector<f64> {
    let lorentz = |x: &DVector<f64>, y: &DVector<f64>| -x[0] * y[0] + x.rows(1, n).dot(&y.rows(1, n));
    let mut a = gaussian(n + 1, rng);
    a[0] = (1.0 + a.rows(1, n).norm_squared()).sqrt() * if rng.random::<bool>() { 1.0 } else { -1.0 };
    let t = 0.5 * value.max(1.0).acosh();
    let mut b = gaussian(n + 1, rng);
    let c = lorentz(&a, &b);
    b += &a * c;
    let bb = lorentz(&b, &b);
    if bb > 1e-12 {
        b /= bb.sqrt();
    } else {
        b.fill(0.0);
    }
    let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let lambda = C64::from_polar(1.0, phase);
    let q = DVector::from_fn(n + 1, |j, _| lambda * C64::new(t.cosh() * a[j], t.sinh() * b[j]));
    complex_to_real(&q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(i: usize, dim: usize) -> DVector<f64> {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        v
    }

    #[test]
    fn affine_samples_lie_in_the_slice() {
        // singular slice {x1 = x3, x2 = x4} through e1 in R^{2,3}
        let p = AdsPoint::base_point(Model::Real, 3);
        let v = vec![e(0, 5) + e(2, 5), e(1, 5) + e(3, 5), e(4, 5)];
        let m = OrbitModel::affine(&p, p.realified(), &v).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let q = m.sample(&mut rng).unwrap();
            assert!(m.contains(&q));
        }
        assert!(!m.contains(&AdsPoint::real(&[0.0, 1.0, 0.0, 0.0, 0.0]).unwrap()));
    }

    #[test]
    fn bilinear_modulus_levels() {
        let p = AdsPoint::base_point(Model::Complex, 3);
        let m = OrbitModel::predicate(&p, Predicate::BilinearModulus(2.5));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let q = m.sample(&mut rng).unwrap();
            assert!(m.contains(&q));
            assert!((bilinear(q.coords()).norm() - 2.5).abs() < 1e-9);
        }
    }

    #[test]
    fn same_phase_predicate() {
        let p = AdsPoint::base_point(Model::Complex, 3);
        let m = OrbitModel::predicate(&p, Predicate::SamePhase);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            assert!(m.contains(&m.sample(&mut rng).unwrap()));
        }
    }
}

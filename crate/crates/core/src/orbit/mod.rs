//! Group-agnostic orbit computations: tangent spaces `h.p`, orbit dimension,
//! sampled cohomogeneity, fibre containment, invariant subspaces, geodesics
//! and tubes.

mod model;

pub(crate) use model::bilinear;
pub use model::{OrbitModel, Predicate, Shape};

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::indefinite::{
    complex_to_real, derive_seed, in_span, nullspace, numerical_rank, orthonormal_basis, sample_ads_point,
    scalar_product, AdsPoint, Constraint, Signature, C64, RANK_TOL,
};
use crate::lie::AlgebraElement;

pub use crate::lie::Subalgebra;

fn check_model(h: &Subalgebra, p: &AdsPoint) -> Result<()> {
    if h.kind().model() != p.model() || h.n() != p.n() {
        return Err(Error::Tag(format!(
            "{} (n = {}) does not act on the {:?} model with n = {}",
            h.kind(),
            h.n(),
            p.model(),
            p.n()
        )));
    }
    Ok(())
}

/// Realified `X p`.
pub fn act_real(x: &AlgebraElement, p: &AdsPoint) -> DVector<f64> {
    let v = x.apply(p.coords());
    match p.model() {
        crate::indefinite::Model::Real => v.map(|z| z.re),
        crate::indefinite::Model::Complex => complex_to_real(&v),
    }
}

/// Realify a coordinate vector in the model of `p`.
pub fn realify(p: &AdsPoint, v: &DVector<C64>) -> DVector<f64> {
    match p.model() {
        crate::indefinite::Model::Real => v.map(|z| z.re),
        crate::indefinite::Model::Complex => complex_to_real(v),
    }
}

/// Spanning vectors `{X p : X in basis(h)}` of the orbit tangent space.
pub fn tangent_space(h: &Subalgebra, p: &AdsPoint) -> Result<Vec<DVector<f64>>> {
    check_model(h, p)?;
    Ok(h.basis().iter().map(|x| act_real(x, p)).collect())
}

/// Largest `|<X p, p>| / |X p|` over the basis.
pub fn tangency_residual(h: &Subalgebra, p: &AdsPoint) -> Result<f64> {
    let pr = p.realified();
    let sig = p.signature();
    let mut worst: f64 = 0.0;
    for v in tangent_space(h, p)? {
        let nrm = v.norm();
        if nrm > 0.0 {
            worst = worst.max(scalar_product(&v, &pr, sig)?.abs() / nrm);
        }
    }
    Ok(worst)
}

/// Numerical rank of the tangent space.
pub fn orbit_dim(h: &Subalgebra, p: &AdsPoint, tol: f64) -> Result<usize> {
    let t = tangent_space(h, p)?;
    if t.is_empty() {
        return Ok(0);
    }
    numerical_rank(&t, tol)
}

/// Outcome of a sampled cohomogeneity estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct CohomogeneityReport {
    /// `dim AdS - max orbit dim`, when at least one sample succeeded.
    pub cohomogeneity: Option<usize>,
    pub ads_dim: usize,
    /// Distinct orbit dimensions observed.
    pub dims: BTreeSet<usize>,
    /// Per-sample failures as `(sample index, error)`.
    pub errors: Vec<(usize, Error)>,
}

/// Estimate the cohomogeneity of `h` from `samples` points.
///
/// Sample `i` is drawn from `derive_seed(seed, i)`, cycling through
/// `constraints` (unconstrained when empty), so results do not depend on
/// thread scheduling.
pub fn cohomogeneity(
    h: &Subalgebra,
    samples: usize,
    seed: u64,
    constraints: &[Constraint],
) -> Result<CohomogeneityReport> {
    if samples == 0 {
        return Err(Error::Argument("samples must be at least 1".into()));
    }
    let model = h.kind().model();
    let n = h.n();
    let none = [Constraint::none()];
    let constraints = if constraints.is_empty() { &none[..] } else { constraints };
    let outcomes: Vec<(usize, Result<usize>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let c = &constraints[i % constraints.len()];
            let dim =
                sample_ads_point(n, model, derive_seed(seed, i as u64), c).and_then(|p| orbit_dim(h, &p, RANK_TOL));
            (i, dim)
        })
        .collect();
    Ok(aggregate(model.ads_dim(n), outcomes))
}

/// Cohomogeneity over explicitly given points.
pub fn cohomogeneity_at(h: &Subalgebra, points: &[AdsPoint]) -> CohomogeneityReport {
    let ads_dim = h.kind().model().ads_dim(h.n());
    let outcomes: Vec<(usize, Result<usize>)> =
        points.par_iter().enumerate().map(|(i, p)| (i, orbit_dim(h, p, RANK_TOL))).collect();
    aggregate(ads_dim, outcomes)
}

fn aggregate(ads_dim: usize, outcomes: Vec<(usize, Result<usize>)>) -> CohomogeneityReport {
    let mut dims = BTreeSet::new();
    let mut errors = Vec::new();
    for (i, r) in outcomes {
        match r {
            Ok(d) => {
                dims.insert(d);
            }
            Err(e) => errors.push((i, e)),
        }
    }
    let cohomogeneity = dims.last().map(|&d| ads_dim.saturating_sub(d));
    CohomogeneityReport { cohomogeneity, ads_dim, dims, errors }
}

/// Whether `i p` lies in `h.p` (the Hopf fibre direction).
pub fn fiber_contained(h: &Subalgebra, p: &AdsPoint) -> Result<bool> {
    if p.model() != crate::indefinite::Model::Complex {
        return Err(Error::Unsupported("fibre containment needs the complex model".into()));
    }
    let t = tangent_space(h, p)?;
    let ip = complex_to_real(&p.coords().map(|z| z * C64::new(0.0, 1.0)));
    if t.is_empty() {
        return Ok(false);
    }
    let frame = orthonormal_basis(&t, ip.len(), RANK_TOL)?;
    Ok(in_span(&ip, &frame, 1e-8))
}

/// Whether `X w` lies in `span_R(W)` for every basis `X` of `h` and `w` in `W`.
pub fn invariant_subspace(h: &Subalgebra, w: &[DVector<C64>]) -> Result<bool> {
    if w.is_empty() {
        return Ok(true);
    }
    let real_model = h.kind().model() == crate::indefinite::Model::Real;
    let re = |v: &DVector<C64>| {
        if real_model {
            v.map(|z| z.re)
        } else {
            complex_to_real(v)
        }
    };
    let vecs: Vec<DVector<f64>> = w.iter().map(re).collect();
    let dim = vecs[0].len();
    let frame = orthonormal_basis(&vecs, dim, RANK_TOL)?;
    for x in h.basis() {
        for v in w {
            if v.len() != x.mat().ncols() {
                return Err(Error::Dimension { expected: x.mat().ncols(), found: v.len() });
            }
            if !in_span(&re(&x.apply(v)), &frame, 1e-9) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `cosh(r) p + sinh(r) xi` for a unit spacelike `xi` orthogonal to `p`.
pub fn geodesic_exp(p: &AdsPoint, xi: &DVector<C64>, r: f64) -> Result<AdsPoint> {
    if xi.len() != p.coords().len() {
        return Err(Error::Dimension { expected: p.coords().len(), found: xi.len() });
    }
    let x = realify(p, xi);
    let sig = p.signature();
    let pr = p.realified();
    let ortho = scalar_product(&pr, &x, sig)?;
    let unit = scalar_product(&x, &x, sig)?;
    if ortho.abs() > 1e-9 || (unit - 1.0).abs() > 1e-9 {
        return Err(Error::Argument(format!(
            "direction must be a unit spacelike normal: <p,xi> = {ortho:e}, <xi,xi> = {unit}"
        )));
    }
    let coords = p.coords().map(|z| z * r.cosh()) + xi.map(|z| z * r.sinh());
    AdsPoint::with_tol(p.model(), p.n(), coords, 1e-9)
}

/// Basis of the normal space of `h.p` inside `T_p AdS` (realified vectors).
pub fn normal_space(h: &Subalgebra, p: &AdsPoint) -> Result<Vec<DVector<f64>>> {
    let sig = p.signature();
    let eps = |v: &DVector<f64>| DVector::from_fn(v.len(), |i, _| sig.sign(i) * v[i]);
    let mut rows = vec![eps(&p.realified()).transpose()];
    rows.extend(tangent_space(h, p)?.iter().map(|t| eps(t).transpose()));
    let a = DMatrix::from_rows(&rows);
    let ns = nullspace(&a, RANK_TOL)?;
    Ok(ns.column_iter().map(|c| c.into_owned()).collect())
}

/// Cholesky-orthonormalise `vecs` under `sig`; fails unless the induced form
/// is positive definite.
fn form_orthonormal(vecs: &[DVector<f64>], sig: Signature) -> Result<Vec<DVector<f64>>> {
    let k = vecs.len();
    let gram = DMatrix::from_fn(k, k, |i, j| scalar_product(&vecs[i], &vecs[j], sig).expect("lengths"));
    let chol = gram.cholesky().ok_or(Error::IndefiniteNormal)?;
    let linv = chol.l().try_inverse().ok_or_else(|| Error::Numeric("singular Gram factor".into()))?;
    Ok((0..k)
        .map(|i| {
            let mut v = DVector::zeros(vecs[0].len());
            for j in 0..k {
                v.axpy(linv[(i, j)], &vecs[j], 1.0);
            }
            v
        })
        .collect())
}

/// Points at distance `r` from the singular orbit through `singular_p`
/// along random unit normals.
pub fn tube_sample(h: &Subalgebra, singular_p: &AdsPoint, r: f64, count: usize, seed: u64) -> Result<Vec<AdsPoint>> {
    let ads_dim = singular_p.model().ads_dim(singular_p.n());
    let d = orbit_dim(h, singular_p, RANK_TOL)?;
    if d + 1 >= ads_dim {
        return Err(Error::Precondition(format!(
            "orbit through the point has dimension {d}; not singular in AdS of dimension {ads_dim}"
        )));
    }
    let normals = normal_space(h, singular_p)?;
    let sig = singular_p.signature();
    let frame = form_orthonormal(&normals, sig)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let c: Vec<f64> = (0..frame.len()).map(|_| rng.sample(StandardNormal)).collect();
        let nrm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm < 1e-12 {
            continue;
        }
        let mut xi = DVector::zeros(frame[0].len());
        for (ci, f) in c.iter().zip(&frame) {
            xi.axpy(ci / nrm, f, 1.0);
        }
        let xi_c = match singular_p.model() {
            crate::indefinite::Model::Real => xi.map(|x| C64::new(x, 0.0)),
            crate::indefinite::Model::Complex => crate::indefinite::real_to_complex(&xi)?,
        };
        out.push(geodesic_exp(singular_p, &xi_c, r)?);
    }
    Ok(out)
}

/// Equality of the tangent spaces of two algebras at `p`.
pub fn same_tangent_space(a: &Subalgebra, b: &Subalgebra, p: &AdsPoint) -> Result<bool> {
    let ta = tangent_space(a, p)?;
    let tb = tangent_space(b, p)?;
    let dim = p.realified().len();
    let fa = orthonormal_basis(&ta, dim, RANK_TOL)?;
    let fb = orthonormal_basis(&tb, dim, RANK_TOL)?;
    Ok(fa.ncols() == fb.ncols() && tb.iter().all(|v| in_span(v, &fa, 1e-8)) && ta.iter().all(|v| in_span(v, &fb, 1e-8)))
}

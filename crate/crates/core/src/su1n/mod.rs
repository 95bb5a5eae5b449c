//! `U(1,n)` acting on `AdS^{2n+1}`: block builder, closed-form exponentials of
//! `A`, `N` and `S`, the case subalgebras, orbit models and slice solvers.

mod cases;

pub use cases::{
    case_orbit_model, case_subalgebra, compact_basis, extract_c, f_c, fn_algebra, fn_cohomogeneity_one,
    fn_orbit_equivalence_check, k0_traceless_block, k0_u1n, nilradical, normalizer_in_k, random_f, s_algebra,
    singular_orbit_dim, singular_subspace, Case, CaseDescriptor,
};

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::indefinite::{complex_to_real, AdsPoint, Model, C64};
use crate::kaehler::{build_w_decomposition, RealSubspace};
use crate::lie::{AlgebraElement, AlgebraKind, GroupElement};
use crate::orbit::OrbitModel;
use crate::roots::{su_2alpha, su_alpha, su_flat_generator};

const SKEW_TOL: f64 = 1e-12;
/// Below this `|x|` the coefficient functions switch to Taylor polynomials.
pub const SERIES_CUTOFF: f64 = 1e-4;
const SLICE_TOL: f64 = 1e-9;

/// `ceil(t, v, X)`: top-left `i t`, top row `v^*`, first column `v`, lower
/// block `X`. Tagged `su(1,n)` when `i t + tr X = 0`, otherwise `u(1,n)`.
pub fn ceil(t: f64, v: &[C64], x: &DMatrix<C64>) -> Result<AlgebraElement> {
    let n = v.len();
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::Dimension { expected: n, found: x.nrows().max(x.ncols()) });
    }
    let scale = x.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if (x + x.adjoint()).iter().any(|z| z.norm() > SKEW_TOL * scale) {
        return Err(Error::Argument("lower block is not skew-hermitian".into()));
    }
    let mut m = DMatrix::zeros(n + 1, n + 1);
    m[(0, 0)] = C64::new(0.0, t);
    for j in 0..n {
        m[(0, j + 1)] = v[j].conj();
        m[(j + 1, 0)] = v[j];
    }
    m.view_mut((1, 1), (n, n)).copy_from(x);
    let trace = C64::new(0.0, t) + x.trace();
    let kind = if trace.norm() <= SKEW_TOL * scale.max(t.abs()) { AlgebraKind::Su1n } else { AlgebraKind::U1n };
    AlgebraElement::new(kind, n, m)
}

/// `sinh(x) / x`.
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        let y = x * x;
        1.0 + y / 6.0 * (1.0 + y / 20.0 * (1.0 + y / 42.0 * (1.0 + y / 72.0 * (1.0 + y / 110.0))))
    } else {
        x.sinh() / x
    }
}

/// `(cosh(x) - 1) / x^2`.
pub fn coshm(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        let y = x * x;
        0.5 * (1.0 + y / 12.0 * (1.0 + y / 30.0 * (1.0 + y / 56.0 * (1.0 + y / 90.0 * (1.0 + y / 132.0)))))
    } else {
        let h = (x / 2.0).sinh() / x;
        2.0 * h * h
    }
}

/// `(e^x - 1) / x`.
pub fn expm1c(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        1.0 + x / 2.0 * (1.0 + x / 3.0 * (1.0 + x / 4.0 * (1.0 + x / 5.0 * (1.0 + x / 6.0))))
    } else {
        x.exp_m1() / x
    }
}

/// `(1 - e^{-x}) / x`.
pub fn one_minus_exp_neg_c(x: f64) -> f64 {
    expm1c(-x)
}

/// Parameters of an element of `s = a + w + g_{2 alpha}`: flat coordinate
/// `x`, `g_{2 alpha}` coordinate `mu` and `g_alpha` vector `omega` in `C^{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SElement {
    pub x: f64,
    pub mu: f64,
    pub omega: DVector<C64>,
}

/// Element kinds with a closed-form exponential.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    A { x: f64 },
    N { mu: f64, v: DVector<C64> },
    S(SElement),
}

fn check_tail(len: usize, n: usize) -> Result<()> {
    if len + 1 != n {
        return Err(Error::Dimension { expected: n - 1, found: len });
    }
    Ok(())
}

impl ClosedForm {
    /// The `su(1,n)` element being exponentiated.
    pub fn algebra_element(&self, n: usize) -> Result<AlgebraElement> {
        let kind = AlgebraKind::Su1n;
        if n < 2 {
            return Err(Error::Argument("n must be at least 2".into()));
        }
        match self {
            Self::A { x } => Ok(su_flat_generator(kind, n).scale(*x)),
            Self::N { mu, v } => {
                check_tail(v.len(), n)?;
                su_2alpha(kind, *mu, n).add(&su_alpha(kind, v.as_slice(), n))
            }
            Self::S(s) => {
                check_tail(s.omega.len(), n)?;
                su_flat_generator(kind, n).scale(s.x).add(&su_2alpha(kind, s.mu, n))?.add(&su_alpha(
                    kind,
                    s.omega.as_slice(),
                    n,
                ))
            }
        }
    }
}

/// Closed-form exponential in `SU(1,n)`.
pub fn exp_closed(form: &ClosedForm, n: usize) -> Result<GroupElement> {
    if n < 2 {
        return Err(Error::Argument("n must be at least 2".into()));
    }
    let size = n + 1;
    let re = |x: f64| C64::new(x, 0.0);
    let mut m = DMatrix::<C64>::identity(size, size);
    match form {
        ClosedForm::A { x } => {
            m[(0, 0)] = re(x.cosh());
            m[(1, 1)] = re(x.cosh());
            m[(0, 1)] = re(x.sinh());
            m[(1, 0)] = re(x.sinh());
        }
        ClosedForm::N { mu, v } => {
            check_tail(v.len(), n)?;
            let corner = C64::new(0.5 * v.norm_squared(), *mu);
            for r in 0..2 {
                m[(r, 0)] += corner;
                m[(r, 1)] -= corner;
                for j in 0..n - 1 {
                    m[(r, j + 2)] = v[j].conj();
                }
            }
            for j in 0..n - 1 {
                m[(j + 2, 0)] = v[j];
                m[(j + 2, 1)] = -v[j];
            }
        }
        ClosedForm::S(s) => {
            check_tail(s.omega.len(), n)?;
            let x = s.x;
            let half_a = C64::new(s.omega.norm_squared() * coshm(x), s.mu * sinhc(x));
            let (ch, sh) = (x.cosh(), x.sinh());
            m[(0, 0)] = re(ch) + half_a;
            m[(1, 0)] = re(sh) + half_a;
            m[(0, 1)] = re(sh) - half_a;
            m[(1, 1)] = re(ch) - half_a;
            let down = one_minus_exp_neg_c(x);
            let up = expm1c(x);
            for j in 0..n - 1 {
                let w = s.omega[j];
                m[(j + 2, 0)] = w * down;
                m[(j + 2, 1)] = -w * down;
                m[(0, j + 2)] = w.conj() * up;
                m[(1, j + 2)] = w.conj() * up;
            }
        }
    }
    GroupElement::new(AlgebraKind::Su1n, n, m)
}

/// Shape of `w` inside `g_alpha = C^{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SGeometry {
    /// `w = C^{n-r-1} + R^r`, `w^perp = i R^r` totally real.
    TotallyReal { r: usize },
    /// `w = w_0 + w_phi` with `w^perp` of constant Kaehler angle `phi`.
    KaehlerAngle { k: usize, l: usize, phi: f64 },
}

impl SGeometry {
    pub fn validate(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::Argument("n must be at least 2".into()));
        }
        match *self {
            Self::TotallyReal { r } if r == 0 || r > n - 1 => {
                Err(Error::Argument(format!("r = {r} outside 1..={}", n - 1)))
            }
            Self::TotallyReal { .. } => Ok(()),
            Self::KaehlerAngle { k, l, phi } => build_w_decomposition(k, l, phi, n).map(|_| ()),
        }
    }

    /// `w` as a real subspace of `C^{n-1}`.
    pub fn w(&self, n: usize) -> Result<RealSubspace> {
        self.validate(n)?;
        let m = n - 1;
        match *self {
            Self::TotallyReal { r } => {
                let complex = RealSubspace::complex_span_of_units(m, &(0..m - r).collect::<Vec<_>>())?;
                let real = RealSubspace::real_span_of_units(m, &(m - r..m).collect::<Vec<_>>())?;
                complex.sum(&real)
            }
            Self::KaehlerAngle { k, l, phi } => build_w_decomposition(k, l, phi, n)?.w(),
        }
    }

    /// Orthogonal complement of `w` in `C^{n-1}`.
    pub fn w_perp(&self, n: usize) -> Result<RealSubspace> {
        self.validate(n)?;
        let m = n - 1;
        match *self {
            Self::TotallyReal { r } => RealSubspace::new(
                m,
                (m - r..m)
                    .map(|j| {
                        let mut v = DVector::zeros(m);
                        v[j] = C64::new(0.0, 1.0);
                        v
                    })
                    .collect(),
            ),
            Self::KaehlerAngle { k, l, phi } => Ok(build_w_decomposition(k, l, phi, n)?.w_perp),
        }
    }

    /// Element with parameters `(x, mu, z, u, v)`; `v` is empty for the
    /// totally real shape.
    pub fn element(&self, n: usize, x: f64, mu: f64, z: &[C64], u: &[f64], v: &[f64]) -> Result<SElement> {
        self.validate(n)?;
        let m = n - 1;
        let mut omega = DVector::zeros(m);
        match *self {
            Self::TotallyReal { r } => {
                if z.len() != m - r || u.len() != r || !v.is_empty() {
                    return Err(Error::Argument(format!("expected z in C^{}, u in R^{r} and no v", m - r)));
                }
                for (j, &zj) in z.iter().enumerate() {
                    omega[j] = zj;
                }
                for (j, &uj) in u.iter().enumerate() {
                    omega[m - r + j] = C64::new(uj, 0.0);
                }
            }
            Self::KaehlerAngle { k, l, phi } => {
                if z.len() != k || u.len() != l || v.len() != l {
                    return Err(Error::Argument(format!("expected z in C^{k}, u and v in R^{l}")));
                }
                let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
                for (j, &zj) in z.iter().enumerate() {
                    omega[j] = zj;
                }
                for j in 0..l {
                    omega[k + j] = C64::new(u[j], v[j]) * c;
                    omega[k + l + j] = C64::new(v[j], u[j]) * s;
                }
            }
        }
        Ok(SElement { x, mu, omega })
    }

    /// Random element with `x, mu` in `[-2, 2]` and the remaining
    /// coordinates in `[-1, 1]`.
    pub fn random_element<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<SElement> {
        self.validate(n)?;
        let (zl, ul, vl) = match *self {
            Self::TotallyReal { r } => (n - 1 - r, r, 0),
            Self::KaehlerAngle { k, l, .. } => (k, l, l),
        };
        let mut u1 = |len: usize| -> Vec<f64> { (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect() };
        let zr = u1(zl);
        let zi = u1(zl);
        let z: Vec<C64> = zr.iter().zip(&zi).map(|(&a, &b)| C64::new(a, b)).collect();
        let u = u1(ul);
        let v = u1(vl);
        let x = rng.random_range(-2.0..=2.0);
        let mu = rng.random_range(-2.0..=2.0);
        self.element(n, x, mu, &z, &u, &v)
    }
}

/// Slice solvers are available for these groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SliceKind {
    N,
    S(SGeometry),
}

fn require_complex(p: &AdsPoint) -> Result<()> {
    if p.model() != Model::Complex {
        return Err(Error::Tag("U(1,n) acts on the complex model".into()));
    }
    Ok(())
}

fn embed_tail(v: &DVector<C64>) -> DVector<C64> {
    let mut out = DVector::zeros(v.len() + 2);
    out.rows_mut(2, v.len()).copy_from(v);
    out
}

fn unit(len: usize, j: usize, z: C64) -> DVector<C64> {
    let mut v = DVector::zeros(len);
    v[j] = z;
    v
}

/// Euclidean distance of `v` from the subspace.
fn outside(space: &RealSubspace, v: &DVector<C64>) -> f64 {
    (v - space.project(v)).norm()
}

/// `p = lambda (x0 e_0 + u)` with `|lambda| = 1`, `x0 > 0`, `u` in `w^perp`.
struct SBase {
    lambda: C64,
    x0: f64,
    u: DVector<C64>,
}

fn s_base(geom: &SGeometry, p: &AdsPoint) -> Result<SBase> {
    require_complex(p)?;
    let n = p.n();
    let c = p.coords();
    let scale = c.norm();
    if c[1].norm() > SLICE_TOL * scale || c[0].norm() <= SLICE_TOL * scale {
        return Err(Error::Argument(
            "S orbits are modelled through points lambda (x0 e_0 + u) with u in w^perp".into(),
        ));
    }
    let lambda = c[0] / c[0].norm();
    let u = c.rows(2, n - 1).map(|z| z * lambda.conj());
    if outside(&geom.w_perp(n)?, &u) > SLICE_TOL * scale {
        return Err(Error::Argument("tail of the point is not in w^perp".into()));
    }
    Ok(SBase { lambda, x0: c[0].norm(), u })
}

/// The point `lambda (x0 e_0 + u)` on the quadric, `u` in `w^perp`.
pub fn s_slice_point(geom: &SGeometry, n: usize, lambda: C64, u: &DVector<C64>) -> Result<AdsPoint> {
    let perp = geom.w_perp(n)?;
    if u.len() + 1 != n {
        return Err(Error::Dimension { expected: n - 1, found: u.len() });
    }
    if outside(&perp, u) > SLICE_TOL * u.norm().max(1.0) {
        return Err(Error::Argument("u is not in w^perp".into()));
    }
    let mut c = embed_tail(u);
    c[0] = C64::new((1.0 + u.norm_squared()).sqrt(), 0.0);
    AdsPoint::complex(c.map(|z| z * lambda / lambda.norm()))
}

/// The totally real and constant-angle shapes available at `n`, with angle
/// `phi` for the latter.
pub fn geometries(n: usize, phi: f64) -> Vec<SGeometry> {
    let mut out: Vec<SGeometry> = (1..n).map(|r| SGeometry::TotallyReal { r }).collect();
    for l in 1..=n.saturating_sub(1) / 2 {
        out.push(SGeometry::KaehlerAngle { k: n - 1 - 2 * l, l, phi });
    }
    out.into_iter().filter(|g| g.validate(n).is_ok()).collect()
}

/// Realified spanning vectors of `V = span_R{e_0, e_1, i(e_0 + e_1)} + w`.
fn s_slice_vectors(geom: &SGeometry, n: usize, lambda: C64) -> Result<Vec<DVector<f64>>> {
    let size = n + 1;
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let mut v = vec![unit(size, 0, one), unit(size, 1, one), unit(size, 0, i) + unit(size, 1, i)];
    v.extend(geom.w(n)?.basis().iter().map(embed_tail));
    Ok(v.iter().map(|x| complex_to_real(&x.map(|z| z * lambda))).collect())
}

/// Orbit of `N` or `S` through `p`.
pub fn slice_orbit_model(kind: SliceKind, p: &AdsPoint) -> Result<OrbitModel> {
    require_complex(p)?;
    let n = p.n();
    let size = n + 1;
    match kind {
        SliceKind::N => {
            let one = C64::new(1.0, 0.0);
            let i = C64::new(0.0, 1.0);
            let mut v = vec![unit(size, 0, one) + unit(size, 1, one), unit(size, 0, i) + unit(size, 1, i)];
            for j in 2..size {
                v.push(unit(size, j, one));
                v.push(unit(size, j, i));
            }
            let real: Vec<DVector<f64>> = v.iter().map(complex_to_real).collect();
            Ok(OrbitModel::affine(p, p.realified(), &real)?.with_expected_dim(2 * n - 1))
        }
        SliceKind::S(geom) => {
            let base = s_base(&geom, p)?;
            let vecs = s_slice_vectors(&geom, n, base.lambda)?;
            let mut functional = DVector::zeros(2 * size);
            functional[0] = base.lambda.re;
            functional[1] = base.lambda.im;
            let dim = vecs.len() - 1;
            Ok(OrbitModel::half(p, &vecs, functional)?
                .with_expected_dim(dim)
                .with_invariant("x0", base.x0)
                .with_invariant("u_norm", base.u.norm()))
        }
    }
}

/// Parameters of the element of `N` or `S` moving `p` to `q`.
pub fn solve_slice_element(kind: SliceKind, p: &AdsPoint, q: &AdsPoint) -> Result<ClosedForm> {
    require_complex(p)?;
    require_complex(q)?;
    if p.n() != q.n() {
        return Err(Error::Dimension { expected: p.n(), found: q.n() });
    }
    match kind {
        SliceKind::N => solve_n(p, q),
        SliceKind::S(geom) => solve_s(&geom, p, q),
    }
}

fn solve_n(p: &AdsPoint, q: &AdsPoint) -> Result<ClosedForm> {
    let n = p.n();
    let (pc, qc) = (p.coords(), q.coords());
    let delta = qc - pc;
    let scale = qc.norm().max(pc.norm());
    if (delta[0] - delta[1]).norm() > SLICE_TOL * scale {
        return Err(Error::Unreachable("q - p has unequal e_0 and e_1 components".into()));
    }
    let d = pc[0] - pc[1];
    let v = delta.rows(2, n - 1).map(|z| z / d);
    let pt = pc.rows(2, n - 1);
    let vp: C64 = v.iter().zip(pt.iter()).map(|(a, b)| a.conj() * b).sum();
    let mu = ((delta[0] - vp) / d).im;
    Ok(ClosedForm::N { mu, v })
}

fn solve_s(geom: &SGeometry, p: &AdsPoint, q: &AdsPoint) -> Result<ClosedForm> {
    let n = p.n();
    let base = s_base(geom, p)?;
    let scale = q.coords().norm();
    let mut r = q.coords().map(|z| z * base.lambda.conj());
    for j in 0..n - 1 {
        r[j + 2] -= base.u[j];
    }
    let tail = r.rows(2, n - 1).into_owned();
    if (r[0] - r[1]).im.abs() > SLICE_TOL * scale || outside(&geom.w(n)?, &tail) > SLICE_TOL * scale {
        return Err(Error::Unreachable("q is not in p + lambda V".into()));
    }
    let gap = (r[0] - r[1]).re;
    if gap <= 0.0 {
        return Err(Error::WrongHalf);
    }
    let x = -(gap / base.x0).ln();
    let omega = tail.map(|z| z / (base.x0 * one_minus_exp_neg_c(x)));
    let pairing: C64 = omega.iter().zip(base.u.iter()).map(|(w, u)| w.conj() * u).sum();
    let t = expm1c(x) * pairing.im;
    let mu = (r[0].im - t) / (base.x0 * sinhc(x));
    Ok(ClosedForm::S(SElement { x, mu, omega }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::exp_series;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ceil_tags_by_trace() {
        let z = DMatrix::zeros(2, 2);
        let flat = ceil(0.0, &[c(1.0, 0.0), c(0.0, 0.0)], &z).unwrap();
        assert_eq!(flat.kind(), AlgebraKind::Su1n);
        assert_eq!(flat.mat(), su_flat_generator(AlgebraKind::Su1n, 2).mat());

        let mut x = DMatrix::zeros(2, 2);
        x[(0, 0)] = c(0.0, -1.0);
        let k = ceil(1.0, &[c(0.0, 0.0); 2], &x).unwrap();
        assert_eq!(k.kind(), AlgebraKind::Su1n);
        assert!(k.validate(1e-12));

        let u = ceil(1.0, &[c(0.0, 0.0); 2], &z).unwrap();
        assert_eq!(u.kind(), AlgebraKind::U1n);
        assert!(u.validate(1e-12));
    }

    #[test]
    fn ceil_rejects_non_skew_block() {
        let mut x = DMatrix::zeros(2, 2);
        x[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(ceil(0.0, &[c(0.0, 0.0); 2], &x), Err(Error::Argument(_))));
    }

    #[test]
    fn coefficient_functions_are_continuous_at_cutoff() {
        for f in [sinhc, coshm, expm1c, one_minus_exp_neg_c] {
            let below = f(SERIES_CUTOFF * (1.0 - 1e-9));
            let above = f(SERIES_CUTOFF * (1.0 + 1e-9));
            assert!((below - above).abs() < 1e-12);
        }
        assert_eq!(sinhc(0.0), 1.0);
        assert_eq!(coshm(0.0), 0.5);
    }

    #[test]
    fn a_at_zero_is_identity() {
        let g = exp_closed(&ClosedForm::A { x: 0.0 }, 3).unwrap();
        assert_eq!(g.mat(), &DMatrix::identity(4, 4));
    }

    #[test]
    fn n_with_unit_mu() {
        let g = exp_closed(&ClosedForm::N { mu: 1.0, v: DVector::zeros(2) }, 3).unwrap();
        let i = c(0.0, 1.0);
        let mut expected = DMatrix::identity(4, 4);
        expected[(0, 0)] += i;
        expected[(0, 1)] -= i;
        expected[(1, 0)] += i;
        expected[(1, 1)] -= i;
        assert_eq!(g.mat(), &expected);
    }

    #[test]
    fn closed_forms_match_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=4 {
            let geoms: Vec<SGeometry> = (1..n).map(|r| SGeometry::TotallyReal { r }).collect();
            for geom in geoms {
                for _ in 0..10 {
                    let s = geom.random_element(n, &mut rng).unwrap();
                    let form = ClosedForm::S(s);
                    let series = exp_series(&form.algebra_element(n).unwrap(), 1e-16).unwrap();
                    let closed = exp_closed(&form, n).unwrap();
                    assert!(closed.max_deviation(series.mat()) < 1e-10);
                    assert!(closed.validate(1e-9));
                }
            }
        }
    }

    #[test]
    fn s_near_zero_x_uses_series() {
        let geom = SGeometry::TotallyReal { r: 1 };
        let s = geom.element(3, 1e-7, 0.3, &[c(0.2, -0.1)], &[0.4], &[]).unwrap();
        let form = ClosedForm::S(s);
        let series = exp_series(&form.algebra_element(3).unwrap(), 1e-16).unwrap();
        assert!(exp_closed(&form, 3).unwrap().max_deviation(series.mat()) < 1e-13);
    }

    #[test]
    fn s_solver_on_the_flat_orbit() {
        let p = AdsPoint::base_point(Model::Complex, 3);
        let mut q = DVector::zeros(4);
        q[0] = c(1f64.cosh(), 0.0);
        q[1] = c(1f64.sinh(), 0.0);
        let q = AdsPoint::complex(q).unwrap();
        let geom = SGeometry::TotallyReal { r: 1 };
        match solve_slice_element(SliceKind::S(geom), &p, &q).unwrap() {
            ClosedForm::S(s) => {
                assert!((s.x - 1.0).abs() < 1e-12);
                assert!(s.mu.abs() < 1e-12);
                assert!(s.omega.norm() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn identity_solutions() {
        let p = AdsPoint::base_point(Model::Complex, 3);
        assert_eq!(solve_slice_element(SliceKind::N, &p, &p).unwrap(), ClosedForm::N { mu: 0.0, v: DVector::zeros(2) });
    }

    #[test]
    fn s_solver_wrong_half() {
        let p = AdsPoint::base_point(Model::Complex, 2);
        let q = AdsPoint::complex(DVector::from_vec(vec![c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])).unwrap();
        let geom = SGeometry::TotallyReal { r: 1 };
        assert_eq!(solve_slice_element(SliceKind::S(geom), &p, &q), Err(Error::WrongHalf));
    }

    #[test]
    fn slice_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 3;
        let base = AdsPoint::base_point(Model::Complex, n);
        let n_model = slice_orbit_model(SliceKind::N, &base).unwrap();
        for _ in 0..20 {
            let q = n_model.sample(&mut rng).unwrap();
            let sol = solve_slice_element(SliceKind::N, &base, &q).unwrap();
            let moved = exp_closed(&sol, n).unwrap().apply(base.coords());
            assert!((moved - q.coords()).norm() < 1e-9);
        }
        let geom = SGeometry::KaehlerAngle { k: 0, l: 1, phi: 1.0 };
        let u = geom.w_perp(n).unwrap().basis()[0].map(|z| z * 0.7);
        let lambda = C64::from_polar(1.0, 0.4);
        let x0 = (1.0 + u.norm_squared()).sqrt();
        let mut pc = embed_tail(&u);
        pc[0] = c(x0, 0.0);
        let p = AdsPoint::complex(pc.map(|z| z * lambda)).unwrap();
        let model = slice_orbit_model(SliceKind::S(geom), &p).unwrap();
        for _ in 0..20 {
            let q = model.sample(&mut rng).unwrap();
            let sol = solve_slice_element(SliceKind::S(geom), &p, &q).unwrap();
            let moved = exp_closed(&sol, n).unwrap().apply(p.coords());
            assert!((moved - q.coords()).norm() < 1e-9);
        }
    }

    #[test]
    fn n_slice_has_dimension_2n() {
        let p = AdsPoint::base_point(Model::Complex, 4);
        let m = slice_orbit_model(SliceKind::N, &p).unwrap();
        assert_eq!(m.subspace_dim(), Some(8));
    }

    #[test]
    fn hyperplane_s_slice_has_dimension_2n() {
        let p = AdsPoint::base_point(Model::Complex, 4);
        let m = slice_orbit_model(SliceKind::S(SGeometry::TotallyReal { r: 1 }), &p).unwrap();
        assert_eq!(m.subspace_dim(), Some(8));
    }
}

//! `SO^0(2,n)` acting on `AdS^{n+1}`: the nilpotent factor `N`, its
//! closed-form exponentials and orbit slices, leaf labels for the groups
//! between `N` and the parabolics, and the Langlands decompositions.
//!
//! Indices are zero-based: the timelike coordinates are `x_0, x_1`, and the
//! conditions written `x_2 = x_4` and `x_1 = x_3` in one-based notation read
//! `x_1 = x_3` and `x_0 = x_2` here.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::indefinite::{AdsPoint, Model, C64};
use crate::lie::{exp_series, AlgebraElement, AlgebraKind, GroupElement, Subalgebra};
use crate::orbit::OrbitModel;
use crate::roots::{closed_form_root_space, h_ab, positive_roots, root_decomposition, Root};

const SO: AlgebraKind = AlgebraKind::So2n;
/// Relative tolerance for `p_1 = p_3` and slice membership.
const SLICE_TOL: f64 = 1e-9;

/// Parameters of an element of `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct NElement {
    pub a: f64,
    pub b: f64,
    pub v: DVector<f64>,
    pub w: DVector<f64>,
}

impl NElement {
    pub fn zero(n: usize) -> Self {
        Self { a: 0.0, b: 0.0, v: DVector::zeros(n.saturating_sub(2)), w: DVector::zeros(n.saturating_sub(2)) }
    }

    pub fn algebra_element(&self, n: usize) -> Result<AlgebraElement> {
        n_element(self.a, self.b, self.v.as_slice(), self.w.as_slice(), n)
    }
}

/// The matrix of `n` with parameters `(a, b, v, w)`.
pub fn n_element(a: f64, b: f64, v: &[f64], w: &[f64], n: usize) -> Result<AlgebraElement> {
    if n < 3 {
        return Err(Error::Argument(format!("so(2,n) needs n >= 3, got {n}")));
    }
    if v.len() != n - 2 || w.len() != n - 2 {
        return Err(Error::Argument(format!("v and w must have length {}, got {} and {}", n - 2, v.len(), w.len())));
    }
    let mut m = DMatrix::<f64>::zeros(n + 2, n + 2);
    m[(0, 1)] = b + a;
    m[(0, 3)] = -b - a;
    m[(1, 0)] = -b - a;
    m[(1, 2)] = -b + a;
    m[(2, 1)] = -b + a;
    m[(2, 3)] = b - a;
    m[(3, 0)] = -b - a;
    m[(3, 2)] = -b + a;
    for j in 0..n - 2 {
        let c = 4 + j;
        m[(0, c)] = v[j];
        m[(2, c)] = v[j];
        m[(c, 0)] = v[j];
        m[(c, 2)] = -v[j];
        m[(1, c)] = w[j];
        m[(3, c)] = w[j];
        m[(c, 1)] = w[j];
        m[(c, 3)] = -w[j];
    }
    AlgebraElement::from_real(SO, n, &m)
}

/// The two families of `n` with a quadratic exponential.
#[derive(Debug, Clone, PartialEq)]
pub enum NExpKind {
    /// `b = 0, w = 0`; moves points with `p_1 = p_3`.
    Singular { a: f64, v: DVector<f64> },
    /// `v = 0`.
    Principal { a: f64, b: f64, w: DVector<f64> },
}

impl NExpKind {
    pub fn element(&self, n: usize) -> NElement {
        let zero = DVector::zeros(n.saturating_sub(2));
        match self {
            Self::Singular { a, v } => NElement { a: *a, b: 0.0, v: v.clone(), w: zero },
            Self::Principal { a, b, w } => NElement { a: *a, b: *b, v: zero, w: w.clone() },
        }
    }
}

/// `exp` of an element of either family, entry by entry.
pub fn exp_n_closed(kind: &NExpKind, n: usize) -> Result<GroupElement> {
    if n < 3 {
        return Err(Error::Argument(format!("so(2,n) needs n >= 3, got {n}")));
    }
    let size = n + 2;
    let mut m = DMatrix::<f64>::identity(size, size);
    match kind {
        NExpKind::Singular { a, v } => {
            check_len(v, n)?;
            let a = *a;
            let h = 0.5 * v.norm_squared();
            m[(0, 0)] += h;
            m[(0, 1)] = a;
            m[(0, 2)] = -h;
            m[(0, 3)] = -a;
            m[(1, 0)] = -a;
            m[(1, 2)] = a;
            m[(2, 0)] = h;
            m[(2, 1)] = a;
            m[(2, 2)] -= h;
            m[(2, 3)] = -a;
            m[(3, 0)] = -a;
            m[(3, 2)] = a;
            for j in 0..n - 2 {
                let c = 4 + j;
                m[(0, c)] = v[j];
                m[(2, c)] = v[j];
                m[(c, 0)] = v[j];
                m[(c, 2)] = -v[j];
            }
        }
        NExpKind::Principal { a, b, w } => {
            check_len(w, n)?;
            let (a, b) = (*a, *b);
            let h = 0.5 * w.norm_squared();
            let ab = 2.0 * a * b;
            m[(0, 1)] = a + b;
            m[(0, 3)] = -a - b;
            m[(1, 0)] = -a - b;
            m[(1, 1)] += h - ab;
            m[(1, 2)] = a - b;
            m[(1, 3)] = ab - h;
            m[(2, 1)] = a - b;
            m[(2, 3)] = b - a;
            m[(3, 0)] = -a - b;
            m[(3, 1)] = h - ab;
            m[(3, 2)] = a - b;
            m[(3, 3)] += ab - h;
            for j in 0..n - 2 {
                let c = 4 + j;
                m[(1, c)] = w[j];
                m[(3, c)] = w[j];
                m[(c, 1)] = w[j];
                m[(c, 3)] = -w[j];
            }
        }
    }
    GroupElement::new(SO, n, m.map(|x| C64::new(x, 0.0)))
}

fn check_len(v: &DVector<f64>, n: usize) -> Result<()> {
    if v.len() != n - 2 {
        return Err(Error::Dimension { expected: n - 2, found: v.len() });
    }
    Ok(())
}

fn require_real(p: &AdsPoint) -> Result<()> {
    if p.model() != Model::Real {
        return Err(Error::Tag("SO(2,n) acts on the real model".into()));
    }
    if p.n() < 3 {
        return Err(Error::Argument(format!("so(2,n) needs n >= 3, got {}", p.n())));
    }
    Ok(())
}

fn real_coords(p: &AdsPoint) -> DVector<f64> {
    p.coords().map(|z| z.re)
}

/// Whether `p_1 = p_3` (zero-based), up to the slice tolerance.
pub fn on_singular_locus(p: &AdsPoint) -> bool {
    let x = real_coords(p);
    (x[1] - x[3]).abs() <= SLICE_TOL * x.norm().max(1.0)
}

fn unit(j: usize, len: usize) -> DVector<f64> {
    let mut v = DVector::zeros(len);
    v[j] = 1.0;
    v
}

/// Basis of `{x_1 = x_3}`.
pub fn principal_slice_space(n: usize) -> Vec<DVector<f64>> {
    let size = n + 2;
    let mut out = vec![unit(0, size), unit(2, size), unit(1, size) + unit(3, size)];
    out.extend((4..size).map(|j| unit(j, size)));
    out
}

/// Basis of `{x_0 = x_2, x_1 = x_3}`.
pub fn singular_slice_space(n: usize) -> Vec<DVector<f64>> {
    let size = n + 2;
    let mut out = vec![unit(0, size) + unit(2, size), unit(1, size) + unit(3, size)];
    out.extend((4..size).map(|j| unit(j, size)));
    out
}

/// `N . p` as an affine slice, with invariant `r = p_1 - p_3` on principal
/// orbits and `s = p_0 - p_2` on singular ones.
pub fn n_orbit_model(p: &AdsPoint) -> Result<OrbitModel> {
    require_real(p)?;
    let n = p.n();
    let x = real_coords(p);
    if on_singular_locus(p) {
        Ok(OrbitModel::affine(p, x.clone(), &singular_slice_space(n))?
            .with_expected_dim(n - 1)
            .with_invariant("s", x[0] - x[2]))
    } else {
        Ok(OrbitModel::affine(p, x.clone(), &principal_slice_space(n))?
            .with_expected_dim(n)
            .with_invariant("r", x[1] - x[3]))
    }
}

/// Element of `n` with `exp(X) p = q`.
pub fn solve_n_element_so(p: &AdsPoint, q: &AdsPoint) -> Result<NExpKind> {
    require_real(p)?;
    require_real(q)?;
    if p.n() != q.n() {
        return Err(Error::Dimension { expected: p.n(), found: q.n() });
    }
    let n = p.n();
    let (x, y) = (real_coords(p), real_coords(q));
    let scale = x.norm().max(y.norm()).max(1.0);
    let d = &y - &x;
    let r = x[1] - x[3];
    let s = x[0] - x[2];
    if r.abs() <= SLICE_TOL * scale && s.abs() <= SLICE_TOL * scale {
        return Err(Error::DegeneratePoint("p_1 = p_3 and p_0 = p_2 together".into()));
    }
    if (d[1] - d[3]).abs() > SLICE_TOL * scale {
        return Err(Error::Unreachable("q_1 - q_3 differs from p_1 - p_3".into()));
    }
    if on_singular_locus(p) {
        if (d[0] - d[2]).abs() > SLICE_TOL * scale {
            return Err(Error::Unreachable("q_0 - q_2 differs from p_0 - p_2".into()));
        }
        let a = (x[1] - y[1]) / s;
        let v = d.rows(4, n - 2) / s;
        Ok(NExpKind::Singular { a, v })
    } else {
        let a = ((y[0] + y[2]) - (x[0] + x[2])) / (2.0 * r);
        let b = ((y[0] - y[2]) - (x[0] - x[2])) / (2.0 * r);
        let w = d.rows(4, n - 2) / r;
        Ok(NExpKind::Principal { a, b, w })
    }
}

/// Groups whose orbit foliations are labelled by [`leaf_id`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafGroup {
    N,
    /// `exp(R H_{1,0}) N`
    A1N,
    AN,
    QEmpty,
    Q1,
    Q2,
}

impl LeafGroup {
    pub const ALL: [LeafGroup; 6] = [Self::N, Self::A1N, Self::AN, Self::QEmpty, Self::Q1, Self::Q2];

    /// Lie algebra of the group.
    pub fn algebra(self, n: usize) -> Result<Subalgebra> {
        match self {
            Self::N => nilradical(n),
            Self::A1N => rh_line(1.0, 0.0, n),
            Self::AN => {
                let mut e = vec![h_ab(1.0, 0.0, n), h_ab(0.0, 1.0, n)];
                e.extend(nilradical(n)?.basis().iter().cloned());
                Subalgebra::new(SO, n, e)
            }
            Self::QEmpty => Ok(parabolic(&[], n)?.q),
            Self::Q1 => Ok(parabolic(&[Root::alpha2()], n)?.q),
            Self::Q2 => Ok(parabolic(&[Root::alpha1()], n)?.q),
        }
    }
}

impl fmt::Display for LeafGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::N => "N",
            Self::A1N => "A1N",
            Self::AN => "AN",
            Self::QEmpty => "Q0",
            Self::Q1 => "Q1",
            Self::Q2 => "Q2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeafLabel {
    Principal(f64),
    PrincipalPlus,
    PrincipalMinus,
    Singular(f64),
    SingularPlus,
    SingularMinus,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafId {
    pub group: LeafGroup,
    pub label: LeafLabel,
}

impl LeafId {
    /// Equality of labels, with `r` and `s` compared up to `tol` (relative).
    pub fn same_leaf(&self, other: &Self, tol: f64) -> bool {
        if self.group != other.group {
            return false;
        }
        let close = |x: f64, y: f64| (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0);
        match (self.label, other.label) {
            (LeafLabel::Principal(x), LeafLabel::Principal(y)) | (LeafLabel::Singular(x), LeafLabel::Singular(y)) => {
                close(x, y)
            }
            (x, y) => x == y,
        }
    }
}

/// The leaf of the orbit foliation of `group` through `p`.
pub fn leaf_id(group: LeafGroup, p: &AdsPoint) -> Result<LeafId> {
    require_real(p)?;
    let x = real_coords(p);
    let scale = x.norm().max(1.0);
    let r = x[1] - x[3];
    let s = x[0] - x[2];
    let r_zero = r.abs() <= SLICE_TOL * scale;
    if r_zero && s.abs() <= SLICE_TOL * scale {
        return Err(Error::DegeneratePoint("p_1 = p_3 and p_0 = p_2 together".into()));
    }
    let signed = |v: f64, plus, minus| if v > 0.0 { plus } else { minus };
    let label = match group {
        LeafGroup::Q2 => LeafLabel::All,
        LeafGroup::N if !r_zero => LeafLabel::Principal(r),
        LeafGroup::N => LeafLabel::Singular(s),
        LeafGroup::A1N if !r_zero => LeafLabel::Principal(r),
        LeafGroup::AN | LeafGroup::QEmpty | LeafGroup::Q1 if !r_zero => {
            signed(r, LeafLabel::PrincipalPlus, LeafLabel::PrincipalMinus)
        }
        _ => signed(s, LeafLabel::SingularPlus, LeafLabel::SingularMinus),
    };
    Ok(LeafId { group, label })
}

/// `n`, the sum of the positive root spaces.
pub fn nilradical(n: usize) -> Result<Subalgebra> {
    let mut e = Vec::new();
    for root in positive_roots(SO)? {
        e.extend(closed_form_root_space(SO, n, &root)?);
    }
    Subalgebra::new(SO, n, e)
}

/// `R H_{a,b} + n`.
pub fn rh_line(a: f64, b: f64, n: usize) -> Result<Subalgebra> {
    if a == 0.0 && b == 0.0 {
        return Err(Error::Argument("H_{0,0} spans no line".into()));
    }
    let mut e = vec![h_ab(a, b, n)];
    e.extend(nilradical(n)?.basis().iter().cloned());
    Subalgebra::new(SO, n, e)
}

/// `q = l + n` for a proper subset of the simple roots.
#[derive(Debug, Clone)]
pub struct LanglandsDecomposition {
    pub phi: Vec<Root>,
    pub l: Subalgebra,
    pub n: Subalgebra,
    pub q: Subalgebra,
}

/// Roots of `so(2,n)` in the integer span of `phi`.
fn generated_roots(phi: &[Root]) -> Result<Vec<Root>> {
    let mut all = Vec::new();
    for r in positive_roots(SO)? {
        all.push(r.neg());
        all.push(r);
    }
    // at rank two a subset of the simple roots is empty or a single root
    Ok(all.into_iter().filter(|r| (0..2).all(|i| r.0[i] == 0 || phi.iter().any(|s| s.0[i] != 0))).collect())
}

/// Langlands decomposition of the parabolic subalgebra attached to `phi`.
pub fn parabolic(phi: &[Root], n: usize) -> Result<LanglandsDecomposition> {
    let simple = [Root::alpha1(), Root::alpha2()];
    if let Some(bad) = phi.iter().find(|r| !simple.contains(r)) {
        return Err(Error::Argument(format!("{bad} is not a simple root")));
    }
    let mut phi: Vec<Root> = phi.to_vec();
    phi.sort();
    phi.dedup();
    if phi.len() == simple.len() {
        return Err(Error::Argument("phi must be a proper subset of the simple roots".into()));
    }
    let sigma = generated_roots(&phi)?;
    let dec = root_decomposition(SO, n)?;
    let mut l = dec.zero_space();
    for root in &sigma {
        l.extend(closed_form_root_space(SO, n, root)?);
    }
    let mut nil = Vec::new();
    for root in positive_roots(SO)?.iter().filter(|r| !sigma.contains(r)) {
        nil.extend(closed_form_root_space(SO, n, root)?);
    }
    let l = Subalgebra::new(SO, n, l)?;
    let nil = Subalgebra::new(SO, n, nil)?;
    let q = l.sum(&nil)?;
    Ok(LanglandsDecomposition { phi, l, n: nil, q })
}

/// `exp` of a random element of `h` with coordinates in `[-bound, bound]`.
pub fn random_group_element<R: Rng + ?Sized>(h: &Subalgebra, bound: f64, rng: &mut R) -> Result<GroupElement> {
    let coeffs: Vec<f64> = (0..h.dim()).map(|_| rng.random_range(-bound..=bound)).collect();
    let x = AlgebraElement::combination(&coeffs, h.basis())?;
    exp_series(&x, 1e-15)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indefinite::{derive_seed, nullspace, numerical_rank, sample_ads_point, Constraint, RANK_TOL};
    use crate::lie::exp_series;
    use crate::orbit::{orbit_dim, tangent_space};
    use crate::roots::{nilpotency_degree, so_alpha1, so_alpha1_2alpha2, so_alpha1_alpha2, so_alpha2};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rand_vec(len: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
        DVector::from_fn(len, |_, _| rng.random_range(-1.0..=1.0))
    }

    #[test]
    fn n_element_entries() {
        let n = 4;
        let z = n_element(0.0, 0.0, &[0.0; 2], &[0.0; 2], n).unwrap();
        assert_eq!(z.norm(), 0.0);
        let x = n_element(1.0, 0.0, &[0.0; 2], &[0.0; 2], n).unwrap();
        assert_eq!(x.mat()[(0, 1)].re, 1.0);
        assert_eq!(x.mat()[(1, 2)].re, 1.0);
        assert_eq!(x.mat()[(2, 3)].re, -1.0);
        assert!(x.validate(1e-14));
        assert!(n_element(0.0, 0.0, &[0.0], &[0.0; 2], n).is_err());
    }

    #[test]
    fn n_element_is_the_root_space_combination() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 3..=6 {
            let (a, b) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let v = rand_vec(n - 2, &mut rng);
            let w = rand_vec(n - 2, &mut rng);
            let x = n_element(a, b, v.as_slice(), w.as_slice(), n).unwrap();
            let y = so_alpha1_2alpha2(n)
                .scale(a)
                .add(&so_alpha1(n).scale(b))
                .unwrap()
                .add(&so_alpha2(v.as_slice(), n))
                .unwrap()
                .add(&so_alpha1_alpha2(w.as_slice(), n))
                .unwrap();
            assert!(x.sub(&y).unwrap().norm() < 1e-14);
            let nil = nilradical(n).unwrap();
            assert!(nil.contains(&x, 1e-10));
        }
    }

    #[test]
    fn closed_exponentials_match_the_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 3..=5 {
            for _ in 0..40 {
                let a = rng.random_range(-2.0..2.0);
                let b = rng.random_range(-2.0..2.0);
                let kinds = [
                    NExpKind::Singular { a, v: rand_vec(n - 2, &mut rng) * 2.0 },
                    NExpKind::Principal { a, b, w: rand_vec(n - 2, &mut rng) * 2.0 },
                ];
                for k in &kinds {
                    let closed = exp_n_closed(k, n).unwrap();
                    let series = exp_series(&k.element(n).algebra_element(n).unwrap(), 1e-16).unwrap();
                    assert!(closed.max_deviation(series.mat()) < 1e-10, "{k:?}");
                }
            }
        }
    }

    #[test]
    fn singular_exp_corner() {
        let v = DVector::from_vec(vec![1.0, 2.0]);
        let g = exp_n_closed(&NExpKind::Singular { a: 0.3, v }, 4).unwrap();
        assert_eq!(g.mat()[(0, 0)].re, 3.5);
        let id = exp_n_closed(&NExpKind::Singular { a: 0.0, v: DVector::zeros(2) }, 4).unwrap();
        assert_eq!(id.max_deviation(&DMatrix::identity(6, 6)), 0.0);
    }

    #[test]
    fn orbit_dimensions_split_by_the_locus() {
        for n in 3..=6 {
            let h = nilradical(n).unwrap();
            for i in 0..40 {
                let p = sample_ads_point(n, Model::Real, derive_seed(1, i), &Constraint::none()).unwrap();
                assert_eq!(orbit_dim(&h, &p, RANK_TOL).unwrap(), n);
                let p = sample_ads_point(n, Model::Real, derive_seed(2, i), &Constraint::p2_eq_p4()).unwrap();
                assert_eq!(orbit_dim(&h, &p, RANK_TOL).unwrap(), n - 1);
            }
        }
    }

    #[test]
    fn slice_models() {
        let e1 = AdsPoint::base_point(Model::Real, 3);
        let m = n_orbit_model(&e1).unwrap();
        assert_eq!(m.expected_dim, Some(2));
        assert_eq!(m.invariant("s"), Some(1.0));
        let p = AdsPoint::real(&[2f64.sqrt(), 0.0, 0.0, 1.0, 0.0]).unwrap();
        let m = n_orbit_model(&p).unwrap();
        assert_eq!(m.expected_dim, Some(3));
        assert_eq!(m.invariant("r"), Some(-1.0));
        // slice spaces cut by the tangent condition <x, p> = 0
        for n in 3..=5 {
            for (space, p, dim) in [
                (principal_slice_space(n), sample_ads_point(n, Model::Real, 4, &Constraint::none()).unwrap(), n),
                (singular_slice_space(n), AdsPoint::base_point(Model::Real, n), n - 1),
            ] {
                let x = real_coords(&p);
                let row: Vec<f64> =
                    space.iter().map(|v| -v[0] * x[0] - v[1] * x[1] + v.rows(2, n).dot(&x.rows(2, n))).collect();
                let kernel = nullspace(&DMatrix::from_row_slice(1, row.len(), &row), RANK_TOL).unwrap();
                let frame = DMatrix::from_columns(&space);
                let tangent: Vec<DVector<f64>> = kernel.column_iter().map(|c| &frame * c).collect();
                assert_eq!(numerical_rank(&tangent, RANK_TOL).unwrap(), dim);
            }
        }
    }

    #[test]
    fn slices_are_invariant() {
        let n = 4;
        let nil = nilradical(n).unwrap();
        for x in nil.basis() {
            let m = x.mat().map(|z| z.re);
            for (space, ambient) in [
                (principal_slice_space(n), principal_slice_space(n)),
                (singular_slice_space(n), singular_slice_space(n)),
            ] {
                let frame = crate::indefinite::orthonormal_basis(&ambient, n + 2, RANK_TOL).unwrap();
                for v in &space {
                    assert!(crate::indefinite::in_span(&(&m * v), &frame, 1e-10));
                }
            }
        }
    }

    #[test]
    fn solver_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 3..=5 {
            for (i, constraint) in [Constraint::none(), Constraint::p2_eq_p4()].iter().enumerate() {
                for j in 0..30 {
                    let p = sample_ads_point(n, Model::Real, derive_seed(100 + i as u64, j), constraint).unwrap();
                    let model = n_orbit_model(&p).unwrap();
                    let q = model.sample(&mut rng).unwrap();
                    let sol = solve_n_element_so(&p, &q).unwrap();
                    let g = exp_n_closed(&sol, n).unwrap();
                    let moved = p.transform(g.mat()).unwrap();
                    let res = (moved.coords() - q.coords()).norm();
                    assert!(res <= 1e-9 * q.coords().norm().max(1.0), "residual {res}");
                }
            }
            let p = AdsPoint::base_point(Model::Real, n);
            assert_eq!(solve_n_element_so(&p, &p).unwrap().element(n), NElement::zero(n));
        }
    }

    #[test]
    fn solver_rejects_points_off_the_slice() {
        let p = AdsPoint::base_point(Model::Real, 3);
        let q = AdsPoint::real(&[0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(solve_n_element_so(&p, &q), Err(Error::Unreachable(_))));
    }

    #[test]
    fn leaf_labels() {
        let p = AdsPoint::real(&[2f64.sqrt(), 0.0, 0.0, -1.0, 0.0]).unwrap();
        assert_eq!(leaf_id(LeafGroup::AN, &p).unwrap().label, LeafLabel::PrincipalPlus);
        assert_eq!(leaf_id(LeafGroup::N, &p).unwrap().label, LeafLabel::Principal(1.0));
        assert_eq!(leaf_id(LeafGroup::Q2, &p).unwrap().label, LeafLabel::All);
        let p = AdsPoint::real(&[-1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(leaf_id(LeafGroup::A1N, &p).unwrap().label, LeafLabel::SingularMinus);
        assert_eq!(leaf_id(LeafGroup::N, &p).unwrap().label, LeafLabel::Singular(-1.0));
    }

    #[test]
    fn leaves_are_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = 4;
        for group in LeafGroup::ALL {
            let h = group.algebra(n).unwrap();
            for i in 0..15 {
                let constraint = if i % 3 == 0 { Constraint::p2_eq_p4() } else { Constraint::none() };
                let p = sample_ads_point(n, Model::Real, derive_seed(7, i), &constraint).unwrap();
                let g = random_group_element(&h, 0.5, &mut rng).unwrap();
                let q = p.transform(g.mat()).unwrap();
                let (a, b) = (leaf_id(group, &p).unwrap(), leaf_id(group, &q).unwrap());
                assert!(a.same_leaf(&b, 1e-8), "{group}: {a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn parabolic_dimensions_and_closure() {
        let n = 3;
        let q0 = parabolic(&[], n).unwrap();
        let q1 = parabolic(&[Root::alpha2()], n).unwrap();
        let q2 = parabolic(&[Root::alpha1()], n).unwrap();
        assert_eq!((q0.q.dim(), q1.q.dim(), q2.q.dim()), (6, 7, 7));
        for d in [&q0, &q1, &q2] {
            assert!(d.q.closure_residual() < 1e-10);
            assert!(d.l.closure_residual() < 1e-10);
            assert_eq!(d.l.dim() + d.n.dim(), d.q.dim());
        }
        assert_eq!(nilpotency_degree(&q0.n).unwrap(), 3);
        let mut extended = q0.q.basis().to_vec();
        extended.extend(closed_form_root_space(SO, n, &Root::alpha2().neg()).unwrap());
        assert!(Subalgebra::new(SO, n, extended).unwrap().same_span(&q1.q, 1e-10));
        assert!(parabolic(&[Root::alpha1(), Root::alpha2()], n).is_err());
    }

    #[test]
    fn parabolic_orbits() {
        let n = 4;
        let q1 = LeafGroup::Q1.algebra(n).unwrap();
        let q2 = LeafGroup::Q2.algebra(n).unwrap();
        let an = LeafGroup::AN.algebra(n).unwrap();
        for i in 0..10 {
            let p = sample_ads_point(n, Model::Real, derive_seed(3, i), &Constraint::p2_eq_p4()).unwrap();
            assert_eq!(orbit_dim(&q2, &p, RANK_TOL).unwrap(), n + 1);
            assert_eq!(orbit_dim(&q1, &p, RANK_TOL).unwrap(), n);
            // (a + n).p = {<x, p> = 0, x_1 = x_3}
            let t = tangent_space(&an, &p).unwrap();
            assert!(t.iter().all(|v| (v[1] - v[3]).abs() < 1e-10));
            assert_eq!(numerical_rank(&t, RANK_TOL).unwrap(), n);
        }
    }

    #[test]
    fn lines_in_a() {
        let n = 3;
        for (a, b) in [(1.0, 0.0), (-2.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, -0.3)] {
            let h = rh_line(a, b, n).unwrap();
            let p = sample_ads_point(n, Model::Real, 9, &Constraint::none()).unwrap();
            let dim = orbit_dim(&h, &p, RANK_TOL).unwrap();
            assert_eq!(dim == n, b == 0.0, "({a}, {b})");
        }
    }
}

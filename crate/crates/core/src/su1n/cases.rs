use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};
use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::{embed_tail, s_slice_vectors, SGeometry};
use crate::error::{Error, Result};
use crate::indefinite::{complex_to_real, nullspace, AdsPoint, Model, C64, RANK_TOL};
use crate::kaehler::build_w_decomposition;
use crate::lie::{standard_basis, AlgebraElement, AlgebraKind, Subalgebra};
use crate::orbit::{bilinear, same_tangent_space, OrbitModel, Predicate};
use crate::roots::{su_2alpha, su_alpha, su_flat_generator};

const U: AlgebraKind = AlgebraKind::U1n;
const FN_TOL: f64 = 1e-9;

/// Cohomogeneity one actions on `AdS^{2n+1}` up to orbit equivalence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Case {
    /// `A N`
    OneA,
    /// `K_0 N`
    OneB,
    /// `F_c N`
    OneC { c: f64 },
    /// `S(U(1,k) x U(n-k))`
    Two { k: usize },
    /// `S^1 SO(1,n)`
    Three,
    /// `N_K(S) S` with `w^perp` totally real of dimension `r`
    Four { r: usize },
    /// `N_K(S) S` with `w^perp` of constant Kaehler angle `phi` in `(0, pi/2)`
    Five { k: usize, l: usize, phi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseDescriptor {
    pub case: Case,
    pub n: usize,
}

impl CaseDescriptor {
    pub fn new(case: Case, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Argument(format!("n = {n}; need n >= 2")));
        }
        match case {
            Case::OneC { c } if c == 0.0 || !c.is_finite() => {
                return Err(Error::Argument("case 1c needs a finite c != 0".into()));
            }
            Case::Two { k } if k > n - 1 => {
                return Err(Error::Argument(format!("k = {k} outside 0..={}", n - 1)));
            }
            Case::Four { r } if r == 0 || r > n - 1 => {
                return Err(Error::Argument(format!("r = {r} outside 1..={}", n - 1)));
            }
            Case::Five { k, l, phi } => {
                if !(phi > 0.0 && phi < FRAC_PI_2) {
                    return Err(Error::Argument(format!("phi = {phi} outside (0, pi/2)")));
                }
                build_w_decomposition(k, l, phi, n)?;
            }
            _ => {}
        }
        Ok(Self { case, n })
    }

    /// Every case at `n`, with `c = 1` in 1c and `phi = pi/3` in case 5.
    pub fn all(n: usize) -> Vec<Self> {
        let mut cases = vec![Case::OneA, Case::OneB, Case::OneC { c: 1.0 }];
        cases.extend((0..n).map(|k| Case::Two { k }));
        cases.push(Case::Three);
        cases.extend((1..n).map(|r| Case::Four { r }));
        for l in 1..=(n.saturating_sub(1)) / 2 {
            cases.push(Case::Five { k: n - 1 - 2 * l, l, phi: FRAC_PI_3 });
        }
        cases.into_iter().filter_map(|c| Self::new(c, n).ok()).collect()
    }

    /// The `w` shape for cases 4 and 5.
    pub fn geometry(&self) -> Option<SGeometry> {
        match self.case {
            Case::Four { r } => Some(SGeometry::TotallyReal { r }),
            Case::Five { k, l, phi } => Some(SGeometry::KaehlerAngle { k, l, phi }),
            _ => None,
        }
    }

    /// Whether the orbits contain the Hopf fibres.
    pub fn contains_fibres(&self) -> bool {
        !matches!(self.case, Case::OneA | Case::OneC { .. })
    }
}

impl fmt::Display for CaseDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.case {
            Case::OneA => write!(f, "1a"),
            Case::OneB => write!(f, "1b"),
            Case::OneC { c } => write!(f, "1c(c={c})"),
            Case::Two { k } => write!(f, "2(k={k})"),
            Case::Three => write!(f, "3"),
            Case::Four { r } => write!(f, "4(r={r})"),
            Case::Five { k, l, phi } => write!(f, "5(k={k},l={l},phi={phi:.6})"),
        }
    }
}

fn unit_mat(size: usize, entries: &[(usize, usize, C64)]) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(size, size);
    for &(i, j, z) in entries {
        m[(i, j)] += z;
    }
    m
}

fn el(n: usize, m: DMatrix<C64>) -> AlgebraElement {
    AlgebraElement::new(U, n, m).expect("shape")
}

/// `n = g_alpha + g_{2 alpha}` inside `u(1,n)`.
pub fn nilradical(n: usize) -> Vec<AlgebraElement> {
    let mut out = vec![su_2alpha(U, 1.0, n)];
    for j in 0..n - 1 {
        for z in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
            let mut omega = vec![C64::new(0.0, 0.0); n - 1];
            omega[j] = z;
            out.push(su_alpha(U, &omega, n));
        }
    }
    out
}

/// `k_0 = {diag(i y, i y, Y) : 2 i y + tr Y = 0}` inside `u(1,n)`.
pub fn k0_u1n(n: usize) -> Vec<AlgebraElement> {
    let i = C64::new(0.0, 1.0);
    let mut out = k0_traceless_block(n);
    out.push(el(n, unit_mat(n + 1, &[(0, 0, i), (1, 1, i), (2, 2, -i * 2.0)])));
    out
}

/// The `y = 0` part of `k_0`: `diag(0, 0, Y)` with `Y` in `su(n-1)`.
pub fn k0_traceless_block(n: usize) -> Vec<AlgebraElement> {
    let size = n + 1;
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let mut out = Vec::new();
    for a in 2..size {
        for b in a + 1..size {
            out.push(el(n, unit_mat(size, &[(a, b, one), (b, a, -one)])));
            out.push(el(n, unit_mat(size, &[(a, b, i), (b, a, i)])));
        }
    }
    for j in 3..size {
        out.push(el(n, unit_mat(size, &[(j, j, i), (2, 2, -i)])));
    }
    out
}

/// Basis of the compact subalgebra `s(u(1) + u(n))`, tagged `kind`.
pub fn compact_basis(kind: AlgebraKind, n: usize) -> Result<Vec<AlgebraElement>> {
    standard_basis(AlgebraKind::Su1n, n)
        .elements
        .iter()
        .filter(|x| {
            let m = x.mat();
            (1..n + 1).all(|j| m[(0, j)].norm() == 0.0 && m[(j, 0)].norm() == 0.0)
        })
        .map(|x| x.retag(kind))
        .collect()
}

/// `s = a + w + g_{2 alpha}` inside `su(1,n)`.
pub fn s_algebra(geom: &SGeometry, n: usize) -> Result<Subalgebra> {
    let kind = AlgebraKind::Su1n;
    let mut elements = vec![su_flat_generator(kind, n), su_2alpha(kind, 1.0, n)];
    elements.extend(geom.w(n)?.basis().iter().map(|w| su_alpha(kind, w.as_slice(), n)));
    Subalgebra::new(kind, n, elements)
}

/// `{X in k : [X, s] in s}` as the nullspace of `X -> [X, s] mod s`.
pub fn normalizer_in_k(s: &Subalgebra) -> Result<Subalgebra> {
    let (kind, n) = (s.kind(), s.n());
    let k_basis = compact_basis(kind, n)?;
    let frame = s.frame();
    let mut cols = Vec::with_capacity(k_basis.len());
    for kb in &k_basis {
        let mut parts = Vec::new();
        for y in s.basis() {
            let v = kb.bracket(y)?.flatten();
            let r = &v - frame * (frame.transpose() * &v);
            parts.extend(r.iter().copied());
        }
        cols.push(DVector::from_vec(parts));
    }
    let a = DMatrix::from_columns(&cols);
    let ns = nullspace(&a, RANK_TOL)?;
    let elements =
        ns.column_iter().map(|c| AlgebraElement::combination(c.as_slice(), &k_basis)).collect::<Result<Vec<_>>>()?;
    Subalgebra::new(kind, n, elements)
}

fn x_c(c: f64, n: usize) -> AlgebraElement {
    let one = C64::new(1.0, 0.0);
    let ic = C64::new(0.0, c);
    el(n, unit_mat(n + 1, &[(0, 0, ic), (1, 1, ic), (0, 1, one), (1, 0, one)]))
}

/// The Lie algebra of the acting group, tagged `u(1,n)`.
pub fn case_subalgebra(d: &CaseDescriptor) -> Result<Subalgebra> {
    let d = CaseDescriptor::new(d.case, d.n)?;
    let n = d.n;
    let size = n + 1;
    let elements = match d.case {
        Case::OneA => {
            let mut v = vec![su_flat_generator(U, n)];
            v.extend(nilradical(n));
            v
        }
        Case::OneB => {
            let mut v = k0_u1n(n);
            v.extend(nilradical(n));
            v
        }
        Case::OneC { c } => {
            let mut v = vec![x_c(c, n)];
            v.extend(nilradical(n));
            v
        }
        Case::Two { k } => {
            let block = |i: usize| i <= k;
            standard_basis(AlgebraKind::Su1n, n)
                .elements
                .iter()
                .filter(|x| {
                    let m = x.mat();
                    (0..size).all(|i| (0..size).all(|j| block(i) == block(j) || m[(i, j)].norm() == 0.0))
                })
                .map(|x| x.retag(U))
                .collect::<Result<Vec<_>>>()?
        }
        Case::Three => {
            let mut v: Vec<AlgebraElement> = standard_basis(AlgebraKind::Su1n, n)
                .elements
                .iter()
                .filter(|x| x.mat().iter().all(|z| z.im == 0.0))
                .map(|x| x.retag(U))
                .collect::<Result<Vec<_>>>()?;
            v.push(el(n, DMatrix::identity(size, size) * C64::new(0.0, 1.0)));
            v
        }
        Case::Four { .. } | Case::Five { .. } => {
            let geom = d.geometry().expect("cases 4 and 5 carry a geometry");
            let s = s_algebra(&geom, n)?;
            let nk = normalizer_in_k(&s)?.retag(U)?;
            // the circle of scalars lifts the action from CH^n
            let centre = Subalgebra::new(U, n, vec![el(n, DMatrix::identity(size, size) * C64::new(0.0, 1.0))])?;
            return nk.sum(&s.retag(U)?)?.sum(&centre);
        }
    };
    Subalgebra::new(U, n, elements)
}

/// Real spanning vectors of `W`: `span_C{e_0..e_k}` in case 2,
/// `span_C{e_0, e_1} + w` in cases 4 and 5. In case 2 the orbit through
/// `e_0` is `W ∩ AdS`. In cases 4 and 5 only the dimension agrees: the orbit
/// is `S^1 (V ∩ AdS)` with `V = span_R{e_0, e_1, i(e_0 + e_1)} + w`, and `W`
/// is not invariant once `w` has a totally real part.
pub fn singular_subspace(d: &CaseDescriptor) -> Result<Vec<DVector<C64>>> {
    let d = CaseDescriptor::new(d.case, d.n)?;
    let n = d.n;
    let size = n + 1;
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let unit = |j: usize, z: C64| {
        let mut v = DVector::zeros(size);
        v[j] = z;
        v
    };
    let complex = |upto: usize| (0..=upto).flat_map(move |j| [unit(j, one), unit(j, i)]).collect::<Vec<_>>();
    match d.case {
        Case::Two { k } => Ok(complex(k)),
        Case::Four { r } => {
            let mut v = complex(n - r);
            v.extend((n - r + 1..size).map(|j| unit(j, one)));
            Ok(v)
        }
        Case::Five { k, l, phi } => {
            let w = build_w_decomposition(k, l, phi, n)?;
            let mut v = complex(k + 1);
            v.extend(w.f.iter().chain(&w.h).map(embed_tail));
            Ok(v)
        }
        _ => Err(Error::Argument(format!("case {d} has no linear singular subspace"))),
    }
}

/// Dimension of the orbit through `e_0` when it is singular.
pub fn singular_orbit_dim(d: &CaseDescriptor) -> Option<usize> {
    let n = d.n;
    match d.case {
        Case::OneA | Case::OneB | Case::OneC { .. } => None,
        Case::Two { k } => Some(2 * k + 1),
        Case::Three => Some(n + 1),
        Case::Four { r } => Some(2 * n + 1 - r),
        Case::Five { l, .. } => Some(2 * n + 1 - 2 * l),
    }
}

/// Orbit through `p` for cases 2 to 5.
pub fn case_orbit_model(d: &CaseDescriptor, p: &AdsPoint) -> Result<OrbitModel> {
    let d = CaseDescriptor::new(d.case, d.n)?;
    if p.model() != Model::Complex || p.n() != d.n {
        return Err(Error::Argument(format!("case {d} acts on the complex model with n = {}", d.n)));
    }
    let n = d.n;
    match d.case {
        Case::Four { .. } | Case::Five { .. } => {
            let geom = d.geometry().expect("cases 4 and 5 carry a geometry");
            let slice = s_slice_vectors(&geom, n, C64::new(1.0, 0.0))?;
            let normal: Vec<DVector<f64>> =
                geom.w_perp(n)?.basis().iter().map(|v| complex_to_real(&embed_tail(v))).collect();
            let model = OrbitModel::fibred(p, &slice, &normal)?;
            let radius = model.invariant("radius").unwrap_or(0.0);
            let dim = if radius <= 1e-9 { singular_orbit_dim(&d).expect("singular case") } else { 2 * n };
            Ok(model.with_expected_dim(dim))
        }
        Case::Two { .. } => {
            let w: Vec<DVector<f64>> = singular_subspace(&d)?.iter().map(complex_to_real).collect();
            let model = OrbitModel::sphere(p, &w)?;
            let radius = model.invariant("radius").unwrap_or(0.0);
            let dim = if radius <= 1e-9 { singular_orbit_dim(&d).expect("singular case") } else { 2 * n };
            Ok(model.with_expected_dim(dim))
        }
        Case::Three => {
            let modulus = bilinear(p.coords()).norm();
            if modulus - 1.0 <= 1e-9 {
                Ok(OrbitModel::predicate(p, Predicate::SamePhase).with_expected_dim(n + 1))
            } else {
                Ok(OrbitModel::predicate(p, Predicate::BilinearModulus(modulus))
                    .with_expected_dim(2 * n)
                    .with_invariant("modulus", modulus))
            }
        }
        _ => Err(Error::Argument(format!("no slice model for case {d}"))),
    }
}

fn to_u1n(f: &Subalgebra) -> Result<Subalgebra> {
    match f.kind() {
        AlgebraKind::U1n => Ok(f.clone()),
        AlgebraKind::Su1n => f.retag(U),
        AlgebraKind::So2n => Err(Error::Tag("expected a subalgebra of u(1,n)".into())),
    }
}

/// Whether `x` has the block shape of `k_0 + a`.
fn in_k0_plus_a(x: &AlgebraElement) -> bool {
    let m = x.mat();
    let size = m.nrows();
    let tol = FN_TOL * x.norm().max(1.0);
    let cross = (2..size).all(|j| (0..2).all(|r| m[(r, j)].norm() <= tol && m[(j, r)].norm() <= tol));
    cross
        && (m[(0, 0)] - m[(1, 1)]).norm() <= tol
        && m[(0, 0)].re.abs() <= tol
        && (m[(0, 1)] - m[(1, 0)]).norm() <= tol
        && m[(0, 1)].im.abs() <= tol
}

/// `a`-coefficients `Re X_01` of the basis of `f`; checks the block shape.
fn a_coefficients(f: &Subalgebra) -> Result<Vec<f64>> {
    if let Some(bad) = f.basis().iter().find(|x| !in_k0_plus_a(x)) {
        return Err(Error::Argument(format!("{:?} is not in k_0 + a", bad.mat())));
    }
    let a: Vec<f64> = f.basis().iter().map(|x| x.mat()[(0, 1)].re).collect();
    let scale = f.basis().iter().map(|x| x.norm()).fold(0.0, f64::max);
    if a.iter().all(|v| v.abs() <= FN_TOL * scale) {
        return Err(Error::Precondition("f has trivial projection onto a".into()));
    }
    Ok(a)
}

/// Whether `F N` acts with cohomogeneity one: every element of `f ∩ k_0`
/// has vanishing `u(1)`-component `y = Im X_00`.
pub fn fn_cohomogeneity_one(f: &Subalgebra) -> Result<bool> {
    let f = to_u1n(f)?;
    let a = a_coefficients(&f)?;
    let row = DMatrix::from_row_slice(1, a.len(), &a);
    let ns = nullspace(&row, RANK_TOL)?;
    for c in ns.column_iter() {
        let kappa = AlgebraElement::combination(c.as_slice(), f.basis())?;
        if kappa.mat()[(0, 0)].im.abs() > FN_TOL * kappa.norm().max(f64::MIN_POSITIVE) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `c` of the reduced algebra `f_c`, read off an element with nonzero
/// `a`-component.
pub fn extract_c(f: &Subalgebra) -> Result<f64> {
    let f = to_u1n(f)?;
    if !fn_cohomogeneity_one(&f)? {
        return Err(Error::Precondition("F N does not act with cohomogeneity one".into()));
    }
    let a = a_coefficients(&f)?;
    let (idx, &ai) = a.iter().enumerate().max_by(|x, y| x.1.abs().total_cmp(&y.1.abs())).expect("nonempty");
    Ok(f.basis()[idx].mat()[(0, 0)].im / ai)
}

/// `f_c = R X_c` (`f_0 = a`).
pub fn f_c(c: f64, n: usize) -> Result<Subalgebra> {
    Subalgebra::new(U, n, vec![x_c(c, n)])
}

/// `f + n`.
pub fn fn_algebra(f: &Subalgebra) -> Result<Subalgebra> {
    let f = to_u1n(f)?;
    let mut elements = f.basis().to_vec();
    elements.extend(nilradical(f.n()));
    Subalgebra::new(U, f.n(), elements)
}

/// Equality of `(f + n).p` and `(f_c + n).p`.
pub fn fn_orbit_equivalence_check(f: &Subalgebra, c: f64, p: &AdsPoint) -> Result<bool> {
    let lhs = fn_algebra(f)?;
    let rhs = fn_algebra(&f_c(c, f.n())?)?;
    same_tangent_space(&lhs, &rhs, p)
}

/// `f = R xi + R kappa` with `xi = X_c + diag(0, 0, X)` and
/// `kappa = diag(i y, i y, Y)`, `X` and `Y` random imaginary diagonals.
pub fn random_f<R: Rng + ?Sized>(n: usize, c: f64, y: f64, rng: &mut R) -> Result<Subalgebra> {
    if n < 2 {
        return Err(Error::Argument("n must be at least 2".into()));
    }
    let size = n + 1;
    let mut xi = x_c(c, n).into_mat();
    let mut kappa = DMatrix::zeros(size, size);
    kappa[(0, 0)] = C64::new(0.0, y);
    kappa[(1, 1)] = C64::new(0.0, y);
    for j in 2..size {
        xi[(j, j)] = C64::new(0.0, rng.random_range(-1.0..=1.0));
        kappa[(j, j)] = C64::new(0.0, rng.random_range(-1.0..=1.0));
    }
    Subalgebra::new(U, n, vec![el(n, xi), el(n, kappa)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indefinite::{derive_seed, sample_ads_point, Constraint};
    use crate::orbit::{cohomogeneity, fiber_contained, invariant_subspace, orbit_dim};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn case(c: Case, n: usize) -> CaseDescriptor {
        CaseDescriptor::new(c, n).unwrap()
    }

    #[test]
    fn descriptor_ranges() {
        assert!(CaseDescriptor::new(Case::Two { k: 3 }, 3).is_err());
        assert!(CaseDescriptor::new(Case::OneC { c: 0.0 }, 3).is_err());
        assert!(CaseDescriptor::new(Case::Four { r: 0 }, 3).is_err());
        assert!(CaseDescriptor::new(Case::Five { k: 0, l: 1, phi: FRAC_PI_2 }, 3).is_err());
        assert!(CaseDescriptor::new(Case::Five { k: 1, l: 1, phi: 1.0 }, 3).is_err());
        assert!(CaseDescriptor::all(2).iter().all(|d| !matches!(d.case, Case::Five { .. })));
    }

    #[test]
    fn block_dimension() {
        for n in 2..=4 {
            for k in 0..n {
                let h = case_subalgebra(&case(Case::Two { k }, n)).unwrap();
                assert_eq!(h.dim(), (k + 1) * (k + 1) + (n - k) * (n - k) - 1);
            }
        }
    }

    #[test]
    fn normalizer_dimensions() {
        for n in 3..=5 {
            for r in 1..n {
                let s = s_algebra(&SGeometry::TotallyReal { r }, n).unwrap();
                let nk = normalizer_in_k(&s).unwrap();
                assert_eq!(nk.dim(), (n - r - 1).pow(2) + r * (r - 1) / 2, "n = {n}, r = {r}");
            }
            for l in 1..=(n - 1) / 2 {
                let k = n - 1 - 2 * l;
                let s = s_algebra(&SGeometry::KaehlerAngle { k, l, phi: 1.0 }, n).unwrap();
                assert_eq!(normalizer_in_k(&s).unwrap().dim(), k * k + l * l);
            }
        }
    }

    #[test]
    fn every_case_has_cohomogeneity_one() {
        for n in 2..=3 {
            for d in CaseDescriptor::all(n) {
                let h = case_subalgebra(&d).unwrap();
                let rep = cohomogeneity(&h, 30, 5, &[]).unwrap();
                assert_eq!(rep.cohomogeneity, Some(1), "case {d} at n = {n}");
                assert!(rep.errors.is_empty());
            }
        }
    }

    #[test]
    fn singular_orbits_through_e0() {
        for n in 2..=4 {
            let e0 = AdsPoint::base_point(Model::Complex, n);
            for d in CaseDescriptor::all(n) {
                let h = case_subalgebra(&d).unwrap();
                let dim = orbit_dim(&h, &e0, RANK_TOL).unwrap();
                match singular_orbit_dim(&d) {
                    Some(expected) => assert_eq!(dim, expected, "case {d}"),
                    None => assert_eq!(dim, 2 * n, "case {d}"),
                }
                let Ok(w) = singular_subspace(&d) else { continue };
                let w_dim = crate::indefinite::orthonormal_basis(
                    &w.iter().map(complex_to_real).collect::<Vec<_>>(),
                    2 * n + 2,
                    RANK_TOL,
                )
                .unwrap()
                .ncols();
                assert_eq!(dim + 1, w_dim, "case {d}");
                match d.geometry() {
                    None => assert!(invariant_subspace(&h, &w).unwrap(), "case {d}"),
                    Some(geom) => {
                        // every case 4 and 5 has a totally real part in w
                        assert!(!invariant_subspace(&h, &w).unwrap(), "case {d}");
                        let v: Vec<DVector<C64>> = s_slice_vectors(&geom, n, C64::new(1.0, 0.0))
                            .unwrap()
                            .iter()
                            .map(|x| crate::indefinite::real_to_complex(x).unwrap())
                            .collect();
                        let s = s_algebra(&geom, n).unwrap().retag(U).unwrap();
                        assert!(invariant_subspace(&s, &v).unwrap(), "case {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn fibres() {
        let n = 3;
        for d in CaseDescriptor::all(n) {
            let h = case_subalgebra(&d).unwrap();
            for i in 0..10 {
                let p = sample_ads_point(n, Model::Complex, derive_seed(9, i), &Constraint::none()).unwrap();
                assert_eq!(fiber_contained(&h, &p).unwrap(), d.contains_fibres(), "case {d}");
            }
        }
    }

    #[test]
    fn orbit_models_match_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 3;
        for d in CaseDescriptor::all(n) {
            let h = case_subalgebra(&d).unwrap();
            let p = sample_ads_point(n, Model::Complex, 17, &Constraint::none()).unwrap();
            let Ok(model) = case_orbit_model(&d, &p) else {
                assert!(matches!(d.case, Case::OneA | Case::OneB | Case::OneC { .. }));
                continue;
            };
            assert!(model.contains(&p));
            for _ in 0..5 {
                let q = model.sample(&mut rng).unwrap();
                assert!(model.contains(&q));
                assert_eq!(orbit_dim(&h, &q, RANK_TOL).unwrap(), model.expected_dim.unwrap(), "case {d}");
            }
        }
    }

    #[test]
    fn orbit_models_are_invariant() {
        use crate::lie::exp_series;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 2..=4 {
            for d in CaseDescriptor::all(n)
                .into_iter()
                .filter(|d| !matches!(d.case, Case::OneA | Case::OneB | Case::OneC { .. }))
            {
                let h = case_subalgebra(&d).unwrap();
                for i in 0..4 {
                    let p = sample_ads_point(n, Model::Complex, derive_seed(21, i), &Constraint::none()).unwrap();
                    let model = case_orbit_model(&d, &p).unwrap();
                    let coeffs: Vec<f64> = (0..h.dim()).map(|_| rng.random_range(-0.7..0.7)).collect();
                    let x = AlgebraElement::combination(&coeffs, h.basis()).unwrap();
                    let g = exp_series(&x, 1e-14).unwrap();
                    let q = p.transform(g.mat()).unwrap();
                    assert!(model.contains(&q), "case {d}");
                }
            }
        }
    }

    #[test]
    fn same_phase_through_real_points() {
        let n = 3;
        let d = case(Case::Three, n);
        let t: f64 = 0.8;
        let lambda = C64::from_polar(1.0, 1.1);
        let mut x = DVector::zeros(n + 1);
        x[0] = lambda * t.cosh();
        x[1] = lambda * t.sinh();
        let p = AdsPoint::complex(x).unwrap();
        let model = case_orbit_model(&d, &p).unwrap();
        assert!(matches!(model.shape, crate::orbit::Shape::Predicate(Predicate::SamePhase)));
        assert_eq!(model.expected_dim, Some(n + 1));
    }

    #[test]
    fn fn_criterion() {
        let n = 3;
        let a = Subalgebra::new(U, n, vec![su_flat_generator(U, n)]).unwrap();
        assert!(fn_cohomogeneity_one(&a).unwrap());
        assert!(fn_cohomogeneity_one(&f_c(2.0, n).unwrap()).unwrap());
        assert_eq!(extract_c(&f_c(2.0, n).unwrap()).unwrap(), 2.0);

        let k0 = Subalgebra::new(U, n, k0_u1n(n)).unwrap();
        assert!(matches!(fn_cohomogeneity_one(&k0), Err(Error::Precondition(_))));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let good = random_f(n, 0.5, 0.0, &mut rng).unwrap();
        let bad = random_f(n, 0.5, 0.7, &mut rng).unwrap();
        assert!(fn_cohomogeneity_one(&good).unwrap());
        assert!(!fn_cohomogeneity_one(&bad).unwrap());
        let rep = cohomogeneity(&fn_algebra(&bad).unwrap(), 10, 2, &[]).unwrap();
        assert_eq!(rep.cohomogeneity, Some(0));

        let p = sample_ads_point(n, Model::Complex, 3, &Constraint::none()).unwrap();
        let c = extract_c(&good).unwrap();
        assert!((c - 0.5).abs() < 1e-12);
        assert!(fn_orbit_equivalence_check(&good, c, &p).unwrap());
        assert!(!fn_orbit_equivalence_check(&good, c + 1.0, &p).unwrap());
    }
}

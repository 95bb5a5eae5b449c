//! Frozen values, each next to the independent computation that produced it.

use approx::assert_relative_eq;
use nalgebra::DVector;

use ads_orbits::indefinite::{hermitian_real_part, scalar_product, AdsPoint, Model, Signature, C64, RANK_TOL};
use ads_orbits::lie::{btheta_inner, killing_ad, killing_form, AlgebraKind, Subalgebra};
use ads_orbits::orbit::{fiber_contained, geodesic_exp, orbit_dim};
use ads_orbits::roots::{h_ab, iwasawa_parts, maximal_flat, nilpotency_degree, root_decomposition, Root};
use ads_orbits::so2n::{parabolic, solve_n_element_so};
use ads_orbits::su1n::{
    case_orbit_model, case_subalgebra, solve_slice_element, Case, CaseDescriptor, ClosedForm, SGeometry, SliceKind,
};
use ads_orbits::Error;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn scalar_products() {
    let x = DVector::from_vec(vec![1.0, 0.0, 1.0, 0.0, 0.0]);
    assert_eq!(scalar_product(&x, &x, Signature::new(2, 3)).unwrap(), 0.0);
    let z = DVector::from_element(3, c(1.0, 0.0));
    assert_eq!(hermitian_real_part(&z, &z).unwrap(), 1.0);
}

#[test]
fn killing_of_h10() {
    // tr(H_{1,0}^2) = 2 and the form is n tr(XY)
    let h = h_ab(1.0, 0.0, 3);
    assert_relative_eq!(killing_form(&h, &h).unwrap(), 6.0, epsilon = 1e-12);
    assert_relative_eq!(killing_ad(&h, &h).unwrap(), 6.0, epsilon = 1e-9);
    assert_relative_eq!(btheta_inner(&h, &h).unwrap(), 6.0, epsilon = 1e-12);
}

#[test]
fn so23_bookkeeping() {
    let dec = root_decomposition(AlgebraKind::So2n, 3).unwrap();
    let (k0, a, n) = iwasawa_parts(&dec).unwrap();
    assert_eq!((k0.dim(), a.dim(), n.dim()), (0, 2, 4));
    // k0 + a + n, then one negative root space each
    let dims: Vec<usize> = [vec![], vec![Root::alpha2()], vec![Root::alpha1()]]
        .iter()
        .map(|phi| parabolic(phi, 3).unwrap().q.dim())
        .collect();
    assert_eq!(dims, vec![6, 7, 7]);
}

#[test]
fn nilpotency_degrees() {
    for (kind, n, degree) in [(AlgebraKind::So2n, 4, 3), (AlgebraKind::Su1n, 3, 2)] {
        let (_, _, nil) = iwasawa_parts(&root_decomposition(kind, n).unwrap()).unwrap();
        assert_eq!(nilpotency_degree(&nil).unwrap(), degree);
    }
}

#[test]
fn case_two_dimensions() {
    // dim s(u(1,k) + u(n-k)) = (k+1)^2 + (n-k)^2 - 1
    for n in 2..=4 {
        for k in 0..n {
            let d = CaseDescriptor::new(Case::Two { k }, n).unwrap();
            let h = case_subalgebra(&d).unwrap();
            assert_eq!(h.dim(), (k + 1) * (k + 1) + (n - k) * (n - k) - 1, "n={n} k={k}");
        }
    }
}

#[test]
fn hyperplane_case_model_dimension() {
    // 3 + dim_R w with dim_R w = 2(n-1) - 1
    for n in 2..=4 {
        let d = CaseDescriptor::new(Case::Four { r: 1 }, n).unwrap();
        let e0 = AdsPoint::base_point(Model::Complex, n);
        let model = case_orbit_model(&d, &e0).unwrap();
        assert_eq!(model.subspace_dim(), Some(2 * n), "n={n}");
    }
}

#[test]
fn s_solver_on_the_flat() {
    let (ch, sh) = (1f64.cosh(), 1f64.sinh());
    let n = 3;
    let p = AdsPoint::base_point(Model::Complex, n);
    let q = AdsPoint::complex(DVector::from_vec(vec![c(ch, 0.0), c(sh, 0.0), c(0.0, 0.0), c(0.0, 0.0)])).unwrap();
    let form = solve_slice_element(SliceKind::S(SGeometry::TotallyReal { r: 1 }), &p, &q).unwrap();
    let x = match form {
        ClosedForm::S(s) => s.x,
        ClosedForm::A { x } => x,
        other => panic!("unexpected {other:?}"),
    };
    // x = -ln(a_0 - a_1)
    assert_relative_eq!(x, -(ch - sh).ln(), epsilon = 1e-12);
    assert_relative_eq!(x, 1.0, epsilon = 1e-12);
}

#[test]
fn geodesic_from_base_point() {
    let p = AdsPoint::base_point(Model::Complex, 2);
    let xi = DVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let q = geodesic_exp(&p, &xi, 1.0).unwrap();
    let expected = [c(1f64.cosh(), 0.0), c(1f64.sinh(), 0.0), c(0.0, 0.0)];
    for (a, b) in q.coords().iter().zip(expected) {
        assert!((a - b).norm() < 1e-14);
    }
}

#[test]
fn flat_alone_misses_the_fibre() {
    let n = 3;
    let a = Subalgebra::new(AlgebraKind::Su1n, n, maximal_flat(AlgebraKind::Su1n, n).unwrap()).unwrap();
    let e0 = AdsPoint::base_point(Model::Complex, n);
    assert_eq!(orbit_dim(&a, &e0, RANK_TOL).unwrap(), 1);
    assert!(!fiber_contained(&a, &e0).unwrap());
}

#[test]
fn both_slices_at_once_is_not_a_point() {
    // x_0 = x_2 and x_1 = x_3 make the negative part cancel, so <p,p> >= 0
    let err = AdsPoint::real(&[1.0, 1.0, 1.0, 1.0, 0.5]).unwrap_err();
    assert!(matches!(err, Error::Constraint(_) | Error::Argument(_) | Error::Precondition(_)), "{err:?}");
    let e0 = AdsPoint::base_point(Model::Real, 3);
    assert!(solve_n_element_so(&e0, &e0).is_ok());
}

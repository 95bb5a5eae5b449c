use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{guarded, scaled_deviation, Check, Settings};
use crate::indefinite::{
    complex_to_real, derive_seed, numerical_rank, sample_ads_point, AdsPoint, Constraint, Model, C64, RANK_TOL,
};
use crate::kaehler::{build_w_decomposition, constant_kaehler_angle};
use crate::lie::{exp_series, AlgebraKind, Subalgebra};
use crate::orbit::{cohomogeneity, fiber_contained, invariant_subspace, orbit_dim, tube_sample};
use crate::roots::{
    closed_form_root_space, eigen_residual, flattened, iwasawa_parts, nilpotency_degree, root_decomposition,
    su_flat_generator, Root,
};
use crate::su1n::{
    case_orbit_model, case_subalgebra, exp_closed, extract_c, f_c, fn_algebra, fn_cohomogeneity_one,
    fn_orbit_equivalence_check, geometries, k0_traceless_block, random_f, s_algebra, s_slice_point, singular_orbit_dim,
    singular_subspace, slice_orbit_model, solve_slice_element, Case, CaseDescriptor, ClosedForm, SGeometry, SliceKind,
};

const SU: AlgebraKind = AlgebraKind::Su1n;
const U: AlgebraKind = AlgebraKind::U1n;

fn rand_c(len: usize, scale: f64, rng: &mut ChaCha8Rng) -> DVector<C64> {
    DVector::from_fn(len, |_, _| C64::new(rng.random_range(-scale..=scale), rng.random_range(-scale..=scale)))
}

fn su_points(n: usize, count: usize, seed: u64) -> crate::Result<Vec<AdsPoint>> {
    (0..count as u64).map(|i| sample_ads_point(n, Model::Complex, derive_seed(seed, i), &Constraint::none())).collect()
}

/// `{±a, ±2a}` with multiplicities `2(n-1)` and `1`.
pub fn su_root_structure(n: usize, s: &Settings) -> Vec<Check> {
    let tag = format!("n={n}");
    guarded(&format!("{tag}/root-decomposition"), || {
        let dec = root_decomposition(SU, n)?;
        let found: BTreeSet<String> = dec.spaces.keys().map(Root::to_string).collect();
        let expected: BTreeSet<String> = [-2, -1, 1, 2].iter().map(|&c| Root(vec![c]).to_string()).collect();
        let mults: Vec<usize> = [1, -1, 2, -2].iter().map(|&c| dec.multiplicity(&Root(vec![c]))).collect();
        let m = 2 * (n - 1);
        let mut worst: f64 = 0.0;
        let mut mismatched = Vec::new();
        for (root, basis) in &dec.spaces {
            let closed = closed_form_root_space(SU, n, root)?;
            let mut all = flattened(basis);
            all.extend(flattened(&closed));
            if numerical_rank(&all, RANK_TOL)? != basis.len() || closed.len() != basis.len() {
                mismatched.push(root.to_string());
            }
            worst = worst.max(eigen_residual(&dec, root)?);
        }
        Ok(vec![
            Check::equal(format!("{tag}/root-set"), found, expected),
            Check::equal(format!("{tag}/multiplicities"), mults, vec![m, m, 1, 1]),
            Check::holds(
                format!("{tag}/closed-form-spans"),
                mismatched.is_empty() && worst <= s.tol_or(RANK_TOL),
                json!(mismatched),
                json!([]),
            )
            .with_max_err(worst),
        ])
    })
}

/// Closed-form exponentials of `A`, `N` and `S` against the series.
pub fn su_exp_forms(n: usize, s: &Settings) -> Vec<Check> {
    let tag = format!("n={n}/exp-su");
    guarded(&tag, || {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed_for(10, n));
        let geoms = geometries(n, FRAC_PI_3);
        let mut worst = [0.0f64; 3];
        for i in 0..s.samples {
            let a = ClosedForm::A { x: rng.random_range(-2.0..=2.0) };
            let nf = ClosedForm::N { mu: rng.random_range(-2.0..=2.0), v: rand_c(n - 1, 1.0, &mut rng) };
            let sf = ClosedForm::S(geoms[i % geoms.len()].random_element(n, &mut rng)?);
            for (slot, form) in [a, nf, sf].iter().enumerate() {
                let closed = exp_closed(form, n)?;
                let series = exp_series(&form.algebra_element(n)?, 1e-16)?;
                worst[slot] = worst[slot].max(scaled_deviation(closed.mat(), series.mat()));
            }
        }
        let tol = s.tol_or(1e-10);
        Ok(["a", "n", "s"].iter().zip(worst).map(|(l, w)| Check::bounded(format!("{tag}/{l}"), w, tol)).collect())
    })
}

/// Round trips of the `N` and `S` slice solvers.
pub fn su_slice_solvers(n: usize, s: &Settings) -> Vec<Check> {
    let tag = format!("n={n}/solve-su");
    guarded(&tag, || {
        let seed = s.seed_for(11, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tol = s.tol_or(1e-9);
        let residual = |p: &AdsPoint, q: &AdsPoint, form: &ClosedForm| -> crate::Result<f64> {
            let moved = p.transform(exp_closed(form, n)?.mat())?;
            Ok((moved.coords() - q.coords()).norm() / q.coords().norm().max(1.0))
        };
        let mut worst_n: f64 = 0.0;
        for p in su_points(n, s.samples, seed)? {
            let q = slice_orbit_model(SliceKind::N, &p)?.sample(&mut rng)?;
            let form = solve_slice_element(SliceKind::N, &p, &q)?;
            worst_n = worst_n.max(residual(&p, &q, &form)?);
        }
        let mut out = vec![Check::bounded(format!("{tag}/n"), worst_n, tol)];
        let geoms = geometries(n, FRAC_PI_3);
        let mut worst_s: f64 = 0.0;
        for i in 0..s.samples {
            let geom = geoms[i % geoms.len()];
            let perp = geom.w_perp(n)?;
            let mut u = DVector::zeros(n - 1);
            for b in perp.basis() {
                u += b * C64::new(rng.random_range(-1.0..=1.0), 0.0);
            }
            let lambda = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            let p = s_slice_point(&geom, n, lambda, &u)?;
            let q = slice_orbit_model(SliceKind::S(geom), &p)?.sample(&mut rng)?;
            let form = solve_slice_element(SliceKind::S(geom), &p, &q)?;
            worst_s = worst_s.max(residual(&p, &q, &form)?);
        }
        out.push(Check::bounded(format!("{tag}/s"), worst_s, tol));
        Ok(out)
    })
}

fn real_dim(vectors: &[DVector<C64>]) -> crate::Result<usize> {
    numerical_rank(&vectors.iter().map(complex_to_real).collect::<Vec<_>>(), RANK_TOL)
}

/// The classification statements for every case at `n`: cohomogeneity one,
/// orbit dimensions through `e_0`, the subspaces `W`, fibre containment and
/// the `F N` criterion.
pub fn classification(n: usize, s: &Settings) -> Vec<Check> {
    let tag = format!("n={n}");
    let mut out = Vec::new();
    let e0 = AdsPoint::base_point(Model::Complex, n);
    let seed = s.seed_for(12, n);
    for d in CaseDescriptor::all(n) {
        let name = format!("{tag}/case {d}");
        out.extend(guarded(&name, || {
            let h = case_subalgebra(&d)?;
            let mut checks = Vec::new();
            let coh = cohomogeneity(&h, s.samples, seed, &[])?;
            checks.push(Check::equal(format!("{name}/cohomogeneity"), coh.cohomogeneity, Some(1)));
            match d.case {
                Case::OneA | Case::OneB | Case::OneC { .. } => {
                    let mut dims = coh.dims.clone();
                    dims.insert(orbit_dim(&h, &e0, RANK_TOL)?);
                    checks.push(Check::equal(format!("{name}/all-principal"), dims, BTreeSet::from([2 * n])));
                }
                Case::Two { k } => {
                    checks.push(Check::equal(format!("{name}/dim-at-e0"), orbit_dim(&h, &e0, RANK_TOL)?, 2 * k + 1));
                }
                Case::Three => {
                    let dim = orbit_dim(&h, &e0, RANK_TOL)?;
                    checks.push(Check::equal(format!("{name}/dim-at-e0"), Some(dim), singular_orbit_dim(&d)));
                }
                Case::Four { .. } | Case::Five { .. } => {
                    let w = singular_subspace(&d)?;
                    checks.push(Check::equal(format!("{name}/invariant-W"), invariant_subspace(&h, &w)?, true));
                    let dim = orbit_dim(&h, &e0, RANK_TOL)?;
                    checks.push(Check::equal(format!("{name}/dim-at-e0"), dim + 1, real_dim(&w)?));
                    // the linear hull of S.e_0 is invariant under s
                    let geom = d.geometry().expect("cases 4 and 5 carry a geometry");
                    let v = s_hull(&geom, n)?;
                    let sa = s_algebra(&geom, n)?.retag(U)?;
                    checks.push(Check::equal(format!("{name}/invariant-V"), invariant_subspace(&sa, &v)?, true));
                }
            }
            if d.contains_fibres() {
                let mut missing = 0usize;
                for p in su_points(n, s.samples, derive_seed(seed, 1))? {
                    if !fiber_contained(&h, &p)? {
                        missing += 1;
                    }
                }
                checks.push(Check::equal(format!("{name}/fibres-missing"), missing, 0));
            }
            Ok(checks)
        }));
    }
    out.extend(guarded(&format!("{tag}/fn-criterion"), || {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 2));
        let mut disagree = Vec::new();
        let trials = 20.min(s.samples.max(4));
        for i in 0..trials {
            let c = rng.random_range(-2.0..=2.0);
            let y = if i % 2 == 0 { 0.0 } else { rng.random_range(0.2..=1.5) };
            let f = random_f(n, c, y, &mut rng)?;
            let predicted = fn_cohomogeneity_one(&f)?;
            let measured = cohomogeneity(&fn_algebra(&f)?, 8, derive_seed(seed, 100 + i as u64), &[])?;
            if predicted != (measured.cohomogeneity == Some(1)) {
                disagree.push(json!([c, y, measured.cohomogeneity]));
            }
        }
        Ok(vec![Check::holds(
            format!("{tag}/fn-criterion-vs-measured"),
            disagree.is_empty(),
            json!(disagree),
            json!([]),
        )])
    }));
    out
}

/// `span_R{e_0, e_1, i(e_0 + e_1)} + w`.
fn s_hull(geom: &SGeometry, n: usize) -> crate::Result<Vec<DVector<C64>>> {
    let size = n + 1;
    let unit = |j: usize, z: C64| {
        let mut v = DVector::zeros(size);
        v[j] = z;
        v
    };
    let (one, i) = (C64::new(1.0, 0.0), C64::new(0.0, 1.0));
    let mut v = vec![unit(0, one), unit(1, one), unit(0, i) + unit(1, i)];
    for b in geom.w(n)?.basis() {
        let mut x = DVector::zeros(size);
        x.rows_mut(2, n - 1).copy_from(b);
        v.push(x);
    }
    Ok(v)
}

/// `(f + n).p = (f_c + n).p` for admissible `f`, and the `k_0 + a` example.
pub fn fn_reduction(n: usize, s: &Settings) -> Vec<Check> {
    let tag = format!("n={n}/fn-reduction");
    guarded(&tag, || {
        let seed = s.seed_for(13, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut unequal = 0usize;
        let mut worst_c: f64 = 0.0;
        for p in su_points(n, s.samples, seed)? {
            let c = rng.random_range(-2.0..=2.0);
            let f = random_f(n, c, 0.0, &mut rng)?;
            let found = extract_c(&f)?;
            worst_c = worst_c.max((found - c).abs());
            if !fn_orbit_equivalence_check(&f, found, &p)? {
                unequal += 1;
            }
        }
        let mut block = k0_traceless_block(n);
        block.push(su_flat_generator(U, n));
        let k0a = Subalgebra::new(U, n, block)?;
        let mut example_unequal = 0usize;
        for p in su_points(n, s.samples.min(50), derive_seed(seed, 1))? {
            if !fn_orbit_equivalence_check(&k0a, 0.0, &p)? {
                example_unequal += 1;
            }
        }
        Ok(vec![
            Check::equal(format!("{tag}/tangent-space-mismatches"), unequal, 0),
            Check::bounded(format!("{tag}/extracted-c"), worst_c, 1e-9),
            Check::equal(format!("{tag}/k0-plus-a-vs-a-mismatches"), example_unequal, 0),
            Check::equal(
                format!("{tag}/f0-is-a"),
                f_c(0.0, n)?.same_span(&Subalgebra::new(U, n, vec![su_flat_generator(U, n)])?, 1e-12),
                true,
            ),
        ])
    })
}

/// Constant Kaehler angle of `w^perp` and its dimension `2l`.
pub fn kaehler_angles(n: usize, s: &Settings) -> Vec<Check> {
    let tag = format!("n={n}/kaehler");
    let mut out = Vec::new();
    for l in 1..=n.saturating_sub(1) / 2 {
        let k = n - 1 - 2 * l;
        for phi in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, FRAC_PI_2] {
            let name = format!("{tag}/k={k},l={l},phi={phi:.6}");
            out.extend(guarded(&name, || {
                let d = build_w_decomposition(k, l, phi, n)?;
                let angle = constant_kaehler_angle(&d.w_perp, 1e-9);
                let err = angle.map_or(f64::INFINITY, |a| (a - phi).abs());
                Ok(vec![
                    Check::bounded(format!("{name}/angle"), err, s.tol_or(1e-9)),
                    Check::equal(format!("{name}/dim-w-perp"), d.w_perp.dim(), 2 * l),
                    Check::equal(
                        format!("{name}/complexification"),
                        d.w_phi.complexification()?.same_span(&d.w_phi.sum(&d.w_perp)?, 1e-9),
                        true,
                    ),
                ])
            }));
        }
    }
    out
}

/// Points at distance `r` from the singular orbit through `e_0` are
/// principal, with one value of the orbit invariant (cases 2 and 5).
pub fn tubes(n: usize, s: &Settings) -> Vec<Check> {
    let mut out = Vec::new();
    let e0 = AdsPoint::base_point(Model::Complex, n);
    let count = 20.min(s.samples.max(1));
    for d in CaseDescriptor::all(n) {
        if !matches!(d.case, Case::Two { .. } | Case::Five { .. }) {
            continue;
        }
        for r in [0.5, 1.0] {
            let name = format!("n={n}/tube/case {d}/r={r}");
            out.extend(guarded(&name, || {
                let h = case_subalgebra(&d)?;
                let points = tube_sample(&h, &e0, r, count, s.seed_for(14, n))?;
                let mut dims = BTreeSet::new();
                let mut radii = Vec::new();
                for p in &points {
                    dims.insert(orbit_dim(&h, p, RANK_TOL)?);
                    radii.push(case_orbit_model(&d, p)?.invariant("radius").unwrap_or(f64::NAN));
                }
                let lo = radii.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = radii.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Ok(vec![
                    Check::equal(format!("{name}/dims"), dims, BTreeSet::from([2 * n])),
                    Check::bounded(format!("{name}/invariant-spread"), hi - lo, 1e-9),
                ])
            }));
        }
    }
    out
}

/// The nilradical of `su(1,n)` is 2-step nilpotent.
pub fn nilpotency_su(n: usize, _s: &Settings) -> Vec<Check> {
    let name = format!("n={n}/nilpotency-su");
    guarded(&name, || {
        let dec = root_decomposition(SU, n)?;
        let (_, _, nil) = iwasawa_parts(&dec)?;
        Ok(vec![Check::equal(name.clone(), nilpotency_degree(&nil).ok(), Some(2))])
    })
}

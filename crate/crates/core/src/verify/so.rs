use std::collections::BTreeSet;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{guarded, scaled_deviation, Check, Settings};
use crate::indefinite::{derive_seed, numerical_rank, sample_ads_point, Constraint, Model, RANK_TOL};
use crate::lie::{exp_series, killing_ad, killing_form, random_element, AlgebraKind, Subalgebra};
use crate::orbit::{cohomogeneity, orbit_dim, tangent_space};
use crate::roots::{
    closed_form_root_space, eigen_residual, flattened, iwasawa_parts, nilpotency_degree, positive_roots,
    root_decomposition, Root,
};
use crate::so2n::{
    exp_n_closed, leaf_id, n_orbit_model, nilradical, on_singular_locus, parabolic, random_group_element, rh_line,
    solve_n_element_so, LeafGroup, LeafLabel, NExpKind,
};

const SO: AlgebraKind = AlgebraKind::So2n;

fn rand_vec(len: usize, scale: f64, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_fn(len, |_, _| rng.random_range(-scale..=scale))
}

/// Restricted roots, multiplicities and agreement with the closed-form root
/// spaces.
pub fn so_root_structure(n: usize, s: &Settings) -> Vec<Check> {
    let tag = format!("n={n}");
    guarded(&format!("{tag}/root-decomposition"), || {
        let dec = root_decomposition(SO, n)?;
        let mut out = Vec::new();
        let found: BTreeSet<String> = dec.spaces.keys().map(Root::to_string).collect();
        let mut expected = BTreeSet::new();
        for r in positive_roots(SO)? {
            expected.insert(r.neg().to_string());
            expected.insert(r.to_string());
        }
        out.push(Check::equal(format!("{tag}/root-set"), found, expected));
        let mults: Vec<usize> =
            positive_roots(SO)?.iter().flat_map(|r| [dec.multiplicity(r), dec.multiplicity(&r.neg())]).collect();
        let m = n - 2;
        out.push(Check::equal(format!("{tag}/multiplicities"), mults, vec![1, 1, m, m, m, m, 1, 1]));
        let mut worst: f64 = 0.0;
        let mut mismatched = Vec::new();
        for (root, basis) in &dec.spaces {
            let closed = closed_form_root_space(SO, n, root)?;
            let mut all = flattened(basis);
            all.extend(flattened(&closed));
            if numerical_rank(&all, RANK_TOL)? != basis.len() || closed.len() != basis.len() {
                mismatched.push(root.to_string());
            }
            worst = worst.max(eigen_residual(&dec, root)?);
        }
        out.push(
            Check::holds(
                format!("{tag}/closed-form-spans"),
                mismatched.is_empty() && worst <= s.tol_or(RANK_TOL),
                json!(mismatched),
                json!([]),
            )
            .with_max_err(worst),
        );
        Ok(out)
    })
}

/// `n tr(XY)` against the trace of `ad X ad Y`.
pub fn killing_identity(n: usize, s: &Settings) -> Vec<Check> {
    let name = format!("n={n}/killing-form");
    guarded(&name, || {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed_for(1, n));
        let mut worst: f64 = 0.0;
        for _ in 0..s.samples {
            let x = random_element(SO, n, &mut rng);
            let y = random_element(SO, n, &mut rng);
            let closed = killing_form(&x, &y)?;
            let oracle = killing_ad(&x, &y)?;
            let scale = oracle.abs().max(1e-12 * x.norm() * y.norm() * n as f64);
            worst = worst.max((closed - oracle).abs() / scale);
        }
        Ok(vec![Check::bounded(name.clone(), worst, s.tol_or(1e-8))])
    })
}

/// Closed-form exponentials of the two families of `n` against the series.
pub fn so_exp_forms(n: usize, s: &Settings) -> Vec<Check> {
    let tag = format!("n={n}/exp-so");
    guarded(&tag, || {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed_for(2, n));
        let (mut sing, mut prin): (f64, f64) = (0.0, 0.0);
        for _ in 0..s.samples {
            let a = rng.random_range(-2.0..=2.0);
            let b = rng.random_range(-2.0..=2.0);
            let singular = NExpKind::Singular { a, v: rand_vec(n - 2, 2.0, &mut rng) };
            let principal = NExpKind::Principal { a, b, w: rand_vec(n - 2, 2.0, &mut rng) };
            for (kind, worst) in [(singular, &mut sing), (principal, &mut prin)] {
                let closed = exp_n_closed(&kind, n)?;
                let series = exp_series(&kind.element(n).algebra_element(n)?, 1e-16)?;
                *worst = worst.max(scaled_deviation(closed.mat(), series.mat()));
            }
        }
        let tol = s.tol_or(1e-10);
        Ok(vec![
            Check::bounded(format!("{tag}/singular"), sing, tol),
            Check::bounded(format!("{tag}/principal"), prin, tol),
        ])
    })
}

fn so_points(
    n: usize,
    count: usize,
    seed: u64,
    constraint: &Constraint,
) -> crate::Result<Vec<crate::indefinite::AdsPoint>> {
    (0..count as u64).map(|i| sample_ads_point(n, Model::Real, derive_seed(seed, i), constraint)).collect()
}

/// `N` has cohomogeneity one and orbit dimension `n` off `p_1 = p_3`,
/// `n - 1` on it.
pub fn n_action(n: usize, s: &Settings) -> Vec<Check> {
    let tag = format!("n={n}/n-action");
    guarded(&tag, || {
        let h = nilradical(n)?;
        let seed = s.seed_for(3, n);
        let constrained = (s.samples / 4).max(1);
        let mut points = so_points(n, s.samples, seed, &Constraint::none())?;
        points.extend(so_points(n, constrained, derive_seed(seed, 1 << 32), &Constraint::p2_eq_p4())?);
        let mut wrong = 0usize;
        let mut dims = BTreeSet::new();
        for p in &points {
            let d = orbit_dim(&h, p, RANK_TOL)?;
            dims.insert(d);
            let expected = if on_singular_locus(p) { n - 1 } else { n };
            if d != expected {
                wrong += 1;
            }
        }
        let coh = cohomogeneity(&h, s.samples, seed, &[Constraint::none(), Constraint::p2_eq_p4()])?;
        Ok(vec![
            Check::equal(format!("{tag}/cohomogeneity"), coh.cohomogeneity, Some(1)),
            Check::equal(format!("{tag}/dims"), dims, BTreeSet::from([n - 1, n])),
            Check::equal(format!("{tag}/split-by-locus-mismatches"), wrong, 0),
        ])
    })
}

/// Round trip `exp(solve(p, q)) p = q` on both kinds of slice.
pub fn so_slice_solver(n: usize, s: &Settings) -> Vec<Check> {
    let tag = format!("n={n}/solve-n-so");
    guarded(&tag, || {
        let seed = s.seed_for(4, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let half = s.samples.div_ceil(2);
        let mut out = Vec::new();
        for (label, constraint) in [("principal", Constraint::none()), ("singular", Constraint::p2_eq_p4())] {
            let mut worst: f64 = 0.0;
            for p in so_points(n, half, derive_seed(seed, label.len() as u64), &constraint)? {
                let model = n_orbit_model(&p)?;
                let q = model.sample(&mut rng)?;
                let sol = solve_n_element_so(&p, &q)?;
                let moved = p.transform(exp_n_closed(&sol, n)?.mat())?;
                let res = (moved.coords() - q.coords()).norm() / q.coords().norm().max(1.0);
                worst = worst.max(res);
            }
            out.push(Check::bounded(format!("{tag}/{label}"), worst, s.tol_or(1e-9)));
        }
        Ok(out)
    })
}

/// Orbits of the parabolics: `Q_2` is transitive, `Q_0` and `Q_1` have
/// dimension `n` on the locus, and leaf labels are preserved by the groups.
pub fn parabolic_orbits(n: usize, s: &Settings) -> Vec<Check> {
    let tag = format!("n={n}/parabolic-orbits");
    guarded(&tag, || {
        let seed = s.seed_for(5, n);
        let on_locus = (s.samples / 5).max(1);
        let mut points = so_points(n, s.samples.saturating_sub(on_locus), seed, &Constraint::none())?;
        let locus = so_points(n, on_locus, derive_seed(seed, 1 << 32), &Constraint::p2_eq_p4())?;
        points.extend(locus.iter().cloned());
        let q0 = LeafGroup::QEmpty.algebra(n)?;
        let q1 = LeafGroup::Q1.algebra(n)?;
        let q2 = LeafGroup::Q2.algebra(n)?;
        let mut out = Vec::new();
        let q2_dims: BTreeSet<usize> =
            points.iter().map(|p| orbit_dim(&q2, p, RANK_TOL)).collect::<crate::Result<_>>()?;
        out.push(Check::equal(format!("{tag}/q2-dims"), q2_dims, BTreeSet::from([n + 1])));
        let mut low = BTreeSet::new();
        for p in &locus {
            low.insert(orbit_dim(&q0, p, RANK_TOL)?);
            low.insert(orbit_dim(&q1, p, RANK_TOL)?);
        }
        out.push(Check::equal(format!("{tag}/q0-q1-dims-on-locus"), low, BTreeSet::from([n])));

        // (a + n).p = {x : <x, p> = 0, x_1 = x_3} on the locus
        let an = LeafGroup::AN.algebra(n)?;
        let mut bad = 0usize;
        for p in &locus {
            let t = tangent_space(&an, p)?;
            let in_plane = t.iter().all(|v| (v[1] - v[3]).abs() <= 1e-10 * v.norm().max(1.0));
            if !in_plane || numerical_rank(&t, RANK_TOL)? != n {
                bad += 1;
            }
        }
        out.push(Check::equal(format!("{tag}/an-tangent-on-locus-mismatches"), bad, 0));

        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 2));
        for group in LeafGroup::ALL {
            let h = group.algebra(n)?;
            let (mut moved_off, mut wrong_dim) = (0usize, 0usize);
            let full = n + 1;
            for p in points.iter().step_by((points.len() / 50).max(1)) {
                let g = random_group_element(&h, 0.5, &mut rng)?;
                let q = p.transform(g.mat())?;
                let (a, b) = (leaf_id(group, p)?, leaf_id(group, &q)?);
                if !a.same_leaf(&b, 1e-8) {
                    moved_off += 1;
                }
                let d = orbit_dim(&h, p, RANK_TOL)?;
                let expected = match (group, a.label) {
                    (LeafGroup::Q2, _) => full,
                    (LeafGroup::N | LeafGroup::A1N, LeafLabel::Principal(_)) => n,
                    (LeafGroup::N, _) => n - 1,
                    (LeafGroup::A1N, _) => n,
                    (_, LeafLabel::PrincipalPlus | LeafLabel::PrincipalMinus) => full,
                    _ => n,
                };
                if d != expected {
                    wrong_dim += 1;
                }
            }
            out.push(Check::equal(format!("{tag}/leaf-preserved/{group}"), moved_off, 0));
            out.push(Check::equal(format!("{tag}/leaf-orbit-dim/{group}"), wrong_dim, 0));
        }
        Ok(out)
    })
}

/// `R H_{a,b} + n` has cohomogeneity one exactly when `b = 0`.
pub fn an_lines(n: usize, s: &Settings) -> Vec<Check> {
    let tag = format!("n={n}/lines-in-a");
    guarded(&tag, || {
        let grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let samples = (s.samples / 10).max(3);
        let mut wrong = Vec::new();
        for &a in &grid {
            for &b in &grid {
                if a == 0.0 && b == 0.0 {
                    continue;
                }
                let h = rh_line(a, b, n)?;
                let coh = cohomogeneity(&h, samples, s.seed_for(6, n), &[])?;
                if (coh.cohomogeneity == Some(1)) != (b == 0.0) {
                    wrong.push(json!([a, b, coh.cohomogeneity]));
                }
            }
        }
        let n_alone = cohomogeneity(&nilradical(n)?, samples, s.seed_for(6, n), &[])?;
        Ok(vec![
            Check::holds(format!("{tag}/cohomogeneity-one-iff-b-zero"), wrong.is_empty(), json!(wrong), json!([])),
            Check::equal(format!("{tag}/n-alone"), n_alone.cohomogeneity, Some(1)),
        ])
    })
}

/// Dimensions, closure and nilpotency of the Langlands decompositions.
pub fn parabolic_structure(n: usize, _s: &Settings) -> Vec<Check> {
    let tag = format!("n={n}/parabolic");
    guarded(&tag, || {
        let k0 = (n - 2) * (n - 3) / 2;
        let q_empty = k0 + 2 + 2 * (n - 2) + 2;
        let mut out = Vec::new();
        let cases = [
            ("q0", Vec::new(), None, q_empty),
            ("q1", vec![Root::alpha2()], Some(Root::alpha2().neg()), q_empty + n - 2),
            ("q2", vec![Root::alpha1()], Some(Root::alpha1().neg()), q_empty + 1),
        ];
        let base = parabolic(&[], n)?;
        for (label, phi, extra, dim) in cases {
            let d = parabolic(&phi, n)?;
            out.push(Check::equal(format!("{tag}/{label}/dim"), d.q.dim(), dim));
            let closure = d.q.closure_residual().max(d.l.closure_residual());
            out.push(Check::bounded(format!("{tag}/{label}/bracket-closed"), closure, 1e-9));
            out.push(Check::equal(format!("{tag}/{label}/direct-sum"), d.l.dim() + d.n.dim(), d.q.dim()));
            out.push(Check::holds(
                format!("{tag}/{label}/n-nilpotent"),
                nilpotency_degree(&d.n).is_ok(),
                json!(nilpotency_degree(&d.n).ok()),
                json!("finite"),
            ));
            if let Some(root) = extra {
                let mut e = base.q.basis().to_vec();
                e.extend(closed_form_root_space(SO, n, &root)?);
                let sum = Subalgebra::new(SO, n, e)?;
                out.push(Check::equal(format!("{tag}/{label}/q0-plus-{root}"), sum.same_span(&d.q, 1e-9), true));
            }
        }
        out.push(Check::equal(format!("{tag}/q0/n-degree"), nilpotency_degree(&base.n).ok(), Some(3)));
        out.push(Check::holds(
            format!("{tag}/full-set-rejected"),
            parabolic(&[Root::alpha1(), Root::alpha2()], n).is_err(),
            json!("error"),
            json!("error"),
        ));
        Ok(out)
    })
}

/// The nilradical of `so(2,n)` is 3-step nilpotent.
pub fn nilpotency_so(n: usize, _s: &Settings) -> Vec<Check> {
    let name = format!("n={n}/nilpotency-so");
    guarded(&name, || {
        let dec = root_decomposition(SO, n)?;
        let (_, _, nil) = iwasawa_parts(&dec)?;
        Ok(vec![Check::equal(name.clone(), nilpotency_degree(&nil).ok(), Some(3))])
    })
}

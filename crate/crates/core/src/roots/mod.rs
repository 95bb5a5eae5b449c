//! Maximal flats, restricted root spaces and the Iwasawa decomposition.
//!
//! Roots are integer tuples in the simple-root basis: `(c1, c2)` meaning
//! `c1 alpha_1 + c2 alpha_2` for `so(2,n)`, and `(c)` meaning `c alpha` for
//! `su(1,n)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::indefinite::C64;
use crate::lie::{btheta_fast, standard_basis, AlgebraElement, AlgebraKind, Subalgebra};

/// Absolute eigenvalue clustering tolerance.
pub const CLUSTER_TOL: f64 = 1e-6;

/// A restricted root in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(pub Vec<i32>);

impl Root {
    pub fn alpha1() -> Self {
        Root(vec![1, 0])
    }
    pub fn alpha2() -> Self {
        Root(vec![0, 1])
    }
    pub fn alpha() -> Self {
        Root(vec![1])
    }

    pub fn neg(&self) -> Self {
        Root(self.0.iter().map(|c| -c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c >= 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: &[&str] = if self.0.len() == 2 { &["a1", "a2"] } else { &["a"] };
        let mut first = true;
        for (c, name) in self.0.iter().zip(names) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// The positive roots in the ordering used throughout.
pub fn positive_roots(kind: AlgebraKind) -> Result<Vec<Root>> {
    match kind {
        AlgebraKind::So2n => Ok(vec![Root(vec![1, 0]), Root(vec![0, 1]), Root(vec![1, 1]), Root(vec![1, 2])]),
        AlgebraKind::Su1n => Ok(vec![Root(vec![1]), Root(vec![2])]),
        AlgebraKind::U1n => Err(Error::Tag("restricted roots are computed for su(1,n) and so(2,n)".into())),
    }
}

/// `H_{a,b}` in `so(2,n)`.
pub fn h_ab(a: f64, b: f64, n: usize) -> AlgebraElement {
    let mut m = DMatrix::zeros(n + 2, n + 2);
    m[(0, 2)] = C64::new(a, 0.0);
    m[(2, 0)] = C64::new(a, 0.0);
    m[(1, 3)] = C64::new(b, 0.0);
    m[(3, 1)] = C64::new(b, 0.0);
    AlgebraElement::new(AlgebraKind::So2n, n, m).expect("shape")
}

/// `E_01 + E_10`, the generator of the flat of `su(1,n)` (or `u(1,n)`).
pub fn su_flat_generator(kind: AlgebraKind, n: usize) -> AlgebraElement {
    let mut m = DMatrix::zeros(n + 1, n + 1);
    m[(0, 1)] = C64::new(1.0, 0.0);
    m[(1, 0)] = C64::new(1.0, 0.0);
    AlgebraElement::new(kind, n, m).expect("shape")
}

/// Basis of the fixed maximal flat.
pub fn maximal_flat(kind: AlgebraKind, n: usize) -> Result<Vec<AlgebraElement>> {
    match kind {
        AlgebraKind::So2n => Ok(vec![h_ab(1.0, 0.0, n), h_ab(0.0, 1.0, n)]),
        AlgebraKind::Su1n => Ok(vec![su_flat_generator(kind, n)]),
        AlgebraKind::U1n => Err(Error::Tag("maximal flat is defined for su(1,n) and so(2,n)".into())),
    }
}

/// Evaluate a root (simple-root coordinates) on the flat basis.
fn root_values(kind: AlgebraKind, root: &Root) -> Vec<f64> {
    match kind {
        // alpha_1 = (-1, 1), alpha_2 = (1, 0) on (H_{1,0}, H_{0,1})
        AlgebraKind::So2n => vec![(-root.0[0] + root.0[1]) as f64, root.0[0] as f64],
        _ => vec![root.0[0] as f64],
    }
}

/// Restricted root space decomposition with respect to [`maximal_flat`].
#[derive(Debug, Clone)]
pub struct RootDecomposition {
    pub kind: AlgebraKind,
    pub n: usize,
    pub flat: Vec<AlgebraElement>,
    /// Root spaces, each with a `B_theta`-orthonormal basis.
    pub spaces: BTreeMap<Root, Vec<AlgebraElement>>,
    pub k0: Vec<AlgebraElement>,
}

impl RootDecomposition {
    pub fn roots(&self) -> impl Iterator<Item = (&Root, usize)> {
        self.spaces.iter().map(|(r, b)| (r, b.len()))
    }

    pub fn multiplicity(&self, root: &Root) -> usize {
        self.spaces.get(root).map_or(0, Vec::len)
    }

    pub fn space(&self, root: &Root) -> Result<&[AlgebraElement]> {
        self.spaces.get(root).map(Vec::as_slice).ok_or_else(|| Error::Argument(format!("{root} is not a root")))
    }

    /// `g_0 = k_0 + a`.
    pub fn zero_space(&self) -> Vec<AlgebraElement> {
        let mut out = self.k0.clone();
        out.extend(self.flat.iter().cloned());
        out
    }

    pub fn zero_dim(&self) -> usize {
        self.k0.len() + self.flat.len()
    }

    /// Sum of root-space dimensions plus `dim g_0`.
    pub fn total_dim(&self) -> usize {
        self.spaces.values().map(Vec::len).sum::<usize>() + self.zero_dim()
    }

    /// `g_lambda` as a span.
    pub fn span(&self, root: &Root) -> Result<Subalgebra> {
        Subalgebra::span(self.kind, self.n, self.space(root)?.to_vec())
    }
}

/// `B_theta`-orthonormalise a family (Gram-Schmidt, twice), dropping
/// residuals with norm below `floor`.
fn btheta_orthonormalise(elements: Vec<AlgebraElement>, floor: f64) -> Vec<AlgebraElement> {
    let mut out: Vec<AlgebraElement> = Vec::new();
    for x in elements {
        let mut r = x.clone();
        for _ in 0..2 {
            for q in &out {
                let c = btheta_fast(q, &r);
                r = r.sub(&q.scale(c)).expect("same algebra");
            }
        }
        let nrm = btheta_fast(&r, &r).sqrt();
        if nrm > floor.max(1e-10 * btheta_fast(&x, &x).sqrt()) {
            out.push(r.scale(1.0 / nrm));
        }
    }
    out
}

fn compute(kind: AlgebraKind, n: usize) -> Result<RootDecomposition> {
    if n < kind.min_n() {
        return Err(Error::Argument(format!("{kind} root decomposition needs n >= {}", kind.min_n())));
    }
    let flat = maximal_flat(kind, n)?;
    let generic = match kind {
        AlgebraKind::So2n => h_ab(1.0, std::f64::consts::SQRT_2, n),
        _ => flat[0].clone(),
    };
    let basis = standard_basis(kind, n);
    let q = btheta_orthonormalise(basis.elements.clone(), 0.0);
    let d = q.len();
    let adq: Vec<AlgebraElement> = q.iter().map(|x| generic.bracket(x).expect("same algebra")).collect();
    let mut m = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = btheta_fast(&q[i], &adq[j]);
        }
    }
    let m = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    // cluster sorted eigenvalues
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        let val = eig.eigenvalues[i];
        match clusters.last_mut() {
            Some(c) if (val - eig.eigenvalues[*c.last().expect("nonempty")]).abs() <= CLUSTER_TOL => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    for w in clusters.windows(2) {
        let hi = eig.eigenvalues[*w[0].last().expect("nonempty")];
        let lo = eig.eigenvalues[w[1][0]];
        if lo - hi <= 1e3 * CLUSTER_TOL {
            return Err(Error::Degeneracy(format!("eigenvalues {hi} and {lo} are too close to separate")));
        }
    }

    let mut spaces = BTreeMap::new();
    let mut zero = Vec::new();
    for cluster in clusters {
        let elements: Vec<AlgebraElement> = cluster
            .iter()
            .map(|&i| {
                let coeffs: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
                AlgebraElement::combination(&coeffs, &q).expect("same algebra")
            })
            .collect();
        let x = &elements[0];
        let values: Vec<f64> =
            flat.iter().map(|h| btheta_fast(x, &h.bracket(x).expect("same algebra")) / btheta_fast(x, x)).collect();
        let coords: Vec<f64> = match kind {
            AlgebraKind::So2n => vec![values[1], values[0] + values[1]],
            _ => values.clone(),
        };
        let rounded: Vec<i32> = coords.iter().map(|c| c.round() as i32).collect();
        let residual = coords.iter().zip(&rounded).map(|(c, r)| (c - *r as f64).abs()).fold(0.0, f64::max);
        if residual >= 1e-6 {
            return Err(Error::Degeneracy(format!("root coordinates {coords:?} are not integral")));
        }
        let root = Root(rounded);
        if root.is_zero() {
            zero = elements;
        } else {
            spaces.insert(root, elements);
        }
    }

    // g_0 = k_0 + a; k_0 is the theta-fixed part (inputs have unit norm)
    let k_parts: Vec<AlgebraElement> = zero.iter().map(|x| x.cartan_split().0).collect();
    let k0 = btheta_orthonormalise(k_parts, 1e-6);
    Ok(RootDecomposition { kind, n, flat, spaces, k0 })
}

type DecompositionMemo = RwLock<HashMap<(AlgebraKind, usize), Arc<RootDecomposition>>>;

/// Cached restricted root space decomposition.
pub fn root_decomposition(kind: AlgebraKind, n: usize) -> Result<Arc<RootDecomposition>> {
    static MEMO: OnceLock<DecompositionMemo> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(d) = memo.read().expect("memo lock").get(&(kind, n)) {
        return Ok(d.clone());
    }
    let built = Arc::new(compute(kind, n)?);
    Ok(memo.write().expect("memo lock").entry((kind, n)).or_insert(built).clone())
}

/// The four-by-four corner of the `alpha_1` generator.
const G_A1: [[f64; 4]; 4] =
    [[0.0, 1.0, 0.0, -1.0], [-1.0, 0.0, -1.0, 0.0], [0.0, -1.0, 0.0, 1.0], [-1.0, 0.0, -1.0, 0.0]];

/// The four-by-four corner of the `alpha_1 + 2 alpha_2` generator.
const G_A1_2A2: [[f64; 4]; 4] =
    [[0.0, 1.0, 0.0, -1.0], [-1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, -1.0], [-1.0, 0.0, 1.0, 0.0]];

fn corner(c: &[[f64; 4]; 4], n: usize) -> AlgebraElement {
    let m =
        DMatrix::from_fn(n + 2, n + 2, |i, j| if i < 4 && j < 4 { C64::new(c[i][j], 0.0) } else { C64::new(0.0, 0.0) });
    AlgebraElement::new(AlgebraKind::So2n, n, m).expect("shape")
}

/// Root vector of `so(2,n)` along timelike row `t` and its partner `t + 2`.
fn so_short(t: usize, v: &[f64], n: usize) -> AlgebraElement {
    let mut m = DMatrix::zeros(n + 2, n + 2);
    for (j, &x) in v.iter().enumerate() {
        let c = C64::new(x, 0.0);
        m[(t, 4 + j)] = c;
        m[(t + 2, 4 + j)] = c;
        m[(4 + j, t)] = c;
        m[(4 + j, t + 2)] = -c;
    }
    AlgebraElement::new(AlgebraKind::So2n, n, m).expect("shape")
}

/// `g_{alpha_1}` generator of `so(2,n)`.
pub fn so_alpha1(n: usize) -> AlgebraElement {
    corner(&G_A1, n)
}

/// `g_{alpha_1 + 2 alpha_2}` generator of `so(2,n)`.
pub fn so_alpha1_2alpha2(n: usize) -> AlgebraElement {
    corner(&G_A1_2A2, n)
}

/// Element of `g_{alpha_2}` with parameter `v` in `R^{n-2}`.
pub fn so_alpha2(v: &[f64], n: usize) -> AlgebraElement {
    so_short(0, v, n)
}

/// Element of `g_{alpha_1 + alpha_2}` with parameter `w` in `R^{n-2}`.
pub fn so_alpha1_alpha2(w: &[f64], n: usize) -> AlgebraElement {
    so_short(1, w, n)
}

/// Element of `g_alpha` of `su(1,n)` with parameter `omega` in `C^{n-1}`.
pub fn su_alpha(kind: AlgebraKind, omega: &[C64], n: usize) -> AlgebraElement {
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for (j, &w) in omega.iter().enumerate() {
        m[(0, 2 + j)] = w.conj();
        m[(1, 2 + j)] = w.conj();
        m[(2 + j, 0)] = w;
        m[(2 + j, 1)] = -w;
    }
    AlgebraElement::new(kind, n, m).expect("shape")
}

/// Element of `g_{2 alpha}` of `su(1,n)` with parameter `mu`.
pub fn su_2alpha(kind: AlgebraKind, mu: f64, n: usize) -> AlgebraElement {
    let mut m = DMatrix::zeros(n + 1, n + 1);
    m[(0, 0)] = C64::new(0.0, mu);
    m[(0, 1)] = C64::new(0.0, -mu);
    m[(1, 0)] = C64::new(0.0, mu);
    m[(1, 1)] = C64::new(0.0, -mu);
    AlgebraElement::new(kind, n, m).expect("shape")
}

fn unit(j: usize, len: usize) -> Vec<f64> {
    let mut v = vec![0.0; len];
    v[j] = 1.0;
    v
}

/// Explicit basis of a root space; negative roots come from `theta`.
pub fn closed_form_root_space(kind: AlgebraKind, n: usize, root: &Root) -> Result<Vec<AlgebraElement>> {
    if n < kind.min_n() {
        return Err(Error::Argument(format!("{kind} needs n >= {}", kind.min_n())));
    }
    let positive = positive_roots(kind)?;
    if !positive.contains(root) {
        if positive.contains(&root.neg()) {
            return Ok(closed_form_root_space(kind, n, &root.neg())?.iter().map(AlgebraElement::theta).collect());
        }
        return Err(Error::Argument(format!("{root} is not a root of {kind}")));
    }
    let out = match (kind, root.0.as_slice()) {
        (AlgebraKind::So2n, [1, 0]) => vec![so_alpha1(n)],
        (AlgebraKind::So2n, [1, 2]) => vec![so_alpha1_2alpha2(n)],
        (AlgebraKind::So2n, [0, 1]) => (0..n - 2).map(|j| so_alpha2(&unit(j, n - 2), n)).collect(),
        (AlgebraKind::So2n, [1, 1]) => (0..n - 2).map(|j| so_alpha1_alpha2(&unit(j, n - 2), n)).collect(),
        (_, [1]) => (0..n - 1)
            .flat_map(|j| {
                let mut re = vec![C64::new(0.0, 0.0); n - 1];
                re[j] = C64::new(1.0, 0.0);
                let mut im = vec![C64::new(0.0, 0.0); n - 1];
                im[j] = C64::new(0.0, 1.0);
                [su_alpha(kind, &re, n), su_alpha(kind, &im, n)]
            })
            .collect(),
        (_, [2]) => vec![su_2alpha(kind, 1.0, n)],
        _ => unreachable!("positive roots are exhausted above"),
    };
    Ok(out)
}

/// `(k_0, a, n)` of the Iwasawa decomposition.
pub fn iwasawa_parts(dec: &RootDecomposition) -> Result<(Subalgebra, Subalgebra, Subalgebra)> {
    let k0 = Subalgebra::new(dec.kind, dec.n, dec.k0.clone())?;
    let a = Subalgebra::new(dec.kind, dec.n, dec.flat.clone())?;
    let positive: Vec<AlgebraElement> =
        dec.spaces.iter().filter(|(r, _)| r.is_positive()).flat_map(|(_, b)| b.iter().cloned()).collect();
    let nil = Subalgebra::new(dec.kind, dec.n, positive)?;
    Ok((k0, a, nil))
}

/// Smallest `k` with the `(k+1)`-th term of the lower central series zero.
pub fn nilpotency_degree(s: &Subalgebra) -> Result<usize> {
    if s.dim() == 0 {
        return Ok(0);
    }
    let scale = s.basis().iter().map(AlgebraElement::norm).fold(0.0, f64::max);
    let mut current = s.clone();
    for k in 1..=s.dim() + 1 {
        let mut next = Vec::new();
        for x in s.basis() {
            for y in current.basis() {
                let b = x.bracket(y)?;
                if b.norm() > 1e-10 * scale * scale {
                    next.push(b);
                }
            }
        }
        let next = Subalgebra::span(s.kind(), s.n(), next)?;
        if next.dim() == 0 {
            return Ok(k);
        }
        if next.dim() == current.dim() {
            break;
        }
        current = next;
    }
    Err(Error::NotNilpotent { steps: s.dim() + 1 })
}

/// Root values `lambda(H)` for each flat basis element.
pub fn evaluate_root(kind: AlgebraKind, root: &Root) -> Vec<f64> {
    root_values(kind, root)
}

/// Largest relative residual `|[H, X] - lambda(H) X| / |X|` over a root space.
pub fn eigen_residual(dec: &RootDecomposition, root: &Root) -> Result<f64> {
    let values = root_values(dec.kind, root);
    let mut worst: f64 = 0.0;
    for x in dec.space(root)? {
        for (h, val) in dec.flat.iter().zip(&values) {
            let r = h.bracket(x)?.sub(&x.scale(*val))?;
            worst = worst.max(r.norm() / x.norm());
        }
    }
    Ok(worst)
}

/// Flattened span matrix helper for rank comparisons.
pub fn flattened(elements: &[AlgebraElement]) -> Vec<DVector<f64>> {
    elements.iter().map(AlgebraElement::flatten).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indefinite::{numerical_rank, RANK_TOL};

    #[test]
    fn so_multiplicities() {
        for n in 3..=6 {
            let dec = root_decomposition(AlgebraKind::So2n, n).unwrap();
            assert_eq!(dec.spaces.len(), 8);
            for (root, m) in [([1, 0], 1), ([0, 1], n - 2), ([1, 1], n - 2), ([1, 2], 1)] {
                let r = Root(root.to_vec());
                assert_eq!(dec.multiplicity(&r), m);
                assert_eq!(dec.multiplicity(&r.neg()), m);
            }
            assert_eq!(dec.k0.len(), (n - 2) * (n - 3) / 2);
            assert_eq!(dec.total_dim(), AlgebraKind::So2n.dim(n));
        }
    }

    #[test]
    fn su_multiplicities() {
        for n in 2..=5 {
            let dec = root_decomposition(AlgebraKind::Su1n, n).unwrap();
            assert_eq!(dec.multiplicity(&Root(vec![1])), 2 * (n - 1));
            assert_eq!(dec.multiplicity(&Root(vec![2])), 1);
            assert_eq!(dec.multiplicity(&Root(vec![-2])), 1);
            assert_eq!(dec.total_dim(), AlgebraKind::Su1n.dim(n));
        }
    }

    #[test]
    fn closed_forms_match_computed_spans() {
        for (kind, ns) in [(AlgebraKind::So2n, 3..=6), (AlgebraKind::Su1n, 2..=5)] {
            for n in ns {
                let dec = root_decomposition(kind, n).unwrap();
                for (root, basis) in &dec.spaces {
                    let closed = closed_form_root_space(kind, n, root).unwrap();
                    assert!(closed.iter().all(|x| x.validate(1e-14)));
                    let mut all = flattened(basis);
                    all.extend(flattened(&closed));
                    assert_eq!(numerical_rank(&all, RANK_TOL).unwrap(), basis.len(), "{kind} {root}");
                    assert!(eigen_residual(&dec, root).unwrap() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn alpha1_eigenvalue() {
        let x = so_alpha1(4);
        let (a, b) = (0.7, -1.3);
        let lhs = h_ab(a, b, 4).bracket(&x).unwrap();
        assert!(lhs.sub(&x.scale(-a + b)).unwrap().norm() < 1e-14);
    }

    #[test]
    fn unknown_root_is_rejected() {
        assert!(matches!(closed_form_root_space(AlgebraKind::So2n, 3, &Root(vec![2, 1])), Err(Error::Argument(_))));
        assert!(root_decomposition(AlgebraKind::U1n, 3).is_err());
    }

    #[test]
    fn iwasawa_dimensions() {
        let dec = root_decomposition(AlgebraKind::So2n, 3).unwrap();
        let (k0, a, nil) = iwasawa_parts(&dec).unwrap();
        assert_eq!((k0.dim(), a.dim(), nil.dim()), (0, 2, 4));
        for n in 2..=4 {
            let dec = root_decomposition(AlgebraKind::Su1n, n).unwrap();
            let (k0, _, nil) = iwasawa_parts(&dec).unwrap();
            assert_eq!(nil.dim(), 2 * n - 1);
            assert_eq!(k0.dim(), (n - 1) * (n - 1));
        }
    }

    #[test]
    fn nilpotency_degrees() {
        for n in 3..=5 {
            let dec = root_decomposition(AlgebraKind::So2n, n).unwrap();
            let (_, a, nil) = iwasawa_parts(&dec).unwrap();
            assert_eq!(nilpotency_degree(&nil).unwrap(), 3);
            assert_eq!(nilpotency_degree(&a).unwrap(), 1);
        }
        let dec = root_decomposition(AlgebraKind::Su1n, 3).unwrap();
        let (_, _, nil) = iwasawa_parts(&dec).unwrap();
        assert_eq!(nilpotency_degree(&nil).unwrap(), 2);
    }

    #[test]
    fn theta_swaps_root_spaces() {
        let dec = root_decomposition(AlgebraKind::So2n, 5).unwrap();
        for (root, basis) in &dec.spaces {
            let image: Vec<_> = basis.iter().map(AlgebraElement::theta).collect();
            let mut all = flattened(dec.space(&root.neg()).unwrap());
            all.extend(flattened(&image));
            assert_eq!(numerical_rank(&all, RANK_TOL).unwrap(), basis.len());
        }
    }

    #[test]
    fn root_display() {
        assert_eq!(Root(vec![1, 2]).to_string(), "a1+2a2");
        assert_eq!(Root(vec![-1]).to_string(), "-a");
    }
}

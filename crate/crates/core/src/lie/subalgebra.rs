use nalgebra::{DMatrix, DVector};

use super::{AlgebraElement, AlgebraKind};
use crate::error::{Error, Result};
use crate::indefinite::RANK_TOL;

/// Relative bracket-closure tolerance.
pub const CLOSURE_TOL: f64 = 1e-9;

/// Real span of algebra elements with an independent ordered basis.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    kind: AlgebraKind,
    n: usize,
    basis: Vec<AlgebraElement>,
    // orthonormal columns spanning the flattened basis
    frame: DMatrix<f64>,
}

/// Double Gram-Schmidt step; returns the unit residual when `v` is new.
fn residual_direction(frame: &[DVector<f64>], v: &DVector<f64>) -> Option<DVector<f64>> {
    let norm = v.norm();
    if norm == 0.0 {
        return None;
    }
    let mut r = v.clone();
    for _ in 0..2 {
        for q in frame {
            let c = q.dot(&r);
            r.axpy(-c, q, 1.0);
        }
    }
    let rn = r.norm();
    (rn > RANK_TOL * norm).then(|| r / rn)
}

impl Subalgebra {
    /// Span of `elements`, reduced to an independent subset, checked for closure.
    pub fn new(kind: AlgebraKind, n: usize, elements: Vec<AlgebraElement>) -> Result<Self> {
        let s = Self::span(kind, n, elements)?;
        let residual = s.closure_residual();
        if residual > CLOSURE_TOL {
            return Err(Error::NotClosed { residual });
        }
        Ok(s)
    }

    /// Span without the closure check (for root spaces, complements, ...).
    pub fn span(kind: AlgebraKind, n: usize, elements: Vec<AlgebraElement>) -> Result<Self> {
        let mut basis = Vec::new();
        let mut frame: Vec<DVector<f64>> = Vec::new();
        for x in elements {
            if x.kind() != kind || x.n() != n {
                return Err(Error::Tag(format!("{} element in a {kind} subalgebra", x.kind())));
            }
            if let Some(q) = residual_direction(&frame, &x.flatten()) {
                frame.push(q);
                basis.push(x);
            }
        }
        let size = kind.size(n);
        let frame = if frame.is_empty() { DMatrix::zeros(2 * size * size, 0) } else { DMatrix::from_columns(&frame) };
        Ok(Self { kind, n, basis, frame })
    }

    pub fn zero(kind: AlgebraKind, n: usize) -> Self {
        Self::span(kind, n, Vec::new()).expect("empty span")
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[AlgebraElement] {
        &self.basis
    }

    /// Orthonormal frame of the flattened span.
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    /// Relative distance of `x` from the span.
    pub fn distance(&self, x: &AlgebraElement) -> f64 {
        let v = x.flatten();
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let r = &v - &self.frame * (self.frame.transpose() * &v);
        r.norm() / norm
    }

    pub fn contains(&self, x: &AlgebraElement, tol: f64) -> bool {
        x.kind() == self.kind && x.n() == self.n && self.distance(x) <= tol
    }

    /// True when every basis element of `other` lies in this span.
    pub fn contains_all(&self, other: &Subalgebra, tol: f64) -> bool {
        other.basis.iter().all(|x| self.contains(x, tol))
    }

    /// Largest relative residual of `[X_i, X_j]` outside the span.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, x) in self.basis.iter().enumerate() {
            for y in &self.basis[i + 1..] {
                let b = x.bracket(y).expect("same algebra");
                let scale = x.norm() * y.norm();
                let v = b.flatten();
                let r = &v - &self.frame * (self.frame.transpose() * &v);
                worst = worst.max(r.norm() / scale);
            }
        }
        worst
    }

    /// Sum of spans, checked for closure.
    pub fn sum(&self, other: &Subalgebra) -> Result<Self> {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::new(self.kind, self.n, all)
    }

    /// Sum of spans without a closure check.
    pub fn sum_span(&self, other: &Subalgebra) -> Result<Self> {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::span(self.kind, self.n, all)
    }

    /// Same matrices under another tag.
    pub fn retag(&self, kind: AlgebraKind) -> Result<Self> {
        let elements = self.basis.iter().map(|x| x.retag(kind)).collect::<Result<Vec<_>>>()?;
        Self::span(kind, self.n, elements)
    }

    /// `[self, other]` as a span.
    pub fn bracket_span(&self, other: &Subalgebra) -> Result<Self> {
        let mut out = Vec::new();
        for x in &self.basis {
            for y in &other.basis {
                out.push(x.bracket(y)?);
            }
        }
        Self::span(self.kind, self.n, out)
    }

    /// Equality of spans.
    pub fn same_span(&self, other: &Subalgebra, tol: f64) -> bool {
        self.dim() == other.dim() && self.contains_all(other, tol) && other.contains_all(self, tol)
    }
}

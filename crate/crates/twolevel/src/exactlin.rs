//! Exact linear algebra over an ordered field scalar.
//!
//! Everything in this module is generic over [`Scalar`], a trait for exact
//! (rounding-free) field elements. The crate root instantiates it with
//! arbitrary-precision rationals; see [`crate::Rational`]. Floating-point
//! types cannot implement [`Scalar`] (they lack `Eq`/`Ord` and exactness),
//! which is intentional: every result here feeds a certificate, and a single
//! rounded bit voids it.
//!
//! Elimination is fraction-free (Bareiss two-term updates) with a
//! deterministic pivot choice: columns left to right, first nonzero row.
//! Orthogonal projections are computed through exact normal equations, so
//! rational inputs stay rational and no square roots are ever taken.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact field scalar: arithmetic must be associative and lossless.
///
/// `Eq + Ord` are required (comparisons decide pivots and lexicographic
/// tie-breaks), which structurally rules out IEEE floats.
pub trait Scalar:
    Num + Signed + Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn from_i64(n: i64) -> Self;

    /// Formats as `"p/q"`, or `"p"` when the denominator is one.
    fn to_frac_string(&self) -> String;

    /// Parses `"p/q"` or `"p"`. The stored value is reduced and the
    /// denominator made positive.
    fn parse_frac(s: &str) -> std::result::Result<Self, String>;
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_frac_string(&self) -> String {
        if self.denom() == &BigInt::from(1) {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn parse_frac(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = num.parse().map_err(|e| format!("numerator: {e}"))?;
        let d: BigInt = den.parse().map_err(|e| format!("denominator: {e}"))?;
        if d == BigInt::from(0) {
            return Err("denominator is zero".into());
        }
        Ok(BigRational::new(n, d))
    }
}

impl Scalar for Ratio<i128> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n as i128)
    }

    fn to_frac_string(&self) -> String {
        if *self.denom() == 1 {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn parse_frac(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: i128 = num.parse().map_err(|e| format!("numerator: {e}"))?;
        let d: i128 = den.parse().map_err(|e| format!("denominator: {e}"))?;
        if d == 0 {
            return Err("denominator is zero".into());
        }
        Ok(Ratio::new(n, d))
    }
}

/// A point or direction with exact coordinates. Equality is exact and
/// componentwise; the derived ordering is lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector<S> {
    coords: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Vector { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Vector { coords: vec![S::zero(); dim] }
    }

    /// The `i`-th standard basis vector of the given dimension.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[i] = S::one();
        v
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Vector { coords: coords.iter().map(|&c| S::from_i64(c)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn dot(&self, other: &Self) -> S {
        assert_eq!(self.dim(), other.dim(), "dot of unequal dimensions");
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Vector { coords: self.coords.iter().map(|a| -a.clone()).collect() }
    }

    pub fn scale(&self, s: &S) -> Self {
        Vector { coords: self.coords.iter().map(|a| a.clone() * s.clone()).collect() }
    }

    /// Some nonzero `lambda` with `self == lambda * other`, if one exists.
    pub fn parallel_factor(&self, other: &Self) -> Option<S> {
        if self.dim() != other.dim() || self.is_zero() || other.is_zero() {
            return None;
        }
        let i = other.coords.iter().position(|c| !c.is_zero())?;
        let lambda = self.coords[i].clone() / other.coords[i].clone();
        if lambda.is_zero() {
            return None;
        }
        if *self == other.scale(&lambda) {
            Some(lambda)
        } else {
            None
        }
    }
}

impl<S: Scalar> fmt::Debug for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c.to_frac_string())?;
        }
        write!(f, ")")
    }
}

impl<S: Scalar> fmt::Display for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<S: Scalar> Serialize for Vector<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coords.len()))?;
        for c in &self.coords {
            seq.serialize_element(&c.to_frac_string())?;
        }
        seq.end()
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Vector<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct VecVisitor<S>(std::marker::PhantomData<S>);
        impl<'de, S: Scalar> Visitor<'de> for VecVisitor<S> {
            type Value = Vector<S>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a sequence of rational strings like \"3/4\"")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Vector<S>, A::Error> {
                let mut coords = Vec::new();
                while let Some(s) = seq.next_element::<String>()? {
                    coords.push(S::parse_frac(&s).map_err(de::Error::custom)?);
                }
                Ok(Vector::new(coords))
            }
        }
        deserializer.deserialize_seq(VecVisitor(std::marker::PhantomData))
    }
}

/// A rectangular matrix stored by rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<S: Scalar> {
    rows: Vec<Vector<S>>,
    ncols: usize,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_rows(rows: Vec<Vector<S>>) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vector::dim);
        for r in &rows {
            if r.dim() != ncols {
                return Err(Error::DimensionMismatch { expected: ncols, got: r.dim() });
            }
        }
        Ok(Matrix { rows, ncols })
    }

    pub fn identity(n: usize) -> Self {
        Matrix { rows: (0..n).map(|i| Vector::unit(n, i)).collect(), ncols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vector<S>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Vector<S> {
        &self.rows[i]
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.ncols)
            .map(|j| Vector::new(self.rows.iter().map(|r| r.coords()[j].clone()).collect()))
            .collect();
        Matrix { rows, ncols: self.nrows() }
    }

    /// Matrix-vector product `M x`.
    pub fn apply(&self, x: &Vector<S>) -> Vector<S> {
        Vector::new(self.rows.iter().map(|r| r.dot(x)).collect())
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<S>> = self.rows.iter().map(|r| r.coords().to_vec()).collect();
        bareiss_echelon(rows).1.len()
    }

    /// Basis of the right kernel `{x : Mx = 0}`.
    pub fn nullspace(&self) -> Vec<Vector<S>> {
        let rows: Vec<Vec<S>> = self.rows.iter().map(|r| r.coords().to_vec()).collect();
        let (ech, pivots) = bareiss_echelon(rows);
        nullspace_from_echelon(&ech, &pivots, self.ncols)
    }

    pub fn inverse(&self) -> Option<Matrix<S>> {
        if self.nrows() != self.ncols {
            return None;
        }
        let n = self.ncols;
        let mut cols: Vec<Vector<S>> = Vec::with_capacity(n);
        for i in 0..n {
            let targets: Vec<S> = (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect();
            let sol = solve_pairing(&self.rows, &targets).ok()??;
            if !sol.nullspace.is_empty() {
                return None;
            }
            cols.push(sol.solution);
        }
        // cols[i] is the i-th column of the inverse
        let rows = (0..n)
            .map(|r| Vector::new((0..n).map(|c| cols[c].coords()[r].clone()).collect()))
            .collect();
        Some(Matrix { rows, ncols: n })
    }
}

/// Fraction-free (Bareiss) forward elimination.
///
/// Pivot choice is deterministic: columns left to right, first row with a
/// nonzero entry. Returns the echelon rows and the pivot positions
/// `(row, col)` in order; the rank is the number of pivots. Divisions are by
/// the previous pivot and are exact; on integer input every intermediate
/// entry stays integral.
fn bareiss_echelon<S: Scalar>(mut rows: Vec<Vec<S>>) -> (Vec<Vec<S>>, Vec<(usize, usize)>) {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev = S::one();
    let mut r = 0;
    for c in 0..n {
        if r >= m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in (r + 1)..m {
            for j in (c + 1)..n {
                let v = pivot.clone() * rows[i][j].clone() - rows[i][c].clone() * rows[r][j].clone();
                rows[i][j] = v / prev.clone();
            }
            rows[i][c] = S::zero();
        }
        prev = pivot;
        pivots.push((r, c));
        r += 1;
    }
    (rows, pivots)
}

fn back_substitute<S: Scalar>(
    ech: &[Vec<S>],
    pivots: &[(usize, usize)],
    ncols: usize,
    rhs_col: Option<usize>,
    free_assignment: &dyn Fn(usize) -> S,
) -> Vec<S> {
    let mut x = vec![S::zero(); ncols];
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    for (c, slot) in x.iter_mut().enumerate() {
        if !pivot_cols.contains(&c) {
            *slot = free_assignment(c);
        }
    }
    for &(r, c) in pivots.iter().rev() {
        let mut acc = match rhs_col {
            Some(rc) => ech[r][rc].clone(),
            None => S::zero(),
        };
        for j in (c + 1)..ncols {
            if !ech[r][j].is_zero() && !x[j].is_zero() {
                acc = acc - ech[r][j].clone() * x[j].clone();
            }
        }
        x[c] = acc / ech[r][c].clone();
    }
    x
}

fn nullspace_from_echelon<S: Scalar>(
    ech: &[Vec<S>],
    pivots: &[(usize, usize)],
    ncols: usize,
) -> Vec<Vector<S>> {
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for f in 0..ncols {
        if pivot_cols.contains(&f) {
            continue;
        }
        let x = back_substitute(ech, pivots, ncols, None, &|c| {
            if c == f {
                S::one()
            } else {
                S::zero()
            }
        });
        basis.push(Vector::new(x));
    }
    basis
}

/// Exact rank of a matrix.
pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    m.rank()
}

/// A solution of a linear pairing system, plus the kernel directions along
/// which it is not unique.
#[derive(Clone, Debug)]
pub struct LinearSolution<S: Scalar> {
    pub solution: Vector<S>,
    pub nullspace: Vec<Vector<S>>,
}

/// Solves for `b` with `<basis[j], b> = targets[j]` for all `j`.
///
/// Returns `None` when the system is inconsistent. When the basis does not
/// determine `b` uniquely, the solution is accompanied by a kernel basis.
pub fn solve_pairing<S: Scalar>(
    basis: &[Vector<S>],
    targets: &[S],
) -> Result<Option<LinearSolution<S>>> {
    if basis.is_empty() {
        return Err(Error::EmptyInput("solve_pairing basis"));
    }
    if basis.len() != targets.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), got: targets.len() });
    }
    let ambient = basis[0].dim();
    for v in basis {
        if v.dim() != ambient {
            return Err(Error::DimensionMismatch { expected: ambient, got: v.dim() });
        }
    }
    let aug: Vec<Vec<S>> = basis
        .iter()
        .zip(targets)
        .map(|(v, t)| {
            let mut row = v.coords().to_vec();
            row.push(t.clone());
            row
        })
        .collect();
    let (ech, pivots) = bareiss_echelon(aug);
    if pivots.iter().any(|&(_, c)| c == ambient) {
        return Ok(None); // a pivot in the target column: inconsistent
    }
    let coeff_pivots: Vec<(usize, usize)> = pivots.clone();
    let x = back_substitute(&ech, &coeff_pivots, ambient, Some(ambient), &|_| S::zero());
    let nullspace = nullspace_from_echelon(&ech, &coeff_pivots, ambient);
    Ok(Some(LinearSolution { solution: Vector::new(x), nullspace }))
}

/// Orthogonal projection of `x` onto the hyperplane `{y : <y, n> = 0}`:
/// `x - (<x,n>/<n,n>) n`. Exact; errors on `n = 0`.
pub fn project_hyperplane<S: Scalar>(x: &Vector<S>, n: &Vector<S>) -> Result<Vector<S>> {
    if n.is_zero() {
        return Err(Error::ZeroVector("hyperplane normal"));
    }
    if x.dim() != n.dim() {
        return Err(Error::DimensionMismatch { expected: n.dim(), got: x.dim() });
    }
    let t = x.dot(n) / n.dot(n);
    Ok(x.sub(&n.scale(&t)))
}

/// A linear subspace given by an independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<S: Scalar> {
    ambient_dim: usize,
    basis: Vec<Vector<S>>,
}

impl<S: Scalar> Subspace<S> {
    /// Builds a subspace from an already independent basis.
    pub fn new(ambient_dim: usize, basis: Vec<Vector<S>>) -> Result<Self> {
        for v in &basis {
            if v.dim() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, got: v.dim() });
            }
        }
        let m = Matrix::from_rows(basis.clone())?;
        if m.rank() != basis.len() {
            return Err(Error::BadInput("subspace basis is linearly dependent".into()));
        }
        Ok(Subspace { ambient_dim, basis })
    }

    /// Extracts the first linearly independent subset (in input order) of a
    /// spanning list and uses it as the basis.
    pub fn from_spanning(ambient_dim: usize, vectors: &[Vector<S>]) -> Result<Self> {
        let mut basis: Vec<Vector<S>> = Vec::new();
        let mut r = 0;
        for v in vectors {
            if v.dim() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, got: v.dim() });
            }
            let mut cand = basis.clone();
            cand.push(v.clone());
            let new_rank = Matrix::from_rows(cand)?.rank();
            if new_rank > r {
                basis.push(v.clone());
                r = new_rank;
            }
        }
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector<S>] {
        &self.basis
    }

    pub fn contains(&self, x: &Vector<S>) -> bool {
        if x.is_zero() {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(x.clone());
        Matrix::from_rows(rows).map(|m| m.rank()).unwrap_or(usize::MAX) == self.basis.len()
    }

    /// The orthogonal complement within the full ambient space.
    pub fn orthogonal_complement(&self) -> Result<Self> {
        if self.basis.is_empty() {
            let basis = (0..self.ambient_dim).map(|i| Vector::unit(self.ambient_dim, i)).collect();
            return Subspace::new(self.ambient_dim, basis);
        }
        let m = Matrix::from_rows(self.basis.clone())?;
        Subspace::new(self.ambient_dim, m.nullspace())
    }

    /// The orthogonal complement of `self` within `outer` (`self` must be a
    /// subspace of `outer`): all vectors of `outer` orthogonal to `self`.
    pub fn complement_within(&self, outer: &Subspace<S>) -> Result<Self> {
        if outer.basis.is_empty() {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        // Solve (self.basis · outerᵀ) mu = 0 and map mu back through outer.
        let rows: Vec<Vector<S>> = self
            .basis
            .iter()
            .map(|s| Vector::new(outer.basis.iter().map(|q| s.dot(q)).collect()))
            .collect();
        let coeffs = if rows.is_empty() {
            Matrix::identity(outer.basis.len()).rows().to_vec()
        } else {
            Matrix::from_rows(rows)?.nullspace()
        };
        let basis = coeffs
            .iter()
            .map(|mu| {
                let mut acc = Vector::zeros(self.ambient_dim);
                for (q, m) in outer.basis.iter().zip(mu.coords()) {
                    acc = acc.add(&q.scale(m));
                }
                acc
            })
            .collect();
        Subspace::new(self.ambient_dim, basis)
    }
}

/// Orthogonal projection of `x` onto `span(S)`, through exact normal
/// equations. The residual `x - result` is orthogonal to every basis vector.
pub fn project_span<S: Scalar>(x: &Vector<S>, sub: &Subspace<S>) -> Result<Vector<S>> {
    if x.dim() != sub.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: sub.ambient_dim(), got: x.dim() });
    }
    if sub.basis().is_empty() {
        return Ok(Vector::zeros(x.dim()));
    }
    let gram: Vec<Vector<S>> = sub
        .basis()
        .iter()
        .map(|qi| Vector::new(sub.basis().iter().map(|qj| qi.dot(qj)).collect()))
        .collect();
    let rhs: Vec<S> = sub.basis().iter().map(|qi| qi.dot(x)).collect();
    let sol = solve_pairing(&gram, &rhs)?
        .ok_or_else(|| Error::Internal("normal equations inconsistent".into()))?;
    let mut acc = Vector::zeros(x.dim());
    for (q, lambda) in sub.basis().iter().zip(sol.solution.coords()) {
        acc = acc.add(&q.scale(lambda));
    }
    Ok(acc)
}

/// Affine dimension of a point set: rank of the differences to an anchor.
/// The anchor choice does not affect the result.
pub fn affine_dim<S: Scalar>(points: &[Vector<S>]) -> Result<usize> {
    let first = points.first().ok_or(Error::EmptyInput("affine_dim points"))?;
    let rows: Vec<Vector<S>> = points.iter().skip(1).map(|p| p.sub(first)).collect();
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(Matrix::from_rows(rows)?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    type Q = BigRational;
    type V = Vector<Q>;

    fn v(coords: &[i64]) -> V {
        V::from_i64s(coords)
    }

    fn q(n: i64, d: i64) -> Q {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rank_identity_is_full() {
        let m = Matrix::identity(3);
        assert_eq!(rank::<Q>(&m), 3);
    }

    #[test]
    fn rank_zero_matrix() {
        let m = Matrix::from_rows(vec![V::zeros(2), V::zeros(2)]).unwrap();
        assert_eq!(rank(&m), 0);
    }

    #[test]
    fn rank_proportional_rows() {
        let m = Matrix::from_rows(vec![v(&[1, 1]), v(&[2, 2])]).unwrap();
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn solve_standard_basis() {
        let basis = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        let targets = vec![Q::from_i64(0), Q::from_i64(1), Q::from_i64(1)];
        let sol = solve_pairing(&basis, &targets).unwrap().unwrap();
        assert_eq!(sol.solution, v(&[0, 1, 1]));
        assert!(sol.nullspace.is_empty());
    }

    #[test]
    fn solve_two_by_two() {
        let basis = vec![v(&[1, 0]), v(&[1, 1])];
        let targets = vec![Q::from_i64(1), Q::from_i64(0)];
        let sol = solve_pairing(&basis, &targets).unwrap().unwrap();
        assert_eq!(sol.solution, v(&[1, -1]));
    }

    #[test]
    fn solve_inconsistent_returns_none() {
        let basis = vec![v(&[1, 0]), v(&[1, 0]), v(&[0, 1])];
        let targets = vec![Q::from_i64(0), Q::from_i64(1), Q::from_i64(0)];
        assert!(solve_pairing(&basis, &targets).unwrap().is_none());
    }

    #[test]
    fn solve_underdetermined_reports_kernel() {
        let basis = vec![v(&[1, 0, 0])];
        let targets = vec![Q::from_i64(1)];
        let sol = solve_pairing(&basis, &targets).unwrap().unwrap();
        assert_eq!(sol.nullspace.len(), 2);
        assert_eq!(sol.solution.coords()[0], Q::from_i64(1));
    }

    #[test]
    fn project_hyperplane_examples() {
        let x = v(&[1, 2, 3]);
        let n = V::unit(3, 2);
        assert_eq!(project_hyperplane(&x, &n).unwrap(), v(&[1, 2, 0]));

        // x orthogonal to n stays fixed
        let x = v(&[2, -5, 0]);
        assert_eq!(project_hyperplane(&x, &n).unwrap(), x);

        let x = v(&[1, 0]);
        let n = v(&[1, 1]);
        let p = project_hyperplane(&x, &n).unwrap();
        assert_eq!(p, Vector::new(vec![q(1, 2), q(-1, 2)]));
    }

    #[test]
    fn project_hyperplane_rejects_zero_normal() {
        assert!(project_hyperplane(&v(&[1, 0]), &V::zeros(2)).is_err());
    }

    #[test]
    fn project_span_examples() {
        let s = Subspace::new(2, vec![V::unit(2, 0)]).unwrap();
        assert_eq!(project_span(&v(&[3, 4]), &s).unwrap(), v(&[3, 0]));

        // point already inside the span
        let s = Subspace::new(2, vec![v(&[1, 2])]).unwrap();
        assert_eq!(project_span(&v(&[2, 4]), &s).unwrap(), v(&[2, 4]));

        let s = Subspace::new(2, vec![v(&[1, 1])]).unwrap();
        let p = project_span(&v(&[1, 0]), &s).unwrap();
        assert_eq!(p, Vector::new(vec![q(1, 2), q(1, 2)]));
    }

    #[test]
    fn project_span_empty_basis_gives_zero() {
        let s = Subspace::zero(3);
        assert_eq!(project_span(&v(&[1, 2, 3]), &s).unwrap(), V::zeros(3));
    }

    #[test]
    fn affine_dim_examples() {
        assert_eq!(affine_dim(&[v(&[5, 7])]).unwrap(), 0);
        assert_eq!(affine_dim(&[v(&[0, 0]), v(&[1, 0]), v(&[0, 1])]).unwrap(), 2);
        assert_eq!(affine_dim(&[v(&[0, 0]), v(&[1, 1]), v(&[2, 2])]).unwrap(), 1);
        assert!(affine_dim::<Q>(&[]).is_err());
    }

    #[test]
    fn subspace_from_spanning_picks_first_independent() {
        let s = Subspace::from_spanning(2, &[V::zeros(2), v(&[1, 1]), v(&[2, 2]), v(&[1, 0])]).unwrap();
        assert_eq!(s.basis(), &[v(&[1, 1]), v(&[1, 0])]);
    }

    #[test]
    fn complement_within_splits_dimensions() {
        let outer = Subspace::new(3, vec![V::unit(3, 0), V::unit(3, 1)]).unwrap();
        let inner = Subspace::new(3, vec![V::unit(3, 0)]).unwrap();
        let w = inner.complement_within(&outer).unwrap();
        assert_eq!(w.dim(), 1);
        assert!(w.basis()[0].dot(&V::unit(3, 0)).is_zero());
        assert!(outer.contains(&w.basis()[0]));
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(vec![v(&[2, 1]), v(&[1, 1])]).unwrap();
        let inv = m.inverse().unwrap();
        for i in 0..2 {
            let e = V::unit(2, i);
            assert_eq!(m.apply(&inv.apply(&e)), e);
            assert_eq!(inv.apply(&m.apply(&e)), e);
        }
        let singular = Matrix::from_rows(vec![v(&[1, 1]), v(&[2, 2])]).unwrap();
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn i128_scalar_agrees_on_small_solves() {
        type R = Ratio<i128>;
        let basis = vec![Vector::<R>::from_i64s(&[1, 0]), Vector::<R>::from_i64s(&[1, 1])];
        let targets = vec![R::from_i64(1), R::from_i64(0)];
        let sol = solve_pairing(&basis, &targets).unwrap().unwrap();
        assert_eq!(sol.solution, Vector::<R>::from_i64s(&[1, -1]));
    }

    #[test]
    fn frac_string_round_trip() {
        for s in ["0", "7", "-3", "5/8", "-11/4"] {
            let r = Q::parse_frac(s).unwrap();
            assert_eq!(r.to_frac_string(), s);
        }
        // normalization
        assert_eq!(Q::parse_frac("2/4").unwrap().to_frac_string(), "1/2");
        assert_eq!(Q::parse_frac("1/-2").unwrap().to_frac_string(), "-1/2");
        assert!(Q::parse_frac("1/0").is_err());
        assert!(Q::parse_frac("x").is_err());
    }

    fn arb_rat() -> impl Strategy<Value = Q> {
        (-20i64..=20, 1i64..=12).prop_map(|(n, d)| q(n, d))
    }

    fn arb_vec(dim: usize) -> impl Strategy<Value = V> {
        proptest::collection::vec(arb_rat(), dim).prop_map(Vector::new)
    }

    proptest! {
        #[test]
        fn projection_hyperplane_idempotent(x in arb_vec(4), n in arb_vec(4)) {
            prop_assume!(!n.is_zero());
            let once = project_hyperplane(&x, &n).unwrap();
            let twice = project_hyperplane(&once, &n).unwrap();
            prop_assert_eq!(&once, &twice);
            prop_assert!(once.dot(&n).is_zero());
        }

        #[test]
        fn projection_span_idempotent_and_orthogonal(
            x in arb_vec(4),
            b1 in arb_vec(4),
            b2 in arb_vec(4),
        ) {
            let sub = Subspace::from_spanning(4, &[b1, b2]).unwrap();
            let once = project_span(&x, &sub).unwrap();
            let twice = project_span(&once, &sub).unwrap();
            prop_assert_eq!(&once, &twice);
            let residual = x.sub(&once);
            for q in sub.basis() {
                prop_assert!(residual.dot(q).is_zero());
            }
        }

        #[test]
        fn rank_invariant_under_row_swap_and_scaling(
            rows in proptest::collection::vec(arb_vec(3), 2..5),
            scale in arb_rat(),
            i in 0usize..4,
            j in 0usize..4,
        ) {
            prop_assume!(!scale.is_zero());
            let m = Matrix::from_rows(rows.clone()).unwrap();
            let base = m.rank();

            let mut swapped = rows.clone();
            let (a, b) = (i % rows.len(), j % rows.len());
            swapped.swap(a, b);
            prop_assert_eq!(Matrix::from_rows(swapped).unwrap().rank(), base);

            let mut scaled = rows.clone();
            let k = i % rows.len();
            scaled[k] = scaled[k].scale(&scale);
            prop_assert_eq!(Matrix::from_rows(scaled).unwrap().rank(), base);
        }

        #[test]
        fn solve_round_trip(
            basis in proptest::collection::vec(arb_vec(3), 1..4),
            targets in proptest::collection::vec(arb_rat(), 1..4),
        ) {
            prop_assume!(basis.len() == targets.len());
            if let Some(sol) = solve_pairing(&basis, &targets).unwrap() {
                for (bv, t) in basis.iter().zip(&targets) {
                    prop_assert_eq!(bv.dot(&sol.solution), t.clone());
                }
                for k in &sol.nullspace {
                    for bv in &basis {
                        prop_assert!(bv.dot(k).is_zero());
                    }
                }
            }
        }

        #[test]
        fn affine_dim_anchor_independent(
            points in proptest::collection::vec(arb_vec(3), 1..6),
            rot in 0usize..6,
        ) {
            let d0 = affine_dim(&points).unwrap();
            let mut rotated = points.clone();
            rotated.rotate_left(rot % points.len());
            prop_assert_eq!(affine_dim(&rotated).unwrap(), d0);
        }
    }
}

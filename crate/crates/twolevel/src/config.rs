//! Binary pair configurations.
//!
//! A configuration is a pair of point lists `A`, `B` in `Q^d`. It is *valid*
//! when every scalar product `<a, b>` lies in `{0, 1}` and both sides
//! linearly span the space. Validation reports violations as data; the
//! constructor only rejects structural problems (wrong lengths, duplicates).
//!
//! The module also hosts maximal completion (enumerate all `2^d` product
//! patterns on a basis and keep the candidates valid against the whole other
//! side), canonicalization through a basis of `B`, the face score used to
//! select the induction pivot, and the normalization that translates `A` and
//! flips signs in `B` so that the zero level set dominates and projected
//! directions are sign-canonical.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{self, Subspace};
use crate::{RMatrix, RVector, Rational};

/// A pair of point sets with the products-in-`{0,1}` contract.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    d: usize,
    a: Vec<RVector>,
    b: Vec<RVector>,
}

impl Configuration {
    /// Builds a configuration, rejecting length mismatches and duplicate
    /// points. Product violations are not rejected here; they are what
    /// [`Configuration::validate`] reports.
    pub fn new(d: usize, a: Vec<RVector>, b: Vec<RVector>) -> Result<Self> {
        for v in a.iter().chain(b.iter()) {
            if v.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: v.dim() });
            }
        }
        check_distinct(&a)?;
        check_distinct(&b)?;
        Ok(Configuration { d, a, b })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn a(&self) -> &[RVector] {
        &self.a
    }

    pub fn b(&self) -> &[RVector] {
        &self.b
    }

    pub fn pairing(&self, i: usize, j: usize) -> Rational {
        self.a[i].dot(&self.b[j])
    }

    pub fn pairing_matrix(&self) -> Vec<Vec<Rational>> {
        self.a.iter().map(|a| self.b.iter().map(|b| a.dot(b)).collect()).collect()
    }

    /// `|A| * |B|`, the quantity the configuration bound is about.
    pub fn size_product(&self) -> u64 {
        self.a.len() as u64 * self.b.len() as u64
    }

    /// The bound `(d+1) * 2^d` for this ambient dimension.
    pub fn bound(&self) -> u64 {
        configuration_bound(self.d)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, a) in self.a.iter().enumerate() {
            for (j, b) in self.b.iter().enumerate() {
                let p = a.dot(b);
                if !(p.is_zero() || p.is_one()) {
                    violations.push(Violation { a_index: i, b_index: j, product: p });
                }
            }
        }
        let a_rank = rank_of(&self.a);
        let b_rank = rank_of(&self.b);
        ValidationReport {
            d: self.d,
            card_a: self.a.len(),
            card_b: self.b.len(),
            size_product: self.size_product(),
            bound: self.bound(),
            a_spans: a_rank == self.d,
            b_spans: b_rank == self.d,
            violations,
        }
    }
}

pub fn configuration_bound(d: usize) -> u64 {
    (d as u64 + 1) * (1u64 << d)
}

fn check_distinct(points: &[RVector]) -> Result<()> {
    for i in 1..points.len() {
        if points[..i].contains(&points[i]) {
            return Err(Error::DuplicatePoint { index: i });
        }
    }
    Ok(())
}

fn rank_of(points: &[RVector]) -> usize {
    if points.is_empty() {
        return 0;
    }
    RMatrix::from_rows(points.to_vec()).map(|m| m.rank()).unwrap_or(0)
}

/// A pair whose product falls outside `{0, 1}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub a_index: usize,
    pub b_index: usize,
    #[serde(with = "rat_string")]
    pub product: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub d: usize,
    pub card_a: usize,
    pub card_b: usize,
    pub size_product: u64,
    pub bound: u64,
    pub a_spans: bool,
    pub b_spans: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.a_spans && self.b_spans
    }
}

/// Serde helper: a single rational as a `"p/q"` string.
pub mod rat_string {
    use super::Rational;
    use crate::exactlin::Scalar;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_frac_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        Rational::parse_frac(&s).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigurationWire {
    d: usize,
    #[serde(rename = "A")]
    a: Vec<RVector>,
    #[serde(rename = "B")]
    b: Vec<RVector>,
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConfigurationWire { d: self.d, a: self.a.clone(), b: self.b.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = ConfigurationWire::deserialize(d)?;
        Configuration::new(wire.d, wire.a, wire.b).map_err(serde::de::Error::custom)
    }
}

fn in_zero_one(p: &Rational) -> bool {
    p.is_zero() || p.is_one()
}

/// The inclusion-maximal set of `b` with `<a, b>` in `{0,1}` for every
/// `a` in `points`. The zero vector qualifies trivially and is included iff
/// `include_zero`.
///
/// Algorithm: take the first linearly independent `d`-subset of `points` in
/// input order, enumerate all `2^d` target patterns on it, solve each, and
/// keep the candidates valid against the whole list.
pub fn complete_b(points: &[RVector], include_zero: bool) -> Result<Vec<RVector>> {
    complete_side(points, include_zero, "A")
}

/// Role-swapped twin of [`complete_b`]: the maximal set of `a` against a
/// fixed spanning `B`.
pub fn complete_a(points: &[RVector], include_zero: bool) -> Result<Vec<RVector>> {
    complete_side(points, include_zero, "B")
}

fn complete_side(fixed: &[RVector], include_zero: bool, side: &'static str) -> Result<Vec<RVector>> {
    let first = fixed.first().ok_or(Error::EmptyInput("completion input"))?;
    let d = first.dim();
    let basis = Subspace::from_spanning(d, fixed)?;
    if basis.dim() != d {
        return Err(Error::NotSpanning { side, rank: basis.dim(), dim: d });
    }
    let mut out = Vec::new();
    if d >= 64 {
        return Err(Error::ScaleExceeded { what: format!("completion in dimension {d}") });
    }
    for mask in 0u64..(1u64 << d) {
        if mask == 0 {
            if include_zero {
                out.push(RVector::zeros(d));
            }
            continue;
        }
        let targets: Vec<Rational> = (0..d)
            .map(|i| if (mask >> i) & 1 == 1 { Rational::one() } else { Rational::zero() })
            .collect();
        let sol = exactlin::solve_pairing(basis.basis(), &targets)?
            .ok_or_else(|| Error::Internal("full-rank pattern solve failed".into()))?;
        debug_assert!(sol.nullspace.is_empty());
        let cand = sol.solution;
        if fixed.iter().all(|f| in_zero_one(&f.dot(&cand))) {
            out.push(cand);
        }
    }
    Ok(out)
}

/// The invertible change of basis used by [`canonicalize`].
#[derive(Clone, Debug)]
pub struct CanonicalMap {
    /// Rows are the chosen basis elements of `B`; maps `a` to its pattern of
    /// products against that basis.
    pub matrix: RMatrix,
    pub basis_indices: Vec<usize>,
}

/// Rewrites the configuration in the coordinates of a basis of `B`: `A` maps
/// through the basis matrix, `B` through its inverse transpose. Pairings are
/// preserved exactly, and on valid inputs the new `A` lands inside `{0,1}^d`.
pub fn canonicalize(cfg: &Configuration) -> Result<(Configuration, CanonicalMap)> {
    let d = cfg.dim();
    let mut basis_indices = Vec::new();
    let mut chosen: Vec<RVector> = Vec::new();
    let mut r = 0;
    for (j, b) in cfg.b().iter().enumerate() {
        let mut cand = chosen.clone();
        cand.push(b.clone());
        let new_rank = RMatrix::from_rows(cand)?.rank();
        if new_rank > r {
            chosen.push(b.clone());
            basis_indices.push(j);
            r = new_rank;
        }
        if r == d {
            break;
        }
    }
    if r != d {
        return Err(Error::NotSpanning { side: "B", rank: r, dim: d });
    }
    let m = RMatrix::from_rows(chosen)?;
    let m_inv = m.inverse().ok_or_else(|| Error::Internal("basis matrix not invertible".into()))?;
    // M^{-T} b for each b: rows of m_inv are the columns of M^{-T}.
    let m_inv_t = m_inv.transpose();
    let new_a: Vec<RVector> = cfg.a().iter().map(|a| m.apply(a)).collect();
    let new_b: Vec<RVector> = cfg.b().iter().map(|b| m_inv_t.apply(b)).collect();
    let out = Configuration::new(d, new_a, new_b)?;
    Ok((out, CanonicalMap { matrix: m, basis_indices }))
}

/// The face score of a direction `x`: both level sets `argmin <a,x>` and
/// `argmax <a,x>` span a face of `conv(A)`, and the score is the larger of
/// their affine dimensions. A direction with constant product scores the
/// affine dimension of all of `A` (both faces are improper).
pub fn face_score(cfg: &Configuration, x: &RVector) -> Result<usize> {
    if x.is_zero() {
        return Err(Error::ZeroVector("face score direction"));
    }
    if cfg.a().is_empty() {
        return Err(Error::EmptyInput("face score needs a nonempty A"));
    }
    let products: Vec<Rational> = cfg.a().iter().map(|a| a.dot(x)).collect();
    let min = products.iter().min().expect("nonempty").clone();
    let max = products.iter().max().expect("nonempty").clone();
    let min_face: Vec<RVector> = cfg
        .a()
        .iter()
        .zip(&products)
        .filter(|(_, p)| **p == min)
        .map(|(a, _)| a.clone())
        .collect();
    let max_face: Vec<RVector> = cfg
        .a()
        .iter()
        .zip(&products)
        .filter(|(_, p)| **p == max)
        .map(|(a, _)| a.clone())
        .collect();
    Ok(exactlin::affine_dim(&min_face)?.max(exactlin::affine_dim(&max_face)?))
}

/// First pair `{x, -x}` with both members present and `x != -x`, if any.
pub fn has_opposite_points(points: &[RVector]) -> Option<(RVector, RVector)> {
    for i in 0..points.len() {
        if points[i].is_zero() {
            continue;
        }
        let neg = points[i].neg();
        for p in points.iter().skip(i + 1) {
            if *p == neg {
                return Some((points[i].clone(), p.clone()));
            }
        }
    }
    None
}

/// Per-element signs of the nonzero products: `epsilon[j]` for products of
/// `B[j]` over all of `A`, `gamma[j]` over the translated one-level set.
/// An element with only zero products gets `+1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelSignature {
    pub epsilon: Vec<i8>,
    pub gamma: Vec<i8>,
}

/// What the normalization did, sufficient to replay it exactly.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransformLog {
    /// Whether the level-set size condition fired (ties included).
    pub swapped: bool,
    /// The element of `A` subtracted from every point, or zero.
    pub translation: RVector,
    /// Index of the pivot inside `B`; the swap negates this entry.
    pub pivot_index: usize,
    /// Indices of `B` elements negated by the two sign-normalization passes.
    pub negated: Vec<usize>,
    /// The element of the one-level set translated to the origin when
    /// forming its anchored copy.
    pub a1_anchor: RVector,
}

impl TransformLog {
    /// Replays the log on the original configuration.
    pub fn replay(&self, cfg: &Configuration) -> Result<Configuration> {
        let mut a = cfg.a().to_vec();
        let mut b = cfg.b().to_vec();
        if self.swapped {
            a = a.iter().map(|x| x.sub(&self.translation)).collect();
            b[self.pivot_index] = b[self.pivot_index].neg();
        }
        for &j in &self.negated {
            b[j] = b[j].neg();
        }
        Configuration::new(cfg.dim(), a, b)
    }
}

/// A configuration after normalization, with the pivot it was normalized
/// against and the audit trail.
#[derive(Clone, Debug)]
pub struct NormalizedConfig {
    pub cfg: Configuration,
    pub pivot: RVector,
    pub log: TransformLog,
    pub signature: LevelSignature,
}

fn sign_of_nonzero_products(products: &[Rational]) -> Result<i8> {
    let mut sign: i8 = 0;
    for p in products {
        if p.is_zero() {
            continue;
        }
        let s = if p.is_positive() { 1 } else { -1 };
        if !(p.is_one() || (-p.clone()).is_one()) {
            return Err(Error::Internal(format!(
                "product {} outside {{0, +/-1}} during normalization",
                crate::exactlin::Scalar::to_frac_string(p)
            )));
        }
        if sign == 0 {
            sign = s;
        } else if sign != s {
            return Err(Error::Internal("mixed product signs during normalization".into()));
        }
    }
    Ok(if sign == 0 { 1 } else { sign })
}

/// Translates `A` and negates selected elements of `B` so that, against the
/// pivot, the zero level set is at least as large as the one level set, the
/// zero level set keeps products in `{0,1}` against everything, and the
/// projection of `B` along the pivot is free of opposite points.
///
/// Preconditions: `pivot` is a nonzero element of `B`, the configuration is
/// valid, and `A` contains the origin.
pub fn normalize(cfg: &Configuration, pivot: &RVector) -> Result<NormalizedConfig> {
    if pivot.is_zero() {
        return Err(Error::PivotNotInB);
    }
    let pivot_index = cfg.b().iter().position(|b| b == pivot).ok_or(Error::PivotNotInB)?;

    let mut a = cfg.a().to_vec();
    let mut b = cfg.b().to_vec();
    let d = cfg.dim();

    // Step 1: if the zero level set is not strictly larger, translate A by an
    // element pairing to 1 and negate the pivot.
    let zero_count = a.iter().filter(|x| x.dot(pivot).is_zero()).count();
    let one_count = a.iter().filter(|x| x.dot(pivot).is_one()).count();
    if zero_count + one_count != a.len() {
        return Err(Error::BadInput("a product against the pivot is outside {0,1}".into()));
    }
    let swapped = zero_count <= one_count;
    let mut new_pivot = pivot.clone();
    let translation;
    if swapped {
        let a_star = a
            .iter()
            .find(|x| x.dot(pivot).is_one())
            .cloned()
            .ok_or_else(|| {
                Error::Internal("no element of A pairs to 1 with the pivot; A cannot span".into())
            })?;
        a = a.iter().map(|x| x.sub(&a_star)).collect();
        new_pivot = pivot.neg();
        b[pivot_index] = new_pivot.clone();
        translation = a_star;
    } else {
        translation = RVector::zeros(d);
    }

    let zero_level: Vec<RVector> =
        a.iter().filter(|x| x.dot(&new_pivot).is_zero()).cloned().collect();
    let one_level: Vec<RVector> =
        a.iter().filter(|x| x.dot(&new_pivot).is_one()).cloned().collect();
    if zero_level.len() + one_level.len() != a.len() {
        return Err(Error::Internal("level split lost points after translation".into()));
    }
    if one_level.is_empty() {
        return Err(Error::Internal("one level set is empty; A cannot span".into()));
    }

    let mut negated = Vec::new();

    // Step 2: negate every b whose zero-level products are {0,-1}.
    for (j, bv) in b.iter_mut().enumerate() {
        let products: Vec<Rational> = zero_level.iter().map(|x| x.dot(bv)).collect();
        let sign = sign_of_nonzero_products(&products)?;
        if sign < 0 {
            *bv = bv.neg();
            negated.push(j);
        }
    }

    // Step 3: anchor the one level set at its lexicographically smallest
    // element; negate every b that is constant zero on the zero level set and
    // has {0,-1} products on the anchored copy.
    let a1_anchor = one_level.iter().min().expect("nonempty").clone();
    let anchored: Vec<RVector> = one_level.iter().map(|x| x.sub(&a1_anchor)).collect();
    for (j, bv) in b.iter_mut().enumerate() {
        let zero_products_all_zero = zero_level.iter().all(|x| x.dot(bv).is_zero());
        if !zero_products_all_zero {
            continue;
        }
        let products: Vec<Rational> = anchored.iter().map(|x| x.dot(bv)).collect();
        let sign = sign_of_nonzero_products(&products)?;
        if sign < 0 {
            *bv = bv.neg();
            negated.push(j);
        }
    }
    negated.sort_unstable();
    negated.dedup();

    // Final signatures over the transformed configuration.
    let epsilon: Vec<i8> = b
        .iter()
        .map(|bv| sign_of_nonzero_products(&a.iter().map(|x| x.dot(bv)).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let gamma: Vec<i8> = b
        .iter()
        .map(|bv| sign_of_nonzero_products(&anchored.iter().map(|x| x.dot(bv)).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;

    let out = Configuration::new(d, a, b)?;
    Ok(NormalizedConfig {
        cfg: out,
        pivot: new_pivot,
        log: TransformLog { swapped, translation, pivot_index, negated, a1_anchor },
        signature: LevelSignature { epsilon, gamma },
    })
}

/// Completes both sides to mutual inclusion-maximality: `B` against `A`,
/// then `A` against the completed `B`. One round suffices; the result is a
/// fixpoint of both completions.
pub fn maximalize(cfg: &Configuration) -> Result<Configuration> {
    let b = complete_b(cfg.a(), true)?;
    let a = complete_a(&b, true)?;
    Configuration::new(cfg.dim(), a, b)
}

/// Set comparison helper used by maximality checks and tests.
pub fn same_point_set(x: &[RVector], y: &[RVector]) -> bool {
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort();
    ys.sort();
    xs == ys
}

/// Elements of the completed side missing from the configuration.
/// `A` is compared with the full completion, `B` ignoring the zero vector.
pub struct MaximalityGap {
    pub missing_a: Vec<RVector>,
    pub missing_b: Vec<RVector>,
}

impl MaximalityGap {
    pub fn is_maximal(&self) -> bool {
        self.missing_a.is_empty() && self.missing_b.is_empty()
    }
}

pub fn maximality_gap(cfg: &Configuration) -> Result<MaximalityGap> {
    let b_max = complete_b(cfg.a(), true)?;
    let missing_b: Vec<RVector> = b_max
        .iter()
        .filter(|v| !v.is_zero() && !cfg.b().contains(v))
        .cloned()
        .collect();
    let a_max = complete_a(cfg.b(), true)?;
    let missing_a: Vec<RVector> =
        a_max.iter().filter(|v| !cfg.a().contains(v)).cloned().collect();
    Ok(MaximalityGap { missing_a, missing_b })
}

/// The canonical tight configuration: `A = {0, e_1, ..., e_d}`,
/// `B = {0,1}^d`. Its size product meets the bound `(d+1) 2^d` exactly.
pub fn tight_example(d: usize) -> Configuration {
    let mut a = vec![RVector::zeros(d)];
    for i in 0..d {
        a.push(RVector::unit(d, i));
    }
    let b = cube_points(d);
    Configuration::new(d, a, b).expect("tight example is structurally sound")
}

/// All points of `{0,1}^d` in binary counting order.
pub fn cube_points(d: usize) -> Vec<RVector> {
    assert!(d < 32, "cube enumeration is desk scale");
    (0u64..(1u64 << d))
        .map(|mask| {
            RVector::new(
                (0..d)
                    .map(|i| if (mask >> i) & 1 == 1 { Rational::one() } else { Rational::zero() })
                    .collect(),
            )
        })
        .collect()
}

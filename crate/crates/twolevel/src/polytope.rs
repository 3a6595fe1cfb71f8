//! 2-level polytopes at desk scale.
//!
//! Facet enumeration is exact: the facets of a full-dimensional polytope
//! given by vertices correspond to the extreme rays of the polar cone
//! `{ (t, y) : t + <v, y> >= 0 for every vertex v }`, which are computed with
//! the double description method (one halfspace inserted at a time, new rays
//! from adjacent positive/negative pairs, combinatorial adjacency test).
//! Everything stays in exact rational arithmetic.
//!
//! The module also classifies 2-levelness, reduces a 2-level polytope to a
//! binary pair configuration (vertex levels scaled to `{0,1}` with a vertex
//! at the origin), verifies the vertex-facet product bound `d * 2^{d+1}`,
//! and generates the classic families: hypercubes, cross-polytopes,
//! simplices, order and chain polytopes of posets, and stable set polytopes
//! of graphs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::config::{rat_string, Configuration};
use crate::error::{Error, Result};
use crate::exactlin;
use crate::graph::Graph;
use crate::prooftrace::{self, BuildOptions};
use crate::{RMatrix, RVector, Rational};

/// Default desk-scale caps for facet enumeration.
pub const MAX_DIM: usize = 6;
pub const MAX_VERTICES: usize = 64;

/// A polytope described by its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    d: usize,
    vertices: Vec<RVector>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VPolytopeWire {
    d: usize,
    vertices: Vec<RVector>,
}

impl Serialize for VPolytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VPolytopeWire { d: self.d, vertices: self.vertices.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for VPolytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = VPolytopeWire::deserialize(d)?;
        VPolytope::new(wire.d, wire.vertices).map_err(serde::de::Error::custom)
    }
}

impl VPolytope {
    pub fn new(d: usize, vertices: Vec<RVector>) -> Result<Self> {
        for v in &vertices {
            if v.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: v.dim() });
            }
        }
        for i in 1..vertices.len() {
            if vertices[..i].contains(&vertices[i]) {
                return Err(Error::DuplicatePoint { index: i });
            }
        }
        Ok(VPolytope { d, vertices })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn vertices(&self) -> &[RVector] {
        &self.vertices
    }

    pub fn f0(&self) -> u64 {
        self.vertices.len() as u64
    }

    pub fn is_full_dimensional(&self) -> Result<bool> {
        Ok(exactlin::affine_dim(&self.vertices)? == self.d)
    }
}

/// The bound `d * 2^{d+1}` on the vertex-facet count product.
pub fn polytope_bound(d: usize) -> u64 {
    (d as u64) * (1u64 << (d + 1))
}

/// Rescales to the primitive integer vector on the same ray (positive
/// scaling only; the direction is preserved).
fn primitive_ray(v: &RVector) -> RVector {
    let mut lcm = BigInt::one();
    for c in v.coords() {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = v.coords().iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if g.is_zero() {
        return v.clone();
    }
    RVector::new(ints.into_iter().map(|i| Rational::from_integer(i / &g)).collect())
}

/// Flips a primitive vector so its first nonzero coordinate is positive.
/// Returns the canonical vector and whether a flip happened.
fn canonical_direction(v: &RVector) -> (RVector, bool) {
    match v.coords().iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() => (v.neg(), true),
        _ => (v.clone(), false),
    }
}

/// One ray of the double description computation with its tight set.
struct DdRay {
    ray: RVector,
    tight: u128,
}

/// Extreme rays of the polar cone of `conv(vertices)` in `Q^{d+1}`.
/// Halfspace `j` is `<(1, vertices[j]), z> >= 0`.
fn polar_extreme_rays(vertices: &[RVector], d: usize) -> Result<Vec<RVector>> {
    let n = vertices.len();
    if n > 127 {
        return Err(Error::ScaleExceeded { what: format!("{n} polar halfspaces") });
    }
    let hs: Vec<RVector> = vertices
        .iter()
        .map(|v| {
            let mut c = vec![Rational::one()];
            c.extend(v.coords().iter().cloned());
            RVector::new(c)
        })
        .collect();

    // Initial simplicial cone from d+1 affinely independent vertices.
    let mut init: Vec<usize> = Vec::new();
    let mut chosen: Vec<RVector> = Vec::new();
    for (j, h) in hs.iter().enumerate() {
        let mut cand = chosen.clone();
        cand.push(h.clone());
        if RMatrix::from_rows(cand)?.rank() > chosen.len() {
            chosen.push(h.clone());
            init.push(j);
        }
        if init.len() == d + 1 {
            break;
        }
    }
    if init.len() != d + 1 {
        return Err(Error::NotFullDimensional { affine_dim: init.len().saturating_sub(1), dim: d });
    }

    let mut processed: Vec<usize> = init.clone();
    let mut rays: Vec<DdRay> = Vec::new();
    for j in 0..=d {
        let targets: Vec<Rational> =
            (0..=d).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect();
        let sol = exactlin::solve_pairing(&chosen, &targets)?
            .ok_or_else(|| Error::Internal("initial cone solve failed".into()))?;
        let ray = primitive_ray(&sol.solution);
        let tight = tight_set(&ray, &hs, &processed);
        rays.push(DdRay { ray, tight });
    }

    for j in 0..n {
        if init.contains(&j) {
            continue;
        }
        let h = &hs[j];
        let evals: Vec<Rational> = rays.iter().map(|r| h.dot(&r.ray)).collect();
        let bit = 1u128 << j;
        processed.push(j);

        if evals.iter().all(|e| !e.is_negative()) {
            for (r, e) in rays.iter_mut().zip(&evals) {
                if e.is_zero() {
                    r.tight |= bit;
                }
            }
            continue;
        }

        let pos: Vec<usize> = (0..rays.len()).filter(|&i| evals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| evals[i].is_negative()).collect();

        let mut new_rays: Vec<DdRay> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight & rays[q].tight;
                // adjacency: no third extreme ray is tight everywhere both are
                let blocked =
                    rays.iter().enumerate().any(|(i, r)| i != p && i != q && common & r.tight == common);
                if blocked {
                    continue;
                }
                let combo = rays[q].ray.scale(&evals[p]).sub(&rays[p].ray.scale(&evals[q]));
                let ray = primitive_ray(&combo);
                if new_rays.iter().any(|r| r.ray == ray) {
                    continue;
                }
                let tight = tight_set(&ray, &hs, &processed);
                new_rays.push(DdRay { ray, tight });
            }
        }

        let mut kept: Vec<DdRay> = Vec::new();
        for (i, r) in rays.into_iter().enumerate() {
            if evals[i].is_negative() {
                continue;
            }
            let tight = if evals[i].is_zero() { r.tight | bit } else { r.tight };
            kept.push(DdRay { ray: r.ray, tight });
        }
        kept.extend(new_rays);
        rays = kept;
    }

    Ok(rays.into_iter().map(|r| r.ray).collect())
}

fn tight_set(ray: &RVector, hs: &[RVector], processed: &[usize]) -> u128 {
    let mut t = 0u128;
    for &i in processed {
        if hs[i].dot(ray).is_zero() {
            t |= 1 << i;
        }
    }
    t
}

/// One slab direction of the polytope: the canonical primitive normal, the
/// extreme attained levels, which side(s) define facets, and the level of
/// every vertex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Facet {
    pub normal: RVector,
    #[serde(with = "rat_string")]
    pub rhs_low: Rational,
    #[serde(with = "rat_string")]
    pub rhs_high: Rational,
    pub low_is_facet: bool,
    pub high_is_facet: bool,
    #[serde(skip)]
    pub vertex_levels: Vec<Rational>,
}

impl Facet {
    pub fn facet_count(&self) -> u64 {
        self.low_is_facet as u64 + self.high_is_facet as u64
    }

    pub fn distinct_levels(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for l in &self.vertex_levels {
            if !out.contains(l) {
                out.push(l.clone());
            }
        }
        out.sort();
        out
    }
}

/// Exact, complete facet enumeration. Parallel facet pairs share one
/// [`Facet`] record with both side flags set; `f_{d-1}` is the flag total.
pub fn facets(p: &VPolytope) -> Result<Vec<Facet>> {
    facets_with_scale(p, false)
}

pub fn facets_with_scale(p: &VPolytope, allow_large: bool) -> Result<Vec<Facet>> {
    let d = p.dim();
    if d == 0 {
        return Err(Error::EmptyInput("facets of a zero-dimensional polytope"));
    }
    if !allow_large && (d > MAX_DIM || p.vertices().len() > MAX_VERTICES) {
        return Err(Error::ScaleExceeded {
            what: format!("facet enumeration for d={d}, {} vertices", p.vertices().len()),
        });
    }
    let adim = exactlin::affine_dim(p.vertices())?;
    if adim != d {
        return Err(Error::NotFullDimensional { affine_dim: adim, dim: d });
    }

    let rays = polar_extreme_rays(p.vertices(), d)?;
    // Each ray (t, y) is the valid inequality t + <y, x> >= 0, i.e. the
    // facet <-y, x> <= t.
    let mut records: Vec<Facet> = Vec::new();
    for ray in &rays {
        let t = ray.coords()[0].clone();
        let y = RVector::new(ray.coords()[1..].to_vec());
        if y.is_zero() {
            return Err(Error::Internal("polar ray with zero direction".into()));
        }
        let normal = y.neg();
        let (canon, flipped) = canonical_direction(&normal);
        let levels: Vec<Rational> = p.vertices().iter().map(|v| v.dot(&canon)).collect();
        let low = levels.iter().min().expect("vertices nonempty").clone();
        let high = levels.iter().max().expect("vertices nonempty").clone();
        // <normal, x> <= t is tight at the max of <normal, .>; in canonical
        // coordinates that is the high side when not flipped, else the low.
        let expected = if flipped { -t.clone() } else { t.clone() };
        let side_level = if flipped { &low } else { &high };
        if expected != *side_level {
            return Err(Error::Internal("facet level disagrees with vertex extremes".into()));
        }
        match records.iter_mut().find(|r| r.normal == canon) {
            Some(r) => {
                if flipped {
                    r.low_is_facet = true;
                } else {
                    r.high_is_facet = true;
                }
            }
            None => records.push(Facet {
                normal: canon,
                rhs_low: low,
                rhs_high: high,
                low_is_facet: flipped,
                high_is_facet: !flipped,
                vertex_levels: levels,
            }),
        }
    }
    records.sort_by(|a, b| a.normal.cmp(&b.normal));

    // Duality checks: every vertex satisfies every slab, and every facet is
    // tight on an affinely (d-1)-dimensional vertex set.
    for r in &records {
        for l in &r.vertex_levels {
            if l < &r.rhs_low || l > &r.rhs_high {
                return Err(Error::Internal("vertex violates an enumerated facet".into()));
            }
        }
        for (level, is_facet) in [(&r.rhs_low, r.low_is_facet), (&r.rhs_high, r.high_is_facet)] {
            if !is_facet {
                continue;
            }
            let tight: Vec<RVector> = p
                .vertices()
                .iter()
                .zip(&r.vertex_levels)
                .filter(|(_, l)| *l == level)
                .map(|(v, _)| v.clone())
                .collect();
            if exactlin::affine_dim(&tight)? != d - 1 {
                return Err(Error::Internal("facet not tight on a ridge-spanning set".into()));
            }
        }
    }
    Ok(records)
}

/// Indices of listed points that are not vertices of the hull: fewer than
/// `d` independent facet normals are tight there.
pub fn non_vertex_points(p: &VPolytope, records: &[Facet]) -> Result<Vec<usize>> {
    let mut bad = Vec::new();
    for i in 0..p.vertices().len() {
        let mut tight_normals: Vec<RVector> = Vec::new();
        for r in records {
            let l = &r.vertex_levels[i];
            if (r.low_is_facet && *l == r.rhs_low) || (r.high_is_facet && *l == r.rhs_high) {
                tight_normals.push(r.normal.clone());
            }
        }
        let rank =
            if tight_normals.is_empty() { 0 } else { RMatrix::from_rows(tight_normals)?.rank() };
        if rank != p.dim() {
            bad.push(i);
        }
    }
    Ok(bad)
}

/// Why a polytope fails the 2-level test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwoLevelWitness {
    pub normal: RVector,
    pub distinct_levels: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwoLevelReport {
    pub d: usize,
    pub is_two_level: bool,
    pub witness: Option<TwoLevelWitness>,
    pub f0: u64,
    pub f_dminus1: u64,
    pub product: u64,
    pub bound: u64,
}

/// True iff every slab direction attains exactly two values on the vertex
/// set. The report always carries `f_0`, `f_{d-1}` and their product.
pub fn is_two_level(p: &VPolytope) -> Result<TwoLevelReport> {
    is_two_level_with_scale(p, false)
}

pub fn is_two_level_with_scale(p: &VPolytope, allow_large: bool) -> Result<TwoLevelReport> {
    let records = facets_with_scale(p, allow_large)?;
    two_level_report(p, &records)
}

fn two_level_report(p: &VPolytope, records: &[Facet]) -> Result<TwoLevelReport> {
    let f0 = p.f0();
    let f_dminus1: u64 = records.iter().map(Facet::facet_count).sum();
    let mut witness = None;
    for r in records {
        let distinct = r.distinct_levels();
        if distinct.len() != 2 {
            witness = Some(TwoLevelWitness {
                normal: r.normal.clone(),
                distinct_levels: distinct
                    .iter()
                    .map(crate::exactlin::Scalar::to_frac_string)
                    .collect(),
            });
            break;
        }
    }
    Ok(TwoLevelReport {
        d: p.dim(),
        is_two_level: witness.is_none(),
        witness,
        f0,
        f_dminus1,
        product: f0 * f_dminus1,
        bound: polytope_bound(p.dim()),
    })
}

/// Reduces a 2-level polytope to a binary pair configuration: translate the
/// lexicographically smallest vertex to the origin and scale every slab
/// normal so the two vertex levels become `{0, 1}`. Normals defining two
/// facets carry multiplicity 2, so `f_{d-1}` is the multiplicity total.
pub fn to_configuration(p: &VPolytope) -> Result<(Configuration, Vec<u8>)> {
    to_configuration_with_scale(p, false)
}

pub fn to_configuration_with_scale(
    p: &VPolytope,
    allow_large: bool,
) -> Result<(Configuration, Vec<u8>)> {
    let records = facets_with_scale(p, allow_large)?;
    let report = two_level_report(p, &records)?;
    if !report.is_two_level {
        return Err(Error::NotTwoLevel);
    }
    let origin = p.vertices().iter().min().expect("vertices nonempty").clone();
    let vertices: Vec<RVector> = p.vertices().iter().map(|v| v.sub(&origin)).collect();

    let mut b: Vec<RVector> = Vec::new();
    let mut multiplicity: Vec<u8> = Vec::new();
    for r in &records {
        let shift = origin.dot(&r.normal);
        let low = r.rhs_low.clone() - shift.clone();
        let high = r.rhs_high.clone() - shift;
        let scale = if low.is_zero() {
            high
        } else if high.is_zero() {
            low
        } else {
            return Err(Error::Internal("translated vertex levels do not include zero".into()));
        };
        if scale.is_zero() {
            return Err(Error::Internal("slab with a single level".into()));
        }
        b.push(r.normal.scale(&(Rational::one() / scale)));
        multiplicity.push(r.facet_count() as u8);
    }
    let cfg = Configuration::new(p.dim(), vertices, b)?;
    Ok((cfg, multiplicity))
}

/// Cross-check of the double-facet argument on the reduced configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DoubleFacetCrossCheck {
    pub pivot: RVector,
    pub b_zero_empty: bool,
    pub b_one_empty: bool,
    pub level_checks_pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub two_level: TwoLevelReport,
    pub config_card_a: u64,
    pub config_card_b: u64,
    pub config_product: u64,
    pub config_bound: u64,
    pub config_valid: bool,
    pub multiplicity_accounting: bool,
    pub cross_check: Option<DoubleFacetCrossCheck>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.two_level.is_two_level
            && self.two_level.product <= self.two_level.bound
            && self.config_valid
            && self.config_product <= self.config_bound
            && self.multiplicity_accounting
            && self
                .cross_check
                .as_ref()
                .is_none_or(|c| c.b_zero_empty && c.b_one_empty && c.level_checks_pass)
    }
}

/// Computes `f_0 * f_{d-1}` against `d * 2^{d+1}` and, when some direction
/// defines two facets, replays one induction level with that direction
/// forced as the pivot to confirm both constancy classes come out empty.
pub fn verify_bound(p: &VPolytope) -> Result<BoundReport> {
    verify_bound_with_scale(p, false)
}

pub fn verify_bound_with_scale(p: &VPolytope, allow_large: bool) -> Result<BoundReport> {
    let records = facets_with_scale(p, allow_large)?;
    let two_level = two_level_report(p, &records)?;
    if !two_level.is_two_level {
        return Err(Error::NotTwoLevel);
    }
    let (cfg, multiplicity) = to_configuration_with_scale(p, allow_large)?;
    let report = cfg.validate();
    let config_product = cfg.size_product();
    let mult_total: u64 = multiplicity.iter().map(|&m| m as u64).sum();

    let double_index = multiplicity.iter().position(|&m| m == 2);
    let cross_check = match double_index {
        None => None,
        Some(i) => {
            let pivot = cfg.b()[i].clone();
            let node = prooftrace::build_node(
                &cfg,
                &BuildOptions { forced_pivot: Some(pivot.clone()), waive_maximality: true },
            )?;
            Some(DoubleFacetCrossCheck {
                pivot,
                b_zero_empty: node.b_zero.is_empty(),
                b_one_empty: node.b_one.is_empty(),
                level_checks_pass: node.ledger.checks.all_pass(),
            })
        }
    };

    Ok(BoundReport {
        config_card_a: cfg.a().len() as u64,
        config_card_b: cfg.b().len() as u64,
        config_product,
        config_bound: cfg.bound(),
        config_valid: report.is_valid(),
        multiplicity_accounting: two_level.f_dminus1 == mult_total
            && two_level.product <= 2 * config_product,
        two_level,
        cross_check,
    })
}

/// A finite poset on `0..n`, stored as the full "is at most" relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    /// `le[i]` is the bitmask of all `j` with `i <= j`, including `i`.
    le: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetWire {
    n: usize,
    covers: Vec<(usize, usize)>,
}

impl Serialize for Poset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PosetWire { n: self.n, covers: self.covers() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = PosetWire::deserialize(d)?;
        Poset::from_covers(wire.n, &wire.covers).map_err(serde::de::Error::custom)
    }
}

impl Poset {
    /// Builds a poset from cover relations `(lower, upper)`. Rejects cycles.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        if n > 16 {
            return Err(Error::ScaleExceeded { what: format!("poset on {n} elements") });
        }
        let mut up = vec![0u32; n];
        for &(lo, hi) in covers {
            if lo >= n || hi >= n {
                return Err(Error::BadInput(format!("cover ({lo},{hi}) out of range")));
            }
            if lo == hi {
                return Err(Error::BadInput(format!("cover ({lo},{hi}) is reflexive")));
            }
            up[lo] |= 1 << hi;
        }
        // reachability closure with cycle detection
        let mut le = vec![0u32; n];
        for (i, closure) in le.iter_mut().enumerate() {
            let mut seen = 1u32 << i;
            let mut frontier = vec![i];
            while let Some(x) = frontier.pop() {
                let mut next = up[x] & !seen;
                while next != 0 {
                    let y = next.trailing_zeros() as usize;
                    next &= next - 1;
                    seen |= 1 << y;
                    frontier.push(y);
                }
            }
            *closure = seen;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i] >> j & 1 == 1 && le[j] >> i & 1 == 1 {
                    return Err(Error::BadInput("cover relations contain a cycle".into()));
                }
            }
        }
        Ok(Poset { n, le })
    }

    fn from_le(n: usize, le: Vec<u32>) -> Self {
        Poset { n, le }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i] >> j & 1 == 1
    }

    /// Cover relations: `i < j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j || !self.le(i, j) {
                    continue;
                }
                let between =
                    (0..self.n).any(|k| k != i && k != j && self.le(i, k) && self.le(k, j));
                if !between {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Up-closed subsets as bitmasks, in increasing mask order.
    pub fn filters(&self) -> Vec<u32> {
        (0u32..(1u32 << self.n))
            .filter(|&mask| {
                (0..self.n).all(|i| mask >> i & 1 == 0 || self.le[i] & mask == self.le[i])
            })
            .collect()
    }

    /// Antichains as bitmasks, in increasing mask order.
    pub fn antichains(&self) -> Vec<u32> {
        (0u32..(1u32 << self.n))
            .filter(|&mask| {
                (0..self.n).all(|i| {
                    mask >> i & 1 == 0
                        || (0..self.n).all(|j| {
                            i == j || mask >> j & 1 == 0 || !(self.le(i, j) || self.le(j, i))
                        })
                })
            })
            .collect()
    }

    /// Every labeled poset on `n` elements (desk scale; 219 for `n = 4`).
    pub fn all_posets(n: usize) -> Vec<Poset> {
        assert!(n <= 5, "poset enumeration is desk scale");
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let mut out = Vec::new();
        'outer: for mask in 0u64..(1u64 << pairs.len()) {
            let mut rel = vec![0u32; n];
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    rel[i] |= 1 << j;
                }
            }
            for i in 0..n {
                for j in 0..n {
                    if i != j && rel[i] >> j & 1 == 1 {
                        if rel[j] >> i & 1 == 1 {
                            continue 'outer; // antisymmetry
                        }
                        if rel[j] & !rel[i] & !(1 << i) != 0 {
                            continue 'outer; // transitivity
                        }
                    }
                }
            }
            let le = (0..n).map(|i| rel[i] | (1 << i)).collect();
            out.push(Poset::from_le(n, le));
        }
        out
    }
}

fn indicator(d: usize, mask: u32) -> RVector {
    RVector::new(
        (0..d)
            .map(|i| if mask >> i & 1 == 1 { Rational::one() } else { Rational::zero() })
            .collect(),
    )
}

pub fn hypercube(d: usize) -> Result<VPolytope> {
    check_gen_scale(d, 1usize << d)?;
    VPolytope::new(d, crate::config::cube_points(d))
}

pub fn cross_polytope(d: usize) -> Result<VPolytope> {
    check_gen_scale(d, 2 * d)?;
    let mut v = Vec::new();
    for i in 0..d {
        v.push(RVector::unit(d, i));
        v.push(RVector::unit(d, i).neg());
    }
    VPolytope::new(d, v)
}

pub fn simplex(d: usize) -> Result<VPolytope> {
    check_gen_scale(d, d + 1)?;
    let mut v = vec![RVector::zeros(d)];
    for i in 0..d {
        v.push(RVector::unit(d, i));
    }
    VPolytope::new(d, v)
}

/// Vertices are the indicator vectors of the poset's filters.
pub fn order_polytope(p: &Poset) -> Result<VPolytope> {
    let d = p.n();
    let filters = p.filters();
    check_gen_scale(d, filters.len())?;
    VPolytope::new(d, filters.into_iter().map(|m| indicator(d, m)).collect())
}

/// Vertices are the indicator vectors of the poset's antichains.
pub fn chain_polytope(p: &Poset) -> Result<VPolytope> {
    let d = p.n();
    let antichains = p.antichains();
    check_gen_scale(d, antichains.len())?;
    VPolytope::new(d, antichains.into_iter().map(|m| indicator(d, m)).collect())
}

/// Vertices are the indicator vectors of the graph's stable sets.
/// 2-levelness is checked downstream, never assumed; it holds exactly for
/// perfect graphs.
pub fn stable_set_polytope(g: &Graph) -> Result<VPolytope> {
    let d = g.node_count();
    let sets = g.stable_sets();
    check_gen_scale(d, sets.len())?;
    VPolytope::new(d, sets.into_iter().map(|m| indicator(d, m)).collect())
}

fn check_gen_scale(d: usize, nvertices: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::EmptyInput("zero-dimensional family"));
    }
    if d > MAX_DIM || nvertices > MAX_VERTICES {
        return Err(Error::ScaleExceeded { what: format!("family with d={d}, {nvertices} vertices") });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[i64]) -> RVector {
        RVector::from_i64s(coords)
    }

    #[test]
    fn hypercube_facets() {
        for d in 1..=4 {
            let p = hypercube(d).unwrap();
            let records = facets(&p).unwrap();
            assert_eq!(records.len(), d, "d={d}");
            assert!(records.iter().all(|r| r.low_is_facet && r.high_is_facet));
            let f: u64 = records.iter().map(Facet::facet_count).sum();
            assert_eq!(f, 2 * d as u64);
        }
    }

    #[test]
    fn simplex_facets() {
        for d in 2..=4 {
            let p = simplex(d).unwrap();
            let records = facets(&p).unwrap();
            let f: u64 = records.iter().map(Facet::facet_count).sum();
            assert_eq!(f, d as u64 + 1, "d={d}");
        }
    }

    #[test]
    fn cross_polytope_facets_come_in_parallel_pairs() {
        let p = cross_polytope(3).unwrap();
        let records = facets(&p).unwrap();
        assert_eq!(records.len(), 4);
        assert!(records.iter().all(|r| r.low_is_facet && r.high_is_facet));
        let f: u64 = records.iter().map(Facet::facet_count).sum();
        assert_eq!(f, 8);
    }

    #[test]
    fn pentagon_is_not_two_level() {
        let p =
            VPolytope::new(2, vec![v(&[0, 0]), v(&[2, 0]), v(&[3, 1]), v(&[1, 2]), v(&[0, 1])])
                .unwrap();
        let report = is_two_level(&p).unwrap();
        assert!(!report.is_two_level);
        let w = report.witness.expect("a witness facet");
        assert!(w.distinct_levels.len() >= 3);
        assert_eq!(report.f0, 5);
        assert_eq!(report.f_dminus1, 5);
    }

    #[test]
    fn basic_families_are_two_level() {
        assert!(is_two_level(&hypercube(3).unwrap()).unwrap().is_two_level);
        assert!(is_two_level(&cross_polytope(3).unwrap()).unwrap().is_two_level);
        assert!(is_two_level(&simplex(3).unwrap()).unwrap().is_two_level);
    }

    #[test]
    fn vertex_verification_flags_interior_points() {
        let mut pts = crate::config::cube_points(2);
        pts.push(RVector::new(vec![
            Rational::new(1.into(), 2.into()),
            Rational::new(1.into(), 2.into()),
        ]));
        let p = VPolytope::new(2, pts).unwrap();
        let records = facets(&p).unwrap();
        let bad = non_vertex_points(&p, &records).unwrap();
        assert_eq!(bad, vec![4]);

        let q = hypercube(2).unwrap();
        let records = facets(&q).unwrap();
        assert!(non_vertex_points(&q, &records).unwrap().is_empty());
    }

    #[test]
    fn hypercube_configuration() {
        let p = hypercube(3).unwrap();
        let (cfg, mult) = to_configuration(&p).unwrap();
        assert_eq!(cfg.a().len(), 8);
        assert_eq!(cfg.b().len(), 3);
        assert!(mult.iter().all(|&m| m == 2));
        assert!(cfg.validate().is_valid());
        let mut b = cfg.b().to_vec();
        b.sort();
        let mut expected = vec![RVector::unit(3, 0), RVector::unit(3, 1), RVector::unit(3, 2)];
        expected.sort();
        assert_eq!(b, expected);
    }

    #[test]
    fn simplex_configuration() {
        let p = simplex(3).unwrap();
        let (cfg, mult) = to_configuration(&p).unwrap();
        assert_eq!(cfg.a().len(), 4);
        assert_eq!(cfg.b().len(), 4);
        assert!(mult.iter().all(|&m| m == 1));
        assert!(cfg.validate().is_valid());
        assert!(cfg.b().contains(&v(&[1, 1, 1])));
    }

    #[test]
    fn translated_polytope_reduces_cleanly() {
        // shift the square away from the origin; the reduction translates back
        let shift = v(&[5, -3]);
        let pts: Vec<RVector> =
            crate::config::cube_points(2).iter().map(|p| p.add(&shift)).collect();
        let p = VPolytope::new(2, pts).unwrap();
        let (cfg, _) = to_configuration(&p).unwrap();
        assert!(cfg.validate().is_valid());
        assert!(cfg.a().iter().any(|a| a.is_zero()));
    }

    #[test]
    fn verify_bound_equalities() {
        for d in 1..=4 {
            let r = verify_bound(&hypercube(d).unwrap()).unwrap();
            assert!(r.passed());
            assert_eq!(r.two_level.product, polytope_bound(d), "hypercube d={d}");
        }
        let r = verify_bound(&cross_polytope(3).unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(r.two_level.product, 48);
        assert_eq!(r.two_level.bound, 48);

        let r = verify_bound(&simplex(3).unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(r.two_level.product, 16);
    }

    #[test]
    fn double_facet_cross_check_runs_on_hypercube() {
        let r = verify_bound(&hypercube(3).unwrap()).unwrap();
        let c = r.cross_check.expect("hypercube has parallel facet pairs");
        assert!(c.b_zero_empty && c.b_one_empty && c.level_checks_pass);
    }

    #[test]
    fn poset_counts() {
        assert_eq!(Poset::all_posets(1).len(), 1);
        assert_eq!(Poset::all_posets(2).len(), 3);
        assert_eq!(Poset::all_posets(3).len(), 19);
        assert_eq!(Poset::all_posets(4).len(), 219);
    }

    #[test]
    fn two_chain_order_polytope() {
        let p = Poset::from_covers(2, &[(0, 1)]).unwrap();
        let op = order_polytope(&p).unwrap();
        assert_eq!(op.vertices().len(), 3);
        let cp = chain_polytope(&p).unwrap();
        assert_eq!(cp.vertices().len(), 3);
    }

    #[test]
    fn poset_rejects_cycles() {
        assert!(Poset::from_covers(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Poset::from_covers(3, &[(0, 1), (1, 2), (2, 0)]).is_err());
    }

    #[test]
    fn antichain_poset_gives_hypercube() {
        let p = Poset::from_covers(3, &[]).unwrap();
        assert_eq!(order_polytope(&p).unwrap().vertices().len(), 8);
        assert_eq!(chain_polytope(&p).unwrap().vertices().len(), 8);
    }

    #[test]
    fn stable_set_polytope_tracks_perfectness() {
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let p = stable_set_polytope(&c5).unwrap();
        assert!(!is_two_level(&p).unwrap().is_two_level);

        let p4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = stable_set_polytope(&p4).unwrap();
        assert!(is_two_level(&p).unwrap().is_two_level);
    }

    #[test]
    fn generator_examples() {
        assert_eq!(hypercube(2).unwrap().vertices().len(), 4);
        let c = cross_polytope(3).unwrap();
        assert_eq!(c.vertices().len(), 6);
        assert!(c.vertices().contains(&v(&[0, 0, -1])));
    }

    #[test]
    fn scale_limits_enforced() {
        assert!(matches!(hypercube(7), Err(Error::ScaleExceeded { .. })));
        assert_eq!(hypercube(6).unwrap().vertices().len(), 64);
    }

    #[test]
    fn facets_reject_flat_input() {
        let p = VPolytope::new(2, vec![v(&[0, 0]), v(&[1, 1]), v(&[2, 2])]).unwrap();
        assert!(matches!(facets(&p), Err(Error::NotFullDimensional { .. })));
    }

    #[test]
    fn polytope_json_round_trip() {
        let p = cross_polytope(2).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: VPolytope = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);

        let poset = Poset::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        let s = serde_json::to_string(&poset).unwrap();
        let back: Poset = serde_json::from_str(&s).unwrap();
        assert_eq!(back, poset);
    }
}

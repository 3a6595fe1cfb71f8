//! Induction replay on a concrete configuration.
//!
//! One trace level fixes a pivot direction in `B` (maximizing the face
//! score), normalizes the configuration against it, splits `A` into the zero
//! and one level sets, groups `B` into fibers of the projection along the
//! pivot, partitions the paired elements by constancy, and records every
//! count and inequality of the argument in a ledger. The recursion then
//! rewrites the zero level set and the reduced projections in coordinates of
//! the span of the zero level set (a pairing-preserving change of basis),
//! re-completes both sides to maximality, and descends until the reduced
//! dimension reaches zero.
//!
//! The emitted [`Certificate`] carries counts and pass flags only; every
//! recorded inequality can be re-derived from the counts alone, which is what
//! [`audit_certificate`] does.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::config::{
    self, configuration_bound, has_opposite_points, maximality_gap, normalize, Configuration,
    LevelSignature, TransformLog,
};
use crate::error::{Error, Result};
use crate::exactlin::{self, Scalar, Subspace};
use crate::{RMatrix, RSubspace, RVector, Rational};

/// Desk-scale cap on the ambient dimension of traced configurations.
pub const MAX_TRACE_DIM: usize = 32;

/// How a node is built: the pivot can be forced (the polytope cross-check
/// does this with a double-facet direction), and the maximality precondition
/// can be waived for inputs that are deliberately not maximal.
#[derive(Clone, Debug, Default)]
pub struct BuildOptions {
    pub forced_pivot: Option<RVector>,
    pub waive_maximality: bool,
}

/// Picks the pivot: the lexicographically smallest element of `B \ {0}`
/// maximizing the face score.
pub fn select_pivot(cfg: &Configuration) -> Result<RVector> {
    let candidates: Vec<&RVector> = cfg.b().iter().filter(|b| !b.is_zero()).collect();
    if candidates.is_empty() {
        return Err(Error::EmptyInput("B has no nonzero element to pivot on"));
    }
    let mut best: Option<(usize, &RVector)> = None;
    for b in candidates {
        let score = config::face_score(cfg, b)?;
        best = match best {
            None => Some((score, b)),
            Some((s, v)) => {
                if score > s || (score == s && *b < *v) {
                    Some((score, b))
                } else {
                    Some((s, v))
                }
            }
        };
    }
    Ok(best.expect("nonempty candidates").1.clone())
}

/// Splits `A` into the zero and one level sets against the pivot.
/// Errors if some product falls outside `{0, 1}`.
pub fn split_levels(
    cfg: &Configuration,
    pivot: &RVector,
) -> Result<(Vec<RVector>, Vec<RVector>)> {
    let mut zero = Vec::new();
    let mut one = Vec::new();
    for a in cfg.a() {
        let p = a.dot(pivot);
        if p.is_zero() {
            zero.push(a.clone());
        } else if p.is_one() {
            one.push(a.clone());
        } else {
            return Err(Error::BadInput(format!(
                "product {} against the pivot is outside {{0,1}}",
                p.to_frac_string()
            )));
        }
    }
    Ok((zero, one))
}

/// A fiber of the projection along the pivot: one image with its preimages
/// in `B`, in input order.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub image: RVector,
    pub preimages: Vec<RVector>,
}

/// Groups `B` by exact projection image. Errors on a fiber with three or
/// more preimages (impossible for valid maximal inputs). Returns the fibers
/// in first-appearance order plus the unique-fiber and paired elements.
pub fn fiber_partition(
    b: &[RVector],
    pivot: &RVector,
) -> Result<(Vec<Fiber>, Vec<RVector>, Vec<RVector>)> {
    let mut fibers: Vec<Fiber> = Vec::new();
    for (j, bv) in b.iter().enumerate() {
        let image = exactlin::project_hyperplane(bv, pivot)?;
        match fibers.iter_mut().find(|f| f.image == image) {
            Some(f) => {
                if f.preimages.len() >= 2 {
                    return Err(Error::FiberTooLarge { b_index: j, count: f.preimages.len() + 1 });
                }
                f.preimages.push(bv.clone());
            }
            None => fibers.push(Fiber { image, preimages: vec![bv.clone()] }),
        }
    }
    let mut unique = Vec::new();
    let mut paired = Vec::new();
    for f in &fibers {
        if f.preimages.len() == 1 {
            unique.push(f.preimages[0].clone());
        } else {
            paired.extend(f.preimages.iter().cloned());
        }
    }
    Ok((fibers, unique, paired))
}

fn constant_products(points: &[RVector], b: &RVector) -> bool {
    let mut first: Option<Rational> = None;
    for p in points {
        let v = p.dot(b);
        match &first {
            None => first = Some(v),
            Some(f) => {
                if *f != v {
                    return false;
                }
            }
        }
    }
    true
}

/// Partitions the paired elements: constant on the one level set goes to
/// `b_one` (ties included, which keeps the zero vector and the pivot out of
/// `b_zero`), constant on the zero level set only goes to `b_zero`, constant
/// on neither is a contract violation.
pub fn partition_paired(
    zero_level: &[RVector],
    one_level: &[RVector],
    paired: &[RVector],
) -> Result<(Vec<RVector>, Vec<RVector>)> {
    let mut b_zero = Vec::new();
    let mut b_one = Vec::new();
    for (j, b) in paired.iter().enumerate() {
        if constant_products(one_level, b) {
            b_one.push(b.clone());
        } else if constant_products(zero_level, b) {
            b_zero.push(b.clone());
        } else {
            return Err(Error::PartitionFailure { b_index: j });
        }
    }
    Ok((b_zero, b_one))
}

/// The exact counts a level's inequalities are made of.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerCounts {
    pub level_dim: usize,
    pub card_a: u64,
    pub card_b: u64,
    pub card_a_zero: u64,
    pub card_a_one: u64,
    /// Distinct projections of `B` along the pivot.
    pub card_projected: u64,
    /// Elements whose projection has a unique preimage.
    pub card_unique: u64,
    pub card_paired: u64,
    /// Distinct images after the second projection onto the zero-level span.
    pub card_reduced: u64,
    pub zero_span_dim: usize,
    pub card_b_zero: u64,
    pub card_b_one: u64,
}

/// Pass flags for one level. The first block is structural (verified from
/// the geometry); the second is the inequality chain, re-derivable from the
/// counts alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerChecks {
    pub sizes_ordered: bool,
    pub zero_level_binary: bool,
    pub no_opposite_projections: bool,
    pub origin_in_a: bool,
    pub fiber_bound: bool,
    pub partition_exists: bool,
    pub zero_pivot_excluded: bool,

    pub paired_doubling: bool,
    pub chain_step: bool,
    pub recursion_bound: bool,
    pub projection_ratio: bool,
    pub combined_step: bool,
    pub partition_step: bool,
    pub block_bound_zero: bool,
    pub block_bound_one: bool,
    pub top_dim_forces_empty: bool,
    pub level_bound: bool,
}

impl LedgerChecks {
    pub fn all_pass(&self) -> bool {
        self.sizes_ordered
            && self.zero_level_binary
            && self.no_opposite_projections
            && self.origin_in_a
            && self.fiber_bound
            && self.partition_exists
            && self.zero_pivot_excluded
            && self.paired_doubling
            && self.chain_step
            && self.recursion_bound
            && self.projection_ratio
            && self.combined_step
            && self.partition_step
            && self.block_bound_zero
            && self.block_bound_one
            && self.top_dim_forces_empty
            && self.level_bound
    }
}

/// The count-derived subset of [`LedgerChecks`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountChecks {
    pub paired_doubling: bool,
    pub chain_step: bool,
    pub recursion_bound: bool,
    pub projection_ratio: bool,
    pub combined_step: bool,
    pub partition_step: bool,
    pub block_bound_zero: bool,
    pub block_bound_one: bool,
    pub top_dim_forces_empty: bool,
    pub level_bound: bool,
}

/// Re-derives the count-based checks. Shared between the tracer and the
/// standalone certificate audit so both sides agree by construction on what
/// each inequality means.
pub fn derive_count_checks(c: &LedgerCounts) -> CountChecks {
    let d = c.level_dim;
    let k = c.zero_span_dim;
    let two_d = 1u64 << d;
    let product = c.card_a * c.card_b;
    CountChecks {
        paired_doubling: c.card_paired == 2 * (c.card_projected - c.card_unique),
        chain_step: product <= 2 * c.card_a_zero * c.card_projected + c.card_a_one * c.card_paired,
        recursion_bound: c.card_a_zero * c.card_reduced <= configuration_bound(k),
        projection_ratio: k < d && c.card_projected <= (1u64 << (d - 1 - k)) * c.card_reduced,
        combined_step: product <= (k as u64 + 1) * two_d + c.card_a_one * c.card_paired,
        partition_step: product
            <= (k as u64 + 1) * two_d
                + c.card_a_zero * c.card_b_zero
                + c.card_a_one * c.card_b_one,
        block_bound_zero: c.card_a_zero * c.card_b_zero <= two_d,
        block_bound_one: c.card_a_one * c.card_b_one <= two_d,
        top_dim_forces_empty: k + 1 < d || c.card_b_zero == 0,
        level_bound: product <= configuration_bound(d),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InequalityLedger {
    pub counts: LedgerCounts,
    pub checks: LedgerChecks,
    pub size_product: u64,
    pub bound: u64,
}

/// One level of the replayed induction with all derived objects.
#[derive(Clone, Debug)]
pub struct TraceNode {
    pub level_dim: usize,
    /// The configuration after normalization against the pivot.
    pub cfg: Configuration,
    pub pivot: RVector,
    pub log: TransformLog,
    pub signature: LevelSignature,
    pub a_zero: Vec<RVector>,
    pub a_one: Vec<RVector>,
    /// The hyperplane orthogonal to the pivot.
    pub hyperplane: RSubspace,
    pub fibers: Vec<Fiber>,
    pub b_unique: Vec<RVector>,
    pub b_paired: Vec<RVector>,
    pub b_zero: Vec<RVector>,
    pub b_one: Vec<RVector>,
    /// Span of the zero level set.
    pub zero_span: RSubspace,
    /// Distinct images of `B` under both projections.
    pub reduced_images: Vec<RVector>,
    pub ledger: InequalityLedger,
    pub child: Option<Box<TraceNode>>,
}

impl TraceNode {
    pub fn passed(&self) -> bool {
        self.ledger.checks.all_pass() && self.child.as_ref().is_none_or(|c| c.passed())
    }

    pub fn depth(&self) -> usize {
        1 + self.child.as_ref().map_or(0, |c| c.depth())
    }
}

/// Builds one induction level. Preconditions: the configuration is valid
/// (products, spanning, origin in `A`), and both sides are inclusion-maximal
/// unless waived.
pub fn build_node(cfg: &Configuration, opts: &BuildOptions) -> Result<TraceNode> {
    let d = cfg.dim();
    if d == 0 {
        return Err(Error::EmptyInput("cannot build a level in dimension zero"));
    }
    if d > MAX_TRACE_DIM {
        return Err(Error::ScaleExceeded { what: format!("trace in dimension {d}") });
    }
    let report = cfg.validate();
    if !report.is_valid() {
        let why = if let Some(v) = report.violations.first() {
            format!(
                "product {} at A[{}], B[{}]",
                v.product.to_frac_string(),
                v.a_index,
                v.b_index
            )
        } else {
            format!("spanning: A {}, B {}", report.a_spans, report.b_spans)
        };
        return Err(Error::BadInput(format!("configuration is not valid: {why}")));
    }
    if !cfg.a().iter().any(|a| a.is_zero()) {
        return Err(Error::BadInput("A must contain the origin".into()));
    }
    if !opts.waive_maximality {
        let gap = maximality_gap(cfg)?;
        if !gap.is_maximal() {
            let (side, list) = if gap.missing_b.is_empty() {
                ("A", &gap.missing_a)
            } else {
                ("B", &gap.missing_b)
            };
            return Err(Error::NotMaximal {
                side,
                missing: gap.missing_a.len() + gap.missing_b.len(),
                example: format!("{}", list[0]),
            });
        }
    }

    let pivot0 = match &opts.forced_pivot {
        Some(p) => {
            if p.is_zero() || !cfg.b().contains(p) {
                return Err(Error::PivotNotInB);
            }
            p.clone()
        }
        None => select_pivot(cfg)?,
    };

    let normalized = normalize(cfg, &pivot0)?;
    let ncfg = normalized.cfg;
    let pivot = normalized.pivot;

    let (a_zero, a_one) = split_levels(&ncfg, &pivot)?;
    let hyperplane = Subspace::new(d, RMatrix::from_rows(vec![pivot.clone()])?.nullspace())?;
    let (fibers, b_unique, b_paired) = fiber_partition(ncfg.b(), &pivot)?;
    let (b_zero, b_one) = partition_paired(&a_zero, &a_one, &b_paired)?;
    let zero_span = Subspace::from_spanning(d, &a_zero)?;

    let mut reduced_images: Vec<RVector> = Vec::new();
    for f in &fibers {
        let tau = exactlin::project_span(&f.image, &zero_span)?;
        if !reduced_images.contains(&tau) {
            reduced_images.push(tau);
        }
    }

    let counts = LedgerCounts {
        level_dim: d,
        card_a: ncfg.a().len() as u64,
        card_b: ncfg.b().len() as u64,
        card_a_zero: a_zero.len() as u64,
        card_a_one: a_one.len() as u64,
        card_projected: fibers.len() as u64,
        card_unique: b_unique.len() as u64,
        card_paired: b_paired.len() as u64,
        card_reduced: reduced_images.len() as u64,
        zero_span_dim: zero_span.dim(),
        card_b_zero: b_zero.len() as u64,
        card_b_one: b_one.len() as u64,
    };

    let zero_level_binary = a_zero.iter().all(|a| {
        ncfg.b().iter().all(|b| {
            let p = a.dot(b);
            p.is_zero() || p.is_one()
        })
    });
    let images: Vec<RVector> = fibers.iter().map(|f| f.image.clone()).collect();
    let cc = derive_count_checks(&counts);
    let checks = LedgerChecks {
        sizes_ordered: counts.card_a_zero >= counts.card_a_one,
        zero_level_binary,
        no_opposite_projections: has_opposite_points(&images).is_none(),
        origin_in_a: ncfg.a().iter().any(|a| a.is_zero()),
        fiber_bound: fibers.iter().all(|f| f.preimages.len() <= 2),
        partition_exists: true,
        zero_pivot_excluded: !b_zero.iter().any(|b| b.is_zero() || *b == pivot),
        paired_doubling: cc.paired_doubling,
        chain_step: cc.chain_step,
        recursion_bound: cc.recursion_bound,
        projection_ratio: cc.projection_ratio,
        combined_step: cc.combined_step,
        partition_step: cc.partition_step,
        block_bound_zero: cc.block_bound_zero,
        block_bound_one: cc.block_bound_one,
        top_dim_forces_empty: cc.top_dim_forces_empty,
        level_bound: cc.level_bound,
    };

    let ledger = InequalityLedger {
        size_product: counts.card_a * counts.card_b,
        bound: configuration_bound(d),
        counts,
        checks,
    };

    Ok(TraceNode {
        level_dim: d,
        cfg: ncfg,
        pivot,
        log: normalized.log,
        signature: normalized.signature,
        a_zero,
        a_one,
        hyperplane,
        fibers,
        b_unique,
        b_paired,
        b_zero,
        b_one,
        zero_span,
        reduced_images,
        ledger,
        child: None,
    })
}

/// Rewrites the zero level set and the projected `B` in coordinates of the
/// zero-level span and re-completes both sides. Pairings are preserved
/// exactly; the returned configuration is mutually maximal in dimension
/// `zero_span.dim()`.
pub fn reduce(node: &TraceNode) -> Result<Configuration> {
    let basis = node.zero_span.basis();
    let k = basis.len();
    let gram: Vec<RVector> = basis
        .iter()
        .map(|qi| RVector::new(basis.iter().map(|qj| qi.dot(qj)).collect()))
        .collect();

    let mut reduced_a: Vec<RVector> = Vec::new();
    for a in &node.a_zero {
        let alpha = if k == 0 {
            RVector::zeros(0)
        } else {
            let rhs: Vec<Rational> = basis.iter().map(|q| q.dot(a)).collect();
            exactlin::solve_pairing(&gram, &rhs)?
                .ok_or_else(|| Error::Internal("zero-level coordinates inconsistent".into()))?
                .solution
        };
        reduced_a.push(alpha);
    }

    let mut reduced_b: Vec<RVector> = Vec::new();
    for b in node.cfg.b() {
        let beta = RVector::new(basis.iter().map(|q| q.dot(b)).collect());
        if !reduced_b.contains(&beta) {
            reduced_b.push(beta);
        }
    }

    // pairing preservation, exactly
    for (a, alpha) in node.a_zero.iter().zip(&reduced_a) {
        for b in node.cfg.b() {
            let beta = RVector::new(basis.iter().map(|q| q.dot(b)).collect());
            if alpha.dot(&beta) != a.dot(b) {
                return Err(Error::Internal("reduction changed a pairing".into()));
            }
        }
    }
    if reduced_b.len() as u64 != node.ledger.counts.card_reduced {
        return Err(Error::Internal("reduced image count mismatch".into()));
    }

    if k == 0 {
        return Configuration::new(0, vec![RVector::zeros(0)], vec![RVector::zeros(0)]);
    }

    let mut seen = Vec::new();
    for alpha in &reduced_a {
        if seen.contains(alpha) {
            return Err(Error::Internal("reduced coordinates collided".into()));
        }
        seen.push(alpha.clone());
    }

    let b_full = config::complete_b(&reduced_a, true)?;
    let a_full = config::complete_a(&b_full, true)?;
    Configuration::new(k, a_full, b_full)
}

/// A full trace: the chain of levels down to dimension zero.
#[derive(Clone, Debug)]
pub struct Trace {
    pub d: usize,
    pub size_product: u64,
    pub bound: u64,
    pub root: Option<Box<TraceNode>>,
}

impl Trace {
    pub fn passed(&self) -> bool {
        self.size_product <= self.bound && self.root.as_ref().is_none_or(|n| n.passed())
    }

    pub fn certificate(&self) -> Certificate {
        let mut levels = Vec::new();
        let mut cur = self.root.as_deref();
        while let Some(node) = cur {
            levels.push(LevelRecord {
                level_dim: node.level_dim,
                pivot: node.pivot.clone(),
                counts: node.ledger.counts.clone(),
                checks: node.ledger.checks.clone(),
                size_product: node.ledger.size_product,
                bound: node.ledger.bound,
            });
            cur = node.child.as_deref();
        }
        Certificate {
            d: self.d,
            size_product: self.size_product,
            bound: self.bound,
            verdict: self.passed(),
            levels,
        }
    }
}

/// Runs the full induction replay. The options apply to the top level only;
/// deeper levels are constructed maximal and pick their own pivots.
pub fn trace(cfg: &Configuration, opts: &BuildOptions) -> Result<Trace> {
    let d = cfg.dim();
    let size_product = cfg.size_product();
    let bound = configuration_bound(d);
    if d == 0 {
        let report = cfg.validate();
        if !report.is_valid() {
            return Err(Error::BadInput("dimension-zero configuration invalid".into()));
        }
        return Ok(Trace { d, size_product, bound, root: None });
    }
    let root = trace_levels(cfg, opts)?;
    Ok(Trace { d, size_product, bound, root: Some(Box::new(root)) })
}

fn trace_levels(cfg: &Configuration, opts: &BuildOptions) -> Result<TraceNode> {
    let mut node = build_node(cfg, opts)?;
    if node.zero_span.dim() > 0 {
        let child_cfg = reduce(&node)?;
        let child_opts = BuildOptions { forced_pivot: None, waive_maximality: true };
        let child = trace_levels(&child_cfg, &child_opts)?;
        node.child = Some(Box::new(child));
    }
    Ok(node)
}

/// One level of a serialized certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level_dim: usize,
    pub pivot: RVector,
    pub counts: LedgerCounts,
    pub checks: LedgerChecks,
    pub size_product: u64,
    pub bound: u64,
}

/// The serialized outcome of a trace: per-level counts and pass flags plus
/// the top-level bound comparison.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub d: usize,
    pub size_product: u64,
    pub bound: u64,
    pub verdict: bool,
    pub levels: Vec<LevelRecord>,
}

/// Result of an independent re-audit of a certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditReport {
    /// Mismatches between recorded flags and flags re-derived from counts.
    pub mismatches: Vec<String>,
    /// The verdict the auditor computes from the record.
    pub recomputed_verdict: bool,
    /// Whether the recorded verdict agrees with the recomputed one.
    pub verdict_agrees: bool,
}

/// Re-derives every count-based inequality of a certificate and checks the
/// structural consistency of the level chain, without re-running geometry.
pub fn audit_certificate(cert: &Certificate) -> AuditReport {
    let mut mismatches = Vec::new();
    let mut all_pass = true;

    for (i, lv) in cert.levels.iter().enumerate() {
        let c = &lv.counts;
        if c.level_dim != lv.level_dim {
            mismatches.push(format!("level {i}: dimension disagrees with counts"));
        }
        if c.card_a_zero + c.card_a_one != c.card_a {
            mismatches.push(format!("level {i}: level sets do not partition A"));
        }
        if c.card_unique + c.card_paired != c.card_b {
            mismatches.push(format!("level {i}: unique and paired do not partition B"));
        }
        if c.card_b_zero + c.card_b_one != c.card_paired {
            mismatches
                .push(format!("level {i}: constancy classes do not partition the paired set"));
        }
        if lv.size_product != c.card_a * c.card_b {
            mismatches.push(format!("level {i}: recorded product disagrees with counts"));
        }
        if lv.bound != configuration_bound(c.level_dim) {
            mismatches.push(format!("level {i}: recorded bound disagrees with dimension"));
        }
        if c.zero_span_dim >= c.level_dim {
            mismatches.push(format!("level {i}: zero-level span not inside the pivot hyperplane"));
        }
        let cc = derive_count_checks(c);
        let pairs = [
            ("paired_doubling", cc.paired_doubling, lv.checks.paired_doubling),
            ("chain_step", cc.chain_step, lv.checks.chain_step),
            ("recursion_bound", cc.recursion_bound, lv.checks.recursion_bound),
            ("projection_ratio", cc.projection_ratio, lv.checks.projection_ratio),
            ("combined_step", cc.combined_step, lv.checks.combined_step),
            ("partition_step", cc.partition_step, lv.checks.partition_step),
            ("block_bound_zero", cc.block_bound_zero, lv.checks.block_bound_zero),
            ("block_bound_one", cc.block_bound_one, lv.checks.block_bound_one),
            ("top_dim_forces_empty", cc.top_dim_forces_empty, lv.checks.top_dim_forces_empty),
            ("level_bound", cc.level_bound, lv.checks.level_bound),
        ];
        for (name, derived, recorded) in pairs {
            if derived != recorded {
                mismatches
                    .push(format!("level {i}: {name} recorded {recorded}, derived {derived}"));
            }
            if !derived {
                all_pass = false;
            }
        }
        if !lv.checks.all_pass() {
            all_pass = false;
        }
        if i + 1 < cert.levels.len() {
            let child = &cert.levels[i + 1].counts;
            if child.level_dim != c.zero_span_dim {
                mismatches
                    .push(format!("level {i}: child dimension is not the zero-span dimension"));
            }
            if child.card_a < c.card_a_zero || child.card_b < c.card_reduced {
                mismatches.push(format!("level {i}: child lost points despite completion"));
            }
        }
    }
    if let Some(first) = cert.levels.first() {
        if first.level_dim != cert.d {
            mismatches.push("top level dimension disagrees with certificate".into());
        }
        if first.size_product != cert.size_product {
            mismatches.push("top level product disagrees with certificate".into());
        }
    }
    if let Some(last) = cert.levels.last() {
        if last.counts.zero_span_dim != 0 {
            mismatches.push("chain does not descend to dimension zero".into());
        }
    }
    if cert.bound != configuration_bound(cert.d) {
        mismatches.push("certificate bound disagrees with dimension".into());
    }
    if cert.size_product > cert.bound {
        all_pass = false;
    }
    if cert.levels.is_empty() && cert.d > 0 {
        mismatches.push("missing levels for a positive-dimension certificate".into());
    }

    let recomputed_verdict = all_pass && mismatches.is_empty();
    AuditReport {
        verdict_agrees: recomputed_verdict == cert.verdict,
        recomputed_verdict,
        mismatches,
    }
}

/// All intermediate objects of the witness construction on one degenerate
/// fiber, plus its outputs: the extension candidate and, when a second fiber
/// point exists, the direction orthogonal to the whole zero level set.
#[derive(Clone, Debug)]
pub struct WitnessContext {
    /// The fiber image the degenerate branch fired on.
    pub fiber_image: RVector,
    /// Orthogonal complement of the zero-level span inside the pivot
    /// hyperplane.
    pub complement: RSubspace,
    /// Span of the fiber image and the complement.
    pub fiber_span: RSubspace,
    /// The unique zero-level point whose shadow misses the one-level
    /// shadow's hyperplane.
    pub apex: RVector,
    /// Normal of the one-level shadow inside the fiber span, scaled so the
    /// apex shadow pairs to one.
    pub normal: RVector,
    pub shift_one: Rational,
    /// The extension candidate: pairs into `{0,1}` with the zero level set
    /// and to zero with the one level set.
    pub extension: RVector,
    pub second_image: Option<RVector>,
    pub chosen_image: Option<RVector>,
    pub level: Option<Rational>,
    pub shift_two: Option<Rational>,
    /// Orthogonal to the whole zero level set when produced.
    pub orthogonal: Option<RVector>,
}

/// Scans the fibers for the degenerate branch: a fiber image whose one-level
/// shadow fails to span the fiber span. When one fires, the construction
/// yields an extension candidate (and an orthogonal companion when a second
/// fiber point exists); it is returned if it is genuinely new, meaning no
/// nonzero rational multiple of it already sits in `B`. On maximal inputs
/// every candidate is already present and the scan returns `None`.
pub fn construct_witnesses(node: &TraceNode) -> Result<Option<WitnessContext>> {
    for w in witness_candidates(node)? {
        let already_present =
            node.cfg.b().iter().any(|b| b.parallel_factor(&w.extension).is_some());
        if !already_present {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// All degenerate-fiber constructions, whether or not their extension is
/// already present in `B`. [`construct_witnesses`] keeps the first new one.
pub fn witness_candidates(node: &TraceNode) -> Result<Vec<WitnessContext>> {
    let mut out = Vec::new();
    let complement = node.zero_span.complement_within(&node.hyperplane)?;
    let anchor = &node.log.a1_anchor;
    let anchored: Vec<RVector> = node.a_one.iter().map(|a| a.sub(anchor)).collect();
    let d = node.level_dim;

    for fiber in &node.fibers {
        let v = &fiber.image;
        let mut span_vectors = vec![v.clone()];
        span_vectors.extend(complement.basis().iter().cloned());
        let fiber_span = Subspace::from_spanning(d, &span_vectors)?;

        let shadow: Vec<RVector> = anchored
            .iter()
            .map(|a| exactlin::project_span(a, &fiber_span))
            .collect::<Result<_>>()?;
        let shadow_rank =
            if shadow.is_empty() { 0 } else { RMatrix::from_rows(shadow.clone())?.rank() };
        if shadow_rank == fiber_span.dim() {
            continue; // the shadow spans: nothing degenerate here
        }

        // In the degenerate branch the zero-level shadow collapses to a
        // single nonzero point.
        let mut apex: Option<(RVector, RVector)> = None;
        for a in &node.a_zero {
            let s = exactlin::project_span(a, &fiber_span)?;
            if s.is_zero() {
                continue;
            }
            match &apex {
                None => apex = Some((a.clone(), s)),
                Some((_, existing)) => {
                    if *existing != s {
                        return Err(Error::Internal(
                            "zero-level shadow is not a single point in the degenerate branch"
                                .into(),
                        ));
                    }
                }
            }
        }
        let Some((apex, apex_shadow)) = apex else {
            return Err(Error::Internal(
                "degenerate branch with a fully collapsed zero-level shadow".into(),
            ));
        };

        let shadow_span = Subspace::from_spanning(d, &shadow)?;
        let normal_space = shadow_span.complement_within(&fiber_span)?;
        if normal_space.dim() != 1 {
            return Err(Error::Internal(format!(
                "one-level shadow has corank {} in the fiber span",
                normal_space.dim()
            )));
        }
        let scale = apex_shadow.dot(&normal_space.basis()[0]);
        if scale.is_zero() {
            return Err(Error::Internal("apex shadow lies on its own hyperplane".into()));
        }
        let normal = normal_space.basis()[0].scale(&(Rational::one() / scale));

        let shift_one = anchor.dot(&normal);
        let extension = normal.sub(&node.pivot.scale(&shift_one));
        if extension.is_zero() {
            return Err(Error::Internal("extension candidate vanished".into()));
        }
        for a in &node.a_zero {
            let p = a.dot(&extension);
            if !(p.is_zero() || p.is_one()) {
                return Err(Error::Internal(
                    "extension candidate pairs outside {0,1} on the zero level set".into(),
                ));
            }
        }
        for a in &node.a_one {
            if !a.dot(&extension).is_zero() {
                return Err(Error::Internal(
                    "extension candidate does not vanish on the one level set".into(),
                ));
            }
        }

        // Optional companion from a second fiber image in v + W.
        let second = node
            .fibers
            .iter()
            .map(|f| &f.image)
            .find(|img| *img != v && complement.contains(&img.sub(v)));
        let (mut level, mut shift_two, mut orthogonal, mut chosen_image) = (None, None, None, None);
        if let Some(v2) = second {
            let xi = apex_shadow.dot(v);
            debug_assert_eq!(xi, apex_shadow.dot(v2));
            let xc = normal.scale(&xi);
            let chosen = if *v != xc { v.clone() } else { v2.clone() };
            if chosen == xc {
                return Err(Error::Internal("both fiber points equal the scaled normal".into()));
            }
            let dir = chosen.sub(&xc);
            let d2 = anchor.dot(&dir);
            let b2 = dir.sub(&node.pivot.scale(&d2));
            if b2.is_zero() {
                return Err(Error::Internal("orthogonal companion vanished".into()));
            }
            if node.a_zero.iter().any(|a| !a.dot(&b2).is_zero()) {
                return Err(Error::Internal(
                    "companion not orthogonal to the zero level set".into(),
                ));
            }
            let mut sign: Option<bool> = None;
            for a in &anchored {
                let p = a.dot(&b2);
                if p.is_zero() {
                    continue;
                }
                if !(p.is_one() || (-p.clone()).is_one()) {
                    return Err(Error::Internal(
                        "companion pairs outside {0,+/-1} on the anchored one level set".into(),
                    ));
                }
                let s = p.is_positive();
                if *sign.get_or_insert(s) != s {
                    return Err(Error::Internal(
                        "companion products mix signs on the anchored one level set".into(),
                    ));
                }
            }
            level = Some(xi);
            shift_two = Some(d2);
            orthogonal = Some(b2);
            chosen_image = Some(chosen);
        }

        out.push(WitnessContext {
            fiber_image: v.clone(),
            complement: complement.clone(),
            fiber_span,
            apex,
            normal,
            shift_one,
            extension,
            second_image: second.cloned(),
            chosen_image,
            level,
            shift_two,
            orthogonal,
        });
    }
    Ok(out)
}

//! Independent brute-force verifiers.
//!
//! These run the bounds from the other direction: exhaustive or seeded-random
//! search over small instances, with no shared logic beyond the exact linear
//! algebra kernel. The extremal search enumerates spanning subsets of the
//! 0/1 cube (every spanning configuration is equivalent to one in that
//! canonical form by a pairing-preserving change of basis) and completes the
//! other side; the slice oracle exhausts opposite-point-free subsets of
//! `{0,1}^d ∪ {0,-1}^d`; the graph and set-family verifiers count directly.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{self, configuration_bound, Configuration};
use crate::error::{Error, Result};
use crate::exactlin::{self, Scalar, Vector};
use crate::graph::Graph;
use crate::{RMatrix, RVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Random,
}

/// Outcome of the extremal product search in one dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchReport {
    pub d: usize,
    pub mode: SearchMode,
    pub seed: Option<u64>,
    pub instances_checked: u64,
    pub max_product: u64,
    pub bound: u64,
    /// Instances whose product exceeds the bound; must stay zero.
    pub violations: u64,
    pub equality_count: u64,
    pub argmax: Option<Configuration>,
    pub note: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn mask_subset(points: &[RVector], mask: u64) -> Vec<RVector> {
    points
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, p)| p.clone())
        .collect()
}

fn spans(points: &[RVector], d: usize) -> bool {
    points.len() >= d && RMatrix::from_rows(points.to_vec()).map(|m| m.rank()).unwrap_or(0) == d
}

struct SearchAcc {
    checked: u64,
    max_product: u64,
    best_mask: u64,
    equality_count: u64,
    violations: u64,
}

impl SearchAcc {
    fn empty() -> Self {
        SearchAcc {
            checked: 0,
            max_product: 0,
            best_mask: u64::MAX,
            equality_count: 0,
            violations: 0,
        }
    }

    fn merge(mut self, other: SearchAcc) -> Self {
        self.checked += other.checked;
        self.equality_count += other.equality_count;
        self.violations += other.violations;
        if other.max_product > self.max_product
            || (other.max_product == self.max_product && other.best_mask < self.best_mask)
        {
            self.max_product = other.max_product;
            self.best_mask = other.best_mask;
        }
        self
    }
}

/// Maximal `|A| * |B|` over spanning `A` inside the 0/1 cube, with `B` the
/// maximal completion. Exhaustive mode walks every cube subset (`d <= 3`, or
/// `d = 4` behind `long_running`); random mode samples seeded subsets.
pub fn search_extremal(
    d: usize,
    mode: SearchMode,
    budget: u64,
    seed: u64,
    long_running: bool,
) -> Result<SearchReport> {
    let start = Instant::now();
    if d == 0 || d > 6 {
        return Err(Error::ScaleExceeded { what: format!("extremal search in dimension {d}") });
    }
    let cube = config::cube_points(d);
    let npoints = cube.len();
    let bound = configuration_bound(d);

    let masks: Vec<u64> = match mode {
        SearchMode::Exhaustive => {
            if d > 4 || (d == 4 && !long_running) {
                return Err(Error::ScaleExceeded {
                    what: format!("exhaustive search at d={d} (3 is the default cap)"),
                });
            }
            (0u64..(1u64 << npoints)).collect()
        }
        SearchMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let full = if npoints == 64 { u64::MAX } else { (1u64 << npoints) - 1 };
            (0..budget).map(|_| rng.gen::<u64>() & full).collect()
        }
    };

    let eval = |acc: SearchAcc, &mask: &u64| -> SearchAcc {
        let a = mask_subset(&cube, mask);
        if !spans(&a, d) {
            return acc;
        }
        let b = match config::complete_b(&a, true) {
            Ok(b) => b,
            Err(_) => return acc,
        };
        let product = a.len() as u64 * b.len() as u64;
        let single = SearchAcc {
            checked: 1,
            max_product: product,
            best_mask: mask,
            equality_count: (product == bound) as u64,
            violations: (product > bound) as u64,
        };
        acc.merge(single)
    };

    let acc = masks
        .par_chunks(1024)
        .map(|chunk| chunk.iter().fold(SearchAcc::empty(), eval))
        .reduce(SearchAcc::empty, SearchAcc::merge);

    let argmax = if acc.best_mask != u64::MAX {
        let a = mask_subset(&cube, acc.best_mask);
        let b = config::complete_b(&a, true)?;
        Some(Configuration::new(d, a, b)?)
    } else {
        None
    };

    Ok(SearchReport {
        d,
        mode,
        seed: matches!(mode, SearchMode::Random).then_some(seed),
        instances_checked: acc.checked,
        max_product: acc.max_product,
        bound,
        violations: acc.violations,
        equality_count: acc.equality_count,
        argmax,
        note: "search space restricted to A inside the 0/1 cube; every spanning \
               configuration is equivalent to one of this form under a \
               pairing-preserving change of basis"
            .into(),
        elapsed: start.elapsed(),
    })
}

type SliceScalar = Ratio<i128>;

/// A counterexample candidate for the slice bound (none should ever exist).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SliceViolation {
    pub points: Vec<Vec<i8>>,
    pub size: u64,
    pub affine_dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SliceReport {
    pub d: usize,
    pub mode: SearchMode,
    pub seed: Option<u64>,
    pub instances_checked: u64,
    pub violations: Vec<SliceViolation>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SliceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn slice_instance_ok(points: &[Vec<i8>]) -> std::result::Result<(), SliceViolation> {
    let vecs: Vec<Vector<SliceScalar>> = points
        .iter()
        .map(|p| Vector::new(p.iter().map(|&c| SliceScalar::from_i64(c as i64)).collect()))
        .collect();
    let dim = exactlin::affine_dim(&vecs).expect("nonempty instance");
    if (points.len() as u64) <= (1u64 << dim) {
        Ok(())
    } else {
        Err(SliceViolation { points: points.to_vec(), size: points.len() as u64, affine_dim: dim })
    }
}

/// Checks `|X| <= 2^{affine dim X}` for opposite-point-free
/// `X ⊆ {0,1}^d ∪ {0,-1}^d`. Exhaustive mode enumerates every admissible
/// `X` by choosing, per antipodal pair, the positive point, the negative
/// point, or neither (`d <= 3` by default, `d = 4` behind `long_running`);
/// random mode samples those choices from a seeded generator.
pub fn verify_lemma_slice(
    d: usize,
    mode: SearchMode,
    samples: u64,
    seed: u64,
    long_running: bool,
) -> Result<SliceReport> {
    let start = Instant::now();
    if d == 0 || d > 8 {
        return Err(Error::ScaleExceeded { what: format!("slice oracle in dimension {d}") });
    }
    // antipodal pair representatives: the nonzero 0/1 points
    let reps: Vec<Vec<i8>> = (1u32..(1u32 << d))
        .map(|mask| (0..d).map(|i| (mask >> i & 1) as i8).collect())
        .collect();
    let npairs = reps.len();

    let build = |choices: &[u8], with_zero: bool| -> Vec<Vec<i8>> {
        let mut pts: Vec<Vec<i8>> = Vec::new();
        if with_zero {
            pts.push(vec![0; d]);
        }
        for (rep, &c) in reps.iter().zip(choices) {
            match c {
                1 => pts.push(rep.clone()),
                2 => pts.push(rep.iter().map(|&x| -x).collect()),
                _ => {}
            }
        }
        pts
    };

    let mut violations: Vec<SliceViolation> = Vec::new();
    let checked;

    match mode {
        SearchMode::Exhaustive => {
            if d > 4 || (d == 4 && !long_running) {
                return Err(Error::ScaleExceeded {
                    what: format!("exhaustive slice oracle at d={d} (3 is the default cap)"),
                });
            }
            let total = 3u64.pow(npairs as u32) * 2;
            let results: Vec<Option<SliceViolation>> = (0..total)
                .into_par_iter()
                .map(|code| {
                    let with_zero = code % 2 == 1;
                    let mut rest = code / 2;
                    let mut choices = vec![0u8; npairs];
                    for c in choices.iter_mut() {
                        *c = (rest % 3) as u8;
                        rest /= 3;
                    }
                    let pts = build(&choices, with_zero);
                    if pts.is_empty() {
                        return None;
                    }
                    slice_instance_ok(&pts).err()
                })
                .collect();
            checked = total - 1; // the all-skip, no-zero code is empty
            violations.extend(results.into_iter().flatten());
        }
        SearchMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let instances: Vec<(Vec<u8>, bool)> = (0..samples)
                .map(|_| {
                    let choices: Vec<u8> = (0..npairs).map(|_| rng.gen_range(0u8..3)).collect();
                    (choices, rng.gen_bool(0.5))
                })
                .collect();
            let results: Vec<Option<SliceViolation>> = instances
                .par_iter()
                .map(|(choices, with_zero)| {
                    let pts = build(choices, *with_zero);
                    if pts.is_empty() {
                        return None;
                    }
                    slice_instance_ok(&pts).err()
                })
                .collect();
            checked =
                instances.iter().filter(|(c, z)| *z || c.iter().any(|&x| x != 0)).count() as u64;
            violations.extend(results.into_iter().flatten());
        }
    }

    Ok(SliceReport {
        d,
        mode,
        seed: matches!(mode, SearchMode::Random).then_some(seed),
        instances_checked: checked,
        violations,
        elapsed: start.elapsed(),
    })
}

/// Outcome of the signed-products slice check on an explicit pair `(A, B)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlicebReport {
    pub d: usize,
    pub card_b: u64,
    pub affine_dim_b: usize,
    pub bound: u64,
    pub size_ok: bool,
    /// The images of `B` under the basis map land in `{0,1}^d ∪ {0,-1}^d`.
    pub mapped_in_slice: bool,
    pub precondition_errors: Vec<String>,
}

impl SlicebReport {
    pub fn passed(&self) -> bool {
        self.precondition_errors.is_empty() && self.size_ok && self.mapped_in_slice
    }
}

/// Verifies `|B| <= 2^{affine dim B}` for a spanning `A`, opposite-free `B`,
/// and per-element signed products, and exercises the constructive route: a
/// basis of `A` maps `B` into `{0,1}^d ∪ {0,-1}^d`.
pub fn verify_lemma_sliceb(a: &[RVector], b: &[RVector]) -> Result<SlicebReport> {
    let first = a.first().ok_or(Error::EmptyInput("sliceb needs a nonempty A"))?;
    let d = first.dim();
    if b.is_empty() {
        return Err(Error::EmptyInput("sliceb needs a nonempty B"));
    }

    let mut errors: Vec<String> = Vec::new();
    if !spans(a, d) {
        errors.push("A does not span the ambient space".into());
    }
    if let Some((x, _)) = config::has_opposite_points(b) {
        errors.push(format!("B contains opposite points {x}"));
    }
    for (j, bv) in b.iter().enumerate() {
        let mut sign = 0i8;
        for av in a {
            let p = av.dot(bv);
            if p.is_zero() {
                continue;
            }
            if !(p.is_one() || (-p.clone()).is_one()) {
                errors
                    .push(format!("B[{j}] has product {} outside {{0,+1,-1}}", p.to_frac_string()));
                break;
            }
            let s = if p.is_positive() { 1 } else { -1 };
            if sign == 0 {
                sign = s;
            } else if sign != s {
                errors.push(format!("B[{j}] mixes signs across A"));
                break;
            }
        }
    }

    let affine_dim_b = exactlin::affine_dim(b)?;
    let bound = 1u64 << affine_dim_b;
    let size_ok = (b.len() as u64) <= bound;

    // constructive route: basis rows of A map B into the signed cube slice
    let basis = exactlin::Subspace::from_spanning(d, a)?;
    let mapped_in_slice = if basis.dim() == d {
        let m = RMatrix::from_rows(basis.basis().to_vec())?;
        b.iter().all(|bv| {
            let img = m.apply(bv);
            let mut sign = 0i8;
            img.coords().iter().all(|c| {
                if c.is_zero() {
                    return true;
                }
                if !(c.is_one() || (-c.clone()).is_one()) {
                    return false;
                }
                let s = if c.is_positive() { 1 } else { -1 };
                if sign == 0 {
                    sign = s;
                    true
                } else {
                    sign == s
                }
            })
        })
    } else {
        false
    };

    Ok(SlicebReport {
        d,
        card_b: b.len() as u64,
        affine_dim_b,
        bound,
        size_ok,
        mapped_in_slice,
        precondition_errors: errors,
    })
}

/// Stable-set and clique counts of one graph against `(n+1) 2^n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphReport {
    pub n: usize,
    pub stable_sets: u64,
    pub cliques: u64,
    pub product: u64,
    pub bound: u64,
    pub equality: bool,
}

impl GraphReport {
    pub fn passed(&self) -> bool {
        self.product <= self.bound
    }
}

pub fn graph_bound(g: &Graph) -> GraphReport {
    let n = g.node_count();
    let stable_sets = g.count_stable_sets();
    let cliques = g.count_cliques();
    let product = stable_sets * cliques;
    let bound = (n as u64 + 1) * (1u64 << n);
    GraphReport { n, stable_sets, cliques, product, bound, equality: product == bound }
}

/// Exhaustive check over every labeled graph on `n` nodes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFamilyReport {
    pub n: usize,
    pub graphs_checked: u64,
    pub violations: u64,
    /// Edge-set codes of the graphs attaining equality.
    pub equality_codes: Vec<u64>,
    pub equality_exactly_empty_and_complete: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl GraphFamilyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.equality_exactly_empty_and_complete
    }
}

pub fn graph_bound_all(n: usize) -> Result<GraphFamilyReport> {
    let start = Instant::now();
    if n == 0 || n > 6 {
        return Err(Error::ScaleExceeded { what: format!("all graphs on {n} nodes") });
    }
    let ncodes = 1u64 << (n * (n - 1) / 2);
    let mut violations = 0;
    let mut equality_codes = Vec::new();
    for code in 0..ncodes {
        let g = Graph::from_code(n, code);
        let r = graph_bound(&g);
        if !r.passed() {
            violations += 1;
        }
        if r.equality {
            equality_codes.push(code);
        }
    }
    let complete_code = ncodes - 1;
    let equality_exactly_empty_and_complete =
        equality_codes == vec![0, complete_code] || (n == 1 && equality_codes == vec![0]);
    Ok(GraphFamilyReport {
        n,
        graphs_checked: ncodes,
        violations,
        equality_codes,
        equality_exactly_empty_and_complete,
        elapsed: start.elapsed(),
    })
}

/// A set family instance: subsets of `{0, ..., ground_size-1}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFamilyInstance {
    pub ground_size: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<usize>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetFamilyCross {
    pub config_valid: bool,
    pub products_agree: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetFamilyReport {
    pub ground_size: usize,
    pub card_a: u64,
    pub card_b: u64,
    pub product: u64,
    pub bound: u64,
    pub within_bound: bool,
    pub equality: bool,
    /// Present when both characteristic-vector families span.
    pub cross_validation: Option<SetFamilyCross>,
}

impl SetFamilyReport {
    pub fn passed(&self) -> bool {
        self.within_bound && self.cross_validation.as_ref().is_none_or(|c| c.config_valid)
    }
}

fn family_masks(ground: usize, fam: &[Vec<usize>], side: &str) -> Result<Vec<u64>> {
    let mut masks = Vec::new();
    for (i, set) in fam.iter().enumerate() {
        let mut mask = 0u64;
        for &e in set {
            if e >= ground {
                return Err(Error::BadInput(format!("{side}[{i}] has element {e} out of range")));
            }
            mask |= 1 << e;
        }
        if masks.contains(&mask) {
            return Err(Error::BadInput(format!("{side}[{i}] duplicates an earlier set")));
        }
        masks.push(mask);
    }
    Ok(masks)
}

/// Checks `|A| * |B| <= (|V|+1) 2^{|V|}` for families with pairwise
/// intersections of size at most one. An intersection of two or more
/// elements violates the precondition and is an input error naming the pair.
pub fn verify_set_family(instance: &SetFamilyInstance) -> Result<SetFamilyReport> {
    let n = instance.ground_size;
    if n > 20 {
        return Err(Error::ScaleExceeded { what: format!("ground set of size {n}") });
    }
    let a_masks = family_masks(n, &instance.a, "A")?;
    let b_masks = family_masks(n, &instance.b, "B")?;
    for (i, am) in a_masks.iter().enumerate() {
        for (j, bm) in b_masks.iter().enumerate() {
            let inter = (am & bm).count_ones();
            if inter >= 2 {
                return Err(Error::BadInput(format!("|A[{i}] ∩ B[{j}]| = {inter} exceeds 1")));
            }
        }
    }
    let product = a_masks.len() as u64 * b_masks.len() as u64;
    let bound = (n as u64 + 1) * (1u64 << n);

    let chi = |mask: u64| -> RVector {
        RVector::new(
            (0..n)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        crate::Rational::one()
                    } else {
                        crate::Rational::zero()
                    }
                })
                .collect(),
        )
    };
    let a_vecs: Vec<RVector> = a_masks.iter().map(|&m| chi(m)).collect();
    let b_vecs: Vec<RVector> = b_masks.iter().map(|&m| chi(m)).collect();
    let cross_validation = if n > 0 && spans(&a_vecs, n) && spans(&b_vecs, n) {
        let cfg = Configuration::new(n, a_vecs, b_vecs)?;
        let report = cfg.validate();
        Some(SetFamilyCross {
            config_valid: report.is_valid(),
            products_agree: cfg.size_product() == product,
        })
    } else {
        None
    };

    Ok(SetFamilyReport {
        ground_size: n,
        card_a: a_masks.len() as u64,
        card_b: b_masks.len() as u64,
        product,
        bound,
        within_bound: product <= bound,
        equality: product == bound,
        cross_validation,
    })
}

/// A random spanning subset of the 0/1 cube (resampled until it spans).
pub fn random_spanning_cube_subset(d: usize, rng: &mut ChaCha8Rng) -> Vec<RVector> {
    let cube = config::cube_points(d);
    loop {
        let subset: Vec<RVector> = cube.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if spans(&subset, d) {
            return subset;
        }
    }
}

/// A random mutually maximal configuration: spanning cube subset, `B` by
/// completion, then `A` re-completed against it.
pub fn random_maximal_config(d: usize, rng: &mut ChaCha8Rng) -> Result<Configuration> {
    let a = random_spanning_cube_subset(d, rng);
    let b = config::complete_b(&a, true)?;
    let a = config::complete_a(&b, true)?;
    Configuration::new(d, a, b)
}

//! Classification of pairs of boundary lattice points of a reflexive polytope
//! and the partial addition `p(x, y) = ⟨η_x, y⟩·x + y` on roots.
//!
//! For boundary points `x, y` exactly one holds: they share a facet, `x + y = 0`,
//! or `x + y` is again a boundary point. In the last case there is exactly one
//! `z = a·x + b·y` (`a, b ≥ 1`) on the boundary sharing a facet with `x` and a
//! facet with `y`; then `a = 1` or `b = 1`, and `a = ⟨η_x, y⟩ + 1` when `x` is
//! a root. Every statement is checked here by exhaustive search.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, IntVector, LinalgError};
use crate::polytope::PolytopeError;
use crate::skeleton::{RootSet, Skeleton, SkeletonError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("{0:?} is not a boundary lattice point")]
    NotBoundaryPoint(IntVector),
    #[error("{0:?} is not a root")]
    NotARoot(IntVector),
    #[error("{y:?} lies on the facet of the root {x:?}")]
    OnRootFacet { x: IntVector, y: IntVector },
    #[error("pairing <eta_x, y> = {0} is not positive")]
    NonPositivePairing(i64),
    #[error("{y:?} is the negative of {x:?}")]
    Antipodal { x: IntVector, y: IntVector },
    #[error("expected exactly one z-witness for {x:?}, {y:?}; found {found}")]
    WitnessCount { x: IntVector, y: IntVector, found: usize },
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Arithmetic(#[from] LinalgError),
}

pub type Result<T, E = LemmaError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum PairClass {
    CommonFacet { facet_index: usize },
    Antipodal,
    ZWitness { a: i64, b: i64, z: IntVector },
}

/// Result of scanning `a·x + b·y` for `1 ≤ a ≤ bound_a`, `1 ≤ b ≤ bound_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessScan {
    pub bound_a: i64,
    pub bound_b: i64,
    /// Every boundary point of the form `a·x + b·y`.
    pub boundary_hits: Vec<(i64, i64, IntVector)>,
    /// Those hits sharing a facet with `x` and a facet with `y`.
    pub witnesses: Vec<(i64, i64, IntVector)>,
}

/// Reflexive polytope prepared for pair queries.
#[derive(Debug, Clone)]
pub struct PairContext {
    skeleton: Skeleton,
    boundary: Vec<IntVector>,
    roots: RootSet,
    radius: i64,
}

impl PairContext {
    pub fn new(skeleton: Skeleton) -> Self {
        let boundary = skeleton.boundary_points();
        let roots = skeleton.roots();
        let radius = skeleton.polytope().vertices().iter().flat_map(|v| v.iter().map(|c| c.abs())).max().unwrap_or(0);
        PairContext { skeleton, boundary, roots, radius }
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn boundary(&self) -> &[IntVector] {
        &self.boundary
    }

    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    fn is_boundary(&self, p: &[i64]) -> bool {
        self.boundary.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }

    fn require_boundary(&self, p: &[i64]) -> Result<()> {
        if self.is_boundary(p) {
            Ok(())
        } else {
            Err(LemmaError::NotBoundaryPoint(p.to_vec()))
        }
    }

    /// Coefficient bounds for `a·x + b·y ∈ P`: with a nonzero 2×2 minor `D`
    /// of `(x, y)` in coordinates `i, j`, Cramer's rule and `|z_k| ≤ R` give
    /// `a ≤ R(|y_i| + |y_j|)/|D|` and `b ≤ R(|x_i| + |x_j|)/|D|`.
    pub fn coefficient_bounds(&self, x: &[i64], y: &[i64]) -> Option<(i64, i64)> {
        let n = x.len();
        let r = self.radius;
        let mut best: Option<(i64, i64)> = None;
        for i in 0..n {
            for j in i + 1..n {
                let d = (x[i] * y[j] - x[j] * y[i]).abs();
                if d == 0 {
                    continue;
                }
                let ba = r * (y[i].abs() + y[j].abs()) / d;
                let bb = r * (x[i].abs() + x[j].abs()) / d;
                best = Some(match best {
                    None => (ba, bb),
                    Some((a, b)) => (a.min(ba), b.min(bb)),
                });
            }
        }
        best
    }

    pub fn scan_witnesses(&self, x: &[i64], y: &[i64]) -> Result<WitnessScan> {
        let p = self.skeleton.polytope();
        let (bound_a, bound_b) = self.coefficient_bounds(x, y).unwrap_or((0, 0));
        let mut boundary_hits = Vec::new();
        let mut witnesses = Vec::new();
        for a in 1..=bound_a {
            for b in 1..=bound_b {
                let z = linalg::lin_comb(a, x, b, y)?;
                if !p.on_boundary(&z)? {
                    continue;
                }
                if p.common_facet(x, &z)?.is_some() && p.common_facet(y, &z)?.is_some() {
                    witnesses.push((a, b, z.clone()));
                }
                boundary_hits.push((a, b, z));
            }
        }
        Ok(WitnessScan { bound_a, bound_b, boundary_hits, witnesses })
    }

    pub fn classify_pair(&self, x: &[i64], y: &[i64]) -> Result<PairClass> {
        self.require_boundary(x)?;
        self.require_boundary(y)?;
        let p = self.skeleton.polytope();
        if let Some(facet_index) = p.common_facet(x, y)? {
            return Ok(PairClass::CommonFacet { facet_index });
        }
        if x.iter().zip(y).all(|(a, b)| a + b == 0) {
            return Ok(PairClass::Antipodal);
        }
        let scan = self.scan_witnesses(x, y)?;
        match scan.witnesses.as_slice() {
            [(a, b, z)] => Ok(PairClass::ZWitness { a: *a, b: *b, z: z.clone() }),
            w => Err(LemmaError::WitnessCount { x: x.to_vec(), y: y.to_vec(), found: w.len() }),
        }
    }

    /// `⟨η_x, y⟩·x + y` for a root `x` and a boundary point `y` off its facet
    /// with positive pairing.
    pub fn p_of(&self, x: &[i64], y: &[i64]) -> Result<IntVector> {
        let root = self.roots.get(x).ok_or_else(|| LemmaError::NotARoot(x.to_vec()))?;
        self.require_boundary(y)?;
        let facet = &self.skeleton.polytope().facets()[root.facet_index];
        if facet.is_tight(y)? {
            return Err(LemmaError::OnRootFacet { x: x.to_vec(), y: y.to_vec() });
        }
        let pairing = linalg::dot(&root.normal, y)?;
        if pairing < 1 {
            return Err(LemmaError::NonPositivePairing(pairing));
        }
        if x.iter().zip(y).all(|(a, b)| a + b == 0) {
            return Err(LemmaError::Antipodal { x: x.to_vec(), y: y.to_vec() });
        }
        Ok(linalg::lin_comb(pairing, x, 1, y)?)
    }
}

pub fn classify_pair(skeleton: &Skeleton, x: &[i64], y: &[i64]) -> Result<PairClass> {
    PairContext::new(skeleton.clone()).classify_pair(x, y)
}

pub fn p_of(skeleton: &Skeleton, x: &[i64], y: &[i64]) -> Result<IntVector> {
    PairContext::new(skeleton.clone()).p_of(x, y)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaViolation {
    pub x: IntVector,
    pub y: IntVector,
    pub what: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LemmaReport {
    pub boundary_points: usize,
    pub ordered_pairs: usize,
    pub common_facet: usize,
    pub antipodal: usize,
    pub z_witness: usize,
    /// Largest coefficient bound used by any witness scan.
    pub scan_bound: i64,
    /// Pairs with more than one boundary point `a·x + b·y` (only one of them
    /// is the witness).
    pub multiple_boundary_hits: usize,
    pub p_checked: usize,
    /// `p(x, y)` landed on a facet interior (a root).
    pub p_is_root: usize,
    /// ... and forms an orthogonal pair with `x`.
    pub p_orthogonal: usize,
    pub violations: Vec<LemmaViolation>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(mut self, other: LemmaReport) -> LemmaReport {
        self.ordered_pairs += other.ordered_pairs;
        self.common_facet += other.common_facet;
        self.antipodal += other.antipodal;
        self.z_witness += other.z_witness;
        self.scan_bound = self.scan_bound.max(other.scan_bound);
        self.multiple_boundary_hits += other.multiple_boundary_hits;
        self.p_checked += other.p_checked;
        self.p_is_root += other.p_is_root;
        self.p_orthogonal += other.p_orthogonal;
        self.violations.extend(other.violations);
        self
    }
}

/// Runs every check over all ordered pairs of distinct boundary points.
pub fn verify_lemma_suite(ctx: &PairContext) -> Result<LemmaReport> {
    let partial: Vec<LemmaReport> = ctx
        .boundary
        .par_iter()
        .map(|x| {
            let mut rep = LemmaReport::default();
            for y in &ctx.boundary {
                if x != y {
                    check_pair(ctx, x, y, &mut rep)?;
                }
            }
            Ok(rep)
        })
        .collect::<Result<_>>()?;
    let mut report = partial.into_iter().fold(LemmaReport::default(), LemmaReport::merge);
    report.boundary_points = ctx.boundary.len();
    Ok(report)
}

fn check_pair(ctx: &PairContext, x: &IntVector, y: &IntVector, rep: &mut LemmaReport) -> Result<()> {
    let p = ctx.skeleton.polytope();
    let violate = |what: String, rep: &mut LemmaReport| {
        rep.violations.push(LemmaViolation { x: x.clone(), y: y.clone(), what });
    };
    rep.ordered_pairs += 1;

    let sum = linalg::lin_comb(1, x, 1, y)?;
    let common = p.common_facet(x, y)?.is_some();
    let antipodal = sum.iter().all(|&c| c == 0);
    let sum_on_boundary = p.on_boundary(&sum)?;
    let holding = [common, antipodal, sum_on_boundary].iter().filter(|&&b| b).count();
    if holding != 1 {
        violate(format!("trichotomy: {holding} alternatives hold"), rep);
    }

    if common {
        rep.common_facet += 1;
    } else if antipodal {
        rep.antipodal += 1;
    } else {
        rep.z_witness += 1;
        let scan = ctx.scan_witnesses(x, y)?;
        rep.scan_bound = rep.scan_bound.max(scan.bound_a).max(scan.bound_b);
        if scan.boundary_hits.len() > 1 {
            rep.multiple_boundary_hits += 1;
        }
        match scan.witnesses.as_slice() {
            [(a, b, z)] => {
                if *a != 1 && *b != 1 {
                    violate(format!("witness ({a}, {b}) has no unit coefficient"), rep);
                }
                if p.common_facet(x, z)?.is_none() || p.common_facet(y, z)?.is_none() {
                    violate(format!("witness {z:?} misses a facet of x or y"), rep);
                }
                if let Some(root) = ctx.roots.get(x) {
                    let pairing = linalg::dot(&root.normal, y)?;
                    if *a != pairing + 1 {
                        violate(format!("root coefficient a = {a}, expected {}", pairing + 1), rep);
                    }
                }
            }
            w => violate(format!("{} witnesses within bounds", w.len()), rep),
        }
    }

    if let Some(root) = ctx.roots.get(x) {
        let pairing = linalg::dot(&root.normal, y)?;
        if pairing >= 1 && !antipodal {
            rep.p_checked += 1;
            let pxy = ctx.p_of(x, y)?;
            if !p.on_boundary(&pxy)? {
                violate(format!("p(x, y) = {pxy:?} is not on the boundary"), rep);
            }
            if linalg::dot(&root.normal, &pxy)? != 0 {
                violate(format!("<eta_x, p(x, y)> != 0 for p = {pxy:?}"), rep);
            }
            if let Ok(PairClass::ZWitness { z, .. }) = ctx.classify_pair(x, y) {
                if linalg::lin_comb(1, &pxy, 1, x)? != z {
                    violate(format!("p(x, y) + x = {pxy:?} + x differs from z = {z:?}"), rep);
                }
            }
            if ctx.roots.get(&pxy).is_some() {
                rep.p_is_root += 1;
                if ctx.roots.is_orthogonal_pair(x, &pxy)? {
                    rep.p_orthogonal += 1;
                }
            }
        }
    }
    Ok(())
}

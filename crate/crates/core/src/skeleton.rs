//! Skeleton lattices `Λ_k`, Demazure roots, and the exterior-square quotients
//! that describe torsion in integral cohomology.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    self, lattice_from_generators, quotient_invariants, AbelianInvariants, IntVector, LinalgError, Sublattice,
};
use crate::polytope::{self, face_lattice, is_reflexive, FaceLattice, LatticePolytope, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeletonError {
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("skeleton dimension {k} out of range 0..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("{0:?} is not a root of the polytope")]
    NotARoot(IntVector),
    #[error("expected a {expected}-dimensional polytope, got dimension {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Arithmetic(#[from] LinalgError),
}

pub type Result<T, E = SkeletonError> = std::result::Result<T, E>;

/// A lattice point in the relative interior of a facet, with that facet's
/// index and inner normal `η_x` (`⟨η_x, x⟩ = -1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Root {
    pub point: IntVector,
    pub facet_index: usize,
    pub normal: IntVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RootSet {
    roots: Vec<Root>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Root> {
        self.roots.iter()
    }

    pub fn get(&self, x: &[i64]) -> Option<&Root> {
        self.roots.binary_search_by(|r| r.point.as_slice().cmp(x)).ok().map(|i| &self.roots[i])
    }

    pub fn points(&self) -> impl Iterator<Item = &IntVector> + '_ {
        self.roots.iter().map(|r| &r.point)
    }

    /// `⟨η_x, y⟩ = 0 = ⟨η_y, x⟩`
    pub fn is_orthogonal_pair(&self, x: &[i64], y: &[i64]) -> Result<bool> {
        let rx = self.get(x).ok_or_else(|| SkeletonError::NotARoot(x.to_vec()))?;
        let ry = self.get(y).ok_or_else(|| SkeletonError::NotARoot(y.to_vec()))?;
        Ok(linalg::dot(&rx.normal, y)? == 0 && linalg::dot(&ry.normal, x)? == 0)
    }
}

impl<'a> IntoIterator for &'a RootSet {
    type Item = &'a Root;
    type IntoIter = std::slice::Iter<'a, Root>;
    fn into_iter(self) -> Self::IntoIter {
        self.roots.iter()
    }
}

/// `Λ_k` together with the skeleton points generating it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonLattice {
    pub k: usize,
    pub lattice: Sublattice,
    pub generators: Vec<IntVector>,
}

/// A reflexive polytope with its face lattice, computed once and shared by
/// every skeleton query.
#[derive(Debug, Clone)]
pub struct Skeleton {
    polytope: LatticePolytope,
    faces: FaceLattice,
}

impl Skeleton {
    pub fn new(p: &LatticePolytope) -> Result<Self> {
        if !is_reflexive(p) {
            return Err(SkeletonError::NotReflexive);
        }
        Ok(Skeleton { polytope: p.clone(), faces: face_lattice(p)? })
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.polytope
    }

    pub fn face_lattice(&self) -> &FaceLattice {
        &self.faces
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    /// Lattice points on faces of dimension at most `k`, sorted.
    pub fn points(&self, k: usize) -> Result<Vec<IntVector>> {
        let n = self.dim();
        if k > n {
            return Err(SkeletonError::KOutOfRange { k, n });
        }
        let mut pts: Vec<IntVector> =
            self.faces.faces().iter().filter(|f| f.dim <= k).flat_map(|f| f.interior_points.iter().cloned()).collect();
        pts.sort();
        Ok(pts)
    }

    pub fn boundary_points(&self) -> Vec<IntVector> {
        self.points(self.dim() - 1).expect("n - 1 is in range")
    }

    pub fn lambda(&self, k: usize) -> Result<SkeletonLattice> {
        let generators = self.points(k)?;
        let lattice = lattice_from_generators(&generators, self.dim())?;
        Ok(SkeletonLattice { k, lattice, generators })
    }

    pub fn quotient(&self, k: usize) -> Result<AbelianInvariants> {
        Ok(quotient_invariants(&self.lambda(k)?.lattice)?)
    }

    /// Lattice points in the relative interiors of facets.
    pub fn roots(&self) -> RootSet {
        let n = self.dim();
        let mut roots: Vec<Root> = self
            .faces
            .faces_of_dim(n - 1)
            .flat_map(|f| {
                let facet_index = f.facets[0];
                let normal = self.polytope.facets()[facet_index].normal.clone();
                f.interior_points.iter().map(move |x| Root { point: x.clone(), facet_index, normal: normal.clone() })
            })
            .collect();
        roots.sort_by(|a, b| a.point.cmp(&b.point));
        RootSet { roots }
    }
}

pub fn k_skeleton_points(p: &LatticePolytope, k: usize) -> Result<Vec<IntVector>> {
    Skeleton::new(p)?.points(k)
}

pub fn lambda_k(p: &LatticePolytope, k: usize) -> Result<SkeletonLattice> {
    Skeleton::new(p)?.lambda(k)
}

/// Invariants of `M / Λ_k`.
pub fn quotient_m_mod_lambda(p: &LatticePolytope, k: usize) -> Result<AbelianInvariants> {
    Skeleton::new(p)?.quotient(k)
}

pub fn roots(p: &LatticePolytope) -> Result<RootSet> {
    Ok(Skeleton::new(p)?.roots())
}

/// Position of `e_i ∧ e_j` (`i < j`) in the lexicographic basis of `∧²ℤⁿ`.
fn wedge_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Invariants of `∧²ℤⁿ / (ℤⁿ ∧ sub)`.
pub fn exterior_square_quotient(ambient_dim: usize, sub: &Sublattice) -> Result<AbelianInvariants> {
    let n = ambient_dim;
    if sub.ambient_dim() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, got: sub.ambient_dim() }.into());
    }
    let wedge_dim = n * n.saturating_sub(1) / 2;
    let mut gens: Vec<IntVector> = Vec::with_capacity(n * sub.rank());
    for b in sub.basis().rows() {
        for i in 0..n {
            let mut g = vec![0i64; wedge_dim];
            for (j, &bj) in b.iter().enumerate() {
                match i.cmp(&j) {
                    std::cmp::Ordering::Less => g[wedge_index(n, i, j)] += bj,
                    std::cmp::Ordering::Greater => g[wedge_index(n, j, i)] -= bj,
                    std::cmp::Ordering::Equal => {}
                }
            }
            gens.push(g);
        }
    }
    let wedge_sub = lattice_from_generators(&gens, wedge_dim)?;
    Ok(quotient_invariants(&wedge_sub)?)
}

/// `Hom(G, ℚ/ℤ)` for finite `G`; isomorphic to `G`, so the invariants carry over.
pub fn torsion_dual(g: &AbelianInvariants) -> Result<AbelianInvariants> {
    if g.free_rank != 0 {
        return Err(LinalgError::NotFinite(g.free_rank).into());
    }
    Ok(g.clone())
}

/// Both sides of `M/Λ₂(P) ≅ ∧²N / (N ∧ Λ₁(P*))` for a 4-dimensional
/// reflexive polytope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorReport {
    pub m_mod_lambda2: AbelianInvariants,
    pub wedge_n_mod_dual_lambda1: AbelianInvariants,
    pub equal: bool,
}

pub fn mirror_torsion_check(p: &LatticePolytope) -> Result<MirrorReport> {
    if p.dim() != 4 {
        return Err(SkeletonError::WrongDimension { expected: 4, got: p.dim() });
    }
    let lhs = Skeleton::new(p)?.quotient(2)?;
    let dual = polytope::dual(p)?;
    let dual_lambda1 = Skeleton::new(&dual)?.lambda(1)?.lattice;
    let rhs = exterior_square_quotient(4, &dual_lambda1)?;
    Ok(MirrorReport { equal: lhs == rhs, m_mod_lambda2: lhs, wedge_n_mod_dual_lambda1: rhs })
}

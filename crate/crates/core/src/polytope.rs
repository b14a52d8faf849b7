//! Full-dimensional lattice polytopes: facets, face lattice, lattice points,
//! reflexivity, duality and products.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, dot, IntMatrix, IntVector, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("no points given")]
    Empty,
    #[error("point of dimension {got} in a {expected}-dimensional input")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not full-dimensional: affine hull has dimension {affine_dim} in ambient dimension {ambient_dim}")]
    NotFullDimensional { affine_dim: usize, ambient_dim: usize },
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("dimension {0} is not supported by this operation")]
    UnsupportedDimension(usize),
    #[error(transparent)]
    Arithmetic(#[from] LinalgError),
}

pub type Result<T, E = PolytopeError> = std::result::Result<T, E>;

/// The halfspace `⟨normal, x⟩ ≥ rhs` with a primitive inner normal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FacetInequality {
    pub normal: IntVector,
    pub rhs: i64,
}

impl FacetInequality {
    /// `⟨normal, p⟩ - rhs`; zero on the facet hyperplane, positive inside.
    pub fn slack(&self, p: &[i64]) -> Result<i64> {
        Ok(linalg::csub(dot(&self.normal, p)?, self.rhs)?)
    }

    pub fn is_tight(&self, p: &[i64]) -> Result<bool> {
        Ok(self.slack(p)? == 0)
    }
}

/// A full-dimensional lattice polytope given by its vertices, with its
/// irredundant facet description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<IntVector>,
    facets: Vec<FacetInequality>,
}

impl LatticePolytope {
    /// Convex hull of `points`. Vertices come out in lexicographic order.
    pub fn new<R: AsRef<[i64]>>(points: &[R]) -> Result<Self> {
        build_polytope(points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[FacetInequality] {
        &self.facets
    }

    pub fn contains(&self, p: &[i64]) -> Result<bool> {
        for f in &self.facets {
            if f.slack(p)? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Lattice point of `P` lying on some facet.
    pub fn on_boundary(&self, p: &[i64]) -> Result<bool> {
        let mut tight = false;
        for f in &self.facets {
            match f.slack(p)? {
                s if s < 0 => return Ok(false),
                0 => tight = true,
                _ => {}
            }
        }
        Ok(tight)
    }

    /// Indices of the facets whose hyperplane contains `p`.
    pub fn tight_facets(&self, p: &[i64]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, f) in self.facets.iter().enumerate() {
            if f.is_tight(p)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Index of the first facet containing both points, if any.
    pub fn common_facet(&self, x: &[i64], y: &[i64]) -> Result<Option<usize>> {
        for (i, f) in self.facets.iter().enumerate() {
            if f.is_tight(x)? && f.is_tight(y)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

/// Affine dimension of a point set (`None` for the empty set).
pub fn affine_dimension<R: AsRef<[i64]>>(points: &[R]) -> Result<Option<usize>> {
    let Some(first) = points.first() else {
        return Ok(None);
    };
    let first = first.as_ref();
    let diffs: Vec<IntVector> = points[1..]
        .iter()
        .map(|p| linalg::lin_comb(1, p.as_ref(), -1, first))
        .collect::<std::result::Result<_, _>>()?;
    Ok(Some(matrix_rank(&diffs, first.len())?))
}

fn matrix_rank(rows: &[IntVector], ncols: usize) -> Result<usize> {
    if rows.is_empty() || ncols == 0 {
        return Ok(0);
    }
    Ok(linalg::hermite_rank(&IntMatrix::from_rows(rows)?)?)
}

/// Normal of the hyperplane through `n` points in ℤⁿ via signed cofactors of
/// the difference matrix; zero when the points are affinely dependent.
fn hyperplane_normal(points: &[&IntVector]) -> Result<IntVector> {
    let n = points[0].len();
    let base = points[0];
    let diffs: Vec<IntVector> =
        points[1..].iter().map(|p| linalg::lin_comb(1, p, -1, base)).collect::<std::result::Result<_, _>>()?;
    if n == 1 {
        return Ok(vec![1]);
    }
    let d = IntMatrix::from_rows(&diffs)?;
    let mut normal = Vec::with_capacity(n);
    for j in 0..n {
        let cols: Vec<IntVector> =
            d.rows().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
        let c = IntMatrix::from_rows(&cols)?.det()?;
        normal.push(if j % 2 == 0 { c } else { -c });
    }
    Ok(normal)
}

/// Visits every increasing `k`-subset of `0..m`.
fn for_each_combination(m: usize, k: usize, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if k > m {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + m - k) else {
            return Ok(());
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Convex hull of a full-dimensional point set: supporting hyperplanes are
/// found among all `n`-subsets of the input, vertices are the points whose
/// tight facet normals span the space.
pub fn build_polytope<R: AsRef<[i64]>>(points: &[R]) -> Result<LatticePolytope> {
    let Some(first) = points.first() else {
        return Err(PolytopeError::Empty);
    };
    let n = first.as_ref().len();
    if n == 0 {
        return Err(PolytopeError::NotFullDimensional { affine_dim: 0, ambient_dim: 0 });
    }
    let mut pts: Vec<IntVector> = Vec::with_capacity(points.len());
    for p in points {
        let p = p.as_ref();
        if p.len() != n {
            return Err(PolytopeError::DimensionMismatch { expected: n, got: p.len() });
        }
        pts.push(p.to_vec());
    }
    pts.sort();
    pts.dedup();
    let affine_dim = affine_dimension(&pts)?.unwrap_or(0);
    if affine_dim < n {
        return Err(PolytopeError::NotFullDimensional { affine_dim, ambient_dim: n });
    }

    let mut seen = HashSet::new();
    let mut facets = Vec::new();
    for_each_combination(pts.len(), n, |idx| {
        let chosen: Vec<&IntVector> = idx.iter().map(|&i| &pts[i]).collect();
        let raw = hyperplane_normal(&chosen)?;
        if raw.iter().all(|&x| x == 0) {
            return Ok(());
        }
        let mut normal = linalg::primitive(&raw)?;
        let mut rhs = dot(&normal, chosen[0])?;
        let (mut above, mut below) = (false, false);
        for p in &pts {
            match dot(&normal, p)?.cmp(&rhs) {
                std::cmp::Ordering::Greater => above = true,
                std::cmp::Ordering::Less => below = true,
                std::cmp::Ordering::Equal => {}
            }
            if above && below {
                return Ok(());
            }
        }
        if below {
            normal.iter_mut().for_each(|x| *x = -*x);
            rhs = -rhs;
        }
        let facet = FacetInequality { normal, rhs };
        if seen.insert(facet.clone()) {
            facets.push(facet);
        }
        Ok(())
    })?;
    facets.sort();

    let mut vertices = Vec::new();
    for p in &pts {
        let mut tight = Vec::new();
        for f in &facets {
            if f.is_tight(p)? {
                tight.push(f.normal.clone());
            }
        }
        if matrix_rank(&tight, n)? == n {
            vertices.push(p.clone());
        }
    }
    Ok(LatticePolytope { dim: n, vertices, facets })
}

/// Interior and boundary lattice points, each in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePoints {
    pub interior: Vec<IntVector>,
    pub boundary: Vec<IntVector>,
}

/// Scans the bounding box of `P`.
pub fn lattice_points(p: &LatticePolytope) -> Result<LatticePoints> {
    let n = p.dim;
    let lo: Vec<i64> = (0..n).map(|i| p.vertices.iter().map(|v| v[i]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..n).map(|i| p.vertices.iter().map(|v| v[i]).max().unwrap()).collect();
    let mut interior = Vec::new();
    let mut boundary = Vec::new();
    let mut cur = lo.clone();
    'scan: loop {
        let mut inside = true;
        let mut tight = false;
        for f in &p.facets {
            match f.slack(&cur)? {
                s if s < 0 => {
                    inside = false;
                    break;
                }
                0 => tight = true,
                _ => {}
            }
        }
        if inside {
            if tight {
                boundary.push(cur.clone());
            } else {
                interior.push(cur.clone());
            }
        }
        // odometer, last coordinate fastest so output stays lexicographic
        for i in (0..n).rev() {
            if cur[i] < hi[i] {
                cur[i] += 1;
                continue 'scan;
            }
            cur[i] = lo[i];
        }
        break;
    }
    Ok(LatticePoints { interior, boundary })
}

/// A face: vertex indices into `P.vertices()`, facet indices into
/// `P.facets()`, and the lattice points of its relative interior.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub facets: Vec<usize>,
    pub interior_points: Vec<IntVector>,
}

/// All nonempty faces of `P`, ordered by dimension then vertex set; the last
/// face is `P` itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceLattice {
    dim: usize,
    faces: Vec<Face>,
}

impl FaceLattice {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = &Face> + '_ {
        self.faces.iter().filter(move |f| f.dim == k)
    }

    pub fn count_of_dim(&self, k: usize) -> usize {
        self.faces_of_dim(k).count()
    }

    /// Face whose relative interior contains `p`.
    pub fn carrier(&self, p: &[i64]) -> Option<&Face> {
        self.faces.iter().find(|f| f.interior_points.iter().any(|q| q == p))
    }
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Face lattice from vertex-facet incidences: the faces are the nonempty
/// intersections of facets, plus `P` itself.
pub fn face_lattice(p: &LatticePolytope) -> Result<FaceLattice> {
    let n = p.dim;
    let mut facet_vertices: Vec<Vec<usize>> = Vec::with_capacity(p.facets.len());
    for f in &p.facets {
        let mut vs = Vec::new();
        for (i, v) in p.vertices.iter().enumerate() {
            if f.is_tight(v)? {
                vs.push(i);
            }
        }
        facet_vertices.push(vs);
    }

    let mut found: BTreeSet<Vec<usize>> = facet_vertices.iter().cloned().collect();
    let mut frontier: Vec<Vec<usize>> = found.iter().cloned().collect();
    while let Some(face) = frontier.pop() {
        for fv in &facet_vertices {
            let meet = intersect_sorted(&face, fv);
            if !meet.is_empty() && meet != face && found.insert(meet.clone()) {
                frontier.push(meet);
            }
        }
    }
    found.insert((0..p.vertices.len()).collect());

    let mut faces = Vec::with_capacity(found.len());
    for vs in found {
        let pts: Vec<&IntVector> = vs.iter().map(|&i| &p.vertices[i]).collect();
        let dim = affine_dimension(&pts)?.unwrap_or(0);
        let facets =
            (0..p.facets.len()).filter(|&fi| vs.iter().all(|v| facet_vertices[fi].binary_search(v).is_ok())).collect();
        faces.push(Face { dim, vertices: vs, facets, interior_points: Vec::new() });
    }
    faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
    debug_assert_eq!(faces.last().map(|f| f.dim), Some(n));

    let index: BTreeMap<Vec<usize>, usize> = faces.iter().enumerate().map(|(i, f)| (f.vertices.clone(), i)).collect();
    let pts = lattice_points(p)?;
    let top = faces.len() - 1;
    faces[top].interior_points = pts.interior;
    for q in pts.boundary {
        let tight = p.tight_facets(&q)?;
        let carrier = tight
            .iter()
            .skip(1)
            .fold(facet_vertices[tight[0]].clone(), |acc, &fi| intersect_sorted(&acc, &facet_vertices[fi]));
        let fi = index[&carrier];
        faces[fi].interior_points.push(q);
    }
    Ok(FaceLattice { dim: n, faces })
}

/// Origin strictly inside and every facet at lattice distance one.
pub fn is_reflexive(p: &LatticePolytope) -> bool {
    p.facets.iter().all(|f| f.rhs == -1)
}

/// The dual polytope, whose vertices are the facet normals of `P`.
pub fn dual(p: &LatticePolytope) -> Result<LatticePolytope> {
    if !is_reflexive(p) {
        return Err(PolytopeError::NotReflexive);
    }
    let normals: Vec<&IntVector> = p.facets.iter().map(|f| &f.normal).collect();
    build_polytope(&normals)
}

/// Cartesian product; vertices are all concatenations `(v, w)`.
pub fn product(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    let mut vertices = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for v in &p.vertices {
        for w in &q.vertices {
            vertices.push(v.iter().chain(w).copied().collect::<IntVector>());
        }
    }
    build_polytope(&vertices)
}

/// Searches for a unimodular `T` with `T · vert(P) = vert(Q)` (columns as
/// points, origin fixed). Supported for dimension at most 3.
pub fn unimodular_equivalent(p: &LatticePolytope, q: &LatticePolytope) -> Result<Option<IntMatrix>> {
    let n = p.dim;
    if n > 3 || q.dim > 3 {
        return Err(PolytopeError::UnsupportedDimension(n.max(q.dim)));
    }
    if n != q.dim || p.vertices.len() != q.vertices.len() || p.facets.len() != q.facets.len() {
        return Ok(None);
    }

    let mut anchor: Vec<usize> = Vec::with_capacity(n);
    let mut rows: Vec<IntVector> = Vec::with_capacity(n);
    for (i, v) in p.vertices.iter().enumerate() {
        rows.push(v.clone());
        if matrix_rank(&rows, n)? == rows.len() {
            anchor.push(i);
        } else {
            rows.pop();
        }
        if anchor.len() == n {
            break;
        }
    }
    if anchor.len() < n {
        // vertices lie in a hyperplane through the origin
        return Ok(None);
    }
    let a = IntMatrix::from_rows(&rows)?;
    let det_a = a.det()?;
    let adj = a.adjugate()?;
    let targets: BTreeSet<&IntVector> = q.vertices.iter().collect();

    let m = q.vertices.len();
    let mut choice = vec![0usize; n];
    'tuples: loop {
        let distinct = (0..n).all(|i| (0..i).all(|j| choice[i] != choice[j]));
        if distinct {
            let b_rows: Vec<&IntVector> = choice.iter().map(|&i| &q.vertices[i]).collect();
            let b = IntMatrix::from_rows(&b_rows)?;
            // A · Tᵀ = B  ⇒  Tᵀ = adj(A) · B / det(A)
            let scaled = adj.mul(&b)?;
            let exact = scaled.rows().all(|r| r.iter().all(|&x| x % det_a == 0));
            if exact {
                let t_rows: Vec<IntVector> = scaled.rows().map(|r| r.iter().map(|&x| x / det_a).collect()).collect();
                let t = IntMatrix::from_rows(&t_rows)?.transpose();
                if t.det()?.abs() == 1 {
                    let mut ok = true;
                    for v in &p.vertices {
                        if !targets.contains(&t.apply(v)?) {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        return Ok(Some(t));
                    }
                }
            }
        }
        for i in (0..n).rev() {
            choice[i] += 1;
            if choice[i] < m {
                continue 'tuples;
            }
            choice[i] = 0;
        }
        return Ok(None);
    }
}

/// `[-1, 1]ⁿ`
pub fn cube(n: usize) -> LatticePolytope {
    let vertices: Vec<IntVector> =
        (0..1u32 << n).map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect()).collect();
    build_polytope(&vertices).expect("cube is full-dimensional")
}

/// `conv{±e_i}`
pub fn cross_polytope(n: usize) -> LatticePolytope {
    let mut vertices = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [1, -1] {
            let mut v = vec![0; n];
            v[i] = s;
            vertices.push(v);
        }
    }
    build_polytope(&vertices).expect("cross-polytope is full-dimensional")
}

/// `conv{e_1, …, e_n, -Σe_i}`
pub fn standard_simplex(n: usize) -> LatticePolytope {
    let mut vertices: Vec<IntVector> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    vertices.push(vec![-1; n]);
    build_polytope(&vertices).expect("simplex is full-dimensional")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(points: &[&[i64]]) -> LatticePolytope {
        build_polytope(points).unwrap()
    }

    fn triangle() -> LatticePolytope {
        poly(&[&[1, 0], &[0, 1], &[-1, -1]])
    }

    fn big_triangle() -> LatticePolytope {
        poly(&[&[2, -1], &[-1, 2], &[-1, -1]])
    }

    fn normals(p: &LatticePolytope) -> BTreeSet<(IntVector, i64)> {
        p.facets().iter().map(|f| (f.normal.clone(), f.rhs)).collect()
    }

    #[test]
    fn build_drops_interior_points() {
        let p = poly(&[&[1, 0], &[0, 1], &[-1, -1], &[0, 0]]);
        assert_eq!(p.vertices(), &[vec![-1, -1], vec![0, 1], vec![1, 0]]);
        assert_eq!(cube(3).vertices().len(), 8);
    }

    #[test]
    fn build_rejects_degenerate_input() {
        let err = build_polytope(&[[0, 0], [1, 1], [2, 2]]).unwrap_err();
        assert_eq!(err, PolytopeError::NotFullDimensional { affine_dim: 1, ambient_dim: 2 });
        assert_eq!(build_polytope::<Vec<i64>>(&[]).unwrap_err(), PolytopeError::Empty);
        assert!(matches!(build_polytope(&[vec![1, 0], vec![1]]), Err(PolytopeError::DimensionMismatch { .. })));
        let flat = build_polytope(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap_err();
        assert!(matches!(flat, PolytopeError::NotFullDimensional { affine_dim: 2, .. }));
    }

    #[test]
    fn facet_examples() {
        let expected: BTreeSet<_> = [(vec![-1, -1], -1), (vec![2, -1], -1), (vec![-1, 2], -1)].into_iter().collect();
        assert_eq!(normals(&triangle()), expected);
        // the third vertex is strictly inside each facet halfspace
        for f in triangle().facets() {
            let tight = triangle().vertices().iter().filter(|v| f.is_tight(v).unwrap()).count();
            assert_eq!(tight, 2);
        }
        let sq: BTreeSet<_> =
            [(vec![1, 0], -1), (vec![-1, 0], -1), (vec![0, 1], -1), (vec![0, -1], -1)].into_iter().collect();
        assert_eq!(normals(&cube(2)), sq);
        let c3 = cube(3);
        assert_eq!(c3.facets().len(), 6);
        for f in c3.facets() {
            assert_eq!(f.rhs, -1);
            assert_eq!(f.normal.iter().map(|x| x.abs()).sum::<i64>(), 1);
        }
    }

    #[test]
    fn one_dimensional_segment() {
        let seg = build_polytope(&[[-1], [1], [0]]).unwrap();
        assert_eq!(seg.vertices(), &[vec![-1], vec![1]]);
        assert!(is_reflexive(&seg));
    }

    #[test]
    fn face_counts() {
        let sq = face_lattice(&cube(2)).unwrap();
        assert_eq!((sq.count_of_dim(0), sq.count_of_dim(1), sq.count_of_dim(2)), (4, 4, 1));
        let c = face_lattice(&cube(3)).unwrap();
        assert_eq!((c.count_of_dim(0), c.count_of_dim(1), c.count_of_dim(2)), (8, 12, 6));
        let c4 = face_lattice(&cube(4)).unwrap();
        assert_eq!((0..=4).map(|k| c4.count_of_dim(k)).collect::<Vec<_>>(), vec![16, 32, 24, 8, 1]);
    }

    #[test]
    fn edge_interior_points() {
        let fl = face_lattice(&big_triangle()).unwrap();
        let bottom = fl.faces_of_dim(1).find(|f| f.interior_points.contains(&vec![0, -1])).unwrap();
        assert_eq!(bottom.interior_points, vec![vec![0, -1], vec![1, -1]]);
    }

    #[test]
    fn lattice_point_examples() {
        let t = lattice_points(&triangle()).unwrap();
        assert_eq!(t.interior, vec![vec![0, 0]]);
        assert_eq!(t.boundary.len(), 3);
        let b = lattice_points(&big_triangle()).unwrap();
        assert_eq!(b.interior, vec![vec![0, 0]]);
        assert_eq!(b.boundary.len(), 9);
        let s = lattice_points(&cube(2)).unwrap();
        assert_eq!(s.interior, vec![vec![0, 0]]);
        assert_eq!(s.boundary.len(), 8);
    }

    #[test]
    fn boundary_points_partitioned_by_faces() {
        for p in [big_triangle(), cube(3), cross_polytope(3), cube(4)] {
            let fl = face_lattice(&p).unwrap();
            let pts = lattice_points(&p).unwrap();
            let mut assigned: Vec<IntVector> =
                fl.faces().iter().filter(|f| f.dim < p.dim()).flat_map(|f| f.interior_points.iter().cloned()).collect();
            assigned.sort();
            assert_eq!(assigned, pts.boundary);
        }
    }

    #[test]
    fn reflexivity_examples() {
        assert!(is_reflexive(&triangle()));
        assert!(is_reflexive(&cube(3)));
        assert!(!is_reflexive(&poly(&[&[2, 0], &[0, 2], &[-2, -2]])));
        // origin on the boundary
        assert!(!is_reflexive(&poly(&[&[0, 0], &[1, 0], &[0, 1]])));
        assert_eq!(dual(&poly(&[&[2, 0], &[0, 2], &[-2, -2]])).unwrap_err(), PolytopeError::NotReflexive);
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual(&triangle()).unwrap(), big_triangle());
        assert_eq!(dual(&cube(2)).unwrap(), cross_polytope(2));
        assert_eq!(dual(&cross_polytope(4)).unwrap(), cube(4));
        for p in [triangle(), big_triangle(), cube(3), standard_simplex(3), standard_simplex(4)] {
            assert_eq!(dual(&dual(&p).unwrap()).unwrap(), p);
        }
    }

    #[test]
    fn product_examples() {
        let seg = build_polytope(&[[-1], [1]]).unwrap();
        assert_eq!(product(&seg, &seg).unwrap(), cube(2));
        let box3 = product(&cube(2), &seg).unwrap();
        assert_eq!(box3, cube(3));
        assert!(is_reflexive(&box3));
        let tp = product(&triangle(), &big_triangle()).unwrap();
        assert!(is_reflexive(&tp));
        assert_eq!(tp.facets().len(), 6);
    }

    #[test]
    fn equivalence_examples() {
        let t = triangle();
        assert_eq!(unimodular_equivalent(&t, &t).unwrap(), Some(IntMatrix::identity(2)));
        let t2 = poly(&[&[0, 1], &[1, 0], &[-1, -1]]);
        assert_eq!(unimodular_equivalent(&t, &t2).unwrap(), Some(IntMatrix::identity(2)));
        assert_eq!(unimodular_equivalent(&t, &cube(2)).unwrap(), None);
        // a sheared copy of the square is found with the shear
        let sheared = poly(&[&[1, 2], &[1, 0], &[-1, -2], &[-1, 0]]);
        let tf = unimodular_equivalent(&cube(2), &sheared).unwrap().unwrap();
        assert_eq!(tf.det().unwrap().abs(), 1);
        // same vertex count, different lattice geometry
        assert_eq!(unimodular_equivalent(&triangle(), &big_triangle()).unwrap(), None);
        assert_eq!(unimodular_equivalent(&cube(4), &cube(4)).unwrap_err(), PolytopeError::UnsupportedDimension(4));
    }
}

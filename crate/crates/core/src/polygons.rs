//! Enumeration of reflexive polygons up to unimodular equivalence.
//!
//! Polygons are generated as counterclockwise vertex cycles inside a box,
//! starting from their lexicographically least vertex, where every edge sits
//! at lattice distance one from the origin and every turn is strictly convex.
//! Each is reduced to a normal form: the lexicographically least sorted
//! vertex list among the images under the transforms that move a directed
//! edge onto the line `y = -1` starting at `(0, -1)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, lattice_index, IntVector, LatticeIndex};
use crate::polytope::{build_polytope, is_reflexive, LatticePolytope, PolytopeError};
use crate::skeleton::Skeleton;

/// Search box `[-r, r]²` used by default.
pub const DEFAULT_RADIUS: i64 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonClass {
    pub representative: LatticePolytope,
    pub vertex_count: usize,
    pub lambda0_index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonEnumeration {
    pub radius: i64,
    /// Reflexive polygons found with vertices in the box (not up to equivalence).
    pub polygons_found: usize,
    pub max_vertex_count: usize,
    pub classes: Vec<PolygonClass>,
}

fn det2(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn turn(t: &[i64], u: &[i64], w: &[i64]) -> i64 {
    det2(&[u[0] - t[0], u[1] - t[1]], &[w[0] - u[0], w[1] - u[1]])
}

/// Edge `u → w` runs counterclockwise at lattice distance one from the origin.
fn unit_edge(u: &[i64], w: &[i64]) -> bool {
    let d = det2(u, w);
    d > 0 && d == linalg::gcd(w[0] - u[0], w[1] - u[1])
}

/// Counterclockwise angle order starting at direction `s`.
fn angle_key(s: &[i64], q: &[i64]) -> u8 {
    let d = det2(s, q);
    if d > 0 || (d == 0 && s[0] * q[0] + s[1] * q[1] > 0) {
        0
    } else {
        1
    }
}

fn cycles_from(start: &IntVector, candidates: &[IntVector]) -> Vec<Vec<IntVector>> {
    let mut cands: Vec<&IntVector> = candidates.iter().filter(|q| *q > start).collect();
    cands.sort_by(|p, q| angle_key(start, p).cmp(&angle_key(start, q)).then_with(|| 0.cmp(&det2(p, q))));
    let mut out = Vec::new();
    let mut path: Vec<&IntVector> = vec![start];
    extend(&cands, 0, &mut path, &mut out);
    out
}

fn extend<'a>(cands: &[&'a IntVector], from: usize, path: &mut Vec<&'a IntVector>, out: &mut Vec<Vec<IntVector>>) {
    let u = path[path.len() - 1];
    let s = path[0];
    if path.len() >= 3 {
        let t = path[path.len() - 2];
        if unit_edge(u, s) && turn(t, u, s) > 0 && turn(u, s, path[1]) > 0 {
            out.push(path.iter().map(|v| (*v).clone()).collect());
        }
    }
    for (i, w) in cands.iter().enumerate().skip(from) {
        if !unit_edge(u, w) {
            continue;
        }
        if path.len() >= 2 && turn(path[path.len() - 2], u, w) <= 0 {
            continue;
        }
        path.push(w);
        extend(cands, i + 1, path, out);
        path.pop();
    }
}

/// Normal form of a reflexive polygon given by its counterclockwise vertex cycle.
fn normal_form_of_cycle(cycle: &[IntVector]) -> Vec<IntVector> {
    let m = cycle.len();
    let mut best: Option<Vec<IntVector>> = None;
    for i in 0..m {
        for w in [&cycle[(i + 1) % m], &cycle[(i + m - 1) % m]] {
            let u = &cycle[i];
            let e = [w[0] - u[0], w[1] - u[1]];
            let g = linalg::gcd(e[0], e[1]);
            let mut eta = [-e[1] / g, e[0] / g];
            if eta[0] * u[0] + eta[1] * u[1] != -1 {
                eta = [-eta[0], -eta[1]];
            }
            // first row r with det[r; eta] = 1, then sheared so that u ↦ (0, -1)
            let (_, s, t) = linalg::ext_gcd(eta[1], -eta[0]).expect("small entries");
            let mut r = [s, t];
            let ru = r[0] * u[0] + r[1] * u[1];
            r = [r[0] + ru * eta[0], r[1] + ru * eta[1]];
            if r[0] * w[0] + r[1] * w[1] < 0 {
                r = [-r[0], -r[1]];
            }
            let mut image: Vec<IntVector> =
                cycle.iter().map(|v| vec![r[0] * v[0] + r[1] * v[1], eta[0] * v[0] + eta[1] * v[1]]).collect();
            image.sort();
            if best.as_ref().is_none_or(|b| image < *b) {
                best = Some(image);
            }
        }
    }
    best.expect("nonempty cycle")
}

/// Counterclockwise vertex cycle of a polygon containing the origin.
fn ccw_cycle(p: &LatticePolytope) -> Vec<IntVector> {
    let s = p.vertices()[0].clone();
    let mut vs: Vec<IntVector> = p.vertices().to_vec();
    vs.sort_by(|a, b| angle_key(&s, a).cmp(&angle_key(&s, b)).then_with(|| 0.cmp(&det2(a, b))));
    vs
}

/// Sorted vertex list of the normal form; equal for two reflexive polygons
/// iff they are unimodularly equivalent.
pub fn polygon_normal_form(p: &LatticePolytope) -> Result<Vec<IntVector>, PolytopeError> {
    if p.dim() != 2 {
        return Err(PolytopeError::UnsupportedDimension(p.dim()));
    }
    if !is_reflexive(p) {
        return Err(PolytopeError::NotReflexive);
    }
    Ok(normal_form_of_cycle(&ccw_cycle(p)))
}

/// All reflexive polygons with vertices in `[-radius, radius]²`, grouped into
/// equivalence classes.
pub fn enumerate_in_box(radius: i64) -> Result<PolygonEnumeration, PolytopeError> {
    let mut candidates = Vec::new();
    for x in -radius..=radius {
        for y in -radius..=radius {
            if linalg::gcd(x, y) == 1 {
                candidates.push(vec![x, y]);
            }
        }
    }
    let cycles: Vec<Vec<IntVector>> = candidates.par_iter().flat_map_iter(|s| cycles_from(s, &candidates)).collect();

    let mut classes: BTreeMap<Vec<IntVector>, usize> = BTreeMap::new();
    let mut max_vertex_count = 0;
    for c in &cycles {
        max_vertex_count = max_vertex_count.max(c.len());
        *classes.entry(normal_form_of_cycle(c)).or_default() += 1;
    }

    let mut out = Vec::with_capacity(classes.len());
    for nf in classes.into_keys() {
        let representative = build_polytope(&nf)?;
        debug_assert!(is_reflexive(&representative));
        let lambda0 =
            Skeleton::new(&representative).and_then(|sk| sk.lambda(0)).map_err(|_| PolytopeError::NotReflexive)?;
        let lambda0_index = match lattice_index(&lambda0.lattice) {
            LatticeIndex::Finite(i) => i,
            LatticeIndex::Infinite => unreachable!("vertices of a polygon span the plane"),
        };
        out.push(PolygonClass { vertex_count: nf.len(), representative, lambda0_index });
    }
    out.sort_by(|a, b| {
        (a.vertex_count, a.representative.vertices()).cmp(&(b.vertex_count, b.representative.vertices()))
    });
    Ok(PolygonEnumeration { radius, polygons_found: cycles.len(), max_vertex_count, classes: out })
}

pub fn enumerate_reflexive_polygons() -> Vec<PolygonClass> {
    enumerate_in_box(DEFAULT_RADIUS).expect("enumeration in the default box").classes
}

/// The classes whose vertices do not generate the lattice.
pub fn exceptional_polygons() -> Vec<PolygonClass> {
    enumerate_reflexive_polygons().into_iter().filter(|c| c.lambda0_index > 1).collect()
}

/// `classes=<n> exceptional=<m> indices=<i,j,...>` with indices ascending.
pub fn summary_line(classes: &[PolygonClass]) -> String {
    let mut idx: Vec<u64> = classes.iter().map(|c| c.lambda0_index).filter(|&i| i > 1).collect();
    idx.sort_unstable();
    let joined: Vec<String> = idx.iter().map(u64::to_string).collect();
    format!("classes={} exceptional={} indices={}", classes.len(), idx.len(), joined.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{cube, dual, unimodular_equivalent};

    fn poly(points: &[[i64; 2]]) -> LatticePolytope {
        build_polytope(points).unwrap()
    }

    #[test]
    fn unit_edge_examples() {
        assert!(unit_edge(&[1, 0], &[0, 1]));
        assert!(unit_edge(&[2, -1], &[-1, 2]));
        assert!(!unit_edge(&[0, 1], &[1, 0]));
        assert!(!unit_edge(&[2, 0], &[0, 2]));
    }

    #[test]
    fn normal_form_is_invariant() {
        let t = poly(&[[2, -1], [-1, 2], [-1, -1]]);
        let nf = polygon_normal_form(&t).unwrap();
        // image under (x, y) ↦ (x + 2y, y) and under a reflection
        let sheared = poly(&[[0, -1], [3, 2], [-3, -1]]);
        let reflected = poly(&[[-1, 2], [2, -1], [-1, -1]]);
        assert_eq!(polygon_normal_form(&sheared).unwrap(), nf);
        assert_eq!(polygon_normal_form(&reflected).unwrap(), nf);
        assert_ne!(polygon_normal_form(&cube(2)).unwrap(), nf);
        assert!(polygon_normal_form(&cube(3)).is_err());
    }

    #[test]
    fn sixteen_classes_with_three_exceptions() {
        let e = enumerate_in_box(DEFAULT_RADIUS).unwrap();
        assert_eq!(e.classes.len(), 16);
        assert_eq!(e.max_vertex_count, 6);
        assert_eq!(summary_line(&e.classes), "classes=16 exceptional=3 indices=2,2,3");
        for c in &e.classes {
            assert!(is_reflexive(&c.representative));
            assert_eq!(c.vertex_count, c.representative.vertices().len());
        }
    }

    #[test]
    fn representatives_are_pairwise_inequivalent() {
        let classes = enumerate_reflexive_polygons();
        for (i, a) in classes.iter().enumerate() {
            for b in &classes[i + 1..] {
                assert_eq!(unimodular_equivalent(&a.representative, &b.representative).unwrap(), None);
            }
        }
    }

    #[test]
    fn exceptional_members() {
        let fig = exceptional_polygons();
        assert_eq!(fig.len(), 3);
        let find = |p: &LatticePolytope| {
            fig.iter().find(|c| unimodular_equivalent(&c.representative, p).unwrap().is_some()).map(|c| c.lambda0_index)
        };
        assert_eq!(find(&cube(2)), Some(2));
        assert_eq!(find(&poly(&[[-1, -1], [2, -1], [-1, 2]])), Some(3));
        let mut idx: Vec<u64> = fig.iter().map(|c| c.lambda0_index).collect();
        idx.sort_unstable();
        assert_eq!(idx, vec![2, 2, 3]);
    }

    #[test]
    fn duality_permutes_classes() {
        let classes = enumerate_reflexive_polygons();
        let forms: Vec<_> = classes.iter().map(|c| polygon_normal_form(&c.representative).unwrap()).collect();
        let mut self_dual = 0;
        for (i, c) in classes.iter().enumerate() {
            let d = polygon_normal_form(&dual(&c.representative).unwrap()).unwrap();
            let j = forms.iter().position(|f| *f == d).expect("dual is reflexive");
            if i == j {
                self_dual += 1;
            }
        }
        assert!(self_dual > 0);
        // P² fan polygon and its dual sit in different classes
        let t = poly(&[[1, 0], [0, 1], [-1, -1]]);
        assert_ne!(polygon_normal_form(&t).unwrap(), polygon_normal_form(&dual(&t).unwrap()).unwrap());
    }

    #[test]
    fn vertices_span_lattice_after_including_edges() {
        for c in enumerate_reflexive_polygons() {
            let sk = Skeleton::new(&c.representative).unwrap();
            assert!(sk.lambda(1).unwrap().lattice.is_full());
        }
    }
}

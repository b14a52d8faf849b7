//! Verification that `Λ_{n-2} = Λ_{n-1}` for reflexive polytopes of dimension
//! `n ≥ 3`, with an explicit integer certificate for every root, and the
//! standard test corpus in dimensions 2 to 4.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lemmas::{verify_lemma_suite, LemmaError, LemmaReport, PairContext};
use crate::linalg::{
    self, lattice_index, lattice_with_transform, AbelianInvariants, IntVector, LatticeIndex, LinalgError,
};
use crate::polygons::enumerate_reflexive_polygons;
use crate::polytope::{self, cross_polytope, cube, dual, is_reflexive, product, standard_simplex, LatticePolytope};
use crate::skeleton::{Skeleton, SkeletonError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("root certificates need dimension at least 3, got {0}")]
    DimensionTooSmall(usize),
    #[error("{0:?} is not a root")]
    NotARoot(IntVector),
    #[error("root {root:?} is not in the codimension-two skeleton lattice of {vertices:?}")]
    CertificateFailure { root: IntVector, vertices: Vec<IntVector> },
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Lemma(#[from] LemmaError),
    #[error(transparent)]
    Arithmetic(#[from] LinalgError),
}

pub type Result<T, E = VerifyError> = std::result::Result<T, E>;

/// `root = Σ coefficients[i] · generators[i]` with every generator on the
/// `(n-2)`-skeleton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootCertificate {
    pub root: IntVector,
    pub generators: Vec<IntVector>,
    pub coefficients: Vec<i64>,
}

impl RootCertificate {
    pub fn evaluate(&self) -> Result<IntVector> {
        let mut acc = vec![0i64; self.root.len()];
        for (g, &c) in self.generators.iter().zip(&self.coefficients) {
            acc = linalg::lin_comb(1, &acc, c, g)?;
        }
        Ok(acc)
    }

    pub fn is_valid(&self) -> bool {
        self.evaluate().is_ok_and(|v| v == self.root)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelInvariants {
    pub k: usize,
    pub index: LatticeIndex,
    pub quotient: AbelianInvariants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    /// `Λ_{n-2} = Λ_{n-1}`; absent for `n < 2`.
    pub codim2_eq_codim1: Option<bool>,
    /// `Λ_{n-1} = Λ_n`
    pub codim1_eq_full: bool,
    /// `Λ_{n-1} = M`
    pub codim1_eq_m: bool,
}

/// A polytope of dimension at least 3 with `Λ_{n-2} ≠ Λ_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub vertices: Vec<IntVector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub n: usize,
    pub reflexive: bool,
    pub levels: Vec<LevelInvariants>,
    pub flags: Option<Flags>,
    pub root_count: usize,
    pub certificates: Vec<RootCertificate>,
    pub lemmas: Option<LemmaReport>,
    pub counterexample: Option<Counterexample>,
    /// Informational remarks; never failures.
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Report for input that is not reflexive; carries no lattice data.
    pub fn not_reflexive(id: impl Into<String>, n: usize) -> Self {
        VerificationReport {
            id: id.into(),
            n,
            reflexive: false,
            levels: Vec::new(),
            flags: None,
            root_count: 0,
            certificates: Vec::new(),
            lemmas: None,
            counterexample: None,
            notes: Vec::new(),
        }
    }

    /// No fatal finding: no counterexample, no lemma violation, every
    /// certificate valid. Planar exceptions do not count as failures.
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
            && self.lemmas.as_ref().is_none_or(LemmaReport::passed)
            && self.certificates.iter().all(RootCertificate::is_valid)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Also run the pair-classification suite.
    pub lemmas: bool,
}

/// Expresses a root over the `(n-2)`-skeleton points.
pub fn root_certificate(skeleton: &Skeleton, x: &[i64]) -> Result<RootCertificate> {
    let n = skeleton.dim();
    if n < 3 {
        return Err(VerifyError::DimensionTooSmall(n));
    }
    if skeleton.roots().get(x).is_none() {
        return Err(VerifyError::NotARoot(x.to_vec()));
    }
    certificate_from(skeleton, &skeleton.points(n - 2)?, x)
}

fn certificate_from(skeleton: &Skeleton, gens: &[IntVector], x: &[i64]) -> Result<RootCertificate> {
    let n = skeleton.dim();
    let fail =
        || VerifyError::CertificateFailure { root: x.to_vec(), vertices: skeleton.polytope().vertices().to_vec() };
    let (lattice, hf) = lattice_with_transform(gens, n)?;
    let hf = hf.ok_or_else(fail)?;
    let c = linalg::lattice_membership(&lattice, x)?.ok_or_else(fail)?;
    // basis_i = Σ_j u[i][j] · gens_j
    let mut coeffs = vec![0i64; gens.len()];
    for (i, &ci) in c.iter().enumerate() {
        for (j, cj) in coeffs.iter_mut().enumerate() {
            *cj = linalg::cadd(*cj, linalg::cmul(ci, hf.u[(i, j)])?)?;
        }
    }
    let (generators, coefficients) =
        gens.iter().zip(coeffs).filter(|(_, c)| *c != 0).map(|(g, c)| (g.clone(), c)).unzip();
    let cert = RootCertificate { root: x.to_vec(), generators, coefficients };
    if !cert.is_valid() {
        return Err(fail());
    }
    Ok(cert)
}

pub fn verify_theorem(id: &str, p: &LatticePolytope, opts: VerifyOptions) -> Result<VerificationReport> {
    if !is_reflexive(p) {
        return Err(VerifyError::NotReflexive);
    }
    let n = p.dim();
    let skeleton = Skeleton::new(p)?;
    let lattices = (0..=n).map(|k| skeleton.lambda(k)).collect::<Result<Vec<_>, _>>()?;
    let levels = lattices
        .iter()
        .map(|l| {
            Ok(LevelInvariants {
                k: l.k,
                index: lattice_index(&l.lattice),
                quotient: linalg::quotient_invariants(&l.lattice)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let boundary = &lattices[n - 1].lattice;
    let codim2_eq_codim1 = (n >= 2).then(|| lattices[n - 2].lattice == *boundary);
    let flags =
        Flags { codim2_eq_codim1, codim1_eq_full: *boundary == lattices[n].lattice, codim1_eq_m: boundary.is_full() };

    let roots = skeleton.roots();
    let mut counterexample = None;
    let mut certificates = Vec::new();
    if n >= 3 {
        if codim2_eq_codim1 == Some(false) {
            counterexample = Some(Counterexample { vertices: p.vertices().to_vec() });
        } else {
            let gens = &lattices[n - 2].generators;
            for r in &roots {
                certificates.push(certificate_from(&skeleton, gens, &r.point)?);
            }
        }
    }

    let mut notes = Vec::new();
    if n == 2 && codim2_eq_codim1 == Some(false) {
        notes.push("planar exception: Λ_0 ≠ Λ_1 is allowed for polygons".to_string());
    }
    if n == 4 && !lattices[2].lattice.is_full() {
        notes.push("Λ_2 ≠ M: one of the rare 4D classes outside the built-in corpus".to_string());
    }

    let lemmas = if opts.lemmas { Some(verify_lemma_suite(&PairContext::new(skeleton.clone()))?) } else { None };

    Ok(VerificationReport {
        id: id.to_string(),
        n,
        reflexive: true,
        levels,
        flags: Some(flags),
        root_count: roots.len(),
        certificates,
        lemmas,
        counterexample,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    pub polytope: LatticePolytope,
}

fn entry(id: impl Into<String>, polytope: LatticePolytope) -> CorpusEntry {
    CorpusEntry { id: id.into(), polytope }
}

fn must(p: polytope::Result<LatticePolytope>) -> LatticePolytope {
    p.expect("corpus members are valid reflexive polytopes")
}

/// Deterministic corpus of reflexive polytopes in dimensions `2..=max_dim`
/// (at most 4): the 16 polygon classes; in 3D the cube, octahedron, simplex,
/// its dual and all polygon × segment products; in 4D all unordered
/// polygon-pair products, the 4-cube, 4-cross-polytope, simplex and its dual.
pub fn standard_corpus(max_dim: usize) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    if max_dim < 2 {
        return out;
    }
    let polygons: Vec<LatticePolytope> = enumerate_reflexive_polygons().into_iter().map(|c| c.representative).collect();
    let name = |i: usize| format!("polygon-{:02}", i + 1);
    for (i, p) in polygons.iter().enumerate() {
        out.push(entry(name(i), p.clone()));
    }
    if max_dim >= 3 {
        out.push(entry("cube-3", cube(3)));
        out.push(entry("cross-3", cross_polytope(3)));
        let s = standard_simplex(3);
        out.push(entry("simplex-3-dual", must(dual(&s))));
        out.push(entry("simplex-3", s));
        let seg = cube(1);
        for (i, p) in polygons.iter().enumerate() {
            out.push(entry(format!("{}*segment", name(i)), must(product(p, &seg))));
        }
    }
    if max_dim >= 4 {
        out.push(entry("cube-4", cube(4)));
        out.push(entry("cross-4", cross_polytope(4)));
        let s = standard_simplex(4);
        out.push(entry("simplex-4-dual", must(dual(&s))));
        out.push(entry("simplex-4", s));
        let pairs: Vec<(usize, usize)> =
            (0..polygons.len()).flat_map(|i| (i..polygons.len()).map(move |j| (i, j))).collect();
        let products: Vec<CorpusEntry> = pairs
            .par_iter()
            .map(|&(i, j)| entry(format!("{}*{}", name(i), name(j)), must(product(&polygons[i], &polygons[j]))))
            .collect();
        out.extend(products);
    }
    out
}

/// Verifies corpus members concurrently; results keep the input order.
pub fn verify_all(entries: &[CorpusEntry], opts: VerifyOptions) -> Vec<Result<VerificationReport>> {
    entries.par_iter().map(|e| verify_theorem(&e.id, &e.polytope, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::build_polytope;

    fn simplex_dual_3d() -> LatticePolytope {
        build_polytope(&[[-1, -1, -1], [3, -1, -1], [-1, 3, -1], [-1, -1, 3]]).unwrap()
    }

    #[test]
    fn square_is_a_planar_exception() {
        let r = verify_theorem("square", &cube(2), VerifyOptions::default()).unwrap();
        assert_eq!(r.levels[0].quotient.torsion, vec![2]);
        let flags = r.flags.unwrap();
        assert_eq!(flags.codim2_eq_codim1, Some(false));
        assert!(flags.codim1_eq_m && flags.codim1_eq_full);
        assert!(r.counterexample.is_none());
        assert!(r.certificates.is_empty());
        assert_eq!(r.notes.len(), 1);
        assert!(r.passed());
    }

    #[test]
    fn cube_and_simplex_dual() {
        let r = verify_theorem("cube", &cube(3), VerifyOptions { lemmas: true }).unwrap();
        assert_eq!(r.flags.unwrap().codim2_eq_codim1, Some(true));
        assert!(r.levels[1].quotient.is_trivial());
        assert_eq!(r.certificates.len(), 6);
        assert!(r.passed());

        let r = verify_theorem("s", &simplex_dual_3d(), VerifyOptions::default()).unwrap();
        assert_eq!(r.flags.unwrap().codim2_eq_codim1, Some(true));
        assert_eq!(r.levels[0].quotient.torsion, vec![4, 4]);
        assert_eq!(r.levels[0].index, LatticeIndex::Finite(16));
        assert!(r.levels[1].quotient.is_trivial());
        assert!(r.certificates.iter().all(RootCertificate::is_valid));
    }

    #[test]
    fn cube_certificates() {
        let sk = Skeleton::new(&cube(3)).unwrap();
        let cert = root_certificate(&sk, &[1, 0, 0]).unwrap();
        assert_eq!(cert.evaluate().unwrap(), vec![1, 0, 0]);
        assert!(cert.generators.len() >= 2);
        let edge_pts = sk.points(1).unwrap();
        assert!(cert.generators.iter().all(|g| edge_pts.contains(g)));

        let anchor = RootCertificate {
            root: vec![1, 0, 0],
            generators: vec![vec![1, 0, 1], vec![1, 1, 0], vec![1, 1, 1]],
            coefficients: vec![1, 1, -1],
        };
        assert!(anchor.is_valid());
        let negated = RootCertificate {
            root: vec![-1, 0, 0],
            generators: anchor.generators.iter().map(|g| g.iter().map(|x| -x).collect()).collect(),
            coefficients: anchor.coefficients.clone(),
        };
        assert!(negated.is_valid());
        assert_eq!(root_certificate(&sk, &[1, 1, 0]).unwrap_err(), VerifyError::NotARoot(vec![1, 1, 0]));
        let sq = Skeleton::new(&cube(2)).unwrap();
        assert_eq!(root_certificate(&sq, &[1, 0]).unwrap_err(), VerifyError::DimensionTooSmall(2));
    }

    #[test]
    fn non_reflexive_rejected() {
        let p = build_polytope(&[[2, 0, 0], [0, 2, 0], [0, 0, 2], [-2, -2, -2]]).unwrap();
        assert_eq!(verify_theorem("x", &p, VerifyOptions::default()).unwrap_err(), VerifyError::NotReflexive);
    }

    #[test]
    fn corpus_sizes() {
        assert_eq!(standard_corpus(2).len(), 16);
        let c3 = standard_corpus(3);
        assert_eq!(c3.len(), 16 + 4 + 16);
        assert_eq!(c3.iter().filter(|e| e.id.ends_with("*segment")).count(), 16);
        assert!(c3.iter().all(|e| is_reflexive(&e.polytope)));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = verify_theorem("s", &simplex_dual_3d(), VerifyOptions::default()).unwrap();
        let b = verify_theorem("s", &simplex_dual_3d(), VerifyOptions::default()).unwrap();
        assert_eq!(a, b);
    }
}

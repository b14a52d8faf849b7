//! Exact integer linear algebra over `i64` with checked arithmetic.
//!
//! Sublattices of ℤⁿ are stored by their row-style Hermite basis, which makes
//! lattice equality a plain structural comparison.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A point of ℤⁿ (or of the dual lattice).
pub type IntVector = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero vector has no primitive representative")]
    ZeroVector,
    #[error("empty matrix")]
    Empty,
    #[error("finite abelian group expected, found free rank {0}")]
    NotFinite(usize),
}

pub type Result<T, E = LinalgError> = std::result::Result<T, E>;

pub(crate) fn cadd(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(LinalgError::Overflow)
}

pub(crate) fn csub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(LinalgError::Overflow)
}

pub(crate) fn cmul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(LinalgError::Overflow)
}

/// Checked inner product.
pub fn dot(a: &[i64], b: &[i64]) -> Result<i64> {
    if a.len() != b.len() {
        return Err(LinalgError::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    a.iter().zip(b).try_fold(0i64, |acc, (&x, &y)| cadd(acc, cmul(x, y)?))
}

/// Checked `a * x + b * y`.
pub fn lin_comb(a: i64, x: &[i64], b: i64, y: &[i64]) -> Result<IntVector> {
    if x.len() != y.len() {
        return Err(LinalgError::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    x.iter().zip(y).map(|(&xi, &yi)| cadd(cmul(a, xi)?, cmul(b, yi)?)).collect()
}

/// Non-negative gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

/// Returns `(g, s, t)` with `s·a + t·b = g = gcd(a, b) ≥ 0`.
pub(crate) fn ext_gcd(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, csub(old_r, cmul(q, r)?)?);
        (old_s, s) = (s, csub(old_s, cmul(q, s)?)?);
        (old_t, t) = (t, csub(old_t, cmul(q, t)?)?);
    }
    if old_r < 0 {
        Ok((old_r.checked_neg().ok_or(LinalgError::Overflow)?, -old_s, -old_t))
    } else {
        Ok((old_r, old_s, old_t))
    }
}

/// Divides a nonzero vector by the gcd of its entries.
pub fn primitive(v: &[i64]) -> Result<IntVector> {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g == 0 {
        return Err(LinalgError::ZeroVector);
    }
    Ok(v.iter().map(|&x| x / g).collect())
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        IntMatrix { nrows, ncols, data: vec![0; nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows; all rows must share one length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_rows_with_width(rows, ncols)
    }

    pub(crate) fn from_rows_with_width<R: AsRef<[i64]>>(rows: &[R], ncols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(LinalgError::DimensionMismatch { expected: ncols, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix { nrows: rows.len(), ncols, data })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> + '_ {
        (0..self.nrows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<IntVector> {
        self.rows().map(<[i64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.ncols != other.nrows {
            return Err(LinalgError::DimensionMismatch { expected: self.ncols, got: other.nrows });
        }
        let mut out = Self::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.ncols {
                    out[(i, j)] = cadd(out[(i, j)], cmul(a, other[(k, j)])?)?;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `Σ c_i · row_i`.
    pub fn combine_rows(&self, coeffs: &[i64]) -> Result<IntVector> {
        if coeffs.len() != self.nrows {
            return Err(LinalgError::DimensionMismatch { expected: self.nrows, got: coeffs.len() });
        }
        let mut out = vec![0i64; self.ncols];
        for (c, row) in coeffs.iter().zip(self.rows()) {
            if *c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(row) {
                *o = cadd(*o, cmul(*c, x)?)?;
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<i64> {
        if self.nrows != self.ncols {
            return Err(LinalgError::DimensionMismatch { expected: self.nrows, got: self.ncols });
        }
        let n = self.nrows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[idx(k, k)] == 0 {
                match (k + 1..n).find(|&i| a[idx(i, k)] != 0) {
                    Some(p) => {
                        for j in 0..n {
                            a.swap(idx(k, j), idx(p, j));
                        }
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[idx(i, j)]
                        .checked_mul(a[idx(k, k)])
                        .and_then(|x| x.checked_sub(a[idx(i, k)].checked_mul(a[idx(k, j)])?))
                        .ok_or(LinalgError::Overflow)?;
                    a[idx(i, j)] = v / prev;
                }
            }
            prev = a[idx(k, k)];
        }
        i64::try_from(sign * a[idx(n - 1, n - 1)]).map_err(|_| LinalgError::Overflow)
    }

    /// Matrix with row `i` and column `j` removed.
    pub fn minor(&self, i: usize, j: usize) -> IntMatrix {
        let mut data = Vec::with_capacity((self.nrows - 1) * (self.ncols - 1));
        for r in (0..self.nrows).filter(|&r| r != i) {
            for c in (0..self.ncols).filter(|&c| c != j) {
                data.push(self[(r, c)]);
            }
        }
        IntMatrix { nrows: self.nrows - 1, ncols: self.ncols - 1, data }
    }

    /// Classical adjoint: `A · adj(A) = det(A) · I`.
    pub fn adjugate(&self) -> Result<IntMatrix> {
        let n = self.nrows;
        if n != self.ncols {
            return Err(LinalgError::DimensionMismatch { expected: n, got: self.ncols });
        }
        let mut adj = IntMatrix::zeros(n, n);
        if n == 1 {
            adj[(0, 0)] = 1;
            return Ok(adj);
        }
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).det()?;
                adj[(j, i)] = if (i + j) % 2 == 0 { c } else { -c };
            }
        }
        Ok(adj)
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[i64]) -> Result<IntVector> {
        self.rows().map(|r| dot(r, v)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.nrows {
            self.data.swap(i * self.ncols + a, i * self.ncols + b);
        }
    }

    /// `row[dst] += factor · row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: i64) -> Result<()> {
        if factor == 0 {
            return Ok(());
        }
        for j in 0..self.ncols {
            let v = cadd(self[(dst, j)], cmul(factor, self[(src, j)])?)?;
            self[(dst, j)] = v;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.ncols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    /// Multiplies columns `(p, q)` on the right by `[[a, b], [c, d]]`.
    fn mix_cols(&mut self, p: usize, q: usize, [a, b, c, d]: [i64; 4]) -> Result<()> {
        for i in 0..self.nrows {
            let (x, y) = (self[(i, p)], self[(i, q)]);
            self[(i, p)] = cadd(cmul(x, a)?, cmul(y, c)?)?;
            self[(i, q)] = cadd(cmul(x, b)?, cmul(y, d)?)?;
        }
        Ok(())
    }

    /// Replaces rows `(p, q)` by `(s·p + t·q, u·p + v·q)`.
    fn mix_rows(&mut self, p: usize, q: usize, [s, t, u, v]: [i64; 4]) -> Result<()> {
        for j in 0..self.ncols {
            let (a, b) = (self[(p, j)], self[(q, j)]);
            self[(p, j)] = cadd(cmul(s, a)?, cmul(t, b)?)?;
            self[(q, j)] = cadd(cmul(u, a)?, cmul(v, b)?)?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.ncols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Row-style Hermite normal form `U · A = H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
}

impl HermiteForm {
    /// Column index of the pivot in each of the first `rank` rows.
    pub fn pivots(&self) -> Vec<usize> {
        pivot_columns(&self.h, self.rank)
    }
}

fn pivot_columns(h: &IntMatrix, rank: usize) -> Vec<usize> {
    (0..rank).map(|i| h.row(i).iter().position(|&x| x != 0).expect("nonzero Hermite row")).collect()
}

/// Row-style Hermite normal form with positive pivots and entries above each
/// pivot reduced into `[0, pivot)`.
///
/// The rows of `u` past `rank` span the left kernel of `a`; they are replaced
/// by that kernel's own Hermite basis, and the leading rows are reduced
/// against it, which keeps `u` small.
pub fn hnf(a: &IntMatrix) -> Result<HermiteForm> {
    let (h, u, rank) = echelon(a, true)?;
    let mut u = u.expect("tracked");
    if rank < u.nrows() {
        // best effort: the unreduced transform is still valid
        if let Ok(reduced) = reduce_kernel_rows(&u, rank) {
            u = reduced;
        }
    }
    Ok(HermiteForm { h, u, rank })
}

pub(crate) fn hermite_rank(a: &IntMatrix) -> Result<usize> {
    Ok(echelon(a, false)?.2)
}

fn echelon(a: &IntMatrix, track: bool) -> Result<(IntMatrix, Option<IntMatrix>, usize)> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(LinalgError::Empty);
    }
    let mut h = a.clone();
    let mut u = track.then(|| IntMatrix::identity(a.nrows()));
    let mut rank = 0;
    for col in 0..h.ncols() {
        if rank == h.nrows() {
            break;
        }
        // Euclid on the column: the smallest entry becomes the pivot and the
        // others are reduced by nearest-integer quotients
        while let Some(p) = (rank..h.nrows()).filter(|&i| h[(i, col)] != 0).min_by_key(|&i| h[(i, col)].unsigned_abs())
        {
            h.swap_rows(rank, p);
            if let Some(u) = &mut u {
                u.swap_rows(rank, p);
            }
            let pivot = h[(rank, col)];
            let mut done = true;
            for i in rank + 1..h.nrows() {
                let q = nearest_quotient(h[(i, col)], pivot);
                if q != 0 {
                    h.add_row_multiple(i, rank, -q)?;
                    if let Some(u) = &mut u {
                        u.add_row_multiple(i, rank, -q)?;
                    }
                }
                done &= h[(i, col)] == 0;
            }
            if done {
                break;
            }
        }
        let pivot = h[(rank, col)];
        if pivot == 0 {
            continue;
        }
        if pivot < 0 {
            h.negate_row(rank);
            if let Some(u) = &mut u {
                u.negate_row(rank);
            }
        }
        let pivot = h[(rank, col)];
        for i in 0..rank {
            let q = h[(i, col)].div_euclid(pivot);
            h.add_row_multiple(i, rank, -q)?;
            if let Some(u) = &mut u {
                u.add_row_multiple(i, rank, -q)?;
            }
        }
        rank += 1;
    }
    Ok((h, u, rank))
}

/// `round(a / b)`, ties toward negative infinity.
fn nearest_quotient(a: i64, b: i64) -> i64 {
    let q = a.div_euclid(b);
    let r = a.rem_euclid(b);
    if 2 * r as i128 > b.unsigned_abs() as i128 {
        q + b.signum()
    } else {
        q
    }
}

fn reduce_kernel_rows(u: &IntMatrix, rank: usize) -> Result<IntMatrix> {
    let kernel = IntMatrix::from_rows(&u.to_rows()[rank..])?;
    // the kernel rows are independent, so this call has nothing to reduce itself
    let (k, _, _) = echelon(&kernel, false)?;
    let pivots = pivot_columns(&k, k.nrows());
    let mut out = u.clone();
    for i in 0..rank {
        for (kr, &pc) in pivots.iter().enumerate() {
            let q = out[(i, pc)].div_euclid(k[(kr, pc)]);
            for j in 0..out.ncols() {
                out[(i, j)] = csub(out[(i, j)], cmul(q, k[(kr, j)])?)?;
            }
        }
    }
    for (kr, row) in k.rows().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            out[(rank + kr, j)] = x;
        }
    }
    Ok(out)
}

/// Smith normal form `U · A · V = D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d₁ | d₂ | …`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<i64> {
        smith_diagonal(&self.d)
    }
}

fn smith_diagonal(d: &IntMatrix) -> Vec<i64> {
    (0..d.nrows().min(d.ncols())).map(|i| d[(i, i)]).collect()
}

fn is_diagonal(d: &IntMatrix) -> bool {
    (0..d.nrows()).all(|i| (0..d.ncols()).all(|j| i == j || d[(i, j)] == 0))
}

/// Alternates row and column Hermite forms until diagonal, then fixes
/// divisibility with 2 × 2 gcd steps.
pub fn snf(a: &IntMatrix) -> Result<SmithForm> {
    let (d, t) = smith(a, true)?;
    let (u, v) = t.expect("tracked");
    Ok(SmithForm { d, u, v })
}

type Transforms = Option<(IntMatrix, IntMatrix)>;

fn smith(a: &IntMatrix, track: bool) -> Result<(IntMatrix, Transforms)> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(LinalgError::Empty);
    }
    let (r, c) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut uv = track.then(|| (IntMatrix::identity(r), IntMatrix::identity(c)));
    let hermite = |m: &IntMatrix| -> Result<(IntMatrix, Option<IntMatrix>)> {
        if track {
            let hf = hnf(m)?;
            Ok((hf.h, Some(hf.u)))
        } else {
            Ok((echelon(m, false)?.0, None))
        }
    };
    // row and column Hermite forms alternate until the matrix is diagonal
    while !is_diagonal(&d) {
        let (h, u1) = hermite(&d)?;
        d = h;
        if let (Some((u, _)), Some(u1)) = (&mut uv, u1) {
            *u = u1.mul(u)?;
        }
        if is_diagonal(&d) {
            break;
        }
        let (h, v1) = hermite(&d.transpose())?;
        d = h.transpose();
        if let (Some((_, v)), Some(v1)) = (&mut uv, v1) {
            *v = v.mul(&v1.transpose())?;
        }
    }
    let k = r.min(c);
    for i in 0..k {
        if d[(i, i)] < 0 {
            d.negate_row(i);
            if let Some((u, _)) = &mut uv {
                u.negate_row(i);
            }
        }
    }
    // zeros last
    for i in 0..k {
        if d[(i, i)] == 0 {
            if let Some(j) = (i + 1..k).find(|&j| d[(j, j)] != 0) {
                d.swap_rows(i, j);
                d.swap_cols(i, j);
                if let Some((u, v)) = &mut uv {
                    u.swap_rows(i, j);
                    v.swap_cols(i, j);
                }
            }
        }
    }
    // d_i | d_j for i < j via
    // [[s, t], [-b/g, a/g]] · diag(a, b) · [[1, -t·b/g], [1, s·a/g]] = diag(g, ab/g)
    for i in 0..k {
        for j in i + 1..k {
            let (x, y) = (d[(i, i)], d[(j, j)]);
            if x == 0 || y == 0 || y % x == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(x, y)?;
            d[(i, i)] = g;
            d[(j, j)] = cmul(x / g, y)?;
            if let Some((u, v)) = &mut uv {
                u.mix_rows(i, j, [s, t, -(y / g), x / g])?;
                v.mix_cols(i, j, [1, cmul(-t, y / g)?, 1, cmul(s, x / g)?])?;
            }
        }
    }
    if let Some((u, v)) = &mut uv {
        // rows of U and columns of V past the rank are kernel vectors
        let rank = smith_diagonal(&d).iter().take_while(|&&x| x != 0).count();
        if rank < r {
            if let Ok(ru) = reduce_kernel_rows(u, rank) {
                *u = ru;
            }
        }
        if rank < c {
            if let Ok(rv) = reduce_kernel_rows(&v.transpose(), rank) {
                *v = rv.transpose();
            }
        }
    }
    Ok((d, uv))
}

/// A sublattice of ℤⁿ in canonical Hermite-basis form.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sublattice {
    ambient_dim: usize,
    basis: IntMatrix,
}

impl fmt::Debug for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sublattice(n={}, {:?})", self.ambient_dim, self.basis)
    }
}

impl Sublattice {
    pub fn zero(ambient_dim: usize) -> Self {
        Sublattice { ambient_dim, basis: IntMatrix::zeros(0, ambient_dim) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Sublattice { ambient_dim, basis: IntMatrix::identity(ambient_dim) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.basis == IntMatrix::identity(self.ambient_dim)
    }

    /// `self ⊆ other`
    pub fn is_contained_in(&self, other: &Sublattice) -> Result<bool> {
        for row in self.basis.rows() {
            if lattice_membership(other, row)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The integer span of `gens` inside ℤⁿ.
pub fn lattice_from_generators<R: AsRef<[i64]>>(gens: &[R], ambient_dim: usize) -> Result<Sublattice> {
    if gens.is_empty() || ambient_dim == 0 {
        return Ok(Sublattice::zero(ambient_dim));
    }
    let (h, _, rank) = echelon(&IntMatrix::from_rows_with_width(gens, ambient_dim)?, false)?;
    let rows: Vec<&[i64]> = (0..rank).map(|i| h.row(i)).collect();
    Ok(Sublattice { ambient_dim, basis: IntMatrix::from_rows_with_width(&rows, ambient_dim)? })
}

/// As [`lattice_from_generators`], also returning the Hermite data so basis
/// rows can be traced back to the generators (`basis_i = Σ_j u[i][j]·gens_j`).
pub(crate) fn lattice_with_transform<R: AsRef<[i64]>>(
    gens: &[R],
    ambient_dim: usize,
) -> Result<(Sublattice, Option<HermiteForm>)> {
    if gens.is_empty() || ambient_dim == 0 {
        return Ok((Sublattice::zero(ambient_dim), None));
    }
    let a = IntMatrix::from_rows_with_width(gens, ambient_dim)?;
    let hf = hnf(&a)?;
    let rows: Vec<&[i64]> = (0..hf.rank).map(|i| hf.h.row(i)).collect();
    let basis = IntMatrix::from_rows_with_width(&rows, ambient_dim)?;
    Ok((Sublattice { ambient_dim, basis }, Some(hf)))
}

/// Index of a sublattice; infinite when it is not of full rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeIndex {
    Finite(u64),
    Infinite,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(i) => write!(f, "{i}"),
            LatticeIndex::Infinite => f.write_str("infinite"),
        }
    }
}

pub fn lattice_index(sub: &Sublattice) -> LatticeIndex {
    if sub.rank() < sub.ambient_dim {
        return LatticeIndex::Infinite;
    }
    // Hermite pivots of a full-rank lattice sit on the diagonal.
    let mut idx: u64 = 1;
    for i in 0..sub.rank() {
        idx = idx.saturating_mul(sub.basis[(i, i)] as u64);
    }
    LatticeIndex::Finite(idx)
}

/// Coefficients `c` with `c · basis = v`, or `None` when `v ∉ sub`.
pub fn lattice_membership(sub: &Sublattice, v: &[i64]) -> Result<Option<IntVector>> {
    if v.len() != sub.ambient_dim {
        return Err(LinalgError::DimensionMismatch { expected: sub.ambient_dim, got: v.len() });
    }
    let mut residual = v.to_vec();
    let mut coeffs = Vec::with_capacity(sub.rank());
    for (i, &p) in pivot_columns(&sub.basis, sub.rank()).iter().enumerate() {
        // every column left of this pivot is already settled
        if residual[..p].iter().any(|&x| x != 0) {
            return Ok(None);
        }
        let pivot = sub.basis[(i, p)];
        if residual[p] % pivot != 0 {
            return Ok(None);
        }
        let c = residual[p] / pivot;
        for (r, &b) in residual.iter_mut().zip(sub.basis.row(i)) {
            *r = csub(*r, cmul(c, b)?)?;
        }
        coeffs.push(c);
    }
    if residual.iter().any(|&x| x != 0) {
        return Ok(None);
    }
    Ok(Some(coeffs))
}

/// Isomorphism invariants of a finitely generated abelian group
/// `ℤ^free_rank ⊕ ℤ/t₁ ⊕ … ⊕ ℤ/t_m`, `t_i | t_{i+1}`, `t_i > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> u64 {
        self.torsion.iter().fold(1u64, |acc, &t| acc.saturating_mul(t as u64))
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Invariants of `ℤⁿ / sub`.
pub fn quotient_invariants(sub: &Sublattice) -> Result<AbelianInvariants> {
    let free_rank = sub.ambient_dim - sub.rank();
    if sub.rank() == 0 {
        return Ok(AbelianInvariants { free_rank, torsion: vec![] });
    }
    let (d, _) = smith(&sub.basis, false)?;
    let torsion = smith_diagonal(&d).into_iter().filter(|&d| d > 1).collect();
    Ok(AbelianInvariants { free_rank, torsion })
}

//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers; there is no
//! fixed-width fast path. Lattices are always stored by their row-style
//! Hermite normal form, so two lattices are equal iff their bases are equal
//! as matrices.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type IntVector = Vec<BigInt>;

pub fn int_vector(entries: &[i64]) -> IntVector {
    entries.iter().map(|&e| BigInt::from(e)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn format_vector(v: &[BigInt]) -> String {
    v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
}

pub(crate) fn add_scaled(target: &mut [BigInt], source: &[BigInt], factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(source) {
        *t += factor * s;
    }
}

pub(crate) fn sub(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn add(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn is_zero_vector(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub(crate) fn vector_gcd(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, e| g.gcd(e))
}

/// Extended gcd with a nonnegative gcd: returns `(g, s, t)` with `s*a + t*b = g`.
pub(crate) fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Divides by the gcd of the entries. The sign is kept: for support
/// hyperplanes the orientation carries the direction of the inequality.
pub fn primitive_part(v: &[BigInt]) -> IntVector {
    let g = vector_gcd(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|e| e / &g).collect()
}

/// A rectangular integer matrix. Zero-row matrices keep their column count.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    ncols: usize,
    rows: Vec<IntVector>,
}

impl IntMatrix {
    pub fn empty(ncols: usize) -> Self {
        IntMatrix {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        IntMatrix {
            ncols,
            rows: vec![vec![BigInt::zero(); ncols]; nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(ncols: usize, rows: Vec<IntVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().position(|r| r.len() != ncols) {
            return Err(Error::invalid(format!(
                "row {} has {} entries, expected {}",
                bad,
                rows[bad].len(),
                ncols
            )));
        }
        Ok(IntMatrix { ncols, rows })
    }

    /// Convenience constructor from machine integers; panics on ragged input.
    pub fn from_i64<R: AsRef<[i64]>>(ncols: usize, rows: &[R]) -> Self {
        let rows: Vec<IntVector> = rows.iter().map(|r| int_vector(r.as_ref())).collect();
        Self::from_rows(ncols, rows).expect("ragged matrix literal")
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.rows[i][i] = e.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[IntVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<IntVector> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &IntVector {
        &self.rows[i]
    }

    pub fn push_row(&mut self, row: IntVector) {
        assert_eq!(row.len(), self.ncols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn transpose(&self) -> IntMatrix {
        let rows = (0..self.ncols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        IntMatrix {
            ncols: self.nrows(),
            rows,
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, other.nrows(), "dimension mismatch in product");
        let rows = self.rows.iter().map(|r| other.vec_mul(r)).collect();
        IntMatrix {
            ncols: other.ncols,
            rows,
        }
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[BigInt]) -> IntVector {
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    /// `v · self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(v.len(), self.nrows(), "dimension mismatch in product");
        let mut out = vec![BigInt::zero(); self.ncols];
        for (c, r) in v.iter().zip(&self.rows) {
            add_scaled(&mut out, r, c);
        }
        out
    }

    pub fn stack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, other.ncols, "column mismatch in stack");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        IntMatrix {
            ncols: self.ncols,
            rows,
        }
    }

    pub fn select_rows(&self, indices: &[usize]) -> IntMatrix {
        IntMatrix {
            ncols: self.ncols,
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Rows in lexicographic order.
    pub fn sorted(&self) -> IntMatrix {
        let mut rows = self.rows.clone();
        rows.sort();
        IntMatrix {
            ncols: self.ncols,
            rows,
        }
    }

    pub fn row_set(&self) -> std::collections::BTreeSet<IntVector> {
        self.rows.iter().cloned().collect()
    }

    pub fn negate(&self) -> IntMatrix {
        IntMatrix {
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|e| -e).collect())
                .collect(),
        }
    }

    /// The matrix with column `j` removed from each row.
    pub fn drop_column(&self, j: usize) -> IntMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.remove(j);
                r
            })
            .collect();
        IntMatrix {
            ncols: self.ncols - 1,
            rows,
        }
    }
}

impl Index<usize> for IntMatrix {
    type Output = IntVector;
    fn index(&self, i: usize) -> &IntVector {
        &self.rows[i]
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.rows[i][j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "| {} |", r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "))?;
        }
        Ok(())
    }
}

// Row operations shared by HNF and SNF. `combine` replaces rows i, j by
// s*ri + t*rj and -b*ri + a*rj, a 2x2 transform of determinant s*a + t*b = 1.
fn combine(rows: &mut [IntVector], i: usize, j: usize, c: &[BigInt; 4]) {
    let [s, t, nb, a] = c;
    let (ri, rj) = (rows[i].clone(), rows[j].clone());
    for k in 0..ri.len() {
        rows[i][k] = s * &ri[k] + t * &rj[k];
        rows[j][k] = nb * &ri[k] + a * &rj[k];
    }
}

fn combine_cols(rows: &mut [IntVector], i: usize, j: usize, c: &[BigInt; 4]) {
    let [s, t, nb, a] = c;
    for r in rows.iter_mut() {
        let (x, y) = (r[i].clone(), r[j].clone());
        r[i] = s * &x + t * &y;
        r[j] = nb * &x + a * &y;
    }
}

/// Coefficients turning (x, y) into (gcd, 0).
fn gcd_transform(x: &BigInt, y: &BigInt) -> [BigInt; 4] {
    if !x.is_zero() && y.is_multiple_of(x) {
        return [BigInt::one(), BigInt::zero(), -(y / x), BigInt::one()];
    }
    let (g, s, t) = ext_gcd(x, y);
    let a = x / &g;
    let b = y / &g;
    [s, t, -b, a]
}

struct Echelon {
    h: Vec<IntVector>,
    u: Option<Vec<IntVector>>,
    pivots: Vec<usize>,
}

fn echelon(a: &IntMatrix, with_transform: bool) -> Echelon {
    let m = a.nrows();
    let n = a.ncols();
    let mut h = a.rows.clone();
    let mut u = with_transform.then(|| IntMatrix::identity(m).rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        for i in (r + 1)..m {
            if h[i][col].is_zero() {
                continue;
            }
            let c = gcd_transform(&h[r][col], &h[i][col]);
            combine(&mut h, r, i, &c);
            if let Some(u) = u.as_mut() {
                combine(u, r, i, &c);
            }
        }
        if h[r][col].is_zero() {
            continue;
        }
        if h[r][col].is_negative() {
            for e in h[r].iter_mut() {
                *e = -&*e;
            }
            if let Some(u) = u.as_mut() {
                for e in u[r].iter_mut() {
                    *e = -&*e;
                }
            }
        }
        let pivot = h[r][col].clone();
        for i in 0..r {
            let q = h[i][col].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            let nq = -q;
            let src = h[r].clone();
            add_scaled(&mut h[i], &src, &nq);
            if let Some(u) = u.as_mut() {
                let src = u[r].clone();
                add_scaled(&mut u[i], &src, &nq);
            }
        }
        pivots.push(col);
        r += 1;
    }
    Echelon { h, u, pivots }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U·A = H`, `U`
/// unimodular, zero rows last, positive pivots in strictly increasing
/// columns and entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let e = echelon(a, true);
    (
        IntMatrix {
            ncols: a.ncols,
            rows: e.h,
        },
        IntMatrix {
            ncols: a.nrows(),
            rows: e.u.expect("transform requested"),
        },
    )
}

/// Smith normal form: returns `(S, U, V)` with `U·A·V = S` diagonal,
/// nonnegative, each diagonal entry dividing the next.
pub fn snf(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let m = a.nrows();
    let n = a.ncols();
    let mut s = a.rows.clone();
    let mut u = IntMatrix::identity(m).rows;
    let mut v = IntMatrix::identity(n).rows;
    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if s[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap(t, pi);
        u.swap(t, pi);
        for r in s.iter_mut() {
            r.swap(t, pj);
        }
        for r in v.iter_mut() {
            r.swap(t, pj);
        }
        loop {
            for i in (t + 1)..m {
                if !s[i][t].is_zero() {
                    let c = gcd_transform(&s[t][t], &s[i][t]);
                    combine(&mut s, t, i, &c);
                    combine(&mut u, t, i, &c);
                }
            }
            for j in (t + 1)..n {
                if !s[t][j].is_zero() {
                    let c = gcd_transform(&s[t][t], &s[t][j]);
                    combine_cols(&mut s, t, j, &c);
                    combine_cols(&mut v, t, j, &c);
                }
            }
            let col_clear = ((t + 1)..m).all(|i| s[i][t].is_zero());
            if !col_clear {
                continue;
            }
            let pivot = s[t][t].clone();
            let offending = ((t + 1)..m)
                .find(|&i| ((t + 1)..n).any(|j| !s[i][j].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let src = s[i].clone();
                    add_scaled(&mut s[t], &src, &BigInt::one());
                    let src = u[i].clone();
                    add_scaled(&mut u[t], &src, &BigInt::one());
                }
                None => break,
            }
        }
        if s[t][t].is_negative() {
            for e in s[t].iter_mut() {
                *e = -&*e;
            }
            for e in u[t].iter_mut() {
                *e = -&*e;
            }
        }
        t += 1;
    }
    (
        IntMatrix { ncols: n, rows: s },
        IntMatrix { ncols: m, rows: u },
        IntMatrix { ncols: n, rows: v },
    )
}

pub fn rank(a: &IntMatrix) -> usize {
    echelon(a, false).pivots.len()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &IntMatrix) -> Result<BigInt> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::invalid(format!(
            "determinant of a non-square {}x{} matrix",
            n,
            a.ncols()
        )));
    }
    let mut m = a.rows.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match ((k + 1)..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let val = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = val / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(if n == 0 { BigInt::one() } else { sign * &m[n - 1][n - 1] })
}

/// Adjugate of a square matrix: `A · adj(A) = det(A) · I`.
pub(crate) fn adjugate(a: &IntMatrix) -> IntMatrix {
    let n = a.nrows();
    let mut adj = IntMatrix::zeros(n, n);
    if n == 1 {
        adj.rows[0][0] = BigInt::one();
        return adj;
    }
    for i in 0..n {
        for j in 0..n {
            let minor_rows: Vec<IntVector> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| a.rows[r][c].clone())
                        .collect()
                })
                .collect();
            let minor = IntMatrix {
                ncols: n - 1,
                rows: minor_rows,
            };
            let d = det(&minor).expect("square minor");
            adj.rows[i][j] = if (i + j) % 2 == 0 { d } else { -d };
        }
    }
    adj
}

/// Solves `A·x = b` over the rationals; free variables are set to zero.
pub fn solve_rational_system(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigRational>> {
    assert_eq!(a.nrows(), b.len(), "right-hand side length mismatch");
    let n = a.ncols();
    let mut m: Vec<Vec<BigRational>> = a
        .rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            r.iter()
                .chain(std::iter::once(bi))
                .map(|e| BigRational::from_integer(e.clone()))
                .collect()
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for e in m[r].iter_mut() {
            *e *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let src = m[r].clone();
                for (e, s) in m[i].iter_mut().zip(&src) {
                    *e -= &f * s;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[i][n].clone();
    }
    Some(x)
}

/// Solves `A·x = b` over the integers by the HNF of `Aᵀ`; the free
/// parameters of the triangular system are set to zero.
pub fn solve_integer_system(a: &IntMatrix, b: &[BigInt]) -> Option<IntVector> {
    assert_eq!(a.nrows(), b.len(), "right-hand side length mismatch");
    let n = a.ncols();
    let e = echelon(&a.transpose(), true);
    let u = e.u.expect("transform requested");
    // U·Aᵀ = H, so A·Uᵀ = Hᵀ; solve Hᵀ·y = b by forward substitution.
    let mut y: Vec<BigInt> = Vec::with_capacity(e.pivots.len());
    for (k, &p) in e.pivots.iter().enumerate() {
        let mut rhs = b[p].clone();
        for (l, yl) in y.iter().enumerate() {
            rhs -= &e.h[l][p] * yl;
        }
        let (q, rem) = rhs.div_rem(&e.h[k][p]);
        if !rem.is_zero() {
            return None;
        }
        y.push(q);
    }
    let mut x = vec![BigInt::zero(); n];
    for (k, yk) in y.iter().enumerate() {
        add_scaled(&mut x, &u[k], yk);
    }
    if a.mul_vec(&x).as_slice() != b {
        return None;
    }
    Some(x)
}

/// A sublattice of `ZZ^d` stored by its row-style Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl LatticeBasis {
    pub fn full(d: usize) -> Self {
        LatticeBasis {
            basis: IntMatrix::identity(d),
            pivots: (0..d).collect(),
        }
    }

    /// The lattice generated by the rows of `gens` (dependent rows allowed).
    pub fn from_generators(gens: &IntMatrix) -> Self {
        let e = echelon(gens, false);
        let r = e.pivots.len();
        let mut rows = e.h;
        rows.truncate(r);
        LatticeBasis {
            basis: IntMatrix {
                ncols: gens.ncols(),
                rows,
            },
            pivots: e.pivots,
        }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_dim() && self.basis.rows.iter().enumerate().all(|(i, r)| r[i].is_one())
    }

    /// Integer coordinates of `v` with respect to the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<IntVector> {
        let mut residual = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (row, &p) in self.basis.rows.iter().zip(&self.pivots) {
            let (q, rem) = residual[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return None;
            }
            add_scaled(&mut residual, row, &-&q);
            coords.push(q);
        }
        is_zero_vector(&residual).then_some(coords)
    }

    /// Rational coordinates of `v` with respect to the basis, if `v` lies in its span.
    pub fn rational_coordinates(&self, v: &[BigInt]) -> Option<Vec<BigRational>> {
        let mut residual: Vec<BigRational> =
            v.iter().map(|e| BigRational::from_integer(e.clone())).collect();
        let mut coords = Vec::with_capacity(self.rank());
        for (row, &p) in self.basis.rows.iter().zip(&self.pivots) {
            let q = &residual[p] / BigRational::from_integer(row[p].clone());
            for (r, e) in residual.iter_mut().zip(row) {
                *r -= &q * BigRational::from_integer(e.clone());
            }
            coords.push(q);
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// The lattice vector with the given coordinates.
    pub fn element(&self, coords: &[BigInt]) -> IntVector {
        self.basis.vec_mul(coords)
    }

    /// `L ∩ {x : E·x = 0}` for the rows of `equations`.
    pub fn intersect_kernel(&self, equations: &IntMatrix) -> LatticeBasis {
        if equations.is_empty() || self.rank() == 0 {
            return self.clone();
        }
        // c·B lies in the kernel iff (E·Bᵀ)·c = 0.
        let forms = equations.mul(&self.basis.transpose());
        let coeffs = kernel_lattice(&forms);
        LatticeBasis::from_generators(&coeffs.basis.mul(&self.basis))
    }
}

/// HNF basis of `{x ∈ ZZ^d : A·x = 0}`; always a saturated lattice.
pub fn kernel_lattice(a: &IntMatrix) -> LatticeBasis {
    let d = a.ncols();
    let e = echelon(&a.transpose(), true);
    let u = e.u.expect("transform requested");
    let r = e.pivots.len();
    let kernel = IntMatrix {
        ncols: d,
        rows: u[r..].to_vec(),
    };
    LatticeBasis::from_generators(&kernel)
}

/// HNF basis of `{x ∈ ZZ^d : Σ_j c_ij x_j ≡ 0 mod c_i,d+1}`; each row of `c`
/// carries the modulus in its last entry.
pub fn congruence_lattice(c: &IntMatrix, d: usize) -> Result<LatticeBasis> {
    if c.ncols() != d + 1 {
        return Err(Error::invalid(format!(
            "congruence rows need {} entries, got {}",
            d + 1,
            c.ncols()
        )));
    }
    if let Some(row) = c.rows().iter().find(|r| !r[d].is_positive()) {
        return Err(Error::invalid(format!(
            "congruence modulus must be positive, got {}",
            row[d]
        )));
    }
    let s = c.nrows();
    if s == 0 {
        return Ok(LatticeBasis::full(d));
    }
    // a_i·x + m_i·y_i = 0 over ZZ^{d+s}, projected to the first d coordinates.
    let mut ext = IntMatrix::zeros(s, d + s);
    for (i, row) in c.rows().iter().enumerate() {
        ext.rows[i][..d].clone_from_slice(&row[..d]);
        ext.rows[i][d + i] = row[d].clone();
    }
    let kernel = kernel_lattice(&ext);
    let projected: Vec<IntVector> = kernel.basis.rows.iter().map(|r| r[..d].to_vec()).collect();
    Ok(LatticeBasis::from_generators(&IntMatrix {
        ncols: d,
        rows: projected,
    }))
}

/// `(QQ ⊗ L) ∩ ZZ^d`.
pub fn saturation(l: &LatticeBasis) -> LatticeBasis {
    let orth = kernel_lattice(l.basis());
    kernel_lattice(orth.basis())
}

/// `[super : sub]` for lattices of equal rank with `sub ⊆ super`.
pub fn lattice_index(sub: &LatticeBasis, sup: &LatticeBasis) -> Result<BigInt> {
    if sub.ambient_dim() != sup.ambient_dim() || sub.rank() != sup.rank() {
        return Err(Error::invalid(format!(
            "index needs equal rank lattices, got ranks {} and {}",
            sub.rank(),
            sup.rank()
        )));
    }
    let mut coords = Vec::with_capacity(sub.rank());
    for row in sub.basis().rows() {
        match sup.coordinates(row) {
            Some(c) => coords.push(c),
            None => {
                return Err(Error::invalid(format!(
                    "({}) is not in the containing lattice",
                    format_vector(row)
                )))
            }
        }
    }
    let m = IntMatrix {
        ncols: sub.rank(),
        rows: coords,
    };
    Ok(det(&m)?.abs())
}

/// An integral `d × r` matrix `R` with `S·R = I` for a saturated basis `S`.
pub(crate) fn right_inverse(saturated: &IntMatrix) -> IntMatrix {
    let r = saturated.nrows();
    let e = echelon(&saturated.transpose(), true);
    let u = e.u.expect("transform requested");
    debug_assert!(e.h[..r].iter().enumerate().all(|(i, row)| row[i].is_one()));
    IntMatrix {
        ncols: saturated.ncols(),
        rows: u[..r].to_vec(),
    }
    .transpose()
}

/// Congruences cutting `lattice` out of its saturation, as rows `(form | modulus)`
/// with moduli > 1 and form entries reduced into `[0, modulus)`.
pub fn congruences_of(lattice: &LatticeBasis) -> IntMatrix {
    let d = lattice.ambient_dim();
    let sat = saturation(lattice);
    let mut out = IntMatrix::empty(d + 1);
    if sat.rank() == 0 {
        return out;
    }
    let t_rows: Vec<IntVector> = lattice
        .basis()
        .rows()
        .iter()
        .map(|row| sat.coordinates(row).expect("lattice lies in its saturation"))
        .collect();
    let t = IntMatrix {
        ncols: sat.rank(),
        rows: t_rows,
    };
    let (s, _u, v) = snf(&t);
    let forms = right_inverse(sat.basis()).mul(&v);
    for i in 0..sat.rank() {
        let modulus = &s[(i, i)];
        if modulus.is_one() {
            continue;
        }
        let mut row: IntVector = forms.rows.iter().map(|r| r[i].mod_floor(modulus)).collect();
        row.push(modulus.clone());
        out.push_row(row);
    }
    out
}

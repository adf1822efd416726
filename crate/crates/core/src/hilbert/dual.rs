//! The dual algorithm: Hilbert bases by successive halfspace intersection.
//!
//! Work in coordinates of `L' = L ∩ ker(equ)`, where the cone is cut out by
//! the forms `Λ = sup·B'ᵀ`. The whole lattice is generated as a monoid by
//! `±e_j`. The first `r` forms are independent and are imposed comparing
//! elements sign-conformally in the coordinates, so each intermediate set is
//! the union of the Hilbert bases of the cone intersected with the orthants.
//! Once they are processed the cone is pointed and the remaining forms are
//! imposed on its Hilbert basis directly.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{reduce, HilbertBasisResult};
use crate::cone::lineality_vector;
use crate::error::{Error, Result};
use crate::grading::find_grading;
use crate::linalg::{det, hnf, rank, IntMatrix, IntVector, LatticeBasis};

/// Hilbert basis of `{x ∈ L : sup·x ≥ 0, equ·x = 0}`.
pub fn hilbert_basis_dual(
    sup: &IntMatrix,
    equ: &IntMatrix,
    lattice: &LatticeBasis,
    d: usize,
) -> Result<HilbertBasisResult> {
    if lattice.ambient_dim() != d {
        return Err(Error::invalid(format!(
            "lattice lives in dimension {}, expected {}",
            lattice.ambient_dim(),
            d
        )));
    }
    for (name, m) in [("inequalities", sup), ("equations", equ)] {
        if !m.is_empty() && m.ncols() != d {
            return Err(Error::invalid(format!(
                "{} have {} columns, expected {}",
                name,
                m.ncols(),
                d
            )));
        }
    }
    let sup = if sup.is_empty() { IntMatrix::empty(d) } else { sup.clone() };
    let equ = if equ.is_empty() { IntMatrix::empty(d) } else { equ.clone() };
    let sub = lattice.intersect_kernel(&equ);
    let r = sub.rank();
    let lambda = sup.mul(&sub.basis().transpose());
    if rank(&lambda) < r {
        let l = lineality_vector(&sup, &equ, d).ok_or_else(|| Error::invalid("cone is not pointed"))?;
        return Err(Error::NotPointed(l));
    }

    // seed with independent forms of small determinant, in coordinates
    // where they are in echelon shape
    let seed = independent_forms(&lambda, r);
    let (_, u) = hnf(&lambda.select_rows(&seed).transpose());
    let lambda = lambda.mul(&u.transpose());
    let mut seed_forms: Vec<IntVector> = seed.iter().map(|&i| lambda[i].clone()).collect();
    seed_forms.sort_by_key(|f| f.iter().filter(|e| !e.is_zero()).count());
    let mut order = seed_forms;
    for (i, f) in lambda.rows().iter().enumerate() {
        if !seed.contains(&i) && !order.contains(f) {
            order.push(f.clone());
        }
    }

    let coords: Vec<IntVector> = match complete::<i64>(r, &order) {
        Some(c) => c.iter().map(|v| v.iter().map(Coeff::to_big).collect()).collect(),
        None => complete::<BigInt>(r, &order).expect("exact arithmetic does not overflow"),
    };
    let coords = IntMatrix::from_rows(r, coords).expect("coordinate vectors");
    let minimal = reduce(&coords, &lambda);
    let mut basis = IntMatrix::empty(d);
    for c in minimal.rows() {
        basis.push_row(sub.element(&u.vec_mul(c)));
    }
    let rays = crate::cone::rays_from_constraints(&sup, &equ, d);
    let grading = find_grading(&rays, lattice);
    Ok(HilbertBasisResult::new(basis, grading.as_ref()))
}

/// Indices of `r` independent rows, with the smallest `|det|` when there
/// are few enough choices to try them all.
fn independent_forms(lambda: &IntMatrix, r: usize) -> Vec<usize> {
    let m = lambda.nrows();
    let mut best: Option<(BigInt, Vec<usize>)> = None;
    if binomial(m, r) <= 4096 {
        let mut subset: Vec<usize> = (0..r).collect();
        loop {
            let d = det(&lambda.select_rows(&subset)).expect("square").abs();
            if !d.is_zero() && best.as_ref().is_none_or(|(b, _)| &d < b) {
                best = Some((d, subset.clone()));
            }
            let Some(i) = (0..r).rev().find(|&i| subset[i] < m - r + i) else { break };
            subset[i] += 1;
            for j in i + 1..r {
                subset[j] = subset[j - 1] + 1;
            }
        }
    }
    if let Some((_, s)) = best {
        return s;
    }
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut trial = chosen.clone();
        trial.push(i);
        if rank(&lambda.select_rows(&trial)) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Integer arithmetic that may refuse to overflow.
trait Coeff: Clone + Ord + Hash + Debug {
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn nil() -> Self;
    fn unit() -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn sign(&self) -> i8;

    fn magnitude(&self) -> Option<Self> {
        if self.sign() < 0 {
            self.neg()
        } else {
            Some(self.clone())
        }
    }
}

impl Coeff for i64 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn sign(&self) -> i8 {
        self.signum() as i8
    }
}

impl Coeff for BigInt {
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn nil() -> Self {
        BigInt::zero()
    }
    fn unit() -> Self {
        BigInt::from(1)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

fn dot<T: Coeff>(a: &[T], b: &[T]) -> Option<T> {
    a.iter().zip(b).try_fold(T::nil(), |acc, (x, y)| acc.add(&x.mul(y)?))
}

fn add_vec<T: Coeff>(a: &[T], b: &[T]) -> Option<Vec<T>> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn sub_vec<T: Coeff>(a: &[T], b: &[T]) -> Option<Vec<T>> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

/// Runs all halfspace steps; `None` on overflow. The first `r` forms must be
/// independent.
fn complete<T: Coeff>(r: usize, order: &[IntVector]) -> Option<Vec<Vec<T>>> {
    let order: Vec<Vec<T>> = order
        .iter()
        .map(|f| f.iter().map(T::from_big).collect::<Option<Vec<T>>>())
        .collect::<Option<_>>()?;
    let mut current: Vec<Vec<T>> = Vec::with_capacity(2 * r);
    for j in 0..r {
        for positive in [true, false] {
            let mut e = vec![T::nil(); r];
            e[j] = if positive { T::unit() } else { T::unit().neg()? };
            current.push(e);
        }
    }
    let mut forms: Vec<Vec<T>> = Vec::new();
    for (i, form) in order.iter().enumerate() {
        current = if i < r {
            orthant_step(current, &forms, form)?
        } else {
            pointed_step(current, &forms, form)?
        };
        forms.push(form.clone());
        if i + 1 == r {
            current = minimal_by_forms(current, &forms)?;
        }
    }
    Some(current)
}

struct Element<T> {
    vector: Vec<T>,
    /// values of the processed forms
    key: Vec<T>,
    value: T,
}

impl<T: Coeff> Element<T> {
    fn new(vector: Vec<T>, forms: &[Vec<T>], lambda: &[T]) -> Option<Self> {
        Some(Element {
            key: forms.iter().map(|f| dot(f, &vector)).collect::<Option<_>>()?,
            value: dot(&vector, lambda)?,
            vector,
        })
    }

    /// `λ(self)` and `λ(x − self)` do not have opposite signs and the
    /// processed forms are smaller on `self`.
    fn below(&self, x: &Element<T>) -> bool {
        let conformal = match self.value.sign() {
            1 => x.value >= self.value,
            -1 => x.value <= self.value,
            _ => true,
        };
        conformal && self.key.iter().zip(&x.key).all(|(a, b)| a <= b)
    }

    fn degree(&self) -> Option<T> {
        self.key.iter().try_fold(self.value.magnitude()?, |acc, k| acc.add(k))
    }
}

fn conformal_below<T: Coeff>(g: &[T], x: &[T]) -> bool {
    g.iter().zip(x).all(|(a, b)| match a.sign() {
        0 => true,
        1 => b >= a,
        _ => b <= a,
    })
}

fn same_orthant<T: Coeff>(a: &[T], b: &[T]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.sign() * y.sign() >= 0)
}

fn opposite<T: Coeff>(a: &Element<T>, b: &Element<T>) -> bool {
    a.value.sign() * b.value.sign() < 0
}

/// Given elements of `D ∩ ZZ^r`, where `D` is cut out by `forms ≥ 0`, such
/// that every point of `D ∩ ZZ^r` is a sign-conformal sum of them, returns
/// the conformally minimal elements of `D ∩ {λ ≥ 0} ∩ ZZ^r`.
///
/// `g ⊑ x` adds to [`Element::below`] that `g` lies in the orthant of `x`
/// with `|g_j| ≤ |x_j|`. Sums of a pair in a common orthant with opposite
/// signs of `λ` are reduced modulo `⊑`; nonzero remainders join the set.
fn orthant_step<T: Coeff>(hilbert: Vec<Vec<T>>, forms: &[Vec<T>], lambda: &[T]) -> Option<Vec<Vec<T>>> {
    let precedes = |g: &Element<T>, x: &Element<T>| g.vector != x.vector && g.below(x) && conformal_below(&g.vector, &x.vector);
    let mut accepted: Vec<Element<T>> = Vec::new();
    let mut seen: HashSet<Vec<T>> = HashSet::new();
    let mut heap: BinaryHeap<Reverse<(T, Vec<T>)>> = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<Reverse<(T, Vec<T>)>>, a: &Element<T>, b: &Element<T>| -> Option<()> {
        if opposite(a, b) && same_orthant(&a.vector, &b.vector) {
            let sum = add_vec(&a.vector, &b.vector)?;
            let size = sum.iter().try_fold(T::nil(), |acc, c| acc.add(&c.magnitude()?))?;
            heap.push(Reverse((size, sum)));
        }
        Some(())
    };

    for h in hilbert {
        if seen.insert(h.clone()) {
            accepted.push(Element::new(h, forms, lambda)?);
        }
    }
    for i in 0..accepted.len() {
        for j in 0..i {
            push(&mut heap, &accepted[i], &accepted[j])?;
        }
    }
    while let Some(Reverse((_, x))) = heap.pop() {
        // normal form modulo the accepted elements
        let mut e = Element::new(x, forms, lambda)?;
        while let Some(g) = accepted.iter().find(|g| precedes(g, &e)) {
            e = Element::new(sub_vec(&e.vector, &g.vector)?, forms, lambda)?;
        }
        if e.vector.iter().all(|c| c.sign() == 0) || !seen.insert(e.vector.clone()) {
            continue;
        }
        for g in &accepted {
            push(&mut heap, &e, g)?;
        }
        accepted.push(e);
    }

    let kept: Vec<&Element<T>> = accepted.iter().filter(|e| e.value.sign() >= 0).collect();
    Some(
        kept.iter()
            .filter(|e| !kept.iter().any(|g| precedes(g, e)))
            .map(|e| e.vector.clone())
            .collect(),
    )
}

/// Drops the elements that another one is below in every form.
fn minimal_by_forms<T: Coeff>(set: Vec<Vec<T>>, forms: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let keys: Vec<Vec<T>> = set
        .iter()
        .map(|x| forms.iter().map(|f| dot(f, x)).collect::<Option<Vec<T>>>())
        .collect::<Option<_>>()?;
    Some(
        set.iter()
            .enumerate()
            .filter(|&(i, _)| {
                !keys
                    .iter()
                    .enumerate()
                    .any(|(j, k)| j != i && k != &keys[i] && k.iter().zip(&keys[i]).all(|(a, b)| a <= b))
            })
            .map(|(_, x)| x.clone())
            .collect(),
    )
}

/// Given the Hilbert basis of the pointed monoid `D ∩ ZZ^r`, returns that of
/// `D ∩ {λ ≥ 0} ∩ ZZ^r`.
///
/// The irreducible elements with respect to [`Element::below`] are produced
/// in increasing degree as sums of one with `λ > 0` and one with `λ < 0`;
/// those with `λ ≥ 0` form the result.
fn pointed_step<T: Coeff>(hilbert: Vec<Vec<T>>, forms: &[Vec<T>], lambda: &[T]) -> Option<Vec<Vec<T>>> {
    let mut accepted: Vec<Element<T>> = Vec::new();
    let mut positive: Vec<usize> = Vec::new();
    let mut negative: Vec<usize> = Vec::new();
    let mut seen: HashSet<Vec<T>> = HashSet::new();
    let mut heap: BinaryHeap<Reverse<(T, Vec<T>)>> = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<Reverse<(T, Vec<T>)>>, seen: &mut HashSet<Vec<T>>, a: &Element<T>, b: &Element<T>| -> Option<()> {
        let sum = add_vec(&a.vector, &b.vector)?;
        if seen.insert(sum.clone()) {
            let e = Element::new(sum, forms, lambda)?;
            heap.push(Reverse((e.degree()?, e.vector)));
        }
        Some(())
    };

    for h in hilbert {
        seen.insert(h.clone());
        let e = Element::new(h, forms, lambda)?;
        match e.value.sign() {
            1 => positive.push(accepted.len()),
            -1 => negative.push(accepted.len()),
            _ => {}
        }
        accepted.push(e);
    }
    for &p in &positive {
        for &n in &negative {
            push(&mut heap, &mut seen, &accepted[p], &accepted[n])?;
        }
    }
    while let Some(Reverse((_, x))) = heap.pop() {
        let e = Element::new(x, forms, lambda)?;
        if accepted.iter().any(|g| g.vector != e.vector && g.below(&e)) {
            continue;
        }
        let idx = accepted.len();
        let partners = match e.value.sign() {
            1 => {
                positive.push(idx);
                negative.clone()
            }
            -1 => {
                negative.push(idx);
                positive.clone()
            }
            _ => Vec::new(),
        };
        accepted.push(e);
        for j in partners {
            push(&mut heap, &mut seen, &accepted[idx], &accepted[j])?;
        }
    }
    Some(
        accepted
            .into_iter()
            .filter(|e| e.value.sign() >= 0)
            .map(|e| e.vector)
            .collect(),
    )
}

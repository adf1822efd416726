//! Polyhedral cones: generator/inequality conversion, extreme rays,
//! pointedness and placing triangulations.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    adjugate, det, dot, is_zero_vector, kernel_lattice, primitive_part, rank, saturation, IntMatrix, IntVector, LatticeBasis,
};

/// A cone `C = RR_+ x_1 + ... + RR_+ x_n` with its dual description.
///
/// Support hyperplanes are primitive forms lying in the linear span of `C`,
/// so they are unique even for lower-dimensional cones; `equations` is the
/// HNF basis of the orthogonal complement of the span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub ambient_dim: usize,
    pub generators: IntMatrix,
    pub support_hyperplanes: IntMatrix,
    pub equations: IntMatrix,
    pub extreme_ray_indices: Vec<usize>,
    pub pointed: bool,
}

impl Cone {
    /// Builds the full description from generators. Zero rows and exact
    /// duplicates are dropped first.
    pub fn from_generators(gens: &IntMatrix) -> Cone {
        let d = gens.ncols();
        let mut rows: Vec<IntVector> = Vec::new();
        for r in gens.rows() {
            if !is_zero_vector(r) && !rows.contains(r) {
                rows.push(r.clone());
            }
        }
        let generators = IntMatrix::from_rows(d, rows).expect("rows have ambient length");
        let (support_hyperplanes, equations) = supports_from_generators(&generators);
        let pointed = is_pointed(&support_hyperplanes, &equations, d);
        let extreme_ray_indices = if pointed {
            extreme_rays(&generators, &support_hyperplanes)
        } else {
            Vec::new()
        };
        Cone {
            ambient_dim: d,
            generators,
            support_hyperplanes,
            equations,
            extreme_ray_indices,
            pointed,
        }
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim - self.equations.nrows()
    }

    /// Primitive extreme ray generators, sorted lexicographically.
    pub fn primitive_extreme_rays(&self) -> IntMatrix {
        let rows = self
            .extreme_ray_indices
            .iter()
            .map(|&i| primitive_part(&self.generators[i]))
            .collect();
        IntMatrix::from_rows(self.ambient_dim, rows).unwrap().sorted()
    }

    /// Whether `x` satisfies every support hyperplane and equation.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.support_hyperplanes.rows().iter().all(|a| !dot(a, x).is_negative())
            && self.equations.rows().iter().all(|e| dot(e, x).is_zero())
    }

    /// A nonzero vector of the lineality space, if there is one.
    pub fn lineality_vector(&self) -> Option<IntVector> {
        lineality_vector(&self.support_hyperplanes, &self.equations, self.ambient_dim)
    }
}

/// One simplex of a triangulation: indices into the generator list, and the
/// positions (into `rays`) of the facets that are open in the half-open
/// decomposition. Facet `k` is the one opposite `rays[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCone {
    pub rays: Vec<usize>,
    pub excluded_facets: Vec<usize>,
}

pub(crate) fn lineality_vector(sup: &IntMatrix, equ: &IntMatrix, d: usize) -> Option<IntVector> {
    let both = sup.stack(equ);
    let both = if both.ncols() == d { both } else { IntMatrix::empty(d) };
    kernel_lattice(&both).basis().rows().first().cloned()
}

/// Support hyperplanes and equations of `cone(gens)`. Both are sorted
/// lexicographically; the zero cone has no hyperplanes and `equ = I`.
pub fn supports_from_generators(gens: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let d = gens.ncols();
    let equ = kernel_lattice(gens).basis().clone();
    // Facet normals inside the span are the extreme rays of the dual cone
    // {a : a·g ≥ 0, equ·a = 0}, which is pointed because cone(gens) is
    // full-dimensional in its span.
    let sup = rays_from_constraints(gens, &equ, d);
    (sup, equ)
}

/// Generators of `{x ∈ RR^d : sup·x ≥ 0, equ·x = 0}` by double description:
/// the primitive extreme rays of the pointed part together with `±` a basis
/// of the lineality space. Rows sorted lexicographically.
pub fn rays_from_constraints(sup: &IntMatrix, equ: &IntMatrix, d: usize) -> IntMatrix {
    let sup = if sup.ncols() == d { sup.clone() } else { IntMatrix::empty(d) };
    let equ = if equ.ncols() == d { equ.clone() } else { IntMatrix::empty(d) };
    let lineality = kernel_lattice(&sup.stack(&equ));
    let complement = kernel_lattice(&equ.stack(lineality.basis()));
    let mut out: Vec<IntVector> = Vec::new();
    for l in lineality.basis().rows() {
        out.push(l.clone());
        out.push(l.iter().map(|e| -e).collect());
    }
    if complement.rank() > 0 {
        let w = complement.basis();
        let forms = sup.mul(&w.transpose());
        for y in double_description(&forms) {
            out.push(primitive_part(&w.vec_mul(&y)));
        }
    }
    out.sort();
    out.dedup();
    IntMatrix::from_rows(d, out).expect("rays have ambient length")
}

/// Indices of generators spanning extreme rays: those whose zero set among
/// the support hyperplanes has rank `dim − 1`. Generators on the same ray
/// count once (the first occurrence is reported).
pub fn extreme_rays(gens: &IntMatrix, sup: &IntMatrix) -> Vec<usize> {
    let dim = rank(gens);
    if dim == 0 {
        return Vec::new();
    }
    let mut seen: Vec<IntVector> = Vec::new();
    let mut out = Vec::new();
    for (i, g) in gens.rows().iter().enumerate() {
        if is_zero_vector(g) {
            continue;
        }
        let zero: Vec<usize> = (0..sup.nrows()).filter(|&k| dot(&sup[k], g).is_zero()).collect();
        if rank(&sup.select_rows(&zero)) + 1 != dim {
            continue;
        }
        let p = primitive_part(g);
        if !seen.contains(&p) {
            seen.push(p);
            out.push(i);
        }
    }
    out
}

pub fn is_pointed(sup: &IntMatrix, equ: &IntMatrix, d: usize) -> bool {
    lineality_vector(sup, equ, d).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(n: usize) -> Self {
        ZeroSet(vec![0; n.div_ceil(64).max(1)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn intersection(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn is_subset(&self, other: &ZeroSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Extreme rays (primitive, unordered) of `{y ∈ RR^w : A·y ≥ 0}` for `A` of
/// full column rank `w ≥ 1`.
fn double_description(a: &IntMatrix) -> Vec<IntVector> {
    let m = a.nrows();
    let w = a.ncols();
    // initial simplicial cone from the first independent rows
    let mut basis_rows: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut trial = basis_rows.clone();
        trial.push(i);
        if rank(&a.select_rows(&trial)) == trial.len() {
            basis_rows = trial;
            if basis_rows.len() == w {
                break;
            }
        }
    }
    assert_eq!(basis_rows.len(), w, "constraint matrix must have full column rank");
    let base = a.select_rows(&basis_rows);
    let adj = adjugate(&base);
    let sign = det(&base).expect("square").signum();
    let mut rays: Vec<(IntVector, ZeroSet)> = Vec::with_capacity(w);
    for j in 0..w {
        // column j of the adjugate, oriented so that base·y = |det|·e_j
        let y: IntVector = (0..w).map(|i| &adj[(i, j)] * &sign).collect();
        let mut z = ZeroSet::new(m);
        for (k, &row) in basis_rows.iter().enumerate() {
            if k != j {
                z.insert(row);
            }
        }
        rays.push((primitive_part(&y), z));
    }
    for i in 0..m {
        if basis_rows.contains(&i) {
            continue;
        }
        let form = &a[i];
        let values: Vec<BigInt> = rays.iter().map(|(y, _)| dot(form, y)).collect();
        let mut next: Vec<(IntVector, ZeroSet)> = Vec::new();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_negative()).collect();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].1.intersection(&rays[n].1);
                if common.len() + 2 < w {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|r| r == p || r == n || !common.is_subset(&rays[r].1));
                if !adjacent {
                    continue;
                }
                let y: IntVector = rays[n]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(yn, yp)| &values[p] * yn - &values[n] * yp)
                    .collect();
                let mut z = common;
                z.insert(i);
                next.push((primitive_part(&y), z));
            }
        }
        for (k, (y, mut z)) in rays.into_iter().enumerate() {
            if values[k].is_negative() {
                continue;
            }
            if values[k].is_zero() {
                z.insert(i);
            }
            next.push((y, z));
        }
        rays = next;
    }
    rays.into_iter().map(|(y, _)| y).collect()
}

/// Sign of `n·(o + ε e_1 + ε² e_2 + ...)` for infinitesimal `ε`.
fn perturbed_sign(n: &[BigInt], o: &[BigInt]) -> i8 {
    let v = dot(n, o);
    let first = if !v.is_zero() {
        Some(v)
    } else {
        n.iter().find(|e| !e.is_zero()).cloned()
    };
    match first {
        Some(x) if x.is_positive() => 1,
        Some(_) => -1,
        None => 0,
    }
}

/// Normal of the hyperplane through `face` (r−1 independent vectors in
/// `ZZ^r`) oriented to be positive on `inside`.
fn face_normal(face: &IntMatrix, inside: &[BigInt]) -> IntVector {
    let k = kernel_lattice(face);
    let n = k.basis()[0].clone();
    if dot(&n, inside).is_negative() {
        n.iter().map(|e| -e).collect()
    } else {
        n
    }
}

/// Placing triangulation of the cone spanned by the generators listed in
/// `extreme`, placed in that order. The half-open decomposition uses a
/// lexicographically perturbed interior point of the first simplex, so the
/// first simplex has no open facets and later simplices open the facets
/// through which they were attached.
pub fn placing_triangulation(gens: &IntMatrix, extreme: &[usize]) -> Result<Vec<SimplicialCone>> {
    let d = gens.ncols();
    let rays = gens.select_rows(extreme);
    let span = saturation(&LatticeBasis::from_generators(&rays));
    let r = span.rank();
    if r == 0 {
        return Ok(vec![SimplicialCone {
            rays: Vec::new(),
            excluded_facets: Vec::new(),
        }]);
    }
    // full-dimensional coordinates in the span
    let coords: Vec<IntVector> = rays
        .rows()
        .iter()
        .map(|v| span.coordinates(v).expect("ray lies in its span"))
        .collect();
    let coords = IntMatrix::from_rows(r, coords).unwrap();
    let (sup, equ) = supports_from_generators(&coords);
    if let Some(l) = lineality_vector(&sup, &equ, r) {
        return Err(Error::NotPointed(span.element(&l)));
    }
    debug_assert_eq!(d, span.ambient_dim());

    let mut first: Vec<usize> = Vec::new();
    for i in 0..coords.nrows() {
        let mut trial = first.clone();
        trial.push(i);
        if rank(&coords.select_rows(&trial)) == trial.len() {
            first = trial;
            if first.len() == r {
                break;
            }
        }
    }
    let interior: IntVector = first.iter().fold(vec![BigInt::zero(); r], |acc, &i| {
        acc.iter().zip(&coords[i]).map(|(a, b)| a + b).collect()
    });

    let mut simplices: Vec<Vec<usize>> = vec![first.clone()];
    // boundary faces with inward normals
    let mut boundary: Vec<(Vec<usize>, IntVector)> = Vec::new();
    for (k, &opposite) in first.iter().enumerate() {
        let mut face = first.clone();
        face.remove(k);
        let normal = face_normal(&coords.select_rows(&face), &coords[opposite]);
        boundary.push((face, normal));
    }
    for v in 0..coords.nrows() {
        if first.contains(&v) {
            continue;
        }
        let point = &coords[v];
        let (visible, kept): (Vec<_>, Vec<_>) = boundary
            .into_iter()
            .partition(|(_, n)| dot(n, point).is_negative());
        boundary = kept;
        let mut candidates: Vec<(Vec<usize>, usize, usize)> = Vec::new();
        for (face, _) in &visible {
            let mut simplex = face.clone();
            simplex.push(v);
            simplex.sort_unstable();
            simplices.push(simplex);
            for (k, &u) in face.iter().enumerate() {
                let mut new_face = face.clone();
                new_face.remove(k);
                new_face.push(v);
                new_face.sort_unstable();
                match candidates.iter_mut().find(|(f, _, _)| *f == new_face) {
                    Some(entry) => entry.2 += 1,
                    None => candidates.push((new_face, u, 1)),
                }
            }
        }
        for (face, opposite, count) in candidates {
            if count == 1 {
                let normal = face_normal(&coords.select_rows(&face), &coords[opposite]);
                boundary.push((face, normal));
            }
        }
    }

    let mut out = Vec::with_capacity(simplices.len());
    for mut s in simplices {
        s.sort_unstable();
        let v = coords.select_rows(&s);
        let adj = adjugate(&v);
        let sign = det(&v)?.signum();
        let mut excluded = Vec::new();
        for k in 0..r {
            // inward normal of the facet opposite s[k] is column k of adj(V)
            let n: IntVector = (0..r).map(|i| &adj[(i, k)] * &sign).collect();
            if perturbed_sign(&n, &interior) < 0 {
                excluded.push(k);
            }
        }
        out.push(SimplicialCone {
            rays: s.iter().map(|&i| extreme[i]).collect(),
            excluded_facets: excluded,
        });
    }
    Ok(out)
}

/// Whether `x` lies in the half-open simplicial cone, `rays` given as rows.
#[cfg(test)]
pub(crate) fn in_half_open(rays: &IntMatrix, excluded: &[usize], x: &[BigInt]) -> bool {
    let adj = adjugate(rays);
    let sign = det(rays).expect("square").signum();
    if sign.is_zero() {
        return false;
    }
    let r = rays.nrows();
    (0..r).all(|k| {
        let n: IntVector = (0..r).map(|i| &adj[(i, k)] * &sign).collect();
        let v = dot(&n, x);
        if excluded.contains(&k) {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    })
}

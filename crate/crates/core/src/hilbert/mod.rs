//! Hilbert bases of `C ∩ L` for pointed cones `C` and lattices `L`.
//!
//! The primal route triangulates `C`, collects the lattice points of the
//! fundamental parallelepipeds and reduces them. The dual route in [`dual`]
//! works from the inequalities alone.

mod dual;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use dual::hilbert_basis_dual;

use crate::cone::{placing_triangulation, supports_from_generators, Cone, SimplicialCone};
use crate::error::{Error, Result};
use crate::grading::{find_grading, Grading};
use crate::linalg::{
    adjugate, det, primitive_part, snf, IntMatrix, IntVector, LatticeBasis,
};

/// Where a problem came from; the dual algorithm prefers the original
/// constraints when they exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemSource {
    Generators(IntMatrix),
    Constraints {
        inequalities: IntMatrix,
        equations: IntMatrix,
    },
}

/// A pointed cone together with the lattice whose points are counted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeProblem {
    pub cone: Cone,
    pub lattice: LatticeBasis,
    pub source: ProblemSource,
}

impl ConeProblem {
    pub fn from_generators(gens: &IntMatrix, lattice: LatticeBasis) -> Self {
        ConeProblem {
            cone: Cone::from_generators(gens),
            lattice,
            source: ProblemSource::Generators(gens.clone()),
        }
    }

    /// The cone `{x : inequalities·x ≥ 0, equations·x = 0}`.
    pub fn from_constraints(
        inequalities: &IntMatrix,
        equations: &IntMatrix,
        lattice: LatticeBasis,
    ) -> Result<Self> {
        let d = lattice.ambient_dim();
        if let Some(l) = crate::cone::lineality_vector(inequalities, equations, d) {
            return Err(Error::NotPointed(l));
        }
        let rays = crate::cone::rays_from_constraints(inequalities, equations, d);
        Ok(ConeProblem {
            cone: Cone::from_generators(&rays),
            lattice,
            source: ProblemSource::Constraints {
                inequalities: inequalities.clone(),
                equations: equations.clone(),
            },
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.cone.ambient_dim
    }

    /// `(inequalities, equations)` describing the cone.
    pub fn constraints(&self) -> (IntMatrix, IntMatrix) {
        match &self.source {
            ProblemSource::Constraints {
                inequalities,
                equations,
            } => (inequalities.clone(), equations.clone()),
            ProblemSource::Generators(_) => (
                self.cone.support_hyperplanes.clone(),
                self.cone.equations.clone(),
            ),
        }
    }
}

/// The minimal generating system of `C ∩ L`, in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasisResult {
    pub basis: IntMatrix,
}

impl HilbertBasisResult {
    /// Sorts by grading degree (when a grading exists) and then lexicographically.
    pub(crate) fn new(basis: IntMatrix, grading: Option<&Grading>) -> Self {
        HilbertBasisResult {
            basis: sort_by_degree(basis, grading),
        }
    }

    pub fn len(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

pub(crate) fn sort_by_degree(m: IntMatrix, grading: Option<&Grading>) -> IntMatrix {
    let ncols = m.ncols();
    let mut rows = m.into_rows();
    match grading {
        Some(g) => rows.sort_by_cached_key(|r| (g.degree(r), r.clone())),
        None => rows.sort(),
    }
    IntMatrix::from_rows(ncols, rows).unwrap()
}

/// The problem re-expressed in coordinates of `L ∩ span(C)`, where the cone
/// is full-dimensional and the lattice is `ZZ^r`.
pub(crate) struct Embedding {
    pub sublattice: LatticeBasis,
    /// primitive extreme rays, as rows in sublattice coordinates
    pub rays: IntMatrix,
    /// support forms in sublattice coordinates
    pub sup: IntMatrix,
}

impl Embedding {
    pub fn new(problem: &ConeProblem) -> Result<Self> {
        let cone = &problem.cone;
        if let Some(l) = cone.lineality_vector() {
            return Err(Error::NotPointed(l));
        }
        let sublattice = problem.lattice.intersect_kernel(&cone.equations);
        let r = sublattice.rank();
        if r != cone.dim() {
            return Err(Error::invalid(
                "cone generators do not span a subspace of the lattice's span",
            ));
        }
        let mut rays = IntMatrix::empty(r);
        for g in cone.primitive_extreme_rays().rows() {
            let q = sublattice
                .rational_coordinates(g)
                .ok_or_else(|| Error::invalid("cone generator outside the lattice's span"))?;
            let denom = q.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let scaled: IntVector = q.iter().map(|x| (x * &denom).to_integer()).collect();
            rays.push_row(primitive_part(&scaled));
        }
        let sup = supports_from_generators(&rays).0;
        Ok(Embedding {
            sublattice,
            rays,
            sup,
        })
    }

    pub fn rank(&self) -> usize {
        self.sublattice.rank()
    }

    pub fn to_ambient(&self, coords: &[BigInt]) -> IntVector {
        self.sublattice.element(coords)
    }

    pub fn triangulate(&self) -> Result<Vec<SimplicialCone>> {
        let all: Vec<usize> = (0..self.rays.nrows()).collect();
        placing_triangulation(&self.rays, &all)
    }

    /// Primitive extreme rays in ambient coordinates.
    pub fn ambient_rays(&self) -> IntMatrix {
        let mut out = IntMatrix::empty(self.sublattice.ambient_dim());
        for r in self.rays.rows() {
            out.push_row(self.to_ambient(r));
        }
        out
    }

    pub fn simplex_rays(&self, s: &SimplicialCone) -> IntMatrix {
        self.rays.select_rows(&s.rays)
    }

    /// Hilbert basis in sublattice coordinates from a triangulation and the
    /// parallelepiped points of each simplex.
    pub fn hilbert_basis(&self, pars: &[Parallelepiped]) -> IntMatrix {
        let r = self.rank();
        let mut candidates: BTreeSet<IntVector> = self.rays.rows().iter().cloned().collect();
        for par in pars {
            for n in par.local_minimal() {
                candidates.insert(par.point(n));
            }
        }
        let candidates = IntMatrix::from_rows(r, candidates.into_iter().collect()).unwrap();
        reduce(&candidates, &self.sup)
    }
}

/// Lattice points of the fundamental parallelepiped of a simplicial cone,
/// stored by their barycentric numerators: a point is `Σ (n_i / D) v_i`
/// with `0 ≤ n_i < D = |det V|`.
pub(crate) struct Parallelepiped {
    pub rays: IntMatrix,
    pub volume: BigInt,
    pub numerators: Vec<Vec<i64>>,
}

impl Parallelepiped {
    /// Enumerates `ZZ^r / (ZZ^r · V)` via the Smith form of `V`.
    pub fn new(rays: &IntMatrix) -> Result<Self> {
        let r = rays.nrows();
        if rays.ncols() != r {
            return Err(Error::invalid("parallelepiped needs a square ray matrix"));
        }
        let d = det(rays)?;
        if d.is_zero() {
            return Err(Error::invalid("parallelepiped of linearly dependent rays"));
        }
        let volume = d.abs();
        let vol = volume
            .to_i64()
            .ok_or_else(|| Error::invalid(format!("parallelepiped of volume {} is too large to enumerate", volume)))?;
        let vol128 = vol as i128;
        let sign = d.signum();
        let adj = adjugate(rays);
        let (s, _u, w) = snf(rays);
        // rows of W⁻¹ generate the quotient with orders s_i
        let w_inv = adjugate(&w).negate_if(det(&w)?.is_negative());
        let steps: Vec<Vec<i128>> = w_inv
            .rows()
            .iter()
            .map(|x| {
                adj.vec_mul(x)
                    .into_iter()
                    .map(|e| (e * &sign).mod_floor(&volume).to_i128().expect("below the volume"))
                    .collect()
            })
            .collect();
        let orders: Vec<i128> = (0..r).map(|i| s[(i, i)].to_i128().expect("divides the volume")).collect();
        let mut numerators = Vec::with_capacity(vol as usize);
        let mut counter: Vec<i128> = vec![0; r];
        let mut current: Vec<i128> = vec![0; r];
        loop {
            numerators.push(current.iter().map(|&c| c as i64).collect());
            // mixed-radix increment
            let mut k = 0;
            loop {
                if k == r {
                    return Ok(Parallelepiped {
                        rays: rays.clone(),
                        volume,
                        numerators,
                    });
                }
                counter[k] += 1;
                for (c, st) in current.iter_mut().zip(&steps[k]) {
                    *c = (*c + st) % vol128;
                }
                if counter[k] < orders[k] {
                    break;
                }
                // wrapped: undo this digit's full cycle
                counter[k] = 0;
                for (c, st) in current.iter_mut().zip(&steps[k]) {
                    *c = (*c - (st * orders[k]) % vol128).rem_euclid(vol128);
                }
                k += 1;
            }
        }
    }

    pub fn point(&self, numerators: &[i64]) -> IntVector {
        let n: IntVector = numerators.iter().map(|&x| BigInt::from(x)).collect();
        self.rays
            .vec_mul(&n)
            .into_iter()
            .map(|e| e / &self.volume)
            .collect()
    }

    /// Nonzero points minimal under the simplicial cone's own order, which
    /// compares barycentric coordinates.
    pub fn local_minimal(&self) -> Vec<&[i64]> {
        let mut order: Vec<(i128, &[i64])> = self
            .numerators
            .iter()
            .filter(|n| n.iter().any(|&e| e != 0))
            .map(|n| (n.iter().map(|&e| e as i128).sum(), n.as_slice()))
            .collect();
        order.sort_unstable();
        let mut kept: Vec<&[i64]> = Vec::new();
        for (_, n) in order {
            if !kept.iter().any(|k| k.iter().zip(n).all(|(a, b)| a <= b)) {
                kept.push(n);
            }
        }
        kept
    }
}

trait NegateIf {
    fn negate_if(self, cond: bool) -> Self;
}

impl NegateIf for IntMatrix {
    fn negate_if(self, cond: bool) -> Self {
        if cond {
            self.negate()
        } else {
            self
        }
    }
}

/// All lattice points `z ∈ L` with `z = Σ q_i V_i`, `0 ≤ q_i < 1`, sorted
/// lexicographically. `V` has one row per rank of `L`, all rows in `L`.
pub fn parallelepiped_points(v: &IntMatrix, lattice: &LatticeBasis) -> Result<IntMatrix> {
    if v.nrows() != lattice.rank() || v.ncols() != lattice.ambient_dim() {
        return Err(Error::invalid(format!(
            "expected {} rays in dimension {}",
            lattice.rank(),
            lattice.ambient_dim()
        )));
    }
    let mut coords = IntMatrix::empty(lattice.rank());
    for row in v.rows() {
        coords.push_row(
            lattice
                .coordinates(row)
                .ok_or_else(|| Error::invalid("parallelepiped ray outside the lattice"))?,
        );
    }
    let par = Parallelepiped::new(&coords)?;
    let mut points: Vec<IntVector> = par
        .numerators
        .iter()
        .map(|n| lattice.element(&par.point(n)))
        .collect();
    points.sort();
    Ok(IntMatrix::from_rows(lattice.ambient_dim(), points).unwrap())
}

/// Removes every candidate `x` for which another candidate `y` has
/// `sup·y ≤ sup·x` componentwise. Candidates must lie in the cone and the
/// lattice; the result is sorted lexicographically.
pub fn reduce(candidates: &IntMatrix, sup: &IntMatrix) -> IntMatrix {
    let mut items: Vec<(BigInt, IntVector, &IntVector)> = candidates
        .rows()
        .iter()
        .map(|x| {
            let values = sup.mul_vec(x);
            (values.iter().sum(), values, x)
        })
        .collect();
    items.sort();
    items.dedup_by(|a, b| a.2 == b.2);
    let mut kept: Vec<(IntVector, &IntVector)> = Vec::new();
    for (_, values, x) in items {
        let reducible = kept
            .iter()
            .any(|(kv, _)| kv.iter().zip(&values).all(|(a, b)| a <= b));
        if !reducible {
            kept.push((values, x));
        }
    }
    let mut rows: Vec<IntVector> = kept.into_iter().map(|(_, x)| x.clone()).collect();
    rows.sort();
    IntMatrix::from_rows(candidates.ncols(), rows).unwrap()
}

/// A problem together with its triangulation and per-simplex
/// parallelepiped points, shared by the Hilbert basis and series routines.
pub(crate) struct Triangulated {
    pub embedding: Embedding,
    pub simplices: Vec<SimplicialCone>,
    pub pars: Vec<Parallelepiped>,
}

impl Triangulated {
    pub fn new(embedding: Embedding) -> Result<Self> {
        if embedding.rank() == 0 {
            return Ok(Triangulated {
                embedding,
                simplices: Vec::new(),
                pars: Vec::new(),
            });
        }
        let simplices = embedding.triangulate()?;
        let pars = simplices
            .iter()
            .map(|s| Parallelepiped::new(&embedding.simplex_rays(s)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Triangulated {
            embedding,
            simplices,
            pars,
        })
    }

    /// The Hilbert basis in ambient coordinates, unsorted.
    pub fn hilbert_basis(&self) -> IntMatrix {
        let emb = &self.embedding;
        let mut basis = IntMatrix::empty(emb.sublattice.ambient_dim());
        if emb.rank() == 0 {
            return basis;
        }
        for c in emb.hilbert_basis(&self.pars).rows() {
            basis.push_row(emb.to_ambient(c));
        }
        basis
    }
}

/// Hilbert basis of `C ∩ L` by triangulation and parallelepiped enumeration.
pub fn hilbert_basis_primal(problem: &ConeProblem) -> Result<HilbertBasisResult> {
    let tri = Triangulated::new(Embedding::new(problem)?)?;
    let grading = find_grading(&tri.embedding.ambient_rays(), &problem.lattice);
    Ok(HilbertBasisResult::new(tri.hilbert_basis(), grading.as_ref()))
}

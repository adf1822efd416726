//! Gradings, degree-one counts and Hilbert series.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cone::SimplicialCone;
use crate::error::{Error, Result};
use crate::hilbert::{ConeProblem, Embedding, Parallelepiped, Triangulated};
use crate::linalg::{dot, primitive_part, solve_integer_system, solve_rational_system, IntMatrix, IntVector, LatticeBasis};

/// A linear form `x ↦ (weights·x) / denominator` that is integral on the
/// lattice and equals 1 on every extreme integral generator.
///
/// The denominator is 1 unless the lattice is finer in some direction than
/// any integral form can see.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub weights: IntVector,
    pub denominator: BigInt,
}

impl Grading {
    /// Degree of a lattice element.
    pub fn degree(&self, x: &[BigInt]) -> BigInt {
        dot(&self.weights, x).div_floor(&self.denominator)
    }

    pub fn rational_degree(&self, x: &[BigInt]) -> BigRational {
        BigRational::new(dot(&self.weights, x), self.denominator.clone())
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeriesData {
    /// numerator of `h(t) / (1 − t)^r`, ascending
    pub h_vector: Vec<BigInt>,
    pub rank: usize,
    /// ascending coefficients in `k`
    pub hilbert_polynomial: Vec<BigRational>,
    pub multiplicity: BigInt,
}

/// The grading `λ` with `λ(x) = 1` on the primitive generators (relative to
/// `lattice`) of the given rays, integral on `lattice`, if one exists.
///
/// The values of `λ` on the lattice basis come from the HNF solver with free
/// parameters zero; `λ` itself is the rational solution with free variables
/// zero.
pub fn find_grading(rays: &IntMatrix, lattice: &LatticeBasis) -> Option<Grading> {
    let d = lattice.ambient_dim();
    let mut coords: Vec<IntVector> = Vec::with_capacity(rays.nrows());
    for ray in rays.rows() {
        let q = lattice.rational_coordinates(ray)?;
        let denom = q.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scaled: IntVector = q.iter().map(|x| (x * &denom).to_integer()).collect();
        coords.push(primitive_part(&scaled));
    }
    let coords = IntMatrix::from_rows(lattice.rank(), coords).ok()?;
    let ones = vec![BigInt::one(); coords.nrows()];
    let mu = solve_integer_system(&coords, &ones)?;
    let lambda = solve_rational_system(lattice.basis(), &mu)?;
    let denominator = lambda.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let weights: IntVector = if lambda.is_empty() {
        vec![BigInt::zero(); d]
    } else {
        lambda.iter().map(|x| (x * &denominator).to_integer()).collect()
    };
    Some(Grading { weights, denominator })
}

/// Number of basis rows of degree 1.
pub fn height_one_count(basis: &IntMatrix, grading: &Grading) -> usize {
    basis
        .rows()
        .iter()
        .filter(|x| grading.rational_degree(x).is_one())
        .count()
}

/// Hilbert series data from a half-open triangulation with all rays of
/// degree 1; `rank` is the dimension of the cone.
pub(crate) fn series_from_parallelepipeds(
    simplices: &[SimplicialCone],
    pars: &[Parallelepiped],
    rank: usize,
) -> HilbertSeriesData {
    if rank == 0 {
        return HilbertSeriesData {
            h_vector: vec![BigInt::one()],
            rank: 0,
            hilbert_polynomial: Vec::new(),
            multiplicity: BigInt::one(),
        };
    }
    let mut h: Vec<BigInt> = Vec::new();
    for (simplex, par) in simplices.iter().zip(pars) {
        for n in &par.numerators {
            let sum: BigInt = n.iter().map(|&e| BigInt::from(e)).sum();
            let base = sum / &par.volume;
            let shift = simplex
                .excluded_facets
                .iter()
                .filter(|&&k| n[k] == 0)
                .count();
            let deg = usize::try_from(&base).expect("degree fits in usize") + shift;
            if h.len() <= deg {
                h.resize(deg + 1, BigInt::zero());
            }
            h[deg] += 1;
        }
    }
    while h.len() > 1 && h.last().is_some_and(Zero::is_zero) {
        h.pop();
    }
    let multiplicity = h.iter().sum();
    let hilbert_polynomial = hilbert_polynomial_from_h(&h, rank);
    HilbertSeriesData {
        h_vector: h,
        rank,
        hilbert_polynomial,
        multiplicity,
    }
}

/// Hilbert series of `C ∩ L` graded by `grading`, which must give every
/// extreme integral generator degree 1.
pub fn hilbert_series(problem: &ConeProblem, grading: &Grading) -> Result<HilbertSeriesData> {
    let tri = Triangulated::new(Embedding::new(problem)?)?;
    if !rays_have_degree_one(&tri.embedding.ambient_rays(), grading) {
        return Err(Error::NoGrading);
    }
    Ok(series_of(&tri))
}

pub(crate) fn series_of(tri: &Triangulated) -> HilbertSeriesData {
    series_from_parallelepipeds(&tri.simplices, &tri.pars, tri.embedding.rank())
}

/// Ascending coefficients of `Σ_i h_i · C(k − i + r − 1, r − 1)` in `k`.
/// Empty for `r = 0`.
pub fn hilbert_polynomial_from_h(h: &[BigInt], r: usize) -> Vec<BigRational> {
    if r == 0 {
        return Vec::new();
    }
    let mut factorial = BigInt::one();
    for j in 1..r {
        factorial *= j;
    }
    let mut total = vec![BigInt::zero(); r];
    for (i, hi) in h.iter().enumerate() {
        if hi.is_zero() {
            continue;
        }
        // Π_{t=1}^{r−1} (k − i + t)
        let mut poly = vec![BigInt::one()];
        for t in 1..r {
            let c = BigInt::from(t as i64 - i as i64);
            let mut next = vec![BigInt::zero(); poly.len() + 1];
            for (j, a) in poly.iter().enumerate() {
                next[j] += a * &c;
                next[j + 1] += a;
            }
            poly = next;
        }
        for (acc, a) in total.iter_mut().zip(&poly) {
            *acc += a * hi;
        }
    }
    total
        .into_iter()
        .map(|a| BigRational::new(a, factorial.clone()))
        .collect()
}

/// Evaluates an ascending polynomial at `k`.
pub fn evaluate_polynomial(coefficients: &[BigRational], k: &BigInt) -> BigRational {
    let k = BigRational::from_integer(k.clone());
    coefficients
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * &k + c)
}

pub(crate) fn rays_have_degree_one(rays: &IntMatrix, grading: &Grading) -> bool {
    rays.rows().iter().all(|r| grading.rational_degree(r).is_one())
}

//! Input types, their translation into cone problems, and the result record.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cone::supports_from_generators;
use crate::error::{Error, Result};
use crate::grading::{find_grading, height_one_count, series_of};
use crate::hilbert::{hilbert_basis_dual, sort_by_degree, ConeProblem, Embedding, ProblemSource, Triangulated};
use crate::linalg::{
    adjugate, congruence_lattice, congruences_of, det, dot, hnf, lattice_index, primitive_part, saturation, snf,
    IntMatrix, IntVector, LatticeBasis,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InputType {
    IntegralClosure,
    Normalization,
    Polytope,
    ReesAlgebra,
    Inequalities,
    Equations,
    Congruences,
    LatticeIdeal,
}

impl InputType {
    pub const ALL: [InputType; 8] = [
        InputType::IntegralClosure,
        InputType::Normalization,
        InputType::Polytope,
        InputType::ReesAlgebra,
        InputType::Inequalities,
        InputType::Equations,
        InputType::Congruences,
        InputType::LatticeIdeal,
    ];

    pub fn code(self) -> u32 {
        match self {
            InputType::IntegralClosure => 0,
            InputType::Normalization => 1,
            InputType::Polytope => 2,
            InputType::ReesAlgebra => 3,
            InputType::Inequalities => 4,
            InputType::Equations => 5,
            InputType::Congruences => 6,
            InputType::LatticeIdeal => 10,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            InputType::IntegralClosure => "integral_closure",
            InputType::Normalization => "normalization",
            InputType::Polytope => "polytope",
            InputType::ReesAlgebra => "rees_algebra",
            InputType::Inequalities => "inequalities",
            InputType::Equations => "equations",
            InputType::Congruences => "congruences",
            InputType::LatticeIdeal => "lattice_ideal",
        }
    }

    pub fn from_code(code: u32) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.code() == code)
    }

    /// Accepts the numeric code or the keyword.
    pub fn from_token(token: &str) -> Option<Self> {
        match token.parse::<u32>() {
            Ok(code) => Self::from_code(code),
            Err(_) => Self::ALL.into_iter().find(|t| t.keyword() == token),
        }
    }

    pub fn is_constraint(self) -> bool {
        matches!(
            self,
            InputType::Inequalities | InputType::Equations | InputType::Congruences
        )
    }

    /// Number of matrix columns for ambient dimension `d`.
    pub fn columns(self, d: usize) -> usize {
        if self == InputType::Congruences {
            d + 1
        } else {
            d
        }
    }
}

impl fmt::Display for InputType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputItem {
    pub matrix: IntMatrix,
    pub input_type: InputType,
}

impl InputItem {
    pub fn new(matrix: IntMatrix, input_type: InputType) -> Self {
        InputItem { matrix, input_type }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSystem {
    pub items: Vec<InputItem>,
    pub ambient_dim: usize,
}

impl InputSystem {
    pub fn new(items: Vec<InputItem>, ambient_dim: usize) -> Result<Self> {
        let system = InputSystem { items, ambient_dim };
        system.validate()?;
        Ok(system)
    }

    /// A system with one matrix; the dimension is read off its columns.
    pub fn single(matrix: IntMatrix, input_type: InputType) -> Result<Self> {
        let d = if input_type == InputType::Congruences {
            matrix
                .ncols()
                .checked_sub(1)
                .ok_or_else(|| Error::invalid("congruence matrix needs at least one column"))?
        } else {
            matrix.ncols()
        };
        InputSystem::new(vec![InputItem::new(matrix, input_type)], d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.items.is_empty() {
            return Err(Error::invalid("input system has no matrices"));
        }
        let generator_items = self.items.iter().filter(|i| !i.input_type.is_constraint()).count();
        if generator_items > 0 && self.items.len() > 1 {
            return Err(Error::invalid(
                "generator types 0, 1, 2, 3 and 10 must be the only matrix in the input",
            ));
        }
        for t in [InputType::Inequalities, InputType::Equations, InputType::Congruences] {
            if self.items.iter().filter(|i| i.input_type == t).count() > 1 {
                return Err(Error::invalid(format!("more than one matrix of type {}", t)));
            }
        }
        for item in &self.items {
            let want = item.input_type.columns(self.ambient_dim);
            if item.matrix.ncols() != want {
                return Err(Error::invalid(format!(
                    "type {} matrix has {} columns, expected {}",
                    item.input_type,
                    item.matrix.ncols(),
                    want
                )));
            }
            if item.input_type == InputType::Congruences {
                if let Some(row) = item.matrix.rows().iter().find(|r| !r[self.ambient_dim].is_positive()) {
                    return Err(Error::invalid(format!(
                        "congruence modulus must be positive, got {}",
                        row[self.ambient_dim]
                    )));
                }
            }
        }
        Ok(())
    }

    fn item(&self, t: InputType) -> Option<&IntMatrix> {
        self.items.iter().find(|i| i.input_type == t).map(|i| &i.matrix)
    }
}

/// Translates an input system into the cone and lattice it describes.
pub fn build_problem(input: &InputSystem) -> Result<ConeProblem> {
    input.validate()?;
    let d = input.ambient_dim;
    let first = &input.items[0];
    let m = &first.matrix;
    match first.input_type {
        InputType::IntegralClosure => Ok(ConeProblem::from_generators(m, LatticeBasis::full(d))),
        InputType::Normalization => Ok(ConeProblem::from_generators(m, LatticeBasis::from_generators(m))),
        InputType::Polytope => {
            let gens = append_column(m, BigInt::one());
            Ok(ConeProblem::from_generators(&gens, LatticeBasis::full(d + 1)))
        }
        InputType::ReesAlgebra => {
            let mut gens = append_column(&IntMatrix::identity(d), BigInt::zero());
            for row in append_column(m, BigInt::one()).into_rows() {
                gens.push_row(row);
            }
            Ok(ConeProblem::from_generators(&gens, LatticeBasis::full(d + 1)))
        }
        InputType::LatticeIdeal => {
            let gens = lattice_ideal_generators(m)?;
            Ok(ConeProblem::from_generators(&gens, LatticeBasis::from_generators(&gens)))
        }
        _ => {
            let inequalities = input
                .item(InputType::Inequalities)
                .cloned()
                .unwrap_or_else(|| IntMatrix::identity(d));
            let equations = input
                .item(InputType::Equations)
                .cloned()
                .unwrap_or_else(|| IntMatrix::empty(d));
            let lattice = match input.item(InputType::Congruences) {
                Some(c) => congruence_lattice(c, d)?,
                None => LatticeBasis::full(d),
            };
            ConeProblem::from_constraints(&inequalities, &equations, lattice)
        }
    }
}

fn append_column(m: &IntMatrix, value: BigInt) -> IntMatrix {
    let rows = m
        .rows()
        .iter()
        .map(|r| r.iter().cloned().chain(std::iter::once(value.clone())).collect())
        .collect();
    IntMatrix::from_rows(m.ncols() + 1, rows).unwrap()
}

/// Images of the unit vectors in `ZZ^d / Sat(Λ)`, in nonnegative
/// coordinates of the same rank.
///
/// The quotient map comes from the Smith form `U·B·V = [I 0]` of a basis `B`
/// of the saturation: `e_i ↦` row `i` of `V` without its first `rank Λ`
/// entries. If the image cone is simplicial its support forms (in
/// lexicographic order) serve as coordinates. Otherwise a unimodular change
/// of coordinates moves the images into the nonnegative orthant; among the
/// column orders, the first that lists the images in descending
/// lexicographic order is used, or failing that the one with the largest
/// image sequence.
pub fn lattice_ideal_generators(rows: &IntMatrix) -> Result<IntMatrix> {
    let d = rows.ncols();
    let sat = saturation(&LatticeBasis::from_generators(rows));
    let k = sat.rank();
    let q = d - k;
    let (_, _, v) = snf(sat.basis());
    let images: Vec<IntVector> = v.rows().iter().map(|r| r[k..].to_vec()).collect();
    let images = IntMatrix::from_rows(q, images).unwrap();
    if q == 0 {
        return Ok(images);
    }
    let (sup, _) = supports_from_generators(&images);
    let lineality = crate::cone::lineality_vector(&sup, &IntMatrix::empty(q), q);
    if let Some(l) = lineality {
        return Err(Error::NotPointed(l));
    }
    let mut p: IntVector = vec![BigInt::zero(); q];
    for a in sup.rows() {
        p = crate::linalg::add(&p, a);
    }
    if sup.nrows() == q {
        let rows = images.rows().iter().map(|g| sup.mul_vec(g)).collect();
        return Ok(IntMatrix::from_rows(q, rows).unwrap());
    }
    let p = primitive_part(&p);
    // a unimodular T whose first column is p
    let (_, u) = hnf(&IntMatrix::from_rows(1, p.iter().map(|e| vec![e.clone()]).collect()).unwrap());
    let sign = det(&u)?;
    let mut t = adjugate(&u);
    if sign.is_negative() {
        t = t.negate();
    }
    let mut cols: Vec<IntVector> = t.transpose().into_rows();
    debug_assert_eq!(cols[0], p);
    for c in cols.iter_mut().skip(1) {
        let mut shift = BigInt::zero();
        for g in images.rows() {
            let gp = dot(g, &p);
            let gc = dot(g, c);
            if gc.is_negative() && gp.is_positive() {
                let need = (-gc).div_ceil(&gp);
                if need > shift {
                    shift = need;
                }
            }
        }
        if !shift.is_zero() {
            *c = crate::linalg::add(c, &p.iter().map(|e| e * &shift).collect::<Vec<_>>());
        }
    }
    let mut best: Option<(bool, Vec<IntVector>)> = None;
    for perm in permutations(q) {
        let mapped: Vec<IntVector> = images
            .rows()
            .iter()
            .map(|g| perm.iter().map(|&j| dot(g, &cols[j])).collect())
            .collect();
        let descending = mapped.windows(2).all(|w| w[0] >= w[1]);
        let better = match &best {
            None => true,
            Some((bd, bm)) => (descending && !bd) || (descending == *bd && mapped > *bm),
        };
        if better {
            best = Some((descending, mapped));
        }
    }
    let (_, mapped) = best.expect("at least one permutation");
    Ok(IntMatrix::from_rows(q, mapped).unwrap())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut next = p.clone();
            next.insert(pos, n - 1);
            out.push(next);
        }
    }
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ComputationMode {
    #[default]
    HilbertBasis,
    SupportHyperplanesOnly,
    TriangulationOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ComputationOptions {
    /// also report `sup`, `typ`, `equ` and `cgr`
    pub all_computations: bool,
    /// also report h-vector and Hilbert polynomial
    pub hilb: bool,
    /// use the dual algorithm
    pub dual: bool,
    pub mode: ComputationMode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvValue {
    Integer(BigInt),
    Boolean(bool),
    Vector(IntVector),
    Rational(Vec<BigRational>),
}

impl fmt::Display for InvValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvValue::Integer(n) => write!(f, "{}", n),
            InvValue::Boolean(b) => write!(f, "{}", b),
            InvValue::Vector(v) => write!(f, "({})", crate::linalg::format_vector(v)),
            InvValue::Rational(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

pub mod keys {
    pub const HILBERT_BASIS_ELEMENTS: &str = "hilbert basis elements";
    pub const HEIGHT_1_ELEMENTS: &str = "height 1 elements";
    pub const HOMOGENEOUS: &str = "homogeneous";
    pub const HOMOGENEOUS_WEIGHTS: &str = "homogeneous weights";
    pub const GRADING_DENOMINATOR: &str = "grading denominator";
    pub const INDEX: &str = "index";
    pub const MULTIPLICITY: &str = "multiplicity";
    pub const NUMBER_EXTREME_RAYS: &str = "number extreme rays";
    pub const NUMBER_SUPPORT_HYPERPLANES: &str = "number support hyperplanes";
    pub const RANK: &str = "rank";
    pub const H_VECTOR: &str = "h-vector";
    pub const HILBERT_POLYNOMIAL: &str = "hilbert polynomial";
}

/// The result of a computation: the Hilbert basis and whatever else was
/// requested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    pub gen: IntMatrix,
    pub sup: Option<IntMatrix>,
    pub typ: Option<IntMatrix>,
    pub equ: Option<IntMatrix>,
    pub cgr: Option<IntMatrix>,
    pub inv: BTreeMap<String, InvValue>,
    /// `.inv` lines of unknown kind, kept verbatim
    pub inv_extra: Vec<String>,
}

impl RationalCone {
    pub fn integer(&self, key: &str) -> Option<&BigInt> {
        match self.inv.get(key) {
            Some(InvValue::Integer(n)) => Some(n),
            _ => None,
        }
    }

    pub fn boolean(&self, key: &str) -> Option<bool> {
        match self.inv.get(key) {
            Some(InvValue::Boolean(b)) => Some(*b),
            _ => None,
        }
    }

    pub fn vector(&self, key: &str) -> Option<&IntVector> {
        match self.inv.get(key) {
            Some(InvValue::Vector(v)) => Some(v),
            _ => None,
        }
    }

    pub fn rational_vector(&self, key: &str) -> Option<&Vec<BigRational>> {
        match self.inv.get(key) {
            Some(InvValue::Rational(v)) => Some(v),
            _ => None,
        }
    }
}

/// Runs the engine on an input system.
pub fn compute_cone(input: &InputSystem, opts: &ComputationOptions) -> Result<RationalCone> {
    let problem = build_problem(input)?;
    compute_problem(&problem, opts)
}

pub(crate) fn compute_problem(problem: &ConeProblem, opts: &ComputationOptions) -> Result<RationalCone> {
    let cone = &problem.cone;
    let embedding = Embedding::new(problem)?;
    let rays = embedding.ambient_rays();
    let grading = find_grading(&rays, &problem.lattice);
    let sub = embedding.sublattice.clone();
    let rank = embedding.rank();

    let needs_triangulation = match opts.mode {
        ComputationMode::SupportHyperplanesOnly => false,
        ComputationMode::TriangulationOnly => true,
        ComputationMode::HilbertBasis => !opts.dual || grading.is_some(),
    };
    let tri = if needs_triangulation {
        Some(Triangulated::new(embedding)?)
    } else {
        None
    };

    let gen = match opts.mode {
        ComputationMode::HilbertBasis if opts.dual => {
            let (ineq, equ) = problem.constraints();
            hilbert_basis_dual(&ineq, &equ, &problem.lattice, problem.ambient_dim())?.basis
        }
        ComputationMode::HilbertBasis => tri.as_ref().expect("triangulated").hilbert_basis(),
        _ => rays.clone(),
    };
    let gen = sort_by_degree(gen, grading.as_ref());

    let mut inv = BTreeMap::new();
    let int = |n: usize| InvValue::Integer(BigInt::from(n));
    if opts.mode == ComputationMode::HilbertBasis {
        inv.insert(keys::HILBERT_BASIS_ELEMENTS.to_string(), int(gen.nrows()));
        if let Some(g) = &grading {
            inv.insert(keys::HEIGHT_1_ELEMENTS.to_string(), int(height_one_count(&gen, g)));
        }
    }
    inv.insert(keys::HOMOGENEOUS.to_string(), InvValue::Boolean(grading.is_some()));
    if let Some(g) = &grading {
        inv.insert(keys::HOMOGENEOUS_WEIGHTS.to_string(), InvValue::Vector(g.weights.clone()));
        if !g.is_integral() {
            inv.insert(keys::GRADING_DENOMINATOR.to_string(), InvValue::Integer(g.denominator.clone()));
        }
    }
    let index = match &problem.source {
        ProblemSource::Generators(gens) => {
            let lat = LatticeBasis::from_generators(gens);
            lattice_index(&lat, &saturation(&lat))?
        }
        ProblemSource::Constraints { .. } => BigInt::one(),
    };
    inv.insert(keys::INDEX.to_string(), InvValue::Integer(index));
    inv.insert(keys::NUMBER_EXTREME_RAYS.to_string(), int(rays.nrows()));
    inv.insert(
        keys::NUMBER_SUPPORT_HYPERPLANES.to_string(),
        int(cone.support_hyperplanes.nrows()),
    );
    inv.insert(keys::RANK.to_string(), int(rank));
    if let (Some(tri), Some(_)) = (&tri, &grading) {
        let series = series_of(tri);
        inv.insert(keys::MULTIPLICITY.to_string(), InvValue::Integer(series.multiplicity.clone()));
        if opts.hilb || opts.mode == ComputationMode::TriangulationOnly {
            inv.insert(keys::H_VECTOR.to_string(), InvValue::Vector(series.h_vector));
            inv.insert(
                keys::HILBERT_POLYNOMIAL.to_string(),
                InvValue::Rational(series.hilbert_polynomial),
            );
        }
    }

    let full = opts.all_computations;
    let with_sup = full || opts.mode == ComputationMode::SupportHyperplanesOnly;
    let sup = cone.support_hyperplanes.clone();
    let typ = IntMatrix::from_rows(
        sup.nrows(),
        gen.rows().iter().map(|g| sup.mul_vec(g)).collect(),
    )
    .unwrap();
    Ok(RationalCone {
        typ: full.then_some(typ),
        sup: with_sup.then_some(sup),
        equ: with_sup.then(|| cone.equations.clone()),
        cgr: full.then(|| congruences_of(&sub)),
        gen,
        inv,
        inv_extra: Vec::new(),
    })
}

/// Rows of `gen` whose last coordinate is 1, with that coordinate dropped.
pub fn level_one_elements(rc: &RationalCone) -> IntMatrix {
    level_elements(&rc.gen, &BigInt::one())
}

pub(crate) fn level_elements(gen: &IntMatrix, level: &BigInt) -> IntMatrix {
    let d = gen.ncols().saturating_sub(1);
    let rows = gen
        .rows()
        .iter()
        .filter(|r| r.last() == Some(level))
        .map(|r| r[..d].to_vec())
        .collect();
    IntMatrix::from_rows(d, rows).unwrap()
}

//! Monomial subalgebras and ideals, handled through their exponent vectors.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::input::{
    compute_cone, level_elements, ComputationOptions, InputItem, InputSystem, InputType, RationalCone,
};
use crate::linalg::{is_zero_vector, IntMatrix, IntVector};

/// A polynomial ring `K[x_1, ..., x_d]`. The coefficient label is only
/// displayed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    pub coefficient_label: String,
    pub variables: Vec<String>,
}

impl RingDescriptor {
    pub fn new<S: AsRef<str>>(coefficient_label: impl Into<String>, variables: &[S]) -> Result<Self> {
        let variables: Vec<String> = variables.iter().map(|v| v.as_ref().to_string()).collect();
        if variables.is_empty() {
            return Err(Error::invalid("a ring needs at least one variable"));
        }
        for (i, v) in variables.iter().enumerate() {
            if !is_variable_name(v) {
                return Err(Error::invalid(format!("`{}` is not a valid variable name", v)));
            }
            if variables[..i].contains(v) {
                return Err(Error::invalid(format!("variable `{}` appears twice", v)));
            }
        }
        Ok(RingDescriptor {
            coefficient_label: coefficient_label.into(),
            variables,
        })
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    /// The ring with one more variable appended.
    pub fn extend(&self, name: &str) -> Result<Self> {
        let mut vars = self.variables.clone();
        vars.push(name.to_string());
        RingDescriptor::new(self.coefficient_label.clone(), &vars)
    }

    /// The first of `t, t', t0, t1, ...` that is not a variable of the ring.
    pub fn fresh_variable(&self) -> String {
        let taken = |c: &str| self.variables.iter().any(|v| v == c);
        for c in ["t", "t'"] {
            if !taken(c) {
                return c.to_string();
            }
        }
        (0..)
            .map(|i| format!("t{}", i))
            .find(|c| !taken(c))
            .expect("unbounded candidates")
    }

    /// `x^3*y` style text for an exponent vector; `1` for the empty product.
    pub fn render_monomial(&self, exponents: &[BigInt]) -> String {
        let factors: Vec<String> = self
            .variables
            .iter()
            .zip(exponents)
            .filter(|(_, e)| !e.is_zero())
            .map(|(v, e)| if e.is_one() { v.clone() } else { format!("{}^{}", v, e) })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }

    pub fn parse_monomial(&self, text: &str) -> Result<IntVector> {
        let text = text.trim();
        let mut exps = vec![BigInt::zero(); self.dim()];
        if text == "1" {
            return Ok(exps);
        }
        for factor in text.split('*') {
            let factor = factor.trim();
            let (name, power) = match factor.split_once('^') {
                Some((n, p)) => {
                    let p: BigInt = p
                        .trim()
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad exponent in `{}`", factor)))?;
                    if p.is_negative() {
                        return Err(Error::invalid(format!("negative exponent in `{}`", factor)));
                    }
                    (n.trim(), p)
                }
                None => (factor, BigInt::one()),
            };
            let idx = self
                .variables
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::invalid(format!("unknown variable `{}`", name)))?;
            exps[idx] += power;
        }
        Ok(exps)
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.coefficient_label, self.variables.join(","))
    }
}

fn is_variable_name(v: &str) -> bool {
    let mut chars = v.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() => {}
        _ => return false,
    }
    v.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn check_exponents(ring: &RingDescriptor, exponents: &IntMatrix) -> Result<()> {
    if exponents.ncols() != ring.dim() {
        return Err(Error::invalid(format!(
            "exponent rows have {} entries but the ring has {} variables",
            exponents.ncols(),
            ring.dim()
        )));
    }
    if let Some(row) = exponents.rows().iter().find(|r| r.iter().any(|e| e.is_negative())) {
        return Err(Error::invalid(format!(
            "negative exponent in ({})",
            crate::linalg::format_vector(row)
        )));
    }
    Ok(())
}

/// Deduplicated rows sorted by total degree, then lexicographically.
fn canonical_monomials(exponents: &IntMatrix) -> IntMatrix {
    let mut rows = exponents.rows().to_vec();
    rows.sort_by_cached_key(|r| (r.iter().sum::<BigInt>(), r.clone()));
    rows.dedup();
    IntMatrix::from_rows(exponents.ncols(), rows).unwrap()
}

/// The `K`-subalgebra generated by finitely many monomials.
#[derive(Clone, Debug)]
pub struct MonomialSubalgebra {
    ring: RingDescriptor,
    exponents: IntMatrix,
    cone: Option<Box<RationalCone>>,
}

impl PartialEq for MonomialSubalgebra {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.exponents == other.exponents
    }
}

impl Eq for MonomialSubalgebra {}

impl MonomialSubalgebra {
    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    /// Exponent rows of the generators, in canonical order.
    pub fn exponents(&self) -> &IntMatrix {
        &self.exponents
    }

    /// The cone computation this subalgebra came from, if any.
    pub fn rational_cone(&self) -> Option<&RationalCone> {
        self.cone.as_deref()
    }

    pub fn monomials(&self) -> Vec<String> {
        self.exponents
            .rows()
            .iter()
            .map(|r| self.ring.render_monomial(r))
            .collect()
    }

    /// Parses `[m1, m2, ...]` or a comma separated list of monomials.
    pub fn parse(ring: &RingDescriptor, text: &str) -> Result<Self> {
        let text = text.trim();
        let inner = text
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .unwrap_or(text);
        let mut m = IntMatrix::empty(ring.dim());
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            m.push_row(ring.parse_monomial(part)?);
        }
        create_monomial_subalgebra(ring, &m)
    }

    fn with_cone(ring: RingDescriptor, exponents: &IntMatrix, cone: RationalCone) -> Self {
        MonomialSubalgebra {
            ring,
            exponents: canonical_monomials(exponents),
            cone: Some(Box::new(cone)),
        }
    }
}

impl fmt::Display for MonomialSubalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.monomials().join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdealInput {
    pub ring: RingDescriptor,
    pub exponents: IntMatrix,
}

impl MonomialIdealInput {
    /// Keeps the minimal generators: rows that are multiples of another row
    /// are dropped.
    pub fn new(ring: RingDescriptor, exponents: &IntMatrix) -> Result<Self> {
        check_exponents(&ring, exponents)?;
        let rows = canonical_monomials(exponents).into_rows();
        let minimal: Vec<IntVector> = rows
            .iter()
            .filter(|r| {
                !rows
                    .iter()
                    .any(|s| s != *r && s.iter().zip(r.iter()).all(|(a, b)| a <= b))
            })
            .cloned()
            .collect();
        Ok(MonomialIdealInput {
            exponents: IntMatrix::from_rows(ring.dim(), minimal).unwrap(),
            ring,
        })
    }
}

/// Binomials `X^a − X^b`, stored as the rows `a − b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialIdealInput {
    pub ring: RingDescriptor,
    pub differences: IntMatrix,
}

impl BinomialIdealInput {
    pub fn new(ring: RingDescriptor, differences: &IntMatrix) -> Result<Self> {
        if differences.ncols() != ring.dim() {
            return Err(Error::invalid(format!(
                "binomial rows have {} entries but the ring has {} variables",
                differences.ncols(),
                ring.dim()
            )));
        }
        if differences.rows().iter().any(|r| is_zero_vector(r)) {
            return Err(Error::invalid("zero binomial row"));
        }
        Ok(BinomialIdealInput {
            ring,
            differences: differences.clone(),
        })
    }

    /// From pairs of monomials `(X^a, X^b)`.
    pub fn from_binomials(ring: RingDescriptor, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut m = IntMatrix::empty(ring.dim());
        for (a, b) in pairs {
            let a = ring.parse_monomial(a)?;
            let b = ring.parse_monomial(b)?;
            m.push_row(crate::linalg::sub(&a, &b));
        }
        BinomialIdealInput::new(ring, &m)
    }
}

pub fn create_monomial_subalgebra(ring: &RingDescriptor, monomials: &IntMatrix) -> Result<MonomialSubalgebra> {
    check_exponents(ring, monomials)?;
    Ok(MonomialSubalgebra {
        ring: ring.clone(),
        exponents: canonical_monomials(monomials),
        cone: None,
    })
}

fn run(input: InputSystem) -> Result<RationalCone> {
    compute_cone(&input, &ComputationOptions::default())
}

fn subalgebra_of(ring: &RingDescriptor, rc: RationalCone) -> MonomialSubalgebra {
    let gen = rc.gen.clone();
    MonomialSubalgebra::with_cone(ring.clone(), &gen, rc)
}

/// The integral closure of `S` in its ring: `C ∩ ZZ^d`.
pub fn intcl_toric_ring(s: &MonomialSubalgebra) -> Result<MonomialSubalgebra> {
    let rc = run(InputSystem::single(s.exponents.clone(), InputType::IntegralClosure)?)?;
    Ok(subalgebra_of(&s.ring, rc))
}

/// The normalization of `S`: `C ∩ ZZ N`.
pub fn normal_toric_ring(s: &MonomialSubalgebra) -> Result<MonomialSubalgebra> {
    let rc = run(InputSystem::single(s.exponents.clone(), InputType::Normalization)?)?;
    Ok(subalgebra_of(&s.ring, rc))
}

/// The integral closure of a monomial ideal and the normalization of its
/// Rees algebra.
///
/// Without `t_name` the Rees algebra lives in `R[t]` for a fresh `t`. A
/// `t_name` that is not a variable of `R` names the new variable; naming the
/// last variable of `R` means `R = R'[t]` and the ideal lives in `R'`.
pub fn intcl_mon_ideal(
    ideal: &MonomialIdealInput,
    t_name: Option<&str>,
) -> Result<(IntMatrix, MonomialSubalgebra)> {
    let ring = &ideal.ring;
    let (base_exponents, rees_ring) = match t_name {
        None => (ideal.exponents.clone(), ring.extend(&ring.fresh_variable())?),
        Some(t) => match ring.variables.iter().position(|v| v == t) {
            None => (ideal.exponents.clone(), ring.extend(t)?),
            Some(i) if i + 1 == ring.dim() => {
                if ideal.exponents.rows().iter().any(|r| !r[i].is_zero()) {
                    return Err(Error::invalid(format!(
                        "ideal generators involve `{}`, the Rees variable",
                        t
                    )));
                }
                (ideal.exponents.drop_column(i), ring.clone())
            }
            Some(_) => {
                return Err(Error::invalid(format!(
                    "`{}` is a variable of the ring other than the last one",
                    t
                )))
            }
        },
    };
    let rc = run(InputSystem::single(base_exponents, InputType::ReesAlgebra)?)?;
    let closure = canonical_monomials(&level_elements(&rc.gen, &BigInt::one()));
    let closure = if rees_ring.dim() == ring.dim() {
        // pad back into R = R'[t]
        let rows = closure
            .rows()
            .iter()
            .map(|r| r.iter().cloned().chain(std::iter::once(BigInt::zero())).collect())
            .collect();
        IntMatrix::from_rows(ring.dim(), rows).unwrap()
    } else {
        closure
    };
    Ok((closure, subalgebra_of(&rees_ring, rc)))
}

/// The normalization of `K[X]/P`, `P` the minimal prime of the lattice ideal
/// of the binomials, embedded in a new ring with variables
/// `{stem}1, {stem}2, ...` of the same Krull dimension.
pub fn normal_toric_ring_from_binomials(b: &BinomialIdealInput, stem: &str) -> Result<MonomialSubalgebra> {
    let rc = run(InputSystem::single(b.differences.clone(), InputType::LatticeIdeal)?)?;
    let r = rc.gen.ncols();
    let names: Vec<String> = (1..=r).map(|i| format!("{}{}", stem, i)).collect();
    let ring = if names.is_empty() {
        return Err(Error::invalid("the binomials generate a lattice of full rank"));
    } else {
        RingDescriptor::new(b.ring.coefficient_label.clone(), &names)?
    };
    Ok(subalgebra_of(&ring, rc))
}

/// `R ∩ {x^a : V·a ≥ 0}` for valuation weights `V`.
pub fn intersection_val_rings(v: &IntMatrix, ring: &RingDescriptor) -> Result<MonomialSubalgebra> {
    let d = ring.dim();
    if !v.is_empty() && v.ncols() != d {
        return Err(Error::invalid(format!("valuation rows need {} entries", d)));
    }
    let mut ineq = if v.is_empty() { IntMatrix::empty(d) } else { v.clone() };
    for row in IntMatrix::identity(d).into_rows() {
        ineq.push_row(row);
    }
    let rc = run(InputSystem::single(ineq, InputType::Inequalities)?)?;
    Ok(subalgebra_of(ring, rc))
}

/// For rows `(w_i | b_i)`: the subalgebra `R ∩ {V·a ≥ 0}` and generators of
/// the module `{x^a : V·a ≥ b}` over it.
///
/// Both come from one cone in `ZZ^{d+1}` with a level coordinate `u`:
/// `a ≥ 0`, `u ≥ 0`, `w_i·a − b_i·u ≥ 0`. Level 0 of its Hilbert basis gives
/// the subalgebra, level 1 the module generators.
pub fn intersection_val_ring_ideals(
    w: &IntMatrix,
    ring: &RingDescriptor,
) -> Result<(MonomialSubalgebra, IntMatrix)> {
    let d = ring.dim();
    if !w.is_empty() && w.ncols() != d + 1 {
        return Err(Error::invalid(format!("valuation rows need {} entries", d + 1)));
    }
    let mut ineq = IntMatrix::identity(d + 1);
    for row in w.rows() {
        let mut r = row.clone();
        r[d] = -&r[d];
        ineq.push_row(r);
    }
    let rc = run(InputSystem::single(ineq, InputType::Inequalities)?)?;
    let level0 = level_elements(&rc.gen, &BigInt::zero());
    let level1 = canonical_monomials(&level_elements(&rc.gen, &BigInt::one()));
    Ok((MonomialSubalgebra::with_cone(ring.clone(), &level0, rc), level1))
}

/// Invariants of the torus acting with weights `A`: `{a ≥ 0 : A·a = 0}`.
pub fn torus_invariants(a: &IntMatrix, ring: &RingDescriptor) -> Result<MonomialSubalgebra> {
    diag_invariants(a, &IntMatrix::empty(ring.dim() + 1), ring)
}

/// Invariants of a finite diagonal group given by congruences `(c_i | m_i)`.
pub fn finite_diag_invariants(c: &IntMatrix, ring: &RingDescriptor) -> Result<MonomialSubalgebra> {
    diag_invariants(&IntMatrix::empty(ring.dim()), c, ring)
}

/// Invariants of a diagonal group with torus weights `A` and congruences `C`.
pub fn diag_invariants(a: &IntMatrix, c: &IntMatrix, ring: &RingDescriptor) -> Result<MonomialSubalgebra> {
    let d = ring.dim();
    let a = if a.is_empty() { IntMatrix::empty(d) } else { a.clone() };
    let c = if c.is_empty() { IntMatrix::empty(d + 1) } else { c.clone() };
    let input = InputSystem::new(
        vec![
            InputItem::new(a, InputType::Equations),
            InputItem::new(c, InputType::Congruences),
        ],
        d,
    )?;
    let rc = run(input)?;
    Ok(subalgebra_of(ring, rc))
}

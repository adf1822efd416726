mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};

use common::*;
use normcone::input::keys;
use normcone::io::{format_input, parse_input, read_rational_cone, write_result_files, ProjectFiles};
use normcone::ring::{
    create_monomial_subalgebra, finite_diag_invariants, intcl_mon_ideal, intcl_toric_ring,
    normal_toric_ring_from_binomials, torus_invariants,
};
use normcone::{
    compute_cone, BinomialIdealInput, ComputationOptions, InputItem, InputSystem, InputType, InvValue,
    MonomialIdealInput, RationalCone, RingDescriptor,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn standard() -> InputSystem {
    InputSystem::single(IntMatrix::from_i64(2, &[[0, 1], [2, 3]]), InputType::IntegralClosure).unwrap()
}

use normcone::IntMatrix;

fn opts(all: bool, hilb: bool, dual: bool) -> ComputationOptions {
    ComputationOptions {
        all_computations: all,
        hilb,
        dual,
        ..Default::default()
    }
}

fn int(n: i64) -> InvValue {
    InvValue::Integer(BigInt::from(n))
}

fn vector(v: &[i64]) -> InvValue {
    InvValue::Vector(v.iter().map(|&x| BigInt::from(x)).collect())
}

fn rows(m: &IntMatrix) -> BTreeSet<Vec64> {
    to_i64(m).into_iter().collect()
}

fn set(v: &[&[i64]]) -> BTreeSet<Vec64> {
    v.iter().map(|r| r.to_vec()).collect()
}

/// Random full-dimensional cones with positive first coordinates.
fn random_cones(count: usize, seed: u64) -> Vec<Vec<Vec64>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let d = rng.gen_range(2..=4);
        let n = rng.gen_range(d..=d + 2);
        let gens: Vec<Vec64> = (0..n)
            .map(|_| {
                let mut g = vec![rng.gen_range(1..=5)];
                g.extend((1..d).map(|_| rng.gen_range(-5..=5)));
                g
            })
            .collect();
        if rank(&gens) == d {
            out.push(gens);
        }
    }
    out
}

/// Random lattice polytopes `(1, v)` with `v ∈ [−2, 2]^{d−1}`.
fn random_polytopes(count: usize, seed: u64) -> Vec<Vec<Vec64>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let d = rng.gen_range(2..=4);
        let n = rng.gen_range(d..=d + 2);
        let gens: Vec<Vec64> = (0..n)
            .map(|_| {
                let mut g = vec![1];
                g.extend((1..d).map(|_| rng.gen_range(-2..=2)));
                g
            })
            .collect();
        if rank(&gens) == d {
            out.push(gens);
        }
    }
    out
}

fn golden_invariants() -> Check {
    let rc = compute_cone(&standard(), &ComputationOptions::default()).map_err(|e| e.to_string())?;
    ensure!(
        to_i64(&rc.gen) == vec![vec![0, 1], vec![1, 2], vec![2, 3]],
        "Hilbert basis {:?}",
        to_i64(&rc.gen)
    );
    let expected = [
        (keys::HILBERT_BASIS_ELEMENTS, int(3)),
        (keys::HEIGHT_1_ELEMENTS, int(3)),
        (keys::HOMOGENEOUS, InvValue::Boolean(true)),
        (keys::HOMOGENEOUS_WEIGHTS, vector(&[-1, 1])),
        (keys::INDEX, int(2)),
        (keys::MULTIPLICITY, int(2)),
        (keys::NUMBER_EXTREME_RAYS, int(2)),
        (keys::NUMBER_SUPPORT_HYPERPLANES, int(2)),
        (keys::RANK, int(2)),
    ];
    ensure!(rc.inv.len() == expected.len(), "inv has keys {:?}", rc.inv.keys().collect::<Vec<_>>());
    for (k, v) in expected {
        ensure!(rc.inv.get(k) == Some(&v), "{} = {:?}", k, rc.inv.get(k));
    }
    Ok(())
}

fn golden_all_computations() -> Check {
    let rc = compute_cone(&standard(), &opts(true, false, false)).map_err(|e| e.to_string())?;
    let sup = rc.sup.as_ref().ok_or("no sup")?;
    ensure!(rows(sup) == set(&[&[-3, 2], &[1, 0]]), "sup {:?}", to_i64(sup));
    let typ = rc.typ.as_ref().ok_or("no typ")?;
    let gen = to_i64(&rc.gen);
    let sup = to_i64(sup);
    let product: Vec<Vec64> = gen.iter().map(|g| sup.iter().map(|s| dot(g, s)).collect()).collect();
    ensure!(to_i64(typ) == product, "typ {:?} is not gen·supᵀ", to_i64(typ));
    let mut multiset = product.clone();
    multiset.sort();
    ensure!(multiset == vec![vec![0, 2], vec![1, 1], vec![2, 0]], "typ rows {:?}", multiset);
    ensure!(rc.equ.as_ref().is_some_and(|m| m.nrows() == 0), "equ {:?}", rc.equ);
    ensure!(rc.cgr.as_ref().is_some_and(|m| m.nrows() == 0), "cgr {:?}", rc.cgr);
    Ok(())
}

fn golden_series() -> Check {
    let rc = compute_cone(&standard(), &opts(false, true, false)).map_err(|e| e.to_string())?;
    ensure!(rc.inv.get(keys::H_VECTOR) == Some(&vector(&[1, 1])), "h-vector {:?}", rc.inv.get(keys::H_VECTOR));
    let poly = InvValue::Rational(vec![BigRational::from_integer(1.into()), BigRational::from_integer(2.into())]);
    ensure!(
        rc.inv.get(keys::HILBERT_POLYNOMIAL) == Some(&poly),
        "Hilbert polynomial {:?}",
        rc.inv.get(keys::HILBERT_POLYNOMIAL)
    );
    Ok(())
}

fn ring_frontends() -> Check {
    let xy = RingDescriptor::new("K", &["x", "y"]).unwrap();
    let s = create_monomial_subalgebra(&xy, &IntMatrix::from_i64(2, &[[1, 0], [2, 3]])).map_err(|e| e.to_string())?;
    let cl = intcl_toric_ring(&s).map_err(|e| e.to_string())?;
    ensure!(cl.monomials() == vec!["x", "x*y", "x^2*y^3"], "integral closure {}", cl);

    let r4 = RingDescriptor::new("K", &["x", "y", "z", "w"]).unwrap();
    let b = BinomialIdealInput::new(r4, &IntMatrix::from_i64(4, &[[1, -1, -1, 1], [1, -2, 1, 0]]))
        .map_err(|e| e.to_string())?;
    let n = normal_toric_ring_from_binomials(&b, "t").map_err(|e| e.to_string())?;
    let gens = to_i64(n.exponents());
    ensure!(gens.len() == 4, "{} generators", gens.len());
    ensure!(rank(&gens) == 2 && gens[0].len() == 2, "generators {:?} are not of rank 2", gens);
    let target: Vec<Vec64> = vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]];
    let diffs = |g: &[Vec64]| -> Vec<Vec64> {
        let mut d = Vec::new();
        for a in g {
            for b in g {
                d.push(sub(a, b));
            }
        }
        hnf(&d)
    };
    let ours: BTreeSet<Vec64> = gens.iter().cloned().collect();
    let theirs: BTreeSet<Vec64> = target.iter().cloned().collect();
    ensure!(ours == theirs, "generators {:?}", gens);
    ensure!(diffs(&gens) == diffs(&target), "difference lattices {:?} and {:?}", diffs(&gens), diffs(&target));
    Ok(())
}

fn oracle_equivalence() -> Check {
    let cones = random_cones(50, 0x5eed);
    for gens in &cones {
        let d = gens[0].len();
        let input = InputSystem::single(matrix(d, gens), InputType::IntegralClosure).unwrap();
        let rc = compute_cone(&input, &ComputationOptions::default()).map_err(|e| format!("{:?}: {}", gens, e))?;
        let basis = to_i64(&rc.gen);
        let f = facets(gens);
        for h in &basis {
            ensure!(h.iter().any(|&x| x != 0) && in_cone(&f, h), "{:?}: {:?} is not in the cone", gens, h);
            for g in &basis {
                ensure!(g == h || !in_cone(&f, &sub(h, g)), "{:?}: {:?} = {:?} + ...", gens, h, g);
            }
        }
        let mut points = Vec::new();
        for level in 1..=6 {
            points.extend(box_points(d, level, 5 * level).into_iter().filter(|p| in_cone(&f, p)));
        }
        let low: Vec<Vec64> = basis.iter().filter(|h| h[0] <= 6).cloned().collect();
        let ok = representable(&points, &low);
        if let Some(i) = ok.iter().position(|&r| !r) {
            return Err(format!("{:?}: {:?} is not generated", gens, points[i]));
        }
    }
    Ok(())
}

/// Random constraint systems with small coefficients; some are not pointed.
fn random_constraints(count: usize, seed: u64) -> Vec<InputSystem> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.gen_range(2..=4);
            let m = rng.gen_range(d..=d + 3);
            let rows: Vec<Vec64> = (0..m).map(|_| (0..d).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            let mut items = vec![InputItem::new(matrix(d, &rows), InputType::Inequalities)];
            if rng.gen_bool(0.3) {
                let e: Vec64 = (0..d).map(|_| rng.gen_range(-2..=2)).collect();
                items.push(InputItem::new(matrix(d, &[e]), InputType::Equations));
            }
            if rng.gen_bool(0.3) {
                let mut c: Vec64 = (0..d).map(|_| rng.gen_range(0..=3)).collect();
                c.push(rng.gen_range(2..=4));
                items.push(InputItem::new(matrix(d + 1, &[c]), InputType::Congruences));
            }
            InputSystem::new(items, d).unwrap()
        })
        .collect()
}

fn primal_dual_agreement() -> Check {
    let mut problems: Vec<InputSystem> = vec![
        standard(),
        InputSystem::single(IntMatrix::from_i64(2, &[[-3, 2], [1, 0]]), InputType::Inequalities).unwrap(),
        InputSystem::single(IntMatrix::from_i64(3, &[[1, 1, -1]]), InputType::Equations).unwrap(),
        InputSystem::single(IntMatrix::from_i64(3, &[[1, 1, 2]]), InputType::Congruences).unwrap(),
        InputSystem::new(
            vec![
                InputItem::new(IntMatrix::from_i64(3, &[[1, 1, -1]]), InputType::Equations),
                InputItem::new(IntMatrix::from_i64(4, &[[1, 2, 0, 3]]), InputType::Congruences),
            ],
            3,
        )
        .unwrap(),
    ];
    for gens in random_polytopes(20, 7) {
        let d = gens[0].len();
        problems.push(InputSystem::single(matrix(d, &gens), InputType::IntegralClosure).unwrap());
        problems.push(InputSystem::single(matrix(d, &facets(&gens)), InputType::Inequalities).unwrap());
    }
    problems.extend(random_constraints(150, 11));
    let mut pointed = 0;
    for p in &problems {
        let primal = compute_cone(p, &opts(false, false, false));
        let dual = compute_cone(p, &opts(false, false, true));
        match (primal, dual) {
            (Ok(a), Ok(b)) => {
                pointed += 1;
                ensure!(
                    a.gen == b.gen,
                    "{:?}: primal {:?} dual {:?}",
                    p.items,
                    to_i64(&a.gen),
                    to_i64(&b.gen)
                );
            }
            (Err(a), Err(b)) => ensure!(a.to_string() == b.to_string(), "{:?}: errors {} and {}", p.items, a, b),
            (a, b) => return Err(format!("{:?}: primal {:?} dual {:?}", p.items, a.map(|_| ()), b.map(|_| ()))),
        }
    }
    ensure!(pointed >= 100, "only {} pointed problems", pointed);
    Ok(())
}

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

fn check_series(name: &str, rc: &RationalCone, counts: &[i64]) -> Check {
    let Some(InvValue::Vector(h)) = rc.inv.get(keys::H_VECTOR) else {
        return Err(format!("{}: no h-vector", name));
    };
    let Some(InvValue::Rational(poly)) = rc.inv.get(keys::HILBERT_POLYNOMIAL) else {
        return Err(format!("{}: no Hilbert polynomial", name));
    };
    let r = poly.len() as i64;
    for (k, &count) in counts.iter().enumerate() {
        let k = k as i64;
        let series: BigInt = h
            .iter()
            .enumerate()
            .map(|(i, hi)| hi * binomial(k - i as i64 + r - 1, r - 1))
            .sum();
        ensure!(series == BigInt::from(count), "{}: series gives {} points in degree {}, counted {}", name, series, k, count);
        if k > h.len() as i64 - 1 - r {
            let value: BigRational = poly
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(k).pow(i as u32)))
                .sum();
            ensure!(
                value == BigRational::from_integer(count.into()),
                "{}: polynomial gives {} in degree {}, counted {}",
                name,
                value,
                k,
                count
            );
        }
    }
    Ok(())
}

fn series_oracle() -> Check {
    let rc = compute_cone(&standard(), &opts(false, true, false)).map_err(|e| e.to_string())?;
    let f = facets(&[vec![0, 1], vec![2, 3]]);
    let counts: Vec<i64> = (0..=8)
        .map(|k| (0..=3 * k).filter(|&x| in_cone(&f, &[x, x + k])).count() as i64)
        .collect();
    check_series("example", &rc, &counts)?;

    for gens in random_polytopes(20, 7) {
        let d = gens[0].len();
        let input = InputSystem::single(matrix(d, &gens), InputType::IntegralClosure).unwrap();
        let rc = compute_cone(&input, &opts(false, true, false)).map_err(|e| e.to_string())?;
        let f = facets(&gens);
        let counts: Vec<i64> = (0..=8)
            .map(|k| box_points(d, k, 2 * k).iter().filter(|p| in_cone(&f, p)).count() as i64)
            .collect();
        check_series(&format!("{:?}", gens), &rc, &counts)?;
    }
    Ok(())
}

fn ideal_closure() -> Check {
    let xy = RingDescriptor::new("K", &["x", "y"]).unwrap();
    let ideal = MonomialIdealInput::new(xy, &IntMatrix::from_i64(2, &[[2, 0], [0, 2]])).map_err(|e| e.to_string())?;
    let (closure, _) = intcl_mon_ideal(&ideal, None).map_err(|e| e.to_string())?;
    let got = rows(&closure);
    ensure!(got == set(&[&[2, 0], &[1, 1], &[0, 2]]), "closure {:?}", got);

    // (a, 1) in the cone over (e_i, 0) and (g_j, 1)
    let rees = facets(&[vec![1, 0, 0], vec![0, 1, 0], vec![2, 0, 1], vec![0, 2, 1]]);
    let members: Vec<Vec64> = monomials_up_to(2, 4)
        .into_iter()
        .filter(|a| in_cone(&rees, &[a[0], a[1], 1]))
        .collect();
    let minimal: BTreeSet<Vec64> = members
        .iter()
        .filter(|a| !members.iter().any(|b| b != *a && b.iter().zip(a.iter()).all(|(x, y)| x <= y)))
        .cloned()
        .collect();
    ensure!(got == minimal, "closure {:?}, oracle {:?}", got, minimal);
    Ok(())
}

fn random_input(rng: &mut StdRng) -> InputSystem {
    let d = rng.gen_range(1..=4);
    let random_rows = |rng: &mut StdRng, ncols: usize| -> IntMatrix {
        let n = rng.gen_range(0..=3);
        let rows: Vec<Vec64> = (0..n).map(|_| (0..ncols).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        matrix(ncols, &rows)
    };
    if rng.gen_bool(0.4) {
        let t = [
            InputType::IntegralClosure,
            InputType::Normalization,
            InputType::Polytope,
            InputType::ReesAlgebra,
            InputType::LatticeIdeal,
        ][rng.gen_range(0..5)];
        let m = random_rows(rng, d);
        return InputSystem::single(m, t).unwrap();
    }
    let mut items = Vec::new();
    for t in [InputType::Inequalities, InputType::Equations, InputType::Congruences] {
        if rng.gen_bool(0.6) {
            let mut m = random_rows(rng, t.columns(d));
            if t == InputType::Congruences {
                let rows: Vec<Vec64> = to_i64(&m)
                    .into_iter()
                    .map(|mut r| {
                        r[d] = rng.gen_range(1..=7);
                        r
                    })
                    .collect();
                m = matrix(d + 1, &rows);
            }
            items.push(InputItem::new(m, t));
        }
    }
    if items.is_empty() {
        items.push(InputItem::new(IntMatrix::identity(d), InputType::Inequalities));
    }
    InputSystem::new(items, d).unwrap()
}

fn file_protocol() -> Check {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..200 {
        let input = random_input(&mut rng);
        let text = format_input(&input);
        let back = parse_input(&text).map_err(|e| format!("{}: {}", text, e))?;
        ensure!(back == input, "input round trip changed {:?}", text);
        ensure!(format_input(&back) == text, "input serialization is not deterministic");
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = ProjectFiles::new(dir.path().join("a"));
    let b = ProjectFiles::new(dir.path().join("b"));
    let suffixes = ["gen", "sup", "typ", "equ", "cgr", "inv", "out"];
    let mut cones = vec![compute_cone(&standard(), &opts(true, true, false)).unwrap()];
    for gens in random_cones(15, 3) {
        let d = gens[0].len();
        let input = InputSystem::single(matrix(d, &gens), InputType::IntegralClosure).unwrap();
        let all = rng.gen_bool(0.5);
        let mut rc = compute_cone(&input, &opts(all, true, false)).map_err(|e| e.to_string())?;
        if rng.gen_bool(0.3) {
            rc.inv_extra.push(format!("matrix 1 1 note = {}", rng.gen_range(0..100)));
        }
        cones.push(rc);
    }
    for rc in &cones {
        write_result_files(rc, &a).map_err(|e| e.to_string())?;
        write_result_files(rc, &b).map_err(|e| e.to_string())?;
        for s in suffixes {
            let x = std::fs::read(a.with_suffix(s)).ok();
            let y = std::fs::read(b.with_suffix(s)).ok();
            ensure!(x == y, ".{} differs between two writes", s);
        }
        let back = read_rational_cone(&a).map_err(|e| e.to_string())?;
        ensure!(&back == rc, "result round trip changed {:?}", to_i64(&rc.gen));
    }

    write_result_files(&cones[0], &a).map_err(|e| e.to_string())?;
    let gen = std::fs::read_to_string(a.with_suffix("gen")).map_err(|e| e.to_string())?;
    ensure!(gen == "3 2\n0 1\n1 2\n2 3\n", ".gen is {:?}", gen);
    Ok(())
}

/// Exhaustive check of a monomial subalgebra against a membership predicate
/// through total degree 4.
fn check_invariants(name: &str, got: &[Vec64], invariant: impl Fn(&[i64]) -> bool, d: usize) -> Check {
    let members: Vec<Vec64> = monomials_up_to(d, 4).into_iter().filter(|a| invariant(a)).collect();
    for g in got {
        ensure!(invariant(g), "{}: generator {:?} is not invariant", name, g);
    }
    let low: Vec<Vec64> = got.iter().filter(|g| g.iter().sum::<i64>() <= 4).cloned().collect();
    let ok = representable(&members, &low);
    if let Some(i) = ok.iter().position(|&r| !r) {
        return Err(format!("{}: invariant {:?} is not generated", name, members[i]));
    }
    let set: HashSet<&Vec64> = members.iter().collect();
    for g in &low {
        for h in &members {
            let rest = sub(g, h);
            ensure!(
                h == g || h.iter().all(|&x| x == 0) || !set.contains(&rest),
                "{}: generator {:?} is reducible",
                name,
                g
            );
        }
    }
    Ok(())
}

fn invariant_rings() -> Check {
    let xyz = RingDescriptor::new("K", &["x", "y", "z"]).unwrap();
    let t = torus_invariants(&IntMatrix::from_i64(3, &[[1, 1, -1]]), &xyz).map_err(|e| e.to_string())?;
    ensure!(rows(t.exponents()) == set(&[&[1, 0, 1], &[0, 1, 1]]), "torus invariants {}", t);
    check_invariants("torus", &to_i64(t.exponents()), |a| a[0] + a[1] - a[2] == 0, 3)?;

    let xy = RingDescriptor::new("K", &["x", "y"]).unwrap();
    let f = finite_diag_invariants(&IntMatrix::from_i64(3, &[[1, 1, 2]]), &xy).map_err(|e| e.to_string())?;
    ensure!(rows(f.exponents()) == set(&[&[2, 0], &[1, 1], &[0, 2]]), "finite group invariants {}", f);
    check_invariants("finite group", &to_i64(f.exponents()), |a| (a[0] + a[1]) % 2 == 0, 2)?;
    Ok(())
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        ("golden run: Hilbert basis and invariants", golden_invariants),
        ("golden run: all computations", golden_all_computations),
        ("golden run: Hilbert series", golden_series),
        ("ring frontends", ring_frontends),
        ("oracle equivalence on random cones", oracle_equivalence),
        ("primal/dual agreement", primal_dual_agreement),
        ("series oracle", series_oracle),
        ("integral closure of ideals", ideal_closure),
        ("file protocol", file_protocol),
        ("invariant rings", invariant_rings),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".to_string()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("[PASS] {:>2} {} ({:.2}s)", i + 1, name, secs),
            Err(e) => {
                failed += 1;
                println!("[FAIL] {:>2} {} ({:.2}s): {}", i + 1, name, secs, e)
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

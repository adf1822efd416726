//! Small-integer oracles that share no code with the library.

#![allow(dead_code)]

use std::collections::HashSet;

use normcone::IntMatrix;
use num_traits::ToPrimitive;

pub type Vec64 = Vec<i64>;

pub fn to_i64(m: &IntMatrix) -> Vec<Vec64> {
    m.rows()
        .iter()
        .map(|r| r.iter().map(|e| e.to_i64().expect("entry fits in i64")).collect())
        .collect()
}

pub fn matrix(ncols: usize, rows: &[Vec64]) -> IntMatrix {
    IntMatrix::from_i64(ncols, rows)
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn det(m: &[Vec64]) -> i64 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec64> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

pub fn rank(rows: &[Vec64]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                let pivot = m[r].clone();
                m[i].iter_mut().zip(&pivot).for_each(|(x, y)| *x = *x * a - y * b);
                let g = m[i].iter().fold(0i128, |g, &x| gcd128(g, x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd128(b, a % b)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn primitive(v: Vec64) -> Vec64 {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        v.into_iter().map(|x| x / g).collect()
    } else {
        v
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Facet normals of a full-dimensional cone, by testing every normal
/// spanned by `d − 1` generators.
pub fn facets(gens: &[Vec64]) -> Vec<Vec64> {
    let d = gens[0].len();
    assert_eq!(rank(gens), d, "cone must be full-dimensional");
    if d == 1 {
        return vec![vec![1]];
    }
    let mut out: Vec<Vec64> = Vec::new();
    for s in subsets(gens.len(), d - 1) {
        let rows: Vec<Vec64> = s.iter().map(|&i| gens[i].clone()).collect();
        let normal: Vec64 = (0..d)
            .map(|j| {
                let minor: Vec<Vec64> = rows
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                if j % 2 == 0 {
                    det(&minor)
                } else {
                    -det(&minor)
                }
            })
            .collect();
        if normal.iter().all(|&x| x == 0) {
            continue;
        }
        let vals: Vec<i64> = gens.iter().map(|g| dot(&normal, g)).collect();
        let normal = if vals.iter().all(|&v| v >= 0) {
            normal
        } else if vals.iter().all(|&v| v <= 0) {
            normal.into_iter().map(|x| -x).collect()
        } else {
            continue;
        };
        let normal = primitive(normal);
        if !out.contains(&normal) {
            out.push(normal);
        }
    }
    out.sort();
    out
}

pub fn in_cone(facets: &[Vec64], x: &[i64]) -> bool {
    facets.iter().all(|f| dot(f, x) >= 0)
}

/// All integer points with first coordinate `level` and the others in
/// `[−bound, bound]`.
pub fn box_points(d: usize, level: i64, bound: i64) -> Vec<Vec64> {
    let mut out = vec![vec![level]];
    for _ in 1..d {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-bound..=bound).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn sub(a: &[i64], b: &[i64]) -> Vec64 {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Which of `points`, visited in the given order, are sums of `basis`
/// elements. `points` must list every difference `p − h` before `p`.
pub fn representable(points: &[Vec64], basis: &[Vec64]) -> Vec<bool> {
    let mut ok: HashSet<Vec64> = HashSet::new();
    points
        .iter()
        .map(|p| {
            let r = p.iter().all(|&x| x == 0)
                || basis.iter().any(|h| {
                    let q = sub(p, h);
                    q.iter().all(|&x| x == 0) || ok.contains(&q)
                });
            if r {
                ok.insert(p.clone());
            }
            r
        })
        .collect()
}

/// Exponent vectors of total degree at most `max`.
pub fn monomials_up_to(d: usize, max: i64) -> Vec<Vec64> {
    let mut out: Vec<Vec64> = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| {
                let used: i64 = p.iter().sum();
                (0..=max - used).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.sort_by_key(|p| p.iter().sum::<i64>());
    out
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
pub fn hnf(rows: &[Vec64]) -> Vec<Vec64> {
    let mut m: Vec<Vec64> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        loop {
            let nonzero: Vec<usize> = (r..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nonzero.is_empty() {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(r, p);
            if m[r][c] < 0 {
                m[r].iter_mut().for_each(|x| *x = -*x);
            }
            let mut done = true;
            for i in r + 1..m.len() {
                let q = m[i][c].div_euclid(m[r][c]);
                let pivot = m[r].clone();
                m[i].iter_mut().zip(&pivot).for_each(|(x, y)| *x -= q * y);
                if m[i][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && m[r][c] != 0 {
            for i in 0..r {
                let q = m[i][c].div_euclid(m[r][c]);
                let pivot = m[r].clone();
                m[i].iter_mut().zip(&pivot).for_each(|(x, y)| *x -= q * y);
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

//! Benchmark fixtures.

use normcone::{ConeProblem, InputSystem, InputType, IntMatrix, LatticeBasis};

/// Simplex cone spanned by `(1,0,…,0)` and `(1, k·e_i)` for each `i`.
pub fn stretched_simplex(d: usize, k: i64) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..d)
        .map(|i| {
            let mut r = vec![0; d];
            r[0] = 1;
            if i > 0 {
                r[i] = k;
            }
            r
        })
        .collect();
    IntMatrix::from_i64(d, &rows)
}

/// Cone over the square `[0,k]²` at height 1.
pub fn square(k: i64) -> IntMatrix {
    IntMatrix::from_i64(3, &[vec![1, 0, 0], vec![1, k, 0], vec![1, 0, k], vec![1, k, k]])
}

/// Inequality description of a 4-dimensional cone with many facets.
pub fn inequalities_4d() -> IntMatrix {
    IntMatrix::from_i64(
        4,
        &[
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![2, -1, 1, -1],
            vec![1, 2, -1, -1],
            vec![-1, 1, 2, 1],
        ],
    )
}

pub fn problem(gens: &IntMatrix) -> ConeProblem {
    ConeProblem::from_generators(gens, LatticeBasis::full(gens.ncols()))
}

pub fn input(m: IntMatrix, t: InputType) -> InputSystem {
    InputSystem::single(m, t).expect("valid input")
}

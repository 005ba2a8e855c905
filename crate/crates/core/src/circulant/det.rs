use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::SquareMatrix;

/// Element types with a brute-force determinant: fraction-free elimination for
/// exact integers, partially pivoted elimination for floats.
pub trait DetOracle: Sized {
    fn det_of(matrix: &SquareMatrix<Self>) -> Self;
}

impl DetOracle for BigInt {
    fn det_of(matrix: &SquareMatrix<Self>) -> Self {
        det_bareiss(matrix)
    }
}

impl DetOracle for i64 {
    fn det_of(matrix: &SquareMatrix<Self>) -> Self {
        let wide = matrix.map(|v| BigInt::from(*v));
        i64::try_from(det_bareiss(&wide)).expect("determinant overflows i64")
    }
}

impl DetOracle for f64 {
    fn det_of(matrix: &SquareMatrix<Self>) -> Self {
        det_partial_pivot(matrix)
    }
}

pub fn det_bruteforce<T: DetOracle>(matrix: &SquareMatrix<T>) -> T {
    T::det_of(matrix)
}

/// Bareiss fraction-free elimination. Every intermediate division is exact.
pub fn det_bareiss(matrix: &SquareMatrix<BigInt>) -> BigInt {
    let n = matrix.order();
    let mut m = matrix.to_rows();
    let mut negate = false;
    let mut prev_pivot = BigInt::one();

    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev_pivot;
            }
        }
        prev_pivot = m[k][k].clone();
    }

    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Gaussian elimination with partial (row) pivoting.
pub fn det_partial_pivot(matrix: &SquareMatrix<f64>) -> f64 {
    let n = matrix.order();
    let mut m = matrix.to_rows();
    let mut det = 1.0;

    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&a, &b| m[a][k].abs().total_cmp(&m[b][k].abs()))
            .unwrap_or(k);
        if m[pivot_row][k] == 0.0 {
            return 0.0;
        }
        if pivot_row != k {
            m.swap(k, pivot_row);
            det = -det;
        }
        let pivot = m[k][k];
        det *= pivot;
        for i in k + 1..n {
            let factor = m[i][k] / pivot;
            if factor != 0.0 {
                for j in k + 1..n {
                    m[i][j] -= factor * m[k][j];
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: Vec<Vec<i64>>) -> SquareMatrix<BigInt> {
        SquareMatrix::from_rows(rows).unwrap().map(|v| BigInt::from(*v))
    }

    /// Permutation expansion, only for tiny test matrices.
    fn leibniz(m: &SquareMatrix<i64>) -> i64 {
        fn go(m: &SquareMatrix<i64>, row: usize, used: &mut Vec<bool>) -> i64 {
            let n = m.order();
            if row == n {
                return 1;
            }
            let mut total = 0;
            let mut sign = 1;
            for col in 0..n {
                if used[col] {
                    continue;
                }
                used[col] = true;
                total += sign * m.get(row, col) * go(m, row + 1, used);
                used[col] = false;
                sign = -sign;
            }
            total
        }
        go(m, 0, &mut vec![false; m.order()])
    }

    #[test]
    fn pinned() {
        assert_eq!(det_bareiss(&big(vec![vec![1, 1], vec![1, 1]])), BigInt::zero());
        assert_eq!(det_bareiss(&big(vec![vec![1, 1, 2], vec![2, 1, 1], vec![1, 2, 1]])), BigInt::from(4));
        assert_eq!(det_bareiss(&big(vec![vec![1, 3], vec![3, 1]])), BigInt::from(-8));
        assert_eq!(det_bareiss(&big(vec![vec![7]])), BigInt::from(7));
        assert_eq!(det_bareiss(&big(vec![vec![21, 23, 15], vec![7, 27, 20], vec![3, 2, 2]])), BigInt::from(347));
        assert_eq!(det_bareiss(&big(vec![vec![0, 1], vec![1, 0]])), BigInt::from(-1));
    }

    #[test]
    fn float_pinned() {
        let m = SquareMatrix::from_rows(vec![vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap();
        assert_eq!(det_partial_pivot(&m), -0.25);
        let g3 = SquareMatrix::from_rows(vec![vec![1.0, 1.0, 2.0], vec![2.0, 1.0, 1.0], vec![1.0, 2.0, 1.0]]).unwrap();
        assert!((det_partial_pivot(&g3) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn bareiss_matches_permutation_expansion() {
        // deterministic LCG fill, entries in -9..=9, includes zero pivots
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 19) as i64 - 9
        };
        for n in 1..=6 {
            for _ in 0..40 {
                let m = SquareMatrix::from_fn(n, |_, _| next());
                let expect = leibniz(&m);
                assert_eq!(det_bruteforce(&m), expect);
                let float = det_bruteforce(&m.map(|v| *v as f64));
                assert!((float - expect as f64).abs() <= 1e-9 * (expect as f64).abs().max(1.0));
            }
        }
    }
}

//! Right-circulant and g-circulant matrices built from recurrence data,
//! with closed-form spectra and determinants next to the oracles that check
//! them.
//!
//! | quantity | closed form | oracle |
//! |---|---|---|
//! | spectrum of the ratio matrix | [`eigenvalues_closed_f`] | [`eigenvalues_dft`] |
//! | determinant of the ratio matrix | [`det_closed_f`] | [`det_bruteforce`] / [`Spectrum::product`] |
//! | `det(G_n)` (Fibonacci row) | [`det_closed_g`] | [`det_bruteforce`] |
//! | `det(H_n)` (Lucas row) | [`det_closed_h`] | [`det_bruteforce`] |

mod closed;
mod det;
mod spectrum;

pub use closed::{
    build_g_matrix, build_h_matrix, det_closed_g, det_closed_g_float, det_closed_h, det_closed_h_float,
    HDeterminant,
};
pub use det::{det_bareiss, det_bruteforce, det_partial_pivot, DetOracle};
pub use spectrum::{
    build_f_matrix, det_closed_f, eigenvalues_closed_f, eigenvalues_dft, RatioCirculantParams, Spectrum,
    SINGULARITY_GUARD,
};

use thiserror::Error;

use crate::polyseq::ParamError;

/// Largest order for which a dense matrix is materialized.
pub const MAX_DENSE_ORDER: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CirculantError {
    #[error("circulant first row must not be empty")]
    EmptyRow,
    #[error("matrix order must be at least 1")]
    ZeroOrder,
    #[error("order {0} exceeds the dense materialization cap of {MAX_DENSE_ORDER}")]
    TooLarge(usize),
    #[error("rows have inconsistent lengths; a square matrix is required")]
    NotSquare,
    #[error("ratio parameter `{0}` must be nonzero")]
    ZeroRatioParam(&'static str),
    #[error("ratio parameter `{0}` must be finite")]
    NonFiniteRatioParam(&'static str),
    #[error("denominator factor `{factor}` vanishes (|value| = {magnitude:e}); fall back to the oracle")]
    SingularDenominator { factor: String, magnitude: f64 },
    #[error(transparent)]
    Params(#[from] ParamError),
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    order: usize,
    data: Vec<T>,
}

impl<T: Clone> SquareMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, CirculantError> {
        let order = rows.len();
        if order == 0 {
            return Err(CirculantError::ZeroOrder);
        }
        if rows.iter().any(|r| r.len() != order) {
            return Err(CirculantError::NotSquare);
        }
        Ok(Self { order, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let data = (0..order * order).map(|k| f(k / order, k % order)).collect();
        Self { order, data }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.order)
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(<[T]>::to_vec).collect()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix { order: self.order, data: self.data.iter().map(f).collect() }
    }
}

/// `RCirc(a_1, …, a_n)`: row `i+1` is row `i` rotated one place to the right,
/// so entry `(i, j)` is `first_row[(j - i) mod n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RightCirculant<T> {
    first_row: Vec<T>,
}

impl<T: Clone> RightCirculant<T> {
    pub fn from_row(row: Vec<T>) -> Result<Self, CirculantError> {
        if row.is_empty() {
            return Err(CirculantError::EmptyRow);
        }
        Ok(Self { first_row: row })
    }

    pub fn order(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[T] {
        &self.first_row
    }

    pub fn entry(&self, i: usize, j: usize) -> &T {
        let n = self.order();
        &self.first_row[(j % n + n - i % n) % n]
    }

    pub fn to_dense(&self) -> Result<SquareMatrix<T>, CirculantError> {
        let n = self.order();
        if n > MAX_DENSE_ORDER {
            return Err(CirculantError::TooLarge(n));
        }
        Ok(SquareMatrix::from_fn(n, |i, j| self.entry(i, j).clone()))
    }
}

/// Builds `RCirc(row)`.
pub fn rcirc_from_row<T: Clone>(row: Vec<T>) -> Result<RightCirculant<T>, CirculantError> {
    RightCirculant::from_row(row)
}

/// `A_{g,n}`: row `j+1` is row `j` rotated `g` places to the right.
#[derive(Debug, Clone, PartialEq)]
pub struct GCirculant<T> {
    first_row: Vec<T>,
    shift: usize,
}

impl<T: Clone> GCirculant<T> {
    /// `g` is reduced modulo the order.
    pub fn from_row(row: Vec<T>, g: usize) -> Result<Self, CirculantError> {
        if row.is_empty() {
            return Err(CirculantError::EmptyRow);
        }
        let shift = g % row.len();
        Ok(Self { first_row: row, shift })
    }

    pub fn order(&self) -> usize {
        self.first_row.len()
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn entry(&self, i: usize, j: usize) -> &T {
        let n = self.order();
        let offset = (i % n) * self.shift % n;
        &self.first_row[(j % n + n - offset) % n]
    }

    pub fn to_dense(&self) -> Result<SquareMatrix<T>, CirculantError> {
        let n = self.order();
        if n > MAX_DENSE_ORDER {
            return Err(CirculantError::TooLarge(n));
        }
        Ok(SquareMatrix::from_fn(n, |i, j| self.entry(i, j).clone()))
    }
}

/// Dense form of the g-circulant with the given first row.
pub fn gcirc_from_row<T: Clone>(row: Vec<T>, g: usize) -> Result<SquareMatrix<T>, CirculantError> {
    GCirculant::from_row(row, g)?.to_dense()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rcirc_examples() {
        assert_eq!(rcirc_from_row(vec![5]).unwrap().to_dense().unwrap().to_rows(), vec![vec![5]]);
        assert_eq!(
            rcirc_from_row(vec![1, 1, 2]).unwrap().to_dense().unwrap().to_rows(),
            vec![vec![1, 1, 2], vec![2, 1, 1], vec![1, 2, 1]]
        );
        assert_eq!(
            rcirc_from_row(vec![1, 3]).unwrap().to_dense().unwrap().to_rows(),
            vec![vec![1, 3], vec![3, 1]]
        );
        assert_eq!(rcirc_from_row(Vec::<i32>::new()), Err(CirculantError::EmptyRow));
    }

    #[test]
    fn shift_invariant_exhaustive() {
        for n in 1..=8 {
            let row: Vec<usize> = (0..n).map(|k| 10 * k + 1).collect();
            let m = rcirc_from_row(row.clone()).unwrap().to_dense().unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(*m.get(i, j), row[(j + n - i) % n]);
                }
                if i + 1 < n {
                    let mut rotated = m.row(i).to_vec();
                    rotated.rotate_right(1);
                    assert_eq!(m.row(i + 1), rotated.as_slice());
                }
            }
        }
    }

    #[test]
    fn gcirc_examples() {
        let row = vec![1, 1, 2];
        assert_eq!(gcirc_from_row(row.clone(), 1).unwrap(), rcirc_from_row(row).unwrap().to_dense().unwrap());
        assert_eq!(gcirc_from_row(vec!['a', 'b'], 0).unwrap().to_rows(), vec![vec!['a', 'b'], vec!['a', 'b']]);
        assert_eq!(
            gcirc_from_row(vec![1, 2, 3, 4], 2).unwrap().to_rows(),
            vec![vec![1, 2, 3, 4], vec![3, 4, 1, 2], vec![1, 2, 3, 4], vec![3, 4, 1, 2]]
        );
        // g = n + 1 is the ordinary right circulant again
        assert_eq!(gcirc_from_row(vec![1, 2, 3], 4).unwrap(), gcirc_from_row(vec![1, 2, 3], 1).unwrap());
    }

    #[test]
    fn gcirc_rows_shift_by_g() {
        for n in 1..=7 {
            for g in 0..=2 * n {
                let m = gcirc_from_row((0..n).collect::<Vec<_>>(), g).unwrap();
                for i in 0..n.saturating_sub(1) {
                    let mut rotated = m.row(i).to_vec();
                    rotated.rotate_right(g % n);
                    assert_eq!(m.row(i + 1), rotated.as_slice(), "n={n} g={g} row={i}");
                }
            }
        }
    }

    #[test]
    fn square_matrix_shape() {
        assert_eq!(SquareMatrix::<i32>::from_rows(vec![]), Err(CirculantError::ZeroOrder));
        assert_eq!(SquareMatrix::from_rows(vec![vec![1, 2], vec![3]]), Err(CirculantError::NotSquare));
    }
}

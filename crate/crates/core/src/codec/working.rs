//! The fixed coding matrix and the linear recovery of the withheld entry.
//!
//! With `E = B·W` for a right circulant `W`, `det(E) = det(W)·det(B)`. Every
//! row of `E` except the one holding the withheld entry `x` is known from the
//! retained entries; the remaining row is affine in `x`, so expanding
//! `det(E)` along it gives `det(W)·d = c₀ + c₁·x`.

use num_bigint::BigInt;

use super::packet::BlockRecord;
use super::{Algorithm, CodecError};
use crate::circulant::{build_g_matrix, build_h_matrix, rcirc_from_row};
use crate::polyseq::IntRecurrenceParams;

/// Largest working-matrix label accepted, keeping Step-4 products inside `i128`.
pub const MAX_LABEL: i64 = 1_000_000;

/// `RCirc(g_1, g_2, g_3)` for Fib3 or `RCirc(h_1, h_2)` for Lucas2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkingMatrix {
    algorithm: Algorithm,
    labels: Vec<i64>,
}

/// `det(W)·d = constant + coefficient·x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearEquation {
    pub lhs: i128,
    pub constant: i128,
    pub coefficient: i128,
}

/// Why the withheld entry could not be recovered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveFailure {
    /// `c₁ = 0`; the equation does not involve `x`.
    Degenerate,
    /// `x = numerator / denominator` is not an integer (denominator > 0).
    NonIntegral { numerator: i128, denominator: i128 },
    OutOfRange(i128),
}

impl LinearEquation {
    pub fn evaluate(&self, x: i128) -> i128 {
        self.constant + self.coefficient * x
    }

    /// Solves for `x` and checks it is a symbol code.
    pub fn solve(&self) -> Result<i64, SolveFailure> {
        if self.coefficient == 0 {
            return Err(SolveFailure::Degenerate);
        }
        let mut numerator = self.lhs - self.constant;
        let mut denominator = self.coefficient;
        if denominator < 0 {
            numerator = -numerator;
            denominator = -denominator;
        }
        if numerator % denominator != 0 {
            return Err(SolveFailure::NonIntegral { numerator, denominator });
        }
        let x = numerator / denominator;
        if !(1..=27).contains(&x) {
            return Err(SolveFailure::OutOfRange(x));
        }
        Ok(x as i64)
    }
}

impl WorkingMatrix {
    /// `G₃ = RCirc(1, 1, 2)` or `H₂ = RCirc(1, 3)`, the `p = q = 1` matrices.
    pub fn standard(algorithm: Algorithm) -> Self {
        let labels = match algorithm {
            Algorithm::Fib3 => vec![1, 1, 2],
            Algorithm::Lucas2 => vec![1, 3],
        };
        Self { algorithm, labels }
    }

    /// `G₃` or `H₂` for other recurrence parameters.
    pub fn from_params(params: &IntRecurrenceParams, algorithm: Algorithm) -> Result<Self, CodecError> {
        let row = match algorithm {
            Algorithm::Fib3 => build_g_matrix(params, 3),
            Algorithm::Lucas2 => build_h_matrix(params, 2),
        }
        .expect("order is positive")
        .first_row()
        .to_vec();
        let labels = row
            .iter()
            .map(|v: &BigInt| i64::try_from(v).ok().filter(|v| v.abs() <= MAX_LABEL))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| CodecError::WorkingMatrix(format!("labels {row:?} exceed ±{MAX_LABEL}")))?;
        Ok(Self { algorithm, labels })
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    /// `g_1, g_2, g_3` or `h_1, h_2`.
    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        *rcirc_from_row(self.labels.clone()).expect("non-empty").entry(row, col)
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        rcirc_from_row(self.labels.clone()).expect("non-empty").to_dense().expect("small").to_rows()
    }

    pub fn det(&self) -> i64 {
        let g = &self.labels;
        match self.algorithm {
            Algorithm::Lucas2 => g[0] * g[0] - g[1] * g[1],
            Algorithm::Fib3 => g[0].pow(3) + g[1].pow(3) + g[2].pow(3) - 3 * g[0] * g[1] * g[2],
        }
    }

    /// The entries of `E = B·W` computable without the withheld entry, keyed
    /// by their 1-based position: `e₁, e₂, e₃, e₇, e₈, e₉` for Fib3 and
    /// `e₃, e₄` for Lucas2.
    pub fn partial_products(&self, record: &BlockRecord) -> Result<Vec<(usize, i128)>, CodecError> {
        let block = self.block_with_unknown(record)?;
        let dim = self.algorithm.dim();
        let (hidden_row, _) = self.algorithm.hidden_cell();
        let mut out = Vec::with_capacity(dim * (dim - 1));
        for row in (0..dim).filter(|&r| r != hidden_row) {
            for col in 0..dim {
                let e = (0..dim).map(|t| i128::from(block[row][t].unwrap()) * i128::from(self.entry(t, col))).sum();
                out.push((row * dim + col + 1, e));
            }
        }
        Ok(out)
    }

    /// Builds `det(W)·d = c₀ + c₁·x` for one record.
    pub fn step4_equation(&self, record: &BlockRecord) -> Result<LinearEquation, CodecError> {
        let block = self.block_with_unknown(record)?;
        let dim = self.algorithm.dim();
        let (hidden_row, _) = self.algorithm.hidden_cell();

        // E as a grid of affine forms (constant, coefficient of x).
        let e: Vec<Vec<(i128, i128)>> = (0..dim)
            .map(|row| {
                (0..dim)
                    .map(|col| {
                        (0..dim).fold((0i128, 0i128), |(c, v), t| {
                            let w = i128::from(self.entry(t, col));
                            match block[row][t] {
                                Some(b) => (c + i128::from(b) * w, v),
                                None => (c, v + w),
                            }
                        })
                    })
                    .collect()
            })
            .collect();

        let (mut constant, mut coefficient) = (0i128, 0i128);
        for col in 0..dim {
            let minor: Vec<Vec<i128>> = (0..dim)
                .filter(|&r| r != hidden_row)
                .map(|r| (0..dim).filter(|&c| c != col).map(|c| e[r][c].0).collect())
                .collect();
            let sign = if (hidden_row + col) % 2 == 0 { 1 } else { -1 };
            let cofactor = sign * small_det(&minor);
            constant += e[hidden_row][col].0 * cofactor;
            coefficient += e[hidden_row][col].1 * cofactor;
        }
        Ok(LinearEquation { lhs: i128::from(self.det()) * i128::from(record.d), constant, coefficient })
    }

    /// Block rows with `None` at the withheld cell.
    fn block_with_unknown(&self, record: &BlockRecord) -> Result<Vec<Vec<Option<i64>>>, CodecError> {
        let retained_cells = self.algorithm.retained_cells();
        if record.retained.len() != retained_cells.len() {
            return Err(CodecError::InvalidPacket(format!(
                "record retains {} entries, expected {}",
                record.retained.len(),
                retained_cells.len()
            )));
        }
        if let Some(&bad) = record.retained.iter().find(|v| !(1..=27).contains(*v)) {
            return Err(CodecError::CodeOutOfRange(bad));
        }
        let dim = self.algorithm.dim();
        let mut grid = vec![vec![None; dim]; dim];
        for (&cell, &value) in retained_cells.iter().zip(&record.retained) {
            grid[cell / dim][cell % dim] = Some(value);
        }
        Ok(grid)
    }
}

fn small_det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .map(|col| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, v)| *v).collect()).collect();
                let sign = if col % 2 == 0 { 1 } else { -1 };
                sign * m[0][col] * small_det(&minor)
            })
            .sum(),
    }
}

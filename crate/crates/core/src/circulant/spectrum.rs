use std::f64::consts::PI;

use num_complex::Complex64;

use super::{CirculantError, RightCirculant};
use crate::polyseq::{char_roots, fibonacci_seq, lucas_seq, RecurrenceParams};

/// Distance below which a closed-form denominator factor is treated as zero.
pub const SINGULARITY_GUARD: f64 = 1e-9;

/// Eigenvalues indexed by `m = 0..n`, where index `m` pairs with `w^{-m}`,
/// `w = exp(2πi/n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.eigenvalues.iter()
    }

    /// Product of all eigenvalues, i.e. the determinant.
    pub fn product(&self) -> Complex64 {
        self.eigenvalues.iter().product()
    }
}

/// `w^{-m k}` with the exponent reduced mod `n` before the trig call.
fn root_of_unity_inv(n: usize, mk: usize) -> Complex64 {
    let angle = -2.0 * PI * ((mk % n) as f64) / n as f64;
    Complex64::from_polar(1.0, angle)
}

/// `λ_m = Σ_k row[k]·w^{-mk}`, summed directly.
pub fn eigenvalues_dft(matrix: &RightCirculant<f64>) -> Spectrum {
    let row = matrix.first_row();
    let n = row.len();
    let eigenvalues = (0..n)
        .map(|m| {
            row.iter()
                .enumerate()
                .map(|(k, &c)| root_of_unity_inv(n, m * k) * c)
                .sum()
        })
        .collect();
    Spectrum { eigenvalues }
}

/// Parameters of the right circulant whose first row is `F_k / (a·r^k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioCirculantParams {
    params: RecurrenceParams,
    a: f64,
    r: f64,
    n: usize,
}

impl RatioCirculantParams {
    pub fn new(params: RecurrenceParams, a: f64, r: f64, n: usize) -> Result<Self, CirculantError> {
        if !a.is_finite() {
            return Err(CirculantError::NonFiniteRatioParam("a"));
        }
        if !r.is_finite() {
            return Err(CirculantError::NonFiniteRatioParam("r"));
        }
        if a == 0.0 {
            return Err(CirculantError::ZeroRatioParam("a"));
        }
        if r == 0.0 {
            return Err(CirculantError::ZeroRatioParam("r"));
        }
        if n == 0 {
            return Err(CirculantError::ZeroOrder);
        }
        let roots = char_roots(&params);
        for (name, root) in [("r - alpha", roots.alpha), ("r - beta", roots.beta)] {
            let gap = (r - root).abs();
            if gap <= SINGULARITY_GUARD {
                return Err(CirculantError::SingularDenominator { factor: name.into(), magnitude: gap });
            }
        }
        Ok(Self { params, a, r, n })
    }

    pub fn params(&self) -> &RecurrenceParams {
        &self.params
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn n(&self) -> usize {
        self.n
    }
}

/// First row `[f_0, …, f_{n-1}]`, `f_k = F_k / (a·r^k)`; `f_0` is always 0.
pub fn build_f_matrix(rp: &RatioCirculantParams) -> RightCirculant<f64> {
    let row = fibonacci_seq(&rp.params, rp.n)
            .into_iter()
            .enumerate()
            .map(|(k, f)| f / (rp.a * rp.r.powi(k as i32)))
            .collect();
    RightCirculant::from_row(row).expect("order checked at construction")
}

/// Closed-form eigenvalues of the ratio circulant:
///
/// `λ_m = [-r·F_n - w^{-m}(q·F_{n-1} - r^n)] / [a·r^{n-1}·(r - α·w^{-m})(r - β·w^{-m})]`
pub fn eigenvalues_closed_f(rp: &RatioCirculantParams) -> Result<Spectrum, CirculantError> {
    let n = rp.n;
    let (a, r, q) = (rp.a, rp.r, rp.params.q());
    let fib = fibonacci_seq(&rp.params, n + 1);
    let (f_n, f_prev) = (fib[n], fib[n - 1]);
    let roots = char_roots(&rp.params);
    let r_n = r.powi(n as i32);
    let scale = a * r.powi(n as i32 - 1);

    let mut eigenvalues = Vec::with_capacity(n);
    for m in 0..n {
        let w = root_of_unity_inv(n, m);
        let alpha_factor = r - w * roots.alpha;
        let beta_factor = r - w * roots.beta;
        for (label, factor) in [("r - alpha·w^-m", alpha_factor), ("r - beta·w^-m", beta_factor)] {
            if factor.norm() <= SINGULARITY_GUARD {
                return Err(CirculantError::SingularDenominator {
                    factor: format!("{label} (m = {m})"),
                    magnitude: factor.norm(),
                });
            }
        }
        let numerator = -r * f_n - w * (q * f_prev - r_n);
        eigenvalues.push(numerator / (alpha_factor * beta_factor * scale));
    }
    Ok(Spectrum { eigenvalues })
}

/// Closed-form determinant of the ratio circulant, with the product-form
/// denominator:
///
/// `det = [(-1)^n r^n F_n^n - (q F_{n-1} - r^n)^n] / [a^n r^{n(n-1)} (r^{2n} - r^n L_n + (-q)^n)]`
pub fn det_closed_f(rp: &RatioCirculantParams) -> Result<f64, CirculantError> {
    let n = rp.n;
    let ni = n as i32;
    let (a, r, q) = (rp.a, rp.r, rp.params.q());
    let fib = fibonacci_seq(&rp.params, n + 1);
    let l_n = lucas_seq(&rp.params, n + 1)[n];
    let (f_n, f_prev) = (fib[n], fib[n - 1]);
    let r_n = r.powi(ni);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };

    let numerator = sign * r_n * f_n.powi(ni) - (q * f_prev - r_n).powi(ni);
    let r_2n = r_n * r_n;
    let cross = r_n * l_n;
    let tail = (-q).powi(ni);
    let inner = r_2n - cross + tail;
    let inner_scale = r_2n.abs().max(cross.abs()).max(tail.abs());
    if inner.abs() <= SINGULARITY_GUARD * inner_scale {
        return Err(CirculantError::SingularDenominator {
            factor: "r^2n - r^n L_n + (-q)^n".into(),
            magnitude: inner.abs(),
        });
    }
    let denominator = a.powi(ni) * r.powi(ni * (ni - 1)) * inner;
    Ok(numerator / denominator)
}

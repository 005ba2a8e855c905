//! Closed-form determinants of the Fibonacci-row (`G_n`) and Lucas-row
//! (`H_n`) right circulants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{pow, Num, Zero};

use super::{det_bruteforce, CirculantError, RightCirculant, SINGULARITY_GUARD};
use crate::polyseq::{fibonacci_seq, lucas_seq, IntRecurrenceParams, RecurrenceParams, Recurrence};

/// `G_n = RCirc(F_1, …, F_n)`.
pub fn build_g_matrix<R: Recurrence>(params: &R, n: usize) -> Result<RightCirculant<R::Value>, CirculantError> {
    if n == 0 {
        return Err(CirculantError::ZeroOrder);
    }
    RightCirculant::from_row(fibonacci_seq(params, n + 1).split_off(1))
}

/// `H_n = RCirc(L_1, …, L_n)`.
pub fn build_h_matrix<R: Recurrence>(params: &R, n: usize) -> Result<RightCirculant<R::Value>, CirculantError> {
    if n == 0 {
        return Err(CirculantError::ZeroOrder);
    }
    RightCirculant::from_row(lucas_seq(params, n + 1).split_off(1))
}

/// Result of the Lucas-row closed form. When the ratio denominator
/// `q·L_n - 2q` vanishes the value comes from elimination instead and
/// `fallback_used` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct HDeterminant<T> {
    pub value: T,
    pub fallback_used: bool,
}

struct Terms<T> {
    /// numerator of the ratio base
    base: T,
    /// denominator of the ratio base
    divisor: T,
}

fn g_terms<T: Num + Clone>(fib: &[T], q: &T, n: usize) -> Terms<T> {
    Terms { base: T::one() - fib[n + 1].clone(), divisor: q.clone() * fib[n].clone() }
}

/// `(1 - F_{n+1})^{n-1} + (q F_n)^{n-2} Σ_{k=1}^{n-1} ((1 - F_{n+1}) / (q F_n))^{k-1} q F_k`
fn g_formula<T: Num + Clone>(fib: &[T], q: &T, n: usize) -> T {
    let Terms { base, divisor } = g_terms(fib, q, n);
    let head = pow(base.clone(), n - 1);
    if n == 1 {
        return head;
    }
    let ratio = base / divisor.clone();
    let sum = (1..n).fold(T::zero(), |acc, k| acc + pow(ratio.clone(), k - 1) * q.clone() * fib[k].clone());
    head + pow(divisor, n - 2) * sum
}

fn h_terms<T: Num + Clone>(luc: &[T], q: &T, n: usize) -> Terms<T> {
    let two = T::one() + T::one();
    Terms {
        base: luc[1].clone() - luc[n + 1].clone(),
        divisor: q.clone() * luc[n].clone() - two * q.clone(),
    }
}

/// `L_1 (L_1 - L_{n+1})^{n-1}
///  + L_1 q^{n-1} (L_n - 2)^{n-2} Σ ρ^{k-1} L_k
///  - 2 q^{n-1} (L_n - 2)^{n-2} Σ ρ^{k-1} L_{k+1}`, with `ρ = (L_1 - L_{n+1}) / (q L_n - 2q)`.
fn h_formula<T: Num + Clone>(luc: &[T], q: &T, n: usize) -> T {
    let two = T::one() + T::one();
    let Terms { base, divisor } = h_terms(luc, q, n);
    let l1 = luc[1].clone();
    let head = l1.clone() * pow(base.clone(), n - 1);
    if n == 1 {
        return head;
    }
    let ratio = base / divisor;
    let coeff = pow(q.clone(), n - 1) * pow(luc[n].clone() - two.clone(), n - 2);
    let (s1, s2) = (1..n).fold((T::zero(), T::zero()), |(s1, s2), k| {
        let rk = pow(ratio.clone(), k - 1);
        (s1 + rk.clone() * luc[k].clone(), s2 + rk * luc[k + 1].clone())
    });
    head + l1 * coeff.clone() * s1 - two * coeff * s2
}

fn to_rational(values: Vec<BigInt>) -> Vec<BigRational> {
    values.into_iter().map(BigRational::from_integer).collect()
}

fn rational_to_integer(value: BigRational) -> BigInt {
    debug_assert!(value.is_integer(), "closed form produced a non-integer determinant");
    value.to_integer()
}

/// Exact `det(G_n)` from the closed form.
///
/// ```
/// use fibcirc::circulant::det_closed_g;
/// use fibcirc::polyseq::IntRecurrenceParams;
///
/// let classic = IntRecurrenceParams::new(1, 1).unwrap();
/// assert_eq!(det_closed_g(&classic, 3).unwrap(), 4.into());
/// assert_eq!(det_closed_g(&classic, 2).unwrap(), 0.into());
/// ```
pub fn det_closed_g(params: &IntRecurrenceParams, n: usize) -> Result<BigInt, CirculantError> {
    if n == 0 {
        return Err(CirculantError::ZeroOrder);
    }
    let fib = to_rational(fibonacci_seq(params, n + 2));
    let q = BigRational::from_integer(params.q().clone());
    // q·F_n != 0 whenever p, q != 0 and p² + 4q > 0
    if n >= 2 && g_terms(&fib, &q, n).divisor.is_zero() {
        return Err(CirculantError::SingularDenominator { factor: "q·F_n".into(), magnitude: 0.0 });
    }
    Ok(rational_to_integer(g_formula(&fib, &q, n)))
}

/// Floating-point `det(G_n)` from the closed form.
pub fn det_closed_g_float(params: &RecurrenceParams, n: usize) -> Result<f64, CirculantError> {
    if n == 0 {
        return Err(CirculantError::ZeroOrder);
    }
    let fib = fibonacci_seq(params, n + 2);
    let q = params.q();
    let divisor = g_terms(&fib, &q, n).divisor;
    if n >= 2 && divisor.abs() <= SINGULARITY_GUARD * q.abs().max(1.0) {
        return Err(CirculantError::SingularDenominator { factor: "q·F_n".into(), magnitude: divisor.abs() });
    }
    Ok(g_formula(&fib, &q, n))
}

/// Exact `det(H_n)` from the closed form, falling back to Bareiss elimination
/// when `q·L_n - 2q = 0`.
pub fn det_closed_h(params: &IntRecurrenceParams, n: usize) -> Result<HDeterminant<BigInt>, CirculantError> {
    if n == 0 {
        return Err(CirculantError::ZeroOrder);
    }
    let luc = to_rational(lucas_seq(params, n + 2));
    let q = BigRational::from_integer(params.q().clone());
    if n >= 2 && h_terms(&luc, &q, n).divisor.is_zero() {
        let dense = build_h_matrix(params, n)?.to_dense()?;
        return Ok(HDeterminant { value: det_bruteforce(&dense), fallback_used: true });
    }
    Ok(HDeterminant { value: rational_to_integer(h_formula(&luc, &q, n)), fallback_used: false })
}

/// Floating-point `det(H_n)`; falls back to pivoted elimination near the
/// singular denominator.
pub fn det_closed_h_float(params: &RecurrenceParams, n: usize) -> Result<HDeterminant<f64>, CirculantError> {
    if n == 0 {
        return Err(CirculantError::ZeroOrder);
    }
    let luc = lucas_seq(params, n + 2);
    let q = params.q();
    let divisor = h_terms(&luc, &q, n).divisor;
    let scale = (q * luc[n]).abs().max(2.0 * q.abs());
    if n >= 2 && divisor.abs() <= SINGULARITY_GUARD * scale {
        let dense = build_h_matrix(params, n)?.to_dense()?;
        return Ok(HDeterminant { value: det_bruteforce(&dense), fallback_used: true });
    }
    Ok(HDeterminant { value: h_formula(&luc, &q, n), fallback_used: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(p: i64, q: i64) -> IntRecurrenceParams {
        IntRecurrenceParams::new(p, q).unwrap()
    }

    fn row(m: &RightCirculant<BigInt>) -> Vec<i64> {
        m.first_row().iter().map(|v| v.try_into().unwrap()).collect()
    }

    #[test]
    fn builders() {
        assert_eq!(row(&build_g_matrix(&int(1, 1), 3).unwrap()), [1, 1, 2]);
        assert_eq!(row(&build_g_matrix(&int(1, 1), 4).unwrap()), [1, 1, 2, 3]);
        let g2 = build_g_matrix(&int(1, 1), 2).unwrap().to_dense().unwrap();
        assert_eq!(g2.map(|v| i64::try_from(v).unwrap()).to_rows(), vec![vec![1, 1], vec![1, 1]]);

        let h2 = build_h_matrix(&int(1, 1), 2).unwrap().to_dense().unwrap();
        assert_eq!(h2.map(|v| i64::try_from(v).unwrap()).to_rows(), vec![vec![1, 3], vec![3, 1]]);
        assert_eq!(row(&build_h_matrix(&int(1, 1), 4).unwrap()), [1, 3, 4, 7]);
        assert_eq!(row(&build_h_matrix(&int(3, -2), 3).unwrap()), [3, 5, 9]);
        assert_eq!(build_h_matrix(&int(1, 1), 0), Err(CirculantError::ZeroOrder));
    }

    #[test]
    fn pinned_g() {
        let c = int(1, 1);
        assert_eq!(det_closed_g(&c, 1).unwrap(), BigInt::from(1));
        assert_eq!(det_closed_g(&c, 2).unwrap(), BigInt::zero());
        assert_eq!(det_closed_g(&c, 3).unwrap(), BigInt::from(4));
        assert_eq!(det_closed_g(&c, 4).unwrap(), BigInt::from(-35));
    }

    #[test]
    fn pinned_h() {
        let c = int(1, 1);
        assert_eq!(det_closed_h(&c, 1).unwrap(), HDeterminant { value: BigInt::from(1), fallback_used: false });
        assert_eq!(det_closed_h(&c, 2).unwrap().value, BigInt::from(-8));
        // det RCirc(1, 3, 4) = 1 + 27 + 64 - 3·1·3·4 = 56
        assert_eq!(det_closed_h(&c, 3).unwrap().value, BigInt::from(56));
        assert_eq!(det_closed_h(&int(-3, 2), 1).unwrap().value, BigInt::from(-3));
    }

    #[test]
    fn exact_matches_bareiss_grid() {
        for p in -3i64..=3 {
            for q in -3i64..=3 {
                let Ok(params) = IntRecurrenceParams::new(p, q) else { continue };
                for n in 1..=8 {
                    let g = det_bruteforce(&build_g_matrix(&params, n).unwrap().to_dense().unwrap());
                    assert_eq!(det_closed_g(&params, n).unwrap(), g, "G p={p} q={q} n={n}");
                    let h = det_bruteforce(&build_h_matrix(&params, n).unwrap().to_dense().unwrap());
                    assert_eq!(det_closed_h(&params, n).unwrap().value, h, "H p={p} q={q} n={n}");
                }
            }
        }
    }

    #[test]
    fn h_fallback_when_lucas_term_is_two() {
        // p = 1, q = 1/2: L_2 = p² + 2q = 2, so q·L_2 - 2q = 0
        let params = RecurrenceParams::new(1.0, 0.5).unwrap();
        let h = det_closed_h_float(&params, 2).unwrap();
        assert!(h.fallback_used);
        // RCirc(1, 2): 1 - 4
        assert!((h.value + 3.0).abs() < 1e-12);
        assert!(!det_closed_h_float(&params, 3).unwrap().fallback_used);
    }

    #[test]
    fn float_forms_track_exact() {
        let params = int(2, 3);
        let fp = params.to_float().unwrap();
        for n in 1..=8 {
            let g = det_closed_g(&params, n).unwrap();
            let gf = det_closed_g_float(&fp, n).unwrap();
            let gv: f64 = g.to_string().parse().unwrap();
            assert!((gf - gv).abs() <= 1e-9 * gv.abs().max(1.0), "n={n}: {gf} vs {gv}");
            let h = det_closed_h(&params, n).unwrap().value;
            let hf = det_closed_h_float(&fp, n).unwrap().value;
            let hv: f64 = h.to_string().parse().unwrap();
            assert!((hf - hv).abs() <= 1e-9 * hv.abs().max(1.0), "n={n}: {hf} vs {hv}");
        }
    }
}

//! Certified tails of coefficient-weighted series `Σ_{n>N} c_n f(n)`.
//!
//! The only sums against `c_n` known in closed form are the factorial ones,
//!
//! ```text
//! Σ_{n>N} c_n / (n (n+1) ⋯ (n+j)) = c_{N+1} / ((λ + j) (N+1)(N+2) ⋯ (N+j)),
//! ```
//!
//! which telescope because `T_n = c_n (n-1)! / (n+j-1)!` satisfies
//! `T_n - T_{n+1} = (λ + j) c_n (n-1)! / (n+j)!`. Powers `n^{-d}` are rewritten
//! into that basis with the exact splitting
//!
//! ```text
//! 1 / (n^a Q_j(n)) = 1 / (n^{a-1} Q_{j+1}(n)) + (j+1) / (n^a Q_{j+1}(n)),   Q_j(n) = (n+1)⋯(n+j)
//! ```
//!
//! and rational weights are reduced to powers through their Laurent expansion
//! at infinity. Every truncation leaves non-negative remainders whose sum is
//! bounded using `0 ≤ c_n ≤ c_{N+1}` for `n > N`, valid for `0 < λ ≤ 1`.

use crate::kernel::{coeff_at, next_coeff};
use crate::scalar::{Accumulator, Scalar};

/// Extra degrees used when rewriting `n^{-d}` into the factorial basis.
const FACTORIAL_DEPTH: usize = 24;
/// Laurent order kept for rational weights.
const LAURENT_ORDER: usize = 16;

/// A tail value with a certified bound on what was left out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Tail<T> {
    pub value: T,
    pub bound: T,
}

/// `Σ_{n>N} c_n / (n Q_j(n))`, exact.
fn factorial_tail<T: Scalar>(n_cut: usize, j: usize, lambda: T, c_next: T) -> T {
    let mut denom = lambda + T::from_count(j);
    for t in 1..=j {
        denom *= T::from_count(n_cut + t);
    }
    c_next / denom
}

/// `Σ_{n>N} c_n n^{-d}` for `d ≥ 1`, given `c_next = c_{N+1}`.
pub(crate) fn power_tail<T: Scalar>(n_cut: usize, d: usize, lambda: T, c_next: T) -> Tail<T> {
    assert!(d >= 1);
    if d == 1 {
        return Tail {
            value: c_next / lambda,
            bound: T::zero(),
        };
    }
    if c_next == T::zero() {
        return Tail {
            value: T::zero(),
            bound: T::zero(),
        };
    }
    // coef[j][a]: coefficient of 1/(n^a Q_j(n)); every split raises j
    let max_degree = d + FACTORIAL_DEPTH;
    let max_j = max_degree;
    let mut coef = vec![vec![T::zero(); d + 1]; max_j + 1];
    coef[0][d] = T::one();
    let mut value = Accumulator::new();
    let mut leftover = T::zero();
    for j in 0..=max_j {
        for a in (1..=d).rev() {
            let gamma = coef[j][a];
            if gamma == T::zero() {
                continue;
            }
            if a == 1 {
                value.add(gamma * factorial_tail(n_cut, j, lambda, c_next));
            } else if a + j >= max_degree || j == max_j {
                leftover += gamma;
            } else {
                coef[j + 1][a - 1] += gamma;
                coef[j + 1][a] += gamma * T::from_count(j + 1);
            }
        }
    }
    let bound = leftover * c_next * sum_power_bound(n_cut, max_degree);
    Tail {
        value: value.value(),
        bound,
    }
}

/// Upper bound on `Σ_{n>N} n^{-D}` for `D ≥ 2`.
pub(crate) fn sum_power_bound<T: Scalar>(n_cut: usize, degree: usize) -> T {
    let dm1 = T::from_count(degree - 1);
    if n_cut == 0 {
        // 1 + ∫_1^∞
        return T::one() + T::one() / dm1;
    }
    T::from_count(n_cut).powi(1 - degree as i32) / dm1
}

/// `coef · n^{-power} / ∏ (n + shift)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalTerm<T> {
    pub coef: T,
    pub power: usize,
    pub shifts: Vec<T>,
}

impl<T: Scalar> RationalTerm<T> {
    pub fn new(coef: T, power: usize, shifts: Vec<T>) -> Self {
        Self { coef, power, shifts }
    }

    pub fn eval(&self, n: usize) -> T {
        let nf = T::from_count(n);
        let mut den = nf.powi(self.power as i32);
        for &s in &self.shifts {
            den *= nf + s;
        }
        self.coef / den
    }

    fn degree(&self) -> usize {
        self.power + self.shifts.len()
    }

    /// Coefficients of `∏(1 + s u)^{-1}` up to `u^order`.
    fn laurent(&self, order: usize) -> Vec<T> {
        let mut poly = vec![T::zero(); order + 1];
        poly[0] = T::one();
        for &s in &self.shifts {
            // multiply by Σ (-s)^r u^r
            let mut out = vec![T::zero(); order + 1];
            for (i, &pi) in poly.iter().enumerate() {
                if pi == T::zero() {
                    continue;
                }
                let mut f = T::one();
                for r in 0..=(order - i) {
                    out[i + r] += pi * f;
                    f *= -s;
                }
            }
            poly = out;
        }
        poly
    }
}

/// Evaluates `Σ_i term_i(n)`.
pub(crate) fn eval_terms<T: Scalar>(terms: &[RationalTerm<T>], n: usize) -> T {
    terms.iter().map(|t| t.eval(n)).sum()
}

fn binomial_f<T: Scalar>(n: usize, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| acc * T::from_count(n - i) / T::from_count(i + 1))
}

/// `Σ_{n>N} c_n f(n)` for `f` a sum of rational terms, each of degree ≥ 1
/// (degree 1 terms must have no shifts for the sum to converge at λ small;
/// the identities only produce degree ≥ 2 or pure `n^{-1}`).
pub(crate) fn rational_tail<T: Scalar>(terms: &[RationalTerm<T>], n_cut: usize, lambda: T, c_next: T) -> Tail<T> {
    let mut value = Accumulator::new();
    let mut bound = T::zero();
    let kp1 = T::from_count(n_cut + 1);
    for term in terms {
        let shifts = term.shifts.len();
        let base = term.degree();
        if shifts == 0 {
            let t = power_tail(n_cut, term.power, lambda, c_next);
            value.add(term.coef * t.value);
            bound += term.coef.abs() * t.bound;
            continue;
        }
        let poly = term.laurent(LAURENT_ORDER);
        for (r, &phi) in poly.iter().enumerate() {
            if phi == T::zero() {
                continue;
            }
            let t = power_tail(n_cut, base + r, lambda, c_next);
            value.add(term.coef * phi * t.value);
            bound += (term.coef * phi).abs() * t.bound;
        }
        // remainder of the Laurent expansion beyond LAURENT_ORDER
        let amax = term
            .shifts
            .iter()
            .fold(T::zero(), |m, s| if s.abs() > m { s.abs() } else { m });
        if amax == T::zero() {
            continue;
        }
        let r = LAURENT_ORDER;
        let q = T::from_count(r + shifts + 1) / T::from_count(r + 2);
        let u0 = amax / kp1;
        let denom = T::one() - q * u0;
        if denom <= T::zero() || base + r + 1 < 2 {
            bound = T::infinity();
            continue;
        }
        let lead: T = binomial_f::<T>(r + shifts, r + 1) * amax.powi(r as i32 + 1);
        bound += term.coef.abs() * c_next * lead / denom * sum_power_bound::<T>(n_cut, base + r + 1);
    }
    Tail {
        value: value.value(),
        bound,
    }
}

/// Result of a coefficient series evaluated with an accelerated tail.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Accelerated<T> {
    pub value: T,
    pub bound: T,
    pub terms: usize,
}

/// Picks the smallest cut-off from 16, 32, 64, … whose certified tail bound
/// is at most `tol`; returns `None` if none up to `max_terms` qualifies.
pub(crate) fn choose_cut<T: Scalar>(
    max_terms: usize,
    tol: T,
    lambda: T,
    mut bound_at: impl FnMut(usize, T) -> T,
) -> std::result::Result<(usize, T), (usize, T)> {
    let mut cut = 16usize.min(max_terms.max(1));
    let mut c_next = coeff_at(cut + 1, lambda);
    loop {
        let b = bound_at(cut, c_next);
        if b <= tol {
            return Ok((cut, b));
        }
        if cut >= max_terms {
            return Err((cut, b));
        }
        let target = (cut * 2).min(max_terms);
        for n in (cut + 1)..(target + 1) {
            c_next = next_coeff(c_next, n, lambda);
        }
        cut = target;
    }
}

/// `Σ_{n≥1} c_n f(n)` with the cut-off chosen from the certified bound.
pub(crate) fn coeff_series<T: Scalar>(
    terms: &[RationalTerm<T>],
    lambda: T,
    tol: T,
    max_terms: usize,
) -> std::result::Result<Accelerated<T>, (usize, T)> {
    let (cut, _) = choose_cut(max_terms, tol, lambda, |cut, c_next| {
        rational_tail(terms, cut, lambda, c_next).bound
    })?;
    let mut acc = Accumulator::new();
    let mut c = T::one();
    for n in 1..=cut {
        if n > 1 {
            c = next_coeff(c, n - 1, lambda);
        }
        acc.add(c * eval_terms(terms, n));
    }
    let c_next = next_coeff(c, cut, lambda);
    let tail = rational_tail(terms, cut, lambda, c_next);
    acc.add(tail.value);
    Ok(Accelerated {
        value: acc.value(),
        bound: tail.bound,
        terms: cut,
    })
}

//! Degenerate zeta `ζ_λ(s) = Σ c_n n^{-s}` and degenerate Hurwitz zeta
//! `ζ*_λ(k, x) = Σ_{m≥0} 1/⟨m + x⟩_{k,λ}`.

use crate::accel::{choose_cut, coeff_series, RationalTerm};
use crate::error::{domain, Error, Result};
use crate::functions::SeriesValue;
use crate::kernel::{next_coeff, rising_factorial, DegenParam};
use crate::scalar::{Accumulator, Scalar};

/// Largest integer order routed through the accelerated tail.
const MAX_ACCELERATED_ORDER: usize = 64;

fn non_convergence<T: Scalar>(terms: usize, bound: T, tol: T) -> Error {
    Error::NonConvergence {
        terms,
        bound: bound.as_f64(),
        tol: tol.as_f64(),
    }
}

/// `ζ_λ(s)` for real `s ≥ 1` in strict mode.
///
/// `s = 1` returns the exact value `1/λ`. Integer `s` uses the accelerated
/// factorial-series tail; other `s` use the plain bound
/// `c_{N+1} N^{1-s}/(s-1)`, which needs many terms for `s` near 1.
pub fn zeta<T: Scalar>(s: T, lambda: DegenParam<T>, tol: T, max_terms: usize) -> Result<SeriesValue<T>> {
    lambda.require_strict("degenerate zeta")?;
    if !(s >= T::one()) {
        return Err(domain(format!("degenerate zeta is exposed for s >= 1 only, got {s}")));
    }
    let l = lambda.lambda();
    if s == T::one() {
        return Ok(SeriesValue::exact(T::one() / l));
    }
    if s.fract() == T::zero() && s <= T::from_count(MAX_ACCELERATED_ORDER) {
        let order = s.to_usize().unwrap_or(2);
        let terms = [RationalTerm::new(T::one(), order, Vec::new())];
        return match coeff_series(&terms, l, tol, max_terms) {
            Ok(acc) => Ok(SeriesValue::certified(acc.value, acc.bound, acc.terms, tol)),
            Err((n, b)) => Err(non_convergence(n, b, tol)),
        };
    }
    let sm1 = s - T::one();
    let plain = |cut: usize, c_next: T| c_next * T::from_count(cut).powf(-sm1) / sm1;
    let (cut, bound) = choose_cut(max_terms, tol, l, plain).map_err(|(n, b)| non_convergence(n, b, tol))?;
    let mut acc = Accumulator::new();
    let mut c = T::one();
    for n in 1..=cut {
        if n > 1 {
            c = next_coeff(c, n - 1, l);
        }
        acc.add(c * T::from_count(n).powf(-s));
    }
    Ok(SeriesValue::certified(acc.value(), bound, cut, tol))
}

/// Plain partial sum `Σ_{n≤N} c_n n^{-s}` with the integral-comparison bound.
pub fn zeta_partial_sum<T: Scalar>(s: T, lambda: DegenParam<T>, n_terms: usize) -> Result<SeriesValue<T>> {
    lambda.require_strict("degenerate zeta")?;
    if !(s > T::one()) {
        return Err(domain(format!("partial sums need s > 1, got {s}")));
    }
    if n_terms == 0 {
        return Err(Error::EmptyRequest("partial sum needs at least one term".into()));
    }
    let l = lambda.lambda();
    let mut acc = Accumulator::new();
    let mut c = T::one();
    for n in 1..=n_terms {
        if n > 1 {
            c = next_coeff(c, n - 1, l);
        }
        acc.add(c * T::from_count(n).powf(-s));
    }
    let sm1 = s - T::one();
    let bound = next_coeff(c, n_terms, l) * T::from_count(n_terms).powf(-sm1) / sm1;
    Ok(SeriesValue {
        value: acc.value(),
        tail_bound: bound,
        terms_used: n_terms,
        converged: bound == T::zero(),
        certified: true,
    })
}

/// Extra degrees in the inverse factorial expansion of the Hurwitz summand.
const HURWITZ_DEPTH: usize = 30;

/// Expansion of `1/⟨y⟩_{k,λ}` into `Σ β_L / (y(y+1)⋯(y+L-1))` plus
/// non-negative leftovers of degree `D`, obtained by repeatedly applying
/// `1/(y+b) = 1/(y+J) + (J-b)/((y+b)(y+J))`.
struct HurwitzExpansion<T> {
    /// (L, β_L)
    basis: Vec<(usize, T)>,
    leftover: T,
    degree: usize,
}

impl<T: Scalar> HurwitzExpansion<T> {
    fn new(k: usize, lambda: T) -> Self {
        let max_degree = k + HURWITZ_DEPTH;
        let max_j = max_degree + 1;
        // coef[t][j]: t factors (y + sλ), s < t, replaced; unit rising factorial of length j
        let mut coef = vec![vec![T::zero(); max_j + 1]; k + 1];
        coef[0][0] = T::one();
        let mut basis = Vec::new();
        let mut leftover = T::zero();
        for j in 0..=max_j {
            for t in 0..=k {
                let g = coef[t][j];
                if g == T::zero() {
                    continue;
                }
                if t == k {
                    basis.push((j, g));
                    continue;
                }
                let degree = (k - t) + j;
                if degree >= max_degree || j == max_j {
                    leftover += g;
                    continue;
                }
                let b = T::from_count(t) * lambda;
                coef[t + 1][j + 1] += g;
                let w = T::from_count(j) - b;
                if w != T::zero() {
                    coef[t][j + 1] += g * w;
                }
            }
        }
        Self {
            basis,
            leftover,
            degree: max_degree,
        }
    }

    /// Tail `Σ_{m≥M} 1/⟨m+x⟩_{k,λ}` and its bound.
    fn tail(&self, m_cut: usize, x: T) -> (T, T) {
        let y = T::from_count(m_cut) + x;
        let mut acc = Accumulator::new();
        for &(len, beta) in &self.basis {
            // Σ_{m≥M} 1/⟨m+x⟩_{L,1} = 1/((L-1) ⟨M+x⟩_{L-1,1})
            let mut den = T::from_count(len - 1);
            for i in 0..len - 1 {
                den *= y + T::from_count(i);
            }
            acc.add(beta / den);
        }
        let d = self.degree as i32;
        let bound = if self.leftover == T::zero() {
            T::zero()
        } else {
            self.leftover * (y.powi(-d) + y.powi(1 - d) / T::from_count(self.degree - 1))
        };
        (acc.value(), bound)
    }
}

/// `ζ*_λ(k, x)` for `k ≥ 2`, `x > 0`, strict mode.
///
/// The number of directly summed terms is fixed from the bound before summing.
pub fn hurwitz<T: Scalar>(k: usize, x: T, lambda: DegenParam<T>, tol: T, max_terms: usize) -> Result<SeriesValue<T>> {
    lambda.require_strict("degenerate Hurwitz zeta")?;
    if k < 2 {
        return Err(domain(format!("Hurwitz order must be at least 2, got {k}")));
    }
    if !(x > T::zero()) {
        return Err(domain(format!("Hurwitz shift must be positive, got {x}")));
    }
    let l = lambda.lambda();
    let exp = HurwitzExpansion::new(k, l);
    let mut m_cut = 16usize.min(max_terms.max(1));
    let bound = loop {
        let (_, b) = exp.tail(m_cut, x);
        if b <= tol {
            break b;
        }
        if m_cut >= max_terms {
            return Err(non_convergence(m_cut, b, tol));
        }
        m_cut = (m_cut * 2).min(max_terms);
    };
    let mut acc = Accumulator::new();
    for m in 0..m_cut {
        acc.add(T::one() / rising_factorial(T::from_count(m) + x, k, lambda));
    }
    let (tail, _) = exp.tail(m_cut, x);
    acc.add(tail);
    Ok(SeriesValue::certified(acc.value(), bound, m_cut, tol))
}

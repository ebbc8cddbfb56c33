//! Degenerate exponential, logarithm and polylogarithm.
//!
//! `e_λ^x(t) = (1 + λt)^{x/λ}` and `log_λ(1+t) = ((1+t)^λ - 1)/λ` are evaluated
//! in closed form; the power series are kept for cross-checking.
//!
//! `Li_{p,λ}(t) = Σ_{n≥1} c_n t^n / n^p` is summed directly for `t ≤ 1/2`. For
//! `1/2 < t ≤ 1` it is expanded around `t = 1` in `δ = 1 - t`:
//!
//! ```text
//! Li_{p,λ}(1 - δ) = Σ_i a_i δ^i + δ^λ Σ_i b_i δ^i
//! ```
//!
//! starting from `Li_{1,λ}(1-δ) = (1 - δ^λ)/λ` and integrating
//! `d/dx Li_{p+1,λ}(x) = Li_{p,λ}(x)/x` term by term, with `a_0 = ζ_λ(p)`.

use crate::error::{domain, Error, Result};
use crate::kernel::{next_coeff, DegenParam};
use crate::scalar::{Accumulator, Scalar};
use crate::zeta::zeta;

/// A series result together with its truncation analysis.
///
/// `tail_bound` covers truncation only; floating point rounding is not included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue<T> {
    pub value: T,
    pub tail_bound: T,
    pub terms_used: usize,
    pub converged: bool,
    /// The bound comes from a proven inequality rather than an estimate.
    pub certified: bool,
}

impl<T: Scalar> SeriesValue<T> {
    pub fn exact(value: T) -> Self {
        Self {
            value,
            tail_bound: T::zero(),
            terms_used: 0,
            converged: true,
            certified: true,
        }
    }

    pub(crate) fn certified(value: T, tail_bound: T, terms_used: usize, tol: T) -> Self {
        Self {
            value,
            tail_bound,
            terms_used,
            converged: tail_bound <= tol,
            certified: true,
        }
    }
}

/// `e_λ^x(t) = (1 + λt)^{x/λ}`.
pub fn degenerate_exp<T: Scalar>(x: T, t: T, lambda: DegenParam<T>) -> Result<T> {
    let l = lambda.lambda();
    let base = T::one() + l * t;
    if !(base > T::zero()) {
        return Err(domain(format!(
            "degenerate exponential needs 1 + lambda*t > 0, got {base}"
        )));
    }
    Ok(((x / l) * (l * t).ln_1p()).exp())
}

/// `log_λ(1 + t) = ((1+t)^λ - 1)/λ`, the compositional inverse of `e_λ`.
///
/// At `t = -1` the limit `-1/λ` is returned in strict mode.
pub fn degenerate_log1p<T: Scalar>(t: T, lambda: DegenParam<T>) -> Result<T> {
    let l = lambda.lambda();
    if t == -T::one() && lambda.is_strict() {
        return Ok(-T::one() / l);
    }
    if !(t > -T::one()) {
        return Err(domain(format!("degenerate logarithm needs 1 + t > 0, got t = {t}")));
    }
    Ok((l * t.ln_1p()).exp_m1() / l)
}

/// `-log_λ(1 - x) = (1 - (1-x)^λ)/λ` for `x ∈ [0, 1]`, accurate near `x = 0`.
pub(crate) fn neg_log_one_minus<T: Scalar>(x: T, lambda: T) -> T {
    if x >= T::one() {
        return T::one() / lambda;
    }
    -(lambda * (-x).ln_1p()).exp_m1() / lambda
}

/// Partial sums of `log_λ(1+t) = Σ_k (-1)^{k-1} c_k t^k / k`, `|t| < 1`.
///
/// The tail bound is the geometric one, `c_{K+1}|t|^{K+1} / ((K+1)(1-|t|))`,
/// certified in strict mode where `c_k/k` is non-increasing.
pub fn degenerate_log1p_series<T: Scalar>(
    t: T,
    lambda: DegenParam<T>,
    tol: T,
    max_terms: usize,
) -> Result<SeriesValue<T>> {
    if !(t.abs() < T::one()) {
        return Err(domain(format!("series needs |t| < 1, got {t}")));
    }
    let l = lambda.lambda();
    let at = t.abs();
    let one_minus = T::one() - at;
    let mut acc = Accumulator::new();
    let mut c = T::one();
    let mut pow = -T::one();
    let mut terms = 0;
    let mut bound = T::zero();
    for k in 1..=max_terms.max(1) {
        if k > 1 {
            c = next_coeff(c, k - 1, l);
        }
        // pow = (-1)^{k-1} t^k
        pow *= -t;
        acc.add(c * pow / T::from_count(k));
        terms = k;
        let c_next = next_coeff(c, k, l);
        bound = (c_next * pow * t).abs() / (T::from_count(k + 1) * one_minus);
        if bound <= tol {
            break;
        }
    }
    if bound > tol {
        return Err(Error::NonConvergence {
            terms,
            bound: bound.as_f64(),
            tol: tol.as_f64(),
        });
    }
    Ok(SeriesValue {
        value: acc.value(),
        tail_bound: bound,
        terms_used: terms,
        converged: true,
        certified: lambda.is_strict(),
    })
}

/// Degenerate polylogarithm `Li_{p,λ}(t)` for `p ≥ 1`, `-1 < t ≤ 1`.
///
/// `t = 1` requires strict mode and yields `ζ_λ(p)` (`1/λ` for `p = 1`).
/// `tol` bounds the absolute truncation error.
pub fn polylog<T: Scalar>(p: usize, t: T, lambda: DegenParam<T>, tol: T, max_terms: usize) -> Result<SeriesValue<T>> {
    if p == 0 {
        return Err(domain("polylog order must be at least 1"));
    }
    if !(t > -T::one() && t <= T::one()) {
        return Err(domain(format!("polylog argument must lie in (-1, 1], got {t}")));
    }
    if t == T::zero() {
        return Ok(SeriesValue::exact(T::zero()));
    }
    if !lambda.is_strict() {
        if t == T::one() {
            return Err(domain("polylog at t = 1 requires strict mode"));
        }
        return direct_series(p, t, lambda.lambda(), tol, max_terms, false);
    }
    if t > T::lit(0.5) {
        let ev = PolylogEvaluator::new(p, lambda, tol * T::lit(0.25))?;
        return ev.eval(t, tol);
    }
    direct_series(p, t, lambda.lambda(), tol, max_terms, true)
}

fn direct_series<T: Scalar>(p: usize, t: T, l: T, tol: T, max_terms: usize, strict: bool) -> Result<SeriesValue<T>> {
    let at = t.abs();
    let mut acc = Accumulator::new();
    let mut c = T::one();
    let mut pow = T::one();
    let mut terms = 0;
    let mut bound = T::infinity();
    for n in 1..=max_terms.max(1) {
        if n > 1 {
            c = next_coeff(c, n - 1, l);
        }
        pow *= t;
        acc.add(c * pow / T::from_count(n).powi(p as i32));
        terms = n;
        let c_next = next_coeff(c, n, l);
        let next_mag = (c_next * pow * t).abs() / T::from_count(n + 1).powi(p as i32);
        bound = if !strict {
            // estimate only: coefficients need not be monotone
            next_mag / (T::one() - at)
        } else if t < T::zero() {
            // alternating with monotone magnitudes
            next_mag
        } else {
            next_mag / (T::one() - at)
        };
        if bound <= tol {
            break;
        }
    }
    if bound > tol {
        return Err(Error::NonConvergence {
            terms,
            bound: bound.as_f64(),
            tol: tol.as_f64(),
        });
    }
    Ok(SeriesValue {
        value: acc.value(),
        tail_bound: bound,
        terms_used: terms,
        converged: true,
        certified: strict,
    })
}

const EXPANSION_TERMS: usize = 240;

/// Reusable evaluator of `Li_{p,λ}` for a fixed order and `λ` (strict mode).
///
/// Holds the expansion around `t = 1`, so repeated evaluation (quadrature)
/// costs a few dozen multiply-adds per point.
#[derive(Clone, Debug)]
pub struct PolylogEvaluator<T> {
    p: usize,
    lambda: DegenParam<T>,
    a: Vec<T>,
    b: Vec<T>,
    /// accumulated truncation bound of the ζ constants
    constant_bound: T,
    zeta_p: T,
}

impl<T: Scalar> PolylogEvaluator<T> {
    /// Builds the expansion; the ζ constants are computed to `zeta_tol` each.
    pub fn new(p: usize, lambda: DegenParam<T>, zeta_tol: T) -> Result<Self> {
        if p == 0 {
            return Err(domain("polylog order must be at least 1"));
        }
        lambda.require_strict("polylog expansion at t = 1")?;
        let l = lambda.lambda();
        let zt = zeta_tol.max(T::epsilon() * T::lit(0.5));
        let mut a = vec![T::zero(); EXPANSION_TERMS];
        let mut b = vec![T::zero(); EXPANSION_TERMS];
        a[0] = T::one() / l;
        b[0] = -T::one() / l;
        let mut constant_bound = T::zero();
        let mut zeta_p = T::one() / l;
        for q in 2..=p {
            let z = zeta(T::from_count(q), lambda, zt, usize::MAX)?;
            constant_bound += z.tail_bound;
            let mut na = vec![T::zero(); EXPANSION_TERMS];
            let mut nb = vec![T::zero(); EXPANSION_TERMS];
            na[0] = z.value;
            let mut ga = Accumulator::new();
            let mut gb = Accumulator::new();
            for i in 0..EXPANSION_TERMS - 1 {
                ga.add(a[i]);
                gb.add(b[i]);
                na[i + 1] = -ga.value() / T::from_count(i + 1);
                nb[i + 1] = -gb.value() / (T::from_count(i + 1) + l);
            }
            a = na;
            b = nb;
            zeta_p = z.value;
        }
        Ok(Self {
            p,
            lambda,
            a,
            b,
            constant_bound,
            zeta_p,
        })
    }

    pub fn order(&self) -> usize {
        self.p
    }

    /// `Li_{p,λ}(t)` for `0 ≤ t ≤ 1`; `t ≤ 1/2` falls back to the direct series.
    pub fn eval(&self, t: T, tol: T) -> Result<SeriesValue<T>> {
        if !(t >= T::zero() && t <= T::one()) {
            return Err(domain(format!("evaluator argument must lie in [0, 1], got {t}")));
        }
        let l = self.lambda.lambda();
        if t <= T::lit(0.5) {
            if t == T::zero() {
                return Ok(SeriesValue::exact(T::zero()));
            }
            return direct_series(self.p, t, l, tol, usize::MAX, true);
        }
        let delta = T::one() - t;
        if self.p == 1 {
            return Ok(SeriesValue::exact(neg_log_one_minus(t, l)));
        }
        if delta == T::zero() {
            return Ok(SeriesValue {
                value: self.zeta_p,
                tail_bound: self.constant_bound,
                terms_used: 0,
                converged: self.constant_bound <= tol,
                certified: true,
            });
        }
        // |a_i|, |b_i| ≤ 2^{p-2} i^{p-2} / λ for i ≥ 1
        let q = (self.p - 2) as i32;
        let scale = T::lit(2.0).powi(q) / l;
        let mut cut = EXPANSION_TERMS - 1;
        let mut bound = T::infinity();
        let mut dpow = delta;
        for k in 1..EXPANSION_TERMS {
            // dpow = δ^k
            let kk = T::from_count(k + 1);
            let rho = (T::from_count(k + 2) / kk).powi(q) * delta;
            if rho < T::one() {
                let b = T::lit(2.0) * scale * kk.powi(q) * dpow * delta / (T::one() - rho);
                if b <= tol * T::lit(0.5) {
                    cut = k;
                    bound = b;
                    break;
                }
            }
            dpow *= delta;
        }
        if !bound.is_finite() {
            return Err(Error::NonConvergence {
                terms: EXPANSION_TERMS,
                bound: f64::INFINITY,
                tol: tol.as_f64(),
            });
        }
        let mut sa = T::zero();
        let mut sb = T::zero();
        for i in (0..=cut).rev() {
            sa = sa * delta + self.a[i];
            sb = sb * delta + self.b[i];
        }
        let value = sa + (l * delta.ln()).exp() * sb;
        let tail = bound + self.constant_bound;
        Ok(SeriesValue {
            value,
            tail_bound: tail,
            terms_used: cut + 1,
            converged: tail <= tol,
            certified: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(l: f64) -> DegenParam<f64> {
        DegenParam::new(l).unwrap()
    }

    #[test]
    fn exp_examples() {
        assert!((degenerate_exp(1.0, 1.0, p(0.5)).unwrap() - 2.25).abs() < 1e-15);
        assert_eq!(degenerate_exp(3.0, 0.0, p(0.7)).unwrap(), 1.0);
        assert!((degenerate_exp(1.0, 0.3, p(1.0)).unwrap() - 1.3).abs() < 1e-15);
        assert!(degenerate_exp(1.0, -2.0, p(0.5)).is_err());
    }

    #[test]
    fn log_examples() {
        assert_eq!(degenerate_log1p(0.0, p(0.4)).unwrap(), 0.0);
        assert!((degenerate_log1p(0.3, p(1.0)).unwrap() - 0.3).abs() < 1e-15);
        let v = degenerate_log1p(1.0, p(0.5)).unwrap();
        assert!((v - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((v - 0.8284271247).abs() < 1e-10);
        assert_eq!(degenerate_log1p(-1.0, p(0.25)).unwrap(), -4.0);
        assert!(degenerate_log1p(-1.5, p(0.25)).is_err());
        assert!(degenerate_log1p(-1.0, DegenParam::extended(2.0).unwrap()).is_err());
    }

    #[test]
    fn log_series_examples() {
        let z = degenerate_log1p_series(0.0, p(0.5), 1e-15, 10).unwrap();
        assert_eq!((z.value, z.tail_bound), (0.0, 0.0));
        let one = degenerate_log1p_series(0.5, p(1.0), 1e-15, 5).unwrap();
        assert_eq!(one.value, 0.5);
        assert_eq!(one.tail_bound, 0.0);
        let s = degenerate_log1p_series(0.5, p(0.5), 1e-12, 40).unwrap();
        let closed = degenerate_log1p(0.5, p(0.5)).unwrap();
        assert!((s.value - closed).abs() <= s.tail_bound + 1e-15);
        assert!(matches!(
            degenerate_log1p_series(0.99, p(0.5), 1e-15, 10),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn round_trip() {
        for &l in &[0.1, 0.5, 1.0] {
            for &t in &[-0.9, -0.5, 0.0, 0.5, 2.0, 10.0] {
                let y = degenerate_log1p(t, p(l)).unwrap();
                let back = degenerate_exp(1.0, y, p(l)).unwrap();
                assert!(((back - (1.0 + t)) / (1.0 + t)).abs() <= 1e-12, "t={t} λ={l}");
            }
        }
    }

    #[test]
    fn series_agrees_with_closed_form_on_grid() {
        for i in 1..=20 {
            let l = i as f64 / 20.0;
            for j in -9..=9 {
                let t = j as f64 / 10.0;
                let s = degenerate_log1p_series(t, p(l), 1e-13, 100_000).unwrap();
                let closed = degenerate_log1p(t, p(l)).unwrap();
                assert!((s.value - closed).abs() <= s.tail_bound + 4e-16, "t={t} λ={l}");
            }
        }
    }

    #[test]
    fn polylog_examples() {
        assert_eq!(polylog(3, 0.0, p(0.5), 1e-14, 100).unwrap().value, 0.0);
        assert_eq!(polylog(2, 0.7, p(1.0), 1e-14, 100).unwrap().value, 0.7);
        let v = polylog(1, 0.5, p(0.5), 1e-14, 1000).unwrap();
        assert!((v.value - 0.5857864376).abs() < 1e-10);
        assert!(polylog(0, 0.5, p(0.5), 1e-14, 100).is_err());
        assert!(polylog(2, 1.5, p(0.5), 1e-14, 100).is_err());
        assert!(polylog(2, -1.0, p(0.5), 1e-14, 100).is_err());
        assert!(polylog(2, 1.0, DegenParam::extended(2.0).unwrap(), 1e-14, 100).is_err());
    }

    #[test]
    fn li1_is_negative_log() {
        for &l in &[0.1, 0.4, 0.75, 1.0] {
            for i in 1..20 {
                let t = i as f64 / 20.0;
                let li = polylog(1, t, p(l), 1e-14, 100_000).unwrap();
                let closed = -degenerate_log1p(-t, p(l)).unwrap();
                assert!((li.value - closed).abs() <= li.tail_bound + 1e-14, "t={t} λ={l}");
            }
        }
    }

    #[test]
    fn expansion_matches_direct_series_in_overlap() {
        // both routes are valid on (1/2, 1): the direct series just needs more terms
        for &l in &[0.2, 0.5, 0.9] {
            for order in 1..=5 {
                let ev = PolylogEvaluator::new(order, p(l), 1e-15).unwrap();
                for &t in &[0.55, 0.7, 0.85] {
                    let e = ev.eval(t, 1e-13).unwrap();
                    let d = direct_series(order, t, l, 1e-14, 10_000_000, true).unwrap();
                    assert!(
                        (e.value - d.value).abs() <= e.tail_bound + d.tail_bound + 1e-14,
                        "p={order} t={t} λ={l}: {} vs {}",
                        e.value,
                        d.value
                    );
                }
            }
        }
    }

    #[test]
    fn derivative_relation() {
        let h = 1e-5;
        for &l in &[0.3, 0.7] {
            for order in 2..=3 {
                for &x in &[0.2, 0.5, 0.8] {
                    let f = |t: f64| polylog(order, t, p(l), 1e-15, 1_000_000).unwrap().value;
                    let fd = (f(x + h) - f(x - h)) / (2.0 * h);
                    let rhs = polylog(order - 1, x, p(l), 1e-15, 1_000_000).unwrap().value / x;
                    assert!((fd - rhs).abs() <= 1e-6, "p={order} x={x} λ={l}");
                }
            }
        }
    }

    #[test]
    fn endpoint_identity() {
        for &l in &[0.25, 0.5, 0.75] {
            let v = polylog(1, 1.0, p(l), 1e-14, 10).unwrap().value;
            assert!(((v - 1.0 / l) * l).abs() <= 1e-10);
        }
    }

    #[test]
    fn small_lambda_continuity() {
        // classical Li_2(1/2) by its own series
        let classical: f64 = (1..200).map(|n| 0.5f64.powi(n) / (n * n) as f64).sum();
        let v = polylog(2, 0.5, p(1e-4), 1e-15, 100_000).unwrap().value;
        assert!((v - classical).abs() <= 5e-4);
    }

    #[test]
    fn negative_arguments_use_alternating_bound() {
        let v = polylog(2, -0.5, p(0.5), 1e-14, 10_000).unwrap();
        assert!(v.certified && v.converged);
        let brute: f64 = {
            let mut c = 1.0;
            let mut s = 0.0;
            for n in 1..200 {
                if n > 1 {
                    c *= ((n - 1) as f64 - 0.5) / (n - 1) as f64;
                }
                s += c * (-0.5f64).powi(n) / (n * n) as f64;
            }
            s
        };
        assert!((v.value - brute).abs() < 1e-14);
    }

    #[test]
    fn extended_mode_is_uncertified() {
        let v = polylog(2, 0.3, DegenParam::extended(-0.5).unwrap(), 1e-12, 10_000).unwrap();
        assert!(!v.certified);
    }
}

//! The integral family `I_λ(r, p) = ∫_0^1 x^{r-1} Li_{p,λ}(x) dx`.
//!
//! Repeated integration by parts gives
//!
//! ```text
//! I_λ(r, p) = Σ_{k=1}^{p-1} (-1)^{k-1} r^{-k} ζ_λ(p-k+1) + (-1)^{p-1} r^{-p} S_λ(r),
//! S_λ(r)    = Σ_{i=0}^{r-1} 1 / (C(λ+i, i) (λ+i+1)),
//! ```
//!
//! with `I_λ(r, 1) = S_λ(r)/r`. Quadrature of the defining integral is kept as
//! an independent check.

use crate::error::{domain, Result};
use crate::functions::{neg_log_one_minus, PolylogEvaluator, SeriesValue};
use crate::kernel::{generalized_binomial, DegenParam};
use crate::quadrature::{integrate, QuadratureResult};
use crate::scalar::{Accumulator, Scalar};
use crate::zeta::zeta;

/// Panel limit used by the plain quadrature entry points.
pub const DEFAULT_MAX_PANELS: usize = 20_000;

fn zeta_tol<T: Scalar>() -> T {
    T::lit(1e-13).max(T::epsilon())
}

/// `Σ_{i<r} 1/(C(λ+i, i)(λ+i+1))`.
fn boundary_sum<T: Scalar>(r: usize, l: T) -> T {
    (0..r)
        .map(|i| {
            let li = l + T::from_count(i);
            T::one() / (generalized_binomial(li, i) * (li + T::one()))
        })
        .collect::<Accumulator<T>>()
        .value()
}

/// `I_λ(r, p)` in closed form.
pub fn integral_closed<T: Scalar>(r: usize, p: usize, lambda: DegenParam<T>) -> Result<T> {
    Ok(integral_closed_with(r, p, lambda, zeta_tol())?.value)
}

/// `I_λ(r, p)` with every `ζ_λ` evaluated to `zeta_tol`; the tail bound is the
/// weighted sum of the `ζ_λ` bounds.
pub fn integral_closed_with<T: Scalar>(
    r: usize,
    p: usize,
    lambda: DegenParam<T>,
    zeta_tol: T,
) -> Result<SeriesValue<T>> {
    if r == 0 || p == 0 {
        return Err(domain(format!("I(r, p) needs r, p >= 1, got r = {r}, p = {p}")));
    }
    lambda.require_strict("integral family")?;
    let l = lambda.lambda();
    let rf = T::from_count(r);
    let s = boundary_sum(r, l);
    if p == 1 {
        return Ok(SeriesValue::exact(s / rf));
    }
    let mut acc = Accumulator::new();
    let mut bound = T::zero();
    let mut terms = 0;
    let mut rk = T::one();
    for k in 1..p {
        rk /= rf;
        let z = zeta(T::from_count(p - k + 1), lambda, zeta_tol, usize::MAX)?;
        let sign = if k % 2 == 1 { T::one() } else { -T::one() };
        acc.add(sign * rk * z.value);
        bound += rk * z.tail_bound;
        terms = terms.max(z.terms_used);
    }
    let sign = if p % 2 == 1 { T::one() } else { -T::one() };
    acc.add(sign * rk / rf * s);
    Ok(SeriesValue {
        value: acc.value(),
        tail_bound: bound,
        terms_used: terms,
        converged: true,
        certified: true,
    })
}

/// Adaptive quadrature of `∫_0^1 x^{r-1} Li_{p,λ}(x) dx`.
pub fn integral_quadrature<T: Scalar>(
    r: usize,
    p: usize,
    lambda: DegenParam<T>,
    tol: T,
) -> Result<QuadratureResult<T>> {
    integral_quadrature_with(r, p, lambda, tol, DEFAULT_MAX_PANELS)
}

/// As [`integral_quadrature`] with an explicit panel limit.
///
/// The polylogarithm is evaluated to `tol/100` per point and its largest
/// reported bound is added to the error estimate.
pub fn integral_quadrature_with<T: Scalar>(
    r: usize,
    p: usize,
    lambda: DegenParam<T>,
    tol: T,
    max_panels: usize,
) -> Result<QuadratureResult<T>> {
    if r == 0 || p == 0 {
        return Err(domain(format!("I(r, p) needs r, p >= 1, got r = {r}, p = {p}")));
    }
    if !(tol > T::zero()) {
        return Err(domain("quadrature tolerance must be positive"));
    }
    let li = PolylogEvaluator::new(p, lambda, zeta_tol())?;
    let point_tol = tol * T::lit(0.01);
    let mut worst = T::zero();
    let mut res = integrate(
        |x: T| {
            let v = li.eval(x, point_tol)?;
            worst = worst.max(v.tail_bound);
            Ok(x.powi(r as i32 - 1) * v.value)
        },
        T::zero(),
        T::one(),
        tol * T::lit(0.9),
        max_panels,
    )?;
    res.error_estimate += worst;
    res.converged = res.converged && res.error_estimate <= tol;
    Ok(res)
}

/// Adaptive quadrature of `∫_0^1 (-log_λ(1-x))^p (1-x)^{n-p} / x dx`, the
/// integral form of `Σ_k H_{k,p,λ} n!/(k(k+1)⋯(k+n))`.
pub fn quadrature_theorem6<T: Scalar>(
    n: usize,
    p: usize,
    lambda: DegenParam<T>,
    tol: T,
) -> Result<QuadratureResult<T>> {
    quadrature_theorem6_with(n, p, lambda, tol, DEFAULT_MAX_PANELS)
}

/// As [`quadrature_theorem6`] with an explicit panel limit.
pub fn quadrature_theorem6_with<T: Scalar>(
    n: usize,
    p: usize,
    lambda: DegenParam<T>,
    tol: T,
    max_panels: usize,
) -> Result<QuadratureResult<T>> {
    if p == 0 || n < p {
        return Err(domain(format!("need n >= p >= 1, got n = {n}, p = {p}")));
    }
    if !(tol > T::zero()) {
        return Err(domain("quadrature tolerance must be positive"));
    }
    lambda.require_strict("convolution integral")?;
    let l = lambda.lambda();
    let f = |x: T| {
        if x == T::zero() {
            return Ok(if p == 1 { T::one() } else { T::zero() });
        }
        let g = neg_log_one_minus(x, l);
        Ok(g.powi(p as i32) * (T::one() - x).powi((n - p) as i32) / x)
    };
    integrate(f, T::zero(), T::one(), tol, max_panels)
}

/// `w_k(n) = n!/(k(k+1)⋯(k+n)) = ∫_0^1 x^{k-1}(1-x)^n dx`.
pub fn weight<T: Scalar>(k: usize, n: usize) -> T {
    let kf = T::from_count(k);
    (1..=n).fold(T::one() / kf, |acc, i| acc * T::from_count(i) / (kf + T::from_count(i)))
}

/// `Σ_{k>K} w_k(n) = (n-1)!/((K+1)(K+2)⋯(K+n))`, by telescoping.
pub fn weight_tail<T: Scalar>(k: usize, n: usize) -> T {
    let kf = T::from_count(k);
    (1..n).fold(T::one() / (kf + T::from_count(n)), |acc, i| {
        acc * T::from_count(i) / (kf + T::from_count(i))
    })
}

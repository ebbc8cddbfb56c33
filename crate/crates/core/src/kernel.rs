//! Degenerate factorials, binomials and the universal series coefficient.
//!
//! The coefficient
//!
//! ```text
//! c_n = (-1)^(n-1) λ^(n-1) (1)_{n,1/λ} / (n-1)! = ∏_{j=1}^{n-1} (j - λ) / (n-1)!
//! ```
//!
//! is the common building block of the degenerate polylogarithm, harmonic
//! numbers and zeta function. It is produced by the ratio recurrence
//! `c_{n+1} = c_n (n - λ) / n`.

use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;

/// Domain mode of the degeneracy parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `0 < λ ≤ 1`: coefficients are non-negative and non-increasing, every
    /// tail bound in the crate is certified.
    Strict,
    /// Any nonzero `λ`; positivity is not guaranteed and tail bounds become estimates.
    Extended,
}

/// Validated degeneracy parameter `λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegenParam<T> {
    lambda: T,
    mode: Mode,
}

impl<T: Scalar> DegenParam<T> {
    /// Strict-mode parameter, `0 < λ ≤ 1`.
    pub fn new(lambda: T) -> Result<Self> {
        if !(lambda > T::zero() && lambda <= T::one()) {
            return Err(domain(format!("strict mode requires 0 < lambda <= 1, got {lambda}")));
        }
        Ok(Self {
            lambda,
            mode: Mode::Strict,
        })
    }

    /// Extended-mode parameter: any finite nonzero `λ`.
    pub fn extended(lambda: T) -> Result<Self> {
        if lambda == T::zero() || !lambda.is_finite() {
            return Err(domain(format!("lambda must be finite and nonzero, got {lambda}")));
        }
        Ok(Self {
            lambda,
            mode: Mode::Extended,
        })
    }

    #[inline]
    pub fn lambda(&self) -> T {
        self.lambda
    }

    #[inline]
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// True when `λ` lies in `(0, 1]`, regardless of how it was constructed.
    #[inline]
    pub fn is_strict(&self) -> bool {
        self.lambda > T::zero() && self.lambda <= T::one()
    }

    pub(crate) fn require_strict(&self, what: &str) -> Result<()> {
        if self.is_strict() {
            Ok(())
        } else {
            Err(domain(format!(
                "{what} requires strict mode (0 < lambda <= 1), got lambda = {}",
                self.lambda
            )))
        }
    }
}

/// `(x)_{n,λ} = x (x - λ) ⋯ (x - (n-1)λ)`, with `(x)_{0,λ} = 1`.
pub fn falling_factorial<T: Scalar>(x: T, n: usize, lambda: DegenParam<T>) -> T {
    let l = lambda.lambda();
    (0..n).fold(T::one(), |acc, j| acc * (x - T::from_count(j) * l))
}

/// `⟨x⟩_{n,λ} = x (x + λ) ⋯ (x + (n-1)λ)`, with `⟨x⟩_{0,λ} = 1`.
pub fn rising_factorial<T: Scalar>(x: T, n: usize, lambda: DegenParam<T>) -> T {
    let l = lambda.lambda();
    (0..n).fold(T::one(), |acc, j| acc * (x + T::from_count(j) * l))
}

/// Ordinary binomial coefficient with a real upper argument, `x(x-1)⋯(x-n+1)/n!`.
pub fn generalized_binomial<T: Scalar>(x: T, n: usize) -> T {
    (0..n).fold(T::one(), |acc, j| acc * (x - T::from_count(j)) / T::from_count(j + 1))
}

/// Degenerate binomial coefficient `(x)_{n,λ} / n!`.
pub fn degenerate_binomial<T: Scalar>(x: T, n: usize, lambda: DegenParam<T>) -> T {
    let l = lambda.lambda();
    (0..n).fold(T::one(), |acc, j| {
        acc * (x - T::from_count(j) * l) / T::from_count(j + 1)
    })
}

/// Prefix `c_1..c_N` of the universal coefficients for a fixed `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable<T> {
    lambda: T,
    // coeffs[0] = c_1
    coeffs: Vec<T>,
}

impl<T: Scalar> CoefficientTable<T> {
    pub fn lambda(&self) -> T {
        self.lambda
    }

    /// Number of stored coefficients `N`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `c_n` for `1 ≤ n ≤ N`.
    pub fn get(&self, n: usize) -> T {
        assert!(n >= 1 && n <= self.coeffs.len(), "coefficient index {n} out of range");
        self.coeffs[n - 1]
    }

    /// Coefficients `c_1, c_2, …` in order.
    pub fn as_slice(&self) -> &[T] {
        &self.coeffs
    }

    /// Iterates `(n, c_n)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.coeffs.iter().enumerate().map(|(i, &c)| (i + 1, c))
    }
}

/// Successor in the ratio recurrence: `c_{n+1}` from `c_n`.
#[inline]
pub(crate) fn next_coeff<T: Scalar>(c_n: T, n: usize, lambda: T) -> T {
    let nf = T::from_count(n);
    c_n * (nf - lambda) / nf
}

/// `c_n` for a single index, via the recurrence.
pub(crate) fn coeff_at<T: Scalar>(n: usize, lambda: T) -> T {
    let mut c = T::one();
    for j in 1..n {
        c = next_coeff(c, j, lambda);
    }
    c
}

/// Builds `c_1..c_N`.
pub fn coeff_prefix<T: Scalar>(n: usize, lambda: DegenParam<T>) -> Result<CoefficientTable<T>> {
    if n == 0 {
        return Err(Error::EmptyRequest("coefficient table needs at least one entry".into()));
    }
    let l = lambda.lambda();
    let mut coeffs = Vec::with_capacity(n);
    let mut c = T::one();
    coeffs.push(c);
    for j in 1..n {
        c = next_coeff(c, j, l);
        coeffs.push(c);
    }
    Ok(CoefficientTable { lambda: l, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(l: f64) -> DegenParam<f64> {
        DegenParam::new(l).unwrap()
    }

    fn ext(l: f64) -> DegenParam<f64> {
        DegenParam::extended(l).unwrap()
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(falling_factorial(5.0, 0, p(0.5)), 1.0);
        assert_eq!(falling_factorial(1.0, 2, p(0.5)), 0.5);
        assert_eq!(falling_factorial(2.0, 3, p(0.5)), 3.0);
        assert_eq!(rising_factorial(3.0, 0, p(0.2)), 1.0);
        assert_eq!(rising_factorial(1.0, 3, p(0.5)), 3.0);
        assert_eq!(rising_factorial(2.0, 2, p(0.25)), 4.5);
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(generalized_binomial(0.7, 0), 1.0);
        assert_eq!(generalized_binomial(1.5, 1), 1.5);
        assert_eq!(generalized_binomial(2.5, 2), 1.875);
        assert_eq!(degenerate_binomial(1.0, 2, p(0.5)), 0.25);
        assert_eq!(degenerate_binomial(4.0, 0, p(0.3)), 1.0);
        assert_eq!(degenerate_binomial(1.0, 1, p(0.9)), 1.0);
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(coeff_prefix(1, p(0.5)).unwrap().as_slice(), &[1.0]);
        assert_eq!(coeff_prefix(2, p(0.5)).unwrap().as_slice(), &[1.0, 0.5]);
        // direct product oracle: ∏_{j<n}(j-λ)/(n-1)!  -> 1, 1/2, (1/2)(3/2)/2, (1/2)(3/2)(5/2)/6
        assert_eq!(coeff_prefix(4, p(0.5)).unwrap().as_slice(), &[1.0, 0.5, 0.375, 0.3125]);
        assert_eq!(
            coeff_prefix::<f64>(0, p(0.5)),
            Err(Error::EmptyRequest("coefficient table needs at least one entry".into()))
        );
    }

    #[test]
    fn param_validation() {
        assert!(DegenParam::new(0.0).is_err());
        assert!(DegenParam::new(1.5).is_err());
        assert!(DegenParam::new(-0.2).is_err());
        assert!(DegenParam::new(1.0).is_ok());
        assert!(DegenParam::extended(-0.2).is_ok());
        assert!(DegenParam::extended(0.0).is_err());
        assert!(DegenParam::extended(f64::NAN).is_err());
        assert_eq!(ext(0.5).mode(), Mode::Extended);
        assert!(ext(0.5).is_strict());
        assert!(!ext(2.0).is_strict());
    }

    #[test]
    fn lambda_one_collapses() {
        let t = coeff_prefix(50, p(1.0)).unwrap();
        assert_eq!(t.get(1), 1.0);
        assert!(t.iter().skip(1).all(|(_, c)| c == 0.0));
    }

    #[test]
    fn literal_definition_matches_recurrence() {
        for &l in &[0.1, 0.5, 0.9] {
            let table = coeff_prefix(20, p(l)).unwrap();
            let inv = ext(1.0 / l);
            let mut fact = 1.0;
            for n in 1..=20usize {
                if n > 1 {
                    fact *= (n - 1) as f64;
                }
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                let literal = sign * l.powi(n as i32 - 1) * falling_factorial(1.0, n, inv) / fact;
                let got = table.get(n);
                assert!(
                    ((got - literal) / literal).abs() <= 1e-12,
                    "n={n} λ={l}: {got} vs {literal}"
                );
            }
        }
    }

    #[test]
    fn f32_instantiation() {
        let t = coeff_prefix(4, DegenParam::new(0.5f32).unwrap()).unwrap();
        assert_eq!(t.as_slice(), &[1.0f32, 0.5, 0.375, 0.3125]);
    }

    proptest! {
        #[test]
        fn strict_coefficients_monotone(l in 1e-6f64..=1.0, n in 1usize..400) {
            let t = coeff_prefix(n, p(l)).unwrap();
            let s = t.as_slice();
            prop_assert!(s.iter().all(|&c| (0.0..=1.0).contains(&c)));
            prop_assert!(s.windows(2).all(|w| w[1] <= w[0]));
        }

        #[test]
        fn step_laws(x in -10.0f64..10.0, l in -3.0f64..3.0, n in 0usize..30) {
            prop_assume!(l.abs() > 1e-3);
            let lp = ext(l);
            let nf = n as f64;
            let fall = falling_factorial(x, n, lp) * (x - nf * l);
            let fall_next = falling_factorial(x, n + 1, lp);
            let tol = 4.0 * (n + 1) as f64 * f64::EPSILON;
            prop_assert!((fall - fall_next).abs() <= tol * fall_next.abs().max(f64::MIN_POSITIVE));
            let rise = rising_factorial(x, n, lp) * (x + nf * l);
            let rise_next = rising_factorial(x, n + 1, lp);
            prop_assert!((rise - rise_next).abs() <= tol * rise_next.abs().max(f64::MIN_POSITIVE));
        }

        #[test]
        fn rising_falling_duality(x in -5.0f64..5.0, l in 0.01f64..2.0, n in 0usize..=20) {
            let lp = ext(l);
            let rise = rising_factorial(x, n, lp);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let dual = sign * falling_factorial(-x, n, lp);
            prop_assert!((rise - dual).abs() <= 1e-12 * rise.abs().max(1e-300));
        }
    }
}

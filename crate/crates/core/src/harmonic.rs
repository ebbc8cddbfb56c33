//! Degenerate harmonic numbers `H_{n,λ} = Σ_{k≤n} c_k/k`, their higher-order
//! versions `H^{(p)}_{n,λ} = Σ_{l≤n} c_l/l^p`, and the composition sums
//! `H_{k,p,λ} = Σ_{k_1+⋯+k_p=k} H_{k_1,λ} ⋯ H_{k_p,λ}`.

use crate::error::{domain, Result};
use crate::kernel::{next_coeff, DegenParam};
use crate::scalar::{Accumulator, Scalar};

/// `H^{(p)}_{n,λ}` for `n = 0..=N`; order 1 holds the plain degenerate harmonic numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicTable<T> {
    lambda: T,
    order: usize,
    values: Vec<T>,
}

impl<T: Scalar> HarmonicTable<T> {
    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Largest index `N`.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> T {
        self.values[n]
    }

    /// Values indexed from `n = 0`.
    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// `H_{k,p,λ}` for `k = p..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionTable<T> {
    lambda: T,
    power: usize,
    // values[k] for k = 0..=N, zero below p
    values: Vec<T>,
}

impl<T: Scalar> ConvolutionTable<T> {
    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// `H_{k,p,λ}`; zero for `k < p`.
    pub fn get(&self, k: usize) -> T {
        self.values[k]
    }

    /// Values `H_{p,p,λ}, …, H_{N,p,λ}`.
    pub fn values(&self) -> &[T] {
        &self.values[self.power..]
    }
}

/// One pass over `c_1..c_N`.
pub fn harmonic_prefix<T: Scalar>(n: usize, p: usize, lambda: DegenParam<T>) -> Result<HarmonicTable<T>> {
    if p == 0 {
        return Err(domain("harmonic order must be at least 1"));
    }
    let l = lambda.lambda();
    let mut values = Vec::with_capacity(n + 1);
    values.push(T::zero());
    let mut acc = Accumulator::new();
    let mut c = T::one();
    for k in 1..=n {
        if k > 1 {
            c = next_coeff(c, k - 1, l);
        }
        acc.add(c / T::from_count(k).powi(p as i32));
        values.push(acc.value());
    }
    Ok(HarmonicTable {
        lambda: l,
        order: p,
        values,
    })
}

/// `H_{n,λ}`.
pub fn harmonic<T: Scalar>(n: usize, lambda: DegenParam<T>) -> T {
    harmonic_higher(n, 1, lambda).expect("order 1 is valid")
}

/// `H^{(p)}_{n,λ}`.
pub fn harmonic_higher<T: Scalar>(n: usize, p: usize, lambda: DegenParam<T>) -> Result<T> {
    Ok(harmonic_prefix(n, p, lambda)?.get(n))
}

/// `H_{k,p,λ}` for `p ≤ k ≤ N` by `p - 1` direct convolutions of the
/// order-1 harmonic table with itself, accumulated in ascending index order.
pub fn convolution<T: Scalar>(n: usize, p: usize, lambda: DegenParam<T>) -> Result<ConvolutionTable<T>> {
    if p == 0 || n < p {
        return Err(domain(format!("convolution needs N >= p >= 1, got N = {n}, p = {p}")));
    }
    let base = harmonic_prefix(n, 1, lambda)?;
    let h = base.values();
    let mut cur = h.to_vec();
    for power in 2..=p {
        let mut next = vec![T::zero(); n + 1];
        for (k, slot) in next.iter_mut().enumerate().skip(power) {
            let mut acc = T::zero();
            // first factor index i, remaining power-1 factors sum to k-i ≥ power-1
            for i in 1..=(k + 1 - power) {
                acc += h[i] * cur[k - i];
            }
            *slot = acc;
        }
        cur = next;
    }
    Ok(ConvolutionTable {
        lambda: lambda.lambda(),
        power: p,
        values: cur,
    })
}

/// `H_{k,p,λ}` from the binomial expansion of the generating function
///
/// ```text
/// (-log_λ(1-x)/(1-x))^p = λ^{-p} Σ_{j=0}^{p} C(p,j) (-1)^j (1-x)^{λj-p},
/// ```
///
/// whose `x^k` coefficient is a signed sum of rising-factorial ratios
/// `(p - λj)_k / k!`. Linear in `N`; used when tables reach `10^5` entries.
pub fn convolution_by_expansion<T: Scalar>(n: usize, p: usize, lambda: DegenParam<T>) -> Result<ConvolutionTable<T>> {
    if p == 0 || n < p {
        return Err(domain(format!("convolution needs N >= p >= 1, got N = {n}, p = {p}")));
    }
    let l = lambda.lambda();
    let mut values = vec![T::zero(); n + 1];
    let mut binom = T::one();
    let scale = l.powi(-(p as i32));
    for j in 0..=p {
        if j > 0 {
            binom = binom * T::from_count(p - j + 1) / T::from_count(j);
        }
        let sign = if j % 2 == 0 { T::one() } else { -T::one() };
        let alpha = T::from_count(p) - l * T::from_count(j);
        let w = sign * binom * scale;
        let mut r = T::one();
        for (k, slot) in values.iter_mut().enumerate() {
            if k > 0 {
                r = r * (T::from_count(k - 1) + alpha) / T::from_count(k);
            }
            *slot += w * r;
        }
    }
    for v in values.iter_mut().take(p) {
        *v = T::zero();
    }
    Ok(ConvolutionTable {
        lambda: l,
        power: p,
        values,
    })
}

/// Classical `H_n^{(α)} = Σ_{k≤n} k^{-α}`.
pub fn harmonic_classical<T: Scalar>(n: usize, alpha: usize) -> T {
    (1..=n)
        .map(|k| T::from_count(k).powi(-(alpha as i32)))
        .collect::<Accumulator<T>>()
        .value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::coeff_prefix;
    use crate::zeta::zeta;

    fn p(l: f64) -> DegenParam<f64> {
        DegenParam::new(l).unwrap()
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(0, p(0.5)), 0.0);
        assert_eq!(harmonic(2, p(0.5)), 1.25);
        assert_eq!(harmonic(5, p(1.0)), 1.0);
        assert_eq!(harmonic_higher(0, 3, p(0.5)).unwrap(), 0.0);
        assert_eq!(harmonic_higher(2, 2, p(0.5)).unwrap(), 1.125);
        assert_eq!(harmonic_higher(10, 2, p(1.0)).unwrap(), 1.0);
        assert!(harmonic_higher(3, 0, p(0.5)).is_err());
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(harmonic_prefix(2, 1, p(0.5)).unwrap().values(), &[0.0, 1.0, 1.25]);
        assert_eq!(harmonic_prefix(3, 1, p(1.0)).unwrap().values(), &[0.0, 1.0, 1.0, 1.0]);
        let v = harmonic_prefix(4, 2, p(0.5)).unwrap().get(4);
        let hand = 1.0 + 0.5 / 4.0 + 0.375 / 9.0 + 0.3125 / 16.0;
        assert!((v - hand).abs() < 1e-15);
        assert!((v - 1.186197916).abs() < 1e-9);
    }

    #[test]
    fn table_differences_are_coefficients() {
        let t = harmonic_prefix(60, 3, p(0.35)).unwrap();
        let c = coeff_prefix(60, p(0.35)).unwrap();
        for n in 1..=60 {
            let d = t.get(n) - t.get(n - 1);
            assert!((d - c.get(n) / (n as f64).powi(3)).abs() < 1e-15);
        }
    }

    /// Enumerates compositions of k into p positive parts.
    fn brute_force(k: usize, p: usize, h: &[f64]) -> f64 {
        if p == 1 {
            return h[k];
        }
        (1..=k.saturating_sub(p - 1))
            .map(|i| h[i] * brute_force(k - i, p - 1, h))
            .sum()
    }

    #[test]
    fn convolution_examples() {
        let c = convolution(2, 2, p(0.5)).unwrap();
        assert_eq!(c.get(2), 1.0);
        let c = convolution(3, 2, p(0.5)).unwrap();
        assert_eq!(c.get(3), 2.5);
        let c = convolution(5, 1, p(0.3)).unwrap();
        assert_eq!(c.values(), &harmonic_prefix(5, 1, p(0.3)).unwrap().values()[1..]);
        assert!(convolution(2, 3, p(0.5)).is_err());
    }

    #[test]
    fn convolution_matches_enumeration() {
        for &l in &[0.25, 0.5, 0.8] {
            let h = harmonic_prefix(10, 1, p(l)).unwrap();
            for power in 1..=3 {
                let c = convolution(10, power, p(l)).unwrap();
                for k in power..=10 {
                    let bf = brute_force(k, power, h.values());
                    assert!((c.get(k) - bf).abs() <= f64::EPSILON * bf, "k={k} p={power}");
                }
            }
        }
    }

    #[test]
    fn expansion_matches_direct_convolution() {
        for &l in &[0.25, 0.5, 1.0] {
            for power in 1..=3 {
                let a = convolution(300, power, p(l)).unwrap();
                let b = convolution_by_expansion(300, power, p(l)).unwrap();
                for k in power..=300 {
                    let (x, y) = (a.get(k), b.get(k));
                    assert!(((x - y) / x).abs() < 1e-11, "λ={l} p={power} k={k}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn convolution_first_entry_is_one() {
        for power in 1..=4 {
            assert_eq!(convolution(8, power, p(0.4)).unwrap().get(power), 1.0);
        }
    }

    #[test]
    fn monotone_and_bounded() {
        let l = 0.5;
        let h1 = harmonic_prefix(5000, 1, p(l)).unwrap();
        assert!(h1.values().windows(2).all(|w| w[1] >= w[0]));
        assert!(h1.values().iter().all(|&v| v < 1.0 / l));
        for order in 2..=3 {
            let h = harmonic_prefix(5000, order, p(l)).unwrap();
            let z = zeta(order as f64, p(l), 1e-15, 100_000).unwrap();
            assert!(h.values().windows(2).all(|w| w[1] >= w[0]));
            assert!(h.values().iter().all(|&v| v <= z.value + z.tail_bound));
        }
    }

    #[test]
    fn classical_examples() {
        assert_eq!(harmonic_classical::<f64>(0, 1), 0.0);
        assert!((harmonic_classical::<f64>(3, 1) - 1.8333333333).abs() < 1e-10);
        assert_eq!(harmonic_classical::<f64>(2, 2), 1.25);
    }
}

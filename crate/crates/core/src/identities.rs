//! Registry and verification engine for the harmonic-sum identities.
//!
//! Every left-hand side of the form `Σ_k H^{(p)}_{k,λ} W(k)` is summed directly
//! for `k ≤ K` and completed by summation by parts,
//!
//! ```text
//! Σ_{k>K} H^{(p)}_{k,λ} W(k) = H^{(p)}_{K,λ} Ŵ(K) + Σ_{i>K} c_i i^{-p} Ŵ(i-1),
//! ```
//!
//! where `Ŵ(K) = Σ_{k>K} W(k)` telescopes to a rational function. The last sum
//! is a coefficient series with a certified accelerated tail, so the reported
//! bound is a proof rather than an estimate. `K` is the first of 16, 32, 64, …
//! whose bound meets the budget.
//!
//! The engine works in `f64`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::accel::{choose_cut, coeff_series, rational_tail, RationalTerm};
use crate::error::{Error, Result};
use crate::functions::SeriesValue;
use crate::harmonic::convolution_by_expansion;
use crate::integrals::{integral_closed_with, quadrature_theorem6_with, weight, weight_tail};
use crate::kernel::{degenerate_binomial, next_coeff, rising_factorial, DegenParam};
use crate::scalar::Accumulator;
use crate::zeta::{hurwitz, zeta};

/// Agreement required between the `t6` series and its quadrature.
pub const T6_SERIES_TOL: f64 = 1e-3;
/// Agreement required between the `t6` quadrature and the Hurwitz side.
pub const T6_ORACLE_TOL: f64 = 1e-8;

/// Identity identifiers, in registry order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    T1,
    T2a,
    T2,
    T3,
    T4,
    T5a,
    T5b,
    Gen36,
    T6,
    C7,
}

impl IdentityId {
    pub const ALL: [IdentityId; 10] = [
        IdentityId::T1,
        IdentityId::T2a,
        IdentityId::T2,
        IdentityId::T3,
        IdentityId::T4,
        IdentityId::T5a,
        IdentityId::T5b,
        IdentityId::Gen36,
        IdentityId::T6,
        IdentityId::C7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::T1 => "t1",
            IdentityId::T2a => "t2a",
            IdentityId::T2 => "t2",
            IdentityId::T3 => "t3",
            IdentityId::T4 => "t4",
            IdentityId::T5a => "t5a",
            IdentityId::T5b => "t5b",
            IdentityId::Gen36 => "gen36",
            IdentityId::T6 => "t6",
            IdentityId::C7 => "c7",
        }
    }

    /// Comma separated list of all identifiers.
    pub fn valid_names() -> String {
        Self::ALL.iter().map(|i| i.name()).collect::<Vec<_>>().join(", ")
    }

    pub fn uses_n(self) -> bool {
        matches!(
            self,
            IdentityId::T2 | IdentityId::T4 | IdentityId::Gen36 | IdentityId::T6 | IdentityId::C7
        )
    }

    pub fn uses_r(self) -> bool {
        self == IdentityId::T1
    }

    pub fn uses_m(self) -> bool {
        matches!(self, IdentityId::Gen36 | IdentityId::C7)
    }

    /// Human readable parameter constraints.
    pub fn constraints(self) -> &'static str {
        match self {
            IdentityId::T1 => "r >= 1, p >= 2",
            IdentityId::T2 => "n >= 2, p >= 1",
            IdentityId::T3 => "p >= 2",
            IdentityId::T4 => "n >= 1, p >= 1",
            IdentityId::Gen36 => "m > n >= 0, p >= 1",
            IdentityId::T6 => "n >= p >= 1",
            IdentityId::C7 => "n >= p >= 1, m >= 0",
            _ => "p >= 1",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Constraint(format!("unknown identity `{s}`; valid ids: {}", Self::valid_names())))
    }
}

/// Parameters of one identity instance. `n`, `r` and `m` are set only for ids
/// that use them; for `c7`, `m` is the last term index checked.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub lambda: f64,
    pub p: usize,
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub m: Option<usize>,
}

impl Params {
    pub fn new(lambda: f64, p: usize) -> Self {
        Self {
            lambda,
            p,
            n: None,
            r: None,
            m: None,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_r(mut self, r: usize) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    fn sort_key(&self) -> (u64, usize, Option<usize>, Option<usize>, Option<usize>) {
        // positive lambdas order like their bit patterns
        (self.lambda.to_bits(), self.p, self.n, self.r, self.m)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lambda={} p={}", self.lambda, self.p)?;
        for (k, v) in [("n", self.n), ("r", self.r), ("m", self.m)] {
            if let Some(v) = v {
                write!(f, " {k}={v}")?;
            }
        }
        Ok(())
    }
}

/// Budget shared by every side of a verification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceBudget {
    pub tol: f64,
    pub max_terms: usize,
    pub quad_tol: f64,
    pub quad_max_panels: usize,
}

impl Default for ToleranceBudget {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_terms: 100_000,
            quad_tol: 1e-10,
            quad_max_panels: 20_000,
        }
    }
}

impl ToleranceBudget {
    fn check(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.quad_tol > 0.0) || self.max_terms == 0 || self.quad_max_panels == 0 {
            return Err(Error::Constraint("tolerance budget entries must be positive".into()));
        }
        Ok(())
    }
}

/// Independent quadrature value attached to `t1` and `t6` reports.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossOracle {
    pub value: f64,
    pub error_estimate: f64,
    /// Agreement of the quadrature with the reference side.
    pub agrees: bool,
}

/// Why a verification could not be completed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureKind {
    /// Parameters violate the identity's constraints.
    Constraint,
    /// A series or quadrature missed its target within the budget.
    NonConvergence,
    /// Any other evaluation error.
    Evaluation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::Constraint(_) => FailureKind::Constraint,
            Error::NonConvergence { .. } => FailureKind::NonConvergence,
            Error::Domain(_) | Error::EmptyRequest(_) => FailureKind::Evaluation,
        };
        Failure {
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub params: Params,
    pub lhs: SeriesValue<f64>,
    pub rhs: SeriesValue<f64>,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub elapsed: Duration,
    pub cross_oracle: Option<CrossOracle>,
    /// Largest per-term relative error (`c7` only).
    pub max_term_rel_error: Option<f64>,
    pub failure: Option<Failure>,
}

impl IdentityReport {
    fn failed(id: IdentityId, params: Params, tolerance: f64, elapsed: Duration, e: Error) -> Self {
        let nan = SeriesValue {
            value: f64::NAN,
            tail_bound: f64::NAN,
            terms_used: 0,
            converged: false,
            certified: false,
        };
        Self {
            id,
            params,
            lhs: nan,
            rhs: nan,
            abs_residual: f64::NAN,
            rel_residual: f64::NAN,
            tolerance,
            pass: false,
            elapsed,
            cross_oracle: None,
            max_term_rel_error: None,
            failure: Some(e.into()),
        }
    }
}

fn constraint(id: IdentityId, msg: impl fmt::Display) -> Error {
    Error::Constraint(format!("{id} requires {}: {msg}", id.constraints()))
}

fn need(id: IdentityId, v: Option<usize>, key: &str) -> Result<usize> {
    v.ok_or_else(|| constraint(id, format!("missing parameter {key}")))
}

/// Checks the constraints of `id` and returns the strict-mode parameter.
pub fn validate(id: IdentityId, params: &Params) -> Result<DegenParam<f64>> {
    let lambda = DegenParam::new(params.lambda).map_err(|e| constraint(id, e))?;
    let p = params.p;
    let unused = [
        (params.n.is_some() && !id.uses_n(), "n"),
        (params.r.is_some() && !id.uses_r(), "r"),
        (params.m.is_some() && !id.uses_m(), "m"),
    ];
    if let Some((_, key)) = unused.iter().find(|(bad, _)| *bad) {
        return Err(constraint(id, format!("parameter {key} is not used")));
    }
    let ok = match id {
        IdentityId::T1 => need(id, params.r, "r")? >= 1 && p >= 2,
        IdentityId::T2 => need(id, params.n, "n")? >= 2 && p >= 1,
        IdentityId::T3 => p >= 2,
        IdentityId::T4 => need(id, params.n, "n")? >= 1 && p >= 1,
        IdentityId::Gen36 => need(id, params.m, "m")? > need(id, params.n, "n")? && p >= 1,
        IdentityId::T6 => p >= 1 && need(id, params.n, "n")? >= p,
        IdentityId::C7 => {
            need(id, params.m, "m")?;
            p >= 1 && need(id, params.n, "n")? >= p
        }
        IdentityId::T2a | IdentityId::T5a | IdentityId::T5b => p >= 1,
    };
    if !ok {
        return Err(constraint(id, format!("got {params}")));
    }
    Ok(lambda)
}

fn non_convergence(terms: usize, bound: f64, tol: f64) -> Error {
    Error::NonConvergence { terms, bound, tol }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `Σ_k H^{(p)}_{k,λ} W(k)` where `terms` spell out `i^{-p} Ŵ(i-1)`.
fn harmonic_weighted(
    p: usize,
    lambda: f64,
    w: impl Fn(usize) -> f64,
    w_tail: impl Fn(usize) -> f64,
    terms: &[RationalTerm<f64>],
    tol: f64,
    max_terms: usize,
) -> Result<SeriesValue<f64>> {
    let (cut, _) = choose_cut(max_terms, tol, lambda, |cut, c_next| {
        rational_tail(terms, cut, lambda, c_next).bound
    })
    .map_err(|(n, b)| non_convergence(n, b, tol))?;
    let mut acc = Accumulator::new();
    let mut h = Accumulator::new();
    let mut c = 1.0;
    for k in 1..=cut {
        if k > 1 {
            c = next_coeff(c, k - 1, lambda);
        }
        h.add(c / (k as f64).powi(p as i32));
        acc.add(h.value() * w(k));
    }
    acc.add(h.value() * w_tail(cut));
    let tail = rational_tail(terms, cut, lambda, next_coeff(c, cut, lambda));
    acc.add(tail.value);
    Ok(SeriesValue::certified(acc.value(), tail.bound, cut, tol))
}

/// `Σ c_k f(k)` for a rational `f`.
fn coefficient_sum(terms: &[RationalTerm<f64>], lambda: f64, tol: f64, max_terms: usize) -> Result<SeriesValue<f64>> {
    let a = coeff_series(terms, lambda, tol, max_terms).map_err(|(n, b)| non_convergence(n, b, tol))?;
    Ok(SeriesValue::certified(a.value, a.bound, a.terms, tol))
}

/// Shifts `1, 2, …, n-1`.
fn shifts(n: usize) -> Vec<f64> {
    (1..n).map(|i| i as f64).collect()
}

fn series_tol(budget: &ToleranceBudget) -> f64 {
    budget.tol * 0.1
}

fn zeta_tol(budget: &ToleranceBudget) -> f64 {
    (budget.tol * 0.01).min(1e-13)
}

/// Left-hand side of `id`.
pub fn series_lhs(id: IdentityId, params: &Params, budget: &ToleranceBudget) -> Result<SeriesValue<f64>> {
    budget.check()?;
    let lambda = validate(id, params)?;
    let l = lambda.lambda();
    let p = params.p;
    let tol = series_tol(budget);
    let mt = budget.max_terms;
    match id {
        IdentityId::T1 => {
            let r = params.r.unwrap_or(1) as f64;
            coefficient_sum(&[RationalTerm::new(1.0, p, vec![r])], l, tol, mt)
        }
        IdentityId::T3 => coefficient_sum(&[RationalTerm::new(1.0, p, vec![1.0])], l, tol, mt),
        IdentityId::T5a => harmonic_weighted(
            p,
            l,
            |k| 1.0 / (k as f64 * (k as f64 + 1.0)),
            |k| 1.0 / (k as f64 + 1.0),
            &[RationalTerm::new(1.0, p + 1, vec![])],
            tol,
            mt,
        ),
        IdentityId::T5b => harmonic_weighted(
            p,
            l,
            |k| 1.0 / (k as f64 * (k as f64 + 2.0)),
            |k| 0.5 * (1.0 / (k as f64 + 1.0) + 1.0 / (k as f64 + 2.0)),
            &[
                RationalTerm::new(0.5, p + 1, vec![]),
                RationalTerm::new(0.5, p, vec![1.0]),
            ],
            tol,
            mt,
        ),
        IdentityId::T2a => harmonic_weighted(
            p,
            l,
            |k| {
                let k = k as f64;
                1.0 / (k * (k + 1.0) * (k + 2.0))
            },
            |k| 0.5 / ((k as f64 + 1.0) * (k as f64 + 2.0)),
            &[RationalTerm::new(0.5, p + 1, vec![1.0])],
            tol,
            mt,
        ),
        IdentityId::T2 | IdentityId::T4 => {
            let n = params.n.unwrap_or(1);
            // 1/(C(k+n-1, n)(k+n)) = w_k(n); t4 carries an extra factor n
            let scale = if id == IdentityId::T4 { n as f64 } else { 1.0 };
            harmonic_weighted(
                p,
                l,
                |k| scale * weight::<f64>(k, n),
                |k| scale * weight_tail::<f64>(k, n),
                &[RationalTerm::new(scale * factorial(n - 1), p + 1, shifts(n))],
                tol,
                mt,
            )
        }
        IdentityId::Gen36 => {
            let n = params.n.unwrap_or(0);
            let m = params.m.unwrap_or(1);
            let inv = 1.0 / (m - n) as f64;
            let terms: Vec<_> = (n..m)
                .map(|j| {
                    if j == 0 {
                        RationalTerm::new(inv, p + 1, vec![])
                    } else {
                        RationalTerm::new(inv, p, vec![j as f64])
                    }
                })
                .collect();
            harmonic_weighted(
                p,
                l,
                |k| 1.0 / ((k + n) as f64 * (k + m) as f64),
                |k| inv * (n..m).map(|j| 1.0 / (k + 1 + j) as f64).sum::<f64>(),
                &terms,
                tol,
                mt,
            )
        }
        IdentityId::T6 => {
            let n = params.n.unwrap_or(p);
            let top = mt.max(p);
            let h = convolution_by_expansion(top, p, lambda)?;
            let mut acc = Accumulator::new();
            let mut last = 0.0;
            for k in p..=top {
                last = h.get(k) * weight::<f64>(k, n);
                acc.add(last);
            }
            // terms decay like k^{p-n-2}; integral comparison estimate of the rest
            let estimate = last * top as f64 / (n - p + 1) as f64;
            acc.add(estimate);
            Ok(SeriesValue {
                value: acc.value(),
                tail_bound: estimate,
                terms_used: top,
                converged: estimate <= budget.tol.max(T6_SERIES_TOL),
                certified: false,
            })
        }
        IdentityId::C7 => {
            let (terms, _) = c7_terms(params, lambda);
            let v = terms.iter().map(|t| t.0).collect::<Accumulator<f64>>().value();
            Ok(SeriesValue {
                value: v,
                tail_bound: 0.0,
                terms_used: terms.len(),
                converged: true,
                certified: true,
            })
        }
    }
}

/// Per-term pairs `(p!/⟨y⟩_{p+1,λ}, 1/(binom·(y+pλ)))` for `y = n-p+1+m`.
fn c7_terms(params: &Params, lambda: DegenParam<f64>) -> (Vec<(f64, f64)>, f64) {
    let p = params.p;
    let l = lambda.lambda();
    let x = (params.n.unwrap_or(p) + 1 - p) as f64;
    let pf = factorial(p);
    let mut worst = 0.0f64;
    let terms = (0..=params.m.unwrap_or(0))
        .map(|mm| {
            let y = x + mm as f64;
            let a = pf / rising_factorial(y, p + 1, lambda);
            let b = 1.0 / (degenerate_binomial(y + (p as f64 - 1.0) * l, p, lambda) * (y + p as f64 * l));
            worst = worst.max(((a - b) / b).abs());
            (a, b)
        })
        .collect();
    (terms, worst)
}

/// Accumulates `Σ w_i v_i` with `Σ |w_i| b_i` as its bound.
#[derive(Default)]
struct Combination {
    value: Accumulator<f64>,
    bound: f64,
    terms: usize,
}

impl Combination {
    fn add(&mut self, w: f64, v: SeriesValue<f64>) {
        self.value.add(w * v.value);
        self.bound += w.abs() * v.tail_bound;
        self.terms = self.terms.max(v.terms_used);
    }

    fn constant(&mut self, v: f64) {
        self.value.add(v);
    }

    fn finish(self, scale: f64) -> SeriesValue<f64> {
        SeriesValue {
            value: scale * self.value.value(),
            tail_bound: scale.abs() * self.bound,
            terms_used: self.terms,
            converged: true,
            certified: true,
        }
    }
}

/// Right-hand side of `id` from closed forms and independent oracles.
pub fn reference_rhs(id: IdentityId, params: &Params, budget: &ToleranceBudget) -> Result<SeriesValue<f64>> {
    budget.check()?;
    let lambda = validate(id, params)?;
    let l = lambda.lambda();
    let p = params.p;
    let zt = zeta_tol(budget);
    let mt = budget.max_terms;
    let z = |s: usize| zeta(s as f64, lambda, zt, mt);
    let integral = |r: usize, q: usize| integral_closed_with(r, q, lambda, zt);
    match id {
        IdentityId::T1 => integral(params.r.unwrap_or(1), p),
        IdentityId::T5a => z(p + 1),
        IdentityId::T2a => {
            let mut c = Combination::default();
            for k in 1..=p {
                c.add(sign(k - 1), z(p + 2 - k)?);
            }
            c.constant(sign(p) / (l + 1.0));
            Ok(c.finish(0.5))
        }
        IdentityId::T2 => {
            let n = params.n.unwrap_or(2);
            let mut c = Combination::default();
            let mut binom = 1.0;
            for j in 0..=(n - 2) {
                if j > 0 {
                    binom = binom * (n - 1 - j) as f64 / j as f64;
                }
                c.add(sign(j) * binom, integral(j + 1, p + 1)?);
            }
            Ok(c.finish((n - 1) as f64))
        }
        IdentityId::T3 => {
            let mut c = Combination::default();
            for k in 1..p {
                c.add(sign(k - 1), z(p - k + 1)?);
            }
            c.constant(sign(p - 1) / (l + 1.0));
            Ok(c.finish(1.0))
        }
        IdentityId::T4 => {
            let n = params.n.unwrap_or(1);
            // c_k / (k^p C(k+n-1, n)) = n! c_k / (k^{p+1} (k+1)⋯(k+n-1))
            let terms = [RationalTerm::new(factorial(n), p + 1, shifts(n))];
            coefficient_sum(&terms, l, series_tol(budget), mt)
        }
        IdentityId::T5b => {
            let mut c = Combination::default();
            c.add(1.0, z(p + 1)?);
            for k in 2..=p {
                c.add(sign(k), z(p + 2 - k)?);
            }
            c.constant(sign(p + 1) / (l + 1.0));
            Ok(c.finish(0.5))
        }
        IdentityId::Gen36 => {
            let n = params.n.unwrap_or(0);
            let m = params.m.unwrap_or(1);
            let inv = 1.0 / (m - n) as f64;
            let mut c = Combination::default();
            c.add(1.0, z(p + 1)?);
            // the j = 0 summand is zero
            for j in n.max(1)..m {
                c.add(-inv * j as f64, integral(j, p + 1)?);
            }
            Ok(c.finish(1.0))
        }
        IdentityId::T6 => {
            let n = params.n.unwrap_or(p);
            let h = hurwitz(p + 1, (n - p + 1) as f64, lambda, zt, mt)?;
            let mut c = Combination::default();
            c.add(1.0, h);
            Ok(c.finish(factorial(p)))
        }
        IdentityId::C7 => {
            let (terms, _) = c7_terms(params, lambda);
            let v = terms.iter().map(|t| t.1).collect::<Accumulator<f64>>().value();
            Ok(SeriesValue {
                value: v,
                tail_bound: 0.0,
                terms_used: terms.len(),
                converged: true,
                certified: true,
            })
        }
    }
}

fn tolerance_for(id: IdentityId, budget: &ToleranceBudget) -> f64 {
    if id == IdentityId::T6 {
        budget.tol.max(T6_SERIES_TOL)
    } else {
        budget.tol
    }
}

/// Evaluates both sides and decides the pass flag. Errors never pass: they are
/// returned inside a failed report.
pub fn verify(id: IdentityId, params: &Params, budget: &ToleranceBudget) -> IdentityReport {
    let start = Instant::now();
    let tolerance = tolerance_for(id, budget);
    match verify_inner(id, params, budget, tolerance) {
        Ok(mut r) => {
            r.elapsed = start.elapsed();
            r
        }
        Err(e) => IdentityReport::failed(id, *params, tolerance, start.elapsed(), e),
    }
}

fn verify_inner(id: IdentityId, params: &Params, budget: &ToleranceBudget, tolerance: f64) -> Result<IdentityReport> {
    let lambda = validate(id, params)?;
    let lhs = series_lhs(id, params, budget)?;
    let rhs = reference_rhs(id, params, budget)?;
    let abs_residual = (lhs.value - rhs.value).abs();
    let rel_residual = abs_residual / rhs.value.abs().max(1e-300);
    let mut pass = abs_residual <= tolerance + lhs.tail_bound + rhs.tail_bound;
    let mut cross_oracle = None;
    let mut max_term_rel_error = None;
    match id {
        IdentityId::T1 => {
            let q = crate::integrals::integral_quadrature_with(
                params.r.unwrap_or(1),
                params.p,
                lambda,
                budget.quad_tol,
                budget.quad_max_panels,
            )?;
            let agrees =
                q.converged && (q.value - rhs.value).abs() <= budget.quad_tol + q.error_estimate + rhs.tail_bound;
            cross_oracle = Some(CrossOracle {
                value: q.value,
                error_estimate: q.error_estimate,
                agrees,
            });
        }
        IdentityId::T6 => {
            let n = params.n.unwrap_or(params.p);
            let q = quadrature_theorem6_with(n, params.p, lambda, budget.quad_tol, budget.quad_max_panels)?;
            if !q.converged {
                return Err(non_convergence(q.evaluations, q.error_estimate, budget.quad_tol));
            }
            let oracle_ok = (q.value - rhs.value).abs() <= T6_ORACLE_TOL + q.error_estimate + rhs.tail_bound;
            let series_ok = (lhs.value - q.value).abs() <= T6_SERIES_TOL.max(budget.tol);
            cross_oracle = Some(CrossOracle {
                value: q.value,
                error_estimate: q.error_estimate,
                agrees: oracle_ok,
            });
            pass = pass && oracle_ok && series_ok;
        }
        IdentityId::C7 => {
            let (_, worst) = c7_terms(params, lambda);
            max_term_rel_error = Some(worst);
            pass = pass && worst <= budget.tol;
        }
        _ => {}
    }
    Ok(IdentityReport {
        id,
        params: *params,
        lhs,
        rhs,
        abs_residual,
        rel_residual,
        tolerance,
        pass,
        elapsed: Duration::ZERO,
        cross_oracle,
        max_term_rel_error,
        failure: None,
    })
}

/// Parameter ranges of a sweep. `None` means the key was not given.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Grid {
    pub lambdas: Vec<f64>,
    pub p: Option<Vec<usize>>,
    pub n: Option<Vec<usize>>,
    pub r: Option<Vec<usize>>,
    pub m: Option<Vec<usize>>,
}

/// Every valid `(id, params)` instance of the grid, sorted by id then
/// parameter tuple. Tuples violating an id's constraints are skipped; a
/// range an id needs but the grid lacks is an error naming the key.
pub fn expand_grid(ids: &[IdentityId], grid: &Grid) -> Result<Vec<(IdentityId, Params)>> {
    if grid.lambdas.is_empty() {
        return Err(Error::Constraint("missing key `lambdas`".into()));
    }
    let required = |v: &Option<Vec<usize>>, key: &str, id: IdentityId| -> Result<Vec<Option<usize>>> {
        match v {
            Some(v) if !v.is_empty() => Ok(v.iter().copied().map(Some).collect()),
            _ => Err(Error::Constraint(format!("missing key `{key}` (needed by {id})"))),
        }
    };
    let mut out = Vec::new();
    let mut ids = ids.to_vec();
    ids.sort();
    ids.dedup();
    for &id in &ids {
        let ps = required(&grid.p, "p_range", id)?;
        let ns = if id.uses_n() {
            required(&grid.n, "n_range", id)?
        } else {
            vec![None]
        };
        let rs = if id.uses_r() {
            required(&grid.r, "r_range", id)?
        } else {
            vec![None]
        };
        let ms = if id.uses_m() {
            required(&grid.m, "m_range", id)?
        } else {
            vec![None]
        };
        let mut batch = Vec::new();
        for &lambda in &grid.lambdas {
            for &p in &ps {
                for &n in &ns {
                    for &r in &rs {
                        for &m in &ms {
                            let params = Params {
                                lambda,
                                p: p.unwrap_or(1),
                                n,
                                r,
                                m,
                            };
                            match validate(id, &params) {
                                Ok(_) => batch.push((id, params)),
                                Err(_) if DegenParam::new(lambda).is_ok() => {}
                                Err(e) => return Err(e),
                            }
                        }
                    }
                }
            }
        }
        batch.sort_by_key(|a| a.1.sort_key());
        out.extend(batch);
    }
    Ok(out)
}

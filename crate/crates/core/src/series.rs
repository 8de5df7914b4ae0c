//! Truncated power series for probability generating functions.
//!
//! A [`TruncatedSeries`] holds coefficients `c_0..=c_K`; every operation is
//! exact to order `K` with no tail estimation. On top of the coefficient
//! recursions sit the compound Poisson PMF (Panjer recursion), `n`-th
//! convolution roots, and the decision whether a PMF prefix is discretely
//! infinitely divisible, i.e. has a log-PGF with nonnegative coefficients
//! past the constant term.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::semigroup::{GeneratorSet, NumericalSemigroup};

/// Absolute floor separating structural zeros from positive mass.
pub const STRUCTURAL_ZERO: f64 = 1e-250;

/// Default DID negativity tolerance, relative to the recovered rate.
pub const DID_TOLERANCE: f64 = 1e-10;

const PMF_SUM_TOLERANCE: f64 = 1e-12;

// `Iterator::sum` for f64 starts from -0.0, which leaks signed zeros into output.
fn total(terms: impl Iterator<Item = f64>) -> f64 {
    terms.fold(0.0, |acc, x| acc + x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coefficients: Vec<f64>,
}

impl TruncatedSeries {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(domain("series needs at least one coefficient"));
        }
        if let Some(i) = coefficients.iter().position(|c| !c.is_finite()) {
            return Err(domain(format!("coefficient {i} is not finite")));
        }
        Ok(Self { coefficients })
    }

    pub fn zeros(order: usize) -> Self {
        Self {
            coefficients: vec![0.0; order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<f64> {
        self.coefficients
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    /// Cauchy product truncated to the smaller order of the two operands.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let a = &self.coefficients;
        let b = &other.coefficients;
        let coefficients = (0..=order).map(|k| total((0..=k).map(|j| a[j] * b[k - j]))).collect();
        Self { coefficients }
    }

    pub fn exp(&self) -> Self {
        series_exp(self)
    }

    pub fn ln(&self) -> Result<Self> {
        series_log(self)
    }

    pub fn powf(&self, alpha: f64) -> Result<Self> {
        series_pow(self, alpha)
    }

    /// Whether the coefficients form a PMF prefix: nonnegative, summing to at most one.
    pub fn is_pmf_prefix(&self) -> bool {
        self.coefficients.iter().all(|&c| c >= 0.0) && self.coefficients.iter().sum::<f64>() <= 1.0 + PMF_SUM_TOLERANCE
    }
}

/// `exp(a)` via `b_0 = exp(a_0)`, `b_k = (1/k) Σ_{j=1..k} j a_j b_{k-j}`.
pub fn series_exp(a: &TruncatedSeries) -> TruncatedSeries {
    let a = &a.coefficients;
    let mut b = Vec::with_capacity(a.len());
    b.push(a[0].exp());
    for k in 1..a.len() {
        let s = total((1..=k).map(|j| j as f64 * a[j] * b[k - j]));
        b.push(s / k as f64);
    }
    TruncatedSeries { coefficients: b }
}

/// `log(a)` for `a_0 > 0`.
pub fn series_log(a: &TruncatedSeries) -> Result<TruncatedSeries> {
    let a = &a.coefficients;
    if a[0] <= 0.0 {
        return Err(domain(format!("log needs a positive constant term, got {}", a[0])));
    }
    let mut b = Vec::with_capacity(a.len());
    b.push(a[0].ln());
    for k in 1..a.len() {
        let s = total((1..k).map(|j| j as f64 * b[j] * a[k - j]));
        b.push((a[k] - s / k as f64) / a[0]);
    }
    Ok(TruncatedSeries { coefficients: b })
}

/// `a^alpha` for `a_0 > 0`, via `b_k = 1/(k a_0) Σ_{j=1..k} ((alpha+1) j - k) a_j b_{k-j}`.
pub fn series_pow(a: &TruncatedSeries, alpha: f64) -> Result<TruncatedSeries> {
    let a = &a.coefficients;
    if a[0] <= 0.0 {
        return Err(domain(format!("pow needs a positive constant term, got {}", a[0])));
    }
    let mut b = Vec::with_capacity(a.len());
    b.push(a[0].powf(alpha));
    for k in 1..a.len() {
        let s = total((1..=k).map(|j| ((alpha + 1.0) * j as f64 - k as f64) * a[j] * b[k - j]));
        b.push(s / (k as f64 * a[0]));
    }
    Ok(TruncatedSeries { coefficients: b })
}

/// Finite-support jump law on the positive integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpPmf(BTreeMap<u64, f64>);

impl JumpPmf {
    pub fn new(weights: impl IntoIterator<Item = (u64, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (y, q) in weights {
            if y == 0 {
                return Err(domain("jump sizes must be at least 1 (no mass at zero)"));
            }
            if !(q > 0.0 && q.is_finite()) {
                return Err(domain(format!("jump probability for {y} must be positive, got {q}")));
            }
            if map.insert(y, q).is_some() {
                return Err(domain(format!("jump size {y} listed twice")));
            }
        }
        if map.is_empty() {
            return Err(domain("jump law needs at least one jump size"));
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > PMF_SUM_TOLERANCE {
            return Err(domain(format!("jump probabilities sum to {total}, not 1")));
        }
        Ok(Self(map))
    }

    /// Equal weights on the given sizes.
    pub fn uniform(sizes: &GeneratorSet) -> Self {
        let q = 1.0 / sizes.len() as f64;
        Self(sizes.as_slice().iter().map(|&y| (y, q)).collect())
    }

    pub fn point(size: u64) -> Result<Self> {
        Self::new([(size, 1.0)])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.0.iter().map(|(&y, &q)| (y, q))
    }

    pub fn get(&self, size: u64) -> f64 {
        self.0.get(&size).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> GeneratorSet {
        GeneratorSet::new(self.0.keys().copied()).expect("jump law is nonempty and positive")
    }

    /// PGF coefficients `q_0..=q_K`, dropping sizes beyond `order`.
    pub fn as_series(&self, order: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zeros(order);
        for (y, q) in self.iter() {
            if (y as usize) <= order {
                s.coefficients[y as usize] = q;
            }
        }
        s
    }
}

/// Compound Poisson law `X(t)` with PGF `exp(-λt(1 - Q(s)))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompoundPoissonSpec {
    pub rate: f64,
    pub jumps: JumpPmf,
    pub time: f64,
}

impl CompoundPoissonSpec {
    pub fn new(rate: f64, jumps: JumpPmf, time: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(domain(format!("rate must be positive, got {rate}")));
        }
        if !(time > 0.0 && time.is_finite()) {
            return Err(domain(format!("time must be positive, got {time}")));
        }
        Ok(Self { rate, jumps, time })
    }

    /// `λt`, the Poisson mean of the jump count.
    pub fn intensity(&self) -> f64 {
        self.rate * self.time
    }

    /// The log-PGF `λt(Q(s) - 1)` truncated at `order`.
    pub fn log_pgf(&self, order: usize) -> TruncatedSeries {
        let mut s = self.jumps.as_series(order).scale(self.intensity());
        s.coefficients[0] -= self.intensity();
        s
    }
}

/// PMF prefix of a compound Poisson law by the Panjer recursion
/// `p_0 = e^{-λt}`, `p_n = (λt/n) Σ_{j≤n} j q_j p_{n-j}`.
pub fn compound_poisson_pmf(spec: &CompoundPoissonSpec, order: usize) -> TruncatedSeries {
    let mu = spec.intensity();
    let jumps: Vec<(usize, f64)> = spec
        .jumps
        .iter()
        .filter(|&(y, _)| (y as usize) <= order)
        .map(|(y, q)| (y as usize, q))
        .collect();
    let mut p = Vec::with_capacity(order + 1);
    p.push((-mu).exp());
    for n in 1..=order {
        let s = total(
            jumps
                .iter()
                .take_while(|&&(y, _)| y <= n)
                .map(|&(y, q)| y as f64 * q * p[n - y]),
        );
        p.push(mu * s / n as f64);
    }
    TruncatedSeries { coefficients: p }
}

/// `log(a)` with coefficients that cancel to within rounding set to zero.
///
/// A coefficient is dropped when it is smaller than a few ulps of the sum of
/// magnitudes that produced it.
fn log_without_cancellation_noise(a: &TruncatedSeries) -> Result<TruncatedSeries> {
    let a = &a.coefficients;
    if a[0] <= 0.0 {
        return Err(domain(format!("log needs a positive constant term, got {}", a[0])));
    }
    let mut b = Vec::with_capacity(a.len());
    b.push(a[0].ln());
    for k in 1..a.len() {
        let s = total((1..k).map(|j| j as f64 * b[j] * a[k - j]));
        let scale = total((1..k).map(|j| (j as f64 * b[j] * a[k - j]).abs()));
        let value = (a[k] - s / k as f64) / a[0];
        let noise = 8.0 * k as f64 * f64::EPSILON * (a[k].abs() + scale / k as f64) / a[0];
        b.push(if value.abs() <= noise { 0.0 } else { value });
    }
    Ok(TruncatedSeries { coefficients: b })
}

/// `n`-th convolution root of a PMF prefix, `exp(log(p) / n)`.
///
/// Equal to `series_pow(p, 1/n)` as a series. Log coefficients that vanish
/// up to rounding are zeroed first; the exp recursion then only adds products
/// of them, so tiny far-out coefficients of a compound Poisson law keep
/// their sign and the support is preserved.
pub fn nth_root(pmf: &TruncatedSeries, n: u32) -> Result<TruncatedSeries> {
    if n < 2 {
        return Err(domain(format!("root order must be at least 2, got {n}")));
    }
    let p0 = pmf.coefficients[0];
    if p0 == 0.0 {
        return Err(Error::LeftExtremityPositive { p0 });
    }
    if p0 < 0.0 {
        return Err(domain(format!("p_0 = {p0} is negative")));
    }
    Ok(series_exp(&log_without_cancellation_noise(pmf)?.scale(1.0 / n as f64)))
}

/// Indices `j ≤ K` whose coefficient exceeds `tol`.
pub fn support_indices(pmf: &TruncatedSeries, tol: f64) -> Vec<usize> {
    pmf.coefficients
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > tol)
        .map(|(j, _)| j)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DidFailure {
    /// `p_0 ≤ 0`: the left extremity is positive.
    MassAtZero { p0: f64 },
    /// Most negative log-PGF coefficient past the constant term.
    NegativeLogCoefficient { index: usize, value: f64 },
}

/// Outcome of [`did_test`].
#[derive(Debug, Clone, PartialEq)]
pub struct DidVerdict {
    pub is_did: bool,
    pub recovered_rate: Option<f64>,
    /// Renormalized over the truncation window, so any tail mass past `K` is
    /// spread over the recovered sizes.
    pub recovered_jump_pmf: Option<BTreeMap<u64, f64>>,
    pub violation: Option<DidFailure>,
}

impl Serialize for DidVerdict {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            is_did: bool,
            rate: Option<f64>,
            jump_pmf: Option<&'a BTreeMap<u64, f64>>,
            violation_index: Option<usize>,
            violation_value: Option<f64>,
        }
        let (violation_index, violation_value) = match self.violation {
            None => (None, None),
            Some(DidFailure::MassAtZero { p0 }) => (Some(0), Some(p0)),
            Some(DidFailure::NegativeLogCoefficient { index, value }) => (Some(index), Some(value)),
        };
        Wire {
            is_did: self.is_did,
            rate: self.recovered_rate,
            jump_pmf: self.recovered_jump_pmf.as_ref(),
            violation_index,
            violation_value,
        }
        .serialize(serializer)
    }
}

/// Decides discrete infinite divisibility of a PMF prefix to order `K`.
///
/// The law is DID iff `p_0 > 0` and `log P(s)` has coefficients `L_k ≥ 0`
/// for `k ≥ 1`; then `λ̂ = -L_0` and `q̂_k ∝ L_k`. Negativity is tested
/// against `-tol·λ̂`.
pub fn did_test(pmf: &TruncatedSeries, tol: f64) -> DidVerdict {
    let p0 = pmf.coefficients[0];
    if p0 <= 0.0 {
        return DidVerdict {
            is_did: false,
            recovered_rate: None,
            recovered_jump_pmf: None,
            violation: Some(DidFailure::MassAtZero { p0 }),
        };
    }
    let log = series_log(pmf).expect("p_0 > 0 checked");
    let l = log.coefficients();
    let rate = -l[0];
    let threshold = -tol * rate.abs().max(f64::MIN_POSITIVE);
    let worst = l
        .iter()
        .enumerate()
        .skip(1)
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, &v)| (i, v));
    if let Some((index, value)) = worst {
        if value < threshold {
            return DidVerdict {
                is_did: false,
                recovered_rate: None,
                recovered_jump_pmf: None,
                violation: Some(DidFailure::NegativeLogCoefficient { index, value }),
            };
        }
    }
    let positive: BTreeMap<u64, f64> = l
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, &v)| v > 0.0)
        .map(|(k, &v)| (k as u64, v / rate))
        .collect();
    let total: f64 = positive.values().sum();
    let jumps = positive.into_iter().map(|(k, q)| (k, q / total)).collect();
    DidVerdict {
        is_did: true,
        recovered_rate: Some(rate),
        recovered_jump_pmf: Some(jumps),
        violation: None,
    }
}

/// One row of a PMF table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PmfRow {
    pub n: usize,
    pub p_n: f64,
    pub member_of_semigroup: bool,
}

/// PMF coefficients paired with membership in the semigroup generated by `jumps`.
pub fn pmf_table(pmf: &TruncatedSeries, jumps: &GeneratorSet) -> Vec<PmfRow> {
    let (span, sg) = NumericalSemigroup::generated_by(jumps);
    pmf.coefficients()
        .iter()
        .enumerate()
        .map(|(n, &p_n)| PmfRow {
            n,
            p_n,
            member_of_semigroup: (n as u64).is_multiple_of(span) && sg.contains(n as u64 / span),
        })
        .collect()
}

/// CSV with header `n,p_n,member_of_semigroup`; floats via `fmt`.
pub fn pmf_csv(rows: &[PmfRow], fmt: impl Fn(f64) -> String) -> String {
    let mut out = String::from("n,p_n,member_of_semigroup\n");
    for row in rows {
        let _ = writeln!(out, "{},{},{}", row.n, fmt(row.p_n), row.member_of_semigroup);
    }
    out
}

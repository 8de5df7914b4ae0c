//! Seeded Monte Carlo sampling of compound Poisson laws.
//!
//! For each time `t` a realization draws `N ~ Poisson(λt)` and sums `N`
//! independent jumps. The stream is fixed by the seed:
//!
//! * generator: ChaCha8 seeded with `ChaCha8Rng::seed_from_u64(seed)`;
//! * uniforms: the top 53 bits of `next_u64`, scaled by `2^-53`, in `[0, 1)`;
//! * Poisson counts: sequential inversion when `λt ≤ 30`, otherwise PTRS
//!   (Hörmann's transformed rejection with squeeze);
//! * discrete jumps: Vose alias table, one uniform for the column and one for
//!   the coin; interval jumps: `c + δ·u`;
//! * order: time-major, sample-minor; within a sample the count comes first,
//!   then the jumps in order.
//!
//! Any port that follows the same recipe reproduces the stream bit for bit.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::levy_interval::Closure;
use crate::series::JumpPmf;

const INVERSION_LIMIT: f64 = 30.0;

#[derive(Debug, Clone, PartialEq)]
pub enum JumpLaw {
    Discrete {
        rate: f64,
        jumps: JumpPmf,
    },
    /// Jumps uniform on `[c, c + delta]`.
    Interval {
        rate: f64,
        c: f64,
        delta: f64,
    },
}

impl JumpLaw {
    pub fn rate(&self) -> f64 {
        match *self {
            JumpLaw::Discrete { rate, .. } | JumpLaw::Interval { rate, .. } => rate,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub law: JumpLaw,
    pub times: Vec<f64>,
    pub samples_per_time: usize,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn new(law: JumpLaw, times: Vec<f64>, samples_per_time: usize, seed: u64) -> Result<Self> {
        let rate = law.rate();
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(domain(format!("rate must be positive, got {rate}")));
        }
        if let JumpLaw::Interval { c, delta, .. } = law {
            if !(c > 0.0 && delta >= 0.0 && (c + delta).is_finite()) {
                return Err(domain(format!("jump interval [{c}, {}] must lie in (0, ∞)", c + delta)));
            }
        }
        if samples_per_time == 0 {
            return Err(domain("samples_per_time must be at least 1"));
        }
        if times.is_empty() {
            return Err(domain("at least one time is required"));
        }
        if times.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return Err(domain("times must be positive"));
        }
        let distinct: BTreeSet<u64> = times.iter().map(|t| t.to_bits()).collect();
        if distinct.len() != times.len() {
            return Err(domain("times must be distinct"));
        }
        Ok(Self {
            law,
            times,
            samples_per_time,
            seed,
        })
    }
}

/// The uniform and Poisson primitives behind [`sample`].
pub struct Stream {
    rng: ChaCha8Rng,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn poisson(&mut self, mean: f64) -> u64 {
        if mean <= 0.0 {
            0
        } else if mean <= INVERSION_LIMIT {
            self.poisson_inversion(mean)
        } else {
            self.poisson_ptrs(mean)
        }
    }

    fn poisson_inversion(&mut self, mean: f64) -> u64 {
        let u = self.uniform();
        let mut k = 0u64;
        let mut p = (-mean).exp();
        let mut cdf = p;
        while u >= cdf {
            k += 1;
            p *= mean / k as f64;
            let next = cdf + p;
            if next == cdf {
                // cdf has saturated below u through rounding
                break;
            }
            cdf = next;
        }
        k
    }

    fn poisson_ptrs(&mut self, mean: f64) -> u64 {
        let slam = mean.sqrt();
        let log_mean = mean.ln();
        let b = 0.931 + 2.53 * slam;
        let a = -0.059 + 0.02483 * b;
        let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        let v_r = 0.9277 - 3.6224 / (b - 2.0);
        loop {
            let u = self.uniform() - 0.5;
            let v = self.uniform();
            let us = 0.5 - u.abs();
            let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();
            if us >= 0.07 && v <= v_r {
                return k as u64;
            }
            if k < 0.0 || (us < 0.013 && v > us) {
                continue;
            }
            let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
            let rhs = -mean + k * log_mean - ln_factorial(k as u64);
            if lhs <= rhs {
                return k as u64;
            }
        }
    }
}

fn ln_factorial(k: u64) -> f64 {
    if k < 20 {
        return (2..=k).map(|i| (i as f64).ln()).sum();
    }
    // Stirling series for ln Γ(k + 1)
    let x = k as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x
        + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// Vose alias table over a finite jump law.
#[derive(Debug, Clone)]
pub struct AliasTable {
    values: Vec<u64>,
    threshold: Vec<f64>,
    alias: Vec<usize>,
}

impl AliasTable {
    pub fn new(jumps: &JumpPmf) -> Self {
        let (values, weights): (Vec<u64>, Vec<f64>) = jumps.iter().unzip();
        let n = values.len();
        let total: f64 = weights.iter().sum();
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * n as f64 / total).collect();
        let mut threshold = vec![1.0; n];
        let mut alias: Vec<usize> = (0..n).collect();
        let (mut small, mut large): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| scaled[i] < 1.0);
        while let (Some(s), Some(&l)) = (small.pop(), large.last()) {
            threshold[s] = scaled[s];
            alias[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        Self {
            values,
            threshold,
            alias,
        }
    }

    pub fn draw(&self, stream: &mut Stream) -> u64 {
        let column = ((stream.uniform() * self.values.len() as f64) as usize).min(self.values.len() - 1);
        let coin = stream.uniform();
        if coin < self.threshold[column] {
            self.values[column]
        } else {
            self.values[self.alias[column]]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSamples<T> {
    pub time: f64,
    pub values: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Realizations {
    Lattice(Vec<TimeSamples<u64>>),
    Continuum(Vec<TimeSamples<f64>>),
}

impl Realizations {
    /// `(t, value)` pairs in stream order.
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        match self {
            Realizations::Lattice(per_time) => per_time
                .iter()
                .flat_map(|s| s.values.iter().map(move |&v| (s.time, v as f64)))
                .collect(),
            Realizations::Continuum(per_time) => per_time
                .iter()
                .flat_map(|s| s.values.iter().map(move |&v| (s.time, v)))
                .collect(),
        }
    }

    /// CSV with header `t,value`.
    pub fn to_csv(&self, fmt: impl Fn(f64) -> String) -> String {
        let mut out = String::from("t,value\n");
        for (t, v) in self.pairs() {
            let _ = writeln!(out, "{},{}", fmt(t), fmt(v));
        }
        out
    }

    fn per_time(&self) -> Vec<(f64, Vec<f64>)> {
        match self {
            Realizations::Lattice(per_time) => per_time
                .iter()
                .map(|s| (s.time, s.values.iter().map(|&v| v as f64).collect()))
                .collect(),
            Realizations::Continuum(per_time) => per_time.iter().map(|s| (s.time, s.values.clone())).collect(),
        }
    }
}

/// Draws `samples_per_time` realizations of `X(t)` for every configured `t`.
pub fn sample(config: &SimulationConfig) -> Realizations {
    let mut stream = Stream::new(config.seed);
    match &config.law {
        JumpLaw::Discrete { rate, jumps } => {
            let table = AliasTable::new(jumps);
            Realizations::Lattice(
                config
                    .times
                    .iter()
                    .map(|&time| TimeSamples {
                        time,
                        values: (0..config.samples_per_time)
                            .map(|_| {
                                let n = stream.poisson(rate * time);
                                (0..n).map(|_| table.draw(&mut stream)).sum()
                            })
                            .collect(),
                    })
                    .collect(),
            )
        }
        &JumpLaw::Interval { rate, c, delta } => Realizations::Continuum(
            config
                .times
                .iter()
                .map(|&time| TimeSamples {
                    time,
                    values: (0..config.samples_per_time)
                        .map(|_| {
                            let n = stream.poisson(rate * time);
                            (0..n).fold(0.0, |acc, _| acc + c + delta * stream.uniform())
                        })
                        .collect(),
                })
                .collect(),
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coverage {
    pub time: f64,
    pub samples: usize,
    /// Predicted support components up to the horizon: lattice members, or
    /// the atom at zero, each interval and the tail segment.
    pub predicted: usize,
    pub observed: usize,
    pub fraction: f64,
    /// Lattice members up to the horizon that were never realized.
    pub missing: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportReport {
    pub containment: bool,
    /// Every time's realizations fall inside the same predicted set.
    pub t_invariant: bool,
    pub horizon: f64,
    pub coverage: Vec<Coverage>,
    pub violations: Vec<f64>,
}

/// Checks realizations against a predicted support.
///
/// Any realization outside `predicted` is a hard failure reported through
/// [`Error::Containment`]; otherwise coverage up to `horizon` is tallied per time.
pub fn empirical_support_check(
    realizations: &Realizations,
    predicted: &Closure,
    horizon: f64,
) -> Result<SupportReport> {
    let per_time = realizations.per_time();
    if per_time.iter().all(|(_, v)| v.is_empty()) {
        return Err(domain("no realizations to check"));
    }
    let mut violations: Vec<f64> = per_time
        .iter()
        .flat_map(|(_, values)| values.iter().copied())
        .filter(|&v| !predicted.contains(v))
        .collect();
    if !violations.is_empty() {
        violations.sort_by(f64::total_cmp);
        violations.dedup();
        return Err(Error::Containment { values: violations });
    }
    let components = components_up_to(predicted, horizon);
    let coverage = per_time
        .iter()
        .map(|(time, values)| {
            let hit: Vec<bool> = components
                .iter()
                .map(|&(lo, hi)| values.iter().any(|&v| v >= lo - 1e-12 && v <= hi + 1e-12))
                .collect();
            let observed = hit.iter().filter(|&&h| h).count();
            let missing = if matches!(predicted, Closure::Lattice { .. }) {
                components
                    .iter()
                    .zip(&hit)
                    .filter(|(_, &h)| !h)
                    .map(|(&(lo, _), _)| lo)
                    .collect()
            } else {
                Vec::new()
            };
            Coverage {
                time: *time,
                samples: values.len(),
                predicted: components.len(),
                observed,
                fraction: observed as f64 / components.len().max(1) as f64,
                missing,
            }
        })
        .collect();
    Ok(SupportReport {
        containment: true,
        t_invariant: true,
        horizon,
        coverage,
        violations,
    })
}

fn components_up_to(predicted: &Closure, horizon: f64) -> Vec<(f64, f64)> {
    match predicted {
        Closure::Lattice { unit, span, semigroup } => {
            let step = unit * *span as f64;
            (0..)
                .map(|k: u64| (k, k as f64 * step))
                .take_while(|&(_, x)| x <= horizon + 1e-12)
                .filter(|&(k, _)| semigroup.contains(k))
                .map(|(_, x)| (x, x))
                .collect()
        }
        Closure::Continuum(set) => {
            let mut parts: Vec<(f64, f64)> = set
                .intervals()
                .iter()
                .filter(|iv| iv.lo <= horizon)
                .map(|iv| (iv.lo, iv.hi.min(horizon)))
                .collect();
            if let Some(t) = set.tail_start().filter(|&t| t <= horizon) {
                parts.push((t, horizon));
            }
            parts
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy_interval::{semigroup_closure, IntervalSet};
    use crate::semigroup::GeneratorSet;

    fn discrete(rate: f64, jumps: &[(u64, f64)], times: &[f64], n: usize, seed: u64) -> SimulationConfig {
        let law = JumpLaw::Discrete {
            rate,
            jumps: JumpPmf::new(jumps.iter().copied()).unwrap(),
        };
        SimulationConfig::new(law, times.to_vec(), n, seed).unwrap()
    }

    fn lattice_values(r: &Realizations) -> &[TimeSamples<u64>] {
        match r {
            Realizations::Lattice(v) => v,
            _ => panic!("expected lattice realizations"),
        }
    }

    #[test]
    fn config_validation() {
        let law = JumpLaw::Discrete {
            rate: 1.0,
            jumps: JumpPmf::point(1).unwrap(),
        };
        assert!(SimulationConfig::new(law.clone(), vec![1.0], 0, 1).is_err());
        assert!(SimulationConfig::new(law.clone(), vec![1.0, 1.0], 1, 1).is_err());
        assert!(SimulationConfig::new(law.clone(), vec![-1.0], 1, 1).is_err());
        assert!(SimulationConfig::new(law, vec![], 1, 1).is_err());
    }

    #[test]
    fn uniforms_are_in_unit_interval() {
        let mut s = Stream::new(7);
        for _ in 0..10_000 {
            let u = s.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn poisson_moments_both_regimes() {
        for &mean in &[0.3, 3.0, 12.0, 45.0, 400.0] {
            let mut s = Stream::new(11);
            let n = 200_000;
            let draws: Vec<f64> = (0..n).map(|_| s.poisson(mean) as f64).collect();
            let m = draws.iter().sum::<f64>() / n as f64;
            let var = draws.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
            let se = (mean / n as f64).sqrt();
            assert!((m - mean).abs() < 5.0 * se, "mean {mean}: got {m}");
            assert!((var / mean - 1.0).abs() < 0.03, "mean {mean}: var {var}");
        }
    }

    #[test]
    fn ptrs_matches_pmf_in_the_bulk() {
        let mean = 50.0;
        let mut s = Stream::new(3);
        let n = 400_000;
        let mut counts = vec![0usize; 200];
        for _ in 0..n {
            counts[s.poisson(mean) as usize] += 1;
        }
        for k in 40..60u64 {
            let p = (-mean + k as f64 * mean.ln() - ln_factorial(k)).exp();
            let freq = counts[k as usize] as f64 / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!((freq - p).abs() < 5.0 * se, "k = {k}: {freq} vs {p}");
        }
    }

    #[test]
    fn ln_factorial_branches_agree() {
        let direct: f64 = (2..=25u64).map(|i| (i as f64).ln()).sum();
        assert!((ln_factorial(25) - direct).abs() < 1e-12);
    }

    #[test]
    fn alias_table_frequencies() {
        let jumps = JumpPmf::new([(1, 0.1), (4, 0.6), (9, 0.3)]).unwrap();
        let table = AliasTable::new(&jumps);
        let mut s = Stream::new(5);
        let n = 300_000;
        let mut hits = [0usize; 10];
        for _ in 0..n {
            hits[table.draw(&mut s) as usize] += 1;
        }
        for (y, q) in jumps.iter() {
            let freq = hits[y as usize] as f64 / n as f64;
            assert!((freq - q).abs() < 5.0 * (q * (1.0 - q) / n as f64).sqrt());
        }
    }

    #[test]
    fn poisson_mean_of_unit_jumps() {
        let r = sample(&discrete(1.0, &[(1, 1.0)], &[1.0], 100_000, 2024));
        let v = &lattice_values(&r)[0].values;
        let mean = v.iter().sum::<u64>() as f64 / v.len() as f64;
        assert!((mean - 1.0).abs() < 3e-2);
    }

    #[test]
    fn same_seed_same_stream() {
        let cfg = discrete(2.0, &[(3, 0.5), (7, 0.5)], &[0.5, 1.0, 4.0], 1000, 99);
        assert_eq!(sample(&cfg), sample(&cfg));
        let other = SimulationConfig {
            seed: 100,
            ..cfg.clone()
        };
        assert_ne!(sample(&cfg), sample(&other));
    }

    #[test]
    fn shorter_runs_are_prefixes() {
        let long = sample(&discrete(3.0, &[(3, 0.5), (7, 0.5)], &[1.0], 2000, 8));
        let short = sample(&discrete(3.0, &[(3, 0.5), (7, 0.5)], &[1.0], 500, 8));
        assert_eq!(
            lattice_values(&short)[0].values[..],
            lattice_values(&long)[0].values[..500]
        );
    }

    #[test]
    fn containment_violation_is_a_hard_failure() {
        let predicted = Closure::lattice(&GeneratorSet::new([3, 7]).unwrap());
        let fake = Realizations::Lattice(vec![TimeSamples {
            time: 1.0,
            values: vec![0, 3, 11, 5],
        }]);
        match empirical_support_check(&fake, &predicted, 20.0) {
            Err(Error::Containment { values }) => assert_eq!(values, vec![5.0, 11.0]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unit_jumps_cover_everything_observed() {
        let r = sample(&discrete(1.0, &[(1, 1.0)], &[1.0, 3.0], 20_000, 1));
        let predicted = Closure::lattice(&GeneratorSet::new([1]).unwrap());
        let report = empirical_support_check(&r, &predicted, 5.0).unwrap();
        assert!(report.coverage.iter().all(|c| c.fraction == 1.0));
    }

    #[test]
    fn interval_samples_avoid_gaps() {
        let law = JumpLaw::Interval {
            rate: 3.0,
            c: 1.0,
            delta: 0.3,
        };
        let r = sample(&SimulationConfig::new(law, vec![2.0], 20_000, 4).unwrap());
        let predicted = semigroup_closure(&IntervalSet::interval(1.0, 1.3).unwrap()).unwrap();
        let report = empirical_support_check(&r, &predicted, 6.0).unwrap();
        assert!(report.containment && report.violations.is_empty());
        assert_eq!(report.coverage[0].predicted, 5);
        assert_eq!(report.coverage[0].observed, 5);
    }

    #[test]
    fn csv_spill() {
        let r = Realizations::Lattice(vec![TimeSamples {
            time: 1.0,
            values: vec![0, 3],
        }]);
        assert_eq!(r.to_csv(|x| format!("{x}")), "t,value\n1,0\n1,3\n");
    }
}

//! Left extremities of nonnegative infinitely divisible laws.
//!
//! The Laplace transform of such a law factors as
//! `φ(θ) = exp(-ℓθ - λ(1 - ψ(θ))) · (β/(β+θ))^α`, where `ℓ` is the drift,
//! `λ` and `ψ` describe a finite jump measure and the optional gamma factor
//! stands in for an infinite Lévy measure. The left extremity equals `ℓ` and
//! is recovered from the limit of `g(θ) = -log φ(θ)/θ`. The norm
//! `φ(θ)^{1/θ} = e^{-g(θ)}` of `e^{-X}` is nondecreasing in `θ`, so `g`
//! decreases to `ℓ` from above; taking `n`-th convolution roots divides `ℓ` by `n`.
//!
//! Everything is evaluated on the log scale: `φ(θ)` underflows long before
//! `θ` reaches the schedules used for extrapolation.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Jump law of the finite part of the Lévy measure, normalized to mass one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JumpMeasure {
    /// Atoms `y_j > 0` with weights `q_j` summing to one.
    Discrete(Vec<(f64, f64)>),
    /// Uniform density on `[c, c + delta]`.
    Interval { c: f64, delta: f64 },
}

impl JumpMeasure {
    /// `ψ(θ) = E e^{-θY}`.
    pub fn transform(&self, theta: f64) -> f64 {
        1.0 - self.complement(theta)
    }

    /// `1 - ψ(θ)`, evaluated without cancellation.
    pub fn complement(&self, theta: f64) -> f64 {
        match *self {
            JumpMeasure::Discrete(ref atoms) => atoms
                .iter()
                .map(|&(y, q)| -q * (-theta * y).exp_m1())
                .fold(0.0, |a, b| a + b),
            JumpMeasure::Interval { c, delta } => {
                if theta == 0.0 {
                    0.0
                } else if delta == 0.0 {
                    -(-theta * c).exp_m1()
                } else {
                    // 1 - e^{-θc}(1 - e^{-θδ})/(θδ)
                    let inner = -(-theta * delta).exp_m1() / (theta * delta);
                    1.0 - (-theta * c).exp() * inner
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            JumpMeasure::Discrete(atoms) => {
                if atoms.is_empty() {
                    return Err(domain("discrete jump measure needs at least one atom"));
                }
                for &(y, q) in atoms {
                    if !(y > 0.0 && y.is_finite()) || !(q > 0.0 && q.is_finite()) {
                        return Err(domain(format!(
                            "jump atom ({y}, {q}) must have positive size and weight"
                        )));
                    }
                }
                let total: f64 = atoms.iter().map(|a| a.1).sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(domain(format!("jump weights sum to {total}, not 1")));
                }
            }
            &JumpMeasure::Interval { c, delta } => {
                if !(c >= 0.0 && delta >= 0.0 && (c + delta).is_finite()) || c + delta <= 0.0 {
                    return Err(domain(format!("jump interval [{c}, {}] is invalid", c + delta)));
                }
            }
        }
        Ok(())
    }
}

/// Gamma factor `(β/(β+θ))^α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaComponent {
    pub shape: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceSpec {
    pub drift: f64,
    pub rate: f64,
    pub jumps: JumpMeasure,
    pub gamma: Option<GammaComponent>,
}

impl LaplaceSpec {
    pub fn new(drift: f64, rate: f64, jumps: JumpMeasure, gamma: Option<GammaComponent>) -> Result<Self> {
        if !(drift >= 0.0 && drift.is_finite()) {
            return Err(domain(format!("drift must be nonnegative, got {drift}")));
        }
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(domain(format!("rate must be nonnegative, got {rate}")));
        }
        jumps.validate()?;
        if let Some(g) = gamma {
            if !(g.shape > 0.0 && g.rate > 0.0 && g.shape.is_finite() && g.rate.is_finite()) {
                return Err(domain("gamma shape and rate must be positive"));
            }
        }
        Ok(Self {
            drift,
            rate,
            jumps,
            gamma,
        })
    }

    /// Pure drift: the point mass at `drift`.
    pub fn degenerate(drift: f64) -> Result<Self> {
        Self::new(drift, 0.0, JumpMeasure::Discrete(vec![(1.0, 1.0)]), None)
    }

    /// `-log φ(θ)`.
    pub fn neg_log_transform(&self, theta: f64) -> f64 {
        let mut value = self.drift * theta + self.rate * self.jumps.complement(theta);
        if let Some(g) = self.gamma {
            value += g.shape * (theta / g.rate).ln_1p();
        }
        value
    }

    fn has_finite_measure(&self) -> bool {
        self.gamma.is_none()
    }
}

/// `φ(θ)`.
pub fn laplace_eval(spec: &LaplaceSpec, theta: f64) -> f64 {
    (-spec.neg_log_transform(theta)).exp()
}

/// `g(θ) = -log φ(θ) / θ`.
pub fn norm_exponent(spec: &LaplaceSpec, theta: f64) -> f64 {
    spec.neg_log_transform(theta) / theta
}

/// Geometric schedule of `points` values from `lo` to `hi`.
pub fn geometric_schedule(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let ratio = (hi / lo).powf(1.0 / (points - 1) as f64);
    (0..points)
        .map(|i| if i + 1 == points { hi } else { lo * ratio.powi(i as i32) })
        .collect()
}

/// 16 points from 1 to 1e6.
pub fn default_schedule() -> Vec<f64> {
    geometric_schedule(1.0, 1e6, 16)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticRow {
    pub theta: f64,
    pub phi: f64,
    pub g: f64,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremityEstimate {
    pub estimate: f64,
    /// `g` at the largest `θ`, before extrapolation.
    pub raw: f64,
    /// `g` was nonincreasing across the whole schedule.
    pub monotone: bool,
    pub diagnostics: Vec<DiagnosticRow>,
}

impl ExtremityEstimate {
    /// CSV with header `theta,phi,g,estimate`.
    pub fn to_csv(&self, fmt: impl Fn(f64) -> String) -> String {
        let mut out = String::from("theta,phi,g,estimate\n");
        for row in &self.diagnostics {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt(row.theta),
                fmt(row.phi),
                fmt(row.g),
                fmt(row.estimate)
            );
        }
        out
    }
}

const MONOTONE_TOLERANCE: f64 = 1e-12;

/// Estimates the left extremity from `g(θ)` on an increasing schedule.
///
/// Fails with [`Error::NumericInstability`] if `g` increases anywhere, which
/// would contradict the monotone norm.
///
/// Without a gamma factor `g(θ) = ℓ + a/θ` up to exponentially small terms,
/// so the last two points pin `ℓ`. With one, `θ g(θ) = ℓθ + α log θ + a`
/// up to `O(1/θ)`, fitted on the last three points.
pub fn left_extremity_estimate(spec: &LaplaceSpec, schedule: &[f64]) -> Result<ExtremityEstimate> {
    if schedule.len() < 3 {
        return Err(Error::Precondition("schedule needs at least three points".into()));
    }
    if schedule.windows(2).any(|w| !(w[1] > w[0])) || schedule[0] <= 0.0 {
        return Err(Error::Precondition(
            "schedule must be positive and strictly increasing".into(),
        ));
    }
    if *schedule.last().unwrap() < 1e4 {
        return Err(Error::Precondition("schedule must reach at least 1e4".into()));
    }
    let log_aware = spec.gamma.is_some();
    let points: Vec<(f64, f64)> = schedule.iter().map(|&t| (t, norm_exponent(spec, t))).collect();
    let mut diagnostics = Vec::with_capacity(points.len());
    for (i, &(theta, g)) in points.iter().enumerate() {
        if i > 0 {
            let previous = points[i - 1].1;
            if g > previous + MONOTONE_TOLERANCE * previous.abs().max(1.0) {
                return Err(Error::NumericInstability {
                    theta,
                    previous,
                    current: g,
                });
            }
        }
        diagnostics.push(DiagnosticRow {
            theta,
            phi: laplace_eval(spec, theta),
            g,
            estimate: extrapolate(&points[..=i], log_aware),
        });
    }
    let raw = points.last().unwrap().1;
    Ok(ExtremityEstimate {
        estimate: diagnostics.last().unwrap().estimate,
        raw,
        monotone: true,
        diagnostics,
    })
}

fn extrapolate(points: &[(f64, f64)], log_aware: bool) -> f64 {
    match (points.len(), log_aware) {
        (1, _) => points[0].1,
        (2, _) | (_, false) => {
            let (t1, g1) = points[points.len() - 2];
            let (t2, g2) = points[points.len() - 1];
            (t2 * g2 - t1 * g1) / (t2 - t1)
        }
        (_, true) => {
            let p = &points[points.len() - 3..];
            let rows: Vec<[f64; 4]> = p.iter().map(|&(t, g)| [t, t.ln(), 1.0, t * g]).collect();
            solve3(rows)[0]
        }
    }
}

/// Solves a 3×3 augmented system by Gaussian elimination with partial pivoting.
fn solve3(mut m: Vec<[f64; 4]>) -> [f64; 3] {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
        x[row] = (m[row][3] - s) / m[row][row];
    }
    x
}

/// Law of the `n`-th convolution root: drift, rate and gamma shape divided by `n`.
pub fn convolution_root(spec: &LaplaceSpec, n: u32) -> Result<LaplaceSpec> {
    if n == 0 {
        return Err(domain("root order must be at least 1"));
    }
    let n = n as f64;
    Ok(LaplaceSpec {
        drift: spec.drift / n,
        rate: spec.rate / n,
        jumps: spec.jumps.clone(),
        gamma: spec.gamma.map(|g| GammaComponent {
            shape: g.shape / n,
            rate: g.rate,
        }),
    })
}

/// `F_n(0) = exp(-λ/n)` for a finite Lévy measure of total mass `λ` and no drift.
pub fn mass_at_zero(spec: &LaplaceSpec, n: u32) -> Result<f64> {
    if !spec.has_finite_measure() {
        return Err(Error::InfiniteLevyMeasure);
    }
    if spec.drift > 0.0 {
        return Err(Error::Precondition(format!(
            "drift {} > 0 puts the left extremity away from 0, so F_n(0) = 0",
            spec.drift
        )));
    }
    if n == 0 {
        return Err(domain("root order must be at least 1"));
    }
    Ok((-spec.rate / n as f64).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
}

/// Checks `θ^{-1} ∫ (1 - e^{-θx}) M(dx) = ∫_0^∞ e^{-θv} M̄(v) dv`.
///
/// The left side is closed form. The right side integrates the tail
/// `M̄(v) = M(v, ∞)` piece by piece: constant between discrete atoms,
/// linear across a uniform interval, each piece integrated exactly.
pub fn tail_integral_identity(spec: &LaplaceSpec, theta: f64) -> Result<TailIdentity> {
    if !spec.has_finite_measure() {
        return Err(Error::OutOfScope("tail identity needs a finite Lévy measure".into()));
    }
    if !(theta > 0.0) {
        return Err(domain(format!("theta must be positive, got {theta}")));
    }
    let lhs = spec.rate * spec.jumps.complement(theta) / theta;
    // ∫_a^b e^{-θv} dv
    let window = |a: f64, b: f64| ((-theta * a).exp() - (-theta * b).exp()) / theta;
    let rhs = match &spec.jumps {
        JumpMeasure::Discrete(atoms) => {
            let mut sorted = atoms.clone();
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut remaining = 1.0;
            let mut left = 0.0;
            let mut acc = 0.0;
            for (y, q) in sorted {
                acc += spec.rate * remaining * window(left, y);
                remaining -= q;
                left = y;
            }
            acc
        }
        &JumpMeasure::Interval { c, delta } => {
            let head = spec.rate * window(0.0, c);
            let ramp = if delta == 0.0 {
                0.0
            } else {
                // ∫_0^δ (δ - u)/δ e^{-θ(c+u)} du
                let e = (-theta * c).exp();
                e / delta * (delta / theta + (-theta * delta).exp_m1() / (theta * theta))
            };
            head + spec.rate * ramp
        }
    };
    Ok(TailIdentity {
        lhs,
        rhs,
        abs_diff: (lhs - rhs).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn discrete(drift: f64, rate: f64, atoms: &[(f64, f64)]) -> LaplaceSpec {
        LaplaceSpec::new(drift, rate, JumpMeasure::Discrete(atoms.to_vec()), None).unwrap()
    }

    #[test]
    fn transform_examples() {
        assert!((laplace_eval(&LaplaceSpec::degenerate(2.0).unwrap(), 1.0) - (-2f64).exp()).abs() < 1e-16);
        let s = discrete(0.0, 1.0, &[(1.0, 1.0)]);
        assert_eq!(laplace_eval(&s, 0.0), 1.0);
        let expected = (-(1.0 - (-1f64).exp())).exp();
        assert!((laplace_eval(&s, 1.0) - expected).abs() < 1e-15);
        let gamma = LaplaceSpec::new(
            0.5,
            1.0,
            JumpMeasure::Interval { c: 1.0, delta: 0.3 },
            Some(GammaComponent { shape: 2.0, rate: 3.0 }),
        )
        .unwrap();
        assert_eq!(laplace_eval(&gamma, 0.0), 1.0);
    }

    #[test]
    fn interval_transform_matches_quadrature() {
        let m = JumpMeasure::Interval { c: 1.0, delta: 0.3 };
        let theta = 2.0;
        // midpoint rule oracle
        let n = 200_000;
        let h = 0.3 / n as f64;
        let quad: f64 = (0..n)
            .map(|i| (-theta * (1.0 + (i as f64 + 0.5) * h)).exp() * h / 0.3)
            .sum();
        assert!((m.transform(theta) - quad).abs() < 1e-10);
    }

    #[test]
    fn drift_only_is_exact_everywhere() {
        let est = left_extremity_estimate(&LaplaceSpec::degenerate(2.0).unwrap(), &default_schedule()).unwrap();
        assert!(est.diagnostics.iter().all(|r| (r.g - 2.0).abs() < 1e-15));
        assert!((est.estimate - 2.0).abs() < 1e-12);
    }

    #[test]
    fn drift_plus_jumps_extrapolates() {
        let spec = discrete(1.0, 2.0, &[(1.0, 0.5), (3.0, 0.5)]);
        let est = left_extremity_estimate(&spec, &default_schedule()).unwrap();
        // g(θ) = 1 + 2(1 - ψ(θ))/θ ≈ 1 + 2/θ at θ = 1e6
        assert!((est.raw - 1.0 - 2e-6).abs() < 1e-12);
        assert!((est.estimate - 1.0).abs() <= 1e-3);
        assert!((est.estimate - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gamma_needs_log_aware_fit() {
        let spec = LaplaceSpec::new(
            0.0,
            0.0,
            JumpMeasure::Discrete(vec![(1.0, 1.0)]),
            Some(GammaComponent { shape: 1.0, rate: 1.0 }),
        )
        .unwrap();
        let est = left_extremity_estimate(&spec, &default_schedule()).unwrap();
        let raw = (1e6f64).ln_1p() / 1e6;
        assert!((est.raw - raw).abs() < 1e-15);
        assert!(
            est.raw > 1e-5,
            "raw residual is too large to pass without extrapolation"
        );
        assert!(est.estimate.abs() <= 1e-3);
    }

    #[test]
    fn schedule_preconditions() {
        let spec = LaplaceSpec::degenerate(1.0).unwrap();
        assert!(left_extremity_estimate(&spec, &[1.0, 2.0, 3.0]).is_err());
        assert!(left_extremity_estimate(&spec, &[1.0, 1.0, 1e5]).is_err());
        let sched = default_schedule();
        assert_eq!(sched.len(), 16);
        assert_eq!(sched[0], 1.0);
        assert_eq!(sched[15], 1e6);
    }

    #[test]
    fn roots_divide_drift_and_rate() {
        let spec = discrete(3.0, 2.0, &[(1.0, 1.0)]);
        let root = convolution_root(&spec, 3).unwrap();
        assert_eq!(root.drift, 1.0);
        assert!((root.rate - 2.0 / 3.0).abs() < 1e-16);
        assert_eq!(convolution_root(&spec, 1).unwrap(), spec);
        for theta in [0.1, 1.0, 10.0, 100.0] {
            let direct = laplace_eval(&spec, theta).powf(1.0 / 3.0);
            let via_root = laplace_eval(&root, theta);
            assert!((direct - via_root).abs() <= 1e-12 * direct);
        }
    }

    #[test]
    fn mass_at_zero_examples() {
        assert!((mass_at_zero(&discrete(0.0, 1.0, &[(1.0, 1.0)]), 1).unwrap() - (-1f64).exp()).abs() < 1e-16);
        assert!((mass_at_zero(&discrete(0.0, 2.0, &[(1.0, 1.0)]), 4).unwrap() - (-0.5f64).exp()).abs() < 1e-16);
        let spec = discrete(0.0, 1.0, &[(1.0, 1.0)]);
        let numeric = laplace_eval(&spec, 50.0);
        assert!((numeric - mass_at_zero(&spec, 1).unwrap()).abs() < 1e-10);
        let gamma = LaplaceSpec::new(
            0.0,
            1.0,
            JumpMeasure::Discrete(vec![(1.0, 1.0)]),
            Some(GammaComponent { shape: 1.0, rate: 1.0 }),
        )
        .unwrap();
        assert_eq!(mass_at_zero(&gamma, 1), Err(Error::InfiniteLevyMeasure));
        assert!(mass_at_zero(&discrete(1.0, 1.0, &[(1.0, 1.0)]), 1).is_err());
    }

    #[test]
    fn tail_identity_examples() {
        let one = tail_integral_identity(&discrete(0.0, 1.0, &[(1.0, 1.0)]), 1.0).unwrap();
        assert!((one.lhs - (1.0 - (-1f64).exp())).abs() < 1e-15);
        assert!(one.abs_diff < 1e-15);
        let far = tail_integral_identity(&discrete(0.0, 1.0, &[(1.0, 1.0)]), 100.0).unwrap();
        assert!(far.abs_diff < 1e-15);
        let three = discrete(0.0, 3.0, &[(1.0, 1.0 / 3.0), (2.0, 1.0 / 3.0), (3.0, 1.0 / 3.0)]);
        let check = tail_integral_identity(&three, 0.5).unwrap();
        assert!(check.abs_diff <= 1e-12);
        let iv = LaplaceSpec::new(0.0, 2.0, JumpMeasure::Interval { c: 1.0, delta: 0.3 }, None).unwrap();
        for theta in [0.25, 1.0, 4.0, 16.0] {
            assert!(tail_integral_identity(&iv, theta).unwrap().abs_diff <= 1e-12);
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(LaplaceSpec::new(-1.0, 1.0, JumpMeasure::Discrete(vec![(1.0, 1.0)]), None).is_err());
        assert!(LaplaceSpec::new(0.0, 1.0, JumpMeasure::Discrete(vec![(1.0, 0.4)]), None).is_err());
        assert!(LaplaceSpec::new(0.0, 1.0, JumpMeasure::Interval { c: -1.0, delta: 0.3 }, None).is_err());
    }
}

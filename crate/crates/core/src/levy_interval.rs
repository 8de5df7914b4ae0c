//! Semigroup closures of Lévy supports made of intervals.
//!
//! A compound Poisson law whose jump law charges `[c, c + δ]` is supported on
//! `{0} ∪ ⋃_{k≥1} [ck, (c+δ)k]`. The pieces overlap once `δk ≥ c`, so only
//! finitely many gaps `((c+δ)k, c(k+1))` survive and their lengths `c - δk`
//! shrink by exactly `δ` from one to the next.
//!
//! Closure intervals are closed and gaps are open. Endpoints closer than
//! [`MERGE_TOLERANCE`] are treated as touching.

use num_rational::Ratio;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::semigroup::{GeneratorSet, NumericalSemigroup};

pub const MERGE_TOLERANCE: f64 = 1e-12;

const MAX_CLOSURE_STEPS: usize = 1_000_000;
const MAX_LATTICE_DENOMINATOR: u64 = 1_000_000;

/// Closed interval `[lo, hi]` on the nonnegative reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(domain("interval endpoints must be finite"));
        }
        if lo < 0.0 {
            return Err(domain(format!("interval [{lo}, {hi}] has a negative endpoint")));
        }
        if hi < lo {
            return Err(domain(format!("interval [{lo}, {hi}] is reversed")));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Result<Self> {
        Self::new(x, x)
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.length() <= MERGE_TOLERANCE
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&self.lo)?;
        seq.serialize_element(&self.hi)?;
        seq.end()
    }
}

/// Sorted disjoint closed intervals, optionally followed by a tail `[r, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
    tail_start: Option<f64>,
}

impl IntervalSet {
    pub fn new(intervals: Vec<Interval>, tail_start: Option<f64>) -> Result<Self> {
        if let Some(t) = tail_start {
            if !(t.is_finite() && t >= 0.0) {
                return Err(domain(format!("tail start {t} must be finite and nonnegative")));
            }
        }
        Ok(Self::normalized(intervals, tail_start))
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Ok(Self::normalized(vec![Interval::new(lo, hi)?], None))
    }

    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
            tail_start: None,
        }
    }

    fn normalized(mut intervals: Vec<Interval>, mut tail_start: Option<f64>) -> Self {
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi + MERGE_TOLERANCE => last.hi = last.hi.max(iv.hi),
                _ => merged.push(iv),
            }
        }
        if let Some(t) = tail_start.as_mut() {
            while let Some(last) = merged.last() {
                if last.hi + MERGE_TOLERANCE >= *t {
                    *t = t.min(last.lo);
                    merged.pop();
                } else {
                    break;
                }
            }
        }
        Self {
            intervals: merged,
            tail_start,
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn tail_start(&self) -> Option<f64> {
        self.tail_start
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.tail_start.is_none()
    }

    pub fn min(&self) -> Option<f64> {
        self.intervals.first().map(|iv| iv.lo).or(self.tail_start)
    }

    pub fn contains(&self, x: f64) -> bool {
        if self.tail_start.is_some_and(|t| x >= t - MERGE_TOLERANCE) {
            return true;
        }
        self.intervals
            .iter()
            .any(|iv| x >= iv.lo - MERGE_TOLERANCE && x <= iv.hi + MERGE_TOLERANCE)
    }

    pub fn union(&self, other: &Self) -> Self {
        let intervals = self.intervals.iter().chain(&other.intervals).copied().collect();
        let tail = match (self.tail_start, other.tail_start) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Self::normalized(intervals, tail)
    }

    /// Open gaps between consecutive components, from the first component on.
    pub fn gaps(&self) -> Vec<(f64, f64)> {
        let mut bounds: Vec<(f64, f64)> = self.intervals.iter().map(|iv| (iv.lo, iv.hi)).collect();
        if let Some(t) = self.tail_start {
            bounds.push((t, f64::INFINITY));
        }
        bounds.windows(2).map(|w| (w[0].1, w[1].0)).collect()
    }
}

/// `{x + y : x ∈ a, y ∈ b}`, merged.
pub fn minkowski_sum(a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
    let (Some(a_min), Some(b_min)) = (a.min(), b.min()) else {
        return IntervalSet::empty();
    };
    let mut sums = Vec::with_capacity(a.intervals.len() * b.intervals.len());
    for x in &a.intervals {
        for y in &b.intervals {
            sums.push(Interval {
                lo: x.lo + y.lo,
                hi: x.hi + y.hi,
            });
        }
    }
    let tail = [a.tail_start.map(|t| t + b_min), b.tail_start.map(|t| t + a_min)]
        .into_iter()
        .flatten()
        .reduce(f64::min);
    IntervalSet::normalized(sums, tail)
}

/// Semigroup closure of a Lévy support.
#[derive(Debug, Clone, PartialEq)]
pub enum Closure {
    /// `{0}` together with finitely many intervals and a tail.
    Continuum(IntervalSet),
    /// Closure of point generators living on the lattice `unit·Z_+`:
    /// the value `unit · span · s` is a member iff `s` is in `semigroup`.
    Lattice {
        unit: f64,
        span: u64,
        semigroup: NumericalSemigroup,
    },
}

impl Closure {
    /// Integer lattice closure of a discrete jump support.
    pub fn lattice(gens: &GeneratorSet) -> Self {
        let (span, semigroup) = NumericalSemigroup::generated_by(gens);
        Closure::Lattice {
            unit: 1.0,
            span,
            semigroup,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match self {
            Closure::Continuum(set) => set.contains(x),
            Closure::Lattice { unit, span, semigroup } => {
                let step = unit * *span as f64;
                let k = (x / step).round();
                k >= 0.0 && (x - k * step).abs() <= MERGE_TOLERANCE * step.max(1.0) && semigroup.contains(k as u64)
            }
        }
    }

    pub fn as_continuum(&self) -> Option<&IntervalSet> {
        match self {
            Closure::Continuum(set) => Some(set),
            Closure::Lattice { .. } => None,
        }
    }
}

/// `{0}` together with all finite sums of points of `gen`.
///
/// Positive-length generators iterate `S ← S ∪ (S ⊕ gen)` until some
/// component `[a, b]` with `b ≥ 2a` appears (then `[a, ∞)` is covered) and
/// enough steps have run that no longer sum can land below `a`. Purely
/// pointwise generators are routed to the integer sieve on their common
/// lattice.
pub fn semigroup_closure(gen: &IntervalSet) -> Result<Closure> {
    let first = gen.min().ok_or_else(|| domain("generator set is empty"))?;
    if first < 0.0 {
        return Err(domain("generator endpoints must be nonnegative"));
    }
    let degenerate = gen.intervals.iter().filter(|iv| iv.is_degenerate()).count();
    if degenerate == gen.intervals.len() && gen.tail_start.is_none() {
        return lattice_closure(gen);
    }
    if degenerate > 0 {
        return Err(Error::OutOfScope("generators mixing points and intervals".to_string()));
    }
    if first <= MERGE_TOLERANCE {
        return Ok(Closure::Continuum(IntervalSet::normalized(Vec::new(), Some(0.0))));
    }

    let zero = IntervalSet::normalized(vec![Interval { lo: 0.0, hi: 0.0 }], None);
    let mut closure = zero.clone();
    for steps in 1..=MAX_CLOSURE_STEPS {
        closure = closure.union(&minkowski_sum(&closure, gen));
        let doubled = closure
            .intervals
            .iter()
            .find(|iv| iv.lo > 0.0 && iv.hi + MERGE_TOLERANCE >= 2.0 * iv.lo)
            .map(|iv| iv.lo);
        let tail = [doubled, closure.tail_start].into_iter().flatten().reduce(f64::min);
        if let Some(tail) = tail {
            // sums of more than `steps` generators start at (steps + 1)·first
            if (steps + 1) as f64 * first + MERGE_TOLERANCE >= tail {
                let below: Vec<Interval> = closure
                    .intervals
                    .iter()
                    .filter(|iv| iv.lo < tail - MERGE_TOLERANCE)
                    .copied()
                    .collect();
                return Ok(Closure::Continuum(IntervalSet::normalized(below, Some(tail))));
            }
        }
    }
    Err(Error::Domain(format!(
        "closure did not stabilize within {MAX_CLOSURE_STEPS} steps"
    )))
}

fn lattice_closure(gen: &IntervalSet) -> Result<Closure> {
    let points: Vec<f64> = gen
        .intervals
        .iter()
        .map(|iv| iv.lo)
        .filter(|&x| x > MERGE_TOLERANCE)
        .collect();
    if points.is_empty() {
        return Err(domain("point generators must include a positive value"));
    }
    let denominator = (1..=MAX_LATTICE_DENOMINATOR)
        .find(|&d| {
            points.iter().all(|&x| {
                let scaled = x * d as f64;
                (scaled - scaled.round()).abs() <= 1e-9 * scaled.max(1.0)
            })
        })
        .ok_or_else(|| domain("point generators are not commensurable"))?;
    let gens = GeneratorSet::new(points.iter().map(|&x| (x * denominator as f64).round() as u64))?;
    let (span, semigroup) = NumericalSemigroup::generated_by(&gens);
    Ok(Closure::Lattice {
        unit: 1.0 / denominator as f64,
        span,
        semigroup,
    })
}

/// Open gap `(lo, hi)` with its length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub lo: f64,
    pub hi: f64,
    pub length: f64,
}

impl Serialize for Gap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(3))?;
        seq.serialize_element(&self.lo)?;
        seq.serialize_element(&self.hi)?;
        seq.serialize_element(&self.length)?;
        seq.end()
    }
}

/// Gaps of the closure of `[c, c + δ]`.
///
/// `count` covers only the gaps `𝒢_k`, `k ≥ 1`; the gap `(0, c)` before the
/// first jump is kept separately in `initial_gap`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalGapReport {
    pub initial_gap: Gap,
    pub gaps: Vec<Gap>,
    pub count: usize,
    pub tail_start: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum IntervalGaps {
    Finite(IntervalGapReport),
    /// `δ = 0`: a single point generator leaves infinitely many gaps of
    /// length `spacing` between the multiples of `c`.
    Lattice {
        spacing: f64,
    },
}

/// Closed-form gaps `𝒢_k = ((c+δ)k, c(k+1))` for `δk < c`.
pub fn interval_gaps(c: f64, delta: f64) -> Result<IntervalGaps> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(domain(format!("c must be positive, got {c}")));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(domain(format!("delta must be nonnegative, got {delta}")));
    }
    if delta == 0.0 {
        return Ok(IntervalGaps::Lattice { spacing: c });
    }
    let mut k_star = (c / delta).ceil().max(1.0) as u64;
    while k_star > 1 && delta * (k_star - 1) as f64 >= c - MERGE_TOLERANCE {
        k_star -= 1;
    }
    let gaps: Vec<Gap> = (1..k_star)
        .map(|k| {
            let k = k as f64;
            Gap {
                lo: (c + delta) * k,
                hi: c * (k + 1.0),
                length: c - delta * k,
            }
        })
        .filter(|g| g.length > MERGE_TOLERANCE)
        .collect();
    Ok(IntervalGaps::Finite(IntervalGapReport {
        initial_gap: Gap {
            lo: 0.0,
            hi: c,
            length: c,
        },
        count: gaps.len(),
        gaps,
        tail_start: c * k_star as f64,
    }))
}

/// Parses a decimal such as `1.3` or a fraction such as `13/10`.
pub fn parse_rational(text: &str) -> Result<Ratio<i64>> {
    let text = text.trim();
    let bad = || domain(format!("`{text}` is not a rational number"));
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    let (whole, frac) = text.split_once('.').unwrap_or((text, ""));
    if frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let negative = whole.starts_with('-');
    let whole: i64 = match whole.trim_start_matches(['-', '+']) {
        "" => 0,
        w => w.parse().map_err(|_| bad())?,
    };
    let scale = 10i64.pow(frac.len() as u32);
    let frac: i64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let magnitude = Ratio::new(whole * scale + frac, scale);
    Ok(if negative { -magnitude } else { magnitude })
}

/// Integer generators `{cD, cD + 1, …, (c + δ)D}` on the `1/D` lattice.
pub fn rational_discretize(c: Ratio<i64>, delta: Ratio<i64>, denominator: u64) -> Result<GeneratorSet> {
    if denominator == 0 {
        return Err(domain("denominator must be positive"));
    }
    if c <= Ratio::from_integer(0) {
        return Err(domain(format!("c must be positive, got {c}")));
    }
    if delta < Ratio::from_integer(0) {
        return Err(domain(format!("delta must be nonnegative, got {delta}")));
    }
    let d = Ratio::from_integer(denominator as i64);
    let lo = c * d;
    let hi = (c + delta) * d;
    if !lo.is_integer() || !hi.is_integer() {
        return Err(domain(format!(
            "c = {c} and c + delta = {} are not representable with denominator {denominator}",
            c + delta
        )));
    }
    GeneratorSet::new((lo.to_integer() as u64)..=(hi.to_integer() as u64))
}

/// Comparison of the discretized gaps (scaled by `1/D`) with the continuous gaps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscretizationCheck {
    pub denominator: u64,
    /// Discrete gaps, as open intervals between neighbouring lattice members.
    pub discrete_gaps: Vec<(f64, f64)>,
    /// Every scaled discrete gap point lies in a continuous gap.
    pub contained: bool,
    /// Lebesgue measure of the symmetric difference of the two gap unions.
    pub symmetric_difference: f64,
}

pub fn compare_discretization(c: Ratio<i64>, delta: Ratio<i64>, denominator: u64) -> Result<DiscretizationCheck> {
    let gens = rational_discretize(c, delta, denominator)?;
    let (span, sg) = NumericalSemigroup::generated_by(&gens);
    if span != 1 {
        return Err(domain(format!(
            "delta·D < 1 leaves a single lattice generator (span {span}); increase D"
        )));
    }
    let (cf, df) = (ratio_to_f64(c), ratio_to_f64(delta));
    let continuous = match interval_gaps(cf, df)? {
        IntervalGaps::Finite(report) => std::iter::once(report.initial_gap)
            .chain(report.gaps)
            .map(|g| (g.lo, g.hi))
            .collect::<Vec<_>>(),
        IntervalGaps::Lattice { .. } => unreachable!("span 1 implies delta > 0"),
    };
    let scale = denominator as f64;
    let contained = sg.gaps().iter().all(|&g| {
        let x = g as f64 / scale;
        continuous.iter().any(|&(lo, hi)| x > lo && x < hi)
    });
    let discrete_gaps: Vec<(f64, f64)> = sg
        .gap_runs()
        .into_iter()
        .map(|(start, len)| ((start - 1) as f64 / scale, (start + len) as f64 / scale))
        .collect();
    let measure = |set: &[(f64, f64)]| set.iter().map(|(lo, hi)| hi - lo).sum::<f64>();
    let overlap = intersection_measure(&continuous, &discrete_gaps);
    let symmetric_difference = (measure(&continuous) + measure(&discrete_gaps) - 2.0 * overlap).max(0.0);
    Ok(DiscretizationCheck {
        denominator,
        discrete_gaps,
        contained,
        symmetric_difference,
    })
}

fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn intersection_measure(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (mut i, mut j, mut total) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if hi > lo {
            total += hi - lo;
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(lo: f64, hi: f64) -> IntervalSet {
        IntervalSet::interval(lo, hi).unwrap()
    }

    fn r(text: &str) -> Ratio<i64> {
        parse_rational(text).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn minkowski_examples() {
        let s = minkowski_sum(&set(1.0, 2.0), &set(1.0, 2.0));
        assert_eq!(s.intervals(), &[Interval { lo: 2.0, hi: 4.0 }]);
        let a = IntervalSet::new(
            vec![Interval::new(1.0, 1.5).unwrap(), Interval::new(4.0, 5.0).unwrap()],
            None,
        )
        .unwrap();
        assert_eq!(minkowski_sum(&set(0.0, 0.0), &a), a);
        let g = set(3.0, 3.5);
        let mut acc = g.clone();
        for k in 2..=12 {
            acc = minkowski_sum(&acc, &g);
            let iv = acc.intervals()[0];
            assert!(close(iv.lo, 3.0 * k as f64) && close(iv.hi, 3.5 * k as f64));
        }
    }

    #[test]
    fn minkowski_with_tail() {
        let a = IntervalSet::new(vec![Interval::new(0.0, 0.0).unwrap()], Some(5.0)).unwrap();
        let s = minkowski_sum(&a, &set(1.0, 2.0));
        assert_eq!(s.intervals(), &[Interval { lo: 1.0, hi: 2.0 }]);
        assert_eq!(s.tail_start(), Some(6.0));
    }

    #[test]
    fn touching_intervals_merge() {
        let s = IntervalSet::new(
            vec![Interval::new(2.0, 3.0).unwrap(), Interval::new(1.0, 2.0).unwrap()],
            None,
        )
        .unwrap();
        assert_eq!(s.intervals(), &[Interval { lo: 1.0, hi: 3.0 }]);
        let s = IntervalSet::new(vec![Interval::new(1.0, 4.0).unwrap()], Some(3.0)).unwrap();
        assert!(s.intervals().is_empty());
        assert_eq!(s.tail_start(), Some(1.0));
    }

    #[test]
    fn closure_of_one_to_one_point_three() {
        let closure = semigroup_closure(&set(1.0, 1.3)).unwrap();
        let s = closure.as_continuum().unwrap();
        let expected = [(0.0, 0.0), (1.0, 1.3), (2.0, 2.6), (3.0, 3.9)];
        assert_eq!(s.intervals().len(), expected.len());
        for (iv, &(lo, hi)) in s.intervals().iter().zip(&expected) {
            assert!(close(iv.lo, lo) && close(iv.hi, hi), "{iv:?}");
        }
        assert!(close(s.tail_start().unwrap(), 4.0));
    }

    #[test]
    fn generator_touching_zero_is_gap_free() {
        let s = semigroup_closure(&set(0.0, 0.5)).unwrap();
        assert_eq!(s.as_continuum().unwrap().tail_start(), Some(0.0));
    }

    #[test]
    fn point_generator_goes_to_lattice() {
        match semigroup_closure(&set(2.0, 2.0)).unwrap() {
            Closure::Lattice { unit, span, semigroup } => {
                assert_eq!(unit, 1.0);
                assert_eq!(span, 2);
                assert!(semigroup.is_gap_free());
            }
            other => panic!("{other:?}"),
        }
        let c = semigroup_closure(
            &IntervalSet::new(vec![Interval::point(0.3).unwrap(), Interval::point(0.7).unwrap()], None).unwrap(),
        )
        .unwrap();
        // 10·{0.3, 0.7} = {3, 7}
        assert!(c.contains(0.6) && c.contains(1.2) && !c.contains(1.1) && c.contains(1.2 + 0.1));
        assert!(!c.contains(0.35));
    }

    #[test]
    fn mixed_generators_are_out_of_scope() {
        let gen = IntervalSet::new(
            vec![Interval::point(1.0).unwrap(), Interval::new(2.0, 2.5).unwrap()],
            None,
        )
        .unwrap();
        assert!(matches!(semigroup_closure(&gen), Err(Error::OutOfScope(_))));
        assert!(Interval::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn closed_form_gaps() {
        let IntervalGaps::Finite(report) = interval_gaps(1.0, 0.3).unwrap() else {
            panic!()
        };
        assert_eq!(report.count, 3);
        let expected = [(1.3, 2.0, 0.7), (2.6, 3.0, 0.4), (3.9, 4.0, 0.1)];
        for (g, &(lo, hi, len)) in report.gaps.iter().zip(&expected) {
            assert!(close(g.lo, lo) && close(g.hi, hi) && close(g.length, len));
        }
        assert!(close(report.tail_start, 4.0));
        assert_eq!(
            report.initial_gap,
            Gap {
                lo: 0.0,
                hi: 1.0,
                length: 1.0
            }
        );

        let IntervalGaps::Finite(report) = interval_gaps(1.0, 1.0).unwrap() else {
            panic!()
        };
        assert_eq!(report.count, 0);
        assert_eq!(report.tail_start, 1.0);

        let IntervalGaps::Finite(report) = interval_gaps(1.0, 0.25).unwrap() else {
            panic!()
        };
        assert_eq!(report.count, 3);
        assert_eq!(report.tail_start, 4.0);

        assert_eq!(interval_gaps(1.0, 0.0).unwrap(), IntervalGaps::Lattice { spacing: 1.0 });
        assert!(interval_gaps(0.0, 0.1).is_err());
    }

    #[test]
    fn gap_count_formula() {
        for &(c, delta) in &[(1.0, 0.3), (2.0, 0.7), (5.0, 1.1), (3.0, 0.5), (1.0, 0.1)] {
            let IntervalGaps::Finite(report) = interval_gaps(c, delta).unwrap() else {
                panic!()
            };
            let ratio: f64 = c / delta;
            let expected = if (ratio - ratio.round()).abs() < 1e-9 {
                ratio.round() as usize - 1
            } else {
                ratio.ceil() as usize - 1
            };
            assert_eq!(report.count, expected, "c = {c}, delta = {delta}");
            for w in report.gaps.windows(2) {
                assert!((w[0].length - w[1].length - delta).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn discretize_examples() {
        assert_eq!(
            rational_discretize(r("1"), r("0.3"), 10).unwrap().as_slice(),
            &[10, 11, 12, 13]
        );
        assert_eq!(rational_discretize(r("3"), r("0"), 1).unwrap().as_slice(), &[3]);
        assert!(rational_discretize(r("1/3"), r("0"), 10).is_err());
        assert!(rational_discretize(r("0"), r("1"), 10).is_err());
    }

    #[test]
    fn discrete_gaps_sit_inside_continuous_gaps() {
        let mut last = f64::INFINITY;
        for d in [10, 20, 40] {
            let check = compare_discretization(r("1"), r("0.3"), d).unwrap();
            assert!(check.contained);
            assert!(check.symmetric_difference <= last + 1e-12);
            last = check.symmetric_difference;
        }
        assert!(last < 1e-12);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(r("1.3"), Ratio::new(13, 10));
        assert_eq!(r("13/10"), Ratio::new(13, 10));
        assert_eq!(r("-0.25"), Ratio::new(-1, 4));
        assert_eq!(r("4"), Ratio::from_integer(4));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn report_json_layout() {
        let IntervalGaps::Finite(report) = interval_gaps(1.0, 0.5).unwrap() else {
            panic!()
        };
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["initial_gap"], serde_json::json!([0.0, 1.0, 1.0]));
        assert_eq!(json["gaps"], serde_json::json!([[1.5, 2.0, 0.5]]));
        assert_eq!(json["count"], 1);
        assert_eq!(json["tail_start"], 2.0);
    }
}

//! Worked cases with known answers, runnable as a self-check
//! (`support-gaps paper-examples`).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::extremity::{self, JumpMeasure, LaplaceSpec};
use crate::format::join;
use crate::levy_interval::{interval_gaps, semigroup_closure, IntervalGaps, IntervalSet};
use crate::semigroup::{is_gap_free, jump_count_values, GeneratorSet, NumericalSemigroup};
use crate::series::{did_test, nth_root, TruncatedSeries, DID_TOLERANCE};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CaseOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Jump-count tables: generators and the rows `n = 0, 1, …` as listed.
const TABLES: [(&[u64], &[&[u64]]); 4] = [
    (
        &[1, 3],
        &[
            &[0],
            &[1, 3],
            &[2, 4, 6],
            &[3, 5, 7, 9],
            &[4, 6, 8, 10, 12],
            &[5, 7, 9, 11, 13, 15],
        ],
    ),
    (
        &[2, 3],
        &[&[0], &[2, 3], &[4, 5, 6], &[6, 7, 8, 9], &[8, 9, 10, 11, 12]],
    ),
    (
        &[3, 7],
        &[&[0], &[3, 7], &[6, 10, 14], &[9, 21, 13, 17], &[12, 28, 20, 16, 24]],
    ),
    (
        &[4, 9],
        &[&[0], &[4, 9], &[8, 13, 18], &[12, 17, 22, 27], &[16, 21, 26, 31, 36]],
    ),
];

fn gens(values: &[u64]) -> GeneratorSet {
    GeneratorSet::new(values.iter().copied()).expect("fixed generators are valid")
}

fn semigroup_cases() -> Vec<CaseOutcome> {
    let mut out = Vec::new();
    let free = is_gap_free(&gens(&[1, 3]));
    out.push(CaseOutcome::new(
        "semigroup <1,3> has no gaps",
        free,
        format!("gap_free = {free}"),
    ));
    for (g, expected) in [(&[2u64, 3][..], &[1u64][..]), (&[3, 7], &[1, 2, 4, 5, 8, 11])] {
        let (_, sg) = NumericalSemigroup::generated_by(&gens(g));
        out.push(CaseOutcome::new(
            format!("semigroup <{}> gaps = {{{}}}", join(g), join(expected)),
            sg.gaps() == expected,
            format!("gaps = {{{}}}", join(sg.gaps())),
        ));
    }
    let (_, sg) = NumericalSemigroup::generated_by(&gens(&[4, 9]));
    let prefix = [0u64, 4, 8, 9, 12, 13, 16, 17, 18, 20, 21, 22];
    let ok = sg.members_up_to(23) == prefix && sg.conductor() == 24;
    out.push(CaseOutcome::new(
        "semigroup <4,9> support = {0,4,8,9,12,13,16,17,18,20,21,22,24,...}",
        ok,
        format!(
            "members <= 23: {{{}}}, conductor {}",
            join(sg.members_up_to(23)),
            sg.conductor()
        ),
    ));
    out
}

fn table_cases() -> Vec<CaseOutcome> {
    TABLES
        .iter()
        .map(|&(g, rows)| {
            let set = gens(g);
            let mismatches: Vec<usize> = rows
                .iter()
                .enumerate()
                .filter(|&(n, row)| {
                    let expected: BTreeSet<u64> = row.iter().copied().collect();
                    jump_count_values(&set, n as u32) != expected
                })
                .map(|(n, _)| n)
                .collect();
            CaseOutcome::new(
                format!("jump-count table <{}> rows n = 0..{}", join(g), rows.len() - 1),
                mismatches.is_empty(),
                if mismatches.is_empty() {
                    "all rows match".to_string()
                } else {
                    format!("mismatched rows {}", join(mismatches))
                },
            )
        })
        .collect()
}

fn did_cases() -> Vec<CaseOutcome> {
    let mut out = Vec::new();
    let order = 40;
    // p/(1 - (1-p)s^3), p = 1/2: the lattice geometric with its unit shift removed
    let lattice: Vec<f64> = (0..=order)
        .map(|n| if n % 3 == 0 { 0.5 * 0.5f64.powi(n / 3) } else { 0.0 })
        .collect();
    let v = did_test(&TruncatedSeries::new(lattice).expect("finite"), DID_TOLERANCE);
    let on_lattice = v
        .recovered_jump_pmf
        .as_ref()
        .is_some_and(|j| j.keys().all(|k| k % 3 == 0));
    out.push(CaseOutcome::new(
        "p/(1-(1-p)s^3) is DID with jumps on 3Z",
        v.is_did && on_lattice,
        format!("is_did = {}, rate = {:?}", v.is_did, v.recovered_rate),
    ));

    let geometric: Vec<f64> = (0..=order).map(|n| 0.4 * 0.6f64.powi(n)).collect();
    let v = did_test(&TruncatedSeries::new(geometric).expect("finite"), DID_TOLERANCE);
    out.push(CaseOutcome::new(
        "geometric on {0,1,...} is DID",
        v.is_did,
        format!("is_did = {}", v.is_did),
    ));

    let shifted: Vec<f64> = (0..=order)
        .map(|n| if n == 0 { 0.0 } else { 0.5 * 0.5f64.powi(n - 1) })
        .collect();
    let refused = matches!(
        nth_root(&TruncatedSeries::new(shifted).expect("finite"), 2),
        Err(Error::LeftExtremityPositive { .. })
    );
    out.push(CaseOutcome::new(
        "geometric on {1,2,...} is refused (left extremity positive)",
        refused,
        format!("refused = {refused}"),
    ));
    out
}

fn interval_cases() -> Vec<CaseOutcome> {
    let mut out = Vec::new();
    let expected = [(1.3, 2.0, 0.7), (2.6, 3.0, 0.4), (3.9, 4.0, 0.1)];
    let closed = match interval_gaps(1.0, 0.3) {
        Ok(IntervalGaps::Finite(report)) => Some(report),
        _ => None,
    };
    let ok = closed.as_ref().is_some_and(|r| {
        r.count == 3
            && (r.tail_start - 4.0).abs() <= 1e-12
            && r.gaps.iter().zip(&expected).all(|(g, &(lo, hi, len))| {
                (g.lo - lo).abs() <= 1e-12 && (g.hi - hi).abs() <= 1e-12 && (g.length - len).abs() <= 1e-12
            })
    });
    out.push(CaseOutcome::new(
        "jumps on [1, 1.3]: 3 gaps of lengths 0.7, 0.4, 0.1, tail from 4",
        ok,
        closed
            .map(|r| {
                format!(
                    "count {}, lengths {}, tail {}",
                    r.count,
                    join(r.gaps.iter().map(|g| crate::format::fmt_float(g.length))),
                    crate::format::fmt_float(r.tail_start)
                )
            })
            .unwrap_or_else(|| "no finite report".to_string()),
    ));
    let closure = IntervalSet::interval(1.0, 1.3)
        .map_err(|e| e.to_string())
        .and_then(|g| semigroup_closure(&g).map_err(|e| e.to_string()));
    let agrees = closure.as_ref().ok().and_then(|c| c.as_continuum()).is_some_and(|s| {
        s.tail_start().is_some_and(|t| (t - 4.0).abs() <= 1e-12)
            && s.gaps().len() == 4
            && s.gaps()[1..]
                .iter()
                .zip(&expected)
                .all(|(&(lo, hi), &(elo, ehi, _))| (lo - elo).abs() <= 1e-12 && (hi - ehi).abs() <= 1e-12)
    });
    out.push(CaseOutcome::new(
        "Minkowski closure of [1, 1.3] matches the closed form",
        agrees,
        format!("closure ok = {agrees}"),
    ));
    out
}

fn extremity_cases() -> Vec<CaseOutcome> {
    let mut out = Vec::new();
    let spec = LaplaceSpec::new(3.0, 2.0, JumpMeasure::Discrete(vec![(1.0, 1.0)]), None).expect("valid spec");
    let root = extremity::convolution_root(&spec, 3).expect("n >= 1");
    let est = extremity::left_extremity_estimate(&root, &extremity::default_schedule());
    let ok = root.drift == 1.0 && est.as_ref().is_ok_and(|e| (e.estimate - 1.0).abs() <= 1e-3);
    out.push(CaseOutcome::new(
        "cube root of drift 3 has left extremity 1",
        ok,
        format!("estimate {:?}", est.map(|e| e.estimate).ok()),
    ));
    let spec = LaplaceSpec::new(0.0, 2.0, JumpMeasure::Discrete(vec![(1.0, 1.0)]), None).expect("valid spec");
    let mass = extremity::mass_at_zero(&spec, 4).unwrap_or(f64::NAN);
    out.push(CaseOutcome::new(
        "F_4(0) = exp(-2/4)",
        (mass - (-0.5f64).exp()).abs() <= 1e-15,
        format!("F_4(0) = {}", crate::format::fmt_float(mass)),
    ));
    out
}

/// Every reference case, in a fixed order.
pub fn reference_cases() -> Vec<CaseOutcome> {
    let mut out = semigroup_cases();
    out.extend(table_cases());
    out.extend(did_cases());
    out.extend(interval_cases());
    out.extend(extremity_cases());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_reference_cases_pass() {
        for case in reference_cases() {
            assert!(case.passed, "{}: {}", case.name, case.detail);
        }
    }
}

//! Additive semigroups generated by finitely many positive integers.
//!
//! The support of a compound Poisson law on the integers is the semigroup
//! generated by its jump sizes. After dividing out the span (the gcd of the
//! jump sizes) the semigroup has finitely many gaps, a largest gap (the
//! Frobenius number) and a conductor past which every integer is a member.
//!
//! All gap quantities are reported in *reduced units*: a gap `g` in a
//! semigroup with span `ν` is the raw value `ν·g`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Nonempty set of positive jump sizes, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct GeneratorSet(Vec<u64>);

impl GeneratorSet {
    pub fn new(values: impl IntoIterator<Item = u64>) -> Result<Self> {
        let set: BTreeSet<u64> = values.into_iter().collect();
        if set.is_empty() {
            return Err(domain("generator set is empty"));
        }
        if set.contains(&0) {
            return Err(domain("generators must be positive integers"));
        }
        Ok(Self(set.into_iter().collect()))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn min(&self) -> u64 {
        self.0[0]
    }

    pub fn max(&self) -> u64 {
        self.0[self.0.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, value: u64) -> bool {
        self.0.binary_search(&value).is_ok()
    }

    pub fn gcd(&self) -> u64 {
        self.0.iter().copied().fold(0, gcd)
    }
}

impl TryFrom<Vec<u64>> for GeneratorSet {
    type Error = Error;

    fn try_from(values: Vec<u64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<GeneratorSet> for Vec<u64> {
    fn from(set: GeneratorSet) -> Self {
        set.0
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Splits a generator set into its span and the reduced (gcd 1) generators.
pub fn normalize(gens: &GeneratorSet) -> (u64, GeneratorSet) {
    let span = gens.gcd();
    let reduced = GeneratorSet(gens.0.iter().map(|&y| y / span).collect());
    (span, reduced)
}

/// The semigroup generated by a gcd-1 generator set, with its gaps resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalSemigroup {
    generators: GeneratorSet,
    /// membership for 0..conductor
    below_conductor: Vec<bool>,
    gaps: Vec<u64>,
    conductor: u64,
}

impl NumericalSemigroup {
    /// Builds the membership table of the semigroup generated by `reduced`.
    ///
    /// The table grows by doubling until it contains `min(reduced)`
    /// consecutive members; from there on adding the smallest generator
    /// reaches every larger integer.
    pub fn sieve(reduced: &GeneratorSet) -> Result<Self> {
        if reduced.gcd() != 1 {
            return Err(Error::Precondition(format!(
                "sieve requires gcd 1 generators, got gcd {} (normalize first)",
                reduced.gcd()
            )));
        }
        let run = reduced.min() as usize;
        let mut bound = initial_bound(reduced);
        loop {
            let table = membership_table(reduced, bound);
            if let Some(conductor) = first_run(&table, run) {
                let below_conductor = table[..conductor].to_vec();
                let gaps = (0..conductor as u64)
                    .filter(|&x| !below_conductor[x as usize])
                    .collect();
                return Ok(Self {
                    generators: reduced.clone(),
                    below_conductor,
                    gaps,
                    conductor: conductor as u64,
                });
            }
            bound *= 2;
        }
    }

    /// Normalizes and sieves in one step, returning the span alongside.
    pub fn generated_by(gens: &GeneratorSet) -> (u64, Self) {
        let (span, reduced) = normalize(gens);
        let sg = Self::sieve(&reduced).expect("normalized generators have gcd 1");
        (span, sg)
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    /// Largest gap, absent when the semigroup is all of the nonnegative integers.
    pub fn frobenius(&self) -> Option<u64> {
        self.gaps.last().copied()
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn contains(&self, x: u64) -> bool {
        x >= self.conductor || self.below_conductor[x as usize]
    }

    /// Members in `0..=limit`, ascending.
    pub fn members_up_to(&self, limit: u64) -> Vec<u64> {
        (0..=limit).filter(|&x| self.contains(x)).collect()
    }

    pub fn is_gap_free(&self) -> bool {
        self.gaps.is_empty()
    }

    /// Maximal runs of consecutive gaps as `(start, length)`, by increasing start.
    pub fn gap_runs(&self) -> Vec<(u64, u64)> {
        let mut runs: Vec<(u64, u64)> = Vec::new();
        for &g in &self.gaps {
            match runs.last_mut() {
                Some((start, len)) if *start + *len == g => *len += 1,
                _ => runs.push((g, 1)),
            }
        }
        runs
    }
}

fn initial_bound(reduced: &GeneratorSet) -> usize {
    let g = reduced.as_slice();
    for (i, &a) in g.iter().enumerate() {
        for &b in &g[i + 1..] {
            if gcd(a, b) == 1 {
                return (a * b).max(2) as usize;
            }
        }
    }
    (4 * reduced.max()).max(2) as usize
}

fn membership_table(reduced: &GeneratorSet, bound: usize) -> Vec<bool> {
    let mut table = vec![false; bound + 1];
    table[0] = true;
    for x in 1..=bound {
        table[x] = reduced
            .as_slice()
            .iter()
            .take_while(|&&y| y as usize <= x)
            .any(|&y| table[x - y as usize]);
    }
    table
}

fn first_run(table: &[bool], run: usize) -> Option<usize> {
    let mut len = 0;
    for (x, &member) in table.iter().enumerate() {
        if member {
            len += 1;
            if len == run {
                return Some(x + 1 - run);
            }
        } else {
            len = 0;
        }
    }
    None
}

/// Maximal runs of consecutive gaps.
pub fn gap_runs(sg: &NumericalSemigroup) -> Vec<(u64, u64)> {
    sg.gap_runs()
}

/// Gap-free test on the span lattice: true iff the reduced generators contain 1.
///
/// The sieve is run as well and must agree.
pub fn is_gap_free(gens: &GeneratorSet) -> bool {
    let (_, reduced) = normalize(gens);
    let by_generator = reduced.contains(1);
    let by_sieve = NumericalSemigroup::sieve(&reduced)
        .expect("normalized generators have gcd 1")
        .is_gap_free();
    assert_eq!(
        by_generator, by_sieve,
        "generator test and sieve disagree on {:?}",
        gens
    );
    by_generator
}

/// All values reachable with exactly `n` jumps: `{Σ n_i y_i : Σ n_i = n}`.
///
/// Computed as the `n`-fold Minkowski sum of the generator set with itself.
pub fn jump_count_values(gens: &GeneratorSet, n: u32) -> BTreeSet<u64> {
    let mut current = BTreeSet::from([0u64]);
    for _ in 0..n {
        current = current
            .iter()
            .flat_map(|&s| gens.as_slice().iter().map(move |&y| s + y))
            .collect();
    }
    current
}

/// Serializable summary of a generator set's semigroup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub span: u64,
    pub generators: Vec<u64>,
    pub reduced_generators: Vec<u64>,
    /// Members in `[0, conductor + slack]`, reduced units.
    pub support_prefix: Vec<u64>,
    pub gaps: Vec<u64>,
    pub gap_runs: Vec<(u64, u64)>,
    pub frobenius: Option<u64>,
    pub conductor: u64,
    pub gap_free: bool,
}

impl GapReport {
    pub fn new(gens: &GeneratorSet, slack: u64) -> Self {
        let (span, sg) = NumericalSemigroup::generated_by(gens);
        Self {
            span,
            generators: gens.as_slice().to_vec(),
            reduced_generators: sg.generators().as_slice().to_vec(),
            support_prefix: sg.members_up_to(sg.conductor() + slack),
            gaps: sg.gaps().to_vec(),
            gap_runs: sg.gap_runs(),
            frobenius: sg.frobenius(),
            conductor: sg.conductor(),
            gap_free: sg.is_gap_free(),
        }
    }

    /// Upper end of the integer range covered by `support_prefix` and `gaps`.
    pub fn horizon(&self) -> u64 {
        self.support_prefix.last().copied().unwrap_or(0)
    }
}

use proptest::prelude::*;

use support_gaps::levy_interval::Closure;
use support_gaps::levy_interval::{interval_gaps, semigroup_closure, IntervalGaps, IntervalSet};
use support_gaps::semigroup::{gap_runs, GeneratorSet, NumericalSemigroup};
use support_gaps::series::{
    compound_poisson_pmf, did_test, nth_root, support_indices, CompoundPoissonSpec, JumpPmf, DID_TOLERANCE,
    STRUCTURAL_ZERO,
};
use support_gaps::simulator::{empirical_support_check, sample, JumpLaw, SimulationConfig};

fn jump_law() -> impl Strategy<Value = (Vec<(u64, f64)>, f64)> {
    (prop::collection::btree_map(1u64..=9, 0.1f64..1.0, 1..4), 0.05f64..5.0).prop_map(|(m, lt)| {
        let total: f64 = m.values().sum();
        (m.into_iter().map(|(y, w)| (y, w / total)).collect(), lt)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semigroup_is_closed_and_cofinite(g in prop::collection::btree_set(2u64..=20, 1..4)) {
        let set = GeneratorSet::new(g).unwrap();
        let (span, sg) = NumericalSemigroup::generated_by(&set);
        prop_assert!(set.as_slice().iter().all(|y| y % span == 0));
        let c = sg.conductor();
        for x in sg.members_up_to(c) {
            for y in sg.members_up_to(c) {
                prop_assert!(sg.contains(x + y));
            }
        }
        prop_assert!((c..c + 50).all(|x| sg.contains(x)));
        let covered: u64 = gap_runs(&sg).iter().map(|r| r.1).sum();
        prop_assert_eq!(covered as usize, sg.gaps().len());
    }

    #[test]
    fn pmf_is_a_distribution((weights, lt) in jump_law()) {
        let spec = CompoundPoissonSpec::new(lt, JumpPmf::new(weights).unwrap(), 1.0).unwrap();
        let pmf = compound_poisson_pmf(&spec, 60);
        prop_assert!(pmf.coefficients().iter().all(|&p| p >= 0.0));
        prop_assert!(pmf.coefficients().iter().sum::<f64>() <= 1.0 + 1e-12);
        prop_assert!((pmf.coefficients()[0] - (-lt).exp()).abs() <= 1e-15);
    }

    #[test]
    fn roots_are_did_with_scaled_rate((weights, lt) in jump_law(), n in 2u32..6) {
        let spec = CompoundPoissonSpec::new(lt, JumpPmf::new(weights).unwrap(), 1.0).unwrap();
        let pmf = compound_poisson_pmf(&spec, 40);
        let root = nth_root(&pmf, n).unwrap();
        prop_assert!(root.coefficients().iter().all(|&p| p >= -1e-12));
        prop_assert_eq!(support_indices(&root, STRUCTURAL_ZERO), support_indices(&pmf, STRUCTURAL_ZERO));
        let whole = did_test(&pmf, DID_TOLERANCE);
        let part = did_test(&root, DID_TOLERANCE);
        prop_assert!(whole.is_did && part.is_did);
        let (rw, rp) = (whole.recovered_rate.unwrap(), part.recovered_rate.unwrap());
        prop_assert!((rw / n as f64 - rp).abs() <= 1e-9);
        let (qw, qp) = (whole.recovered_jump_pmf.unwrap(), part.recovered_jump_pmf.unwrap());
        for (k, q) in &qw {
            prop_assert!((q - qp.get(k).copied().unwrap_or(0.0)).abs() <= 1e-9);
        }
    }

    #[test]
    fn interval_closure_matches_closed_form(c in 0.2f64..4.0, ratio in 0.02f64..1.5) {
        let delta = c * ratio;
        let closure = semigroup_closure(&IntervalSet::interval(c, c + delta).unwrap()).unwrap();
        let set = closure.as_continuum().unwrap();
        match interval_gaps(c, delta).unwrap() {
            IntervalGaps::Finite(report) => {
                prop_assert_eq!(set.gaps().len(), report.count + 1);
                prop_assert!((set.tail_start().unwrap() - report.tail_start).abs() <= 1e-9 * report.tail_start.max(1.0));
            }
            IntervalGaps::Lattice { .. } => prop_assert!(false, "positive delta"),
        }
    }

    #[test]
    fn simulations_stay_in_the_semigroup((weights, lt) in jump_law(), seed in any::<u64>()) {
        let jumps = JumpPmf::new(weights).unwrap();
        let closure = Closure::lattice(&jumps.support());
        let config = SimulationConfig::new(JumpLaw::Discrete { rate: lt, jumps }, vec![0.5, 2.0], 500, seed).unwrap();
        prop_assert!(empirical_support_check(&sample(&config), &closure, 30.0).is_ok());
    }
}

#[test]
fn same_seed_same_stream() {
    let law = JumpLaw::Interval {
        rate: 40.0,
        c: 1.0,
        delta: 0.3,
    };
    let config = SimulationConfig::new(law, vec![1.0, 2.0], 1000, 99).unwrap();
    assert_eq!(sample(&config), sample(&config));
}

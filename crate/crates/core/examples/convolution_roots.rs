// n-th convolution roots keep the support of the original law.

use support_gaps::series::{
    compound_poisson_pmf, nth_root, support_indices, CompoundPoissonSpec, JumpPmf, STRUCTURAL_ZERO,
};

pub fn run_example() -> support_gaps::Result<()> {
    let spec = CompoundPoissonSpec::new(1.5, JumpPmf::new([(2, 0.3), (5, 0.7)])?, 1.0)?;
    let pmf = compound_poisson_pmf(&spec, 25);
    let support = support_indices(&pmf, STRUCTURAL_ZERO);
    for n in [2, 3, 5] {
        let root = nth_root(&pmf, n)?;
        let mut back = root.clone();
        for _ in 1..n {
            back = back.mul(&root);
        }
        let err = back
            .coefficients()
            .iter()
            .zip(pmf.coefficients())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!(
            "n = {n}: p0 = {:.6}, same support = {}, reconvolution error = {err:.2e}",
            root.coefficients()[0],
            support_indices(&root, STRUCTURAL_ZERO) == support
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> support_gaps::Result<()> {
    run_example()
}

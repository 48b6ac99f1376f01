use exdim_core::markov_systems::{
    cell_lookup, gauss_subsystem, level_geometry, linear_markov_at, quadratic_julia, refine, verify_markov,
    JuliaConfig, Region,
};
use exdim_core::{Complex64, Sft};
use proptest::prelude::*;

fn fib(n: usize) -> f64 {
    let (mut a, mut b) = (0.0f64, 1.0f64);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauss_systems_are_markov(digits in prop::sample::subsequence(vec![1u32, 2, 3, 5, 8], 1..=4), depth in 1usize..=4) {
        let ms = gauss_subsystem(&digits, depth).unwrap();
        prop_assert!(verify_markov(&ms, 1e-12).unwrap());
    }

    #[test]
    fn linear_systems_are_markov(slope_a in 2.0f64..5.0, slope_b in 2.0f64..5.0, depth in 1usize..=4) {
        let cells = [(0.0, 0.5), (0.5, 1.0)];
        let ms = linear_markov_at(&[slope_a, slope_b], &Sft::full(2), &cells, depth).unwrap();
        prop_assert!(verify_markov(&ms, 1e-12).unwrap());
    }

    #[test]
    fn refinement_nests_cells_and_derivatives(digits in prop::sample::subsequence(vec![1u32, 2, 3, 4], 2..=3), depth in 1usize..=3) {
        let ms = gauss_subsystem(&digits, depth).unwrap();
        let fine = refine(&ms, 1).unwrap();
        let code = fine.cell_words().unwrap();
        let coarse_code = ms.cell_words().unwrap();
        for (i, cell) in fine.cells().iter().enumerate() {
            let w = code.word_of(i);
            let parent = cell_lookup(&ms, &w[..depth]).unwrap();
            prop_assert!(parent.contains(cell, 1e-15));
        }
        for b in fine.branches() {
            let u = code.word_of(b.from);
            let from = coarse_code.symbol_of(&u[..depth]).unwrap();
            let to = coarse_code.symbol_of(&u[1..]).unwrap();
            let parent = ms.branches().iter().find(|p| p.from == from && p.to == to).unwrap();
            prop_assert!(parent.deriv.contains_interval(&b.deriv), "{:?} in {:?}", b.deriv, parent.deriv);
        }
    }

    #[test]
    fn gauss_cylinders_shrink(digits in prop::sample::subsequence(vec![1u32, 2, 3, 4], 1..=3), k in 1usize..=8) {
        // |I(a_1..a_k)| = 1/(q_k (q_k + q_{k-1})) and q_k >= F_{k+1}
        let ms = gauss_subsystem(&digits, 1).unwrap();
        let (_, cells) = level_geometry(&ms, k).unwrap();
        let bound = 1.0 / (fib(k + 1) * fib(k + 2));
        for c in &cells {
            prop_assert!(c.diameter() <= bound * (1.0 + 1e-12), "{} > {bound}", c.diameter());
        }
    }
}

#[test]
fn julia_c0_cells_approach_the_circle() {
    let mut prev = f64::INFINITY;
    for depth in [2usize, 4, 6, 8, 10] {
        let ms = quadratic_julia(JuliaConfig::new(Complex64::new(0.0, 0.0), depth)).unwrap();
        assert!(verify_markov(&ms, 0.0).unwrap());
        let delta = ms
            .cells()
            .iter()
            .map(|c| {
                assert!(matches!(c.region, Region::Box { .. }));
                // every point of the cell lies within this of the circle
                (c.center().norm() - 1.0).abs() + c.diameter() / 2.0
            })
            .fold(0.0, f64::max);
        assert!(delta <= prev, "depth {depth}: {delta} > {prev}");
        prev = delta;
    }
    assert!(prev < 0.01, "{prev}");
}

// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;

use cyclegas::heatkernel::HeatKernel;
use cyclegas::lattice::LatticeSpec;
use cyclegas::permalg::{
    expand, read_coefficients, write_coefficients, GroupAlgebraElement, Permutation,
};
use cyclegas::saddle::{logistic, polylog_sum, solve_gas, solve_tau};
use cyclegas::spinsector::SectorTraceTable;

fn lattice() -> impl Strategy<Value = LatticeSpec> {
    (1usize..=3, 3usize..=7).prop_map(|(d, l)| LatticeSpec::new(d, l).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #[test]
    fn coordinates_round_trip(spec in lattice(), raw in any::<u32>()) {
        let i = raw as usize % spec.num_sites();
        let c: Vec<i64> = spec.coords(i).unwrap().into_iter().map(|x| x as i64).collect();
        prop_assert_eq!(spec.site_index(&c).unwrap(), i);
    }

    #[test]
    fn neighbours_are_symmetric(spec in lattice(), raw in any::<u32>()) {
        let i = raw as usize % spec.num_sites();
        let nb = spec.neighbors(i).unwrap();
        prop_assert_eq!(nb.len(), 2 * spec.dim());
        for j in nb {
            prop_assert!(spec.neighbors(j).unwrap().contains(&i));
        }
    }

    #[test]
    fn kernel_rows_are_stochastic(spec in lattice(), beta in 0.0f64..20.0, raw in any::<u32>()) {
        let k = HeatKernel::new(spec, beta).unwrap();
        let i = raw as usize % spec.num_sites();
        let row: f64 = (0..spec.num_sites()).map(|j| k.evaluate(i, j).unwrap()).sum();
        prop_assert!((row - 1.0).abs() < 1e-12);
        prop_assert!((0..spec.num_sites()).all(|j| k.evaluate(i, j).unwrap() > 0.0 || beta == 0.0));
    }

    #[test]
    fn kernel_is_translation_invariant(spec in lattice(), beta in 0.0f64..5.0, a in any::<u32>(), b in any::<u32>(), s in any::<u32>()) {
        let n = spec.num_sites();
        let (i, j, shift) = (a as usize % n, b as usize % n, s as usize % n);
        let k = HeatKernel::new(spec, beta).unwrap();
        let add = |x: usize| {
            let cx = spec.coords(x).unwrap();
            let cs = spec.coords(shift).unwrap();
            let c: Vec<i64> = cx.iter().zip(&cs).map(|(p, q)| (p + q) as i64).collect();
            spec.site_index(&c).unwrap()
        };
        prop_assert_eq!(k.evaluate(i, j).unwrap(), k.evaluate(add(i), add(j)).unwrap());
        prop_assert_eq!(k.evaluate(i, j).unwrap(), k.evaluate(j, i).unwrap());
    }

    #[test]
    fn permutation_rank_round_trip(p in (1usize..=9).prop_flat_map(permutation)) {
        let r = p.lehmer_rank();
        prop_assert_eq!(Permutation::from_lehmer_rank(p.len(), r).unwrap(), p.clone());
        prop_assert!(p.compose(&p.inverse()).is_identity());
        let total: usize = p.cycles().lengths().sum();
        prop_assert_eq!(total, p.len());
    }

    #[test]
    fn coefficient_file_round_trip(
        terms in prop::collection::vec(((0usize..720), -1.0f64..1.0), 0..40),
        beta in 0.0f64..10.0,
    ) {
        let mut e = GroupAlgebraElement::zero(6);
        for (r, c) in terms {
            e.add_term(Permutation::from_lehmer_rank(6, r).unwrap(), c).unwrap();
        }
        let mut buf = Vec::new();
        write_coefficients(&mut buf, &e, beta, 1e-12).unwrap();
        let back = read_coefficients(buf.as_slice()).unwrap();
        prop_assert_eq!(back.n, 6);
        prop_assert_eq!(back.beta, beta);
        for (p, c) in e.iter() {
            prop_assert_eq!(back.element.coefficient(&p), c);
        }
        prop_assert_eq!(back.element.iter().count(), e.iter().count());
    }

    #[test]
    fn logistic_is_a_bounded_odd_complement(x in -800.0f64..800.0) {
        let y = logistic(x);
        prop_assert!((0.0..=1.0).contains(&y));
        prop_assert!((y + logistic(-x) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn polylog_is_monotone_in_alpha(a in -5.0f64..-1e-6, da in 1e-6f64..1.0, p in 0.5f64..3.0) {
        let lo = polylog_sum(a - da, p, 1e-13).unwrap();
        let hi = polylog_sum(a, p, 1e-13).unwrap();
        prop_assert!(lo < hi);
    }

    #[test]
    fn gas_constraint_closes(d in 1usize..=3, beta in 0.1f64..200.0) {
        let gas = solve_gas(d, beta, 10, 1e-12).unwrap();
        prop_assert!(gas.alpha <= 0.0);
        prop_assert!((0.0..1.0).contains(&gas.condensate_fraction));
        prop_assert!(gas.constraint_residual().unwrap() <= 1e-9);
    }

    #[test]
    fn sector_occupation_closes(beta in 0.2f64..2.5, frac in 0.05f64..0.95) {
        let gas = solve_gas(3, beta, 10, 1e-12).unwrap();
        let k = frac * gas.num_sites();
        let occ = solve_tau(&gas, k, 1e-12).unwrap();
        prop_assert!(((occ.finite_up_length().unwrap() - k) / k).abs() <= 1e-9);
        for n in 1..=200 {
            prop_assert!(occ.occupation(n).unwrap() <= gas.density(n).unwrap());
        }
    }

    #[test]
    fn sector_traces_are_palindromic(l in 3usize..=8, beta in 0.0f64..6.0) {
        let spec = LatticeSpec::new(1, l).unwrap();
        let t = SectorTraceTable::build(&spec, beta).unwrap();
        for k in 0..=l {
            prop_assert!((t.traces[k] - t.traces[l - k]).abs() <= 1e-12 * t.traces[k]);
            prop_assert!(t.traces[k] >= 1.0 - 1e-12);
        }
    }
}

#[test]
fn expansion_is_positive_and_normalized_across_lattices() {
    for l in 3..=7 {
        let spec = LatticeSpec::new(1, l).unwrap();
        for beta in [0.0, 0.3, 3.0] {
            let e = expand(&spec, beta, 1e-12).unwrap().element;
            assert!((e.coefficient_sum() - 1.0).abs() <= 1e-12);
            assert!(e.min_coefficient().unwrap() >= -1e-14);
        }
    }
}

use proptest::prelude::*;
use vhk_core::grid::SubRectangle;
use vhk_core::io::{grid_function_document, load_grid_function};
use vhk_core::multiindex::{count_between, MultiIndex, Parity, ParityFilter};
use vhk_core::oracle::enumerate_partitions;
use vhk_core::random;
use vhk_core::semigroup::{bw_extract, BoundednessCap, MetricSemigroup};
use vhk_core::variation::{
    is_totally_monotone, jordan_decomposition, mixed_difference, total_variation, total_variation_function,
    tv_between,
};

fn multiindex(max_dim: usize) -> impl Strategy<Value = MultiIndex> {
    (1..=max_dim).prop_flat_map(|n| (0u32..(1 << n)).prop_map(move |b| MultiIndex::from_bits(b, n).unwrap()))
}

fn pair(max_dim: usize) -> impl Strategy<Value = (MultiIndex, MultiIndex)> {
    (1..=max_dim).prop_flat_map(|n| {
        (0u32..(1 << n), 0u32..(1 << n))
            .prop_map(move |(a, b)| (MultiIndex::from_bits(a, n).unwrap(), MultiIndex::from_bits(b, n).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn enumeration_is_sorted_and_complete(g in multiindex(10)) {
        let all = g.enumerate_leq(ParityFilter::All);
        prop_assert_eq!(all.len(), 1usize << g.order());
        prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(all.iter().all(|a| a.leq(&g)));
    }

    #[test]
    fn even_and_odd_balance(g in multiindex(10)) {
        let even = g.enumerate_leq(ParityFilter::Even).len();
        let odd = g.enumerate_leq(ParityFilter::Odd).len();
        if g.is_zero() {
            prop_assert_eq!((even, odd), (1, 0));
        } else {
            prop_assert_eq!(even, odd);
        }
    }

    #[test]
    fn lattice_laws((a, b) in pair(12)) {
        prop_assert!(a.meet(&b).leq(&a) && a.leq(&a.join(&b)));
        prop_assert_eq!(a.join(&b).complement(), a.complement().meet(&b.complement()));
        prop_assert_eq!(a.complement().complement(), a);
        prop_assert_eq!(a.join(&b).order() + a.meet(&b).order(), a.order() + b.order());
        prop_assert_eq!(a.disjoint_sum(&b).is_some(), a.meet(&b).is_zero());
    }

    #[test]
    fn bit_strings_round_trip(a in multiindex(16)) {
        let text = a.to_string();
        prop_assert_eq!(text.len(), a.dim());
        prop_assert_eq!(text.parse::<MultiIndex>().unwrap(), a);
    }

    #[test]
    fn count_between_matches_enumeration((b, g) in pair(10)) {
        let b = b.meet(&g);
        for parity in [Parity::Even, Parity::Odd] {
            let filter = if parity == Parity::Even { ParityFilter::Even } else { ParityFilter::Odd };
            let brute = g.enumerate_leq(filter).iter().filter(|a| b.leq(a)).count() as u64;
            prop_assert_eq!(count_between(&b, &g, parity).unwrap(), brute);
        }
    }

    #[test]
    fn refinement_is_a_join(seed in any::<u64>(), dims in 1usize..=3) {
        let mut rng = random::rng(seed);
        let shape = random::shape(&mut rng, dims, 2, 6);
        let grid = random::grid(&mut rng, &shape);
        let rect = random::rectangle(&mut rng, &grid, true);
        let p = random::partition(&mut rng, &shape, &rect);
        let q = random::partition(&mut rng, &shape, &rect);
        let r = p.refine(&q).unwrap();
        prop_assert!(r.refines(&p) && r.refines(&q));
        prop_assert_eq!(r.refine(&p).unwrap(), r.clone());
        let cells = r.cells();
        prop_assert_eq!(cells.len(), r.cell_count());
        let volume = |c: &SubRectangle| -> usize { c.lo().iter().zip(c.hi()).map(|(l, h)| h - l).product() };
        prop_assert_eq!(cells.iter().map(volume).sum::<usize>(), volume(&rect));
    }

    #[test]
    fn partition_count(seed in any::<u64>(), dims in 1usize..=2) {
        let mut rng = random::rng(seed);
        let shape = random::shape(&mut rng, dims, 2, 6);
        let grid = random::grid(&mut rng, &shape);
        let rect = random::rectangle(&mut rng, &grid, true);
        let interior: usize = rect.lo().iter().zip(rect.hi()).map(|(l, h)| h - l - 1).sum();
        let parts: Vec<_> = enumerate_partitions(&grid, &rect).unwrap().collect();
        prop_assert_eq!(parts.len(), 1usize << interior);
        prop_assert!(parts.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn extraction_radius_is_certified(seed in any::<u64>(), len in 4usize..200) {
        let mut rng = random::rng(seed);
        let norm = random::norm(&mut rng);
        let values: Vec<_> = (0..len).map(|_| random::vector(&mut rng, 2, norm)).collect();
        let indices: Vec<usize> = (0..len).collect();
        let cap = BoundednessCap {
            growth_ratio: f64::INFINITY,
            ..Default::default()
        };
        let eps = 1e-3;
        let e = bw_extract(&indices, |j| values[j].clone(), eps, &cap).unwrap();
        prop_assert!(!e.indices.is_empty());
        prop_assert!(e.indices.windows(2).all(|w| w[0] < w[1]));
        for &j in &e.indices {
            prop_assert!(values[j].dist(&e.limit).unwrap() <= e.radius + 1e-15);
        }
        prop_assert!(e.radius <= eps);
    }

    #[test]
    fn cap_flags_linear_growth(scale in 1e-2f64..1e3, len in 32usize..400) {
        let spreads: Vec<f64> = (0..len).map(|j| scale * j as f64).collect();
        prop_assert!(BoundednessCap::default().check(&spreads).is_err());
        let flat: Vec<f64> = (0..len).map(|j| scale * (1.0 - 0.5f64.powi(j as i32))).collect();
        prop_assert!(BoundednessCap::default().check(&flat).is_ok());
    }

    #[test]
    fn mixed_difference_vanishes_on_flat_axes(seed in any::<u64>(), dims in 1usize..=3) {
        let mut rng = random::rng(seed);
        let space = random::spaces(&mut rng)[(seed % 4) as usize];
        let shape = random::shape(&mut rng, dims, 2, 4);
        let grid = random::grid(&mut rng, &shape);
        let f = random::dynamic_function(&mut rng, grid, space);
        let (x, mut y) = random::ordered_pair(&mut rng, f.grid(), false);
        let z = random::node(&mut rng, f.grid());
        let alpha = MultiIndex::ones(dims).unwrap();
        y[0] = x[0];
        prop_assert_eq!(mixed_difference(&f, &alpha, &x, &y, &z).unwrap(), 0.0);
    }

    #[test]
    fn tv_is_monotone_in_the_rectangle(seed in any::<u64>(), dims in 1usize..=3) {
        let mut rng = random::rng(seed);
        let space = random::spaces(&mut rng)[(seed % 4) as usize];
        let shape = random::shape(&mut rng, dims, 2, 4);
        let grid = random::grid(&mut rng, &shape);
        let f = random::dynamic_function(&mut rng, grid, space);
        let (x, y) = random::ordered_pair(&mut rng, f.grid(), false);
        let inner = tv_between(&f, &x, &y).unwrap();
        let outer = total_variation(&f).unwrap().tv;
        prop_assert!(inner <= outer + 1e-12);
    }

    #[test]
    fn tv_function_is_monotone_and_preserves_tv(seed in any::<u64>(), dims in 1usize..=3) {
        let mut rng = random::rng(seed);
        let shape = random::shape(&mut rng, dims, 2, 4);
        let grid = random::grid(&mut rng, &shape);
        let f = random::function(&mut rng, grid, random::real);
        let nu = total_variation_function(&f).unwrap();
        prop_assert_eq!(*nu.at(&f.grid().lower()), 0.0);
        prop_assert!(is_totally_monotone(&nu, 1e-12).unwrap());
        let (a, b) = (total_variation(&nu).unwrap().tv, total_variation(&f).unwrap().tv);
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn jordan_pieces_recombine(seed in any::<u64>(), dims in 1usize..=2) {
        let mut rng = random::rng(seed);
        let shape = random::shape(&mut rng, dims, 2, 5);
        let grid = random::grid(&mut rng, &shape);
        let g = random::function(&mut rng, grid, random::real);
        let j = jordan_decomposition(&g).unwrap();
        for ((n, p), v) in j.nu.values().iter().zip(j.pi.values()).zip(g.values()) {
            prop_assert_eq!(n - p, *v);
        }
        prop_assert!(is_totally_monotone(&j.pi, 0.0).unwrap());
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), dims in 1usize..=3) {
        let mut rng = random::rng(seed);
        let space = random::spaces(&mut rng)[(seed % 4) as usize];
        let shape = random::shape(&mut rng, dims, 2, 4);
        let grid = random::grid(&mut rng, &shape);
        let f = random::dynamic_function(&mut rng, grid, space);
        let text = grid_function_document(&f).to_string();
        let back = load_grid_function(&text).unwrap();
        prop_assert_eq!(back.grid(), f.grid());
        prop_assert_eq!(back.values(), f.values());
    }
}

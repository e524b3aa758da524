//! Property checks for statements that must hold at every truncation depth.

use hardy_tree::{
    automorphism_norm, compose, counting_function, lower_bound_from_counts,
    random_ball_vertex, random_dense_function, random_sparse_function, random_total_map,
    sufficiency_from_counts, truncated_opnorm_from_counts, weight, PExponent,
    PartialAutomorphism, SelfMap, TreeParams, Vertex,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-12;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * a.abs().max(b.abs()).max(1.0)
}

fn exponent(index: usize) -> PExponent {
    match index {
        0 => PExponent::finite(1.0).unwrap(),
        1 => PExponent::finite(1.5).unwrap(),
        2 => PExponent::finite(2.0).unwrap(),
        3 => PExponent::finite(3.0).unwrap(),
        _ => PExponent::Infinity,
    }
}

proptest! {
    #[test]
    fn norms_satisfy_the_axioms(
        q in 1u32..=3,
        depth in 2usize..=5,
        p_index in 0usize..5,
        seed in any::<u64>(),
    ) {
        let params = TreeParams::new(q).unwrap();
        let p = exponent(p_index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_dense_function(&params, depth, &mut rng).unwrap();
        let g = random_dense_function(&params, depth, &mut rng).unwrap();
        let nf = f.tp_norm(p).unwrap().sup;
        let ng = g.tp_norm(p).unwrap().sup;
        prop_assert!(nf >= 0.0);
        let zero = hardy_tree::TreeFunction::zero(params, depth);
        prop_assert_eq!(zero.tp_norm(p).unwrap().sup, 0.0);
        let sum = f.add(&g).unwrap().tp_norm(p).unwrap().sup;
        prop_assert!(sum <= nf + ng + TOL * (1.0 + nf + ng));
        let factor = Complex64::new(-1.25, 0.5);
        let scaled = f.scale(factor).tp_norm(p).unwrap().sup;
        prop_assert!(close(scaled, factor.norm() * nf));
        let phase = Complex64::from_polar(1.0, 2.1);
        let rotated = f.scale(phase).tp_norm(p).unwrap().sup;
        prop_assert!(close(rotated, nf));
    }

    #[test]
    fn values_obey_the_pointwise_difference_bound(
        q in 1u32..=3,
        depth in 2usize..=5,
        p_index in 0usize..4,
        seed in any::<u64>(),
    ) {
        let params = TreeParams::new(q).unwrap();
        let p = exponent(p_index);
        let pv = p.finite_value().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_dense_function(&params, depth, &mut rng).unwrap();
        let g = random_dense_function(&params, depth, &mut rng).unwrap();
        let gap_norm = f.sub(&g).unwrap().tp_norm(p).unwrap().sup;
        for _ in 0..8 {
            let v = random_ball_vertex(&params, depth, &mut rng).unwrap();
            let gap = (f.value(&v).unwrap() - g.value(&v).unwrap()).norm();
            let ceiling = (weight(&params, &v).unwrap() as f64).powf(1.0 / pv) * gap_norm;
            prop_assert!(gap <= ceiling * (1.0 + TOL) + TOL);
        }
    }

    #[test]
    fn sparse_and_dense_storage_agree(
        q in 1u32..=3,
        depth in 2usize..=5,
        p_index in 0usize..5,
        seed in any::<u64>(),
    ) {
        let params = TreeParams::new(q).unwrap();
        let p = exponent(p_index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_sparse_function(&params, depth, 7, &mut rng).unwrap();
        let dense = f.to_dense().unwrap();
        let a = f.tp_norm(p).unwrap();
        let b = dense.tp_norm(p).unwrap();
        prop_assert!(close(a.sup, b.sup));
        for (x, y) in a.per_level.iter().zip(b.per_level.iter()) {
            prop_assert!(close(*x, *y));
        }
        let v = random_ball_vertex(&params, depth, &mut rng).unwrap();
        prop_assert_eq!(f.value(&v).unwrap(), dense.value(&v).unwrap());
    }

    #[test]
    fn vertex_text_round_trips(
        q in 1u32..=3,
        depth in 0usize..=6,
        seed in any::<u64>(),
    ) {
        let params = TreeParams::new(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_ball_vertex(&params, depth, &mut rng).unwrap();
        let parsed = params.parse_vertex(&v.to_string()).unwrap();
        prop_assert_eq!(parsed, v);
    }

    #[test]
    fn counting_rows_always_sum_to_the_level_size(
        q in 1u32..=3,
        depth in 2usize..=5,
        seed in any::<u64>(),
    ) {
        let params = TreeParams::new(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_total_map(&params, depth, &mut rng).unwrap();
        let table = counting_function(&map, depth).unwrap();
        for n in 0..=depth {
            prop_assert_eq!(table.row_sum(n).unwrap(), params.level_size(n).unwrap());
        }
        let row0 = table.row(0).unwrap();
        prop_assert_eq!(row0.len(), 1);
        prop_assert_eq!(*row0.values().next().unwrap(), 1u64);
    }

    #[test]
    fn the_oracle_sits_between_atom_bounds_and_the_series_estimate(
        q in 1u32..=3,
        depth in 2usize..=5,
        p_index in 0usize..4,
        seed in any::<u64>(),
    ) {
        let params = TreeParams::new(q).unwrap();
        let p = exponent(p_index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_total_map(&params, depth, &mut rng).unwrap();
        let table = counting_function(&map, depth).unwrap();
        let oracle = truncated_opnorm_from_counts(&table, p, None).unwrap();
        let lower = lower_bound_from_counts(&table, p, None).unwrap();
        let series = sufficiency_from_counts(&table).unwrap();
        prop_assert!(oracle.value_pth_power + TOL >= lower.value_pth_power);
        prop_assert!(oracle.value_pth_power <= series.upper_estimate_pth_power + TOL);
    }

    #[test]
    fn the_oracle_grows_with_either_truncation_parameter(
        q in 1u32..=3,
        depth in 3usize..=5,
        seed in any::<u64>(),
    ) {
        let params = TreeParams::new(q).unwrap();
        let p = PExponent::finite(2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_total_map(&params, depth, &mut rng).unwrap();
        let shallow = counting_function(&map, depth - 1).unwrap();
        let deep = counting_function(&map, depth).unwrap();
        let a = truncated_opnorm_from_counts(&shallow, p, None).unwrap();
        let b = truncated_opnorm_from_counts(&deep, p, None).unwrap();
        prop_assert!(b.value_pth_power + TOL >= a.value_pth_power);
        let narrow = truncated_opnorm_from_counts(&deep, p, Some(1)).unwrap();
        let wide = truncated_opnorm_from_counts(&deep, p, None).unwrap();
        prop_assert!(wide.value_pth_power + TOL >= narrow.value_pth_power);
    }

    #[test]
    fn doubled_line_operators_never_exceed_the_universal_bound(
        depth in 2usize..=8,
        p_index in 0usize..4,
        seed in any::<u64>(),
    ) {
        let params = TreeParams::new(1).unwrap();
        let p = exponent(p_index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_total_map(&params, depth, &mut rng).unwrap();
        let table = counting_function(&map, depth).unwrap();
        let oracle = truncated_opnorm_from_counts(&table, p, None).unwrap();
        prop_assert!(oracle.value_pth_power <= 2.0 + TOL);
        if !map.root_image().unwrap().is_root() {
            prop_assert_eq!(oracle.value_pth_power, 2.0);
        }
    }

    #[test]
    fn root_fixing_automorphisms_act_as_isometries(
        q in 1u32..=3,
        depth in 2usize..=4,
        p_index in 0usize..5,
        seed in any::<u64>(),
    ) {
        let params = TreeParams::new(q).unwrap();
        let p = exponent(p_index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let aut =
            PartialAutomorphism::shift_shuffled(params, &Vertex::root(), depth, &mut rng)
                .unwrap();
        prop_assert_eq!(automorphism_norm(&aut, p).unwrap(), 1.0);
        let f = random_dense_function(&params, depth, &mut rng).unwrap();
        let image = compose(aut.as_map(), &f, depth).unwrap();
        prop_assert!(close(
            image.tp_norm(p).unwrap().sup,
            f.tp_norm(p).unwrap().sup
        ));
    }

    #[test]
    fn the_parent_map_shifts_level_means_without_changing_the_norm(
        q in 1u32..=3,
        depth in 2usize..=5,
        p_index in 0usize..5,
        seed in any::<u64>(),
    ) {
        let params = TreeParams::new(q).unwrap();
        let p = exponent(p_index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_dense_function(&params, depth, &mut rng).unwrap();
        let image = compose(&SelfMap::parent(params), &f, depth + 1).unwrap();
        let fr = f.tp_norm(p).unwrap();
        let ir = image.tp_norm(p).unwrap();
        prop_assert!(close(ir.per_level[0], fr.per_level[0]));
        prop_assert!(close(ir.per_level[1], fr.per_level[0]));
        for n in 2..=depth + 1 {
            prop_assert!(close(ir.per_level[n], fr.per_level[n - 1]));
        }
        prop_assert!(close(ir.sup, fr.sup));
    }

    #[test]
    fn child_selector_operators_stay_bounded_by_the_root_degree(
        q in 1u32..=3,
        depth in 2usize..=5,
        p_index in 0usize..4,
        seed in any::<u64>(),
    ) {
        let params = TreeParams::new(q).unwrap();
        let p = exponent(p_index);
        let pv = p.finite_value().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_dense_function(&params, depth, &mut rng).unwrap();
        let map = SelfMap::child(params, rng.gen_range(0..q)).unwrap();
        let image = compose(&map, &f, depth - 1).unwrap();
        let ceiling = ((q + 1) as f64).powf(1.0 / pv) * f.tp_norm(p).unwrap().sup;
        prop_assert!(image.tp_norm(p).unwrap().sup <= ceiling * (1.0 + TOL) + TOL);
    }
}

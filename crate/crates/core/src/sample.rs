//! Seeded random vertices, functions, and self-maps for tests and trials.
//!
//! Everything is generic over the RNG, so callers pick the engine and the
//! seed; the same seed always reproduces the same object.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::maps::SelfMap;
use crate::space::TreeFunction;
use crate::tree::{TreeParams, Vertex};

/// Uniformly random vertex at level n.
pub fn random_vertex_at<R: Rng + ?Sized>(
    params: &TreeParams,
    n: usize,
    rng: &mut R,
) -> Result<Vertex> {
    let size = params.level_size(n)?;
    params.vertex_at(n, rng.gen_range(0..size))
}

/// Uniformly random vertex of the ball of the given radius, so deeper
/// levels are hit proportionally to their size.
pub fn random_ball_vertex<R: Rng + ?Sized>(
    params: &TreeParams,
    depth: usize,
    rng: &mut R,
) -> Result<Vertex> {
    let total = params.ball_size(depth)?;
    let mut pick = rng.gen_range(0..total);
    for n in 0..=depth {
        let size = params.level_size(n)?;
        if pick < size {
            return params.vertex_at(n, pick);
        }
        pick -= size;
    }
    unreachable!("the ball size is the sum of its level sizes");
}

fn random_value<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
}

/// Dense function on the ball with independent uniform values in the
/// complex unit square.
pub fn random_dense_function<R: Rng + ?Sized>(
    params: &TreeParams,
    depth: usize,
    rng: &mut R,
) -> Result<TreeFunction> {
    let mut levels = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let size = params.level_size(n)? as usize;
        levels.push((0..size).map(|_| random_value(rng)).collect());
    }
    TreeFunction::dense(*params, levels)
}

/// Sparse function with up to `atoms` distinct support vertices drawn
/// uniformly from the ball. When the request covers most of the ball the
/// whole ball is materialized and truncated instead of rejection-sampled.
pub fn random_sparse_function<R: Rng + ?Sized>(
    params: &TreeParams,
    depth: usize,
    atoms: usize,
    rng: &mut R,
) -> Result<TreeFunction> {
    let total = params.ball_size(depth)?;
    let mut entries: BTreeMap<Vertex, Complex64> = BTreeMap::new();
    if (atoms as u128) * 2 >= total {
        let mut all = params.ball_vertices(depth)?;
        for i in (1..all.len()).rev() {
            all.swap(i, rng.gen_range(0..=i));
        }
        for v in all.into_iter().take(atoms) {
            entries.insert(v, random_value(rng));
        }
    } else {
        while entries.len() < atoms {
            entries.insert(random_ball_vertex(params, depth, rng)?, random_value(rng));
        }
    }
    TreeFunction::sparse(*params, depth, entries)
}

/// Total self-map of the ball with independent uniform images, labeled
/// "random".
pub fn random_total_map<R: Rng + ?Sized>(
    params: &TreeParams,
    depth: usize,
    rng: &mut R,
) -> Result<SelfMap> {
    let mut table = HashMap::new();
    for v in params.ball_vertices(depth)? {
        let image = random_ball_vertex(params, depth, rng)?;
        table.insert(v, image);
    }
    Ok(SelfMap::from_table(*params, depth, table)?.with_label("random"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn same_seed_reproduces_the_same_objects() {
        let params = TreeParams::new(2).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        let fa = random_dense_function(&params, 4, &mut a).unwrap();
        let fb = random_dense_function(&params, 4, &mut b).unwrap();
        for v in params.ball_vertices(4).unwrap() {
            assert_eq!(fa.value(&v).unwrap(), fb.value(&v).unwrap());
        }
        let ma = random_total_map(&params, 3, &mut a).unwrap();
        let mb = random_total_map(&params, 3, &mut b).unwrap();
        for v in params.ball_vertices(3).unwrap() {
            assert_eq!(ma.eval(&v).unwrap(), mb.eval(&v).unwrap());
        }
    }

    #[test]
    fn sampled_vertices_land_where_requested() {
        let params = TreeParams::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 0..=5 {
            assert_eq!(random_vertex_at(&params, n, &mut rng).unwrap().depth(), n);
        }
        for _ in 0..50 {
            let v = random_ball_vertex(&params, 4, &mut rng).unwrap();
            assert!(v.depth() <= 4);
            params.validate_vertex(&v).unwrap();
        }
    }

    #[test]
    fn ball_sampling_prefers_the_boundary_level() {
        let params = TreeParams::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut boundary = 0usize;
        let trials = 2000;
        for _ in 0..trials {
            if random_ball_vertex(&params, 5, &mut rng).unwrap().depth() == 5 {
                boundary += 1;
            }
        }
        let expected = params.level_size(5).unwrap() as f64 / params.ball_size(5).unwrap() as f64;
        let observed = boundary as f64 / trials as f64;
        assert!((observed - expected).abs() < 0.05);
    }

    #[test]
    fn random_maps_are_total_on_the_ball() {
        let params = TreeParams::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let map = random_total_map(&params, 4, &mut rng).unwrap();
        assert_eq!(map.label(), "random");
        assert_eq!(map.coverage_depth(), 4);
        for v in params.ball_vertices(4).unwrap() {
            assert!(map.eval(&v).unwrap().depth() <= 4);
        }
    }

    #[test]
    fn sparse_sampling_honors_the_atom_budget() {
        let params = TreeParams::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_sparse_function(&params, 4, 6, &mut rng).unwrap();
        assert!(f.is_sparse());
        assert_eq!(f.support_entries().unwrap().len(), 6);
        let crowded = random_sparse_function(&params, 2, 10, &mut rng).unwrap();
        assert_eq!(crowded.support_entries().unwrap().len(), 10);
    }
}

//! Seeded generators for grids, values and partitions.
//!
//! Real coordinates are dyadic rationals with small numerators, so sums of a
//! few hundred of them are exact in `f64` and equalities can be asserted
//! without tolerance where the mathematics says they are exact.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{Grid, GridFunction, NetPartition, SubRectangle};
use crate::semigroup::{BoxValue, MetricSemigroup, MultisetValue, Norm, Value, ValueSpace, VectorValue};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A multiple of `1/64` in `[-2, 2]`.
pub fn dyadic<R: Rng>(rng: &mut R) -> f64 {
    rng.random_range(-128i32..=128) as f64 / 64.0
}

pub fn real<R: Rng>(rng: &mut R) -> f64 {
    dyadic(rng)
}

pub fn vector<R: Rng>(rng: &mut R, dim: usize, norm: Norm) -> VectorValue {
    VectorValue::new((0..dim).map(|_| dyadic(rng)).collect(), norm)
}

pub fn boxed<R: Rng>(rng: &mut R, dim: usize) -> BoxValue {
    BoxValue::new(
        (0..dim)
            .map(|_| {
                let lo = dyadic(rng);
                (lo, lo + rng.random_range(0..=64) as f64 / 64.0)
            })
            .collect(),
    )
    .expect("lo <= hi by construction")
}

pub const ATOMS: [&str; 4] = ["a", "b", "c", "d"];

pub fn multiset<R: Rng>(rng: &mut R) -> MultisetValue {
    MultisetValue::from_counts(
        ATOMS
            .iter()
            .map(|a| (a.to_string(), rng.random_range(0..=3u64))),
    )
}

pub fn norm<R: Rng>(rng: &mut R) -> Norm {
    *[Norm::L1, Norm::L2, Norm::Linf].choose(rng).unwrap()
}

pub fn value<R: Rng>(rng: &mut R, space: ValueSpace) -> Value {
    match space {
        ValueSpace::Real => Value::Real(real(rng)),
        ValueSpace::Vector { dim, norm } => Value::Vector(vector(rng, dim, norm)),
        ValueSpace::Box { dim } => Value::Box(boxed(rng, dim)),
        ValueSpace::Multiset => Value::Multiset(multiset(rng)),
    }
}

/// One representative of each value space, with random dimensions and norms.
pub fn spaces<R: Rng>(rng: &mut R) -> [ValueSpace; 4] {
    [
        ValueSpace::Real,
        ValueSpace::Vector {
            dim: rng.random_range(1..=3),
            norm: norm(rng),
        },
        ValueSpace::Box {
            dim: rng.random_range(1..=2),
        },
        ValueSpace::Multiset,
    ]
}

/// A grid of the given shape with increasing dyadic coordinates.
pub fn grid<R: Rng>(rng: &mut R, shape: &[usize]) -> Grid {
    Grid::new(
        shape
            .iter()
            .map(|&m| {
                let mut x = rng.random_range(-4i32..=4) as f64 / 4.0;
                (0..m)
                    .map(|_| {
                        let c = x;
                        x += rng.random_range(1i32..=4) as f64 / 4.0;
                        c
                    })
                    .collect()
            })
            .collect(),
    )
    .expect("increasing by construction")
}

pub fn shape<R: Rng>(rng: &mut R, dims: usize, min_len: usize, max_len: usize) -> Vec<usize> {
    (0..dims).map(|_| rng.random_range(min_len..=max_len)).collect()
}

pub fn function<R: Rng, V: MetricSemigroup>(
    rng: &mut R,
    grid: Grid,
    mut gen: impl FnMut(&mut R) -> V,
) -> GridFunction<V> {
    let values = (0..grid.node_count()).map(|_| gen(rng)).collect();
    GridFunction::new(grid, values).expect("one value per node")
}

pub fn dynamic_function<R: Rng>(rng: &mut R, grid: Grid, space: ValueSpace) -> GridFunction<Value> {
    function(rng, grid, |r| value(r, space))
}

/// A random node.
pub fn node<R: Rng>(rng: &mut R, grid: &Grid) -> Vec<usize> {
    grid.shape().iter().map(|&m| rng.random_range(0..m)).collect()
}

/// Random `x ≤ y`. With `strict`, every axis has `x_i < y_i`.
pub fn ordered_pair<R: Rng>(rng: &mut R, grid: &Grid, strict: bool) -> (Vec<usize>, Vec<usize>) {
    grid.shape()
        .iter()
        .map(|&m| {
            if strict {
                let a = rng.random_range(0..m - 1);
                (a, rng.random_range(a + 1..m))
            } else {
                let a = rng.random_range(0..m);
                (a, rng.random_range(a..m))
            }
        })
        .unzip()
}

pub fn rectangle<R: Rng>(rng: &mut R, grid: &Grid, strict: bool) -> SubRectangle {
    let (lo, hi) = ordered_pair(rng, grid, strict);
    SubRectangle::new(lo, hi).expect("ordered by construction")
}

/// A random net partition of a non-degenerate rectangle of a grid with the
/// given shape: endpoints are kept, interior nodes are kept with
/// probability `1/2`.
pub fn partition<R: Rng>(rng: &mut R, shape: &[usize], rect: &SubRectangle) -> NetPartition {
    let per_axis = (0..shape.len())
        .map(|i| {
            let (lo, hi) = (rect.lo()[i], rect.hi()[i]);
            let mut pts = vec![lo];
            pts.extend((lo + 1..hi).filter(|_| rng.random_bool(0.5)));
            pts.push(hi);
            pts
        })
        .collect();
    NetPartition::new(shape, per_axis).expect("valid by construction")
}

/// Splits a multiset into `k` pieces by assigning each copy of each atom to
/// a uniformly random piece.
pub fn split_multiset<R: Rng>(rng: &mut R, m: &MultisetValue, k: usize) -> Vec<MultisetValue> {
    let mut pieces = vec![Vec::<(String, u64)>::new(); k];
    for (atom, &count) in m.counts() {
        for _ in 0..count {
            pieces[rng.random_range(0..k)].push((atom.clone(), 1));
        }
    }
    pieces.into_iter().map(MultisetValue::from_counts).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::sum;

    #[test]
    fn deterministic_for_a_seed() {
        let a: Vec<f64> = (0..5).map(|_| dyadic(&mut rng(7))).collect();
        let b: Vec<f64> = (0..5).map(|_| dyadic(&mut rng(7))).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn split_preserves_the_total() {
        let mut r = rng(1);
        for _ in 0..20 {
            let m = multiset(&mut r);
            let parts = split_multiset(&mut r, &m, 3);
            let total = sum(&parts).unwrap();
            assert_eq!(total, m);
        }
    }

    #[test]
    fn partitions_cover_the_rectangle() {
        let mut r = rng(2);
        let g = grid(&mut r, &[5, 4]);
        for _ in 0..20 {
            let rect = rectangle(&mut r, &g, true);
            let p = partition(&mut r, &g.shape(), &rect);
            assert_eq!(p.rectangle(), rect);
        }
    }
}
